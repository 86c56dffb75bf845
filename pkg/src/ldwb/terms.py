"""Application terms over a generator signature: structure, parsing, printing.

Terms are immutable binary trees whose leaves carry generators.  Leaf count,
extreme leaves and a structural hash are precomputed at construction so the
hot paths of the search engine stay O(1) per node.  Instances may share
subterms freely; equality is structural, never identity-based.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import TermSyntaxError, TermTooLargeError, UnknownGeneratorError

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")

DEFAULT_MAX_TERM_SIZE = 64


@dataclass(frozen=True, slots=True)
class Generator:
    """A named generator with a 1-based index."""

    index: int
    name: str

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError(f"generator index must be >= 1, got {self.index}")
        if not NAME_RE.fullmatch(self.name):
            raise ValueError(
                f"generator name {self.name!r} does not match [A-Za-z][A-Za-z0-9_]*"
            )


class Signature:
    """Ordered, duplicate-free list of generators."""

    __slots__ = ("generators", "_by_name")

    def __init__(self, generators: Sequence[Generator]):
        gens = tuple(generators)
        if not gens:
            raise ValueError("signature needs at least one generator")
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        if len({g.index for g in gens}) != len(gens):
            raise ValueError("duplicate generator indices")
        self.generators = gens
        self._by_name = {g.name: g for g in gens}

    @classmethod
    def of_names(cls, *names: str) -> "Signature":
        return cls(tuple(Generator(i + 1, nm) for i, nm in enumerate(names)))

    def by_name(self, name: str) -> Generator | None:
        return self._by_name.get(name)

    def __iter__(self) -> Iterator[Generator]:
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def __contains__(self, gen: object) -> bool:
        return isinstance(gen, Generator) and self._by_name.get(gen.name) == gen

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Signature) and self.generators == other.generators

    def __hash__(self) -> int:
        return hash(self.generators)

    def __repr__(self) -> str:
        return f"Signature({', '.join(g.name for g in self.generators)})"


class Term:
    """Base class: a term is either a Leaf or an App."""

    __slots__ = ()

    # Populated by subclasses.
    size: int
    leftmost: Generator
    rightmost: Generator

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Term):
            return NotImplemented
        return _terms_equal(self, other)

    def __hash__(self) -> int:
        return self._hash  # type: ignore[attr-defined]

    def __repr__(self) -> str:
        return f"Term[{render_term(self)}]"


class Leaf(Term):
    __slots__ = ("gen", "size", "leftmost", "rightmost", "_hash")

    def __init__(self, gen: Generator):
        self.gen = gen
        self.size = 1
        self.leftmost = gen
        self.rightmost = gen
        self._hash = hash((Leaf, gen.index, gen.name))


class App(Term):
    __slots__ = ("left", "right", "size", "leftmost", "rightmost", "_hash")

    def __init__(self, left: Term, right: Term):
        self.left = left
        self.right = right
        self.size = left.size + right.size
        self.leftmost = left.leftmost
        self.rightmost = right.rightmost
        self._hash = hash((App, left._hash, right._hash))  # type: ignore[attr-defined]


def _terms_equal(a: Term, b: Term) -> bool:
    # Iterative: right spines can be deeper than the interpreter stack allows.
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x is y:
            continue
        if x._hash != y._hash or type(x) is not type(y):  # type: ignore[attr-defined]
            return False
        if isinstance(x, Leaf):
            if x.gen != y.gen:  # type: ignore[union-attr]
                return False
        else:
            stack.append((x.left, y.left))  # type: ignore[union-attr]
            stack.append((x.right, y.right))  # type: ignore[union-attr]
    return True


def size(t: Term) -> int:
    """Number of leaves of t."""
    return t.size


def leftmost_leaf(t: Term) -> Generator:
    """Generator at the extreme-left leaf position."""
    return t.leftmost


def rightmost_leaf(t: Term) -> Generator:
    """Generator at the extreme-right leaf position."""
    return t.rightmost


def generators_of(t: Term) -> tuple[Generator, ...]:
    """Distinct generators occurring in t, in first-occurrence order."""
    seen: dict[Generator, None] = {}
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            seen.setdefault(node.gen)
        else:
            stack.append(node.right)  # type: ignore[union-attr]
            stack.append(node.left)  # type: ignore[union-attr]
    return tuple(seen)


def render_term(t: Term) -> str:
    """Fully parenthesized canonical text; inverse of parse_term."""
    parts: list[str] = []
    stack: list[object] = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, str):
            parts.append(node)
        elif isinstance(node, Leaf):
            parts.append(node.gen.name)
        else:
            assert isinstance(node, App)
            stack.append(")")
            stack.append(node.right)
            stack.append("*")
            stack.append(node.left)
            stack.append("(")
    return "".join(parts)


_TOKEN_NAMES = {"*": "'*'", "(": "'('", ")": "')'"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Tokens are (kind, value, position); kinds: name, star, lparen, rparen, end."""
    toks: list[tuple[str, str, int]] = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "*":
            toks.append(("star", "*", i))
            i += 1
        elif c == "(":
            toks.append(("lparen", "(", i))
            i += 1
        elif c == ")":
            toks.append(("rparen", ")", i))
            i += 1
        else:
            m = NAME_RE.match(text, i)
            if not m:
                raise TermSyntaxError(i, "generator name, '*', '(' or ')'", repr(c))
            toks.append(("name", m.group(), i))
            i = m.end()
    toks.append(("end", "", n))
    return toks


def parse_term(text: str, sig: Signature, max_size: int = DEFAULT_MAX_TERM_SIZE) -> Term:
    """Parse term text over sig.

    Grammar: term := atom | '(' term '*' term ')' | term '*' term, with bare
    '*' chains associating to the left; atom := generator name in sig.
    Whitespace between tokens is insignificant.
    """
    toks = _tokenize(text)

    def parse_chain(i: int) -> tuple[Term, int]:
        t, i = parse_atom(i)
        while toks[i][0] == "star":
            u, i = parse_atom(i + 1)
            t = App(t, u)
        return t, i

    def parse_atom(i: int) -> tuple[Term, int]:
        kind, value, pos = toks[i]
        if kind == "lparen":
            t, i = parse_chain(i + 1)
            kind, value, pos = toks[i]
            if kind != "rparen":
                raise TermSyntaxError(pos, "')'", _describe(kind, value))
            return t, i + 1
        if kind == "name":
            gen = sig.by_name(value)
            if gen is None:
                raise UnknownGeneratorError(value, pos)
            return Leaf(gen), i + 1
        raise TermSyntaxError(pos, "generator name or '('", _describe(kind, value))

    term, i = parse_chain(0)
    kind, value, pos = toks[i]
    if kind != "end":
        raise TermSyntaxError(pos, "'*' or end of input", _describe(kind, value))
    if term.size > max_size:
        raise TermTooLargeError(term.size, max_size)
    return term


def _describe(kind: str, value: str) -> str:
    if kind == "end":
        return "end of input"
    return _TOKEN_NAMES.get(value, repr(value))
