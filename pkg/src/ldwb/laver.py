"""Finite monogenic left-distributive tables on {1, ..., 2^n} and their file formats.

A table of index n is the unique binary operation on {1, ..., 2^n} with
p*1 = p+1 mod 2^n (residue 0 written as 2^n) that is left distributive.  It
is computed from the recursion p*(q+1) = (p*q)*(p+1), filling rows from
p = 2^n down to 1; each row is periodic with a power-of-2 period, and the
period block ends exactly when the value 2^n first appears, so a row is one
block tiled across the 2^n columns.  Completed tables are immutable and safe
for concurrent readers.
"""

from __future__ import annotations

import json
from typing import Mapping

import numpy as np

from .errors import (
    FormatError,
    LimitExceededError,
    MissingAssignmentError,
    ValidationError,
)
from .terms import App, Generator, Leaf, Term

DEFAULT_MAX_N = 14

_MAGIC = b"LAVR"
_VERSION = 1


class LaverTable:
    """Multiplication table with entries[p-1, q-1] = p*q, values in 1..2^n."""

    __slots__ = ("n", "size", "entries", "_zero_based")

    def __init__(self, n: int, entries: np.ndarray):
        self.n = n
        self.size = 1 << n
        if entries.shape != (self.size, self.size):
            raise ValueError(f"expected {self.size}x{self.size} entries, got {entries.shape}")
        entries.setflags(write=False)
        self.entries = entries
        self._zero_based = None

    @property
    def zero_based(self) -> np.ndarray:
        """Entries shifted to 0-based value indices, for vectorized lookups."""
        if self._zero_based is None:
            zb = self.entries.astype(np.intp) - 1
            zb.setflags(write=False)
            self._zero_based = zb
        return self._zero_based

    def value(self, p: int, q: int) -> int:
        if not (1 <= p <= self.size and 1 <= q <= self.size):
            raise ValueError(f"arguments must lie in 1..{self.size}, got ({p}, {q})")
        return int(self.entries[p - 1, q - 1])

    def row(self, p: int) -> list[int]:
        if not 1 <= p <= self.size:
            raise ValueError(f"row index must lie in 1..{self.size}, got {p}")
        return [int(v) for v in self.entries[p - 1]]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, LaverTable)
            and self.n == other.n
            and bool(np.array_equal(self.entries, other.entries))
        )

    def __repr__(self) -> str:
        return f"LaverTable(n={self.n}, size={self.size})"


def build_table(n: int, max_n: int = DEFAULT_MAX_N) -> LaverTable:
    """Build the table of index n; rejects n above max_n (memory guard)."""
    if n < 0:
        raise ValueError(f"table index must be >= 0, got {n}")
    if n > max_n:
        raise LimitExceededError(n, max_n)
    N = 1 << n
    entries = np.zeros((N, N), dtype=np.uint32)
    entries[N - 1] = np.arange(1, N + 1, dtype=np.uint32)
    for p in range(N - 1, 0, -1):
        # Row p needs rows above it only: p*q > p for all q while p < 2^n.
        v = p + 1
        block = [v]
        while v != N:
            v = int(entries[v - 1, p])  # (p*q)*(p+1): row p*q, column p+1
            block.append(v)
        period = len(block)
        assert N % period == 0, "row period must divide the table size"
        entries[p - 1] = np.tile(np.asarray(block, dtype=np.uint32), N // period)
    return LaverTable(n, entries)


def eval_term(table: LaverTable, t: Term, assignment: Mapping[Generator, int]) -> int:
    """Bottom-up evaluation of t, replacing the term operation with the table's."""
    N = table.size
    entries = table.entries
    for gen, val in assignment.items():
        if not 1 <= val <= N:
            raise ValueError(f"assignment for {gen.name!r} must lie in 1..{N}, got {val}")
    stack: list[tuple[Term, bool]] = [(t, False)]
    vals: list[int] = []
    while stack:
        node, ready = stack.pop()
        if isinstance(node, Leaf):
            try:
                vals.append(assignment[node.gen])
            except KeyError:
                raise MissingAssignmentError(node.gen.name) from None
        elif ready:
            b = vals.pop()
            a = vals.pop()
            vals.append(int(entries[a - 1, b - 1]))
        else:
            assert isinstance(node, App)
            stack.append((node, True))
            stack.append((node.right, False))
            stack.append((node.left, False))
    return vals[0]


def monogenic_profile(table: LaverTable, t: Term) -> np.ndarray:
    """Evaluate t at every base element at once, all generators sent to the base.

    Returns a length-2^n vector whose (b-1)-th entry is the value of t when
    every leaf is assigned b.  Each such assignment factors through a
    homomorphism into the table, so the profile is invariant under the LD
    congruence and any profile mismatch refutes equivalence.
    """
    T0 = table.zero_based
    leafvec = np.arange(table.size, dtype=np.intp)
    stack: list[tuple[Term, bool]] = [(t, False)]
    vals: list[np.ndarray] = []
    while stack:
        node, ready = stack.pop()
        if isinstance(node, Leaf):
            vals.append(leafvec)
        elif ready:
            b = vals.pop()
            a = vals.pop()
            vals.append(T0[a, b])
        else:
            assert isinstance(node, App)
            stack.append((node, True))
            stack.append((node.right, False))
            stack.append((node.left, False))
    return vals[0] + 1


def row_period(table: LaverTable, p: int) -> int:
    """Least power-of-2 period of row p (it always divides 2^n)."""
    if not 1 <= p <= table.size:
        raise ValueError(f"row index must lie in 1..{table.size}, got {p}")
    row = table.entries[p - 1]
    N = table.size
    period = 1
    while period < N:
        if bool(np.all(row.reshape(N // period, period) == row[:period])):
            return period
        period *= 2
    return N


def verify_ld_exhaustive(table: LaverTable) -> bool:
    """Check p*(q*r) == (p*q)*(p*r) for all 2^(3n) triples."""
    T0 = table.zero_based
    for p in range(table.size):
        rowp = T0[p]
        lhs = rowp[T0]  # lhs[q, r] = p*(q*r), as 0-based index
        rhs = T0[rowp[:, None], rowp[None, :]]  # (p*q)*(p*r)
        if not np.array_equal(lhs, rhs):
            return False
    return True


def verify_ld_sampled(table: LaverTable, samples: int = 1_000_000, seed: int = 0) -> bool:
    """Check the LD law on `samples` uniformly drawn triples."""
    rng = np.random.default_rng(seed)
    T0 = table.zero_based
    p, q, r = rng.integers(0, table.size, size=(3, samples))
    lhs = T0[p, T0[q, r]]
    rhs = T0[T0[p, q], T0[p, r]]
    return bool(np.array_equal(lhs, rhs))


def check_quotient_homomorphism(bigger: LaverTable, smaller: LaverTable) -> bool:
    """Check that reduction mod 2^n maps the index-(n+1) table onto the index-n one.

    The reduction sends value v to ((v-1) mod 2^n) + 1, keeping the 1-indexed
    convention with representative 2^n for residue 0.
    """
    if bigger.n != smaller.n + 1:
        raise ValueError(f"need consecutive indices, got {bigger.n} and {smaller.n}")
    m = smaller.size
    proj = (bigger.entries.astype(np.intp) - 1) % m  # 0-based projected products
    args = (np.arange(bigger.size, dtype=np.intp)) % m
    S0 = smaller.zero_based
    rhs = S0[args[:, None], args[None, :]]
    return bool(np.array_equal(proj, rhs))


def save_table(table: LaverTable, path: str) -> None:
    """Write magic, version byte, u8 index, then row-major u32 little-endian entries."""
    payload = table.entries.astype("<u4").tobytes()
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(bytes([_VERSION, table.n]))
        fh.write(payload)


def load_table(path: str, verify_ld: bool = False) -> LaverTable:
    """Load a saved table, re-validating the successor column.

    Full LD re-verification is optional behind verify_ld (quadratic tables make
    it expensive at large n).
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 6:
        raise FormatError(f"file too short ({len(raw)} bytes)")
    if raw[:4] != _MAGIC:
        raise FormatError(f"bad magic {raw[:4]!r}")
    if raw[4] != _VERSION:
        raise FormatError(f"unsupported version {raw[4]}")
    n = raw[5]
    N = 1 << n
    expected = 6 + 4 * N * N
    if len(raw) != expected:
        raise FormatError(f"expected {expected} bytes for n={n}, got {len(raw)}")
    entries = np.frombuffer(raw, dtype="<u4", offset=6).reshape(N, N).astype(np.uint32)
    _validate_entries(n, entries)
    table = LaverTable(n, entries)
    if verify_ld and not verify_ld_exhaustive(table):
        raise ValidationError("left distributivity fails for the loaded entries")
    return table


def _validate_entries(n: int, entries: np.ndarray) -> None:
    N = 1 << n
    if entries.min(initial=1) < 1 or entries.max(initial=1) > N:
        raise ValidationError(f"entries out of range 1..{N}")
    succ = entries[:, 0]
    want = np.concatenate([np.arange(2, N + 1, dtype=np.uint32), [np.uint32(1)]])
    if not np.array_equal(succ, want):
        bad = int(np.argmax(succ != want)) + 1
        raise ValidationError(
            f"successor column violated at row {bad}: {int(succ[bad - 1])} != {int(want[bad - 1])}"
        )


def table_to_json_obj(table: LaverTable) -> dict:
    return {"n": table.n, "rows": table.entries.tolist()}


def table_from_json_obj(obj: dict) -> LaverTable:
    try:
        n = int(obj["n"])
        rows = obj["rows"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed table object: {exc}") from None
    N = 1 << n
    arr = np.asarray(rows, dtype=np.int64)
    if arr.shape != (N, N):
        raise FormatError(f"expected {N}x{N} rows for n={n}, got shape {arr.shape}")
    entries = arr.astype(np.uint32)
    _validate_entries(n, entries)
    return LaverTable(n, entries)


def dump_table_json(table: LaverTable, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(table_to_json_obj(table), fh)
        fh.write("\n")
