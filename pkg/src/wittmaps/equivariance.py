"""Brute-force equivariance oracle on finite weight windows.

A bilinear map pi: M x N -> P that preserves weights is a table of scalars
X(x, y) with pi(e_x, e_y) = X(x, y) e_{x+y}.  Equivariance under L_m reads

    X(x, y) cP(m, x+y) = cM(m, x) X(x+m, y) + cN(m, y) X(x, y+m).

A constraint is emitted only when (x, y), (x+m, y) and (x, y+m) all lie in the
window, so nothing outside the window is ever assumed to vanish.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .exact import IntEchelon, to_rational
from .modules import ModuleSpec, frac_part

DEFAULT_GENERATORS = (-2, -1, 1, 2)
STABILITY_GAP = 5


class UnstableDimension(RuntimeError):
    """The nullity changed between the window and the enlarged window."""

    def __init__(self, window: int, nullities: tuple[int, int]):
        super().__init__(f"nullity {nullities[0]} at window {window} but {nullities[1]} at {window + STABILITY_GAP}")
        self.window = window
        self.nullities = nullities


@dataclass
class BilinearTable:
    """Coefficients X(i, j) of a weight-preserving bilinear map, keyed by window offsets."""

    left: ModuleSpec
    right: ModuleSpec
    target: ModuleSpec
    xs: Sequence[int]
    ys: Sequence[int]
    entries: dict[tuple[int, int], Fraction] = field(default_factory=dict)

    def coef(self, i: int, j: int) -> Fraction:
        return self.entries.get((i, j), Fraction(0))

    def support(self) -> set[tuple[int, int]]:
        return {k for k, v in self.entries.items() if v != 0}

    def scaled(self, c) -> BilinearTable:
        c = to_rational(c)
        return BilinearTable(self.left, self.right, self.target, self.xs, self.ys,
                             {k: v * c for k, v in self.entries.items()})


def supports_compatible(left: ModuleSpec, right: ModuleSpec, target: ModuleSpec) -> bool:
    return frac_part(left.coset + right.coset) == target.coset


def tabulate(left: ModuleSpec, right: ModuleSpec, target: ModuleSpec,
             fn: Callable[[Fraction, Fraction], Fraction], xs: Iterable[int], ys: Iterable[int]) -> BilinearTable:
    """Materialize the scalar function fn(x, y) of weights on the given offsets."""
    xs, ys = list(xs), list(ys)
    entries = {}
    for i in xs:
        x = left.weight(i)
        for j in ys:
            v = to_rational(fn(x, right.weight(j)))
            if v != 0:
                entries[(i, j)] = v
    return BilinearTable(left, right, target, xs, ys, entries)


def _constraints(left, right, target, xs, ys, generators):
    """Yield (m, i, j) for every interior constraint."""
    xset, yset = set(xs), set(ys)
    for m in generators:
        for i in xs:
            if i + m not in xset:
                continue
            for j in ys:
                if j + m in yset:
                    yield m, i, j


def check_bilinear(t: BilinearTable, generators: Iterable[int] = DEFAULT_GENERATORS):
    """List of (m, i, j, residual) for every violated interior constraint."""
    if not supports_compatible(t.left, t.right, t.target):
        raise ValueError("target support is not the sum of the source supports")
    M, N, P = t.left, t.right, t.target
    bad = []
    for m, i, j in _constraints(M, N, P, t.xs, t.ys, tuple(generators)):
        x, y = M.weight(i), N.weight(j)
        r = (t.coef(i, j) * P.coef(m, x + y)
             - M.coef(m, x) * t.coef(i + m, j)
             - N.coef(m, y) * t.coef(i, j + m))
        if r != 0:
            bad.append((m, i, j, r))
    return bad


def is_equivariant(t: BilinearTable, generators: Iterable[int] = DEFAULT_GENERATORS) -> bool:
    return not check_bilinear(t, generators)


@dataclass
class SolveResult:
    nullity: int
    stabilized: bool
    window: int
    basis: list[BilinearTable]
    nullity_enlarged: int | None = None

    def to_json(self) -> dict:
        return {
            "nullity": self.nullity,
            "stabilized": self.stabilized,
            "window": self.window,
            "basis": [
                [{"x": i, "y": j, "coef": str(v)} for (i, j), v in sorted(b.entries.items())]
                for b in self.basis
            ],
        }


def _solve_once(M, N, P, xs, ys, generators, mask):
    cols = [(i, j) for i in xs for j in ys if mask is None or mask(i, j)]
    index = {c: k for k, c in enumerate(cols)}
    ech = IntEchelon()
    for m, i, j in _constraints(M, N, P, xs, ys, generators):
        x, y = M.weight(i), N.weight(j)
        row: dict[int, Fraction] = {}
        for key, c in (((i, j), P.coef(m, x + y)), ((i + m, j), -M.coef(m, x)), ((i, j + m), -N.coef(m, y))):
            k = index.get(key)
            if k is not None and c != 0:
                row[k] = row.get(k, 0) + c
        if row:
            ech.add(row)
    vectors = ech.nullspace(len(cols))
    basis = [
        BilinearTable(M, N, P, xs, ys, {cols[k]: v for k, v in enumerate(vec) if v != 0})
        for vec in vectors
    ]
    return basis


def window_range(n: int) -> list[int]:
    return list(range(-n, n + 1))


def solve_window(M: ModuleSpec, N: ModuleSpec, P: ModuleSpec, n: int,
                 generators: Sequence[int] = DEFAULT_GENERATORS, mask=None) -> list[BilinearTable]:
    """Basis of the equivariant tables on the square window of half-width n."""
    if not supports_compatible(M, N, P):
        return []
    xs = window_range(n)
    return _solve_once(M, N, P, xs, xs, tuple(generators), mask)


def solve_bilinear_space(M: ModuleSpec, N: ModuleSpec, P: ModuleSpec, window: int = 15,
                         generators: Sequence[int] = DEFAULT_GENERATORS, mask=None,
                         strict: bool = False) -> SolveResult:
    """Nullity of the window system, compared against the window enlarged by the stability gap."""
    if not set(DEFAULT_GENERATORS) <= set(generators):
        raise ValueError("generators must include -2, -1, 1 and 2")
    basis = solve_window(M, N, P, window, generators, mask)
    bigger = solve_window(M, N, P, window + STABILITY_GAP, generators, mask)
    stable = len(basis) == len(bigger)
    if strict and not stable:
        raise UnstableDimension(window, (len(basis), len(bigger)))
    return SolveResult(len(basis), stable, window, basis, len(bigger))


def degenerate_mask(M: ModuleSpec, N: ModuleSpec):
    """Offsets whose weights lie on the lines x = 0, y = 0 or x + y = 0."""
    def mask(i, j):
        x, y = M.weight(i), N.weight(j)
        return x == 0 or y == 0 or x + y == 0
    return mask


def solve_degenerate_space(M: ModuleSpec, N: ModuleSpec, P: ModuleSpec, window: int = 15,
                           generators: Sequence[int] = DEFAULT_GENERATORS, strict: bool = False) -> SolveResult:
    """Equivariant maps supported on the union of the three lines through the origin."""
    return solve_bilinear_space(M, N, P, window, generators, degenerate_mask(M, N), strict)
