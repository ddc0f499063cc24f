"""Exact rational scalars, sparse multivariate polynomials and rational linear algebra.

Polynomials live in the five variables d1, d2, g, x, y (in that order).  Terms
are ordered graded-lexicographically with d1 > d2 > g > x > y.  Internally a
monomial is packed into one integer: the total degree sits in the high bits
and each exponent gets an 8-bit field, so packed-integer order is exactly the
graded-lex order and monomial multiplication is integer addition.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

Rational = Fraction

VARS = ("d1", "d2", "g", "x", "y")
NVARS = len(VARS)
_FIELD = 8
_MASK = (1 << _FIELD) - 1
_DEG_SHIFT = _FIELD * NVARS
_SHIFTS = tuple(_FIELD * (NVARS - 1 - i) for i in range(NVARS))


class DivisionFailure(ArithmeticError):
    """Raised when an exact polynomial division leaves a remainder."""


def to_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact scalar: {value!r}")


def rational_str(value) -> str:
    return str(Fraction(value))


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def pack(exps: Sequence[int]) -> int:
    if len(exps) != NVARS:
        raise ValueError("a monomial needs exactly five exponents")
    key = 0
    for e, s in zip(exps, _SHIFTS):
        if e < 0 or e > _MASK:
            raise ValueError(f"exponent out of range: {e}")
        key |= e << s
    return key | (sum(exps) << _DEG_SHIFT)


def unpack(key: int) -> tuple[int, ...]:
    return tuple((key >> s) & _MASK for s in _SHIFTS)


def _divides(small: int, big: int) -> bool:
    for s in _SHIFTS:
        if (small >> s) & _MASK > (big >> s) & _MASK:
            return False
    return True


class MultiPoly:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping | None = None):
        t: dict[int, object] = {}
        if terms:
            for exps, c in terms.items():
                c = to_rational(c) if not isinstance(c, (int, Fraction)) else c
                if c == 0:
                    continue
                k = exps if isinstance(exps, int) else pack(exps)
                t[k] = _norm(t.get(k, 0) + c)
                if t[k] == 0:
                    del t[k]
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, t: dict) -> MultiPoly:
        p = cls.__new__(cls)
        p._t = t
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> MultiPoly:
        c = _norm(to_rational(c))
        return cls._raw({0: c} if c != 0 else {})

    @classmethod
    def var(cls, name: str) -> MultiPoly:
        i = VARS.index(name)
        exps = [0] * NVARS
        exps[i] = 1
        return cls._raw({pack(exps): 1})

    # -- basic protocol -------------------------------------------------
    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def __len__(self) -> int:
        return len(self._t)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            try:
                other = MultiPoly.const(other)
            except TypeError:
                return NotImplemented
        return self._t == other._t

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in decreasing monomial order."""
        return [(unpack(k), Fraction(self._t[k])) for k in sorted(self._t, reverse=True)]

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return Fraction(self._t.get(pack(exps), 0))

    def leading(self) -> tuple[tuple[int, ...], Fraction]:
        if not self._t:
            raise ValueError("zero polynomial has no leading term")
        k = max(self._t)
        return unpack(k), Fraction(self._t[k])

    def total_degree(self) -> int:
        return max(k >> _DEG_SHIFT for k in self._t) if self._t else -1

    def degree_in(self, name: str) -> int:
        s = _SHIFTS[VARS.index(name)]
        return max(((k >> s) & _MASK for k in self._t), default=-1)

    def variables(self) -> set[str]:
        used = set()
        for k in self._t:
            for name, s in zip(VARS, _SHIFTS):
                if (k >> s) & _MASK:
                    used.add(name)
        return used

    # -- arithmetic -----------------------------------------------------
    @staticmethod
    def _coerce(other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            return other
        return MultiPoly.const(other)

    def __add__(self, other) -> MultiPoly:
        other = self._coerce(other)
        t = dict(self._t)
        for k, c in other._t.items():
            v = t.get(k, 0) + c
            if v == 0:
                t.pop(k, None)
            else:
                t[k] = _norm(v)
        return MultiPoly._raw(t)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly._raw({k: -c for k, c in self._t.items()})

    def __sub__(self, other) -> MultiPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> MultiPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> MultiPoly:
        if not isinstance(other, MultiPoly):
            c = to_rational(other)
            if c == 0:
                return MultiPoly()
            c = _norm(c)
            return MultiPoly._raw({k: _norm(v * c) for k, v in self._t.items()})
        a, b = self._t, other._t
        if len(a) < len(b):
            a, b = b, a
        t: dict[int, object] = {}
        get = t.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                t[k] = get(k, 0) + ca * cb
        return MultiPoly._raw({k: _norm(v) for k, v in t.items() if v != 0})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> MultiPoly:
        if n < 0:
            raise ValueError("negative power")
        result = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> MultiPoly:
        return self * to_rational(c)

    def divide_exact(self, divisor: MultiPoly) -> MultiPoly:
        """Return q with self == q * divisor, or raise DivisionFailure."""
        divisor = self._coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead = max(divisor._t)
        lead_c = Fraction(divisor._t[lead])
        rest = [(k, c) for k, c in divisor._t.items() if k != lead]
        rem = dict(self._t)
        quot: dict[int, object] = {}
        while rem:
            k = max(rem)
            if k < lead or not _divides(lead, k):
                raise DivisionFailure("remainder is nonzero")
            qk = k - lead
            qc = _norm(Fraction(rem.pop(k)) / lead_c)
            quot[qk] = qc
            for dk, dc in rest:
                kk = qk + dk
                v = rem.get(kk, 0) - qc * dc
                if v == 0:
                    rem.pop(kk, None)
                else:
                    rem[kk] = v
        return MultiPoly._raw(quot)

    def divides(self, other: MultiPoly) -> bool:
        try:
            other.divide_exact(self)
        except DivisionFailure:
            return False
        return True

    # -- evaluation and substitution -----------------------------------
    def eval(self, point: Mapping[str, object] | Sequence) -> Fraction:
        """Evaluate at a full point, given as a mapping by name or a 5-sequence."""
        if isinstance(point, Mapping):
            vals = [to_rational(point[n]) if n in point else None for n in VARS]
        else:
            vals = [to_rational(v) for v in point]
        powers: list[dict[int, Fraction]] = [{0: Fraction(1)} for _ in VARS]
        total = Fraction(0)
        for k, c in self._t.items():
            term = Fraction(c)
            for i, s in enumerate(_SHIFTS):
                e = (k >> s) & _MASK
                if e:
                    if vals[i] is None:
                        raise KeyError(f"no value for {VARS[i]}")
                    cache = powers[i]
                    if e not in cache:
                        cache[e] = vals[i] ** e
                    term *= cache[e]
            total += term
        return total

    def subs(self, mapping: Mapping[str, object]) -> MultiPoly:
        """Substitute scalars or polynomials for some variables."""
        images: list[MultiPoly | None] = [None] * NVARS
        for name, v in mapping.items():
            images[VARS.index(name)] = self._coerce(v)
        caches: list[dict[int, MultiPoly]] = [{0: MultiPoly.const(1)} for _ in VARS]
        out: dict[int, object] = {}
        for k, c in self._t.items():
            kept = [0] * NVARS
            factor = None
            for i, s in enumerate(_SHIFTS):
                e = (k >> s) & _MASK
                if not e:
                    continue
                if images[i] is None:
                    kept[i] = e
                    continue
                cache = caches[i]
                if e not in cache:
                    cache[e] = images[i] ** e
                factor = cache[e] if factor is None else factor * cache[e]
            mono = pack(kept)
            if factor is None:
                v = out.get(mono, 0) + c
                out[mono] = v
            else:
                for fk, fc in factor._t.items():
                    kk = fk + mono
                    out[kk] = out.get(kk, 0) + c * fc
        return MultiPoly._raw({k: _norm(v) for k, v in out.items() if v != 0})

    def coeffs_in_xy(self) -> dict[tuple[int, int], MultiPoly]:
        """Split as sum of c_ij(d1, d2, g) x^i y^j and return {(i, j): c_ij}."""
        sx, sy = _SHIFTS[3], _SHIFTS[4]
        parts: dict[tuple[int, int], dict[int, object]] = {}
        for k, c in self._t.items():
            i = (k >> sx) & _MASK
            j = (k >> sy) & _MASK
            rest = k - (i << sx) - (j << sy) - ((i + j) << _DEG_SHIFT)
            parts.setdefault((i, j), {})[rest] = c
        return {ij: MultiPoly._raw(t) for ij, t in parts.items()}

    # -- serialization --------------------------------------------------
    def to_json(self) -> list[dict]:
        return [{"exp": list(e), "coef": rational_str(c)} for e, c in self.terms()]

    @classmethod
    def from_json(cls, data: Iterable[Mapping]) -> MultiPoly:
        terms: dict[tuple[int, ...], Fraction] = {}
        for item in data:
            e = tuple(int(v) for v in item["exp"])
            terms[e] = terms.get(e, Fraction(0)) + to_rational(str(item["coef"]))
        return cls(terms)

    def __repr__(self) -> str:
        return f"MultiPoly({self})"

    def __str__(self) -> str:
        if not self._t:
            return "0"
        out = []
        for exps, c in self.terms():
            mono = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(VARS, exps) if e
            )
            if not mono:
                piece = str(c)
            elif c == 1:
                piece = mono
            elif c == -1:
                piece = "-" + mono
            else:
                piece = f"{c}*{mono}"
            out.append(piece)
        return " + ".join(out).replace("+ -", "- ")


def poly_vars() -> tuple[MultiPoly, ...]:
    return tuple(MultiPoly.var(n) for n in VARS)


# ---------------------------------------------------------------------------
# Rational linear algebra


class RatMatrix:
    """Dense matrix of Fractions (row major)."""

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = [[to_rational(v) for v in r] for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged matrix")

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def sparse_rows(self) -> list[dict[int, Fraction]]:
        return [{j: v for j, v in enumerate(r) if v != 0} for r in self.rows]

    def apply(self, vec: Sequence) -> list[Fraction]:
        return [sum((a * to_rational(b) for a, b in zip(r, vec)), Fraction(0)) for r in self.rows]


class Echelon:
    """Row echelon form built incrementally from sparse rows.

    Each stored row is scaled so its pivot entry is 1 and all of its other
    entries sit in columns greater than the pivot.
    """

    def __init__(self):
        self.pivots: dict[int, dict[int, Fraction]] = {}

    def reduce(self, row: Mapping[int, object]) -> dict[int, Fraction]:
        r = {c: Fraction(v) for c, v in row.items() if v != 0}
        pivots = self.pivots
        while True:
            hits = [c for c in r if c in pivots]
            if not hits:
                return r
            c = min(hits)
            f = r[c]
            for cc, vv in pivots[c].items():
                v = r.get(cc, 0) - f * vv
                if v == 0:
                    r.pop(cc, None)
                else:
                    r[cc] = v

    def add(self, row: Mapping[int, object]) -> bool:
        """Insert a row; return True when it raised the rank."""
        r = self.reduce(row)
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        self.pivots[p] = {c: v * inv for c, v in r.items()}
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def nullspace(self, ncols: int) -> list[list[Fraction]]:
        free = [c for c in range(ncols) if c not in self.pivots]
        order = sorted(self.pivots, reverse=True)
        basis = []
        for f in free:
            sol = {f: Fraction(1)}
            for p in order:
                s = Fraction(0)
                for c, v in self.pivots[p].items():
                    if c != p and c in sol:
                        s += v * sol[c]
                if s != 0:
                    sol[p] = -s
            basis.append([sol.get(c, Fraction(0)) for c in range(ncols)])
        return basis


class IntEchelon:
    """Fraction-free variant of Echelon for rows that can be scaled to integers.

    Rows are kept primitive (content one) so entries stay small; the pivot
    entry is stored alongside each row instead of being normalized to one.
    """

    def __init__(self):
        self.pivots: dict[int, dict[int, int]] = {}

    @staticmethod
    def integral(row: Mapping[int, object]) -> dict[int, int]:
        den = 1
        for v in row.values():
            if isinstance(v, Fraction):
                den = den * v.denominator // gcd(den, v.denominator)
        return {c: int(v * den) for c, v in row.items() if v != 0}

    def reduce(self, row: Mapping[int, object]) -> dict[int, int]:
        r = self.integral(row)
        pivots = self.pivots
        while True:
            hits = [c for c in r if c in pivots]
            if not hits:
                break
            c = min(hits)
            prow = pivots[c]
            pv, f = prow[c], r[c]
            g = gcd(pv, f)
            pv, f = pv // g, f // g
            if pv != 1:
                for cc in r:
                    r[cc] *= pv
            for cc, vv in prow.items():
                v = r.get(cc, 0) - f * vv
                if v == 0:
                    r.pop(cc, None)
                else:
                    r[cc] = v
        if r:
            g = 0
            for v in r.values():
                g = gcd(g, v)
                if g == 1:
                    break
            if g > 1:
                r = {c: v // g for c, v in r.items()}
        return r

    def add(self, row: Mapping[int, object]) -> bool:
        r = self.reduce(row)
        if not r:
            return False
        self.pivots[min(r)] = r
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def nullspace(self, ncols: int) -> list[list[Fraction]]:
        free = [c for c in range(ncols) if c not in self.pivots]
        order = sorted(self.pivots, reverse=True)
        basis = []
        for f in free:
            sol = {f: Fraction(1)}
            for p in order:
                row = self.pivots[p]
                s = Fraction(0)
                for c, v in row.items():
                    if c != p and c in sol:
                        s += v * sol[c]
                if s != 0:
                    sol[p] = -s / row[p]
            basis.append([sol.get(c, Fraction(0)) for c in range(ncols)])
        return basis


def nullspace_sparse(rows: Iterable[Mapping[int, object]], ncols: int) -> list[list[Fraction]]:
    ech = Echelon()
    for r in rows:
        ech.add(r)
    return ech.nullspace(ncols)


def rank_sparse(rows: Iterable[Mapping[int, object]]) -> int:
    ech = Echelon()
    for r in rows:
        ech.add(r)
    return ech.rank


def nullspace(m: RatMatrix) -> list[list[Fraction]]:
    """Basis of {v : m v = 0}; each basis vector has a 1 at its free column."""
    return nullspace_sparse(m.sparse_rows(), m.ncols)


def rank(m: RatMatrix) -> int:
    return rank_sparse(m.sparse_rows())
