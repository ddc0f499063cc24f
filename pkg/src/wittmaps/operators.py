"""Bilinear operators between class S modules and a small composition language.

An operator is a triple of module specs plus a scalar function of the two
input weights; ``table`` materializes it on a window.  Expressions such as
``d . B[1,-2] . (d x id)`` compose a bilinear core with weight-preserving
linear maps on the output and on either input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .equivariance import BilinearTable, tabulate
from .exact import to_rational
from .modules import ModuleSpec, abar_c, frac_part, mod_a, mod_b, omega

Coef = Callable[[Fraction, Fraction], Fraction]
ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Operator:
    name: str
    left: ModuleSpec
    right: ModuleSpec
    target: ModuleSpec
    fn: Coef

    def __call__(self, x, y) -> Fraction:
        return to_rational(self.fn(to_rational(x), to_rational(y)))

    def table(self, xs: Iterable[int], ys: Iterable[int] | None = None) -> BilinearTable:
        xs = list(xs)
        return tabulate(self.left, self.right, self.target, self.fn, xs, xs if ys is None else list(ys))

    def window(self, n: int) -> BilinearTable:
        return self.table(range(-n, n + 1))

    def cone(self, start: int, depth: int) -> BilinearTable:
        return self.table(range(start, start + depth + 1))


def _q(v) -> Fraction:
    return to_rational(v)


# -- tensor density operators --------------------------------------------

def poisson(d1, d2, u=0, v=0) -> Operator:
    d1, d2, u, v = map(_q, (d1, d2, u, v))
    return Operator(f"P[{d1},{d2}]", omega(d1, u), omega(d2, v), omega(d1 + d2, u + v),
                    lambda x, y: ONE)


def bracket(d1, d2, u=0, v=0) -> Operator:
    d1, d2, u, v = map(_q, (d1, d2, u, v))
    return Operator(f"B[{d1},{d2}]", omega(d1, u), omega(d2, v), omega(d1 + d2 + 1, u + v),
                    lambda x, y: d2 * x - d1 * y)


def grozman(u=0, v=0) -> Operator:
    u, v = _q(u), _q(v)
    third = Fraction(-2, 3)
    return Operator("G", omega(third, u), omega(third, v), omega(Fraction(5, 3), u + v),
                    lambda x, y: (x - y) * (2 * x + y) * (x + 2 * y))


def theta(a, b) -> Operator:
    """A_xi x A_xi -> B_xi, supported on the three lines through the origin."""
    a, b = _q(a), _q(b)

    def fn(x, y):
        if x == 0 and y != 0:
            return 1 / y
        if y == 0 and x != 0:
            return -1 / x
        if x + y == 0 and x != 0:
            return 1 / y
        return ZERO

    return Operator("Theta", mod_a(a, b), mod_a(a, b), mod_b(a, b), fn)


def extended_bracket(d1, d2, u, v, a, b) -> Operator:
    """The bracket with Omega^0_0 replaced by A_xi on an input and Omega^1_0 by B_xi on the output."""
    d1, d2, u, v, a, b = map(_q, (d1, d2, u, v, a, b))
    left_a = d1 == 0 and frac_part(u) == 0
    right_a = d2 == 0 and frac_part(v) == 0
    target_b = d1 + d2 == 0 and frac_part(u + v) == 0
    name = f"Bxi[{d1},{d2}]"
    if left_a and right_a:
        th = theta(a, b).fn
        return Operator(name, mod_a(a, b), mod_a(a, b), mod_b(a, b), lambda x, y: -a * th(x, y))
    if left_a:
        delta = d2
        return Operator(name, mod_a(a, b), omega(d2, v), omega(d2 + 1, v),
                        lambda n, y: delta if n != 0 else b * delta - a * y)
    if right_a:
        delta = d1
        return Operator(name, omega(d1, u), mod_a(a, b), omega(d1 + 1, u),
                        lambda x, n: -delta if n != 0 else -(b * delta - a * x))
    if target_b:
        delta = d1
        return Operator(name, omega(d1, u), omega(d2, v), mod_b(a, b),
                        lambda x, y: -delta if x + y != 0 else b * delta - a * x)
    op = bracket(d1, d2, u, v)
    return Operator(name, op.left, op.right, op.target, op.fn)


def _eta_coefficients(xi1, xi2, xi3) -> tuple[Fraction, Fraction, Fraction]:
    """(x, y, z) spanning x xi1 + y xi2 = z xi3, normalized by z = 1 when possible."""
    from .exact import nullspace_sparse

    (a1, b1), (a2, b2), (a3, b3) = [tuple(map(_q, p)) for p in (xi1, xi2, xi3)]
    rows = [{0: a1, 1: a2, 2: -a3}, {0: b1, 1: b2, 2: -b3}]
    basis = nullspace_sparse(rows, 3)
    if len(basis) != 1:
        raise ValueError("eta needs the three parameters not all equal")
    vec = basis[0]
    pivot = 2 if vec[2] != 0 else next(i for i, c in enumerate(vec) if c != 0)
    return tuple(c / vec[pivot] for c in vec)  # type: ignore[return-value]


def eta(xi1, xi2, xi3) -> Operator:
    """y Res(m) n + x m Res(n) from A_xi1 x A_xi2 to A_xi3, with z on (e_0, e_0)."""
    x_c, y_c, z_c = _eta_coefficients(xi1, xi2, xi3)

    def fn(x, y):
        if x == 0 and y == 0:
            return z_c
        if x == 0:
            return y_c
        if y == 0:
            return x_c
        return ZERO

    return Operator("eta", mod_a(*xi1), mod_a(*xi2), mod_a(*xi3), fn)


def eta_t(a, b, t) -> Operator:
    """Res(m) n + t Res(n) m on A_xi."""
    t = _q(t)

    def fn(x, y):
        if x == 0 and y == 0:
            return 1 + t
        if x == 0:
            return ONE
        if y == 0:
            return t
        return ZERO

    return Operator(f"etat[{t}]", mod_a(a, b), mod_a(a, b), mod_a(a, b), fn)


def trivial(xi1, xi2, xi3, c=1) -> Operator:
    """(m, n) -> c Res(m) Res(n) e_0 into B_xi3."""
    c = _q(c)
    return Operator("triv", mod_a(*xi1), mod_a(*xi2), mod_b(*xi3),
                    lambda x, y: c if x == 0 and y == 0 else ZERO)


def res_times(a, b, module: ModuleSpec) -> Operator:
    """(m, n) -> Res(m) n from A_xi x M to M."""
    return Operator("Res.id", mod_a(a, b), module, module, lambda x, y: ONE if x == 0 else ZERO)


def res_almost_iso(xi1, xi2, xi3) -> Operator:
    """(m, n) -> Res(m) psi(n) from A_xi1 x B_xi2 to A_xi3, psi(e_n) = n e_n."""
    return Operator("Res.psi", mod_a(*xi1), mod_b(*xi2), mod_a(*xi3), lambda x, y: y if x == 0 else ZERO)


def obvious_action(module: ModuleSpec) -> Operator:
    """((a + c), m) -> c m from (Abar + C) x M to M."""
    return Operator("PM", abar_c(), module, module, lambda x, y: ONE if x == 0 else ZERO)


def res_df(u) -> Operator:
    """(f, alpha) -> Res(alpha) df from Omega^0_u x Omega^1_0 to Omega^1_u."""
    u = _q(u)
    return Operator("Res.d", omega(0, u), omega(1, 0), omega(1, u), lambda x, y: x if y == 0 else ZERO)


def res_pairing(u) -> Operator:
    """(f, g) -> Res(f dg) from Omega^0_u x Omega^0_-u to the constants in Omega^0_0."""
    u = _q(u)
    return Operator("Res.fdg", omega(0, u), omega(0, -u), omega(0, 0),
                    lambda x, y: y if x + y == 0 else ZERO)


# -- linear maps used in compositions --------------------------------------

class ExprTypeError(ValueError):
    pass


def _linear(name: str, args: list[Fraction]):
    """Return (post, pre): functions from a module spec to (new spec, coefficient function)."""

    def need(cond, msg):
        if not cond:
            raise ExprTypeError(msg)

    if name == "id":
        return (lambda s: (s, lambda z: ONE)), (lambda s: (s, lambda z: ONE))
    if name == "d":
        def post(s):
            need(s.kind == "Omega" and s.delta == 0, f"d needs Omega^0 on its source, got {s}")
            return omega(1, s.coset), lambda z: z

        def pre(s):
            need(s.kind == "Omega" and s.delta == 1, f"d feeds Omega^1, got {s}")
            return omega(0, s.coset), lambda z: z
        return post, pre
    if name in ("dinv", "rho"):
        germ = name == "dinv"

        def inverse(coset):
            if germ or coset != 0:
                return lambda z: 1 / z if z != 0 else ZERO
            return lambda z: ONE if z == 0 else ZERO

        def post(s):
            need(s.kind == "Omega" and s.delta == 1, f"{name} needs Omega^1 on its source, got {s}")
            return omega(0, s.coset), inverse(s.coset)

        def pre(s):
            need(s.kind == "Omega" and s.delta == 0, f"{name} feeds Omega^0, got {s}")
            return omega(1, s.coset), inverse(s.coset)
        return post, pre
    if name == "dxi":
        need(len(args) == 2, "dxi takes [a,b]")
        a, b = args

        def post(s):
            need(s == mod_b(a, b), f"dxi[{a},{b}] needs B({a}, {b}) on its source, got {s}")
            return omega(1, 0), lambda z: z

        def pre(s):
            need(s == omega(1, 0), f"dxi feeds Omega^1_0, got {s}")
            return mod_b(a, b), lambda z: z
        return post, pre
    if name == "dup":
        need(len(args) == 2, "dup takes [a,b]")
        a, b = args

        def post(s):
            need(s == omega(0, 0), f"dup needs Omega^0_0 on its source, got {s}")
            return mod_a(a, b), lambda z: z

        def pre(s):
            need(s == mod_a(a, b), f"dup[{a},{b}] feeds A({a}, {b}), got {s}")
            return omega(0, 0), lambda z: z
        return post, pre
    raise ExprTypeError(f"unknown linear map {name!r}")


def _core(name: str, groups: list[list[Fraction]]) -> Operator:
    flat = [v for g in groups for v in g]

    def need(n):
        if [len(g) for g in groups] not in n:
            raise ExprTypeError(f"{name} has the wrong number of parameters")

    if name == "P":
        need([[2], [2, 2]])
        return poisson(*flat)
    if name == "B":
        need([[2], [2, 2]])
        return bracket(*flat)
    if name == "G":
        need([[], [2]])
        return grozman(*flat)
    if name == "Bxi":
        need([[2, 2, 2]])
        return extended_bracket(*flat)
    if name == "Theta":
        need([[2]])
        return theta(*flat)
    if name == "eta":
        need([[2, 2, 2]])
        return eta(*groups)
    if name == "etat":
        need([[2, 1]])
        return eta_t(*flat)
    if name == "triv":
        need([[2, 2, 2], [2, 2, 2, 1]])
        return trivial(*groups[:3], *(groups[3] if len(groups) == 4 else []))
    if name == "PM":
        need([[1], [1, 1]])
        return obvious_action(omega(*flat))
    raise ExprTypeError(f"unknown operator {name!r}")


_TOKEN = re.compile(r"^\s*([A-Za-z]+)\s*(?:\[(.*)\])?\s*$")


def _split_call(text: str) -> tuple[str, list[list[Fraction]]]:
    m = _TOKEN.match(text)
    if not m:
        raise ExprTypeError(f"cannot parse {text!r}")
    name, inner = m.group(1), m.group(2)
    groups: list[list[Fraction]] = []
    if inner is not None and inner.strip():
        for part in inner.split(";"):
            try:
                groups.append([Fraction(p.strip()) for p in part.split(",") if p.strip()])
            except (ValueError, ZeroDivisionError):
                raise ExprTypeError(f"bad parameters in {text!r}") from None
    return name, groups


def _split_top(text: str, sep: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return [s.strip() for s in out]


@dataclass(frozen=True)
class OperatorExpr:
    text: str

    def evaluate(self) -> Operator:
        return parse_expr(self.text)


def parse_expr(text: str) -> Operator:
    """Parse and type-check an expression such as ``d . B[1,-2] . (d x id)``."""
    parts = _split_top(text, ".")
    if not parts or not all(parts):
        raise ExprTypeError(f"empty component in {text!r}")
    pre_text = None
    if parts[-1].startswith("("):
        if not parts[-1].endswith(")"):
            raise ExprTypeError("unbalanced parentheses")
        pre_text = parts.pop()
        if not parts:
            raise ExprTypeError("missing bilinear core")
    core_name, core_args = _split_call(parts[-1])
    op = _core(core_name, core_args)
    left, right, target, fn = op.left, op.right, op.target, op.fn
    lfn = rfn = lambda z: ONE
    if pre_text is not None:
        pieces = [p.strip() for p in re.split(r"\s+x\s+", pre_text[1:-1].strip())]
        if len(pieces) != 2:
            raise ExprTypeError(f"expected (L x R) in {pre_text!r}")
        ln, la = _split_call(pieces[0])
        rn, ra = _split_call(pieces[1])
        left, lfn = _linear(ln, [v for g in la for v in g])[1](left)
        right, rfn = _linear(rn, [v for g in ra for v in g])[1](right)
    posts = []
    for piece in reversed(parts[:-1]):
        name, args = _split_call(piece)
        target, pfn = _linear(name, [v for g in args for v in g])[0](target)
        posts.append(pfn)

    def composite(x, y, fn=fn, lfn=lfn, rfn=rfn, posts=tuple(posts)):
        v = lfn(x)
        if v == 0:
            return ZERO
        v *= rfn(y)
        if v == 0:
            return ZERO
        v *= fn(x, y)
        for p in posts:
            if v == 0:
                return ZERO
            v *= p(x + y)
        return v

    return Operator(text.strip(), left, right, target, composite)


def with_cosets(op_text: str, u, v) -> Operator:
    """Parse an expression whose density operators take the given input cosets."""
    u, v = _q(u), _q(v)

    def add(m):
        name, inner = m.group(1), m.group(2)
        if ";" in inner:
            return m.group(0)
        return f"{name}[{inner};{u},{v}]"

    text = re.sub(r"\b(P|B)\[([^\]]*)\]", add, op_text)
    text = re.sub(r"\bG\b(?!\[)", f"G[{u},{v}]", text)
    return parse_expr(text)
