"""Witt algebra modules of class S and the linear maps between them.

Every module here has a basis e_z indexed by a coset u + Z of weights, and the
Witt generator L_m sends e_z to a scalar multiple of e_{z+m}.  A module is
therefore fully described by the scalar function ``coef(m, z)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .exact import to_rational

ZERO_ONE = frozenset({Fraction(0), Fraction(1)})


def frac_part(q: Fraction) -> Fraction:
    return q - (q.numerator // q.denominator)


def projective(a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
    """Normalize (a, b) so its first nonzero entry is 1."""
    if a != 0:
        return Fraction(1), b / a
    if b != 0:
        return Fraction(0), Fraction(1)
    raise ValueError("(0, 0) is not a projective point")


INFINITY = (Fraction(0), Fraction(1))


@dataclass(frozen=True)
class Weight:
    coset: Fraction
    offset: int

    @property
    def value(self) -> Fraction:
        return self.coset + self.offset

    @classmethod
    def of(cls, z) -> Weight:
        z = to_rational(z)
        u = frac_part(z)
        return cls(u, int(z - u))


@dataclass(frozen=True)
class ModuleSpec:
    """One module of class S.

    kind is "Omega" (tensor densities), "A", "B" (the two deformation families)
    or "AbarC" (the decomposable module A_{0,0}).  For the families, (a, b) are
    the raw coordinates; isomorphic choices with proportional coordinates are
    distinct specs that differ by rescaling e_0.
    """

    kind: str
    delta: Fraction | None = None
    coset: Fraction = Fraction(0)
    a: Fraction | None = None
    b: Fraction | None = None
    chosen_degree: Fraction | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind == "Omega":
            if self.delta is None:
                raise ValueError("Omega needs a delta")
            object.__setattr__(self, "delta", to_rational(self.delta))
            object.__setattr__(self, "coset", frac_part(to_rational(self.coset)))
        elif self.kind in ("A", "B"):
            a, b = to_rational(self.a), to_rational(self.b)
            if a == 0 and b == 0:
                raise ValueError("(a, b) = (0, 0) is the decomposable module AbarC")
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)
            object.__setattr__(self, "coset", Fraction(0))
        elif self.kind == "AbarC":
            object.__setattr__(self, "coset", Fraction(0))
        else:
            raise ValueError(f"unknown module kind {self.kind!r}")
        if self.chosen_degree is not None:
            d = to_rational(self.chosen_degree)
            if d not in self.degree_set():
                raise ValueError(f"{d} is not a degree of {self}")
            object.__setattr__(self, "chosen_degree", d)

    # -- degree and support -------------------------------------------
    def degree(self):
        """A rational, or the set {0, 1} for the degenerate degree."""
        if self.kind == "Omega" and self.delta not in ZERO_ONE:
            return self.delta
        return ZERO_ONE

    def degree_set(self) -> frozenset:
        d = self.degree()
        return d if isinstance(d, frozenset) else frozenset({d})

    def a_degree(self) -> Fraction:
        """A single representative degree (the chosen one, else delta, else 0)."""
        if self.chosen_degree is not None:
            return self.chosen_degree
        if self.kind == "Omega":
            return self.delta
        return Fraction(0)

    @property
    def support(self) -> Fraction:
        return self.coset

    def xi(self) -> tuple[Fraction, Fraction]:
        if self.kind not in ("A", "B"):
            raise ValueError(f"{self} has no projective parameter")
        return projective(self.a, self.b)

    def is_irreducible(self) -> bool:
        if self.kind != "Omega":
            return False
        return not (self.coset == 0 and self.delta in ZERO_ONE)

    # -- action -----------------------------------------------------------
    def coef(self, m: int, z: Fraction) -> Fraction:
        """Scalar c with L_m e_z = c e_{z+m}."""
        k = self.kind
        if k == "Omega":
            return m * self.delta + z
        if k == "A" or k == "AbarC":
            if z == 0:
                if k == "AbarC":
                    return Fraction(0)
                return self.a * m * m + self.b * m
            return m + z
        if z + m == 0:
            return self.a * m * m + self.b * m
        return z

    def act(self, m: int, w: Weight) -> tuple[Fraction, Weight]:
        return self.coef(m, w.value), Weight(w.coset, w.offset + m)

    def weight(self, offset: int) -> Fraction:
        return self.coset + offset

    # -- text and json ----------------------------------------------------
    def __str__(self) -> str:
        if self.kind == "Omega":
            return f"Omega({self.delta}, {self.coset})"
        if self.kind == "AbarC":
            return "AbarC"
        return f"{self.kind}({self.a}, {self.b})"

    def to_json(self) -> dict:
        deg = self.degree()
        return {
            "kind": self.kind,
            "delta": None if self.delta is None else str(self.delta),
            "coset": str(self.coset),
            "proj": None if self.a is None else [str(self.a), str(self.b)],
            "degree": sorted(str(v) for v in deg) if isinstance(deg, frozenset) else str(deg),
        }

    @classmethod
    def from_json(cls, data: dict) -> ModuleSpec:
        kind = data["kind"]
        if kind == "Omega":
            return omega(data["delta"], data.get("coset", "0"))
        if kind in ("A", "B"):
            a, b = data["proj"]
            return cls(kind, a=to_rational(a), b=to_rational(b))
        return cls("AbarC")


def omega(delta, coset=0) -> ModuleSpec:
    return ModuleSpec("Omega", delta=to_rational(delta), coset=to_rational(coset))


def mod_a(a, b) -> ModuleSpec:
    return ModuleSpec("A", a=to_rational(a), b=to_rational(b))


def mod_b(a, b) -> ModuleSpec:
    return ModuleSpec("B", a=to_rational(a), b=to_rational(b))


def abar_c() -> ModuleSpec:
    return ModuleSpec("AbarC")


def parse_module(text: str) -> ModuleSpec:
    """Parse "Omega <delta> <coset>", "A <a> <b>", "B <a> <b>" or "AbarC"."""
    parts = text.replace(",", " ").split()
    if not parts:
        raise ValueError("empty module spec")
    head = parts[0]
    try:
        if head.lower() == "omega" and len(parts) in (2, 3):
            return omega(Fraction(parts[1]), Fraction(parts[2]) if len(parts) == 3 else 0)
        if head in ("A", "B") and len(parts) == 3:
            return ModuleSpec(head, a=Fraction(parts[1]), b=Fraction(parts[2]))
        if head.lower() == "abarc" and len(parts) == 1:
            return abar_c()
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad module spec {text!r}: {exc}") from None
    raise ValueError(f"bad module spec {text!r}")


def restricted_dual(spec: ModuleSpec) -> ModuleSpec:
    """The restricted dual, presented so the dual basis f_z of e_{-z} has identity coordinates.

    AbarC is the exception: its dual is returned as AbarC itself, which matches
    the dual basis only after rescaling f_z by z for z != 0.
    """
    if spec.kind == "Omega":
        return omega(1 - spec.delta, -spec.coset)
    if spec.kind == "A":
        return mod_b(-spec.a, -spec.b)
    if spec.kind == "B":
        return mod_a(-spec.a, -spec.b)
    return spec


def dual_coef(spec: ModuleSpec) -> Callable[[int, Fraction], Fraction]:
    """Action on the dual basis computed from the pairing, independent of restricted_dual."""
    return lambda m, z: -spec.coef(m, -z - m)


def casimir_scalar(spec: ModuleSpec) -> Fraction:
    if spec.kind == "Omega":
        return spec.delta * spec.delta - spec.delta
    return Fraction(0)


def casimir_on(spec: ModuleSpec, k: int, z: Fraction) -> Fraction:
    """Eigenvalue of L_0^2 + k L_0 - L_{-k} L_k on e_z."""
    return z * z + k * z - spec.coef(k, z) * spec.coef(-k, z + k)


def window_offsets(n: int) -> range:
    return range(-n, n + 1)


# ---------------------------------------------------------------------------
# Linear maps


@dataclass
class LinearTable:
    """A weight-preserving linear map, e_z -> coef(z) e_z, materialized on offsets."""

    source: ModuleSpec
    target: ModuleSpec
    entries: dict[int, Fraction]

    def coef(self, offset: int) -> Fraction:
        return self.entries.get(offset, Fraction(0))


def linear_table(source: ModuleSpec, target: ModuleSpec, fn: Callable[[Fraction], Fraction],
                 offsets: Iterable[int]) -> LinearTable:
    if source.coset != target.coset:
        raise ValueError("a weight-preserving map needs equal supports")
    return LinearTable(source, target, {o: to_rational(fn(source.weight(o))) for o in offsets})


def linear_violations(t: LinearTable, generators: Iterable[int] = (-2, -1, 1, 2)) -> list[tuple[int, int]]:
    """(m, offset) pairs where phi(L_m e_z) != L_m phi(e_z), with both ends inside the table."""
    bad = []
    for m in generators:
        for o, f in t.entries.items():
            if o + m not in t.entries:
                continue
            z = t.source.weight(o)
            if t.entries[o + m] * t.source.coef(m, z) != t.target.coef(m, z) * f:
                bad.append((m, o))
    return bad


def iso_class(spec: ModuleSpec) -> tuple:
    """Canonical isomorphism class label."""
    if spec.kind == "Omega":
        if spec.coset == 0 and spec.delta == 0:
            return ("B", INFINITY)
        if spec.coset == 0 and spec.delta == 1:
            return ("A", INFINITY)
        if spec.delta in ZERO_ONE:
            return ("O01", spec.coset)
        return ("O", spec.delta, spec.coset)
    if spec.kind == "AbarC":
        return ("AbarC",)
    return (spec.kind, spec.xi())


def _raw_family(spec: ModuleSpec) -> tuple[str, Fraction, Fraction] | None:
    """(family, a, b) with the actual coordinates, counting Omega(1,0) and Omega(0,0)."""
    if spec.kind in ("A", "B"):
        return spec.kind, spec.a, spec.b
    if spec.kind == "Omega" and spec.coset == 0 and spec.delta == 1:
        return "A", Fraction(0), Fraction(1)
    if spec.kind == "Omega" and spec.coset == 0 and spec.delta == 0:
        return "B", Fraction(0), Fraction(-1)
    return None


def ks_isomorphism_check(s1: ModuleSpec, s2: ModuleSpec):
    """Return (True, intertwiner) or (False, None).

    The intertwiner is a function of the weight giving the diagonal coefficient.
    """
    if iso_class(s1) != iso_class(s2):
        return False, None
    if s1.kind == "Omega" and s2.kind == "Omega":
        if s1.delta == s2.delta:
            return True, lambda z: Fraction(1)
        if s1.delta == 0:
            return True, lambda z: z
        return True, lambda z: 1 / z
    f1, f2 = _raw_family(s1), _raw_family(s2)
    if f1 is None:
        return True, lambda z: Fraction(1)
    _, a1, b1 = f1
    fam, a2, b2 = f2
    lam = a2 / a1 if a1 != 0 else b2 / b1  # (a2, b2) = lam (a1, b1)
    zero_scale = 1 / lam if fam == "A" else lam
    return True, lambda z: zero_scale if z == 0 else Fraction(1)


# -- standard maps ---------------------------------------------------------

def d_map(z: Fraction) -> Fraction:
    """de Rham differential Omega^0_u -> Omega^1_u."""
    return z


def rho_map(coset: Fraction) -> Callable[[Fraction], Fraction]:
    """Inverse of d for u not in Z; for u in Z, the residue e_0^1 -> e_0^0."""
    if coset != 0:
        return lambda z: 1 / z
    return lambda z: Fraction(1) if z == 0 else Fraction(0)


def d_lower(z: Fraction) -> Fraction:
    """B_xi -> Omega^1_0, killing e_0."""
    return z


def d_upper(z: Fraction) -> Fraction:
    """Omega^0_0 -> A_xi, killing e_0; e_n -> n e_n keeps it equivariant."""
    return z


def almost_iso(z: Fraction) -> Fraction:
    """B_xi -> A_eta, zero on e_0."""
    return z


def res(z: Fraction) -> Fraction:
    return Fraction(1) if z == 0 else Fraction(0)
