"""Right symmetries ``f o sigma = f`` of polynomial germs, their orders and transport."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .germ import MapGerm, principality_report
from .poly import (
    Monomial,
    PolyMatrix,
    Polynomial,
    default_names,
    determinant,
    jet_truncate,
    parse_polynomial,
    partial,
    render,
)

DEFAULT_ORDER_CAP = 64
DEFAULT_JET_DEGREE = 8


class SymmetryError(ValueError):
    pass


def _fraction_det(rows: list[list[Fraction]]) -> Fraction:
    a = [r[:] for r in rows]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for r in range(k + 1, n):
            t = a[r][k] / a[k][k]
            if t:
                for c in range(k, n):
                    a[r][c] -= t * a[k][c]
    return det


def _fraction_inverse(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(rows)
    a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k] != 0), None)
        if piv is None:
            raise SymmetryError("linear part is singular")
        a[k], a[piv] = a[piv], a[k]
        p = a[k][k]
        a[k] = [v / p for v in a[k]]
        for r in range(n):
            if r != k and a[r][k]:
                t = a[r][k]
                a[r] = [v - t * w for v, w in zip(a[r], a[k])]
    return [row[n:] for row in a]


@dataclass(frozen=True)
class GermDiffeo:
    """Polynomial diffeomorphism-germ of ``(R^n, 0)`` (invertible linear part)."""

    dimension: int
    components: tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.components) != self.dimension:
            raise SymmetryError(f"expected {self.dimension} components, got {len(self.components)}")
        for i, c in enumerate(self.components):
            if c.nvars != self.dimension:
                raise SymmetryError(f"component {i + 1} has {c.nvars} variables")
            if c.constant_term() != 0:
                raise SymmetryError(f"component {i + 1} does not fix the origin")
        if _fraction_det(self.linear_matrix()) == 0:
            raise SymmetryError("linear part is not invertible")

    @classmethod
    def parse(cls, components: Sequence[str]) -> GermDiffeo:
        n = len(components)
        return cls(n, tuple(parse_polynomial(t, nvars=n) for t in components))

    @classmethod
    def identity(cls, n: int) -> GermDiffeo:
        return cls(n, tuple(Polynomial.variable(i, n) for i in range(n)))

    @classmethod
    def linear(cls, matrix: Sequence[Sequence]) -> GermDiffeo:
        n = len(matrix)
        comps = []
        for row in matrix:
            p = Polynomial.zero(n)
            for j, a in enumerate(row):
                p = p + Polynomial.variable(j, n) * Fraction(a)
            comps.append(p)
        return cls(n, tuple(comps))

    @property
    def linear_part_invertible(self) -> bool:
        return True  # enforced at construction

    def linear_matrix(self) -> list[list[Fraction]]:
        n = self.dimension
        return [[c.coefficient(tuple(int(k == j) for k in range(n))) for j in range(n)]
                for c in self.components]

    def is_linear(self) -> bool:
        return all(all(sum(m) == 1 for m in c.terms) for c in self.components)

    def is_identity(self) -> bool:
        return all(c == Polynomial.variable(i, self.dimension)
                   for i, c in enumerate(self.components))

    def degree(self) -> int:
        return max(c.degree() for c in self.components)

    def compose(self, other: GermDiffeo) -> GermDiffeo:
        """``self o other``."""
        if other.dimension != self.dimension:
            raise SymmetryError("dimension mismatch in composition")
        return GermDiffeo(self.dimension, tuple(c.subs(other.components) for c in self.components))

    def truncated(self, degree: int) -> GermDiffeo:
        return GermDiffeo(self.dimension, tuple(jet_truncate(c, degree) for c in self.components))

    def jacobian_determinant(self) -> Polynomial:
        n = self.dimension
        return determinant(PolyMatrix(n, n, [partial(c, j) for c in self.components
                                              for j in range(n)]))

    def inverse(self, jet_degree: int = DEFAULT_JET_DEGREE) -> tuple[GermDiffeo, bool]:
        """Inverse and whether it is exact; otherwise it is the inverse jet to ``jet_degree``.

        Iterates ``x <- L^-1 (y - N(x))`` where ``L`` is the linear part and ``N``
        the higher-order part; each round fixes one more degree.
        """
        n = self.dimension
        Linv = GermDiffeo.linear(_fraction_inverse(self.linear_matrix()))
        if self.is_linear():
            return Linv, True
        y = [Polynomial.variable(i, n) for i in range(n)]
        nonlinear = [c - jet_truncate(c, 1) for c in self.components]
        x = list(Linv.components)
        for _ in range(jet_degree):
            rhs = [yi - jet_truncate(Ni.subs(x), jet_degree) for yi, Ni in zip(y, nonlinear)]
            x = [jet_truncate(c.subs(rhs), jet_degree) for c in Linv.components]
        inv = GermDiffeo(n, tuple(x))
        return inv, self.compose(inv).is_identity() and inv.compose(self).is_identity()

    def rendered(self) -> list[str]:
        return [render(c) for c in self.components]

    def __str__(self) -> str:
        return "(" + ", ".join(self.rendered()) + ")"


@dataclass(frozen=True)
class Counterexample:
    component: int
    monomial: Monomial
    difference: Fraction

    def monomial_text(self) -> str:
        names = default_names(len(self.monomial))
        parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, self.monomial) if e]
        return "*".join(parts) or "1"


@dataclass(frozen=True)
class SymmetryCertificate:
    germ: MapGerm
    element: GermDiffeo
    verified: bool
    counterexample: Counterexample | None = None
    exact: bool = True
    jet_degree: int | None = None

    def describe(self) -> str:
        if self.verified:
            return "verified" if self.exact else f"verified to order {self.jet_degree}"
        ce = self.counterexample
        return (f"failed at monomial {ce.monomial_text()} "
                f"(component {ce.component + 1})")


def _first_difference(f: MapGerm, sigma: GermDiffeo,
                      jet_degree: int | None = None) -> Counterexample | None:
    for i, comp in enumerate(f.components):
        diff = comp.subs(sigma.components) - comp
        if jet_degree is not None:
            diff = jet_truncate(diff, jet_degree)
        if not diff.is_zero():
            mono = diff.leading_monomial()
            return Counterexample(i, mono, diff.coefficient(mono))
    return None


def check_right_symmetry(f: MapGerm, sigma: GermDiffeo) -> SymmetryCertificate:
    """Exact test of ``f o sigma == f``.

    On failure the counterexample is the graded-lex leading monomial of
    ``f_i o sigma - f_i`` for the first differing component ``i``.
    """
    if sigma.dimension != f.n:
        raise SymmetryError(f"diffeo acts on R^{sigma.dimension}, germ lives on R^{f.n}")
    ce = _first_difference(f, sigma)
    return SymmetryCertificate(f, sigma, ce is None, ce)


def diffeo_order(sigma: GermDiffeo, cap: int = DEFAULT_ORDER_CAP,
                 max_degree: int = 64) -> int | None:
    """Least ``k <= cap`` with ``sigma^k = id``; ``None`` when undecided.

    Powers whose degree exceeds ``max_degree`` also stop the search.
    """
    if cap < 1:
        raise SymmetryError("order cap must be at least 1")
    power = sigma
    for k in range(1, cap + 1):
        if power.is_identity():
            return k
        if k == cap or power.degree() > max_degree:
            return None
        power = sigma.compose(power)
    return None


def conjugate_symmetry(sigma: GermDiffeo, psi: GermDiffeo, tau: GermDiffeo | None,
                       f: MapGerm, g: MapGerm,
                       jet_degree: int = DEFAULT_JET_DEGREE) -> SymmetryCertificate:
    """Transport ``sigma`` in ``G_f`` to ``psi o sigma o psi^-1`` in ``G_g``.

    Requires ``tau o f = g o psi``; ``tau`` defaults to the identity of the target.
    """
    if psi.dimension != f.n or g.n != f.n or sigma.dimension != f.n:
        raise SymmetryError("source dimensions do not match")
    if g.m != f.m:
        raise SymmetryError("target dimensions do not match")
    left = list(f.components) if tau is None else [c.subs(f.components) for c in tau.components]
    right = [c.subs(psi.components) for c in g.components]
    if left != right:
        raise SymmetryError("equivalence square does not commute: tau o f != g o psi")
    if not check_right_symmetry(f, sigma).verified:
        raise SymmetryError("sigma is not a right symmetry of f")
    psi_inv, exact = psi.inverse(jet_degree)
    rho = psi.compose(sigma).compose(psi_inv)
    if exact:
        return check_right_symmetry(g, rho)
    rho = rho.truncated(jet_degree)
    ce = _first_difference(g, rho, jet_degree)
    return SymmetryCertificate(g, rho, ce is None, ce, exact=False, jet_degree=jet_degree)


def jacobian_equivariance_sign(f: MapGerm, sigma: GermDiffeo) -> int:
    """Sign ``s`` with ``(lambda o sigma) * det J(sigma) = s * lambda`` for n = m germs."""
    if f.n != f.m:
        raise SymmetryError("Jacobian equivariance is stated for n = m")
    lam = principality_report(f).generator
    lhs = lam.subs(sigma.components) * sigma.jacobian_determinant()
    if lhs == lam:
        return 1
    if lhs == -lam:
        return -1
    raise SymmetryError(f"(lambda o sigma) det J(sigma) = {render(lhs)} is not +-lambda")


# -- catalog -------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    germ: MapGerm
    generators: tuple[GermDiffeo, ...]
    description: str
    known_group: str
    group_order: int
    notes: str = ""


CATALOG_FAMILIES = ("fold", "cusp", "squares", "power_ell", "dihedral")


def _re_im_power(ell: int) -> tuple[Polynomial, Polynomial]:
    """Real and imaginary parts of ``(x1 + i x2)^ell``."""
    re_terms: dict[Monomial, int] = {}
    im_terms: dict[Monomial, int] = {}
    for k in range(ell + 1):
        c = comb(ell, k)
        mono = (ell - k, k)
        r = k % 4
        if r == 0:
            re_terms[mono] = c
        elif r == 1:
            im_terms[mono] = c
        elif r == 2:
            re_terms[mono] = -c
        else:
            im_terms[mono] = -c
    return Polynomial(2, re_terms), Polynomial(2, im_terms)


_RATIONAL_ROTATIONS = {
    1: None,
    2: ("-x1", "-x2"),
    4: ("-x2", "x1"),
}


def _rotation(ell: int) -> GermDiffeo | None:
    comps = _RATIONAL_ROTATIONS.get(ell)
    return GermDiffeo.parse(comps) if comps else None


def _parse_name(name: str) -> tuple[str, int | None]:
    m = re.fullmatch(r"\s*([a-z_]+)\s*(?:[(:]\s*(\d+)\s*\)?)?\s*", name)
    if not m:
        raise SymmetryError(f"unknown catalog entry {name!r}")
    family, arg = m.group(1), m.group(2)
    return family, int(arg) if arg is not None else None


def symmetry_catalog(name: str) -> CatalogEntry:
    """Catalog of germs with known right symmetry groups.

    ``name`` is ``fold``, ``cusp``, ``squares``, ``power_ell(l)`` or ``dihedral(l)``.
    """
    family, ell = _parse_name(name)
    if family in ("fold", "cusp", "squares") and ell is not None:
        raise SymmetryError(f"{family} takes no parameter")
    if family in ("power_ell", "dihedral"):
        if ell is None or ell < 1:
            raise SymmetryError(f"{family} needs a positive integer parameter, e.g. {family}(3)")
    if family == "fold":
        return CatalogEntry(
            "fold", MapGerm.parse(["x1", "x2^2"], 2), (GermDiffeo.parse(["x1", "-x2"]),),
            "fold (x1, x2^2)", "Z/2Z", 2)
    if family == "cusp":
        return CatalogEntry(
            "cusp", MapGerm.parse(["x1", "x2^3 + x1*x2"], 2), (),
            "Whitney cusp (x1, x2^3 + x1*x2)", "trivial", 1,
            "group is known to be trivial; membership of candidates can be tested, "
            "triviality itself is not computed")
    if family == "squares":
        return CatalogEntry(
            "squares", MapGerm.parse(["x1^2", "x2^2"], 2),
            (GermDiffeo.parse(["-x1", "x2"]), GermDiffeo.parse(["x1", "-x2"])),
            "(x1^2, x2^2)", "Z/2Z x Z/2Z", 4)
    if family == "power_ell":
        re_part, im_part = _re_im_power(ell)
        rot = _rotation(ell)
        notes = ""
        if ell not in _RATIONAL_ROTATIONS:
            notes = (f"rotation by 2*pi/{ell} has irrational entries; no exact generator "
                     "is listed")
        return CatalogEntry(
            f"power_ell({ell})", MapGerm(2, 2, (re_part, im_part)),
            (rot,) if rot else (), f"z^{ell} as (Re, Im)", f"Z/{ell}Z", ell, notes)
    if family == "dihedral":
        re_part, _ = _re_im_power(ell)
        germ = MapGerm(2, 2, (parse_polynomial("x1^2 + x2^2", nvars=2), re_part))
        gens = [GermDiffeo.parse(["x1", "-x2"])]
        rot = _rotation(ell)
        notes = ""
        if rot:
            gens.append(rot)
        elif ell not in _RATIONAL_ROTATIONS:
            notes = f"rotation by 2*pi/{ell} has irrational entries; only the reflection is listed"
        return CatalogEntry(
            f"dihedral({ell})", germ, tuple(gens),
            f"invariants (x1^2 + x2^2, Re z^{ell}) of the dihedral reflection group",
            f"dihedral group of order {2 * ell}", 2 * ell, notes)
    raise SymmetryError(f"unknown catalog entry {name!r}")


DEFAULT_CATALOG = ("fold", "cusp", "squares", "power_ell(4)", "dihedral(2)")
