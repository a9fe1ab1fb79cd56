"""Jacobi ideals of polynomial map-germs at the origin.

Principality is decided in the polynomial ring localized at the origin, where
a polynomial is a unit exactly when its constant term is nonzero.  Writing
every maximal minor as ``D_I = k_I * g`` with ``g`` their gcd, the ideal is
principal iff some ``k_I`` is a unit: any combination of the ``k_I`` has
constant term in the span of the ``k_I(0)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .poly import (
    PolyMatrix,
    Polynomial,
    default_names,
    determinant,
    divide_exact,
    evaluate,
    gcd_many,
    parse_polynomial,
    partial,
    render,
)

IndexSet = tuple[int, ...]


class GermError(ValueError):
    pass


@dataclass(frozen=True)
class MapGerm:
    """Polynomial map-germ ``(R^n, 0) -> (R^m, 0)``."""

    n: int
    m: int
    components: tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if self.n < 1 or self.m < 1:
            raise GermError("dimensions must be positive")
        if len(self.components) != self.m:
            raise GermError(f"expected {self.m} components, got {len(self.components)}")
        for i, c in enumerate(self.components):
            if c.nvars != self.n:
                raise GermError(f"component {i + 1} lives in {c.nvars} variables, not {self.n}")
            if c.constant_term() != 0:
                raise GermError(f"component {i + 1} does not vanish at the origin")

    @classmethod
    def parse(cls, components: Sequence[str], n: int) -> MapGerm:
        polys = [parse_polynomial(text, nvars=n) for text in components]
        return cls(n, len(polys), tuple(polys))

    def rendered(self) -> list[str]:
        return [render(c) for c in self.components]

    def __str__(self) -> str:
        return "(" + ", ".join(self.rendered()) + ")"

    def __call__(self, *point):
        return tuple(evaluate(c, point) for c in self.components)

    def compose(self, phi: Sequence[Polynomial]) -> MapGerm:
        """Precomposition ``f o phi`` with ``phi`` given by its ``n`` components."""
        return MapGerm(phi[0].nvars, self.m, tuple(c.subs(phi) for c in self.components))

    def suspend(self, extra: int = 1) -> MapGerm:
        """Trivial unfolding by ``extra`` trailing dummy variables."""
        n = self.n + extra
        return MapGerm(n, self.m, tuple(c.extend(n) for c in self.components))


def jacobian_matrix(f: MapGerm) -> PolyMatrix:
    return PolyMatrix(f.m, f.n, [partial(c, j) for c in f.components for j in range(f.n)])


def index_sets(f: MapGerm) -> list[IndexSet]:
    return list(combinations(range(max(f.n, f.m)), min(f.n, f.m)))


def jacobi_minors(f: MapGerm) -> dict[IndexSet, Polynomial]:
    """Maximal minors keyed by the chosen columns (n >= m) or rows (n < m)."""
    J = jacobian_matrix(f)
    minors = {}
    for I in index_sets(f):
        if f.n >= f.m:
            sub = J.submatrix(range(f.m), I)
        else:
            sub = J.submatrix(I, range(f.n))
        minors[I] = determinant(sub)
    return minors


@dataclass(frozen=True)
class JacobiReport:
    minors: dict[IndexSet, Polynomial]
    gcd: Polynomial
    quotients: dict[IndexSet, Polynomial]
    principal: bool
    base_index: IndexSet | None
    generator: Polynomial | None

    def check(self) -> None:
        """Re-verify ``D_I = k_I * g`` and the base-index unit condition."""
        for I, D in self.minors.items():
            if D != self.quotients[I] * self.gcd:
                raise AssertionError(f"D_{I} != k_{I} * g")
        if self.principal and not self.gcd.is_zero():
            if self.quotients[self.base_index].constant_term() == 0:
                raise AssertionError("base quotient is not a unit")
            if self.generator != self.gcd:
                raise AssertionError("generator differs from gcd")


def principality_report(f: MapGerm) -> JacobiReport:
    minors = jacobi_minors(f)
    g = gcd_many(list(minors.values()))
    if g.is_zero():
        quotients = {I: Polynomial.zero(f.n) for I in minors}
        return JacobiReport(minors, g, quotients, True, None, g)
    quotients = {I: divide_exact(D, g) for I, D in minors.items()}
    base = next((I for I, k in quotients.items() if k.constant_term() != 0), None)
    principal = base is not None
    return JacobiReport(minors, g, quotients, principal, base, g if principal else None)


KINDS = ("cofrontal", "frontal", "both", "indeterminate")


@dataclass(frozen=True)
class Verdict:
    kind: str
    fair: bool
    reason: str
    report: JacobiReport = field(repr=False, compare=False)

    @property
    def generator(self) -> Polynomial | None:
        return self.report.generator


def classify_germ(f: MapGerm) -> Verdict:
    rep = principality_report(f)
    if rep.principal and not rep.gcd.is_zero():
        if f.n > f.m:
            kind = "cofrontal"
        elif f.n < f.m:
            kind = "frontal"
        else:
            kind = "both"
        reason = (f"Jacobi ideal is principal, generated by {render(rep.generator)}; "
                  "a nonzero generator has nowhere dense zero set")
        return Verdict(kind, True, reason, rep)
    if rep.principal:
        reason = ("Jacobi ideal is zero (principal) but the singular locus is everything; "
                  "the converse criterion needs a nowhere dense singular locus, so no "
                  "(co)frontal structure is certified")
        return Verdict("indeterminate", False, reason, rep)
    if f.n > f.m:
        consequence = "so f is not a cofrontal"
    elif f.n < f.m:
        consequence = "so f is not a frontal"
    else:
        consequence = "which cannot happen for equidimensional germs"
    reason = f"Jacobi ideal not principal - not a fair cofrontal/frontal; {consequence}"
    return Verdict("indeterminate", False, reason, rep)


def kernel_cofactor_field(f: MapGerm) -> list[Polynomial]:
    """Signed maximal minors spanning ``ker J(f)`` when ``n = m + 1``."""
    if f.n != f.m + 1:
        raise GermError(f"cofactor field needs n = m + 1, got n={f.n}, m={f.m}")
    J = jacobian_matrix(f)
    out = []
    for j in range(f.n):
        cols = [c for c in range(f.n) if c != j]
        d = determinant(J.submatrix(range(f.m), cols))
        out.append(-d if j % 2 else d)
    return out


@dataclass(frozen=True)
class KernelField:
    """Plücker coordinates ``h_I = numerators[I] / denominator`` of the kernel field.

    ``denominator`` is a unit with constant term 1, and ``numerators[base_index]``
    equals it, so the base coordinate is identically 1.
    """

    base_index: IndexSet
    numerators: dict[IndexSet, Polynomial]
    denominator: Polynomial
    cofactor_field: tuple[Polynomial, ...] | None = None

    def coordinate(self, I: IndexSet) -> str:
        num = self.numerators[I]
        if I == self.base_index:
            return "1"
        if self.denominator == 1:
            return render(num)
        return f"({render(num)})/({render(self.denominator)})"

    @property
    def section(self) -> dict[IndexSet, str]:
        return {I: self.coordinate(I) for I in self.numerators}


def pluecker_section(f: MapGerm) -> KernelField:
    if f.n < f.m:
        raise GermError("kernel fields are defined for n >= m")
    rep = principality_report(f)
    if not rep.principal:
        raise GermError("Jacobi ideal is not principal; no kernel field is certified")
    if rep.gcd.is_zero():
        raise GermError("Jacobi ideal is zero (unfair germ); the kernel field is not certified")
    base = rep.base_index
    c = rep.quotients[base].constant_term()
    numerators = {I: k / c for I, k in rep.quotients.items()}
    denominator = numerators[base]
    cofactor = None
    if f.n == f.m + 1:
        xi = kernel_cofactor_field(f)
        # column j is deleted for the index set missing j
        j0 = next(j for j in range(f.n) if j not in base)
        scale = c if j0 % 2 == 0 else -c
        cofactor = tuple(divide_exact(x, rep.gcd) / scale for x in xi)
    return KernelField(base, numerators, denominator, cofactor)


def reduce_adapted(f: MapGerm, fiber_dims: int) -> MapGerm:
    """Drop the trailing ``fiber_dims`` variables, which no component may involve."""
    if not 0 <= fiber_dims < f.n:
        raise GermError(f"fiber_dims must lie in [0, {f.n})")
    keep = f.n - fiber_dims
    names = default_names(f.n)
    for i, comp in enumerate(f.components):
        for j in range(keep, f.n):
            d = partial(comp, j)
            if not d.is_zero():
                raise GermError(
                    f"d f{i + 1}/d {names[j]} = {render(d)} is not zero; "
                    "coordinates are not adapted")
    return MapGerm(keep, f.m, tuple(c.drop_variables(keep) for c in f.components))


@dataclass(frozen=True)
class IntegrabilityReport:
    points: list[tuple[Fraction, ...]]
    max_residual: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.max_residual <= self.tolerance


def _bracket(X: Sequence[Polynomial], Y: Sequence[Polynomial]) -> list[Polynomial]:
    n = len(X)
    out = []
    for k in range(n):
        acc = Polynomial.zero(X[0].nvars)
        for j in range(n):
            acc = acc + X[j] * partial(Y[k], j) - Y[j] * partial(X[k], j)
        out.append(acc)
    return out


def kernel_frame(f: MapGerm, base: IndexSet) -> list[list[Polynomial]]:
    """Polynomial vector fields spanning ``ker J(f)`` wherever ``D_base`` is nonzero.

    For each free column ``j`` the field is ``D_base * e_j - adj(J_base) J_j``
    placed in the base coordinates (Cramer's rule cleared of denominators).
    """
    J = jacobian_matrix(f)
    D = determinant(J.submatrix(range(f.m), base))
    frame = []
    for j in (c for c in range(f.n) if c not in base):
        v = [Polynomial.zero(f.n) for _ in range(f.n)]
        v[j] = D
        for pos, col in enumerate(base):
            # Cramer: replace column `pos` of J_base by -J_j
            cols = [J.submatrix(range(f.m), [c]).entries for c in base]
            cols[pos] = tuple(-e for e in J.submatrix(range(f.m), [j]).entries)
            M = PolyMatrix(f.m, f.m, [cols[c][r] for r in range(f.m) for c in range(f.m)])
            v[col] = determinant(M)
        frame.append(v)
    return frame


def integrability_sample_check(f: MapGerm, sample_points: Sequence[Sequence],
                               tolerance: float = 1e-8) -> IntegrabilityReport:
    """Check that brackets of a kernel frame stay in the kernel at sample points."""
    if f.n - f.m < 2:
        raise GermError("integrability check needs n - m >= 2 (rank-1 fields are integrable)")
    rep = principality_report(f)
    if not rep.principal or rep.gcd.is_zero():
        raise GermError("integrability check needs a fair germ with principal Jacobi ideal")
    J = jacobian_matrix(f)
    frames: dict[IndexSet, tuple] = {}
    worst = 0.0
    points = []
    for point in sample_points:
        point = tuple(Fraction(x) for x in point)
        if evaluate(rep.generator, point) == 0:
            raise GermError(f"sample point {point} lies on the singular locus")
        base = next(I for I, D in rep.minors.items() if evaluate(D, point) != 0)
        if base not in frames:
            frame = kernel_frame(f, base)
            brackets = [_bracket(frame[a], frame[b])
                        for a in range(len(frame)) for b in range(a + 1, len(frame))]
            frames[base] = [J.matvec(br) for br in brackets]
        for image in frames[base]:
            for comp in image:
                worst = max(worst, abs(float(evaluate(comp, point))))
        points.append(point)
    return IntegrabilityReport(points, worst, tolerance)
