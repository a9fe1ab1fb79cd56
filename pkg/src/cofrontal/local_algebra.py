"""Dimension of the local algebra ``Q[x]_(x) / (f_1, ..., f_m)``, degree by degree.

For each degree ``D`` we compute ``dim Q[x] / (I + m^(D+1))``.  Once two
consecutive degrees agree, ``m^(D+1)`` lies in ``I + m^(D+2)`` and Nakayama's
lemma puts it in ``I`` locally, so the common value is the true dimension.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

from .germ import GermError, MapGerm, reduce_adapted
from .poly import Monomial, Polynomial, default_names

DEFAULT_CAP = 16


def monomials_up_to(nvars: int, degree: int) -> list[Monomial]:
    """Exponent tuples of total degree <= ``degree``, sorted by increasing degree."""
    out = []
    for d in range(degree + 1):
        level = []
        for combo in combinations_with_replacement(range(nvars), d):
            mono = [0] * nvars
            for i in combo:
                mono[i] += 1
            level.append(tuple(mono))
        out.extend(sorted(level, reverse=True))
    return out


@dataclass(frozen=True)
class FinitenessReport:
    dims_by_degree: list[tuple[int, int]]
    status: str  # "finite" or "undecided"
    dimension: int | None
    cap_used: int
    basis: list[Monomial] = field(default_factory=list)

    @property
    def finite(self) -> bool:
        return self.status == "finite"

    def describe(self) -> str:
        if self.finite:
            return f"finite({self.dimension})"
        return f"undecided({self.cap_used})"

    def basis_text(self) -> list[str]:
        if not self.basis:
            return []
        names = default_names(len(self.basis[0]))
        out = []
        for mono in self.basis:
            parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, mono) if e]
            out.append("*".join(parts) or "1")
        return out


class _Echelon:
    """Sparse row echelon form with pivots at the lowest column index."""

    def __init__(self):
        self.pivots: dict[int, dict[int, Fraction]] = {}

    def insert(self, row: dict[int, Fraction]) -> int | None:
        row = dict(row)
        while row:
            col = min(row)
            piv = self.pivots.get(col)
            if piv is None:
                scale = row[col]
                self.pivots[col] = {c: v / scale for c, v in row.items()}
                return col
            factor = row[col]
            for c, v in piv.items():
                s = row.get(c, 0) - factor * v
                if s:
                    row[c] = s
                else:
                    row.pop(c, None)
        return None


def _profile(components: list[Polynomial], nvars: int, horizon: int):
    monos = monomials_up_to(nvars, horizon)
    index = {m: i for i, m in enumerate(monos)}
    per_degree = [0] * (horizon + 1)
    for m in monos:
        per_degree[sum(m)] += 1
    ech = _Echelon()
    # multipliers of degree d contribute only in degrees > d, so rows with
    # multiplier degree < D fix every pivot of degree <= D
    dims = []
    total = 0
    for D in range(horizon + 1):
        if D >= 1:
            for mono in (m for m in monos if sum(m) == D - 1):
                for comp in components:
                    row = {}
                    for t, c in comp._terms.items():
                        prod = tuple(a + b for a, b in zip(mono, t))
                        if sum(prod) <= horizon:
                            row[index[prod]] = c
                    if row:
                        ech.insert(row)
        total += per_degree[D]
        pivots = sum(1 for col in ech.pivots if sum(monos[col]) <= D)
        dims.append(total - pivots)
    return dims, ech, monos


def quotient_dimension_profile(f: MapGerm, cap: int = DEFAULT_CAP,
                               full: bool = False) -> FinitenessReport:
    """Degree-by-degree dimension of the local algebra of an equidimensional germ.

    Stops at the first stabilization unless ``full`` asks for every degree up to ``cap``.
    """
    if f.n != f.m:
        raise GermError(f"local algebra needs n = m (got n={f.n}, m={f.m}); reduce first")
    if cap < 2:
        raise GermError("degree cap must be at least 2")
    comps = list(f.components)
    horizon = cap if full else min(cap, 8)
    while True:
        dims, ech, monos = _profile(comps, f.n, horizon)
        stable = next((D for D in range(horizon) if dims[D] == dims[D + 1]), None)
        if stable is not None or horizon == cap:
            break
        horizon = min(cap, 2 * horizon)
    if stable is None:
        return FinitenessReport(list(enumerate(dims)), "undecided", None, cap)
    if not full:
        dims = dims[:stable + 2]
    basis = [m for i, m in enumerate(monos) if sum(m) <= stable and i not in ech.pivots]
    return FinitenessReport(list(enumerate(dims)), "finite", dims[stable], cap, basis)


def k_finiteness(f: MapGerm, fiber_dims: int, cap: int = DEFAULT_CAP) -> FinitenessReport:
    """Finiteness of the reduction of a germ given in adapted coordinates."""
    return quotient_dimension_profile(reduce_adapted(f, fiber_dims), cap)


def fiber_count_bound(report: FinitenessReport) -> int:
    if not report.finite:
        raise GermError(f"no fiber bound: local algebra dimension {report.describe()}")
    return report.dimension
