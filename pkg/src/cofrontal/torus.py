"""Mapping-torus cofrontals ``[t, x] -> h_i(x)`` on ``([0,1] x U_i) / (0, x) ~ (1, sigma_i(x))``.

Pieces are validated exactly (symmetry as a polynomial identity, finite order,
box invariance by interval arithmetic); fibers over a target value are counted
as circles, one per ``sigma_i``-orbit of roots of ``h_i = b``.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import roots as uroots
from .germ import MapGerm
from .local_algebra import DEFAULT_CAP, fiber_count_bound, quotient_dimension_profile
from .poly import Polynomial, evaluate, float_function, partial
from .symmetry import (
    DEFAULT_ORDER_CAP,
    GermDiffeo,
    SymmetryError,
    check_right_symmetry,
    diffeo_order,
)

Box = tuple[tuple[Fraction, Fraction], ...]
BOUNDARY_MARGIN = 1e-3
DEDUP_RADIUS = 1e-6


class TorusError(ValueError):
    pass


class CensusInconsistency(TorusError):
    pass


# -- interval arithmetic -------------------------------------------------------


def _ipow(lo: Fraction, hi: Fraction, e: int) -> tuple[Fraction, Fraction]:
    if e == 0:
        return Fraction(1), Fraction(1)
    a, b = lo ** e, hi ** e
    if e % 2 == 0:
        if lo <= 0 <= hi:
            return Fraction(0), max(a, b)
        return min(a, b), max(a, b)
    return a, b


def interval_eval(p: Polynomial, box: Sequence[tuple[Fraction, Fraction]]) -> tuple[Fraction, Fraction]:
    """Enclosure of ``p`` over a box (exact rational interval arithmetic)."""
    total_lo = total_hi = Fraction(0)
    for mono, c in p.terms.items():
        lo = hi = Fraction(1)
        for (a, b), e in zip(box, mono):
            if not e:
                continue
            plo, phi = _ipow(a, b, e)
            cands = (lo * plo, lo * phi, hi * plo, hi * phi)
            lo, hi = min(cands), max(cands)
        cands = (c * lo, c * hi)
        total_lo += min(cands)
        total_hi += max(cands)
    return total_lo, total_hi


def make_box(bounds: Sequence[Sequence]) -> Box:
    box = tuple((Fraction(lo), Fraction(hi)) for lo, hi in bounds)
    for lo, hi in box:
        if not lo < 0 < hi:
            raise TorusError(f"box interval ({lo}, {hi}) must contain 0 in its interior")
    return box


def in_box(point: Sequence, box: Box) -> bool:
    return all(lo < x < hi for x, (lo, hi) in zip(point, box))


# -- construction --------------------------------------------------------------


@dataclass(frozen=True)
class TorusPiece:
    germ: MapGerm
    symmetry: GermDiffeo
    domain: Box
    symmetry_order: int

    @property
    def m(self) -> int:
        return self.germ.m


@dataclass(frozen=True)
class MappingTorusCofrontal:
    pieces: tuple[TorusPiece, ...]
    target_dimension: int

    @property
    def source_dimension(self) -> int:
        return self.target_dimension + 1


def _check_box_invariance(sigma: GermDiffeo, box: Box) -> None:
    # vertices first for a readable error, then the interval bound over the box
    n = len(box)
    for k in range(2 ** n):
        vertex = tuple(box[i][(k >> i) & 1] for i in range(n))
        image = tuple(evaluate(c, vertex) for c in sigma.components)
        for i, (y, (lo, hi)) in enumerate(zip(image, box)):
            if not lo <= y <= hi:
                raise TorusError(f"symmetry maps box vertex {tuple(map(str, vertex))} "
                                 f"outside the box (coordinate {i + 1} -> {y})")
    for i, (c, (lo, hi)) in enumerate(zip(sigma.components, box)):
        ilo, ihi = interval_eval(c, box)
        if ilo < lo or ihi > hi:
            raise TorusError(f"cannot certify that the symmetry maps the box into itself: "
                             f"component {i + 1} ranges in [{ilo}, {ihi}]")


def make_piece(germ: MapGerm, symmetry: GermDiffeo, box: Sequence[Sequence],
               order_cap: int = DEFAULT_ORDER_CAP) -> TorusPiece:
    if germ.n != germ.m:
        raise TorusError(f"piece germs must be equidimensional, got {germ.n} -> {germ.m}")
    if symmetry.dimension != germ.n:
        raise TorusError("symmetry dimension does not match the germ")
    box = make_box(box)
    if len(box) != germ.n:
        raise TorusError(f"box has {len(box)} intervals, germ has {germ.n} variables")
    cert = check_right_symmetry(germ, symmetry)
    if not cert.verified:
        raise TorusError(f"symmetry check failed: h o sigma != h; {cert.describe()}")
    order = diffeo_order(symmetry, order_cap)
    if order is None:
        raise TorusError(f"symmetry order undecided within cap {order_cap}")
    _check_box_invariance(symmetry, box)
    return TorusPiece(germ, symmetry, box, order)


def assemble(pieces_spec: Sequence[tuple[MapGerm, GermDiffeo, Sequence[Sequence]]],
             order_cap: int = DEFAULT_ORDER_CAP) -> MappingTorusCofrontal:
    """Validate pieces ``(h_i, sigma_i, box_i)`` and build the glued cofrontal."""
    if not pieces_spec:
        raise TorusError("need at least one piece")
    pieces = []
    for k, (germ, sigma, box) in enumerate(pieces_spec):
        try:
            pieces.append(make_piece(germ, sigma, box, order_cap))
        except (TorusError, SymmetryError) as exc:
            raise TorusError(f"piece {k}: {exc}") from exc
    dims = {p.m for p in pieces}
    if len(dims) != 1:
        raise TorusError(f"pieces have different target dimensions {sorted(dims)}")
    return MappingTorusCofrontal(tuple(pieces), dims.pop())


def evaluate_point(torus: MappingTorusCofrontal, piece_index: int, t, point: Sequence):
    """Value of the cofrontal at ``[t, x]``; independent of ``t``."""
    piece = torus.pieces[piece_index]
    if not 0 <= t <= 1:
        raise TorusError(f"t = {t} outside [0, 1]")
    if len(point) != piece.m or not in_box(point, piece.domain):
        raise TorusError(f"point {tuple(map(str, point))} outside the domain box")
    return piece.germ(*point)


# -- fiber census --------------------------------------------------------------


@dataclass(frozen=True)
class Circle:
    piece: int
    representative: object
    wrapping: int


@dataclass
class PieceCensus:
    roots: list
    orbits: list[list[int]]
    bound: int | None = None


@dataclass
class FiberCensus:
    target_value: tuple[Fraction, ...]
    pieces: list[PieceCensus]
    circles: list[Circle]
    warnings: list[str] = field(default_factory=list)

    @property
    def total_circles(self) -> int:
        return len(self.circles)

    def wrapping_multiset(self, piece: int | None = None) -> Counter:
        return Counter(c.wrapping for c in self.circles if piece is None or c.piece == piece)

    def summary(self) -> str:
        if not self.circles:
            return "0 circles"
        parts = ", ".join(f"wrapping {w}" + (f" x{k}" if k > 1 else "")
                          for w, k in sorted(self.wrapping_multiset().items()))
        noun = "circle" if self.total_circles == 1 else "circles"
        return f"{self.total_circles} {noun}, {parts}"


def _orbits(perm: list[int]) -> list[list[int]]:
    seen = set()
    out = []
    for start in range(len(perm)):
        if start in seen:
            continue
        orbit = []
        k = start
        while k not in seen:
            seen.add(k)
            orbit.append(k)
            k = perm[k]
        if k != start:
            raise CensusInconsistency("symmetry does not permute the roots")
        out.append(orbit)
    return out


def _census_1d(piece: TorusPiece, b: Fraction):
    h = piece.germ.components[0] - b
    if h.is_zero():
        raise TorusError("h - b vanishes identically; the fiber is not finite")
    (lo, hi), = piece.domain
    iso = uroots.RootIsolator(uroots.from_polynomial(h))
    found = iso.isolate(lo, hi)
    sigma = piece.symmetry.components[0]
    width = Fraction(1, 2 ** 40)
    for _ in range(60):
        found = [iso.refine(r, width) for r in found]
        perm = []
        for r in found:
            if r.exact:
                img = evaluate(sigma, (r.lo,))
                ilo = ihi = img
            else:
                ilo, ihi = interval_eval(sigma, ((r.lo, r.hi),))
            perm.append([j for j, s in enumerate(found) if s.overlaps(ilo, ihi)])
        if all(len(c) == 1 for c in perm):
            return found, [c[0] for c in perm]
        if any(len(c) == 0 for c in perm):
            raise CensusInconsistency("symmetry image of a root matches no root")
        width /= 2 ** 8
    raise CensusInconsistency("could not separate symmetry images of roots")


def _newton_roots(piece: TorusPiece, b: Sequence[Fraction], grid: int = 15):
    comps = piece.germ.components
    F = [float_function(c - bi) for c, bi in zip(comps, b)]
    J = [[float_function(partial(c, j)) for j in range(piece.m)] for c in comps]
    box = [(float(lo), float(hi)) for lo, hi in piece.domain]
    axes = [np.linspace(lo, hi, grid + 2)[1:-1] for lo, hi in box]
    roots: list[np.ndarray] = []
    for seed in np.array(np.meshgrid(*axes, indexing="ij")).reshape(piece.m, -1).T:
        x = seed.astype(float)
        ok = False
        # a small residual alone is not convergence: near a multiple root |f|
        # is tiny long before x settles, so wait for the step to vanish
        for _ in range(400):
            fx = np.array([fi(x) for fi in F])
            if not np.any(fx):
                ok = True
                break
            jx = np.array([[jij(x) for jij in row] for row in J])
            try:
                step = np.linalg.solve(jx, fx)
            except np.linalg.LinAlgError:
                break
            x = x - step
            if not np.all(np.isfinite(x)) or np.max(np.abs(x)) > 1e6:
                break
            if np.max(np.abs(step)) < 1e-13:
                ok = np.max(np.abs([fi(x) for fi in F])) < 1e-10
                break
        if not ok or not in_box(x, box):
            continue
        if all(np.linalg.norm(x - r) > DEDUP_RADIUS for r in roots):
            roots.append(x)
    roots.sort(key=tuple)
    return roots


def _census_2d(piece: TorusPiece, b: Sequence[Fraction], cap: int):
    report = quotient_dimension_profile(piece.germ, cap)
    if not report.finite:
        raise TorusError("numeric census needs a K-finite germ; local algebra "
                         f"dimension is {report.describe()}")
    bound = fiber_count_bound(report)
    found = _newton_roots(piece, b)
    if len(found) > bound:
        raise CensusInconsistency(f"Newton census found {len(found)} roots, "
                                  f"more than the local-algebra bound {bound}")
    sigma = [float_function(c) for c in piece.symmetry.components]
    perm = []
    for x in found:
        y = np.array([s(x) for s in sigma])
        dists = [np.linalg.norm(y - r) for r in found]
        j = int(np.argmin(dists)) if dists else -1
        if j < 0 or dists[j] > DEDUP_RADIUS:
            raise CensusInconsistency(f"symmetry image of root {x} matches no root")
        perm.append(j)
    return found, perm, bound


def _root_near_boundary(root, box: Box) -> bool:
    coords = [float(root)] if isinstance(root, uroots.RootEnclosure) else list(root)
    return any(min(abs(x - float(lo)), abs(float(hi) - x)) < BOUNDARY_MARGIN
               for x, (lo, hi) in zip(coords, box))


def fiber_census(torus: MappingTorusCofrontal, b: Sequence, cap: int = DEFAULT_CAP) -> FiberCensus:
    """Circles of the fiber over ``b``: one per symmetry orbit of roots, wrapping = orbit size."""
    b = tuple(Fraction(x) for x in b)
    if len(b) != torus.target_dimension:
        raise TorusError(f"target value has {len(b)} coordinates, expected {torus.target_dimension}")
    if torus.target_dimension > 2:
        raise TorusError("fiber census supports target dimension 1 or 2")
    pieces = []
    circles = []
    warnings = []
    for k, piece in enumerate(torus.pieces):
        if piece.m == 1:
            found, perm = _census_1d(piece, b[0])
            # informational only: the bound is local at 0, the box need not be small
            report = quotient_dimension_profile(piece.germ, cap)
            bound = report.dimension if report.finite else None
        else:
            found, perm, bound = _census_2d(piece, b, cap)
        orbits = _orbits(perm)
        pieces.append(PieceCensus(found, orbits, bound))
        for orbit in orbits:
            circles.append(Circle(k, found[orbit[0]], len(orbit)))
        for r in found:
            if _root_near_boundary(r, piece.domain):
                warnings.append(f"piece {k}: root {r} lies within {BOUNDARY_MARGIN} "
                                "of the box boundary; a smaller box may exclude it")
    return FiberCensus(b, pieces, circles, warnings)


# -- invariance under coordinate changes ---------------------------------------


def _monomial_matrix(change: GermDiffeo) -> tuple[list[int], list[Fraction]]:
    """``x_i = scale[i] * y[perm[i]]`` for a signed permutation-with-scaling change."""
    if not change.is_linear():
        raise TorusError("coordinate change must be linear")
    perm, scale = [], []
    for row in change.linear_matrix():
        nz = [j for j, a in enumerate(row) if a != 0]
        if len(nz) != 1:
            raise TorusError("coordinate change must map boxes to boxes "
                             "(one nonzero entry per row)")
        perm.append(nz[0])
        scale.append(row[nz[0]])
    return perm, scale


def transform_piece(piece: TorusPiece, change: GermDiffeo) -> TorusPiece:
    """Piece for ``h o A`` with ``A^-1 o sigma o A`` on the box ``A^-1(U)``."""
    perm, scale = _monomial_matrix(change)
    inv, _ = change.inverse()
    sigma = inv.compose(piece.symmetry).compose(change)
    germ = piece.germ.compose(list(change.components))
    box: list = [None] * len(perm)
    for i, ((lo, hi), s) in enumerate(zip(piece.domain, scale)):
        a, b = lo / s, hi / s
        box[perm[i]] = (min(a, b), max(a, b))
    return make_piece(germ, sigma, box, max(piece.symmetry_order, 1))


def random_box_change(m: int, rng: random.Random) -> GermDiffeo:
    scales = [Fraction(1, 2), Fraction(2, 3), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)]
    perm = list(range(m))
    rng.shuffle(perm)
    matrix = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        matrix[i][perm[i]] = rng.choice(scales) * rng.choice((1, -1))
    return GermDiffeo.linear(matrix)


@dataclass
class ConsistencyReport:
    original: FiberCensus
    transformed: FiberCensus
    changes: list[GermDiffeo]

    @property
    def consistent(self) -> bool:
        if self.original.total_circles != self.transformed.total_circles:
            return False
        return all(self.original.wrapping_multiset(k) == self.transformed.wrapping_multiset(k)
                   for k in range(len(self.original.pieces)))


def census_vs_construction(torus: MappingTorusCofrontal, b: Sequence,
                           changes: Sequence[GermDiffeo] | None = None,
                           seed: int = 0) -> ConsistencyReport:
    """Census before and after precomposing each piece with a linear change of coordinates.

    Random changes are signed permutations with rational scalings, which keep
    the domain an axis-aligned box.
    """
    original = fiber_census(torus, b)
    if changes is None:
        rng = random.Random(seed)
        changes = [random_box_change(p.m, rng) for p in torus.pieces]
    if len(changes) != len(torus.pieces):
        raise TorusError("need one coordinate change per piece")
    moved = MappingTorusCofrontal(
        tuple(transform_piece(p, A) for p, A in zip(torus.pieces, changes)),
        torus.target_dimension)
    return ConsistencyReport(original, fiber_census(moved, b), list(changes))


def describe_root(root) -> str:
    if isinstance(root, uroots.RootEnclosure):
        return str(root)
    return "(" + ", ".join(f"{x:.9g}" for x in root) + ")"


def describe_piece(piece: TorusPiece) -> str:
    box = " x ".join(f"({lo}, {hi})" for lo, hi in piece.domain)
    return (f"h = {piece.germ}, sigma = {piece.symmetry} (order {piece.symmetry_order}), "
            f"U = {box}")

