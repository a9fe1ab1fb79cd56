"""Numeric first-return maps of kernel line fields on polynomial atlases.

A :class:`ChartedManifold` is a list of boxes, each carrying a polynomial
vector field and target map, plus polynomial transition maps.  Leaves are
traced with fixed-step RK4; when a step leaves the current box the point is
moved through the first transition whose image lands inside its target box.
Returns to the transversal are detected in the transversal's own chart.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .poly import Polynomial, float_function, parse_polynomial, partial
from .symmetry import GermDiffeo


class FlowError(RuntimeError):
    pass


class LeafExitsAtlas(FlowError):
    pass


class NoReturn(FlowError):
    pass


class TransversalTangency(FlowError):
    pass


def _compile(polys: Sequence[Polynomial]):
    fs = [float_function(p) for p in polys]
    return lambda x: np.array([f(x) for f in fs])


@dataclass
class Chart:
    box: tuple[tuple[float, float], ...]
    field: tuple[Polynomial, ...]
    target: tuple[Polynomial, ...]

    def __post_init__(self):
        self.box = tuple((float(lo), float(hi)) for lo, hi in self.box)
        self.field = tuple(self.field)
        self.target = tuple(self.target)
        self._field = _compile(self.field)
        self._target = _compile(self.target)

    @property
    def dimension(self) -> int:
        return len(self.box)

    def contains(self, x) -> bool:
        return all(lo < xi < hi for xi, (lo, hi) in zip(x, self.box))

    def vector(self, x) -> np.ndarray:
        return self._field(x)

    def value(self, x) -> np.ndarray:
        return self._target(x)


@dataclass
class Transition:
    source: int
    target: int
    map: tuple[Polynomial, ...]

    def __post_init__(self):
        self.map = tuple(self.map)
        self._map = _compile(self.map)
        n = len(self.map)
        self._jac = [[float_function(partial(c, j)) for j in range(n)] for c in self.map]

    def __call__(self, x) -> np.ndarray:
        return self._map(x)

    def jacobian(self, x) -> np.ndarray:
        return np.array([[f(x) for f in row] for row in self._jac])


@dataclass
class ChartedManifold:
    charts: list[Chart]
    transitions: list[Transition]

    def outgoing(self, chart: int) -> list[Transition]:
        return [t for t in self.transitions if t.source == chart]

    def validate(self, samples: int = 40, tol: float = 1e-10, seed: int = 0) -> int:
        """Check on random overlap points that transitions carry fields and targets along.

        Returns the number of overlap points checked.
        """
        rng = np.random.default_rng(seed)
        checked = 0
        for tr in self.transitions:
            src, dst = self.charts[tr.source], self.charts[tr.target]
            lo = np.array([b[0] for b in src.box])
            hi = np.array([b[1] for b in src.box])
            for x in rng.uniform(lo, hi, size=(samples, src.dimension)):
                y = tr(x)
                if not dst.contains(y):
                    continue
                pushed = tr.jacobian(x) @ src.vector(x)
                scale = max(1.0, float(np.max(np.abs(pushed))))
                if np.max(np.abs(pushed - dst.vector(y))) > tol * scale:
                    raise FlowError(f"transition {tr.source}->{tr.target} does not carry the "
                                    f"vector field at {x}")
                fs, fd = src.value(x), dst.value(y)
                if np.max(np.abs(fs - fd)) > tol * max(1.0, float(np.max(np.abs(fs)))):
                    raise FlowError(f"transition {tr.source}->{tr.target} does not preserve "
                                    f"the target map at {x}")
                checked += 1
        return checked


@dataclass
class Transversal:
    """Affine slice ``origin + basis @ s`` of codimension one in chart ``chart``."""

    chart: int
    origin: tuple[float, ...]
    basis: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        self._origin = np.array(self.origin, dtype=float)
        B = np.array(self.basis, dtype=float).reshape(len(self.basis), -1).T
        if B.shape[0] != B.shape[1] + 1:
            raise FlowError("transversal must have codimension one")
        self._B = B
        self._pinv = np.linalg.pinv(B)
        # normal: the left singular vector orthogonal to every basis column
        u, _, _ = np.linalg.svd(B)
        self._normal = u[:, -1]

    def embed(self, s) -> np.ndarray:
        return self._origin + self._B @ np.asarray(s, dtype=float)

    def coordinates(self, x) -> np.ndarray:
        return self._pinv @ (np.asarray(x) - self._origin)

    def level(self, x) -> float:
        return float(self._normal @ (np.asarray(x) - self._origin))

    @property
    def normal(self) -> np.ndarray:
        return self._normal


@dataclass
class ReturnMapSample:
    transversal_points: list[np.ndarray]
    images: list[np.ndarray]
    reference: GermDiffeo
    reference_images: list[np.ndarray]
    max_deviation: float
    steps_taken: list[int] = field(default_factory=list)


def _rk4(chart: Chart, x: np.ndarray, h: float) -> np.ndarray:
    k1 = chart.vector(x)
    k2 = chart.vector(x + 0.5 * h * k1)
    k3 = chart.vector(x + 0.5 * h * k2)
    k4 = chart.vector(x + h * k3)
    return x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def trace_return(manifold: ChartedManifold, transversal: Transversal, s,
                 steps: int, step_size: float, event_tol: float = 1e-9) -> tuple[np.ndarray, int]:
    """First return of the leaf through ``embed(s)`` to the transversal, in slice coordinates."""
    home = transversal.chart
    chart_idx = home
    x = transversal.embed(s)
    chart = manifold.charts[home]
    if not chart.contains(x):
        raise FlowError(f"transversal point {x} lies outside its chart")
    v = chart.vector(x)
    crossing = float(transversal.normal @ v)
    if abs(crossing) <= 1e-12 * max(1.0, float(np.linalg.norm(v))):
        raise TransversalTangency(f"vector field is tangent to the transversal at {x}")
    direction = 1.0 if crossing > 0 else -1.0
    for k in range(steps):
        y = _rk4(chart, x, step_size)
        if chart_idx == home:
            before = direction * transversal.level(x)
            after = direction * transversal.level(y)
            if before < 0 <= after:
                lo, hi = 0.0, step_size
                while hi - lo > event_tol:
                    mid = 0.5 * (lo + hi)
                    if direction * transversal.level(_rk4(chart, x, mid)) < 0:
                        lo = mid
                    else:
                        hi = mid
                hit = _rk4(chart, x, 0.5 * (lo + hi))
                return transversal.coordinates(hit), k + 1
        if not chart.contains(y):
            for tr in manifold.outgoing(chart_idx):
                z = tr(y)
                if manifold.charts[tr.target].contains(z):
                    chart_idx, chart, y = tr.target, manifold.charts[tr.target], z
                    break
            else:
                raise LeafExitsAtlas(f"leaf leaves chart {chart_idx} at {y} with no transition")
        x = y
    raise NoReturn(f"no return to the transversal within {steps} steps")


def numeric_return_map(manifold: ChartedManifold, transversal: Transversal,
                       samples: Sequence[Sequence[float]], reference: GermDiffeo,
                       steps: int = 100_000, step_size: float = 1e-3) -> ReturnMapSample:
    """Trace each sample once around and compare with ``reference`` in slice coordinates."""
    ref = _compile(reference.components)
    points, images, refs, counts = [], [], [], []
    worst = 0.0
    for s in samples:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        image, used = trace_return(manifold, transversal, s, steps, step_size)
        expected = ref(s)
        worst = max(worst, float(np.max(np.abs(image - expected))))
        points.append(s)
        images.append(image)
        refs.append(expected)
        counts.append(used)
    return ReturnMapSample(points, images, reference, refs, worst, counts)


# -- atlases -------------------------------------------------------------------


def _polys(texts: Sequence[str], n: int) -> tuple[Polynomial, ...]:
    return tuple(parse_polynomial(t, nvars=n) for t in texts)


def moebius_atlas(bend_degree: int = 0) -> tuple[ChartedManifold, Transversal, GermDiffeo]:
    """Open Moebius band ``R^2 / (t, x) ~ (t + 1, -x)`` with target ``x^2`` and field ``d/dt``.

    Chart 0 uses ``(t, x)`` on ``t in (-0.1, 0.6)``.  Chart 1 covers ``t in (0.4, 1.1)``;
    with ``bend_degree = k > 0`` it uses ``(u, y) = (t, x + t^k)``, so the field
    there is ``d/du + k u^(k-1) d/dy`` and RK4 has real truncation error.
    """
    t = Polynomial.variable(0, 2)
    x = Polynomial.variable(1, 2)
    one = Polynomial.constant(1, 2)
    k = bend_degree
    bend = t ** k if k else Polynomial.zero(2)
    field_b = (one, partial(bend, 0))
    y_box = (-3.0, 2.0 + 1.1 ** k) if k else (-2.0, 2.0)
    charts = [
        Chart(((-0.1, 0.6), (-2.0, 2.0)), (one, Polynomial.zero(2)), (x ** 2,)),
        Chart(((0.4, 1.1), y_box), field_b, ((x - bend) ** 2,)),
    ]
    transitions = [
        Transition(0, 1, (t, x + bend)),
        Transition(0, 1, (t + 1, -x + bend.subs([t + 1, x]))),
        Transition(1, 0, (t, x - bend)),
        Transition(1, 0, (t - 1, -x + bend)),
    ]
    transversal = Transversal(0, (0.5, 0.0), ((0.0, 1.0),))
    return ChartedManifold(charts, transitions), transversal, GermDiffeo.parse(["-x1"])


def klein_bottle_atlas() -> tuple[ChartedManifold, Transversal, GermDiffeo]:
    """Klein bottle ``T^2 / [x1, x2] ~ [x1 + 1/2, 1 - x2]`` with target ``(x2 - 1/2)^2``.

    Transversal ``x1 = 1/4`` parametrized by ``s = x2 - 1/2``; the expected return
    ``x2 -> 1 - x2`` reads ``s -> -s``.
    """
    target = _polys(("x2^2 - x2 + 1/4",), 2)
    field = _polys(("1", "0"), 2)
    charts = [
        Chart(((0.1, 0.6), (-0.5, 1.5)), field, target),
        Chart(((0.5, 0.7), (-0.5, 1.5)), field, target),
    ]
    transitions = [
        Transition(0, 1, _polys(("x1", "x2"), 2)),
        Transition(1, 0, _polys(("x1", "x2"), 2)),
        Transition(1, 0, _polys(("x1 - 1/2", "1 - x2"), 2)),
        Transition(0, 1, _polys(("x1 + 1/2", "1 - x2"), 2)),
    ]
    transversal = Transversal(0, (0.25, 0.5), ((0.0, 1.0),))
    return ChartedManifold(charts, transitions), transversal, GermDiffeo.parse(["-x1"])


def flat_torus_atlas() -> tuple[ChartedManifold, Transversal, GermDiffeo]:
    """Torus ``R^2 / Z^2`` with the product foliation ``d/dx1`` and target ``x2``."""
    field = _polys(("1", "0"), 2)
    target = _polys(("x2",), 2)
    charts = [
        Chart(((-0.3, 0.6), (-2.0, 2.0)), field, target),
        Chart(((0.4, 0.9), (-2.0, 2.0)), field, target),
    ]
    transitions = [
        Transition(0, 1, _polys(("x1", "x2"), 2)),
        Transition(1, 0, _polys(("x1", "x2"), 2)),
        Transition(1, 0, _polys(("x1 - 1", "x2"), 2)),
        Transition(0, 1, _polys(("x1 + 1", "x2"), 2)),
    ]
    transversal = Transversal(0, (0.0, 0.0), ((0.0, 1.0),))
    return ChartedManifold(charts, transitions), transversal, GermDiffeo.parse(["x1"])


def mapping_torus_atlas(h: Sequence[Polynomial], sigma: GermDiffeo,
                        box: Sequence[tuple], sigma_order: int):
    """Two-chart atlas of ``([0,1] x U) / (0, x) ~ (1, sigma(x))`` with field ``d/dt``.

    Coordinates are ``(t, x_1..x_m)``.  Flowing forward from ``t = 1/2`` returns at
    ``sigma^-1(x)``, which is the reference map returned alongside.
    """
    m = sigma.dimension
    n = m + 1
    inv = GermDiffeo.identity(m)
    for _ in range(sigma_order - 1):
        inv = sigma.compose(inv)
    t = Polynomial.variable(0, n)
    xs = [Polynomial.variable(i + 1, n) for i in range(m)]

    def lift(comps, dt):
        return tuple([t + dt] + [c.extend(n, 1) for c in comps])

    field = tuple([Polynomial.constant(1, n)] + [Polynomial.zero(n)] * m)
    target = tuple(c.extend(n, 1) for c in h)
    xbox = tuple((float(lo), float(hi)) for lo, hi in box)
    charts = [Chart(((-0.1, 0.6),) + xbox, field, target),
              Chart(((0.4, 1.1),) + xbox, field, target)]
    ident = tuple([t] + xs)
    transitions = [
        Transition(0, 1, ident),
        Transition(0, 1, lift(sigma.components, 1)),
        Transition(1, 0, ident),
        Transition(1, 0, lift(inv.components, -1)),
    ]
    origin = (0.5,) + (0.0,) * m
    basis = tuple(tuple(float(i + 1 == j) for j in range(n)) for i in range(m))
    return ChartedManifold(charts, transitions), Transversal(0, origin, basis), inv
