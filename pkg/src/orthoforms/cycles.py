"""Cycle models, tube neighborhoods, and windowed cycle integrals.

Two cycle families are modeled in a fixed Witt frame, each as a transported
copy of a coordinate model:

* positive-norm vectors mu: the real-analytic cycle through the model line
  Z = (i y1', x2', ..., xn'), carried to mu by a real isometry gamma with
  sqrt(q(mu)) gamma b1 = mu;
* negative-norm vectors nu: the complex-codimension-1 cycle modeled on
  {z_n = 0}, with model vector a negative multiple of -b_n so that
  (nu, psi(Z)) = 2 sqrt(|q(nu)|) z_n.

Around the first family, the explicit collar map

    phi_eps:  z1 = eps y1' x1' + i y1',   z_j = x_j' + i eps y1' y_j'

identifies (cycle window) x (-1,1) x B_{n-1} with a tube neighborhood.  Its
boundary has two face families (the x1' = +-1 caps and the |y'| = 1
laterals); integrals of (n, n-1)-forms over the portion of the boundary
above a compact window are computed by exact pullback of the coordinate
hat-basis along phi_eps, with tensor Gauss-Legendre quadrature and a
node-doubling error estimate.

All quadrature faces are oriented against the parameter order
(x1', y1', x2', y2', ...), which is orientation-positive for the domain;
a face freezing the k-th parameter at its boundary with outward direction
d carries the induced sign d (-1)^k.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .calculus import measure_factor
from .domain import BoundaryError, ComponentError, DomainPoint, WittFrame, \
    act, q_plus_minus
from .kernels import action_jacobian
from .quadratic import Vec, as_vec, vec_float

__all__ = [
    "CycleError", "QuadratureError", "CycleChart", "RestrictSample",
    "WindowBump", "transport_to", "tube_boundary_integral",
    "cycle_integral_C", "shell_stokes", "restrict_samples", "restrict_T",
    "cycle_integral_T", "richardson", "hat_sign",
]


class CycleError(ValueError):
    """Invalid cycle data."""


class QuadratureError(ArithmeticError):
    """Node doubling failed to confirm the requested accuracy."""

    def __init__(self, message: str, coarse, fine):
        super().__init__(f"{message}: coarse = {coarse}, fine = {fine}")
        self.coarse = coarse
        self.fine = fine


def hat_sign(n: int, j: int) -> float:
    """Sign s_j relating the j-th hat-basis (n, n-1)-form to the ordered
    product dz_1..dz_n dzbar_1..(skip j)..dzbar_n; j is 1-based."""
    return -1.0 if (n + j + (n * (n - 1)) // 2) % 2 else 1.0


def _top_sign(n: int) -> float:
    """dz_1..dz_n dzbar_1..dzbar_n = this sign times the interleaved
    product of dz_j dzbar_j."""
    return -1.0 if ((n * (n - 1)) // 2) % 2 else 1.0


def richardson(coarse, fine, order: int = 2, ratio: float = 2.0):
    """One extrapolation level for step halving: fine at eps/ratio."""
    w = ratio ** order
    return (w * fine - coarse) / (w - 1.0)


# ---------------------------------------------------------------------------
# transports


def _reflection(g: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Matrix of x -> x - (x, v) v / q(v) for the bilinear form g."""
    qv = 0.5 * float(v @ g @ v)
    return np.eye(len(v)) - np.outer(v, g @ v) / qv


def transport_to(frame: WittFrame, vector: Sequence) -> np.ndarray:
    """A real isometry gamma with sqrt(|q|) gamma (model) = vector, where the
    model is b1 for positive norm and -b_n for negative norm.

    Built from one or two hyperplane reflections; the variant that keeps the
    fixed component of the domain is selected by a probe point.
    """
    g = frame.gram_float
    v = vec_float(as_vec(vector))
    q = float(frame.lattice.q(as_vec(vector)))
    if q == 0:
        raise CycleError("cycle vector must have nonzero norm")
    n = frame.n
    col = 2 if q > 0 else n + 1
    model = frame.from_frame[:, col].astype(float).copy()
    if q < 0:
        model = -model
    target = v / np.sqrt(abs(q))
    if np.max(np.abs(model - target)) < 1e-12:
        return np.eye(len(v))

    candidates = []
    diff = model - target
    qd = 0.5 * float(diff @ g @ diff)
    if abs(qd) > 1e-9:
        candidates.append(_reflection(g, diff))
    summ = -model - target
    qs = 0.5 * float(summ @ g @ summ)
    if abs(qs) > 1e-9:
        candidates.append(_reflection(g, summ) @ _reflection(g, model))

    probe_z = np.full(n, 0.05 + 0.11j, dtype=complex)
    probe_z[0] = 0.1 + 1.2j
    probe = DomainPoint(frame, probe_z)
    for mat in candidates:
        if np.max(np.abs(mat @ model - target)) > 1e-9:
            continue
        try:
            act(frame, mat, probe)
        except (ComponentError, BoundaryError):
            continue
        return mat
    raise CycleError("no component-preserving transport found")


# ---------------------------------------------------------------------------
# charts


@dataclass(frozen=True)
class CycleChart:
    """A windowed model of one cycle: transport, parameter box, node counts."""

    kind: str
    frame: WittFrame
    vector: Vec
    norm: float
    transport: np.ndarray
    window: tuple[tuple[float, float], ...]
    nodes: tuple[int, ...]
    collar_nodes: int

    @classmethod
    def create(cls, frame: WittFrame, vector, window, nodes,
               transport: np.ndarray | None = None, collar_nodes: int = 16,
               validate: bool = True) -> "CycleChart":
        vec = as_vec(vector)
        if len(vec) != frame.lattice.dim:
            raise CycleError("cycle vector has the wrong dimension")
        q = float(frame.lattice.q(vec))
        if q > 0:
            kind, expected_axes = "real_analytic", frame.n
        elif q < 0:
            kind, expected_axes = "algebraic", 2 * (frame.n - 1)
            if frame.n < 2:
                raise CycleError("negative-norm cycles need n >= 2")
        else:
            raise CycleError("cycle vector must have nonzero norm")
        window = tuple((float(a), float(b)) for a, b in window)
        if len(window) != expected_axes:
            raise CycleError(f"window must have {expected_axes} axes")
        if any(not b > a for a, b in window):
            raise CycleError("window intervals must be nondegenerate")
        if kind == "real_analytic" and window[0][0] <= 0:
            raise CycleError("the y1' window must stay positive")
        if kind == "algebraic" and window[1][0] <= 0:
            raise CycleError("the y1' window must stay positive")
        nodes = tuple(int(k) for k in nodes)
        if len(nodes) != expected_axes or any(k < 2 for k in nodes):
            raise CycleError("need at least 2 quadrature nodes per axis")
        if transport is None:
            transport = transport_to(frame, vec)
        transport = np.asarray(transport, dtype=float)
        chart = cls(kind, frame, vec, q, transport, window, nodes,
                    int(collar_nodes))
        if validate:
            chart._check()
        return chart

    # -- validation ---------------------------------------------------------

    def _check(self) -> None:
        g = self.frame.gram_float
        defect = np.max(np.abs(self.transport.T @ g @ self.transport - g))
        if defect > 1e-12:
            raise CycleError(f"transport is not an isometry (defect {defect:.2e})")
        n = self.frame.n
        col = 2 if self.norm > 0 else n + 1
        model = self.frame.from_frame[:, col].astype(float)
        if self.norm < 0:
            model = -model
        target = vec_float(self.vector) / np.sqrt(abs(self.norm))
        carry = np.max(np.abs(self.transport @ model - target))
        if carry > 1e-9:
            raise CycleError(f"transport misses the cycle vector ({carry:.2e})")
        if self.membership_defect() > 1e-10:
            raise CycleError("transported base cycle fails the membership test")

    def membership_defect(self, per_axis: int = 3) -> float:
        """max |q(lambda_{Z-+})| of the cycle vector over a coarse sample of
        transported window nodes (the sign opposite to the vector's norm)."""
        fc = self.frame.frame_coords(self.vector)
        worst = 0.0
        samples = [np.linspace(a, b, per_axis + 2)[1:-1] for a, b in self.window]
        for params in itertools.product(*samples):
            point = self.base_point(np.asarray(params))
            q_plus, q_minus = q_plus_minus(self.frame, fc, point)
            worst = max(worst, abs(q_minus if self.norm > 0 else q_plus))
        return worst

    # -- geometry -----------------------------------------------------------

    @property
    def is_identity_transport(self) -> bool:
        return bool(np.max(np.abs(self.transport -
                                  np.eye(self.frame.lattice.dim))) < 1e-14)

    def model_z(self, params: np.ndarray) -> np.ndarray:
        n = self.frame.n
        z = np.zeros(n, dtype=complex)
        if self.kind == "real_analytic":
            z[0] = 1j * params[0]
            z[1:] = params[1:]
        else:
            pairs = np.asarray(params, dtype=float).reshape(n - 1, 2)
            z[:n - 1] = pairs[:, 0] + 1j * pairs[:, 1]
        return z

    def base_point(self, params: np.ndarray) -> DomainPoint:
        point = DomainPoint(self.frame, self.model_z(params))
        if self.is_identity_transport:
            return point
        moved, _ = act(self.frame, self.transport, point)
        return moved


# ---------------------------------------------------------------------------
# the collar map and its exact partials


def _phi(u: np.ndarray, eps: float) -> np.ndarray:
    """Collar coordinates u = (x1', y1', x2', y2', ...) -> Z."""
    n = len(u) // 2
    x = u[0::2]
    y = u[1::2]
    z = np.empty(n, dtype=complex)
    z[0] = eps * y[0] * x[0] + 1j * y[0]
    for j in range(1, n):
        z[j] = x[j] + 1j * eps * y[0] * y[j]
    return z


def _phi_jacobian(u: np.ndarray, eps: float) -> np.ndarray:
    """d z_a / d u_k as an (n x 2n) complex matrix, in closed form."""
    n = len(u) // 2
    x = u[0::2]
    y = u[1::2]
    dz = np.zeros((n, 2 * n), dtype=complex)
    dz[0, 0] = eps * y[0]
    dz[0, 1] = eps * x[0] + 1j
    for j in range(1, n):
        dz[j, 1] = 1j * eps * y[j]
        dz[j, 2 * j] = 1.0
        dz[j, 2 * j + 1] = 1j * eps * y[0]
    return dz


def _gl_axis(lo: float, hi: float, count: int) -> tuple[np.ndarray, np.ndarray]:
    t, w = np.polynomial.legendre.leggauss(count)
    mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
    return mid + half * t, half * w


class _Face(NamedTuple):
    fixed_index: int
    fixed_value: float
    sign: float
    axes: tuple[tuple[float, float], ...]   # boxes of the free u-params
    counts: tuple[int, ...]


def _tube_faces(chart: CycleChart, scale: int = 1) -> list[_Face]:
    """Boundary faces of the collar cross-section over the chart window."""
    n = chart.frame.n
    w = chart.window
    k = tuple(scale * c for c in chart.nodes)
    collar = scale * chart.collar_nodes
    faces: list[_Face] = []
    if n == 1:
        for sigma in (1.0, -1.0):
            faces.append(_Face(0, sigma, sigma, (w[0],), (k[0],)))
        return faces
    if n == 2:
        cap_axes = (w[0], w[1], (-1.0, 1.0))
        cap_counts = (k[0], k[1], collar)
        for sigma in (1.0, -1.0):
            faces.append(_Face(0, sigma, sigma, cap_axes, cap_counts))
        lat_axes = ((-1.0, 1.0), w[0], w[1])
        lat_counts = (collar, k[0], k[1])
        for c in (1.0, -1.0):
            faces.append(_Face(3, c, -c, lat_axes, lat_counts))
        return faces
    raise CycleError("tube boundary faces are implemented for n <= 2")


def _face_form_integral(chart: CycleChart, face: _Face, eps: float,
                        h: Callable[[DomainPoint], complex],
                        H: Callable[[DomainPoint], np.ndarray]) -> complex:
    """Integral of the (2n-1)-form h H over one boundary face."""
    frame = chart.frame
    n = frame.n
    free = [i for i in range(2 * n) if i != face.fixed_index]
    grids = [_gl_axis(a, b, c) for (a, b), c in zip(face.axes, face.counts)]
    signs = np.array([hat_sign(n, j + 1) for j in range(n)])
    total = 0.0 + 0.0j
    u = np.zeros(2 * n)
    u[face.fixed_index] = face.fixed_value
    for combo in itertools.product(*[range(len(g[0])) for g in grids]):
        weight = 1.0
        for axis, idx in enumerate(combo):
            u[free[axis]] = grids[axis][0][idx]
            weight *= grids[axis][1][idx]
        point = DomainPoint(frame, _phi(u, eps))
        cols = _phi_jacobian(u, eps)[:, free]
        if not chart.is_identity_transport:
            jac = action_jacobian(chart.transport, point)
            point, _ = act(frame, chart.transport, point)
            cols = jac @ cols
        hv = h(point)
        if hv == 0:
            continue
        comps = H(point)
        stacked = np.vstack([cols, np.conj(cols)])
        val = 0.0 + 0.0j
        for j in range(n):
            rows = [r for r in range(2 * n) if r != n + j]
            val += comps[j] * signs[j] * np.linalg.det(stacked[rows])
        total += weight * hv * val
    return face.sign * total


def _doubling(compute: Callable[[int], complex], target: float | None,
              label: str) -> complex:
    if target is None:
        return compute(1)
    coarse = compute(1)
    fine = compute(2)
    scale = max(abs(fine), 1e-14)
    if abs(fine - coarse) > target * scale:
        raise QuadratureError(f"{label} did not converge to {target:.1e}",
                              coarse, fine)
    return fine


def tube_boundary_integral(mu, h: Callable[[DomainPoint], complex],
                           H: Callable[[DomainPoint], np.ndarray],
                           eps: float, chart: CycleChart,
                           target: float = 1e-8) -> complex:
    """Integral of h H over the tube boundary above the chart window.

    Both face families are included: the caps x1' = +-1 and the lateral
    faces where the transverse parameter reaches the unit sphere.  The
    relative quadrature error is estimated by node doubling; failure to
    meet the target raises QuadratureError with both values.
    """
    if chart.kind != "real_analytic":
        raise CycleError("tube boundaries are built around positive-norm cycles")
    if not 0 < eps < 1:
        raise CycleError("eps must lie in (0, 1)")
    if as_vec(mu) != chart.vector:
        raise CycleError("mu does not match the chart vector")

    def compute(scale: int) -> complex:
        return sum(_face_form_integral(chart, face, eps, h, H)
                   for face in _tube_faces(chart, scale))

    return _doubling(compute, target, "tube boundary integral")


# ---------------------------------------------------------------------------
# cycle integral over the real-analytic family


def cycle_integral_C(mu, h: Callable[[DomainPoint], complex], kappa: int,
                     chart: CycleChart, target: float = 1e-10) -> complex:
    """q(mu)^{n/2 - kappa} int_window h (mu, psi(Z))^{kappa - n} dZ, with
    dZ the transported dy1' dx2' ... dxn' orientation."""
    if chart.kind != "real_analytic":
        raise CycleError("cycle_integral_C expects a positive-norm chart")
    if as_vec(mu) != chart.vector:
        raise CycleError("mu does not match the chart vector")
    frame = chart.frame
    fc = frame.frame_coords(chart.vector)
    n = frame.n
    power = chart.norm ** (0.5 * n - kappa)

    def compute(scale: int) -> complex:
        grids = [_gl_axis(a, b, scale * c)
                 for (a, b), c in zip(chart.window, chart.nodes)]
        total = 0.0 + 0.0j
        for combo in itertools.product(*[range(len(g[0])) for g in grids]):
            weight = 1.0
            params = np.empty(n)
            for axis, idx in enumerate(combo):
                params[axis] = grids[axis][0][idx]
                weight *= grids[axis][1][idx]
            point = chart.base_point(params)
            total += weight * h(point) * point.pair(fc) ** (kappa - n)
        return power * total

    return _doubling(compute, target, "cycle integral")


# ---------------------------------------------------------------------------
# shell form of the Stokes argument


def shell_stokes(chart: CycleChart, h_field, p_field,
                 dbar_coeff: Callable[[DomainPoint], complex],
                 eps_pair: tuple[float, float],
                 boundary_target: float = 1e-5,
                 volume_target: float | None = None) -> dict:
    """Check d(h P) = dbar h wedge P + h dbar P on the shell between two
    tube radii.

    h_field must provide .value and .dbar (analytic), p_field maps points to
    hat-basis components of an (n, n-1)-form P, and dbar_coeff gives the
    coefficient of dbar P relative to the invariant measure.  Returns the
    outer/inner boundary integrals, the shell volume integral, and the
    residual outer - inner - volume (window-edge faces vanish when h is
    compactly supported inside the window).
    """
    if chart.frame.n not in (1, 2):
        raise CycleError("shell regions are implemented for n <= 2")
    if not chart.is_identity_transport:
        raise CycleError("shell regions use the model chart")
    e1, e2 = eps_pair
    if not 0 < e1 < e2 < 1:
        raise CycleError("need 0 < eps_inner < eps_outer < 1")
    h = h_field.value
    outer = tube_boundary_integral(chart.vector, h, p_field, e2, chart,
                                   target=boundary_target)
    inner = tube_boundary_integral(chart.vector, h, p_field, e1, chart,
                                   target=boundary_target)
    volume = _shell_volume_integral(chart, h_field, p_field, dbar_coeff,
                                    e1, e2, volume_target)
    residual = outer - inner - volume
    return {"outer": outer, "inner": inner, "volume": volume,
            "residual": residual}


def _shell_strips(n: int, e1: float, e2: float) -> list[tuple]:
    """Cross-section annulus between the collar boxes at radii e1 < e2,
    decomposed into boxes in the (x1', y') collar coordinates."""
    if n == 1:
        return [((e1, e2),), ((-e2, -e1),)]
    return [
        ((e1, e2), (-e2, e2)),
        ((-e2, -e1), (-e2, e2)),
        ((-e1, e1), (e1, e2)),
        ((-e1, e1), (-e2, -e1)),
    ]


def _shell_volume_integral(chart: CycleChart, h_field, p_field, dbar_coeff,
                           e1: float, e2: float,
                           target: float | None) -> complex:
    frame = chart.frame
    n = frame.n
    top = _top_sign(n)

    def compute(scale: int) -> complex:
        total = 0.0 + 0.0j
        for strip in _shell_strips(n, e1, e2):
            axes = []
            counts = []
            # u-order: x1', y1', x2', y2', ...; collar axes are x1' (index 0)
            # and y_j' (odd indices >= 3); window axes fill the rest.
            axes.append(strip[0])
            counts.append(scale * chart.collar_nodes)
            axes.append(chart.window[0])
            counts.append(scale * chart.nodes[0])
            for j in range(1, n):
                axes.append(chart.window[j])
                counts.append(scale * chart.nodes[j])
                axes.append(strip[j])
                counts.append(scale * chart.collar_nodes)
            grids = [_gl_axis(a, b, c) for (a, b), c in zip(axes, counts)]
            for combo in itertools.product(*[range(len(g[0])) for g in grids]):
                weight = 1.0
                u = np.empty(2 * n)
                for axis, idx in enumerate(combo):
                    u[axis] = grids[axis][0][idx]
                    weight *= grids[axis][1][idx]
                point = DomainPoint(frame, _phi(u, 1.0))
                hv = h_field.value(point)
                dbar_h = h_field.dbar(point)
                if hv == 0 and not np.any(dbar_h):
                    continue
                q_factor = measure_factor(n, point.q_y)
                coeff = hv * dbar_coeff(point) - q_factor * complex(
                    dbar_h @ p_field(point))
                dz = _phi_jacobian(u, 1.0)
                det_full = np.linalg.det(np.vstack([dz, np.conj(dz)]))
                total += weight * coeff * top * det_full / q_factor
        return total

    return _doubling(compute, target, "shell volume integral")


# ---------------------------------------------------------------------------
# restriction to the algebraic family


class RestrictSample(NamedTuple):
    params: tuple[float, ...]
    weight: float
    value: complex          # slot-n fiber integral at eps
    extrapolated: complex   # one Richardson level, eps -> eps/2
    all_slots: np.ndarray   # per-slot fiber integrals at eps


class WindowBump:
    """Smooth compactly supported window weight h(Z) for a cycle chart.

    For the real-analytic family the factors depend on (Im z1, Re z2, ...);
    the complex-analytic dbar gradient is available in closed form, so the
    Stokes checks need no finite differences.
    """

    def __init__(self, chart: CycleChart, power: int = 4):
        if chart.kind != "real_analytic":
            raise CycleError("window bumps are tied to real-analytic charts")
        self.window = chart.window
        self.power = power

    def _factors(self, t: float, lo: float, hi: float) -> tuple[float, float]:
        if not lo < t < hi:
            return 0.0, 0.0
        span = hi - lo
        w = 4.0 * (t - lo) * (hi - t) / span ** 2
        dw = 4.0 * (lo + hi - 2.0 * t) / span ** 2
        p = self.power
        return w ** p, p * w ** (p - 1) * dw

    def _coords(self, point: DomainPoint) -> np.ndarray:
        out = np.empty(len(self.window))
        out[0] = point.y[0]
        out[1:] = point.x[1:]
        return out

    def value(self, point: DomainPoint) -> float:
        t = self._coords(point)
        out = 1.0
        for ti, (lo, hi) in zip(t, self.window):
            out *= self._factors(ti, lo, hi)[0]
        return out

    def dbar(self, point: DomainPoint) -> np.ndarray:
        t = self._coords(point)
        vals, grads = [], []
        for ti, (lo, hi) in zip(t, self.window):
            v, d = self._factors(ti, lo, hi)
            vals.append(v)
            grads.append(d)
        n = len(t)
        out = np.zeros(n, dtype=complex)
        for j in range(n):
            rest = 1.0
            for k in range(n):
                if k != j:
                    rest *= vals[k]
            # d y1 / d zbar_1 = i/2; d x_j / d zbar_j = 1/2
            out[j] = grads[j] * rest * (0.5j if j == 0 else 0.5)
        return out

    def __call__(self, point: DomainPoint) -> float:
        return self.value(point)


def _circle_point(chart: CycleChart, params: np.ndarray,
                  radius: float, theta: float) -> DomainPoint:
    z = chart.model_z(params)
    z[-1] = radius * np.exp(1j * theta)
    return DomainPoint(chart.frame, z)


def _fiber_integral(chart: CycleChart, H, kappa: int, params: np.ndarray,
                    eps: float, sector: str, angle_nodes: int,
                    target: float) -> np.ndarray:
    """Per-slot circle integrals of H / (nu, psi)^kappa at one base node."""
    frame = chart.frame
    n = frame.n
    s = np.sqrt(abs(chart.norm))
    y_prime = np.zeros(n)
    pairs = np.asarray(params, dtype=float).reshape(n - 1, 2)
    y_prime[:n - 1] = pairs[:, 1]
    q_y_prime = float(frame.eps[:n - 1] @ (pairs[:, 1] ** 2))
    if q_y_prime <= 0:
        raise CycleError("window node leaves the domain (q(Y') <= 0)")
    radius = eps * np.sqrt(q_y_prime)

    def trapezoid(count: int) -> tuple[np.ndarray, np.ndarray]:
        acc = np.zeros(n, dtype=complex)
        mass = np.zeros(n)
        step = 2.0 * np.pi / count
        for k in range(count):
            theta = step * k
            point = _circle_point(chart, params, radius, theta)
            z_n = radius * np.exp(1j * theta)
            comps = np.asarray(H(point), dtype=complex)
            denom = (2.0 * s * z_n) ** kappa
            if sector == "holomorphic":
                slot_weight = 1j * radius * np.exp(1j * theta)
            else:
                slot_weight = -1j * radius * np.exp(-1j * theta)
            area_weight = 2j * radius
            weights = np.full(n, area_weight, dtype=complex)
            weights[-1] = slot_weight
            term = comps * weights / denom
            acc += term
            mass += np.abs(term)
        return acc * step, mass * step

    coarse, _ = trapezoid(angle_nodes)
    fine, mass = trapezoid(2 * angle_nodes)
    # tolerate pure-cancellation slots: the achievable accuracy is bounded
    # below by roundoff on the accumulated L1 mass
    floor = np.maximum(target * np.abs(fine), 1e-13 * mass + 1e-16)
    if np.any(np.abs(fine - coarse) > floor):
        raise QuadratureError("circle integral did not converge",
                              coarse, fine)
    return fine


def restrict_samples(nu, H: Callable[[DomainPoint], np.ndarray], kappa: int,
                     eps: float, chart: CycleChart,
                     sector: str = "holomorphic", angle_nodes: int = 256,
                     target: float = 1e-9,
                     richardson_order: int = 2) -> list[RestrictSample]:
    """Circle integrals of H / (nu, psi(Z))^kappa at the chart's window
    nodes, for radius eps sqrt(q(Y')) and the halved radius, with one
    Richardson level on the slot-n value.

    sector selects the fiber 1-form factor: "holomorphic" pairs the last
    slot with dz_n (residue-type integrals survive), "conjugate" pairs it
    with dzbar_n (all real-analytic integrands vanish as eps -> 0).  The
    remaining slots carry the phase-free dz_n wedge dzbar_n fiber factor in
    either sector; they vanish linearly in eps and are reported for
    diagnostics.
    """
    if chart.kind != "algebraic":
        raise CycleError("restriction expects a negative-norm chart")
    if not chart.is_identity_transport:
        raise CycleError("restriction is implemented in the model chart")
    if as_vec(nu) != chart.vector:
        raise CycleError("nu does not match the chart vector")
    if sector not in ("holomorphic", "conjugate"):
        raise CycleError("sector must be 'holomorphic' or 'conjugate'")
    grids = [_gl_axis(a, b, c) for (a, b), c in zip(chart.window, chart.nodes)]
    out: list[RestrictSample] = []
    for combo in itertools.product(*[range(len(g[0])) for g in grids]):
        params = np.empty(len(grids))
        weight = 1.0
        for axis, idx in enumerate(combo):
            params[axis] = grids[axis][0][idx]
            weight *= grids[axis][1][idx]
        slots = _fiber_integral(chart, H, kappa, params, eps, sector,
                                angle_nodes, target)
        half = _fiber_integral(chart, H, kappa, params, eps / 2.0, sector,
                               angle_nodes, target)
        value = complex(slots[-1])
        extr = complex(richardson(value, half[-1], order=richardson_order))
        out.append(RestrictSample(tuple(params), weight, value, extr, slots))
    return out


def restrict_T(nu, H: Callable[[DomainPoint], np.ndarray], kappa: int,
               eps: float, chart: CycleChart,
               angle_nodes: int = 256,
               target: float = 1e-9) -> list[RestrictSample]:
    """Restriction samples of the (n, n-1)-form field H on the window of a
    negative-norm cycle: at each node, the circle integral at radius
    eps sqrt(q(Y')) and its Richardson eps -> 0 extrapolation."""
    return restrict_samples(nu, H, kappa, eps, chart, "holomorphic",
                            angle_nodes, target)


def cycle_integral_T(nu, H: Callable[[DomainPoint], np.ndarray], kappa: int,
                     eps: float, chart: CycleChart,
                     angle_nodes: int = 256, target: float = 1e-8) -> complex:
    """Window integral of the extrapolated restriction of H.

    Only the slot-n fiber integral survives the eps -> 0 limit; the base
    form it multiplies is dz_1..dz_{n-1} dzbar_1..dzbar_{n-1} up to the
    hat-basis sign, converted to the real window measure."""
    n = chart.frame.n
    samples = restrict_T(nu, H, kappa, eps, chart, angle_nodes, target)
    base = sum(s.weight * s.extrapolated for s in samples)
    m = n - 1
    reorder = hat_sign(n, n) * (-1.0) ** m * _top_sign(m)
    return complex(reorder * (-2.0j) ** m * base)
