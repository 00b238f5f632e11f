"""Tube-domain model of the hermitian symmetric space attached to a lattice
of signature (2, n).

A Witt frame (e, e', K) splits V = L (x) Q as  Q e + Q e~' + W  with
e, e~' isotropic, (e, e~') = 1 and W = K (x) Q of signature (1, n-1).  Points
are Z = X + iY in W(C) with q(Y) > 0, normalized to the component y_1 > 0 in
an orthonormalized basis b_1, ..., b_n with (b_i, b_j) = 2 eps_i delta_ij,
eps_1 = +1, eps_j = -1 otherwise.  The isotropic lift is
psi(Z) = Z - q(Z) e + e~'.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .quadratic import (Isometry, LatticeError, QuadraticLattice, Vec, as_vec,
                        majorant_gram, vec_float, vec_scale, vec_sub)

FRAME_TOL = 1e-12


class ComponentError(ValueError):
    """Raised when a point leaves the fixed connected component."""


class BoundaryError(ValueError):
    """Raised when an isometry sends a point to the boundary (j ~ 0)."""


def _canonical_sign(col: np.ndarray) -> np.ndarray:
    idx = int(np.argmax(np.abs(col)))
    return -col if col[idx] < 0 else col


@dataclass(frozen=True)
class WittFrame:
    """Frame data: exact isotropic pair plus a float orthonormalized W-basis.

    ``from_frame`` has columns (e, e~', b_1, ..., b_n) in lattice coordinates;
    ``to_frame`` is its inverse, so frame coordinates of v are to_frame @ v.
    """

    lattice: QuadraticLattice
    e: Vec
    e_prime: Vec
    e_tilde: Vec
    basis: np.ndarray          # (dim, n) columns b_j
    from_frame: np.ndarray     # (dim, dim)
    to_frame: np.ndarray       # (dim, dim)

    @classmethod
    def build(cls, lattice: QuadraticLattice, e: Sequence,
              e_prime: Sequence) -> "WittFrame":
        e = as_vec(e)
        ep = as_vec(e_prime)
        if lattice.q(e) != 0:
            raise LatticeError("e must be isotropic")
        if lattice.bilinear(e, ep) != 1:
            raise LatticeError("(e, e') must equal 1")
        et = vec_sub(ep, vec_scale(lattice.q(ep), e))
        g = lattice.gram_float()
        d = lattice.dim
        ef, etf = vec_float(e), vec_float(et)
        # project the standard basis onto the complement of span(e, e~')
        proj = np.eye(d) - np.outer(ef, g @ etf) - np.outer(etf, g @ ef)
        s = proj.T @ g @ proj
        eig, vecs = np.linalg.eigh(s)
        tol = 1e-9 * max(1.0, float(np.max(np.abs(eig))))
        pos = [i for i in range(d) if eig[i] > tol]
        neg = [i for i in range(d) if eig[i] < -tol]
        n = d - 2
        if len(pos) != 1 or len(neg) != n - 1:
            raise LatticeError("orthogonal part is not of signature (1, n-1)")
        cols = []
        for i in pos + neg:
            b = proj @ vecs[:, i] * np.sqrt(2.0 / abs(eig[i]))
            cols.append(_canonical_sign(b))
        basis = np.array(cols).T
        from_frame = np.column_stack([ef, etf, basis])
        to_frame = np.linalg.inv(from_frame)
        frame = cls(lattice, e, ep, et, basis, from_frame, to_frame)
        frame._check()
        return frame

    @property
    def n(self) -> int:
        return self.lattice.dim - 2

    @cached_property
    def eps(self) -> np.ndarray:
        v = -np.ones(self.n)
        v[0] = 1.0
        return v

    @cached_property
    def gram_float(self) -> np.ndarray:
        return self.lattice.gram_float()

    @cached_property
    def e_float(self) -> np.ndarray:
        return vec_float(self.e)

    def _check(self) -> None:
        g = self.gram_float
        b = self.basis
        gram_w = b.T @ g @ b
        target = 2.0 * np.diag(self.eps)
        if np.max(np.abs(gram_w - target)) > 1e-9:
            raise LatticeError("W-basis failed orthonormalization")
        err = np.max(np.abs(self.to_frame @ self.from_frame - np.eye(self.lattice.dim)))
        if err > 1e-9:
            raise LatticeError("frame matrix is not invertible to tolerance")

    # -- coordinate transport -----------------------------------------------

    def frame_coords(self, v: Sequence) -> np.ndarray:
        """Frame coordinates (v_e, v_e', v_1..v_n) of a lattice-coordinate
        vector (real)."""
        return self.to_frame @ vec_float(as_vec(v))

    def lattice_coords(self, fc: np.ndarray) -> np.ndarray:
        return self.from_frame @ fc

    # -- core scalars -------------------------------------------------------

    def q_w(self, w: np.ndarray):
        """q on W in the orthonormalized coordinates (works on complex)."""
        return (self.eps * w * w).sum(axis=-1)

    def pair_w(self, u: np.ndarray, v: np.ndarray):
        return 2.0 * (self.eps * u * v).sum(axis=-1)

    def q_lambda(self, lam: np.ndarray) -> float:
        """q of a vector given in frame coordinates."""
        return float(lam[0] * lam[1] + self.q_w(lam[2:]))

    def pair_psi(self, lam: np.ndarray, z: np.ndarray):
        """(lambda, psi(Z)) for lambda in frame coordinates, Z in W(C)."""
        return lam[0] - lam[1] * self.q_w(z) + 2.0 * (self.eps * lam[2:] * z).sum()

    def pair_psi_bar(self, lam: np.ndarray, z: np.ndarray):
        return self.pair_psi(lam, np.conj(z))


@dataclass(frozen=True)
class DomainPoint:
    """A point Z = X + iY of the tube domain over a fixed frame."""

    frame: WittFrame
    z: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z, dtype=complex)
        object.__setattr__(self, "z", z)
        if len(z) != self.frame.n:
            raise ValueError("dimension mismatch")
        if self.q_y <= 0:
            raise ComponentError("q(Y) must be positive")
        if z[0].imag <= 0:
            raise ComponentError("point lies in the wrong component (y_1 <= 0)")

    @property
    def x(self) -> np.ndarray:
        return self.z.real

    @property
    def y(self) -> np.ndarray:
        return self.z.imag

    @cached_property
    def q_y(self) -> float:
        return float(self.frame.q_w(self.y))

    @cached_property
    def q_z(self) -> complex:
        return complex(self.frame.q_w(self.z))

    @cached_property
    def psi(self) -> np.ndarray:
        """psi(Z) in lattice coordinates (complex)."""
        fc = np.concatenate(([-self.q_z, 1.0], self.z))
        return self.frame.from_frame.astype(complex) @ fc

    @cached_property
    def psi_x(self) -> np.ndarray:
        return self.psi.real

    @cached_property
    def psi_y(self) -> np.ndarray:
        return self.psi.imag

    def pair(self, lam: np.ndarray) -> complex:
        """(lambda, psi(Z)); lam in frame coordinates."""
        return complex(self.frame.pair_psi(lam, self.z))

    def pair_bar(self, lam: np.ndarray) -> complex:
        return complex(self.frame.pair_psi(lam, np.conj(self.z)))

    def replace(self, z: np.ndarray) -> "DomainPoint":
        return DomainPoint(self.frame, z)


# ---------------------------------------------------------------------------
# group action


def act(frame: WittFrame, sigma, point: DomainPoint) -> tuple[DomainPoint, complex]:
    """Apply an isometry to a point; returns (sigma Z, j(sigma, Z)) where
    j(sigma, Z) = (e, sigma psi(Z)) is the factor of automorphy."""
    mat = sigma.float_matrix() if isinstance(sigma, Isometry) else np.asarray(sigma, dtype=float)
    w = mat.astype(complex) @ point.psi
    j = complex(frame.e_float @ frame.gram_float @ w)
    if abs(j) < 1e-12:
        raise BoundaryError("isometry maps the point to the boundary")
    fc = frame.to_frame.astype(complex) @ (w / j)
    z_new = fc[2:]
    try:
        return DomainPoint(frame, z_new), j
    except ComponentError as exc:
        raise ComponentError(
            f"isometry leaves the fixed component: {exc}") from exc


def slash(frame: WittFrame, sigma, h: Callable[[DomainPoint], complex],
          kappa: int, point: DomainPoint) -> complex:
    """(h |_kappa sigma)(Z) = j(sigma, Z)^-kappa h(sigma Z)."""
    moved, j = act(frame, sigma, point)
    return j ** (-kappa) * h(moved)


# ---------------------------------------------------------------------------
# projections and the majorant at a point


def project(frame: WittFrame, lam_lattice: Sequence,
            point: DomainPoint) -> tuple[np.ndarray, float, float]:
    """Project a (real, lattice-coordinate) vector onto the positive-definite
    plane attached to the point.

    Returns (vec_plus in lattice coordinates, q_plus, q_minus), computed from
    the real/imaginary parts of psi(Z); q_plus is also cross-checked against
    the product formula (pair * pair_bar) / (4 q(Y)) by the geometry suite.
    """
    lam = vec_float(as_vec(lam_lattice))
    g = frame.gram_float
    qy = point.q_y
    a = float(lam @ g @ point.psi_x) / (2 * qy)
    b = float(lam @ g @ point.psi_y) / (2 * qy)
    vec_plus = a * point.psi_x + b * point.psi_y
    q_plus = (a * a + b * b) * qy
    q_minus = float(frame.lattice.q(as_vec(lam_lattice))) - q_plus
    return vec_plus, q_plus, q_minus


def q_plus_minus(frame: WittFrame, lam_frame: np.ndarray,
                 point: DomainPoint) -> tuple[float, float]:
    """(q_plus, q_minus) from the product formula, for frame coordinates."""
    pair = point.pair(lam_frame)
    pair_b = point.pair_bar(lam_frame)
    q_plus = (pair * pair_b).real / (4.0 * point.q_y)
    return q_plus, frame.q_lambda(lam_frame) - q_plus


def majorant_at(frame: WittFrame, point: DomainPoint) -> np.ndarray:
    return majorant_gram(frame.lattice, point.psi_x, point.psi_y, point.q_y)


# ---------------------------------------------------------------------------
# invariant metric


def metric_upper(eps: np.ndarray, y: np.ndarray, q_y: float) -> np.ndarray:
    """h^{ij} = 4 y_i y_j - 2 q(Y) delta_ij eps_i."""
    return 4.0 * np.outer(y, y) - 2.0 * q_y * np.diag(eps)


def metric_lower(eps: np.ndarray, y: np.ndarray, q_y: float) -> np.ndarray:
    """h_{ij} = eps_i eps_j y_i y_j / q(Y)^2 - eps_i delta_ij / (2 q(Y))."""
    ey = eps * y
    return np.outer(ey, ey) / q_y ** 2 - np.diag(eps) / (2.0 * q_y)


def metric_det(n: int, q_y: float) -> float:
    """det h_{ij} = 2^-n q(Y)^-n."""
    return (2.0 * q_y) ** (-n)


# ---------------------------------------------------------------------------
# sampling helpers (seeded, used by the verification suites)


def sample_point(frame: WittFrame, rng: np.random.Generator,
                 y1_range=(0.8, 2.5), spread=0.55) -> DomainPoint:
    """A random point of the fixed component with q(Y) bounded away from 0."""
    n = frame.n
    x = rng.uniform(-2.0, 2.0, n)
    y = np.zeros(n)
    y[0] = rng.uniform(*y1_range)
    if n > 1:
        rest = rng.uniform(-1.0, 1.0, n - 1)
        norm = np.sqrt(np.sum(rest ** 2))
        if norm > 1e-12:
            radius = spread * rng.uniform(0.1, 1.0)
            rest = rest / max(norm, 1.0) * radius
        y[1:] = rest * y[0]
    return DomainPoint(frame, x + 1j * y)


def sample_vector(frame: WittFrame, rng: np.random.Generator,
                  span: int = 3) -> Vec:
    """A random nonzero integral lattice vector with small entries."""
    d = frame.lattice.dim
    while True:
        v = rng.integers(-span, span + 1, d)
        if np.any(v):
            return as_vec([int(a) for a in v])
