"""Single-vector kernels on the tube domain.

For a vector lambda (frame coordinates) and integer weight kappa:

* the scalar kernel (lambda, psi(Z))^-kappa;
* the (n, n-1)-form p(lambda) = xi_1 of (lambda, psi(Zbar))/q(Y), with
  closed-form coefficients;
* its weighted completion ptilde(lambda), whose xi_{-kappa} image recovers
  the scalar kernel.  Two hypergeometric representations are provided, one
  adapted to q(lambda) > 0 and one to q(lambda) < 0; they agree wherever
  both converge.

Branch bookkeeping: the only non-integer power of a sign-indefinite quantity
is the |q(lambda_{Z-})|^{n/2} in the q(lambda) > 0 denominator.  Principal
branches of the printed factors give -|q(lambda_{Z-})|^{n/2} for even n; the
implementation uses that real value for every n, the unique choice under
which the xi identity holds in all signatures (locked numerically, then
re-verified by the test suite).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calculus import star01
from .domain import DomainPoint, WittFrame, act, q_plus_minus
from .quadratic import Vec, as_vec
from .special import hyp2f1

GUARD = 1e-12


class KernelSingularity(ArithmeticError):
    """Evaluation too close to the singular locus of a kernel."""

    def __init__(self, message: str, lam, quantity: str, value: float):
        super().__init__(f"{message} ({quantity} = {value:.3e}, lambda = {lam})")
        self.lam = lam
        self.quantity = quantity
        self.value = value


# ---------------------------------------------------------------------------
# closed-form building blocks (lambda in frame coordinates)


def omega_kernel(lam_fc: np.ndarray, kappa: int, point: DomainPoint) -> complex:
    """(lambda, psi(Z))^-kappa, with a pole guard reporting the distance
    proxy |(lambda, psi(Z))|."""
    pair = point.pair(lam_fc)
    scale = max(1.0, float(np.sqrt(point.q_y)))
    if abs(pair) < GUARD * scale:
        raise KernelSingularity("scalar kernel pole", np.asarray(lam_fc),
                                "|(lambda, psi(Z))|", abs(pair))
    return pair ** (-kappa)


def ratio_gradient(lam_fc: np.ndarray, point: DomainPoint) -> np.ndarray:
    """Components of dbar[(lambda, psi(Zbar)) / q(Y)], in closed form."""
    lam = np.asarray(lam_fc, dtype=float)
    eps = point.frame.eps
    qy = point.q_y
    pair_bar = point.pair_bar(lam)
    grad_pb = 2.0 * eps * (lam[2:] - lam[1] * np.conj(point.z))
    grad_qy = 1j * eps * point.y
    return (grad_pb * qy - pair_bar * grad_qy) / qy ** 2


def p_components(lam_fc: np.ndarray, point: DomainPoint) -> np.ndarray:
    """The (n, n-1)-form xi_1[(lambda, psi(Zbar))/q(Y)] in the hat basis."""
    f = ratio_gradient(lam_fc, point)
    return point.q_y * star01(f, point.frame.eps, point.y, point.q_y)


def xi_image_reference(lam_fc: np.ndarray, kappa: int,
                       point: DomainPoint) -> complex:
    """The target of the xi identity: (lambda, psi(Z))^-kappa."""
    return point.pair(lam_fc) ** (-kappa)


def dbar_image_reference(lam_fc: np.ndarray, kappa: int,
                         point: DomainPoint) -> complex:
    """dmu-coefficient of dbar ptilde: (lambda, psi(Zbar))^-kappa q(Y)^kappa."""
    return point.pair_bar(lam_fc) ** (-kappa) * point.q_y ** kappa


def p_tilde_components(lam_fc: np.ndarray, kappa: int, point: DomainPoint,
                       rep: str = "auto") -> np.ndarray:
    """The xi-preimage kernel as an (n, n-1)-coefficient vector.

    rep selects the hypergeometric representation: "plus" (adapted to
    q(lambda) > 0, argument q/q_plus), "minus" (adapted to q(lambda) < 0,
    argument q/q_minus), or "auto".
    """
    lam = np.asarray(lam_fc, dtype=float)
    frame = point.frame
    n = frame.n
    if 2 * kappa <= n:
        raise ValueError("need kappa > n/2")
    q_lam = frame.q_lambda(lam)
    if rep == "auto":
        if q_lam == 0.0:
            raise ValueError("q(lambda) = 0 is out of scope")
        rep = "plus" if q_lam > 0 else "minus"
    q_plus, q_minus = q_plus_minus(frame, lam, point)
    scale = max(1.0, abs(q_lam))
    p = p_components(lam, point)
    half = kappa - n / 2.0

    if rep == "plus":
        if abs(q_minus) < GUARD * scale:
            raise KernelSingularity("kernel singular on the positive-norm "
                                    "cycle", lam, "|q_minus|", abs(q_minus))
        if q_plus < GUARD * scale:
            raise KernelSingularity("kernel singular on the negative-norm "
                                    "cycle", lam, "q_plus", q_plus)
        pair = point.pair(lam)
        hyp = hyp2f1(1.0 - n / 2.0, half, half + 1.0, q_lam / q_plus)
        pref = (pair ** (kappa - 1)
                / (-4.0 ** kappa * half * abs(q_minus) ** (n / 2.0))
                * q_plus ** (n / 2.0 - kappa))
        return pref * hyp * p

    if rep == "minus":
        pair_bar = point.pair_bar(lam)
        pair_scale = max(1.0, float(np.sqrt(point.q_y * abs(q_lam))))
        if abs(pair_bar) < GUARD * pair_scale:
            raise KernelSingularity("kernel singular on the negative-norm "
                                    "cycle", lam, "|(lambda, psi(Zbar))|",
                                    abs(pair_bar))
        if abs(q_minus) < GUARD * scale:
            raise KernelSingularity("kernel singular on the positive-norm "
                                    "cycle", lam, "|q_minus|", abs(q_minus))
        hyp = hyp2f1(1.0 - n / 2.0, 1.0, half + 1.0, q_lam / q_minus)
        pref = (pair_bar ** (1 - kappa) * point.q_y ** (kappa - 1)
                / (4.0 * half * q_minus))
        return pref * hyp * p

    raise ValueError(f"unknown representation {rep!r}")


# ---------------------------------------------------------------------------
# form-level slash action


def action_jacobian(sigma, point: DomainPoint, h: float = 1e-5) -> np.ndarray:
    """Holomorphic Jacobian J[i, k] = d(sigma Z)_i / d z_k of the action,
    by Richardson central differences along real directions."""
    frame = point.frame
    n = frame.n

    def image(z):
        moved, _ = act(frame, sigma, point.replace(z))
        return moved.z

    def diff(step):
        cols = []
        for k in range(n):
            dz = np.zeros(n, dtype=complex)
            dz[k] = step
            cols.append((image(point.z + dz) - image(point.z - dz))
                        / (2.0 * step))
        return np.array(cols).T

    d1 = diff(h)
    d2 = diff(h / 2.0)
    return (4.0 * d2 - d1) / 3.0


def form_pullback(sigma, vec_func, point: DomainPoint) -> np.ndarray:
    """Pullback of an (n, n-1)-form along Z -> sigma Z, in hat coefficients:
    (sigma^* g)(Z) = |det J|^2 conj(J)^{-1} g(sigma Z)."""
    frame = point.frame
    moved, _ = act(frame, sigma, point)
    jac = action_jacobian(sigma, point)
    det = np.linalg.det(jac)
    g = np.asarray(vec_func(moved), dtype=complex)
    return abs(det) ** 2 * np.linalg.solve(np.conj(jac), g)


def form_slash(sigma, vec_func, weight: int, point: DomainPoint) -> np.ndarray:
    """(H |_w sigma)(Z) = j(sigma, Z)^-w (sigma^* H)(Z) on (n, n-1)-forms."""
    frame = point.frame
    _, j = act(frame, sigma, point)
    return j ** (-weight) * form_pullback(sigma, vec_func, point)


# ---------------------------------------------------------------------------
# bundled parameters


@dataclass(frozen=True, eq=False)
class KernelParams:
    """A validated (lambda, kappa) pair with the locked branch phase i^n."""

    lam: Vec
    lam_fc: np.ndarray
    kappa: int
    branch_phase: complex

    @classmethod
    def create(cls, frame: WittFrame, lam, kappa: int) -> "KernelParams":
        lam = as_vec(lam)
        if frame.lattice.q(lam) == 0:
            raise ValueError("kernel vector must have q(lambda) != 0")
        kappa = int(kappa)
        if kappa <= frame.n:
            raise ValueError("weight must exceed n")
        return cls(lam, frame.frame_coords(lam), kappa, 1j ** frame.n)

    def omega(self, point: DomainPoint) -> complex:
        return omega_kernel(self.lam_fc, self.kappa, point)

    def p(self, point: DomainPoint) -> np.ndarray:
        return p_components(self.lam_fc, point)

    def p_tilde(self, point: DomainPoint, rep: str = "auto") -> np.ndarray:
        return p_tilde_components(self.lam_fc, self.kappa, point, rep=rep)
