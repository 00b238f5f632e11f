"""Truncated norm-class series with tail estimates and modularity defect.

A series spec fixes a lattice coset, a rational norm m, an integer weight
kappa and a truncation bound B.  Evaluation at a point Z enumerates every
coset vector of norm m whose positive-definite majorant at Z stays below
B, and sums either the scalar kernel (lambda, psi(Z))^-kappa or the
form-valued xi-preimage kernel over that set.  m > 0 selects the cusp
family (no poles on the domain); m < 0 selects the meromorphic family
with singularities along the complex-codimension-1 cycles of the
enumerated vectors.

Two deliberate contracts:

* Summation runs in the lexicographic vector order produced by the
  enumerator, with compensated (Kahan) accumulation, so identical inputs
  give bit-identical results.
* The tail estimate is a declared heuristic, not an analytic bound: the
  number of vectors in the outer majorant shell [B/2, B] times the
  largest term modulus on that shell.  Convergence tests are phrased
  against this estimator.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple

import numpy as np

from .domain import DomainPoint, WittFrame, act, majorant_at
from .kernels import KernelSingularity, omega_kernel, p_tilde_components
from .quadratic import (GroupData, Isometry, Vec, as_vec, enumerate_majorant,
                        majorant_value)

__all__ = [
    "SeriesError", "SeriesSpec", "SeriesResult", "enumerate_class",
    "sum_omega", "sum_Omega", "eval_omega", "eval_Omega",
    "modularity_defect",
]


class SeriesError(ValueError):
    """Invalid series parameters."""


@dataclass(frozen=True)
class SeriesSpec:
    """Parameters of a truncated norm-class series."""

    frame: WittFrame
    coset: Vec
    m: Fraction
    kappa: int
    bound: float
    group: GroupData = field(default_factory=lambda: GroupData(()))

    @classmethod
    def create(cls, frame: WittFrame, coset, m, kappa: int, bound: float,
               group: GroupData | None = None) -> "SeriesSpec":
        m = Fraction(m)
        kappa = int(kappa)
        bound = float(bound)
        if m == 0:
            raise SeriesError("norm m must be nonzero (m > 0 cusp family, "
                              "m < 0 meromorphic family)")
        if kappa <= frame.n:
            raise SeriesError(
                f"weight kappa = {kappa} must exceed n = {frame.n}")
        if not bound > 0:
            raise SeriesError("truncation bound must be positive")
        coset_v = as_vec(coset)
        if len(coset_v) != frame.lattice.dim:
            raise SeriesError("coset vector has the wrong dimension")
        return cls(frame, coset_v, m, kappa, bound,
                   group if group is not None else GroupData(()))

    @property
    def cusp_type(self) -> bool:
        return self.m > 0

    def rescale(self, bound: float) -> "SeriesSpec":
        """Same class at a different truncation bound."""
        return SeriesSpec.create(self.frame, self.coset, self.m, self.kappa,
                                 bound, self.group)


class SeriesResult(NamedTuple):
    value: complex | np.ndarray
    tail: float
    count: int


class _Kahan:
    """Compensated accumulator for a complex scalar or fixed-shape array."""

    def __init__(self, shape: tuple[int, ...] | None = None):
        if shape is None:
            self.total = 0j
            self.comp = 0j
        else:
            self.total = np.zeros(shape, dtype=complex)
            self.comp = np.zeros(shape, dtype=complex)

    def add(self, term) -> None:
        y = term - self.comp
        t = self.total + y
        self.comp = (t - self.total) - y
        self.total = t


def enumerate_class(spec: SeriesSpec, point: DomainPoint) -> list[Vec]:
    """Lexicographically sorted coset vectors of norm m whose majorant at
    the point is at most the bound."""
    m_gram = majorant_at(spec.frame, point)
    return enumerate_majorant(spec.frame.lattice, m_gram, spec.m,
                              spec.coset, spec.bound)


def _accumulate(vectors, term_fn: Callable, shape=None):
    """Ordered compensated sum; returns (total, per-term max moduli)."""
    acc = _Kahan(shape)
    sizes: list[float] = []
    for v in vectors:
        term = term_fn(v)
        acc.add(term)
        sizes.append(float(np.max(np.abs(term))))
    return acc.total, sizes


def sum_omega(frame: WittFrame, vectors, kappa: int,
              point: DomainPoint) -> complex:
    """Compensated sum of (lambda, psi(Z))^-kappa over a fixed vector list,
    in list order."""
    total, _ = _accumulate(
        vectors, lambda v: omega_kernel(frame.frame_coords(v), kappa, point))
    return complex(total)


def sum_Omega(frame: WittFrame, vectors, kappa: int,
              point: DomainPoint) -> np.ndarray:
    """Componentwise compensated sum of the xi-preimage kernel over a fixed
    vector list, in list order."""
    total, _ = _accumulate(
        vectors,
        lambda v: _p_tilde_term(frame, v, kappa, point),
        shape=(frame.n,))
    return np.asarray(total)


def _p_tilde_term(frame: WittFrame, v, kappa: int,
                  point: DomainPoint) -> np.ndarray:
    try:
        return p_tilde_components(frame.frame_coords(v), kappa, point)
    except KernelSingularity as exc:
        raise KernelSingularity(
            f"series term singular at lattice vector {tuple(v)}",
            exc.lam, exc.quantity, exc.value) from exc


def _shell_tail(spec: SeriesSpec, m_gram: np.ndarray, vectors,
                sizes) -> float:
    """Count times max-term heuristic over the outer shell [B/2, B]."""
    half = spec.bound / 2.0
    best = 0.0
    count = 0
    for v, s in zip(vectors, sizes):
        if majorant_value(m_gram, v) >= half:
            count += 1
            if s > best:
                best = s
    return count * best


def eval_omega(spec: SeriesSpec, point: DomainPoint) -> SeriesResult:
    """Truncated scalar series: (value, tail estimate, term count)."""
    frame = spec.frame
    m_gram = majorant_at(frame, point)
    vectors = enumerate_majorant(frame.lattice, m_gram, spec.m, spec.coset,
                                 spec.bound)
    total, sizes = _accumulate(
        vectors,
        lambda v: omega_kernel(frame.frame_coords(v), spec.kappa, point))
    return SeriesResult(complex(total),
                        _shell_tail(spec, m_gram, vectors, sizes),
                        len(vectors))


def eval_Omega(spec: SeriesSpec, point: DomainPoint) -> SeriesResult:
    """Truncated form-valued series: componentwise sum of the xi-preimage
    kernel, with the analogous shell tail estimate."""
    frame = spec.frame
    m_gram = majorant_at(frame, point)
    vectors = enumerate_majorant(frame.lattice, m_gram, spec.m, spec.coset,
                                 spec.bound)
    total, sizes = _accumulate(
        vectors,
        lambda v: _p_tilde_term(frame, v, spec.kappa, point),
        shape=(frame.n,))
    return SeriesResult(np.asarray(total),
                        _shell_tail(spec, m_gram, vectors, sizes),
                        len(vectors))


def modularity_defect(spec: SeriesSpec, point: DomainPoint,
                      gamma: Isometry) -> float:
    """|(S|_kappa gamma)(Z) - S(Z)| for the truncated scalar series S.

    The truncated sum is only approximately invariant: the enumeration
    sets at Z and gamma Z can disagree near the majorant cutoff.  The
    contract, exercised by the tests, is that the defect stays below the
    sum of the two tail estimates.
    """
    if isinstance(gamma, Isometry) and not gamma.preserves(spec.frame.lattice):
        raise SeriesError("gamma does not preserve the lattice")
    base = eval_omega(spec, point)
    moved, j = act(spec.frame, gamma, point)
    far = eval_omega(spec, moved)
    return abs(j ** (-spec.kappa) * far.value - base.value)
