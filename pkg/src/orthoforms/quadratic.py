"""Even lattices of signature (2, n): exact bilinear arithmetic, isometries,
and short-vector enumeration under a positive-definite majorant form.

Vectors are tuples of :class:`fractions.Fraction` in lattice coordinates, so
norms, pairings and isometry checks are exact.  Floats only enter through the
majorant form, which depends on a transcendental base point anyway.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

Vec = tuple[Fraction, ...]


def as_vec(entries: Iterable) -> Vec:
    return tuple(Fraction(x) for x in entries)


def vec_add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v: Vec) -> Vec:
    c = Fraction(c)
    return tuple(c * a for a in v)


def vec_float(v: Vec) -> np.ndarray:
    return np.array([float(a) for a in v])


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class QuadraticLattice:
    """An even integral lattice given by its bilinear Gram matrix.

    ``gram[i][j] = (basis_i, basis_j)`` and ``q(v) = (v, v)/2``.
    """

    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        g = self.gram
        d = len(g)
        if any(len(row) != d for row in g):
            raise LatticeError("gram matrix must be square")
        for i in range(d):
            if g[i][i] % 2 != 0:
                raise LatticeError("lattice is not even: odd diagonal entry")
            for j in range(d):
                if g[i][j] != g[j][i]:
                    raise LatticeError("gram matrix must be symmetric")

    @property
    def dim(self) -> int:
        return len(self.gram)

    def bilinear(self, u: Sequence, v: Sequence) -> Fraction:
        g = self.gram
        total = Fraction(0)
        for i, ui in enumerate(u):
            if ui == 0:
                continue
            row = g[i]
            total += Fraction(ui) * sum(Fraction(row[j]) * Fraction(vj)
                                        for j, vj in enumerate(v) if vj != 0)
        return total

    def q(self, v: Sequence) -> Fraction:
        return self.bilinear(v, v) / 2

    def signature(self) -> tuple[int, int]:
        """Inertia (n_plus, n_minus) of the real quadratic space."""
        eig = np.linalg.eigvalsh(self.gram_float())
        tol = 1e-9 * max(1.0, float(np.max(np.abs(eig))))
        return int(np.sum(eig > tol)), int(np.sum(eig < -tol))

    def gram_float(self) -> np.ndarray:
        return np.array(self.gram, dtype=float)

    def dual_denominator(self) -> int:
        """Smallest N with N * L' contained in L (level-style bound)."""
        det = round(abs(np.linalg.det(self.gram_float())))
        return int(det) if det else 0


@dataclass(frozen=True)
class Isometry:
    """A rational matrix acting on lattice coordinates, preserving the form."""

    matrix: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "Isometry":
        return cls(tuple(tuple(Fraction(x) for x in row) for row in rows))

    @classmethod
    def identity(cls, d: int) -> "Isometry":
        return cls.from_rows([[1 if i == j else 0 for j in range(d)] for i in range(d)])

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def apply(self, v: Sequence) -> Vec:
        return tuple(sum(row[j] * Fraction(v[j]) for j in range(len(v)))
                     for row in self.matrix)

    def compose(self, other: "Isometry") -> "Isometry":
        a, b = self.matrix, other.matrix
        d = len(a)
        return Isometry(tuple(
            tuple(sum(a[i][k] * b[k][j] for k in range(d)) for j in range(d))
            for i in range(d)))

    def inverse(self) -> "Isometry":
        m = np.array([[float(x) for x in row] for row in self.matrix])
        inv = np.linalg.inv(m)
        # entries of the inverse of an integral isometry are rational with
        # denominator dividing det; recover them exactly via rounding
        det = round(np.linalg.det(m))
        scaled = inv * det
        rows = [[Fraction(round(x), det) for x in row] for row in scaled]
        out = Isometry.from_rows(rows)
        if out.compose(self).matrix != Isometry.identity(self.dim).matrix:
            raise LatticeError("could not invert isometry exactly")
        return out

    def float_matrix(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.matrix])

    def preserves(self, lattice: QuadraticLattice) -> bool:
        """Exact check of M^T G M == G."""
        g = lattice.gram
        d = self.dim
        m = self.matrix
        for i in range(d):
            for j in range(i, d):
                val = sum(m[a][i] * Fraction(g[a][b]) * m[b][j]
                          for a in range(d) for b in range(d))
                if val != g[i][j]:
                    return False
        return True


@dataclass(frozen=True)
class GroupData:
    """Generators of a finite-index subgroup of the integral orthogonal group."""

    generators: tuple[Isometry, ...]

    def __iter__(self):
        return iter(self.generators)


# ---------------------------------------------------------------------------
# standard test lattices


def hyperbolic_plane() -> list[list[int]]:
    return [[0, 1], [1, 0]]


def standard_lattice(n: int) -> dict:
    """A built-in even lattice of signature (2, n) with a distinguished
    hyperbolic pair (e, e') and a basis of the orthogonal part K.

    Returns a config dict with keys gram, e, e_prime, k_basis.
    """
    if n < 1:
        raise LatticeError("need n >= 1")
    blocks: list[list[list[int]]] = [hyperbolic_plane()]
    if n == 1:
        blocks.append([[2]])
    else:
        blocks.append(hyperbolic_plane())
        for _ in range(n - 2):
            blocks.append([[-2]])
    d = sum(len(b) for b in blocks)
    gram = [[0] * d for _ in range(d)]
    off = 0
    for b in blocks:
        k = len(b)
        for i in range(k):
            for j in range(k):
                gram[off + i][off + j] = b[i][j]
        off += k
    e = [0] * d
    e[0] = 1
    e_prime = [0] * d
    e_prime[1] = 1
    k_basis = [[0] * d for _ in range(n)]
    for i in range(n):
        k_basis[i][2 + i] = 1
    return {"gram": gram, "e": e, "e_prime": e_prime, "k_basis": k_basis}


def eichler_isometry(lattice: QuadraticLattice, iso_vec: Sequence,
                     k: Sequence) -> Isometry:
    """The transvection v -> v + (v,u)k - (v,k)u - q(k)(v,u)u for an isotropic
    u and k orthogonal to u.  Exact; preserves the lattice when u, k are
    integral."""
    u = as_vec(iso_vec)
    kv = as_vec(k)
    if lattice.q(u) != 0:
        raise LatticeError("transvection base vector must be isotropic")
    if lattice.bilinear(u, kv) != 0:
        raise LatticeError("transvection direction must be orthogonal to base")
    d = lattice.dim
    qk = lattice.q(kv)
    cols = []
    for i in range(d):
        basis = [Fraction(0)] * d
        basis[i] = Fraction(1)
        vu = lattice.bilinear(basis, u)
        vk = lattice.bilinear(basis, kv)
        img = [basis[j] + vu * kv[j] - vk * u[j] - qk * vu * u[j] for j in range(d)]
        cols.append(img)
    rows = [[cols[j][i] for j in range(d)] for i in range(d)]
    return Isometry.from_rows(rows)


def standard_group(lattice: QuadraticLattice, config: dict) -> GroupData:
    """Eichler transvections along e and e' in the K-directions."""
    gens = []
    for k in config["k_basis"]:
        gens.append(eichler_isometry(lattice, config["e"], k))
        gens.append(eichler_isometry(lattice, config["e_prime"], k))
    return GroupData(tuple(gens))


# ---------------------------------------------------------------------------
# majorant enumeration


def majorant_gram(lattice: QuadraticLattice, psi_x: np.ndarray,
                  psi_y: np.ndarray, q_y: float) -> np.ndarray:
    """Positive-definite Gram of v -> q(v_+) - q(v_-) at a base point, from
    the real/imaginary parts of the point's isotropic line.

    With a = G psi_x, b = G psi_y:  M = (a a^T + b b^T)/q_y - G.
    """
    g = lattice.gram_float()
    a = g @ psi_x
    b = g @ psi_y
    m = (np.outer(a, a) + np.outer(b, b)) / q_y - g
    return 0.5 * (m + m.T)


def majorant_value(m_gram: np.ndarray, v: Sequence) -> float:
    x = vec_float(as_vec(v))
    return float(x @ m_gram @ x)


def enumerate_majorant(lattice: QuadraticLattice, m_gram: np.ndarray,
                       m: Fraction | int, coset: Sequence,
                       bound: float) -> list[Vec]:
    """All v in coset + L with q(v) == m and majorant(v) <= bound.

    Enumeration runs over the ellipsoid with a small slack and filters by the
    canonical float majorant value and the exact rational norm, so results
    agree with a brute-force box scan and are monotone in the bound.  Sorted
    lexicographically for determinism.
    """
    d = lattice.dim
    c = vec_float(as_vec(coset))
    if bound <= 0:
        return []
    try:
        low = np.linalg.cholesky(m_gram)
    except np.linalg.LinAlgError as exc:
        raise LatticeError("majorant form is not positive definite") from exc
    r = low.T  # upper triangular, x^T M x = ||r x||^2
    slack = bound * (1 + 1e-9) + 1e-9
    m = Fraction(m)
    coset_v = as_vec(coset)
    out: list[Vec] = []

    t = np.zeros(d)

    def descend(i: int, remaining: float):
        if i < 0:
            v = tuple(coset_v[j] + Fraction(round(t[j] - c[j])) for j in range(d))
            if lattice.q(v) == m and majorant_value(m_gram, v) <= bound:
                out.append(v)
            return
        rii = r[i, i]
        s = float(r[i, i + 1:] @ t[i + 1:]) if i + 1 < d else 0.0
        half = math.sqrt(max(remaining, 0.0))
        lo = math.ceil((-half - s) / rii - c[i] - 1e-12)
        hi = math.floor((half - s) / rii - c[i] + 1e-12)
        for x in range(lo, hi + 1):
            t[i] = x + c[i]
            used = (rii * t[i] + s) ** 2
            if used <= remaining + 1e-12:
                descend(i - 1, remaining - used)
        t[i] = 0.0

    descend(d - 1, slack)
    out.sort()
    return out


def enumerate_box_oracle(lattice: QuadraticLattice, m_gram: np.ndarray,
                         m: Fraction | int, coset: Sequence,
                         bound: float) -> list[Vec]:
    """Brute-force reference for :func:`enumerate_majorant`: scan the full
    coordinate box |x_i| <= sqrt(bound * (M^-1)_ii)."""
    d = lattice.dim
    inv = np.linalg.inv(m_gram)
    c = vec_float(as_vec(coset))
    coset_v = as_vec(coset)
    m = Fraction(m)
    limits = []
    for i in range(d):
        half = math.sqrt(max(bound * inv[i, i], 0.0))
        limits.append((math.ceil(-half - c[i] - 1e-9), math.floor(half - c[i] + 1e-9)))
    out: list[Vec] = []

    def rec(i: int, acc: list[int]):
        if i == d:
            v = tuple(coset_v[j] + acc[j] for j in range(d))
            if lattice.q(v) == m and majorant_value(m_gram, v) <= bound:
                out.append(v)
            return
        for x in range(limits[i][0], limits[i][1] + 1):
            rec(i + 1, acc + [x])

    rec(0, [])
    out.sort()
    return out


# ---------------------------------------------------------------------------
# config parsing


def lattice_from_config(cfg: dict):
    """Build (lattice, config-dict) from either {"standard": n} or an explicit
    {"gram": ..., "e": ..., "e_prime": ..., [cosets], [group_generators]}."""
    if "standard" in cfg:
        data = standard_lattice(int(cfg["standard"]))
    else:
        data = dict(cfg)
    lattice = QuadraticLattice(tuple(tuple(int(x) for x in row)
                                     for row in data["gram"]))
    sig = lattice.signature()
    if sig[0] != 2:
        raise LatticeError(f"expected signature (2, n), got {sig}")
    data.setdefault("cosets", [[0] * lattice.dim])
    if "group_generators" in data:
        gens = GroupData(tuple(Isometry.from_rows(mat)
                               for mat in data["group_generators"]))
    elif "k_basis" in data:
        gens = standard_group(lattice, data)
    else:
        gens = GroupData(())
    for gen in gens:
        if not gen.preserves(lattice):
            raise LatticeError("group generator does not preserve the form")
    return lattice, data, gens
