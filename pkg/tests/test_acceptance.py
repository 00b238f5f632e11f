"""Top-level acceptance battery: one test (and one verdict line) per
criterion.

Each test exercises the public library surface at the stated scale and
tolerance and prints a single ``criterion N: PASS/FAIL`` line.  Criterion 7
compares the collar boundary-integral limit against the printed limiting
constant; the measured limit is twice that constant (see the project
notes), and the comparison is implemented exactly as stated rather than
adjusted to match the observed value, so that test fails by design until
the constant question is resolved.  Criterion 10 needs externally supplied
stabilizer/window data and is skipped unless ``ORTHOFORMS_DUALITY_DATA``
points at a JSON file providing it.
"""
from __future__ import annotations

import json
import math
import os
import time
from fractions import Fraction

import numpy as np
import pytest

from orthoforms.calculus import ratio_field, laplace_scalar, xi_top
from orthoforms.domain import (
    DomainPoint, WittFrame, act, q_plus_minus, sample_point, sample_vector,
)
from orthoforms.kernels import (
    p_components, p_tilde_components, xi_image_reference,
)
from orthoforms.quadratic import lattice_from_config, standard_lattice
from orthoforms.series import (
    SeriesSpec, enumerate_class, eval_Omega, eval_omega, modularity_defect,
    sum_Omega,
)
from orthoforms.suites import RunConfig, RunParams, run


def _verdict(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} — {detail}")
    assert ok, f"criterion {num}: {detail}"


def _setup(n):
    lattice, fd, group = lattice_from_config(standard_lattice(n))
    return lattice, WittFrame.build(lattice, fd["e"], fd["e_prime"]), group


def _offcycle(frame, rng, sign=0):
    """A sample bounded away from the kernel singular loci."""
    lattice = frame.lattice
    while True:
        p = sample_point(frame, rng)
        lam = sample_vector(frame, rng)
        q = float(lattice.q(lam))
        if q == 0.0 or q * sign < 0:
            continue
        fc = frame.frame_coords(lam)
        q_plus, q_minus = q_plus_minus(frame, fc, p)
        if abs(q_minus) > 0.05 and q_plus > 0.05 and abs(p.pair_bar(fc)) > 0.3:
            return p, lam, fc


def test_criterion_01_geometry_identities():
    t0 = time.monotonic()
    rep = run(RunConfig(suite="geometry",
                        params=RunParams(samples=250)))  # 250 x 4 ranks
    elapsed = time.monotonic() - t0
    worst = max(r.rel_err for r in rep.records)
    ok = (rep.passed and worst <= 1e-10
          and all(r.tolerance <= 1e-10 for r in rep.records)
          and elapsed <= 10.0)
    _verdict(1, ok, f"1000 points, worst rel err {worst:.2e} "
                    f"(tol 1e-10), {elapsed:.1f}s (budget 10s)")


def test_criterion_02_metric_inverse_and_determinant():
    rep = run(RunConfig(suite="metric",
                        params=RunParams(samples=250)))  # 250 x 4 ranks
    worst = max(r.rel_err for r in rep.records)
    ok = rep.passed and worst <= 1e-10
    _verdict(2, ok, f"1000 sampled Y, worst err {worst:.2e} (tol 1e-10)")


def test_criterion_03_gradient_pairing_battery():
    t0 = time.monotonic()
    rep = run(RunConfig(suite="identities",
                        params=RunParams(samples=200)))
    elapsed = time.monotonic() - t0
    worst = max(r.rel_err for r in rep.records)
    ok = (rep.passed and worst <= 1e-9
          and all(r.tolerance <= 1e-9 for r in rep.records)
          and elapsed <= 30.0)
    _verdict(3, ok, f"200 (lambda, Z) per rank, all five closed forms, "
                    f"worst rel err {worst:.2e} (tol 1e-9), "
                    f"{elapsed:.1f}s (budget 30s)")


def test_criterion_04_laplace_eigenvalue():
    rng = np.random.default_rng(20240811)
    worst = 0.0
    for n in (1, 2, 3, 4):
        _, frame, _ = _setup(n)
        for _ in range(50):
            p, lam, fc = _offcycle(frame, rng)
            u = ratio_field(fc)
            val = laplace_scalar(u, 1, p)
            ref = 0.5 * n * u.value(p)
            worst = max(worst, abs(val - ref) / abs(ref))
    ok = worst <= 1e-6
    _verdict(4, ok, f"nested-xi laplacian at 50 points per rank, worst "
                    f"rel err {worst:.2e} (tol 1e-6)")


def test_criterion_05_xi_preimage_and_closedness():
    t0 = time.monotonic()
    rng = np.random.default_rng(20240811)
    worst_pre = worst_closed = 0.0
    for n in (2, 4):
        _, frame, _ = _setup(n)
        for kappa in range(n + 1, n + 4):
            for sign in (+1, -1):
                for _ in range(100):
                    p, lam, fc = _offcycle(frame, rng, sign)
                    val = xi_top(
                        lambda pt: p_tilde_components(fc, kappa, pt),
                        kappa, p)
                    ref = xi_image_reference(fc, kappa, p)
                    worst_pre = max(worst_pre, abs(val - ref) / abs(ref))
                    vec = lambda pt: (
                        p_components(fc, pt)
                        / abs(q_plus_minus(frame, fc, pt)[1]) ** (n / 2.0))
                    worst_closed = max(worst_closed, abs(xi_top(vec, 1, p)))
    elapsed = time.monotonic() - t0
    ok = worst_pre <= 1e-6 and worst_closed <= 1e-6 and elapsed <= 120.0
    _verdict(5, ok, f"100 points per (rank, weight, sign class): preimage "
                    f"rel err {worst_pre:.2e}, closedness {worst_closed:.2e} "
                    f"(tol 1e-6), {elapsed:.0f}s (budget 120s)")


def test_criterion_06_limit_constants():
    rep = run(RunConfig(suite="constants"))
    by_id = {r.check_id: r for r in rep.records}
    n2 = [r for cid, r in by_id.items() if "/n2" in cid or "/n2-" in cid]
    n4 = [r for cid, r in by_id.items() if "n4" in cid]
    ok = (rep.passed and len(n2) >= 1 and len(n4) >= 2
          and all(r.tolerance <= 1e-10 for r in n2)
          and all(r.tolerance <= 1e-9 for r in n4))
    worst = max(r.rel_err for r in rep.records)
    _verdict(6, ok, f"closed-form and dense-trapezoid oracles, worst "
                    f"dev {worst:.2e}")


def test_criterion_07_tube_limit_constant():
    t0 = time.monotonic()
    rep = run(RunConfig(suite="tube_limit"))
    elapsed = time.monotonic() - t0
    details, ok = [], True
    for kappa in (3, 4):
        rec = next(r for r in rep.records
                   if r.check_id == f"tube_limit/printed-constant/"
                                    f"kappa{kappa}")
        stated = rec.reference
        rel = abs(rec.value - stated) / abs(stated)
        ratio = (rec.value / stated).real
        ok = ok and rel <= 1e-3
        details.append(f"kappa={kappa}: boundary/( -C delta ) = "
                       f"{ratio:.4f}, rel dev {rel:.2e}")
    ok = ok and elapsed <= 300.0
    _verdict(7, ok, "; ".join(details)
             + f"; tol 1e-3, {elapsed:.0f}s (budget 300s)"
             + " [measured limit is twice the printed constant]")


def test_criterion_08_conjugate_sector_decay():
    rep = run(RunConfig(suite="restrict"))
    by_id = {r.check_id: r for r in rep.records}
    slope_rec = by_id["restrict/decay-slope"]
    extr_rec = by_id["restrict/extrapolated-vanishing"]
    ok = slope_rec.value <= 0.0 and extr_rec.value <= 1e-6
    _verdict(8, ok, f"{slope_rec.note}, extrapolated "
                    f"{extr_rec.value:.2e} (tol 1e-6)")


def test_criterion_09_series_consistency():
    t0 = time.monotonic()
    kappa = 4  # smallest weight legal for both ranks; see project notes
    bounds = (10, 20, 40, 80)
    problems = []
    for n in (1, 2):
        lattice, frame, group = _setup(n)
        z = np.full(n, 0.17 + 0.29j, dtype=complex)
        z[0] = 0.31 + 1.27j
        point = DomainPoint(frame, z)
        coset = tuple(Fraction(0) for _ in range(lattice.dim))
        for m in (1, 2):
            specs = {b: SeriesSpec.create(frame, coset, Fraction(m), kappa,
                                          float(b), group) for b in bounds}
            res = {b: eval_omega(s, point) for b, s in specs.items()}
            for b in (10, 20, 40):
                defect = abs(res[2 * b].value - res[b].value)
                if defect > 2.0 * res[b].tail:
                    problems.append(
                        f"n={n} m={m} B={b}: doubling {defect:.2e} > "
                        f"2 x tail {res[b].tail:.2e}")
            form = eval_Omega(specs[20], point)
            vectors = enumerate_class(specs[20], point)
            xi_val = xi_top(lambda pt: sum_Omega(frame, vectors, kappa, pt),
                            kappa, point)
            xi_err = abs(xi_val - res[20].value)
            xi_tol = res[20].tail + form.tail + 1e-6
            if xi_err > xi_tol:
                problems.append(f"n={n} m={m}: xi defect {xi_err:.2e} > "
                                f"{xi_tol:.2e}")
            gens = list(group)
            for tag, gamma in (("first", gens[0]), ("last", gens[-1])):
                defect = modularity_defect(specs[40], point, gamma)
                moved, _ = act(frame, gamma, point)
                tol = (eval_omega(specs[40], point).tail
                       + eval_omega(specs[40], moved).tail)
                if defect > tol:
                    problems.append(f"n={n} m={m} {tag} generator: "
                                    f"modularity {defect:.2e} > {tol:.2e}")
    elapsed = time.monotonic() - t0
    ok = not problems and elapsed <= 600.0
    _verdict(9, ok, ("all doubling/xi/modularity bounds hold over "
                     f"B in {bounds}, {elapsed:.0f}s (budget 600s)")
             if not problems else "; ".join(problems))


@pytest.mark.skipif(
    "ORTHOFORMS_DUALITY_DATA" not in os.environ,
    reason="stretch pairing check needs supplied stabilizer generators and "
           "fundamental windows; set ORTHOFORMS_DUALITY_DATA to a JSON file "
           "with a 'duality' block (mu, nu, window_C, window_T, kappa, ...)")
def test_criterion_10_cycle_density_duality():
    with open(os.environ["ORTHOFORMS_DUALITY_DATA"]) as fh:
        data = json.load(fh)
    cfg = RunConfig(suite="duality",
                    lattice=data.get("lattice", {"standard": 2}),
                    extra={"duality": data["duality"]})
    rep = run(cfg)
    rec = rep.records[0]
    _verdict(10, rec.passed,
             f"density pairing rel dev {rec.rel_err:.2e} (tol 5e-2)")
