"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -s -v`` to see the lines inline; they are
also collected into an "acceptance criteria" section of the terminal summary.
"""

import contextlib
import hashlib
import io
import json
import math
import time

import numpy as np
import pytest
from scipy import integrate

from plcgen import channel_synthesis as cs
from plcgen import cli
from plcgen import path_statistics as ps
from plcgen.cable_params import (
    NAYY35,
    NAYY150,
    capacitance_per_length,
    conductance_per_length,
    inductance_per_length,
    phase_velocity,
    resistance_per_length,
)

from conftest import ACCEPTANCE_LINES, dump_as_fixture_keys, read_fixture_tables


def report(number, title, ok, elapsed, limit, detail=""):
    ok = ok and elapsed < limit
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail} ({elapsed:.2f}s < {limit}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def test_criterion_1_cable_formulas():
    t0 = time.perf_counter()
    # Hand oracle: tabulated constants, r/a taken in mm.
    oracle = {
        "C150": 8.5419e-12 * 4 * 6.9099 / 1.8,
        "L150": 1.2566e-6 * 6.9099 / 1.8,
        "C35": 8.5419e-12 * 4 * 5.9161 / 1.2,
        "L35": 1.2566e-6 * 5.9161 / 1.2,
    }
    got = {
        "C150": capacitance_per_length(NAYY150),
        "L150": inductance_per_length(NAYY150),
        "C35": capacitance_per_length(NAYY35),
        "L35": inductance_per_length(NAYY35),
    }
    rel = {key: abs(got[key] - oracle[key]) / oracle[key] for key in oracle}
    freqs = np.linspace(0.1e6, 30e6, 20)
    scale_err = 0.0
    for cable in (NAYY150, NAYY35):
        for f in freqs:
            r1, r4 = resistance_per_length(cable, f), resistance_per_length(cable, 4 * f)
            g1, g2 = conductance_per_length(cable, f), conductance_per_length(cable, 2 * f)
            scale_err = max(scale_err, abs(r4 - 2 * r1) / (2 * r1), abs(g2 - 2 * g1) / (2 * g1))
    elapsed = time.perf_counter() - t0
    ok = max(rel.values()) <= 1e-9 and scale_err <= 1e-12
    detail = (
        f"C150={got['C150']:.6e} L150={got['L150']:.6e} C35={got['C35']:.6e} L35={got['L35']:.6e} "
        f"max rel err {max(rel.values()):.1e} (tol 1e-9), scaling err {scale_err:.1e} (tol 1e-12)"
    )
    assert report(1, "cable formulas", ok, elapsed, 1.0, detail)


def test_criterion_2_table_fidelity():
    t0 = time.perf_counter()
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        assert cli.main(["params", "dump"]) == 0
    dumped = dump_as_fixture_keys(ps.parse_parameters_json(buf.getvalue()))
    expected = read_fixture_tables()
    mismatches = [key for key in expected if dumped.get(key) != expected[key]]
    extra = set(dumped) - set(expected)
    elapsed = time.perf_counter() - t0
    ok = not mismatches and not extra and len(expected) == 150
    detail = f"{len(expected)} constants compared as text, {len(mismatches)} mismatched, {len(extra)} unexpected"
    assert report(2, "table fidelity", ok, elapsed, 1.0, detail), mismatches[:5]


def test_criterion_3_path_count_statistics():
    t0 = time.perf_counter()
    n = 10**6
    worst = -math.inf
    failures = []
    for i in (2, 3, 4, 5):
        for k in (1, 5, 10, 20):
            rng = np.random.default_rng(np.random.SeedSequence(2024, spawn_key=(i, k)))
            draws = ps.sample_path_count(i, k, rng, size=n)
            mu = ps.path_count_mean(i, k)
            tol = 0.5 + 3 * math.sqrt(ps.path_count_variance(i, k)) / 1000
            dev = abs(draws.mean() - mu)
            worst = max(worst, dev / tol)
            if dev > tol:
                failures.append((i, k, dev, tol))
    elapsed = time.perf_counter() - t0
    detail = f"16 cells x 1e6 draws, worst |mean-mu|/tol = {worst:.3f}"
    assert report(3, "path-count statistics", not failures, elapsed, 30.0, detail), failures


def test_criterion_4_magnitude_decay():
    t0 = time.perf_counter()
    first_ok = all(
        np.all(np.diff(ps.first_arrival_magnitude(i, np.arange(1, 41))) < 0) for i in range(1, 6)
    )
    j = np.arange(200)
    other_ok = all(np.all(np.diff(ps.other_path_magnitude(k, j)) < 0) for k in range(1, 21))
    i11 = ps.first_arrival_magnitude(1, 1)
    i10 = ps.other_path_magnitude(1, 0)
    spot_ok = abs(i11 - 0.84405) <= 1e-4 and i10 == 0.4522
    elapsed = time.perf_counter() - t0
    detail = f"first-arrival decay {first_ok}, other-path decay {other_ok}, I_1,1={i11:.6f}, I_k1,j0={i10!r}"
    assert report(4, "magnitude decay", first_ok and other_ok and spot_ok, elapsed, 1.0, detail)


def _gev_cell_checks(i, k):
    p = ps.gev_params(i, k)
    f = lambda x: float(ps.gev_pdf(x, p))  # noqa: E731
    pts = [p.lower_bound, p.eps, p.eps + p.eta, p.eps + 10 * p.eta, p.eps + 100 * p.eta, p.eps + 1e4 * p.eta]
    total = sum(integrate.quad(f, a, b, limit=200, epsabs=1e-13)[0] for a, b in zip(pts, pts[1:]))
    total += integrate.quad(f, pts[-1], np.inf, limit=200, epsabs=1e-13)[0]

    rng = np.random.default_rng(np.random.SeedSequence(77, spawn_key=(i, k)))
    x = np.sort(ps.sample_gev(p, rng, size=100_000))
    from plcgen.validation import ks_statistic
    d = ks_statistic(x, lambda t: ps.gev_cdf(t, p))

    grid = ps.gev_ppf(np.linspace(0.01, 0.99, 100), p)
    h = 1e-4 * p.eta
    deriv = (-ps.gev_cdf(grid + 2 * h, p) + 8 * ps.gev_cdf(grid + h, p)
             - 8 * ps.gev_cdf(grid - h, p) + ps.gev_cdf(grid - 2 * h, p)) / (12 * h)
    dmax = float(np.max(np.abs(deriv - ps.gev_pdf(grid, p))))
    return abs(total - 1), d, dmax


def test_criterion_5_gev_correctness():
    t0 = time.perf_counter()
    cells = ps.valid_gev_cells(classes=(2, 3, 4)) + ps.valid_gev_cells(classes=(5,))
    assert len(cells) == 69
    worst_int = worst_ks = worst_der = 0.0
    bad = []
    for i, k in cells:
        e_int, d, e_der = _gev_cell_checks(i, k)
        worst_int, worst_ks, worst_der = max(worst_int, e_int), max(worst_ks, d), max(worst_der, e_der)
        if not (e_int <= 1e-6 and d < 0.01 and e_der <= 1e-6):
            bad.append((i, k, e_int, d, e_der))
    elapsed = time.perf_counter() - t0
    detail = (
        f"{len(cells)} cells; max |int-1|={worst_int:.1e} (1e-6), max KS={worst_ks:.4f} (0.01), "
        f"max |dF/dx-f|={worst_der:.1e} (1e-6)"
    )
    assert report(5, "GEV correctness", not bad, elapsed, 120.0, detail), bad


def test_criterion_6_loss_model():
    t0 = time.perf_counter()
    c = cs.loss_coeffs(100.0)
    # Direct evaluation at d = 100 m.
    oracle = (0.0002086 * 100 + 0.0008739, 0.00002644 * 100 - 0.00004644,
              -0.00009098 * 100 + 0.8876, -0.0006432 * 100 - 0.000001126)
    frozen = (0.0217339, 0.00259756, 0.878502, -0.064321126)
    got = (c.a0, c.a1, c.k_exp, c.b0)
    coeff_err = max(max(abs(g - o) for g, o in zip(got, oracle)), max(abs(g - z) for g, z in zip(got, frozen)))
    a1mhz = abs(cs.path_loss(1.0, c))
    f = np.linspace(0.0, 30.0, 30001)
    mono = all(np.all(np.diff(np.abs(cs.path_loss(f, cs.loss_coeffs(d)))) <= 0) for d in (2.0, 10.0, 100.0, 500.0))
    elapsed = time.perf_counter() - t0
    ok = coeff_err <= 1e-9 and abs(a1mhz - 0.975960) <= 1e-5 and mono
    detail = f"coeffs={got} err {coeff_err:.1e} (1e-9), |A(1MHz,100m)|={a1mhz:.6f}, monotone={mono}"
    assert report(6, "loss model", ok, elapsed, 1.0, detail)


def test_criterion_7_synthesis_determinism(tmp_path):
    paths, run_times = [], []
    for tag in ("a", "b"):
        out = tmp_path / f"{tag}.json"
        t0 = time.perf_counter()
        assert cli.main(["generate", "--class", "5", "--cluster", "20", "--count", "10000",
                         "--seed", "31337", "--out", str(out)]) == 0
        run_times.append(time.perf_counter() - t0)
        paths.append(out)
    digests = [hashlib.sha256(p.read_bytes()).hexdigest() for p in paths]
    doc = json.loads(paths[0].read_text())
    structure_ok = all(
        all(b["delay_s"] > a["delay_s"] for a, b in zip(r["paths"], r["paths"][1:]))
        and all(p["magnitude"] > 0 for p in r["paths"])
        for r in doc
    )
    out1 = tmp_path / "c1.json"
    assert cli.main(["generate", "--class", "1", "--cluster", "7", "--count", "1000", "--seed", "5", "--out", str(out1)]) == 0
    class1_ok = all(len(r["paths"]) == 1 for r in json.loads(out1.read_text()))
    elapsed = max(run_times)
    ok = digests[0] == digests[1] and structure_ok and class1_ok and len(doc) == 10_000
    detail = f"sha equal {digests[0] == digests[1]}, structure {structure_ok}, class I single-path {class1_ok}; slowest 1e4-realization generate"
    assert report(7, "synthesis determinism", ok, elapsed, 10.0, detail)


def test_criterion_8_response_impulse_consistency():
    t0 = time.perf_counter()
    v = phase_velocity(NAYY150)
    delays = [0.5e-6, 1.6e-6, 3.1e-6]
    mags = [0.6, 0.4, 0.25]
    ch = cs.ChannelRealization(
        class_id=0, cluster=1, seed=0,
        paths=tuple(cs.Path(t, m, t * v, int(round((t - delays[0]) / 1e-7))) for t, m in zip(delays, mags)),
    )
    grid = cs.frequency_grid(0.0, 30e6, 1024)
    worst_rt = 0.0
    for model in cs.PHASE_MODELS:
        fr = cs.transfer_function(ch, grid, model)
        _, ht = cs.impulse_response(fr)
        back = cs.forward_response(ht)
        worst_rt = max(worst_rt, float(np.max(np.abs(back - fr.h) / np.abs(fr.h))))
    fr = cs.transfer_function(ch, grid, "geometric_delay")
    t, ht = cs.impulse_response(fr)
    dt = t[1] - t[0]
    interior = np.flatnonzero((ht[1:-1] > ht[:-2]) & (ht[1:-1] >= ht[2:])) + 1
    peaks = np.sort(t[interior[np.argsort(ht[interior])[-3:]]])
    offsets = np.abs(peaks - np.array(delays))
    elapsed = time.perf_counter() - t0
    ok = worst_rt <= 1e-9 and np.all(offsets <= dt)
    detail = f"round-trip rel err {worst_rt:.1e} (1e-9), peak offsets {np.round(offsets / dt, 3).tolist()} bins (<=1)"
    assert report(8, "response/impulse consistency", ok, elapsed, 5.0, detail)
