"""Acceptance suite: one test per criterion A1-A9, each printing a PASS/FAIL
line (run with -s to see them live). Expensive experiments run once in
session fixtures and feed several criteria.

Known honest failures, analyzed in the project notes: the A1 sup-error
bound (1e-5 at dt=1e-3) is unattainable by any second-order splitting at
that step (measured floor ~5e-5; Strang gives 1.9e-4), and the A4 distance
bound (8e-3) sits ~3% below the dt-converged matched-asymptotics error of
this setup. Both assertions are kept as specified.
"""

import time

import numpy as np
import pytest

from q1dnls.analytic import BreatherParams, akhmediev, peregrine_limit_check
from q1dnls.config import load_config
from q1dnls.core import ComplexField, ModelSpec, SimulationConfig, make_grid
from q1dnls.diagnostics import (
    breather_comparator,
    detect_fission_fusion,
    fit_critical_exponent,
    level_set_topology,
    mi_domain_scan,
    ring_radius,
    track_peaks,
    uniform_distance,
)
from q1dnls.mae import CauchyData, EnvelopeSpec, predict_events
from q1dnls.solver import evolve

M1 = ModelSpec(1)


def report(criterion, ok, detail):
    print(f"[{criterion}] {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


# ---------------------------------------------------------------- fixtures


def run_comparison(cfg, dt, compare_times, want_ring=False):
    """Evolve a configured experiment, comparing against the analytic
    deformation at the given times; returns a result dict."""
    pred = predict_events(cfg.data)
    evaluator = breather_comparator(pred.profiles, cfg.data.delta)
    field = cfg.build_initial_field()
    t_end = compare_times[-1]
    marks = sorted(set(compare_times) | {t for t in cfg.output_times if t <= t_end})
    sim = SimulationConfig(
        cfg.model, cfg.grid, dt, t_end, tuple(marks),
        conservation_cadence=max(1, int(round(0.1 / dt))),
    )
    res = {
        "pred": pred,
        "rows": [],
        "records": [],
        "rings": [],
        "topo": {},
        "delta": cfg.data.delta,
    }
    snap_times = {round(t, 10) for t in cfg.output_times}

    def sink(f):
        dist = uniform_distance(f, evaluator)
        rec = track_peaks(f, cfg.threshold)
        res["rows"].append((f.time, dist))
        res["records"].append(rec)
        if want_ring:
            res["rings"].append((f.time, ring_radius(f, cfg.threshold)))
            if round(f.time, 10) in snap_times:
                res["topo"][round(f.time, 10)] = level_set_topology(
                    f, cfg.isosurface_level
                )

    t0 = time.perf_counter()
    state = evolve(field, cfg.model, sim, sink=sink)
    res["wall"] = time.perf_counter() - t0
    res["state"] = state
    res["events"] = detect_fission_fusion(res["records"])
    res["max_distance"] = max(d for _, d in res["rows"])
    return res


@pytest.fixture(scope="session")
def fig2_runs():
    """The fig2 cosine-envelope experiment, both transverse signs.

    dt = 1.5e-4 rather than the interactive default 1e-3 so that the A8
    Hamiltonian bound (an O(dt^2) quantity) is met; the uniform distance is
    insensitive to this (it is dominated by the asymptotic matching error).
    """
    times = tuple(np.round(np.arange(3.0, 4.3001, 0.02), 10))
    out = {}
    for name in ("fig2.json", "fig2_enls.json"):
        cfg = load_config(name)
        out[cfg.model.eta1] = run_comparison(cfg, 1.5e-4, times)
    return out


@pytest.fixture(scope="session")
def fig1_run():
    cfg = load_config("fig1.json")
    times = tuple(np.round(np.arange(2.6, 3.5001, 0.01), 10))
    return run_comparison(cfg, 1e-3, times)


@pytest.fixture(scope="session")
def fig4_run():
    cfg = load_config("fig4.json")
    times = tuple(np.round(np.arange(2.6, 3.4501, 0.05), 10))
    return run_comparison(cfg, 1e-3, times, want_ring=True)


@pytest.fixture(scope="session")
def scan_results():
    cfg = load_config("fig6.json")
    pts = [(2 * np.pi / Lx, 2 * np.pi / Ly) for Lx, Ly in cfg.scan["points"]]
    results = mi_domain_scan(
        cfg.model, pts, cfg.scan["epsilon"], cfg.scan["t_max"],
        dt=cfg.scan["dt"], counts=cfg.scan["counts"],
        threshold=cfg.scan["threshold"], cadence=cfg.scan["cadence"],
    )
    return results


# ---------------------------------------------------------------- A1


def evolve_breather(dt, n=512, phi=np.pi / 3, t_half=3.0):
    p = BreatherParams(phi)
    g = make_grid([2 * np.pi / p.k], [n])
    x = g.coords[0]
    f = ComplexField(g, akhmediev(x, -t_half, p) * np.exp(-2j * t_half), -t_half)
    sim = SimulationConfig(M1, g, dt, t_half, conservation_cadence=10**6)
    st = evolve(f, M1, sim)
    exact = akhmediev(x, t_half, p) * np.exp(2j * t_half)
    return float(np.max(np.abs(st.field.values - exact)))


@pytest.fixture(scope="session")
def breather_errors():
    return evolve_breather(1e-3), evolve_breather(5e-4)


def test_a1_exact_solution_tolerance(breather_errors):
    err, _ = breather_errors
    ok = err < 1e-5
    report(
        "A1",
        ok,
        f"breather sup error {err:.3e} (criterion < 1e-5; second-order "
        "splitting floor makes this unattainable at dt=1e-3, see notes)",
    )
    assert ok


def test_a1_second_order_ratio(breather_errors):
    err1, err2 = breather_errors
    ratio = err1 / err2
    ok = 3.6 < ratio < 4.4
    assert report("A1", ok, f"dt-halving error ratio {ratio:.3f} in [3.6, 4.4]")


# ---------------------------------------------------------------- A2


def test_a2_linear_growth_rates():
    eps = 1e-4
    worst = 0.0
    for k in (0.3, 0.6, 1.0, 1.2, 1.6, 1.9):
        g = make_grid([2 * np.pi / k], [64])
        f = ComplexField(g, 1 + eps * np.cos(k * g.coords[0]))
        times = tuple(np.round(np.arange(0.1, 2.001, 0.1), 10))
        sim = SimulationConfig(M1, g, 1e-3, 2.0, times, conservation_cadence=10**6)
        phi = np.arccos(k / 2)
        ts, ps = [], []

        def sink(fl):
            spec = np.fft.fft(fl.values * np.exp(-2j * fl.time)) / g.size
            proj = np.exp(-1j * phi) * np.conj(spec[1]) - np.exp(1j * phi) * spec[-1]
            ts.append(fl.time)
            ps.append(abs(proj))

        evolve(f, M1, sim, sink=sink)
        slope = np.polyfit(ts, np.log(ps), 1)[0]
        sigma = k * np.sqrt(4 - k * k)
        worst = max(worst, abs(slope - sigma) / sigma)
    ok = worst < 0.01
    assert report("A2", ok, f"worst growth-rate error {worst:.2%} over 6 carriers (< 1%)")


# ---------------------------------------------------------------- A3


def test_a3_distance_both_models(fig2_runs):
    d_h = fig2_runs[-1]["max_distance"]
    d_e = fig2_runs[+1]["max_distance"]
    ok = d_h < 8e-4 and d_e < 8e-4
    assert report(
        "A3", ok, f"max uniform distance HNLS {d_h:.2e}, ENLS {d_e:.2e} (< 8e-4)"
    )


def test_a3_event_sequence(fig2_runs):
    ok = True
    details = []
    for eta, res in fig2_runs.items():
        ev = [e for e in res["events"] if e.confidence == "high"]
        fis = [e for e in ev if e.kind == "fission"]
        fus = [e for e in ev if e.kind == "fusion"]
        if not (fis and fus):
            ok = False
            details.append(f"eta1={eta}: missing events")
            continue
        gap = min(e.time for e in fus) - min(e.time for e in fis)
        expected = np.log(1.3 / 0.7) / res["pred"].sigma
        ok &= min(e.time for e in fis) < min(e.time for e in fus)
        ok &= abs(gap - expected) / expected < 0.25
        details.append(f"eta1={eta}: gap {gap:.3f} vs {expected:.3f}")
    assert report("A3", ok, "fission-then-fusion; " + "; ".join(details))


# ---------------------------------------------------------------- A4


def test_a4_distance(fig4_run):
    d = fig4_run["max_distance"]
    ok = d < 8e-3
    report(
        "A4",
        ok,
        f"3+1D max uniform distance {d:.3e} over [2.6, 3.45] (criterion < 8e-3; "
        "the dt-converged matching error of this setup sits ~3% above the "
        "bound, see notes)",
    )
    assert ok


def test_a4_ring_topology(fig4_run):
    topo = fig4_run["topo"]
    pre = topo[2.75]
    post = topo[3.4]
    ok = (not pre["is_ring"]) and post["is_ring"] and post["components"] == 1
    assert report(
        "A4",
        ok,
        f"isosurface 2.2: pre-fission chi={pre['euler_characteristic']} "
        f"(ball), post-fission chi={post['euler_characteristic']} (ring), "
        f"runtime {fig4_run['wall']:.0f}s at 64x128x128",
    )


# ---------------------------------------------------------------- A5


def test_a5_planar_critical_exponent(fig1_run):
    res = fig1_run
    fis = [e for e in res["events"] if e.kind == "fission"][0]
    delta = res["delta"]
    branches = {"+": [], "-": []}
    for rec in res["records"]:
        if rec.time <= fis.time:
            continue
        for kk in range(rec.n):
            Y = delta * rec.positions[kk][1]
            branches["+" if Y > 0 else "-"].append((rec.time, Y))
    sigma = res["pred"].sigma
    amp_expected = np.sqrt(2 * sigma / 2.0)  # gaussian: |f''(0)| = 2
    ok = True
    details = []
    for side, samples in branches.items():
        fit = fit_critical_exponent(samples, fis.time, window=0.5)
        ok &= abs(fit["exponent"] - 0.5) < 0.1
        ok &= abs(fit["amplitude"] - amp_expected) / amp_expected < 0.15
        details.append(f"Y{side}: exp {fit['exponent']:.3f} amp {fit['amplitude']:.3f}")
    assert report(
        "A5", ok, f"planar sqrt law ({'; '.join(details)}; expected amp {amp_expected:.3f})"
    )


def test_a5_ring_critical_exponent(fig4_run):
    res = fig4_run
    fis = [e for e in res["events"] if e.kind == "fission"][0]
    delta = res["delta"]
    samples = [(t, delta * r) for t, r in res["rings"] if np.isfinite(r) and t > fis.time]
    fit = fit_critical_exponent(samples, fis.time, window=0.5)
    sigma = res["pred"].sigma
    amp_expected = np.sqrt(2 * sigma / 2.0)
    ok = abs(fit["exponent"] - 0.5) < 0.1
    ok &= abs(fit["amplitude"] - amp_expected) / amp_expected < 0.15
    assert report(
        "A5",
        ok,
        f"ring radius: exponent {fit['exponent']:.3f} (0.5 +- 0.1), "
        f"amplitude {fit['amplitude']:.3f} vs {amp_expected:.3f} (15%)",
    )


# ---------------------------------------------------------------- A6


def test_a6_crest_times(fig2_runs, fig4_run):
    crest4 = [e for e in fig4_run["events"] if e.kind == "first-appearance-max"][0]
    ok4 = abs(crest4.time - 2.93) < 0.1
    crest2 = [
        e for e in fig2_runs[-1]["events"] if e.kind == "first-appearance-max"
    ][0]
    t0_formula = fig2_runs[-1]["pred"].t0
    ok2 = abs(crest2.time - t0_formula) < 0.25
    ok = ok4 and ok2
    assert report(
        "A6",
        ok,
        f"fig4 crest {crest4.time:.3f} vs 2.93 (0.1); "
        f"fig2 crest {crest2.time:.3f} vs formula {t0_formula:.3f} (0.25)",
    )


# ---------------------------------------------------------------- A7


def test_a7_mi_domain_scan(scan_results):
    by_s = {round(r["s"], 3): r["classification"] for r in scan_results}
    red = scan_results[0]
    green = scan_results[1]
    outside = scan_results[2:]
    ok = red["classification"] == "fission"
    ok &= green["classification"] == "no-fission"
    ok &= all(r["classification"] == "no-growth" for r in outside)
    assert report(
        "A7",
        ok,
        f"red (s={red['s']:.2f}) {red['classification']}; "
        f"green (s={green['s']:.2f}) {green['classification']}; "
        f"outside: {[r['classification'] for r in outside]}",
    )


# ---------------------------------------------------------------- A8


def test_a8_mass_and_reversibility():
    g = make_grid([6.0], [128])
    f = ComplexField(g, 1 + 0.01 * np.cos(2 * np.pi / 6 * g.coords[0]))
    sim = SimulationConfig(M1, g, 1e-3, 10.0, conservation_cadence=500)
    st = evolve(f, M1, sim)
    masses = [c[1] for c in st.conserved]
    drift = max(abs(m - masses[0]) for m in masses) / masses[0]

    from q1dnls.solver import _Propagator, _strang_segment

    p = BreatherParams(1.1)
    g2 = make_grid([2 * np.pi / p.k], [128])
    v0 = akhmediev(g2.coords[0], -0.5, p) * np.exp(-1j)
    prop = _Propagator(M1, g2)
    v = _strang_segment(v0.copy(), prop, 1e-3, 100)
    v = _strang_segment(v, prop, -1e-3, 100)
    rt = float(np.max(np.abs(v - v0)))
    ok = drift < 1e-12 and rt < 1e-12
    assert report(
        "A8", ok, f"mass drift {drift:.2e} over 1e4 steps; round trip {rt:.2e} (< 1e-12)"
    )


def test_a8_hamiltonian_drift(fig2_runs):
    worst = 0.0
    for res in fig2_runs.values():
        cons = res["state"].conserved
        h0 = cons[0][2]
        worst = max(worst, max(abs(c[2] - h0) for c in cons) / abs(h0))
    ok = worst < 1e-6
    assert report(
        "A8", ok, f"Hamiltonian relative drift {worst:.2e} over the A3 runs (< 1e-6)"
    )


# ---------------------------------------------------------------- A9


def test_a9_analytic_invariants():
    # PDE residual of the breather through spectral x-derivatives
    from q1dnls.analytic import akhmediev_dt

    p = BreatherParams(np.pi / 3)
    n = 512
    g = make_grid([2 * np.pi / p.k], [n])
    x = g.coords[0]
    k = g.wavenumbers[0]
    worst = 0.0
    for t in np.linspace(-3, 3, 7):
        A = akhmediev(x, t, p)
        u = A * np.exp(2j * t)
        u_t = (akhmediev_dt(x, t, p) + 2j * A) * np.exp(2j * t)
        u_xx = np.fft.ifft(-(k**2) * np.fft.fft(u))
        worst = max(worst, np.max(np.abs(1j * u_t + u_xx + 2 * np.abs(u) ** 2 * u)))
    ok = worst < 1e-8
    # symmetry identities
    xs = np.linspace(-2, 2, 41)
    ok &= np.allclose(akhmediev(xs, 0.7, p), akhmediev(-xs, 0.7, p), atol=1e-12)
    ok &= np.allclose(
        np.abs(akhmediev(xs, -0.7, p)), np.abs(akhmediev(xs, 0.7, p)), atol=1e-12
    )
    # Peregrine limit monotonicity
    d1 = peregrine_limit_check(np.pi / 2 - 1e-2)
    d2 = peregrine_limit_check(np.pi / 2 - 1e-3)
    ok &= d2 < d1 < 1e-1
    assert report(
        "A9",
        ok,
        f"PDE residual {worst:.1e} (<1e-8); symmetries hold; "
        f"Peregrine-limit distance {d1:.2e} -> {d2:.2e} decreasing",
    )


def test_a9_mae_covariances():
    env = EnvelopeSpec("gaussian")
    base = CauchyData(1e-2, 1e-2, 6.0, 0.3 + 0.2j, 0.1 - 0.4j, env)
    sigma = base.sigma
    t0a = predict_events(base).t0
    smaller = CauchyData(1e-3, 1e-2, 6.0, 0.3 + 0.2j, 0.1 - 0.4j, env)
    ok = abs(predict_events(smaller).t0 - t0a - np.log(10) / sigma) < 1e-12
    theta = 0.41
    rot = CauchyData(
        1e-2, 1e-2, 6.0,
        base.c0_plus * np.exp(1j * theta),
        base.c0_minus * np.exp(-1j * theta),
        env,
    )
    pa, pb = predict_events(base), predict_events(rot)
    ok &= abs(pb.alpha0 - pa.alpha0 * np.exp(-1j * theta)) < 1e-14
    ok &= abs(pb.t0 - pa.t0) < 1e-12
    shift = (pb.x10 - (pa.x10 - theta / base.kx)) % 6.0
    ok &= min(shift, 6.0 - shift) < 1e-12
    assert report("A9", ok, "epsilon log-shift and phase/translation covariance hold")


@pytest.mark.parametrize(
    "env,W",
    [
        (EnvelopeSpec("gaussian"), 5.0),
        (EnvelopeSpec("cosine", gamma=0.3, L_Y=10.0), 10.0),
        (EnvelopeSpec("sech"), 12.0),
        (EnvelopeSpec("double_hump", y_m=0.8), 5.8),
    ],
    ids=["gaussian", "cosine", "sech", "double-hump"],
)
def test_a9_detector_oracle(env, W):
    data = CauchyData(1e-2, 1e-2, 6.0, 0.5, 0.5, env, slow_halfwidth=W)
    pred = predict_events(data)
    evaluator = breather_comparator(pred.profiles, 1.0)
    grid = make_grid([6.0, 2 * W], [64, 256])
    t_lo = min(e.time for e in pred.events) - 0.3
    t_hi = max(e.time for e in pred.events) + 0.45
    records = [
        track_peaks(ComplexField(grid, evaluator(grid, t), t), 1.5)
        for t in np.arange(t_lo, t_hi, 0.01)
    ]
    detected = detect_fission_fusion(records)
    L = grid.lengths[1]
    worst = 0.0
    ok = True
    for pe in pred.events:
        gate = 1.0 if pe.kind == "first-appearance-max" else 0.5
        close = [
            de for de in detected
            if de.kind == pe.kind
            and min(abs(de.slow - pe.slow), L - abs(de.slow - pe.slow)) < gate
        ]
        if not close:
            ok = False
            continue
        worst = max(worst, min(abs(de.time - pe.time) for de in close))
    ok &= worst < 0.02
    assert report(
        "A9", ok, f"{env.family}: all predicted events recovered, worst dt {worst:.4f} (< 0.02)"
    )
