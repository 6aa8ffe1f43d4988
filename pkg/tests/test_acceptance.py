"""Acceptance criteria, one PASS/FAIL line each.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines inline; they
are printed with capture disabled, so they also show up in a plain run.
Criteria that the implementation does not meet are strict xfails: the
tolerances are the target ones and the printed verdict is FAIL.
"""

import os
import subprocess
import sys

import numpy as np
import pytest

from hybrid_bsqi import evolve, harness, presets
from hybrid_bsqi.problems import catalog

HERE = os.path.dirname(os.path.abspath(__file__))


@pytest.fixture
def report(capsys):
    def emit(tag, ok, detail):
        with capsys.disabled():
            print(f"\n[{tag}] {'PASS' if ok else 'FAIL'}: {detail}")
        return ok
    return emit


def within(value, target, rel):
    return abs(value - target) <= rel * abs(target)


def literal_study(scheme):
    """Advection sine at dt = 0.1 dx^1.5, dx-weighted norms."""
    problem = catalog("advection_sine")
    return harness.convergence_study(problem, evolve.HybridConfig(scheme),
                                     (20, 40, 80, 160, 320), 1.0, dt_fixed=(0.1, 1.5))


def test_c1_table2_cbsqi_advection(report):
    reps = literal_study("cbsqi")
    e20, q320 = reps[0].linf, reps[-1].order_linf
    ok = within(e20, 3.188811e-04, 0.05) and abs(q320 - 4.0) <= 0.05
    pre = presets.run_preset("table2").tables["advection_sine", "cbsqi"]
    report("C1", ok, f"CBSQI advection, dt=0.1dx^1.5: Linf(N=20)={e20:.6e} "
                     f"(target 3.188811e-04 +-5%), order(N=320)={q320:.4f} (4.0 +-0.05)"
                     f"\n       info: table2 preset (dt=dx^2) gives Linf(N=20)="
                     f"{pre[0].linf:.6e}, order(N=320)={pre[-1].order_linf:.4f}")
    assert ok


def _c2_verdict(reps):
    e20 = reps[0].linf
    mid = [r.order_linf for r in reps[1:4]]
    last = reps[-1].order_linf
    ok = (within(e20, 3.998450e-05, 0.05) and all(abs(q - 6.0) <= 0.15 for q in mid)
          and last >= 5.5)
    detail = (f"Linf(N=20)={e20:.6e} (target 3.998450e-05 +-5%), orders N=40..160 "
              f"{', '.join(f'{q:.3f}' for q in mid)} (6.0 +-0.15), N=320 {last:.3f} (>= 5.5)")
    return ok, detail


@pytest.mark.xfail(strict=True, reason="at dt=0.1dx^1.5 the N=20 error is 1.08e-05, "
                   "not the target 4.00e-05, and time error caps the N=320 order at 5.13")
def test_c2_table3_qnbsqi_literal_timestep(report):
    ok, detail = _c2_verdict(literal_study("qnbsqi"))
    report("C2", ok, "QnBSQI advection, dt=0.1dx^1.5: " + detail)
    assert ok


def test_c2_table3_qnbsqi_dx2_timestep(report):
    reps = presets.run_preset("table3").tables["advection_sine", "qnbsqi"]
    ok, detail = _c2_verdict(reps)
    report("C2/dt=dx^2", ok, "QnBSQI advection, table3 preset (dt=dx^2): " + detail)
    assert ok


def test_c3_tables4_5_burgers_orders(report):
    q4 = presets.run_preset("table4").tables["burgers_sine", "cbsqi"][-1].order_linf
    q5 = presets.run_preset("table5").tables["burgers_sine", "qnbsqi"][-1].order_linf
    ok = abs(q4 - 4.0) <= 0.1 and abs(q5 - 5.98) <= 0.15
    report("C3", ok, f"Burgers sine Linf order at N=640: CBSQI {q4:.4f} (4.0 +-0.1), "
                     f"QnBSQI {q5:.4f} (5.98 +-0.15)")
    assert ok


TARGET_L1 = {
    ("table6", "weno3"): (0.0670, 0.0294, 0.0174, 0.0132),
    ("table6", "hybrid4"): (0.0662, 0.0287, 0.0168, 0.0127),
    ("table7", "weno5"): (0.0620, 0.0267, 0.0156, 0.0118),
    ("table7", "hybrid6"): (0.0610, 0.0262, 0.0152, 0.0116),
}


@pytest.mark.xfail(strict=True, reason="WENO5 at N=150 gives L1 0.01325, 15.04% below "
                   "the target 0.0156; every other entry is within 15%")
def test_c4_tables6_7_pulse_l1(report):
    ok = True
    lines = []
    for table, (weno, hyb) in (("table6", ("weno3", "hybrid4")),
                               ("table7", ("weno5", "hybrid6"))):
        res = presets.run_preset(table)
        for scheme in (weno, hyb):
            for r, want in zip(res.tables["burgers_pulse", scheme], TARGET_L1[table, scheme]):
                good = within(r.l1, want, 0.15)
                ok &= good
                lines.append(f"{scheme} N={r.n}: {r.l1:.4f} vs {want:.4f} "
                             f"({100 * (r.l1 / want - 1):+.1f}%){'' if good else ' <-'}")
        for rw, rh in zip(res.tables["burgers_pulse", weno], res.tables["burgers_pulse", hyb]):
            if rh.l1 > rw.l1:
                ok = False
                lines.append(f"{hyb} > {weno} at N={rw.n}")
    report("C4", ok, "Burgers pulse L1 within 15% of the target values, hybrid <= WENO\n       "
           + "\n       ".join(lines))
    assert ok


@pytest.mark.xfail(strict=True, reason="final-step WENO share is 11.0% at N=100 and "
                   "1.6% at N=800 against 21 +-5 and 5 +-3")
def test_c5_fig4d_weno_share(report):
    usage = presets.run_preset("fig4d").usage
    ns = sorted(usage)
    final = [usage[n][0] for n in ns]
    monotone = all(b <= a for a, b in zip(final, final[1:]))
    ok = abs(final[0] - 21.0) <= 5.0 and abs(final[-1] - 5.0) <= 3.0 and monotone
    shares = ", ".join(f"N={n}: {f:.3f}%" for n, f in zip(ns, final))
    report("C5", ok, f"Hybrid6 final WENO share {shares} (21 +-5 at 100, 5 +-3 at 800, "
                     f"nonincreasing: {monotone})")
    assert ok


def test_c6_efficiency_ratios(report):
    res = presets.run_preset("efficiency", n_list=(3200,))
    ok = True
    parts = []
    for pname, table in res.timing.items():
        for hyb in ("hybrid4", "hybrid6"):
            r = table.ratio(hyb, 3200)
            ok &= r < 0.6
            parts.append(f"{pname} {hyb}/{harness.HYBRID_PARTNER[hyb]}={r:.3f}")
    report("C6", ok, "wall-time ratios at N=3200 (< 0.6): " + ", ".join(parts))
    assert ok


def test_c7_sod(report):
    snap = presets.run_preset("sod").snapshots[0]
    problem = catalog("euler_sod")
    a, b = problem.domain
    fine = np.asarray(problem.exact(np.linspace(a, b, 200001), 0.25))[:, 0]
    excess, jump = harness.overshoot(snap.values[:, 0], fine)
    l1 = snap.error.l1
    ok = l1 < 5e-3 * (b - a) and excess < 0.02 * jump
    report("C7", ok, f"Sod density L1={l1:.4e} (< {5e-3 * (b - a):.0e}), overshoot="
                     f"{excess:.3e} (< 2% of jump {jump:.4f})")
    assert ok


PROPERTY_TESTS = (
    "test_schemes.py::test_bsqi_flux_consistency",
    "test_schemes.py::test_telescoping_equivalence",
    "test_schemes.py::test_symbol_equals_stencil_dft",
    "test_schemes.py::test_weno_weights_normalised",
    "test_evolve.py::test_periodic_mass_conservation",
    "test_evolve.py::test_ssprk3_order_three",
    "test_bsqi.py::test_polynomial_exactness",
    "test_problems.py::test_star_pressure_against_bisection",
    "test_presets.py::test_snapshot_preset_is_deterministic",
    "test_cli.py::test_determinism",
)


def test_c8_property_suite(report):
    ids = [os.path.join(HERE, t) for t in PROPERTY_TESTS]
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *ids],
                          capture_output=True, text=True, cwd=HERE)
    summary = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr
    ok = proc.returncode == 0
    report("C8", ok, f"property suite ({len(PROPERTY_TESTS)} groups): {summary}")
    assert ok, proc.stdout[-3000:]


def test_c9_nonconvex(report):
    snaps = presets.run_preset("nonconvex").snapshots
    errs = {s.problem: s.error.l1 for s in snaps}
    ok = all(e < 2e-2 for e in errs.values()) and len(errs) == 2
    report("C9", ok, "Hybrid6 non-convex L1 (< 2e-2): "
           + ", ".join(f"{k}={v:.3e}" for k, v in errs.items()))
    assert ok
