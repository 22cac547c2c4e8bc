"""End-to-end acceptance suite: ten numbered criteria at production
resolution (n = 512, L = 40, seed 0).

Each test prints one [PASS]/[FAIL] line per measured quantity before
asserting, so the verdicts survive in the captured log either way.  The
heavy experiment harnesses are shared between criteria via a module cache.
"""

import functools
import json
import subprocess
import sys

import numpy as np
import pytest

from deltalap import bessel_k0
from deltalap.config import RunConfig
from deltalap.experiments import EXPERIMENT_FUNCS
from deltalap.special import EULER_GAMMA


@functools.lru_cache(maxsize=None)
def _run(name):
    cfg = RunConfig(name)
    return EXPERIMENT_FUNCS[name](cfg)


def _verdict(capsys, criterion, rows):
    """rows: (label, value, threshold, comparison). Prints and asserts."""
    ok = True
    with capsys.disabled():
        for label, value, threshold, comparison in rows:
            passed = value <= threshold if comparison == "le" else value >= threshold
            ok = ok and passed
            mark = "PASS" if passed else "FAIL"
            print(
                f"[{mark}] criterion-{criterion} {label}: "
                f"{value:.6g} ({comparison} {threshold:.6g})"
            )
    assert ok


def _from_checks(capsys, criterion, checks, names=None):
    rows = [
        (c["name"], c["value"], c["threshold"], c["comparison"])
        for c in checks
        if names is None or c["name"] in names
    ]
    if names is not None:
        assert len(rows) == len(names)
    _verdict(capsys, criterion, rows)


def test_criterion_01_bessel_certification(capsys, bessel_oracle):
    real_err = 0.0
    for r, k0r, k0i, _, _ in bessel_oracle["real"]:
        ref = complex(k0r, k0i)
        real_err = max(real_err, abs(bessel_k0(r).value - ref) / abs(ref))
    cplx_err = 0.0
    for a, b, k0r, k0i, _, _ in bessel_oracle["complex"]:
        ref = complex(k0r, k0i)
        cplx_err = max(cplx_err, abs(bessel_k0(complex(a, b)).value - ref) / abs(ref))
    defect_margin = 0.0  # max of defect / bound over |z| <= 1e-2
    for z in np.logspace(-8, -2, 60):
        defect = abs(bessel_k0(z).value + np.log(z / 2.0) + EULER_GAMMA)
        defect_margin = max(defect_margin, defect / (2.0 * z * z * np.log(2.0 / z)))
    _verdict(
        capsys,
        1,
        [
            ("k0_real_oracle", real_err, 1e-10, "le"),
            ("k0_complex_oracle", cplx_err, 1e-10, "le"),
            ("small_z_defect_ratio", defect_margin, 1.0, "le"),
        ],
    )


def test_criterion_02_eigenpair(capsys):
    _, checks = _run("resolvent_checks")
    _from_checks(capsys, 2, checks, names=("beta_at_omega0", "eigenpair"))


def test_criterion_03_resolvent_algebra(capsys):
    _, checks = _run("resolvent_checks")
    _from_checks(
        capsys,
        3,
        checks,
        names=("first_resolvent_identity", "self_adjointness", "rank_one_alignment"),
    )


def test_criterion_04_fractional_power(capsys):
    _, checks = _run("theorem21")
    _from_checks(capsys, 4, checks, names=("quadrature_self_test", "invsqrt_semigroup"))


def test_criterion_05_decomposition_oracle(capsys):
    _, checks = _run("theorem22")
    _from_checks(capsys, 5, checks)


def test_criterion_06_norm_estimate_harness(capsys):
    _, checks = _run("gamma_norms")
    # the refined-grid kernel matrices are large; release them before the
    # propagation criteria
    from deltalap.operator import _kernel_matrices

    _kernel_matrices.cache_clear()
    _from_checks(capsys, 6, checks)


def test_criterion_07_propagator(capsys):
    _, checks = _run("propagate_linear")
    _from_checks(capsys, 7, checks)


def test_criterion_08_nls(capsys):
    _, strang = _run("nls_strang")
    _, picard = _run("nls_picard")
    wanted = ("mass_drift", "energy_ratio_low", "energy_ratio_high")
    rows = [c for c in strang if c["name"] in wanted] + picard
    _from_checks(capsys, 8, rows)


def test_criterion_09_rescaling(capsys):
    _, checks = _run("rescaling_checks")
    _from_checks(capsys, 9, checks)


def test_criterion_10_determinism(capsys, tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"experiment": "rescaling_checks"}))
    out = tmp_path / "out"
    reports = []
    for _ in range(2):
        proc = subprocess.run(
            [
                sys.executable,
                "-m",
                "deltalap.cli",
                "run",
                "--config",
                str(cfg_path),
                "--output-dir",
                str(out),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        reports.append((out / "report.json").read_bytes())
    identical = 0.0 if reports[0] == reports[1] else 1.0
    _verdict(capsys, 10, [("report_byte_identical_gap", identical, 0.0, "le")])
