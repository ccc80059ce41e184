import json
import math
import sys

import numpy as np
import pytest

from hencky import cli
from hencky.cli import EXIT_ERROR, EXIT_FAIL, EXIT_OK, EXIT_USAGE, OPERATIONS, main


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def _values(out, key):
    for line in out.splitlines():
        if line.startswith(key + " "):
            return [float(v) for v in line[len(key) + 1:].strip("[]").replace("[", "").split(",")]
    raise KeyError(key)


# -- documented invocations -------------------------------------------------


def test_zubov_point_fails(capsys):
    rc, out, _ = run(capsys, "criterion", "point", "--criterion", "zubov", "--stretches", "e4,e-4,1",
                     "--model", "dev3exp", "--k", "1")
    assert rc == EXIT_FAIL
    assert "eps3+sqrt" in out and "verdict fail" in out


def test_invert_zero_stress(capsys):
    rc, out, _ = run(capsys, "invert", "--sigma", "0,0,0,0,0,0")
    assert rc == EXIT_OK
    assert np.allclose(_values(out, "logV"), 0.0)
    assert "residual 0" in out


def test_counterexamples_reproduce(capsys):
    rc, out, _ = run(capsys, "counterexamples")
    assert rc == EXIT_OK
    assert out.count("reproduced") == 5 and "NOT" not in out


# -- exit codes ----------------------------------------------------------------


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == EXIT_USAGE
    assert run(capsys)[0] == EXIT_USAGE
    assert run(capsys, "shear")[0] == EXIT_USAGE
    assert run(capsys, "criterion")[0] == EXIT_USAGE
    assert run(capsys, "--help")[0] == EXIT_OK


def test_input_errors(capsys):
    rc, _, err = run(capsys, "energy", "--stretches", "1,abc,1")
    assert rc == EXIT_ERROR and err.startswith("error:")
    assert run(capsys, "invert", "--sigma", "1,0,0,0,0,0", "--khat", "0.125")[0] == EXIT_ERROR
    assert run(capsys, "energy", "--stretches", "1,1")[0] == EXIT_ERROR
    assert run(capsys, "eos", "--J", "-1")[0] == EXIT_ERROR
    assert run(capsys, "energy", "--stretches", "1,1,1", "--E", "1")[0] == EXIT_ERROR
    assert run(capsys, "criterion", "point", "--criterion", "nope", "--stretches", "1,1,1")[0] == EXIT_ERROR


def test_pass_exits_zero(capsys):
    rc, out, _ = run(capsys, "criterion", "point", "--criterion", "dacorogna", "--stretches", "1.05,1,0.96",
                     "--model", "dev3exp", "--k", "0.25")
    assert rc == EXIT_OK and "verdict pass" in out


# -- subcommand outputs ------------------------------------------------------------


def test_energy_stretches_and_F(capsys):
    rc, out, _ = run(capsys, "energy", "--stretches", "1,1,1", "--mu", "2", "--kappa", "3")
    assert rc == EXIT_OK
    assert _values(out, "W") == pytest.approx([2 / 0.25 + 3 / 0.5])
    rc, out, _ = run(capsys, "energy", "--F", "1,0.3,0,0,1,0,0,0,1")
    assert rc == EXIT_OK and "K1" in out
    rc, out, _ = run(capsys, "energy", "--F", "1,0.3,0,1", "--model", "H")
    assert rc == EXIT_OK and "W_lifted_3d" in out
    rc, out, _ = run(capsys, "energy", "--J", "e", "--model", "vol_exp", "--khat", "0.5")
    assert _values(out, "W") == pytest.approx([math.exp(0.5)])


def test_negative_e_literals(capsys):
    rc, out, _ = run(capsys, "energy", "--log-stretches", "-1,0.5,0.5")
    assert rc == EXIT_OK
    rc, out, _ = run(capsys, "energy", "--stretches", "-e2,1,1")
    assert rc == EXIT_ERROR


def test_stress_and_checks(capsys):
    rc, out, _ = run(capsys, "stress", "--logV", "0.1,0.2,0,0.1,0,0.3", "--check", "--linear")
    assert rc == EXIT_OK
    assert _values(out, "gradient_fd_rel_error")[0] < 1e-6
    assert abs(_values(out, "vallee_residual")[0]) < 1e-6
    assert "sigma_linear" in out
    rc, out, _ = run(capsys, "stress", "--V", "1.1,0,0,1,0,1", "--model", "becker")
    assert rc == EXIT_OK and "T_biot" in out


def test_uniaxial_paths(capsys):
    rc, out, _ = run(capsys, "uniaxial", "--s", "1", "--E", "1", "--nu", "0", "--k", "1.5", "--khat", "1")
    assert rc == EXIT_OK
    rc, out, _ = run(capsys, "uniaxial", "--lam", "e")
    assert _values(out, "nominal") == pytest.approx([2 * math.exp(0.25) / math.e])
    assert run(capsys, "uniaxial")[0] == EXIT_ERROR


def test_shear_pureshear_eos_poisson(capsys):
    rc, out, _ = run(capsys, "shear", "--gamma", "1", "--shear-model", "linear", "--mu", "2")
    assert _values(out, "sigma12[linear]") == [2.0]
    rc, out, _ = run(capsys, "pureshear", "--s", "3", "--mu", "1", "--k", "0.5")
    assert rc == EXIT_OK
    rc, out, _ = run(capsys, "eos", "--J", "e", "--model", "H")
    assert _values(out, "slope") == pytest.approx([0.0], abs=1e-15)
    rc, out, _ = run(capsys, "poisson", "--s-over-E", "0.5", "--poisson-nu", "0.5")
    assert _values(out, "nu_hat") == pytest.approx([0.5], abs=1e-12)


@pytest.mark.parametrize(
    "extra,code",
    [
        (["--criterion", "tsts-form", "--X", "0,3,0,0,0,0", "--H", "33.333333333333336,1,0,33.333333333333336,0,33.333333333333336",
          "--k", "1", "--khat", "1", "--check"], EXIT_FAIL),
        (["--criterion", "tsts-full", "--k", "0.4", "--samples", "200"], EXIT_OK),
        (["--criterion", "coupled-tsts", "--a-hat", "0.3", "--samples", "200"], EXIT_OK),
        (["--criterion", "feasibility", "--nu", "0.3333333333333333", "--E", "1", "--k", "0.3", "--khat", "0.2",
          "--sigma-tilde-y", "0.12247448713915891", "--three-parameter"], EXIT_OK),
        (["--criterion", "kstsm", "--samples", "100"], EXIT_OK),
        (["--criterion", "volumetric", "--khat", "0.124"], EXIT_FAIL),
        (["--criterion", "logsquare", "--xi", "identity"], EXIT_FAIL),
        (["--criterion", "hdet", "--h", "exp", "--khat", "0.125"], EXIT_OK),
        (["--criterion", "schur", "--model", "logexp", "--samples", "20"], EXIT_OK),
        (["--criterion", "shear-h"], EXIT_FAIL),
        (["--criterion", "ks2d", "--stretches", "e2,1", "--model", "dev2exp", "--k", "0.25"], EXIT_OK),
        (["--criterion", "buliga", "--stretches", "1,1", "--model", "logexp", "--dim", "2", "--k", "1"], EXIT_OK),
        (["--criterion", "te", "--stretches", "e11,e7,e-1", "--model", "dev3exp", "--k", "0.1875"], EXIT_OK),
        (["--criterion", "be", "--stretches", "2,1,0.5"], EXIT_OK),
    ],
)
def test_criterion_point_variants(capsys, extra, code):
    rc, out, err = run(capsys, "criterion", "point", *extra)
    assert rc == code, err


def test_scan_csv_byte_identical(capsys, tmp_path):
    args = ["criterion", "scan", "--criterion", "dacorogna", "--model", "dev3exp", "--k", "0.25",
            "--grid-lo", "-5", "--grid-hi", "5", "--grid-n", "7"]
    paths = []
    for i, workers in enumerate(("1", "1", "3")):
        p = tmp_path / f"s{i}.csv"
        rc, out, _ = run(capsys, *args, "--workers", workers, "-o", str(p), "--summary", str(tmp_path / f"s{i}.json"))
        assert rc == EXIT_FAIL
        paths.append(p)
    blobs = [p.read_bytes() for p in paths]
    assert blobs[0] == blobs[1] == blobs[2]
    summary = json.loads((tmp_path / "s0.json").read_text())
    assert summary["count"] == 343


def test_scan_pass_exit(capsys):
    rc, out, _ = run(capsys, "criterion", "scan", "--criterion", "dacorogna", "--model", "dev3exp",
                     "--grid-lo", "-1", "--grid-hi", "1", "--grid-n", "4", "--dev-bound", "4")
    assert rc == EXIT_OK and "failed 0" in out


def test_emit_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "emit", "--curve", "poisson-hat", "--k", "0.25", "--khat", "0.16666666666666666", "-o", str(a))
    run(capsys, "emit", "--curve", "poisson-hat", "--k", "0.25", "--khat", "0.16666666666666666", "-o", str(b))
    assert a.read_bytes() == b.read_bytes()
    rc, out, _ = run(capsys, "emit", "--curve", "eos-pressure", "--range", "0.5,2", "--resolution", "3")
    assert rc == EXIT_OK
    assert out.splitlines()[0] == "J [dimensionless],pressure_eH [Pa],pressure_H [Pa]"
    assert len(out.splitlines()) == 4


def test_fit_from_file(capsys, tmp_path):
    from hencky.calibration import synthetic_shear

    d = synthetic_shear(0.39e6, 0.243, np.linspace(0, 3, 15))
    path = tmp_path / "rubber.tsv"
    path.write_text("# gamma\tsigma12 [MN/m2]\n" + "".join(f"{float(g)!r}\t{float(s) / 1e6!r}\n" for g, s in zip(d.abscissa, d.ordinate)))
    out_json = tmp_path / "fit.json"
    rc, out, _ = run(capsys, "fit", "--data", str(path), "--kind", "shear", "--units", "dimensionless,MN/m2",
                     "-o", str(out_json))
    assert rc == EXIT_OK
    res = json.loads(out_json.read_text())
    assert res["params"]["mu"] == pytest.approx(0.39e6, rel=1e-6)
    assert res["converged"]
    rc, _, err = run(capsys, "fit", "--data", str(path), "--kind", "shear", "--units", "dimensionless,stone")
    assert rc == EXIT_ERROR


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# material\nmu = 2\nkappa = 3\nk = 0.5\n")
    rc, out, _ = run(capsys, "energy", "--stretches", "1,1,1", "--config", str(cfg))
    assert _values(out, "W") == pytest.approx([2 / 0.5 + 3 / 0.5])
    rc, out, _ = run(capsys, "energy", "--stretches", "1,1,1", "--config", str(cfg), "--mu", "1")
    assert _values(out, "W") == pytest.approx([1 / 0.5 + 3 / 0.5])
    cfg.write_text("mu 2\n")
    assert run(capsys, "energy", "--stretches", "1,1,1", "--config", str(cfg))[0] == EXIT_ERROR


# -- dispatch coverage ---------------------------------------------------------------

PUBLIC_OPERATIONS = (
    "spectral_decompose matrix_log_spd matrix_exp_sym deviatoric dev_norm_sq_from_stretches "
    "geodesic_invariants polar_decompose lift_2d_to_3d energy_eH energy_H energy_eH_sharp energy_vol_exp "
    "energy_comparison as_principal_function kirchhoff_eH cauchy_eH stresses_H biot_becker "
    "simple_shear_sigma12 simple_shear_kinematics eos_pressure nominal_stress_uniaxial_1d vallee_check "
    "linear_cauchy solve_trace_equation invert_cauchy_eH pure_shear_strain uniaxial_tension "
    "nonlinear_poisson check_BE check_TE check_KS_2d check_dacorogna_3d check_zubov_incompressible "
    "check_buliga check_schur_convexity check_tsts_quadratic_form check_tsts_full_exponential "
    "tsts_bounded_distortion_feasibility check_coupled_exponential_tsts check_kstsm "
    "check_volumetric_convexity check_scalar_logsquare_convexity simple_shear_h scan_domain "
    "h_det_rank_one_check load_tsv fit_shear fit_eos emit_curve"
).split()

COVERAGE_RUNS = {
    "energy": [
        ["energy", "--F", "1,0.2,0,0,1,0,0,0,1.1"],
        ["energy", "--F", "1,0.2,0,0,1,0,0,0,1.1", "--model", "H"],
        ["energy", "--F", "1,0.2,0,0,1,0,0,0,1.1", "--model", "sharp"],
        ["energy", "--F", "1,0.2,0,1"],
        ["energy", "--J", "2", "--model", "vol_exp"],
        ["energy", "--stretches", "2,1,1"],
    ],
    "stress": [
        ["stress", "--logV", "0.1,0.2,0,0.1,0,0.3", "--check", "--linear"],
        ["stress", "--V", "1.1,0.1,0,1,0,1.2", "--model", "H"],
        ["stress", "--V", "1.1,0.1,0,1,0,1.2", "--model", "becker"],
    ],
    "invert": [["invert", "--sigma", "1,0.2,0,0.5,0,0.1"]],
    "uniaxial": [
        ["uniaxial", "--s", "0.5", "--E", "1", "--nu", "0.3"],
        ["uniaxial", "--s", "0.5"],
        ["uniaxial", "--lam", "2"],
    ],
    "shear": [["shear", "--gamma", "1"]],
    "pureshear": [["pureshear", "--s", "1"]],
    "eos": [["eos", "--J", "2"]],
    "poisson": [["poisson", "--s-over-E", "0.5"]],
    "criterion point": [
        ["criterion", "point", "--criterion", c, *extra]
        for c, extra in [
            ("ks2d", ["--stretches", "2,1", "--model", "dev2exp"]),
            ("dacorogna", ["--stretches", "2,1,1"]),
            ("zubov", ["--stretches", "2,0.5,1"]),
            ("buliga", ["--stretches", "2,1,1"]),
            ("te", ["--stretches", "2,1,1"]),
            ("be", ["--stretches", "2,1,1"]),
            ("schur", ["--samples", "3"]),
            ("tsts-form", ["--X", "0,1,0,0,0,0", "--H", "1,0,0,1,0,1", "--check"]),
            ("tsts-full", ["--samples", "10"]),
            ("coupled-tsts", ["--a-hat", "0.3", "--samples", "10"]),
            ("feasibility", []),
            ("kstsm", ["--samples", "5"]),
            ("volumetric", []),
            ("logsquare", []),
            ("hdet", []),
            ("shear-h", []),
        ]
    ],
    "criterion scan": [["criterion", "scan", "--criterion", "be", "--grid-n", "2"]],
    "counterexamples": [["counterexamples"]],
    "emit": [["emit", "--curve", "eos-pressure", "--resolution", "3"]],
}


def _called(argv, capsys):
    codes = set()

    def prof(frame, event, arg):
        if event == "call":
            codes.add(frame.f_code)

    sys.setprofile(prof)
    try:
        main(argv)
    finally:
        sys.setprofile(None)
    capsys.readouterr()
    return codes


def test_operations_listed_once():
    seen = {}
    for cmd, ops in OPERATIONS.items():
        for op in ops:
            assert op not in seen, f"{op.__name__} listed under {seen[op]} and {cmd}"
            seen[op] = cmd
    names = {op.__name__ for op in seen}
    assert set(PUBLIC_OPERATIONS) <= names, set(PUBLIC_OPERATIONS) - names


def test_operations_are_reached(capsys, tmp_path):
    from hencky.calibration import synthetic_eos, synthetic_shear

    sh = synthetic_shear(1e5, 0.3, np.linspace(0, 2, 8))
    eo = synthetic_eos(1e9, 2.0, np.linspace(0.8, 1.2, 8))
    (tmp_path / "s.tsv").write_text("".join(f"{float(g)!r}\t{float(s)!r}\n" for g, s in zip(sh.abscissa, sh.ordinate)))
    (tmp_path / "e.tsv").write_text("".join(f"{float(g)!r}\t{float(s)!r}\n" for g, s in zip(eo.abscissa, eo.ordinate)))
    runs = dict(COVERAGE_RUNS)
    runs["fit"] = [
        ["fit", "--data", str(tmp_path / "s.tsv"), "--kind", "shear", "--units", "dimensionless,Pa"],
        ["fit", "--data", str(tmp_path / "e.tsv"), "--kind", "eos", "--units", "dimensionless,Pa"],
    ]
    assert set(runs) == set(OPERATIONS)
    for cmd, argvs in runs.items():
        codes = set()
        for argv in argvs:
            codes |= _called(argv, capsys)
        for op in OPERATIONS[cmd]:
            assert op.__code__ in codes, f"{cmd} does not reach {op.__name__}"
