"""Command-line front end.

Exit codes: 0 success or pass, 1 a criterion failed, 2 usage error,
3 numeric or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import calibration, curves, energies, inversion, io, stress, tensor
from .config import RunConfig, load_config, parse_real, parse_vector
from .convexity import counterexamples, criteria, monotonicity, scalar, scan
from .convexity.report import FAIL, CriterionReport
from .errors import HenckyError, InvalidInputError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ERROR = 0, 1, 2, 3

CONFIG_FLAGS = ("mu", "kappa", "E", "nu", "k", "khat", "model", "dim", "grid_lo", "grid_hi",
                "grid_n", "dev_bound", "jitter", "seed", "output", "workers", "a", "a_hat", "m")


def _out(line: str = "") -> None:
    sys.stdout.write(line + "\n")


def _fmt(v) -> str:
    return io.fmt(v)


def _print_matrix(name: str, a) -> None:
    a = np.asarray(a, dtype=float)
    for i, row in enumerate(a):
        label = name if i == 0 else " " * len(name)
        _out(f"{label} [" + ", ".join(_fmt(v) for v in row) + "]")


def _square(vals: Sequence[float], what: str) -> np.ndarray:
    n = int(round(math.sqrt(len(vals))))
    if n * n != len(vals) or n not in (2, 3):
        raise InvalidInputError(f"{what} needs 4 or 9 entries (row-major), got {len(vals)}")
    return np.array(vals, dtype=float).reshape(n, n)


def _sym(vals: Sequence[float], what: str) -> np.ndarray:
    """Upper triangle row-major: 3 entries in 2D, 6 in 3D; full 4/9 also accepted."""
    if len(vals) in (3, 6):
        n = 2 if len(vals) == 3 else 3
        return tensor.SymTensor(n, tuple(vals)).matrix
    return tensor.SymTensor.from_matrix(_square(vals, what)).matrix


def _report(rep: CriterionReport) -> int:
    _out(f"criterion {rep.criterion}")
    if rep.log_scale:
        _out(f"log_scale {_fmt(rep.log_scale)}")
    for m in rep.margins:
        _out(f"  {m.name:22s} {_fmt(m.value):>26s}  tol {_fmt(m.tol)}  {m.status}")
    for key in sorted(rep.detail):
        v = rep.detail[key]
        if isinstance(v, (float, int, bool, str)) or v is None:
            _out(f"  {key} = {v if not isinstance(v, float) else _fmt(v)}")
    _out(f"verdict {rep.label}")
    return EXIT_FAIL if rep.verdict == FAIL else EXIT_OK


def _state(args, dim: int) -> tensor.PrincipalState:
    if args.log_stretches:
        x = parse_vector(args.log_stretches)
        p = tensor.PrincipalState.from_log(x)
    elif args.stretches:
        p = tensor.PrincipalState(tuple(parse_vector(args.stretches)))
    else:
        raise InvalidInputError("give --stretches or --log-stretches")
    if p.dim != dim:
        raise InvalidInputError(f"model is {dim}-dimensional, got {p.dim} stretches")
    return p


# ---------------------------------------------------------------------------
# subcommands


def _named_energy(spec, F) -> float:
    """The model's own entry point where one exists."""
    if spec.model == "eH":
        return energies.energy_eH(F, spec.params, spec.dim)
    if spec.model == "H":
        return energies.energy_H(F, spec.params, spec.dim)
    if spec.model == "eH_sharp":
        return energies.energy_eH_sharp(F, spec.params)
    return energies.energy_of(spec, F)


def cmd_energy(args, cfg: RunConfig) -> int:
    if args.F:
        F = _square(parse_vector(args.F), "--F")
        n = F.shape[0]
        if cfg.dim is None:
            cfg = replace(cfg, dim=n)
        spec = cfg.spec()
        W = _named_energy(spec, F)
        R, U = tensor.polar_decompose(F)
        p = tensor.principal_stretches(F)
        _out("stretches " + ", ".join(_fmt(v) for v in p.array))
        _print_matrix("U", U)
        _print_matrix("R", R)
        if n == 3:
            inv = tensor.geodesic_invariants(U)
            _out(f"K1 {_fmt(inv.K1)}\nK2 {_fmt(inv.K2)}\nK3 {_fmt(inv.K3)}")
        elif spec.model != "eH_sharp":
            U3 = tensor.lift_2d_to_3d(U)
            _out(f"W_lifted_3d {_fmt(energies.energy_of(replace(cfg, dim=3).spec(), U3))}")
    elif args.J is not None:
        spec = cfg.spec()
        if spec.model != "vol_exp":
            raise InvalidInputError("--J needs --model vol_exp")
        W = energies.energy_comparison(spec, parse_real(args.J))
    else:
        spec = cfg.spec()
        p = _state(args, spec.dim)
        _out(f"dev_sq {_fmt(tensor.dev_norm_sq_from_stretches(p))}")
        W = energies.energy_comparison(spec, np.diag(p.array))
    _out(f"W {_fmt(W)}")
    if spec.model in ("eH", "eH_sharp"):
        _out(f"W_reference {_fmt(energies.reference_energy(spec.params))}")
    return EXIT_OK


def cmd_stress(args, cfg: RunConfig) -> int:
    spec = cfg.spec()
    if args.logV:
        X = _sym(parse_vector(args.logV), "--logV")
    elif args.V:
        X = stress.log_strain(V=_sym(parse_vector(args.V), "--V"))
    else:
        raise InvalidInputError("give --logV or --V")
    if spec.model == "eH":
        st = stress.stresses_eH(X, spec.params)
        tau, sig = st.kirchhoff, st.cauchy
    elif spec.model == "H":
        st = stress.stresses_H(X, spec.params)
        tau, sig = st.kirchhoff, st.cauchy
    else:
        tau, sig = stress.kirchhoff_from_log(spec, X), stress.cauchy_from_log(spec, X)
    _print_matrix("tau", tau)
    _print_matrix("sigma", sig)
    if spec.model == "becker":
        _print_matrix("T_biot", stress.biot_becker(tensor.matrix_exp_sym(X), spec.params.mu, spec.params.kappa))
    if args.linear:
        _print_matrix("sigma_linear", stress.linear_cauchy(X, spec.params.mu, spec.params.kappa))
    _out(f"J {_fmt(math.exp(float(np.trace(X))))}")
    if args.check:
        fd = stress.energy_gradient_fd(spec, X)
        rel = float(np.linalg.norm(fd - tau) / max(np.linalg.norm(tau), 1e-300))
        _out(f"gradient_fd_rel_error {_fmt(rel)}")
        V = tensor.matrix_exp_sym(X)
        _out(f"vallee_residual {_fmt(stress.vallee_check(spec, V @ V))}")
    return EXIT_OK


def cmd_invert(args, cfg: RunConfig) -> int:
    S = _sym(parse_vector(args.sigma), "--sigma")
    X = inversion.invert_cauchy_eH(S, cfg.params)
    _print_matrix("logV", X)
    res = float(np.max(np.abs(stress.cauchy_eH(X, cfg.params) - S)))
    _out(f"residual {_fmt(res)}")
    return EXIT_OK


def cmd_uniaxial(args, cfg: RunConfig) -> int:
    if (args.s is None) == (args.lam is None):
        raise InvalidInputError("give exactly one of --s (3D Cauchy stress) or --lam (1D stretch)")
    if args.lam is not None:
        lam = parse_real(args.lam)
        _out(f"nominal {_fmt(stress.nominal_stress_uniaxial_1d(lam, cfg.params.mu, cfg.k))}")
        _out(f"slope {_fmt(stress.nominal_stress_slope_1d(lam, cfg.params.mu, cfg.k))}")
        return EXIT_OK
    s = parse_real(args.s)
    if cfg.E is not None:
        sol = inversion.uniaxial_enu(s, cfg.E, cfg.nu, cfg.k, cfg.khat)
    else:
        sol = inversion.uniaxial_tension(s, cfg.params)
    _out(f"a {_fmt(sol.a)}\nx {_fmt(sol.x)}\nnu_hat {_fmt(sol.nu_hat)}")
    _print_matrix("logV", sol.logV)
    return EXIT_OK


def cmd_shear(args, cfg: RunConfig) -> int:
    g = parse_real(args.gamma)
    kin = stress.simple_shear_kinematics(g)
    _print_matrix("logV", kin.logV)
    _out(f"lambda1 {_fmt(kin.lambda1)}")
    for model in stress.SHEAR_MODELS if args.shear_model == "all" else (args.shear_model,):
        _out(f"sigma12[{model}] {_fmt(stress.simple_shear_sigma12(g, cfg.params, model))}")
    return EXIT_OK


def cmd_pureshear(args, cfg: RunConfig) -> int:
    gamma = inversion.pure_shear_strain(parse_real(args.s), cfg.params)
    _out(f"gamma {_fmt(gamma)}")
    _print_matrix("V", inversion.pure_shear_stretch(gamma))
    return EXIT_OK


def cmd_eos(args, cfg: RunConfig) -> int:
    J = parse_real(args.J)
    model = "H" if cfg.model in ("H", "quadratic") else "eH"
    _out(f"pressure {_fmt(stress.eos_pressure(J, cfg.params, model))}")
    _out(f"slope {_fmt(stress.eos_pressure_slope(J, cfg.params, model))}")
    return EXIT_OK


def cmd_poisson(args, cfg: RunConfig) -> int:
    nu = cfg.nu if cfg.nu is not None else parse_real(args.poisson_nu)
    r = parse_real(args.s_over_E)
    nh = inversion.nonlinear_poisson(r, nu, cfg.k, cfg.khat)
    _out(f"nu_hat {_fmt(nh)}")
    if r != 0.0:
        x = inversion.uniaxial_enu(r, 1.0, nu, cfg.k, cfg.khat).x
        _out(f"implicit_residual {_fmt(inversion.poisson_implicit_residual(nh, x, nu, cfg.k, cfg.khat))}")
    return EXIT_OK


# criterion point: the four rank-one criteria plus the inequality lab

def _pointwise(name):
    def run(args, cfg):
        spec = cfg.spec()
        return _report(scan.CRITERIA[name](_state(args, spec.dim), spec))
    return run


def _crit_tsts_form(args, cfg):
    X = _sym(parse_vector(args.X), "--X")
    H = _sym(parse_vector(args.H), "--H")
    v = monotonicity.check_tsts_quadratic_form(cfg.spec(), X, H)
    _out(f"form {_fmt(v)}")
    if args.check:
        _out(f"form_fd {_fmt(monotonicity.tsts_form_fd(cfg.spec(), X, H))}")
    _out(f"verdict {'fail' if v < 0 else 'pass'}")
    return EXIT_FAIL if v < 0 else EXIT_OK


def _crit_tsts_full(args, cfg):
    return _report(monotonicity.check_tsts_full_exponential(cfg.k, args.samples, cfg.seed))


def _crit_coupled(args, cfg):
    a = 1.0 if cfg.a is None else cfg.a
    if cfg.a_hat is None:
        raise InvalidInputError("coupled-tsts needs --a-hat")
    return _report(monotonicity.check_coupled_exponential_tsts(cfg.a_hat, args.samples, cfg.seed, a))


def _crit_feasibility(args, cfg):
    s = parse_real(args.sigma_tilde_y)
    iv = monotonicity.tsts_bounded_distortion_feasibility(cfg.params, s, args.three_parameter)
    if iv is None:
        _out("interval none")
        return EXIT_FAIL
    _out(f"interval [{_fmt(iv.lo)}, {_fmt(iv.hi)}]")
    ok = cfg.k in iv
    _out(f"k {_fmt(cfg.k)} {'inside' if ok else 'outside'}")
    return EXIT_OK if ok else EXIT_FAIL


def _crit_kstsm(args, cfg):
    return _report(monotonicity.check_kstsm(cfg.spec(), args.samples, cfg.seed))


def _crit_volumetric(args, cfg):
    return _report(scalar.check_volumetric_convexity(cfg.khat, cfg.m))


XI = {"exp": lambda c: scalar.xi_exp(c.khat), "identity": lambda c: scalar.xi_identity(),
      "const": lambda c: scalar.xi_const()}
HFUN = {"exp": lambda c: scalar.h_exp_logsq(c.khat), "logsq": lambda c: scalar.h_logsq(),
        "affine": lambda c: scalar.h_affine()}


def _crit_logsquare(args, cfg):
    v = scalar.check_scalar_logsquare_convexity(XI[args.xi](cfg))
    _out(f"below_one {v.below_one}\nabove_one {v.above_one}\nconsistent {v.agrees}")
    return EXIT_OK if v.convex_below_one and v.convex_above_one else EXIT_FAIL


def _crit_hdet(args, cfg):
    return _report(scalar.h_det_rank_one_check(HFUN[args.h](cfg)))


def _crit_schur(args, cfg):
    spec = cfg.spec()
    g = energies.as_principal_function(spec)
    rng = np.random.default_rng(cfg.seed)
    pts = rng.uniform(cfg.grid_lo, cfg.grid_hi, size=(args.samples, spec.dim))
    return _report(criteria.check_schur_convexity(g.value_log, pts))


def _crit_shear_h(args, cfg):
    w = scalar.simple_shear_nonconvexity_witness()
    _out(f"t1 {_fmt(w.t1)}\nt2 {_fmt(w.t2)}\nmid {_fmt(w.mid)}\ngap {_fmt(w.gap)}")
    _out(f"h(mid) {_fmt(scalar.simple_shear_h(w.mid))}")
    _out(f"verdict {'fail' if w.gap > 0 else 'pass'}")
    return EXIT_FAIL if w.gap > 0 else EXIT_OK


POINT_CRITERIA: Dict[str, Callable] = {
    "ks2d": _pointwise("KS2D"),
    "dacorogna": _pointwise("Dacorogna3D"),
    "zubov": _pointwise("ZubovIncompressible"),
    "buliga": _pointwise("Buliga"),
    "te": _pointwise("SC/TE"),
    "sc": _pointwise("SC/TE"),
    "be": _pointwise("BE"),
    "tsts-form": _crit_tsts_form,
    "tsts-full": _crit_tsts_full,
    "coupled-tsts": _crit_coupled,
    "feasibility": _crit_feasibility,
    "kstsm": _crit_kstsm,
    "volumetric": _crit_volumetric,
    "logsquare": _crit_logsquare,
    "hdet": _crit_hdet,
    "schur": _crit_schur,
    "shear-h": _crit_shear_h,
}


def cmd_criterion_point(args, cfg: RunConfig) -> int:
    key = args.criterion.lower()
    if key not in POINT_CRITERIA:
        key = {v.lower(): k for k, v in scan.ALIASES.items()}.get(key, key)
    if key not in POINT_CRITERIA:
        raise InvalidInputError(f"unknown criterion {args.criterion!r}; choose from {sorted(POINT_CRITERIA)}")
    return POINT_CRITERIA[key](args, cfg)


def cmd_criterion_scan(args, cfg: RunConfig) -> int:
    spec = cfg.spec()
    name = scan.criterion_name(args.criterion)
    grid = cfg.grid(incompressible=name == "ZubovIncompressible")
    res = scan.scan_domain(name, spec, grid, cfg.workers)
    out = cfg.output
    if out:
        res.to_csv(out)
    if args.summary:
        res.to_json(args.summary)
    s = res.summary
    _out(f"criterion {name}\nmodel {spec.model}\npoints {s.count}")
    _out(f"passed {s.passed}\nboundary {s.boundary}\nfailed {s.failed}")
    _out(f"pass_fraction {_fmt(s.pass_fraction)}")
    _out(f"dev_bound {_fmt(s.dev_bound)}{'' if s.bound_is_limit else ' (grid extent)'}")
    return EXIT_FAIL if s.failed else EXIT_OK


def cmd_counterexamples(args, cfg: RunConfig) -> int:
    ok = True
    for case in counterexamples.run_counterexamples():
        _out(f"{case.name}: verdict {case.verdict}, {'reproduced' if case.reproduced else 'NOT reproduced'}")
        for label, (c, r) in case.checks.items():
            _out(f"  {label:14s} computed {_fmt(c)}  reference {_fmt(r)}")
        ok = ok and case.reproduced
    return EXIT_OK if ok else EXIT_FAIL


def cmd_fit(args, cfg: RunConfig) -> int:
    data = io.load_tsv(args.data, args.kind, args.units)
    if args.kind == "shear":
        res = calibration.fit_shear(data)
    elif args.kind == "eos":
        res = calibration.fit_eos(data)
    else:
        raise InvalidInputError("fit supports kind shear or eos")
    text = res.to_json()
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text + "\n")
    _out(text)
    return EXIT_OK


def cmd_emit(args, cfg: RunConfig) -> int:
    rng = tuple(parse_vector(args.range)) if args.range else None
    if rng is not None and len(rng) != 2:
        raise InvalidInputError("--range needs lo,hi")
    nus = tuple(parse_vector(args.nus)) if args.nus else curves.DEFAULT_NUS
    c = curves.emit_curve(args.curve, cfg.params, rng, args.resolution, nus)
    if cfg.output:
        c.write(cfg.output)
    else:
        c.write(sys.stdout)
    return EXIT_OK


# Library operations by the subcommand that reaches them; each appears once.
OPERATIONS: Dict[str, tuple] = {
    "energy": (energies.energy_of, energies.energy_eH, energies.energy_H, energies.energy_eH_sharp,
               energies.energy_vol_exp, energies.energy_comparison, energies.reference_energy,
               energies.as_principal_function, tensor.polar_decompose, tensor.principal_stretches,
               tensor.spectral_decompose, tensor.geodesic_invariants, tensor.lift_2d_to_3d,
               tensor.dev_norm_sq_from_stretches),
    "stress": (stress.stresses_eH, stress.stresses_H, stress.kirchhoff_eH, stress.cauchy_eH,
               stress.kirchhoff_from_log, stress.cauchy_from_log, stress.biot_becker, stress.linear_cauchy,
               stress.log_strain, stress.energy_gradient_fd, stress.vallee_check,
               tensor.matrix_log_spd, tensor.matrix_exp_sym, tensor.deviatoric),
    "invert": (inversion.invert_cauchy_eH, inversion.solve_trace_equation),
    "uniaxial": (inversion.uniaxial_enu, inversion.uniaxial_tension,
                 stress.nominal_stress_uniaxial_1d, stress.nominal_stress_slope_1d),
    "shear": (stress.simple_shear_kinematics, stress.simple_shear_sigma12),
    "pureshear": (inversion.pure_shear_strain, inversion.pure_shear_stretch),
    "eos": (stress.eos_pressure, stress.eos_pressure_slope),
    "poisson": (inversion.nonlinear_poisson, inversion.poisson_implicit_residual),
    "criterion point": (criteria.check_KS_2d, criteria.check_dacorogna_3d, criteria.check_zubov_incompressible,
                        criteria.check_buliga, criteria.check_TE, criteria.check_BE,
                        criteria.check_schur_convexity,
                        monotonicity.check_tsts_quadratic_form, monotonicity.tsts_form_fd,
                        monotonicity.check_tsts_full_exponential,
                        monotonicity.check_coupled_exponential_tsts,
                        monotonicity.tsts_bounded_distortion_feasibility, monotonicity.check_kstsm,
                        scalar.check_volumetric_convexity, scalar.check_scalar_logsquare_convexity,
                        scalar.h_det_rank_one_check, scalar.simple_shear_h,
                        scalar.simple_shear_nonconvexity_witness),
    "criterion scan": (scan.scan_domain,),
    "counterexamples": (counterexamples.run_counterexamples,),
    "fit": (io.load_tsv, calibration.fit_shear, calibration.fit_eos),
    "emit": (curves.emit_curve,),
}


# ---------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("configuration (flags override --config)")
    g.add_argument("--config", help="key = value file")
    for name in ("mu", "kappa", "E", "nu", "k", "khat", "a", "dev_bound", "jitter"):
        g.add_argument("--" + name.replace("_", "-"), dest=name, metavar="X")
    g.add_argument("--a-hat", dest="a_hat", metavar="X")
    g.add_argument("--model")
    g.add_argument("--dim", type=int)
    g.add_argument("--m", type=int, help="volumetric exponent")
    g.add_argument("--grid-lo", dest="grid_lo", metavar="X")
    g.add_argument("--grid-hi", dest="grid_hi", metavar="X")
    g.add_argument("--grid-n", dest="grid_n", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--output", "-o")
    g.add_argument("--workers", type=int)


def _stretch_args(p):
    p.add_argument("--stretches", help="comma list; e4, e-1 mean e^4, e^-1")
    p.add_argument("--log-stretches", dest="log_stretches")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hencky", description="Exponentiated Hencky energies and checks.")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, fn, help):
        p = sub.add_parser(name, help=help)
        _common(p)
        p.set_defaults(func=fn)
        return p

    p = add("energy", cmd_energy, "energy at F or at principal stretches")
    p.add_argument("--F", help="deformation gradient, row-major")
    p.add_argument("--J", help="det F for --model vol_exp")
    _stretch_args(p)
    p = add("stress", cmd_stress, "Kirchhoff and Cauchy stress from log V")
    p.add_argument("--logV", help="upper triangle of log V")
    p.add_argument("--V", help="upper triangle of V")
    p.add_argument("--check", action="store_true", help="also report FD and Vallee residuals")
    p.add_argument("--linear", action="store_true", help="also the linear-elastic stress with eps = log V")
    p = add("invert", cmd_invert, "log V from a Cauchy stress")
    p.add_argument("--sigma", required=True, help="upper triangle of sigma")
    p = add("uniaxial", cmd_uniaxial, "uniaxial tension by Cauchy stress s, or 1D nominal stress")
    p.add_argument("--s")
    p.add_argument("--lam", help="1D stretch for the nominal stress")
    p = add("shear", cmd_shear, "simple shear response")
    p.add_argument("--gamma", required=True)
    p.add_argument("--shear-model", dest="shear_model", default="all",
                   choices=("all",) + stress.SHEAR_MODELS)
    p = add("pureshear", cmd_pureshear, "pure shear amount from shear stress s")
    p.add_argument("--s", required=True)
    p = add("eos", cmd_eos, "pressure at det F = J")
    p.add_argument("--J", required=True)
    p = add("poisson", cmd_poisson, "nonlinear Poisson ratio")
    p.add_argument("--s-over-E", dest="s_over_E", required=True)
    p.add_argument("--poisson-nu", dest="poisson_nu", default="0.3",
                   help="linear Poisson ratio when --nu is not given")

    crit = sub.add_parser("criterion", help="pointwise checks and domain scans")
    csub = crit.add_subparsers(dest="mode", metavar="MODE")
    csub.required = True
    p = csub.add_parser("point", help="one criterion at one state")
    _common(p)
    p.set_defaults(func=cmd_criterion_point)
    p.add_argument("--criterion", required=True, help=", ".join(POINT_CRITERIA))
    _stretch_args(p)
    p.add_argument("--X", help="log V, upper triangle (tsts-form)")
    p.add_argument("--H", help="direction, upper triangle (tsts-form)")
    p.add_argument("--check", action="store_true", help="add a finite-difference cross-check")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--sigma-tilde-y", dest="sigma_tilde_y", default="0.1")
    p.add_argument("--three-parameter", dest="three_parameter", action="store_true")
    p.add_argument("--xi", choices=sorted(XI), default="exp")
    p.add_argument("--h", choices=sorted(HFUN), default="exp")
    p = csub.add_parser("scan", help="criterion over a log-stretch grid")
    _common(p)
    p.set_defaults(func=cmd_criterion_scan)
    p.add_argument("--criterion", required=True)
    p.add_argument("--summary", help="JSON summary path")

    add("counterexamples", cmd_counterexamples, "rerun the five known counterexamples")
    p = add("fit", cmd_fit, "calibrate against tab-separated data")
    p.add_argument("--data", required=True)
    p.add_argument("--kind", required=True, choices=("shear", "eos"))
    p.add_argument("--units", required=True, help="abscissa,ordinate e.g. dimensionless,MN/m2")
    p = add("emit", cmd_emit, "plot-ready CSV curve")
    p.add_argument("--curve", required=True, choices=curves.CURVES)
    p.add_argument("--range")
    p.add_argument("--resolution", type=int, default=101)
    p.add_argument("--nus", help="Poisson ratios for poisson-hat")
    return ap


def _fix_negative_values(argv: List[str]) -> List[str]:
    """Join '--flag -e2,1' into '--flag=-e2,1' so argparse does not read a flag."""
    out: List[str] = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if (a.startswith("--") and "=" not in a and i + 1 < len(argv)
                and argv[i + 1].startswith("-") and len(argv[i + 1]) > 1
                and (argv[i + 1][1].isdigit() or argv[i + 1][1] in "eE.")):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_fix_negative_values(argv))
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        overrides = {k: getattr(args, k, None) for k in CONFIG_FLAGS}
        cfg = load_config(args.config, **overrides)
        return args.func(args, cfg)
    except (HenckyError, ValueError, ArithmeticError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
