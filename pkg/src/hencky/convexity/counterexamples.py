"""The five known counterexamples, recomputed against their closed forms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List

import numpy as np

from ..energies import EnergySpec, MaterialParams, dev_exp, log_full_exp
from ..tensor import PrincipalState
from .criteria import buliga_form, buliga_matrices, check_buliga, check_dacorogna_3d, check_zubov_incompressible, as_g
from .monotonicity import check_tsts_quadratic_form
from .report import FAIL, PointDerivs
from .scalar import simple_shear_h, simple_shear_nonconvexity_witness

REL = 1e-10
E = math.e


@dataclass
class CaseResult:
    name: str
    verdict: str
    checks: Dict[str, tuple] = field(default_factory=dict)  # label -> (computed, reference)

    @property
    def matches(self) -> bool:
        return all(abs(c - r) <= REL * abs(r) for c, r in self.checks.values())

    @property
    def reproduced(self) -> bool:
        return self.verdict == FAIL and self.matches


def simple_shear_case() -> CaseResult:
    w = simple_shear_nonconvexity_witness()
    ref = simple_shear_h(w.mid) - 0.5 * (simple_shear_h(w.t1) + simple_shear_h(w.t2))
    return CaseResult("simple-shear h", FAIL if w.gap > 0 else "pass", {"gap": (w.gap, ref)})


def buliga_case() -> CaseResult:
    p = PrincipalState.from_log([2.0, 11.0])
    a = np.array([-(E**15), E**22])
    spec = log_full_exp(1.0, 2)
    rep = check_buliga(p, spec, witnesses=[a])
    H, G, _, _ = buliga_matrices(PointDerivs.at(as_g(spec), p))
    # the form at the unnormalized a, divided by 2 e^{log^2 l1 + log^2 l2}
    val = 0.5 * buliga_form(H, G, a) * math.exp(rep.log_scale - 125.0)
    ref = (
        7 * E**26
        + 232 * E**22
        - 88 * E**24
        + (4 * E**9 - 22 * E**-9) * E**33 / (E**18 - 1)
        + 18 * E**33 / (E**18 - 1)
    )
    return CaseResult("Buliga (e^2, e^11)", rep.verdict, {"form/2e^125": (val, ref)})


def dacorogna_case(k: float = 0.25) -> CaseResult:
    p = PrincipalState.from_log([11.0, 7.0, -1.0])
    rep = check_dacorogna_3d(p, dev_exp(k))
    lam = p.array
    c = k / 3.0
    checks = {
        "SC1": (rep.margin("SC1").value * lam[0] ** 2 / (2 * c), 2 * (256 * c - 7)),
        "g3": (
            rep.margin("S12[+-+]").value * lam[0] * lam[1] / (2 * c),
            -128 * c + 12 / (1 + E**4) + 5 + 2 * math.sqrt(max((16 * c - 1) * (256 * c - 7), 0.0)),
        ),
    }
    if 16 * c != 1:
        checks["SC2"] = (rep.margin("SC2").value * lam[1] ** 2 / (2 * c), 2 * (16 * c - 1))
    return CaseResult(f"Dacorogna (e^11, e^7, e^-1), k={k}", rep.verdict, checks)


def zubov_case() -> CaseResult:
    p = PrincipalState.from_log([4.0, -4.0, 0.0])
    rep = check_zubov_incompressible(p, dev_exp(1.0))
    f = math.exp(rep.log_scale)
    b, dl = rep.detail["beta"] * f, rep.detail["delta"] * f
    checks = {
        "beta1": (b[0], 172 * E**24 / 3),
        "beta2": (b[1], 220 * E**40 / 3),
        "beta3": (b[2], 4 * E**32 / 3),
        "delta1": (dl[0], 4 * E**32 * (19 + 15 * E**4) / (1 + E**4)),
        "delta2": (dl[1], 4 * E**32 * (19 + 15 * E**4) / (1 + E**4)),
        "gamma1-": (rep.detail["gamma_minus"][0] * f, (2 / 3) * (1 - 12 / (1 + E**-4)) * E**36),
        "eps3": (rep.detail["epsilon"][2] * f, 2 * E**32 * (31 + 8 * E**4 - 31 * E**8) / (E**8 - 1)),
        "eps3+sqrt": (rep.margin("eps3+sqrt").value * f, -2 * E**32 * (7 - 16 * E**4 + E**8) / (E**8 - 1)),
    }
    return CaseResult("Zubov (e^4, e^-4, 1)", rep.verdict, checks)


def tsts_case(t: float = 3.0, q: float = 100.0) -> CaseResult:
    p = MaterialParams(1.0, 1.0, 1.0, 1.0)
    X = np.array([[0.0, t, 0.0], [t, 0.0, 0.0], [0.0, 0.0, 0.0]])
    H = np.array([[q / 3, 1.0, 0.0], [1.0, q / 3, 0.0], [0.0, 0.0, q / 3]])
    v = check_tsts_quadratic_form(EnergySpec("eH", p), X, H)
    # ||dev H_1||^2 = 2 enters the braces once
    ref = 2 * math.exp(2 * t * t) * (8 * t * t - 2 * q * t + 2) + q * q
    return CaseResult("TSTS X1/H1", FAIL if v < 0 else "pass", {"form": (v, ref)})


CASES: List[Callable[[], CaseResult]] = [simple_shear_case, buliga_case, dacorogna_case, zubov_case, tsts_case]


def run_counterexamples() -> List[CaseResult]:
    return [case() for case in CASES]
