"""Reproduction reports: every cohomological number for J_X, and the lab suites.

Each entry records the computed value, the value it is checked against, the
tolerance, and a pass/fail status.  Rationals compare exactly; floats
compare by absolute difference.  Rendering is deterministic: entries keep
their construction order and floats are printed at 12 significant digits.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Callable

import numpy as np

from .birational import (
    adjunction_failures,
    btc_check,
    btc_classify,
    defect_cycle,
    make_jx,
    negativity_witness,
    nic_check,
    nic_space,
    pullback11,
    pullback22,
    pushforward22,
    weak_btc_obstruction,
)
from .cohomology import (
    DivisorClass,
    basis_divisors,
    cone_probe,
    eta0,
    hyperplane,
    line_class,
    triple,
    wedge11,
)
from .config import LabSettings
from .exact import format_rational
from .lab.envelope import envelope_violation, minimal_pair_envelope
from .lab.grids import GridFunction, RadialProfile
from .lab.lelong import least_negative_example, lelong_estimate, max_regularize
from .lab.mass import default_epsilons, model_family, monotone_convergence_report
from .lab.oracles import envelope_lp, model_mass_oracle
from .lab.probe import jstar_singularity_probe

REPORT_KINDS = ("theorem2", "lab")


@dataclass
class ReportEntry:
    id: str
    inputs: dict
    value: Any
    oracle: Any
    provenance: str
    status: str
    tolerance: float | None = None


@dataclass
class ReportDocument:
    kind: str
    entries: list[ReportEntry] = field(default_factory=list)

    def _add(self, entry: ReportEntry) -> None:
        if any(e.id == entry.id for e in self.entries):
            raise ValueError(f"duplicate report entry {entry.id!r}")
        self.entries.append(entry)

    def exact(self, id: str, value, expected, inputs: dict | None = None, provenance: str = "computed") -> None:
        self._add(ReportEntry(id, inputs or {}, value, expected, provenance,
                              "pass" if value == expected else "fail"))

    def close(self, id: str, value: float, expected: float, tol: float, inputs: dict | None = None,
              provenance: str = "oracle") -> None:
        ok = bool(np.isfinite(value)) and abs(value - expected) <= tol
        self._add(ReportEntry(id, inputs or {}, float(value), float(expected), provenance,
                              "pass" if ok else "fail", float(tol)))

    def predicate(self, id: str, value, description: str, ok: bool, inputs: dict | None = None) -> None:
        self._add(ReportEntry(id, inputs or {}, value, description, "computed", "pass" if ok else "fail"))

    def failed(self, id: str, error: Exception) -> None:
        self._add(ReportEntry(id, {}, f"error: {error}", None, "computed", "fail"))

    @property
    def passed(self) -> bool:
        return all(e.status == "pass" for e in self.entries)

    def to_json(self) -> str:
        body = {
            "format": 1,
            "kind": self.kind,
            "summary": {
                "entries": len(self.entries),
                "passed": sum(e.status == "pass" for e in self.entries),
                "failed": sum(e.status != "pass" for e in self.entries),
            },
            "entries": [
                {k: _render(getattr(e, k)) for k in ("id", "inputs", "value", "oracle", "provenance", "status",
                                                      "tolerance")}
                for e in self.entries
            ],
        }
        return json.dumps(body, indent=2) + "\n"

    def summary_lines(self) -> list[str]:
        return [f"{e.status.upper():4}  {e.id}  value={_render(e.value)}  oracle={_render(e.oracle)}"
                for e in self.entries]


def _render(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x):.12g}")
    if isinstance(x, DivisorClass) or hasattr(x, "vector"):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _render(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_render(v) for v in x]
    return str(x)


def _guard(doc: ReportDocument, id: str, fn: Callable[[], None]) -> None:
    """Run one block of entries; an exception becomes a failing entry instead of aborting the report."""
    try:
        fn()
    except Exception as exc:  # noqa: BLE001
        doc.failed(id, exc)


# --- intersection numbers of J_X ----------------------------------------------------


def _random_class(rng: random.Random, n: int = 4, size: int = 3) -> DivisorClass:
    return DivisorClass.from_vector([Fraction(rng.randint(-size, size), rng.randint(1, 3)) for _ in range(n + 1)])


def intersection_report() -> ReportDocument:
    doc = ReportDocument("theorem2")
    f = make_jx()
    H = hyperplane(4)
    eta = eta0(4)

    def involution():
        doc.exact("involution", f.is_involution(), True)
        doc.exact("adjunction_failures", len(adjunction_failures(f)), 0, {"basis_pairs": 25})

    def part1():
        value, pairings = negativity_witness(f, H)
        doc.exact("triple_JH", value, Fraction(-5), {"kappa": str(H)})
        for name, v in pairings:
            doc.exact(f"pairing_JH_{name}", v, Fraction(-1), {"kappa": str(H), "curve": name})
        kappa = H - DivisorClass(0, (Fraction(1, 10),) * 4)
        doc.exact("kappa_small_is_kahler_on_test_curves", cone_probe(kappa, strict=True), True,
                  {"kappa": str(kappa)})
        value, pairings = negativity_witness(f, kappa)
        doc.predicate("triple_J_kappa_small", value, "< 0", value < 0, {"kappa": str(kappa)})
        doc.predicate("pairings_J_kappa_small", [v for _, v in pairings], "all < 0",
                      all(v < 0 for _, v in pairings), {"kappa": str(kappa)})

    def pushforward():
        img = pushforward22(f, line_class(0, 1, 4))
        doc.exact("push_C01", str(img), str(-line_class(2, 3, 4)), {"curve": "C01"})
        img = pullback22(f, line_class(0, 1, 4))
        doc.exact("pull_C01", str(img), str(-line_class(2, 3, 4)), {"curve": "C01"})

    def part2():
        basis = nic_space(f)
        doc.exact("nic_dim", len(basis), 1)
        doc.exact("nic_basis", [str(b) for b in basis], [str(eta)])
        doc.exact("eta0_nef", cone_probe(eta), True, {"class": str(eta)})
        doc.exact("eta0_fixed", str(pullback11(f, eta)), str(eta))

    def part3():
        comps = btc_classify(f)
        dims = [c.dimension for c in comps]
        doc.predicate("btc_min_dimension", min(dims), ">= 4", min(dims) >= 4)
        doc.exact("btc_max_dimension", max(dims), 6)
        doc.exact("btc_components", len(comps), 16)
        rng = random.Random(2024)
        ok = 0
        for _ in range(20):
            a2, b2, a3, b3 = (Fraction(rng.randint(0, 9), rng.randint(1, 4)) for _ in range(4))
            x2 = eta * a2 + DivisorClass(1, (0, 0, -1, -1)) * b2
            x3 = eta * a3 + DivisorClass(1, (0, -1, 0, -1)) * b3
            ok += btc_check(f, x2, x3)
        doc.exact("nef_pair_family_btc", ok, 20, {"draws": 20, "seed": 2024})
        bad = 0
        for x, y in product(basis_divisors(4), repeat=2):
            lhs = wedge11(pullback11(f, x), pullback11(f, y))
            rhs = pullback22(f, wedge11(x, y)) + defect_cycle(f, x, y).total_class()
            bad += lhs != rhs
        doc.exact("defect_identity_failures", bad, 0, {"basis_pairs": 25})

    def part4():
        rng = random.Random(7)
        samples = [eta, H, *basis_divisors(4)] + [_random_class(rng) for _ in range(40)]
        samples += [eta * Fraction(rng.randint(1, 5), rng.randint(1, 5)) for _ in range(5)]
        mismatches = sum(
            (not weak_btc_obstruction(f, a, a, a)) != nic_check(f, a) for a in samples
        )
        doc.exact("weak_btc_diagonal_iff_nic", mismatches, 0, {"samples": len(samples), "seed": 7})
        obstructed = [name for name, _ in weak_btc_obstruction(f, H, H, H)]
        doc.exact("weak_btc_obstruction_HHH", len(obstructed), 6)
        doc.exact("weak_btc_obstruction_eta_H_H", len(weak_btc_obstruction(f, eta, H, H)), 0)

    for name, block in (("involution", involution), ("part1", part1), ("pushforward", pushforward),
                        ("part2", part2), ("part3", part3), ("part4", part4)):
        _guard(doc, f"{name}_error", block)
    # cross-check the triple product against direct expansion of (3H - 2 sum E)^3
    jh = pullback11(f, H)
    doc.exact("triple_JH_direct", triple(jh, jh, jh), Fraction(27 - 4 * 8), provenance="oracle")
    return doc


# --- lab ----------------------------------------------------------------------------


def _envelope_cases(nodes: int) -> list[tuple[str, RadialProfile]]:
    t = np.linspace(-6.0, 0.0, nodes)
    rng = np.random.default_rng(11)
    cases = [
        ("zero", np.zeros_like(t)),
        ("minus_log_r", -t),
        ("two_sided", np.maximum(t, -2.0) - np.maximum(2 * t, -3.0)),
    ]
    for k in range(2):
        bumps = np.cumsum(np.cumsum(rng.random(nodes))) * 0.01
        cases.append((f"random{k}", bumps - np.maximum((1.0 + k) * t, -4.0)))
    return [(name, RadialProfile(t, v)) for name, v in cases]


def lab_report(settings: LabSettings | None = None) -> ReportDocument:
    s = settings or LabSettings()
    doc = ReportDocument("lab")
    R = s.radius
    eps = default_epsilons(s.n_min, s.n_max, s.eps_base)

    def masses_1d():
        fam = model_family(eps, dims=1, extent=s.extent, resolution=s.resolution_1d)
        rep = monotone_convergence_report(fam, R, eps, oracle=lambda n, e: model_mass_oracle(e, R, 1))
        for e in rep.entries:
            doc.close(f"mass_eps_n{e['n'] + s.n_min - 1}_R{R:g}", e["mass"], e["oracle"], s.mass_tol * e["oracle"],
                      {"epsilon": e["epsilon"], "radius": R, "dims": 1})
        doc.exact("mass_1d_monotone", rep.is_monotone(), True)

    def masses_2d():
        fam = model_family(eps, dims=2, extent=s.extent, resolution=s.resolution_2d)
        rep = monotone_convergence_report(fam, R, eps, oracle=lambda n, e: model_mass_oracle(e, R, 2))
        for e in rep.entries:
            doc.close(f"mass2d_eps_n{e['n'] + s.n_min - 1}_R{R:g}", e["mass"], e["oracle"], s.mass_2d_tol,
                      {"epsilon": e["epsilon"], "radius": R, "dims": 2})
        doc.exact("mass_2d_monotone", rep.is_monotone(slack=0.02), True)

    def lelong():
        for c in (0.5, 1.0, 3.0):
            prof = RadialProfile.from_function(lambda t, c=c: c * t)
            doc.close(f"lelong_radial_c{c:g}", lelong_estimate(prof), c, s.lelong_tol * c, {"c": c})
            grid = GridFunction.from_function(lambda x, y, c=c: c * np.log(np.hypot(x, y)), 1, s.extent,
                                              s.resolution_1d + 1)
            doc.close(f"lelong_grid_c{c:g}", lelong_estimate(grid), c, s.lelong_tol * c, {"c": c})
        grid2 = GridFunction.from_function(lambda x, y: 0.5 * np.log(x**2 + y**2), 2, s.extent, s.resolution_2d)
        doc.close("lelong_grid2d_log_norm", lelong_estimate(grid2), 1.0, s.lelong_tol)
        smooth = GridFunction.from_function(lambda x, y: x**2 - 0.5 * y + np.cos(x * y), 1, s.extent,
                                            s.resolution_1d + 1)
        doc.close("lelong_grid_smooth", lelong_estimate(smooth), 0.0, s.regularized_lelong_max)
        log_r = RadialProfile.from_function(lambda t: t, psh=True)
        for n in (2, 5):
            v = lelong_estimate(max_regularize(log_r, n))
            doc.predicate(f"lelong_max_regularize_n{n}", v, f"<= {s.regularized_lelong_max:g}",
                          v <= s.regularized_lelong_max, {"n": n})

    def envelopes():
        monotone_ok = True
        for name, phi in _envelope_cases(s.envelope_nodes):
            previous = None
            for n_omega in (0.0, 0.5, 2.0):
                env = minimal_pair_envelope(phi, n_omega)
                err = float(np.max(np.abs(env.values - envelope_lp(phi, n_omega))))
                doc.close(f"envelope_{name}_n{n_omega:g}", err, 0.0, s.envelope_tol,
                          {"nodes": s.envelope_nodes, "n_omega": n_omega})
                doc.predicate(f"envelope_{name}_n{n_omega:g}_feasible", envelope_violation(env, phi, n_omega),
                              "<= 1e-9", envelope_violation(env, phi, n_omega) <= 1e-9)
                if previous is not None and np.any(env.values < previous - 1e-9):
                    monotone_ok = False
                previous = env.values
        doc.exact("envelope_monotone_in_n", monotone_ok, True)

    def probe():
        slope = jstar_singularity_probe(lambda w: abs(w[0] + w[1]) ** 2, (1, 2))
        doc.close("probe_mixed_exponent", slope, -4.0, s.probe_tol, {"u": "|w1 + w2|^2", "pair": [1, 2]})
        slope = jstar_singularity_probe(lambda w: (w[1] * np.conj(w[2])).real, (2, 3))
        doc.close("probe_mixed_exponent_re", slope, -4.0, s.probe_tol, {"u": "Re(w2 conj w3)", "pair": [2, 3]})

    def least_negative():
        theta = np.linspace(0, 2 * np.pi, 360, endpoint=False)
        doc.close("least_negative_line_sin", least_negative_example("line", np.sin(theta)), 1.0, 1e-4)
        doc.close("least_negative_exceptional_const", least_negative_example("exceptional", np.full(8, 0.75)),
                  -0.75, 0.0)

    for name, block in (("masses_1d", masses_1d), ("masses_2d", masses_2d), ("lelong", lelong),
                        ("envelopes", envelopes), ("probe", probe), ("least_negative", least_negative)):
        _guard(doc, f"{name}_error", block)
    return doc


def run_report(kind: str, settings: LabSettings | None = None) -> ReportDocument:
    if kind == "theorem2":
        return intersection_report()
    if kind == "lab":
        return lab_report(settings)
    raise ValueError(f"unknown report kind {kind!r}; choose from {REPORT_KINDS}")
