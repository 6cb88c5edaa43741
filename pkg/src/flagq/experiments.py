"""Experiment drivers behind the ``flagq`` command line.

Each driver takes a resolved configuration (see :mod:`flagq.config`) and
returns a :class:`ResultTable`: fixed columns, rows in sweep order, a
provenance header and a list of assertion outcomes.
"""
from __future__ import annotations

import csv
import io
import json
import math
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import metadata
from typing import Any, Callable

import numpy as np
import scipy

from . import toeplitz as tz
from .berezin import (berezin_of_symbol, decompose, embed_tensor_as_symbol, hs_pairing_check,
                      invariant_dimension_estimate)
from .conical import (berezin_kernel_eval, conical_eval, h_k_eval, hk_integral, hk_l1_norm,
                      levi_blocks, sup_outside_neighborhood)
from .config import config_hash
from .errors import ConfigError, DomainError, PreconditionError
from .group import as_rng, dagger, haar_sample
from .quadrature import QuadratureRule, convolve_at, integrate_with_error, mc_rule, su2_product_rule
from .representations import HighestWeightRep, build_irrep, weight_multiplicities
from .spectra import counting_fraction, has_atom, level_measure, spectrum
from .toeplitz import Symbol, assemble_toeplitz, rep_degree
from .weights import CoeffLaw, Weight, WeightFamily, growth_check, weyl_dimension

COLUMNS = {
    "verify": ["name", "residual", "tolerance", "pass", "ref"],
    "szego": ["lambda1", "d_lambda", "tau", "counting_fraction", "level_measure", "gap"],
    "berezin-limit": ["lambda1", "sup_error", "mean_error"],
    "kernel-decay": ["n", "lambda1", "sup_hk", "hk_l1"],
    "commute": ["lambda1", "symbol_pair", "commutator_norm", "multiplicity_free"],
}


def _version() -> str:
    for dist in ("artifact", "flagq"):
        try:
            return metadata.version(dist)
        except metadata.PackageNotFoundError:
            continue
    return "0+unknown"


@dataclass
class Assertion:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ResultTable:
    experiment: str
    columns: list[str]
    rows: list[tuple]
    config: dict
    assertions: list[Assertion] = field(default_factory=list)

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(f"row {row} does not match columns {self.columns}")
            for v in row:
                if isinstance(v, float) and not math.isfinite(v):
                    raise FloatingPointError(f"non-finite value in row {row}")

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def provenance(self) -> dict:
        return {
            "experiment": self.experiment,
            "config_hash": config_hash(self.config),
            "seed": self.config.get("seed", 0),
            "versions": {"flagq": _version(), "numpy": np.__version__, "scipy": scipy.__version__,
                         "python": platform.python_version()},
        }

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    @staticmethod
    def _fmt(v) -> str:
        if isinstance(v, (bool, np.bool_)):
            return "true" if v else "false"
        if isinstance(v, (float, np.floating)):
            return format(float(v), ".17g")
        return str(v)

    def to_csv(self) -> str:
        buf = io.StringIO()
        for k, v in self.provenance().items():
            buf.write(f"# {k}: {json.dumps(v, sort_keys=True)}\n")
        buf.write(f"# config: {json.dumps(self.config, sort_keys=True)}\n")
        for a in self.assertions:
            buf.write(f"# assert {a.name}: {'pass' if a.passed else 'FAIL'} {a.detail}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([self._fmt(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> dict:
        def conv(v):
            if isinstance(v, (np.bool_, bool)):
                return bool(v)
            if isinstance(v, (np.floating, float)):
                return float(format(float(v), ".17g"))
            if isinstance(v, np.integer):
                return int(v)
            return v
        return {
            "provenance": self.provenance(),
            "config": self.config,
            "columns": self.columns,
            "rows": [[conv(v) for v in r] for r in self.rows],
            "assertions": [{"name": a.name, "pass": a.passed, "detail": a.detail} for a in self.assertions],
            "pass": self.passed,
        }


# --------------------------------------------------------------------------
# construction helpers

def make_symbol(spec: dict, n: int, special: bool = True) -> Symbol:
    name = spec["name"]
    if name == "const":
        return tz.const_symbol(spec.get("c", 1.0), n)
    if name == "sigmoid_abs2_g11":
        return tz.sigmoid_abs2_g11(n, spec.get("center", 0.5), spec.get("steepness", 10.0))
    if name == "minor_power":
        mu = spec.get("mu")
        if not mu or len(mu) != n - 1:
            raise ConfigError(f"minor_power needs mu with {n - 1} entries")
        return tz.minor_power_symbol(mu)
    if name == "matrix_coefficient":
        aux = spec.get("aux_weight")
        if not aux or len(aux) != n - 1:
            raise ConfigError(f"matrix_coefficient needs aux_weight with {n - 1} entries")
        pi = build_irrep(Weight(tuple(aux)), n, special=special, seed=spec.get("seed", 0))
        if spec.get("v0", "zero_weight") == "zero_weight":
            v0 = tz.zero_weight_vector(pi)
        else:
            v0 = pi.highest_weight_vector
        if spec.get("u", "random") == "highest":
            u = pi.highest_weight_vector
        else:
            rng = as_rng(spec.get("seed", 0))
            u = rng.standard_normal(pi.dim) + 1j * rng.standard_normal(pi.dim)
            u /= np.linalg.norm(u)
        return tz.matrix_coefficient_symbol(pi, u, v0, id=f"pi{pi.weight.label()}_(u,v0)")
    if name in tz.BUILTIN_SYMBOLS:
        return tz.BUILTIN_SYMBOLS[name](n)
    raise ConfigError(f"unknown symbol {name!r}")


def make_rule(cfg: dict, needed_degree: int, n: int, special: bool, seed=None) -> QuadratureRule:
    q = cfg["quadrature"]
    if q["kind"] == "product":
        if n != 2 or not special:
            raise ConfigError("product rules exist for SU(2) only; use quadrature.kind = 'mc'")
        deg = q["max_degree"] if q["max_degree"] is not None else needed_degree
        if deg < needed_degree:
            raise PreconditionError(f"quadrature.max_degree {deg} < required {needed_degree}")
        return su2_product_rule(deg)
    return mc_rule(n, q["N"], seed=q["seed"] if seed is None else seed, special=special)


def make_family(cfg: dict) -> WeightFamily:
    fam = cfg["family"]
    laws = {int(k): CoeffLaw(**v) for k, v in fam["laws"].items()}
    try:
        return WeightFamily(cfg["group"]["n"], laws, fam["central"])
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def _check_family(cfg: dict) -> WeightFamily:
    fam = make_family(cfg)
    horizon = max(cfg["family"]["horizon"], max(cfg["sweep"]["values"]))
    rep = growth_check(fam, horizon)
    if not (rep.superlog_ok and rep.poly_ok and rep.support_constant):
        raise PreconditionError(f"weight family fails the growth hypotheses: {rep}")
    return fam


def _point_seeds(seed: int, count: int) -> list[int]:
    ss = np.random.SeedSequence(seed)
    return [int(c.generate_state(1)[0]) for c in ss.spawn(count)]


def _map(fn: Callable, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


# --------------------------------------------------------------------------
# verify

@dataclass
class _Check:
    name: str
    residual: float
    tolerance: float
    ref: str
    above: bool = False  # pass when residual > tolerance (non-vanishing witnesses)

    @property
    def passed(self) -> bool:
        return self.residual > self.tolerance if self.above else self.residual <= self.tolerance


def verify_checks(cfg: dict) -> list[_Check]:
    n, special = cfg["group"]["n"], cfg["group"]["special"]
    tol = cfg["tolerances"]
    ns = tol["mc_sigmas"]
    lam = Weight(tuple(cfg["weight"]["coeffs"]), cfg["weight"]["central"])
    if lam.n != n:
        raise ConfigError(f"weight {lam.coeffs} does not fit U({n})")
    seed = cfg["seed"]
    rng = as_rng(seed)
    rep = build_irrep(lam, n, special=special, seed=seed)
    d = rep.dim
    deg = rep_degree(rep)
    exact = cfg["quadrature"]["kind"] == "product"
    checks: list[_Check] = []

    def tol_for(abs_tol, sigma):
        return abs_tol if exact else max(abs_tol, ns * sigma)

    # repr vs minors
    g50 = haar_sample(n, rng, 50, special=special)
    checks.append(_Check("cross_construction", float(np.abs(conical_eval(lam, g50) - rep.conical(g50)).max()),
                         tol["cross"], "conical_tensor_prod"))
    R50 = rep(g50)
    checks.append(_Check("unitarity", float(np.abs(np.conj(np.swapaxes(R50, 1, 2)) @ R50 - np.eye(d)).max()),
                         1e-9, "-"))

    # Berezin kernel mass
    rule_k = make_rule(cfg, 2 * deg, n, special)
    c = cfg["corrupt_kernel"]
    val, s = integrate_with_error(rule_k, lambda g: c * berezin_kernel_eval(lam, g, d))
    checks.append(_Check("schur_normalization", abs(val - 1), tol_for(tol["schur"], s), "berezin_kernel_unit_mass"))

    # Delta * Delta = Delta / d
    xs = haar_sample(n, rng, 5, special=special)
    worst, wsig = 0.0, 0.0
    for x in xs:
        conv = convolve_at(rule_k, lambda y: conical_eval(lam, y), lambda y: conical_eval(lam, y), x)
        worst = max(worst, abs(conv - conical_eval(lam, x) / d))
        if not exact:
            _, s = integrate_with_error(rule_k, lambda y: conical_eval(lam, y) * conical_eval(lam, dagger(y) @ x))
            wsig = max(wsig, s)
    checks.append(_Check("idempotent_convolution", worst, tol_for(tol["idempotent"], wsig), "idempotent_convolution"))

    # Toeplitz axioms
    symbols = [make_symbol(sp, n, special) for sp in cfg["symbols"]]
    sym_deg = max([f.degree or 0 for f in symbols] + [4])
    rule_t = make_rule(cfg, 2 * deg + sym_deg, n, special)
    T1 = assemble_toeplitz(rep, tz.const_symbol(1.0, n), rule_t)
    t1_excess = max(0.0, T1.op_norm() - 1.0)
    probe = haar_sample(n, rng, 20000, special=special)
    for f in symbols:
        T = assemble_toeplitz(rep, f, rule_t)
        fint, _ = integrate_with_error(rule_t, f.func)
        checks.append(_Check(f"trace_identity[{f.id}]", abs(T.trace() - d * fint), tol["trace"], "trace_of_Toeplitz"))
        Tc = assemble_toeplitz(rep, f.conj(), rule_t)
        checks.append(_Check(f"adjoint[{f.id}]", float(np.abs(Tc.matrix - T.adjoint()).max()), tol["adjoint"],
                             "toeplitz_basic_properties"))
        fv = np.concatenate([np.asarray(f.func(rule_t.nodes[:50000])), np.asarray(f.func(probe))])
        sup = float(np.abs(fv).max())
        if f.real and fv.real.min() >= 0:
            ev = np.linalg.eigvalsh((T.matrix + T.adjoint()) / 2)
            checks.append(_Check(f"positivity[{f.id}]", max(0.0, -float(ev.min())), tol["positivity"],
                                 "toeplitz_basic_properties"))
        checks.append(_Check(f"norm_bound[{f.id}]", max(0.0, T.op_norm() - sup),
                             tol_for(tol["norm"], T.sigma) + sup * t1_excess, "toeplitz_norm_bounds"))

    # equivariance
    f_eq = tz.abs2_g11(n)
    worst, wsig = 0.0, 0.0
    for x in haar_sample(n, rng, 10, special=special):
        r, s = equivariance_point(rep, f_eq, x, rule_t)
        worst, wsig = max(worst, r), max(wsig, s)
    checks.append(_Check("equivariance", worst, tol_for(tol["equivariance"], wsig), "toeplitz_invariant_symbol"))

    # averaged symbol
    blocks = tuple(levi_blocks(lam))
    for f in (tz.re_g11_sq(n), tz.abs2_g11_plus_g12(n), tz.im_g12_sq(n)):
        fa = tz.average_symbol_L(f, blocks, special=special, seed=seed)
        A = assemble_toeplitz(rep, f, rule_t)
        B = assemble_toeplitz(rep, fa, rule_t)
        checks.append(_Check(f"averaged_symbol[{f.id}]", float(np.linalg.norm(A.matrix - B.matrix, 2)),
                             tol_for(tol["averaged"], math.hypot(A.sigma, B.sigma)), "toeplitz_averaged_symbol"))

    # surjectivity
    if d <= 8 and exact:
        E = np.eye(d)
        syms = [embed_tensor_as_symbol(rep, E[i], E[j]) for i in range(d) for j in range(d)]
        rule_s = make_rule(cfg, 4 * deg, n, special)
        rank = tz.quantization_rank(rep, syms, rule_s)
        checks.append(_Check("quantization_rank", float(abs(rank - d * d)), 0.0, "all_operators_are_Toeplitz"))

    mult_free = all(m == 1 for m in weight_multiplicities(rep).values())
    if n == 2 and special:
        # kernel witnesses: spin 2j+2 is absent from sigma (x) conj(sigma), spin 1 is present
        lam1 = lam.coeffs[0]
        for aux, name, above in ((2 * lam1 + 4, "kernel_witness", False), (2, "non_kernel_witness", True)):
            f = make_symbol({"name": "matrix_coefficient", "aux_weight": [aux], "seed": seed}, n, special)
            rule_m = make_rule(cfg, 2 * deg + aux, n, special)
            norm = assemble_toeplitz(rep, f, rule_m).op_norm()
            checks.append(_Check(name, norm, tol["noncommute"] if above else tol["kernel"],
                                 "kernel_of_meta_Toeplitz", above=above))
        # unit integral of h_2
        val = hk_integral(lam, 2, make_rule(cfg, 2 * deg, n, special))
        checks.append(_Check("hk_unit_integral[k=2]", abs(val - 1), tol["unit_integral"], "approx_identity"))

    if mult_free:
        pairs = [(tz.abs2_g11(n), tz.abs4_g11(n)), (tz.abs2_g11(n), tz.hopf_z(n)),
                 (tz.abs4_g11(n), tz.sigmoid_abs2_g11(n))]
        rule_c = make_rule(cfg, 2 * deg + 4, n, special)
        for a, b in pairs:
            cn = tz.commutator_norm(assemble_toeplitz(rep, a, rule_c), assemble_toeplitz(rep, b, rule_c))
            checks.append(_Check(f"commute[{a.id},{b.id}]", cn, tol["commute"], "multiplicity_free_commuting"))
        cn = tz.commutator_norm(assemble_toeplitz(rep, tz.hopf_x(n), rule_c),
                                assemble_toeplitz(rep, tz.hopf_y(n), rule_c))
        checks.append(_Check("noncommute[hopf_x,hopf_y]", cn, tol["noncommute"], "multiplicity_free_commuting",
                             above=True))

    # isotypic data
    rule_i = make_rule(cfg, 4 * deg, n, special)
    comps = decompose(rep, rule_i, special=special, seed=seed)
    norm_sum = sum(cmp.norm2 for cmp in comps)
    par_tol = tol["berezin_trace"] if exact else max(tol["berezin_trace"], 0.05)
    checks.append(_Check("parseval_highest_tensor", abs(norm_sum - 1), par_tol, "berezin_matrix_coefficient_formula"))
    if exact:
        checks.append(_Check("isotypic_idempotence", max(cmp.idempotence_residual for cmp in comps), 1e-8, "-"))
    if all(cmp.multiplicity == 1 for cmp in comps):
        total = sum(cmp.dim_pi * (d / cmp.dim_pi) * cmp.norm2 for cmp in comps)
        checks.append(_Check("berezin_trace", abs(total - d), tol["berezin_trace"] if exact else d * par_tol,
                             "Toeplitz_product_trace_Berezin_transform"))
    for cmp in comps:
        if sum(cmp.pi.coeffs) <= 2:
            v, s = invariant_dimension_estimate(build_irrep(cmp.pi, n, special=special, seed=seed), blocks,
                                                special=special, count=cfg["mc_count"], seed=seed)
            checks.append(_Check(f"asymptotic_multiplicity[{cmp.label}]", abs(v - cmp.multiplicity),
                                 max(1e-8, ns * s), "asymptotic_tensor_product"))

    # HS pairing
    f, g = tz.abs2_g11(n), tz.hopf_x(n)
    rule_h = make_rule(cfg, 2 * deg + 4, n, special)
    res, s = hs_pairing_check(rep, f, g, rule_h, return_sigma=True)
    checks.append(_Check("hs_pairing", res, tol_for(tol["hs"], s), "Toeplitz_product_trace_Berezin_transform"))
    return checks


def equivariance_point(rep, f, x, rule):
    return tz.equivariance_residual(rep, f, x, rule, return_sigma=True)


def run_verify(cfg: dict, jobs: int = 1) -> ResultTable:
    checks = verify_checks(cfg)
    rows = [(c.name, float(c.residual), float(c.tolerance), c.passed, c.ref) for c in checks]
    asserts = [Assertion(c.name, c.passed, f"residual={c.residual:.3e} tol={c.tolerance:.1e}") for c in checks]
    return ResultTable("verify", COLUMNS["verify"], rows, cfg, asserts)


# --------------------------------------------------------------------------
# Szego

def _szego_point(args) -> list[tuple]:
    cfg, value, seed = args
    n, special = cfg["group"]["n"], cfg["group"]["special"]
    lam = make_family(cfg)(value)
    rep = build_irrep(lam, n, special=special, seed=seed)
    f = make_symbol(cfg["symbols"][0], n, special)
    rule = make_rule(cfg, 2 * rep_degree(rep) + (f.degree or 0), n, special, seed=seed)
    s = spectrum(assemble_toeplitz(rep, f, rule))
    lm = cfg["level_measure"]
    rows = []
    for tau in cfg["taus"]:
        cf = counting_fraction(s, tau)
        mu, sig = level_measure(f, tau, n, lm["N"], lm["seed"], special=special, return_sigma=True)
        rows.append((lam.coeffs[0], rep.dim, float(tau), cf, mu, abs(cf - mu), sig))
    return rows


def run_szego(cfg: dict, jobs: int = 1) -> ResultTable:
    _check_family(cfg)
    n, special = cfg["group"]["n"], cfg["group"]["special"]
    f = make_symbol(cfg["symbols"][0], n, special)
    for tau in cfg["taus"]:
        # the limit needs mu(f = tau) = 0
        if has_atom(f, tau, n, seed=cfg["level_measure"]["seed"], special=special):
            raise PreconditionError(f"level set f = {tau} of {f.id} carries positive measure")
    values = cfg["sweep"]["values"]
    seeds = _point_seeds(cfg["seed"], len(values))
    results = _map(_szego_point, [(cfg, v, s) for v, s in zip(values, seeds)], jobs)
    rows = [r[:6] for point in results for r in point]
    sig = {(i, r[2]): r[6] for i, point in enumerate(results) for r in point}
    asserts = []
    a = cfg["assertions"]
    ntau = len(cfg["taus"])
    if a["gap_bounds"] is not None:
        if len(a["gap_bounds"]) != len(values):
            raise ConfigError("assertions.gap_bounds must have one entry per sweep value")
        for i, bound in enumerate(a["gap_bounds"]):
            for r in results[i]:
                asserts.append(Assertion(f"gap[lambda1={r[0]},tau={r[2]}]<={bound}", r[5] <= bound,
                                         f"gap={r[5]:.4g}"))
    if a["monotone"] and len(values) > 1:
        for t in range(ntau):
            gaps = [results[i][t][5] for i in range(len(values))]
            ok = all(gaps[i + 1] <= gaps[i] + cfg["tolerances"]["mc_sigmas"] * sig[(i + 1, results[i][t][2])]
                     for i in range(len(gaps) - 1))
            asserts.append(Assertion(f"gap_monotone[tau={results[0][t][2]}]", ok,
                                     "gaps=" + ",".join(f"{g:.4g}" for g in gaps)))
    return ResultTable("szego", COLUMNS["szego"], rows, cfg, asserts)


# --------------------------------------------------------------------------
# Berezin limit

def _berezin_point(args) -> tuple:
    cfg, value, seed = args
    n, special = cfg["group"]["n"], cfg["group"]["special"]
    lam = make_family(cfg)(value)
    rep = build_irrep(lam, n, special=special, seed=seed)
    syms = [make_symbol(sp, n, special) for sp in cfg["symbols"]]
    tp = cfg["test_points"]
    pts = haar_sample(n, as_rng(tp["seed"]), tp["count"], special=special)
    deg = sum(f.degree or 0 for f in syms)
    rule = make_rule(cfg, 2 * rep_degree(rep) + deg, n, special, seed=seed)
    if len(syms) == 1:
        f = syms[0]
        err = np.abs(berezin_of_symbol(rep, f, pts, rule) - f(pts))
    else:
        # B(T_{f1} ... T_{fk}) against the pointwise product f1 ... fk
        from .berezin import berezin_of_operator
        prod = np.eye(rep.dim, dtype=complex)
        target = np.ones(len(pts), dtype=complex)
        for f in syms:
            prod = prod @ assemble_toeplitz(rep, f, make_rule(cfg, 2 * rep_degree(rep) + (f.degree or 0),
                                                               n, special, seed=seed)).matrix
            target = target * f(pts)
        err = np.abs(berezin_of_operator(rep, prod, pts) - target)
    return (lam.coeffs[0], float(err.max()), float(err.mean()))


def run_berezin_limit(cfg: dict, jobs: int = 1) -> ResultTable:
    _check_family(cfg)
    values = cfg["sweep"]["values"]
    seeds = _point_seeds(cfg["seed"], len(values))
    rows = _map(_berezin_point, [(cfg, v, s) for v, s in zip(values, seeds)], jobs)
    asserts = []
    a = cfg["assertions"]
    sup = [r[1] for r in rows]
    if a["monotone"] and len(rows) > 1:
        const = max(sup) < 1e-12
        ok = const or all(sup[i + 1] < sup[i] for i in range(len(sup) - 1))
        asserts.append(Assertion("sup_error_decreasing", ok, "sup=" + ",".join(f"{s:.4g}" for s in sup)))
    if a["final_sup_bound"] is not None:
        asserts.append(Assertion(f"final_sup_error<{a['final_sup_bound']}", sup[-1] < a["final_sup_bound"],
                                 f"sup={sup[-1]:.4g}"))
    return ResultTable("berezin-limit", COLUMNS["berezin-limit"], rows, cfg, asserts)


# --------------------------------------------------------------------------
# approximate identity

def _kernel_point(args) -> tuple:
    cfg, value, seed = args
    lam = make_family(cfg)(value)
    k = cfg["k"]
    sup = sup_outside_neighborhood(lam, k, cfg["theta0"], count=cfg["mc_count"], seed=seed)
    l1 = hk_l1_norm(lam, k, resolution=cfg["l1_resolution"], count=cfg["mc_count"], seed=seed)
    return (int(value), lam.coeffs[0], float(sup), float(l1))


def su2_kernel_sup_closed_form(lam1: int, theta0: float) -> float:
    """``d cos(theta0/2)^{2 lambda_1}``: the sup of the Berezin kernel outside the ``theta0``-cap."""
    return (lam1 + 1) * math.cos(theta0 / 2) ** (2 * lam1)


def run_kernel_decay(cfg: dict, jobs: int = 1) -> ResultTable:
    values = cfg["sweep"]["values"]
    seeds = _point_seeds(cfg["seed"], len(values))
    rows = _map(_kernel_point, [(cfg, v, s) for v, s in zip(values, seeds)], jobs)
    a = cfg["assertions"]
    asserts = []
    n = cfg["group"]["n"]
    if a["closed_form_tol"] is not None:
        if n != 2 or cfg["k"] != 1:
            raise ConfigError("the closed form applies to SU(2) with k = 1")
        worst = max(abs(r[2] - su2_kernel_sup_closed_form(r[1], cfg["theta0"])) for r in rows)
        asserts.append(Assertion("sup_matches_closed_form", worst <= a["closed_form_tol"], f"max_dev={worst:.3e}"))
    if a["sup_bound"] is not None:
        sb = a["sup_bound"]
        hit = [r for r in rows if r[0] >= sb["n"]]
        ok = bool(hit) and all(r[2] < sb["bound"] for r in hit)
        asserts.append(Assertion(f"sup<{sb['bound']}_for_n>={sb['n']}", ok,
                                 "sup=" + ",".join(f"{r[2]:.3g}" for r in hit)))
    if a["l1_target"] is not None:
        lt = a["l1_target"]
        hit = [r for r in rows if r[0] >= lt["n"]]
        ok = bool(hit) and all(abs(r[3] - 1) <= lt["tol"] for r in hit)
        asserts.append(Assertion(f"|hk_l1-1|<={lt['tol']}_for_n>={lt['n']}", ok,
                                 "l1=" + ",".join(f"{r[3]:.4g}" for r in hit)))
    if a["constant_sup"]:
        sups = [r[2] for r in rows]
        ok = max(sups) - min(sups) <= 1e-12 * max(1.0, max(sups))
        asserts.append(Assertion("sup_constant", ok, f"range={max(sups) - min(sups):.3e}"))
    return ResultTable("kernel-decay", COLUMNS["kernel-decay"], rows, cfg, asserts)


# --------------------------------------------------------------------------
# commuting families

def _commute_point(args) -> list[tuple]:
    cfg, value, seed = args
    n, special = cfg["group"]["n"], cfg["group"]["special"]
    lam = make_family(cfg)(value)
    rep = build_irrep(lam, n, special=special, seed=seed)
    free = all(m == 1 for m in weight_multiplicities(rep).values())
    rows = []
    for pair in cfg["pairs"]:
        a, b = make_symbol(pair["a"], n, special), make_symbol(pair["b"], n, special)
        deg = max(a.degree or 0, b.degree or 0)
        rule = make_rule(cfg, 2 * rep_degree(rep) + deg, n, special, seed=seed)
        cn = tz.commutator_norm(assemble_toeplitz(rep, a, rule), assemble_toeplitz(rep, b, rule))
        rows.append((lam.coeffs[0], f"{a.id}|{b.id}", cn, free, pair.get("expect", "none")))
    return rows


def run_commute(cfg: dict, jobs: int = 1) -> ResultTable:
    values = cfg["sweep"]["values"]
    seeds = _point_seeds(cfg["seed"], len(values))
    results = _map(_commute_point, [(cfg, v, s) for v, s in zip(values, seeds)], jobs)
    tol = cfg["tolerances"]
    rows, asserts = [], []
    for point in results:
        for lam1, pair, cn, free, expect in point:
            rows.append((lam1, pair, cn, free))
            if expect == "commute":
                asserts.append(Assertion(f"commute[{lam1}:{pair}]", cn <= tol["commute"], f"norm={cn:.3e}"))
            elif expect == "noncommute":
                asserts.append(Assertion(f"noncommute[{lam1}:{pair}]", cn > tol["noncommute"], f"norm={cn:.3e}"))
    return ResultTable("commute", COLUMNS["commute"], rows, cfg, asserts)


RUNNERS: dict[str, Callable[..., ResultTable]] = {
    "verify": run_verify,
    "szego": run_szego,
    "berezin-limit": run_berezin_limit,
    "kernel-decay": run_kernel_decay,
    "commute": run_commute,
}
