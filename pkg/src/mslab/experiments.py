"""Named experiments: each turns a parameter map into tables and verdicts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._validation import check_seed
from .geometry import (
    DEFAULT_SEED,
    PointSequence,
    SUMMARY_COLUMNS,
    geometric_carleson_test,
    spectral_summary,
    weak_q_carleson_constant,
)
from .inner import InnerFunction, blaschke_delta
from .interpolation import (
    ExponentTriple,
    InterpolationProblem,
    build_interpolant,
    dual_family_p2,
    factorize_target,
    interpolate,
    khinchin_bound_mc,
    ratio_hypothesis_check,
    scarl_comparison,
)
from .kernels import KernelSpec, norm_estimate
from .paley_wiener import (
    PWFunction,
    PWSequenceSpec,
    conjugate_exponent,
    muckenhoupt_ap,
    plancherel_polya_check,
    power_weight,
    pw_gram,
    schuster_seip_magnitude_check,
    upper_density,
)


@dataclass(frozen=True)
class Param:
    kind: str  # float, int, str, floats, ints
    default: object
    help: str = ""

    def parse(self, text):
        if self.kind == "float":
            return float(text)
        if self.kind == "int":
            return int(text)
        if self.kind == "str":
            return str(text)
        items = [t for t in str(text).split(",") if t.strip()]
        if self.kind == "floats":
            return [float(t) for t in items]
        if self.kind == "ints":
            return [int(t) for t in items]
        raise ValueError(f"unknown parameter kind {self.kind}")

    def check(self, value):
        kinds = {"float": (int, float), "int": (int,), "str": (str,)}
        if self.kind in kinds:
            if isinstance(value, bool) or not isinstance(value, kinds[self.kind]):
                raise TypeError(f"expected {self.kind}, got {value!r}")
            return float(value) if self.kind == "float" else value
        elem = float if self.kind == "floats" else int
        if not isinstance(value, (list, tuple)):
            raise TypeError(f"expected a list for {self.kind}")
        return [elem(v) for v in value]


@dataclass(frozen=True)
class Experiment:
    name: str
    anchor: str
    summary: str
    params: dict
    run: Callable
    uses_seed: bool = False


CATALOG: dict[str, Experiment] = {}


def experiment(name, anchor, summary, uses_seed=False, **params):
    def register(fn):
        CATALOG[name] = Experiment(name, anchor, summary, params, fn, uses_seed)
        return fn

    return register


def catalog():
    """Experiments in a fixed (alphabetical) order."""
    return [CATALOG[k] for k in sorted(CATALOG)]


@dataclass
class Result:
    tables: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)

    def table(self, name, columns, rows, plot=None):
        entry = {"name": name, "columns": list(columns), "rows": [list(r) for r in rows]}
        if plot:
            entry["plot"] = plot
        self.tables.append(entry)

    def verdict(self, name, passed, detail):
        self.verdicts.append({"name": name, "passed": bool(passed), "detail": detail})


def resolve_params(exp, overrides):
    """Defaults merged with ``overrides`` (already-typed or string values)."""
    out = {}
    for key, spec in exp.params.items():
        value = overrides.get(key, spec.default)
        if isinstance(value, str) and spec.kind != "str":
            value = spec.parse(value)
        out[key] = spec.check(value)
    unknown = set(overrides) - set(exp.params)
    if unknown:
        raise KeyError(f"unknown parameter(s) for {exp.name}: {', '.join(sorted(unknown))}")
    return out


def _sequence(kind, n):
    if kind == "exponential":
        return PointSequence.exponential(n)
    if kind == "radial":
        return PointSequence.radial(n)
    if kind == "dyadic-tree":
        return PointSequence.dyadic_tree(n)
    raise ValueError(f"unknown sequence {kind!r}")


def _radius_grid(jmax):
    return [1.0 - 2.0**-j for j in range(1, jmax + 1)]


def _efold_increments(values):
    inc = np.diff(np.asarray(values))
    mean = float(np.mean(inc))
    dev = float(np.max(np.abs(inc - mean)) / abs(mean)) if mean else math.inf
    return inc, mean, dev


@experiment(
    "carleson-delta", "Blaschke separation constant inf |B_a(a)|",
    "Separation constant of truncations of a disk sequence.",
    sequence=Param("str", "exponential", "exponential | radial | dyadic-tree"),
    n=Param("int", 20, "number of points"),
    min_delta=Param("float", 1e-3, "separation threshold for the verdict"),
)
def run_carleson_delta(prm, seed):
    res = Result()
    seq = _sequence(prm["sequence"], prm["n"])
    rows = [[k, blaschke_delta(seq.points[:k])] for k in range(1, prm["n"] + 1)]
    res.table("delta", ["N", "delta"], rows, plot={"x": "N", "y": ["delta"], "logy": True})
    delta = rows[-1][1]
    res.verdict("separated", delta >= prm["min_delta"], f"delta={delta:.6g} threshold={prm['min_delta']:g}")
    return res


@experiment(
    "aleksandrov-band", "two-sided kernel-norm estimate in model spaces",
    "Quadrature kernel norms against ((1-|I(a)|^2)/(1-|a|^2))^(1-1/p) on a radius.",
    tau=Param("float", math.pi, "singular mass"),
    p=Param("floats", [1.5, 2.0, 4.0], "exponents"),
    jmax=Param("int", 12, "anchors a = 1 - 2^-j, j = 1..jmax"),
    band=Param("float", 10.0, "allowed max/min ratio"),
)
def run_aleksandrov_band(prm, seed):
    res = Result()
    inner = InnerFunction.singular(prm["tau"])
    rows = []
    for p in prm["p"]:
        ratios = []
        for j, a in enumerate(_radius_grid(prm["jmax"]), start=1):
            est = norm_estimate(KernelSpec(a, inner, p))
            rows.append([p, j, a, est.value, est.surrogate, est.ratio])
            ratios.append(est.ratio)
        width = max(ratios) / min(ratios)
        res.verdict(f"band p={p:g}", width < prm["band"], f"max/min={width:.6g}")
    res.table("norms", ["p", "j", "a", "norm", "surrogate", "ratio"], rows,
              plot={"x": "j", "y": ["ratio"], "group": "p"})
    return res


def _gram_rows(spec, ns, tau, label):
    rows = []
    for n in ns:
        s = spectral_summary(pw_gram(spec.centered(n), tau))
        rows.append([label, *s.as_row()])
    return rows


@experiment(
    "schuster-seip", "perturbed integers that are dual bounded but not interpolating",
    "Generating-product magnitude band and Gram spectra for gamma_k = k + sign(k)/(2 max(p,p')).",
    p=Param("float", 4.0, "exponent"),
    K=Param("int", 500, "truncation"),
    xmax=Param("float", 50.0, "largest sample |x| (half-integers)"),
    N=Param("ints", [16, 32, 64, 128, 256], "Gram truncations"),
    band=Param("float", 20.0, "allowed max/min magnitude ratio"),
)
def run_schuster_seip(prm, seed):
    res = Result()
    spec = PWSequenceSpec("schuster-seip", prm["p"], prm["K"])
    half = np.arange(0.5, prm["xmax"] + 0.5, 1.0)
    xs = np.concatenate([-half[::-1], half])
    mag = schuster_seip_magnitude_check(spec, xs)
    res.table("magnitude", ["family", "exponent", "min_ratio", "max_ratio", "band"],
              [[spec.name, mag.exponent, mag.min_ratio, mag.max_ratio, mag.band]])
    res.verdict("magnitude band", mag.band < prm["band"], f"max/min={mag.band:.6g}")
    rows = _gram_rows(spec, prm["N"], math.pi, 1.0)
    res.table("gram", ["tau_mult", *SUMMARY_COLUMNS], rows,
              plot={"x": "N", "y": ["inv_diag_max"], "logx": True})
    inv = [r[4] for r in rows]
    growth = inv[-1] / inv[-2] - 1.0 if len(inv) > 1 else 0.0
    res.verdict("inverse diagonal bounded", growth < 0.05, f"last growth={growth:.3e}")
    return res


@experiment(
    "narrowed-ls", "narrowed perturbation with an A_p weight criterion",
    "Magnitude band for gamma_k = k - sign(k)/(2s'), A_p of (1+|t|)^(-1/(2s')) and A_s of (1+|t|)^(-1/s).",
    s=Param("float", 1.5, "exponent s"),
    p=Param("float", 2.0, "exponent p of the bounded functional"),
    K=Param("int", 500, "truncation"),
    xmax=Param("float", 50.0, "largest sample |x|"),
    efold_min=Param("int", 2, "first interval [0, e^m]"),
    efold_max=Param("int", 8, "last interval [0, e^m]"),
    bound_x=Param("float", 1e4, "largest interval for the bounded functional"),
)
def run_narrowed(prm, seed):
    res = Result()
    s, p = prm["s"], prm["p"]
    sc = conjugate_exponent(s)
    spec = PWSequenceSpec("narrowed", s, prm["K"])
    half = np.arange(0.5, prm["xmax"] + 0.5, 1.0)
    mag = schuster_seip_magnitude_check(spec, np.concatenate([-half[::-1], half]))
    res.table("magnitude", ["family", "exponent", "min_ratio", "max_ratio", "band"],
              [[spec.name, mag.exponent, mag.min_ratio, mag.max_ratio, mag.band]])
    xs = np.geomspace(10.0, prm["bound_x"], 13)
    bounded = muckenhoupt_ap(power_weight(-1.0 / (2.0 * sc)), p, [(0.0, x) for x in xs])
    res.table("bounded", ["x", "A_p"], list(zip(xs.tolist(), bounded.tolist())),
              plot={"x": "x", "y": ["A_p"], "logx": True})
    drift = float(bounded[-1] / bounded[len(bounded) // 2] - 1.0)
    res.verdict("A_p bounded", bounded.max() < 2.0 and abs(drift) < 0.05,
                f"max={bounded.max():.6g} drift={drift:.3e}")
    ex = np.exp(np.arange(prm["efold_min"], prm["efold_max"] + 1))
    grow = muckenhoupt_ap(power_weight(-1.0 / s), s, [(0.0, x) for x in ex])
    inc, mean, dev = _efold_increments(grow)
    res.table("growing", ["x", "A_s"], list(zip(ex.tolist(), grow.tolist())),
              plot={"x": "x", "y": ["A_s"], "logx": True})
    res.verdict("A_s grows like a log", mean > 0 and dev <= 0.3,
                f"mean increment={mean:.6g} max deviation={dev:.3f}")
    return res


@experiment(
    "quarter-shift", "quarter-shifted integers: sampling but not Riesz at type pi",
    "Gram spectra of gamma_k = k + sign(k)/4 at several types.",
    N=Param("ints", [16, 32, 64, 128, 256], "centred truncations"),
    tau_mult=Param("floats", [1.0, 1.25], "type as a multiple of pi"),
)
def run_quarter_shift(prm, seed):
    res = Result()
    ns = prm["N"]
    spec = PWSequenceSpec("quarter-shift", None, max(ns))
    rows = []
    for m in prm["tau_mult"]:
        rows.extend(_gram_rows(spec, ns, m * math.pi, m))
    res.table("gram", ["tau_mult", *SUMMARY_COLUMNS], rows,
              plot={"x": "N", "y": ["lambda_min"], "group": "tau_mult", "logx": True})
    by = {m: {r[1]: r for r in rows if r[0] == m} for m in prm["tau_mult"]}
    first, last = ns[0], ns[-1]
    mid = 64 if 64 in ns[:-1] else ns[(len(ns) - 1) // 2]
    if mid == last:
        raise ValueError("quarter-shift needs at least two distinct N")
    if 1.0 in by:
        lm = [by[1.0][n][2] for n in ns]
        res.verdict("type pi: lambda_min decreasing", all(b < a for a, b in zip(lm, lm[1:])),
                    " ".join(f"{x:.6g}" for x in lm))
        ratio = by[1.0][last][2] / by[1.0][mid][2]
        res.verdict(f"type pi: lambda_min({last}) < 0.5 lambda_min({mid})", ratio < 0.5,
                    f"ratio={ratio:.6g}")
    for m in prm["tau_mult"]:
        if m > 1.0:
            ratio = by[m][last][2] / by[m][mid][2]
            res.verdict(f"type {m:g}pi: lambda_min stable", ratio >= 0.9 and by[m][last][2] > 0,
                        f"ratio={ratio:.6g} first={by[m][first][2]:.6g}")
    return res


@experiment(
    "muckenhoupt-log", "logarithmic growth of the A_p functional of a power weight",
    "A_p of (1+|t|)^beta on [0, e^m] and its per-e-fold increments.",
    p=Param("float", 2.0, "exponent"),
    beta=Param("float", -0.5, "weight exponent"),
    efold_min=Param("int", 2, "first m"),
    efold_max=Param("int", 8, "last m"),
    spread=Param("float", 0.3, "allowed relative deviation of increments from their mean"),
)
def run_muckenhoupt_log(prm, seed):
    res = Result()
    ms = np.arange(prm["efold_min"], prm["efold_max"] + 1)
    xs = np.exp(ms)
    vals = muckenhoupt_ap(power_weight(prm["beta"]), prm["p"], [(0.0, x) for x in xs])
    inc, mean, dev = _efold_increments(vals)
    rows = [[int(m), float(x), float(v), float(d) if i else math.nan]
            for i, (m, x, v, d) in enumerate(zip(ms, xs, vals, np.concatenate([[0.0], inc])))]
    res.table("ap", ["m", "x", "A_p", "increment"], rows, plot={"x": "m", "y": ["A_p"]})
    res.verdict("near-constant increments", mean > 0 and dev <= prm["spread"],
                f"mean={mean:.6g} max deviation={dev:.3f}")
    return res


@experiment(
    "density", "upper uniform density",
    "Sliding-window maximal counts n+(r)/r.",
    family=Param("str", "quarter-shift", "sequence family, e.g. schuster-seip:p=4"),
    K=Param("int", 2000, "truncation"),
    r=Param("floats", [10.0, 100.0, 1000.0], "window lengths"),
    target=Param("float", 1.0, "expected density"),
    tol=Param("float", 0.01, "allowed deviation"),
)
def run_density(prm, seed):
    res = Result()
    spec = PWSequenceSpec.parse(prm["family"], prm["K"])
    value, table = upper_density(spec, prm["r"])
    res.table("density", ["r", "n_plus", "ratio"], table, plot={"x": "r", "y": ["ratio"], "logx": True})
    res.verdict("density", abs(value - prm["target"]) <= prm["tol"], f"D+={value:.6g}")
    return res


@experiment(
    "pp-check", "growth bound on horizontal lines for entire functions of exponential type",
    "int |f(x+ia)|^2 dx / (e^{2 tau |a|} ||f||^2) for sinc sums.",
    uses_seed=True,
    a=Param("floats", [0.0, 0.5, 1.0, 2.0], "vertical shifts"),
    kernels=Param("int", 5, "terms in the random sinc sum"),
)
def run_pp_check(prm, seed):
    res = Result()
    rng = np.random.default_rng(seed)
    funcs = {
        "sinc": PWFunction((0.0,), (1.0,)),
        "random": PWFunction(
            tuple(np.sort(rng.uniform(-5, 5, prm["kernels"]))),
            tuple(rng.standard_normal(prm["kernels"]) + 1j * rng.standard_normal(prm["kernels"])),
        ),
    }
    rows = []
    for label, f in funcs.items():
        for a in prm["a"]:
            rows.append([label, a, plancherel_polya_check(f, a)])
    res.table("ratios", ["function", "a", "ratio"], rows)
    worst = max(r[2] for r in rows)
    res.verdict("ratio <= 1", worst <= 1.0 + 1e-6, f"max ratio={worst:.9g}")
    return res


@experiment(
    "fact26", "equivalent separation conditions for model-space Carleson measures",
    "Separation, weak q-Carleson constant and Carleson window ratio side by side.",
    uses_seed=True,
    n=Param("int", 10, "points of the exponential sequence"),
    radial_n=Param("int", 200, "points of the radial sequence"),
    q=Param("float", 4.0, "exponent of the weak Carleson test"),
    trials=Param("int", 256, "random directions"),
    tau=Param("float", math.pi, "singular mass"),
    max_level=Param("int", 12, "deepest dyadic window level"),
)
def run_fact26(prm, seed):
    res = Result()
    inner = InnerFunction.singular(prm["tau"])
    rows = {}
    for label, seq in (("exponential", PointSequence.exponential(prm["n"])),
                       ("radial", PointSequence.radial(prm["radial_n"]))):
        rows[label] = [
            label,
            blaschke_delta(seq.points),
            weak_q_carleson_constant(seq, inner, prm["q"], prm["trials"], seed),
            geometric_carleson_test(seq, inner, prm["max_level"]).max_ratio,
        ]
    res.table("tests", ["sequence", "delta", "weak_q_lower_bound", "window_ratio"], list(rows.values()))
    e, r = rows["exponential"], rows["radial"]
    res.verdict("exponential separated", e[1] > 0, f"delta={e[1]:.6g}")
    res.verdict("exponential weak Carleson bounded", np.isfinite(e[2]), f"constant>={e[2]:.6g}")
    res.verdict("exponential windows bounded", np.isfinite(e[3]), f"ratio={e[3]:.6g}")
    res.verdict("radial not separated", r[1] < 1e-3, f"delta={r[1]:.3e}")
    res.verdict("radial windows blow up", r[3] > 10 * e[3], f"ratio={r[3]:.6g} vs {10 * e[3]:.6g}")
    return res


@experiment(
    "ratio-bands", "kernel-norm comparisons for products J = IE",
    "LHS/RHS of the J-kernel norm comparison for E = I and E = I^alpha.",
    tau=Param("float", math.pi, "singular mass"),
    alpha=Param("float", 0.5, "power for E = I^alpha"),
    p=Param("float", 2.0, "exponent p"),
    s=Param("float", 1.2, "exponent s"),
    jmax=Param("int", 10, "anchors a = 1 - 2^-j"),
    band=Param("float", 10.0, "allowed max/min"),
)
def run_ratio_bands(prm, seed):
    res = Result()
    inner = InnerFunction.singular(prm["tau"])
    triple = ExponentTriple.from_ps(prm["p"], prm["s"])
    grid = _radius_grid(prm["jmax"])
    rows = []
    cases = (
        ("equal-factors", inner),
        ("singular-powers", inner.with_power(prm["alpha"])),
        ("norm-product", inner.with_power(prm["alpha"])),
        ("sup-kernel", inner.with_power(prm["alpha"])),
    )
    for which, E in cases:
        rep = ratio_hypothesis_check(grid, inner, E, None, triple, which)
        for j, (a, r) in enumerate(zip(rep.points, rep.ratios), start=1):
            rows.append([which, j, a.real, r])
        res.verdict(which, rep.band < prm["band"], f"max/min={rep.band:.6g} ({rep.verdict})")
    res.table("ratios", ["case", "j", "a", "ratio"], rows, plot={"x": "j", "y": ["ratio"], "group": "case"})
    return res


def _interp_setup(prm):
    inner = InnerFunction.singular(prm["tau"])
    E = inner.with_power(prm["alpha"])
    triple = ExponentTriple.from_ps(prm["p"], prm["s"])
    pts = PointSequence.exponential(prm["n"]).points
    return inner, E, triple, pts


@experiment(
    "interpolate", "interpolation operator built from a dual family",
    "h = T(nu) on an exponential sequence; residuals, linearity and norm ratios.",
    uses_seed=True,
    n=Param("int", 8, "points"),
    tau=Param("float", math.pi, "singular mass of I"),
    alpha=Param("float", 0.5, "E = I^alpha"),
    p=Param("float", 2.0, "exponent p"),
    s=Param("float", 1.2, "exponent s"),
    trials=Param("int", 10, "random targets"),
)
def run_interpolate(prm, seed):
    res = Result()
    inner, E, triple, pts = _interp_setup(prm)
    rng = np.random.default_rng(seed)
    nus = [rng.standard_normal(pts.size) + 1j * rng.standard_normal(pts.size) for _ in range(prm["trials"])]
    T = build_interpolant(InterpolationProblem(pts, nus[0], triple, inner, E))
    rows = []
    for k, nu in enumerate(nus):
        _, rep = interpolate(InterpolationProblem(pts, nu, triple, inner, E), interpolant=T)
        rows.append([k, rep.relative_residual, rep.norm_s, rep.nu_norm_s, rep.ratio])
    res.table("trials", ["trial", "relative_residual", "h_norm_s", "nu_norm_s", "ratio"], rows)
    worst = max(r[1] for r in rows)
    res.verdict("interpolation condition", worst <= 1e-7, f"max relative residual={worst:.3e}")
    z = np.exp(2j * np.pi * rng.uniform(size=16)) * rng.uniform(0, 0.99, 16)
    a_, b_ = 0.7 - 0.2j, -1.3 + 0.4j
    lhs = T(z, a_ * nus[0] + b_ * nus[1])
    rhs = a_ * T(z, nus[0]) + b_ * T(z, nus[1])
    lin = float(np.max(np.abs(lhs - rhs)) / max(np.max(np.abs(lhs)), 1e-300))
    res.verdict("linearity", lin <= 1e-10, f"relative deviation={lin:.3e}")
    res.table("weights", ["a", "c_a", "k_J_norm_s_conj"],
              [[a.real, c, t] for a, c, t in zip(pts, T.weights, T.targets)])
    return res


@experiment(
    "khinchin", "random-sign average of a dual family",
    "Monte Carlo E||sum lambda_a eps_a rho_a||_p^p / ||lambda||_p^p against the exact p=2 value.",
    uses_seed=True,
    n=Param("int", 8, "points"),
    tau=Param("float", math.pi, "singular mass"),
    p=Param("float", 2.0, "exponent"),
    trials=Param("int", 1024, "sign samples"),
)
def run_khinchin(prm, seed):
    res = Result()
    inner = InnerFunction.singular(prm["tau"])
    pts = PointSequence.exponential(prm["n"]).points
    dual = dual_family_p2(pts, inner, prm["p"])
    rng = np.random.default_rng(seed)
    lam = rng.standard_normal(pts.size) + 1j * rng.standard_normal(pts.size)
    est = khinchin_bound_mc(lam, dual, prm["p"], prm["trials"], seed)
    sup = float(np.max(dual.norms2()) ** 2) if prm["p"] == 2.0 else math.nan
    exact = est.exact_p2 if est.exact_p2 is not None else math.nan
    res.table("estimate", ["mean", "stderr", "exact_p2", "sup_rho_norm_sq", "trials"],
              [[est.mean, est.stderr, exact, sup, est.trials]])
    if est.exact_p2 is not None:
        z = abs(est.mean - est.exact_p2) / est.stderr if est.stderr else 0.0
        res.verdict("matches exact p=2 value", z <= 3.0, f"|mean-exact|/stderr={z:.3f}")
    res.verdict("bounded by sup norm", not (est.mean > sup * (1 + 1e-9)) or math.isnan(sup),
                f"mean={est.mean:.6g} sup={sup:.6g}")
    return res


@experiment(
    "scarl", "comparable Hardy and model kernel norms away from |I| = 1",
    "||k_a||_r / ||k^I_a||_r along a radius.",
    tau=Param("float", math.pi, "singular mass"),
    r=Param("floats", [2.0, 4.0], "exponents"),
    jmax=Param("int", 10, "anchors a = 1 - 2^-j"),
    band=Param("float", 10.0, "allowed max/min"),
)
def run_scarl(prm, seed):
    res = Result()
    inner = InnerFunction.singular(prm["tau"])
    grid = _radius_grid(prm["jmax"])
    rows = []
    for r in prm["r"]:
        rep = scarl_comparison(grid, inner, r)
        rows.extend([r, j, a.real, x] for j, (a, x) in enumerate(zip(rep.points, rep.ratios), start=1))
        res.verdict(f"band r={r:g}", rep.band < prm["band"], f"max/min={rep.band:.6g}")
    res.table("ratios", ["r", "j", "a", "ratio"], rows)
    return res


def run(name, overrides=None, seed=None):
    """Execute one experiment and return its report dictionary."""
    if name not in CATALOG:
        raise KeyError(f"unknown experiment {name!r}")
    exp = CATALOG[name]
    prm = resolve_params(exp, overrides or {})
    seed = DEFAULT_SEED if seed is None else check_seed(seed)
    result = exp.run(prm, seed)
    return {
        "experiment": name,
        "params": prm,
        "seed": seed,
        "tables": result.tables,
        "verdicts": result.verdicts,
        "versions": versions(),
    }


def versions():
    import scipy

    from . import __version__

    return {"mslab": __version__, "numpy": np.__version__, "scipy": scipy.__version__}
