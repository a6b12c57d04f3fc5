"""Experiment runners behind the ``gal-lab`` command.

Each runner takes a validated config dict and returns ``(rows, summary)``:
``rows`` is a list of flat dicts (one CSV line each) and ``summary`` holds
fitted slopes and other per-run aggregates for the JSON sidecar.
"""

from fractions import Fraction
import math
import re
import time

import numpy as np

from . import __version__
from .energy import additive_energy, mult_energy_of_r, rep_function, ratio_restricted_energy
from .errors import InvalidArgument
from .gcdsum import WeightFunction, gcd_sum_naive, gcd_sum_of_differences
from .paircorr import F_samples, expected_mean_F, pair_correlation, variance_upper_panel
from .randmult import dirichlet_moment_estimate, identity_check, moment_estimate, second_moment_exact
from .sequences import RANDOM_SUBSET_ALGORITHM, gen_interval, gen_random_subset, gen_squares, load_set
from .stats import estimate


class ConfigError(InvalidArgument):
    """Invalid experiment configuration."""


class OracleMismatch(ArithmeticError):
    """A computed value disagrees with its independent check."""

    def __init__(self, row, message):
        self.row = row
        super().__init__(f"row {row}: {message}")


def fit_slope(rows):
    """Least-squares slope of ln y against ln x over ``(x, y)`` pairs."""
    rows = list(rows)
    if len(rows) < 3:
        raise InvalidArgument("fit_slope needs at least 3 points")
    x = np.array([r[0] for r in rows], dtype=float)
    y = np.array([r[1] for r in rows], dtype=float)
    if np.any(x <= 0) or np.any(y <= 0):
        raise InvalidArgument("fit_slope needs positive x and y")
    lx, ly = np.log(x), np.log(y)
    lx0 = lx - lx.mean()
    return float(np.dot(lx0, ly - ly.mean()) / np.dot(lx0, lx0))


# ---------------------------------------------------------------- set specs

_SPEC = re.compile(r"^\s*([a-z]+)\s*\((.*)\)\s*$")


def parse_set_spec(text):
    """Build an IntegerSet from ``interval(N)``, ``squares(N)``, ``random(U,N,seed)`` or ``file(path)``."""
    m = _SPEC.match(text)
    if not m:
        raise ConfigError(f"bad set spec {text!r}")
    name, args = m.group(1), m.group(2).strip()
    if name == "file":
        return load_set(args)
    try:
        nums = [int(a) for a in args.split(",")] if args else []
    except ValueError:
        raise ConfigError(f"bad arguments in set spec {text!r}") from None
    if name in ("interval", "squares") and len(nums) == 1:
        return (gen_interval if name == "interval" else gen_squares)(nums[0])
    if name == "random" and len(nums) in (2, 3):
        return gen_random_subset(nums[0], nums[1], nums[2] if len(nums) == 3 else 0)
    raise ConfigError(f"bad set spec {text!r}")


def parse_weight_spec(text):
    """``indicator(<set spec>)`` or ``rep(<set spec>)``."""
    m = re.match(r"^\s*(indicator|rep)\s*\((.*)\)\s*$", text)
    if not m:
        raise ConfigError(f"bad weight spec {text!r}")
    A = parse_set_spec(m.group(2))
    return WeightFunction.indicator(A) if m.group(1) == "indicator" else WeightFunction.from_rep(A)


def family_set(family, N, seed, universe_factor):
    if family == "interval":
        return gen_interval(N)
    if family == "squares":
        return gen_squares(N)
    if family == "random":
        return gen_random_subset(universe_factor * N, N, seed)
    raise ConfigError(f"unknown family {family!r}")


# ---------------------------------------------------------------- schema

def _int(v):
    return int(v)


def _pos_int(v):
    v = int(v)
    if v < 1:
        raise ValueError("must be positive")
    return v


def _float(v):
    return float(v)


def _int_list(v):
    return [_pos_int(x) for x in str(v).split(",") if x.strip()]


def _float_list(v):
    return [float(x) for x in str(v).split(",") if x.strip()]


def _bool(v):
    s = str(v).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected a boolean")


def _family(v):
    if v not in ("interval", "squares", "random"):
        raise ValueError("family must be interval, squares or random")
    return v


COMMON = {"output": (str, None), "seed": (_int, 0)}

SCHEMA = {
    "gcdsum-scaling": {
        "family": (_family, "interval"),
        "sizes": (_int_list, "16,32,64,128,256"),
        "alpha": (_float, 0.5),
        "universe_factor": (_pos_int, 100),
        "verify": (_bool, False),
    },
    "mult-energy-scaling": {
        "family": (_family, "interval"),
        "sizes": (_int_list, "16,32,64,128,256"),
        "universe_factor": (_pos_int, 100),
    },
    "ratio-lemma": {
        "sizes": (_int_list, "16,32,64,128"),
        "z_sizes": (_int_list, "1,4,16,64"),
        "trials": (_pos_int, 2),
        "density": (_pos_int, 2),
    },
    "identity-check": {
        "f": (parse_weight_spec, "indicator(interval(20))"),
        "alpha": (_float_list, "0.6,0.75,1"),
        "T": (_pos_int, 1000),
        "samples": (_pos_int, 100000),
    },
    "moments": {
        "alpha": (_float_list, "0.6,0.75,1"),
        "l": (_float_list, "1,2,3"),
        "T": (_pos_int, 1000),
        "samples": (_pos_int, 10000),
    },
    "paircorr": {
        "set": (parse_set_spec, "squares(1000)"),
        "alpha": (_float_list, ""),
        "s": (_float, 1.0),
        "samples": (_pos_int, 200),
    },
    "variance-panel": {
        "family": (_family, "squares"),
        "sizes": (_int_list, "100,200,400"),
        "s": (_float, 1.0),
        "samples": (_pos_int, 500),
        "universe_factor": (_pos_int, 100),
    },
}


def resolve_config(experiment, raw):
    """Validate raw string settings against the experiment schema.

    Returns ``(resolved, echo)``: typed values, and the string form of every
    setting (defaults included) for the metadata sidecar.
    """
    if experiment not in SCHEMA:
        raise ConfigError(f"unknown experiment {experiment!r}; choose from {', '.join(SCHEMA)}")
    raw = dict(raw)
    if raw.pop("experiment", experiment) != experiment:
        raise ConfigError("config file names a different experiment")
    schema = {**COMMON, **SCHEMA[experiment]}
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError(f"unknown config key(s) for {experiment}: {', '.join(unknown)}")
    resolved, echo = {}, {}
    for key, (conv, default) in schema.items():
        text = raw.get(key, default)
        if text is None:
            if key == "output":
                text = f"{experiment}.csv"
            else:
                raise ConfigError(f"missing required key {key!r}")
        try:
            resolved[key] = conv(text)
        except ConfigError:
            raise
        except (ValueError, TypeError, OSError) as exc:
            raise ConfigError(f"bad value for {key!r}: {text!r} ({exc})") from None
        echo[key] = str(text)
    return resolved, echo


# ---------------------------------------------------------------- runners

def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, (time.perf_counter() - t0) * 1e3


def run_gcdsum_scaling(cfg, timings):
    rows = []
    for N in cfg["sizes"]:
        A = family_set(cfg["family"], N, cfg["seed"], cfg["universe_factor"])
        rep, ms = _timed(gcd_sum_of_differences, A, cfg["alpha"])
        timings.append(ms)
        E = additive_energy(A)
        row = {"N": N, "family": cfg["family"], "alpha": cfg["alpha"], "additive_energy": E,
               "gcd_sum": rep.value.real, "ratio": rep.value.real / E}
        if cfg["verify"]:
            naive = gcd_sum_naive(WeightFunction.from_rep(A), cfg["alpha"]).value.real
            if abs(naive - rep.value.real) > 1e-9 * (abs(naive) + 1):
                raise OracleMismatch(len(rows), f"divisor {rep.value.real!r} != naive {naive!r}")
            row["gcd_sum_naive"] = naive
        rows.append(row)
    summary = {}
    if len(rows) >= 3:
        summary["slope_gcd_sum"] = fit_slope((r["N"], r["gcd_sum"]) for r in rows)
        summary["slope_additive_energy"] = fit_slope((r["N"], r["additive_energy"]) for r in rows)
    return rows, summary


def run_mult_energy_scaling(cfg, timings):
    rows = []
    for N in cfg["sizes"]:
        A = family_set(cfg["family"], N, cfg["seed"], cfg["universe_factor"])
        M, ms = _timed(mult_energy_of_r, A)
        timings.append(ms)
        rows.append({"N": N, "family": cfg["family"], "mult_energy": M,
                     "normalized": M / (N**6 * math.log(N))})
    summary = {}
    if len(rows) >= 3:
        summary["slope_mult_energy"] = fit_slope((r["N"], r["mult_energy"]) for r in rows)
    return rows, summary


def random_ratio_set(A, size, rng):
    """`size` distinct ratios n/m of positive differences of A, drawn from random pairs."""
    els = np.asarray(A.elements, dtype=np.int64)
    if len(els) < 2:
        raise InvalidArgument("need |A| >= 2 to form ratios")
    distinct = len(rep_function(A).counts)
    size = min(size, distinct * distinct)
    Z = set()
    while len(Z) < size:
        i, j, k, l = rng.integers(0, len(els), size=4)
        n, m = abs(int(els[i] - els[j])), abs(int(els[k] - els[l]))
        if n and m:
            Z.add(Fraction(n, m))
    return sorted(Z)


def ratio_lemma_sweep(sizes, z_sizes, trials, density, seed):
    """Rows of restricted ratio energy normalised by N^3 |Z|^(1/2)."""
    rows = []
    for N in sizes:
        for zs in z_sizes:
            for t in range(trials):
                rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(N, zs, t))))
                A = gen_random_subset(density * N, N, int(rng.integers(0, 2**63)))
                Z = random_ratio_set(A, zs, rng)
                e = ratio_restricted_energy(A, Z)
                rows.append({"trial": t, "N": N, "Z_size": len(Z), "energy": e,
                             "constant": e / (N**3 * math.sqrt(len(Z)))})
    return rows


def run_ratio_lemma(cfg, timings):
    rows, ms = _timed(ratio_lemma_sweep, cfg["sizes"], cfg["z_sizes"], cfg["trials"], cfg["density"], cfg["seed"])
    timings.append(ms)
    return rows, {"max_constant": max(r["constant"] for r in rows)}


def run_identity_check(cfg, timings):
    f = cfg["f"]
    rows = []
    est, ms = _timed(dirichlet_moment_estimate, f, cfg["samples"], cfg["seed"])
    timings.append(ms)
    rows.append({"quantity": "E|D|^2", "alpha": "", "T": f.keys[-1], "estimate": est.mean.real,
                 "std_error": est.std_error, "reference": f.l2sq, "z_score": est.z_score(f.l2sq)})
    for alpha in cfg["alpha"]:
        ic, ms = _timed(identity_check, f, alpha, cfg["T"], cfg["samples"], cfg["seed"])
        timings.append(ms)
        rows.append({"quantity": "E|zeta_T D|^2", "alpha": alpha, "T": cfg["T"], "estimate": ic.estimate.mean.real,
                     "std_error": ic.estimate.std_error, "reference": ic.reference, "z_score": ic.z_score})
    for i, r in enumerate(rows):
        if r["z_score"] > 4.0:
            raise OracleMismatch(i, f"{r['quantity']} estimate is {r['z_score']:.2f} standard errors from its reference")
    return rows, {"max_z_score": max(r["z_score"] for r in rows)}


def run_moments(cfg, timings):
    rows = []
    for alpha in cfg["alpha"]:
        for l in cfg["l"]:
            est, ms = _timed(moment_estimate, alpha, l, cfg["T"], cfg["samples"], cfg["seed"])
            timings.append(ms)
            row = {"alpha": alpha, "l": l, "T": cfg["T"], "estimate": est.mean.real, "std_error": est.std_error,
                   "log_estimate": math.log(est.mean.real), "exact": ""}
            if l == 1:
                row["exact"] = second_moment_exact(alpha, cfg["T"])
            rows.append(row)
    return rows, {}


def run_paircorr(cfg, timings):
    A, s = cfg["set"], cfg["s"]
    if cfg["alpha"]:
        alphas, sampled = cfg["alpha"], False
    else:
        alphas, _ = F_samples(A, s, cfg["samples"], cfg["seed"])
        sampled = True
    rows = []
    for a in alphas:
        res, ms = _timed(pair_correlation, A, float(a), s)
        timings.append(ms)
        if pair_correlation(A, float(a), s, method="direct").pairs != res.pairs:
            raise OracleMismatch(len(rows), "sorted and direct pair counts differ")
        rows.append({"alpha": float(a), "s": s, "N": res.N, "F": res.F, "pairs": res.pairs,
                     "borderline": res.borderline})
    summary = {"expected_mean_F": expected_mean_F(len(A), s) if s / len(A) < 0.5 else None}
    if sampled and len(rows) >= 2:
        est = estimate([r["F"] for r in rows])
        summary.update(mean_F=est.mean.real, mean_F_std_error=est.std_error,
                       fraction_within_half=float(np.mean([abs(r["F"] - 2 * s) <= 0.5 for r in rows])))
    return rows, summary


def run_variance_panel(cfg, timings):
    rows = []
    for N in cfg["sizes"]:
        A = family_set(cfg["family"], N, cfg["seed"], cfg["universe_factor"])
        t0 = time.perf_counter()
        _, F = F_samples(A, cfg["s"], cfg["samples"], cfg["seed"])
        var = estimate((F - 2.0 * cfg["s"]) ** 2)
        panel = variance_upper_panel(A, cfg["s"])
        timings.append((time.perf_counter() - t0) * 1e3)
        E = additive_energy(A)
        rows.append({"N": N, "family": cfg["family"], "s": cfg["s"], "variance": var.mean.real,
                     "std_error": var.std_error, "panel": panel, "additive_energy": E, "energy_ratio": E / N**3})
    return rows, {}


RUNNERS = {
    "gcdsum-scaling": run_gcdsum_scaling,
    "mult-energy-scaling": run_mult_energy_scaling,
    "ratio-lemma": run_ratio_lemma,
    "identity-check": run_identity_check,
    "moments": run_moments,
    "paircorr": run_paircorr,
    "variance-panel": run_variance_panel,
}


def run_experiment(experiment, cfg):
    """Run one experiment; rows get the shared prefix columns (experiment, row, seed, version)."""
    timings = []
    rows, summary = RUNNERS[experiment](cfg, timings)
    out = [{"experiment": experiment, "row": i, "seed": cfg["seed"], "version": __version__, **r}
           for i, r in enumerate(rows)]
    summary = {**summary, "random_subset_algorithm": RANDOM_SUBSET_ALGORITHM}
    return out, summary, timings
