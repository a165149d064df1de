"""Scenario files, seeded scenario generation, suite execution and reports.

A scenario is one verification instance: a time scale, a window [a, b], the
functions f, p, q, w as expression strings, the kernel parameters and the
list of checks to run.  Files are YAML (JSON is valid YAML); every field
name matches the keys of :meth:`Scenario.to_dict`.

Checks never raise out of :func:`run_suite`.  A hypothesis gap such as a
shift point missing from the scale becomes a record with ``error`` set,
counted apart from margin failures.
"""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import identity, inequality
from .calculus import QuadratureConfig
from .errors import (
    ExprError,
    NotContinuousScale,
    ParseError,
    TsineqError,
    ValidationError,
)
from .funcdsl import IDENTITY_PSI, DifferentiableFn, ParamFunction
from .kernel import build_kernel
from .timescale import TimeScale

IDENTITY_CHECK = "lemma3.1"
CHECKS = inequality.THEOREM_IDS + (IDENTITY_CHECK,)
PROFILES = ("discrete", "continuous", "mixed")

_NEEDS_PQ = {"thm3.7", "cor3.8", "cor3.9", "cor3.10", "pach1.2"}
_REDUCTIONS = {"pach1.1": "thm3.2", "pach1.2": "thm3.7"}


@dataclass(frozen=True)
class Scenario:
    id: str
    timescale: TimeScale
    window: tuple[float, float]
    functions: dict
    lam: float
    psi: ParamFunction = IDENTITY_PSI
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    checks: tuple[str, ...] = ("thm3.2",)

    def fn(self, name: str) -> DifferentiableFn:
        return DifferentiableFn.from_text(self.functions[name])

    def kernel(self):
        a, b = self.window
        return build_kernel(self.timescale, a, b, self.lam, self.psi, self.functions.get("w", "t"))

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "timescale": self.timescale.to_pairs(),
            "window": list(self.window),
            "functions": dict(self.functions),
            "lambda": self.lam,
            "psi": self.psi.to_dict(),
            "quadrature": self.quadrature.to_dict(),
            "checks": list(self.checks),
        }

    @classmethod
    def from_dict(cls, d) -> "Scenario":
        if not isinstance(d, dict):
            raise ValidationError("scenario", "expected a mapping at the top level")
        known = {"id", "timescale", "window", "functions", "lambda", "psi", "quadrature", "checks"}
        extra = set(d) - known
        if extra:
            raise ValidationError(sorted(extra)[0], "unknown field")

        sid = d.get("id")
        if not isinstance(sid, str) or not sid:
            raise ValidationError("id", "must be a non-empty string")

        try:
            T = TimeScale.from_pairs(d["timescale"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError("timescale", str(exc)) from None

        try:
            a, b = (float(x) for x in d["window"])
        except (KeyError, TypeError, ValueError):
            raise ValidationError("window", "must be a pair [a, b]") from None
        if not (T.contains(a) and T.contains(b)):
            raise ValidationError("window", f"[{a}, {b}] endpoints must belong to the time scale")
        if not a < b:
            raise ValidationError("window", "needs a < b")

        checks = d.get("checks", ["thm3.2"])
        if not isinstance(checks, list) or not checks or any(c not in CHECKS for c in checks):
            raise ValidationError("checks", f"must be a non-empty list drawn from {list(CHECKS)}")

        funcs = d.get("functions")
        if not isinstance(funcs, dict):
            raise ValidationError("functions", "must map names to expression strings")
        funcs = {str(k): str(v) for k, v in funcs.items()}
        funcs.setdefault("w", "t")
        for name in funcs:
            if name not in ("f", "p", "q", "w"):
                raise ValidationError(f"functions.{name}", "unknown function name")
        needed = {"f"} if any(c not in _NEEDS_PQ for c in checks) else set()
        if any(c in _NEEDS_PQ for c in checks):
            needed |= {"p", "q"}
        for name in sorted(needed - set(funcs)):
            raise ValidationError(f"functions.{name}", "required by the requested checks")
        for name, text in funcs.items():
            try:
                DifferentiableFn.from_text(text)
            except ExprError as exc:
                raise ValidationError(f"functions.{name}", str(exc)) from None

        lam = d.get("lambda")
        if isinstance(lam, bool) or not isinstance(lam, (int, float)) or not 0.0 <= lam <= 1.0:
            raise ValidationError("lambda", f"must be a number in [0, 1], got {lam!r}")

        try:
            psi = ParamFunction.from_dict(d.get("psi", {"kind": "identity"}))
        except (TypeError, KeyError, ValueError) as exc:
            raise ValidationError("psi", str(exc)) from None

        try:
            quad = QuadratureConfig(**d.get("quadrature", {}))
        except (TypeError, ValueError) as exc:
            raise ValidationError("quadrature", str(exc)) from None

        return cls(sid, T, (a, b), funcs, float(lam), psi, quad, tuple(checks))


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    try:
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        where = f"{source}:{mark.line + 1}:{mark.column + 1}" if mark else source
        raise ParseError(f"{where}: {exc.problem}") from None
    except yaml.YAMLError as exc:
        raise ParseError(f"{source}: {exc}") from None
    return Scenario.from_dict(data)


def load_scenario(path) -> Scenario:
    path = Path(path)
    return parse_scenario(path.read_text(), str(path))


def dump_scenario(s: Scenario, path) -> None:
    Path(path).write_text(yaml.safe_dump(s.to_dict(), sort_keys=False))


# ---------------------------------------------------------------------------
# generation

_W_CATALOG = ("t", "cubic", "exp")


def _num(x: float) -> str:
    x = round(float(x), 3) + 0.0
    return f"({x!r})" if x < 0 else repr(x)


def _random_function(rng: np.random.Generator) -> str:
    kind = rng.choice(["poly", "poly", "sin", "exp"])
    if kind == "poly":
        deg = int(rng.integers(0, 5))
        coefs = rng.uniform(-2, 2, deg + 1)
        terms = [_num(coefs[0])] + [f"{_num(c)}*t^{k}" if k > 1 else f"{_num(c)}*t" for k, c in enumerate(coefs) if k]
        return " + ".join(terms)
    amp, k, c = rng.uniform(-2, 2), rng.uniform(-1, 1), rng.uniform(-1, 1)
    if kind == "sin":
        return f"{_num(amp)}*sin({_num(k)}*t + {_num(c)})"
    return f"{_num(amp)}*exp({_num(k)}*t)"


def _random_weight(rng: np.random.Generator) -> str:
    kind = _W_CATALOG[int(rng.integers(len(_W_CATALOG)))]
    if kind == "t":
        return "t"
    if kind == "cubic":
        return f"{_num(rng.uniform(0.5, 2))}*(t + t^3/10)"
    return "exp(t/4)"


def _random_psi(rng: np.random.Generator) -> ParamFunction:
    kind = ("identity", "constant", "power", "table")[int(rng.integers(4))]
    if kind == "identity":
        return IDENTITY_PSI
    if kind == "constant":
        return ParamFunction("constant", value=round(float(rng.uniform()), 3))
    if kind == "power":
        return ParamFunction("power", exponent=round(float(rng.uniform(0.5, 3)), 3))
    mid = round(float(rng.uniform(0.2, 0.8)), 3)
    ys = np.round(rng.uniform(0, 1, 3), 3)
    return ParamFunction("table", points=((0.0, ys[0]), (mid, ys[1]), (1.0, ys[2])))


def _discrete_scale(rng):
    m = int(rng.integers(3, 13))
    start = int(rng.integers(-(m // 2), 1))
    pts = start + np.concatenate(([0], np.cumsum(rng.integers(1, 3, m - 1))))
    ia = int(rng.integers(0, m - 2))
    ib = int(rng.integers(ia + 1, m - 1))
    return TimeScale.points(pts.astype(float).tolist()), (float(pts[ia]), float(pts[ib]))


def _continuous_scale(rng):
    lo = round(float(rng.uniform(-2, 1)), 3)
    hi = round(lo + float(rng.uniform(0.5, 4)), 3)
    if rng.uniform() < 0.5:
        return TimeScale.interval(lo, hi), (lo, hi)
    a, b = sorted(np.round(rng.uniform(lo, hi, 2), 3).tolist())
    if b - a < 0.1:
        a, b = lo, hi
    return TimeScale.interval(lo, hi), (a, b)


def _mixed_scale(rng):
    nseg = int(rng.integers(1, 4))
    # a lone segment needs a later component to put a scattered point in (a, b)
    npts = int(rng.integers(0 if nseg > 1 else 1, 5))
    # the first component is a segment so its right end is a scattered
    # point inside the window; a final isolated point lies beyond b
    kinds = ["seg"] + list(rng.permutation(["seg"] * (nseg - 1) + ["pt"] * npts))
    pairs, x = [], round(float(rng.uniform(-2, 0)), 3)
    for kind in kinds:
        if kind == "seg":
            hi = round(x + float(rng.uniform(0.3, 2)), 3)
            pairs.append([x, hi])
            x = hi
        else:
            pairs.append([x, x])
        x = round(x + float(rng.uniform(0.2, 1.5)), 3)
    pairs.append([x, x])
    first_lo, first_hi = pairs[0]
    a = first_lo if rng.uniform() < 0.5 else round(float(rng.uniform(first_lo, first_hi - 0.1)), 3)
    # b is the left end of some later component (never the trailing point)
    j = int(rng.integers(1, len(pairs) - 1))
    return TimeScale.from_pairs(pairs), (a, float(pairs[j][0]))


_SCALES = {"discrete": _discrete_scale, "continuous": _continuous_scale, "mixed": _mixed_scale}


def generate_scenarios(
    seed: int,
    count: int,
    profile: str,
    checks: tuple[str, ...] = ("thm3.2", "thm3.7"),
    quadrature: QuadratureConfig | None = None,
) -> list[Scenario]:
    """Deterministic per (seed, profile): the same arguments give equal lists."""
    if profile not in _SCALES:
        raise ValueError(f"profile must be one of {PROFILES}, got {profile!r}")
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng([seed, PROFILES.index(profile)])
    quadrature = quadrature or QuadratureConfig()
    out = []
    for i in range(count):
        T, window = _SCALES[profile](rng)
        funcs = {"f": _random_function(rng), "p": _random_function(rng),
                 "q": _random_function(rng), "w": _random_weight(rng)}
        lam = round(float(rng.uniform()), 6)
        psi = _random_psi(rng)
        out.append(Scenario(f"{profile}-{seed}-{i:04d}", T, window, funcs, lam, psi, quadrature, tuple(checks)))
    return out


# ---------------------------------------------------------------------------
# execution


def _require_classic(s: Scenario):
    a, b = s.window
    if s.timescale.continuous_pieces(a, b) != [(a, b)]:
        raise NotContinuousScale("this check needs the window to be a real interval")


def evaluate_check(s: Scenario, check: str):
    """Run one check; returns an InequalityReport, or a list of IdentityResidual for lemma3.1."""
    cfg = s.quadrature
    a, b = s.window
    if check == "pach1.1":
        _require_classic(s)
        return inequality.pachpatte_trapezoid(s.fn("f"), a, b, cfg)
    if check == "pach1.2":
        _require_classic(s)
        return inequality.pachpatte_gruss(s.fn("p"), s.fn("q"), a, b, cfg)
    if check == "cor3.10":
        _require_classic(s)
        return inequality.gruss_corollary_classic(s.fn("p"), s.fn("q"), s.lam, a, b, cfg)
    if check == "cor3.5":
        return inequality.trapezoid_corollary_linear(s.fn("f"), s.timescale, a, b, s.lam, cfg)
    kp = s.kernel()
    if check == IDENTITY_CHECK:
        return identity.montgomery_sweep(s.fn("f"), kp, cfg)
    single = {
        "thm3.2": inequality.trapezoid_verify,
        "cor3.3": inequality.trapezoid_corollary_R,
        "cor3.4": inequality.trapezoid_corollary_wt,
        "cor3.6": inequality.trapezoid_corollary_Z,
    }
    if check in single:
        return single[check](s.fn("f"), kp, cfg)
    pair = {
        "thm3.7": inequality.gruss_verify,
        "cor3.8": inequality.gruss_corollary_R,
        "cor3.9": inequality.gruss_corollary_Z,
    }
    return pair[check](s.fn("p"), s.fn("q"), kp, cfg)


def _identity_record(residuals) -> dict:
    worst = min(residuals, key=lambda r: r.tolerance - abs(r.residual))
    return {
        "lhs": abs(worst.residual),
        "rhs": worst.tolerance,
        "margin": worst.tolerance - abs(worst.residual),
        "slack": 0.0,
        "pass": all(r.passed for r in residuals),
        "components": {"probes": len(residuals), "worst_t": worst.t, "worst_lhs": worst.lhs},
        "notes": [],
    }


def _record(sid: str, check: str, scenario: Scenario) -> dict:
    rec = {"scenario_id": sid, "theorem_id": check, "error": None}
    try:
        result = evaluate_check(scenario, check)
    except TsineqError as exc:
        rec.update(error=type(exc).__name__, message=str(exc))
        return rec
    except Exception as exc:  # isolation: a bug in one check must not sink the suite
        rec.update(error=type(exc).__name__, message=str(exc), unexpected=True)
        return rec
    if check == IDENTITY_CHECK:
        rec.update(_identity_record(result))
    else:
        d = result.to_dict()
        del d["theorem_id"]
        rec.update(d)
    return rec


def run_scenario(scenario: Scenario) -> list[dict]:
    return [_record(scenario.id, c, scenario) for c in scenario.checks]


def _run_from_dict(d: dict) -> list[dict]:
    return run_scenario(Scenario.from_dict(d))


@dataclass
class SuiteReport:
    records: list = field(default_factory=list)
    seed: int | None = None

    @property
    def summary(self) -> dict:
        evaluated = [r for r in self.records if r.get("error") is None]
        margins = [r["margin"] for r in evaluated]
        return {
            "records": len(self.records),
            "passed": sum(1 for r in evaluated if r["pass"]),
            "failed": sum(1 for r in evaluated if not r["pass"]),
            "errors": len(self.records) - len(evaluated),
            "worst_margin": min(margins) if margins else None,
            "seed": self.seed,
        }

    @property
    def failures(self) -> list:
        return [r for r in self.records if r.get("error") is None and not r["pass"]]


def run_suite(scenarios, parallelism: int = 1, seed: int | None = None) -> SuiteReport:
    """Evaluate every (scenario, check) pair, preserving input order."""
    if parallelism < 1:
        raise ValueError("parallelism must be positive")
    scenarios = list(scenarios)
    if parallelism == 1 or len(scenarios) < 2:
        batches = [run_scenario(s) for s in scenarios]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            batches = list(pool.map(_run_from_dict, [s.to_dict() for s in scenarios], chunksize=8))
    return SuiteReport([r for batch in batches for r in batch], seed)


def reduction_check(s: Scenario, check: str) -> dict:
    """Compare a classical statement with the general theorem at lambda = 0, psi = id, w = t.

    The general sides equal the classical ones times a fixed factor; the
    scenario's own lambda, psi and w are overridden.
    """
    if check not in _REDUCTIONS:
        raise ValueError(f"reduction check must be one of {sorted(_REDUCTIONS)}")
    _require_classic(s)
    a, b = s.window
    kp = build_kernel(s.timescale, a, b, 0.0, IDENTITY_PSI, "t")
    cfg = s.quadrature
    if check == "pach1.1":
        classic = inequality.pachpatte_trapezoid(s.fn("f"), a, b, cfg)
        general = inequality.trapezoid_verify(s.fn("f"), kp, cfg)
        factor = inequality.TRAPEZOID_REDUCTION_FACTOR
    else:
        classic = inequality.pachpatte_gruss(s.fn("p"), s.fn("q"), a, b, cfg)
        general = inequality.gruss_verify(s.fn("p"), s.fn("q"), kp, cfg)
        factor = inequality.gruss_reduction_factor(a, b)
    lhs_gap = general.lhs - factor * classic.lhs
    rhs_gap = general.rhs - factor * classic.rhs
    tol = 10 * cfg.abs_tol
    return {
        "scenario_id": s.id, "theorem_id": check, "general_id": general.theorem_id,
        "factor": factor, "classic_lhs": classic.lhs, "classic_rhs": classic.rhs,
        "general_lhs": general.lhs, "general_rhs": general.rhs,
        "lhs_gap": lhs_gap, "rhs_gap": rhs_gap, "tolerance": tol,
        "pass": abs(lhs_gap) <= tol and abs(rhs_gap) <= tol * max(1.0, abs(general.rhs)),
    }


# ---------------------------------------------------------------------------
# reports

CSV_COLUMNS = ("scenario_id", "theorem_id", "lhs", "rhs", "margin", "pass", "error")


def _dumps(obj) -> str:
    # repr floats are the shortest decimal that round-trips, so output is byte-stable
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def report_lines(report: SuiteReport) -> list[str]:
    return [_dumps(r) for r in report.records] + [_dumps({"summary": report.summary})]


def emit_report(report: SuiteReport, fmt: str = "json", path=None, stream=None) -> None:
    """Write newline-delimited JSON (records then a summary line) or CSV."""
    if fmt not in ("json", "csv"):
        raise ValueError("format must be json or csv")
    close = path is not None
    out = open(path, "w", newline="") if close else stream
    try:
        if fmt == "json":
            for line in report_lines(report):
                out.write(line + "\n")
        else:
            writer = csv.writer(out, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for r in report.records:
                writer.writerow(["" if r.get(c) is None else (repr(r[c]) if isinstance(r.get(c), float) else r[c])
                                 for c in CSV_COLUMNS])
    finally:
        if close:
            out.close()


def load_report(path) -> SuiteReport:
    """Inverse of the JSON form of :func:`emit_report`."""
    records, seed = [], None
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        if set(obj) == {"summary"}:
            seed = obj["summary"].get("seed")
        else:
            records.append(obj)
    return SuiteReport(records, seed)


def is_finite_record(r: dict) -> bool:
    return r.get("error") is None and all(math.isfinite(r[k]) for k in ("lhs", "rhs", "margin"))
