"""Seeded suite runs and report emission."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from .rng import MASK64, SplitMix64
from .scalar import Chart, Scalar
from .sexpr import dumps, print_chart
from .suites import REGISTRY, Instance, Suite

MAX_COMPLEX_DIM = 6
MAX_REAL_DIM = 12


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    suite: str
    complex_dim: int = 2
    real_dim: int = 4
    max_degree: int = 2
    trials: int = 30
    seed: int = 42
    rank: int = 1
    options: tuple = ()

    def __post_init__(self):
        if self.suite not in REGISTRY:
            raise ConfigError(f"unknown suite {self.suite!r}")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.max_degree < 0:
            raise ConfigError("max degree must be non-negative")
        if not 1 <= self.rank <= 4:
            raise ConfigError("rank must be between 1 and 4")
        if not 0 <= self.seed <= MASK64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if not 1 <= self.complex_dim <= MAX_COMPLEX_DIM:
            raise ConfigError(f"complex dimension must be between 1 and {MAX_COMPLEX_DIM}")
        if not 1 <= self.real_dim <= MAX_REAL_DIM:
            raise ConfigError(f"real dimension must be between 1 and {MAX_REAL_DIM}")
        s = self.definition
        if self.dim < s.min_dim:
            raise ConfigError(f"suite {s.id} needs dimension at least {s.min_dim}")

    @property
    def definition(self) -> Suite:
        return REGISTRY[self.suite]

    @property
    def kind(self) -> str:
        return self.definition.kind

    @property
    def dim(self) -> int:
        return self.complex_dim if self.kind == "complex" else self.real_dim

    def chart(self) -> Chart:
        return Chart(self.kind, self.dim)

    def option(self, name: str):
        return dict(self.options).get(name)

    def as_dict(self) -> dict:
        d = {
            "chart": self.kind,
            "dim": self.dim,
            "max_degree": self.max_degree,
            "trials": self.trials,
            "seed": self.seed,
            "rank": self.rank,
        }
        for k, v in self.options:
            d[k] = v
        if self.definition.advisory:
            d["advisory"] = True
            d["tolerance"] = "1e-6 relative"
        return d


@dataclass
class TrialReport:
    suite: str
    trial: int
    passed: bool
    inputs: str | None = None
    residual: str | None = None
    elapsed_ms: float = 0.0


@dataclass
class SuiteResult:
    config: SuiteConfig
    reports: list = field(default_factory=list)
    elapsed_ms: int = 0

    @property
    def passes(self) -> int:
        return sum(r.passed for r in self.reports)

    @property
    def ok(self) -> bool:
        return self.passes == len(self.reports)

    def as_dict(self) -> dict:
        return {
            "suite": self.config.suite,
            "config": self.config.as_dict(),
            "trials": len(self.reports),
            "passes": self.passes,
            "failures": [{"trial": r.trial, "inputs": r.inputs, "residual": r.residual} for r in self.reports if not r.passed],
            "elapsed_ms": self.elapsed_ms,
        }


def random_instance(cfg: SuiteConfig, trial: int) -> Instance:
    """The deterministic instance for ``(cfg.seed, cfg.suite, trial)``."""
    rng = SplitMix64.for_trial(cfg.seed, cfg.suite, trial)
    return cfg.definition.build(rng, cfg.chart(), cfg, trial)


def is_zero(r) -> bool:
    if isinstance(r, Scalar):
        return not r
    if isinstance(r, dict):
        return all(is_zero(v) for v in r.values())
    if isinstance(r, (list, tuple)):
        return all(is_zero(v) for v in r)
    return r.is_zero()


def _dump(v) -> str:
    if hasattr(v, "to_sexpr") and not hasattr(v, "chart"):
        return v.to_sexpr()
    return dumps(v, with_chart=False)


def dump_residual(r) -> str:
    """Nonzero parts of a residual, each preceded by a ``; label`` comment line."""
    if isinstance(r, dict):
        return "\n".join(f"; {k}\n{dump_residual(v)}" for k, v in r.items() if not is_zero(v))
    if isinstance(r, (list, tuple)):
        return "\n".join(f"; probe {i}\n{dump_residual(v)}" for i, v in enumerate(r) if not is_zero(v))
    return _dump(r)


def dump_inputs(cfg: SuiteConfig, trial: int, inst: Instance) -> str:
    params = " ".join(f"{k}={v}" for k, v in inst.params.items())
    head = f"; suite {cfg.suite} seed {cfg.seed} trial {trial}" + (f" {params}" if params else "")
    lines = [head, print_chart(cfg.chart())]
    lines += [_dump(v) for v in inst.inputs]
    return "\n".join(lines)


def run_trial(cfg: SuiteConfig, trial: int, residual_fn=None) -> TrialReport:
    t0 = time.perf_counter()
    inst = random_instance(cfg, trial)
    try:
        r = inst.check() if residual_fn is None else residual_fn(inst)
        passed = is_zero(r)
        res = None if passed else dump_residual(r)
    except (ArithmeticError, ValueError) as exc:
        passed, res = False, f"; error: {type(exc).__name__}: {exc}"
    rep = TrialReport(cfg.suite, trial, passed, elapsed_ms=(time.perf_counter() - t0) * 1000)
    if not passed:
        rep.inputs = dump_inputs(cfg, trial, inst)
        rep.residual = res
    return rep


def run_suite(cfg: SuiteConfig, residual_fn=None) -> SuiteResult:
    """Run every trial of ``cfg``.  ``residual_fn(instance)`` overrides the suite's residual."""
    t0 = time.perf_counter()
    reports = [run_trial(cfg, t, residual_fn) for t in range(cfg.trials)]
    return SuiteResult(cfg, reports, int((time.perf_counter() - t0) * 1000))


def report_json(results: list) -> str:
    objs = [r.as_dict() for r in results]
    return json.dumps(objs[0] if len(objs) == 1 else objs, indent=2) + "\n"


def report_text(results: list) -> str:
    """Tab-separated summary, exact suites first, then the advisory ones, then failure details."""
    lines = ["suite\tpasses\ttrials\tstatus\telapsed_ms"]
    exact = [r for r in results if not r.config.definition.advisory]
    advisory = [r for r in results if r.config.definition.advisory]
    for group, title in ((exact, None), (advisory, "# advisory (numeric)")):
        if group and title:
            lines.append(title)
        for r in group:
            status = "PASS" if r.ok else "FAIL"
            lines.append(f"{r.config.suite}\t{r.passes}\t{len(r.reports)}\t{status}\t{r.elapsed_ms}")
    for r in results:
        for t in r.reports:
            if not t.passed:
                lines.append("")
                lines.append(f"# failure {r.config.suite} trial {t.trial}")
                lines.append(t.inputs)
                lines.append("; residual")
                lines.append(t.residual)
    return "\n".join(lines) + "\n"


def emit_report(results: list, fmt: str = "text", out=None) -> int:
    """Write the report to the text stream ``out`` (or return it on stdout).  Exit status 0 iff all pass."""
    import sys

    text = report_json(results) if fmt == "json" else report_text(results)
    (out or sys.stdout).write(text)
    return 0 if all(r.ok for r in results) else 1


def strip_elapsed(report: str) -> str:
    """A JSON report with every ``elapsed_ms`` removed (the determinism contract)."""
    data = json.loads(report)

    def clean(o):
        if isinstance(o, dict):
            return {k: clean(v) for k, v in o.items() if k != "elapsed_ms"}
        if isinstance(o, list):
            return [clean(v) for v in o]
        return o

    return json.dumps(clean(data), indent=2)
