"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` (or as a script) to see the lines
as they happen; the pytest summary repeats them under "acceptance criteria".
"""
import json
import sys
import time
from pathlib import Path

import pytest

from cartanlab import generators as gen
from cartanlab import signs
from cartanlab.cli import main
from cartanlab.forms import delbar, delop, exterior_d, lie_bracket, lie_derivative, wedge
from cartanlab.gencomplex import gualtieri_residual, inner_product
from cartanlab.harness import SuiteConfig, run_suite, strip_elapsed
from cartanlab.rng import SplitMix64
from cartanlab.scalar import Chart
from conftest import ACCEPTANCE_LINES

DOCS = Path(__file__).resolve().parents[1] / "docs" / "signs.md"


class Criterion:
    """Collects named checks; on exit prints and records one PASS/FAIL line."""

    def __init__(self, number: int, title: str, limit_s: float):
        self.number, self.title, self.limit = number, title, limit_s
        self.failed: list[str] = []

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def check(self, name: str, ok: bool):
        if not ok:
            self.failed.append(name)

    def suite(self, name: str, suite: str, **kw) -> None:
        res = run_suite(SuiteConfig(suite, **kw))
        self.check(f"{name} {res.passes}/{len(res.reports)}", res.ok)

    def __exit__(self, exc_type, exc, tb):
        secs = time.perf_counter() - self.t0
        if exc_type is not None:
            self.failed.append(f"{exc_type.__name__}: {exc}")
        if secs > self.limit:
            self.failed.append(f"over the {self.limit:.0f}s budget")
        status = "FAIL" if self.failed else "PASS"
        line = f"{status} criterion {self.number}: {self.title} ({secs:.1f}s)"
        if self.failed:
            line += " :: " + "; ".join(self.failed)
        print(line)
        ACCEPTANCE_LINES.append(line)
        assert not self.failed, line
        return False


def test_kernel():
    with Criterion(1, "d^2, del^2, delbar^2, del delbar + delbar del, Leibniz, Jacobi", 30) as c:
        for n in (1, 2, 3):
            c.suite(f"ddzero n={n}", "ddzero", complex_dim=n, trials=200)
        c.suite("dolbeault", "dolbeault", trials=500)
        ch = Chart.complex(2)
        bad = 0
        for i in range(500):
            rng = SplitMix64.for_trial(42, "acceptance/leibniz", i)
            k = rng.randint(0, 4)
            a, b = gen.form(rng, ch, 2, degree=k, rational=i % 2 == 1), gen.form(rng, ch, 2)
            X = gen.vector(rng, ch, 2)
            s = -1 if k % 2 else 1
            for r in (
                exterior_d(wedge(a, b)) - wedge(exterior_d(a), b) - wedge(a, exterior_d(b)) * s,
                delop(wedge(a, b)) - wedge(delop(a), b) - wedge(a, delop(b)) * s,
                delbar(wedge(a, b)) - wedge(delbar(a), b) - wedge(a, delbar(b)) * s,
                lie_derivative(X, wedge(a, b)) - wedge(lie_derivative(X, a), b) - wedge(a, lie_derivative(X, b)),
            ):
                bad += not r.is_zero()
        c.check(f"Leibniz failures {bad}", bad == 0)
        bad = 0
        for i in range(100):
            rng = SplitMix64.for_trial(42, "acceptance/jacobi", i)
            X, Y, Z = (gen.vector(rng, ch, 2, rational=i % 2 == 1) for _ in range(3))
            j = lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) + lie_bracket(Z, lie_bracket(X, Y))
            bad += not j.is_zero()
        c.check(f"Jacobi failures {bad}", bad == 0)


def test_contracted_commutators():
    with Criterion(2, "lemma21 over connection x rank x dimension, lie5, one_form_pairing, cd1", 120) as c:
        for theta in ("zero", "random", "chern"):
            for rank in (1, 2):
                for n in (1, 2):
                    c.suite(
                        f"lemma21 {theta} r={rank} n={n}",
                        "lemma21",
                        complex_dim=n,
                        rank=rank,
                        trials=50,
                        options=(("theta", theta),),
                    )
        for s in ("lie5", "one_form_pairing", "cd1"):
            c.suite(s, s, trials=50)


def test_polyvector_identities():
    with Criterion(3, "polyvector-valued form identities, exact", 300) as c:
        for s in ("prop32", "remark33_bar", "remark33_del", "remark33_d", "cor35", "cr_sign", "ti1_equiv"):
            c.suite(s, s)
        for rank in (1, 2):
            c.suite(f"thm34 r={rank}", "thm34", rank=rank)
        for n in (2, 3):
            for s in ("prop36_1", "prop36_2", "prop36_3", "tian"):
                c.suite(f"{s} n={n}", s, complex_dim=n)
        c.suite("todorov zbar generator", "todorov", options=(("generator", "zbar"),))
        c.suite("todorov divergence-free generator", "todorov")


def _gualtieri_negative_control(c: Criterion):
    # with the pairing term dropped, every non-isotropic pair with d rho != 0 must fail
    ch = Chart.real(4)
    seen = caught = 0
    for i in range(50):
        rng = SplitMix64.for_trial(42, "acceptance/gualtieri-negative", i)
        A, B = gen.section(rng, ch, 2), gen.section(rng, ch, 2)
        rho = gen.form(rng, ch, 2)
        if inner_product(A, B).is_zero() or exterior_d(rho).is_zero():
            continue
        seen += 1
        caught += not gualtieri_residual(A, B, rho, pairing=False).is_zero()
    c.check(f"negative control {caught}/{seen}", seen > 0 and caught == seen)


def test_generalized_geometry():
    with Criterion(4, "generalized-geometry identities and the word/contraction crosscheck", 300) as c:
        c.suite("gualtieri", "gualtieri", trials=50)
        _gualtieri_negative_control(c)
        for m in (3, 4):
            c.suite(f"prop42 m={m}", "prop42", real_dim=m, trials=360)
            c.suite(f"initial2 m={m}", "initial2", real_dim=m, trials=60)
            c.suite(f"claim43 m={m}", "claim43", real_dim=m, trials=60)
        c.suite("cor44", "cor44")
        for rank in (1, 2):
            c.suite(f"cor45_crosscheck r={rank}", "cor45_crosscheck", rank=rank, trials=20)
        for n in (2, 3):
            c.suite(f"cor46 n={n}", "cor46", complex_dim=n, trials=72)


def test_courant():
    with Criterion(5, "Courant antisymmetry and projection", 60) as c:
        c.suite("courant_antisym", "courant_antisym", trials=100)
        c.suite("courant_projection", "courant_projection", trials=100)


def test_determinism(tmp_path, capsys):
    with Criterion(6, "two seed-42 runs give identical JSON apart from elapsed_ms", 120) as c:
        reports = []
        for k in range(2):
            out = tmp_path / f"run{k}.json"
            code = main(["verify", "--suite", "all", "--seed", "42", "--format", "json", "--out", str(out)])
            c.check(f"run {k} exit {code}", code == 0)
            reports.append(strip_elapsed(out.read_text()))
        capsys.readouterr()
        c.check("identical", reports[0] == reports[1])
        c.check("all suites present", len(json.loads(reports[0])) == 32)


def test_finite_difference():
    with Criterion(7, "finite differences: <1e-6 relative, exactly 0 for degree <= 2 polynomials", 60) as c:
        res = run_suite(SuiteConfig("finite_difference", trials=30))
        c.check(f"finite_difference {res.passes}/30", res.ok)
        c.check("exact and rational trials both present", 0 < sum(t % 2 == 0 for t in range(30)) < 30)


def test_sign_ledger():
    with Criterion(8, "sign ledger records the resolved choices with oracle transcripts", 60) as c:
        text = DOCS.read_text(encoding="utf-8")
        body = text.split("<!-- transcript:begin -->", 1)[1].split("<!-- transcript:end -->", 1)[0]
        body = body.strip().removeprefix("```text").removesuffix("```").strip()
        c.check("transcript regenerates", body == signs.transcript().strip())
        for word in ("sn_bracket", "vvf_wedge", "grouping"):
            c.check(f"mentions {word}", word in text)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
