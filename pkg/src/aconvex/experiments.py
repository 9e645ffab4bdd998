"""The acceptance suite as plain functions.

Each ``criterion_*`` returns a :class:`CriterionResult` whose ``report`` line
depends only on the configuration (never on timing), so two runs with the
same seed print byte-identical reports.  Wall-clock time is kept separately
and compared against the budget in ``passed``.
"""
from __future__ import annotations

import io
import math
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import _segments as seg
from .cli import run_command
from .errors import GeometryError, SearchExhausted
from .fileio import serialize_polygon
from .geom_core import (
    Polygon,
    Vec2,
    aco_bruteforce,
    aco_open,
    aco_polygon,
    geom_eps,
    is_opposite,
    is_simple,
    rot,
)
from .minkowski import convex_sum, member, member_many, minkowski_sum, probe_agreement
from .random_shapes import (
    convex_hull,
    random_certified,
    random_chain_pair,
    random_convex,
    random_histogram,
    random_looping_chain,
    random_reflex,
    random_star,
)
from .separation import TOL_SEP, region_disjoint, separate
from .simplify import eliminate_loops_traced, is_general_position, perturb_general_position
from .sorted_sum import param_maps, sorted_sum, uniform_point

U_SHAPE = [(0, 0), (4, 0), (4, 4), (3, 4), (3, 1), (1, 1), (1, 3.5), (2.8, 3.5), (2.8, 4), (0, 4)]
SMALL_SQUARE = [(0, 0), (0.3, 0), (0.3, 0.3), (0, 0.3)]


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 20240521
    n_max: int = 32
    aco_cases: int = 500
    convex_cases: int = 200
    reflex_cases: int = 200
    chain_pairs: int = 300
    chain_samples: int = 100
    loop_cases: int = 200
    sum_pairs: int = 200
    convex_pair_share: float = 0.25
    probe_side: int = 50
    separation_cases: int = 100
    exhaust_budget: float = 0.01
    budgets: dict = field(default_factory=lambda: {1: 10.0, 3: 20.0, 5: 60.0})


@dataclass
class CriterionResult:
    number: int
    name: str
    ok: bool
    report: str
    seconds: float = 0.0
    budget: float | None = None
    log: list[str] = field(default_factory=list)

    @property
    def within_budget(self) -> bool:
        return self.budget is None or self.seconds < self.budget

    @property
    def passed(self) -> bool:
        return self.ok and self.within_budget

    def line(self) -> str:
        timing = f"{self.seconds:.2f}s" + (f"/{self.budget:.0f}s" if self.budget else "")
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.report} time={timing}"


def _rng(cfg: SuiteConfig, stream: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, stream])


def _g(v: float) -> str:
    return f"{v:.3e}"


def criterion_1(cfg: SuiteConfig) -> CriterionResult:
    rng = _rng(cfg, 1)
    worst, bad = 0.0, 0
    for i in range(cfg.aco_cases):
        if i % 2:
            k = random_star(rng, int(rng.integers(3, cfg.n_max + 1)))
        else:
            k = random_histogram(rng, int(rng.integers(1, cfg.n_max // 4 + 1)),
                                 two_sided=bool(rng.integers(0, 2)), transform=True)
        err = abs(aco_polygon(k).value - aco_bruteforce(k).value)
        worst = max(worst, err)
        bad += err > 1e-9
    return CriterionResult(1, "aco_oracle", bad == 0,
                           f"criterion=1 cases={cfg.aco_cases} mismatches={bad} max_err={_g(worst)}")


def criterion_2(cfg: SuiteConfig) -> CriterionResult:
    rng = _rng(cfg, 2)
    convex_bad = sum(abs(aco_polygon(random_convex(rng, int(rng.integers(3, cfg.n_max + 1)))).value) > 1e-9
                     for _ in range(cfg.convex_cases))
    worst = -math.inf
    reflex_bad = 0
    for _ in range(cfg.reflex_cases):
        a = aco_polygon(random_reflex(rng, cfg.n_max)).value
        worst = max(worst, a)
        reflex_bad += not a < -1e-6
    return CriterionResult(
        2, "convexity", convex_bad == 0 and reflex_bad == 0,
        f"criterion=2 convex={cfg.convex_cases} convex_nonzero={convex_bad} "
        f"reflex={cfg.reflex_cases} reflex_not_negative={reflex_bad} max_reflex_aco={_g(worst)}")


def criterion_3(cfg: SuiteConfig) -> CriterionResult:
    rng = _rng(cfg, 3)
    fails = {"reverse": 0, "rot": 0, "aco": 0, "param": 0}
    worst = 0.0
    ts = np.linspace(0.0, 1.0, cfg.chain_samples)
    for _ in range(cfg.chain_pairs):
        p, q = random_chain_pair(rng)
        m = sorted_sum(p, q)
        r = m.result
        sh = r.shifts
        fails["reverse"] += any(is_opposite(a.direction, b.direction) for a, b in zip(sh, sh[1:]))
        fails["rot"] += abs(rot(r) - rot(p)) > 1e-9
        fails["aco"] += aco_open(r).value < min(aco_open(p).value, aco_open(q).value) - 1e-9
        phi, psi = param_maps(m, p, q)
        err = max((uniform_point(r, t) - uniform_point(p, phi(t)) - uniform_point(q, psi(t))).norm()
                  for t in ts)
        worst = max(worst, err)
        fails["param"] += err > 1e-9
    summary = " ".join(f"{k}_fail={v}" for k, v in fails.items())
    return CriterionResult(3, "sorted_sum", not any(fails.values()),
                           f"criterion=3 pairs={cfg.chain_pairs} {summary} max_param_err={_g(worst)}")


def criterion_4(cfg: SuiteConfig) -> CriterionResult:
    rng = _rng(cfg, 4)
    fails = {"simple": 0, "monotone": 0, "multiple": 0}
    loops = 0
    for i in range(cfg.loop_cases):
        p = random_looping_chain(rng)
        if not is_general_position(p):
            p = perturb_general_position(p, seed=cfg.seed + i)
        tr = eliminate_loops_traced(p)
        loops += len(tr.events)
        fails["simple"] += not is_simple(tr.result)
        steps = np.diff(tr.rotations)
        fails["monotone"] += bool(np.any(steps > 1e-9))
        fails["multiple"] += bool(np.any(np.abs(steps - 2 * math.pi * np.round(steps / (2 * math.pi))) > 1e-9))
    summary = " ".join(f"{k}_fail={v}" for k, v in fails.items())
    return CriterionResult(4, "loop_elimination", not any(fails.values()),
                           f"criterion=4 chains={cfg.loop_cases} loops_removed={loops} {summary}")


def _same_cycle(a: Polygon, b: Polygon, tol: float) -> bool:
    av = [v.as_tuple() for v in a.vertices]
    bv = [v.as_tuple() for v in b.vertices]
    if len(av) != len(bv):
        return False
    s = min(range(len(av)), key=lambda j: math.dist(av[j], bv[0]))
    av = av[s:] + av[:s]
    return all(math.dist(x, y) <= tol for x, y in zip(av, bv))


def criterion_5(cfg: SuiteConfig) -> CriterionResult:
    rng = _rng(cfg, 5)
    fails = {"error": 0, "simple": 0, "aco": 0, "probes": 0, "convex": 0}
    checked = convex_pairs = 0
    log = []
    for i in range(cfg.sum_pairs):
        convex = rng.uniform() < cfg.convex_pair_share
        if convex:
            k = random_convex(rng, int(rng.integers(3, cfg.n_max + 1)))
            l = random_convex(rng, int(rng.integers(3, cfg.n_max + 1)))
            convex_pairs += 1
        else:
            k, l = random_certified(rng, cfg.n_max), random_certified(rng, cfg.n_max)
        try:
            res = minkowski_sum(k, l)
        except GeometryError as exc:
            fails["error"] += 1
            log.append(f"pair {i}: {exc.reason}: {exc}")
            continue
        s = res.polygon
        fails["simple"] += not is_simple(s.boundary)
        fails["aco"] += aco_polygon(s).value < res.certificate.aco_lower_bound - 1e-9
        n, bad = probe_agreement(k, l, s, cfg.probe_side)
        checked += n
        if bad:
            fails["probes"] += 1
            log.append(f"pair {i}: {bad} probe disagreements")
        if convex:
            fails["convex"] += not _same_cycle(s, convex_sum(k, l), geom_eps(s.vertices))
    summary = " ".join(f"{k}_fail={v}" for k, v in fails.items())
    return CriterionResult(5, "minkowski_sum", not any(fails.values()),
                           f"criterion=5 pairs={cfg.sum_pairs} convex_pairs={convex_pairs} "
                           f"probes={checked} {summary}", log=log)


def _exterior_point(rng: np.random.Generator, k: Polygon) -> Vec2:
    x0, y0, x1, y1 = k.bbox()
    w, h = x1 - x0, y1 - y0
    verts = np.asarray([v.as_tuple() for v in k.vertices])
    while True:
        x, y = rng.uniform(x0 - 0.3 * w, x1 + 0.3 * w), rng.uniform(y0 - 0.3 * h, y1 + 0.3 * h)
        px, py = np.array([x]), np.array([y])
        if not seg.points_in_polygon(px, py, verts)[0] and seg.distance_to_ring(px, py, verts)[0] > 1e3 * k.eps:
            return Vec2(x, y)


def criterion_6(cfg: SuiteConfig) -> CriterionResult:
    rng = _rng(cfg, 6)
    exhausted = convex_exhausted = invalid = convex_cases = 0
    log = []
    for i in range(cfg.separation_cases):
        convex = i % 4 == 0
        k = random_convex(rng, int(rng.integers(3, cfg.n_max + 1))) if convex else random_certified(rng, cfg.n_max)
        convex_cases += convex
        x = _exterior_point(rng, k)
        a = aco_polygon(k).value
        try:
            w = separate(k, x)
        except SearchExhausted:
            exhausted += 1
            convex_exhausted += convex
            log.append(f"case {i}: search exhausted at x=({x.x:.12g}, {x.y:.12g})")
            continue
        if not (w.measure >= math.pi + a - TOL_SEP and region_disjoint(w, k) and w.apex == x):
            invalid += 1
            log.append(f"case {i}: invalid witness")
    ok = invalid == 0 and convex_exhausted == 0 and exhausted <= cfg.exhaust_budget * cfg.separation_cases
    return CriterionResult(6, "separation", ok,
                           f"criterion=6 cases={cfg.separation_cases} convex_cases={convex_cases} "
                           f"invalid={invalid} exhausted={exhausted} convex_exhausted={convex_exhausted}",
                           log=log)


def hole_evidence(k: Polygon, l: Polygon, p: Vec2, side: int = 60) -> tuple[bool, int, bool]:
    """(member(p), probe-true count, p inside the hull of the probe-true set)."""
    x0, y0, x1, y1 = k.bbox()
    lx0, ly0, lx1, ly1 = l.bbox()
    gx, gy = np.meshgrid(np.linspace(x0 + lx0, x1 + lx1, side), np.linspace(y0 + ly0, y1 + ly1, side))
    xs, ys = gx.ravel(), gy.ravel()
    hit = member_many(k, l, xs, ys)
    hull = convex_hull(zip(xs[hit].tolist(), ys[hit].tolist()))
    inside = bool(seg.points_in_polygon(np.array([p.x]), np.array([p.y]), np.asarray(hull))[0])
    return member(k, l, p), int(hit.sum()), inside


def criterion_7(cfg: SuiteConfig) -> CriterionResult:
    u = Polygon.from_points(U_SHAPE)
    sq = Polygon.from_points(SMALL_SQUARE)
    with tempfile.TemporaryDirectory() as tmp:
        fu, fs = Path(tmp, "ushape.json"), Path(tmp, "square.json")
        fu.write_text(serialize_polygon(u, "ushape"))
        fs.write_text(serialize_polygon(sq, "square"))
        out, err = io.StringIO(), io.StringIO()
        code = run_command(["sum", str(fu), str(fs)], out, err)
    reason = err.getvalue().split()[0] if err.getvalue() else "none"
    p = Vec2(2.0, 2.0)
    is_member, n_true, in_hull = hole_evidence(u, sq, p)
    ok = code == 2 and reason == "error=AcoPreconditionViolated" and not is_member and in_hull
    return CriterionResult(
        7, "negative_control", ok,
        f"criterion=7 aco_u={aco_polygon(u).value:.12g} exit={code} {reason} "
        f"p=(2,2) member={str(is_member).lower()} probe_true={n_true} in_hull={str(in_hull).lower()}")


CRITERIA: dict[int, Callable[[SuiteConfig], CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
    5: criterion_5, 6: criterion_6, 7: criterion_7,
}


def run_criterion(number: int, cfg: SuiteConfig) -> CriterionResult:
    t0 = time.perf_counter()
    res = ALL_CRITERIA[number](cfg)
    res.seconds = time.perf_counter() - t0
    res.budget = cfg.budgets.get(number)
    return res


def run_suite(cfg: SuiteConfig = SuiteConfig()) -> list[CriterionResult]:
    return [run_criterion(n, cfg) for n in sorted(CRITERIA)]


def report(results: list[CriterionResult]) -> str:
    """Timing-free report text, the object of the determinism check."""
    lines = []
    for r in results:
        lines.append(f"{r.report} ok={str(r.ok).lower()}")
        lines.extend(f"  {entry}" for entry in r.log)
    return "\n".join(lines) + "\n"


def criterion_8(cfg: SuiteConfig) -> CriterionResult:
    first, second = report(run_suite(cfg)), report(run_suite(cfg))
    same = first == second
    return CriterionResult(8, "determinism", same,
                           f"criterion=8 runs=2 bytes={len(first.encode())} identical={str(same).lower()}")


# the determinism check reruns the others, so it is kept out of run_suite
ALL_CRITERIA = {**CRITERIA, 8: criterion_8}
