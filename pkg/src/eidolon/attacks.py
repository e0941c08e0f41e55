"""Key-recovery attack harness: DSatur, an exact branch-and-bound coloring
solver, analytic reference curves, and the planted-recovery experiment
pipeline.

Recovery means producing any valid coloring with at most the planted number
of colors; that is enough to impersonate the signer, so matching the planted
color classes themselves is not required.
"""

from __future__ import annotations

import csv
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .graphs import Coloring, Graph, PartitionSpec, generate_er, generate_planted

STATUS_FOUND = "found"
STATUS_IMPOSSIBLE = "impossible"
STATUS_TIMEOUT = "timeout"

CSV_FIELDS = [
    "n", "k", "density", "seed", "instance_kind", "solver",
    "colors_used", "conflicts", "recovered", "wall_ms", "timeout",
]


@dataclass(frozen=True)
class SolveResult:
    status: str  # found | impossible | timeout
    coloring: Coloring | None = None


@dataclass(frozen=True)
class ChromaticResult:
    status: str  # exact | timeout
    chi: int  # exact chromatic number, or best upper bound on timeout
    coloring: Coloring


@dataclass(frozen=True)
class AttackReport:
    solver: str
    n: int
    k: int
    density: float
    seed: int
    instance_kind: str  # planted | er
    colors_used: int
    conflicts: int
    recovered: bool
    wall_ms: float
    timeout: bool = False

    def csv_row(self) -> dict:
        return {
            "n": self.n, "k": self.k, "density": self.density, "seed": self.seed,
            "instance_kind": self.instance_kind, "solver": self.solver,
            "colors_used": self.colors_used, "conflicts": self.conflicts,
            "recovered": int(self.recovered), "wall_ms": f"{self.wall_ms:.3f}",
            "timeout": int(self.timeout),
        }


def dsatur(g: Graph) -> Coloring:
    """Brelaz's saturation-degree greedy coloring. Always conflict-free.

    Vertex choice: maximum saturation degree, ties broken by maximum degree in
    the uncolored subgraph, then lowest index (secondary ties are pinned for
    reproducibility).
    """
    n = g.n
    colors = [-1] * n
    neighbor_colors: list[set[int]] = [set() for _ in range(n)]
    uncolored_degree = [g.degree(v) for v in range(n)]
    for _ in range(n):
        best = -1
        best_key = None
        for v in range(n):
            if colors[v] != -1:
                continue
            key = (len(neighbor_colors[v]), uncolored_degree[v], -v)
            if best_key is None or key > best_key:
                best_key = key
                best = v
        c = 0
        while c in neighbor_colors[best]:
            c += 1
        colors[best] = c
        for w in g.adjacency[best]:
            neighbor_colors[w].add(c)
            uncolored_degree[w] -= 1
    k = max(colors) + 1 if n else 1
    return Coloring(colors=tuple(colors), k=k)


def greedy_clique(g: Graph) -> list[int]:
    """Greedy maximal clique, used as a chromatic lower bound and for
    symmetry breaking in the exact solver."""
    if g.n == 0:
        return []
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    clique = [order[0]]
    candidates = set(g.adjacency[order[0]])
    for v in order[1:]:
        if v in candidates:
            clique.append(v)
            candidates &= g.adjacency[v]
    return clique


class _Deadline:
    def __init__(self, time_limit: float | None):
        self.expires = None if time_limit is None else time.monotonic() + time_limit
        self._ticks = 0

    def expired(self) -> bool:
        if self.expires is None:
            return False
        self._ticks += 1
        if self._ticks & 1023:
            return False
        return time.monotonic() > self.expires


def exact_k_coloring(
    g: Graph, k: int, time_limit: float | None = None
) -> SolveResult:
    """Decide whether g admits a coloring with at most k colors.

    Branch-and-bound backtracking: the first greedy clique is pre-colored
    (symmetry breaking), vertices are picked dynamically by saturation under
    forward checking, and new color indices are introduced in order. Timeout
    is a result, not an error.
    """
    if k < 1:
        return SolveResult(STATUS_IMPOSSIBLE)
    n = g.n
    if n == 0:
        return SolveResult(STATUS_FOUND, Coloring(colors=(), k=k))
    if g.m == 0:
        return SolveResult(STATUS_FOUND, Coloring(colors=tuple(0 for _ in range(n)), k=k))
    if k >= n:
        return SolveResult(STATUS_FOUND, Coloring(colors=tuple(range(n)), k=k))
    clique = greedy_clique(g)
    if len(clique) > k:
        return SolveResult(STATUS_IMPOSSIBLE)
    deadline = _Deadline(time_limit)
    full = (1 << k) - 1
    allowed = [full] * n
    colors = [-1] * n
    for c, v in enumerate(clique):
        colors[v] = c
        for w in g.adjacency[v]:
            allowed[w] &= ~(1 << c)
    # clique members may have been wedged against each other; they are mutually
    # adjacent so the pre-coloring is always proper
    uncolored = [v for v in range(n) if colors[v] == -1]
    max_used = len(clique) - 1

    def popcount(x: int) -> int:
        return x.bit_count()

    def pick() -> int | None:
        best = None
        best_key = None
        for v in uncolored:
            if colors[v] != -1:
                continue
            opts = popcount(allowed[v])
            deg = sum(1 for w in g.adjacency[v] if colors[w] == -1)
            key = (opts, -deg, v)
            if best_key is None or key < best_key:
                best_key = key
                best = v
        return best

    timed_out = False

    def solve(remaining: int, max_used: int) -> bool:
        nonlocal timed_out
        if remaining == 0:
            return True
        if deadline.expired():
            timed_out = True
            return False
        v = pick()
        mask = allowed[v]
        if mask == 0:
            return False
        cap = min(k - 1, max_used + 1)
        c = 0
        while c <= cap:
            bit = 1 << c
            if mask & bit:
                colors[v] = c
                touched = []
                dead = False
                for w in g.adjacency[v]:
                    if colors[w] == -1 and allowed[w] & bit:
                        allowed[w] &= ~bit
                        touched.append(w)
                        if allowed[w] == 0:
                            dead = True
                if not dead and solve(remaining - 1, max(max_used, c)):
                    return True
                for w in touched:
                    allowed[w] |= bit
                colors[v] = -1
                if timed_out:
                    return False
            c += 1
        return False

    if any(allowed[v] == 0 for v in uncolored):
        return SolveResult(STATUS_IMPOSSIBLE)
    if solve(len(uncolored), max_used):
        return SolveResult(STATUS_FOUND, Coloring(colors=tuple(colors), k=k))
    if timed_out:
        return SolveResult(STATUS_TIMEOUT)
    return SolveResult(STATUS_IMPOSSIBLE)


def exact_chromatic(g: Graph, time_limit: float | None = None) -> ChromaticResult:
    """Chromatic number with witness: walk k downward from the DSatur upper
    bound until some k is impossible. On timeout, reports the best coloring
    found so far as an upper bound."""
    start = time.monotonic()
    best = dsatur(g)
    best = Coloring(colors=best.colors, k=best.classes_used())
    lower = max(1, len(greedy_clique(g)))
    k = best.k - 1
    while k >= lower:
        remaining = None if time_limit is None else time_limit - (time.monotonic() - start)
        if remaining is not None and remaining <= 0:
            return ChromaticResult(STATUS_TIMEOUT, best.k, best)
        result = exact_k_coloring(g, k, remaining)
        if result.status == STATUS_FOUND:
            used = result.coloring.classes_used()
            best = Coloring(colors=result.coloring.colors, k=used)
            k = used - 1
        elif result.status == STATUS_TIMEOUT:
            return ChromaticResult(STATUS_TIMEOUT, best.k, best)
        else:
            break
    return ChromaticResult("exact", best.k, best)


def bollobas_bounds(n: int, p: float) -> tuple[float, float]:
    """Asymptotic chromatic-number band for G(n, p): n/r and n/r times
    (1 + 3 log log n / log n), with r = 2 log_d n - log_d log_d n
    + 2 log_d(e/2) + 1 and base d = 1/(1-p)."""
    if not (0.0 < p < 1.0):
        raise ValueError(f"need 0 < p < 1, got {p}")
    d = 1.0 / (1.0 - p)
    ln_d = math.log(d)
    if n <= d:
        raise ValueError(f"band undefined: need n > d = {d:.3f}, got n={n}")
    log_d_n = math.log(n) / ln_d
    if log_d_n <= 1.0:
        raise ValueError(f"iterated logarithm undefined for n={n}, p={p}")
    r = 2 * log_d_n - math.log(log_d_n) / ln_d + 2 * math.log(math.e / 2) / ln_d + 1
    if r <= 0:
        raise ValueError(f"nonpositive denominator r={r:.3f} for n={n}, p={p}")
    lower = n / r
    upper = lower * (1 + 3 * math.log(math.log(n)) / math.log(n))
    return lower, upper


def chi_power_law(n: int) -> int:
    """Empirical chromatic-number fit for density-1/2 random graphs,
    1.13 * n^0.54, rounded to the nearest integer. Drives the planted-k choice
    at keygen scale-up."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return int(1.13 * n ** 0.54 + 0.5)


@dataclass(frozen=True)
class ExperimentConfig:
    n_values: tuple[int, ...]
    density: float = 0.5
    trials: int = 1
    solvers: tuple[str, ...] = ("dsatur", "exact")
    time_limit: float | None = 60.0
    seed: int = 0
    include_er_baseline: bool = True
    jobs: int = 1


def attack_graph(
    g: Graph, k: int, solver: str, time_limit: float | None = None,
    density: float = 0.0, seed: int = 0, instance_kind: str = "planted",
) -> AttackReport:
    """Run one solver against one instance and score planted recovery."""
    start = time.perf_counter()
    timed_out = False
    if solver == "dsatur":
        coloring = dsatur(g)
        colors_used = coloring.classes_used()
        conflicts = 0
    elif solver == "exact":
        result = exact_k_coloring(g, k, time_limit)
        timed_out = result.status == STATUS_TIMEOUT
        if result.status == STATUS_FOUND:
            colors_used = result.coloring.classes_used()
        else:
            colors_used = 0
        conflicts = 0
    elif solver == "chromatic":
        result = exact_chromatic(g, time_limit)
        timed_out = result.status == STATUS_TIMEOUT
        colors_used = result.chi
        conflicts = 0
    else:
        raise ValueError(f"unknown solver {solver!r}")
    wall_ms = (time.perf_counter() - start) * 1000.0
    recovered = (not timed_out) and 1 <= colors_used <= k
    return AttackReport(
        solver=solver, n=g.n, k=k, density=density, seed=seed,
        instance_kind=instance_kind, colors_used=colors_used, conflicts=conflicts,
        recovered=recovered, wall_ms=wall_ms, timeout=timed_out,
    )


def _experiment_job(args) -> AttackReport:
    n, k, density, seed, kind, solver, time_limit = args
    rng = random.Random(seed)
    if kind == "planted":
        g, _ = generate_planted(PartitionSpec.balanced(n, k), density, rng)
    else:
        g = generate_er(n, density, rng)
    return attack_graph(
        g, k, solver, time_limit, density=density, seed=seed, instance_kind=kind,
    )


def recovery_experiment(config: ExperimentConfig) -> list[AttackReport]:
    """Sweep instance sizes, generating planted graphs (and matched ER
    baselines) and running every enabled solver on each."""
    master = random.Random(config.seed)
    jobs = []
    kinds = ["planted"] + (["er"] if config.include_er_baseline else [])
    for n in config.n_values:
        k = chi_power_law(n)
        for trial in range(config.trials):
            for kind in kinds:
                seed = master.getrandbits(48)
                for solver in config.solvers:
                    jobs.append((n, k, config.density, seed, kind, solver, config.time_limit))
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            return list(pool.map(_experiment_job, jobs))
    return [_experiment_job(j) for j in jobs]


def write_csv(reports: Iterable[AttackReport], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for report in reports:
            writer.writerow(report.csv_row())
