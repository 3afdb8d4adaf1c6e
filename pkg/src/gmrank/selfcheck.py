"""Bundled oracle suite behind the ``selfcheck`` command.

Each check recomputes a contract through an independent route (dense linear
solve, exhaustive enumeration, direct tallying) and compares against the
production code path.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .aggregate import global_ranking
from .graph import DirectedGraph
from .rank import (GoogleParams, RankIndex, dense_google_matrix,
                   dense_stationary, pagerank, rank_indices, two_d_rank)
from .registry import TopList


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _random_graph(rng: np.random.Generator, n: int, density: float) -> DirectedGraph:
    count = max(1, int(density * n * n))
    src = rng.integers(0, n, size=count)
    tgt = rng.integers(0, n, size=count)
    return DirectedGraph.from_edges(n, src, tgt, drop_self_loops=True)


def check_closed_form() -> CheckResult:
    """2-node single-edge graph against an independent dense linear solve."""
    g = DirectedGraph.from_edges(2, [0], [1])
    alpha = 0.85
    matrix = dense_google_matrix(g, alpha)
    system = matrix - np.eye(2)
    system[-1, :] = 1.0                      # replace one equation with sum(P)=1
    expected = np.linalg.solve(system, np.array([0.0, 1.0]))
    got = pagerank(g, GoogleParams(alpha=alpha)).probabilities
    err = float(np.abs(got - expected).max())
    return CheckResult("closed-form 2-node", err <= 1e-6,
                       f"max deviation {err:.2e} from linear solve")


def check_dense_vs_sparse(graphs: int = 10, n: int = 60,
                          seed: int = 20130215) -> CheckResult:
    """Sparse power iteration against the dense-matrix oracle."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(graphs):
        g = _random_graph(rng, n, 0.05)
        sparse_p = pagerank(g, GoogleParams()).probabilities
        dense_p = dense_stationary(dense_google_matrix(g, 0.85)).probabilities
        worst = max(worst, float(np.abs(sparse_p - dense_p).sum()))
    return CheckResult("dense vs sparse oracle", worst <= 1e-8,
                       f"worst L1 gap {worst:.2e} over {graphs} graphs")


def check_stochasticity(seed: int = 7) -> CheckResult:
    """Column sums of G and the teleportation probability floor."""
    rng = np.random.default_rng(seed)
    fixtures = [DirectedGraph.from_edges(2, [0], [1]),
                DirectedGraph.from_edges(5, range(5), [(i + 1) % 5 for i in range(5)]),
                _random_graph(rng, 40, 0.08)]
    for g in fixtures:
        matrix = dense_google_matrix(g, 0.85)
        col_err = float(np.abs(matrix.sum(axis=0) - 1.0).max())
        if col_err > 1e-12:
            return CheckResult("stochasticity and floor", False,
                               f"column sum off by {col_err:.2e}")
        p = pagerank(g, GoogleParams()).probabilities
        floor = 0.15 / g.node_count
        if float(p.min()) < floor - 1e-12:
            return CheckResult("stochasticity and floor", False,
                               f"probability {p.min():.3e} under floor {floor:.3e}")
    return CheckResult("stochasticity and floor", True,
                       f"{len(fixtures)} fixtures within 1e-12")


def _index_from_positions(positions: tuple[int, ...]) -> RankIndex:
    pos = np.asarray(positions, dtype=np.int64)
    ordering = np.argsort(pos, kind="stable")
    return RankIndex(ordering=ordering, position=pos)


def check_two_d_rank_exhaustive(max_n: int = 4) -> CheckResult:
    """Every permutation pair up to max_n against brute-force rule evaluation."""
    checked = 0
    for n in range(1, max_n + 1):
        for k in permutations(range(1, n + 1)):
            for kstar in permutations(range(1, n + 1)):
                result = two_d_rank(_index_from_positions(k),
                                    _index_from_positions(kstar))
                expect_kprime = [max(a, b) for a, b in zip(k, kstar)]
                if result.kprime.tolist() != expect_kprime:
                    return CheckResult("2DRank exhaustive", False,
                                       f"kprime mismatch at {k}/{kstar}")
                brute = sorted(range(n),
                               key=lambda i: (expect_kprime[i], kstar[i], k[i], i))
                if result.ordering.tolist() != brute:
                    return CheckResult("2DRank exhaustive", False,
                                       f"ordering mismatch at {k}/{kstar}")
                checked += 1
    return CheckResult("2DRank exhaustive", True,
                       f"{checked} permutation pairs match brute force")


def _bundled_corpus() -> list[TopList]:
    # three editions, overlapping membership, assorted ranks
    lists = {
        "EN": ["alpha", "beta", "gamma", "delta", "epsilon"],
        "FR": ["beta", "alpha", "zeta", "gamma", "eta"],
        "DE": ["gamma", "theta", "alpha", "iota", "beta"],
    }
    return [
        TopList(edition=code, algorithm="pagerank",
                entries=tuple((pid, i + 1) for i, pid in enumerate(ids)))
        for code, ids in lists.items()
    ]


def check_theta_brute_force() -> CheckResult:
    """Global ranking against a direct tally of 101 - rank per appearance."""
    toplists = _bundled_corpus()
    tally: dict[str, list[int]] = {}
    for toplist in toplists:
        for pid, rank in toplist.entries:
            tally.setdefault(pid, []).append(rank)
    expected = sorted(
        ((pid, sum(101 - r for r in ranks), len(ranks), sum(ranks) / len(ranks))
         for pid, ranks in tally.items()),
        key=lambda row: (-row[1], -row[2], row[3], row[0]))
    got = global_ranking(toplists)
    ok = [(e.person_id, e.theta, e.n_appear, e.mean_rank) for e in got] == expected
    bounds = all(e.n_appear <= e.theta <= 100 * e.n_appear for e in got)
    return CheckResult("theta brute force", ok and bounds,
                       f"{len(got)} scored persons, bounds "
                       f"{'hold' if bounds else 'VIOLATED'}")


def check_rank_indices(seed: int = 11) -> CheckResult:
    """Orderings against Python's sorted() with the documented tie rule."""
    rng = np.random.default_rng(seed)
    for _ in range(25):
        probs = rng.choice([0.1, 0.2, 0.3], size=12) * rng.uniform(0.5, 1.5)
        idx = rank_indices(probs)
        brute = sorted(range(12), key=lambda i: (-probs[i], i))
        if idx.ordering.tolist() != brute:
            return CheckResult("rank index tie rule", False, "ordering mismatch")
        if sorted(idx.position.tolist()) != list(range(1, 13)):
            return CheckResult("rank index tie rule", False, "positions not 1..N")
    return CheckResult("rank index tie rule", True, "25 random vectors match sorted()")


def run_all() -> list[CheckResult]:
    return [
        check_closed_form(),
        check_dense_vs_sparse(),
        check_stochasticity(),
        check_two_d_rank_exhaustive(),
        check_theta_brute_force(),
        check_rank_indices(),
    ]
