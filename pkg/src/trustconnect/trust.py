"""Trust scoring: edge weights, per-ECU trust, baseline, adjusted trust.

The pipeline, per dependency edge (i, j):

    deviation  D = |observed[i] - inferred[(i, j)]|
    weight     W = exp(-k * D)            (1 means perfect agreement)

and per node, summing over its out-neighbors j:

    T(i) = sum( epsilon[j] * alpha * C(j) + W[i, j] )

where C(j) is node j's trust score when one is already available and a
prior c0 otherwise. Two evaluation modes resolve "already available":

* "single-pass": nodes are evaluated once in ascending id order; C(j)
  is T(j) for neighbors evaluated earlier in the pass, else c0.
* "fixed-point": C is the previous iterate's T (all starting at c0),
  repeated until the max-norm change drops below ``tolerance`` or
  ``max_iterations`` is hit. Non-convergence is reported, never hidden.

The baseline trust value (BTV) is the same computation with every
deviation forced to zero (every weight exactly 1): the score a node
earns when nothing in the network contradicts anything. The adjusted
trust value blends the two by resilience:

    EATV(i) = BTV(i) - (BTV(i) - T(i)) * (1 - epsilon[i])

so a hard-to-attack node (epsilon near 1) keeps its baseline score even
when easily-attacked neighbors contradict it, while an exposed node
(epsilon near 0) is pulled all the way down to its measured trust.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

from .graph import DependencyGraph
from .snapshot import Snapshot, deviations

REPORT_HEADER = "trustconnect-report v1"
CSV_HEADER = "id,label,epsilon,btv,trust,eatv"

MODES = ("single-pass", "fixed-point")


class NonConvergenceWarning(UserWarning):
    """Fixed-point evaluation stopped at max_iterations without settling."""


@dataclass(frozen=True)
class TrustParams:
    """Tuning knobs for the trust computation."""

    k: float
    alpha: float
    c0: float = 1.0
    mode: str = "single-pass"
    max_iterations: int = 100
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.k < 0:
            raise ValueError(f"k must be >= 0, got {self.k}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be > 0, got {self.tolerance}")


def edge_weight(d: float, k: float) -> float:
    """Weight of an edge with deviation d under decay factor k: exp(-k*d)."""
    if d < 0:
        raise ValueError(f"deviation must be >= 0, got {d}")
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    return math.exp(-k * d)


def _edge_weights(
    graph: DependencyGraph, devs: dict[tuple[int, int], float], k: float
) -> dict[tuple[int, int], float]:
    return {edge: edge_weight(devs[edge], k) for edge in graph.edges}


def _single_pass(graph, weights, params):
    epsilons = graph.epsilons()
    adjacency = graph.out_adjacency()
    scores: dict[int, float] = {}
    for i in sorted(adjacency):
        total = 0.0
        for j in adjacency[i]:
            c = scores[j] if j in scores else params.c0
            total += epsilons[j] * params.alpha * c + weights[(i, j)]
        scores[i] = total
    return scores, True


def _fixed_point(graph, weights, params):
    epsilons = graph.epsilons()
    adjacency = graph.out_adjacency()
    current = {i: params.c0 for i in adjacency}
    converged = not adjacency
    for _ in range(params.max_iterations):
        nxt: dict[int, float] = {}
        for i in sorted(adjacency):
            total = 0.0
            for j in adjacency[i]:
                total += epsilons[j] * params.alpha * current[j] + weights[(i, j)]
            nxt[i] = total
        change = max((abs(nxt[i] - current[i]) for i in adjacency), default=0.0)
        current = nxt
        if change < params.tolerance:
            converged = True
            break
    return current, converged


def _trust_from_deviations(graph, devs, params):
    weights = _edge_weights(graph, devs, params.k)
    if params.mode == "single-pass":
        return _single_pass(graph, weights, params)
    return _fixed_point(graph, weights, params)


def trust_scores(
    graph: DependencyGraph, snapshot: Snapshot, params: TrustParams
) -> dict[int, float]:
    """Per-node trust score for one snapshot; warns on non-convergence."""
    scores, converged = _trust_from_deviations(graph, deviations(graph, snapshot), params)
    if not converged:
        warnings.warn(
            f"fixed-point evaluation did not converge within "
            f"{params.max_iterations} iterations; returning the last iterate",
            NonConvergenceWarning,
        )
    return scores


def baseline_trust(graph: DependencyGraph, params: TrustParams) -> dict[int, float]:
    """Trust scores under zero deviation everywhere (every weight is 1)."""
    zero = {edge: 0.0 for edge in graph.edges}
    scores, converged = _trust_from_deviations(graph, zero, params)
    if not converged:
        warnings.warn(
            f"fixed-point baseline did not converge within "
            f"{params.max_iterations} iterations; returning the last iterate",
            NonConvergenceWarning,
        )
    return scores


def adjusted_trust(btv: float, trust: float, epsilon: float) -> float:
    """Resilience-weighted blend of baseline and measured trust.

    Equals epsilon * btv + (1 - epsilon) * trust; exact at both
    endpoints regardless of floating-point cancellation.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must be in [0, 1], got {epsilon}")
    if epsilon == 0.0:
        return trust
    if epsilon == 1.0:
        return btv
    return btv - (btv - trust) * (1.0 - epsilon)


@dataclass(frozen=True)
class TrustEntry:
    id: int
    label: str
    epsilon: float
    btv: float
    trust: float
    eatv: float


@dataclass(frozen=True)
class TrustReport:
    """Per-ECU trust triple plus the network aggregate and provenance."""

    entries: tuple[TrustEntry, ...]
    network_trust: float
    params: TrustParams
    converged: bool
    provenance: tuple[tuple[str, str], ...] = field(default=())

    def entry(self, node_id: int) -> TrustEntry:
        for entry in self.entries:
            if entry.id == node_id:
                return entry
        raise ValueError(f"unknown node id {node_id}")

    def btv(self) -> dict[int, float]:
        return {e.id: e.btv for e in self.entries}

    def trust(self) -> dict[int, float]:
        return {e.id: e.trust for e in self.entries}

    def eatv(self) -> dict[int, float]:
        return {e.id: e.eatv for e in self.entries}

    def to_text(self) -> str:
        lines = [REPORT_HEADER]
        for e in self.entries:
            lines.append(
                f"ecu {e.id} {e.label} {e.epsilon!r} {e.btv!r} {e.trust!r} {e.eatv!r}"
            )
        lines.append(f"network_trust {self.network_trust!r}")
        p = self.params
        lines.append(
            f"params k={p.k!r} alpha={p.alpha!r} c0={p.c0!r} mode={p.mode} "
            f"max_iterations={p.max_iterations} tolerance={p.tolerance!r}"
        )
        lines.append(f"converged {'true' if self.converged else 'false'}")
        for key, value in sorted(self.provenance):
            lines.append(f"meta {key} {value}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for e in self.entries:
            lines.append(
                f"{e.id},{e.label},{e.epsilon!r},{e.btv!r},{e.trust!r},{e.eatv!r}"
            )
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        p = self.params
        doc = {
            "ecus": [
                {
                    "id": e.id,
                    "label": e.label,
                    "epsilon": e.epsilon,
                    "btv": e.btv,
                    "trust": e.trust,
                    "eatv": e.eatv,
                }
                for e in self.entries
            ],
            "network_trust": self.network_trust,
            "params": {
                "k": p.k,
                "alpha": p.alpha,
                "c0": p.c0,
                "mode": p.mode,
                "max_iterations": p.max_iterations,
                "tolerance": p.tolerance,
            },
            "converged": self.converged,
            "provenance": {key: value for key, value in sorted(self.provenance)},
        }
        return json.dumps(doc, indent=2) + "\n"


def _network_trust(entries: tuple[TrustEntry, ...]) -> float:
    """Resilience-weighted mean of capped per-node trust ratios.

    Each node contributes min(T, BTV) / BTV (1.0 when BTV is 0), so the
    aggregate is 1.0 exactly when nothing contradicts anything, and the
    testimony of easily-attacked nodes is discounted by their epsilon.
    Falls back to the unweighted mean when every epsilon is zero.
    """
    if not entries:
        return 1.0
    ratios = [
        (min(e.trust, e.btv) / e.btv if e.btv > 0 else 1.0) for e in entries
    ]
    epsilon_sum = sum(e.epsilon for e in entries)
    if epsilon_sum > 0:
        return sum(e.epsilon * r for e, r in zip(entries, ratios)) / epsilon_sum
    return sum(ratios) / len(ratios)


def full_report(
    graph: DependencyGraph,
    snapshot: Snapshot,
    params: TrustParams,
    provenance: dict[str, str] | None = None,
) -> TrustReport:
    """Assemble baseline, trust, and adjusted trust for every node."""
    devs = deviations(graph, snapshot)
    trust, trust_conv = _trust_from_deviations(graph, devs, params)
    zero = {edge: 0.0 for edge in graph.edges}
    btv, base_conv = _trust_from_deviations(graph, zero, params)
    if not (trust_conv and base_conv):
        warnings.warn(
            f"fixed-point evaluation did not converge within "
            f"{params.max_iterations} iterations; the report carries the last iterate",
            NonConvergenceWarning,
        )
    entries = tuple(
        TrustEntry(
            id=node.id,
            label=node.label,
            epsilon=node.epsilon,
            btv=btv[node.id],
            trust=trust[node.id],
            eatv=adjusted_trust(btv[node.id], trust[node.id], node.epsilon),
        )
        for node in graph.nodes
    )
    return TrustReport(
        entries=entries,
        network_trust=_network_trust(entries),
        params=params,
        converged=trust_conv and base_conv,
        provenance=tuple(sorted((provenance or {}).items())),
    )
