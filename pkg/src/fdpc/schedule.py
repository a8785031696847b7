"""Check-conflict graph and the layer schedule the decoder runs.

Two checks conflict when they touch a common variable; a proper coloring of
that graph yields layers whose checks can be updated together without racing
on a posterior entry.  Layers are colored greedily in natural check order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gf2 import BinaryMatrix


@dataclass(frozen=True)
class ConflictGraph:
    n_checks: int
    neighbors: tuple[np.ndarray, ...]


@dataclass(frozen=True)
class LayerSchedule:
    layers: tuple[tuple[int, ...], ...]
    chromatic_number_used: int
    compromised: bool = False

    @property
    def n_checks(self) -> int:
        return sum(len(layer) for layer in self.layers)


def build_conflict_graph(H: BinaryMatrix) -> ConflictGraph:
    adj: list[set[int]] = [set() for _ in range(H.rows)]
    for sup in H.col_support:
        for a_pos in range(len(sup)):
            for b_pos in range(a_pos + 1, len(sup)):
                a, b = int(sup[a_pos]), int(sup[b_pos])
                adj[a].add(b)
                adj[b].add(a)
    neighbors = []
    for s in adj:
        arr = np.asarray(sorted(s), dtype=np.int32)
        arr.setflags(write=False)
        neighbors.append(arr)
    return ConflictGraph(H.rows, tuple(neighbors))


def greedy_color(G: ConflictGraph) -> np.ndarray:
    """Color checks in natural order with the smallest color free among neighbors."""
    colors = np.full(G.n_checks, -1, dtype=np.int32)
    for m in range(G.n_checks):
        taken = {int(colors[nb]) for nb in G.neighbors[m] if colors[nb] >= 0}
        colors[m] = next(c for c in range(len(taken) + 1) if c not in taken)
    return colors


def build_schedule(H: BinaryMatrix) -> LayerSchedule:
    colors = greedy_color(build_conflict_graph(H))
    n_colors = int(colors.max()) + 1 if colors.size else 0
    layers = tuple(tuple(int(m) for m in np.flatnonzero(colors == c)) for c in range(n_colors))
    return LayerSchedule(layers=layers, chromatic_number_used=n_colors)


def force_layer_count(schedule: LayerSchedule, count: int) -> LayerSchedule:
    """Merge the smallest layers pairwise until at most `count` remain.

    Merged schedules generally violate the within-layer conflict-freedom
    guarantee; the result is flagged compromised and the decoder falls back
    to pre-layer posterior snapshots for such layers.
    """
    if count < 1:
        raise ValueError(f"layer count must be positive, got {count}")
    if len(schedule.layers) <= count:
        return schedule
    layers = [list(l) for l in schedule.layers]
    while len(layers) > count:
        order = sorted(range(len(layers)), key=lambda i: (len(layers[i]), i))
        a, b = sorted(order[:2])
        layers[a] = sorted(layers[a] + layers[b])
        del layers[b]
    return LayerSchedule(
        layers=tuple(tuple(l) for l in layers),
        chromatic_number_used=schedule.chromatic_number_used,
        compromised=True,
    )


def schedule_summary(schedule: LayerSchedule) -> dict:
    """JSON-ready description: layer sizes, color count, compromise flag."""
    return {
        "layers": [list(l) for l in schedule.layers],
        "layer_sizes": [len(l) for l in schedule.layers],
        "n_layers": len(schedule.layers),
        "chromatic_number": schedule.chromatic_number_used,
        "compromised": schedule.compromised,
    }
