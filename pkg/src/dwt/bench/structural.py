"""Structural similarity between two graph models.

Nodes are matched by assignment over a pairwise weight combining label
edit similarity, shape-token equality, and center distance; node/edge F1
are computed over the induced matching. Small instances use an exact
assignment, larger ones a deterministic greedy pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import linear_sum_assignment

from dwt.mxgraph.model import CellKind, GraphModel

#: node weight = W_LABEL*label_sim + W_SHAPE*shape_eq + W_DIST*(1-dist/diag)
W_LABEL = 0.5
W_SHAPE = 0.25
W_DIST = 0.25

#: combined = W_NODE*node_f1 + W_EDGE*edge_f1 + W_TEXT*label_similarity
W_NODE = 0.4
W_EDGE = 0.4
W_TEXT = 0.2

#: matched pairs below this weight do not count as node matches.
MATCH_THRESHOLD = 0.4

#: instance size up to which the assignment is solved exactly.
EXACT_LIMIT = 12


@dataclass(frozen=True)
class StructuralScore:
    node_f1: float
    edge_f1: float
    label_similarity: float

    @property
    def combined(self) -> float:
        return W_NODE * self.node_f1 + W_EDGE * self.edge_f1 + W_TEXT * self.label_similarity

    def to_json_dict(self) -> dict:
        return {
            "node_f1": round(self.node_f1, 6),
            "edge_f1": round(self.edge_f1, 6),
            "label_similarity": round(self.label_similarity, 6),
            "combined": round(self.combined, 6),
        }


@dataclass(frozen=True)
class _Node:
    id: str
    label: str
    shape: str
    cx: float
    cy: float


def levenshtein(a: str, b: str) -> int:
    if not a:
        return len(b)
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb)))
        previous = current
    return previous[-1]


def label_similarity(a: str, b: str) -> float:
    if not a and not b:
        return 1.0
    longest = max(len(a), len(b))
    return 1.0 - levenshtein(a, b) / longest


def _extract_nodes(model: GraphModel) -> list[_Node]:
    nodes = []
    for cell in model.cells:
        if not cell.is_vertex_like or cell.geometry is None:
            continue
        x, y = model.absolute_origin(cell)
        shape = "group" if cell.kind is CellKind.GROUP else (cell.style.base_shape or "rectangle")
        nodes.append(
            _Node(
                id=cell.id,
                label=cell.value,
                shape=shape,
                cx=x + cell.geometry.width / 2,
                cy=y + cell.geometry.height / 2,
            )
        )
    return nodes


def _extent_diagonal(*node_sets: list[_Node]) -> float:
    xs = [n.cx for nodes in node_sets for n in nodes]
    ys = [n.cy for nodes in node_sets for n in nodes]
    if not xs:
        return 1.0
    diag = float(np.hypot(max(xs) - min(xs), max(ys) - min(ys)))
    return diag if diag > 0 else 1.0


def pair_weight(a: _Node, b: _Node, diag: float) -> float:
    distance = float(np.hypot(a.cx - b.cx, a.cy - b.cy))
    proximity = max(0.0, 1.0 - distance / diag)
    return W_LABEL * label_similarity(a.label, b.label) + W_SHAPE * (a.shape == b.shape) + W_DIST * proximity


def _assignment(weights: np.ndarray, cand: list[_Node], ref: list[_Node]) -> list[tuple[int, int]]:
    n, m = weights.shape
    if max(n, m) <= EXACT_LIMIT:
        rows, cols = linear_sum_assignment(weights, maximize=True)
        return sorted(zip(rows.tolist(), cols.tolist()))
    # greedy: best weight first, symmetric deterministic tie-break by ids
    order = sorted(
        ((i, j) for i in range(n) for j in range(m)),
        key=lambda p: (-weights[p[0], p[1]], min(cand[p[0]].id, ref[p[1]].id), max(cand[p[0]].id, ref[p[1]].id)),
    )
    used_rows: set[int] = set()
    used_cols: set[int] = set()
    picked: list[tuple[int, int]] = []
    for i, j in order:
        if i in used_rows or j in used_cols:
            continue
        used_rows.add(i)
        used_cols.add(j)
        picked.append((i, j))
    return sorted(picked)


def structural_similarity(candidate: GraphModel, reference: GraphModel) -> StructuralScore:
    cand = _extract_nodes(candidate)
    ref = _extract_nodes(reference)

    if not cand and not ref:
        edge_f1 = _edge_f1(candidate, reference, {})
        return StructuralScore(node_f1=1.0, edge_f1=edge_f1, label_similarity=1.0)
    if not cand or not ref:
        return StructuralScore(node_f1=0.0, edge_f1=0.0, label_similarity=0.0)

    diag = _extent_diagonal(cand, ref)
    weights = np.array([[pair_weight(a, b, diag) for b in ref] for a in cand])
    pairs = _assignment(weights, cand, ref)

    matched = [(i, j) for i, j in pairs if weights[i, j] >= MATCH_THRESHOLD]
    node_f1 = 2 * len(matched) / (len(cand) + len(ref))
    label_sim = (
        sum(label_similarity(cand[i].label, ref[j].label) for i, j in matched) / len(matched) if matched else 0.0
    )
    mapping = {cand[i].id: ref[j].id for i, j in matched}
    edge_f1 = _edge_f1(candidate, reference, mapping)
    return StructuralScore(node_f1=node_f1, edge_f1=edge_f1, label_similarity=label_sim)


def _edge_f1(candidate: GraphModel, reference: GraphModel, mapping: dict[str, str]) -> float:
    cand_edges = [(c.source, c.target) for c in candidate.iter_kind(CellKind.EDGE)]
    ref_edges = [(c.source, c.target) for c in reference.iter_kind(CellKind.EDGE)]
    if not cand_edges and not ref_edges:
        return 1.0
    remaining: dict[tuple[Optional[str], Optional[str]], int] = {}
    for pair in ref_edges:
        remaining[pair] = remaining.get(pair, 0) + 1
    true_positives = 0
    for source, target in cand_edges:
        key = (mapping.get(source) if source else None, mapping.get(target) if target else None)
        if remaining.get(key, 0) > 0:
            remaining[key] -= 1
            true_positives += 1
    return 2 * true_positives / (len(cand_edges) + len(ref_edges))
