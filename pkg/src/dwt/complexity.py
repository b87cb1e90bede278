"""Five-dimension structural complexity scoring of graph models.

Each dimension counts concrete features of the parsed XML and maps the
count onto [0, 5] through a monotone saturating curve ``5*(1-exp(-x/k))``.
The difficulty class is a banding of the mean score. All counters and
curve constants are documented here so scores can be recomputed
independently from the raw XML.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from dwt.mxgraph.model import CellKind, GraphModel
from dwt.render.svg import SUPPORTED_SHAPES

#: saturation constants; k = x_ref / ln(5 / (5 - s_ref)) for a reference
#: count x_ref that should score s_ref. Connection: 45 plain edges ~ 4.1.
K_CONNECTION = 26.24
K_GRAPHICAL = 13.0
K_COLOR = 7.0
K_TEXT = 32.0
K_SPECIAL = 4.0

#: style color keys considered for the distinct-color count.
COLOR_KEYS = ("fillColor", "strokeColor", "fontColor", "gradientColor")
#: style keys that count as gradient/opacity effects.
EFFECT_KEYS = ("gradientColor", "gradientDirection", "opacity", "fillOpacity", "strokeOpacity", "textOpacity")
#: style keys treated as non-standard visual components.
EXOTIC_KEYS = ("shadow", "glass", "sketch", "comic", "image", "flipH", "flipV", "rotation", "curved", "dashPattern")

EASY_BELOW = 2.0
HARD_FROM = 3.5

DIFFICULTIES = ("Easy", "Medium", "Hard")


@dataclass(frozen=True)
class ComplexityInputs:
    """Raw feature counts feeding the five scores."""

    edge_count: int
    waypoint_count: int
    fan_excess: int
    vertex_count: int
    distinct_shapes: int
    nesting_depth: int
    distinct_colors: int
    effect_key_count: int
    label_count: int
    label_length: int
    special_count: int

    def to_json_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class ComplexityProfile:
    connection: float
    graphical: float
    color: float
    text: float
    special: float
    difficulty: str
    inputs: Optional[ComplexityInputs] = None

    @property
    def scores(self) -> tuple[float, float, float, float, float]:
        return (self.connection, self.graphical, self.color, self.text, self.special)

    @property
    def mean(self) -> float:
        return sum(self.scores) / 5.0

    def to_json_dict(self) -> dict:
        out = {
            "connection": round(self.connection, 3),
            "graphical": round(self.graphical, 3),
            "color": round(self.color, 3),
            "text": round(self.text, 3),
            "special": round(self.special, 3),
            "difficulty": self.difficulty,
        }
        if self.inputs is not None:
            out["inputs"] = self.inputs.to_json_dict()
        return out


def saturating(x: float, k: float) -> float:
    """Monotone map of a non-negative count onto [0, 5)."""
    if x <= 0:
        return 0.0
    return min(5.0, 5.0 * (1.0 - math.exp(-x / k)))


def count_inputs(model: GraphModel) -> ComplexityInputs:
    edge_count = 0
    waypoint_count = 0
    degree: dict[str, int] = {}
    vertex_count = 0
    shapes: set[str] = set()
    colors: set[str] = set()
    effect_keys = 0
    label_count = 0
    label_length = 0
    special = 0
    depth_of: dict[str, int] = {}
    max_depth = 0

    for cell in model.cells:
        if cell.kind is CellKind.EDGE:
            edge_count += 1
            if cell.geometry is not None:
                waypoint_count += len(cell.geometry.waypoints)
            for ref in (cell.source, cell.target):
                if ref is not None:
                    degree[ref] = degree.get(ref, 0) + 1
        else:
            vertex_count += 1
            token = "group" if cell.kind is CellKind.GROUP else (cell.style.base_shape or "rectangle")
            shapes.add(token)
            if token not in SUPPORTED_SHAPES:
                special += 1
            depth = depth_of.get(cell.parent, 0) + 1
            depth_of[cell.id] = depth
            max_depth = max(max_depth, depth)

        for key, value in cell.style.entries:
            if key in COLOR_KEYS and value and value != "none":
                colors.add(value.lower())
            if key in EFFECT_KEYS:
                effect_keys += 1
            if key in EXOTIC_KEYS:
                special += 1

        if cell.value:
            label_count += 1
            label_length += len(cell.value)

    fan_excess = sum(max(0, d - 2) for d in degree.values())
    return ComplexityInputs(
        edge_count=edge_count,
        waypoint_count=waypoint_count,
        fan_excess=fan_excess,
        vertex_count=vertex_count,
        distinct_shapes=len(shapes),
        nesting_depth=max_depth,
        distinct_colors=len(colors),
        effect_key_count=effect_keys,
        label_count=label_count,
        label_length=label_length,
        special_count=special,
    )


def scores_from_inputs(inputs: ComplexityInputs) -> tuple[float, float, float, float, float]:
    connection = saturating(inputs.edge_count + inputs.waypoint_count / 4 + inputs.fan_excess / 4, K_CONNECTION)
    graphical = saturating(
        inputs.vertex_count / 4 + 2 * inputs.distinct_shapes + 2 * inputs.nesting_depth, K_GRAPHICAL
    )
    color = saturating(inputs.distinct_colors + 2 * inputs.effect_key_count, K_COLOR)
    text = saturating(inputs.label_count + inputs.label_length / 20, K_TEXT)
    special = saturating(inputs.special_count, K_SPECIAL)
    return connection, graphical, color, text, special


def profile(model: GraphModel) -> ComplexityProfile:
    inputs = count_inputs(model)
    connection, graphical, color, text, special = scores_from_inputs(inputs)
    difficulty = classify_scores((connection, graphical, color, text, special))
    return ComplexityProfile(
        connection=connection,
        graphical=graphical,
        color=color,
        text=text,
        special=special,
        difficulty=difficulty,
        inputs=inputs,
    )


def classify_scores(
    scores: tuple[float, float, float, float, float],
    easy_below: float = EASY_BELOW,
    hard_from: float = HARD_FROM,
) -> str:
    mean = sum(scores) / len(scores)
    if mean < easy_below:
        return "Easy"
    if mean < hard_from:
        return "Medium"
    return "Hard"


def classify(prof: ComplexityProfile, easy_below: float = EASY_BELOW, hard_from: float = HARD_FROM) -> str:
    return classify_scores(prof.scores, easy_below=easy_below, hard_from=hard_from)
