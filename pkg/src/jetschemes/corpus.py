"""Built-in varieties, addressable as ``@name``."""

from __future__ import annotations

import re

from .presentation import Presentation, affine_space

_HYPERSURFACES = {
    "parabola": (["x", "y"], "y - x^2"),
    "circle": (["x", "y"], "x^2 + y^2 - 1"),
    "cusp": (["x", "y"], "y^2 - x^3"),
    "node": (["x", "y"], "y^2 - x^2*(x + 1)"),
    "danielewski-x": (["x", "y", "z"], "x*z - y^2 + 1"),
    "danielewski-y": (["x", "y", "z"], "x^2*z - y^2 + 1"),
}

DIMENSIONS = {"parabola": 1, "circle": 1, "cusp": 1, "node": 1, "danielewski-x": 2, "danielewski-y": 2}

# affine plane, five plane curves, both Danielewski surfaces
CORPUS_NAMES = ("affine-2", "parabola", "circle", "cusp", "node", "danielewski-x", "danielewski-y")
SMOOTH_NAMES = ("affine-2", "parabola", "circle", "danielewski-x", "danielewski-y")


def builtin(name: str) -> Presentation:
    """Look up a built-in variety; a leading ``@`` is optional."""
    name = name.lstrip("@")
    m = re.fullmatch(r"affine-(\d+)", name)
    if m:
        return affine_space(int(m.group(1)))
    if name not in _HYPERSURFACES:
        raise KeyError(f"unknown built-in variety @{name}")
    variables, f = _HYPERSURFACES[name]
    return Presentation.from_strings(name, variables, [f])


def dimension(name: str) -> int:
    name = name.lstrip("@")
    m = re.fullmatch(r"affine-(\d+)", name)
    if m:
        return int(m.group(1))
    return DIMENSIONS[name]


def corpus() -> list[Presentation]:
    return [builtin(n) for n in CORPUS_NAMES]
