"""SVG slices of two-parameter caustic diagrams."""

import sys

from jinja2 import BaseLoader, Environment, StrictUndefined

from germlab.models.errors import PreconditionViolated

PALETTE = (
    "#e8eef7",
    "#f7ede2",
    "#e6f4ea",
    "#fbe9f0",
    "#f1ecf9",
    "#fdf6d8",
    "#e3f2f4",
    "#f4e4e1",
)
LABEL_COLOURS = {
    "A_2": "#1f5fa8",
    "A_{e,2}": "#c0392b",
    "A_3": "#2c7a3f",
    "A_{e,3}": "#8e44ad",
}


class DiagramSvgRenderer:
    """Render crossings as dots over census-shaded grid cells."""

    TEMPLATE = """<svg xmlns="http://www.w3.org/2000/svg" width="{{ width + 2 * margin }}" height="{{ height + 2 * margin }}" viewBox="0 0 {{ width + 2 * margin }} {{ height + 2 * margin }}">
<title>{{ title }}</title>
<g transform="translate({{ margin }},{{ margin }})">
{% for cell in cells %}
<rect x="{{ cell.x }}" y="{{ cell.y }}" width="{{ cell.w }}" height="{{ cell.h }}" fill="{{ cell.fill }}" stroke="none"/>
{% endfor %}
<rect x="0" y="0" width="{{ width }}" height="{{ height }}" fill="none" stroke="#333333"/>
{% for dot in dots %}
<circle cx="{{ dot.x }}" cy="{{ dot.y }}" r="1.2" fill="{{ dot.colour }}"><title>{{ dot.label }}</title></circle>
{% endfor %}
<text x="0" y="{{ height + 16 }}" font-size="11">{{ x_name }} in [{{ x_lo }}, {{ x_hi }}]</text>
<text x="{{ width }}" y="-6" font-size="11" text-anchor="end">{{ y_name }} in [{{ y_lo }}, {{ y_hi }}]</text>
</g>
</svg>
"""

    def __init__(self, diagram, width=480, height=480, margin=24) -> None:
        axes = diagram.varying_axes
        if len(axes) != 2:
            raise PreconditionViolated(
                f"SVG output needs a sweep over exactly two parameters, got {len(axes)}"
            )
        self.diagram = diagram
        self.x_axis, self.y_axis = axes
        self.width = width
        self.height = height
        self.margin = margin

        # Create a Jinja2 environment
        self.env = Environment(loader=BaseLoader(), undefined=StrictUndefined)
        self.template = self.env.from_string(self.TEMPLATE)

    def _scale(self, value, axis, size, flip=False):
        values = self.diagram.axes[axis]
        lo, hi = float(values[0]), float(values[-1])
        fraction = (float(value) - lo) / (hi - lo)
        position = (1 - fraction) * size if flip else fraction * size
        return round(position, 3)

    def _cells(self):
        diagram = self.diagram
        xs = diagram.axes[self.x_axis]
        ys = diagram.axes[self.y_axis]
        cw = self.width / len(xs)
        ch = self.height / len(ys)
        cells = []
        for index, region_id in sorted(diagram.node_regions.items()):
            i, j = index[self.x_axis], index[self.y_axis]
            cells.append(
                {
                    "x": round(i * cw, 3),
                    "y": round(self.height - (j + 1) * ch, 3),
                    "w": round(cw + 0.05, 3),
                    "h": round(ch + 0.05, 3),
                    "fill": PALETTE[region_id % len(PALETTE)],
                }
            )
        return cells

    def _dots(self):
        dots = []
        for crossing in self.diagram.crossings:
            name = crossing.label.name if crossing.label is not None else "?"
            family_name = name.split("^")[0]
            dots.append(
                {
                    "x": self._scale(crossing.parameters[self.x_axis], self.x_axis, self.width),
                    "y": self._scale(
                        crossing.parameters[self.y_axis], self.y_axis, self.height, flip=True
                    ),
                    "colour": LABEL_COLOURS.get(family_name, "#555555"),
                    "label": name,
                }
            )
        return dots

    def generate(self):
        """Generate the SVG document."""
        diagram = self.diagram
        xs = diagram.axes[self.x_axis]
        ys = diagram.axes[self.y_axis]
        context = {
            "title": f"Caustic of {diagram.family['expression']}",
            "width": self.width,
            "height": self.height,
            "margin": self.margin,
            "cells": self._cells(),
            "dots": self._dots(),
            "x_name": f"l{self.x_axis + 1}",
            "y_name": f"l{self.y_axis + 1}",
            "x_lo": float(xs[0]),
            "x_hi": float(xs[-1]),
            "y_lo": float(ys[0]),
            "y_hi": float(ys[-1]),
        }

        # Render the template
        try:
            return self.template.render(**context)
        except Exception as e:
            print(f"Error rendering template: {e!s}", file=sys.stderr)
            return f"<!-- Error rendering diagram: {e!s} -->"
