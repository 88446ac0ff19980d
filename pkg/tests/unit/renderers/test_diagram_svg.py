"""Tests for the SVG diagram renderer."""

import numpy as np
import pytest

from germlab.models.errors import PreconditionViolated
from germlab.renderers.diagram_svg import LABEL_COLOURS, DiagramSvgRenderer


class TestDiagramSvgRenderer:
    """Tests for the DiagramSvgRenderer class."""

    def test_document(self, sample_diagram):
        """Test the title, cells and crossing dot."""
        svg = DiagramSvgRenderer(sample_diagram, width=100, height=100).generate()

        # Verify
        assert svg.startswith("<svg")
        assert "<title>Caustic of k1^4 + l1*k1^2 + l2*k1</title>" in svg
        assert svg.count("<rect") == 5
        assert f'fill="{LABEL_COLOURS["A_2"]}"' in svg
        assert "l1 in [-1.0, -0.5]" in svg

    def test_dot_position(self, sample_diagram):
        """Test that the y axis is flipped."""
        renderer = DiagramSvgRenderer(sample_diagram, width=100, height=100)

        dot = renderer._dots()[0]

        assert dot["x"] == 50.0
        assert dot["y"] == 25.0
        assert dot["label"] == "A_2^+"

    def test_needs_two_axes(self, sample_diagram):
        """Test that a one-parameter sweep cannot be drawn."""
        sample_diagram.axes = [np.array([-1.0, -0.5]), np.array([0.0])]

        with pytest.raises(PreconditionViolated):
            DiagramSvgRenderer(sample_diagram)
