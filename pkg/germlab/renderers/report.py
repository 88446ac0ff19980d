"""Text reports for classification, versality, multiplicity and sweep results."""

import sys

from jinja2 import BaseLoader, Environment, StrictUndefined


def format_as_text(result):
    """Render any report dictionary produced by germlab.models.formatters."""
    renderer = ReportTemplateRenderer(result)
    return renderer.generate()


class ReportTemplateRenderer:
    """Render result dictionaries using Jinja2 templates."""

    TEMPLATE = """
{%- macro render_label(label) -%}
### {{ label.name }}
{% if label.normal_form %}
- Normal form: `{{ label.normal_form }}`
{% endif %}
{% if label.modulus is not none %}
- Modulus: {{ label.modulus }}
{% endif %}
{% if label.mult is not none %}
- Multiplicity {{ label.mult }}, codimension {{ label.codim }}, modality {{ label.modality }}, beta {{ label.beta }}
{% endif %}
{% if label.extremum %}
- Extremum: {{ label.extremum }}
{% endif %}
- Parity: {{ label.parity }} ({{ label.confidence }})
{% if label.reason %}
- Reason: {{ label.reason }}
{% endif %}
{% for note in label.notes %}
- Note: {{ note }}
{% endfor %}
{%- endmacro -%}

{%- macro render_versality(report) -%}
### Versality of {{ report.label }}: {{ report.verdict }}
- Test statement: {{ report.statement }}
- Rank {{ report.rank }} of {{ report.combined_test_set|length }} test vectors in {{ report.nparams }} parameters
- Minimal number of parameters: {{ report.min_parameters }}
{% if report.normal_form %}
- Target family: `{{ report.normal_form }}`
{% endif %}
{% for item in report.combined_test_set %}
- {{ item.name }} = ({{ item.vector|join(", ") }})
{% endfor %}
{% if report.reason %}
- Reason: {{ report.reason }}
{% endif %}
{% for note in report.notes %}
- Note: {{ note }}
{% endfor %}
{%- endmacro -%}

{%- macro render_basis(key, value, basis) -%}
### {{ key }} = {{ value }}
- Quotient basis: {{ basis.monomial_basis|join(", ") if basis.monomial_basis else "(empty)" }}
- Truncation degree {{ basis.truncation_degree }}, {{ "stabilized" if basis.stabilized else "not stabilized" }}
{%- endmacro -%}

{%- macro render_diagram(diagram) -%}
### Caustic sweep of `{{ diagram.family.expression }}`
- Grid: {% for axis in diagram.axes %}{{ axis.parameter }} in [{{ axis.lo }}, {{ axis.hi }}] ({{ axis.count }}){% if not loop.last %}, {% endif %}{% endfor %}

- Crossings: {{ diagram.crossings|length }}{% if diagram.labels %} ({{ diagram.labels|join(", ") }}){% endif %}

- Diverged seeds: {{ diagram.diverged_seeds }}, unresolved cells: {{ diagram.unresolved_cells|length }}

#### Regions
{% for region in diagram.regions %}
- Region {{ region.region }} ({{ region.nodes }} nodes, sample {{ format_point(region.sample) }}): {{ format_census(region) }}
{% endfor %}
{%- endmacro -%}

{% if error %}
Error: {{ error }}
{% endif %}
{% if label %}
{{ render_label(label) }}
{% endif %}
{% if versality %}
{{ render_versality(versality) }}
{% endif %}
{% if basis %}
{{ render_basis(mult_key, mult_value, basis) }}
{% endif %}
{% if diagram %}
{{ render_diagram(diagram) }}
{% endif %}
"""

    def __init__(self, result) -> None:
        self.result = result

        # Create a Jinja2 environment
        self.env = Environment(loader=BaseLoader(), undefined=StrictUndefined)

        # Add template functions
        self.env.globals.update(
            {
                "format_point": self.format_point,
                "format_census": self.format_census,
            }
        )

        self.template = self.env.from_string(self.TEMPLATE)

    @staticmethod
    def format_point(values):
        return "(" + ", ".join(f"{float(v):.4g}" for v in values) + ")"

    @staticmethod
    def format_census(region):
        parts = [f"{count} basic {name}" for name, count in sorted(region["basic"].items())]
        if region["twin_pairs"]:
            parts.append(f"{region['twin_pairs']} twin pairs")
        if region["plain"]:
            parts.append(f"{region['plain']} critical points")
        return ", ".join(parts) if parts else "no critical points"

    def generate(self):
        """Generate the report text."""
        result = self.result
        mult_key = "mu_e" if "mu_e" in result else "mu"
        context = {
            "error": result.get("error"),
            "label": result.get("label"),
            "versality": result.get("versality"),
            "basis": result.get("basis"),
            "mult_key": mult_key,
            "mult_value": result.get(mult_key),
            "diagram": result if "crossings" in result else None,
        }

        # Render the template
        try:
            return self.template.render(**context).strip()
        except Exception as e:
            print(f"Error rendering template: {e!s}", file=sys.stderr)
            return f"Error rendering report: {e!s}"
