"""Catalogue table renderer."""

import sys

from jinja2 import BaseLoader, Environment, StrictUndefined


class CatalogueTableRenderer:
    """Render the ordinary and even classification tables as Markdown."""

    TEMPLATE = """
{%- if ordinary %}
### Singularity classes of typical families
| Class | Normal form | Restrictions | mu | c | beta |
|---|---|---|---|---|---|
{% for row in ordinary %}
| {{ row.class }} | {{ row.normal_form }} | {{ row.restrictions }} | {{ row.mult }} | {{ row.codim }} | {{ row.beta }} |
{% endfor %}
{% endif %}

{%- if even %}
### Singularity classes of typical even families
| Class | Normal form | Restrictions | mu_e | c_e | beta |
|---|---|---|---|---|---|
{% for row in even %}
| {{ row.class }} | {{ row.normal_form }} | {{ row.restrictions }} | {{ row.mult }} | {{ row.codim }} | {{ row.beta }} |
{% endfor %}
{% endif %}

{% if not ordinary and not even %}
No catalogue rows selected.
{% endif %}
"""

    def __init__(self, rows) -> None:
        self.rows = [row if isinstance(row, dict) else row.to_dict() for row in rows]

        # Create a Jinja2 environment
        self.env = Environment(loader=BaseLoader(), undefined=StrictUndefined)
        self.template = self.env.from_string(self.TEMPLATE)

    def generate(self):
        """Generate the Markdown tables."""
        context = {
            "ordinary": [row for row in self.rows if not row["even"]],
            "even": [row for row in self.rows if row["even"]],
        }

        # Render the template
        try:
            return self.template.render(**context).strip()
        except Exception as e:
            print(f"Error rendering template: {e!s}", file=sys.stderr)
            return f"Error rendering catalogue: {e!s}"
