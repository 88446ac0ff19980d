"""Formatters turning results into JSON-ready dictionaries and CSV text."""

import csv
import io
import json


def format_classification(label, expression=None, jet=None):
    """Classification report for one germ."""
    report = {"expression": expression, "label": label.to_dict()}
    if jet is not None:
        report["jet"] = {
            "nu": jet.nu,
            "max_degree": jet.max_degree,
            "mode": jet.mode,
            "parity": jet.parity,
        }
    return report


def format_versality(report, expression=None):
    return {"expression": expression, "versality": report.to_dict()}


def format_multiplicity(mult, basis, expression=None):
    """μ (or μ_e) with its quotient basis."""
    key = "mu_e" if basis.parity == "even" else "mu"
    return {"expression": expression, key: mult, "basis": basis.to_dict()}


def format_diagram(diagram):
    return diagram.to_dict()


def diagram_to_csv(diagram):
    """One row per crossing: lambda1..lambdal, label, k1..knu, residual."""
    nparams = diagram.family["nparams"]
    nu = diagram.family["nu"]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        [f"lambda{j + 1}" for j in range(nparams)]
        + ["label"]
        + [f"k{i + 1}" for i in range(nu)]
        + ["residual"]
    )
    for crossing in diagram.crossings:
        label = crossing.label.name if crossing.label is not None else ""
        writer.writerow(
            [repr(float(v)) for v in crossing.parameters]
            + [label]
            + [repr(float(v)) for v in crossing.location]
            + [repr(float(crossing.residual))]
        )
    return buffer.getvalue()


def to_json(payload):
    """Stable JSON text (sorted keys) so identical runs give identical bytes."""
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False)


def get_json_schema():
    """Return the JSON schema of the classification report."""
    nullable_string = {"type": ["string", "null"]}
    scalar = {
        "oneOf": [
            {"type": "integer"},
            {"type": "number"},
            {"type": "string", "description": "exact rational written as p/q"},
            {"type": "null"},
        ]
    }
    return {
        "type": "object",
        "properties": {
            "expression": nullable_string,
            "label": {
                "type": "object",
                "properties": {
                    "name": {"type": "string"},
                    "family": {
                        "type": "string",
                        "enum": [
                            "Regular",
                            "Morse",
                            "A",
                            "D",
                            "E6",
                            "Ae",
                            "Xe",
                            "YeCandidate",
                            "YtildeE",
                            "Ze",
                            "Unknown",
                        ],
                    },
                    "index": {"type": ["integer", "array", "null"]},
                    "sign_data": {"type": "string"},
                    "modulus": scalar,
                    "mult": {"type": ["integer", "null"]},
                    "codim": {"type": ["integer", "null"]},
                    "beta": scalar,
                    "modality": {"type": ["integer", "null"]},
                    "extremum": {"type": ["string", "null"], "enum": ["min", "max", None]},
                    "normal_form": nullable_string,
                    "parity": {"type": "string", "enum": ["general", "even"]},
                    "reason": {"type": "string"},
                    "confidence": {"type": "string", "enum": ["exact", "heuristic"]},
                    "notes": {"type": "array", "items": {"type": "string"}},
                    "details": {"type": "object"},
                },
                "required": ["name", "family", "parity", "confidence"],
            },
            "jet": {
                "type": "object",
                "properties": {
                    "nu": {"type": "integer"},
                    "max_degree": {"type": "integer"},
                    "mode": {"type": "string", "enum": ["exact", "float"]},
                    "parity": {"type": "string", "enum": ["general", "even"]},
                },
            },
            "error": {"type": "string"},
        },
    }
