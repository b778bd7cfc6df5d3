"""Documented layouts of every CSV table and JSON document the CLI emits.

Exact rationals serialize as ``"num/den"`` strings, intervals as
``"[lo, hi]"`` strings of rationals, floats as JSON numbers (shortest
round-trip repr in CSV).
"""

CSV_COLUMNS = {
    "gen": ["n", "R_n_decimal", "R_n_exact", "residue_class"],
    "bounds": ["n", "index", "inequality", "lhs", "rhs", "margin", "k"],
    "scan": [
        "lambda_decimal", "lambda_exact",
        "c1-lower", "c1-upper", "c2-lower", "c2-upper",
        "c3-lower", "c3-upper", "c4-lower", "c4-upper",
        "violation_count",
    ],
    "convergence": ["k", "index", "value", "deviation"],
    "uniformity": ["k", "max_deviation", "worst_p", "worst_s"],
    "eigenvalues": ["k", "eigenvalue"],
    "matrix": ["j", "a_j", "b_j"],
    "modes": ["k", "mu", "E", "stable"],
    "chain": ["m", "K"],
}

_scalar = {"type": ["string", "number"]}
_lambda = {
    "type": "object",
    "required": ["decimal"],
    "properties": {"decimal": {"type": "string"}, "exact": {"type": "string"}},
    "additionalProperties": False,
}

SEQUENCE_SCHEMA = {
    "type": "object",
    "required": ["kind", "lambda", "backend", "N", "values"],
    "properties": {
        "kind": {"const": "sequence"},
        "lambda": _lambda,
        "backend": {"enum": ["float", "exact", "interval"]},
        "N": {"type": "integer", "minimum": 0},
        "warnings": {"type": "array", "items": {"type": "string"}},
        "values": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["n", "decimal", "exact"],
                "properties": {
                    "n": {"type": "integer"},
                    "decimal": {"type": "number"},
                    "exact": {"type": ["string", "null"]},
                },
            },
        },
    },
}

_violation = {
    "type": "object",
    "required": ["n", "index", "inequality", "lhs", "rhs", "margin"],
    "properties": {
        "n": {"type": "integer"},
        "index": {"type": "integer"},
        "inequality": {"type": "string"},
        "lhs": _scalar,
        "rhs": _scalar,
        "margin": _scalar,
        "k": {"type": "integer"},
    },
    "additionalProperties": False,
}

_attainment = {
    "type": "object",
    "required": ["n", "index", "inequality", "value"],
    "properties": {
        "n": {"type": "integer"},
        "index": {"type": "integer"},
        "inequality": {"type": "string"},
        "value": _scalar,
    },
    "additionalProperties": False,
}

BOUNDS_REPORT_SCHEMA = {
    "type": "object",
    "required": ["kind", "lambda", "backend", "checked_count", "violations", "warnings"],
    "properties": {
        "kind": {"enum": ["theorem", "conjecture", "splitting", "prop1"]},
        "lambda": _lambda,
        "backend": {"enum": ["float", "exact", "interval"]},
        "checked_count": {"type": "integer", "minimum": 0},
        "violations": {"type": "array", "items": _violation},
        "attained": {"type": "array", "items": _attainment},
        "boundary": {"type": "array", "items": _attainment},
        "undecided": {"type": "array"},
        "warnings": {"type": "array", "items": {"type": "string"}},
    },
    "additionalProperties": False,
}

SCAN_SCHEMA = {
    "type": "object",
    "required": ["kind", "backend", "N", "rows", "c2_region", "region_contiguous", "threshold_bracket"],
    "properties": {
        "kind": {"const": "scan"},
        "backend": {"enum": ["float", "exact", "interval"]},
        "N": {"type": "integer"},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["lambda", "first_violation", "violation_count"],
                "properties": {
                    "lambda": _lambda,
                    "first_violation": {
                        "type": "object",
                        "additionalProperties": {"type": ["integer", "null"]},
                    },
                    "violation_count": {"type": "integer"},
                },
            },
        },
        "c2_region": {"type": "array", "items": {"type": "string"}},
        "region_contiguous": {"type": "boolean"},
        "threshold_bracket": {"type": ["array", "null"]},
    },
}

CONVERGENCE_SCHEMA = {
    "type": "object",
    "required": ["p", "s", "k_max", "limit", "samples", "monotone_tail", "estimated_rate"],
    "properties": {
        "kind": {"enum": ["decay", "limit"]},
        "p": {"type": "integer"},
        "s": {"type": "integer"},
        "k_max": {"type": "integer"},
        "limit": _scalar,
        "samples": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["k", "index", "value", "deviation"],
                "properties": {"k": {"type": "integer"}, "index": {"type": "integer"}, "value": _scalar, "deviation": _scalar},
            },
        },
        "monotone_tail": {"type": "boolean"},
        "estimated_rate": {"type": ["number", "null"]},
    },
}

UNIFORMITY_SCHEMA = {
    "type": "object",
    "required": ["kind", "rows"],
    "properties": {
        "kind": {"const": "uniformity"},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["k", "max_deviation", "worst"],
                "properties": {
                    "k": {"type": "integer"},
                    "max_deviation": {"type": "number"},
                    "worst": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                },
            },
        },
    },
}

SPECTRUM_SCHEMA = {
    "type": "object",
    "required": ["provenance", "N", "eigenvalues", "gaps", "ids"],
    "properties": {
        "provenance": {"enum": ["bellissard", "lambda_seq_T1", "lambda_seq_T2", "dyson", "almost_mathieu", None]},
        "N": {"type": "integer", "minimum": 1},
        "eigenvalues": {"type": "array", "items": {"type": "number"}},
        "gaps": {"type": "array", "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}},
        "ids": {"type": "array", "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}},
        "meta": {"type": "object"},
        "modes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["mu", "E", "stable"],
                "properties": {"mu": {"type": "number"}, "E": {"type": ["number", "null"]}, "stable": {"type": "boolean"}},
            },
        },
    },
}
