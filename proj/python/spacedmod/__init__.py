"""Exact analysis and multiplicative-basis synthesis for matrix presentations
of spaced modules.

The heavy lifting lives in the compiled extension ``spacedmod._core``; this
package adds a thin convenience layer returning parsed JSON.
"""

import json as _json

from . import _core

__all__ = [
    "analyze",
    "normalize",
    "certify",
    "witness",
    "canonicalize",
    "verify_basis",
    "monomial_mul",
    "monomial_pow",
]

monomial_mul = _core.monomial_mul
monomial_pow = _core.monomial_pow
canonicalize = _core.canonicalize


def analyze(presentation_json: str) -> dict:
    """Run validation, classification and every poset/graph check."""
    return _json.loads(_core.analyze(presentation_json))


def normalize(presentation_json: str, mode: str = "numeric") -> dict:
    """Analyze and synthesize the multiplicative basis (numeric or symbolic)."""
    return _json.loads(_core.normalize(presentation_json, mode))


def certify(presentation_json: str) -> dict:
    """Report every weight-function kernel generator with its residual."""
    return _json.loads(_core.certify(presentation_json))


def witness(family: str, params, field: str = "Q", seed: int = 1) -> dict:
    """Build a witness family and decide pairwise isomorphism."""
    return _json.loads(_core.witness(family, [str(p) for p in params], field, seed))


def verify_basis(basis_document: dict) -> dict:
    """Re-check a basis document produced by :func:`normalize`."""
    return _json.loads(_core.verify_basis(_json.dumps(basis_document)))
