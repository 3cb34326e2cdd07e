"""Exact minimal-model sweeps for horospherical moment polytopes.

Thin wrapper over the C++ extension: documents go in as dicts (or JSON
text), reports come back as dicts. All rationals are exact "p/q" strings.
"""

import json as _json

from _polymmp import (  # noqa: F401
    AmpleError,
    InternalError,
    InvariantError,
    SchemaError,
    __version__,
)
import _polymmp


def _text(document):
    if isinstance(document, str):
        return document
    return _json.dumps(document)


def run(document, oracle="sweep"):
    """Full sweep: classes, steps, terminal data and genericity."""
    return _json.loads(_polymmp.run_trace(_text(document), oracle))


def classes(document, oracle="sweep"):
    """Equivalence classes of the parameter sweep."""
    return _json.loads(_polymmp.class_decomposition(_text(document), oracle))


def check(document):
    """Singularity and genericity report of the input variety."""
    return _json.loads(_polymmp.check(_text(document)))


def fiber(document):
    """Terminal data: base lattice, absorbed roots and the general fiber."""
    return _json.loads(_polymmp.fiber(_text(document)))


def canonical_input(document):
    """Canonical form of a document (parse followed by emit)."""
    return _json.loads(_polymmp.canonical_input(_text(document)))


def render(document, out_dir, format="svg"):
    """Writes per-class frames into out_dir; returns the file paths."""
    return _polymmp.render(_text(document), out_dir, format)
