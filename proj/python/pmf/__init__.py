"""p-adic modular forms: q-expansions, operator calculus, Eisenstein measures."""

import json as _json

try:
    from ._pmf import *  # noqa: F401,F403
    from . import _pmf as _core
except ImportError:  # built in-tree, module sits next to the package
    from _pmf import *  # noqa: F401,F403
    import _pmf as _core


def verify(chi, p, c_set, **kwargs):
    """Run the four orientation conditions; returns the report as a dict."""
    return _json.loads(_core.verify_json(chi, p, list(c_set), **kwargs))


def kummer_units(measure, chi, p, M, Q, c, K):
    """Kummer congruence check on the unit-supported moments; returns a dict."""
    return _json.loads(_core.kummer_units_json(measure, chi, p, M, Q, c, K))


def form_to_dict(f):
    return _json.loads(f.to_json())
