"""Python access to the singlab library and command line tool."""

import json

from . import _singlab
from ._singlab import (
    SinglabError,
    command_names,
    dirichlet_ratio,
    dirichlet_test,
    preset_names,
    similarity_dimension,
)

__all__ = [
    "SinglabError",
    "alpha_estimate",
    "command_names",
    "dimension_bound",
    "dirichlet_ratio",
    "dirichlet_test",
    "ifs",
    "preset_names",
    "run",
    "similarity_dimension",
]


def _ifs_arg(ifs):
    return ifs if isinstance(ifs, str) else json.dumps(ifs)


def ifs(spec):
    """Resolved IFS (preset name or IFS document) as a dict."""
    return json.loads(_singlab.ifs_json(_ifs_arg(spec)))


def alpha_estimate(spec, ell, eps_ladder):
    return json.loads(_singlab.alpha_estimate_json(_ifs_arg(spec), ell, list(eps_ladder)))


def dimension_bound(s, d, alphas):
    return json.loads(_singlab.dimension_bound_json(s, d, list(alphas)))


def run(*args):
    """Runs a CLI subcommand in-process.

    Returns (exit_code, report) where report is parsed JSON when the output is
    JSON and raw text otherwise.
    """
    rc, out, err = _singlab.run([str(a) for a in args])
    text = out if out else err
    try:
        return rc, json.loads(text)
    except ValueError:
        return rc, text
