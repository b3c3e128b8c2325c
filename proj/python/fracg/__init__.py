"""Python veneer over the fractional g-Laplacian laboratory.

The heavy lifting lives in the compiled ``_fracg`` module; this package adds
only a helper for driving the command-line tool from tests and notebooks.
"""

import os
import subprocess

from _fracg import (
    Field,
    YoungFunction,
    bump,
    cap,
    certify,
    constant,
    estimate_indices,
    eval_fracg,
    gaussian,
    load_field,
    make_young,
    max_principle,
    moving_planes,
    power_decay,
    save_field,
    solve_ball,
)

__all__ = [
    "Field",
    "YoungFunction",
    "bump",
    "cap",
    "certify",
    "cli",
    "constant",
    "estimate_indices",
    "eval_fracg",
    "gaussian",
    "load_field",
    "make_young",
    "max_principle",
    "moving_planes",
    "power_decay",
    "save_field",
    "solve_ball",
]


def cli(*args, check=False):
    """Run the fracg command-line tool (path from $FRACG_CLI, else PATH)."""
    exe = os.environ.get("FRACG_CLI", "fracg")
    return subprocess.run([exe, *map(str, args)], capture_output=True, text=True, check=check)
