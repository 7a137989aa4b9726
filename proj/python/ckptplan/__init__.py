# Copyright 2026 The ckptplan Authors
# SPDX-License-Identifier: Apache-2.0
"""Activation checkpoint planning for linear networks."""

from ._ckptplan import (
    DataError,
    GuardError,
    Profile,
    compare,
    dynamic_peak,
    generate_builtin,
    generate_random,
    load_profile,
    parse_profile,
    simulate,
    solve,
    solvers,
    static_cost,
)

__all__ = [
    "DataError",
    "GuardError",
    "Profile",
    "compare",
    "dynamic_peak",
    "generate_builtin",
    "generate_random",
    "load_profile",
    "parse_profile",
    "simulate",
    "solve",
    "solvers",
    "static_cost",
]
