# Copyright 2026 The cyclebound Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Exact lower bounds on the size of nontrivial Collatz cycles."""

from ._core import (
    InsufficientPrecision,
    accel_odd_run,
    bound_chain,
    collatz_step,
    delta_continued_fraction,
    generate_table,
    profile,
    prove_average_bound,
    run_cli,
    smallest_denominator_in_open_interval,
    verify_range,
    x0_threshold,
)

__all__ = [
    "InsufficientPrecision",
    "accel_odd_run",
    "bound_chain",
    "collatz_step",
    "delta_continued_fraction",
    "generate_table",
    "profile",
    "prove_average_bound",
    "run_cli",
    "smallest_denominator_in_open_interval",
    "verify_range",
    "x0_threshold",
]
