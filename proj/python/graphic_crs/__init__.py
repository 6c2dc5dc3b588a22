# Copyright 2026 The Authors.
#
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


"""Contention resolution schemes for graphic matroids."""

from ._core import (
    CapExceeded,
    CrsError,
    Instance,
    coupling_gap_counts,
    coupling_gap_instance,
    exact_offsample_expectation,
    forest_union,
    generate,
    mofs,
    simulate,
    tie_flip_instance,
    verify,
)

__all__ = [
    "CapExceeded",
    "CrsError",
    "Instance",
    "coupling_gap_counts",
    "coupling_gap_instance",
    "exact_offsample_expectation",
    "forest_union",
    "generate",
    "mofs",
    "simulate",
    "tie_flip_instance",
    "verify",
]
