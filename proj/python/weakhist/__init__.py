# Copyright 2026 The weakhist Authors
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
"""Weak values and history consistency for pre/post-selected systems."""

from ._core import (
    Scenario,
    ScenarioParseError,
    WeakhistError,
    abl,
    abl_from_weak_value,
    builtin,
    builtin_names,
    conditional_weight,
    consistency,
    load,
    parse_scenario,
    run_cli,
    weak_value,
)

__all__ = [
    "Scenario",
    "ScenarioParseError",
    "WeakhistError",
    "abl",
    "abl_from_weak_value",
    "builtin",
    "builtin_names",
    "conditional_weight",
    "consistency",
    "load",
    "parse_scenario",
    "run_cli",
    "weak_value",
]
__version__ = "0.1.0"
