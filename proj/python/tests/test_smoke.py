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
import numpy as np
import pytest

import weakhist


def test_builtins():
    assert weakhist.builtin_names() == ["three-box", "hardy"]
    s = weakhist.builtin("three-box")
    assert s.name == "three-box"
    assert set(s.observables) >= {"A", "B", "C"}
    assert all(check[3] for check in s.verify())


def test_three_box_numbers():
    s = weakhist.builtin("three-box")
    value, cls = s.weak_value("C")
    assert abs(value + 1) < 1e-12 and cls == "STWV"
    assert abs(s.abl("C", 1.0) - 0.2) < 1e-12
    assert abs(s.weight("C") - 1.0) < 1e-12
    report = s.consistency("C")
    assert abs(report["functional"] + 2 / 9) < 1e-12
    assert report["failure_mode"] == "Strange"


def test_matrix_level_api_against_numpy():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        op = (a + a.conj().T) / 2
        pre = rng.normal(size=4) + 1j * rng.normal(size=4)
        post = rng.normal(size=4) + 1j * rng.normal(size=4)
        pre /= np.linalg.norm(pre)
        post /= np.linalg.norm(post)
        want = np.vdot(post, op @ pre) / np.vdot(post, pre)
        got, _ = weakhist.weak_value(op, pre, post)
        assert abs(got - want) < 1e-9 * max(1, abs(want))
        e = np.outer(pre, pre.conj())
        w = weakhist.conditional_weight(e, np.outer(pre, pre.conj()), np.outer(post, post.conj()))
        assert abs(w - 1.0) < 1e-10
    assert abs(weakhist.abl_from_weak_value(-1) - 0.2) < 1e-12


def test_simulate_hardy_is_deterministic():
    s = weakhist.builtin("hardy")
    r1 = s.simulate("N1", delta=10.0, n=20000, seed=5)
    r2 = s.simulate("N1", delta=10.0, n=20000, seed=5, threads=1)
    assert np.array_equal(r1["samples"], r2["samples"])
    assert r1["samples"].shape == (20000,)
    x, p = r1["x"], r1["p_x"]
    assert abs(np.sum(0.5 * (p[1:] + p[:-1]) * np.diff(x)) - 1.0) < 1e-9


def test_round_trip_and_errors():
    s = weakhist.builtin("hardy")
    back = weakhist.parse_scenario(s.serialize())
    assert back.serialize() == s.serialize()
    with pytest.raises(weakhist.ScenarioParseError) as info:
        weakhist.parse_scenario("basis a b\nstate x 1 a\n")
    assert (info.value.line, info.value.column) == (2, 9)
    with pytest.raises(weakhist.WeakhistError) as info:
        weakhist.parse_scenario("basis a b\nstate x = 1 a + 1 b\npre x\npost x\n")
    assert info.value.kind == "NormalizationError"


def test_cli_entry_point():
    code, out, err = weakhist.run_cli(["abl", "builtin:three-box", "--obs", "C", "--outcome", "1"])
    assert code == 0 and "abl_probability = 0.2\n" in out and err == ""
