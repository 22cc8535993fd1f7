import json

import numpy as np
import pytest

from digraph_consensus.fuzz import Finding, FuzzResult, fuzz, instance
from digraph_consensus.graph import standardize
from digraph_consensus.spectral import eigenvalues, h_exact


def test_instance_is_replayable():
    a = instance(5, 4, 17)
    b = instance(5, 4, 17)
    assert np.array_equal(a.weights, b.weights)
    assert not np.array_equal(a.weights, instance(5, 4, 18).weights)
    w = instance(1, 6, 3, b=2.5).weights
    assert w.max() <= 2.5 and w.min() >= 0


def test_fuzz_small_run():
    res = fuzz(3, 2000, seed=11)
    s = res.summary()
    assert s["region_violations"] == 0
    assert s["max_imag"] <= h_exact(3).value + 1e-12
    assert s["gap_to_h"] >= -1e-12
    # the reported maximizer replays to the same imaginary part
    lt = standardize(instance(11, 3, s["max_imag_index"]), 1.0)
    assert eigenvalues(lt).values.imag.max() == pytest.approx(s["max_imag"], abs=1e-15)


def test_fuzz_deterministic_and_worker_independent():
    a = fuzz(5, 3000, seed=3, chunk=700).to_json()
    b = fuzz(5, 3000, seed=3, chunk=700, workers=4).to_json()
    c = fuzz(5, 3000, seed=3, chunk=700).to_json()
    assert a == b == c
    assert fuzz(5, 3000, seed=4).to_json() != a


def test_fuzz_validation():
    with pytest.raises(ValueError):
        fuzz(1, 10)
    with pytest.raises(ValueError):
        fuzz(3, 0)


def test_findings_serialize():
    res = FuzzResult(3, 1, 0, 1.0, max_imag=0.1, max_imag_index=0)
    res.polygon_violations.append(Finding("polygon", 0, 3, 0, 1.0, [[0.0] * 3] * 3, 0.2 + 0.3j))
    d = json.loads(res.to_json())
    assert d["summary"]["polygon_violations"] == 1
    assert d["polygon_violations"][0]["eigenvalue"] == [0.2, 0.3]
