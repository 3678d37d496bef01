import random

import numpy as np
import pytest

from conftest import random_obg
from prbg import _pykernels, kernels

compiled = pytest.importorskip("prbg._ckernels")


def test_compiled_backend_is_selected():
    assert kernels.BACKEND_NAME == "compiled"


@pytest.mark.parametrize("seed", range(5))
def test_backends_return_identical_witnesses(seed):
    rng = random.Random(seed)
    for _ in range(200):
        a = random_obg(rng, 14).adjacency
        assert compiled.fast_violation(a) == _pykernels.fast_violation(a)
        assert compiled.brute_violation(a) == _pykernels.brute_violation(a)


def test_reach_tables_match():
    rng = random.Random(7)
    for _ in range(50):
        a = random_obg(rng, 12).adjacency
        ours = compiled.reach_tables(a)
        ref = _pykernels.reach_tables(a)
        for x, y in zip(ours, ref):
            assert np.array_equal(np.asarray(x), np.asarray(y))


@pytest.mark.parametrize("nu,nv", [(1, 1), (2, 3), (3, 3), (4, 3), (4, 4)])
def test_exact_search_backends_agree(nu, nv):
    loose = [[nu * nv] * (nv + 1) for _ in range(nu)]
    assert compiled.max_prbg_search(nu, nv, loose) == _pykernels.max_prbg_search(nu, nv, loose)


def test_fallback_is_selectable(monkeypatch):
    import importlib

    monkeypatch.setenv("PRBG_PURE_PYTHON", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND_NAME == "python"
        assert mod.fast_violation is _pykernels.fast_violation
    finally:
        monkeypatch.delenv("PRBG_PURE_PYTHON")
        importlib.reload(kernels)
