import os
import subprocess
import sys

import numpy as np
import pytest

from liecert import kernels
from liecert.chevalley import build_algebra, mutated_table
from liecert.kernels import _pure

try:
    from liecert.kernels import _ckernels
except ImportError:  # pragma: no cover - depends on the build
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def _args(t):
    return t.offsets, t.cols, t.vals, t.dim


def _random_triples(dim, n, seed):
    rng = np.random.default_rng(seed)
    return rng.integers(0, dim, size=(n, 3), dtype=np.int64)


@needs_ext
def test_compiled_backend_is_default():
    if os.environ.get("LIECERT_PURE") != "1":
        assert kernels.BACKEND == "cython"


def test_pure_backend_can_be_forced():
    code = "from liecert import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, LIECERT_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@needs_ext
@pytest.mark.parametrize("name", ["A2", "B3", "G2", "F4"])
def test_jacobi_kernels_agree_on_valid_tables(name):
    t = build_algebra(name).integer_table
    tr = _random_triples(t.dim, 3000, 1)
    a = _ckernels.jacobi_violations(*_args(t), tr)
    b = _pure.jacobi_violations(*_args(t), tr)
    assert list(a) == list(b) == []


@needs_ext
@pytest.mark.parametrize("name", ["A3", "C3", "G2"])
def test_jacobi_kernels_agree_on_mutated_tables(name):
    lie = build_algebra(name)
    # corrupt the first nonzero constant between two positive roots
    i, j, k, _ = next((i, j, k, c) for i, j, k, c in lie.iter_structure() if i >= lie.rank and j >= lie.rank)
    t = mutated_table(lie, i, j, k, 3)
    tr = _random_triples(t.dim, 4000, 2)
    a = list(_ckernels.jacobi_violations(*_args(t), tr))
    b = list(_pure.jacobi_violations(*_args(t), tr))
    assert a == b and a


@needs_ext
@pytest.mark.parametrize("name", ["A1", "A4", "B2", "D4", "G2", "F4"])
def test_killing_kernels_agree(name):
    t = build_algebra(name).integer_table
    a = np.asarray(_ckernels.killing_trace(*_args(t)))
    b = np.asarray(_pure.killing_trace(*_args(t)))
    assert np.array_equal(a, b)
    assert np.array_equal(a, a.T)


def test_killing_kernel_matches_dense_trace():
    lie = build_algebra("B2")
    t = lie.integer_table
    dense = np.zeros((t.dim, t.dim, t.dim), dtype=np.int64)
    for p in range(t.dim * t.dim):
        for e in range(int(t.offsets[p]), int(t.offsets[p + 1])):
            dense[p // t.dim, p % t.dim, int(t.cols[e])] = int(t.vals[e])
    # ad(b_i)[l, k] = dense[i, k, l]
    ref = np.einsum("ikl,jlk->ij", dense, dense)
    assert np.array_equal(np.asarray(kernels.killing_trace(*_args(t))), ref)


def test_empty_triples():
    t = build_algebra("A2").integer_table
    empty = np.zeros((0, 3), dtype=np.int64)
    assert len(kernels.jacobi_violations(*_args(t), empty)) == 0
    assert len(_pure.jacobi_violations(*_args(t), empty)) == 0
