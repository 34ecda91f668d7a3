import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphene_cs import _pykernels, kernels

ck = pytest.importorskip("graphene_cs._ckernels", reason="compiled core not built")


def _coeffs(rng, n):
    return rng.normal(size=n) + 1j * rng.normal(size=n)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(0, 120), st.integers(1, 300))
def test_hermite_table_agrees(seed, nmax, points):
    xi = np.random.default_rng(seed).uniform(-25, 25, points)
    a, b = ck.hermite_table(nmax, xi), _pykernels.hermite_table(nmax, xi)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-300)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 80))
def test_spinor_fields_agree(seed, size):
    rng = np.random.default_rng(seed)
    upper, lower = _coeffs(rng, size), _coeffs(rng, size)
    xi = np.linspace(-15, 15, 257)
    for got, ref in zip(ck.spinor_fields(upper, lower, xi), _pykernels.spinor_fields(upper, lower, xi)):
        assert np.allclose(got, ref, rtol=1e-11, atol=1e-12 * np.max(np.abs(ref)))


@pytest.mark.parametrize("cutoff", [0.0, 1e-16, 1e-3])
def test_bilinear_sum_cutoff(rng, cutoff):
    w = rng.normal(size=(30, 30)) * np.exp(-rng.uniform(0, 20, size=(30, 30)))
    left, right = rng.normal(size=(30, 100)), rng.normal(size=(30, 100))
    kept = np.where(np.abs(w) > cutoff * np.max(np.abs(w)), w, 0.0)
    assert np.allclose(kernels.bilinear_sum(w, left, right, cutoff),
                       np.einsum("nm,nj,mj->j", kept, left, right), rtol=1e-12, atol=1e-14)


def test_bilinear_sum_reference(rng):
    w, left, right = rng.normal(size=(5, 5)), rng.normal(size=(5, 7)), rng.normal(size=(5, 7))
    assert np.allclose(kernels.bilinear_sum(w, left, right), np.einsum("nm,nj,mj->j", w, left, right))


def test_readonly_inputs_accepted():
    x = np.linspace(-3, 3, 20)
    c = np.ones(4, dtype=complex)
    x.setflags(write=False)
    c.setflags(write=False)
    ck.spinor_fields(c, c, x)
    ck.hermite_table(3, x)


def test_backend_selected_at_import():
    assert kernels.BACKEND == "cython"
    env = dict(os.environ, GRAPHENE_CS_PURE="1")
    out = subprocess.run([sys.executable, "-c", "import graphene_cs.kernels as k; print(k.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"
