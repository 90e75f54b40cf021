"""Compiled kernels against their interpreted versions, and the env flag."""
import os
import subprocess
import sys

import numpy as np
import pytest

from helpers import random_connected
from pcon import _accel, _kernels

pytestmark = pytest.mark.skipif(not _accel.ENABLE_NUMBA, reason="numba disabled")


def both(name, *args):
    kernel = getattr(_kernels, name)
    a = [x.copy() if isinstance(x, np.ndarray) else x for x in args]
    b = [x.copy() if isinstance(x, np.ndarray) else x for x in args]
    ra = kernel(*a)
    rb = _accel.py_func(kernel)(*b)
    return ra, rb, a, b


def assert_same(ra, rb, a, b):
    assert np.array_equal(np.asarray(ra), np.asarray(rb))
    for x, y in zip(a, b):
        if isinstance(x, np.ndarray):
            assert np.array_equal(x, y)


def test_peel_and_prefix_kernels(rng):
    g = random_connected(rng, 80, 0.05)
    order = rng.permutation(g.n).astype(np.int64)
    live = np.empty(g.n, dtype=np.int64)
    alive = np.empty(g.n, dtype=np.bool_)
    for maximize in (False, True):
        assert_same(*both("peel_sweep_kernel", g.indptr, g.indices, g.degrees, order, maximize, live, alive))
    in_set = np.zeros(g.n, dtype=np.bool_)
    assert_same(*both("prefix_sweep_kernel", g.indptr, g.indices, g.degrees, order, in_set))


def test_peeling_order_kernels(rng):
    g = random_connected(rng, 80, 0.05)
    n, cap = g.n, g.n + g.m + 1
    buckets = int(g.degrees.max()) + 1
    assert_same(*both("degeneracy_kernel", g.indptr, g.indices, np.empty(n, np.int64), np.empty(buckets, np.int64),
                      np.empty(buckets, np.int64), np.empty(n, np.int64), np.empty(n, np.int64),
                      np.empty(n, np.int64), np.empty(n, np.int64)))
    weights = g.degrees.astype(np.int64)
    assert_same(*both("ratio_peel_kernel", g.indptr, g.indices, weights, np.empty(n, np.int64),
                      np.empty(n, np.bool_), np.empty(cap, np.int64), np.empty(cap, np.int64),
                      np.empty(cap, np.int64), np.empty(n, np.int64), np.empty(n, np.int64)))


def test_diffusion_kernels(rng):
    g = random_connected(rng, 80, 0.05)
    n = g.n
    ra, rb, a, b = both("ppr_push_kernel", g.indptr, g.indices, g.degrees, 3, 0.1, 1e-4, np.zeros(n), np.zeros(n),
                        np.empty(n, np.int64), np.zeros(n, np.bool_))
    assert ra == rb
    assert np.array_equal(a[6], b[6]) and np.array_equal(a[7], b[7])
    thresholds = np.full(20, 1e-4)
    ra, rb, a, b = both("hk_relax_kernel", g.indptr, g.indices, g.degrees, 3, 2.0, thresholds, np.zeros(n),
                        np.zeros(n), np.zeros(n), np.empty(n, np.int64), np.empty(n, np.int64))
    assert ra == rb and np.array_equal(a[6], b[6])
    x = rng.standard_normal(n)
    inv = 1.0 / np.sqrt(g.degrees)
    _, _, a, b = both("lazy_walk_matvec", g.indptr, g.indices, inv, x, np.empty(n))
    assert np.allclose(a[4], b[4], rtol=0, atol=1e-15)


def test_brute_force_kernel(rng):
    g = random_connected(rng, 9, 0.3)
    adjmask = np.zeros(g.n, dtype=np.int64)
    for u in range(g.n):
        for v in g.neighbors(u):
            adjmask[u] |= 1 << int(v)
    ra, rb, _, _ = both("brute_force_kernel", adjmask, g.degrees, g.m)
    assert tuple(ra) == tuple(rb)


def test_fallback_path_same_results(tmp_path):
    """Same clusters with the env flag set, in a fresh interpreter."""
    script = (
        "import warnings, numpy as np\n"
        "from pcon import _accel\n"
        "from pcon.generators import GenSpec, generate\n"
        "from pcon.structural import pcon_core, pcon_de\n"
        "from pcon.diffusion import local_cluster, DiffusionParams\n"
        "warnings.simplefilter('ignore')\n"
        "g, _ = generate(GenSpec.parse('planted:n=300,c=3,k_in=6,mu=0.2', seed=4))\n"
        "out = [_accel.ENABLE_NUMBA]\n"
        "for r in (pcon_core(g), pcon_de(g), local_cluster(g, 'ppr', 5, DiffusionParams(alpha=0.1, eps=1e-4)),\n"
        "          local_cluster(g, 'hk', 5, DiffusionParams(t=3.0, eps=1e-4))):\n"
        "    out.append((r.members.tolist(), str(r.conductance)))\n"
        "print(repr(out))\n"
    )
    env = dict(os.environ)
    runs = {}
    for flag in ("0", "1"):
        env["PCON_DISABLE_NUMBA"] = flag
        proc = subprocess.run([sys.executable, "-c", script], env=env, capture_output=True, text=True, check=True)
        runs[flag] = eval(proc.stdout)
    assert runs["0"][0] is True and runs["1"][0] is False
    assert runs["0"][1:] == runs["1"][1:]
