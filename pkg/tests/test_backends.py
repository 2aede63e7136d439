import os
import subprocess
import sys

import numpy as np
import pytest

from hfree import _kernels_numpy
from hfree.graphs import edge_arrays, edge_count, edge_id, replicate_rng
from hfree.oracle import copy_family
from hfree.patterns import parse_pattern
from hfree.process import plan_arrays

numba_kernels = pytest.importorskip("hfree._kernels_numba")

PATTERNS = [parse_pattern(s) for s in ("K3", "C4", "K4")]


def _instance(n, h, seed):
    k, p, ptr, flat = plan_arrays(h)
    eu, ev = edge_arrays(n)
    order = np.argsort(replicate_rng(seed, 0).random(edge_count(n)), kind="stable")
    return eu, ev, order, (k, p, ptr, flat)


@pytest.mark.parametrize("h", PATTERNS, ids=lambda h: h.label())
@pytest.mark.parametrize("n", [8, 17, 30])
def test_run_process_parity(n, h):
    for seed in range(3):
        eu, ev, order, plan = _instance(n, h, seed)
        a = _kernels_numpy.run_process(n, eu, ev, order, *plan)
        b = numba_kernels.run_process(n, eu, ev, order, *plan)
        assert np.array_equal(a, b), f"n={n} seed={seed}"


@pytest.mark.parametrize("h", PATTERNS, ids=lambda h: h.label())
def test_run_process_watched_parity(h):
    n = 16
    for seed in range(3):
        eu, ev, order, plan = _instance(n, h, seed)
        fid = edge_id(n, 0, 1)
        keep = order[order != fid]
        a_acc, a_rank = _kernels_numpy.run_process_watched(n, eu, ev, keep, *plan, 0, 1)
        b_acc, b_rank = numba_kernels.run_process_watched(n, eu, ev, keep, *plan, 0, 1)
        assert np.array_equal(a_acc, b_acc)
        assert a_rank == b_rank


def petersen_edges():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return outer + inner + spokes


def test_cycle_counts_known_graphs():
    # K4: 4 triangles, 3 four-cycles, five-cycle count withheld
    eu = np.array([0, 0, 0, 1, 1, 2]); ev = np.array([1, 2, 3, 2, 3, 3])
    for mod in (_kernels_numpy, numba_kernels):
        assert tuple(int(x) for x in mod.cycle_counts(4, eu, ev)) == (4, 3, -1)
    # C5: one five-cycle, nothing shorter
    eu = np.array([0, 1, 2, 3, 0]); ev = np.array([1, 2, 3, 4, 4])
    for mod in (_kernels_numpy, numba_kernels):
        assert tuple(int(x) for x in mod.cycle_counts(5, eu, ev)) == (0, 0, 1)
    # Petersen graph: girth 5 with exactly 12 five-cycles
    pe = petersen_edges()
    eu = np.array([e[0] for e in pe]); ev = np.array([e[1] for e in pe])
    for mod in (_kernels_numpy, numba_kernels):
        assert tuple(int(x) for x in mod.cycle_counts(10, eu, ev)) == (0, 0, 12)


def test_cycle_counts_parity_random():
    rng = np.random.default_rng(5)
    for n in (10, 20, 33):
        eu_all, ev_all = edge_arrays(n)
        for density in (0.1, 0.3):
            mask = rng.random(edge_count(n)) < density
            eu, ev = eu_all[mask], ev_all[mask]
            a = tuple(int(x) for x in _kernels_numpy.cycle_counts(n, eu, ev))
            b = tuple(int(x) for x in numba_kernels.cycle_counts(n, eu, ev))
            assert a == b


def test_open_pair_count_hand_value():
    n = 4
    eu, ev = edge_arrays(n)
    present = np.zeros(edge_count(n), dtype=bool)
    present[edge_id(n, 0, 1)] = True
    present[edge_id(n, 1, 2)] = True
    beta = np.full(edge_count(n), 0.9)
    beta[present] = 0.1
    beta[edge_id(n, 1, 3)] = 0.2  # below the threshold, so not counted
    # (0,2) is closed by the common neighbor 1; (0,3) and (2,3) stay open
    for mod in (_kernels_numpy, numba_kernels):
        assert int(mod.open_pair_count(n, eu, ev, present, beta, 0.5)) == 2


def test_open_pair_count_parity_random():
    rng = np.random.default_rng(9)
    n = 25
    eu, ev = edge_arrays(n)
    beta = rng.random(edge_count(n))
    present = beta < 0.15
    for t0 in (0.15, 0.4):
        a = int(_kernels_numpy.open_pair_count(n, eu, ev, present, beta, t0))
        b = int(numba_kernels.open_pair_count(n, eu, ev, present, beta, t0))
        assert a == b


def test_oracle_perm_sum_parity():
    h = parse_pattern("K3")
    n = 4
    m = edge_count(n)
    per_edge = [[] for _ in range(m)]
    for mask in copy_family(n, h):
        for e in range(m):
            if mask >> e & 1:
                per_edge[e].append(mask & ~(1 << e))
    ptr = np.zeros(m + 1, dtype=np.int64)
    flat = []
    for e, ms in enumerate(per_edge):
        flat.extend(ms)
        ptr[e + 1] = len(flat)
    flat = np.array(flat, dtype=np.uint64)
    a = _kernels_numpy.oracle_perm_sum(m, ptr, flat)
    b = numba_kernels.oracle_perm_sum(m, ptr, flat)
    assert tuple(int(x) for x in a) == tuple(int(x) for x in b)


def test_extremal_max_parity():
    for n, name in ((5, "K3"), (5, "C4")):
        h = parse_pattern(name)
        masks = np.array(copy_family(n, h), dtype=np.uint64)
        a = int(_kernels_numpy.extremal_max(edge_count(n), masks))
        b = int(numba_kernels.extremal_max(edge_count(n), masks))
        assert a == b


def _backend_of(env_value):
    env = dict(os.environ)
    if env_value is None:
        env.pop("HFREE_BACKEND", None)
    else:
        env["HFREE_BACKEND"] = env_value
    return subprocess.run(
        [sys.executable, "-c", "from hfree.backend import BACKEND; print(BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
    )


def test_backend_env_selection():
    assert _backend_of("numpy").stdout.strip() == "numpy"
    assert _backend_of("numba").stdout.strip() == "numba"
    assert _backend_of(None).stdout.strip() in ("numba", "numpy")
    bad = _backend_of("fortran")
    assert bad.returncode != 0
    assert "HFREE_BACKEND" in bad.stderr
