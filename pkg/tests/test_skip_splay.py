import math
import random

import pytest

from layerws import SkipSplayTree
from layerws.errors import DictError, MissingKeyError
from layerws.skip_splay import _ancestor_at, _band_of_height, _height


def perfect_tree_heights(n):
    """Brute-force node heights by building the balanced tree explicitly."""
    heights = {}

    def build(lo, hi):
        if lo > hi:
            return 0
        mid = (lo + hi) // 2
        h = 1 + max(build(lo, mid - 1), build(mid + 1, hi))
        heights[mid] = h
        return h

    build(1, n)
    return heights


@pytest.mark.parametrize("k", [2, 3, 4])
def test_height_formula_matches_enumeration(k):
    n = (1 << (1 << (k - 1))) - 1
    brute = perfect_tree_heights(n)
    for key in range(1, n + 1):
        assert _height(key) == brute[key]


def test_band_and_aux_sizes_k3():
    s = SkipSplayTree(3)
    assert s.n == 15
    assign = s.aux_assignment()
    top = sorted(k for k, r in assign.items() if r == 8)
    assert top == [4, 8, 12]
    by_aux = {}
    for key, root in assign.items():
        by_aux.setdefault(root, []).append(key)
    sizes = sorted(len(v) for v in by_aux.values())
    assert sizes == [1] * 12 + [3]  # twelve singletons plus the top band


def test_aux_sizes_k4():
    s = SkipSplayTree(4)
    assert s.n == 255
    by_aux = {}
    for key, root in s.aux_assignment().items():
        by_aux.setdefault(root, []).append(key)
    top = by_aux[128]
    assert len(top) == 15  # 2**(8-4) - 1
    counts = {}
    for members in by_aux.values():
        counts[len(members)] = counts.get(len(members), 0) + 1
    assert counts == {15: 1, 3: 16, 1: 192}


def test_build_k2_path_of_singletons():
    s = SkipSplayTree(2)
    assert s.n == 3
    by_aux = {}
    for key, root in s.aux_assignment().items():
        by_aux.setdefault(root, []).append(key)
    assert sorted(len(v) for v in by_aux.values()) == [1, 1, 1]
    assert not s.validate()


def test_parameter_range():
    with pytest.raises(ValueError):
        SkipSplayTree(1)
    with pytest.raises(ValueError):
        SkipSplayTree(6)


def test_updates_rejected():
    s = SkipSplayTree(2)
    with pytest.raises(DictError):
        s.insert(9)
    with pytest.raises(DictError):
        s.delete(1)
    with pytest.raises(MissingKeyError):
        s.access(99)


def test_access_returns_positive_cost_and_keeps_bst():
    s = SkipSplayTree(3)
    rng = random.Random(4)
    for _ in range(300):
        cost = s.access(rng.randint(1, s.n))
        assert cost > 0
    assert not s.validate()


def test_every_access_preserves_all_band_invariants():
    s = SkipSplayTree(3)
    rng = random.Random(8)
    for i in range(150):
        s.access(rng.randint(1, s.n))
        found = s.validate()
        assert not found, (i, [str(v) for v in found[:4]])


def test_aux_membership_never_changes():
    s = SkipSplayTree(3)
    before = s.aux_assignment()
    rng = random.Random(1)
    for _ in range(500):
        s.access(rng.randint(1, s.n))
    assert s.aux_assignment() == before
    assert not s.validate()


def test_repeated_access_reaches_band_linear_cost():
    # one access can re-hang a band under its other boundary element, so the
    # second access may still pay one cold search; from the third access on
    # the whole chain is warm and the cost is linear in the band count
    s = SkipSplayTree(4)
    rng = random.Random(17)
    for _ in range(50):
        x = rng.randint(1, s.n)
        first = s.access(x)
        s.access(x)
        third = s.access(x)
        assert third <= first or third <= 18 * s.k
        assert third <= 18 * s.k


def test_worst_case_stays_logarithmic():
    for k in (2, 3, 4):
        s = SkipSplayTree(k)
        rng = random.Random(k)
        worst = 0
        for _ in range(2000):
            worst = max(worst, s.access(rng.randint(1, s.n)))
        assert worst <= 30 * math.log2(s.n + 2), (k, worst)


def test_doubled_access_is_exactly_two_accesses():
    s = SkipSplayTree(3)
    rng = random.Random(2)
    for _ in range(100):
        x = rng.randint(1, s.n)
        before = s.engine.visits
        pair = s.access_doubled(x)
        assert pair == s.engine.visits - before
        assert pair > 0


def test_doubled_access_plateau():
    s = SkipSplayTree(4)
    s.access_doubled(200)
    costs = [s.access_doubled(200) for _ in range(10)]
    assert max(costs) == min(costs)  # steady state
    assert max(costs) <= 20 * s.k


def test_ancestor_helper():
    assert _ancestor_at(1, 2) == 2
    assert _ancestor_at(3, 2) == 2
    assert _ancestor_at(5, 4) == 8
    assert _band_of_height(1) == 0
    assert _band_of_height(2) == 1
    assert _band_of_height(3) == 2
    assert _band_of_height(4) == 2
