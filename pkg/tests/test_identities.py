import time

import pytest

from cvbqc.algebra import params
from cvbqc.algebra.identities import identity_names, verify_identities


def test_suite_passes_fast():
    t0 = time.perf_counter()
    results = verify_identities(seed=0)
    elapsed = time.perf_counter() - t0
    failed = [r.name for r in results if not r.passed]
    assert not failed
    assert len(results) >= 20
    assert elapsed < 10.0


def test_names_unique():
    names = identity_names()
    assert len(names) == len(set(names))


def test_corrupted_feed_forward_is_caught(monkeypatch):
    monkeypatch.setattr(params, "mm_inverse", lambda m: params.mm_matrix(m))
    res = {r.name: r.passed for r in verify_identities(seed=1, n_random=10, names={"brick_sq_cubic", "mm_inverse"})}
    assert res == {"brick_sq_cubic": False, "mm_inverse": False}


@pytest.mark.parametrize("seed", [2, 3])
def test_other_seeds(seed):
    assert all(r.passed for r in verify_identities(seed=seed, n_random=20))
