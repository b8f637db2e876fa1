from __future__ import annotations

import random

from hypothesis import given, strategies as st

from siflow.sweeps import random_spec, random_specs


@given(st.integers(0, 10**6), st.sampled_from(["even", "odd"]))
def test_random_spec_is_valid(seed, parity):
    s = random_spec(random.Random(seed), parity)
    assert 1 <= s.n <= 5
    assert all(-5 <= r.value <= 5 for r in s.roots)
    assert sum(r.multiplicity for r in s.roots) == s.n
    lo, hi = s.domain
    # every Delta is positive strictly inside the working interval
    probe = (lo + hi) / 2 if lo is not None and hi is not None else (lo + 1 if lo is not None else (hi - 1 if hi is not None else 0))
    assert all(r.sign * (probe - r.value) > 0 for r in s.roots)
    assert (s.nu is not None) == (parity == "odd")


def test_random_specs_deterministic():
    a = [s.label() for s in random_specs(3, 10, "odd")]
    b = [s.label() for s in random_specs(3, 10, "odd")]
    assert a == b
    assert a != [s.label() for s in random_specs(4, 10, "odd")]


def test_fixed_degree():
    rng = random.Random(0)
    assert all(random_spec(rng, "even", n=4).n == 4 for _ in range(10))
