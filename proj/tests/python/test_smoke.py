import json
import math

import pytest

import mte


def test_omega_codec():
    assert mte.omega_encode(16) == "10100100000"
    assert mte.omega_decode("1010001111") == (4, 6)
    assert mte.omega_len(1_000_000) == 31
    big = 3**2000
    code = mte.omega_encode(big)
    assert mte.omega_decode(code) == (big, len(code))
    assert mte.omega_len(big) == len(code)
    with pytest.raises(ValueError):
        mte.omega_len(0)
    with pytest.raises(ValueError):
        mte.omega_len(-5)
    with pytest.raises(ValueError):
        mte.omega_decode("1010")


def test_kraft_and_defects():
    assert mte.kraft_partial_sum(3) == pytest.approx(0.75)
    assert mte.near_additivity_defect(16, 16) == -6


def test_prior():
    p = mte.PrimePrior.build(2.0, 10)
    assert p.primes == [2, 3, 5, 7]
    assert p.mass(2) == pytest.approx(32 / 65)
    assert p.tail_mass(4) == pytest.approx(1 / 65)
    m = p.moments()
    assert m.mean_log2_p == pytest.approx(1.3120, abs=1e-4)
    q = mte.PrimePrior.from_json(p.to_json())
    assert q.masses == p.masses
    draws = p.sample(1000, seed=5)
    assert set(draws) <= {2, 3, 5, 7}
    assert draws == p.sample(1000, seed=5)


def test_ptm():
    params = mte.PtmParams(0.45, 0.45, 0.1)
    assert mte.integer_prob_exact(params, 2) == pytest.approx(0.1 * 0.45**2 / 0.55)
    primes, masses = mte.prime_conditional_exact(params, 3)
    assert primes == [2, 3]
    assert masses == pytest.approx([0.5, 0.5])
    out = mte.sample_prime_filtered(params, 50, seed=1)
    assert all(isinstance(v, int) and v >= 2 for v in out)
    with pytest.raises(ValueError):
        mte.PtmParams(0.5, 0.5, 0.5)


def test_simulate_and_tails():
    p = mte.PrimePrior.build(1.0, 2)
    rows, final = mte.simulate(p, 3, seed=1, thin=1)
    assert final == 8
    assert rows[-1][3] == 7
    q = mte.PrimePrior.build(2.0, 10)
    assert mte.conditional_gap_tail_exact(q, 10, 35) == pytest.approx(1 / 65)
    assert mte.hill_estimator([1, 2, 4, 8, 16], 4) == pytest.approx(1 / (2.5 * math.log(2)))
    assert mte.dkw_epsilon(100, 0.05) == pytest.approx(math.sqrt(math.log(40) / 200))


def test_empirics():
    report = json.loads(mte.fit_sizes([2, 3, 4, 100, 1000, 5000, 70000]))
    assert report["units"] == "nats"
    assert report["kl_scaled"] >= 0
    assert mte.kl_divergence([0.5, 0.5], [0.75, 0.25]) == pytest.approx(0.5 * math.log(4 / 3))
    alignment, entropy, mean_len = mte.gibbs_alignment([(5, 1.0)])
    assert (alignment, entropy, mean_len) == (6.0, 0.0, 6.0)


def test_reproduce_is_deterministic():
    a = mte.reproduce("empirics-synthetic")
    assert a == mte.reproduce("empirics-synthetic")
    assert json.loads(a)["suite"] == "empirics-synthetic"
    with pytest.raises(ValueError):
        mte.reproduce("nope")
