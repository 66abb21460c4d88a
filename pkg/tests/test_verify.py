import random

import numpy as np
import pytest

from suitcore.core import PermutationArray, c_pre
from suitcore.verify import (CERTIFIED, FALSIFIED, UNKNOWN, Verdict, VerifierCapExceeded, Witness, _subset_sums,
                             sample_falsify, shallow_counts, verify_condition_ii, verify_exact, verify_necessary,
                             verify_shallow)

from conftest import brute_core_suitable, random_array

NOT_SUITABLE = PermutationArray([[1, 2], [1, 2], [1, 2], [2, 1]])


def test_zeta_matches_brute_force():
    rng = np.random.default_rng(3)
    bits = 6
    hist = rng.integers(0, 5, size=1 << bits)
    expected = [sum(hist[p] for p in range(1 << bits) if p & t == p) for t in range(1 << bits)]
    assert _subset_sums(hist.copy(), bits).tolist() == expected


class TestExact:
    def test_two_symbol_core(self, two_symbol_core):
        v = verify_exact(two_symbol_core, 3)
        assert v.status == CERTIFIED and v.tier == "exact"

    def test_falsified_example(self):
        v = verify_exact(NOT_SUITABLE, 3)
        assert v.status == FALSIFIED
        assert v.witness == Witness(2, (), 1)
        assert v.witness.holds(NOT_SUITABLE, 3)

    def test_cap(self, monkeypatch):
        big = PermutationArray([list(range(1, 22))])
        with pytest.raises(VerifierCapExceeded, match="verify_shallow"):
            verify_exact(big, 25)
        monkeypatch.setenv("SUITABLE_VERIFY_CAP", "4")
        with pytest.raises(VerifierCapExceeded):
            verify_exact(PermutationArray([[1, 2, 3, 4, 5]]), 5)

    def test_parallel_same_result(self):
        rng = random.Random(1)
        for _ in range(20):
            a = random_array(rng, 6, 6)
            assert verify_exact(a, 4, jobs=3).status == verify_exact(a, 4).status

    def test_agrees_with_definition(self):
        rng = random.Random(2)
        for _ in range(300):
            v = rng.randint(1, 5)
            a = random_array(rng, rng.randint(1, 7), v)
            t = rng.randint(1, 6)
            verdict = verify_exact(a, t)
            assert verdict.certified == brute_core_suitable(a.to_lists(), v, t)
            if verdict.falsified:
                assert verdict.witness.holds(a, t)


class TestConditionII:
    def test_two_symbol_core(self, two_symbol_core):
        assert verify_condition_ii(two_symbol_core, 3).status == CERTIFIED

    def test_single_row(self):
        assert verify_condition_ii(PermutationArray([[1]]), 1).status == CERTIFIED

    def test_cap(self):
        with pytest.raises(VerifierCapExceeded):
            verify_condition_ii(PermutationArray([list(range(1, 12))]), 3)

    def test_oracle_agreement_1000(self):
        rng = random.Random(2024)
        statuses = set()
        for _ in range(1000):
            v = rng.randint(1, 6)
            a = random_array(rng, rng.randint(1, 8), v)
            t = rng.randint(1, v)
            ex, ii = verify_exact(a, t), verify_condition_ii(a, t)
            assert ex.status == ii.status
            statuses.add(ex.status)
            if ii.falsified:
                assert ii.witness.holds(a, t)
        assert statuses == {CERTIFIED, FALSIFIED}


class TestShallow:
    def test_two_symbol_core(self, two_symbol_core):
        assert verify_shallow(two_symbol_core, 3).status == CERTIFIED

    def test_counts(self, two_symbol_core):
        lead, x, y = shallow_counts(two_symbol_core, 1)
        assert lead == 2 and x == {2: 2} and y == {}

    def test_never_falsifies(self):
        assert verify_shallow(NOT_SUITABLE, 3).status == UNKNOWN

    def test_soundness_random(self):
        rng = random.Random(9)
        certified = 0
        for _ in range(1500):
            v = rng.randint(1, 7)
            a = random_array(rng, rng.randint(1, 12), v)
            t = rng.randint(1, v + 2)
            if verify_shallow(a, t).certified:
                certified += 1
                assert verify_exact(a, t).certified
        assert certified > 50

    def test_tail_shuffle_keeps_certificate(self):
        from suitcore.builders import BuildSpec, build_ramsey_core

        w = build_ramsey_core(BuildSpec(s=3, delta=1, alpha=3, route="ramsey", k_vec=(3, 3, 3)))
        assert verify_shallow(w.core, w.t).certified
        rng = random.Random(0)
        rows = []
        for row in w.core.rows:
            tail = list(row[3:])
            rng.shuffle(tail)
            rows.append(list(row[:3]) + tail)
        assert verify_shallow(PermutationArray(rows), w.t).certified

    def test_node_cap(self):
        from suitcore.builders import BuildSpec, build_ramsey_core

        w = build_ramsey_core(BuildSpec(s=3, delta=1, alpha=3, route="ramsey", k_vec=(3, 3, 3)))
        v = verify_shallow(w.core, w.t, node_cap=1)
        assert v.status == UNKNOWN and v.stats["reason"] == "node cap"


class TestNecessary:
    def test_two_symbol_core_passes(self, two_symbol_core):
        assert verify_necessary(two_symbol_core, 3).status == UNKNOWN

    def test_rule_i(self):
        core = PermutationArray([[1, 2], [1, 2], [1, 2], [1, 2]])
        v = verify_necessary(core, 3)
        assert v.falsified and v.stats["rule"] == "i" and v.witness == Witness(2, (), 0)
        assert v.witness.holds(core, 3)

    def test_rule_ii(self):
        # 1 and 2 each lead exactly t+1-v = 1 row and neither "12" nor "21" starts a row
        core = PermutationArray([[1, 3, 2], [2, 3, 1], [3, 1, 2], [3, 2, 1]])
        v = verify_necessary(core, 3)
        assert v.falsified and v.stats["rule"] == "ii"
        assert v.witness.holds(core, 3)
        assert verify_exact(core, 3).falsified

    def test_rule_iii(self):
        # symbol 4 leads t+2-v = 2 rows, nothing else is followed by 4, and no row starts ij4
        core = PermutationArray([[1, 2, 3, 4], [1, 3, 2, 4], [2, 1, 3, 4], [2, 3, 1, 4],
                                 [3, 1, 2, 4], [3, 2, 1, 4], [4, 1, 2, 3], [4, 2, 1, 3]])
        v = verify_necessary(core, 4)
        assert v.falsified and v.stats["rule"] == "iii" and v.witness.t_set == (1, 2)
        assert v.witness.holds(core, 4)

    def test_never_falsifies_suitable(self):
        rng = random.Random(4)
        for _ in range(500):
            v = rng.randint(1, 5)
            a = random_array(rng, rng.randint(1, 8), v)
            t = rng.randint(1, 6)
            nec = verify_necessary(a, t)
            if nec.falsified:
                assert nec.witness.holds(a, t)
                assert verify_exact(a, t).falsified


class TestSample:
    def test_finds_violation(self):
        v = sample_falsify(NOT_SUITABLE, 3, trials=200, seed=1)
        assert v.falsified and v.witness.holds(NOT_SUITABLE, 3)

    def test_certified_core_unknown(self, two_symbol_core):
        assert sample_falsify(two_symbol_core, 3, trials=10_000, seed=0).status == UNKNOWN

    def test_zero_trials(self, two_symbol_core):
        with pytest.raises(ValueError):
            sample_falsify(two_symbol_core, 3, trials=0)

    def test_random_falsified_cores(self):
        rng = random.Random(8)
        for _ in range(200):
            a = random_array(rng, 5, 5)
            if verify_exact(a, 5).falsified:
                s = sample_falsify(a, 5, trials=5000, seed=rng.randint(0, 99))
                assert s.falsified and s.witness.holds(a, 5)


def test_verdict_json_roundtrip():
    v = verify_exact(NOT_SUITABLE, 3)
    back = Verdict.from_json(v.to_json())
    assert back.status == v.status and back.witness == v.witness and back.tier == "exact"
    with pytest.raises(ValueError):
        Verdict(FALSIFIED, "exact")


def test_witness_holds_rejects_fake():
    assert not Witness(1, (), 2).holds(NOT_SUITABLE, 3)
    assert c_pre(NOT_SUITABLE, 1, ()) == 3
