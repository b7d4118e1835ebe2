import random
from fractions import Fraction as F

import pytest

from mmbox import (
    Coupling,
    FiniteMMSpace,
    Relation,
    SizeGuardError,
    box_atom_bound,
    box_exact,
    cardinality_floor_check,
    distortion,
    line_space,
    mass_on,
    relation_to_injection,
    separation,
    two_point_box_oracle,
    two_point_space,
    uniform_lift,
)
from helpers import box_brute_force, permuted_mm_space, random_mm_space

HALF = F(1, 2)


class TestTwoPointOracle:
    def test_close_gaps(self):
        assert two_point_box_oracle(1, "1.2") == F(1, 5)

    def test_equal_gaps(self):
        assert two_point_box_oracle("0.7", "0.7") == 0

    def test_one_point_far_pair_caps_at_half(self):
        assert two_point_box_oracle(0, 3) == HALF

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            two_point_box_oracle(-1, 2)


class TestBoxExact:
    def test_space_against_itself(self):
        rng = random.Random(83)
        for _ in range(8):
            x = random_mm_space(rng, rng.randint(1, 3))
            value, pi, witness = box_exact(x, x)
            assert value == 0
            assert witness == Relation.identity(x.n)
            assert pi == Coupling.diagonal(x.mass)

    def test_two_point_uniform_close_gaps(self):
        value, pi, witness = box_exact(two_point_space(1), two_point_space("1.2"))
        assert value == F(1, 5)
        assert witness == Relation.identity(2)
        assert pi == Coupling.diagonal([HALF, HALF])

    def test_two_point_uniform_far_gaps(self):
        value, _, _ = box_exact(two_point_space(1), two_point_space(2))
        assert value == HALF

    def test_one_point_against_wide_pair(self):
        x = two_point_space(0)
        y = two_point_space(3)
        value, _, _ = box_exact(x, y)
        assert value == HALF
        assert value == box_brute_force(x, y)

    def test_agrees_with_brute_force(self):
        rng = random.Random(89)
        for _ in range(20):
            x = random_mm_space(rng, rng.randint(1, 3))
            y = random_mm_space(rng, rng.randint(1, 3))
            value, pi, witness = box_exact(x, y)
            assert value == box_brute_force(x, y)
            # the witness certifies its own value exactly
            assert max(1 - mass_on(pi, witness), distortion(witness, x, y)) == value

    def test_symmetry(self):
        rng = random.Random(97)
        for _ in range(12):
            x = random_mm_space(rng, rng.randint(1, 3))
            y = random_mm_space(rng, rng.randint(1, 3))
            assert box_exact(x, y)[0] == box_exact(y, x)[0]

    def test_bounded_by_one_and_by_atom_bound(self):
        rng = random.Random(101)
        for _ in range(12):
            x = random_mm_space(rng, rng.randint(1, 3))
            y = random_mm_space(rng, rng.randint(1, 3))
            value, _, _ = box_exact(x, y)
            assert value <= box_atom_bound(x, y) <= 1

    def test_triangle_inequality(self):
        rng = random.Random(103)
        for _ in range(8):
            xs = [random_mm_space(rng, rng.randint(1, 3)) for _ in range(3)]
            d01 = box_exact(xs[0], xs[1])[0]
            d12 = box_exact(xs[1], xs[2])[0]
            d02 = box_exact(xs[0], xs[2])[0]
            assert d02 <= d01 + d12

    def test_zero_on_relabeled_copies(self):
        rng = random.Random(107)
        for _ in range(8):
            n = rng.randint(2, 4)
            x = random_mm_space(rng, n)
            sigma = list(range(n))
            rng.shuffle(sigma)
            assert box_exact(x, permuted_mm_space(x, sigma))[0] == 0

    def test_size_guard(self):
        rng = random.Random(1)
        x = random_mm_space(rng, 7)
        y = random_mm_space(rng, 6)
        with pytest.raises(SizeGuardError) as err:
            box_exact(x, y)
        assert err.value.search_space == 2**42

    def test_witness_recovers_injection_when_hypotheses_hold(self):
        rng = random.Random(109)
        hits = 0
        for _ in range(30):
            x = random_mm_space(rng, rng.randint(1, 3))
            y = random_mm_space(rng, rng.randint(1, 3))
            value, pi, witness = box_exact(x, y)
            dis = distortion(witness, x, y)
            if dis < separation(x) and mass_on(pi, witness) > 1 - x.min_atom():
                hits += 1
                f = relation_to_injection(x, y, witness, pi)
                assert Relation.graph(list(f)).issubset(witness)
                if x.n == y.n:
                    assert witness == Relation.graph(list(f))
        assert hits > 0  # the harness actually exercised the recovery path


class TestAtomBound:
    def test_uniform_two_point_spaces(self):
        assert box_atom_bound(two_point_space(1), two_point_space(5)) == HALF

    def test_lopsided_against_uniform_four(self):
        x = FiniteMMSpace.from_parts([[0, 1], [1, 0]], ["0.7", "0.3"])
        y = uniform_lift(line_space([0, 1, 2, 4]))
        assert box_atom_bound(x, y) == F(3, 4)

    def test_one_point_spaces(self):
        assert box_atom_bound(two_point_space(0), two_point_space(0)) == 0


class TestCardinalityFloor:
    def test_triple_against_singleton(self):
        x = uniform_lift(
            FiniteMMSpace.from_parts(
                [[0, 1, 1], [1, 0, 1], [1, 1, 0]], [F(1, 3)] * 3
            ).space
        )
        assert cardinality_floor_check(x, two_point_space(0))

    def test_identical_spaces(self):
        x = random_mm_space(random.Random(5), 3)
        assert cardinality_floor_check(x, x)

    def test_slightly_perturbed_pair(self):
        # box = 0.01 is below the 1/2 threshold and the cardinalities agree.
        x = two_point_space(1)
        y = two_point_space("1.01")
        assert box_exact(x, y)[0] == F(1, 100)
        assert cardinality_floor_check(x, y)

    def test_random_instances(self):
        rng = random.Random(113)
        for _ in range(15):
            x = random_mm_space(rng, rng.randint(1, 3))
            y = random_mm_space(rng, rng.randint(1, 3))
            assert cardinality_floor_check(x, y)
