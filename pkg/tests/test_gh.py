import random
from fractions import Fraction as F

import pytest

from mmbox import (
    FiniteMetricSpace,
    Relation,
    SizeGuardError,
    canonical_form,
    gh_exact,
    gh_upper_from_relation,
    line_space,
    metric_vector_of,
    two_point_space,
)
from helpers import (
    gh_power_set_oracle,
    permuted_space,
    random_metric_space,
)


class TestGhExact:
    def test_space_against_itself_with_identity_witness(self):
        rng = random.Random(41)
        for _ in range(10):
            x = random_metric_space(rng, rng.randint(1, 4))
            value, witness = gh_exact(x, x)
            assert value == 0
            assert witness == Relation.identity(x.n)

    def test_two_point_gaps(self):
        # Any correspondence between two-point spaces contains the diagonal
        # or the antidiagonal, both with distortion |b - a|; anything larger
        # pairs a point with both partners and picks up a full gap.
        value, _ = gh_exact(two_point_space(1), two_point_space("1.4"))
        assert value == F(1, 5)

    def test_one_point_against_two_point(self):
        # The unique correspondence is the full product with distortion 1.
        value, witness = gh_exact(two_point_space(0), two_point_space(1))
        assert value == F(1, 2)
        assert witness == Relation.full(1, 2)

    def test_agrees_with_power_set_oracle(self):
        rng = random.Random(43)
        for _ in range(25):
            x = random_metric_space(rng, rng.randint(1, 3))
            y = random_metric_space(rng, rng.randint(1, 3))
            value, witness = gh_exact(x, y)
            assert value == gh_power_set_oracle(x, y)
            # the witness certifies its own value
            assert gh_upper_from_relation(witness, x, y) == value

    def test_symmetry(self):
        rng = random.Random(47)
        for _ in range(15):
            x = random_metric_space(rng, rng.randint(1, 4))
            y = random_metric_space(rng, rng.randint(1, 4))
            vxy, _ = gh_exact(x, y)
            vyx, _ = gh_exact(y, x)
            assert vxy == vyx

    def test_zero_iff_same_canonical_form(self):
        rng = random.Random(53)
        for _ in range(10):
            n = rng.randint(2, 4)
            x = random_metric_space(rng, n)
            sigma = list(range(n))
            rng.shuffle(sigma)
            y = permuted_space(x, sigma)
            value, _ = gh_exact(x, y)
            assert value == 0
            assert canonical_form(metric_vector_of(x)) == canonical_form(
                metric_vector_of(y)
            )
            # perturb one entry: canonical forms split and the distance moves
            z = [list(row) for row in x.dist]
            z[0][1] = z[1][0] = z[0][1] + F(1, 97)
            zs = FiniteMetricSpace.from_matrix(z, x.labels)
            vz, _ = gh_exact(x, zs)
            if canonical_form(metric_vector_of(zs)) != canonical_form(
                metric_vector_of(x)
            ):
                assert vz > 0

    def test_different_cardinalities_never_at_distance_zero(self):
        rng = random.Random(59)
        for _ in range(10):
            x = random_metric_space(rng, rng.randint(1, 3))
            y = random_metric_space(rng, x.n + rng.randint(1, 2))
            value, _ = gh_exact(x, y)
            assert value > 0

    def test_triangle_inequality(self):
        rng = random.Random(61)
        for _ in range(10):
            spaces = [random_metric_space(rng, rng.randint(1, 4)) for _ in range(3)]
            d01, _ = gh_exact(spaces[0], spaces[1])
            d12, _ = gh_exact(spaces[1], spaces[2])
            d02, _ = gh_exact(spaces[0], spaces[2])
            assert d02 <= d01 + d12

    def test_pruned_search_is_identical(self):
        rng = random.Random(67)
        for _ in range(20):
            x = random_metric_space(rng, rng.randint(1, 4))
            y = random_metric_space(rng, rng.randint(1, 4))
            assert gh_exact(x, y) == gh_exact(x, y, prune=True)

    def test_size_guard_refuses_with_search_space(self):
        x = random_metric_space(random.Random(1), 8)
        with pytest.raises(SizeGuardError) as err:
            gh_exact(x, x)
        assert err.value.search_space == 8**8 * 8**8
        assert "too large" in str(err.value)

    def test_invalid_space_is_rejected(self):
        from mmbox import SpaceValidationError

        bad = FiniteMetricSpace.from_matrix([[0, 1], [2, 0]])
        with pytest.raises(SpaceValidationError):
            gh_exact(bad, bad)


class TestGhUpperBound:
    def test_identity_on_isometric_copies(self):
        x = line_space([0, 1, 3])
        assert gh_upper_from_relation(Relation.identity(3), x, x) == 0

    def test_diagonal_between_two_point_spaces(self):
        xs = two_point_space("0.7")
        xt = two_point_space("1.5")
        assert gh_upper_from_relation(Relation.identity(2), xs, xt) == F(2, 5)

    def test_full_product_one_point_vs_pair(self):
        value = gh_upper_from_relation(
            Relation.full(1, 2), two_point_space(0), two_point_space(1)
        )
        assert value == F(1, 2)

    def test_always_at_least_the_exact_value(self):
        rng = random.Random(71)
        for _ in range(15):
            x = random_metric_space(rng, rng.randint(1, 3))
            y = random_metric_space(rng, rng.randint(1, 3))
            exact, _ = gh_exact(x, y)
            f = [rng.randrange(y.n) for _ in range(x.n)]
            g = [rng.randrange(x.n) for _ in range(y.n)]
            rel = Relation.graph(f) | Relation.graph(g).transpose()
            assert gh_upper_from_relation(rel, x, y) >= exact

    def test_rejects_non_correspondence(self):
        with pytest.raises(ValueError):
            gh_upper_from_relation(
                Relation.empty(), two_point_space(1), two_point_space(1)
            )
