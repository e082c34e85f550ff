import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from puosc.core import PuParams, companion_field, hamiltonian_h1, poisson_j1
from puosc.errors import InvalidInputError, SingularMatrixError
from puosc.linalg import expm, inverse, leading_minors, nullspace


def brute_det(m):
    """Permutation-expansion determinant; independent of numpy."""
    n = m.shape[0]
    total = 0.0
    for perm in itertools.permutations(range(n)):
        sign = 1.0
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = sign
        for i in range(n):
            term *= m[i, perm[i]]
        total += term
    return total


class TestNullspace:
    def test_identity_trivial_kernel(self):
        assert nullspace(np.eye(4), tol=1e-12) == []

    def test_zero_matrix_full_kernel(self):
        basis = nullspace(np.zeros((2, 2)), tol=1e-12)
        assert len(basis) == 2
        gram = np.array([[u @ v for v in basis] for u in basis])
        assert np.allclose(gram, np.eye(2), atol=1e-12)

    def test_companion_invertible_when_beta_nonzero(self):
        m = companion_field(PuParams(5.0, 4.0))
        assert abs(brute_det(m) - 4.0) < 1e-12
        assert nullspace(m, tol=1e-12) == []

    def test_residual_bound(self, rng):
        for _ in range(20):
            a = rng.uniform(-2, 2, (4, 2)) @ rng.uniform(-2, 2, (2, 4))
            basis = nullspace(a, tol=1e-10)
            bound = 1e-10 * (1.0 + np.linalg.norm(a))
            for v in basis:
                assert np.linalg.norm(a @ v) <= bound

    def test_dimension_plus_rank(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 6))
            r = int(rng.integers(1, n))
            a = rng.uniform(-2, 2, (n, r)) @ rng.uniform(-2, 2, (r, n))
            assert len(nullspace(a, tol=1e-10)) + np.linalg.matrix_rank(a) == n

    def test_rejects_nonfinite(self):
        with pytest.raises(InvalidInputError):
            nullspace([[np.nan, 0.0], [0.0, 1.0]])

    def test_rejects_bad_tol(self):
        with pytest.raises(InvalidInputError):
            nullspace(np.eye(2), tol=0.0)


class TestInverse:
    def test_identity(self):
        assert np.array_equal(inverse(np.eye(3)), np.eye(3))

    def test_j1_multiply_back(self):
        j1 = poisson_j1(PuParams(5.0, 4.0)).matrix
        assert np.max(np.abs(inverse(j1) @ j1 - np.eye(4))) < 1e-12

    def test_zero_matrix_singular(self):
        with pytest.raises(SingularMatrixError):
            inverse(np.zeros((3, 3)))

    def test_random_multiply_back(self, rng):
        for _ in range(30):
            n = int(rng.integers(2, 6))
            a = rng.uniform(-3, 3, (n, n))
            try:
                inv = inverse(a)
            except SingularMatrixError:
                continue
            assert np.max(np.abs(a @ inv - np.eye(n))) < 1e-10


class TestExpm:
    def test_zero_matrix(self):
        assert np.array_equal(expm(np.zeros((3, 3))), np.eye(3))

    def test_diagonal(self):
        got = expm(np.diag([1.0, 2.0]))
        assert np.allclose(got, np.diag([math.e, math.e ** 2]), rtol=1e-12)

    def test_dilation_generator(self):
        # s * I/2 at s = 1 rescales by e^(1/2)
        got = expm(0.5 * np.eye(4))
        assert np.allclose(got, math.exp(0.5) * np.eye(4), rtol=1e-12)

    def test_inverse_pair(self, rng):
        for _ in range(20):
            a = rng.uniform(-1, 1, (4, 4))
            a *= 10.0 / max(np.linalg.norm(a), 10.0)
            assert np.max(np.abs(expm(a) @ expm(-a) - np.eye(4))) < 1e-9

    def test_semigroup(self, rng):
        for _ in range(10):
            a = rng.uniform(-1, 1, (4, 4))
            s, t = rng.uniform(0, 2, 2)
            lhs = expm((s + t) * a)
            rhs = expm(s * a) @ expm(t * a)
            assert np.max(np.abs(lhs - rhs)) < 1e-9

    def test_derivative_at_zero(self, rng):
        a = rng.uniform(-2, 2, (4, 4))
        h = 1e-6
        fd = (expm(h * a) - expm(-h * a)) / (2 * h)
        assert np.max(np.abs(fd - a)) < 1e-6


class TestLeadingMinors:
    def test_identity(self):
        assert leading_minors(np.eye(3)) == [1.0, 1.0, 1.0]

    def test_indefinite_diag(self):
        assert leading_minors(np.diag([1.0, -1.0])) == [1.0, -1.0]

    def test_first_minor_of_standard_hamiltonian(self):
        s = hamiltonian_h1(PuParams(5.0, 4.0)).matrix
        minors = leading_minors(s)
        assert minors[0] == -4.0
        assert any(m < 0 for m in minors)

    def test_rejects_asymmetric(self):
        with pytest.raises(InvalidInputError):
            leading_minors([[0.0, 1.0], [-1.0, 0.0]])

    def test_sylvester_matches_eigenvalues(self, rng):
        for _ in range(30):
            a = rng.uniform(-2, 2, (4, 4))
            s = a + a.T
            by_minors = all(d > 0 for d in leading_minors(s))
            by_eigs = bool(np.all(np.linalg.eigvalsh(s) > 0))
            assert by_minors == by_eigs


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=16, max_size=16))
def test_expm_never_silently_wrong_shape(entries):
    a = np.array(entries).reshape(4, 4)
    result = expm(a)
    assert result.shape == (4, 4)
    assert np.all(np.isfinite(result))
