"""Tests for the infinitesimal action of vector fields on connection jets."""

import pytest

from jetmoduli.exact_core import kernel_basis
from jetmoduli.jets import (
    ConnectionJet,
    TensorJet,
    VectorFieldJet,
    random_connection_jet,
    random_vector_field,
)
from jetmoduli.lie_action import (
    action_matrix,
    action_matrix_shape,
    field_from_kernel_vector,
    lie_derivative,
    tensor_lie_derivative,
    vector_field_coords,
    vf_bracket,
)
from jetmoduli.utils.errors import DimensionMismatchError, JetOrderError

# =============================================================================
# Pointwise formulas
# =============================================================================


class TestLieDerivative:
    """Hand-computed Lie derivatives in one and two variables."""

    def test_second_derivative_term(self, zero_jet_n1, quadratic_field_n1):
        result = lie_derivative(quadratic_field_n1, zero_jet_n1)
        assert isinstance(result, TensorJet)
        assert result.value(0, 0, 0) == 2

    def test_one_variable_constant(self):
        # V = x + x^2, Gamma = 3: a*Gamma + 2b = 3 + 2
        g = ConnectionJet.from_constants([[[3]]])
        v = VectorFieldJet.from_components(1, 2, [{(1,): 1, (2,): 1}])
        assert lie_derivative(v, g).value(0, 0, 0) == 5

    def test_euler_field_scales_homogeneous_parts(self):
        g = random_connection_jet(2, 2, seed=21)
        euler = VectorFieldJet.linear([[1, 0], [0, 1]], max_degree=4)
        image = lie_derivative(euler, g)
        for m in range(3):
            expected = g.homogeneous_part(m).scaled(m + 1)
            assert image.homogeneous_part(m).components == expected.components

    def test_linear_field_on_zero_jet(self):
        v = VectorFieldJet.linear([[1, 2], [3, 4]], max_degree=3)
        assert lie_derivative(v, ConnectionJet.zero(2, 1)).is_zero()

    def test_short_field_rejected(self, zero_jet_n1):
        v = VectorFieldJet.from_components(1, 1, [{(1,): 1}])
        with pytest.raises(JetOrderError, match="needs degree >= 2"):
            lie_derivative(v, zero_jet_n1)

    def test_mismatched_variables_rejected(self, zero_jet_n1):
        v = VectorFieldJet.zero(2, 2)
        with pytest.raises(DimensionMismatchError):
            lie_derivative(v, zero_jet_n1)

    def test_linear_in_the_field(self):
        g = random_connection_jet(2, 1, seed=2)
        v = random_vector_field(2, 3, seed=3)
        w = random_vector_field(2, 3, seed=4)
        assert lie_derivative(v + w, g) == lie_derivative(v, g) + lie_derivative(w, g)
        assert lie_derivative(v.scaled(3), g) == lie_derivative(v, g).scaled(3)

    def test_high_degree_fields_act_trivially(self):
        for n, k in [(1, 2), (2, 0), (2, 1), (3, 0)]:
            g = random_connection_jet(n, k, seed=n + k)
            v = random_vector_field(n, k + 4, seed=10 + n, min_degree=k + 3)
            assert lie_derivative(v, g).is_zero()


class TestTensorLieDerivative:
    def test_one_variable(self):
        # V = 2x acting on T = 5: a*T
        t = TensorJet.from_constants([[[5]]])
        v = VectorFieldJet.from_components(1, 1, [{(1,): 2}])
        assert tensor_lie_derivative(v, t).value(0, 0, 0) == 10

    def test_short_field_rejected(self):
        t = TensorJet.zero(1, 1)
        with pytest.raises(JetOrderError):
            tensor_lie_derivative(VectorFieldJet.zero(1, 1), t)


class TestBracket:
    def test_one_variable(self):
        # [x d/dx, x^2 d/dx] = x^2 d/dx
        x = VectorFieldJet.from_components(1, 3, [{(1,): 1}])
        x2 = VectorFieldJet.from_components(1, 3, [{(2,): 1}])
        assert vf_bracket(x, x2, 3).component(0).as_dict() == {(2,): 1}

    def test_two_variables(self):
        # [x^1 d/dx^2, x^2 d/dx^1] = x^1 d/dx^1 - x^2 d/dx^2
        v = VectorFieldJet.from_components(2, 2, [{}, {(1, 0): 1}])
        w = VectorFieldJet.from_components(2, 2, [{(0, 1): 1}, {}])
        bracket = vf_bracket(v, w, 2)
        assert bracket.component(0).as_dict() == {(1, 0): 1}
        assert bracket.component(1).as_dict() == {(0, 1): -1}

    def test_antisymmetric(self):
        v = random_vector_field(2, 3, seed=1)
        w = random_vector_field(2, 3, seed=2)
        assert (vf_bracket(v, w, 3) + vf_bracket(w, v, 3)).is_zero()

    @pytest.mark.parametrize(("n", "k"), [(1, 1), (2, 0), (2, 1)])
    def test_action_is_a_homomorphism(self, n, k):
        g = random_connection_jet(n, k, seed=30)
        v = random_vector_field(n, k + 2, seed=31)
        w = random_vector_field(n, k + 2, seed=32)
        lhs = lie_derivative(vf_bracket(v, w, k + 2), g)
        rhs = tensor_lie_derivative(v, lie_derivative(w, g)) - tensor_lie_derivative(
            w, lie_derivative(v, g)
        )
        assert lhs == rhs


# =============================================================================
# Action matrix
# =============================================================================


class TestActionMatrix:
    @pytest.mark.parametrize(
        ("n", "k", "shape"),
        [(1, 0, (1, 2)), (2, 0, (8, 10)), (2, 1, (24, 18)), (3, 0, (27, 27)), (3, 1, (108, 57))],
    )
    def test_shape(self, n, k, shape):
        assert action_matrix_shape(n, k) == shape
        matrix = action_matrix(random_connection_jet(n, k, seed=0))
        assert (matrix.base.rows, matrix.base.cols) == shape

    def test_apply_matches_lie_derivative(self):
        g = random_connection_jet(2, 1, seed=8)
        v = random_vector_field(2, 3, seed=9)
        assert action_matrix(g).apply(v) == lie_derivative(v, g)

    def test_apply_rejects_wrong_degree(self):
        matrix = action_matrix(random_connection_jet(2, 0, seed=1))
        with pytest.raises(JetOrderError):
            matrix.apply(random_vector_field(2, 3, seed=1))

    def test_zero_jet_one_variable(self, zero_jet_n1):
        matrix = action_matrix(zero_jet_n1)
        assert matrix.rank() == 1
        assert matrix.stabilizer_dim() == 1

    @pytest.mark.parametrize(("n", "k", "stab"), [(1, 1, 1), (2, 0, 2), (2, 1, 0), (3, 0, 1)])
    def test_generic_stabilizer(self, n, k, stab):
        assert action_matrix(random_connection_jet(n, k, seed=0)).stabilizer_dim() == stab

    def test_kernel_vectors_fix_the_jet(self):
        g = random_connection_jet(2, 0, seed=5)
        matrix = action_matrix(g)
        kernel = kernel_basis(matrix.base)
        assert len(kernel) == 2
        for vec in kernel:
            field = field_from_kernel_vector(2, 0, vec.entries)
            assert vector_field_coords(field) == vec.entries
            assert lie_derivative(field, g).is_zero()
