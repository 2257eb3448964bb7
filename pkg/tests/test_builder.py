"""Construction of Q_n, the glued sums, and their annihilator matrices."""
import random
from fractions import Fraction

import pytest

from qfla.builder import (
    BadN,
    BadPivot,
    BadSpec,
    QuasiQnSpec,
    block_structure,
    build_qn,
    build_quasi,
    change_of_basis,
    make_spec,
    normalize_annihilator,
    qn_x_basis,
    rebase_x_to_e,
    related_matrix_of,
)
from qfla.liecore import GenLabel, TopLabel
from qfla.linalg import Matrix, inverse, rank


class TestSpecValidation:
    def test_rejects_even_or_small_n(self):
        for bad in (4, 6, 3, 1):
            with pytest.raises(BadN):
                make_spec(bad, 1, 1)

    def test_rejects_bad_r(self):
        with pytest.raises(BadSpec):
            make_spec(5, 2, 0, [[]])
        with pytest.raises(BadSpec):
            make_spec(5, 2, 3)

    def test_rejects_zero_column(self):
        with pytest.raises(BadSpec):
            make_spec(5, 3, 2, [["1", "0"], ["1", "0"]])

    def test_rejects_wrong_shape(self):
        with pytest.raises(BadSpec):
            make_spec(5, 3, 2, Matrix([["1"]]))

    def test_dim_and_indexing(self):
        s = make_spec(5, 3, 2, [["1"], ["0"]])
        assert s.dim == 17
        assert s.gen_index(1, 0) == 0
        assert s.gen_index(2, 3) == 8
        assert s.top_index(2) == 16
        with pytest.raises(IndexError):
            s.gen_index(4, 0)
        with pytest.raises(IndexError):
            s.top_index(3)

    def test_beta_and_top_coefficients(self):
        s = make_spec(5, 3, 2, [["1"], ["0"]])
        assert s.beta() == Matrix([[1, 0, 1], [0, 1, 0]])
        assert s.top_coefficients(3) == {1: Fraction(1)}
        assert s.top_coefficients(2) == {2: Fraction(1)}


class TestBuildQn:
    def test_q5_bracket_table(self):
        L = build_qn(5)
        e = L.basis_vector
        assert L.dim == 6
        for i in range(1, 4):
            assert L.bracket(e(0), e(i)) == e(i + 1)
        assert L.bracket(e(0), e(4)) == [0] * 6
        assert L.bracket(e(1), e(4)) == [0, 0, 0, 0, 0, -1]
        assert L.bracket(e(2), e(3)) == [0, 0, 0, 0, 0, 1]
        assert all(L.bracket(e(5), e(i)) == [0] * 6 for i in range(6))

    def test_bad_n(self):
        with pytest.raises(BadN):
            build_qn(6)

    def test_x_basis_conjugates_to_standard(self):
        # columns of P are the standard basis written in x-coordinates:
        # first basis vector = x_0 + x_1, the rest are x_i
        n = 5
        P = inverse(rebase_x_to_e(n))
        rebased = change_of_basis(qn_x_basis(n), P, labels=build_qn(n).labels)
        assert rebased == build_qn(n)

    def test_x_basis_has_full_tower(self):
        L = qn_x_basis(7)
        e = L.basis_vector
        # unlike the standard basis, [x_0, x_{n-1}] = x_n here
        assert L.bracket(e(0), e(6)) == e(7)


class TestBuildQuasi:
    def test_cross_copy_brackets_vanish(self):
        s = make_spec(5, 2, 1, [["1"]])
        L = build_quasi(s)
        for i in range(5):
            for j in range(5):
                v = L.bracket(
                    L.basis_vector(s.gen_index(1, i)), L.basis_vector(s.gen_index(2, j))
                )
                assert v == [0] * s.dim

    def test_glued_top(self):
        # second copy's tower ends on the shared top vector
        s = make_spec(5, 2, 1, [["1"]])
        L = build_quasi(s)
        v = L.bracket(L.basis_vector(s.gen_index(2, 1)), L.basis_vector(s.gen_index(2, 4)))
        expected = [Fraction(0)] * s.dim
        expected[s.top_index(1)] = Fraction(-1)
        assert v == expected

    def test_scaled_glue(self):
        s = make_spec(5, 3, 2, [["2"], ["3"]])
        L = build_quasi(s)
        v = L.bracket(L.basis_vector(s.gen_index(3, 2)), L.basis_vector(s.gen_index(3, 3)))
        expected = [Fraction(0)] * s.dim
        expected[s.top_index(1)] = Fraction(2)
        expected[s.top_index(2)] = Fraction(3)
        assert v == expected

    def test_labels(self):
        s = make_spec(5, 2, 1, [["1"]])
        L = build_quasi(s)
        assert L.labels[0] == GenLabel(1, 0)
        assert L.labels[s.gen_index(2, 4)] == GenLabel(2, 4)
        assert L.labels[s.top_index(1)] == TopLabel(1)

    def test_dims(self):
        for args, dim in [
            ((5, 1, 1, None), 6),
            ((5, 2, 1, [["1"]]), 11),
            ((5, 3, 2, [["1"], ["0"]]), 17),
            ((7, 2, 1, [["1"]]), 15),
        ]:
            assert build_quasi(make_spec(*args)).dim == dim


class TestRelatedMatrix:
    def test_shape_and_content(self):
        s = make_spec(5, 3, 1, [["1", "1"]])
        R = related_matrix_of(s)
        assert R.matrix == Matrix([[-1, 1, 0], [-1, 0, 1]])

    def test_annihilates_tops(self):
        # rows encode e_{sn} - sum_j b_{js} e_{jn} = 0
        s = make_spec(5, 3, 2, [["1"], ["2"]])
        R = related_matrix_of(s)
        beta = s.beta()
        assert (R.matrix * beta.transpose()).is_zero()

    def test_m_equals_r(self):
        R = related_matrix_of(make_spec(5, 2, 2))
        assert R.matrix.rows == 0 and R.matrix.cols == 2


class TestNormalizeAnnihilator:
    def test_round_trip_under_row_mixing(self):
        rng = random.Random(7)
        s = make_spec(5, 3, 1, [["1", "2"]])
        R = related_matrix_of(s)
        for _ in range(20):
            # random invertible row mix destroys the (A | I) shape
            E = Matrix(
                [
                    [Fraction(rng.randint(-3, 3)) for _ in range(2)]
                    for _ in range(2)
                ]
            )
            if rank(E) < 2:
                continue
            assert normalize_annihilator(E * R.matrix).matrix == R.matrix

    def test_bad_pivot(self):
        with pytest.raises(BadPivot):
            normalize_annihilator(Matrix([[1, 1, 0], [2, 2, 0]]))


class TestBlockStructure:
    def test_single_top(self):
        s = make_spec(5, 3, 1, [["1", "1"]])
        blocks = block_structure(s)
        assert blocks.q == 1
        assert blocks.members == ((1, 2, 3),)
        assert blocks.sizes == (3,)
        assert blocks.starts == (1,)

    def test_interleaved_members(self):
        # copy 3 glues to top 1, so block membership is not contiguous
        s = make_spec(5, 3, 2, [["1"], ["0"]])
        blocks = block_structure(s)
        assert blocks.q == 2
        assert blocks.members == ((1, 3), (2,))
        assert blocks.sizes == (2, 1)

    def test_mixed_column_is_not_block_form(self):
        assert block_structure(make_spec(5, 3, 2, [["1"], ["1"]])) is None
