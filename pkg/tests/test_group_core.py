import numpy as np
import pytest

from statmon import group_core as gc
from statmon.errors import CapacityError, ValidationError


def test_paper3_word_indices():
    ordering = gc.BasisOrdering.canonical(3)
    assert ordering.kind == "paper3"
    assert ordering.word_to_index(gc.parse_word("ABC")) == 0
    assert ordering.word_to_index(gc.parse_word("BAC")) == 1
    assert ordering.word_to_index(gc.parse_word("CAB")) == 2
    assert ordering.word_to_index(gc.parse_word("CBA")) == 3
    assert ordering.word_to_index(gc.parse_word("ACB")) == 4
    assert ordering.word_to_index(gc.parse_word("BCA")) == 5


def test_word_index_round_trip():
    for n in (2, 3, 4):
        ordering = gc.BasisOrdering.canonical(n)
        for i in range(ordering.dim):
            assert ordering.word_to_index(ordering.index_to_word(i)) == i


def test_lex_order_n2():
    ordering = gc.BasisOrdering.canonical(2)
    assert ordering.kind == "lex"
    assert ordering.word_to_index((0, 1)) == 0
    assert ordering.word_to_index((1, 0)) == 1


def test_invalid_word_rejected():
    ordering = gc.BasisOrdering.canonical(3)
    with pytest.raises(ValidationError):
        ordering.word_to_index((0, 0, 1))
    with pytest.raises(ValidationError):
        ordering.word_to_index((0, 1))


def test_relabel_examples():
    ab = gc.Pair.parse("AB")
    bc = gc.Pair.parse("BC")
    assert gc.word_label(gc.relabel(gc.parse_word("ABC"), ab)) == "BAC"
    assert gc.word_label(gc.relabel(gc.parse_word("CAB"), bc)) == "BAC"


def test_relabel_involution():
    for n in (2, 3, 4):
        ordering = gc.BasisOrdering.canonical(n)
        for pair in gc.canonical_pairs(n):
            for word in ordering.words:
                assert gc.relabel(gc.relabel(word, pair), pair) == word


def test_exchange_operator_n3_swaps_first_two_words():
    op = gc.exchange_operator(3, gc.Pair.parse("AB"))
    assert op.mapping[0] == 1 and op.mapping[1] == 0


def test_exchange_operator_n2():
    op = gc.exchange_operator(2, gc.Pair(0, 1))
    assert list(op.mapping) == [1, 0]


def test_exchange_operators_fixed_point_free():
    # exhaustive over all 6 words and 3 pairs at n = 3
    for pair in gc.canonical_pairs(3):
        op = gc.exchange_operator(3, pair)
        assert not np.any(op.mapping == np.arange(6))


def test_exchange_operator_involution_and_symmetry():
    for n in (2, 3, 4, 5):
        identity = np.arange(gc.factorial_dim(n))
        for pair in gc.canonical_pairs(n):
            op = gc.exchange_operator(n, pair)
            assert np.array_equal(op.mapping[op.mapping], identity)
            M = op.matrix()
            assert np.array_equal(M, M.T)


def test_cyclic_operator_identities_exact():
    ab, bc, ac = (gc.exchange_operator(3, p) for p in gc.canonical_pairs(3))
    s = gc.cyclic_operator()
    assert s == ab.compose(bc)
    assert s == ac.compose(ab)
    assert s == bc.compose(ac)
    assert np.array_equal(s.matrix(), ab.matrix() @ bc.matrix())
    assert s.compose(s).compose(s).is_identity()


def test_cyclic_operator_action_on_reference_word():
    s = gc.cyclic_operator()
    ordering = s.ordering
    assert gc.word_label(ordering.index_to_word(int(s.mapping[0]))) == "BCA"


def test_cyclic_spectrum_is_cube_roots_of_unity():
    # two 3-cycles on the words means eigenvalues {1, w, conj(w)} twice each;
    # cross-check with a complex eigensolve as an independent route
    s = gc.cyclic_operator()
    assert s.cycle_type() == (3, 3)
    eig = np.linalg.eigvals(s.matrix().astype(complex))
    expected = np.array([1.0, np.exp(2j * np.pi / 3), np.exp(-2j * np.pi / 3)] * 2)
    assert np.allclose(np.sort_complex(eig), np.sort_complex(expected), atol=1e-12)


def test_cyclic_operator_requires_three_boxes():
    with pytest.raises(ValidationError):
        gc.cyclic_operator(4)


def test_capacity_limits():
    with pytest.raises(CapacityError):
        gc.BasisOrdering.canonical(8)
    with pytest.raises(CapacityError):
        gc.BasisOrdering.canonical(1)


def test_pair_parsing_and_order():
    assert gc.Pair.parse("ba") == gc.Pair(0, 1)
    assert str(gc.Pair(0, 2)) == "AC"
    with pytest.raises(ValidationError):
        gc.Pair.parse("AA")
    with pytest.raises(ValidationError):
        gc.Pair(1, 1)


def test_canonical_pair_order():
    assert [str(p) for p in gc.canonical_pairs(3)] == ["AB", "BC", "AC"]
    assert [str(p) for p in gc.canonical_pairs(4)] == ["AB", "AC", "AD", "BC", "BD", "CD"]
