import json
import pickle

import pytest

from kirbycalc import handlebody as hb
from kirbycalc.errors import (DomainError, DuplicateFourHandleError, DuplicateLabelError,
                              HasOneHandlesError, HasUpperHandlesError, MissingLabelError,
                              UnknownLinkingError)
from kirbycalc.handlebody import (INDETERMINATE, UNKNOWN, HandleCounts, HandleDecomposition,
                                  KnotTag, TwoHandle)
from kirbycalc.intalg import AbelianGroup

from conftest import decomposition


def with_counts(h0, h1, h2, h3, h4):
    X = HandleDecomposition.from_linking([[-1 if i == j else 0 for j in range(h2)] for i in range(h2)],
                                         h0=h0, h3=h3, h4=h4)
    for k in range(h1):
        X = X.with_data(X.linking, incidence=list(X.incidence) + [[0] * h2],
                        one_handles=X.one_handles + (f"d{k + 1}",))
    return X


class TestUnknown:
    def test_arithmetic_absorbs(self):
        assert (UNKNOWN + 3) is UNKNOWN
        assert (3 + UNKNOWN) is UNKNOWN
        assert (2 * UNKNOWN) is UNKNOWN
        assert (0 * UNKNOWN) is UNKNOWN
        assert (-UNKNOWN) is UNKNOWN
        assert (5 - UNKNOWN) is UNKNOWN

    def test_equality_never_true(self):
        assert not (UNKNOWN == UNKNOWN)
        assert not (UNKNOWN == 0)
        assert not (0 == UNKNOWN)
        assert UNKNOWN != UNKNOWN

    def test_truth_value_refused(self):
        with pytest.raises(TypeError):
            bool(UNKNOWN)

    def test_singleton_survives_pickle(self):
        assert pickle.loads(pickle.dumps(UNKNOWN)) is UNKNOWN
        assert pickle.loads(pickle.dumps(INDETERMINATE)) is INDETERMINATE


class TestConstruction:
    def test_defaults(self):
        X = hb.empty_decomposition()
        assert hb.counts(X).as_tuple() == (1, 0, 0, 0, 0)

    def test_framing_must_match_diagonal(self):
        with pytest.raises(DomainError):
            HandleDecomposition(two_handles=(TwoHandle("a", -1),), linking=((-2,),))
        with pytest.raises(DomainError):
            HandleDecomposition(two_handles=(TwoHandle("a", UNKNOWN),), linking=((-2,),))

    def test_symmetry_required(self):
        with pytest.raises(DomainError):
            decomposition([[-1, 1], [0, -1]])
        with pytest.raises(DomainError):
            decomposition([[-1, UNKNOWN], [0, -1]])

    def test_labels_unique(self):
        with pytest.raises(DuplicateLabelError):
            decomposition([[1, 0], [0, 1]], labels=["a", "a"])
        with pytest.raises(DuplicateLabelError):
            HandleDecomposition(one_handles=("a",), two_handles=(TwoHandle("a", 0),),
                                linking=((0,),), incidence=((1,),))

    def test_incidence_shape(self):
        with pytest.raises(DomainError):
            HandleDecomposition(one_handles=("d1",), two_handles=(TwoHandle("a", 0),),
                                linking=((0,),), incidence=((1, 2),))

    def test_counts_non_negative(self):
        with pytest.raises(DomainError):
            HandleDecomposition(h0=0)
        with pytest.raises(DomainError):
            HandleDecomposition(h3=-1)
        with pytest.raises(DomainError):
            HandleCounts(1, -1, 0, 0, 0)

    def test_structural_equality_with_unknowns(self):
        A = [[UNKNOWN, 1], [1, -2]]
        X = decomposition(A, knots=[KnotTag.UNKNOWN, KnotTag.UNKNOT])
        Y = decomposition([row[:] for row in A], knots=[KnotTag.UNKNOWN, KnotTag.UNKNOT])
        assert X == Y
        assert hash(X) == hash(Y)
        assert X != decomposition([[-1, 1], [1, -2]])

    def test_lookup_errors(self):
        X = decomposition([[-1]])
        with pytest.raises(MissingLabelError):
            X.index("nope")
        with pytest.raises(MissingLabelError):
            X.one_handle_index("d1")

    def test_fresh_label_skips_taken(self):
        X = decomposition([[-1, 0], [0, -1]], labels=["k1", "k3"])
        assert X.fresh_label() == "k2"
        assert X.fresh_label("d") == "d1"


class TestCounts:
    @pytest.mark.parametrize("c, chi", [
        ((1, 0, 12, 2, 1), 12),
        ((1, 0, 0, 0, 1), 2),
        ((1, 0, 24, 2, 1), 24),
        ((1, 1, 1, 0, 0), 1),
    ])
    def test_euler_characteristic(self, c, chi):
        X = with_counts(*c)
        assert hb.counts(X).as_tuple() == c
        assert hb.euler_characteristic(X) == chi

    def test_add_upper_handles(self):
        X = with_counts(1, 0, 12, 0, 0)
        Y = hb.add_four_handle(hb.add_three_handles(X, 2))
        assert hb.counts(Y).as_tuple() == (1, 0, 12, 2, 1)
        assert hb.add_three_handles(X, 0) == X
        assert hb.euler_characteristic(hb.add_three_handles(X, 2)) == hb.euler_characteristic(X) - 2
        with pytest.raises(DuplicateFourHandleError):
            hb.add_four_handle(Y)
        with pytest.raises(DomainError):
            hb.add_three_handles(X, -1)

    def test_union_expression(self):
        assert HandleCounts(1, 0, 12, 2, 1).union_expression() == \
            "one 0-handle ∪ 12 2-handles ∪ two 3-handles ∪ one 4-handle"
        assert HandleCounts(1, 0, 1, 0, 0).union_expression() == "one 0-handle ∪ one 2-handle"


class TestHomology:
    def test_no_one_handles_is_trivial(self):
        assert hb.homology_h1(decomposition([[0]])).is_trivial

    def test_cokernel_of_incidence(self):
        X = HandleDecomposition(one_handles=("d1",), two_handles=(TwoHandle("k1", 0),),
                                linking=((0,),), incidence=((3,),))
        assert hb.homology_h1(X) == AbelianGroup(0, (3,))

    def test_free_one_handle(self):
        X = HandleDecomposition(one_handles=("d1",))
        assert hb.homology_h1(X) == AbelianGroup(1)

    def test_two_one_handles(self):
        X = HandleDecomposition(one_handles=("d1", "d2"), two_handles=(TwoHandle("k1", 0),),
                                linking=((0,),), incidence=((2,), (4,)))
        assert hb.homology_h1(X) == AbelianGroup(1, (2,))


class TestBoundary:
    def test_orders(self):
        assert hb.boundary_h1_order(decomposition([[-4]])) == 4
        assert hb.boundary_h1_order(decomposition([[-5, 1], [1, -2]])) == 9
        assert hb.boundary_h1_order(decomposition([[0]])) is INDETERMINATE

    def test_precondition_errors_are_distinct(self):
        with pytest.raises(HasOneHandlesError):
            hb.boundary_h1_order(HandleDecomposition(one_handles=("d1",)))
        with pytest.raises(HasUpperHandlesError):
            hb.boundary_h1_order(decomposition([[-1]], h4=1))
        with pytest.raises(UnknownLinkingError):
            hb.boundary_h1_order(decomposition([[UNKNOWN]], knots=[KnotTag.UNKNOWN]))

    def test_invariants_with_unknowns(self):
        X = decomposition([[UNKNOWN]], knots=[KnotTag.UNKNOWN])
        assert hb.linking_determinant(X) is INDETERMINATE
        assert hb.linking_signature(X) is INDETERMINATE


class TestSerialization:
    def sample(self):
        return HandleDecomposition(
            one_handles=("d1",),
            two_handles=(TwoHandle("a", -2, KnotTag.UNKNOT), TwoHandle("b", UNKNOWN, KnotTag.UNKNOWN),
                         TwoHandle("c", 0, KnotTag.RIGHT_TREFOIL)),
            linking=((-2, UNKNOWN, 1), (UNKNOWN, UNKNOWN, 0), (1, 0, 0)),
            incidence=((0, 3, -1),), h3=2, h4=1)

    def test_roundtrip(self):
        X = self.sample()
        assert hb.loads(hb.dumps(X)) == X

    def test_field_names_and_unknown_token(self):
        data = json.loads(hb.dumps(self.sample()))
        assert list(data) == ["h0", "one_handles", "two_handles", "linking", "incidence", "h3", "h4"]
        assert data["two_handles"][1] == ["b", "?", "unknown"]
        assert data["linking"][0] == [-2, "?", 1]
        assert data["two_handles"][2][2] == "right_trefoil"

    def test_file_roundtrip(self, tmp_path):
        path = tmp_path / "x.json"
        hb.save(self.sample(), path)
        assert hb.load(path) == self.sample()

    @pytest.mark.parametrize("text", [
        "not json",
        "[1, 2]",
        '{"h0": 1}',
        '{"h0": 1, "one_handles": [], "two_handles": [["a", "x", "unknot"]], "linking": [["x"]],'
        ' "incidence": [], "h3": 0, "h4": 0}',
        '{"h0": 1, "one_handles": [], "two_handles": [["a", 1, "figure8"]], "linking": [[1]],'
        ' "incidence": [], "h3": 0, "h4": 0}',
        '{"h0": 1, "one_handles": ["d"], "two_handles": [["a", 1, "unknot"]], "linking": [[1]],'
        ' "incidence": [["?"]], "h3": 0, "h4": 0}',
    ])
    def test_malformed(self, text):
        with pytest.raises(DomainError):
            hb.loads(text)
