import json

import pytest

from kirbycalc import handlebody as hb
from kirbycalc.errors import DomainError, ShapeError
from kirbycalc.handlebody import UNKNOWN, HandleDecomposition, KnotTag
from kirbycalc.intalg import AbelianGroup
from kirbycalc.plumbing import PlumbingGraph, c_p, from_plumbing
from kirbycalc.surgery import (FAIL, INDETERMINATE, PASS, PROVED_PAIRS, Certificate, Check,
                               Figure6Shape, Figure8Shape, check, elliptic_en_p,
                               find_cp_chains, find_cusp_shapes, log_transform,
                               rational_blowdown, verify_main_theorem)

from generators import figure6_host, figure8_host


def cp_with_attachment(p, extra=0, end="tail", att_framing=-1, h3=0, h4=0):
    G = PlumbingGraph.chain([-(p + 2)] + [-2] * (p - 2), prefix="c")
    X = from_plumbing(G)
    m = p - 1
    size = m + 1 + extra
    A = [[0] * size for _ in range(size)]
    for i in range(m):
        for j in range(m):
            A[i][j] = X.linking[i][j]
    A[m][m] = att_framing
    for i in range(extra):
        A[m + 1 + i][m + 1 + i] = -1
    e = 0 if end == "head" else m - 1
    A[m][e] = A[e][m] = 1
    labels = [f"c{i + 1}" for i in range(m)] + ["att"] + [f"x{i + 1}" for i in range(extra)]
    return HandleDecomposition.from_linking(A, labels, h3=h3, h4=h4)


def minimal_cusp_host(h4=1):
    return HandleDecomposition.from_linking(
        [[0, 1], [1, -1]], ["cusp", "att"], [KnotTag.RIGHT_TREFOIL, KnotTag.UNKNOT], h4=h4)


class TestFindChains:
    def test_single_copy(self):
        X = cp_with_attachment(4)
        shapes = find_cp_chains(X, 4)
        assert [(s.chain, s.attachment, s.attach_end) for s in shapes] == \
            [(("c1", "c2", "c3"), "att", "tail")]

    def test_head_attachment(self):
        shapes = find_cp_chains(cp_with_attachment(3, end="head"), 3)
        assert [(s.chain, s.attach_end) for s in shapes] == [(("c1", "c2"), "head")]

    def test_two_disjoint_copies(self):
        one = cp_with_attachment(3)
        A = [[0] * 6 for _ in range(6)]
        for i in range(3):
            for j in range(3):
                A[i][j] = A[i + 3][j + 3] = one.linking[i][j]
        labels = ["a1", "a2", "aa", "b1", "b2", "ba"]
        shapes = find_cp_chains(HandleDecomposition.from_linking(A, labels), 3)
        assert sorted((s.chain, s.attachment) for s in shapes) == \
            [(("a1", "a2"), "aa"), (("b1", "b2"), "ba")]

    def test_rejections(self):
        assert find_cp_chains(c_p(3), 3) == []
        knotted = cp_with_attachment(3)
        knotted = knotted.with_data(knotted.linking, knots=[KnotTag.RIGHT_TREFOIL] + [KnotTag.UNKNOT] * 2)
        assert find_cp_chains(knotted, 3) == []
        X = cp_with_attachment(3, extra=1)
        A = [list(r) for r in X.linking]
        A[3][0] = A[0][3] = UNKNOWN
        assert find_cp_chains(HandleDecomposition.from_linking(A, X.labels), 3) == []
        with pytest.raises(DomainError):
            find_cp_chains(X, 1)

    def test_random_hosts_contain_their_chain(self, rng):
        for _ in range(50):
            X, chain, att, p, end = figure6_host(rng)
            found = {(s.chain, s.attachment, s.attach_end) for s in find_cp_chains(X, p)}
            assert (chain, att, end) in found


class TestShapes:
    def test_figure6_errors(self):
        X = cp_with_attachment(3)
        with pytest.raises(ShapeError):
            Figure6Shape(X, ("c1",), "att", 3).validate()
        with pytest.raises(ShapeError):
            Figure6Shape(X, ("c1", "c2"), "att", 3, "head").validate()
        with pytest.raises(ShapeError):
            Figure6Shape(X, ("c2", "c1"), "att", 3).validate()
        with pytest.raises(ShapeError):
            Figure6Shape(X, ("c1", "c2"), "c1", 3).validate()

    def test_figure8_errors(self):
        X = minimal_cusp_host()
        Figure8Shape(X, "cusp", "att").validate()
        bad = X.with_data(X.linking, knots=[KnotTag.UNKNOT, KnotTag.UNKNOT])
        with pytest.raises(ShapeError):
            Figure8Shape(bad, "cusp", "att").validate()
        framed = HandleDecomposition.from_linking([[1, 1], [1, -1]], ["cusp", "att"],
                                                  [KnotTag.RIGHT_TREFOIL, KnotTag.UNKNOT])
        with pytest.raises(ShapeError):
            Figure8Shape(framed, "cusp", "att").validate()
        with pytest.raises(ShapeError):
            Figure8Shape(X, "cusp", "cusp").validate()

    def test_find_cusp_shapes(self):
        assert [(s.cusp, s.attachment) for s in find_cusp_shapes(minimal_cusp_host())] == [("cusp", "att")]
        assert find_cusp_shapes(c_p(3)) == []


class TestRationalBlowdown:
    def test_figure7_counts(self):
        X = cp_with_attachment(4, extra=5, h3=2, h4=1)
        Y, cert = rational_blowdown(find_cp_chains(X, 4)[0])
        assert hb.counts(Y).as_tuple() == (1, 0, 6, 2, 1)
        assert cert.passed
        assert hb.homology_h1(Y).is_trivial
        assert hb.euler_characteristic(Y) == hb.euler_characteristic(X) - 3

    @pytest.mark.parametrize("p", range(2, 8))
    def test_chi_drop(self, p):
        X = cp_with_attachment(p, extra=2)
        Y, cert = rational_blowdown(find_cp_chains(X, p)[0])
        assert cert.passed, cert.to_text()
        assert hb.counts(Y).h1 == 0
        assert hb.euler_characteristic(X) - hb.euler_characteristic(Y) == p - 1

    def test_surviving_entries(self):
        X = cp_with_attachment(3, extra=2)
        Y, _ = rational_blowdown(find_cp_chains(X, 3)[0])
        assert Y.link("x1", "x2") == 0
        assert Y.handle("x1").framing == -1
        assert "att" not in Y.labels and "c1" not in Y.labels

    def test_invalid_shape(self):
        with pytest.raises(ShapeError):
            rational_blowdown(Figure6Shape(cp_with_attachment(3), ("c1", "c2"), "att", 4))


class TestLogTransform:
    def test_minimal_host(self):
        Y, cert = log_transform(Figure8Shape(minimal_cusp_host(), "cusp", "att"), 2)
        assert hb.counts(Y).as_tuple() == (1, 0, 2, 0, 1)
        assert cert.passed, cert.to_text()

    @pytest.mark.parametrize("q", range(2, 9))
    def test_preserves_counts(self, q):
        X = minimal_cusp_host()
        Y, cert = log_transform(Figure8Shape(X, "cusp", "att"), q)
        assert cert.passed, cert.to_text()
        assert hb.counts(Y) == hb.counts(X)
        assert hb.homology_h1(Y) == AbelianGroup()

    def test_construction_steps(self):
        _, cert = log_transform(Figure8Shape(minimal_cusp_host(), "cusp", "att"), 3)
        assert cert.construction[0] == "blow up 2 time(s) with sign -1: ['e1', 'e2']"
        assert cert.construction[1] == "slide cusp over -e1 twice, over -e2 once"

    def test_bad_multiplicity(self):
        with pytest.raises(DomainError):
            log_transform(Figure8Shape(minimal_cusp_host(), "cusp", "att"), 1)


class TestEllipticCertificates:
    def test_elliptic_model(self):
        shape = elliptic_en_p(1, 2)
        assert hb.counts(shape.host).as_tuple() == (1, 0, 12, 2, 1)
        assert hb.euler_characteristic(shape.host) == 12
        assert not shape.conjectural
        assert elliptic_en_p(1, 5, conjectural=True).conjectural
        with pytest.raises(DomainError):
            elliptic_en_p(1, 5)
        with pytest.raises(DomainError):
            elliptic_en_p(0, 2)

    @pytest.mark.parametrize("n", [1, 2, 3])
    @pytest.mark.parametrize("p, q", PROVED_PAIRS)
    def test_proved_pairs(self, n, p, q):
        cert = verify_main_theorem(n, p, q)
        assert cert.passed, cert.to_text()
        assert cert.counts.as_tuple() == (1, 0, 12 * n, 2, 1)
        assert cert.chi == 12 * n

    def test_conjectural_pair(self):
        with pytest.raises(DomainError):
            verify_main_theorem(1, 5, 7)
        cert = verify_main_theorem(1, 5, 7, allow_conjectural=True)
        assert cert.counts.as_tuple() == (1, 0, 12, 2, 1)
        assert not cert.passed
        assert [c.status for c in cert.failures()] == [INDETERMINATE]

    @pytest.mark.parametrize("n, p, q", [(0, 2, 3), (1, 2, 4), (1, 1, 3), (1, 3, 3)])
    def test_invalid(self, n, p, q):
        with pytest.raises(DomainError):
            verify_main_theorem(n, p, q, allow_conjectural=True)

    def test_random_figure8_hosts(self, rng):
        for _ in range(30):
            X, cusp, att = figure8_host(rng)
            q = rng.randint(2, 6)
            Y, cert = log_transform(Figure8Shape(X, cusp, att), q)
            assert cert.passed, cert.to_text()
            assert hb.counts(Y) == hb.counts(X)


class TestCertificate:
    def test_json_keys(self):
        data = json.loads(verify_main_theorem(1, 2, 3).to_json())
        assert list(data) == ["construction", "counts", "chi", "checks"]
        assert data["counts"] == [1, 0, 12, 2, 1]
        assert set(data["checks"][0]) == {"name", "status", "expected", "actual", "source"}

    def test_text(self):
        text = verify_main_theorem(1, 2, 3).to_text()
        assert "counts (h0,h1,h2,h3,h4) = (1, 0, 12, 2, 1)" in text
        assert text.endswith("verdict: all checks pass")

    def test_check_helper(self):
        assert check("x", 1, 1).status == PASS
        assert check("x", 1, 2).status == FAIL
        assert Check("x", PASS, (1, 2), UNKNOWN).to_dict()["actual"] == "?"

    def test_chi_consistency(self):
        with pytest.raises(DomainError):
            Certificate(("a",), hb.HandleCounts(1, 0, 2, 0, 0), 5)
