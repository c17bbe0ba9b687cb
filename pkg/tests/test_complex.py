import pytest

from sullivan.complex import (
    ChainComplex,
    SparseMatrix,
    degree_zero_cells,
    enumerate_all,
    enumerate_cells,
    enumerate_direct,
    in_B,
    in_stabilization_image,
    subquotient,
    suspension_pairing,
)
from sullivan.diagram import Diagram, is_suspended
from sullivan.exceptions import BudgetExceededError, ChainComplexError, UnsupportedDiagramError
from sullivan.models import Flavor


# --- SparseMatrix ---


def test_sparse_matrix_round_trips_dense():
    m = SparseMatrix.from_dense([[1, 0, 2], [0, -1, 0]])
    assert m.shape == (2, 3)
    assert m.nnz() == 3
    assert m.to_dense().tolist() == [[1, 0, 2], [0, -1, 0]]
    assert m.entries() == [(0, 0, 1), (1, 1, -1), (0, 2, 2)]


def test_sparse_matrix_compose_and_apply():
    a = SparseMatrix.from_dense([[1, 1], [0, 1]])
    b = SparseMatrix.from_dense([[2, 0], [1, 3]])
    assert a.compose(b) == SparseMatrix.from_dense([[3, 3], [1, 3]])
    assert a.apply({0: 1, 1: 1}) == {0: 2, 1: 1}


def test_sparse_matrix_shape_mismatch():
    with pytest.raises(ChainComplexError):
        SparseMatrix.from_dense([[1, 2]]).compose(SparseMatrix.from_dense([[1, 2]]))


def test_submatrix_keeps_selected_rows_and_columns():
    m = SparseMatrix.from_dense([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    assert m.submatrix([0, 2], [1]) == SparseMatrix.from_dense([[2], [8]])


# --- ChainComplex ---


def test_complex_rejects_wrong_shape():
    with pytest.raises(ChainComplexError):
        ChainComplex([["a"], ["e", "f"]], {1: SparseMatrix.from_dense([[1]])})


def test_d_squared_witness():
    c = ChainComplex(
        [["v"], ["e"], ["f"]],
        {1: SparseMatrix.from_dense([[1]]), 2: SparseMatrix.from_dense([[1]])},
    )
    with pytest.raises(ChainComplexError) as excinfo:
        c.check_d_squared()
    assert excinfo.value.witness == "f"


def test_triangle_basics(triangle):
    assert triangle.counts() == [3, 3]
    assert triangle.euler_characteristic() == 0
    assert triangle.index_of("bc", 1) == 1
    assert not triangle.contains("bc", 0)
    triangle.check_d_squared()


# --- Enumeration ---


def test_degree_zero_cells():
    (cell,) = degree_zero_cells(Flavor.UNPAR_UNEN, 1, 3)
    assert cell.to_text() == "flavor=unpar-unen; n=0; lambda=(0); S1=(1,2,{(0)})"
    assert len(degree_zero_cells(Flavor.UNPAR_ENUM, 0, 2)) == 2
    assert len(degree_zero_cells(Flavor.PAR_ENUM, 0, 2)) == 2
    assert len(degree_zero_cells(Flavor.PAR_UNEN, 0, 2)) == 1


def test_sd_0_2_cells(sd_0_2, zeta2, eta2):
    assert sd_0_2.counts() == [1, 2, 1]
    assert sd_0_2.euler_characteristic() == 0
    assert zeta2 in sd_0_2.cells(1)
    assert sd_0_2.cells(2) == [eta2]
    sd_0_2.check_d_squared()


def test_single_cell_component():
    bases = enumerate_all(Flavor.UNPAR_UNEN, 0, 1)
    assert [len(b) for b in bases] == [1]


def test_enumeration_budget():
    with pytest.raises(BudgetExceededError):
        enumerate_all(Flavor.UNPAR_UNEN, 0, 3, budget_cells=1)


def test_enumeration_rejects_bad_component():
    with pytest.raises(ValueError):
        enumerate_all(Flavor.UNPAR_UNEN, -1, 2)


def test_enumerate_cells_beyond_top_degree():
    assert enumerate_cells(Flavor.UNPAR_UNEN, 0, 2, 3) == []
    assert len(enumerate_cells(Flavor.UNPAR_UNEN, 0, 2, 1)) == 2


# --- Sub-complexes, quotients and suspension ---


def test_degenerate_subcomplex_and_quotient(sd_0_2):
    sub = subquotient(sd_0_2, in_B(1), "sub")
    quotient = subquotient(sd_0_2, in_B(1), "quotient")
    assert sub.complex.counts() == [1, 1, 0]
    assert quotient.complex.counts() == [0, 1, 1]


def test_selection_must_be_closed_under_faces(sd_0_2):
    # the suspended degree-1 cell has boundary zero, its two faces cancel
    with pytest.raises(ChainComplexError) as excinfo:
        subquotient(sd_0_2, lambda d: d.n == 1 and is_suspended(d), "sub")
    assert excinfo.value.witness.n == 0


def test_closed_selection_with_cancelling_faces(sd_0_2):
    sub = subquotient(sd_0_2, lambda d: d.n == 0 or (d.n == 1 and is_suspended(d)), "sub")
    assert sub.complex.counts()[:2] == [1, 1]


def test_subquotient_mode_is_checked(sd_0_2):
    with pytest.raises(ValueError):
        subquotient(sd_0_2, in_B(1), "both")


def test_stabilization_image(zeta2):
    assert not in_stabilization_image(zeta2)
    d = Diagram.build(Flavor.UNPAR_UNEN, "(0 1)", [(1, 0, "(0 1)")])
    assert in_stabilization_image(d)


def test_suspension_pairing(sd_0_2):
    assert suspension_pairing(sd_0_2) == {0: (1, 1), 1: (1, 1), 2: (0, 0)}


def test_suspension_pairing_sd_0_3(sd_0_3):
    report = suspension_pairing(sd_0_3)
    assert set(report) == set(range(len(sd_0_3.bases)))
    for k, (unsuspended, suspended) in report.items():
        assert unsuspended == suspended


# --- Direct generation against coface closure ---


def _texts(cells):
    return sorted(c.to_text() for c in cells)


@pytest.mark.parametrize(
    "flavor, g, m",
    [
        (Flavor.UNPAR_UNEN, 0, 2),
        (Flavor.UNPAR_UNEN, 1, 1),
        (Flavor.PAR_UNEN, 0, 2),
    ],
)
def test_coface_closure_matches_direct_generation(flavor, g, m):
    bases = enumerate_all(flavor, g, m)
    for k, cells in enumerate(bases):
        assert _texts(cells) == _texts(enumerate_direct(flavor, g, m, k))


@pytest.mark.slow
def test_coface_closure_matches_direct_generation_par_1_1():
    bases = enumerate_all(Flavor.PAR_UNEN, 1, 1)
    for k, cells in enumerate(bases):
        assert _texts(cells) == _texts(enumerate_direct(Flavor.PAR_UNEN, 1, 1, k))


def test_direct_generation_beyond_the_top_degree_is_empty():
    assert enumerate_direct(Flavor.UNPAR_UNEN, 0, 2, 3) == []


def test_direct_generation_needs_unlabeled_cells():
    with pytest.raises(UnsupportedDiagramError):
        enumerate_direct(Flavor.UNPAR_ENUM, 0, 2, 1)
