import importlib

import numpy as np
import pytest

# the package re-exports the homology() function, which shadows the submodule attribute
homology_module = importlib.import_module("sullivan.homology")
from sullivan.chain import Chain
from sullivan.complex import ChainComplex, SparseMatrix, build_complex
from sullivan.diagram import Diagram
from sullivan.exceptions import ChainComplexError
from sullivan.homology import (
    HomologyGroup,
    boundary_solver,
    homology,
    homology_row,
    is_boundary,
    kernel_basis,
    snf,
    solve_integer,
)
from sullivan.models import Flavor
from sullivan.operations import class_zeta


# --- Smith normal form and integer solving ---


def test_snf_invariant_factors():
    result = snf(SparseMatrix.from_dense([[2, 4], [6, 8]]))
    assert result.factors == (2, 4)
    assert result.rank == 2
    assert result.torsion == (2, 4)


def test_snf_of_unit_pivots():
    result = snf(SparseMatrix.from_dense([[1, 0, 0], [0, -1, 0], [0, 0, 0]]))
    assert result.factors == (1, 1)
    assert result.torsion == ()


def test_snf_zero_matrix():
    assert snf(SparseMatrix.from_dense([[0, 0], [0, 0]])).rank == 0


@pytest.mark.parametrize("strategy", ["markowitz", "first"])
def test_snf_strategies_agree(strategy):
    A = SparseMatrix.from_dense([[1, 2, 3], [4, 5, 6], [7, 8, 10]])
    assert snf(A, strategy=strategy).factors == (1, 1, 3)


def test_snf_transforms_diagonalize():
    A = np.array([[2, 4], [6, 8]], dtype=object)
    result = snf(SparseMatrix.from_dense(A.tolist()), transforms=True)
    U, V = result.transforms
    D = U.dot(A).dot(V)
    assert D[0, 1] == 0 and D[1, 0] == 0
    assert abs(D[0, 0] * D[1, 1]) == 8


def test_solve_integer():
    A = np.array([[2, 0], [0, 3]], dtype=object)
    z = solve_integer(A, [4, 3])
    assert list(z) == [2, 1]
    assert solve_integer(A, [1, 0]) is None


def test_kernel_basis():
    (v,) = kernel_basis(np.array([[1, 1]], dtype=object))
    assert v[0] == -v[1] and v[0] != 0


# --- Homology groups ---


def test_homology_group_text():
    assert HomologyGroup(2, (3,)).to_text() == "Z^2+C3"
    assert HomologyGroup().to_text() == "0"
    assert HomologyGroup(0, (2,)).to_text() == "C2"


def test_homology_of_triangle(triangle):
    assert homology(triangle) == {0: HomologyGroup(1), 1: HomologyGroup(1)}


def test_homology_with_torsion():
    c = ChainComplex(
        [["v"], ["e"], ["f"]],
        {1: SparseMatrix.from_dense([[0]]), 2: SparseMatrix.from_dense([[2]])},
    )
    groups = homology(c, threads=2)
    assert groups[1] == HomologyGroup(0, (2,))
    assert homology_row(groups) == ["Z", "C2"]


def test_homology_rejects_non_complex():
    c = ChainComplex(
        [["v"], ["e"], ["f"]],
        {1: SparseMatrix.from_dense([[1]]), 2: SparseMatrix.from_dense([[1]])},
    )
    with pytest.raises(ChainComplexError):
        homology(c)


def test_homology_row_keeps_degree_zero():
    assert homology_row({0: HomologyGroup(), 1: HomologyGroup()}) == ["0"]


def test_boundary_decision(sd_0_2, zeta2, eta2):
    sigma = Diagram.build(Flavor.UNPAR_UNEN, "(0)(1)", [(0, 0, "(0)"), (0, 1, "(1)")])
    x = Chain({zeta2: 2, sigma: -1}, degree=1)
    bounds, witness = is_boundary(x, sd_0_2)
    assert bounds
    assert witness.boundary() == x
    assert is_boundary(Chain.of(zeta2), sd_0_2) == (False, None)


def test_boundary_decisions_share_one_diagonalization(zeta2, monkeypatch):
    c = build_complex(Flavor.UNPAR_UNEN, 0, 2)
    calls = []
    original = homology_module.diagonalize

    def counting(A, transforms=False):
        calls.append(A.shape)
        return original(A, transforms=transforms)

    monkeypatch.setattr(homology_module, "diagonalize", counting)
    for coefficient in (1, 2, 3):
        assert is_boundary(Chain.of(zeta2, coefficient), c) == (False, None)
    assert len(calls) == 1
    assert boundary_solver(c, 2) is boundary_solver(c, 2)


def test_boundary_decision_needs_a_cycle(sd_0_3):
    with pytest.raises(ChainComplexError):
        is_boundary(Chain.of(class_zeta(3)), sd_0_3)


# --- Homology of small components ---


@pytest.mark.parametrize(
    "flavor, g, m, row",
    [
        (Flavor.UNPAR_UNEN, 0, 1, ["Z"]),
        (Flavor.UNPAR_UNEN, 0, 2, ["Z", "Z"]),
        (Flavor.UNPAR_UNEN, 0, 3, ["Z", "0", "0", "Z"]),
        (Flavor.PAR_UNEN, 0, 1, ["Z", "Z"]),
        (Flavor.PAR_UNEN, 0, 2, ["Z", "Z", "0", "Z", "Z"]),
    ],
)
def test_homology_rows(flavor, g, m, row):
    assert homology_row(homology(build_complex(flavor, g, m))) == row


@pytest.mark.slow
@pytest.mark.parametrize(
    "flavor, g, m, row",
    [
        (Flavor.UNPAR_UNEN, 0, 4, ["Z", "0", "0", "Z"]),
        (Flavor.UNPAR_UNEN, 0, 5, ["Z", "0", "0", "0", "0", "Z"]),
        (Flavor.UNPAR_UNEN, 1, 2, ["Z", "C2", "0", "Z"]),
        (Flavor.UNPAR_UNEN, 1, 3, ["Z", "0", "0", "C3", "0", "Z^2", "Z"]),
        (Flavor.UNPAR_UNEN, 2, 1, ["Z", "0", "Z", "C5", "0", "Z^2", "C3"]),
        (Flavor.PAR_UNEN, 0, 3, ["Z", "0", "0", "Z^2", "Z", "Z", "Z"]),
        (Flavor.PAR_UNEN, 0, 4, ["Z", "0", "0", "Z", "0", "Z^2", "Z^3", "Z^2", "Z", "C2"]),
        (Flavor.PAR_UNEN, 1, 1, ["Z", "Z", "0", "Z", "Z"]),
    ],
)
def test_homology_rows_large(flavor, g, m, row):
    assert homology_row(homology(build_complex(flavor, g, m, threads=2))) == row
