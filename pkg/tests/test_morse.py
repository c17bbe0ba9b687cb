import pytest

from sullivan.chain import Chain
from sullivan.complex import in_B, subquotient
from sullivan.diagram import Diagram
from sullivan.exceptions import MatchingError
from sullivan.homology import HomologyGroup, homology
from sullivan.models import CellStatus, Flavor
from sullivan.morse import (
    CellularGraph,
    Matching,
    build_matching,
    check_acyclic,
    degeneracy_certificate,
    morse_complex,
)


@pytest.fixture
def sigma() -> Diagram:
    return Diagram.build(Flavor.UNPAR_UNEN, "(0)(1)", [(0, 0, "(0)"), (0, 1, "(1)")])


# --- Matchings on a hand-made complex ---


def test_cellular_graph_edges(triangle):
    graph = CellularGraph(triangle)
    assert len(list(graph.vertices())) == 6
    assert sorted(graph.edges(1)) == [(0, 0, -1), (0, 1, 1), (1, 1, -1), (1, 2, 1), (2, 0, 1), (2, 2, -1)]
    assert graph.coefficient(1, 2, 0) == 1


def test_matching_around_the_triangle_is_cyclic(triangle):
    matching = Matching.from_pairs(triangle, {1: [(0, 0), (1, 1), (2, 2)]})
    acyclic, loop = check_acyclic(CellularGraph(triangle), matching)
    assert not acyclic
    assert set(loop) <= {"a", "b", "c", "ab", "bc", "ca"}
    with pytest.raises(MatchingError):
        morse_complex(triangle, matching)


def test_matching_reuse_is_rejected(triangle):
    with pytest.raises(MatchingError):
        Matching.from_pairs(triangle, {1: [(0, 1), (2, 1)]})


def test_morse_complex_of_triangle(triangle):
    matching = Matching.from_pairs(triangle, {1: [(0, 1), (1, 2)]})
    assert check_acyclic(CellularGraph(triangle), matching) == (True, None)
    reduced = morse_complex(triangle, matching)
    assert reduced.counts() == [1, 1]
    assert reduced.cells(0) == ["a"] and reduced.cells(1) == ["ca"]
    assert reduced.boundary_matrix(1).is_zero()
    assert homology(reduced) == homology(triangle)


def test_matching_counts(triangle):
    matching = Matching.from_pairs(triangle, {1: [(0, 1), (1, 2)]})
    assert matching.counts() == {
        "essential": [1, 1],
        "collapsible": [0, 2],
        "redundant": [2, 0],
    }
    assert matching.pairs(1) == [(0, 1), (1, 2)]
    assert matching.export() == "1\tab\tb\t\n1\tbc\tc\t"


# --- The flow on SD_0^2 ---


def test_flow_on_sd_0_2(sd_0_2, zeta2, eta2, sigma):
    matching = build_matching(sd_0_2)
    assert matching.counts()["essential"] == [1, 1, 0]
    assert [sd_0_2.cells(1)[i] for i in matching.essentials(1)] == [zeta2]
    assert matching.status[1][sd_0_2.index_of(sigma, 1)] is CellStatus.REDUNDANT
    assert matching.pairs(2) == [(0, sd_0_2.index_of(sigma, 1))]
    assert matching.export() == f"2\t{eta2.to_text()}\t{sigma.to_text()}\t1"


def test_degeneracy_drops_along_the_flow(sd_0_2):
    assert degeneracy_certificate(build_matching(sd_0_2)) == (True, None)


def test_morse_homology_agrees(sd_0_3):
    reduced = morse_complex(sd_0_3, threads=2)
    assert homology(reduced) == homology(sd_0_3)
    assert sum(reduced.counts()) < sum(sd_0_3.counts())


def test_inclusion_of_essential_cells(sd_0_2, zeta2):
    reduced = morse_complex(sd_0_2)
    assert reduced.counts() == [1, 1, 0]
    assert homology(reduced) == {0: HomologyGroup(1), 1: HomologyGroup(1), 2: HomologyGroup()}
    assert reduced.include(Chain.of(zeta2)) == Chain.of(zeta2)
    assert reduced.project(Chain.of(zeta2)) == Chain.of(zeta2)


def test_inclusion_rejects_non_essential(sd_0_2, eta2):
    reduced = morse_complex(sd_0_2)
    with pytest.raises(MatchingError):
        reduced.include(Chain.of(eta2))


def test_non_strict_matching_on_a_quotient(sd_0_2):
    quotient = subquotient(sd_0_2, in_B(1), "quotient").complex
    with pytest.raises(MatchingError):
        build_matching(quotient)
    loose = build_matching(quotient, strict=False)
    assert loose.counts()["essential"] == [0, 1, 1]
