import pytest

from sullivan.exceptions import UnsupportedDiagramError
from sullivan.hochschild import (
    FrobeniusAlgebra,
    Tensor,
    evaluate_diagram,
    hochschild_eval,
    hochschild_homology,
)
from sullivan.homology import HomologyGroup
from sullivan.models import Flavor
from sullivan.operations import class_gamma, class_mu, class_omega, class_zeta, stabilize


@pytest.fixture
def algebra() -> FrobeniusAlgebra:
    return FrobeniusAlgebra()


# --- Tensors ---


def test_tensor_text():
    t = Tensor.parse("2 1⊗x - x⊗1")
    assert t.coefficient((0, 1)) == 2
    assert t.coefficient((1, 0)) == -1
    assert t.to_text() == "2 1⊗x - x⊗1"
    assert Tensor.monomial("1xxx").to_text() == "1⊗x⊗x⊗x"


def test_tensor_rejects_mixed_lengths():
    with pytest.raises(ValueError):
        Tensor({(0,): 1, (0, 1): 1})
    with pytest.raises(ValueError):
        Tensor.monomial("1y")


def test_normalized_drops_units_after_the_first_factor():
    t = Tensor.monomial("1xxx") + Tensor.monomial("x1xx") + Tensor.monomial("11xx")
    assert t.normalized() == Tensor.monomial("1xxx")


def test_tensor_product(algebra):
    assert algebra.one() @ algebra.x() == Tensor.monomial("1x")
    assert (algebra.x() @ algebra.x()).x_degree() == 2


# --- The algebra Z[x]/(x^2) ---


def test_handle_operator(algebra):
    assert algebra.handle(algebra.one()) == Tensor.monomial("x", 2)
    assert algebra.handle(algebra.x()) == 0


def test_structure_maps(algebra):
    assert algebra.mult(algebra.x() @ algebra.x()) == 0
    assert algebra.comult(algebra.one()) == Tensor.parse("1⊗x + x⊗1")
    assert algebra.counit(algebra.x()) == Tensor({(): 1})
    assert algebra.twist(Tensor.monomial("1x")) == Tensor.monomial("x1")


@pytest.mark.parametrize("shape", ["right", "balanced"])
def test_tree_shapes_agree(algebra, shape):
    one, x = algebra.one(), algebra.x()
    assert algebra.coproduct(one, 3, shape) == algebra.coproduct(one, 3, "left")
    assert algebra.product([x, one, one], shape) == x


def test_unknown_shape(algebra):
    with pytest.raises(ValueError):
        algebra.product([algebra.one()], "zigzag")


# --- Evaluation of diagrams ---


def test_omega_terms_evaluate(algebra, omega_terms):
    first, second = omega_terms
    x, one = algebra.x(), algebra.one()
    assert evaluate_diagram(first, [one, one]) == Tensor.parse("1⊗1⊗1⊗x + 1⊗x⊗1⊗1")
    assert evaluate_diagram(first, [x, x]) == Tensor.monomial("1xxx")
    assert hochschild_eval(second, [x, x]) == 0


def test_omega_and_mu_agree_on_x(algebra):
    x = algebra.x()
    assert hochschild_eval(class_omega(2), [x, x]) == Tensor.monomial("1xxx")
    assert hochschild_eval(class_mu(2), [x, x]) == Tensor.monomial("1xxx")


def test_omega_vanishes_on_units(algebra):
    one = algebra.one()
    assert hochschild_eval(class_omega(2), [one, one]) == 0
    assert hochschild_eval(class_omega(2), [one, one], normalized=False) == 0


def test_gamma_evaluates_to_twice_the_generator(algebra):
    assert hochschild_eval(class_gamma(), [algebra.x()]) == Tensor.monomial("1xxx", 2)


def test_evaluation_needs_disks(algebra, zeta2):
    with pytest.raises(UnsupportedDiagramError):
        hochschild_eval(zeta2, [])
    with pytest.raises(UnsupportedDiagramError):
        hochschild_eval(stabilize(class_zeta(1, Flavor.PAR_ENUM)), [algebra.x()])


def test_evaluation_checks_input_count(algebra):
    with pytest.raises(UnsupportedDiagramError):
        hochschild_eval(class_omega(2), [algebra.x()])


# --- Hochschild homology ---


def test_hochschild_homology_of_dual_numbers():
    groups = hochschild_homology(3)
    assert groups == {
        0: HomologyGroup(2),
        1: HomologyGroup(1, (2,)),
        2: HomologyGroup(1),
        3: HomologyGroup(1, (2,)),
    }
