import json

import pytest
from unittest.mock import MagicMock, patch

from sullivan.controller import (
    CheckResult,
    SullivanController,
    expected_hochschild,
    parse_argument,
)
from sullivan.exceptions import BudgetExceededError, VerificationError
from sullivan.homology import HomologyGroup
from sullivan.models import Flavor

# Fixtures are automatically used from conftest.py


def test_parse_argument():
    assert parse_argument("3, 3") == [3, 3]
    assert parse_argument(None) == []
    with pytest.raises(ValueError):
        parse_argument("three")


def test_expected_hochschild():
    assert expected_hochschild(0) == HomologyGroup(2)
    assert expected_hochschild(1) == HomologyGroup(1, (2,))
    assert expected_hochschild(2) == HomologyGroup(1)


# --- Building and caching ---


def test_get_complex_stores_new_builds(settings, mock_cache: MagicMock):
    """A fresh build is written to the cache once and then served from memory."""
    controller = SullivanController(settings, cache=mock_cache)
    first = controller.get_complex(Flavor.UNPAR_UNEN, 0, 2)
    second = controller.get_complex(Flavor.UNPAR_UNEN, 0, 2)

    assert first is second
    assert first.counts() == [1, 2, 1]
    mock_cache.cache_load.assert_called_once_with(Flavor.UNPAR_UNEN, 0, 2)
    mock_cache.cache_store.assert_called_once_with(first)


def test_get_complex_uses_the_cache(settings, controller: SullivanController):
    """A second controller on the same directory loads instead of building."""
    controller.get_complex(Flavor.UNPAR_UNEN, 0, 2)

    fresh = SullivanController(settings)
    with patch("sullivan.controller.build_complex") as build:
        loaded = fresh.get_complex(Flavor.UNPAR_UNEN, 0, 2)

    build.assert_not_called()
    assert fresh.cache.hits == 1
    assert loaded.counts() == [1, 2, 1]


def test_get_complex_without_cache(settings, mock_cache: MagicMock):
    controller = SullivanController(settings, cache=mock_cache)
    controller.get_complex(Flavor.UNPAR_UNEN, 0, 1, use_cache=False)
    mock_cache.cache_load.assert_not_called()
    mock_cache.cache_store.assert_not_called()


def test_budget_is_checked_before_building(controller: SullivanController):
    with patch("sullivan.controller.build_complex") as build:
        with pytest.raises(BudgetExceededError):
            controller.get_complex(Flavor.UNPAR_UNEN, 3, 1)
    build.assert_not_called()


def test_cache_info_and_clear(controller: SullivanController):
    controller.get_complex(Flavor.UNPAR_UNEN, 0, 2)
    (entry,) = controller.cache_info()
    assert entry["counts"] == [1, 2, 1]
    assert len(controller.cache_clear()) == 1
    assert controller.cache_info() == []


# --- Homology tables ---


def test_homology_table(controller: SullivanController):
    rows = controller.homology_table(Flavor.UNPAR_UNEN, 0, 2)
    assert [(r["degree"], r["betti"], r["torsion"]) for r in rows] == [(0, 1, []), (1, 1, []), (2, 0, [])]
    assert rows[0]["flavor"] == "unpar-unen"


def test_homology_table_degree_window(controller: SullivanController):
    rows = controller.homology_table(Flavor.UNPAR_UNEN, 0, 2, min_degree=1, max_degree=1)
    assert [r["degree"] for r in rows] == [1]


def test_morse_table_matches(controller: SullivanController):
    direct = controller.homology_table(Flavor.UNPAR_UNEN, 0, 3)
    reduced = controller.homology_table(Flavor.UNPAR_UNEN, 0, 3, use_morse=True)
    assert [r["betti"] for r in direct] == [r["betti"] for r in reduced]


def test_render_csv(controller: SullivanController):
    rows = controller.homology_table(Flavor.UNPAR_UNEN, 0, 2)
    assert controller.render_table(rows, "csv") == "degree,betti,torsion\n0,1,\n1,1,\n2,0,\n"


def test_render_csv_with_torsion():
    rows = [{"degree": 1, "betti": 0, "torsion": [2, 4]}]
    assert SullivanController.render_table(rows) == "degree,betti,torsion\n1,0,2;4\n"


def test_render_json_is_stable(controller: SullivanController):
    rows = controller.homology_table(Flavor.UNPAR_UNEN, 0, 2)
    text = controller.render_table(rows, "json")
    assert text == controller.render_table(list(rows), "json")
    payload = json.loads(text)
    assert payload["schema_version"] == 1
    assert len(payload["rows"]) == 3


def test_render_rejects_unknown_format():
    with pytest.raises(ValueError):
        SullivanController.render_table([], "xml")


# --- Verification ---


def test_verify_default_checks(controller: SullivanController):
    report = controller.verify(Flavor.UNPAR_UNEN, 0, 2)

    assert report.passed
    assert report.failures == []
    statuses = {r["check"]: r["status"] for r in report.to_dict()["checks"]}
    assert statuses["h1_shadow"] == "pass"
    assert statuses["transfer"] == "pass"


def test_verify_skips_checks_that_do_not_apply(controller: SullivanController):
    report = controller.verify(Flavor.UNPAR_UNEN, 0, 1, checks=["h1_shadow", "transfer", "canonical", "euler"])
    statuses = [r.to_dict()["status"] for r in report.results]
    assert statuses == ["skipped", "skipped", "skipped", "pass"]


def test_verify_failure_raises_with_report(controller: SullivanController):
    with patch.object(SullivanController, "_check_euler", return_value=CheckResult("euler", False, {})):
        with pytest.raises(VerificationError) as excinfo:
            controller.verify(Flavor.UNPAR_UNEN, 0, 2, checks=["euler"])

    assert excinfo.value.report["passed"] is False
    assert excinfo.value.report["checks"][0]["status"] == "fail"


def test_verify_failure_without_raising(controller: SullivanController):
    with patch.object(SullivanController, "_check_euler", return_value=CheckResult("euler", False, {})):
        report = controller.verify(Flavor.UNPAR_UNEN, 0, 2, checks=["euler"], raise_on_failure=False)
    assert report.failures == ["euler"]


def test_verify_unknown_check(controller: SullivanController):
    with pytest.raises(ValueError):
        controller.verify(Flavor.UNPAR_UNEN, 0, 2, checks=["bogus"])


def test_verify_canonical_forms(controller: SullivanController):
    report = controller.verify(Flavor.PAR_UNEN, 0, 1, checks=["canonical", "d_squared"])
    assert report.passed


# --- Classes ---


@pytest.mark.parametrize("check", ["omega", "mu"])
def test_parametrized_classes(controller: SullivanController, check):
    report = controller.classes(check, "2")
    assert report["passed"]
    assert report["cycle"]
    assert report["degree"] == 3
    assert report["evaluation"] == "1⊗x⊗x⊗x"


def test_zeta_is_nontrivial(controller: SullivanController):
    report = controller.classes("zeta", "2")
    assert report["passed"] and report["nontrivial"]
    assert (report["g"], report["m"]) == (0, 2)


def test_zeta_generates(controller: SullivanController):
    assert controller.classes("zeta-generates", "2")["passed"]


def test_mu_and_omega_are_homologous(controller: SullivanController):
    report = controller.classes("mu-omega-homologous", "3")
    assert report["passed"]
    assert report["witness"] is not None


def test_hochschild_class_check(controller: SullivanController):
    report = controller.classes("hh", "3")
    assert report["passed"]
    assert report["HH"] == ["Z^2", "Z+C2", "Z", "Z+C2"]


def test_class_check_errors(controller: SullivanController):
    with pytest.raises(ValueError):
        controller.classes("bogus", "2")
    with pytest.raises(ValueError):
        controller.classes("zeta")


def test_odd_zeta_fails_certification(controller: SullivanController):
    with pytest.raises(VerificationError) as excinfo:
        controller.classes("zeta", "3")
    assert excinfo.value.report["cycle"] is False
