"""
Service layer behind the command line interface.

``SullivanController`` owns the settings and the complex cache. It builds
components on demand, formats homology tables, runs the verification suites
and certifies the named classes.
"""

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

from .cache import ComplexCache
from .chain import Chain
from .complex import ChainComplex, build_complex, suspension_pairing
from .config import Settings
from .diagram import canonicalize, degenerate_count, orbit_representative, top_degree, top_type
from .exceptions import BudgetExceededError, ChainComplexError, MatchingError, VerificationError
from .hochschild import FrobeniusAlgebra, Tensor, hochschild_eval, hochschild_homology
from .homology import HomologyGroup, homology, is_boundary
from .models import Flavor
from .morse import build_matching, check_acyclic, CellularGraph, degeneracy_certificate, morse_complex
from .operations import (
    class_eta,
    class_zeta,
    find_boundary_witness,
    generates_homology,
    named_class,
    stabilization_quotient_check,
    support_splitting_check,
    transfer_chain_map,
)

logger = logging.getLogger(__name__)

OUTPUT_SCHEMA_VERSION = 1

DEFAULT_CHECKS = (
    "d_squared",
    "euler",
    "suspension",
    "matching",
    "morse_homology",
    "vanishing",
    "h1_shadow",
    "transfer",
)
EXTRA_CHECKS = ("support", "stabilization", "hh", "canonical")
CLASS_CHECKS = (
    "zeta",
    "eta",
    "mu",
    "omega",
    "gamma",
    "Omega",
    "Gamma",
    "mu-omega-homologous",
    "zeta-generates",
    "hh",
)

# H_1(SD_g^2) for the genera where it is known.
H1_SHADOW = {0: HomologyGroup(1), 1: HomologyGroup(0, (2,)), 2: HomologyGroup(0, (2,))}


@dataclass
class CheckResult:
    """Outcome of one named check; ``passed`` is None when the check does not apply."""

    name: str
    passed: Optional[bool]
    detail: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        status = "skipped" if self.passed is None else ("pass" if self.passed else "fail")
        return {"check": self.name, "status": status, "detail": self.detail}


@dataclass
class VerificationReport:
    """All checks run against one component."""

    flavor: Flavor
    g: int
    m: int
    results: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed is not False for r in self.results)

    @property
    def failures(self) -> List[str]:
        return [r.name for r in self.results if r.passed is False]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": OUTPUT_SCHEMA_VERSION,
            "flavor": self.flavor.value,
            "g": self.g,
            "m": self.m,
            "passed": self.passed,
            "checks": [r.to_dict() for r in self.results],
        }


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (Chain, Tensor)):
        return value.to_text() if isinstance(value, Tensor) else str(value)
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    return str(value)


def parse_argument(argument: Optional[str]) -> List[int]:
    """``"3,3"`` or ``"4"`` -> integer list; empty for no argument."""
    if argument is None or not argument.strip():
        return []
    try:
        return [int(part) for part in argument.replace(" ", "").split(",") if part]
    except ValueError:
        raise ValueError(f"expected comma separated integers, got '{argument}'") from None


def expected_hochschild(n: int) -> HomologyGroup:
    """HH_n of Z[x]/(x²) with coefficients in itself."""
    if n == 0:
        return HomologyGroup(2)
    return HomologyGroup(1, (2,)) if n % 2 else HomologyGroup(1)


class SullivanController:
    """Facade over building, caching, reducing and certifying components."""

    def __init__(self, settings: Optional[Settings] = None, cache: Optional[ComplexCache] = None):
        """
        Args:
            settings: Limits and locations; read from the environment when omitted.
            cache: Cache to use instead of one at ``settings.cache_dir``.
        """
        self.settings = settings or Settings.from_env()
        self.cache = cache or ComplexCache(self.settings.cache_dir)
        self._complexes: Dict[tuple, ChainComplex] = {}
        logger.info(
            f"SullivanController initialized (cache {self.cache.cache_dir}, threads {self.settings.threads})"
        )

    # -- building ------------------------------------------------------------------------

    def check_budget(self, flavor: Flavor, g: int, m: int) -> None:
        """Reject components beyond ``max_complexity`` before any enumeration.

        Raises:
            BudgetExceededError: If 2g+m exceeds the configured bound.
        """
        complexity = 2 * g + m
        if complexity > self.settings.max_complexity:
            raise BudgetExceededError(
                f"{Flavor(flavor).symbol} g={g} m={m} has 2g+m={complexity} "
                f"(top degree {top_degree(Flavor(flavor), g, m)}), above max_complexity={self.settings.max_complexity}"
            )

    def get_complex(self, flavor: Flavor, g: int, m: int, use_cache: bool = True) -> ChainComplex:
        """The complex of a component, from memory, the cache, or a fresh build."""
        flavor = Flavor(flavor)
        key = (flavor, g, m)
        if key in self._complexes:
            return self._complexes[key]
        self.check_budget(flavor, g, m)
        complex_ = self.cache.cache_load(flavor, g, m) if use_cache else None
        if complex_ is None:
            complex_ = build_complex(
                flavor,
                g,
                m,
                budget_cells=self.settings.budget_cells,
                threads=self.settings.threads,
                progress=self.settings.progress,
            )
            if use_cache:
                self.cache.cache_store(complex_)
        self._complexes[key] = complex_
        return complex_

    # -- homology tables -----------------------------------------------------------------

    def homology_groups(self, flavor: Flavor, g: int, m: int, use_morse: bool = False) -> Dict[int, HomologyGroup]:
        c = self.get_complex(flavor, g, m)
        if use_morse:
            c = morse_complex(c, threads=self.settings.threads)
        return homology(c, threads=self.settings.threads)

    def homology_table(
        self,
        flavor: Flavor,
        g: int,
        m: int,
        use_morse: bool = False,
        min_degree: Optional[int] = None,
        max_degree: Optional[int] = None,
    ) -> List[Dict[str, Any]]:
        """Rows keyed by (flavor, g, m, degree) with Betti number and torsion factors."""
        flavor = Flavor(flavor)
        groups = self.homology_groups(flavor, g, m, use_morse)
        rows = []
        for k in sorted(groups):
            if min_degree is not None and k < min_degree:
                continue
            if max_degree is not None and k > max_degree:
                continue
            rows.append(
                {
                    "flavor": flavor.value,
                    "g": g,
                    "m": m,
                    "degree": k,
                    "betti": groups[k].betti,
                    "torsion": list(groups[k].torsion),
                }
            )
        logger.info(f"Homology {flavor.symbol} g={g} m={m}: {[groups[k].to_text() for k in sorted(groups)]}")
        return rows

    @staticmethod
    def render_table(rows: Sequence[Dict[str, Any]], fmt: str = "csv") -> str:
        """CSV (degree, betti, torsion) or versioned JSON; identical rows give identical text."""
        if fmt == "json":
            payload = {"schema_version": OUTPUT_SCHEMA_VERSION, "rows": list(rows)}
            return json.dumps(payload, sort_keys=True, indent=2)
        if fmt != "csv":
            raise ValueError(f"unknown output format '{fmt}'")
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["degree", "betti", "torsion"])
        for row in rows:
            writer.writerow([row["degree"], row["betti"], ";".join(str(t) for t in row["torsion"])])
        return buffer.getvalue()

    # -- verification --------------------------------------------------------------------

    def verify(
        self,
        flavor: Flavor,
        g: int,
        m: int,
        checks: Optional[Sequence[str]] = None,
        raise_on_failure: bool = True,
    ) -> VerificationReport:
        """Run named checks against one component.

        Args:
            checks: Names from ``DEFAULT_CHECKS`` and ``EXTRA_CHECKS``; ``["all"]``
                runs both, None runs the defaults.
            raise_on_failure: Raise instead of returning a failed report.

        Raises:
            VerificationError: With the report, when a check fails.
            ValueError: For unknown check names.
        """
        flavor = Flavor(flavor)
        if checks is None:
            names = list(DEFAULT_CHECKS)
        elif list(checks) == ["all"]:
            names = list(DEFAULT_CHECKS) + list(EXTRA_CHECKS)
        else:
            names = list(checks)
        runners: Dict[str, Callable[[Flavor, int, int], CheckResult]] = {
            "d_squared": self._check_d_squared,
            "euler": self._check_euler,
            "suspension": self._check_suspension,
            "matching": self._check_matching,
            "morse_homology": self._check_morse_homology,
            "vanishing": self._check_vanishing,
            "h1_shadow": self._check_h1_shadow,
            "transfer": self._check_transfer,
            "support": self._check_support,
            "stabilization": self._check_stabilization,
            "hh": self._check_hh,
            "canonical": self._check_canonical,
        }
        unknown = [n for n in names if n not in runners]
        if unknown:
            raise ValueError(f"unknown check(s) {', '.join(unknown)}")
        report = VerificationReport(flavor, g, m)
        for name in names:
            result = runners[name](flavor, g, m)
            result.detail = _jsonable(result.detail)
            report.results.append(result)
            if result.passed is False:
                logger.error(f"Check {name} failed on {flavor.symbol} g={g} m={m}: {result.detail}")
            else:
                logger.debug(f"Check {name} on {flavor.symbol} g={g} m={m}: {result.to_dict()['status']}")
        logger.info(f"Verified {flavor.symbol} g={g} m={m}: failures {report.failures}")
        if raise_on_failure and not report.passed:
            raise VerificationError(f"checks failed: {', '.join(report.failures)}", report=report.to_dict())
        return report

    def _check_d_squared(self, flavor: Flavor, g: int, m: int) -> CheckResult:
        c = self.get_complex(flavor, g, m)
        try:
            c.check_d_squared()
        except ChainComplexError as e:
            return CheckResult("d_squared", False, {"witness": e.witness})
        return CheckResult("d_squared", True, {"counts": c.counts()})

    def _check_euler(self, flavor: Flavor, g: int, m: int) -> CheckResult:
        c = self.get_complex(flavor, g, m)
        # the lone suspension disk is the only cell of the (0, 1) unparametrized components
        expected = 1 if (g, m) == (0, 1) and not flavor.parametrized else 0
        chi = c.euler_characteristic()
        return CheckResult("euler", chi == expected, {"euler_characteristic": chi, "expected": expected})

    def _check_suspension(self, flavor: Flavor, g: int, m: int) -> CheckResult:
        try:
            pairs = suspension_pairing(self.get_complex(flavor, g, m))
        except ChainComplexError as e:
            return CheckResult("suspension", False, {"error": str(e), "witness": e.witness})
        return CheckResult("suspension", True, {"pairs": pairs})

    def _matching(self, flavor: Flavor, g: int, m: int):
        return build_matching(self.get_complex(flavor, g, m), threads=self.settings.threads)

    def _check_matching(self, flavor: Flavor, g: int, m: int) -> CheckResult:
        c = self.get_complex(flavor, g, m)
        try:
            matching = self._matching(flavor, g, m)
        except MatchingError as e:
            return CheckResult("matching", False, {"error": str(e), "witness": e.witness})
        acyclic, loop = check_acyclic(CellularGraph(c), matching)
        detail: Dict[str, Any] = {"counts": matching.counts(), "acyclic": acyclic}
        passed = acyclic
        if not flavor.enumerated:
            descends, step = degeneracy_certificate(matching)
            detail["degeneracy_descends"] = descends
            if step is not None:
                detail["witness"] = [cell.to_text() for cell in step]
            passed = passed and descends
        stray = [
            c.bases[k][i].to_text()
            for k in range(1, len(c.bases))
            for i in matching.essentials(k)
            if degenerate_count(c.bases[k][i]) > 0 or any(s.punctures for s in c.bases[k][i].surfaces)
        ]
        detail["unmatched_degenerate"] = stray[:5]
        passed = passed and not stray
        if loop:
            detail["loop"] = [cell.to_text() for cell in loop]
        return CheckResult("matching", passed, detail)

    def _check_morse_homology(self, flavor: Flavor, g: int, m: int) -> CheckResult:
        c = self.get_complex(flavor, g, m)
        try:
            reduced = morse_complex(c, self._matching(flavor, g, m), threads=self.settings.threads)
        except (MatchingError, ChainComplexError) as e:
            return CheckResult("morse_homology", False, {"error": str(e)})
        direct = homology(c, threads=self.settings.threads)
        morse = homology(reduced, threads=self.settings.threads)
        degrees = sorted(set(direct) | set(morse))
        same = all(direct.get(k, HomologyGroup()) == morse.get(k, HomologyGroup()) for k in degrees)
        return CheckResult(
            "morse_homology",
            same,
            {
                "direct": [direct.get(k, HomologyGroup()).to_text() for k in degrees],
                "morse": [morse.get(k, HomologyGroup()).to_text() for k in degrees],
                "essential_counts": reduced.counts(),
            },
        )

    def _check_vanishing(self, flavor: Flavor, g: int, m: int) -> CheckResult:
        groups = self.homology_groups(flavor, g, m)
        if flavor.enumerated:
            bound = m - 2
        else:
            bound = m - 1 if (m - 1) % 2 == 0 else m - 2
        offending = []
        if groups.get(0, HomologyGroup()) != HomologyGroup(1):
            offending.append(0)
        offending += [k for k in range(1, bound + 1) if k in groups and not groups[k].is_zero()]
        return CheckResult("vanishing", not offending, {"through_degree": bound, "offending_degrees": offending})

    def _check_h1_shadow(self, flavor: Flavor, g: int, m: int) -> CheckResult:
        if flavor is not Flavor.UNPAR_UNEN or m != 2 or g not in H1_SHADOW:
            return CheckResult("h1_shadow", None)
        h1 = self.homology_groups(flavor, g, m).get(1, HomologyGroup())
        return CheckResult("h1_shadow", h1 == H1_SHADOW[g], {"H1": h1.to_text(), "expected": H1_SHADOW[g].to_text()})

    def _check_transfer(self, flavor: Flavor, g: int, m: int) -> CheckResult:
        if flavor.enumerated or m < 2:
            return CheckResult("transfer", None)
        source = self.get_complex(flavor, g, m)
        target = self.get_complex(flavor.enumeration, g, m)
        report = transfer_chain_map(flavor, g, m, source=source, target=target).report()
        return CheckResult("transfer", all(report.values()), {**report, "factor": math.factorial(m)})

    def _check_support(self, flavor: Flavor, g: int, m: int) -> CheckResult:
        report = support_splitting_check(flavor, g, m, c=self.get_complex(flavor, g, m))
        return CheckResult("support", bool(report["injective"]), report)

    def _check_stabilization(self, flavor: Flavor, g: int, m: int) -> CheckResult:
        report = stabilization_quotient_check(flavor, g, m, c=self.get_complex(flavor, g + 1, m))
        return CheckResult("stabilization", bool(report["no_low_essentials"] and report["vanishing"]), report)

    def _check_hh(self, flavor: Flavor, g: int, m: int, n: int = 4) -> CheckResult:
        groups = hochschild_homology(n)
        wrong = [k for k, group in groups.items() if group != expected_hochschild(k)]
        return CheckResult("hh", not wrong, {"HH": [groups[k].to_text() for k in sorted(groups)], "wrong": wrong})

    def _check_canonical(self, flavor: Flavor, g: int, m: int) -> CheckResult:
        if flavor is not Flavor.PAR_UNEN:
            return CheckResult("canonical", None)
        c = self.get_complex(flavor, g, m)
        seen: Dict[Any, Any] = {}
        for k in range(len(c.bases)):
            for cell in c.cells(k):
                representative = orbit_representative(cell, self.settings.max_orbit_leaves)
                if canonicalize(representative) != cell:
                    return CheckResult("canonical", False, {"cell": cell.to_text(), "reason": "not canonical"})
                if representative in seen:
                    return CheckResult(
                        "canonical", False, {"cells": [seen[representative].to_text(), cell.to_text()]}
                    )
                seen[representative] = cell
        return CheckResult("canonical", True, {"cells": len(seen)})

    # -- classes -------------------------------------------------------------------------

    def classes(self, check: str, argument: Optional[str] = None, raise_on_failure: bool = True) -> Dict[str, Any]:
        """Construct a named class and certify it.

        Args:
            check: A name from ``CLASS_CHECKS``.
            argument: Comma separated integers, e.g. ``"3,3"`` for Ω̃_(3,3).

        Raises:
            VerificationError: With the report, when the certification fails.
            ValueError: For unknown checks or missing arguments.
        """
        args = parse_argument(argument)
        if check not in CLASS_CHECKS:
            raise ValueError(f"unknown class check '{check}', expected one of {', '.join(CLASS_CHECKS)}")
        if check == "hh":
            result = self._check_hh(Flavor.PAR_ENUM, 0, 1, n=args[0] if args else 4)
            report = {"passed": result.passed, **result.detail}
        elif check == "mu-omega-homologous":
            report = self._certify_mu_omega(self._single(check, args))
        elif check == "zeta-generates":
            report = self._certify_zeta_generates(self._single(check, args))
        elif check in ("zeta", "eta"):
            report = self._certify_unparametrized(check, self._single(check, args))
        else:
            report = self._certify_parametrized(check, args)
        report = {"schema_version": OUTPUT_SCHEMA_VERSION, "check": check, "argument": argument, **_jsonable(report)}
        logger.info(f"Class check {check} {argument or ''}: passed={report['passed']}")
        if raise_on_failure and not report["passed"]:
            raise VerificationError(f"class check '{check}' failed", report=report)
        return report

    @staticmethod
    def _single(check: str, args: List[int]) -> int:
        if len(args) != 1:
            raise ValueError(f"class check '{check}' needs one integer argument")
        return args[0]

    def _certify_parametrized(self, name: str, args: List[int]) -> Dict[str, Any]:
        x = named_class(name, args)
        is_cycle = x.boundary().is_zero()
        leaves = len(next(iter(x.support())).leaves)
        algebra = FrobeniusAlgebra()
        value = hochschild_eval(x, [algebra.x()] * leaves, algebra)
        if name == "gamma":
            expected = Tensor.monomial("1" + "x" * 3, 2)
        elif name == "Gamma":
            expected = Tensor.monomial("1" + "x" * (4 * args[0] - 1), 2 ** args[0])
        else:
            expected = Tensor.monomial("1" + "x" * x.degree)
        matches = value.equals_up_to_sign(expected)
        return {
            "passed": is_cycle and matches,
            "cycle": is_cycle,
            "degree": x.degree,
            "terms": len(x),
            "evaluation": value,
            "expected": expected,
        }

    def _certify_unparametrized(self, name: str, m: int) -> Dict[str, Any]:
        d = class_zeta(m) if name == "zeta" else class_eta(m)
        x = Chain.of(d)
        is_cycle = x.boundary().is_zero()
        t = top_type(d)
        report: Dict[str, Any] = {"cycle": is_cycle, "degree": d.degree, "g": t.genus, "m": t.m, "cell": d.to_text()}
        if not is_cycle:
            report["passed"] = False
            return report
        bounds, _ = is_boundary(x, self.get_complex(Flavor.UNPAR_UNEN, t.genus, t.m))
        report["nontrivial"] = not bounds
        report["passed"] = not bounds
        return report

    def _certify_mu_omega(self, m: int) -> Dict[str, Any]:
        difference = named_class("mu", [m]) - named_class("omega", [m])
        witness = find_boundary_witness(difference)
        found = witness is not None and witness.boundary() == difference
        return {"passed": found, "difference": difference, "witness": witness}

    def _certify_zeta_generates(self, m: int) -> Dict[str, Any]:
        zeta = Chain.of(class_zeta(m))
        c = self.get_complex(Flavor.UNPAR_UNEN, 0, m)
        generates = generates_homology(zeta, c)
        return {"passed": generates, "degree": zeta.degree, "cell": class_zeta(m).to_text()}

    # -- cache ---------------------------------------------------------------------------

    def cache_info(self) -> List[Dict[str, Any]]:
        return self.cache.list_entries()

    def cache_clear(self, flavor: Optional[Flavor] = None, g: Optional[int] = None, m: Optional[int] = None) -> List[str]:
        self._complexes.clear()
        return self.cache.clear(flavor, g, m)
