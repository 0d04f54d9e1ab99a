"""Infimizer, minimizer and solution checks for set-valued problems.

"For all x" means every point of the configured grid and "for all z*"
means every vector of the dual sample; each report names both.  The
hypotheses that cannot be verified numerically are taken from the
problem's asserted properties and echoed in the report.
"""

import time
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..domain.dini import scalar_dini_result
from ..domain.exceptions import DomainError, EmptyCollectionError, DimensionError
from ..domain.funcmodel import (InfTranslation, SampleGrid, SetValued, SupportBank,
                                as_point, inf_translate, inf_translate_hull, scalarize)
from ..domain.models import (DEFAULT_DINI, DEFAULT_TOLERANCES, AssertedProperty,
                             Certificate, CertificateKind, CheckMode, CheckReport,
                             ConvexityProperty, ConvexityVerdict, DiniConfig,
                             DominationSet, Failure, Point, Tolerances, Verdict)
from ..domain.polytope import (DualVector, UpperSet, check_dual, dual_cone_sample,
                               is_subset, lattice_inf, set_equal)
from ..domain.xreals import NEG_INF, XReal, is_finite
from ..infrastructure.logging import get_logger, log_check_finished, log_check_started

logger = get_logger(__name__)

INFIMIZER_HYPOTHESES = (AssertedProperty.UNIFORM_LSC,)
MINIMIZER_HYPOTHESES = (AssertedProperty.RADIAL_LSC,
                        AssertedProperty.RADIAL_SEMISTRICT_QUASICONVEX)
SOLUTION_HYPOTHESES = (AssertedProperty.UNIFORM_LSC,
                       AssertedProperty.RADIAL_SEMISTRICT_QUASICONVEX)
PSEUDOCONVEX_HYPOTHESES = (AssertedProperty.RADIAL_LSC,
                           AssertedProperty.RADIAL_PSEUDOCONVEX)

BOUNDARY_NOTE = ("infimum not attained on the grid; minimum sits on the grid boundary "
                 "(infimum may be -inf, no finite infimizer)")


# -- helpers ----------------------------------------------------------------------------

def _zstar(z: DualVector) -> Point:
    return as_point(z.vector)


def _lt(a: XReal, b: XReal, tol: float) -> bool:
    if is_finite(a) and is_finite(b):
        return a < b - tol
    return a < b


def _unverified(required: Iterable[AssertedProperty],
                asserted: Iterable[AssertedProperty]) -> List[str]:
    """Required hypotheses missing from the assertions; uniform l.s.c. covers radial."""
    have = set(asserted)
    if AssertedProperty.UNIFORM_LSC in have:
        have.add(AssertedProperty.RADIAL_LSC)
    return [h.value for h in required if h not in have]


def _check_grid(f: SetValued, grid: SampleGrid) -> None:
    if grid.dim != f.n:
        raise DimensionError("grid dimension differs from the argument dimension",
                             expected=f.n, actual=grid.dim)


def _default_duals(f: SetValued, duals: Optional[Sequence[DualVector]]
                   ) -> List[DualVector]:
    if duals is None:
        return dual_cone_sample(f.cone, 1)
    if not duals:
        raise EmptyCollectionError("the dual sample must not be empty")
    for z in duals:
        check_dual(z, f.cone)
    return list(duals)


def _stable_verdict(failures: Sequence[Failure], unstable: int) -> Verdict:
    if failures:
        return Verdict.FAIL
    return Verdict.LOW_CONFIDENCE if unstable else Verdict.PASS


def _finish(check: str, report: CheckReport, started: float) -> CheckReport:
    duration_ms = int((time.perf_counter() - started) * 1000)
    log_check_finished(check, report.verdict.value, duration_ms,
                       grid_points=report.grid_points)
    return report


# -- separation and certificates --------------------------------------------------------

def separating_dual(f: SetValued, x: Sequence[float], m: Sequence[float],
                    duals: Sequence[DualVector],
                    tol: float = DEFAULT_TOLERANCES.tau_strict) -> Optional[DualVector]:
    """A sampled z* with φ_{f,z*}(m) < φ_{f,z*}(x), found whenever f(x) ⊉ f(m)."""
    Z = np.array([z.vector for z in duals])
    at_x = f.support_values(x, Z)
    at_m = f.support_values(m, Z)
    for z, vx, vm in zip(duals, at_x, at_m):
        if _lt(float(vm), float(vx), tol):
            return z
    return None


def recheck_certificate(f: SetValued, certificate: Certificate,
                        cfg: DiniConfig = DEFAULT_DINI,
                        tol: float = DEFAULT_TOLERANCES.tau_strict) -> bool:
    """Re-evaluate a certificate from scratch; True when its claim still holds."""
    if certificate.zstar is None:
        return False
    zstar = DualVector.of(certificate.zstar)
    phi = scalarize(f, zstar)
    if certificate.kind == CertificateKind.SEPARATION:
        if certificate.base is None:
            return False
        return _lt(phi(certificate.x), phi(certificate.base), tol)

    if certificate.direction is None:
        return False
    value = scalar_dini_result(phi, certificate.x, certificate.direction, cfg).scalar_value
    if certificate.kind == CertificateKind.DINI_MEMBER:
        return value <= tol
    if certificate.kind == CertificateKind.DINI_INTERIOR:
        return value < -tol and phi(certificate.x) > NEG_INF
    return value > tol


# -- domination ----------------------------------------------------------------------------

def domination_set(f: SetValued, x0: Sequence[float], grid: SampleGrid,
                   duals: Optional[Sequence[DualVector]] = None,
                   tol: float = DEFAULT_TOLERANCES.tau_h) -> DominationSet:
    """Grid points x with f(x) ⊄ f(x0), each with a separating dual if one is sampled."""
    _check_grid(f, grid)
    base = as_point(x0)
    if not f.in_domain(base):
        raise DomainError("x0 is not in dom f", {"x0": list(base)})
    sample = _default_duals(f, duals)
    reference = f.evaluate(base)

    members: List[Point] = []
    certificates: List[Certificate] = []
    uncertified: List[Point] = []
    for x in grid.points():
        if is_subset(f.evaluate(x), reference, tol):
            continue
        members.append(x)
        zstar = separating_dual(f, base, x, sample)
        if zstar is None:
            uncertified.append(x)
            continue
        phi = scalarize(f, zstar)
        certificates.append(Certificate(kind=CertificateKind.SEPARATION, x=x, base=base,
                                        zstar=_zstar(zstar), phi=phi(x),
                                        reference=phi(base)))
    if uncertified:
        logger.warning("domination without a sampled separating dual",
                       count=len(uncertified), first=list(uncertified[0]))
    return DominationSet(x0=base, members=members, certificates=certificates,
                         uncertified=uncertified)


def domination_star_shaped(f: SetValued, dominated: DominationSet,
                           tgrid: Optional[SampleGrid] = None,
                           tol: float = DEFAULT_TOLERANCES.tau_h) -> ConvexityVerdict:
    """A(f, x0) ∪ {x0} contains the segment from x0 to each sampled member."""
    ts = (tgrid or SampleGrid.unit_interval(17)).axis_values(0)
    base = np.asarray(dominated.x0)
    reference = f.evaluate(dominated.x0)
    samples = 0
    for x in dominated.members:
        for t in ts:
            if not 0.0 < t < 1.0:
                continue
            samples += 1
            point = as_point(base + t * (np.asarray(x) - base))
            if is_subset(f.evaluate(point), reference, tol):
                witness = {"x0": list(dominated.x0), "x": list(x), "t": float(t)}
                return ConvexityVerdict(property=ConvexityProperty.STAR_SHAPED,
                                        holds=False, witness=witness, samples=samples)
    return ConvexityVerdict(property=ConvexityProperty.STAR_SHAPED, holds=True,
                            samples=samples)


# -- direct oracles ---------------------------------------------------------------------------

def grid_infimum(f: SetValued, grid: SampleGrid) -> UpperSet:
    """inf f[grid]: closed convex hull of all sampled values."""
    _check_grid(f, grid)
    return lattice_inf([f.evaluate(x) for x in grid.points()])


def _dominators(f: SetValued, u: Point, grid: SampleGrid, tol: float) -> List[Point]:
    value = f.evaluate(u)
    return [x for x in grid.points()
            if is_subset(value, f.evaluate(x), tol)
            and not is_subset(f.evaluate(x), value, tol)]


def grid_minimality(f: SetValued, x0: Sequence[float], grid: SampleGrid,
                    tol: float = DEFAULT_TOLERANCES.tau_h) -> CheckReport:
    """f(x0) is minimal in f[grid]: no sampled value strictly contains it."""
    base = as_point(x0)
    better = _dominators(f, base, grid, tol)
    failures = [Failure(message="a grid value strictly contains f(x0)",
                        witness={"x0": list(base), "x": list(better[0])})] if better else []
    return CheckReport(check="DIRECT", verdict=_stable_verdict(failures, 0),
                       grid=grid.describe(), grid_points=grid.size, failures=failures)


def direct_solution_check(f: SetValued, M: Sequence[Sequence[float]], grid: SampleGrid,
                          tol: float = DEFAULT_TOLERANCES.tau_h) -> CheckReport:
    """inf f[M] equals inf f[grid] and every u in M is minimal on the grid."""
    points = [as_point(m) for m in M]
    failures: List[Failure] = []
    if not set_equal(lattice_inf([f.evaluate(u) for u in points]),
                     grid_infimum(f, grid), tol):
        failures.append(Failure(message="inf f[M] differs from the grid infimum",
                                witness={"M": [list(u) for u in points]}))
    for u in points:
        better = _dominators(f, u, grid, tol)
        if better:
            failures.append(Failure(message="a grid value strictly contains f(u)",
                                    witness={"u": list(u), "x": list(better[0])}))
    return CheckReport(check="DIRECT", verdict=_stable_verdict(failures, 0),
                       grid=grid.describe(), grid_points=grid.size, failures=failures)


# -- infimizers ---------------------------------------------------------------------------------

def _attainment(fhat: InfTranslation, bank: SupportBank, grid: SampleGrid,
                tol: float) -> CheckReport:
    zero = as_point(np.zeros(fhat.n))
    points = grid.points()
    failures: List[Failure] = []
    notes: List[str] = []
    for i, zstar in enumerate(bank.duals):
        reference = bank.value(zero, i)
        values = [bank.value(x, i) for x in points]
        k = int(np.argmin(values))
        if not _lt(values[k], reference, tol):
            continue
        x = points[k]
        certificate = Certificate(kind=CertificateKind.SEPARATION, x=x, base=zero,
                                  zstar=_zstar(zstar), phi=values[k], reference=reference)
        failures.append(Failure(
            message="a translated scalarization drops below its value at 0",
            witness={"zstar": list(_zstar(zstar)), "x": list(x), "value": values[k],
                     "reference": reference},
            certificates=[certificate],
        ))
        if grid.on_boundary(x) and BOUNDARY_NOTE not in notes:
            notes.append(BOUNDARY_NOTE)
    return CheckReport(check="ATTAINMENT", verdict=_stable_verdict(failures, 0),
                       grid=grid.describe(), grid_points=len(points),
                       duals=[_zstar(z) for z in bank.duals], failures=failures,
                       notes=notes)


def _strong_vi(bank: SupportBank, grid: SampleGrid, cfg: DiniConfig,
               tol: float) -> CheckReport:
    certificates: List[Certificate] = []
    failures: List[Failure] = []
    unstable = 0
    notes: List[str] = []
    for x in grid.points():
        direction = as_point(-np.asarray(x))
        if not np.any(direction):
            notes.append("x = 0 has zero direction; the condition holds trivially")
            continue
        for i, zstar in enumerate(bank.duals):
            result = scalar_dini_result(bank.evaluator(i), x, direction, cfg)
            value = result.scalar_value
            unstable += 0 if result.stable else 1
            holds = value <= tol
            certificate = Certificate(
                kind=CertificateKind.DINI_MEMBER if holds else CertificateKind.DINI_EXCESS,
                x=x, zstar=_zstar(zstar), phi=bank.value(x, i), dini=value,
                direction=direction,
            )
            certificates.append(certificate)
            if not holds:
                failures.append(Failure(
                    message="0 is not in the z*-derivative of the translation along -x",
                    witness={"x": list(x), "zstar": list(_zstar(zstar)), "dini": value},
                    certificates=[certificate],
                ))
    if unstable:
        notes.append(f"{unstable} derivative estimates did not stabilize")
    return CheckReport(check="STRONG_VI", verdict=_stable_verdict(failures, unstable),
                       grid=grid.describe(), grid_points=grid.size,
                       duals=[_zstar(z) for z in bank.duals], certificates=certificates,
                       failures=failures, notes=notes)


def _hull_consistency(f: SetValued, M: Sequence[Point], fhat: InfTranslation,
                      duals: Sequence[DualVector], attained: bool,
                      tol: float) -> CheckReport:
    zero = as_point(np.zeros(f.n))
    Z = np.array([z.vector for z in duals])
    finite = inf_translate(f, M).support_values(zero, Z)
    hull = fhat.support_values(zero, Z)
    mismatches = [(z, float(a), float(b)) for z, a, b in zip(duals, finite, hull)
                  if not (a == b or (is_finite(a) and is_finite(b) and abs(a - b) <= tol))]
    if not mismatches:
        return CheckReport(check="HULL_CONSISTENCY", verdict=Verdict.PASS,
                           duals=[_zstar(z) for z in duals])
    z, a, b = mismatches[0]
    note = f"f̂(0; M) and f̂(0; co M) differ at z* = {list(_zstar(z))}: {a} vs {b}"
    if attained:
        failure = Failure(message="attainment on the grid but f̂(0; M) != f̂(0; co M)",
                          witness={"zstar": list(_zstar(z)), "finite": a, "hull": b})
        return CheckReport(check="HULL_CONSISTENCY",
                           verdict=Verdict.INCONSISTENT_NUMERICS,
                           duals=[_zstar(z) for z in duals], failures=[failure])
    return CheckReport(check="HULL_CONSISTENCY", verdict=Verdict.PASS,
                       duals=[_zstar(z) for z in duals], notes=[note])


def _reverse(attainment: CheckReport, strong_vi: CheckReport,
             asserted: Sequence[AssertedProperty]) -> CheckReport:
    if AssertedProperty.QCONVEX_AT_POINT not in asserted:
        return CheckReport(check="REVERSE", verdict=Verdict.PASS,
                           hypotheses_unverified=[AssertedProperty.QCONVEX_AT_POINT.value],
                           notes=["pointwise quasiconvexity not asserted; not applicable"])
    if attainment.verdict == Verdict.PASS and strong_vi.verdict == Verdict.FAIL:
        failure = Failure(
            message="attainment holds but the variational inequality fails",
            witness=strong_vi.failures[0].witness if strong_vi.failures else {},
        )
        return CheckReport(check="REVERSE", verdict=Verdict.INCONSISTENT_NUMERICS,
                           hypotheses_asserted=[AssertedProperty.QCONVEX_AT_POINT.value],
                           failures=[failure])
    return CheckReport(check="REVERSE", verdict=Verdict.PASS,
                       hypotheses_asserted=[AssertedProperty.QCONVEX_AT_POINT.value])


def check_infimizer(f: SetValued, M: Sequence[Sequence[float]], grid: SampleGrid,
                    duals: Optional[Sequence[DualVector]] = None,
                    cfg: DiniConfig = DEFAULT_DINI,
                    tolerances: Tolerances = DEFAULT_TOLERANCES,
                    asserted: Sequence[AssertedProperty] = (),
                    hull: bool = True, edge_samples: int = 9) -> CheckReport:
    """Attainment of inf f[X] in M and the variational inequality for f̂(·; M).

    With ``hull`` (the default) the inequality is checked for the
    inf-translation by co M.
    """
    points = [as_point(m) for m in M]
    if not points:
        raise EmptyCollectionError("M must not be empty")
    _check_grid(f, grid)
    outside = [m for m in points if not f.in_domain(m)]
    if outside:
        raise DomainError("M is not contained in dom f",
                          {"outside": [list(m) for m in outside]})
    sample = _default_duals(f, duals)
    started = time.perf_counter()
    log_check_started("infimizer", grid.size, len(sample), m_points=len(points))

    fhat = inf_translate_hull(f, points, edge_samples) if hull else inf_translate(f, points)
    bank = SupportBank(fhat, sample)
    attainment = _attainment(fhat, bank, grid, tolerances.tau_strict)
    strong_vi = _strong_vi(bank, grid, cfg, tolerances.tau_strict)
    children = [attainment, strong_vi]
    if hull:
        children.append(_hull_consistency(f, points, fhat, sample,
                                          attainment.verdict == Verdict.PASS,
                                          tolerances.tau_h))
    children.append(_reverse(attainment, strong_vi, asserted))

    verdict = Verdict.worst(c.verdict for c in children)
    unverified = _unverified(INFIMIZER_HYPOTHESES, asserted)
    if verdict == Verdict.PASS and unverified:
        verdict = Verdict.CONDITIONAL_PASS
    report = CheckReport(check="INFIMIZER", verdict=verdict, grid=grid.describe(),
                         grid_points=grid.size, duals=[_zstar(z) for z in sample],
                         children=children,
                         hypotheses_asserted=[a.value for a in asserted],
                         hypotheses_unverified=unverified)
    return _finish("infimizer", report, started)


# -- minimizers ----------------------------------------------------------------------------------

def _strict_descent(f: SetValued, x: Point, direction: Point,
                    Mstar: Sequence[DualVector], cfg: DiniConfig, tol: float
                    ) -> Tuple[Optional[Certificate], List[XReal], bool]:
    """First z* with φ^↓(x, direction) < 0 and φ(x) > -inf."""
    values: List[XReal] = []
    stable = True
    for zstar in Mstar:
        phi = scalarize(f, zstar)
        at_x = phi(x)
        result = scalar_dini_result(phi, x, direction, cfg)
        values.append(result.scalar_value)
        stable = stable and result.stable
        if at_x > NEG_INF and result.scalar_value < -tol:
            return (Certificate(kind=CertificateKind.DINI_INTERIOR, x=x,
                                zstar=_zstar(zstar), phi=at_x,
                                dini=result.scalar_value, direction=direction),
                    values, stable)
    return None, values, stable


def _weak_descent(f: SetValued, x: Point, direction: Point,
                  duals: Sequence[DualVector], cfg: DiniConfig, tol: float
                  ) -> Tuple[Optional[Certificate], List[XReal], bool]:
    """First z* with φ^↓(x, direction) <= 0."""
    values: List[XReal] = []
    stable = True
    for zstar in duals:
        phi = scalarize(f, zstar)
        result = scalar_dini_result(phi, x, direction, cfg)
        values.append(result.scalar_value)
        stable = stable and result.stable
        if result.scalar_value <= tol:
            return (Certificate(kind=CertificateKind.DINI_MEMBER, x=x,
                                zstar=_zstar(zstar), phi=phi(x),
                                dini=result.scalar_value, direction=direction),
                    values, stable)
    return None, values, stable


def _sufficient(f: SetValued, base: Point, Mstar: Sequence[DualVector],
                grid: SampleGrid, duals: Sequence[DualVector], cfg: DiniConfig,
                tolerances: Tolerances, asserted: Sequence[AssertedProperty]
                ) -> CheckReport:
    dominated = domination_set(f, base, grid, duals, tolerances.tau_h)
    certificates = list(dominated.certificates)
    failures: List[Failure] = []
    notes: List[str] = []
    unstable = 0
    for x in dominated.members:
        direction = as_point(np.asarray(base) - np.asarray(x))
        certificate, values, stable = _strict_descent(f, x, direction, Mstar, cfg,
                                                      tolerances.tau_strict)
        unstable += 0 if stable else 1
        if certificate is not None:
            certificates.append(certificate)
            continue
        failures.append(Failure(
            message="no z* in M* gives strict descent from x towards x0",
            witness={"x": list(x), "x0": list(base),
                     "dini": dict(zip([str(list(_zstar(z))) for z in Mstar], values))},
        ))
    if dominated.is_empty:
        notes.append("domination set is empty; f(x0) is the grid infimum")
    if dominated.uncertified:
        notes.append(f"{len(dominated.uncertified)} dominated points lack a sampled "
                     f"separating dual")

    condition_verdict = _stable_verdict(failures, unstable + len(dominated.uncertified))
    condition = CheckReport(check="VARIATIONAL_INEQUALITY", verdict=condition_verdict,
                            mode=CheckMode.SUFFICIENT, grid=grid.describe(),
                            grid_points=grid.size,
                            duals=[_zstar(z) for z in Mstar],
                            certificates=certificates, failures=failures, notes=notes)
    direct = grid_minimality(f, base, grid, tolerances.tau_h)
    children = [condition, direct]

    if condition.verdict == Verdict.PASS and direct.verdict == Verdict.FAIL:
        verdict = Verdict.INCONSISTENT_NUMERICS
    else:
        verdict = condition.verdict
    unverified = _unverified(MINIMIZER_HYPOTHESES, asserted)
    if verdict == Verdict.PASS and unverified:
        verdict = Verdict.CONDITIONAL_PASS
    if verdict == Verdict.INCONSISTENT_NUMERICS:
        failures = [Failure(message="condition passed but f(x0) is not grid-minimal",
                            witness=direct.failures[0].witness)]
    else:
        failures = []
    return CheckReport(check="MINIMIZER", verdict=verdict, mode=CheckMode.SUFFICIENT,
                       grid=grid.describe(), grid_points=grid.size,
                       duals=[_zstar(z) for z in Mstar], children=children,
                       failures=failures,
                       hypotheses_asserted=[a.value for a in asserted],
                       hypotheses_unverified=unverified)


def _necessary(f: SetValued, base: Point, grid: SampleGrid,
               duals: Sequence[DualVector], cfg: DiniConfig, tolerances: Tolerances,
               asserted: Sequence[AssertedProperty]) -> CheckReport:
    premise = grid_minimality(f, base, grid, tolerances.tau_h)
    premise = premise.model_copy(update={"check": "PREMISE"})
    qconvex = not _unverified((AssertedProperty.QCONVEX_AT_POINT,), asserted)
    strict = qconvex and not _unverified(PSEUDOCONVEX_HYPOTHESES, asserted)
    reference = f.evaluate(base)

    weak_failures: List[Failure] = []
    strict_failures: List[Failure] = []
    certificates: List[Certificate] = []
    unstable = 0
    for x in grid.points():
        direction = as_point(np.asarray(base) - np.asarray(x))
        if not np.any(direction):
            continue
        certificate, values, stable = _weak_descent(f, x, direction, duals, cfg,
                                                    tolerances.tau_strict)
        unstable += 0 if stable else 1
        if certificate is not None:
            certificates.append(certificate)
        else:
            weak_failures.append(Failure(
                message="no sampled z* gives 0 in the derivative from x towards x0",
                witness={"x": list(x), "x0": list(base)},
            ))
        if strict and not set_equal(f.evaluate(x), reference, tolerances.tau_h):
            found, _, _ = _strict_descent(f, x, direction, duals, cfg,
                                          tolerances.tau_strict)
            if found is None:
                strict_failures.append(Failure(
                    message="no sampled z* gives strict descent from x towards x0",
                    witness={"x": list(x), "x0": list(base)},
                ))

    def conclusion(name: str, failures: List[Failure]) -> CheckReport:
        verdict = _stable_verdict(failures, unstable)
        if verdict == Verdict.FAIL and premise.verdict == Verdict.PASS and qconvex:
            verdict = Verdict.INCONSISTENT_NUMERICS
        return CheckReport(check=name, verdict=verdict, mode=CheckMode.NECESSARY,
                           grid=grid.describe(), grid_points=grid.size,
                           duals=[_zstar(z) for z in duals], failures=failures,
                           certificates=certificates if name == "CONCLUSION_A" else [])

    children = [premise, conclusion("CONCLUSION_A", weak_failures)]
    if strict:
        children.append(conclusion("CONCLUSION_B", strict_failures))
    unverified = _unverified((AssertedProperty.QCONVEX_AT_POINT,), asserted)
    if not strict:
        unverified += [h for h in _unverified(PSEUDOCONVEX_HYPOTHESES, asserted)
                       if h not in unverified]
    return CheckReport(check="MINIMIZER", verdict=Verdict.worst(c.verdict for c in children),
                       mode=CheckMode.NECESSARY, grid=grid.describe(),
                       grid_points=grid.size, duals=[_zstar(z) for z in duals],
                       children=children,
                       hypotheses_asserted=[a.value for a in asserted],
                       hypotheses_unverified=unverified)


def check_minimizer(f: SetValued, x0: Sequence[float], Mstar: Sequence[DualVector],
                    grid: SampleGrid, cfg: DiniConfig = DEFAULT_DINI,
                    mode: CheckMode = CheckMode.SUFFICIENT,
                    duals: Optional[Sequence[DualVector]] = None,
                    tolerances: Tolerances = DEFAULT_TOLERANCES,
                    asserted: Sequence[AssertedProperty] = ()) -> CheckReport:
    """Minty-type condition for f(x0) ∈ Min f[X].

    SUFFICIENT: every dominated grid point x has some z* in the finite set
    M* with 0 ∈ Int f^↓_{z*}(x, x0 - x) and φ_{f,z*}(x) > -inf.
    NECESSARY: given grid minimality of f(x0), every grid point has a
    sampled z* with 0 ∈ f^↓_{z*}(x, x0 - x).
    """
    _check_grid(f, grid)
    base = as_point(x0)
    if not f.in_domain(base):
        raise DomainError("x0 is not in dom f", {"x0": list(base)})
    sample = _default_duals(f, duals)
    started = time.perf_counter()

    if mode == CheckMode.SUFFICIENT:
        if not Mstar:
            raise EmptyCollectionError("M* must be a nonempty finite set")
        for zstar in Mstar:
            check_dual(zstar, f.cone)
        log_check_started("minimizer", grid.size, len(Mstar), mode=mode.value)
        report = _sufficient(f, base, list(Mstar), grid, sample, cfg, tolerances,
                             asserted)
    else:
        log_check_started("minimizer", grid.size, len(sample), mode=mode.value)
        report = _necessary(f, base, grid, sample, cfg, tolerances, asserted)
    return _finish("minimizer", report, started)


# -- solutions -----------------------------------------------------------------------------------

def check_solution(f: SetValued, M: Sequence[Sequence[float]],
                   Mstar: Sequence[DualVector], grid: SampleGrid,
                   duals: Optional[Sequence[DualVector]] = None,
                   cfg: DiniConfig = DEFAULT_DINI,
                   direction: CheckMode = CheckMode.SUFFICIENT,
                   tolerances: Tolerances = DEFAULT_TOLERANCES,
                   asserted: Sequence[AssertedProperty] = (),
                   edge_samples: int = 9) -> CheckReport:
    """M is an infimizer made of minimizers.

    The infimizer half runs on f̂(·; co M); each u in M gets its own
    minimizer report; DIRECT compares both halves with grid oracles.
    The verdict is that of STRONG_VI together with the minimizer reports.
    The other infimizer children are informational, and DIRECT only turns
    an agreed pass into INCONSISTENT_NUMERICS.
    """
    points = [as_point(m) for m in M]
    sample = _default_duals(f, duals)
    started = time.perf_counter()
    log_check_started("solution", grid.size, len(sample), mode=direction.value)

    infimizer = check_infimizer(f, points, grid, sample, cfg, tolerances, asserted,
                                hull=True, edge_samples=edge_samples)
    minimizers = []
    for u in points:
        child = check_minimizer(f, u, Mstar, grid, cfg, direction, sample, tolerances,
                                asserted)
        minimizers.append(child.model_copy(update={"check": f"MINIMIZER {list(u)}"}))
    direct = direct_solution_check(f, points, grid, tolerances.tau_h)

    conditions = [infimizer.child("STRONG_VI")] + minimizers
    verdict = Verdict.worst(c.verdict for c in conditions)
    if verdict == Verdict.CONDITIONAL_PASS:
        verdict = Verdict.PASS
    failures: List[Failure] = []
    if (direction == CheckMode.SUFFICIENT and verdict == Verdict.PASS
            and direct.verdict == Verdict.FAIL):
        verdict = Verdict.INCONSISTENT_NUMERICS
        failures = [Failure(message="conditions passed but the grid oracle disagrees",
                            witness=direct.failures[0].witness)]
    unverified = _unverified(SOLUTION_HYPOTHESES if direction == CheckMode.SUFFICIENT
                             else (AssertedProperty.QCONVEX_AT_POINT,), asserted)
    if verdict == Verdict.PASS and unverified:
        verdict = Verdict.CONDITIONAL_PASS

    report = CheckReport(check="SOLUTION", verdict=verdict, mode=direction,
                         grid=grid.describe(), grid_points=grid.size,
                         duals=[_zstar(z) for z in sample],
                         children=[infimizer] + minimizers + [direct],
                         failures=failures,
                         hypotheses_asserted=[a.value for a in asserted],
                         hypotheses_unverified=unverified)
    return _finish("solution", report, started)
