import logging
from typing import List, Optional

from . import config
from .errors import FactpermError
from .factop import (
    FactOperad,
    check_fact_functoriality,
    check_fact_operad,
    check_lax_squares,
    counit_zigzag,
    fact_categories,
    phi,
    phi_psi_witness,
    psi,
    segal_witness,
    validate_fact_algebra,
)
from .fincat import FinCategory, comma_probe
from .finstar import check_factorization, check_nabla_isomorphism, check_rho_compatibility, check_wedge_laws
from .loader import Fixture, bundled_fixtures, load_fixture
from .permcat import PermRelCategory, check_permutative, check_symmetry_homomorphism
from .permconstr import (
    alpha_beta_check,
    check_counit,
    check_functoriality,
    check_grothendieck,
    check_segal,
    check_tw_functoriality,
    check_tw_monoidal,
    fact_functor,
    perm_build,
    segal_comparison_tw,
    unit_inclusion,
)
from .relcat import RelCategory, check_relcat, identity_rel_functor, path_adjunction_witness, verify_homotopy_equivalence
from .schemas import Report, RunConfig, make_report, merge_reports
from .sset import check_simplicial_identities, epsilon, homology, marking, nerve_truncate

logger = logging.getLogger(__name__)


def _failed(name: str, anchor: str, exc: FactpermError) -> Report:
    return make_report(name, anchor, [str(exc)])


def base_of(fixture: Fixture) -> FinCategory:
    return fixture if isinstance(fixture, FinCategory) else fixture.base


def probe_reports(C: FinCategory) -> List[Report]:
    reports = []
    for c in C.objects:
        probe = comma_probe(C, c)
        failures = [] if probe == (1, 0, []) else [f"(π₀, H₁ rank, torsion) = {probe}"]
        reports.append(make_report(f"probe {C.name}@{C.obj_label(c)}",
                                   'Tw(C) ×_C C/c is connected with vanishing H₁', failures,
                                   {'pi0': probe[0], 'h1_rank': probe[1]}))
    return reports


def sset_reports(C: FinCategory, dimension: int = 2) -> List[Report]:
    X = nerve_truncate(C, dimension)
    reports = [check_simplicial_identities(X), epsilon(X, dimension).check()]
    edges = range(len(X.simplices[1]))
    smaller, larger = marking(X, ()), marking(X, edges)
    failures = [] if smaller.marked <= larger.marked else ['marking shrinks when S grows']
    failures += [f"degenerate edge {e} of N(Δ/X) is unmarked" for e in smaller.missing_degenerate()]
    reports.append(make_report(f"marking {X.name}", 'M(X, S) is monotone in S and contains degenerate edges',
                               failures, {'dimension': dimension}))
    if dimension >= 2:
        pi0, rank, torsion = homology(X)
        reports.append(make_report(f"homology {X.name}", 'π₀ and H₁ of the nerve', [],
                                   {'pi0': pi0, 'h1_rank': rank}, [f"torsion {torsion}"]))
    return reports


def relcat_reports(R: RelCategory) -> List[Report]:
    w = path_adjunction_witness(identity_rel_functor(R))
    return [check_relcat(R), verify_homotopy_equivalence(w)]


def permcat_reports(C: PermRelCategory) -> List[Report]:
    objects = list(C.base.objects)
    xs = [objects[i % len(objects)] for i in range(3)]
    return [check_permutative(C), check_symmetry_homomorphism(C, xs)]


def fact_reports(C: PermRelCategory, bound: int) -> List[Report]:
    reports = [check_fact_operad(FactOperad(n)) for n in range(bound + 1)]
    cats = fact_categories(C, bound)
    for n, cat in cats.items():
        reports.append(merge_reports(f"fact-algebras n={n}", 'Fact_n-algebra laws',
                                     [validate_fact_algebra(A) for A in cat.algebras], {'n': n}))
        failures = []
        for A in cat.algebras:
            xs = phi(A)
            if phi(psi(C, n, xs)) != xs:
                failures.append(f"Φ∘Ψ moves {xs}")
            try:
                counit_zigzag(A)
            except FactpermError as exc:
                failures.append(f"{A!r}: {exc}")
        reports.append(make_report(f"phi-psi n={n}", 'Φ∘Ψ = id and ΨΦ(A) -> A is a weq', failures, {'n': n}))
        reports.append(verify_homotopy_equivalence(phi_psi_witness(C, n, cat)))
    reports.append(check_fact_functoriality(cats))
    reports.append(check_lax_squares(C, cats))
    for n in range(min(bound, config.SEGAL_N) + 1):
        reports.append(verify_homotopy_equivalence(segal_witness(C, n, cats)))
    return reports


def perm_reports(C: PermRelCategory, N: int) -> List[Report]:
    F = fact_functor(C, N, segal_upto=config.SEGAL_N)
    P = perm_build(F, N)
    _, comparison = segal_comparison_tw(P.ftw)
    return [
        check_functoriality(F),
        check_segal(F),
        check_tw_functoriality(P.ftw),
        check_tw_monoidal(P.ftw),
        comparison,
        check_grothendieck(P.total, universal=N <= 1),
        check_permutative(P),
        unit_inclusion(P)[1],
    ]


def segal_reports(C: PermRelCategory, bound: int) -> List[Report]:
    F = fact_functor(C, bound, segal_upto=config.SEGAL_N)
    return [check_functoriality(F), check_segal(F)]


def roundtrip_reports(C: PermRelCategory, N: int) -> List[Report]:
    return [check_counit(C, N)]


def eta_reports(C: PermRelCategory, N: int) -> List[Report]:
    return [alpha_beta_check(fact_functor(C, N, segal=False), N)]


def finstar_reports(bound: int) -> List[Report]:
    return [check_factorization(bound), check_rho_compatibility(bound), check_wedge_laws(bound),
            check_nabla_isomorphism(min(bound, 3))]


def fixture_reports(fixture: Fixture) -> List[Report]:
    """The fast checks: category probes, nerve, marking and permutative laws"""
    C = base_of(fixture)
    reports = probe_reports(C) + sset_reports(C)
    if isinstance(fixture, PermRelCategory):
        reports += relcat_reports(fixture.rel) + permcat_reports(fixture)
    elif isinstance(fixture, RelCategory):
        reports += relcat_reports(fixture)
    return reports


def _permutative_suites(run: RunConfig):
    bound = min(run.max_n, run.perm_n)
    return {
        'fact': lambda C: fact_reports(C, bound),
        'segal': lambda C: segal_reports(C, min(bound, config.SEGAL_N)),
        'perm': lambda C: perm_reports(C, run.perm_n),
        'roundtrip': lambda C: roundtrip_reports(C, run.perm_n),
        'eta': lambda C: eta_reports(C, run.perm_n),
    }


def run_suite(run: RunConfig, marking_name: Optional[str] = None) -> List[Report]:
    """The selected check groups over every selected fixture, in the given order"""
    names = run.fixtures or bundled_fixtures()
    reports = finstar_reports(run.max_n) if 'finstar' in run.checks else []
    permutative = _permutative_suites(run)
    for name in names:
        fixture = load_fixture(name, marking_name)
        if 'category' in run.checks:
            try:
                reports += fixture_reports(fixture)
            except FactpermError as exc:
                reports.append(_failed(f"check {name}", 'fixture checks', exc))
        if not isinstance(fixture, PermRelCategory):
            continue
        for check in run.checks:
            if check not in permutative:
                continue
            try:
                reports += permutative[check](fixture)
            except FactpermError as exc:
                reports.append(_failed(f"{check} {name}", f"{check} checks", exc))
    logger.info(f"suite: {len(reports)} reports, {sum(not r.passed for r in reports)} failing")
    return reports
