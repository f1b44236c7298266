import logging
from typing import Callable, Dict, List, Optional

from ..errors import BoundError, CoherenceError
from ..factop import FactAlgebra, FactCategory, comparison_witness, fact_category, fact_pullback, fact_sample
from ..fincat import Functor
from ..finstar import PointedMap, all_maps, identity, rho
from ..permcat import PermRelCategory
from ..relcat import (
    HomotopyEquivWitness,
    RelCategory,
    RelFunctor,
    compose_rel_functors,
    identity_rel_functor,
    rel_product,
    same_functor,
    verify_homotopy_equivalence,
)
from ..schemas import Report, make_report, merge_reports

logger = logging.getLogger(__name__)


class TruncatedSegalFunctor:
    """
    A functor Fin_* -> RelCat on ⟨0⟩..⟨bound⟩
    `action` is evaluated lazily and cached per map.
    """
    def __init__(self, bound: int, values: Dict[int, RelCategory],
                 action: Callable[[PointedMap], RelFunctor], name: str = ''):
        self.bound = bound
        self.values = dict(values)
        self._action = action
        self._cache: Dict[PointedMap, RelFunctor] = {}
        self.name = name
        self.witnesses: Dict[int, HomotopyEquivWitness] = {}
        self.witness_reports: Dict[int, Report] = {}

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r}, bound={self.bound})"

    @property
    def segal(self) -> bool:
        return bool(self.witnesses)

    def value(self, n: int) -> RelCategory:
        if n not in self.values:
            raise BoundError(f"⟨{n}⟩ is beyond the bound {self.bound} of {self.name!r}")
        return self.values[n]

    def act(self, f: PointedMap) -> RelFunctor:
        if f.n > self.bound or f.m > self.bound:
            raise BoundError(f"{f} is beyond the bound {self.bound} of {self.name!r}")
        if f not in self._cache:
            self._cache[f] = self._action(f)
        return self._cache[f]

    def maps(self) -> List[PointedMap]:
        return [f for n in range(self.bound + 1) for m in range(self.bound + 1) for f in all_maps(n, m)]


def check_functoriality(F: TruncatedSegalFunctor) -> Report:
    failures = []
    for n in range(F.bound + 1):
        if not same_functor(F.act(identity(n)).underlying, identity_rel_functor(F.value(n)).underlying):
            failures.append(f"F(id⟨{n}⟩) is not the identity")
    maps = F.maps()
    by_source: Dict[int, List[PointedMap]] = {}
    for g in maps:
        by_source.setdefault(g.n, []).append(g)
    for f in maps:
        for g in by_source.get(f.m, ()):
            if not same_functor(F.act(g.compose(f)).underlying, compose_rel_functors(F.act(g), F.act(f)).underlying):
                failures.append(f"F({g}∘{f}) != F({g})∘F({f})")
    return make_report(f"functoriality {F.name}", 'strict functor on the truncation of Fin_*', failures,
                       {'bound': F.bound})


def segal_functor(F: TruncatedSegalFunctor, n: int, target: Optional[RelCategory] = None) -> RelFunctor:
    """(F(ρ¹), ..., F(ρⁿ)): F⟨n⟩ -> F⟨1⟩ⁿ assembled from the action"""
    legs = [F.act(rho(n, [i])) for i in range(1, n + 1)]
    source = F.value(n)
    target = target or rel_product(*[F.value(1)] * n)
    S, T = source.base, target.base
    obj_map = [T.obj(tuple(leg.ob(x) for leg in legs)) for x in S.objects]
    mor_map = [T.mor(tuple(leg(f) for leg in legs)) for f in S.morphisms]
    return RelFunctor(source, target, Functor(S, T, obj_map, mor_map, name=f"segal_{n}"))


def attach_segal_witnesses(F: TruncatedSegalFunctor, witness: Callable[[int], HomotopyEquivWitness],
                           upto: Optional[int] = None) -> TruncatedSegalFunctor:
    """Verify and attach a witness for the Segal map at every ⟨n⟩ with n <= upto"""
    upto = F.bound if upto is None else min(upto, F.bound)
    for n in range(upto + 1):
        w = witness(n)
        if not same_functor(w.f.underlying, segal_functor(F, n, w.f.target).underlying):
            raise CoherenceError(f"witness at ⟨{n}⟩ is not about the Segal map of {F.name!r}")
        report = verify_homotopy_equivalence(w)
        if not report.passed:
            raise CoherenceError(f"Segal witness at ⟨{n}⟩ fails: {report.counterexamples[0]}",
                                 tuple(report.counterexamples))
        F.witnesses[n] = w
        F.witness_reports[n] = report
    logger.info(f"attached Segal witnesses to {F!r} for n <= {upto}")
    return F


def check_segal(F: TruncatedSegalFunctor) -> Report:
    reports = [F.witness_reports[n] for n in sorted(F.witness_reports)]
    if not reports:
        return make_report(f"segal {F.name}", 'inert maps ρⁱ exhibit F⟨n⟩ ≃ F⟨1⟩ⁿ',
                           ['no Segal witnesses attached'])
    return merge_reports(f"segal {F.name}", 'inert maps ρⁱ exhibit F⟨n⟩ ≃ F⟨1⟩ⁿ', reports,
                         {'bound': max(F.witness_reports)})


class FactFunctor(TruncatedSegalFunctor):
    """Fact(C) on a pullback-closed sample of Fact-objects"""
    def __init__(self, ambient: PermRelCategory, cats: Dict[int, FactCategory], name: str = ''):
        self.ambient = ambient
        self.cats = cats
        super().__init__(max(cats), {n: cat.rel for n, cat in cats.items()},
                         lambda f: fact_pullback(f, cats[f.n], cats[f.m]),
                         name=name or f"Fact({ambient.name})")


def fact_functor(C: PermRelCategory, N: int, seeds: Optional[Dict[int, List[FactAlgebra]]] = None,
                 segal: bool = True, segal_upto: Optional[int] = None) -> FactFunctor:
    """
    Fact(C) truncated at N; the sample is Ψ-images (or `seeds`) closed under pullback
    With segal=True the comparison witnesses are built, verified and attached.
    """
    sample = fact_sample(C, N, seeds)
    cats = {n: fact_category(C, n, sample[n]) for n in range(N + 1)}
    F = FactFunctor(C, cats)
    if segal:
        attach_segal_witnesses(F, lambda n: comparison_witness(C, n, [[i] for i in range(1, n + 1)], cats),
                               segal_upto)
    logger.info(f"built {F!r}: " + ', '.join(f"⟨{n}⟩ {len(c.algebras)}" for n, c in cats.items()))
    return F
