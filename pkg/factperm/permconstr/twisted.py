import itertools
import logging
from typing import Dict, List, Optional, Tuple

from ..errors import BoundError
from ..fincat import FinCategory, Functor
from ..finstar import (
    PointedMap,
    enumerate_tw_active,
    inclusion_leg,
    rho,
    tw_find_morphism,
    tw_find_object,
    tw_morphism,
    tw_object,
    wedge,
)
from ..relcat import RelCategory, RelFunctor, compose_rel_functors, identity_rel_functor, rel_product, same_functor
from ..schemas import Report, make_report
from .segal import TruncatedSegalFunctor

logger = logging.getLogger(__name__)


def arities(f: PointedMap) -> Tuple[int, ...]:
    """(n_1, ..., n_m) with n_i = |f⁻¹(i)|"""
    return tuple(len(f.preimage(i)) for i in range(1, f.m + 1))


def tw_legs(source: PointedMap, target: PointedMap, u: PointedMap, v: PointedMap) -> List[PointedMap]:
    """
    m_j: ⟨n_{v(j)}⟩ -> ⟨n⟩ -> ⟨k⟩ -> ⟨k_j⟩ for a twisted arrow (u, v): source -> target,
    the order-preserving inclusion of source⁻¹(v(j)), then u, then ρ^{target⁻¹(j)}
    """
    return [rho(target.n, target.preimage(j)).compose(u.compose(inclusion_leg(source, v(j))))
            for j in range(1, target.m + 1)]


class TwFunctor:
    """F^Tw on the truncation of Tw(Fin_*^act): (f: ⟨n⟩ ↠ ⟨m⟩) |-> ∏_i F⟨n_i⟩"""
    def __init__(self, F: TruncatedSegalFunctor, tw: FinCategory, active: FinCategory):
        self.F = F
        self.tw = tw
        self.active = active
        self._values: Dict[int, RelCategory] = {}
        self._actions: Dict[int, RelFunctor] = {}

    def __repr__(self):
        return f"TwFunctor({self.F.name!r}, {self.tw.name})"

    def value(self, x: int) -> RelCategory:
        if x not in self._values:
            f = tw_object(self.tw, self.active, x)
            self._values[x] = rel_product(*(self.F.value(k) for k in arities(f)))
        return self._values[x]

    def legs(self, p: int) -> List[PointedMap]:
        return tw_legs(*tw_morphism(self.tw, self.active, p))

    def act(self, p: int) -> RelFunctor:
        if p in self._actions:
            return self._actions[p]
        source, target, u, v = tw_morphism(self.tw, self.active, p)
        legs = [self.F.act(m) for m in tw_legs(source, target, u, v)]
        picks = [v(j) - 1 for j in range(1, target.m + 1)]
        S_rel = self.value(self.tw.dom[p])
        T_rel = self.value(self.tw.cod[p])
        S, T = S_rel.base, T_rel.base
        obj_map = [T.obj(tuple(leg.ob(key[i]) for leg, i in zip(legs, picks))) for key in S.obj_keys]
        mor_map = [T.mor(tuple(leg(key[i]) for leg, i in zip(legs, picks))) for key in S.mor_keys]
        functor = RelFunctor(S_rel, T_rel, Functor(S, T, obj_map, mor_map, name=f"F^Tw({self.tw.label(p)})"))
        self._actions[p] = functor
        return functor


def f_tw(F: TruncatedSegalFunctor, N: Optional[int] = None,
         tw: Optional[Tuple[FinCategory, FinCategory]] = None) -> TwFunctor:
    """F^Tw over `tw`, a (Tw(Act), Act) pair from enumerate_tw_active"""
    N = F.bound if N is None else N
    if N > F.bound:
        raise BoundError(f"F^Tw at bound {N} needs F up to ⟨{N}⟩, {F.name!r} stops at ⟨{F.bound}⟩")
    tw, active = tw or enumerate_tw_active(N)
    T = TwFunctor(F, tw, active)
    logger.info(f"built {T!r}")
    return T


def check_tw_functoriality(T: TwFunctor) -> Report:
    tw, act = T.tw, T.active
    failures = []
    for x in tw.objects:
        if not same_functor(T.act(tw.identity[x]).underlying, identity_rel_functor(T.value(x)).underlying):
            failures.append(f"F^Tw(id) is not the identity at {tw_object(tw, act, x)}")
    for g, f in tw.composable_pairs():
        if not same_functor(T.act(tw.comp(g, f)).underlying, compose_rel_functors(T.act(g), T.act(f)).underlying):
            failures.append(f"F^Tw fails composition at ({tw.label(g)}, {tw.label(f)})")
    return make_report(f"F^Tw functoriality {T.F.name}", 'F^Tw(f) = ∏ F⟨n_i⟩ is a functor on Tw(Fin_*^act)',
                       failures, {'bound': max(tw_object(tw, act, x).n for x in tw.objects)})


def segal_comparison_tw(T: TwFunctor) -> Tuple[Dict[int, RelFunctor], Report]:
    """
    Components F⟨n⟩ -> F^Tw(f), X |-> (F(ρ^{f⁻¹(i)})X)_i, and the strict naturality
    report for F∘U => F^Tw with U the domain projection
    """
    tw, act, F = T.tw, T.active, T.F
    components = {}
    for x in tw.objects:
        f = tw_object(tw, act, x)
        legs = [F.act(rho(f.n, f.preimage(i))) for i in range(1, f.m + 1)]
        source = F.value(f.n)
        target = T.value(x)
        S, Tb = source.base, target.base
        components[x] = RelFunctor(source, target, Functor(
            S, Tb,
            [Tb.obj(tuple(leg.ob(a) for leg in legs)) for a in S.objects],
            [Tb.mor(tuple(leg(a) for leg in legs)) for a in S.morphisms],
            name=f"seg({f})",
        ))
    failures = []
    for p in tw.morphisms:
        source, target, u, v = tw_morphism(tw, act, p)
        left = compose_rel_functors(T.act(p), components[tw.dom[p]])
        right = compose_rel_functors(components[tw.cod[p]], F.act(u))
        if not same_functor(left.underlying, right.underlying):
            failures.append(f"comparison not natural at {tw.label(p)}")
    report = make_report(f"segal-comparison-tw {F.name}", 'F∘U => F^Tw with components (Fρ^{f⁻¹(i)})_i',
                         failures, {'bound': F.bound})
    return components, report


def check_tw_monoidal(T: TwFunctor) -> Report:
    """F^Tw(f∨g) = F^Tw(f) × F^Tw(g) on the nose, for objects and morphisms"""
    tw, act = T.tw, T.active
    N = max(tw_object(tw, act, x).n for x in tw.objects)
    failures = []
    wedges = {}
    for x, y in itertools.product(tw.objects, repeat=2):
        f, g = tw_object(tw, act, x), tw_object(tw, act, y)
        if f.n + g.n > N or f.m + g.m > N:
            continue
        xy = tw_find_object(tw, act, wedge(f, g))
        wedges[(x, y)] = xy
        left, right, both = T.value(x).base, T.value(y).base, T.value(xy).base
        expected = [a + b for a in left.obj_keys for b in right.obj_keys]
        if sorted(expected) != sorted(both.obj_keys):
            failures.append(f"F^Tw({f}∨{g}) is not F^Tw({f})×F^Tw({g})")
    for p, q in itertools.product(tw.morphisms, repeat=2):
        key = (tw.dom[p], tw.dom[q])
        cod_key = (tw.cod[p], tw.cod[q])
        if key not in wedges or cod_key not in wedges:
            continue
        s1, t1, u1, v1 = tw_morphism(tw, act, p)
        s2, t2, u2, v2 = tw_morphism(tw, act, q)
        pq = tw_find_morphism(tw, act, wedge(s1, s2), wedge(t1, t2), wedge(u1, u2), wedge(v1, v2))
        Fp, Fq, Fpq = T.act(p), T.act(q), T.act(pq)
        left, right = T.value(tw.dom[p]).base, T.value(tw.dom[q]).base
        both_src = T.value(wedges[key]).base
        both_tgt = T.value(wedges[cod_key]).base
        tl, tr = T.value(tw.cod[p]).base, T.value(tw.cod[q]).base
        for a, b in itertools.product(left.objects, right.objects):
            image = Fpq.ob(both_src.obj(left.obj_keys[a] + right.obj_keys[b]))
            if both_tgt.obj_keys[image] != tl.obj_keys[Fp.ob(a)] + tr.obj_keys[Fq.ob(b)]:
                failures.append(f"F^Tw({tw.label(p)}∨{tw.label(q)}) splits wrongly on objects")
                break
        for a, b in itertools.product(left.morphisms, right.morphisms):
            image = Fpq(both_src.mor(left.mor_keys[a] + right.mor_keys[b]))
            if both_tgt.mor_keys[image] != tl.mor_keys[Fp(a)] + tr.mor_keys[Fq(b)]:
                failures.append(f"F^Tw({tw.label(p)}∨{tw.label(q)}) splits wrongly on morphisms")
                break
    return make_report(f"F^Tw monoidal {T.F.name}", 'F^Tw sends wedge sums to products', failures, {'bound': N})
