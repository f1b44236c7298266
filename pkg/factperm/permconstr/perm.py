import logging
from typing import Optional, Sequence, Tuple

from ..errors import BoundError, CoherenceError, FactpermError
from ..fincat import Functor, components, opposite
from ..finstar import (
    PointedMap,
    enumerate_tw_active,
    identity,
    swap,
    tw_find_morphism,
    tw_find_object,
    tw_morphism,
    tw_object,
    wedge,
)
from ..permcat import PermRelCategory
from ..relcat import RelFunctor
from ..schemas import Report, make_report
from .grothendieck import GrothendieckTotal, grothendieck, total_components
from .segal import TruncatedSegalFunctor
from .twisted import TwFunctor, arities, f_tw

logger = logging.getLogger(__name__)


class PermObject:
    """(u: ⟨n⟩ ↠ ⟨m⟩, X_1, ..., X_m) with X_i an object id of F⟨|u⁻¹(i)|⟩"""
    __slots__ = ('u', 'xs')

    def __init__(self, u: PointedMap, xs: Sequence[int]):
        xs = tuple(xs)
        if not u.is_active():
            raise FactpermError(f"{u} is not active")
        if len(xs) != u.m:
            raise FactpermError(f"{u} needs {u.m} fiber objects, got {len(xs)}")
        self.u = u
        self.xs = xs

    def __repr__(self):
        return f"PermObject({self.u}, {self.xs})"

    def __eq__(self, other):
        return isinstance(other, PermObject) and (self.u, self.xs) == (other.u, other.xs)

    def __hash__(self):
        return hash((self.u, self.xs))

    def format(self, F: Optional[TruncatedSegalFunctor] = None) -> str:
        if F is None:
            labels = [str(x) for x in self.xs]
        else:
            labels = [F.value(k).base.obj_label(x) for k, x in zip(arities(self.u), self.xs)]
        return f"u = {self.u.format()} | {','.join(labels)}"


class PermCategory(PermRelCategory):
    """Perm_N(F): ∫ F^Tw over Tw(Fin_*^act)^op, with the wedge tensor"""
    def __init__(self, F: TruncatedSegalFunctor, N: int, ftw: TwFunctor, total: GrothendieckTotal,
                 name: str = ''):
        self.F = F
        self.N = N
        self.ftw = ftw
        self.tw = ftw.tw
        self.active = ftw.active
        self.total = total
        unit = total.base.obj((tw_find_object(self.tw, self.active, identity(0)), 0))
        super().__init__(total.rel, self._wedge_obj, self._wedge_mor, unit, self._interchange,
                         bound=N, name=name or total.base.name)

    def perm_object(self, p: int) -> PermObject:
        c, x = self.base.obj_keys[p]
        return PermObject(tw_object(self.tw, self.active, c), self.ftw.value(c).base.obj_keys[x])

    def object_of(self, u: PointedMap, xs: Sequence[int]) -> int:
        c = tw_find_object(self.tw, self.active, u)
        return self.base.obj((c, self.ftw.value(c).base.obj(tuple(xs))))

    def format_object(self, p: int) -> str:
        return self.perm_object(p).format(self.F)

    def _in_bound(self, f: PointedMap) -> bool:
        return f.n <= self.N and f.m <= self.N

    def _wedge_obj(self, p: int, q: int) -> Optional[int]:
        (c, x), (d, y) = self.base.obj_keys[p], self.base.obj_keys[q]
        f, g = tw_object(self.tw, self.active, c), tw_object(self.tw, self.active, d)
        fg = wedge(f, g)
        if not self._in_bound(fg):
            return None
        key = self.ftw.value(c).base.obj_keys[x] + self.ftw.value(d).base.obj_keys[y]
        return self.object_of(fg, key)

    def _wedge_mor(self, a: int, b: int) -> Optional[int]:
        B = self.base
        (phi, y, h), (psi, y2, h2) = B.mor_keys[a], B.mor_keys[b]
        s1, t1, u1, v1 = tw_morphism(self.tw, self.active, phi)
        s2, t2, u2, v2 = tw_morphism(self.tw, self.active, psi)
        s, t = wedge(s1, s2), wedge(t1, t2)
        if not self._in_bound(s) or not self._in_bound(t):
            return None
        both = tw_find_morphism(self.tw, self.active, s, t, wedge(u1, u2), wedge(v1, v2))
        # in the index φ runs from the tw-target to the tw-source
        target_fiber = self.ftw.value(self.tw.dom[both]).base
        source_fiber = self.ftw.value(self.tw.cod[both]).base
        y_key = (self.ftw.value(self.tw.dom[phi]).base.obj_keys[y]
                 + self.ftw.value(self.tw.dom[psi]).base.obj_keys[y2])
        h_key = (self.ftw.value(self.tw.cod[phi]).base.mor_keys[h]
                 + self.ftw.value(self.tw.cod[psi]).base.mor_keys[h2])
        return B.mor((both, target_fiber.obj(y_key), source_fiber.mor(h_key)))

    def _interchange(self, p: int, q: int) -> Optional[int]:
        """(f∨g, X+Y) -> (g∨f, Y+X) over the summand interchange, identity on fibers"""
        (c, x), (d, y) = self.base.obj_keys[p], self.base.obj_keys[q]
        f, g = tw_object(self.tw, self.active, c), tw_object(self.tw, self.active, d)
        fg, gf = wedge(f, g), wedge(g, f)
        if not self._in_bound(fg):
            return None
        X, Y = self.ftw.value(c).base.obj_keys[x], self.ftw.value(d).base.obj_keys[y]
        phi = tw_find_morphism(self.tw, self.active, gf, fg, swap(g.n, f.n), swap(f.m, g.m))
        source_fiber = self.ftw.value(self.tw.cod[phi]).base
        target_fiber = self.ftw.value(self.tw.dom[phi]).base
        y_obj = target_fiber.obj(Y + X)
        x_obj = source_fiber.obj(X + Y)
        if self.ftw.act(phi).ob(y_obj) != x_obj:
            raise CoherenceError(f"F^Tw of the interchange does not swap the fibers back at {f}, {g}")
        return self.base.mor((phi, y_obj, source_fiber.identity[x_obj]))


def perm_build(F: TruncatedSegalFunctor, N: int, check: bool = True) -> PermCategory:
    """
    Perm_N(F); the tensor is defined while both wedge sums stay within ⟨N⟩
    The transition data is audited for functoriality unless check=False.
    """
    if N > F.bound:
        raise BoundError(f"Perm_{N} needs F up to ⟨{N}⟩, {F.name!r} stops at ⟨{F.bound}⟩")
    ftw = f_tw(F, N, enumerate_tw_active(N))
    index = opposite(ftw.tw, lazy=True)
    total = grothendieck(index, ftw.value, ftw.act, name=f"Perm_{N}({F.name})", lazy=True, check=check)
    P = PermCategory(F, N, ftw, total)
    logger.info(f"built {P!r}: {len(total.base.mor_keys)} morphisms")
    return P


def unit_inclusion(P: PermCategory) -> Tuple[RelFunctor, Report]:
    """X |-> (id⟨1⟩, X), with the π₀ comparison report"""
    F1 = P.F.value(1)
    S = F1.base
    c = tw_find_object(P.tw, P.active, identity(1))
    fiber = P.ftw.value(c).base
    ident = P.tw.identity[c]
    obj_map = [P.base.obj((c, fiber.obj((x,)))) for x in S.objects]
    mor_map = [P.base.mor((ident, fiber.obj((S.cod[a],)), fiber.mor((a,)))) for a in S.morphisms]
    incl = RelFunctor(F1, P.rel, Functor(S, P.base, obj_map, mor_map, name='incl'))
    return incl, pi0_report(P, incl)


def pi0_report(P: PermCategory, incl: RelFunctor) -> Report:
    source = components(incl.source.base)
    target = total_components(P.total.index, P.ftw.value, P.ftw.act)
    where = {}
    for k, comp in enumerate(target):
        for key in comp:
            where[key] = k
    image = [where[P.base.obj_keys[incl.ob(comp[0])]] for comp in source]
    failures = []
    for k, comp in enumerate(source):
        hit = {where[P.base.obj_keys[incl.ob(x)]] for x in comp}
        if len(hit) != 1:
            failures.append(f"component {k} of F⟨1⟩ splits in Perm_{P.N}")
    if len(set(image)) != len(image):
        failures.append('two components of F⟨1⟩ merge in Perm')
    missed = sorted(set(range(len(target))) - set(image))
    if missed:
        sample = [P.format_object(P.base.obj(target[k][0])) for k in missed[:3]]
        failures.append(f"{len(missed)} components of Perm_{P.N} miss F⟨1⟩, e.g. {sample}")
    return make_report(f"pi0 {P.F.name} N={P.N}", 'π₀(F⟨1⟩) -> π₀(Perm_N(F)) is a bijection', failures,
                       {'bound': P.N, 'pi0_source': len(source), 'pi0_target': len(target)})
