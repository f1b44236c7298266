import logging
from typing import Optional, Tuple

from ..errors import BoundError
from ..fincat import Functor
from ..finstar import tw_morphism, tw_object
from ..permcat import PermRelCategory, check_strict_sm_functor, reorder_symmetry
from ..relcat import RelFunctor, check_rel_functor, compose_rel_functors, same_functor
from ..schemas import Report, make_report, merge_reports
from .perm import PermCategory, perm_build, unit_inclusion
from .segal import FactFunctor, fact_functor
from .twisted import arities

logger = logging.getLogger(__name__)


def _full(k: int) -> frozenset:
    return frozenset(range(1, k + 1))


def counit_object(P: PermCategory, p: int) -> int:
    """(u, A¹, ..., A^m) |-> ⊗_i A^i(n̲_i)"""
    F: FactFunctor = P.F
    C = F.ambient
    c, x = P.base.obj_keys[p]
    u = tw_object(P.tw, P.active, c)
    ids = P.ftw.value(c).base.obj_keys[x]
    parts = [F.cats[k].algebras[a].obj[_full(k)] for k, a in zip(arities(u), ids)]
    result = C.tensor_all(parts)
    if result is None:
        raise BoundError(f"counit at {P.format_object(p)} leaves the bound of {C.name!r}")
    return result


def counit_morphism(P: PermCategory, q: int) -> int:
    """
    For (φ, B, h): (f, A) -> (g, B) over the twisted arrow (u, v): g -> f,
    ⊗_j B^j-structure ∘ regrouping by v ∘ ⊗_i h_i(n̲_i)
    """
    F: FactFunctor = P.F
    C = F.ambient
    K = C.base
    phi, y, h = P.base.mor_keys[q]
    g, f, u, v = tw_morphism(P.tw, P.active, phi)
    h_ids = P.ftw.value(P.tw.cod[phi]).base.mor_keys[h]
    y_ids = P.ftw.value(P.tw.dom[phi]).base.obj_keys[y]
    legs = P.ftw.legs(phi)
    n_f = arities(f)
    k_g = arities(g)
    targets = [F.cats[k].algebras[b] for k, b in zip(k_g, y_ids)]

    pieces, regroup_keys, regroup_objs = [], [], {}
    for i in range(1, f.m + 1):
        comp = F.cats[n_f[i - 1]].morphism(h_ids[i - 1])
        pieces.append(comp.components[_full(n_f[i - 1])])
        j = v(i)
        # R_i = m_i⁻¹(n̲_i) inside ⟨k_j⟩
        R = frozenset(a for a in range(1, k_g[j - 1] + 1) if legs[i - 1](a) != 0)
        regroup_keys.append((j, i))
        regroup_objs[(j, i)] = (targets[j - 1].obj[R], R)
    first = C.tensor_mor_all(pieces)
    regroup = reorder_symmetry(C, {k: obj for k, (obj, _) in regroup_objs.items()}, regroup_keys)
    structures = []
    for j in range(1, g.m + 1):
        sources = [regroup_objs[key][1] for key in sorted(regroup_objs) if key[0] == j]
        s = targets[j - 1].structure_at(sources)
        if s is None:
            raise BoundError(f"structure map of B^{j} leaves the bound of {C.name!r}")
        structures.append(s)
    last = C.tensor_mor_all(structures)
    if first is None or regroup is None or last is None:
        raise BoundError(f"counit at {P.base.label(q)} leaves the bound of {C.name!r}")
    return K.comp(last, K.comp(regroup, first))


def counit_functor(C: PermRelCategory, N: int, F: Optional[FactFunctor] = None,
                   P: Optional[PermCategory] = None) -> Tuple[RelFunctor, PermCategory]:
    """Perm_N(Fact(C)) -> C"""
    F = F or fact_functor(C, N, segal=False)
    P = P or perm_build(F, N)
    obj_map = [counit_object(P, p) for p in P.base.objects]
    mor_map = [counit_morphism(P, q) for q in P.base.morphisms]
    functor = RelFunctor(P.rel, C.rel, Functor(P.base, C.base, obj_map, mor_map, name='counit'))
    logger.info(f"built counit {P.name} -> {C.name}")
    return functor, P


def evaluation_at_one(F: FactFunctor) -> RelFunctor:
    """Fact_1(C) -> C, A |-> A({1})"""
    cat = F.cats[1]
    C = F.ambient
    one = frozenset([1])
    obj_map = [A.obj[one] for A in cat.algebras]
    mor_map = [cat.morphism(p).components[one] for p in cat.base.morphisms]
    return RelFunctor(cat.rel, C.rel, Functor(cat.base, C.base, obj_map, mor_map, name='ev_1'))


def check_counit(C: PermRelCategory, N: int, F: Optional[FactFunctor] = None) -> Report:
    """Functor laws, weq preservation, strict symmetric monoidality and the triangle through Fact_1"""
    counit, P = counit_functor(C, N, F)
    reports = [check_rel_functor(counit), check_strict_sm_functor(counit, P, C)]
    incl, _ = unit_inclusion(P)
    triangle = compose_rel_functors(counit, incl)
    failures = []
    if not same_functor(triangle.underlying, evaluation_at_one(P.F).underlying):
        failures.append('counit∘incl differs from evaluation at {1}')
    if counit.ob(P.unit) != C.unit:
        failures.append('counit does not send (id⟨0⟩, *) to the unit')
    reports.append(make_report('counit-triangle', 'Fact_1(C) -> Perm∘Fact(C) -> C is evaluation at {1}', failures))
    return merge_reports(f"counit {C.name} N={N}", 'counit Perm∘Fact(C) -> C', reports, {'bound': N})
