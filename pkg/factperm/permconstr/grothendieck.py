import logging
from typing import Callable, Dict, Iterable, List, Optional

import networkx as nx

from ..errors import CategoryError
from ..fincat import FinCategory, Functor, build_category, isomorphisms
from ..relcat import RelCategory, RelFunctor, compose_rel_functors, identity_rel_functor, same_functor, weq_violations
from ..schemas import Report, make_report

logger = logging.getLogger(__name__)


class GrothendieckTotal:
    """
    ∫ of a contravariant RelCat-valued functor on `index`
    Objects are keyed (c, x) with x in fiber(c); a morphism (c, x) -> (d, y) is keyed
    (φ, y, h) with φ: c -> d and h: x -> transition(φ)(y) in fiber(c).
    """
    def __init__(self, index: FinCategory, fibers: Callable[[int], RelCategory],
                 transition: Callable[[int], RelFunctor], rel: RelCategory,
                 cartesian: frozenset, projection: Functor, index_weq: frozenset):
        self.index = index
        self.fibers = fibers
        self.transition = transition
        self.rel = rel
        self.cartesian = cartesian
        self.projection = projection
        self.index_weq = index_weq

    def __repr__(self):
        return (f"GrothendieckTotal({self.rel.base.name!r}, objects={len(self.rel.base.obj_keys)}, "
                f"morphisms={len(self.rel.base.mor_keys)})")

    @property
    def base(self) -> FinCategory:
        return self.rel.base


def transition_violations(index: FinCategory, fibers: Callable[[int], RelCategory],
                          transition: Callable[[int], RelFunctor]) -> List[str]:
    """T(id) = id and T(ψ∘φ) = T(φ)∘T(ψ)"""
    failures = []
    for c in index.objects:
        T = transition(index.identity[c])
        if not same_functor(T.underlying, identity_rel_functor(fibers(c)).underlying):
            failures.append(f"transition of id at {index.obj_label(c)} is not the identity")
    for psi, phi in index.composable_pairs():
        whole = transition(index.comp(psi, phi))
        if not same_functor(whole.underlying, compose_rel_functors(transition(phi), transition(psi)).underlying):
            failures.append(f"transition fails composition at ({index.label(psi)}, {index.label(phi)})")
    return failures


def grothendieck(index: FinCategory, fibers: Callable[[int], RelCategory],
                 transition: Callable[[int], RelFunctor], index_weq: Optional[Iterable[int]] = None,
                 name: str = '', lazy: bool = False, check: bool = True) -> GrothendieckTotal:
    """
    Weak equivalences are the composites of a fiberwise weq followed by a cartesian
    morphism over a weq of the index (every index morphism unless `index_weq` is given).
    """
    if check:
        failures = transition_violations(index, fibers, transition)
        if failures:
            raise CategoryError(f"transition data is not functorial: {failures[0]}", tuple(failures))
    index_weq = frozenset(index.morphisms if index_weq is None else index_weq)
    objs = [(c, x) for c in index.objects for x in fibers(c).base.objects]
    specs = []
    for phi in index.morphisms:
        c, d = index.dom[phi], index.cod[phi]
        T = transition(phi)
        Fc = fibers(c).base
        for y in fibers(d).base.objects:
            for h in Fc.into(T.ob(y)):
                specs.append(((phi, y, h), (c, Fc.dom[h]), (d, y)))

    def compose(second, first):
        psi, z, k = second
        phi, _, h = first
        Fc = fibers(index.dom[phi]).base
        return index.comp(psi, phi), z, Fc.comp(transition(phi)(k), h)

    name = name or f"∫{index.name}"
    base = build_category(
        objs, specs,
        lambda cx: (index.identity[cx[0]], cx[1], fibers(cx[0]).base.identity[cx[1]]),
        compose, name=name, lazy=lazy,
    )
    fiber_isos: Dict[int, frozenset] = {}
    weq, cartesian = [], []
    for p, (phi, _, h) in enumerate(base.mor_keys):
        c = index.dom[phi]
        fiber = fibers(c)
        if c not in fiber_isos:
            fiber_isos[c] = isomorphisms(fiber.base)
        if h in fiber_isos[c]:
            cartesian.append(p)
        if phi in index_weq and fiber.is_weq(h):
            weq.append(p)
    rel = RelCategory(base, weq, name=name)
    projection = Functor(base, index, [c for c, _ in objs], [k[0] for k in base.mor_keys], name='p')
    total = GrothendieckTotal(index, fibers, transition, rel, frozenset(cartesian), projection, index_weq)
    logger.info(f"built {total!r}: {len(cartesian)} cartesian, {len(weq)} weq")
    return total


def is_cartesian(G: GrothendieckTotal, p: int) -> bool:
    """The universal property: every g into cod(p) over φ∘χ lifts uniquely through p over χ"""
    B, I = G.base, G.index
    phi = B.mor_keys[p][0]
    source = B.dom[p]
    for g in B.into(B.cod[p]):
        gamma = B.mor_keys[g][0]
        for chi in I.hom(I.dom[gamma], I.dom[phi]):
            if I.comp(phi, chi) != gamma:
                continue
            lifts = [l for l in B.hom(B.dom[g], source) if B.mor_keys[l][0] == chi and B.comp(p, l) == g]
            if len(lifts) != 1:
                return False
    return True


def check_grothendieck(G: GrothendieckTotal, universal: bool = True) -> Report:
    B, I = G.base, G.index
    failures = []
    if universal:
        for p in B.morphisms:
            if is_cartesian(G, p) != (p in G.cartesian):
                failures.append(f"{B.label(p)} is marked {'cartesian' if p in G.cartesian else 'not cartesian'} "
                                f"but the universal property says otherwise")
    for p in sorted(G.rel.weq):
        phi, y, h = B.mor_keys[p]
        c = I.dom[phi]
        Fc = G.fibers(c).base
        middle = G.transition(phi).ob(y)
        try:
            vertical = B.mor((I.identity[c], middle, h))
            horizontal = B.mor((phi, y, Fc.identity[middle]))
        except KeyError:
            failures.append(f"weq {B.label(p)} has no fiberwise/cartesian factorization")
            continue
        if B.comp(horizontal, vertical) != p:
            failures.append(f"weq {B.label(p)} is not its fiberwise part followed by its cartesian part")
        if horizontal not in G.cartesian:
            failures.append(f"cartesian part of {B.label(p)} is not cartesian")
    missing, escapes = weq_violations(B, G.rel.weq)
    failures += [f"isomorphism {B.label(f)} is not weq" for f in missing]
    failures += [f"weq composite {B.label(g)}∘{B.label(f)} is not weq" for g, f in escapes]
    return make_report(f"grothendieck {B.name}", 'relative Grothendieck construction', failures,
                       {'objects': len(B.obj_keys), 'morphisms': len(B.mor_keys)})


def total_components(index: FinCategory, fibers: Callable[[int], RelCategory],
                     transition: Callable[[int], RelFunctor]) -> List[List[tuple]]:
    """
    π₀ of ∫ without building it: every morphism is a fiber morphism followed by
    a cartesian one, so fiber edges and (c, T(φ)(y)) - (d, y) edges suffice
    """
    graph = nx.Graph()
    for c in index.objects:
        Fc = fibers(c).base
        graph.add_nodes_from((c, x) for x in Fc.objects)
        graph.add_edges_from(((c, Fc.dom[h]), (c, Fc.cod[h])) for h in Fc.morphisms)
    for phi in index.morphisms:
        c, d = index.dom[phi], index.cod[phi]
        T = transition(phi)
        graph.add_edges_from(((c, T.ob(y)), (d, y)) for y in fibers(d).base.objects)
    return sorted(sorted(comp) for comp in nx.connected_components(graph))
