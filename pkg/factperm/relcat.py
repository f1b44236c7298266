import logging
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import RelCatError
from .fincat import (
    FinCategory,
    Functor,
    NatTransformation,
    build_category,
    check_functor,
    check_nat_trans,
    compose_functors,
    identity_functor,
    isomorphisms,
    product,
    whisker_left,
    whisker_right,
)
from .schemas import Report, make_report, merge_reports

logger = logging.getLogger(__name__)

FWD = 'fwd'
BWD = 'bwd'


class RelCategory:
    """A finite category with a marked wide subcategory of weak equivalences"""
    def __init__(self, base: FinCategory, weq: Iterable[int], name: str = ''):
        self.base = base
        self.weq = frozenset(weq)
        self.name = name or base.name

    def __repr__(self):
        return f"RelCategory({self.name!r}, weq={len(self.weq)}/{len(self.base.mor_keys)})"

    def is_weq(self, f: int) -> bool:
        return f in self.weq


def weq_violations(base: FinCategory, weq: frozenset) -> Tuple[List[int], List[Tuple[int, int]]]:
    missing = sorted(isomorphisms(base) - weq)
    escapes = []
    for g in sorted(weq):
        for f in base.into(base.dom[g]):
            if f in weq and base.comp(g, f) not in weq:
                escapes.append((g, f))
    return missing, escapes


def close_weq(base: FinCategory, weq: Iterable[int]) -> frozenset:
    """Smallest marking containing `weq` and every isomorphism, closed under composition"""
    marked = set(weq) | isomorphisms(base)
    frontier = set(marked)
    while frontier:
        added = set()
        for g in marked:
            for f in base.into(base.dom[g]):
                if f in marked and (g in frontier or f in frontier):
                    gf = base.comp(g, f)
                    if gf not in marked:
                        added.add(gf)
        marked |= added
        frontier = added
    return frozenset(marked)


def validate_relcat(base: FinCategory, weq: Iterable[int], complete: bool = False,
                    name: str = '') -> RelCategory:
    """
    Audit a weak-equivalence marking as written
    With complete=True the marking is first closed under isomorphisms and composites.
    """
    weq = frozenset(weq)
    unknown = sorted(w for w in weq if w not in base.morphisms)
    if unknown:
        raise RelCatError(f"weq names morphisms outside {base.name!r}", tuple(unknown))
    if complete:
        closed = close_weq(base, weq)
        if closed != weq:
            logger.info(f"completed weq of {base.name!r}: {len(weq)} -> {len(closed)} morphisms")
        weq = closed
    missing, escapes = weq_violations(base, weq)
    if missing:
        raise RelCatError('weq misses isomorphisms ' + ', '.join(base.label(f) for f in missing),
                          tuple(base.mor_keys[f] for f in missing))
    if escapes:
        g, f = escapes[0]
        raise RelCatError(f"weq is not closed under composition: {base.label(g)}∘{base.label(f)}",
                          (base.mor_keys[g], base.mor_keys[f]))
    return RelCategory(base, weq, name=name)


def check_relcat(C: RelCategory) -> Report:
    missing, escapes = weq_violations(C.base, C.weq)
    failures = [f"isomorphism {C.base.label(f)} not weq" for f in missing]
    failures += [f"composite {C.base.label(g)}∘{C.base.label(f)} leaves weq" for g, f in escapes]
    return make_report(f"relcat {C.name}", 'weak equivalences contain all isomorphisms', failures)


def minimal_marking(base: FinCategory) -> RelCategory:
    return RelCategory(base, isomorphisms(base))


def maximal_marking(base: FinCategory) -> RelCategory:
    return RelCategory(base, base.morphisms)


def rel_product(*cats: RelCategory) -> RelCategory:
    """Componentwise product; a morphism is weq iff every component is"""
    base = product(*(c.base for c in cats))
    weq = [f for f in base.morphisms
           if all(c.is_weq(g) for c, g in zip(cats, base.mor_keys[f]))]
    return RelCategory(base, weq)


# --- Relative functors ---

class RelFunctor:
    def __init__(self, source: RelCategory, target: RelCategory, underlying: Functor):
        self.source = source
        self.target = target
        self.underlying = underlying

    def __repr__(self):
        return f"RelFunctor({self.name!r}: {self.source.name} -> {self.target.name})"

    @property
    def name(self) -> str:
        return self.underlying.name

    def ob(self, x: int) -> int:
        return self.underlying.obj_map[x]

    def __call__(self, f: int) -> int:
        return self.underlying.mor_map[f]


def same_functor(F: Functor, G: Functor) -> bool:
    return F.obj_map == G.obj_map and F.mor_map == G.mor_map


def identity_rel_functor(C: RelCategory) -> RelFunctor:
    return RelFunctor(C, C, identity_functor(C.base))


def compose_rel_functors(G: RelFunctor, F: RelFunctor) -> RelFunctor:
    """G∘F"""
    return RelFunctor(F.source, G.target, compose_functors(G.underlying, F.underlying))


def check_rel_functor(F: RelFunctor) -> Report:
    laws = check_functor(F.underlying)
    failures = list(laws.counterexamples)
    S = F.source.base
    for w in sorted(F.source.weq):
        if not F.target.is_weq(F(w)):
            failures.append(f"weq {S.label(w)} goes to non-weq {F.target.base.label(F(w))}")
    return make_report(f"relfunctor {F.name}", 'relative functors preserve weak equivalences', failures)


# --- Zig-zags of natural weak equivalences ---

class ZigZag:
    """
    source = F_0 - F_1 - ... - F_k = target
    A fwd step holds a transformation F_i => F_{i+1}, a bwd step F_{i+1} => F_i.
    """
    def __init__(self, source: RelFunctor, target: RelFunctor,
                 steps: Sequence[Tuple[str, NatTransformation]] = ()):
        self.source = source
        self.target = target
        self.steps = tuple(steps)

    def __repr__(self):
        return f"ZigZag({self.source.name} ~> {self.target.name}, {len(self.steps)} steps)"

    def __len__(self):
        return len(self.steps)

    def concat(self, other: 'ZigZag') -> 'ZigZag':
        if not same_functor(self.target.underlying, other.source.underlying):
            raise RelCatError(f"cannot concatenate {self!r} with {other!r}: endpoints differ")
        return ZigZag(self.source, other.target, self.steps + other.steps)

    def reverse(self) -> 'ZigZag':
        flipped = [(BWD if d == FWD else FWD, alpha) for d, alpha in reversed(self.steps)]
        return ZigZag(self.target, self.source, flipped)

    def whisker_left(self, K: RelFunctor) -> 'ZigZag':
        """Precompose every functor with K"""
        return ZigZag(compose_rel_functors(self.source, K), compose_rel_functors(self.target, K),
                      [(d, whisker_left(alpha, K.underlying)) for d, alpha in self.steps])

    def whisker_right(self, H: RelFunctor) -> 'ZigZag':
        """Postcompose every functor with H"""
        return ZigZag(compose_rel_functors(H, self.source), compose_rel_functors(H, self.target),
                      [(d, whisker_right(H.underlying, alpha)) for d, alpha in self.steps])


def zigzag_violations(zz: ZigZag) -> List[str]:
    failures = []
    target = zz.source.target
    current = zz.source.underlying
    for i, (direction, alpha) in enumerate(zz.steps):
        if direction == FWD:
            start, end = alpha.source_functor, alpha.target_functor
        elif direction == BWD:
            start, end = alpha.target_functor, alpha.source_functor
        else:
            failures.append(f"step {i} has unknown direction {direction!r}")
            continue
        if not same_functor(start, current):
            failures.append(f"step {i} ({alpha.name}) does not start where step {i - 1} ended")
        laws = check_nat_trans(alpha)
        failures.extend(f"step {i}: {c}" for c in laws.counterexamples)
        for x, a in enumerate(alpha.components):
            if not target.is_weq(a):
                failures.append(f"step {i} ({alpha.name}) component at {alpha.source_functor.source.obj_label(x)} "
                                f"is {target.base.label(a)}, not weq")
        current = end
    if not same_functor(current, zz.target.underlying):
        failures.append(f"zig-zag ends at {current.name}, not at {zz.target.name}")
    return failures


def check_zigzag(zz: ZigZag) -> Report:
    return make_report(f"zigzag {zz.source.name} ~> {zz.target.name}",
                       'zig-zag of natural weak equivalences', zigzag_violations(zz),
                       {'steps': len(zz)})


# --- Homotopy equivalences ---

class HomotopyEquivWitness:
    """f: C -> D, g: D -> C, zz_gf: g∘f ~> id_C, zz_fg: f∘g ~> id_D"""
    def __init__(self, f: RelFunctor, g: RelFunctor, zz_gf: ZigZag, zz_fg: ZigZag, name: str = ''):
        self.f = f
        self.g = g
        self.zz_gf = zz_gf
        self.zz_fg = zz_fg
        self.name = name or f.name

    def __repr__(self):
        return f"HomotopyEquivWitness({self.name!r}: {self.f.source.name} ≃ {self.f.target.name})"


def trivial_witness(C: RelCategory) -> HomotopyEquivWitness:
    ident = identity_rel_functor(C)
    return HomotopyEquivWitness(ident, ident, ZigZag(ident, ident), ZigZag(ident, ident),
                                name=f"id_{C.name}")


def verify_homotopy_equivalence(w: HomotopyEquivWitness) -> Report:
    reports = [check_rel_functor(w.f), check_rel_functor(w.g)]
    failures = []
    gf = compose_functors(w.g.underlying, w.f.underlying)
    fg = compose_functors(w.f.underlying, w.g.underlying)
    if not same_functor(w.zz_gf.source.underlying, gf):
        failures.append('zz_gf does not start at g∘f')
    if not same_functor(w.zz_gf.target.underlying, identity_functor(w.f.source.base)):
        failures.append('zz_gf does not end at the identity of the source')
    if not same_functor(w.zz_fg.source.underlying, fg):
        failures.append('zz_fg does not start at f∘g')
    if not same_functor(w.zz_fg.target.underlying, identity_functor(w.f.target.base)):
        failures.append('zz_fg does not end at the identity of the target')
    failures += [f"zz_gf: {c}" for c in zigzag_violations(w.zz_gf)]
    failures += [f"zz_fg: {c}" for c in zigzag_violations(w.zz_fg)]
    reports.append(make_report(f"zigzags {w.name}", 'connected by a zig-zag of natural weak equivalences',
                               failures))
    report = merge_reports(f"homotopy-equivalence {w.name}", 'homotopy equivalence of relative categories',
                           reports, {'steps_gf': len(w.zz_gf), 'steps_fg': len(w.zz_fg)})
    logger.info(f"verified {w!r}: {'pass' if report.passed else 'FAIL'}")
    return report


def invert_witness(w: HomotopyEquivWitness) -> HomotopyEquivWitness:
    return HomotopyEquivWitness(w.g, w.f, w.zz_fg, w.zz_gf, name=f"{w.name}⁻¹")


def paste_witnesses(first: HomotopyEquivWitness, second: HomotopyEquivWitness) -> HomotopyEquivWitness:
    """Witness for second.f ∘ first.f from witnesses for C -> D and D -> E"""
    f1, g1, f2, g2 = first.f, first.g, second.f, second.g
    f = compose_rel_functors(f2, f1)
    g = compose_rel_functors(g1, g2)
    # g1 g2 f2 f1 ~> g1 f1 ~> id_C
    inner_gf = second.zz_gf.whisker_left(f1).whisker_right(g1)
    zz_gf = ZigZag(compose_rel_functors(g, f), inner_gf.target, inner_gf.steps).concat(first.zz_gf)
    # f2 f1 g1 g2 ~> f2 g2 ~> id_E
    inner_fg = first.zz_fg.whisker_left(g2).whisker_right(f2)
    zz_fg = ZigZag(compose_rel_functors(f, g), inner_fg.target, inner_fg.steps).concat(second.zz_fg)
    return HomotopyEquivWitness(f, g, zz_gf, zz_fg, name=f"{second.name}∘{first.name}")


# --- products of witnesses ---

def _product_functor(functors: Sequence[Functor], S: FinCategory, T: FinCategory, name: str) -> Functor:
    obj_map = [T.obj(tuple(F.obj_map[x] for F, x in zip(functors, key))) for key in S.obj_keys]
    mor_map = [T.mor(tuple(F.mor_map[f] for F, f in zip(functors, key))) for key in S.mor_keys]
    return Functor(S, T, obj_map, mor_map, name=name)


def product_rel_functor(functors: Sequence[RelFunctor], source: Optional[RelCategory] = None,
                        target: Optional[RelCategory] = None) -> RelFunctor:
    """F_1 × ... × F_k on the componentwise products"""
    source = source or rel_product(*(F.source for F in functors))
    target = target or rel_product(*(F.target for F in functors))
    name = '×'.join(F.name for F in functors) or 'id_terminal'
    return RelFunctor(source, target,
                      _product_functor([F.underlying for F in functors], source.base, target.base, name))


def product_zigzag(zigzags: Sequence[ZigZag], source: RelFunctor, target: RelFunctor) -> ZigZag:
    """Componentwise product of zig-zags with the same step directions"""
    shapes = {tuple(d for d, _ in zz.steps) for zz in zigzags}
    if len(shapes) > 1:
        raise RelCatError('zig-zags in a product must share their step directions')
    S, T = source.source.base, source.target.base
    steps = []
    for i, (direction, _) in enumerate(zigzags[0].steps if zigzags else ()):
        alphas = [zz.steps[i][1] for zz in zigzags]
        name = '×'.join(a.name for a in alphas)
        start = _product_functor([a.source_functor for a in alphas], S, T, name)
        end = _product_functor([a.target_functor for a in alphas], S, T, name)
        components = [T.mor(tuple(a.components[x] for a, x in zip(alphas, key))) for key in S.obj_keys]
        steps.append((direction, NatTransformation(start, end, components, name=name)))
    return ZigZag(source, target, steps)


def product_witness(witnesses: Sequence[HomotopyEquivWitness], source: Optional[RelCategory] = None,
                    target: Optional[RelCategory] = None) -> HomotopyEquivWitness:
    source = source or rel_product(*(w.f.source for w in witnesses))
    target = target or rel_product(*(w.f.target for w in witnesses))
    f = product_rel_functor([w.f for w in witnesses], source, target)
    g = product_rel_functor([w.g for w in witnesses], target, source)
    zz_gf = product_zigzag([w.zz_gf for w in witnesses], compose_rel_functors(g, f), identity_rel_functor(source))
    zz_fg = product_zigzag([w.zz_fg for w in witnesses], compose_rel_functors(f, g), identity_rel_functor(target))
    return HomotopyEquivWitness(f, g, zz_gf, zz_fg, name='×'.join(w.name for w in witnesses) or 'terminal')


# --- Path construction ---

class PathConstruction:
    """
    Path(f) = X ×_{Fun({0},Y)} Fun^weq([1], Y) for a relative functor f: X -> Y
    Objects are keyed (x, u) with u: f(x) -> y a weq; morphisms (a, b, u, u') with
    b∘u = u'∘f(a).
    """
    def __init__(self, f: RelFunctor, rel: RelCategory, to_source: RelFunctor, to_target: RelFunctor):
        self.f = f
        self.rel = rel
        self.to_source = to_source
        self.to_target = to_target

    def __repr__(self):
        return f"PathConstruction({self.f.name!r}, objects={len(self.rel.base.obj_keys)})"

    def object_of(self, x: int, u: int) -> int:
        return self.rel.base.obj((x, u))


def path_construction(f: RelFunctor, name: str = '') -> PathConstruction:
    X, Y = f.source.base, f.target.base
    objs = [(x, u) for x in X.objects for u in Y.out_of(f.ob(x)) if f.target.is_weq(u)]
    by_source = {}
    for x, u in objs:
        by_source.setdefault(x, []).append(u)
    specs = []
    for a in X.morphisms:
        fa = f(a)
        for u in by_source.get(X.dom[a], ()):
            for u2 in by_source.get(X.cod[a], ()):
                target_leg = Y.comp(u2, fa)
                for b in Y.hom(Y.cod[u], Y.cod[u2]):
                    if Y.comp(b, u) == target_leg:
                        specs.append(((a, b, u, u2), (X.dom[a], u), (X.cod[a], u2)))
    name = name or f"Path({f.name})"
    base = build_category(
        objs, specs,
        lambda xu: (X.identity[xu[0]], Y.identity[Y.cod[xu[1]]], xu[1], xu[1]),
        lambda g, h: (X.comp(g[0], h[0]), Y.comp(g[1], h[1]), h[2], g[3]),
        name=name,
    )
    weq = [p for p, key in enumerate(base.mor_keys)
           if f.source.is_weq(key[0]) and f.target.is_weq(key[1])]
    rel = RelCategory(base, weq)
    to_source = RelFunctor(rel, f.source, Functor(
        base, X, [xu[0] for xu in base.obj_keys], [k[0] for k in base.mor_keys], name='r'))
    to_target = RelFunctor(rel, f.target, Functor(
        base, Y, [Y.cod[xu[1]] for xu in base.obj_keys], [k[1] for k in base.mor_keys], name='q'))
    logger.info(f"built {name}: {len(objs)} objects, {len(specs)} morphisms")
    return PathConstruction(f, rel, to_source, to_target)


def path_section(path: PathConstruction) -> RelFunctor:
    """ℓ: x |-> (x, id_{f(x)})"""
    f = path.f
    X, Y, P = f.source.base, f.target.base, path.rel.base
    obj_map = [P.obj((x, Y.identity[f.ob(x)])) for x in X.objects]
    mor_map = []
    for a in X.morphisms:
        fa = f(a)
        mor_map.append(P.mor((a, fa, Y.identity[Y.dom[fa]], Y.identity[Y.cod[fa]])))
    return RelFunctor(f.source, path.rel, Functor(X, P, obj_map, mor_map, name='ℓ'))


def path_adjunction_witness(f: RelFunctor, path: Optional[PathConstruction] = None) -> HomotopyEquivWitness:
    """
    ℓ ⊣ r with r∘ℓ = id and counit ε_(x,u) = (id_x, u): (x, id) -> (x, u)
    Packaged as the witness (r, ℓ, [ε], []) for r: Path(f) -> X.
    """
    path = path or path_construction(f)
    X, Y, P = f.source.base, f.target.base, path.rel.base
    r = path.to_source
    ell = path_section(path)
    rl = compose_rel_functors(r, ell)
    if not same_functor(rl.underlying, identity_functor(X)):
        raise RelCatError(f"r∘ℓ is not the identity on {X.name!r}")
    lr = compose_rel_functors(ell, r)
    counit = []
    for x, u in P.obj_keys:
        counit.append(P.mor((X.identity[x], u, Y.identity[f.ob(x)], u)))
    epsilon = NatTransformation(lr.underlying, identity_functor(P), counit, name='ε')
    # triangle identities; the unit is the identity so they reduce to these
    for x in X.objects:
        if counit[ell.ob(x)] != P.identity[ell.ob(x)]:
            raise RelCatError(f"εℓ is not the identity at {X.obj_label(x)}", (x,))
    for p in P.objects:
        if r(counit[p]) != X.identity[r.ob(p)]:
            raise RelCatError(f"rε is not the identity at {P.obj_label(p)}", (P.obj_keys[p],))
    for p in P.objects:
        if not path.rel.is_weq(counit[p]):
            raise RelCatError(f"counit component at {P.obj_label(p)} is not weq", (P.obj_keys[p],))
    ident_x = identity_rel_functor(f.source)
    ident_p = identity_rel_functor(path.rel)
    return HomotopyEquivWitness(
        r, ell,
        ZigZag(lr, ident_p, [(FWD, epsilon)]),
        ZigZag(rl, ident_x),
        name=f"path-adjunction {f.name}",
    )
