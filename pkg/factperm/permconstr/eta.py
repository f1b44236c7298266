import logging
from typing import Callable, Dict, List, Optional, Tuple

from ..errors import CoherenceError, RelCatError
from ..factop import FactAlgebra, FactMorphism, FactOperad, fact_morphism_violations, preimage
from ..fincat import Functor, NatTransformation, check_nat_trans, identity_transformation
from ..finstar import PointedMap, fold, identity, rho, tw_find_morphism, tw_find_object, wedge_all
from ..relcat import (
    PathConstruction,
    RelFunctor,
    check_rel_functor,
    compose_rel_functors,
    identity_rel_functor,
    path_adjunction_witness,
    path_construction,
    path_section,
    same_functor,
    verify_homotopy_equivalence,
)
from ..schemas import Report, make_report, merge_reports
from .perm import PermCategory, perm_build
from .segal import FactFunctor, TruncatedSegalFunctor, check_functoriality, fact_functor

logger = logging.getLogger(__name__)


class OplaxTransformation:
    """
    Components α_n: F⟨n⟩ -> G⟨n⟩ and, for every u: ⟨n⟩ -> ⟨m⟩, a filler
    α_m∘F(u) => G(u)∘α_n; fillers are built on demand and cached.
    """
    def __init__(self, source: TruncatedSegalFunctor, target: TruncatedSegalFunctor,
                 components: Dict[int, RelFunctor], filler: Callable[[PointedMap], NatTransformation],
                 name: str = ''):
        self.source = source
        self.target = target
        self.components = dict(components)
        self._filler = filler
        self._fillers: Dict[PointedMap, NatTransformation] = {}
        self.bound = min(max(self.components), source.bound, target.bound)
        self.name = name or f"{source.name} => {target.name}"

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r}, bound={self.bound})"

    def filler(self, u: PointedMap) -> NatTransformation:
        if u not in self._fillers:
            self._fillers[u] = self._filler(u)
        return self._fillers[u]

    def maps(self) -> List[PointedMap]:
        return [f for f in self.source.maps() if f.n <= self.bound and f.m <= self.bound]


def identity_oplax(F: TruncatedSegalFunctor) -> OplaxTransformation:
    components = {n: identity_rel_functor(F.value(n)) for n in range(F.bound + 1)}
    return OplaxTransformation(F, F, components, lambda u: identity_transformation(F.act(u).underlying),
                               name=f"id_{F.name}")


def check_oplax(alpha: OplaxTransformation) -> Report:
    """Fillers are natural with weq components, trivial at identities, and paste along composites"""
    F, G = alpha.source, alpha.target
    failures = []
    for n in range(alpha.bound + 1):
        failures += [f"α_{n}: {c}" for c in check_rel_functor(alpha.components[n]).counterexamples]
    maps = alpha.maps()
    for u in maps:
        theta = alpha.filler(u)
        start = compose_rel_functors(alpha.components[u.m], F.act(u))
        end = compose_rel_functors(G.act(u), alpha.components[u.n])
        if not (same_functor(theta.source_functor, start.underlying)
                and same_functor(theta.target_functor, end.underlying)):
            failures.append(f"filler at {u} does not run α_{u.m}∘F(u) => G(u)∘α_{u.n}")
            continue
        failures += [f"filler at {u}: {c}" for c in check_nat_trans(theta).counterexamples]
        target = G.value(u.m)
        for c in theta.components:
            if not target.is_weq(c):
                failures.append(f"filler at {u} has non-weq component {target.base.label(c)}")
        if u == identity(u.n):
            Gm = target.base
            if any(c != Gm.identity[Gm.dom[c]] for c in theta.components):
                failures.append(f"filler at id⟨{u.n}⟩ is not the identity")
    if failures:
        return make_report(f"oplax {alpha.name}", 'oplax transformation data', failures, {'bound': alpha.bound})
    by_source: Dict[int, List[PointedMap]] = {}
    for u2 in maps:
        by_source.setdefault(u2.n, []).append(u2)
    for u in maps:
        first = alpha.filler(u)
        Fu = F.act(u)
        for u2 in by_source.get(u.m, ()):
            Gk = G.value(u2.m).base
            second = alpha.filler(u2)
            whole = alpha.filler(u2.compose(u))
            Gu2 = G.act(u2)
            for X, c in enumerate(whole.components):
                if c != Gk.comp(Gu2(first.components[X]), second.components[Fu.ob(X)]):
                    failures.append(f"fillers at {u} and {u2} do not paste at {F.value(u.n).base.obj_label(X)}")
                    break
    return make_report(f"oplax {alpha.name}", 'oplax transformation data', failures, {'bound': alpha.bound})


# --- η: F => Fact∘Perm(F) ---

class EtaTransformation(OplaxTransformation):
    """η_F with the Perm_N(F) it lands in; the target is Fact(Perm_N(F)) on the pullback closure of the image"""
    def __init__(self, F: TruncatedSegalFunctor, P: PermCategory, G: FactFunctor,
                 algebras: Dict[int, List[FactAlgebra]], components: Dict[int, RelFunctor]):
        self.P = P
        self.algebras = algebras
        super().__init__(F, G, components, self._build_filler, name=f"η_{F.name}")

    def _build_filler(self, u: PointedMap) -> NatTransformation:
        F, G, P = self.source, self.target, self.P
        cat = G.cats[u.m]
        Fu, Gu = F.act(u), G.act(u)
        eta_n, eta_m = self.components[u.n], self.components[u.m]
        comps = []
        for X in F.value(u.n).base.objects:
            f = _filler_component(F, P, u, X, cat.algebras[eta_m.ob(Fu.ob(X))], cat.algebras[Gu.ob(eta_n.ob(X))])
            failures = fact_morphism_violations(f)
            if failures:
                raise CoherenceError(f"η filler at {u} is not an algebra map: {failures[0]}", tuple(failures))
            comps.append(cat.morphism_of(f))
        return NatTransformation(compose_rel_functors(eta_m, Fu).underlying,
                                 compose_rel_functors(Gu, eta_n).underlying, comps, name=f"η_{u}")


def eta_algebra(F: TruncatedSegalFunctor, P: PermCategory, n: int, X: int,
                operad: Optional[FactOperad] = None) -> FactAlgebra:
    """η(X): S |-> (⟨|S|⟩ ↠ ⟨1⟩, Fρ^S(X))"""
    operad = operad or FactOperad(n)
    obj = {S: P.object_of(fold(len(S)), (F.act(rho(n, S)).ob(X),)) for S in operad.colors}
    struct = {}
    for arrow in operad.multiarrows:
        m = _structure_map(F, P, n, X, arrow, obj)
        if m is not None:
            struct[arrow] = m
    return FactAlgebra(P, n, obj, struct, name=f"η({F.value(n).base.obj_label(X)})")


def _structure_map(F: TruncatedSegalFunctor, P: PermCategory, n: int, X: int, arrow, obj) -> Optional[int]:
    """
    Over the twisted arrow fold_t -> ∨_a fold_{|S_a|} whose u matches the sorted order
    of T with the concatenated S_a and whose v is a fold; the fiber part is an identity
    """
    sources, T = arrow
    source = P.tensor_all([obj[S] for S in sources])
    if source is None:
        return None
    concat = [s for S in sources for s in sorted(S)]
    u = PointedMap(len(T), len(T), [concat.index(s) + 1 for s in sorted(T)])
    blocks = wedge_all([fold(len(S)) for S in sources])
    phi = tw_find_morphism(P.tw, P.active, fold(len(T)), blocks, u, fold(len(sources)))
    c, x = P.base.obj_keys[source]
    if c != P.tw.cod[phi]:
        raise CoherenceError(f"η structure map at {arrow} sits over the wrong twisted arrow")
    y = P.ftw.value(P.tw.dom[phi]).base.obj((F.act(rho(n, T)).ob(X),))
    if P.ftw.act(phi).ob(y) != x:
        raise CoherenceError(f"F^Tw does not carry Fρ^T(X) to (Fρ^S_a(X))_a along {P.tw.label(phi)}")
    return P.base.mor((phi, y, P.ftw.value(c).base.identity[x]))


def eta_morphism(F: TruncatedSegalFunctor, P: PermCategory, n: int, a: int,
                 source: FactAlgebra, target: FactAlgebra) -> FactMorphism:
    """η(a)(S) = (id, Fρ^S(a)) in the fiber over ⟨|S|⟩ ↠ ⟨1⟩"""
    X2 = F.value(n).base.cod[a]
    components = {}
    for S in source.obj:
        c = tw_find_object(P.tw, P.active, fold(len(S)))
        fiber = P.ftw.value(c).base
        leg = F.act(rho(n, S))
        components[S] = P.base.mor((P.tw.identity[c], fiber.obj((leg.ob(X2),)), fiber.mor((leg(a),))))
    return FactMorphism(source, target, components)


def _filler_component(F: TruncatedSegalFunctor, P: PermCategory, u: PointedMap, X: int,
                      source: FactAlgebra, target: FactAlgebra) -> FactMorphism:
    """η_m(F(u)X) -> u_*η_n(X) over the active maps ⟨|u⁻¹(S)|⟩ ↠ ⟨|S|⟩"""
    components = {}
    for S in source.obj:
        pre = sorted(preimage(u, S))
        ranked = sorted(S)
        along = PointedMap(len(pre), len(S), [ranked.index(u(i)) + 1 for i in pre])
        phi = tw_find_morphism(P.tw, P.active, fold(len(pre)), fold(len(S)), along, identity(1))
        y = P.ftw.value(P.tw.dom[phi]).base.obj((F.act(rho(u.n, pre)).ob(X),))
        c, x = P.base.obj_keys[source.obj[S]]
        if P.ftw.act(phi).ob(y) != x:
            raise CoherenceError(f"η filler at {u} does not close up over {sorted(S)}")
        components[S] = P.base.mor((phi, y, P.ftw.value(c).base.identity[x]))
    return FactMorphism(source, target, components)


def eta(F: TruncatedSegalFunctor, N: int, check: bool = True) -> Tuple[EtaTransformation, Report]:
    """η_{F,⟨n⟩}: F⟨n⟩ -> Fact_n(Perm_N(F)) for n <= N, with the oplax coherence report"""
    P = perm_build(F, N, check=check)
    algebras = {}
    for n in range(N + 1):
        operad = FactOperad(n)
        algebras[n] = [eta_algebra(F, P, n, X, operad) for X in F.value(n).base.objects]
    G = fact_functor(P, N, seeds=algebras, segal=False)
    components = {}
    for n in range(N + 1):
        S, cat = F.value(n), G.cats[n]
        obj_map = [cat.index_of(A) for A in algebras[n]]
        mor_map = [cat.morphism_of(eta_morphism(F, P, n, a, algebras[n][S.base.dom[a]], algebras[n][S.base.cod[a]]))
                   for a in S.base.morphisms]
        components[n] = RelFunctor(S, cat.rel, Functor(S.base, cat.base, obj_map, mor_map, name=f"η_{n}"))
    alpha = EtaTransformation(F, P, G, algebras, components)
    report = check_oplax(alpha)
    logger.info(f"built {alpha!r}: {'pass' if report.passed else 'FAIL'}")
    return alpha, report


# --- Path(α) ---

class PathOfOplax(TruncatedSegalFunctor):
    """Path(α)⟨n⟩ = Path(α_n), with the projections r to F and q to G"""
    def __init__(self, alpha: OplaxTransformation, paths: Dict[int, PathConstruction]):
        self.alpha = alpha
        self.paths = paths
        super().__init__(alpha.bound, {n: p.rel for n, p in paths.items()}, self._transport,
                         name=f"Path({alpha.name})")

    def to_source(self, n: int) -> RelFunctor:
        return self.paths[n].to_source

    def to_target(self, n: int) -> RelFunctor:
        return self.paths[n].to_target

    def _transport(self, f: PointedMap) -> RelFunctor:
        """(X, w) |-> (F(f)X, G(f)(w)∘θ_f(X))"""
        alpha = self.alpha
        Ff, Gf = alpha.source.act(f), alpha.target.act(f)
        theta = alpha.filler(f)
        Gm = alpha.target.value(f.m).base
        Fn = alpha.source.value(f.n).base
        S, T = self.paths[f.n].rel.base, self.paths[f.m].rel.base

        def leg(X, w):
            return Gm.comp(Gf(w), theta.components[X])

        try:
            obj_map = [T.obj((Ff.ob(X), leg(X, w))) for X, w in S.obj_keys]
            mor_map = [T.mor((Ff(a), Gf(b), leg(Fn.dom[a], w), leg(Fn.cod[a], w2)))
                       for a, b, w, w2 in S.mor_keys]
        except KeyError as exc:
            raise CoherenceError(f"Path({alpha.name}) cannot transport along {f}: {exc}")
        return RelFunctor(self.paths[f.n].rel, self.paths[f.m].rel,
                          Functor(S, T, obj_map, mor_map, name=f"Path({f})"))


def path_of_oplax(alpha: OplaxTransformation, check: bool = True) -> PathOfOplax:
    if check:
        report = check_oplax(alpha)
        if not report.passed:
            raise CoherenceError(f"invalid oplax data {alpha.name!r}: {report.counterexamples[0]}",
                                 tuple(report.counterexamples))
    paths = {n: path_construction(alpha.components[n], name=f"Path(α_{n})") for n in range(alpha.bound + 1)}
    path = PathOfOplax(alpha, paths)
    logger.info(f"built {path!r}")
    return path


def check_path_projections(path: PathOfOplax) -> Report:
    """r: Path(α) => F and q: Path(α) => G are strictly natural"""
    alpha = path.alpha
    failures = []
    for f in alpha.maps():
        moved = path.act(f)
        r_left = compose_rel_functors(path.to_source(f.m), moved)
        r_right = compose_rel_functors(alpha.source.act(f), path.to_source(f.n))
        if not same_functor(r_left.underlying, r_right.underlying):
            failures.append(f"r is not natural at {f}")
        q_left = compose_rel_functors(path.to_target(f.m), moved)
        q_right = compose_rel_functors(alpha.target.act(f), path.to_target(f.n))
        if not same_functor(q_left.underlying, q_right.underlying):
            failures.append(f"q is not natural at {f}")
    return make_report(f"projections {path.name}", 'Path(α) => F and Path(α) => G are strict', failures,
                       {'bound': path.bound})


def alpha_beta_check(F: TruncatedSegalFunctor, N: int) -> Report:
    """
    Path(η_F) => F carries the path adjunction witness at every ⟨n⟩, β∘σ = η at ⟨1⟩,
    and β: Path(η_F) => Fact∘Perm(F) is strict
    """
    alpha, oplax = eta(F, N)
    reports = [oplax]
    if not oplax.passed:
        return merge_reports(f"alpha-beta {F.name}", 'Path(η_F) => F and Path(η_F) => Fact∘Perm(F)', reports,
                             {'bound': N})
    path = path_of_oplax(alpha, check=False)
    for n in range(path.bound + 1):
        try:
            w = path_adjunction_witness(alpha.components[n], path.paths[n])
        except RelCatError as exc:
            reports.append(make_report(f"alpha_{n}", 'path adjunction', [exc.detail]))
            continue
        reports.append(verify_homotopy_equivalence(w))
    failures = []
    if path.bound >= 1:
        sigma = path_section(path.paths[1])
        if not same_functor(compose_rel_functors(path.to_target(1), sigma).underlying,
                            alpha.components[1].underlying):
            failures.append('β_1∘σ_1 differs from η_1')
    reports.append(make_report('section', 'β_1∘σ_1 = η_1', failures))
    reports.append(check_functoriality(path))
    reports.append(check_path_projections(path))
    return merge_reports(f"alpha-beta {F.name}", 'Path(η_F) => F and Path(η_F) => Fact∘Perm(F)', reports,
                         {'bound': N})
