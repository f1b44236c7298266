import itertools
import logging
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from sympy.utilities.iterables import multiset_partitions

from . import config
from .errors import BoundError, CoherenceError, FactpermError
from .fincat import Functor, NatTransformation, build_category, whisker_left, whisker_right
from .finstar import PointedMap, all_maps, identity, rho
from .permcat import PermRelCategory, arrangement_symmetry, pseudofunctor_coherence
from .relcat import (
    BWD,
    FWD,
    HomotopyEquivWitness,
    RelCategory,
    RelFunctor,
    ZigZag,
    compose_rel_functors,
    identity_rel_functor,
    invert_witness,
    paste_witnesses,
    product_witness,
    rel_product,
    same_functor,
)
from .schemas import AlgebraSchema, Report, make_report, merge_reports

logger = logging.getLogger(__name__)

Subset = FrozenSet[int]
Multiarrow = Tuple[Tuple[Subset, ...], Subset]

EMPTY: Subset = frozenset()


# --- colors and multiarrows ---

def subsets(n: int) -> List[Subset]:
    """All S ⊆ {1..n}, by size then lexicographically"""
    return [frozenset(c) for k in range(n + 1) for c in itertools.combinations(range(1, n + 1), k)]


def subset_key(S: Iterable[int]) -> str:
    return ','.join(str(s) for s in sorted(S))


def parse_subset(text: str) -> Subset:
    text = text.strip().strip('()')
    return frozenset(int(t) for t in text.split(',') if t.strip())


def multiarrow_key(arrow: Multiarrow) -> str:
    """"(),(1,3),(2)->(1,2,3)"; the nullary arrow is "->()" """
    sources, target = arrow
    return ','.join(f"({subset_key(S)})" for S in sources) + f"->({subset_key(target)})"


def parse_multiarrow(text: str) -> Multiarrow:
    head, _, tail = text.partition('->')
    sources = []
    head = head.strip()
    while head:
        close = head.index(')')
        sources.append(parse_subset(head[:close + 1]))
        head = head[close + 1:].lstrip(',')
    return tuple(sources), parse_subset(tail)


def canonical_order(sources: Sequence[Subset]) -> List[int]:
    """Positions of `sources` in canonical order: ∅ first, then by minimum element"""
    return sorted(range(len(sources)), key=lambda p: (1, min(sources[p]), p) if sources[p] else (0, 0, p))


def is_decomposition(sources: Sequence[Subset]) -> bool:
    seen = set()
    for S in sources:
        if seen & S:
            return False
        seen |= S
    return True


def _set_partitions(T: Subset) -> Iterator[List[Subset]]:
    elements = sorted(T)
    if not elements:
        yield []
    elif len(elements) == 1:
        yield [T]
    else:
        for blocks in multiset_partitions(elements):
            yield [frozenset(b) for b in blocks]


def arrows_into(T: Subset, max_empty: int) -> List[Multiarrow]:
    arrows = []
    for blocks in _set_partitions(T):
        blocks = sorted(blocks, key=min)
        for e in range(max_empty + 1):
            arrows.append(((EMPTY,) * e + tuple(blocks), T))
    return sorted(arrows, key=multiarrow_key)


class FactOperad:
    """
    Fact_n: colors are the subsets of {1..n}; a multiarrow (S_1..S_k) -> T exists
    iff the S_i are pairwise disjoint with union T, and is then unique.
    Stored representatives are canonical with at most `max_empty` ∅ sources.
    """
    def __init__(self, n: int, max_empty: int = config.MAX_EMPTY):
        if n < 0:
            raise FactpermError(f"Fact_n needs n >= 0, got {n}")
        self.n = n
        self.max_empty = max_empty
        self.colors = subsets(n)
        self.multiarrows: List[Multiarrow] = [a for T in self.colors for a in arrows_into(T, max_empty)]
        self._by_target = {T: arrows_into(T, max_empty) for T in self.colors}

    def __repr__(self):
        return f"FactOperad(n={self.n}, colors={len(self.colors)}, multiarrows={len(self.multiarrows)})"

    def exists(self, sources: Sequence[Iterable[int]], target: Iterable[int]) -> bool:
        sources = [frozenset(S) for S in sources]
        target = frozenset(target)
        if not target <= frozenset(range(1, self.n + 1)):
            return False
        return is_decomposition(sources) and frozenset().union(*sources) == target

    def into(self, T: Subset) -> List[Multiarrow]:
        return self._by_target[T]

    def canonical(self, sources: Sequence[Iterable[int]]) -> Multiarrow:
        sources = [frozenset(S) for S in sources]
        if not is_decomposition(sources):
            raise FactpermError('sources are not pairwise disjoint', tuple(subset_key(S) for S in sources))
        return tuple(sources[p] for p in canonical_order(sources)), frozenset().union(*sources)

    def compose(self, outer: Multiarrow, inners: Sequence[Multiarrow]) -> Multiarrow:
        """γ(outer; inners): the sources of the inners feed the outer sources in order"""
        outer_sources, target = outer
        if [t for _, t in inners] != list(outer_sources):
            raise FactpermError('inner targets do not match the outer sources')
        return self.canonical([S for sources, _ in inners for S in sources])


def build_fact_operad(n: int, max_empty: int = config.MAX_EMPTY) -> FactOperad:
    operad = FactOperad(n, max_empty)
    logger.info(f"built {operad!r}")
    return operad


def check_fact_operad(operad: FactOperad) -> Report:
    failures = []
    for sources, target in operad.multiarrows:
        if not operad.exists(sources, target):
            failures.append(f"stored multiarrow {multiarrow_key((sources, target))} is not a decomposition")
        for perm in itertools.permutations(range(len(sources))):
            if not operad.exists([sources[p] for p in perm], target):
                failures.append(f"permuted {multiarrow_key((sources, target))} is missing")
                break
        for inners in itertools.product(*(operad.into(S) for S in sources)):
            composite = operad.compose((sources, target), inners)
            if not operad.exists(*composite):
                failures.append(f"composite through {multiarrow_key((sources, target))} escapes")
    for S, T in itertools.product(operad.colors, repeat=2):
        if S and T and S & T and operad.exists([S, T], S | T):
            failures.append(f"overlapping ({subset_key(S)}), ({subset_key(T)}) admit a multiarrow")
    return make_report(f"operad Fact_{operad.n}", 'colored operad of n-factorizations', failures,
                       {'n': operad.n, 'max_empty': operad.max_empty})


# --- algebras ---

class FactAlgebra:
    """
    A Fact_n-algebra in a permutative relative category
    `struct` is keyed by canonical multiarrows; entries whose source tensor
    leaves a truncation bound are absent.
    """
    def __init__(self, ambient: PermRelCategory, n: int, obj: Dict[Subset, int],
                 struct: Dict[Multiarrow, int], name: str = ''):
        self.ambient = ambient
        self.n = n
        self.obj = dict(obj)
        self.struct = dict(struct)
        self.name = name
        self.max_empty = max((sum(1 for S in a[0] if not S) for a in self.struct), default=0)
        self._key = None

    def __repr__(self):
        values = ' '.join(f"{subset_key(S) or '∅'}={self.ambient.base.obj_label(x)}" for S, x in self.obj.items())
        return f"FactAlgebra(n={self.n}: {values})"

    @property
    def key(self) -> Tuple:
        if self._key is None:
            self._key = (
                self.n,
                tuple(self.obj[S] for S in subsets(self.n)),
                tuple(sorted((multiarrow_key(a), m) for a, m in self.struct.items())),
            )
        return self._key

    def __eq__(self, other):
        return isinstance(other, FactAlgebra) and self.ambient is other.ambient and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def source_object(self, sources: Sequence[Subset]) -> Optional[int]:
        return self.ambient.tensor_all([self.obj[S] for S in sources])

    def structure_at(self, sources: Sequence[Iterable[int]]) -> Optional[int]:
        """
        ⊗_p A(S_p) -> A(∪ S_p) for sources in any order and with any number of ∅
        None when a tensor on the way leaves the ambient bound.
        """
        sources = tuple(frozenset(S) for S in sources)
        if not is_decomposition(sources):
            raise FactpermError('structure map at overlapping sources', tuple(subset_key(S) for S in sources))
        C = self.ambient
        B = C.base
        target = frozenset().union(*sources)
        order = canonical_order(sources)
        canon = tuple(sources[p] for p in order)
        empties = sum(1 for S in canon if not S)
        if empties <= self.max_empty or empties <= 1:
            m = self.struct.get((canon, target))
        else:
            rest = canon[empties:]
            m = self.struct.get(((EMPTY,) + rest, target))
            collapse = self._collapse_empties(empties)
            rest_obj = self.source_object(rest)
            if m is None or collapse is None or rest_obj is None:
                return None
            widen = C.tensor_mor(collapse, B.identity[rest_obj])
            m = None if widen is None else B.comp(m, widen)
        if m is None:
            return None
        if order == list(range(len(sources))):
            return m
        arrangement = [order.index(p) for p in range(len(sources))]
        sym = arrangement_symmetry(C, [self.obj[S] for S in canon], arrangement)
        return None if sym is None else B.comp(m, sym)

    def _collapse_empties(self, e: int) -> Optional[int]:
        """A(∅)^{⊗e} -> A(∅) through the binary structure map, left-nested"""
        C = self.ambient
        B = C.base
        binary = self.struct.get(((EMPTY, EMPTY), EMPTY))
        result = B.identity[self.obj[EMPTY]]
        for _ in range(e - 1):
            if binary is None:
                return None
            widened = C.tensor_mor(result, B.identity[self.obj[EMPTY]])
            if widened is None:
                return None
            result = B.comp(binary, widened)
        return result

    def to_schema(self) -> AlgebraSchema:
        B = self.ambient.base
        return AlgebraSchema(
            n=self.n,
            obj={subset_key(S): B.obj_label(x) for S, x in sorted(self.obj.items(), key=lambda kv: sorted(kv[0]))},
            struct={multiarrow_key(a): B.label(m) for a, m in sorted(self.struct.items(),
                                                                       key=lambda kv: multiarrow_key(kv[0]))},
        )


def algebra_from_schema(C: PermRelCategory, raw) -> FactAlgebra:
    schema = raw if isinstance(raw, AlgebraSchema) else AlgebraSchema.model_validate(raw)
    B = C.base
    # values are written as labels, see to_schema
    objects = {B.obj_label(x): x for x in B.objects}
    morphisms = {B.label(f): f for f in B.morphisms}
    try:
        obj = {parse_subset(k): objects[str(v)] for k, v in schema.obj.items()}
        struct = {parse_multiarrow(k): morphisms[str(v)] for k, v in schema.struct.items()}
    except (KeyError, ValueError) as exc:
        raise FactpermError(f"algebra names unknown data: {exc}")
    return FactAlgebra(C, schema.n, obj, struct)


def algebra_violations(A: FactAlgebra, operad: Optional[FactOperad] = None) -> List[str]:
    operad = operad or FactOperad(A.n)
    C = A.ambient
    B = C.base
    failures = []
    missing = [S for S in operad.colors if S not in A.obj]
    if missing:
        return [f"no object at {subset_key(S) or '∅'}" for S in missing]
    for arrow in operad.multiarrows:
        sources, target = arrow
        src = A.source_object(sources)
        m = A.struct.get(arrow)
        if m is None:
            if src is not None:
                failures.append(f"no structure map at {multiarrow_key(arrow)}")
            continue
        if B.dom[m] != src or B.cod[m] != A.obj[target]:
            failures.append(f"structure map at {multiarrow_key(arrow)} has wrong dom/cod")
    if failures:
        return failures

    # unit
    for T in operad.colors:
        if A.struct.get(((T,), T)) != B.identity[A.obj[T]]:
            failures.append(f"unary structure map at {subset_key(T) or '∅'} is not the identity")

    # associativity
    for outer in operad.multiarrows:
        sources, target = outer
        m_outer = A.struct.get(outer)
        if m_outer is None:
            continue
        for inners in itertools.product(*(operad.into(S) for S in sources)):
            parts = [A.struct.get(inner) for inner in inners]
            if None in parts:
                continue
            tensored = C.tensor_mor_all(parts)
            direct = A.structure_at([S for inner_sources, _ in inners for S in inner_sources])
            if tensored is None or direct is None:
                continue
            if B.comp(m_outer, tensored) != direct:
                failures.append(f"associativity fails through {multiarrow_key(outer)} with "
                                + ' '.join(multiarrow_key(i) for i in inners))

    # equivariance: swapping two ∅ sources fixes the structure map
    empty_obj = A.obj[EMPTY]
    swap_empty = C.braid(empty_obj, empty_obj)
    for arrow in operad.multiarrows:
        sources, target = arrow
        if sum(1 for S in sources if not S) < 2 or arrow not in A.struct:
            continue
        rest = A.source_object(sources[2:])
        if swap_empty is None or rest is None:
            continue
        permuted = C.tensor_mor(swap_empty, B.identity[rest])
        if permuted is not None and B.comp(A.struct[arrow], permuted) != A.struct[arrow]:
            failures.append(f"structure map at {multiarrow_key(arrow)} is not invariant under swapping ∅ sources")
    return failures


def validate_fact_algebra(A: FactAlgebra, operad: Optional[FactOperad] = None) -> Report:
    bounds = {'n': A.n}
    if A.ambient.bound is not None:
        bounds['bound'] = A.ambient.bound
    return make_report(f"fact-algebra {A.name or A.n}", 'Fact_n-algebra laws', algebra_violations(A, operad), bounds)


def is_fact_object(A: FactAlgebra) -> bool:
    """Every structure map is a weak equivalence"""
    return all(A.ambient.is_weq(m) for m in A.struct.values())


class FactMorphism:
    def __init__(self, source: FactAlgebra, target: FactAlgebra, components: Dict[Subset, int]):
        self.source = source
        self.target = target
        self.components = dict(components)

    def __repr__(self):
        return f"FactMorphism({self.source!r} -> {self.target!r})"

    def key(self) -> Tuple[int, ...]:
        return tuple(self.components[S] for S in subsets(self.source.n))

    def is_weq(self) -> bool:
        return all(self.source.ambient.is_weq(c) for c in self.components.values())


def fact_morphism_violations(phi: FactMorphism) -> List[str]:
    A, B_alg = phi.source, phi.target
    C = A.ambient
    B = C.base
    failures = []
    for S in subsets(A.n):
        c = phi.components.get(S)
        if c is None or B.dom[c] != A.obj[S] or B.cod[c] != B_alg.obj[S]:
            failures.append(f"component at {subset_key(S) or '∅'} has wrong dom/cod")
    if failures:
        return failures
    for arrow, m in A.struct.items():
        n_target = B_alg.struct.get(arrow)
        if n_target is None:
            continue
        sources, target = arrow
        tensored = C.tensor_mor_all([phi.components[S] for S in sources])
        if tensored is None:
            continue
        if B.comp(n_target, tensored) != B.comp(phi.components[target], m):
            failures.append(f"does not commute with {multiarrow_key(arrow)}")
    return failures


def compose_fact_morphisms(psi_: FactMorphism, phi: FactMorphism) -> FactMorphism:
    B = phi.source.ambient.base
    return FactMorphism(phi.source, psi_.target,
                        {S: B.comp(psi_.components[S], phi.components[S]) for S in phi.components})


def identity_fact_morphism(A: FactAlgebra) -> FactMorphism:
    B = A.ambient.base
    return FactMorphism(A, A, {S: B.identity[x] for S, x in A.obj.items()})


# --- Φ, Ψ and the counit ---

def psi(C: PermRelCategory, n: int, xs: Sequence[int], operad: Optional[FactOperad] = None) -> FactAlgebra:
    """S |-> ⊗_{s∈S} X_s with canonical symmetries as structure maps"""
    if len(xs) != n:
        raise FactpermError(f"Ψ_{n} needs {n} objects, got {len(xs)}")
    operad = operad or FactOperad(n)
    obj = {}
    for S in operad.colors:
        x = C.tensor_all([xs[s - 1] for s in sorted(S)])
        if x is None:
            raise BoundError(f"Ψ_{n} leaves the bound of {C.name!r}")
        obj[S] = x
    keyed = {i: xs[i - 1] for i in range(1, n + 1)}
    struct = {}
    for arrow in operad.multiarrows:
        sources, _ = arrow
        order = [s for S in sources for s in sorted(S)]
        ranked = sorted(order)
        position = {s: k for k, s in enumerate(ranked)}
        m = arrangement_symmetry(C, [keyed[s] for s in ranked], [position[s] for s in order])
        if m is not None:
            struct[arrow] = m
    return FactAlgebra(C, n, obj, struct, name=f"Ψ({','.join(C.base.obj_label(x) for x in xs)})")


def psi_morphism(C: PermRelCategory, n: int, fs: Sequence[int], operad: Optional[FactOperad] = None) -> FactMorphism:
    B = C.base
    source = psi(C, n, [B.dom[f] for f in fs], operad)
    target = psi(C, n, [B.cod[f] for f in fs], operad)
    return FactMorphism(source, target,
                        {S: C.tensor_mor_all([fs[s - 1] for s in sorted(S)]) for S in source.obj})


def phi(A: FactAlgebra) -> Tuple[int, ...]:
    """(A({1}), ..., A({n}))"""
    return tuple(A.obj[frozenset([i])] for i in range(1, A.n + 1))


def phi_morphism(f: FactMorphism) -> Tuple[int, ...]:
    return tuple(f.components[frozenset([i])] for i in range(1, f.source.n + 1))


def counit_zigzag(A: FactAlgebra, operad: Optional[FactOperad] = None) -> FactMorphism:
    """ΨΦ(A) -> A with components ⊗_{s∈S} A({s}) -> A(S)"""
    C = A.ambient
    source = psi(C, A.n, phi(A), operad)
    components = {}
    for S in source.obj:
        c = A.structure_at([frozenset([s]) for s in sorted(S)])
        if c is None:
            raise BoundError(f"counit component at {subset_key(S) or '∅'} leaves the bound")
        if not C.is_weq(c):
            raise CoherenceError(f"counit component at {subset_key(S) or '∅'} is not weq", (subset_key(S),))
        components[S] = c
    eps = FactMorphism(source, A, components)
    failures = fact_morphism_violations(eps)
    if failures:
        raise CoherenceError(f"counit at {A!r} is not an algebra map: {failures[0]}")
    return eps


# --- pullback along Fin_* ---

def preimage(f: PointedMap, S: Iterable[int]) -> Subset:
    S = frozenset(S)
    return frozenset(i for i in range(1, f.n + 1) if f(i) in S)


def pullback_algebra(A: FactAlgebra, f: PointedMap, operad: Optional[FactOperad] = None) -> FactAlgebra:
    """(f_*A)(S) = A(f⁻¹(S)) for f: ⟨n⟩ -> ⟨m⟩"""
    if f.n != A.n:
        raise FactpermError(f"cannot pull back a Fact_{A.n}-algebra along {f}")
    operad = operad or FactOperad(f.m)
    obj = {S: A.obj[preimage(f, S)] for S in operad.colors}
    struct = {}
    for arrow in operad.multiarrows:
        sources, _ = arrow
        m = A.structure_at([preimage(f, S) for S in sources])
        if m is not None:
            struct[arrow] = m
    return FactAlgebra(A.ambient, f.m, obj, struct)


def pullback_morphism(phi_: FactMorphism, f: PointedMap, source: FactAlgebra, target: FactAlgebra) -> FactMorphism:
    return FactMorphism(source, target, {S: phi_.components[preimage(f, S)] for S in subsets(f.m)})


def fact_sample(C: PermRelCategory, bound: int, seeds: Optional[Dict[int, List[FactAlgebra]]] = None
                ) -> Dict[int, List[FactAlgebra]]:
    """
    Ψ-images of every object tuple (or the given seeds), closed under pullback
    along every map ⟨n⟩ -> ⟨m⟩ with n, m <= bound; canonical order within each n
    """
    operads = {n: FactOperad(n) for n in range(bound + 1)}
    if seeds is None:
        seeds = {n: [psi(C, n, xs, operads[n]) for xs in itertools.product(C.base.objects, repeat=n)]
                 for n in range(bound + 1)}
    sample = {n: {} for n in range(bound + 1)}
    frontier = []
    for n, algebras in seeds.items():
        for A in algebras:
            if A.key not in sample[n]:
                sample[n][A.key] = A
                frontier.append(A)
    while frontier:
        added = []
        for A in frontier:
            for m in range(bound + 1):
                for f in all_maps(A.n, m):
                    B = pullback_algebra(A, f, operads[m])
                    if B.key not in sample[m]:
                        sample[m][B.key] = B
                        added.append(B)
        frontier = added
    result = {n: [sample[n][k] for k in sorted(sample[n], key=repr)] for n in sample}
    logger.info(f"Fact sample over {C.name!r}: " + ', '.join(f"n={n}: {len(a)}" for n, a in result.items()))
    return result


def enumerate_algebras(C: PermRelCategory, n: int) -> List[FactAlgebra]:
    """Every valid Fact_n-algebra with the default ∅ budget; only for n <= 2 and at most 3 objects"""
    if n > 2 or len(C.base.obj_keys) > 3:
        raise BoundError("exhaustive algebra enumeration is limited to n <= 2 and 3 objects")
    operad = FactOperad(n)
    B = C.base
    found = []
    for values in itertools.product(B.objects, repeat=len(operad.colors)):
        obj = dict(zip(operad.colors, values))
        choices = []
        for sources, target in operad.multiarrows:
            src = C.tensor_all([obj[S] for S in sources])
            choices.append(B.hom(src, obj[target]) if src is not None else [])
        if any(not c for c in choices):
            continue
        for picked in itertools.product(*choices):
            A = FactAlgebra(C, n, obj, dict(zip(operad.multiarrows, picked)))
            if not algebra_violations(A, operad):
                found.append(A)
    return found


# --- the relative category Fact_n(C) ---

class FactCategory:
    """Fact_n(C) on a finite sample: objects are indices into `algebras`, morphisms keyed (i, j, components)"""
    def __init__(self, ambient: PermRelCategory, n: int, algebras: List[FactAlgebra], rel: RelCategory):
        self.ambient = ambient
        self.n = n
        self.algebras = algebras
        self.rel = rel
        self._index = {A.key: i for i, A in enumerate(algebras)}

    def __repr__(self):
        return f"FactCategory(n={self.n}, objects={len(self.algebras)}, morphisms={len(self.rel.base.mor_keys)})"

    @property
    def base(self):
        return self.rel.base

    def index_of(self, A: FactAlgebra) -> int:
        try:
            return self._index[A.key]
        except KeyError:
            raise BoundError(f"{A!r} is outside the sample of Fact_{self.n}({self.ambient.name})")

    def morphism_of(self, f: FactMorphism) -> int:
        return self.base.mor((self.index_of(f.source), self.index_of(f.target), f.key()))

    def morphism(self, p: int) -> FactMorphism:
        i, j, comps = self.base.mor_keys[p]
        return FactMorphism(self.algebras[i], self.algebras[j], dict(zip(subsets(self.n), comps)))


def fact_category(C: PermRelCategory, n: int, sample: List[FactAlgebra], only_fact: bool = True) -> FactCategory:
    """Full subcategory on the sampled Fact-objects; every algebra map between them is found"""
    B = C.base
    algebras = [A for A in sample if A.n == n and (is_fact_object(A) or not only_fact)]
    colors = subsets(n)
    specs = []
    for (i, A), (j, A2) in itertools.product(enumerate(algebras), repeat=2):
        for comps in itertools.product(*(B.hom(A.obj[S], A2.obj[S]) for S in colors)):
            f = FactMorphism(A, A2, dict(zip(colors, comps)))
            if not fact_morphism_violations(f):
                specs.append(((i, j, comps), i, j))
    base = build_category(
        list(range(len(algebras))), specs,
        lambda i: (i, i, tuple(B.identity[algebras[i].obj[S]] for S in colors)),
        lambda g, f: (f[0], g[1], tuple(B.comp(a, b) for a, b in zip(g[2], f[2]))),
        name=f"Fact_{n}({C.name})",
    )
    weq = [p for p, key in enumerate(base.mor_keys) if all(C.is_weq(c) for c in key[2])]
    cat = FactCategory(C, n, algebras, RelCategory(base, weq))
    logger.info(f"built {cat!r}")
    return cat


def fact_categories(C: PermRelCategory, bound: int) -> Dict[int, FactCategory]:
    sample = fact_sample(C, bound)
    return {n: fact_category(C, n, sample[n]) for n in range(bound + 1)}


def fact_pullback(f: PointedMap, source: FactCategory, target: FactCategory) -> RelFunctor:
    """Fact(f): Fact_n(C) -> Fact_m(C), A |-> f_*A"""
    operad = FactOperad(f.m)
    pulled = [pullback_algebra(A, f, operad) for A in source.algebras]
    obj_map = [target.index_of(P) for P in pulled]
    mor_map = []
    for p in source.base.morphisms:
        phi_ = source.morphism(p)
        i, j, _ = source.base.mor_keys[p]
        mor_map.append(target.morphism_of(pullback_morphism(phi_, f, pulled[i], pulled[j])))
    return RelFunctor(source.rel, target.rel,
                      Functor(source.base, target.base, obj_map, mor_map, name=f"Fact({f})"))


def check_fact_functoriality(cats: Dict[int, FactCategory], bound: Optional[int] = None) -> Report:
    bound = max(cats) if bound is None else bound
    functors = {}

    def act(f):
        if f not in functors:
            functors[f] = fact_pullback(f, cats[f.n], cats[f.m])
        return functors[f]

    failures = []
    maps = [f for n in range(bound + 1) for m in range(bound + 1) for f in all_maps(n, m)]
    for f in maps:
        try:
            act(f)
        except BoundError as exc:
            failures.append(f"Fact({f}) leaves the sample of Fact-objects: {exc}")
    if failures:
        return make_report('factop.functoriality', 'Fact(g∘f) = Fact(g)∘Fact(f)', failures, {'max_n': bound})
    for n in range(bound + 1):
        if not same_functor(act(identity(n)).underlying, identity_rel_functor(cats[n].rel).underlying):
            failures.append(f"Fact(id⟨{n}⟩) is not the identity")
    by_source = {}
    for g in maps:
        by_source.setdefault(g.n, []).append(g)
    for f in maps:
        for g in by_source.get(f.m, ()):
            if not same_functor(act(g.compose(f)).underlying, compose_rel_functors(act(g), act(f)).underlying):
                failures.append(f"Fact({g}∘{f}) != Fact({g})∘Fact({f})")
    return make_report('factop.functoriality', 'Fact(g∘f) = Fact(g)∘Fact(f)', failures, {'max_n': bound})


# --- lax squares ---

def lax_components(A: FactAlgebra, u: PointedMap) -> Tuple[Optional[int], ...]:
    """(⊗_{i∈u⁻¹(j)} A({i}) -> A(u⁻¹(j)))_j"""
    return tuple(A.structure_at([frozenset([i]) for i in u.preimage(j)]) for j in range(1, u.m + 1))


def lax_square_check(C: PermRelCategory, u: PointedMap, cats: Dict[int, FactCategory],
                     composites: bool = True) -> Report:
    """
    C^•(u)∘Φ_n => Φ_m∘Fact(u): weq components, naturality on sample morphisms,
    and pasting with every u2 out of ⟨m⟩ within the sample bound
    """
    B = C.base
    cat = cats[u.n]
    failures = []
    for A in cat.algebras:
        for j, c in enumerate(lax_components(A, u), start=1):
            if c is None:
                failures.append(f"component at {A!r}, j={j} leaves the bound")
            elif not C.is_weq(c):
                failures.append(f"component at {A!r}, j={j} is {B.label(c)}, not weq")
    for p in cat.base.morphisms:
        f = cat.morphism(p)
        comps_a, comps_b = lax_components(f.source, u), lax_components(f.target, u)
        for j in range(1, u.m + 1):
            pre = u.preimage(j)
            left = C.tensor_mor_all([f.components[frozenset([i])] for i in pre])
            if left is None or comps_b[j - 1] is None or comps_a[j - 1] is None:
                continue
            if B.comp(comps_b[j - 1], left) != B.comp(f.components[frozenset(pre)], comps_a[j - 1]):
                failures.append(f"lax square for {u} not natural at morphism {cat.base.label(p)}, j={j}")
    if composites:
        operad_m = FactOperad(u.m)
        pulled = [pullback_algebra(A, u, operad_m) for A in cat.algebras]
        for k in range(max(cats) + 1):
            for u2 in all_maps(u.m, k):
                for A, uA in zip(cat.algebras, pulled):
                    failures.extend(_pasting_failures(C, A, uA, u, u2))
    return make_report(f"lax-square {u}", 'lax square of Φ against C^•', failures,
                       {'n': u.n, 'm': u.m})


def _pasting_failures(C: PermRelCategory, A: FactAlgebra, uA: FactAlgebra, u: PointedMap,
                      u2: PointedMap) -> List[str]:
    B = C.base
    whole = lax_components(A, u2.compose(u))
    first = lax_components(A, u)
    second = lax_components(uA, u2)
    coherence = pseudofunctor_coherence(C, u, u2, phi(A))
    failures = []
    for k in range(1, u2.m + 1):
        legs = [first[j - 1] for j in u2.preimage(k)]
        inner = None if None in legs else C.tensor_mor_all(legs)
        if None in (whole[k - 1], coherence[k - 1], second[k - 1], inner):
            continue
        if B.comp(whole[k - 1], coherence[k - 1]) != B.comp(second[k - 1], inner):
            failures.append(f"lax squares for {u} and {u2} do not paste at {A!r}, k={k}")
    return failures


def check_lax_squares(C: PermRelCategory, cats: Dict[int, FactCategory]) -> Report:
    bound = max(cats)
    reports = [lax_square_check(C, u, cats) for n in range(bound + 1) for m in range(bound + 1)
               for u in all_maps(n, m)]
    return merge_reports('factop.lax-squares', 'lax squares paste', reports, {'max_n': bound})


# --- homotopy equivalences ---

def phi_psi_witness(C: PermRelCategory, n: int, cat: FactCategory,
                    power: Optional[RelCategory] = None) -> HomotopyEquivWitness:
    """(Φ_n, Ψ_n, [counit], []) for Fact_n(C) -> C^n"""
    power = power or rel_product(*[C.rel] * n)
    P = power.base
    B = C.base
    operad = FactOperad(n)
    phi_obj = [P.obj(phi(A)) for A in cat.algebras]
    phi_mor = [P.mor(phi_morphism(cat.morphism(p))) for p in cat.base.morphisms]
    Phi = RelFunctor(cat.rel, power, Functor(cat.base, P, phi_obj, phi_mor, name=f"Φ_{n}"))
    psi_obj = [cat.index_of(psi(C, n, xs, operad)) for xs in P.obj_keys]
    psi_mor = [cat.morphism_of(psi_morphism(C, n, fs, operad)) for fs in P.mor_keys]
    Psi = RelFunctor(power, cat.rel, Functor(P, cat.base, psi_obj, psi_mor, name=f"Ψ_{n}"))
    psi_phi = compose_rel_functors(Psi, Phi)
    counit = NatTransformation(psi_phi.underlying, identity_rel_functor(cat.rel).underlying,
                               [cat.morphism_of(counit_zigzag(A, operad)) for A in cat.algebras],
                               name='counit')
    phi_psi = compose_rel_functors(Phi, Psi)
    return HomotopyEquivWitness(
        Phi, Psi,
        ZigZag(psi_phi, identity_rel_functor(cat.rel), [(FWD, counit)]),
        ZigZag(phi_psi, identity_rel_functor(power)),
        name=f"Φ_{n}/Ψ_{n} over {C.name}",
    )


def _check_blocks(n: int, blocks: Sequence[Sequence[int]]) -> List[Tuple[int, ...]]:
    blocks = [tuple(sorted(S)) for S in blocks]
    flat = sorted(s for S in blocks for s in S)
    if flat != list(range(1, n + 1)):
        raise FactpermError(f"blocks {blocks} do not partition {{1..{n}}}")
    return blocks


def inert_comparison(n: int, blocks: Sequence[Sequence[int]], cats: Dict[int, FactCategory],
                     target: Optional[RelCategory] = None) -> RelFunctor:
    """A |-> (ρ^{S_i}_* A)_i: Fact_n(C) -> ∏_i Fact_{|S_i|}(C)"""
    blocks = _check_blocks(n, blocks)
    source = cats[n]
    parts = [cats[len(S)] for S in blocks]
    target = target or rel_product(*(p.rel for p in parts))
    T = target.base
    legs = [rho(n, S) for S in blocks]
    operads = {leg.m: FactOperad(leg.m) for leg in legs}
    pulled = [[pullback_algebra(A, leg, operads[leg.m]) for leg in legs] for A in source.algebras]
    obj_map = [T.obj(tuple(part.index_of(P) for part, P in zip(parts, row))) for row in pulled]
    mor_map = []
    for p in source.base.morphisms:
        f = source.morphism(p)
        i, j, _ = source.base.mor_keys[p]
        mor_map.append(T.mor(tuple(
            part.morphism_of(pullback_morphism(f, leg, pulled[i][k], pulled[j][k]))
            for k, (part, leg) in enumerate(zip(parts, legs))
        )))
    name = 'ρ(' + ' | '.join(subset_key(S) for S in blocks) + ')'
    return RelFunctor(source.rel, target, Functor(source.base, T, obj_map, mor_map, name=name))


def segal_map(n: int, cats: Dict[int, FactCategory], target: Optional[RelCategory] = None) -> RelFunctor:
    """(ρ¹_*, ..., ρⁿ_*): Fact_n(C) -> Fact_1(C)^n"""
    return inert_comparison(n, [[i] for i in range(1, n + 1)], cats, target)


def reindex_witness(power: RelCategory, blocks: Sequence[Sequence[int]], parts: Sequence[RelCategory],
                    target: RelCategory) -> HomotopyEquivWitness:
    """The isomorphism C^n ≅ ∏_i C^{S_i} regrouping coordinates along the blocks"""
    P, T = power.base, target.base
    n = sum(len(S) for S in blocks)

    def split(key, pick):
        return tuple(pick(part.base)(tuple(key[s - 1] for s in S)) for part, S in zip(parts, blocks))

    def join(key, keys_of, lookup):
        flat = [None] * n
        for part, S, idx in zip(parts, blocks, key):
            for s, x in zip(S, keys_of(part.base)[idx]):
                flat[s - 1] = x
        return lookup(tuple(flat))

    there = Functor(P, T, [T.obj(split(k, lambda B: B.obj)) for k in P.obj_keys],
                    [T.mor(split(k, lambda B: B.mor)) for k in P.mor_keys], name='regroup')
    back = Functor(T, P, [join(k, lambda B: B.obj_keys, P.obj) for k in T.obj_keys],
                   [join(k, lambda B: B.mor_keys, P.mor) for k in T.mor_keys], name='ungroup')
    f = RelFunctor(power, target, there)
    g = RelFunctor(target, power, back)
    return HomotopyEquivWitness(
        f, g,
        ZigZag(compose_rel_functors(g, f), identity_rel_functor(power)),
        ZigZag(compose_rel_functors(f, g), identity_rel_functor(target)),
        name='regroup',
    )


def comparison_witness(C: PermRelCategory, n: int, blocks: Sequence[Sequence[int]],
                       cats: Dict[int, FactCategory], retarget: bool = True) -> HomotopyEquivWitness:
    """
    Φ_n witness, then regrouping C^n ≅ ∏ C^{S_i}, then the inverse of ∏ Ψ_{|S_i|}.
    With retarget=True the result is moved onto the inert comparison itself along
    the natural weak equivalence given by the counits of the factors.
    """
    blocks = _check_blocks(n, blocks)
    sizes = sorted({len(S) for S in blocks})
    powers = {k: rel_product(*[C.rel] * k) for k in sizes}
    if n not in powers:
        powers[n] = rel_product(*[C.rel] * n)
    factor_witness = {k: phi_psi_witness(C, k, cats[k], powers[k]) for k in sizes}
    parts = [cats[len(S)] for S in blocks]
    split_target = rel_product(*(powers[len(S)] for S in blocks))
    fact_target = rel_product(*(p.rel for p in parts))
    w_n = phi_psi_witness(C, n, cats[n], powers[n]) if n not in factor_witness else factor_witness[n]
    w_parts = product_witness([factor_witness[len(S)] for S in blocks], source=fact_target, target=split_target)
    regroup = reindex_witness(powers[n], blocks, [powers[len(S)] for S in blocks], split_target)
    pasted = paste_witnesses(paste_witnesses(w_n, regroup), invert_witness(w_parts))
    if not retarget:
        return pasted
    S = inert_comparison(n, blocks, cats, fact_target)
    legs = [rho(n, block) for block in blocks]
    operads = {leg.m: FactOperad(leg.m) for leg in legs}
    components = []
    for A in cats[n].algebras:
        row = [part.morphism_of(counit_zigzag(pullback_algebra(A, leg, operads[leg.m]), operads[leg.m]))
               for part, leg in zip(parts, legs)]
        components.append(fact_target.base.mor(tuple(row)))
    tau = NatTransformation(pasted.f.underlying, S.underlying, components, name='τ')
    g = pasted.g
    g_tau = whisker_right(g.underlying, tau)
    tau_g = whisker_left(tau, g.underlying)
    zz_gf = ZigZag(compose_rel_functors(g, S), compose_rel_functors(g, pasted.f), [(BWD, g_tau)]).concat(pasted.zz_gf)
    zz_fg = ZigZag(compose_rel_functors(S, g), compose_rel_functors(pasted.f, g), [(BWD, tau_g)]).concat(pasted.zz_fg)
    return HomotopyEquivWitness(S, g, zz_gf, zz_fg, name=f"{S.name} over {C.name}")


def segal_witness(C: PermRelCategory, n: int, cats: Dict[int, FactCategory],
                  retarget: bool = True) -> HomotopyEquivWitness:
    return comparison_witness(C, n, [[i] for i in range(1, n + 1)], cats, retarget)
