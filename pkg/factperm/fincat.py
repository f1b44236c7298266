import itertools
import logging
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from .errors import CategoryError
from .schemas import CategorySchema, Report, make_report

logger = logging.getLogger(__name__)


class FinCategory:
    """
    A finite category given by explicit tables
    Objects and morphisms are dense ids 0..k-1; `obj_keys`/`mor_keys` keep the
    labels they were built from so derived categories can be indexed by meaning.
    Composition is a table (g, f) -> g∘f, filled eagerly or on demand from `compose_fn`.
    """
    def __init__(self, obj_keys: Sequence[Hashable], mor_keys: Sequence[Hashable],
                 dom: Sequence[int], cod: Sequence[int], identity: Sequence[int],
                 compose_table: Optional[Dict[Tuple[int, int], int]] = None,
                 compose_fn: Optional[Callable[[int, int], int]] = None,
                 name: str = ''):
        self.name = name
        self.obj_keys = tuple(obj_keys)
        self.mor_keys = tuple(mor_keys)
        self.obj_index = {k: i for i, k in enumerate(self.obj_keys)}
        self.mor_index = {k: i for i, k in enumerate(self.mor_keys)}
        if len(self.obj_index) != len(self.obj_keys) or len(self.mor_index) != len(self.mor_keys):
            raise CategoryError(f"duplicate labels in category {name!r}")
        self.dom = tuple(dom)
        self.cod = tuple(cod)
        self.identity = tuple(identity)
        self._table: Dict[Tuple[int, int], int] = dict(compose_table or {})
        self._compose_fn = compose_fn
        self._complete = compose_fn is None
        self._hom: Dict[Tuple[int, int], List[int]] = {}
        self._out: List[List[int]] = [[] for _ in self.obj_keys]
        self._in: List[List[int]] = [[] for _ in self.obj_keys]
        for f in range(len(self.mor_keys)):
            self._hom.setdefault((self.dom[f], self.cod[f]), []).append(f)
            self._out[self.dom[f]].append(f)
            self._in[self.cod[f]].append(f)

    def __repr__(self):
        return f"FinCategory({self.name!r}, objects={len(self.obj_keys)}, morphisms={len(self.mor_keys)})"

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (self.obj_keys == other.obj_keys and self.mor_keys == other.mor_keys
                and self.dom == other.dom and self.cod == other.cod
                and self.identity == other.identity)

    def __hash__(self):
        return hash((len(self.obj_keys), len(self.mor_keys), self.obj_keys[:4]))

    @property
    def objects(self) -> range:
        return range(len(self.obj_keys))

    @property
    def morphisms(self) -> range:
        return range(len(self.mor_keys))

    def obj(self, key: Hashable) -> int:
        return self.obj_index[key]

    def mor(self, key: Hashable) -> int:
        return self.mor_index[key]

    def hom(self, x: int, y: int) -> List[int]:
        return self._hom.get((x, y), [])

    def out_of(self, x: int) -> List[int]:
        return self._out[x]

    def into(self, y: int) -> List[int]:
        return self._in[y]

    def is_identity(self, f: int) -> bool:
        return self.identity[self.dom[f]] == f

    def comp(self, g: int, f: int) -> int:
        """g∘f"""
        try:
            return self._table[(g, f)]
        except KeyError:
            pass
        if self.cod[f] != self.dom[g]:
            raise CategoryError(
                f"{self.mor_keys[g]} ∘ {self.mor_keys[f]} is not composable in {self.name!r}",
                (g, f),
            )
        if self._compose_fn is None:
            raise CategoryError(f"composition table of {self.name!r} misses a composable pair", (g, f))
        gf = self._compose_fn(g, f)
        self._table[(g, f)] = gf
        return gf

    def comp_chain(self, *fs: int) -> int:
        """fs[0]∘fs[1]∘...∘fs[-1]"""
        result = fs[-1]
        for g in reversed(fs[:-1]):
            result = self.comp(g, result)
        return result

    def composable_pairs(self) -> Iterable[Tuple[int, int]]:
        for g in self.morphisms:
            for f in self._in[self.dom[g]]:
                yield g, f

    def materialize(self) -> Dict[Tuple[int, int], int]:
        if not self._complete:
            for g, f in self.composable_pairs():
                self.comp(g, f)
            self._complete = True
            logger.debug(f"materialized composition of {self.name!r}: {len(self._table)} pairs")
        return self._table

    def label(self, f: int) -> str:
        return _show(self.mor_keys[f])

    def obj_label(self, x: int) -> str:
        return _show(self.obj_keys[x])

    def violations(self) -> List[str]:
        """Every failed unit or associativity law, exhaustively"""
        found = []
        table = self.materialize()
        for (g, f), gf in table.items():
            if self.dom[gf] != self.dom[f] or self.cod[gf] != self.cod[g]:
                found.append(f"composite {self.label(g)}∘{self.label(f)} has wrong dom/cod")
        for f in self.morphisms:
            if self.comp(self.identity[self.cod[f]], f) != f or self.comp(f, self.identity[self.dom[f]]) != f:
                found.append(f"unit law fails at {self.label(f)}")
        for g, f in table:
            for h in self._out[self.cod[g]]:
                if self.comp(h, table[(g, f)]) != self.comp(self.comp(h, g), f):
                    found.append(f"associativity fails on ({self.label(h)}, {self.label(g)}, {self.label(f)})")
        return found


def _show(key: Any) -> str:
    if isinstance(key, tuple):
        return '(' + ','.join(_show(k) for k in key) + ')'
    return str(key)


def build_category(obj_keys: Sequence[Hashable],
                   mor_specs: Iterable[Tuple[Hashable, Hashable, Hashable]],
                   identity_of: Callable[[Hashable], Hashable],
                   compose: Callable[[Hashable, Hashable], Hashable],
                   name: str = '', lazy: bool = False) -> FinCategory:
    """
    Materialize a category from keyed data
    mor_specs yields (key, dom_key, cod_key); identity_of and compose work on keys.
    """
    obj_keys = list(obj_keys)
    obj_index = {k: i for i, k in enumerate(obj_keys)}
    mor_keys, dom, cod = [], [], []
    for key, d, c in mor_specs:
        mor_keys.append(key)
        dom.append(obj_index[d])
        cod.append(obj_index[c])
    mor_index = {k: i for i, k in enumerate(mor_keys)}
    try:
        identity = [mor_index[identity_of(x)] for x in obj_keys]
    except KeyError as exc:
        raise CategoryError(f"identity missing while building {name!r}", (exc.args[0],))

    def compose_fn(g: int, f: int) -> int:
        key = compose(mor_keys[g], mor_keys[f])
        if key not in mor_index:
            raise CategoryError(f"composite escapes {name!r}", (mor_keys[g], mor_keys[f], key))
        return mor_index[key]

    cat = FinCategory(obj_keys, mor_keys, dom, cod, identity, compose_fn=compose_fn, name=name)
    if not lazy:
        cat.materialize()
    logger.debug(f"built {cat!r}")
    return cat


def validate_category(raw: Any) -> FinCategory:
    """Parse a category description and check every law, raising CategoryError on the first failure"""
    schema = raw if isinstance(raw, CategorySchema) else CategorySchema.model_validate(raw)
    objects = list(schema.objects)
    obj_index = {o: i for i, o in enumerate(objects)}
    if len(obj_index) != len(objects):
        raise CategoryError('duplicate object ids')
    mor_keys, dom, cod = [], [], []
    for m in schema.morphisms:
        if m.dom not in obj_index or m.cod not in obj_index:
            raise CategoryError(f"morphism {m.id} has a dangling dom/cod", (m.id, m.dom, m.cod))
        mor_keys.append(m.id)
        dom.append(obj_index[m.dom])
        cod.append(obj_index[m.cod])
    mor_index = {k: i for i, k in enumerate(mor_keys)}
    if len(mor_index) != len(mor_keys):
        raise CategoryError('duplicate morphism ids')
    identity = []
    for o in objects:
        key = schema.identities.get(str(o))
        if key is None or key not in mor_index:
            raise CategoryError(f"missing identity at object {o}", (o,))
        i = mor_index[key]
        if dom[i] != obj_index[o] or cod[i] != obj_index[o]:
            raise CategoryError(f"identity {key} at {o} has wrong dom/cod", (o, key))
        identity.append(i)
    table = {}
    for g, f, gf in schema.compose:
        for k in (g, f, gf):
            if k not in mor_index:
                raise CategoryError(f"composition row names unknown morphism {k}", (g, f, gf))
        gi, fi, gfi = mor_index[g], mor_index[f], mor_index[gf]
        if cod[fi] != dom[gi]:
            raise CategoryError(f"composition row {g}∘{f} is not composable", (g, f, gf))
        if dom[gfi] != dom[fi] or cod[gfi] != cod[gi]:
            raise CategoryError(f"composite {g}∘{f} = {gf} has wrong dom/cod", (g, f, gf))
        if table.setdefault((gi, fi), gfi) != gfi:
            raise CategoryError(f"composite {g}∘{f} given twice", (g, f, gf))
    cat = FinCategory(objects, mor_keys, dom, cod, identity, compose_table=table,
                      name=schema.name or '')
    for g, f in cat.composable_pairs():
        if (g, f) not in table:
            raise CategoryError(f"composition table misses {mor_keys[g]}∘{mor_keys[f]}",
                                (mor_keys[g], mor_keys[f]))
    for g, f in table:
        for h in cat.out_of(cat.cod[g]):
            left = cat.comp(h, cat.comp(g, f))
            right = cat.comp(cat.comp(h, g), f)
            if left != right:
                raise CategoryError('composition is not associative',
                                    (mor_keys[h], mor_keys[g], mor_keys[f]))
    for f in cat.morphisms:
        if cat.comp(cat.identity[cat.cod[f]], f) != f or cat.comp(f, cat.identity[cat.dom[f]]) != f:
            raise CategoryError(f"unit law fails at {mor_keys[f]}", (mor_keys[f],))
    logger.info(f"validated {cat!r}")
    return cat


def category_to_schema(C: FinCategory) -> CategorySchema:
    return CategorySchema(
        name=C.name or None,
        objects=[C.obj_label(x) for x in C.objects],
        morphisms=[{'id': C.label(f), 'dom': C.obj_label(C.dom[f]), 'cod': C.obj_label(C.cod[f])}
                   for f in C.morphisms],
        identities={C.obj_label(x): C.label(C.identity[x]) for x in C.objects},
        compose=[[C.label(g), C.label(f), C.label(gf)] for (g, f), gf in sorted(C.materialize().items())],
    )


def isomorphisms(C: FinCategory) -> frozenset:
    found = set()
    for f in C.morphisms:
        x, y = C.dom[f], C.cod[f]
        for g in C.hom(y, x):
            if C.comp(g, f) == C.identity[x] and C.comp(f, g) == C.identity[y]:
                found.add(f)
                break
    return frozenset(found)


def inverse(C: FinCategory, f: int) -> Optional[int]:
    for g in C.hom(C.cod[f], C.dom[f]):
        if C.comp(g, f) == C.identity[C.dom[f]] and C.comp(f, g) == C.identity[C.cod[f]]:
            return g
    return None


def components(C: FinCategory) -> List[List[int]]:
    """Connected components of the underlying undirected graph, in id order"""
    graph = nx.Graph()
    graph.add_nodes_from(C.objects)
    graph.add_edges_from((C.dom[f], C.cod[f]) for f in C.morphisms)
    return sorted(sorted(c) for c in nx.connected_components(graph))


# --- Derived categories ---

def terminal_category() -> FinCategory:
    return FinCategory(['*'], ['id*'], [0], [0], [0], compose_table={(0, 0): 0}, name='terminal')


def opposite(C: FinCategory, lazy: bool = False) -> FinCategory:
    """Same ids, dom and cod swapped; g∘f in C^op is f∘g in C"""
    if lazy:
        return FinCategory(C.obj_keys, C.mor_keys, C.cod, C.dom, C.identity,
                           compose_fn=lambda g, f: C.comp(f, g), name=f"{C.name}^op")
    table = {(f, g): gf for (g, f), gf in C.materialize().items()}
    return FinCategory(C.obj_keys, C.mor_keys, C.cod, C.dom, C.identity, compose_table=table,
                       name=f"{C.name}^op")


def product(*cats: FinCategory) -> FinCategory:
    """n-ary product; the empty product is terminal"""
    obj_keys = list(itertools.product(*(c.objects for c in cats)))
    specs = [
        (fs, tuple(c.dom[f] for c, f in zip(cats, fs)), tuple(c.cod[f] for c, f in zip(cats, fs)))
        for fs in itertools.product(*(c.morphisms for c in cats))
    ]
    return build_category(
        obj_keys, specs,
        lambda xs: tuple(c.identity[x] for c, x in zip(cats, xs)),
        lambda gs, fs: tuple(c.comp(g, f) for c, g, f in zip(cats, gs, fs)),
        name='×'.join(c.name for c in cats) or 'terminal',
    )


def full_subcategory(C: FinCategory, objects: Iterable[int], name: str = '') -> FinCategory:
    keep = sorted(set(objects))
    obj_keys = [C.obj_keys[x] for x in keep]
    kept = set(keep)
    specs = [(C.mor_keys[f], C.obj_keys[C.dom[f]], C.obj_keys[C.cod[f]])
             for f in C.morphisms if C.dom[f] in kept and C.cod[f] in kept]
    return build_category(
        obj_keys, specs,
        lambda x: C.mor_keys[C.identity[C.obj(x)]],
        lambda g, f: C.mor_keys[C.comp(C.mor(g), C.mor(f))],
        name=name or f"{C.name}|full",
    )


def slice_over(C: FinCategory, c: int) -> FinCategory:
    """C/c: objects are morphisms a: x -> c, morphisms a -> b are w with b∘w = a"""
    objs = list(C.into(c))
    specs = []
    for a in objs:
        for b in objs:
            for w in C.hom(C.dom[a], C.dom[b]):
                if C.comp(b, w) == a:
                    specs.append(((a, b, w), a, b))
    return build_category(
        objs, specs,
        lambda a: (a, a, C.identity[C.dom[a]]),
        lambda g, f: (f[0], g[1], C.comp(g[2], f[2])),
        name=f"{C.name}/{C.obj_label(c)}",
    )


def slice_projection(C: FinCategory, S: FinCategory) -> 'Functor':
    return Functor(S, C, [C.dom[a] for a in S.obj_keys], [k[2] for k in S.mor_keys], name='slice-proj')


def twisted_arrow(C: FinCategory, lazy: bool = False) -> FinCategory:
    """
    Tw(C): objects are the morphisms of C; (f: X->Y) -> (g: Z->W) is a pair
    (u: X->Z, v: W->Y) with v∘g∘u = f. Morphism keys are (f, g, u, v).
    """
    specs = []
    for f in C.morphisms:
        for g in C.morphisms:
            for u in C.hom(C.dom[f], C.dom[g]):
                gu = C.comp(g, u)
                for v in C.hom(C.cod[g], C.cod[f]):
                    if C.comp(v, gu) == f:
                        specs.append(((f, g, u, v), f, g))
    return build_category(
        list(C.morphisms), specs,
        lambda f: (f, f, C.identity[C.dom[f]], C.identity[C.cod[f]]),
        lambda second, first: (first[0], second[1], C.comp(second[2], first[2]), C.comp(first[3], second[3])),
        name=f"Tw({C.name})", lazy=lazy,
    )


def tw_functor(F: 'Functor', source_tw: Optional[FinCategory] = None,
               target_tw: Optional[FinCategory] = None) -> 'Functor':
    """Tw(F): f |-> F(f), (u, v) |-> (F(u), F(v))"""
    source_tw = source_tw or twisted_arrow(F.source)
    target_tw = target_tw or twisted_arrow(F.target)
    obj_map = [target_tw.obj(F.mor_map[f]) for f in source_tw.obj_keys]
    mor_map = []
    for f, g, u, v in source_tw.mor_keys:
        key = (F.mor_map[f], F.mor_map[g], F.mor_map[u], F.mor_map[v])
        try:
            mor_map.append(target_tw.mor(key))
        except KeyError:
            raise CategoryError(f"Tw({F.name}) sends ({f}, {g}) to {key}, which is not in {target_tw.name}", key)
    return Functor(source_tw, target_tw, obj_map, mor_map, name=f"Tw({F.name})")


def tw_domain_projection(C: FinCategory, T: FinCategory) -> 'Functor':
    """(f: X->Y) |-> X, (u, v) |-> u"""
    return Functor(T, C, [C.dom[f] for f in T.obj_keys], [k[2] for k in T.mor_keys], name='Tw-dom')


def pullback(P: 'Functor', Q: 'Functor', name: str = '') -> FinCategory:
    """Strict fiber product A ×_C B of P: A -> C and Q: B -> C"""
    A, B = P.source, Q.source
    objs = [(a, b) for a in A.objects for b in B.objects if P.obj_map[a] == Q.obj_map[b]]
    present = set(objs)
    specs = []
    for alpha in A.morphisms:
        for beta in B.morphisms:
            if P.mor_map[alpha] != Q.mor_map[beta]:
                continue
            d = (A.dom[alpha], B.dom[beta])
            c = (A.cod[alpha], B.cod[beta])
            if d in present and c in present:
                specs.append(((alpha, beta), d, c))
    return build_category(
        objs, specs,
        lambda ab: (A.identity[ab[0]], B.identity[ab[1]]),
        lambda g, f: (A.comp(g[0], f[0]), B.comp(g[1], f[1])),
        name=name or f"{A.name}×_{P.target.name}{B.name}",
    )


def comma_probe(C: FinCategory, c: int) -> Tuple[int, int, List[int]]:
    """π₀ and integral H₁ of the 2-truncated nerve of Tw(C) ×_C C/c (domain projection)"""
    from .sset import homology, nerve_truncate

    T = twisted_arrow(C)
    S = slice_over(C, c)
    comma = pullback(tw_domain_projection(C, T), slice_projection(C, S),
                     name=f"Tw({C.name})×{S.name}")
    pi0, rank, torsion = homology(nerve_truncate(comma, 2))
    logger.info(f"comma probe {C.name}@{C.obj_label(c)}: {comma!r} -> ({pi0}, {rank}, {torsion})")
    return pi0, rank, torsion


# --- Functors and natural transformations ---

class Functor:
    def __init__(self, source: FinCategory, target: FinCategory,
                 obj_map: Sequence[int], mor_map: Sequence[int], name: str = ''):
        self.source = source
        self.target = target
        self.obj_map = tuple(obj_map)
        self.mor_map = tuple(mor_map)
        self.name = name

    def __repr__(self):
        return f"Functor({self.name!r}: {self.source.name} -> {self.target.name})"

    def __eq__(self, other):
        if not isinstance(other, Functor):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.obj_map == other.obj_map and self.mor_map == other.mor_map)

    def __hash__(self):
        return hash((self.obj_map, self.mor_map))

    def ob(self, x: int) -> int:
        return self.obj_map[x]

    def __call__(self, f: int) -> int:
        return self.mor_map[f]


def identity_functor(C: FinCategory) -> Functor:
    return Functor(C, C, list(C.objects), list(C.morphisms), name=f"id_{C.name}")


def compose_functors(G: Functor, F: Functor) -> Functor:
    """G∘F"""
    if F.target != G.source:
        raise CategoryError(f"cannot compose {G!r} after {F!r}")
    return Functor(F.source, G.target,
                   [G.obj_map[y] for y in F.obj_map],
                   [G.mor_map[g] for g in F.mor_map],
                   name=f"{G.name}∘{F.name}")


def check_functor(F: Functor) -> Report:
    S, T = F.source, F.target
    failures = []
    for f in S.morphisms:
        Ff = F.mor_map[f]
        if T.dom[Ff] != F.obj_map[S.dom[f]] or T.cod[Ff] != F.obj_map[S.cod[f]]:
            failures.append(f"dom/cod not preserved at {S.label(f)}")
    for x in S.objects:
        if F.mor_map[S.identity[x]] != T.identity[F.obj_map[x]]:
            failures.append(f"identity not preserved at {S.obj_label(x)}")
    if not failures:
        for g, f in S.composable_pairs():
            if F.mor_map[S.comp(g, f)] != T.comp(F.mor_map[g], F.mor_map[f]):
                failures.append(f"composition not preserved at ({S.label(g)}, {S.label(f)})")
    return make_report(f"functor {F.name}", 'functor laws', failures)


class NatTransformation:
    def __init__(self, source_functor: Functor, target_functor: Functor,
                 components: Sequence[int], name: str = ''):
        self.source_functor = source_functor
        self.target_functor = target_functor
        self.components = tuple(components)
        self.name = name

    def __repr__(self):
        return f"NatTransformation({self.name!r}: {self.source_functor.name} => {self.target_functor.name})"

    def __getitem__(self, x: int) -> int:
        return self.components[x]


def identity_transformation(F: Functor) -> NatTransformation:
    return NatTransformation(F, F, [F.target.identity[F.obj_map[x]] for x in F.source.objects],
                             name=f"id_{F.name}")


def vertical_compose(beta: NatTransformation, alpha: NatTransformation) -> NatTransformation:
    """β·α for α: F => G, β: G => H"""
    T = alpha.source_functor.target
    return NatTransformation(alpha.source_functor, beta.target_functor,
                             [T.comp(b, a) for b, a in zip(beta.components, alpha.components)],
                             name=f"{beta.name}·{alpha.name}")


def whisker_left(alpha: NatTransformation, K: Functor) -> NatTransformation:
    """α K: components α_{K(c)}"""
    return NatTransformation(compose_functors(alpha.source_functor, K),
                             compose_functors(alpha.target_functor, K),
                             [alpha.components[K.obj_map[c]] for c in K.source.objects],
                             name=f"{alpha.name}{K.name}")


def whisker_right(H: Functor, alpha: NatTransformation) -> NatTransformation:
    """H α: components H(α_c)"""
    return NatTransformation(compose_functors(H, alpha.source_functor),
                             compose_functors(H, alpha.target_functor),
                             [H.mor_map[a] for a in alpha.components],
                             name=f"{H.name}{alpha.name}")


def check_nat_trans(alpha: NatTransformation) -> Report:
    F, G = alpha.source_functor, alpha.target_functor
    S, T = F.source, F.target
    failures = []
    if G.source != S or G.target != T:
        failures.append('source and target functors have different ends')
        return make_report(f"transformation {alpha.name}", 'naturality', failures)
    for x in S.objects:
        a = alpha.components[x]
        if T.dom[a] != F.obj_map[x] or T.cod[a] != G.obj_map[x]:
            failures.append(f"component at {S.obj_label(x)} has wrong dom/cod")
    if not failures:
        for f in S.morphisms:
            left = T.comp(alpha.components[S.cod[f]], F.mor_map[f])
            right = T.comp(G.mor_map[f], alpha.components[S.dom[f]])
            if left != right:
                failures.append(f"naturality square fails at {S.label(f)}")
    return make_report(f"transformation {alpha.name}", 'naturality', failures)
