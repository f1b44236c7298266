import itertools
import logging
from collections import defaultdict
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

from .errors import FactpermError
from .fincat import FinCategory, build_category, twisted_arrow
from .schemas import Report, make_report

logger = logging.getLogger(__name__)

# basepoint of every ⟨n⟩ = {*, 1, ..., n} is written 0 in tables


class PointedMap:
    """A based map ⟨n⟩ -> ⟨m⟩; table[i-1] is the image of i, 0 is the basepoint"""
    __slots__ = ('n', 'm', 'table')

    def __init__(self, n: int, m: int, table: Sequence[int]):
        table = tuple(table)
        if n < 0 or m < 0 or len(table) != n:
            raise FactpermError(f"table of length {len(table)} does not describe a map ⟨{n}⟩ -> ⟨{m}⟩")
        if any(not 0 <= a <= m for a in table):
            raise FactpermError(f"table {table} leaves ⟨{m}⟩", table)
        self.n = n
        self.m = m
        self.table = table

    def __repr__(self):
        return self.format()

    def __eq__(self, other):
        return isinstance(other, PointedMap) and (self.n, self.m, self.table) == (other.n, other.m, other.table)

    def __lt__(self, other):
        return (self.n, self.m, self.table) < (other.n, other.m, other.table)

    def __hash__(self):
        return hash((self.n, self.m, self.table))

    def __call__(self, i: int) -> int:
        return 0 if i == 0 else self.table[i - 1]

    def format(self) -> str:
        return f"{self.n} {self.m} : {' '.join(str(a) for a in self.table)}".rstrip()

    @classmethod
    def parse(cls, text: str) -> 'PointedMap':
        head, _, body = text.partition(':')
        try:
            n, m = (int(t) for t in head.split())
            table = [int(t) for t in body.split()]
        except ValueError:
            raise FactpermError(f"cannot parse pointed map {text!r}; expected 'n m : a1 ... an'")
        return cls(n, m, table)

    def preimage(self, j: int) -> Tuple[int, ...]:
        return tuple(i for i in range(1, self.n + 1) if self.table[i - 1] == j)

    def compose(self, f: 'PointedMap') -> 'PointedMap':
        """self∘f"""
        if f.m != self.n:
            raise FactpermError(f"cannot compose {self} after {f}")
        return PointedMap(f.n, self.m, [self(a) for a in f.table])

    def is_inert(self) -> bool:
        return all(len(self.preimage(j)) == 1 for j in range(1, self.m + 1))

    def is_strongly_inert(self) -> bool:
        if not self.is_inert():
            return False
        sections = [self.preimage(j)[0] for j in range(1, self.m + 1)]
        return sections == sorted(sections)

    def is_active(self) -> bool:
        return all(a != 0 for a in self.table)


def identity(n: int) -> PointedMap:
    return PointedMap(n, n, range(1, n + 1))


def fold(n: int) -> PointedMap:
    """the active map ⟨n⟩ -> ⟨1⟩"""
    return PointedMap(n, 1, [1] * n)


def rho(n: int, S: Iterable[int]) -> PointedMap:
    """ρ^S: ⟨n⟩ -> ⟨|S|⟩, order-preserving on S, basepoint elsewhere"""
    S = sorted(set(S))
    if any(not 1 <= s <= n for s in S):
        raise FactpermError(f"{S} is not a subset of {{1..{n}}}")
    position = {s: k for k, s in enumerate(S, start=1)}
    return PointedMap(n, len(S), [position.get(i, 0) for i in range(1, n + 1)])


def classify(f: PointedMap) -> Dict[str, bool]:
    return {'inert': f.is_inert(), 'strongly_inert': f.is_strongly_inert(), 'active': f.is_active()}


def factorize(f: PointedMap) -> Tuple[PointedMap, PointedMap]:
    """f = f_act ∘ f_inert with f_inert strongly inert and f_act active"""
    support = [i for i in range(1, f.n + 1) if f(i) != 0]
    f_inert = rho(f.n, support)
    f_act = PointedMap(len(support), f.m, [f(i) for i in support])
    return f_inert, f_act


def all_maps(n: int, m: int) -> Iterator[PointedMap]:
    """every map ⟨n⟩ -> ⟨m⟩ in lexicographic table order"""
    for table in itertools.product(range(m + 1), repeat=n):
        yield PointedMap(n, m, table)


def active_maps(n: int, m: int) -> Iterator[PointedMap]:
    for table in itertools.product(range(1, m + 1), repeat=n):
        yield PointedMap(n, m, table)


def strongly_inert_maps(n: int, k: int) -> Iterator[PointedMap]:
    for S in itertools.combinations(range(1, n + 1), k):
        yield rho(n, S)


def factorizations(f: PointedMap) -> List[Tuple[PointedMap, PointedMap]]:
    """Every (strongly inert, active) factorization of f"""
    found = []
    for k in range(f.n + 1):
        for inert in strongly_inert_maps(f.n, k):
            # a strongly inert map has a section, which forces the active factor
            table = [f(inert.preimage(j)[0]) for j in range(1, k + 1)]
            if 0 in table:
                continue
            act = PointedMap(k, f.m, table)
            if act.compose(inert) == f:
                found.append((inert, act))
    return found


def wedge(f: PointedMap, g: PointedMap) -> PointedMap:
    """f ∨ g: ⟨n+k⟩ -> ⟨m+l⟩"""
    return PointedMap(f.n + g.n, f.m + g.m,
                      list(f.table) + [0 if a == 0 else f.m + a for a in g.table])


def wedge_all(maps: Sequence[PointedMap]) -> PointedMap:
    result = identity(0)
    for f in maps:
        result = wedge(result, f)
    return result


def swap(n: int, m: int) -> PointedMap:
    """⟨n⟩∨⟨m⟩ ≅ ⟨m⟩∨⟨n⟩ interchanging the summands"""
    return PointedMap(n + m, n + m, [m + i for i in range(1, n + 1)] + list(range(1, m + 1)))


def inclusion_leg(f: PointedMap, j: int) -> PointedMap:
    """⟨|f⁻¹(j)|⟩ -> ⟨n⟩ identifying {1..k} with f⁻¹(j) in order"""
    return PointedMap(len(f.preimage(j)), f.n, f.preimage(j))


def check_factorization(bound: int) -> Report:
    failures = []
    checked = 0
    for n in range(bound + 1):
        for k in range(n + 1):
            if [f for f in all_maps(n, k) if f.is_strongly_inert()] != sorted(strongly_inert_maps(n, k)):
                failures.append(f"strongly inert maps ⟨{n}⟩ -> ⟨{k}⟩ are not exactly the ρ^S")
        for m in range(bound + 1):
            for f in all_maps(n, m):
                checked += 1
                found = factorizations(f)
                if found != [factorize(f)]:
                    failures.append(f"{f}: {len(found)} factorizations, factorize gave {factorize(f)}")
    logger.info(f"factorization uniqueness checked on {checked} maps")
    return make_report('finstar.factorization', 'unique strongly-inert/active factorization',
                       failures, {'max_n': bound})


def check_rho_compatibility(bound: int) -> Report:
    failures = []
    for n in range(bound + 1):
        subsets = [frozenset(c) for k in range(n + 1) for c in itertools.combinations(range(1, n + 1), k)]
        for T in subsets:
            positions = {t: k for k, t in enumerate(sorted(T), start=1)}
            for S in subsets:
                if not S <= T:
                    continue
                inner = rho(len(T), [positions[s] for s in S])
                if inner.compose(rho(n, T)) != rho(n, S):
                    failures.append(f"ρ^{sorted(S)} != ρ∘ρ^{sorted(T)} on ⟨{n}⟩")
    return make_report('finstar.rho', 'ρ^S through ρ^T for S ⊆ T', failures, {'max_n': bound})


def check_wedge_laws(bound: int) -> Report:
    failures = []
    unit = identity(0)
    maps = [f for n in range(bound + 1) for m in range(bound + 1) for f in all_maps(n, m)]
    shapes = defaultdict(list)
    for f in maps:
        shapes[(f.n, f.m)].append(f)
    for f in maps:
        if wedge(f, unit) != f or wedge(unit, f) != f:
            failures.append(f"unit law fails for {f}")
        if f.is_active() and not wedge(f, f).is_active():
            failures.append(f"wedge of active {f} is not active")
    triples = 0
    # every triple whose wedge stays inside ⟨bound⟩
    for a, b, c in itertools.product(shapes, repeat=3):
        if a[0] + b[0] + c[0] > bound or a[1] + b[1] + c[1] > bound:
            continue
        for f, g, h in itertools.product(shapes[a], shapes[b], shapes[c]):
            triples += 1
            if wedge(wedge(f, g), h) != wedge(f, wedge(g, h)):
                failures.append(f"associativity fails on {f}, {g}, {h}")
    for n in range(bound + 1):
        for m in range(bound + 1):
            if swap(m, n).compose(swap(n, m)) != identity(n + m):
                failures.append(f"swap({n},{m}) is not an involution")
    return make_report('finstar.wedge', 'coproduct of based sets', failures,
                       {'max_n': bound, 'triples': triples})


# --- Δ and ∇ ---

def monotone_maps(n: int, m: int) -> Iterator[Tuple[int, ...]]:
    """poset maps [n] -> [m] as tables of length n+1, lexicographic"""
    for table in itertools.combinations_with_replacement(range(m + 1), n + 1):
        yield table


class MonotoneMap:
    __slots__ = ('n', 'm', 'table')

    def __init__(self, n: int, m: int, table: Sequence[int]):
        table = tuple(table)
        if len(table) != n + 1 or any(not 0 <= a <= m for a in table) or list(table) != sorted(table):
            raise FactpermError(f"{table} is not a poset map [{n}] -> [{m}]")
        self.n, self.m, self.table = n, m, table

    def __repr__(self):
        return f"[{self.n}]->[{self.m}] {self.table}"

    def __eq__(self, other):
        return isinstance(other, MonotoneMap) and (self.n, self.m, self.table) == (other.n, other.m, other.table)

    def __hash__(self):
        return hash((self.n, self.m, self.table))

    def compose(self, u: 'MonotoneMap') -> 'MonotoneMap':
        return MonotoneMap(u.n, self.m, [self.table[a] for a in u.table])

    def is_inert(self) -> bool:
        return all(self.table[i] == self.table[0] + i for i in range(self.n + 1))

    def is_active(self) -> bool:
        return self.table[0] == 0 and self.table[-1] == self.m


class NablaMap:
    """A poset map [[n]] -> [[m]] fixing -1 and sending n to m; table[x+1] is the image of x"""
    __slots__ = ('n', 'm', 'table')

    def __init__(self, n: int, m: int, table: Sequence[int]):
        table = tuple(table)
        if len(table) != n + 2 or list(table) != sorted(table) or any(not -1 <= a <= m for a in table):
            raise FactpermError(f"{table} is not a poset map [[{n}]] -> [[{m}]]")
        if table[0] != -1 or table[-1] != m:
            raise FactpermError(f"{table} does not preserve the extrema of [[{n}]]")
        self.n, self.m, self.table = n, m, table

    def __repr__(self):
        return f"[[{self.n}]]->[[{self.m}]] {self.table}"

    def __eq__(self, other):
        return isinstance(other, NablaMap) and (self.n, self.m, self.table) == (other.n, other.m, other.table)

    def __hash__(self):
        return hash((self.n, self.m, self.table))

    def __call__(self, x: int) -> int:
        return self.table[x + 1]

    def compose(self, f: 'NablaMap') -> 'NablaMap':
        return NablaMap(f.n, self.m, [self(a) for a in f.table])

    def preimage(self, y: int) -> Tuple[int, ...]:
        return tuple(x for x in range(-1, self.n + 1) if self(x) == y)

    def is_inert(self) -> bool:
        # non-extremum elements of the target have exactly one preimage
        return all(len(self.preimage(y)) == 1 for y in range(0, self.m))

    def is_active(self) -> bool:
        return len(self.preimage(-1)) == 1 and len(self.preimage(self.m)) == 1


def nabla_maps(n: int, m: int) -> Iterator[NablaMap]:
    for middle in itertools.combinations_with_replacement(range(-1, m + 1), n):
        yield NablaMap(n, m, (-1,) + middle + (m,))


def delta_to_nabla(u: MonotoneMap) -> NablaMap:
    """
    φ(u): [[m]] -> [[n]] for u: [n] -> [m]
    x ∈ [[m]] stands for the down-set {i <= x}; its preimage is the down-set of the returned element.
    """
    table = []
    for x in range(-1, u.m + 1):
        below = [i for i in range(u.n + 1) if u.table[i] <= x]
        table.append(max(below) if below else -1)
    return NablaMap(u.m, u.n, table)


def check_nabla_isomorphism(bound: int) -> Report:
    failures = []
    for n in range(bound + 1):
        ident = MonotoneMap(n, n, range(n + 1))
        if delta_to_nabla(ident) != NablaMap(n, n, range(-1, n + 1)):
            failures.append(f"φ(id[{n}]) is not the identity")
        for m in range(bound + 1):
            images = [delta_to_nabla(MonotoneMap(n, m, t)) for t in monotone_maps(n, m)]
            if len(set(images)) != len(images) or set(images) != set(nabla_maps(m, n)):
                failures.append(f"φ is not bijective on Hom([{n}],[{m}])")
            for t in monotone_maps(n, m):
                u = MonotoneMap(n, m, t)
                phi_u = delta_to_nabla(u)
                if u.is_inert() != phi_u.is_inert():
                    failures.append(f"inert mismatch at {u}")
                if u.is_active() != phi_u.is_active():
                    failures.append(f"active mismatch at {u}")
                for k in range(bound + 1):
                    for s in monotone_maps(m, k):
                        v = MonotoneMap(m, k, s)
                        if delta_to_nabla(v.compose(u)) != phi_u.compose(delta_to_nabla(v)):
                            failures.append(f"φ fails functoriality on {v}∘{u}")
    return make_report('finstar.nabla', 'Δ^op ≅ ∇ via S ↦ u⁻¹(S)', failures, {'max_n': bound})


# --- truncated active category and its twisted arrows ---

def enumerate_active(N: int) -> FinCategory:
    """Fin_*^act on ⟨0⟩, ..., ⟨N⟩; morphism keys are the PointedMaps"""
    specs = [(f, n, m) for n in range(N + 1) for m in range(N + 1) for f in active_maps(n, m)]
    return build_category(list(range(N + 1)), specs, identity,
                          lambda g, f: g.compose(f), name=f"Act≤{N}")


def enumerate_tw_active(N: int) -> Tuple[FinCategory, FinCategory]:
    """(Tw(Act≤N), Act≤N); the twisted-arrow keys are morphism ids of the second"""
    if N < 0:
        raise FactpermError('truncation bound must be nonnegative')
    act = enumerate_active(N)
    tw = twisted_arrow(act, lazy=N > 2)
    logger.info(f"enumerated {tw!r}")
    return tw, act


def tw_object(tw: FinCategory, act: FinCategory, x: int) -> PointedMap:
    return act.mor_keys[tw.obj_keys[x]]


def tw_morphism(tw: FinCategory, act: FinCategory, f: int) -> Tuple[PointedMap, PointedMap, PointedMap, PointedMap]:
    """(source, target, u, v) as PointedMaps"""
    return tuple(act.mor_keys[k] for k in tw.mor_keys[f])


def tw_find_morphism(tw: FinCategory, act: FinCategory, source: PointedMap, target: PointedMap,
                     u: PointedMap, v: PointedMap) -> int:
    return tw.mor((act.mor(source), act.mor(target), act.mor(u), act.mor(v)))


def tw_find_object(tw: FinCategory, act: FinCategory, f: PointedMap) -> int:
    return tw.obj(act.mor(f))
