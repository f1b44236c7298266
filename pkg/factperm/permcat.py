import itertools
import logging
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple, Union

from sympy.combinatorics import Permutation

from .errors import BoundError, CoherenceError, PermutativeError
from .fincat import FinCategory, validate_category
from .relcat import RelCategory, RelFunctor, validate_relcat
from .schemas import PermCategorySchema, Report, make_report

logger = logging.getLogger(__name__)

SORTS = ('bubble', 'insertion')


class PermRelCategory:
    """
    A permutative relative category
    The tensor may be partial (None outside a truncation bound); every law check
    quantifies over the tuples whose tensors are defined.
    """
    def __init__(self, rel: RelCategory,
                 tensor_obj: Callable[[int, int], Optional[int]],
                 tensor_mor: Callable[[int, int], Optional[int]],
                 unit: int,
                 braid: Callable[[int, int], Optional[int]],
                 bound: Optional[int] = None, name: str = ''):
        self.rel = rel
        self._tensor_obj = tensor_obj
        self._tensor_mor = tensor_mor
        self.unit = unit
        self._braid = braid
        self.bound = bound
        self.name = name or rel.name
        self._obj_cache: Dict[Tuple[int, int], Optional[int]] = {}
        self._mor_cache: Dict[Tuple[int, int], Optional[int]] = {}
        self._symmetry_cache: Dict[Tuple, Optional[int]] = {}

    def __repr__(self):
        bound = '' if self.bound is None else f", bound={self.bound}"
        return f"PermRelCategory({self.name!r}, objects={len(self.base.obj_keys)}{bound})"

    @property
    def base(self) -> FinCategory:
        return self.rel.base

    @property
    def weq(self) -> frozenset:
        return self.rel.weq

    def is_weq(self, f: int) -> bool:
        return self.rel.is_weq(f)

    def tensor(self, x: int, y: int) -> Optional[int]:
        key = (x, y)
        if key not in self._obj_cache:
            self._obj_cache[key] = self._tensor_obj(x, y)
        return self._obj_cache[key]

    def tensor_mor(self, f: int, g: int) -> Optional[int]:
        key = (f, g)
        if key not in self._mor_cache:
            self._mor_cache[key] = self._tensor_mor(f, g)
        return self._mor_cache[key]

    def braid(self, x: int, y: int) -> Optional[int]:
        return self._braid(x, y)

    def tensor_all(self, xs: Sequence[int]) -> Optional[int]:
        result = self.unit
        for x in xs:
            if result is None:
                return None
            result = self.tensor(result, x)
        return result

    def tensor_mor_all(self, fs: Sequence[int]) -> Optional[int]:
        result = self.base.identity[self.unit]
        for f in fs:
            if result is None:
                return None
            result = self.tensor_mor(result, f)
        return result


def from_tables(rel: RelCategory, tensor_obj: Dict[Tuple[int, int], int],
                tensor_mor: Dict[Tuple[int, int], int], unit: int,
                braid: Dict[Tuple[int, int], int], name: str = '') -> PermRelCategory:
    return PermRelCategory(rel, lambda x, y: tensor_obj.get((x, y)), lambda f, g: tensor_mor.get((f, g)),
                           unit, lambda x, y: braid.get((x, y)), name=name)


def _lookup(index: Dict[Hashable, int], key: Hashable, what: str, row) -> int:
    try:
        return index[key]
    except KeyError:
        raise PermutativeError(f"{what} table names unknown id {key!r}", tuple(row))


def load_permutative(raw, marking: Optional[str] = None) -> PermRelCategory:
    """Parse and build without auditing the permutative laws"""
    schema = raw if isinstance(raw, PermCategorySchema) else PermCategorySchema.model_validate(raw)
    base = validate_category(schema)
    if marking is None:
        weq_keys = schema.weq
    elif marking in schema.markings:
        weq_keys = schema.markings[marking]
    else:
        raise PermutativeError(f"unknown marking {marking!r}; known: {', '.join(sorted(schema.markings))}")
    mor_index = base.mor_index
    weq = [_lookup(mor_index, k, 'weq', [k]) for k in weq_keys]
    name = schema.name or ''
    if marking:
        name = f"{name}[{marking}]"
    rel = validate_relcat(base, weq, name=name)
    obj_index = base.obj_index
    tensor_obj = {}
    for row in schema.tensor_obj:
        if len(row) != 3:
            raise PermutativeError(f"tensor_obj rows are [x, y, x⊗y], got {row}", tuple(row))
        x, y, xy = (_lookup(obj_index, k, 'tensor_obj', row) for k in row)
        tensor_obj[(x, y)] = xy
    tensor_mor = {}
    for row in schema.tensor_mor:
        if len(row) != 3:
            raise PermutativeError(f"tensor_mor rows are [f, g, f⊗g], got {row}", tuple(row))
        f, g, fg = (_lookup(mor_index, k, 'tensor_mor', row) for k in row)
        tensor_mor[(f, g)] = fg
    braid = {}
    for row in schema.braid:
        if len(row) != 3:
            raise PermutativeError(f"braid rows are [x, y, b], got {row}", tuple(row))
        x = _lookup(obj_index, row[0], 'braid', row)
        y = _lookup(obj_index, row[1], 'braid', row)
        braid[(x, y)] = _lookup(mor_index, row[2], 'braid', row)
    unit = _lookup(obj_index, schema.unit, 'unit', [schema.unit])
    return from_tables(rel, tensor_obj, tensor_mor, unit, braid, name=name)


def validate_permutative(raw, marking: Optional[str] = None) -> PermRelCategory:
    C = load_permutative(raw, marking)
    report = check_permutative(C)
    if not report.passed:
        raise PermutativeError(f"{C.name!r} is not permutative: {report.counterexamples[0]}",
                               tuple(report.counterexamples))
    logger.info(f"validated {C!r}")
    return C


# --- laws ---

def _tensor_defined(C: PermRelCategory, f: int, g: int) -> Optional[int]:
    B = C.base
    if C.tensor(B.dom[f], B.dom[g]) is None or C.tensor(B.cod[f], B.cod[g]) is None:
        return None
    return C.tensor_mor(f, g)


def permutative_violations(C: PermRelCategory) -> List[str]:
    B = C.base
    label, olabel = B.label, B.obj_label
    failures = []
    objs = list(B.objects)
    mors = list(B.morphisms)
    unit_id = B.identity[C.unit]

    # totality within bound: missing entries are failures when no bound is declared
    pairs = []
    for x, y in itertools.product(objs, repeat=2):
        if C.tensor(x, y) is None:
            if C.bound is None:
                failures.append(f"tensor undefined on ({olabel(x)}, {olabel(y)})")
            continue
        pairs.append((x, y))
        if C.braid(x, y) is None:
            failures.append(f"braid missing at ({olabel(x)}, {olabel(y)})")
    defined = {}
    for a, c in pairs:
        for f in B.out_of(a):
            for g in B.out_of(c):
                if C.tensor(B.cod[f], B.cod[g]) is None:
                    continue
                fg = C.tensor_mor(f, g)
                if fg is None:
                    failures.append(f"tensor undefined on ({label(f)}, {label(g)})")
                else:
                    defined[(f, g)] = fg
    if failures:
        return failures

    # unit
    for x in objs:
        if C.tensor(C.unit, x) != x or C.tensor(x, C.unit) != x:
            failures.append(f"unit law fails at {olabel(x)}")
    for f in mors:
        if defined.get((unit_id, f)) != f or defined.get((f, unit_id)) != f:
            failures.append(f"unit law fails at {label(f)}")

    # bifunctor
    right_ok = {x: [y for a, y in pairs if a == x] for x in objs}
    left_ok = {x: [a for a, y in pairs if y == x] for x in objs}
    for (f, g), fg in defined.items():
        if B.dom[fg] != C.tensor(B.dom[f], B.dom[g]) or B.cod[fg] != C.tensor(B.cod[f], B.cod[g]):
            failures.append(f"{label(f)}⊗{label(g)} has wrong dom/cod")
    for x, y in pairs:
        if defined.get((B.identity[x], B.identity[y])) != B.identity[C.tensor(x, y)]:
            failures.append(f"id⊗id is not the identity at ({olabel(x)}, {olabel(y)})")
    for g, f in B.composable_pairs():
        gf = None
        for y in right_ok[B.dom[f]]:
            idy = B.identity[y]
            if (g, idy) in defined and (f, idy) in defined:
                gf = B.comp(g, f) if gf is None else gf
                if defined[(gf, idy)] != B.comp(defined[(g, idy)], defined[(f, idy)]):
                    failures.append(f"(-)⊗{olabel(y)} fails composition at ({label(g)}, {label(f)})")
        for y in left_ok[B.dom[f]]:
            idy = B.identity[y]
            if (idy, g) in defined and (idy, f) in defined:
                gf = B.comp(g, f) if gf is None else gf
                if defined[(idy, gf)] != B.comp(defined[(idy, g)], defined[(idy, f)]):
                    failures.append(f"{olabel(y)}⊗(-) fails composition at ({label(g)}, {label(f)})")
    for (f, g), fg in defined.items():
        legs = [defined.get((f, B.identity[B.cod[g]])), defined.get((B.identity[B.dom[f]], g)),
                defined.get((B.identity[B.cod[f]], g)), defined.get((f, B.identity[B.dom[g]]))]
        if legs[0] is not None and legs[1] is not None and B.comp(legs[0], legs[1]) != fg:
            failures.append(f"interchange fails at ({label(f)}, {label(g)})")
        if legs[2] is not None and legs[3] is not None and B.comp(legs[2], legs[3]) != fg:
            failures.append(f"interchange fails at ({label(f)}, {label(g)})")

    # associativity
    for x, y in itertools.product(objs, repeat=2):
        xy = C.tensor(x, y)
        if xy is None:
            continue
        for z in objs:
            yz = C.tensor(y, z)
            left = C.tensor(xy, z)
            right = None if yz is None else C.tensor(x, yz)
            if left is not None and right is not None and left != right:
                failures.append(f"associativity fails on ({olabel(x)}, {olabel(y)}, {olabel(z)})")
    by_first = {}
    for (f, g), fg in defined.items():
        by_first.setdefault(f, []).append((g, fg))
    for (f, g), fg in defined.items():
        for h, gh in by_first.get(g, ()):
            left = defined.get((fg, h))
            right = defined.get((f, gh))
            if left is not None and right is not None and left != right:
                failures.append(f"associativity fails on ({label(f)}, {label(g)}, {label(h)})")

    # braid
    for x, y in itertools.product(objs, repeat=2):
        xy = C.tensor(x, y)
        if xy is None:
            continue
        b = C.braid(x, y)
        if B.dom[b] != xy or B.cod[b] != C.tensor(y, x):
            failures.append(f"braid({olabel(x)}, {olabel(y)}) has wrong dom/cod")
            continue
        back = C.braid(y, x)
        if back is None or B.comp(back, b) != B.identity[xy]:
            failures.append(f"braid({olabel(y)}, {olabel(x)})∘braid({olabel(x)}, {olabel(y)}) is not the identity")
        if not C.is_weq(b):
            failures.append(f"braid({olabel(x)}, {olabel(y)}) is not weq")
    for x, y, z in itertools.product(objs, repeat=3):
        xy = C.tensor(x, y)
        xyz = None if xy is None else C.tensor(xy, z)
        if xyz is None:
            continue
        b_yz, b_xz = C.braid(y, z), C.braid(x, z)
        if b_yz is None or b_xz is None:
            continue
        inner = _tensor_defined(C, B.identity[x], b_yz)
        outer = _tensor_defined(C, b_xz, B.identity[y])
        if inner is None or outer is None:
            continue
        if C.braid(xy, z) != B.comp(outer, inner):
            failures.append(f"hexagon fails on ({olabel(x)}, {olabel(y)}, {olabel(z)})")
    for (f, g), fg in defined.items():
        gf = defined.get((g, f))
        if gf is None:
            continue
        left = B.comp(C.braid(B.cod[f], B.cod[g]), fg)
        right = B.comp(gf, C.braid(B.dom[f], B.dom[g]))
        if left != right:
            failures.append(f"braid is not natural at ({label(f)}, {label(g)})")

    # tensor is a relative functor
    for (f, g), fg in defined.items():
        if C.is_weq(f) and C.is_weq(g) and not C.is_weq(fg):
            failures.append(f"{label(f)}⊗{label(g)} of weqs is not weq")
    return failures


def check_permutative(C: PermRelCategory) -> Report:
    bounds = {} if C.bound is None else {'bound': C.bound}
    failures = permutative_violations(C)
    logger.info(f"permutative laws on {C!r}: {len(failures)} failures")
    notes = [] if C.bound is None else [f"tensor partial; laws checked on tuples within bound {C.bound}"]
    return make_report(f"permutative {C.name}", 'permutative relative category', failures, bounds, notes)


# --- iterated tensors and symmetries ---

def iterated_tensor(C: PermRelCategory, S: Sequence[Hashable],
                    assignment: Union[Dict[Hashable, int], Callable[[Hashable], int]]) -> int:
    """⊗_{s∈S} C_s, left-nested in the order of S; the unit when S is empty"""
    get = assignment.__getitem__ if isinstance(assignment, dict) else assignment
    result = C.tensor_all([get(s) for s in S])
    if result is None:
        raise BoundError(f"iterated tensor over {list(S)} leaves the bound of {C.name!r}")
    return result


def transposition_word(arrangement: Sequence[int], sort: str = 'bubble') -> List[int]:
    """
    Adjacent swaps (by position) that sort `arrangement` ascending
    bubble pushes larger elements right; insertion sinks each new element into the sorted prefix.
    """
    arr = list(arrangement)
    word = []
    if sort == 'bubble':
        for end in range(len(arr) - 1, 0, -1):
            for p in range(end):
                if arr[p] > arr[p + 1]:
                    arr[p], arr[p + 1] = arr[p + 1], arr[p]
                    word.append(p)
    elif sort == 'insertion':
        for i in range(1, len(arr)):
            p = i
            while p > 0 and arr[p - 1] > arr[p]:
                arr[p - 1], arr[p] = arr[p], arr[p - 1]
                word.append(p - 1)
                p -= 1
    else:
        raise ValueError(f"unknown sort {sort!r}; expected one of {', '.join(SORTS)}")
    return word


def symmetry_along(C: PermRelCategory, xs: Sequence[int], arrangement: Sequence[int],
                   word: Sequence[int]) -> Optional[int]:
    """
    Compose braid whiskerings id ⊗ braid ⊗ id along `word`, starting from
    ⊗_p xs[arrangement[p]]. Returns None when a tensor leaves the bound.
    """
    B = C.base
    arr = list(arrangement)
    current = [xs[i] for i in arr]
    whole = C.tensor_all(current)
    if whole is None:
        return None
    result = B.identity[whole]
    for p in word:
        prefix = C.tensor_all(current[:p])
        suffix = C.tensor_all(current[p + 2:])
        b = C.braid(current[p], current[p + 1])
        if prefix is None or suffix is None or b is None:
            return None
        step = C.tensor_mor_all([B.identity[prefix], b, B.identity[suffix]])
        if step is None:
            return None
        result = B.comp(step, result)
        current[p], current[p + 1] = current[p + 1], current[p]
        arr[p], arr[p + 1] = arr[p + 1], arr[p]
    return result


def arrangement_symmetry(C: PermRelCategory, xs: Sequence[int], arrangement: Sequence[int]) -> Optional[int]:
    """
    The canonical isomorphism ⊗_p xs[arrangement[p]] -> ⊗_i xs[i]
    Computed by bubble sort and cross-checked against insertion sort.
    """
    key = (tuple(xs), tuple(arrangement))
    if key in C._symmetry_cache:
        return C._symmetry_cache[key]
    first = symmetry_along(C, xs, arrangement, transposition_word(arrangement, 'bubble'))
    second = symmetry_along(C, xs, arrangement, transposition_word(arrangement, 'insertion'))
    if first != second:
        raise CoherenceError(f"symmetry in {C.name!r} depends on the transposition decomposition",
                             (tuple(xs), tuple(arrangement)))
    C._symmetry_cache[key] = first
    return first


def canonical_symmetry(C: PermRelCategory, sigma: Union[Permutation, Sequence[int]],
                       xs: Sequence[int]) -> int:
    """The isomorphism ⊗_i X_{σ⁻¹(i)} -> ⊗_i X_i for σ a permutation of {0..k-1}"""
    sigma = sigma if isinstance(sigma, Permutation) else Permutation(list(sigma))
    if sigma.size < len(xs):
        sigma = Permutation(sigma.array_form, size=len(xs))
    arrangement = (~sigma).array_form
    result = arrangement_symmetry(C, xs, arrangement)
    if result is None:
        raise BoundError(f"symmetry on {len(xs)} factors leaves the bound of {C.name!r}")
    return result


def reorder_symmetry(C: PermRelCategory, objects: Dict[Hashable, int],
                     order: Sequence[Hashable]) -> Optional[int]:
    """⊗ over `order` -> ⊗ over sorted(order) for keyed factors"""
    ranked = sorted(order)
    position = {k: i for i, k in enumerate(ranked)}
    return arrangement_symmetry(C, [objects[k] for k in ranked], [position[k] for k in order])


def symmetry_pseudofunctor(C: PermRelCategory, u, xs: Sequence[int]) -> Tuple[Optional[int], ...]:
    """C^•(u): (X_i)_{i∈n̲} -> (⊗_{i∈u⁻¹(j)} X_i)_{j∈m̲}"""
    return tuple(C.tensor_all([xs[i - 1] for i in u.preimage(j)]) for j in range(1, u.m + 1))


def pseudofunctor_coherence(C: PermRelCategory, u, u2, xs: Sequence[int]) -> Tuple[Optional[int], ...]:
    """
    Components C^•(u2)C^•(u)(X) -> C^•(u2∘u)(X): for each k, the symmetry from
    ⊗_{j∈u2⁻¹(k)} ⊗_{i∈u⁻¹(j)} X_i to ⊗_{i∈(u2∘u)⁻¹(k)} X_i
    """
    keyed = {i: xs[i - 1] for i in range(1, u.n + 1)}
    comps = []
    for k in range(1, u2.m + 1):
        nested = [i for j in u2.preimage(k) for i in u.preimage(j)]
        comps.append(reorder_symmetry(C, keyed, nested))
    return tuple(comps)


def check_symmetry_homomorphism(C: PermRelCategory, xs: Sequence[int]) -> Report:
    """arrangement(b∘c) = arrangement(b) ∘ arrangement(c on the b-permuted inputs)"""
    failures = []
    k = len(xs)
    B = C.base
    for b in itertools.permutations(range(k)):
        for c in itertools.permutations(range(k)):
            bc = [b[c[p]] for p in range(k)]
            whole = arrangement_symmetry(C, xs, bc)
            first = arrangement_symmetry(C, [xs[b[q]] for q in range(k)], c)
            second = arrangement_symmetry(C, xs, b)
            if None in (whole, first, second):
                continue
            if whole != B.comp(second, first):
                failures.append(f"symmetry composite fails for {b} after {c} on {[B.obj_label(x) for x in xs]}")
    return make_report(f"symmetry {C.name}", 'coherence isomorphisms compose', failures, {'factors': k})


# --- strict symmetric monoidal functors ---

def defined_tensors(C: PermRelCategory) -> Dict[Tuple[int, int], int]:
    """(f, g) -> f⊗g for every pair whose domain and codomain tensors are defined"""
    B = C.base
    table = {}
    for a, c in itertools.product(B.objects, repeat=2):
        if C.tensor(a, c) is None:
            continue
        for f in B.out_of(a):
            for g in B.out_of(c):
                if C.tensor(B.cod[f], B.cod[g]) is not None:
                    fg = C.tensor_mor(f, g)
                    if fg is not None:
                        table[(f, g)] = fg
    return table


def check_strict_sm_functor(F: RelFunctor, source: PermRelCategory,
                            target: PermRelCategory) -> Report:
    S, T = source.base, target.base
    failures = []
    if F.ob(source.unit) != target.unit:
        failures.append(f"unit goes to {T.obj_label(F.ob(source.unit))}, not the unit")
    for x, y in itertools.product(S.objects, repeat=2):
        xy = source.tensor(x, y)
        if xy is None:
            continue
        image = target.tensor(F.ob(x), F.ob(y))
        if image != F.ob(xy):
            failures.append(f"F({S.obj_label(x)}⊗{S.obj_label(y)}) != F({S.obj_label(x)})⊗F({S.obj_label(y)})")
            continue
        if F(source.braid(x, y)) != target.braid(F.ob(x), F.ob(y)):
            failures.append(f"braid not preserved at ({S.obj_label(x)}, {S.obj_label(y)})")
    for (f, g), fg in defined_tensors(source).items():
        if F(fg) != target.tensor_mor(F(f), F(g)):
            failures.append(f"F({S.label(f)}⊗{S.label(g)}) != F({S.label(f)})⊗F({S.label(g)})")
    bounds = {} if source.bound is None else {'bound': source.bound}
    return make_report(f"strict-sm {F.name}", 'strict symmetric monoidal functor', failures, bounds)
