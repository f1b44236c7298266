import logging
from math import gcd
from typing import Dict, FrozenSet, Hashable, Iterable, List, Sequence, Tuple

import networkx as nx
import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from .errors import FactpermError
from .fincat import FinCategory, build_category
from .finstar import monotone_maps
from .schemas import Report, SSetSchema, make_report

logger = logging.getLogger(__name__)


class TruncatedSSet:
    """
    A simplicial set truncated at `dimension`
    faces[k][i][s] is the index of d_i of the k-simplex s (k >= 1), and
    degeneracies[k][i][s] the index of s_i of s (k < dimension).
    """
    def __init__(self, dimension: int, simplices: Sequence[Sequence[Hashable]],
                 faces: Sequence[Sequence[Sequence[int]]],
                 degeneracies: Sequence[Sequence[Sequence[int]]], name: str = ''):
        self.dimension = dimension
        self.simplices = [list(level) for level in simplices]
        self.faces = [[list(row) for row in level] for level in faces]
        self.degeneracies = [[list(row) for row in level] for level in degeneracies]
        self.name = name
        self.index: List[Dict[Hashable, int]] = [{s: i for i, s in enumerate(level)} for level in self.simplices]
        self._degenerate: List[FrozenSet[int]] = [frozenset()]
        for k in range(1, dimension + 1):
            self._degenerate.append(frozenset(
                t for row in self.degeneracies[k - 1] for t in row
            ))

    def __repr__(self):
        return f"TruncatedSSet({self.name!r}, counts={[len(l) for l in self.simplices]})"

    def face(self, k: int, i: int, s: int) -> int:
        return self.faces[k][i][s]

    def degen(self, k: int, i: int, s: int) -> int:
        return self.degeneracies[k][i][s]

    def is_degenerate(self, k: int, s: int) -> bool:
        return s in self._degenerate[k]

    def nondegenerate(self, k: int) -> List[int]:
        return [s for s in range(len(self.simplices[k])) if not self.is_degenerate(k, s)]

    def pull_back(self, theta: Sequence[int], l: int, t: int) -> int:
        """θ*(t) for a poset map θ: [k] -> [l]"""
        image = sorted(set(theta))
        dim, current = l, t
        for c in reversed([c for c in range(l + 1) if c not in image]):
            current = self.face(dim, c, current)
            dim -= 1
        squash = [image.index(a) for a in theta]
        for j in range(len(theta) - 1):
            if squash[j] == squash[j + 1]:
                current = self.degen(dim, j, current)
                dim += 1
        return current

    def to_schema(self) -> SSetSchema:
        return SSetSchema(
            dimension=self.dimension,
            simplices=[[_show(s) for s in level] for level in self.simplices],
            faces=self.faces,
            degeneracies=self.degeneracies,
        )

    @classmethod
    def from_schema(cls, schema: SSetSchema) -> 'TruncatedSSet':
        return cls(schema.dimension, schema.simplices, schema.faces, schema.degeneracies)


class MarkedSSet:
    def __init__(self, underlying: TruncatedSSet, marked: Iterable[int]):
        self.underlying = underlying
        self.marked = frozenset(marked)

    def __repr__(self):
        return f"MarkedSSet({self.underlying.name!r}, marked={len(self.marked)})"

    def missing_degenerate(self) -> List[int]:
        X = self.underlying
        return [e for e in range(len(X.simplices[1])) if X.is_degenerate(1, e) and e not in self.marked]


def _show(s) -> str:
    if isinstance(s, tuple):
        return '(' + ','.join(_show(a) for a in s) + ')'
    return str(s)


def check_simplicial_identities(X: TruncatedSSet) -> Report:
    failures = []
    d, s = X.face, X.degen
    for k in range(2, X.dimension + 1):
        for x in range(len(X.simplices[k])):
            for j in range(k + 1):
                for i in range(j):
                    if d(k - 1, i, d(k, j, x)) != d(k - 1, j - 1, d(k, i, x)):
                        failures.append(f"d{i}d{j} != d{j - 1}d{i} on {k}-simplex {x}")
    for k in range(X.dimension):
        for x in range(len(X.simplices[k])):
            for j in range(k + 1):
                y = s(k, j, x)
                for i in range(k + 2):
                    if i in (j, j + 1):
                        if d(k + 1, i, y) != x:
                            failures.append(f"d{i}s{j} != id on {k}-simplex {x}")
                    elif i < j:
                        if d(k + 1, i, y) != s(k - 1, j - 1, d(k, i, x)):
                            failures.append(f"d{i}s{j} != s{j - 1}d{i} on {k}-simplex {x}")
                    else:
                        if d(k + 1, i, y) != s(k - 1, j, d(k, i - 1, x)):
                            failures.append(f"d{i}s{j} != s{j}d{i - 1} on {k}-simplex {x}")
                if k + 1 < X.dimension:
                    for i in range(j + 1):
                        if s(k + 1, i, y) != s(k + 1, j + 1, s(k, i, x)):
                            failures.append(f"s{i}s{j} != s{j + 1}s{i} on {k}-simplex {x}")
    return make_report(f"sset.identities {X.name}", 'simplicial identities', failures,
                       {'dimension': X.dimension})


def nerve_truncate(C: FinCategory, d: int) -> TruncatedSSet:
    """k-simplices are composable chains (f1, ..., fk) with cod f_i = dom f_(i+1)"""
    if d < 0:
        raise FactpermError('dimension bound must be nonnegative')
    levels: List[List[Hashable]] = [list(C.objects)]
    if d >= 1:
        levels.append([(f,) for f in C.morphisms])
    for k in range(2, d + 1):
        levels.append([chain + (g,) for chain in levels[-1] for g in C.out_of(C.cod[chain[-1]])])
    index = [{s: i for i, s in enumerate(level)} for level in levels]

    def vertex(chain, j):
        return C.dom[chain[0]] if j == 0 else C.cod[chain[j - 1]]

    def face(k, i, chain):
        if k == 1:
            return C.cod[chain[0]] if i == 0 else C.dom[chain[0]]
        if i == 0:
            return chain[1:]
        if i == k:
            return chain[:-1]
        return chain[:i - 1] + (C.comp(chain[i], chain[i - 1]),) + chain[i + 1:]

    def degen(k, i, s):
        if k == 0:
            return (C.identity[s],)
        return s[:i] + (C.identity[vertex(s, i)],) + s[i:]

    faces = [[]] + [
        [[index[k - 1][face(k, i, s)] for s in levels[k]] for i in range(k + 1)]
        for k in range(1, d + 1)
    ]
    degeneracies = [
        [[index[k + 1][degen(k, i, s)] for s in levels[k]] for i in range(k + 1)]
        for k in range(d)
    ]
    X = TruncatedSSet(d, levels, faces, degeneracies, name=f"N({C.name})")
    logger.info(f"nerve {X!r}")
    return X


def _invariant_factors(diagonal: List[int]) -> List[int]:
    factors = sorted(abs(a) for a in diagonal if a != 0)
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            a, b = factors[i], factors[j]
            g = gcd(a, b)
            factors[i], factors[j] = g, a * b // g
    return factors


def _smith_diagonal(matrix: np.ndarray) -> List[int]:
    if matrix.size == 0:
        return []
    snf = smith_normal_form(Matrix(matrix.tolist()), domain=ZZ)
    return _invariant_factors([int(snf[i, i]) for i in range(min(snf.shape))])


def boundary_matrix(X: TruncatedSSet, k: int) -> np.ndarray:
    """normalized ∂_k: rows are nondegenerate (k-1)-simplices, columns nondegenerate k-simplices"""
    rows = {s: r for r, s in enumerate(X.nondegenerate(k - 1))}
    cols = X.nondegenerate(k)
    matrix = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for c, s in enumerate(cols):
        for i in range(k + 1):
            f = X.face(k, i, s)
            if f in rows:
                matrix[rows[f], c] += (-1) ** i
    return matrix


def homology(X: TruncatedSSet) -> Tuple[int, int, List[int]]:
    """(π₀, rank H₁, torsion of H₁) over the integers; needs dimension >= 2"""
    if X.dimension < 2:
        raise FactpermError('homology in degree 1 needs the 2-truncation')
    graph = nx.Graph()
    graph.add_nodes_from(range(len(X.simplices[0])))
    graph.add_edges_from((X.face(1, 1, e), X.face(1, 0, e)) for e in X.nondegenerate(1))
    pi0 = nx.number_connected_components(graph)
    d1 = _smith_diagonal(boundary_matrix(X, 1))
    d2 = _smith_diagonal(boundary_matrix(X, 2))
    n0, n1 = len(X.nondegenerate(0)), len(X.nondegenerate(1))
    if n0 - len(d1) != pi0:
        logger.warning(f"H₀ rank {n0 - len(d1)} disagrees with π₀ {pi0} on {X.name}")
    h1_rank = n1 - len(d1) - len(d2)
    torsion = [a for a in d2 if a > 1]
    logger.debug(f"homology {X.name}: π₀={pi0} H₁ rank={h1_rank} torsion={torsion}")
    return pi0, h1_rank, torsion


def category_of_simplices(X: TruncatedSSet, d: int = None) -> FinCategory:
    """Δ_/X up to dimension d: objects (k, s); (k, s) -> (l, t) is a poset map θ with θ*(t) = s"""
    d = X.dimension if d is None else min(d, X.dimension)
    objs = [(k, s) for k in range(d + 1) for s in range(len(X.simplices[k]))]
    specs = []
    for k, s in objs:
        for l, t in objs:
            for theta in monotone_maps(k, l):
                if X.pull_back(theta, l, t) == s:
                    specs.append((((k, s), (l, t), theta), (k, s), (l, t)))
    D = build_category(
        objs, specs,
        lambda ks: (ks, ks, tuple(range(ks[0] + 1))),
        lambda g, f: (f[0], g[1], tuple(g[2][a] for a in f[2])),
        name=f"Δ/{X.name}",
    )
    logger.info(f"category of simplices {D!r}")
    return D


class SimplicialMap:
    def __init__(self, source: TruncatedSSet, target: TruncatedSSet, maps: List[List[int]], name: str = ''):
        self.source = source
        self.target = target
        self.maps = maps
        self.name = name

    def __call__(self, k: int, s: int) -> int:
        return self.maps[k][s]

    def check(self) -> Report:
        X, Y = self.source, self.target
        failures = []
        for k in range(1, X.dimension + 1):
            for s in range(len(X.simplices[k])):
                for i in range(k + 1):
                    if self(k - 1, X.face(k, i, s)) != Y.face(k, i, self(k, s)):
                        failures.append(f"d{i} fails on {k}-simplex {_show(X.simplices[k][s])}")
        for k in range(X.dimension):
            for s in range(len(X.simplices[k])):
                for i in range(k + 1):
                    if self(k + 1, X.degen(k, i, s)) != Y.degen(k, i, self(k, s)):
                        failures.append(f"s{i} fails on {k}-simplex {_show(X.simplices[k][s])}")
        return make_report(f"sset.map {self.name}", 'simplicial map', failures,
                           {'dimension': X.dimension})


def epsilon(X: TruncatedSSet, d: int, D: FinCategory = None) -> SimplicialMap:
    """
    ε_X: N(Δ_/X) -> X through dimension d
    A chain (k0, s0) -> ... -> (km, sm) goes to μ*(sm), where μ(i) is the image of the
    last vertex of Δ^{k_i} in Δ^{k_m}.
    """
    if d > X.dimension:
        raise FactpermError(f"ε through dimension {d} needs X truncated at least that high")
    D = D or category_of_simplices(X)
    N = nerve_truncate(D, d)
    maps = [[X.pull_back((D.obj_keys[x][0],), *D.obj_keys[x]) for x in N.simplices[0]]]
    for m in range(1, d + 1):
        level = []
        for chain in N.simplices[m]:
            keys = [D.mor_keys[f] for f in chain]
            tops = [keys[0][0][0]] + [key[1][0] for key in keys]
            mu = []
            for i in range(m + 1):
                point = tops[i]
                for key in keys[i:]:
                    point = key[2][point]
                mu.append(point)
            l, t = keys[-1][1]
            level.append(X.pull_back(mu, l, t))
        maps.append(level)
    return SimplicialMap(N, X, maps, name=f"ε_{X.name}")


def marking(X: TruncatedSSet, S: Iterable[int], d: int = 1) -> MarkedSSet:
    """
    Edges α of N(Δ_/X) with ε(α) degenerate, or of the form Δ^{0} ⊂ Δ¹ -> X through an edge of S
    """
    S = frozenset(S)
    D = category_of_simplices(X)
    eps = epsilon(X, max(1, d), D)
    N = eps.source
    D_keys = D.mor_keys
    marked = set()
    for e, chain in enumerate(N.simplices[1]):
        source, target, theta = D_keys[chain[0]]
        if X.is_degenerate(1, eps(1, e)):
            marked.add(e)
        elif source[0] == 0 and target[0] == 1 and theta == (0,) and target[1] in S:
            marked.add(e)
    return MarkedSSet(N, marked)
