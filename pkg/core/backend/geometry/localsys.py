# core/backend/geometry/localsys.py

"""
localsys.py

Топологическая сторона: симплициальные когомологии с коэффициентами
в локальной системе ранга 1 (монодромии - корни из единицы),
n-листные циклические накрытия и проверка разложения

    H(накрытие) = ⊕_{k=0}^{n-1} H(K, L^k).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from typing import Dict, Hashable, List, Mapping, Sequence, Tuple

from core.backend.algebra.linalg import ONE, FiniteComplex, Scalar, SparseMatrix, homology_dims

logger = logging.getLogger(__name__)


class NotACocycle(Exception):
    """Произведение монодромий по границе 2-симплекса не равно 1."""
    pass


class OrderMismatch(Exception):
    """Порядок накрытия не делится на точный порядок монодромии."""
    pass


Simplex = Tuple[int, ...]


@dataclass(frozen=True)
class SimplicialModel:
    """
    Вершины 0..nv-1, симплексы - возрастающие кортежи вершин, все грани присутствуют.
    labels - необязательные подписи вершин (для накрытий: (вершина, лист)).
    """

    vertex_count: int
    simplices: Tuple[Tuple[Simplex, ...], ...]      # simplices[p] - все p-симплексы по порядку
    labels: Tuple[Hashable, ...] = ()

    @classmethod
    def from_facets(cls, facets: Sequence[Sequence[int]], vertex_count: int = 0,
                    labels: Sequence[Hashable] = ()) -> "SimplicialModel":
        faces: Dict[int, set] = {}
        top = 0
        nv = vertex_count
        for f in facets:
            f = tuple(sorted(f))
            if len(set(f)) != len(f):
                raise ValueError(f"Вырожденный симплекс {f}")
            top = max(top, len(f) - 1)
            for v in f:
                nv = max(nv, v + 1)
            for size in range(1, len(f) + 1):
                for sub in combinations(f, size):
                    faces.setdefault(size - 1, set()).add(sub)
        faces.setdefault(0, set()).update((v,) for v in range(nv))
        simplices = tuple(tuple(sorted(faces.get(p, ()))) for p in range(top + 1))
        return cls(nv, simplices, tuple(labels))

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1

    def count(self, p: int) -> int:
        return len(self.simplices[p]) if 0 <= p < len(self.simplices) else 0

    def edges(self) -> Tuple[Simplex, ...]:
        return self.simplices[1] if len(self.simplices) > 1 else ()

    def check(self) -> None:
        """Все грани присутствуют (тогда ∂∂ = 0 автоматически)."""
        present = [set(s) for s in self.simplices]
        for p in range(1, len(self.simplices)):
            for s in self.simplices[p]:
                for i in range(len(s)):
                    face = s[:i] + s[i + 1:]
                    if face not in present[p - 1]:
                        raise ValueError(f"Грань {face} симплекса {s} отсутствует")


def euler_characteristic(k: SimplicialModel) -> int:
    return sum((-1) ** p * k.count(p) for p in range(len(k.simplices)))


@dataclass(frozen=True)
class MonodromyData:
    """
    Монодромия ζ_order^{exponents[(u, v)]} на ребре u -> v (u < v); на остальных рёбрах 1.
    """

    order: int
    exponents: Mapping[Tuple[int, int], int] = field(default_factory=dict)

    def exponent(self, u: int, v: int) -> int:
        if u < v:
            return self.exponents.get((u, v), 0) % self.order
        return (-self.exponents.get((v, u), 0)) % self.order

    def value(self, u: int, v: int) -> Scalar:
        return Scalar.root_of_unity(self.order, self.exponent(u, v))

    def power(self, k: int) -> "MonodromyData":
        return MonodromyData(self.order, {e: (x * k) % self.order for e, x in self.exponents.items()})

    def exact_order(self) -> int:
        g = self.order
        for x in self.exponents.values():
            g = gcd(g, x % self.order)
        return self.order // g

    @classmethod
    def trivial(cls) -> "MonodromyData":
        return cls(1, {})


def check_cocycle(k: SimplicialModel, lsys: MonodromyData) -> None:
    if len(k.simplices) < 3:
        return
    for a, b, c in k.simplices[2]:
        total = lsys.exponent(a, b) + lsys.exponent(b, c) - lsys.exponent(a, c)
        if total % lsys.order:
            raise NotACocycle(f"Монодромия по границе ({a}, {b}, {c}) равна ζ_{lsys.order}^{total % lsys.order}")


def gauge_transform(k: SimplicialModel, lsys: MonodromyData, h: Mapping[int, int]) -> MonodromyData:
    """g'_{uv} = h_u^{-1}·g_{uv}·h_v для 0-коцепи h со значениями в степенях ζ (по всем рёбрам K)."""
    out = {}
    for u, v in k.edges():
        x = (lsys.exponent(u, v) + h.get(v, 0) - h.get(u, 0)) % lsys.order
        if x:
            out[(u, v)] = x
    return MonodromyData(lsys.order, out)


def _twisted_complex(k: SimplicialModel, lsys: MonodromyData) -> FiniteComplex:
    index = [{s: i for i, s in enumerate(layer)} for layer in k.simplices]
    diffs = []
    for p in range(len(k.simplices) - 1):
        entries: Dict[Tuple[int, int], Scalar] = {}
        for row, s in enumerate(k.simplices[p + 1]):
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                col = index[p][face]
                coef = Scalar(-1 if i % 2 else 1)
                if i == 0:
                    # перенос значения из вершины s[1] в базовую вершину s[0]
                    coef = coef * lsys.value(s[0], s[1])
                entries[(row, col)] = entries.get((row, col), Scalar(0)) + coef
        diffs.append(SparseMatrix(k.count(p + 1), k.count(p), entries))
    return FiniteComplex(0, tuple(k.count(p) for p in range(len(k.simplices))), tuple(diffs))


def twisted_cohomology(k: SimplicialModel, lsys: MonodromyData) -> Dict[int, int]:
    """
    dim H^p(K, L) над Q(ζ_n).
    """
    check_cocycle(k, lsys)
    dims = homology_dims(_twisted_complex(k, lsys))
    logger.debug("twisted cohomology (order %d): %s", lsys.order, dims)
    return dims


def cyclic_cover(k: SimplicialModel, lsys: MonodromyData, n: int) -> SimplicialModel:
    """
    n-листное циклическое накрытие, соответствующее L; подписи вершин - (вершина, лист).
    """
    check_cocycle(k, lsys)
    if n < 1 or n % lsys.exact_order():
        raise OrderMismatch(f"Порядок монодромии {lsys.exact_order()} не делит n = {n}")

    def shift(u: int, v: int) -> int:
        e = lsys.exponent(u, v) * n
        if e % lsys.order:
            raise OrderMismatch(f"Монодромия ребра ({u}, {v}) не лежит в μ_{n}")
        return (e // lsys.order) % n

    labels = [(v, a) for v in range(k.vertex_count) for a in range(n)]
    vid = {lab: i for i, lab in enumerate(labels)}
    facets = []
    for layer in k.simplices:
        for s in layer:
            for a in range(n):
                lifted = [vid[(s[0], a)]] + [vid[(v, (a + shift(s[0], v)) % n)] for v in s[1:]]
                facets.append(lifted)
    cover = SimplicialModel.from_facets(facets, len(labels), labels)
    cover.check()
    return cover


@dataclass(frozen=True)
class CoveringReport:
    n: int
    cover_dims: Dict[int, int]
    summands: Tuple[Dict[int, int], ...]
    summed: Dict[int, int]
    euler_base: int
    euler_cover: int
    ok: bool


def covering_decomposition_check(k: SimplicialModel, lsys: MonodromyData, n: int) -> CoveringReport:
    """
    H(накрытие) против Σ_k H(K, L^k) по степеням, плюс χ(накрытие) = n·χ(K).
    """
    cover = cyclic_cover(k, lsys, n)
    cover_dims = twisted_cohomology(cover, MonodromyData.trivial())
    summands = []
    summed: Dict[int, int] = {p: 0 for p in range(len(k.simplices))}
    for j in range(n):
        dims = twisted_cohomology(k, lsys.power(j))
        summands.append(dims)
        for p, v in dims.items():
            summed[p] = summed.get(p, 0) + v
    euler_base = euler_characteristic(k)
    euler_cover = euler_characteristic(cover)
    ok = cover_dims == summed and euler_cover == n * euler_base
    if not ok:
        logger.warning("covering decomposition mismatch: %s vs %s", cover_dims, summed)
    return CoveringReport(n, cover_dims, tuple(summands), summed, euler_base, euler_cover, ok)


# ------------------ стандартные модели ------------------ #

def triangle_circle() -> SimplicialModel:
    return SimplicialModel.from_facets([(0, 1), (1, 2), (0, 2)])


def point() -> SimplicialModel:
    return SimplicialModel.from_facets([(0,)])


def grid_torus(size: int = 3) -> SimplicialModel:
    """Триангуляция тора решёткой size x size (size >= 3)."""
    if size < 3:
        raise ValueError("Решётка тора должна быть не меньше 3x3")

    def v(i: int, j: int) -> int:
        return (i % size) * size + (j % size)

    facets = []
    for i in range(size):
        for j in range(size):
            facets.append((v(i, j), v(i + 1, j), v(i + 1, j + 1)))
            facets.append((v(i, j), v(i, j + 1), v(i + 1, j + 1)))
    return SimplicialModel.from_facets(facets)


def seam_monodromy(size: int, order: int = 2, exponent: int = 1) -> MonodromyData:
    """
    На grid_torus(size): ζ_order^exponent на рёбрах, пересекающих шов между строками size-1 и 0.
    """
    k = grid_torus(size)
    out: Dict[Tuple[int, int], int] = {}
    for u, w in k.edges():
        ru, rw = u // size, w // size
        if {ru, rw} == {0, size - 1} and size > 2:
            # направление u -> w идёт через шов вниз, если ru = size-1
            out[(u, w)] = exponent if ru == size - 1 else -exponent
    return MonodromyData(order, out)
