# core/backend/geometry/kirwan.py

"""
kirwan.py

Линейная GIT для тора T = (C*)^r, действующего на C^N с весами w_i
и линеаризацией χ:

- оптимальные дестабилизаторы как точные проекции -χ на конусы носителей;
- полустабильное множество (минимальные носители + текстовое описание);
- стратификация HKKN по примитивным β;
- эквивариантные ряды Пуанкаре страт и равенство Морса;
- сертификаты Атьи-Ботта (инъективность эйлерова класса).

Всё считается в Fraction, без итерационных методов.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from core.backend.algebra.linalg import PoincareSeries, SparseMatrix, series_truncate, solve

logger = logging.getLogger(__name__)


class CertificateFailed(Exception):
    """Сертификат Атьи–Ботта не выполнен на страте."""
    pass


Vector = Tuple[Fraction, ...]
Support = FrozenSet[int]


def _dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((Fraction(x) * Fraction(y) for x, y in zip(a, b)), Fraction(0))


def _norm2(a: Sequence) -> Fraction:
    return _dot(a, a)


# ------------------ представление тора ------------------ #

@dataclass(frozen=True)
class TorusRepresentation:
    """
    weights[i] - вес i-й координаты (вектор длины rank), chi - характер линеаризации.
    names - имена координат для описаний (по умолчанию x1, x2, ...).
    """

    rank: int
    weights: Tuple[Tuple[int, ...], ...]
    chi: Tuple[int, ...]
    names: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError("Ранг тора должен быть >= 1")
        if not self.weights:
            raise ValueError("Нужен хотя бы один вес")
        for w in self.weights:
            if len(w) != self.rank:
                raise ValueError(f"Вес {w} не согласован с рангом {self.rank}")
        if len(self.chi) != self.rank:
            raise ValueError(f"Характер {self.chi} не согласован с рангом {self.rank}")
        if self.names and len(self.names) != len(self.weights):
            raise ValueError("Число имён координат не совпадает с числом весов")

    @property
    def size(self) -> int:
        return len(self.weights)

    def coordinate_name(self, i: int) -> str:
        return self.names[i] if self.names else f"x{i + 1}"

    def scaled(self, k: int) -> "TorusRepresentation":
        return TorusRepresentation(self.rank, self.weights, tuple(k * c for c in self.chi), self.names)


def cotangent_weights(base_weights: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
    """Веса T^∨C^N: сначала w_i для z_i, затем -w_i для ковекторов."""
    base = tuple(tuple(w) for w in base_weights)
    return base + tuple(tuple(-x for x in w) for w in base)


def cotangent_representation(rep: TorusRepresentation) -> TorusRepresentation:
    names = ()
    if rep.names:
        names = rep.names + tuple(f"w{n[1:]}" if n.startswith("z") else f"w_{n}" for n in rep.names)
    return TorusRepresentation(rep.rank, cotangent_weights(rep.weights), rep.chi, names)


# ------------------ проекция на конус ------------------ #

def _project_to_subspace(target: Vector, active: Sequence[Tuple[int, ...]]) -> Optional[Vector]:
    """Ортогональная проекция на {β : <w, β> = 0 для w из active}."""
    if not active:
        return target
    gram = SparseMatrix.from_dense([[_dot(a, b) for b in active] for a in active])
    rhs = [_dot(a, target) for a in active]
    lam = solve(gram, rhs)
    if lam is None:
        return None
    out = list(target)
    for coef, a in zip(lam, active):
        c = coef.to_fraction()
        for j, x in enumerate(a):
            out[j] -= c * x
    return tuple(out)


def cone_projection(target: Sequence, cone: Sequence[Sequence[int]]) -> Vector:
    """
    Ближайшая к target точка конуса {β : <w_i, β> >= 0}.

    Перебор граней: для каждого набора активных ограничений (не больше ранга)
    проецируем на соответствующее подпространство; среди допустимых кандидатов
    берётся ближайший. Проекция единственна, поэтому результат детерминирован.
    """
    t: Vector = tuple(Fraction(x) for x in target)
    ineqs = [tuple(w) for w in cone if any(w)]
    if all(_dot(w, t) >= 0 for w in ineqs):
        return t

    best: Optional[Vector] = None
    best_dist: Optional[Fraction] = None
    dim = len(t)
    for size in range(1, min(len(ineqs), dim) + 1):
        for active in combinations(ineqs, size):
            cand = _project_to_subspace(t, active)
            if cand is None or any(_dot(w, cand) < 0 for w in ineqs):
                continue
            dist = _norm2([a - b for a, b in zip(t, cand)])
            if best_dist is None or dist < best_dist:
                best, best_dist = cand, dist
    if best is None:
        # конус всегда содержит 0
        best = tuple(Fraction(0) for _ in t)
    logger.debug("cone projection %s onto %d inequalities -> %s", t, len(ineqs), best)
    return best


def kkt_holds(target: Sequence, cone: Sequence[Sequence[int]], point: Sequence) -> bool:
    """
    point в конусе, (target - point) ⟂ point и target - point лежит в полярном конусе
    (его собственная проекция на конус равна нулю).
    """
    t = [Fraction(x) for x in target]
    p = [Fraction(x) for x in point]
    diff = [a - b for a, b in zip(t, p)]
    if any(_dot(w, p) < 0 for w in cone):
        return False
    if _dot(diff, p) != 0:
        return False
    return not any(cone_projection(diff, cone))


def optimal_destabilizer(rep: TorusRepresentation, support: Sequence[int]) -> Vector:
    target = tuple(-Fraction(c) for c in rep.chi)
    return cone_projection(target, [rep.weights[i] for i in sorted(support)])


def primitive(beta: Sequence[Fraction]) -> Tuple[int, ...]:
    """Примитивный целый представитель луча R_{>0}·β."""
    dens = [Fraction(x).denominator for x in beta]
    lcm = reduce(lambda a, b: a * b // gcd(a, b), dens, 1)
    ints = [int(Fraction(x) * lcm) for x in beta]
    g = reduce(gcd, (abs(x) for x in ints), 0)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def _all_supports(indices: Sequence[int]) -> List[Support]:
    idx = sorted(indices)
    out: List[Support] = []
    for size in range(len(idx) + 1):
        out.extend(frozenset(c) for c in combinations(idx, size))
    return out


# ------------------ полустабильное множество ------------------ #

@dataclass(frozen=True)
class SemistableLocus:
    minimal_supports: Tuple[Tuple[int, ...], ...]
    description: str

    @property
    def everything(self) -> bool:
        return self.minimal_supports == ((),)

    @property
    def empty(self) -> bool:
        return not self.minimal_supports


def semistable_locus(rep: TorusRepresentation) -> SemistableLocus:
    semistable = [s for s in _all_supports(range(rep.size)) if not any(optimal_destabilizer(rep, s))]
    minimal = [s for s in semistable if not any(o < s for o in semistable)]
    supports = tuple(sorted((tuple(sorted(s)) for s in minimal), key=lambda s: (len(s), s)))

    if not supports:
        text = "∅"
    elif supports == ((),):
        text = "everything"
    else:
        parts = []
        for s in supports:
            cond = "·".join(rep.coordinate_name(i) for i in s)
            parts.append("{" + cond + " ≠ 0}")
        text = " ∪ ".join(parts)
    return SemistableLocus(supports, text)


# ------------------ стратификация ------------------ #

@dataclass(frozen=True)
class HKKNStratum:
    beta: Vector
    direction: Tuple[int, ...]
    z_indices: Tuple[int, ...]
    normal_indices: Tuple[int, ...]
    supports: Tuple[Tuple[int, ...], ...] = field(default=())

    @property
    def r_beta(self) -> int:
        return len(self.normal_indices)


def _pairing_split(rep: TorusRepresentation, beta: Sequence[Fraction],
                   indices: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    zero, negative = [], []
    for i in indices:
        p = _dot(rep.weights[i], beta)
        if p == 0:
            zero.append(i)
        elif p < 0:
            negative.append(i)
    return tuple(zero), tuple(negative)


def hkkn_stratification(rep: TorusRepresentation) -> List[HKKNStratum]:
    groups: Dict[Tuple[int, ...], List[Tuple[Support, Vector]]] = {}
    for s in _all_supports(range(rep.size)):
        beta = optimal_destabilizer(rep, s)
        if any(beta):
            groups.setdefault(primitive(beta), []).append((s, beta))

    strata = []
    for direction in sorted(groups):
        members = groups[direction]
        beta = members[0][1]
        z, normal = _pairing_split(rep, beta, range(rep.size))
        supports = tuple(sorted((tuple(sorted(s)) for s, _ in members), key=lambda s: (len(s), s)))
        strata.append(HKKNStratum(beta, direction, z, normal, supports))
    logger.debug("HKKN: %d strata for weights %s, chi %s", len(strata), rep.weights, rep.chi)
    return strata


# ------------------ ряды Пуанкаре ------------------ #

def _piece_series(rep: TorusRepresentation, indices: Tuple[int, ...], target: Vector,
                  memo: Dict[Tuple[Tuple[int, ...], Vector], Optional[PoincareSeries]]) -> PoincareSeries:
    """
    P_T точек подпространства span(indices), чей оптимальный дестабилизатор равен target.

    P_T(подпространства) = 1/(1-t^2)^r минус вклады остальных кусков
    t^{2r'}·P_T(кусок'), где r' считается внутри подпространства.
    """
    key = (indices, target)
    if key in memo:
        cached = memo[key]
        if cached is None:
            raise RuntimeError(f"Циклическая рекурсия стратификации на {indices}")
        return cached
    memo[key] = None

    pieces: Dict[Vector, bool] = {}
    for s in _all_supports(indices):
        beta = optimal_destabilizer(rep, s)
        if beta != target:
            pieces[beta] = True

    result = PoincareSeries.torus_point(rep.rank)
    for beta in sorted(pieces):
        zero, negative = _pairing_split(rep, beta, indices)
        sub = _piece_series(rep, zero, beta, memo)
        result = result - sub.shift(2 * len(negative))
    memo[key] = result
    return result


def stratum_poincare_series(rep: TorusRepresentation, stratum: HKKNStratum) -> PoincareSeries:
    return _piece_series(rep, stratum.z_indices, stratum.beta, {})


def known_semistable_series(rep: TorusRepresentation) -> Optional[PoincareSeries]:
    """
    Независимое значение P_T(M^ss) для разобранных моделей:
    χ = 0 (всё полустабильно), тор ранга 1 (расслоение над взвешенным
    проективным пространством) и произведения таких (веса на осях).
    Иначе None.
    """
    if not any(rep.chi):
        return PoincareSeries.torus_point(rep.rank)

    axis_of: List[Optional[int]] = []
    for w in rep.weights:
        nz = [a for a, x in enumerate(w) if x]
        if len(nz) > 1:
            return None
        axis_of.append(nz[0] if nz else None)

    total = PoincareSeries()
    for a in range(rep.rank):
        c = rep.chi[a]
        ws = [rep.weights[i][a] for i in range(rep.size) if axis_of[i] == a]
        if c == 0:
            total = total * PoincareSeries.torus_point(1)
            continue
        p = sum(1 for x in ws if (x > 0) == (c > 0))
        if p == 0:
            return PoincareSeries((0,))
        # (1 - t^{2p}) / (1 - t^2) = 1 + t^2 + ... + t^{2(p-1)}
        total = total * PoincareSeries(tuple(1 if k % 2 == 0 else 0 for k in range(2 * p - 1)))
    return total


@dataclass(frozen=True)
class MorseReport:
    truncation: int
    ambient: List[int]
    strata: Tuple[Tuple[Tuple[int, ...], int, List[int]], ...]
    residual: List[int]
    known: Optional[List[int]]
    nonnegative: bool
    ok: bool

    @property
    def matches_known(self) -> Optional[bool]:
        return None if self.known is None else self.known == self.residual


def morse_equality_check(rep: TorusRepresentation, truncation: int) -> MorseReport:
    """
    P_T(M) = P_T(M^ss) + Σ_β t^{2r_β} P_T(S_β) до степени truncation.
    P_T(M^ss) - остаток; сверяется с known_semistable_series, если тот известен.
    """
    ambient = PoincareSeries.torus_point(rep.rank)
    residual = ambient
    rows = []
    for st in hkkn_stratification(rep):
        series = stratum_poincare_series(rep, st)
        residual = residual - series.shift(2 * st.r_beta)
        rows.append((st.direction, st.r_beta, series_truncate(series, truncation)))
    res = series_truncate(residual, truncation)
    known_series = known_semistable_series(rep)
    known = series_truncate(known_series, truncation) if known_series is not None else None
    nonnegative = all(c >= 0 for c in res)
    ok = nonnegative and (known is None or known == res)
    if not ok:
        logger.warning("Morse residual %s (known %s)", res, known)
    return MorseReport(truncation, series_truncate(ambient, truncation), tuple(rows), res, known, nonnegative, ok)


# ------------------ сертификаты ------------------ #

@dataclass(frozen=True)
class AtiyahBottCertificate:
    direction: Tuple[int, ...]
    normal_pairings: Tuple[Tuple[int, Fraction], ...]
    local_system_orders: Tuple[int, ...]
    vacuous: bool = False

    @property
    def ok(self) -> bool:
        return all(p < 0 for _, p in self.normal_pairings)


def _normal_by_projection(rep: TorusRepresentation, stratum: HKKNStratum) -> Tuple[int, ...]:
    """
    Нормальные направления S_β без спариваний с β: координата касательна к Y_β,
    если она входит в носитель страты или её добавление к носителю не меняет
    оптимальный дестабилизатор.
    """
    tangent = {i for s in stratum.supports for i in s}
    for s in stratum.supports:
        for i in range(rep.size):
            if i not in tangent and optimal_destabilizer(rep, tuple(sorted(s + (i,)))) == stratum.beta:
                tangent.add(i)
    return tuple(i for i in range(rep.size) if i not in tangent)


def atiyah_bott_certificate(rep: TorusRepresentation, stratum: Optional[HKKNStratum],
                            orders: Sequence[int] = (1,)) -> AtiyahBottCertificate:
    """
    exp(β) действует тривиально на Z_β и без неподвижных векторов на нормальном
    расслоении: все <w_i, β> < 0 для нормальных координат. Условие не зависит от
    локальной системы, поэтому сертификат повторяется для каждого порядка из orders.
    stratum=None - случай без неустойчивых точек (пустой сертификат).

    Нормальные координаты страты заданы знаком спаривания, поэтому они
    дополнительно сверяются с направлениями, найденными проекциями на конусы.
    """
    if stratum is None:
        return AtiyahBottCertificate((), (), tuple(orders), vacuous=True)

    pairings = tuple((i, _dot(rep.weights[i], stratum.beta)) for i in stratum.normal_indices)
    bad = [i for i, p in pairings if p >= 0]
    if bad:
        raise CertificateFailed(
            f"Страта {stratum.direction}: неотрицательные спаривания на нормальных координатах "
            + ", ".join(rep.coordinate_name(i) for i in bad)
        )
    on_z = [i for i in stratum.z_indices if _dot(rep.weights[i], stratum.beta) != 0]
    if on_z:
        raise CertificateFailed(f"Страта {stratum.direction}: β действует нетривиально на Z_β")
    for s in stratum.supports:
        if any(_dot(rep.weights[i], stratum.beta) < 0 for i in s):
            raise CertificateFailed(f"Носитель {s} не лежит в Y_β страты {stratum.direction}")
    if stratum.supports:
        derived = _normal_by_projection(rep, stratum)
        if derived != tuple(sorted(stratum.normal_indices)):
            raise CertificateFailed(
                f"Страта {stratum.direction}: нормальные координаты {list(stratum.normal_indices)}, "
                f"по проекциям {list(derived)}"
            )
    return AtiyahBottCertificate(stratum.direction, pairings, tuple(orders))
