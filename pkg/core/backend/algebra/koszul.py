# core/backend/algebra/koszul.py

"""
koszul.py

Dg-алгебры Кошуля и Тейта и их гомологии по бистепеням.

Главная идея:
  - свободная градуированно-коммутативная алгебра над R:
      нечётные образующие (e_j, f_i, dz) - внешние,
      чётные (ε_i, u_a)                - полиномиальные;
  - дифференциал задан на образующих и продолжен по правилу Лейбница;
  - комплекс (R/J)[образующие] режется на конечные блоки
    (степень комплекса, внутренняя степень, вес тора),
    каждый блок - FiniteComplex из linalg.

  polyring (идеалы, базисы)  --->  koszul (блоки, таблицы)  --->  lagrangian
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .linalg import (
    ONE,
    ZERO,
    FiniteComplex,
    NotAComplex,
    Scalar,
    SparseMatrix,
    homology_dims,
    kernel_basis,
    rank,
    solve,
)
from .polyring import (
    Exponent,
    IdealPresentation,
    Polynomial,
    PolyRing,
    Weight,
    is_regular_sequence,
    lift_coefficients,
    normal_form,
    standard_monomials,
    NotInIdeal,
)

logger = logging.getLogger(__name__)


class NotRegular(Exception):
    """Образующие идеала не образуют регулярную последовательность."""
    pass


class BadLift(Exception):
    """Нарушено тождество a_i = Σ_j c_ij·g_j."""
    pass


class MomentNotInIntersection(Exception):
    """Образующая момента не лежит в I ∩ J."""
    pass


# ------------------ окна и таблицы ------------------ #

@dataclass(frozen=True)
class Window:
    homological: int          # считаем степени комплекса -homological .. 0
    internal: int             # внутренние степени 0 .. internal
    internal_min: int = 0

    @property
    def internal_range(self) -> range:
        return range(self.internal_min, self.internal + 1)


@dataclass(frozen=True)
class BigradedDimsTable:
    """
    (степень комплекса k, внутренняя степень d) -> размерность.
    Все клетки окна присутствуют (в том числе нулевые), вне окна - нет.
    """

    entries: Mapping[Tuple[int, int], int]
    k_range: Tuple[int, int]
    d_range: Tuple[int, int]

    def get(self, k: int, d: int) -> int:
        return self.entries.get((k, d), 0)

    def row(self, k: int) -> List[int]:
        return [self.get(k, d) for d in range(self.d_range[0], self.d_range[1] + 1)]

    @property
    def degrees(self) -> range:
        return range(self.k_range[0], self.k_range[1] + 1)

    def total(self, k: int) -> int:
        return sum(self.row(k))

    def mismatches(self, other: "BigradedDimsTable") -> List[Tuple[int, int, int, int]]:
        """
        Клетки общего окна, где значения расходятся: (k, d, self, other).
        """
        k_lo = max(self.k_range[0], other.k_range[0])
        k_hi = min(self.k_range[1], other.k_range[1])
        d_lo = max(self.d_range[0], other.d_range[0])
        d_hi = min(self.d_range[1], other.d_range[1])
        out = []
        for k in range(k_lo, k_hi + 1):
            for d in range(d_lo, d_hi + 1):
                a, b = self.get(k, d), other.get(k, d)
                if a != b:
                    out.append((k, d, a, b))
        return out

    def restrict(self, k_range: Tuple[int, int], d_range: Tuple[int, int]) -> "BigradedDimsTable":
        entries = {
            (k, d): self.get(k, d)
            for k in range(k_range[0], k_range[1] + 1)
            for d in range(d_range[0], d_range[1] + 1)
        }
        return BigradedDimsTable(entries, k_range, d_range)

    def to_rows(self) -> List[Tuple[int, List[int]]]:
        return [(k, self.row(k)) for k in reversed(self.degrees)]


def table_from_function(fn, k_range: Tuple[int, int], d_range: Tuple[int, int]) -> BigradedDimsTable:
    entries = {
        (k, d): int(fn(k, d))
        for k in range(k_range[0], k_range[1] + 1)
        for d in range(d_range[0], d_range[1] + 1)
    }
    return BigradedDimsTable(entries, k_range, d_range)


# ------------------ презентация dg-алгебры ------------------ #

@dataclass(frozen=True)
class FreeGenerator:
    name: str
    odd: bool
    degree: int              # степень комплекса (-1 для e/f, -2 для ε)
    internal: int            # внутренняя степень
    weight: Weight = ()      # характер тора


# значение дифференциала: цель -> коэффициент в R; цель None означает "1" (элемент кольца)
DiffValue = Mapping[Optional[str], Polynomial]


@dataclass
class DgAlgebraPresentation:
    ring: PolyRing
    generators: Tuple[FreeGenerator, ...]
    differential: Dict[str, Dict[Optional[str], Polynomial]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.generators = tuple(self.generators)
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError(f"Повторяющиеся имена образующих: {names}")
        for g in self.generators:
            self.differential.setdefault(g.name, {})

    def generator(self, name: str) -> FreeGenerator:
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(f"Нет образующей {name!r}")

    @property
    def odd(self) -> List[FreeGenerator]:
        return [g for g in self.generators if g.odd]

    @property
    def even(self) -> List[FreeGenerator]:
        return [g for g in self.generators if not g.odd]

    def d_squared(self, name: str) -> Dict[Optional[str], Polynomial]:
        """
        d(d(x)) для образующей x: коэффициенты из R, d(R) = 0,
        поэтому d(Σ c_t·t) = Σ c_t·d(t).
        """
        out: Dict[Optional[str], Polynomial] = {}
        for target, coef in self.differential[name].items():
            if target is None:
                continue
            for t2, c2 in self.differential[target].items():
                out[t2] = out.get(t2, self.ring.zero()) + coef * c2
        return {t: p for t, p in out.items() if not p.is_zero()}

    def verify(self) -> None:
        """
        Проверить d∘d = 0 на всех образующих и согласованность степеней.
        """
        for g in self.generators:
            for target, coef in self.differential[g.name].items():
                if coef.is_zero():
                    continue
                tdeg = 0 if target is None else self.generator(target).degree
                if tdeg != g.degree + 1:
                    raise ValueError(
                        f"d({g.name}) имеет цель {target!r} степени {tdeg}, ожидалась {g.degree + 1}"
                    )
            rest = self.d_squared(g.name)
            if rest:
                raise NotAComplex(f"d(d({g.name})) = {rest} != 0")


def koszul_dg(gens: Sequence[Polynomial], ring: PolyRing) -> DgAlgebraPresentation:
    """
    Алгебра Кошуля R[e_1..e_s], deg e_i = -1, d(e_i) = g_i.
    """
    cert = is_regular_sequence(gens, ring)
    if not cert:
        raise NotRegular(
            f"Последовательность {list(gens)} не регулярна: "
            f"числитель {cert.actual_numerator}, ожидался {cert.expected_numerator}"
        )
    generators = []
    differential: Dict[str, Dict[Optional[str], Polynomial]] = {}
    for j, g in enumerate(gens, start=1):
        name = f"e{j}"
        generators.append(FreeGenerator(name, True, -1, g.degree(), g.weight() or ()))
        differential[name] = {None: g}
    pres = DgAlgebraPresentation(ring, tuple(generators), differential)
    pres.verify()
    return pres


def _homogeneous_part(p: Polynomial, degree: int) -> Polynomial:
    return Polynomial(p.ring, {e: c for e, c in p.terms.items() if p.ring.degree_of(e) == degree})


def tate_moment_extension(
    i_gens: Sequence[Polynomial],
    moment_gens: Sequence[Polynomial],
    lifts: Sequence[Sequence[Polynomial]],
) -> DgAlgebraPresentation:
    """
    Расширение Тейта: e_j (d = g_j), f_i (d = a_i), ε_i (deg -2, d = Σ_j c_ij e_j - f_i).
    """
    if not i_gens:
        raise ValueError("Пустой список образующих идеала")
    ring = i_gens[0].ring
    pres = koszul_dg(i_gens, ring)
    if len(lifts) != len(moment_gens):
        raise BadLift(f"Число строк подъёма {len(lifts)} != числу образующих момента {len(moment_gens)}")

    generators = list(pres.generators)
    differential = {k: dict(v) for k, v in pres.differential.items()}
    for i, (a, row) in enumerate(zip(moment_gens, lifts), start=1):
        if len(row) != len(i_gens):
            raise BadLift(f"Строка подъёма {i} имеет длину {len(row)}, ожидалась {len(i_gens)}")
        check = ring.zero()
        for c, g in zip(row, i_gens):
            check = check + c * g
        if check != a:
            raise BadLift(f"a_{i} = {a} != Σ c_ij g_j = {check}")
        weight = a.weight() or ()
        fname, ename = f"f{i}", f"eps{i}"
        generators.append(FreeGenerator(fname, True, -1, a.degree(), weight))
        generators.append(FreeGenerator(ename, False, -2, a.degree(), weight))
        differential[fname] = {None: a}
        dv: Dict[Optional[str], Polynomial] = {fname: -ring.one()}
        for j, (c, g) in enumerate(zip(row, i_gens), start=1):
            c = _homogeneous_part(c, a.degree() - g.degree())
            if not c.is_zero():
                dv[f"e{j}"] = c
        differential[ename] = dv
    out = DgAlgebraPresentation(ring, tuple(generators), differential)
    out.verify()
    return out


# ------------------ блочный движок ------------------ #

Word = Tuple[Tuple[int, ...], Tuple[int, ...]]      # (нечётные индексы по возрастанию, мультистепень чётных)
BasisElem = Tuple[Tuple[int, ...], Tuple[int, ...], Exponent]


class BlockComplexBuilder:
    """
    Комплекс (R/Q)[образующие] по блокам.

    killed - нечётные образующие, которые зануляются (тензор над алгеброй Кошуля момента).
    Чётные образующие обязаны иметь ненулевую степень комплекса (иначе блоки бесконечны).
    """

    def __init__(
        self,
        pres: DgAlgebraPresentation,
        quotient: IdealPresentation,
        *,
        killed: Sequence[str] = (),
    ) -> None:
        self.ring = pres.ring
        self.quotient = quotient
        killed_set = set(killed)
        self.odd = [g for g in pres.odd if g.name not in killed_set]
        self.even = list(pres.even)
        for g in self.even:
            if g.degree == 0:
                raise ValueError(f"Чётная образующая {g.name} степени 0 даёт бесконечные блоки")
        odd_index = {g.name: i for i, g in enumerate(self.odd)}
        even_index = {g.name: i for i, g in enumerate(self.even)}

        def targets(name: str) -> List[Tuple[str, Optional[int], Polynomial]]:
            out = []
            for t, coef in pres.differential[name].items():
                if coef.is_zero():
                    continue
                if t is None:
                    out.append(("ring", None, coef))
                elif t in killed_set:
                    continue
                elif t in odd_index:
                    out.append(("odd", odd_index[t], coef))
                else:
                    out.append(("even", even_index[t], coef))
            return out

        self._odd_d = [targets(g.name) for g in self.odd]
        self._even_d = [targets(g.name) for g in self.even]
        self._gb = quotient.groebner()
        self._std_cache: Dict[Tuple[int, Optional[Weight]], List[Exponent]] = {}
        self._nf_cache: Dict[Tuple[Exponent, int, int, int], Dict[Exponent, Scalar]] = {}
        self._has_weights = bool(self.ring.weights)

    # ---- базисы ----

    def _std(self, d: int, weight: Optional[Weight]) -> List[Exponent]:
        key = (d, weight)
        if key not in self._std_cache:
            self._std_cache[key] = standard_monomials(self.quotient, d, weight) if d >= 0 else []
        return self._std_cache[key]

    def _words(self, c: int, max_abs: int, sym_degree: Optional[int]) -> List[Word]:
        out: List[Word] = []
        bounds = [max_abs // abs(g.degree) for g in self.even]
        n_odd = len(self.odd)
        for size in range(n_odd + 1):
            for s in combinations(range(n_odd), size):
                s_deg = sum(self.odd[i].degree for i in s)
                for alpha in _multidegrees(bounds):
                    deg = s_deg + sum(a * g.degree for a, g in zip(alpha, self.even))
                    if deg != c:
                        continue
                    if sym_degree is not None and size + sum(alpha) != sym_degree:
                        continue
                    out.append((s, alpha))
        return out

    def _word_internal(self, w: Word) -> int:
        s, alpha = w
        return sum(self.odd[i].internal for i in s) + sum(a * g.internal for a, g in zip(alpha, self.even))

    def _word_weight(self, w: Word) -> Weight:
        s, alpha = w
        r = self.ring.torus_rank
        total = [0] * r
        for i in s:
            for k, x in enumerate(self.odd[i].weight or (0,) * r):
                total[k] += x
        for a, g in zip(alpha, self.even):
            for k, x in enumerate(g.weight or (0,) * r):
                total[k] += a * x
        return tuple(total)

    def basis(self, c: int, d: int, weight: Optional[Weight], max_abs: int,
              sym_degree: Optional[int] = None) -> List[BasisElem]:
        out: List[BasisElem] = []
        for w in self._words(c, max_abs, sym_degree):
            rest = d - self._word_internal(w)
            if rest < 0:
                continue
            ww = None
            if weight is not None:
                ww = tuple(a - b for a, b in zip(weight, self._word_weight(w)))
            for m in self._std(rest, ww):
                out.append((w[0], w[1], m))
        return out

    # ---- дифференциал ----

    def _reduce(self, m: Exponent, kind: int, gen: int, slot: int, coef: Polynomial) -> Dict[Exponent, Scalar]:
        key = (m, kind, gen, slot)
        if key not in self._nf_cache:
            p = coef.mul_term(m, ONE)
            self._nf_cache[key] = dict(normal_form(p, self._gb, self.quotient.order).terms)
        return self._nf_cache[key]

    def apply_d(self, elem: BasisElem) -> Dict[BasisElem, Scalar]:
        s, alpha, m = elem
        out: Dict[BasisElem, Scalar] = {}

        def add(sign: int, ns: Tuple[int, ...], na: Tuple[int, ...], poly_terms: Dict[Exponent, Scalar], mult: int = 1):
            for e, c in poly_terms.items():
                key = (ns, na, e)
                out[key] = out.get(key, ZERO) + c * (sign * mult)

        for t, idx in enumerate(s):
            sign = -1 if t % 2 else 1
            rest = s[:t] + s[t + 1:]
            for slot, (kind, target, coef) in enumerate(self._odd_d[idx]):
                terms = self._reduce(m, 0, idx, slot, coef)
                if kind == "ring":
                    add(sign, rest, alpha, terms)
                elif kind == "even":
                    na = tuple(a + (1 if q == target else 0) for q, a in enumerate(alpha))
                    add(sign, rest, na, terms)
                else:
                    raise ValueError("Дифференциал нечётной образующей не может быть нечётным")

        base_sign = -1 if len(s) % 2 else 1
        for q, a in enumerate(alpha):
            if a == 0:
                continue
            na = tuple(x - (1 if k == q else 0) for k, x in enumerate(alpha))
            for slot, (kind, target, coef) in enumerate(self._even_d[q]):
                terms = self._reduce(m, 1, q, slot, coef)
                if kind == "odd":
                    if target in s:
                        continue
                    pos_sign = -1 if sum(1 for x in s if x > target) % 2 else 1
                    ns = tuple(sorted(s + (target,)))
                    add(base_sign * pos_sign, ns, na, terms, a)
                elif kind == "ring":
                    add(base_sign, s, na, terms, a)
                else:
                    na2 = tuple(x + (1 if k == target else 0) for k, x in enumerate(na))
                    add(base_sign, s, na2, terms, a)
        return {k: v for k, v in out.items() if not v.is_zero()}

    # ---- гомологии ----

    def homology(self, c_range: Tuple[int, int], d: int, weight: Optional[Weight] = None,
                 sym_degree: Optional[int] = None) -> Dict[int, int]:
        lo, hi = c_range
        max_abs = max(abs(lo - 1), abs(hi + 1))
        degrees = list(range(lo - 1, hi + 2))
        bases = [self.basis(c, d, weight, max_abs, sym_degree) for c in degrees]
        diffs = []
        for i in range(len(degrees) - 1):
            src, dst = bases[i], bases[i + 1]
            index = {b: j for j, b in enumerate(dst)}
            entries: Dict[Tuple[int, int], Scalar] = {}
            for col, b in enumerate(src):
                for tgt, v in self.apply_d(b).items():
                    row = index.get(tgt)
                    if row is None:
                        raise ValueError(f"Образ {tgt} вне базиса степени {degrees[i + 1]}")
                    entries[(row, col)] = v
            diffs.append(SparseMatrix(len(dst), len(src), entries))
        cx = FiniteComplex(degrees[0], tuple(len(b) for b in bases), tuple(diffs))
        dims = homology_dims(cx)
        return {c: dims[c] for c in range(lo, hi + 1)}

    def table(self, window: Window, weight: Optional[Weight] = None,
              sym_degree: Optional[int] = None, positive: bool = False) -> BigradedDimsTable:
        """
        positive=False: степени -K..0; positive=True: степени 0..K.
        """
        k_range = (0, window.homological) if positive else (-window.homological, 0)
        entries: Dict[Tuple[int, int], int] = {}
        for d in window.internal_range:
            dims = self.homology(k_range, d, weight, sym_degree)
            for c, v in dims.items():
                entries[(c, d)] = v
            logger.debug("блок d=%d: %s", d, dims)
        return BigradedDimsTable(entries, k_range, (window.internal_min, window.internal))


def _multidegrees(bounds: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    if not bounds:
        yield ()
        return
    head, *tail = bounds
    for a in range(head + 1):
        for rest in _multidegrees(tail):
            yield (a,) + rest


# ------------------ операции ------------------ #

def _require_regular(ideal: IdealPresentation) -> None:
    cert = is_regular_sequence(ideal.generators, ideal.ring)
    if not cert:
        raise NotRegular(
            f"Образующие {list(ideal.generators)} не регулярны: "
            f"числитель {cert.actual_numerator}, ожидался {cert.expected_numerator}"
        )


def derived_tensor_dims(i: IdealPresentation, j: IdealPresentation, window: Window,
                        weight: Optional[Weight] = None) -> BigradedDimsTable:
    """
    Гомологии Koszul(I) ⊗ R/J по бистепеням окна: строка k = -t это Tor_t(R/I, R/J).
    """
    _require_regular(i)
    pres = koszul_dg(i.generators, i.ring)
    return BlockComplexBuilder(pres, j).table(window, weight)


def moment_lifts(i: IdealPresentation, j: IdealPresentation,
                 moments: Sequence[Polynomial]) -> List[List[Polynomial]]:
    """
    Проверить a_i ∈ I ∩ J и найти однородные c_ij с a_i = Σ c_ij g_j.
    """
    out = []
    for a in moments:
        if not j.contains(a):
            raise MomentNotInIntersection(f"{a} не лежит в идеале второго лагранжиана")
        try:
            row = lift_coefficients(a, i.generators, i.order)
        except NotInIdeal as e:
            raise MomentNotInIntersection(str(e))
        out.append([_homogeneous_part(c, a.degree() - g.degree()) for c, g in zip(row, i.generators)])
    return out


def moment_tensor_dims(i: IdealPresentation, j: IdealPresentation, moments: Sequence[Polynomial],
                       window: Window, lifts: Optional[Sequence[Sequence[Polynomial]]] = None,
                       weight: Optional[Weight] = None) -> BigradedDimsTable:
    """
    Модель Тейта: R/I как модуль над Koszul(a), тензорно с R/J (f_i -> 0).
    """
    _require_regular(i)
    _require_regular(j)
    if not moments:
        return derived_tensor_dims(i, j, window, weight)
    if lifts is None:
        lifts = moment_lifts(i, j, moments)
    else:
        for a in moments:
            if not (i.contains(a) and j.contains(a)):
                raise MomentNotInIntersection(f"{a} не лежит в I ∩ J")
    pres = tate_moment_extension(i.generators, moments, lifts)
    killed = [g.name for g in pres.generators if g.name.startswith("f")]
    return BlockComplexBuilder(pres, j, killed=killed).table(window, weight)


# ------------------ избыточный модуль ------------------ #

@dataclass(frozen=True)
class ExcessData:
    """
    Явная презентация E^∨ = Tor_1(R/I, R/J) как свободного O_B-модуля.

    vectors[k] - коэффициенты λ_j образующей Σ λ_j e_j,
    generators[k] - её (внутренняя степень, вес).
    """

    b_ideal: IdealPresentation
    vectors: Tuple[Tuple[Scalar, ...], ...]
    generators: Tuple[Tuple[int, Weight], ...]
    i_degrees: Tuple[Tuple[int, Weight], ...]

    @property
    def rank(self) -> int:
        return len(self.vectors)


def excess_data(i: IdealPresentation, j: IdealPresentation) -> ExcessData:
    """
    Образующие E^∨: постоянные комбинации Σ λ_j g_j, лежащие в J,
    по группам образующих I одной степени и веса.

    Ищутся только комбинации с коэффициентами из Q. Для линейных (и вообще
    согласованных по степеням) презентаций этого достаточно; если нужны
    полиномиальные коэффициенты, ранг получится меньше dim B, и это ловит
    проверка excess_is_cotangent в compare_with_oracle.
    """
    ring = i.ring
    gens = list(i.generators)
    keys = [(g.degree(), g.weight() or ()) for g in gens]
    b_ideal = IdealPresentation(ring, tuple(i.generators) + tuple(j.generators), i.order)
    vectors: List[Tuple[Scalar, ...]] = []
    generators: List[Tuple[int, Weight]] = []
    jgb = j.groebner()
    for key in sorted(set(keys)):
        group = [idx for idx, k in enumerate(keys) if k == key]
        nfs = [normal_form(gens[idx], jgb, j.order) for idx in group]
        monos = sorted({e for p in nfs for e in p.terms})
        m = SparseMatrix(
            len(monos), len(group),
            {(r, c): p.terms[e] for c, p in enumerate(nfs) for r, e in enumerate(monos) if e in p.terms},
        )
        for v in kernel_basis(m):
            full = [ZERO] * len(gens)
            for c, idx in enumerate(group):
                full[idx] = v[c]
            vectors.append(tuple(full))
            generators.append(key)
    return ExcessData(b_ideal, tuple(vectors), tuple(generators), tuple(keys))


def excess_coordinates(excess: ExcessData, combo: Sequence[Polynomial]) -> List[Polynomial]:
    """
    Координаты цикла Σ c_j e_j по базису E^∨ (по модулю I+J).
    Базис дополняется до базиса пространства образующих, берутся первые координаты.
    """
    ring = excess.b_ideal.ring
    s = len(excess.i_degrees)
    r = excess.rank
    columns = [list(v) for v in excess.vectors]
    # дополнение стандартными векторами
    for idx in range(s):
        unit = [ONE if t == idx else ZERO for t in range(s)]
        trial = columns + [unit]
        m = SparseMatrix(s, len(trial), {(row, col): trial[col][row] for col in range(len(trial)) for row in range(s)})
        if rank(m) == len(trial):
            columns.append(unit)
        if len(columns) == s:
            break
    basis = SparseMatrix(s, s, {(row, col): columns[col][row] for col in range(s) for row in range(s)})
    # координаты по базису: решаем basis · x = combo для каждого монома отдельно
    monos = sorted({e for p in combo for e in p.terms})
    coords = [ring.zero() for _ in range(r)]
    for e in monos:
        rhs = [p.terms.get(e, ZERO) for p in combo]
        x = solve(basis, rhs)
        if x is None:
            raise ValueError("Базис пространства образующих вырожден")
        for k in range(r):
            if not x[k].is_zero():
                coords[k] = coords[k] + ring.monomial(e, x[k])
    gb = excess.b_ideal.groebner()
    return [normal_form(c, gb, excess.b_ideal.order) for c in coords]



def _wedge_counts(degrees: Sequence[Tuple[int, Weight]], k: int) -> Dict[Tuple[int, Weight], int]:
    out: Dict[Tuple[int, Weight], int] = {}
    for s in combinations(range(len(degrees)), k):
        d = sum(degrees[i][0] for i in s)
        r = len(degrees[0][1]) if degrees else 0
        w = tuple(sum(degrees[i][1][t] for i in s) for t in range(r)) if r else ()
        out[(d, w)] = out.get((d, w), 0) + 1
    return out


def wedge_excess_prediction(excess: ExcessData, k: int, window: Window,
                            weight: Optional[Weight] = None) -> Dict[int, int]:
    """
    Функция Гильберта ∧^k E^∨ над O_B = R/(I+J) по внутренним степеням окна.
    """
    counts = _wedge_counts(excess.generators, k) if k <= excess.rank else {}
    out: Dict[int, int] = {}
    for d in window.internal_range:
        total = 0
        for (gd, gw), mult in counts.items():
            ww = None
            if weight is not None:
                ww = tuple(a - b for a, b in zip(weight, gw))
            rest = d - gd
            if rest >= 0:
                total += mult * len(standard_monomials(excess.b_ideal, rest, ww))
        out[d] = total
    return out


def sym_two_term_prediction(
    b_ideal: IdealPresentation,
    e_dual: Sequence[Tuple[int, Weight]],
    g_part: Sequence[Tuple[int, Weight]],
    phi: Sequence[Sequence[Polynomial]],
    window: Window,
    p: Optional[int] = None,
    weight: Optional[Weight] = None,
    *,
    dual: bool = False,
) -> BigradedDimsTable:
    """
    Sym_{O_B}([𝔤 -> E^∨][1]): E^∨ в степени -1 (внешние), 𝔤 в степени -2 (полиномиальные),
    d(u_i) = Σ_j phi[i][j]·e'_j. p - ограничить кусок ∧^{p-j} E^∨ ⊗ Sym^j 𝔤.

    dual=True - двойственная сборка Sym_{O_B}([E -> 𝔤^∨][-1]) со степенями 0..K:
    e_dual тогда задаёт характеры E (степень 1), g_part - характеры 𝔤^∨ (степень 2),
    d(x_j) = Σ_i phi[i][j]·u_i (транспонированная матрица).
    """
    ring = b_ideal.ring
    odd_degree, even_degree = (1, 2) if dual else (-1, -2)
    gens: List[FreeGenerator] = []
    differential: Dict[str, Dict[Optional[str], Polynomial]] = {}
    for idx, (deg, w) in enumerate(e_dual, start=1):
        name = f"x{idx}"
        gens.append(FreeGenerator(name, True, odd_degree, deg, w))
        differential[name] = {}
    for idx, (deg, w) in enumerate(g_part, start=1):
        name = f"u{idx}"
        gens.append(FreeGenerator(name, False, even_degree, deg, w))
        differential[name] = {}
    for i, row in enumerate(phi[:len(g_part)], start=1):
        for j, c in enumerate(row, start=1):
            if c.is_zero():
                continue
            if dual:
                differential[f"x{j}"][f"u{i}"] = c
            else:
                differential[f"u{i}"][f"x{j}"] = c
    pres = DgAlgebraPresentation(ring, tuple(gens), differential)
    pres.verify()
    return BlockComplexBuilder(pres, b_ideal).table(window, weight, sym_degree=p, positive=dual)
