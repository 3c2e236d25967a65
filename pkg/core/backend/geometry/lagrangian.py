# core/backend/geometry/lagrangian.py

"""
lagrangian.py

Слой сценариев: симплектическая модель X = T^∨(аффинное пространство),
два лагранжиана C_1, C_2, их пересечение B и все "замкнутые формулы":

  - validate_lagrangian / moment_value / build_scenario
  - closed_form_ext_dims / equivariant_ext_dims  (обе ориентации)
  - canonical_char_check / hessian_torsion_check
  - compare_with_oracle  (прямые гомологии против предсказаний)

Линейные расслоения на аффинном B учитываются характерами
(внутренняя степень, характер тора) - см. Character.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from core.backend.algebra.koszul import (
    BigradedDimsTable,
    ExcessData,
    NotRegular,
    Window,
    derived_tensor_dims,
    excess_coordinates,
    excess_data,
    moment_lifts,
    moment_tensor_dims,
    sym_two_term_prediction,
    table_from_function,
    wedge_excess_prediction,
)
from core.backend.algebra.linalg import (
    PoincareSeries,
    Scalar,
    SparseMatrix,
    series_truncate,
    kernel_basis,
)
from core.backend.algebra.polyring import (
    IdealPresentation,
    Polynomial,
    PolyRing,
    Weight,
    is_regular_sequence,
    normal_form,
    standard_monomials,
)

logger = logging.getLogger(__name__)


class NotIsotropic(Exception):
    """Скобка Пуассона двух образующих не лежит в идеале: ω|_C ≠ 0."""
    pass


class WrongDimension(Exception):
    """Размерность лагранжиана (или число компонент формы) не равна n."""
    pass


class NotClosedForm(Exception):
    """1-форма η графика не замкнута."""
    pass


class NonConstantMoment(Exception):
    """Момент не постоянен на лагранжиане (он не инвариантен)."""
    pass


class MomentMismatch(Exception):
    """Лагранжианы лежат в разных уровнях момента."""
    pass


class IntersectionNotClean(Exception):
    """Пересечение пусто, неприведено или excess rank ≠ dim B."""
    pass


class CheckFailed(Exception):
    """Нарушено тождество характеров."""
    pass


class DegenerateHessian(Exception):
    """Ранг гессиана η на B отличается от коразмерности."""
    pass


class OddCanonicalCharacter(Exception):
    """Характер K не делится на 2: K^{1/2} не существует."""
    pass


class UnsupportedScenario(Exception):
    """Данные корректны, но выходят за рамки градуированной модели."""
    pass


# ------------------ характеры ------------------ #

@dataclass(frozen=True)
class Character:
    """
    Элемент группы учёта (Z внутренних степеней) x (Z^r характеров тора).
    """

    internal: int = 0
    weight: Weight = ()

    def __add__(self, other: "Character") -> "Character":
        w = _wadd(self.weight, other.weight)
        return Character(self.internal + other.internal, w)

    def __neg__(self) -> "Character":
        return Character(-self.internal, tuple(-x for x in self.weight))

    def __sub__(self, other: "Character") -> "Character":
        return self + (-other)

    def scale(self, k: int) -> "Character":
        return Character(self.internal * k, tuple(x * k for x in self.weight))

    def is_zero(self) -> bool:
        return self.internal == 0 and all(x == 0 for x in self.weight)

    def half(self) -> "Character":
        if self.internal % 2 or any(x % 2 for x in self.weight):
            raise OddCanonicalCharacter(f"Характер {self.as_text()} нечётен: половинный твист невозможен")
        return Character(self.internal // 2, tuple(x // 2 for x in self.weight))

    def as_text(self) -> str:
        if not self.weight:
            return f"({self.internal})"
        return f"({self.internal}; {', '.join(str(x) for x in self.weight)})"


def half_canonical(character: Character) -> Character:
    """K^{1/2}: половина характера или OddCanonicalCharacter."""
    return character.half()


def _wadd(a: Weight, b: Weight) -> Weight:
    if not a:
        return tuple(b)
    if not b:
        return tuple(a)
    return tuple(x + y for x, y in zip(a, b))


def _char_of_polys(ring: PolyRing, polys: Sequence[Polynomial]) -> Character:
    total = Character(0, tuple(0 for _ in range(ring.torus_rank)))
    for p in polys:
        total = total + Character(p.degree(), p.weight() or ())
    return total


def _char_of_vars(ring: PolyRing, names: Sequence[str]) -> Character:
    total = Character(0, tuple(0 for _ in range(ring.torus_rank)))
    for n in names:
        i = ring.index(n)
        total = total + Character(ring.degrees[i], ring.weights[i] if ring.weights else ())
    return total


# ------------------ симплектическая модель ------------------ #

@dataclass(frozen=True)
class SymplecticModel:
    """
    Кольцо с парами Дарбу (z_i, w_i), ω = Σ dz_i ∧ dw_i.
    Если заданы веса, вес w_i = -вес z_i (индуцированное действие на T^∨).
    """

    ring: PolyRing
    pairs: Tuple[Tuple[str, str], ...]
    chi: Optional[Weight] = None

    def __post_init__(self) -> None:
        names = [n for p in self.pairs for n in p]
        if sorted(names) != sorted(self.ring.names) or len(set(names)) != len(names):
            raise ValueError("Пары Дарбу должны покрывать все переменные ровно по одному разу")
        omega_degrees = {
            self.ring.degrees[self.ring.index(z)] + self.ring.degrees[self.ring.index(w)]
            for z, w in self.pairs
        }
        if len(omega_degrees) != 1:
            raise ValueError(f"ω неоднородна: степени пар {sorted(omega_degrees)}")
        if self.ring.weights:
            for z, w in self.pairs:
                wz = self.ring.weights[self.ring.index(z)]
                ww = self.ring.weights[self.ring.index(w)]
                if tuple(-x for x in wz) != tuple(ww):
                    raise ValueError(f"Вес {w} должен быть противоположен весу {z}: {wz} vs {ww}")

    @classmethod
    def cotangent(
        cls,
        base: Sequence[str],
        *,
        base_degrees: Optional[Sequence[int]] = None,
        fiber_degrees: Optional[Sequence[int]] = None,
        base_weights: Optional[Sequence[Sequence[int]]] = None,
        chi: Optional[Sequence[int]] = None,
    ) -> "SymplecticModel":
        bd = list(base_degrees or [1] * len(base))
        fd = list(fiber_degrees or [1] * len(base))
        duals = [f"w_{z}" for z in base]
        weights = None
        if base_weights:
            weights = [tuple(w) for w in base_weights] + [tuple(-x for x in w) for w in base_weights]
        ring = PolyRing.standard(list(base) + duals, bd + fd, weights)
        return cls(ring, tuple(zip(base, duals)), tuple(chi) if chi is not None else None)

    @property
    def n(self) -> int:
        return len(self.pairs)

    @property
    def base(self) -> Tuple[str, ...]:
        return tuple(z for z, _ in self.pairs)

    @property
    def fiber(self) -> Tuple[str, ...]:
        return tuple(w for _, w in self.pairs)

    def dual_of(self, z: str) -> str:
        for a, b in self.pairs:
            if a == z:
                return b
        raise KeyError(f"{z!r} не базовая переменная")

    @property
    def omega(self) -> Character:
        z, w = self.pairs[0]
        deg = self.ring.degrees[self.ring.index(z)] + self.ring.degrees[self.ring.index(w)]
        return Character(deg, tuple(0 for _ in range(self.ring.torus_rank)))

    def pairing_matrix(self) -> SparseMatrix:
        entries = {}
        for z, w in self.pairs:
            iz, iw = self.ring.index(z), self.ring.index(w)
            entries[(iz, iw)] = Scalar(1)
            entries[(iw, iz)] = Scalar(-1)
        return SparseMatrix(self.ring.nvars, self.ring.nvars, entries)

    def poisson(self, f: Polynomial, g: Polynomial) -> Polynomial:
        """{f, g} = Σ_i ∂f/∂z_i ∂g/∂w_i - ∂f/∂w_i ∂g/∂z_i."""
        out = self.ring.zero()
        for z, w in self.pairs:
            iz, iw = self.ring.index(z), self.ring.index(w)
            out = out + f.diff(iz) * g.diff(iw) - f.diff(iw) * g.diff(iz)
        return out

    def moment_polynomials(self) -> List[Polynomial]:
        """μ_a = Σ_i a-я компонента веса z_i · z_i · w_i."""
        if not self.ring.weights:
            return []
        out = []
        for a in range(self.ring.torus_rank):
            mu = self.ring.zero()
            for z, w in self.pairs:
                wt = self.ring.weights[self.ring.index(z)][a]
                if wt:
                    mu = mu + self.ring.var(z) * self.ring.var(w) * wt
            out.append(mu)
        return out


# ------------------ дескрипторы лагранжианов ------------------ #

@dataclass(frozen=True)
class LagrangianDescriptor:
    """
    kind:
      zero_section
      graph      - potential (строка) или components (по одной на базовую переменную)
      conormal   - vanishing: базовые переменные, задающие Z = {z_k = 0}
      linear     - basis: векторы {переменная: число}
    """

    kind: str
    potential: Optional[str] = None
    components: Tuple[str, ...] = ()
    vanishing: Tuple[str, ...] = ()
    basis: Tuple[Tuple[Tuple[str, Fraction], ...], ...] = ()

    KINDS = ("zero_section", "graph", "conormal", "linear")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise ValueError(f"Неизвестный тип лагранжиана: {self.kind!r}")
        if self.kind == "graph" and self.potential is None and not self.components:
            raise ValueError("Для графика нужен potential или components")

    def one_form(self, model: SymplecticModel) -> List[Polynomial]:
        """Компоненты η_i (только для графиков)."""
        ring = model.ring
        if self.kind != "graph":
            raise ValueError("Форма есть только у графика")
        if self.potential is not None:
            f = ring.parse(self.potential)
            return [f.diff(ring.index(z)) for z in model.base]
        if len(self.components) != model.n:
            raise WrongDimension(f"Ожидалось {model.n} компонент формы, получено {len(self.components)}")
        return [ring.parse(c) for c in self.components]

    def ideal(self, model: SymplecticModel) -> IdealPresentation:
        ring = model.ring
        if self.kind == "zero_section":
            gens = [ring.var(w) for w in model.fiber]
        elif self.kind == "graph":
            eta = self.one_form(model)
            gens = [ring.var(w) - e for w, e in zip(model.fiber, eta)]
        elif self.kind == "conormal":
            for z in self.vanishing:
                if z not in model.base:
                    raise ValueError(f"{z!r} не базовая переменная")
            gens = [ring.var(z) for z in model.base if z in self.vanishing]
            gens += [ring.var(model.dual_of(z)) for z in model.base if z not in self.vanishing]
        else:
            rows = []
            for vec in self.basis:
                row = [Fraction(0)] * ring.nvars
                for name, val in vec:
                    row[ring.index(name)] = Fraction(val)
                rows.append(row)
            m = SparseMatrix.from_dense(rows) if rows else SparseMatrix.zero(0, ring.nvars)
            gens = []
            for v in kernel_basis(m):
                form = ring.zero()
                for idx, c in enumerate(v):
                    if not c.is_zero():
                        form = form + ring.gen(idx) * c
                gens.append(form)
        return IdealPresentation(ring, tuple(gens))


@dataclass(frozen=True)
class ValidatedLagrangian:
    descriptor: LagrangianDescriptor
    ideal: IdealPresentation
    dim: int


def validate_lagrangian(model: SymplecticModel, lag: LagrangianDescriptor) -> ValidatedLagrangian:
    """
    Лагранжевость: образующие - регулярная последовательность, dim = n,
    скобки Пуассона образующих лежат в идеале (ω|_C = 0); для графиков d(η) = 0.
    """
    ring = model.ring
    if lag.kind == "graph":
        eta = lag.one_form(model)
        for a, za in enumerate(model.base):
            for b, zb in enumerate(model.base):
                if b <= a:
                    continue
                if eta[a].diff(ring.index(zb)) != eta[b].diff(ring.index(za)):
                    raise NotClosedForm(f"∂η_{za}/∂{zb} != ∂η_{zb}/∂{za}")
    ideal = lag.ideal(model)
    cert = is_regular_sequence(ideal.generators, ring)
    if not cert:
        raise NotRegular(f"Образующие лагранжиана {lag.kind} не регулярны")
    dim = ring.nvars - len(ideal.generators)
    if dim != model.n:
        raise WrongDimension(f"dim {lag.kind} = {dim}, ожидалось {model.n}")
    gb = ideal.groebner()
    gens = ideal.generators
    for a in range(len(gens)):
        for b in range(a + 1, len(gens)):
            br = model.poisson(gens[a], gens[b])
            if not normal_form(br, gb, ideal.order).is_zero():
                raise NotIsotropic(f"{{{gens[a]}, {gens[b]}}} = {br} не обращается в ноль на C")
    return ValidatedLagrangian(lag, ideal, dim)


def moment_value(model: SymplecticModel, lag: Union[LagrangianDescriptor, ValidatedLagrangian]) -> Tuple[Fraction, ...]:
    """
    Значение момента на лагранжиане: μ_a mod I(L) должно быть константой.
    """
    if isinstance(lag, LagrangianDescriptor):
        lag = validate_lagrangian(model, lag)
    if not model.ring.weights:
        raise ValueError("У модели нет весов тора")
    gb = lag.ideal.groebner()
    out = []
    for mu in model.moment_polynomials():
        r = normal_form(mu, gb, lag.ideal.order)
        if not r.is_constant():
            raise NonConstantMoment(f"μ mod I({lag.descriptor.kind}) = {r} не константа")
        out.append(r.constant_term().to_fraction())
    return tuple(out)


# ------------------ сценарий ------------------ #

@dataclass(frozen=True)
class ScenarioFlags:
    proper_over_affine: bool = True
    finite_invariants: bool = True


@dataclass(frozen=True)
class IntersectionScenario:
    model: SymplecticModel
    l1: ValidatedLagrangian
    l2: ValidatedLagrangian
    b_ideal: IdealPresentation
    free_coords: Tuple[str, ...]
    dim_b: int
    m: int                         # codim(B, C_2)
    m1: int                        # codim(B, C_1)
    excess_rank: int
    excess: ExcessData
    moment: Tuple[Fraction, ...]
    det_n_b_c2: Character
    det_n_b_c1: Character
    det_n_c1_x: Character
    k_c1: Character
    k_c2: Character
    f1: Character
    f2: Character
    spin: bool = False
    flags: ScenarioFlags = field(default_factory=ScenarioFlags)

    @property
    def ring(self) -> PolyRing:
        return self.model.ring

    @property
    def torus_rank(self) -> int:
        return self.ring.torus_rank

    @property
    def twist(self) -> Character:
        """F_1^∨ ⊗ F_2."""
        return self.f2 - self.f1

    @property
    def reduced_dimension(self) -> int:
        """dim B - rank G (общий стабилизатор на B конечен)."""
        return self.dim_b - self.torus_rank

    def describe_b(self) -> str:
        gens = ", ".join(g.to_str() for g in self.b_ideal.groebner())
        return f"<{gens}>"


def _zero_char(ring: PolyRing) -> Character:
    return Character(0, tuple(0 for _ in range(ring.torus_rank)))


def build_scenario(
    model: SymplecticModel,
    l1: LagrangianDescriptor,
    l2: LagrangianDescriptor,
    *,
    f1: Optional[Character] = None,
    f2: Optional[Character] = None,
    spin: bool = False,
    flags: Optional[ScenarioFlags] = None,
    level: Optional[Sequence[Fraction]] = None,
) -> IntersectionScenario:
    """
    Собрать сценарий: проверить лагранжианы и моменты, сертифицировать чистоту
    пересечения, посчитать ранги и характеры.
    """
    ring = model.ring
    v1 = validate_lagrangian(model, l1)
    v2 = validate_lagrangian(model, l2)

    moment: Tuple[Fraction, ...] = ()
    if ring.weights:
        m1v = moment_value(model, v1)
        m2v = moment_value(model, v2)
        if m1v != m2v:
            raise MomentMismatch(f"Значения момента различаются: {m1v} vs {m2v}")
        moment = m1v
    if level is not None:
        level = tuple(Fraction(c) for c in level)
        if any(level):
            raise UnsupportedScenario(
                f"Ненулевой уровень момента {level}: образующая Σ a_i z_i w_i - c неоднородна"
            )
        if moment and moment != level:
            raise MomentMismatch(f"Момент на лагранжианах {moment}, заявлен уровень {level}")

    b_ideal = v1.ideal + v2.ideal
    gb = b_ideal.groebner()
    if b_ideal.is_unit():
        raise IntersectionNotClean("Пересечение пусто")
    lead_vars: List[int] = []
    for g in gb:
        if any(sum(e) != 1 for e in g.terms):
            raise IntersectionNotClean(f"Уравнение B {g.to_str()} нелинейно: пересечение не чистое")
        lead = g.leading(b_ideal.order)[0]
        lead_vars.append(lead.index(1))
    cert = is_regular_sequence(list(gb), ring)
    if not cert:
        raise IntersectionNotClean("Базис идеала B не регулярная последовательность")
    free = tuple(n for i, n in enumerate(ring.names) if i not in lead_vars)
    dim_b = len(free)
    n = model.n
    excess_rank = 2 * n - v1.dim - v2.dim + dim_b
    if excess_rank != dim_b:
        raise IntersectionNotClean(f"excess rank {excess_rank} != dim B {dim_b}")

    sum_vars = _char_of_vars(ring, ring.names)
    sum_g1 = _char_of_polys(ring, v1.ideal.generators)
    sum_g2 = _char_of_polys(ring, v2.ideal.generators)
    sum_gb = _char_of_polys(ring, list(gb))

    k_c1 = sum_vars - sum_g1
    k_c2 = sum_vars - sum_g2
    zero = _zero_char(ring)
    f1 = f1 if f1 is not None else zero
    f2 = f2 if f2 is not None else zero
    if spin:
        f1 = f1 + half_canonical(k_c1)
        f2 = f2 + half_canonical(k_c2)

    scenario = IntersectionScenario(
        model=model,
        l1=v1,
        l2=v2,
        b_ideal=b_ideal,
        free_coords=free,
        dim_b=dim_b,
        m=v2.dim - dim_b,
        m1=v1.dim - dim_b,
        excess_rank=excess_rank,
        excess=excess_data(v1.ideal, v2.ideal),
        moment=moment,
        det_n_b_c2=sum_g2 - sum_gb,
        det_n_b_c1=sum_g1 - sum_gb,
        det_n_c1_x=-sum_g1,
        k_c1=k_c1,
        k_c2=k_c2,
        f1=f1,
        f2=f2,
        spin=spin,
        flags=flags or ScenarioFlags(),
    )
    logger.info(
        "scenario: B=%s dim B=%d m=%d m'=%d excess=%d",
        scenario.describe_b(), dim_b, scenario.m, scenario.m1, excess_rank,
    )
    return scenario


def swapped(s: IntersectionScenario) -> IntersectionScenario:
    """Тот же сценарий с переставленными C_1, C_2 (ориентация m = codim(B, C_1))."""
    return build_scenario(
        s.model, s.l2.descriptor, s.l1.descriptor,
        f1=s.f2, f2=s.f1, spin=False, flags=s.flags,
    )


def oriented(s: IntersectionScenario, orientation: str) -> IntersectionScenario:
    if orientation == "c2":
        return s
    if orientation == "c1":
        return swapped(s)
    raise ValueError(f"Неизвестная ориентация {orientation!r}")


# ------------------ Ext: замкнутые формулы ------------------ #

@dataclass(frozen=True)
class ExtTable:
    """
    Ext^n(F_1, F_2) по (полная степень n, внутренняя степень d).
    twist - характер, на который сдвинуты внутренние степени (det N ⊗ F_1^∨ ⊗ F_2).
    """

    table: BigradedDimsTable
    m: int
    twist: Character
    orientation: str = "c2"

    def per_total_degree(self) -> Dict[int, int]:
        return {n: self.table.total(n) for n in self.table.degrees}


def omega_b_generators(s: IntersectionScenario) -> List[Tuple[int, Weight]]:
    """
    Образующие E ≅ Ω_B ⊗ ω^{-1}: (deg z - deg ω, вес z) для свободных координат B.
    """
    ring = s.ring
    omega = s.model.omega.internal
    out = []
    for z in s.free_coords:
        i = ring.index(z)
        out.append((ring.degrees[i] - omega, tuple(ring.weights[i]) if ring.weights else ()))
    return out


def _hf_b(s: IntersectionScenario, d: int, weight: Optional[Weight] = None) -> int:
    if d < 0:
        return 0
    return len(standard_monomials(s.b_ideal, d, weight))


def _ext_window(s: IntersectionScenario, window: Window) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    lo = s.det_n_c1_x.internal + s.twist.internal
    return (0, window.homological), (lo, lo + window.internal)


def closed_form_ext_dims(s: IntersectionScenario, window: Window, orientation: str = "c2") -> ExtTable:
    """
    Ext^{m+k} = ∧^k E ⊗ det N_{B/C_2} ⊗ F_1^∨ ⊗ F_2 (B аффинно: только q = 0).
    """
    s = oriented(s, orientation)
    gens = omega_b_generators(s)
    shift = s.det_n_b_c2.internal + s.twist.internal
    k_range, d_range = _ext_window(s, window)

    def value(n: int, d: int) -> int:
        k = n - s.m
        if k < 0 or k > len(gens):
            return 0
        total = 0
        for subset in combinations(range(len(gens)), k):
            total += _hf_b(s, d - shift - sum(gens[i][0] for i in subset))
        return total

    table = table_from_function(value, k_range, d_range)
    return ExtTable(table, s.m, s.det_n_b_c2 + s.twist, orientation)


def duality_ext_from_tor(s: IntersectionScenario, window: Window, orientation: str = "c2") -> ExtTable:
    """
    Оракул: Ext^n = Tor_{N-n}(O_{C1}, O_{C2}) ⊗ det N_{C1/X} ⊗ F_1^∨ ⊗ F_2
    (двойственность Гротендика для C_1 коразмерности N).
    """
    s = oriented(s, orientation)
    n_dim = s.model.n
    k_range, d_range = _ext_window(s, window)
    tor = derived_tensor_dims(
        s.l1.ideal, s.l2.ideal, Window(max(window.homological, n_dim), window.internal)
    )
    shift = s.det_n_c1_x.internal + s.twist.internal

    def value(n: int, d: int) -> int:
        t = n_dim - n
        if t < 0:
            return 0
        return tor.get(-t, d - shift)

    table = table_from_function(value, k_range, d_range)
    return ExtTable(table, s.m, s.det_n_c1_x + s.twist, orientation)


def _moment_phi(s: IntersectionScenario) -> Tuple[List[Tuple[int, Weight]], List[List[Polynomial]]]:
    """
    Характеры 𝔤^∨ и матрица φ: 𝔤 -> E^∨ по подъёмам образующих момента.
    Нулевая компонента момента даёт нулевую строку.
    """
    moments = s.model.moment_polynomials()
    nonzero = [mu for mu in moments if not mu.is_zero()]
    lifts = iter(moment_lifts(s.l1.ideal, s.l2.ideal, nonzero) if nonzero else [])
    zero_w = tuple(0 for _ in range(s.torus_rank))
    g_dual: List[Tuple[int, Weight]] = []
    phi: List[List[Polynomial]] = []
    for mu in moments:
        g_dual.append((-s.model.omega.internal, zero_w))
        if mu.is_zero():
            phi.append([s.ring.zero()] * s.excess.rank)
        else:
            phi.append(excess_coordinates(s.excess, next(lifts)))
    return g_dual, phi


def equivariant_ext_dims(s: IntersectionScenario, window: Window, orientation: str = "c2") -> ExtTable:
    """
    Ext_G^n = ⊕_p (вес-0 куски ∧^p[E -> 𝔤^∨ ⊗ O_B]) ⊗ det N_{B/C_2} ⊗ F_1^∨ ⊗ F_2, n = m + p.
    Комплекс собирается sym_two_term_prediction (dual=True) с той же φ, что и
    модель Тейта момента. Для тора ранга 0 совпадает с closed_form_ext_dims.
    """
    s = oriented(s, orientation)
    if s.torus_rank == 0:
        return closed_form_ext_dims(s, window)
    r = s.torus_rank
    e_part = [(-d, tuple(-x for x in w)) for d, w in s.excess.generators]
    g_dual, phi = _moment_phi(s)

    twist = s.det_n_b_c2 + s.twist
    target = tuple(-x for x in twist.weight) if twist.weight else tuple(0 for _ in range(r))
    k_range = (0, window.homological)
    d_range = (-window.internal, window.internal)
    entries: Dict[Tuple[int, int], int] = {(n, d): 0 for n in range(k_range[0], k_range[1] + 1)
                                         for d in range(d_range[0], d_range[1] + 1)}
    top = window.homological - s.m
    if top >= 0:
        sub = Window(top, d_range[1] - twist.internal, d_range[0] - twist.internal)
        tab = sym_two_term_prediction(s.b_ideal, e_part, g_dual, phi, sub, weight=target, dual=True)
        for (p, d), v in tab.entries.items():
            key = (s.m + p, d + twist.internal)
            if key in entries:
                entries[key] += v
    logger.debug("equivariant ext: twist=%s", twist.as_text())
    return ExtTable(BigradedDimsTable(entries, k_range, d_range), s.m, twist, orientation)


# ------------------ сертификаты характеров ------------------ #

@dataclass(frozen=True)
class CharacterCertificate:
    summands: Tuple[Tuple[str, Character], ...]
    total: Character
    ok: bool


def canonical_char_check(s: IntersectionScenario) -> CharacterCertificate:
    """
    K_{C1}^∨ + K_{C2} + 2·det N_{B/C2} = 0 в группе учёта.
    Если ω имеет ненулевую внутреннюю степень, тождество выполняется только
    с поправкой ω^m; при m = 0 или deg ω = 0 поправка тривиальна и не выводится.
    """
    summands: Tuple[Tuple[str, Character], ...] = (
        ("K_C1^v", -s.k_c1),
        ("K_C2", s.k_c2),
        ("det N_B/C2 ^2", s.det_n_b_c2.scale(2)),
    )
    omega_m = s.model.omega.scale(s.m)
    if not omega_m.is_zero():
        summands += (("omega^m", omega_m),)
    total = _zero_char(s.ring)
    for _, c in summands:
        total = total + c
    cert = CharacterCertificate(summands, total, total.is_zero())
    if not cert.ok:
        raise CheckFailed(f"Каноническое тождество нарушено: сумма {total.as_text()}")
    return cert


@dataclass(frozen=True)
class HessianCertificate:
    matrix: Tuple[Tuple[str, ...], ...]
    rank: int
    codim: int
    unit_minor: str
    det_normal: Character
    det_normal_squared: Character
    hessian_character: Character


def _det(rows: List[List[Polynomial]], ring: PolyRing) -> Polynomial:
    if not rows:
        return ring.one()
    out = ring.zero()
    for j, p in enumerate(rows[0]):
        if p.is_zero():
            continue
        term = p * _det([r[:j] + r[j + 1:] for r in rows[1:]], ring)
        out = out - term if j % 2 else out + term
    return out


def _minors(entries: List[List[Polynomial]], size: int, ring: PolyRing) -> List[Polynomial]:
    n = len(entries)
    return [
        _det([[entries[a][b] for b in cols] for a in rows], ring)
        for rows in combinations(range(n), size)
        for cols in combinations(range(n), size)
    ]


def hessian_torsion_check(s: IntersectionScenario) -> HessianCertificate:
    """
    Гессиан η на B должен иметь ранг codim(Z(η), M) в каждой точке B:
    все миноры порядка codim+1 лежат в I(B), а миноры порядка codim
    порождают вместе с I(B) единичный идеал.

    Невырожденный гессиан даёт Sym^2 N_{Z/M} -> ω, откуда det N^{⊗2} ⊗ ω^{codim}
    тривиален в группе учёта; это тождество тоже проверяется.
    """
    model = s.model
    ring = s.ring
    if s.l2.descriptor.kind == "graph":
        lag = s.l2.descriptor
    elif s.l1.descriptor.kind == "graph":
        lag = s.l1.descriptor
    else:
        raise ValueError("В сценарии нет графика замкнутой формы")
    eta = lag.one_form(model)
    gb = s.b_ideal.groebner()
    order = s.b_ideal.order
    entries = [
        [normal_form(e.diff(ring.index(z)), gb, order) for z in model.base]
        for e in eta
    ]
    codim = model.n - s.dim_b

    if codim < model.n:
        for minor in _minors(entries, codim + 1, ring):
            if not normal_form(minor, gb, order).is_zero():
                raise DegenerateHessian(f"минор порядка {codim + 1} = {minor.to_str()} не равен 0 на B")
    units = [m for m in (normal_form(x, gb, order) for x in _minors(entries, codim, ring)) if not m.is_zero()]
    if not units or not IdealPresentation(ring, tuple(gb) + tuple(units), order).is_unit():
        raise DegenerateHessian(f"ранг гессиана падает ниже codim {codim} на B")

    free = set(s.free_coords)
    normal = [z for z in model.base if z not in free]
    det_normal = Character(
        -sum(ring.degrees[ring.index(z)] for z in normal),
        tuple(-sum(ring.weights[ring.index(z)][a] for z in normal) for a in range(ring.torus_rank)),
    )
    hessian_character = model.omega.scale(codim)
    if not (det_normal.scale(2) + hessian_character).is_zero():
        raise CheckFailed(
            f"det N^2 {det_normal.scale(2).as_text()} не сокращается с ω^{codim} {hessian_character.as_text()}"
        )
    unit = next((m for m in units if m.is_constant()), units[0])
    return HessianCertificate(
        matrix=tuple(tuple(p.to_str() for p in row) for row in entries),
        rank=codim,
        codim=codim,
        unit_minor=unit.to_str(),
        det_normal=det_normal,
        det_normal_squared=det_normal.scale(2),
        hessian_character=hessian_character,
    )


# ------------------ сравнение с оракулом ------------------ #

@dataclass
class OracleCheck:
    name: str
    ok: bool
    mismatches: List[Tuple[int, int, int, int]] = field(default_factory=list)
    left: Optional[BigradedDimsTable] = None
    right: Optional[BigradedDimsTable] = None
    note: str = ""


@dataclass
class OracleReport:
    checks: List[OracleCheck]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def _wedge_table(s: IntersectionScenario, window: Window) -> BigradedDimsTable:
    entries: Dict[Tuple[int, int], int] = {}
    for k in range(0, window.homological + 1):
        row = wedge_excess_prediction(s.excess, k, window)
        for d, v in row.items():
            entries[(-k, d)] = v
    return BigradedDimsTable(entries, (-window.homological, 0), (window.internal_min, window.internal))


def _table_check(name: str, left: BigradedDimsTable, right: BigradedDimsTable, note: str = "") -> OracleCheck:
    mism = left.mismatches(right)
    return OracleCheck(name, not mism, mism, left, right, note)


def moment_prediction(s: IntersectionScenario, window: Window) -> BigradedDimsTable:
    """
    Sym_{O_B}([𝔤 -> E^∨][1]) с φ, заданным подъёмами образующих момента.
    """
    moments = [mu for mu in s.model.moment_polynomials() if not mu.is_zero()]
    lifts = moment_lifts(s.l1.ideal, s.l2.ideal, moments)
    phi = [excess_coordinates(s.excess, row) for row in lifts]
    g_part = [(mu.degree(), tuple(0 for _ in range(s.torus_rank))) for mu in moments]
    return sym_two_term_prediction(s.b_ideal, s.excess.generators, g_part, phi, window)


def compare_with_oracle(s: IntersectionScenario, window: Window) -> OracleReport:
    """
    Таблица за таблицей: прямые гомологии против замкнутых формул.
    """
    checks: List[OracleCheck] = []

    tor = derived_tensor_dims(s.l1.ideal, s.l2.ideal, window)
    checks.append(_table_check("tor_vs_wedge_excess", tor, _wedge_table(s, window)))

    # E^∨ ≅ T_B ⊗ ω: характеры образующих противоположны характерам E
    expected = sorted((-d, tuple(-x for x in w)) for d, w in omega_b_generators(s))
    actual = sorted(s.excess.generators)
    checks.append(OracleCheck(
        "excess_is_cotangent",
        s.excess.rank == s.dim_b and actual == expected,
        note=f"E^v generators {actual}, T_B (x) omega {expected}, dim B {s.dim_b}",
    ))

    tor_t = derived_tensor_dims(s.l2.ideal, s.l1.ideal, window)
    checks.append(_table_check("tor_symmetry", tor, tor_t))

    moments = [mu for mu in s.model.moment_polynomials() if not mu.is_zero()]
    if moments:
        tate = moment_tensor_dims(s.l1.ideal, s.l2.ideal, moments, window)
        checks.append(_table_check("tate_vs_sym_two_term", tate, moment_prediction(s, window)))

    for orientation in ("c2", "c1"):
        closed = closed_form_ext_dims(s, window, orientation)
        dual = duality_ext_from_tor(s, window, orientation)
        checks.append(_table_check(f"closed_form_ext_{orientation}", closed.table, dual.table))

    if s.torus_rank and s.dim_b == 0:
        # Ext_G^{m+2j} на точке сидит во внутренней степени twist - j·deg ω
        twist = s.det_n_b_c2 + s.twist
        reach = abs(twist.internal) + abs(s.model.omega.internal) * window.homological
        eq = equivariant_ext_dims(s, Window(window.homological, max(window.internal, reach)))
        if any(twist.weight):
            series = [0] * (window.homological + 1)
            note = f"twist {twist.as_text()} has nonzero weight: no invariants on a point"
        else:
            series = series_truncate(PoincareSeries.torus_point(s.torus_rank).shift(s.m), window.homological)
            note = f"H_G(point) shifted by m={s.m}"
        per_n = eq.per_total_degree()
        mism = [(n, 0, per_n.get(n, 0), series[n]) for n in range(window.homological + 1)
                if per_n.get(n, 0) != series[n]]
        checks.append(OracleCheck("equivariant_ext_vs_point", not mism, mism, eq.table, None, note=note))
    for c in checks:
        logger.debug("oracle %s: %s", c.name, "ok" if c.ok else f"{len(c.mismatches)} mismatches")
    return OracleReport(checks)
