# core/backend/algebra/polyring.py

"""
polyring.py

Многочлены от нескольких переменных с весовой градуировкой
(и, при необходимости, мультиградуировкой по характерам тора).

Слой:
  сценарий (строки-выражения)  --->  PolyRing.parse  --->  Polynomial
  IdealPresentation  --->  buchberger / normal_form / hilbert_series
  is_regular_sequence, lift_coefficients  ---> koszul / lagrangian

Все идеалы в сценариях однородны по внутренней степени.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from .linalg import ONE, ZERO, Rational, Scalar, as_scalar

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
Weight = Tuple[int, ...]

ORDERS = ("lex", "grlex", "grevlex")


class NotInIdeal(Exception):
    """Многочлен не лежит в идеале (ненулевая нормальная форма)."""
    pass


# ------------------ кольцо ------------------ #

@dataclass(frozen=True)
class PolyRing:
    names: Tuple[str, ...]
    degrees: Tuple[int, ...]
    weights: Tuple[Weight, ...] = ()   # пусто - нет действия тора

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"Повторяющиеся имена переменных: {self.names}")
        if len(self.degrees) != len(self.names):
            raise ValueError("Число степеней не совпадает с числом переменных")
        if any(d < 1 for d in self.degrees):
            raise ValueError(f"Внутренние степени должны быть >= 1: {self.degrees}")
        if self.weights:
            if len(self.weights) != len(self.names):
                raise ValueError("Число весов не совпадает с числом переменных")
            ranks = {len(w) for w in self.weights}
            if len(ranks) != 1:
                raise ValueError(f"Веса разной длины: {self.weights}")

    @classmethod
    def standard(cls, names: Sequence[str], degrees: Optional[Sequence[int]] = None,
                 weights: Optional[Sequence[Sequence[int]]] = None) -> "PolyRing":
        degs = tuple(degrees) if degrees is not None else (1,) * len(names)
        ws = tuple(tuple(w) for w in weights) if weights else ()
        return cls(tuple(names), degs, ws)

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def torus_rank(self) -> int:
        return len(self.weights[0]) if self.weights else 0

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"Переменная {name!r} не объявлена в кольце {self.names}")

    # ---- степени мономов ----

    def degree_of(self, exp: Exponent) -> int:
        return sum(e * d for e, d in zip(exp, self.degrees))

    def weight_of(self, exp: Exponent) -> Weight:
        if not self.weights:
            return ()
        r = self.torus_rank
        return tuple(sum(e * w[k] for e, w in zip(exp, self.weights)) for k in range(r))

    # ---- конструкторы ----

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def const(self, c: Union[Scalar, Rational]) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: as_scalar(c)})

    def one(self) -> "Polynomial":
        return self.const(1)

    def gen(self, i: int) -> "Polynomial":
        exp = tuple(1 if k == i else 0 for k in range(self.nvars))
        return Polynomial(self, {exp: ONE})

    def var(self, name: str) -> "Polynomial":
        return self.gen(self.index(name))

    def monomial(self, exp: Exponent, c: Union[Scalar, Rational] = 1) -> "Polynomial":
        return Polynomial(self, {tuple(exp): as_scalar(c)})

    def parse(self, text: Union[str, int]) -> "Polynomial":
        """
        Разобрать выражение вида "x*w_x - y*w_y" (рациональные коэффициенты).
        """
        symbols = {n: sympy.Symbol(n) for n in self.names}
        try:
            expr = parse_expr(str(text), local_dict=dict(symbols), evaluate=True,
                              transformations=standard_transformations + (convert_xor,))
        except Exception as e:
            raise ValueError(f"Не удалось разобрать выражение {text!r}: {e}")
        unknown = {str(s) for s in expr.free_symbols} - set(self.names)
        if unknown:
            raise ValueError(f"Необъявленные переменные {sorted(unknown)} в выражении {text!r}")
        poly = sympy.Poly(expr, *[symbols[n] for n in self.names])
        terms: Dict[Exponent, Scalar] = {}
        for monom, coeff in poly.terms():
            if not coeff.is_Rational:
                raise ValueError(f"Коэффициент {coeff} в {text!r} не рационален")
            terms[tuple(monom)] = Scalar(Fraction(int(coeff.p), int(coeff.q)))
        return Polynomial(self, terms)


def monomials_of_degree(ring: PolyRing, d: int, weight: Optional[Weight] = None) -> List[Exponent]:
    """
    Все мономы внутренней степени d (и заданного веса тора, если weight указан),
    в лексикографическом порядке по убыванию.
    """
    out: List[Exponent] = []
    n = ring.nvars

    def rec(i: int, remaining: int, acc: List[int]) -> None:
        if i == n:
            if remaining == 0:
                out.append(tuple(acc))
            return
        deg = ring.degrees[i]
        for e in range(remaining // deg, -1, -1):
            acc.append(e)
            rec(i + 1, remaining - e * deg, acc)
            acc.pop()

    if d < 0:
        return []
    rec(0, d, [])
    if weight is not None:
        out = [m for m in out if ring.weight_of(m) == tuple(weight)]
    return out


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


def _add(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


# ------------------ многочлены ------------------ #

class Polynomial:
    """
    Конечное отображение показатель -> Scalar; нулевые коэффициенты не храним.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Dict[Exponent, Scalar]) -> None:
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", {e: c for e, c in terms.items() if not c.is_zero()})

    def __setattr__(self, key, value):
        raise AttributeError("Polynomial неизменяем")

    # ---- арифметика ----

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("Многочлены из разных колец")
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return self.ring.const(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, ZERO) + c
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction, Scalar)):
            s = as_scalar(other)
            return Polynomial(self.ring, {e: c * s for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: Dict[Exponent, Scalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add(e1, e2)
                terms[e] = terms.get(e, ZERO) + c1 * c2
        return Polynomial(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def mul_term(self, exp: Exponent, c: Scalar) -> "Polynomial":
        return Polynomial(self.ring, {_add(e, exp): v * c for e, v in self.terms.items()})

    # ---- свойства ----

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms))

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.ring.nvars, ZERO)

    def degree(self) -> int:
        """Внутренняя степень (максимум по мономам); -1 для нуля."""
        if not self.terms:
            return -1
        return max(self.ring.degree_of(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({self.ring.degree_of(e) for e in self.terms}) <= 1

    def weight(self) -> Optional[Weight]:
        """Вес тора, если многочлен однороден по весу, иначе None."""
        ws = {self.ring.weight_of(e) for e in self.terms}
        if len(ws) == 1:
            return next(iter(ws))
        if not ws:
            return tuple(0 for _ in range(self.ring.torus_rank))
        return None

    def diff(self, i: int) -> "Polynomial":
        """Частная производная по i-й переменной."""
        terms: Dict[Exponent, Scalar] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = tuple(x - 1 if k == i else x for k, x in enumerate(e))
            terms[ne] = c * e[i]
        return Polynomial(self.ring, terms)

    def substitute(self, values: Dict[int, "Polynomial"]) -> "Polynomial":
        """Подставить вместо переменных с индексами из values заданные многочлены."""
        out = self.ring.zero()
        for e, c in self.terms.items():
            term = self.ring.const(c)
            rest = list(e)
            for i, p in values.items():
                if e[i]:
                    term = term * (p ** e[i])
                    rest[i] = 0
            out = out + term.mul_term(tuple(rest), ONE)
        return out

    # ---- порядок мономов ----

    def leading(self, order: str) -> Tuple[Exponent, Scalar]:
        if not self.terms:
            raise ValueError("У нулевого многочлена нет старшего члена")
        key = order_key(self.ring, order)
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def sorted_terms(self, order: str) -> List[Tuple[Exponent, Scalar]]:
        key = order_key(self.ring, order)
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def __repr__(self) -> str:
        return self.to_str()

    def to_str(self, order: str = "grlex") -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms(order):
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(self.ring.names, e) if k
            )
            if not mono:
                parts.append(f"{c}")
            elif c == ONE:
                parts.append(mono)
            elif c == -ONE:
                parts.append(f"-{mono}")
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def order_key(ring: PolyRing, order: str):
    """
    Ключ сравнения мономов: больший ключ = старший моном.
    grlex/grevlex используют весовую внутреннюю степень.
    """
    if order == "lex":
        return lambda e: e
    if order == "grlex":
        return lambda e: (ring.degree_of(e), e)
    if order == "grevlex":
        return lambda e: (ring.degree_of(e), tuple(-x for x in reversed(e)))
    raise ValueError(f"Неизвестный мономиальный порядок: {order!r}")


# ------------------ деление и базисы Грёбнера ------------------ #

def _monic(p: Polynomial, order: str) -> Tuple[Polynomial, Scalar]:
    _, lc = p.leading(order)
    inv = lc.inverse()
    return p * inv, inv


def divide(f: Polynomial, divisors: Sequence[Polynomial], order: str) -> Tuple[List[Polynomial], Polynomial]:
    """
    Многомерное деление с остатком: f = Σ q_i·g_i + r,
    ни один моном r не делится на старшие мономы g_i.
    """
    ring = f.ring
    leads = [g.leading(order) for g in divisors]
    quotients: List[Dict[Exponent, Scalar]] = [dict() for _ in divisors]
    remainder: Dict[Exponent, Scalar] = {}
    p = f
    while not p.is_zero():
        e, c = p.leading(order)
        for i, (le, lc) in enumerate(leads):
            if _divides(le, e):
                m = _sub(e, le)
                coeff = c / lc
                quotients[i][m] = quotients[i].get(m, ZERO) + coeff
                p = p - divisors[i].mul_term(m, coeff)
                break
        else:
            remainder[e] = c
            p = Polynomial(ring, {k: v for k, v in p.terms.items() if k != e})
    return [Polynomial(ring, q) for q in quotients], Polynomial(ring, remainder)


def normal_form(f: Polynomial, gb: Sequence[Polynomial], order: str = "grlex") -> Polynomial:
    """
    Остаток от деления на базис Грёбнера; ноль тогда и только тогда, когда f в идеале.
    """
    if not gb:
        return f
    return divide(f, gb, order)[1]


@dataclass
class _Tracked:
    poly: Polynomial
    cof: List[Polynomial]   # poly = Σ cof[j]·gens[j]


def _combine(a: _Tracked, ca: Polynomial, b: _Tracked, cb: Polynomial) -> _Tracked:
    return _Tracked(
        a.poly * ca - b.poly * cb,
        [x * ca - y * cb for x, y in zip(a.cof, b.cof)],
    )


def _reduce_tracked(t: _Tracked, basis: Sequence[_Tracked], order: str, full: bool = True) -> _Tracked:
    ring = t.poly.ring
    p = t.poly
    cof = list(t.cof)
    rem: Dict[Exponent, Scalar] = {}
    leads = [b.poly.leading(order) for b in basis]
    while not p.is_zero():
        e, c = p.leading(order)
        for b, (le, lc) in zip(basis, leads):
            if _divides(le, e):
                m = _sub(e, le)
                coeff = c / lc
                p = p - b.poly.mul_term(m, coeff)
                cof = [x - y.mul_term(m, coeff) for x, y in zip(cof, b.cof)]
                break
        else:
            if not full:
                break
            rem[e] = c
            p = Polynomial(ring, {k: v for k, v in p.terms.items() if k != e})
    return _Tracked(p + Polynomial(ring, rem), cof)


def _buchberger_tracked(gens: Sequence[Polynomial], order: str) -> List[_Tracked]:
    if not gens:
        return []
    ring = gens[0].ring
    k = len(gens)
    unit = [ring.zero()] * k
    basis: List[_Tracked] = []
    for j, g in enumerate(gens):
        if g.is_zero():
            continue
        cof = list(unit)
        cof[j] = ring.one()
        basis.append(_Tracked(g, cof))

    key = order_key(ring, order)
    lex_key = order_key(ring, "lex")

    def pair_key(i: int, j: int):
        # нормальная стратегия: минимальный lcm, затем степень и lex
        lcm = _lcm(basis[i].poly.leading(order)[0], basis[j].poly.leading(order)[0])
        return (key(lcm), ring.degree_of(lcm), lex_key(lcm), i, j)

    pairs = sorted(combinations(range(len(basis)), 2), key=lambda ij: pair_key(*ij))
    steps = 0
    while pairs:
        i, j = pairs.pop(0)
        ei, ci = basis[i].poly.leading(order)
        ej, cj = basis[j].poly.leading(order)
        lcm = _lcm(ei, ej)
        # критерий Бухбергера: взаимно простые старшие мономы
        if _add(ei, ej) == lcm:
            continue
        mi = ring.monomial(_sub(lcm, ei), ci.inverse())
        mj = ring.monomial(_sub(lcm, ej), cj.inverse())
        s = _combine(basis[i], mi, basis[j], mj)
        r = _reduce_tracked(s, basis, order)
        steps += 1
        if r.poly.is_zero():
            continue
        basis.append(r)
        new = len(basis) - 1
        pairs.extend((a, new) for a in range(new))
        pairs.sort(key=lambda ij: pair_key(*ij))
    logger.debug("buchberger: %d S-пар редуцировано, %d элементов до упрощения", steps, len(basis))

    # минимизация: выбросить элементы, чей старший моном делится на чужой
    minimal: List[_Tracked] = []
    for idx, b in enumerate(basis):
        lb = b.poly.leading(order)[0]
        redundant = False
        for jdx, other in enumerate(basis):
            if jdx == idx:
                continue
            lo = other.poly.leading(order)[0]
            if _divides(lo, lb) and (lo != lb or jdx < idx):
                redundant = True
                break
        if not redundant:
            minimal.append(b)

    # редукция хвостов и нормировка
    reduced: List[_Tracked] = []
    for idx, b in enumerate(minimal):
        others = [o for jdx, o in enumerate(minimal) if jdx != idx]
        r = _reduce_tracked(b, others, order) if others else b
        _, lc = r.poly.leading(order)
        inv = lc.inverse()
        reduced.append(_Tracked(r.poly * inv, [c * inv for c in r.cof]))
    reduced.sort(key=lambda t: key(t.poly.leading(order)[0]), reverse=True)
    return reduced


def buchberger(ideal: "IdealPresentation", order: Optional[str] = None) -> Tuple[Polynomial, ...]:
    """
    Редуцированный базис Грёбнера (нормальная стратегия выбора S-пар).
    """
    order = order or ideal.order
    return tuple(t.poly for t in _buchberger_tracked(ideal.generators, order))


@dataclass
class IdealPresentation:
    ring: PolyRing
    generators: Tuple[Polynomial, ...]
    order: str = "grlex"
    _gb_cache: Dict[str, Tuple[Polynomial, ...]] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.order not in ORDERS:
            raise ValueError(f"Неизвестный мономиальный порядок: {self.order!r}")
        self.generators = tuple(self.generators)
        for g in self.generators:
            if g.ring != self.ring:
                raise ValueError("Образующая идеала из другого кольца")

    @classmethod
    def of(cls, ring: PolyRing, gens: Iterable[Union[Polynomial, str]], order: str = "grlex") -> "IdealPresentation":
        polys = tuple(g if isinstance(g, Polynomial) else ring.parse(g) for g in gens)
        return cls(ring, polys, order)

    def groebner(self, order: Optional[str] = None) -> Tuple[Polynomial, ...]:
        order = order or self.order
        if order not in self._gb_cache:
            self._gb_cache[order] = buchberger(self, order)
        return self._gb_cache[order]

    def contains(self, f: Polynomial) -> bool:
        return normal_form(f, self.groebner(), self.order).is_zero()

    def leading_monomials(self, order: Optional[str] = None) -> List[Exponent]:
        order = order or self.order
        return [g.leading(order)[0] for g in self.groebner(order)]

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.groebner())

    def __add__(self, other: "IdealPresentation") -> "IdealPresentation":
        return IdealPresentation(self.ring, self.generators + other.generators, self.order)


def standard_monomials(ideal: IdealPresentation, d: int, weight: Optional[Weight] = None) -> List[Exponent]:
    """
    Базис R/I в степени d: мономы, не делящиеся на старшие мономы базиса Грёбнера.
    """
    leads = ideal.leading_monomials()
    return [m for m in monomials_of_degree(ideal.ring, d, weight)
            if not any(_divides(le, m) for le in leads)]


# ------------------ ряды Гильберта ------------------ #

@dataclass(frozen=True)
class HilbertData:
    """
    Ряд Гильберта R/I = numerator(t) / ∏_v (1 - t^{deg v}).
    """

    numerator: Tuple[int, ...]
    variable_degrees: Tuple[int, ...]

    @property
    def ambient_vars(self) -> int:
        return len(self.variable_degrees)

    def hilbert_function(self, n: int) -> List[int]:
        """Значения функции Гильберта в степенях 0..n."""
        coeffs = [self.numerator[k] if k < len(self.numerator) else 0 for k in range(n + 1)]
        for d in self.variable_degrees:
            # деление на (1 - t^d) = префиксная сумма с шагом d
            for k in range(d, n + 1):
                coeffs[k] += coeffs[k - d]
        return coeffs


def _trim(p: List[int]) -> Tuple[int, ...]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p) if p else (0,)


def _minimalize(gens: List[Exponent]) -> List[Exponent]:
    uniq = sorted(set(gens))
    return [g for g in uniq if not any(h != g and _divides(h, g) for h in uniq)]


def _monomial_numerator(gens: List[Exponent], ring: PolyRing) -> List[int]:
    gens = _minimalize(gens)
    if not gens:
        return [1]
    if any(sum(g) == 0 for g in gens):
        return [0]
    *rest, last = gens
    base = _monomial_numerator(rest, ring)
    colon = [tuple(max(0, a - b) for a, b in zip(g, last)) for g in rest]
    sub = _monomial_numerator(colon, ring)
    shift = ring.degree_of(last)
    out = list(base) + [0] * max(0, shift + len(sub) - len(base))
    for k, c in enumerate(sub):
        out[k + shift] -= c
    return out


def hilbert_series(ideal: IdealPresentation) -> HilbertData:
    """
    Числитель ряда Гильберта R/I, вычисленный по идеалу старших мономов.
    """
    for g in ideal.generators:
        if not g.is_homogeneous():
            raise ValueError(f"Идеал неоднороден: {g}")
    leads = ideal.leading_monomials()
    num = _trim(list(_monomial_numerator(list(leads), ideal.ring)))
    return HilbertData(num, ideal.ring.degrees)


def _expected_numerator(degrees: Sequence[int]) -> Tuple[int, ...]:
    out = [1]
    for d in degrees:
        nxt = out + [0] * d
        for k, c in enumerate(out):
            nxt[k + d] -= c
        out = nxt
    return _trim(out)


@dataclass(frozen=True)
class RegularityCertificate:
    is_regular: bool
    degrees: Tuple[int, ...]
    actual_numerator: Tuple[int, ...]
    expected_numerator: Tuple[int, ...]

    def __bool__(self) -> bool:
        return self.is_regular


def is_regular_sequence(seq: Sequence[Polynomial], ring: PolyRing) -> RegularityCertificate:
    """
    Критерий через числитель Гильберта: последовательность однородных элементов
    регулярна тогда и только тогда, когда числитель R/(g) равен ∏(1 - t^{deg g_i}).
    """
    for g in seq:
        if not g.is_homogeneous():
            raise ValueError(f"Элемент последовательности неоднороден: {g}")
    if any(g.is_zero() or g.is_constant() for g in seq):
        degs = tuple(max(0, g.degree()) for g in seq)
        return RegularityCertificate(False, degs, (), _expected_numerator(degs))
    degs = tuple(g.degree() for g in seq)
    data = hilbert_series(IdealPresentation(ring, tuple(seq)))
    expected = _expected_numerator(degs)
    return RegularityCertificate(data.numerator == expected, degs, data.numerator, expected)


def lift_coefficients(a: Polynomial, gens: Sequence[Polynomial], order: str = "grlex") -> List[Polynomial]:
    """
    Найти c_j с a = Σ c_j·g_j (деление с отслеживанием частных по базису Грёбнера).
    """
    ring = a.ring
    if not gens:
        if a.is_zero():
            return []
        raise NotInIdeal(f"{a} не лежит в нулевом идеале")
    tracked = _buchberger_tracked(gens, order)
    start = _Tracked(a, [ring.zero()] * len(gens))
    if not tracked:
        if a.is_zero():
            return [ring.zero()] * len(gens)
        raise NotInIdeal(f"{a} не лежит в идеале {list(gens)}")
    r = _reduce_tracked(start, tracked, order)
    if not r.poly.is_zero():
        raise NotInIdeal(f"{a} не лежит в идеале {list(gens)}: нормальная форма {r.poly}")
    # a - Σ cof·g = 0  =>  a = Σ (-cof)·g
    coeffs = [-c for c in r.cof]
    check = ring.zero()
    for c, g in zip(coeffs, gens):
        check = check + c * g
    if check != a:
        raise RuntimeError("Разложение по образующим не сходится при перемножении")
    return coeffs
