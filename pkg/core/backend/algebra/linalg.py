# core/backend/algebra/linalg.py

"""
linalg.py

Точная линейная алгебра над Q и над круговыми полями Q(ζ_n).

Что здесь есть:
  - Scalar         : элемент Q(ζ_n), кортеж коэффициентов по модулю Φ_n
  - SparseMatrix   : разреженная матрица (row, col) -> Scalar, нулей не храним
  - rank(...)      : ранг безделительным методом Барейса, детерминированный pivot
  - FiniteComplex  : конечный коцепной комплекс d_k: term_k -> term_{k+1}
  - homology_dims  : размерности когомологий (с проверкой d∘d = 0)
  - PoincareSeries : N(t)/D(t) с целыми коэффициентами, обрезка ряда

Всё неизменяемо после создания, функции чистые.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import sympy

logger = logging.getLogger(__name__)


class NotAComplex(Exception):
    """Композиция соседних дифференциалов не равна нулю."""
    pass


Rational = Union[int, Fraction]


# ------------------ круговые поля ------------------ #

@lru_cache(maxsize=None)
def cyclotomic_modulus(n: int) -> Tuple[int, ...]:
    """
    Коэффициенты Φ_n от младшего к старшему (многочлен унитарный).
    """
    if n < 1:
        raise ValueError(f"Порядок корня из единицы должен быть >= 1, получено {n}")
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.cyclotomic_poly(n, x), x)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


def _field_degree(n: int) -> int:
    return len(cyclotomic_modulus(n)) - 1


def _reduce(coeffs: Sequence[Fraction], n: int) -> Tuple[Fraction, ...]:
    mod = cyclotomic_modulus(n)
    deg = len(mod) - 1
    work = list(coeffs)
    for top in range(len(work) - 1, deg - 1, -1):
        c = work[top]
        if c == 0:
            continue
        shift = top - deg
        for i, m in enumerate(mod):
            work[shift + i] -= c * m
    work = work[:deg] + [Fraction(0)] * max(0, deg - len(work))
    return tuple(work)


def _poly_trim(p: List[Fraction]) -> List[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: List[Fraction], b: List[Fraction]) -> Tuple[List[Fraction], List[Fraction]]:
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] -= c * bc
        a = _poly_trim(a)
    return q, a


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return _poly_trim(out)


def _inverse_mod(coeffs: Sequence[Fraction], n: int) -> Tuple[Fraction, ...]:
    # расширенный алгоритм Евклида в Q[x] по модулю Φ_n
    r0 = [Fraction(c) for c in cyclotomic_modulus(n)]
    r1 = _poly_trim(list(coeffs))
    s0: List[Fraction] = []
    s1: List[Fraction] = [Fraction(1)]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if len(r0) != 1:
        raise ZeroDivisionError("Элемент не обратим в Q(ζ_n)")
    inv = [c / r0[0] for c in s0]
    return _reduce(inv + [Fraction(0)] * _field_degree(n), n)


class Scalar:
    """
    Точный элемент Q(ζ_n).

    c[j] - коэффициент при ζ_n^j, j < φ(n). Для n = 1 это просто рациональное число.
    Элементы разных n приводятся к общему полю Q(ζ_lcm).
    """

    __slots__ = ("n", "c")

    def __init__(self, value: Union[Rational, Sequence[Rational]] = 0, n: int = 1) -> None:
        if isinstance(value, (int, Fraction)):
            coeffs = [Fraction(value)] + [Fraction(0)] * (_field_degree(n) - 1)
        else:
            coeffs = [Fraction(v) for v in value]
            coeffs += [Fraction(0)] * max(0, _field_degree(n) - len(coeffs))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "c", _reduce(coeffs, n))

    def __setattr__(self, key, value):
        raise AttributeError("Scalar неизменяем")

    @classmethod
    def root_of_unity(cls, n: int, k: int = 1) -> "Scalar":
        """ζ_n^k."""
        k %= n
        coeffs = [Fraction(0)] * max(k + 1, _field_degree(n))
        coeffs[k] = Fraction(1)
        return cls(coeffs, n)

    # ---- приведение к общему полю ----

    def lift(self, n: int) -> "Scalar":
        if n == self.n:
            return self
        if n % self.n != 0:
            raise ValueError(f"Q(ζ_{self.n}) не вложено в Q(ζ_{n})")
        step = n // self.n
        coeffs = [Fraction(0)] * max(1, step * (len(self.c) - 1) + 1)
        for j, cj in enumerate(self.c):
            coeffs[j * step] += cj
        return Scalar(coeffs, n)

    @staticmethod
    def _coerce(other) -> "Scalar":
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(other)
        return NotImplemented  # type: ignore[return-value]

    def _common(self, other: "Scalar") -> Tuple["Scalar", "Scalar"]:
        if self.n == other.n:
            return self, other
        n = self.n * other.n // gcd(self.n, other.n)
        return self.lift(n), other.lift(n)

    # ---- арифметика ----

    def __add__(self, other) -> "Scalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._common(other)
        if a.n == 1:
            return Scalar(a.c[0] + b.c[0])
        return Scalar([x + y for x, y in zip(a.c, b.c)], a.n)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar([-x for x in self.c], self.n)

    def __sub__(self, other) -> "Scalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Scalar":
        return (-self) + other

    def __mul__(self, other) -> "Scalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._common(other)
        if a.n == 1:
            return Scalar(a.c[0] * b.c[0])
        return Scalar(_poly_mul(a.c, b.c), a.n)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("Деление на ноль в Q(ζ_n)")
        if self.n == 1:
            return Scalar(1 / self.c[0])
        return Scalar(_inverse_mod(self.c, self.n), self.n)

    def __truediv__(self, other) -> "Scalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return self.inverse() ** (-k)
        out = Scalar(1, self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # ---- сравнение ----

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.c)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return all(x == 0 for x in self.c[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} не лежит в Q")
        return self.c[0]

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._common(other)
        return a.c == b.c

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.c[0])
        # элементы вне Q могут иметь разные представления в разных Q(ζ_n)
        return hash("cyclotomic")

    def __repr__(self) -> str:
        if self.is_rational():
            return str(self.c[0])
        terms = [f"{c}*z{self.n}^{j}" for j, c in enumerate(self.c) if c != 0]
        return " + ".join(terms)


ZERO = Scalar(0)
ONE = Scalar(1)


def as_scalar(v: Union[Scalar, Rational]) -> Scalar:
    return v if isinstance(v, Scalar) else Scalar(v)


# ------------------ разреженные матрицы ------------------ #

@dataclass(frozen=True)
class SparseMatrix:
    rows: int
    cols: int
    entries: Mapping[Tuple[int, int], Scalar] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: Dict[Tuple[int, int], Scalar] = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"Индекс ({i}, {j}) вне матрицы {self.rows}x{self.cols}")
            v = as_scalar(v)
            if not v.is_zero():
                clean[(i, j)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[Union[Scalar, Rational]]]) -> "SparseMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        entries = {(i, j): as_scalar(v) for i, row in enumerate(data) for j, v in enumerate(row)}
        return cls(rows, cols, entries)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): ONE for i in range(n)})

    def get(self, i: int, j: int) -> Scalar:
        return self.entries.get((i, j), ZERO)

    def is_zero(self) -> bool:
        return not self.entries

    def row_dicts(self) -> List[Dict[int, Scalar]]:
        out: List[Dict[int, Scalar]] = [dict() for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"Несогласованные размеры {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        right = other.row_dicts()
        acc: Dict[Tuple[int, int], Scalar] = {}
        for (i, k), a in self.entries.items():
            for j, b in right[k].items():
                acc[(i, j)] = acc.get((i, j), ZERO) + a * b
        return SparseMatrix(self.rows, other.cols, acc)

    def dense(self) -> List[List[Scalar]]:
        out = [[ZERO] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out


def rank(m: SparseMatrix) -> int:
    """
    Ранг над полем дробей. Безделительное исключение Барейса:
    pivot - первый ненулевой элемент оставшихся строк в порядке (строка, столбец).
    """
    rows = [r for r in m.row_dicts() if r]
    used_cols: set = set()
    prev = ONE
    r = 0
    for step in range(len(rows)):
        pivot_row = None
        pivot_col = None
        for i in range(step, len(rows)):
            cand = [j for j in rows[i] if j not in used_cols]
            if cand:
                pivot_row, pivot_col = i, min(cand)
                break
        if pivot_row is None:
            break
        rows[step], rows[pivot_row] = rows[pivot_row], rows[step]
        prow = rows[step]
        p = prow[pivot_col]
        for i in range(step + 1, len(rows)):
            row = rows[i]
            a = row.get(pivot_col)
            # строки без элемента в столбце pivot не трогаем: масштаб не меняет ранг
            if a is None:
                continue
            new: Dict[int, Scalar] = {j: v * p for j, v in row.items()}
            for j, v in prow.items():
                new[j] = new.get(j, ZERO) - a * v
            rows[i] = {j: v / prev for j, v in new.items() if not v.is_zero()}
        used_cols.add(pivot_col)
        prev = p
        r += 1
    return r


def nullity(m: SparseMatrix) -> int:
    """dim ker m = cols - rank."""
    return m.cols - rank(m)


def _rref(m: SparseMatrix, rhs: Optional[List[Scalar]] = None) -> Tuple[List[Dict[int, Scalar]], List[Scalar], List[Tuple[int, int]]]:
    rows = m.row_dicts()
    rhs = list(rhs) if rhs is not None else [ZERO] * m.rows
    pivots: List[Tuple[int, int]] = []
    r = 0
    for col in range(m.cols):
        piv = next((i for i in range(r, m.rows) if col in rows[i]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rhs[r], rhs[piv] = rhs[piv], rhs[r]
        inv = rows[r][col].inverse()
        rows[r] = {j: v * inv for j, v in rows[r].items()}
        rhs[r] = rhs[r] * inv
        for i in range(m.rows):
            if i != r and col in rows[i]:
                a = rows[i][col]
                merged = dict(rows[i])
                for j, v in rows[r].items():
                    merged[j] = merged.get(j, ZERO) - a * v
                rows[i] = {j: v for j, v in merged.items() if not v.is_zero()}
                rhs[i] = rhs[i] - a * rhs[r]
        pivots.append((r, col))
        r += 1
    return rows, rhs, pivots


def kernel_basis(m: SparseMatrix) -> List[List[Scalar]]:
    """
    Базис ядра m (векторы длины cols), по одному на каждую свободную переменную.
    """
    rows, _, pivots = _rref(m)
    pivot_cols = {col: r for r, col in pivots}
    out: List[List[Scalar]] = []
    for free in range(m.cols):
        if free in pivot_cols:
            continue
        v = [ZERO] * m.cols
        v[free] = ONE
        for col, r in pivot_cols.items():
            v[col] = -rows[r].get(free, ZERO)
        out.append(v)
    return out


def solve(m: SparseMatrix, b: Sequence[Union[Scalar, Rational]]) -> Optional[List[Scalar]]:
    """
    Одно решение m·x = b (свободные переменные = 0) или None, если система несовместна.
    Обычный Гаусс над полем; нужен для малых систем (проекция на конус).
    """
    rows, rhs, pivots = _rref(m, [as_scalar(v) for v in b])
    r = len(pivots)
    if any(not rhs[i].is_zero() for i in range(r, m.rows)):
        return None
    x = [ZERO] * m.cols
    for i, col in pivots:
        x[col] = rhs[i]
    return x


# ------------------ конечные комплексы ------------------ #

@dataclass(frozen=True)
class FiniteComplex:
    """
    term_k для k = start .. start+len(dims)-1,
    differentials[i]: term_{start+i} -> term_{start+i+1} (матрица dims[i+1] x dims[i]).
    """

    start: int
    dims: Tuple[int, ...]
    differentials: Tuple[SparseMatrix, ...]

    def __post_init__(self) -> None:
        if len(self.differentials) != max(0, len(self.dims) - 1):
            raise ValueError("Число дифференциалов должно быть на единицу меньше числа членов")
        for i, d in enumerate(self.differentials):
            if d.cols != self.dims[i] or d.rows != self.dims[i + 1]:
                raise ValueError(
                    f"Дифференциал {self.start + i}: размер {d.rows}x{d.cols}, "
                    f"ожидалось {self.dims[i + 1]}x{self.dims[i]}"
                )

    @property
    def degrees(self) -> range:
        return range(self.start, self.start + len(self.dims))

    def check(self) -> None:
        for i in range(len(self.differentials) - 1):
            comp = self.differentials[i + 1] @ self.differentials[i]
            if not comp.is_zero():
                raise NotAComplex(f"d_{self.start + i + 1} ∘ d_{self.start + i} != 0")


def homology_dims(c: FiniteComplex) -> Dict[int, int]:
    """
    dim H^k = dim ker d_k - rank d_{k-1}.
    """
    c.check()
    ranks = [rank(d) for d in c.differentials]
    out: Dict[int, int] = {}
    for i, k in enumerate(c.degrees):
        out_rank = ranks[i] if i < len(ranks) else 0
        in_rank = ranks[i - 1] if i > 0 else 0
        out[k] = c.dims[i] - out_rank - in_rank
    logger.debug("homology_dims: dims=%s ranks=%s -> %s", c.dims, ranks, out)
    return out


# ------------------ ряды Пуанкаре ------------------ #

def _int_poly_mul(a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
    if not a or not b:
        return (0,)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _int_trim(out)


def _int_trim(p: Sequence[int]) -> Tuple[int, ...]:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p) if p else (0,)


def _int_poly_add(a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
    n = max(len(a), len(b))
    return _int_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


@dataclass(frozen=True)
class PoincareSeries:
    """
    N(t)/D(t), коэффициенты от младшей степени. D - произведение множителей (1 - t^{2k}).
    """

    numerator: Tuple[int, ...] = (1,)
    denominator: Tuple[int, ...] = (1,)

    def __post_init__(self) -> None:
        object.__setattr__(self, "numerator", _int_trim(self.numerator))
        object.__setattr__(self, "denominator", _int_trim(self.denominator))

    @classmethod
    def torus_point(cls, r: int) -> "PoincareSeries":
        """H_T(точка) для тора ранга r: 1/(1-t^2)^r."""
        den: Tuple[int, ...] = (1,)
        for _ in range(r):
            den = _int_poly_mul(den, (1, 0, -1))
        return cls((1,), den)

    def __add__(self, other: "PoincareSeries") -> "PoincareSeries":
        if self.denominator == other.denominator:
            return PoincareSeries(_int_poly_add(self.numerator, other.numerator), self.denominator)
        num = _int_poly_add(
            _int_poly_mul(self.numerator, other.denominator),
            _int_poly_mul(other.numerator, self.denominator),
        )
        return PoincareSeries(num, _int_poly_mul(self.denominator, other.denominator))

    def __neg__(self) -> "PoincareSeries":
        return PoincareSeries(tuple(-c for c in self.numerator), self.denominator)

    def __sub__(self, other: "PoincareSeries") -> "PoincareSeries":
        return self + (-other)

    def __mul__(self, other: "PoincareSeries") -> "PoincareSeries":
        return PoincareSeries(
            _int_poly_mul(self.numerator, other.numerator),
            _int_poly_mul(self.denominator, other.denominator),
        )

    def shift(self, k: int) -> "PoincareSeries":
        """Умножить на t^k."""
        return PoincareSeries((0,) * k + tuple(self.numerator), self.denominator)


def series_truncate(p: PoincareSeries, n: int) -> List[int]:
    """
    Коэффициенты 0..n разложения N(t)/D(t) в степенной ряд.
    """
    den = p.denominator
    if den[0] == 0:
        raise ValueError("У знаменателя нулевой свободный член")
    out: List[int] = []
    for k in range(n + 1):
        acc = Fraction(p.numerator[k] if k < len(p.numerator) else 0)
        for j in range(1, min(k, len(den) - 1) + 1):
            acc -= den[j] * out[k - j]
        val = acc / den[0]
        if val.denominator != 1:
            raise ValueError("Ряд имеет нецелые коэффициенты")
        out.append(int(val))
    return out


def poly_from_truncation(coeffs: Iterable[int]) -> PoincareSeries:
    """Многочлен (знаменатель 1) из списка коэффициентов."""
    return PoincareSeries(tuple(coeffs), (1,))
