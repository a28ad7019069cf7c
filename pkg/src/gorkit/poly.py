"""Exact integer polynomials: univariate (dense) and bivariate Laurent (sparse)."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping


class UniPoly:
    """Dense integer polynomial in ``t``; coefficients are stored constant term first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[int, ...] = tuple(c)

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "UniPoly":
        return cls([0] * k + [c])

    @property
    def degree(self) -> float | int:
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = UniPoly([other])
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __repr__(self) -> str:
        return f"UniPoly({list(self.coeffs)})"

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
                coef = str(c) if (c != 1 or not mono) else ""
                if c == -1 and mono:
                    coef = "-"
                terms.append(f"{coef}{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def _coerce(self, other) -> "UniPoly":
        return other if isinstance(other, UniPoly) else UniPoly([other])

    def __add__(self, other) -> "UniPoly":
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return UniPoly(self[i] + o[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "UniPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "UniPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "UniPoly":
        o = self._coerce(other)
        if not self.coeffs or not o.coeffs:
            return UniPoly()
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UniPoly":
        out = UniPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def truncate(self, k: int) -> "UniPoly":
        """Terms of degree ``< k``."""
        return UniPoly(self.coeffs[:max(k, 0)])

    def reverse(self, n: int) -> "UniPoly":
        """``t^n p(1/t)``; requires ``n >= degree``."""
        if self.coeffs and n < self.degree:
            raise ValueError("reversal degree below polynomial degree")
        return UniPoly(self[n - i] for i in range(n + 1))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def substitute_monomial(self, i: int, j: int) -> "LaurentPoly2":
        """``p(u^i v^j)`` as a bivariate Laurent polynomial."""
        return LaurentPoly2({(k * i, k * j): c for k, c in enumerate(self.coeffs) if c})


class LaurentPoly2:
    """Sparse integer Laurent polynomial in ``u, v``; keys are exponent pairs."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], int] | None = None):
        self.terms: dict[tuple[int, int], int] = {
            (int(i), int(j)): int(c) for (i, j), c in (terms or {}).items() if c
        }

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly2":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, i: int, j: int, c: int = 1) -> "LaurentPoly2":
        return cls({(i, j): c})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly2.constant(other)
        return isinstance(other, LaurentPoly2) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"LaurentPoly2({self.sorted_terms()})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in self.sorted_terms():
            mono = []
            if i:
                mono.append("u" if i == 1 else f"u^{i}")
            if j:
                mono.append("v" if j == 1 else f"v^{j}")
            m = "*".join(mono)
            if not m:
                parts.append(str(c))
            elif c == 1:
                parts.append(m)
            elif c == -1:
                parts.append("-" + m)
            else:
                parts.append(f"{c}*{m}")
        return " + ".join(parts).replace("+ -", "- ")

    def sorted_terms(self) -> list[tuple[tuple[int, int], int]]:
        return sorted(self.terms.items())

    def coeff(self, i: int, j: int) -> int:
        return self.terms.get((i, j), 0)

    def _coerce(self, other) -> "LaurentPoly2":
        return other if isinstance(other, LaurentPoly2) else LaurentPoly2.constant(other)

    def __add__(self, other) -> "LaurentPoly2":
        o = self._coerce(other)
        out = dict(self.terms)
        for k, c in o.terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly2(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly2":
        return LaurentPoly2({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "LaurentPoly2":
        return self + (-self._coerce(other))

    def __mul__(self, other) -> "LaurentPoly2":
        o = self._coerce(other)
        out: dict[tuple[int, int], int] = {}
        for (i, j), a in self.terms.items():
            for (k, l), b in o.terms.items():
                key = (i + k, j + l)
                out[key] = out.get(key, 0) + a * b
        return LaurentPoly2(out)

    __rmul__ = __mul__

    def shift(self, di: int, dj: int) -> "LaurentPoly2":
        return LaurentPoly2({(i + di, j + dj): c for (i, j), c in self.terms.items()})

    def swap(self) -> "LaurentPoly2":
        """Exchange the roles of ``u`` and ``v``."""
        return LaurentPoly2({(j, i): c for (i, j), c in self.terms.items()})

    def invert(self, in_u: bool = True, in_v: bool = True) -> "LaurentPoly2":
        """Substitute ``u -> 1/u`` and/or ``v -> 1/v``."""
        return LaurentPoly2(
            {((-i if in_u else i), (-j if in_v else j)): c for (i, j), c in self.terms.items()}
        )

    def is_polynomial(self) -> bool:
        return all(i >= 0 and j >= 0 for i, j in self.terms)

    @property
    def total_degree(self) -> float | int:
        return max((i + j for i, j in self.terms), default=float("-inf"))

    def __call__(self, u, v):
        """Exact evaluation; negative exponents go through :class:`Fraction`."""
        total = Fraction(0)
        for (i, j), c in self.terms.items():
            total += c * Fraction(u) ** i * Fraction(v) ** j
        return int(total) if total.denominator == 1 else total

    def at_u(self, u) -> dict[int, Fraction]:
        """Specialize ``u``; returns ``{exponent of v: coefficient}``."""
        out: dict[int, Fraction] = {}
        for (i, j), c in self.terms.items():
            out[j] = out.get(j, 0) + c * Fraction(u) ** i
        return {j: c for j, c in out.items() if c}

    def at_v(self, v) -> dict[int, Fraction]:
        return self.swap().at_u(v)
