"""Quantum Cartan matrices and the z = 0 expansion of their inverses."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

from . import qdatum as qd
from . import rootsys as rs
from .rootsys import CartanData


class CutoffError(ValueError):
    """A coefficient outside the computed window was requested."""

    def __init__(self, needed: int, have: int):
        super().__init__(f"exponent {needed} exceeds cutoff {have}; rerun with cutoff >= {needed}")
        self.needed = needed


class LaurentPoly:
    """Integer Laurent polynomial in z, stored as ``{exponent: coefficient}``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[int, int] = {}
        for e, v in items:
            c[e] = c.get(e, 0) + v
        self._c = {e: v for e, v in c.items() if v}

    @classmethod
    def monomial(cls, e: int, v: int = 1) -> "LaurentPoly":
        return cls({e: v})

    @classmethod
    def qint(cls, k: int) -> "LaurentPoly":
        """``[k]_z = (z^k - z^-k) / (z - z^-1)``."""
        sign = 1 if k >= 0 else -1
        k = abs(k)
        return cls({k - 1 - 2 * t: sign for t in range(k)})

    def __getitem__(self, e: int) -> int:
        return self._c.get(e, 0)

    def items(self):
        return sorted(self._c.items())

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        return isinstance(other, LaurentPoly) and self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        return LaurentPoly(list(self._c.items()) + list(other._c.items()))

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -v for e, v in self._c.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly({e: v * other for e, v in self._c.items()})
        return LaurentPoly((a + b, x * y) for a, x in self._c.items() for b, y in other._c.items())

    __rmul__ = __mul__

    @property
    def low(self) -> int:
        return min(self._c)

    @property
    def high(self) -> int:
        return max(self._c)

    def at_one(self) -> int:
        return sum(self._c.values())

    def __repr__(self):
        if not self._c:
            return "0"
        return " + ".join(f"{v}*z^{e}" for e, v in self.items())


ZERO = LaurentPoly()
ONE = LaurentPoly({0: 1})


@dataclass(frozen=True)
class QuantumCartan:
    g0: CartanData
    entries: tuple[tuple[LaurentPoly, ...], ...]

    @property
    def rank(self) -> int:
        return self.g0.rank

    def entry(self, i: int, j: int) -> LaurentPoly:
        return self.entries[i - 1][j - 1]

    def at_one(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(p.at_one() for p in row) for row in self.entries)


def _as_cartan(g0: str | CartanData) -> CartanData:
    return g0 if isinstance(g0, CartanData) else rs.cartan(g0)


@lru_cache(maxsize=None)
def build(g0: str | CartanData) -> QuantumCartan:
    c = _as_cartan(g0)
    s = c.symmetrizers
    rows = []
    for i in range(c.rank):
        row = []
        for j in range(c.rank):
            if i == j:
                row.append(LaurentPoly({s[i]: 1, -s[i]: 1}))
            else:
                row.append(LaurentPoly.qint(c.matrix[i][j]))
        rows.append(tuple(row))
    return QuantumCartan(c, tuple(rows))


def determinant(m: list[list[LaurentPoly]]) -> LaurentPoly:
    """Laplace expansion along rows, memoized on the set of remaining columns."""
    n = len(m)
    memo: dict[tuple[int, int], LaurentPoly] = {}

    def rec(row: int, cols: int) -> LaurentPoly:
        if row == n:
            return ONE
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = ZERO
        sign = 1
        for col in range(n):
            if cols >> col & 1:
                if m[row][col]:
                    total = total + m[row][col] * rec(row + 1, cols & ~(1 << col)) * sign
                sign = -sign
        memo[key] = total
        return total

    return rec(0, (1 << n) - 1)


def adjugate(m: list[list[LaurentPoly]]) -> list[list[LaurentPoly]]:
    n = len(m)
    out = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(m) if k != i]
            d = determinant(minor) if minor else ONE
            out[j][i] = d if (i + j) % 2 == 0 else -d
    return out


def series_divide(num: LaurentPoly, den: LaurentPoly, upto: int) -> dict[int, int]:
    """Coefficients of num/den expanded at z = 0, for exponents <= upto."""
    if not den:
        raise ZeroDivisionError("zero denominator")
    e0, c0 = den.low, den[den.low]
    if not num:
        return {}
    out: dict[int, int] = {}
    start = num.low - e0
    for u in range(start, upto + 1):
        acc = num[u + e0] - sum(den[e0 + t] * out.get(u - t, 0) for t in range(1, u - start + 1))
        if acc % c0:
            raise ArithmeticError(f"lowest determinant coefficient {c0} does not divide {acc}")
        if acc:
            out[u] = acc // c0
    return out


@dataclass(frozen=True)
class InverseSeries:
    """Coefficients ``ã_ij(u)`` of the inverse quantum Cartan matrix for ``u <= cutoff``."""

    a: QuantumCartan
    cutoff: int
    coeffs: tuple[tuple[Mapping[int, int], ...], ...]

    @property
    def rank(self) -> int:
        return self.a.rank

    def coeff(self, i: int, j: int, u: int) -> int:
        if u > self.cutoff:
            raise CutoffError(u, self.cutoff)
        return self.coeffs[i - 1][j - 1].get(u, 0)

    def rows(self, lo: int | None = None) -> list[dict]:
        """Table rows ``{i, j, u, coeff}`` for ``lo <= u <= cutoff``."""
        lo = -self.cutoff if lo is None else lo
        out = []
        for i in range(1, self.rank + 1):
            for j in range(1, self.rank + 1):
                for u in range(lo, self.cutoff + 1):
                    out.append({"i": i, "j": j, "u": u, "coeff": self.coeff(i, j, u)})
        return out


def invert(a: QuantumCartan, cutoff: int) -> InverseSeries:
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    m = [list(row) for row in a.entries]
    det = determinant(m)
    adj = adjugate(m)
    coeffs = tuple(tuple(series_divide(adj[i][j], det, cutoff) for j in range(a.rank)) for i in range(a.rank))
    for i, row in enumerate(coeffs):
        for j, series in enumerate(row):
            bad = [u for u, v in series.items() if u <= 0 and v]
            if bad:
                raise ArithmeticError(f"ã_{i + 1}{j + 1}({bad[0]}) != 0: nonpositive exponent in expansion")
    s = InverseSeries(a, cutoff, coeffs)
    bad = back_multiplication_failures(s)
    if bad:
        raise ArithmeticError(f"inverse series fails back-multiplication at {bad[:3]}")
    return s


def back_multiplication_failures(s: InverseSeries) -> list[tuple[int, int, int]]:
    """Triples (i, k, u) where the z^u coefficient of (Ã A)_ik is not δ_ik δ_u0.

    Checked for -cutoff <= u <= cutoff - max s, where every needed coefficient
    of Ã is inside the window.
    """
    a = s.a
    n = a.rank
    smax = max(a.g0.symmetrizers)
    bad = []
    for i in range(1, n + 1):
        for k in range(1, n + 1):
            for u in range(-s.cutoff, s.cutoff - smax + 1):
                tot = 0
                for j in range(1, n + 1):
                    for e, v in a.entry(j, k).items():
                        tot += s.coeff(i, j, u - e) * v
                if tot != int(i == k and u == 0):
                    bad.append((i, k, u))
    return bad


def default_cutoff(q: qd.QDatum) -> int:
    return 2 * q.order * rs.dual_coxeter(q.g0) + (max(q.xi) - min(q.xi)) + 4


@lru_cache(maxsize=None)
def inverse_for(q: qd.QDatum, cutoff: int | None = None) -> InverseSeries:
    return invert(build(q.g0), cutoff if cutoff is not None else default_cutoff(q))


def _root_pairing(q: qd.QDatum, iota: int, lam) -> int:
    """``(Lambda_iota, lam)`` in the simply-laced g for lam in the root lattice."""
    return rs.weight_to_root_int(q.cartan, lam)[iota - 1]


def pairing_identity(q: qd.QDatum, s: InverseSeries, i: int, j: int, u: int,
                     iota: int | None = None, jota: int | None = None) -> tuple[int, int, bool]:
    """Both sides of ``ã_ij(u) - ã_ij(-u) = (Lambda_iota, tau^e gamma_jota)``."""
    f = q.folding
    iota = f.orbits[i - 1][0] if iota is None else iota
    jota = f.orbits[j - 1][0] if jota is None else jota
    if q.bar(iota) != i or q.bar(jota) != j:
        raise qd.QDatumError("representatives lie in the wrong orbits")
    lhs = s.coeff(i, j, u) - s.coeff(i, j, -u)
    num = u + q.h(jota) - q.h(iota) - f.size(i)
    if num % 2:
        rhs = 0
    else:
        g = rs.root_to_weight(q.cartan, qd.gamma(q, jota))
        rhs = _root_pairing(q, iota, qd.tau_q(q).act(num // 2, g))
    return lhs, rhs, lhs == rhs


def vanishing_failures(q: qd.QDatum, s: InverseSeries, i: int, j: int,
                       all_reps: bool = False) -> list[tuple[int, int, int]]:
    """(iota, jota, u) where a coefficient predicted to vanish is nonzero.

    By default jota ranges over the vertices of its orbit nearest to iota in
    height; with arbitrary representatives the prediction can fail once the
    orbits are nontrivial (e.g. B2 from A3, xi = (-8, -5, -6), iota = 2, jota = 1).
    """
    f = q.folding
    sij = min(f.size(i), f.size(j))
    bad = []
    for iota in f.orbits[i - 1]:
        reps = f.orbits[j - 1]
        if not all_reps:
            gap = min(abs(q.h(iota) - q.h(w)) for w in reps)
            reps = [w for w in reps if abs(q.h(iota) - q.h(w)) == gap]
        for jota in reps:
            for base in (q.h(jota) - q.h(iota) - f.size(i), q.h(iota) - q.h(jota) - f.size(i)):
                u = base
                while u > 0:  # nonpositive exponents vanish identically
                    if u <= s.cutoff and s.coeff(i, j, u):
                        bad.append((iota, jota, u))
                    u -= 2 * sij
    return bad


def vanishing_check(q: qd.QDatum, s: InverseSeries, i: int, j: int) -> bool:
    return not vanishing_failures(q, s, i, j)


def nu_beta_bridge(o: qd.ConvexOrder, s: InverseSeries, k: int, t: int) -> tuple[int, int, bool]:
    """``(nu_k, beta_t)`` against the difference of two inverse-Cartan coefficients (1-based k, t)."""
    q = o.qdatum
    if q is None:
        raise qd.QDatumError("nu_beta_bridge needs an adapted order")
    c = o.cartan
    lhs = rs.pairing(c, o.nus[k - 1], o.betas[t - 1])
    ik, it = o.word[k - 1], o.word[t - 1]
    pk, pt = o.heights[k - 1], o.heights[t - 1]
    a, b = q.bar(ik), q.bar(it)
    sk = q.s(ik)
    rhs = s.coeff(a, b, pt - pk + sk) - s.coeff(a, b, pk - pt - sk)
    return lhs, rhs, lhs == rhs
