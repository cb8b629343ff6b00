"""Finite root systems, Weyl-group words, and the numeric affine tables.

Vertices are labelled 1..N throughout the public API.  Vectors (weights in the
fundamental-weight basis, roots in the simple-root basis) are plain tuples of
ints of length N whose coordinate ``i - 1`` belongs to vertex ``i``.

Conventions follow Kac's numbering, with ``a[i][j] = <h_i, alpha_j>``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

Weight = tuple[int, ...]
Root = tuple[int, ...]
WeylWord = tuple[int, ...]


class CartanError(ValueError):
    """Raised for unknown or malformed Cartan types."""


@dataclass(frozen=True)
class CartanData:
    family: str
    rank: int
    matrix: tuple[tuple[int, ...], ...]
    symmetrizers: tuple[int, ...]

    def __post_init__(self):
        n = self.rank
        a = self.matrix
        if len(a) != n or any(len(row) != n for row in a):
            raise CartanError("Cartan matrix has wrong shape")
        for i in range(n):
            if a[i][i] != 2:
                raise CartanError(f"a[{i + 1}][{i + 1}] != 2")
            for j in range(n):
                if i != j and (a[i][j] > 0 or (a[i][j] == 0) != (a[j][i] == 0)):
                    raise CartanError(f"bad off-diagonal entry at ({i + 1}, {j + 1})")
                if self.symmetrizers[i] * a[i][j] != self.symmetrizers[j] * a[j][i]:
                    raise CartanError("symmetrizers do not symmetrize the matrix")

    @property
    def label(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def index_set(self) -> range:
        return range(1, self.rank + 1)

    @property
    def simply_laced(self) -> bool:
        return self.family in "ADE"

    def adjacent(self, i: int, j: int) -> bool:
        return i != j and self.matrix[i - 1][j - 1] < 0

    def neighbors(self, i: int) -> list[int]:
        return [j for j in self.index_set if self.adjacent(i, j)]

    @cached_property
    def inverse(self) -> tuple[tuple[Fraction, ...], ...]:
        """Exact inverse of the Cartan matrix."""
        return _invert([[Fraction(x) for x in row] for row in self.matrix])


def _invert(m: list[list[Fraction]]) -> tuple[tuple[Fraction, ...], ...]:
    n = len(m)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def _chain(n: int) -> list[list[int]]:
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
        if i + 1 < n:
            a[i][i + 1] = a[i + 1][i] = -1
    return a


def _attach(a: list[list[int]], i: int, j: int) -> None:
    a[i - 1][j - 1] = a[j - 1][i - 1] = -1


def _freeze(a) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(row) for row in a)


_LABEL = re.compile(r"^\s*([A-Ga-g])\s*_?\s*(\d+)\s*$")


def parse_type(label: str) -> tuple[str, int]:
    m = _LABEL.match(label)
    if not m:
        raise CartanError(f"cannot parse Cartan type {label!r}")
    return m.group(1).upper(), int(m.group(2))


@lru_cache(maxsize=None)
def cartan(label: str) -> CartanData:
    """Cartan datum of a finite type such as ``"A3"``, ``"D4"``, ``"B2"``, ``"G2"``."""
    family, n = parse_type(label)
    if family == "A" and n >= 1:
        a, s = _chain(n), [1] * n
    elif family == "D" and n >= 4:
        a = _chain(n - 1) + [[0] * (n - 1)]
        for row in a:
            row.append(0)
        a[n - 1][n - 1] = 2
        a[n - 2][n - 3] = a[n - 3][n - 2] = 0
        _attach(a, n - 2, n - 1)
        _attach(a, n - 2, n)
        s = [1] * n
    elif family == "E" and n in (6, 7, 8):
        a = _chain(n - 1) + [[0] * (n - 1)]
        for row in a:
            row.append(0)
        a[n - 1][n - 1] = 2
        _attach(a, {6: 3, 7: 3, 8: 5}[n], n)
        s = [1] * n
    elif family == "B" and n >= 2:
        a = _chain(n)
        a[n - 1][n - 2] = -2
        s = [2] * (n - 1) + [1]
    elif family == "C" and n >= 2:
        a = _chain(n)
        a[n - 2][n - 1] = -2
        s = [1] * (n - 1) + [2]
    elif family == "F" and n == 4:
        a = _chain(4)
        a[2][1] = -2
        s = [2, 2, 1, 1]
    elif family == "G" and n == 2:
        a = [[2, -1], [-3, 2]]
        s = [3, 1]
    else:
        raise CartanError(f"unsupported finite type {label!r}")
    return CartanData(family, n, _freeze(a), tuple(s))


# -- vectors -----------------------------------------------------------------


def simple_root(c: CartanData, i: int) -> Root:
    _check_index(c, i)
    return tuple(int(j == i) for j in c.index_set)


def fundamental_weight(c: CartanData, i: int) -> Weight:
    _check_index(c, i)
    return tuple(int(j == i) for j in c.index_set)


def root_to_weight(c: CartanData, beta: Sequence[int]) -> Weight:
    """Weight-basis coordinates ``<h_i, beta>`` of a root-lattice vector."""
    return tuple(sum(a * b for a, b in zip(row, beta)) for row in c.matrix)


def weight_to_root(c: CartanData, lam: Sequence[int]) -> tuple[Fraction, ...]:
    """Root-basis coordinates of a weight; rational in general."""
    inv = c.inverse
    # <h_i, lam> = sum_j a_ij x_j  =>  x = A^{-1} lam
    return tuple(sum(inv[i][j] * lam[j] for j in range(c.rank)) for i in range(c.rank))


def weight_to_root_int(c: CartanData, lam: Sequence[int]) -> Root:
    x = weight_to_root(c, lam)
    if any(v.denominator != 1 for v in x):
        raise ValueError(f"weight {tuple(lam)} is not in the root lattice")
    return tuple(int(v) for v in x)


def bilinear(c: CartanData, lam: Sequence[int], mu: Sequence[int]) -> Fraction:
    """Invariant form on weights, normalized by ``(alpha_i, alpha_j) = s_i a_ij``.

    Then ``(Lambda_i, alpha_j) = s_i delta_ij``; for simply-laced types this is
    ``delta_ij``.
    """
    x = weight_to_root(c, lam)
    y = weight_to_root(c, mu)
    s = c.symmetrizers
    return sum(x[i] * y[j] * s[i] * c.matrix[i][j] for i in range(c.rank) for j in range(c.rank))


def pairing(c: CartanData, lam: Sequence[int], beta: Sequence[int]) -> int:
    """``(lam, beta)`` for a weight ``lam`` and a root-lattice vector ``beta``."""
    return sum(l * s * b for l, s, b in zip(lam, c.symmetrizers, beta))


def _check_index(c: CartanData, i: int) -> None:
    if not isinstance(i, int) or not 1 <= i <= c.rank:
        raise IndexError(f"index {i} outside 1..{c.rank}")


def reflect(c: CartanData, i: int, lam: Sequence[int]) -> Weight:
    """``s_i(lam) = lam - <h_i, lam> alpha_i`` on weight coordinates."""
    _check_index(c, i)
    k = lam[i - 1]
    return tuple(x - k * c.matrix[j][i - 1] for j, x in enumerate(lam))


def reflect_root(c: CartanData, i: int, beta: Sequence[int]) -> Root:
    """``s_i`` acting on root-basis coordinates."""
    _check_index(c, i)
    k = sum(a * b for a, b in zip(c.matrix[i - 1], beta))
    out = list(beta)
    out[i - 1] -= k
    return tuple(out)


def apply_word(c: CartanData, word: Iterable[int], lam: Sequence[int]) -> Weight:
    """``s_{w_1} ... s_{w_l}(lam)``: the rightmost letter acts first."""
    out = tuple(lam)
    for i in reversed(tuple(word)):
        out = reflect(c, i, out)
    return out


def apply_word_root(c: CartanData, word: Iterable[int], beta: Sequence[int]) -> Root:
    out = tuple(beta)
    for i in reversed(tuple(word)):
        out = reflect_root(c, i, out)
    return out


# -- root systems ------------------------------------------------------------


@lru_cache(maxsize=None)
def positive_roots(c: CartanData) -> tuple[Root, ...]:
    """All positive roots, ordered by height then lexicographically."""
    if c.family not in "ABCDEFG":
        raise CartanError("positive_roots needs a finite type")
    found = {simple_root(c, i) for i in c.index_set}
    frontier = list(found)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in c.index_set:
                gamma = reflect_root(c, i, beta)
                if sum(gamma) > sum(beta) and gamma not in found:
                    found.add(gamma)
                    nxt.append(gamma)
        frontier = nxt
    return tuple(sorted(found, key=lambda r: (sum(r), r)))


def num_positive_roots(c: CartanData) -> int:
    return len(positive_roots(c))


def is_positive_root(c: CartanData, beta: Sequence[int]) -> bool:
    return tuple(beta) in _positive_root_set(c)


@lru_cache(maxsize=None)
def _positive_root_set(c: CartanData) -> frozenset:
    return frozenset(positive_roots(c))


def word_roots(c: CartanData, word: Sequence[int]) -> list[Root]:
    """``beta_k = s_{w_1} ... s_{w_{k-1}}(alpha_{w_k})`` for each position k."""
    return [apply_word_root(c, word[:k], simple_root(c, word[k])) for k in range(len(word))]


def is_reduced_word_of_w0(c: CartanData, word: Sequence[int]) -> bool:
    try:
        word = tuple(int(i) for i in word)
        if len(word) != num_positive_roots(c) or any(not 1 <= i <= c.rank for i in word):
            return False
        betas = word_roots(c, word)
    except (TypeError, ValueError):
        return False
    return all(is_positive_root(c, b) for b in betas) and len(set(betas)) == len(betas)


def is_convex(c: CartanData, betas: Sequence[Root]) -> bool:
    """``beta_k + beta_l = beta_m`` forces m strictly between k and l."""
    pos = {b: k for k, b in enumerate(betas)}
    for k, bk in enumerate(betas):
        for l in range(k + 1, len(betas)):
            m = pos.get(tuple(x + y for x, y in zip(bk, betas[l])))
            if m is not None and not k < m < l:
                return False
    return True


def rho_weight(c: CartanData) -> Weight:
    return (1,) * c.rank


@lru_cache(maxsize=None)
def longest_word(c: CartanData) -> WeylWord:
    """A reduced word of w0.

    Starting from the dominance witness rho, repeatedly apply the reflection
    with the smallest index whose coordinate is still positive; this walks
    from rho to w0(rho) = -rho through strictly decreasing length steps.
    """
    lam = rho_weight(c)
    letters = []
    while True:
        i = next((j for j in c.index_set if lam[j - 1] > 0), None)
        if i is None:
            break
        lam = reflect(c, i, lam)
        letters.append(i)
    # letters applied left to right act as s_{l_m} ... s_{l_1}(rho) = w0(rho)
    word = tuple(reversed(letters))
    if not is_reduced_word_of_w0(c, word):
        raise AssertionError(f"greedy word for {c.label} is not a reduced word of w0")
    return word


@lru_cache(maxsize=None)
def w0_star(c: CartanData) -> dict[int, int]:
    """The involution with ``w0(alpha_i) = -alpha_{i*}``."""
    w = longest_word(c)
    out = {}
    for i in c.index_set:
        img = apply_word_root(c, w, simple_root(c, i))
        j = next(j for j in c.index_set if img == tuple(-int(k == j) for k in c.index_set))
        out[i] = j
    return out


_DUAL_COXETER = {
    "A": lambda n: n + 1,
    "B": lambda n: 2 * n - 1,
    "C": lambda n: n + 1,
    "D": lambda n: 2 * n - 2,
    "E": lambda n: {6: 12, 7: 18, 8: 30}[n],
    "F": lambda n: 9,
    "G": lambda n: 4,
}


def dual_coxeter(label: str | CartanData) -> int:
    c = label if isinstance(label, CartanData) else cartan(label)
    try:
        return _DUAL_COXETER[c.family](c.rank)
    except KeyError:
        raise CartanError(f"no dual Coxeter number for {c.label}") from None


def dual_coxeter_from_roots(c: CartanData) -> int:
    """``1 + <theta^vee, rho>`` from the highest short coroot; an independent check of the table."""
    # theta is the highest root; its coroot in coroot basis has coordinates
    # theta_i * s_i / s_theta, where s_theta = max symmetrizer
    theta = positive_roots(c)[-1]
    smax = max(c.symmetrizers)
    return 1 + sum(Fraction(t * s, smax) for t, s in zip(theta, c.symmetrizers))


# -- twisted affine tables ----------------------------------------------------

# (simply-laced type, order r) -> twisted label in Kac's list
TWISTED_TYPES = ("A2n-1(2)", "A2n(2)", "Dn+1(2)", "E6(2)", "D4(3)")

_TWISTED = re.compile(r"^\s*([ADE])(\d+)\s*\^?\(\s*([23])\s*\)\s*$")


@dataclass(frozen=True)
class TwistedType:
    """Twisted affine type X_N^(r) together with its loop realization data.

    ``affine`` is the full affine Cartan matrix indexed by 0..n in the
    numbering used here (Kac's, except that A_{2n}^(2) is reversed);
    ``reps[i-1]`` is the vertex of the simply-laced diagram X_N representing
    the tau-orbit identified with i in I0.
    """

    family: str
    big_rank: int
    order: int
    affine: tuple[tuple[int, ...], ...]
    tau: tuple[int, ...]
    reps: tuple[int, ...]

    @property
    def label(self) -> str:
        return f"{self.family}{self.big_rank}^({self.order})"

    @property
    def rank(self) -> int:
        return len(self.affine) - 1

    @property
    def untwisted(self) -> CartanData:
        return cartan(f"{self.family}{self.big_rank}")

    def tau_power(self, p: int, j: int) -> int:
        for _ in range(p % self.order):
            j = self.tau[j - 1]
        return j


def _kac_twisted(family: str, big: int, r: int) -> tuple[list[list[int]], list[int]]:
    """Affine Cartan matrix (Kac numbering, nodes 0..l) and null-root labels."""
    if r == 2 and family == "A" and big % 2 == 0:
        l = big // 2
        a = _chain(l + 1)
        if l == 1:
            a = [[2, -4], [-1, 2]]
        else:
            a[0][1], a[1][0] = -2, -1
            a[l - 1][l], a[l][l - 1] = -2, -1
        labels = [2] * l + [1]
    elif r == 2 and family == "A" and big % 2 == 1 and big >= 5:
        l = (big + 1) // 2
        a = _chain(l + 1)
        a[0][1] = a[1][0] = 0
        a[0][2] = a[2][0] = -1
        a[l - 1][l], a[l][l - 1] = -2, -1
        labels = [1, 1] + [2] * (l - 2) + [1]
    elif r == 2 and family == "D" and big >= 3:
        l = big - 1
        a = _chain(l + 1)
        a[0][1], a[1][0] = -2, -1
        a[l - 1][l], a[l][l - 1] = -1, -2
        labels = [1] * (l + 1)
    elif r == 2 and family == "E" and big == 6:
        a = _chain(5)
        a[2][3], a[3][2] = -2, -1
        labels = [1, 2, 3, 2, 1]
    elif r == 3 and family == "D" and big == 4:
        a = [[2, -1, 0], [-1, 2, -3], [0, -1, 2]]
        labels = [1, 2, 1]
    else:
        raise CartanError(f"unsupported twisted type {family}{big}^({r})")
    return a, labels


def _reverse(a: list[list[int]]) -> list[list[int]]:
    n = len(a)
    return [[a[n - 1 - i][n - 1 - j] for j in range(n)] for i in range(n)]


@lru_cache(maxsize=None)
def twisted_type(label: str) -> TwistedType:
    """Parse labels like ``"A5^(2)"``, ``"D4(3)"``, ``"A4^(2)"``."""
    m = _TWISTED.match(label)
    if not m:
        raise CartanError(f"cannot parse twisted type {label!r}")
    family, big, r = m.group(1), int(m.group(2)), int(m.group(3))
    a, _ = _kac_twisted(family, big, r)
    if family == "A" and big % 2 == 0:
        a = _reverse(a)
    g = cartan(f"{family}{big}")
    n = g.rank
    if family == "A":
        tau = tuple(n + 1 - j for j in g.index_set)
        reps = tuple(range(1, big // 2 + 1)) if big % 2 == 0 else tuple(range(1, (big + 1) // 2 + 1))
    elif family == "D" and r == 2:
        tau = tuple(range(1, n - 1)) + (n, n - 1)
        reps = tuple(range(1, n))
    elif family == "E":
        tau = (5, 4, 3, 2, 1, 6)
        reps = (1, 2, 3, 6)
    else:
        tau = (3, 2, 4, 1)
        reps = (1, 2)
    return TwistedType(family, big, r, _freeze(a), tau, reps)


def null_root(a: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Primitive positive integer kernel vector of an affine Cartan matrix."""
    n = len(a)
    ker = _kernel_vector([[Fraction(x) for x in row] for row in a])
    if ker is None or n == 0:
        raise CartanError("matrix is not of affine type")
    from math import gcd, lcm

    den = lcm(*(x.denominator for x in ker))
    ints = [int(x * den) for x in ker]
    g = gcd(*ints)
    ints = [x // g for x in ints]
    if ints[0] < 0:
        ints = [-x for x in ints]
    if any(x <= 0 for x in ints):
        raise CartanError("null root is not positive")
    return tuple(ints)


def _kernel_vector(m: list[list[Fraction]]) -> list[Fraction] | None:
    rows, cols = len(m), len(m[0])
    m = [row[:] for row in m]
    pivots = []
    r = 0
    for col in range(cols):
        piv = next((k for k in range(r, rows) if m[k][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][col]
        m[r] = [x / p for x in m[r]]
        for k in range(rows):
            if k != r and m[k][col] != 0:
                f = m[k][col]
                m[k] = [x - f * y for x, y in zip(m[k], m[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    if len(free) != 1:
        return None
    f = free[0]
    v = [Fraction(0)] * cols
    v[f] = Fraction(1)
    for row_idx, col in enumerate(pivots):
        v[col] = -m[row_idx][f]
    return v


def affine_real_roots(a: Sequence[Sequence[int]], max_height: int) -> frozenset:
    """Positive real roots of height <= max_height, as coordinate tuples over 0..n.

    Every non-simple positive real root lowers its height under some simple
    reflection, so growing from the simple roots by height-increasing
    reflections reaches all of them.
    """
    n = len(a)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    found = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(n):
                k = sum(x * y for x, y in zip(a[i], beta))
                if k >= 0:
                    continue
                gamma = list(beta)
                gamma[i] -= k
                gamma = tuple(gamma)
                if sum(gamma) <= max_height and gamma not in found:
                    found.add(gamma)
                    nxt.append(gamma)
        frontier = nxt
    return frozenset(found)


def search_d(tt: TwistedType) -> tuple[int, ...]:
    """Smallest d > 0 with alpha_i + d delta a real root, for each i in I0."""
    delta = null_root(tt.affine)
    top = tt.order
    roots = affine_real_roots(tt.affine, 1 + top * sum(delta))
    out = []
    for i in range(1, tt.rank + 1):
        for d in range(1, top + 1):
            v = tuple(d * x + int(j == i) for j, x in enumerate(delta))
            if v in roots:
                out.append(d)
                break
        else:
            raise CartanError(f"no d_{i} <= {top} found for {tt.label}")
    return tuple(out)


def twisted_d_table(tt: TwistedType) -> tuple[int, ...]:
    """Hardcoded d_i: r on tau-fixed representatives, 1 elsewhere.

    A_{2n}^(2) has no tau-fixed vertex, so every d_i is 1 there.
    """
    return tuple(tt.order if tt.tau[j - 1] == j else 1 for j in tt.reps)


def twisted_d(tt: TwistedType) -> tuple[int, ...]:
    """The table value, refused if it disagrees with the real-root search."""
    table = twisted_d_table(tt)
    found = search_d(tt)
    if table != found:
        raise CartanError(f"d table {table} for {tt.label} disagrees with root search {found}")
    return table


def twisted_finite_cartan(tt: TwistedType) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix on I0 = 1..n of a twisted affine type."""
    return tuple(tuple(row[1:]) for row in tt.affine[1:])


def affine_symmetrizers(tt: TwistedType) -> tuple[Fraction, ...]:
    """Symmetrizer of the affine matrix normalized to min 1, or 1/2 for A_{2n}^(2).

    Recorded for completeness; no computation in this package consumes it.
    """
    a = tt.affine
    n = len(a)
    s = [None] * n
    s[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if a[i][j] != 0 and s[j] is None:
                s[j] = s[i] * a[i][j] / a[j][i]
                stack.append(j)
    lo = min(s)
    target = Fraction(1, 2) if tt.family == "A" and tt.big_rank % 2 == 0 else Fraction(1)
    return tuple(x * target / lo for x in s)
