"""Q-data: height functions on folded Dynkin diagrams and their adapted words."""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

from . import rootsys as rs
from .rootsys import CartanData, Root, Weight

IntMatrix = tuple[tuple[int, ...], ...]


class QDatumError(ValueError):
    """A Q-datum is invalid, or an operation's precondition fails."""


class StructuralError(QDatumError):
    """The diagram/automorphism pair itself is malformed."""


# -- diagram automorphisms ---------------------------------------------------


def parse_cycles(text: str, n: int) -> tuple[int, ...]:
    """Permutation of 1..n from cycle notation such as ``"(1 3)"`` or ``"(1,3,4)"``."""
    perm = list(range(1, n + 1))
    text = text.strip()
    if text in ("", "()", "id"):
        return tuple(perm)
    cycles = re.findall(r"\(([^()]*)\)", text)
    if not cycles or re.sub(r"\([^()]*\)", "", text).strip():
        raise StructuralError(f"cannot parse cycles {text!r}")
    seen = set()
    for cyc in cycles:
        elems = [int(x) for x in re.split(r"[\s,]+", cyc.strip()) if x]
        if any(not 1 <= e <= n for e in elems) or seen & set(elems) or len(set(elems)) != len(elems):
            raise StructuralError(f"bad cycle ({cyc}) for n={n}")
        seen |= set(elems)
        for a, b in zip(elems, elems[1:] + elems[:1]):
            perm[a - 1] = b
    return tuple(perm)


def cycles_of(perm: Sequence[int]) -> list[tuple[int, ...]]:
    out, seen = [], set()
    for start in range(1, len(perm) + 1):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        j = perm[start - 1]
        while j != start:
            cyc.append(j)
            seen.add(j)
            j = perm[j - 1]
        if len(cyc) > 1:
            out.append(tuple(cyc))
    return out


def perm_order(perm: Sequence[int]) -> int:
    from math import lcm

    return lcm(1, *(len(c) for c in cycles_of(perm)))


@dataclass(frozen=True)
class Folding:
    """A simply-laced diagram with an automorphism and the induced data for g0.

    ``orbits[i - 1]`` is the sigma-orbit identified with vertex i of g0, and
    ``bar[j - 1]`` the g0 vertex of diagram vertex j.
    """

    cartan: CartanData
    sigma: tuple[int, ...]
    g0: CartanData
    orbits: tuple[tuple[int, ...], ...]
    bar: tuple[int, ...]
    orbit_matrix: IntMatrix

    @property
    def order(self) -> int:
        return perm_order(self.sigma)

    def size(self, i: int) -> int:
        return self.g0.symmetrizers[i - 1]

    def s_of(self, j: int) -> int:
        """Symmetrizer of the g0 vertex carrying diagram vertex j."""
        return self.g0.symmetrizers[self.bar[j - 1] - 1]

    def sigma_power(self, k: int, j: int) -> int:
        for _ in range(k % self.order):
            j = self.sigma[j - 1]
        return j


_FOLD_TARGET = {("A", 2): lambda n: f"B{(n + 1) // 2}", ("D", 2): lambda n: f"C{n - 1}",
                ("E", 2): lambda n: "F4", ("D", 3): lambda n: "G2"}


@lru_cache(maxsize=None)
def induced_cartan(c: CartanData, sigma: tuple[int, ...]) -> Folding:
    """Fold (c, sigma) to the Cartan matrix of g0 and identify orbits with I0."""
    n = c.rank
    if sorted(sigma) != list(c.index_set):
        raise StructuralError("sigma is not a permutation of the vertex set")
    for i in c.index_set:
        for j in c.index_set:
            if c.matrix[i - 1][j - 1] != c.matrix[sigma[i - 1] - 1][sigma[j - 1] - 1]:
                raise StructuralError(f"sigma does not preserve the edge {i}-{j}")
    orbits_raw = sorted({tuple(sorted(_orbit(sigma, i))) for i in c.index_set})
    m = len(orbits_raw)
    cmat = [[0] * m for _ in range(m)]
    for a, S in enumerate(orbits_raw):
        for b, T in enumerate(orbits_raw):
            if a == b:
                if any(c.adjacent(i, j) for i in S for j in S):
                    raise StructuralError(f"orbit {S} contains an edge; no finite-type folding")
                cmat[a][b] = 2
            elif any(c.adjacent(i, j) for i in S for j in T):
                cmat[a][b] = -max(1, len(T) // len(S))
    r = perm_order(sigma)
    if r == 1:
        g0 = c
    else:
        key = (c.family, r)
        if key not in _FOLD_TARGET:
            raise StructuralError(f"({c.label}, order {r}) is not a supported folding")
        g0 = rs.cartan(_FOLD_TARGET[key](n))
    matches = [
        perm for perm in itertools.permutations(range(m))
        if all(cmat[perm[i]][perm[j]] == g0.matrix[i][j] for i in range(m) for j in range(m))
        and all(len(orbits_raw[perm[i]]) == g0.symmetrizers[i] for i in range(m))
    ] if m == g0.rank else []
    if r == 1:
        matches = [tuple(range(m))]
    if len(matches) != 1:
        raise StructuralError(f"orbit matrix of ({c.label}, sigma) is not the Cartan matrix of {g0.label}")
    perm = matches[0]
    orbits = tuple(orbits_raw[perm[i]] for i in range(m))
    bar = [0] * n
    for i, S in enumerate(orbits, start=1):
        for j in S:
            bar[j - 1] = i
    return Folding(c, tuple(sigma), g0, orbits, tuple(bar), tuple(tuple(row) for row in cmat))


def _orbit(sigma: Sequence[int], i: int) -> list[int]:
    out = [i]
    j = sigma[i - 1]
    while j != i:
        out.append(j)
        j = sigma[j - 1]
    return out


FIGURE_ONE = {"B": "A", "C": "D", "F": "E", "G": "D"}


def unfold(g0_label: str) -> tuple[CartanData, tuple[int, ...]]:
    """The simply-laced pair (g, sigma) attached to a finite type g0."""
    family, n = rs.parse_type(g0_label)
    if family in "ADE":
        c = rs.cartan(g0_label)
        return c, tuple(c.index_set)
    if family == "B":
        c = rs.cartan(f"A{2 * n - 1}")
        return c, tuple(2 * n - j for j in c.index_set)
    if family == "C":
        c = rs.cartan(f"D{n + 1}")
        return c, tuple(range(1, n)) + (n + 1, n)
    if family == "F":
        return rs.cartan("E6"), (5, 4, 3, 2, 1, 6)
    if family == "G":
        return rs.cartan("D4"), (3, 2, 4, 1)
    raise rs.CartanError(f"no folding for {g0_label}")


# -- Q-data ------------------------------------------------------------------


@dataclass(frozen=True)
class QDatum:
    cartan: CartanData
    sigma: tuple[int, ...]
    xi: tuple[int, ...]

    def __post_init__(self):
        if len(self.xi) != self.cartan.rank:
            raise StructuralError(f"xi has {len(self.xi)} entries, expected {self.cartan.rank}")
        if len(self.sigma) != self.cartan.rank:
            raise StructuralError("sigma has the wrong length")
        induced_cartan(self.cartan, self.sigma)

    @classmethod
    def make(cls, type_label: str, xi: Sequence[int], sigma: str | Sequence[int] | None = None) -> "QDatum":
        """Build from a type label; non-simply-laced labels unfold to their pair."""
        family, _ = rs.parse_type(type_label)
        if family in "ADE":
            c = rs.cartan(type_label)
            if sigma is None:
                perm = tuple(c.index_set)
            elif isinstance(sigma, str):
                perm = parse_cycles(sigma, c.rank)
            else:
                perm = tuple(sigma)
        else:
            if sigma is not None:
                raise StructuralError("sigma is implied by a non-simply-laced type")
            c, perm = unfold(type_label)
        return cls(c, perm, tuple(int(x) for x in xi))

    @cached_property
    def folding(self) -> Folding:
        return induced_cartan(self.cartan, self.sigma)

    @property
    def g0(self) -> CartanData:
        return self.folding.g0

    @property
    def order(self) -> int:
        return self.folding.order

    def bar(self, j: int) -> int:
        return self.folding.bar[j - 1]

    def s(self, j: int) -> int:
        """``s_{bar j}``, the size of the orbit of vertex j."""
        return self.folding.s_of(j)

    def h(self, j: int) -> int:
        return self.xi[j - 1]

    @cached_property
    def parity(self) -> tuple[int, ...]:
        """epsilon_i for i in I0."""
        return tuple(self.xi[S[0] - 1] % 2 for S in self.folding.orbits)

    def with_xi(self, xi: Sequence[int]) -> "QDatum":
        return QDatum(self.cartan, self.sigma, tuple(xi))

    @property
    def num_roots(self) -> int:
        return rs.num_positive_roots(self.cartan)

    def to_json(self) -> dict:
        return {"type": self.cartan.label, "rank": self.cartan.rank,
                "sigma": [list(c) for c in cycles_of(self.sigma)], "xi": list(self.xi)}

    @classmethod
    def from_json(cls, obj: dict | str) -> "QDatum":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            c = rs.cartan(obj["type"])
            if "rank" in obj and int(obj["rank"]) != c.rank:
                raise StructuralError("rank does not match type")
            sigma = obj.get("sigma", [])
            if isinstance(sigma, str):
                perm = parse_cycles(sigma, c.rank)
            else:
                perm = parse_cycles("".join("(" + " ".join(map(str, cyc)) + ")" for cyc in sigma), c.rank)
            xi = tuple(int(x) for x in obj["xi"])
        except (KeyError, TypeError) as exc:
            raise StructuralError(f"malformed Q-datum: {exc}") from None
        q = cls(c, perm, xi)
        require_valid(q)
        return q


def validate(q: QDatum) -> list[str]:
    """Violations of the height-function axioms; an empty list means valid."""
    f = q.folding
    c = q.cartan
    out = []
    for i in c.index_set:
        for j in c.index_set:
            if i < j and c.adjacent(i, j) and q.s(i) == q.s(j) and abs(q.h(i) - q.h(j)) != q.s(i):
                out.append(f"adjacent heights: |xi_{i} - xi_{j}| = {abs(q.h(i) - q.h(j))} != {q.s(i)}")
    g0 = f.g0
    for i in g0.index_set:
        for j in g0.index_set:
            if not g0.adjacent(i, j) or f.size(i) >= f.size(j):
                continue
            (v,) = f.orbits[i - 1]
            good = [
                w for w in f.orbits[j - 1]
                if abs(q.h(v) - q.h(w)) == 1
                and all(q.h(f.sigma_power(k, w)) == q.h(w) - 2 * k for k in range(f.order))
            ]
            if len(good) != 1:
                out.append(f"orbit heights: vertex {v} has {len(good)} admissible partners in orbit {f.orbits[j - 1]}")
    return out


def require_valid(q: QDatum) -> QDatum:
    bad = validate(q)
    if bad:
        raise QDatumError("; ".join(bad))
    return q


def sources(q: QDatum) -> list[int]:
    c = q.cartan
    return [i for i in c.index_set if all(q.h(i) > q.h(j) for j in c.neighbors(i))]


def reflect_source(q: QDatum, i: int) -> QDatum:
    if i not in sources(q):
        raise QDatumError(f"{i} is not a source of xi={q.xi}")
    xi = list(q.xi)
    xi[i - 1] -= 2 * q.s(i)
    return q.with_xi(xi)


@lru_cache(maxsize=None)
def find_height_function(c: CartanData, sigma: tuple[int, ...], span: int = 6) -> QDatum:
    """Some valid datum on (c, sigma) with xi_1 = 0, by pruned search over [-span, span]."""
    induced_cartan(c, sigma)
    seen = [1]
    for v in seen:
        seen += [w for w in c.neighbors(v) if w not in seen]
    # orbit sizes for the equal-size edge constraint, before a datum exists
    size = {j: len(_orbit(sigma, j)) for j in c.index_set}
    xi = {1: 0}

    def rec(k: int) -> QDatum | None:
        if k == len(seen):
            q = QDatum(c, sigma, tuple(xi[j] for j in c.index_set))
            return None if validate(q) else q
        v = seen[k]
        for x in range(-span, span + 1):
            if all(abs(x - xi[w]) == size[v] for w in c.neighbors(v) if w in xi and size[w] == size[v]):
                xi[v] = x
                found = rec(k + 1)
                if found:
                    return found
                del xi[v]
        return None

    q = rec(1)
    if q is None:
        raise QDatumError(f"no height function found on {c.label} within span {span}")
    return q


def random_height_function(c: CartanData, sigma: Sequence[int], rng, steps: int = 20) -> QDatum:
    """A valid datum obtained from a fixed one by random source reflections and a shift."""
    q = find_height_function(c, tuple(sigma))
    for _ in range(rng.randint(0, steps)):
        q = reflect_source(q, rng.choice(sources(q)))
    shift = rng.randint(-5, 5)
    return q.with_xi([x + shift for x in q.xi])


# -- convex orders -----------------------------------------------------------


@dataclass(frozen=True)
class ConvexOrder:
    """A reduced word of w0 with its roots beta_k, weights nu_k and, when
    adapted to a Q-datum, the heights p_k at which each letter is reflected."""

    cartan: CartanData
    word: tuple[int, ...]
    betas: tuple[Root, ...]
    nus: tuple[Weight, ...]
    qdatum: QDatum | None = None
    heights: tuple[int, ...] | None = None

    @classmethod
    def from_word(cls, c: CartanData, word: Sequence[int]) -> "ConvexOrder":
        word = tuple(word)
        if not rs.is_reduced_word_of_w0(c, word):
            raise QDatumError(f"{word} is not a reduced word of w0 in {c.label}")
        betas = tuple(rs.word_roots(c, word))
        nus = tuple(
            tuple(-x for x in rs.apply_word(c, word[: k + 1], rs.fundamental_weight(c, word[k])))
            for k in range(len(word))
        )
        return cls(c, word, betas, nus)

    @classmethod
    def adapted(cls, q: QDatum, word: Sequence[int]) -> "ConvexOrder":
        """Attach the heights of an adapted word; rejects words that are not adapted."""
        base = cls.from_word(q.cartan, word)
        cur = q
        heights = []
        for i in base.word:
            heights.append(cur.h(i))
            cur = reflect_source(cur, i)
        return cls(q.cartan, base.word, base.betas, base.nus, q, tuple(heights))

    @property
    def length(self) -> int:
        return len(self.word)

    def index(self, beta: Sequence[int]) -> int:
        """0-based position of a positive root."""
        return self.betas.index(tuple(beta))


def _next_letters(c: CartanData, q: QDatum, prefix: tuple[int, ...], roots: set) -> list[int]:
    ok = []
    for i in sources(q):
        beta = rs.apply_word_root(c, prefix, rs.simple_root(c, i))
        if rs.is_positive_root(c, beta) and beta not in roots:
            ok.append(i)
    return ok


def adapted_word(q: QDatum) -> ConvexOrder:
    """Adapted reduced word built by peeling the smallest-index source.

    A source is only taken when the prefix stays reduced.
    """
    require_valid(q)
    c = q.cartan
    cur, word, roots = q, (), set()
    for _ in range(q.num_roots):
        options = _next_letters(c, cur, word, roots)
        if not options:
            raise AssertionError(f"source peeling stalled at {word} for {q}")
        i = options[0]
        roots.add(rs.apply_word_root(c, word, rs.simple_root(c, i)))
        word += (i,)
        cur = reflect_source(cur, i)
    order = ConvexOrder.adapted(q, word)
    if not rs.is_reduced_word_of_w0(c, order.word):
        raise AssertionError("adapted word is not reduced")
    return order


def all_adapted_words(q: QDatum, limit: int | None = None) -> Iterator[tuple[int, ...]]:
    """Every reduced word of w0 adapted to q, by branching over all sources."""
    require_valid(q)
    c = q.cartan
    L = q.num_roots
    count = 0

    def rec(cur: QDatum, word: tuple[int, ...], roots: set):
        nonlocal count
        if len(word) == L:
            count += 1
            if limit is not None and count > limit:
                raise RuntimeError(f"more than {limit} adapted words")
            yield word
            return
        for i in _next_letters(c, cur, word, roots):
            beta = rs.apply_word_root(c, word, rs.simple_root(c, i))
            yield from rec(reflect_source(cur, i), word + (i,), roots | {beta})

    yield from rec(q, (), set())


def commutation_normal_form(c: CartanData, word: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically smallest word in the commutation class of ``word``.

    Repeatedly pull to the front the smallest letter that commutes past every
    letter still ahead of it.
    """
    rest = list(word)
    out = []
    while rest:
        best = None
        for pos, i in enumerate(rest):
            if all(j != i and c.matrix[i - 1][j - 1] == 0 for j in rest[:pos]):
                if best is None or i < rest[best]:
                    best = pos
        out.append(rest.pop(best))
    return tuple(out)


def omega_tilde(o: ConvexOrder) -> dict[Root, tuple[int, int]]:
    if o.heights is None:
        raise QDatumError("omega_tilde needs an order adapted to a Q-datum")
    return {b: (i, p) for b, i, p in zip(o.betas, o.word, o.heights)}


def image_formula(q: QDatum) -> set[tuple[int, int]]:
    """Closed-form image of omega_tilde in terms of xi, w0 and the dual Coxeter number."""
    require_valid(q)
    star = rs.w0_star(q.cartan)
    top = q.order * rs.dual_coxeter(q.g0)
    out = set()
    for i in q.cartan.index_set:
        step = 2 * q.s(i)
        lo = q.h(star[i]) - top
        p = q.h(i)
        while p > lo:
            out.add((i, p))
            p -= step
    return out


# -- generalized Coxeter element ----------------------------------------------


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in zip(*b)) for row in a)


def mat_vec(a: IntMatrix, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def reflection_matrix(c: CartanData, i: int) -> IntMatrix:
    return tuple(zip(*(rs.reflect(c, i, rs.fundamental_weight(c, j)) for j in c.index_set)))


def sigma_matrix(sigma: Sequence[int]) -> IntMatrix:
    n = len(sigma)
    return tuple(tuple(int(sigma[j] == i + 1) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class CoxeterElement:
    """tau as an integer matrix on weight coordinates, with its defining word."""

    matrix: IntMatrix
    word: tuple[int, ...]
    construction: str
    order: int

    def power(self, e: int) -> IntMatrix:
        return _mat_pow(self.matrix, e % self.order)

    def act(self, e: int, lam: Sequence[int]) -> Weight:
        return mat_vec(self.power(e), lam)


@lru_cache(maxsize=None)
def _mat_pow(m: IntMatrix, e: int) -> IntMatrix:
    if e == 0:
        return identity(len(m))
    if e == 1:
        return m
    half = _mat_pow(m, e // 2)
    sq = mat_mul(half, half)
    return mat_mul(sq, m) if e % 2 else sq


def _coxeter_from_word(q: QDatum, word: Sequence[int], construction: str) -> CoxeterElement:
    c = q.cartan
    m = sigma_matrix(q.sigma)
    for i in reversed(tuple(word)):
        m = mat_mul(reflection_matrix(c, i), m)
    one = identity(c.rank)
    cur, k = m, 1
    while cur != one:
        cur = mat_mul(cur, m)
        k += 1
        if k > 100000:
            raise AssertionError("tau has no finite order")
    return CoxeterElement(m, tuple(word), construction, k)


def coxeter_violations(q: QDatum, tau: CoxeterElement, order: ConvexOrder | None = None) -> list[str]:
    """Positions k where the root and weight identities for tau fail."""
    c = q.cartan
    o = order or adapted_word(q)
    out = []
    for k, (i, p, beta) in enumerate(zip(o.word, o.heights, o.betas)):
        s = q.s(i)
        lam = rs.fundamental_weight(c, i)
        gam = tuple(x - y for x, y in zip(lam, tau.act(s, lam)))
        lhs = rs.root_to_weight(c, beta)
        if tau.act((q.h(i) - p) // 2, gam) != lhs:
            out.append(f"k={k + 1}: beta_k != tau^e(gamma)")
        left = rs.apply_word(c, o.word[: k + 1], lam)
        if left != tau.act((q.h(i) - p + 2 * s) // 2, lam):
            out.append(f"k={k + 1}: s_1..s_k(Lambda) != tau^e(Lambda)")
    return out


def _orbit_source_sequences(q: QDatum) -> Iterator[tuple[int, ...]]:
    """Sequences of sources at their turn hitting every sigma-orbit once; smallest index first."""
    m = q.g0.rank

    def rec(cur: QDatum, word: tuple[int, ...], used: frozenset):
        if len(word) == m:
            yield word
            return
        for i in sources(cur):
            if q.bar(i) not in used:
                yield from rec(reflect_source(cur, i), word + (i,), used | {q.bar(i)})

    yield from rec(q, (), frozenset())


@lru_cache(maxsize=None)
def tau_q(q: QDatum) -> CoxeterElement:
    """The generalized sigma-Coxeter element of q.

    Built as s_{i_1} ... s_{i_M} sigma from a source sequence with one letter
    per sigma-orbit, then accepted only if it reproduces every beta_k and every
    s_{i_1}..s_{i_k}(Lambda_{i_k}) of an adapted word.  If no source sequence
    passes, every product of orbit representatives is tried.
    """
    require_valid(q)
    o = adapted_word(q)
    for word in _orbit_source_sequences(q):
        tau = _coxeter_from_word(q, word, "source-sequence")
        if not coxeter_violations(q, tau, o):
            return tau
    for reps in itertools.product(*q.folding.orbits):
        for word in itertools.permutations(reps):
            tau = _coxeter_from_word(q, word, "search")
            if not coxeter_violations(q, tau, o):
                return tau
    raise QDatumError(f"no generalized Coxeter element satisfies the constraints for {q}")


def gamma(q: QDatum, i: int) -> Root:
    """``(1 - tau^{s_i}) Lambda_i`` in root coordinates."""
    c = q.cartan
    tau = tau_q(q)
    lam = rs.fundamental_weight(c, i)
    w = tuple(x - y for x, y in zip(lam, tau.act(q.s(i), lam)))
    root = rs.weight_to_root_int(c, w)
    if not rs.is_positive_root(c, root):
        raise QDatumError(f"gamma_{i} = {root} is not a positive root")
    return root


def orientation_quiver(q: QDatum) -> list[tuple[int, int]]:
    """Arrows i -> j between neighbours with xi_i < xi_j."""
    require_valid(q)
    c = q.cartan
    arrows = []
    for i in c.index_set:
        for j in c.neighbors(i):
            if q.h(i) == q.h(j):
                raise QDatumError(f"edge {i}-{j} has equal heights")
            if q.h(i) < q.h(j):
                arrows.append((i, j))
    return sorted(arrows)
