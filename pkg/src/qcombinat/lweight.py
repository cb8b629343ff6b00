"""ℓ-weight lattices: fundamental ℓ-weights, ℓ-roots, the order ≤, and the
lattice-level shadows of the full subcategory attached to a Q-datum."""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence, Union

from . import kostant as kp
from . import qdatum as qd
from . import rootsys as rs
from .qdatum import ConvexOrder, QDatum
from .report import Report
from .rootsys import CartanData, Root, TwistedType


class BudgetError(RuntimeError):
    """Enumeration would exceed the configured budget."""

    def __init__(self, size: int, budget: int):
        super().__init__(f"{size} partitions exceed the budget of {budget}")
        self.size = size
        self.budget = budget


@dataclass(frozen=True, order=True)
class TwistedExp:
    """The spectral parameter ``q^m zeta^c`` with ``zeta`` a primitive r-th root of unity."""

    m: int
    c: int
    r: int

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r must be positive")
        object.__setattr__(self, "c", self.c % self.r)

    def power(self, d: int) -> "TwistedExp":
        return TwistedExp(self.m * d, self.c * d, self.r)

    def to_json(self) -> list[int]:
        return [self.m, self.c]


SpectralExp = Union[int, TwistedExp]
Key = tuple[int, SpectralExp]


class LWeight:
    """Finite-support integer combination of fundamental ℓ-weights ``ϖ_{i,e}``."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[Key, int] | Iterable[tuple[Key, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[Key, int] = {}
        for k, v in items:
            c[k] = c.get(k, 0) + v
        self._c = {k: v for k, v in c.items() if v}
        self._hash = None

    @classmethod
    def fundamental(cls, i: int, e: SpectralExp, v: int = 1) -> "LWeight":
        return cls({(i, e): v})

    def __getitem__(self, key: Key) -> int:
        return self._c.get(key, 0)

    def items(self) -> list[tuple[Key, int]]:
        return sorted(self._c.items())

    @property
    def support(self) -> list[Key]:
        return sorted(self._c)

    def __bool__(self):
        return bool(self._c)

    def __len__(self):
        return len(self._c)

    def __eq__(self, other):
        return isinstance(other, LWeight) and self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __add__(self, other: "LWeight") -> "LWeight":
        return LWeight(list(self._c.items()) + list(other._c.items()))

    def __neg__(self) -> "LWeight":
        return LWeight({k: -v for k, v in self._c.items()})

    def __sub__(self, other: "LWeight") -> "LWeight":
        return self + (-other)

    def __mul__(self, n: int) -> "LWeight":
        return LWeight({k: v * n for k, v in self._c.items()})

    __rmul__ = __mul__

    def is_dominant(self) -> bool:
        return all(v > 0 for v in self._c.values())

    def to_json(self) -> list[dict]:
        out = []
        for (i, e), v in self.items():
            out.append({"i": i, "p": e.to_json() if isinstance(e, TwistedExp) else e, "coeff": v})
        return out

    def __repr__(self):
        if not self._c:
            return "0"
        return " + ".join(f"{v}*w[{i},{e}]" for (i, e), v in self.items())


ZERO = LWeight()


def cl(w: LWeight, rank: int) -> tuple[int, ...]:
    """Classical weight, in fundamental-weight coordinates."""
    out = [0] * rank
    for (i, _), v in w.items():
        out[i - 1] += v
    return tuple(out)


# -- untwisted ℓ-roots and the order -------------------------------------------


def lroot(g0: CartanData, i: int, p: int) -> LWeight:
    s = g0.symmetrizers[i - 1]
    terms = [((i, p + s), 1), ((i, p - s), 1)]
    for j in g0.index_set:
        if j == i:
            continue
        a = g0.matrix[j - 1][i - 1]
        for k in range(1, -a + 1):
            terms.append(((j, p - a + 1 - 2 * k), -1))
    w = LWeight(terms)
    col = tuple(g0.matrix[j][i - 1] for j in range(g0.rank))
    assert cl(w, g0.rank) == col, "classical image of an ℓ-root must be the simple root"
    return w


def decompose(g0: CartanData, d: LWeight) -> dict[tuple[int, int], int] | None:
    """Signed coefficients of d over ℓ-roots, or None if d is outside their span.

    The top term ϖ_{i,p+s_i} of α_{i,p} is never hit by another ℓ-root whose
    own top exponent is at most p + s_i, because -a_ij - 1 < s_j. So the
    system is triangular and eliminating the highest exponent first solves it
    exactly. Every root used satisfies p - s_i >= min exponent of d.
    """
    if not d:
        return {}
    if any(not isinstance(e, int) for _, e in d.support):
        raise TypeError("decompose works on integer spectral exponents")
    lo = min(e for _, e in d.support)
    rem: dict[tuple[int, int], int] = dict(d.items())
    coeffs: dict[tuple[int, int], int] = defaultdict(int)
    s = g0.symmetrizers
    while rem:
        top = max(e for _, e in rem)
        i = min(i for i, e in rem if e == top)
        c = rem[(i, top)]
        p = top - s[i - 1]
        if p - s[i - 1] < lo:
            return None
        coeffs[(i, p)] += c
        for key, v in lroot(g0, i, p).items():
            nv = rem.get(key, 0) - c * v
            if nv:
                rem[key] = nv
            else:
                rem.pop(key, None)
    return {k: v for k, v in sorted(coeffs.items()) if v}


def recompose(g0: CartanData, coeffs: Mapping[tuple[int, int], int]) -> LWeight:
    out = ZERO
    for (i, p), c in coeffs.items():
        out = out + lroot(g0, i, p) * c
    return out


def in_root_lattice(g0: CartanData, w: LWeight) -> bool:
    return decompose(g0, w) is not None


def leq(g0: CartanData, pi: LWeight, sigma: LWeight) -> bool:
    """``pi <= sigma``: the difference is a nonnegative sum of ℓ-roots."""
    c = decompose(g0, sigma - pi)
    return c is not None and all(v >= 0 for v in c.values())


# -- Q-datum lattices ------------------------------------------------------------


def in_hat_i0(q: QDatum, i: int, p: int) -> bool:
    return (p - q.parity[i - 1]) % 2 == 0


def in_p_z(q: QDatum, w: LWeight) -> bool:
    return all(isinstance(e, int) and in_hat_i0(q, i, e) for i, e in w.support)


def _table(o: ConvexOrder) -> list[tuple[int, int]]:
    """(ι_k, p_k) for each position k of an adapted order."""
    if o.qdatum is None or o.heights is None:
        raise qd.QDatumError("an order adapted to a Q-datum is required")
    return list(zip(o.word, o.heights))


def omega_q(o: ConvexOrder, m: Sequence[int]) -> LWeight:
    q = o.qdatum
    if len(m) != o.length:
        raise ValueError("partition length does not match the order")
    return LWeight(((q.bar(i), p), mk) for (i, p), mk in zip(_table(o), m))


def omega_inverse(o: ConvexOrder, w: LWeight) -> tuple[int, ...]:
    """The signed partition m with ``omega_q(o, m) = w``; error outside the image."""
    q = o.qdatum
    pos = {(q.bar(i), p): k for k, (i, p) in enumerate(_table(o))}
    m = [0] * o.length
    for key, v in w.items():
        if key not in pos:
            raise ValueError(f"ϖ{key} is outside the image of the Q-datum")
        m[pos[key]] = v
    return tuple(m)


def image_points(q: QDatum) -> set[tuple[int, int]]:
    return set(qd.omega_tilde(qd.adapted_word(q)).values())


def khat(q: QDatum) -> set[tuple[int, int]]:
    img = image_points(q)
    out = set()
    for iota, p in img:
        s = q.s(iota)
        if (iota, p - 2 * s) in img:
            out.add((q.bar(iota), p - s))
    return out


def khat_report(q: QDatum, samples: int = 40, seed: int = 0) -> Report:
    rep = Report(f"ℓ-root lattice on the image of {q.cartan.label}, xi={q.xi}")
    g0 = q.g0
    o = qd.adapted_word(q)
    K = sorted(khat(q))
    gens = [omega_q(o, [int(t == k) for t in range(o.length)]) for k in range(o.length)]
    pts = {w.support[0] for w in gens}

    outside = [(i, p) for i, p in K if not set(lroot(g0, i, p).support) <= pts]
    rep.add("ℓ-roots at K̂ lie in the image lattice", not outside, f"|K̂|={len(K)}" + (f", bad {outside}" if outside else ""))

    rng = random.Random(seed)
    bad_in, bad_out, bad_parity, hits = [], [], [], 0
    for _ in range(samples):
        # mostly-random element of the image lattice
        w = ZERO
        for g in rng.sample(gens, k=min(len(gens), 3)):
            w = w + g * rng.randint(-2, 2)
        c = decompose(g0, w)
        if c is not None:
            hits += 1
            if not set(c) <= set(K):
                bad_out.append(w)
            if not all(in_hat_i0(q, i, p + g0.symmetrizers[i - 1]) for i, p in c):
                bad_parity.append(w)
        # element built from K̂ roots must come back with the same coefficients
        if K:
            coeffs = {k: rng.randint(-3, 3) for k in rng.sample(K, k=min(len(K), 3))}
            coeffs = {k: v for k, v in coeffs.items() if v}
            v = recompose(g0, coeffs)
            if not set(v.support) <= pts or decompose(g0, v) != dict(sorted(coeffs.items())):
                bad_in.append(coeffs)
    rep.add("image ∩ ℓ-root lattice decomposes over K̂", not bad_out, f"{hits} of {samples} samples in the ℓ-root lattice")
    rep.add("K̂ combinations stay in the image", not bad_in)
    rep.add("ℓ-root coefficients indexed by the parity lattice", not bad_parity)
    extra = image_kernel_excess(q)
    rep.add("ℓ-root combinations supported on the image are spanned by K̂", extra == 0, f"excess dimension {extra}")
    return rep


def image_kernel_excess(q: QDatum) -> int:
    """Dimension of {ℓ-root combinations supported on the image} beyond |K̂|.

    Any such combination only uses α_{i,p} with p ± s_i inside the exponent
    hull of the image (see ``decompose``), so the window below is exhaustive.
    """
    from sympy import QQ
    from sympy.polys.matrices import DomainMatrix

    g0 = q.g0
    img = {(q.bar(i), p) for i, p in image_points(q)}
    lo = min(p for _, p in img)
    hi = max(p for _, p in img)
    cols = [
        (i, p) for i in g0.index_set
        for p in range(lo + g0.symmetrizers[i - 1], hi - g0.symmetrizers[i - 1] + 1)
        if in_hat_i0(q, i, p + g0.symmetrizers[i - 1])
    ]
    roots = [lroot(g0, i, p) for i, p in cols]
    rows = sorted({k for r in roots for k in r.support} - img)
    kernel_dim = len(cols)
    if rows:
        m = DomainMatrix([[QQ(r[k]) for r in roots] for k in rows], (len(rows), len(cols)), QQ)
        kernel_dim -= m.rank()
    return kernel_dim - len(khat(q))


def delta_identity(q: QDatum, o: ConvexOrder, i: int, p: int) -> Report:
    rep = Report(f"partial sums for Ω^-1(α_{i},{p})")
    img = {(iota, h): k for k, (iota, h) in enumerate(_table(o))}
    iotas = [
        iota for iota in q.folding.orbits[i - 1]
        if (iota, p - q.s(iota)) in img and (iota, p + q.s(iota)) in img
    ]
    if not iotas:
        raise ValueError(f"({i},{p}) is not in K̂")
    iota = iotas[0]
    k0 = img[(iota, p + q.s(iota))]
    m = omega_inverse(o, lroot(q.g0, i, p))
    rep.add("Ω^-1 of the ℓ-root has weight 0", not any(kp.weight_of(o, m)), f"m={m}")
    sums = kp.rho(o, m)
    want = tuple(int(k == k0) for k in range(o.length))
    rep.add("partial sums equal the indicator of k0", sums == want, f"sums={sums}, k0={k0 + 1}")
    return rep


def blocks(pis: Sequence[LWeight], o: ConvexOrder) -> dict[Root, list[int]]:
    """Group dominant image ℓ-weights (by input index) according to their root β."""
    out: dict[Root, list[int]] = {}
    betas = []
    for n, w in enumerate(pis):
        m = omega_inverse(o, w)
        if any(x < 0 for x in m):
            raise ValueError(f"input {n} is not dominant")
        b = kp.weight_of(o, m)
        betas.append(b)
        out.setdefault(b, []).append(n)
    g0 = o.qdatum.g0
    for a in range(len(pis)):
        for b in range(len(pis)):
            if betas[a] != betas[b] and leq(g0, pis[a], pis[b]):
                raise AssertionError(f"inputs {a} and {b} are comparable across blocks")
    return dict(sorted(out.items()))


def poset_iso_check(q: QDatum, beta: Sequence[int], budget: int | None = None,
                    o: ConvexOrder | None = None) -> Report:
    o = o or qd.adapted_word(q)
    beta = tuple(beta)
    rep = Report(f"KP({beta}) against ℓ-weights for {q.cartan.label}, xi={q.xi}")
    parts = kp.enumerate_partitions(o, beta)
    if budget is not None and len(parts) > budget:
        raise BudgetError(len(parts), budget)
    ws = [omega_q(o, m) for m in parts]
    rep.add("Ω injective on KP(β)", len(set(ws)) == len(ws), f"|KP|={len(parts)}")
    g0 = q.g0
    bad = []
    strict = 0
    for a, m in enumerate(parts):
        for b, n in enumerate(parts):
            left = kp.preceq(o, m, n)
            right = leq(g0, ws[a], ws[b])
            strict += left and a != b
            if left != right:
                bad.append((m, n, left, right))
    rep.add("m ⪯ n iff Ω(m) ≤ Ω(n)", not bad, f"{strict} strict relations" + (f"; mismatches {bad[:3]}" if bad else ""))
    return rep


# -- twisted reduction -------------------------------------------------------


def _orbit_position(tt: TwistedType, j: int) -> tuple[int, int]:
    """(i, p) with ``j = tau^p(reps[i-1])``."""
    for i, rep in enumerate(tt.reps, 1):
        for p in range(tt.order):
            if tt.tau_power(p, rep) == j:
                return i, p
    raise ValueError(f"vertex {j} is not in any orbit")


def twist(tt: TwistedType, w: LWeight) -> LWeight:
    """Push an ℓ-weight of the untwisted algebra of the loop realization through t."""
    d = rs.twisted_d(tt)
    out = []
    for (j, e), v in w.items():
        if not isinstance(e, int):
            raise TypeError("twist expects integer exponents q^m")
        i, p = _orbit_position(tt, j)
        out.append(((i, TwistedExp(e, p, tt.order).power(d[i - 1])), v))
    return LWeight(out)


def twisted_lroot(tt: TwistedType, i: int, m: int) -> LWeight:
    """``t(α^g_{rep_i, q^m})``, the ℓ-root at ``(q^m)^{d_i}``."""
    return twist(tt, lroot(tt.untwisted, tt.reps[i - 1], m))


def twisted_cl_failures(tt: TwistedType) -> list[int]:
    """Nodes i where the classical image of the twisted ℓ-root is not column i."""
    a = rs.twisted_finite_cartan(tt)
    n = tt.rank
    bad = []
    for i in range(1, n + 1):
        col = tuple(a[j][i - 1] for j in range(n))
        if cl(twisted_lroot(tt, i, 0), n) != col:
            bad.append(i)
    return bad


def twisted_poset_check(tt: TwistedType, xi: Sequence[int], beta: Sequence[int],
                        budget: int | None = None) -> Report:
    """Run the check on the simply-laced side and confirm t keeps the image injective."""
    q = QDatum.make(tt.untwisted.label, xi)
    o = qd.adapted_word(q)
    rep = poset_iso_check(q, beta, budget, o)
    rep.title = f"{tt.label}: " + rep.title
    parts = kp.enumerate_partitions(o, beta)
    imgs = [twist(tt, omega_q(o, m)) for m in parts]
    rep.add("t injective on the enumerated ℓ-weights", len(set(imgs)) == len(imgs))
    return rep


def iter_betas(c: CartanData, max_height: int) -> Iterator[Root]:
    """Nonzero elements of Q+ with height at most max_height, in a fixed order."""
    n = c.rank
    for h in range(1, max_height + 1):
        for combo in _compositions(h, n):
            yield combo


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest
