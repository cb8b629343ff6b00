"""Kostant partitions over a convex order and McNamara's order on them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import rootsys as rs
from .qdatum import ConvexOrder
from .report import Report
from .rootsys import Root


@dataclass(frozen=True)
class KostantPartition:
    """Multiplicities ``m[k]`` of the roots ``beta_k`` of a convex order."""

    order: ConvexOrder
    m: tuple[int, ...]
    signed: bool = False

    def __post_init__(self):
        if len(self.m) != self.order.length:
            raise ValueError("partition length does not match the order")
        if not self.signed and any(x < 0 for x in self.m):
            raise ValueError("unsigned Kostant partition with a negative entry")

    @property
    def beta(self) -> Root:
        return weight_of(self.order, self.m)


def weight_of(o: ConvexOrder, m: Sequence[int]) -> Root:
    """``sum_k m_k beta_k``."""
    n = o.cartan.rank
    return tuple(sum(mk * b[i] for mk, b in zip(m, o.betas)) for i in range(n))


def enumerate_partitions(o: ConvexOrder, beta: Sequence[int]) -> list[tuple[int, ...]]:
    """All of KP(beta) in lexicographic order."""
    beta = tuple(beta)
    if any(x < 0 for x in beta):
        return []
    betas = o.betas
    L = len(betas)
    # coords still coverable by roots at positions >= k
    cover = [set() for _ in range(L + 1)]
    for k in range(L - 1, -1, -1):
        cover[k] = cover[k + 1] | {i for i, x in enumerate(betas[k]) if x}
    out = []

    def rec(k: int, rem: tuple[int, ...], acc: list[int]):
        if k == L:
            if not any(rem):
                out.append(tuple(acc))
            return
        if any(x and i not in cover[k] for i, x in enumerate(rem)):
            return
        b = betas[k]
        top = min(r // x for r, x in zip(rem, b) if x)
        for mult in range(top + 1):
            acc.append(mult)
            rec(k + 1, tuple(r - mult * x for r, x in zip(rem, b)), acc)
            acc.pop()

    rec(0, beta, [])
    return out


def pairing_matrix(o: ConvexOrder) -> np.ndarray:
    """``P[k, t] = (nu_k, beta_t)`` as an integer array."""
    c = o.cartan
    return np.array([[rs.pairing(c, nu, b) for b in o.betas] for nu in o.nus], dtype=np.int64)


def rho(o: ConvexOrder, m: Sequence[int]) -> tuple[int, ...]:
    c = o.cartan
    return tuple(
        sum(m[t] * rs.pairing(c, o.nus[k], o.betas[t]) for t in range(k + 1))
        for k in range(o.length)
    )


def preceq(o: ConvexOrder, m: Sequence[int], n: Sequence[int]) -> bool:
    if weight_of(o, m) != weight_of(o, n):
        raise ValueError("partitions of different weights are not comparable")
    return all(x <= y for x, y in zip(rho(o, m), rho(o, n)))


def hasse_edges(o: ConvexOrder, parts: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    """Cover relations (a, b) meaning parts[a] < parts[b], by index."""
    rhos = [rho(o, m) for m in parts]
    n = len(parts)

    def lt(a, b):
        return a != b and all(x <= y for x, y in zip(rhos[a], rhos[b]))

    edges = []
    for a in range(n):
        for b in range(n):
            if lt(a, b) and not any(lt(a, c) and lt(c, b) for c in range(n)):
                edges.append((a, b))
    return edges


def sign_pattern_failures(o: ConvexOrder) -> list[tuple[int, int, int]]:
    """(k, l, value) where (nu_k, beta_l) breaks the sign pattern; 1-based."""
    p = pairing_matrix(o)
    bad = []
    for k in range(o.length):
        for l in range(o.length):
            v = int(p[k, l])
            ok = v >= 0 if l < k else (v == 1 if l == k else v <= 0)
            if not ok:
                bad.append((k + 1, l + 1, v))
    return bad


def box_injective(o: ConvexOrder, radius: int = 3) -> bool:
    """Exhaustive injectivity of rho on [-radius, radius]^L."""
    L = o.length
    p = np.tril(pairing_matrix(o))
    grid = np.array(list(itertools.product(range(-radius, radius + 1), repeat=L)), dtype=np.int64)
    images = grid @ p.T
    return len(np.unique(images, axis=0)) == len(grid)


def swap_equivariance_failures(o: ConvexOrder, parts: Sequence[Sequence[int]]) -> list[str]:
    """For each commuting adjacent pair, rho of the swapped word is rho transposed."""
    c = o.cartan
    bad = []
    for k in range(o.length - 1):
        a, b = o.word[k], o.word[k + 1]
        if c.matrix[a - 1][b - 1] != 0:
            continue
        w = list(o.word)
        w[k], w[k + 1] = b, a
        swapped = ConvexOrder.from_word(c, w)
        if swapped.betas[k] != o.betas[k + 1] or swapped.betas[k + 1] != o.betas[k]:
            bad.append(f"k={k + 1}: swapping did not transpose beta_k, beta_k+1")
            continue
        for m in parts:
            mm = list(m)
            mm[k], mm[k + 1] = mm[k + 1], mm[k]
            r = list(rho(o, m))
            r[k], r[k + 1] = r[k + 1], r[k]
            if list(rho(swapped, mm)) != r:
                bad.append(f"k={k + 1}: rho not transposed for m={tuple(m)}")
    return bad


def order_properties(o: ConvexOrder, beta: Sequence[int], box_radius: int = 3, box_max_length: int = 8,
                     check_box: bool = True) -> Report:
    rep = Report(f"McNamara order for word {o.word}, beta={tuple(beta)}")
    bad = sign_pattern_failures(o)
    rep.add("sign pattern of (nu_k, beta_l)", not bad, f"{len(bad)} violations" + (f": {bad[:3]}" if bad else ""))
    parts = enumerate_partitions(o, beta)
    rhos = {rho(o, m) for m in parts}
    rep.add("rho injective on KP(beta)", len(rhos) == len(parts), f"|KP|={len(parts)}")
    if not check_box:
        pass
    elif o.length <= box_max_length:
        rep.add(f"rho injective on [-{box_radius},{box_radius}]^L", box_injective(o, box_radius), f"L={o.length}")
    else:
        # rho is unitriangular, so injectivity on Z^L also follows from the sign pattern
        rep.skip(f"rho injective on [-{box_radius},{box_radius}]^L", f"L={o.length} > {box_max_length}")
    sw = swap_equivariance_failures(o, parts)
    rep.add("rho transposes under commuting swaps", not sw, "; ".join(sw[:3]))
    rep.add("convexity of beta_k", rs.is_convex(o.cartan, o.betas))
    return rep


def minimal_pairs(o: ConvexOrder, alpha: Sequence[int]) -> list[tuple[int, int]]:
    """Pairs (k, l), 1-based, with beta_k + beta_l = alpha and nothing nested inside."""
    alpha = tuple(alpha)
    if not rs.is_positive_root(o.cartan, alpha):
        raise ValueError(f"{alpha} is not a positive root")
    pairs = [
        (k, l) for k in range(o.length) for l in range(k + 1, o.length)
        if tuple(x + y for x, y in zip(o.betas[k], o.betas[l])) == alpha
    ]
    out = [
        (k + 1, l + 1) for k, l in pairs
        if not any(k < k2 < l2 < l for k2, l2 in pairs)
    ]
    return out
