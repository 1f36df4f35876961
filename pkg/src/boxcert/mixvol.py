"""Mixed volumes of axis-aligned boxes.

For boxes the mixed volume V(K_1, ..., K_n) is perm(W)/n!, where row r of W
is the widths vector of the r-th body (repeated according to multiplicity).
The permanent is evaluated by Ryser's inclusion-exclusion with Gray-code
column updates, over integers: rows are scaled by their denominator lcm
first and the result is unscaled, so the whole path is exact.

A second, independent evaluation path goes through the volume polynomial:
V(K_1, ..., K_n) = (1/n!) D_{K_1} ... D_{K_n} V with the derivative
operators of the diffop module. The two paths are used to cross-check each
other throughout, and certificate verification deliberately uses the path
the certificate builder did not.

Supported envelope: n <= 12 (desk-scale instances have n <= 8).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial, gcd
from typing import Sequence

from .boxes import BoxBody, minkowski_combine
from .diffop import contract, volume_polynomial
from .exactlin import Rat

MAX_DIMENSION = 12

Entries = tuple[tuple[BoxBody, int], ...]


@dataclass(frozen=True)
class BodyTuple:
    """n bodies with multiplicities summing to the ambient dimension."""

    n: int
    entries: Entries

    def __post_init__(self):
        entries = tuple((box, int(mult)) for box, mult in self.entries)
        object.__setattr__(self, "entries", entries)
        if any(mult < 1 for _, mult in entries):
            raise ValueError("multiplicities must be at least 1")
        if any(box.n != self.n for box, _ in entries):
            raise ValueError("all bodies must live in dimension n")
        total = sum(mult for _, mult in entries)
        if total != self.n:
            raise ValueError(f"multiplicities sum to {total}, expected {self.n}")
        if self.n > MAX_DIMENSION:
            raise ValueError(f"dimension {self.n} exceeds the supported envelope")

    @property
    def width_rows(self) -> tuple[tuple[Rat, ...], ...]:
        rows = []
        for box, mult in self.entries:
            rows.extend([box.widths] * mult)
        return tuple(rows)


def body_tuple(*bodies: BoxBody) -> BodyTuple:
    """BodyTuple from n explicit bodies, each with multiplicity 1."""
    if not bodies:
        raise ValueError("empty body tuple")
    return BodyTuple(bodies[0].n, tuple((b, 1) for b in bodies))


def _int_permanent(rows: list[list[int]]) -> int:
    """Ryser's formula with Gray-code updates, O(2^n * n) integer ops."""
    n = len(rows)
    if n == 0:
        return 1
    sums = [0] * n
    total = 0
    prev = 0
    for g in range(1, 1 << n):
        gray = g ^ (g >> 1)
        bit = gray ^ prev
        j = bit.bit_length() - 1
        if gray & bit:
            for i in range(n):
                sums[i] += rows[i][j]
        else:
            for i in range(n):
                sums[i] -= rows[i][j]
        prev = gray
        prod = 1
        for s in sums:
            if s == 0:
                prod = 0
                break
            prod *= s
        if prod:
            if (n - gray.bit_count()) % 2:
                total -= prod
            else:
                total += prod
    return total


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


_permanent_cache: dict = {}
_derivative_cache: dict = {}


def clear_caches() -> None:
    _permanent_cache.clear()
    _derivative_cache.clear()


def _canonical_rows(t: BodyTuple) -> tuple[tuple[Rat, ...], ...]:
    return tuple(sorted(t.width_rows))


def mixed_volume(t: BodyTuple) -> Rat:
    """Exact mixed volume via the integer permanent (reference path)."""
    key = _canonical_rows(t)
    cached = _permanent_cache.get(key)
    if cached is not None:
        return cached
    scale = 1
    int_rows = []
    for row in key:
        f = 1
        for x in row:
            f = _lcm(f, x.denominator)
        scale *= f
        int_rows.append([int(x * f) for x in row])
    value = Fraction(_int_permanent(int_rows), factorial(t.n) * scale)
    _permanent_cache[key] = value
    return value


def mixed_volume_via_derivatives(t: BodyTuple) -> Rat:
    """Exact mixed volume via iterated directional derivatives of V.

    Independent of the permanent path; used as the cross-check side of
    certificate verification.
    """
    key = _canonical_rows(t)
    cached = _derivative_cache.get(key)
    if cached is not None:
        return cached
    p = volume_polynomial(t.n)
    for box, mult in t.entries:
        for _ in range(mult):
            p = contract(p, [box])
    value = p.constant / factorial(t.n)
    _derivative_cache[key] = value
    return value


def af_check(
    k_body: BoxBody, l_body: BoxBody, c_bodies: Sequence[BoxBody]
) -> tuple[Rat, Rat, bool]:
    """Quadratic mixed-volume inequality for the pair (K, L) against C.

    Returns (lhs, rhs, holds) with lhs = V(K, L, C...)^2 and
    rhs = V(K, K, C...) * V(L, L, C...). For boxes this always holds.
    """
    n = k_body.n
    if n < 2:
        raise ValueError("need dimension at least 2")
    if len(c_bodies) != n - 2:
        raise ValueError(f"expected {n - 2} auxiliary bodies, got {len(c_bodies)}")
    tail = tuple((c, 1) for c in c_bodies)
    v_kl = mixed_volume(BodyTuple(n, ((k_body, 1), (l_body, 1)) + tail))
    v_kk = mixed_volume(BodyTuple(n, ((k_body, 2),) + tail))
    v_ll = mixed_volume(BodyTuple(n, ((l_body, 2),) + tail))
    lhs = v_kl * v_kl
    rhs = v_kk * v_ll
    return lhs, rhs, lhs >= rhs


def iterated_af_check(
    k1: BoxBody, k2: BoxBody, k: int, l: int, c_bodies: Sequence[BoxBody]
) -> tuple[Rat, Rat, bool]:
    """Power form of the iterated quadratic inequality.

    lhs = V(K1[k], K2[l], C...)^(k+l),
    rhs = V(K1[k+l], C...)^k * V(K2[k+l], C...)^l.
    """
    n = k1.n
    if k < 1 or l < 1 or k + l > n:
        raise ValueError("need k, l >= 1 and k + l <= n")
    if len(c_bodies) != n - k - l:
        raise ValueError(f"expected {n - k - l} auxiliary bodies")
    tail = tuple((c, 1) for c in c_bodies)
    if k1 == k2:
        mixed = mixed_volume(BodyTuple(n, ((k1, k + l),) + tail))
    else:
        mixed = mixed_volume(BodyTuple(n, ((k1, k), (k2, l)) + tail))
    pure1 = mixed_volume(BodyTuple(n, ((k1, k + l),) + tail))
    pure2 = mixed_volume(BodyTuple(n, ((k2, k + l),) + tail))
    lhs = mixed ** (k + l)
    rhs = pure1**k * pure2**l
    return lhs, rhs, lhs >= rhs


def polarization_identity_check(
    r_bodies: Sequence[BoxBody], tail: Entries
) -> tuple[Rat, Rat, bool]:
    """Check the polarization formula on k leading slots.

    lhs = V(R_1, ..., R_k, tail), rhs = (1/k!) * sum over nonzero sign
    patterns delta of (-1)^(k + |delta|) V((delta . R)[k], tail). The
    all-zero pattern is skipped: its body is a point, so its mixed volumes
    vanish.
    """
    k = len(r_bodies)
    if k < 1:
        raise ValueError("need at least one leading body")
    n = r_bodies[0].n
    tail = tuple(tail)
    tail_total = sum(mult for _, mult in tail)
    if tail_total != n - k:
        raise ValueError(f"tail multiplicities sum to {tail_total}, expected {n - k}")
    lhs = mixed_volume(BodyTuple(n, tuple((r, 1) for r in r_bodies) + tail))
    rhs = Fraction(0)
    for delta in product((0, 1), repeat=k):
        if not any(delta):
            continue
        combined = minkowski_combine(list(zip(delta, r_bodies)))
        sign = -1 if (k + sum(delta)) % 2 else 1
        rhs += sign * mixed_volume(BodyTuple(n, ((combined, k),) + tail))
    rhs /= factorial(k)
    return lhs, rhs, lhs == rhs
