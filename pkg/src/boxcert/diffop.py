"""Constant-coefficient differential operators on the cube's volume polynomial.

Everything is phrased in slab coordinates: a box K with widths w determines
the directional-derivative operator sum_j w_j d/ds_j on polynomials in the
slab variables s_1..s_n, and the volume polynomial of the box family is the
single multilinear monomial V = s_1 * ... * s_n.

Because d^2/ds_j^2 annihilates every multilinear polynomial, an operator's
action on V (and on all derivative images of V) is determined by its
squarefree part. Operators here are stored *only* through that squarefree
part: a degree-k operator is a map from k-element subsets of {0..n-1} to
rational coefficients. Two operators that differ by a member of the
annihilator ideal {a : aV = 0} are therefore identified, which is exactly
the quotient in which the Hodge-Riemann statements live.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .boxes import BoxBody, unit_cube
from .exactlin import Rat, RatMatrix, nullspace_basis, rat, rat_from_str, rat_to_str

Subset = tuple[int, ...]


def _normalize_terms(n: int, terms: Mapping) -> dict[Subset, Rat]:
    out: dict[Subset, Rat] = {}
    for key, value in terms.items():
        subset = tuple(sorted(key))
        if len(set(subset)) != len(subset):
            raise ValueError(f"repeated index in monomial {key}")
        if subset and (subset[0] < 0 or subset[-1] >= n):
            raise ValueError(f"index out of range in monomial {key}")
        value = rat(value)
        if value != 0:
            out[subset] = out.get(subset, Fraction(0)) + value
    return {s: c for s, c in sorted(out.items()) if c != 0}


class SlabPolynomial:
    """Multilinear polynomial in the slab variables s_0..s_{n-1}.

    Monomials are subsets of {0..n-1}; the empty subset is the constant
    term. Instances are immutable by convention.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping = ()):
        self.n = n
        self.terms = _normalize_terms(n, dict(terms))

    def coeff(self, subset: Iterable[int]) -> Rat:
        return self.terms.get(tuple(sorted(subset)), Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def constant(self) -> Rat:
        """The degree-0 coefficient."""
        return self.terms.get((), Fraction(0))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SlabPolynomial)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, tuple(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return f"SlabPolynomial({self.n}, 0)"
        body = " + ".join(
            f"{rat_to_str(c)}*s{list(s)}" for s, c in self.terms.items()
        )
        return f"SlabPolynomial({self.n}, {body})"


class SlabOperator:
    """Squarefree degree-k operator sum_{|S|=k} c_S d^S."""

    __slots__ = ("n", "k", "terms")

    def __init__(self, n: int, k: int, terms: Mapping = ()):
        if k < 0:
            raise ValueError("operator degree must be nonnegative")
        self.n = n
        self.k = k
        self.terms = _normalize_terms(n, dict(terms))
        if any(len(s) != k for s in self.terms):
            raise ValueError("all monomials must have the operator's degree")

    def coeff(self, subset: Iterable[int]) -> Rat:
        return self.terms.get(tuple(sorted(subset)), Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SlabOperator)
            and (self.n, self.k) == (other.n, other.k)
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, self.k, tuple(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return f"SlabOperator({self.n}, k={self.k}, 0)"
        body = " + ".join(f"{rat_to_str(c)}*d{list(s)}" for s, c in self.terms.items())
        return f"SlabOperator({self.n}, k={self.k}, {body})"


def volume_polynomial(n: int) -> SlabPolynomial:
    """V = s_0 * s_1 * ... * s_{n-1}."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    return SlabPolynomial(n, {tuple(range(n)): Fraction(1)})


def op_from_box(box: BoxBody, k: int) -> SlabOperator:
    """Squarefree part of the k-th power of the box's derivative operator.

    The coefficient on a k-subset S is k! * prod_{j in S} width_j. For
    k > n the power annihilates every multilinear polynomial; the zero
    operator is returned with a warning.
    """
    if k < 1:
        raise ValueError("operator degree must be at least 1")
    if k > box.n:
        warnings.warn(
            f"derivative power {k} exceeds dimension {box.n}; "
            "the operator annihilates the volume polynomial",
            stacklevel=2,
        )
        return SlabOperator(box.n, k)
    fact = factorial(k)
    terms = {}
    for subset in combinations(range(box.n), k):
        c = Fraction(fact)
        for j in subset:
            c *= box.widths[j]
        if c != 0:
            terms[subset] = c
    return SlabOperator(box.n, k, terms)


def op_add(a: SlabOperator, b: SlabOperator) -> SlabOperator:
    if (a.n, a.k) != (b.n, b.k):
        raise ValueError("operator shape mismatch")
    terms = dict(a.terms)
    for s, c in b.terms.items():
        terms[s] = terms.get(s, Fraction(0)) + c
    return SlabOperator(a.n, a.k, terms)


def op_scale(a: SlabOperator, c) -> SlabOperator:
    c = rat(c)
    return SlabOperator(a.n, a.k, {s: c * v for s, v in a.terms.items()})


def op_mul(a: SlabOperator, b: SlabOperator) -> SlabOperator:
    """Operator product, squarefree part (overlapping monomials drop out)."""
    if a.n != b.n:
        raise ValueError("operator dimension mismatch")
    terms: dict[Subset, Rat] = {}
    for s, cs in a.terms.items():
        s_set = set(s)
        for t, ct in b.terms.items():
            if s_set.isdisjoint(t):
                u = tuple(sorted(s + t))
                terms[u] = terms.get(u, Fraction(0)) + cs * ct
    return SlabOperator(a.n, a.k + b.k, terms)


def apply_op(a: SlabOperator, p: SlabPolynomial) -> SlabPolynomial:
    """Formal differentiation: d^S sends s_T to s_{T - S} when S <= T, else 0."""
    if a.n != p.n:
        raise ValueError("dimension mismatch")
    terms: dict[Subset, Rat] = {}
    for t, ct in p.terms.items():
        t_set = set(t)
        for s, cs in a.terms.items():
            if t_set.issuperset(s):
                rest = tuple(j for j in t if j not in s)
                terms[rest] = terms.get(rest, Fraction(0)) + cs * ct
    return SlabPolynomial(p.n, terms)


def derivative_along(box: BoxBody, p: SlabPolynomial) -> SlabPolynomial:
    """Apply the box's degree-1 derivative operator sum_j w_j d_j."""
    if box.n != p.n:
        raise ValueError("dimension mismatch")
    w = box.widths
    terms: dict[Subset, Rat] = {}
    for t, ct in p.terms.items():
        for pos, j in enumerate(t):
            if w[j] == 0:
                continue
            rest = t[:pos] + t[pos + 1 :]
            terms[rest] = terms.get(rest, Fraction(0)) + w[j] * ct
    return SlabPolynomial(p.n, terms)


def contract(p: SlabPolynomial, bodies: Sequence[BoxBody]) -> SlabPolynomial:
    for box in bodies:
        p = derivative_along(box, p)
    return p


def hr_form(a: SlabOperator, b: SlabOperator, c_bodies: Sequence[BoxBody]) -> Rat:
    """The scalar a * b * prod_i D_{C_i} applied to V.

    Degrees must satisfy deg a = deg b = k and 2k + len(c_bodies) = n, so
    the result is a constant. Symmetric and bilinear in (a, b).
    """
    if a.n != b.n:
        raise ValueError("operator dimension mismatch")
    if a.k != b.k:
        raise ValueError(f"degree mismatch: {a.k} vs {b.k}")
    n = a.n
    if 2 * a.k + len(c_bodies) != n:
        raise ValueError("body count does not complete the degree to n")
    p = contract(volume_polynomial(n), c_bodies)
    result = apply_op(op_mul(a, b), p)
    return result.constant


def primitive_space_basis(
    k: int, reference: BoxBody, c_bodies: Sequence[BoxBody]
) -> list[SlabOperator]:
    """Basis of the degree-k operators annihilating D_L prod_i D_{C_i} V.

    ``reference`` is the body L. Since support vectors of nondegenerate
    boxes span all slab directions, vanishing of the pairing against every
    box in the family is the same as identical vanishing of the degree
    (k-1) polynomial, which is the linear system solved here.
    """
    n = reference.n
    if 2 * k > n:
        raise ValueError("need 2k <= n")
    if len(c_bodies) != n - 2 * k:
        raise ValueError(f"expected {n - 2 * k} auxiliary bodies")
    if not reference.is_nondegenerate or any(
        not c.is_nondegenerate for c in c_bodies
    ):
        raise ValueError("all bodies must be nondegenerate")
    q = contract(volume_polynomial(n), [reference, *c_bodies])
    cols = list(combinations(range(n), k))
    rows = []
    for u in combinations(range(n), k - 1):
        u_set = set(u)
        row = []
        for s in cols:
            if u_set.isdisjoint(s):
                row.append(q.coeff(tuple(sorted(u + s))))
            else:
                row.append(Fraction(0))
        rows.append(row)
    kernel = nullspace_basis(RatMatrix(rows))
    return [
        SlabOperator(n, k, {s: c for s, c in zip(cols, z) if c != 0}) for z in kernel
    ]


def is_primitive(
    a: SlabOperator, reference: BoxBody, c_bodies: Sequence[BoxBody]
) -> bool:
    q = contract(volume_polynomial(a.n), [reference, *c_bodies])
    return apply_op(a, q).is_zero


def hr_check(
    a: SlabOperator, reference: BoxBody, c_bodies: Sequence[BoxBody]
) -> tuple[Rat, bool, bool]:
    """Evaluate the signed quadratic form on a primitive operator.

    Returns (value, sign_ok, equality_iff_zero_ok) where value is
    a*a*prod D_{C_i} V, sign_ok checks (-1)^k * value >= 0, and the final
    flag checks that value = 0 exactly when the operator kills V.
    """
    if not is_primitive(a, reference, c_bodies):
        raise ValueError("operator is not primitive for the given bodies")
    value = hr_form(a, a, c_bodies)
    sign_ok = (-1) ** a.k * value >= 0
    kills_v = apply_op(a, volume_polynomial(a.n)).is_zero
    equality_ok = (value == 0) == kills_v
    return value, sign_ok, equality_ok


@dataclass(frozen=True)
class PowerCombination:
    """A sum sum_i x_i (D_{K_i})^k of pure powers of box derivatives."""

    k: int
    terms: tuple[tuple[Rat, BoxBody], ...]

    def to_operator(self, n: int) -> SlabOperator:
        total = SlabOperator(n, self.k)
        for x, box in self.terms:
            total = op_add(total, op_scale(op_from_box(box, self.k), x))
        return total


def _lagrange_weights_at_zero(points: Sequence[int]) -> list[Rat]:
    """Weights l_t(0) so that sum_t l_t(0) p(t) = p(0) for deg p <= len-1."""
    weights = []
    for t in points:
        w = Fraction(1)
        for u in points:
            if u != t:
                w *= Fraction(-u, t - u)
        weights.append(w)
    return weights


def express_as_powers(a: SlabOperator) -> PowerCombination:
    """Write a degree-k operator as sum_i x_i (D_{K_i})^k, K_i nondegenerate.

    Construction: polarize each monomial k! d^S into signed k-th powers of
    indicator-box derivatives over the nonempty sub-subsets of S, then
    replace every degenerate indicator box B by the exact combination
    sum_t l_t(0) (D_{B + t*cube})^k over the shifts t = 1..k+1 (Lagrange
    weights at 0 isolate the pure (D_B)^k coefficient of the degree-k
    operator polynomial in t). Duplicate boxes are merged.
    """
    k, n = a.k, a.n
    if k < 1:
        raise ValueError("degree must be at least 1")
    if a.is_zero:
        return PowerCombination(k, ())
    shifts = list(range(1, k + 2))
    weights = _lagrange_weights_at_zero(shifts)
    inv_fact = Fraction(1, factorial(k))
    combo: dict[tuple[Rat, ...], Rat] = {}
    for s in sorted(a.terms):
        c = a.terms[s]
        for bits in range(1, 1 << k):
            chosen = [s[r] for r in range(k) if bits >> r & 1]
            sign = -1 if (k + len(chosen)) % 2 else 1
            base = c * sign * inv_fact
            for t, weight in zip(shifts, weights):
                widths = tuple(
                    Fraction(t + 1) if j in chosen else Fraction(t) for j in range(n)
                )
                combo[widths] = combo.get(widths, Fraction(0)) + base * weight
    terms = tuple(
        (x, BoxBody(n, widths))
        for widths, x in sorted(combo.items())
        if x != 0
    )
    return PowerCombination(k, terms)


def h_vector_cube(n: int) -> list[int]:
    """(h_0, ..., h_n) for the n-cube: h_k = C(n, k)."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    return [comb(n, j) for j in range(n + 1)]


def pairing_matrix(n: int, k: int) -> RatMatrix:
    """Gram matrix of the degree-k pairing (a, b) -> a*b*(D_cube)^{n-2k} V
    over the unit-coefficient operators d^S, S running over k-subsets."""
    if 2 * k > n:
        raise ValueError("need 2k <= n")
    cube = unit_cube(n)
    subsets = list(combinations(range(n), k))
    ops = [SlabOperator(n, k, {s: Fraction(1)}) for s in subsets]
    c_bodies = [cube] * (n - 2 * k)
    rows = []
    for a in ops:
        rows.append([hr_form(a, b, c_bodies) for b in ops])
    return RatMatrix(rows)


def op_to_json(a: SlabOperator) -> dict:
    return {
        "n": a.n,
        "k": a.k,
        "terms": [
            {"S": list(s), "c": rat_to_str(c)} for s, c in sorted(a.terms.items())
        ],
    }


def op_from_json(data: dict) -> SlabOperator:
    return SlabOperator(
        int(data["n"]),
        int(data["k"]),
        {tuple(t["S"]): rat_from_str(t["c"]) for t in data["terms"]},
    )
