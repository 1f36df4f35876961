"""Mixed-volume matrices, the counterexample pipeline, and certificates.

The m x m matrix M_ij = V(K_i[k], K_j[k], C_1, ..., C_{n-2k}) of k-fold
mixed volumes is hyperbolic for k = 1 (that is Shephard's family of
determinantal inequalities), and was conjectured to stay hyperbolic for
every k <= n/2. It does not: a degree-2 primitive operator with a strict
Hodge-Riemann value yields, through its expression as a combination of pure
squares of box derivatives, vectors x, y >= 0 with <x, My> = 0 and
<x, Mx> > 0, which is impossible for a hyperbolic matrix. This module builds those
matrices, runs the pipeline at k = 2, lifts it to any k > 2 by double
polarization, hunts for direct violations at random, and independently
re-verifies emitted certificates through the derivative evaluation path.

All certification arithmetic is exact.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Optional, Sequence

from .boxes import BoxBody, minkowski_combine, unit_cube
from .diffop import (
    SlabOperator,
    apply_op,
    express_as_powers,
    hr_form,
    op_to_json,
    primitive_space_basis,
    volume_polynomial,
)
from .exactlin import (
    Rat,
    RatMatrix,
    det,
    dot,
    principal_submatrix,
    rat_from_str,
    rat_to_str,
)
from .hypmat import (
    SUBSET_ENUMERATION_CAP,
    CoreTooLargeError,
    Violation,
    find_violation,
    is_hyperbolic,
    sylvester_violation,
)
from .mixvol import BodyTuple, mixed_volume, mixed_volume_via_derivatives

CERTIFICATE_VERSION = 1

DEFAULT_SEARCH_GRID = tuple(Fraction(j, 4) for j in range(1, 17))


@dataclass(frozen=True)
class FedotovMatrix:
    """The symmetric matrix of k-fold mixed volumes over a body list."""

    n: int
    k: int
    bodies: tuple[BoxBody, ...]
    c_bodies: tuple[BoxBody, ...]
    matrix: RatMatrix

    @property
    def m(self) -> int:
        return len(self.bodies)


def _pair_tuple(
    n: int, a: BoxBody, b: BoxBody, k: int, c_bodies: Sequence[BoxBody]
) -> BodyTuple:
    return BodyTuple(n, ((a, k), (b, k)) + tuple((c, 1) for c in c_bodies))


def build_matrix(
    bodies: Sequence[BoxBody],
    k: int,
    c_bodies: Sequence[BoxBody],
    threads: int = 1,
) -> FedotovMatrix:
    """Assemble M_ij = V(K_i[k], K_j[k], C...) exactly.

    Entries are independent mixed volumes; with threads > 1 they are
    evaluated by a thread pool and written back by index, so the result
    does not depend on the worker count.
    """
    bodies = tuple(bodies)
    c_bodies = tuple(c_bodies)
    if not bodies:
        raise ValueError("need at least one body")
    n = bodies[0].n
    if k < 1 or 2 * k + len(c_bodies) != n:
        raise ValueError(
            f"dimension bookkeeping failed: 2*{k} + {len(c_bodies)} != {n}"
        )
    size = len(bodies)
    pairs = [(i, j) for i in range(size) for j in range(i, size)]

    def entry(pair: tuple[int, int]) -> Rat:
        i, j = pair
        return mixed_volume(_pair_tuple(n, bodies[i], bodies[j], k, c_bodies))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(entry, pairs))
    else:
        values = [entry(p) for p in pairs]
    grid = [[Fraction(0)] * size for _ in range(size)]
    for (i, j), v in zip(pairs, values):
        grid[i][j] = v
        grid[j][i] = v
    return FedotovMatrix(n, k, bodies, c_bodies, RatMatrix(grid))


@dataclass(frozen=True)
class ShephardReport:
    """Outcome of checking every principal minor sign at k = 1."""

    ok: bool
    subsets_checked: int
    violations: tuple[Violation, ...]
    determinant: Rat


def shephard_verify(fm: FedotovMatrix) -> ShephardReport:
    """Assert (-1)^|I| det M_I <= 0 for every principal subset (k = 1 only).

    A violation in the report indicates an implementation bug: for box
    inputs the k = 1 matrix is always hyperbolic.
    """
    if fm.k != 1:
        raise ValueError("shephard_verify applies to k = 1 matrices")
    size = fm.m
    if size > SUBSET_ENUMERATION_CAP:
        raise ValueError("matrix too large for exhaustive minor enumeration")
    violations = []
    checked = 0
    from itertools import combinations

    for card in range(1, size + 1):
        parity = -1 if card % 2 else 1
        for subset in combinations(range(size), card):
            value = det(principal_submatrix(fm.matrix, subset))
            checked += 1
            if parity * value > 0:
                violations.append(Violation(subset, value))
    return ShephardReport(not violations, checked, tuple(violations), det(fm.matrix))


@dataclass(frozen=True)
class Certificate:
    """Self-contained, exactly re-verifiable record of a minor-sign violation.

    ``labels`` names each matrix row: plain indices for the k = 2 pipeline
    and direct search, (i, delta-bits) pairs for the general-k reduction.
    Everything is recomputable from the stored widths alone.
    """

    n: int
    k: int
    labels: tuple
    bodies: tuple[BoxBody, ...]
    c_bodies: tuple[BoxBody, ...]
    x: tuple[Rat, ...]
    y: tuple[Rat, ...]
    pair_xy: Optional[Rat]
    pair_xx: Optional[Rat]
    matrix: RatMatrix
    subset: tuple[int, ...]
    subset_det: Rat
    trace: dict = field(default_factory=dict)
    version: int = CERTIFICATE_VERSION


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class PipelineData:
    """Intermediate state of the k = 2 construction, reused by the lift."""

    n: int
    alpha: SlabOperator
    bodies: tuple[BoxBody, ...]
    x: tuple[Rat, ...]
    y: tuple[Rat, ...]
    c_bodies: tuple[BoxBody, ...]
    fedotov: FedotovMatrix
    pair_xy: Rat
    pair_xx: Rat


class PipelineError(AssertionError):
    """An exact internal consistency check failed; diagnostics attached."""


def _check(condition: bool, message: str) -> None:
    if not condition:
        raise PipelineError(message)


def pipeline_base_k2(n: int, threads: int = 1) -> PipelineData:
    """Degree-2 primitive data: bodies, x, y and the k = 2 matrix in R^n.

    Steps: pick the first degree-2 primitive basis operator whose action on
    V is nonzero (strictness of the quadratic form is then automatic),
    expand it into pure squares of nondegenerate box derivatives, append
    the cube with coefficient 0, and verify the two defining identities
    <x, My> = 0 and <x, Mx> = alpha^2 (D_cube)^{n-4} V / n! > 0 exactly.
    """
    if n < 4:
        raise ValueError("the degree-2 construction needs n >= 4")
    cube = unit_cube(n)
    c_bodies = tuple([cube] * (n - 4))
    basis = primitive_space_basis(2, cube, c_bodies)
    _check(bool(basis), "primitive space is trivial")
    v_poly = volume_polynomial(n)
    alpha = next((a for a in basis if not apply_op(a, v_poly).is_zero), None)
    _check(alpha is not None, "no primitive operator acts nontrivially on V")
    powers = express_as_powers(alpha)
    _check(
        powers.to_operator(n) == alpha,
        "power expansion does not reproduce the operator",
    )
    _check(
        all(box.is_nondegenerate for _, box in powers.terms),
        "power expansion produced a degenerate body",
    )
    bodies = tuple(box for _, box in powers.terms) + (cube,)
    x = tuple(c for c, _ in powers.terms) + (Fraction(0),)
    y = tuple(Fraction(0) for _ in powers.terms) + (Fraction(1),)
    fm = build_matrix(bodies, 2, c_bodies, threads=threads)
    mx = fm.matrix.matvec(x)
    pair_xy = dot(y, mx)
    pair_xx = dot(x, mx)
    _check(pair_xy == 0, f"primitivity pairing is {pair_xy}, expected 0")
    expected = hr_form(alpha, alpha, c_bodies) / factorial(n)
    _check(
        pair_xx == expected,
        f"quadratic form {pair_xx} differs from operator value {expected}",
    )
    _check(pair_xx > 0, "quadratic form is not strictly positive")
    return PipelineData(
        n, alpha, bodies, x, y, c_bodies, fm, pair_xy, pair_xx
    )


def construct_counterexample_k2(
    n: int, threads: int = 1, max_core_size: Optional[int] = None
) -> Certificate:
    """Certified violation of the minor sign condition at k = 2, any n >= 4."""
    base = pipeline_base_k2(n, threads=threads)
    _check(not is_hyperbolic(base.fedotov.matrix), "matrix is hyperbolic")
    violation = find_violation(
        base.fedotov.matrix, witness=(base.x, base.y), max_core_size=max_core_size
    )
    trace = {
        "mode": "pipeline-k2",
        "alpha": op_to_json(base.alpha),
        "shifts": [1, 2, 3],
    }
    return Certificate(
        n=n,
        k=2,
        labels=tuple(range(len(base.bodies))),
        bodies=base.bodies,
        c_bodies=base.c_bodies,
        x=base.x,
        y=base.y,
        pair_xy=base.pair_xy,
        pair_xx=base.pair_xx,
        matrix=base.fedotov.matrix,
        subset=violation.subset,
        subset_det=violation.det_value,
        trace=trace,
    )


def _deltas(k: int) -> list[tuple[int, ...]]:
    """Nonzero 0/1 patterns of length k in lexicographic order."""
    return list(product((0, 1), repeat=k))[1:]


def reduce_to_general_k(
    base: PipelineData,
    k: int,
    threads: int = 1,
    max_core_size: Optional[int] = None,
) -> Certificate:
    """Lift the k = 2 violation to degree k via double polarization.

    Each base body K_i spawns the bodies (d_1 + d_2) K_i + (d_3 + ... +
    d_k) * cube over the nonzero patterns d, and the polarization signs
    turn the base pairings into the lifted ones exactly:
    <x~, M~ y~> = <x, My> and <x~, M~ x~> = <x, Mx>. Both sides of each
    identity are computed independently and compared.
    """
    n = base.n
    if k < 2 or 2 * k > n:
        raise ValueError(f"need 2 <= k <= n/2, got k={k}, n={n}")
    cube = unit_cube(n)
    deltas = _deltas(k)
    inv_kfact = Fraction(1, factorial(k))
    labels = []
    bodies = []
    x_t = []
    y_t = []
    m_plus = len(base.bodies)
    y_delta = (1,) + (0,) * (k - 1)
    for i in range(m_plus):
        for delta in deltas:
            body = minkowski_combine(
                [(delta[0] + delta[1], base.bodies[i]), (sum(delta[2:]), cube)]
            )
            _check(body.is_nondegenerate, f"degenerate lifted body at {(i, delta)}")
            labels.append((i, delta))
            bodies.append(body)
            sign = -1 if (k + sum(delta)) % 2 else 1
            x_t.append(sign * base.x[i] * inv_kfact)
            y_t.append(
                Fraction(1) if (i == m_plus - 1 and delta == y_delta) else Fraction(0)
            )
    c_bodies = tuple([cube] * (n - 2 * k))
    fm = build_matrix(bodies, k, c_bodies, threads=threads)
    mx = fm.matrix.matvec(x_t)
    pair_xy = dot(y_t, mx)
    pair_xx = dot(x_t, mx)
    _check(
        pair_xy == base.pair_xy == 0,
        f"lifted pairing {pair_xy} differs from base {base.pair_xy}",
    )
    _check(
        pair_xx == base.pair_xx,
        f"lifted quadratic form {pair_xx} differs from base {base.pair_xx}",
    )
    _check(pair_xx > 0, "lifted quadratic form is not strictly positive")
    violation = find_violation(
        fm.matrix, witness=(tuple(x_t), tuple(y_t)), max_core_size=max_core_size
    )
    trace = {
        "mode": "reduction",
        "base_k": 2,
        "base_m": m_plus,
        "alpha": op_to_json(base.alpha),
        "shifts": [1, 2, 3],
    }
    return Certificate(
        n=n,
        k=k,
        labels=tuple(labels),
        bodies=tuple(bodies),
        c_bodies=c_bodies,
        x=tuple(x_t),
        y=tuple(y_t),
        pair_xy=pair_xy,
        pair_xx=pair_xx,
        matrix=fm.matrix,
        subset=violation.subset,
        subset_det=violation.det_value,
        trace=trace,
    )


def construct_counterexample(
    n: int, k: int, threads: int = 1, max_core_size: Optional[int] = None
) -> Certificate:
    """k = 2 directly; k > 2 through the reduction from the k = 2 base."""
    if k < 2:
        raise ValueError("the sign condition holds at k = 1; need k >= 2")
    if 2 * k > n:
        raise ValueError(f"need 2k <= n, got k={k}, n={n}")
    if k == 2:
        return construct_counterexample_k2(
            n, threads=threads, max_core_size=max_core_size
        )
    base = pipeline_base_k2(n, threads=threads)
    return reduce_to_general_k(
        base, k, threads=threads, max_core_size=max_core_size
    )


def double_polarization_check(base: PipelineData, cert: Certificate) -> bool:
    """Base entries must equal the signed double sum of lifted entries.

    M_ij = (1/k!^2) sum_{d,e} (-1)^{k+|d|} (-1)^{k+|e|} M~_{id, je}, summed
    over nonzero patterns (the zero pattern's body is a point and would
    contribute nothing).
    """
    k = cert.k
    scale = Fraction(1, factorial(k) ** 2)
    positions: dict[int, list[tuple[int, int]]] = {}
    for pos, (i, delta) in enumerate(cert.labels):
        sign = -1 if (k + sum(delta)) % 2 else 1
        positions.setdefault(i, []).append((pos, sign))
    size = base.fedotov.m
    for i in range(size):
        for j in range(i, size):
            total = Fraction(0)
            for pos_a, sign_a in positions[i]:
                row = cert.matrix.entries[pos_a]
                for pos_b, sign_b in positions[j]:
                    total += sign_a * sign_b * row[pos_b]
            if scale * total != base.fedotov.matrix[i, j]:
                return False
    return True


@dataclass(frozen=True)
class SearchStats:
    trials: int
    found: bool
    found_trial: Optional[int]


def _random_box(rng: random.Random, n: int, grid: Sequence[Rat]) -> BoxBody:
    return BoxBody(n, tuple(rng.choice(grid) for _ in range(n)))


def random_search(
    n: int,
    k: int,
    m: int,
    trials: int,
    seed: int,
    grid: Optional[Sequence[Rat]] = None,
    threads: int = 1,
) -> tuple[Optional[Certificate], SearchStats]:
    """Randomized hunt for a direct minor-sign violation.

    Widths are drawn from a fixed rational grid; the outcome is a pure
    function of (seed, trials): each trial re-seeds its own generator, so
    neither thread count nor early stopping elsewhere can change it.
    Returns the first violation as a certificate with empty x, y (marked
    "direct"), or None.
    """
    if k < 1 or 2 * k > n:
        raise ValueError("need 1 <= k <= n/2")
    if m < 1:
        raise ValueError("need at least one body")
    if m > SUBSET_ENUMERATION_CAP:
        raise ValueError("m too large for exhaustive minor enumeration")
    grid = tuple(grid) if grid is not None else DEFAULT_SEARCH_GRID
    for trial in range(trials):
        rng = random.Random(f"boxcert:{seed}:{trial}")
        bodies = [_random_box(rng, n, grid) for _ in range(m)]
        c_bodies = [_random_box(rng, n, grid) for _ in range(n - 2 * k)]
        fm = build_matrix(bodies, k, c_bodies, threads=threads)
        violation = sylvester_violation(fm.matrix)
        if violation is not None:
            cert = Certificate(
                n=n,
                k=k,
                labels=tuple(range(m)),
                bodies=tuple(bodies),
                c_bodies=tuple(c_bodies),
                x=(),
                y=(),
                pair_xy=None,
                pair_xx=None,
                matrix=fm.matrix,
                subset=violation.subset,
                subset_det=violation.det_value,
                trace={
                    "mode": "direct",
                    "seed": seed,
                    "trial": trial,
                    "grid": [rat_to_str(g) for g in grid],
                },
            )
            return cert, SearchStats(trial + 1, True, trial)
    return None, SearchStats(trials, False, None)


def verify_certificate(cert: Certificate) -> VerificationReport:
    """Re-check a certificate through the independent evaluation path.

    Every matrix entry is recomputed from the stored widths with the
    derivative-path mixed volumes (the builder used the permanent path),
    the pairings are re-evaluated, the minor determinant is recomputed by
    fraction-free elimination, and the sign condition is confirmed.
    """

    def fail(reason: str) -> VerificationReport:
        return VerificationReport(False, reason)

    if cert.version != CERTIFICATE_VERSION:
        return fail(f"unsupported certificate version {cert.version}")
    n, k = cert.n, cert.k
    if k < 1 or 2 * k > n:
        return fail(f"degree bounds violated: k={k}, n={n}")
    if len(cert.c_bodies) != n - 2 * k:
        return fail("auxiliary body count does not match n - 2k")
    size = len(cert.bodies)
    if len(cert.labels) != size:
        return fail("label count does not match body count")
    if cert.matrix.rows != size or cert.matrix.cols != size:
        return fail("matrix shape does not match body count")
    for box in cert.bodies + cert.c_bodies:
        if box.n != n:
            return fail("body dimension mismatch")
        if not box.is_nondegenerate:
            return fail("degenerate body in certificate")
    if not cert.matrix.is_symmetric:
        return fail("matrix is not symmetric")
    if not cert.matrix.is_positive:
        return fail("matrix is not entrywise positive")
    for i in range(size):
        for j in range(i, size):
            recomputed = mixed_volume_via_derivatives(
                _pair_tuple(n, cert.bodies[i], cert.bodies[j], k, cert.c_bodies)
            )
            if recomputed != cert.matrix[i, j]:
                return fail(
                    f"matrix entry ({i},{j}) is {cert.matrix[i, j]}, "
                    f"recomputed {recomputed}"
                )
    if cert.x or cert.y:
        if len(cert.x) != size or len(cert.y) != size:
            return fail("witness vector dimension mismatch")
        mx = cert.matrix.matvec(cert.x)
        pair_xy = dot(cert.y, mx)
        pair_xx = dot(cert.x, mx)
        if pair_xy != 0 or cert.pair_xy != 0:
            return fail(f"pairing <x,My> is {pair_xy}, expected 0")
        if pair_xx != cert.pair_xx:
            return fail("stored <x,Mx> does not match recomputation")
        if pair_xx <= 0:
            return fail("quadratic form <x,Mx> is not strictly positive")
    subset = cert.subset
    if not subset:
        return fail("empty violating subset")
    if list(subset) != sorted(set(subset)):
        return fail("violating subset must be strictly ascending")
    if subset[0] < 0 or subset[-1] >= size:
        return fail("violating subset index out of range")
    minor = det(principal_submatrix(cert.matrix, subset))
    if minor != cert.subset_det:
        return fail(f"stored minor {cert.subset_det} differs from {minor}")
    if (-1) ** len(subset) * minor <= 0:
        return fail("subset does not violate the minor sign condition")
    return VerificationReport(True, "")


def _label_to_json(label):
    if isinstance(label, tuple):
        i, delta = label
        return [i, list(delta)]
    return label


def _label_from_json(data):
    if isinstance(data, list):
        return (int(data[0]), tuple(int(b) for b in data[1]))
    return int(data)


def certificate_to_json(cert: Certificate) -> str:
    """Canonical structured-text form; round-trips bit-exactly."""
    payload = {
        "version": cert.version,
        "kind": "minor-sign-violation",
        "n": cert.n,
        "k": cert.k,
        "m": len(cert.bodies),
        "labels": [_label_to_json(l) for l in cert.labels],
        "bodies": [[rat_to_str(w) for w in b.widths] for b in cert.bodies],
        "c_bodies": [[rat_to_str(w) for w in b.widths] for b in cert.c_bodies],
        "x": [rat_to_str(v) for v in cert.x],
        "y": [rat_to_str(v) for v in cert.y],
        "pair_xy": None if cert.pair_xy is None else rat_to_str(cert.pair_xy),
        "pair_xx": None if cert.pair_xx is None else rat_to_str(cert.pair_xx),
        "matrix": [
            [rat_to_str(v) for v in row] for row in cert.matrix.entries
        ],
        "subset": list(cert.subset),
        "subset_det": rat_to_str(cert.subset_det),
        "trace": cert.trace,
    }
    return json.dumps(payload, indent=2) + "\n"


def certificate_from_json(text: str) -> Certificate:
    data = json.loads(text)
    n = int(data["n"])
    return Certificate(
        n=n,
        k=int(data["k"]),
        labels=tuple(_label_from_json(l) for l in data["labels"]),
        bodies=tuple(
            BoxBody(n, tuple(rat_from_str(w) for w in ws)) for ws in data["bodies"]
        ),
        c_bodies=tuple(
            BoxBody(n, tuple(rat_from_str(w) for w in ws)) for ws in data["c_bodies"]
        ),
        x=tuple(rat_from_str(v) for v in data["x"]),
        y=tuple(rat_from_str(v) for v in data["y"]),
        pair_xy=None if data["pair_xy"] is None else rat_from_str(data["pair_xy"]),
        pair_xx=None if data["pair_xx"] is None else rat_from_str(data["pair_xx"]),
        matrix=RatMatrix(
            [[rat_from_str(v) for v in row] for row in data["matrix"]]
        ),
        subset=tuple(int(i) for i in data["subset"]),
        subset_det=rat_from_str(data["subset_det"]),
        trace=data["trace"],
        version=int(data["version"]),
    )


def save_certificate(cert: Certificate, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(certificate_to_json(cert))


def load_certificate(path) -> Certificate:
    with open(path, encoding="utf-8") as handle:
        return certificate_from_json(handle.read())
