import random
from fractions import Fraction as F

import pytest

from boxcert.boxes import BoxBody, unit_cube
from boxcert.exactlin import RatMatrix, det, dot, inertia, principal_submatrix
from boxcert.fedotov import build_matrix
from boxcert.hypmat import (
    SUBSET_ENUMERATION_CAP,
    Violation,
    af_form_check,
    equality_witness,
    find_violation,
    greedy_core,
    is_hyperbolic,
    shrink_with_witness,
    sylvester_violation,
)
from boxcert.selftest import (
    random_box,
    random_nonneg_vector,
    random_symmetric_positive,
)


def planted_block_matrix():
    """Non-hyperbolic 3x3 block at 0..2, hyperbolic elsewhere, strong coupling
    so no cross pair forms a positive-definite 2x2 minor."""
    b = [[2, 1, 1], [1, 2, 1], [1, 1, 2]]
    rows = [[F(0)] * 6 for _ in range(6)]
    for i in range(3):
        for j in range(3):
            rows[i][j] = F(b[i][j])
            rows[3 + i][3 + j] = F(1)
    for i in range(3):
        for j in range(3, 6):
            rows[i][j] = rows[j][i] = F(2)
    return RatMatrix(rows)


def test_is_hyperbolic_examples():
    assert is_hyperbolic(RatMatrix([[1, 2], [2, 1]]))  # eigenvalues 3, -1
    assert not is_hyperbolic(RatMatrix([[2, 1], [1, 2]]))  # eigenvalues 3, 1
    assert is_hyperbolic(RatMatrix([[F(5, 7)]]))


def test_is_hyperbolic_rejects_bad_input():
    with pytest.raises(ValueError):
        is_hyperbolic(RatMatrix([[1, 2], [3, 1]]))
    with pytest.raises(ValueError):
        is_hyperbolic(RatMatrix([[1, 0], [0, 1]]))


def test_sylvester_violation_found():
    violation = sylvester_violation(RatMatrix([[2, 1], [1, 2]]))
    assert violation.subset == (0, 1)
    assert violation.det_value == 3
    assert violation.size_parity_sign == 1


def test_sylvester_violation_none_for_hyperbolic():
    assert sylvester_violation(RatMatrix([[1, 2], [2, 1]])) is None
    assert sylvester_violation(RatMatrix([[1, 1], [1, 1]])) is None


def test_sylvester_prefers_smallest_then_lexicographic():
    # two independent violating pairs; (0,1) must win over (0,2)/(2,3)
    rows = [
        [2, 1, F(1, 2), F(1, 2)],
        [1, 2, F(1, 2), F(1, 2)],
        [F(1, 2), F(1, 2), 2, 1],
        [F(1, 2), F(1, 2), 1, 2],
    ]
    violation = sylvester_violation(RatMatrix(rows))
    assert violation.subset == (0, 1)


def test_sylvester_dimension_cap():
    size = SUBSET_ENUMERATION_CAP + 1
    ones = RatMatrix([[1] * size for _ in range(size)])
    with pytest.raises(ValueError):
        sylvester_violation(ones)


def test_violation_invariant_enforced():
    Violation((0,), F(-1))  # (-1)^1 * -1 = 1 > 0: a genuine witness
    with pytest.raises(ValueError):
        Violation((0,), F(1))  # (-1)^1 * 1 <= 0: not a witness
    with pytest.raises(ValueError):
        Violation((0, 1), F(-2))  # (-1)^2 * -2 <= 0: not a witness


def test_violation_serialization():
    v = Violation((0, 2), F(5, 3))
    assert v.to_json() == {"I": [0, 2], "det": "5/3"}


def test_equivalence_inertia_vs_minors():
    rng = random.Random(0)
    for _ in range(120):
        dim = rng.randrange(1, 7)
        m = random_symmetric_positive(rng, dim)
        assert is_hyperbolic(m) == (sylvester_violation(m) is None)


def test_af_form_check_basics():
    m = RatMatrix([[1, 2], [2, 1]])
    x = (F(1), F(2))
    assert af_form_check(m, x, x)
    assert af_form_check(m, x, (F(0), F(0)))


def test_af_form_check_on_hyperbolic_random():
    rng = random.Random(1)
    found = 0
    while found < 20:
        dim = rng.randrange(1, 6)
        m = random_symmetric_positive(rng, dim)
        if not is_hyperbolic(m):
            continue
        found += 1
        for _ in range(20):
            assert af_form_check(
                m, random_nonneg_vector(rng, dim), random_nonneg_vector(rng, dim)
            )


def test_af_form_check_on_shephard_matrices():
    rng = random.Random(2)
    for _ in range(15):
        n = rng.randrange(2, 6)
        bodies = [random_box(rng, n) for _ in range(rng.randrange(2, 5))]
        c_bodies = [random_box(rng, n) for _ in range(n - 2)]
        m = build_matrix(bodies, 1, c_bodies).matrix
        assert is_hyperbolic(m)
        for _ in range(10):
            assert af_form_check(
                m,
                random_nonneg_vector(rng, len(bodies)),
                random_nonneg_vector(rng, len(bodies)),
            )


def test_af_form_check_rejects_negative_entries():
    with pytest.raises(ValueError):
        af_form_check(RatMatrix([[1, 2], [2, 1]]), (F(-1), F(0)), (F(1), F(1)))


def test_equality_witness_rank_one():
    m = RatMatrix([[1, 2], [2, 4]])
    x, y = equality_witness(m)
    assert all(v > 0 for v in x) and all(v > 0 for v in y)
    assert x[0] * y[1] != x[1] * y[0]
    assert dot(x, m.matvec(y)) ** 2 == dot(x, m.matvec(x)) * dot(y, m.matvec(y))


def test_equality_witness_rejects_nonsingular():
    with pytest.raises(ValueError):
        equality_witness(RatMatrix.identity(3))


def test_equality_witness_rejects_zero_matrix():
    with pytest.raises(ValueError):
        equality_witness(RatMatrix([[0, 0], [0, 0]]))


def test_equality_witness_kernel_parallel_to_ones():
    # kernel of [[1,-1],[-1,1]] is spanned by the all-ones vector
    m = RatMatrix([[1, -1], [-1, 1]])
    x, y = equality_witness(m)
    assert all(v > 0 for v in x) and all(v > 0 for v in y)
    assert x[0] * y[1] != x[1] * y[0]
    assert dot(x, m.matvec(y)) ** 2 == dot(x, m.matvec(x)) * dot(y, m.matvec(y))


def test_equality_witness_homothety_shephard():
    k = BoxBody(3, (1, 2, 3))
    fm = build_matrix([k, k.scale(2)], 1, [unit_cube(3)])
    assert det(fm.matrix) == 0
    x, y = equality_witness(fm.matrix)
    mx, my = fm.matrix.matvec(x), fm.matrix.matvec(y)
    assert dot(x, my) ** 2 == dot(x, mx) * dot(y, my)


def test_greedy_core_minimal_input():
    m = RatMatrix([[2, 1], [1, 2]])
    assert greedy_core(m) == (0, 1)


def test_greedy_core_planted_block():
    m = planted_block_matrix()
    assert inertia(m).n_pos >= 2
    core = greedy_core(m)
    assert set(core) <= {0, 1, 2}
    sub = principal_submatrix(m, core)
    assert inertia(sub).n_pos >= 2
    # idempotence
    assert greedy_core(sub) == tuple(range(len(core)))


def test_greedy_core_rejects_hyperbolic():
    with pytest.raises(ValueError):
        greedy_core(RatMatrix([[1, 2], [2, 1]]))


def test_shrink_with_witness_certifies_core():
    m = planted_block_matrix()
    # x spans the positive block directions, y picks a single one
    x = (F(1), F(1), F(0), F(0), F(0), F(0))
    y = (F(1), F(0), F(0), F(0), F(0), F(0))
    live = shrink_with_witness(m, x, y)
    assert set(live) <= {0, 1}
    sub = principal_submatrix(m, live)
    assert inertia(sub).n_pos >= 2


def test_shrink_with_witness_rejects_bad_witness():
    m = RatMatrix([[1, 2], [2, 1]])  # hyperbolic: no PD plane exists
    with pytest.raises(ValueError):
        shrink_with_witness(m, (F(1), F(0)), (F(0), F(1)))


def test_find_violation_with_and_without_witness():
    m = planted_block_matrix()
    v1 = find_violation(m)
    assert (-1) ** len(v1.subset) * det(principal_submatrix(m, v1.subset)) > 0
    x = (F(1), F(1), F(0), F(0), F(0), F(0))
    y = (F(1), F(0), F(0), F(0), F(0), F(0))
    v2 = find_violation(m, witness=(x, y))
    assert (-1) ** len(v2.subset) * det(principal_submatrix(m, v2.subset)) > 0
