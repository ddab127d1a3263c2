"""Entropy, divergence and representativeness measures.

Frozen targets are derived in the comments next to each constant; the
quantum measures are cross-checked against their classical counterparts
on diagonal states, where the two theories must coincide.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entailkit.measures import (
    Representativeness,
    alpha_skew,
    jensen_shannon,
    kl_divergence,
    quantum_js,
    quantum_relative_entropy,
    representativeness_kl,
    representativeness_vn,
    shannon_entropy,
    support_inclusion,
    von_neumann_entropy,
)
from entailkit.tensor_core import DensityMatrix

# the leading worked example: a specific word's contexts are a subset of
# the general word's, so divergence is finite in one direction only
GOLDFISH_VEC = np.array([1.0, 1.0, 1.0]) / 3.0
CAT_VEC = np.array([0.0, 0.5, 0.5])
GOLDFISH_DM = DensityMatrix(
    np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 1.0], [0.0, 1.0, 1.0]]) / 3.0
)
CAT_DM = DensityMatrix(np.diag([0.0, 0.5, 0.5]))


# ---------------------------------------------------------------------------
# classical entropy and divergence


def test_shannon_entropy_frozen_value():
    # H(1/4, 3/4) = 2 ln 2 - (3/4) ln 3
    expected = 2.0 * math.log(2.0) - 0.75 * math.log(3.0)
    assert expected == pytest.approx(0.5623351446188083, abs=1e-15)
    assert shannon_entropy(np.array([0.25, 0.75])) == pytest.approx(expected, abs=1e-12)


def test_shannon_entropy_bounds():
    assert shannon_entropy(np.array([1.0, 0.0, 0.0])) == 0.0
    assert shannon_entropy(np.ones(8) / 8.0) == pytest.approx(math.log(8.0), abs=1e-12)


def test_kl_divergence_frozen_value():
    # KL((1/2,1/2) || (3/4,1/4)) = ln 2 - (1/2) ln 3
    expected = math.log(2.0) - 0.5 * math.log(3.0)
    assert expected == pytest.approx(0.14384103622589042, abs=1e-15)
    got = kl_divergence(np.array([0.5, 0.5]), np.array([0.75, 0.25]))
    assert got == pytest.approx(expected, abs=1e-12)


def test_kl_divergence_identity_is_zero():
    p = np.array([0.2, 0.3, 0.5])
    assert kl_divergence(p, p) == 0.0


def test_kl_divergence_support_violation_is_infinite():
    p = np.array([0.5, 0.5])
    q = np.array([1.0, 0.0])
    assert math.isinf(kl_divergence(p, q))
    assert math.isfinite(kl_divergence(q, p))


def test_kl_divergence_rejects_unnormalized():
    with pytest.raises(ValueError):
        kl_divergence(np.array([0.5, 0.6]), np.array([0.5, 0.5]))
    with pytest.raises(ValueError):
        kl_divergence(np.array([0.5, 0.5]), np.array([1.5, -0.5]))


def test_goldfish_cat_vector_direction():
    # KL(cat || goldfish) = ln(3/2); the reverse direction diverges because
    # cat's first coordinate is zero where goldfish has mass
    expected = math.log(1.5)
    assert expected == pytest.approx(0.4054651081081645, abs=1e-15)
    assert kl_divergence(CAT_VEC, GOLDFISH_VEC) == pytest.approx(expected, abs=1e-12)
    assert math.isinf(kl_divergence(GOLDFISH_VEC, CAT_VEC))


def test_goldfish_cat_representativeness():
    # 1 / (1 + ln 1.5)
    rep = representativeness_kl(CAT_VEC, GOLDFISH_VEC)
    assert rep.value == pytest.approx(0.7115082361212485, abs=1e-12)
    assert rep.value > 0.70
    assert not rep.diverged
    reverse = representativeness_kl(GOLDFISH_VEC, CAT_VEC)
    assert reverse.value == 0.0
    assert reverse.diverged


def test_representativeness_mapping():
    assert Representativeness.from_divergence(0.0) == Representativeness(1.0, False)
    rep = Representativeness.from_divergence(math.inf)
    assert rep.value == 0.0 and rep.diverged
    assert Representativeness.from_divergence(1.0).value == pytest.approx(0.5)


_prob_entries = st.lists(
    st.one_of(st.just(0.0), st.floats(min_value=0.05, max_value=1.0)),
    min_size=2,
    max_size=10,
)


def _normalize_or_none(entries):
    total = sum(entries)
    if total <= 0.0:
        return None
    return np.array(entries) / total


@settings(max_examples=200, deadline=None)
@given(p_raw=_prob_entries, q_raw=_prob_entries)
def test_kl_divergence_nonnegative(p_raw, q_raw):
    n = min(len(p_raw), len(q_raw))
    p = _normalize_or_none(p_raw[:n])
    q = _normalize_or_none(q_raw[:n])
    if p is None or q is None:
        return
    d = kl_divergence(p, q)
    assert d >= 0.0
    rep = representativeness_kl(p, q)
    assert 0.0 <= rep.value <= 1.0


@settings(max_examples=200, deadline=None)
@given(p_raw=_prob_entries, q_raw=_prob_entries)
def test_jensen_shannon_symmetric_and_bounded(p_raw, q_raw):
    n = min(len(p_raw), len(q_raw))
    p = _normalize_or_none(p_raw[:n])
    q = _normalize_or_none(q_raw[:n])
    if p is None or q is None:
        return
    left = jensen_shannon(p, q)
    right = jensen_shannon(q, p)
    assert left == pytest.approx(right, abs=1e-12)
    assert -1e-12 <= left <= math.log(2.0) + 1e-12


def test_jensen_shannon_disjoint_supports_saturate():
    p = np.array([1.0, 0.0])
    q = np.array([0.0, 1.0])
    assert jensen_shannon(p, q) == pytest.approx(math.log(2.0), abs=1e-12)
    assert jensen_shannon(p, p) == pytest.approx(0.0, abs=1e-12)


def test_alpha_skew_finite_where_kl_diverges():
    p = np.array([0.5, 0.5])
    q = np.array([1.0, 0.0])
    assert math.isinf(kl_divergence(p, q))
    skew = alpha_skew(p, q)
    assert math.isfinite(skew) and skew > 0.0


def test_alpha_skew_approaches_kl_on_shared_support():
    p = np.array([0.3, 0.7])
    q = np.array([0.6, 0.4])
    target = kl_divergence(p, q)
    assert alpha_skew(p, q, alpha=1.0 - 1e-9) == pytest.approx(target, rel=1e-6)


def test_alpha_skew_rejects_bad_alpha():
    p = np.array([0.5, 0.5])
    for alpha in (0.0, 1.0, -0.2, 1.7):
        with pytest.raises(ValueError):
            alpha_skew(p, p, alpha=alpha)


# ---------------------------------------------------------------------------
# quantum measures


def test_von_neumann_entropy_special_states():
    pure = DensityMatrix(np.diag([1.0, 0.0, 0.0]))
    assert von_neumann_entropy(pure) == pytest.approx(0.0, abs=1e-12)
    mixed = DensityMatrix(np.eye(4) / 4.0)
    assert von_neumann_entropy(mixed) == pytest.approx(math.log(4.0), abs=1e-12)


def test_von_neumann_entropy_equals_shannon_on_diagonal():
    p = np.array([0.1, 0.0, 0.6, 0.3])
    rho = DensityMatrix(np.diag(p))
    assert von_neumann_entropy(rho) == pytest.approx(shannon_entropy(p), abs=1e-12)


def test_von_neumann_entropy_basis_invariant():
    # entropy depends only on the spectrum
    theta = 0.7
    u = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    rho = DensityMatrix(u @ np.diag([0.25, 0.75]) @ u.T)
    assert von_neumann_entropy(rho) == pytest.approx(
        shannon_entropy(np.array([0.25, 0.75])), abs=1e-12
    )


def test_quantum_relative_entropy_identity_is_zero():
    rho = DensityMatrix(np.diag([0.25, 0.75]))
    assert quantum_relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-12)


def test_quantum_relative_entropy_support_violation():
    rho = DensityMatrix(np.diag([0.5, 0.5]))
    sigma = DensityMatrix(np.diag([1.0, 0.0]))
    assert math.isinf(quantum_relative_entropy(rho, sigma))
    assert math.isfinite(quantum_relative_entropy(sigma, rho))


def test_goldfish_cat_density_direction():
    # the matrix representations look inclusion-like, but neither support
    # contains the other, so representativeness collapses both ways
    rep = representativeness_vn(CAT_DM, GOLDFISH_DM)
    assert rep.diverged and rep.value == 0.0
    rev = representativeness_vn(GOLDFISH_DM, CAT_DM)
    assert rev.diverged and rev.value == 0.0
    assert not support_inclusion(CAT_DM, GOLDFISH_DM)
    assert not support_inclusion(GOLDFISH_DM, CAT_DM)


def test_support_inclusion_basic_cases():
    full = DensityMatrix(np.eye(3) / 3.0)
    partial = DensityMatrix(np.diag([0.5, 0.5, 0.0]))
    assert support_inclusion(partial, full)
    assert not support_inclusion(full, partial)
    assert support_inclusion(full, full)
    assert support_inclusion(partial, partial)


def test_support_inclusion_off_diagonal():
    plus = np.full((2, 2), 0.5)  # projector onto (1,1)/sqrt(2)
    rho = DensityMatrix(plus)
    mixed = DensityMatrix(np.eye(2) / 2.0)
    assert support_inclusion(rho, mixed)
    assert not support_inclusion(mixed, rho)


@settings(max_examples=150, deadline=None)
@given(p_raw=_prob_entries, q_raw=_prob_entries)
def test_quantum_measures_match_classical_on_diagonal(p_raw, q_raw):
    n = min(len(p_raw), len(q_raw))
    p = _normalize_or_none(p_raw[:n])
    q = _normalize_or_none(q_raw[:n])
    if p is None or q is None:
        return
    rho = DensityMatrix(np.diag(p))
    sigma = DensityMatrix(np.diag(q))

    assert von_neumann_entropy(rho) == pytest.approx(shannon_entropy(p), abs=1e-9)

    classical = kl_divergence(p, q)
    quantum = quantum_relative_entropy(rho, sigma)
    if math.isinf(classical):
        assert math.isinf(quantum)
    else:
        assert quantum == pytest.approx(classical, abs=1e-9)

    rep_c = representativeness_kl(p, q)
    rep_q = representativeness_vn(rho, sigma)
    assert rep_c.diverged == rep_q.diverged
    assert rep_q.value == pytest.approx(rep_c.value, abs=1e-9)


def test_quantum_js_matches_classical_on_diagonal():
    p = np.array([0.2, 0.8])
    q = np.array([0.7, 0.3])
    rho, sigma = DensityMatrix(np.diag(p)), DensityMatrix(np.diag(q))
    assert quantum_js(rho, sigma) == pytest.approx(jensen_shannon(p, q), abs=1e-10)
    assert quantum_js(rho, sigma) == pytest.approx(quantum_js(sigma, rho), abs=1e-12)
    assert quantum_js(rho, rho) == pytest.approx(0.0, abs=1e-12)


def test_quantum_js_bounded_on_disjoint_supports():
    rho = DensityMatrix(np.diag([1.0, 0.0]))
    sigma = DensityMatrix(np.diag([0.0, 1.0]))
    assert quantum_js(rho, sigma) == pytest.approx(math.log(2.0), abs=1e-12)


def test_dimension_mismatch_raises():
    with pytest.raises(ValueError):
        kl_divergence(np.array([0.5, 0.5]), np.array([1.0 / 3] * 3))
    with pytest.raises(ValueError):
        quantum_relative_entropy(
            DensityMatrix(np.eye(2) / 2.0), DensityMatrix(np.eye(3) / 3.0)
        )
