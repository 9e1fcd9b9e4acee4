from __future__ import annotations

import cmath

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twoweight.cyclotomic import CycVec


def test_orbit_sum_is_zero():
    assert CycVec(3, [1, 1, 1]) == CycVec.integer(3, 0)
    assert CycVec(3, [1, 1, 1]) == 0


def test_root_product():
    assert CycVec.root(3, 1) * CycVec.root(3, 2) == 1
    assert CycVec.root(5, 3) * CycVec.root(5, 4) == CycVec.root(5, 2)


def test_to_complex():
    z = CycVec(3, [0, 1, 0]).to_complex()
    assert z.real == pytest.approx(-0.5, abs=1e-12)
    assert z.imag == pytest.approx(np.sqrt(3) / 2, abs=1e-12)


def test_canonical_form_and_integers():
    v = CycVec(5, [7, 3, 3, 3, 3])
    assert v.is_integer() and v.as_integer() == 4
    assert v.coeffs[-1] == 0
    assert not CycVec.root(5).is_integer()
    with pytest.raises(ValueError):
        CycVec.root(5).as_integer()


def test_mismatched_primes():
    with pytest.raises(ValueError):
        CycVec.root(3) + CycVec.root(5)


coeff_lists = st.lists(st.integers(-50, 50), min_size=5, max_size=5)


@given(coeff_lists, coeff_lists, coeff_lists)
def test_ring_laws_agree_with_complex_values(a, b, c):
    u, v, w = CycVec(5, a), CycVec(5, b), CycVec(5, c)
    assert u * (v + w) == u * v + u * w
    assert (u * v) * w == u * (v * w)
    assert u - u == 0
    assert -u + u == 0
    assert cmath.isclose((u * v).to_complex(), u.to_complex() * v.to_complex(), abs_tol=1e-6)
    assert hash(u + 0) == hash(u)
