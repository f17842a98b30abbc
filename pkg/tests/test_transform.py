import cmath
import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vilenkin.core import (
    CylinderFunction, RadixSystem, group_add, haar_integrate, norm, point_of_cell, refine,
)
from vilenkin.errors import DepthExceeded, IndexOutOfRange
from vilenkin.operators import dirichlet
from vilenkin.transform import (
    Spectrum, character, character_values, forward, forward_naive, inverse, rademacher, spectrum_at,
)

from conftest import radix_systems, random_function


def test_walsh_rademacher():
    rs = RadixSystem.constant(2, 3)
    r0 = rademacher(rs, 0)
    assert r0.depth == 1 and list(r0.values.real) == [1, -1]


def test_ternary_rademacher():
    r0 = rademacher(RadixSystem((3, 2)), 0)
    expected = [cmath.exp(2j * cmath.pi * k / 3) for k in range(3)]
    assert np.allclose(r0.values, expected, atol=1e-15)


def test_rademacher_depth_guard():
    with pytest.raises(DepthExceeded):
        rademacher(RadixSystem((2, 2)), 2)


def test_character_out_of_range():
    with pytest.raises(IndexOutOfRange):
        character(RadixSystem((2, 3)), 6)


def test_walsh_characters_are_signs():
    rs = RadixSystem.constant(2, 6)
    for n in range(rs.M[-1]):
        v = character_values(rs, n, 6)
        assert set(np.unique(v)) <= {1, -1}
        assert not np.any(v.imag)


def test_character_is_product_of_rademachers():
    rs = RadixSystem((3, 2, 5))
    n = 1 + 1 * 3 + 4 * 6
    prod = CylinderFunction.constant(rs, 1.0, 3)
    for k, digit in enumerate((1, 1, 4)):
        for _ in range(digit):
            prod = prod * rademacher(rs, k)
    assert np.allclose(refine(character(rs, n), 3).values, prod.values, atol=1e-14)


def test_forward_examples():
    rs = RadixSystem((2, 3, 2))
    s = forward(refine(character(rs, 3), 3))
    expected = np.zeros(12)
    expected[3] = 1
    assert np.allclose(s.coeffs, expected, atol=1e-15)
    c = forward(CylinderFunction.constant(rs, 2.5 - 1j, 3)).coeffs
    assert c[0] == pytest.approx(2.5 - 1j) and np.allclose(c[1:], 0, atol=1e-15)


def test_inverse_examples():
    rs = RadixSystem((2, 3, 2))
    e0 = np.zeros(12)
    e0[0] = 1
    assert np.allclose(inverse(Spectrum(rs, 3, e0)).values, 1)
    ones = inverse(Spectrum(rs, 3, np.ones(12))).values
    expected = np.zeros(12)
    expected[0] = 12
    assert np.allclose(ones, expected, atol=1e-13)
    assert np.allclose(ones, dirichlet(rs, 12, 3).values, atol=1e-13)


@given(radix_systems(max_cells=64))
def test_orthonormality_exhaustive(rs):
    d = rs.depth
    chars = [character_values(rs, n, d) for n in range(rs.M[d])]
    for n, k in itertools.product(range(rs.M[d]), repeat=2):
        ip = haar_integrate(CylinderFunction(rs, d, chars[n] * np.conj(chars[k])))
        assert abs(ip - (n == k)) <= 1e-12


@given(radix_systems(max_cells=64))
def test_character_homomorphism(rs):
    d = rs.depth
    X = rs.coords(d)
    m = np.array(rs.m)
    total = ((X[:, None, :] + X[None, :, :]) % m) @ np.array(rs.M[:d])
    x, y = point_of_cell(rs, 1 % rs.M[d], d), point_of_cell(rs, rs.M[d] - 1, d)
    for n in range(rs.M[d]):
        psi = character_values(rs, n, d)
        assert np.abs(psi[total] - np.outer(psi, psi)).max() <= 1e-12
        f = CylinderFunction(rs, d, psi)
        assert abs(f(group_add(rs, x, y)) - f(x) * f(y)) <= 1e-12


@given(radix_systems(max_cells=512, max_radix=16), st.integers(0, 2 ** 32 - 1))
def test_fast_matches_naive(rs, seed):
    f = random_function(rs, rs.depth, seed)
    assert np.abs(forward(f).coeffs - forward_naive(f).coeffs).max() <= 1e-10


@given(radix_systems(max_cells=1 << 14, max_radix=16), st.integers(0, 2 ** 32 - 1))
def test_roundtrip_and_plancherel(rs, seed):
    f = random_function(rs, rs.depth, seed)
    s = forward(f)
    assert np.abs(inverse(s).values - f.values).max() <= 1e-9
    energy = norm(f, 2) ** 2
    assert abs(energy - np.sum(np.abs(s.coeffs) ** 2)) <= 1e-9 * energy


@given(radix_systems(max_cells=256), st.integers(0, 2 ** 32 - 1),
       st.complex_numbers(max_magnitude=10), st.complex_numbers(max_magnitude=10))
def test_inverse_is_linear(rs, seed, a, b):
    rng = np.random.default_rng(seed)
    d, n = rs.depth, rs.M[rs.depth]
    s1 = Spectrum(rs, d, rng.standard_normal(n))
    s2 = Spectrum(rs, d, rng.standard_normal(n) * 1j)
    lhs = inverse(a * s1 + b * s2).values
    rhs = a * inverse(s1).values + b * inverse(s2).values
    assert np.abs(lhs - rhs).max() <= 1e-9 * (1 + abs(a) + abs(b)) * n


def test_spectrum_at_zero_pads():
    rs = RadixSystem((2, 3, 2))
    f = character(rs, 1)
    s = spectrum_at(f, 3)
    assert s.coeffs.shape == (12,) and s.coeffs[1] == pytest.approx(1)
    assert np.allclose(np.delete(s.coeffs, 1), 0)


def test_walsh_path_is_exact():
    rs = RadixSystem.constant(2, 8)
    rng = np.random.default_rng(3)
    ints = rng.integers(-50, 50, size=256).astype(float)
    s = forward(CylinderFunction(rs, 8, ints))
    back = inverse(s).values.real
    assert np.array_equal(back, ints)
