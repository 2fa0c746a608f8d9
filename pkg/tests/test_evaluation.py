from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from autodist.errors import PreconditionError, ResolutionError, TruncationExceeded
from autodist.evaluation import (GridSpec, antiderivative_difference, antiderivative_eval,
                                 antiderivative_series, convolve_periodic, dirichlet_kernel,
                                 fractional_derivative, grid_csv, grid_eval, half_dirichlet,
                                 kernel_l1, one_sided_sum, partial_sum, phase_frac,
                                 sup_partial_sum)
from autodist.series import SpectralParams, eta_series, from_coefficients, theta_series

def tone(coeffs, period=1, c0=0, truncation=None):
    p = SpectralParams(lam=0.5, delta=0, period=period, cuspidal=c0 == 0)
    return from_coefficients(coeffs, p, c0=c0, truncation=truncation)


def random_series(n_terms=64, M=200, seed=1, period=1):
    rng = np.random.default_rng(seed)
    idx = rng.choice(np.r_[-M:0, 1:M + 1], n_terms, replace=False)
    val = rng.normal(size=n_terms) + 1j * rng.normal(size=n_terms)
    return tone(dict(zip(idx.tolist(), val.tolist())), period=period, truncation=M)


# -- phases ---------------------------------------------------------------------

@given(st.integers(-10 ** 13, 10 ** 13), st.floats(-50, 50, allow_nan=False),
       st.sampled_from([1, 4, 24]))
def test_phase_frac_float_exact(n, x, P):
    got = phase_frac(np.array([n]), x, P)[0]
    exact = (Fraction(n) * Fraction(x) / P) % 1
    err = abs(got - float(exact))
    assert min(err, 1 - err) < 1e-15


@given(st.integers(-10 ** 13, 10 ** 13), st.fractions(max_denominator=10 ** 6))
def test_phase_frac_fraction_anchor(n, x):
    got = phase_frac(np.array([n]), x, 24)[0]
    exact = float((Fraction(n) * x / 24) % 1)
    assert min(abs(got - exact), 1 - abs(got - exact)) < 1e-15


def test_phase_frac_mpf_anchor():
    with mpmath.workdps(50):
        x = mpmath.sqrt(2)
        n = np.array([10 ** 12 + 7, -(10 ** 11) - 3])
        got = phase_frac(n, x, 24)
        ref = [float(mpmath.frac(int(k) * x / 24)) for k in n]
    assert np.allclose(got, ref, atol=1e-15)


# -- partial sums ---------------------------------------------------------------

def test_partial_sum_examples():
    s = tone({1: 1})
    assert partial_sum(s, 0.0, 1) == pytest.approx(1)
    assert partial_sum(theta_series(100), 0.0, 9) == pytest.approx(7)
    s2 = tone({1: 1, -1: 1})
    assert partial_sum(s2, 0.25, 1, k=1) == pytest.approx(2j)


def test_partial_sum_truncation_error():
    with pytest.raises(TruncationExceeded):
        partial_sum(theta_series(10), 0.1, 11)


def test_one_sided():
    s = tone({1: 1, -1: 5})
    assert one_sided_sum(s, +1, 0.0, 1) == pytest.approx(1)
    assert one_sided_sum(s, -1, 0.0, 1) == pytest.approx(5)
    r = random_series()
    for x in (0.1, 0.77):
        both = one_sided_sum(r, 1, x, 200) + one_sided_sum(r, -1, x, 200) + r.c0
        assert abs(both - partial_sum(r, x, 200)) < 1e-12


def test_partial_sum_against_direct():
    r = random_series(period=4)
    xs = np.linspace(-1, 3, 17)
    direct = [sum(c * np.exp(2j * np.pi * n * x / 4) for n, c in r.as_dict().items()) for x in xs]
    assert np.allclose(partial_sum(r, xs, 200), direct, atol=1e-11)


# -- antiderivatives --------------------------------------------------------------

def test_antiderivative_single_term():
    assert antiderivative_eval(tone({1: 1}), 0, 0.0, 1) == pytest.approx(1 / (2j * np.pi))


def test_antiderivative_zero_mean():
    r = random_series()
    x = np.arange(4096) / 4096
    assert abs(np.mean(antiderivative_eval(r, 0, x, 200))) < 1e-8


def test_theta_antiderivative_is_riemann_function():
    s = theta_series(10 ** 4)
    x = 0.3
    n = np.arange(1, 101, dtype=float)
    riemann = np.sum(np.sin(2 * np.pi * n * n * x) / (n * n))
    assert abs(np.pi * antiderivative_eval(s, 0, x, 10 ** 4).real - riemann) < 1e-10


def test_antiderivative_derivative_matches_series():
    # central difference of the antiderivative recovers the series
    r = random_series(n_terms=20, M=30)
    x, h = 0.37, 1e-5
    d = (antiderivative_eval(r, 0, x + h, 30) - antiderivative_eval(r, 0, x - h, 30)) / (2 * h)
    assert abs(d - partial_sum(r, x, 30)) < 1e-6


@given(st.floats(-1, 1), st.floats(1e-12, 1e-2))
def test_difference_matches_direct(a, d):
    s = eta_series(10 ** 6)
    lhs = antiderivative_difference(s, 0, a, d, 10 ** 6)
    rhs = antiderivative_eval(s, 0, a + d, 10 ** 6) - antiderivative_eval(s, 0, a, 10 ** 6)
    assert abs(lhs - rhs) < 1e-12


def test_difference_keeps_digits_near_anchor():
    s = tone({3: 1.0})
    d = 1e-12
    got = antiderivative_difference(s, 0, Fraction(1, 3), d, 3)
    with mpmath.workdps(40):
        exact = complex(mpmath.expm1(2j * mpmath.pi * 3 * mpmath.mpf(d)) / (6j * mpmath.pi))
    assert abs(got - exact) < 1e-14 * abs(exact)


# -- fractional derivatives ----------------------------------------------------------

def test_fractional_derivative_beta_one_is_derivative():
    s = tone({1: 1, -1: 1})
    f = fractional_derivative(s, 1.0)
    assert f.coefficient(1) == pytest.approx(2j * np.pi)
    assert f.coefficient(-1) == pytest.approx(-2j * np.pi)


@pytest.mark.parametrize("b1,b2", [(1.0, 1.0), (0.5, 0.5), (0.25, 0.75)])
def test_fractional_derivative_semigroup(b1, b2):
    r = random_series(period=3)
    two = fractional_derivative(fractional_derivative(r, b1), b2)
    one = fractional_derivative(r, b1 + b2)
    assert np.allclose(two.values, one.values, rtol=1e-12, atol=0)


def test_fractional_derivative_undoes_antiderivative():
    r = random_series(period=24)
    for k in (1, 2):
        up = fractional_derivative(antiderivative_series(r, k), 1.0)
        down = antiderivative_series(r, k - 1)
        assert np.allclose(up.values, down.values, rtol=1e-12, atol=0)


def test_fractional_derivative_needs_zero_constant():
    with pytest.raises(PreconditionError):
        fractional_derivative(theta_series(10), 0.5)


# -- kernels --------------------------------------------------------------------------

def test_kernel_values():
    assert dirichlet_kernel(2, 0.0) == 5
    assert dirichlet_kernel(2, 3.0) == 5
    assert half_dirichlet(3, 0.0) == 4
    n = np.arange(-25, 26)
    direct = np.sum(np.exp(2j * np.pi * n * 0.37)).real
    assert abs(dirichlet_kernel(25, 0.37) - direct) < 1e-12


def test_half_kernel_identity():
    rng = np.random.default_rng(3)
    x = rng.uniform(-2, 2, 100)
    for N in (2, 8, 30):
        lhs = half_dirichlet(N, x)
        rhs = np.exp(1j * np.pi * N * x) * dirichlet_kernel(N // 2, x)
        assert np.allclose(lhs, rhs, atol=1e-12)


def test_kernel_l1_n1_against_fine_quadrature():
    x = (np.arange(10 ** 6) + 0.5) / 10 ** 6
    oracle = np.mean(np.abs(1 + 2 * np.cos(2 * np.pi * x)))
    assert abs(kernel_l1(1, 10 ** 5) - oracle) < 1e-6


def test_kernel_l1_resolution_guard():
    with pytest.raises(PreconditionError):
        kernel_l1(100, 1000)


def test_kernel_l1_monotone():
    vals = [kernel_l1(2 ** j, 64 * 2 ** j) for j in range(4, 11)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


# -- grids ------------------------------------------------------------------------------

def test_gridspec_validation():
    with pytest.raises(PreconditionError):
        GridSpec(1.0, 0.0, 10)
    with pytest.raises(PreconditionError):
        GridSpec(0.0, 1.0, 1)
    assert list(GridSpec(0.0, 1.0, 2).nodes()) == [0.0, 1.0]


def test_grid_eval_closed_form():
    g = GridSpec(0.0, 0.5, 3)
    got = grid_eval(tone({1: 1}), 0, g, 1)
    assert np.allclose(got, np.exp(2j * np.pi * g.nodes()) / (2j * np.pi))


@pytest.mark.parametrize("period", [1, 24])
@pytest.mark.parametrize("mode,k", [("antiderivative", 0), ("antiderivative", 1), ("sum", 0),
                                    ("sum", 1)])
def test_grid_eval_matches_direct(period, mode, k):
    r = random_series(period=period)
    g = GridSpec(-0.3, 0.9, 1000)
    fast = grid_eval(r, k, g, 200, mode=mode)
    if mode == "antiderivative":
        slow = antiderivative_eval(r, k, g.nodes(), 200)
    else:
        slow = partial_sum(r, g.nodes(), 200, k=k)
    assert np.max(np.abs(fast - slow)) <= 1e-9 * np.max(np.abs(slow))


def test_grid_eval_transform_path():
    # large dense workloads go through the chirp-z path
    rng = np.random.default_rng(5)
    M = 4000
    idx = np.arange(1, M + 1)
    s = tone(dict(zip(idx.tolist(), (rng.normal(size=M) / idx).tolist())))
    g = GridSpec(0.1, 0.6, 3000)
    fast = grid_eval(s, 0, g, M)
    slow = antiderivative_eval(s, 0, g.nodes(), M)
    assert np.max(np.abs(fast - slow)) <= 1e-9 * np.max(np.abs(slow))


def test_grid_csv_header():
    text = grid_csv([0.0, 1.0], np.array([1 + 1j, 2]), {"N": 5, "k": 0})
    lines = text.splitlines()
    assert lines[0] == "# N=5" and lines[2] == "x,re,im,abs"
    assert len(lines) == 5


# -- sups and convolution -----------------------------------------------------------------

def test_sup_partial_sum_examples():
    assert sup_partial_sum(tone({1: 1}), 0, 1, 8) == pytest.approx(1)
    assert sup_partial_sum(tone({1: 1, -1: 1}), 0, 1, 8) == pytest.approx(2)
    with pytest.raises(ResolutionError):
        sup_partial_sum(tone({1: 1}), 0, 1, 4)


def test_sup_partial_sum_refinement():
    s = theta_series(10 ** 4)
    coarse = sup_partial_sum(s, 0, 10 ** 4, 8 * 10 ** 4)
    fine = sup_partial_sum(s, 0, 10 ** 4, 8 * 10 ** 5)
    assert abs(coarse - fine) <= 0.05 * fine


def test_sup_residue_reduction_agrees_with_full_grid():
    s = eta_series(10 ** 5)
    reduced = sup_partial_sum(s, 0, 10 ** 5, 1 << 20)
    idx, val = s.window(10 ** 5)
    a = np.zeros(1 << 20, dtype=complex)
    np.add.at(a, idx % (1 << 20), val)
    full = np.abs(np.fft.ifft(a) * (1 << 20)).max()
    assert abs(reduced - full) < 1e-3 * full


def test_convolution_with_half_kernel_gives_one_sided_sum():
    r = random_series(n_terms=30, M=40)
    G = 512
    x = np.arange(G) / G
    f = partial_sum(r, x, 40) - r.c0
    P = half_dirichlet(40, x)
    conv = convolve_periodic(f, P)
    expected = one_sided_sum(r, 1, x, 40)
    assert np.max(np.abs(conv - expected)) < 1e-8
