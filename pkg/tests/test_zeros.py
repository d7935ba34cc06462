import math

import numpy as np
import pytest

from dhzeros.errors import NonConvergent, NotFound, ZeroOnBoundary
from dhzeros.zeros import (SearchRect, ZeroRecord, derivative, derivative_zero_between, find_zeros,
                           mirror_check, refine_newton, winding_number)

from conftest import EMPTY, WINDOW_80, WINDOW_85, WINDOW_176


def dense_grid_zeros(f, rect, step=0.02):
    """Oracle: local minima of |f| on a fine grid, polished by Newton, kept if inside."""
    ss = np.arange(rect.sigma_min - step, rect.sigma_max + 2 * step, step)
    ts = np.arange(rect.t_min - step, rect.t_max + 2 * step, step)
    S, T = np.meshgrid(ss, ts, indexing="ij")
    A = np.abs(f((S + 1j * T).ravel())).reshape(S.shape)
    core = A[1:-1, 1:-1]
    is_min = np.ones_like(core, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                is_min &= core <= A[1 + di:A.shape[0] - 1 + di, 1 + dj:A.shape[1] - 1 + dj]
    out = []
    for i, j in zip(*np.nonzero(is_min)):
        try:
            z = refine_newton(f, complex(S[i + 1, j + 1], T[i + 1, j + 1]), max_travel=0.1).location
        except NonConvergent:
            continue
        if rect.contains(z) and all(abs(z - w) > 1e-7 for w in out):
            out.append(z)
    return sorted(out, key=lambda z: (z.imag, z.real))


# rectangles ---------------------------------------------------------------------------

def test_search_rect_parse_and_validation():
    r = SearchRect.parse("-1:2:80:90")
    assert r.as_list() == [-1, 2, 80, 90] and r.boundary_samples == 400
    with pytest.raises(ValueError):
        SearchRect(2, 1, 0, 1)
    with pytest.raises(ValueError):
        SearchRect.parse("1:2:3")


def test_split_covers_cell():
    a, b = WINDOW_80.split()
    assert a.t_min == WINDOW_80.t_min and b.t_max == WINDOW_80.t_max and a.t_max == b.t_min


# winding numbers ----------------------------------------------------------------------

def test_tail_bound_excludes_zeros(spec5, f5):
    # |f(s) - 1| <= sum_{n >= 2} |a_n| n^-4 for Re s >= 4
    n = np.arange(2, 10**6)
    tail = np.sum(np.abs(spec5.coefficients[(n - 1) % 5]) * n**-4.0)
    assert tail < 1
    assert winding_number(f5, EMPTY) == 0
    assert find_zeros(f5, EMPTY) == []


def test_winding_matches_dense_grid_oracle(f5):
    oracle = dense_grid_zeros(f5, WINDOW_85)
    assert len(oracle) >= 1
    assert winding_number(f5, WINDOW_85) == len(oracle)
    found = [z.location for z in find_zeros(f5, WINDOW_85)]
    assert len(found) == len(oracle)
    assert all(abs(a - b) < 1e-8 for a, b in zip(found, oracle))


@pytest.mark.parametrize("frac", [0.37, 0.5, 0.81])
def test_split_additivity(f5, frac):
    total = winding_number(f5, WINDOW_85)
    for halves in (WINDOW_85.split(frac), _vertical(WINDOW_85, frac)):
        assert sum(winding_number(f5, h) for h in halves) == total


def _vertical(rect, frac):
    x = rect.sigma_min + frac * rect.width
    return (SearchRect(rect.sigma_min, x, rect.t_min, rect.t_max, rect.boundary_samples),
            SearchRect(x, rect.sigma_max, rect.t_min, rect.t_max, rect.boundary_samples))


def test_zero_on_boundary_is_reported(f5, zeros_80):
    z = zeros_80[0].location
    rect = SearchRect(z.real, z.real + 0.5, z.imag - 0.5, z.imag + 0.5)
    with pytest.raises(ZeroOnBoundary) as info:
        winding_number(f5, rect, boundary_tol=1e-6)
    assert info.value.suggestion.sigma_min < rect.sigma_min


@pytest.mark.parametrize("window, fixture", [(WINDOW_80, "zeros_80"), (WINDOW_176, "zeros_176")])
def test_counts_agree_with_refined_zeros(f5, window, fixture, request):
    zs = request.getfixturevalue(fixture)
    assert winding_number(f5, window) == len(zs)


# find_zeros -------------------------------------------------------------------------

def test_window_80_records(f5, zeros_80):
    assert len(zeros_80) >= 3
    keys = [(z.location.imag, z.location.real) for z in zeros_80]
    assert keys == sorted(keys)
    for z in zeros_80:
        assert isinstance(z, ZeroRecord) and z.final_residual < 1e-9
        assert abs(f5(z.location)) < 1e-9
        assert WINDOW_80.contains(z.location)
    off = [z for z in zeros_80 if abs(z.location.real - 0.5) > 0.05]
    assert len(off) >= 2
    locs = [z.location for z in zeros_80]
    for z in off:  # its mirror is in the same list
        target = complex(1 - z.location.real, z.location.imag)
        assert min(abs(w - target) for w in locs) < 1e-6


def test_window_176_pair(pair_176):
    a, b = pair_176
    assert abs(a.imag - 176.7) < 0.05 and abs(a.real + b.real - 1) < 1e-8
    assert abs(a.real - 0.5) > 0.05


def test_dedup_distinct(zeros_80, zeros_176):
    for zs in (zeros_80, zeros_176):
        locs = [z.location for z in zs]
        assert all(abs(a - b) > 1e-7 for i, a in enumerate(locs) for b in locs[i + 1:])


# Newton --------------------------------------------------------------------------------

def test_basin_stability(f5, zeros_80, zeros_176):
    rng = np.random.default_rng(11)
    for z in zeros_80 + zeros_176:
        again = refine_newton(f5, z.location + 1e-4)
        assert abs(again.location - z.location) < 1e-9
        for d in 1e-4 * np.exp(2j * math.pi * rng.random(10)):
            assert abs(refine_newton(f5, z.location + d).location - z.location) < 1e-9


def test_no_zero_near_four(f5):
    with pytest.raises(NonConvergent):
        refine_newton(f5, 4 + 5j)


def test_zeros_are_simple(f5, zeros_80, zeros_176):
    df = derivative(f5)
    for z in zeros_80 + zeros_176:
        assert abs(df(z.location)) > 1e-6


def test_newton_record_fields(f5, zeros_80):
    rec = refine_newton(f5, zeros_80[0].location + 1e-3)
    assert rec.newton_iters >= 1 and rec.final_residual < 1e-9
    d = rec.to_dict()
    assert set(d) >= {"sigma", "t", "residual", "newton_iters", "on_critical_line"}


# mirrors ----------------------------------------------------------------------------

def test_mirror_of_on_line_zero(f5, zeros_80):
    on = [z for z in zeros_80 if z.on_critical_line]
    assert on
    for z in on:
        m = mirror_check(f5, z)
        assert abs(m.mirror - z.location) < 1e-7


@pytest.mark.parametrize("fixture", ["zeros_80", "zeros_176"])
def test_every_off_line_zero_has_a_mirror(f5, fixture, request):
    for z in request.getfixturevalue(fixture):
        if abs(z.location.real - 0.5) <= 1e-6:
            continue
        m = mirror_check(f5, z)
        assert abs(m.mirror.imag - z.location.imag) < 1e-6
        assert abs(f5(m.mirror)) < 1e-9
        assert abs(m.mirror.real - (1 - z.location.real)) < 1e-6


# derivative zeros --------------------------------------------------------------------

def test_derivative_is_accurate(f5):
    s = 0.3 + 176.7j
    h = 1e-6
    crude = (f5(s + h) - f5(s - h)) / (2 * h)
    assert abs(derivative(f5)(s) - crude) < 1e-6 * max(1, abs(crude))


def test_derivative_zero_176(f5, pair_176):
    z = derivative_zero_between(f5, pair_176)
    lo, hi = sorted(p.real for p in pair_176)
    assert lo < z.real < hi
    assert abs(z - (0.45 + 176.7j)) < 0.05
    assert abs(z.imag - pair_176[0].imag) < 0.05
    assert abs(derivative(f5)(z)) < 1e-8


def test_derivative_zero_85(f5, pair_85):
    z = derivative_zero_between(f5, pair_85)
    lo, hi = sorted(p.real for p in pair_85)
    assert lo < z.real < hi and abs(z.imag - pair_85[0].imag) < 0.05


def test_derivative_zero_degenerate_pair(f5):
    with pytest.raises(ValueError):
        derivative_zero_between(f5, (0.5 + 85j, 0.5 + 85j))


def test_derivative_zero_not_found(f5):
    with pytest.raises(NotFound):
        derivative_zero_between(f5, (4 + 5j, 5 + 5j))
