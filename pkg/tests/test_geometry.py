import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from lorenz_renorm.errors import DomainError
from lorenz_renorm.geometry import (Dt_boundary, F_map, Flower, Region, TRecursionError,
                                    angle_margin, compose_t_sequence, diam_Dt, flower_diameter_check,
                                    in_Dt, modulus_lower_bound, principal_root,
                                    product_lower_bound, root_inclusion_check, sigma_max,
                                    svg_document, tilde_t, view_angle, view_parameter)

intervals = st.tuples(st.floats(-2, 2), st.floats(0.01, 3)).map(lambda p: (p[0], p[0] + p[1]))
ts = st.floats(0.05, 5.0)


def test_diameter_circle():
    J = (-1.0, 1.0)
    assert in_Dt(J, 1.0, 1j)
    assert view_angle(J, 1j) == np.pi / 2
    assert not in_Dt(J, 1.0, 2j)
    assert all(in_Dt(J, t, 0.3 + 0j) for t in (0.01, 1.0, 100.0))
    assert not in_Dt(J, 0.01, 1.5 + 0j)


def test_in_Dt_rejects_nonpositive_t():
    with pytest.raises(DomainError):
        in_Dt((0, 1), 0.0, 1j)


@given(intervals, ts)
def test_boundary_on_boundary(J, t):
    z = Dt_boundary(J, t, 257)
    z = z[z.imag != 0]
    assert np.max(np.abs(view_parameter(J, z) - t)) < 1e-9 * max(1, t)


@given(intervals, ts)
def test_boundary_is_conjugate_symmetric(J, t):
    z = Dt_boundary(J, t, 129)
    assert np.allclose(z, np.conj(z[::-1]), atol=1e-14 * (1 + abs(J[0]) + abs(J[1])))


@given(intervals, ts)
def test_diameter_formula(J, t):
    z = Dt_boundary(J, t, 4001)
    measured = np.max(np.abs(z[:, None] - z[None, ::7]))
    assert measured <= diam_Dt(J, t) * (1 + 1e-9)
    assert measured >= diam_Dt(J, t) * (1 - 1e-3)


@given(intervals, st.floats(0.05, 5), st.floats(0.05, 5))
def test_monotone_in_t(J, s, t):
    assume(s < t)
    z = Dt_boundary(J, t, 101)
    z = z[z.imag != 0]
    assert np.all(in_Dt(J, s, z, tol=1e-12))


def test_sigma_max():
    assert sigma_max(2.0) == 1.0
    assert sigma_max(3.0) == pytest.approx(1 / np.tan(np.pi / 6))
    vals = [sigma_max(a) for a in (1.5, 2, 4, 8, 64)]
    assert np.all(np.diff(vals) > 0)
    with pytest.raises(DomainError):
        sigma_max(1.0)


def test_tilde_t_values():
    assert tilde_t(0.5, 0.25) == pytest.approx(0.1875 / 0.53125, abs=1e-15)
    assert tilde_t(0.7, 0.0) == 0.7
    assert tilde_t(0.3 + 1e-9, 0.3) < 1e-8
    with pytest.raises(DomainError):
        tilde_t(0.3, 0.3)
    with pytest.raises(DomainError):
        tilde_t(2.0, 1.0)


@given(st.floats(0.01, 0.98), st.floats(0.0, 0.9), st.floats(1e-4, 0.01))
def test_tilde_t_monotone(t, frac, h):
    a = frac * t
    assert tilde_t(t + h, a) > tilde_t(t, a)
    if a + h < t:
        assert tilde_t(t, a + h) < tilde_t(t, a)


def test_F_map_facts():
    a, t = 0.3, 0.6
    assert F_map(a, a) == pytest.approx(a)
    assert F_map(a, -a) == pytest.approx(-a)
    assert F_map(a, 1j * a / t).real == 0
    z = 0.1 + 0.2j
    assert F_map(a, np.conj(z)) == pytest.approx(np.conj(F_map(a, z)))
    with pytest.raises(DomainError):
        F_map(a, 1j)


@given(st.floats(0.05, 0.95), st.floats(0.05, 0.95))
@settings(max_examples=50)
def test_F_image_inside_tilde_domain(t, frac):
    a = frac * t
    J = (-a, a)
    z = Dt_boundary(J, t, 513)
    z = z[z.imag != 0]
    assert np.min(angle_margin(J, tilde_t(t, a), F_map(a, z))) >= -1e-9


@given(intervals, ts, st.floats(0.1, 10), st.floats(-3, 3))
@settings(max_examples=50)
def test_schwarz_invariance_under_mobius(J, t, lam, shift):
    # z -> lam * z (lam > 0) composed with the real translation fixes the
    # slit plane C minus (R minus J') for J' the image interval; the
    # hyperbolic neighbourhoods are equivariant
    a, b = J
    g = lambda z: lam * z + shift
    z = Dt_boundary(J, t, 257)
    z = z[z.imag != 0]
    Jg = (g(a), g(b))
    assert np.max(np.abs(view_parameter(Jg, g(z)) - t)) < 1e-8 * max(1, t)


@given(st.floats(0.05, 0.9), st.floats(0.1, 3))
@settings(max_examples=50)
def test_schwarz_for_interval_self_map(s, t):
    # phi(z) = z / (1 + s z) maps the upper half-plane into itself, fixes 0,
    # and maps J = (0, 1) onto (0, 1 / (1 + s)) inside J, hence C(J) into C(J)
    J = (0.0, 1.0)
    z = Dt_boundary(J, t, 257)
    z = z[z.imag != 0]
    w = z / (1 + s * z)
    assert np.all(in_Dt(J, t, w, tol=1e-9))


def test_compose_t_sequence():
    assert compose_t_sequence(0.4, [0.0] * 5) == pytest.approx([0.4] * 6, abs=1e-15)
    ts_ = compose_t_sequence(0.5, [0.5])
    assert ts_[1] == pytest.approx(0.35294117647058826, abs=1e-15)
    with pytest.raises(TRecursionError) as info:
        compose_t_sequence(0.1, [0.01, 0.5])
    assert info.value.index == 1
    with pytest.raises(DomainError):
        compose_t_sequence(1.0, [0.1])


@given(st.floats(0.5, 0.99), st.lists(st.floats(0.0, 0.002), min_size=1, max_size=50))
def test_product_bound_in_small_regime(t1, lengths):
    # with |I| <= 0.002 each step needs t >= 1 / sqrt(h^-0.5 - 1) ~ 0.15
    ts_ = compose_t_sequence(t1, lengths)
    assert ts_[-1] >= product_lower_bound(t1, lengths, 0.5) - 1e-12


def test_root_inclusion_stated_example():
    rep = root_inclusion_check(0.5, 0.5, 0.25, 2.0)
    assert rep.ok and rep.tilde_t > 0 and rep.margin > 0
    rep0 = root_inclusion_check(0.5, 0.5, 0.0, 2.0)
    assert rep0.ok and rep0.tilde_t > 0


def test_principal_root_real_segment():
    x = np.linspace(0.01, 0.99, 50)
    w = principal_root(2.0)(x)
    assert np.allclose(w, np.sqrt(x)) and np.all((w.real > 0) & (w.real < 1))


def test_flower_membership_and_bounds():
    F = Flower(0.0, 0.25, 0.75, 1.0, 0.5, 0.9)
    assert F.contains(0.5 + 0.1j)
    assert not F.contains(0.5 + 5j)
    fb = F.bounds()
    assert fb.K == pytest.approx(0.25)
    assert F.is_K_bounded(0.25) and not F.is_K_bounded(0.26)
    G = Flower(0.0, 0.1, 0.7, 1.0, 0.5, 0.9)
    assert G.bounds(0.0).K1 == pytest.approx(0.1) and G.bounds(0.0).K2 == pytest.approx(0.3)
    assert G.bounds(1.0).K1 == pytest.approx(0.3)
    assert G.is_K1K2_bounded(0.1, 0.3, 0.0)
    with pytest.raises(DomainError):
        G.bounds(0.5)
    with pytest.raises(DomainError):
        Flower(0.0, 0.6, 0.5, 1.0, 0.5, 0.9)


def test_flower_diameter_check():
    F = Flower(0.0, 0.2, 0.8, 1.0, 0.3, 0.9)
    t_hat, ratio = flower_diameter_check(F, (-0.5, 1.5))
    assert t_hat > 0 and ratio >= 2.0
    # every sampled flower point outside D_sigma(I) lies in D_t_hat(J)
    pts = F.boundary(512)
    pts = pts[(pts.imag != 0) & ~in_Dt((0, 1), 0.9, pts)]
    assert np.all(in_Dt((-0.5, 1.5), t_hat, pts, tol=1e-12))


def test_modulus_examples():
    inner = np.exp(1j * np.linspace(0, 2 * np.pi, 400, endpoint=False))
    mb = modulus_lower_bound(inner, Region.from_disk(0, np.exp(2 * np.pi)))
    assert mb.value >= 1 - 1e-9
    seg = np.linspace(-1, 1, 101) + 0j
    mb = modulus_lower_bound(seg, Region.from_disk(0, 4.0))
    assert mb.value >= np.log(4) / (2 * np.pi) - 1e-9
    touching = np.array([0.0, 1.0 + 0j])
    assert modulus_lower_bound(touching, Region.from_disk(0, 1.0)).value == 0.0
    with pytest.raises(DomainError):
        modulus_lower_bound(np.array([2.0 + 0j]), Region.from_disk(0, 1.0))


def test_region_polygon_and_slits():
    sq = Region.from_polygon([-1 - 1j, 1 - 1j, 1 + 1j, -1 + 1j], slits=[(0.0, 1.0)])
    assert sq.contains(0.5j) and not sq.contains(0.5 + 0j) and not sq.contains(2 + 0j)
    assert sq.boundary_distance(np.array([0.5 + 0.1j]))[0] == pytest.approx(0.1)
    assert sq.diameter() == pytest.approx(2 * np.sqrt(2))


def test_svg_document():
    svg = svg_document([(Dt_boundary((-1, 1), 1.0, 64), "black")])
    assert "<svg" in svg and svg.rstrip().endswith("</svg>") and "polyline" in svg
