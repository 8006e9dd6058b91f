import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lorenz_renorm import MINUS, PLUS, BranchRep, LorenzMap, SchemaError, Triviality
from lorenz_renorm import is_nontrivial, real_bounds_report, standard_family
from lorenz_renorm.errors import DomainError, FitError
from lorenz_renorm.maps import eval_branch, fit_branch, fit_function, lobatto_nodes

params = st.tuples(st.floats(0.55, 0.99), st.floats(0.01, 0.45),
                   st.floats(0.3, 0.7), st.floats(1.2, 4.0))


def closed_form(u, v, c, alpha, x):
    x = np.asarray(x, float)
    left = u * (1 - ((c - np.minimum(x, c)) / c) ** alpha)
    right = v + (1 - v) * ((np.maximum(x, c) - c) / (1 - c)) ** alpha
    return np.where(x < c, left, right)


def test_standard_family_values():
    f = standard_family(0.75, 0.25, 0.5, 2.0)
    assert f.crit_value_minus == pytest.approx(0.75, abs=1e-15)
    assert f.crit_value_plus == pytest.approx(0.25, abs=1e-15)
    assert is_nontrivial(f) == Triviality.NONTRIVIAL
    g = standard_family(0.85, 0.15, 0.5, 2.0)
    assert float(g(0.25)) == pytest.approx(0.6375, abs=1e-14)


def test_boundary_case_is_weakly_nontrivial():
    f = standard_family(0.5, 0.5, 0.5, 2.0)
    assert is_nontrivial(f) == Triviality.WEAKLY_NONTRIVIAL
    assert is_nontrivial(standard_family(0.3, 0.7, 0.5, 2.0)) == Triviality.TRIVIAL


@pytest.mark.parametrize("bad", [(0.0, 0.2, 0.5, 2), (0.8, 1.0, 0.5, 2), (0.8, 0.2, 1.0, 2),
                                 (0.8, 0.2, 0.5, 1.0)])
def test_standard_family_rejects(bad):
    with pytest.raises(DomainError):
        standard_family(*bad)


@given(params)
def test_matches_closed_form(p):
    f = standard_family(*p)
    x = np.linspace(0, 1, 257)
    x = x[x != f.c]
    assert np.max(np.abs(f(x) - closed_form(*p, x))) < 1e-12
    assert abs(float(f(0.0))) < 1e-12 and abs(float(f(1.0)) - 1) < 1e-12


@given(params, st.floats(0.05, 0.95), st.floats(0.01, 1.0))
def test_conjugate_symmetry(p, re, im):
    f = standard_family(*p)
    z = complex(re, im)
    for side in (MINUS, PLUS):
        a = complex(eval_branch(f, side, z))
        b = complex(eval_branch(f, side, np.conj(z)))
        assert abs(a - np.conj(b)) <= 1e-14 * max(1.0, abs(a))


def test_eval_branch_rejects_cut():
    f = standard_family(0.8, 0.2, 0.5, 2.0)
    with pytest.raises(DomainError):
        eval_branch(f, MINUS, 0.7 + 0j)
    with pytest.raises(DomainError):
        eval_branch(f, PLUS, 0.2 + 0j)


def test_vanishing_derivative_at_c():
    # the left slope is 2u(c - x)/c^2, which is below 1e-4 only once c - x < 1.6e-5
    u, c = 0.8, 0.5
    f = standard_family(u, 0.2, c, 2.0)
    eps = 1e-9
    for h in (1e-3, 1e-4, 1e-5, 1e-6):
        x = c - h
        slope = (float(f(x)) - float(f(x - eps))) / eps
        assert slope == pytest.approx(2 * u * (h + eps / 2) / c ** 2, rel=1e-4, abs=1e-6)
        if h <= 1e-5:
            assert slope < 1e-4


def test_power_law_ratio_stable():
    f = standard_family(0.8, 0.2, 0.4, 2.5)
    hs = 2.0 ** -np.arange(8, 14)
    r = np.abs(f(f.c + hs) - f.crit_value_plus) / hs ** f.alpha
    assert np.ptp(r) / r.mean() < 0.01


@given(params)
def test_monotone_on_branches(p):
    f = standard_family(*p)
    x = np.linspace(0, f.c, 400, endpoint=False)
    assert np.all(np.diff(f(x)) > 0)
    x = np.linspace(f.c, 1, 400)[1:]
    assert np.all(np.diff(f(x)) > 0)


def test_real_bounds():
    rb = real_bounds_report(standard_family(0.75, 0.25, 0.5, 2.0))
    assert rb.delta_value == 0.5 and rb.Delta_value == 0.0
    assert real_bounds_report(standard_family(0.75, 0.25, 0.3, 2.0)).delta_value == 0.3


def test_delta_refinement_oracle():
    # eta_-(t) = s + 0.1 s^2 reversed onto [0, T], scaled so eta_-(T) = 0
    c, alpha = 0.5, 2.0
    T = c ** alpha
    g = lambda t: (T - t) + 0.1 * (T - t) ** 2
    em = fit_function(lambda t: 0.8 * g(t) / g(0), T, 6)
    f = LorenzMap(alpha, c, em, standard_family(0.8, 0.2, c, alpha).eta_plus)
    coarse = real_bounds_report(f).Delta_value
    fine = real_bounds_report(f, n=20480).Delta_value
    assert abs(coarse - fine) < 1e-6
    # exact value: max of 0.2 / (1 + 0.2 s) over s in [0, T]
    assert fine == pytest.approx(0.2, abs=1e-9)


def test_fit_identity_and_affine():
    t = lobatto_nodes(4, 1.0)
    rep = fit_branch(np.column_stack([t, t]), 1.0, 3)
    assert np.allclose(rep.coeffs[:2], [0.5, 0.5], atol=1e-14)
    u, c, a = 0.8, 0.4, 2.0
    T = c ** a
    t = lobatto_nodes(6, T)
    rep = fit_branch(np.column_stack([t, u - (u / T) * t]), T, 1)
    assert np.allclose(rep.coeffs, [u / 2, -u / 2], atol=1e-14)


def test_fit_exp():
    rep = fit_function(np.exp, 1.0, 20, tol=1e-12)
    x = np.linspace(0, 1, 1001)
    assert np.max(np.abs(rep(x) - np.exp(x))) < 1e-12


def test_fit_error_carries_residual():
    with pytest.raises(FitError) as info:
        fit_function(lambda t: np.abs(t - 0.5), 1.0, 4, check=False)
    assert info.value.residual > 1e-3


def test_branch_rejects_non_univalent():
    with pytest.raises(DomainError):
        BranchRep((0.0, 0.0, 1.0), 1.0)


@given(params)
@settings(max_examples=25)
def test_json_round_trip(p):
    f = standard_family(*p)
    g = LorenzMap.from_json(f.to_json())
    assert g == f
    assert g.to_json() == f.to_json()


def test_json_schema_errors():
    with pytest.raises(SchemaError, match="line 2"):
        LorenzMap.from_json('{\n  "alpha": 2,,\n}')
    with pytest.raises(SchemaError):
        LorenzMap.from_json("[1, 2]")
    d = json.loads(standard_family(0.8, 0.2, 0.5, 2.0).to_json())
    del d["eta_minus"]
    with pytest.raises(SchemaError):
        LorenzMap.from_json(json.dumps(d))


def test_inverse_branch_real():
    f = standard_family(0.8, 0.2, 0.5, 2.0)
    x = np.linspace(0.55, 0.95, 9)
    assert np.allclose(f.inverse_branch_real(PLUS, f(x)), x, atol=1e-12)
