"""Form catalog: construction, matrices, splits, probes, JSON."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gealab import forms, hilbert
from gealab.errors import (
    DimensionMismatch,
    DomainViolation,
    ModelMismatch,
    NotClosed,
    OutsideCatalog,
    SymbolicOnly,
    UnboundedForm,
)
from gealab.forms import (
    DIRICHLET,
    FINITE_SUPPORT,
    FULL_SPACE,
    H1_GRID,
    DomainTag,
    bounded_matrix_form,
    diag_atom,
    diag_domain,
    diag_form,
    endpoint_form,
    energy_form,
    energy_with_endpoints,
    form_add,
    form_from_json,
    form_scale,
    form_to_json,
    hamel_form,
    make_form,
    matrix_at,
    zero_form,
)
from gealab.hilbert import GRID, SEQUENCE


# ------------------------------------------------------------------- tags


def test_tag_inclusion_order():
    dj = diag_domain("j")
    assert forms.tag_includes(FINITE_SUPPORT, dj)
    assert forms.tag_includes(dj, FULL_SPACE)
    assert forms.tag_includes(FINITE_SUPPORT, FULL_SPACE)
    assert not forms.tag_includes(dj, FINITE_SUPPORT)
    assert not forms.tag_includes(dj, diag_domain("j^2"))
    assert not forms.tag_includes(H1_GRID, dj)
    assert forms.tag_meet(dj, FULL_SPACE) == dj
    assert forms.tag_meet(FULL_SPACE, dj) == dj
    assert forms.tag_meet(diag_domain("j"), diag_domain("j^2")) is None


def test_tag_str_round_trip():
    for tag in (FULL_SPACE, H1_GRID, FINITE_SUPPORT, diag_domain("1/j")):
        assert forms.tag_from_str(forms.tag_to_str(tag)) == tag
    with pytest.raises(OutsideCatalog):
        forms.tag_from_str("sobolev")
    with pytest.raises(OutsideCatalog):
        forms.tag_from_str("diag_max")  # missing coefficient id
    with pytest.raises(OutsideCatalog):
        forms.tag_from_str("full:extra")


def test_lam_registry():
    assert forms.lam_value("j", 5) == 5
    assert forms.lam_value("j^2", 3) == 9
    assert forms.lam_value("1/j", 4) == Fraction(1, 4)
    assert forms.lam_value("const:1/2", 99) == Fraction(1, 2)
    assert forms.lam_sup("1/j") == 1
    assert forms.lam_sup("j") is None
    with pytest.raises(OutsideCatalog):
        forms.lam_value("log j", 2)
    with pytest.raises(OutsideCatalog):
        forms.lam_sup("exp")


# ----------------------------------------------------------- construction


def test_make_form_validation():
    with pytest.raises(ValueError):
        make_form(SEQUENCE, {diag_atom("1/j"): -1})
    with pytest.raises(ModelMismatch):
        make_form(SEQUENCE, {DIRICHLET: 1})
    with pytest.raises(ModelMismatch):
        make_form("banach", {DIRICHLET: 1})
    # the symbolic singular atom never combines with a numeric unbounded one
    with pytest.raises(OutsideCatalog):
        make_form(SEQUENCE, {forms.HAMEL: 1, diag_atom("j"): 1})
    # an unbounded numeric form cannot be declared on the full space
    with pytest.raises(OutsideCatalog):
        make_form(SEQUENCE, {diag_atom("j"): 1}, FULL_SPACE)
    with pytest.raises(OutsideCatalog):
        make_form(GRID, {DIRICHLET: 1}, FULL_SPACE)
    # explicit domain must sit inside every atom's natural domain
    with pytest.raises(OutsideCatalog):
        make_form(SEQUENCE, {diag_atom("j"): 1}, diag_domain("j^2"))


def test_make_form_zero_coefficients_dropped():
    t = make_form(SEQUENCE, {diag_atom("1/j"): 0})
    assert t.is_zero and t == zero_form(SEQUENCE)


def test_make_form_domains():
    assert diag_form("j").domain == diag_domain("j")
    assert diag_form("j", domain=FINITE_SUPPORT).domain == FINITE_SUPPORT
    assert diag_form("1/j").domain == FULL_SPACE
    assert diag_form("j", cut=4).domain == FULL_SPACE  # truncation is bounded
    assert energy_form(1).domain == H1_GRID
    # two unbounded diagonals have incomparable natural domains
    with pytest.raises(OutsideCatalog):
        make_form(SEQUENCE, {diag_atom("j"): 1, diag_atom("j^2"): 1})
    both = make_form(SEQUENCE, {diag_atom("j"): 1, diag_atom("j^2"): 1}, FINITE_SUPPORT)
    assert both.domain == FINITE_SUPPORT


def test_form_add_and_scale():
    t = form_add(diag_form("1/j"), diag_form("1/j"))
    assert t.coeff(diag_atom("1/j")) == 2
    assert form_add(t, zero_form(SEQUENCE)) == t
    assert form_add(zero_form(SEQUENCE), t) == t
    with pytest.raises(ModelMismatch):
        form_add(diag_form("1/j"), energy_form(1))
    with pytest.raises(OutsideCatalog):
        form_add(diag_form("j"), diag_form("j^2"))
    assert form_scale(t, Fraction(1, 2)) == diag_form("1/j")
    assert form_scale(t, 0) == zero_form(SEQUENCE)
    with pytest.raises(ValueError):
        form_scale(t, -1)
    # sums restrict to the smaller domain
    s = form_add(diag_form("j"), diag_form("j", domain=FINITE_SUPPORT))
    assert s.domain == FINITE_SUPPORT


def test_named_catalog_constructors():
    t1 = energy_with_endpoints(1, 1, 1)
    assert t1 == form_add(energy_form(1), endpoint_form(1, 1))
    assert forms.describe(t1)
    assert hamel_form().has_kind("hamel")
    names = [name for name, _ in forms.catalog_forms()]
    assert "diag(j)" in names and len(names) == len(set(names))
    assert all(t.model == GRID for _, t in forms.catalog_forms(GRID))
    sym = [t for _, t in forms.catalog_forms(include_symbolic=True) if t.has_kind("hamel")]
    assert sym and not [t for _, t in forms.catalog_forms() if t.has_kind("hamel")]


# ------------------------------------------------------- matrices, values


def test_matrix_values_diag():
    t = diag_form("j")
    for k in range(1, 6):
        e = np.zeros(8)
        e[k - 1] = 1.0
        assert forms.quadratic(t, e) == pytest.approx(k)
    cut = diag_form("j", cut=3)
    e5 = np.zeros(8)
    e5[4] = 1.0
    assert forms.quadratic(cut, e5) == 0.0


def test_matrix_values_grid():
    xs = hilbert.grid_nodes(9)
    assert forms.quadratic(energy_form(1), xs) == pytest.approx(1.0)
    assert forms.quadratic(endpoint_form(2, 3), np.ones(11)) == pytest.approx(5.0)
    # endpoint atoms only see the boundary nodes
    interior = np.ones(11)
    interior[0] = interior[-1] = 0.0
    assert forms.quadratic(endpoint_form(1, 1), interior) == 0.0


def test_matrix_additivity_and_cache():
    t, s = energy_form(Fraction(1, 2)), endpoint_form(1, 2)
    lhs = matrix_at(form_add(t, s), 9)
    assert np.allclose(lhs, matrix_at(t, 9) + matrix_at(s, 9), atol=1e-14)
    assert not lhs.flags.writeable
    assert matrix_at(t, 9) is matrix_at(t, 9)  # cached
    with pytest.raises(SymbolicOnly):
        matrix_at(hamel_form(), 8)


def test_evaluate_checks():
    t = diag_form("1/j")
    with pytest.raises(DimensionMismatch):
        forms.evaluate(t, np.ones(4), np.ones(5))
    budget = DomainTag("finite_support", budget=2)
    r = diag_form("j", domain=budget)
    ok = np.zeros(8)
    ok[0] = ok[3] = 1.0
    forms.quadratic(r, ok)  # support 2 is inside the budget
    with pytest.raises(DomainViolation):
        forms.quadratic(r, np.ones(8))


def test_evaluate_sesquilinear():
    rng = np.random.default_rng(5)
    t = bounded_matrix_form("seeded:3")
    x = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    y = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    v = forms.evaluate(t, x, y)
    assert forms.evaluate(t, 2j * x, y) == pytest.approx(2j * v)
    assert forms.evaluate(t, x, 2j * y) == pytest.approx(-2j * v)
    assert forms.evaluate(t, y, x) == pytest.approx(np.conj(v))


def test_numerical_range_bounds():
    lo, hi = forms.numerical_range_bounds(bounded_matrix_form("id"), 8)
    assert lo == pytest.approx(1.0) and hi == pytest.approx(1.0)
    # unit-norm generators stay in [0, 1] relative to the grid inner product
    lo, hi = forms.numerical_range_bounds(bounded_matrix_form("id", model=GRID), 9)
    assert lo == pytest.approx(1.0) and hi == pytest.approx(1.0)
    lo, hi = forms.numerical_range_bounds(diag_form("1/j"), 8)
    assert lo == pytest.approx(1 / 8) and hi == pytest.approx(1.0)


def test_classify_boundedness():
    assert forms.classify_boundedness(diag_form("1/j")) is True
    assert forms.classify_boundedness(diag_form("j", cut=4)) is True
    assert forms.classify_boundedness(diag_form("j")) is False
    assert forms.classify_boundedness(energy_form(1)) is False
    assert forms.classify_boundedness(endpoint_form(1, 1)) is False
    assert forms.classify_boundedness(hamel_form()) is False  # by declaration
    assert forms.classify_boundedness(zero_form(SEQUENCE)) is True


def test_catalog_classification_consistent():
    for _, t in forms.catalog_forms():
        forms.classify_boundedness(t)  # raises on any declared/probe mismatch


# --------------------------------------------------- regular/singular split


def test_reg_sing_split_grid():
    t_prime, t_0 = energy_form(1), endpoint_form(1, 1)
    t_1 = form_add(t_prime, t_0)
    # positive energy coefficient makes the whole form regular
    assert forms.reg_sing_split(t_1) == (t_1, zero_form(GRID))
    assert forms.reg_sing_split(t_0) == (zero_form(GRID), t_0)
    mixed = form_add(bounded_matrix_form("id", model=GRID), t_0)
    r, s = forms.reg_sing_split(mixed)
    assert r == bounded_matrix_form("id", model=GRID) and s == t_0
    lhs = matrix_at(mixed, 9)
    assert np.array_equal(lhs, matrix_at(r, 9) + matrix_at(s, 9))


def test_reg_sing_split_sequence():
    t = form_add(hamel_form(), diag_form("1/j"))
    r, s = forms.reg_sing_split(t)
    assert r == diag_form("1/j") and s == hamel_form()
    assert forms.is_regular(diag_form("j")) and not forms.is_singular(diag_form("j"))
    assert forms.is_singular(endpoint_form(1, 1))
    z = zero_form(SEQUENCE)
    assert forms.is_regular(z) and forms.is_singular(z)


def test_reg_sing_split_keeps_restricted_domain():
    t = diag_form("j", domain=FINITE_SUPPORT)
    r, s = forms.reg_sing_split(t)
    assert r.domain == FINITE_SUPPORT and s.is_zero


# ----------------------------------------------------------- closedness


def test_is_closed_rules():
    assert forms.is_closed(diag_form("1/j"))
    assert forms.is_closed(diag_form("j"))
    assert not forms.is_closed(diag_form("j", domain=FINITE_SUPPORT))
    assert not forms.is_closed(diag_form("1/j", domain=FINITE_SUPPORT))
    assert forms.is_closed(energy_form(1))
    assert forms.is_closed(energy_with_endpoints(1, 1, 1))
    assert not forms.is_closed(endpoint_form(1, 1))
    assert not forms.is_closed(hamel_form())
    assert forms.is_closed(zero_form(SEQUENCE))


# ----------------------------------------------------- singularity probe


def test_singularity_witness_endpoint_form():
    t_0 = endpoint_form(1, 1)
    for _, x in hilbert.smooth_grid_samples(9):
        y = forms.singularity_witness(t_0, x)
        assert y is not None
        assert forms.quadratic(t_0, y) < abs(hilbert.inner(GRID, x, y)) ** 2


def test_singularity_witness_none_for_closed():
    # unit reference: a scaled-up x inflates |(x, y)|^2 and buys a spurious
    # witness even against a closed form
    xs = hilbert.grid_nodes(9) + 1.0
    x = xs / hilbert.norm(GRID, xs)
    assert forms.singularity_witness(energy_with_endpoints(1, 1, 1), x) is None
    e2 = np.zeros(8)
    e2[1] = 1.0
    assert forms.singularity_witness(diag_form("j"), e2) is None


def test_singularity_witness_zero_reference():
    with pytest.raises(ValueError):
        forms.singularity_witness(endpoint_form(1, 1), np.zeros(11))


# ---------------------------------------------------- operators of forms


def test_riesz_operator_of_bounded():
    for t in (diag_form("1/j"), bounded_matrix_form("seeded:2"), bounded_matrix_form("id", model=GRID)):
        level = 8 if t.model == SEQUENCE else 9
        a = forms.riesz_operator_of_bounded(t, level)
        sampler = hilbert.VectorSampler(t.model, level, seed=99)
        for _ in range(3):
            x, y = sampler.draw(), sampler.draw()
            assert forms.evaluate(t, x, y) == pytest.approx(
                hilbert.inner(t.model, a @ x, y), rel=1e-10, abs=1e-10
            )
    with pytest.raises(UnboundedForm):
        forms.riesz_operator_of_bounded(diag_form("j"), 8)


def test_extend_bounded():
    t = diag_form("1/j", domain=FINITE_SUPPORT)
    ext = forms.extend_bounded(t)
    assert ext.domain == FULL_SPACE and ext.atoms == t.atoms
    assert forms.extend_bounded(ext) == ext
    with pytest.raises(UnboundedForm):
        forms.extend_bounded(energy_form(1))


def test_associated_operator():
    a = forms.associated_operator(diag_form("j"), 6)
    assert np.allclose(a, np.diag(np.arange(1.0, 7.0)))
    k = forms.associated_operator(energy_form(1), 9)
    xs = hilbert.grid_nodes(9)
    # generator identity: t(x, y) = (A x, y) in the model inner product
    assert forms.evaluate(energy_form(1), xs, xs) == pytest.approx(
        hilbert.inner(GRID, k @ xs, xs), rel=1e-12
    )
    with pytest.raises(NotClosed):
        forms.associated_operator(endpoint_form(1, 1), 9)
    with pytest.raises(NotClosed):
        forms.associated_operator(diag_form("j", domain=FINITE_SUPPORT), 6)


def test_operator_catalog():
    op = forms.make_operator(SEQUENCE, {diag_atom("1/j"): 1})
    t = forms.form_of_operator(op)
    assert t == diag_form("1/j")
    assert np.allclose(forms.operator_matrix_at(op, 4), np.diag([1, 1 / 2, 1 / 3, 1 / 4]))
    with pytest.raises(OutsideCatalog):
        forms.make_operator(GRID, {DIRICHLET: 1})


# ------------------------------------------------------------------ JSON


def test_json_round_trip_catalog():
    for model in (None, SEQUENCE, GRID):
        for _, t in forms.catalog_forms(model, include_symbolic=True):
            text = form_to_json(t)
            back = form_from_json(text)
            assert back == t
            assert form_to_json(back) == text  # canonical, so bit-exact


def test_json_fields():
    import json

    data = json.loads(form_to_json(diag_form("j", cut=4, coeff=Fraction(3, 2))))
    (entry,) = data["atoms"]
    assert entry["lambda"] == "j" and entry["cut"] == 4 and entry["coeff"] == "3/2"
    assert entry["sup"] == "4"  # largest value below the cut
    data = json.loads(form_to_json(diag_form("j")))
    assert data["atoms"][0]["sup"] == "inf"
    data = json.loads(form_to_json(endpoint_form(1, 2)))
    (entry,) = data["atoms"]
    assert entry == {"kind": "boundary", "alpha": "1", "beta": "2"}


def test_json_malformed():
    with pytest.raises(OutsideCatalog):
        forms.form_from_dict({"domain": "full", "atoms": []})
    with pytest.raises(OutsideCatalog):
        forms.form_from_dict({"model": SEQUENCE, "domain": "full", "atoms": [{"kind": "mystery"}]})
    with pytest.raises(OutsideCatalog):
        form_from_json('{"model": "sequence", "domain": "full", "atoms": [{"kind": "diag", "lambda": "log"}]}')


# ------------------------------------------------------------- properties


@settings(max_examples=30, deadline=None)
@given(
    c1=st.fractions(min_value=0, max_value=4),
    c2=st.fractions(min_value=0, max_value=4),
)
def test_scale_distributes_over_add(c1, c2):
    t = diag_form("1/j", coeff=c1) if c1 else zero_form(SEQUENCE)
    s = bounded_matrix_form("id", coeff=c2) if c2 else zero_form(SEQUENCE)
    assert form_scale(form_add(t, s), 2) == form_add(form_scale(t, 2), form_scale(s, 2))


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_quadratic_nonnegative(seed):
    sampler = hilbert.VectorSampler(SEQUENCE, 8, seed=seed)
    x = sampler.draw()
    for t in (diag_form("1/j"), bounded_matrix_form("seeded:4"), diag_form("j", cut=5)):
        assert forms.quadratic(t, x) >= -1e-12
