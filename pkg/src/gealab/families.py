"""Partial-sum algebras of positive forms and their operator mirrors.

The base algebra carries every catalog form whose declared data is
admissible (a bounded form must live on the full space); its partial sum
is defined when an operand is bounded or the domain tags coincide.  The
bar variant additionally requires the regular parts to add.  Subfamilies
(bounded, regular, singular, operator-generated, closed, fixed-domain)
restrict the sum to members.  Operator algebras mirror the generated
forms atom for atom, so the correspondence checks are exact.

Family ids (also the CLI strings): vf, vf-bar, bf, rf, sf, gf, cf,
vfd:<tag>, plus the operator models vh and sa.
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from . import forms
from .errors import (
    ModelMismatch,
    NegativeCoefficient,
    NotInFamily,
    NotInGf,
    NotSelfAdjointCatalog,
    SymbolicOnly,
    VerificationFailed,
)
from .forms import (
    FINITE_SUPPORT,
    FULL_SPACE,
    H1_GRID,
    BOUNDARY0,
    BOUNDARY1,
    DIRICHLET,
    FormSpec,
    OperatorSpec,
    bounded_mat_atom,
    diag_atom,
    endpoint_form,
    energy_form,
    form_add,
    form_of_operator,
    make_form,
    make_operator,
    matrix_at,
    reg_sing_split,
    tag_from_str,
    tag_includes,
    zero_form,
)
from .hilbert import DEFAULT_LEVELS, GRID, SEQUENCE
from .kernel import PartialAlgebra

FAMILY_IDS = ("vf", "vf-bar", "bf", "rf", "sf", "gf", "cf", "vfd", "vh", "sa")

_GF_KINDS = {"diag", "bounded_mat"}


def _base(family: str) -> str:
    return family.split(":", 1)[0]


def _vfd_tag(family: str):
    base, _, tag = family.partition(":")
    if base != "vfd" or not tag:
        raise ValueError(f"fixed-domain family needs a tag, got {family!r}")
    return tag_from_str(tag)


def in_vf(t: FormSpec) -> bool:
    """Carrier rule: a bounded form is admitted only on the full space."""
    return not forms.is_bounded(t) or t.domain == FULL_SPACE


def in_family(t: FormSpec, family: str) -> bool:
    base = _base(family)
    if base not in FAMILY_IDS:
        raise ValueError(f"unknown family {family!r}")
    if not in_vf(t):
        return False
    if base in ("vf", "vf-bar"):
        return True
    if base == "bf":
        return forms.is_bounded(t)
    if base == "rf":
        return forms.is_regular(t)
    if base == "sf":
        return forms.is_singular(t)
    if base == "gf":
        return all(a.kind in _GF_KINDS for a, _ in t.atoms)
    if base == "cf":
        return forms.is_closed(t)
    if base == "vfd":
        return forms.is_bounded(t) or t.domain == _vfd_tag(family)
    raise ValueError(f"family {family!r} does not carry forms")


# ------------------------------------------------------------ partial sums


def oplus(t: FormSpec, s: FormSpec) -> FormSpec | None:
    """Partial sum: defined iff an operand is bounded or the tags agree."""
    if t.model != s.model:
        raise ModelMismatch("operands live on different models")
    if forms.is_bounded(t) or forms.is_bounded(s) or t.domain == s.domain:
        if forms.tag_meet(t.domain, s.domain) is None:
            return None
        return form_add(t, s)
    return None


def _reg_atoms(t: FormSpec) -> dict:
    return reg_sing_split(t)[0].atoms_dict()


def oplus_bar(t: FormSpec, s: FormSpec) -> FormSpec | None:
    """Restriction of the sum to pairs whose regular parts add.

    The comparison is exact on atom multisets; domains of the regular
    parts need no separate check because a regular part inherits its
    form's domain.
    """
    u = oplus(t, s)
    if u is None:
        return None
    merged = _reg_atoms(t)
    for atom, c in _reg_atoms(s).items():
        merged[atom] = merged.get(atom, Fraction(0)) + c
    return u if merged == _reg_atoms(u) else None


def oplus_family(family: str, t: FormSpec, s: FormSpec) -> FormSpec | None:
    """Family-restricted sum: base sum defined and the result a member."""
    for operand in (t, s):
        if not in_family(operand, family):
            raise NotInFamily(f"{forms.describe(operand)} is not in {family}")
    u = oplus_bar(t, s) if _base(family) == "vf-bar" else oplus(t, s)
    if u is None or not in_family(u, family):
        return None
    return u


def ominus_forms(s: FormSpec, t: FormSpec, strict: bool = False) -> FormSpec | None:
    """Atom-wise exact difference r with oplus(t, r) = s, else None.

    ``strict=True`` raises NegativeCoefficient instead of returning None
    when some coefficient of t exceeds its counterpart in s.
    """
    if t.model != s.model:
        raise ModelMismatch("operands live on different models")
    diff = s.atoms_dict()
    for atom, c in t.atoms:
        r = diff.get(atom, Fraction(0)) - c
        if r < 0:
            if strict:
                raise NegativeCoefficient(f"{atom} exceeds its coefficient in the minuend")
            return None
        if r == 0:
            diff.pop(atom, None)
        else:
            diff[atom] = r
    if not diff:
        out = zero_form(t.model)
    else:
        unbounded = any(not forms.atom_is_bounded(a) for a in diff)
        out = make_form(t.model, diff, s.domain if unbounded else None)
    if oplus(t, out) != s:
        if strict:
            raise VerificationFailed("difference does not add back to the minuend")
        return None
    return out


# ------------------------------------------------------------------ orders


def _psd(mat: np.ndarray, tol: float) -> bool:
    vals = np.linalg.eigvalsh(mat)
    return float(vals[0]) >= -tol * max(1.0, abs(float(vals[-1])))


def preceq(t: FormSpec, s: FormSpec, levels=None, tol: float = forms.PSD_TOL) -> bool:
    """Pointwise order: D(t) contains D(s) and t <= s on it (PSD check)."""
    if t.model != s.model:
        raise ModelMismatch("operands live on different models")
    if t.has_kind("hamel") or s.has_kind("hamel"):
        raise SymbolicOnly("the symbolic singular form has no numerical order")
    if not tag_includes(s.domain, t.domain):
        return False
    if levels is None:
        levels = DEFAULT_LEVELS[t.model]
    return all(_psd(matrix_at(s, L) - matrix_at(t, L), tol) for L in levels)


def le_oplus(t: FormSpec, s: FormSpec, levels=None, tol: float = forms.PSD_TOL) -> bool:
    """Derived order of the plain sum, decided by its characterization:
    t <= s iff t precedes s pointwise and D(t) is full or equals D(s)."""
    if not (t.domain == FULL_SPACE or t.domain == s.domain):
        return False
    return preceq(t, s, levels, tol)


def le_bar(t: FormSpec, s: FormSpec) -> bool:
    """Derived order of the bar sum via the unique atom-wise witness."""
    r = ominus_forms(s, t)
    return r is not None and oplus_bar(t, r) == s


def le_family(family: str, t: FormSpec, s: FormSpec) -> bool:
    """Derived order inside a family: the unique difference witness must
    exist, belong to the family, and add back under the family sum."""
    if not (in_family(t, family) and in_family(s, family)):
        return False
    r = ominus_forms(s, t)
    if r is None or not in_family(r, family):
        return False
    return oplus_family(family, t, r) == s


# -------------------------------------------------------------- operators


def operator_zero(model: str) -> OperatorSpec:
    return OperatorSpec(model, FULL_SPACE, ())


def in_vh(op: OperatorSpec) -> bool:
    return in_vf(form_of_operator(op))


def in_sa(op: OperatorSpec) -> bool:
    return forms.is_closed(form_of_operator(op))


def oplus_d(a: OperatorSpec, b: OperatorSpec) -> OperatorSpec | None:
    """Operator sum: defined iff an operand is bounded or domains agree,
    mirrored through the generated forms."""
    u = oplus(form_of_operator(a), form_of_operator(b))
    return None if u is None else OperatorSpec(u.model, u.domain, u.atoms)


def sa_form_sum(a: OperatorSpec, b: OperatorSpec) -> OperatorSpec | None:
    """Sum of self-adjoint catalog operators through their closed forms."""
    for op in (a, b):
        if not in_sa(op):
            raise NotSelfAdjointCatalog(f"{op!r} does not generate a closed form")
    u = oplus(form_of_operator(a), form_of_operator(b))
    if u is None or not forms.is_closed(u):
        return None
    return OperatorSpec(u.model, u.domain, u.atoms)


def generator_of_form(t: FormSpec) -> OperatorSpec:
    """Inverse of form_of_operator on the operator-generated family."""
    if not in_family(t, "gf"):
        raise NotInGf(f"{forms.describe(t)} is not operator generated")
    return make_operator(t.model, t.atoms_dict(), t.domain)


def verify_operator_correspondence(samples: int = 100, seed: int = 0, model: str = SEQUENCE) -> dict:
    """Sampled check that form_of_operator is a partial-algebra isomorphism:
    definedness and values of the two sums agree through the map."""
    rng = random.Random(seed)
    checked = mismatches = 0
    while checked < samples:
        a = sample_operator(model, rng, closed_only=False)
        b = sample_operator(model, rng, closed_only=False)
        checked += 1
        op_sum = oplus_d(a, b)
        fm_sum = oplus(form_of_operator(a), form_of_operator(b))
        if (op_sum is None) != (fm_sum is None):
            mismatches += 1
        elif op_sum is not None and form_of_operator(op_sum) != fm_sum:
            mismatches += 1
    return {"model": model, "checked": checked, "mismatches": mismatches, "ok": mismatches == 0}


# ------------------------------------------------------------- the algebras


class FormsGEA(PartialAlgebra):
    """A family of forms as a partial algebra with its derived-order oracle."""

    def __init__(self, model: str, family: str = "vf"):
        base = _base(family)
        if base in ("vh", "sa") or base not in FAMILY_IDS:
            raise ValueError(f"not a form family: {family!r}")
        if base == "vfd":
            _vfd_tag(family)  # validate eagerly
        self.model = model
        self.family = family
        self.zero = zero_form(model)
        self.enumerable = False
        if base == "vf":
            self.le_oracle = le_oplus
        elif base == "vf-bar":
            self.le_oracle = le_bar
        else:
            self.le_oracle = lambda a, b: le_family(family, a, b)

    def add(self, a, b):
        base = _base(self.family)
        if base == "vf":
            return oplus(a, b)
        if base == "vf-bar":
            return oplus_bar(a, b)
        return oplus_family(self.family, a, b)

    def sample(self, rng: random.Random):
        return sample_form(self.model, self.family, rng)

    def __repr__(self):
        return f"FormsGEA({self.family!r}, model={self.model!r})"


class OperatorGEA(PartialAlgebra):
    """Positive catalog operators with the bounded-or-equal-domain sum."""

    family = "vh"

    def __init__(self, model: str = SEQUENCE):
        self.model = model
        self.zero = operator_zero(model)
        self.enumerable = False
        self.le_oracle = self._le

    def add(self, a, b):
        return oplus_d(a, b)

    def _le(self, a, b):
        r = ominus_forms(form_of_operator(b), form_of_operator(a))
        if r is None or not all(x.kind in _GF_KINDS for x, _ in r.atoms):
            return False
        return self.add(a, OperatorSpec(r.model, r.domain, r.atoms)) == b

    def sample(self, rng: random.Random):
        return sample_operator(self.model, rng, closed_only=False)

    def __repr__(self):
        return f"{type(self).__name__}(model={self.model!r})"


class SelfAdjointGEA(OperatorGEA):
    """Self-adjoint catalog operators under the closed-form sum."""

    family = "sa"

    def add(self, a, b):
        return sa_form_sum(a, b)

    def sample(self, rng: random.Random):
        return sample_operator(self.model, rng, closed_only=True)


_DEFAULT_MODEL = {
    "vf": GRID,
    "vf-bar": GRID,
    "bf": SEQUENCE,
    "rf": GRID,
    "sf": GRID,
    "gf": SEQUENCE,
    "cf": GRID,
    "vfd": GRID,
    "vh": SEQUENCE,
    "sa": SEQUENCE,
}


def gea_by_name(family: str, model: str | None = None) -> PartialAlgebra:
    base = _base(family)
    if base not in FAMILY_IDS:
        raise ValueError(f"unknown family {family!r}")
    model = model or _DEFAULT_MODEL[base]
    if base == "vh":
        return OperatorGEA(model)
    if base == "sa":
        return SelfAdjointGEA(model)
    return FormsGEA(model, family)


# --------------------------------------------------------------- samplers

# dyadic coefficients keep merged matrices float-exact
_COEFFS = tuple(
    Fraction(p, q) for p, q in ((1, 4), (1, 2), (3, 4), (1, 1), (3, 2), (2, 1), (3, 1), (4, 1))
)
_GENS = ("id", "seeded:1", "seeded:2", "seeded:3", "seeded:4", "seeded:5", "seeded:6")
_BOUNDED_LAMS = ("1/j", "const:1/2", "const:2")
_UNBOUNDED_LAMS = ("j", "j^2")
_ZERO_RATE = 0.08


def _coeff(rng):
    return rng.choice(_COEFFS)


def _bounded_atom(model: str, rng):
    if model == SEQUENCE:
        r = rng.random()
        if r < 0.45:
            return diag_atom(rng.choice(_BOUNDED_LAMS))
        if r < 0.65:
            return diag_atom(rng.choice(_UNBOUNDED_LAMS), cut=rng.choice((2, 3, 4, 8)))
    return bounded_mat_atom(rng.choice(_GENS))


def _bounded_form(model: str, rng) -> FormSpec:
    atoms: dict = {}
    for _ in range(rng.choice((1, 1, 2))):
        a = _bounded_atom(model, rng)
        atoms[a] = atoms.get(a, Fraction(0)) + _coeff(rng)
    return make_form(model, atoms)


def _seq_unbounded(rng, allow_restriction: bool = True) -> FormSpec:
    atoms = {diag_atom(rng.choice(_UNBOUNDED_LAMS)): _coeff(rng)}
    if rng.random() < 0.4:
        a = _bounded_atom(SEQUENCE, rng)
        atoms[a] = atoms.get(a, Fraction(0)) + _coeff(rng)
    dom = FINITE_SUPPORT if allow_restriction and rng.random() < 0.25 else None
    return make_form(SEQUENCE, atoms, dom)


def _grid_boundary_atoms(rng) -> dict:
    which = rng.choice(((BOUNDARY0,), (BOUNDARY1,), (BOUNDARY0, BOUNDARY1)))
    return {a: _coeff(rng) for a in which}


def _grid_energy(rng, boundary_rate: float = 0.5) -> FormSpec:
    atoms: dict = {DIRICHLET: _coeff(rng)}
    if rng.random() < boundary_rate:
        atoms.update(_grid_boundary_atoms(rng))
    if rng.random() < 0.3:
        a = _bounded_atom(GRID, rng)
        atoms[a] = atoms.get(a, Fraction(0)) + _coeff(rng)
    return make_form(GRID, atoms)


def _grid_singularish(rng) -> FormSpec:
    atoms = _grid_boundary_atoms(rng)
    if rng.random() < 0.35:
        a = _bounded_atom(GRID, rng)
        atoms[a] = atoms.get(a, Fraction(0)) + _coeff(rng)
    return make_form(GRID, atoms)


def sample_form(model: str, family: str, rng: random.Random) -> FormSpec:
    """Seeded family-appropriate form generator for axiom suites."""
    base = _base(family)
    if rng.random() < _ZERO_RATE:
        return zero_form(model)
    if base == "bf":
        return _bounded_form(model, rng)
    if base == "sf":
        if model == GRID:
            return make_form(GRID, _grid_boundary_atoms(rng))
        return forms.hamel_form(_coeff(rng))
    if base == "gf":
        if model == GRID:
            return _bounded_form(GRID, rng)
        return _bounded_form(SEQUENCE, rng) if rng.random() < 0.4 else _seq_unbounded(rng)
    if base == "rf":
        if model == GRID:
            return _bounded_form(GRID, rng) if rng.random() < 0.35 else _grid_energy(rng)
        return _bounded_form(SEQUENCE, rng) if rng.random() < 0.4 else _seq_unbounded(rng)
    if base == "cf":
        if model == GRID:
            return _bounded_form(GRID, rng) if rng.random() < 0.35 else _grid_energy(rng)
        if rng.random() < 0.4:
            return _bounded_form(SEQUENCE, rng)
        return _seq_unbounded(rng, allow_restriction=False)
    if base == "vfd":
        tag = _vfd_tag(family)
        if tag == H1_GRID and model != GRID:
            raise ValueError("the h1_grid tag lives on the grid model")
        if rng.random() < 0.3:
            return _bounded_form(model, rng)
        return _grid_energy(rng) if rng.random() < 0.6 else _grid_singularish(rng)
    if base in ("vf", "vf-bar"):
        if model == GRID:
            r = rng.random()
            if r < 0.3:
                return _bounded_form(GRID, rng)
            if r < 0.7:
                return _grid_energy(rng)
            return _grid_singularish(rng)
        return _bounded_form(SEQUENCE, rng) if rng.random() < 0.45 else _seq_unbounded(rng)
    raise ValueError(f"no form sampler for family {family!r}")


def sample_operator(model: str, rng: random.Random, closed_only: bool = True) -> OperatorSpec:
    if rng.random() < _ZERO_RATE:
        return operator_zero(model)
    if model == GRID or rng.random() < 0.35:
        f = _bounded_form(model, rng)
        return make_operator(model, f.atoms_dict())
    atoms = {diag_atom(rng.choice(_UNBOUNDED_LAMS)): _coeff(rng)}
    if rng.random() < 0.4:
        a = _bounded_atom(SEQUENCE, rng)
        atoms[a] = atoms.get(a, Fraction(0)) + _coeff(rng)
    dom = FINITE_SUPPORT if not closed_only and rng.random() < 0.25 else None
    return make_operator(SEQUENCE, atoms, dom)


# ------------------------------------------------------------ closure suites


def closure_violations(
    model: str,
    family: str,
    samples: int = 1000,
    seed: int = 0,
    use_bar: bool = False,
) -> dict:
    """Sampled two-out-of-three closure battery for a family.

    Pairs (x, y) are drawn with x in the family and y from the whole
    carrier; every defined ambient sum x + y is counted and a violation is
    recorded whenever exactly two of (x, y, x+y) are members.
    """
    rng = random.Random(seed)
    op = oplus_bar if use_bar else oplus
    checked = 0
    violations: list = []
    while checked < samples:
        x = sample_form(model, family, rng)
        y = sample_form(model, "vf", rng)
        u = op(x, y)
        if u is None:
            continue
        checked += 1
        flags = tuple(in_family(f, family) for f in (x, y, u))
        if sum(flags) == 2:
            violations.append((x, y, u))
    return {
        "model": model,
        "family": family,
        "op": "bar" if use_bar else "plain",
        "checked": checked,
        "violations": violations,
        "ok": not violations,
    }


def regular_sum_demo() -> dict:
    """The pinned triple showing the regular family is not closed under
    two-out-of-three for the plain sum: a regular form plus a singular
    boundary form can be regular again.

    Also carries the exact split identities and the strictness of the
    pointwise inequality between the regular summand and the sum.
    """
    t_prime = energy_form(1)
    t_0 = endpoint_form(1, 1)
    t_1 = oplus(t_prime, t_0)
    split_sum = reg_sing_split(t_1)
    split_regular_sum = form_add(reg_sing_split(t_prime)[0], reg_sing_split(t_0)[0])
    members = {
        "t_prime": in_family(t_prime, "rf"),
        "t_0": in_family(t_0, "rf"),
        "t_1": in_family(t_1, "rf"),
    }
    return {
        "triple": (t_prime, t_0, t_1),
        "memberships": members,
        "two_of_three_violated": members["t_prime"] and members["t_1"] and not members["t_0"],
        "sum_regular_part": split_sum[0],
        "sum_singular_part": split_sum[1],
        "split_of_sum_is_whole": split_sum == (t_1, zero_form(GRID)),
        "regular_parts_sum": split_regular_sum,
        "regular_parts_sum_is_t_prime": split_regular_sum == t_prime,
        "bar_sum_undefined": oplus_bar(t_prime, t_0) is None,
        "strict_increase": preceq(t_prime, t_1) and not preceq(t_1, t_prime),
    }
