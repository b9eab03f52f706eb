"""Positive sesquilinear forms as exact formal sums of catalog atoms.

A form is a multiset of atoms with positive rational coefficients, a model
(sequence or grid) and a symbolic dense-domain tag.  Algebra on forms
(sums, differences, regular/singular splits) is exact on the rational
coefficients so that cancellation holds on the nose; all order, range and
positivity questions are answered numerically from the per-level matrices.

Atom catalog
    diag         sequence model, lambda_j from a small registry, optional
                 truncation cut (lambda_j = 0 for j > cut)
    bounded_mat  Hermitian PSD generator with unit spectral norm relative
                 to the model inner product ("id" or "seeded:<k>")
    dirichlet    grid model, first-difference derivative energy
    boundary0/1  grid model, squared modulus of the endpoint node values
    hamel        symbolic everywhere-defined singular form; classified but
                 never evaluated numerically

Domain tags and their declared inclusion order
    finite_support < diag_max(lambda) < full,   h1_grid < full
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg

from . import hilbert
from .errors import (
    ClassificationMismatch,
    DimensionMismatch,
    DomainViolation,
    EigenFailure,
    ModelMismatch,
    NotClosed,
    OutsideCatalog,
    SymbolicOnly,
    UnboundedForm,
    VerificationFailed,
)
from .hilbert import DEFAULT_LEVELS, GRID, SEQUENCE

PSD_TOL = 1e-9
POLARIZATION_TOL = 1e-10
GROWTH_FACTOR = 1.5


# ------------------------------------------------------------ domain tags


@dataclass(frozen=True)
class DomainTag:
    """Symbolic dense domain.  Equality is by kind and parameter; the
    optional support budget only affects evaluation checks."""

    kind: str
    param: str = ""
    budget: int | None = field(default=None, compare=False)


FULL_SPACE = DomainTag("full")
H1_GRID = DomainTag("h1_grid")
FINITE_SUPPORT = DomainTag("finite_support")

_TAG_KINDS = ("full", "diag_max", "finite_support", "h1_grid")


def diag_domain(lam: str) -> DomainTag:
    return DomainTag("diag_max", lam)


def tag_includes(a: DomainTag, b: DomainTag) -> bool:
    """True when the domain tagged ``a`` is contained in the one tagged ``b``."""
    if a == b:
        return True
    if b == FULL_SPACE:
        return True
    if a.kind == "finite_support" and b.kind == "diag_max":
        return True
    return False


def tag_meet(a: DomainTag, b: DomainTag) -> DomainTag | None:
    if tag_includes(a, b):
        return a
    if tag_includes(b, a):
        return b
    return None


def tag_to_str(tag: DomainTag) -> str:
    return f"{tag.kind}:{tag.param}" if tag.param else tag.kind


def tag_from_str(text: str) -> DomainTag:
    kind, _, param = text.partition(":")
    if kind not in _TAG_KINDS:
        raise OutsideCatalog(f"unknown domain tag {text!r}")
    if kind == "diag_max":
        if not param:
            raise OutsideCatalog("diag_max tag needs its coefficient id")
        return diag_domain(param)
    if param:
        raise OutsideCatalog(f"tag {kind!r} takes no parameter")
    return DomainTag(kind)


# ------------------------------------------------- diagonal coefficients


def lam_value(lam: str, j: int) -> Fraction:
    """Value of a registered diagonal coefficient map at index j >= 1."""
    if lam == "j":
        return Fraction(j)
    if lam == "j^2":
        return Fraction(j * j)
    if lam == "1/j":
        return Fraction(1, j)
    if lam.startswith("const:"):
        return Fraction(lam[6:])
    raise OutsideCatalog(f"unknown diagonal coefficient map {lam!r}")


def lam_sup(lam: str) -> Fraction | None:
    """Supremum of the coefficient map; ``None`` means unbounded."""
    if lam in ("j", "j^2"):
        return None
    if lam == "1/j":
        return Fraction(1)
    if lam.startswith("const:"):
        c = Fraction(lam[6:])
        if c < 0:
            raise OutsideCatalog("diagonal constants must be non-negative")
        return c
    raise OutsideCatalog(f"unknown diagonal coefficient map {lam!r}")


# ----------------------------------------------------------------- atoms


@dataclass(frozen=True)
class FormAtom:
    kind: str
    lam: str = ""
    cut: int | None = None
    gen: str = ""


DIRICHLET = FormAtom("dirichlet")
BOUNDARY0 = FormAtom("boundary0")
BOUNDARY1 = FormAtom("boundary1")
HAMEL = FormAtom("hamel")

_SEQ_KINDS = ("diag", "bounded_mat", "hamel")
_GRID_KINDS = ("dirichlet", "boundary0", "boundary1", "bounded_mat")


def diag_atom(lam: str, cut: int | None = None) -> FormAtom:
    lam_sup(lam)  # validate against the registry
    if cut is not None and cut < 0:
        raise OutsideCatalog("truncation cut must be non-negative")
    return FormAtom("diag", lam=lam, cut=cut)


def bounded_mat_atom(gen: str = "id") -> FormAtom:
    if gen != "id" and not gen.startswith("seeded:"):
        raise OutsideCatalog(f"unknown bounded generator {gen!r}")
    return FormAtom("bounded_mat", gen=gen)


def atom_is_bounded(atom: FormAtom) -> bool:
    if atom.kind == "diag":
        return atom.cut is not None or lam_sup(atom.lam) is not None
    return atom.kind == "bounded_mat"


def atom_natural_domain(atom: FormAtom) -> DomainTag:
    if atom.kind == "diag" and not atom_is_bounded(atom):
        return diag_domain(atom.lam)
    if atom.kind in ("dirichlet", "boundary0", "boundary1"):
        return H1_GRID
    return FULL_SPACE


def _atom_key(atom: FormAtom) -> tuple:
    return (atom.kind, atom.lam, -1 if atom.cut is None else atom.cut, atom.gen)


# ------------------------------------------------------------- form spec


@dataclass(frozen=True)
class FormSpec:
    """Immutable positive form: model + domain tag + atom multiset."""

    model: str
    domain: DomainTag
    atoms: tuple[tuple[FormAtom, Fraction], ...]

    def coeff(self, atom: FormAtom) -> Fraction:
        for a, c in self.atoms:
            if a == atom:
                return c
        return Fraction(0)

    def atoms_dict(self) -> dict[FormAtom, Fraction]:
        return dict(self.atoms)

    @property
    def is_zero(self) -> bool:
        return not self.atoms

    def has_kind(self, kind: str) -> bool:
        return any(a.kind == kind for a, _ in self.atoms)

    def __repr__(self):  # keep reprs short in reports and counterexamples
        return f"FormSpec({describe(self)})"


def _freeze(atoms: dict[FormAtom, Fraction]) -> tuple:
    return tuple(sorted(atoms.items(), key=lambda item: _atom_key(item[0])))


def natural_domain(model: str, atoms: dict[FormAtom, Fraction]) -> DomainTag:
    """Meet of the atoms' natural domains under the declared inclusions."""
    dom = FULL_SPACE
    for atom in atoms:
        met = tag_meet(dom, atom_natural_domain(atom))
        if met is None:
            raise OutsideCatalog(
                "atoms with incomparable natural domains; pass an explicit domain tag"
            )
        dom = met
    return dom


def make_form(model: str, atoms: dict, domain: DomainTag | None = None) -> FormSpec:
    """Validated constructor.

    Coefficients are normalised to positive rationals; the domain defaults
    to the meet of the atoms' natural domains and may only be restricted
    further.  An unbounded form never lives on the full space unless it is
    the symbolic everywhere-defined singular one.
    """
    if model not in hilbert.MODELS:
        raise ModelMismatch(f"unknown model {model!r}")
    allowed = _SEQ_KINDS if model == SEQUENCE else _GRID_KINDS
    items: dict[FormAtom, Fraction] = {}
    for atom, c in atoms.items():
        c = Fraction(c)
        if c < 0:
            raise ValueError(f"coefficient of {atom} is negative")
        if c == 0:
            continue
        if atom.kind not in allowed:
            raise ModelMismatch(f"atom kind {atom.kind!r} not available on the {model} model")
        items[atom] = items.get(atom, Fraction(0)) + c
    if not items:
        return FormSpec(model, FULL_SPACE, ())

    has_hamel = any(a.kind == "hamel" for a in items)
    if has_hamel and any(not atom_is_bounded(a) and a.kind != "hamel" for a in items):
        raise OutsideCatalog("the symbolic singular atom only combines with bounded atoms")

    if domain is None:
        dom = natural_domain(model, items)
    else:
        # an explicit domain only needs to sit inside every atom's own
        # natural domain; the atoms' meet may not exist (two different
        # unbounded diagonals restricted to finite support)
        dom = domain
        for atom in items:
            if not tag_includes(dom, atom_natural_domain(atom)):
                raise OutsideCatalog(
                    f"domain {tag_to_str(dom)} is not contained in the natural "
                    f"domain {tag_to_str(atom_natural_domain(atom))} of {atom}"
                )
    unbounded = any(not atom_is_bounded(a) for a in items)
    if unbounded and dom == FULL_SPACE and not has_hamel:
        raise OutsideCatalog("an unbounded numeric form cannot be declared on the full space")
    return FormSpec(model, dom, _freeze(items))


def zero_form(model: str) -> FormSpec:
    return FormSpec(model, FULL_SPACE, ())


def form_add(t: FormSpec, s: FormSpec) -> FormSpec:
    """Plain sum on the intersection of the domains (no definedness rule)."""
    if t.model != s.model:
        raise ModelMismatch("cannot add forms on different models")
    if t.is_zero:
        return s
    if s.is_zero:
        return t
    dom = tag_meet(t.domain, s.domain)
    if dom is None:
        raise OutsideCatalog("sum of forms on incomparable domains")
    merged = t.atoms_dict()
    for atom, c in s.atoms:
        merged[atom] = merged.get(atom, Fraction(0)) + c
    # operands are valid forms, so the merged multiset needs no revalidation
    return FormSpec(t.model, dom, _freeze(merged))


def form_scale(t: FormSpec, q) -> FormSpec:
    q = Fraction(q)
    if q < 0:
        raise ValueError("forms are positive; scale must be non-negative")
    if q == 0 or t.is_zero:
        return zero_form(t.model)
    return make_form(t.model, {a: c * q for a, c in t.atoms}, t.domain)


# ------------------------------------------------------ named catalog forms


def diag_form(lam: str = "j", coeff=1, cut: int | None = None, domain: DomainTag | None = None) -> FormSpec:
    return make_form(SEQUENCE, {diag_atom(lam, cut): Fraction(coeff)}, domain)


def bounded_matrix_form(gen: str = "id", coeff=1, model: str = SEQUENCE) -> FormSpec:
    return make_form(model, {bounded_mat_atom(gen): Fraction(coeff)})


def energy_form(c) -> FormSpec:
    """c times the derivative energy on the grid; c = 0 gives the zero form."""
    return make_form(GRID, {DIRICHLET: Fraction(c)})


def endpoint_form(alpha=1, beta=1) -> FormSpec:
    """alpha |u(0)|^2 + beta |u(1)|^2; singular whenever it is nonzero."""
    return make_form(GRID, {BOUNDARY0: Fraction(alpha), BOUNDARY1: Fraction(beta)})


def energy_with_endpoints(c=1, alpha=1, beta=1) -> FormSpec:
    return make_form(GRID, {DIRICHLET: Fraction(c), BOUNDARY0: Fraction(alpha), BOUNDARY1: Fraction(beta)})


def hamel_form(coeff=1) -> FormSpec:
    """Symbolic everywhere-defined singular form (never evaluated)."""
    return make_form(SEQUENCE, {HAMEL: Fraction(coeff)})


def catalog_forms(model: str | None = None, include_symbolic: bool = False) -> list[tuple[str, FormSpec]]:
    """Named sweep of shipped forms, used by invariant tests and the CLI."""
    seq: list[tuple[str, FormSpec]] = [
        ("zero[seq]", zero_form(SEQUENCE)),
        ("diag(j)", diag_form("j")),
        ("diag(j)|finite_support", diag_form("j", domain=FINITE_SUPPORT)),
        ("diag(j^2)", diag_form("j^2")),
        ("diag(1/j)", diag_form("1/j")),
        ("diag(const:1/2)", diag_form("const:1/2")),
        ("diag(j,cut=4)", diag_form("j", cut=4)),
        ("bounded(id)", bounded_matrix_form("id")),
        ("bounded(seeded:3)", bounded_matrix_form("seeded:3")),
        ("diag(j)+bounded", form_add(diag_form("j"), bounded_matrix_form("seeded:5"))),
    ]
    grid: list[tuple[str, FormSpec]] = [
        ("zero[grid]", zero_form(GRID)),
        ("energy(1)", energy_form(1)),
        ("endpoints(1,1)", endpoint_form(1, 1)),
        ("endpoints(0,2)", endpoint_form(0, 2)),
        ("energy+endpoints", energy_with_endpoints(1, 1, 1)),
        ("energy(1/2)+endpoints", energy_with_endpoints(Fraction(1, 2), 1, 1)),
        ("bounded(id)[grid]", bounded_matrix_form("id", model=GRID)),
        ("bounded(seeded:3)[grid]", bounded_matrix_form("seeded:3", model=GRID)),
        ("bounded+endpoints", form_add(bounded_matrix_form("id", model=GRID), endpoint_form(1, 1))),
    ]
    out: list[tuple[str, FormSpec]] = []
    if model in (None, SEQUENCE):
        out += seq
        if include_symbolic:
            out.append(("hamel", hamel_form()))
    if model in (None, GRID):
        out += grid
    return out


def describe(t: FormSpec) -> str:
    if t.is_zero:
        return f"0 [{t.model}]"
    parts = []
    for atom, c in t.atoms:
        if atom.kind == "diag":
            cut = f",cut={atom.cut}" if atom.cut is not None else ""
            parts.append(f"{c}*diag({atom.lam}{cut})")
        elif atom.kind == "bounded_mat":
            parts.append(f"{c}*mat({atom.gen})")
        elif atom.kind == "dirichlet":
            parts.append(f"{c}*energy")
        elif atom.kind == "boundary0":
            parts.append(f"{c}*|u(0)|^2")
        elif atom.kind == "boundary1":
            parts.append(f"{c}*|u(1)|^2")
        else:
            parts.append(f"{c}*{atom.kind}")
    return " + ".join(parts) + f" on {tag_to_str(t.domain)} [{t.model}]"


# -------------------------------------------------------------- matrices


def _seeded_unit_psd(dim: int, seed: int) -> np.ndarray:
    # Hermitian PSD with spectral norm exactly 1, reproducible per (seed, dim)
    rng = np.random.default_rng((seed, dim))
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, _ = np.linalg.qr(a)
    w = rng.uniform(0.2, 1.0, dim)
    w /= w.max()
    m = (q * w) @ q.conj().T
    return (m + m.conj().T) / 2.0


@functools.lru_cache(maxsize=None)
def _atom_matrix(model: str, atom: FormAtom, level: int) -> np.ndarray:
    dim = hilbert.dim_of(model, level)
    if atom.kind == "diag":
        upto = dim if atom.cut is None else min(atom.cut, dim)
        vals = [float(lam_value(atom.lam, j)) for j in range(1, upto + 1)]
        vals += [0.0] * (dim - upto)
        m = np.diag(np.asarray(vals, dtype=complex))
    elif atom.kind == "bounded_mat":
        if atom.gen == "id":
            g = np.eye(dim, dtype=complex)
        else:
            g = _seeded_unit_psd(dim, int(atom.gen.split(":", 1)[1]))
        if model == GRID:
            # conjugate by the Gram square root so the numerical range of the
            # atom relative to the model inner product is exactly [min, 1]
            root = np.sqrt(hilbert.gram_weights(model, level))
            g = (root[:, None] * g) * root[None, :]
        m = g
    elif atom.kind == "dirichlet":
        m = hilbert.energy_stiffness(level).astype(complex)
    elif atom.kind == "boundary0":
        m = np.zeros((dim, dim), dtype=complex)
        m[0, 0] = 1.0
    elif atom.kind == "boundary1":
        m = np.zeros((dim, dim), dtype=complex)
        m[-1, -1] = 1.0
    else:
        raise SymbolicOnly("the symbolic singular form has no matrices")
    m.setflags(write=False)
    return m


@functools.lru_cache(maxsize=None)
def matrix_at(t: FormSpec, level: int) -> np.ndarray:
    """Coefficient matrix of the form at a level: t(x, y) = y* M x.

    The returned array is cached and marked read-only.
    """
    if t.has_kind("hamel"):
        raise SymbolicOnly("the symbolic singular form has no matrices")
    dim = hilbert.dim_of(t.model, level)
    m = np.zeros((dim, dim), dtype=complex)
    for atom, c in t.atoms:
        m = m + float(c) * _atom_matrix(t.model, atom, level)
    m.setflags(write=False)
    return m


def _check_domain_vector(t: FormSpec, x: np.ndarray):
    if t.domain.kind == "finite_support" and t.domain.budget is not None:
        if int(np.count_nonzero(x)) > t.domain.budget:
            raise DomainViolation(
                f"vector support {int(np.count_nonzero(x))} exceeds the declared "
                f"budget {t.domain.budget}"
            )


def evaluate(t: FormSpec, x, y) -> complex:
    """t(x, y) at the level inferred from the vector length."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != y.shape:
        raise DimensionMismatch("operand vectors have different shapes")
    level = hilbert.level_of(t.model, x.shape[0])
    _check_domain_vector(t, x)
    _check_domain_vector(t, y)
    m = matrix_at(t, level)
    return complex(np.vdot(y, m @ x))


def quadratic(t: FormSpec, x) -> float:
    """t(x, x); must be real and non-negative up to roundoff."""
    x = np.asarray(x, dtype=complex)
    level = hilbert.level_of(t.model, x.shape[0])
    _check_domain_vector(t, x)
    value = complex(np.vdot(x, matrix_at(t, level) @ x))
    if abs(value.imag) > 1e-12 * max(1.0, abs(value.real)):
        raise VerificationFailed(f"quadratic value is not real: {value}")
    return value.real


# ----------------------------------------------------- range and classes


def numerical_range_bounds(t: FormSpec, level: int) -> tuple[float, float]:
    """Extremes (m, n) of t(x, x) over unit vectors of the model.

    Solved as a Hermitian eigenproblem relative to the model Gram matrix;
    positivity requires m >= -1e-9 * max(1, n).
    """
    m = matrix_at(t, level)
    try:
        if t.model == GRID:
            b = np.diag(hilbert.gram_weights(t.model, level))
            vals = scipy.linalg.eigh(m, b, eigvals_only=True)
        else:
            vals = np.linalg.eigvalsh(m)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise EigenFailure(str(exc)) from exc
    lo, hi = float(vals[0]), float(vals[-1])
    if lo < -PSD_TOL * max(1.0, hi):
        raise VerificationFailed(f"form is not positive: min range {lo}")
    return lo, hi


def is_bounded(t: FormSpec) -> bool:
    """Catalog boundedness: every atom is bounded."""
    return all(atom_is_bounded(a) for a, _ in t.atoms)


def _growth_signature(values, factor: float = GROWTH_FACTOR) -> bool:
    values = list(values)
    first, last = values[0], values[-1]
    return last > factor * max(first, 1e-12) and last > 1e-9


def classify_boundedness(t: FormSpec, levels=None) -> bool:
    """Declared boundedness cross-checked by a three-level growth probe.

    Returns True for bounded.  The probe flags a form as unbounded when
    its numerical-range supremum grows by a factor >= 1.5 across the
    probe levels; disagreement with the declared verdict raises
    :class:`ClassificationMismatch`.  The symbolic singular form is
    classified by declaration alone.
    """
    declared = is_bounded(t)
    if t.has_kind("hamel"):
        return False
    if levels is None:
        levels = DEFAULT_LEVELS[t.model]
    sup = [numerical_range_bounds(t, level)[1] for level in levels]
    grows = _growth_signature(sup)
    if declared and grows:
        raise ClassificationMismatch(f"{describe(t)} declared bounded but n_t grows: {sup}")
    if not declared and not grows and not t.is_zero:
        raise ClassificationMismatch(f"{describe(t)} declared unbounded but n_t is flat: {sup}")
    return declared


def reg_sing_split(t: FormSpec) -> tuple[FormSpec, FormSpec]:
    """Split into regular + singular parts by the whole-form catalog rule.

    Grid forms with a positive derivative-energy coefficient are entirely
    regular; with zero energy the boundary atoms are the singular part and
    the bounded atoms the regular part.  Sequence forms are regular except
    for the symbolic singular atom.  The parts partition the atom multiset,
    so their matrices reassemble the original exactly at every level.
    """
    atoms = t.atoms_dict()
    if t.model == GRID:
        if t.coeff(DIRICHLET) > 0:
            return t, zero_form(t.model)
        sing = {a: c for a, c in atoms.items() if a.kind in ("boundary0", "boundary1")}
        reg = {a: c for a, c in atoms.items() if a.kind not in ("boundary0", "boundary1")}
    else:
        sing = {a: c for a, c in atoms.items() if a.kind == "hamel"}
        reg = {a: c for a, c in atoms.items() if a.kind != "hamel"}
    reg_dom = None if not reg else (t.domain if any(not atom_is_bounded(a) for a in reg) else None)
    t_r = make_form(t.model, reg, reg_dom) if reg else zero_form(t.model)
    t_s = make_form(t.model, sing) if sing else zero_form(t.model)
    return t_r, t_s


def is_regular(t: FormSpec) -> bool:
    return reg_sing_split(t)[1].is_zero


def is_singular(t: FormSpec) -> bool:
    return reg_sing_split(t)[0].is_zero


def is_closed(t: FormSpec) -> bool:
    """Closedness by the catalog rule.

    Bounded forms are closed exactly on the full space.  Unbounded
    sequence forms are closed on their maximal diagonal domain but not on
    the finite-support restriction.  Unbounded grid forms are closed when
    the derivative-energy coefficient is positive; boundary-only forms are
    not closable at all.
    """
    if t.has_kind("hamel"):
        return False
    if is_bounded(t):
        return t.domain == FULL_SPACE
    if t.model == SEQUENCE:
        return t.domain.kind == "diag_max"
    return t.coeff(DIRICHLET) > 0 and t.domain == H1_GRID


# ----------------------------------------------------- singularity probe


def singularity_witness(t: FormSpec, x, tol: float = PSD_TOL):
    """Search for y with t(y, y) < |(x, y)|^2 at the level of ``x``.

    A singular form admits such a witness for every nonzero x.  For
    boundary-only grid forms the witness is analytic: zero out the
    endpoint nodes of x.  Otherwise the minimum of t(y, y) / |(x, y)|^2
    is computed from the eigendecomposition of the form matrix; ``None``
    is returned when that minimum is >= 1, i.e. no witness exists.
    """
    x = np.asarray(x, dtype=complex)
    if not np.any(x):
        raise ValueError("witness search needs a nonzero reference vector")
    level = hilbert.level_of(t.model, x.shape[0])
    weights = hilbert.gram_weights(t.model, level)
    g = weights * x  # inner(x, y) == vdot(y, g)

    def accept(y):
        y = np.asarray(y, dtype=complex)
        if not np.any(y):
            return None
        y = y / np.linalg.norm(y)
        if quadratic(t, y) < abs(hilbert.inner(t.model, x, y)) ** 2:
            return y
        return None

    numeric_kinds = {a.kind for a, _ in t.atoms}
    if t.model == GRID and numeric_kinds <= {"boundary0", "boundary1"}:
        y = x.copy()
        y[0] = 0.0
        y[-1] = 0.0
        got = accept(y)
        if got is not None:
            return got
        # x is supported only at the endpoints: matching it there is optimal
        got = accept(x)
        if got is not None:
            return got

    m = matrix_at(t, level)
    try:
        vals, vecs = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc
    coords = vecs.conj().T @ g
    null = vals <= tol * max(1.0, float(vals[-1]))
    null_overlap = coords.copy()
    null_overlap[~null] = 0.0
    if np.linalg.norm(null_overlap) > 1e-12 * np.linalg.norm(g):
        got = accept(vecs @ null_overlap)
        if got is not None:
            return got
    pos = ~null
    if np.any(pos):
        got = accept(vecs[:, pos] @ (coords[pos] / vals[pos]))
        if got is not None:
            return got
    return None


# ---------------------------------------------- operators of bounded/closed


def riesz_operator_of_bounded(t: FormSpec, level: int, check: bool = True) -> np.ndarray:
    """Matrix A with t(x, y) = (A x, y) in the model inner product."""
    if not is_bounded(t):
        raise UnboundedForm(f"{describe(t)} is not bounded")
    a = _gram_solve(t, level)
    if check:
        sampler = hilbert.VectorSampler(t.model, level, seed=13)
        scale = max(1.0, numerical_range_bounds(t, level)[1])
        for _ in range(4):
            x, y = sampler.draw(), sampler.draw()
            resid = abs(evaluate(t, x, y) - hilbert.inner(t.model, a @ x, y))
            if resid > 1e-10 * scale * max(1.0, float(np.linalg.norm(x) * np.linalg.norm(y))):
                raise VerificationFailed(f"representation residual {resid} too large")
    return a


def _gram_solve(t: FormSpec, level: int) -> np.ndarray:
    m = matrix_at(t, level)
    if t.model == GRID:
        w = hilbert.gram_weights(t.model, level)
        return m / w[:, None]
    return m.copy()


def extend_bounded(t: FormSpec) -> FormSpec:
    """Extend a bounded form from a dense domain to the full space."""
    if not is_bounded(t):
        raise UnboundedForm(f"{describe(t)} has no bounded extension")
    if t.domain == FULL_SPACE:
        return t
    return make_form(t.model, t.atoms_dict(), FULL_SPACE)


def associated_operator(t: FormSpec, level: int) -> np.ndarray:
    """Matrix of the positive operator generating a closed form at a level."""
    if not is_closed(t):
        raise NotClosed(f"{describe(t)} is not closed")
    return _gram_solve(t, level)


# ------------------------------------------------------ operator catalog


@dataclass(frozen=True)
class OperatorSpec:
    """Positive catalog operator: diagonal and bounded-matrix atoms only."""

    model: str
    domain: DomainTag
    atoms: tuple[tuple[FormAtom, Fraction], ...]

    def atoms_dict(self) -> dict[FormAtom, Fraction]:
        return dict(self.atoms)

    @property
    def is_zero(self) -> bool:
        return not self.atoms

    def __repr__(self):
        return f"OperatorSpec({describe(form_of_operator(self))})"


_OPERATOR_KINDS = ("diag", "bounded_mat")


def make_operator(model: str, atoms: dict, domain: DomainTag | None = None) -> OperatorSpec:
    for atom in atoms:
        if atom.kind not in _OPERATOR_KINDS:
            raise OutsideCatalog(f"atom kind {atom.kind!r} does not define a catalog operator")
    probe = make_form(model, atoms, domain)
    return OperatorSpec(probe.model, probe.domain, probe.atoms)


def form_of_operator(op: OperatorSpec) -> FormSpec:
    """The form (A x, y) generated by a catalog operator on its domain."""
    return FormSpec(op.model, op.domain, op.atoms)


def operator_matrix_at(op: OperatorSpec, level: int) -> np.ndarray:
    return _gram_solve(form_of_operator(op), level)


# ------------------------------------------------------------------ JSON


def _coeff_str(c: Fraction) -> str:
    return str(c)


def form_to_dict(t: FormSpec) -> dict:
    atoms = []
    boundary = {}
    for atom, c in t.atoms:
        if atom.kind == "diag":
            entry = {
                "kind": "diag",
                "lambda": atom.lam,
                "sup": "inf" if not atom_is_bounded(atom) else _coeff_str(_diag_sup(atom)),
                "coeff": _coeff_str(c),
            }
            if atom.cut is not None:
                entry["cut"] = atom.cut
            atoms.append(entry)
        elif atom.kind == "bounded_mat":
            atoms.append({"kind": "bounded_mat", "gen": atom.gen, "coeff": _coeff_str(c)})
        elif atom.kind == "dirichlet":
            atoms.append({"kind": "dirichlet", "c": _coeff_str(c)})
        elif atom.kind in ("boundary0", "boundary1"):
            boundary[atom.kind] = c
        else:
            atoms.append({"kind": "hamel", "coeff": _coeff_str(c)})
    if boundary:
        atoms.append(
            {
                "kind": "boundary",
                "alpha": _coeff_str(boundary.get("boundary0", Fraction(0))),
                "beta": _coeff_str(boundary.get("boundary1", Fraction(0))),
            }
        )
    atoms.sort(key=lambda e: json.dumps(e, sort_keys=True))
    return {"model": t.model, "domain": tag_to_str(t.domain), "atoms": atoms}


def _diag_sup(atom: FormAtom) -> Fraction:
    if atom.cut is not None:
        best = Fraction(0)
        for j in range(1, atom.cut + 1):
            best = max(best, lam_value(atom.lam, j))
        return best
    sup = lam_sup(atom.lam)
    assert sup is not None
    return sup


def form_from_dict(data: dict) -> FormSpec:
    try:
        model = data["model"]
        domain = tag_from_str(data["domain"])
        entries = data["atoms"]
    except (KeyError, TypeError) as exc:
        raise OutsideCatalog(f"malformed form description: {exc}") from exc
    atoms: dict[FormAtom, Fraction] = {}

    def bump(atom, c):
        atoms[atom] = atoms.get(atom, Fraction(0)) + Fraction(c)

    for entry in entries:
        kind = entry.get("kind")
        if kind == "diag":
            bump(diag_atom(entry["lambda"], entry.get("cut")), entry.get("coeff", "1"))
        elif kind == "bounded_mat":
            bump(bounded_mat_atom(entry["gen"]), entry.get("coeff", "1"))
        elif kind == "dirichlet":
            bump(DIRICHLET, entry["c"])
        elif kind == "boundary":
            bump(BOUNDARY0, entry.get("alpha", "0"))
            bump(BOUNDARY1, entry.get("beta", "0"))
        elif kind == "hamel":
            bump(HAMEL, entry.get("coeff", "1"))
        elif kind == "zero":
            continue
        else:
            raise OutsideCatalog(f"unknown atom kind {kind!r}")
    return make_form(model, atoms, domain)


def form_to_json(t: FormSpec) -> str:
    """Canonical JSON encoding; loading it back is bit-exact."""
    return json.dumps(form_to_dict(t), sort_keys=True, separators=(",", ":"))


def form_from_json(text: str) -> FormSpec:
    return form_from_dict(json.loads(text))
