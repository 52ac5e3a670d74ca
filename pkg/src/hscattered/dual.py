"""Delsarte dual of an F_q-subspace.

For U of dimension k > r with F_q-basis u_1..u_k, the surjection
``e_i -> u_i`` from Vbar = F_{q^n}^k onto F_{q^n}^r realises U as (W + Gamma)/Gamma,
where W is the F_q-span of the standard basis and Gamma is the kernel of the
surjection.  Given a symmetric invertible F_q-matrix G, the dual is the image
of W in Vbar / Gamma^perp, expressed in coordinates of a complement of
Gamma^perp made of standard basis vectors.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from . import linalg
from .errors import DiamondViolated, DimensionTooSmall, FormSingular
from .subspace import DEFAULT_ENUM_CAP, FqSubspace, hyperplane_spectrum


def form_matrix(form, k: int, tower):
    """Gram matrix for ``"standard"``, ``"reversal"`` or an explicit matrix."""
    if isinstance(form, str):
        if form == "standard":
            G = linalg.identity(k)
        elif form == "reversal":
            G = [[int(i + j == k - 1) for j in range(k)] for i in range(k)]
        else:
            raise FormSingular(f"unknown form {form!r}")
    else:
        G = [list(row) for row in form]
    validate_form(G, k, tower)
    return G


def validate_form(G, k, tower):
    if len(G) != k or any(len(row) != k for row in G):
        raise FormSingular(f"form must be {k} x {k}")
    if any(not 0 <= x < tower.q for row in G for x in row):
        raise FormSingular("form entries must lie in F_q")
    if any(G[i][j] != G[j][i] for i in range(k) for j in range(i)):
        raise FormSingular("form is not symmetric")
    if linalg.rank(G, tower.fq) != k:
        raise FormSingular("form is degenerate")


def check_diamond(U: FqSubspace, cap=DEFAULT_ENUM_CAP, workers=1) -> bool:
    """Every hyperplane meets U in dimension < k - 1."""
    if U.k <= U.r:
        raise DimensionTooSmall(f"need k > r, got k={U.k}, r={U.r}")
    spec = hyperplane_spectrum(U, cap=cap, workers=workers)
    return max(spec.counts) < U.k - 1


def orthogonal_complement(rows, G, F, k):
    """``{x : x G y^T = 0 for every row y}`` for symmetric G."""
    if not rows:
        return linalg.identity(k)
    return linalg.kernel(linalg.mat_mul(rows, G, F), F, k)


def w_plus(perp_rows, tower, k) -> FqSubspace:
    """W + S as an F_q-subspace of F_{q^n}^k for an F_{q^n}-subspace S."""
    F = tower.fqn
    gens = [row for row in linalg.identity(k)]
    for b in tower.power_basis():
        gens.extend([F.mul(b, x) for x in row] for row in perp_rows)
    return FqSubspace.span(tower, k, gens)


@dataclass
class DualContext:
    source: FqSubspace
    basis: list
    gamma: list
    form: list
    gamma_perp: list
    complement: list
    quotient: list
    dual: FqSubspace
    guarantee_applies: bool | None = None

    def project(self, x):
        """Coordinates of the coset x + Gamma^perp."""
        F = self.source.tower.fqn
        m = len(self.complement)
        return linalg.vec_mat(x, self.quotient, F)[:m] if m else []

    def to_json(self) -> dict:
        t = self.source.tower

        def nest(rows):
            return [[t.to_nested(x) for x in row] for row in rows]

        return {
            "P": nest(self.basis),
            "gamma": nest(self.gamma),
            "form": self.form,
            "gamma_perp": nest(self.gamma_perp),
            "complement": self.complement,
            "guarantee_applies": self.guarantee_applies,
        }


def dual_context(
    U: FqSubspace, form="standard", basis=None, h=None, cap=DEFAULT_ENUM_CAP, workers=1
) -> DualContext:
    """Run the whole dual construction and keep every intermediate.

    ``basis`` fixes the F_q-basis of U used for the surjection (default: the
    canonical basis).  When ``h`` is given, ``guarantee_applies`` records
    whether U is a maximum h-scattered subspace with n >= h + 3.
    """
    tower = U.tower
    F = tower.fqn
    k, r, n = U.k, U.r, tower.n
    if k <= r:
        raise DimensionTooSmall(f"need k > r, got k={k}, r={r}")
    if not check_diamond(U, cap=cap, workers=workers):
        raise DiamondViolated("some hyperplane meets U in dimension >= k - 1")
    P = [list(v) for v in (U.canonical_basis() if basis is None else basis)]
    if FqSubspace(tower, r, P) != U:
        raise ValueError("basis does not span U")
    G = form_matrix(form, k, tower)
    gamma = linalg.left_kernel(P, F, k)
    perp = orthogonal_complement(gamma, G, F, k)
    assert len(perp) == r
    # W meets Gamma^perp trivially exactly when the F_q-dimensions add up.
    assert w_plus(perp, tower, k).k == k + r * n, "W meets Gamma^perp"
    complement = []
    span = [row[:] for row in perp]
    for i in range(k):
        e = [int(j == i) for j in range(k)]
        if linalg.rank(span + [e], F) > len(span):
            span.append(e)
            complement.append(i)
    B = [[int(j == c) for j in range(k)] for c in complement] + perp
    quotient = linalg.inverse(B, F)
    m = k - r
    images = [row[:m] for row in quotient]
    dual = FqSubspace(tower, m, images)
    guarantee = None
    if h is not None:
        guarantee = k * (h + 1) == r * n and n >= h + 3
        if not guarantee:
            warnings.warn(
                f"dual computed outside the maximum h-scattered, n >= h + 3 regime (h={h})",
                stacklevel=2,
            )
    return DualContext(U, P, gamma, G, perp, complement, quotient, dual, guarantee)


def delsarte_dual(U: FqSubspace, form="standard", **kwargs) -> FqSubspace:
    return dual_context(U, form, **kwargs).dual


def form_independence_check(U: FqSubspace, G1, G2, basis=None, cap=DEFAULT_ENUM_CAP, workers=1) -> bool:
    """Whether ``x -> x G2 G1^-1`` carries W + Gamma^perp2 onto W + Gamma^perp1."""
    tower = U.tower
    F = tower.fqn
    k, r = U.k, U.r
    if k <= r:
        raise DimensionTooSmall(f"need k > r, got k={k}, r={r}")
    if not check_diamond(U, cap=cap, workers=workers):
        raise DiamondViolated("some hyperplane meets U in dimension >= k - 1")
    G1 = form_matrix(G1, k, tower)
    G2 = form_matrix(G2, k, tower)
    P = [list(v) for v in (U.canonical_basis() if basis is None else basis)]
    gamma = linalg.left_kernel(P, F, k)
    perp1 = orthogonal_complement(gamma, G1, F, k)
    perp2 = orthogonal_complement(gamma, G2, F, k)
    phi = linalg.mat_mul(G2, linalg.inverse(G1, tower.fq), tower.fq)
    source = w_plus(perp2, tower, k)
    image = FqSubspace.span(tower, k, [linalg.vec_mat(v, phi, F) for v in source.basis])
    return image == w_plus(perp1, tower, k)
