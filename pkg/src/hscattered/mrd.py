"""Rank-metric codes of linearized polynomials and their link to subspaces.

A q-polynomial ``f(x) = sum a_i x^(q^i)`` modulo ``x^(q^n) - x`` is stored by
its n coefficients.  Flattening the coefficients over F_q puts L_{n,q} in
F_q^(n^2) with coordinate ``i*n + m`` holding the s^m component of a_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .dual import dual_context, orthogonal_complement
from .errors import CommonRoot, DependentRows, DimensionTooSmall, EnumerationTooLarge, InputError
from .gf import FieldTower
from .subspace import DEFAULT_ENUM_CAP, FqSubspace, _chunks, _map


@dataclass(frozen=True)
class LinearizedPoly:
    tower: FieldTower = field(compare=True, repr=False)
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        if len(coeffs) != self.tower.n:
            raise InputError(f"expected {self.tower.n} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    def __call__(self, x: int) -> int:
        t = self.tower
        F = t.fqn
        acc = 0
        for i, a in enumerate(self.coeffs):
            if a:
                acc = F.add(acc, F.mul(a, t.frobenius(x, i)))
        return acc

    def __add__(self, other):
        F = self.tower.fqn
        return LinearizedPoly(self.tower, [F.add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        F = self.tower.fqn
        return LinearizedPoly(self.tower, [F.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, lam: int) -> "LinearizedPoly":
        """The polynomial ``lam * f(x)``."""
        F = self.tower.fqn
        return LinearizedPoly(self.tower, [F.mul(lam, a) for a in self.coeffs])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def flat(self) -> list:
        return linalg.flatten(self.coeffs, self.tower)


def monomial(tower, i: int, a: int = 1) -> LinearizedPoly:
    """``a x^(q^i)``."""
    c = [0] * tower.n
    c[i % tower.n] = a
    return LinearizedPoly(tower, c)


def trace_poly(tower) -> LinearizedPoly:
    return LinearizedPoly(tower, [1] * tower.n)


def poly_from_flat(tower, w) -> LinearizedPoly:
    return LinearizedPoly(tower, linalg.unflatten(list(w), tower))


def poly_rank(f: LinearizedPoly) -> int:
    """Rank over F_q of x -> f(x)."""
    t = f.tower
    return linalg.rank_packed([f(b) for b in t.power_basis()], t.fq, t.n)


def compose(f: LinearizedPoly, g: LinearizedPoly) -> LinearizedPoly:
    """``f(g(x))``: c_k = sum over i + j = k (mod n) of a_i b_j^(q^i)."""
    t = f.tower
    F = t.fqn
    n = t.n
    c = [0] * n
    for i, a in enumerate(f.coeffs):
        if not a:
            continue
        for j, b in enumerate(g.coeffs):
            if b:
                k = (i + j) % n
                c[k] = F.add(c[k], F.mul(a, t.frobenius(b, i)))
    return LinearizedPoly(t, c)


def adjoint(f: LinearizedPoly) -> LinearizedPoly:
    """Adjoint w.r.t. Tr(xy): the coefficient a_i moves to (n - i) mod n as a_i^(q^(n-i))."""
    t = f.tower
    n = t.n
    c = [0] * n
    for i, a in enumerate(f.coeffs):
        j = (n - i) % n
        c[j] = t.frobenius(a, j)
    return LinearizedPoly(t, c)


# -- codes -----------------------------------------------------------------------


class RankMetricCode:
    """F_{q^n}-span of linearized polynomials."""

    def __init__(self, tower, generators):
        self.tower = tower
        self.generators = tuple(
            g if isinstance(g, LinearizedPoly) else LinearizedPoly(tower, g) for g in generators
        )
        rows = [list(g.coeffs) for g in self.generators]
        R, pivots = linalg.rref_pivots(rows, tower.fqn, tower.n)
        if len(R) != len(rows):
            raise DependentRows("generators are F_{q^n}-dependent")
        self.canonical = tuple(tuple(row) for row in R)
        self.pivots = tuple(pivots)

    @property
    def r(self) -> int:
        return len(self.generators)

    @property
    def n(self) -> int:
        return self.tower.n

    def __eq__(self, other):
        return (
            isinstance(other, RankMetricCode)
            and other.tower == self.tower
            and other.canonical == self.canonical
        )

    def __hash__(self):
        return hash((self.tower, self.canonical))

    def __repr__(self):
        return f"RankMetricCode(n={self.n}, r={self.r}, pivots={self.pivots})"

    def canonical_generators(self):
        return [LinearizedPoly(self.tower, row) for row in self.canonical]

    def fq_basis(self):
        """F_q-basis ``s^m h_i`` of the code."""
        return [g.scale(b) for g in self.canonical_generators() for b in self.tower.power_basis()]

    def contains(self, f: LinearizedPoly) -> bool:
        rows = [list(row) for row in self.canonical] + [list(f.coeffs)]
        return linalg.rank(rows, self.tower.fqn) == self.r

    def elements_projective(self, start=0, stop=None):
        """One nonzero element from each F_{q^n}-scalar class."""
        F = self.tower.fqn
        for _, (lam,) in linalg.iter_rref_subspaces(F, self.r, 1, start, stop):
            c = [0] * self.n
            for l, g in zip(lam, self.generators):
                if l:
                    c = [F.add(a, F.mul(l, b)) for a, b in zip(c, g.coeffs)]
            yield LinearizedPoly(self.tower, c)


def gabidulin_code(tower, r: int) -> RankMetricCode:
    """``<x, x^q, ..., x^(q^(r-1))>`` over F_{q^n}."""
    return RankMetricCode(tower, [monomial(tower, i) for i in range(r)])


def _min_rank_chunk(job):
    C, start, stop = job
    return min((poly_rank(f) for f in C.elements_projective(start, stop)), default=None)


def min_distance(C: RankMetricCode, cap=DEFAULT_ENUM_CAP, workers=1) -> int:
    """Minimum rank over nonzero codewords, one per F_{q^n}-scalar class."""
    if C.r == 0:
        raise InputError("the zero code has no minimum distance")
    total = linalg.gaussian_binomial(C.r, 1, C.tower.order)
    if total > cap:
        raise EnumerationTooLarge(f"{total} codeword classes exceeds cap {cap}")
    parts = _map(_min_rank_chunk, [(C, a, b) for a, b in _chunks(total, workers)], workers)
    return min(p for p in parts if p is not None)


def min_distance_fq(basis, cap=DEFAULT_ENUM_CAP) -> int:
    """Minimum rank of an F_q-linear code given by an F_q-basis, by full enumeration."""
    t = basis[0].tower
    total = t.q ** len(basis) - 1
    if total > cap:
        raise EnumerationTooLarge(f"{total} codewords exceeds cap {cap}")
    F = t.fqn
    best = None
    for coeffs in linalg.all_vectors(t.fq, len(basis)):
        if not any(coeffs):
            continue
        c = [0] * t.n
        for a, f in zip(coeffs, basis):
            if a:
                c = [F.add(x, F.mul(a, y)) for x, y in zip(c, f.coeffs)]
        rk = poly_rank(LinearizedPoly(t, c))
        best = rk if best is None else min(best, rk)
    return best


def is_mrd(C: RankMetricCode, cap=DEFAULT_ENUM_CAP, workers=1) -> bool:
    return min_distance(C, cap=cap, workers=workers) == C.n - C.r + 1


# -- idealisers ----------------------------------------------------------------------


@dataclass
class Idealiser:
    side: str
    dimension: int
    is_field_of_order_qn: bool
    basis: list

    def to_json(self) -> dict:
        t = self.basis[0].tower if self.basis else None
        return {
            "side": self.side,
            "dimension": self.dimension,
            "is_field_of_order_qn": self.is_field_of_order_qn,
            "basis": [[t.to_nested(a) for a in f.coeffs] for f in self.basis],
        }


def _span_contains(rows, v, F):
    return linalg.rank(rows + [v], F) == linalg.rank(rows, F)


def idealiser_fq(basis, side: str, tower, cap=DEFAULT_ENUM_CAP) -> Idealiser:
    """Left (``phi o f``) or right (``f o phi``) idealiser of an F_q-linear code."""
    if side not in ("left", "right"):
        raise InputError(f"side must be 'left' or 'right', got {side!r}")
    fq = tower.fq
    n = tower.n
    N = n * n
    code_rows = [f.flat() for f in basis]
    checks = linalg.kernel(code_rows, fq, N) if code_rows else linalg.identity(N)
    units = [poly_from_flat(tower, e) for e in linalg.identity(N)]
    constraints = []
    for g in basis:
        images = [(compose(E, g) if side == "left" else compose(g, E)).flat() for E in units]
        for hrow in checks:
            constraints.append([linalg.dot(hrow, img, fq) for img in images])
    sol = linalg.kernel(constraints, fq, N) if constraints else linalg.identity(N)
    members = [poly_from_flat(tower, v) for v in sol]
    return Idealiser(side, len(members), _is_field(members, tower, cap), members)


def _is_field(members, tower, cap):
    n = tower.n
    if len(members) != n:
        return False
    fq = tower.fq
    rows = [f.flat() for f in members]
    for a in members:
        for b in members:
            if not _span_contains(rows, compose(a, b).flat(), fq):
                return False
    if tower.q**n > cap:
        raise EnumerationTooLarge("idealiser too large to enumerate")
    F = tower.fqn
    for coeffs in linalg.all_vectors(fq, n):
        if not any(coeffs):
            continue
        c = [0] * n
        for a, f in zip(coeffs, members):
            if a:
                c = [F.add(x, F.mul(a, y)) for x, y in zip(c, f.coeffs)]
        if poly_rank(LinearizedPoly(tower, c)) != n:
            return False
    return True


def idealiser(C: RankMetricCode, side: str = "left", cap=DEFAULT_ENUM_CAP) -> Idealiser:
    return idealiser_fq(C.fq_basis(), side, C.tower, cap=cap)


def adjoint_code_basis(C: RankMetricCode):
    """F_q-basis of the adjoint code (generally not F_{q^n}-linear)."""
    return [adjoint(f) for f in C.fq_basis()]


def fq_span_equal(a, b, tower) -> bool:
    fq = tower.fq
    A = linalg.rref([f.flat() for f in a], fq, tower.n**2)
    B = linalg.rref([f.flat() for f in b], fq, tower.n**2)
    return A == B


# -- bridge to subspaces ------------------------------------------------------------------


def code_to_subspace(C: RankMetricCode, generators=None) -> FqSubspace:
    """``U_C = {(f_1(x), ..., f_r(x))}`` with basis images of the power basis."""
    t = C.tower
    gens = C.generators if generators is None else generators
    rows = [[f(b) for f in gens] for b in t.power_basis()]
    flat = [linalg.flatten(v, t) for v in rows]
    if linalg.rank(flat, t.fq) < t.n:
        raise CommonRoot("generators share a nonzero root")
    return FqSubspace(t, len(gens), rows)


# -- Delsarte duality of codes ----------------------------------------------------------------


def trace_gram(tower):
    """``Tr(s^i s^j)`` over the power basis, an n x n matrix over F_q."""
    F = tower.fqn
    pb = tower.power_basis()
    return [[tower.trace(F.mul(a, b)) for b in pb] for a in pb]


def delsarte_dual_code(C: RankMetricCode) -> RankMetricCode:
    """Orthogonal complement under ``b(f, g) = Tr(sum a_i b_i)``, via F_q linear algebra."""
    t = C.tower
    fq = t.fq
    n = t.n
    T = trace_gram(t)
    constraints = []
    for g in C.fq_basis():
        beta = g.flat()
        row = []
        for i in range(n):
            block = beta[i * n : (i + 1) * n]
            row.extend(linalg.dot(T[m], block, fq) for m in range(n))
        constraints.append(row)
    sol = linalg.kernel(constraints, fq, n * n) if constraints else linalg.identity(n * n)
    assert len(sol) == n * (n - C.r)
    coeff_rows = [linalg.unflatten(v, t) for v in sol]
    gens = linalg.rref(coeff_rows, t.fqn, n)
    dual = RankMetricCode(t, gens)
    # The complement is F_{q^n}-linear, so its F_{q^n}-span has the same size.
    assert dual.r == n - C.r
    return dual


def bilinear(f: LinearizedPoly, g: LinearizedPoly) -> int:
    t = f.tower
    F = t.fqn
    acc = 0
    for a, b in zip(f.coeffs, g.coeffs):
        acc = F.add(acc, F.mul(a, b))
    return t.trace(acc)


def normalized_dual(C: RankMetricCode) -> RankMetricCode:
    """Dual generators ``x^(q^s) - sum_l g_{l,s} x^(q^(t_l))`` from the rref form."""
    t = C.tower
    F = t.fqn
    n = t.n
    T = C.pivots
    S = [j for j in range(n) if j not in set(T)]
    gens = []
    for s in S:
        c = [0] * n
        c[s] = 1
        for l, tl in enumerate(T):
            c[tl] = F.neg(C.canonical[l][s])
        gens.append(c)
    return RankMetricCode(t, gens)


@dataclass
class DualIdentificationReport:
    gamma_matches: bool
    gamma_perp_matches: bool
    gamma_perp_closed_form: bool
    direct_projection_matches: bool
    dual_module_matches: bool

    @property
    def ok(self) -> bool:
        return all(vars(self).values())

    def to_json(self) -> dict:
        out = dict(vars(self))
        out["ok"] = self.ok
        return out


def dual_code_identification(C: RankMetricCode, cap=DEFAULT_ENUM_CAP, workers=1) -> DualIdentificationReport:
    """Compare the subspace dual of U_C with U_{C^perp} in the coordinates of the code.

    The ambient F_{q^n}^n is spanned by ``w_j = (b_j, b_j^q, ..., b_j^(q^(n-1)))``
    for the power basis b_j.  In it, Gamma is read off the rref generators of C,
    and the dual is projected along Gamma^perp onto the coordinates outside the
    pivot set.  The dual module's result, computed with the trace Gram matrix
    as the form, is carried into the same coordinates and compared as well.
    """
    t = C.tower
    F = t.fqn
    n, r = t.n, C.r
    if n <= r:
        raise DimensionTooSmall(f"need n > r, got n={n}, r={r}")
    hs = C.canonical_generators()
    Tset = list(C.pivots)
    S = [j for j in range(n) if j not in set(Tset)]
    g = C.canonical
    pb = t.power_basis()

    # Gamma in code coordinates: x_{t_l} = -sum_{j not in T} g_{l,j} x_j
    gamma_code = []
    for j in S:
        v = [0] * n
        v[j] = 1
        for l, tl in enumerate(Tset):
            v[tl] = F.neg(g[l][j])
        gamma_code.append(v)
    std = linalg.identity(n)
    perp_code = orthogonal_complement(gamma_code, std, F, n)
    closed = []
    for l, tl in enumerate(Tset):
        v = [0] * n
        v[tl] = 1
        for j in S:
            v[j] = g[l][j]
        closed.append(v)
    perp_closed = linalg.rref(perp_code, F, n) == linalg.rref(closed, F, n)

    def project(x):
        # subtract the Gamma^perp vector agreeing with x on the pivot coordinates
        out = []
        for j in S:
            y = x[j]
            for l, tl in enumerate(Tset):
                if x[tl] and g[l][j]:
                    y = F.sub(y, F.mul(x[tl], g[l][j]))
            out.append(y)
        return out

    M = [[t.frobenius(b, i) for i in range(n)] for b in pb]
    dual_code = normalized_dual(C)
    # the h'_s themselves, in the order of S, not their rref
    target = code_to_subspace(dual_code, dual_code.generators)
    direct = FqSubspace.span(t, n - r, [project(w) for w in M]) == target

    U = code_to_subspace(C, hs)
    ctx = dual_context(U, form=trace_gram(t), basis=[list(v) for v in U.basis], cap=cap, workers=workers)
    gamma_ok = linalg.rref(linalg.mat_mul(ctx.gamma, M, F), F, n) == linalg.rref(gamma_code, F, n)
    perp_ok = linalg.rref(linalg.mat_mul(ctx.gamma_perp, M, F), F, n) == linalg.rref(perp_code, F, n)
    lifted = []
    for y in ctx.dual.basis:
        x = [0] * n
        for c, val in zip(ctx.complement, y):
            x[c] = val
        lifted.append(project(linalg.vec_mat(x, M, F)))
    via_dual = FqSubspace.span(t, n - r, lifted) == target
    return DualIdentificationReport(gamma_ok, perp_ok, perp_closed, direct, via_dual)


def monomial_equivalence_probe(C1: RankMetricCode, C2: RankMetricCode):
    """Search ``phi1 = a x^(q^i)``, ``phi2 = b x^(q^j)`` with phi1 o C1 o phi2 = C2.

    Diagnostic only: a ``None`` result does not prove inequivalence.
    """
    t = C1.tower
    if C2.tower != t or C1.r != C2.r:
        return None
    basis = C1.fq_basis()
    for i in range(t.n):
        for j in range(t.n):
            for a in range(1, t.order):
                phi1 = monomial(t, i, a)
                for b in range(1, t.order):
                    phi2 = monomial(t, j, b)
                    if all(C2.contains(compose(phi1, compose(f, phi2))) for f in basis):
                        return phi1, phi2
    return None


# -- serialization ---------------------------------------------------------------------------


def code_to_json(C: RankMetricCode) -> dict:
    out = dict(C.tower.to_json())
    out["generators"] = [[C.tower.to_nested(a) for a in f.coeffs] for f in C.generators]
    return out


def code_from_json(data: dict) -> RankMetricCode:
    tower = FieldTower.from_json(data)
    return RankMetricCode(tower, [[tower.from_nested(a) for a in f] for f in data["generators"]])
