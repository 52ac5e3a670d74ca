"""F_q-subspaces of V = F_{q^n}^r and their h-scatteredness.

A subspace U is stored by an F_q-basis of vectors over F_{q^n}.  Its
canonical form is the rref of the flattened k x rn matrix over F_q, which is
what equality and hashing use.

Intersections with F_{q^n}-subspaces are never formed explicitly: if W is cut
out by covectors a_1..a_m, then ``dim_q(U & W) = k - rank_q{(a_j . u)_j}``
taken over the basis vectors u of U.
"""

from __future__ import annotations

import csv
import io
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import (
    BadH,
    BadParams,
    DependentRows,
    EnumerationTooLarge,
    InputError,
    NotMaximum,
    SearchExhausted,
    TowerMismatch,
    ZeroScalar,
)
from .gf import FieldTower

DEFAULT_ENUM_CAP = 2**20


@dataclass(frozen=True, eq=False)
class FqSubspace:
    tower: FieldTower
    r: int
    basis: tuple
    canonical: tuple = field(init=False, repr=False)

    def __post_init__(self):
        basis = tuple(tuple(v) for v in self.basis)
        object.__setattr__(self, "basis", basis)
        Q = self.tower.order
        for v in basis:
            if len(v) != self.r or any(not 0 <= x < Q for x in v):
                raise InputError("basis vector has the wrong length or entries")
        flat = [linalg.flatten(v, self.tower) for v in basis]
        canon = linalg.rref(flat, self.tower.fq, self.r * self.tower.n)
        if len(canon) != len(basis):
            raise DependentRows("basis rows are F_q-dependent")
        object.__setattr__(self, "canonical", tuple(tuple(row) for row in canon))

    @classmethod
    def span(cls, tower, r, vectors) -> "FqSubspace":
        """The F_q-span of arbitrary vectors, with its canonical basis."""
        flat = [linalg.flatten(v, tower) for v in vectors]
        canon = linalg.rref(flat, tower.fq, r * tower.n)
        return cls(tower, r, [linalg.unflatten(row, tower) for row in canon])

    @property
    def k(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        return (
            isinstance(other, FqSubspace)
            and other.tower == self.tower
            and other.r == self.r
            and other.canonical == self.canonical
        )

    def __hash__(self):
        return hash((self.tower, self.r, self.canonical))

    def canonical_basis(self):
        return [linalg.unflatten(list(row), self.tower) for row in self.canonical]

    def elements(self):
        """All q^k vectors of U, as tuples."""
        F = self.tower.fqn
        for coeffs in linalg.all_vectors(self.tower.fq, self.k):
            v = [0] * self.r
            for c, u in zip(coeffs, self.basis):
                if c:
                    v = [F.add(a, F.mul(c, b)) for a, b in zip(v, u)]
            yield tuple(v)

    def contains(self, v) -> bool:
        flat = [list(row) for row in self.canonical] + [linalg.flatten(v, self.tower)]
        return linalg.rank(flat, self.tower.fq) == self.k


def subgeometry(tower, r) -> FqSubspace:
    """F_q^r inside F_{q^n}^r, spanned by the standard basis."""
    return FqSubspace(tower, r, linalg.identity(r))


def fqn_span_dim(U: FqSubspace) -> int:
    return linalg.rank([list(v) for v in U.basis], U.tower.fqn)


def meet_dim(U: FqSubspace, annihilator) -> int:
    """dim_q of U intersected with the F_{q^n}-subspace cut out by ``annihilator``."""
    return U.k - _image_rank(U.basis, annihilator, U.tower)


def _image_rank(basis, annihilator, tower):
    F = tower.fqn
    mul, add = F.mul, F.add
    Q = tower.order
    packed = []
    for u in basis:
        x = 0
        for a in reversed(annihilator):
            y = 0
            for ac, uc in zip(a, u):
                if ac and uc:
                    y = add(y, mul(ac, uc))
            x = x * Q + y
        packed.append(x)
    return linalg.rank_packed(packed, tower.fq, len(annihilator) * tower.n)


def subspace_count(U: FqSubspace, h: int) -> int:
    return linalg.gaussian_binomial(U.r, h, U.tower.order)


def _check_h(U_or_r, h):
    r = U_or_r.r if isinstance(U_or_r, FqSubspace) else U_or_r
    if not 1 <= h <= r - 1:
        raise BadH(f"h must lie in [1, {r - 1}], got {h}")


# -- chunked scans, optionally across worker processes ------------------------


def _chunks(total, workers):
    parts = 1 if workers <= 1 else min(total, 4 * workers) or 1
    bounds = [total * i // parts for i in range(parts + 1)]
    return [(bounds[i], bounds[i + 1]) for i in range(parts) if bounds[i] < bounds[i + 1]]


def _map(fn, jobs, workers):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, jobs))


def _first_violation(job):
    U, h, start, stop = job
    F = U.tower.fqn
    r = U.r
    pivots_cache = {}
    for index, rows in linalg.iter_rref_subspaces(F, r, h, start, stop):
        key = tuple(row.index(1) for row in rows)
        pivots = pivots_cache.setdefault(key, list(key))
        annih = linalg.rref_annihilator(rows, pivots, F, r)
        if U.k - _image_rank(U.basis, annih, U.tower) > h:
            return index
    return None


def _spectrum_chunk(job):
    U, start, stop = job
    F = U.tower.fqn
    counts = {}
    for _, rows in linalg.iter_rref_subspaces(F, U.r, 1, start, stop):
        i = U.k - _image_rank(U.basis, rows, U.tower)
        counts[i] = counts.get(i, 0) + 1
    return counts


def first_violation(U: FqSubspace, h: int, cap=DEFAULT_ENUM_CAP, workers=1):
    """Index and rref basis of the first h-space meeting U in dim > h, if any.

    The spanning condition is not examined here.
    """
    total = subspace_count(U, h)
    if total > cap:
        raise EnumerationTooLarge(f"{total} subspaces to enumerate exceeds cap {cap}")
    if U.k <= h:
        return None
    found = [
        i
        for i in _map(_first_violation, [(U, h, a, b) for a, b in _chunks(total, workers)], workers)
        if i is not None
    ]
    if not found:
        return None
    index = min(found)
    _, rows = next(linalg.iter_rref_subspaces(U.tower.fqn, U.r, h, index, index + 1))
    return index, rows


@dataclass
class ScatterVerdict:
    ok: bool
    h: int
    k: int
    reason: str | None = None
    witness: list | None = None
    witness_index: int | None = None
    witness_meet_dim: int | None = None

    def __bool__(self):
        return self.ok

    def to_json(self, tower=None) -> dict:
        out = {
            "ok": self.ok,
            "h": self.h,
            "k": self.k,
            "reason": self.reason,
            "witness_index": self.witness_index,
            "witness_meet_dim": self.witness_meet_dim,
        }
        if self.witness is not None and tower is not None:
            out["witness"] = [[tower.to_nested(x) for x in row] for row in self.witness]
        return out


def is_h_scattered(U: FqSubspace, h: int, cap=DEFAULT_ENUM_CAP, workers=1) -> ScatterVerdict:
    """Decide h-scatteredness by enumerating every h-dimensional F_{q^n}-subspace.

    A false verdict carries either the first violating subspace in enumeration
    order (as an rref basis over F_{q^n}) or the reason ``"not spanning"``.
    """
    _check_h(U, h)
    total = subspace_count(U, h)
    if total > cap:
        raise EnumerationTooLarge(f"{total} subspaces to enumerate exceeds cap {cap}")
    if fqn_span_dim(U) != U.r:
        return ScatterVerdict(False, h, U.k, reason="not spanning")
    hit = first_violation(U, h, cap=cap, workers=workers)
    if hit is None:
        return ScatterVerdict(True, h, U.k)
    index, rows = hit
    pivots = [row.index(1) for row in rows]
    annih = linalg.rref_annihilator(rows, pivots, U.tower.fqn, U.r)
    return ScatterVerdict(
        False,
        h,
        U.k,
        reason="intersection too large",
        witness=rows,
        witness_index=index,
        witness_meet_dim=meet_dim(U, annih),
    )


def is_h_scattered_by_subsets(U: FqSubspace, h: int, cap=DEFAULT_ENUM_CAP) -> bool:
    """Same decision as ``is_h_scattered``, enumerating inside U instead of V.

    U is h-scattered iff it spans V and every (h+1)-dimensional F_q-subspace
    of U spans an (h+1)-dimensional F_{q^n}-space.  This is the cheaper route
    when U is small and q^n is large.  No witness is produced.
    """
    _check_h(U, h)
    total = linalg.gaussian_binomial(U.k, h + 1, U.tower.q)
    if total > cap:
        raise EnumerationTooLarge(f"{total} subspaces of U to enumerate exceeds cap {cap}")
    if fqn_span_dim(U) != U.r:
        return False
    F = U.tower.fqn
    basis = [list(v) for v in U.basis]
    for _, coeffs in linalg.iter_rref_subspaces(U.tower.fq, U.k, h + 1):
        rows = [linalg.vec_mat(c, basis, F) for c in coeffs]
        if linalg.rank(rows, F) <= h:
            return False
    return True


# -- dimension bound ------------------------------------------------------------


@dataclass(frozen=True)
class DimensionBound:
    bound: Fraction
    subgeometry_exception_dim: int


def dimension_bound(r: int, n: int, h: int) -> DimensionBound:
    _check_h(r, h)
    return DimensionBound(Fraction(r * n, h + 1), r)


def classify_bound(U: FqSubspace, h: int) -> str:
    """Which branch of the dimension bound a verified h-scattered U falls in."""
    b = dimension_bound(U.r, U.tower.n, h)
    if U.k == b.subgeometry_exception_dim:
        return "subgeometry"
    if U.k <= b.bound:
        return "within-bound"
    return "violates"


# -- constructions ---------------------------------------------------------------


def gabidulin_subspace(tower, r: int, sub_dim: int | None = None) -> FqSubspace:
    """``{(x, x^q, ..., x^(q^(r-1)))}``, or the span of the first ``sub_dim`` images."""
    n = tower.n
    if r < 1 or n < r:
        raise BadParams(f"need 1 <= r <= n, got r={r}, n={n}")
    if sub_dim is not None and not r <= sub_dim <= n:
        raise BadParams(f"sub_dim must lie in [{r}, {n}], got {sub_dim}")
    elems = tower.power_basis()[: n if sub_dim is None else sub_dim]
    return FqSubspace(tower, r, [[tower.frobenius(b, j) for j in range(r)] for b in elems])


def direct_sum(parts) -> FqSubspace:
    parts = list(parts)
    if not parts:
        raise BadParams("direct sum of nothing")
    tower = parts[0].tower
    if any(P.tower != tower for P in parts):
        raise TowerMismatch("parts live over different towers")
    r = sum(P.r for P in parts)
    rows = []
    offset = 0
    for P in parts:
        for v in P.basis:
            row = [0] * r
            row[offset : offset + P.r] = v
            rows.append(row)
        offset += P.r
    return FqSubspace(tower, r, rows)


def scalar_multiple(lam: int, U: FqSubspace) -> FqSubspace:
    if lam == 0:
        raise ZeroScalar("scalar must be nonzero")
    F = U.tower.fqn
    return FqSubspace(U.tower, U.r, [[F.mul(lam, x) for x in v] for v in U.basis])


def apply_semilinear(U: FqSubspace, A, frob: int = 0) -> FqSubspace:
    """Image of U under ``v -> v^(q^frob) A`` for an invertible r x r matrix A."""
    F = U.tower.fqn
    rows = [linalg.vec_mat([U.tower.frobenius(x, frob) for x in v], A, F) for v in U.basis]
    return FqSubspace(U.tower, U.r, rows)


# -- hyperplane spectrum -------------------------------------------------------------


@dataclass
class HyperplaneSpectrum:
    counts: dict
    r: int
    n: int
    q: int
    k: int

    def __post_init__(self):
        self.counts = {int(i): int(c) for i, c in sorted(self.counts.items()) if c}

    def get(self, i: int) -> int:
        return self.counts.get(i, 0)

    def total(self) -> int:
        return sum(self.counts.values())

    def expected_total(self) -> int:
        return (self.q ** (self.r * self.n) - 1) // (self.q**self.n - 1)

    def satisfies_count_identity(self) -> bool:
        return self.total() * (self.q**self.n - 1) == self.q ** (self.r * self.n) - 1

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "n": self.n,
            "q": self.q,
            "k": self.k,
            "counts": {str(i): c for i, c in self.counts.items()},
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# r={self.r}\n# n={self.n}\n# q={self.q}\n# k={self.k}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "h_i"])
        for i, c in self.counts.items():
            w.writerow([i, c])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "HyperplaneSpectrum":
        params = {}
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition("=")
                params[key.strip()] = int(val)
            else:
                rows.append(line)
        reader = csv.reader(rows)
        header = next(reader)
        if [h.strip() for h in header] != ["i", "h_i"]:
            raise InputError("spectrum CSV must have columns i,h_i")
        counts = {int(i): int(c) for i, c in reader}
        try:
            return cls(counts, params["r"], params["n"], params["q"], params["k"])
        except KeyError as exc:
            raise InputError(f"spectrum CSV lacks parameter {exc}") from None


def hyperplane_spectrum(U: FqSubspace, cap=DEFAULT_ENUM_CAP, workers=1) -> HyperplaneSpectrum:
    """Count hyperplanes of V by the F_q-dimension of their meet with U."""
    if U.r < 2:
        raise BadParams("hyperplane spectrum needs r >= 2")
    total = linalg.gaussian_binomial(U.r, 1, U.tower.order)
    if total > cap:
        raise EnumerationTooLarge(f"{total} hyperplanes exceeds cap {cap}")
    counts = {}
    for part in _map(_spectrum_chunk, [(U, a, b) for a, b in _chunks(total, workers)], workers):
        for i, c in part.items():
            counts[i] = counts.get(i, 0) + c
    spec = HyperplaneSpectrum(counts, U.r, U.tower.n, U.tower.q, U.k)
    assert spec.total() == total
    return spec


def intersection_window(r: int, n: int, h: int) -> tuple[int, int]:
    k = Fraction(r * n, h + 1)
    return k - n, k - n + h


def check_intersection_window(spec: HyperplaneSpectrum, h: int) -> bool:
    if spec.k * (h + 1) != spec.r * spec.n:
        raise NotMaximum(f"k = {spec.k} differs from rn/(h+1) = {Fraction(spec.r * spec.n, h + 1)}")
    lo, hi = intersection_window(spec.r, spec.n, h)
    return all(lo <= i <= hi for i in spec.counts)


# -- randomized search ---------------------------------------------------------------


def _random_vector(rng, tower, r):
    while True:
        v = [rng.randrange(tower.order) for _ in range(r)]
        if any(v):
            return v


def search_scattered(
    tower,
    r: int,
    h: int,
    target_dim: int,
    seed: int = 0,
    restarts: int = 20,
    tries: int = 200,
    cap=DEFAULT_ENUM_CAP,
    workers=1,
) -> FqSubspace:
    """Greedy random growth of an h-scattered subspace of dimension ``target_dim``.

    Random vectors are added one at a time and rejected when some h-space would
    meet the span in more than h dimensions.  Deterministic given ``seed``.
    """
    _check_h(r, h)
    bound = dimension_bound(r, tower.n, h).bound
    if target_dim > bound and target_dim != r:
        raise BadParams(f"target {target_dim} exceeds the bound {bound}")
    rng = random.Random(seed)
    for _ in range(restarts):
        basis = []
        while len(basis) < target_dim:
            for _ in range(tries):
                v = _random_vector(rng, tower, r)
                if basis and FqSubspace(tower, r, basis).contains(v):
                    continue
                cand = FqSubspace(tower, r, basis + [v])
                if cand.k <= h or first_violation(cand, h, cap=cap, workers=workers) is None:
                    basis.append(v)
                    break
            else:
                break
        if len(basis) == target_dim:
            U = FqSubspace(tower, r, basis)
            if is_h_scattered(U, h, cap=cap, workers=workers):
                return U
    raise SearchExhausted(f"no {h}-scattered subspace of dimension {target_dim} found")


# -- serialization ---------------------------------------------------------------------


def subspace_to_json(U: FqSubspace, provenance: dict | None = None) -> dict:
    out = dict(U.tower.to_json())
    out["r"] = U.r
    out["basis"] = [[U.tower.to_nested(x) for x in v] for v in U.basis]
    if provenance is not None:
        out["provenance"] = provenance
    return out


def subspace_from_json(data: dict, cap=None) -> FqSubspace:
    kwargs = {} if cap is None else {"cap": cap}
    tower = FieldTower.from_json(data, **kwargs)
    basis = [[tower.from_nested(x) for x in v] for v in data["basis"]]
    return FqSubspace(tower, data["r"], basis)
