"""Linear sets L_U of PG(r-1, q^n) and brute-force checks of their uniqueness properties."""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import linalg
from .errors import CapExceeded, EnumerationTooLarge, InputError
from .subspace import DEFAULT_ENUM_CAP, FqSubspace, is_h_scattered, scalar_multiple

DEFAULT_SEARCH_CAP = 200_000


def normalize(v, F) -> tuple:
    """Projective representative with first nonzero coordinate 1."""
    for x in v:
        if x:
            c = F.inv(x)
            return tuple(F.mul(c, y) for y in v)
    raise InputError("the zero vector has no projective point")


def _log_q(m: int, q: int) -> int:
    w = 0
    while m > 1:
        m, rem = divmod(m, q)
        if rem:
            raise ValueError("not a power of q")
        w += 1
    return w


@dataclass
class LinearSet:
    tower: object
    r: int
    points: list
    weights: dict

    def __len__(self):
        return len(self.points)

    @property
    def rank(self) -> int:
        q = self.tower.q
        return _log_q(sum(q**w - 1 for w in self.weights.values()) + 1, q)

    def point_set(self) -> frozenset:
        return frozenset(self.points)

    def weight_identity_holds(self, k: int) -> bool:
        q = self.tower.q
        return sum((q**w - 1) // (q - 1) for w in self.weights.values()) == (q**k - 1) // (q - 1)

    def to_json(self) -> dict:
        t = self.tower
        out = dict(t.to_json())
        out["r"] = self.r
        out["points"] = [
            {"coords": [t.to_nested(x) for x in P], "weight": self.weights[P]} for P in self.points
        ]
        return out


def _point_counts(vectors, F):
    counts = {}
    for v in vectors:
        if any(v):
            P = normalize(v, F)
            counts[P] = counts.get(P, 0) + 1
    return counts


def linear_set(U: FqSubspace, cap=DEFAULT_ENUM_CAP) -> LinearSet:
    q = U.tower.q
    if q**U.k > cap:
        raise EnumerationTooLarge(f"{q ** U.k} vectors exceeds cap {cap}")
    counts = _point_counts(U.elements(), U.tower.fqn)
    weights = {P: _log_q(c + 1, q) for P, c in counts.items()}
    return LinearSet(U.tower, U.r, sorted(weights), weights)


def linear_set_image(L: LinearSet, A, frob: int = 0) -> LinearSet:
    """Image of L under the collineation induced by ``v -> v^(q^frob) A``."""
    F = L.tower.fqn
    weights = {}
    for P, w in L.weights.items():
        image = linalg.vec_mat([L.tower.frobenius(x, frob) for x in P], A, F)
        weights[normalize(image, F)] = w
    return LinearSet(L.tower, L.r, sorted(weights), weights)


# -- exhaustive search for subspaces defining a given linear set ------------------


def _span_with(W: frozenset, v, tower):
    """Nonzero vectors of span(W, v) as a frozenset."""
    F = tower.fqn
    multiples = [tuple(F.mul(c, x) for x in v) for c in range(1, tower.q)]
    out = set(W)
    out.update(multiples)
    for w in W:
        for m in multiples:
            out.add(tuple(F.add(a, b) for a, b in zip(w, m)))
    return frozenset(out)


def subspaces_in_fibers(L: LinearSet, cap=DEFAULT_SEARCH_CAP):
    """Every nonzero F_q-subspace whose vectors lie on the fibers of L's points.

    Returned as frozensets of nonzero vectors.  Any W with ``L_W = L`` is
    among them, since each vector of W lies on a point of L.
    """
    tower = L.tower
    F = tower.fqn
    support = set()
    for P in L.points:
        for lam in range(1, tower.order):
            support.add(tuple(F.mul(lam, x) for x in P))
    candidates = sorted(support)
    seen = set()
    level = set()
    for v in candidates:
        level.add(_span_with(frozenset(), v, tower))
    while level:
        seen |= level
        if len(seen) > cap:
            raise CapExceeded(f"more than {cap} candidate subspaces")
        nxt = set()
        for W in level:
            for v in candidates:
                if v in W:
                    continue
                S = _span_with(W, v, tower)
                if S in seen or S in nxt:
                    continue
                if S <= support:
                    nxt.add(S)
        level = nxt
    return seen


def _require_line_scattered(U, cap, workers):
    verdict = is_h_scattered(U, 2, cap=cap, workers=workers)
    if not verdict:
        raise InputError(f"U is not scattered with respect to lines ({verdict.reason})")


def _matching_subspaces(U: FqSubspace, search_cap):
    L = linear_set(U)
    target = L.point_set()
    F = U.tower.fqn
    out = []
    for S in subspaces_in_fibers(L, cap=search_cap):
        if frozenset(_point_counts(S, F)) == target:
            out.append(FqSubspace.span(U.tower, U.r, sorted(S)))
    return sorted(set(out), key=lambda W: W.canonical)


def check_rank_uniqueness(U: FqSubspace, search_cap=DEFAULT_SEARCH_CAP, cap=DEFAULT_ENUM_CAP, workers=1) -> bool:
    """Whether every W with ``L_W = L_U`` has the dimension of U."""
    _require_line_scattered(U, cap, workers)
    return all(W.k == U.k for W in _matching_subspaces(U, search_cap))


def defining_subspaces(U: FqSubspace, search_cap=DEFAULT_SEARCH_CAP, cap=DEFAULT_ENUM_CAP, workers=1):
    """All W with ``L_W = L_U``; for U scattered w.r.t. lines these are the lambda U."""
    _require_line_scattered(U, cap, workers)
    found = _matching_subspaces(U, search_cap)
    multiples = {scalar_multiple(lam, U) for lam in range(1, U.tower.order)}
    assert set(found) == multiples, "found subspaces other than the scalar multiples of U"
    return found


# -- the two-dimensional case ---------------------------------------------------------


def _all_subspaces_r2(tower):
    """Every F_q-subspace of F_{q^n}^2, including 0, as lists of basis vectors."""
    width = 2 * tower.n
    for d in range(width + 1):
        for _, rows in linalg.iter_rref_subspaces(tower.fq, width, d):
            yield [linalg.unflatten(row, tower) for row in rows]


def _random_subspaces_r2(tower, samples, rng):
    width = 2 * tower.n
    for _ in range(samples):
        d = rng.randint(1, width)
        rows = [[rng.randrange(tower.q) for _ in range(width)] for _ in range(d)]
        rows = linalg.rref(rows, tower.fq, width)
        yield [linalg.unflatten(row, tower) for row in rows]


def bp0_checks(tower, samples: int = 500, seed: int = 0, exhaustive: bool = False) -> dict:
    """Check, on subspaces of F_{q^n}^2, the two facts about linear sets of size q + 1.

    1. ``|L_U| = q + 1`` forces ``dim U = 2``.
    2. ``L_U = L_W`` of size q + 1 and ``U & W != 0`` force ``U = W``.
    """
    q = tower.q
    if exhaustive:
        source = _all_subspaces_r2(tower)
    else:
        source = _random_subspaces_r2(tower, samples, random.Random(seed))
    examined = 0
    size_q1 = 0
    part1 = []
    groups = {}
    for basis in source:
        examined += 1
        U = FqSubspace(tower, 2, basis)
        elems = list(U.elements())
        points = frozenset(_point_counts(elems, tower.fqn))
        if len(points) != q + 1:
            continue
        size_q1 += 1
        if U.k != 2:
            part1.append([[tower.to_nested(x) for x in v] for v in U.basis])
        groups.setdefault(points, []).append((U, frozenset(v for v in elems if any(v))))
    part2 = []
    pairs = 0
    same_set = 0
    for members in groups.values():
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                (U, su), (W, sw) = members[i], members[j]
                same_set += 1
                if su & sw:
                    pairs += 1
                    if U != W:
                        part2.append([U.canonical, W.canonical])
    return {
        "mode": "exhaustive" if exhaustive else "sampled",
        "examined": examined,
        "size_q_plus_1": size_q1,
        "same_set_pairs": same_set,
        "intersecting_pairs": pairs,
        "part1_violations": part1,
        "part2_violations": [[list(map(list, a)), list(map(list, b))] for a, b in part2],
        "ok": not part1 and not part2,
    }
