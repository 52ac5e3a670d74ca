"""Exact q-combinatorics and the hyperplane-spectrum identity pipeline.

Every quantity is a ``Fraction`` (or int), so negative powers of q are exact.
Identities are verified by evaluation at integer q, never symbolically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import NotMaximum


def _F(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def qpow(q, m) -> Fraction:
    return _F(q) ** m


def qbin(n: int, k: int, q) -> Fraction:
    """Gaussian binomial coefficient."""
    q = _F(q)
    if k == 0:
        return Fraction(1)
    if k > n or k < 0:
        return Fraction(0)
    num = Fraction(1)
    den = Fraction(1)
    for i in range(k):
        num *= 1 - q ** (n - i)
        den *= 1 - q ** (k - i)
    return num / den


def qpochhammer(a, q, k: int) -> Fraction:
    """``(a; q)_k = (1 - a)(1 - aq)...(1 - aq^(k-1))``."""
    a, q = _F(a), _F(q)
    out = Fraction(1)
    for i in range(k):
        out *= 1 - a * q**i
    return out


def elementary_symmetric(values, l: int) -> Fraction:
    """e_l of ``values`` through the usual one-variable-at-a-time recurrence."""
    e = [Fraction(1)] + [Fraction(0)] * l
    for x in values:
        for j in range(l, 0, -1):
            e[j] += x * e[j - 1]
    return e[l]


def sigma_kl(k: int, l: int, q) -> Fraction:
    """l-th elementary symmetric polynomial evaluated at 1, q, ..., q^k."""
    q = _F(q)
    return elementary_symmetric([q**i for i in range(k + 1)], l)


def sigma_kl_closed(k: int, l: int, q) -> Fraction:
    q = _F(q)
    return q ** (l * (l - 1) // 2) * qbin(k + 1, l, q)


def sigma_kl_literal(k: int, l: int, q) -> Fraction:
    """Sum over all l-subsets of exponents; exponential, for tests."""
    q = _F(q)
    return sum((q ** sum(c) for c in combinations(range(k + 1), l)), Fraction(0))


def carlitz_pair(a, q):
    """``b_k = sum_j (-1)^j q^(j(j+1)/2 - jk) [k, j] a_j``."""
    q = _F(q)
    return [
        sum(
            ((-1) ** j * q ** (j * (j + 1) // 2 - j * k) * qbin(k, j, q) * _F(a[j]) for j in range(k + 1)),
            Fraction(0),
        )
        for k in range(len(a))
    ]


def carlitz_inverse(b, q):
    """``a_k = sum_j (-1)^j q^(j(j-1)/2) [k, j] b_j``."""
    q = _F(q)
    return [
        sum(
            ((-1) ** j * q ** (j * (j - 1) // 2) * qbin(k, j, q) * _F(b[j]) for j in range(k + 1)),
            Fraction(0),
        )
        for k in range(len(b))
    ]


# -- classical identities -----------------------------------------------------------


def product_expansion_sides(n: int, q, t):
    """Both sides of ``prod_{j<n} (1 + q^j t) = sum_j q^(j(j-1)/2) [n, j] t^j``."""
    q, t = _F(q), _F(t)
    left = Fraction(1)
    for j in range(n):
        left *= 1 + q**j * t
    right = sum((q ** (j * (j - 1) // 2) * qbin(n, j, q) * t**j for j in range(n + 1)), Fraction(0))
    return left, right


def qbinomial_theorem_sides(n: int, a, b, q, variant: str = "a"):
    """Both sides of the q-binomial theorem in its two forms.

    variant ``"a"``: ``(ab; q)_n = sum b^k [n, k] (a; q)_k (b; q)_{n-k}``;
    variant ``"b"``: the same with ``a^(n-k)`` in place of ``b^k``.
    """
    a, b, q = _F(a), _F(b), _F(q)
    left = qpochhammer(a * b, q, n)
    right = Fraction(0)
    for k in range(n + 1):
        w = b**k if variant == "a" else a ** (n - k)
        right += w * qbin(n, k, q) * qpochhammer(a, q, k) * qpochhammer(b, q, n - k)
    return left, right


def comp_sides(r: int, n: int, s: int, q):
    """Left side and the two specialised right sides with a = q^(-nr/s), b = q^(nr/s - n).

    Returns ``(left, right1, right2)``; ``right2`` already carries its
    ``q^(-nr)`` factor.
    """
    if (r * n) % s:
        raise NotMaximum(f"s = {s} does not divide rn = {r * n}")
    q = _F(q)
    m = r * n // s
    a = q ** (-m)
    b = q ** (m - n)
    left = qpochhammer(q ** (-n), q, s)
    right1 = Fraction(0)
    right2 = Fraction(0)
    for j in range(s + 1):
        common = qbin(s, j, q) * qpochhammer(a, q, j) * qpochhammer(b, q, s - j)
        right1 += q ** (j * (m - n)) * common
        right2 += q ** (j * m) * common
    return left, right1, q ** (-r * n) * right2


def _sample_rationals():
    return [Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(-3, 2), Fraction(5, 7)]


def verify_qbinomial_theorems(n_max: int = 8, q_list=(2, 3, 4, 5), t_samples=None) -> dict:
    """Evaluate the classical q-identities exhaustively on a grid.

    Returns a report with, per identity, the number of instances checked and
    the list of violating parameter tuples.
    """
    t_samples = _sample_rationals() if t_samples is None else [Fraction(t) for t in t_samples]
    report = {}

    def record(name, ok, params):
        entry = report.setdefault(name, {"checked": 0, "violations": []})
        entry["checked"] += 1
        if not ok:
            entry["violations"].append([str(x) for x in params])

    for q in q_list:
        for n in range(n_max + 1):
            for k in range(n + 1):
                record("symmetry", qbin(n, k, q) == qbin(n, n - k, q), (q, n, k))
                for j in range(k + 1):
                    ok = qbin(n, k, q) * qbin(k, j, q) == qbin(n, j, q) * qbin(n - j, k - j, q)
                    record("product", ok, (q, n, k, j))
            for l in range(n + 2):
                record("elementary_symmetric", sigma_kl(n, l, q) == sigma_kl_closed(n, l, q), (q, n, l))
            for t in t_samples:
                left, right = product_expansion_sides(n, q, t)
                record("product_expansion", left == right, (q, n, t))
            for a in t_samples:
                for b in t_samples:
                    for variant in ("a", "b"):
                        left, right = qbinomial_theorem_sides(n, a, b, q, variant)
                        record(f"qbinomial_{variant}", left == right, (q, n, a, b))
            for r in range(1, n_max + 1):
                for s in range(1, r + 1):
                    if n == 0 or (r * n) % s:
                        continue
                    left, right1, right2 = comp_sides(r, n, s, q)
                    record("comp1", left == right1, (q, r, n, s))
                    record("comp2", left == right2, (q, r, n, s))
    report["ok"] = all(not v["violations"] for v in report.values() if isinstance(v, dict))
    return report


# -- the spectrum pipeline ------------------------------------------------------------


def beta_closed(k: int, r: int, n: int, s: int, q) -> Fraction:
    """Count of spanning point tuples in hyperplanes: (q^((r-k)n) - 1) prod_{j<k} (q^(rn/s) - q^j)."""
    q = _F(q)
    m = r * n // s
    out = q ** ((r - k) * n) - 1
    for j in range(k):
        out *= q**m - q**j
    return out


def a_s_sum(r: int, n: int, s: int, q) -> Fraction:
    return _triple_sum(r, n, s, q, weighted=True)


def b_s_sum(r: int, n: int, s: int, q) -> Fraction:
    return _triple_sum(r, n, s, q, weighted=False)


def _triple_sum(r, n, s, q, weighted):
    q = _F(q)
    total = Fraction(0)
    for j in range(s + 1):
        inner = Fraction(0)
        for k in range(s + 1):
            for t in range(s + 1):
                c = qbin(s, k, q) * qbin(k, j, q) * qbin(j, t, q)
                if not c:
                    continue
                e = Fraction(r * n * j - r * n * t + (s - k) * n * (r - s), s)
                e += Fraction((s - k - 1) * (s - k), 2) + Fraction((t - 1) * t, 2)
                assert e.denominator == 1
                inner += (-1) ** (t + k) * q ** int(e) * c
        total += (q ** (n * r - n * j) if weighted else 1) * inner
    return total


def a_s_closed(r: int, n: int, s: int, q) -> Fraction:
    q = _F(q)
    return q ** (n * r) * (-1) ** s * qpochhammer(q ** (-n), q, s)


@dataclass
class SpectrumReport:
    r: int
    n: int
    s: int
    q: int
    k: int
    spectrum: dict
    alpha: list = field(default_factory=list)
    alpha_from_beta: list = field(default_factory=list)
    beta: list = field(default_factory=list)
    beta_closed: list = field(default_factory=list)
    A: Fraction = Fraction(0)
    A_from_alpha: Fraction = Fraction(0)
    A_triple: Fraction = Fraction(0)
    a_s: Fraction = Fraction(0)
    b_s: Fraction = Fraction(0)
    a_s_closed: Fraction = Fraction(0)
    verdicts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def to_json(self) -> dict:
        def fr(x):
            return str(x)

        return {
            "r": self.r,
            "n": self.n,
            "s": self.s,
            "h": self.s - 1,
            "q": self.q,
            "k": self.k,
            "spectrum": {str(i): c for i, c in sorted(self.spectrum.items())},
            "alpha": [fr(x) for x in self.alpha],
            "alpha_from_beta": [fr(x) for x in self.alpha_from_beta],
            "beta": [fr(x) for x in self.beta],
            "beta_closed": [fr(x) for x in self.beta_closed],
            "A": fr(self.A),
            "A_from_alpha": fr(self.A_from_alpha),
            "A_triple": fr(self.A_triple),
            "a_s": fr(self.a_s),
            "b_s": fr(self.b_s),
            "a_s_closed": fr(self.a_s_closed),
            "window": [self.k - self.n, self.k - self.n + self.s - 1],
            "verdicts": dict(self.verdicts),
            "ok": self.ok,
        }


def spectrum_identities(spec, h: int) -> SpectrumReport:
    """Run every counting identity on the hyperplane spectrum of a maximum subspace.

    ``spec`` is a HyperplaneSpectrum (anything with ``counts, r, n, q, k``).
    Failures are recorded in ``verdicts`` rather than raised.
    """
    r, n, q, k = spec.r, spec.n, spec.q, spec.k
    s = h + 1
    if (r * n) % s or k * s != r * n:
        raise NotMaximum(f"k = {k} differs from rn/s = {Fraction(r * n, s)}")
    Q = Fraction(q)
    counts = dict(spec.counts)
    qn1 = Q**n - 1
    m = k  # rn/s
    base = m - n  # n(r - s)/s

    verdicts = {}
    verdicts["count_identity"] = sum(c * qn1 for c in counts.values()) == Q ** (r * n) - 1
    verdicts["vanishing_below_window"] = all(i >= base for i, c in counts.items() if c)

    beta = []
    for kk in range(s + 1):
        total = Fraction(0)
        for i, c in counts.items():
            prod = Fraction(1)
            for j in range(kk):
                prod *= Q**i - Q**j
            total += c * qn1 * prod
        beta.append(total)
    beta_cf = [beta_closed(kk, r, n, s, Q) for kk in range(s + 1)]
    verdicts["beta_matches_closed_form"] = beta == beta_cf

    alpha = [sum((c * qn1 * Q ** (kk * i) for i, c in counts.items()), Fraction(0)) for kk in range(s + 1)]
    alpha_from_beta = [sum((qbin(kk, j, Q) * beta_cf[j] for j in range(kk + 1)), Fraction(0)) for kk in range(s + 1)]
    verdicts["alpha_from_beta"] = alpha == alpha_from_beta

    target = [(-1) ** kk * Q ** (-(kk * (kk - 1) // 2)) * beta_cf[kk] for kk in range(s + 1)]
    verdicts["carlitz_pair"] = carlitz_pair(alpha, Q) == target
    verdicts["carlitz_roundtrip"] = carlitz_inverse(target, Q) == alpha

    A = Fraction(0)
    for i, c in counts.items():
        prod = Fraction(1)
        for j in range(s):
            prod *= Q**i - Q ** (base + j)
        A += c * qn1 * prod
    A_alpha = sum(
        (
            (-1) ** (s - j) * alpha[j] * Q ** ((s - j) * base + (s - j) * (s - j - 1) // 2) * qbin(s, s - j, Q)
            for j in range(s + 1)
        ),
        Fraction(0),
    )
    A_triple = Fraction(0)
    for kk in range(s + 1):
        for j in range(kk + 1):
            for t in range(j + 1):
                e = t * (t - 1) // 2 + m * (j - t) + (s - kk) * base + (s - kk) * (s - kk - 1) // 2
                A_triple += (
                    (Q ** ((r - j) * n) - 1)
                    * Q**e
                    * qbin(s, kk, Q)
                    * qbin(kk, j, Q)
                    * qbin(j, t, Q)
                    * (-1) ** (t + kk + s)
                )
    verdicts["A_direct_zero"] = A == 0
    verdicts["A_from_alpha_zero"] = A_alpha == 0
    verdicts["A_triple_zero"] = A_triple == 0

    a_s = a_s_sum(r, n, s, Q)
    b_s = b_s_sum(r, n, s, Q)
    closed = a_s_closed(r, n, s, Q)
    verdicts["a_s_closed_form"] = a_s == closed
    verdicts["b_s_closed_form"] = b_s == closed

    return SpectrumReport(
        r, n, s, q, k, counts, alpha, alpha_from_beta, beta, beta_cf,
        A, A_alpha, A_triple, a_s, b_s, closed, verdicts,
    )
