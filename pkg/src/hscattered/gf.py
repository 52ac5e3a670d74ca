"""Exact arithmetic in a tower of finite fields F_p < F_q < F_{q^n}.

Elements of every field are plain Python ints.  An element of an extension
of degree d over a base field with B elements is the polynomial
``c_0 + c_1 s + ... + c_{d-1} s^{d-1}`` in a root ``s`` of the modulus and is
encoded as ``c_0 + c_1 B + ... + c_{d-1} B^(d-1)``.  Since F_q elements are
themselves encoded the same way over F_p, an F_{q^n} element is the base-p
integer of its flattened F_p coefficient tuple, and the embedded F_q is
exactly ``range(q)``.

Integer order is the canonical element order: it compares the flattened
coefficient tuple starting from the highest-degree coefficient.
"""

from __future__ import annotations

import functools
from itertools import product

from .errors import DegenerateDegree, DivisionByZero, FieldTooLarge, InputError, NotPrime

DEFAULT_FIELD_CAP = 2**20

# Digit chunks for odd characteristic addition tables are kept below this.
_CHUNK_LIMIT = 2**16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def to_digits(x: int, base: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        x, d = divmod(x, base)
        out.append(d)
    return out


def from_digits(ds, base: int) -> int:
    x = 0
    for d in reversed(ds):
        x = x * base + d
    return x


class PrimeField:
    """The prime field F_p with residues ``0..p-1``."""

    degree = 1

    def __init__(self, p: int):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        self.p = p
        self.char = p
        self.order = p

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def elements(self):
        return range(self.p)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise DivisionByZero("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, m):
        if m < 0:
            return pow(self.inv(a), -m, self.p)
        return pow(a, m, self.p)


# -- polynomials over a field, little-endian coefficient lists ---------------


def poly_trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_mul(F, f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            if b:
                out[i + j] = F.add(out[i + j], F.mul(a, b))
    return poly_trim(out)


def poly_mod(F, f, g):
    """Remainder of ``f`` modulo a nonzero polynomial ``g``."""
    f = poly_trim(f)
    g = poly_trim(g)
    dg = len(g) - 1
    lead_inv = F.inv(g[-1])
    while len(f) - 1 >= dg and f:
        c = F.mul(f[-1], lead_inv)
        shift = len(f) - 1 - dg
        for i, b in enumerate(g):
            f[shift + i] = F.sub(f[shift + i], F.mul(c, b))
        f = poly_trim(f)
    return f


def monic_polys(F, degree: int):
    """Monic polynomials of the given degree in increasing encoding order."""
    for x in range(F.order**degree):
        yield to_digits(x, F.order, degree) + [1]


def is_irreducible(F, f) -> bool:
    """Irreducibility by exhaustive search for a monic factor of degree <= d/2."""
    f = poly_trim(f)
    d = len(f) - 1
    if d < 1:
        return False
    for t in range(1, d // 2 + 1):
        for g in monic_polys(F, t):
            if not poly_mod(F, f, g):
                return False
    return True


def smallest_irreducible(F, degree: int) -> tuple[int, ...]:
    """First monic irreducible of ``degree`` in encoding order.

    The non-leading coefficients are compared as the integer
    ``c_0 + c_1 B + ... + c_{d-1} B^(d-1)``, i.e. starting from the
    highest-degree coefficient.
    """
    for f in monic_polys(F, degree):
        if is_irreducible(F, f):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class _DigitAdder:
    """Digit-wise addition of base-p packed integers."""

    def __init__(self, p: int, ndigits: int):
        self.p = p
        self.ndigits = ndigits
        if p == 2:
            return
        c = 1
        while p ** (2 * (c + 1)) <= _CHUNK_LIMIT and c < ndigits:
            c += 1
        self.chunk = p**c
        self.nchunks = -(-ndigits // c)
        size = self.chunk
        digits = [to_digits(x, p, c) for x in range(size)]
        self._add = [
            from_digits([(u + v) % p for u, v in zip(da, db)], p) for da in digits for db in digits
        ]
        self._neg = [from_digits([-u % p for u in da], p) for da in digits]

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        size = self.chunk
        if self.nchunks == 1:
            return self._add[a * size + b]
        out = 0
        scale = 1
        while a or b:
            a, ra = divmod(a, size)
            b, rb = divmod(b, size)
            out += self._add[ra * size + rb] * scale
            scale *= size
        return out

    def neg(self, a):
        if self.p == 2:
            return a
        size = self.chunk
        if self.nchunks == 1:
            return self._neg[a]
        out = 0
        scale = 1
        while a:
            a, ra = divmod(a, size)
            out += self._neg[ra] * scale
            scale *= size
        return out


class ExtensionField:
    """Simple extension ``base[s]/(modulus)`` with log/antilog multiplication."""

    def __init__(self, base, modulus, check: bool = True):
        modulus = tuple(modulus)
        if len(modulus) < 2 or modulus[-1] != 1:
            raise InputError("modulus must be monic of degree >= 1")
        if check and not is_irreducible(base, list(modulus)):
            raise InputError(f"modulus {modulus} is reducible over {base!r}")
        self.base = base
        self.modulus = modulus
        self.degree = len(modulus) - 1
        self.char = base.char
        self.order = base.order**self.degree
        total_digits = round(_log_int(self.order, self.char))
        self._adder = _DigitAdder(self.char, total_digits)
        self._build_tables()

    def __repr__(self):
        return f"ExtensionField(order={self.order}, modulus={self.modulus})"

    def __eq__(self, other):
        return (
            isinstance(other, ExtensionField)
            and other.base == self.base
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash((self.base, self.modulus))

    def __getstate__(self):
        return {"base": self.base, "modulus": self.modulus}

    def __setstate__(self, state):
        self.__init__(state["base"], state["modulus"], check=False)

    def elements(self):
        return range(self.order)

    def coeffs(self, x: int) -> list[int]:
        return to_digits(x, self.base.order, self.degree)

    def from_coeffs(self, cs) -> int:
        return from_digits(cs, self.base.order)

    def mul_slow(self, a: int, b: int) -> int:
        """Multiplication by polynomial arithmetic modulo the modulus."""
        f = poly_mul(self.base, poly_trim(self.coeffs(a)), poly_trim(self.coeffs(b)))
        r = poly_mod(self.base, f, list(self.modulus))
        return self.from_coeffs(r + [0] * (self.degree - len(r)))

    def _pow_slow(self, a, m):
        out = 1
        while m:
            if m & 1:
                out = self.mul_slow(out, a)
            a = self.mul_slow(a, a)
            m >>= 1
        return out

    def _build_tables(self):
        N = self.order - 1
        factors = prime_factors(N)
        g = 1 if N == 1 else None
        if g is None:
            for cand in range(2, self.order):
                if all(self._pow_slow(cand, N // ell) != 1 for ell in factors):
                    g = cand
                    break
        self.generator = g
        B = self.base.order
        # scaled[c][j] = c * g * s^j, so x * g is a sum of table entries.
        gs = [self.mul_slow(g, B**j) for j in range(self.degree)]
        scaled = [[self._scale(c, v) for v in gs] for c in range(B)]
        exp = [0] * (2 * N + 1)
        log = [0] * self.order
        x = 1
        for i in range(N):
            exp[i] = x
            log[x] = i
            acc = 0
            for j, c in enumerate(self.coeffs(x)):
                if c:
                    acc = self.add(acc, scaled[c][j])
            x = acc
        if x != 1:  # pragma: no cover - a wrong generator would be a bug
            raise AssertionError("multiplicative order mismatch")
        for i in range(N, 2 * N + 1):
            exp[i] = exp[i - N]
        self._exp = exp
        self._log = log
        self._N = N

    def _scale(self, c, v):
        if c == 1:
            return v
        cs = [self.base.mul(c, d) for d in self.coeffs(v)]
        return self.from_coeffs(cs)

    def add(self, a, b):
        return self._adder.add(a, b)

    def neg(self, a):
        return self._adder.neg(a)

    def sub(self, a, b):
        return self._adder.add(a, self._adder.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self._exp[self._N - self._log[a]]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, m):
        if a == 0:
            if m < 0:
                raise DivisionByZero("negative power of zero")
            return 1 if m == 0 else 0
        return self._exp[(self._log[a] * m) % self._N]

    def log(self, a):
        if a == 0:
            raise DivisionByZero("log of zero")
        return self._log[a]

    def exp(self, i):
        return self._exp[i % self._N]


def _log_int(x, base):
    k = 0
    while x > 1:
        x //= base
        k += 1
    return k


class FieldTower:
    """The chain F_p < F_q < F_{q^n}, q = p^e, with fixed moduli.

    ``fq_modulus`` has F_p coefficients and ``fqn_modulus`` has F_q
    coefficients, both little-endian and monic.  When omitted they are the
    smallest irreducible polynomials in encoding order.
    """

    def __init__(self, p, e, n, fq_modulus=None, fqn_modulus=None, cap=DEFAULT_FIELD_CAP):
        if e < 1 or n < 1:
            raise DegenerateDegree(f"degrees must be positive, got e={e}, n={n}")
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if p ** (e * n) > cap:
            raise FieldTooLarge(f"|F_(q^n)| = {p}^{e * n} exceeds cap {cap}")
        self.p, self.e, self.n = p, e, n
        self.q = p**e
        self.order = self.q**n
        self.fp = PrimeField(p)
        if fq_modulus is None:
            fq_modulus = smallest_irreducible(self.fp, e)
        if len(fq_modulus) != e + 1:
            raise InputError("fq_modulus has the wrong degree")
        self.fq = ExtensionField(self.fp, fq_modulus)
        if fqn_modulus is None:
            fqn_modulus = smallest_irreducible(self.fq, n)
        if len(fqn_modulus) != n + 1:
            raise InputError("fqn_modulus has the wrong degree")
        self.fqn = ExtensionField(self.fq, fqn_modulus)
        self.fq_modulus = self.fq.modulus
        self.fqn_modulus = self.fqn.modulus
        self._frob_exp = [self.q**j % max(self.order - 1, 1) for j in range(n)]

    def __repr__(self):
        return f"FieldTower(p={self.p}, e={self.e}, n={self.n})"

    def key(self):
        return (self.p, self.e, self.n, self.fq_modulus, self.fqn_modulus)

    def __eq__(self, other):
        return isinstance(other, FieldTower) and other.key() == self.key()

    def __hash__(self):
        return hash(self.key())

    def __getstate__(self):
        return {"key": self.key()}

    def __setstate__(self, state):
        p, e, n, fqm, fqnm = state["key"]
        other = make_field(p, e, n, fqm, fqnm, cap=p ** (e * n))
        self.__dict__.update(other.__dict__)

    # -- arithmetic -----------------------------------------------------------

    def arith(self, op: str, *operands: int) -> int:
        F = self.fqn
        if op == "add":
            return F.add(*operands)
        if op == "sub":
            return F.sub(*operands)
        if op == "mul":
            return F.mul(*operands)
        if op == "inv":
            return F.inv(*operands)
        if op == "pow":
            return F.pow(*operands)
        raise InputError(f"unknown operation {op!r}")

    def frobenius(self, x: int, j: int = 1) -> int:
        """``x^(q^j)``."""
        if x == 0:
            return 0
        F = self.fqn
        return F._exp[(F._log[x] * self._frob_exp[j % self.n]) % F._N]

    def trace(self, x: int) -> int:
        """Tr_{q^n/q}(x); the result lies in the embedded F_q = range(q)."""
        F = self.fqn
        t = 0
        for j in range(self.n):
            t = F.add(t, self.frobenius(x, j))
        return t

    def subfield(self) -> range:
        return range(self.q)

    def power_basis(self) -> list[int]:
        """The F_q-basis 1, s, ..., s^(n-1) of F_{q^n}."""
        return [self.q**j for j in range(self.n)]

    def element_coords(self, x: int) -> list[int]:
        """F_q coordinates of ``x`` in the power basis."""
        return to_digits(x, self.q, self.n)

    # -- serialization --------------------------------------------------------

    def to_nested(self, x: int) -> list[list[int]]:
        return [to_digits(c, self.p, self.e) for c in to_digits(x, self.q, self.n)]

    def from_nested(self, arr) -> int:
        if len(arr) != self.n or any(len(c) != self.e for c in arr):
            raise InputError("element has the wrong shape")
        if any(not 0 <= d < self.p for c in arr for d in c):
            raise InputError("element residue out of range")
        return from_digits([from_digits(c, self.p) for c in arr], self.q)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "e": self.e,
            "n": self.n,
            "fq_modulus": list(self.fq_modulus),
            "fqn_modulus": [to_digits(c, self.p, self.e) for c in self.fqn_modulus],
        }

    @classmethod
    def from_json(cls, data: dict, cap: int = DEFAULT_FIELD_CAP) -> "FieldTower":
        p, e, n = data["p"], data["e"], data["n"]
        fqm = tuple(data["fq_modulus"])
        fqnm = tuple(from_digits(c, p) for c in data["fqn_modulus"])
        return make_field(p, e, n, fqm, fqnm, cap=cap)


@functools.lru_cache(maxsize=None)
def _cached_tower(p, e, n, fq_modulus, fqn_modulus):
    return FieldTower(p, e, n, fq_modulus, fqn_modulus, cap=p ** (e * n))


def make_field(p: int, e: int, n: int, fq_modulus=None, fqn_modulus=None, cap: int = DEFAULT_FIELD_CAP) -> FieldTower:
    """Build (or fetch from cache) the tower F_p < F_{p^e} < F_{p^(en)}."""
    if e < 1 or n < 1:
        raise DegenerateDegree(f"degrees must be positive, got e={e}, n={n}")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p ** (e * n) > cap:
        raise FieldTooLarge(f"|F_(q^n)| = {p}^{e * n} exceeds cap {cap}")
    if fq_modulus is not None:
        fq_modulus = tuple(fq_modulus)
    if fqn_modulus is not None:
        fqn_modulus = tuple(fqn_modulus)
    if fq_modulus is None or fqn_modulus is None:
        fp = PrimeField(p)
        if fq_modulus is None:
            fq_modulus = smallest_irreducible(fp, e)
        if fqn_modulus is None:
            fqn_modulus = _smallest_fqn_modulus(p, e, n, fq_modulus)
    return _cached_tower(p, e, n, fq_modulus, fqn_modulus)


@functools.lru_cache(maxsize=None)
def _smallest_fqn_modulus(p, e, n, fq_modulus):
    fq = ExtensionField(PrimeField(p), fq_modulus)
    return smallest_irreducible(fq, n)


def all_elements_product(F, length: int):
    """All vectors of ``length`` over ``F`` in lexicographic order."""
    return product(range(F.order), repeat=length)
