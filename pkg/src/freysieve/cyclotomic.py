"""Exact arithmetic in Z[zeta] for a primitive 13th root of unity zeta.

Elements are stored on the power basis 1, zeta, ..., zeta^11 with
arbitrary-precision integer coordinates.  The module also knows the two
proper subfields of the degree-12 cyclotomic field that the rest of the
package needs (the real quadratic field of discriminant 13 and the real
cubic field of conductor 13), can split rational primes in all three
fields, builds explicit residue-field models, and evaluates 7th-power
residue characters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

DEGREE = 12  # power basis 1, zeta, ..., zeta^11

FULL = "full"
QUADRATIC = "quadratic"
CUBIC = "cubic"

SUBFIELD_DEGREE = {FULL: 12, QUADRATIC: 2, CUBIC: 3}

# Fixing subgroups of (Z/13)^x: an element lies in the subfield iff it is
# fixed by sigma_j for every j in the subgroup.
SUBFIELD_GROUP = {
    FULL: (1,),
    QUADRATIC: (1, 3, 4, 9, 10, 12),
    CUBIC: (1, 5, 8, 12),
}

# Minimal polynomials (low degree first) of the model generators:
#   full      zeta,                Phi_13(x) = 1 + x + ... + x^11 + x^12
#   quadratic (1 + sqrt(13))/2,    x^2 - x - 3
#   cubic     eta = zeta + zeta^5 + zeta^8 + zeta^12,  x^3 + x^2 - 4x + 1
# The quadratic generator is the half-integral one so that Z[gen] is the
# maximal order; x^2 - 13 is the wrong model at q = 2.
MIN_POLY = {
    FULL: tuple([1] * 13),
    QUADRATIC: (-3, -1, 1),
    CUBIC: (1, -4, 1, 1),
}

QUADRATIC_RESIDUES_MOD_13 = frozenset({1, 3, 4, 9, 10, 12})


class CyclotomicInt:
    """An element of Z[zeta] as 12 integer coordinates on 1, zeta, ..., zeta^11."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        coords = tuple(int(c) for c in coords)
        if len(coords) != DEGREE:
            raise ValueError(f"need {DEGREE} coordinates, got {len(coords)}")
        self.coords = coords

    @classmethod
    def from_int(cls, n):
        return cls((n,) + (0,) * (DEGREE - 1))

    @classmethod
    def zeta_power(cls, j):
        """zeta^j for any integer j (reduced mod 13)."""
        j %= 13
        if j < DEGREE:
            c = [0] * DEGREE
            c[j] = 1
            return cls(c)
        # zeta^12 = -(1 + zeta + ... + zeta^11)
        return cls((-1,) * DEGREE)

    def _lift13(self):
        return list(self.coords) + [0]

    @staticmethod
    def _project(v13):
        # reduce mod Phi_13: subtract the zeta^12 coordinate everywhere
        top = v13[12]
        return tuple(v13[i] - top for i in range(DEGREE))

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CyclotomicInt(tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CyclotomicInt(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self):
        return CyclotomicInt(tuple(-a for a in self.coords))

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._lift13(), other._lift13()
        out = [0] * 13
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if bj:
                    out[(i + j) % 13] += ai * bj
        return CyclotomicInt(self._project(out))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers are not integral in general")
        result = CyclotomicInt.from_int(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = CyclotomicInt.from_int(other)
        return isinstance(other, CyclotomicInt) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"CyclotomicInt({list(self.coords)})"

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def galois(self, j):
        """Apply sigma_j : zeta -> zeta^j for j coprime to 13."""
        j %= 13
        if j == 0:
            raise ValueError("j must be a unit mod 13")
        v = [0] * 13
        for i, c in enumerate(self._lift13()):
            v[(i * j) % 13] += c
        return CyclotomicInt(self._project(v))

    def is_fixed_by(self, subfield):
        return all(self.galois(j) == self for j in SUBFIELD_GROUP[subfield])

    def norm(self):
        """Field norm to Q: the product of all 12 Galois conjugates."""
        prod = CyclotomicInt.from_int(1)
        for j in range(1, 13):
            prod = prod * self.galois(j)
        if any(prod.coords[1:]):
            raise AssertionError("norm did not land in Z")
        return prod.coords[0]

    def is_unit(self):
        return abs(self.norm()) == 1

    def divide_exact(self, n):
        """Divide every coordinate by the integer n; error if not exact."""
        out = []
        for c in self.coords:
            q, r = divmod(c, n)
            if r:
                raise ArithmeticError(f"coordinate {c} not divisible by {n}")
            out.append(q)
        return CyclotomicInt(out)

    def serialize(self):
        return ",".join(str(c) for c in self.coords)

    @classmethod
    def deserialize(cls, text):
        return cls([int(p) for p in text.split(",")])


def _coerce(x):
    if isinstance(x, CyclotomicInt):
        return x
    if isinstance(x, int):
        return CyclotomicInt.from_int(x)
    return NotImplemented


ZETA = CyclotomicInt.zeta_power(1)
ONE = CyclotomicInt.from_int(1)
ONE_MINUS_ZETA = ONE - ZETA

# Gauss sum sqrt(13) = sum_j legendre(j|13) zeta^j  (13 = 1 mod 4, so real).
SQRT13 = sum(
    (CyclotomicInt.zeta_power(j) if j % 13 in QUADRATIC_RESIDUES_MOD_13 else -CyclotomicInt.zeta_power(j))
    for j in range(1, 13)
)

# Model generators of the subfields, as exact elements of Z[zeta].
GENERATOR = {
    FULL: ZETA,
    QUADRATIC: (ONE + SQRT13).divide_exact(2),
    CUBIC: CyclotomicInt.zeta_power(1)
    + CyclotomicInt.zeta_power(5)
    + CyclotomicInt.zeta_power(8)
    + CyclotomicInt.zeta_power(12),
}


# ---------------------------------------------------------------------------
# dense polynomial arithmetic over F_q (coefficient lists, low degree first)


def _poly_trim(p):
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_mulmod(a, b, mod, q):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + ai * bj) % q
    return _poly_rem(out, mod, q)


def _poly_rem(a, mod, q):
    a = list(a)
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], -1, q)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % q
        if c:
            c = (c * inv_lead) % q
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * mod[j]) % q
    del a[dm:]
    while len(a) < dm:
        a.append(0)
    return [x % q for x in a] if dm > 0 else [0]

def _poly_powmod(a, n, mod, q):
    result = [1] + [0] * (len(mod) - 2)
    base = _poly_rem(a, mod, q)
    while n:
        if n & 1:
            result = _poly_mulmod(result, base, mod, q)
        base = _poly_mulmod(base, base, mod, q)
        n >>= 1
    return result


def _poly_gcd(a, b, q):
    a = _poly_trim([x % q for x in a])
    b = _poly_trim([x % q for x in b])
    while b != [0]:
        r = _poly_divmod_rem(a, b, q)
        a, b = b, r
    if a != [0]:
        inv = pow(a[-1], -1, q)
        a = [(x * inv) % q for x in a]
    return a


def _poly_divmod_rem(a, b, q):
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, q)
    while len(a) - 1 >= db and _poly_trim(list(a)) != [0]:
        _poly_trim(a)
        if len(a) - 1 < db:
            break
        c = (a[-1] * inv) % q
        if c:
            shift = len(a) - 1 - db
            for j in range(db + 1):
                a[shift + j] = (a[shift + j] - c * b[j]) % q
        a.pop()
    return _poly_trim(a if a else [0])


def _poly_deriv(a, q):
    return _poly_trim([(i * a[i]) % q for i in range(1, len(a))] or [0])


def _berlekamp_factor(f, q):
    """Irreducible factors of a monic squarefree f over F_q (q small).

    Deterministic: splits along every Berlekamp subalgebra basis vector by
    scanning the q possible eigenvalues.
    """
    f = [x % q for x in f]
    n = len(f) - 1
    if n == 1:
        return [tuple(f)]
    # Berlekamp matrix: rows are x^(q*i) mod f
    rows = []
    xq = _poly_powmod([0, 1], q, f, q)
    cur = [1] + [0] * (n - 1)
    for i in range(n):
        rows.append(list(cur))
        cur = _poly_mulmod(cur, xq, f, q)
    # nullspace of (M - I)^T acting on coefficient vectors
    mat = [[(rows[i][j] - (1 if i == j else 0)) % q for i in range(n)] for j in range(n)]
    basis = _nullspace_mod(mat, q)
    factors = [f]
    for v in basis:
        if len(factors) == len(basis):
            break
        poly_v = _poly_trim(list(v))
        if len(poly_v) <= 1:
            continue  # constant vector: trivial subalgebra element
        new_factors = []
        for g in factors:
            if len(g) - 1 == 1:
                new_factors.append(g)
                continue
            pieces = []
            rem = g
            for c in range(q):
                h = _poly_gcd(rem, _poly_trim([(poly_v[0] - c) % q] + poly_v[1:]), q)
                if len(h) > 1 and len(h) < len(rem):
                    pieces.append(h)
                    rem = _poly_divmod_quot(rem, h, q)
                    if len(rem) - 1 == 0:
                        break
            if len(rem) > 1:
                pieces.append(rem)
            new_factors.extend(pieces if pieces else [g])
        factors = new_factors
    return [tuple(g) for g in factors]


def _poly_divmod_quot(a, b, q):
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, q)
    quot = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = (a[i] * inv) % q
        if c:
            quot[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % q
    return _poly_trim(quot)


def _nullspace_mod(mat, q):
    """Basis of the nullspace of the square matrix mat over F_q."""
    n = len(mat)
    m = [row[:] for row in mat]
    pivots = {}
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, n) if m[i][c] % q), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = pow(m[r][c], -1, q)
        m[r] = [(x * inv) % q for x in m[r]]
        for i in range(n):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % q for x, y in zip(m[i], m[r])]
        pivots[c] = r
        r += 1
    basis = []
    for c in range(n):
        if c in pivots:
            continue
        v = [0] * n
        v[c] = 1
        for pc, pr in pivots.items():
            v[pc] = (-m[pr][c]) % q
        basis.append(v)
    return basis


def _is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def multiplicative_order(a, n):
    a %= n
    if a == 0:
        raise ValueError("not a unit")
    o, x = 1, a
    while x != 1:
        x = (x * a) % n
        o += 1
    return o


# ---------------------------------------------------------------------------
# prime splitting


@dataclass(frozen=True)
class PrimeSplitting:
    """Factorization data of a rational prime in one of the three fields."""

    q: int
    subfield: str
    f: int
    g: int
    factors: tuple  # monic polynomials over F_q, coefficients low degree first
    labels: tuple  # "q.1" ... "q.g" in sorted factor order
    ramified: bool = False

    def factor_for(self, label):
        try:
            return self.factors[self.labels.index(label)]
        except ValueError:
            raise KeyError(f"label {label!r} not in splitting of {self.q} ({self.subfield})") from None

    @property
    def norm(self):
        return self.q**self.f


@lru_cache(maxsize=None)
def split_prime(q, subfield=FULL):
    """Split the rational prime q in the chosen field.

    Factors of the model generator's minimal polynomial mod q are sorted
    lexicographically by coefficient list (constant term first, coefficients
    as integers in [0, q)); labels "q.1" ... "q.g" follow that order.
    q = 13 is returned flagged ramified rather than rejected.
    """
    if subfield not in SUBFIELD_DEGREE:
        raise ValueError(f"unknown subfield tag {subfield!r}")
    if not _is_prime(q):
        raise ValueError(f"{q} is not prime")
    deg = SUBFIELD_DEGREE[subfield]
    poly = [c % q for c in MIN_POLY[subfield]]
    if q == 13:
        # totally ramified: Phi_13 = (x-1)^12, quadratic model = (x-7)^2,
        # cubic model = (x-4)^3 mod 13
        root = {FULL: 1, QUADRATIC: 7, CUBIC: 4}[subfield]
        return PrimeSplitting(q, subfield, 1, 1, (((-root) % q, 1),), ("13.1",), ramified=True)
    factors = sorted(_berlekamp_factor(poly, q))
    degs = {len(fac) - 1 for fac in factors}
    if len(degs) != 1:
        raise AssertionError(f"mixed factor degrees for unramified {q}: {factors}")
    f = degs.pop()
    g = len(factors)
    if f * g != deg:
        raise AssertionError(f"f*g != degree for q={q} in {subfield}")
    labels = tuple(f"{q}.{i + 1}" for i in range(g))
    return PrimeSplitting(q, subfield, f, g, tuple(factors), labels)


# ---------------------------------------------------------------------------
# residue fields and reduction


class ResidueField:
    """F_q[x]/(modulus): elements are coordinate tuples of length f (ints mod q).

    For f = 1 elements are still 1-tuples; helpers lift/extract plain ints.
    """

    def __init__(self, q, modulus):
        self.q = q
        self.modulus = list(modulus)
        self.f = len(modulus) - 1
        self.order = q**self.f

    def zero(self):
        return (0,) * self.f

    def one(self):
        return self.element(1)

    def element(self, c):
        return (c % self.q,) + (0,) * (self.f - 1)

    def gen(self):
        if self.f == 1:
            # the generator reduces to the root of the linear modulus
            return ((-self.modulus[0]) % self.q,)
        return (0, 1) + (0,) * (self.f - 2)

    def add(self, a, b):
        return tuple((x + y) % self.q for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.q for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.q for x in a)

    def mul(self, a, b):
        if self.f == 1:
            return ((a[0] * b[0]) % self.q,)
        return tuple(_poly_mulmod(list(a), list(b), self.modulus, self.q))

    def pow(self, a, n):
        if n < 0:
            return self.pow(self.inv(a), -n)
        result = self.one()
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverting 0 in a residue field")
        return self.pow(a, self.order - 2)

    def is_zero(self, a):
        return all(c == 0 for c in a)

    def elements(self):
        """All field elements in lexicographic coordinate order."""
        for coords in itertools.product(range(self.q), repeat=self.f):
            yield coords

    def eval_poly_coeffs(self, int_coeffs):
        """Element from integer coefficients c_i on powers of the field gen."""
        acc = self.zero()
        g = self.gen()
        p = self.one()
        for c in int_coeffs:
            acc = self.add(acc, tuple((c * x) % self.q for x in p))
            p = self.mul(p, g)
        return acc


@dataclass(frozen=True)
class ReductionMap:
    """Reduction of Z[zeta] at one prime label, landing in an explicit model.

    For a full-field label the model is F_q[x]/(factor) with zeta -> x.
    For a subfield label the reduction routes through a full-field prime
    above it and re-expresses the image on the subfield generator basis;
    inputs that do not lie in the subfield are rejected.
    """

    splitting: PrimeSplitting
    label: str
    rf: ResidueField
    _full_rf: ResidueField = None
    _full_zeta: tuple = None
    _basis_matrix: tuple = None  # full-field coords of 1, g, ..., g^(f-1)

    def reduce(self, x):
        x = _coerce(x)
        q = self.rf.q
        if self.splitting.subfield == FULL:
            coords = [c % q for c in x.coords]
            val = self.rf.zero()
            zp = self.rf.one()
            z = self.rf.gen() if self.rf.f > 1 else self.rf.element((-self.rf.modulus[0]) % q)
            for c in coords:
                val = self.rf.add(val, tuple((c * t) % q for t in zp))
                zp = self.rf.mul(zp, z)
            return val
        # subfield route: reduce in the full model, then solve for subfield coords
        full = self._full_rf
        coords = [c % q for c in x.coords]
        val = full.zero()
        zp = full.one()
        z = full.gen()
        for c in coords:
            val = full.add(val, tuple((c * t) % q for t in zp))
            zp = full.mul(zp, z)
        return self._express(val)

    def _express(self, val):
        """Solve val = sum c_i * gen^i over the basis images; error if outside."""
        q = self.rf.q
        cols = self._basis_matrix
        n = len(cols[0])
        m = [[cols[j][i] for j in range(len(cols))] + [val[i]] for i in range(n)]
        sol = _solve_mod(m, q)
        if sol is None:
            raise ValueError("element does not lie in the declared subfield at this prime")
        return tuple(sol)


def _solve_mod(aug, q):
    """Solve an augmented linear system over F_q; None if inconsistent."""
    rows = len(aug)
    cols = len(aug[0]) - 1
    m = [row[:] for row in aug]
    piv = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if m[i][c] % q), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = pow(m[r][c], -1, q)
        m[r] = [(x * inv) % q for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] % q:
                fct = m[i][c]
                m[i] = [(x - fct * y) % q for x, y in zip(m[i], m[r])]
        piv.append(c)
        r += 1
    for i in range(r, rows):
        if m[i][cols] % q:
            return None
    sol = [0] * cols
    for idx, c in enumerate(piv):
        sol[c] = m[idx][cols] % q
    return sol


@lru_cache(maxsize=None)
def reduction_map(q, subfield, label):
    """Build the ReductionMap for one prime label (cached)."""
    spl = split_prime(q, subfield)
    fac = spl.factor_for(label)
    rf = ResidueField(q, fac)
    if subfield == FULL:
        return ReductionMap(spl, label, rf)
    full_spl = split_prime(q, FULL)
    # pick the first full-field prime whose generator image is a root of fac
    gen = GENERATOR[subfield]
    for full_label in full_spl.labels:
        full_rf = ResidueField(q, full_spl.factor_for(full_label))
        gmap = ReductionMap(full_spl, full_label, full_rf)
        gimg = gmap.reduce(gen)
        # evaluate fac at gimg inside the full model
        acc = full_rf.zero()
        p = full_rf.one()
        for c in fac:
            acc = full_rf.add(acc, tuple((c * t) % q for t in p))
            p = full_rf.mul(p, gimg)
        if full_rf.is_zero(acc):
            basis = []
            cur = full_rf.one()
            for _ in range(rf.f):
                basis.append(cur)
                cur = full_rf.mul(cur, gimg)
            return ReductionMap(spl, label, rf, full_rf, gmap.reduce(ZETA), tuple(basis))
    raise AssertionError(f"no full-field prime found above {label}")


def reduce_mod_prime(x, q, label, subfield=FULL):
    """Reduce x in Z[zeta] at the prime with the given label.

    Full-field labels accept any element; subfield labels require the
    element to lie in that subfield (checked by the solve step).
    """
    return reduction_map(q, subfield, label).reduce(x)


# ---------------------------------------------------------------------------
# 7th-power residues


def is_seventh_power(rf, x):
    """Whether nonzero x is a 7th power in the residue field rf."""
    if rf.is_zero(x):
        raise ValueError("7th-power test is undefined at 0; handle the dividing case separately")
    n = rf.order - 1
    if n % 7:
        return True
    return rf.pow(x, n // 7) == rf.one()


class ResidueCharacter:
    """The order-7 power-residue character at one full-field prime label.

    Maps the units of the residue field onto Z/7 (zero inputs map to None);
    the normalization depends on a deterministically chosen non-residue, so
    individual values are canonical only up to a unit scalar of Z/7, which
    is all the sieve and the discrete-log machinery need.
    """

    def __init__(self, q, label):
        self.q = q
        self.label = label
        self.rmap = reduction_map(q, FULL, label)
        self.rf = self.rmap.rf
        n = self.rf.order - 1
        if n % 7:
            raise ValueError(f"7 does not divide the residue group order at {label}")
        self.exponent = n // 7
        base = None
        for cand in self.rf.elements():
            if self.rf.is_zero(cand):
                continue
            img = self.rf.pow(cand, self.exponent)
            if img != self.rf.one():
                base = img
                break
        if base is None:
            raise AssertionError("no 7th-power non-residue found")
        table = {}
        cur = self.rf.one()
        for k in range(7):
            table[cur] = k
            cur = self.rf.mul(cur, base)
        self._dlog = table

    def value_of_element(self, x):
        if self.rf.is_zero(x):
            return None
        return self._dlog[self.rf.pow(x, self.exponent)]

    def value(self, x):
        """Character value of a CyclotomicInt (None if it reduces to 0)."""
        return self.value_of_element(self.rmap.reduce(x))


def find_sieve_primes(bound):
    """Rational primes q <= bound (q != 13) whose full-field residue fields
    have multiplicative group order divisible by 7."""
    if bound < 2:
        raise ValueError("bound must be >= 2")
    out = []
    for q in range(2, bound + 1):
        if q == 13 or not _is_prime(q):
            continue
        f = multiplicative_order(q, 13)
        if pow(q, f, 7) == 1:
            out.append(q)
    return out
