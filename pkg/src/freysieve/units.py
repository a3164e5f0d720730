"""The unit group of Z[zeta] modulo 7th powers.

The quotient is (Z/7)^5: the free rank is 5 and the torsion -zeta has
order 26, coprime to 7, so it is absorbed by 7th powers.  Classes are
written on the cyclotomic-unit generators

    u_k = (1 - zeta^k)/(1 - zeta) = 1 + zeta + ... + zeta^(k-1),   k = 2..6,

whose independence mod 7th powers is certified at runtime by an invertible
5x5 matrix of 7th-power-residue characters.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd

from .cyclotomic import (
    FULL,
    CyclotomicInt,
    ONE_MINUS_ZETA,
    ResidueCharacter,
    find_sieve_primes,
    split_prime,
)

GENERATOR_INDICES = (2, 3, 4, 5, 6)
NUM_CLASSES = 7**5

# torsion <-zeta> has order 26; coprime to 7, so torsion never changes a class
assert gcd(26, 7) == 1

# sieve primes of the standard runs; excluded from character-prime defaults
DEFAULT_SIEVE_PRIMES = (2, 11, 19, 23, 83)

_CHARACTER_PRIME_BUDGET = 40


@dataclass(frozen=True)
class UnitClass:
    """Exponent vector in (Z/7)^5 over the generators u_2, ..., u_6."""

    exponents: tuple

    def __post_init__(self):
        if len(self.exponents) != 5 or any(not (0 <= e < 7) for e in self.exponents):
            raise ValueError("exponents must be five residues mod 7")

    def serialize(self):
        """Five base-7 digits e2 e3 e4 e5 e6."""
        return "".join(str(e) for e in self.exponents)

    @classmethod
    def parse(cls, text):
        if len(text) != 5 or any(c not in "0123456" for c in text):
            raise ValueError(f"bad unit class {text!r}")
        return cls(tuple(int(c) for c in text))

    def is_trivial(self):
        return all(e == 0 for e in self.exponents)


@lru_cache(maxsize=None)
def cyclotomic_unit(k):
    """u_k = 1 + zeta + ... + zeta^(k-1), a unit for k coprime to 13."""
    acc = CyclotomicInt.from_int(0)
    for j in range(k):
        acc = acc + CyclotomicInt.zeta_power(j)
    return acc


def generators():
    return tuple(cyclotomic_unit(k) for k in GENERATOR_INDICES)


def unit_class_enumerate():
    """All 16807 exponent vectors in lexicographic order."""
    for exps in product(range(7), repeat=5):
        yield UnitClass(exps)


def unit_value(u):
    """The exact product of generator powers for a class (exponents in 0..6)."""
    acc = CyclotomicInt.from_int(1)
    for k, e in zip(GENERATOR_INDICES, u.exponents):
        if e:
            acc = acc * cyclotomic_unit(k) ** e
    return acc


@lru_cache(maxsize=1)
def epsilon0_value():
    """The unit 13^4/(1-zeta)^48, constructed by exact division.

    Uses prod_{j=2..12} (1 - zeta^j) = 13/(1-zeta), so the 48th power of
    that product is 13^48 (1-zeta)^(-48); dividing by 13^44 leaves the
    unit.  The defining identity 13^4 (1 - zeta) = eps0 (1-zeta)^49 is
    re-checked exactly before returning.
    """
    prod = CyclotomicInt.from_int(1)
    for j in range(2, 13):
        prod = prod * (CyclotomicInt.from_int(1) - CyclotomicInt.zeta_power(j))
    try:
        eps = (prod**48).divide_exact(13**44)
    except ArithmeticError as exc:  # pragma: no cover - guarded construction
        raise AssertionError(f"exact division failed building the unit: {exc}") from exc
    lhs = CyclotomicInt.from_int(13**4) - CyclotomicInt.zeta_power(1) * CyclotomicInt.from_int(13**4)
    if lhs != eps * ONE_MINUS_ZETA**49:
        raise AssertionError("defining identity for the distinguished unit failed")
    return eps


def epsilon0(basis=None):
    """The distinguished unit and its class: (UnitClass, CyclotomicInt)."""
    value = epsilon0_value()
    return class_of(value, basis=basis), value


# ---------------------------------------------------------------------------
# discrete logarithm on unit classes via 7th-power-residue characters


def _rank_rows(rows):
    """Row-reduce over F_7, returning (rank, indices of selected rows)."""
    chosen = []
    basis = []
    for idx, row in enumerate(rows):
        vec = [r % 7 for r in row]
        for bvec in basis:
            lead = next((i for i, x in enumerate(bvec) if x), None)
            if lead is not None and vec[lead]:
                f = (vec[lead] * pow(bvec[lead], -1, 7)) % 7
                vec = [(x - f * y) % 7 for x, y in zip(vec, bvec)]
        if any(vec):
            basis.append(vec)
            chosen.append(idx)
        if len(basis) == 5:
            break
    return len(basis), chosen


class UnitCharacterBasis:
    """Five 7th-power-residue characters separating the generator classes.

    Characters are drawn at full-field primes (label q.1 of each candidate
    prime, in find_sieve_primes order) until the 5x5 generator matrix is
    invertible over F_7; that matrix is the independence certificate for
    the 16807 classes.
    """

    def __init__(self, aux_primes=None, exclude=DEFAULT_SIEVE_PRIMES):
        if aux_primes is None:
            candidates = [q for q in find_sieve_primes(1000) if q not in exclude]
            candidates = candidates[:_CHARACTER_PRIME_BUDGET]
        else:
            candidates = list(aux_primes)
        gens = generators()
        chars, rows = [], []
        for q in candidates:
            spl = split_prime(q, FULL)
            if pow(q, spl.f, 7) != 1:
                raise ValueError(f"prime {q} admits no order-7 character")
            ch = ResidueCharacter(q, spl.labels[0])
            chars.append(ch)
            rows.append([ch.value(u) for u in gens])
            rank, chosen = _rank_rows(rows)
            if rank == 5:
                self.characters = tuple(chars[i] for i in chosen)
                self.primes = tuple(self.characters[i].q for i in range(5))
                self.matrix = tuple(tuple(rows[i]) for i in chosen)
                self._solver = _invert_mod7(self.matrix)
                return
        raise RuntimeError(
            f"could not separate the generator classes with {len(candidates)} auxiliary primes"
        )

    def class_of(self, x):
        vals = []
        for ch in self.characters:
            v = ch.value(x)
            if v is None:
                raise ValueError(f"unit reduced to 0 at auxiliary prime {ch.label}")
            vals.append(v)
        exps = tuple(sum(self._solver[i][j] * vals[j] for j in range(5)) % 7 for i in range(5))
        return UnitClass(exps)


def _invert_mod7(matrix):
    n = len(matrix)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(matrix)]
    for c in range(n):
        pr = next((r for r in range(c, n) if aug[r][c] % 7), None)
        if pr is None:
            raise ValueError("character matrix singular over F_7")
        aug[c], aug[pr] = aug[pr], aug[c]
        inv = pow(aug[c][c], -1, 7)
        aug[c] = [(x * inv) % 7 for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [(x - f * y) % 7 for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


@lru_cache(maxsize=1)
def default_basis():
    return UnitCharacterBasis()


def class_of(x, basis=None):
    """Exponent vector of a unit x modulo 7th powers."""
    basis = basis or default_basis()
    return basis.class_of(x)
