"""Bivariate polynomials in (a, b) with coefficients in Z[zeta].

Just enough arithmetic for Weierstrass models whose coefficients are
homogeneous forms in a solution pair: dict-of-monomials representation,
exact evaluation, and Galois-fixedness checks.
"""

from __future__ import annotations

from .cyclotomic import CyclotomicInt


class BiPoly:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for key, val in (terms or {}).items():
            if isinstance(val, int):
                val = CyclotomicInt.from_int(val)
            if not val.is_zero():
                clean[(int(key[0]), int(key[1]))] = val
        self.terms = clean

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, da, db, c=1):
        return cls({(da, db): c})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            cur = out.get(k)
            out[k] = v if cur is None else cur + v
        return BiPoly(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return BiPoly({k: -v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, CyclotomicInt)):
            c = other if isinstance(other, CyclotomicInt) else CyclotomicInt.from_int(other)
            return BiPoly({k: c * v for k, v in self.terms.items()})
        out = {}
        for (a1, b1), v1 in self.terms.items():
            for (a2, b2), v2 in other.terms.items():
                k = (a1 + a2, b1 + b2)
                cur = out.get(k)
                out[k] = v1 * v2 if cur is None else cur + v1 * v2
        return BiPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, BiPoly) and self.terms == other.terms

    def __repr__(self):
        return f"BiPoly({self.terms!r})"

    def is_zero(self):
        return not self.terms

    def evaluate(self, a, b):
        """Exact value at integer (a, b), as a CyclotomicInt."""
        acc = CyclotomicInt.from_int(0)
        for (da, db), v in self.terms.items():
            acc = acc + v * (a**da * b**db)
        return acc

    def is_fixed_by(self, subfield):
        return all(v.is_fixed_by(subfield) for v in self.terms.values())

    def sorted_terms(self):
        return sorted(self.terms.items())
