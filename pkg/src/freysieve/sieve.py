"""The modular unit sieve and the level-raising pair scan.

Both sieves work prime by prime.  At a rational prime q the local data is:

* the 7th-power-residue characters at every full-field prime above q
  (present when 7 divides q^f - 1), tabulated over all residue pairs
  (a, b) mod q through chi(a + zeta b) = chi(b) + chi(a/b + zeta); and
* the trace constraint against a fixed target curve at every prime of the
  real quadratic subfield above q (good reduction: trace congruence mod 7;
  multiplicative: +-(N+1) must match; additive: retained and flagged).

A unit class survives the unit sieve at q iff some admissible pair meets
every local condition; pairs with a + zeta b = 0 at a prime count as
meeting that prime's character condition (this can only keep candidates).
The pair scan fixes the unit and reports the surviving pairs instead.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

import numpy as np

from . import kernels
from .cyclotomic import (
    FULL,
    QUADRATIC,
    CyclotomicInt,
    ONE_MINUS_ZETA,
    ResidueCharacter,
    split_prime,
)
from .freycurves import TraceTarget, reduced_coefficient_tables
from .units import (
    GENERATOR_INDICES,
    NUM_CLASSES,
    UnitClass,
    cyclotomic_unit,
    unit_class_enumerate,
)

ODD_SUM = "odd_sum"
FOUR_DIVIDES = "four_divides"
NO_PARITY = "none"

SEVENTH_POWER = "seventh-power"
MODULAR = "modular"
C1C2 = "c1c2"

# no trace information at the level-ish primes; 13 ramifies
MODULAR_EXCLUDED = (2, 3, 13)

LEVEL_RAISING_PRIMES = (5, 17, 19, 23, 29, 37, 41, 43, 61, 83, 89)
MODULAR_ONLY_PRIMES = (5, 17, 23, 29, 43, 61)


@dataclass(frozen=True)
class SieveCase:
    thirteen_divides: bool
    parity: str = NO_PARITY

    def __post_init__(self):
        if self.parity not in (ODD_SUM, FOUR_DIVIDES, NO_PARITY):
            raise ValueError(f"unknown parity tag {self.parity!r}")

    @property
    def delta(self):
        return 1 if self.thirteen_divides else 0

    def describe(self):
        return "13div" if self.thirteen_divides else "13ndiv"


@dataclass(frozen=True)
class PairResidue:
    q: int
    a: int
    b: int

    def __post_init__(self):
        if self.a % self.q == 0 and self.b % self.q == 0:
            raise ValueError("pair must not have both residues zero")


# ---------------------------------------------------------------------------
# per-prime local data


@lru_cache(maxsize=None)
def _character(q, label):
    return ResidueCharacter(q, label)


def _pair_domain(q, case):
    if q == 2 and case.parity == ODD_SUM:
        pairs = [(0, 1), (1, 0)]
    else:
        pairs = [(a, b) for a in range(q) for b in range(q) if (a, b) != (0, 0)]
    a = np.array([p[0] for p in pairs], dtype=np.int64)
    b = np.array([p[1] for p in pairs], dtype=np.int64)
    return a, b


def _eval_tables_batch(rf, table, a_arr, b_arr):
    """Evaluate one reduced coefficient table over pair arrays; returns
    a list of f component arrays."""
    q = rf.q
    comps = [np.zeros(len(a_arr), dtype=np.int64) for _ in range(rf.f)]
    pow_a, pow_b = {}, {}
    for da, db, coords in table:
        if da not in pow_a:
            pow_a[da] = np.array([pow(int(x), da, q) for x in a_arr], dtype=np.int64)
        if db not in pow_b:
            pow_b[db] = np.array([pow(int(x), db, q) for x in b_arr], dtype=np.int64)
        mono = (pow_a[da] * pow_b[db]) % q
        for i, c in enumerate(coords):
            if c:
                comps[i] = (comps[i] + c * mono) % q
    return comps


def _chunked_traces(fn, arrays, prefix, suffix, threads):
    """Run a trace kernel over row-chunks, deterministically merged."""
    n = len(arrays[0])
    if n == 0:
        return np.empty(0, dtype=np.int64)
    if threads <= 1 or n < 256:
        return fn(*prefix, *arrays, *suffix)
    bounds = np.linspace(0, n, threads + 1, dtype=int)
    slices = [(lo, hi) for lo, hi in zip(bounds, bounds[1:]) if hi > lo]
    with ThreadPoolExecutor(max_workers=len(slices)) as pool:
        futs = [
            pool.submit(fn, *prefix, *[a[lo:hi] for a in arrays], *suffix) for lo, hi in slices
        ]
        parts = [f.result() for f in futs]
    return np.concatenate(parts)


class ModularMask:
    """Per-pair compatibility with the target curve at all quadratic primes over q."""

    def __init__(self, q, model, target, a_arr, b_arr, threads=1):
        self.q = q
        self.additive_flagged = 0
        n = len(a_arr)
        ok = np.ones(n, dtype=bool)
        spl = split_prime(q, QUADRATIC)
        table = kernels.legendre_table(q)
        for label in spl.labels:
            rmap, tables = reduced_coefficient_tables(model, q, label)
            rf = rmap.rf
            disc = _eval_tables_batch(rf, tables["disc"], a_arr, b_arr)
            c4 = _eval_tables_batch(rf, tables["c4"], a_arr, b_arr)

            def nz(comps):
                return np.logical_or.reduce([c != 0 for c in comps])

            good = nz(disc)
            mult = ~good & nz(c4)
            addv = ~good & ~mult
            self.additive_flagged += int(addv.sum())
            tgt = target.value_mod7(q, label)
            cond = np.zeros(n, dtype=bool)
            gidx = np.flatnonzero(good)
            if len(gidx):
                b2 = _eval_tables_batch(rf, tables["b2"], a_arr[gidx], b_arr[gidx])
                b4 = _eval_tables_batch(rf, tables["b4"], a_arr[gidx], b_arr[gidx])
                b6 = _eval_tables_batch(rf, tables["b6"], a_arr[gidx], b_arr[gidx])
                if rf.f == 1:
                    traces = _chunked_traces(
                        kernels.traces_deg1, (b2[0], b4[0], b6[0]), (q,), (table,), threads
                    )
                elif rf.f == 2:
                    alpha = (-rf.modulus[1]) % q
                    beta = (-rf.modulus[0]) % q
                    traces = _chunked_traces(
                        kernels.traces_deg2,
                        (b2[0], b2[1], b4[0], b4[1], b6[0], b6[1]),
                        (q, alpha, beta),
                        (table,),
                        threads,
                    )
                else:  # pragma: no cover - quadratic field has f <= 2
                    raise AssertionError("unexpected residue degree")
                cond[gidx] = (traces % 7) == tgt
            pm = (rf.order + 1) % 7
            cond[mult] = tgt in (pm, (-pm) % 7)
            cond[addv] = True  # conservative: retained, counted in the flag
            ok &= cond
        self.table = ok


class CharacterData:
    """Order-7 character columns over the pair domain at one rational prime."""

    def __init__(self, q, a_arr, b_arr):
        spl = split_prime(q, FULL)
        self.q = q
        self.labels = spl.labels
        self.exists = pow(q, spl.f, 7) == 1 and q != 13
        if not self.exists:
            return
        cols = []
        gens = []
        omz = []
        n = len(a_arr)
        for label in spl.labels:
            ch = _character(q, label)
            rf = ch.rf
            zeta_img = ch.rmap.reduce(CyclotomicInt.zeta_power(1))
            chi_scalar = {c: ch.value_of_element(rf.element(c)) for c in range(1, q)}
            chi_shift = {
                c: ch.value_of_element(rf.add(zeta_img, rf.element(c))) for c in range(q)
            }
            col = np.empty(n, dtype=np.int64)
            for i in range(n):
                a, b = int(a_arr[i]), int(b_arr[i])
                if b % q == 0:
                    col[i] = chi_scalar[a % q]
                else:
                    v = chi_shift[(a * pow(b, -1, q)) % q]
                    col[i] = -1 if v is None else (chi_scalar[b % q] + v) % 7
            cols.append(col)
            gens.append([ch.value(cyclotomic_unit(k)) for k in GENERATOR_INDICES])
            omz.append(ch.value(ONE_MINUS_ZETA))
        self.cols = cols
        self.gens = np.array(gens, dtype=np.int64)
        self.one_minus_zeta = np.array(omz, dtype=np.int64)

    def sat_table(self, pair_ok):
        """Flat boolean table over (Z/7)^g of character signatures attained
        by admissible pairs; zero-reduction components are wildcards."""
        g = len(self.cols)
        sat = np.zeros(7**g, dtype=bool)
        idx = np.flatnonzero(pair_ok)
        if not len(idx):
            return sat
        cols = np.stack([c[idx] for c in self.cols])
        wild = (cols == -1).any(axis=0)
        if (~wild).any():
            keys = np.zeros((~wild).sum(), dtype=np.int64)
            for i in range(g):
                keys = keys * 7 + cols[i, ~wild]
            sat[keys] = True
        for j in np.flatnonzero(wild):
            choices = [range(7) if cols[i, j] == -1 else (int(cols[i, j]),) for i in range(g)]
            stack = [0]
            for ch in choices:
                stack = [k * 7 + v for k in stack for v in ch]
            sat[stack] = True
        return sat

    def unit_targets(self, unit, delta):
        """Per-label target values for a fixed unit (class or exact element)."""
        targets = []
        for i, label in enumerate(self.labels):
            if isinstance(unit, UnitClass):
                t = int(
                    sum(e * g for e, g in zip(unit.exponents, self.gens[i]))
                    + delta * self.one_minus_zeta[i]
                ) % 7
            else:
                v = _character(self.q, label).value(unit)
                if v is None:
                    raise ValueError(f"unit reduced to zero at {label}")
                t = (v + delta * int(self.one_minus_zeta[i])) % 7
            targets.append(t)
        return targets


# ---------------------------------------------------------------------------
# reports


@dataclass
class PrimeSummary:
    q: int
    constraints: tuple
    pairs: int
    additive_flagged: int = 0
    eliminated: int = None
    survivors: int = None
    forced: bool = None

    def fields(self):
        out = {"q": self.q}
        out["constraints"] = "+".join(self.constraints) if self.constraints else "none"
        out["pairs"] = self.pairs
        if self.eliminated is not None:
            out["eliminated"] = self.eliminated
        if self.survivors is not None:
            out["survivors"] = self.survivors
        if self.forced is not None:
            out["forced"] = "yes" if self.forced else "no"
        if self.additive_flagged:
            out["additive-flagged"] = self.additive_flagged
        return out


@dataclass
class SieveReport:
    kind: str
    case: SieveCase
    primes: tuple
    constraints: tuple
    target: str
    prime_summaries: list = field(default_factory=list)
    survivors: list = field(default_factory=list)  # UnitClass or PairResidue
    no_information: list = field(default_factory=list)
    forced_all: bool = None
    trivial_class_eliminated: bool = None

    def to_lines(self):
        lines = [
            ("report", self.kind),
            ("case", self.case.describe()),
            ("parity", {ODD_SUM: "odd", FOUR_DIVIDES: "four", NO_PARITY: "none"}[self.case.parity]),
            ("primes", ",".join(str(q) for q in self.primes)),
            ("constraints", "+".join(self.constraints) if self.constraints else "none"),
            ("target", self.target),
        ]
        for ps in self.prime_summaries:
            f = ps.fields()
            body = " ".join(f"{k}={v}" for k, v in f.items() if k != "q")
            lines.append((f"prime {ps.q}", body))
        if self.kind == "unit-sieve":
            lines.append(("survivors", str(len(self.survivors))))
            for s in self.survivors:
                lines.append(("survivor", s.serialize()))
            if self.trivial_class_eliminated is not None:
                lines.append(
                    ("trivial-class-eliminated", "yes" if self.trivial_class_eliminated else "no")
                )
        else:
            if self.no_information:
                lines.append(("no-information", ",".join(str(q) for q in self.no_information)))
            if self.forced_all is not None:
                informative = [ps for ps in self.prime_summaries if ps.forced is not None]
                not_forced = [ps.q for ps in informative if not ps.forced]
                if self.forced_all:
                    lines.append(("forced", "all"))
                elif not not_forced:
                    lines.append(("forced", "none-tested"))
                else:
                    lines.append(("forced", "failed at " + ",".join(str(q) for q in not_forced)))
        return lines

    def to_text(self):
        return "\n".join(f"{k}: {v}" for k, v in self.to_lines()) + "\n"

    def to_json_lines(self):
        out = []
        for k, v in self.to_lines():
            out.append(json.dumps({"key": k, "value": v}, sort_keys=True))
        return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# the unit sieve


def seventh_power_condition(u, pair, case, q, label):
    """Single-prime, single-pair form of the character condition."""
    spl = split_prime(q, FULL)
    if q == 13 or pow(q, spl.f, 7) != 1:
        return True
    ch = _character(q, label)
    a, b = (pair.a, pair.b) if isinstance(pair, PairResidue) else pair
    val = ch.value(CyclotomicInt.from_int(a) + CyclotomicInt.zeta_power(1) * b)
    if val is None:
        return True  # the dividing branch: conservatively satisfiable
    exps = u.exponents if isinstance(u, UnitClass) else u
    target = sum(e * ch.value(cyclotomic_unit(k)) for e, k in zip(exps, GENERATOR_INDICES))
    target = (target + case.delta * ch.value(ONE_MINUS_ZETA)) % 7
    return val == target


def surviving_units(case, primes, model=None, use_modular=True, target_pair=(1, -1), threads=1):
    """Run the unit sieve; returns a SieveReport with the surviving classes."""
    if use_modular and model is None and any(q not in MODULAR_EXCLUDED for q in primes):
        raise ValueError("modular constraints requested but no curve model given")
    target = TraceTarget(model, target_pair) if (use_modular and model is not None) else None
    alive = np.ones(NUM_CLASSES, dtype=bool)
    constraints = [SEVENTH_POWER] + ([MODULAR] if target else [])
    report = SieveReport(
        kind="unit-sieve",
        case=case,
        primes=tuple(primes),
        constraints=tuple(constraints),
        target=target.describe() if target else "none",
    )
    for q in primes:
        a_arr, b_arr = _pair_domain(q, case)
        pair_ok = np.ones(len(a_arr), dtype=bool)
        used = []
        additive = 0
        if target and q not in MODULAR_EXCLUDED:
            mm = ModularMask(q, model, target, a_arr, b_arr, threads)
            pair_ok &= mm.table
            additive = mm.additive_flagged
            used.append(MODULAR)
        chars = CharacterData(q, a_arr, b_arr)
        before = int(alive.sum())
        if chars.exists:
            used.insert(0, SEVENTH_POWER)
            sat = chars.sat_table(pair_ok)
            offsets = (case.delta * chars.one_minus_zeta) % 7
            mask = kernels.survivor_mask(chars.gens, offsets, sat)
            alive &= mask
        elif used:
            if not pair_ok.any():
                alive[:] = False
        report.prime_summaries.append(
            PrimeSummary(
                q=q,
                constraints=tuple(used),
                pairs=len(a_arr),
                additive_flagged=additive,
                eliminated=before - int(alive.sum()),
            )
        )
    report.survivors = [u for u, ok in zip(unit_class_enumerate(), alive) if ok]
    if target:
        # the standard runs must kill the trivial class (no trivial solutions);
        # recorded here, asserted by the acceptance suite and the CLI runs
        report.trivial_class_eliminated = not alive[0]
    return report


# ---------------------------------------------------------------------------
# the level-raising pair scan


def c13_value(a, b):
    """(a^13 + b^13)/(a + b) as the integer polynomial sum (-1)^i a^(12-i) b^i."""
    return sum((-1) ** i * a ** (12 - i) * b**i for i in range(13))


def descent_coprimality(a, b):
    """gcd(a+b, C13(a,b)) for coprime a, b with a + b != 0; always 1 or 13."""
    if gcd(a, b) != 1:
        raise ValueError("pair must be coprime")
    if a + b == 0:
        raise ValueError("a + b must be nonzero")
    g = gcd(a + b, c13_value(a, b))
    if g not in (1, 13):
        raise AssertionError(f"coprimality lemma violated: gcd = {g}")
    return g


def _is_seventh_power_mod(x, q):
    x %= q
    return x == 0 or pow(x, (q - 1) // 7, q) == 1


def c1c2_condition(pair, q):
    """Existence of c1, c2 mod q with a+b = 3 c1^7 and C13(a,b) = c2^7.

    Only meaningful for q = 1 mod 7 in the branch without the extra
    ramified factor; vanishing quantities are vacuously representable.
    """
    if q % 7 != 1:
        raise ValueError("condition needs q = 1 mod 7")
    a, b = (pair.a, pair.b) if isinstance(pair, PairResidue) else pair
    s = (a + b) % q
    first = _is_seventh_power_mod(s * pow(3, -1, q), q)
    second = _is_seventh_power_mod(c13_value(a % q, b % q), q)
    return first and second


def surviving_pairs(q, unit, case, model=None, constraints=(SEVENTH_POWER, MODULAR), threads=1):
    """Pairs mod q compatible with the selected constraints for a fixed unit.

    Returns (pairs, summary).  Constraints that do not apply at q (no
    order-7 character, excluded modular prime, c1c2 at q != 1 mod 7) are
    skipped; the summary records which ones actually ran.
    """
    a_arr, b_arr = _pair_domain(q, case)
    ok = np.ones(len(a_arr), dtype=bool)
    used = []
    additive = 0
    if MODULAR in constraints and q not in MODULAR_EXCLUDED:
        if model is None:
            raise ValueError("modular constraint requested but no curve model given")
        target = TraceTarget(model)
        mm = ModularMask(q, model, target, a_arr, b_arr, threads)
        ok &= mm.table
        additive = mm.additive_flagged
        used.append(MODULAR)
    if SEVENTH_POWER in constraints:
        chars = CharacterData(q, a_arr, b_arr)
        if chars.exists:
            targets = chars.unit_targets(unit, case.delta)
            for col, t in zip(chars.cols, targets):
                ok &= (col == -1) | (col == t)
            used.insert(0, SEVENTH_POWER)
    if C1C2 in constraints and q % 7 == 1 and not case.thirteen_divides:
        c = np.array(
            [c1c2_condition((int(a), int(b)), q) for a, b in zip(a_arr, b_arr)], dtype=bool
        )
        ok &= c
        used.append(C1C2)
    pairs = [PairResidue(q, int(a), int(b)) for a, b in zip(a_arr[ok], b_arr[ok])]
    summary = PrimeSummary(
        q=q,
        constraints=tuple(used),
        pairs=len(a_arr),
        additive_flagged=additive,
        survivors=len(pairs),
        forced=all((p.a + p.b) % q == 0 for p in pairs) if used else None,
    )
    return pairs, summary


def level_raising_scan(qs, unit, case, model=None, constraints=(SEVENTH_POWER, MODULAR), threads=1):
    """Scan each q: do all surviving pairs satisfy q | a+b?"""
    report = SieveReport(
        kind="level-raising-scan",
        case=case,
        primes=tuple(qs),
        constraints=tuple(constraints),
        target="E(1,-1)" if (MODULAR in constraints and model is not None) else "none",
    )
    forced_flags = []
    for q in qs:
        pairs, summary = surviving_pairs(q, unit, case, model, constraints, threads)
        report.prime_summaries.append(summary)
        if summary.forced is None:
            report.no_information.append(q)
        else:
            forced_flags.append(summary.forced)
    report.forced_all = bool(forced_flags) and all(forced_flags)
    return report
