"""Exact multilinear polynomial arithmetic and the nondeterministic degree engine.

Polynomials live over the rationals in one of two bases:

* MONOMIAL: p(x) = sum_S a_S * prod_{i in S} x_i
* FOURIER:  p(x) = sum_S c_S * (-1)^{|x & S|}

A variable-index set S is packed as a bitmask with x_1 at bit 0, matching the
truth-table encoding.  Multiplication reduces multilinearly (x_i^2 = x_i),
which is sound because polynomials are only ever evaluated on {0,1}^n.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .boolfn import CapExceeded, SymmetricProfile, TruthTable, _CubeClassifier
from .linalg import dot, nullspace

MONOMIAL = "MONOMIAL"
FOURIER = "FOURIER"

POLY_TABLE_CAP = 16   # operations that touch all 2^n points
NDEG_CAP = 10
DEFAULT_SEED = 20030  # all randomized constructions default to this stream


class IdenticallyZero(ValueError):
    """No nondeterministic polynomial exists for the all-zero function."""


class ConstantPolynomial(ValueError):
    """The nonzero-probability bound needs a nonconstant polynomial."""


class InvalidWitness(ValueError):
    """A polynomial failed its nonzero-pattern check against the function."""


@dataclass(frozen=True, eq=True)
class MultilinearPoly:
    n: int
    basis: str
    coeffs: dict

    @staticmethod
    def make(n: int, basis: str, coeffs) -> "MultilinearPoly":
        if basis not in (MONOMIAL, FOURIER):
            raise ValueError(f"unknown basis {basis!r}")
        norm = {}
        for mask, c in dict(coeffs).items():
            if not 0 <= mask < (1 << n):
                raise ValueError(f"monomial mask {mask} out of range for n={n}")
            c = Fraction(c)
            if c:
                norm[int(mask)] = c
        return MultilinearPoly(n, basis, norm)

    @staticmethod
    def constant(n: int, value, basis: str = MONOMIAL) -> "MultilinearPoly":
        return MultilinearPoly.make(n, basis, {0: value})

    @property
    def degree(self) -> int:
        """Max |S| with nonzero coefficient; -1 for the zero polynomial."""
        return max((m.bit_count() for m in self.coeffs), default=-1)

    def is_zero(self) -> bool:
        return not self.coeffs

    def evaluate(self, x: int) -> Fraction:
        if self.basis == MONOMIAL:
            return sum((c for m, c in self.coeffs.items() if m & x == m),
                       Fraction(0))
        return sum((-c if (m & x).bit_count() & 1 else c
                    for m, c in self.coeffs.items()), Fraction(0))

    def values(self) -> list:
        """Value at every point of {0,1}^n, indexed by input mask."""
        if self.n > POLY_TABLE_CAP:
            raise CapExceeded(f"full evaluation capped at n<={POLY_TABLE_CAP}")
        size = 1 << self.n
        arr = [Fraction(0)] * size
        for m, c in self.coeffs.items():
            arr[m] = c
        if self.basis == MONOMIAL:
            _zeta_inplace(arr, self.n)
        else:
            _wht_inplace(arr, self.n)
        return arr

    # -- arithmetic ---------------------------------------------------------

    def _binop(self, other, sign):
        if isinstance(other, (int, Fraction)):
            other = MultilinearPoly.constant(self.n, other, self.basis)
        if other.n != self.n or other.basis != self.basis:
            raise ValueError("operands must share n and basis")
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            v = out.get(m, Fraction(0)) + sign * c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return MultilinearPoly(self.n, self.basis, out)

    def __add__(self, other):
        return self._binop(other, 1)

    def __sub__(self, other):
        return self._binop(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, k) -> "MultilinearPoly":
        k = Fraction(k)
        if not k:
            return MultilinearPoly(self.n, self.basis, {})
        return MultilinearPoly(self.n, self.basis,
                               {m: c * k for m, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if other.n != self.n or other.basis != self.basis:
            raise ValueError("operands must share n and basis")
        out = {}
        combine = (lambda a, b: a | b) if self.basis == MONOMIAL else \
                  (lambda a, b: a ^ b)
        for ma, ca in self.coeffs.items():
            for mb, cb in other.coeffs.items():
                m = combine(ma, mb)
                v = out.get(m, Fraction(0)) + ca * cb
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return MultilinearPoly(self.n, self.basis, out)

    __rmul__ = __mul__

    def __str__(self):
        return format_poly(self)


# ---------------------------------------------------------------------------
# exact transforms on full value tables


def _zeta_inplace(arr, n):
    """Subset sums: arr[x] <- sum_{S subseteq x} arr[S]."""
    for i in range(n):
        bit = 1 << i
        for x in range(len(arr)):
            if x & bit:
                arr[x] += arr[x ^ bit]


def _mobius_inplace(arr, n):
    """Inverse of the subset-sum transform."""
    for i in range(n):
        bit = 1 << i
        for x in range(len(arr)):
            if x & bit:
                arr[x] -= arr[x ^ bit]


def _wht_inplace(arr, n):
    """Walsh-Hadamard butterfly: arr[x] <- sum_S arr[S] * (-1)^{|x & S|}."""
    for i in range(n):
        bit = 1 << i
        for x in range(len(arr)):
            if not x & bit:
                a, b = arr[x], arr[x | bit]
                arr[x] = a + b
                arr[x | bit] = a - b


def exact_poly(f: TruthTable, cap: int = POLY_TABLE_CAP) -> MultilinearPoly:
    """The unique multilinear polynomial agreeing with f on {0,1}^n."""
    if f.n > cap:
        raise CapExceeded(f"interpolation capped at n<={cap}")
    arr = [Fraction(f.value(x)) for x in range(f.size)]
    _mobius_inplace(arr, f.n)
    p = MultilinearPoly.make(f.n, MONOMIAL,
                             {m: c for m, c in enumerate(arr) if c})
    vals = p.values()
    assert all(vals[x] == f.value(x) for x in range(f.size))
    return p


def to_fourier(p: MultilinearPoly) -> MultilinearPoly:
    """Rewrite a monomial-basis polynomial in the Fourier basis (exact)."""
    if p.basis != MONOMIAL:
        raise ValueError("expected monomial basis")
    vals = p.values()
    _wht_inplace(vals, p.n)  # self-inverse up to 2^n
    scale = Fraction(1, 1 << p.n)
    return MultilinearPoly.make(p.n, FOURIER,
                                {m: v * scale for m, v in enumerate(vals) if v})


def from_fourier(p: MultilinearPoly) -> MultilinearPoly:
    """Rewrite a Fourier-basis polynomial in the monomial basis (exact)."""
    if p.basis != FOURIER:
        raise ValueError("expected Fourier basis")
    vals = p.values()
    _mobius_inplace(vals, p.n)
    return MultilinearPoly.make(p.n, MONOMIAL,
                                {m: v for m, v in enumerate(vals) if v})


def evaluate(p: MultilinearPoly, x: int) -> Fraction:
    return p.evaluate(x)


def verify_ndet(p: MultilinearPoly, f: TruthTable) -> bool:
    """Exact pointwise check: p(x) != 0 iff f(x) = 1, over all 2^n inputs."""
    if p.n != f.n:
        return False
    vals = p.values()
    return all(bool(vals[x]) == bool(f.value(x)) for x in range(f.size))


def weight_offset_poly(n: int, k: int = 0) -> MultilinearPoly:
    """(sum_i x_i) - k in the monomial basis."""
    coeffs = {1 << i: Fraction(1) for i in range(n)}
    if k:
        coeffs[0] = Fraction(-k)
    return MultilinearPoly.make(n, MONOMIAL, coeffs)


# ---------------------------------------------------------------------------
# nondeterministic degree


@dataclass(frozen=True)
class NdegCertificate:
    """Outcome of a single degree-feasibility decision.

    Exactly one of witness/evidence is set: a verified nondeterministic
    polynomial of the probed degree, or a 1-input at which every degree-d
    polynomial vanishing on f^{-1}(0) vanishes too.
    """

    degree: int
    witness: MultilinearPoly | None
    evidence: int | None
    resamples: int = 0

    @property
    def feasible(self) -> bool:
        return self.witness is not None


def _masks_by_degree(n, min_deg, max_deg):
    masks = [m for m in range(1 << n) if min_deg <= m.bit_count() <= max_deg]
    masks.sort(key=lambda m: (m.bit_count(), m))
    return masks


def _sample_combination(rng, basis, eval_rows, coeff_bound):
    """Random integer combination of basis vectors, nonzero on every row.

    eval_rows[i] holds the basis evaluations at the i-th required point; the
    union bound makes each attempt succeed with probability > 1/2.
    """
    resamples = 0
    nb = len(basis)
    while True:
        lam = [rng.randint(1, coeff_bound) for _ in range(nb)]
        if all(sum(lam[k] * row[k] for k in range(nb)) != 0
               for row in eval_rows):
            return lam, resamples
        resamples += 1


def ndeg_decide(f: TruthTable, d: int, seed: int = DEFAULT_SEED,
                cap: int = NDEG_CAP, rng: random.Random | None = None
                ) -> NdegCertificate:
    """Decide whether f admits a nondeterministic polynomial of degree <= d.

    Feasibility criterion: with V_d the space of degree-<=d multilinear
    polynomials vanishing on f^{-1}(0), f has a witness iff no 1-input's
    evaluation functional vanishes on all of V_d.  The engine solves either
    the coefficient-space system (rows = 0-inputs, columns = monomials of
    degree <= d) or the equivalent value-space system (free values on the
    1-inputs, Möbius coefficients above degree d forced to zero), whichever
    is smaller.  Witnesses are random integer combinations drawn from
    {1..2^(n+1)}, verified exactly and resampled on failure.
    """
    if f.n > cap:
        raise CapExceeded(f"ndeg capped at n<={cap}")
    if d < 0:
        raise ValueError("degree must be nonnegative")
    ones = f.ones()
    if not ones:
        raise IdenticallyZero("no nondeterministic polynomial for f == 0")
    zeros = f.zeros()
    rng = rng or random.Random(seed)
    n = f.n
    low = _masks_by_degree(n, 0, min(d, n))
    high = _masks_by_degree(n, d + 1, n)
    primal_cost = _elim_cost(len(zeros), len(low))
    dual_cost = _elim_cost(len(high), len(ones))
    if primal_cost <= dual_cost:
        return _ndeg_decide_primal(f, d, low, zeros, ones, rng)
    return _ndeg_decide_dual(f, d, high, ones, rng)


def _elim_cost(rows, cols):
    return rows * cols * min(rows, cols)


def _coeff_bound(n):
    return 1 << (n + 1)


def _ndeg_decide_primal(f, d, cols, zeros, ones, rng):
    rows = [[1 if (m & x) == m else 0 for m in cols] for x in zeros]
    basis = nullspace(rows, len(cols))
    vectors = [vec for _, vec in basis]
    eval_rows = []
    for x in ones:
        indicator = [1 if (m & x) == m else 0 for m in cols]
        evals = tuple(dot(indicator, vec) for vec in vectors)
        if not any(evals):
            return NdegCertificate(d, None, x)
        eval_rows.append(evals)
    lam, resamples = _sample_combination(rng, vectors, eval_rows,
                                         _coeff_bound(f.n))
    coeffs = {}
    for k, vec in enumerate(vectors):
        for pos, v in enumerate(vec):
            if v:
                coeffs[cols[pos]] = coeffs.get(cols[pos], 0) + lam[k] * v
    witness = MultilinearPoly.make(f.n, MONOMIAL, coeffs)
    if not verify_ndet(witness, f):
        raise AssertionError("sampled witness failed exact verification")
    return NdegCertificate(d, witness, None, resamples)


def _ndeg_decide_dual(f, d, high_masks, ones, rng):
    rows = []
    for m in high_masks:
        row = []
        for x in ones:
            if (x & m) == x:
                row.append(-1 if (m.bit_count() - x.bit_count()) & 1 else 1)
            else:
                row.append(0)
        rows.append(row)
    basis = nullspace(rows, len(ones))
    vectors = [vec for _, vec in basis]
    eval_rows = []
    for j, x in enumerate(ones):
        evals = tuple(vec[j] for vec in vectors)
        if not any(evals):
            return NdegCertificate(d, None, x)
        eval_rows.append(evals)
    lam, resamples = _sample_combination(rng, vectors, eval_rows,
                                         _coeff_bound(f.n))
    arr = [Fraction(0)] * f.size
    for j, x in enumerate(ones):
        arr[x] = Fraction(sum(lam[k] * vec[j] for k, vec in enumerate(vectors)))
    _mobius_inplace(arr, f.n)
    witness = MultilinearPoly.make(f.n, MONOMIAL,
                                   {m: c for m, c in enumerate(arr) if c})
    if witness.degree > d or not verify_ndet(witness, f):
        raise AssertionError("sampled witness failed exact verification")
    return NdegCertificate(d, witness, None, resamples)


def ndeg(f: TruthTable, seed: int = DEFAULT_SEED, cap: int = NDEG_CAP):
    """Smallest degree admitting a nondeterministic polynomial, with certificate.

    Scans d = 0, 1, ... upward; raises IdenticallyZero for f == 0.
    """
    rng = random.Random(seed)
    for d in range(f.n + 1):
        cert = ndeg_decide(f, d, cap=cap, rng=rng)
        if cert.feasible:
            return d, cert
    raise AssertionError("degree n is always feasible for f != 0")


# ---------------------------------------------------------------------------
# symmetric functions: product witness and a fast exact ndeg


def symmetric_ndet_poly(prof: SymmetricProfile) -> MultilinearPoly:
    """(|x| - k_1)...(|x| - k_z), multilinearized; degree <= z."""
    if all(v == 0 for v in prof.values):
        raise IdenticallyZero("no nondeterministic polynomial for f == 0")
    p = MultilinearPoly.constant(prof.n, 1)
    for k in prof.zero_weights:
        p = p * weight_offset_poly(prof.n, k)
    return p


def symmetric_ndeg(prof: SymmetricProfile) -> int:
    """Exact ndeg of a symmetric function, by per-weight-level collapse.

    For a level-w 1-input, the evaluation functional vanishes on V_d iff it
    vanishes on the subspace invariant under permutations fixing that input
    blockwise; invariant polynomials are spanned by the monomial orbit sums
    with a variables from the first w and b from the rest, so each level
    reduces to an exact integer system on (a, b) pairs.  Columns are ordered
    by total degree, so one staircase elimination answers every d at once.
    """
    zeros = set(prof.zero_weights)
    one_levels = [w for w in range(prof.n + 1) if w not in zeros]
    if not one_levels:
        raise IdenticallyZero("no nondeterministic polynomial for f == 0")
    return max(_level_dmin(prof.n, zeros, w) for w in one_levels)


def _level_dmin(n, zeros, w):
    pts = [(s, t) for s in range(w + 1) for t in range(n - w + 1)
           if (s + t) in zeros]
    cols = sorted(((a, b) for a in range(w + 1) for b in range(n - w + 1)),
                  key=lambda ab: (ab[0] + ab[1], ab[0], ab[1]))
    f_vec = [comb(w, a) if b == 0 else 0 for a, b in cols]
    if not pts:
        return 0
    rows = [[comb(s, a) * comb(t, b) for a, b in cols] for s, t in pts]
    for j, vec in nullspace(rows, len(cols)):
        if dot(f_vec, vec):
            a, b = cols[j]
            return a + b
    raise AssertionError("level is always feasible at degree n")


# ---------------------------------------------------------------------------


def schwartz_stats(p: MultilinearPoly, cap: int = POLY_TABLE_CAP):
    """(Pr[p != 0 on a random Boolean point], 2^-deg(p)); asserts pr >= bound."""
    if p.degree <= 0:
        raise ConstantPolynomial("nonzero-probability bound needs deg >= 1")
    if p.n > cap:
        raise CapExceeded(f"exhaustive evaluation capped at n<={cap}")
    vals = p.values()
    pr = Fraction(sum(1 for v in vals if v), len(vals))
    bound = Fraction(1, 1 << p.degree)
    assert pr >= bound, "nonzero-probability bound violated"
    return pr, bound


def _restrict_coeffs(coeffs, var_bit, value):
    out = {}
    for m, c in coeffs.items():
        if m & var_bit:
            if value:
                key = m ^ var_bit
                v = out.get(key, Fraction(0)) + c
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        else:
            v = out.get(m, Fraction(0)) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def nisan_smolensky_procedure(f: TruthTable, p: MultilinearPoly):
    """Query procedure from a nondeterministic polynomial.

    Repeatedly takes a minimal 0-certificate of the current restriction,
    queries its variables, and restricts the polynomial by the answers; every
    round strictly reduces deg(p), so the worst case is at most
    C^(0)(f) * deg(p) queries.  Returns (value_oracle, worst_case_queries),
    the oracle mapping an input to (value, queries_used); the worst case is
    taken over all 2^n inputs, asserting correctness on each.
    """
    if p.basis != MONOMIAL:
        p = from_fourier(p)
    if not verify_ndet(p, f):
        raise InvalidWitness("polynomial does not match the function pattern")
    classifier = _CubeClassifier(f)
    full = f.size - 1

    def min_zero_certificate(amask, avals):
        free = [i for i in range(f.n) if not (amask >> i) & 1]
        for k in range(len(free) + 1):
            for combo in itertools.combinations(free, k):
                smask = 0
                for i in combo:
                    smask |= 1 << i
                for pattern in range(1 << k):
                    vbits = 0
                    for j, i in enumerate(combo):
                        if (pattern >> j) & 1:
                            vbits |= 1 << i
                    if classifier.const(amask | smask, avals | vbits) == 0:
                        return smask
        return None

    def oracle(x):
        coeffs = dict(p.coeffs)
        amask = avals = queries = 0
        while True:
            deg = max((m.bit_count() for m in coeffs), default=-1)
            if deg <= 0:
                return (1 if coeffs else 0), queries
            forced = classifier.const(amask, avals)
            if forced is not None:
                return forced, queries
            smask = min_zero_certificate(amask, avals)
            assert smask is not None, "nonconstant restriction has a 0-input"
            queries += smask.bit_count()
            amask |= smask
            avals |= x & smask
            bit = smask
            while bit:
                low = bit & -bit
                coeffs = _restrict_coeffs(coeffs, low, bool(x & low))
                bit ^= low
            new_deg = max((m.bit_count() for m in coeffs), default=-1)
            assert new_deg < deg, "restriction round must reduce the degree"

    worst = 0
    for x in range(full + 1):
        value, used = oracle(x)
        assert value == f.value(x), "procedure disagrees with the table"
        worst = max(worst, used)
    return oracle, worst


# ---------------------------------------------------------------------------
# text format: basis=MONOMIAL|FOURIER; terms=<coef>*x{S as comma list}


def format_poly(p: MultilinearPoly) -> str:
    if not p.coeffs:
        terms = "0"
    else:
        parts = []
        for m in sorted(p.coeffs, key=lambda m: (m.bit_count(), m)):
            idxs = ",".join(str(i + 1) for i in range(p.n) if (m >> i) & 1)
            parts.append(f"{p.coeffs[m]}*x{{{idxs}}}")
        terms = " + ".join(parts)
    return f"basis={p.basis}; terms={terms}"


def parse_poly(text: str, n: int) -> MultilinearPoly:
    try:
        basis_part, terms_part = text.strip().split("; ", 1)
        basis = basis_part.removeprefix("basis=")
        body = terms_part.removeprefix("terms=")
    except ValueError as e:
        raise ValueError(f"bad polynomial format {text!r}") from e
    if not basis_part.startswith("basis=") or not terms_part.startswith("terms="):
        raise ValueError(f"bad polynomial format {text!r}")
    coeffs = {}
    if body.strip() != "0":
        for term in body.split(" + "):
            coef_s, mono = term.rsplit("*x{", 1)
            if not mono.endswith("}"):
                raise ValueError(f"bad term {term!r}")
            mask = 0
            inner = mono[:-1]
            if inner:
                for tok in inner.split(","):
                    i = int(tok)
                    if not 1 <= i <= n:
                        raise ValueError(f"variable x{i} out of range")
                    mask |= 1 << (i - 1)
            coeffs[mask] = coeffs.get(mask, Fraction(0)) + Fraction(coef_s)
    return MultilinearPoly.make(n, basis, coeffs)
