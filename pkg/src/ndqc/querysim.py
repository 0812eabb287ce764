"""Query-model quantum algorithms: numeric and symbolic simulation, the
polynomial-to-algorithm compiler, algorithm-to-polynomial extraction, and the
certificate-verifier transform.

Register conventions: an algorithm on w qubits uses basis labels 0..2^w-1
with qubit q at bit q of the label; written as a ket the leftmost qubit is
the highest index.  The declared output qubit follows the leftmost-qubit
convention: acceptance is the squared norm of the output-qubit = 1 component.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .boolfn import CapExceeded, TruthTable
from .polys import (MONOMIAL, InvalidWitness, MultilinearPoly,
                    to_fourier, verify_ndet)
from .statevec import (HADAMARD, ExactState, ScaledMatrix,
                       apply_matrix_float, apply_scaled_matrix,
                       subset_index_maps)

DIM_CAP = 1 << 20
SYMBOLIC_DIM_CAP = 1 << 14
FLOAT_NORM_TOL = 1e-12
VERIFIER_N_CAP = 4
VERIFIER_M_CAP = 6


class NotNondeterministic(ValueError):
    """Acceptance is zero on some 1-input or positive on some 0-input."""


class EmptyOneSet(ValueError):
    """The verifier transform needs at least one 1-input."""


class VerifierClauseViolation(ValueError):
    """A verifier broke clause (1) or (2) of the certificate definition."""


# ---------------------------------------------------------------------------
# gates


@dataclass(frozen=True)
class Unitary:
    """Fixed unitary (dense scaled-rational matrix) on named qubits."""

    qubits: tuple
    matrix: ScaledMatrix

    cost = 0


@dataclass(frozen=True)
class FlipOnZero:
    """Fixed unitary permutation: X on target iff all control qubits are 0."""

    controls: tuple
    target: int

    cost = 0


@dataclass(frozen=True)
class BitOracle:
    """|i, b, z> -> |i, b ^ x_i, z>; index value i (from the index qubits,
    tuple order = significance) addresses variable x_{i+1}; out-of-range
    index values act as identity."""

    index_qubits: tuple
    target: int

    cost = 1


@dataclass(frozen=True)
class PhaseOracle:
    """|S> -> (-1)^{x . S} |S> on the subset register, with certified query
    cost equal to the degree bound; qubit j of the register is membership of
    variable x_{j+1}.  Application asserts the state is supported on
    |S| <= degree_bound."""

    qubits: tuple
    degree_bound: int

    @property
    def cost(self):
        return self.degree_bound


@dataclass(frozen=True)
class InputGate:
    """Input-indexed family of unitaries with a certified query cost.

    The same accounting device the phase gate uses: the cost is declared by
    construction rather than expanded into oracle calls.  Used by the
    certificate-verifier transform at toy scale.
    """

    qubits: tuple
    matrices: dict
    cost: int


@dataclass(frozen=True)
class StatePrep:
    """Initial state: amplitudes (re + i*im) / sqrt(scale2), unit norm."""

    re: tuple
    im: tuple | None
    scale2: object

    def __post_init__(self):
        s = sum(v * v for v in self.re)
        if self.im is not None:
            s += sum(v * v for v in self.im)
        if Fraction(s, 1) != Fraction(self.scale2, 1):
            raise ValueError("initial state must have unit norm")

    @property
    def dim(self):
        return len(self.re)

    def to_exact(self) -> ExactState:
        return ExactState(self.re, self.im, self.scale2)


def basis_prep(num_qubits: int, label: int = 0) -> StatePrep:
    re = [0] * (1 << num_qubits)
    re[label] = 1
    return StatePrep(tuple(re), None, 1)


@dataclass(frozen=True)
class QueryAlgorithm:
    n: int
    num_qubits: int
    prep: StatePrep
    gates: tuple
    query_cost: int
    output_qubit: int

    def __post_init__(self):
        if (1 << self.num_qubits) > DIM_CAP:
            raise CapExceeded("state dimension above 2^20")
        if self.prep.dim != 1 << self.num_qubits:
            raise ValueError("initial state dimension mismatch")
        if not 0 <= self.output_qubit < self.num_qubits:
            raise ValueError("output qubit out of range")
        total = 0
        for g in self.gates:
            qubits = g.qubits if not isinstance(g, (BitOracle, FlipOnZero)) \
                else (g.index_qubits + (g.target,) if isinstance(g, BitOracle)
                      else g.controls + (g.target,))
            if len(set(qubits)) != len(qubits) or \
                    any(not 0 <= q < self.num_qubits for q in qubits):
                raise ValueError(f"bad qubit set on gate {g!r}")
            if isinstance(g, Unitary):
                if len(g.qubits) > 12:
                    raise CapExceeded("dense gate wider than 12 qubits")
                if not g.matrix.is_unitary():
                    raise ValueError("non-unitary gate")
            total += g.cost
        if total != self.query_cost:
            raise ValueError("declared query cost must equal summed gate costs")

    def accepting_labels(self):
        bit = 1 << self.output_qubit
        return [i for i in range(1 << self.num_qubits) if i & bit]


# ---------------------------------------------------------------------------
# numeric simulation


def _oracle_pairs(num_qubits, gate: BitOracle, n):
    """(label_target0, variable_bit) pairs the oracle may swap."""
    tbit = 1 << gate.target
    out = []
    for label in range(1 << num_qubits):
        if label & tbit:
            continue
        i = 0
        for j, q in enumerate(gate.index_qubits):
            if (label >> q) & 1:
                i |= 1 << j
        out.append((label, 1 << i if i < n else 0))
    return out


def _apply_gate_exact(state: ExactState, gate, x: int, n: int):
    if isinstance(gate, Unitary):
        apply_scaled_matrix(state, gate.qubits, gate.matrix)
    elif isinstance(gate, InputGate):
        mat = gate.matrices[x]
        if not mat.is_unitary():
            raise ValueError("non-unitary gate")
        apply_scaled_matrix(state, gate.qubits, mat)
    elif isinstance(gate, FlipOnZero):
        cmask = 0
        for q in gate.controls:
            cmask |= 1 << q
        tbit = 1 << gate.target
        for label in range(state.dim):
            if label & (cmask | tbit):
                continue
            _swap_amp(state, label, label | tbit)
    elif isinstance(gate, BitOracle):
        tbit = 1 << gate.target
        for label, varbit in _oracle_pairs(_nq(state.dim), gate, n):
            if varbit and (x & varbit):
                _swap_amp(state, label, label | tbit)
    elif isinstance(gate, PhaseOracle):
        d = gate.degree_bound
        for label in range(state.dim):
            s = _subset_of(label, gate.qubits)
            if s.bit_count() > d:
                if state.re[label] or (state.im and state.im[label]):
                    raise ValueError(
                        "phase gate support above its degree bound")
                continue
            if (s & x).bit_count() & 1:
                state.re[label] = -state.re[label]
                if state.im is not None:
                    state.im[label] = -state.im[label]
    else:
        raise TypeError(f"unknown gate {gate!r}")


def _swap_amp(state, a, b):
    state.re[a], state.re[b] = state.re[b], state.re[a]
    if state.im is not None:
        state.im[a], state.im[b] = state.im[b], state.im[a]


def _subset_of(label, qubits):
    s = 0
    for j, q in enumerate(qubits):
        if (label >> q) & 1:
            s |= 1 << j
    return s


def _nq(dim):
    return dim.bit_length() - 1


def simulate(algo: QueryAlgorithm, x: int, mode: str = "exact",
             check_norm: str | None = None):
    """Run the algorithm on input x.

    Returns (final_state, acceptance_probability); exact mode yields an
    ExactState and a Fraction, float mode an ndarray and a float.
    check_norm: "gates" verifies unit norm after every gate, "final" only at
    the end; default is per-gate up to 10-qubit states.
    """
    if not 0 <= x < (1 << algo.n):
        raise ValueError("input out of range")
    if check_norm is None:
        check_norm = "gates" if algo.num_qubits <= 10 else "final"
    if mode == "exact":
        state = algo.prep.to_exact()
        for gate in algo.gates:
            _apply_gate_exact(state, gate, x, algo.n)
            if check_norm == "gates":
                assert state.norm2() == 1, "norm must be preserved exactly"
        assert state.norm2() == 1, "norm must be preserved exactly"
        return state, state.probability(algo.accepting_labels())
    if mode != "float":
        raise ValueError("mode must be 'exact' or 'float'")
    vec = algo.prep.to_exact().to_ndarray()
    for gate in algo.gates:
        vec = _apply_gate_float(vec, algo, gate, x)
        drift = abs(np.vdot(vec, vec).real - 1.0)
        if drift > FLOAT_NORM_TOL:
            raise ValueError(f"norm drift {drift:.2e} in float mode")
    labels = np.array(algo.accepting_labels())
    acc = float(np.sum(np.abs(vec[labels]) ** 2)) if labels.size else 0.0
    return vec, acc


def _apply_gate_float(vec, algo, gate, x):
    if isinstance(gate, Unitary):
        return apply_matrix_float(vec, algo.num_qubits, gate.qubits,
                                  gate.matrix.to_ndarray())
    if isinstance(gate, InputGate):
        return apply_matrix_float(vec, algo.num_qubits, gate.qubits,
                                  gate.matrices[x].to_ndarray())
    if isinstance(gate, FlipOnZero):
        out = vec.copy()
        cmask = 0
        for q in gate.controls:
            cmask |= 1 << q
        tbit = 1 << gate.target
        for label in range(len(vec)):
            if not label & (cmask | tbit):
                out[label], out[label | tbit] = vec[label | tbit], vec[label]
        return out
    if isinstance(gate, BitOracle):
        out = vec.copy()
        tbit = 1 << gate.target
        for label, varbit in _oracle_pairs(algo.num_qubits, gate, algo.n):
            if varbit and (x & varbit):
                out[label], out[label | tbit] = vec[label | tbit], vec[label]
        return out
    if isinstance(gate, PhaseOracle):
        out = vec.copy()
        for label in range(len(vec)):
            s = _subset_of(label, gate.qubits)
            if s.bit_count() > gate.degree_bound:
                if abs(out[label]) > 0:
                    raise ValueError(
                        "phase gate support above its degree bound")
                continue
            if (s & x).bit_count() & 1:
                out[label] = -out[label]
        return out
    raise TypeError(f"unknown gate {gate!r}")


# ---------------------------------------------------------------------------
# compiler: nondeterministic polynomial -> 1-sided query algorithm


def compile_from_ndet_poly(p: MultilinearPoly, f: TruthTable) -> QueryAlgorithm:
    """Compile a Fourier-basis nondeterministic polynomial into an algorithm
    of query cost deg(p): prepare c * sum_S c_S |S>, apply the phase-query
    gate, apply Hadamards, and flip the output flag exactly on index |0^n>.
    Simulated acceptance is c^2 p(x)^2 / 2^n, positive iff f(x) = 1.
    """
    if p.basis == MONOMIAL:
        p = to_fourier(p)
    if p.n != f.n or not verify_ndet(p, f):
        raise InvalidWitness("not a nondeterministic polynomial for f")
    n = f.n
    d = p.degree
    den = lcm(*(c.denominator for c in p.coeffs.values()))
    nums = [0] * (1 << (n + 1))
    for mask, c in p.coeffs.items():
        nums[mask] = int(c * den)
    scale2 = sum(v * v for v in nums)
    prep = StatePrep(tuple(nums), None, scale2)
    gates = [PhaseOracle(tuple(range(n)), d)]
    gates.extend(Unitary((q,), HADAMARD) for q in range(n))
    gates.append(FlipOnZero(tuple(range(n)), n))
    return QueryAlgorithm(n=n, num_qubits=n + 1, prep=prep,
                          gates=tuple(gates), query_cost=d, output_qubit=n)


# ---------------------------------------------------------------------------
# symbolic simulation


@dataclass
class SymbolicState:
    """Statevector whose amplitudes are multilinear polynomials in x, as
    numerators over a common 1/sqrt(scale2)."""

    n: int
    num_qubits: int
    amplitudes: dict
    scale2: object
    output_qubit: int

    def amplitude(self, label: int) -> MultilinearPoly:
        return self.amplitudes.get(
            label, MultilinearPoly.make(self.n, MONOMIAL, {}))

    def max_degree(self) -> int:
        return max((p.degree for p in self.amplitudes.values()), default=-1)

    def acceptance_polynomial(self) -> MultilinearPoly:
        bit = 1 << self.output_qubit
        acc = MultilinearPoly.make(self.n, MONOMIAL, {})
        for label, poly in self.amplitudes.items():
            if label & bit:
                acc = acc + poly * poly
        return acc.scale(Fraction(1, 1) / self.scale2)

    def evaluate(self, x: int):
        """(amplitude numerators at x, scale2, acceptance probability)."""
        vals = {lbl: p.evaluate(x) for lbl, p in self.amplitudes.items()}
        bit = 1 << self.output_qubit
        acc = sum((v * v for lbl, v in vals.items() if lbl & bit),
                  Fraction(0)) / self.scale2
        return vals, self.scale2, acc


def symbolic_simulate(algo: QueryAlgorithm) -> SymbolicState:
    """Propagate polynomial amplitudes through the circuit.

    Requires real rational gates; input-indexed gates have no polynomial
    form and are rejected.  Amplitude degrees are asserted against the
    running query count after every gate.
    """
    if (1 << algo.num_qubits) > SYMBOLIC_DIM_CAP:
        raise CapExceeded("symbolic state dimension above 2^14")
    if algo.prep.im is not None:
        raise ValueError("complex initial state unsupported symbolically")
    n = algo.n
    amps = {}
    for label, v in enumerate(algo.prep.re):
        if v:
            amps[label] = MultilinearPoly.make(n, MONOMIAL, {0: v})
    scale2 = algo.prep.scale2
    queries = 0
    for gate in algo.gates:
        if isinstance(gate, Unitary):
            if gate.matrix.im is not None:
                raise ValueError("irrational/complex gate in symbolic mode")
            amps = _symbolic_unitary(amps, gate, algo.num_qubits, n)
            scale2 = scale2 * gate.matrix.scale2
        elif isinstance(gate, FlipOnZero):
            cmask = 0
            for q in gate.controls:
                cmask |= 1 << q
            tbit = 1 << gate.target
            for label in range(1 << algo.num_qubits):
                if not label & (cmask | tbit):
                    a, b = amps.pop(label, None), amps.pop(label | tbit, None)
                    if b is not None:
                        amps[label] = b
                    if a is not None:
                        amps[label | tbit] = a
        elif isinstance(gate, BitOracle):
            amps = _symbolic_oracle(amps, gate, algo.num_qubits, n)
            queries += 1
        elif isinstance(gate, PhaseOracle):
            amps = _symbolic_phase(amps, gate, n)
            queries += gate.degree_bound
        else:
            raise ValueError(f"gate {gate!r} has no symbolic form")
        assert max((p.degree for p in amps.values()), default=-1) <= queries, \
            "amplitude degree exceeded the query count"
    return SymbolicState(n, algo.num_qubits, amps, scale2, algo.output_qubit)


def _symbolic_unitary(amps, gate, num_qubits, n):
    bases, offs = subset_index_maps(num_qubits, gate.qubits)
    zero = MultilinearPoly.make(n, MONOMIAL, {})
    out = {}
    mat = gate.matrix.re
    k = len(offs)
    for base in bases:
        sub = [amps.get(base | o) for o in offs]
        if all(s is None for s in sub):
            continue
        for r in range(k):
            acc = zero
            row = mat[r]
            for c in range(k):
                if row[c] and sub[c] is not None:
                    acc = acc + sub[c].scale(row[c])
            if not acc.is_zero():
                out[base | offs[r]] = acc
    return out


def _symbolic_oracle(amps, gate, num_qubits, n):
    zero = MultilinearPoly.make(n, MONOMIAL, {})
    out = {}
    tbit = 1 << gate.target
    for label, varbit in _oracle_pairs(num_qubits, gate, n):
        a0 = amps.get(label)
        a1 = amps.get(label | tbit)
        if a0 is None and a1 is None:
            continue
        a0 = a0 or zero
        a1 = a1 or zero
        if not varbit:
            new0, new1 = a0, a1
        else:
            xi = MultilinearPoly.make(n, MONOMIAL, {varbit: 1})
            omx = MultilinearPoly.make(n, MONOMIAL, {0: 1, varbit: -1})
            new0 = omx * a0 + xi * a1
            new1 = omx * a1 + xi * a0
        if not new0.is_zero():
            out[label] = new0
        if not new1.is_zero():
            out[label | tbit] = new1
    return out


def _symbolic_phase(amps, gate, n):
    chi_cache = {}

    def chi(s):
        if s not in chi_cache:
            p = MultilinearPoly.make(n, MONOMIAL, {0: 1})
            bits = s
            while bits:
                low = bits & -bits
                p = p * MultilinearPoly.make(n, MONOMIAL, {0: 1, low: -2})
                bits ^= low
            chi_cache[s] = p
        return chi_cache[s]

    out = {}
    for label, poly in amps.items():
        s = _subset_of(label, gate.qubits)
        if s.bit_count() > gate.degree_bound:
            raise ValueError("phase gate support above its degree bound")
        out[label] = poly * chi(s) if s else poly
    return out


# ---------------------------------------------------------------------------
# extraction: algorithm -> nondeterministic polynomial


def extract_ndet_poly(algo: QueryAlgorithm, f: TruthTable,
                      seed: int) -> MultilinearPoly:
    """Random integer combination of the accepting amplitudes, resampled
    until it verifies as a nondeterministic polynomial for f; the result has
    degree <= the algorithm's query cost."""
    poly, _ = extract_ndet_poly_stats(algo, f, seed)
    return poly


def extract_ndet_poly_stats(algo: QueryAlgorithm, f: TruthTable, seed: int):
    if algo.n != f.n:
        raise ValueError("algorithm arity does not match the function")
    for x in range(f.size):
        _, acc = simulate(algo, x)
        if bool(acc) != bool(f.value(x)):
            raise NotNondeterministic(
                f"acceptance pattern breaks at input {x}")
    sym = symbolic_simulate(algo)
    bit = 1 << algo.output_qubit
    parts = [p for lbl, p in sorted(sym.amplitudes.items())
             if lbl & bit and not p.is_zero()]
    rng = random.Random(seed)
    bound = 1 << (f.n + 1)
    retries = 0
    while True:
        p = MultilinearPoly.make(f.n, MONOMIAL, {})
        for part in parts:
            p = p + part.scale(rng.randint(1, bound))
        if verify_ndet(p, f):
            break
        retries += 1
    assert p.degree <= algo.query_cost
    return p, retries


# ---------------------------------------------------------------------------
# certificate verifiers (appendix transform)


@dataclass(frozen=True)
class VerifierSpec:
    """Toy-scale certificate verifier: per-input unitaries on m qubits with a
    certified query cost, an explicit finite certificate set, and the chosen
    certificate for each 1-input.  All certificate states must share one
    scale so their superposition stays rational."""

    n: int
    m: int
    query_cost: int
    unitaries: dict
    certificates: tuple
    chosen: dict

    def __post_init__(self):
        if self.n > VERIFIER_N_CAP or self.m > VERIFIER_M_CAP:
            raise CapExceeded(
                f"verifier transform capped at n<={VERIFIER_N_CAP}, "
                f"m<={VERIFIER_M_CAP}")
        scales = {c.scale2 for c in self.certificates}
        if len(scales) > 1:
            raise ValueError("certificate states must share one scale")
        for c in self.certificates:
            if c.dim != 1 << self.m:
                raise ValueError("certificate dimension mismatch")

    def run_on(self, x: int, cert: StatePrep):
        """Acceptance probability of V_x applied to a certificate state."""
        state = cert.to_exact()
        mat = self.unitaries[x]
        if not mat.is_unitary():
            raise ValueError("non-unitary verifier")
        apply_scaled_matrix(state, tuple(range(self.m)), mat)
        bit = 1 << (self.m - 1)
        return state.probability([i for i in range(state.dim) if i & bit])


def verifier_to_ndet(v: VerifierSpec, f: TruthTable) -> QueryAlgorithm:
    """Turn a verifier into a nondeterministic algorithm of the same cost:
    prepare the uniform superposition of chosen certificates tagged by their
    1-inputs, then run V_x on the certificate register.  Acceptance is
    positive iff f(x) = 1, and at least 1/|X1| on 1-inputs whose chosen
    certificate accepts with probability 1."""
    if v.n != f.n:
        raise ValueError("verifier arity does not match the function")
    x_one = f.ones()
    if not x_one:
        raise EmptyOneSet("f has no 1-inputs")
    for x in range(f.size):
        if x not in v.unitaries:
            raise ValueError(f"verifier has no unitary for input {x}")
    for x in f.zeros():
        for cert in v.certificates:
            if v.run_on(x, cert) != 0:
                raise VerifierClauseViolation(
                    f"0-input {x} accepts some certificate")
    for z in x_one:
        if z not in v.chosen:
            raise VerifierClauseViolation(f"no chosen certificate for {z}")
        if v.run_on(z, v.certificates[v.chosen[z]]) == 0:
            raise VerifierClauseViolation(
                f"chosen certificate for {z} is rejected")
    n, m = v.n, v.m
    cert_scale = v.certificates[0].scale2
    re = [0] * (1 << (n + m))
    im = None
    if any(c.im is not None for c in v.certificates):
        im = [0] * (1 << (n + m))
    for z in x_one:
        cert = v.certificates[v.chosen[z]]
        for cl in range(cert.dim):
            re[(cl << n) | z] = cert.re[cl]
            if im is not None and cert.im is not None:
                im[(cl << n) | z] = cert.im[cl]
    prep = StatePrep(tuple(re), tuple(im) if im else None,
                     Fraction(len(x_one)) * cert_scale)
    gate = InputGate(qubits=tuple(range(n, n + m)), matrices=dict(v.unitaries),
                     cost=v.query_cost)
    return QueryAlgorithm(n=n, num_qubits=n + m, prep=prep, gates=(gate,),
                          query_cost=v.query_cost, output_qubit=n + m - 1)


# ---------------------------------------------------------------------------
# circuit description file (one JSON record per line)


def _frac_str(v):
    return str(Fraction(v))


def _frac(s):
    return Fraction(s)


def circuit_to_lines(algo: QueryAlgorithm) -> list:
    """Line records {gate: PREP|UNITARY|ORACLE|PHASE_F, qubits, data};
    input-indexed gates are behavioral and cannot be serialized."""
    lines = [json.dumps({
        "gate": "PREP", "qubits": list(range(algo.num_qubits)),
        "data": {"n": algo.n, "query_cost": algo.query_cost,
                 "output_qubit": algo.output_qubit,
                 "re": [_frac_str(v) for v in algo.prep.re],
                 "im": ([_frac_str(v) for v in algo.prep.im]
                        if algo.prep.im is not None else None),
                 "scale2": _frac_str(algo.prep.scale2)}})]
    for g in algo.gates:
        if isinstance(g, Unitary):
            rec = {"gate": "UNITARY", "qubits": list(g.qubits),
                   "data": {"re": [[_frac_str(v) for v in row]
                                   for row in g.matrix.re],
                            "im": ([[_frac_str(v) for v in row]
                                    for row in g.matrix.im]
                                   if g.matrix.im is not None else None),
                            "scale2": _frac_str(g.matrix.scale2)}}
        elif isinstance(g, FlipOnZero):
            rec = {"gate": "UNITARY",
                   "qubits": list(g.controls) + [g.target],
                   "data": {"flip_on_zero": {"controls": list(g.controls),
                                             "target": g.target}}}
        elif isinstance(g, BitOracle):
            rec = {"gate": "ORACLE",
                   "qubits": list(g.index_qubits) + [g.target],
                   "data": {"index_qubits": list(g.index_qubits),
                            "target": g.target}}
        elif isinstance(g, PhaseOracle):
            rec = {"gate": "PHASE_F", "qubits": list(g.qubits),
                   "data": {"degree_bound": g.degree_bound}}
        else:
            raise ValueError(f"gate {g!r} cannot be serialized")
        lines.append(json.dumps(rec))
    return lines


def circuit_from_lines(lines) -> QueryAlgorithm:
    records = [json.loads(line) for line in lines if line.strip()]
    if not records or records[0]["gate"] != "PREP":
        raise ValueError("circuit file must start with a PREP record")
    head = records[0]["data"]
    prep = StatePrep(tuple(_frac(v) for v in head["re"]),
                     tuple(_frac(v) for v in head["im"])
                     if head["im"] is not None else None,
                     _frac(head["scale2"]))
    gates = []
    for rec in records[1:]:
        kind, data = rec["gate"], rec["data"]
        if kind == "UNITARY" and "flip_on_zero" in data:
            fz = data["flip_on_zero"]
            gates.append(FlipOnZero(tuple(fz["controls"]), fz["target"]))
        elif kind == "UNITARY":
            mat = ScaledMatrix(
                tuple(tuple(_frac(v) for v in row) for row in data["re"]),
                tuple(tuple(_frac(v) for v in row) for row in data["im"])
                if data["im"] is not None else None,
                _frac(data["scale2"]))
            gates.append(Unitary(tuple(rec["qubits"]), mat))
        elif kind == "ORACLE":
            gates.append(BitOracle(tuple(data["index_qubits"]),
                                   data["target"]))
        elif kind == "PHASE_F":
            gates.append(PhaseOracle(tuple(rec["qubits"]),
                                     data["degree_bound"]))
        else:
            raise ValueError(f"unknown record {kind!r}")
    num_qubits = len(records[0]["qubits"])
    return QueryAlgorithm(n=head["n"], num_qubits=num_qubits, prep=prep,
                          gates=tuple(gates), query_cost=head["query_cost"],
                          output_qubit=head["output_qubit"])
