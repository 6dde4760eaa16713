"""State-conversion deciders for Schur-type and fully incoherent channels.

Deterministic conversions under unit-diagonal Schur channels preserve the
populations in the reference basis, so the deciders hinge on the diagonal of
the source and target. Fully incoherent channels can additionally permute
and erase basis labels, which weakens every diagonal constraint to one up to
permutation and makes the coherence rank the operative monotone.

Verdicts are three-valued: possible is True, False, or None. None marks a
case the implemented closed forms do not decide and a bounded search did not
resolve; it is never a claim of impossibility.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import DEFAULT_TOL, Tolerance, dagger, frobenius, hermitian_eigen, is_psd
from .states import CoherenceSet, DensityMatrix, PureState, coherence_set, plus_state
from .channels import (
    KrausMap,
    Permutation,
    SchurMatrix,
    apply,
    diagonal_unitary,
    permutation_unitary,
    schur_map,
)
from . import oracle

__all__ = [
    "Reason",
    "ConversionVerdict",
    "SfiBound",
    "ActivationDemo",
    "gi_deterministic_pure",
    "gi_pure_parent",
    "gi_deterministic",
    "sgi_optimal_probability",
    "complete_sgi",
    "sgi_mixed_to_pure",
    "reduce_joint",
    "fi_deterministic_pure",
    "build_fi_rank2_map",
    "plus3_reachable",
    "plus3_witness",
    "sfi_probability",
    "fi_erase",
    "fi_max_mixed_reachable",
    "fi_activation_demo",
]


class Reason(Enum):
    DIAGONAL_MISMATCH = "DiagonalMismatch"
    SUPPORT_VIOLATION = "SupportViolation"
    RANK_VIOLATION = "RankViolation"
    NOT_UNITARILY_EQUIVALENT = "NotUnitarilyEquivalent"
    NO_PURE_PROJECTION = "NoPureProjection"
    COMPLETION_INFEASIBLE = "CompletionInfeasible"


@dataclass
class ConversionVerdict:
    """Outcome of a conversion decision.

    possible: True / False / None (None = undecided within budget).
    probability: success probability of the offered map (1 for deterministic
    verdicts, 0 when impossible or undecided).
    map: witness map when possible, else None.
    reason: cause attached to negative or undecided outcomes.
    """

    possible: bool | None
    probability: float
    map: KrausMap | None
    reason: Reason | None


@dataclass
class SfiBound:
    """Permutation-optimized stochastic bound; exact when the closed form is tight."""

    lower_bound: float
    exact: bool
    map: KrausMap | None


@dataclass
class ActivationDemo:
    joint_map: KrausMap
    joint_output: np.ndarray
    reduced_output: DensityMatrix
    one_copy_possible: bool
    single_copy_verdicts: list[ConversionVerdict]


def _check_dims(a: int, b: int) -> None:
    if a != b:
        raise ValueError(f"dimension mismatch: {a} vs {b}")


def gi_deterministic_pure(psi: PureState, phi: PureState, tol: Tolerance = DEFAULT_TOL) -> ConversionVerdict:
    """Deterministic pure-to-pure conversion under unit-diagonal Schur channels.

    Possible iff |psi_i| = |phi_i| for every i; the witness is then the
    diagonal unitary matching the phases.
    """
    _check_dims(psi.dim, phi.dim)
    dev = float(np.max(np.abs(np.abs(psi.amplitudes) ** 2 - np.abs(phi.amplitudes) ** 2)))
    if dev > 1e-9:
        return ConversionVerdict(False, 0.0, None, Reason.NOT_UNITARILY_EQUIVALENT)
    support = np.abs(psi.amplitudes) > tol.abs_eps
    phases = np.where(support, np.angle(phi.amplitudes) - np.angle(psi.amplitudes), 0.0)
    witness = KrausMap([diagonal_unitary(phases)], tol)
    return ConversionVerdict(True, 1.0, witness, None)


def gi_pure_parent(rho: DensityMatrix, tol: Tolerance = DEFAULT_TOL) -> tuple[PureState, KrausMap]:
    """Pure state with the same diagonal as rho, plus a Schur channel mapping it to rho."""
    diag = np.clip(rho.diagonal(), 0.0, None)
    total = float(np.sum(diag))
    psi = PureState(np.sqrt(diag / total).astype(complex))
    d = rho.dim
    support = diag > tol.abs_eps
    a = np.eye(d, dtype=complex)
    for i in range(d):
        for j in range(d):
            if i != j and support[i] and support[j]:
                a[i, j] = rho.matrix[i, j] / np.sqrt(diag[i] * diag[j])
    return psi, schur_map(SchurMatrix(a, tol), tol)


def _is_pure(rho: DensityMatrix, tol: Tolerance) -> bool:
    w, _ = hermitian_eigen(rho.matrix, tol)
    return bool(1.0 - float(w[-1]) <= 1e-9)


def _pure_vector(rho: DensityMatrix, tol: Tolerance) -> np.ndarray:
    w, v = hermitian_eigen(rho.matrix, tol)
    return v[:, -1] * np.sqrt(max(float(w[-1]), 0.0))


def gi_deterministic(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    tol: Tolerance = DEFAULT_TOL,
    budget: "oracle.SearchBudget | None" = None,
) -> ConversionVerdict:
    """Deterministic conversion rho -> sigma under unit-diagonal Schur channels.

    The diagonal must match entrywise. A pure source with matching diagonal
    always converts (entrywise-ratio construction). A mixed source cannot
    reach a pure target. Otherwise the required multiplier matrix is pinned
    wherever rho is nonzero and the remaining entries are left to a PSD
    completion search; an unresolved completion yields possible=None.
    """
    _check_dims(rho.dim, sigma.dim)
    d = rho.dim
    if float(np.max(np.abs(rho.diagonal() - sigma.diagonal()))) > 1e-9:
        return ConversionVerdict(False, 0.0, None, Reason.DIAGONAL_MISMATCH)
    rho_pure = _is_pure(rho, tol)
    if rho_pure:
        psi = _pure_vector(rho, tol)
        support = np.abs(psi) > tol.abs_eps
        a = np.eye(d, dtype=complex)
        for i in range(d):
            for j in range(d):
                if i != j and support[i] and support[j]:
                    a[i, j] = sigma.matrix[i, j] / (psi[i] * np.conj(psi[j]))
        try:
            witness = schur_map(SchurMatrix(a, tol), tol)
        except ValueError:
            return ConversionVerdict(False, 0.0, None, Reason.COMPLETION_INFEASIBLE)
        return ConversionVerdict(True, 1.0, witness, None)
    if _is_pure(sigma, tol):
        return ConversionVerdict(False, 0.0, None, Reason.RANK_VIOLATION)
    pinned = np.eye(d, dtype=complex)
    mask = np.eye(d, dtype=bool)
    for i in range(d):
        for j in range(d):
            if i == j:
                continue
            if abs(rho.matrix[i, j]) > tol.abs_eps:
                pinned[i, j] = sigma.matrix[i, j] / rho.matrix[i, j]
                mask[i, j] = True
            elif abs(sigma.matrix[i, j]) > tol.abs_eps:
                return ConversionVerdict(False, 0.0, None, Reason.SUPPORT_VIOLATION)
    if mask.all():
        if not is_psd(pinned, tol):
            return ConversionVerdict(False, 0.0, None, Reason.COMPLETION_INFEASIBLE)
        return ConversionVerdict(True, 1.0, schur_map(SchurMatrix(pinned, tol), tol), None)
    if budget is None:
        budget = oracle.SearchBudget(max_iterations=5000, seed=0, convergence_eps=1e-10)
    result = oracle.psd_complete(pinned, mask, budget)
    if result.witness is None:
        return ConversionVerdict(None, 0.0, None, Reason.COMPLETION_INFEASIBLE)
    w, v = hermitian_eigen(result.witness, tol)
    cleaned = (v * np.clip(w, 0.0, None)) @ dagger(v)
    a = np.where(mask, pinned, cleaned)
    a = (a + dagger(a)) / 2.0
    np.fill_diagonal(a, 1.0)
    w2, v2 = hermitian_eigen(a, tol)
    if float(w2[0]) < -1e-8:
        return ConversionVerdict(None, 0.0, None, Reason.COMPLETION_INFEASIBLE)
    a = (v2 * np.clip(w2, 0.0, None)) @ dagger(v2)
    np.fill_diagonal(a, 1.0)
    return ConversionVerdict(True, 1.0, schur_map(SchurMatrix(a, tol), tol), None)


def sgi_optimal_probability(psi: PureState, phi: PureState, tol: Tolerance = DEFAULT_TOL) -> ConversionVerdict:
    """Largest success probability for psi -> phi with a single diagonal Kraus branch.

    Requires the target's support to sit inside the source's; the optimum is
    min over the target support of |psi_i|^2 / |phi_i|^2 and is achieved by
    one diagonal operator supported on the amplitude ratios.
    """
    _check_dims(psi.dim, phi.dim)
    sp = np.abs(psi.amplitudes) > tol.abs_eps
    tp = np.abs(phi.amplitudes) > tol.abs_eps
    if np.any(tp & ~sp):
        return ConversionVerdict(False, 0.0, None, Reason.SUPPORT_VIOLATION)
    ratios = np.abs(psi.amplitudes[tp]) ** 2 / np.abs(phi.amplitudes[tp]) ** 2
    prob = float(min(np.min(ratios), 1.0))
    v = np.zeros(psi.dim, dtype=complex)
    v[tp] = phi.amplitudes[tp] / psi.amplitudes[tp]
    scale = float(np.max(np.abs(v)))
    v = v / scale
    witness = KrausMap([np.diag(v)], tol)
    return ConversionVerdict(True, prob, witness, None)


def complete_sgi(m: KrausMap, tol: Tolerance = DEFAULT_TOL) -> KrausMap:
    """Extend a sub-normalized Schur-type map to a trace-preserving one.

    Appends basis-diagonal failure branches sqrt(1 - A_ii) |i><i|; the
    completed map is a unit-diagonal Schur channel.
    """
    from .channels import extract_schur_matrix

    sm = extract_schur_matrix(m, tol)
    if sm is None:
        raise ValueError("map does not act by entrywise multiplication")
    diag = np.clip(np.real(np.diag(sm.matrix)), 0.0, 1.0)
    extra = []
    for i in range(m.dim):
        leftover = 1.0 - diag[i]
        if leftover > 1e-12:
            k = np.zeros((m.dim, m.dim), dtype=complex)
            k[i, i] = np.sqrt(leftover)
            extra.append(k)
    return KrausMap(list(m.kraus) + extra, tol)


def sgi_mixed_to_pure(
    rho: DensityMatrix, tol: Tolerance = DEFAULT_TOL
) -> tuple[ConversionVerdict, tuple[int, int] | None]:
    """Stochastic extraction of a coherent pure state from a mixed state.

    Succeeds iff projecting onto some pair of basis labels leaves a rank-1
    block with a nonzero off-diagonal entry; the witness is that projector
    and the branch probability is the block's trace.
    """
    if _is_pure(rho, tol):
        raise ValueError("source state is already pure")
    off = rho.matrix - np.diag(np.diag(rho.matrix))
    if frobenius(off) <= tol.abs_eps:
        raise ValueError("source state is incoherent")
    d = rho.dim
    for i in range(d):
        for j in range(i + 1, d):
            block = rho.matrix[np.ix_([i, j], [i, j])]
            if abs(block[0, 1]) <= tol.abs_eps:
                continue
            w, _ = hermitian_eigen(block, tol)
            if float(w[0]) > 1e-9 * max(float(w[-1]), 0.0):
                continue
            proj = np.zeros((d, d), dtype=complex)
            proj[i, i] = 1.0
            proj[j, j] = 1.0
            prob = float(np.real(block[0, 0] + block[1, 1]))
            verdict = ConversionVerdict(True, prob, KrausMap([proj], tol), None)
            return verdict, (i, j)
    return ConversionVerdict(False, 0.0, None, Reason.NO_PURE_PROJECTION), None


def reduce_joint(a_joint: SchurMatrix, sigma: DensityMatrix, tol: Tolerance = DEFAULT_TOL) -> SchurMatrix:
    """Effective Schur matrix on the first factor when the second is fixed to sigma.

    For a unit-diagonal Schur channel on a d*d product space applied to
    rho (x) sigma, tracing out the second factor acts on rho as the Schur
    matrix Ã_ij = sum_k sigma_kk A_(ik),(jk)."""
    d = sigma.dim
    if a_joint.dim != d * d:
        raise ValueError("joint matrix dimension must be the square of the state dimension")
    if float(np.max(np.abs(np.real(np.diag(a_joint.matrix)) - 1.0))) > tol.abs_eps * d * d:
        raise ValueError("joint matrix must have unit diagonal")
    a4 = a_joint.matrix.reshape(d, d, d, d)
    reduced = np.einsum("ikjk,k->ij", a4, sigma.diagonal().astype(complex))
    reduced = (reduced + dagger(reduced)) / 2.0
    np.fill_diagonal(reduced, 1.0)
    return SchurMatrix(reduced, tol)


def _moduli_match(psi: np.ndarray, phi: np.ndarray) -> list[tuple[int, int]] | None:
    order_s = np.argsort(-np.abs(psi), kind="stable")
    order_t = np.argsort(-np.abs(phi), kind="stable")
    pairs = []
    for i, j in zip(order_s, order_t):
        if abs(abs(psi[i]) - abs(phi[j])) > 1e-9:
            return None
        pairs.append((int(i), int(j)))
    return pairs


def fi_deterministic_pure(
    psi: PureState,
    phi: PureState,
    tol: Tolerance = DEFAULT_TOL,
    budget: "oracle.SearchBudget | None" = None,
) -> ConversionVerdict:
    """Deterministic pure-to-pure conversion under fully incoherent channels.

    The coherence rank cannot grow. Equal ranks require the moduli multisets
    to match (witness: permutation times diagonal-phase unitary). A rank-1
    target is always reachable (erase toward the target label). The strictly
    intermediate case is delegated to a bounded two-branch search and comes
    back possible or undecided, never impossible.
    """
    _check_dims(psi.dim, phi.dim)
    d = psi.dim
    rank_s = len(coherence_set(psi, tol).members)
    rank_t = len(coherence_set(phi, tol).members)
    if rank_t > rank_s:
        return ConversionVerdict(False, 0.0, None, Reason.RANK_VIOLATION)
    if rank_t == rank_s:
        pairs = _moduli_match(psi.amplitudes, phi.amplitudes)
        if pairs is None:
            return ConversionVerdict(False, 0.0, None, Reason.NOT_UNITARILY_EQUIVALENT)
        k = np.zeros((d, d), dtype=complex)
        for i, j in pairs:
            if abs(psi.amplitudes[i]) > tol.abs_eps:
                ratio = phi.amplitudes[j] / psi.amplitudes[i]
                k[j, i] = ratio / abs(ratio)
            else:
                k[j, i] = 1.0
        return ConversionVerdict(True, 1.0, KrausMap([k], tol), None)
    if rank_t == 1:
        target = int(np.argmax(np.abs(phi.amplitudes)))
        phase = phi.amplitudes[target] / abs(phi.amplitudes[target])
        base = fi_erase(target, d)
        ops = [phase * k for k in base.kraus]
        return ConversionVerdict(True, 1.0, KrausMap(ops, tol), None)
    if d > 4:
        return ConversionVerdict(None, 0.0, None, None)
    if budget is None:
        budget = oracle.SearchBudget()
    found = oracle.search_fi_map(psi, phi, budget)
    if found is None:
        return ConversionVerdict(None, 0.0, None, None)
    return ConversionVerdict(True, 1.0, found, None)


def build_fi_rank2_map(a, b, c, tol: Tolerance = DEFAULT_TOL) -> KrausMap:
    """Two-branch fully incoherent qutrit map sending rank-3 states to rank-2 ones.

    Branch i is [[a_i, 0, c_i], [0, b_i, 0], [0, 0, 0]]. Trace preservation
    pins sum |a_i|^2 = sum |b_i|^2 = sum |c_i|^2 = 1 and a . conj(c) = 0,
    all enforced within 1e-10.
    """
    av = np.asarray(a, dtype=complex)
    bv = np.asarray(b, dtype=complex)
    cv = np.asarray(c, dtype=complex)
    if av.shape != (2,) or bv.shape != (2,) or cv.shape != (2,):
        raise ValueError("parameters must be pairs (two branches)")
    for name, vec in (("a", av), ("b", bv), ("c", cv)):
        if abs(float(np.sum(np.abs(vec) ** 2)) - 1.0) > 1e-10:
            raise ValueError(f"column normalization violated for {name}")
    if abs(complex(np.sum(av * np.conj(cv)))) > 1e-10:
        raise ValueError("cross-column orthogonality a . conj(c) = 0 violated")
    ops = []
    for i in range(2):
        k = np.zeros((3, 3), dtype=complex)
        k[0, 0] = av[i]
        k[0, 2] = cv[i]
        k[1, 1] = bv[i]
        ops.append(k)
    return KrausMap(ops, tol)


def plus3_reachable(phi: PureState, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether the uniform qutrit state converts deterministically to phi
    under fully incoherent channels (moduli up to permutation)."""
    if phi.dim != 3:
        raise ValueError("target must be a qutrit state")
    moduli = np.sort(np.abs(phi.amplitudes))[::-1]
    targets = [
        np.array([1.0, 0.0, 0.0]),
        np.array([np.sqrt(2.0 / 3.0), np.sqrt(1.0 / 3.0), 0.0]),
        np.full(3, 1.0 / np.sqrt(3.0)),
    ]
    return any(float(np.max(np.abs(moduli - t))) <= 1e-9 for t in targets)


def _rank_lowering_fi_kraus(d: int) -> list[np.ndarray]:
    # two-branch map folding label 2 onto label 0; on the uniform state each
    # branch leaves a quarter-turn phase on label 0
    root = 1.0 / np.sqrt(2.0)
    k1 = np.zeros((d, d), dtype=complex)
    k2 = np.zeros((d, d), dtype=complex)
    k1[0, 0], k1[0, 2], k1[1, 1] = 1j * root, root, root
    k2[0, 0], k2[0, 2], k2[1, 1] = root, 1j * root, root
    for extra in range(3, d):
        k1[extra, extra] = root
        k2[extra, extra] = root
    return [k1, k2]


def plus3_witness(kind: str, tol: Tolerance = DEFAULT_TOL) -> KrausMap:
    """Witness maps for the three reachable targets of the uniform qutrit state.

    kind: 'erase' (to a basis state), 'rank2' (to the rank-2 target
    sqrt(2/3)e^{i pi/4}|0> + sqrt(1/3)|1>), or 'identity' (stay at the
    uniform state).
    """
    if kind == "erase":
        return fi_erase(0, 3)
    if kind == "rank2":
        return KrausMap(_rank_lowering_fi_kraus(3), tol)
    if kind == "identity":
        return KrausMap([np.eye(3, dtype=complex)], tol)
    raise ValueError("kind must be one of 'erase', 'rank2', 'identity'")


def sfi_probability(psi: PureState, phi: PureState, tol: Tolerance = DEFAULT_TOL) -> SfiBound:
    """Permutation-optimized stochastic conversion bound for fully incoherent maps.

    Maximizes the single-branch probability over all relabelings of the
    source; the bound is attained (exact) when the coherence ranks agree,
    in which case the optimal map is returned. Dimensions above 8 are
    rejected (factorial scan).
    """
    _check_dims(psi.dim, phi.dim)
    d = psi.dim
    if d > 8:
        raise ValueError("factorial permutation scan is limited to dimension <= 8")
    rank_s = len(coherence_set(psi, tol).members)
    rank_t = len(coherence_set(phi, tol).members)
    psq = np.abs(psi.amplitudes) ** 2
    tsq = np.abs(phi.amplitudes) ** 2
    support_t = np.flatnonzero(tsq > tol.abs_eps**2)
    perms = np.array(list(itertools.permutations(range(d))), dtype=int)
    ratios = psq[perms[:, support_t]] / tsq[support_t][None, :]
    mins = np.min(ratios, axis=1)
    best = int(np.argmax(mins))
    bound = float(min(max(mins[best], 0.0), 1.0))
    exact = rank_s == rank_t
    witness = None
    if exact:
        sigma = perms[best]
        mapping = [0] * d
        for i in range(d):
            mapping[int(sigma[i])] = i
        p_unitary = permutation_unitary(Permutation(tuple(mapping)))
        permuted = PureState(p_unitary @ psi.amplitudes)
        inner = sgi_optimal_probability(permuted, phi, tol)
        if inner.map is not None:
            witness = KrausMap([inner.map.kraus[0] @ p_unitary], tol)
    return SfiBound(lower_bound=bound, exact=exact, map=witness)


def fi_erase(target: int, d: int, tol: Tolerance = DEFAULT_TOL) -> KrausMap:
    """Fully incoherent erasure: every input collapses to the basis state |target>."""
    if d < 1 or not (0 <= target < d):
        raise ValueError("target label out of range")
    ops = []
    for j in range(d):
        k = np.zeros((d, d), dtype=complex)
        k[target, j] = 1.0
        ops.append(k)
    return KrausMap(ops, tol)


def fi_max_mixed_reachable(rho: DensityMatrix) -> bool:
    """Whether a fully incoherent channel can send rho to the maximally mixed state.

    Full-rank targets force invertible operators (label permutations), so
    this requires the populations to be uniform already."""
    return float(np.max(np.abs(rho.diagonal() - 1.0 / rho.dim))) <= 1e-9


def fi_activation_demo(tol: Tolerance = DEFAULT_TOL) -> ActivationDemo:
    """Two copies of the uniform qubit state reach a state whose single copy is blocked.

    A fully incoherent channel on the two-qubit space takes the product of
    two uniform qubits to a pure state whose first marginal has populations
    (3/4, 1/4). One copy alone cannot reach that marginal: its populations
    are (1/2, 1/2) under every relabeling, and unit-diagonal Schur channels
    preserve populations."""
    joint = KrausMap(_rank_lowering_fi_kraus(4), tol)
    source = plus_state(4)
    out, prob = apply(joint, source.density())
    if abs(prob - 1.0) > 1e-12:
        raise AssertionError("activation map must be trace preserving on the product state")
    from .linalg import partial_trace_second

    reduced = DensityMatrix(partial_trace_second(out, 2, 2))
    marginal = DensityMatrix(np.array([[0.75, 0.25], [0.25, 0.25]], dtype=complex))
    verdicts = []
    for mapping in ((0, 1), (1, 0)):
        p_unitary = permutation_unitary(Permutation(mapping))
        permuted = DensityMatrix(p_unitary @ plus_state(2).density() @ dagger(p_unitary))
        verdicts.append(gi_deterministic(permuted, marginal, tol))
    one_copy = any(v.possible is True for v in verdicts)
    return ActivationDemo(
        joint_map=joint,
        joint_output=out,
        reduced_output=reduced,
        one_copy_possible=one_copy,
        single_copy_verdicts=verdicts,
    )
