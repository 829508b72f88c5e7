"""The breeding engine.

One breeding step sends two copies of a state through a balanced
beamsplitter and measures a quadrature of the first output mode. Iterating
with post-selection turns binomial code states into approximate grid
(qunaught) states. A run with k iterations consumes 2^k input states and
performs 2^k − 1 measurements arranged in a binary tree; when every branch
of a level post-selects the same outcome, all branches of that level are
identical and the whole tree collapses to a single chain.

Probability bookkeeping is done in natural-log space throughout, so success
probabilities far below double-precision underflow (e.g. at 8 iterations)
remain exact.

Counting convention: reported reference values for outcome sequences
aggregate a sequence together with all of its per-measurement mirror images
(the opposite-sign eigenvalue at each of the m measurements), which all
occur with the same probability and yield equivalent output states. Records
in this module store the single-sequence probability; multiply by 2^m, via
:func:`sign_aggregated`, to compare with the aggregated convention.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .fock import BinomialParams, FockConfig, QunaughtParams, beamsplitter, binomial_state, qunaught_state
from .homodyne import quadrature_basis
from .metrics import effective_squeezing, fidelity
from .numerics import DEFAULT_TOLERANCES, NumericalError


@dataclass(frozen=True)
class Schedule:
    """Measurement axes, one per iteration."""

    axes: tuple[str, ...]

    def __post_init__(self):
        if any(axis not in ("q", "p") for axis in self.axes):
            raise ValueError(f"schedule axes must be 'q' or 'p', got {self.axes}")

    @property
    def iterations(self) -> int:
        return len(self.axes)

    @classmethod
    def from_string(cls, text: str) -> "Schedule":
        return cls(tuple(text))

    @classmethod
    def alternating(cls, iterations: int, start: str = "q") -> "Schedule":
        other = "p" if start == "q" else "q"
        return cls(tuple(start if i % 2 == 0 else other for i in range(iterations)))

    @classmethod
    def constant(cls, axis: str, iterations: int) -> "Schedule":
        return cls((axis,) * iterations)


@dataclass(frozen=True)
class BranchResult:
    """Post-selected protocol output for one chain of outcomes."""

    outcome_path: tuple[tuple[int, int], ...]  # (iteration, eigenvalue index)
    log_probability: float  # single-sequence, natural log
    state: np.ndarray
    fidelity: float
    effective_squeezing_q: float
    effective_squeezing_p: float

    @property
    def probability(self) -> float:
        return math.exp(self.log_probability)

    def sign_aggregated_probability(self) -> float:
        """Probability under the mirror-aggregated counting convention: a
        k-iteration tree performs 2^k − 1 measurements, each of which has a
        mirror-sign twin with identical statistics."""
        measurements = measurements_in_tree(len(self.outcome_path))
        return math.exp(self.log_probability + sign_aggregation_log(measurements))


@dataclass(frozen=True)
class LeafRecord:
    """One leaf of the exhaustive two-iteration outcome tree."""

    q1: int
    q2: int
    p: int
    probability: float  # single-sequence
    fidelity: float  # nan when the leaf probability underflows
    effective_squeezing: float  # q-direction delta; nan as above


def sign_aggregation_log(measurements: int) -> float:
    """log of the 2^m factor between single-sequence and aggregated counting."""
    return measurements * math.log(2.0)


def sign_aggregated(probability: float, measurements: int) -> float:
    return probability * 2.0**measurements


def measurements_in_tree(iterations: int) -> int:
    """A k-iteration breeding tree contains 2^k − 1 homodyne measurements."""
    return 2**iterations - 1


def default_input(cfg: FockConfig) -> np.ndarray:
    return binomial_state(cfg, BinomialParams(N=2, K=3))


def default_target(cfg: FockConfig, delta: float = 0.4) -> np.ndarray:
    return qunaught_state(cfg, QunaughtParams(delta=delta))


def _apply_beamsplitter(cfg: FockConfig, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    # The beamsplitter matrix is real; splitting the complex vector keeps
    # the matmul in real arithmetic.
    bs = beamsplitter(cfg)
    joint = np.outer(left, right).ravel()
    if np.iscomplexobj(joint) and joint.imag.any():
        return bs @ joint.real + 1j * (bs @ joint.imag)
    return (bs @ joint.real).astype(complex)


def breed_step(left: np.ndarray, right: np.ndarray, axis: str, cfg: FockConfig):
    """One breeding step; returns [(index, probability, post_state), ...].

    The post-state is None for outcomes whose probability underflows. The
    left input enters the measured port.
    """
    basis = quadrature_basis(cfg, axis)
    mixed = _apply_beamsplitter(cfg, left, right)
    amplitudes = basis.eigenvectors.conj().T @ mixed.reshape(cfg.dim, cfg.dim)
    probabilities = np.sum(np.abs(amplitudes) ** 2, axis=1)
    results = []
    for index in range(cfg.dim):
        prob = float(probabilities[index])
        if prob > DEFAULT_TOLERANCES.probability_floor:
            post = amplitudes[index] / math.sqrt(prob)
        else:
            post = None
        results.append((index, prob, post))
    return results


def run_chain(
    cfg: FockConfig,
    schedule: Schedule,
    selected: list[int] | tuple[int, ...],
    target: np.ndarray | None = None,
) -> BranchResult:
    """Uniformly post-selected breeding collapsed to a chain.

    When every measurement of level j selects the same eigenvalue index,
    all 2^{k−j} branches of that level are identical, so the run reduces to
    one breeding step per level with log-probability Σ_j 2^{k−j}·ln p_j.
    """
    if len(selected) != schedule.iterations:
        raise ValueError(
            f"need one selected outcome per iteration: got {len(selected)} "
            f"for {schedule.iterations} iterations"
        )
    if target is None:
        target = default_target(cfg)
    state = default_input(cfg)
    log_prob = 0.0
    path = []
    for level, (axis, index) in enumerate(zip(schedule.axes, selected), start=1):
        outcomes = breed_step(state, state, axis, cfg)
        _, prob, post = outcomes[index]
        if post is None:
            raise NumericalError(
                f"selected outcome {index} at level {level} has probability "
                f"{prob:.3e}, below the underflow floor"
            )
        log_prob = 2.0 * log_prob + math.log(prob)
        state = post
        path.append((level, index))
    return BranchResult(
        outcome_path=tuple(path),
        log_probability=log_prob,
        state=state,
        fidelity=fidelity(state, target),
        effective_squeezing_q=effective_squeezing(cfg, state, "q"),
        effective_squeezing_p=effective_squeezing(cfg, state, "p"),
    )


def _first_level(cfg: FockConfig):
    psi0 = default_input(cfg)
    outcomes = breed_step(psi0, psi0, "q", cfg)
    probs = np.array([prob for _, prob, _ in outcomes])
    posts = np.array(
        [post if post is not None else np.zeros(cfg.dim, complex) for _, _, post in outcomes]
    )
    return probs, posts


def _second_level_block(cfg, probs, posts, jobs, target, probe):
    """Leaf quantities for the (q1, q2 ≥ q2_start, all p) slab of each job.

    Each job is a pair (q1, q2_start); the returned row carries, for that
    q1, arrays over (q2 − q2_start, p) of joint probability, conditional
    probability, target overlap, and probe expectation. Vectorized over the
    whole slab."""
    dim = cfg.dim
    bs = beamsplitter(cfg)
    vp = quadrature_basis(cfg, "p").eigenvectors.conj().T
    rows = []
    for q1, q2_start in jobs:
        left = posts[q1]
        kept = posts[q2_start:]
        # all q2 at once: columns are vec(left ⊗ posts[q2])
        stacked = np.einsum("i,qj->qij", left, kept).reshape(len(kept), dim * dim)
        mixed = _real_matmul(bs, stacked.T)  # (dim², n_q2) columns per q2
        mixed = mixed.T.reshape(len(kept), dim, dim)  # (q2, mode1, mode2)
        amps = np.einsum("ki,qij->qkj", vp, mixed)  # (q2, p, mode2)
        cond_probs = np.sum(np.abs(amps) ** 2, axis=2)
        overlaps = np.abs(np.einsum("qkj,j->qk", amps, target.conj()))
        probe_exp = np.abs(np.einsum("qkj,jl,qkl->qk", amps.conj(), probe, amps))
        prior = probs[q1] * probs[q2_start:, None]
        rows.append((q1, q2_start, prior * cond_probs, cond_probs, overlaps, probe_exp))
    return rows


def _real_matmul(real_op: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(vecs) and vecs.imag.any():
        return real_op @ vecs.real + 1j * (real_op @ vecs.imag)
    return (real_op @ vecs.real).astype(complex)


def _leaf_quality(cond, overlap, probe_exp, floor):
    """(fidelity, effective squeezing) of one leaf from its raw amplitudes."""
    if cond <= floor:
        return math.nan, math.nan
    fid = overlap / math.sqrt(cond)
    ratio = probe_exp / cond
    if ratio >= 1.0:
        delta = 0.0
    elif ratio == 0.0:
        delta = math.inf
    else:
        delta = math.sqrt(-2.0 * math.log(ratio)) / math.sqrt(math.pi)
    return fid, delta


_WORKER_STATE: dict = {}


def _init_worker(cfg, target):
    probs, posts = _first_level(cfg)
    from .metrics import _probe

    _WORKER_STATE.update(
        cfg=cfg, probs=probs, posts=posts, target=target, probe=_probe(cfg, "q")
    )


def _worker_block(jobs):
    s = _WORKER_STATE
    return _second_level_block(s["cfg"], s["probs"], s["posts"], jobs, s["target"], s["probe"])


#: Refuse enumerations larger than this many leaves (dim³); guards against a
#: misconfigured dimension turning one command into hours of work.
MAX_ENUMERATION_LEAVES = 2_000_000


def enumerate_two_iterations(
    cfg: FockConfig,
    target: np.ndarray | None = None,
    use_symmetry: bool = True,
    workers: int = 1,
    max_leaves: int = MAX_ENUMERATION_LEAVES,
) -> list[LeafRecord]:
    """Exact joint distribution over all dim³ two-iteration outcome triples.

    The first iteration measures q on both arms, the second measures p; the
    post-state from the first-index branch enters the measured port. With
    ``use_symmetry`` only first-level pairs with q1 on the negative half and
    q2 ≥ q1 are evaluated directly; the remaining leaves follow from
    exchange symmetry of the two arms and from parity (global mirror),
    roughly a 4× reduction. Leaves whose probability underflows are still
    emitted, with nan quality measures. Returned in (q1, q2, p)
    lexicographic order regardless of worker count.
    """
    from .metrics import _probe

    if target is None:
        target = default_target(cfg)
    dim = cfg.dim
    if dim**3 > max_leaves:
        raise ValueError(
            f"enumeration at dim {dim} would produce {dim**3} leaves, over the "
            f"budget of {max_leaves}"
        )
    floor = DEFAULT_TOLERANCES.probability_floor
    probs, posts = _first_level(cfg)
    probe = _probe(cfg, "q")

    if use_symmetry:
        # q1 on the negative half (indices below dim/2), q2 from q1 up.
        jobs = [(q1, q1) for q1 in range(dim // 2)]
        if dim % 2:
            jobs.append((dim // 2, dim // 2))
    else:
        jobs = [(q1, 0) for q1 in range(dim)]

    if workers > 1:
        chunks = [jobs[i::workers] for i in range(workers)]
        rows = []
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_init_worker, initargs=(cfg, target)
        ) as pool:
            for part in pool.map(_worker_block, chunks):
                rows.extend(part)
        rows.sort(key=lambda r: r[0])
    else:
        rows = _second_level_block(cfg, probs, posts, jobs, target, probe)

    table = {q1: (q2_start, arrays) for q1, q2_start, *arrays in rows}

    def cell(q1, q2, p_idx):
        # Canonical representative: exchange sorts the first-level pair,
        # parity mirrors all three indices when the pair sits on the
        # positive half. Without symmetry every row was computed directly.
        sp = p_idx
        if use_symmetry:
            a, b = (q1, q2) if q1 <= q2 else (q2, q1)
            if a not in table:
                a, b = dim - 1 - b, dim - 1 - a
                sp = dim - 1 - p_idx
        else:
            a, b = q1, q2
        q2_start, (joint, cond, overlaps, probe_exp) = table[a]
        j = b - q2_start
        return joint[j, sp], cond[j, sp], overlaps[j, sp], probe_exp[j, sp]

    leaves = []
    for q1 in range(dim):
        for q2 in range(dim):
            for p_idx in range(dim):
                joint, cond, overlap, probe_exp = cell(q1, q2, p_idx)
                fid, delta = _leaf_quality(float(cond), float(overlap), float(probe_exp), floor)
                leaves.append(
                    LeafRecord(
                        q1=q1, q2=q2, p=p_idx,
                        probability=float(joint), fidelity=fid, effective_squeezing=delta,
                    )
                )
    return leaves


def leaf_lookup(leaves: list[LeafRecord]) -> dict[tuple[int, int, int], LeafRecord]:
    return {(leaf.q1, leaf.q2, leaf.p): leaf for leaf in leaves}


def probability_fidelity_curve(leaves: list[LeafRecord], thresholds) -> list[tuple[float, float]]:
    """Cumulative success probability of reaching at least each fidelity."""
    fids = np.array([leaf.fidelity for leaf in leaves])
    probs = np.array([leaf.probability for leaf in leaves])
    valid = ~np.isnan(fids)
    points = []
    for threshold in thresholds:
        mask = valid & (fids >= threshold)
        points.append((float(threshold), float(np.sum(probs[mask]))))
    return points


def effective_squeezing_curve(leaves: list[LeafRecord], bounds) -> list[tuple[float, float]]:
    """Cumulative success probability of effective squeezing at or below each bound."""
    deltas = np.array([leaf.effective_squeezing for leaf in leaves])
    probs = np.array([leaf.probability for leaf in leaves])
    valid = ~np.isnan(deltas)
    points = []
    for bound in bounds:
        mask = valid & (deltas <= bound)
        points.append((float(bound), float(np.sum(probs[mask]))))
    return points


@dataclass(frozen=True)
class SweepRecord:
    N: int
    K: int
    iteration: int
    fidelity: float
    supported: bool


def sweep_binomial_inputs(
    cfg: FockConfig,
    N_list,
    K_list,
    schedule: Schedule,
    target_delta: float,
    max_iterations: int | None = None,
) -> list[SweepRecord]:
    """Chain fidelity after 0..k iterations for a grid of binomial inputs.

    Post-selects the innermost negative eigenvalue at every level.
    Unsupported (N, K) combinations (Fock support outside the truncation)
    are flagged rather than fatal.
    """
    if max_iterations is None:
        max_iterations = schedule.iterations
    if max_iterations > schedule.iterations:
        raise ValueError("max_iterations exceeds the schedule length")
    target = qunaught_state(cfg, QunaughtParams(delta=target_delta))
    center = quadrature_basis(cfg, "q").center_index
    records = []
    for n_sym in N_list:
        for k_trunc in K_list:
            params = BinomialParams(N=n_sym, K=k_trunc)
            if params.top_level >= cfg.dim:
                records.append(SweepRecord(n_sym, k_trunc, 0, math.nan, False))
                continue
            state = binomial_state(cfg, params)
            records.append(
                SweepRecord(n_sym, k_trunc, 0, fidelity(state, target), True)
            )
            for level in range(1, max_iterations + 1):
                outcomes = breed_step(state, state, schedule.axes[level - 1], cfg)
                _, prob, post = outcomes[center]
                if post is None:
                    records.append(SweepRecord(n_sym, k_trunc, level, math.nan, False))
                    break
                state = post
                records.append(
                    SweepRecord(n_sym, k_trunc, level, fidelity(state, target), True)
                )
    return records
