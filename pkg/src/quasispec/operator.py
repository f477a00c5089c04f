"""Truncated Fibonacci Hamiltonians and the exact phase partition.

The operator family on l2(Z) is

    (H_w psi)(n) = psi(n+1) + psi(n-1) + V * 1_[1-a, 1)(frac(w + n*a)) * psi(n)

with a = (sqrt(5)-1)/2 the inverse golden ratio. We truncate to the window
[-L, L] with a hard (Dirichlet) cutoff, which every dynamical routine guards
with a light-cone margin. Shifting the lattice by k shifts the phase by k*a,
which is what makes the exact phase partition below possible: the diagonal
pattern of H_w is piecewise constant in w with breakpoints at the orbit
points of the indicator edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import CapExceededError, ConfigError

# Inverse golden ratio, the rotation number of the hull.
ALPHA = (np.sqrt(5.0) - 1.0) / 2.0

# Potential patterns repeat exactly only at floating-point near-misses;
# genuine coincidences cannot occur for irrational alpha.
BREAKPOINT_DEDUP_TOL = 1e-12

TENSOR_DIM_CAP = 4096


def frac(x):
    """Fractional part mapped into [0, 1); works on scalars and arrays."""
    return x - np.floor(x)


@dataclass(frozen=True)
class ModelParams:
    """One truncated operator family: coupling, window, phase, rotation."""

    coupling: float = 0.5
    half_width: int = 200
    phase: float = 0.0
    alpha: float = ALPHA

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0,1), got {self.alpha}")
        if self.half_width < 0 or int(self.half_width) != self.half_width:
            raise ConfigError(f"half_width must be a nonnegative integer, got {self.half_width}")
        if self.coupling < 0.0:
            raise ConfigError(f"coupling must be nonnegative, got {self.coupling}")
        if not 0.0 <= self.phase < 1.0:
            raise ConfigError(f"phase must lie in [0,1), got {self.phase}")

    @property
    def dim(self) -> int:
        return 2 * self.half_width + 1

    def sites(self) -> np.ndarray:
        L = self.half_width
        return np.arange(-L, L + 1)


def potential_value(omega: float, n: int, params: ModelParams) -> float:
    """V * 1_[1-a, 1)(frac(omega + n*a)): closed left endpoint, open right."""
    x = frac(omega + n * params.alpha)
    return params.coupling if x >= 1.0 - params.alpha else 0.0


@dataclass(frozen=True)
class TridiagonalOperator:
    """Symmetric tridiagonal matrix: potential diagonal, unit off-diagonals.

    Index 0 of ``diag`` is lattice site ``site_offset``.
    """

    diag: np.ndarray
    site_offset: int

    @property
    def dim(self) -> int:
        return len(self.diag)

    @property
    def norm_bound(self) -> float:
        """Row-sum bound on the operator norm."""
        return 2.0 + float(np.max(self.diag, initial=0.0))

    def to_dense(self) -> np.ndarray:
        m = np.diag(self.diag.astype(float))
        idx = np.arange(self.dim - 1)
        m[idx, idx + 1] = 1.0
        m[idx + 1, idx] = 1.0
        return m


def build_hamiltonian(params: ModelParams) -> TridiagonalOperator:
    """Truncation of H_phase to [-L, L] with Dirichlet cutoff."""
    x = frac(params.phase + params.sites() * params.alpha)
    diag = np.where(x >= 1.0 - params.alpha, params.coupling, 0.0)
    return TridiagonalOperator(diag=diag, site_offset=-params.half_width)


def shift_hamiltonian_check(params: ModelParams, k: int) -> float:
    """Max diagonal discrepancy probing the covariance of shift vs phase.

    Compares the potential of H_{w+k*a} at site n against H_w at site n+k
    over all n with |n|, |n+k| <= L. Exact covariance predicts 0; the two
    sides reduce mod 1 identically, so the indicator decisions agree except
    on a measure-zero set of edge phases.
    """
    L = params.half_width
    if abs(k) > L:
        raise ConfigError(f"|k| = {abs(k)} exceeds half_width {L}")
    shifted = ModelParams(
        coupling=params.coupling,
        half_width=L,
        phase=float(frac(params.phase + k * params.alpha)),
        alpha=params.alpha,
    )
    base = build_hamiltonian(params).diag
    moved = build_hamiltonian(shifted).diag
    # overlap of site ranges: n and n+k both inside [-L, L]
    if k >= 0:
        return float(np.max(np.abs(moved[: len(moved) - k] - base[k:]), initial=0.0))
    return float(np.max(np.abs(moved[-k:] - base[: len(base) + k]), initial=0.0))


@dataclass(frozen=True)
class PhasePartition:
    """Exact partition of the torus into intervals of constant diagonal.

    Intervals are [lefts[i], lefts[i] + lengths[i]) in sorted order, covering
    [0, 1) exactly; ``representatives`` are the midpoints, maximally far from
    the breakpoints.
    """

    params: ModelParams
    breakpoints: np.ndarray
    lengths: np.ndarray
    representatives: np.ndarray = field(repr=False)

    @property
    def lefts(self) -> np.ndarray:
        return self.breakpoints

    def __len__(self) -> int:
        return len(self.breakpoints)

    def diagonal_patterns(self) -> np.ndarray:
        """(intervals, 2L+1) array of potential diagonals, one per interval."""
        p = self.params
        x = frac(self.representatives[:, None] + p.sites()[None, :] * p.alpha)
        return np.where(x >= 1.0 - p.alpha, p.coupling, 0.0)

    def grouped_patterns(self) -> tuple[np.ndarray, np.ndarray]:
        """Unique diagonal patterns with their total interval lengths.

        Groups appear in first-occurrence (sorted-breakpoint) order so that
        any reduction over them is reproducible. For V=0 this collapses to a
        single group of total length 1.
        """
        pats = self.diagonal_patterns()
        seen: dict[bytes, int] = {}
        order: list[int] = []
        weights: list[float] = []
        for i in range(len(pats)):
            key = pats[i].tobytes()
            j = seen.get(key)
            if j is None:
                seen[key] = len(order)
                order.append(i)
                weights.append(float(self.lengths[i]))
            else:
                weights[j] += float(self.lengths[i])
        return pats[order], np.asarray(weights)


def phase_partition(params: ModelParams) -> PhasePartition:
    """Breakpoints {frac(1-a-n*a), frac(-n*a) : |n| <= L}, deduplicated.

    The two families coincide modulo 1 (1-a-n*a = -(n+1)*a mod 1), so after
    deduplication there are 2L+2 breakpoints; both are computed literally and
    the dedup tolerance absorbs their floating-point spread. frac(0) = 0 is
    always a breakpoint, so the intervals tile [0, 1) with no wraparound.
    """
    n = params.sites()
    a = params.alpha
    pts = np.concatenate([frac(1.0 - a - n * a), frac(-n * a)])
    pts = np.sort(pts)
    keep = np.concatenate([[True], np.diff(pts) > BREAKPOINT_DEDUP_TOL])
    pts = pts[keep]
    lengths = np.diff(np.concatenate([pts, [1.0 + pts[0]]]))
    reps = pts + lengths / 2.0
    return PhasePartition(
        params=params, breakpoints=pts, lengths=lengths, representatives=reps
    )


def tensor_sum(ops: list, cap: int = TENSOR_DIM_CAP) -> np.ndarray:
    """Kronecker sum sum_k I x ... x H_k x ... x I as a dense matrix.

    Accepts TridiagonalOperator or dense symmetric arrays. Eigenvalues of the
    result are all sums of one eigenvalue per factor, which is what makes
    spectral measures of product states convolve. Brute-force scale only.
    """
    if not ops:
        raise ConfigError("tensor_sum needs at least one factor")
    mats = [op.to_dense() if isinstance(op, TridiagonalOperator) else np.asarray(op, dtype=float) for op in ops]
    dims = [m.shape[0] for m in mats]
    total = int(np.prod(dims))
    if total > cap:
        raise CapExceededError(f"product dimension {total} exceeds cap {cap}")
    out = np.zeros((total, total))
    for k, m in enumerate(mats):
        before = int(np.prod(dims[:k])) if k else 1
        after = int(np.prod(dims[k + 1:])) if k + 1 < len(dims) else 1
        out += np.kron(np.kron(np.eye(before), m), np.eye(after))
    return out
