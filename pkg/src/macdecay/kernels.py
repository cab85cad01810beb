"""Batched integer and float fast paths for codeword determinants.

Elements of O_L are flattened to integer vectors over the 2d-element basis
mu^b theta^a, so determinant sweeps run as vectorized int64 tensor
contractions.  Every int64 batch is preceded by an exact overflow audit on
per-coordinate magnitude bounds; every float screen carries a rigorous
slack so it can only propose candidates, never decide a comparison.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np

from .construction import CodeSpec, gamma_basis, lattice_basis
from .number_field import FieldElem, Tower

INT64_LIMIT = 1 << 62
# covers enclosure radii, float64 conversion and linear-combination rounding
EMB_REL_ERR = 2.0**-44
# covers naive/LAPACK determinant evaluation error, folded into row norms
DET_EVAL_REL = 2.0**-44


class OverflowRisk(ArithmeticError):
    """An int64 batch could exceed 2^62; caller must take the object path."""


class IntKernel:
    """Integer-coordinate arithmetic of O_L bound to one tower.

    Vectors are coordinates over the mu^b theta^a basis.  That basis spans a
    finite-index subring of O_L; when the index is not 1 (the degree-4 tower
    is the shipped example), sigma-images of basis elements pick up bounded
    denominators.  ``entry_scale`` is the least common denominator over all
    sigma-images of the basis: codeword entry numerators are stored times
    entry_scale, and det_int_batch returns entry_scale * (true numerator),
    which vec_to_num undoes.  Towers whose basis is sigma-stable have
    entry_scale == 1 and the scaling is the identity throughout."""

    def __init__(self, tower: Tower):
        self.tower = tower
        self.d = tower.d
        self.dim = 2 * tower.d
        self.gamma = gamma_basis(tower)
        dim = self.dim
        tens = np.zeros((dim, dim, dim), dtype=np.int64)
        for i in range(dim):
            for j in range(i, dim):
                vec = self.fe_to_vec(self.gamma[i] * self.gamma[j])
                tens[i, j] = vec
                tens[j, i] = vec
        self.mul_tensor = tens
        self._abs_tensor = [
            [[abs(int(tens[a, b, c])) for c in range(dim)] for b in range(dim)]
            for a in range(dim)
        ]
        self._sigma_cache: dict[int, np.ndarray] = {}
        self._mult_cache: dict = {}
        emb = np.empty(dim, dtype=np.complex128)
        for g, el in enumerate(self.gamma):
            emb[g] = el.embed(50).mid()
        self.emb = emb
        self.emb_abs = np.abs(emb)
        scale = 1
        for t in range(1, self.d):
            for g in self.gamma:
                for q in g.apply_sigma(t).coords:
                    scale = lcm(scale, q.a.denominator, q.b.denominator)
        self.entry_scale = scale

    def fe_to_vec(self, fe: FieldElem) -> list[int]:
        out = [0] * self.dim
        for a, q in enumerate(fe.coords):
            if q.a.denominator != 1 or q.b.denominator != 1:
                raise ValueError("element is not integral over the basis")
            out[a] = int(q.a)
            out[self.d + a] = int(q.b)
        return out

    def vec_to_fe(self, vec) -> FieldElem:
        acc = self.tower.zero()
        for g, c in enumerate(vec):
            c = int(c)
            if c:
                acc = acc + self.gamma[g] * c
        return acc

    def vec_to_num(self, vec) -> FieldElem:
        """True determinant numerator from a det_int_batch output vector."""
        fe = self.vec_to_fe(vec)
        if self.entry_scale != 1:
            fe = fe * Fraction(1, self.entry_scale)
        return fe

    def sigma_vec_mat(self, t: int) -> np.ndarray:
        """Right-multiplication matrix: vecs @ S applies sigma^t.

        Only defined when sigma^t maps the basis ring into itself; otherwise
        fe_to_vec raises.  tau = sigma^U is integral on every shipped tower,
        so relative-norm checks always have their matrix."""
        t %= self.d
        if t not in self._sigma_cache:
            rows = [self.fe_to_vec(g.apply_sigma(t)) for g in self.gamma]
            self._sigma_cache[t] = np.array(rows, dtype=np.int64)
        return self._sigma_cache[t]

    def mult_vec_mat(self, elem) -> np.ndarray:
        """Right-multiplication matrix for a fixed integral element."""
        if isinstance(elem, FieldElem):
            key = tuple(self.fe_to_vec(elem))
        else:
            elem = self.tower.one() * elem
            key = tuple(self.fe_to_vec(elem))
        if key not in self._mult_cache:
            rows = [self.fe_to_vec(elem * g) for g in self.gamma]
            self._mult_cache[key] = np.array(rows, dtype=np.int64)
        return self._mult_cache[key]

    def rowwise_mul(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """(n, dim) x (n, dim) -> (n, dim), products row by row."""
        tmp = u @ self.mul_tensor.reshape(self.dim, self.dim * self.dim)
        tmp = tmp.reshape(-1, self.dim, self.dim)
        return np.einsum("nbc,nb->nc", tmp, v)

    def pairwise_mul(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """(n, dim) x (m, dim) -> (n, m, dim), all cross products."""
        tmp = u @ self.mul_tensor.reshape(self.dim, self.dim * self.dim)
        tmp = tmp.reshape(-1, self.dim, self.dim)
        return np.einsum("nbc,mb->nmc", tmp, v)

    def product_bound(self, ub_u, ub_v) -> list[int]:
        """Exact per-coordinate magnitude bound for rowwise products."""
        dim = self.dim
        out = [0] * dim
        absT = self._abs_tensor
        for a in range(dim):
            ua = ub_u[a]
            if not ua:
                continue
            row = absT[a]
            for b in range(dim):
                vb = ub_v[b]
                if not vb:
                    continue
                w = ua * vb
                cell = row[b]
                for c in range(dim):
                    if cell[c]:
                        out[c] += cell[c] * w
        return out

    @staticmethod
    def mat_bound(ub, mat) -> list[int]:
        """Magnitude bound after vecs @ mat, exact in Python ints."""
        rows, cols = mat.shape
        return [
            sum(ub[g] * abs(int(mat[g, c])) for g in range(rows)) for c in range(cols)
        ]


def coeff_grid(N: int, length: int) -> np.ndarray:
    """All nonzero integer vectors with entries in [-N, N], lex ascending."""
    if N < 1 or length < 1:
        raise ValueError("N and length must be positive")
    base = 2 * N + 1
    count = base**length
    if count > 40_000_000:
        raise MemoryError(f"coefficient grid of {count} rows is too large")
    idx = np.arange(count, dtype=np.int64)
    cols = []
    for pos in range(length):
        scale = base ** (length - 1 - pos)
        cols.append((idx // scale) % base - N)
    grid = np.stack(cols, axis=1)
    zero_row = (count - 1) // 2
    return np.delete(grid, zero_row, axis=0)


def grid_size(N: int, length: int) -> int:
    return (2 * N + 1) ** length - 1


def exponent_matrix(spec: CodeSpec) -> list[list[int]]:
    """Structural p-exponents of the stacked codeword: k on diagonal blocks."""
    n = spec.U * spec.n_t
    return [
        [spec.k if r // spec.n_t == c // spec.n_t else 0 for c in range(n)]
        for r in range(n)
    ]


class DetSchedule:
    """Fraction-free Laplace DP plan over column subsets with all p-power
    alignment decided structurally (exponents do not depend on data)."""

    def __init__(self, spec: CodeSpec):
        n = spec.U * spec.n_t
        E = exponent_matrix(spec)
        X = {0: 0}
        steps = []
        masks_by_size = [[] for _ in range(n + 1)]
        for mask in range(1 << n):
            masks_by_size[bin(mask).count("1")].append(mask)
        for size in range(1, n + 1):
            i = size - 1
            level = []
            for mask in masks_by_size[size]:
                cols = [c for c in range(n) if mask >> c & 1]
                x = max(E[i][c] + X[mask ^ (1 << c)] for c in cols)
                X[mask] = x
                terms = []
                for pos, c in enumerate(cols):
                    sign = 1 if (i + pos) % 2 == 0 else -1
                    pad = x - E[i][c] - X[mask ^ (1 << c)]
                    terms.append((c, sign, pad))
                level.append((mask, terms))
            steps.append(level)
        self.n = n
        self.steps = steps
        self.total_exp = X[(1 << n) - 1]
        self.max_pad = max(
            (pad for level in steps for _, terms in level for _, _, pad in terms),
            default=0,
        )


_SCHED_CACHE: dict = {}


def det_schedule(spec: CodeSpec) -> DetSchedule:
    key = (spec.tower.key, spec.U, spec.n_t, spec.k)
    if key not in _SCHED_CACHE:
        _SCHED_CACHE[key] = DetSchedule(spec)
    return _SCHED_CACHE[key]


def det_int_batch(
    spec: CodeSpec, kern: IntKernel, stacked: np.ndarray
) -> tuple[np.ndarray, int]:
    """Exact determinant numerators of a batch of stacked codewords.

    stacked has shape (batch, n, n, dim): integer numerator vectors scaled
    by kern.entry_scale, entry (r, c) meaning (numer / entry_scale) *
    p^(-E[r][c]) with the structural exponents.  Returns (nums, s) with
    det = vec_to_num(nums) * p^(-s); nums itself carries one factor of
    entry_scale so it stays integral even when the true numerator has
    denominators over the basis.  Raises OverflowRisk if the audited bounds
    could leave int64.
    """
    sched = det_schedule(spec)
    n = sched.n
    if stacked.shape[1:] != (n, n, kern.dim):
        raise ValueError("stacked batch has wrong shape")
    pmat = kern.mult_vec_mat(spec.p)
    pmats = [np.eye(kern.dim, dtype=np.int64)]
    for _ in range(sched.max_pad):
        pmats.append(pmats[-1] @ pmat)

    ub_entry = [
        [[int(v) for v in np.max(np.abs(stacked[:, i, c, :]), axis=0)] for c in range(n)]
        for i in range(n)
    ]
    ub = {0: None}
    dp = {0: None}
    batch = stacked.shape[0]
    ones = np.zeros((batch, kern.dim), dtype=np.int64)
    ones[:, 0] = 1
    dp[0] = ones
    ub[0] = [1] + [0] * (kern.dim - 1)
    for level in sched.steps:
        i = bin(level[0][0]).count("1") - 1
        new_dp = {}
        new_ub = {}
        for mask, terms in level:
            acc = None
            bound = [0] * kern.dim
            for c, sign, pad in terms:
                sub = mask ^ (1 << c)
                pb = kern.product_bound(ub_entry[i][c], ub[sub])
                if pad:
                    pb = kern.mat_bound(pb, pmats[pad])
                bound = [x + y for x, y in zip(bound, pb)]
                if any(b >= INT64_LIMIT for b in bound):
                    raise OverflowRisk(
                        f"determinant DP bound exceeds int64 at subset {mask:b}"
                    )
                term = kern.rowwise_mul(stacked[:, i, c, :], dp[sub])
                if pad:
                    term = term @ pmats[pad]
                if sign < 0:
                    term = -term
                acc = term if acc is None else acc + term
            new_dp[mask] = acc
            new_ub[mask] = bound
        dp = new_dp
        ub = new_ub
        dp[0] = ones
        ub[0] = [1] + [0] * (kern.dim - 1)
    full = (1 << n) - 1
    nums = dp[full]
    if kern.entry_scale != 1:
        # dp carries entry_scale^n; one factor stays on the output so it
        # remains integral (the true numerator may have basis denominators).
        div = kern.entry_scale ** (n - 1)
        q, r = np.divmod(nums, div)
        if r.any():
            raise AssertionError("determinant fails the entry-scale division")
        nums = q
    return nums, sched.total_exp


def det_float_batch(mats: np.ndarray) -> np.ndarray:
    """Determinants of a (batch, n, n) complex stack; closed forms for small n."""
    n = mats.shape[-1]
    if n == 1:
        return mats[:, 0, 0]
    if n == 2:
        return mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]
    if n == 3:
        a, b, c = mats[:, 0, 0], mats[:, 0, 1], mats[:, 0, 2]
        d, e, f = mats[:, 1, 0], mats[:, 1, 1], mats[:, 1, 2]
        g, h, i = mats[:, 2, 0], mats[:, 2, 1], mats[:, 2, 2]
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    return np.linalg.det(mats)


def det_slack_batch(mats: np.ndarray, errs: np.ndarray) -> np.ndarray:
    """Rigorous bound on |det(true) - det(mats)| given per-entry error bounds.

    Multilinearity in rows: the difference expands into determinants with at
    least one row replaced by its error row, so it is bounded by
    prod(a_r + b_r) - prod(a_r) over row norms a and error norms b.  The
    evaluation error of the float determinant itself is folded into b."""
    a = np.sqrt(np.sum(np.abs(mats) ** 2, axis=2))
    b = np.sqrt(np.sum(errs.astype(np.float64) ** 2, axis=2))
    n = mats.shape[-1]
    b = b + (n * n) * DET_EVAL_REL * a
    slack = np.prod(a + b, axis=1) - np.prod(a, axis=1)
    return slack * (1.0 + 2.0**-30) + 1e-300


class UserTensors:
    """Per-user flattened generator data for batched codeword evaluation."""

    def __init__(self, spec: CodeSpec, kern: IntKernel, j: int):
        gens = lattice_basis(spec, j)
        r = len(gens)
        n_t, width = gens[0].shape
        dim = kern.dim
        numv = np.zeros((r, n_t, width, dim), dtype=np.int64)
        emb = np.zeros((r, n_t, width), dtype=np.complex128)
        E = exponent_matrix(spec)
        row_base = (j - 1) * n_t
        for gi, g in enumerate(gens):
            for rr in range(n_t):
                for cc in range(width):
                    num, exp = g.entries[rr][cc]
                    if exp != E[row_base + rr][cc]:
                        raise AssertionError("structural exponent mismatch")
                    if kern.entry_scale != 1:
                        num = num * kern.entry_scale
                    numv[gi, rr, cc] = kern.fe_to_vec(num)
                    enc = g.entry_value(rr, cc).embed(50)
                    emb[gi, rr, cc] = enc.mid()
        self.j = j
        self.r = r
        self.numv = numv
        self.emb = emb
        self.emb_err = np.abs(emb) * EMB_REL_ERR + 1e-290

    def blocks_float(self, vecs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(n, r) int coefficients -> (n, n_t, width) complex blocks + errors."""
        v = vecs.astype(np.float64)
        blocks = np.tensordot(v.astype(np.complex128), self.emb, axes=([1], [0]))
        errs = np.tensordot(np.abs(v), self.emb_err, axes=([1], [0]))
        errs = errs + np.abs(blocks) * EMB_REL_ERR
        return blocks, errs

    def blocks_int(self, vecs: np.ndarray) -> np.ndarray:
        """(n, r) int coefficients -> (n, n_t, width, dim) numerator vectors,
        scaled by the kernel's entry_scale (1 on sigma-stable towers)."""
        out = np.tensordot(vecs, self.numv, axes=([1], [0]))
        return out

    def blocks_int_bound(self, max_abs_coeff: int) -> list[list[list[int]]]:
        """Per-entry-coordinate magnitude bounds for blocks_int outputs."""
        r, n_t, width, dim = self.numv.shape
        out = []
        for rr in range(n_t):
            row = []
            for cc in range(width):
                row.append(
                    [
                        int(max_abs_coeff)
                        * int(np.sum(np.abs(self.numv[:, rr, cc, g])))
                        for g in range(dim)
                    ]
                )
            out.append(row)
        return out


def stack_users(blocks: list[np.ndarray]) -> np.ndarray:
    """Per-user (n, n_t, width[, dim]) arrays -> (n, Un_t, width[, dim])."""
    return np.concatenate(blocks, axis=1)
