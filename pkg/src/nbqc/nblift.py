"""Lifting a binary QC pair to orthogonal matrices over GF(2^p).

For column weight 2, the nonzeros of the first matrix that sit in the
support columns of any single row of the second matrix form one closed
cycle of length 2L in the Tanner graph.  Walking that cycle splits the
positions into two interleaved L-sets E1 and E2; orthogonality of the
lifted pair reduces to one balance equation per row,

    sum_{E1} log gamma - sum_{E2} log gamma = 0  (mod 2^p - 1),

which is solved over the residue ring and sampled.  The nonzeros of the
second matrix then follow by a two-term recurrence around each cycle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from nbqc.gf2p import FieldSpec
from nbqc.modring import ModSystem, sample_solution, solve_mod
from nbqc.qcpair import QCPair, QCParams, SparseBinaryMatrix


class NotACycle(ValueError):
    """The restricted Tanner graph walk did not close after 2L steps."""


class ClosureViolation(AssertionError):
    """A cycle recurrence failed its wrap-around check."""


class DimensionMismatch(ValueError):
    pass


@dataclass
class CycleStructure:
    """The 2L-cycle induced by row m_prime of the second QC matrix.

    n_seq walks the L support columns, m_seq the L check rows of the
    first matrix; position i contributes (m_i, n_i) to E1 and
    (m_i, n_{i+1 mod L}) to E2.
    """

    m_prime: int
    n_seq: list
    m_seq: list

    @property
    def L(self) -> int:
        return len(self.n_seq)

    def e1(self) -> list[tuple[int, int]]:
        return [(m, n) for m, n in zip(self.m_seq, self.n_seq)]

    def e2(self) -> list[tuple[int, int]]:
        L = self.L
        return [(self.m_seq[i], self.n_seq[(i + 1) % L]) for i in range(L)]


@dataclass(eq=False)
class NBMatrix:
    """Sparse matrix over GF(2^p): per-row sorted (column, element) pairs.

    All stored elements are nonzero; the support is that of the QC
    expansion the matrix was lifted from.
    """

    m: int
    n: int
    role: str                    # "GAMMA" | "DELTA"
    field: FieldSpec
    params: QCParams
    rows: list                   # rows[i]: sorted list of (col, value)

    def entry(self, i: int, j: int) -> int:
        for c, v in self.rows[i]:
            if c == j:
                return v
        return 0

    def support(self) -> SparseBinaryMatrix:
        return SparseBinaryMatrix(
            m=self.m, n=self.n, rows=[[c for c, _ in row] for row in self.rows])

    def to_dense(self) -> np.ndarray:
        d = np.zeros((self.m, self.n), dtype=np.int64)
        for i, row in enumerate(self.rows):
            for c, v in row:
                d[i, c] = v
        return d

    def row_grid(self) -> tuple[np.ndarray, np.ndarray]:
        """(cols, vals) as (m, L) arrays; requires uniform row weight."""
        weights = {len(r) for r in self.rows}
        if len(weights) != 1:
            raise DimensionMismatch("row weight is not uniform")
        cols = np.array([[c for c, _ in row] for row in self.rows], dtype=np.int64)
        vals = np.array([[v for _, v in row] for row in self.rows], dtype=np.int64)
        return cols, vals

    def same_shape(self, other: "NBMatrix") -> bool:
        return self.m == other.m and self.n == other.n


def cycle_structure(hc: SparseBinaryMatrix, hd: SparseBinaryMatrix,
                    m_prime: int) -> CycleStructure:
    """Walk the cycle of row `m_prime` of the second matrix through the
    Tanner graph of the first.

    Starts at the smallest support column (the block-0 column) and at
    its check neighbour in the top half, so the orientation matches the
    closed forms.  Raises NotACycle when the walk does not visit all 2L
    positions and return to its start.
    """
    if hc.m != hd.m or hc.n != hd.n:
        raise DimensionMismatch("pair matrices must have equal shape")
    if not 0 <= m_prime < hd.m:
        raise IndexError(f"row {m_prime} outside [0, {hd.m})")
    P = hc.m // 2
    support = list(hd.rows[m_prime])
    L = len(support)
    in_support = set(support)
    col_neighbors = {}
    for m, row in enumerate(hc.rows):
        for c in row:
            if c in in_support:
                col_neighbors.setdefault(c, []).append(m)
    if any(len(v) != 2 for v in col_neighbors.values()) or len(col_neighbors) != L:
        raise NotACycle(f"columns of row {m_prime} do not all have 2 check neighbours")
    row_cols = {}
    for c, ms in col_neighbors.items():
        for m in ms:
            row_cols.setdefault(m, []).append(c)
    if any(len(v) != 2 for v in row_cols.values()) or len(row_cols) != L:
        raise NotACycle(f"row {m_prime}: restricted graph is not 2-regular on {L} checks")

    n0 = min(support)
    tops = [m for m in col_neighbors[n0] if m < P]
    if len(tops) != 1:
        raise NotACycle(f"column {n0} lacks a unique top-half neighbour")
    n_seq, m_seq = [n0], [tops[0]]
    while True:
        m_cur, n_cur = m_seq[-1], n_seq[-1]
        nxt = [c for c in row_cols[m_cur] if c != n_cur]
        if len(nxt) != 1:
            raise NotACycle(f"walk stuck at check {m_cur}")
        n_nxt = nxt[0]
        if n_nxt == n0:
            break
        m_nxt = [m for m in col_neighbors[n_nxt] if m != m_cur]
        if len(m_nxt) != 1:
            raise NotACycle(f"walk stuck at column {n_nxt}")
        n_seq.append(n_nxt)
        m_seq.append(m_nxt[0])
        if len(n_seq) > L:
            raise NotACycle(f"walk through row {m_prime} exceeds {L} columns")
    if len(n_seq) != L:
        raise NotACycle(f"walk closed after {len(n_seq)} of {L} columns")
    return CycleStructure(m_prime=m_prime, n_seq=n_seq, m_seq=m_seq)


def closed_form_cycle(params: QCParams, m_prime: int) -> CycleStructure:
    """Direct formulas for the cycle of an upper-half row (0 <= m' < P).

    Serves as an independent cross-check of the graph walk.  The column
    formula for odd positions uses exponent sigma^(i mod L/2); the sign
    conventions of the even forms follow the construction exponents.
    """
    P, L, sigma, tau = params.P, params.L, params.sigma, params.tau
    if not 0 <= m_prime < P:
        raise IndexError("closed forms cover the upper half rows only")
    half = L // 2
    sigma_inv = pow(sigma, -1, P)
    n_seq = [0] * L
    m_seq = [0] * L
    for i in range(half):
        n_seq[2 * i] = (-tau * pow(sigma_inv, i, P) + m_prime) % P + i * P
        block = (-i) % half + half
        n_seq[2 * i + 1] = (-pow(sigma, i % half, P) + m_prime) % P + block * P
        m_seq[2 * i] = (-pow(sigma, i, P) - tau * pow(sigma_inv, i, P) + m_prime) % P
        m_seq[(2 * i - 1) % L] = (-pow(sigma, i - 1 if i >= 1 else half - 1, P)
                                  - tau * pow(sigma_inv, i, P) + m_prime) % P + P
    return CycleStructure(m_prime=m_prime, n_seq=n_seq, m_seq=m_seq)


def assemble_constraints(pair: QCPair, modulus: int) -> tuple[ModSystem, dict]:
    """Balance equations for the lift, one per row of the second matrix.

    Variables are the discrete logs of the first matrix's nonzeros,
    indexed row-major over its support; the modulus is 2^p - 1 for a
    lift over GF(2^p).  Returns the system together with the
    (row, col) -> variable index map.
    """
    if pair.params.J != 2:
        raise DimensionMismatch("cycle constraints require column weight J=2")
    hc = pair.expand_c()
    hd = pair.expand_d()
    var_index = {}
    for m, cols in enumerate(hc.rows):
        for c in cols:
            var_index[(m, c)] = len(var_index)
    system = ModSystem(modulus=modulus, n_vars=len(var_index))
    for m_prime in range(hd.m):
        cyc = cycle_structure(hc, hd, m_prime)
        terms = [(var_index[pos], 1) for pos in cyc.e1()]
        terms += [(var_index[pos], -1) for pos in cyc.e2()]
        system.add_equation(terms)
    return system, var_index


def lift_gamma(pair: QCPair, field: FieldSpec, rng: np.random.Generator,
               reject_trivial: bool = False, max_resample: int = 1000) -> NBMatrix:
    """Sample the first non-binary matrix on the support of the QC pair.

    Logs are drawn from the solution space of the balance equations, so
    every cycle determinant vanishes by construction.  With
    `reject_trivial`, the all-zero log draw (the all-ones matrix, which
    collapses back to the binary code) is resampled.
    """
    system, var_index = assemble_constraints(pair, field.q - 1)
    space = solve_mod(system)
    for _ in range(max_resample):
        logs = sample_solution(space, rng)
        if not reject_trivial or logs.any():
            break
    else:
        raise RuntimeError("could not sample a non-trivial lift")
    hc = pair.expand_c()
    rows = []
    for m, cols in enumerate(hc.rows):
        rows.append([(c, field.exp(int(logs[var_index[(m, c)]]))) for c in cols])
    return NBMatrix(m=hc.m, n=hc.n, role="GAMMA", field=field,
                    params=pair.params, rows=rows)


def solve_delta(gamma: NBMatrix, pair: QCPair) -> NBMatrix:
    """Propagate the second matrix's nonzeros around each cycle.

    Each row is a null-space ray of the cycle's bidiagonal system; the
    anchor entry is fixed to 1 (any nonzero scaling gives an equivalent
    code).  The wrap-around of each recurrence is re-checked and a
    failure flags a first matrix that does not satisfy its determinant
    condition, which lift_gamma rules out.
    """
    field = gamma.field
    hc = pair.expand_c()
    hd = pair.expand_d()
    rows = []
    for m_prime in range(hd.m):
        cyc = cycle_structure(hc, hd, m_prime)
        L = cyc.L
        vals = {cyc.n_seq[0]: 1}
        for i in range(L - 1):
            g_here = gamma.entry(cyc.m_seq[i], cyc.n_seq[i])
            g_next = gamma.entry(cyc.m_seq[i], cyc.n_seq[i + 1])
            vals[cyc.n_seq[i + 1]] = field.mul(
                vals[cyc.n_seq[i]], field.mul(g_here, field.inv(g_next)))
        g_last = gamma.entry(cyc.m_seq[-1], cyc.n_seq[-1])
        g_wrap = gamma.entry(cyc.m_seq[-1], cyc.n_seq[0])
        closure = field.mul(vals[cyc.n_seq[-1]], field.mul(g_last, field.inv(g_wrap)))
        if closure != vals[cyc.n_seq[0]]:
            raise ClosureViolation(
                f"row {m_prime}: cycle closure failed (determinant condition broken)")
        rows.append(sorted(vals.items()))
    return NBMatrix(m=hd.m, n=hd.n, role="DELTA", field=field,
                    params=pair.params, rows=rows)


def verify_orthogonal(gamma: NBMatrix, delta: NBMatrix) -> bool:
    """All pairwise row products over GF(2^p) vanish.

    Sparse row intersection; zero-dimension matrices are orthogonal.
    """
    if gamma.n != delta.n:
        raise DimensionMismatch(
            f"column counts differ: {gamma.n} != {delta.n}")
    field = gamma.field
    for grow in gamma.rows:
        gmap = dict(grow)
        for drow in delta.rows:
            acc = 0
            for c, dv in drow:
                gv = gmap.get(c)
                if gv is not None:
                    acc ^= field.mul(gv, dv)
            if acc:
                return False
    return True
