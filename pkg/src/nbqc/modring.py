"""Homogeneous linear systems over the residue ring Z_m.

The lift constraints are balance equations on discrete logs, taken mod
m = 2^p - 1.  That modulus is composite for most p (15 = 3 * 5), so
field-style Gaussian elimination is unsound: pivots can be zero
divisors.  We reduce to Howell form instead.  Pivot entries of a Howell
form divide m, entries above a pivot are reduced below it, and for
every pivot row h with pivot g the row (m/g)*h lies in the span of the
later rows.  That last property is what guarantees back-substitution
never dead-ends, whatever values the free variables take.

Sampling draws free variables uniformly from Z_m and, at each pivot row
with pivot g, picks uniformly among the g solutions of the pivot
congruence, which makes the draw uniform over the whole solution set.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np


@dataclass
class ModSystem:
    """Homogeneous system over Z_modulus.

    Each equation is a list of (variable index, coefficient) terms;
    repeated variables accumulate.  The right-hand side is zero.
    """

    modulus: int
    n_vars: int
    equations: list = field(default_factory=list)

    def add_equation(self, terms: list[tuple[int, int]]) -> None:
        self.equations.append(list(terms))

    def dense_rows(self) -> np.ndarray:
        rows = np.zeros((len(self.equations), self.n_vars), dtype=np.int64)
        for i, terms in enumerate(self.equations):
            for v, c in terms:
                rows[i, v] += c
        return rows % self.modulus

    def check(self, assignment: np.ndarray) -> bool:
        """True iff the assignment satisfies every equation mod modulus."""
        x = np.asarray(assignment, dtype=np.int64)
        return not np.any(self.dense_rows() @ x % self.modulus)


@dataclass
class SolutionSpace:
    """Howell-form description of the solutions of a homogeneous system.

    pivot_rows[i] has its first nonzero (= pivot_vals[i], a divisor of
    the modulus) at pivot_cols[i]; free_cols are the remaining columns.
    The all-zero vector is always a member.
    """

    modulus: int
    n_vars: int
    pivot_cols: list
    pivot_vals: list
    pivot_rows: np.ndarray        # (r, n_vars) int64
    free_cols: list

    def count(self) -> int:
        """Number of distinct solutions: m^#free * prod(pivot values)."""
        n = self.modulus ** len(self.free_cols)
        for g in self.pivot_vals:
            n *= g
        return n

    def enumerate(self):
        """Yield every solution (beware: count() grows fast)."""
        m = self.modulus
        free_ranges = [range(m)] * len(self.free_cols)
        pivot_ranges = [range(g) for g in self.pivot_vals]
        for free_vals in itertools.product(*free_ranges):
            for ks in itertools.product(*pivot_ranges):
                x = np.zeros(self.n_vars, dtype=np.int64)
                x[self.free_cols] = free_vals
                self._back_substitute(x, ks)
                yield x

    def _back_substitute(self, x: np.ndarray, ks) -> None:
        m = self.modulus
        for i in range(len(self.pivot_cols) - 1, -1, -1):
            col, g = self.pivot_cols[i], self.pivot_vals[i]
            rest = int(self.pivot_rows[i] @ x % m)
            if rest % g:
                raise AssertionError("Howell property violated: pivot congruence unsolvable")
            x[col] = (-(rest // g)) % (m // g) + (m // g) * ks[i]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b)."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s = s, old_s - qt * s
        old_t, t = t, old_t - qt * t
    return old_r, old_s, old_t


def _unit_scale_to_divisor(g: int, m: int) -> tuple[int, int]:
    """Unit u of Z_m with u*g = gcd(g, m) mod m; returns (u, gcd)."""
    d = math.gcd(g, m)
    if d == m:
        return 1, m
    md = m // d
    u0 = pow(g // d, -1, md)
    for t in range(d + 1):
        u = u0 + md * t
        if math.gcd(u, m) == 1:
            return u % m, d
    raise AssertionError(f"no unit lift for g={g} mod {m}")


def solve_mod(system: ModSystem) -> SolutionSpace:
    """Reduce a homogeneous system to Howell form.

    Always consistent (zero is a solution).  Unit pivots (+-1 first)
    are preferred; gcd combination handles columns where every entry is
    a zero divisor.  Re-reducing a reduced system is a no-op.
    """
    m = system.modulus
    n = system.n_vars
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    if m == 1:
        return SolutionSpace(m, n, [], [], np.zeros((0, n), dtype=np.int64),
                             list(range(n)))
    pending = [r for r in system.dense_rows() if r.any()]
    pivot_cols: list[int] = []
    pivot_vals: list[int] = []
    pivot_rows: list[np.ndarray] = []

    for col in range(n):
        active = [r for r in pending if r[col]]
        pending = [r for r in pending if not r[col]]
        if not active:
            continue
        row = _take_pivot_row(active, col, m)
        g = int(row[col])
        for other in active:
            other = (other - (int(other[col]) // g) * row) % m
            if other.any():
                pending.append(other)
        if g > 1:
            derived = (m // g) * row % m
            if derived.any():
                pending.append(derived)
        pivot_cols.append(col)
        pivot_vals.append(g)
        pivot_rows.append(row)

    # canonical form: reduce entries above each pivot below the pivot value
    for i in range(len(pivot_cols)):
        col, g = pivot_cols[i], pivot_vals[i]
        for j in range(i):
            v = int(pivot_rows[j][col])
            if v >= g:
                pivot_rows[j] = (pivot_rows[j] - (v // g) * pivot_rows[i]) % m

    rows = np.array(pivot_rows, dtype=np.int64) if pivot_rows else np.zeros((0, n), dtype=np.int64)
    free = [c for c in range(n) if c not in set(pivot_cols)]
    return SolutionSpace(m, n, pivot_cols, pivot_vals, rows, free)


def _take_pivot_row(active: list[np.ndarray], col: int, m: int) -> np.ndarray:
    """Pick/construct the pivot row for `col`, leaving `active` as the rows
    still to be eliminated against it.  The returned pivot divides m."""
    # unit preference: exact +-1 first, then any unit
    for want_exact in (True, False):
        for i, r in enumerate(active):
            v = int(r[col])
            exact = v == 1 or v == m - 1
            if (exact if want_exact else math.gcd(v, m) == 1):
                active.pop(i)
                u = pow(v, -1, m)
                return (u * r) % m
    # all entries share a factor with m: gcd-combine into a single row
    row = active.pop(0)
    for i, r in enumerate(active):
        a, b = int(row[col]), int(r[col])
        g, s, t = _xgcd(a, b)
        combined = (s * row + t * r) % m
        zeroed = ((a // g) * r - (b // g) * row) % m
        row = combined
        active[i] = zeroed
    u, d = _unit_scale_to_divisor(int(row[col]), m)
    return (u * row) % m


def sample_solution(space: SolutionSpace, rng: np.random.Generator) -> np.ndarray:
    """Draw one solution, uniformly over the full solution set.

    Free variables are uniform on Z_m; each pivot congruence g*x = rest
    has exactly g solutions and one is picked uniformly.
    """
    m = space.modulus
    x = np.zeros(space.n_vars, dtype=np.int64)
    if space.free_cols:
        x[space.free_cols] = rng.integers(0, m, size=len(space.free_cols))
    ks = [int(rng.integers(0, g)) if g > 1 else 0 for g in space.pivot_vals]
    space._back_substitute(x, ks)
    return x
