"""Depolarizing-channel error sampling and syndrome computation.

Errors live on n = pN qubits, grouped into N symbols of p bits; bit j
of a symbol is the coefficient of alpha^j.  A depolarizing channel with
probability f_dep = 3 f_m / 2 applies X, Y, Z each with f_dep/3, so the
marginal flip probability of the X component (and of the Z component)
is exactly 2 f_dep / 3 = f_m.  In independent mode the two components
are sampled as separate Bernoulli(f_m) bit vectors, which is the model
the per-component decoder actually assumes; joint mode keeps the X/Z
correlation of the real channel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from nbqc.binexpand import CssCodePair
from nbqc.nblift import DimensionMismatch


@dataclass(frozen=True)
class ChannelParams:
    """Marginal flip probability and sampling mode."""

    f_m: float
    mode: str = "independent"     # "independent" | "joint"

    def __post_init__(self):
        if not 0.0 <= self.f_m < 0.5:
            raise ValueError(f"f_m must be in [0, 0.5), got {self.f_m}")
        if self.mode not in ("independent", "joint"):
            raise ValueError(f"mode must be 'independent' or 'joint', got {self.mode!r}")

    @property
    def f_dep(self) -> float:
        return 1.5 * self.f_m


def sample_error(n_sym: int, p: int, params: ChannelParams,
                 rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Draw (x_error, z_error) as length-n_sym symbol arrays.

    Independent mode flips each of the p*n_sym bits of either component
    with probability f_m, independently.  Joint mode draws one Pauli
    per qubit: identity with 1 - f_dep, else X, Y, Z equiprobably; Y
    flips both components, so X and Z bits are correlated.
    """
    n_bits = n_sym * p
    if params.mode == "independent":
        x_bits = rng.random(n_bits) < params.f_m
        z_bits = rng.random(n_bits) < params.f_m
    else:
        u = rng.random(n_bits)
        third = params.f_dep / 3.0
        x_bits = u < 2 * third                      # X or Y
        z_bits = (u >= third) & (u < 3 * third)     # Y or Z
    return _pack_symbols(x_bits, p), _pack_symbols(z_bits, p)


def _pack_symbols(bits: np.ndarray, p: int) -> np.ndarray:
    weights = np.int64(1) << np.arange(p, dtype=np.int64)
    return bits.reshape(-1, p).astype(np.int64) @ weights


def unpack_symbols(symbols: np.ndarray, p: int) -> np.ndarray:
    """Length-pN bit vector of a symbol array (bit j of symbol n at pn+j)."""
    symbols = np.asarray(symbols, dtype=np.int64)
    return ((symbols[:, None] >> np.arange(p)) & 1).reshape(-1).astype(np.uint8)


def syndrome_of(code: CssCodePair, role: str, error: np.ndarray) -> np.ndarray:
    """Length-M symbol syndrome of an error under one constituent code.

    Symbol-wise: each check accumulates (XOR) the binary image of its
    entry applied to the error symbol, which for the first matrix is
    just field multiplication.
    """
    error = np.asarray(error, dtype=np.int64)
    if error.shape != (code.N,):
        raise DimensionMismatch(
            f"error must be {code.N} symbols, got shape {error.shape}")
    mat = code.matrix(role)
    field = code.field
    syndrome = np.zeros(code.M, dtype=np.int64)
    for m, row in enumerate(mat.rows):
        acc = 0
        if role == "C":
            for n, v in row:
                acc ^= field.mul(v, int(error[n]))
        else:
            for n, v in row:
                acc ^= int(field.transpose_index_table(v)[error[n]])
        syndrome[m] = acc
    return syndrome
