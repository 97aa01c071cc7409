"""Quantum CSS code pairs from non-binary quasi-cyclic LDPC matrices.

Pipeline: orthogonal binary quasi-cyclic pair -> non-binary lift over
GF(2^p) -> binary expansion through the companion-matrix map.  Decoding
is syndrome sum-product over GF(2)^p with Walsh-Hadamard check-node
convolution; the harness runs seeded Monte Carlo block-error sweeps.
"""

from nbqc.gf2p import FieldSpec, make_field
from nbqc.qcpair import QCParams, QCPair, build_pair, expand, find_params, has_4cycle, validate_params
from nbqc.nblift import NBMatrix, cycle_structure, lift_gamma, solve_delta, verify_orthogonal
from nbqc.binexpand import CssCodePair, expand_pair, read_matrix, write_matrix
from nbqc.channel import ChannelParams, sample_error, syndrome_of
from nbqc.decoder import DecoderConfig, DecodeOutcome, SyndromeDecoder, decode, decode_css

__all__ = [
    "FieldSpec", "make_field",
    "QCParams", "QCPair", "build_pair", "expand", "find_params", "has_4cycle", "validate_params",
    "NBMatrix", "cycle_structure", "lift_gamma", "solve_delta", "verify_orthogonal",
    "CssCodePair", "expand_pair", "read_matrix", "write_matrix",
    "ChannelParams", "sample_error", "syndrome_of",
    "DecoderConfig", "DecodeOutcome", "SyndromeDecoder", "decode", "decode_css",
]
