"""Exponent data derived from a record sequence.

For k >= 2 the records carry

    mu_k  = -log|P_{k-1}(xi)| / log H_k
    v_k   = -log|P_k(xi)|     / log H_k
    tau_k =  log H_k / log H_{k-1}      (undefined while H_{k-1} = 1)

The liminf of mu recovers the uniform exponent and the limsup of v the
ordinary one; at finite height the sequence only supports the tail-half
proxies exposed by ``SequenceData.estimates``, which are labeled estimates
and never asserted as limits.
"""

from __future__ import annotations

from fractions import Fraction

from ..enclosure import ln_fraction
from ..errors import EmptyInput
from .records import SequenceData


def derive_exponents(seq: SequenceData) -> SequenceData:
    """Fill mu, v, tau on every record where they are defined (in place)."""
    if not seq.records:
        raise EmptyInput("cannot derive exponents of an empty sequence")
    bits = seq.precision_bits
    log_h = [ln_fraction(Fraction(r.height), bits) if r.height > 1 else None
             for r in seq.records]
    for i in range(1, len(seq.records)):
        rec = seq.records[i]
        prev = seq.records[i - 1]
        lh = log_h[i]  # heights strictly increase, so H_k >= 2 for k >= 2
        rec.mu = (-prev.log_abs_value / lh).compress(bits)
        rec.v = (-rec.log_abs_value / lh).compress(bits)
        rec.tau = (lh / log_h[i - 1]).compress(bits) if log_h[i - 1] is not None else None
    return seq
