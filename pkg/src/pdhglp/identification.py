"""Two-stage diagnostics: when the active set locks in, and the bounds
predicting that moment and the local linear rate afterwards."""

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import DeltaMetric


@dataclass
class IdentificationReport:
    empirical_iter: Optional[int]
    theoretical_K: float
    R: float
    delta: DeltaMetric
    alpha_L1_lower: float
    alpha_L2_lower: float
    local_rate_per_iter: float

    def to_text(self):
        payload = {
            "empirical_iter": self.empirical_iter,
            "theoretical_K": self.theoretical_K,
            "R": self.R,
            "delta": self.delta.value,
            "alpha_L1_lower": self.alpha_L1_lower,
            "alpha_L2_lower": self.alpha_L2_lower,
            "local_rate_per_iter": self.local_rate_per_iter,
            "delta_argmin_kind": self.delta.argmin_kind,
            "delta_argmin_index": self.delta.argmin_index,
        }
        return json.dumps(payload, indent=2)


def _mask_of(indices):
    mask = 0
    for i in indices:
        mask |= 1 << int(i)
    return mask


def identification_moment(log, final_partition):
    """Earliest logged iteration after which the masks persistently show
    the identified pattern: support excludes N, includes B1, and the
    positive-reduced-cost mask equals N.  None if the last entry fails."""
    if not len(log.active_primal) or not len(log.active_dualslack):
        raise ValueError("log has no active-set bitmasks")
    n_mask = _mask_of(final_partition.N)
    b1_mask = _mask_of(final_partition.B1)

    def ok(i):
        ap = log.active_primal[i]
        ad = log.active_dualslack[i]
        return (ap & n_mask) == 0 and (ap & b1_mask) == b1_mask and ad == n_mask

    moment = None
    for i in range(len(log.iters) - 1, -1, -1):
        if not ok(i):
            break
        moment = log.iters[i]
    return moment


def identification_bound(R, delta, s, alpha_L1, A_norm):
    """K = max{4, 1/(s^2 alpha^2)} * 256 R^2 / delta^2 + 2/(s ||A||)."""
    for name, v in (("R", R), ("delta", delta), ("s", s),
                    ("alpha_L1", alpha_L1), ("A_norm", A_norm)):
        if v <= 0:
            raise ValueError(f"{name} must be positive")
    lead = max(4.0, 1.0 / (s * s * alpha_L1 * alpha_L1))
    return lead * 256.0 * R * R / (delta * delta) + 2.0 / (s * A_norm)


def local_rate_bound(delta, s, alpha_L2, k_minus_K):
    """4 delta * exp(-(k - K) / (2 ceil(4e / (s^2 alpha^2))))."""
    if delta <= 0 or s <= 0 or alpha_L2 <= 0:
        raise ValueError("inputs must be positive")
    period = 2 * math.ceil(4.0 * math.e / (s * s * alpha_L2 * alpha_L2))
    return 4.0 * delta * math.exp(-float(k_minus_K) / period)


def local_rate_per_iter(delta, s, alpha_L2):
    """The per-iteration contraction factor implied by local_rate_bound."""
    period = 2 * math.ceil(4.0 * math.e / (s * s * alpha_L2 * alpha_L2))
    return math.exp(-1.0 / period)


def r_delta_metric(z0, z_star, delta):
    """(2 ||z0 - z*|| + 2 ||z*|| + 1) / delta."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    d = np.linalg.norm(z0.as_vector() - z_star.as_vector())
    return float((2.0 * d + 2.0 * np.linalg.norm(z_star.as_vector()) + 1.0)
                 / delta)


def radius_bound(z0, z_star):
    """R = 2 (||z0 - z*|| + ||z*||) + 1, the iterate-norm bound used by the
    identification bound."""
    d = float(np.linalg.norm(z0.as_vector() - z_star.as_vector()))
    return 2.0 * (d + float(np.linalg.norm(z_star.as_vector()))) + 1.0
