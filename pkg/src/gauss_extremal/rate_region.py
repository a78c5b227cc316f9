"""Closed-form two-encoder quadratic Gaussian rate regions.

A rate/distortion point (R_x, R_y, nu_x, nu_y) for a unit-variance pair
with correlation rho is achievable iff

    R_x >= (1/2) log2[(1/nu_x)(1 - rho^2 + rho^2 2^(-2 R_y))]
    R_y >= (1/2) log2[(1/nu_y)(1 - rho^2 + rho^2 2^(-2 R_x))]
    R_x + R_y >= (1/2) log2[(1 - rho^2) beta(nu_x nu_y) / (2 nu_x nu_y)]

with beta(z) = 1 + sqrt(1 + 4 rho^2 z / (1 - rho^2)^2). Rates and
distortions are per dimension. Only rho^2 enters any formula, so verdicts
are invariant under rho -> -rho.

Everything here is pure and stateless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .gauss_model import InfoVector

# Membership uses slack >= -BOUNDARY_TOL so exact-boundary constructions
# count as inside.
BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class RegionQuery:
    """One membership question: rates, distortion targets, correlation."""

    rho: float
    r_x: float
    r_y: float
    nu_x: float
    nu_y: float

    def __post_init__(self):
        if not -1.0 < self.rho < 1.0:
            raise DomainError("rho must lie in (-1, 1)")
        for name in ("r_x", "r_y", "nu_x", "nu_y"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite")
        if self.r_x < 0.0 or self.r_y < 0.0:
            raise DomainError("rates must be nonnegative")
        if not (0.0 < self.nu_x <= 1.0 and 0.0 < self.nu_y <= 1.0):
            raise DomainError("nu values must lie in (0, 1]")


@dataclass(frozen=True)
class RegionVerdict:
    satisfies_rx: bool
    satisfies_ry: bool
    satisfies_sum: bool
    slack_rx: float
    slack_ry: float
    slack_sum: float
    inside: bool


def beta(rho: float, z: float) -> float:
    """1 + sqrt(1 + 4 rho^2 z / (1 - rho^2)^2); exactly 2 at rho = 0 or z = 0."""
    if not -1.0 < rho < 1.0:
        raise DomainError("rho must lie in (-1, 1)")
    if z < 0.0:
        raise DomainError("z must be nonnegative")
    r2 = rho * rho
    return 1.0 + math.sqrt(1.0 + 4.0 * r2 * z / (1.0 - r2) ** 2)


def sum_rate_bound_raw(rho: float, d_x: float, d_y: float) -> float:
    """Unclamped sum-rate bound (1/2) log2[(1-rho^2) beta(dx dy) / (2 dx dy)]."""
    if not (0.0 < d_x <= 1.0 and 0.0 < d_y <= 1.0):
        raise DomainError("distortions must lie in (0, 1]")
    r2 = rho * rho
    d = d_x * d_y
    return 0.5 * math.log2((1.0 - r2) * beta(rho, d) / (2.0 * d))


def sum_rate_bound(rho: float, d_x: float, d_y: float) -> float:
    """Sum-rate bound clamped below at zero (rates are nonnegative)."""
    return max(0.0, sum_rate_bound_raw(rho, d_x, d_y))


def distortion_of_sum_rate(rho: float, r: float) -> float:
    """Distortion product attained at sum rate r:
    D(r) = 2^(-2r) (1 - rho^2 + rho^2 2^(-2r)).

    Exact inverse of the sum-rate bound: feeding sqrt(D(r)) into each
    distortion slot recovers r (the bound solves this quadratic in
    2^(-2r)).
    """
    r2 = rho * rho
    t = 2.0 ** (-2.0 * r)
    return t * (1.0 - r2 + r2 * t)


def region_verdict(q: RegionQuery) -> RegionVerdict:
    """Per-constraint slacks and membership for one query."""
    r2 = q.rho * q.rho
    bound_x = 0.5 * math.log2((1.0 - r2 + r2 * 2.0 ** (-2.0 * q.r_y)) / q.nu_x)
    bound_y = 0.5 * math.log2((1.0 - r2 + r2 * 2.0 ** (-2.0 * q.r_x)) / q.nu_y)
    slack_rx = q.r_x - bound_x
    slack_ry = q.r_y - bound_y
    slack_sum = q.r_x + q.r_y - sum_rate_bound_raw(q.rho, q.nu_x, q.nu_y)
    sat_rx = slack_rx >= -BOUNDARY_TOL
    sat_ry = slack_ry >= -BOUNDARY_TOL
    sat_sum = slack_sum >= -BOUNDARY_TOL
    return RegionVerdict(
        satisfies_rx=sat_rx,
        satisfies_ry=sat_ry,
        satisfies_sum=sat_sum,
        slack_rx=slack_rx,
        slack_ry=slack_ry,
        slack_sum=slack_sum,
        inside=sat_rx and sat_ry and sat_sum,
    )


def min_nu_boundary(rho: float, r_x: float, r_y: float) -> tuple[float, float, bool]:
    """Smallest per-constraint distortions at the given rates, plus whether
    that corner also meets the sum constraint."""
    if r_x < 0.0 or r_y < 0.0:
        raise DomainError("rates must be nonnegative")
    r2 = rho * rho
    nu_x_min = 2.0 ** (-2.0 * r_x) * (1.0 - r2 + r2 * 2.0 ** (-2.0 * r_y))
    nu_y_min = 2.0 ** (-2.0 * r_y) * (1.0 - r2 + r2 * 2.0 ** (-2.0 * r_x))
    verdict = region_verdict(RegionQuery(rho=rho, r_x=r_x, r_y=r_y, nu_x=nu_x_min, nu_y=nu_y_min))
    return nu_x_min, nu_y_min, verdict.satisfies_sum


def mmse_jensen_gap(info: InfoVector, mmse_x: float, mmse_y: float, n: int = 1) -> float:
    """(I(X;U,V) + I(Y;U,V))/n - (1/2) log2(1/(mmse_x mmse_y)).

    Nonnegative whenever the mmse arguments are the true normalized
    conditional errors (Gaussian descriptions meet it with equality);
    overstating an mmse pushes the gap positive.
    """
    if not (0.0 < mmse_x <= 1.0 and 0.0 < mmse_y <= 1.0):
        raise DomainError("mmse values must lie in (0, 1]")
    return (info.i_x_uv + info.i_y_uv) / n + 0.5 * math.log2(mmse_x * mmse_y)
