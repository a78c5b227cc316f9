"""Jointly Gaussian source pairs, linear test channels, and exact mutual
informations.

Sources come in two forms. The scalar form is a unit-variance pair (X, Y)
with correlation rho, i.e. Y = rho * X + Z with Var(Z) = 1 - rho^2. The
vector form is X ~ N(0, sigma_x), Z ~ N(0, sigma_z) independent, and
Y = X + Z. The scalar form embeds into the vector form as
sigma_x = [[rho^2]], sigma_z = [[1 - rho^2]] (rescaling X by rho changes
no mutual information).

Test channels are linear with independent Gaussian noise: U = C X + W on
the X side, V = C Y + W on the Y side. A channel never reads the opposite
source, so U - X - Y - V always holds by construction. The constant
(zero-information) channel is represented by an explicit flag rather than
by a singular gain/noise pair.

All informations are in bits. Every mutual information is computed as
(1/2) log2(|S_A| |S_B| / |S_AB|) from Cholesky log-determinants of blocks
of the joint covariance; conditional quantities go through Schur
complements. Means are fixed to zero throughout: mutual information is
translation invariant.

All values are immutable after construction and every operation is a pure
function of its inputs, so concurrent use needs no synchronization.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotPositiveDefinite

LN2 = math.log(2.0)

# A matrix is accepted as positive definite iff all Cholesky pivots exceed
# PIVOT_TOL * trace / n. No jitter is ever added; borderline inputs are
# rejected loudly instead of silently perturbed.
PIVOT_TOL = 1e-10
SYMMETRY_TOL = 1e-12


def _as_square(mat, name: str = "matrix") -> np.ndarray:
    a = np.asarray(mat, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"{name}: expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError(f"{name}: entries must be finite")
    return a


def _check_symmetric(a: np.ndarray, name: str) -> None:
    scale = max(1.0, float(np.abs(a).max()))
    if float(np.abs(a - a.T).max()) > SYMMETRY_TOL * scale:
        raise NotPositiveDefinite(f"{name}: not symmetric within {SYMMETRY_TOL:g} relative")


def _pivot_floor(a: np.ndarray) -> float:
    return PIVOT_TOL * float(np.trace(a)) / a.shape[0]


def cholesky_pd(mat, name: str = "matrix") -> np.ndarray:
    """Lower Cholesky factor, with the package-wide pivot acceptance test."""
    a = _as_square(mat, name)
    _check_symmetric(a, name)
    floor = _pivot_floor(a)
    if floor <= 0.0:
        raise NotPositiveDefinite(f"{name}: nonpositive trace")
    try:
        lower = np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite(f"{name}: Cholesky factorization failed") from None
    pivots = np.diagonal(lower) ** 2
    if float(pivots.min()) <= floor:
        raise NotPositiveDefinite(
            f"{name}: pivot {pivots.min():.3e} below tolerance {floor:.3e}"
        )
    return lower


def log_det(mat, name: str = "matrix") -> float:
    """Natural-log determinant of a positive-definite matrix.

    Computed from the Cholesky factor; exact (one log per entry) for
    diagonal inputs. Raises NotPositiveDefinite when any pivot falls at or
    below PIVOT_TOL * trace / n.
    """
    a = _as_square(mat, name)
    d = np.diagonal(a)
    if np.count_nonzero(a - np.diag(d)) == 0:
        floor = _pivot_floor(a)
        if floor <= 0.0 or float(d.min()) <= floor:
            raise NotPositiveDefinite(f"{name}: diagonal entry below pivot tolerance")
        return float(np.sum(np.log(d)))
    lower = cholesky_pd(a, name)
    return 2.0 * float(np.sum(np.log(np.diagonal(lower))))


def schur_conditional_cov(joint, target, given) -> np.ndarray:
    """Conditional covariance S_T - S_TG S_G^{-1} S_GT of Gaussian blocks.

    target and given are index sequences into the joint covariance. The
    result is symmetrized. Raises NotPositiveDefinite when the given block
    cannot be factorized.
    """
    a = _as_square(joint, "joint")
    t = np.asarray(target, dtype=int)
    g = np.asarray(given, dtype=int)
    s_g = a[np.ix_(g, g)]
    lower = cholesky_pd(s_g, "given block")
    s_gt = a[np.ix_(g, t)]
    w = np.linalg.solve(lower, s_gt)
    out = a[np.ix_(t, t)] - w.T @ w
    return 0.5 * (out + out.T)


def matrix_from_json(obj) -> np.ndarray:
    """Parse {"n": int, "data": row-major n^2 numbers} with strict checks."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or set(obj) != {"n", "data"}:
        raise DomainError('matrix JSON must be an object with exactly "n" and "data"')
    n = obj["n"]
    if not isinstance(n, int) or n < 1:
        raise DomainError('"n" must be a positive integer')
    data = obj["data"]
    if not isinstance(data, list) or len(data) != n * n:
        raise DomainError(f'"data" must hold exactly {n * n} numbers')
    try:
        a = np.asarray(data, dtype=float).reshape(n, n)
    except (TypeError, ValueError):
        raise DomainError('"data" entries must be numbers') from None
    if not np.all(np.isfinite(a)):
        raise DomainError('"data" entries must be finite')
    return a


def matrix_to_json(mat) -> dict:
    a = _as_square(mat)
    return {"n": int(a.shape[0]), "data": [float(x) for x in a.reshape(-1)]}


@dataclass(frozen=True)
class GaussianPairModel:
    """Joint law of the source pair (X, Y), scalar or vector form."""

    kind: str  # "scalar" | "vector"
    n: int
    rho: float | None = None
    sigma_x: np.ndarray | None = None
    sigma_z: np.ndarray | None = None

    @classmethod
    def scalar(cls, rho: float) -> "GaussianPairModel":
        rho = float(rho)
        if not -1.0 < rho < 1.0:
            raise DomainError(f"rho must lie in (-1, 1), got {rho}")
        return cls(kind="scalar", n=1, rho=rho)

    @classmethod
    def vector(cls, sigma_x, sigma_z) -> "GaussianPairModel":
        sx = _as_square(sigma_x, "sigma_x").copy()
        sz = _as_square(sigma_z, "sigma_z").copy()
        if sx.shape != sz.shape:
            raise DomainError("sigma_x and sigma_z must have the same shape")
        cholesky_pd(sx, "sigma_x")
        cholesky_pd(sz, "sigma_z")
        sx.setflags(write=False)
        sz.setflags(write=False)
        return cls(kind="vector", n=sx.shape[0], sigma_x=sx, sigma_z=sz)

    @property
    def sigma_y(self) -> np.ndarray:
        if self.kind != "vector":
            raise DomainError("sigma_y is defined for vector models")
        return self.sigma_x + self.sigma_z

    def to_vector(self) -> "GaussianPairModel":
        """Exact embedding of the scalar form into the vector form.

        Undefined at rho = 0, where the embedded sigma_x degenerates.
        """
        if self.kind == "vector":
            return self
        if self.rho == 0.0:
            raise DomainError("the scalar model with rho = 0 has no vector embedding")
        r2 = self.rho * self.rho
        return GaussianPairModel.vector([[r2]], [[1.0 - r2]])

    def joint_xy_cov(self) -> np.ndarray:
        """Covariance of the stacked (X, Y) vector."""
        if self.kind == "scalar":
            return np.array([[1.0, self.rho], [self.rho, 1.0]])
        sx = self.sigma_x
        return np.block([[sx, sx], [sx, sx + self.sigma_z]])

    def det_ratio_x_over_y(self) -> float:
        """(|sigma_x| / |sigma_y|)^(1/n), the source-to-output volume ratio."""
        if self.kind == "scalar":
            if self.rho == 0.0:
                raise DomainError("ratio undefined for the scalar model with rho = 0")
            return self.rho * self.rho
        n = self.n
        return math.exp((log_det(self.sigma_x) - log_det(self.sigma_y)) / n)


@dataclass(frozen=True)
class GaussianAuxChannel:
    """Linear-Gaussian description channel U = C X + W (or V = C Y + W)."""

    side: str  # "x" | "y"
    gain: np.ndarray | None = None
    noise_cov: np.ndarray | None = None
    degenerate: bool = False

    @classmethod
    def degenerate_on(cls, side: str) -> "GaussianAuxChannel":
        cls._check_side(side)
        return cls(side=side, degenerate=True)

    @classmethod
    def linear(cls, gain, noise_cov, side: str) -> "GaussianAuxChannel":
        cls._check_side(side)
        g = np.asarray(gain, dtype=float)
        if g.ndim != 2:
            raise DomainError("gain must be a 2-d matrix")
        nc = _as_square(noise_cov, "noise_cov").copy()
        if nc.shape[0] != g.shape[0]:
            raise DomainError("noise_cov dimension must match the gain's row count")
        _check_symmetric(nc, "noise_cov")
        g = g.copy()
        g.setflags(write=False)
        nc.setflags(write=False)
        return cls(side=side, gain=g, noise_cov=nc)

    @classmethod
    def scalar_corr(cls, corr: float, side: str) -> "GaussianAuxChannel":
        """Unit-variance scalar channel with the given input correlation."""
        corr = float(corr)
        if not -1.0 < corr < 1.0:
            raise DomainError("channel correlation must lie in (-1, 1)")
        return cls.linear([[corr]], [[1.0 - corr * corr]], side)

    @classmethod
    def for_conditional_cov(cls, model: GaussianPairModel, target_cov, side: str) -> "GaussianAuxChannel":
        """Identity-gain channel whose conditional source covariance equals target_cov.

        With U = X + W the conditional covariance is (S^{-1} + N^{-1})^{-1},
        so N = (T^{-1} - S^{-1})^{-1}; this requires T strictly below the
        source covariance S in the definite order.
        """
        cls._check_side(side)
        if model.kind == "scalar":
            model = model.to_vector()
        source = model.sigma_x if side == "x" else model.sigma_y
        t = _as_square(target_cov, "target_cov")
        cholesky_pd(t, "target_cov")
        gap = np.linalg.inv(t) - np.linalg.inv(source)
        gap = 0.5 * (gap + gap.T)
        cholesky_pd(gap, "target_cov (must be strictly below the source covariance)")
        noise = np.linalg.inv(gap)
        return cls.linear(np.eye(model.n), 0.5 * (noise + noise.T), side)

    @staticmethod
    def _check_side(side: str) -> None:
        if side not in ("x", "y"):
            raise DomainError(f'side must be "x" or "y", got {side!r}')

    def output_dim(self) -> int:
        return 0 if self.degenerate else self.gain.shape[0]


@dataclass(frozen=True)
class InfoVector:
    """The mutual informations of one (model, U, V) triple, in bits."""

    i_xu: float
    i_yu: float
    i_xv: float
    i_yv: float
    i_xv_given_u: float
    i_yv_given_u: float
    i_uv: float
    i_xy: float
    i_x_uv: float
    i_y_uv: float
    i_xy_uv: float


class _Joint:
    """Joint covariance with named blocks and cached log-determinants."""

    def __init__(self, cov: np.ndarray, blocks: dict[str, np.ndarray]):
        self.cov = cov
        self.blocks = blocks
        self._ld: dict[tuple[str, ...], float] = {}

    def _idx(self, names: tuple[str, ...]) -> np.ndarray:
        return np.concatenate([self.blocks[n] for n in names])

    def ld(self, *names: str) -> float:
        key = tuple(names)
        if key not in self._ld:
            idx = self._idx(key)
            self._ld[key] = log_det(self.cov[np.ix_(idx, idx)], "joint covariance block")
        return self._ld[key]

    def mi(self, a: tuple[str, ...], b: tuple[str, ...]) -> float:
        return (self.ld(*a) + self.ld(*b) - self.ld(*(a + b))) / (2.0 * LN2)

    def cmi(self, a: tuple[str, ...], b: tuple[str, ...], c: tuple[str, ...]) -> float:
        ia, ib, ic = self._idx(a), self._idx(b), self._idx(c)
        cond = schur_conditional_cov(self.cov, np.concatenate([ia, ib]), ic)
        na = len(ia)
        ld = lambda m: log_det(m, "conditional covariance block")
        return (ld(cond[:na, :na]) + ld(cond[na:, na:]) - ld(cond)) / (2.0 * LN2)


def _build_joint(model: GaussianPairModel, u: GaussianAuxChannel, v: GaussianAuxChannel) -> _Joint:
    n = model.n
    cov_xy = model.joint_xy_cov()
    sxx, sxy, syy = cov_xy[:n, :n], cov_xy[:n, n:], cov_xy[n:, n:]

    pieces = {"x": (None, None), "y": (None, None)}
    order = ["x", "y"]
    dims = {"x": n, "y": n}
    if not u.degenerate:
        if u.gain.shape[1] != n:
            raise DomainError("U-channel gain column count must equal the model dimension")
        order.append("u")
        dims["u"] = u.output_dim()
    if not v.degenerate:
        if v.gain.shape[1] != n:
            raise DomainError("V-channel gain column count must equal the model dimension")
        order.append("v")
        dims["v"] = v.output_dim()

    offsets, pos = {}, 0
    for name in order:
        offsets[name] = np.arange(pos, pos + dims[name])
        pos += dims[name]
    total = pos
    cov = np.zeros((total, total))

    def put(a: str, b: str, block: np.ndarray) -> None:
        cov[np.ix_(offsets[a], offsets[b])] = block
        if a != b:
            cov[np.ix_(offsets[b], offsets[a])] = block.T

    put("x", "x", sxx)
    put("y", "y", syy)
    put("x", "y", sxy)
    if "u" in offsets:
        cu = u.gain
        put("u", "u", cu @ sxx @ cu.T + u.noise_cov)
        put("u", "x", cu @ sxx)
        put("u", "y", cu @ sxy)
    if "v" in offsets:
        cv = v.gain
        put("v", "v", cv @ syy @ cv.T + v.noise_cov)
        put("v", "x", cv @ sxy.T)
        put("v", "y", cv @ syy)
    if "u" in offsets and "v" in offsets:
        put("u", "v", u.gain @ sxy @ v.gain.T)
    return _Joint(cov, offsets)


def mutual_information(model: GaussianPairModel, u: GaussianAuxChannel, v: GaussianAuxChannel) -> InfoVector:
    """All pairwise and chain informations of (X, Y, U, V), in bits.

    Degenerate channels contribute exact zeros. A singular joint covariance
    (for example a noiseless channel that copies its source) raises
    NotPositiveDefinite: it signals a degenerate channel that was not
    flagged as such.
    """
    if u.side != "x":
        raise DomainError('the U channel must have side "x"')
    if v.side != "y":
        raise DomainError('the V channel must have side "y"')

    joint = _build_joint(model, u, v)
    x, y = ("x",), ("y",)
    i_xy = joint.mi(x, y)

    if u.degenerate and v.degenerate:
        z = 0.0
        return InfoVector(z, z, z, z, z, z, z, i_xy, z, z, z)

    if u.degenerate:
        i_xv = joint.mi(x, ("v",))
        i_yv = joint.mi(y, ("v",))
        return InfoVector(
            i_xu=0.0, i_yu=0.0, i_xv=i_xv, i_yv=i_yv,
            i_xv_given_u=i_xv, i_yv_given_u=i_yv, i_uv=0.0, i_xy=i_xy,
            i_x_uv=i_xv, i_y_uv=i_yv, i_xy_uv=joint.mi(("x", "y"), ("v",)),
        )

    if v.degenerate:
        i_xu = joint.mi(x, ("u",))
        i_yu = joint.mi(y, ("u",))
        return InfoVector(
            i_xu=i_xu, i_yu=i_yu, i_xv=0.0, i_yv=0.0,
            i_xv_given_u=0.0, i_yv_given_u=0.0, i_uv=0.0, i_xy=i_xy,
            i_x_uv=i_xu, i_y_uv=i_yu, i_xy_uv=joint.mi(("x", "y"), ("u",)),
        )

    uu, vv = ("u",), ("v",)
    return InfoVector(
        i_xu=joint.mi(x, uu),
        i_yu=joint.mi(y, uu),
        i_xv=joint.mi(x, vv),
        i_yv=joint.mi(y, vv),
        i_xv_given_u=joint.cmi(x, vv, uu),
        i_yv_given_u=joint.cmi(y, vv, uu),
        i_uv=joint.mi(uu, vv),
        i_xy=i_xy,
        i_x_uv=joint.mi(x, ("u", "v")),
        i_y_uv=joint.mi(y, ("u", "v")),
        i_xy_uv=joint.mi(("x", "y"), ("u", "v")),
    )
