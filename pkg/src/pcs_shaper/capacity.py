"""Capacity of the clipped DCO-OFDM subchannel as a function of the symbol distribution.

The received frequency-domain symbol is G*X + noise with G = rho*R and
complex Gaussian noise of variance rho^2*sigma_clip^2 + sigma_z^2, so the
output density is a Gaussian mixture and C(p) = h(Y) - h(noise). The output
entropy is evaluated per mixture component with Gauss-Hermite quadrature;
for purely real (PAM) constellations the imaginary dimension factors out
and a 1-D rule is used.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clipping import SystemParams, clip_stats, q_function, _normal_pdf
from .constellation import Constellation, SymbolDistribution
from .ofdm import OfdmConfig

__all__ = [
    "SubchannelModel",
    "CapacityReport",
    "CapacityObjective",
    "subchannel_model",
    "mixture_pdf",
    "noise_entropy",
    "output_entropy",
    "capacity",
    "eb_n0_db",
    "power_for_eb_n0",
    "sndr_db",
    "DEFAULT_NODES",
]

DEFAULT_NODES = 32

# probabilities below this are treated as exactly zero in the mixture
ZERO_PROB = 1e-15
# density floor applied before taking logs
DENSITY_FLOOR = 1e-300

# cap on tensor scratch size (elements) per quadrature chunk, ~64 MB of f8
_CHUNK_ELEMENTS = 8_000_000

_GH_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gh_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _GH_CACHE:
        t, w = np.polynomial.hermite.hermgauss(n)
        t.setflags(write=False)
        w.setflags(write=False)
        _GH_CACHE[n] = (t, w)
    return _GH_CACHE[n]


@dataclass(frozen=True)
class SubchannelModel:
    """Effective flat subchannel seen by one data subcarrier."""

    effective_gain: float
    total_noise_var: float
    constellation: Constellation

    def __post_init__(self) -> None:
        if self.total_noise_var <= 0:
            raise ValueError(f"total noise variance must be positive, got {self.total_noise_var}")
        if self.effective_gain < 0:
            raise ValueError(f"effective gain must be nonnegative, got {self.effective_gain}")


@dataclass(frozen=True)
class CapacityReport:
    """Capacity value with its entropy bookkeeping."""

    capacity_bits: float
    h_y: float
    h_noise: float
    eb_n0_db: float
    quadrature_nodes: int


def subchannel_model(
    c: Constellation, p: SymbolDistribution, cfg: OfdmConfig, sp: SystemParams
) -> SubchannelModel:
    """Build the effective subchannel for distribution ``p`` from the clip statistics."""
    stats = clip_stats(c, p, cfg, sp)
    return SubchannelModel(
        effective_gain=sp.rho * stats.r_factor,
        total_noise_var=sp.rho**2 * stats.clip_noise_var + sp.noise_var,
        constellation=c,
    )


def _clean_weights(probs: np.ndarray) -> np.ndarray:
    return np.where(probs > ZERO_PROB, probs, 0.0)


def mixture_pdf(y_r, y_i, p, m: SubchannelModel):
    """Gaussian-mixture output density at (y_r, y_i); vectorized over y arrays."""
    probs = p.probs if isinstance(p, SymbolDistribution) else np.asarray(p, dtype=float)
    y_r = np.asarray(y_r, dtype=float)
    y_i = np.asarray(y_i, dtype=float)
    w = _clean_weights(probs)
    mu = m.effective_gain * m.constellation.points
    s2 = m.total_noise_var
    d2 = (y_r[..., None] - mu.real) ** 2 + (y_i[..., None] - mu.imag) ** 2
    dens = (w * np.exp(-d2 / s2)).sum(axis=-1) / (np.pi * s2)
    return dens if dens.ndim else float(dens)


def noise_entropy(m: SubchannelModel) -> float:
    """Differential entropy log2(pi*e*sigma_tot^2) of the complex noise, in bits."""
    return float(np.log2(np.pi * np.e * m.total_noise_var))


def _entropy_batch(
    weights: np.ndarray, gains: np.ndarray, noise_vars: np.ndarray,
    points: np.ndarray, nodes: int,
) -> np.ndarray:
    """h(Y) for a batch of mixtures sharing one constellation.

    ``weights`` is (B, M) and may be unnormalized; entries <= ZERO_PROB are
    treated as exactly zero. Rows are chunked to bound scratch memory.
    """
    t, wq = _gh_nodes(nodes)
    b, m = weights.shape
    real_only = bool(np.all(points.imag == 0.0))
    per_row = m * (nodes if real_only else nodes * nodes) * m
    rows = max(1, min(b, _CHUNK_ELEMENTS // max(per_row, 1)))
    out = np.empty(b)
    for lo in range(0, b, rows):
        hi = min(lo + rows, b)
        out[lo:hi] = _entropy_chunk(
            weights[lo:hi], gains[lo:hi], noise_vars[lo:hi], points, t, wq, real_only
        )
    return out


def _entropy_chunk(weights, gains, noise_vars, points, t, wq, real_only):
    w = _clean_weights(weights)
    s2t = noise_vars
    s = np.sqrt(0.5 * s2t)  # per-real-dimension std
    mu = gains[:, None] * points[None, :]
    if real_only:
        x = mu.real
        y = x[:, :, None] + (np.sqrt(2.0) * s)[:, None, None] * t[None, None, :]
        d2 = (y[:, :, :, None] - x[:, None, None, :]) ** 2
        dens = np.einsum(
            "bmjk,bk->bmj", np.exp(-d2 / (2.0 * s * s)[:, None, None, None]), w
        ) / (s * np.sqrt(2.0 * np.pi))[:, None, None]
        cond = np.log2(np.maximum(dens, DENSITY_FLOOR)) @ wq / np.sqrt(np.pi)
        h_real = -(w * cond).sum(axis=1)
        return h_real + 0.5 * np.log2(np.pi * np.e * s2t)
    n = len(t)
    shape = (len(weights), len(points), n, n)
    yr = np.broadcast_to(
        mu.real[:, :, None, None] + (np.sqrt(2.0) * s)[:, None, None, None] * t[None, None, :, None],
        shape,
    ).reshape(len(weights), len(points), n * n)
    yi = np.broadcast_to(
        mu.imag[:, :, None, None] + (np.sqrt(2.0) * s)[:, None, None, None] * t[None, None, None, :],
        shape,
    ).reshape(len(weights), len(points), n * n)
    d2 = (yr[:, :, :, None] - mu.real[:, None, None, :]) ** 2
    d2 += (yi[:, :, :, None] - mu.imag[:, None, None, :]) ** 2
    dens = np.einsum("bmjk,bk->bmj", np.exp(-d2 / s2t[:, None, None, None]), w) / (
        np.pi * s2t
    )[:, None, None]
    w2 = (wq[:, None] * wq[None, :]).reshape(-1)
    cond = np.log2(np.maximum(dens, DENSITY_FLOOR)) @ w2 / np.pi
    return -(w * cond).sum(axis=1)


def output_entropy(p, m: SubchannelModel, nodes: int = DEFAULT_NODES) -> float:
    """Mixture output entropy h(Y) in bits by per-component Gauss-Hermite quadrature."""
    if nodes < 8:
        raise ValueError(f"need at least 8 quadrature nodes, got {nodes}")
    probs = p.probs if isinstance(p, SymbolDistribution) else np.asarray(p, dtype=float)
    value = _entropy_batch(
        probs[None, :],
        np.array([m.effective_gain]),
        np.array([m.total_noise_var]),
        m.constellation.points,
        nodes,
    )
    return float(value[0])


def capacity(
    p: SymbolDistribution,
    c: Constellation,
    cfg: OfdmConfig,
    sp: SystemParams,
    nodes: int = DEFAULT_NODES,
) -> CapacityReport:
    """C(p) = h(Y) - h(noise) in bits per complex subcarrier symbol.

    All clip statistics are recomputed for ``p``; nothing is cached across
    calls because sigma_x, R and the clipping noise all depend on ``p``.
    """
    stats = clip_stats(c, p, cfg, sp)
    model = SubchannelModel(
        effective_gain=sp.rho * stats.r_factor,
        total_noise_var=sp.rho**2 * stats.clip_noise_var + sp.noise_var,
        constellation=c,
    )
    h_y = output_entropy(p, model, nodes)
    h_noise = noise_entropy(model)
    if h_y < h_noise:  # quadrature rounding on degenerate mixtures
        h_y = h_noise
    return CapacityReport(
        capacity_bits=h_y - h_noise,
        h_y=h_y,
        h_noise=h_noise,
        eb_n0_db=eb_n0_db(stats.sigma_x**2, c.order, cfg, sp) if stats.sigma_x > 0 else -np.inf,
        quadrature_nodes=nodes,
    )


class CapacityObjective:
    """C(p) as a plain function of the probability vector, for the optimizer.

    Accepts raw (possibly unnormalized) probability vectors so that
    finite-difference perturbations can be evaluated without re-projection.
    ``evaluate_batch`` computes many such vectors in one vectorized pass.
    """

    def __init__(
        self, c: Constellation, cfg: OfdmConfig, sp: SystemParams, nodes: int = DEFAULT_NODES
    ):
        if nodes < 8:
            raise ValueError(f"need at least 8 quadrature nodes, got {nodes}")
        self.constellation = c
        self.cfg = cfg
        self.sp = sp
        self.nodes = nodes

    def __call__(self, p) -> float:
        probs = p.probs if isinstance(p, SymbolDistribution) else np.asarray(p, dtype=float)
        return float(self.evaluate_batch(probs[None, :])[0])

    def evaluate_batch(self, pmat: np.ndarray) -> np.ndarray:
        """Capacity in bits for each row of a (B, M) matrix of weight vectors."""
        pmat = np.asarray(pmat, dtype=float)
        c, cfg, sp = self.constellation, self.cfg, self.sp
        a = c.symbol_energies
        var_x = cfg.subcarrier_power_factor * (pmat @ a)
        out = np.zeros(len(pmat))
        live = var_x > 0.0
        if not np.any(live):
            return out
        sigma_x = np.sqrt(var_x[live])
        alpha = (sp.i_min - sp.i_dc) / sigma_x
        beta = (sp.i_max - sp.i_dc) / sigma_x
        q_a, q_b = q_function(alpha), q_function(beta)
        r = q_a - q_b
        phi_a, phi_b = _normal_pdf(alpha), _normal_pdf(beta)
        second = r + alpha * phi_a - beta * phi_b + alpha**2 * (1.0 - q_a) + beta**2 * q_b
        mean = phi_a - phi_b + (1.0 - q_a) * alpha + q_b * beta
        clip_var = np.maximum(sigma_x**2 * (second - mean**2 - r**2), 0.0)
        gains = sp.rho * r
        noise = sp.rho**2 * clip_var + sp.noise_var
        h_y = _entropy_batch(pmat[live], gains, noise, c.points, self.nodes)
        out[live] = np.maximum(h_y - np.log2(np.pi * np.e * noise), 0.0)
        return out


def eb_n0_db(sigma_x2: float, m: int, cfg: OfdmConfig, sp: SystemParams) -> float:
    """Received bit-energy to noise-PSD ratio in dB for signal variance ``sigma_x2``.

    The electro-optical gain rho maps the transmit-side signal variance to
    the receiver, where the noise PSD is defined; without it the stated
    link parameters put every operating point far outside the studied
    0-25 dB range.
    """
    if sigma_x2 <= 0:
        raise ValueError(f"signal variance must be positive, got {sigma_x2}")
    ratio = (
        sp.rho**2
        * sigma_x2
        / (np.log2(m) * cfg.subcarrier_power_factor * sp.bandwidth * sp.n0)
    )
    return float(10.0 * np.log10(ratio))


def power_for_eb_n0(target_db: float, m: int, cfg: OfdmConfig, sp: SystemParams) -> float:
    """Symbol-power budget P whose signal variance (1 - 2/N) P hits ``target_db``."""
    sigma_x2 = (
        10.0 ** (target_db / 10.0)
        * np.log2(m)
        * cfg.subcarrier_power_factor
        * sp.bandwidth
        * sp.n0
        / sp.rho**2
    )
    return float(sigma_x2 / cfg.subcarrier_power_factor)


def sndr_db(stats, sp: SystemParams) -> float:
    """Signal-to-noise-plus-distortion ratio rho^2 R^2 sigma_x^2 / (rho^2 sigma_clip^2 + sigma_z^2), dB."""
    num = sp.rho**2 * stats.r_factor**2 * stats.sigma_x**2
    den = sp.rho**2 * stats.clip_noise_var + sp.noise_var
    return float(10.0 * np.log10(num / den))
