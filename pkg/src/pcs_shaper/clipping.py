"""Digital clipping and its analytical Bussgang statistics.

Clipping is modeled in the zero-mean (pre-bias) domain: the synthesized
signal is interpreted as x[n] - I_DC, so the clamp thresholds are
I_min - I_DC and I_max - I_DC, i.e. alpha*sigma_x and beta*sigma_x.
DC bias insertion/removal is exact and carries no information.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .constellation import Constellation, SymbolDistribution, average_symbol_power
from .ofdm import OfdmConfig, TimeFrame

__all__ = [
    "SystemParams",
    "ClipStats",
    "q_function",
    "signal_variance",
    "clip_signal",
    "attenuation_factor",
    "clipping_noise_variance",
    "clip_stats",
]

_DERIVED_TOL = 1e-12


@dataclass(frozen=True)
class SystemParams:
    """Physical link constants.

    Units: currents in mA, bandwidth in Hz, noise PSD in mA^2/Hz,
    eta in W/A, gamma in A/W; h_gain is dimensionless. ``rho`` (the
    end-to-end electro-optical gain eta*gamma*h) and ``noise_var``
    (receiver noise variance B*N0, mA^2) are derived on construction.
    """

    i_min: float
    i_max: float
    i_dc: float
    eta: float
    gamma: float
    h_gain: float
    bandwidth: float
    n0: float
    rho: float = None  # type: ignore[assignment]
    noise_var: float = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if not self.i_min < self.i_dc < self.i_max:
            raise ValueError(
                f"need i_min < i_dc < i_max, got {self.i_min}, {self.i_dc}, {self.i_max}"
            )
        for name in ("eta", "gamma", "h_gain", "bandwidth", "n0"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        rho = self.eta * self.gamma * self.h_gain
        noise_var = self.bandwidth * self.n0
        for name, value, expected in (("rho", self.rho, rho), ("noise_var", self.noise_var, noise_var)):
            if value is None:
                object.__setattr__(self, name, expected)
            elif abs(value - expected) > _DERIVED_TOL * max(1.0, abs(expected)):
                raise ValueError(f"{name}={value} inconsistent with its defining product {expected}")


@dataclass(frozen=True)
class ClipStats:
    """Bussgang quantities of the clipped channel for one signal variance."""

    sigma_x: float
    alpha: float
    beta: float
    r_factor: float
    clip_noise_var: float

    def __post_init__(self) -> None:
        if not self.alpha < self.beta:
            raise ValueError(f"need alpha < beta, got {self.alpha}, {self.beta}")
        if not 0.0 < self.r_factor <= 1.0:
            raise ValueError(f"attenuation factor outside (0, 1]: {self.r_factor}")
        if self.clip_noise_var < 0.0:
            raise ValueError(f"negative clipping-noise variance {self.clip_noise_var}")


def q_function(x):
    """Upper-tail probability of the standard normal, via erfc."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / np.sqrt(2.0))


def _normal_pdf(x):
    # Standard normal density. The clipping-noise formula is stated with a
    # density missing its 1/sqrt(2*pi); the Monte Carlo closure tests pin
    # the normalized version used here.
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * x * x) / np.sqrt(2.0 * np.pi)


def signal_variance(c: Constellation, p: SymbolDistribution, cfg: OfdmConfig) -> float:
    """Electrical signal variance (1 - 2/N) * sum_m p_m |X_m|^2."""
    return cfg.subcarrier_power_factor * average_symbol_power(c, p)


def clip_signal(frame: TimeFrame, sp: SystemParams) -> TimeFrame:
    """Clamp a zero-mean frame to the dynamic range shifted by -I_DC."""
    samples = frame.samples if isinstance(frame, TimeFrame) else np.asarray(frame, dtype=float)
    lo = sp.i_min - sp.i_dc
    hi = sp.i_max - sp.i_dc
    return TimeFrame(np.clip(samples, lo, hi))


def attenuation_factor(alpha: float, beta: float) -> float:
    """Bussgang gain of the clamp on Gaussian input: Q(alpha) - Q(beta)."""
    if not alpha < beta:
        raise ValueError(f"need alpha < beta, got {alpha}, {beta}")
    return float(q_function(alpha) - q_function(beta))


def clipping_noise_variance(sigma_x: float, alpha: float, beta: float) -> float:
    """Variance of the Bussgang distortion term of the clamp.

    For unit input variance this equals E[c^2] - E[c]^2 - R^2 where
    c = clamp(u, alpha, beta) and u is standard normal; the prefactor
    sigma_x^2 restores physical units.
    """
    if sigma_x <= 0:
        raise ValueError(f"sigma_x must be positive, got {sigma_x}")
    if not alpha < beta:
        raise ValueError(f"need alpha < beta, got {alpha}, {beta}")
    r = attenuation_factor(alpha, beta)
    q_a, q_b = q_function(alpha), q_function(beta)
    phi_a, phi_b = _normal_pdf(alpha), _normal_pdf(beta)
    second_moment = r + alpha * phi_a - beta * phi_b + alpha**2 * (1.0 - q_a) + beta**2 * q_b
    mean = phi_a - phi_b + (1.0 - q_a) * alpha + q_b * beta
    var = sigma_x**2 * (second_moment - mean**2 - r**2)
    # the expression is analytically >= 0; guard rounding in the no-clip limit
    return float(max(var, 0.0))


def clip_stats(
    c: Constellation, p: SymbolDistribution, cfg: OfdmConfig, sp: SystemParams
) -> ClipStats:
    """Derive sigma_x, alpha, beta, R and the clipping-noise variance for ``p``."""
    var_x = signal_variance(c, p, cfg)
    if var_x <= 0.0:
        # degenerate distribution on a zero-energy symbol: nothing to clip
        return ClipStats(
            sigma_x=0.0, alpha=-np.inf, beta=np.inf, r_factor=1.0, clip_noise_var=0.0
        )
    sigma_x = float(np.sqrt(var_x))
    alpha = (sp.i_min - sp.i_dc) / sigma_x
    beta = (sp.i_max - sp.i_dc) / sigma_x
    return ClipStats(
        sigma_x=sigma_x,
        alpha=alpha,
        beta=beta,
        r_factor=attenuation_factor(alpha, beta),
        clip_noise_var=clipping_noise_variance(sigma_x, alpha, beta),
    )
