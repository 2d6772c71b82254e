"""DCO-OFDM frame synthesis: Hermitian loading, IFFT/FFT, cyclic prefix, PAPR."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "OfdmConfig",
    "FrequencyFrame",
    "TimeFrame",
    "hermitian_load",
    "synthesize",
    "analyze",
    "add_cp",
    "remove_cp",
    "papr",
    "papr_db",
]

# Gaussian (CLT) modeling of the time samples is only trusted from this size up.
CLT_MIN_SUBCARRIERS = 64

_HERMITIAN_TOL = 1e-12
_REAL_RESIDUE_TOL = 1e-9


@dataclass(frozen=True)
class OfdmConfig:
    """Subcarrier count and cyclic-prefix length of one DCO-OFDM symbol."""

    n_subcarriers: int
    cp_length: int = 0

    def __post_init__(self) -> None:
        n = self.n_subcarriers
        if n < 4 or n % 2:
            raise ValueError(f"subcarrier count must be even and >= 4, got {n}")
        if not 0 <= self.cp_length < n:
            raise ValueError(f"cp_length must be in [0, {n}), got {self.cp_length}")
        if n < CLT_MIN_SUBCARRIERS:
            warnings.warn(
                f"N={n} subcarriers is below {CLT_MIN_SUBCARRIERS}; the Gaussian "
                "model of the time-domain amplitude is unreliable at this size",
                stacklevel=2,
            )

    @property
    def n_data_symbols(self) -> int:
        """Number of independent data subcarriers (N/2 - 1)."""
        return self.n_subcarriers // 2 - 1

    @property
    def subcarrier_power_factor(self) -> float:
        """Fraction of subcarriers carrying signal power: 1 - 2/N."""
        return 1.0 - 2.0 / self.n_subcarriers


@dataclass(frozen=True)
class FrequencyFrame:
    """Hermitian-symmetric subcarrier vector (bins 0 and N/2 are null)."""

    bins: np.ndarray

    def __post_init__(self) -> None:
        b = np.asarray(self.bins, dtype=complex)
        object.__setattr__(self, "bins", b)
        n = len(b)
        if n < 4 or n % 2:
            raise ValueError(f"frame length must be even and >= 4, got {n}")
        if b[0] != 0 or b[n // 2] != 0:
            raise ValueError("bins 0 and N/2 must be zero")
        mirror = np.conj(b[-1 : n // 2 : -1])
        if not np.allclose(b[1 : n // 2], mirror, rtol=0, atol=_HERMITIAN_TOL):
            raise ValueError("upper half is not the conjugate mirror of the lower half")
        self.bins.setflags(write=False)

    def __len__(self) -> int:
        return len(self.bins)


@dataclass(frozen=True)
class TimeFrame:
    """Real time-domain samples of one OFDM symbol (no cyclic prefix)."""

    samples: np.ndarray

    def __post_init__(self) -> None:
        s = np.asarray(self.samples)
        if np.iscomplexobj(s):
            if np.max(np.abs(s.imag), initial=0.0) >= _REAL_RESIDUE_TOL:
                raise ValueError("synthesized frame has non-negligible imaginary residue")
            s = s.real
        object.__setattr__(self, "samples", np.asarray(s, dtype=float))
        self.samples.setflags(write=False)

    def __len__(self) -> int:
        return len(self.samples)


def hermitian_load(data: np.ndarray, cfg: OfdmConfig) -> FrequencyFrame:
    """Place N/2-1 data symbols on the lower half and mirror-conjugate the rest."""
    data = np.asarray(data, dtype=complex)
    n = cfg.n_subcarriers
    if len(data) != cfg.n_data_symbols:
        raise ValueError(f"expected {cfg.n_data_symbols} data symbols for N={n}, got {len(data)}")
    bins = np.zeros(n, dtype=complex)
    bins[1 : n // 2] = data
    bins[n // 2 + 1 :] = np.conj(data[::-1])
    return FrequencyFrame(bins)


def synthesize(frame: FrequencyFrame) -> TimeFrame:
    """Unitary IFFT of a Hermitian frame; the result is real by construction."""
    x = np.fft.ifft(frame.bins, norm="ortho")
    return TimeFrame(x)


def analyze(samples: np.ndarray) -> np.ndarray:
    """Unitary FFT, the exact inverse of :func:`synthesize`."""
    samples = np.asarray(samples)
    if isinstance(samples, TimeFrame):  # pragma: no cover - convenience
        samples = samples.samples
    return np.fft.fft(samples, norm="ortho")


def add_cp(frame: TimeFrame, cfg: OfdmConfig) -> np.ndarray:
    """Prepend the last cp_length samples."""
    s = frame.samples
    if len(s) != cfg.n_subcarriers:
        raise ValueError(f"frame length {len(s)} != N={cfg.n_subcarriers}")
    if cfg.cp_length == 0:
        return s.copy()
    return np.concatenate([s[-cfg.cp_length :], s])


def remove_cp(samples: np.ndarray, cfg: OfdmConfig) -> TimeFrame:
    """Strip the cyclic prefix; inverse of :func:`add_cp`."""
    samples = np.asarray(samples, dtype=float)
    if len(samples) != cfg.n_subcarriers + cfg.cp_length:
        raise ValueError(
            f"expected {cfg.n_subcarriers + cfg.cp_length} samples, got {len(samples)}"
        )
    return TimeFrame(samples[cfg.cp_length :])


def papr(frame: TimeFrame) -> float:
    """Peak sample power over the empirical mean power of the frame (linear)."""
    s = frame.samples if isinstance(frame, TimeFrame) else np.asarray(frame, dtype=float)
    power = s * s
    mean = power.mean()
    if mean == 0.0:
        raise ValueError("PAPR is undefined for an all-zero frame")
    return float(power.max() / mean)


def papr_db(frame: TimeFrame) -> float:
    """PAPR in dB."""
    return float(10.0 * np.log10(papr(frame)))
