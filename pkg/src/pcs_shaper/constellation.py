"""QAM/PAM constellations and probability distributions over their symbols."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ConstellationKind",
    "Constellation",
    "SymbolDistribution",
    "build_constellation",
    "uniform_distribution",
    "random_distribution",
    "average_symbol_power",
    "scale_to_power",
]

_SUPPORTED_QAM = (4, 8, 16, 32, 64)

PROB_SUM_TOL = 1e-9


class ConstellationKind(enum.Enum):
    QAM = "qam"
    PAM = "pam"


@dataclass(frozen=True)
class Constellation:
    """A set of complex symbol amplitudes with their energies.

    ``symbol_energies`` holds |X_m|^2 per point; it is the coefficient
    vector of the average-power constraint in the shaping problem.
    """

    points: np.ndarray
    order: int
    kind: ConstellationKind
    symbol_energies: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=complex)
        object.__setattr__(self, "points", pts)
        if self.symbol_energies is None:
            object.__setattr__(self, "symbol_energies", np.abs(pts) ** 2)
        else:
            object.__setattr__(
                self, "symbol_energies", np.asarray(self.symbol_energies, dtype=float)
            )
        if len(pts) != self.order or len(self.symbol_energies) != self.order:
            raise ValueError(
                f"constellation size mismatch: {len(pts)} points, "
                f"{len(self.symbol_energies)} energies, order {self.order}"
            )
        if self.order < 2 or self.order & (self.order - 1):
            raise ValueError(f"modulation order must be a power of two >= 2, got {self.order}")
        if not np.allclose(self.symbol_energies, np.abs(pts) ** 2, rtol=0, atol=1e-12):
            raise ValueError("symbol_energies inconsistent with |points|^2")
        self.points.setflags(write=False)
        self.symbol_energies.setflags(write=False)

    @property
    def is_real(self) -> bool:
        """True when every point lies on the real axis (PAM embedding)."""
        return bool(np.all(self.points.imag == 0.0))

    def average_energy_uniform(self) -> float:
        """Mean symbol energy under the uniform distribution."""
        return float(np.mean(self.symbol_energies))


@dataclass(frozen=True)
class SymbolDistribution:
    """Occurrence probabilities of the constellation symbols."""

    probs: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", p)
        if p.ndim != 1 or len(p) < 2:
            raise ValueError("probability vector must be 1-D with at least 2 entries")
        if np.any(p < -1e-12) or np.any(p > 1 + 1e-12):
            raise ValueError(f"probabilities outside [0, 1]: min={p.min()}, max={p.max()}")
        total = float(p.sum())
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1 within {PROB_SUM_TOL}")
        self.probs.setflags(write=False)

    def __len__(self) -> int:
        return len(self.probs)


def _square_qam_points(m: int) -> np.ndarray:
    side = int(round(np.sqrt(m)))
    levels = np.arange(-(side - 1), side, 2, dtype=float)
    re, im = np.meshgrid(levels, levels)
    return (re + 1j * im).ravel()


def _cross_qam_points(m: int) -> np.ndarray:
    # Non-square orders on the odd-integer grid: 8 -> 4x2 rectangle,
    # 32 -> 6x6 grid with the four corners removed.
    if m == 8:
        re, im = np.meshgrid(np.arange(-3.0, 4.0, 2.0), np.arange(-1.0, 2.0, 2.0))
        return (re + 1j * im).ravel()
    if m == 32:
        levels = np.arange(-5.0, 6.0, 2.0)
        re, im = np.meshgrid(levels, levels)
        pts = (re + 1j * im).ravel()
        keep = ~((np.abs(pts.real) == 5.0) & (np.abs(pts.imag) == 5.0))
        return pts[keep]
    raise ValueError(f"unsupported cross-QAM order {m}")


def _pam_points(m: int) -> np.ndarray:
    return np.arange(-(m - 1), m, 2, dtype=float).astype(complex)


def build_constellation(kind: ConstellationKind, m: int, unit_power: bool = True) -> Constellation:
    """Construct an M-ary QAM or PAM constellation.

    QAM orders 4/16/64 use the square odd-integer grid; 8 and 32 use the
    standard non-square (cross-family) layouts. PAM points are embedded on
    the real axis. With ``unit_power`` the points are scaled so the
    uniform-distribution average energy is exactly 1.
    """
    if isinstance(kind, str):
        kind = ConstellationKind(kind.lower())
    if m < 2 or m & (m - 1):
        raise ValueError(f"modulation order must be a power of two >= 2, got {m}")
    if kind is ConstellationKind.QAM:
        if m not in _SUPPORTED_QAM:
            raise ValueError(f"unsupported QAM order {m}; supported: {_SUPPORTED_QAM}")
        side = int(round(np.sqrt(m)))
        pts = _square_qam_points(m) if side * side == m else _cross_qam_points(m)
    elif kind is ConstellationKind.PAM:
        pts = _pam_points(m)
    else:  # pragma: no cover - enum exhausts kinds
        raise ValueError(f"unknown constellation kind {kind!r}")
    if unit_power:
        pts = pts / np.sqrt(np.mean(np.abs(pts) ** 2))
    return Constellation(points=pts, order=m, kind=kind)


def scale_to_power(c: Constellation, mean_power: float) -> Constellation:
    """Rescale amplitudes so the uniform-distribution average energy is ``mean_power``."""
    if mean_power <= 0:
        raise ValueError(f"mean power must be positive, got {mean_power}")
    factor = np.sqrt(mean_power / c.average_energy_uniform())
    return Constellation(points=c.points * factor, order=c.order, kind=c.kind)


def uniform_distribution(m: int) -> SymbolDistribution:
    """Uniform distribution 1/M over M symbols."""
    if m < 2:
        raise ValueError(f"need at least 2 symbols, got {m}")
    return SymbolDistribution(np.full(m, 1.0 / m))


def random_distribution(m: int, rng: np.random.Generator) -> SymbolDistribution:
    """Draw a distribution uniformly from the probability simplex (flat Dirichlet)."""
    if m < 2:
        raise ValueError(f"need at least 2 symbols, got {m}")
    p = rng.dirichlet(np.ones(m))
    # dirichlet can round a coordinate to a hair outside [0, 1]
    p = np.clip(p, 0.0, 1.0)
    return SymbolDistribution(p / p.sum())


def average_symbol_power(c: Constellation, p: SymbolDistribution) -> float:
    """Average symbol energy sum_m p_m |X_m|^2 (before the OFDM subcarrier factor)."""
    probs = p.probs if isinstance(p, SymbolDistribution) else np.asarray(p, dtype=float)
    if len(probs) != c.order:
        raise ValueError(f"distribution has {len(probs)} entries for order {c.order}")
    return float(c.symbol_energies @ probs)
