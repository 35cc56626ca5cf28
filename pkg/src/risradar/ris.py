"""RIS panel state and phase-profile synthesis."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .geometry import PanelFrame, cell_centers, panel_center
from .patterns import PatternModel

TWO_PI = 2.0 * math.pi


class PhasingMode(str, enum.Enum):
    UNIFORM_ZERO = "uniform_zero"
    ROUND_TRIP_CONJUGATE = "round_trip_conjugate"
    EXPLICIT = "explicit"


class Hop(str, enum.Enum):
    FIRST = "first"
    SECOND = "second"


def _grid(value, rows, cols, name):
    arr = np.broadcast_to(np.asarray(value, dtype=float), (rows, cols)).copy()
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RisPanel:
    """A rectangular grid of reflecting unit cells.

    Cells are contiguous, so ``rx``/``ry`` are both the cell size and the
    inter-cell spacing. ``phase_tx`` applies on the outbound pass and
    ``phase_rx`` on the return pass; both are wrapped into ``[0, 2 pi)``.
    Scalars for ``eta`` and the phases are broadcast to the full grid.
    """

    frame: PanelFrame
    rows: int
    cols: int
    rx: float
    ry: float
    pattern: PatternModel = field(default_factory=PatternModel)
    eta: np.ndarray = 1.0
    phase_tx: np.ndarray = 0.0
    phase_rx: np.ndarray = 0.0

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("panel needs at least one row and one column")
        if self.rx <= 0 or self.ry <= 0:
            raise ValueError("cell dimensions must be positive")
        eta = _grid(self.eta, self.rows, self.cols, "eta")
        if np.any(eta < 0) or np.any(eta > 1):
            raise ValueError("eta must lie in [0, 1]")
        object.__setattr__(self, "eta", eta)
        for name in ("phase_tx", "phase_rx"):
            ph = np.mod(_grid(getattr(self, name), self.rows, self.cols, name), TWO_PI)
            ph.setflags(write=False)
            object.__setattr__(self, name, ph)

    @classmethod
    def centered(cls, center, normal, rows, cols, spacing, pattern=None, eta=1.0,
                 up=(0.0, 1.0, 0.0)) -> "RisPanel":
        frame = PanelFrame.facing(center, normal, rows * spacing, cols * spacing, up=up)
        return cls(frame, rows, cols, spacing, spacing,
                   pattern if pattern is not None else PatternModel(), eta)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def cell_area(self) -> float:
        return self.rx * self.ry

    @property
    def center(self) -> np.ndarray:
        return panel_center(self.frame, self.rows, self.cols, self.rx, self.ry)

    @property
    def cell_centers(self) -> np.ndarray:
        return cell_centers(self.frame, self.rows, self.cols, self.rx, self.ry)

    @property
    def reference_cell(self) -> tuple[int, int]:
        """1-based index of the centre cell (lower-middle for even sizes)."""
        return (self.rows + 1) // 2, (self.cols + 1) // 2

    def check_spacing(self, wavelength: float) -> bool:
        """Warn when cells fall outside the ``[lambda/10, lambda/2]`` range."""
        lo, hi = wavelength / 10.0, wavelength / 2.0
        ok = all(lo * (1 - 1e-9) <= d <= hi * (1 + 1e-9) for d in (self.rx, self.ry))
        if not ok:
            warnings.warn(
                f"cell size ({self.rx:.4g}, {self.ry:.4g}) m outside "
                f"[{lo:.4g}, {hi:.4g}] m for wavelength {wavelength:.4g} m",
                stacklevel=2,
            )
        return ok

    def with_phases(self, phase_tx, phase_rx=None) -> "RisPanel":
        return replace(self, phase_tx=phase_tx,
                       phase_rx=phase_tx if phase_rx is None else phase_rx)

    def with_eta(self, eta) -> "RisPanel":
        return replace(self, eta=eta)

    def resized(self, rows: int, cols: int) -> "RisPanel":
        """Same centre, orientation and cell size; uniform state from the mean."""
        c = self.center
        origin = c - 0.5 * rows * self.rx * self.frame.u_axis - 0.5 * cols * self.ry * self.frame.v_axis
        frame = PanelFrame(origin, self.frame.u_axis, self.frame.v_axis)
        return RisPanel(frame, rows, cols, self.rx, self.ry, self.pattern,
                        float(np.mean(self.eta)), 0.0, 0.0)

    def translated(self, offset) -> "RisPanel":
        return replace(self, frame=self.frame.translated(offset))


def reflection_coefficient(panel: RisPanel, j: int, k: int, hop: Hop | str = Hop.FIRST) -> complex:
    """``eta * exp(i phi)`` of cell ``(j, k)`` (1-based) for the given pass."""
    if not (1 <= j <= panel.rows and 1 <= k <= panel.cols):
        raise IndexError(f"cell ({j}, {k}) outside {panel.rows}x{panel.cols} panel")
    grid = panel.phase_tx if Hop(hop) is Hop.FIRST else panel.phase_rx
    eta = float(panel.eta[j - 1, k - 1])
    return complex(eta * math.cos(grid[j - 1, k - 1]), eta * math.sin(grid[j - 1, k - 1]))


def synthesize_conjugate_phases(panel: RisPanel, inbound, outbound, wavelength: float,
                                outbound_passes: float = 1.0) -> RisPanel:
    """Phase both passes so every cell's round-trip term is real and positive.

    A cell's round-trip propagation phase is
    ``2 pi (2 r_in + outbound_passes * r_out) / wavelength``; half of it is
    assigned to each pass. ``outbound_passes=1`` is the panel-to-panel hop of a
    dual chain (the other half belongs to the partner panel's term), ``2`` is
    a target leg walked out and back.
    """
    inbound = np.asarray(inbound, dtype=float)
    outbound = np.asarray(outbound, dtype=float)
    if inbound.shape != panel.shape or outbound.shape != panel.shape:
        raise ValueError(
            f"distance grids {inbound.shape}, {outbound.shape} do not match panel {panel.shape}"
        )
    if wavelength <= 0:
        raise ValueError("wavelength must be positive")
    # reduce in cycles first to keep the wrap exact for long links
    cycles = np.mod(inbound / wavelength, 1.0) + np.mod(0.5 * outbound_passes * outbound / wavelength, 1.0)
    phase = np.mod(TWO_PI * cycles, TWO_PI)
    return panel.with_phases(phase, phase)


def quantize_phases(panel: RisPanel, bits: int) -> RisPanel:
    """Round both phase grids to the nearest of ``2**bits`` uniform levels."""
    if bits < 1:
        raise ValueError("bits must be >= 1")
    step = TWO_PI / (1 << bits)

    def q(grid):
        return np.mod(np.round(grid / step) * step, TWO_PI)

    return panel.with_phases(q(panel.phase_tx), q(panel.phase_rx))
