"""Placement of radar, RIS panels and target in a shared Cartesian frame.

Panels are flat rectangular grids described by a :class:`PanelFrame`: a corner
``origin`` and two in-plane unit axes. Cell ``(j, k)`` (1-based) sits at
``origin + (j - 1/2) rx u + (k - 1/2) ry v``. Angles seen from a cell are taken
in the panel's local frame, ``theta`` from the outward normal ``u x v`` and
``phi`` in the panel plane measured from ``u``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ORTHO_TOL = 1e-9


class DegenerateGeometryError(ValueError):
    """Two nodes that must be distinct coincide (zero-length link)."""


def as_vec3(value, name="vector") -> np.ndarray:
    """Coerce ``value`` to a finite float array of shape (3,)."""
    arr = np.asarray(value, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"{name} must have 3 components, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite, got {arr.tolist()}")
    return arr


def unit(value, name="vector") -> np.ndarray:
    arr = as_vec3(value, name)
    norm = np.linalg.norm(arr)
    if norm == 0.0:
        raise ValueError(f"{name} must be non-zero")
    return arr / norm


@dataclass(frozen=True, eq=False)
class PanelFrame:
    """Local coordinate system of a planar panel.

    Parameters
    ----------
    origin : array_like
        Panel corner, the point cell ``(1, 1)`` is offset from.
    u_axis, v_axis : array_like
        Orthonormal in-plane axes along rows (``j``) and columns (``k``).
    """

    origin: np.ndarray
    u_axis: np.ndarray
    v_axis: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "origin", as_vec3(self.origin, "origin"))
        u = as_vec3(self.u_axis, "u_axis")
        v = as_vec3(self.v_axis, "v_axis")
        if abs(np.linalg.norm(u) - 1.0) > ORTHO_TOL or abs(np.linalg.norm(v) - 1.0) > ORTHO_TOL:
            raise ValueError("u_axis and v_axis must be unit vectors")
        if abs(float(u @ v)) > ORTHO_TOL:
            raise ValueError("u_axis and v_axis must be orthogonal")
        object.__setattr__(self, "u_axis", u)
        object.__setattr__(self, "v_axis", v)

    @property
    def normal(self) -> np.ndarray:
        return np.cross(self.u_axis, self.v_axis)

    @classmethod
    def facing(cls, center, normal, width, height, up=(0.0, 1.0, 0.0)) -> "PanelFrame":
        """Frame for a ``width`` x ``height`` panel centred on ``center``.

        ``v_axis`` is ``up`` projected onto the panel plane (world x is used when
        ``up`` is parallel to ``normal``) and ``u_axis = v_axis x normal``.
        """
        n = unit(normal, "normal")
        hint = as_vec3(up, "up")
        v = hint - (hint @ n) * n
        if np.linalg.norm(v) < 1e-12:
            hint = np.array([1.0, 0.0, 0.0])
            v = hint - (hint @ n) * n
        v = v / np.linalg.norm(v)
        u = np.cross(v, n)
        c = as_vec3(center, "center")
        origin = c - 0.5 * width * u - 0.5 * height * v
        return cls(origin, u, v)

    def translated(self, offset) -> "PanelFrame":
        return PanelFrame(self.origin + as_vec3(offset, "offset"), self.u_axis, self.v_axis)


@dataclass(frozen=True)
class ElementGeometry:
    """Distance and local angles from a cell (or cells) to a point.

    Fields are floats for a single cell, arrays for a grid.
    """

    distance: np.ndarray | float
    theta: np.ndarray | float
    phi: np.ndarray | float


@dataclass(frozen=True)
class CenterGeometry:
    """Centre-to-centre distances and angles of the link chain.

    ``theta_r, phi_r`` locate the radar from RIS-1's centre; ``theta_t, phi_t``
    the target from the last panel's centre. ``theta_ris, phi_ris`` locate
    RIS-1 from RIS-2's centre (the incoming direction at RIS-2) and
    ``theta_ris_out, phi_ris_out`` locate RIS-2 from RIS-1's centre. For a
    single panel, ``r_ris`` is ``None`` and ``r2`` is measured from RIS-1.
    """

    r1: float
    r2: float
    r_ris: float | None
    theta_r: float
    phi_r: float
    theta_t: float
    phi_t: float
    theta_ris: float | None = None
    phi_ris: float | None = None
    theta_ris_out: float | None = None
    phi_ris_out: float | None = None


def cell_center(frame: PanelFrame, j: int, k: int, rx: float, ry: float) -> np.ndarray:
    """World position of cell ``(j, k)``, 1-based."""
    if j < 1 or k < 1:
        raise ValueError("cell indices are 1-based")
    if rx <= 0 or ry <= 0:
        raise ValueError("cell dimensions must be positive")
    return frame.origin + (j - 0.5) * rx * frame.u_axis + (k - 0.5) * ry * frame.v_axis


def cell_centers(frame: PanelFrame, rows: int, cols: int, rx: float, ry: float) -> np.ndarray:
    """All cell centres as a ``(rows, cols, 3)`` array, row-major."""
    a = (np.arange(rows) + 0.5) * rx
    b = (np.arange(cols) + 0.5) * ry
    return (
        frame.origin
        + a[:, None, None] * frame.u_axis
        + b[None, :, None] * frame.v_axis
    )


def element_geometry(from_cell, to_point, frame: PanelFrame) -> ElementGeometry:
    """Distance and panel-local ``(theta, phi)`` from cell(s) to a point.

    ``from_cell`` may be a single point ``(3,)`` or any array of points
    ``(..., 3)``; the result broadcasts accordingly.
    """
    d = np.asarray(to_point, dtype=float) - np.asarray(from_cell, dtype=float)
    dist = np.linalg.norm(d, axis=-1)
    if np.any(dist == 0.0):
        raise DegenerateGeometryError("cell and point coincide")
    along_n = d @ frame.normal
    along_u = d @ frame.u_axis
    along_v = d @ frame.v_axis
    theta = np.arctan2(np.hypot(along_u, along_v), along_n)
    phi = np.arctan2(along_v, along_u)
    phi = np.where(phi == -np.pi, np.pi, phi)
    if np.ndim(dist) == 0:
        return ElementGeometry(float(dist), float(theta), float(phi))
    return ElementGeometry(dist, theta, phi)


def far_field_distance(n_cells_max: int, spacing: float, wavelength: float) -> float:
    """Fraunhofer distance ``2 D^2 / wavelength`` with ``D`` the longest panel side."""
    if n_cells_max < 1 or spacing <= 0 or wavelength <= 0:
        raise ValueError("n_cells_max >= 1, spacing > 0 and wavelength > 0 required")
    aperture = n_cells_max * spacing
    return 2.0 * aperture**2 / wavelength


def panel_center(frame: PanelFrame, rows: int, cols: int, rx: float, ry: float) -> np.ndarray:
    return frame.origin + 0.5 * rows * rx * frame.u_axis + 0.5 * cols * ry * frame.v_axis


def center_geometry(radar_position, panels, target_position) -> CenterGeometry:
    """Centre geometry for one or two panels.

    ``panels`` is a sequence of ``(frame, center)`` pairs, RIS-1 first.
    """
    if len(panels) not in (1, 2):
        raise ValueError("one or two panels required")
    radar = as_vec3(radar_position, "radar position")
    target = as_vec3(target_position, "target position")
    f1, c1 = panels[0]
    to_radar = element_geometry(c1, radar, f1)
    if len(panels) == 1:
        to_target = element_geometry(c1, target, f1)
        return CenterGeometry(
            r1=to_radar.distance, r2=to_target.distance, r_ris=None,
            theta_r=to_radar.theta, phi_r=to_radar.phi,
            theta_t=to_target.theta, phi_t=to_target.phi,
        )
    f2, c2 = panels[1]
    out1 = element_geometry(c1, c2, f1)
    in2 = element_geometry(c2, c1, f2)
    to_target = element_geometry(c2, target, f2)
    return CenterGeometry(
        r1=to_radar.distance, r2=to_target.distance, r_ris=out1.distance,
        theta_r=to_radar.theta, phi_r=to_radar.phi,
        theta_t=to_target.theta, phi_t=to_target.phi,
        theta_ris=in2.theta, phi_ris=in2.phi,
        theta_ris_out=out1.theta, phi_ris_out=out1.phi,
    )
