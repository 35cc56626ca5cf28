"""Received power, SNR and path loss of monostatic radar relayed by one or two RISs."""

from .geometry import (
    CenterGeometry,
    DegenerateGeometryError,
    ElementGeometry,
    PanelFrame,
    cell_center,
    center_geometry,
    element_geometry,
    far_field_distance,
)
from .layout import paper_layout, single_from_dual
from .linkbudget import (
    DEFAULT_WAVELENGTH,
    CascadeResult,
    NoiseModel,
    RadarNode,
    Scenario,
    Target,
    closed_form_max_dual,
    closed_form_max_single,
    conjugate_phased,
    dual_ris_received_power,
    intermediate_cascade,
    path_loss_db,
    received_power,
    single_ris_received_power,
    snr,
    w_sum_ris1,
    w_sum_ris2,
)
from .patterns import PatternModel, evaluate, q_from_hpbw
from .ris import PhasingMode, RisPanel, reflection_coefficient, synthesize_conjugate_phases
from .sweep import SweepRow, SweepSpec, emit_csv, emit_svg_plot, run_sweep, table2_report

__version__ = "0.1.0"
