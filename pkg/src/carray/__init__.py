"""Phase-mode and OAM modelling of uniform circular antenna arrays.

Typical flow: build a geometry, form an excitation from a mode spectrum,
then evaluate far-field directivity or the near field above the ring.
"""

__version__ = "0.1.0"

from .elements import ElementPatternModel, element_gain
from .errors import (
    CArrayError,
    DegeneratePatternError,
    InvalidArgumentError,
    LowMagnitudeError,
    ModeOutOfRangeError,
    NumericalError,
    PreconditionError,
    RangeError,
    SingularityError,
    SingularSystemError,
    UnknownPresetError,
)
from .farfield import (
    DirectivityReport,
    RadiationPattern,
    bessel_mode_reference,
    default_grid,
    directivity,
    find_beam_peaks,
    sample_pattern,
    total_field,
)
from .geometry import (
    ArrayGeometry,
    Direction,
    Frequency,
    build_uniform_circular_array,
    default_geometry,
    wavelength,
)
from .modes import (
    ExcitationVector,
    ModeSpectrum,
    mix_modes,
    mode_decompose,
    oam_excitation,
    phase_mode_excitation,
    steer,
)
from .nearfield import FieldGrid, efield_on_plane, time_snapshots, winding_number
from .synthesis import SynthesisProblem, preset, synthesize
