"""Monte Carlo laboratory for classical zero-point-field analogues.

Samples realizations of the random-phase (Boyer) and complex-Gaussian
(modified) classical zero-point fields on periodic-box mode lattices,
provides the analytic single-mode / total-field / oscillator target
distributions, and drives a radiation-damped classical oscillator with
either field to compare its coordinate statistics against the quantum
ground state.
"""

from .constants import PhysicalConstants
from .fields import (
    FieldKind,
    FieldRealization,
    SampleSet,
    draw_realization,
    eval_field,
    mode_amplitude,
    mode_intensity,
    sample_field_batch,
    sample_mode_batch,
)
from .lattice import (
    EmptyGridError,
    Mode,
    ModeGrid,
    angular_polarization_integral,
    angular_polarization_mc,
    build_grid,
    continuum_sum_check,
    grid_from_kvectors,
    mode_sigma,
    polarization_basis,
)
from .dists import (
    Arcsine,
    BesselProductGF,
    ClassicalOscillator,
    GaussianGF,
    GaussianMode,
    GaussianTotal3D,
    InsufficientRangeError,
    QuantumOscillator,
    arcsine_cdf,
    boyer_generating,
    classical_oscillator_pdf,
    gaussian_generating,
    gaussian_mode_pdf,
    hermite_function,
    invert_characteristic,
    lattice_gaussian_generating,
    mode_energy,
    quantum_oscillator_pdf,
    total_field_sigma,
    zero_point_energy_density,
)
from .oscillator import (
    ConvergenceError,
    OscillatorParams,
    OscillatorProductGF,
    bohr_radius_sq,
    coordinate_axis_variance,
    coordinate_ensemble,
    coordinate_sample,
    oscillator_generating,
    oscillator_pdf,
    predicted_variance,
    resonance_integral,
    resonance_shell_grid,
    transfer,
)
from .stats import (
    KSResult,
    MomentReport,
    empirical_generating,
    histogram,
    ks_critical,
    ks_test,
    moments,
)

__version__ = "0.1.0"
