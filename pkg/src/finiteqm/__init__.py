"""Quantum mechanics on a finite lattice of d points.

Operators for end-pointed and periodic lattices, exact checks of their
algebra, closed-form and numerical spectra, and continuum-limit studies.
"""

__version__ = "0.1.0"

from .algebra import (
    VerificationReport,
    projection,
    run_suite,
    verify_pauli,
    verify_projection_lattice,
    verify_translation_algebra,
    verify_weyl_pair,
)
from .continuum import (
    ConvergenceReport,
    continuum_energy,
    convergence_study,
    deformed_momentum_expansion_check,
    wavefunction_limit_compare,
)
from .errors import (
    BoundaryError,
    ConfigError,
    EigensolverError,
    QuantumNumberError,
    SpectrumMismatchError,
)
from .lattice import (
    BASIS_CONVENTION,
    Boundary,
    Direction,
    LatticeConfig,
    Operator,
    Structure,
    build_clock,
    build_deformed_momentum,
    build_hamiltonian,
    build_parity,
    build_position,
    build_shift_nonperiodic,
    build_shift_periodic,
    momentum_basis,
)
from .spectra import (
    EigenSystem,
    Parity,
    WaveFunction,
    analytic_spectrum,
    analytic_spectrum_nonperiodic,
    analytic_spectrum_periodic,
    match_spectra,
    numeric_spectrum,
    verify_recurrence,
    wavefunction,
)
