"""Operators on a lattice of ``d`` points as explicit complex matrices.

All matrices are written in the position basis ``|0>, ..., |d-1>`` with
``entries[m, n] = <m| op |n>``.  Centered site labels used for the periodic
parity analysis are a coordinate view only; storage order never changes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundaryError, ConfigError, QuantumNumberError


class Boundary(str, enum.Enum):
    NONPERIODIC = "nonperiodic"
    PERIODIC = "periodic"


class Structure(str, enum.Enum):
    DENSE = "dense"
    TRIDIAGONAL = "tridiagonal"
    CIRCULANT = "circulant"
    DIAGONAL = "diagonal"


class Direction(str, enum.Enum):
    RIGHT = "right"
    LEFT = "left"


BASIS_CONVENTION = {
    "ordering": "position basis n = 0, ..., d-1 ascending",
    "matrix_element": "entries[m][n] = <m| op |n>",
    "right_shift_nonperiodic": "<m|u+|n> = 1 iff m = n+1 and n <= d-2",
    "shift_periodic": "<m|U|n> = 1 iff m = (n+1) mod d",
}


@dataclass(frozen=True)
class LatticeConfig:
    """Structural and physical parameters of a lattice.

    ``a`` is the lattice spacing, ``M`` the particle mass and ``hbar`` the
    action unit.  The box length follows the boundary kind: ``a*(d-1)`` for
    an end-pointed lattice and ``a*d`` for a ring.
    """

    d: int
    a: float = 1.0
    M: float = 1.0
    hbar: float = 1.0
    boundary: Boundary = Boundary.NONPERIODIC

    def __post_init__(self):
        if isinstance(self.d, bool) or not isinstance(self.d, (int, np.integer)):
            raise ConfigError(f"d must be an integer, got {self.d!r}")
        if self.d < 2:
            raise ConfigError(f"d must be >= 2, got {self.d}")
        for name in ("a", "M", "hbar"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be positive and finite, got {value!r}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "M", float(self.M))
        object.__setattr__(self, "hbar", float(self.hbar))
        object.__setattr__(self, "boundary", Boundary(self.boundary))

    @classmethod
    def from_length(cls, d, L, boundary, M=1.0, hbar=1.0):
        """Build a config whose spacing reproduces the box length ``L``."""
        boundary = Boundary(boundary)
        if not (math.isfinite(L) and L > 0):
            raise ConfigError(f"L must be positive and finite, got {L!r}")
        if isinstance(d, (int, np.integer)) and d >= 2:
            a = spacing_for_length(L, d, boundary)
        else:
            a = 1.0  # let __post_init__ report the bad d
        return cls(d=d, a=a, M=M, hbar=hbar, boundary=boundary)

    @property
    def periodic(self) -> bool:
        return self.boundary is Boundary.PERIODIC

    @property
    def length(self) -> float:
        n_intervals = self.d if self.periodic else self.d - 1
        return self.a * n_intervals

    @property
    def q(self) -> complex:
        return np.exp(2j * np.pi / self.d)

    @property
    def energy_scale(self) -> float:
        """pi^2 hbar^2 / ((a d)^2 M), the common prefactor of both Hamiltonians."""
        return (np.pi * self.hbar) ** 2 / ((self.a * self.d) ** 2 * self.M)

    @property
    def hopping(self) -> float:
        """Magnitude of the nearest-neighbour entry of H."""
        return self.energy_scale / (2.0 * np.sin(np.pi / self.d) ** 2)

    def site_indices(self, centered=False) -> np.ndarray:
        n = np.arange(self.d, dtype=float)
        if centered:
            n -= (self.d - 1) / 2.0
        return n

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "a": self.a,
            "M": self.M,
            "hbar": self.hbar,
            "boundary": self.boundary.value,
            "L": self.length,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            d=data["d"], a=data["a"], M=data["M"], hbar=data["hbar"],
            boundary=Boundary(data["boundary"]),
        )


def spacing_for_length(L, d, boundary):
    boundary = Boundary(boundary)
    return L / d if boundary is Boundary.PERIODIC else L / (d - 1)


def _require(config, boundary, what):
    if config.boundary is not boundary:
        raise BoundaryError(f"{what} needs a {boundary.value} lattice, got {config.boundary.value}")


def has_structure(entries, structure, atol=0.0) -> bool:
    """Scan ``entries`` and report whether they fit the ``structure`` pattern."""
    entries = np.asarray(entries)
    structure = Structure(structure)
    if structure is Structure.DENSE:
        return True
    if structure is Structure.DIAGONAL:
        return bool(np.all(np.abs(entries - np.diag(np.diag(entries))) <= atol))
    if structure is Structure.TRIDIAGONAL:
        return bool(np.all(np.abs(np.triu(entries, 2)) <= atol)
                    and np.all(np.abs(np.tril(entries, -2)) <= atol))
    # circulant: invariant under shifting rows and columns together
    return bool(np.all(np.abs(entries - np.roll(entries, (1, 1), axis=(0, 1))) <= atol))


@dataclass(frozen=True, eq=False)
class Operator:
    """A labeled ``d x d`` complex matrix in the position basis."""

    label: str
    entries: np.ndarray
    structure: Structure = Structure.DENSE
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"operator {self.label!r} must be square, got {entries.shape}")
        structure = Structure(self.structure)
        if not has_structure(entries, structure):
            raise ValueError(f"entries of {self.label!r} are not {structure.value}")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "structure", structure)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __matmul__(self, other):
        if isinstance(other, Operator):
            return self.entries @ other.entries
        return self.entries @ other

    def to_dict(self) -> dict:
        data = {
            "label": self.label,
            "dim": self.dim,
            "structure_hint": self.structure.value,
            "entries": [
                [[float(z.real), float(z.imag)] for z in row] for row in self.entries
            ],
        }
        if self.notes:
            data["notes"] = dict(self.notes)
        return data

    @classmethod
    def from_dict(cls, data):
        pairs = np.asarray(data["entries"], dtype=float).reshape(data["dim"], data["dim"], 2)
        return cls(
            label=data["label"],
            entries=pairs[..., 0] + 1j * pairs[..., 1],
            structure=Structure(data["structure_hint"]),
            notes=dict(data.get("notes", {})),
        )


def build_shift_nonperiodic(config, direction=Direction.RIGHT) -> Operator:
    """Truncated translation ``u+`` (right) or ``u- = u+^dagger`` (left).

    The right shift sends ``|d-1>`` to zero and the left shift sends ``|0>``
    to zero, so neither is unitary.
    """
    _require(config, Boundary.NONPERIODIC, "build_shift_nonperiodic")
    direction = Direction(direction)
    right = np.eye(config.d, k=-1)
    if direction is Direction.RIGHT:
        return Operator("u_plus", right, Structure.TRIDIAGONAL)
    return Operator("u_minus", right.T, Structure.TRIDIAGONAL)


def build_shift_periodic(config) -> Operator:
    """Cyclic shift ``U|n> = |n+1 mod d>``."""
    _require(config, Boundary.PERIODIC, "build_shift_periodic")
    return Operator("U", np.roll(np.eye(config.d), 1, axis=0), Structure.CIRCULANT)


def build_clock(config) -> Operator:
    """Clock matrix ``diag(1, q, ..., q^(d-1))`` with ``q = exp(2 pi i / d)``."""
    _require(config, Boundary.PERIODIC, "build_clock")
    phases = np.exp(2j * np.pi * np.arange(config.d) / config.d)
    return Operator("V", np.diag(phases), Structure.DIAGONAL)


def build_position(config, centered=False) -> Operator:
    x = config.a * config.site_indices(centered)
    return Operator("X_centered" if centered else "X", np.diag(x), Structure.DIAGONAL)


def build_hamiltonian(config) -> Operator:
    """Free-particle Hamiltonian ``c * (2 - S - S^dagger)``.

    ``S`` is the cyclic shift on a ring and the truncated right shift on an
    end-pointed lattice; ``c`` is :attr:`LatticeConfig.hopping`.
    """
    if config.periodic:
        shift = build_shift_periodic(config).entries.real
        structure = Structure.CIRCULANT
    else:
        shift = build_shift_nonperiodic(config, Direction.RIGHT).entries.real
        structure = Structure.TRIDIAGONAL
    kinetic = 2.0 * np.eye(config.d) - (shift + shift.T)
    return Operator("H", config.hopping * kinetic, structure)


def signed_mode(k, d) -> int:
    """Representative of ``k mod d`` in the half-open window ``(-d/2, d/2]``."""
    k = k % d
    return k - d if 2 * k > d else k


def momentum_basis(config):
    """Discrete Fourier vectors ``v_k[n] = exp(2 pi i k n / d) / sqrt(d)``.

    Each ``v_k`` is an eigenvector of the cyclic shift with eigenvalue
    ``exp(-2 pi i k / d)``.  Returns a list of ``(k, vector)`` pairs.
    """
    _require(config, Boundary.PERIODIC, "momentum_basis")
    d = config.d
    n = np.arange(d)
    return [(k, np.exp(2j * np.pi * k * n / d) / np.sqrt(d)) for k in range(d)]


HALF_SHIFT_BRANCH = (
    "U^(1/2) acts on U-eigenvalue exp(-2 pi i k/d) as exp(-pi i s/d), "
    "s = signed representative of k in (-d/2, d/2]"
)


def deformed_momentum_eigenvalue(config, k) -> float:
    """Eigenvalue of the deformed momentum on Fourier mode ``k``."""
    s = signed_mode(k, config.d)
    scale = 2.0 * np.pi * config.hbar / (config.a * config.d)
    return scale * np.sin(np.pi * s / config.d) / np.sin(np.pi / config.d)


def build_deformed_momentum(config) -> Operator:
    """Deformed momentum built from half-integer powers of the cyclic shift.

    ``U^(1/2)`` is defined on the Fourier basis with the branch recorded in
    ``notes["branch"]``.  On even rings the mode ``k = d/2`` has two equally
    valid square roots; this routine takes ``-i`` for ``U^(1/2)`` there and
    flags it in ``notes["even_d_top_mode"]``.
    """
    _require(config, Boundary.PERIODIC, "build_deformed_momentum")
    d = config.d
    q_half = np.exp(1j * np.pi / d)
    scale = 2.0 * np.pi * config.hbar / (config.a * d)
    eig = np.empty(d, dtype=complex)
    for k in range(d):
        root = np.exp(-1j * np.pi * signed_mode(k, d) / d)
        eig[k] = scale * (1.0 / root - root) / (q_half - 1.0 / q_half)
    # A function of U is circulant: fix column 0 and roll it.
    n = np.arange(d)
    column = np.exp(2j * np.pi * np.outer(n, n) / d) @ eig / d
    entries = np.column_stack([np.roll(column, j) for j in range(d)])
    notes = {"branch": HALF_SHIFT_BRANCH}
    if d % 2 == 0:
        notes["even_d_top_mode"] = f"k={d // 2}: U^(1/2) eigenvalue taken as -i (U^(-1/2) = +i)"
    return Operator("P_deformed", entries, Structure.CIRCULANT, notes)


def build_parity(config) -> Operator:
    """Site reflection ``|n> -> |d-1-n>`` (centered ``n -> -n``)."""
    _require(config, Boundary.PERIODIC, "build_parity")
    return Operator("parity", np.fliplr(np.eye(config.d)), Structure.DENSE)


def tridiagonal_bands(op):
    """Real diagonal and first off-diagonal of a real symmetric tridiagonal operator."""
    if op.structure is not Structure.TRIDIAGONAL:
        raise ValueError(f"{op.label!r} is tagged {op.structure.value}, not tridiagonal")
    real = op.entries.real
    return np.diag(real).copy(), np.diag(real, k=-1).copy()


def check_quantum_number(m, low, high, what="m"):
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)) or not low <= m <= high:
        raise QuantumNumberError(f"{what}={m!r} outside [{low}, {high}]")
    return int(m)
