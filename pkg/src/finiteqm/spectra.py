"""Energy spectra and wavefunctions of the free lattice Hamiltonian.

Closed forms and a numerical eigensolver are kept on separate code paths so
that :func:`match_spectra` compares two independent computations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .eigensolver import eigh_jacobi, eigh_tridiagonal
from .errors import QuantumNumberError, SpectrumMismatchError
from .lattice import (
    Boundary,
    LatticeConfig,
    build_hamiltonian,
    build_parity,
    check_quantum_number,
    tridiagonal_bands,
)

CLUSTER_RTOL = 1e-9


class Parity(str, enum.Enum):
    EVEN = "even"
    ODD = "odd"
    NONE = "none"


@dataclass(frozen=True, eq=False)
class EigenEntry:
    m: int
    energy: float
    parity: Parity
    vector: np.ndarray
    # eigenvalue of S + S^dagger belonging to this state (2 cos theta)
    shift_eigenvalue: float


@dataclass(frozen=True, eq=False)
class EigenSystem:
    config: LatticeConfig
    entries: tuple
    source: str
    notes: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.entries)

    @property
    def energies(self) -> np.ndarray:
        return np.array([e.energy for e in self.entries])

    @property
    def vectors(self) -> np.ndarray:
        return np.column_stack([e.vector for e in self.entries])

    def levels(self, rtol=CLUSTER_RTOL):
        """Group entry indices into degenerate levels (list of index lists)."""
        return cluster_indices(self.energies, rtol)

    def multiplicities(self, rtol=CLUSTER_RTOL):
        return tuple(len(level) for level in self.levels(rtol))

    def degeneracies(self, rtol=CLUSTER_RTOL):
        out = [0] * len(self.entries)
        for level in self.levels(rtol):
            for i in level:
                out[i] = len(level)
        return out

    def to_dict(self, vectors=True) -> dict:
        rows = []
        for entry, deg in zip(self.entries, self.degeneracies()):
            row = {
                "m": entry.m,
                "parity": entry.parity.value,
                "energy": float(entry.energy),
                "degeneracy": deg,
                "shift_eigenvalue": float(entry.shift_eigenvalue),
            }
            if vectors:
                row["vector"] = [float(x) for x in entry.vector]
            rows.append(row)
        return {
            "config": self.config.to_dict(),
            "source": self.source,
            "notes": dict(self.notes),
            "entries": rows,
        }

    @classmethod
    def from_dict(cls, data):
        config = LatticeConfig.from_dict(data["config"])
        entries = tuple(
            EigenEntry(
                m=row["m"],
                energy=row["energy"],
                parity=Parity(row["parity"]),
                vector=np.asarray(row.get("vector", []), dtype=float),
                shift_eigenvalue=row["shift_eigenvalue"],
            )
            for row in data["entries"]
        )
        return cls(config, entries, data["source"], dict(data.get("notes", {})))


def cluster_indices(values, rtol=CLUSTER_RTOL):
    """Split ascending ``values`` into runs whose neighbours differ by <= rtol * range."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return []
    spread = float(values.max() - values.min())
    tol = rtol * (spread if spread > 0 else 1.0)
    levels = [[0]]
    for i in range(1, values.size):
        if values[i] - values[i - 1] <= tol:
            levels[-1].append(i)
        else:
            levels.append([i])
    return levels


def _fix_sign(vector):
    vector = np.asarray(vector, dtype=float)
    mags = np.abs(vector)
    first = vector[np.argmax(mags > 1e-12 * mags.max())]
    return -vector if first < 0 else vector


# -- closed forms ---------------------------------------------------------


def energy_nonperiodic(config, m) -> float:
    m = check_quantum_number(m, 1, config.d)
    ratio = np.sin(np.pi * m / (2 * (config.d + 1))) / np.sin(np.pi / config.d)
    return 2.0 * config.energy_scale * ratio**2


def energy_periodic(config, m) -> float:
    m = check_quantum_number(m, 0, config.d // 2)
    ratio = np.sin(np.pi * m / config.d) / np.sin(np.pi / config.d)
    return 2.0 * config.energy_scale * ratio**2


def discrete_energy(config, m) -> float:
    if config.periodic:
        return energy_periodic(config, m)
    return energy_nonperiodic(config, m)


def periodic_mode_vector(d, m, parity):
    """Unnormalized ring mode: cos or sin of ``2 pi m n / d`` on centered ``n``.

    ``m`` is not range-checked, so aliased modes ``m`` and ``d - m`` can be
    compared directly.
    """
    parity = Parity(parity)
    n = np.arange(d) - (d - 1) / 2.0
    phase = 2.0 * np.pi * m * n / d
    if parity is Parity.EVEN:
        return np.cos(phase)
    if parity is Parity.ODD:
        return np.sin(phase)
    raise QuantumNumberError("ring modes are even or odd")


def analytic_spectrum_nonperiodic(config) -> EigenSystem:
    if config.periodic:
        raise QuantumNumberError("analytic_spectrum_nonperiodic needs a nonperiodic lattice")
    d = config.d
    n = np.arange(d)
    amplitude = np.sqrt(2.0 / (d + 1))
    entries = []
    for m in range(1, d + 1):
        theta = np.pi * m / (d + 1)
        vector = amplitude * np.sin(theta * (n + 1))
        entries.append(
            EigenEntry(m, energy_nonperiodic(config, m), Parity.NONE, _fix_sign(vector),
                       2.0 * np.cos(theta))
        )
    return EigenSystem(config, tuple(entries), "analytic")


def _periodic_states(d):
    """(m, parity) pairs in ascending energy, even before odd within a level."""
    states = [(0, Parity.EVEN)]
    for m in range(1, d // 2 + 1):
        if m <= (d - 1) // 2:
            states.append((m, Parity.EVEN))
        states.append((m, Parity.ODD))
    return states


def analytic_spectrum_periodic(config) -> EigenSystem:
    if not config.periodic:
        raise QuantumNumberError("analytic_spectrum_periodic needs a periodic lattice")
    d = config.d
    notes = {}
    entries = []
    for m, parity in _periodic_states(d):
        raw = periodic_mode_vector(d, m, parity)
        amplitude = np.sqrt(1.0 / d) if m == 0 else np.sqrt(2.0 / d)
        vector = amplitude * raw
        if 2 * m == d:
            # sin^2 = 1 on every half-integer site; sqrt(2/d) overshoots
            vector = raw / np.linalg.norm(raw)
            notes["top_odd_state"] = (
                f"m={m}: sqrt(2/d) normalization gives norm^2 = 2; renormalized to sqrt(1/d)"
            )
        entries.append(
            EigenEntry(m, energy_periodic(config, m), parity, _fix_sign(vector),
                       2.0 * np.cos(2.0 * np.pi * m / d))
        )
    return EigenSystem(config, tuple(entries), "analytic", notes)


def analytic_spectrum(config) -> EigenSystem:
    if config.periodic:
        return analytic_spectrum_periodic(config)
    return analytic_spectrum_nonperiodic(config)


# -- numerics -------------------------------------------------------------


def parity_adapted_basis(d):
    """Orthogonal ``(even, odd)`` column bases built from site pairs ``{n, d-1-n}``."""
    even, odd = [], []
    for n in range(d // 2):
        v = np.zeros(d)
        v[n] = v[d - 1 - n] = np.sqrt(0.5)
        even.append(v)
        w = np.zeros(d)
        w[n], w[d - 1 - n] = np.sqrt(0.5), -np.sqrt(0.5)
        odd.append(w)
    if d % 2:
        v = np.zeros(d)
        v[d // 2] = 1.0
        even.append(v)
    return np.column_stack(even), np.column_stack(odd)


def _block_bands(block):
    rows, cols = np.indices(block.shape)
    if np.any(block[np.abs(rows - cols) > 1] != 0.0):
        raise ValueError("parity block is not tridiagonal")
    return np.diag(block).copy(), np.diag(block, k=-1).copy()


def _order_states(energies, vectors, parities):
    """Ascending energy; within a degenerate level even states come first."""
    order = np.argsort(energies, kind="stable")
    energies, vectors = energies[order], vectors[:, order]
    parities = [parities[i] for i in order]
    rank = {Parity.EVEN: 0, Parity.ODD: 1, Parity.NONE: 2}
    final = []
    for level in cluster_indices(energies):
        final.extend(sorted(level, key=lambda i: rank[parities[i]]))
    return energies[final], vectors[:, final], [parities[i] for i in final], cluster_indices(energies[final])


def _parity_resolve(vectors, energies, parity_matrix):
    """Rotate each degenerate cluster onto parity eigenvectors."""
    vectors = vectors.copy()
    parities = []
    for level in cluster_indices(energies):
        block = vectors[:, level]
        small = block.T @ parity_matrix @ block
        small = 0.5 * (small + small.T)
        signs, rot = eigh_jacobi(small)
        vectors[:, level] = block @ rot
        parities.extend(Parity.EVEN if s > 0 else Parity.ODD for s in signs)
    return vectors, parities


def numeric_spectrum(config, method="structured") -> EigenSystem:
    """Diagonalize the built Hamiltonian numerically (no closed forms used).

    ``method="structured"`` runs the tridiagonal solver directly on an
    end-pointed lattice and, on a ring, on the two tridiagonal blocks obtained
    in the parity-adapted basis.  ``method="jacobi"`` diagonalizes the dense
    matrix by cyclic Jacobi and resolves ring degeneracies by parity.
    """
    H = build_hamiltonian(config)
    hop = config.hopping
    real = np.ascontiguousarray(H.entries.real)
    if method == "structured":
        if not config.periodic:
            energies, vectors = eigh_tridiagonal(*tridiagonal_bands(H))
            parities = [Parity.NONE] * config.d
        else:
            even, odd = parity_adapted_basis(config.d)
            w_e, v_e = eigh_tridiagonal(*_block_bands(even.T @ real @ even))
            w_o, v_o = eigh_tridiagonal(*_block_bands(odd.T @ real @ odd))
            energies = np.concatenate([w_e, w_o])
            vectors = np.hstack([even @ v_e, odd @ v_o])
            parities = [Parity.EVEN] * len(w_e) + [Parity.ODD] * len(w_o)
    elif method == "jacobi":
        energies, vectors = eigh_jacobi(real)
        if config.periodic:
            vectors, parities = _parity_resolve(vectors, energies, build_parity(config).entries.real)
        else:
            parities = [Parity.NONE] * config.d
    else:
        raise ValueError(f"unknown method {method!r}")

    energies, vectors, parities, levels = _order_states(energies, vectors, parities)
    level_of = {i: k for k, level in enumerate(levels) for i in level}
    entries = []
    for index, (energy, parity) in enumerate(zip(energies, parities)):
        m = level_of[index] if config.periodic else index + 1
        entries.append(
            EigenEntry(m, float(energy), parity, _fix_sign(vectors[:, index]), 2.0 - energy / hop)
        )
    return EigenSystem(config, tuple(entries), f"numeric:{method}")


# -- reconciliation -------------------------------------------------------


@dataclass
class LevelMatch:
    multiplicity: int
    analytic_energy: float
    numeric_energy: float
    deviation: float
    relative: bool
    subspace_sin: float


@dataclass
class MatchReport:
    config: LatticeConfig
    levels: list
    max_relative_deviation: float
    max_absolute_deviation: float
    max_subspace_sin: float
    passed: bool
    rtol: float
    atol: float
    angle_tol: float

    @property
    def multiplicities(self):
        return tuple(level.multiplicity for level in self.levels)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "pass": self.passed,
            "rtol": self.rtol,
            "atol_hopping_units": self.atol,
            "angle_tol": self.angle_tol,
            "max_relative_deviation": self.max_relative_deviation,
            "max_absolute_deviation_hopping_units": self.max_absolute_deviation,
            "max_subspace_sin": self.max_subspace_sin,
            "multiplicities": list(self.multiplicities),
        }


def subspace_sin(a, b) -> float:
    """Sine of the largest principal angle between orthonormal column spans."""
    residual = a - b @ (b.T @ a)
    return float(np.linalg.norm(residual, ord=2))


def match_spectra(analytic, numeric, rtol=1e-10, atol=1e-12, angle_tol=1e-8,
                  cluster_rtol=CLUSTER_RTOL) -> MatchReport:
    """Pair levels by sorted energy and compare energies and eigenspaces.

    Energies within ``atol`` (measured in units of the hopping constant) of
    zero are compared absolutely; all others relatively.  Degenerate levels
    are compared as subspaces.  A mismatch in degeneracy pattern raises
    :class:`SpectrumMismatchError`.
    """
    if analytic.config != numeric.config:
        raise ValueError("spectra belong to different configurations")
    hop = analytic.config.hopping
    a_levels = analytic.levels(cluster_rtol)
    n_levels = numeric.levels(cluster_rtol)
    a_mult = [len(x) for x in a_levels]
    n_mult = [len(x) for x in n_levels]
    if a_mult != n_mult:
        raise SpectrumMismatchError(
            f"degeneracy pattern differs at d={analytic.config.d}: analytic {a_mult}, numeric {n_mult}"
        )
    ea, en = analytic.energies, numeric.energies
    va, vn = analytic.vectors, numeric.vectors
    levels = []
    max_rel = max_abs = max_sin = 0.0
    # one-dimensional levels: |a - b (b.a)| column by column
    overlap = np.sum(va * vn, axis=0)
    single = np.linalg.norm(va - vn * overlap, axis=0)
    for la, ln in zip(a_levels, n_levels):
        worst = 0.0
        relative = True
        for i, j in zip(la, ln):
            if abs(ea[i]) / hop <= atol:
                dev = abs(ea[i] - en[j]) / hop
                max_abs = max(max_abs, dev)
                relative = False
            else:
                dev = abs(ea[i] - en[j]) / abs(ea[i])
                max_rel = max(max_rel, dev)
            worst = max(worst, dev)
        if len(la) == 1 and la == ln:
            s = float(single[la[0]])
        else:
            s = subspace_sin(va[:, la], vn[:, ln])
        max_sin = max(max_sin, s)
        levels.append(LevelMatch(len(la), float(ea[la[0]]), float(en[ln[0]]), worst, relative, s))
    passed = max_rel <= rtol and max_abs <= atol and max_sin <= angle_tol
    return MatchReport(analytic.config, levels, max_rel, max_abs, max_sin, passed,
                       rtol, atol, angle_tol)


@dataclass
class RecurrenceReport:
    residuals: list
    max_residual: float


def verify_recurrence(eigen) -> RecurrenceReport:
    """Check ``v[n+1] + v[n-1] = lambda v[n]`` for every state.

    End-pointed lattices use zero virtual sites at ``n = -1`` and ``n = d``;
    rings wrap around.
    """
    residuals = []
    for entry in eigen.entries:
        v = np.asarray(entry.vector, dtype=float)
        if eigen.config.periodic:
            left, right = np.roll(v, 1), np.roll(v, -1)
        else:
            left = np.concatenate([[0.0], v[:-1]])
            right = np.concatenate([v[1:], [0.0]])
        residuals.append(float(np.abs(left + right - entry.shift_eigenvalue * v).max()))
    return RecurrenceReport(residuals, max(residuals))


# -- wavefunctions --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Position-sampled eigenfunction normalized as ``sum |psi|^2 a = 1``.

    ``sites`` are storage indices ``0..d-1``; ``x`` uses centered indices on a
    ring and ``n * a`` on an end-pointed lattice.
    """

    config: LatticeConfig
    m: int
    parity: Parity
    sites: np.ndarray
    x: np.ndarray
    psi: np.ndarray
    notes: dict = field(default_factory=dict)

    def norm(self) -> float:
        return float(np.sum(self.psi**2) * self.config.a)

    def value_at(self, n):
        """Closed-form amplitude at storage index ``n`` (virtual sites allowed)."""
        return _closed_form(self.config, self.m, self.parity, np.asarray(n, dtype=float)) * \
            self.notes.get("scale", 1.0)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "m": self.m,
            "parity": self.parity.value,
            "notes": dict(self.notes),
            "samples": [
                {"n": int(n), "x": float(x), "psi": float(p)}
                for n, x, p in zip(self.sites, self.x, self.psi)
            ],
        }

    @classmethod
    def from_dict(cls, data):
        samples = data["samples"]
        return cls(
            config=LatticeConfig.from_dict(data["config"]),
            m=data["m"],
            parity=Parity(data["parity"]),
            sites=np.array([s["n"] for s in samples], dtype=int),
            x=np.array([s["x"] for s in samples], dtype=float),
            psi=np.array([s["psi"] for s in samples], dtype=float),
            notes=dict(data.get("notes", {})),
        )


def _closed_form(config, m, parity, n):
    d, a = config.d, config.a
    if not config.periodic:
        return np.sqrt(2.0 / ((d + 1) * a)) * np.sin(m * (1 + n) * np.pi / (d + 1))
    if m == 0:
        return np.full_like(n, np.sqrt(1.0 / (d * a)))
    centered = n - (d - 1) / 2.0
    phase = 2.0 * np.pi * m * centered / d
    trig = np.cos(phase) if parity is Parity.EVEN else np.sin(phase)
    return np.sqrt(2.0 / (d * a)) * trig


def wavefunction(config, m, parity=None) -> WaveFunction:
    """Closed-form eigenfunction sampled on the lattice sites.

    On a ring ``parity`` selects the cosine (even) or sine (odd) family; the
    ground state ``m = 0`` is even.  On even rings the single top state
    ``m = d/2`` is renormalized numerically and flagged in ``notes``.
    """
    d = config.d
    sites = np.arange(d)
    if config.periodic:
        parity = Parity.EVEN if parity is None and m == 0 else parity
        if parity is None or Parity(parity) is Parity.NONE:
            raise QuantumNumberError("ring wavefunctions need parity 'even' or 'odd'")
        parity = Parity(parity)
        high = (d - 1) // 2 if parity is Parity.EVEN else d // 2
        check_quantum_number(m, 0 if parity is Parity.EVEN else 1, high)
        x = config.a * config.site_indices(centered=True)
    else:
        if parity is not None and Parity(parity) is not Parity.NONE:
            raise QuantumNumberError("end-pointed lattice states carry no parity")
        parity = Parity.NONE
        check_quantum_number(m, 1, d)
        x = config.a * config.site_indices()
    psi = _closed_form(config, m, parity, sites.astype(float))
    notes = {}
    if config.periodic and 2 * m == d:
        scale = 1.0 / np.sqrt(np.sum(psi**2) * config.a)
        psi = psi * scale
        notes = {
            "scale": float(scale),
            "renormalized": "top odd state: closed-form sqrt(2/(d a)) amplitude replaced by sqrt(1/(d a))",
        }
    return WaveFunction(config, int(m), parity, sites, x, psi, notes)


__all__ = [
    "Boundary", "Parity", "EigenEntry", "EigenSystem", "LevelMatch", "MatchReport",
    "RecurrenceReport", "WaveFunction", "analytic_spectrum", "analytic_spectrum_nonperiodic",
    "analytic_spectrum_periodic", "cluster_indices", "discrete_energy", "energy_nonperiodic",
    "energy_periodic", "match_spectra", "numeric_spectrum", "parity_adapted_basis",
    "periodic_mode_vector", "subspace_sin", "verify_recurrence", "wavefunction",
]
