"""Convergence of the lattice spectra and wavefunctions to their box limits.

Length conventions differ by boundary: an end-pointed lattice spans
``L = a (d-1)``, a ring ``L = a d``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, QuantumNumberError
from .lattice import Boundary, LatticeConfig, deformed_momentum_eigenvalue, signed_mode
from .spectra import Parity, discrete_energy, wavefunction


def continuum_energy(m, boundary, L=1.0, M=1.0, hbar=1.0) -> float:
    """Infinite square well (end-pointed) or periodic box (ring) energy."""
    boundary = Boundary(boundary)
    low = 0 if boundary is Boundary.PERIODIC else 1
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)) or m < low:
        raise QuantumNumberError(f"m={m!r} must be an integer >= {low}")
    for name, value in (("L", L), ("M", M), ("hbar", hbar)):
        if not value > 0:
            raise ConfigError(f"{name} must be positive, got {value!r}")
    if boundary is Boundary.PERIODIC:
        return 2.0 * (np.pi * hbar * m) ** 2 / (M * L**2)
    return (np.pi * hbar * m) ** 2 / (2.0 * M * L**2)


def fit_decay_exponent(d_values, errors):
    """Least-squares slope ``p`` of ``log error = c - p log d``.

    Returns ``None`` when any error is exactly zero (nothing to fit).
    """
    d_values = np.asarray(d_values, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if d_values.size < 4:
        raise ConfigError(f"exponent fit needs at least 4 points, got {d_values.size}")
    if np.any(errors <= 0):
        return None
    slope, _ = np.polyfit(np.log(d_values), np.log(errors), 1)
    return float(-slope)


def _check_sweep(d_values):
    d_values = [int(d) for d in d_values]
    if not d_values:
        raise ConfigError("empty d sweep")
    if any(b <= a for a, b in zip(d_values, d_values[1:])):
        raise ConfigError(f"d values must be strictly increasing, got {d_values}")
    return d_values


@dataclass
class ConvergenceReport:
    boundary: Boundary
    m: int
    L: float
    M: float
    hbar: float
    rows: list
    exponent: float | None = None

    @property
    def errors(self):
        return [row["rel_error"] for row in self.rows]

    def to_dict(self) -> dict:
        return {
            "boundary": self.boundary.value,
            "m": self.m,
            "L": self.L,
            "M": self.M,
            "hbar": self.hbar,
            "rows": [dict(row) for row in self.rows],
            "exponent": self.exponent,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(Boundary(data["boundary"]), data["m"], data["L"], data["M"], data["hbar"],
                   [dict(r) for r in data["rows"]], data["exponent"])


def convergence_study(m, boundary, L=1.0, d_values=(64, 128, 256, 512, 1024, 2048, 4096),
                      M=1.0, hbar=1.0, fit=True) -> ConvergenceReport:
    """Relative error of the discrete ``E_m`` against its continuum value along a d sweep.

    ``a`` is derived from ``L`` per boundary.  With ``fit=True`` the decay
    exponent is fitted on the log-log rows (needs at least 4 of them).
    """
    boundary = Boundary(boundary)
    d_values = _check_sweep(d_values)
    limit = continuum_energy(m, boundary, L, M, hbar)
    rows = []
    for d in d_values:
        if d < max(3, m + 1):
            raise QuantumNumberError(f"d={d} too small for m={m}")
        config = LatticeConfig.from_length(d, L, boundary, M=M, hbar=hbar)
        energy = discrete_energy(config, m)
        if limit == 0.0:
            rel = 0.0 if energy == 0.0 else float("inf")
        else:
            rel = abs(energy / limit - 1.0)
        rows.append({"d": d, "a": config.a, "E_discrete": float(energy),
                     "E_limit": float(limit), "rel_error": float(rel)})
    exponent = fit_decay_exponent(d_values, [r["rel_error"] for r in rows]) if fit else None
    return ConvergenceReport(boundary, int(m), float(L), float(M), float(hbar), rows, exponent)


@dataclass
class WavefunctionLimitReport:
    boundary: Boundary
    m: int
    parity: Parity
    d: int
    L: float
    max_deviation: float
    continuum_amplitude: float
    notes: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "boundary": self.boundary.value, "m": self.m, "parity": self.parity.value,
            "d": self.d, "L": self.L, "max_deviation": self.max_deviation,
            "continuum_amplitude": self.continuum_amplitude, "notes": dict(self.notes),
        }


EXCITED_STATE_AMPLITUDE = "sqrt(2/L)"


def continuum_wavefunction(m, parity, boundary, L, x):
    """Box eigenfunction at positions ``x`` (``[0, L]`` or ``[-L/2, L/2]``)."""
    boundary = Boundary(boundary)
    x = np.asarray(x, dtype=float)
    if boundary is Boundary.NONPERIODIC:
        return np.sqrt(2.0 / L) * np.sin(m * np.pi * x / L)
    if m == 0:
        # limit of the discrete ground state sqrt(1/(d a)) with a d = L
        return np.full_like(x, np.sqrt(1.0 / L))
    trig = np.cos if Parity(parity) is Parity.EVEN else np.sin
    return np.sqrt(2.0 / L) * trig(2.0 * m * np.pi * x / L)


def wavefunction_limit_compare(m, parity, boundary, L, d) -> WavefunctionLimitReport:
    """Largest pointwise gap between the lattice eigenfunction and its box limit."""
    boundary = Boundary(boundary)
    config = LatticeConfig.from_length(d, L, boundary)
    if boundary is Boundary.NONPERIODIC:
        parity = Parity.NONE
    elif parity is None:
        parity = Parity.EVEN if m == 0 else None
    wf = wavefunction(config, m, parity)
    reference = continuum_wavefunction(m, wf.parity, boundary, L, wf.x)
    notes = {}
    amplitude = float(np.sqrt(2.0 / L))
    if boundary is Boundary.PERIODIC and m == 0:
        amplitude = float(np.sqrt(1.0 / L))
        notes["ground_state_amplitude"] = (
            f"compared against sqrt(1/L) = {amplitude!r}, the normalized limit of the lattice "
            f"ground state; the excited-state amplitude {EXCITED_STATE_AMPLITUDE} = "
            f"{float(np.sqrt(2.0 / L))!r} does not normalize the constant state on [-L/2, L/2]"
        )
    deviation = float(np.max(np.abs(wf.psi - reference)))
    return WavefunctionLimitReport(boundary, int(m), wf.parity, int(d), float(L), deviation,
                                   amplitude, notes)


@dataclass
class ExpansionReport:
    mode: int
    L: float
    hbar: float
    rows: list

    @property
    def deviations(self):
        return [row["deviation"] for row in self.rows]

    @property
    def ratios(self):
        """deviation(d_i) / deviation(d_(i+1)) along the sweep."""
        dev = self.deviations
        return [a / b if b > 0 else float("nan") for a, b in zip(dev, dev[1:])]

    def to_dict(self) -> dict:
        return {"mode": self.mode, "L": self.L, "hbar": self.hbar,
                "rows": [dict(r) for r in self.rows], "ratios": self.ratios}


def deformed_momentum_expansion_check(L=1.0, mode=3, d_values=(99, 199, 399, 799),
                                      hbar=1.0) -> ExpansionReport:
    """Gap between the deformed momentum on a Fourier mode and the box momentum.

    For each ``d`` the ring has ``a = L/d``; the box momentum of signed mode
    ``k`` is ``2 pi hbar k / L``.  Rows carry the deviation and the scaled
    remainder ``deviation / (|p|^3 a^2)``, which tends to a constant.
    """
    d_values = _check_sweep(d_values)
    rows = []
    for d in d_values:
        if abs(mode) > (d - 1) // 2:
            raise QuantumNumberError(f"mode {mode} out of range for d={d}")
        config = LatticeConfig.from_length(d, L, Boundary.PERIODIC, hbar=hbar)
        k = mode % d
        assert signed_mode(k, d) == mode
        lattice_p = deformed_momentum_eigenvalue(config, k)
        box_p = 2.0 * np.pi * hbar * mode / L
        deviation = abs(lattice_p - box_p)
        scaled = deviation / (abs(box_p) ** 3 * config.a**2) if mode else 0.0
        rows.append({"d": d, "a": config.a, "P_lattice": float(lattice_p), "p": float(box_p),
                     "deviation": float(deviation), "scaled_remainder": float(scaled)})
    return ExpansionReport(int(mode), float(L), float(hbar), rows)
