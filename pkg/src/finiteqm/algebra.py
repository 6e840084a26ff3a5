"""Matrix-level verification of the translation-operator algebras.

Every identity is checked for one concrete ``d`` by forming both sides as
matrices and taking the largest absolute entrywise deviation.  Index families
(projection products, intertwining relations) are checked exhaustively over
their admissible range rather than sampled.

On the end-pointed lattice ``u`` denotes the left shift ``u-`` and ``u^dagger``
the right shift ``u+``; the projections are ``P_n = u^dagger^n u^n``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundaryError, ConfigError, QuantumNumberError
from .lattice import (
    Boundary,
    Direction,
    LatticeConfig,
    Operator,
    Structure,
    build_clock,
    build_shift_nonperiodic,
    build_shift_periodic,
)

DEFAULT_TOL = 1e-12


def default_tolerance() -> float:
    """Pass threshold, overridable through ``FINITEQM_TOL``."""
    raw = os.environ.get("FINITEQM_TOL")
    if raw is None or raw.strip() == "":
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise ConfigError(f"FINITEQM_TOL must be a float, got {raw!r}") from None
    if not tol >= 0:
        raise ConfigError(f"FINITEQM_TOL must be non-negative, got {raw!r}")
    return tol


@dataclass
class Check:
    name: str
    relation: str
    max_dev: float
    passed: bool
    exact: bool = False
    group: str = ""
    cases: int = 1

    def to_dict(self) -> dict:
        data = {
            "name": self.name,
            "relation": self.relation,
            "max_dev": self.max_dev,
            "pass": self.passed,
            "exact": self.exact,
            "cases": self.cases,
        }
        if self.group:
            data["group"] = self.group
        return data

    @classmethod
    def from_dict(cls, data):
        return cls(
            name=data["name"], relation=data["relation"], max_dev=data["max_dev"],
            passed=data["pass"], exact=data.get("exact", False),
            group=data.get("group", ""), cases=data.get("cases", 1),
        )


@dataclass
class VerificationReport:
    config: dict
    checks: list = field(default_factory=list)
    tol: float = DEFAULT_TOL

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_dev(self) -> float:
        return max((c.max_dev for c in self.checks), default=0.0)

    def names(self):
        return [c.name for c in self.checks]

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def subreport(self, group):
        return VerificationReport(self.config, [c for c in self.checks if c.group == group], self.tol)

    def extend(self, other):
        self.checks.extend(other.checks)
        return self

    def _add(self, name, relation, deviations, exact=False, group=""):
        deviations = [float(x) for x in deviations]
        dev = max(deviations) if deviations else 0.0
        ok = dev <= self.tol and (dev == 0.0 if exact else True)
        self.checks.append(Check(name, relation, dev, ok, exact, group, len(deviations)))

    def to_dict(self) -> dict:
        return {
            "config": dict(self.config),
            "tol": self.tol,
            "pass": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }

    @classmethod
    def from_dict(cls, data):
        return cls(dict(data["config"]), [Check.from_dict(c) for c in data["checks"]],
                   data.get("tol", DEFAULT_TOL))


def _dev(lhs, rhs) -> float:
    return float(np.max(np.abs(np.asarray(lhs) - np.asarray(rhs)), initial=0.0))


def _require(config, boundary, what):
    if config.boundary is not boundary:
        raise BoundaryError(f"{what} needs a {boundary.value} lattice, got {config.boundary.value}")


class _Ladder:
    """Real 0/1 shift matrices and their powers for one ``d``.

    Products of 0/1 matrices stay small integers, which float64 represents
    exactly, so deviations of these identities are exactly zero when they hold.
    """

    def __init__(self, config):
        self.d = config.d
        self.u = build_shift_nonperiodic(config, Direction.LEFT).entries.real.copy()
        self.ud = build_shift_nonperiodic(config, Direction.RIGHT).entries.real.copy()
        self.eye = np.eye(self.d)
        self.u_pow = [self.eye]
        self.ud_pow = [self.eye]
        for _ in range(self.d):
            self.u_pow.append(self.u_pow[-1] @ self.u)
            self.ud_pow.append(self.ud_pow[-1] @ self.ud)
        self.P = [self.ud_pow[n] @ self.u_pow[n] for n in range(self.d + 1)]


def projection(config, n) -> Operator:
    """``P_n = u^dagger^n u^n``; ``P_0`` is the identity and ``P_d`` vanishes."""
    _require(config, Boundary.NONPERIODIC, "projection")
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or not 0 <= n <= config.d:
        raise QuantumNumberError(f"projection index n={n!r} outside [0, {config.d}]")
    u = build_shift_nonperiodic(config, Direction.LEFT).entries.real
    ud = u.T
    entries = np.linalg.matrix_power(ud, n) @ np.linalg.matrix_power(u, n)
    return Operator(f"P_{n}", entries, Structure.DIAGONAL)


def _summary(config) -> dict:
    return {"d": config.d, "boundary": config.boundary.value}


def verify_translation_algebra(config, tol=None) -> VerificationReport:
    """Defining relations of the truncated shifts and their end-point failures."""
    _require(config, Boundary.NONPERIODIC, "verify_translation_algebra")
    tol = default_tolerance() if tol is None else tol
    lad = _Ladder(config)
    d = lad.d
    up, um = lad.ud, lad.u
    up_pow, um_pow = lad.ud_pow, lad.u_pow
    zero = np.zeros((d, d))
    rep = VerificationReport(_summary(config), tol=tol)
    rep._add("nilpotent_right", "u+^d = 0", [_dev(up_pow[d], zero)], exact=True)
    rep._add("nilpotent_left", "u-^d = 0", [_dev(um_pow[d], zero)], exact=True)
    rep._add("adjoint_pair", "u+^dagger = u-", [_dev(up.conj().T, um)], exact=True)
    rep._add("left_right_product", "u- u+ = 1 - u+^(d-1) u-^(d-1)",
             [_dev(um @ up, lad.eye - up_pow[d - 1] @ um_pow[d - 1])], exact=True)
    rep._add("right_left_product", "u+ u- = 1 - u-^(d-1) u+^(d-1)",
             [_dev(up @ um, lad.eye - um_pow[d - 1] @ up_pow[d - 1])], exact=True)

    basis = lad.eye
    rep._add("right_left_kills_first_site", "u+ u- e_0 = 0",
             [_dev(up @ um @ basis[:, 0], 0.0)], exact=True)
    rep._add("left_right_kills_last_site", "u- u+ e_(d-1) = 0",
             [_dev(um @ up @ basis[:, d - 1], 0.0)], exact=True)
    rep._add("right_left_identity_interior", "u+ u- e_n = e_n, 1 <= n <= d-1",
             [_dev(up @ um @ basis[:, n], basis[:, n]) for n in range(1, d)], exact=True)
    rep._add("left_right_identity_interior", "u- u+ e_n = e_n, 0 <= n <= d-2",
             [_dev(um @ up @ basis[:, n], basis[:, n]) for n in range(0, d - 1)], exact=True)

    # minimal defining set, with u = u- and u^dagger = u+
    rep._add("defining_u_udagger", "u u^dagger = 1 - P_(d-1)",
             [_dev(um @ up, lad.eye - lad.P[d - 1])], exact=True, group="defining_relations")
    rep._add("defining_nilpotent", "u^d = 0",
             [_dev(um_pow[d], zero)], exact=True, group="defining_relations")
    return rep


def verify_projection_lattice(config, tol=None) -> VerificationReport:
    """Projection products and intertwining relations over every index pair."""
    _require(config, Boundary.NONPERIODIC, "verify_projection_lattice")
    tol = default_tolerance() if tol is None else tol
    lad = _Ladder(config)
    d, P, u, ud = lad.d, lad.P, lad.u, lad.ud
    rep = VerificationReport(_summary(config), tol=tol)

    rep._add("projection_zero_is_identity", "P_0 = 1", [_dev(P[0], lad.eye)], exact=True)
    rep._add("projection_d_vanishes", "P_d = 0", [_dev(P[d], 0.0)], exact=True)
    diag_dev = []
    for n in range(d + 1):
        off = P[n] - np.diag(np.diag(P[n]))
        values = np.diag(P[n])
        diag_dev.append(max(_dev(off, 0.0), float(np.max(np.minimum(np.abs(values), np.abs(values - 1))))))
    rep._add("projection_diagonal_01", "P_n diagonal with entries in {0, 1}", diag_dev, exact=True)
    rep._add("projection_nested", "P_n P_m = P_m, 0 <= n <= m <= d",
             [_dev(P[n] @ P[m], P[m]) for n in range(d + 1) for m in range(n, d + 1)], exact=True)
    rep._add("projection_idempotent", "P_n^2 = P_n, 0 <= n <= d",
             [_dev(P[n] @ P[n], P[n]) for n in range(d + 1)], exact=True)
    rep._add("projection_raise_intertwine", "P_m u^dagger = u^dagger P_(m-1), 1 <= m <= d",
             [_dev(P[m] @ ud, ud @ P[m - 1]) for m in range(1, d + 1)], exact=True)
    rep._add("projection_lower_intertwine", "u P_m = P_(m-1) u, 1 <= m <= d",
             [_dev(u @ P[m], P[m - 1] @ u) for m in range(1, d + 1)], exact=True)
    rep._add("projection_lower_shift", "P_m u = u P_(m+1), 0 <= m <= d-1",
             [_dev(P[m] @ u, u @ P[m + 1]) for m in range(d)], exact=True)
    rep._add("power_complement", "u^n u^dagger^n = 1 - P_(d-n), 0 <= n <= d",
             [_dev(lad.u_pow[n] @ lad.ud_pow[n], lad.eye - P[d - n]) for n in range(d + 1)],
             exact=True)
    rep._add("power_complement_top", "u^(d-1) u^dagger^(d-1) = 1 - u^dagger u",
             [_dev(lad.u_pow[d - 1] @ lad.ud_pow[d - 1], lad.eye - ud @ u)], exact=True)
    rep._add("raise_annihilates_top_projection", "u^dagger P_(d-1) = 0",
             [_dev(ud @ P[d - 1], 0.0)], exact=True)
    rep._add("top_projection_annihilates_lower", "P_(d-1) u = 0",
             [_dev(P[d - 1] @ u, 0.0)], exact=True)
    return rep


def verify_weyl_pair(config, tol=None) -> VerificationReport:
    """Clock/shift relations on a ring: orders, commutation phase, unitarity."""
    _require(config, Boundary.PERIODIC, "verify_weyl_pair")
    tol = default_tolerance() if tol is None else tol
    d = config.d
    U = build_shift_periodic(config).entries
    V = build_clock(config).entries
    eye = np.eye(d)
    rep = VerificationReport(_summary(config), tol=tol)
    rep._add("shift_order", "U^d = 1", [_dev(np.linalg.matrix_power(U, d), eye)], exact=True)
    rep._add("clock_order", "V^d = 1", [_dev(np.linalg.matrix_power(V, d), eye)])
    rep._add("weyl_commutation", "V U = q U V", [_dev(V @ U, config.q * (U @ V))])
    rep._add("shift_unitary", "U^dagger U = 1", [_dev(U.conj().T @ U, eye)], exact=True)
    rep._add("clock_unitary", "V^dagger V = 1", [_dev(V.conj().T @ V, eye)])
    return rep


def pauli_matrices(config):
    """``(u^dagger + u, i(u^dagger - u), u u^dagger - u^dagger u)`` at ``d = 2``."""
    _require(config, Boundary.NONPERIODIC, "pauli_matrices")
    if config.d != 2:
        raise ConfigError(f"the Pauli construction needs d = 2, got d = {config.d}")
    u = build_shift_nonperiodic(config, Direction.LEFT).entries
    ud = build_shift_nonperiodic(config, Direction.RIGHT).entries
    return ud + u, 1j * (ud - u), u @ ud - ud @ u


_LEVI_CIVITA = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
                (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}


def verify_pauli(config, tol=None) -> VerificationReport:
    """Two-site truncated shifts generate the Pauli algebra.

    With ``u = u-`` the third generator comes out as ``diag(1, -1)``.
    """
    tol = default_tolerance() if tol is None else tol
    sigma = pauli_matrices(config)
    eye = np.eye(2)
    rep = VerificationReport(_summary(config), tol=tol)
    rep._add("pauli_square", "sigma_i^2 = 1", [_dev(s @ s, eye) for s in sigma], exact=True)
    rep._add("pauli_product", "sigma_i sigma_j = delta_ij + i eps_ijk sigma_k",
             [_dev(sigma[i] @ sigma[j],
                   (eye if i == j else 0) + sum(1j * _LEVI_CIVITA.get((i, j, k), 0) * sigma[k]
                                                for k in range(3)))
              for i in range(3) for j in range(3)], exact=True)
    rep._add("pauli_anticommutator", "{sigma_i, sigma_j} = 2 delta_ij",
             [_dev(sigma[i] @ sigma[j] + sigma[j] @ sigma[i], 2 * eye * (i == j))
              for i in range(3) for j in range(3)], exact=True)
    rep._add("pauli_triple_product", "sigma_1 sigma_2 sigma_3 = i",
             [_dev(sigma[0] @ sigma[1] @ sigma[2], 1j * eye)], exact=True)
    rep._add("pauli_standard_form", "sigma_3 = diag(1, -1)",
             [_dev(sigma[2], np.diag([1.0, -1.0]))], exact=True)
    return rep


SUITES = ("algebra", "projections", "weyl", "pauli")


def run_suite(config, suite="all", tol=None) -> VerificationReport:
    """Run the named suite(s) that apply to ``config.boundary``.

    ``suite="all"`` selects every suite valid for the boundary kind; the
    Pauli suite joins only at ``d = 2``.
    """
    if suite == "all":
        if config.periodic:
            names = ["weyl"]
        else:
            names = ["algebra", "projections"] + (["pauli"] if config.d == 2 else [])
    else:
        names = [suite]
    runners = {
        "algebra": verify_translation_algebra,
        "projections": verify_projection_lattice,
        "weyl": verify_weyl_pair,
        "pauli": verify_pauli,
    }
    report = VerificationReport(_summary(config), tol=default_tolerance() if tol is None else tol)
    for name in names:
        if name not in runners:
            raise ConfigError(f"unknown suite {name!r}")
        report.extend(runners[name](config, tol=report.tol))
    return report
