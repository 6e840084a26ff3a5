"""JSON and CSV emission for reports and spectra.

CSV uses ``,`` separators and ``.`` decimals regardless of locale; floats are
written in shortest round-trip form so they read back bit-for-bit.  Lines
starting with ``#`` are comments (metadata header, footer records).
"""

import csv
import io
import json

from .continuum import ConvergenceReport, ExpansionReport

SPECTRUM_COLUMNS = ["m", "parity", "energy", "degeneracy"]
WAVEFUNCTION_COLUMNS = ["n", "x", "psi"]
CONVERGENCE_COLUMNS = ["d", "a", "E_discrete", "E_limit", "rel_error"]
EXPANSION_COLUMNS = ["d", "a", "P_lattice", "p", "deviation", "scaled_remainder"]


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dumps_json(payload) -> str:
    return json.dumps(payload, indent=2, allow_nan=True) + "\n"


def _write(header_lines, columns, rows, footer_lines=()):
    buf = io.StringIO()
    for line in header_lines:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    for line in footer_lines:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def _read(text):
    """Return (comment lines, header, rows as dicts of strings)."""
    comments, body = [], []
    for line in text.splitlines():
        if line.startswith("#"):
            comments.append(line[1:].strip())
        elif line.strip():
            body.append(line)
    reader = csv.reader(body)
    header = next(reader)
    return comments, header, [dict(zip(header, row)) for row in reader]


def spectrum_csv(eigen, vectors=False, header=()):
    degeneracies = eigen.degeneracies()
    columns = list(SPECTRUM_COLUMNS)
    if vectors:
        columns += [f"v{n}" for n in range(eigen.config.d)]
    rows = []
    for entry, deg in zip(eigen.entries, degeneracies):
        row = [entry.m, entry.parity.value, float(entry.energy), deg]
        if vectors:
            row += [float(x) for x in entry.vector]
        rows.append(row)
    return _write(header, columns, rows)


def read_spectrum_csv(text):
    _, header, rows = _read(text)
    out = []
    for row in rows:
        item = {"m": int(row["m"]), "parity": row["parity"], "energy": float(row["energy"]),
                "degeneracy": int(row["degeneracy"])}
        vec = [float(row[c]) for c in header if c.startswith("v")]
        if vec:
            item["vector"] = vec
        out.append(item)
    return out


def wavefunction_csv(wf, header=()):
    rows = [[int(n), float(x), float(p)] for n, x, p in zip(wf.sites, wf.x, wf.psi)]
    return _write(header, WAVEFUNCTION_COLUMNS, rows)


def read_wavefunction_csv(text):
    _, _, rows = _read(text)
    return [{"n": int(r["n"]), "x": float(r["x"]), "psi": float(r["psi"])} for r in rows]


def convergence_csv(report, header=()):
    rows = [[r[c] for c in CONVERGENCE_COLUMNS] for r in report.rows]
    footer = [f"exponent,{fmt(report.exponent)}"]
    return _write(header, CONVERGENCE_COLUMNS, rows, footer)


def read_convergence_csv(text, boundary, m, L=1.0, M=1.0, hbar=1.0):
    comments, _, rows = _read(text)
    exponent = None
    for line in comments:
        if line.startswith("exponent,"):
            raw = line.split(",", 1)[1]
            exponent = float(raw) if raw else None
    parsed = [{"d": int(r["d"]), **{c: float(r[c]) for c in CONVERGENCE_COLUMNS[1:]}} for r in rows]
    return ConvergenceReport(boundary, m, L, M, hbar, parsed, exponent)


def expansion_csv(report, header=()):
    rows = [[r[c] for c in EXPANSION_COLUMNS] for r in report.rows]
    footer = ["ratios," + ",".join(fmt(x) for x in report.ratios)]
    return _write(header, EXPANSION_COLUMNS, rows, footer)


def read_expansion_csv(text, mode, L=1.0, hbar=1.0):
    _, _, rows = _read(text)
    parsed = [{"d": int(r["d"]), **{c: float(r[c]) for c in EXPANSION_COLUMNS[1:]}} for r in rows]
    return ExpansionReport(mode, L, hbar, parsed)


def verification_csv(report, header=()):
    rows = [[c.name, c.relation, c.max_dev, c.passed, c.cases] for c in report.checks]
    return _write(header, ["name", "relation", "max_dev", "pass", "cases"], rows)
