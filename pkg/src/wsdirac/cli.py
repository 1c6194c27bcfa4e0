"""Command-line front end.

    wsdirac <command> --config PATH [--out PATH] [--pekeris paper|taylor]
                      [--format csv|json] [--workers N]

Commands: spectrum, swave-table, wavefunction, verify, pekeris.  Exit
status 0 on success, 2 on configuration errors, 3 on numerical failures.
The log level comes from ``WSDIRAC_LOG`` (error, warn, info, debug).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Any, Iterable, Sequence

import numpy as np

from .config import RunConfig, parse_config
from .errors import ConfigError, NumericError, ParseError, ValidationError, WsDiracError
from .oracle import verify_spectrum
from .potential import (
    PekerisSource,
    PotentialParams,
    matching_residuals,
    pekeris_coefficients,
    pekeris_discrepancy,
)
from .spectra import Kind, QuantumNumbers, spectrum_table, swave_energy_roots
from .wavefunctions import (
    domain_start,
    lower_spinor_G,
    make_state,
    quadrature_cutoff,
    upper_spinor_F,
)

log = logging.getLogger("wsdirac")

COMMANDS = ("spectrum", "swave-table", "wavefunction", "verify", "pekeris")

SCHEMAS = {
    "spectrum": "wsdirac.spectrum/1",
    "swave-table": "wsdirac.swave-table/1",
    "wavefunction": "wsdirac.wavefunction/1",
    "verify": "wsdirac.verify/1",
    "pekeris": "wsdirac.pekeris/1",
}

SPECTRUM_COLUMNS = (
    "n", "kappa", "omega", "E1", "E2", "eps1", "eps2",
    "eps_pos1", "eps_pos2", "presquare1", "presquare2",
    "window1", "window2", "physical", "error",
)
WAVEFUNCTION_COLUMNS = ("r", "F", "G")
VERIFY_COLUMNS = (
    "n", "kappa", "root", "E_closed", "E_oracle", "abs_delta", "rel_delta",
    "nodes", "nodes_ok", "presquare_consistent", "bracket_rel", "error",
)
PEKERIS_COLUMNS = (
    "alpha", "q", "x_lo", "x_hi", "source", "D0", "D1", "D2",
    "sup_rel_error", "argmax_x", "residual0", "residual1", "residual2",
    "D1_collapsed", "identical_factors",
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


# -- formatting ------------------------------------------------------------


def fmt(v: Any, digits: int = 9) -> str:
    """CSV cell text: 9 significant digits for floats, lowercase booleans."""
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    return f"{v:.{digits}g}"


def fixed6(v: float | None) -> str:
    return "" if v is None else f"{v:.6f}"


def jsonable(v: Any, digits: int = 9) -> Any:
    """Round floats to ``digits`` significant digits for JSON output."""
    if isinstance(v, dict):
        return {k: jsonable(x, digits) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x, digits) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if not math.isfinite(v) else float(f"{v:.{digits}g}")
    return v


def write_csv(schema: str, columns: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buf = io.StringIO()
    buf.write(f"# schema: {schema}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def write_json(schema: str, payload: dict) -> str:
    doc = {"schema": schema}
    doc.update(payload)
    return json.dumps(jsonable(doc), indent=2, sort_keys=False, allow_nan=True) + "\n"


# -- commands --------------------------------------------------------------


def _coefficients(p: PotentialParams, source: PekerisSource, omegas: Iterable[int]):
    """Pekeris coefficients when some omega is nonzero, else None."""
    if not any(omegas):
        return p, None
    p = p.with_radius()
    if source is PekerisSource.TAYLOR:
        return p, None  # solvers derive and validate the matched set per cell
    return p, pekeris_coefficients(p, source)


def _omegas(cfg: RunConfig) -> list[int]:
    qn = [QuantumNumbers(0, k) for k in cfg.quantum.kappa_list]
    return [q.omega if cfg.symmetry.kind is Kind.SPIN else q.omega_tilde for q in qn]


def cmd_spectrum(cfg: RunConfig, source: PekerisSource, fmt_name: str, workers: int) -> str:
    p, d = _coefficients(cfg.potential, source, _omegas(cfg))
    rows = spectrum_table(p, cfg.symmetry, cfg.quantum.n_max, cfg.quantum.kappa_list, d, workers)
    records = []
    for row in rows:
        rec = dict.fromkeys(SPECTRUM_COLUMNS)
        rec.update(n=row.n, kappa=row.kappa, omega=row.omega, error=row.error)
        sol = row.solution
        if sol is not None:
            for i, r in enumerate(sol.roots[:2], start=1):
                rec[f"E{i}"] = r.E
                rec[f"eps{i}"] = r.epsilon
                rec[f"eps_pos{i}"] = r.epsilon_positive
                rec[f"presquare{i}"] = r.presquare_consistent
                rec[f"window{i}"] = r.bound_window
            rec["physical"] = None if sol.physical is None else sol.physical + 1
        records.append(rec)
    schema = SCHEMAS["spectrum"]
    if fmt_name == "json":
        return write_json(schema, {
            "R0": p.R0, "pekeris_source": source.value, "columns": list(SPECTRUM_COLUMNS),
            "rows": records,
        })
    return write_csv(schema, SPECTRUM_COLUMNS, ([fmt(r[c]) for c in SPECTRUM_COLUMNS] for r in records))


def _q_label(q: float) -> str:
    return f"q{q:g}"


def cmd_swave_table(cfg: RunConfig, fmt_name: str) -> str:
    qs = cfg.swave_table.q_values
    columns = ["n"] + [f"E{i}_{_q_label(q)}" for q in qs for i in (1, 2)]
    sym = cfg.symmetry
    grid = []
    for n in range(cfg.quantum.n_max + 1):
        row: dict[str, Any] = {"n": n}
        for q in qs:
            p = replace(cfg.potential, q=q)
            try:
                sol = swave_energy_roots(p, n, sym.A, sym.mass)
                E = sol.energies
            except NumericError as exc:
                log.warning("n=%d q=%g: %s", n, q, exc)
                E = (None, None)
            row[f"E1_{_q_label(q)}"] = E[0]
            row[f"E2_{_q_label(q)}"] = E[1] if len(E) > 1 else None
        grid.append(row)
    schema = SCHEMAS["swave-table"]
    if fmt_name == "json":
        rounded = [{k: (v if k == "n" or v is None else round(v, 6)) for k, v in r.items()} for r in grid]
        return write_json(schema, {"q_values": list(qs), "columns": columns, "rows": rounded})
    return write_csv(
        schema, columns,
        ([str(r["n"])] + [fixed6(r[c]) for c in columns[1:]] for r in grid),
    )


def cmd_wavefunction(cfg: RunConfig, source: PekerisSource, fmt_name: str) -> str:
    spec = cfg.wavefunction
    if spec is None:
        raise ValidationError("/wavefunction", "section required for the wavefunction command")
    qn = QuantumNumbers(spec.n, spec.kappa)
    omega = qn.omega if cfg.symmetry.kind is Kind.SPIN else qn.omega_tilde
    p, d = _coefficients(cfg.potential.with_radius(), source, [omega])
    norm = None if spec.normalize == "none" else spec.normalize
    s = make_state(p, qn, cfg.symmetry, d=d, root=spec.root, normalize=norm)
    lo = spec.r_min if spec.r_min is not None else domain_start(s) + 0.01 * p.a
    hi = spec.r_max if spec.r_max is not None else quadrature_cutoff(s)
    r = np.linspace(lo, hi, spec.points)
    F = upper_spinor_F(s, r)
    G = lower_spinor_G(s, r)
    schema = SCHEMAS["wavefunction"]
    meta = {
        "n": qn.n, "kappa": qn.kappa, "kind": s.sym.kind.value, "E": s.E,
        "epsilon": s.epsilon, "xi": s.xi, "norm_constant": s.norm_constant, "R0": p.R0,
    }
    if fmt_name == "json":
        return write_json(schema, {"state": meta, "columns": list(WAVEFUNCTION_COLUMNS),
                                   "rows": [[a, b, c] for a, b, c in zip(r, F, G)]})
    return write_csv(schema, WAVEFUNCTION_COLUMNS, ([fmt(a), fmt(b), fmt(c)] for a, b, c in zip(r, F, G)))


def cmd_verify(cfg: RunConfig, source: PekerisSource, fmt_name: str, workers: int) -> str:
    p, d = _coefficients(cfg.potential.with_radius(), source, _omegas(cfg))
    o = cfg.oracle
    states = [QuantumNumbers(n, k) for n in range(cfg.quantum.n_max + 1)
              for k in sorted(cfg.quantum.kappa_list)]

    def run(qn):
        return verify_spectrum(p, cfg.symmetry, qn, d, rel=o.bracket_rel,
                               max_rel=o.bracket_max_rel, rtol=o.rtol, r_max=o.r_max)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            reports = list(ex.map(run, states))
    else:
        reports = [run(qn) for qn in states]
    schema = SCHEMAS["verify"]
    if fmt_name == "json":
        return write_json(schema, {
            "R0": p.R0, "q": p.q, "kind": cfg.symmetry.kind.value, "pekeris_source": source.value,
            "states": [
                {"n": qn.n, "kappa": qn.kappa, "closed_form_error": rep.closed_form_error,
                 "rows": rep.to_dict()["rows"]}
                for qn, rep in zip(states, reports)
            ],
        })
    lines = []
    for qn, rep in zip(states, reports):
        if rep.closed_form_error:
            lines.append([str(qn.n), str(qn.kappa)] + [""] * 9 + [rep.closed_form_error])
        for row in rep.rows:
            lines.append([fmt(getattr(row, c)) for c in VERIFY_COLUMNS])
    return write_csv(schema, VERIFY_COLUMNS, lines)


def cmd_pekeris(cfg: RunConfig, fmt_name: str) -> str:
    spec = cfg.pekeris
    base = cfg.potential
    if spec.alpha_values is not None:
        params = [replace(base, R0=al * base.a) for al in spec.alpha_values]
    else:
        params = [base.with_radius()]
    records = []
    for p in params:
        rep = pekeris_discrepancy(p, spec.x_lo, spec.x_hi)
        for name in ("taylor", "paper"):
            d = rep[name]
            err = rep[f"{name}_error"]
            res = rep["paper_residuals"] if name == "paper" else matching_residuals(p, d)
            rec = {
                "alpha": rep["alpha"], "q": rep["q"], "x_lo": spec.x_lo, "x_hi": spec.x_hi,
                "source": name, "D0": d.D0, "D1": d.D1, "D2": d.D2,
                "sup_rel_error": err.sup_rel_error, "argmax_x": err.argmax_x,
                "residual0": res[0], "residual1": res[1], "residual2": res[2],
                "D1_collapsed": rep["paper_D1_collapsed"] if name == "paper" else None,
                "identical_factors": rep["paper_D1_identical_factors"] if name == "paper" else None,
            }
            records.append(rec)
    schema = SCHEMAS["pekeris"]
    if fmt_name == "json":
        return write_json(schema, {"columns": list(PEKERIS_COLUMNS), "rows": records})
    return write_csv(schema, PEKERIS_COLUMNS, ([fmt(r[c]) for c in PEKERIS_COLUMNS] for r in records))


# -- entry point -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wsdirac",
        description="Dirac bound states in the generalized Woods-Saxon well.",
    )
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", required=True, help="JSON run configuration")
    ap.add_argument("--out", help="output file (default: config output.path or stdout)")
    ap.add_argument("--pekeris", choices=[s.value for s in PekerisSource],
                    help="centrifugal coefficient set (default: config, else taylor)")
    ap.add_argument("--format", choices=("csv", "json"), dest="fmt",
                    help="output format (default: config, else json for verify, csv otherwise)")
    ap.add_argument("--workers", type=int, default=1, help="worker threads (results are order-stable)")
    return ap


def _setup_logging():
    level = LOG_LEVELS.get(os.environ.get("WSDIRAC_LOG", "warn").lower(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    logging.captureWarnings(True)


def run_command(cmd: str, cfg: RunConfig, source: PekerisSource | None = None,
                fmt_name: str | None = None, workers: int = 1) -> str:
    """Run one command and return the artifact text."""
    source = cfg.pekeris_source if source is None else PekerisSource(source)
    fmt_name = fmt_name or cfg.output.format or ("json" if cmd == "verify" else "csv")
    if workers < 1:
        raise ValidationError("/workers", "must be >= 1")
    if cmd == "spectrum":
        return cmd_spectrum(cfg, source, fmt_name, workers)
    if cmd == "swave-table":
        return cmd_swave_table(cfg, fmt_name)
    if cmd == "wavefunction":
        return cmd_wavefunction(cfg, source, fmt_name)
    if cmd == "verify":
        return cmd_verify(cfg, source, fmt_name, workers)
    if cmd == "pekeris":
        return cmd_pekeris(cfg, fmt_name)
    raise ValidationError("/command", f"unknown command {cmd!r}")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _setup_logging()
    try:
        try:
            with open(args.config, "rb") as fh:
                raw = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read config: {exc}") from exc
        cfg = parse_config(raw)
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            text = run_command(args.command, cfg, args.pekeris, args.fmt, args.workers)
        path = args.out or cfg.output.path
        if path:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            log.info("wrote %s", path)
        else:
            sys.stdout.write(text)
    except ConfigError as exc:
        print(f"wsdirac: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericError, WsDiracError) as exc:
        print(f"wsdirac: numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
