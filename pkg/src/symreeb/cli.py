"""Command-line front end.

Subcommands: ``chord-index``, ``iterate``, ``jump-search``,
``convexity-check``, ``ss-pages`` and ``expected-hw``. Settings come from a
versioned JSON config (``--config``) and command-line overrides; reports are
written as JSON (canonical), CSV or an aligned table.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .errors import ConfigError, SymreebError
from .symplin import HalfInt

SCHEMA_VERSION = 1
COMMANDS = ("chord-index", "iterate", "jump-search", "convexity-check", "ss-pages", "expected-hw")
FORMATS = ("json", "csv", "table")
WORKERS_ENV = "SYMREEB_WORKERS"

log = logging.getLogger("symreeb")


@dataclass
class RunConfig:
    command: str
    model: Any = None
    tolerances: Dict[str, float] = field(default_factory=dict)
    ell_max: int = 10
    K_max: Optional[int] = None
    m_max: int = 1000
    N: int = 20
    N_grid: int = 1024
    T_scan: Optional[float] = None
    r_max: int = 10
    n: Optional[int] = None
    complex: Any = None
    fixture: Optional[str] = None
    spectrum: Optional[list] = None
    relative_homology: Optional[Dict[str, int]] = None
    format: str = "json"
    output: Optional[str] = None
    workers: Optional[int] = None
    base_dir: str = "."

    _TOLERANCES = ("newton_tol", "dedup_tol", "singular_tol")

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}; expected one of {', '.join(COMMANDS)}")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}; expected one of {', '.join(FORMATS)}")
        for name in ("ell_max", "m_max", "N_grid", "r_max"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise ConfigError(f"{name} must be a positive integer, got {v!r}")
        if not isinstance(self.N, int) or self.N < 0:
            raise ConfigError(f"N must be a non-negative integer, got {self.N!r}")
        if self.K_max is not None and (not isinstance(self.K_max, int) or self.K_max < 1):
            raise ConfigError(f"K_max must be a positive integer, got {self.K_max!r}")
        if self.T_scan is not None and not (isinstance(self.T_scan, (int, float)) and self.T_scan > 0):
            raise ConfigError(f"T_scan must be positive, got {self.T_scan!r}")
        if self.workers is not None and (not isinstance(self.workers, int) or self.workers < 1):
            raise ConfigError(f"workers must be a positive integer, got {self.workers!r}")
        unknown = set(self.tolerances) - set(self._TOLERANCES)
        if unknown:
            raise ConfigError(f"unknown tolerance keys {sorted(unknown)}; allowed: {list(self._TOLERANCES)}")
        for k, v in self.tolerances.items():
            if not isinstance(v, (int, float)) or v <= 0:
                raise ConfigError(f"tolerance {k} must be positive")
        if self.output is not None:
            parent = Path(self.output).resolve().parent
            if not parent.is_dir() or not os.access(parent, os.W_OK):
                raise ConfigError(f"output directory {parent} is not writable")

    @property
    def worker_count(self) -> int:
        if self.workers is not None:
            return self.workers
        raw = os.environ.get(WORKERS_ENV)
        if raw is None:
            return 1
        try:
            w = int(raw)
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
        if w < 1:
            raise ConfigError(f"{WORKERS_ENV} must be positive")
        return w


_CONFIG_KEYS = {f.name for f in fields(RunConfig)} - {"base_dir"} | {"schema_version"}


def load_config(path: str) -> Dict[str, Any]:
    """Parse a JSON config file.

    Raises
    ------
    ConfigError
        With ``file:line:column`` for syntax errors, and for unreadable files,
        a wrong ``schema_version`` or unknown keys.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}:1:1: top level must be an object")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(f"{path}: schema_version must be {SCHEMA_VERSION}, got {data.get('schema_version')!r}")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    data = dict(data)
    data.pop("schema_version")
    data["base_dir"] = str(Path(path).resolve().parent)
    return data


# ---------------------------------------------------------------------------
# inputs


def _model(cfg: RunConfig):
    from .reeb import HypersurfaceModel

    m = cfg.model
    if m is None:
        raise ConfigError(f"{cfg.command} needs a model")
    try:
        if isinstance(m, str):
            return HypersurfaceModel.load(Path(cfg.base_dir, m))
        if isinstance(m, dict):
            return HypersurfaceModel.from_spec(m)
    except (OSError, KeyError, ValueError) as exc:
        if isinstance(exc, SymreebError):
            raise
        raise ConfigError(f"invalid model: {exc}") from None
    raise ConfigError("model must be a file path or an object")


def _chords(cfg: RunConfig, model):
    from .reeb import find_brake_chords

    kw = {k: v for k, v in cfg.tolerances.items()}
    res = find_brake_chords(model, T_scan=cfg.T_scan, workers=cfg.worker_count, **kw)
    chords = sorted(res.chords, key=lambda c: c.T)
    return chords, res


def _structure(cfg: RunConfig):
    from .homf2 import Z2ComplexStructure, fixtures

    if cfg.complex is not None:
        try:
            if isinstance(cfg.complex, str):
                return Z2ComplexStructure.load(Path(cfg.base_dir, cfg.complex))
            return Z2ComplexStructure.from_dict(cfg.complex)
        except (OSError, KeyError, ValueError) as exc:
            if isinstance(exc, SymreebError):
                raise
            raise ConfigError(f"invalid complex: {exc}") from None
    if cfg.fixture is not None:
        try:
            return fixtures.get(cfg.fixture, cfg.n if cfg.n is not None else 1)
        except KeyError as exc:
            raise ConfigError(str(exc.args[0])) from None
    raise ConfigError("ss-pages needs a complex, a fixture or a spectrum")


# ---------------------------------------------------------------------------
# commands; each returns (columns, rows, extra)


def cmd_chord_index(cfg: RunConfig):
    from .reeb import chord_indices, chord_path

    model = _model(cfg)
    chords, res = _chords(cfg, model)
    rows = []
    for i, ch in enumerate(chords, start=1):
        label = f"c{i}"
        idx = chord_indices(model, ch, N_grid=cfg.N_grid, cp=chord_path(model, ch, label))
        rows.append([label, ch.T, idx.mu_I, idx.mu_minus_I, idx.route])
    extra = {"degenerate_families": [f.to_dict() for f in res.degenerate_families]}
    return ["chord", "T", "mu_I", "mu_minus_I", "route"], rows, extra


def cmd_iterate(cfg: RunConfig):
    from .iterate import mu_indices
    from .reeb import chord_path

    model = _model(cfg)
    chords, _ = _chords(cfg, model)
    rows = []
    for i, ch in enumerate(chords, start=1):
        cp = chord_path(model, ch, f"c{i}")
        for ell in range(1, cfg.ell_max + 1):
            r = mu_indices(cp, ell, N_grid=cfg.N_grid)
            rows.append([f"c{i}", ell, ell * ch.T, r.mu_I, r.mu_minus_I, r.mu_CZ_even, r.route])
    return ["chord", "ell", "T", "mu_I", "mu_minus_I", "mu_CZ", "route"], rows, {}


def cmd_jump_search(cfg: RunConfig):
    from .census import Chord, ChordSystem, _tables, jump_search, window_census
    from .reeb import chord_path

    model = _model(cfg)
    chords, _ = _chords(cfg, model)
    system = ChordSystem([Chord(f"c{i}", chord_path(model, ch, f"c{i}")) for i, ch in enumerate(chords, 1)],
                         model.n)
    tables = _tables(system, 2 * cfg.m_max + 1, {}, cfg.worker_count)
    vectors = jump_search(system, cfg.K_max, cfg.m_max, tables=tables)
    rows, warnings = [], []
    for v in vectors:
        rep = window_census(system, v, tables=tables)
        rows.append([v.K, ";".join(str(m) for m in v.m), rep.count, rep.verdict])
        warnings += [f"K={v.K}: {w}" for w in rep.warnings]
    return ["K", "m", "count", "verdict"], rows, {"warnings": warnings}


def cmd_convexity_check(cfg: RunConfig):
    from .reeb import dynamical_convexity_check

    model = _model(cfg)
    chords, _ = _chords(cfg, model)
    rep = dynamical_convexity_check(model, chords, ell_max=cfg.ell_max)
    rows = [[r["label"], r["T"], r["mu_I"], r["mu_minus_I"], r["strict_increase"], r["passed"]]
            for r in rep.chords]
    return (["chord", "T", "mu_I", "mu_minus_I", "strict_increase", "passed"], rows,
            {"passed": rep.passed, "violations": rep.violations})


def cmd_ss_pages(cfg: RunConfig):
    from .homf2 import ChordComponent, build_equivariant, morse_bott_e1, spectral_sequence

    cols = ["r", "p", "q", "dim"]
    if cfg.spectrum is not None:
        if cfg.n is None:
            raise ConfigError("a Morse-Bott spectrum needs n")
        try:
            spec = [(float(level["T"]), [ChordComponent(**c) for c in level["components"]])
                    for level in cfg.spectrum]
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid spectrum: {exc}") from None
        page = morse_bott_e1(spec, cfg.n)
        rows = [[1, p, q, d] for (p, q), d in sorted(page.dims.items())]
        return cols, rows, {"differentials_known": False}
    E = build_equivariant(_structure(cfg), cfg.N)
    pages = spectral_sequence(E, cfg.r_max)
    rows = [[pg.r, p, q, d] for pg in pages for (p, q), d in sorted(pg.dims.items())]
    extra = {
        "homology": {str(k): v for k, v in sorted(E.homology().items())},
        "stable_top": E.stable_top,
        "last_page": pages[-1].r,
    }
    return cols, rows, extra


def cmd_expected_hw(cfg: RunConfig):
    from .homf2 import expected_positive_hw

    if cfg.n is None:
        raise ConfigError("expected-hw needs n")
    if cfg.relative_homology is not None:
        try:
            rel = {int(k): int(v) for k, v in cfg.relative_homology.items()}
        except (TypeError, ValueError, AttributeError) as exc:
            raise ConfigError(f"invalid relative_homology: {exc}") from None
    else:
        rel = {cfg.n: 1}  # the ball
    out = expected_positive_hw(rel, cfg.n, cfg.N)
    rows = [[k, v] for k, v in out.items() if 1 <= k <= cfg.N]
    return ["degree", "dim"], rows, {"relative_homology": {str(k): v for k, v in sorted(rel.items())}}


DISPATCH = {
    "chord-index": cmd_chord_index,
    "iterate": cmd_iterate,
    "jump-search": cmd_jump_search,
    "convexity-check": cmd_convexity_check,
    "ss-pages": cmd_ss_pages,
    "expected-hw": cmd_expected_hw,
}


# ---------------------------------------------------------------------------
# output


def _json_cell(v) -> Any:
    if isinstance(v, HalfInt):
        return str(v)
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    return v


def _cell(v) -> str:
    v = _json_cell(v)
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(command: str, columns: Sequence[str], rows: List[list], extra: dict, fmt: str) -> str:
    if fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": command, "columns": list(columns),
               "rows": [[_json_cell(v) for v in r] for r in rows], **extra}
        return json.dumps(doc, indent=2) + "\n"
    cells = [[_cell(v) for v in r] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        w.writerows(cells)
        return buf.getvalue()
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip(),
             "  ".join("-" * w for w in widths)]
    lines += ["  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in cells]
    return "\n".join(lines) + "\n"


def run(cfg: RunConfig) -> str:
    """Validate, dispatch and render; returns the report text."""
    cfg.validate()
    columns, rows, extra = DISPATCH[cfg.command](cfg)
    return render(cfg.command, columns, rows, extra, cfg.format)


# ---------------------------------------------------------------------------
# argument parsing


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symreeb", description="Index computations for symmetric Reeb chords.")
    p.add_argument("command", choices=COMMANDS + ("run",),
                   help="subcommand; 'run' takes the command from the config file")
    p.add_argument("--config", help="JSON config file (schema_version %d)" % SCHEMA_VERSION)
    p.add_argument("--model", help="model JSON file")
    p.add_argument("--axes", type=float, nargs="+", help="use the ellipsoid with these axes")
    p.add_argument("--ell-max", type=int, dest="ell_max")
    p.add_argument("--K-max", type=int, dest="K_max")
    p.add_argument("--m-max", type=int, dest="m_max")
    p.add_argument("--N", type=int, dest="N", help="w-truncation for equivariant complexes")
    p.add_argument("--N-grid", type=int, dest="N_grid", help="grid size for the spectral route")
    p.add_argument("--T-scan", type=float, dest="T_scan", help="time window for the chord search")
    p.add_argument("--r-max", type=int, dest="r_max")
    p.add_argument("--n", type=int, dest="n")
    p.add_argument("--complex", help="Z_2-complex JSON file")
    p.add_argument("--fixture", help="built-in complex: point, twisted-point, two-point-swap, sphere, ball-relative")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--output", "-o", help="write the report here instead of stdout")
    p.add_argument("--workers", type=int, help=f"parallelism (default ${WORKERS_ENV} or 1)")
    p.add_argument("--verbose", "-v", action="store_true")
    return p


def build_config(args: argparse.Namespace) -> RunConfig:
    data: Dict[str, Any] = load_config(args.config) if args.config else {}
    if args.command != "run":
        data["command"] = args.command
    elif "command" not in data:
        raise ConfigError("'run' needs a config with a command")
    for key in ("model", "ell_max", "K_max", "m_max", "N", "N_grid", "T_scan", "r_max", "n", "complex",
                "fixture", "format", "output", "workers"):
        v = getattr(args, key)
        if v is not None:
            data[key] = v
    if args.model is not None:
        data["base_dir"] = "."
    if args.axes:
        data["model"] = {"family": "ellipsoid", "axes": args.axes}
    try:
        return RunConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def _emit_error(err: SymreebError) -> int:
    sys.stderr.write(json.dumps(err.to_dict()) + "\n")
    return err.exit_status


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = build_config(args)
        text = run(cfg)
    except SymreebError as err:
        return _emit_error(err)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
