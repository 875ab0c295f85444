"""Command-line front end.

Subcommands map one-to-one onto the library operations: ``decompose``,
``mfdm``, ``tfe``, ``marginal``, ``energy``, and ``generate``. Input is
either a CSV file (header row mandatory; a leading ``t`` column fixes
the clock, otherwise --fs must be given) or an inline generator recipe
``gen:{...json...}``. Every run writes its tables plus a
``summary.json`` into --out. Floats are printed with repr, the
shortest string that round-trips, so a rerun with --no-timestamp is
byte-identical and re-ingesting an output CSV reproduces the samples
exactly.

Exit codes: 0 success, 2 bad input or parameters, 3 internal contract
violation, 4 filesystem trouble.
"""

import argparse
import csv
import json
import logging
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import _kernels
from .errors import ContractError, IngestionError, InputError, ParameterError
from .fdm import FdmConfig, ScanDirection, SearchMode, decompose
from .mfdm import CutoffSchedule, MultichannelSignal, cutoff_schedule, mfdm_decompose
from .siggen import GeneratorSpec, generate
from .spectral import Signal
from .tfe import fhs, instantaneous_energy, marginal_spectrum, rasterize

log = logging.getLogger("fdmkit.cli")

SCHEMA_VERSION = 1
_REL_TOL = 1e-6


# ---------------------------------------------------------------------------
# ingestion
# ---------------------------------------------------------------------------

def ingest_csv(path: str, sample_rate_hz: float | None = None):
    """Read a record from CSV.

    The first row must be a header. A first column named ``t`` supplies
    sample times, which must be uniform to within a 1e-6 relative
    tolerance; the sample rate is then 1 / dt and a --fs flag, if also
    given, must agree to the same tolerance. Without a ``t`` column the
    sample rate must come from the caller. Every other column is one
    channel. Error messages cite 1-based file rows, header included.
    """
    with open(path, newline="") as fh:
        raw = [(i, row) for i, row in enumerate(csv.reader(fh), start=1)]
    rows = [(i, row) for i, row in raw
            if row and any(cell.strip() != "" for cell in row)]
    if not rows:
        raise IngestionError(f"{path}: file holds no rows")

    header_row, header = rows[0]
    header = [c.strip() for c in header]
    numeric_header = True
    for cell in header:
        try:
            float(cell)
        except ValueError:
            numeric_header = False
            break
    if numeric_header:
        raise IngestionError(
            f"row {header_row}: looks like data; a header row is required"
        )
    ncol = len(header)

    data_rows = rows[1:]
    if len(data_rows) < 2:
        raise IngestionError(f"{path}: need at least 2 data rows")

    values = np.empty((len(data_rows), ncol))
    for j, (rownum, row) in enumerate(data_rows):
        if len(row) != ncol:
            raise IngestionError(
                f"row {rownum}: expected {ncol} columns, found {len(row)}"
            )
        for k, cell in enumerate(row):
            try:
                values[j, k] = float(cell)
            except ValueError:
                raise IngestionError(
                    f"row {rownum}, column {header[k]!r}: "
                    f"could not parse {cell.strip()!r} as a number"
                ) from None

    for k, name in enumerate(header):
        bad = np.flatnonzero(~np.isfinite(values[:, k]))
        if bad.size:
            rownum = data_rows[bad[0]][0]
            raise IngestionError(
                f"row {rownum}, column {name!r}: non-finite value"
            )

    start_time = 0.0
    if header[0].lower() == "t":
        t = values[:, 0]
        dt = np.diff(t)
        if dt[0] <= 0:
            raise IngestionError(
                f"row {data_rows[1][0]}: time must increase, step is {dt[0]}"
            )
        off = np.flatnonzero(np.abs(dt - dt[0]) > _REL_TOL * abs(dt[0]))
        if off.size:
            rownum = data_rows[off[0] + 1][0]
            raise IngestionError(
                f"row {rownum}: time step {dt[off[0]]!r} deviates from "
                f"{dt[0]!r} by more than {_REL_TOL:g} relative"
            )
        fs = 1.0 / dt[0]
        if sample_rate_hz is not None and \
                abs(sample_rate_hz - fs) > _REL_TOL * fs:
            raise ParameterError(
                f"--fs {sample_rate_hz} disagrees with the t column "
                f"({fs} Hz inferred)"
            )
        start_time = float(t[0])
        channels = [values[:, k] for k in range(1, ncol)]
        if not channels:
            raise IngestionError(f"{path}: only a t column, no data columns")
    else:
        if sample_rate_hz is None:
            raise ParameterError(
                "--fs is required when the CSV has no t column"
            )
        fs = sample_rate_hz
        channels = [values[:, k] for k in range(ncol)]

    signals = tuple(Signal(c, fs, start_time) for c in channels)
    return signals[0] if len(signals) == 1 else MultichannelSignal(signals)


def _load_input(args):
    """--input is either a CSV path or an inline gen:{...} recipe."""
    raw = args.input
    if not raw.startswith("gen:"):
        return ingest_csv(raw, args.fs)
    try:
        recipe = json.loads(raw[4:])
    except json.JSONDecodeError as e:
        raise ParameterError(f"bad generator JSON: {e}") from None
    if not isinstance(recipe, dict):
        raise ParameterError("generator recipe must be a JSON object")
    known = {"kind", "n", "sample_rate_hz", "seed", "params"}
    extra = set(recipe) - known
    if extra:
        raise ParameterError(
            f"unknown generator recipe keys: {', '.join(sorted(extra))}"
        )
    kind = recipe.get("kind")
    n = recipe.get("n")
    if kind is None or n is None:
        raise ParameterError("generator recipe needs 'kind' and 'n'")
    fs = recipe.get("sample_rate_hz")
    if fs is None:
        fs = args.fs
    elif args.fs is not None and abs(args.fs - fs) > _REL_TOL * abs(fs):
        raise ParameterError(
            f"--fs {args.fs} disagrees with recipe sample_rate_hz {fs}"
        )
    if fs is None:
        raise ParameterError(
            "sample rate missing: set --fs or recipe key 'sample_rate_hz'"
        )
    seed = args.seed if args.seed is not None else recipe.get("seed")
    spec = GeneratorSpec(kind=str(kind), n=int(n), sample_rate_hz=float(fs),
                         seed=seed, params=recipe.get("params", {}))
    return generate(spec)


def _single_channel(data, command: str) -> Signal:
    if isinstance(data, MultichannelSignal):
        if data.n_channels == 1:
            return data.channels[0]
        raise ParameterError(
            f"{command} expects a single channel, got {data.n_channels}"
        )
    return data


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    return repr(float(v))


def _atomic_write(path: str, text: str):
    tmp = path + ".tmp"
    with open(tmp, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)
    log.info("wrote %s", path)


def _write_table(out_dir: str, stem: str, header: list, columns: list,
                 fmt: str) -> str:
    """Write named columns of equal length; returns the file name."""
    ncols = len(columns)
    nrows = columns[0].size if ncols else 0
    if fmt == "csv":
        lines = [",".join(header)]
        for i in range(nrows):
            lines.append(",".join(_fmt(columns[k][i]) for k in range(ncols)))
        name = stem + ".csv"
        _atomic_write(os.path.join(out_dir, name), "\n".join(lines) + "\n")
    else:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "columns": header,
            "rows": [[float(columns[k][i]) for k in range(ncols)]
                     for i in range(nrows)],
        }
        name = stem + ".json"
        _atomic_write(os.path.join(out_dir, name),
                      json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return name


def _write_summary(out_dir: str, payload: dict, args):
    doc = {"schema_version": SCHEMA_VERSION}
    doc.update(payload)
    if not args.no_timestamp:
        doc["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    _atomic_write(os.path.join(out_dir, "summary.json"),
                  json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _prepare_out(args) -> str:
    out = args.out
    os.makedirs(out, exist_ok=True)
    return out


def _times(n: int, fs: float, start: float) -> np.ndarray:
    return start + np.arange(n) / fs


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _fdm_config(args) -> FdmConfig:
    return FdmConfig(
        scan=ScanDirection(args.scan),
        search=SearchMode(args.search),
        monotonicity_tolerance=args.mono_tol,
        max_fibfs=args.max_fibfs,
    )


def _run_decomposition(args):
    signal = _single_channel(_load_input(args), "decompose")
    return signal, decompose(signal, _fdm_config(args))


def _decomposition_summary(result, command: str) -> dict:
    return {
        "command": command,
        "kernel_backend": _kernels.BACKEND,
        "n": result.n,
        "sample_rate_hz": result.sample_rate_hz,
        "start_time_s": result.start_time_s,
        "scan": result.scan.value,
        "dc": result.dc,
        "nyquist": result.nyquist,
        "n_fibfs": result.n_fibfs,
        "bin_ranges": [list(b.bin_range) for b in result.fibfs],
        "partition_ranges": [list(b.partition_range) for b in result.fibfs],
        "reconstruction_error": result.reconstruction_error,
        "non_monotone": list(result.non_monotone),
        "merged_tail": result.merged_tail,
    }


def cmd_decompose(args) -> int:
    signal, result = _run_decomposition(args)
    out = _prepare_out(args)
    t = _times(result.n, result.sample_rate_hz, result.start_time_s)
    header = ["t", "x"]
    columns = [t, signal.samples]
    for i, band in enumerate(result.fibfs, start=1):
        header += [f"y{i}", f"a{i}", f"f{i}"]
        columns += [band.fibf, band.amplitude, band.inst_freq_hz]
    _write_table(out, "decomposition", header, columns, args.format)
    _write_summary(out, _decomposition_summary(result, "decompose"), args)
    print(f"decompose: {result.n_fibfs} bands, reconstruction error "
          f"{result.reconstruction_error:.3e}, output in {out}")
    return 0


def cmd_mfdm(args) -> int:
    data = _load_input(args)
    if isinstance(data, Signal):
        data = MultichannelSignal((data,))
    if args.cutoffs is not None:
        if args.m is not None or args.levels is not None:
            raise ParameterError("--cutoffs excludes --m and --levels")
        try:
            cutoffs = tuple(float(c) for c in args.cutoffs.split(","))
        except ValueError:
            raise ParameterError(
                f"--cutoffs must be comma-separated numbers, got {args.cutoffs!r}"
            ) from None
        schedule = CutoffSchedule(cutoffs, data.sample_rate_hz)
    else:
        m = 1.5 if args.m is None else args.m
        levels = 4 if args.levels is None else args.levels
        schedule = cutoff_schedule(data.sample_rate_hz, m, levels)

    result = mfdm_decompose(data, schedule)
    out = _prepare_out(args)
    t = _times(result.n, result.sample_rate_hz, result.start_time_s)
    for p in range(result.n_channels):
        header = ["t", "x"]
        columns = [t, data.channels[p].samples]
        for i in range(result.n_levels):
            header.append(f"band{i + 1}")
            columns.append(result.bands[i][p])
        header.append("residue")
        columns.append(result.residue[p])
        _write_table(out, f"mfdm_ch{p + 1}", header, columns, args.format)
    _write_summary(out, {
        "command": "mfdm",
        "n": result.n,
        "n_channels": result.n_channels,
        "sample_rate_hz": result.sample_rate_hz,
        "start_time_s": result.start_time_s,
        "cutoffs_hz": list(schedule.cutoffs_hz),
        "m": schedule.m,
        "levels": schedule.levels,
        "variant": result.variant,
    }, args)
    print(f"mfdm: {result.n_levels} levels x {result.n_channels} channels, "
          f"output in {out}")
    return 0


def cmd_tfe(args) -> int:
    if not (args.freq_bin > 0):
        raise ParameterError(f"--freq-bin must be > 0, got {args.freq_bin}")
    signal, result = _run_decomposition(args)
    points = fhs(result)
    out = _prepare_out(args)
    _write_table(out, "tfe_points", ["t", "f", "a", "fibf"],
                 [points.times_s, points.freqs_hz, points.amplitudes,
                  points.fibf_index.astype(np.float64)], args.format)

    t_axis = _times(result.n, result.sample_rate_hz, result.start_time_s)
    df = args.freq_bin
    n_f = int(np.floor(result.sample_rate_hz / 2.0 / df)) + 1
    f_axis = np.arange(n_f) * df
    grid = rasterize(points, t_axis, f_axis, mode=args.mode)
    header = ["f_hz"] + [_fmt(tv) for tv in t_axis]
    columns = [f_axis] + [grid.cells[:, j] for j in range(t_axis.size)]
    _write_table(out, "tfe_grid", header, columns, args.format)

    summary = _decomposition_summary(result, "tfe")
    summary.update({
        "freq_bin_hz": df,
        "mode": args.mode,
        "n_points": points.n_points,
        "clamped_negative": points.clamped_negative,
    })
    _write_summary(out, summary, args)
    print(f"tfe: {points.n_points} points on a {f_axis.size}x{t_axis.size} "
          f"grid, output in {out}")
    return 0


def cmd_marginal(args) -> int:
    signal, result = _run_decomposition(args)
    points = fhs(result)
    freqs, h = marginal_spectrum(points, args.freq_bin)
    out = _prepare_out(args)
    _write_table(out, "marginal", ["f_hz", "h"], [freqs, h], args.format)
    summary = _decomposition_summary(result, "marginal")
    summary.update({"freq_bin_hz": args.freq_bin, "n_bins": int(freqs.size)})
    _write_summary(out, summary, args)
    print(f"marginal: {freqs.size} bins, output in {out}")
    return 0


def cmd_energy(args) -> int:
    signal, result = _run_decomposition(args)
    e = instantaneous_energy(result)
    out = _prepare_out(args)
    t = _times(result.n, result.sample_rate_hz, result.start_time_s)
    _write_table(out, "energy", ["t", "energy"], [t, e], args.format)
    _write_summary(out, _decomposition_summary(result, "energy"), args)
    print(f"energy: {e.size} samples, output in {out}")
    return 0


def cmd_generate(args) -> int:
    data = _load_input(args)
    out = _prepare_out(args)
    if isinstance(data, MultichannelSignal):
        t = _times(data.n, data.sample_rate_hz, data.start_time_s)
        header = ["t"] + [f"ch{p + 1}" for p in range(data.n_channels)]
        columns = [t] + [ch.samples for ch in data.channels]
        n_channels = data.n_channels
    else:
        t = _times(data.n, data.sample_rate_hz, data.start_time_s)
        header = ["t", "x"]
        columns = [t, data.samples]
        n_channels = 1
    _write_table(out, "signal", header, columns, args.format)
    _write_summary(out, {
        "command": "generate",
        "n": int(t.size),
        "n_channels": n_channels,
        "sample_rate_hz": data.sample_rate_hz,
        "start_time_s": data.start_time_s,
        "seed": args.seed,
    }, args)
    print(f"generate: {t.size} samples x {n_channels} channels, "
          f"output in {out}")
    return 0


# ---------------------------------------------------------------------------
# parser and entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fdmkit",
        description="Fourier intrinsic band decomposition of sampled records",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    io = argparse.ArgumentParser(add_help=False)
    io.add_argument("--input", required=True,
                    help="CSV path, or gen:{json} generator recipe")
    io.add_argument("--fs", type=float, default=None,
                    help="sample rate in Hz (required if the input has no clock)")
    io.add_argument("--out", default=".", help="output directory")
    io.add_argument("--format", choices=("csv", "json"), default="csv",
                    help="table file format")
    io.add_argument("--seed", type=int, default=None,
                    help="RNG seed for generator inputs")
    io.add_argument("--no-timestamp", action="store_true",
                    help="omit the timestamp from summary.json")

    fdm = argparse.ArgumentParser(add_help=False)
    fdm.add_argument("--scan", choices=("lth", "htl"), default="lth",
                     help="band scan direction")
    fdm.add_argument("--search", choices=("max", "first"), default="max",
                     help="boundary search mode")
    fdm.add_argument("--mono-tol", type=float, default=0.0,
                     help="phase-increment tolerance in radians")
    fdm.add_argument("--max-fibfs", type=int, default=None,
                     help="cap on emitted bands; the tail is merged")

    binned = argparse.ArgumentParser(add_help=False)
    binned.add_argument("--freq-bin", type=float, default=1.0,
                        help="frequency bin width in Hz")

    p = sub.add_parser("decompose", parents=[io, fdm],
                       help="split a record into intrinsic bands")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("mfdm", parents=[io],
                       help="zero-phase filter bank over all channels")
    p.add_argument("--m", type=float, default=None,
                   help="cutoff ladder shape parameter (> 1/2)")
    p.add_argument("--levels", type=int, default=None,
                   help="number of ladder levels")
    p.add_argument("--cutoffs", default=None,
                   help="explicit comma-separated cutoffs in Hz, high to low")
    p.set_defaults(func=cmd_mfdm)

    p = sub.add_parser("tfe", parents=[io, fdm, binned],
                       help="time-frequency point set and grid")
    p.add_argument("--mode", choices=("amplitude", "energy"), default="energy",
                   help="grid cell statistic")
    p.set_defaults(func=cmd_tfe)

    p = sub.add_parser("marginal", parents=[io, fdm, binned],
                       help="frequency marginal of the point set")
    p.set_defaults(func=cmd_marginal)

    p = sub.add_parser("energy", parents=[io, fdm],
                       help="instantaneous energy trace")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("generate", parents=[io],
                       help="write a generated or re-read record as a table")
    p.set_defaults(func=cmd_generate)

    return parser


def _setup_logging():
    level_name = os.environ.get("FDMKIT_LOG", "").strip()
    if not level_name:
        return
    level = getattr(logging, level_name.upper(), None)
    if not isinstance(level, int):
        level = logging.INFO
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ContractError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return 3
    except OSError as e:
        print(f"file error: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
