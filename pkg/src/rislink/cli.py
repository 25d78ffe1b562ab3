"""Command-line front end: ``rislink {cases,sweeps,coverage,overhead}``.

Exit codes: 0 success, 2 configuration error, 3 non-finite numerical result.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import coverage as cv
from . import farfield as ff
from . import fieldsum as fs
from . import io
from .overhead import ssb_demand
from .scenario import ConfigError, load_overhead, load_scenario

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class NumericalError(RuntimeError):
    pass


def _out_dir(path) -> Path | None:
    if path is None:
        return None
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_metadata(out: Path, command: str, args: dict) -> None:
    meta = {
        "command": command,
        "arguments": args,
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    (out / "metadata.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def _check_finite(rows):
    for row in rows:
        for v in row:
            if isinstance(v, float) and not math.isfinite(v):
                raise NumericalError(f"non-finite value in row {row}")


def _emit(out, name, header, rows):
    _check_finite(rows)
    if out is None:
        sys.stdout.write(io.csv_text(header, rows))
    else:
        io.write_csv(out / name, header, rows)


def _select_cases(names):
    if not names:
        return list(ff.CASES.values())
    picked = []
    for token in names:
        for name in token.split(","):
            key = name.strip().upper()
            if key not in ff.CASES:
                raise ConfigError(f"unknown case {name.strip()!r}; expected one of {sorted(ff.CASES)}")
            picked.append(ff.CASES[key])
    return picked


# -- cases -------------------------------------------------------------------

CASE_HEADER = ["case", "frequency_hz", "d1_m", "d2_m", "n_elements", "area_m2",
               "ris_gain_db", "two_hop_fspl_db", "los_fspl_db", "gain_rel_los_db",
               "beam_diameter_m"]


def case_rows(cases):
    rows = []
    for c in cases:
        b = ff.evaluate_case(c)
        rows.append([c.name, c.frequency_hz, c.d1_m, c.d2_m, c.n_elements, c.area_m2,
                     b.ris_gain_db, b.fspl_hop1_db + b.fspl_hop2_db, b.fspl_single_hop_db,
                     b.gain_relative_to_los_db,
                     ff.half_power_beam_diameter_m(c.area_m2, c.wavelength_m, c.d2_m)])
    return rows


def cmd_cases(args) -> int:
    rows = case_rows(_select_cases(args.case))
    _check_finite(rows)
    sys.stdout.write(io.csv_text(CASE_HEADER, rows))
    print()
    print(f"{'case':<5}{'freq':>8}{'distance':>12}{'elements':>10}{'gain vs LoS':>13}{'beam diam.':>12}")
    for r in rows:
        dist = f"{r[2]:.0f}+{r[3]:.0f} m"
        print(f"{r[0]:<5}{r[1] / 1e9:>5.0f} GHz{dist:>12}{r[4]:>10d}{r[9]:>+10.1f} dB{r[10]:>10.2f} m")
    out = _out_dir(args.out)
    if out is not None:
        io.write_csv(out / "cases.csv", CASE_HEADER, rows)
        _write_metadata(out, "cases", {"case": args.case})
    return EXIT_OK


# -- sweeps ------------------------------------------------------------------

def _wavelength(args) -> float:
    return ff.SPEED_OF_LIGHT / (args.freq if args.freq else 30e9)


def sweep_fspl_rows(wavelength):
    totals = wavelength * np.logspace(2, 5, 61)
    half = ff.sweep_fspl(totals, 0.5, wavelength)
    skew = ff.sweep_fspl(totals, 0.9, wavelength)
    return [[d / wavelength, d, single, doubled, two, s[3]]
            for (d, single, doubled, two), s in zip(half, skew)]


def sweep_risgain_rows(wavelength):
    areas = wavelength ** 2 * np.logspace(1, 5, 41)
    return [[a / wavelength ** 2, a, g] for a, _, g in ff.sweep_ris_gain(areas, wavelength)]


def sweep_beamwidth_rows(wavelength, distances=(20.0, 100.0, 200.0)):
    areas = wavelength ** 2 * np.logspace(1, 5, 41)
    return [[a / wavelength ** 2, a, d, w] for a, d, w in ff.sweep_beamwidth(areas, wavelength, distances)]


def neargain_rows(panel: fs.RisPanel, points_per_decade=10):
    """Boresight combined gain vs UE distance: far-field line, flat gradient, focusing."""
    lam = panel.wavelength_m
    r_ff = fs.fraunhofer_distance_m(panel)
    src = np.array([0.0, 0.0, 100.0 * r_ff])
    lo, hi = math.log10(20.0 * lam), math.log10(20.0 * r_ff)
    dists = np.logspace(lo, hi, int(round((hi - lo) * points_per_decade)) + 1)
    dests = np.column_stack([np.zeros_like(dists), np.zeros_like(dists), dists])
    flat = fs.field_sum_gain_db(fs.set_profile(panel, fs.FlatGradient((0, 0, 1), (0, 0, 1))), src, dests)
    far = 2.0 * ff.aperture_gain_db(panel.area_m2, lam)
    rows = []
    for d, g_flat in zip(dists, flat):
        focused = fs.set_profile(panel, fs.Focusing(src, (0.0, 0.0, d)))
        g_foc = fs.field_sum_gain_db(focused, src, np.array([0.0, 0.0, d]))
        rows.append([d / lam, d / r_ff, far, float(g_flat), g_foc])
    return rows


def _case_panel(name, scenario_path):
    if scenario_path:
        sc = load_scenario(scenario_path)
        return fs.RisPanel(sc.ris_nx, sc.ris_ny, sc.radio.wavelength_m)
    case = _select_cases([name or "1L"])[0]
    # most nearly square factorisation of the element count
    ny = max(d for d in range(1, math.isqrt(case.n_elements) + 1) if case.n_elements % d == 0)
    return fs.RisPanel(case.n_elements // ny, ny, case.wavelength_m)


def cmd_sweeps(args) -> int:
    out = _out_dir(args.out)
    lam = _wavelength(args)
    if args.kind == "fspl":
        header = ["total_over_lambda", "total_m", "single_hop_db", "doubled_single_hop_db",
                  "two_hop_split_0.5_db", "two_hop_split_0.9_db"]
        rows = sweep_fspl_rows(lam)
    elif args.kind == "risgain":
        header = ["area_over_lambda2", "area_m2", "ris_gain_db"]
        rows = sweep_risgain_rows(lam)
    elif args.kind == "beamwidth":
        header = ["area_over_lambda2", "area_m2", "distance_m", "beam_diameter_m"]
        rows = sweep_beamwidth_rows(lam)
    else:
        header = ["distance_over_lambda", "distance_over_fraunhofer", "farfield_db",
                  "flat_gradient_db", "focusing_db"]
        rows = neargain_rows(_case_panel(args.case and args.case[0], args.scenario))
    _emit(out, f"sweep_{args.kind}.csv", header, rows)
    if out is not None:
        _write_metadata(out, "sweeps", {"kind": args.kind, "freq": args.freq, "case": args.case})
    return EXIT_OK


# -- coverage ----------------------------------------------------------------

def _parse_grid(text: str) -> dict:
    parts = text.split(",")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise ConfigError(f"--grid expects X0,X1,Y0,Y1,RES numbers, got {text!r}") from None
    if len(vals) != 5:
        raise ConfigError(f"--grid expects 5 values X0,X1,Y0,Y1,RES, got {len(vals)}")
    return dict(zip(("x0", "x1", "y0", "y1", "resolution_m"), vals))


def _scenario_doc(args) -> dict:
    doc = {}
    if args.scenario:
        from .scenario import _read
        doc, _ = _read(args.scenario)
        doc = dict(doc)
    if args.seed is not None:
        doc["seed"] = args.seed
    if args.freq is not None:
        doc["frequency_hz"] = args.freq
    if args.grid is not None:
        doc["grid"] = _parse_grid(args.grid)
    return doc


def cmd_coverage(args) -> int:
    doc = _scenario_doc(args)
    source = args.scenario or "<defaults>"
    if args.all_models:
        names = ["reflector", "fixedris", "ris", "ncr"]
    else:
        names = [args.model or doc.get("model", "ris")]
    out = _out_dir(args.out)
    summary = []
    for name in names:
        sc = load_scenario({**doc, "model": name}, source)
        try:
            semap = cv.sweep_grid(sc)
        except FloatingPointError as exc:
            raise NumericalError(str(exc)) from None
        cdf = cv.cdf_of(semap)
        summary.append([name, sc.radio.frequency_hz, cdf.mean, cdf.quantile(0.05),
                        cdf.quantile(0.5), cdf.quantile(0.95)])
        if out is not None:
            io.write_semap_csv(out / f"semap_{name}.csv", semap)
            io.write_pgm(out / f"semap_{name}.pgm", semap.se[::-1], args.pgm_max)
            io.write_cdf_csv(out / f"cdf_{name}.csv", cdf)
    header = ["model", "frequency_hz", "mean_se", "p05_se", "p50_se", "p95_se"]
    sys.stdout.write(io.csv_text(header, summary))
    if out is not None:
        io.write_csv(out / "summary.csv", header, summary)
        _write_metadata(out, "coverage", {"scenario": args.scenario, "seed": args.seed,
                                          "freq": args.freq, "grid": args.grid, "models": names})
    return EXIT_OK


# -- overhead ----------------------------------------------------------------

def cmd_overhead(args) -> int:
    config = load_overhead(args.config)
    d = ssb_demand(config)
    verdict = json.dumps({"required": d.required, "budget": config.ssb_budget,
                          "feasible": d.feasible, "utilization": d.utilization}, sort_keys=True)
    print(verdict)
    out = _out_dir(args.out)
    if out is not None:
        (out / "overhead.json").write_text(verdict + "\n")
        _write_metadata(out, "overhead", {"config": str(args.config)})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rislink", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cases", help="far-field comparison of the deployment cases")
    c.add_argument("--case", action="append", help="case name (repeatable or comma-separated)")
    c.add_argument("--out", help="directory for cases.csv")
    c.set_defaults(func=cmd_cases)

    s = sub.add_parser("sweeps", help="curve data: fspl, risgain, beamwidth, neargain")
    s.add_argument("kind", choices=["fspl", "risgain", "beamwidth", "neargain"])
    s.add_argument("--freq", type=float, help="carrier frequency in Hz (default 30e9)")
    s.add_argument("--case", action="append", help="panel for neargain (default 1L)")
    s.add_argument("--scenario", help="scenario JSON whose 'ris' panel is used by neargain")
    s.add_argument("--out", help="output directory (default: CSV on stdout)")
    s.set_defaults(func=cmd_sweeps)

    v = sub.add_parser("coverage", help="spectral-efficiency maps and CDFs")
    v.add_argument("--scenario", help="scenario JSON")
    v.add_argument("--out", help="output directory")
    v.add_argument("--seed", type=int)
    v.add_argument("--freq", type=float, help="carrier frequency in Hz")
    v.add_argument("--grid", help="X0,X1,Y0,Y1,RES in metres")
    v.add_argument("--model", choices=sorted(cv.MODEL_NAMES))
    v.add_argument("--all-models", action="store_true", help="reflector, fixed RIS, RIS and NCR")
    v.add_argument("--pgm-max", type=float, default=10.0, help="SE mapped to white (bit/s/Hz)")
    v.set_defaults(func=cmd_coverage)

    o = sub.add_parser("overhead", help="SSB budget check")
    o.add_argument("config", help="overhead JSON")
    o.add_argument("--out", help="directory for overhead.json")
    o.set_defaults(func=cmd_overhead)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"rislink: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"rislink: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
