"""Command line: build codes, construct and check gadgets, run simulations.

Subcommands: ``build``, ``gadget {build,validate,measured-group,effdist}``,
``simulate``, ``distance`` and ``report``. Any option may also come from a
JSON file given with ``--config``; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import formats
from .cell2 import (
    build_cylinder,
    build_square,
    build_torus,
    close_rough_boundaries,
    css_of_complex,
    planar_two_qubit_patch,
    surface_distance,
)
from .csscode import CssCode, min_distance_x, min_distance_z
from .errors import GadgetViolation, KIsZero
from .f2la import BitMatrix
from .gadget import HomGadget, check_conditions, effective_x_distance, measured_group, stabilizer_preservation_check
from .pipeline import build_covering_gadget, format_report, gadget_report, size_table
from .simproto import NoiseModel, run_homomorphic, run_shor_repeated, wilson_interval

DEFAULTS = {
    "shape": "torus",
    "d": 3,
    "c": 3,
    "h": 3,
    "keep": None,
    "out_dir": None,
    "loop": "Z1",
    "width": "auto",
    "x_type": False,
    "out": None,
    "report": None,
    "bundle": None,
    "p": "0.01",
    "trials": 10000,
    "seed": 0,
    "decoder": "exact",
    "protocol": "homomorphic",
    "rounds": 1,
    "channels": "data,anc,meas",
    "effdist_length": None,
    "ds": "3,5",
    "loops": "Z1,Z2,Z1Z2",
}


class CliError(Exception):
    pass


def _resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset options from the config file, then from DEFAULTS."""
    cfg = {}
    if getattr(args, "config", None):
        cfg = json.loads(Path(args.config).read_text())
        if not isinstance(cfg, dict):
            raise CliError("config file must hold a JSON object")
    for key, default in DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, cfg.get(key, default))
    return args


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


# build ----------------------------------------------------------------------


def _complex_for(args):
    if args.shape == "torus":
        return build_torus(int(args.d))
    if args.shape == "cylinder":
        return build_cylinder(int(args.c), int(args.h))
    if args.shape in ("planar-two-qubit", "planar-fig5"):
        m = planar_two_qubit_patch(int(args.d))
        if args.keep is not None:
            keep = [s for s in str(args.keep).split(",") if s]
            m = close_rough_boundaries(m, keep)
        return m
    if args.shape == "square":
        return build_square()
    raise CliError(f"unknown shape {args.shape!r}")


def _params(code: CssCode, m=None) -> str:
    if code.k == 0:
        return f"[[{code.n},0,-]]"
    dz, dx = surface_distance(m) if m is not None else (code.d_z, code.d_x)
    return f"[[{code.n},{code.k},{min(dz, dx)}]] d_z={dz} d_x={dx}"


def cmd_build(args) -> int:
    m = _complex_for(args)
    code = css_of_complex(m)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        formats.write_json(out / "complex.json", m.to_json())
        formats.write_json(out / "code.json", code.to_json())
    print(f"{args.shape}: {_params(code, m)}")
    return 0


# gadget ---------------------------------------------------------------------


def _width(args) -> int | None:
    if args.width in (None, "auto"):
        return None
    return int(args.width)


def cmd_gadget_build(args) -> int:
    b = build_covering_gadget(int(args.d), str(args.loop), _width(args), bool(args.x_type))
    length = None if args.effdist_length is None else int(args.effdist_length)
    rep = gadget_report(b, effdist_length=length)
    for note in rep["notes"]:
        print(f"warning: {note}", file=sys.stderr)
    ok = rep["condition1"] and rep["condition2"] and rep["stabilizers_preserved"] and rep["cellmap_commutes"]
    if not ok:
        print("gadget failed verification; bundle not written", file=sys.stderr)
        return 2
    if args.out:
        meta = {"d": int(args.d), "loop": str(args.loop), "measurement": rep["measurement"], "width": rep["width"]}
        formats.write_json(args.out, formats.gadget_to_json(b.gadget, meta))
    text = format_report(rep)
    if args.report:
        formats.write_json(args.report, rep)
    sys.stdout.write(text)
    return 0


def cmd_gadget_validate(args) -> int:
    obj = formats.read_json(args.bundle)
    data = CssCode.from_json(obj["data"])
    anc = CssCode.from_json(obj["ancilla"])
    gm = obj["gamma"]
    gamma = BitMatrix.from_strings(gm["bits"], cols=int(gm["cols"]))
    rep = check_conditions(data, anc, gamma)
    print(f"condition 1: {'pass' if rep.condition1 else 'FAIL'}")
    if not rep.condition1:
        print(f"  witness row {rep.row1}: {''.join(map(str, rep.witness1))}")
    print(f"condition 2: {'pass' if rep.condition2 else 'FAIL'}")
    if not rep.condition2:
        print(f"  witness row {rep.row2}: {''.join(map(str, rep.witness2))}")
    if rep.ok:
        cert = stabilizer_preservation_check(HomGadget(data, anc, gamma))
        print(f"stabilizer groups preserved: {'pass' if cert.ok else 'FAIL ' + ','.join(cert.failures())}")
    return 0 if rep.ok else 1


def cmd_gadget_measured(args) -> int:
    g, _ = formats.read_gadget(args.bundle)
    mg = measured_group(g)
    coeffs = mg.coefficients(g.data)
    print(f"rank {mg.rank}")
    for i in range(mg.rank):
        support = np.flatnonzero(mg.basis.row(i)).tolist()
        print(f"generator {i}: qubits {support} logical coefficients {''.join(map(str, coeffs[i]))}")
    return 0


def cmd_gadget_effdist(args) -> int:
    g, _ = formats.read_gadget(args.bundle)
    length = None if args.effdist_length is None else int(args.effdist_length)
    res = effective_x_distance(g, max_length=length, check=False)
    bound = min(g.data.d, g.ancilla.d)
    status = "exact" if res.exact else f"search truncated, lower bound {res.lower_bound}"
    print(f"effective X-distance {res.value} ({status}); min(d_data, d_ancilla) = {bound}")
    return 0 if res.lower_bound >= bound or g.origin is None else 3


# simulate -------------------------------------------------------------------


def _noise(p: float, channels: str, seed: int) -> NoiseModel:
    chans = {c.strip() for c in channels.split(",") if c.strip()}
    unknown = chans - {"data", "anc", "meas"}
    if unknown:
        raise CliError(f"unknown noise channels {sorted(unknown)}")
    return NoiseModel(
        p_data=p if "data" in chans else 0.0,
        p_anc_residual=p if "anc" in chans else 0.0,
        p_meas=p if "meas" in chans else 0.0,
        seed=seed,
    )


def cmd_simulate(args) -> int:
    if not args.bundle:
        raise CliError("simulate needs --bundle")
    g, meta = formats.read_gadget(args.bundle)
    grid = formats.parse_p_grid(str(args.p))
    trials, seed = int(args.trials), int(args.seed)
    name = Path(args.bundle).stem
    rows = []
    if trials > 0:
        for p in grid:
            if args.protocol == "homomorphic":
                st = run_homomorphic(g, _noise(p, str(args.channels), seed), trials, decoder=str(args.decoder))
                errors, data_errors, ci = st.readout_errors, st.data_errors, st.ci
            elif args.protocol == "shor":
                mg = measured_group(g)
                if mg.rank == 0:
                    raise CliError("bundle measures no logical operator")
                st = run_shor_repeated(g.data, mg.basis.row(0), p, int(args.rounds), trials, seed)
                errors, data_errors = st.errors, 0
                ci = wilson_interval(errors, trials)
            else:
                raise CliError(f"unknown protocol {args.protocol!r}")
            rows.append(
                {
                    "gadget": name,
                    "protocol": args.protocol,
                    "p": p,
                    "trials": trials,
                    "readout_errors": errors,
                    "data_errors": data_errors,
                    "rate": errors / trials,
                    "ci_low": ci[0],
                    "ci_high": ci[1],
                    "seed": seed,
                }
            )
    _emit(formats.results_csv(rows), args.out)
    return 0


# distance and report --------------------------------------------------------


def cmd_distance(args) -> int:
    if args.code:
        code = formats.read_code(args.code)
    elif args.h_x and args.h_z:
        code = CssCode(formats.read_matrix(args.h_x), formats.read_matrix(args.h_z))
    else:
        raise CliError("distance needs a code JSON file or both --h-x and --h-z")
    print(f"n={code.n} k={code.k}")
    if code.k == 0:
        print("no logical qubits; distance undefined")
        return 0
    budget = None if args.budget is None else int(args.budget)
    for label, fn in (("d_z", min_distance_z), ("d_x", min_distance_x)):
        r = fn(code, budget=budget)
        print(f"{label}={r.value}{'' if r.exact else ' (upper bound)'}")
    return 0


def cmd_report(args) -> int:
    ds = [int(x) for x in str(args.ds).split(",") if x]
    loops = [x for x in str(args.loops).split(",") if x]
    lines = ["d  loop   m    n    w   ratio m*d/(n*w)"]
    for row in size_table(ds, loops):
        lines.append(f"{row['d']:<2} {row['loop']:<6} {row['m']:<4} {row['n']:<4} {row['w']:<3} {row['ratio']}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hommeas", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="JSON file with option values (flags take precedence)")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a cellulation and its code")
    b.add_argument("--shape", choices=["torus", "cylinder", "planar-two-qubit", "planar-fig5", "square"])
    b.add_argument("--d", type=int, help="torus size, or patch distance for planar-two-qubit")
    b.add_argument("--c", type=int, help="cylinder circumference")
    b.add_argument("--h", type=int, help="cylinder height in vertex rows")
    b.add_argument("--keep", help="planar-two-qubit: comma-separated rough segments to keep (others are closed)")
    b.add_argument("--out-dir", dest="out_dir", help="write complex.json and code.json here")
    b.set_defaults(func=cmd_build)

    g = sub.add_parser("gadget", help="construct or inspect measurement gadgets")
    gsub = g.add_subparsers(dest="gadget_command", required=True)
    gb = gsub.add_parser("build", help="covering-space gadget on a torus")
    gb.add_argument("--d", type=int)
    gb.add_argument("--loop", help="Z1, Z2, Z1Z2 or comma-separated torus edge indices")
    gb.add_argument("--width", help="'auto' or a band width (1 = bare loop)")
    gb.add_argument("--x-type", dest="x_type", action="store_true", default=None, help="measure the X-logical on the dual loop")
    gb.add_argument("--out", help="gadget bundle JSON")
    gb.add_argument("--report", help="machine-readable report JSON")
    gb.add_argument("--effdist-length", dest="effdist_length", type=int, help="cap on searched cycle length")
    gb.set_defaults(func=cmd_gadget_build)
    for name, fn in (("validate", cmd_gadget_validate), ("measured-group", cmd_gadget_measured), ("effdist", cmd_gadget_effdist)):
        gp = gsub.add_parser(name)
        gp.add_argument("bundle")
        if name == "effdist":
            gp.add_argument("--effdist-length", dest="effdist_length", type=int)
        gp.set_defaults(func=fn)

    s = sub.add_parser("simulate", help="Monte Carlo readout statistics as CSV")
    s.add_argument("--bundle")
    s.add_argument("--p", help="lo:hi:log10[:N], lo:hi:lin[:N] or a comma list")
    s.add_argument("--trials", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--decoder", choices=["exact", "union_find"])
    s.add_argument("--protocol", choices=["homomorphic", "shor"])
    s.add_argument("--rounds", type=int, help="shor protocol: odd number of repetitions")
    s.add_argument("--channels", help="noise channels set to p, from data,anc,meas")
    s.add_argument("--out", help="CSV path (default stdout)")
    s.set_defaults(func=cmd_simulate)

    d = sub.add_parser("distance", help="X- and Z-distance of a CSS code")
    d.add_argument("code", nargs="?", help="code JSON file")
    d.add_argument("--h-x", dest="h_x", help="H_X in matrix text format")
    d.add_argument("--h-z", dest="h_z", help="H_Z in matrix text format")
    d.add_argument("--budget", type=int, help="weight limit for large kernels")
    d.set_defaults(func=cmd_distance)

    r = sub.add_parser("report", help="ancilla size table m, n, w, d, m*d/(n*w)")
    r.add_argument("--ds", help="comma-separated torus sizes")
    r.add_argument("--loops", help="comma-separated presets")
    r.add_argument("--out")
    r.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return int(args.func(_resolve(args)) or 0)
    except (CliError, GadgetViolation, KIsZero, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
