"""Command-line front end: reproducible simulation and analysis runs that
emit CSV artifacts, each with a JSON sidecar recording the exact inputs.

Exit codes: 0 success, 1 verification failure, 2 mathematical singularity,
3 I/O or schema problem.
"""

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .acceptance import run_all
from .analysis import (
    detect_peaks,
    lyapunov_spectrum,
    power_spectrum,
    recurrence,
    strobe,
)
from .closed_form import spinor_axis, spinor_params, spinor_theta
from .dynamics import (
    continue_axis_angle,
    integrate,
    load_trajectory_csv,
    save_trajectory_csv,
    STATE_COLUMNS,
)
from .errors import EulerSpinError, SchemaError
from .omega_models import (
    ConstantOmega,
    PathologicalOmega,
    RotatingPlaneOmega,
    TabulatedOmega,
)
from .rotation_core import (
    axis_angle_to_gibbs,
    axis_angle_to_quaternion,
    euler_vector_to_axis_angle,
    unit,
)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_SINGULAR = 2
EXIT_IO = 3


def _parse_vec3(text):
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 3 components, got {text!r}")
    return np.array(parts)


def parse_omega_spec(spec: str):
    """'const:x,y,z', 'rotplane:T', 'pathological', or 'csv:PATH'."""
    kind, _, rest = spec.partition(":")
    if kind == "const":
        return ConstantOmega(_parse_vec3(rest))
    if kind == "rotplane":
        return RotatingPlaneOmega.from_period(float(rest))
    if kind == "pathological":
        return PathologicalOmega()
    if kind == "csv":
        return TabulatedOmega.from_csv(rest)
    raise SchemaError(f"unknown omega spec {spec!r}")


def _initial_state(rep: str, e0: np.ndarray):
    """Build the initial state for a representation from an Euler vector."""
    if rep == "euler":
        return e0
    aa = euler_vector_to_axis_angle(e0)
    if rep == "quat":
        return axis_angle_to_quaternion(aa)
    if rep == "gibbs":
        return axis_angle_to_gibbs(aa)
    return np.array([*aa.axis, aa.angle])


def _load_config(args):
    cfg = {}
    if args.config:
        with open(args.config) as fh:
            cfg = json.load(fh)
    for key in ("rep", "omega", "e0", "t0", "t_end", "dt", "out"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    cfg.setdefault("rep", "euler")
    cfg.setdefault("t0", 0.0)
    if "t_end" not in cfg or "dt" not in cfg or "omega" not in cfg:
        raise SchemaError("omega, t_end and dt are required (flags or config)")
    if cfg["t_end"] <= cfg["t0"] or cfg["dt"] <= 0:
        raise SchemaError("need t_end > t0 and dt > 0")
    cfg.setdefault("e0", [1.0 / math.sqrt(3.0)] * 3)
    cfg.setdefault("out", ".")
    return cfg


def _write_sidecar(csv_path: Path, payload: dict):
    payload = dict(payload, tool="eulerspin", version=__version__)
    csv_path.with_suffix(".json").write_text(json.dumps(payload, indent=2,
                                                        default=_jsonable) + "\n")


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not JSON-serializable: {type(obj)}")


def cmd_simulate(args) -> int:
    cfg = _load_config(args)
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    omega = parse_omega_spec(cfg["omega"])
    e0 = np.asarray(cfg["e0"], dtype=float)
    rep = cfg["rep"]
    state0 = _initial_state(rep, e0)
    status = {"config": cfg, "aborted": False}
    try:
        traj = integrate(rep, state0, omega, cfg["t0"], cfg["t_end"], cfg["dt"])
    except EulerSpinError as exc:
        traj = getattr(exc, "trajectory", None)
        status.update(aborted=True, error=type(exc).__name__,
                      message=str(exc), abort_time=getattr(exc, "abort_time", None))
        if traj is None:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_SINGULAR
    csv_path = out / "trajectory.csv"
    save_trajectory_csv(traj, csv_path)
    status["metadata"] = {k: v for k, v in traj.metadata.items()}
    if rep == "quat" and args.continue_angle:
        aa, rec = continue_axis_angle(traj, omega)
        save_trajectory_csv(aa, out / "continued.csv")
        status["continuation"] = {
            "zero_times": rec.zero_times, "parity_used": rec.parity_used,
            "final_branch": rec.l,
        }
        _write_sidecar(out / "continued.csv", status)
    _write_sidecar(csv_path, status)
    if status["aborted"]:
        print(f"aborted: {status['message']}", file=sys.stderr)
        return EXIT_SINGULAR
    print(f"wrote {csv_path} ({len(traj)} samples)")
    return EXIT_OK


def cmd_spinor(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    n0 = unit(_parse_vec3(args.n0))
    omega = _parse_vec3(args.omega_vec)
    sol = spinor_params(n0, args.theta0, omega, args.t0)
    n_steps = int(math.floor((args.t_end - args.t0) / args.dt + 1e-9))
    ts = args.t0 + args.dt * np.arange(n_steps + 1)
    axes = spinor_axis(sol, ts)
    thetas = spinor_theta(sol, ts)
    csv_path = out / "spinor.csv"
    data = np.column_stack([ts, axes, thetas])
    np.savetxt(csv_path, data, delimiter=",", comments="", fmt="%.17g",
               header="t,nx,ny,nz,theta")
    _write_sidecar(csv_path, {
        "n0": n0, "theta0": args.theta0, "omega": omega,
        "t0": args.t0, "t_end": args.t_end, "dt": args.dt,
        "a": sol.a, "b": sol.b, "k": sol.k, "e1": sol.e1, "e2": sol.e2,
    })
    print(f"wrote {csv_path} (a={sol.a:.12g}, b={sol.b:.12g})")
    return EXIT_OK


def cmd_analyze(args) -> int:
    traj = load_trajectory_csv(args.input)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sidecar = {"input": str(args.input), "analysis": args.analysis}

    if args.analysis == "strobe":
        ss = strobe(traj, args.period, args.offset)
        cols = STATE_COLUMNS[traj.rep]
        path = out / "strobe.csv"
        data = np.column_stack([np.arange(len(ss.times)), ss.times, ss.states])
        np.savetxt(path, data, delimiter=",", comments="", fmt="%.17g",
                   header="k,t," + ",".join(cols))
        sidecar.update(period=args.period, offset=args.offset, points=len(ss.times))
    elif args.analysis == "psd":
        series = np.linalg.norm(traj.states, axis=1) if args.signal == "mag" \
            else traj.column(args.signal)
        spec = power_spectrum(series, traj.dt, window=args.window)
        path = out / "spectrum.csv"
        np.savetxt(path, np.column_stack([spec.freqs, spec.power]),
                   delimiter=",", comments="", fmt="%.17g", header="freq,power")
        peaks = detect_peaks(spec, prominence_db=args.prominence)
        sidecar.update(signal=args.signal, window=args.window,
                       peaks=[{"freq": f, "power_db": p} for f, p in peaks[:10]])
    elif args.analysis == "lyapunov":
        if args.omega is None:
            raise SchemaError("analyze lyapunov needs --omega (re-integration)")
        omega = parse_omega_spec(args.omega)
        est = lyapunov_spectrum(traj.rep, traj.states[0], omega,
                                traj.times[0], traj.times[-1], traj.dt,
                                renorm_interval=args.renorm_interval)
        path = out / "lyapunov.csv"
        steps = np.rint((est.renorm_times - traj.times[0]) / traj.dt).astype(int)
        header = "step," + ",".join(f"l{i+1}" for i in range(est.history.shape[1]))
        np.savetxt(path, np.column_stack([steps, est.history]),
                   delimiter=",", comments="", fmt="%.17g", header=header)
        sidecar.update(exponents=list(est.exponents), total_time=est.total_time)
    else:  # recurrence
        rm = recurrence(traj, args.epsilon, args.stride)
        path = out / "recurrence.csv"
        ii, jj = np.nonzero(rm.matrix)
        np.savetxt(path, np.column_stack([ii, jj]), delimiter=",",
                   comments="", fmt="%d", header="i,j")
        sidecar.update(epsilon=args.epsilon, stride=args.stride,
                       samples=len(rm.times), set_bits=int(len(ii)))
    _write_sidecar(path, sidecar)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_all()
    for res in results:
        print(res.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eulerspin",
                                description="Rotation-kinematics experiments")
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="integrate one ODE form to CSV")
    sim.add_argument("--config", help="JSON config file; flags override")
    sim.add_argument("--rep", choices=list(STATE_COLUMNS), default=None)
    sim.add_argument("--omega", help="const:x,y,z | rotplane:T | pathological | csv:PATH")
    sim.add_argument("--e0", type=lambda s: [float(x) for x in s.split(",")],
                     help="initial Euler vector x,y,z")
    sim.add_argument("--t0", type=float, default=None)
    sim.add_argument("--t-end", dest="t_end", type=float, default=None)
    sim.add_argument("--dt", type=float, default=None)
    sim.add_argument("--out", default=None, help="output directory")
    sim.add_argument("--continue-angle", action="store_true",
                     help="also write the continued axis/angle (quat only)")
    sim.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("spinor", help="constant-omega closed form to CSV")
    sp.add_argument("--n0", required=True, help="initial axis x,y,z")
    sp.add_argument("--theta0", type=float, required=True)
    sp.add_argument("--omega-vec", required=True, help="constant omega x,y,z")
    sp.add_argument("--t0", type=float, default=0.0)
    sp.add_argument("--t-end", dest="t_end", type=float, required=True)
    sp.add_argument("--dt", type=float, required=True)
    sp.add_argument("--out", default=".")
    sp.set_defaults(func=cmd_spinor)

    an = sub.add_parser("analyze", help="diagnostics on a trajectory CSV")
    an.add_argument("analysis", choices=["strobe", "lyapunov", "psd", "recurrence"])
    an.add_argument("--in", dest="input", required=True, help="trajectory CSV")
    an.add_argument("--out", default=".")
    an.add_argument("--period", type=float, default=40.0)
    an.add_argument("--offset", type=float, default=0.0)
    an.add_argument("--signal", default="mag",
                    help="'mag' or a state column name for psd")
    an.add_argument("--window", choices=["hann", "none"], default="hann")
    an.add_argument("--prominence", type=float, default=10.0)
    an.add_argument("--omega", help="omega spec for lyapunov re-integration")
    an.add_argument("--renorm-interval", type=int, default=10)
    an.add_argument("--epsilon", type=float, default=0.1)
    an.add_argument("--stride", type=int, default=1)
    an.set_defaults(func=cmd_analyze)

    ver = sub.add_parser("verify", help="run the built-in acceptance checks")
    ver.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except EulerSpinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR


if __name__ == "__main__":
    sys.exit(main())
