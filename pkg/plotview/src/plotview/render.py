"""Plot renderers for the CSV schemas the eulerspin CLI emits.

Each kind reads one (optionally two) CSV files, validates the header
against the expected schema, and writes a fixed-size PNG.  No computation
happens here beyond what the axes need.
"""

import csv

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

FIGSIZE = (7.0, 5.0)
DPI = 110

# state-column sets the primary tool writes after the time column
TRAJ_SCHEMAS = {
    ("ex", "ey", "ez"): "euler",
    ("m0", "mx", "my", "mz"): "quat",
    ("gx", "gy", "gz"): "gibbs",
    ("nx", "ny", "nz", "theta"): "axisangle",
}


class SchemaMismatch(Exception):
    pass


def _read_csv(path):
    with open(path) as fh:
        header = fh.readline().strip()
    if not header:
        raise SchemaMismatch(f"{path}: empty file")
    names = tuple(header.split(","))
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.size == 0:
        raise SchemaMismatch(f"{path}: no data rows")
    if data.shape[1] != len(names):
        raise SchemaMismatch(f"{path}: rows do not match header {header!r}")
    return names, data


def _read_trajectory(path):
    names, data = _read_csv(path)
    if names[0] != "t" or names[1:] not in TRAJ_SCHEMAS:
        raise SchemaMismatch(
            f"{path}: not a trajectory schema (header {','.join(names)})")
    rep = TRAJ_SCHEMAS[names[1:]]
    return rep, names, data


def _vector_part(rep, states):
    # the 3-component curve each representation traces
    if rep == "quat":
        return states[:, 1:4]
    return states[:, :3]


def render_traj3d(path, path2, out):
    rep, _, data = _read_trajectory(path)
    xyz = _vector_part(rep, data[:, 1:])
    fig = plt.figure(figsize=FIGSIZE)
    ax = fig.add_subplot(projection="3d")
    ax.plot(xyz[:, 0], xyz[:, 1], xyz[:, 2], lw=0.6)
    if path2:
        rep2, _, data2 = _read_trajectory(path2)
        xyz2 = _vector_part(rep2, data2[:, 1:])
        ax.plot(xyz2[:, 0], xyz2[:, 1], xyz2[:, 2], lw=0.6, alpha=0.8)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    ax.set_title(f"{rep} trajectory")
    fig.savefig(out, dpi=DPI)
    plt.close(fig)


def render_timeseries(path, path2, out):
    rep, names, data = _read_trajectory(path)
    t = data[:, 0]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for i, name in enumerate(names[1:], start=1):
        ax.plot(t, data[:, i], lw=0.7, label=name)
    mag = np.linalg.norm(_vector_part(rep, data[:, 1:]), axis=1)
    ax.plot(t, mag, lw=1.0, color="k", label="|vector|")
    if path2:
        _, names2, data2 = _read_trajectory(path2)
        for i, name in enumerate(names2[1:], start=1):
            ax.plot(data2[:, 0], data2[:, i], lw=0.7, ls="--", label=name + " (2)")
    ax.set_xlabel("t")
    ax.legend(loc="upper right", fontsize=8, ncols=2)
    ax.set_title(f"{rep} components")
    fig.savefig(out, dpi=DPI)
    plt.close(fig)


def render_strobe(path, path2, out):
    names, data = _read_csv(path)
    if names[:2] != ("k", "t"):
        raise SchemaMismatch(f"{path}: not a strobe schema")
    pts = data[:, 2:5] if data.shape[1] >= 5 else data[:, 2:]
    fig = plt.figure(figsize=FIGSIZE)
    if pts.shape[1] >= 3:
        ax = fig.add_subplot(projection="3d")
        ax.scatter(pts[:, 0], pts[:, 1], pts[:, 2], s=6)
        ax.set_zlabel(names[4])
    else:
        ax = fig.add_subplot()
        ax.scatter(pts[:, 0], pts[:, 1], s=6)
    ax.set_xlabel(names[2])
    ax.set_ylabel(names[3])
    ax.set_title(f"strobe section ({len(pts)} points)")
    fig.savefig(out, dpi=DPI)
    plt.close(fig)


def render_psd(path, path2, out):
    names, data = _read_csv(path)
    if names != ("freq", "power"):
        raise SchemaMismatch(f"{path}: not a spectrum schema")
    fig, ax = plt.subplots(figsize=FIGSIZE)
    db = 10.0 * np.log10(np.maximum(data[:, 1], 1e-300) / 0.5)
    ax.plot(data[:, 0], db, lw=0.7)
    if path2:
        names2, data2 = _read_csv(path2)
        if names2 != ("freq", "power"):
            raise SchemaMismatch(f"{path2}: not a spectrum schema")
        db2 = 10.0 * np.log10(np.maximum(data2[:, 1], 1e-300) / 0.5)
        ax.plot(data2[:, 0], db2, lw=0.7, alpha=0.8)
    ax.set_xlabel("frequency (cycles/time)")
    ax.set_ylabel("power (dB re 0.5)")
    ax.set_xlim(0, data[-1, 0])
    ax.set_title("power spectral density")
    fig.savefig(out, dpi=DPI)
    plt.close(fig)


def render_lyapunov(path, path2, out):
    names, data = _read_csv(path)
    if names[0] != "step" or not all(n.startswith("l") for n in names[1:]):
        raise SchemaMismatch(f"{path}: not a lyapunov history schema")
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for i, name in enumerate(names[1:], start=1):
        ax.plot(data[:, 0], data[:, i], lw=0.8, label=name)
    ax.axhline(0.0, color="k", lw=0.5)
    ax.set_xlabel("step")
    ax.set_ylabel("running exponent estimate (1/time)")
    ax.legend(fontsize=8)
    ax.set_title("Lyapunov exponent convergence")
    fig.savefig(out, dpi=DPI)
    plt.close(fig)


def render_recurrence(path, path2, out):
    names, data = _read_csv(path)
    if names != ("i", "j"):
        raise SchemaMismatch(f"{path}: not a recurrence schema")
    ii, jj = data[:, 0].astype(int), data[:, 1].astype(int)
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    ax.scatter(ii, jj, s=0.5, marker="s", color="k")
    ax.set_xlabel("i")
    ax.set_ylabel("j")
    ax.set_aspect("equal")
    ax.set_title("recurrence plot")
    fig.savefig(out, dpi=DPI)
    plt.close(fig)


KINDS = {
    "traj3d": render_traj3d,
    "timeseries": render_timeseries,
    "strobe": render_strobe,
    "psd": render_psd,
    "lyapunov": render_lyapunov,
    "recurrence": render_recurrence,
}


def render(kind, path, out, path2=None):
    KINDS[kind](path, path2, out)
