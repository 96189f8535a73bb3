"""Matplotlib renderings of the analysis outputs, saved straight to files.

Every function takes the data object its subcommand already produced and a
destination path; the format follows the file extension (png, pdf, svg).
Rendering uses the Agg backend, so no display is ever required.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import ode as ode_mod
from .cycles import FEIGENBAUM_DELTA
from .ergodic import BifurcationData, LyapunovResult
from .map_core import Orbit
from .ode import OdeParams, OdeSolution
from .picard import BridgeClass, BridgeOutcome, PicardRun


def save_orbit_figure(orb: Orbit, path: str) -> None:
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(range(len(orb.states)), orb.states, "b.-", markersize=3, linewidth=0.6)
    ax.set_xlabel("step")
    ax.set_ylabel("x")
    ax.set_title(f"orbit at a = {orb.params.a}, x0 = {orb.x0}")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_bifurcation_figure(data: BifurcationData, path: str) -> None:
    fig, ax = plt.subplots(figsize=(9, 6))
    for a, samples, escaped in zip(data.a_values, data.samples, data.escaped):
        if escaped or len(samples) == 0:
            continue
        ax.plot(np.full(len(samples), a), samples, "k.", markersize=0.25, alpha=0.5)
    ax.set_xlabel("a")
    ax.set_ylabel("x")
    ax.set_xlim(float(data.a_values[0]), float(data.a_values[-1]))
    ax.set_ylim(0, 1)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_lyapunov_figure(results: list[LyapunovResult], path: str) -> None:
    a = [r.a for r in results]
    lam = [r.exponent if r.exponent is not None else np.nan for r in results]
    fig, ax = plt.subplots(figsize=(9, 4.5))
    ax.plot(a, lam, "b-", linewidth=0.8)
    ax.axhline(0.0, color="r", linestyle="--", linewidth=0.8)
    ax.set_xlabel("a")
    ax.set_ylabel("lyapunov exponent")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_ode_figure(params: OdeParams, sol: OdeSolution, path: str) -> None:
    ts = sol.times()
    exact = [ode_mod.exact_solution(params, t) for t in ts]
    err = [abs(v - e) for v, e in zip(sol.values, exact)]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    ax1.plot(ts, exact, "k-", label="closed form")
    ax1.plot(ts, sol.values, "r.", markersize=3, label="rk4")
    ax1.set_ylabel("P(t)")
    ax1.legend()
    ax1.grid(alpha=0.3)
    ax2.semilogy(ts[1:], err[1:], "b.-", markersize=3, linewidth=0.6)
    ax2.set_xlabel("t")
    ax2.set_ylabel("|rk4 - exact|")
    ax2.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_picard_figure(run: PicardRun, path: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ks = range(1, len(run.deltas) + 1)
    ax.semilogy(ks, run.deltas, "bo-", label="sup-norm delta")
    if run.deltas and run.contraction_bound > 0:
        ref = [run.deltas[0] * run.contraction_bound**k for k in range(len(run.deltas))]
        ax.semilogy(ks, ref, "r--", linewidth=0.8, label=f"slope {run.contraction_bound:g}")
    ax.set_xlabel("iterate")
    ax.set_ylabel("delta")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_feigenbaum_figure(deltas: list[float], path: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ks = range(1, len(deltas) + 1)
    ax.plot(ks, deltas, "bo-", label="gap ratio")
    ax.axhline(FEIGENBAUM_DELTA, color="r", linestyle="--", linewidth=0.8, label="4.6692016")
    ax.set_xlabel("k")
    ax.set_ylabel("delta_k")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_bridge_figure(outcomes: list[BridgeOutcome], path: str) -> None:
    fig, ax = plt.subplots(figsize=(9, 4.5))
    conv = [(o.a, o.limit) for o in outcomes if o.classification is BridgeClass.CONVERGED]
    cyc = [(o.a, o.period) for o in outcomes if o.classification is BridgeClass.CYCLE]
    non = [o.a for o in outcomes if o.classification is BridgeClass.NON_CONVERGENT]
    if conv:
        ax.plot([c[0] for c in conv], [c[1] for c in conv], "g.", label="converged limit")
    if non:
        ax.plot(non, [0.0] * len(non), "rx", markersize=4, label="non-convergent")
    ax.set_xlabel("a")
    ax.set_ylabel("limit")
    ax.grid(alpha=0.3)
    if cyc:
        ax2 = ax.twinx()
        ax2.plot([c[0] for c in cyc], [c[1] for c in cyc], "b^", markersize=4, label="cycle period")
        ax2.set_ylabel("period")
        ax2.set_yscale("log", base=2)
    handles, labels = ax.get_legend_handles_labels()
    if cyc:
        h2, l2 = ax2.get_legend_handles_labels()
        handles += h2
        labels += l2
    if handles:
        ax.legend(handles, labels, loc="upper left")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
