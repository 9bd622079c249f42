"""Static figure emission (SVG/PNG files next to the delimited output)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

from .phases import ALLOWED_PHASES, PHASE_CODE_DIAGONAL, phase_name  # noqa: E402

_PHASE_COLORS = ["#4878cf", "#d65f5f", "#6acc65", "#c4ad66", "#956cb4", "#333333"]


def plot_phase_grid(grid, za_axis, zb_axis, p, path: str) -> None:
    """Render a z-domain phase grid with a legend of the five labels."""
    cmap = ListedColormap(["#ffffff"] + _PHASE_COLORS)
    fig, ax = plt.subplots(figsize=(5.2, 4.6))
    ax.pcolormesh(za_axis, zb_axis, grid + 1, cmap=cmap, vmin=0,
                  vmax=len(_PHASE_COLORS), shading="nearest", rasterized=True)
    handles = [
        plt.Rectangle((0, 0), 1, 1, color=_PHASE_COLORS[i])
        for i in range(len(ALLOWED_PHASES))
    ]
    labels = [phase_name(ph) for ph in ALLOWED_PHASES]
    if (grid == PHASE_CODE_DIAGONAL).any():
        handles.append(plt.Rectangle((0, 0), 1, 1, color=_PHASE_COLORS[-1]))
        labels.append("degenerate")
    ax.legend(handles, labels, loc="upper right", fontsize=8)
    ax.set_xlabel(r"$z_\alpha$")
    ax.set_ylabel(r"$z_\beta$")
    ax.set_title(rf"phases, $\alpha={p.alpha}$, $\beta={p.beta}$")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_profile(xis, z_alphas, z_betas, rho_circs, rho_bullets, path: str) -> None:
    """Render a self-similar Riemann profile in both variable sets."""
    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(5.6, 5.4))
    ax1.plot(xis, z_alphas, label=r"$z_\alpha$")
    ax1.plot(xis, z_betas, label=r"$z_\beta$")
    ax1.set_ylabel("Riemann variables")
    ax1.legend()
    ax2.plot(xis, rho_circs, label=r"$\rho_\circ$")
    ax2.plot(xis, rho_bullets, label=r"$\rho_\bullet$")
    ax2.set_xlabel(r"$\xi = x/t$")
    ax2.set_ylabel("densities")
    ax2.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_density_profile(sites, rho_circ, rho_bullet, path: str) -> None:
    """Render a per-site measured density profile."""
    fig, ax = plt.subplots(figsize=(5.6, 3.6))
    ax.plot(sites, rho_circ, lw=0.8, label=r"$\rho_\circ$")
    ax.plot(sites, rho_bullet, lw=0.8, label=r"$\rho_\bullet$")
    ax.set_xlabel("site")
    ax.set_ylabel("density")
    ax.set_ylim(0, 1)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
