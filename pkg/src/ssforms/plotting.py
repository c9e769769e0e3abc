"""Matplotlib figures for graph and verification reports (Agg backend, files only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import networkx as nx  # noqa: E402

LEVEL_COLOURS = {"surface": "#4c72b0", "floor": "#dd8452"}


def _component_layout(G: nx.Graph) -> dict:
    """Kamada-Kawai per connected component, components side by side."""
    pos, x0 = {}, 0.0
    for comp in sorted(nx.connected_components(G), key=lambda c: (-len(c), min(c))):
        H = G.subgraph(comp)
        sub = nx.kamada_kawai_layout(H) if len(H) > 1 else {n: (0.0, 0.0) for n in H}
        for n, (x, y) in sub.items():
            pos[n] = (x + x0, y)
        x0 += 2.5
    return pos


def plot_graph(data: dict, path) -> None:
    """Draw a graph report (as produced by ``ssforms graph --format json``)."""
    G = nx.MultiDiGraph()
    for v in data["vertices"]:
        G.add_node(v["id"], **v)
    for e in data["edges"]:
        G.add_edge(e["source"], e["target"], label=e.get("annotation") or "")
    pos = _component_layout(nx.Graph(G))
    fig, ax = plt.subplots(figsize=(8, 6))
    colours = [LEVEL_COLOURS.get(G.nodes[n]["level"], "grey") for n in G]
    nx.draw_networkx_nodes(G, pos, node_color=colours, node_size=900, ax=ax)
    labels = {n: f"{G.nodes[n]['name']}\n{tuple(G.nodes[n]['form'])}" for n in G}
    nx.draw_networkx_labels(G, pos, labels, font_size=7, ax=ax)
    directed = any(e.get("annotation") for e in data["edges"])
    if directed:
        nx.draw_networkx_edges(G, pos, ax=ax, arrows=True, arrowsize=12, node_size=900,
                               connectionstyle="arc3,rad=0.08")
    else:
        nx.draw_networkx_edges(G, pos, ax=ax, arrows=False)
    ax.set_title(f"{data['ell']}-isogeny graph over F_{data['p']}")
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_verify(results: list[dict], path) -> None:
    """Bar chart of checks per suite, failures stacked in red."""
    names = [r["suite"] for r in results]
    ok = [r["checked"] - len(r["failures"]) for r in results]
    bad = [len(r["failures"]) for r in results]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4))
    ax1.bar(names, ok, color="#55a868", label="passed")
    ax1.bar(names, bad, bottom=ok, color="#c44e52", label="failed")
    ax1.set_ylabel("checks")
    ax1.set_yscale("symlog")
    ax1.legend()
    ax1.tick_params(axis="x", rotation=30)
    for r in results:
        pts = sorted((int(k), v) for k, v in r["per_prime"].items())
        if pts:
            ax2.plot([k for k, _ in pts], [v for _, v in pts], ".", label=r["suite"], markersize=4)
    ax2.set_xlabel("p")
    ax2.set_ylabel("per-prime count")
    if ax2.lines:
        ax2.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
