"""SVG figures drawn from the CSV row dicts the CLI writes.

Plots are a convenience layer; the CSV files are the data of record.
"""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# Settings

plt.rcParams["axes.grid"] = True
plt.rcParams["figure.autolayout"] = True
plt.rcParams["font.size"] = 11.0
plt.rcParams["legend.fontsize"] = "small"
plt.rcParams["svg.fonttype"] = "path"
plt.rcParams["svg.hashsalt"] = "grandsec"


def _figure(ncols=2):
    return plt.subplots(1, ncols, figsize=(5.2 * ncols, 4.0))


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _markers(ax, capacity_x, min_capacity_x):
    if capacity_x is not None:
        ax.axvline(capacity_x, color="k", ls="--", lw=0.8)
    if min_capacity_x is not None:
        ax.axvline(min_capacity_x, color="k", ls=":", lw=0.8)


def plot_exponents(rows, n_list, left_path, right_path):
    """Success-probability estimate and ``n g*`` against ``-log10 p``."""
    x = [r["neglog10_p"] for r in rows]
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    for n in n_list:
        ax.plot(x, [r[f"succ_prob_est_n{n}"] for r in rows], label=f"n={n}")
    ax.set_xlabel(r"$-\log_{10}(p)$")
    ax.set_ylabel("approx. success probability")
    ax.invert_xaxis()
    ax.legend()
    _save(fig, left_path)

    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    for n in n_list:
        ys = [r[f"n_g_star_n{n}"] for r in rows]
        ax.plot(x, [math.nan if y is None else y for y in ys], label=f"n={n}")
    ax.set_xlabel(r"$-\log_{10}(p)$")
    ax.set_ylabel(r"$\log_2$ max confident queries")
    ax.invert_xaxis()
    ax.legend()
    _save(fig, right_path)


def _by_a(rows):
    groups = {}
    for r in rows:
        groups.setdefault(r["a"], []).append(r)
    return groups


def _val(v):
    return math.nan if v is None else v


def plot_sweep(rows, stem, capacity_x=None, min_capacity_x=None):
    """BLER / mean-queries, success / fraction-decoded and queries-per-success panels."""
    groups = _by_a(rows)
    cmap = plt.get_cmap("coolwarm")
    keys = sorted(groups, key=lambda a: math.inf if a == "unbounded" else a)
    colors = {a: ("tab:blue" if a == "unbounded" else cmap(1 - i / max(1, len(keys) - 1)))
              for i, a in enumerate(keys)}
    paths = []

    fig, (left, right) = _figure()
    for a in keys:
        g = groups[a]
        x = [r["neglog10_p"] for r in g]
        left.semilogy(x, [_val(r["bler"]) for r in g], color=colors[a], label=f"a={a}")
        right.semilogy(x, [_val(r["mean_queries"]) for r in g], color=colors[a], label=f"a={a}")
    left.set_ylabel("BLER")
    right.set_ylabel("mean queries")
    for ax in (left, right):
        ax.set_xlabel(r"$-\log_{10}(p)$")
        ax.invert_xaxis()
        _markers(ax, capacity_x, min_capacity_x)
    left.legend()
    paths.append(f"{stem}_bler_queries.svg")
    _save(fig, paths[-1])

    fig, (left, right) = _figure()
    for a in keys:
        g = groups[a]
        x = [r["neglog10_p"] for r in g]
        left.plot(x, [_val(r["success_prob"]) for r in g], color=colors[a], label=f"a={a}")
        left.plot(x, [_val(r["cond_success_prob"]) for r in g], color=colors[a], ls=":")
        right.plot(x, [_val(r["frac_decoded"]) for r in g], color=colors[a], label=f"a={a}")
    left.set_ylabel("success probability (dotted: given decoded)")
    right.set_ylabel("fraction not abandoned")
    for ax in (left, right):
        ax.set_xlabel(r"$-\log_{10}(p)$")
        ax.invert_xaxis()
        _markers(ax, capacity_x, min_capacity_x)
    left.legend()
    paths.append(f"{stem}_success.svg")
    _save(fig, paths[-1])

    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    for a in keys:
        g = groups[a]
        ax.semilogy([r["neglog10_p"] for r in g], [_val(r["mean_queries_per_success"]) for r in g],
                    color=colors[a], label=f"a={a}")
    ax.set_xlabel(r"$-\log_{10}(p)$")
    ax.set_ylabel("queries per correct decoding")
    ax.invert_xaxis()
    _markers(ax, capacity_x, min_capacity_x)
    ax.legend()
    paths.append(f"{stem}_queries_per_success.svg")
    _save(fig, paths[-1])
    return paths


def plot_thresholds(rows, path, capacity_x=None, min_capacity_x=None):
    x = [-math.log10(r["p"]) for r in rows]
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    ax.plot(x, [_val(r["n_g_star_theory"]) for r in rows], color="k", label="theory")
    ax.plot(x, [_val(r["a_empirical_50pct"]) for r in rows], color="tab:red", marker="o", label="empirical 50%")
    ax.set_xlabel(r"$-\log_{10}(p)$")
    ax.set_ylabel(r"$\log_2$ queries")
    ax.invert_xaxis()
    _markers(ax, capacity_x, min_capacity_x)
    ax.legend()
    _save(fig, path)
    return path
