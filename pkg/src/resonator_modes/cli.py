"""Command-line front end.

    resonator-modes jsf    [--config FILE] [--key value ...] [--out DIR] [--plot]
    resonator-modes qpg    [--method kernel|flat|perturbative|oracle] ...
    resonator-modes mqpg   ...
    resonator-modes sweep  --sweep gamma_over_dw --start 1e-3 --stop 1 --points 13 ...
    resonator-modes repro  fig2a|fig2b|fig2c|fig4a|fig4b|fig4c [--out DIR]

Rates are THz-scale values in units of 1/ps and times are in ps. With the
default ``rate_convention=angular`` a rate is used as an angular frequency as
given; ``rate_convention=ordinary`` multiplies every rate (including pump
widths inside pump specs) by 2 pi once, at parse time.

Exit codes: 0 success, 1 parameter error, 2 numerical-tolerance failure,
3 I/O error. Errors are printed to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import cspdc, csfg, mqpg
from .errors import DataError, NumericalResolutionError, ParameterError
from .grid import ContinuousAxis, make_grid
from .io import Check, MetricsReport, write_csv, write_matrix_csv
from .pump import PumpKind, PumpSet, parse_pump_spec

EXIT_OK, EXIT_PARAMETER, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3

DEFAULTS = {
    "jsf": {
        "mode": "dual", "gamma_s": 0.1, "gamma_i": 0.1, "iota_s": 0.0, "iota_i": 0.0,
        "eta": 0.1, "pump": "rect:10.0", "n_points": 512, "span_in_linewidths": 50.0,
        "approximation": "beta_of_idler", "idler_half_span": None,
    },
    "qpg": {
        "n_modes": 100, "window_T": 1.0, "gamma_over_dw": 0.01, "gamma": None, "eta": None,
        "iota_over_gamma": 0.0, "pump": "hg:2", "method": "kernel", "oversample": 8,
        "unitarity_tolerance": csfg.UNITARITY_TOLERANCE, "perturbative_phases": True,
    },
    "mqpg": {
        "n_modes": 100, "window_T": 1.0, "gamma_over_dw": 0.05, "pump": "hgset:0,1,2",
        "fsr_bins": None,
    },
    "sweep": {
        "sweep": "gamma_over_dw", "start": 1e-3, "stop": 1.0, "points": 13, "spacing": "log",
        "threshold_max": 0.1, "workers": 1,
    },
}
SWEEP_BASE = {"gamma_over_dw": "qpg", "iota_over_gamma": "jsf", "eta_factor": "qpg",
              "pump_ratio": "jsf"}
RATE_KEYS = {"gamma_s", "gamma_i", "iota_s", "iota_i", "gamma", "idler_half_span"}
COMMON = {"rate_convention": "angular", "seed": 0}

REPRO = {
    "fig2a": [("jsf", "jsf", {"mode": "dual", "pump": "rect:10.0"}),
              ("sweep", "sweep", {"sweep": "pump_ratio", "start": 2.0, "stop": 1000.0,
                                  "points": 12, "spacing": "log"})],
    "fig2b": [("sweep", ".", {"sweep": "iota_over_gamma", "start": 0.0, "stop": 1.0,
                              "points": 11, "spacing": "lin"})],
    "fig2c": [("jsf", ".", {"mode": "single", "gamma_s": 0.004, "pump": "hg:2:0.04"})],
    "fig4a": [("qpg", ".", {"gamma_over_dw": 0.01, "n_modes": 100, "pump": "hg:2"})],
    "fig4b": [("sweep", ".", {"sweep": "gamma_over_dw", "start": 1e-3, "stop": 1.0,
                              "points": 13, "spacing": "log"})],
    "fig4c": [("mqpg", ".", {"pump": "hgset:0,1,2", "gamma_over_dw": 0.05})],
}


class CliIOError(Exception):
    """Unreadable config or unwritable output directory."""


# --- configuration ------------------------------------------------------------

def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def parse_overrides(tokens) -> dict:
    """``--key value`` / ``--key=value`` pairs; values are JSON literals or strings."""
    out = {}
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if not tok.startswith("--") or len(tok) == 2:
            raise ParameterError(f"unexpected argument {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, raw = key.split("=", 1)
            i += 1
        else:
            if i + 1 >= len(tokens):
                raise ParameterError(f"missing value for --{key}")
            raw = tokens[i + 1]
            i += 2
        out[key.replace("-", "_")] = _parse_value(raw)
    return out


def load_config_file(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CliIOError(f"cannot read config {path}: {exc}") from None
    if path.suffix.lower() in (".yaml", ".yml"):
        try:
            import yaml
        except ImportError:
            raise ParameterError("YAML configs need PyYAML; use JSON instead") from None
        data = yaml.safe_load(text)
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ParameterError("config file must hold a key-value mapping")
    return data


def _scale_pump_spec(spec: str, factor: float) -> str:
    parsed = parse_pump_spec(spec)
    kind = parsed["kind"]
    if kind == "rect":
        return f"rect:{parsed['bandwidth'] * factor!r}"
    if kind in ("hg", "hgset") and parsed["width"] is not None:
        head = spec.rsplit(":", 1)[0]
        return f"{head}:{parsed['width'] * factor!r}"
    return spec


def build_config(command: str, file_values: dict, overrides: dict) -> dict:
    """Merge defaults, file values and overrides; apply the rate convention once."""
    base = dict(COMMON)
    if command == "sweep":
        sweep_key = overrides.get("sweep", file_values.get("sweep", DEFAULTS["sweep"]["sweep"]))
        if sweep_key not in SWEEP_BASE:
            raise ParameterError(f"sweep must be one of {sorted(SWEEP_BASE)}, got {sweep_key!r}")
        base.update(DEFAULTS[SWEEP_BASE[sweep_key]])
    base.update(DEFAULTS[command])
    if command == "sweep" and sweep_key == "eta_factor":
        base.update({"start": 0.1, "stop": 10.0, "points": 41, "spacing": "log",
                     "iota_over_gamma": 0.5})
    cfg = dict(base)
    for source in (file_values, overrides):
        unknown = set(source) - set(cfg)
        if unknown:
            raise ParameterError(f"unknown key(s) for {command}: {sorted(unknown)}")
        cfg.update(source)
    if cfg["rate_convention"] not in ("angular", "ordinary"):
        raise ParameterError("rate_convention must be 'angular' or 'ordinary'")
    if cfg["rate_convention"] == "ordinary":
        factor = 2 * np.pi
        for key in RATE_KEYS & set(cfg):
            if cfg[key] is not None:
                cfg[key] = float(cfg[key]) * factor
        if isinstance(cfg.get("pump"), str):
            cfg["pump"] = _scale_pump_spec(cfg["pump"], factor)
    pump = cfg.get("pump")
    if isinstance(pump, str) and pump.startswith("random:") and pump.count(":") == 1:
        cfg["pump"] = f"{pump}:{int(cfg['seed'])}"
    return cfg


UNITS = {"rates": "1/ps (THz-scale)", "times": "ps", "eta": "dimensionless",
         "probabilities": "per pump pulse (eta-scaled)"}


def _units(cfg):
    return dict(UNITS, rate_convention=cfg["rate_convention"])


# --- builders -----------------------------------------------------------------

def _jsf_objects(cfg):
    cs = cspdc.CavityParams(cfg["gamma_s"], cfg["iota_s"], label="signal")
    axis_s = cspdc.default_axis(cs.gamma, cfg["n_points"], cfg["span_in_linewidths"])
    if cfg["mode"] == "dual":
        ci = cspdc.CavityParams(cfg["gamma_i"], cfg["iota_i"], label="idler")
        axis_i = cspdc.default_axis(ci.gamma, cfg["n_points"], cfg["span_in_linewidths"])
        pump = None if cfg["pump"] in (None, "none") else parse_pump_spec(cfg["pump"], axis_s)
        return cspdc.build_jsf_dual(axis_s, axis_i, cs, ci, pump, cfg["eta"])
    if cfg["mode"] != "single":
        raise ParameterError("mode must be 'dual' or 'single'")
    spec = parse_pump_spec(cfg["pump"])
    if spec["kind"] != "hg" or spec["width"] is None:
        raise ParameterError("single-cavity mode needs an explicit hg:<order>:<width> pump")
    half = cfg["idler_half_span"] or 6.0 * spec["width"] * np.sqrt(spec["order"] + 1)
    axis_i = ContinuousAxis(0.0, half, cfg["n_points"])
    pump = parse_pump_spec(cfg["pump"], axis_i)
    return cspdc.build_jsf_single(axis_s, axis_i, cs, pump, cfg["eta"], cfg["approximation"])


def _qpg_params(cfg, gamma_over_dw=None, eta_factor=None) -> csfg.QpgParams:
    grid = make_grid(cfg["window_T"], cfg["n_modes"])
    pump = parse_pump_spec(cfg["pump"], grid)
    if isinstance(pump, PumpSet):
        raise ParameterError("qpg takes a single pump; use the mqpg command for pump sets")
    if gamma_over_dw is not None:
        gamma = gamma_over_dw * grid.bin_spacing
    elif cfg["gamma"] is not None:
        gamma = float(cfg["gamma"])
    else:
        gamma = float(cfg["gamma_over_dw"]) * grid.bin_spacing
    iota = float(cfg["iota_over_gamma"]) * gamma
    matched = np.sqrt((gamma + iota) * grid.window_T)
    if eta_factor is not None:
        eta = eta_factor * matched
    else:
        eta = matched if cfg["eta"] is None else float(cfg["eta"])
    return csfg.QpgParams(grid, gamma, eta, pump, iota)


def _plot(kind, out_dir, **data):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 4))
    if kind == "matrix":
        z = np.abs(data["matrix"])
        extent = data.get("extent")
        im = ax.imshow(z / z.max() if z.max() > 0 else z, origin="lower", aspect="auto",
                       extent=extent, cmap="viridis")
        fig.colorbar(im, ax=ax, label="|amplitude| / max")
        ax.set_xlabel(data["xlabel"])
        ax.set_ylabel(data["ylabel"])
    else:
        for name, values in data["curves"].items():
            ax.plot(data["x"], values, marker="o", ms=3, label=name)
        if data.get("log"):
            ax.set_xscale("log")
        ax.set_xlabel(data["xlabel"])
        ax.legend()
    fig.tight_layout()
    fig.savefig(Path(out_dir) / data["name"], dpi=120)
    plt.close(fig)


# --- commands -----------------------------------------------------------------

def run_jsf(cfg, out_dir: Path, plot: bool = False) -> MetricsReport:
    report = MetricsReport("jsf", cfg, _units(cfg))
    t0 = time.perf_counter()
    jsf = _jsf_objects(cfg)
    report.timings["build"] = time.perf_counter() - t0
    ws, wi = jsf.axis_s.points, jsf.axis_i.points
    if cfg["mode"] == "dual":
        t0 = time.perf_counter()
        m = cspdc.pair_metrics(jsf)
        report.timings["metrics"] = time.perf_counter() - t0
        report.metrics.update(m.as_dict())
        if m.degenerate:
            warnings.warn("eta = 0: the joint spectrum vanishes, metrics are degenerate")
        else:
            report.checks.append(Check("purity", m.purity, 0.9996, ">=", "target"))
            if jsf.record["pump"] is None:
                rel = abs(m.biphoton_probability_quadrature / m.biphoton_probability - 1)
                report.checks.append(Check("p_si quadrature vs closed form", rel, 1e-4, "<"))
    else:
        if cfg["eta"] == 0:
            warnings.warn("eta = 0: the joint spectrum vanishes, metrics are degenerate")
            report.metrics["degenerate"] = True
        else:
            report.metrics["purity"] = cspdc.jsf_purity(jsf)
            other = "beta_of_sum" if cfg["approximation"] == "beta_of_idler" else "beta_of_idler"
            alt = cspdc.build_jsf_single(jsf.axis_s, jsf.axis_i, jsf.record["cavity_s"],
                                         jsf.record["pump"], cfg["eta"], other)
            report.metrics[f"purity_{other}"] = cspdc.jsf_purity(alt)
            report.metrics["degenerate"] = False
        report.metrics["linewidth_s"] = jsf.record["cavity_s"].linewidth
    S, I = np.meshgrid(ws, wi, indexing="ij")
    write_csv(out_dir / "jsf.csv", ["omega_s", "omega_i", "re", "im", "abs"],
              [S, I, jsf.values.real, jsf.values.imag, np.abs(jsf.values)])
    report.files.append("jsf.csv")
    if plot:
        _plot("matrix", out_dir, matrix=jsf.values.T, name="jsf.png",
              extent=[ws[0], ws[-1], wi[0], wi[-1]], xlabel="omega_s", ylabel="omega_i")
        report.files.append("jsf.png")
    return report


def _qpg_checks(report, tp: csfg.TransferPair, tolerance: float, approximate: bool = False):
    if tp.params.internal_loss == 0:
        res = tp.unitarity_residual()
        report.metrics["unitarity_residual"] = res
        kind = "target" if approximate else "invariant"
        report.checks.append(Check("unitarity residual", res, tolerance, "<", kind))
        report.checks.append(Check("unitarity residual (1e-6 target)", res, 1e-6, "<", "target"))
    else:
        low = tp.deficit_min_eigenvalue()
        report.metrics["deficit_min_eigenvalue"] = low
        report.checks.append(Check("lossy deficit min eigenvalue", low, -1e-9, ">"))


def run_qpg(cfg, out_dir: Path, plot: bool = False) -> MetricsReport:
    report = MetricsReport("qpg", cfg, _units(cfg))
    params = _qpg_params(cfg)
    method = csfg.Method(cfg["method"])
    t0 = time.perf_counter()
    if method is csfg.Method.KERNEL:
        tp = csfg.kernel_transfer(params, oversample=cfg["oversample"], check=False)
    elif method is csfg.Method.PERTURBATIVE:
        tp = csfg.perturbative_transfer(params, phases=bool(cfg["perturbative_phases"]))
    else:
        tp = csfg.transfer(params, method)
    report.timings["transfer"] = time.perf_counter() - t0
    metrics = csfg.qpg_metrics(tp)
    report.metrics.update(metrics.as_dict())
    report.metrics.update({"method": method.value, "gamma": params.gamma, "eta": params.eta,
                           "gamma_over_dw": params.gamma_over_dw,
                           "internal_loss": params.internal_loss,
                           "kernel_prefactor_A": csfg.kernel_prefactor_A(params)})
    # a random pump is only flat in time as M -> infinity
    approximate = method is csfg.Method.FLAT_ANALYTIC and params.pump.kind is PumpKind.RANDOM_FLAT
    if approximate:
        ref = csfg.kernel_transfer(params, oversample=cfg["oversample"], check=False)
        report.metrics["flat_vs_kernel_deviation"] = csfg.relative_deviation(tp, ref)
    _qpg_checks(report, tp, cfg["unitarity_tolerance"], approximate)
    if method is csfg.Method.ODE_ORACLE:
        t0 = time.perf_counter()
        ref = csfg.kernel_transfer(params, oversample=cfg["oversample"], check=False)
        report.timings["kernel_reference"] = time.perf_counter() - t0
        dev = csfg.relative_deviation(tp, ref)
        report.metrics["kernel_vs_oracle_deviation"] = dev
        tol = 1e-6 if params.internal_loss == 0 else 1e-5
        report.checks.append(Check("kernel vs oracle deviation", dev, tol, "<"))
    for check_name in ("separability", "fidelity_to_pump"):
        report.checks.append(Check(check_name, report.metrics[check_name], 0.995, ">=", "target"))
    n = params.grid.indices
    write_matrix_csv(out_dir / "transfer_s.csv", n, n, tp.G_s, ("n_out", "n_in"))
    write_matrix_csv(out_dir / "transfer_i.csv", n, n, tp.G_i, ("n_out", "n_in"))
    report.files += ["transfer_s.csv", "transfer_i.csv"]
    if plot:
        ext = [n[0], n[-1], n[0], n[-1]]
        _plot("matrix", out_dir, matrix=tp.G_s, name="transfer_s.png", extent=ext,
              xlabel="input bin n_s", ylabel="output bin n_i")
        report.files.append("transfer_s.png")
    return report


def run_mqpg(cfg, out_dir: Path, plot: bool = False) -> MetricsReport:
    report = MetricsReport("mqpg", cfg, _units(cfg))
    grid = make_grid(cfg["window_T"], cfg["n_modes"])
    pumps = parse_pump_spec(cfg["pump"], grid)
    if not isinstance(pumps, PumpSet):
        pumps = PumpSet((pumps,))
    config = mqpg.matched_config(grid, cfg["gamma_over_dw"], pumps, cfg["fsr_bins"])
    t0 = time.perf_counter()
    U = mqpg.build_multiport(config)
    cross = mqpg.cross_term_check(config)
    seps = [mqpg.per_resonance_metrics(config, m, check=False).separability
            for m in range(len(pumps))]
    report.timings["total"] = time.perf_counter() - t0
    report.metrics.update({"row_orthonormality_residual": U.row_residual,
                           "is_unitary": U.is_unitary, "n_resonances": len(pumps),
                           "cross_term_max_residual": cross.max_residual,
                           "per_resonance_separability": seps})
    report.checks.append(Check("row orthonormality residual", U.row_residual, 1e-8, "<"))
    report.checks.append(Check("cross-term residual", cross.max_residual, 1e-8, "<"))
    report.checks.append(Check("min per-resonance separability", min(seps), 0.995, ">=", "target"))
    write_matrix_csv(out_dir / "unitary.csv", U.resonance_labels, U.bin_labels, U.matrix, ("m", "l"))
    report.files.append("unitary.csv")
    if plot:
        _plot("matrix", out_dir, matrix=U.matrix, name="unitary.png", xlabel="bin position l",
              ylabel="resonance m")
        report.files.append("unitary.png")
    return report


# --- sweeps -------------------------------------------------------------------

def _loss_point(x, cfg):
    gamma = cfg["gamma_s"]
    lossless = cspdc.CavityParams(gamma)
    lossy = cspdc.CavityParams(gamma, x * gamma)
    p0 = cspdc.pair_probability_closed_form(lossless, lossless, 1.0)
    p = cspdc.pair_probability_closed_form(lossy, lossy, 1.0)
    pq = cspdc.pair_probability_quadrature(lossy, lossy, None, 1.0)
    return {"normalized_linewidth": lossy.linewidth / gamma, "normalized_pair_rate": p / p0,
            "normalized_heralding": cspdc.heralding_closed_form(lossy),
            "pair_rate_quadrature_rel_error": abs(pq / p - 1)}


def _purity_point(x, cfg):
    c = dict(cfg, mode="dual", pump=f"rect:{float(x * cfg['gamma_s'])!r}")
    return {"purity": cspdc.jsf_purity(_jsf_objects(c))}


def _qpg_point(x, cfg):
    tp = csfg.kernel_transfer(_qpg_params(cfg, gamma_over_dw=x), oversample=cfg["oversample"],
                              check=False)
    m = csfg.qpg_metrics(tp)
    out = m.as_dict()
    out["unitarity_residual"] = tp.unitarity_residual()
    return out


def _eta_point(x, cfg):
    params = _qpg_params(cfg, eta_factor=x)
    mu, nu, ups = csfg.lossy_coefficients(params)
    return {"conversion_efficiency": abs(mu) ** 2, "abs_nu_sq": abs(nu) ** 2,
            "abs_upsilon_sq": abs(ups) ** 2,
            "modulus_sum_error": abs(abs(mu) ** 2 + abs(nu) ** 2 + abs(ups) ** 2 - 1)}


POINT_FUNCTIONS = {"iota_over_gamma": _loss_point, "pump_ratio": _purity_point,
                   "gamma_over_dw": _qpg_point, "eta_factor": _eta_point}


def _sweep_values(cfg):
    n = int(cfg["points"])
    if n < 2:
        raise ParameterError("a sweep needs at least 2 points")
    if cfg["spacing"] == "log":
        if not (cfg["start"] > 0 and cfg["stop"] > 0):
            raise ParameterError("log sweeps need positive bounds")
        return np.geomspace(cfg["start"], cfg["stop"], n)
    if cfg["spacing"] == "lin":
        return np.linspace(cfg["start"], cfg["stop"], n)
    raise ParameterError("spacing must be 'lin' or 'log'")


def _sweep_checks(report, key, xs, rows, cfg):
    col = lambda name: np.array([r[name] for r in rows])  # noqa: E731
    if key == "iota_over_gamma":
        exact = max(np.max(np.abs(col("normalized_linewidth") - (1 + xs))),
                    np.max(np.abs(col("normalized_pair_rate") - 1 / (1 + xs) ** 2)),
                    np.max(np.abs(col("normalized_heralding") - 1 / (1 + xs))))
        report.checks.append(Check("loss curves vs 1+x, 1/(1+x)^2, 1/(1+x)", exact, 1e-12, "<"))
        report.checks.append(Check("pair rate quadrature rel error",
                                   float(col("pair_rate_quadrature_rel_error").max()), 1e-4, "<"))
    elif key == "pump_ratio":
        p = col("purity")
        drops = float(np.max(np.concatenate([[0.0], p[:-1] - p[1:]])))
        report.checks.append(Check("purity monotone (largest drop)", drops, 1e-12, "<="))
        report.checks.append(Check("max purity", float(p.max()), 0.9996, ">=", "target"))
        reached = xs[p >= 0.9996]
        report.metrics["pump_ratio_reaching_0.9996"] = float(reached[0]) if reached.size else None
    elif key == "gamma_over_dw":
        inside = xs <= cfg["threshold_max"] * (1 + 1e-12)
        report.metrics["points_at_or_below_threshold"] = int(inside.sum())
        for name, tol in (("separability", 0.995), ("fidelity_to_pump", 0.995)):
            report.checks.append(Check(f"min {name} for gamma/dw <= {cfg['threshold_max']}",
                                       float(col(name)[inside].min()), tol, ">=", "target"))
        res = float(col("unitarity_residual")[inside].max())
        report.checks.append(Check("max unitarity residual", res, cfg["unitarity_tolerance"], "<"))
        report.checks.append(Check("max unitarity residual (1e-6 target)", res, 1e-6, "<", "target"))
    elif key == "eta_factor":
        from scipy.optimize import minimize_scalar

        report.checks.append(Check("three-coefficient modulus identity",
                                   float(col("modulus_sum_error").max()), 1e-12, "<"))
        best = minimize_scalar(lambda u: -_eta_point(np.exp(u), cfg)["conversion_efficiency"],
                               bounds=(np.log(0.1), np.log(10.0)), method="bounded",
                               options={"xatol": 1e-10})
        argmax, peak = float(np.exp(best.x)), float(-best.fun)
        expected = 1 / (1 + cfg["iota_over_gamma"])
        report.metrics.update({"argmax_eta_factor": argmax, "max_conversion_efficiency": peak,
                               "expected_max": expected})
        report.checks.append(Check("argmax eta / sqrt((gamma+iota)T) - 1", abs(argmax - 1), 1e-6, "<"))
        report.checks.append(Check("max CE - 1/(1+iota/gamma)", abs(peak - expected), 1e-6, "<"))


def run_sweep(cfg, out_dir: Path, plot: bool = False) -> MetricsReport:
    report = MetricsReport("sweep", cfg, _units(cfg))
    key = cfg["sweep"]
    xs = _sweep_values(cfg)
    func = POINT_FUNCTIONS[key]
    t0 = time.perf_counter()
    workers = int(cfg["workers"])
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(func, xs, [cfg] * len(xs)))
    else:
        rows = [func(x, cfg) for x in xs]
    report.timings["sweep"] = time.perf_counter() - t0
    names = list(rows[0])
    write_csv(out_dir / "sweep.csv", [key] + names, [xs] + [[r[n] for r in rows] for n in names])
    report.files.append("sweep.csv")
    report.metrics["points"] = len(xs)
    _sweep_checks(report, key, xs, rows, cfg)
    if plot:
        curves = {n: [r[n] for r in rows] for n in names if "error" not in n}
        _plot("curves", out_dir, x=xs, curves=curves, name="sweep.png", xlabel=key,
              log=cfg["spacing"] == "log")
        report.files.append("sweep.png")
    return report


RUNNERS = {"jsf": run_jsf, "qpg": run_qpg, "mqpg": run_mqpg, "sweep": run_sweep}


# --- entry point --------------------------------------------------------------

def _prepare_out(path) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise CliIOError(f"output directory {out} is not writable: {exc}") from None
    return out


def execute(command: str, cfg: dict, out_dir, plot: bool = False) -> MetricsReport:
    out = _prepare_out(out_dir)
    t0 = time.perf_counter()
    report = RUNNERS[command](cfg, out, plot)
    report.timings["wall"] = time.perf_counter() - t0
    try:
        report.write(out)
    except OSError as exc:
        raise CliIOError(str(exc)) from None
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="resonator-modes", description=__doc__.split("\n")[0])
    parser.add_argument("command", choices=["jsf", "qpg", "mqpg", "sweep", "repro"])
    parser.add_argument("figure", nargs="?", help="figure id for repro")
    parser.add_argument("--config", help="JSON or YAML key-value file")
    parser.add_argument("--out", help="output directory (default out/<command>)")
    parser.add_argument("--plot", action="store_true", help="also render PNG plots")
    parser.add_argument("--method", help="qpg method: kernel, flat, perturbative, oracle")
    parser.add_argument("--seed", type=int, help="seed for random pumps")
    return parser


def _emit_error(exc: Exception, code: int) -> int:
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    print(json.dumps(payload), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    try:
        overrides = parse_overrides(extra)
        if args.method is not None:
            overrides["method"] = args.method
        if args.seed is not None:
            overrides["seed"] = args.seed
        file_values = load_config_file(args.config) if args.config else {}
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            if args.command == "repro":
                if args.figure not in REPRO:
                    raise ParameterError(f"repro needs one of {sorted(REPRO)}")
                root = Path(args.out or f"out/{args.figure}")
                reports = []
                for command, sub, fixed in REPRO[args.figure]:
                    cfg = build_config(command, file_values, dict(fixed, **overrides))
                    reports.append(execute(command, cfg, root / sub, args.plot))
            else:
                if args.figure is not None:
                    raise ParameterError(f"unexpected positional argument {args.figure!r}")
                cfg = build_config(args.command, file_values, overrides)
                reports = [execute(args.command, cfg, args.out or f"out/{args.command}", args.plot)]
        for w in caught:
            print(json.dumps({"warning": str(w.message)}), file=sys.stderr)
        failed = [c.as_dict() for r in reports for c in r.checks
                  if c.kind == "invariant" and not c.passed]
        if failed:
            print(json.dumps({"error": "NumericalToleranceFailure", "failed_checks": failed,
                              "exit_code": EXIT_NUMERICAL}), file=sys.stderr)
            return EXIT_NUMERICAL
        return EXIT_OK
    except CliIOError as exc:
        return _emit_error(exc, EXIT_IO)
    except (ParameterError, DataError, ValueError, KeyError, IndexError) as exc:
        return _emit_error(exc, EXIT_PARAMETER)
    except NumericalResolutionError as exc:
        return _emit_error(exc, EXIT_NUMERICAL)
    except OSError as exc:
        return _emit_error(exc, EXIT_IO)


if __name__ == "__main__":
    sys.exit(main())
