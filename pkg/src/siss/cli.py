"""Command-line drivers: tables, constants, Bernstein constants, density checks,
reconstruction, sharpness sweeps and Gabor checks. Outputs are CSV or JSON."""

import argparse
import json
import os
import sys
import warnings
from contextlib import nullcontext
from pathlib import Path

import numpy as np

from .constants import krein_favard, table_constant, wirtinger_constant
from .gabor import TimeFrequencyGrid, boxcar, gabor_frame_ratio, gabor_test_signals, window_cover
from .generators import from_descriptor, make_generator
from .reconstruct import (ContractionError, DivergenceError, Signal, bernstein_for,
                          finite_section_bounds, iterate_reconstruct, sampling_window)
from .sampling import density_report, gap_threshold, sampling_set_from_json
from .spectral import bernstein_constant, bernstein_constant_closed
from .tables import PRINTED, TableSpec, render_table, table_csv, table_markdown

EXIT_OK, EXIT_COMPLIANCE, EXIT_DIVERGENCE, EXIT_CONFIG = 0, 2, 3, 4
COMMANDS = ("density-check", "reconstruct", "sharpness", "gabor-check",
            "constants", "bernstein", "tables")


class ConfigError(ValueError):
    pass


def _dump(path, obj):
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _require(cfg, key):
    if key not in cfg:
        raise ConfigError(f"config is missing {key!r}")
    return cfg[key]


def _generator(cfg):
    return from_descriptor(_require(cfg, "generator"))


# --- commands ---------------------------------------------------------------


def cmd_tables(cfg, args, out):
    tol = args.tolerance if args.tolerance is not None else 2e-3
    names = cfg.get("tables", list(PRINTED)) if "table" not in cfg else [cfg["table"]]
    for name in names:
        spec = TableSpec(name, tuple(cfg["ks"]) if "ks" in cfg else None,
                         tuple(cfg.get("nus", (1, 2, 3, 4))), cfg.get("m"))
        cells = render_table(spec, tolerance=tol)
        (out / f"{name}.csv").write_text(table_csv(cells))
        if args.markdown:
            (out / f"{name}.md").write_text(table_markdown(cells))
    return EXIT_OK


def cmd_constants(cfg, args, out):
    rs = cfg.get("r", [1, 2, 3])
    methods = cfg.get("methods", ["exact-table", "bound-lower", "bound-upper", "numeric-bvp"])
    lines = ["constant,index,method,value,uncertainty"]
    for r in rs:
        for method in methods:
            try:
                c = wirtinger_constant(r, method)
            except ValueError:
                continue
            lines.append(f"c,{r},{method},{float(c.value)!r},{float(c.uncertainty)!r}")
    for m in cfg.get("m", list(range(6))):
        K = krein_favard(m)
        lines.append(f"K,{m},series-{K.terms_used},{float(K.value)!r},{float(K.remainder_bound)!r}")
    (out / "constants.csv").write_text("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_bernstein(cfg, args, out):
    g = _generator(cfg)
    rows = []
    for s in cfg.get("s", [1, 2]):
        numeric = bernstein_constant(g, s)
        try:
            closed = bernstein_constant_closed(g, s)
        except ValueError:
            closed = None
        rows.append({"s": s, "numeric": numeric, "closed": closed,
                     "difference": None if closed is None else numeric - closed,
                     "certified": closed is not None})
    _dump(out / "bernstein.json", {"generator": g.descriptor(), "constants": rows})
    return EXIT_OK


def cmd_density(cfg, args, out):
    X = sampling_set_from_json(_require(cfg, "sampling"))
    nus = cfg.get("nus", [1, 2, 3, 4])
    thresholds = None
    if "k" in cfg and "generator" in cfg:
        g, k = _generator(cfg), int(cfg["k"])
        c_k = table_constant(k).value
        M = bernstein_for(g, 2 * k)
        thresholds = {nu: gap_threshold(nu, k, c_k, M) for nu in nus}
    rep = density_report(X, nus=nus, thresholds=thresholds)
    _dump(out / "density.json", rep.as_dict())
    if thresholds and not any(m > 0 for m in rep.margins.values()):
        return EXIT_COMPLIANCE
    return EXIT_OK


def _test_signal(cfg, g, window, seed):
    if "coeffs" in cfg:
        c = np.asarray(cfg["coeffs"], dtype=float)
        if len(c) != window[1] - window[0] + 1:
            raise ConfigError("coeffs length does not match the window")
        return Signal(g, window[0], c)
    rng = np.random.default_rng(seed)
    return Signal(g, window[0], rng.standard_normal(window[1] - window[0] + 1))


def cmd_reconstruct(cfg, args, out):
    g = _generator(cfg)
    window = tuple(int(v) for v in _require(cfg, "window"))
    samp = dict(_require(cfg, "sampling"))
    samp.setdefault("window", list(sampling_window(g, window)))
    X = sampling_set_from_json(samp)
    nu, k = int(cfg.get("nu", 1)), int(cfg.get("k", 1))
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    truth = _test_signal(cfg, g, window, seed)
    samples = np.stack([truth(X.points, l) for l in range(k)], axis=1)
    tol = args.tolerance if args.tolerance is not None else float(cfg.get("tol", 1e-10))
    try:
        f, trace = iterate_reconstruct(g, X, nu, k, samples, window,
                                       max_iter=int(cfg.get("max_iter", 50)), tol=tol,
                                       truth=truth, warn=bool(cfg.get("warn", False)))
    except DivergenceError as exc:
        _dump(out / "trace.json", {"diverged": True, **exc.trace.as_dict()})
        return EXIT_DIVERGENCE
    except ContractionError as exc:
        _dump(out / "trace.json", {"compliant": False, "reason": str(exc)})
        return EXIT_COMPLIANCE
    result = trace.as_dict()
    result["relative_error"] = (truth - f).norm() / truth.norm()
    _dump(out / "trace.json", result)
    if cfg.get("csv"):
        res = float(cfg.get("resolution", 0.05))
        xs = np.arange(window[0], window[1] + res / 2, res)
        lines = ["x,value"] + [f"{x:.6f},{float(v)!r}" for x, v in zip(xs, f(xs))]
        (out / "signal.csv").write_text("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_sharpness(cfg, args, out):
    g = from_descriptor(cfg.get("generator", {"kind": "sinc"}))
    pattern = cfg.get("pattern", "kadec_quarter")
    params = cfg.get("params", {})
    k = int(cfg.get("k", 1))
    lines = ["window,A_est,B_est"]
    for W in cfg.get("windows", [16, 32, 64]):
        win = (-(W // 2), W - W // 2 - 1)
        X = sampling_set_from_json({"pattern": pattern, "params": params,
                                    "window": list(sampling_window(g, win))})
        A, B = finite_section_bounds(g, X, k, win)
        lines.append(f"{W},{A:.12g},{B:.12g}")
    (out / "sharpness.csv").write_text("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_gabor(cfg, args, out):
    g = make_generator("sinc")
    window = tuple(int(v) for v in cfg.get("window", [-8, 7]))
    y = np.asarray(_require(cfg, "y"), dtype=float)
    if "rows" in cfg:
        rows = [sampling_set_from_json({**r, "window": r.get("window",
                                        list(sampling_window(g, window)))})
                for r in cfg["rows"]]
    else:
        row = dict(_require(cfg, "row"))
        row.setdefault("window", list(sampling_window(g, window)))
        rows = [sampling_set_from_json(row)] * len(y)
    k, nu = int(cfg.get("k", 1)), int(cfg.get("nu", 1))
    cover = window_cover(boxcar(1.0), y, band=(y[0] - 0.5, y[-1] + 0.5))
    if not cover.covered:
        _dump(out / "gabor.json", {"a_est": cover.a, "b_est": cover.b, "covered": False})
        return EXIT_COMPLIANCE
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    signals = gabor_test_signals(g, window, y, int(cfg.get("signals", 20)), seed)
    grid = TimeFrequencyGrid(y, rows)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = gabor_frame_ratio(g, grid, k, signals, window, nu=nu)
    result = rep.as_dict()
    result["covered"] = True
    result["ratios"] = rep.ratios
    _dump(out / "gabor.json", result)
    lo, hi = rep.sandwich
    inside = lo * (1 - 1e-6) <= rep.lower and rep.upper <= hi * (1 + 1e-6)
    return EXIT_OK if inside and rep.compliance["compliant"] else EXIT_COMPLIANCE


HANDLERS = {
    "tables": cmd_tables,
    "constants": cmd_constants,
    "bernstein": cmd_bernstein,
    "density-check": cmd_density,
    "reconstruct": cmd_reconstruct,
    "sharpness": cmd_sharpness,
    "gabor-check": cmd_gabor,
}


def build_parser():
    p = argparse.ArgumentParser(prog="siss", description=__doc__)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", type=Path, help="JSON configuration file")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    p.add_argument("--seed", type=int, help="overrides the seed in the config")
    p.add_argument("--markdown", action="store_true", help="also write tables as markdown")
    p.add_argument("--tolerance", type=float, help="table tolerance or iteration tolerance")
    return p


def _thread_limit():
    n = os.environ.get("SISS_THREADS")
    if not n:
        return nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=int(n))


def run(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = json.loads(args.config.read_text()) if args.config else {}
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
        args.out.mkdir(parents=True, exist_ok=True)
        with _thread_limit():
            return HANDLERS[args.command](cfg, args, args.out)
    except (ConfigError, json.JSONDecodeError, OSError, KeyError, TypeError, ValueError) as exc:
        print(f"siss {args.command}: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
