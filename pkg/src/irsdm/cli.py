"""Command-line surface: single runs, preset figure sweeps, generic
sweeps, and the complexity table.

Config files are flat ``key = value`` text (see config.schema.txt at the
repository root); angles accept plain radians or pi fractions like
``5pi/36``. Results are CSV with a header row and 12-significant-digit
numbers; each figure also gets a self-contained matplotlib plot script
that reads its CSV. Diagnostics verbosity comes from the IRSDM_LOG
environment variable (DEBUG/INFO/WARNING/ERROR).
"""

import argparse
import csv
import dataclasses
import hashlib
import json
import logging
import math
import os
import re
import sys
import time
from dataclasses import replace

from . import __version__
from .channel import ScenarioConfig
from .errors import ConfigError, IrsdmError
from .experiments import (SCHEMES, SweepSpec, apply_sweep_variable,
                          flops_gao, flops_zf, run_scheme, run_sweep)
from .opt_gao import GaoSettings
from .opt_zf import ZfSettings

log = logging.getLogger(__name__)

_INT_KEYS = ("n_a", "n_b", "n_e", "m")
_FLOAT_KEYS = ("beta1", "beta2", "beta3", "alpha", "spacing_over_wavelength",
               "d_ai", "d_ab", "d_ae", "d_ib", "d_ie")
_ANGLE_KEYS = tuple(f"theta_{kind}_{link}" for link in ("ai", "ab", "ae", "ib", "ie")
                    for kind in ("t", "r"))
_POWER_KEYS = ("ps_dbm", "ps_watts")
_NOISE_KEYS = ("sigma2", "snr_db")
KNOWN_KEYS = _INT_KEYS + _FLOAT_KEYS + _ANGLE_KEYS + _POWER_KEYS + _NOISE_KEYS

SWEEP_COLUMNS = ("scheme", "variable", "value", "trial", "r_b", "r_e", "r_s",
                 "rps", "iterations_used", "flops_estimate", "mode",
                 "eve_mode", "error")
FIG2_COLUMNS = ("scheme", "M", "iteration", "rps", "r_s")

_PI_RE = re.compile(
    r"([+-]?(?:[0-9]+\.?[0-9]*|\.[0-9]+)?)\s*\*?\s*pi"
    r"(?:\s*/\s*((?:[0-9]+\.?[0-9]*|\.[0-9]+)))?")


def parse_number(text: str) -> float:
    """Float literal or a pi fraction such as 'pi', '5pi/36', '2*pi/5'."""
    text = text.strip()
    m = _PI_RE.fullmatch(text)
    if m:
        coef_text = m.group(1)
        coef = 1.0 if coef_text in ("", "+") else (-1.0 if coef_text == "-"
                                                   else float(coef_text))
        div = float(m.group(2)) if m.group(2) else 1.0
        return coef * math.pi / div
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"cannot parse number {text!r}") from None


def _read_pairs(path: str) -> dict:
    pairs = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in KNOWN_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            if key in pairs:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            pairs[key] = value
    return pairs


def parse_config(path: str | None) -> ScenarioConfig:
    """Build a ScenarioConfig from a key-value file; missing keys take
    the package defaults and every applied default is echoed at INFO
    level. ``path=None`` means the all-defaults scenario."""
    pairs = _read_pairs(path) if path is not None else {}
    if all(k in pairs for k in _POWER_KEYS):
        raise ConfigError("give either ps_dbm or ps_watts, not both")
    if all(k in pairs for k in _NOISE_KEYS):
        raise ConfigError("give either sigma2 or snr_db, not both")

    kwargs = {}
    for key in _INT_KEYS:
        if key in pairs:
            try:
                kwargs[key] = int(pairs[key])
            except ValueError:
                raise ConfigError(f"key {key}: expected an integer, got {pairs[key]!r}") from None
    for key in _FLOAT_KEYS:
        if key in pairs:
            kwargs[key] = parse_number(pairs[key])
    if "ps_dbm" in pairs:
        kwargs["ps"] = 10.0 ** ((parse_number(pairs["ps_dbm"]) - 30.0) / 10.0)
    elif "ps_watts" in pairs:
        kwargs["ps"] = parse_number(pairs["ps_watts"])

    defaults = ScenarioConfig()
    angles = defaults.angles
    for key in _ANGLE_KEYS:
        if key in pairs:
            _, kind, link = key.split("_")
            pair = getattr(angles, link)
            fieldname = "departure" if kind == "t" else "arrival"
            try:
                angles = replace(angles, **{link: replace(pair, **{fieldname: parse_number(pairs[key])})})
            except ConfigError as exc:
                raise ConfigError(f"key {key}: {exc}") from None
    kwargs["angles"] = angles

    ps = kwargs.get("ps", defaults.ps)
    if "sigma2" in pairs:
        kwargs["sigma2"] = parse_number(pairs["sigma2"])
    elif "snr_db" in pairs:
        kwargs["sigma2"] = ps / 10.0 ** (parse_number(pairs["snr_db"]) / 10.0)

    try:
        cfg = replace(defaults, **kwargs)
    except ConfigError:
        raise
    for field in dataclasses.fields(ScenarioConfig):
        if field.name not in kwargs and field.name != "angles":
            log.info("default applied: %s = %r", field.name, getattr(cfg, field.name))
    return cfg


def config_digest(cfg: ScenarioConfig) -> str:
    """sha256 over the canonical sorted key=value form of the resolved
    config; stable under key reordering in the source file."""
    flat = {}

    def walk(prefix, obj):
        if dataclasses.is_dataclass(obj):
            for f in dataclasses.fields(obj):
                walk(f"{prefix}{f.name}.", getattr(obj, f.name))
        else:
            flat[prefix[:-1]] = repr(obj)

    walk("", cfg)
    text = "\n".join(f"{k}={flat[k]}" for k in sorted(flat))
    return hashlib.sha256(text.encode()).hexdigest()


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}j"


def write_manifest(out_dir: str, command: str, cfg: ScenarioConfig,
                   seed: int, outputs: list[str]) -> str:
    path = os.path.join(out_dir, "manifest.json")
    payload = {
        "tool": "irsdm",
        "version": __version__,
        "command": command,
        "seed": seed,
        "config_digest": config_digest(cfg),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "outputs": sorted(outputs),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    return path


def write_sweep_csv(path: str, rows, extra_columns=(), newline="\n"):
    columns = SWEEP_COLUMNS + tuple(extra_columns)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator=newline)
        writer.writerow(columns)
        for row in rows:
            base = [row.scheme, row.variable, _fmt(row.value), row.trial,
                    _fmt(row.r_b), _fmt(row.r_e), _fmt(row.r_s), _fmt(row.rps),
                    row.iterations_used, _fmt(row.flops_estimate),
                    row.mode, row.eve_mode, row.error]
            for col in extra_columns:
                base.append(_fmt(getattr(row, "_extra", {}).get(col, "")))
            writer.writerow(base)


def _settings_from_args(args):
    gao = GaoSettings(safeguard=not getattr(args, "no_safeguard", False))
    zf = ZfSettings(enforce_zf_in_subproblem=not getattr(args, "literal_zf", False))
    return gao, zf


def _dump_solution(path: str, scheme: str, result) -> None:
    lines = [f"scheme = {scheme}"]
    rep = result.report
    for name in ("r_b", "r_e", "r_s", "rps"):
        lines.append(f"{name} = {_fmt(getattr(rep, name))}")
    if result.trace is not None:
        lines.append(f"iterations_used = {result.trace.iterations_used}")
        lines.append(f"converged = {result.trace.converged}")
    sol = result.solution
    if sol is not None:
        for name in ("u_b1", "u_b2", "u_e1", "u_e2"):
            vec = getattr(sol, name)
            for i, z in enumerate(vec):
                lines.append(f"{name}[{i}] = {_fmt_complex(z)}")
        if scheme != "NoIRS":
            for i, z in enumerate(sol.theta):
                lines.append(f"theta[{i}] = {_fmt_complex(z)}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_solve(args) -> int:
    cfg = parse_config(args.config)
    gao, zf = _settings_from_args(args)
    result = run_scheme(args.scheme, cfg, seed=args.seed,
                        gao_settings=gao, zf_settings=zf)
    rep = result.report
    print(f"scheme = {args.scheme}")
    for name in ("r_b", "r_e", "r_s", "rps"):
        print(f"{name} = {_fmt(getattr(rep, name))}")
    if result.trace is not None:
        print(f"iterations_used = {result.trace.iterations_used}")
        print(f"converged = {result.trace.converged}")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        dump = os.path.join(args.out, f"solve_{args.scheme}.txt")
        _dump_solution(dump, args.scheme, result)
        write_manifest(args.out, "solve", cfg, args.seed, [dump])
        print(f"solution written to {dump}")
    return 0


_PLOT_HEADER = '''\
#!/usr/bin/env python3
"""Plot {png} from {csv} (auto-generated)."""
import csv
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

rows = []
with open("{csv}", "r", encoding="utf-8") as fh:
    for row in csv.DictReader(fh):
        rows.append(row)
'''

_PLOT_SWEEP_BODY = '''\
schemes = sorted({{r["scheme"] for r in rows}})
plt.figure(figsize=(7, 5))
for scheme in schemes:
    pts = {{}}
    for r in rows:
        if r["scheme"] != scheme or r["error"]:
            continue
        pts.setdefault(float(r["value"]), []).append(float(r["r_s"]))
    xs = sorted(pts)
    ys = [sum(pts[x]) / len(pts[x]) for x in xs]
    plt.plot(xs, ys, marker="o", label=scheme)
plt.xlabel({xlabel!r})
plt.ylabel("secrecy rate (bits/s/Hz)")
plt.title({title!r})
plt.grid(True)
plt.legend()
plt.tight_layout()
plt.savefig("{png}", dpi=150)
print("wrote {png}")
'''

_PLOT_FIG2_BODY = '''\
keys = sorted({{(r["scheme"], int(r["M"])) for r in rows}})
plt.figure(figsize=(7, 5))
for scheme, m in keys:
    pts = [(int(r["iteration"]), float(r["r_s"])) for r in rows
           if r["scheme"] == scheme and int(r["M"]) == m]
    pts.sort()
    plt.plot([p[0] for p in pts], [p[1] for p in pts], marker="o",
             label=f"{{scheme}}, M={{m}}")
plt.xlabel("iteration")
plt.ylabel("secrecy rate (bits/s/Hz)")
plt.title("Convergence of the two optimizers")
plt.grid(True)
plt.legend()
plt.tight_layout()
plt.savefig("{png}", dpi=150)
print("wrote {png}")
'''

_PLOT_FIG5_BODY = '''\
keys = sorted({{(r["scheme"], float(r["snr_db"])) for r in rows}})
plt.figure(figsize=(7, 5))
for scheme, snr in keys:
    pts = [(float(r["value"]), float(r["r_s"])) for r in rows
           if r["scheme"] == scheme and float(r["snr_db"]) == snr and not r["error"]]
    pts.sort()
    plt.plot([p[0] for p in pts], [p[1] for p in pts], marker="o",
             label=f"{{scheme}}, SNR={{snr:g}} dB")
plt.xlabel("number of surface elements M")
plt.ylabel("secrecy rate (bits/s/Hz)")
plt.title("Secrecy rate versus M at several SNRs")
plt.grid(True)
plt.legend()
plt.tight_layout()
plt.savefig("{png}", dpi=150)
print("wrote {png}")
'''


def _write_plot_script(out_dir, name, csv_name, body_template, **fmt) -> str:
    path = os.path.join(out_dir, f"plot_{name}.py")
    png = f"{name}.png"
    text = _PLOT_HEADER.format(csv=csv_name, png=png) + \
        body_template.format(png=png, **fmt)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


FIGURE_IDS = ("fig2", "fig3", "fig4", "fig5", "fig6")


def _fig6_base(cfg: ScenarioConfig) -> ScenarioConfig:
    angles = replace(cfg.angles, ai=replace(cfg.angles.ai, departure=math.pi / 12))
    return replace(cfg, angles=angles, d_ab=100.0, d_ae=100.0)


def run_figure(fig_id: str, cfg: ScenarioConfig, out_dir: str, seed: int = 0,
               trials: int = 1, jobs: int = 1,
               gao_settings: GaoSettings | None = None,
               zf_settings: ZfSettings | None = None) -> list[str]:
    """Run one preset experiment; returns the paths written."""
    os.makedirs(out_dir, exist_ok=True)
    csv_name = f"{fig_id}.csv"
    csv_path = os.path.join(out_dir, csv_name)
    outputs = [csv_path]

    if fig_id == "fig2":
        rows = []
        for scheme in ("GAO", "ZF"):
            for m in (20, 200):
                result = run_scheme(scheme, replace(cfg, m=m), seed=seed,
                                    gao_settings=gao_settings, zf_settings=zf_settings)
                for rec in result.trace.records:
                    rows.append((scheme, m, rec.iteration, rec.rps, rec.r_s))
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(FIG2_COLUMNS)
            for row in rows:
                writer.writerow([row[0], row[1], row[2], _fmt(row[3]), _fmt(row[4])])
        outputs.append(_write_plot_script(out_dir, fig_id, csv_name, _PLOT_FIG2_BODY))
        return outputs

    if fig_id == "fig3":
        spec = SweepSpec("Ps_dBm", (20.0, 25.0, 30.0, 35.0, 40.0),
                         SCHEMES, trials, seed)
        rows = run_sweep(cfg, spec, gao_settings, zf_settings, jobs)
        write_sweep_csv(csv_path, rows)
        outputs.append(_write_plot_script(
            out_dir, fig_id, csv_name, _PLOT_SWEEP_BODY,
            xlabel="transmit power (dBm)", title="Secrecy rate versus transmit power"))
        return outputs

    if fig_id == "fig4":
        spec = SweepSpec("M", (40, 80, 120, 160, 200), SCHEMES, trials, seed)
        rows = run_sweep(cfg, spec, gao_settings, zf_settings, jobs)
        write_sweep_csv(csv_path, rows)
        outputs.append(_write_plot_script(
            out_dir, fig_id, csv_name, _PLOT_SWEEP_BODY,
            xlabel="number of surface elements M",
            title="Secrecy rate versus surface size"))
        return outputs

    if fig_id == "fig5":
        all_rows = []
        for snr_db in (0.0, 10.0, 20.0):
            base = replace(cfg, sigma2=cfg.ps / 10.0 ** (snr_db / 10.0))
            spec = SweepSpec("M", (40, 80, 120, 160, 200), ("GAO", "ZF"),
                             trials, seed)
            for row in run_sweep(base, spec, gao_settings, zf_settings, jobs):
                object.__setattr__(row, "_extra", {"snr_db": snr_db})
                all_rows.append(row)
        write_sweep_csv(csv_path, all_rows, extra_columns=("snr_db",))
        outputs.append(_write_plot_script(out_dir, fig_id, csv_name, _PLOT_FIG5_BODY))
        return outputs

    if fig_id == "fig6":
        base = _fig6_base(cfg)
        values = tuple(k * math.pi / 36 for k in range(72))
        spec = SweepSpec("theta_AE", values, SCHEMES, trials, seed)
        rows = run_sweep(base, spec, gao_settings, zf_settings, jobs)
        write_sweep_csv(csv_path, rows)
        outputs.append(_write_plot_script(
            out_dir, fig_id, csv_name, _PLOT_SWEEP_BODY,
            xlabel="eavesdropper departure angle (rad)",
            title="Secrecy rate versus eavesdropper angle"))
        return outputs

    raise ConfigError(f"unknown figure id {fig_id!r}; expected one of {FIGURE_IDS}")


def cmd_figure(args) -> int:
    cfg = parse_config(args.config)
    gao, zf = _settings_from_args(args)
    outputs = run_figure(args.fig_id, cfg, args.out, seed=args.seed,
                         trials=args.trials, jobs=args.jobs,
                         gao_settings=gao, zf_settings=zf)
    outputs.append(write_manifest(args.out, f"figure {args.fig_id}", cfg,
                                  args.seed, outputs))
    for path in outputs:
        print(f"wrote {path}")
    return 0


def cmd_sweep(args) -> int:
    cfg = parse_config(args.config)
    gao, zf = _settings_from_args(args)
    values = tuple(parse_number(v) for v in args.values.split(","))
    schemes = tuple(s.strip() for s in args.schemes.split(","))
    spec = SweepSpec(args.variable, values, schemes, args.trials, args.seed)
    rows = run_sweep(cfg, spec, gao, zf, jobs=args.jobs)
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, "sweep.csv")
    write_sweep_csv(csv_path, rows)
    write_manifest(args.out, "sweep", cfg, args.seed, [csv_path])
    print(f"wrote {csv_path}")
    return 0


def cmd_complexity(args) -> int:
    cfg = parse_config(args.config)
    m_values = tuple(int(parse_number(v)) for v in args.m_values.split(","))
    print(f"{'M':>6} {'flops_gao':>16} {'flops_zf':>16} {'ratio':>8}")
    lines = []
    for m in m_values:
        fg = flops_gao(args.gao_iters, m, cfg.n_a, cfg.n_b)
        fz = flops_zf(args.zf_iters, m, cfg.n_b)
        print(f"{m:>6} {fg:>16.6g} {fz:>16.6g} {fg / fz:>8.3f}")
        lines.append((m, fg, fz))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, "complexity.csv")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["m", "flops_gao", "flops_zf"])
            for m, fg, fz in lines:
                writer.writerow([m, _fmt(fg), _fmt(fz)])
        write_manifest(args.out, "complexity", cfg, 0, [path])
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irsdm",
        description="Joint receive-beamforming and surface phase-shift "
                    "optimization for a LOS directional-modulation link.")
    parser.add_argument("--version", action="version", version=f"irsdm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_jobs=True):
        p.add_argument("--config", default=None, help="key-value config file")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--literal-zf", action="store_true",
                       help="solve the zero-forcing subproblems without the "
                            "null-space projection")
        p.add_argument("--no-safeguard", action="store_true",
                       help="accept the raw projected phase update unconditionally")
        if with_jobs:
            p.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                           help="parallel sweep points")

    p_solve = sub.add_parser("solve", help="run one scheme on one scenario")
    common(p_solve, with_jobs=False)
    p_solve.add_argument("--scheme", default="GAO", choices=SCHEMES)
    p_solve.set_defaults(func=cmd_solve)

    p_fig = sub.add_parser("figure", help="run a preset experiment")
    p_fig.add_argument("fig_id", choices=FIGURE_IDS)
    common(p_fig)
    p_fig.add_argument("--trials", type=int, default=1)
    p_fig.set_defaults(func=cmd_figure, out="out")

    p_sweep = sub.add_parser("sweep", help="run a custom sweep")
    common(p_sweep)
    p_sweep.add_argument("--variable", required=True,
                         choices=("Ps_dBm", "M", "snr_dB", "theta_AE"))
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated values (pi fractions allowed)")
    p_sweep.add_argument("--schemes", default=",".join(SCHEMES))
    p_sweep.add_argument("--trials", type=int, default=1)
    p_sweep.set_defaults(func=cmd_sweep, out="out")

    p_cx = sub.add_parser("complexity", help="evaluate the FLOP models")
    p_cx.add_argument("--config", default=None)
    p_cx.add_argument("--out", default=None)
    p_cx.add_argument("--m-values", default="40,80,120,160,200")
    p_cx.add_argument("--gao-iters", type=int, default=6)
    p_cx.add_argument("--zf-iters", type=int, default=3)
    p_cx.set_defaults(func=cmd_complexity)

    return parser


def _configure_logging():
    level_name = os.environ.get("IRSDM_LOG", "WARNING").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except IrsdmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
