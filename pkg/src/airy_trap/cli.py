"""Command-line interface: solvers, sweeps, simulations, figures."""

from __future__ import annotations

import argparse
import csv
import datetime
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import AiryTrapError, DomainError
from .airy import airy_eval
from .frames import PhysicalScaling, TrapParams, physical_acceleration, to_physical
from .profiles import WavefunctionProfile
from . import pulling, pushing, stationary, svgplot, tdse


def _parse_grid(spec: str, default):
    if spec is None:
        return default
    try:
        lo, hi, n = spec.split(":")
        return float(lo), float(hi), int(n)
    except ValueError as exc:
        raise DomainError(f"bad grid spec {spec!r}, expected min:max:n") from exc


def _outdir(args) -> Path:
    out = args.outdir or os.environ.get("AIRY_TRAP_OUTDIR") or "."
    p = Path(out)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _load_config(args) -> dict:
    if not args.config:
        return {}
    with open(args.config) as fh:
        return json.load(fh)


def _epsilon_from(args, cfg: dict) -> float:
    if getattr(args, "epsilon", None) is not None:
        return args.epsilon
    return float(cfg.get("epsilon", 0.5))


def _write_manifest(outdir: Path, subcommand: str, params: dict, outputs: list[Path]):
    manifest = {
        "subcommand": subcommand,
        "params": params,
        "outputs": [str(p) for p in outputs],
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "code_version": __version__,
    }
    path = outdir / f"{subcommand}_manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _write_csv(path: Path, header: list[str], rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    path.write_text(buf.getvalue())


def _profile_rows(profile: WavefunctionProfile):
    for x, v in zip(profile.xi_grid, profile.values):
        yield float(x), float(abs(v)), float(v.real), float(v.imag)


_PROFILE_HEADER = ["xi", "abs_phi", "re_phi", "im_phi"]


def _emit(args, payload: dict) -> None:
    if not args.quiet:
        print(json.dumps(payload, indent=2, sort_keys=True))


# ----------------------------------------------------------------------
# subcommands


def _cmd_airy(args, cfg, outdir) -> list[Path]:
    q = airy_eval(complex(args.re, args.im))
    print(json.dumps({
        "ai": {"re": q.ai.real, "im": q.ai.imag},
        "ai_prime": {"re": q.ai_prime.real, "im": q.ai_prime.imag},
        "bi": {"re": q.bi.real, "im": q.bi.imag},
        "bi_prime": {"re": q.bi_prime.real, "im": q.bi_prime.imag},
        "est_error": q.est_error,
    }, indent=2, sort_keys=True))
    return []


def _cmd_stationary(args, cfg, outdir) -> list[Path]:
    lo, hi, n = _parse_grid(args.grid, (-40.0, 10.0, 2001))
    state = stationary.resonance_energy(args.field)
    prof = stationary.quasi_bound_profile(args.field, lo, hi, n)
    outputs = []
    if "csv" in args.out:
        p = outdir / f"stationary_F{args.field:g}.csv"
        _write_csv(p, _PROFILE_HEADER, _profile_rows(prof))
        outputs.append(p)
    if "svg" in args.out:
        absv = prof.abs_values()
        panel = svgplot.Panel(
            series=[svgplot.Series(prof.xi_grid, np.log10(np.maximum(absv, 1e-300)),
                                   label=f"F={args.field:g}")],
            xlabel="xi", ylabel="log10 |phi|",
            title="quasi-bound stationary profile",
        )
        p = outdir / f"stationary_F{args.field:g}.svg"
        p.write_bytes(svgplot.render_line_svg([panel]))
        outputs.append(p)
    _emit(args, {"field": args.field, "energy": state.energy, "zeta0": state.zeta0,
                 "tail_intensity": state.tail_intensity})
    return outputs


_SWEEP_HEADER = ["F", "invF", "reE", "imE", "EI", "residual", "reE_weak",
                 "imE_weak", "T_scaled", "vmax_scaled"]


def _cmd_pulling(args, cfg, outdir) -> list[Path]:
    eps = _epsilon_from(args, cfg)
    outputs = []
    if args.sweep:
        f_lo, f_hi, n = _parse_grid(args.sweep, None)
        rows = pulling.sweep_pulling(1.0 / f_hi, 1.0 / f_lo, n, epsilon=eps)
        if "csv" in args.out:
            p = outdir / "pulling_sweep.csv"
            _write_csv(p, _SWEEP_HEADER, ([r[k] for k in _SWEEP_HEADER] for r in rows))
            outputs.append(p)
        if "svg" in args.out:
            invf = np.array([r["invF"] for r in rows])
            top = svgplot.Panel(
                series=[svgplot.Series(invf, np.array([r["reE"] for r in rows]))],
                xlabel="1/F", ylabel="Re E")
            bot = svgplot.Panel(
                series=[
                    svgplot.Series(invf, np.array([abs(r["imE"]) for r in rows]),
                                   label="numerical"),
                    svgplot.Series(invf, np.array([abs(r["imE_weak"]) for r in rows]),
                                   label="weak-field", color="#d62728", dotted=True),
                ],
                xlabel="1/F", ylabel="|Im E|", ylog=True)
            p = outdir / "pulling_sweep.svg"
            p.write_bytes(svgplot.render_line_svg([top, bot]))
            outputs.append(p)
    sol = pulling.solve_pulling(args.field)
    met = pulling.decay_metrics(sol, eps)
    if args.profile:
        lo, hi, n = _parse_grid(args.profile, None)
        prof = pulling.pulling_profile(args.field, lo, hi, n, solution=sol)
        if "csv" in args.out:
            p = outdir / f"pulling_profile_F{args.field:g}.csv"
            _write_csv(p, _PROFILE_HEADER, _profile_rows(prof))
            outputs.append(p)
        if "svg" in args.out:
            panel = svgplot.Panel(
                series=[svgplot.Series(prof.xi_grid, prof.abs_values(),
                                       label=f"F={args.field:g}")],
                xlabel="xi", ylabel="|phi|", title="pulled eigenmode")
            p = outdir / f"pulling_profile_F{args.field:g}.svg"
            p.write_bytes(svgplot.render_line_svg([panel]))
            outputs.append(p)
    payload = {
        "field": args.field, "reE": sol.energy.real, "imE": sol.energy.imag,
        "residual": sol.residual, "iterations": sol.iterations,
        "seed_used": sol.seed_used, "lifetime_scaled": met.lifetime_scaled,
        "vmax_scaled": met.vmax_scaled, "epsilon": eps,
    }
    if "json" in args.out:
        p = outdir / f"pulling_F{args.field:g}.json"
        p.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        outputs.append(p)
    _emit(args, payload)
    return outputs


_PUSH_HEADER = _SWEEP_HEADER[:8] + ["N", "absN0", "E_hardwall", "T_scaled", "vmax_scaled"]


def _cmd_pushing(args, cfg, outdir) -> list[Path]:
    eps = _epsilon_from(args, cfg)
    outputs = []
    if args.sweep:
        f_lo, f_hi, n = _parse_grid(args.sweep, None)
        rows = pushing.sweep_pushing(f_lo, f_hi, n, epsilon=eps)
        for r in rows:
            r["reE_weak"] = pushing.hard_wall_energy(r["F"])
            r["imE_weak"] = -pushing.GAMMA_SHIFT * r["F"] ** (4.0 / 3.0)
        if "csv" in args.out:
            p = outdir / "pushing_sweep.csv"
            _write_csv(p, _PUSH_HEADER, ([r[k] for k in _PUSH_HEADER] for r in rows))
            outputs.append(p)
    state = pushing.solve_pushing(args.field)
    met = pushing.pushing_metrics(state, eps)
    if args.profile:
        lo, hi, n = _parse_grid(args.profile, None)
        prof = pushing.pushing_profile(state, lo, hi, n)
        if "csv" in args.out:
            p = outdir / f"pushing_profile_F{args.field:g}.csv"
            _write_csv(p, _PROFILE_HEADER, _profile_rows(prof))
            outputs.append(p)
        if "svg" in args.out:
            panel = svgplot.Panel(
                series=[svgplot.Series(prof.xi_grid, prof.abs_values(),
                                       label=f"F={args.field:g}")],
                xlabel="xi", ylabel="|phi|", title="pushed eigenmode")
            p = outdir / f"pushing_profile_F{args.field:g}.svg"
            p.write_bytes(svgplot.render_line_svg([panel]))
            outputs.append(p)
    payload = {
        "field": args.field, "reE": state.energy.real, "imE": state.energy.imag,
        "residual": state.residual, "N": state.norm_N,
        "absN0": abs(state.coeff_N0), "E_hardwall": pushing.hard_wall_energy(args.field),
        "lifetime_scaled": met.lifetime_scaled, "vmax_scaled": met.vmax_scaled,
        "epsilon": eps,
    }
    if "json" in args.out:
        p = outdir / f"pushing_F{args.field:g}.json"
        p.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        outputs.append(p)
    _emit(args, payload)
    return outputs


def _tdse_config_from(args, cfg: dict) -> tdse.TdseConfig:
    base = tdse.fig5_config() if args.scenario == "pulling" else tdse.fig6_config()
    base.scenario = args.scenario
    base.field = args.field
    base.epsilon = args.epsilon if args.epsilon is not None else float(cfg.get("epsilon", 0.5))
    for key, val in cfg.get("tdse", {}).items():
        if not hasattr(base, key):
            raise DomainError(f"unknown tdse config key {key!r}")
        setattr(base, key, val)
    return base


def _cmd_tdse(args, cfg, outdir) -> list[Path]:
    config = _tdse_config_from(args, cfg)
    run = tdse.evolve(config)
    gamma, r2 = tdse.fit_decay_rate(run)
    outputs = []
    out_path = outdir / args.out
    if args.out.endswith(".csv"):
        rows = []
        for i, tau in enumerate(run.density_tau):
            for j, xi in enumerate(run.density_xi):
                rows.append((float(tau), float(xi), float(run.density[i, j])))
        _write_csv(out_path, ["tau", "xi", "density"], rows)
    elif args.out.endswith(".svg"):
        params = TrapParams(epsilon=config.epsilon, field=config.field)
        lab = tdse.lab_frame_density(run, params)
        parab_t = lab.t
        parab_x = 0.5 * params.accel * parab_t**2
        out_path.write_bytes(svgplot.render_heatmap_svg(
            lab.density, lab.x, lab.t, xlabel="x", ylabel="t",
            title=f"{config.scenario} density, F={config.field:g}",
            overlay_xy=(parab_x, parab_t)))
    else:
        raise DomainError("tdse --out must end in .csv or .svg")
    outputs.append(out_path)
    if args.norms:
        p = outdir / args.norms
        _write_csv(p, ["tau", "P"], ((float(a), float(b)) for a, b in run.norm_in_trap))
        outputs.append(p)
    _emit(args, {"scenario": config.scenario, "field": config.field,
                 "epsilon": config.epsilon, "fitted_gamma": gamma, "fit_r2": r2,
                 "fit_window": list(run.fit_window)})
    return outputs


def _fig_mode_density(scenario: str, field: float, eps: float):
    """Analytic resonance-mode density evolution mapped to the lab frame."""
    if scenario == "pulling":
        sol = pulling.solve_pulling(field)
        prof = pulling.pulling_profile(field, -60.0, 15.0, 1200, solution=sol)
        e_i = -sol.energy.imag
    else:
        st = pushing.solve_pushing(field)
        prof = pushing.pushing_profile(st, -60.0, 15.0, 1200)
        e_i = -st.energy.imag
    taus = np.linspace(0.0, 60.0, 160)
    dens0 = prof.abs_values() ** 2
    density = dens0[None, :] * np.exp(-2.0 * e_i * taus)[:, None]
    params = TrapParams(epsilon=eps, field=field)
    ts = taus / (2 * eps * eps)
    x_rows = [prof.xi_grid / (2 * eps) + 0.5 * params.accel * t * t for t in ts]
    x_grid = np.linspace(min(r[0] for r in x_rows), max(r[-1] for r in x_rows), 1000)
    dens = np.array([np.interp(x_grid, rx, row, left=0.0, right=0.0)
                     for rx, row in zip(x_rows, density)])
    return x_grid, ts, dens, params


def _cmd_figures(args, cfg, outdir) -> list[Path]:
    which = {int(w) for w in args.which.split(",")}
    bad = which - {1, 3, 4, 5, 6, 7}
    if bad:
        raise DomainError(f"unknown figures: {sorted(bad)} (supported: 1,3,4,5,6,7)")
    eps = _epsilon_from(args, cfg)
    outputs = []

    if 1 in which:
        series = []
        for i, f in enumerate([0.02, 0.05, 0.1]):
            prof = stationary.quasi_bound_profile(f, -40.0, 10.0, 2001)
            p = outdir / f"fig1_F{f:g}.csv"
            _write_csv(p, _PROFILE_HEADER, _profile_rows(prof))
            outputs.append(p)
            series.append(svgplot.Series(
                prof.xi_grid, np.log10(np.maximum(prof.abs_values(), 1e-300)),
                label=f"F={f:g}", color=svgplot._COLORS[i]))
        p = outdir / "fig1.svg"
        p.write_bytes(svgplot.render_line_svg([svgplot.Panel(
            series=series, xlabel="xi", ylabel="log10 |phi|",
            title="least-delocalized stationary states")]))
        outputs.append(p)

    if 3 in which:
        rows = pulling.sweep_pulling(1.0, 25.0, 120, epsilon=eps)
        p = outdir / "fig3.csv"
        _write_csv(p, _SWEEP_HEADER, ([r[k] for k in _SWEEP_HEADER] for r in rows))
        outputs.append(p)
        invf = np.array([r["invF"] for r in rows])
        top = svgplot.Panel(
            series=[svgplot.Series(invf, np.array([r["reE"] for r in rows]))],
            xlabel="1/F", ylabel="Re E", title="decay eigenvalue vs inverse tilt")
        bot = svgplot.Panel(
            series=[
                svgplot.Series(invf, np.array([abs(r["imE"]) for r in rows]),
                               label="numerical"),
                svgplot.Series(invf, np.array([abs(r["imE_weak"]) for r in rows]),
                               label="weak-field", color="#d62728", dotted=True),
            ],
            xlabel="1/F", ylabel="|Im E|", ylog=True)
        p = outdir / "fig3.svg"
        p.write_bytes(svgplot.render_line_svg([top, bot]))
        outputs.append(p)

    if 4 in which:
        series = []
        for i, f in enumerate([0.05, 0.1, 0.3]):
            prof = pulling.pulling_profile(f, -40.0, 10.0, 2001)
            p = outdir / f"fig4_F{f:g}.csv"
            _write_csv(p, _PROFILE_HEADER, _profile_rows(prof))
            outputs.append(p)
            series.append(svgplot.Series(prof.xi_grid, prof.abs_values(),
                                         label=f"F={f:g}", color=svgplot._COLORS[i]))
        p = outdir / "fig4.svg"
        p.write_bytes(svgplot.render_line_svg([svgplot.Panel(
            series=series, xlabel="xi", ylabel="|phi|", title="pulled eigenmodes")]))
        outputs.append(p)

    for fig_no, scen, f in ((5, "pulling", 0.1), (6, "pushing", 0.06)):
        if fig_no not in which:
            continue
        if args.mode == "tdse":
            config = tdse.fig5_config() if scen == "pulling" else tdse.fig6_config()
            run = tdse.evolve(config)
            params = TrapParams(epsilon=config.epsilon, field=config.field)
            lab = tdse.lab_frame_density(run, params)
            x_grid, ts, dens = lab.x, lab.t, lab.density
        else:
            x_grid, ts, dens, params = _fig_mode_density(scen, f, eps)
        p = outdir / f"fig{fig_no}.csv"
        stride = max(1, len(x_grid) // 400)
        rows = []
        for i, t in enumerate(ts):
            for j in range(0, len(x_grid), stride):
                rows.append((float(t), float(x_grid[j]), float(dens[i, j])))
        _write_csv(p, ["t", "x", "density"], rows)
        outputs.append(p)
        parab_x = 0.5 * params.accel * ts**2
        p = outdir / f"fig{fig_no}.svg"
        p.write_bytes(svgplot.render_heatmap_svg(
            dens, x_grid, ts, xlabel="x", ylabel="t",
            title=f"{scen} density, F={f:g} ({args.mode})",
            overlay_xy=(parab_x, ts)))
        outputs.append(p)

    if 7 in which:
        series = []
        for i, f in enumerate([0.02, 0.06, 0.1]):
            st = pushing.solve_pushing(f)
            prof = pushing.pushing_profile(st, -40.0, 20.0, 2001)
            p = outdir / f"fig7_F{f:g}.csv"
            _write_csv(p, _PROFILE_HEADER, _profile_rows(prof))
            outputs.append(p)
            series.append(svgplot.Series(prof.xi_grid, prof.abs_values(),
                                         label=f"F={f:g}", color=svgplot._COLORS[i]))
        p = outdir / "fig7.svg"
        p.write_bytes(svgplot.render_line_svg([svgplot.Panel(
            series=series, xlabel="xi", ylabel="|phi|", title="pushed eigenmodes")]))
        outputs.append(p)
    return outputs


def _cmd_estimates(args, cfg, outdir) -> list[Path]:
    eps = args.epsilon if args.epsilon is not None else float(cfg.get("epsilon", 1.0))
    accel = args.accel if args.accel is not None else (2.0 / 3.0) * eps**3
    params = TrapParams(epsilon=eps, accel=accel)
    scaling = (PhysicalScaling.rubidium_atom() if args.preset == "rubidium_atom"
               else PhysicalScaling.optical_beam())
    sol = pulling.solve_pulling(params.field)
    met = pulling.decay_metrics(sol, eps, accel)
    a_si, a_g = physical_acceleration(params, scaling)
    payload = {
        "epsilon": eps, "accel_scaled": accel, "field": params.field,
        "lifetime": to_physical(params, scaling, "lifetime", met.lifetime_scaled).__dict__,
        "vmax": to_physical(params, scaling, "vmax", met.vmax_scaled).__dict__,
        "vmax_weak_form": to_physical(params, scaling, "vmax", met.vmax_weak).__dict__,
        "acceleration_si": a_si, "acceleration_g": a_g,
        "preset": scaling.preset,
    }
    _emit(args, payload)
    return []


# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="airy-trap",
        description="Resonances and dynamics of an accelerating delta-function trap",
    )
    ap.add_argument("--config", help="JSON config (epsilon, accel/field, preset, tdse overrides)")
    ap.add_argument("--outdir", help="output directory (or AIRY_TRAP_OUTDIR)")
    ap.add_argument("--quiet", action="store_true", help="suppress stdout summaries")
    ap.add_argument("--seedless", action="store_true",
                    help="reserved; all computations are deterministic already")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("airy", help="evaluate Ai, Bi and derivatives at one point")
    p.add_argument("--re", type=float, required=True)
    p.add_argument("--im", type=float, default=0.0)

    p = sub.add_parser("stationary", help="least-delocalized stationary state")
    p.add_argument("--field", type=float, required=True)
    p.add_argument("--grid", help="min:max:n")
    p.add_argument("--out", default="csv", help="csv,svg")

    for name in ("pulling", "pushing"):
        p = sub.add_parser(name, help=f"{name}-scenario resonance")
        p.add_argument("--field", type=float, required=True)
        p.add_argument("--epsilon", type=float)
        p.add_argument("--sweep", help="Fmin:Fmax:n")
        p.add_argument("--profile", help="min:max:n")
        p.add_argument("--out", default="json", help="csv,svg,json")

    p = sub.add_parser("tdse", help="time-domain simulation")
    p.add_argument("--scenario", choices=["pulling", "pushing"], required=True)
    p.add_argument("--field", type=float, required=True)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--out", default="density.csv", help="density output (.csv or .svg)")
    p.add_argument("--norms", help="norm-history CSV name")

    p = sub.add_parser("figures", help="reproduce the reference figures")
    p.add_argument("--which", default="1,3,4,5,6,7")
    p.add_argument("--mode", choices=["analytic", "tdse"], default="analytic",
                   help="figure 5/6 density source")
    p.add_argument("--epsilon", type=float)

    p = sub.add_parser("estimates", help="physical lifetime/velocity estimates")
    p.add_argument("--preset", choices=["rubidium_atom", "optical_beam"],
                   default="rubidium_atom")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--accel", type=float)
    return ap


_HANDLERS = {
    "airy": _cmd_airy,
    "stationary": _cmd_stationary,
    "pulling": _cmd_pulling,
    "pushing": _cmd_pushing,
    "tdse": _cmd_tdse,
    "figures": _cmd_figures,
    "estimates": _cmd_estimates,
}


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = _load_config(args)
        outdir = _outdir(args)
        if "field" not in vars(args) or args.subcommand in ("figures", "estimates"):
            pass
        elif getattr(args, "field", None) is None and "field" in cfg:
            args.field = float(cfg["field"])
        outputs = _HANDLERS[args.subcommand](args, cfg, outdir)
        if outputs:
            _write_manifest(outdir, args.subcommand, {
                k: v for k, v in vars(args).items()
                if k not in ("subcommand",) and v is not None
            }, outputs)
        return 0
    except AiryTrapError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1
    except OSError as exc:
        print(json.dumps({"error": "OSError", "message": str(exc)}), file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
