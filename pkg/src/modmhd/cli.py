"""Batch command line: run, identities, dispersion, convergence, info.

Exit codes are exhaustive and mutually exclusive: 0 success, 1 a
check failed (an identity or a fitted convergence order out of band),
2 configuration error, 3 numerical failure mid-run (with the partial
diagnostics flushed).  Output files are written to a temporary name in
the target directory and renamed into place, so readers never see a
torn file.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
import tempfile

import numpy as np

from . import __version__
from . import electromagnetics as em
from . import snapshot as snap
from .analysis import convergence_study, format_identity_report, identity_suite
from .config import RunConfig, ConfigError, parse_config, serialize_config
from .diagnostics import CSV_COLUMNS
from .dispersion import UniformBackground, dispersion, oracle_omegas
from .dynamics import SimulationError, run
from .params import Formulation
from .scenarios import SCENARIO_DEFAULTS, build_scenario

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory, text=True)
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_csv(path: str, header, rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    _write_text(path, "\n".join(lines) + "\n")


def _load_config(args) -> RunConfig:
    text = ""
    if args.config is not None:
        try:
            with open(args.config, "r") as handle:
                text = handle.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config!r}: {exc}") from None
    cfg = parse_config(text, overrides=args.set or ())
    if args.out_dir is not None:
        cfg = dataclasses.replace(cfg, out_dir=args.out_dir)
    return cfg


def _flush_diagnostics(out_dir: str, records) -> None:
    rows = [rec.as_row() for rec in records]
    _write_csv(os.path.join(out_dir, "diagnostics.csv"), CSV_COLUMNS, rows)


def cmd_run(cfg: RunConfig) -> int:
    case = cfg.build_case()
    params = cfg.phys()
    out_dir = cfg.out_dir

    on_step = None
    if cfg.snapshot_every > 0:
        def on_step(state, step):
            if step % cfg.snapshot_every == 0:
                path = os.path.join(out_dir, f"snapshot_{step:06d}.bin")
                os.makedirs(out_dir, exist_ok=True)
                snap.write_snapshot(path, state)

    try:
        final, records = run(case.state, params, cfg.t_end,
                             out_every=cfg.out_every, source=case.source,
                             on_step=on_step)
    except SimulationError as exc:
        _flush_diagnostics(out_dir, exc.records)
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    _flush_diagnostics(out_dir, records)
    if cfg.snapshot_every > 0:
        snap.write_snapshot(os.path.join(out_dir, "final.bin"), final)
    print(f"run complete: t = {final.t:g}, {len(records)} diagnostics rows "
          f"-> {os.path.join(out_dir, 'diagnostics.csv')}")
    return EXIT_OK


def cmd_identities(cfg: RunConfig) -> int:
    if not cfg.identities_resolutions:
        raise ConfigError("identities.resolutions must not be empty")
    report = identity_suite(cfg.identities_resolutions, params=cfg.phys())
    print(format_identity_report(report))

    header = ("identity", "kind", "resolution", "spacing", "value",
              "order", "expected_order", "passed")
    rows = []
    for item in report.results:
        order = "" if item.order is None else _fmt(item.order)
        expected = "" if item.expected_order is None else _fmt(item.expected_order)
        for n, h, value in zip(report.resolutions, item.spacings, item.values):
            rows.append((item.key, item.kind, n, _fmt(h), _fmt(value),
                         order, expected, int(item.passed)))
    _write_csv(os.path.join(cfg.out_dir, "identities.csv"), header, rows)

    if not report.all_passed:
        failed = [item.key for item in report.results if not item.passed]
        print(f"FAILED identities: {', '.join(failed)}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _dispersion_background(cfg: RunConfig, formulation: Formulation):
    h0 = np.array(cfg.dispersion_h0)
    if formulation is Formulation.MODIFIED:
        bg = em.BackgroundPotential.from_uniform_field(h0)
        return UniformBackground.modified(cfg.dispersion_rho0,
                                          cfg.dispersion_p0, bg)
    return UniformBackground.traditional(cfg.dispersion_rho0,
                                         cfg.dispersion_p0, h0)


def cmd_dispersion(cfg: RunConfig) -> int:
    grid = cfg.grid()
    params = cfg.phys()
    if cfg.dispersion_formulation == "both":
        formulations = (Formulation.MODIFIED, Formulation.TRADITIONAL)
    else:
        formulations = (Formulation(cfg.dispersion_formulation),)

    header = ("mx", "my", "mz", "formulation", "mode",
              "omega_re", "omega_im", "oracle_re", "oracle_im", "warning")
    rows = []
    for form in formulations:
        background = _dispersion_background(cfg, form)
        for modes in cfg.dispersion_k:
            result = dispersion(background, modes, grid, params)
            oracle = oracle_omegas(background, modes, grid, params, full=True)
            for i, (w, wo) in enumerate(zip(result.omega, oracle)):
                rows.append((*modes, form.value, i, _fmt(w.real), _fmt(w.imag),
                             _fmt(wo.real), _fmt(wo.imag), int(result.warning)))
            speeds = ", ".join(f"{s:.6g}" for s in result.speeds())
            print(f"{form.value} m={modes}: phase speeds {{{speeds}}}"
                  + ("  [eps-sensitivity warning]" if result.warning else ""))
    _write_csv(os.path.join(cfg.out_dir, "dispersion.csv"), header, rows)
    return EXIT_OK


def cmd_convergence(cfg: RunConfig) -> int:
    if len(cfg.convergence_resolutions) < 2:
        raise ConfigError("convergence.resolutions needs at least two entries")
    params = cfg.phys()
    form = cfg.formulation_enum()

    def factory(n):
        grid = cfg.grid()
        scale = n / cfg.nx
        sized = type(grid)(n, max(4, round(cfg.ny * scale)),
                           max(4, round(cfg.nz * scale)),
                           cfg.lx, cfg.ly, cfg.lz)
        return build_scenario(cfg.scenario, sized, form, cfg.scenario_params,
                              gamma=cfg.gamma, c=cfg.c, seed=cfg.seed,
                              order=cfg.stencil_order)

    try:
        result = convergence_study(factory, cfg.convergence_resolutions,
                                   cfg.convergence_t_end, params=params)
    except SimulationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    rows = [(n, _fmt(h), _fmt(e)) for n, h, e in result.rows()]
    _write_csv(os.path.join(cfg.out_dir, "convergence.csv"),
               ("resolution", "spacing", "error"), rows)

    expected = cfg.convergence_expect_order or float(cfg.stencil_order)
    slack = cfg.convergence_order_slack
    print(f"{cfg.scenario} ({form.value}, {result.mode}): fitted order "
          f"{result.order:.3f}, expected {expected:g} +/- {slack:g}")
    if not np.isfinite(result.order) or abs(result.order - expected) > slack:
        print("FAILED: fitted order out of band", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_info() -> int:
    print(f"modmhd {__version__}")
    print(f"snapshot format: magic {snap.MAGIC!r}, version {snap.VERSION}")
    print(f"diagnostics columns: {', '.join(CSV_COLUMNS)}")
    print("scenarios and their parameters:")
    for name in sorted(SCENARIO_DEFAULTS):
        defaults = SCENARIO_DEFAULTS[name]
        body = ", ".join(f"{k}={v}" for k, v in sorted(defaults.items()))
        print(f"  {name}: {body or '(no parameters)'}")
    defaults = RunConfig(nx=16, ny=16, nz=16, lx=1, ly=1, lz=1,
                         scenario="uniform_rest")
    print("config defaults (grid.* and scenario.name are required):")
    for line in serialize_config(defaults).splitlines():
        key = line.split(" =")[0]
        if not key.startswith(("grid.", "scenario.")):
            print(f"  {line}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modmhd",
        description="vector-potential MHD laboratory (modified and "
                    "traditional formulations)",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "integrate a scenario and write diagnostics.csv"),
        ("identities", "check the analytic identity suite"),
        ("dispersion", "numerical vs analytic dispersion relations"),
        ("convergence", "error-vs-resolution sweep with fitted order"),
        ("info", "print build defaults and format versions"),
    ):
        p = sub.add_parser(name, help=help_text)
        if name != "info":
            p.add_argument("--config", metavar="PATH",
                           help="flat key = value config file")
            p.add_argument("--out-dir", metavar="DIR",
                           help="override output.dir")
            p.add_argument("--set", action="append", metavar="KEY=VALUE",
                           help="override one config key (repeatable)")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG

    if args.command == "info":
        return cmd_info()
    try:
        cfg = _load_config(args)
        if args.command == "run":
            return cmd_run(cfg)
        if args.command == "identities":
            return cmd_identities(cfg)
        if args.command == "dispersion":
            return cmd_dispersion(cfg)
        return cmd_convergence(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
