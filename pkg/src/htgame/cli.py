"""Command-line batch runner.

Loads a TOML game configuration, runs one named experiment and writes
``results.csv`` (one row per evaluated team), ``report.txt`` (verdicts with
margins) and ``curves.csv`` (power and effort-response curves in long
format).  Outputs are deterministic: the same inputs give byte-identical
files.

Exit codes: 0 success, 2 invalid input, 3 solver non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import kernels
from .config import ConfigError, emit_config_template, load_config
from .evaluate import (TeamValue, Verdict, expected_team_output, team_output, verify_claim1_direction,
                       verify_team_comparisons, verify_two_tech)
from .experiments import DichotomousExperiment, check_equal_falsifiability, power_curve
from .game import NonConvergence, first_period_objective, lemma_effort_check, rival_switch_probability
from .views import DomainError, InverseInfoLinear, validate_assumptions

EXPERIMENTS = ("validate-views", "solve", "compare-one-tech", "compare-two-tech", "benchmark-modes",
               "claim1", "paper-suite")
ENV_PREFIX = "HTGAME_"
MC_SIGMAS = 4.0

RESULT_COLUMNS = (
    "experiment", "equilibrium", "model_A", "model_B", "mode", "Q", "assignment", "alpha", "beta",
    "tech_A1", "effort_A1", "tech_B1", "effort_B1",
    "tech_A2_stay", "effort_A2_stay", "tech_A2_switch", "effort_A2_switch",
    "tech_B2_stay", "effort_B2_stay", "tech_B2_switch", "effort_B2_switch",
    "y_A1", "y_A2", "y_B1", "y_B2", "Y_total", "Y_hat",
    "payoff_A", "payoff_B", "p_switch_A", "p_switch_B", "p_switch_both",
    "method", "n", "seed", "std_error",
)
CURVE_COLUMNS = ("curve", "technology", "parameter", "x", "y")


@dataclass(frozen=True)
class RunManifest:
    config: str
    experiment: str
    out: str
    seed: int | None = None
    grid: int | None = None
    mc: int | None = None


def fmt(x) -> str:
    """Shortest text that round-trips: floats at 17 significant digits."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if x is None:
        return ""
    return str(x)


def _model_text(model, names) -> str:
    return "".join(f"{lab}_{name}" if len(names) > 1 else lab for lab, name in zip(model, names))


class _Collector:
    def __init__(self, names):
        self.names = names
        self.rows = []
        self.curves = []
        self.report = []
        self.verdicts = []
        self._seen = set()

    def line(self, text=""):
        self.report.append(text)

    def add_verdicts(self, verdicts):
        for v in verdicts:
            self.verdicts.append(v)
            self.report.append("  " + v.line())

    def team(self, experiment, label: dict, tv: TeamValue, outcomes=None):
        cfg = tv.profile.config
        names = self.names
        key = (experiment, cfg.models, cfg.mode, label.get("Q"), cfg.assignment, cfg.truth)
        if key in self._seen and outcomes is None:
            return
        self._seen.add(key)
        if outcomes is None:
            outcomes = [expected_team_output(cfg, tv.profile, i) for i in range(len(tv.profile.first_period))]
        for i, o in enumerate(outcomes):
            (a1, b1) = o.actions
            st, sw = o.second_actions["stay"], o.second_actions["switch"]
            assignment = "" if cfg.assignment is None else "/".join(names[k] for k in cfg.assignment)
            self.rows.append([
                experiment, i, _model_text(cfg.models[0], names), _model_text(cfg.models[1], names),
                cfg.mode, label.get("Q", "config"), assignment, cfg.alpha, cfg.payoff.beta,
                names[a1.tech], a1.effort, names[b1.tech], b1.effort,
                names[st[0].tech], st[0].effort, names[sw[0].tech], sw[0].effort,
                names[st[1].tech], st[1].effort, names[sw[1].tech], sw[1].effort,
                o.outputs[0][0], o.outputs[0][1], o.outputs[1][0], o.outputs[1][1], o.total, tv.value,
                o.payoffs[0], o.payoffs[1], o.switch[0], o.switch[1], o.switch[2],
                o.method, o.n, o.seed, o.std_error,
            ])

    def curve(self, name, tech, parameter, xs, ys):
        for x, y in zip(xs, ys):
            self.curves.append([name, tech, parameter, float(x), float(y)])


def _write_csv(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(x) for x in r])
    _atomic_write(path, buf.getvalue())


def _atomic_write(path, text):
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------


def _validate_views(cfg, names, col):
    col.line("[validate-views]")
    ok = True
    for k, (pair, truth) in enumerate(zip(cfg.views, cfg.truth)):
        rep = validate_assumptions(pair, cfg.payoff, cfg.effort_points, truth)
        ef = check_equal_falsifiability(pair, np.linspace(0.0, pair.b, 41))
        col.line(f"  technology {names[k]}: {pair.family} {pair.describe()}")
        for key in ("fosd_Q", "fosd_H", "fosd_L", "dominance_H_over_L", "unique_maximizers",
                    "efforts_ordered", "informativeness_monotone", "uninformative_at_zero"):
            col.line(f"    {key} = {fmt(rep[key])}")
        col.line(f"    e_H = {fmt(rep['e_H'])}")
        col.line(f"    e_L = {fmt(rep['e_L'])}")
        col.line(f"    informativeness = {rep['informativeness']}")
        col.line(f"    equally_falsifiable = {fmt(ef)}")
        ok = ok and all(rep[k] for k in ("fosd_Q", "fosd_H", "fosd_L", "dominance_H_over_L"))
        for e in sorted({0.0, rep["e_L"], rep["e_H"], 0.5 * pair.b, pair.b}):
            x = DichotomousExperiment.from_pair(pair, e)
            alphas = np.linspace(0.0, 1.0, 101)
            col.curve("power_curve_H_vs_L", names[k], e, alphas, power_curve(x, alphas))
    col.line(f"  structural assumptions hold: {fmt(ok)}")
    return ok


def _solve(cfg, names, col, mc, seed, experiment="solve"):
    col.line(f"[{experiment}]")
    tv = team_output(cfg)
    prof = tv.profile
    col.line(f"  models A={_model_text(cfg.models[0], names)} B={_model_text(cfg.models[1], names)}"
             f" mode={cfg.mode} alpha={fmt(cfg.alpha)} beta={fmt(cfg.payoff.beta)}")
    for model, choice in sorted(prof.second_period.items()):
        col.line(f"  second period, model {_model_text(model, names)}: effort {fmt(choice.effort)}"
                 f" on {names[choice.tech]}")
    for i, eq in enumerate(prof.first_period):
        col.line(f"  equilibrium {i}: Ann {fmt(eq.ann.effort)} on {names[eq.ann.tech]},"
                 f" Bob {fmt(eq.bob.effort)} on {names[eq.bob.tech]}"
                 f" ({eq.method}, {eq.iterations} iterations)")
    col.line(f"  Y_hat = {fmt(tv.value)}")
    col.team(experiment, {"Q": "config"}, tv)
    if cfg.n_tech == 1 and cfg.models == (("H",), ("L",)):
        lem = lemma_effort_check(cfg)
        col.add_verdicts([
            Verdict("optimist effort with a skeptic vs with an optimist", min(lem["ann_disagree"]), ">=",
                    lem["ann_like_minded"], lem["optimist_works_harder"], lem["optimist_strictly"]),
            Verdict("skeptic effort with an optimist vs with a skeptic", max(lem["bob_disagree"]), "<=",
                    lem["bob_like_minded"], lem["skeptic_works_less"], lem["skeptic_strictly"]),
        ])
    if mc:
        if seed is None:
            raise ConfigError("Monte Carlo evaluation needs a seed (--seed, HTGAME_SEED or config seed)")
        outs = []
        for i in range(len(prof.first_period)):
            exact = expected_team_output(cfg, prof, i)
            sim = expected_team_output(cfg, prof, i, method="monte_carlo", n=mc, seed=seed + i)
            outs.append(sim)
            se = max(sim.std_error, 1e-300)
            z = abs(sim.total - exact.total) / se
            col.add_verdicts([Verdict(f"equilibrium {i}: Monte Carlo vs exact within {MC_SIGMAS:g} SE",
                                      abs(sim.total - exact.total), "<=", MC_SIGMAS * sim.std_error,
                                      z <= MC_SIGMAS, note=f"z={z:.3f}")])
        col.team(experiment, {"Q": "config"}, tv, outcomes=outs)
    # effort-response curves around the first equilibrium
    eq = prof.first_period[0]
    for player, who in ((0, "A"), (1, "B")):
        own = eq.actions[player]
        rival = eq.actions[1 - player]
        pair = cfg.views[own.tech]
        grid = np.linspace(0.0, pair.b, cfg.effort_points)
        col.curve(f"objective_{who}", names[own.tech], rival.effort, grid,
                  first_period_objective(player, grid, own.tech, rival, cfg))
        if cfg.disagree and cfg.mode != "unaware":
            col.curve(f"rival_switch_probability_{who}", names[own.tech], rival.effort, grid,
                      rival_switch_probability(cfg, player, grid, own.tech, rival))
    return tv


def _one_tech(cfg, names, col, experiment, benchmark_only=False):
    col.line(f"[{experiment}]")
    if cfg.n_tech != 1:
        col.line("  not applicable: needs one technology")
        return
    rep = verify_team_comparisons(cfg)
    if not rep["premise_e_L_zero"]:
        col.line("  note: premise e_L = 0 fails; team-formation verdict is informational")
    verdicts = rep["verdicts"]
    if benchmark_only:
        verdicts = [v for v in verdicts if v.name.startswith(("unaware", "myopic", "like-minded"))]
    else:
        for q, cond in rep["conditions"].items():
            if cond.get("e_hat") is not None:
                col.line(f"  Q={q}: Delta={fmt(cond['delta'])} bound={fmt(cond['bound'])}"
                         f" e_hat={fmt(cond['e_hat'])} condition={'met' if cond['holds'] else 'not met'}"
                         " (sufficient only)")
    col.add_verdicts(verdicts)
    for label, tv in rep["teams"]:
        col.team(experiment, label, tv)


def _two_tech(cfg, names, col):
    col.line("[compare-two-tech]")
    if cfg.n_tech != 2:
        col.line("  not applicable: needs two technologies")
        return
    rep = verify_two_tech(cfg)
    col.line(f"  equally falsifiable: {fmt(rep['info']['equally_falsifiable'])}")
    col.add_verdicts(rep["verdicts"])
    for label, tv in rep["teams"]:
        col.team("compare-two-tech", label, tv)


def _effort_direction(cfg, names, col):
    col.line("[claim1]")
    rep = verify_claim1_direction(cfg)
    if rep["applicable"]:
        col.line(f"  e_H = {fmt(rep['e_H'])}")
    col.add_verdicts(rep["verdicts"])
    for label, tv in rep["teams"]:
        col.team("claim1", label, tv)


def run(manifest: RunManifest) -> int:
    """Run one experiment and write its artifacts; returns the exit code."""
    if manifest.experiment not in EXPERIMENTS:
        print(f"error: unknown experiment {manifest.experiment!r}; choose from {', '.join(EXPERIMENTS)}",
              file=sys.stderr)
        return 2
    try:
        loaded = load_config(_resolve_config(manifest.config), effort_points=manifest.grid)
        cfg = loaded.game
        names = loaded.names
        seed = manifest.seed if manifest.seed is not None else loaded.seed
        if manifest.mc is not None and manifest.mc < 2:
            raise ConfigError("--mc needs at least 2 sample paths")
        col = _Collector(names)
        col.line(f"config: {os.path.basename(manifest.config)}")
        col.line(f"experiment: {manifest.experiment}")
        col.line(f"effort grid: {cfg.effort_points} points")
        col.line(f"kernel backend: {kernels.BACKEND}")
        col.line()
        exp = manifest.experiment
        if exp in ("validate-views", "paper-suite"):
            _validate_views(cfg, names, col)
            col.line()
        if exp in ("solve", "paper-suite"):
            _solve(cfg, names, col, manifest.mc, seed)
            col.line()
        if exp in ("compare-one-tech",) or (exp == "paper-suite" and cfg.n_tech == 1):
            _one_tech(cfg, names, col, "compare-one-tech")
            col.line()
        if exp == "benchmark-modes":
            _one_tech(cfg, names, col, "benchmark-modes", benchmark_only=True)
            col.line()
        if exp in ("compare-two-tech",) or (exp == "paper-suite" and cfg.n_tech == 2):
            _two_tech(cfg, names, col)
            col.line()
        if exp == "claim1" or (exp == "paper-suite" and isinstance(cfg.views[0], InverseInfoLinear)):
            _effort_direction(cfg, names, col)
            col.line()
        failed = sum(1 for v in col.verdicts if v.holds is False)
        held = sum(1 for v in col.verdicts if v.holds is True)
        col.line(f"summary: {held} hold, {failed} fail, "
                 f"{sum(1 for v in col.verdicts if v.holds is None)} informational")
    except NonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    os.makedirs(manifest.out, exist_ok=True)
    _write_csv(os.path.join(manifest.out, "results.csv"), RESULT_COLUMNS, col.rows)
    _write_csv(os.path.join(manifest.out, "curves.csv"), CURVE_COLUMNS, col.curves)
    _atomic_write(os.path.join(manifest.out, "report.txt"), "\n".join(col.report) + "\n")
    return 0


def bundled_configs() -> list:
    root = resources.files("htgame") / "configs"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".toml"))


def _resolve_config(name: str) -> str:
    """A path, or the name of a bundled config (with or without ``.toml``)."""
    if os.path.exists(name):
        return name
    stem = name[:-5] if name.endswith(".toml") else name
    if stem in bundled_configs():
        return str(resources.files("htgame") / "configs" / f"{stem}.toml")
    return name


def _env(name, cast=str):
    val = os.environ.get(ENV_PREFIX + name)
    if val is None or val == "":
        return None
    try:
        return cast(val)
    except ValueError:
        print(f"error: {ENV_PREFIX}{name}={val!r} is not valid", file=sys.stderr)
        raise SystemExit(2) from None


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="htgame",
        description="Solve and evaluate two-period team production games with model switching.",
        epilog=f"Each flag may also be set through an environment variable named {ENV_PREFIX}<FLAG>, "
               "e.g. HTGAME_SEED; command-line flags take precedence.")
    p.add_argument("--config", help="TOML config path or bundled config name")
    p.add_argument("--experiment", choices=EXPERIMENTS, help="experiment to run (default: paper-suite)")
    p.add_argument("--out", help="output directory (default: out)")
    p.add_argument("--seed", type=_nonneg_int, help="root seed for Monte Carlo evaluation")
    p.add_argument("--grid", type=int, help="override the number of effort grid points")
    p.add_argument("--mc", type=int, help="also evaluate by Monte Carlo with this many sample paths")
    p.add_argument("--template", metavar="FAMILY", help="print a config template for a view family and exit")
    p.add_argument("--list-configs", action="store_true", help="list bundled configs and exit")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.list_configs:
        print("\n".join(bundled_configs()))
        return 0
    if args.template is not None:
        try:
            sys.stdout.write(emit_config_template(args.template))
        except ConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        return 0
    config = args.config or _env("CONFIG")
    if config is None:
        print("error: --config is required", file=sys.stderr)
        return 2
    experiment = args.experiment or _env("EXPERIMENT") or "paper-suite"
    grid = args.grid if args.grid is not None else _env("GRID", int)
    if grid is not None and grid < 3:
        print("error: --grid needs at least 3 points", file=sys.stderr)
        return 2
    manifest = RunManifest(
        config=config,
        experiment=experiment,
        out=args.out or _env("OUT") or "out",
        seed=args.seed if args.seed is not None else _env("SEED", int),
        grid=grid,
        mc=args.mc if args.mc is not None else _env("MC", int),
    )
    return run(manifest)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
