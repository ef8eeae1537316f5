"""Command-line driver: ``seedbank {simulate,exact,sampling,laws,verify}``.

Exit codes are 0 on success, 1 when an acceptance check fails and 2 on a
usage error.  Data go to ``--out`` (or stdout); the human-readable report
goes to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Dict, List, Optional

import numpy as np

from . import exact, experiments, laws, sampling
from .model import ModelParams, ParameterError, Variant
from .rng import RngSpec
from .simulate import (StopCondition, StopKind, sample_first_activation,
                       sample_first_deactivation, simulate_counts)
from .stats import (SUMMARY_COLUMNS, BranchLengths, StoppingSummary, branch_lengths,
                    poisson_mutations, simulate_summary, stopping_summary, summary_row)

EXACT_CAP = 5000
SAMPLING_CAP = 8


class UsageError(Exception):
    pass


# -- argument parsing --------------------------------------------------------

def _int_value(text: str) -> int:
    """Integer that may be written as ``1e5``."""
    value = float(text)
    if not value.is_integer():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def _grid(text: str) -> List[int]:
    try:
        return [_int_value(x) for x in text.split(",") if x.strip()]
    except (ValueError, argparse.ArgumentTypeError):
        raise argparse.ArgumentTypeError(f"bad n grid: {text!r}")


def _common(p: argparse.ArgumentParser, n_default=None, reps_default=None):
    p.add_argument("--config", help="flat key=value file; flags override it")
    p.add_argument("--n", type=_int_value, default=n_default)
    p.add_argument("--n-grid", type=_grid, dest="n_grid")
    p.add_argument("--reps", type=_int_value, default=reps_default)
    p.add_argument("--c1", type=float, default=1.0)
    p.add_argument("--c2", type=float, default=1.0)
    p.add_argument("--seed", type=_int_value, default=0)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=_int_value, default=experiments.default_threads())
    p.add_argument("--quiet", action="store_true", help="no report on stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seedbank",
                                     description="Seed bank coalescent toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="Monte Carlo replicates of the block-counting chain")
    _common(p, n_default=10, reps_default=100)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--mu-inactive", type=float, dest="mu_inactive")
    p.add_argument("--stop", default="absorption",
                   help="absorption, first_deactivation, first_activation, plants:<l>, time:<t>")
    p.add_argument("--variant", choices=("standard", "bounded"), default="standard")
    p.add_argument("--bound-m", type=_int_value, dest="bound_m")
    p.add_argument("--engine", choices=("gillespie", "ladder"), default="gillespie",
                   help="ladder uses the direct samplers (standard variant only)")
    p.add_argument("--trace", action="store_true",
                   help="write every event (replicate,time,event,plants,seeds) instead of "
                        "per-replicate summaries")

    p = sub.add_parser("exact", help="exact expectations, N(gamma) law and limit moments")
    _common(p)
    p.add_argument("--cap", type=_int_value, default=EXACT_CAP)
    p.add_argument("--pmf", action="store_true", help="also emit the N(gamma) pmf")

    p = sub.add_parser("sampling", help="sampling formula vs enumeration, urn and simulation")
    _common(p, n_default=8, reps_default=100_000)
    p.add_argument("--k", type=_int_value)
    p.add_argument("--partition-reps", type=_int_value, dest="partition_reps", default=0)

    p = sub.add_parser("laws", help="KS distances of stopping-time functionals to limit laws")
    _common(p, reps_default=10_000)

    p = sub.add_parser("verify", help="run the acceptance checks")
    _common(p)
    p.add_argument("--only", action="append",
                   help="criterion numbers or groups: " + ", ".join(experiments.GROUPS))
    p.add_argument("--perturb-activation", type=float, default=0.0, dest="perturb_activation",
                   help=argparse.SUPPRESS)
    return parser


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def read_config(path: str) -> Dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def parse_args(argv: List[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        sub = _subparser(parser, args.command)
        actions = {a.dest: a for a in sub._actions}
        defaults = {}
        for key, value in read_config(args.config).items():
            action = actions.get(key)
            if action is None or key in ("config", "help"):
                raise UsageError(f"unknown config key {key!r}")
            if action.nargs == 0:
                defaults[key] = value.lower() in ("1", "true", "yes")
            else:
                defaults[key] = action.type(value) if action.type else value
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    return args


def _check(args) -> None:
    if args.n is not None and args.n < 1:
        raise UsageError("--n must be positive")
    if args.n_grid is not None and (not args.n_grid or min(args.n_grid) < 1):
        raise UsageError("--n-grid needs positive sizes")
    if args.reps is not None and args.reps < 1:
        raise UsageError("--reps must be at least 1")
    if args.threads < 1:
        raise UsageError("--threads must be at least 1")
    if not 0 <= args.seed < 2**64:
        raise UsageError("--seed must be a 64-bit unsigned integer")


def _sizes(args, default=None) -> List[int]:
    if args.n_grid:
        return args.n_grid
    if args.n is not None:
        return [args.n]
    if default is None:
        raise UsageError("give --n or --n-grid")
    return list(default)


# -- output ------------------------------------------------------------------

def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_table(rows: List[dict], columns, fmt: str, out: Optional[str]) -> None:
    if fmt == "json":
        text = json.dumps([{c: r.get(c) for c in columns} for r in rows], indent=1) + "\n"
    else:
        fh = io.StringIO()
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([_cell(r.get(c)) for c in columns])
        text = fh.getvalue()
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


LONG_COLUMNS = ("quantity", "n", "key", "value")


def _say(args, text: str) -> None:
    if not args.quiet:
        print(text, file=sys.stderr)


# -- simulate ----------------------------------------------------------------

SIM_COLUMNS = ("n",) + SUMMARY_COLUMNS + ("terminal",)


def simulate_batch(n, c1, c2, mu_a, mu_i, stop_text, bound, engine, seed, lo, hi):
    params = ModelParams(c1, c2, mu_a, mu_i)
    stop = StopCondition.parse(stop_text)
    variant = Variant(bound)
    mutate = mu_a > 0 or mu_i > 0
    rows = []
    for r in range(lo, hi):
        gen = RngSpec(seed, r).generator()
        if engine == "ladder":
            row = _ladder_row(n, params, stop, gen, r)
            if mutate and row.get("A") is not None:
                s = poisson_mutations(BranchLengths(row["A"], row["I"]), params, gen)
                row.update(S_active=s[0], S_inactive=s[1])
        else:
            traj = simulate_counts(n, 0, params, variant=variant, stop=stop, rng=gen)
            lengths = branch_lengths(traj) if traj.absorbed else None
            muts = poisson_mutations(lengths, params, gen) if mutate and lengths else None
            row = summary_row(r, stopping_summary(traj), lengths, muts)
            row["terminal"] = traj.terminal_reason.value
        row["n"] = n
        rows.append(row)
    return rows


def _ladder_row(n, params, stop, gen, r) -> dict:
    if stop.kind == StopKind.ABSORPTION:
        summary, lengths = simulate_summary(n, params, gen)
        row = summary_row(r, summary, lengths)
        row["terminal"] = "absorbed"
        return row
    if stop.kind == StopKind.FIRST_DEACTIVATION:
        n_at, gamma = sample_first_deactivation(n, params, gen)
        row = summary_row(r, StoppingSummary(gamma=gamma, n_at_gamma=n_at,
                                             sup_seeds=1))
    else:
        fa = sample_first_activation(n, params, gen)
        row = summary_row(r, StoppingSummary(
            gamma=fa.gamma, theta=fa.theta, sigma=fa.sigma, n_at_gamma=fa.n_at_gamma,
            n_at_theta=fa.n_after, m_at_theta=fa.m_before, sup_seeds=fa.m_before))
    row["terminal"] = "stop_condition_met"
    return row


def _mean_se(values) -> tuple:
    x = np.asarray([v for v in values if v is not None], dtype=float)
    if x.size == 0:
        return None, None, 0
    se = float(x.std(ddof=1) / math.sqrt(x.size)) if x.size > 1 else float("nan")
    return float(x.mean()), se, int(x.size)


def cmd_simulate(args) -> int:
    sizes = _sizes(args)
    stop = StopCondition.parse(args.stop)
    bound = None
    if args.variant == "bounded":
        if args.bound_m is None:
            raise UsageError("--variant bounded needs --bound-m")
        bound = args.bound_m
    elif args.bound_m is not None:
        raise UsageError("--bound-m needs --variant bounded")
    if args.engine == "ladder":
        if bound is not None:
            raise UsageError("the ladder engine supports the standard variant only")
        if stop.kind not in (StopKind.ABSORPTION, StopKind.FIRST_DEACTIVATION,
                             StopKind.FIRST_ACTIVATION):
            raise UsageError("the ladder engine stops at absorption, gamma or theta only")
    mu_i = args.mu if args.mu_inactive is None else args.mu_inactive
    ModelParams(args.c1, args.c2, args.mu, mu_i)
    Variant(bound)
    if args.trace:
        if args.engine != "gillespie":
            raise UsageError("--trace needs the gillespie engine")
        return _trace(args, sizes, ModelParams(args.c1, args.c2, args.mu, mu_i),
                      StopCondition.parse(args.stop), Variant(bound))
    rows = []
    for n in sizes:
        rows.extend(experiments.map_replicates(
            simulate_batch, (n, args.c1, args.c2, args.mu, mu_i, args.stop, bound,
                             args.engine, args.seed), args.reps, args.threads))
    write_table(rows, SIM_COLUMNS, args.format, args.out)
    for n in sizes:
        sel = [r for r in rows if r["n"] == n]
        budget = sum(r["terminal"] == "event_budget_exceeded" for r in sel)
        _say(args, f"n={n} reps={len(sel)} seed={args.seed} c1={args.c1} c2={args.c2}"
                   + (f" budget_exceeded={budget}" if budget else ""))
        for col in ("gamma", "theta", "sigma", "n_at_theta", "m_at_theta", "sup_seeds",
                    "A", "I", "L", "S_active", "S_inactive"):
            mean, se, count = _mean_se(r[col] for r in sel)
            if count:
                _say(args, f"  {col:<10} mean={mean:.6g} se={se:.3g} count={count}")
    return 0


def _trace(args, sizes, params, stop, variant) -> int:
    rows = []
    for n in sizes:
        for r in range(args.reps):
            traj = simulate_counts(n, 0, params, variant=variant, stop=stop,
                                   rng=RngSpec(args.seed, r))
            rows.append({"n": n, "replicate": r, "time": 0.0, "event": "start",
                         "plants": n, "seeds": 0})
            for t, kind, state in traj.events:
                rows.append({"n": n, "replicate": r, "time": t, "event": kind.label,
                             "plants": state.plants, "seeds": state.seeds})
    write_table(rows, ("n", "replicate", "time", "event", "plants", "seeds"),
                args.format, args.out)
    _say(args, f"{len(rows)} rows from {args.reps * len(sizes)} paths")
    return 0


# -- exact -------------------------------------------------------------------

def cmd_exact(args) -> int:
    sizes = _sizes(args, default=(30, 300, 3000))
    if max(sizes) > args.cap:
        raise UsageError(f"n={max(sizes)} exceeds the cap {args.cap} (raise it with --cap)")
    if min(sizes) < 2:
        raise UsageError("exact expectations need n >= 2")
    params = ModelParams(args.c1, args.c2)
    rows = []
    _say(args, f"c1={args.c1} c2={args.c2}")
    _say(args, f"{'n':>6} {'E[A]':>10} {'E[I]':>10} {'E[L]':>10} {'E[sigma]':>10} "
               f"{'dev A':>9} {'dev I':>9} {'dev L':>9} {'balance':>9}")
    for n in sizes:
        s = exact.exact_summary(n, params)
        ratios = s.ratios()
        for q, v in (("E_A", s.E_A), ("E_I", s.E_I), ("E_L", s.E_L), ("E_sigma", s.E_sigma),
                     ("balance_residual", s.balance_residual)):
            rows.append({"quantity": q, "n": n, "key": "", "value": v})
        for key, v in ratios.items():
            rows.append({"quantity": "ratio", "n": n, "key": key, "value": v})
            rows.append({"quantity": "deviation", "n": n, "key": key, "value": abs(v - 1.0)})
        rows.append({"quantity": "beta_cdf_distance", "n": n, "key": "",
                     "value": exact.beta_cdf_distance(n, args.c1)})
        if args.pmf:
            for m, p in exact.pmf_N_gamma(n, args.c1).as_dict().items():
                rows.append({"quantity": "pmf_N_gamma", "n": n, "key": m, "value": p})
        _say(args, f"{n:>6} {s.E_A:>10.5g} {s.E_I:>10.5g} {s.E_L:>10.5g} {s.E_sigma:>10.5g} "
                   f"{abs(ratios['A'] - 1):>9.4g} {abs(ratios['I'] - 1):>9.4g} "
                   f"{abs(ratios['L'] - 1):>9.4g} {s.balance_residual:>9.2g}")
    mean, var = exact.gamma_law_moments(args.c1)
    rows.append({"quantity": "gamma_law_mean", "n": None, "key": "", "value": mean})
    rows.append({"quantity": "gamma_law_variance", "n": None, "key": "", "value": var})
    _say(args, f"limit law of n*gamma: mean={mean} variance={var}")
    write_table(rows, LONG_COLUMNS, args.format, args.out)
    return 0


# -- sampling ----------------------------------------------------------------

def _cfg_key(cfg) -> str:
    old = " ".join(map(str, cfg[0] if isinstance(cfg, tuple) else cfg.a))
    new = " ".join(map(str, cfg[1] if isinstance(cfg, tuple) else cfg.b))
    return f"a={old}|b={new}"


def cmd_sampling(args) -> int:
    n = args.n
    if n > SAMPLING_CAP:
        raise UsageError(f"n={n} is too large for enumeration (max {SAMPLING_CAP})")
    ks = [args.k] if args.k is not None else list(range(1, n + 1))
    if min(ks) < 1 or max(ks) > n:
        raise UsageError("--k must lie in 1..n")
    ModelParams(args.c1, args.c2)
    rows = []
    for k in ks:
        law = sampling.formula_law(k, n, args.c1)
        norm = abs(sum(law.values()) - 1.0)
        err = experiments._closed_forms_vs_enumeration(k, n, args.c1)
        draws = experiments.map_replicates(experiments.urn_batch, (k, n, args.c1, args.seed + k),
                                           args.reps, args.threads)
        keyed = {experiments.hoppe_key(c): p for c, p in law.items()}
        tv = sampling.total_variation(sampling.empirical_law(draws), keyed)
        for cfg, p in law.items():
            rows.append({"quantity": "formula_probability", "n": n, "k": k,
                         "key": _cfg_key(cfg), "value": p})
        rows += [{"quantity": "normalisation_residual", "n": n, "k": k, "key": "", "value": norm},
                 {"quantity": "closed_form_error", "n": n, "k": k, "key": "", "value": err},
                 {"quantity": "urn_tv", "n": n, "k": k, "key": args.reps, "value": tv}]
        _say(args, f"k={k}: configurations={len(law)} normalisation={norm:.2g} "
                   f"closed-form error={err:.2g} urn TV={tv:.4f} ({args.reps} draws)")
        if len(law) <= 4:
            _say(args, "  law: " + ", ".join(f"{_cfg_key(c)}: {p:.6g}" for c, p in law.items()))
    if args.partition_reps:
        rec = experiments._conditioned_partition_record(n, args.c1, args.c2,
                                                        args.partition_reps, args.threads)
        for conv, res in rec.details["by_convention"].items():
            for key, value in res.items():
                rows.append({"quantity": f"partition_{key}", "n": n, "k": res["k"],
                             "key": conv, "value": value})
            _say(args, f"partition simulation, {conv}-activation snapshot, k={res['k']}: "
                       f"TV vs formula={res['tv_simulation_vs_formula']:.4f}, "
                       f"TV vs exact chain law={res['tv_simulation_vs_exact_chain_law']:.4f}")
    write_table(rows, ("quantity", "n", "k", "key", "value"), args.format, args.out)
    return 0


# -- laws --------------------------------------------------------------------

def cmd_laws(args) -> int:
    sizes = _sizes(args, default=(1000, 10_000, 100_000))
    c1, c2 = args.c1, args.c2
    ModelParams(c1, c2)
    rows = []
    _say(args, f"c1={c1} c2={c2} reps={args.reps} seed={args.seed}")
    _say(args, f"{'n':>8} {'N(g)/n~Beta':>12} {'n*g~Gamma':>10} {'th*ln~Exp':>10} "
               f"{'N(th)/ln~Fr':>12} {'M(th)/ln n':>11} {'se':>7}")
    for n in sizes:
        g = np.array(experiments.map_replicates(experiments.gamma_batch, (n, c1, args.seed),
                                                args.reps, args.threads))
        t = np.array(experiments.map_replicates(experiments.theta_batch,
                                                (n, c1, c2, args.seed), args.reps, args.threads))
        log_n = math.log(n) if n > 1 else float("nan")
        ks = {
            "N_gamma_over_n_vs_beta": laws.ks_distance(g[:, 0] / n, laws.Beta2c1(c1)),
            "n_gamma_vs_gamma_law": laws.ks_distance(g[:, 1] * n, laws.GammaLaw(c1)),
            "theta_log_n_vs_exponential": laws.ks_distance(t[:, 0] * log_n,
                                                           laws.Exponential(c1, c2)),
            "N_theta_over_log_n_vs_frechet": laws.ks_distance(t[:, 1] / log_n,
                                                              laws.Frechet(c1, c2)),
        }
        m = t[:, 2] / log_n
        mean, se = float(m.mean()), float(m.std(ddof=1) / math.sqrt(m.size)) if m.size > 1 else 0.0
        for key, v in ks.items():
            rows.append({"quantity": "ks", "n": n, "key": key, "value": v})
        rows.append({"quantity": "mean_M_theta_over_log_n", "n": n, "key": "", "value": mean})
        rows.append({"quantity": "se_M_theta_over_log_n", "n": n, "key": "", "value": se})
        rows.append({"quantity": "reference_2c1", "n": n, "key": "", "value": 2 * c1})
        vals = list(ks.values())
        _say(args, f"{n:>8} {vals[0]:>12.4f} {vals[1]:>10.4f} {vals[2]:>10.4f} "
                   f"{vals[3]:>12.4f} {mean:>11.4f} {se:>7.3f}")
    write_table(rows, LONG_COLUMNS, args.format, args.out)
    return 0


# -- verify ------------------------------------------------------------------

def cmd_verify(args) -> int:
    try:
        ids = experiments.resolve(args.only)
    except KeyError as exc:
        raise UsageError(f"unknown criterion or group {exc.args[0]!r}")
    echo = None if args.quiet else (lambda line: print(line, file=sys.stderr, flush=True))
    records = experiments.run(ids, threads=args.threads,
                              activation_factor=1.0 + args.perturb_activation, echo=echo)
    text = experiments.report_json(records) + "\n" if args.format == "json" \
        else experiments.report_csv(records)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    failed = [r.criterion for r in records if not r.passed]
    _say(args, f"{len(records) - len(failed)}/{len(records)} checks passed"
               + (f"; failed: {', '.join(failed)}" if failed else ""))
    return 1 if failed else 0


COMMANDS = {"simulate": cmd_simulate, "exact": cmd_exact, "sampling": cmd_sampling,
            "laws": cmd_laws, "verify": cmd_verify}


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parse_args(argv)
        _check(args)
        return COMMANDS[args.command](args)
    except SystemExit as exc:        # argparse usage errors and --help
        return exc.code if isinstance(exc.code, int) else 2
    except (UsageError, ParameterError, OSError) as exc:
        print(f"seedbank: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
