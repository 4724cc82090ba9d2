"""Command line front end: exact kernels, simulations, verification suites.

All randomness flows from a single 64-bit seed (default DEFAULT_SEED, never
time-based) through the counter-based per-replica derivation in _sampling.
Outputs are deterministic: same config and seed give byte-identical files.
The default output directory is the current directory, overridable with the
ARGMINPROC_OUTDIR environment variable.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import ladder as _ladder
from .chain import (
    ArgminChainKernel,
    brute_force_ssrw,
    build_kernel,
    ssrw_kernel,
    symmetric_continuous_kernel,
    theta_kernel,
    verify_lemma_identities,
)
from .levy_sim import empirical_invariant, simulate_path
from .stable import (
    StableLaw,
    chapman_kolmogorov_residual,
    kernel_mass,
    semigroup,
    stationarity_residual,
)
from .walk_sim import WalkModel, run_chain

DEFAULT_SEED = 20240817

_OUTDIR_ENV = "ARGMINPROC_OUTDIR"


class ConfigError(ValueError):
    """Invalid parameter combination; maps to exit code 2."""


def _outdir() -> Path:
    return Path(os.environ.get(_OUTDIR_ENV, "."))


def _resolve(output: str | None, default_name: str) -> Path:
    if output is None:
        return _outdir() / default_name
    p = Path(output)
    return p if p.is_absolute() or output.startswith(".") else _outdir() / p


def parse_model(text: str) -> tuple[str, tuple[float, ...]]:
    """Parse "theta:0.5", "ssrw", "gaussian", "stable:1.5,1.0"."""
    name, _, arg = text.partition(":")
    if name == "ssrw" or name == "gaussian":
        if arg:
            raise ConfigError(f"model {name} takes no parameters")
        return name, ()
    if name == "theta":
        try:
            theta = float(arg)
        except ValueError:
            raise ConfigError(f"bad theta value: {arg!r}") from None
        if not 0.0 < theta < 1.0:
            raise ConfigError("theta must lie in (0, 1)")
        return name, (theta,)
    if name == "stable":
        parts = arg.split(",")
        if len(parts) != 2:
            raise ConfigError("stable model needs alpha,beta")
        try:
            alpha, beta = float(parts[0]), float(parts[1])
        except ValueError:
            raise ConfigError(f"bad stable parameters: {arg!r}") from None
        return name, (alpha, beta)
    raise ConfigError(f"unknown model {text!r}")


def _kernel_for(model: str, N: int) -> ArgminChainKernel:
    name, args = parse_model(model)
    if name == "ssrw":
        return ssrw_kernel(N)
    if name == "gaussian":
        return theta_kernel(0.5, N)
    if name == "theta":
        return theta_kernel(args[0], N)
    law = _law_for(name, args)
    return theta_kernel(law.rho, N)


def _law_for(name: str, args: tuple[float, ...]) -> StableLaw:
    if name != "stable":
        raise ConfigError("this command needs a stable:alpha,beta model")
    try:
        return StableLaw(args[0], args[1])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _walk_model(model: str) -> WalkModel:
    name, args = parse_model(model)
    try:
        if name == "stable":
            return WalkModel("stable", alpha=args[0], beta=args[1])
        if name in ("ssrw", "gaussian"):
            return WalkModel(name)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    raise ConfigError("sim-walk models: ssrw, gaussian, stable:alpha,beta")


def _cmd_ladder(args: argparse.Namespace) -> int:
    name, params = parse_model(args.model)
    if name == "ssrw":
        ls = _ladder.closed_form_ssrw(args.M)
    elif name == "theta":
        ls = _ladder.closed_form_theta(params[0], args.M)
    elif name == "gaussian":
        ls = _ladder.closed_form_theta(0.5, args.M)
    else:
        raise ConfigError("ladder models: theta:v, ssrw, gaussian")
    base = _resolve(args.output, f"ladder_{args.model.replace(':', '_')}")
    if args.format == "csv":
        path = Path(str(base) + ".csv")
        _ladder.write_ladder_csv(ls, path)
    else:
        path = Path(str(base) + ".json")
        _ladder.write_ladder_json(ls, path)
    print(f"ladder M={ls.M} -> {path}")
    return 0


def _cmd_exact(args: argparse.Namespace) -> int:
    kern = _kernel_for(args.model, args.N)
    base = _resolve(
        args.output, f"exact_{args.model.replace(':', '_')}_N{args.N}"
    )
    if args.format == "csv":
        pi_path = base.parent / (base.name + "_pi.csv")
        P_path = base.parent / (base.name + "_P.csv")
        kern.write_csv(pi_path, P_path)
        print(f"exact N={kern.N} -> {pi_path}, {P_path}")
    else:
        path = Path(str(base) + ".json")
        kern.write_json(path)
        print(f"exact N={kern.N} -> {path}")
    return 0


def _cmd_kernel(args: argparse.Namespace) -> int:
    name, params = parse_model(args.model)
    law = _law_for(name, params)
    if not 0.0 <= args.x <= 1.0:
        raise ConfigError("x must lie in [0, 1]")
    if args.t <= 0.0:
        raise ConfigError("t must be positive")
    ev = semigroup(law, args.t, args.x)
    lo, hi = ev.support
    ys = np.linspace(lo, hi, args.points + 2)[1:-1]
    base = _resolve(
        args.output, f"kernel_rho{law.rho:.6g}_t{args.t:.6g}_x{args.x:.6g}"
    )
    if args.format == "csv":
        path = Path(str(base) + ".csv")
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["y", "q"])
            for y in ys:
                w.writerow([f"{y:.17g}", f"{ev.density(float(y)):.17g}"])
    else:
        path = Path(str(base) + ".json")
        payload = {
            "rho": law.rho,
            "t": args.t,
            "x": args.x,
            "atom_location": ev.atom_location,
            "atom_weight": ev.atom_weight,
            "support": list(ev.support),
            "y": [float(y) for y in ys],
            "q": [float(ev.density(float(y))) for y in ys],
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if ev.atom_location is None:
        print(f"kernel rho={law.rho:.6g} t={args.t} x={args.x}: no atom -> {path}")
    else:
        print(
            f"kernel rho={law.rho:.6g} t={args.t} x={args.x}: atom "
            f"{ev.atom_weight:.12g} at {ev.atom_location:.12g} -> {path}"
        )
    return 0


def _cmd_sim_walk(args: argparse.Namespace) -> int:
    model = _walk_model(args.model)
    report = run_chain(
        model,
        args.N,
        args.steps,
        args.seed,
        band=args.band,
        replicas=args.replicas,
    )
    base = _resolve(
        args.output, f"simwalk_{model.label()}_N{args.N}_s{args.seed}"
    )
    path = Path(str(base) + ".json")
    report.to_json(path)
    print(
        f"sim-walk {model.label()} N={args.N} steps={args.steps}: "
        f"tv={report.tv_pi:.6f} max_row_dev={report.max_row_dev:.6f} "
        f"verdict={report.verdict} -> {path}"
    )
    return 0


def _cmd_sim_levy(args: argparse.Namespace) -> int:
    name, params = parse_model(args.model)
    law = _law_for(name, params)
    if args.mesh <= 0 or args.horizon < 1 + args.mesh:
        raise ConfigError("need mesh > 0 and horizon >= 1 + mesh")
    paths = [
        simulate_path(law, args.mesh, args.horizon, args.seed, r)
        for r in range(args.replicas)
    ]
    report = empirical_invariant(paths, bins=args.bins)
    base = _resolve(args.output, f"simlevy_rho{law.rho:.6g}_s{args.seed}")
    path = Path(str(base) + ".json")
    report.to_json(path)
    print(
        f"sim-levy alpha={law.alpha} beta={law.beta} rho={law.rho:.6g}: "
        f"ks={report.ks:.6f} n={report.n_samples} -> {path}"
    )
    return 0


def _suite_lemmas(n_max: int) -> list[tuple[str, float, float]]:
    checks = []
    for theta in (0.2, 1.0 / 3.0, 0.5, 0.7):
        checks.append(
            (f"lemma theta={theta:.4g}", verify_lemma_identities(theta, n_max), 1e-10)
        )
    checks.append(("lemma ssrw", verify_lemma_identities("ssrw", n_max), 1e-10))
    return checks


def _suite_kernels(n_max: int) -> list[tuple[str, float, float]]:
    checks = []
    N = min(n_max, 40)
    worst = 0.0
    for theta in np.arange(0.1, 0.95, 0.1):
        theta = float(theta)
        a = theta_kernel(theta, N)
        ls = _ladder.closed_form_theta(theta, N + 1)
        bw = _ladder.closed_form_theta(1.0 - theta, N + 1)
        b = build_kernel(ls, N, backward=bw)
        dev = max(
            np.abs(a.pi - b.pi).max(), np.abs(a.P - b.P).max()
        )
        if abs(theta - 0.5) < 1e-12:
            c = symmetric_continuous_kernel(N)
            dev = max(dev, np.abs(a.pi - c.pi).max(), np.abs(a.P - c.P).max())
        worst = max(worst, dev)
    checks.append((f"constructor cross-agreement N={N}", worst, 1e-12))
    worst = 0.0
    for N in range(1, 9):
        a, b = ssrw_kernel(N), brute_force_ssrw(N)
        worst = max(worst, np.abs(a.pi - b.pi).max(), np.abs(a.P - b.P).max())
    checks.append(("ssrw vs brute force N<=8", worst, 0.0))
    return checks


_RHOS = (1.0 / 3.0, 0.5, 2.0 / 3.0)


def _suite_mass(_: int) -> list[tuple[str, float, float]]:
    worst = 0.0
    for rho in _RHOS:
        law = StableLaw.from_positivity(rho)
        for t in (0.1, 0.3, 0.7, 1.5):
            for x in (0.0, 0.25, 0.5, 0.75, 1.0):
                worst = max(worst, abs(kernel_mass(law, t, x) - 1.0))
    return [("kernel mass grid", worst, 1e-8)]


def _suite_stationarity(n_max: int) -> list[tuple[str, float, float]]:
    checks = []
    N = min(n_max, 40)
    worst = 0.0
    for theta in np.arange(0.1, 0.95, 0.1):
        k = theta_kernel(float(theta), N)
        worst = max(worst, np.abs(k.pi @ k.P - k.pi).max())
    checks.append((f"discrete fixed point N={N}", worst, 1e-10))
    worst = 0.0
    for rho in _RHOS:
        law = StableLaw.from_positivity(rho)
        for t in (0.25, 0.4, 0.7):
            worst = max(worst, stationarity_residual(law, t))
    checks.append(("arcsine invariance", worst, 1e-6))
    return checks


def _suite_ck(_: int) -> list[tuple[str, float, float]]:
    worst = 0.0
    for rho in _RHOS:
        law = StableLaw.from_positivity(rho)
        for (s, t, x) in ((0.2, 0.2, 0.9), (0.1, 0.5, 0.3), (0.6, 0.6, 0.5)):
            worst = max(worst, chapman_kolmogorov_residual(law, s, t, x))
    return [("chapman-kolmogorov", worst, 1e-5)]


_SUITES = {
    "lemmas": _suite_lemmas,
    "kernels": _suite_kernels,
    "mass": _suite_mass,
    "stationarity": _suite_stationarity,
    "ck": _suite_ck,
}


def _cmd_verify(args: argparse.Namespace) -> int:
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    results = []
    failed = False
    for name in names:
        for label, residual, tol in _SUITES[name](args.n_max):
            residual = float(residual)
            ok = residual <= tol
            failed = failed or not ok
            results.append(
                {"suite": name, "check": label, "residual": residual,
                 "tolerance": tol, "pass": ok}
            )
            print(
                f"[{'PASS' if ok else 'FAIL'}] {name}: {label} "
                f"residual={residual:.3e} tol={tol:.0e}"
            )
    if args.output is not None:
        path = _resolve(args.output, "verify")
        if not path.name.endswith(".json"):
            path = Path(str(path) + ".json")
        grid = {"suites": names, "n_max": args.n_max}
        payload = {
            "grid": grid,
            "residuals": results,
            "max": max(r["residual"] for r in results),
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"report -> {path}")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="argminproc",
        description="Exact kernels and simulations for window-argmin processes",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--output", "-o", default=None, help="output path")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("ladder", help="persistence sequences p, p~, tau")
    p.add_argument("--model", required=True)
    p.add_argument("--M", type=int, default=50)
    common(p)
    p.set_defaults(func=_cmd_ladder)

    p = sub.add_parser("exact", help="stationary law and transition matrix")
    p.add_argument("--model", required=True)
    p.add_argument("--N", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("kernel", help="semigroup density table and atom")
    p.add_argument("--model", required=True, help="stable:alpha,beta")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--points", type=int, default=99)
    common(p)
    p.set_defaults(func=_cmd_kernel)

    p = sub.add_parser("sim-walk", help="Monte Carlo argmin chain vs exact")
    p.add_argument("--model", required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--steps", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--replicas", type=int, default=1)
    p.add_argument("--band", type=float, default=0.01)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=_cmd_sim_walk)

    p = sub.add_parser("sim-levy", help="stable path argmin occupation law")
    p.add_argument("--model", required=True, help="stable:alpha,beta")
    p.add_argument("--mesh", type=float, default=1e-4)
    p.add_argument("--horizon", type=float, default=200.0)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--replicas", type=int, default=1)
    p.add_argument("--bins", type=int, default=64)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=_cmd_sim_levy)

    p = sub.add_parser("verify", help="run a named property suite")
    p.add_argument(
        "--suite",
        choices=("lemmas", "kernels", "mass", "stationarity", "ck", "all"),
        default="all",
    )
    p.add_argument("--n-max", type=int, default=50)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=_cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
