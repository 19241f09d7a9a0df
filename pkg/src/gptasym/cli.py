"""Command-line front end: ``gptasym {gpt,forward,expand,study}``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 failed acceptance check in ``study``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

import numpy as np

from .asymptotics import expand_dirichlet, expand_neumann, inclusion_gpt, superpose_multi
from .config import ConfigError, StudyConfig
from .domain_functions import background_U, background_V
from .errors import GptAsymError, InvalidArgumentError
from .forward_oracle import solve_dirichlet, solve_neumann
from .results import SCHEMA_VERSION, BoundaryResult

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_CHECK = 4

log = logging.getLogger("gptasym")


class NumericalFailure(GptAsymError):
    pass


# --- helpers ---------------------------------------------------------------


def _pair(out: Path, stem: str, json_text: str, csv_text: str) -> list[Path]:
    paths = [out / f"{stem}.json", out / f"{stem}.csv"]
    _write(paths[0], json_text)
    _write(paths[1], csv_text)
    return paths


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _with_config(result_json: str, cfg: StudyConfig) -> str:
    doc = json.loads(result_json)
    doc["config"] = cfg.to_dict()
    return json.dumps(doc, indent=2) + "\n"


def _eps_label(eps: float | None) -> str:
    return "" if eps is None else "_eps" + f"{eps:g}".replace(".", "p")


def _eps_values(cfg: StudyConfig) -> list:
    return list(cfg.eps_grid) if cfg.eps_grid else [None]


def _background(cfg: StudyConfig, domain) -> BoundaryResult:
    data = cfg.data.nodal(domain)
    if cfg.data.kind == "neumann":
        U = background_U(domain, data)
        ref, quantity = U.trace(), "trace"
    else:
        V = background_V(domain, data)
        ref, quantity = V.normal_derivative(), "flux"
    return BoundaryResult(domain.curve.nodes.copy(), ref.copy(), ref.copy(), quantity, {}, {"kind": cfg.data.kind})


def _oracle(cfg: StudyConfig, domain, eps):
    incs = [inc.build(eps) for inc in cfg.inclusions if inc.k != 1]
    if not incs:
        return None
    data = cfg.data.nodal(domain)
    if cfg.data.kind == "neumann":
        return solve_neumann(domain, incs, data)
    return solve_dirichlet(domain, incs, data)


def _expansion(cfg: StudyConfig, domain, eps, n: int):
    data = cfg.data.nodal(domain)
    incs = [inc.build(eps) for inc in cfg.inclusions]
    if cfg.data.kind == "dirichlet":
        inc = incs[0]
        gpt = inclusion_gpt(inc, n).zeroed() if cfg.zero_gpt else None
        return expand_dirichlet(inc, domain, data, n, gpt=gpt)
    if len(incs) == 1:
        gpt = inclusion_gpt(incs[0], n).zeroed() if cfg.zero_gpt else None
        return expand_neumann(incs[0], domain, data, n, gpt=gpt)
    if cfg.zero_gpt:
        return _background(cfg, domain)
    return superpose_multi(incs, domain, data, n)


# --- subcommands -------------------------------------------------------------


def cmd_gpt(cfg: StudyConfig, out: Path) -> list[Path]:
    n = max(cfg.orders)
    written = []
    for idx, inc in enumerate(cfg.inclusions):
        table = inclusion_gpt(inc.build(), n)
        written += _pair(out, f"gpt_{idx}", _with_config(table.to_json(), cfg), table.to_csv())
        log.info("GPT table %s (k=%s, n=%d): m = %s", table.shape, inc.k, n, table.first_order().tolist())
    return written


def cmd_forward(cfg: StudyConfig, out: Path) -> list[Path]:
    domain = cfg.domain_obj()
    written = []
    for eps in _eps_values(cfg):
        sol = _oracle(cfg, domain, eps)
        if sol is None:
            log.info("all inclusions have k = 1: writing the background solution")
            res = _background(cfg, domain)
        else:
            res = sol.result()
            res.metadata["densities"] = [phi.tolist() for phi in sol.densities]
        written += _pair(out, f"forward{_eps_label(eps)}", _with_config(res.to_json(), cfg), res.to_csv())
    return written


def cmd_expand(cfg: StudyConfig, out: Path) -> list[Path]:
    domain = cfg.domain_obj()
    written = []
    for eps in _eps_values(cfg):
        for n in cfg.orders:
            res = _expansion(cfg, domain, eps, n)
            stem = f"expand_n{n}{_eps_label(eps)}"
            written += _pair(out, stem, _with_config(res.to_json(), cfg), res.to_csv())
    return written


def fit_slope(eps, residuals) -> float:
    """Least-squares slope of ``log(residual)`` against ``log(eps)``."""
    return float(np.polyfit(np.log(np.asarray(eps)), np.log(np.asarray(residuals)), 1)[0])


def expected_slope(cfg: StudyConfig, n: int) -> int:
    return 3 if len(cfg.inclusions) > 1 else 2 + n


def run_study(cfg: StudyConfig) -> dict:
    if len(cfg.eps_grid) < 3:
        raise ConfigError("study needs an eps grid with at least 3 points")
    domain = cfg.domain_obj()
    residuals = {n: [] for n in cfg.orders}
    for eps in cfg.eps_grid:
        sol = _oracle(cfg, domain, eps)
        if sol is None:
            raise ConfigError("study needs at least one inclusion with k != 1")
        truth = sol.boundary_values()
        if not np.all(np.isfinite(truth)):
            raise NumericalFailure(f"oracle produced non-finite values at eps = {eps:g}")
        for n in cfg.orders:
            res = _expansion(cfg, domain, eps, n)
            residuals[n].append(float(np.abs(truth - res.values).max()))
    orders = []
    for n in cfg.orders:
        r = residuals[n]
        if min(r) <= 0:
            raise NumericalFailure(f"zero residual for order {n}: slope undefined")
        slope = fit_slope(cfg.eps_grid, r)
        target = expected_slope(cfg, n)
        orders.append(
            {
                "n": n,
                "residuals": r,
                "slope": slope,
                "expected": target,
                "pass": bool(slope >= target - cfg.slope_tolerance),
            }
        )
    energy = _energy_check(cfg, domain)
    return {
        "schema_version": SCHEMA_VERSION,
        "eps": list(cfg.eps_grid),
        "orders": orders,
        "energy_check": energy,
        "pass": all(o["pass"] for o in orders) and energy["pass"],
        "config": cfg.to_dict(),
    }


def _energy_check(cfg: StudyConfig, domain) -> dict:
    """``\\oint g u >= 0`` for seeded random mean-zero flux data."""
    if cfg.data.kind != "neumann":
        return {"pass": True, "skipped": True}
    rng = np.random.default_rng(cfg.seed)
    th = domain.theta()
    coef = rng.standard_normal((4, 2))
    g = sum(a * np.cos((m + 1) * th) + b * np.sin((m + 1) * th) for m, (a, b) in enumerate(coef))
    incs = [inc.build(cfg.eps_grid[-1]) for inc in cfg.inclusions if inc.k != 1]
    sol = solve_neumann(domain, incs, g)
    power = domain.curve.integrate(g * sol.trace)
    return {"pass": bool(power >= 0), "power": float(power), "seed": cfg.seed}


def cmd_study(cfg: StudyConfig, out: Path) -> tuple[list[Path], bool]:
    report = run_study(cfg)
    _write(out / "study.json", json.dumps(report, indent=2) + "\n")
    lines = ["eps," + ",".join(f"residual_n{o['n']}" for o in report["orders"])]
    for a, eps in enumerate(report["eps"]):
        lines.append(f"{eps!r}," + ",".join(repr(o["residuals"][a]) for o in report["orders"]))
    _write(out / "study.csv", f"# schema_version,{SCHEMA_VERSION}\n" + "\n".join(lines) + "\n")
    for o in report["orders"]:
        log.info("n=%d slope %.3f (expected >= %.1f): %s", o["n"], o["slope"], o["expected"] - cfg.slope_tolerance,
                 "PASS" if o["pass"] else "FAIL")
    return [out / "study.json", out / "study.csv"], report["pass"]


# --- entry point ---------------------------------------------------------------


def _eps_list(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid eps list {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty eps list")
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, metavar="PATH", help="YAML study configuration")
    common.add_argument("--out", metavar="DIR", help="output directory (overrides config)")
    common.add_argument("--order", type=int, action="append", metavar="N", help="expansion order (repeatable)")
    common.add_argument("--eps", type=_eps_list, metavar="LIST", help="comma-separated, strictly decreasing eps grid")
    common.add_argument("--seed", type=int, metavar="INT", help="seed for randomized checks")
    common.add_argument("--quiet", action="store_true", help="suppress progress output")
    parser = argparse.ArgumentParser(prog="gptasym", description="Small-inclusion asymptotics in a disk.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("gpt", parents=[common], help="compute GPT tables")
    sub.add_parser("forward", parents=[common], help="solve the transmission problem")
    sub.add_parser("expand", parents=[common], help="evaluate the asymptotic expansion")
    sub.add_parser("study", parents=[common], help="convergence study against the forward solver")
    return parser


def _setup_logging(out: Path, quiet: bool) -> list[logging.Handler]:
    log.setLevel(logging.INFO)
    handlers: list[logging.Handler] = []
    out.mkdir(parents=True, exist_ok=True)
    fh = logging.FileHandler(out / "run.log", mode="a", encoding="utf-8")
    fh.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(message)s"))
    handlers.append(fh)
    if not quiet:
        sh = logging.StreamHandler(sys.stderr)
        sh.setFormatter(logging.Formatter("%(message)s"))
        handlers.append(sh)
    for h in handlers:
        log.addHandler(h)
    return handlers


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = StudyConfig.load(args.config).with_overrides(
            orders=args.order, eps_grid=args.eps, seed=args.seed, output=args.out
        )
    except (ConfigError, InvalidArgumentError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(cfg.output)
    handlers = _setup_logging(out, args.quiet)
    try:
        log.info("gptasym %s -> %s", args.command, out)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            if args.command == "gpt":
                files = cmd_gpt(cfg, out)
            elif args.command == "forward":
                files = cmd_forward(cfg, out)
            elif args.command == "expand":
                files = cmd_expand(cfg, out)
            else:
                files, ok = cmd_study(cfg, out)
                if not ok:
                    log.info("study verdict: FAIL")
                    return EXIT_CHECK
        for f in files:
            log.info("wrote %s", f)
        return EXIT_OK
    except (ConfigError, InvalidArgumentError) as exc:
        log.error("config error: %s", exc)
        if args.quiet:
            print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (GptAsymError, np.linalg.LinAlgError, FloatingPointError) as exc:
        log.error("numerical failure: %s", exc)
        if args.quiet:
            print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    finally:
        for h in handlers:
            log.removeHandler(h)
            h.close()


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
