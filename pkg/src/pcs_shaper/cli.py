"""Command-line front end: experiment orchestration and machine-readable output.

Subcommands: papr-ccdf, optimize, capacity-sweep, convergence, validate.
Configuration comes from a flat ``key = value`` file plus same-named flags
(flags win); every output embeds the fully resolved configuration and seed.
Exit codes: 0 success, 1 invalid configuration, 2 infeasible problem,
3 validation-suite failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .capacity import (
    capacity,
    power_for_eb_n0,
    sndr_db,
    subchannel_model,
)
from .clipping import SystemParams, attenuation_factor, clip_stats, clipping_noise_variance
from .constellation import (
    ConstellationKind,
    build_constellation,
    random_distribution,
    scale_to_power,
    uniform_distribution,
)
from .ofdm import OfdmConfig
from .optimizer import (
    InfeasiblePowerError,
    OptimizerConfig,
    optimize,
    project,
    project_reference,
)
from .simulation import capacity_sweep, empirical_bussgang, mc_mutual_information, papr_ccdf

EXIT_OK = 0
EXIT_BAD_CONFIG = 1
EXIT_INFEASIBLE = 2
EXIT_VALIDATION_FAILED = 3

_FREQ_SUFFIXES = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}


class ConfigError(ValueError):
    pass


def parse_frequency(text: str) -> float:
    """Parse '2e7', '20 MHz', '20mhz' and friends into Hz."""
    s = str(text).strip().lower().replace(" ", "")
    for suffix in sorted(_FREQ_SUFFIXES, key=len, reverse=True):
        if s.endswith(suffix):
            return float(s[: -len(suffix)]) * _FREQ_SUFFIXES[suffix]
    return float(s)


def parse_current(text: str) -> float:
    """Currents are mA at the boundary; an explicit 'mA' suffix is accepted."""
    s = str(text).strip().lower().replace(" ", "")
    if s.endswith("ma"):
        s = s[:-2]
    return float(s)


def _parse_int_list(text: str) -> list[int]:
    return [int(tok) for tok in str(text).split(",") if tok.strip()]


# (key, parser, default, help) — defaults are the reference LED link parameters
SCHEMA: list[tuple[str, object, object, str]] = [
    ("i_min_ma", parse_current, 100.0, "lower edge of the linear dynamic range (mA)"),
    ("i_max_ma", parse_current, 1000.0, "upper edge of the linear dynamic range (mA)"),
    ("i_dc_ma", parse_current, 500.0, "DC bias (mA)"),
    ("eta_w_per_a", float, 0.44, "electrical-to-optical conversion factor (W/A)"),
    ("gamma_a_per_w", float, 0.54, "photodiode responsivity (A/W)"),
    ("h_gain", float, 3e-6, "optical channel gain"),
    ("bandwidth", parse_frequency, 2e7, "modulation bandwidth (Hz; kHz/MHz/GHz suffixes ok)"),
    ("n0_ma2_per_hz", float, 1e-16, "noise power spectral density (mA^2/Hz)"),
    ("subcarriers", str, "128", "subcarrier count N (comma list allowed for papr-ccdf)"),
    ("cp_length", int, -1, "cyclic prefix length in samples (-1 means N/4)"),
    ("kind", str, "qam", "constellation kind: qam or pam"),
    ("mod_order", str, "16", "modulation order M (comma list allowed for papr-ccdf)"),
    ("max_iters", int, 500, "gradient-ascent iteration cap"),
    ("step_size", float, 1e-4, "gradient-ascent step size"),
    ("tolerance", float, 1e-3, "relative-step stopping tolerance"),
    ("gradient_step", float, 1e-5, "finite-difference step"),
    ("bisection_bound", float, 1e5, "multiplier bracket bound of the projection"),
    ("bisection_max_iters", int, 500, "iteration cap of each projection bisection"),
    ("nodes", int, 32, "Gauss-Hermite nodes per real dimension"),
    ("seed", int, 12345, "master random seed"),
    ("ebn0_db", float, 15.0, "target Eb/N0 (dB) for optimize"),
    ("ebn0_start", float, 0.0, "sweep start Eb/N0 (dB)"),
    ("ebn0_stop", float, 25.0, "sweep stop Eb/N0 (dB, inclusive)"),
    ("ebn0_step", float, 1.0, "sweep step (dB)"),
    ("n_frames", int, 100000, "OFDM frames per CCDF estimate (per distribution for PCS)"),
    ("n_distributions", int, 1000, "random shaping distributions in the PCS CCDF study"),
    ("threshold_start_db", float, 5.0, "first PAPR threshold (dB)"),
    ("threshold_stop_db", float, 16.0, "last PAPR threshold (dB, inclusive)"),
    ("threshold_step_db", float, 0.5, "PAPR threshold spacing (dB)"),
    ("pcs_average", str, "ccdf", "PCS CCDF aggregation: ccdf or pooled"),
    ("n_starts", int, 100, "random starting points in the convergence study"),
    ("n_restarts", int, 0, "extra Dirichlet restarts per sweep point"),
    ("mc_samples", int, 1000000, "Monte Carlo samples in the validation suites"),
    ("oracle_instances", int, 200, "projection instances per order in validate"),
    ("out", str, "", "output file (or directory for multi-file runs)"),
    ("format", str, "csv", "output format: csv or json"),
]

_PARSERS = {key: parser for key, parser, _, _ in SCHEMA}
_DEFAULTS = {key: default for key, _, default, _ in SCHEMA}


@dataclass
class RunConfig:
    """Resolved configuration; builds the domain objects on demand."""

    values: dict

    def __getitem__(self, key: str):
        return self.values[key]

    def system_params(self) -> SystemParams:
        v = self.values
        return SystemParams(
            i_min=v["i_min_ma"],
            i_max=v["i_max_ma"],
            i_dc=v["i_dc_ma"],
            eta=v["eta_w_per_a"],
            gamma=v["gamma_a_per_w"],
            h_gain=v["h_gain"],
            bandwidth=v["bandwidth"],
            n0=v["n0_ma2_per_hz"],
        )

    def ofdm_config(self, n: int | None = None) -> OfdmConfig:
        n = int(n if n is not None else self.subcarrier_list()[0])
        cp = self.values["cp_length"]
        return OfdmConfig(n, n // 4 if cp < 0 else cp)

    def optimizer_config(self, power_budget: float) -> OptimizerConfig:
        v = self.values
        return OptimizerConfig(
            power_budget=power_budget,
            max_iters=v["max_iters"],
            step_size=v["step_size"],
            tolerance=v["tolerance"],
            gradient_step=v["gradient_step"],
            bisection_bound=v["bisection_bound"],
            bisection_max_iters=v["bisection_max_iters"],
        )

    def kind(self) -> ConstellationKind:
        try:
            return ConstellationKind(self.values["kind"].lower())
        except ValueError as exc:
            raise ConfigError(f"kind: unknown constellation kind {self.values['kind']!r}") from exc

    def mod_order_list(self) -> list[int]:
        try:
            return _parse_int_list(self.values["mod_order"])
        except ValueError as exc:
            raise ConfigError(f"mod_order: {exc}") from exc

    def subcarrier_list(self) -> list[int]:
        try:
            return _parse_int_list(self.values["subcarriers"])
        except ValueError as exc:
            raise ConfigError(f"subcarriers: {exc}") from exc

    def validate(self) -> None:
        self.system_params()
        for n in self.subcarrier_list():
            self.ofdm_config(n)
        self.optimizer_config(1.0)
        self.kind()
        for m in self.mod_order_list():
            build_constellation(self.kind(), m)
        if self.values["nodes"] < 8:
            raise ConfigError("nodes: need at least 8 quadrature nodes")
        if self.values["pcs_average"] not in ("ccdf", "pooled"):
            raise ConfigError(f"pcs_average: unknown mode {self.values['pcs_average']!r}")
        if self.values["format"] not in ("csv", "json"):
            raise ConfigError(f"format: unknown format {self.values['format']!r}")
        if self.values["seed"] < 0:
            raise ConfigError("seed: must be a nonnegative integer")


def load_config_file(path: str) -> dict:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _PARSERS:
            raise ConfigError(f"{path}:{lineno}: unknown configuration key {key!r}")
        values[key] = value.strip()
    return values


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = dict(_DEFAULTS)
    raw: dict = {}
    if args.config:
        raw.update(load_config_file(args.config))
    for key in _PARSERS:
        flag = getattr(args, key, None)
        if flag is not None:
            raw[key] = flag
    for key, text in raw.items():
        try:
            values[key] = _PARSERS[key](text)
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{key}: cannot parse {text!r} ({exc})") from exc
    cfg = RunConfig(values)
    try:
        cfg.validate()
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def _config_lines(cfg: RunConfig) -> list[str]:
    # 'out' names the file itself and is not needed to reproduce its content
    return [f"# {key} = {_fmt(cfg.values[key])}" for key in sorted(cfg.values) if key != "out"]


def write_csv(path: Path, cfg: RunConfig, header: list[str], rows: list[list]) -> None:
    lines = _config_lines(cfg)
    lines.append(",".join(header))
    lines.extend(",".join(_fmt(x) for x in row) for row in rows)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")


def write_json(path: Path, cfg: RunConfig, payload: dict) -> None:
    document = {
        "config": {k: cfg.values[k] for k in sorted(cfg.values) if k != "out"},
        **payload,
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document, indent=2) + "\n")


def _out_path(cfg: RunConfig, default_name: str) -> Path:
    out = cfg.values["out"]
    return Path(out) if out else Path(default_name)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _threshold_grid(cfg: RunConfig) -> np.ndarray:
    v = cfg.values
    return np.arange(
        v["threshold_start_db"], v["threshold_stop_db"] + 1e-9, v["threshold_step_db"]
    )


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("PCS_SHAPER_THREADS", "1")))
    except ValueError:
        return 1


def cmd_papr_ccdf(cfg: RunConfig) -> int:
    thresholds = _threshold_grid(cfg)
    orders = cfg.mod_order_list()
    ns = cfg.subcarrier_list()
    pairs = [(m, n) for m in orders for n in ns]
    multi = len(pairs) > 1
    out = cfg.values["out"]
    for m, n in pairs:
        c = build_constellation(cfg.kind(), m)
        ofdm = cfg.ofdm_config(n)
        rng_uniform = np.random.default_rng(np.random.SeedSequence([cfg.values["seed"], m, n, 0]))
        rng_pcs = np.random.default_rng(np.random.SeedSequence([cfg.values["seed"], m, n, 1]))
        uniform = papr_ccdf(
            c, "uniform", ofdm, cfg.values["n_frames"], 1, thresholds, rng_uniform
        )
        pcs = papr_ccdf(
            c,
            "random_pcs",
            ofdm,
            cfg.values["n_frames"],
            cfg.values["n_distributions"],
            thresholds,
            rng_pcs,
            average_mode=cfg.values["pcs_average"],
            workers=_workers(),
        )
        rows = [
            [thr, cu, cp, cfg.values["n_frames"], cfg.values["seed"]]
            for thr, cu, cp in zip(thresholds, uniform.exceed_prob, pcs.exceed_prob)
        ]
        name = f"papr_ccdf_m{m}_n{n}.csv"
        path = (Path(out) / name) if (multi and out) else (Path(out) if out else Path(name))
        write_csv(path, cfg, ["threshold_db", "ccdf_uniform", "ccdf_pcs_mean", "n_frames", "seed"], rows)
        print(f"wrote {path}")
    return EXIT_OK


def _optimize_at(cfg: RunConfig, ebn0_db: float):
    sp = cfg.system_params()
    ofdm = cfg.ofdm_config()
    m = cfg.mod_order_list()[0]
    c = build_constellation(cfg.kind(), m)
    budget = power_for_eb_n0(ebn0_db, m, ofdm, sp)
    scaled = scale_to_power(c, budget)
    opt_cfg = cfg.optimizer_config(budget)
    uniform = uniform_distribution(m)
    trace = optimize(scaled, ofdm, sp, opt_cfg, uniform, nodes=cfg.values["nodes"])
    return sp, ofdm, scaled, budget, opt_cfg, trace


def cmd_optimize(cfg: RunConfig) -> int:
    ebn0 = cfg.values["ebn0_db"]
    sp, ofdm, scaled, budget, opt_cfg, trace = _optimize_at(cfg, ebn0)
    m = scaled.order
    shaped = trace.final_distribution
    cap_uniform = capacity(uniform_distribution(m), scaled, ofdm, sp, cfg.values["nodes"])
    stats = clip_stats(scaled, shaped, ofdm, sp)
    proj_ms = 1e3 * np.asarray(trace.projection_seconds)
    payload = {
        "eb_n0_db": ebn0,
        "power_budget_ma2": budget,
        "constellation": {
            "kind": scaled.kind.value,
            "order": m,
            "points_re": [float(x) for x in scaled.points.real],
            "points_im": [float(x) for x in scaled.points.imag],
            "symbol_energies_ma2": [float(x) for x in scaled.symbol_energies],
        },
        "probabilities": [float(x) for x in shaped.probs],
        "capacity_shaped_bits": max(trace.capacities),
        "capacity_uniform_bits": cap_uniform.capacity_bits,
        "average_symbol_power_ma2": float(scaled.symbol_energies @ shaped.probs),
        "clip_stats": {
            "sigma_x_ma": stats.sigma_x,
            "alpha": stats.alpha,
            "beta": stats.beta,
            "r_factor": stats.r_factor,
            "clip_noise_var_ma2": stats.clip_noise_var,
        },
        "sndr_db": sndr_db(stats, sp),
        "trace": {
            "iterations": trace.iterations,
            "converged": trace.converged,
            "capacities_bits": [float(x) for x in trace.capacities],
            "relative_steps": [float(x) for x in trace.step_norms],
            "projection_ms": [float(1e3 * x) for x in trace.projection_seconds],
        },
        "projection_timing_ms": {
            "mean": float(proj_ms.mean()),
            "min": float(proj_ms.min()),
            "max": float(proj_ms.max()),
            "count": int(len(proj_ms)),
        },
    }
    path = _out_path(cfg, "optimize_report.json")
    write_json(path, cfg, payload)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_capacity_sweep(cfg: RunConfig) -> int:
    sp = cfg.system_params()
    ofdm = cfg.ofdm_config()
    m = cfg.mod_order_list()[0]
    c = build_constellation(cfg.kind(), m)
    v = cfg.values
    grid = np.arange(v["ebn0_start"], v["ebn0_stop"] + 1e-9, v["ebn0_step"])
    opt_cfg = cfg.optimizer_config(1.0)
    rng = np.random.default_rng(np.random.SeedSequence([v["seed"], m, 2]))
    points = capacity_sweep(
        c, ofdm, sp, grid, opt_cfg, rng=rng, nodes=v["nodes"], n_restarts=v["n_restarts"]
    )
    rows = []
    for pt in points:
        rows.append(
            [
                pt.eb_n0_db,
                pt.capacity_uniform,
                pt.capacity_shaped,
                pt.power_budget,
                pt.clip_stats.sigma_x,
                pt.clip_stats.r_factor,
                pt.clip_stats.clip_noise_var,
                pt.trace.iterations,
                pt.trace.converged,
            ]
        )
    path = _out_path(cfg, "capacity_sweep.csv")
    write_csv(
        path,
        cfg,
        [
            "eb_n0_db",
            "capacity_uniform_bits",
            "capacity_shaped_bits",
            "power_budget_ma2",
            "sigma_x_ma",
            "r_factor",
            "clip_noise_var_ma2",
            "iterations",
            "converged",
        ],
        rows,
    )
    print(f"wrote {path}")
    return EXIT_OK


def cmd_convergence(cfg: RunConfig) -> int:
    sp = cfg.system_params()
    ofdm = cfg.ofdm_config()
    m = cfg.mod_order_list()[0]
    v = cfg.values
    c = build_constellation(cfg.kind(), m)
    budget = power_for_eb_n0(v["ebn0_db"], m, ofdm, sp)
    scaled = scale_to_power(c, budget)
    opt_cfg = cfg.optimizer_config(budget)
    rng = np.random.default_rng(np.random.SeedSequence([v["seed"], m, 3]))
    histories = []
    iteration_counts = []
    for _ in range(v["n_starts"]):
        start = project(random_distribution(m, rng).probs, scaled, budget, opt_cfg)
        trace = optimize(scaled, ofdm, sp, opt_cfg, start, nodes=v["nodes"])
        padded = trace.capacities + [trace.capacities[-1]] * (
            opt_cfg.max_iters - trace.iterations
        )
        histories.append(padded)
        iteration_counts.append(trace.iterations)
    mean_curve = np.mean(histories, axis=0)
    rows = [[k, val] for k, val in enumerate(mean_curve)]
    path = _out_path(cfg, f"convergence_m{m}.csv")
    write_csv(path, cfg, ["iteration", "mean_capacity_bits"], rows)
    print(f"wrote {path}")
    print(
        f"mean iterations to tolerance: {np.mean(iteration_counts):.2f} "
        f"(converged {sum(i < opt_cfg.max_iters for i in iteration_counts)}"
        f"/{v['n_starts']} within {opt_cfg.max_iters})"
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# validation suites
# ---------------------------------------------------------------------------


def _suite_bussgang(cfg: RunConfig) -> dict:
    v = cfg.values
    rng = np.random.default_rng(np.random.SeedSequence([v["seed"], 101]))
    alphas = np.linspace(-3.0, -0.5, 5)
    betas = np.linspace(0.5, 3.0, 5)
    worst_gain = 0.0
    worst_var = 0.0
    for alpha in alphas:
        for beta in betas:
            r_hat, var_hat = empirical_bussgang(1.0, alpha, beta, v["mc_samples"], rng)
            r = attenuation_factor(alpha, beta)
            var = clipping_noise_variance(1.0, alpha, beta)
            worst_gain = max(worst_gain, abs(r_hat - r) / r)
            worst_var = max(worst_var, abs(var_hat - var))
    return {
        "name": "bussgang_closure",
        "worst_relative_gain_error": worst_gain,
        "worst_variance_error_over_sigma2": worst_var,
        "gain_tolerance": 0.01,
        "variance_tolerance": 0.02,
        "passed": bool(worst_gain <= 0.01 and worst_var <= 0.02),
    }


def _suite_capacity_oracle(cfg: RunConfig, n_instances: int = 20) -> dict:
    v = cfg.values
    sp = cfg.system_params()
    ofdm = cfg.ofdm_config()
    rng = np.random.default_rng(np.random.SeedSequence([v["seed"], 102]))
    worst = 0.0
    for i in range(n_instances):
        m = int(rng.choice([4, 8, 16]))
        c = build_constellation(ConstellationKind.QAM, m)
        budget = power_for_eb_n0(rng.uniform(0.0, 20.0), m, ofdm, sp)
        scaled = scale_to_power(c, budget)
        p = random_distribution(m, rng)
        quad = capacity(p, scaled, ofdm, sp, v["nodes"]).capacity_bits
        model = subchannel_model(scaled, p, ofdm, sp)
        mc = mc_mutual_information(p, scaled, model, v["mc_samples"], rng)
        worst = max(worst, abs(quad - mc.bits))
    return {
        "name": "quadrature_vs_monte_carlo",
        "instances": n_instances,
        "worst_abs_error_bits": worst,
        "tolerance_bits": 0.02,
        "passed": bool(worst <= 0.02),
    }


def _suite_projection_oracle(cfg: RunConfig) -> dict:
    v = cfg.values
    rng = np.random.default_rng(np.random.SeedSequence([v["seed"], 103]))
    worst = 0.0
    worst_feas = 0.0
    for m in (4, 8, 16):
        c = build_constellation(ConstellationKind.QAM, m)
        a = c.symbol_energies
        for _ in range(v["oracle_instances"]):
            q = rng.normal(0.0, rng.uniform(0.3, 3.0), m)
            budget = float(a.min() + rng.uniform(0.02, 1.3) * max(1.0 - a.min(), 0.1))
            opt_cfg = cfg.optimizer_config(budget)
            p = project(q, c, budget, opt_cfg).probs
            ref = project_reference(q, a, budget)
            worst = max(worst, float(np.max(np.abs(p - ref))))
            worst_feas = max(
                worst_feas,
                abs(p.sum() - 1.0),
                max(float(a @ p - budget), 0.0) / budget,
                max(float(-p.min()), 0.0),
                max(float(p.max() - 1.0), 0.0),
            )
    return {
        "name": "projection_vs_oracle",
        "instances_per_order": v["oracle_instances"],
        "worst_inf_norm_error": worst,
        "worst_constraint_violation": worst_feas,
        "error_tolerance": 1e-4,
        "constraint_tolerance": 1e-3,
        "passed": bool(worst <= 1e-4 and worst_feas <= 1e-3),
    }


def cmd_validate(cfg: RunConfig) -> int:
    suites = [_suite_bussgang(cfg), _suite_capacity_oracle(cfg), _suite_projection_oracle(cfg)]
    all_passed = all(s["passed"] for s in suites)
    payload = {"suites": suites, "all_passed": all_passed}
    out = cfg.values["out"]
    if cfg.values["format"] == "json" or out.endswith(".json"):
        path = _out_path(cfg, "validate_report.json")
        write_json(path, cfg, payload)
        print(f"wrote {path}")
    else:
        lines = _config_lines(cfg)
        for s in suites:
            lines.append(
                ",".join(f"{k}={_fmt(val)}" for k, val in s.items())
            )
        lines.append(f"all_passed={_fmt(all_passed)}")
        text = "\n".join(lines) + "\n"
        if out:
            path = Path(out)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
            print(f"wrote {path}")
        else:
            sys.stdout.write(text)
    for s in suites:
        print(f"suite {s['name']}: {'PASS' if s['passed'] else 'FAIL'}")
    return EXIT_OK if all_passed else EXIT_VALIDATION_FAILED


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcs-shaper",
        description="Probabilistic constellation shaping for clipped DCO-OFDM links",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "papr-ccdf": "PAPR CCDF study (uniform vs randomly shaped signaling)",
        "optimize": "optimize the symbol distribution at one Eb/N0",
        "capacity-sweep": "uniform vs shaped capacity along an Eb/N0 grid",
        "convergence": "iteration statistics over random starting points",
        "validate": "run the Bussgang, capacity-oracle and projection-oracle suites",
    }
    for name, help_text in commands.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="flat key = value configuration file")
        for key, _, default, help_str in SCHEMA:
            p.add_argument(f"--{key.replace('_', '-')}", dest=key, help=f"{help_str} (default {default})")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    handlers = {
        "papr-ccdf": cmd_papr_ccdf,
        "optimize": cmd_optimize,
        "capacity-sweep": cmd_capacity_sweep,
        "convergence": cmd_convergence,
        "validate": cmd_validate,
    }
    try:
        return handlers[args.command](cfg)
    except InfeasiblePowerError as exc:
        print(f"infeasible problem: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
