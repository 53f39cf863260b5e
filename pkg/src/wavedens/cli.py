"""Config-driven command line: simulate, fit, benchmark, diagnose-decay, tables.

Experiments are described by a JSON config (see the README for the schema);
every artifact is written with sorted keys and no timestamps so identical
configs give byte-identical outputs, and each run directory carries a
manifest listing the produced files under the sha256 of the effective config.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import click
import numpy as np

from .baseline_kernel import KernelConfig, kernel_estimate
from .cross_validation import fit_cv
from .estimator import (Sample, apply_plan, empirical_coefficients,
                        reconstruct, theoretical_plan)
from .processes import ProcessSpec, build_target, derived_seed, simulate
from .risk_metrics import covariance_decay, monte_carlo_risk
from .wavelet_basis import WaveletTables, build_filter, cascade_tables

__all__ = ["ExperimentConfig", "ConfigError", "load_config", "main"]

METHODS = ("HTCV", "STCV", "theoretical-hard", "theoretical-soft",
           "kernel-rot", "kernel-cv")
_TARGET_KINDS = ("sine_uniform_mixture", "gaussian_mixture")
_FLOAT_FMT = "%.17g"


class ConfigError(ValueError):
    """Raised for malformed experiment configs (CLI exit code 2)."""


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: sampling regimes x methods x sample sizes."""

    experiment: str
    cases: tuple[dict, ...]
    methods: tuple[str, ...] = ("HTCV", "STCV")
    n: tuple[int, ...] = (1024,)
    M: int = 100
    p: tuple[float, ...] = (2.0,)
    moments: tuple[int, ...] = ()
    seed: int = 20260814
    out: str = "runs"
    wavelet: dict = field(default_factory=lambda: dict(_WAVELET_DEFAULTS))
    grid_points: int = 4096
    threads: int = 1
    K: float = 1.0
    b: float = 1.0
    decay: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.experiment:
            raise ConfigError("experiment id must be a non-empty string")
        if not self.cases:
            raise ConfigError("config needs at least one case block")
        for block in self.cases:
            _check_case_block(block)
        for m in self.methods:
            if m not in METHODS:
                raise ConfigError(f"unknown method {m!r}, expected one of {METHODS}")
        if not self.n or any(v < 8 for v in self.n):
            raise ConfigError(f"n values must be >= 8, got {self.n}")
        if self.M < 1:
            raise ConfigError(f"M must be >= 1, got {self.M}")
        if any(p < 1 for p in self.p):
            raise ConfigError(f"p values must be >= 1, got {self.p}")
        if any(k < 1 for k in self.moments):
            raise ConfigError(f"moment orders must be >= 1, got {self.moments}")
        bad = set(self.wavelet) - set(_WAVELET_DEFAULTS)
        if bad:
            raise ConfigError(f"unknown wavelet keys {sorted(bad)}")
        object.__setattr__(self, "wavelet", {**_WAVELET_DEFAULTS, **self.wavelet})
        if self.grid_points < 64:
            raise ConfigError("grid_points must be >= 64")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "cases": list(self.cases),
            "methods": list(self.methods),
            "n": list(self.n),
            "M": self.M,
            "p": list(self.p),
            "moments": list(self.moments),
            "seed": self.seed,
            "out": self.out,
            "wavelet": dict(self.wavelet),
            "grid_points": self.grid_points,
            "threads": self.threads,
            "K": self.K,
            "b": self.b,
            "decay": dict(self.decay),
        }

    def sha256(self) -> str:
        """Hash of the result-determining config fields.

        The output directory and thread count change where and how fast
        results are produced, never what they are, so they stay out of the
        hash: the same experiment always lands under the same identity.
        """
        semantic = {k: v for k, v in self.to_dict().items()
                    if k not in ("out", "threads")}
        return hashlib.sha256(_dumps(semantic).encode()).hexdigest()

    def tables(self) -> WaveletTables:
        w = self.wavelet
        return cascade_tables(build_filter(w["family"], w["N"]), depth=w["depth"])

    def process_spec(self, block: dict, n: int) -> ProcessSpec:
        kwargs = {}
        if block["case"] == "lsv":
            kwargs["lsv_alpha"] = block.get("lsv_alpha", 0.5)
        else:
            kwargs["target"] = build_target(block.get("target", "sine_uniform_mixture"),
                                            block.get("target_params"))
        if "ar_depth" in block:
            kwargs["ar_depth"] = block["ar_depth"]
        return ProcessSpec(case=block["case"], n=n, seed=self.seed, **kwargs)


_WAVELET_DEFAULTS = {"family": "symmlet", "N": 8, "depth": 10}
_CASE_KEYS = {"case", "target", "target_params", "lsv_alpha", "ar_depth"}
_CONFIG_KEYS = {"experiment", "cases", "methods", "n", "M", "p", "moments", "seed",
                "out", "wavelet", "grid_points", "threads", "K", "b", "decay"}


def _check_case_block(block: dict) -> None:
    if not isinstance(block, dict) or "case" not in block:
        raise ConfigError(f"case block must be an object with a 'case' key: {block!r}")
    bad = set(block) - _CASE_KEYS
    if bad:
        raise ConfigError(f"unknown case keys {sorted(bad)} in {block!r}")
    if "target" in block and block["target"] not in _TARGET_KINDS:
        raise ConfigError(
            f"unknown target {block['target']!r}, expected one of {_TARGET_KINDS}")


def load_config(path: str, seed: int | None = None, out: str | None = None,
                threads: int | None = None) -> ExperimentConfig:
    """Parse and validate a JSON config, applying CLI/env overrides.

    --seed/--out/--threads replace the config values before validation.
    A seed override changes the config hash; out and threads are excluded
    from it. WAVEDENS_THREADS beats both the --threads flag and the config.
    """
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    bad = set(raw) - _CONFIG_KEYS
    if bad:
        raise ConfigError(f"unknown config keys {sorted(bad)}")
    if seed is not None:
        raw["seed"] = seed
    if out is not None:
        raw["out"] = out
    if threads is not None:
        raw["threads"] = threads
    env = os.environ.get("WAVEDENS_THREADS")
    if env is not None:
        try:
            raw["threads"] = int(env)
        except ValueError:
            raise ConfigError(f"WAVEDENS_THREADS must be an integer, got {env!r}")
    try:
        return ExperimentConfig(
            experiment=raw.get("experiment", ""),
            cases=tuple(raw.get("cases", ())),
            methods=tuple(raw.get("methods", ("HTCV", "STCV"))),
            n=tuple(int(v) for v in raw.get("n", (1024,))),
            M=int(raw.get("M", 100)),
            p=tuple(float(v) for v in raw.get("p", (2.0,))),
            moments=tuple(int(v) for v in raw.get("moments", ())),
            seed=int(raw.get("seed", 20260814)),
            out=str(raw.get("out", "runs")),
            wavelet=dict(raw.get("wavelet", {})),
            grid_points=int(raw.get("grid_points", 4096)),
            threads=int(raw.get("threads", 1)),
            K=float(raw.get("K", 1.0)),
            b=float(raw.get("b", 1.0)),
            decay=dict(raw.get("decay", {})),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid config value: {exc}") from exc


# ---------------------------------------------------------------------------
# fit adapters: method name -> Sample -> (estimate, selection-like, fractions)

class _PlanSelection:
    """Duck-typed stand-in for CvSelection when thresholds are theoretical."""

    def __init__(self, plan):
        self.j1_hat = plan.j1
        self.lambdas = dict(plan.lambdas)


def _cv_fit(sample, tables, mode, grid_points):
    estimate, selection = fit_cv(sample, tables, mode=mode, grid_points=grid_points)
    coeffs = empirical_coefficients(sample, tables, selection.j0, selection.j_star)
    fractions = {}
    for j in range(selection.j0, selection.j_star + 1):
        if j <= selection.j1_hat:
            values = coeffs.detail(j).values
            fractions[j] = float(np.mean(np.abs(values) <= selection.lambdas[j]))
        else:
            fractions[j] = 1.0
    return estimate, selection, fractions


def _theoretical_fit(sample, tables, mode, grid_points, K, b):
    plan = theoretical_plan(sample.n, tables.vanishing_moments, b=b, K=K, mode=mode)
    coeffs = apply_plan(empirical_coefficients(sample, tables, plan.j0, plan.j1), plan)
    meta = f"theoretical-{mode} j0={plan.j0} j1={plan.j1} n={sample.n} K={K}"
    estimate = reconstruct(coeffs, tables, grid_points, meta=meta)
    fractions = {lev.j: float(lev.killed.mean()) for lev in coeffs.details}
    return estimate, _PlanSelection(plan), fractions


def _kernel_fit(sample, rule, grid_points):
    config = KernelConfig(bandwidth_rule=rule, grid_points=grid_points)
    return kernel_estimate(sample, config), None, None


def make_fit(method: str, tables: WaveletTables, grid_points: int,
             K: float = 1.0, b: float = 1.0):
    """Bind a method name to a fit callable usable by monte_carlo_risk."""
    if method in ("HTCV", "STCV"):
        return lambda s: _cv_fit(s, tables, method, grid_points)
    if method in ("theoretical-hard", "theoretical-soft"):
        mode = method.split("-")[1]
        return lambda s: _theoretical_fit(s, tables, mode, grid_points, K, b)
    if method in ("kernel-rot", "kernel-cv"):
        rule = "rule_of_thumb" if method == "kernel-rot" else "cv"
        return lambda s: _kernel_fit(s, rule, grid_points)
    raise ConfigError(f"unknown method {method!r}, expected one of {METHODS}")


# ---------------------------------------------------------------------------
# deterministic writers

def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write(path: Path, text: str, outputs: list) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    outputs.append(path.name)


def _write_manifest(out_dir: Path, cfg: ExperimentConfig, command: str,
                    outputs: list, extra: dict | None = None) -> None:
    manifest = {
        "command": command,
        "config_sha256": cfg.sha256(),
        "experiment": cfg.experiment,
        "outputs": sorted(outputs),
    }
    if extra:
        manifest.update(extra)
    (out_dir / "manifest.json").write_text(_dumps(manifest))


def _csv(rows: list[dict], columns: list[str]) -> str:
    def cell(v):
        if v is None:
            return ""
        if isinstance(v, float):
            return _FLOAT_FMT % v
        return str(v)
    lines = [",".join(columns)]
    lines += [",".join(cell(row.get(c)) for c in columns) for row in rows]
    return "\n".join(lines) + "\n"


def _read_sample_csv(path: str, support: tuple[float, float]) -> Sample:
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or (lineno == 1 and text == "x"):
                continue
            try:
                values.append(float(text))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: not a number: {text!r}") from None
    if not values:
        raise ValueError(f"{path}: no sample values found")
    return Sample(values=np.asarray(values), support=support)


# ---------------------------------------------------------------------------
# commands

@click.group()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="JSON experiment config.")
@click.option("--seed", type=int, default=None, help="Override the master seed.")
@click.option("--out", type=click.Path(), default=None, help="Override the output directory.")
@click.option("--threads", type=int, default=None,
              help="Worker threads (WAVEDENS_THREADS wins over this flag).")
@click.pass_context
def cli(ctx, config_path, seed, out, threads):
    """Wavelet density estimation experiments for dependent samples."""
    ctx.obj = {"config": config_path, "seed": seed, "out": out, "threads": threads}


def _need_config(ctx) -> ExperimentConfig:
    opts = ctx.obj
    if opts["config"] is None:
        raise click.UsageError("this command needs --config PATH")
    return load_config(opts["config"], seed=opts["seed"], out=opts["out"],
                       threads=opts["threads"])


def _case_labels(cases: tuple[dict, ...]) -> list[str]:
    """Case names as file labels, suffixed with the block index on repeats."""
    names = [block["case"] for block in cases]
    return [name if names.count(name) == 1 else f"{name}{i}"
            for i, name in enumerate(names)]


@cli.command(name="simulate")
@click.pass_context
def simulate_cmd(ctx):
    """Write one sample CSV per (case, n, replicate) plus a seed manifest."""
    cfg = _need_config(ctx)
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs: list = []
    seeds = {}
    for block, label in zip(cfg.cases, _case_labels(cfg.cases)):
        for n in cfg.n:
            spec = cfg.process_spec(block, n)
            for r in range(cfg.M):
                seed = derived_seed(cfg.seed, r)
                sample = simulate(replace(spec, seed=seed))
                name = f"{label}_n{n}_r{r:03d}.csv"
                body = "x\n" + "\n".join(_FLOAT_FMT % v for v in sample.values) + "\n"
                _write(out_dir / name, body, outputs)
                seeds[name] = seed
    _write_manifest(out_dir, cfg, "simulate", outputs, {"seeds": seeds})
    click.echo(f"wrote {len(outputs)} samples to {out_dir}")


@cli.command(name="fit")
@click.option("--sample", "sample_path", type=click.Path(exists=True), required=True,
              help="Single-column sample CSV.")
@click.option("--method", type=click.Choice(METHODS), required=True)
@click.option("--K", "K", type=float, default=None,
              help="Threshold constant (required for theoretical-* methods).")
@click.option("--b", "b", type=float, default=1.0,
              help="Dependence exponent for the theoretical schedule.")
@click.option("--support", nargs=2, type=float, default=(0.0, 1.0),
              help="Sample support (lo hi).")
@click.option("--family", default="symmlet")
@click.option("--N", "N", type=int, default=8)
@click.option("--depth", type=int, default=10)
@click.option("--grid-points", type=int, default=4096)
@click.pass_context
def fit_cmd(ctx, sample_path, method, K, b, support, family, N, depth, grid_points):
    """Fit one method to one sample file; write estimate CSV (+ selection JSON)."""
    if method.startswith("theoretical") and K is None:
        raise click.UsageError(f"method {method} requires --K")
    out_dir = Path(ctx.obj["out"] or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    sample = _read_sample_csv(sample_path, (support[0], support[1]))
    tables = cascade_tables(build_filter(family, N), depth=depth)
    fit = make_fit(method, tables, grid_points, K=K if K is not None else 1.0, b=b)
    estimate, selection, _ = fit(sample)
    stem = Path(sample_path).stem
    outputs: list = []
    rows = [{"x": float(x), "density": float(v)}
            for x, v in zip(estimate.grid, estimate.values)]
    _write(out_dir / f"{stem}_{method}_estimate.csv", _csv(rows, ["x", "density"]),
           outputs)
    if method in ("HTCV", "STCV"):
        _write(out_dir / f"{stem}_{method}_selection.json",
               _dumps(selection.to_dict()), outputs)
    click.echo(f"wrote {', '.join(outputs)} to {out_dir}")


@cli.command()
@click.pass_context
def benchmark(ctx):
    """Monte-Carlo risk for every case x n x method in the config."""
    cfg = _need_config(ctx)
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    tables = cfg.tables()
    reports = []
    for block in cfg.cases:
        for n in cfg.n:
            spec = cfg.process_spec(block, n)
            for method in cfg.methods:
                fit = make_fit(method, tables, cfg.grid_points, K=cfg.K, b=cfg.b)
                reports.append(monte_carlo_risk(
                    spec, fit, cfg.M, p_list=cfg.p, method=method,
                    moment_orders=cfg.moments, threads=cfg.threads))

    outputs: list = []
    payload = {"config_sha256": cfg.sha256(), "experiment": cfg.experiment,
               "reports": [r.to_dict() for r in reports]}
    _write(out_dir / "reports.json", _dumps(payload), outputs)

    p_cols = [f"lp_{p:g}" for p in cfg.p]
    rows = []
    for r in reports:
        row = {"case": r.case, "n": r.n, "method": r.method, "mise": r.mise,
               "mean_j1": r.mean_j1}
        row.update({f"lp_{p:g}": r.lp_risks.get(p) for p in cfg.p})
        rows.append(row)
    _write(out_dir / "risk_summary.csv",
           _csv(rows, ["case", "n", "method", "mise", *p_cols, "mean_j1"]), outputs)

    profile_rows = [
        {"case": r.case, "n": r.n, "method": r.method, "level": j,
         "mean_lambda": r.threshold_profile[j],
         "killed_fraction": r.thresholded_fraction[j] if r.thresholded_fraction else None}
        for r in reports if r.threshold_profile
        for j in sorted(r.threshold_profile)
    ]
    if profile_rows:
        _write(out_dir / "threshold_profile.csv",
               _csv(profile_rows, ["case", "n", "method", "level", "mean_lambda",
                                   "killed_fraction"]), outputs)

    moment_rows = [
        {"case": r.case, "n": r.n, "method": r.method, "order": k,
         "value": r.integrated_moments[k]}
        for r in reports if r.integrated_moments
        for k in sorted(r.integrated_moments)
    ]
    if moment_rows:
        _write(out_dir / "integrated_moments.csv",
               _csv(moment_rows, ["case", "n", "method", "order", "value"]), outputs)

    _write_manifest(out_dir, cfg, "benchmark", outputs)
    click.echo(f"wrote {len(outputs)} files to {out_dir}")


@cli.command(name="diagnose-decay")
@click.pass_context
def diagnose_decay(ctx):
    """Covariance-decay profiles: LSV over an alpha grid, other cases as controls."""
    cfg = _need_config(ctx)
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    decay = cfg.decay
    j = int(decay.get("j", 2))
    k = int(decay.get("k", 1))
    n = int(decay.get("n", max(cfg.n)))
    max_lag = int(decay.get("max_lag", min(200, n // 4)))
    alphas = [float(a) for a in decay.get("alphas", [v / 10 for v in range(1, 10)])]
    tables = cfg.tables()
    outputs: list = []
    summary = []

    def run(spec: ProcessSpec, label: str):
        sample = simulate(spec)
        prof = covariance_decay(sample, tables, j=j, k=k, max_lag=max_lag)
        rows = [{"lag": int(r), "covariance": float(c), "floor": float(f)}
                for r, c, f in zip(prof.lags, prof.covariances, prof.floor)]
        _write(out_dir / f"decay_{label}.csv",
               _csv(rows, ["lag", "covariance", "floor"]), outputs)
        if prof.sub_noise:
            flag = "exponential-or-faster"
        elif prof.slope is not None:
            flag = f"polynomial, slope = {prof.slope:.2f}"
        else:
            flag = "inconclusive"
        summary.append({"label": label, "case": spec.case, "n": spec.n,
                        "slope": prof.slope, "variance": prof.variance,
                        "flag": flag})

    i = 0
    for block, label in zip(cfg.cases, _case_labels(cfg.cases)):
        if block["case"] == "lsv":
            for alpha in alphas:
                spec = ProcessSpec(case="lsv", n=n, seed=derived_seed(cfg.seed, i),
                                   lsv_alpha=alpha)
                run(spec, f"lsv_alpha{alpha:.2f}")
                i += 1
        else:
            base = cfg.process_spec(block, n)
            run(replace(base, seed=derived_seed(cfg.seed, i)), label)
            i += 1
    _write(out_dir / "decay_summary.json", _dumps({
        "config_sha256": cfg.sha256(), "experiment": cfg.experiment,
        "probe": {"kind": "phi", "j": j, "k": k}, "profiles": summary}), outputs)
    _write_manifest(out_dir, cfg, "diagnose-decay", outputs)
    click.echo(f"wrote {len(outputs)} profiles to {out_dir}")


@cli.command(name="tables")
@click.option("--family", default="symmlet")
@click.option("--N", "N", type=int, default=8)
@click.option("--depth", type=int, default=10)
@click.pass_context
def tables_cmd(ctx, family, N, depth):
    """Dump the sampled scaling/wavelet tables as CSV."""
    out_dir = Path(ctx.obj["out"] or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    tables = cascade_tables(build_filter(family, N), depth=depth)
    rows = []
    for kind, values in (("phi", tables.phi_values), ("psi", tables.psi_values)):
        grid = tables.sample_grid(kind)
        rows += [{"kind": kind, "t": float(t), "value": float(v)}
                 for t, v in zip(grid, values)]
    name = f"{family}{N}_depth{depth}.csv"
    (out_dir / name).write_text(_csv(rows, ["kind", "t", "value"]))
    click.echo(f"wrote {name} to {out_dir}")


def main(argv=None) -> int:
    """Entry point with the documented exit codes (0 ok, 2 config, 3 runtime)."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except (ConfigError, click.UsageError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        return 3
    except Exception as exc:
        click.echo(f"error: {exc}", err=True)
        return 3
    return 0


if __name__ == "__main__":
    import sys

    sys.exit(main())
