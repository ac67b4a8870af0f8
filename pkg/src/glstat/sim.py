"""Monte-Carlo experiments: coverage tables, contamination curves, CLT and
Bahadur-remainder diagnostics.

Replicate r of an experiment always draws from ``make_rng(seed, tag, ..., r)``
and results are reduced in replicate order, so outputs do not depend on the
number of worker threads.
"""

from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import dataclass, field, replace
import hashlib
import io
import json
import logging
import math
from pathlib import Path

import numpy as np
from scipy import stats

from . import __version__
from ._backend import NAME as BACKEND
from ._backend import core
from ._errors import GLStatError
from .empirical_u import kernel_values, quantile_rank
from .gm_pareto import GMConfig, coverage_curve, make_estimator
from .kernels import gm_pareto_kernel, gm_pareto_kernel_law
from .processes import ProcessConfig, generate, make_rng, pareto_cdf
from .subsampling import (
    SubsamplingConfig,
    confidence_interval,
    interval_from_blocks,
    subsample_estimates,
)

log = logging.getLogger(__name__)

EXPERIMENTS = ("table_coverage", "sensitivity_curve", "clt_check", "bahadur_decay")
TABLE_COLUMNS = (
    "process", "rho", "m", "b", "gamma", "replicates",
    "coverage", "mc_stderr", "mean_length", "sd_length",
)
# stream tags keep experiments from sharing random numbers
_TAG = {name: i + 1 for i, name in enumerate(EXPERIMENTS)}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    process: ProcessConfig = ProcessConfig()
    gm: tuple = (2,)
    sub: tuple = (SubsamplingConfig(15, 0.10),)
    replicates: int = 500
    output_path: str = "out.csv"
    seed: int = 0
    y_grid: tuple | None = None
    n_ladder: tuple | None = None
    p: float = 0.5
    threads: int = 1
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise GLStatError(f"unknown experiment {self.experiment!r}; expected one of {EXPERIMENTS}")
        if self.replicates < 1:
            raise GLStatError("replicates must be >= 1")
        if self.threads < 1:
            raise GLStatError("threads must be >= 1")

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        process = ProcessConfig.from_dict(d.pop("process", {}))
        gm = tuple(d.pop("gm", (2,)))
        sub = tuple(
            s if isinstance(s, SubsamplingConfig) else SubsamplingConfig(**s)
            for s in d.pop("sub", ({"block_length": 15, "gamma": 0.10},))
        )
        for key in ("y_grid", "n_ladder"):
            if d.get(key) is not None:
                d[key] = tuple(d[key])
        known = {f for f in cls.__dataclass_fields__ if f != "extra"}
        extra = {k: d.pop(k) for k in list(d) if k not in known}
        return cls(process=process, gm=gm, sub=sub, extra=extra, **d)

    def to_dict(self):
        """Everything that determines the results (no output path or thread count)."""
        return {
            "experiment": self.experiment,
            "process": self.process.to_dict(),
            "gm": list(self.gm),
            "sub": [{"block_length": s.block_length, "gamma": s.gamma} for s in self.sub],
            "replicates": self.replicates,
            "seed": self.seed,
            "y_grid": None if self.y_grid is None else list(self.y_grid),
            "n_ladder": None if self.n_ladder is None else list(self.n_ladder),
            "p": self.p,
        }

    def config_hash(self):
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _map(func, items, threads):
    items = list(items)
    if threads <= 1:
        return [func(i) for i in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def _parse_m(m):
    return "n" if m == "n" else int(m)


# Coverage tables


@dataclass(frozen=True)
class CoverageRow:
    process: str
    rho: float
    m: object
    b: int
    gamma: float
    replicates: int
    coverage: float
    mc_stderr: float
    mean_length: float
    sd_length: float

    def as_tuple(self):
        return tuple(getattr(self, c) for c in TABLE_COLUMNS)


def _coverage_replicate(config, r):
    proc = config.process
    x = generate(proc, make_rng(config.seed, _TAG["table_coverage"], r))
    alpha = proc.pareto.alpha
    out = {}
    for m in config.gm:
        est = make_estimator(GMConfig(_parse_m(m)))
        full = float(est(x))
        for b in sorted({s.block_length for s in config.sub}):
            blocks = subsample_estimates(x, b, est)
            for s in config.sub:
                if s.block_length != b:
                    continue
                _, _, ci = interval_from_blocks(blocks, full, x.n, b, s.gamma)
                out[(m, b, s.gamma)] = (ci[0] <= alpha <= ci[1], ci[1] - ci[0])
    return out


def run_table_coverage(config):
    results = _map(lambda r: _coverage_replicate(config, r), range(config.replicates), config.threads)
    R = config.replicates
    rows = []
    for m in config.gm:
        for s in config.sub:
            key = (m, s.block_length, s.gamma)
            hits = np.array([res[key][0] for res in results], dtype=np.float64)
            lengths = np.array([res[key][1] for res in results])
            p = float(hits.mean())
            rows.append(CoverageRow(
                config.process.kind, config.process.rho, m, s.block_length, s.gamma, R,
                p, math.sqrt(p * (1 - p) / R), float(lengths.mean()),
                float(lengths.std(ddof=1)) if R > 1 else 0.0,
            ))
    return rows


# Contamination (sensitivity) curve


def default_y_grid():
    return tuple(float(y) for y in np.geomspace(0.1, 100.0, 200))


def run_sensitivity_curve(config, y_grid=None):
    """Rows (y, CP_gm, CP_ml); the GM column uses the first integer m in ``config.gm``."""
    y_grid = tuple(y_grid or config.y_grid or default_y_grid())
    sub = config.sub[0]
    alpha = config.process.pareto.alpha
    m_gm = next((int(m) for m in config.gm if m != "n"), 2)
    gm_cfg = GMConfig(m_gm, ties_to_inf=True)
    ml_cfg = GMConfig("n")
    samples = [
        generate(config.process, make_rng(config.seed, _TAG["sensitivity_curve"], j))
        for j in range(config.replicates)
    ]

    def base(cfg):
        est = make_estimator(cfg)
        return [confidence_interval(s, est, sub).ci for s in samples]

    base_gm, base_ml = base(gm_cfg), base(ml_cfg)

    def point(y):
        return (
            y,
            coverage_curve(samples, y, gm_cfg, sub, alpha, base_gm),
            coverage_curve(samples, y, ml_cfg, sub, alpha, base_ml),
        )

    return _map(point, y_grid, config.threads)


# CLT shape check


def batch_means_variance(series, batch_size=None):
    """Long-run variance by non-overlapping batch means (batch size ~ sqrt(len))."""
    x = np.asarray(series, dtype=np.float64)
    size = batch_size or max(1, int(math.isqrt(x.size)))
    k = x.size // size
    if k < 2:
        raise GLStatError("need at least two batches")
    means = x[: k * size].reshape(k, size).mean(axis=1)
    return size * float(means.var(ddof=1))


def gm2_projection(x, params):
    """m * E[A | Y_1 = x] for the m = 2 GM median under Pareto margins.

    h(x, y) <= alpha exactly when |log(x / y)| >= M_2 / (2 alpha).
    """
    alpha = params.alpha
    law = gm_pareto_kernel_law(2, alpha)
    c = gm_pareto_kernel(2).params["scale"] * 2.0 / alpha
    x = np.asarray(x, dtype=np.float64)
    prob = pareto_cdf(params, x * math.exp(-c)) + 1.0 - pareto_cdf(params, x * math.exp(c))
    return 2.0 * (0.5 - prob) / law.pdf(alpha)


def _ks_to_fitted_normal(z):
    return float(stats.kstest(z, "norm", args=(z.mean(), z.std(ddof=1))).statistic)


def run_clt_check(config, n_ladder=None, boot=200):
    ladder = tuple(n_ladder or config.n_ladder or (200, 800, 3200))
    m = _parse_m(config.gm[0])
    alpha = config.process.pareto.alpha
    est = make_estimator(GMConfig(m))
    tag = _TAG["clt_check"]
    rows = []
    for n in ladder:
        proc = replace(config.process, n=n)

        def one(r, proc=proc, n=n):
            x = generate(proc, make_rng(config.seed, tag, n, r))
            return math.sqrt(n) * (est(x) - alpha)

        z = np.array(_map(one, range(config.replicates), config.threads))
        ks = _ks_to_fitted_normal(z)
        brng = make_rng(config.seed, tag, n, 1 << 30)
        ks_boot = [_ks_to_fitted_normal(z[brng.integers(0, z.size, z.size)]) for _ in range(boot)]
        rows.append({
            "n": n,
            "replicates": config.replicates,
            "mean": float(z.mean()),
            "mean_stderr": float(z.std(ddof=1) / math.sqrt(z.size)),
            "variance": float(z.var(ddof=1)),
            "skewness": float(stats.skew(z)),
            "ks_distance": ks,
            "ks_stderr": float(np.std(ks_boot, ddof=1)),
        })
    if m == 2:
        # reference variance: long-run variance of the linear projection
        long = generate(replace(config.process, n=1 << 18), make_rng(config.seed, tag, 0, 1 << 31))
        sigma2 = batch_means_variance(gm2_projection(long.values, config.process.pareto))
        for row in rows:
            row["sigma2_projection"] = sigma2
    return rows


# Bahadur remainder decay


def bahadur_remainder(x, m, p, law):
    """R_n = xi_hat - xi - (H_F(xi) - H_n(xi)) / h_F(xi) for one sample."""
    vals = kernel_values(x, gm_pareto_kernel(m))
    xi = law.ppf(p)
    hn = np.count_nonzero(vals <= xi) / vals.size
    xi_hat = float(core.select_rank(vals, quantile_rank(p, vals.size)))
    return xi_hat - xi - (law.cdf(xi) - hn) / law.pdf(xi)


def run_bahadur_decay(config, n_ladder=None):
    ladder = tuple(n_ladder or config.n_ladder or (100, 400, 1600))
    m = _parse_m(config.gm[0])
    if m == "n":
        raise GLStatError("the Bahadur experiment needs a fixed kernel dimension")
    law = gm_pareto_kernel_law(m, config.process.pareto.alpha)
    tag = _TAG["bahadur_decay"]
    rows = []
    for n in ladder:
        proc = replace(config.process, n=n)

        def one(r, proc=proc, n=n):
            x = generate(proc, make_rng(config.seed, tag, n, r))
            return bahadur_remainder(x, m, config.p, law)

        rem = np.array(_map(one, range(config.replicates), config.threads))
        scaled = math.sqrt(n) * np.abs(rem)
        rows.append({
            "n": n,
            "replicates": config.replicates,
            "p": config.p,
            "median_scaled_remainder": float(np.median(scaled)),
            "q25_scaled_remainder": float(np.quantile(scaled, 0.25)),
            "q75_scaled_remainder": float(np.quantile(scaled, 0.75)),
            "all_finite": bool(np.all(np.isfinite(rem))),
        })
    return rows


# Output


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def manifest_line(config):
    return (
        f"# glstat {__version__} experiment={config.experiment} "
        f"config_sha256={config.config_hash()} seed={config.seed} replicates={config.replicates}"
    )


def render_csv(config, columns, rows):
    buf = io.StringIO()
    buf.write(manifest_line(config) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def run_experiment(config):
    """Run ``config`` and return ``(columns, rows, summary)``."""
    if config.experiment == "table_coverage":
        rows = run_table_coverage(config)
        return TABLE_COLUMNS, [r.as_tuple() for r in rows], [r.__dict__ for r in rows]
    if config.experiment == "sensitivity_curve":
        rows = run_sensitivity_curve(config)
        return ("y", "CP_gm", "CP_ml"), rows, None
    if config.experiment == "clt_check":
        rows = run_clt_check(config)
    else:
        rows = run_bahadur_decay(config)
    columns = tuple(rows[0])
    return columns, [tuple(r[c] for c in columns) for r in rows], rows


def write_outputs(config, columns, rows, summary=None):
    """Write the CSV and its JSON manifest sidecar; returns both paths."""
    path = Path(config.output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(render_csv(config, columns, rows))
    manifest = {
        "version": __version__,
        "experiment": config.experiment,
        "config": config.to_dict(),
        "config_sha256": config.config_hash(),
        "seed": config.seed,
        "replicates": config.replicates,
        "columns": list(columns),
        "rows": len(rows),
        "csv": path.name,
        "backend": BACKEND,
    }
    if summary is not None and config.experiment in ("clt_check", "bahadur_decay"):
        manifest["summary"] = summary
    side = path.with_name(path.name + ".manifest.json")
    side.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path, side
