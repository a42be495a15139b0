"""End-to-end runs on a :class:`~marginalfs.datasets.DatasetMatrix`.

Output formats
--------------
Feature report (TSV)::

    feature  statistic  p  p_adjusted  selected

one row per input column, in input order; floats use Python's shortest
round-trip repr and ``selected`` is 0/1.  Stability curve (CSV):
``s,count,method``.  Rejections versus number of subsamples (CSV):
``fold,ell,n_selected``.
"""

import dataclasses
from dataclasses import dataclass

import numpy as np

from ._validation import check_choice, check_positive_int, check_probability
from .selection import MarginalTestSelector
from .stability import FoldPartition, make_folds, stability_curve
from .streams import StreamKey, stream_id

_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by the pipeline commands.

    Defaults: subsamples of size ``m=50``, ``ell=100`` subsamples, FDR level
    0.15 and ``10**5`` Monte Carlo permutations.
    """

    statistic: str = "xi"
    resample: bool = False
    m: int = 50
    ell: int = 100
    n_perm: int = 100_000
    pvalue: str = "mc"
    fdr: str = "by"
    alpha: float = 0.15
    folds: int = 4
    seed: int = 0
    threads: int = 1
    alternative: str = None

    def __post_init__(self):
        check_choice(self.statistic, "statistic", {"auc", "xi"})
        check_choice(self.pvalue, "pvalue", {"mc", "exact"})
        check_choice(self.fdr, "fdr", {"by", "bh"})
        check_probability(self.alpha, "alpha")
        for name in ("m", "ell", "n_perm", "folds", "threads"):
            check_positive_int(getattr(self, name), name)
        check_positive_int(self.seed, "seed", minimum=0)
        if self.seed >= 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.pvalue == "exact" and self.resample:
            raise ValueError("exact p-values are only valid for plain statistics")

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def selector(self, **overrides):
        params = dict(statistic=self.statistic, resample=self.resample, m=self.m,
                      n_subsamples=self.ell, n_perm=self.n_perm, pvalue=self.pvalue,
                      alternative=self.alternative, fdr=self.fdr, alpha=self.alpha,
                      random_state=self.seed, n_jobs=self.threads)
        params.update(overrides)
        return MarginalTestSelector(**params)

    @classmethod
    def field_types(cls):
        return {f.name: f.type for f in dataclasses.fields(cls)}


def _coerce(name, raw, typ):
    raw = raw.strip()
    if typ is bool or typ == "bool":
        low = raw.lower()
        if low in _BOOL_TRUE:
            return True
        if low in _BOOL_FALSE:
            return False
        raise ValueError(f"{name}: expected a boolean, got {raw!r}")
    if typ is int or typ == "int":
        return int(raw)
    if typ is float or typ == "float":
        return float(raw)
    return raw


def parse_config_text(text):
    """Parse ``key = value`` lines; ``#`` starts a comment, dashes equal underscores."""
    types = RunConfig.field_types()
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key=value")
        key, value = line.split("=", 1)
        key = key.strip().replace("-", "_")
        if key not in types:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        out[key] = _coerce(key, value, types[key])
    return out


def load_config(path=None, **overrides):
    """Defaults, then the config file, then explicit overrides (``None`` skipped)."""
    values = {}
    if path is not None:
        with open(path) as fh:
            values.update(parse_config_text(fh.read()))
    values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values)


@dataclass(frozen=True)
class FeatureReport:
    feature: str
    statistic: float
    p: float
    p_adjusted: float
    selected: bool


def run_selection(data, config):
    """Marginal tests on every feature followed by FDR selection.

    Returns
    -------
    reports : list of FeatureReport
    selection : SelectionResult
    """
    sel = config.selector().fit(data.y, data.x)
    reports = [
        FeatureReport(name, float(s), float(p), float(pa), bool(flag))
        for name, s, p, pa, flag in zip(data.feature_names, sel.statistics_, sel.pvalues_,
                                        sel.pvalues_adjusted_, sel.selection_.mask)
    ]
    return reports, sel.selection_


def format_reports(reports):
    lines = ["feature\tstatistic\tp\tp_adjusted\tselected"]
    for r in reports:
        lines.append(f"{r.feature}\t{r.statistic!r}\t{r.p!r}\t{r.p_adjusted!r}\t{int(r.selected)}")
    return "\n".join(lines) + "\n"


def _partition(data, config):
    if config.folds == 1:
        return FoldPartition(k=1, assignment=np.zeros(data.n, dtype=np.int64))
    return make_folds(data.n, config.folds, StreamKey(config.seed, stream_id("folds")))


def run_stability(data, config, s_values=None):
    """Stability curve of the configured ranking over ``config.folds`` folds."""
    folds = _partition(data, config)
    return stability_curve(data.y, data.x, folds, s_values, statistic=config.statistic,
                           resample=config.resample, m=config.m, n_subsamples=config.ell,
                           random_state=config.seed, n_jobs=config.threads)


def format_stability(curve):
    lines = ["s,count,method"]
    lines += [f"{s},{c},{curve.method}" for s, c in zip(curve.s_values, curve.counts)]
    return "\n".join(lines) + "\n"


def run_ell_sweep(data, config, ell_grid, alpha=None):
    """Number of features selected by resampled xi for every fold and ``ell``.

    Each fold is analysed on its own samples.  ``config.folds == 1`` uses the
    whole data set as a single fold.

    Returns
    -------
    list of (fold, ell, n_selected)
    """
    ell_grid = [check_positive_int(e, "ell") for e in ell_grid]
    if not ell_grid:
        raise ValueError("ell grid must not be empty")
    alpha = config.alpha if alpha is None else alpha
    folds = _partition(data, config)
    rows = []
    for i, idx in enumerate(folds.folds()):
        sub = data.take_rows(idx)
        fold_seed = stream_id("fold-seed", config.seed, i)
        for ell in ell_grid:
            cfg = config.replace(statistic="xi", resample=True, pvalue="mc", ell=ell,
                                 alpha=alpha, seed=fold_seed)
            _, selection = run_selection(sub, cfg)
            rows.append((i, ell, selection.n_selected))
    return rows


def format_ell_sweep(rows):
    lines = ["fold,ell,n_selected"] + [f"{f},{e},{k}" for f, e, k in rows]
    return "\n".join(lines) + "\n"
