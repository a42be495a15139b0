"""End-to-end acceptance criteria 1 to 9.

Each test records one ``ACCEPTANCE <k> PASS|FAIL ...`` line, printed in the
terminal summary, and then asserts the criterion.  Run just these with::

    pytest -m acceptance -s
"""

import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, null_sample
from marginalfs import _kernels
from marginalfs.cli import main
from marginalfs.datasets import generate_synthetic
from marginalfs.exact import tau_pmf
from marginalfs.marginal import MarginalStatistic
from marginalfs.multiplicity import by_select, fdr_simulation, harmonic_number
from marginalfs.permutation import PermutationScheme, permutation_pvalue
from marginalfs.pipeline import RunConfig, run_ell_sweep
from marginalfs.rankstats import rank_values
from marginalfs.resampling import (
    bootstrap_xi_with_replacement,
    build_design,
    exhaustive_u_statistic,
    resampled_auc,
    resampled_xi,
)
from marginalfs.stability import curve_from_scores, stability_curve
from marginalfs.streams import StreamKey, make_stream, stream_id
from marginalfs.testkit import brute_permutation_pvalue, brute_tau_pmf

pytestmark = pytest.mark.acceptance


def record(k, ok, elapsed, budget, detail):
    ok = bool(ok) and elapsed < budget
    line = (f"ACCEPTANCE {k} {'PASS' if ok else 'FAIL'} {detail} "
            f"[{elapsed:.1f}s, budget {budget}s]")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def binom_bound(alpha, n):
    return alpha + 3 * math.sqrt(alpha * (1 - alpha) / n)


def test_1_tau_distribution_exact():
    t0 = time.perf_counter()
    worst = 0.0
    supports_match = True
    for n in range(2, 13):
        for n0 in range(1, n):
            dist = tau_pmf(n0, n - n0)
            brute = brute_tau_pmf(n0, n - n0)
            supports_match &= dist.support.tolist() == list(brute)
            for t, pr in zip(dist.support.tolist(), dist.pmf):
                worst = max(worst, abs(pr - float(brute.get(t, 0))))
    ok = supports_match and worst <= 1e-12
    record(1, ok, time.perf_counter() - t0, 5, f"max atom error {worst:.2e} (n <= 12)")


def test_2_moments():
    t0 = time.perf_counter()
    mean_err = xi_err = 0.0
    for n0 in range(1, 51):
        for n1 in range(1, 51):
            d = tau_pmf(n0, n1)
            mean_err = max(mean_err, abs(d.mean - 2 * n0 * n1 / (n0 + n1)))
            xi_err = max(xi_err, abs(float(np.dot(d.xi_values, d.pmf))))
    sym_err = var_err = 0.0
    for m in range(1, 9):
        d = tau_pmf(m, m)
        pmf = dict(zip(d.support.tolist(), d.pmf))
        sym_err = max(sym_err, max(abs(p - pmf.get(2 * m - x, 0.0)) for x, p in pmf.items()))
        var_err = max(var_err, abs(d.var - m * (m - 1) / (2 * m - 1)))
    ok = mean_err <= 1e-10 and sym_err <= 1e-10 and var_err <= 1e-10 and xi_err <= 1e-12
    record(2, ok, time.perf_counter() - t0, 5,
           f"mean {mean_err:.1e}, symmetry {sym_err:.1e}, variance {var_err:.1e}, "
           f"E[xi] {xi_err:.1e}")


def test_3_monte_carlo_convergence():
    t0 = time.perf_counter()
    sample = null_sample(make_stream(StreamKey(2024)), 6, 6)
    design = build_design(12, 5, 10**5, StreamKey(2024, stream_id("design")))
    perm = rank_values(sample.values)
    order = _kernels.sort_rows_by_rank(design.indices, perm.ranks)
    labels = sample.labels[None, :].astype(np.int8)
    parts = []
    ok = True
    for kernel, fn in (("auc", resampled_auc), ("xi", resampled_xi)):
        values = _kernels.subsample_values(labels, order, _kernels.KERNELS[kernel])
        se = values.std(ddof=1) / math.sqrt(values.size)
        gap = abs(fn(sample, design) - exhaustive_u_statistic(sample, 5, kernel))
        ok &= gap <= 4 * se
        parts.append(f"{kernel} gap {gap / se:.2f} SE")
    record(3, ok, time.perf_counter() - t0, 30, ", ".join(parts))


def test_4_bootstrap_bias():
    t0 = time.perf_counter()
    boot, sub = [], []
    for seed in range(20):
        sample = null_sample(make_stream(StreamKey(seed, stream_id("null-data"))), 100, 100)
        boot.append(bootstrap_xi_with_replacement(sample, 1000,
                                                  StreamKey(seed, stream_id("bootstrap"))))
        sub.append(resampled_xi(sample, build_design(200, 50, 1000,
                                                     StreamKey(seed, stream_id("design")))))
    b, s = float(np.mean(boot)), float(np.mean(sub))
    record(4, b >= 0.25 and abs(s) <= 0.05, time.perf_counter() - t0, 60,
           f"bootstrap mean xi {b:.3f} (>= 0.25), resampled mean xi {s:+.4f} (|.| <= 0.05)")


def _null_pvalues(stat, mode, alternative, n_datasets=2000, n_perm=999):
    out = np.empty(n_datasets)
    for i in range(n_datasets):
        sample = null_sample(make_stream(StreamKey(i, stream_id("null-data"))), 20, 20)
        if mode == "exact":
            out[i] = stat.exact_pvalue(sample)
        else:
            scheme = PermutationScheme(n_perm, StreamKey(i, stream_id("permutation")),
                                       alternative)
            out[i] = permutation_pvalue(stat, sample, scheme)
    return out


def test_5_pvalue_validity():
    t0 = time.perf_counter()
    stream = make_stream(StreamKey(5))
    mismatches = 0
    for n in range(2, 8):
        for n1 in range(1, n):
            for _ in range(3):
                sample = null_sample(stream, n - n1, n1)
                for kernel, alt in (("auc", "two-sided"), ("xi", "greater")):
                    stat = MarginalStatistic(kernel)
                    p = permutation_pvalue(stat, sample, PermutationScheme(1, alternative=alt))
                    mismatches += p != brute_permutation_pvalue(stat, sample, alt, stat.center)

    design = build_design(40, 20, 200, StreamKey(5, stream_id("design")))
    cases = {
        "auc mc": _null_pvalues(MarginalStatistic("auc"), "mc", "two-sided"),
        "xi exact": _null_pvalues(MarginalStatistic("xi"), "exact", "greater"),
        "resampled xi mc": _null_pvalues(MarginalStatistic("xi", design=design), "mc",
                                         "greater", n_perm=199),
    }
    ok = mismatches == 0
    parts = [f"exhaustive mismatches {mismatches}"]
    for name, pv in cases.items():
        rates = {a: float(np.mean(pv <= a)) for a in (0.01, 0.05, 0.1)}
        ok &= all(r <= binom_bound(a, pv.size) for a, r in rates.items())
        parts.append(f"{name} P(p<=.05)={rates[0.05]:.4f}")
    parts.append(f"bound {binom_bound(0.05, 2000):.4f}")
    record(5, ok, time.perf_counter() - t0, 300, ", ".join(parts))


def test_6_by_and_fdr():
    t0 = time.perf_counter()
    hand = by_select([0.01, 0.04, 0.5], 0.15).selected == {0, 1}
    stream = make_stream(StreamKey(6))
    scan_mismatch = 0
    for _ in range(10_000):
        m = int(stream.integers(1, 1001))
        p = stream.random(m)
        k_small = int(stream.integers(0, m + 1))
        p[:k_small] *= 10.0 ** -stream.uniform(1, 6)
        p = np.clip(p, 1e-300, 1.0)
        srt = np.sort(p)
        c = harmonic_number(m)
        k = 0
        for i in range(m, 0, -1):
            if srt[i - 1] <= i * 0.15 / (m * c):
                k = i
                break
        scan_mismatch += by_select(p, 0.15).n_selected != k
    sims = {rho: fdr_simulation(200, 20, 1.5, 0.15, 500, StreamKey(6, stream_id("simulation")),
                                n=60, rho=rho)
            for rho in (0.0, 0.5)}
    ok = hand and scan_mismatch == 0 and all(r.fdr <= 0.15 + 3 * r.se for r in sims.values())
    detail = ", ".join(f"rho={rho} FDR {r.fdr:.4f} (SE {r.se:.4f}, power {r.power:.2f})"
                       for rho, r in sims.items())
    record(6, ok, time.perf_counter() - t0, 300,
           f"hand example {'ok' if hand else 'wrong'}, k* mismatches {scan_mismatch}, {detail}")


def test_7_stability():
    t0 = time.perf_counter()
    stream = make_stream(StreamKey(7))
    prop_ok = True
    for _ in range(1000):
        p = int(stream.integers(2, 40))
        k = int(stream.integers(1, 6))
        rows = stream.random((k, p))
        if stream.random() < 0.3:
            rows = np.round(rows, 1)  # exercise the tie rule
        counts = curve_from_scores(rows).counts
        prop_ok &= bool(np.all(np.diff(counts) >= 0) and np.all(counts <= np.arange(1, p + 1))
                        and counts[-1] == p)
        prop_ok &= curve_from_scores(np.tile(rows[0], (k, 1))).counts.tolist() == \
            list(range(1, p + 1))

    p, k, grid, seeds = 200, 4, [10, 20, 50, 100, 150], 50
    counts = []
    for seed in range(seeds):
        data = generate_synthetic(400, p, seed=seed)
        counts.append(stability_curve(data.y, data.x, k, grid, statistic="auc",
                                      random_state=seed).counts)
    counts = np.array(counts)
    z = []
    for j, s in enumerate(grid):
        q = (s / p) ** k
        r = (s * (s - 1) / (p * (p - 1))) ** k
        mean = p * q
        var = p * q + p * (p - 1) * r - mean**2
        z.append((counts[:, j].mean() - mean) / math.sqrt(var / seeds))
    ok = prop_ok and all(abs(v) <= 4 for v in z)
    record(7, ok, time.perf_counter() - t0, 120,
           f"properties {'ok' if prop_ok else 'violated'}, noise vs baseline z = "
           + " ".join(f"{v:+.2f}" for v in z))


def test_8_ell_sweep():
    t0 = time.perf_counter()
    differ = 0
    for seed in range(20):
        data = generate_synthetic(n=100, p=30, n_nonnull=8, shift=0.8, seed=seed)
        cfg = RunConfig(m=20, n_perm=1000, folds=1, seed=seed, alpha=0.15)
        counts = [k for _, _, k in run_ell_sweep(data, cfg, [10, 100, 1000])]
        differ += len(set(counts)) > 1
    record(8, differ >= 16, time.perf_counter() - t0, 300,
           f"rejection counts differ across ell in {differ}/20 seeds (need >= 16)")


def test_9_determinism(tmp_path):
    t0 = time.perf_counter()
    assert main(["synth", "--n", "200", "--p", "100", "--n-nonnull", "10", "--shift", "1",
                 "--seed", "9", "--output-dir", str(tmp_path)]) == 0
    data = tmp_path / "synthetic.csv"
    outputs = []
    for threads in (1, 8, 1, 8):
        out = tmp_path / f"run{len(outputs)}"
        assert main(["select", "--input", str(data), "--resample", "--m", "50", "--ell", "100",
                     "--n-perm", "2000", "--seed", "9", "--threads", str(threads),
                     "--output-dir", str(out)]) == 0
        outputs.append((out / "features.tsv").read_bytes())
    ok = len(set(outputs)) == 1
    record(9, ok, time.perf_counter() - t0, 60,
           f"features.tsv identical across 4 runs (threads 1, 8, 1, 8): {ok}")
