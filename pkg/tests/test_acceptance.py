"""Exit criteria for the package, one test per criterion.

Criteria 6-8 need SonyAIBORobotSurface1, ItalyPowerDemand and Worms from the
UCR 2018 archive. ItalyPowerDemand ships in ``data/ucr``; point
``UCR_DATA_DIR`` at an archive copy for the others. A missing dataset is a
failure, not a skip.
"""
import itertools
import math
import time
import timeit
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from multiscale_dubuc import (
    compute_envelope,
    generic_epsilon_schedule,
    mdd,
    mds,
    naive_envelope_oracle,
)
from multiscale_dubuc.baselines import DtwConfig, dtw, euclidean
from multiscale_dubuc.cli import RunConfig, cmd_run, cmd_plot
from multiscale_dubuc.data import load_ucr_dataset
from multiscale_dubuc.evaluation import MeasureSpec, accuracy_gain, test_accuracy
from multiscale_dubuc.plotting import read_results_csv
from oracles import warping_paths

# UCR 2018 archive summary table, 1-NN Euclidean test error rates.
PUBLISHED_EUD_ERROR = {"SonyAIBORobotSurface1": 0.3045, "ItalyPowerDemand": 0.0447}

WORMS_GENERIC_ACC = 0.45
WORMS_CUSTOM_ACC = 0.63
WORMS_TOL = 0.03
SONY_MIN_GAIN = 1.15


def _load(data_dir, name, verdict, criterion):
    try:
        return load_ucr_dataset(data_dir, name)
    except FileNotFoundError as exc:
        verdict(criterion, False, f"{name} unavailable ({exc}); set UCR_DATA_DIR to a UCR 2018 archive copy")


def test_c1_metric_axioms(verdict):
    rng = np.random.default_rng(20240901)
    start = time.perf_counter()
    n_triples, worst_tri, bad = 10_000, -math.inf, []
    for k in range(n_triples):
        d = int(rng.integers(10, 301))
        x, y, z = rng.uniform(-5, 5, size=(3, d))
        if k % 2 == 0:
            sched = generic_epsilon_schedule(d, 0.4)
        else:
            size = int(rng.integers(1, 6))
            sched = sorted(rng.choice(np.arange(1, d), size=size, replace=False).tolist())
        dxy, dyx = mdd(x, y, sched), mdd(y, x, sched)
        dxz, dyz, dxx = mdd(x, z, sched), mdd(y, z, sched), mdd(x, x, sched)
        worst_tri = max(worst_tri, dxz - (dxy + dyz))
        if dxy < 0 or dxy != dyx or dxx != 0.0 or dxz > dxy + dyz + 1e-9:
            bad.append(k)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 120
    verdict("C1 metric axioms", ok,
            f"{n_triples} triples, violations={len(bad)}, max triangle slack={worst_tri:.3e}, {elapsed:.1f}s (<120s)")


def test_c2_oracle_equivalence(verdict):
    rng = np.random.default_rng(7)
    start = time.perf_counter()
    mismatches = 0
    for _ in range(1000):
        d = int(rng.integers(1, 201))
        x = rng.normal(size=d)
        if rng.random() < 0.3:
            x = np.round(x)  # plateaus and ties
        eps = int(rng.integers(0, d + 1))
        a, b = compute_envelope(x, eps), naive_envelope_oracle(x, eps)
        mismatches += not (np.array_equal(a.upper, b.upper) and np.array_equal(a.lower, b.lower))
    elapsed = time.perf_counter() - start
    verdict("C2 envelope oracle equivalence", mismatches == 0 and elapsed < 30,
            f"1000 pairs, mismatches={mismatches}, {elapsed:.1f}s (<30s)")


def test_c3_range(verdict):
    rng = np.random.default_rng(3)
    lo, hi = math.inf, -math.inf
    for k in range(5000):
        d = int(rng.integers(3, 200))
        scale = 10.0 ** rng.integers(-6, 7)
        x, y = rng.uniform(-5, 5, size=(2, d)) * scale
        if k % 3 == 0:
            y = x + rng.normal(scale=1e-9 * scale, size=d)
        sched = generic_epsilon_schedule(d, 0.4)
        s, dist = mds(x, y, sched), mdd(x, y, sched)
        lo, hi = min(lo, s, dist), max(hi, s, dist)
    verdict("C3 mds/mdd in [0, 1]", 0.0 <= lo and hi <= 1.0, f"observed range [{lo:.6g}, {hi:.6g}] over 5000 pairs")


def test_c4_runtime_linearity(verdict):
    rng = np.random.default_rng(4)
    sched = [1, 2, 4, 8]
    lengths = [1000, 2000, 4000, 8000]
    start = time.perf_counter()
    mdd(*rng.normal(size=(2, 100)), sched)  # warm the JIT cache
    times = []
    for d in lengths:
        x, y = rng.normal(size=(2, d))
        number = max(10, 100_000 // d)
        times.append(min(timeit.repeat(lambda: mdd(x, y, sched), number=number, repeat=9)) / number)
    slope = np.polyfit(np.log2(lengths), np.log2(times), 1)[0]
    ratio = 2.0**slope
    elapsed = time.perf_counter() - start
    per = ", ".join(f"{d}:{t * 1e6:.0f}us" for d, t in zip(lengths, times))
    verdict("C4 runtime linearity", 1.6 <= ratio <= 2.6 and elapsed < 60,
            f"doubling ratio={ratio:.3f} in [1.6, 2.6] ({per}), {elapsed:.1f}s (<60s)")


def test_c5_dtw_checks(verdict):
    start = time.perf_counter()
    rng = np.random.default_rng(5)
    eud_mismatch = 0
    for _ in range(1000):
        d = int(rng.integers(1, 120))
        x, y = rng.normal(size=(2, d))
        eud_mismatch += dtw(x, y, DtwConfig(0)) != euclidean(x, y)

    # every pair of length-5 series over the grid {-1, 0, 1}
    grid = np.array(list(itertools.product((-1.0, 0.0, 1.0), repeat=5)))
    paths = warping_paths(5, 5)
    incidence = np.zeros((len(paths), 25))
    for p, path in enumerate(paths):
        for i, j in path:
            incidence[p, 5 * i + j] = 1.0
    X = np.repeat(grid, len(grid), axis=0)
    Y = np.tile(grid, (len(grid), 1))
    cost = ((X[:, :, None] - Y[:, None, :]) ** 2).reshape(len(X), 25)
    brute = np.sqrt((cost @ incidence.T).min(axis=1))
    path_mismatch = sum(dtw(x, y) != b for x, y, b in zip(X, Y, brute))
    elapsed = time.perf_counter() - start
    ok = eud_mismatch == 0 and path_mismatch == 0 and elapsed < 60
    verdict("C5 DTW window-0 == EuD and == path enumeration", ok,
            f"EuD mismatches={eud_mismatch}/1000, enumeration mismatches={path_mismatch}/{len(X)} "
            f"({len(paths)} paths each), {elapsed:.1f}s (<60s)")


@pytest.mark.parametrize("name", sorted(PUBLISHED_EUD_ERROR))
def test_c6_eud_matches_published(name, ucr_data_dir, verdict):
    criterion = f"C6 EuD 1-NN on {name}"
    start = time.perf_counter()
    ds = _load(ucr_data_dir, name, verdict, criterion)
    acc = test_accuracy(ds, MeasureSpec("eud"))
    err = round(1.0 - acc, 4)
    elapsed = time.perf_counter() - start
    verdict(criterion, err == PUBLISHED_EUD_ERROR[name] and elapsed < 60,
            f"error={err} ({1 - acc:.6f}) vs published {PUBLISHED_EUD_ERROR[name]}, {elapsed:.1f}s")


def test_c7_worms_epsilon_customization(ucr_data_dir, verdict):
    criterion = "C7 Worms generic vs customized schedule"
    start = time.perf_counter()
    ds = _load(ucr_data_dir, "Worms", verdict, criterion)
    generic = generic_epsilon_schedule(ds.d, 0.4)
    acc_generic = test_accuracy(ds, MeasureSpec("mdd", generic))
    acc_custom = test_accuracy(ds, MeasureSpec("mdd", [16, 32, 64, 128, 256]))
    elapsed = time.perf_counter() - start
    ok = (
        generic.scales == tuple(2**k for k in range(9))
        and abs(acc_generic - WORMS_GENERIC_ACC) <= WORMS_TOL
        and abs(acc_custom - WORMS_CUSTOM_ACC) <= WORMS_TOL
        and elapsed < 1200
    )
    verdict(criterion, ok,
            f"generic {generic} -> {acc_generic:.4f} (target {WORMS_GENERIC_ACC}±{WORMS_TOL}); "
            f"custom 16..256 -> {acc_custom:.4f} (target {WORMS_CUSTOM_ACC}±{WORMS_TOL}), {elapsed:.1f}s")


def test_c8_sony_gain_over_eud(ucr_data_dir, verdict):
    criterion = "C8 SonyAIBORobotSurface1 MDD gain over EuD"
    start = time.perf_counter()
    ds = _load(ucr_data_dir, "SonyAIBORobotSurface1", verdict, criterion)
    acc_mdd = test_accuracy(ds, MeasureSpec("mdd", generic_epsilon_schedule(ds.d, 0.4)))
    acc_eud = test_accuracy(ds, MeasureSpec("eud"))
    gain = accuracy_gain(acc_mdd, acc_eud)
    elapsed = time.perf_counter() - start
    verdict(criterion, gain > SONY_MIN_GAIN and elapsed < 120,
            f"acc_mdd={acc_mdd:.4f} acc_eud={acc_eud:.4f} gain={gain:.3f} (> {SONY_MIN_GAIN}), {elapsed:.1f}s")


ROSTER = ["ArrowHead", "BeetleFly", "Chinatown", "Coffee", "ECG200", "ItalyPowerDemand"]


def _hand_quadrant(acc, ref):
    # spreadsheet-style: ratio of accuracies, compare each against 1
    ge, ga = acc[0] / ref[0], acc[1] / ref[1]
    col = "right" if ge > 1 else "left"
    row = "top" if ga > 1 else "bottom"
    return {("right", "top"): "TP", ("right", "bottom"): "FP", ("left", "bottom"): "TN", ("left", "top"): "FN"}[
        (col, row)
    ]


def test_c9_sharpshooter_mechanics(bundled_data_dir, tmp_path, verdict):
    cfg = RunConfig(bundled_data_dir, dataset_filter=ROSTER, measures=["mdd", "eud", "dtw"],
                    output_csv=tmp_path / "roster.csv", parallelism=1)
    assert cmd_run(cfg) == 0
    assert cmd_plot(cfg.output_csv, tmp_path / "figs") == 0

    accs = {}
    for r in read_results_csv(cfg.output_csv):
        accs[(r.dataset, r.measure)] = (r.expected_acc, r.actual_acc)
    assert {ds for ds, _ in accs} == set(ROSTER)

    checked, mismatches = 0, []
    svg_ns = "{http://www.w3.org/2000/svg}"
    for ref in ("eud", "dtw"):
        root = ET.parse(tmp_path / "figs" / f"sharpshooter_{ref}.svg").getroot()
        group = root.find(f".//{svg_ns}g[@class='points']")
        cx0, cy0 = float(group.get("data-center-x")), float(group.get("data-center-y"))
        placed = {}
        for c in group.findall(f"{svg_ns}circle"):
            dx, dy = float(c.get("cx")) - cx0, cy0 - float(c.get("cy"))
            placed[c.get("data-dataset")] = {(True, True): "TP", (True, False): "FP",
                                             (False, False): "TN", (False, True): "FN"}[(dx > 0, dy > 0)]
        for ds in ROSTER:
            expected = _hand_quadrant(accs[(ds, "mdd")], accs[(ds, ref)])
            checked += 1
            if placed.get(ds) != expected:
                mismatches.append((ref, ds, placed.get(ds), expected))
    verdict("C9 Sharpshooter placement vs hand recomputation", not mismatches and checked == 12,
            f"{checked} placements checked over {len(ROSTER)} datasets, mismatches={mismatches}")
