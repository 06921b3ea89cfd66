"""Acceptance gate: the ten headline behaviors at their stated tolerances.

Each test covers one numbered criterion and prints a single [PASS]/[FAIL]
line with the measured numbers.  All asserts sit behind the print, so a
red criterion still reports its measurements before failing.
"""

import math
import time

from projlab.constructions import verify_digit_lemma, word_entropy_dimension
from projlab.experiments import run_experiment

SEED = 42


def report(criterion, passed, detail):
    line = "[%s] %s: %s" % ("PASS" if passed else "FAIL", criterion, detail)
    print(line)
    assert passed, line


def test_criterion_01_digit_lemmas_exact():
    start = time.perf_counter()
    clean_violations = 0
    pairs = 0
    for depth in range(1, 9):
        rep = verify_digit_lemma(depth)
        clean_violations += rep["violations"]
        pairs = max(pairs, rep["pairs"])
    caught = all(verify_digit_lemma(3, corrupt_seed=s)["violations"] > 0
                 for s in (0, 1, 2))
    elapsed = time.perf_counter() - start
    passed = clean_violations == 0 and pairs == 4**8 and caught and \
        elapsed < 10.0
    report("criterion-01 digit-lemmas", passed,
           "violations=%d pairs=%d mutations-caught=%s runtime=%.2fs"
           % (clean_violations, pairs, caught, elapsed))


def test_criterion_02_box_dimension_formula():
    start = time.perf_counter()
    two = run_experiment("box-dim", config={"seed": SEED, "t": 2.0})
    elapsed_two = time.perf_counter() - start
    three = run_experiment("box-dim", config={"seed": SEED, "t": 3.0})
    fit2 = two["results"]["fit"]
    fit3 = three["results"]["fit"]
    passed = (abs(fit2["slope"] - 1.0) <= 0.15 and
              fit2["r_squared"] >= 0.98 and
              abs(fit3["slope"] - 4.0 / 3.0) <= 0.15 and
              elapsed_two < 60.0)
    report("criterion-02 box-dimension", passed,
           "t=2 slope=%.4f r2=%.4f (%.1fs); t=3 slope=%.4f (target 4/3)"
           % (fit2["slope"], fit2["r_squared"], elapsed_two, fit3["slope"]))


def test_criterion_03_holder_ceiling():
    summary = run_experiment("holder-ceiling", config={"seed": SEED},
                             threads=4)
    fr_t = summary["results"]["pow2t"]["fractions_below_bar"]
    fr_sq = summary["results"]["pow2sq"]["fractions_below_bar"]
    sub = {("pow2t", m): fr_t[m] >= 0.9 for m in ("1.0", "4.0", "16.0")}
    sub[("pow2sq", "1.0")] = fr_sq["1.0"] >= 0.9
    passed = all(sub.values())
    report("criterion-03 holder-ceiling", passed,
           "power-law net alpha<=0.6 fractions M=1/4/16: %.3f/%.3f/%.3f "
           "(need >=0.9 each); super-exponential net alpha<=0.2 at M=1: %.3f"
           % (fr_t["1.0"], fr_t["4.0"], fr_t["16.0"], fr_sq["1.0"]))


def test_criterion_04_pointwise_holder_positive_side():
    start = time.perf_counter()
    summary = run_experiment("log-lip", config={"seed": SEED}, threads=4)
    elapsed = time.perf_counter() - start
    res = summary["results"]
    passed = (res["mean_alpha_fraction"] >= 0.95 and
              res["mean_defect_fraction"] >= 0.99 and elapsed < 120.0)
    report("criterion-04 pointwise-holder", passed,
           "weighted alpha>=0.9 fraction=%.4f (need >=0.95); "
           "defect>0 fraction=%.4f (need >=0.99); runtime=%.1fs"
           % (res["mean_alpha_fraction"], res["mean_defect_fraction"],
              elapsed))


def test_criterion_05_transversality_scaling():
    summary = run_experiment("transversality", config={"seed": SEED})
    res = summary["results"]
    slope = res["fit"]["slope"]
    c_hat = res["c_hat"]
    spread = res["c_relative_spread"]
    passed = (abs(slope - 2.0) <= 0.15 and math.isfinite(c_hat) and
              c_hat > 0 and spread <= 0.2)
    report("criterion-05 transversality", passed,
           "eps-slope=%.4f (target 2 +/- 0.15); c_hat=%.4f spread=%.3f "
           "(need <=0.2)" % (slope, c_hat, spread))


def test_criterion_06_collision_probability_scaling():
    summary = run_experiment("collision-scaling", config={"seed": 0})
    res = summary["results"]
    fractions = [f for _, f in res["fractions"]]
    envelope = [e for _, e in res["envelope"]]
    dominated = all(f <= e * (1 + 1e-9)
                    for f, e in zip(fractions, envelope))
    slope = res["fit"]["slope"]
    in_regime = all(c["passed"] for c in summary["checks"]
                    if c["name"] == "regime")
    passed = dominated and slope >= 0.7 and in_regime
    report("criterion-06 collision-scaling", passed,
           "fractions=%s envelope-dominates=%s eps-slope=%.3f (need >=0.7)"
           % (["%.4f" % f for f in fractions], dominated, slope))


def test_criterion_07_sparse_decoder():
    summary = run_experiment("decode-sparse", config={"seed": SEED})
    res = summary["results"]
    passed = (res["mean_recovery_good"] >= 0.99 and
              res["mean_recovery_bad"] < 0.9)
    report("criterion-07 sparse-decoder", passed,
           "recovery at rank 4: %.4f (need >=0.99); at rank 2: %.4f "
           "(need <0.9)" % (res["mean_recovery_good"],
                            res["mean_recovery_bad"]))


def test_criterion_08_all_directions_and_translate_control():
    directions = run_experiment("all-directions", config={"seed": SEED})
    control = run_experiment("ifs-translate", config={"seed": SEED})
    min_frac = directions["results"]["min_fraction"]
    ctrl = control["results"]
    control_ok = (ctrl["n_mixed"] > 0 and ctrl["all_labels_match"] and
                  ctrl["all_shifts_match"] and ctrl["passes_floor"])
    passed = min_frac >= 0.95 and control_ok
    report("criterion-08 all-directions", passed,
           "worst-direction dirac fraction=%.3f (need >=0.95); "
           "translate control score=%.4f vs floor=%.4f on %d mixed slices"
           % (min_frac, ctrl["min_mixed_score"], ctrl["score_floor"],
              ctrl["n_mixed"]))


def test_criterion_09_local_dimension_value():
    summary = run_experiment("local-dim", config={"seed": SEED})
    mean_slope = summary["results"]["mean_slope"]
    target = word_entropy_dimension(0.25)
    passed = abs(mean_slope - 0.406) <= 0.05
    report("criterion-09 local-dimension", passed,
           "mean slope=%.4f target=%.4f (0.406 +/- 0.05)"
           % (mean_slope, target))


def test_criterion_10_dense_ball_discontinuity():
    summary = run_experiment("dense-ball-discontinuity",
                             config={"seed": SEED})
    res = summary["results"]
    passed = res["fraction_below_bound"] >= 0.9
    report("criterion-10 dense-ball", passed,
           "eps(delta)/delta below 1e-2 for %.0f%% of maps at delta=0.5 "
           "(need >=90%%); median ratio=%.2e"
           % (100 * res["fraction_below_bound"], res["median_ratio"]))
