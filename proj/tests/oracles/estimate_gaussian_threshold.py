"""Independent calibration of the Gaussian-noise (alpha = 2) estimation threshold.

Re-implements the four online estimators (momentum, vector clip, coordinate
clip, Huber) directly in NumPy with its own random streams, runs the fixed
vector problem (d = 10, tau = 0.01, T = 1000), and reports the distribution of
the final relative error over many independent seeds.

alpha = 2 stable noise with unit scale in the S0 convention is N(0, 2).

The frozen threshold in tests/acceptance is 1.5x the largest final error seen
here over 1000 seeds, rounded up to one significant digit.

    python3 tests/oracles/estimate_gaussian_threshold.py
"""

import math

import numpy as np

D, TAU, T, MU = 10, 0.01, 1000, 1.345


def run(method, target, noise):
    m = np.zeros(D)
    for g in target + noise:
        diff = g - m
        if method == "momentum":
            m = m / (1 + TAU) + TAU / (1 + TAU) * g
        elif method == "vclip":
            n = np.linalg.norm(diff)
            m = m + (diff if n <= TAU else diff * TAU / n)
        elif method == "cclip":
            m = m + np.clip(diff, -TAU, TAU)
        elif method == "huber":
            beta = 1 - MU * TAU / max(np.linalg.norm(diff), MU * (1 + TAU))
            m = beta * m + (1 - beta) * g
    return np.linalg.norm(m - target) / np.linalg.norm(target)


def main():
    rng = np.random.default_rng(20240601)
    worst = {k: 0.0 for k in ("momentum", "vclip", "cclip", "huber")}
    for _ in range(1000):
        target = rng.standard_normal(D)
        noise = math.sqrt(2.0) * rng.standard_normal((T, D))
        for k in worst:
            worst[k] = max(worst[k], run(k, target, noise))
    overall = max(worst.values())
    raw = 1.5 * overall
    digits = 10 ** math.floor(math.log10(raw))
    threshold = math.ceil(raw / digits) * digits
    print("max final relative error over 1000 seeds:", worst)
    print("threshold:", threshold)


if __name__ == "__main__":
    main()
