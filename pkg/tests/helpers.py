"""Shared fixtures for the test suite: synthetic datasets and config dicts."""

import math

import numpy as np

from dpem.mechanisms import NoiseOracle, derive_seed


def make_gmm_class_data(seed=2026, d=30, n=400, s_star=10, sigma=0.5, signal=1.25):
    """Two-class Gaussian data y = z * beta + e with labels z.

    beta follows the package convention (first s_star coordinates equal), with
    total magnitude ``signal``; returns (features, string labels).
    """
    beta_star = np.zeros(d)
    beta_star[:s_star] = signal / math.sqrt(s_star)
    oracle = NoiseOracle(derive_seed(seed, "class-testbed"))
    u = oracle.uniform_centered(n)
    z = np.where(u >= 0.0, 1.0, -1.0)
    e = sigma * oracle.standard_normal((n, d))
    features = z[:, None] * beta_star + e
    labels = np.where(z > 0, "pos", "neg")
    return features, labels


def experiment_config_dict(**overrides):
    """A small, fast, valid experiment config; override freely."""
    cfg = {
        "model": "gmm",
        "regime": "high_dim",
        "sweep": {"name": "n", "values": [400, 600]},
        "fixed": {
            "n": 400,
            "d": 25,
            "s_star": 4,
            "epsilon": 0.5,
            "sigma": 0.5,
            "eta": 0.5,
            "reps": 2,
        },
        "master_seed": 321,
    }
    for key, value in overrides.items():
        if key in ("sweep", "fixed"):
            cfg[key] = value
        elif key in cfg["fixed"] or key in ("delta_rule", "delta", "T_rule", "N0_rule",
                                            "s_hat_rule", "missing_prob", "reps"):
            cfg["fixed"][key] = value
        else:
            cfg[key] = value
    return cfg


def write_class_csv(path, features, labels, label_name="label"):
    lines = [",".join([f"f{j}" for j in range(features.shape[1])] + [label_name])]
    for row, lab in zip(features, labels):
        lines.append(",".join(f"{v:.17g}" for v in row) + f",{lab}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
