#!/usr/bin/env python3
"""Direct-definition evaluators used to produce the committed golden files.

Everything here is computed straight from the defining sums (O(4^n) Walsh
coefficients, explicit sign enumeration), never through the fast C++ kernels,
so the golden reports catch regressions in those kernels.

Usage: naive_oracle.py OUT_DIR
"""
import itertools
import json
import math
import sys

import numpy as np


def sign(k, i):
    """eps_i for point index k (1-based coordinate; bit set means -1)."""
    return -1.0 if (k >> (i - 1)) & 1 else 1.0


def walsh(a, k):
    return -1.0 if bin(a & k).count("1") % 2 else 1.0


def coefficients(values, n):
    size = 1 << n
    return np.array([sum(walsh(a, k) * values[k] for k in range(size)) / size for a in range(size)])


def norm(v, q):
    return float(np.max(np.abs(v))) if math.isinf(q) else float(np.sum(np.abs(v) ** q) ** (1.0 / q))


def lp(values, p, q):
    return float(np.mean([norm(v, q) ** p for v in values]) ** (1.0 / p))


def laplacian_gradient_sum(family, n):
    size = 1 << n
    total = np.zeros_like(family[0])
    for i in range(1, n + 1):
        c = coefficients(family[i - 1], n)
        for a in range(size):
            if (a >> (i - 1)) & 1:
                weight = 1.0 / bin(a).count("1")
                for k in range(size):
                    total[k] += weight * c[a] * walsh(a, k)
    return total


def partial(values, n, i):
    return np.array([(values[k] - values[k ^ (1 << (i - 1))]) / 2 for k in range(1 << n)])


def rademacher_average(members, n, p, q):
    size = 1 << n
    acc = 0.0
    for delta in range(1 << len(members)):
        combo = sum(sign(delta, i + 1) * members[i] for i in range(len(members)))
        acc += np.mean([norm(combo[k], q) ** p for k in range(size)])
    return (acc / (1 << len(members))) ** (1.0 / p)


def main(out_dir):
    n, m, p, q = 3, 2, 3.0, 1.0
    rng = np.random.default_rng(20240611)
    family = [np.round(rng.normal(size=(1 << n, m)), 4) for _ in range(n)]
    family_json = {"n": n, "m": m, "family": [f.tolist() for f in family]}
    with open(f"{out_dir}/corollary2_family.json", "w") as fh:
        json.dump(family_json, fh, indent=1)
        fh.write("\n")

    lhs = lp(laplacian_gradient_sum(family, n), p, q)
    rhs = rademacher_average([partial(family[i], n, i + 1) for i in range(n)], n, p, q)
    golden = {"name": "corollary2", "n": n, "m": m, "p": p, "q": q, "lhs": lhs, "rhs": rhs, "ratio": lhs / rhs}
    with open(f"{out_dir}/corollary2_golden.json", "w") as fh:
        json.dump(golden, fh, indent=1)
        fh.write("\n")

    # Brute-force permutation average for the same family, as a second route.
    size = 1 << n
    grads = [coefficients(partial(family[i], n, i + 1), n) for i in range(n)]
    avg = np.zeros_like(family[0])
    perms = list(itertools.permutations(range(1, n + 1)))
    for pi in perms:
        for i in range(1, n + 1):
            allowed = sum(1 << (pi[j] - 1) for j in range(i))
            c = grads[pi[i - 1] - 1]
            for a in range(size):
                if a & ~allowed == 0:
                    for k in range(size):
                        avg[k] += c[a] * walsh(a, k)
    avg /= len(perms)
    print("symmetrization gap", float(np.max(np.abs(avg - laplacian_gradient_sum(family, n)))))
    print(json.dumps(golden, indent=1))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else ".")
