"""Independent reference computations used only by the tests.

Plain Python loops, math.log2, dense permutation matrices; nothing here
imports the package under test.
"""
import itertools
import math

import numpy as np


def plogp(x):
    return x * math.log2(x) if x > 0 else 0.0


def entropy(values):
    return -sum(plogp(float(v)) for v in np.ravel(values))


def mutual_information(p):
    p = np.asarray(p, dtype=float)
    m, n = p.shape
    pa = [sum(p[i, j] for j in range(n)) for i in range(m)]
    pb = [sum(p[i, j] for i in range(m)) for j in range(n)]
    total = 0.0
    for i in range(m):
        for j in range(n):
            if p[i, j] > 0:
                total += p[i, j] * math.log2(p[i, j] / (pa[i] * pb[j]))
    return total


def conditional_entropy(p):
    """H(A|B) as -sum p_ij log(p_ij / p_j)."""
    p = np.asarray(p, dtype=float)
    pb = p.sum(axis=0)
    total = 0.0
    for i, j in itertools.product(range(p.shape[0]), range(p.shape[1])):
        if p[i, j] > 0:
            total -= p[i, j] * math.log2(p[i, j] / pb[j])
    return total


def tv(p, q):
    return 0.5 * sum(abs(a - b) for a, b in zip(np.ravel(p), np.ravel(q)))


def reverse_lex(m):
    """All permutations of 0..m-1, sorted descending."""
    return sorted(itertools.permutations(range(m)), reverse=True)


def dense_matrix(perm):
    m = len(perm)
    mat = np.zeros((m, m))
    for row, col in enumerate(perm):
        mat[row, col] = 1.0
    return mat


def exhaustive_minima(p, channel, convention="equation", tie=1e-12):
    """(min discord, argmin, min distortion, argmin) by enumerating dense permutation matrices."""
    p = np.asarray(p, dtype=float)
    channel = np.asarray(channel, dtype=float)
    base = mutual_information(p)
    discords, distortions = [], []
    for perm in reverse_lex(p.shape[1]):
        pi = dense_matrix(perm)
        if convention == "equation":
            before = p @ pi
            after = before @ channel
            distortions.append(tv(after, before))
        else:
            after = p @ channel @ pi
            distortions.append(tv(after, p))
        discords.append(base - mutual_information(after))

    def first_min(vals):
        lo = min(vals)
        return next(k for k, v in enumerate(vals) if v <= lo + tie)

    i_d, i_t = first_min(discords), first_min(distortions)
    return discords[i_d], i_d, distortions[i_t], i_t
