"""Independent reference computations used only by the tests.

None of these import the code paths they check.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


def set_partitions(items):
    """Yield every set partition of ``items`` as a list of lists."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in set_partitions(rest):
        for i in range(len(smaller)):
            yield smaller[:i] + [[first] + smaller[i]] + smaller[i + 1:]
        yield [[first]] + smaller


def labels_from_blocks(blocks, n):
    out = [0] * n
    for c, b in enumerate(blocks):
        for v in b:
            out[v] = c
    return out


def modularity_B(A, member):
    """Q = (1/2W) sum_ij [A_ij - k_i k_j / 2W] delta(c_i, c_j)."""
    A = np.asarray(A, dtype=float)
    k = A.sum(axis=1)
    m2 = k.sum()
    same = np.equal.outer(member, member)
    return float(((A - np.outer(k, k) / m2) * same).sum() / m2)


def best_modularity(A):
    n = len(A)
    return max(modularity_B(A, np.array(labels_from_blocks(b, n))) for b in set_partitions(range(n)))


def _H(probs):
    return -sum(p * math.log2(p) for p in probs if p > 0)


def map_equation_def(A, blocks):
    """Two-level map equation straight from its definition (undirected flow)."""
    A = np.asarray(A, dtype=float)
    m2 = A.sum()
    p = A.sum(axis=1) / m2
    q_i, p_i = [], []
    for b in blocks:
        inside = np.zeros(len(A), dtype=bool)
        inside[list(b)] = True
        q_i.append(A[np.ix_(inside, ~inside)].sum() / m2)
        p_i.append(p[inside].sum())
    q = sum(q_i)
    L = q * _H([x / q for x in q_i]) if q > 0 else 0.0
    for b, qi, pi in zip(blocks, q_i, p_i):
        tot = qi + pi
        if tot > 0:
            L += tot * _H([qi / tot] + [p[a] / tot for a in b])
    return L


def brute_metrics(Y, Z):
    """Cell- and row-counting versions of the five measures, exact rationals."""
    n, q = len(Y), len(Y[0])
    tp = fp = fn = 0
    per_label = []
    for j in range(q):
        t = f = m = 0
        for i in range(n):
            y, z = bool(Y[i][j]), bool(Z[i][j])
            t += y and z
            f += (not y) and z
            m += y and (not z)
        tp, fp, fn = tp + t, fp + f, fn + m
        per_label.append(Fraction(1) if 2 * t + f + m == 0 else Fraction(2 * t, 2 * t + f + m))
    micro = Fraction(1) if 2 * tp + fp + fn == 0 else Fraction(2 * tp, 2 * tp + fp + fn)
    macro = sum(per_label, Fraction(0)) / q
    exact = sum(all(bool(Y[i][j]) == bool(Z[i][j]) for j in range(q)) for i in range(n))
    jac = Fraction(0)
    wrong = 0
    for i in range(n):
        inter = sum(bool(Y[i][j]) and bool(Z[i][j]) for j in range(q))
        union = sum(bool(Y[i][j]) or bool(Z[i][j]) for j in range(q))
        jac += Fraction(1) if union == 0 else Fraction(inter, union)
        wrong += sum(bool(Y[i][j]) != bool(Z[i][j]) for j in range(q))
    return {
        "micro_f1": float(micro),
        "macro_f1": float(macro),
        "subset_accuracy": float(Fraction(exact, n)),
        "jaccard": float(jac / n),
        "hamming_loss": float(Fraction(wrong, n * q)),
    }


def gaussian_posterior(x, classes):
    """Closed-form Bayes posterior. ``classes`` is a list of
    (prior, means, variances); returns normalised probabilities."""
    joint = []
    for prior, means, variances in classes:
        dens = prior
        for xj, mu, var in zip(x, means, variances):
            dens *= math.exp(-((xj - mu) ** 2) / (2 * var)) / math.sqrt(2 * math.pi * var)
        joint.append(dens)
    total = sum(joint)
    return [j / total for j in joint]


def gamma_q(a, x, eps=1e-15, max_iter=10_000):
    """Regularised upper incomplete gamma Q(a, x): series below a+1,
    Lentz continued fraction above."""
    if x <= 0:
        return 1.0
    gln = math.lgamma(a)
    if x < a + 1:
        ap, term = a, 1.0 / a
        total = term
        for _ in range(max_iter):
            ap += 1
            term *= x / ap
            total += term
            if abs(term) < abs(total) * eps:
                break
        return 1.0 - total * math.exp(-x + a * math.log(x) - gln)
    tiny = 1e-300
    b = x + 1 - a
    c = 1 / tiny
    d = 1 / b
    h = d
    for i in range(1, max_iter):
        an = -i * (i - a)
        b += 2
        d = an * d + b
        d = tiny if abs(d) < tiny else d
        c = b + an / c
        c = tiny if abs(c) < tiny else c
        d = 1 / d
        delta = d * c
        h *= delta
        if abs(delta - 1) < eps:
            break
    return math.exp(-x + a * math.log(x) - gln) * h


def rom_levels_reference(m, alpha):
    """Rom levels in the alpha_{k-i} indexing, evaluated with exact rationals."""
    alpha = Fraction(alpha).limit_denominator(10**12)
    lev = {1: alpha, 2: alpha / 2}  # lev[i] pairs with the i-th largest p-value
    for i in range(3, m + 1):
        s1 = sum((alpha ** j for j in range(1, i)), Fraction(0))
        s2 = sum((math.comb(i, j) * lev[j + 1] ** (i - j) for j in range(1, i - 1)), Fraction(0))
        lev[i] = (s1 - s2) / i
    return [float(lev[i]) for i in range(1, m + 1)]


def clique_pair(size=4):
    edges = list(itertools.combinations(range(size), 2))
    edges += list(itertools.combinations(range(size, 2 * size), 2))
    edges.append((size - 1, size))
    return 2 * size, edges


def adjacency(n, edges, weights=None):
    A = np.zeros((n, n))
    weights = weights or [1.0] * len(edges)
    for (i, j), w in zip(edges, weights):
        A[i, j] = A[j, i] = w
    return A
