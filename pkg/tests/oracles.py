"""Independent oracles the tests check the library against.

These deliberately avoid the code paths under test: counting instead of
sorting for the h index, scipy plus numpy for rank correlation, exhaustive
permutation for small-sample p values.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.stats import rankdata


def brute_force_h(cites) -> int:
    """max k such that at least k entries are >= k, by direct counting."""
    values = np.asarray(list(cites), dtype=int)
    best = 0
    for k in range(len(values), -1, -1):
        if int(np.count_nonzero(values >= k)) >= k:
            best = k
            break
    return best


def spearman_r_reference(x, y) -> float:
    """Pearson correlation of midranks via scipy/numpy."""
    rx = rankdata(x, method="average")
    ry = rankdata(y, method="average")
    return float(np.corrcoef(rx, ry)[0, 1])


def exact_permutation_pvalue(x, y) -> float:
    """Two-sided permutation p for the rank correlation; use only for tiny n."""
    observed = abs(spearman_r_reference(x, y))
    hits = 0
    total = 0
    for perm in itertools.permutations(y):
        total += 1
        if abs(spearman_r_reference(x, perm)) >= observed - 1e-12:
            hits += 1
    return hits / total


def anova_f_reference(groups) -> float:
    """Hand decomposition of between and within sums of squares."""
    all_values = [v for g in groups for v in g]
    grand = sum(all_values) / len(all_values)
    means = [sum(g) / len(g) for g in groups]
    ssb = sum(len(g) * (m - grand) ** 2 for g, m in zip(groups, means))
    ssw = sum(sum((v - m) ** 2 for v in g) for g, m in zip(groups, means))
    df1 = len(groups) - 1
    df2 = len(all_values) - len(groups)
    return (ssb / df1) / (ssw / df2)


def equicorrelated_columns(rho_num: int = 9, rho_den: int = 10):
    """Three integer columns whose sample correlations are exactly 0.9.

    Built from orthogonal sign patterns: shared component weight 3, private
    weight 1, so every pairwise correlation is 9 / (9 + 1).
    """
    assert (rho_num, rho_den) == (9, 10)
    h0 = [1, 1, 1, 1, -1, -1, -1, -1]
    h1 = [1, -1, 1, -1, 1, -1, 1, -1]
    h2 = [1, 1, -1, -1, 1, 1, -1, -1]
    h3 = [1, -1, -1, 1, 1, -1, -1, 1]
    return [[3 * a + b, 3 * a + c, 3 * a + d] for a, b, c, d in zip(h0, h1, h2, h3)]
