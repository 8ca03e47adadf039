"""Independent reference implementations used to check the package.

Plain Python loops on nested lists; nothing here imports from netselect.
"""

import math


def ahp_weights(a):
    """Column-normalise then average rows."""
    n = len(a)
    col = [sum(a[i][j] for i in range(n)) for j in range(n)]
    return [sum(a[i][j] / col[j] for j in range(n)) / n for i in range(n)]


def principal_eigenvalue(a, iters=500):
    """Power iteration on a positive matrix."""
    n = len(a)
    x = [1.0] * n
    lam = 0.0
    for _ in range(iters):
        y = [sum(a[i][j] * x[j] for j in range(n)) for i in range(n)]
        lam = sum(y) / sum(x)
        s = sum(y)
        x = [v / s for v in y]
    return lam


def topsis(values, weights, benefit):
    """Straight-line TOPSIS.

    Args:
        values: m rows of n floats.
        weights: m rows of n weights (row i belongs to alternative i).
        benefit: n booleans, True where higher is better.

    Returns:
        Closeness coefficient per alternative.
    """
    m, n = len(values), len(values[0])
    r = [[0.0] * n for _ in range(m)]
    for j in range(n):
        norm = math.sqrt(sum(values[i][j] ** 2 for i in range(m)))
        for i in range(m):
            r[i][j] = values[i][j] / norm if norm > 0 else 0.0
    v = [[weights[i][j] * r[i][j] for j in range(n)] for i in range(m)]
    best, worst = [], []
    for j in range(n):
        col = [v[i][j] for i in range(m)]
        if benefit[j]:
            best.append(max(col))
            worst.append(min(col))
        else:
            best.append(min(col))
            worst.append(max(col))
    out = []
    for i in range(m):
        sp = math.sqrt(sum((best[j] - v[i][j]) ** 2 for j in range(n)))
        sm = math.sqrt(sum((worst[j] - v[i][j]) ** 2 for j in range(n)))
        out.append(0.5 if sp + sm == 0 else sm / (sp + sm))
    return out


def stationary_vector(p):
    """Stationary distribution of a column-stochastic matrix by Gaussian elimination.

    Solves (P - I) x = 0 with the last equation replaced by sum(x) = 1.
    """
    n = len(p)
    a = [[p[i][j] - (1.0 if i == j else 0.0) for j in range(n)] for i in range(n)]
    b = [0.0] * n
    a[-1] = [1.0] * n
    b[-1] = 1.0
    for c in range(n):
        piv = max(range(c, n), key=lambda r: abs(a[r][c]))
        a[c], a[piv] = a[piv], a[c]
        b[c], b[piv] = b[piv], b[c]
        for r in range(n):
            if r != c:
                f = a[r][c] / a[c][c]
                a[r] = [a[r][k] - f * a[c][k] for k in range(n)]
                b[r] -= f * b[c]
    return [b[i] / a[i][i] for i in range(n)]
