"""Inner loops shared by the samplers and evaluators.

Kernels never draw random numbers themselves: callers pass uniforms drawn
from a :class:`numpy.random.Generator`. The compiled and the interpreted
versions therefore give identical output for the same stream, and each
compiled kernel keeps its interpreted twin at ``kernel.py_func``.
"""

import math

import numpy as np

from ._accel import njit


@njit
def patience_length(word, strict):
    """Number of patience piles (longest increasing subsequence length).

    ``strict`` selects strictly increasing subsequences; otherwise weakly.
    """
    n = word.shape[0]
    tops = np.empty(n, dtype=np.int64)
    piles = 0
    for t in range(n):
        x = word[t]
        lo = 0
        hi = piles
        while lo < hi:
            mid = (lo + hi) // 2
            if tops[mid] < x or (not strict and tops[mid] == x):
                lo = mid + 1
            else:
                hi = mid
        tops[lo] = x
        if lo == piles:
            piles += 1
    return piles


@njit
def row_insertion_shape(word, width, height):
    """Row lengths of the insertion tableau of ``word``.

    Schensted row insertion: each letter bumps the leftmost entry strictly
    greater than itself. ``width`` must bound the first row (longest weakly
    increasing subsequence) and ``height`` the number of rows (longest
    strictly decreasing subsequence).
    """
    rows = np.empty((height, width), dtype=np.int64)
    lengths = np.zeros(height, dtype=np.int64)
    for t in range(word.shape[0]):
        x = word[t]
        r = 0
        while True:
            m = lengths[r]
            lo = 0
            hi = m
            while lo < hi:
                mid = (lo + hi) // 2
                if rows[r, mid] <= x:
                    lo = mid + 1
                else:
                    hi = mid
            if lo == m:
                rows[r, m] = x
                lengths[r] = m + 1
                break
            bumped = rows[r, lo]
            rows[r, lo] = x
            x = bumped
            r += 1
    return lengths


@njit
def ewens_insertion(u, theta):
    """Successor array (0-based) of the sequential-insertion Ewens sampler.

    Element ``k`` opens a new cycle when ``u[k] * (theta + k) < theta``;
    otherwise it is placed right after element ``floor(u[k]*(theta+k) - theta)``.
    """
    n = u.shape[0]
    nxt = np.empty(n, dtype=np.int64)
    for k in range(n):
        x = u[k] * (theta + k)
        if k == 0 or x < theta:
            nxt[k] = k
        else:
            j = int(x - theta)
            if j >= k:
                j = k - 1
            nxt[k] = nxt[j]
            nxt[j] = k
    return nxt


@njit
def cycle_lengths(nxt):
    n = nxt.shape[0]
    seen = np.zeros(n, dtype=np.bool_)
    out = np.empty(n, dtype=np.int64)
    c = 0
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = nxt[i]
            length += 1
        out[c] = length
        c += 1
    return out[:c]


@njit
def stick_breaking_top(u, theta, k, rel_tol):
    """Top-``k`` atoms of a stick-breaking sequence driven by uniforms ``u``.

    Sticks are ``v = 1 - (1-u)**(1/theta)``. Stops once the unbroken remainder
    is below ``rel_tol`` times the current ``k``-th largest atom. Returns the
    sorted atoms, the remainder and the number of sticks used (``-1`` when
    ``u`` ran out before the stopping rule fired).
    """
    top = np.zeros(k, dtype=np.float64)
    rest = 1.0
    inv = 1.0 / theta
    for m in range(u.shape[0]):
        v = 1.0 - (1.0 - u[m]) ** inv
        a = v * rest
        rest = rest * (1.0 - v)
        if a > top[k - 1]:
            p = k - 1
            while p > 0 and top[p - 1] < a:
                top[p] = top[p - 1]
                p -= 1
            top[p] = a
        if rest <= 0.0 or (m + 1 >= k and rest < rel_tol * top[k - 1]):
            return top, rest, m + 1
    return top, rest, -1


@njit
def last_passage(matrix):
    n_rows, n_cols = matrix.shape
    g = np.zeros((n_rows + 1, n_cols + 1), dtype=np.int64)
    for i in range(n_rows):
        for j in range(n_cols):
            g[i + 1, j + 1] = matrix[i, j] + max(g[i, j + 1], g[i + 1, j])
    return g[n_rows, n_cols]


@njit
def plancherel_growth(u):
    """Grow a Plancherel diagram box by box from uniforms ``u``.

    The box added to ``lam`` lands at the addable corner of content ``x_k``
    with probability ``prod_j (x_k - y_j) / prod_{j != k} (x_k - x_j)``,
    where ``x`` are the contents of addable corners and ``y`` those of
    removable corners. This equals ``dim(lam+box) / ((|lam|+1) dim(lam))``.
    """
    n = u.shape[0]
    rows = np.zeros(n + 1, dtype=np.int64)
    ell = 0
    add_row = np.empty(n + 2, dtype=np.int64)
    xs = np.empty(n + 2, dtype=np.float64)
    ys = np.empty(n + 2, dtype=np.float64)
    probs = np.empty(n + 2, dtype=np.float64)
    for t in range(n):
        na = 0
        nr = 0
        for i in range(ell + 1):
            if i == 0 or rows[i - 1] > rows[i]:
                add_row[na] = i
                xs[na] = rows[i] - i
                na += 1
            if i < ell and rows[i] > rows[i + 1]:
                ys[nr] = rows[i] - 1 - i
                nr += 1
        # contents come out decreasing in row order; pair numerator and
        # denominator factors in that order to keep partial products O(1)
        total = 0.0
        for a in range(na):
            p = 1.0
            b = 0
            for c in range(nr):
                if b == a:
                    b += 1
                p *= (xs[a] - ys[c]) / (xs[a] - xs[b])
                b += 1
            probs[a] = p
            total += p
        target = u[t] * total
        chosen = na - 1
        acc = 0.0
        for a in range(na):
            acc += probs[a]
            if target < acc:
                chosen = a
                break
        r = add_row[chosen]
        rows[r] += 1
        if r == ell:
            ell += 1
    return rows[:ell].copy()


@njit
def involution_pairs(u, fixed_ratio):
    """Uniform involution of ``n`` points as a 0-based image array.

    ``fixed_ratio[m] = T(m-1)/T(m)`` is the chance that the largest of ``m``
    remaining points is fixed; ``u`` has shape ``(n, 2)``.
    """
    n = u.shape[0]
    images = np.empty(n, dtype=np.int64)
    pool = np.arange(n)
    m = n
    step = 0
    while m > 0:
        top = pool[m - 1]
        if m == 1 or u[step, 0] < fixed_ratio[m]:
            images[top] = top
            m -= 1
        else:
            j = int(u[step, 1] * (m - 1))
            if j >= m - 1:
                j = m - 2
            partner = pool[j]
            images[top] = partner
            images[partner] = top
            pool[j] = pool[m - 2]
            m -= 2
        step += 1
    return images


@njit
def bessel_minimal_chain(alpha, z, top):
    """Unnormalized ``J_{alpha+k}(z)`` for ``k = 0..top`` by Miller's method.

    Runs the three-term recurrence downward from a start index far above
    ``top`` and returns the chain together with the Neumann normalization
    sum ``sum_k (alpha+2k) Gamma(alpha+k)/k! f_{alpha+2k}`` (``f_0 + 2 sum f_{2k}``
    when ``alpha == 0``), which must equal ``(z/2)**alpha``.
    """
    extra = int(z) + 30 + int(math.sqrt(40.0 * (max(top, int(z)) + 1)))
    start = max(top, int(z)) + extra
    if start % 2 == 1:
        start += 1
    vals = np.zeros(top + 1, dtype=np.float64)
    f_next = 0.0
    f_cur = 1e-300
    norm = 0.0
    for m in range(start, -1, -1):
        order = alpha + m
        if m % 2 == 0:
            if alpha == 0.0:
                w = 1.0 if m == 0 else 2.0
            else:
                k = m // 2
                w = (alpha + 2 * k) * math.exp(math.lgamma(alpha + k) - math.lgamma(k + 1.0))
            norm += w * f_cur
        if m <= top:
            vals[m] = f_cur
        if m == 0:
            break
        f_prev = (2.0 * order / z) * f_cur - f_next
        f_next = f_cur
        f_cur = f_prev
        if abs(f_cur) > 1e250:
            f_cur *= 1e-250
            f_next *= 1e-250
            norm *= 1e-250
            for q in range(m - 1, top + 1):
                if q >= 0:
                    vals[q] *= 1e-250
    return vals, norm
