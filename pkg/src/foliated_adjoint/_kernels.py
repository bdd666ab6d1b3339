"""Integer kernels for exhaustive Hirzebruch-Jung corpus checks.

The exact engine works in :class:`fractions.Fraction`, which is far too slow
to sweep every string with entries in 2..7 and length up to 8 (about two
million strings).  Every identity checked here can be cleared of
denominators, so the sweep runs on int64: the largest ``n`` in that corpus
is below 5e6 and the largest product formed is below 2e14.

Two interchangeable backends check a block of strings (one row each):
a numba ``@njit`` loop and a vectorised numpy version.  Set
``FOLIATED_ADJOINT_NUMBA=0`` to force numpy.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

CHECKS = (
    "recurrence",
    "endpoints",
    "wronskian",
    "m_i_pairing",
    "m_i_range",
    "cs_closure",
    "eps_canonical",
)
N_CHECKS = len(CHECKS)


def numba_enabled() -> bool:
    return _HAVE_NUMBA and os.environ.get("FOLIATED_ADJOINT_NUMBA", "1") != "0"


def corpus_block(r: int, start: int, stop: int, lo: int = 2, hi: int = 7) -> np.ndarray:
    """Rows start..stop-1 of the lexicographic listing of {lo..hi}^r."""
    base = hi - lo + 1
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((stop - start, r), dtype=np.int64)
    for col in range(r - 1, -1, -1):
        out[:, col] = idx % base + lo
        idx //= base
    return out


# --- numpy backend ------------------------------------------------------------


def check_block_numpy(e: np.ndarray) -> np.ndarray:
    m, r = e.shape
    fails = np.zeros(N_CHECKS, dtype=np.int64)
    mu = np.zeros((m, r + 2), dtype=np.int64)
    lam = np.zeros((m, r + 2), dtype=np.int64)
    mu[:, 1] = 1
    for i in range(1, r + 1):
        mu[:, i + 1] = e[:, i - 1] * mu[:, i] - mu[:, i - 1]
    lam[:, r] = 1
    for i in range(r, 0, -1):
        lam[:, i - 1] = e[:, i - 1] * lam[:, i] - lam[:, i + 1]
    n = mu[:, r + 1]

    rec = np.zeros(m, dtype=bool)
    for i in range(1, r + 1):
        rec |= mu[:, i - 1] - e[:, i - 1] * mu[:, i] + mu[:, i + 1] != 0
        rec |= lam[:, i - 1] - e[:, i - 1] * lam[:, i] + lam[:, i + 1] != 0
    fails[0] = rec.sum()

    ends = (lam[:, 0] != n) | (mu[:, 0] != 0) | (mu[:, 1] != 1) | (lam[:, r] != 1) | (lam[:, r + 1] != 0)
    fails[1] = ends.sum()

    wr = lam[:, :-1] * mu[:, 1:] - lam[:, 1:] * mu[:, :-1]
    fails[2] = (wr != n[:, None]).any(axis=1).sum()

    # n * M_i has integer coefficients c[i, k]
    ii = np.arange(1, r + 1)[:, None]
    kk = np.arange(1, r + 1)[None, :]
    lower = kk <= ii
    c = np.where(
        lower[None, :, :],
        lam[:, 1 : r + 1, None] * mu[:, None, 1 : r + 1],
        mu[:, 1 : r + 1, None] * lam[:, None, 1 : r + 1],
    )
    pair = -e[:, None, :] * c
    pair[:, :, 1:] += c[:, :, :-1]
    pair[:, :, :-1] += c[:, :, 1:]
    target = -n[:, None, None] * np.eye(r, dtype=np.int64)[None, :, :]
    fails[3] = (pair != target).any(axis=(1, 2)).sum()
    # every M_i is strictly positive; M_1 (coefficients lam_k / n) lies below 1
    fails[4] = ((c <= 0).any(axis=(1, 2)) | (c[:, 0, :] >= n[:, None]).any(axis=1)).sum()

    # CS at the forward node of G_k is -mu_{k+1}/mu_k; rebuild it by
    # G_{k+1}^2 - 1/CS_k starting from CS_1 = G_1^2, as num/den pairs
    num = -e[:, 0].copy()
    den = np.ones(m, dtype=np.int64)
    bad = num * mu[:, 1] != -mu[:, 2] * den
    for k in range(1, r):
        num, den = -e[:, k] * num - den, num
        bad |= num * mu[:, k + 1] != -mu[:, k + 2] * den
        # CS sum on G_{k+1}: reciprocal of the previous node plus the new one
        bad |= -mu[:, k] - mu[:, k + 2] != -e[:, k] * mu[:, k + 1]
    fails[5] = bad.sum()

    # epsilon = 1/n: sum mu_k (e_k - 2) < n
    s = (mu[:, 1 : r + 1] * (e - 2)).sum(axis=1)
    fails[6] = (s >= n).sum()
    return fails


# --- numba backend ------------------------------------------------------------


def _check_block_py(e):
    m, r = e.shape
    fails = np.zeros(N_CHECKS, dtype=np.int64)
    mu = np.zeros(r + 2, dtype=np.int64)
    lam = np.zeros(r + 2, dtype=np.int64)
    for row in range(m):
        mu[0] = 0
        mu[1] = 1
        for i in range(1, r + 1):
            mu[i + 1] = e[row, i - 1] * mu[i] - mu[i - 1]
        lam[r + 1] = 0
        lam[r] = 1
        for i in range(r, 0, -1):
            lam[i - 1] = e[row, i - 1] * lam[i] - lam[i + 1]
        n = mu[r + 1]

        ok = True
        for i in range(1, r + 1):
            ei = e[row, i - 1]
            if mu[i - 1] - ei * mu[i] + mu[i + 1] != 0 or lam[i - 1] - ei * lam[i] + lam[i + 1] != 0:
                ok = False
        if not ok:
            fails[0] += 1

        if lam[0] != n or mu[0] != 0 or mu[1] != 1 or lam[r] != 1 or lam[r + 1] != 0:
            fails[1] += 1

        ok = True
        for i in range(r + 1):
            if lam[i] * mu[i + 1] - lam[i + 1] * mu[i] != n:
                ok = False
        if not ok:
            fails[2] += 1

        ok_pair = True
        ok_range = True
        for i in range(1, r + 1):
            for j in range(1, r + 1):
                # (n M_i) . G_j from the three nonzero Gram entries of column j
                acc = 0
                for k in range(j - 1, j + 2):
                    if k < 1 or k > r:
                        continue
                    if k <= i:
                        ck = lam[i] * mu[k]
                    else:
                        ck = mu[i] * lam[k]
                    if k == j:
                        acc -= e[row, j - 1] * ck
                    else:
                        acc += ck
                want = -n if i == j else 0
                if acc != want:
                    ok_pair = False
                cij = lam[i] * mu[j] if j <= i else mu[i] * lam[j]
                if cij <= 0 or (i == 1 and cij >= n):
                    ok_range = False
        if not ok_pair:
            fails[3] += 1
        if not ok_range:
            fails[4] += 1

        num = -e[row, 0]
        den = 1
        ok = num * mu[1] == -mu[2] * den
        for k in range(1, r):
            nxt = -e[row, k] * num - den
            den = num
            num = nxt
            if num * mu[k + 1] != -mu[k + 2] * den:
                ok = False
            if -mu[k] - mu[k + 2] != -e[row, k] * mu[k + 1]:
                ok = False
        if not ok:
            fails[5] += 1

        s = 0
        for k in range(1, r + 1):
            s += mu[k] * (e[row, k - 1] - 2)
        if s >= n:
            fails[6] += 1
    return fails


if _HAVE_NUMBA:
    _check_block_jit = njit(cache=True)(_check_block_py)
else:  # pragma: no cover
    _check_block_jit = _check_block_py


def check_block(e: np.ndarray, use_numba: bool | None = None) -> np.ndarray:
    if use_numba is None:
        use_numba = numba_enabled()
    e = np.ascontiguousarray(e, dtype=np.int64)
    if use_numba:
        return _check_block_jit(e)
    return check_block_numpy(e)


def corpus_check(
    max_len: int = 8, lo: int = 2, hi: int = 7, chunk: int = 1 << 16, use_numba: bool | None = None
) -> tuple[int, dict[str, int]]:
    """Sweep every string with entries lo..hi and length 1..max_len.

    Returns the number of strings checked and the failure count per check.
    """
    totals = np.zeros(N_CHECKS, dtype=np.int64)
    count = 0
    base = hi - lo + 1
    for r in range(1, max_len + 1):
        size = base**r
        for start in range(0, size, chunk):
            stop = min(size, start + chunk)
            totals += check_block(corpus_block(r, start, stop, lo, hi), use_numba)
            count += stop - start
    return count, {name: int(v) for name, v in zip(CHECKS, totals)}
