"""Hot integer kernels for batches of small Seidel matrices.

Two interchangeable implementations live here: loop kernels compiled with
numba ``@njit`` and batched pure-numpy versions.  Set the environment
variable ``SEIDELDET_DISABLE_NUMBA=1`` (before import) to force the numpy
path; it is also used automatically when numba cannot be imported.

All kernels use int64 arithmetic.  Callers are responsible for staying under
the overflow limits below.
"""

import os

import numpy as np

#: Fraction-free elimination multiplies two minors of order <= n-1 of a
#: {0,+-1} matrix, each bounded by (n-1)^((n-1)/2), so the transient is at
#: most 2*(n-1)^(n-1): 2*15^15 < 2^63 but 2*16^16 is not.
DET_INT64_MAX_ORDER = 16

#: Berkowitz intermediates are R A^m C (|.| <= r^r) times coefficients of
#: the leading char poly (<= 2^r r^(r/2)); n = 10 keeps this under 2^62.
CHARPOLY_INT64_MAX_ORDER = 10

_DISABLED = os.environ.get("SEIDELDET_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError("numba disabled by SEIDELDET_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def backend() -> str:
    """Name of the active kernel backend, ``"numba"`` or ``"numpy"``."""
    return "numba" if HAVE_NUMBA else "numpy"


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def pair_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Row-major (i, j), i < j, 0-based: the bit order of the packed upper triangle."""
    iu = np.triu_indices(n, k=1)
    return iu[0].astype(np.int64), iu[1].astype(np.int64)


def gray(idx: np.ndarray) -> np.ndarray:
    return idx ^ (idx >> 1)


# --------------------------------------------------------------------------
# numpy path
# --------------------------------------------------------------------------


def matrices_from_codes_np(n: int, codes: np.ndarray) -> np.ndarray:
    """Expand packed upper-triangle codes (bit 1 -> +1, bit 0 -> -1) into a (B, n, n) batch."""
    codes = np.asarray(codes, dtype=np.uint64)
    rows, cols = pair_indices(n)
    shifts = np.arange(len(rows), dtype=np.uint64)
    bits = ((codes[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.int64)
    vals = 2 * bits - 1
    out = np.zeros((len(codes), n, n), dtype=np.int64)
    out[:, rows, cols] = vals
    out[:, cols, rows] = -vals
    return out


def det_batch_np(mats: np.ndarray) -> np.ndarray:
    """Bareiss elimination with row pivoting, vectorised over the batch axis."""
    a = np.array(mats, dtype=np.int64, copy=True)
    b, n, _ = a.shape
    if n == 0:
        return np.ones(b, dtype=np.int64)
    idx = np.arange(b)
    sign = np.ones(b, dtype=np.int64)
    prev = np.ones(b, dtype=np.int64)
    alive = np.ones(b, dtype=bool)
    for k in range(n - 1):
        nz = a[:, k:, k] != 0
        has = nz.any(axis=1)
        alive &= has
        piv = np.argmax(nz, axis=1) + k
        swap = piv != k
        if swap.any():
            rk = a[idx, k].copy()
            a[idx, k] = a[idx, piv]
            a[idx, piv] = rk
            sign = np.where(swap, -sign, sign)
        akk = a[:, k, k]
        akk_safe = np.where(has, akk, 1)
        sub = a[:, k + 1 :, k + 1 :]
        upd = sub * akk_safe[:, None, None] - a[:, k + 1 :, k, None] * a[:, None, k, k + 1 :]
        a[:, k + 1 :, k + 1 :] = upd // prev[:, None, None]
        prev = akk_safe
    return np.where(alive, sign * a[:, n - 1, n - 1], 0)


def charpoly_batch_np(mats: np.ndarray) -> np.ndarray:
    """Berkowitz char polys of a batch; row r holds det(xI - A_r), highest degree first."""
    a = np.asarray(mats, dtype=np.int64)
    b, n, _ = a.shape
    p = np.ones((b, 1), dtype=np.int64)
    for r in range(n):
        t = np.zeros((b, r + 2), dtype=np.int64)
        t[:, 0] = 1
        t[:, 1] = -a[:, r, r]
        if r:
            row = a[:, r, :r]
            lead = a[:, :r, :r]
            v = a[:, :r, r].copy()
            for m in range(r):
                t[:, m + 2] = -np.einsum("bi,bi->b", row, v)
                v = np.einsum("bij,bj->bi", lead, v)
        newp = np.zeros((b, r + 2), dtype=np.int64)
        for j in range(r + 1):
            newp[:, j:] += t[:, : r + 2 - j] * p[:, j : j + 1]
        p = newp
    return p


def skew_conference_batch_np(mats: np.ndarray) -> np.ndarray:
    a = np.asarray(mats, dtype=np.int64)
    n = a.shape[1]
    gram = np.einsum("bij,bkj->bik", a, a)
    return np.all(gram == (n - 1) * np.eye(n, dtype=np.int64)[None], axis=(1, 2))


def scan_dets_np(n: int, codes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mats = matrices_from_codes_np(n, codes)
    return det_batch_np(mats), skew_conference_batch_np(mats)


def scan_charpolys_np(n: int, codes: np.ndarray) -> np.ndarray:
    return charpoly_batch_np(matrices_from_codes_np(n, codes))


# --------------------------------------------------------------------------
# numba path
# --------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _fill(n, code, out):
        b = 0
        for i in range(n):
            out[i, i] = 0
            for j in range(i + 1, n):
                v = 1 if (code >> b) & 1 else -1
                out[i, j] = v
                out[j, i] = -v
                b += 1

    @njit(cache=True)
    def _bareiss(a):
        n = a.shape[0]
        if n == 0:
            return 1
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k, k] == 0:
                p = -1
                for r in range(k + 1, n):
                    if a[r, k] != 0:
                        p = r
                        break
                if p < 0:
                    return 0
                for c in range(n):
                    tmp = a[k, c]
                    a[k, c] = a[p, c]
                    a[p, c] = tmp
                sign = -sign
            akk = a[k, k]
            for i in range(k + 1, n):
                aik = a[i, k]
                for j in range(k + 1, n):
                    a[i, j] = (a[i, j] * akk - aik * a[k, j]) // prev
            prev = akk
        return sign * a[n - 1, n - 1]

    @njit(cache=True)
    def _berkowitz(a, out):
        n = a.shape[0]
        p = np.zeros(n + 1, dtype=np.int64)
        newp = np.zeros(n + 1, dtype=np.int64)
        t = np.zeros(n + 1, dtype=np.int64)
        v = np.zeros(n, dtype=np.int64)
        w = np.zeros(n, dtype=np.int64)
        p[0] = 1
        for r in range(n):
            t[0] = 1
            t[1] = -a[r, r]
            for i in range(r):
                v[i] = a[i, r]
            for m in range(r):
                s = 0
                for i in range(r):
                    s += a[r, i] * v[i]
                t[m + 2] = -s
                for i in range(r):
                    acc = 0
                    for j in range(r):
                        acc += a[i, j] * v[j]
                    w[i] = acc
                for i in range(r):
                    v[i] = w[i]
            for i in range(r + 2):
                acc = 0
                for j in range(min(i, r) + 1):
                    acc += t[i - j] * p[j]
                newp[i] = acc
            for i in range(r + 2):
                p[i] = newp[i]
        for i in range(n + 1):
            out[i] = p[i]

    @njit(cache=True)
    def _is_skew_conference(a):
        n = a.shape[0]
        for i in range(n):
            for j in range(i + 1, n):
                s = 0
                for c in range(n):
                    s += a[i, c] * a[j, c]
                if s != 0:
                    return False
        return True

    @njit(cache=True)
    def _scan_dets_nb(n, codes, dets, sc):
        a = np.zeros((n, n), dtype=np.int64)
        for t in range(codes.shape[0]):
            _fill(n, codes[t], a)
            sc[t] = _is_skew_conference(a)
            dets[t] = _bareiss(a)

    @njit(cache=True)
    def _scan_charpolys_nb(n, codes, out):
        a = np.zeros((n, n), dtype=np.int64)
        for t in range(codes.shape[0]):
            _fill(n, codes[t], a)
            _berkowitz(a, out[t])

    @njit(cache=True)
    def _det_batch_nb(mats, out):
        for t in range(mats.shape[0]):
            out[t] = _bareiss(mats[t].copy())

    @njit(cache=True)
    def _charpoly_batch_nb(mats, out):
        for t in range(mats.shape[0]):
            _berkowitz(mats[t], out[t])


# --------------------------------------------------------------------------
# dispatch
# --------------------------------------------------------------------------


def scan_dets(n: int, codes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Determinants and skew-conference flags of the matrices packed in ``codes``."""
    codes = np.ascontiguousarray(codes, dtype=np.int64)
    if not HAVE_NUMBA:
        return scan_dets_np(n, codes)
    dets = np.empty(len(codes), dtype=np.int64)
    sc = np.empty(len(codes), dtype=np.bool_)
    _scan_dets_nb(n, codes, dets, sc)
    return dets, sc


def scan_charpolys(n: int, codes: np.ndarray) -> np.ndarray:
    """Char polys (highest degree first) of the matrices packed in ``codes``."""
    codes = np.ascontiguousarray(codes, dtype=np.int64)
    if not HAVE_NUMBA:
        return scan_charpolys_np(n, codes)
    out = np.empty((len(codes), n + 1), dtype=np.int64)
    _scan_charpolys_nb(n, codes, out)
    return out


def det_batch(mats: np.ndarray) -> np.ndarray:
    mats = np.ascontiguousarray(mats, dtype=np.int64)
    if mats.shape[1] > DET_INT64_MAX_ORDER:
        raise ValueError(f"int64 determinant kernel limited to order {DET_INT64_MAX_ORDER}")
    if not HAVE_NUMBA:
        return det_batch_np(mats)
    out = np.empty(mats.shape[0], dtype=np.int64)
    _det_batch_nb(mats, out)
    return out


def charpoly_batch(mats: np.ndarray) -> np.ndarray:
    mats = np.ascontiguousarray(mats, dtype=np.int64)
    if mats.shape[1] > CHARPOLY_INT64_MAX_ORDER:
        raise ValueError(f"int64 char poly kernel limited to order {CHARPOLY_INT64_MAX_ORDER}")
    if not HAVE_NUMBA:
        return charpoly_batch_np(mats)
    out = np.empty((mats.shape[0], mats.shape[1] + 1), dtype=np.int64)
    _charpoly_batch_nb(mats, out)
    return out
