"""Hot numeric kernels: Jacobi eigensolver and Monte Carlo cluster sampling.

Compiled with numba unless LAMPERC_NO_NUMBA is set (see _accel).  The same
source runs on both paths; the counter-based random stream matches the pure
Python sampler in ``animals`` bit for bit.
"""

import numpy as np

from ._accel import njit

_C1 = np.uint64(0x9E3779B97F4A7C15)
_C2 = np.uint64(0xBF58476D1CE4E5B9)
_C3 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)


@njit(cache=True)
def _splitmix64(x):
    x = x + _C1
    x = (x ^ (x >> _S30)) * _C2
    x = (x ^ (x >> _S27)) * _C3
    return x ^ (x >> _S31)


@njit(cache=True)
def open_words(seed, khash):
    """Per-key stream words for one sample seed; key open iff word < threshold."""
    mixed = _splitmix64(seed)
    out = np.empty(khash.shape[0], dtype=np.uint64)
    for i in range(khash.shape[0]):
        out[i] = _splitmix64(mixed ^ khash[i])
    return out


@njit(cache=True)
def jacobi_eigh(a, off_tol=1e-12, max_sweeps=60):
    """Cyclic Jacobi diagonalization of a symmetric matrix.

    Returns (eigenvalues, eigenvector columns), unordered; callers sort.
    Stops when the off-diagonal Frobenius norm drops below ``off_tol``.
    """
    n = a.shape[0]
    A = a.copy()
    V = np.eye(n)
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += A[p, q] * A[p, q]
        if np.sqrt(2.0 * off) < off_tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - s * akq
                    A[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - s * aqk
                    A[q, k] = s * apk + c * aqk
                for k in range(n):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp - s * vkq
                    V[k, q] = s * vkp + c * vkq
    w = np.empty(n)
    for i in range(n):
        w[i] = A[i, i]
    return w, V


@njit(cache=True)
def mc_site_sample(nbr, deg, wts, khash, root, thresh, seeds, nsteps):
    """Per-sample n-step return probabilities on site-percolation clusters.

    The graph is a Cayley ball given by padded adjacency arrays; clusters are
    explored inside the ball only, which is exact for n up to the ball radius.
    Returns (diag[nsamples, nsteps+1], masks[nsamples]); masks hold cluster
    membership bitmaps when the ball has at most 64 vertices, else 0.
    """
    nv = nbr.shape[0]
    ns = seeds.shape[0]
    diag = np.zeros((ns, nsteps + 1))
    masks = np.zeros(ns, dtype=np.uint64)
    local = np.empty(nv, dtype=np.int64)
    queue = np.empty(nv, dtype=np.int64)
    for s in range(ns):
        words = open_words(seeds[s], khash)
        diag[s, 0] = 1.0  # empty-cluster convention at n = 0
        if words[root] >= thresh:
            continue
        for i in range(nv):
            local[i] = -1
        queue[0] = root
        local[root] = 0
        head = 0
        csize = 1
        while head < csize:
            x = queue[head]
            head += 1
            for k in range(deg[x]):
                y = nbr[x, k]
                if local[y] < 0 and words[y] < thresh:
                    local[y] = csize
                    queue[csize] = y
                    csize += 1
        if nv <= 64:
            m = np.uint64(0)
            for i in range(csize):
                m |= np.uint64(1) << np.uint64(queue[i])
            masks[s] = m
        P = np.zeros((csize, csize))
        for li in range(csize):
            x = queue[li]
            for k in range(deg[x]):
                y = nbr[x, k]
                lj = local[y]
                if lj >= 0:
                    P[li, lj] += wts[x, k]
        v = np.zeros(csize)
        v[0] = 1.0
        for n in range(1, nsteps + 1):
            v = P @ v
            diag[s, n] = v[0]
    return diag, masks


@njit(cache=True)
def mc_bond_sample(nbr, deg, wts, eidx, ehash, root, thresh, seeds, nsteps):
    """Bond-percolation analogue of mc_site_sample; states live on edges."""
    nv = nbr.shape[0]
    ns = seeds.shape[0]
    diag = np.zeros((ns, nsteps + 1))
    masks = np.zeros(ns, dtype=np.uint64)
    local = np.empty(nv, dtype=np.int64)
    queue = np.empty(nv, dtype=np.int64)
    for s in range(ns):
        words = open_words(seeds[s], ehash)
        diag[s, 0] = 1.0
        for i in range(nv):
            local[i] = -1
        queue[0] = root
        local[root] = 0
        head = 0
        csize = 1
        while head < csize:
            x = queue[head]
            head += 1
            for k in range(deg[x]):
                if words[eidx[x, k]] < thresh:
                    y = nbr[x, k]
                    if local[y] < 0:
                        local[y] = csize
                        queue[csize] = y
                        csize += 1
        if nv <= 64:
            m = np.uint64(0)
            for i in range(csize):
                m |= np.uint64(1) << np.uint64(queue[i])
            masks[s] = m
        P = np.zeros((csize, csize))
        for li in range(csize):
            x = queue[li]
            for k in range(deg[x]):
                if words[eidx[x, k]] < thresh:
                    lj = local[nbr[x, k]]
                    if lj >= 0:
                        P[li, lj] += wts[x, k]
        v = np.zeros(csize)
        v[0] = 1.0
        for n in range(1, nsteps + 1):
            v = P @ v
            diag[s, n] = v[0]
    return diag, masks
