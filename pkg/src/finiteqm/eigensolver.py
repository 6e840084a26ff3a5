"""Self-contained eigensolvers for real symmetric matrices.

Two paths:

* :func:`eigh_tridiagonal` -- implicit-shift QL for the eigenvalues followed by
  inverse iteration (partial-pivoting LU of ``T - lambda I``) for the vectors.
  Cost is O(d^2) overall.
* :func:`eigh_jacobi` -- cyclic Jacobi rotations on a dense matrix, O(d^3) per
  sweep.  Used for small or unstructured matrices and as a cross-check.

The kernels are compiled with numba when it is importable and run as plain
Python otherwise.
"""

import numpy as np

from .errors import EigensolverError

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda func: func


EPS = np.finfo(float).eps


@njit(cache=True)
def _ql_eigenvalues(diag, off, max_iter):
    n = diag.shape[0]
    d = diag.copy()
    e = np.zeros(n)
    e[: n - 1] = off
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= EPS * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                return d, l
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, -1


@njit(cache=True)
def _solve_shifted(diag, off, shift, rhs, tiny):
    """Solve ``(T - shift I) x = rhs`` by LU with partial pivoting."""
    n = diag.shape[0]
    d = diag - shift
    dl = off.copy()
    du = off.copy()
    du2 = np.zeros(max(n - 2, 0))
    swap = np.zeros(max(n - 1, 0), dtype=np.bool_)
    for i in range(n - 1):
        if abs(d[i]) >= abs(dl[i]):
            # pivots below the floor are perturbed to it, as in dlagtf
            if abs(d[i]) < tiny:
                d[i] = tiny if d[i] >= 0.0 else -tiny
            fact = dl[i] / d[i]
            dl[i] = fact
            d[i + 1] -= fact * du[i]
        else:
            fact = d[i] / dl[i]
            d[i] = dl[i]
            dl[i] = fact
            temp = du[i]
            du[i] = d[i + 1]
            d[i + 1] = temp - fact * d[i + 1]
            if i < n - 2:
                du2[i] = du[i + 1]
                du[i + 1] = -fact * du[i + 1]
            swap[i] = True
    if abs(d[n - 1]) < tiny:
        d[n - 1] = tiny if d[n - 1] >= 0.0 else -tiny
    x = rhs.copy()
    for i in range(n - 1):
        if swap[i]:
            temp = x[i]
            x[i] = x[i + 1]
            x[i + 1] = temp - dl[i] * x[i]
        else:
            x[i + 1] -= dl[i] * x[i]
    x[n - 1] /= d[n - 1]
    if n > 1:
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i]
    return x


@njit(cache=True)
def _tridiagonal_matvec(diag, off, x):
    n = diag.shape[0]
    y = diag * x
    for i in range(n - 1):
        y[i] += off[i] * x[i + 1]
        y[i + 1] += off[i] * x[i]
    return y


@njit(cache=True)
def _inverse_iteration(diag, off, eigenvalues, start, cluster_tol, res_tol, max_iter):
    n = diag.shape[0]
    norm = 0.0
    for i in range(n):
        row = abs(diag[i])
        if i > 0:
            row += abs(off[i - 1])
        if i < n - 1:
            row += abs(off[i])
        norm = max(norm, row)
    tiny = EPS * max(norm, 1e-300)
    sep = 10.0 * EPS * max(norm, 1e-300)
    vectors = np.zeros((n, n))
    cluster_start = 0
    prev_shift = 0.0
    for j in range(n):
        shift = eigenvalues[j]
        if j > 0 and eigenvalues[j] - eigenvalues[j - 1] <= cluster_tol:
            # nearly equal shifts would return the same vector; nudge apart
            if shift <= prev_shift + sep:
                shift = prev_shift + sep
        else:
            cluster_start = j
        prev_shift = shift
        x = start[:, j].copy()
        x /= np.sqrt(np.sum(x * x))
        # like dstein, keep iterating a little past the residual test; this
        # cleans the vector of noise that later cluster members would amplify
        extra = -1
        for it in range(max_iter + 2):
            if extra < 0 and it == max_iter:
                break
            x = _solve_shifted(diag, off, shift, x, tiny)
            x /= np.max(np.abs(x))
            for k in range(cluster_start, j):
                x -= np.sum(vectors[:, k] * x) * vectors[:, k]
            x /= np.sqrt(np.sum(x * x))
            if extra >= 0:
                extra += 1
                if extra == 2:
                    break
                continue
            r = _tridiagonal_matvec(diag, off, x) - eigenvalues[j] * x
            if np.sqrt(np.sum(r * r)) <= res_tol:
                extra = 0
        if extra < 0:
            return vectors, j
        vectors[:, j] = x
    return vectors, -1


@njit(cache=True)
def _jacobi(a, max_sweeps):
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n)
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += a[i, j] * a[i, j]
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += a[p, q] * a[p, q]
        if off <= (EPS * EPS) * scale * 1e-4 or off == 0.0:
            return np.diag(a).copy(), v, sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0.0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    return np.diag(a).copy(), v, -1


def eigvalsh_tridiagonal(diag, off, max_iter=60):
    """Ascending eigenvalues of the symmetric tridiagonal matrix (diag, off)."""
    diag = np.ascontiguousarray(diag, dtype=float)
    off = np.ascontiguousarray(off, dtype=float)
    n = diag.shape[0]
    if off.shape != (max(n - 1, 0),):
        raise ValueError(f"off-diagonal must have length {n - 1}, got {off.shape}")
    if n == 1:
        return diag.copy()
    values, failed = _ql_eigenvalues(diag, off, max_iter)
    if failed >= 0:
        raise EigensolverError(
            f"QL iteration did not converge for eigenvalue {failed} within {max_iter} iterations",
            d=n,
        )
    return np.sort(values)


def _eigh_block(diag, off, max_iter, inverse_iter, cluster_rtol, rng):
    """Solve one unreduced block; returns ``(w, V, error message or None)``."""
    n = diag.shape[0]
    if n == 1:
        return diag.copy(), np.ones((1, 1)), None
    # work at unit norm so tiny or huge entries cannot under/overflow the squares
    scale = np.max(np.abs(diag) + np.abs(np.r_[off, 0.0]) + np.abs(np.r_[0.0, off]))
    diag, off = diag / scale, off / scale
    w, failed = _ql_eigenvalues(diag, off, max_iter)
    if failed >= 0:
        return None, None, f"QL iteration did not converge within {max_iter} iterations"
    w = np.sort(w)
    start = rng.uniform(-1.0, 1.0, size=(n, n))
    res_tol = 64.0 * np.sqrt(n) * EPS
    vectors, failed = _inverse_iteration(diag, off, w, start, cluster_rtol, res_tol, inverse_iter)
    if failed >= 0:
        return None, None, f"inverse iteration did not converge within {inverse_iter} iterations"
    return w * scale, vectors, None


def eigh_tridiagonal(diag, off, max_iter=60, inverse_iter=8, cluster_rtol=1e-3):
    """Eigenvalues and orthonormal eigenvectors of a symmetric tridiagonal matrix.

    Returns ``(w, V)`` with ``w`` ascending and ``V[:, j]`` the vector for ``w[j]``.
    The matrix is first split into unreduced blocks wherever an off-diagonal
    entry is below ``eps * ||T||``.  Within a block, consecutive eigenvalues
    closer than ``cluster_rtol`` times the block norm form a cluster whose
    vectors are reorthogonalized against each other.
    """
    diag = np.ascontiguousarray(diag, dtype=float)
    off = np.ascontiguousarray(off, dtype=float)
    n = diag.shape[0]
    if off.shape != (max(n - 1, 0),):
        raise ValueError(f"off-diagonal must have length {n - 1}, got {off.shape}")
    # dropping |e| <= eps ||T|| moves eigenvalues by at most eps ||T||
    norm = np.max(np.abs(diag) + np.abs(np.r_[off, 0.0]) + np.abs(np.r_[0.0, off]), initial=0.0)
    cuts = [0] + [i + 1 for i in np.flatnonzero(np.abs(off) <= EPS * norm)] + [n]
    rng = np.random.default_rng(20240611)
    values = np.empty(n)
    vectors = np.zeros((n, n))
    for lo, hi in zip(cuts, cuts[1:]):
        w, v, error = _eigh_block(diag[lo:hi], off[lo:hi - 1], max_iter, inverse_iter,
                                  cluster_rtol, rng)
        if error:
            raise EigensolverError(error, d=n)
        values[lo:hi] = w
        vectors[lo:hi, lo:hi] = v
    order = np.argsort(values, kind="stable")
    return values[order], vectors[:, order]


def eigh_jacobi(matrix, max_sweeps=60):
    """Eigen-decomposition of a dense real symmetric matrix by cyclic Jacobi."""
    a = np.ascontiguousarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix is not symmetric")
    w, v, sweeps = _jacobi(a, max_sweeps)
    if sweeps < 0:
        raise EigensolverError(f"Jacobi did not converge in {max_sweeps} sweeps", d=a.shape[0])
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]
