# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled homology kernel over Z/p^m (mirror of ``favres._zpm``)."""

import numpy as np
cimport numpy as cnp

ctypedef long long i64


cdef inline i64 _mod(i64 x, i64 q) nogil:
    x %= q
    if x < 0:
        x += q
    return x


cdef inline int _val(i64 x, i64 p, int m) nogil:
    cdef int v = 0
    if x == 0:
        return m
    while x % p == 0:
        x //= p
        v += 1
    return v


cdef i64 _inv(i64 u, i64 q):
    return pow(int(u), -1, int(q))


cdef void _find_pivot(i64[:, :] A, int t, int rows, int cols, i64 p, int m,
                      int* bv, int* bi, int* bj) nogil:
    cdef int i, j, v
    bv[0] = m
    bi[0] = -1
    bj[0] = -1
    for i in range(t, rows):
        for j in range(t, cols):
            if A[i, j] != 0:
                v = _val(A[i, j], p, m)
                if v < bv[0]:
                    bv[0] = v
                    bi[0] = i
                    bj[0] = j
                    if v == 0:
                        return


cdef list _pivot_valuations(i64[:, :] A, i64 p, int m, i64 q):
    cdef int rows = A.shape[0]
    cdef int cols = A.shape[1]
    cdef int t = 0, i2, j2, v, i, j
    cdef i64 pv, uinv, c, tmp
    cdef list out = []
    while t < rows and t < cols:
        _find_pivot(A, t, rows, cols, p, m, &v, &i, &j)
        if i < 0:
            break
        if i != t:
            for j2 in range(cols):
                tmp = A[t, j2]; A[t, j2] = A[i, j2]; A[i, j2] = tmp
        if j != t:
            for i2 in range(rows):
                tmp = A[i2, t]; A[i2, t] = A[i2, j]; A[i2, j] = tmp
        pv = 1
        for i2 in range(v):
            pv *= p
        uinv = _inv(A[t, t] // pv, q)
        for i2 in range(t + 1, rows):
            if A[i2, t] != 0:
                c = _mod((A[i2, t] // pv) * uinv, q)
                for j2 in range(t, cols):
                    A[i2, j2] = _mod(A[i2, j2] - c * A[t, j2], q)
        for j2 in range(t + 1, cols):
            A[t, j2] = 0
        out.append(v)
        t += 1
    return out


def pivot_valuations(A, p, m):
    q = p ** m
    arr = np.ascontiguousarray(np.asarray(A, dtype=np.int64).reshape(len(A), -1) % q) if len(A) else np.zeros((0, 0), dtype=np.int64)
    return _pivot_valuations(arr, p, m, q)


def homology_exponents(d_in, d_out, int n_mid, i64 p, int m):
    cdef i64 q = p ** m
    cdef int b = n_mid
    cdef int a = len(d_in[0]) if len(d_in) else 0
    cdef int c = len(d_out)
    cdef cnp.ndarray[i64, ndim=2] Dn = np.zeros((c, b), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=2] En = np.zeros((b, a), dtype=np.int64)
    if c and b:
        Dn[:, :] = np.asarray(d_out, dtype=np.int64) % q
    if a and b:
        En[:, :] = np.asarray(d_in, dtype=np.int64) % q
    cdef i64[:, :] D = Dn
    cdef i64[:, :] E = En
    cdef int t = 0, i, j, i2, j2, k, v
    cdef i64 pv, u, uinv, f, tmp
    cdef list pivots = []
    while t < c and t < b:
        _find_pivot(D, t, c, b, p, m, &v, &i, &j)
        if i < 0:
            break
        if i != t:
            for j2 in range(b):
                tmp = D[t, j2]; D[t, j2] = D[i, j2]; D[i, j2] = tmp
        if j != t:
            for i2 in range(c):
                tmp = D[i2, t]; D[i2, t] = D[i2, j]; D[i2, j] = tmp
            for k in range(a):
                tmp = E[t, k]; E[t, k] = E[j, k]; E[j, k] = tmp
        pv = 1
        for i2 in range(v):
            pv *= p
        u = D[t, t] // pv
        uinv = _inv(u, q)
        for i2 in range(c):
            D[i2, t] = _mod(D[i2, t] * uinv, q)
        for k in range(a):
            E[t, k] = _mod(E[t, k] * u, q)
        for i2 in range(c):
            if i2 != t and D[i2, t] != 0:
                f = D[i2, t] // pv
                for j2 in range(b):
                    D[i2, j2] = _mod(D[i2, j2] - f * D[t, j2], q)
        for j2 in range(t + 1, b):
            f = D[t, j2]
            if f != 0:
                f //= pv
                for i2 in range(c):
                    D[i2, j2] = _mod(D[i2, j2] - f * D[i2, t], q)
                for k in range(a):
                    E[t, k] = _mod(E[t, k] + f * E[j2, k], q)
        pivots.append(v)
        t += 1

    cdef list moduli = []
    cdef list gens = []
    cdef i64 shift, pct
    cdef int ct
    cdef int npiv = len(pivots)
    for t in range(b):
        if t < npiv:
            ct = pivots[t]
            if ct == 0:
                for k in range(a):
                    if E[t, k] != 0:
                        raise ValueError("d_out * d_in is not zero")
                continue
            shift = 1
            for i2 in range(m - ct):
                shift *= p
            pct = 1
            for i2 in range(ct):
                pct *= p
            row = []
            for k in range(a):
                if E[t, k] % shift != 0:
                    raise ValueError("d_out * d_in is not zero")
                row.append((E[t, k] // shift) % pct)
            gens.append(row)
        else:
            ct = m
            gens.append([E[t, k] for k in range(a)])
        moduli.append(ct)
    cdef int n = len(moduli)
    if n == 0:
        return []
    R = np.zeros((n, a + n), dtype=np.int64)
    for i2 in range(n):
        for k in range(a):
            R[i2, k] = gens[i2][k]
        R[i2, a + i2] = _mod(p ** moduli[i2], q)
    vals = _pivot_valuations(R, p, m, q)
    exps = [x for x in vals if x > 0] + [m] * (n - len(vals))
    return sorted(exps)
