"""Pure-Python homology kernel over Z/p^m.

Z/p^m is a chain ring: every nonzero element is a unit times a power of p,
so elimination with a minimal-valuation pivot never needs gcd steps.  This
module is the fallback for the compiled ``_zpm_core`` extension and must
stay behaviourally identical to it.
"""


def valuation(x, p, m):
    """p-adic valuation of ``x`` in Z/p^m, with ``m`` standing in for zero."""
    x %= p**m
    if x == 0:
        return m
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _unit_inverse(u, q):
    return pow(u, -1, q)


def _find_pivot(A, t, rows, cols, p, m):
    best = (m, -1, -1)
    for i in range(t, rows):
        row = A[i]
        for j in range(t, cols):
            if row[j]:
                v = valuation(row[j], p, m)
                if v < best[0]:
                    best = (v, i, j)
                    if v == 0:
                        return best
    return best


def pivot_valuations(A, p, m):
    """Valuations of the diagonal of the Smith form of ``A`` over Z/p^m.

    ``A`` is a list of rows (it is copied).  Only nonzero pivots are listed.
    """
    q = p**m
    A = [[x % q for x in row] for row in A]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    out = []
    t = 0
    while t < min(rows, cols):
        v, i, j = _find_pivot(A, t, rows, cols, p, m)
        if i < 0:
            break
        A[t], A[i] = A[i], A[t]
        if j != t:
            for row in A:
                row[t], row[j] = row[j], row[t]
        piv = A[t][t]
        pv = p**v
        uinv = _unit_inverse(piv // pv, q)
        for i2 in range(t + 1, rows):
            a = A[i2][t]
            if a:
                c = (a // pv) * uinv % q
                r2, rt = A[i2], A[t]
                for j2 in range(t, cols):
                    r2[j2] = (r2[j2] - c * rt[j2]) % q
        # Row t beyond the pivot only influences columns that are discarded
        # for valuation purposes once the column below is clear.
        out.append(v)
        for j2 in range(t + 1, cols):
            A[t][j2] = 0
        t += 1
    return out


def homology_exponents(d_in, d_out, n_mid, p, m):
    """Exponents ``e`` with ker(d_out)/im(d_in) = sum of Z/p^e, ascending.

    ``d_in`` is ``n_mid x a`` and ``d_out`` is ``c x n_mid``, both as lists of
    rows over Z/p^m.  Raises ``ValueError`` if ``d_out * d_in != 0``.
    """
    q = p**m
    b = n_mid
    a = len(d_in[0]) if d_in else 0
    c = len(d_out)
    D = [[x % q for x in row] for row in d_out]
    # E holds Q^{-1} d_in while column operations Q act on d_out.
    E = [[x % q for x in row] for row in d_in] if a else [[] for _ in range(b)]
    pivots = []
    t = 0
    while t < min(c, b):
        v, i, j = _find_pivot(D, t, c, b, p, m)
        if i < 0:
            break
        D[t], D[i] = D[i], D[t]
        if j != t:
            for row in D:
                row[t], row[j] = row[j], row[t]
            E[t], E[j] = E[j], E[t]
        pv = p**v
        u = D[t][t] // pv
        uinv = _unit_inverse(u, q)
        # scale column t by uinv; E row t scales by u
        for row in D:
            row[t] = row[t] * uinv % q
        E[t] = [x * u % q for x in E[t]]
        for i2 in range(c):
            if i2 != t and D[i2][t]:
                f = D[i2][t] // pv
                r2, rt = D[i2], D[t]
                for j2 in range(b):
                    r2[j2] = (r2[j2] - f * rt[j2]) % q
        for j2 in range(t + 1, b):
            f = D[t][j2]
            if f:
                f //= pv
                for row in D:
                    row[j2] = (row[j2] - f * row[t]) % q
                # column j2 -= f * column t  <=>  row t of E += f * row j2
                Et, Ej = E[t], E[j2]
                for k in range(a):
                    Et[k] = (Et[k] + f * Ej[k]) % q
        pivots.append(v)
        t += 1
    moduli = []
    gens = []
    for t in range(b):
        if t < len(pivots):
            ct = pivots[t]
            if ct == 0:
                if any(E[t]):
                    raise ValueError("d_out * d_in is not zero")
                continue
            shift = p ** (m - ct)
            if any(x % shift for x in E[t]):
                raise ValueError("d_out * d_in is not zero")
            gens.append([(x // shift) % p**ct for x in E[t]])
        else:
            ct = m
            gens.append(list(E[t]))
        moduli.append(ct)
    n = len(moduli)
    if n == 0:
        return []
    rel = [gens[i] + [p ** moduli[i] if k == i else 0 for k in range(n)] for i in range(n)]
    vals = pivot_valuations(rel, p, m)
    exps = [v for v in vals if v > 0] + [m] * (n - len(vals))
    return sorted(exps)
