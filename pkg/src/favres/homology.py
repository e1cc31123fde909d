"""Homology of finite complexes of free Z/p^m-modules.

Matrices are lists of rows.  A map ``A^a -> A^b`` is a ``b x a`` matrix; an
empty module on either side is represented by a matrix with the matching
zero dimension, which ``shape`` arguments disambiguate.
"""

from . import kernels


class CompositionError(ValueError):
    """Raised when ``d_out * d_in`` does not vanish over Z/p^m."""


def _check_composable(d_in, d_out, n_mid, p, m):
    q = p**m
    a = len(d_in[0]) if d_in else 0
    for row in d_out:
        for k in range(a):
            if sum(row[j] * d_in[j][k] for j in range(n_mid)) % q:
                raise CompositionError("d_out * d_in != 0 over Z/%d" % q)


def homology_over_Zpm(d_in, d_out, p, m, n_mid=None, check=True):
    """Elementary divisors of ``ker d_out / im d_in`` over Z/p^m.

    Returns the ascending list ``[p**e1, p**e2, ...]``; the module is the
    direct sum of the cyclic groups ``Z/p**ei``.  An empty list means the
    homology vanishes.
    """
    if n_mid is None:
        n_mid = len(d_in) if d_in else (len(d_out[0]) if d_out else 0)
    if check:
        _check_composable(d_in, d_out, n_mid, p, m)
    try:
        exps = kernels.homology_exponents(d_in, d_out, n_mid, p, m)
    except ValueError as exc:
        raise CompositionError(str(exc)) from None
    return [p**e for e in exps]


# -- integer Smith normal form route ---------------------------------------


def smith_diagonal(A):
    """Nonzero diagonal of the Smith normal form of an integer matrix."""
    A = [list(row) for row in A]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    diag = []
    t = 0
    while t < min(rows, cols):
        nz = [(abs(A[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            piv = A[t][t]
            dirty = False
            for i2 in range(t + 1, rows):
                if A[i2][t]:
                    qt = A[i2][t] // piv
                    A[i2] = [x - qt * y for x, y in zip(A[i2], A[t])]
                    if A[i2][t]:
                        dirty = True
            for j2 in range(t + 1, cols):
                if A[t][j2]:
                    qt = A[t][j2] // piv
                    for row in A:
                        row[j2] -= qt * row[t]
                    if A[t][j2]:
                        dirty = True
            if not dirty:
                # enforce divisibility of the remaining block
                bad = next(
                    ((i2, j2) for i2 in range(t + 1, rows) for j2 in range(t + 1, cols) if A[i2][j2] % piv),
                    None,
                )
                if bad is None:
                    break
                A[t] = [x + y for x, y in zip(A[t], A[bad[0]])]
                continue
            nz = [(abs(A[i2][j2]), i2, j2) for i2 in range(t, rows) for j2 in (t,) if A[i2][j2]]
            nz += [(abs(A[t][j2]), t, j2) for j2 in range(t + 1, cols) if A[t][j2]]
            _, i, j = min(nz)
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def _integer_kernel_basis(A, ncols):
    """Columns spanning the integer kernel of ``A`` (Hermite-style column ops)."""
    rows = len(A)
    M = [list(r) for r in A] + [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    col = 0
    for r in range(rows):
        while True:
            nz = [j for j in range(col, ncols) if M[r][j]]
            if len(nz) <= 1:
                break
            j0 = min(nz, key=lambda j: abs(M[r][j]))
            for j in nz:
                if j != j0:
                    qt = M[r][j] // M[r][j0]
                    for row in M:
                        row[j] -= qt * row[j0]
        nz = [j for j in range(col, ncols) if M[r][j]]
        if nz:
            j0 = nz[0]
            for row in M:
                row[col], row[j0] = row[j0], row[col]
            col += 1
    return [[M[rows + i][j] for i in range(ncols)] for j in range(col, ncols)]


def homology_integer_snf(d_in, d_out, p, m, n_mid=None):
    """Same contract as :func:`homology_over_Zpm`, computed over the integers.

    The cycles are the lattice ``K = {x : d_out x = 0 mod p^m}`` and the
    boundaries ``I = im d_in + p^m Z^b``; the homology ``K/I`` is read off
    the Smith form of ``I`` written in a basis of ``K``.
    """
    from fractions import Fraction

    q = p**m
    if n_mid is None:
        n_mid = len(d_in) if d_in else (len(d_out[0]) if d_out else 0)
    b = n_mid
    if b == 0:
        return []
    c = len(d_out)
    a = len(d_in[0]) if d_in else 0
    # K = projection of ker [d_out | q I_c] onto the first b coordinates
    if c:
        big = [list(d_out[i]) + [q if k == i else 0 for k in range(c)] for i in range(c)]
        kb = _integer_kernel_basis(big, b + c)
        gens = [v[:b] for v in kb]
    else:
        gens = [[1 if i == j else 0 for i in range(b)] for j in range(b)]
    # reduce the K generators to a basis (b independent vectors) via HNF rows
    basis = _row_hnf(gens, b)
    # express boundary generators in the K basis
    bnd = [[d_in[i][k] for i in range(b)] for k in range(a)]
    bnd += [[q if i == j else 0 for i in range(b)] for j in range(b)]
    coords = _solve_in_basis(basis, bnd, Fraction)
    divs = smith_diagonal(coords)
    out = [d for d in divs if d != 1]
    out += [0] * (len(basis) - len(divs))
    if any(d == 0 for d in out):
        raise CompositionError("boundaries do not have full rank in cycles")
    return sorted(out)


def _row_hnf(vectors, n):
    M = [list(v) for v in vectors if any(v)]
    out = []
    col = 0
    while M and col < n:
        nz = [r for r in M if r[col]]
        while len(nz) > 1:
            r0 = min(nz, key=lambda r: abs(r[col]))
            for r in nz:
                if r is not r0:
                    qt = r[col] // r0[col]
                    for j in range(n):
                        r[j] -= qt * r0[j]
            nz = [r for r in M if r[col]]
        if nz:
            r0 = nz[0]
            out.append(r0)
            M = [r for r in M if r is not r0 and any(r)]
        col += 1
    return out


def _solve_in_basis(basis, targets, Fraction):
    n = len(basis)
    dim = len(basis[0])
    # basis rows are in echelon form; solve by forward substitution
    pivcols = [next(j for j in range(dim) if row[j]) for row in basis]
    result = []
    for t in targets:
        rem = [Fraction(x) for x in t]
        coef = []
        for row, pc in zip(basis, pivcols):
            c = rem[pc] / row[pc]
            if c.denominator != 1:
                raise CompositionError("boundary not contained in cycles")
            coef.append(int(c))
            for j in range(dim):
                rem[j] -= c * row[j]
        if any(rem):
            raise CompositionError("boundary not contained in cycles")
        result.append(coef)
    # columns = targets, rows = basis coordinates
    return [[result[k][i] for k in range(len(targets))] for i in range(n)]


# -- linear systems over Z/p^m ---------------------------------------------


def solve_mod_pm(A, b, p, m):
    """One solution of ``A x = b`` over Z/p^m, or ``None`` if none exists.

    Row reduction with minimal-valuation pivots; every other entry of a
    pivot row is divisible by its pivot, so back substitution only needs
    ``b_t`` to be divisible by the pivot's power of p.  Free variables are
    set to zero.
    """
    q = p**m
    rows = len(A)
    cols = len(A[0]) if rows else 0
    M = [[x % q for x in row] + [bi % q] for row, bi in zip(A, b)]
    pivots = []  # (row, col, v)
    used_rows, used_cols = set(), set()
    while True:
        best = None
        for i in range(rows):
            if i in used_rows:
                continue
            for j in range(cols):
                if j in used_cols or not M[i][j]:
                    continue
                v = _valuation(M[i][j], p, m)
                if best is None or v < best[0]:
                    best = (v, i, j)
                    if v == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, j = best
        u = M[i][j] // p**v
        inv = pow(u, -1, q)
        M[i] = [(x * inv) % q for x in M[i]]
        for r in range(rows):
            if r != i and M[r][j]:
                f = M[r][j] // p**v
                M[r] = [(x - f * y) % q for x, y in zip(M[r], M[i])]
        used_rows.add(i)
        used_cols.add(j)
        pivots.append((i, j, v))
    for i in range(rows):
        if i not in used_rows and M[i][cols]:
            return None
    x = [0] * cols
    for i, j, v in reversed(pivots):
        rhs = (M[i][cols] - sum(M[i][c] * x[c] for c in range(cols) if c != j)) % q
        if rhs % p**v:
            return None
        x[j] = (rhs // p**v) % q
    return x


def _valuation(x, p, m):
    v = 0
    while v < m and x % p == 0:
        x //= p
        v += 1
    return v
