"""Pure-Python elimination kernels on lists of rows of Python ints.

These are the reference implementation; ``_ckernels`` mirrors them step for
step on int64 storage so both backends return identical results.
"""


def _eye(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def snf(a, m, n, track):
    """Smith normal form by min-|pivot| row/column elimination, in place on ``a``.

    Returns ``(diag, U, Uinv, V)`` with ``U @ A @ V == diag(diag)``.  The three
    transforms are ``None`` when ``track`` is false.
    """
    if track:
        U, Ui, V = _eye(m), _eye(m), _eye(n)
    else:
        U = Ui = V = None
    t = 0
    while t < m and t < n:
        bi = bj = -1
        bv = 0
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v:
                    av = -v if v < 0 else v
                    if bi < 0 or av < bv:
                        bi, bj, bv = i, j, av
                        if av == 1:
                            break
            if bv == 1:
                break
        if bi < 0:
            break
        _swap_rows(a, U, Ui, t, bi)
        _swap_cols(a, V, t, bj)
        while True:
            p = a[t][t]
            dirty = False
            prow = a[t]
            for i in range(t + 1, m):
                v = a[i][t]
                if v:
                    q = v // p
                    row = a[i]
                    for j in range(t, n):
                        if prow[j]:
                            row[j] -= q * prow[j]
                    if track:
                        ur, ut = U[i], U[t]
                        for j in range(m):
                            if ut[j]:
                                ur[j] -= q * ut[j]
                        for r in Ui:
                            if r[i]:
                                r[t] += q * r[i]
                    if row[t]:
                        dirty = True
            for j in range(t + 1, n):
                v = prow[j]
                if v:
                    q = v // p
                    for i in range(t, m):
                        row = a[i]
                        if row[t]:
                            row[j] -= q * row[t]
                    if track:
                        for r in V:
                            if r[t]:
                                r[j] -= q * r[t]
                    if prow[j]:
                        dirty = True
            if dirty:
                bi = bj = -1
                bv = 0
                for i in range(t + 1, m):
                    v = a[i][t]
                    if v and (bi < 0 or abs(v) < bv):
                        bi, bj, bv = i, t, abs(v)
                for j in range(t + 1, n):
                    v = prow[j]
                    if v and (bi < 0 or abs(v) < bv):
                        bi, bj, bv = t, j, abs(v)
                _swap_rows(a, U, Ui, t, bi)
                _swap_cols(a, V, t, bj)
                continue
            bad = -1
            for i in range(t + 1, m):
                row = a[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            # fold the offending row into the pivot row; the next sweep
            # leaves a remainder smaller than |p|
            src = a[bad]
            for j in range(t, n):
                if src[j]:
                    prow[j] += src[j]
            if track:
                ut, ub = U[t], U[bad]
                for j in range(m):
                    if ub[j]:
                        ut[j] += ub[j]
                for r in Ui:
                    if r[t]:
                        r[bad] -= r[t]
        if a[t][t] < 0:
            a[t] = [-v for v in a[t]]
            if track:
                U[t] = [-v for v in U[t]]
                for r in Ui:
                    r[t] = -r[t]
        t += 1
    diag = [a[i][i] for i in range(min(m, n))]
    return diag, U, Ui, V


def _swap_rows(a, U, Ui, i, j):
    if i == j:
        return
    a[i], a[j] = a[j], a[i]
    if U is not None:
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]


def _swap_cols(a, V, i, j):
    if i == j:
        return
    for r in a:
        r[i], r[j] = r[j], r[i]
    if V is not None:
        for r in V:
            r[i], r[j] = r[j], r[i]


def kernel(a, m, n):
    """Integer kernel basis of the ``m x n`` matrix ``a``.

    Row-reduces ``[A^T | I]``; the identity part of the rows whose ``A^T``
    part vanishes is a basis of ``ker A`` that extends to a basis of ``Z^n``,
    hence primitive.
    """
    work = [[a[i][j] for i in range(m)] for j in range(n)]
    tag = _eye(n)
    r = 0
    for col in range(m):
        if r == n:
            break
        while True:
            piv = -1
            pv = 0
            for i in range(r, n):
                v = work[i][col]
                if v and (piv < 0 or abs(v) < pv):
                    piv, pv = i, abs(v)
            if piv < 0:
                break
            work[r], work[piv] = work[piv], work[r]
            tag[r], tag[piv] = tag[piv], tag[r]
            p = work[r][col]
            wr, tr = work[r], tag[r]
            clean = True
            for i in range(r + 1, n):
                v = work[i][col]
                if v:
                    q = v // p
                    wi, ti = work[i], tag[i]
                    for j in range(col, m):
                        if wr[j]:
                            wi[j] -= q * wr[j]
                    for j in range(n):
                        if tr[j]:
                            ti[j] -= q * tr[j]
                    if wi[col]:
                        clean = False
            if clean:
                r += 1
                break
    return tag[r:]
