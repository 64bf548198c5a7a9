# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""int64 elimination kernels.

Step-for-step twins of ``_pure.snf`` and ``_pure.kernel``.  Every multiply and
add is overflow-checked; on overflow the kernel raises ``OverflowError`` and
the caller reruns the pure bigint version.
"""
import numpy as np

cdef extern from *:
    """
    #include <limits.h>
    static inline int ck_axpy(long long *x, long long q, long long y) {
        long long t;
        if (__builtin_mul_overflow(q, y, &t)) return 1;
        if (__builtin_sub_overflow(*x, t, x)) return 1;
        return 0;
    }
    static inline int ck_add(long long *x, long long y) {
        return __builtin_add_overflow(*x, y, x);
    }
    static inline long long floordiv(long long a, long long b) {
        long long q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
        return q;
    }
    """
    int ck_axpy(long long *x, long long q, long long y) nogil
    int ck_add(long long *x, long long y) nogil
    long long floordiv(long long a, long long b) nogil
    long long LLONG_MIN


cdef inline long long iabs(long long v) noexcept nogil:
    return -v if v < 0 else v


cdef inline void swap_rows(long long[:, ::1] a, Py_ssize_t i, Py_ssize_t j) noexcept nogil:
    cdef Py_ssize_t k
    cdef long long tmp
    if i == j:
        return
    for k in range(a.shape[1]):
        tmp = a[i, k]
        a[i, k] = a[j, k]
        a[j, k] = tmp


cdef inline void swap_cols(long long[:, ::1] a, Py_ssize_t i, Py_ssize_t j) noexcept nogil:
    cdef Py_ssize_t k
    cdef long long tmp
    if i == j:
        return
    for k in range(a.shape[0]):
        tmp = a[k, i]
        a[k, i] = a[k, j]
        a[k, j] = tmp


cdef int _snf(long long[:, ::1] a, long long[:, ::1] U, long long[:, ::1] Ui,
              long long[:, ::1] V, bint track) noexcept nogil:
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef Py_ssize_t t = 0, i, j, r, bi, bj, bad
    cdef long long v, av, bv, p, q
    cdef bint dirty
    while t < m and t < n:
        bi = -1
        bj = -1
        bv = 0
        for i in range(t, m):
            for j in range(t, n):
                v = a[i, j]
                if v:
                    if v == LLONG_MIN:
                        return 1
                    av = iabs(v)
                    if bi < 0 or av < bv:
                        bi = i
                        bj = j
                        bv = av
                        if av == 1:
                            break
            if bv == 1:
                break
        if bi < 0:
            break
        swap_rows(a, t, bi)
        swap_cols(a, t, bj)
        if track:
            swap_rows(U, t, bi)
            swap_cols(Ui, t, bi)
            swap_cols(V, t, bj)
        while True:
            p = a[t, t]
            dirty = False
            for i in range(t + 1, m):
                v = a[i, t]
                if v:
                    q = floordiv(v, p)
                    for j in range(t, n):
                        if a[t, j]:
                            if ck_axpy(&a[i, j], q, a[t, j]):
                                return 1
                    if track:
                        for j in range(m):
                            if U[t, j]:
                                if ck_axpy(&U[i, j], q, U[t, j]):
                                    return 1
                        for r in range(m):
                            if Ui[r, i]:
                                if ck_axpy(&Ui[r, t], -q, Ui[r, i]):
                                    return 1
                    if a[i, t]:
                        dirty = True
            for j in range(t + 1, n):
                v = a[t, j]
                if v:
                    q = floordiv(v, p)
                    for i in range(t, m):
                        if a[i, t]:
                            if ck_axpy(&a[i, j], q, a[i, t]):
                                return 1
                    if track:
                        for r in range(n):
                            if V[r, t]:
                                if ck_axpy(&V[r, j], q, V[r, t]):
                                    return 1
                    if a[t, j]:
                        dirty = True
            if dirty:
                bi = -1
                bj = -1
                bv = 0
                for i in range(t + 1, m):
                    v = a[i, t]
                    if v:
                        if v == LLONG_MIN:
                            return 1
                        if bi < 0 or iabs(v) < bv:
                            bi = i
                            bj = t
                            bv = iabs(v)
                for j in range(t + 1, n):
                    v = a[t, j]
                    if v:
                        if v == LLONG_MIN:
                            return 1
                        if bi < 0 or iabs(v) < bv:
                            bi = t
                            bj = j
                            bv = iabs(v)
                swap_rows(a, t, bi)
                swap_cols(a, t, bj)
                if track:
                    swap_rows(U, t, bi)
                    swap_cols(Ui, t, bi)
                    swap_cols(V, t, bj)
                continue
            bad = -1
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i, j] % p:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            for j in range(t, n):
                if a[bad, j]:
                    if ck_add(&a[t, j], a[bad, j]):
                        return 1
            if track:
                for j in range(m):
                    if U[bad, j]:
                        if ck_add(&U[t, j], U[bad, j]):
                            return 1
                for r in range(m):
                    if Ui[r, t]:
                        if ck_axpy(&Ui[r, bad], 1, Ui[r, t]):
                            return 1
        if a[t, t] < 0:
            for j in range(n):
                if a[t, j] == LLONG_MIN:
                    return 1
                a[t, j] = -a[t, j]
            if track:
                for j in range(m):
                    if U[t, j] == LLONG_MIN or Ui[j, t] == LLONG_MIN:
                        return 1
                    U[t, j] = -U[t, j]
                    Ui[j, t] = -Ui[j, t]
        t += 1
    return 0


def snf(a, bint track):
    """Run the elimination on a copy of the int64 matrix ``a``."""
    cdef long long[:, ::1] A = np.array(a, dtype=np.int64, order="C", copy=True)
    cdef Py_ssize_t m = A.shape[0], n = A.shape[1]
    U = np.eye(m, dtype=np.int64) if track else np.zeros((0, 0), dtype=np.int64)
    Ui = np.eye(m, dtype=np.int64) if track else np.zeros((0, 0), dtype=np.int64)
    V = np.eye(n, dtype=np.int64) if track else np.zeros((0, 0), dtype=np.int64)
    cdef long long[:, ::1] Um = U, Uim = Ui, Vm = V
    cdef int status
    with nogil:
        status = _snf(A, Um, Uim, Vm, track)
    if status:
        raise OverflowError("int64 overflow in snf")
    Anp = np.asarray(A)
    diag = [int(Anp[i, i]) for i in range(min(m, n))]
    if track:
        return diag, U, Ui, V
    return diag, None, None, None


cdef int _kernel(long long[:, ::1] work, long long[:, ::1] tag, Py_ssize_t *rank) noexcept nogil:
    cdef Py_ssize_t n = work.shape[0], m = work.shape[1]
    cdef Py_ssize_t r = 0, col, i, j, piv
    cdef long long v, pv, p, q
    cdef bint clean
    for col in range(m):
        if r == n:
            break
        while True:
            piv = -1
            pv = 0
            for i in range(r, n):
                v = work[i, col]
                if v:
                    if v == LLONG_MIN:
                        return 1
                    if piv < 0 or iabs(v) < pv:
                        piv = i
                        pv = iabs(v)
            if piv < 0:
                break
            swap_rows(work, r, piv)
            swap_rows(tag, r, piv)
            p = work[r, col]
            clean = True
            for i in range(r + 1, n):
                v = work[i, col]
                if v:
                    q = floordiv(v, p)
                    for j in range(col, m):
                        if work[r, j]:
                            if ck_axpy(&work[i, j], q, work[r, j]):
                                return 1
                    for j in range(n):
                        if tag[r, j]:
                            if ck_axpy(&tag[i, j], q, tag[r, j]):
                                return 1
                    if work[i, col]:
                        clean = False
            if clean:
                r += 1
                break
    rank[0] = r
    return 0


def kernel(a):
    """Kernel basis rows of the int64 matrix ``a`` (shape m x n)."""
    arr = np.asarray(a, dtype=np.int64)
    cdef long long[:, ::1] work = np.ascontiguousarray(arr.T)
    cdef Py_ssize_t n = arr.shape[1]
    tag_np = np.eye(n, dtype=np.int64)
    cdef long long[:, ::1] tag = tag_np
    cdef Py_ssize_t rank = 0
    cdef int status
    with nogil:
        status = _kernel(work, tag, &rank)
    if status:
        raise OverflowError("int64 overflow in kernel")
    return tag_np[rank:]
