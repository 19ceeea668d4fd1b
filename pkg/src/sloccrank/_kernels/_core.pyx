# cython: language_level=3
"""Compiled kernels for exact linear algebra over Z[i, sqrt2].

Mirror of ``pure.py``: a scalar is a quadruple of Python ints standing
for ``a + b*i + c*sqrt2 + d*i*sqrt2``.  The arbitrary-precision
arithmetic stays on PyObjects; the win over the pure twin comes from
keeping the four components in parallel flat lists, so the inner loops
allocate no intermediate tuples.  Keep the two files in sync.
"""


def bareiss(entries, Py_ssize_t nrows, Py_ssize_t ncols):
    """Fraction-free row reduction; see the pure twin for the contract."""
    cdef Py_ssize_t size = nrows * ncols
    cdef list ma = [0] * size, mb = [0] * size, mc = [0] * size, md = [0] * size
    cdef Py_ssize_t idx
    for idx in range(size):
        e = entries[idx]
        ma[idx] = e[0]
        mb[idx] = e[1]
        mc[idx] = e[2]
        md[idx] = e[3]

    cdef Py_ssize_t rank = 0, r = 0, c, i, j, p, rb, ib, pb
    cdef int sign = 1
    cdef bint skipped = False
    cdef object prev_norm = 1
    # adjoint of the previous pivot (identity at the start)
    cdef object aj_a = 1, aj_b = 0, aj_c = 0, aj_d = 0
    cdef object pa, pb_, pc, pd, xa, xb, xc, xd, ya, yb, yc, yd
    cdef object ta, tb, tc, td, ua, ub, uc, ud, q, rem
    cdef object la, lb, lc, ld  # last pivot
    la, lb, lc, ld = 1, 0, 0, 0

    for c in range(ncols):
        if r >= nrows:
            break
        p = -1
        for i in range(r, nrows):
            idx = i * ncols + c
            if ma[idx] or mb[idx] or mc[idx] or md[idx]:
                p = i
                break
        if p < 0:
            skipped = True
            continue
        if p != r:
            rb = r * ncols
            pb = p * ncols
            for j in range(c, ncols):
                ma[pb + j], ma[rb + j] = ma[rb + j], ma[pb + j]
                mb[pb + j], mb[rb + j] = mb[rb + j], mb[pb + j]
                mc[pb + j], mc[rb + j] = mc[rb + j], mc[pb + j]
                md[pb + j], md[rb + j] = md[rb + j], md[pb + j]
            sign = -sign
        rb = r * ncols
        pa = ma[rb + c]
        pb_ = mb[rb + c]
        pc = mc[rb + c]
        pd = md[rb + c]
        for i in range(r + 1, nrows):
            ib = i * ncols
            xa = ma[ib + c]
            xb = mb[ib + c]
            xc = mc[ib + c]
            xd = md[ib + c]
            for j in range(c + 1, ncols):
                ya = ma[ib + j]
                yb = mb[ib + j]
                yc = mc[ib + j]
                yd = md[ib + j]
                # t = piv * y
                ta = pa * ya - pb_ * yb + 2 * (pc * yc - pd * yd)
                tb = pa * yb + pb_ * ya + 2 * (pc * yd + pd * yc)
                tc = pa * yc + pc * ya - pb_ * yd - pd * yb
                td = pa * yd + pd * ya + pb_ * yc + pc * yb
                # u = x * row[j]; reuse y slots for the row entry
                ya = ma[rb + j]
                yb = mb[rb + j]
                yc = mc[rb + j]
                yd = md[rb + j]
                ua = xa * ya - xb * yb + 2 * (xc * yc - xd * yd)
                ub = xa * yb + xb * ya + 2 * (xc * yd + xd * yc)
                uc = xa * yc + xc * ya - xb * yd - xd * yb
                ud = xa * yd + xd * ya + xb * yc + xc * yb
                ta = ta - ua
                tb = tb - ub
                tc = tc - uc
                td = td - ud
                # divide (ta..td) * adjoint(prev pivot) by prev_norm, exactly
                ua = ta * aj_a - tb * aj_b + 2 * (tc * aj_c - td * aj_d)
                ub = ta * aj_b + tb * aj_a + 2 * (tc * aj_d + td * aj_c)
                uc = ta * aj_c + tc * aj_a - tb * aj_d - td * aj_b
                ud = ta * aj_d + td * aj_a + tb * aj_c + tc * aj_b
                q, rem = divmod(ua, prev_norm)
                if rem:
                    raise ArithmeticError("inexact division in fraction-free elimination")
                ma[ib + j] = q
                q, rem = divmod(ub, prev_norm)
                if rem:
                    raise ArithmeticError("inexact division in fraction-free elimination")
                mb[ib + j] = q
                q, rem = divmod(uc, prev_norm)
                if rem:
                    raise ArithmeticError("inexact division in fraction-free elimination")
                mc[ib + j] = q
                q, rem = divmod(ud, prev_norm)
                if rem:
                    raise ArithmeticError("inexact division in fraction-free elimination")
                md[ib + j] = q
            ma[ib + c] = 0
            mb[ib + c] = 0
            mc[ib + c] = 0
            md[ib + c] = 0
        # adjoint of the new pivot: conj_i(p) * conj_s(p) * conj_is(p).
        # The first product has only rational and i*sqrt2 parts (ta, td).
        ta = pa * pa + pb_ * pb_ - 2 * (pc * pc + pd * pd)
        td = 2 * (pb_ * pc - pa * pd)
        aj_a = ta * pa - 2 * (td * pd)
        aj_b = -(ta * pb_) - 2 * (td * pc)
        aj_c = td * pb_ - ta * pc
        aj_d = ta * pd + td * pa
        # norm = p * adj(p), a plain integer by construction
        prev_norm = pa * aj_a - pb_ * aj_b + 2 * (pc * aj_c - pd * aj_d)
        ta = pa * aj_b + pb_ * aj_a + 2 * (pc * aj_d + pd * aj_c)
        tb = pa * aj_c + pc * aj_a - pb_ * aj_d - pd * aj_b
        tc = pa * aj_d + pd * aj_a + pb_ * aj_c + pc * aj_b
        if ta or tb or tc:
            raise ArithmeticError("norm is not rational")
        la, lb, lc, ld = pa, pb_, pc, pd
        rank += 1
        r += 1

    if nrows == ncols and rank == nrows and not skipped:
        if sign > 0:
            det = (la, lb, lc, ld)
        else:
            det = (-la, -lb, -lc, -ld)
    else:
        det = (0, 0, 0, 0)
    return rank, det


def apply_single_qubit(amps, Py_ssize_t n, Py_ssize_t target, op):
    """Apply a 2x2 quadruple operator to one qubit; see the pure twin."""
    cdef object o00a, o00b, o00c, o00d, o01a, o01b, o01c, o01d
    cdef object o10a, o10b, o10c, o10d, o11a, o11b, o11c, o11d
    o00a, o00b, o00c, o00d = op[0]
    o01a, o01b, o01c, o01d = op[1]
    o10a, o10b, o10c, o10d = op[2]
    o11a, o11b, o11c, o11d = op[3]
    cdef list out = list(amps)
    cdef Py_ssize_t bit = 1 << (n - 1 - target)
    cdef Py_ssize_t w, w1, size = 1 << n
    cdef object xa, xb, xc, xd, ya, yb, yc, yd
    for w in range(size):
        if w & bit:
            continue
        w1 = w | bit
        xa, xb, xc, xd = out[w]
        ya, yb, yc, yd = out[w1]
        out[w] = (
            o00a * xa - o00b * xb + 2 * (o00c * xc - o00d * xd)
            + o01a * ya - o01b * yb + 2 * (o01c * yc - o01d * yd),
            o00a * xb + o00b * xa + 2 * (o00c * xd + o00d * xc)
            + o01a * yb + o01b * ya + 2 * (o01c * yd + o01d * yc),
            o00a * xc + o00c * xa - o00b * xd - o00d * xb
            + o01a * yc + o01c * ya - o01b * yd - o01d * yb,
            o00a * xd + o00d * xa + o00b * xc + o00c * xb
            + o01a * yd + o01d * ya + o01b * yc + o01c * yb,
        )
        out[w1] = (
            o10a * xa - o10b * xb + 2 * (o10c * xc - o10d * xd)
            + o11a * ya - o11b * yb + 2 * (o11c * yc - o11d * yd),
            o10a * xb + o10b * xa + 2 * (o10c * xd + o10d * xc)
            + o11a * yb + o11b * ya + 2 * (o11c * yd + o11d * yc),
            o10a * xc + o10c * xa - o10b * xd - o10d * xb
            + o11a * yc + o11c * ya - o11b * yd - o11d * yb,
            o10a * xd + o10d * xa + o10b * xc + o10c * xb
            + o11a * yd + o11d * ya + o11b * yc + o11c * yb,
        )
    return out
