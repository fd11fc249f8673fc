"""Pure-Python versions of the compiled kernels.

Same algorithms as ``_ckernels`` but over plain Python numbers, so they
work for exact integers, Fractions and floats alike.  Tables are flat
sequences instead of per-prime arrays.
"""


def current_sum(TL, TH, tern_lo, tern_hi, h, eta0, cycles, ncyc, markers, coef, active, lo, hi):
    lomask = (1 << h) - 1
    nk = len(markers)
    total, count = 0, 0
    for w in range(lo, hi):
        e0 = int(eta0[w])
        if not active[w] or e0 < 0:
            continue
        nc = int(ncyc[w])
        cyc = [int(c) for c in cycles[w][:nc]]
        acc = [0] * (1 << nk)
        eta = e0
        wl = tern_lo[w & lomask]
        wh = tern_hi[w >> h]
        for g in range(1 << nc):
            if g:
                eta ^= cyc[(g & -g).bit_length() - 1]
            col = 0
            for k in range(nk):
                col |= ((eta & markers[k]).bit_count() & 1) << k
            acc[col] += TL[wl + tern_lo[eta & lomask]] * TH[wh + tern_hi[eta >> h]]
            count += 1
        row = coef[w]
        for col in range(1 << nk):
            c = int(row[col])
            if c:
                total += c * acc[col]
    return total, count


def spin_bins(nv, eu, ev, F, eps, epst, ws, wt, lo, hi):
    m = len(eu)
    vmask = (1 << nv) - 1
    out = [0] * (1 << (len(ws) + len(wt)))
    ns = len(ws)
    for c in range(lo, hi):
        s = c & vmask
        st = c >> nv
        prod = 1
        for j in range(m):
            ds = ((s >> eu[j]) ^ (s >> ev[j]) ^ (eps >> j)) & 1
            dt = ((st >> eu[j]) ^ (st >> ev[j]) ^ (epst >> j)) & 1
            t = 0 if ds != dt else (1 if ds == 0 else 2)
            prod *= F[3 * j + t]
            if not prod:
                break
        if not prod:
            continue
        b = 0
        for k, v in enumerate(ws):
            b |= ((s >> v) & 1) << k
        for k, v in enumerate(wt):
            b |= ((st >> v) & 1) << (ns + k)
        out[b] += prod
    return out


def scan_trits(m, eu, ev, sources):
    vm = [(1 << eu[j]) | (1 << ev[j]) for j in range(m)]
    states = hits = 0
    for w in range(1 << m):
        pos = [j for j in range(m) if w >> j & 1]
        delta = 0
        for i in range(1 << len(pos)):
            if i:
                delta ^= vm[pos[(i & -i).bit_length() - 1]]
            states += 1
            if delta == sources:
                hits += 1
    return states, hits
