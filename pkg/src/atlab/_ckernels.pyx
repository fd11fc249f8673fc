# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled enumeration kernels.

All arithmetic is done modulo word-sized primes in Montgomery form
(R = 2**64).  The caller supplies tables already reduced and converted,
and reconstructs exact integers by the Chinese remainder theorem.
"""

import numpy as np

from libc.stdint cimport int32_t, int64_t, uint8_t, uint64_t

cdef extern from *:
    """
    #include <stdint.h>
    typedef unsigned __int128 atl_u128;

    static inline uint64_t atl_mul(uint64_t a, uint64_t b, uint64_t p, uint64_t ninv) {
        atl_u128 t = (atl_u128)a * b;
        uint64_t m = (uint64_t)t * ninv;
        uint64_t r = (uint64_t)((t + (atl_u128)m * p) >> 64);
        return r >= p ? r - p : r;
    }
    static inline uint64_t atl_add(uint64_t a, uint64_t b, uint64_t p) {
        uint64_t s = a + b;
        return s >= p ? s - p : s;
    }
    static inline int atl_parity(uint64_t x) { return __builtin_parityll(x); }
    static inline int atl_ctz(uint64_t x) { return __builtin_ctzll(x); }
    """
    uint64_t atl_mul(uint64_t a, uint64_t b, uint64_t p, uint64_t ninv) nogil
    uint64_t atl_add(uint64_t a, uint64_t b, uint64_t p) nogil
    int atl_parity(uint64_t x) nogil
    int atl_ctz(uint64_t x) nogil

cdef enum:
    MAXP = 32
    MAXCOLS = 256


def current_sum(const uint64_t[:, ::1] TL, const uint64_t[:, ::1] TH,
                const int64_t[::1] tern_lo, const int64_t[::1] tern_hi, int h,
                const int64_t[::1] eta0, const int64_t[:, ::1] cycles, const int32_t[::1] ncyc,
                const uint64_t[::1] markers, const uint64_t[:, :, ::1] coef,
                const uint8_t[::1] active, const uint64_t[::1] primes, const uint64_t[::1] ninv,
                int64_t lo, int64_t hi):
    """Sum of coef[w, col(eta)] * weight(w, eta) over currents with w in [lo, hi).

    ``eta0[w]`` is one edge set with the requested sources inside ``w`` (or
    -1 when there is none); the remaining ones are reached by adding the
    fundamental cycles ``cycles[w, :ncyc[w]]`` in Gray-code order.
    Returns (Montgomery residues per prime, number of currents visited).
    """
    cdef int np_ = primes.shape[0]
    cdef int nk = markers.shape[0]
    cdef int ncols = 1 << nk
    cdef uint64_t lomask = (<uint64_t>1 << h) - 1
    cdef uint64_t acc[MAXCOLS * MAXP]
    cdef uint64_t tot[MAXP]
    cdef int64_t w, count = 0
    cdef uint64_t eta, g, ng
    cdef int64_t wl, wh, il, ih
    cdef int q, k, col, nc
    if np_ > MAXP or ncols > MAXCOLS:
        raise ValueError("too many primes or markers")
    for q in range(np_):
        tot[q] = 0
    with nogil:
        for w in range(lo, hi):
            if not active[w] or eta0[w] < 0:
                continue
            nc = ncyc[w]
            for k in range(ncols * np_):
                acc[k] = 0
            eta = <uint64_t>eta0[w]
            wl = tern_lo[w & lomask]
            wh = tern_hi[w >> h]
            ng = <uint64_t>1 << nc
            g = 0
            while g < ng:
                if g:
                    eta ^= <uint64_t>cycles[w, atl_ctz(g)]
                col = 0
                for k in range(nk):
                    col |= atl_parity(eta & markers[k]) << k
                il = wl + tern_lo[eta & lomask]
                ih = wh + tern_hi[eta >> h]
                for q in range(np_):
                    acc[col * np_ + q] = atl_add(acc[col * np_ + q],
                                                 atl_mul(TL[q, il], TH[q, ih], primes[q], ninv[q]),
                                                 primes[q])
                count += 1
                g += 1
            for col in range(ncols):
                for q in range(np_):
                    tot[q] = atl_add(tot[q], atl_mul(acc[col * np_ + q], coef[q, w, col], primes[q], ninv[q]),
                                     primes[q])
    out = np.empty(np_, dtype=np.uint64)
    for q in range(np_):
        out[q] = tot[q]
    return out, count


def spin_bins(int nv, const int32_t[::1] eu, const int32_t[::1] ev, const uint64_t[:, ::1] F,
              uint64_t eps, uint64_t epst, const int32_t[::1] ws, const int32_t[::1] wt,
              const uint64_t[::1] primes, const uint64_t[::1] ninv, const uint64_t[::1] one,
              int64_t lo, int64_t hi):
    """Configuration weights binned by the spins at ``ws`` (sigma) and ``wt`` (sigma tilde).

    Configuration c encodes sigma in its low ``nv`` bits and sigma tilde in
    the next ``nv`` bits, a set bit meaning spin -1.  ``F[q, 3j + t]`` is the
    Montgomery residue of the factor of edge j in state t: 0 when the two
    tau-parities disagree, 1 when they agree with epsilon*sigma*sigma' = +1,
    2 when they agree with -1.
    """
    cdef int np_ = primes.shape[0]
    cdef int m = eu.shape[0]
    cdef int ns = ws.shape[0]
    cdef int nt = wt.shape[0]
    cdef int64_t nbins = <int64_t>1 << (ns + nt)
    cdef uint64_t vmask = (<uint64_t>1 << nv) - 1
    out_arr = np.zeros((np_, nbins), dtype=np.uint64)
    cdef uint64_t[:, ::1] out = out_arr
    cdef int64_t c, b
    cdef uint64_t s, st, ds, dt
    cdef uint64_t prod[MAXP]
    cdef int j, q, k, t
    if np_ > MAXP:
        raise ValueError("too many primes")
    with nogil:
        for c in range(lo, hi):
            s = (<uint64_t>c) & vmask
            st = (<uint64_t>c) >> nv
            for q in range(np_):
                prod[q] = one[q]
            for j in range(m):
                ds = ((s >> eu[j]) ^ (s >> ev[j]) ^ (eps >> j)) & 1
                dt = ((st >> eu[j]) ^ (st >> ev[j]) ^ (epst >> j)) & 1
                if ds != dt:
                    t = 0
                elif ds == 0:
                    t = 1
                else:
                    t = 2
                for q in range(np_):
                    prod[q] = atl_mul(prod[q], F[q, 3 * j + t], primes[q], ninv[q])
            b = 0
            for k in range(ns):
                b |= <int64_t>((s >> ws[k]) & 1) << k
            for k in range(nt):
                b |= <int64_t>((st >> wt[k]) & 1) << (ns + k)
            for q in range(np_):
                out[q, b] = atl_add(out[q, b], prod[q], primes[q])
    return out_arr


def scan_trits(int m, const int32_t[::1] eu, const int32_t[::1] ev, uint64_t sources):
    """Visit every (omega, eta) pair with eta inside omega and count those
    whose boundary equals ``sources``.  Plain trit scan, used for throughput
    measurements."""
    cdef uint64_t w, delta, i, n_sub, full = (<uint64_t>1 << m) - 1
    cdef int64_t states = 0, hits = 0
    cdef uint64_t vmask[64]
    cdef int pos[64]
    cdef int j, k, npos
    for j in range(m):
        vmask[j] = (<uint64_t>1 << eu[j]) | (<uint64_t>1 << ev[j])
    with nogil:
        w = 0
        while True:
            npos = 0
            for j in range(m):
                if (w >> j) & 1:
                    pos[npos] = j
                    npos += 1
            n_sub = <uint64_t>1 << npos
            delta = 0
            i = 0
            while i < n_sub:
                if i:
                    delta ^= vmask[pos[atl_ctz(i)]]
                states += 1
                if delta == sources:
                    hits += 1
                i += 1
            if w == full:
                break
            w += 1
    return states, hits
