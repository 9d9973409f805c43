"""Brute-force composite-space oracle for the fragmented-model operators.

Builds every operator from explicit configuration lists with numpy and prints
the numbers that the Rust tests freeze.  Run: python3 oracles/superham_oracle.py
"""
import itertools
import math

import numpy as np


def configs(m, L):
    return list(itertools.product(range(m), repeat=L))


def index(c, m):
    i = 0
    for s in c:
        i = i * m + s
    return i


def rk_laplacian(m, L, pair_list):
    """pair_list: iterable of (weight, config_a, config_b) on the full chain."""
    n = m ** L
    H = np.zeros((n, n))
    for w, a, b in pair_list:
        ia, ib = index(a, m), index(b, m)
        H[ia, ia] += w
        H[ib, ib] += w
        H[ia, ib] -= w
        H[ib, ia] -= w
    return H


def window_pairs(m, L, support_offsets, local_pairs, weight):
    out = []
    span = max(support_offsets) + 1
    for i in range(L - span + 1):
        sites = [i + o for o in support_offsets]
        for c in configs(m, L):
            loc = tuple(c[s] for s in sites)
            for a, b in local_pairs:
                if loc == a:
                    d = list(c)
                    for s, v in zip(sites, b):
                        d[s] = v
                    out.append((weight, c, tuple(d)))
    return out


def resample_pairs(m, L, site, weight):
    out = []
    for c in configs(m, L):
        for v in range(c[site] + 1, m):
            d = list(c)
            d[site] = v
            out.append((weight, c, tuple(d)))
    return out


# ---------- t-Jz: states 0 = hole, 1 = up, 2 = down ----------
TJZ_PAIRS = [((1, 0), (0, 1)), ((2, 0), (0, 2))]


def tjz_p0(L):
    return rk_laplacian(3, L, window_pairs(3, L, [0, 1], TJZ_PAIRS, 2.0))


def tjz_imp(L, site, g=1.0):
    return rk_laplacian(3, L, resample_pairs(3, L, site, g / 2.0))


def pattern(c):
    return tuple(s for s in c if s != 0)


def kl_vector(L, k, l):
    """normalized |k,l): l particles, k-th spin in the (up - down) combination."""
    v = np.zeros(3 ** L)
    for c in configs(3, L):
        p = pattern(c)
        if len(p) != l:
            continue
        v[index(c, 3)] = 1.0 if (k == 0 or p[k - 1] == 1) else -1.0
    return v / np.linalg.norm(v)


def qk_vector(L, k):
    v = np.zeros(3 ** L)
    for c in configs(3, L):
        p = pattern(c)
        if len(p) >= k:
            v[index(c, 3)] = 1.0 if p[k - 1] == 1 else -1.0
    return v


def hk_formula(L, k):
    n = L - k + 1
    H = np.zeros((n, n))
    for a in range(n):
        l = k + a
        H[a, a] = 1 + k / (2 * L) if a == 0 else 1 - l / (2 * L)
        if a + 1 < n:
            t = math.sqrt((l + 1) * (L - l)) / (math.sqrt(2) * L)
            H[a, a + 1] = H[a + 1, a] = -t
    return H


def lowest_nonzero(H, tol=1e-9):
    e = np.linalg.eigvalsh(H)
    return e[e > tol][0], e


def main():
    print("== t-Jz kernel dimension")
    for L in range(2, 6):
        e = np.linalg.eigvalsh(tjz_p0(L))
        print(L, int(np.sum(e < 1e-9)), 2 ** (L + 1) - 1)

    print("== t-Jz projected impurity vs H_k formula")
    for L in (3, 4, 5):
        V = tjz_imp(L, L - 1)
        P0 = tjz_p0(L)
        for k in range(1, L + 1):
            basis = [kl_vector(L, k, l) for l in range(k, L + 1)]
            B = np.array(basis).T
            assert np.allclose(P0 @ B, 0)
            Hproj = B.T @ V @ B
            print(L, k, np.max(np.abs(Hproj - hk_formula(L, k))))

    print("== t-Jz exact gap, impurity at L")
    for L in (3, 4, 5, 6):
        H = tjz_p0(L) + tjz_imp(L, L - 1)
        gap, e = lowest_nonzero(H)
        print(L, repr(gap), 3.0 / (3 ** L - 1), int(np.sum(e < 1e-9)))

    print("== t-Jz two-impurity: SLIOM matrix elements vs closed forms")
    for L in (4, 5):
        V1 = tjz_imp(L, 0)
        VL = tjz_imp(L, L - 1)
        qs = [qk_vector(L, k) for k in range(1, L + 1)]
        for k in range(1, L + 1):
            q = qs[k - 1]
            nq = q @ q
            s_norm = sum(2 ** l * math.comb(L, l) for l in range(k, L + 1))
            mu = [(1 + l / (2 * L)) if k == 1 else (1 - l / (2 * L)) for l in range(0, L + 1)]
            v1 = sum(2 ** l * math.comb(L, l) * mu[l] for l in range(k, L + 1))
            line = [L, k, nq - s_norm, q @ V1 @ q - v1]
            if k < L:
                q2 = qs[k]
                w = -sum((L - l) / L * 2 ** l * math.comb(L, l) for l in range(k, L))
                line += [q2 @ V1 @ q - w, q2 @ VL @ q]
            print(*line)
        H = tjz_p0(L) + V1 + VL
        gap, _ = lowest_nonzero(H)
        print("two-imp exact gap", L, repr(gap))

    print("== t-Jz graph Laplacian vs projected impurity on full kernel")
    for L in (3, 4, 5):
        V = tjz_imp(L, L - 1)
        pats = {}
        for c in configs(3, L):
            pats.setdefault(pattern(c), []).append(index(c, 3))
        B = np.zeros((3 ** L, len(pats)))
        for col, (p, idx) in enumerate(sorted(pats.items())):
            B[idx, col] = 1.0 / math.sqrt(len(idx))
        Heff = B.T @ V @ B
        gap, _ = lowest_nonzero(Heff)
        print(L, repr(gap), 4.0 / (3 ** L - 1))

    # ---------- H3: states 0 = minus, 1 = zero, 2 = plus ----------
    M, Z, P = 0, 1, 2
    H3_PAIRS = [((Z, P, Z), (P, M, P)), ((Z, P, M), (P, M, Z)),
                ((Z, M, Z), (M, P, M)), ((Z, M, P), (M, P, Z))]
    H4_PAIRS = []
    for a in configs(3, 4):
        b = (a[0] + 1, a[1] - 1, a[2] - 1, a[3] + 1)
        if all(0 <= x <= 2 for x in b):
            H4_PAIRS.append((a, b))
    print("H4 pair count", len(H4_PAIRS))

    def h3_p0(L, with_h4=False):
        pl = window_pairs(3, L, [0, 1, 2], H3_PAIRS, 2.0)
        if with_h4:
            pl += window_pairs(3, L, [0, 1, 2, 3], H4_PAIRS, 2.0)
        return rk_laplacian(3, L, pl)

    print("== H3 two-site boundary impurity")
    for L in (3, 4, 5, 6, 7):
        P0 = h3_p0(L)
        V = tjz_like = rk_laplacian(3, L, resample_pairs(3, L, L - 2, 0.5) + resample_pairs(3, L, L - 1, 0.5))
        sl = np.zeros(3 ** L)
        for c in configs(3, L):
            nz = [s for s in c if s != Z]
            if nz:
                sl[index(c, 3)] = 1.0 if nz[0] == P else -1.0
        assert np.allclose(P0 @ sl, 0)
        e_var = (sl @ V @ sl) / (sl @ sl)
        gap, e = lowest_nonzero(P0 + V)
        print(L, repr(gap), repr(e_var), 14 / (3 ** L - 1), int(np.sum(e < 1e-9)))

    print("== H3 blockade variational energy (B++ - B--)")
    for L in (6, 7):
        P0 = h3_p0(L)
        V = rk_laplacian(3, L, resample_pairs(3, L, L - 2, 0.5) + resample_pairs(3, L, L - 1, 0.5))
        for j0 in range(1, L - 2):
            b = np.zeros(3 ** L)
            for c in configs(3, L):
                for sgn, ch in ((1.0, P), (-1.0, M)):
                    if c[j0 - 1] != ch or c[j0] != ch:
                        continue
                    left = [s for s in c[: j0 - 1] if s != Z]
                    right = [s for s in c[j0 + 1:] if s != Z]
                    if left and left[-1] != ch:
                        continue
                    if right and right[0] != ch:
                        continue
                    b[index(c, 3)] = sgn
            res = np.max(np.abs(P0 @ b))
            e_var = (b @ V @ b) / (b @ b)
            print(L, j0, res, repr(e_var), 8 / (3 ** (L - j0 - 1) - 1))

    print("== H3+H4 two-site impurity gaps")
    for L in (4, 5, 6, 7):
        H = h3_p0(L, True) + rk_laplacian(3, L, resample_pairs(3, L, L - 2, 0.5) + resample_pairs(3, L, L - 1, 0.5))
        gap, e = lowest_nonzero(H)
        print(L, repr(gap), int(np.sum(e < 1e-9)))


if __name__ == "__main__":
    main()
