"""High-precision reference values frozen into the C++ unit tests.

Independent of the C++ implementation: mpmath at 50 digits and brute-force
enumeration over subsets / configurations.
"""
import itertools
import mpmath as mp

mp.mp.dps = 50


def lemma22(n, Delta, b, A, c):
    q = Delta * mp.e * mp.mpf(A) ** b
    return (1 / mp.mpf(c)) * q ** (mp.mpf(c) * n) / (1 - q)


def thm28(n, Delta, b, A, w):
    q = Delta * mp.e * mp.mpf(A) ** b
    return (mp.mpf(n) / mp.mpf(n) ** w) * q ** (mp.mpf(n) ** w) / (1 - q)


def min_omega(b, Delta, x):
    L = mp.log(4 * mp.mpf(Delta) ** 3 / mp.mpf(x) ** 2) / mp.log(1 + mp.mpf(b))
    return (L + mp.mpf(1) / 2) / (L + 1), L


def delta_bound(n, Delta, b, x, w, gamma):
    r = mp.ceil((1 - w) * mp.log(n) / mp.log(1 + b))
    return 10 * gamma * mp.mpf(Delta) ** (3 * r) * mp.mpf(x) ** (-2 * r) * 2 ** (2 * r) * mp.mpf(n) ** (mp.mpf(1) / 2 - w)


def prop31(d, c, g, eps, a):
    eps = mp.mpf(eps)
    first = (mp.mpf(c) / 2) * (eps / (2 * d)) ** (mp.mpf(d) / (c * mp.mpf(a)))
    second = 3 * mp.log(2) / (1 + eps / 3) ** (mp.mpf(g) / 2)
    return first - second, first, second


def prop51(n, Delta, b, A):
    q = Delta * mp.e * 2 ** mp.mpf(b) * mp.mpf(A) ** (mp.mpf(b) / 2)
    assert q < mp.mpf(1) / 2, "precondition (Delta e) 2^b A^{b/2} < 1/2 fails"
    L = mp.log(n, 2)
    return (n / L) * q ** mp.ceil(L) / (1 - q)


def gw(d, p):
    p = mp.mpf(p)
    f = lambda q: (1 - p + p * q) ** (d - 1) - q
    return 1 - mp.findroot(f, (mp.mpf(0), mp.mpf('0.999')), solver='bisect')


def binom_pmf(k, n, p):
    return mp.binomial(n, k) * mp.mpf(p) ** k * (1 - mp.mpf(p)) ** (n - k)


def grid_edges(rows, cols):
    e = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                e.append((v, v + 1))
            if r + 1 < rows:
                e.append((v, v + cols))
    return e


def iso_brute(n, edges):
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    best_e = best_v = None
    for size in range(1, n // 2 + 1):
        for A in itertools.combinations(range(n), size):
            S = set(A)
            eb = sum(1 for u, v in edges if (u in S) != (v in S))
            vb = len(set().union(*(adj[u] for u in S)) - S)
            re, rv = mp.mpf(eb) / size, mp.mpf(vb) / size
            # ties: lexicographically smallest sorted witness
            if best_e is None or (re, A) < best_e:
                best_e = (re, A)
            if best_v is None or (rv, A) < best_v:
                best_v = (rv, A)
    return best_e, best_v


print("lemma22(100,3,1,0.1,0.25) =", mp.nstr(lemma22(100, 3, 1, 0.1, 0.25), 17))
print("thm28(1e4,3,1,0.1,0.9) =", mp.nstr(thm28(10**4, 3, 1, 0.1, 0.9), 17))
print("thm28(1000,3,1,0.1,0.5) =", mp.nstr(thm28(1000, 3, 1, 0.1, 0.5), 17))
w, L = min_omega(1, 3, 0.25)
print("min_omega(1,3,0.25) =", mp.nstr(w, 17), "L =", mp.nstr(L, 17))
print("delta_bound(4096,3,1,0.25,w*+0.01,1) =", mp.nstr(delta_bound(4096, 3, 1, 0.25, w + mp.mpf('0.01'), 1), 17))
C, f, s = prop31(3, 1, 30, 0.5, 0.1)
print("prop31(3,1,30,0.5,0.1) C =", mp.nstr(C, 17), "first =", mp.nstr(f, 17), "second =", mp.nstr(s, 17))
print("prop51(1024,3,1,1e-4) =", mp.nstr(prop51(1024, 3, 1, mp.mpf('0.0001')), 17))
print("prop51(1e6,3,1,1e-4) =", mp.nstr(prop51(10**6, 3, 1, mp.mpf('0.0001')), 17))
print("gw(4,0.5) =", mp.nstr(gw(4, 0.5), 20), " closed form 3-sqrt5 =", mp.nstr(3 - mp.sqrt(5), 20))
print("gw(3,0.75) =", mp.nstr(gw(3, 0.75), 20))
print("gw(5,0.4) =", mp.nstr(gw(5, 0.4), 20))


def gw_near_critical(d, p):
    # survival s solves s = 1 - (1 - p s)^(d-1); the bracket excludes the trivial root s = 0
    p = mp.mpf(p)
    g = lambda s: 1 - (1 - p * s) ** (d - 1) - s
    lo, hi = (p * (d - 1) - 1) / 10, mp.mpf(1)
    assert g(lo) > 0 and g(hi) < 0
    for _ in range(300):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if g(mid) > 0 else (lo, mid)
    return lo


for p in [1.0 / 3 + 1e-9, 1.0 / 3 + 1e-6, 0.34]:
    print("gw(4,%r) =" % p, mp.nstr(gw_near_critical(4, p), 17))
print("binom(7500,15000,0.5) =", mp.nstr(binom_pmf(7500, 15000, 0.5), 20))
print("binom(3,20,0.37) =", mp.nstr(binom_pmf(3, 20, 0.37), 20))
print("binom(0,100,0.01) =", mp.nstr(binom_pmf(0, 100, 0.01), 20))
print("binom(4000,15000,0.31) =", mp.nstr(binom_pmf(4000, 15000, 0.31), 20))
# pivotal bound k=100, x=0.25: max over m of pmf at clamp(m/k)
k, x = 100, mp.mpf('0.25')
best = max(binom_pmf(m, k, min(max(mp.mpf(m) / k, x), 1 - x)) for m in range(k + 1))
print("pivotal_bound(100,0.25) =", mp.nstr((mp.mpf(k + 1) / k) * best, 20))
k = 12
best = max(binom_pmf(m, k, min(max(mp.mpf(m) / k, x), 1 - x)) for m in range(k + 1))
print("pivotal_bound(12,0.25) =", mp.nstr((mp.mpf(k + 1) / k) * best, 20))

(ce, ae), (cv, av) = iso_brute(9, grid_edges(3, 3))
print("grid3x3 edge cheeger =", ce, ae, " vertex iso =", cv, av)
(ce, ae), (cv, av) = iso_brute(6, grid_edges(2, 3))
print("grid2x3 edge cheeger =", ce, ae, " vertex iso =", cv, av)
petersen = [(i, (i + 1) % 5) for i in range(5)] + [(i, i + 5) for i in range(5)] + [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
(ce, ae), (cv, av) = iso_brute(10, petersen)
print("petersen edge cheeger =", ce, ae, " vertex iso =", cv, av)
print("log thm28(1e4,3,1,0.1,0.9) =", mp.nstr(mp.log(thm28(10**4, 3, 1, 0.1, 0.9)), 17))
print("log lemma22(2^20,3,1,0.1,0.25) =", mp.nstr(mp.log(lemma22(2**20, 3, 1, 0.1, 0.25)), 17))


def pivotal_bound(k, x):
    x = mp.mpf(x)
    best = max(binom_pmf(m, k, min(max(mp.mpf(m) / k, x), 1 - x)) for m in range(k + 1))
    return (mp.mpf(k + 1) / k) * best


def two_large(n, m, Delta, r, c, x):
    levels = mp.floor(1 / mp.mpf(c)) - 1
    lb = levels * pivotal_bound(m, x)
    ball = mp.mpf(Delta) ** r / n * m * lb
    return lb, ball, 2 * mp.mpf(x) ** (-2 * r) * mp.mpf(Delta) ** (2 * r * r) * ball


lb, ball, tl = two_large(1024, 1536, 3, 3, mp.mpf('0.25'), mp.mpf('0.25'))
print("lbridge(1536,0.25,0.25) =", mp.nstr(lb, 17), " ball =", mp.nstr(ball, 17), " log two_large =", mp.nstr(mp.log(tl), 17))
print("gamma(1024,1536,3,0.25) =", mp.nstr(mp.mpf(3) / 2 * mp.sqrt(1024) * pivotal_bound(1536, 0.25), 17))


def cycle_two_arcs(n, p, L):
    # k >= 2 closed edges at uniform positions cut C_n into arcs whose sizes form a
    # uniform composition of n into k parts; count compositions with >= 2 parts >= L.
    p = mp.mpf(p)
    total = mp.mpf(0)
    for k in range(2, n + 1):
        weight = mp.binomial(n, k) * (1 - p) ** k * p ** (n - k)
        comps = mp.binomial(n - 1, k - 1)
        at_most_one = 0
        for m in (0, 1):
            s = 0
            for j in range(m, k + 1):
                rest = n - j * (L - 1) - 1
                if rest < k - 1:
                    break
                s += (-1) ** (j - m) * mp.binomial(j, m) * mp.binomial(k, j) * mp.binomial(rest, k - 1)
            at_most_one += s
        total += weight * (comps - at_most_one) / comps
        if weight < mp.mpf('1e-40') and k > n * (1 - p) + 50:
            break
    return total


def cycle_two_arcs_enum(n, p, L):
    p = mp.mpf(p)
    total = mp.mpf(0)
    for mask in range(1 << n):
        closed = [i for i in range(n) if not (mask >> i) & 1]
        if len(closed) < 2:
            continue
        # edge i joins vertex i and i+1; arcs between consecutive closed edges
        sizes = [(closed[(t + 1) % len(closed)] - closed[t]) % n or n for t in range(len(closed))]
        if sum(1 for s in sizes if s >= L) >= 2:
            k = len(closed)
            total += (1 - p) ** k * p ** (n - k)
    return total


print("cycle_two_arcs(1000,0.997,250) =", mp.nstr(cycle_two_arcs(1000, mp.mpf('0.997'), 250), 17))
print("cycle_two_arcs(16,0.8125,4) =", mp.nstr(cycle_two_arcs(16, mp.mpf('0.8125'), 4), 17),
      " enum =", mp.nstr(cycle_two_arcs_enum(16, mp.mpf('0.8125'), 4), 17))
print("cycle_two_arcs(16,0.5,3) =", mp.nstr(cycle_two_arcs(16, mp.mpf('0.5'), 3), 17),
      " enum =", mp.nstr(cycle_two_arcs_enum(16, mp.mpf('0.5'), 3), 17))
