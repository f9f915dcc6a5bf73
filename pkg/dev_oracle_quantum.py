"""Dev oracle: high-precision frozen values for the quantum-bound tests."""
import mpmath as mp

mp.mp.dps = 40


def blocks(r0, r1, nbar, eps, u, ns):
    r = mp.mpf(repr(r1 if u else r0))
    mu = 2 * mp.mpf(repr(ns)) + 1
    beta = 2 * mp.mpf(repr(nbar)) + 1
    e = mp.mpf(repr(eps))
    a = r * (mu + e) + (1 - r) * beta + e
    b = mu + 2 * e
    c = mp.sqrt(r * (mu ** 2 - 1))
    return a, b, c


def g_t(nu, t):
    if abs(nu - 1) < mp.mpf('1e-20'):
        return mp.mpf(1)
    return 2 ** t / ((nu + 1) ** t - (nu - 1) ** t)


def lam_t(nu, t):
    if abs(nu - 1) < mp.mpf('1e-20'):
        return mp.mpf(1)
    return ((nu + 1) ** t + (nu - 1) ** t) / ((nu + 1) ** t - (nu - 1) ** t)


def overlap(abc0, abc1, t):
    t = mp.mpf(repr(t)) if not isinstance(t, mp.mpf) else t
    out = mp.mpf(1)
    reb = []
    for (a, b, c), tt in ((abc0, t), (abc1, 1 - t)):
        s = mp.sqrt((a + b) ** 2 - 4 * c ** 2)
        nu1 = (s + (a - b)) / 2
        nu2 = (s - (a - b)) / 2
        out *= g_t(nu1, tt) * g_t(nu2, tt)
        c2 = (a + b) / s
        s2 = 2 * c / s
        l1, l2 = lam_t(nu1, tt), lam_t(nu2, tt)
        reb.append(((c2 * (l1 + l2) + (l1 - l2)) / 2,
                    (c2 * (l1 + l2) - (l1 - l2)) / 2,
                    s2 * (l1 + l2) / 2))
    ab = (reb[0][0] + reb[1][0]) / 2
    bb = (reb[0][1] + reb[1][1]) / 2
    cb = (reb[0][2] + reb[1][2]) / 2
    return out / (ab * bb - cb ** 2)


def min_overlap(cell, ns):
    r0, r1, nbar, eps = cell
    a0 = blocks(r0, r1, nbar, eps, 0, ns)
    a1 = blocks(r0, r1, nbar, eps, 1, ns)

    def f(t):
        return overlap(a0, a1, t)

    lo, hi = mp.mpf('1e-9'), 1 - mp.mpf('1e-9')
    ts = [lo + (hi - lo) * i / 64 for i in range(65)]
    vals = [f(t) for t in ts]
    i = min(range(65), key=lambda k: vals[k])
    a, b = ts[max(i - 1, 0)], ts[min(i + 1, 64)]
    phi = (mp.sqrt(5) - 1) / 2
    x1, x2 = b - phi * (b - a), a + phi * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > mp.mpf('1e-14'):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - phi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + phi * (b - a)
            f2 = f(x2)
    tbest = (a + b) / 2
    best = f(tbest)
    # pure endpoints
    for tend, abc in ((mp.mpf(0), a0), (mp.mpf(1), a1)):
        s = mp.sqrt((abc[0] + abc[1]) ** 2 - 4 * abc[2] ** 2)
        nus = ((s + abc[0] - abc[1]) / 2, (s - abc[0] + abc[1]) / 2)
        if max(nus) - 1 < mp.mpf('1e-20'):
            v = overlap(a0, a1, tend)
            if v < best:
                best, tbest = v, tend
    return best, tbest


def show(tag, v, digits=17):
    print(f"{tag}: {mp.nstr(v, digits)}")


# pure-loss ideal (0.5 -> 1), ns=1
a0 = blocks(0.5, 1.0, 0, 0, 0, 1.0)
a1 = blocks(0.5, 1.0, 0, 0, 1, 1.0)
show("ov(0.5,1|ns=1,t=0.5)", overlap(a0, a1, 0.5))
show("ov(0.5,1|ns=1,t=0.25)", overlap(a0, a1, 0.25))
show("ov(0.5,1|ns=1,t=1) endpoint", overlap(a0, a1, 1))
b, t = min_overlap((0.5, 1.0, 0, 0), 1.0)
show("inf ov(0.5,1|ns=1)", b)
show("  at t", t)

# thermal cell (0.85, 0.95, 1e-5, 1e-5), ns=1
a0 = blocks(0.85, 0.95, 1e-5, 1e-5, 0, 1.0)
a1 = blocks(0.85, 0.95, 1e-5, 1e-5, 1, 1.0)
show("ov(0.85,0.95,th1e-5|ns=1,t=0.5)", overlap(a0, a1, 0.5))
b, t = min_overlap((0.85, 0.95, 1e-5, 1e-5), 1.0)
show("inf ov(0.85,0.95,th1e-5|ns=1)", b)
show("  at t", t)
show("  Q(M=1,N=1)", b / 2)

# thermal cell (0.5, 0.85, 1e-2, 1e-2), M=3, N=1.5 -> ns=0.5
b, t = min_overlap((0.5, 0.85, 1e-2, 1e-2), 0.5)
show("inf ov(0.5,0.85,th1e-2|ns=0.5)", b)
show("  at t", t)
show("  Q(M=3,N=1.5)", b ** 3 / 2)

# bhattacharyya pure loss (0.5,1), M=10, N=5 -> ns=0.5
a0 = blocks(0.5, 1.0, 0, 0, 0, 0.5)
a1 = blocks(0.5, 1.0, 0, 0, 1, 0.5)
ov = overlap(a0, a1, 0.5)
show("B(0.5,1|M=10,N=5)", ov ** 10 / 2)

# swap symmetry sanity + frozen general mixed pair value
a0 = blocks(0.3, 0.8, 0, 0, 0, 0.5)
a1 = blocks(0.3, 0.8, 0, 0, 1, 0.5)
show("ov(0.3,0.8|ns=0.5,t=0.5)", overlap(a0, a1, 0.5))
show("ov(0.3,0.8|ns=0.5,t=0.25)", overlap(a0, a1, 0.25))
show("ov swap check", overlap(a1, a0, 0.75))

# pure-loss (0,1) full-swap regression value at ns=1: (1-tau)^(1+t)
show("(0,1) t=0.9 analytic", (mp.mpf(1) / 2) ** mp.mpf('1.9'))
a0 = blocks(0.0, 1.0, 0, 0, 0, 1.0)
a1 = blocks(0.0, 1.0, 0, 0, 1, 1.0)
show("(0,1) t=0.9 formula", overlap(a0, a1, 0.9))
