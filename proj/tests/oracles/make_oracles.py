#!/usr/bin/env python3
"""Independent reference values frozen into tests/unit/test_oracles.cpp.

Everything here is written from the definitions, without the C++ code:
a pure-Python mt19937_64 and SplitMix64, a brute-force kNN graph, numpy
dense linear algebra, and a direct transcription of the RED conjugate-
gradient recursion, PnP-ADMM and the unrolled per-layer variant.

Run:  python3 tests/oracles/make_oracles.py
"""

import math

import numpy as np

M64 = (1 << 64) - 1


class MT19937_64:
    def __init__(self, seed):
        self.mt = [0] * 312
        self.mt[0] = seed & M64
        for i in range(1, 312):
            prev = self.mt[i - 1]
            self.mt[i] = (6364136223846793005 * (prev ^ (prev >> 62)) + i) & M64
        self.idx = 312

    def _twist(self):
        upper, lower = 0xFFFFFFFF80000000, 0x7FFFFFFF
        for i in range(312):
            x = (self.mt[i] & upper) | (self.mt[(i + 1) % 312] & lower)
            xa = x >> 1
            if x & 1:
                xa ^= 0xB5026F5AA96619E9
            self.mt[i] = self.mt[(i + 156) % 312] ^ xa
        self.idx = 0

    def next(self):
        if self.idx >= 312:
            self._twist()
        y = self.mt[self.idx]
        self.idx += 1
        y ^= (y >> 29) & 0x5555555555555555
        y ^= (y << 17) & 0x71D67FFFEDA60000
        y ^= (y << 37) & 0xFFF7EEE000000000
        y ^= y >> 43
        return y & M64


def splitmix(state):
    state = (state + 0x9E3779B97F4A7C15) & M64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
    return state, z ^ (z >> 31)


def stream_seed(seed, purpose, indices=()):
    _, h = splitmix(seed)
    _, h = splitmix(h ^ purpose)
    for idx in indices:
        _, h = splitmix(h ^ ((idx + 0x632BE59BD9B4E019) & M64))
    return h


class Rng:
    def __init__(self, seed):
        self.e = MT19937_64(seed)
        self.spare = None

    def uniform(self):
        return (self.e.next() >> 11) * 2.0**-53

    def normal(self):
        if self.spare is not None:
            s, self.spare = self.spare, None
            return s
        u1 = 1.0 - self.uniform()
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log(u1))
        t = 2.0 * math.pi * u2
        self.spare = r * math.sin(t)
        return r * math.cos(t)


def knn_adjacency(points, k):
    n = len(points)
    w = np.zeros((n, n))
    for i in range(n):
        d = [(float(np.linalg.norm(points[i] - points[j])), j) for j in range(n) if j != i]
        d.sort()
        for dist, j in d[:k]:
            w[i, j] = w[j, i] = 1.0 / dist
    return w / w.max()


def laplacian(w):
    return np.diag(w.sum(1)) - w


def eig_sorted(lap):
    lam, u = np.linalg.eigh(lap)
    for c in range(u.shape[1]):
        r = int(np.argmax(np.abs(u[:, c])))
        if u[r, c] < 0:
            u[:, c] *= -1
    return lam, u


def lr(lap, y, a):
    return np.linalg.solve(np.eye(len(y)) + a * lap, y)


def pnp(lap, y, a, rho, iters):
    x, v, u = y.copy(), y.copy(), np.zeros_like(y)
    for _ in range(iters):
        x = (y + rho * (v - u)) / (1 + rho)
        v = lr(lap, x + u, a)
        u = u + x - v
    return x


def red_cg(y, K, a_red, den):
    """Transcription of the RED-CG recursion with per-layer a_red[k], den[k]."""
    x = np.zeros_like(y)
    g = x - y + a_red[0] * (x - den[0](x))
    d = -g
    for k in range(1, K + 1):
        dd = den[k](d)
        tau = -(d @ g) / (d @ (d + a_red[k] * (d - dd)))
        x = x + tau * d
        g_new = x - y + a_red[k] * (x - den[k](x))
        gamma = (g_new @ g_new) / (g @ g)
        d = -g_new + gamma * d
        g = g_new
    return x


def fmt(v):
    return "%.17g" % v


def main():
    print("// RNG")
    for purpose, idx in [(1, ()), (1, (7,)), (3, (2, 5))]:
        s = stream_seed(0, purpose, idx)
        r = MT19937_64(s)
        print("stream(0, %d, %s): seed %du, u64 %s" % (purpose, idx, s, [r.next() for _ in range(2)]))
    r = Rng(stream_seed(42, 2, (0, 1, 2)))
    print("stream(42, observation_noise, {0,1,2}) uniform", fmt(r.uniform()), "normal",
          fmt(r.normal()), fmt(r.normal()), fmt(r.normal()))

    print("// synthetic sample seed=0 id=0, N=100 k=5")
    rng = Rng(stream_seed(0, 1, (0,)))
    pts = np.array([[rng.uniform() * 100, rng.uniform() * 100] for _ in range(100)])
    w = knn_adjacency(pts, 5)
    lap = laplacian(w)
    lam, u = eig_sorted(lap)
    d = np.array([math.sin(k * math.pi / 3) + 2 for k in (1, 2, 3)])
    x = u[:, :3] @ d
    print("point0", fmt(pts[0, 0]), fmt(pts[0, 1]))
    print("n_edges", int((w > 0).sum() // 2), "lambda2", fmt(lam[1]), "lambda100", fmt(lam[-1]))
    print("clean[0..2]", fmt(x[0]), fmt(x[1]), fmt(x[2]), "norm", fmt(np.linalg.norm(x)))

    print("// N=50 graph (seed=3 id=0), y_i = sin(i) + 0.1 i")
    rng = Rng(stream_seed(3, 1, (0,)))
    pts = np.array([[rng.uniform() * 100, rng.uniform() * 100] for _ in range(50)])
    lap = laplacian(knn_adjacency(pts, 5))
    y = np.array([math.sin(i) + 0.1 * i for i in range(50)])
    a_red, a_lr = 2.0, 1.5
    xs = np.linalg.solve(np.eye(50) + a_red * (np.eye(50) - np.linalg.inv(np.eye(50) + a_lr * lap)), y)
    print("red stationary x[0..2]", fmt(xs[0]), fmt(xs[1]), fmt(xs[2]), "norm", fmt(np.linalg.norm(xs)))
    K = 10
    den = [lambda v: lr(lap, v, a_lr)] * (K + 1)
    xc = red_cg(y, K, [a_red] * (K + 1), den)
    print("red_cg K=10 x[0..2]", fmt(xc[0]), fmt(xc[1]), fmt(xc[2]), "norm", fmt(np.linalg.norm(xc)))
    xp = pnp(lap, y, 0.7, 1.3, 10)
    print("pnp a=0.7 rho=1.3 it=10 x[0..2]", fmt(xp[0]), fmt(xp[1]), fmt(xp[2]), "norm", fmt(np.linalg.norm(xp)))
    ar = [0.5 + 0.1 * k for k in range(K + 1)]
    al = [2.0 - 0.1 * k for k in range(K + 1)]
    den = [(lambda a: (lambda v: lr(lap, v, a)))(a) for a in al]
    xu = red_cg(y, K, ar, den)
    print("unrolled lr x[0..2]", fmt(xu[0]), fmt(xu[1]), fmt(xu[2]), "norm", fmt(np.linalg.norm(xu)))
    rh = [0.5 + 0.2 * k for k in range(K + 1)]
    den = [(lambda a, r: (lambda v: pnp(lap, v, a, r, 10)))(a, r) for a, r in zip(al, rh)]
    xq = red_cg(y, K, ar, den)
    print("unrolled pnp x[0..2]", fmt(xq[0]), fmt(xq[1]), fmt(xq[2]), "norm", fmt(np.linalg.norm(xq)))


if __name__ == "__main__":
    main()
