"""Reference values for the closed-form calculators, evaluated with mpmath at
50 significant digits on seeded random inputs.

Writes crates/core/tests/data/closed_forms.csv: one row per sample,
`name,p1,...,pn,value`, inputs as exact decimal images of doubles and the
value rounded to the nearest double.

    python3 tools/closed_forms.py
"""

import random
from pathlib import Path

import mpmath as mp

mp.mp.dps = 50
E = mp.e
SAMPLES = 100
OUT = Path(__file__).resolve().parents[1] / "crates/core/tests/data/closed_forms.csv"


def c_alpha(alpha):
    return max(mp.mpf(1), 1 / (E * alpha))


def log_uniform(rng, lo, hi):
    return float(mp.exp(rng.uniform(float(mp.log(lo)), float(mp.log(hi)))))


def bounded(rng):
    while True:
        alpha = rng.uniform(0.5, 1.5)
        r0 = rng.uniform(0.8, 1.5)
        b0 = rng.uniform(1.5, 3.0)
        b1 = b0 + rng.uniform(0.5, 2.0)
        z1 = rng.uniform(0.3, 1.5)
        k1 = z1 / r0
        k2 = k1 * rng.uniform(1.2, 2.0)
        k = rng.uniform(k1, k2)
        r = rng.uniform(b0 * r0, b1 * r0)
        a_tilde = rng.uniform(1.0, 20.0)
        nu_hat0 = rng.uniform(1.0, 4.0)
        m = log_uniform(rng, 1.0, 100.0)
        al, ca = mp.mpf(alpha), c_alpha(mp.mpf(alpha))
        a1t = mp.log(E / 2)
        scale = mp.exp(a1t) * mp.mpf(z1) / 2
        need1 = ca * scale ** (-al) * (mp.mpf(nu_hat0) + mp.mpf(0.5)) ** (1 + al)
        kr = mp.mpf(k) * mp.mpf(r)
        need2 = ca * (2 / ((1 / mp.mpf(b0)) * mp.exp(a1t) * kr)) ** al * (mp.mpf(nu_hat0) + mp.mpf(0.5)) ** (1 + al)
        ell = max(need1, need2) * rng.uniform(1.05, 2.0)
        if ell > 650:
            continue
        eps = float(mp.mpf(m) * mp.exp(-ell))
        ell = mp.log(mp.mpf(m) / mp.mpf(eps))
        if ell < 1.01 * max(need1, need2):
            continue
        v = mp.sqrt(2 * mp.mpf(a_tilde)) * mp.mpf(b0) * mp.mpf(m) * mp.exp(
            -mp.log(mp.mpf(b0)) * (scale**al * ell / ca) ** (1 / (1 + al))
        )
        return [alpha, r0, b0, b1, z1, k2, a_tilde, nu_hat0, m, eps, k, r], v


def highfreq(rng):
    while True:
        alpha = rng.uniform(0.4, 1.5)
        r0 = rng.uniform(0.8, 1.5)
        b0_big = rng.uniform(1.5, 3.0)
        b1 = b0_big + rng.uniform(0.5, 2.0)
        b0 = float(mp.mpf(b0_big) ** (-rng.uniform(0.2, 0.8)))
        a1 = rng.uniform(0.3, 0.9)
        a_big = rng.uniform(1.0, 50.0)
        b_tilde = rng.uniform(3.0, 6.0)
        k0 = rng.uniform(0.1, 0.5)
        k = k0 * rng.uniform(1.0, 3.0)
        r = rng.uniform(b0_big * r0, b1 * r0)
        m = log_uniform(rng, 1.0, 1000.0)
        al, ca = mp.mpf(alpha), c_alpha(mp.mpf(alpha))
        bb, aa, kr = mp.mpf(b0), mp.mpf(a1), mp.mpf(k) * mp.mpf(r)
        window = (1 / (mp.mpf(b1) * mp.mpf(r0))) * (2 / (3 * mp.mpf(b_tilde))) ** (1 + al) * (bb * mp.exp(aa) / 2) ** al / ca
        need1 = mp.mpf(k) / window
        floor = mp.mpf(1.5) * mp.mpf(b_tilde) * kr
        need2 = ca * (2 / (bb * mp.exp(aa) * kr)) ** al * floor ** (1 + al)
        ell = max(need1, need2) * rng.uniform(1.05, 1.5)
        if ell > 650:
            continue
        eps = float(mp.mpf(m) * mp.exp(-ell))
        ell = mp.log(mp.mpf(m) / mp.mpf(eps))
        if ell < 1.01 * max(need1, need2):
            continue
        x = bb * mp.exp(aa) * kr / 2
        v = mp.sqrt(2 * mp.mpf(a_big) * mp.mpf(b1)) / bb * mp.mpf(m) * mp.exp(
            -mp.log(1 / bb) * (x**al * ell / ca) ** (1 / (1 + al))
        )
        return [alpha, r0, b0_big, b1, b0, a1, a_big, b_tilde, k0, m, eps, k, r], v


def extreme(rng):
    r0 = rng.uniform(0.8, 1.5)
    b0 = rng.uniform(2.0, 12.0)
    b1 = b0 + rng.uniform(0.5, 3.0)
    a_tilde = rng.uniform(1.0, 20.0)
    c0t = rng.uniform(2.0, 4.0)
    k0 = rng.uniform(0.5, 5.0)
    k = k0 * rng.uniform(1.0, 20.0)
    r = rng.uniform(b0 * r0, b1 * r0)
    m = log_uniform(rng, 1e-2, 1e3)
    eps = m * log_uniform(rng, 1e-12, 1.0)
    x = mp.mpf(k) * mp.mpf(r) / mp.mpf(c0t)
    v = mp.sqrt(mp.mpf(a_tilde) * mp.mpf(b1)) * mp.sqrt(
        mp.mpf(eps) ** 2 + mp.mpf(m) ** 2 * x * (mp.mpf(2) / 3) ** (2 * x)
    )
    return [r0, b0, b1, a_tilde, c0t, k0, m, eps, k, r], v


def lipschitz(rng):
    r0 = rng.uniform(0.8, 1.5)
    b0 = rng.uniform(2.0, 12.0)
    b1 = b0 + rng.uniform(0.5, 3.0)
    a_tilde = rng.uniform(1.0, 20.0)
    c0t = rng.uniform(2.0, 4.0)
    tau = rng.uniform(0.2, 3.0)
    c2 = rng.uniform(0.1, 10.0)
    eps = log_uniform(rng, 1e-12, 0.36)
    kmin = mp.mpf(c0t) * mp.log(1 / mp.mpf(eps)) / (mp.log(mp.mpf(4) / 3) * mp.mpf(b0) * mp.mpf(r0))
    k = float(kmin * rng.uniform(1.001, 5.0))
    p = 2 * mp.mpf(tau) + 1
    c3 = (p / (2 * mp.log(mp.mpf(9) / 8))) ** p * mp.exp(-p)
    ratio = mp.mpf(c0t) / (mp.mpf(b0) * mp.mpf(r0))
    v = mp.sqrt(mp.mpf(a_tilde) * mp.mpf(b1) * (1 + mp.mpf(c2) ** 2 * ratio ** (2 * mp.mpf(tau)) * c3)) * mp.mpf(eps)
    return [r0, b0, b1, a_tilde, c0t, tau, c2, eps, k], v


def eta2(rng):
    k = rng.uniform(0.1, 50.0)
    mt = log_uniform(rng, 1e-3, 1e3)
    c2 = rng.uniform(0.1, 10.0)
    c3 = rng.uniform(0.1, 10.0)
    top = mp.mpf(c3) / mp.mpf(c2) * mp.mpf(mt)
    eta1 = float(top * mp.mpf(log_uniform(rng, 1e-30, 1.0)))
    e1 = mp.mpf(eta1)
    log_term = -mp.log(mp.mpf(c2) / mp.mpf(c3) * e1 / mp.mpf(mt))
    kk = mp.mpf(k)
    v = mp.sqrt(
        mp.mpf(c2) ** 2 * kk**2 * e1**2
        + mp.mpf(c3) ** 2 * kk**2 * mp.mpf(mt) ** 2 / (log_term + kk) ** mp.mpf(0.125)
    )
    return [eta1, k, mt, c2, c3], v


class Inst:
    """Instability quantities for one configuration."""

    def __init__(self, s, dim, m, r0, delta0, c_tilde, a, c_small):
        self.s, self.n, self.m = mp.mpf(s), mp.mpf(dim), mp.mpf(m)
        self.r_tilde = mp.mpf(r0) + mp.mpf(delta0) + 1
        self.delta0 = mp.mpf(delta0)
        self.c_tilde, self.a, self.c_small = mp.mpf(c_tilde), mp.mpf(a), mp.mpf(c_small)
        self.c4 = mp.mpf(4)

    def z(self, k):
        return max(mp.mpf(1), mp.mpf(k) * self.r_tilde)

    def w(self):
        return 2 * self.s + self.n - mp.mpf(1) / 2

    def b_tilde(self):
        return max(self.c_small * E**2, 4 * self.s + 3 * self.n / 2 + 1)

    def c5(self):
        return 2 * self.c4 * (2 * self.c_tilde + 1)

    def ln_f(self, t, z):
        return self.w() * mp.log(1 + t) - (t + (self.n - 3) / 2) * mp.log(self.a * t / (E * z))

    def ln_net_error(self, t, z):
        return mp.log(2 * self.c4 * self.c_tilde) + (self.n - 1) / 2 * mp.log(z) + self.ln_f(t, z)

    def ln_eps_tilde(self, k):
        z = self.z(k)
        return self.ln_net_error(self.b_tilde() * z, z)

    def big_z(self, k):
        return self.b_tilde() * self.z(k)

    def delta_at(self, t, eps):
        n, m = self.n, self.m
        inner = mp.log(self.c5() * (1 + t) ** self.w() / mp.mpf(eps))
        return self.delta0 * 2 ** (-m * (n + 3) / (n - 1)) * (1 + t) ** (-2 * m) * inner ** (-m / (n - 1))

    def t_tilde(self, k, eps):
        z = self.z(k)
        target = mp.log(mp.mpf(eps))
        lo = self.big_z(k)
        hi = 2 * lo
        while self.ln_net_error(hi, z) > target:
            lo, hi = hi, 2 * hi
        return mp.findroot(lambda t: self.ln_net_error(t, z) - target, (lo, hi), solver="anderson")

    def ln_b_small(self, k):
        z = self.z(k)
        return (
            mp.log(2 * self.c4 * self.c_tilde)
            + self.w() * mp.log(3 * E / (2 * self.a))
            + (2 * self.s + 3 * self.n / 2 - 1) * mp.log(z)
        )

    def net_log(self, t, eps):
        n = self.n
        return 4 * (1 + t) ** (2 * n - 2) * mp.log(self.c5() * (1 + t) ** self.w() / mp.mpf(eps))


def inst_params(rng):
    s = rng.choice([0.0, rng.uniform(0.0, 2.0)])
    dim = rng.choice([2, 3])
    m = rng.randint(2, 4)
    r0 = rng.uniform(0.5, 2.0)
    delta0 = rng.uniform(0.05, 0.5)
    c_tilde = rng.uniform(2.0, 10.0)
    a = rng.choice([float(1 + mp.sqrt(E**2 - 1) / E), float((1 + mp.sqrt(E**2 - 1)) / E), rng.uniform(1.1, 3.0)])
    c_small = rng.choice([1.0, rng.uniform(1.0, 2.0)])
    k = log_uniform(rng, 0.5, 8.0)
    return [s, dim, m, r0, delta0, c_tilde, a, c_small, k]


def epsk(rng):
    while True:
        p = inst_params(rng)
        v = Inst(*p[:8]).ln_eps_tilde(p[8])
        if v > -650:
            return p, mp.exp(v)


def delta_large(rng):
    while True:
        p = inst_params(rng)
        inst = Inst(*p[:8])
        lo = inst.ln_eps_tilde(p[8])
        if lo > -1.0:
            continue
        eps = float(mp.exp(rng.uniform(float(max(lo, -650)), -1.0)))
        if mp.log(mp.mpf(eps)) < lo:
            continue
        return p + [eps], inst.delta_at(inst.big_z(p[8]), eps)


def small_case(rng):
    while True:
        p = inst_params(rng)
        inst = Inst(*p[:8])
        hi = inst.ln_eps_tilde(p[8])
        if hi < -600:
            continue
        eps = float(mp.exp(rng.uniform(-650.0, float(min(hi, -1.0)))))
        if mp.log(mp.mpf(eps)) >= hi:
            continue
        return p + [eps], inst


def delta_small(rng):
    p, inst = small_case(rng)
    return p, inst.delta_at(inst.t_tilde(p[8], p[9]), p[9])


def t_tilde(rng):
    p, inst = small_case(rng)
    return p, inst.t_tilde(p[8], p[9])


def tilde_b(rng):
    p = inst_params(rng)
    return p, mp.exp(Inst(*p[:8]).ln_b_small(p[8]))


def big_z(rng):
    p = inst_params(rng)
    return p, Inst(*p[:8]).big_z(p[8])


def net_size(rng):
    p, v = delta_large(rng)
    inst = Inst(*p[:8])
    return p, inst.net_log(inst.big_z(p[8]), p[9])


def packing(rng):
    dim = rng.choice([2, 3])
    m = rng.randint(1, 6)
    delta0 = rng.uniform(0.01, 1.0)
    delta = float(mp.mpf(delta0) * mp.mpf(log_uniform(rng, 1e-12, 1.0)))
    v = 2 ** (-mp.mpf(dim)) * (mp.mpf(delta0) / mp.mpf(delta)) ** ((mp.mpf(dim) - 1) / m)
    return [delta, delta0, dim, m], v


FORMULAS = [
    ("bounded_bound", bounded),
    ("highfreq_bound", highfreq),
    ("extreme_bound", extreme),
    ("lipschitz_bound", lipschitz),
    ("halfspace_eta2", eta2),
    ("eps_tilde", epsk),
    ("delta_large", delta_large),
    ("delta_small", delta_small),
    ("t_tilde", t_tilde),
    ("b_tilde_small", tilde_b),
    ("big_z", big_z),
    ("net_log_size", net_size),
    ("packing", packing),
]


def main():
    rows = ["# name,inputs...,value (mpmath, 50 digits; regenerate with tools/closed_forms.py)"]
    for i, (name, gen) in enumerate(FORMULAS):
        rng = random.Random(1000 + i)
        for _ in range(SAMPLES):
            params, value = gen(rng)
            fields = [name] + [repr(float(x)) if isinstance(x, float) else str(x) for x in params]
            fields.append(repr(float(value)))
            rows.append(",".join(fields))
    OUT.write_text("\n".join(rows) + "\n")


if __name__ == "__main__":
    main()
