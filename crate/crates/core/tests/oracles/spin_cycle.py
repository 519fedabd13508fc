"""Extended-precision reference values for the frozen oracle tests.

Evaluates Boltzmann populations and cycle energetics directly with 50-digit
arithmetic, independently of the Rust implementation. Run with mpmath
installed; output is pasted into tests/oracle.rs.
"""
from mpmath import mp, mpf, exp, findroot, diff, nstr

mp.dps = 50


def spin_levels(j, h):
    return [(-8 * j, 1), (-2 * h, 1), (mpf(0), 1), (2 * h, 1)]


def qutrit_levels(j, h):
    return [(-8 * j, 1), (-2 * h, 1), (2 * h, 1)]


def custom_levels(lam):
    # idle -7 (x2), working c = -2, 0.5 (x3), 3
    return [(mpf(-7), 2), (-2 * lam, 1), (mpf("0.5") * lam, 3), (3 * lam, 1)]


def pops(levels, t):
    w = [g * exp(-e / t) for e, g in levels]
    z = sum(w)
    return [x / z for x in w]


def cycle(levels_a, levels_b, t_a, t_b):
    pa, pb = pops(levels_a, t_a), pops(levels_b, t_b)
    ea = [e for e, _ in levels_a]
    eb = [e for e, _ in levels_b]
    dp = [a - b for a, b in zip(pa, pb)]
    q_a = sum(e * d for e, d in zip(ea, dp))
    q_b = -sum(e * d for e, d in zip(eb, dp))
    w_ba = sum(p * (b - a) for p, a, b in zip(pb, ea, eb))
    w_ab = sum(p * (a - b) for p, a, b in zip(pa, ea, eb))
    return dict(Q_a=q_a, Q_b=q_b, W_ba=w_ba, W_ab=w_ab, W=q_a + q_b, dp=dp)


def show(name, d):
    print(name)
    for k, v in d.items():
        if isinstance(v, list):
            print(" ", k, [nstr(x, 20) for x in v])
        else:
            print(" ", k, nstr(v, 20))


def f_spin(h, j, t):
    p = pops(spin_levels(j, h), t)
    return p[1] - p[3]


def gap(j, h_a, h_b):
    peak = lambda h, x0: findroot(lambda t: diff(lambda u: f_spin(h, j, u), t), x0)
    t_b0 = peak(h_b, 3)
    level = f_spin(h_b, j, t_b0)
    t_peak = peak(h_a, 3)
    t_a1 = findroot(lambda t: f_spin(h_a, j, t) - level, (mpf("0.3"), t_peak), solver="anderson")
    t_a2 = findroot(lambda t: f_spin(h_a, j, t) - level, (t_peak, mpf(100)), solver="anderson")
    return dict(T_a1=t_a1, T_b0=t_b0, T_a2=t_a2, Gbar_max=level)


if __name__ == "__main__":
    j, h_a, h_b = mpf("0.7"), mpf(2), mpf(1)
    show("spin J=0.7 h=2/1 T_a=5 T_b=1", cycle(spin_levels(j, h_a), spin_levels(j, h_b), 5, 1))
    show("qutrit J=0.7 h=2/1 T_a=5 T_b=1", cycle(qutrit_levels(j, h_a), qutrit_levels(j, h_b), 5, 1))
    show("qutrit J=0.7 h=2/1 T_a=0.3 T_b=4", cycle(qutrit_levels(j, h_a), qutrit_levels(j, h_b), mpf("0.3"), 4))
    show("custom lambda=3/1 T_a=2.5 T_b=0.7",
         cycle(custom_levels(mpf(3)), custom_levels(mpf(1)), mpf("2.5"), mpf("0.7")))
    show("spin J=0.24 h=2/1 T_a=1e4 T_b=0.05",
         cycle(spin_levels(mpf("0.24"), h_a), spin_levels(mpf("0.24"), h_b), mpf(10) ** 4, mpf("0.05")))
    show("gap J=0.7", gap(j, h_a, h_b))
    show("gap J=1.0", gap(mpf(1), h_a, h_b))
