#!/usr/bin/env python3
"""Independent oracle computations for the frozen expected values in tests/.

Everything here is computed from first principles (quantile functions and
direct numeric quadrature / brute-force search), deliberately *not* from the
closed forms implemented in the C++ library, so the two sides cross-check
each other.  Run from the repo root:

    python3 tools/oracles/derive_constants.py > tools/oracles/expected.json
"""

import json
import math

import mpmath as mp

mp.mp.dps = 40

OUT = {}


# ---------------------------------------------------------------------------
# Triangle distribution primitives, from the quantile function directly.
# Tr_qb: Q(v) = 1/(1+v(1-qb)) for v <= 1/qb, else 0.  Value in quantile space:
# V(q) = 1/qb on (0,qb], (1-q)/((1-qb)q) on (qb,1].  qb=0 is the equal-revenue
# limit with V(q) = (1-q)/q and Q(v) = 1/(1+v).
# ---------------------------------------------------------------------------

def tri_V(q, qb):
    if qb > 0 and q <= qb:
        return mp.mpf(1) / qb
    return (1 - q) / ((1 - qb) * q)


def tri_Q(v, qb):
    if qb > 0 and v > 1 / mp.mpf(qb):
        return mp.mpf(0)
    return 1 / (1 + v * (1 - qb))


def revbar(p, qb):
    return p * tri_Q(p, qb)


def markup_rev_quad(r, qb):
    """M_r(Tr_qb) by direct quadrature of 2*int_0^1 revbar(r*V(q)) dq, r>1."""
    r, qb = mp.mpf(r), mp.mpf(qb)
    pts = [mp.mpf(0), mp.mpf(1)]
    if qb > 0:
        pts.append(qb)
        # r*V(q) crosses the support top 1/qb at q = r*qb/(1-qb+r*qb)
        pts.append(r * qb / (1 - qb + r * qb))
    pts = sorted(set(pts))
    return 2 * mp.quad(lambda q: revbar(r * tri_V(q, qb), qb), pts)


def markup_rev_closed(r, qb):
    r, qb = mp.mpf(r), mp.mpf(qb)
    return (2 * r / ((1 - qb) * (r - 1))) * (
        (1 - qb) / (1 - qb + qb * r) + mp.log(r / (1 - qb + qb * r)) / (1 - r))


# sanity: the closed form transcription agrees with quadrature
for (r, qb) in [(2, 0), (1.5, 0.3), (2.4469452, 0.0931057), (11, 0.093),
                (1.1, 0.25), (1.1, 0.05), (5, 0.5), (1.18, 0.0931057)]:
    a = markup_rev_quad(r, qb)
    b = markup_rev_closed(r, qb)
    assert abs(a - b) < 1e-20, (r, qb, a, b)

OUT["markup_rev_2_0"] = float(markup_rev_quad(2, 0))          # 4(1-ln2)
OUT["markup_rev_2_0_analytic"] = float(4 * (1 - mp.log(2)))
OUT["markup_rev_11_0p093"] = float(markup_rev_quad(11, 0.093))
OUT["markup_rev_1p1_0p25"] = float(markup_rev_quad(1.1, 0.25))
OUT["markup_rev_1p1_0p05"] = float(markup_rev_quad(1.1, 0.05))
OUT["mix_half_spa_half_m2_tr0"] = float(0.5 * 1 + 0.5 * markup_rev_quad(2, 0))

# grid of closed-form values frozen for the C++ formula test
grid = []
for r in [1.1, 1.5, 2.0, 2.4469452, 3.0, 5.0, 8.0, 11.0]:
    for qb in [0.0, 0.05, 0.093, 0.25, 0.5, 0.75, 0.95]:
        grid.append([r, qb, float(markup_rev_quad(r, qb))])
OUT["markup_rev_grid"] = grid

# limit r -> 1+ equals 1 - qb (the discontinuity at the SPA)
OUT["markup_rev_limit_r1_0p3"] = float(markup_rev_quad(1 + mp.mpf('1e-9'), 0.3))


# ---------------------------------------------------------------------------
# Equilibrium (qb*, r*, alpha*, beta) by independent search.
# ---------------------------------------------------------------------------

def best_r(qb, lo=1.5, hi=6.0):
    f = lambda r: -markup_rev_closed(r, qb)
    # golden section
    gr = (mp.sqrt(5) - 1) / 2
    a, b = mp.mpf(lo), mp.mpf(hi)
    c, d = b - gr * (b - a), a + gr * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(200):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = f(d)
    r = (a + b) / 2
    return r, markup_rev_closed(r, qb)


def crossing():
    lo, hi = mp.mpf('0.05'), mp.mpf('0.2')
    for _ in range(120):
        mid = (lo + hi) / 2
        _, m = best_r(mid)
        if m > 1:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


qbs = crossing()
rs, _ = best_r(qbs)
OUT["qbar_star"] = float(qbs)
OUT["r_star"] = float(rs)
OUT["beta"] = float(2 - qbs)


def mix_rev(alpha, r, qb):
    return alpha * 1 + (1 - alpha) * markup_rev_closed(r, qb)


def best_response_qb(alpha, r):
    f = lambda qb: -(2 - qb) / mix_rev(alpha, r, qb)
    gr = (mp.sqrt(5) - 1) / 2
    a, b = mp.mpf('0.001'), mp.mpf('0.4')
    for _ in range(200):
        c, d = b - gr * (b - a), a + gr * (b - a)
        if f(c) < f(d):
            b = d
        else:
            a = c
    return (a + b) / 2


def solve_alpha():
    lo, hi = mp.mpf('0.8'), mp.mpf('0.81')
    for _ in range(80):
        mid = (lo + hi) / 2
        if best_response_qb(mid, rs) > qbs:
            lo = mid   # best response decreasing in alpha
        else:
            hi = mid
    return (lo + hi) / 2


als = solve_alpha()
OUT["alpha_star"] = float(als)
OUT["best_response_qb_at_0p81"] = float(best_response_qb(mp.mpf('0.81'), rs))
OUT["best_response_qb_at_0p80"] = float(best_response_qb(mp.mpf('0.80'), rs))


# ---------------------------------------------------------------------------
# Second derivative of 1/APX: finite differences of the definition.
# ---------------------------------------------------------------------------

def inv_apx(alpha, r, qb):
    return mix_rev(alpha, r, qb) / (2 - qb)


def d2_fd(alpha, r, qb, h=mp.mpf('1e-10')):
    alpha, r, qb = map(mp.mpf, (alpha, r, qb))
    return (inv_apx(alpha, r, qb + h) - 2 * inv_apx(alpha, r, qb)
            + inv_apx(alpha, r, qb - h)) / h ** 2


pts = []
for al in [0.8, 0.805, 0.81]:
    for r in [2.445, 2.447, 2.449]:
        for qb in [0.093, 0.0935, 0.094]:
            pts.append([al, r, qb, float(d2_fd(al, r, qb))])
OUT["d2_inv_apx_fd"] = pts
OUT["d2_inv_apx_box_min"] = float(min(p[3] for p in pts))


# ---------------------------------------------------------------------------
# Gap (triangle) supporting sweeps.
# ---------------------------------------------------------------------------

def apx_mix(qb):
    return (2 - qb) / mix_rev(als, rs, qb)


def apx_m11(qb):
    return (2 - qb) / markup_rev_closed(mp.mpf('1.1'), qb)


m11_min_apx = min(apx_m11(mp.mpf(q) / 100000) for q in range(5000, 25001, 10))
m11_rev_min = min(markup_rev_closed(mp.mpf('1.1'), mp.mpf(q) / 100000)
                  for q in range(5000, 25001, 10))
OUT["m11_min_apx_on_band"] = float(m11_min_apx)
OUT["m11_rev_floor_on_band"] = float(m11_rev_min)
OUT["m11_apx_at_0p05"] = float(apx_m11(mp.mpf('0.05')))

out_grid = [mp.mpf(q) / 100000 for q in range(1, 5001, 5)] + \
           [mp.mpf(q) / 100000 for q in range(25000, 99001, 50)]
opt_mech_apx_out = max(apx_mix(qb) for qb in out_grid)
OUT["opt_mech_apx_max_outside_band"] = float(opt_mech_apx_out)
OUT["opt_mech_apx_at_0p05"] = float(apx_mix(mp.mpf('0.05')))
OUT["opt_mech_apx_at_0p25"] = float(apx_mix(mp.mpf('0.25')))

delta = mp.mpf('0.00154')
beta_hat = 2 - qbs
caseA = 1 / ((1 + delta) / beta_hat - delta / 2)
caseB = 1 / ((1 + delta) / mp.mpf('1.9041') - delta)
OUT["gap_triangle_caseA"] = float(caseA)
OUT["gap_triangle_caseB"] = float(caseB)
OUT["gap_triangle_beta_prime"] = float(max(caseA, caseB))
OUT["gap_triangle_margin"] = float(beta_hat - max(caseA, caseB))


# ---------------------------------------------------------------------------
# Gap (regular): the dominated-revenue upper bound, by direct evaluation.
# ---------------------------------------------------------------------------

def dominated_bound(r, q1, q2, d1, d2):
    r, q1, q2, d1, d2 = map(mp.mpf, (r, q1, q2, d1, d2))
    q3 = q2 / (1 - q1 + q2)
    q4 = r * q2 * (1 - q2 * d2) / (1 - q2 + r * q2 * (1 - d2))
    qhat = r * q1 / (1 - q1 + r * q1)          # \hat{Q}(q1, 1/r)
    t1 = r * q1 * q3 * d1 / (q1 * r - (1 - d1) * q2)
    i1 = mp.quad(lambda q: r * q1 * d1 * (1 - q) /
                 (r * q1 * (1 - q) - q * (1 - d1) * (1 - q1)), [q3, qhat])
    t3 = q4 - qhat
    i2 = mp.quad(lambda q: (1 / (1 - q2)) * (1 - q2 * d2 -
                 (1 - q2 * d2) * (1 - d2) /
                 (-r * (1 - d2) + r * (1 - q2 * d2) / q + (1 - d2))), [q4, 1])
    return 2 * (t1 + i1 + t3 + i2), (q3, q4, qhat)


db, (q3, q4, qh) = dominated_bound('1.18', '0.09', '0.098', '0.01', '0.01')
OUT["dominated_bound_1p18"] = float(db)
OUT["dominated_q3"] = float(q3)
OUT["dominated_q4"] = float(q4)
OUT["m118_rev_tr_0p093"] = float(markup_rev_quad(1.18, 0.093))

# regular-gap case arithmetic with delta = 5.21e-6
dg = mp.mpf('5.21e-6')
band_grid = [mp.mpf(q) / 1000000 for q in range(90500, 96001, 5)]
apx_in_band = max(apx_mix(qb) for qb in band_grid)
out2_grid = [mp.mpf(q) / 1000000 for q in range(1, 90500, 50)] + \
            [mp.mpf(q) / 1000000 for q in range(96000, 990001, 500)]
apx_out_band = max(apx_mix(qb) for qb in out2_grid)
OUT["apx_max_inside_0p0905_0p096"] = float(apx_in_band)
OUT["apx_max_outside_0p0905_0p096"] = float(apx_out_band)

# dominated, normalized distributions have monopoly quantile in [q1, q2],
# hence OPT >= 2 - q2 = 1.902
dom_case = 1 / ((1 + dg) / apx_in_band - dg * db / (2 - mp.mpf('0.098')))
case1 = 1 / ((1 + dg) / apx_out_band - dg)
case2a = 1 / ((1 + dg) * (1 / apx_in_band + mp.mpf('0.0005') / 2) - dg)
m_over_opt_2b = (1 / apx_in_band * mp.mpf('1.905') + mp.mpf('0.0009') * als) / \
                (mp.mpf('1.905') + mp.mpf('0.0009'))
case2b = 1 / ((1 + dg) * m_over_opt_2b - dg)
OUT["gap_regular_case_dominated"] = float(dom_case)
OUT["gap_regular_case1"] = float(case1)
OUT["gap_regular_case2a"] = float(case2a)
OUT["gap_regular_case2b"] = float(case2b)
bp = max(dom_case, case1, case2a, case2b)
OUT["gap_regular_beta_prime"] = float(bp)
OUT["gap_regular_margin"] = float((2 - qbs) - bp)


# ---------------------------------------------------------------------------
# Quadrilateral checks.
# ---------------------------------------------------------------------------

def quad_Q_paper(v, qb, qp, r):
    """Quantile function as displayed for Qr_{qb,qp,r}."""
    v, qb, qp, r = map(mp.mpf, (v, qb, qp, r))
    if v < 1 / (r * qb):
        return qp / (qp + v * r * qb * (1 - qp))
    if v <= 1 / qb:
        return qp * qb * (r - 1) / (v * r * qb * (qp - qb) + (r * qb - qp))
    return mp.mpf(0)


def quad_V_vertices(q, qb, qp, r):
    """Value map from the vertex form (0,0),(qb,1),(qp,qp/(r qb)),(1,0)."""
    q, qb, qp, r = map(mp.mpf, (q, qb, qp, r))
    if q <= qb:
        return 1 / qb
    h = qp / (r * qb)
    if q <= qp:
        R = 1 + (h - 1) * (q - qb) / (qp - qb)
    else:
        R = h * (1 - q) / (1 - qp)
    return R / q


# equivalence of displayed quantile function and vertex form
qb, qp, r = mp.mpf('0.25'), mp.mpf('0.45'), mp.mpf('2')
worst = mp.mpf(0)
for i in range(1, 400):
    q = mp.mpf(i) / 400
    if q <= qb:
        continue
    v = quad_V_vertices(q, qb, qp, r)
    worst = max(worst, abs(quad_Q_paper(v, qb, qp, r) - q))
OUT["quad_quantile_equiv_worst_err"] = float(worst)
OUT["spa_quad_0p25_0p5_2"] = float(mp.mpf('0.5') + (1 - mp.mpf('0.25')) *
                                   mp.mpf('0.5') / (2 * mp.mpf('0.25')))


# ---------------------------------------------------------------------------
# Pricing explorations.
# ---------------------------------------------------------------------------

def S(q):
    x = 1 - mp.mpf(q)
    if x == 0:
        return mp.mpf(0)
    return (mp.polylog(2, x) - x) / x


OUT["S_0p5"] = float(S('0.5'))
OUT["S_0"] = float(mp.pi ** 2 / 6 - 1)


def A(beta, q):
    beta, q = mp.mpf(beta), mp.mpf(q)
    return (beta + 2 * (1 - beta) * S(q)) / (2 - q)


# dense brute force for the max-min
qgrid = [mp.mpf(i) / 2000 for i in range(1, 2001)]
Sg = [S(q) for q in qgrid]
best = (mp.mpf(-1), None, None)
b = mp.mpf('0.70')
while b <= mp.mpf('0.95'):
    inner = min((b + 2 * (1 - b) * s) / (2 - q) for q, s in zip(qgrid, Sg))
    if inner > best[0]:
        best = (inner, b, None)
    b += mp.mpf('0.0005')
OUT["quad_pricing_maxmin_beta"] = float(best[1])
OUT["quad_pricing_maxmin_alpha"] = float(best[0])
OUT["A_at_0p8435_min_over_q"] = float(
    min(A('0.8435', mp.mpf(i) / 10000) for i in range(1, 10001)))

# fixed-q indifference
T1 = mp.mpf(1) / 4                      # q = 1
T0 = mp.pi ** 2 / 6 - 1                 # q -> 0
OUT["indiff_alpha_q1"] = float(2 * T1 / (1 + 2 * T1))
OUT["indiff_alpha_q0"] = float(2 * T0 / (1 + 2 * T0))

# anonymous truncation
g = lambda t: (3 * t + 1) / (t * (t + 1) ** 2)
OUT["int_g_1_inf"] = float(mp.quad(g, [1, mp.inf]))
OUT["one_plus_ln2"] = float(1 + mp.log(2))
x = (mp.mpf(3) / 4) / (1 + mp.log(2))
OUT["anon_beta"] = float(x / (1 + x))
OUT["anon_alpha"] = float(mp.mpf(4) / 3 * x / (1 + x))


# ---------------------------------------------------------------------------
# Expert learning spot values.
# ---------------------------------------------------------------------------

def ftl_alternating(n, k):
    """Exact FTL payoff on the alternating instance."""
    total = mp.mpf(0)
    V = [0] * k
    for t in range(1, n + 1):
        row = [1] + [0] * (k - 1) if t % 2 == 1 else [0] + [1] * (k - 1)
        m = max(V)
        lead = [j for j in range(k) if V[j] == m]
        total += mp.mpf(sum(row[j] for j in lead)) / len(lead)
        V = [V[j] + row[j] for j in range(k)]
    return total


OUT["ftl_alt_4_2"] = float(ftl_alternating(4, 2))
OUT["ftl_alt_4_3"] = float(ftl_alternating(4, 3))
OUT["ftl_alt_100_4"] = float(ftl_alternating(100, 4))
OUT["ftl_alt_regret_100_4"] = float(50 - ftl_alternating(100, 4))

print(json.dumps(OUT, indent=2))
