import mpmath as mp

mp.mp.dps = 120

c = mp.pi
alpha = mp.mpf(-3) / 4


def diag_entry(k):
    kf = mp.mpf(k)
    unpert = kf * (kf + 2 * alpha + 1)
    if k == 0:
        shift = c**2 / (2 * alpha + 3)
    elif k == 1:
        shift = 3 * c**2 / (2 * alpha + 5)
    else:
        shift = c**2 * (2 * kf * (kf + 2 * alpha + 1) + 2 * alpha - 1) / (
            (2 * kf + 2 * alpha + 3) * (2 * kf + 2 * alpha - 1))
    return unpert - shift


def coupling_entry(k):
    kf = mp.mpf(k)
    if k == 0:
        return -c**2 * mp.sqrt(2 * (2 * alpha + 2) / (2 * alpha + 5)) / (2 * alpha + 3)
    num = (kf + 1) * (kf + 2) * (kf + 2 * alpha + 1) * (kf + 2 * alpha + 2)
    den = (2 * kf + 2 * alpha + 5) * (2 * kf + 2 * alpha + 1)
    return -c**2 / (2 * kf + 2 * alpha + 3) * mp.sqrt(num / den)


SIZE = 56  # even modes, K = 110
A = mp.zeros(SIZE)
for j in range(SIZE):
    A[j, j] = diag_entry(2 * j)
    if j + 1 < SIZE:
        A[j, j + 1] = coupling_entry(2 * j)
        A[j + 1, j] = A[j, j + 1]

E, Q = mp.eigsy(A)

def h_norm(k):
    kf = mp.mpf(k)
    if k == 0:
        return 2**(2 * alpha + 1) * mp.beta(alpha + 1, alpha + 1)
    return 2**(2 * alpha + 1) * mp.gamma(kf + alpha + 1)**2 / (
        mp.factorial(k) * (2 * kf + 2 * alpha + 1) * mp.gamma(kf + 2 * alpha + 1))


def p_at_one(k):
    return mp.gamma(k + alpha + 1) / (mp.gamma(alpha + 1) * mp.factorial(k) * mp.sqrt(h_norm(k)))


def t_factor(k):
    kf = mp.mpf(k)
    return (2**(2 * kf + 3 * alpha + mp.mpf(3) / 2) * mp.gamma(kf + alpha + mp.mpf(3) / 2)
            * mp.beta(kf + alpha + 1, kf + alpha + 1) / (mp.sqrt(h_norm(k)) * mp.factorial(k))
            * mp.besseli(kf + alpha + mp.mpf(1) / 2, c) / c**(alpha + mp.mpf(1) / 2))


def p_values_at_zero(kmax):
    # orthonormal recurrence at x = 0
    vals = [1 / mp.sqrt(h_norm(0))]
    a_prev = 1 / mp.sqrt(3 + 2 * alpha)
    vals.append(mp.mpf(0))
    for k in range(1, kmax):
        kf = mp.mpf(k + 1)
        a_next = mp.sqrt((kf * (kf + 2 * alpha)) / ((2 * kf + 2 * alpha + 1) * (2 * kf + 2 * alpha - 1)))
        vals.append((0 - a_prev * vals[k - 1]) / a_next)
        a_prev = a_next
    return vals


P0 = p_values_at_zero(2 * SIZE)
T = [t_factor(2 * j) for j in range(SIZE)]
P1 = [p_at_one(2 * j) for j in range(SIZE)]
h0 = h_norm(0)

print("mode | nu (truth) | x1_cancel | x0_cancel | d0 | phi(0)")
for m in range(0, 26, 2):
    d = [Q[j, m] for j in range(SIZE)]
    # sign convention phi(1) > 0
    phi1 = mp.fsum(d[j] * P1[j] for j in range(SIZE))
    if phi1 < 0:
        d = [-x for x in d]
        phi1 = -phi1
    num = mp.fsum(d[j] * T[j] for j in range(SIZE))
    nu = num / phi1
    max_term = max(abs(d[j] * T[j]) for j in range(SIZE))
    cancel1 = max_term / abs(num)
    phi0 = mp.fsum(d[j] * P0[2 * j] for j in range(SIZE))
    max0 = max(abs(d[j] * P0[2 * j]) for j in range(SIZE))
    cancel0 = max0 / abs(phi0) if phi0 != 0 else mp.inf
    nu_x0 = mp.sqrt(h0) * d[0] / phi0
    agree = abs(nu_x0 - nu) / nu
    n = 2 * m
    print(f"n={n:3d} nu={mp.nstr(nu, 8):>16} x1cancel={mp.nstr(cancel1, 4):>12} "
          f"x0cancel={mp.nstr(cancel0, 4):>10} d0={mp.nstr(d[0], 4):>12} "
          f"phi0={mp.nstr(phi0, 4):>10} x0agree={mp.nstr(agree, 3)}")
