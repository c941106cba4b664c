import mpmath as mp

mp.mp.dps = 120


def run(c, alpha, parity, modes, size=56):
    c = mp.mpf(c)
    alpha = mp.mpf(alpha)

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

    off = parity  # 0 even, 1 odd
    A = mp.zeros(size)
    for j in range(size):
        A[j, j] = diag_entry(2 * j + off)
        if j + 1 < size:
            A[j, j + 1] = coupling_entry(2 * j + off)
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

    # orthonormal values and derivatives at x = 0
    kmax = 2 * size + 2
    a_coef = [mp.mpf(0), 1 / mp.sqrt(3 + 2 * alpha)]
    for k in range(2, kmax + 1):
        kf = mp.mpf(k)
        a_coef.append(mp.sqrt((kf * (kf + 2 * alpha)) / ((2 * kf + 2 * alpha + 1) * (2 * kf + 2 * alpha - 1))))
    P = [1 / mp.sqrt(h_norm(0)), mp.mpf(0)]
    D = [mp.mpf(0), P[0] / a_coef[1]]
    for k in range(1, kmax):
        P.append(-a_coef[k] * P[k - 1] / a_coef[k + 1])
        D.append((P[k] - a_coef[k] * D[k - 1]) / a_coef[k + 1])

    h0 = h_norm(0)
    T = [t_factor(2 * j + off) for j in range(size)]
    P1 = [p_at_one(2 * j + off) for j in range(size)]
    out = []
    for n in modes:
        m = (n - off) // 2
        d = [Q[j, m] for j in range(size)]
        phi1 = mp.fsum(d[j] * P1[j] for j in range(size))
        if phi1 < 0:
            d = [-x for x in d]
            phi1 = -phi1
        nu_ref = mp.fsum(d[j] * T[j] for j in range(size)) / phi1
        if off == 0:
            phi0 = mp.fsum(d[j] * P[2 * j] for j in range(size))
            nu_new = mp.sqrt(h0) * d[0] / phi0
            c0 = max(abs(d[j] * P[2 * j]) for j in range(size)) / abs(phi0)
        else:
            dphi0 = mp.fsum(d[j] * D[2 * j + 1] for j in range(size))
            nu_new = c * mp.sqrt(h0) * a_coef[1] * d[0] / dphi0
            c0 = max(abs(d[j] * D[2 * j + 1]) for j in range(size)) / abs(dphi0)
        agree = abs(nu_new - nu_ref) / nu_ref
        out.append((n, nu_ref, c0, agree))
        print(f"  n={n:3d}  nu={mp.nstr(nu_ref, 12):>20}  x0cancel={mp.nstr(c0, 3):>8}  "
              f"agree={mp.nstr(agree, 2)}")
    return out


print("c=pi alpha=-3/4 odd:")
run(mp.pi, -0.75, 1, [1, 5, 9, 21, 41])
print("c=pi alpha=0 even+odd:")
run(mp.pi, 0, 0, [0, 2, 10, 30])
run(mp.pi, 0, 1, [1, 11, 31])
print("c=2pi alpha=1:")
run(2 * mp.pi, 1, 0, [0, 2, 20])
run(2 * mp.pi, 1, 1, [1, 21])
print("c=5pi alpha=1 even:")
run(5 * mp.pi, 1, 0, [0, 10])
print("c=5pi alpha=0 even/odd (approx demo regime):")
run(5 * mp.pi, 0, 0, [0, 16, 30])
run(5 * mp.pi, 0, 1, [17])
