"""Extended-precision forward kinematics written independently of the package.

Solves for the arc angles with mpmath at 40 digits by requiring the three
arm vectors to sum to zero, then reads yaw/pitch/roll off the platform frame.
"""

import mpmath as mp

mp.mp.dps = 40


def _arm(r2, theta0, theta, phi):
    c0, s0 = mp.cos(theta0), mp.sin(theta0)
    ct, st, cp, sp = mp.cos(theta), mp.sin(theta), mp.cos(phi), mp.sin(phi)
    return mp.matrix([r2 * (-cp * st + sp * c0 * ct), r2 * (cp * ct + sp * c0 * st), r2 * sp * s0])


def fk(r1, r2, h, theta, phi_guess=(0, 0, 0)):
    theta0 = mp.atan(mp.mpf(r1) / mp.mpf(h))
    thetas = [mp.mpf(t) for t in theta]

    def closure(*phi):
        total = _arm(r2, theta0, thetas[0], phi[0]) + _arm(r2, theta0, thetas[1], phi[1])
        total += _arm(r2, theta0, thetas[2], phi[2])
        return [total[0], total[1], total[2]]

    phi = mp.findroot(closure, [mp.mpf(g) for g in phi_guess])
    u = [_arm(r2, theta0, thetas[k], phi[k]) / r2 for k in range(3)]
    col2 = u[0]
    col1 = (u[1] + col2 / 2) / (mp.sqrt(3) / 2)
    col3 = mp.matrix([
        col1[1] * col2[2] - col1[2] * col2[1],
        col1[2] * col2[0] - col1[0] * col2[2],
        col1[0] * col2[1] - col1[1] * col2[0],
    ])
    alpha = mp.atan2(col1[1], col1[0])
    beta = mp.atan2(-col1[2], mp.sqrt(col2[2] ** 2 + col3[2] ** 2))
    gamma = mp.atan2(col2[2], col3[2])
    return (alpha, beta, gamma), [phi[0], phi[1], phi[2]]


def jacobian(r1, r2, h, theta, step=mp.mpf("1e-12")):
    """Central differences at 40 digits; truncation error ~ step**2."""
    cols = []
    for j in range(3):
        plus = list(map(mp.mpf, theta))
        minus = list(map(mp.mpf, theta))
        plus[j] += step
        minus[j] -= step
        a, _ = fk(r1, r2, h, plus)
        b, _ = fk(r1, r2, h, minus)
        cols.append([(a[i] - b[i]) / (2 * step) for i in range(3)])
    return [[float(cols[j][i]) for j in range(3)] for i in range(3)]
