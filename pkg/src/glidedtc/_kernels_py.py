"""Pure-Python (numpy) fallback for the compiled chain kernels.

Same basis convention as _kernels.pyx: bit i of the basis index is spin i,
bit value 0 = up (sigma_z = +1).
"""

from functools import lru_cache

import numpy as np

from .numcore.integrate import _solve_adaptive

MU_X, MU_Y, MU_Z = 0, 1, 2


@lru_cache(maxsize=32)
def _tables(L, mu, periodic):
    dim = 1 << L
    idx = np.arange(dim)
    bits = [(idx >> i) & 1 for i in range(L)]
    flip = [idx ^ (1 << i) for i in range(L)]
    sz = np.stack([1.0 - 2.0 * b for b in bits]).sum(axis=0)
    # sigma_y sign per site: bit 1 receives +i, bit 0 receives -i
    yfac = [1j * (2.0 * b - 1.0) for b in bits]
    pairs = [(i, i + 1) for i in range(L - 1)]
    if periodic and L > 2:
        pairs.append((L - 1, 0))
    pair_flip = [idx ^ ((1 << i) | (1 << j)) for i, j in pairs]
    if mu == MU_Y:
        pair_fac = [np.where(bits[i] == bits[j], -1.0, 1.0) for i, j in pairs]
    elif mu == MU_Z:
        pair_fac = [(1.0 - 2.0 * bits[i]) * (1.0 - 2.0 * bits[j]) for i, j in pairs]
    else:
        pair_fac = [np.ones(dim) for _ in pairs]
    return flip, yfac, sz, pair_flip, pair_fac


def chain_apply(psi, L, a, b, J, eps, mu, periodic):
    """H psi for drive coefficients a (sigma_x) and b (sigma_y) per site."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape[0] != (1 << L):
        raise ValueError("state dimension must be 2**L")
    flip, yfac, sz, pair_flip, pair_fac = _tables(L, mu, periodic)
    out = np.zeros_like(psi)
    for i in range(L):
        out += (a + b * yfac[i]) * psi[flip[i]]
    if eps != 0.0:
        out += eps * sz * psi
    if J != 0.0:
        if mu == MU_Z:
            for fac in pair_fac:
                out += J * fac * psi
        else:
            for f, fac in zip(pair_flip, pair_fac):
                out += J * fac * psi[f]
    return out


def chain_evolve(psi0, L, alpha, omega, J, eps, mu, periodic, t_out, tol, max_steps):
    """Adaptive RK45 chain evolution sampled at t_out (generic integrator)."""
    Omega = alpha * omega / 8.0

    def rhs(t, psi):
        a = 0.5 * Omega * np.sin(omega * t)
        s = np.sin(0.5 * omega * t)
        return -1j * chain_apply(psi, L, a, Omega * s * s, J, eps, mu, periodic)

    return _solve_adaptive(rhs, np.asarray(psi0, dtype=complex), t_out, tol, max_steps)
