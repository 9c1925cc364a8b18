"""Compiled variance recursions for the component GARCH-in-mean model."""

import numpy as np
from numba import jit

VARIANCE_FLOOR = 1e-10

TRANSFORM_IDENTITY = 0
TRANSFORM_LN = 1
TRANSFORM_SQRT = 2


@jit(nopython=True, nogil=True, cache=True)
def in_mean_term(sigma2, transform):
    if transform == TRANSFORM_LN:
        return np.log(sigma2)
    if transform == TRANSFORM_SQRT:
        return np.sqrt(sigma2)
    return sigma2


@jit(nopython=True, nogil=True, cache=True)
def _step(e2_prev, sigma2_prev, q_prev, d_prev, z1_t, z2_t,
          omega, rho_q, phi_q, alpha_s, kappa_lev, beta_s):
    q_t = omega + rho_q * (q_prev - omega) + phi_q * (e2_prev - sigma2_prev) + z1_t
    shock = e2_prev - q_prev
    s_t = alpha_s * shock + kappa_lev * shock * d_prev + beta_s * (sigma2_prev - q_prev) + z2_t
    return q_t, q_t + s_t


@jit(nopython=True, nogil=True, cache=True)
def filter_path(resid_mean, delta, transform, z1, z2, unrest_d, use_unrest_d,
                omega, rho_q, phi_q, alpha_s, kappa_lev, beta_s, v0,
                eps, sigma2, q):
    """
    Run the recursion over observed data.

    ``resid_mean`` is y minus every mean term except the in-mean one. Fills
    ``eps``, ``sigma2`` and ``q`` in place and returns how many times a
    variance hit the floor.
    """
    floors = 0
    e2_prev = v0
    sigma2_prev = v0
    q_prev = v0
    d_prev = 0.5
    for t in range(resid_mean.shape[0]):
        q_t, sigma2_t = _step(e2_prev, sigma2_prev, q_prev, d_prev, z1[t], z2[t],
                              omega, rho_q, phi_q, alpha_s, kappa_lev, beta_s)
        if q_t < VARIANCE_FLOOR:
            q_t = VARIANCE_FLOOR
            floors += 1
        if sigma2_t < VARIANCE_FLOOR:
            sigma2_t = VARIANCE_FLOOR
            floors += 1
        eps_t = resid_mean[t] - delta * in_mean_term(sigma2_t, transform)
        eps[t] = eps_t
        sigma2[t] = sigma2_t
        q[t] = q_t
        e2_prev = eps_t * eps_t
        sigma2_prev = sigma2_t
        q_prev = q_t
        if use_unrest_d:
            d_prev = unrest_d[t]
        else:
            d_prev = 1.0 if eps_t < 0 else 0.0
    return floors


@jit(nopython=True, nogil=True, cache=True)
def simulate_path(z, xb, phi_lag, y_pre, delta, transform, z1, z2, unrest_d, use_unrest_d,
                  omega, rho_q, phi_q, alpha_s, kappa_lev, beta_s, v0,
                  y, sigma2, q):
    """Generate y, sigma2 and q from unit-variance draws ``z``; returns the floor count."""
    floors = 0
    e2_prev = v0
    sigma2_prev = v0
    q_prev = v0
    d_prev = 0.5
    y_prev = y_pre
    for t in range(z.shape[0]):
        q_t, sigma2_t = _step(e2_prev, sigma2_prev, q_prev, d_prev, z1[t], z2[t],
                              omega, rho_q, phi_q, alpha_s, kappa_lev, beta_s)
        if q_t < VARIANCE_FLOOR:
            q_t = VARIANCE_FLOOR
            floors += 1
        if sigma2_t < VARIANCE_FLOOR:
            sigma2_t = VARIANCE_FLOOR
            floors += 1
        eps_t = np.sqrt(sigma2_t) * z[t]
        y_t = xb[t] + phi_lag * y_prev + delta * in_mean_term(sigma2_t, transform) + eps_t
        y[t] = y_t
        sigma2[t] = sigma2_t
        q[t] = q_t
        e2_prev = eps_t * eps_t
        sigma2_prev = sigma2_t
        q_prev = q_t
        y_prev = y_t
        if use_unrest_d:
            d_prev = unrest_d[t]
        else:
            d_prev = 1.0 if eps_t < 0 else 0.0
    return floors
