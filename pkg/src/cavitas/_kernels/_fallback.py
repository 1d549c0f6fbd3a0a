"""NumPy implementation of the mollification kernels.

Semantics (shared with the compiled core):

A radial motion is stored as cubic-Hermite knots (s, phi, phi') on
[0, sigma] plus the homogeneous branch lam * s outside; the displacement
is w(z, t) = t * phi(|z|/t) extended oddly in z.  The mollified field at
scale n is the convolution with n * bump(n x), evaluated by panelwise
Gauss-Legendre in the unit mollifier variable with panel breaks wherever
the window crosses z = 0 or the shock |z| = sigma t.  The gradient is
assembled from the classical derivative plus the explicit cavity jump
2 w(0, t) n bump(n R): every term is nonnegative, so no cancellation.
"""
import numpy as np


def _bump(x, c):
    out = np.zeros_like(x)
    m = np.abs(x) < 1.0
    xm = x[m]
    out[m] = c * np.exp(-1.0 / (1.0 - xm * xm))
    return out


def _hermite(s, ks, kp, kd):
    """Cubic Hermite value and derivative on the knot arrays."""
    i = np.clip(np.searchsorted(ks, s) - 1, 0, len(ks) - 2)
    h = ks[i + 1] - ks[i]
    u = np.clip((s - ks[i]) / h, 0.0, 1.0)
    um = 1.0 - u
    val = ((1.0 + 2.0 * u) * um * um * kp[i]
           + u * um * um * h * kd[i]
           + u * u * (3.0 - 2.0 * u) * kp[i + 1]
           + u * u * (u - 1.0) * h * kd[i + 1])
    der = (6.0 * u * (u - 1.0) * (kp[i] - kp[i + 1]) / h
           + um * (1.0 - 3.0 * u) * kd[i]
           + u * (3.0 * u - 2.0) * kd[i + 1])
    return val, der


def _panel_nodes(points, t, n, sigma, glx, subdiv):
    """Gauss nodes/half-widths in the mollifier variable, panelled at the
    window crossings of z = 0 and |z| = sigma t."""
    brk = np.stack([np.full_like(points, -1.0),
                    np.clip(n * (points - sigma * t), -1.0, 1.0),
                    np.clip(n * points, -1.0, 1.0),
                    np.clip(n * (points + sigma * t), -1.0, 1.0),
                    np.full_like(points, 1.0)], axis=-1)
    brk = np.sort(brk, axis=-1)
    frac = np.linspace(0.0, 1.0, subdiv + 1)
    a = brk[..., :-1]
    width = brk[..., 1:] - a
    edges = a[..., None] + width[..., None] * frac          # (N, 4, subdiv+1)
    lo = edges[..., :-1].reshape(len(points), -1)
    hi = edges[..., 1:].reshape(len(points), -1)
    mid = 0.5 * (lo + hi)[..., None]
    half = 0.5 * (hi - lo)[..., None]
    zeta = mid + half * glx                                  # (N, P, G)
    return zeta, half


def mollify_radial_batch(R, t, n, knots_s, knots_phi, knots_a, sigma, lam,
                         bump_norm, glx, glw, subdiv):
    """Mollified radial displacement, gradient and velocity at the points R.

    Returns (wn, wn_R, wn_t).
    """
    R = np.ascontiguousarray(R, dtype=float)
    zeta, half = _panel_nodes(R, t, n, sigma, glx, subdiv)
    wgt = half * glw
    z = R[:, None, None] - zeta / n

    az = np.abs(z)
    s = az / t
    inside = s < sigma
    w = lam * az
    wR = np.full_like(az, lam)
    wt = np.zeros_like(az)
    if inside.any():
        si = s[inside]
        val, der = _hermite(si, knots_s, knots_phi, knots_a)
        w[inside] = t * val
        wR[inside] = der
        wt[inside] = val - si * der
    sgn = np.sign(z)

    fb = _bump(zeta, bump_norm)
    wn = np.einsum("npg,npg->n", wgt * fb, sgn * w)
    wnR = np.einsum("npg,npg->n", wgt * fb, wR)
    wnt = np.einsum("npg,npg->n", wgt * fb, sgn * wt)
    w_cav = t * knots_phi[0]
    wnR = wnR + 2.0 * w_cav * n * _bump(n * R, bump_norm)
    return wn, wnR, wnt


def mollify_fan_batch(x, t, n, sigma, alpha, lam, Y0, bump_norm,
                      glx, glw, subdiv):
    """Mollified fracture fan displacement and strain at the points x
    (any sign), time t > 0.  Returns (yn, yn_x)."""
    x = np.ascontiguousarray(x, dtype=float)
    zeta, half = _panel_nodes(x, t, n, sigma, glx, subdiv)
    wgt = half * glw
    z = x[:, None, None] - zeta / n

    inner = np.abs(z) < sigma * t
    y = np.where(inner, np.sign(z) * t * Y0 + alpha * z, lam * z)
    u = np.where(inner, alpha, lam)

    fb = _bump(zeta, bump_norm)
    yn = np.einsum("npg,npg->n", wgt * fb, y)
    ynx = np.einsum("npg,npg->n", wgt * fb, u)
    ynx = ynx + 2.0 * t * Y0 * n * _bump(n * x, bump_norm)
    return yn, ynx
