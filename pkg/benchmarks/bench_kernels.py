"""Benchmark the compiled mollification kernels against the NumPy fallback.

Run:  python benchmarks/bench_kernels.py
"""
import time

import numpy as np

from cavitas import PowerLawEnergy, build_fan, shoot_cavity_solution
from cavitas.constitutive import ShiftedInversePowerStress
from cavitas.mollify import BUMP_NORM, RadialMotion, gauss_rule
from cavitas._kernels import _fallback

try:
    from cavitas._kernels import _core
except ImportError:
    _core = None


def bench(label, fn, *args, repeats=5):
    fn(*args)                      # warm up
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    sol = shoot_cavity_solution(PowerLawEnergy(1, 1, 1.25, 1), 3.0)
    motion = RadialMotion.from_solution(sol)
    fan = build_fan(ShiftedInversePowerStress(2.0, 1.0), 2.0, 1.0)
    glx, glw = gauss_rule(24)
    subdiv = 6
    n = 32.0

    R = np.linspace(1e-4, motion.sigma * 1.3, 4000)
    rad_args = (R, 1.0, n, motion.knots_s, motion.knots_phi, motion.knots_a,
                motion.sigma, motion.lam, BUMP_NORM, glx, glw, subdiv)

    x = np.linspace(-2.5, 2.5, 4000)
    fan_args = (x, 1.0, n, fan.sigma, fan.alpha, fan.lam, fan.Y0,
                BUMP_NORM, glx, glw, subdiv)

    rows = []
    t_py, out_py = bench("python", _fallback.mollify_radial_batch, *rad_args)
    rows.append(("radial", "python", t_py, len(R) / t_py, 1.0, 0.0))
    if _core is not None:
        t_c, out_c = bench("compiled", _core.mollify_radial_batch, *rad_args)
        dev = max(np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(a)))
                  for a, b in zip(out_py, out_c))
        rows.append(("radial", "compiled", t_c, len(R) / t_c, t_py / t_c, dev))

    t_py, out_py = bench("python", _fallback.mollify_fan_batch, *fan_args)
    rows.append(("fan", "python", t_py, len(x) / t_py, 1.0, 0.0))
    if _core is not None:
        t_c, out_c = bench("compiled", _core.mollify_fan_batch, *fan_args)
        dev = max(np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(a)))
                  for a, b in zip(out_py, out_c))
        rows.append(("fan", "compiled", t_c, len(x) / t_c, t_py / t_c, dev))

    print(f"{'kernel':8s} {'backend':9s} {'time':>9s} {'points/s':>12s} "
          f"{'speedup':>8s} {'max rel dev':>12s}")
    for kernel, backend, t, rate, speedup, dev in rows:
        print(f"{kernel:8s} {backend:9s} {t * 1e3:8.2f}ms {rate:12.0f} "
              f"{speedup:7.1f}x {dev:12.2e}")
    if _core is None:
        print("\n(compiled extension not built; run pip install -e . "
              "--no-build-isolation)")


if __name__ == "__main__":
    main()
