# Demonstrates the linear elastic material model E = q*rho*2(1+nu)*v^2 and
# the least-squares calibration of the scaling factor q.

import numpy as np

from shearwave import (
    DEFAULT_MODEL,
    MaterialModel,
    calibrate_q,
    velocity_from_youngs_modulus,
    youngs_modulus_from_velocity,
)

# The default model: q = 0.84, rho = 1000 kg/m^3, nu = 0.5 (incompressible
# soft tissue). Young's modulus grows quadratically with phase velocity.
print("velocity -> modulus under the default model")
for v in (1.0, 2.0, 4.714, 7.427, 10.0):
    e = youngs_modulus_from_velocity(v, DEFAULT_MODEL)
    print(f"  v = {v:6.3f} m/s  ->  E = {e / 1e3:8.2f} kPa")

# The four gelatin stiffness levels and the velocities they imply.
print("\ngelatin levels -> velocity")
for e in (17e3, 56e3, 97e3, 139e3):
    v = velocity_from_youngs_modulus(e, DEFAULT_MODEL)
    print(f"  E = {e / 1e3:5.0f} kPa  ->  v = {v:5.3f} m/s")

# Calibration: suppose velocities were measured on samples with known
# moduli, but the model's q is unknown. calibrate_q fits it in closed form.
rng = np.random.default_rng(0)
truth = MaterialModel(q=0.84)
levels = np.repeat([17e3, 56e3, 97e3, 139e3], 5)
velocities = np.array([velocity_from_youngs_modulus(e, truth) for e in levels])

q_clean = calibrate_q(velocities, levels, MaterialModel(q=1.0))
q_noisy = calibrate_q(velocities * (1 + 0.03 * rng.standard_normal(levels.size)),
                      levels, MaterialModel(q=1.0))
print(f"\ncalibrated q, noise-free measurements : {q_clean:.6f}")
print(f"calibrated q, 3% velocity noise       : {q_noisy:.6f}")
