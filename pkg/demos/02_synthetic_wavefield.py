# Synthesizes one wave-field volume and visualizes a few frames and the
# depth-averaged space-time map. Figures are written to demos/output/.

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from shearwave import Geometry, SceneSpec, generate_wavefield, noise_sigma_for_snr, space_time_map

out_dir = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(out_dir, exist_ok=True)

# A 56 kPa scene at 600 Hz with a laterally decaying wave, a tissue surface
# at depth pixel 40, and 20 dB SNR.
geometry = Geometry(width_px=118, depth_px=200, frames=208,
                    dx_m=1e-4, dz_m=1e-5, dt_s=1 / 11400)
spec = SceneSpec(
    e_true_pa=56e3,
    excitation_frequency_hz=600.0,
    lateral_attenuation_m=8e-3,
    surface_index=40,
    noise_sigma=noise_sigma_for_snr(1.0, 20.0),
    geometry=geometry,
    seed=42,
    source_id="demo",
)
volume = generate_wavefield(spec)
print(f"volume: {volume.frames} frames x {volume.depth_px} x {volume.width_px} px,"
      f" ground truth {volume.meta.ground_truth_e_pa / 1e3:.0f} kPa")

# Three snapshots of the propagating wave.
fig, axes = plt.subplots(1, 3, figsize=(12, 3.2), sharey=True)
for ax, frame in zip(axes, (0, 4, 8)):
    ax.imshow(volume.data[frame], aspect="auto", cmap="seismic", vmin=-1.2, vmax=1.2)
    ax.set_title(f"frame {frame}")
    ax.set_xlabel("lateral px")
axes[0].set_ylabel("depth px")
fig.suptitle("Propagating shear wave (displacement phase)")
fig.tight_layout()
fig.savefig(os.path.join(out_dir, "wavefield_frames.png"), dpi=120)

# The space-time map: depth-averaged, lateral position vs time. The slope of
# the stripes is the phase velocity.
stm = space_time_map(volume)
plt.figure(figsize=(6, 4))
plt.imshow(stm.values, aspect="auto", cmap="seismic",
           extent=[0, volume.frames * volume.dt_s * 1e3,
                   volume.width_px * volume.dx_m * 1e3, 0])
plt.xlabel("time [ms]")
plt.ylabel("lateral position [mm]")
plt.title("Space-time map (mean over depth)")
plt.tight_layout()
plt.savefig(os.path.join(out_dir, "space_time_map.png"), dpi=120)

print(f"figures saved to {out_dir}")
