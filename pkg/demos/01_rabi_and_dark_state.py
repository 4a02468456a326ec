"""Single-atom basics: resonant Rabi flopping and the dark state.

A resonant drive on the |1>-|3> transition cycles the population as
sin^2(pi f t); with both fields on, the superposition
cos(theta)|1> - sin(theta)|2> with tan(theta) = probe/coupling is
decoupled from the light and does not develop optical coherence.
"""

from pathlib import Path

import numpy as np

from lsim import DensityMatrix, MediumParams, Pulse, PulseSequence, Transition, evolve
from lsim.output import render_svg, write_csv

OUT = Path(__file__).parent / "out" / "01_rabi_and_dark_state"

no_decay = MediumParams(gamma12_khz=0.0, gamma13_khz=0.0, gamma23_khz=0.0)

# --- Rabi flopping at 100 kHz: one full cycle every 10 us -----------------
seq = PulseSequence([Pulse(Transition.PROBE, 100.0, 0.0, 30.0)], 30.0)
ts, _ = evolve(DensityMatrix.ground(1), seq, no_decay, dt_us=0.001)
model = np.sin(np.pi * 0.1 * ts.t_us) ** 2
print("Rabi flopping, 100 kHz drive:")
print(f"  population transfer at 5 us: {ts.channel('pop3')[5000]:.6f} (expected 1)")
print(f"  max |pop3 - sin^2(pi f t)| over 3 cycles: {np.max(np.abs(ts.channel('pop3') - model)):.2e}")
write_csv(ts, OUT / "rabi_flopping.csv")
render_svg(ts, OUT / "rabi_flopping.svg",
           {"title": "resonant Rabi flopping", "channels": ["pop1", "pop3"]})

# --- dark state: stationary under both fields ------------------------------
wp, wc = 40.0, 80.0
theta = np.arctan2(wp, wc)
psi = np.array([np.cos(theta), -np.sin(theta), 0.0], dtype=complex)
dark = DensityMatrix(np.outer(psi, psi.conj()))
both_on = PulseSequence([Pulse(Transition.PROBE, wp, 0.0, 50.0),
                         Pulse(Transition.COUPLING, wc, 0.0, 50.0)], 50.0)
ts_dark, _ = evolve(dark, both_on, no_decay, dt_us=0.005)
print("dark state under simultaneous drive:")
print(f"  max |Im rho13| over 50 us: {np.max(np.abs(ts_dark.channel('im_rho13'))):.2e}")
print(f"  ground populations stay at {ts_dark.channel('pop1')[-1]:.4f} / "
      f"{ts_dark.channel('pop2')[-1]:.4f}")
write_csv(ts_dark, OUT / "dark_state.csv")
print(f"outputs in {OUT}")
