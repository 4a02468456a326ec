"""Steady-state transparency window and the dispersive group delay.

The coupling field splits the bare absorption line into an
Autler-Townes doublet at +-coupling/2 and opens a transparency window
at line center whose depth is set by the spin dephasing.  The steep
dispersion inside the window predicts the slow-light group delay, which
scales with medium length and density and inversely with the coupling
power.
"""

from pathlib import Path

import numpy as np

from lsim import MediumParams, group_delay, steady_state_coherence, susceptibility_spectrum
from lsim.core import TimeSeries
from lsim.output import render_svg, write_text

OUT = Path(__file__).parent / "out" / "04_transparency_and_dispersion"

params = MediumParams(gamma12_khz=0.0, gamma13_khz=1.0, gamma23_khz=1.0,
                      length_mm=3.0, coupling_const=4.2)
grid = np.linspace(-150.0, 150.0, 601)
spec = susceptibility_spectrum(params, grid, 10.0, 100.0)

i0 = len(grid) // 2
print("transparency window (coupling 100 kHz):")
print(f"  chi_im at line center: {spec.chi_im[i0]:.3e}")
peaks = [float(grid[i]) for i in range(1, len(grid) - 1)
         if spec.chi_im[i] > spec.chi_im[i - 1] and spec.chi_im[i] > spec.chi_im[i + 1]]
print(f"  doublet absorption peaks near {peaks} kHz")

lines = ["delta_p_khz,chi_re,chi_im"]
lines += [f"{d!r},{re!r},{im!r}" for d, re, im
          in zip(spec.delta_p_khz, spec.chi_re, spec.chi_im)]
write_text(OUT / "spectrum.csv", "\n".join(lines) + "\n")
render_svg(TimeSeries(grid - grid[0], {"chi_re": spec.chi_re, "chi_im": spec.chi_im}),
           OUT / "spectrum.svg",
           {"title": "susceptibility (x axis offset by 150 kHz)",
            "x_label": "delta_p + 150 (kHz)"})

print("window depth vs spin dephasing:")
for g12 in (0.0, 0.1, 0.318, 1.0):
    p = MediumParams(gamma12_khz=g12, gamma13_khz=1.0, gamma23_khz=1.0)
    rho13 = steady_state_coherence(p, 0.0, 10.0, 100.0)
    print(f"  gamma12 = {g12:5.3f} kHz: |Im rho13| at center = {abs(rho13.imag):.3e}")

fine = np.linspace(-5.0, 5.0, 11)
gd = group_delay(susceptibility_spectrum(params, fine, 10.0, 100.0), params)
print("group delay at the default operating point:")
print(f"  delay {gd.delay_us:.2f} us over {params.length_mm} mm "
      f"(vacuum transit {gd.vacuum_transit_us * 1e6:.1f} ps)")

print("delay vs coupling amplitude (expected exponent -2):")
ocs = [80.0, 100.0, 120.0, 140.0]
delays = [group_delay(susceptibility_spectrum(params, fine, 5.0, oc), params).delay_us
          for oc in ocs]
exponent = np.polyfit(np.log(ocs), np.log(delays), 1)[0]
for oc, d in zip(ocs, delays):
    print(f"  coupling {oc:5.1f} kHz: delay {d:8.2f} us")
print(f"  fitted exponent: {exponent:+.4f}")
print(f"outputs in {OUT}")
