"""The planar array seen through its spatial spectrum.

Builds the 128x64 half-wavelength channel for a few arrival directions,
locates the energy in the 2-D DFT domain, and shows how fast the
captured power falls off as the beam is mis-steered - the reason the
mechanical stage must land within a fraction of a degree.
"""

import math

import numpy as np

from beamtrack.channel import (
    ArrayGeometry,
    PathComponent,
    channel_matrix,
    matched_weights,
    nrsp,
    spatial_spectrum,
    vec,
)

D2R = math.pi / 180.0
geom = ArrayGeometry(128, 64)

print("Spatial spectrum peak bin vs arrival direction:")
for az_deg, el_deg in [(0.0, 0.0), (5.0, 0.0), (10.0, 60.0)]:
    h = channel_matrix(geom, [PathComponent(az_deg * D2R, el_deg * D2R)])
    spec = spatial_spectrum(h)
    peak = tuple(int(i) for i in np.unravel_index(np.argmax(spec), spec.shape))
    share = float(spec[peak] ** 2 / (spec**2).sum())
    print(
        f"  arrival ({az_deg:5.1f}, {el_deg:5.1f}) deg -> bin {str(peak):>10}, "
        f"{share:6.1%} of energy in the peak bin"
    )
print()

print("Captured power of a broadside beam vs pointing offset (row axis):")
w0 = np.zeros(geom.size)
print(f"  {'offset [deg]':>12} {'nrsp':>8}")
for off in (0.0, 0.1, 0.2, 0.3, 0.5, 0.7, 0.895):
    h = vec(channel_matrix(geom, [PathComponent(off * D2R, 0.0)]))
    print(f"  {off:12.3f} {nrsp(w0, h):8.4f}")
print()
print("The first null sits near 0.9 deg for 128 half-wavelength rows; at")
print("0.3 deg the beam already loses a third of its power, which the")
print("electrical stage is there to recover.")

h = vec(channel_matrix(geom, [PathComponent(0.3 * D2R, 45 * D2R)]))
w = matched_weights(geom, 0.3 * D2R, 45 * D2R)
print(f"matched weights at the true arrival restore nrsp = {nrsp(w, h):.6f}")
