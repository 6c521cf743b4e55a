#!/usr/bin/env python3
# Copyright 2026 The nanorod-lifshitz developers
#
# Licensed under the Apache license, version 2.0 (the "license");
# you may not use this file except in compliance with the license.
# You may obtain a copy of the license at
#
#     http://www.apache.org/licenses/license-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the license is distributed on an "as is" basis,
# without warranties or conditions of any kind, either express or implied.
# See the license for the specific language governing permissions and
# limitations under the license.

"""Writes zno_loss.dat: a representative real-axis loss spectrum eps2(omega).

The spectrum is a sum of damped Lorentz lines
    eps2(w) = sum_j C_j w_j^2 g_j w / ((w_j^2 - w^2)^2 + g_j^2 w^2),
electronic (interband) absorption only, so the static value is about 3.7.
Its Kramers-Kronig image on the imaginary axis is
    eps(i xi) = 1 + sum_j C_j / (1 + (xi/w_j)^2 + g_j xi / w_j^2).
Replace the file with measured or computed loss data of the same format
(two whitespace-separated columns, omega in rad/s and eps2) to use it.
"""

import math
import sys

# (C, omega_rad_s, damping_rad_s)
LINES = [
    (2.70, 1.0e16, 1.0e15),
]
W_MIN, W_MAX, PER_DECADE = 1e13, 1e18, 400


def eps2(w):
    return sum(c * wj * wj * g * w / ((wj * wj - w * w) ** 2 + (g * w) ** 2) for c, wj, g in LINES)


def main(path):
    n = int(round(math.log10(W_MAX / W_MIN) * PER_DECADE))
    with open(path, "w") as f:
        f.write("# representative ZnO loss spectrum, generated by generate_zno_loss.py\n")
        f.write("# lines (C, omega_rad_s, g_rad_s): %s\n" % ", ".join("(%g, %g, %g)" % l for l in LINES))
        f.write("# omega_rad_s eps2\n")
        for i in range(n + 1):
            w = W_MIN * (W_MAX / W_MIN) ** (i / n)
            f.write("%.10e %.10e\n" % (w, eps2(w)))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "zno_loss.dat")
