# Copyright 2026 The relspace Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Dense numpy reference values frozen into tests/unit/test_frozen.cpp.

Kets: <x|p> = e^{ipx}/sqrt(d) on rod and system, <t|E> = e^{iEt}/sqrt(d_C),
global state sum_k c_k |-eps_k>_C |-p_k>_R |p_k>_S with p_k = (k - 1) 2pi/L.
"""
import math

import numpy as np
from scipy import integrate, special

c = np.array([0.6, 0.48, 0.64])
L, M, m = 2 * math.pi, 2.0, 1.0
p = np.array([-1.0, 0.0, 1.0]) * 2 * math.pi / L
eps = p**2 / (2 * M) + p**2 / (2 * m)

clock_levels = np.unique(-eps)
rod_levels = np.sort(-p)
sys_levels = np.sort(p)
psi = np.zeros((len(clock_levels), 3, 3), dtype=complex)
for k in range(3):
    ic = np.argmin(abs(clock_levels + eps[k]))
    ir = np.argmin(abs(rod_levels + p[k]))
    i_s = np.argmin(abs(sys_levels - p[k]))
    psi[ic, ir, i_s] += c[k]


def bra(levels, x):
    return np.exp(1j * levels * x) / math.sqrt(len(levels))


def amp(t, x, y):
    return np.einsum("c,r,s,crs->", bra(clock_levels, t), bra(rod_levels, x),
                     bra(sys_levels, y), psi)


gap = np.diff(clock_levels).min()
T = 2 * math.pi / gap
D = 8
x_j = 2 * L / D
t_m = 3 * T / D
a = np.array([abs(amp(t_m, x_j, l * L / D))**2 for l in range(D)])
print("discrete j=2 m=3 D=8:", ", ".join(f"{v:.17g}" for v in a / a.sum()))

x, t, y = 0.3, 1.1, 1.7
num = abs(amp(t, x, y))**2
den = integrate.quad(lambda yy: abs(amp(t, x, yy))**2, 0, L, limit=200)[0]
print(f"density x=0.3 t=1.1 y=1.7: {num / den:.17g}")

# Paper closed form for the three-level universe with D_S = 3.
e = (2 * math.pi / L)**2 * (1 / (2 * M) + 1 / (2 * m))
tt, dd = 0.7, 0.4
k = 2 * math.pi / L
cf = (1 / 3 + 2 / 3 * c[0] * c[1] * math.cos(e * tt + k * dd) +
      2 / 3 * c[1] * c[2] * math.cos(e * tt - k * dd) +
      2 / 3 * c[0] * c[2] * (1 - 2 * math.sin(k * dd)**2))
print(f"closed form t=0.7 delta=0.4: {cf:.17g}")

# Two-time propagator restricted to zero total momentum, orthogonal frames.
pr, ps = np.meshgrid(rod_levels, sys_levels, indexing="ij")
H = np.diag((pr**2 / (2 * M) + ps**2 / (2 * m)).ravel())
P0 = np.diag((abs(pr + ps) < 1e-12).ravel().astype(float))


def ket(j, l):
    xr, ys = j * L / 3, l * L / 3
    return np.kron(np.exp(-1j * rod_levels * xr), np.exp(-1j * sys_levels * ys)) / 3


dt = 4 * T / 9
U = np.diag(np.exp(-1j * np.diag(H) * dt))
for (j1, l1), (j2, l2) in [((0, 1), (1, 2)), ((0, 0), (2, 1))]:
    v = abs(ket(j2, l2).conj() @ U @ P0 @ ket(j1, l1))**2
    print(f"propagator ({j1},{l1})->({j2},{l2}) dt=4T/9: {v:.17g}")

# Oscillator momentum wavefunction by Fourier transform of the position one.
kk, mass, omega, pp = 3, 2.0, 0.7, 0.9
s = math.sqrt(mass * omega)


def phi(xx):
    u = s * xx
    h = special.eval_hermite(kk, u) * math.exp(-u * u / 2)
    return math.sqrt(s) * h / math.sqrt(2**kk * math.factorial(kk) * math.sqrt(math.pi))


re = integrate.quad(lambda xx: math.cos(pp * xx) * phi(xx), -40, 40, limit=400)[0]
im = integrate.quad(lambda xx: -math.sin(pp * xx) * phi(xx), -40, 40, limit=400)[0]
print(f"oscillator k=3 M=2 w=0.7 p=0.9: {re / math.sqrt(2 * math.pi):.17g} "
      f"{im / math.sqrt(2 * math.pi):.17g}")
