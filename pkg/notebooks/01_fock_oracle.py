"""
Brute-force QFI in a truncated Fock basis
=========================================

A coherent probe is written out photon number by photon number, pushed
through the Kerr phase exp(i tau (chi n(n+1) + omega n)), and the QFI is
read off the fidelity between two nearby interaction times. The closed
form 4N((omega + 2(N+1) chi)^2 + 2N chi^2) should come out to about 1e-9.
"""

# %%
import itertools

import numpy as np

from kerrgrav import Probe, numeric_qfi, qfi_kerr

# %%
# One point in detail: N = 1, chi = omega = 1 gives H = 108.
probe = Probe.from_photon_number(1.0, omega=1.0, chi=1.0)
print("numeric", numeric_qfi(probe), "closed form", qfi_kerr(probe).value)

# %%
# The whole small-N grid.
rows = []
for N, chi, omega in itertools.product([0.5, 1, 2, 4], [0, 0.1, 1], [0, 1, 10]):
    p = Probe.from_photon_number(N, omega=omega, chi=chi)
    exact = qfi_kerr(p).value
    got = numeric_qfi(p)
    rows.append((N, chi, omega, exact, abs(got - exact) / exact if exact else got))

rows = np.array(rows)
print(f"worst relative error: {rows[:, 4].max():.2e}")

# %%
# The numeric value is independent of where along the evolution we look.
p = Probe.from_photon_number(3.0, omega=2.0, chi=0.3)
print([round(numeric_qfi(p, tau), 6) for tau in (0.0, 0.5, 7.0)])
