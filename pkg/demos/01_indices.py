# %% [markdown]
# # Indices of symplectic and Lagrangian paths
#
# Two routes to the same half-integer: counting crossings of a Lagrangian
# path with a reference, and counting negative eigenvalues of a discretized
# boundary-value operator.

# %%
import numpy as np

from symreeb.iterate import ChordPath, winding_indices
from symreeb.maslov import LagrangianPath, rs_index, rs_index_graph, rs_index_report
from symreeb.specflow import IMAG, REAL, SymmetricMatrixPath, label_spectrum, mu_spectral
from symreeb.symplin import LagrangianFrame, SymplecticPath, rotation

L0 = LagrangianFrame.horizontal(1)

# %% [markdown]
# ## A rotating line
# `R(pi t) L0` meets `L0` at both ends of `[0, 1]`; endpoint crossings count half.

# %%
path = LagrangianPath(lambda t: rotation(np.pi * t) @ L0.F, 0.0, 1.0, 1)
rep = rs_index_report(path, L0)
print("index", rep.index)
for c in rep.crossings:
    print(f"  crossing at t = {c.t:.4f}, signature {c.signature:+d}, weight {c.weight}")

# %% [markdown]
# ## Conley-Zehnder index of a rotation
# The closed orbit of the short axis of the ellipsoid E(1, sqrt 2) rotates by
# one full turn in the first plane and by 1/sqrt 2 of a turn in the second.

# %%
d = [2 * np.pi, 2 * np.pi / np.sqrt(2)]
print("CZ =", rs_index_graph(SymplecticPath.constant_generator(np.diag(d + d))))

# %% [markdown]
# ## Spectral route
# For `S = theta Id` the operator `-J0 d/dt - S` with real boundary
# conditions has eigenvalues `pi (k - 1) - theta`.

# %%
theta = 2.0
ladder = label_spectrum(theta * np.eye(2), REAL, 512)
print("lambda_0..2:", [round(ladder[k], 4) for k in range(3)])
print("expected:   ", [round(np.pi * (k - 1) - theta, 4) for k in range(3)])
print("mu_spectral:", mu_spectral(theta * np.eye(2), REAL, N_grid=512))

# %% [markdown]
# ## Random time-dependent paths
# The two definitions agree on non-degenerate paths.

# %%
rng = np.random.default_rng(0)
for trial in range(5):
    A, B = rng.standard_normal((2, 2, 2))
    S = lambda t, A=A, B=B: 1.5 * (A + A.T) + np.cos(3 * t) * (B + B.T)  # noqa: E731
    phi = SymplecticPath.from_generator(S, 1.0, 1)
    spec = mu_spectral(SymmetricMatrixPath(S, 1.0, 1), REAL, N_grid=512)
    cross = rs_index(LagrangianPath.from_symplectic(phi, L0), L0)
    print(f"trial {trial}: spectral {spec}, crossings {cross}")

# %% [markdown]
# ## Iterating a chord
# For a rotation chord the iterates are rotations by `l theta`.

# %%
c = ChordPath.from_generator(1.3 * np.eye(2), 1.0)
print([str(x) for x in winding_indices(c, 8)])
