# %% [markdown]
# # Z_2-equivariant homology over F_2
#
# Finite cellular models with an involution, their truncated equivariant
# complexes `F_2[w]/(w^{N+1}) (x) C`, the spectral sequence of the
# w-filtration and the first page of the action filtration built from chord
# indices.

# %%
import numpy as np

from symreeb.homf2 import (ChordComponent, build_equivariant, equivariant_homology, expected_positive_hw,
                           fixtures, long_exact_sequence, morse_bott_e1, spectral_sequence,
                           spectrum_from_iterates)
from symreeb.errors import RelationError
from symreeb.symplin import HalfInt

N = 8


def nz(H):
    return {k: v for k, v in sorted(H.items()) if v}


# %% [markdown]
# ## Fixtures
# The antipodal sphere gives the homology of projective space; a point with
# trivial action gives the ladder `F_2[w]` up to the truncation.

# %%
print("point      ", nz(equivariant_homology(fixtures.point(), N)))
for n in (1, 2, 3):
    E = build_equivariant(fixtures.sphere_antipodal(n), N)
    H = nz(E.homology())
    print(f"S^{n} / -1   ", {k: v for k, v in H.items() if k <= E.stable_top}, f"(stable to {E.stable_top})")
print("(B^2, S^1) ", nz(equivariant_homology(fixtures.ball_relative(2), N)))

# %% [markdown]
# `phi_1 = id` on a point violates `phi_1 phi_1 = 0`, which enters at order 2.

# %%
try:
    build_equivariant(fixtures.point(twisted=True), 2)
except RelationError as exc:
    print("RelationError:", exc)

# %% [markdown]
# ## Spectral sequence of the w-filtration
# `E^1_{p,q} = H_q(C)`; `d^1` is induced by `phi_1 = 1 + sigma`.

# %%
E = build_equivariant(fixtures.two_point_swap(), 4)
for page in spectral_sequence(E):
    print(f"E^{page.r}:", dict(sorted(page.dims.items())))

# %% [markdown]
# ## Long exact sequence of (B^2, S^1)

# %%
Z, keep = fixtures.ball_pair(2)
E = build_equivariant(Z, N)
base = np.zeros(Z.base.total_dim, dtype=bool)
off = Z.base.offsets()
for q, ix in keep.items():
    base[[off[q] + i for i in ix]] = True
les = long_exact_sequence(E.chains, np.tile(base, N + 1))
print("exact:", les.exact, " alternating sum:", les.alternating_sum)

# %% [markdown]
# ## Morse-Bott first page from chord indices
# Iterates of the two ellipsoid chords, grouped by action; a pair of
# non-degenerate chords of index `mu` sits in degree `mu - n/2 + 1/2`.

# %%
s2 = np.sqrt(2.0)
mu = lambda r, l: HalfInt(2 * l + 1 + 2 * int(np.floor(l * r)))  # noqa: E731
levels = spectrum_from_iterates([("c1", 0.5, [mu(1 / s2, l) for l in range(1, 5)]),
                                 ("c2", s2 / 2, [mu(s2, l) for l in range(1, 4)])])
page = morse_bott_e1(levels, 2)
for (p, q), d in sorted(page.dims.items()):
    T, comps = levels[p]
    print(f"T = {T:.4f}  {comps[0].label:5s} degree {p + q}")
print("total:", page.total_dims())
print("expected from the ball:", expected_positive_hw({2: 1}, 2, 6))

# %%
fam = ChordComponent(mu=HalfInt(3), dim=1, homology={0: 1, 1: 1}, label="circle")
print("a circle family at index 3/2:", morse_bott_e1([(1.0, [fam])], 2).dims)
