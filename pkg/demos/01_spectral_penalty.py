# %% [markdown]
# # The low-rank penalty
#
# The scheme measures how far a gradient field is from living in a
# k-dimensional subspace through the Gram matrix of its input gradients.
# The penalty is the sum of the n - k smallest eigenvalues of that matrix.
# This notebook checks the two facts everything else leans on: the penalty
# equals an Eckart-Young truncation residual, and a network whose neuron
# directions sit in a k-dimensional subspace has a Gram matrix of rank k.

# %%
import numpy as np

from dualsub import FourierModel, eckart_young_oracle, eigh, gram_matrix, ky_fan_antinorm
from dualsub.quadrature import sample_xi

rng = np.random.default_rng(0)

# %% [markdown]
# ## Anti-norm against the truncated square root
#
# For a PSD matrix m, the sum of its n - k smallest eigenvalues is the
# squared Frobenius distance from sqrt(m) to the nearest rank-k matrix.

# %%
for n, k in [(3, 1), (5, 2), (8, 4)]:
    b = rng.normal(size=(n, n))
    m = b @ b.T
    print(f"n={n} k={k}  anti-norm {ky_fan_antinorm(m, k):.10f}  "
          f"truncation residual {eckart_young_oracle(m, k):.10f}")

# %% [markdown]
# ## Confined directions give a rank-k Gram matrix
#
# Squash every neuron direction onto a random 2-plane in R^6 and look at
# the spectrum of the gradient Gram matrix on Gaussian nodes.

# %%
n, k = 6, 2
model = FourierModel.init(n, 50, seed=1)
basis = np.linalg.qr(rng.normal(size=(n, k)))[0]
print("free network     :", np.round(eigh(gram_matrix(model, sample_xi(n, 500, 2.0, 0))).values, 5))
model.a = model.a @ basis @ basis.T
print("confined network :", np.round(eigh(gram_matrix(model, sample_xi(n, 500, 2.0, 0))).values, 5))

# %% [markdown]
# The confined spectrum has exactly two nonzero eigenvalues; the rest sit at
# round-off, so the penalty of that network is zero.
