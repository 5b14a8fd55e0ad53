"""Reference numpy implementations of the dense state-vector kernels.

These are used when the compiled extension is unavailable and serve as the
oracle the compiled versions are tested against.
"""

import numpy as np


def _strides(dims):
    strides = np.ones(len(dims), dtype=np.int64)
    for i in range(len(dims) - 2, -1, -1):
        strides[i] = strides[i + 1] * dims[i + 1]
    return strides


def apply_two_site(psi, dims, k, l, op):
    """Apply a two-site operator ``op`` acting on sites ``(k, l)`` (in that order)."""
    dims = [int(d) for d in dims]
    tensor = np.asarray(psi, dtype=np.complex128).reshape(dims)
    dk, dl = dims[k], dims[l]
    op4 = np.asarray(op, dtype=np.complex128).reshape(dk, dl, dk, dl)
    out = np.tensordot(op4, tensor, axes=([2, 3], [k, l]))
    out = np.moveaxis(out, [0, 1], [k, l])
    return np.ascontiguousarray(out).reshape(-1)


def block_offsets(dims, sites):
    """Flat-index offset of every block configuration, block index in row-major order."""
    strides = _strides(dims)
    offs = np.zeros(1, dtype=np.int64)
    for s in sites:
        offs = (offs[:, None] + np.arange(dims[s], dtype=np.int64)[None, :] * strides[s]).reshape(-1)
    return offs


def env_bases(dims, sites):
    """Flat indices of all basis states whose block digits are all zero."""
    strides = _strides(dims)
    env = [i for i in range(len(dims)) if i not in set(sites)]
    bases = np.zeros(1, dtype=np.int64)
    for s in env:
        bases = (bases[:, None] + np.arange(dims[s], dtype=np.int64)[None, :] * strides[s]).reshape(-1)
    return bases


def matrix_unit_expectations(psi, dims, sites):
    """Table ``E[a, b] = <psi| (|b><a| on the block) |psi>`` for all block configurations."""
    psi = np.asarray(psi, dtype=np.complex128)
    offs = block_offsets(dims, sites)
    bases = env_bases(dims, sites)
    gathered = psi[offs[:, None] + bases[None, :]]
    return gathered @ gathered.conj().T
