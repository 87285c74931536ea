"""Independent block-completion route for the extension interval.

Writing a self-adjoint contraction extending a partial map in block form
[[A, B*], [B, C]] over domain ⊕ complement, the admissible lower-right
blocks form the operator interval

    C_min = -I + B (I + A)^{-1} B*,   C_max = I - B (I - A)^{-1} B*.

This route shares no code with the square-root/projection construction in
``extensions.krein_interval``; tests and the verification suite compare the
two against each other.
"""
from __future__ import annotations

import numpy as np

from ._linalg import hermitize, orthonormal_complement


def completion_blocks(t0):
    """(basis, A, B): the partial map in domain ⊕ complement coordinates."""
    d = t0.domain
    e = orthonormal_complement(d)
    a = hermitize(d.conj().T @ t0.action)
    b = e.conj().T @ t0.action
    return np.hstack([d, e]), a, b


def completion_endpoints(t0):
    """(t_min, t_max) ambient endpoint extensions via Schur complements."""
    basis, a, b = completion_blocks(t0)
    m = b.shape[0]
    if m == 0:
        full = basis @ np.block([[a]]) @ basis.conj().T
        return full.copy(), full.copy()
    eye_d = np.eye(a.shape[0])
    c_min = -np.eye(m) + b @ np.linalg.solve(eye_d + a, b.conj().T)
    c_max = np.eye(m) - b @ np.linalg.solve(eye_d - a, b.conj().T)
    def assemble(c):
        blocks = np.block([[a, b.conj().T], [b, hermitize(c)]])
        return hermitize(basis @ blocks @ basis.conj().T)
    return assemble(c_min), assemble(c_max)
