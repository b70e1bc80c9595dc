"""Small dense linear algebra for kets and operators on a few N-level registers.

Kets are 1-D complex numpy arrays and operators are square 2-D complex arrays.
Multi-register states are flattened row-major, so for registers (R, A, B, C)
the amplitude of |r a b c> sits at ((r*N + a)*N + b)*N + c.
"""

from __future__ import annotations

from functools import reduce
from typing import Sequence

import numpy as np

ATOL = 1e-12


def as_ket(amps) -> np.ndarray:
    """Return ``amps`` as a read-only complex vector, rejecting NaN/inf."""
    v = np.array(amps, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise ValueError(f"a ket must be a non-empty 1-D array, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("ket amplitudes must be finite")
    v.setflags(write=False)
    return v


def as_op(entries) -> np.ndarray:
    m = np.array(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"an operator must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("operator entries must be finite")
    m.setflags(write=False)
    return m


def basis_ket(k: int, dim: int) -> np.ndarray:
    if not 0 <= k < dim:
        raise ValueError(f"basis index {k} out of range for dimension {dim}")
    v = np.zeros(dim, dtype=complex)
    v[k] = 1.0
    v.setflags(write=False)
    return v


def tensor(*kets: np.ndarray) -> np.ndarray:
    """Kronecker product of kets; ``tensor(a, b)[i*len(b) + j] == a[i]*b[j]``."""
    if not kets:
        raise ValueError("tensor needs at least one factor")
    for k in kets:
        if not np.all(np.isfinite(k)):
            raise ValueError("tensor factors must be finite")
    return reduce(np.kron, kets)


def inner(a: np.ndarray, b: np.ndarray) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def norm(v: np.ndarray) -> float:
    return float(np.linalg.norm(v))


def normalize(v: np.ndarray) -> np.ndarray:
    n = norm(v)
    if n < ATOL:
        raise ValueError("cannot normalize a zero vector")
    return v / n


def projector(v: np.ndarray) -> np.ndarray:
    return np.outer(v, v.conj())


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def is_unitary(m: np.ndarray, atol: float = ATOL) -> bool:
    return bool(np.allclose(dagger(m) @ m, np.eye(m.shape[0]), rtol=0, atol=atol))


def is_hermitian(m: np.ndarray, atol: float = ATOL) -> bool:
    return bool(np.allclose(m, dagger(m), rtol=0, atol=atol))


def is_projector(m: np.ndarray, atol: float = ATOL) -> bool:
    return is_hermitian(m, atol) and bool(np.allclose(m @ m, m, rtol=0, atol=atol))


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, atol: float = ATOL) -> bool:
    """True iff two normalized kets differ by a global phase only."""
    return abs(abs(inner(a, b)) - 1.0) <= atol


def partial_trace(rho: np.ndarray, keep: int | Sequence[int],
                  dims: Sequence[int]) -> np.ndarray:
    """Trace out every register of ``rho`` except those listed in ``keep``.

    ``dims`` gives the register dimensions in flattening order.  The kept
    registers come out in ascending register order.
    """
    dims = tuple(int(d) for d in dims)
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise ValueError(f"operator of shape {rho.shape} does not match dims {dims}")
    keep = sorted({keep} if isinstance(keep, (int, np.integer)) else set(keep))
    if any(not 0 <= k < len(dims) for k in keep):
        raise ValueError(f"keep={keep} out of range for {len(dims)} registers")
    n = len(dims)
    t = rho.reshape(dims + dims)
    # einsum subscripts: bra/ket indices shared for traced registers
    letters = "abcdefghijklmnopqrstuvwxyz"
    ket = list(letters[:n])
    bra = [letters[n + i] if i in keep else ket[i] for i in range(n)]
    out = [ket[i] for i in keep] + [bra[i] for i in keep]
    res = np.einsum("".join(ket) + "".join(bra) + "->" + "".join(out), t)
    d = int(np.prod([dims[i] for i in keep])) if keep else 1
    return res.reshape(d, d)


def reduced_density(psi: np.ndarray, keep: int | Sequence[int],
                    dims: Sequence[int]) -> np.ndarray:
    """Reduced density operator of a pure multi-register state."""
    dims = tuple(int(d) for d in dims)
    if psi.size != int(np.prod(dims)):
        raise ValueError(f"state of length {psi.size} does not match dims {dims}")
    keep = sorted({keep} if isinstance(keep, (int, np.integer)) else set(keep))
    rest = [i for i in range(len(dims)) if i not in keep]
    t = np.transpose(psi.reshape(dims), keep + rest)
    d = int(np.prod([dims[i] for i in keep]))
    m = t.reshape(d, -1)
    return m @ m.conj().T


def permute_registers(psi: np.ndarray, dims: Sequence[int],
                      order: Sequence[int]) -> np.ndarray:
    """Reorder the registers of ``psi``: output register ``i`` is input ``order[i]``."""
    dims = tuple(int(d) for d in dims)
    if sorted(order) != list(range(len(dims))):
        raise ValueError(f"order {order} is not a permutation of {len(dims)} registers")
    return np.transpose(psi.reshape(dims), order).reshape(-1)


def apply_local(psi: np.ndarray, op: np.ndarray, register: int,
                dims: Sequence[int]) -> np.ndarray:
    """Apply ``op`` to one register of a multi-register state."""
    dims = tuple(int(d) for d in dims)
    if op.shape != (dims[register], dims[register]):
        raise ValueError("operator does not match register dimension")
    t = psi.reshape(dims)
    t = np.moveaxis(np.tensordot(op, t, axes=([1], [register])), 0, register)
    return t.reshape(-1)


def kron_ops(*ops: np.ndarray) -> np.ndarray:
    return reduce(np.kron, ops)
