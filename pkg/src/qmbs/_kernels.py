"""Hot loops, each in two flavours: a numba ``@njit`` kernel and a vectorised
numpy fallback. ``QMBS_NUMBA=0`` (or numba missing) selects numpy.

Bit conventions shared by every kernel:

* subset masks put ``v1`` on bit ``n-1`` and ``u_R`` on bit 0;
* dense amplitude index ``i`` stores qubit ``q`` on bit ``Q-1-q`` (qubit 0 is
  the most significant), so the vertex register is the leading ``n`` bits.
"""

from __future__ import annotations

import contextlib
import os

import numpy as np

try:
    import numba
    from numba import njit, prange
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None

if HAVE_NUMBA and "NUMBA_THREADING_LAYER" not in os.environ:
    # skip the TBB probe; old system TBB builds only produce a warning
    numba.config.THREADING_LAYER = "omp"

_SQRT1_2 = 1.0 / np.sqrt(2.0)


def _env_backend() -> str:
    flag = os.environ.get("QMBS_NUMBA", "1").strip().lower()
    if flag in ("0", "false", "no", "off") or not HAVE_NUMBA:
        return "numpy"
    return "numba"


BACKEND = _env_backend()


def set_backend(name: str) -> None:
    global BACKEND
    if name not in ("numpy", "numba"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    BACKEND = name


@contextlib.contextmanager
def backend(name: str):
    prev = BACKEND
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)


def set_threads(count: int) -> None:
    """0 keeps numba's default (all cores)."""
    if HAVE_NUMBA and count > 0:
        numba.set_num_threads(min(count, numba.config.NUMBA_NUM_THREADS))


# ---------------------------------------------------------------- numpy path

def _np_subset_profile(adj, left, right):
    n = left + right
    xs = np.arange(1 << n, dtype=np.int64)
    rmask = (1 << right) - 1
    rpart = xs & rmask
    bic = np.ones(xs.shape, dtype=np.bool_)
    nl = np.zeros(xs.shape, dtype=np.uint8)
    for i in range(left):
        present = ((xs >> (n - 1 - i)) & 1).astype(np.bool_)
        nl += present
        bic &= ~(present & ((rpart & ~adj[i]) != 0))
    nr = np.zeros(xs.shape, dtype=np.uint8)
    for j in range(right):
        nr += ((xs >> j) & 1).astype(np.uint8)
    return bic, nl, nr


def _np_oracle_replay(n, qubits, targets, ctrl_q, ctrl_pol, nctrl, phase_qubit):
    count = 1 << n
    xs = np.arange(count, dtype=np.int64)
    bits = np.zeros((qubits, count), dtype=np.uint8)
    for q in range(n):
        bits[q] = (xs >> (n - 1 - q)) & 1
    sign = np.ones(count, dtype=np.float64)
    for g in range(targets.shape[0]):
        fire = np.ones(count, dtype=np.bool_)
        for c in range(nctrl[g]):
            fire &= bits[ctrl_q[g, c]] == ctrl_pol[g, c]
        t = targets[g]
        if t == phase_qubit:
            sign[fire] *= -1.0
        else:
            bits[t] ^= fire.view(np.uint8)
    restored = ~bits[n:].any(axis=0)
    for q in range(n):
        restored &= bits[q] == ((xs >> (n - 1 - q)) & 1)
    return sign, restored


def _np_apply_h(state, qubits, target):
    # length-1 slices keep every index result a view, even with no free axes
    view = state.reshape((2,) * qubits)
    idx = [slice(None)] * qubits
    idx[target] = slice(0, 1)
    a = view[tuple(idx)]
    idx[target] = slice(1, 2)
    b = view[tuple(idx)]
    s = (a + b) * _SQRT1_2
    d = (a - b) * _SQRT1_2
    a[...] = s
    b[...] = d


def _np_apply_mcx(state, qubits, target, controls, polarities):
    view = state.reshape((2,) * qubits)
    idx = [slice(None)] * qubits
    for c, p in zip(controls, polarities):
        idx[c] = slice(int(p), int(p) + 1)
    idx[target] = slice(0, 1)
    a = view[tuple(idx)]
    idx[target] = slice(1, 2)
    b = view[tuple(idx)]
    tmp = a.copy()
    a[...] = b
    b[...] = tmp


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _nb_subset_profile_kernel(adj, left, right, bic, nl, nr):
        n = left + right
        rmask = (1 << right) - 1
        for x in range(1 << n):
            rpart = x & rmask
            ok = True
            cl = 0
            for i in range(left):
                if (x >> (n - 1 - i)) & 1:
                    cl += 1
                    if rpart & ~adj[i]:
                        ok = False
            cr = 0
            y = rpart
            while y:
                y &= y - 1
                cr += 1
            bic[x] = ok
            nl[x] = cl
            nr[x] = cr

    @njit(cache=True, nogil=True, parallel=True)
    def _nb_oracle_replay_kernel(n, qubits, targets, ctrl_q, ctrl_pol, nctrl, phase_qubit, sign, restored):
        # gate-major over a block of bases keeps the inner loop contiguous
        count = 1 << n
        block = 256 if count > 256 else count
        for b in prange(count // block):
            base = b * block
            bits = np.zeros((qubits, block), dtype=np.uint8)
            s = np.ones(block, dtype=np.float64)
            for q in range(n):
                for x in range(block):
                    bits[q, x] = ((base + x) >> (n - 1 - q)) & 1
            fire = np.empty(block, dtype=np.uint8)
            for g in range(targets.shape[0]):
                fire[:] = 1
                for c in range(nctrl[g]):
                    row = ctrl_q[g, c]
                    pol = ctrl_pol[g, c]
                    for x in range(block):
                        fire[x] &= bits[row, x] == pol
                t = targets[g]
                if t == phase_qubit:
                    for x in range(block):
                        s[x] *= 1.0 - 2.0 * fire[x]
                else:
                    for x in range(block):
                        bits[t, x] ^= fire[x]
            for x in range(block):
                ok = True
                for q in range(n):
                    if bits[q, x] != (((base + x) >> (n - 1 - q)) & 1):
                        ok = False
                for q in range(n, qubits):
                    if bits[q, x]:
                        ok = False
                sign[base + x] = s[x]
                restored[base + x] = ok

    @njit(cache=True, nogil=True, parallel=True)
    def _nb_apply_h_kernel(state, tbit):
        for i in prange(state.shape[0]):
            if not (i & tbit):
                j = i | tbit
                a = state[i]
                b = state[j]
                state[i] = (a + b) * _SQRT1_2
                state[j] = (a - b) * _SQRT1_2

    @njit(cache=True, nogil=True, parallel=True)
    def _nb_apply_mcx_kernel(state, tbit, cmask, cval):
        for i in prange(state.shape[0]):
            if not (i & tbit) and (i & cmask) == cval:
                j = i | tbit
                a = state[i]
                state[i] = state[j]
                state[j] = a


# ---------------------------------------------------------------- dispatch

def subset_profile(adj, left, right):
    """Biclique flag, left count and right count for every subset mask."""
    adj = np.ascontiguousarray(adj, dtype=np.int64)
    if BACKEND == "numba":
        size = 1 << (left + right)
        bic = np.empty(size, dtype=np.bool_)
        nl = np.empty(size, dtype=np.uint8)
        nr = np.empty(size, dtype=np.uint8)
        _nb_subset_profile_kernel(adj, left, right, bic, nl, nr)
        return bic, nl, nr
    return _np_subset_profile(adj, left, right)


def oracle_replay(n, qubits, targets, ctrl_q, ctrl_pol, nctrl, phase_qubit):
    """Replay an X/MCX gate table on every vertex basis state.

    Gates targeting ``phase_qubit`` are treated as kickback: they multiply
    the sign instead of flipping a bit. Returns ``(sign, restored)`` where
    ``restored[x]`` is False if any non-vertex wire ended at 1 or a vertex
    wire changed.
    """
    if BACKEND == "numba":
        size = 1 << n
        sign = np.empty(size, dtype=np.float64)
        restored = np.empty(size, dtype=np.bool_)
        _nb_oracle_replay_kernel(n, qubits, targets, ctrl_q, ctrl_pol, nctrl, phase_qubit, sign, restored)
        return sign, restored
    return _np_oracle_replay(n, qubits, targets, ctrl_q, ctrl_pol, nctrl, phase_qubit)


def apply_h(state, qubits, target):
    if BACKEND == "numba":
        _nb_apply_h_kernel(state, 1 << (qubits - 1 - target))
    else:
        _np_apply_h(state, qubits, target)


def apply_mcx(state, qubits, target, controls, polarities):
    if BACKEND == "numba":
        cmask = 0
        cval = 0
        for c, p in zip(controls, polarities):
            bit = 1 << (qubits - 1 - c)
            cmask |= bit
            if p:
                cval |= bit
        _nb_apply_mcx_kernel(state, 1 << (qubits - 1 - target), cmask, cval)
    else:
        _np_apply_mcx(state, qubits, target, controls, polarities)
