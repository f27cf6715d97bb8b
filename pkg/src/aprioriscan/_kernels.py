"""Counting and intersection kernels, in numba and pure-numpy flavours.

Set ``APRIORISCAN_DISABLE_NUMBA=1`` to force the numpy path. Both backends
return identical counts, scan tallies, and comparison tallies; the numba path
is the fast one and the numpy path exists for environments without a JIT.

Every kernel reports the work it performed alongside its result:

* ``count_all`` / ``count_filtered`` return ``(supports, checks)`` where
  ``checks`` is the number of candidate-vs-transaction containment tests.
* ``intersect_batch`` intersects each parent TID list with one item's TID
  set and returns ``(out_indptr, out_tids, comparisons)``. Every parent TID
  is probed once against the item's row of the membership bitmap, so
  ``comparisons`` is the total parent-list length.
"""
from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

ENV_FLAG = "APRIORISCAN_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_AVAILABLE = numba is not None
NUMBA_ENABLED = NUMBA_AVAILABLE and os.environ.get(ENV_FLAG, "").strip() in ("", "0")

_EMPTY = np.zeros(0, dtype=np.int64)


# ---------------------------------------------------------------------------
# numpy backend


def _np_count_all(db, cands):
    nc, k = cands.shape
    m = db.transaction_count
    counts = np.zeros(nc, dtype=np.int64)
    if nc == 0 or m == 0:
        return counts, nc * m
    bitmap = db.bitmap
    # bound the (m, chunk, k) temporary to ~16M cells
    chunk = max(1, (1 << 24) // max(1, m * k))
    for lo in range(0, nc, chunk):
        block = cands[lo : lo + chunk]
        counts[lo : lo + len(block)] = bitmap[:, block].all(axis=2).sum(axis=0)
    return counts, nc * m


def _np_count_filtered(db, cands, pivots):
    nc = len(cands)
    counts = np.zeros(nc, dtype=np.int64)
    checks = 0
    if nc == 0:
        return counts, 0
    bitmap = db.bitmap
    for pivot in np.unique(pivots):
        sel = np.flatnonzero(pivots == pivot)
        rows = bitmap[db.tid_list(int(pivot))]
        counts[sel] = rows[:, cands[sel]].all(axis=2).sum(axis=0)
        checks += len(rows) * len(sel)
    return counts, checks


def _np_intersect_batch(p_indptr, p_tids, parents, db, items):
    n = len(parents)
    bits = db.item_bitmap
    out_indptr = np.zeros(n + 1, dtype=np.int64)
    pieces = []
    comparisons = 0
    for c in range(n):
        p = parents[c]
        a = p_tids[p_indptr[p] : p_indptr[p + 1]]
        common = a[bits[items[c], a].astype(bool)]
        comparisons += len(a)
        pieces.append(common)
        out_indptr[c + 1] = out_indptr[c] + len(common)
    out = np.concatenate(pieces).astype(np.int64) if pieces else _EMPTY
    return out_indptr, out, comparisons


NUMPY = SimpleNamespace(
    name="numpy",
    count_all=_np_count_all,
    count_filtered=_np_count_filtered,
    intersect_batch=_np_intersect_batch,
)


# ---------------------------------------------------------------------------
# numba backend

if NUMBA_AVAILABLE:
    _jit = numba.njit(cache=True, nogil=True)

    # Containment tests read the transaction-major bitmap one transaction
    # row at a time, exiting at the first missing item.

    @_jit
    def _nb_count_all_kernel(bits, cands):
        nc, k = cands.shape
        m = bits.shape[0]
        counts = np.zeros(nc, dtype=np.int64)
        for t in range(m):
            row = bits[t]
            for c in range(nc):
                hit = True
                for j in range(k):
                    if not row[cands[c, j]]:
                        hit = False
                        break
                if hit:
                    counts[c] += 1
        return counts, nc * m

    @_jit
    def _nb_count_filtered_kernel(bits, v_indptr, v_tids, cands, pivots):
        # candidates sharing a pivot share its transactions; visit each once
        nc, k = cands.shape
        counts = np.zeros(nc, dtype=np.int64)
        order = np.argsort(pivots, kind="mergesort")
        checks = 0
        lo = 0
        while lo < nc:
            p = pivots[order[lo]]
            hi = lo
            while hi < nc and pivots[order[hi]] == p:
                hi += 1
            for r in range(v_indptr[p], v_indptr[p + 1]):
                row = bits[v_tids[r]]
                for q in range(lo, hi):
                    c = order[q]
                    hit = True
                    for j in range(k):
                        if not row[cands[c, j]]:
                            hit = False
                            break
                    if hit:
                        counts[c] += 1
            checks += (hi - lo) * (v_indptr[p + 1] - v_indptr[p])
            lo = hi
        return counts, checks

    @_jit
    def _nb_intersect_kernel(p_indptr, p_tids, parents, bits, items):
        n = parents.shape[0]
        cap = 0
        for c in range(n):
            cap += p_indptr[parents[c] + 1] - p_indptr[parents[c]]
        out = np.empty(cap, dtype=np.int64)
        out_indptr = np.zeros(n + 1, dtype=np.int64)
        pos = 0
        for c in range(n):
            p = parents[c]
            row = bits[items[c]]
            for i in range(p_indptr[p], p_indptr[p + 1]):
                t = p_tids[i]
                out[pos] = t
                pos += row[t]
            out_indptr[c + 1] = pos
        return out_indptr, out[:pos], cap

    def _nb_count_all(db, cands):
        counts, checks = _nb_count_all_kernel(db.bitmap, cands)
        return counts, int(checks)

    def _nb_count_filtered(db, cands, pivots):
        counts, checks = _nb_count_filtered_kernel(
            db.bitmap, db.v_indptr, db.v_tids, cands, pivots
        )
        return counts, int(checks)

    def _nb_intersect_batch(p_indptr, p_tids, parents, db, items):
        out_indptr, out, comparisons = _nb_intersect_kernel(
            p_indptr, p_tids, parents, db.item_bitmap, items
        )
        return out_indptr, out, int(comparisons)

    NUMBA = SimpleNamespace(
        name="numba",
        count_all=_nb_count_all,
        count_filtered=_nb_count_filtered,
        intersect_batch=_nb_intersect_batch,
    )
else:  # pragma: no cover
    NUMBA = None


def default_backend() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"


def get(backend: str | None = None) -> SimpleNamespace:
    """Kernel set for ``backend`` ("numba", "numpy", or None for the default)."""
    backend = backend or default_backend()
    if backend == "numpy":
        return NUMPY
    if backend == "numba":
        if NUMBA is None:
            raise RuntimeError("numba backend requested but numba is not installed")
        return NUMBA
    raise ValueError(f"unknown backend {backend!r}")
