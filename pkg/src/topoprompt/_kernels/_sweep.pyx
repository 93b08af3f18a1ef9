# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled union-find merge sweep; hot kernel of the persistence computation.

Contract matches ``_sweep_py.sweep``: insert pixels in the caller-supplied
total order, union each with already-inserted neighbours, and on every merge
of two live components record the death of the younger one (the component
whose birth pixel comes later in the total order).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef inline Py_ssize_t _find(cnp.int64_t* parent, Py_ssize_t x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def sweep(object order_arr, object pos_arr, Py_ssize_t width, Py_ssize_t height,
          int connectivity):
    """Run the merge sweep; see the pure-Python twin for parameter docs."""
    if connectivity != 4 and connectivity != 8:
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")

    cdef cnp.int64_t[::1] order = np.ascontiguousarray(order_arr, dtype=np.int64)
    cdef cnp.int64_t[::1] pos = np.ascontiguousarray(pos_arr, dtype=np.int64)
    cdef Py_ssize_t n = width * height

    parent_np = np.arange(n, dtype=np.int64)
    birth_np = np.arange(n, dtype=np.int64)
    rank_np = np.zeros(n, dtype=np.int64)
    fin_ext_np = np.empty(n, dtype=np.int64)
    fin_sad_np = np.empty(n, dtype=np.int64)

    cdef cnp.int64_t[::1] parent = parent_np
    cdef cnp.int64_t[::1] birth = birth_np
    cdef cnp.int64_t[::1] rank = rank_np
    cdef cnp.int64_t[::1] fin_ext = fin_ext_np
    cdef cnp.int64_t[::1] fin_sad = fin_sad_np

    cdef int[8] offx
    cdef int[8] offy
    cdef int n_off
    if connectivity == 4:
        n_off = 4
        offx[0] = 0; offy[0] = -1
        offx[1] = -1; offy[1] = 0
        offx[2] = 1; offy[2] = 0
        offx[3] = 0; offy[3] = 1
    else:
        n_off = 8
        offx[0] = -1; offy[0] = -1
        offx[1] = 0; offy[1] = -1
        offx[2] = 1; offy[2] = -1
        offx[3] = -1; offy[3] = 0
        offx[4] = 1; offy[4] = 0
        offx[5] = -1; offy[5] = 1
        offx[6] = 0; offy[6] = 1
        offx[7] = 1; offy[7] = 1

    cdef Py_ssize_t i, p, px, py, qx, qy, q, r, cur, b1, b2, elder_b, young_b, tmp
    cdef Py_ssize_t m = 0
    cdef int k
    cdef cnp.int64_t* parent_p = &parent[0]

    with nogil:
        for i in range(n):
            p = order[i]
            py = p / width
            px = p - py * width
            cur = -1
            for k in range(n_off):
                qx = px + offx[k]
                qy = py + offy[k]
                if qx < 0 or qx >= width or qy < 0 or qy >= height:
                    continue
                q = qy * width + qx
                if pos[q] > i:
                    continue
                r = _find(parent_p, q)
                if cur == -1:
                    parent[p] = r
                    cur = r
                elif r != cur:
                    b1 = birth[cur]
                    b2 = birth[r]
                    if pos[b1] < pos[b2]:
                        elder_b = b1; young_b = b2
                    else:
                        elder_b = b2; young_b = b1
                    fin_ext[m] = young_b
                    fin_sad[m] = p
                    m += 1
                    if rank[cur] < rank[r]:
                        tmp = cur; cur = r; r = tmp
                    parent[r] = cur
                    if rank[cur] == rank[r]:
                        rank[cur] += 1
                    birth[cur] = elder_b
            if cur == -1:
                parent[p] = p
                birth[p] = p

    essential = birth_np[parent_np == np.arange(n, dtype=np.int64)]
    return fin_ext_np[:m].copy(), fin_sad_np[:m].copy(), essential.copy()
