# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; semantics identical to ``_pykernels``."""
import numpy as np

cimport numpy as cnp
from libc.stdint cimport int64_t, uint8_t
from libcpp.algorithm cimport sort
from libcpp.vector cimport vector

cnp.import_array()

ctypedef fused index_t:
    cnp.int32_t
    cnp.int64_t


def triangle_counts(const int64_t[::1] indptr, const index_t[::1] indices):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t v, u, w, i, j
    cdef int64_t dv, du
    tri_arr = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] tri = tri_arr
    out_ptr_arr = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[::1] out_ptr = out_ptr_arr
    out_arr = np.empty(indices.shape[0] // 2, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    mark_arr = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] mark = mark_arr
    with nogil:
        for v in range(n):
            dv = indptr[v + 1] - indptr[v]
            out_ptr[v + 1] = out_ptr[v]
            for i in range(indptr[v], indptr[v + 1]):
                u = indices[i]
                du = indptr[u + 1] - indptr[u]
                if du > dv or (du == dv and u > v):
                    out[out_ptr[v + 1]] = u
                    out_ptr[v + 1] += 1
        for v in range(n):
            for i in range(out_ptr[v], out_ptr[v + 1]):
                mark[out[i]] = v + 1
            for i in range(out_ptr[v], out_ptr[v + 1]):
                u = out[i]
                for j in range(out_ptr[u], out_ptr[u + 1]):
                    w = out[j]
                    if mark[w] == v + 1:
                        tri[v] += 1
                        tri[u] += 1
                        tri[w] += 1
    return tri_arr


def core_numbers(const int64_t[::1] indptr, const index_t[::1] indices):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t v, u, w, i, d, md = 0, start, num, pu, pw, du
    deg_arr = np.diff(np.asarray(indptr)).astype(np.int64)
    cdef int64_t[::1] deg = deg_arr
    for v in range(n):
        if deg[v] > md:
            md = deg[v]
    bins_arr = np.zeros(md + 1, dtype=np.int64)
    cdef int64_t[::1] bins = bins_arr
    pos_arr = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] pos = pos_arr
    vert_arr = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] vert = vert_arr
    with nogil:
        for v in range(n):
            bins[deg[v]] += 1
        start = 0
        for d in range(md + 1):
            num = bins[d]
            bins[d] = start
            start += num
        for v in range(n):
            pos[v] = bins[deg[v]]
            vert[pos[v]] = v
            bins[deg[v]] += 1
        for d in range(md, 0, -1):
            bins[d] = bins[d - 1]
        if n > 0:
            bins[0] = 0
        for i in range(n):
            v = vert[i]
            for j in range(indptr[v], indptr[v + 1]):
                u = indices[j]
                if deg[u] > deg[v]:
                    du = deg[u]
                    pu = pos[u]
                    pw = bins[du]
                    w = vert[pw]
                    if u != w:
                        pos[u] = pw
                        pos[w] = pu
                        vert[pu] = w
                        vert[pw] = u
                    bins[du] += 1
                    deg[u] -= 1
    return deg_arr


cdef inline void _heap_push(int64_t* heap, Py_ssize_t* size, int64_t key) noexcept nogil:
    cdef Py_ssize_t i = size[0]
    cdef Py_ssize_t parent
    size[0] += 1
    while i > 0:
        parent = (i - 1) >> 1
        if heap[parent] <= key:
            break
        heap[i] = heap[parent]
        i = parent
    heap[i] = key


cdef inline int64_t _heap_pop(int64_t* heap, Py_ssize_t* size) noexcept nogil:
    cdef int64_t top = heap[0]
    cdef int64_t last
    cdef Py_ssize_t i = 0, child
    size[0] -= 1
    last = heap[size[0]]
    while True:
        child = 2 * i + 1
        if child >= size[0]:
            break
        if child + 1 < size[0] and heap[child + 1] < heap[child]:
            child += 1
        if heap[child] >= last:
            break
        heap[i] = heap[child]
        i = child
    heap[i] = last
    return top


def peel_order(const int64_t[::1] indptr, const index_t[::1] indices):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t v, u, i, k = 0, hsize = 0
    cdef int64_t key, d
    cdef int64_t low_mask = 0xFFFFFFFF
    deg_arr = np.diff(np.asarray(indptr)).astype(np.int64)
    cdef int64_t[::1] deg = deg_arr
    removed_arr = np.zeros(n, dtype=np.uint8)
    cdef uint8_t[::1] removed = removed_arr
    order_arr = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] order = order_arr
    at_arr = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] at_removal = at_arr
    heap_arr = np.empty(n + indices.shape[0] // 2 + 1, dtype=np.int64)
    cdef int64_t[::1] heap = heap_arr
    with nogil:
        for v in range(n):
            _heap_push(&heap[0], &hsize, (deg[v] << 32) | v)
        while hsize > 0:
            key = _heap_pop(&heap[0], &hsize)
            v = key & low_mask
            d = key >> 32
            if removed[v] or d != deg[v]:
                continue
            removed[v] = 1
            order[k] = v
            at_removal[k] = d
            k += 1
            for i in range(indptr[v], indptr[v + 1]):
                u = indices[i]
                if not removed[u]:
                    deg[u] -= 1
                    _heap_push(&heap[0], &hsize, (deg[u] << 32) | u)
    return order_arr, at_arr


def local_search(const int64_t[::1] indptr, const index_t[::1] indices, members,
                 int64_t p, int64_t q, Py_ssize_t t_max):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t v, u, w, i, j, k
    cdef Py_ssize_t iterations = 0
    cdef int64_t size = 0
    cdef bint moved, added, deleted, converged = False
    seed = np.unique(np.asarray(members, dtype=np.int64))
    cdef int64_t[::1] seed_v = seed
    in_s_arr = np.zeros(n, dtype=np.uint8)
    cdef uint8_t[::1] in_s = in_s_arr
    inside_arr = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] inside = inside_arr
    stamp_arr = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] stamp = stamp_arr
    cdef int64_t sweep = 0
    cdef vector[int64_t] mem   # current members, unordered
    cdef vector[int64_t] where  # position of v in mem
    cdef vector[int64_t] cand
    cdef vector[int64_t] moves
    where.resize(n, -1)
    with nogil:
        for k in range(seed_v.shape[0]):
            v = seed_v[k]
            in_s[v] = 1
            where[v] = mem.size()
            mem.push_back(v)
            size += 1
            for i in range(indptr[v], indptr[v + 1]):
                inside[indices[i]] += 1
        while iterations < t_max:
            iterations += 1
            moved = False
            while True:
                sweep += 1
                cand.clear()
                for k in range(<Py_ssize_t>mem.size()):
                    v = mem[k]
                    for i in range(indptr[v], indptr[v + 1]):
                        u = indices[i]
                        if not in_s[u] and stamp[u] != sweep:
                            stamp[u] = sweep
                            cand.push_back(u)
                sort(cand.begin(), cand.end())
                added = False
                for k in range(<Py_ssize_t>cand.size()):
                    u = cand[k]
                    if q * inside[u] - p * size > 0:
                        in_s[u] = 1
                        where[u] = mem.size()
                        mem.push_back(u)
                        size += 1
                        for i in range(indptr[u], indptr[u + 1]):
                            inside[indices[i]] += 1
                        moves.push_back(u + 1)
                        added = True
                if not added:
                    break
                moved = True
            while True:
                cand.assign(mem.begin(), mem.end())
                sort(cand.begin(), cand.end())
                deleted = False
                for k in range(<Py_ssize_t>cand.size()):
                    u = cand[k]
                    if p * (size - 1) - q * inside[u] > 0:
                        in_s[u] = 0
                        j = where[u]
                        w = mem.back()
                        mem[j] = w
                        where[w] = j
                        mem.pop_back()
                        where[u] = -1
                        size -= 1
                        for i in range(indptr[u], indptr[u + 1]):
                            inside[indices[i]] -= 1
                        moves.push_back(-(u + 1))
                        deleted = True
                if not deleted:
                    break
                moved = True
            if not moved:
                converged = True
                break
        sort(mem.begin(), mem.end())
    result = np.empty(mem.size(), dtype=np.int64)
    for k in range(<Py_ssize_t>mem.size()):
        result[k] = mem[k]
    move_arr = np.empty(moves.size(), dtype=np.int64)
    for k in range(<Py_ssize_t>moves.size()):
        move_arr[k] = moves[k]
    return result, move_arr, iterations, bool(converged)
