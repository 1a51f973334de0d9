"""Exact dense and sparse linear algebra over a field descriptor.

Matrices are lists of row lists of field elements.  Vectors are lists.
Nothing here is tuned beyond fraction-free pivoting; problem sizes in this
package are desk scale and exactness is the point.
"""

from __future__ import annotations


def zeros(field, rows: int, cols: int):
    z = field.zero
    return [[z] * cols for _ in range(rows)]


def eye(field, n: int):
    m = zeros(field, n, n)
    for i in range(n):
        m[i][i] = field.one
    return m


def mat_mul(field, a, b):
    if not a or not b:
        return []
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    z = field.zero
    out = [[z] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if not x:
                continue
            bt = b[t]
            for j in range(m):
                if bt[j]:
                    oi[j] = oi[j] + x * bt[j]
    return out


def mat_vec(field, a, v):
    z = field.zero
    out = []
    for row in a:
        s = z
        for x, y in zip(row, v):
            if x and y:
                s = s + x * y
        out.append(s)
    return out


def transpose(a):
    return [list(col) for col in zip(*a)] if a else []


def rref(field, mat):
    """Reduced row echelon form.  Returns (rows, pivot_columns)."""
    m = [row[:] for row in mat]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if m[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = field.inv(m[r][c])
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(field, mat) -> int:
    return len(rref(field, mat)[1])


def nullspace(field, mat, ncols: int | None = None):
    """Basis of {x : mat @ x = 0}, x column vectors of length ncols."""
    if ncols is None:
        ncols = len(mat[0]) if mat else 0
    rows, pivots = rref(field, mat)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fcol in free:
        v = [field.zero] * ncols
        v[fcol] = field.one
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fcol]
        basis.append(v)
    return basis


def solve(field, mat, rhs):
    """One solution x of mat @ x = rhs, or None if inconsistent."""
    if not mat:
        return None if any(rhs) else []
    ncols = len(mat[0])
    aug = [row[:] + [b] for row, b in zip(mat, rhs)]
    rows, pivots = rref(field, aug)
    for r, pc in enumerate(pivots):
        if pc == ncols:
            return None
    x = [field.zero] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][ncols]
    return x


def inverse(field, mat):
    n = len(mat)
    aug = [row[:] + eye_row for row, eye_row in zip(mat, eye(field, n))]
    rows, pivots = rref(field, aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in rows]


def is_invertible(field, mat) -> bool:
    n = len(mat)
    if n == 0:
        return True
    if any(len(row) != n for row in mat):
        return False
    return rank(field, mat) == n


class SparseEchelon:
    """Incremental echelon basis of sparse vectors keyed by orderable keys.

    Vectors are dicts key -> nonzero scalar.  The pivot of a vector is its
    maximal key under `key_order` (a callable mapping keys to sort keys).
    Stored pivot vectors are monic in their pivot.
    """

    def __init__(self, field, key_order):
        self.field = field
        self.key_order = key_order
        self.pivots: dict = {}

    def reduce(self, vec: dict) -> dict:
        """Fully reduce vec against the current basis; returns the residue."""
        v = dict(vec)
        while v:
            matching = [k for k in v if k in self.pivots]
            if not matching:
                break
            k = max(matching, key=self.key_order)
            c = v[k]
            for kk, x in self.pivots[k].items():
                nv = v.get(kk, self.field.zero) - c * x
                if nv:
                    v[kk] = nv
                else:
                    v.pop(kk, None)
        return v

    def add(self, vec: dict) -> dict | None:
        """Insert vec's residue into the basis.  Returns the monic residue
        that was stored, or None if vec reduced to zero."""
        v = self.reduce(vec)
        if not v:
            return None
        lead = max(v, key=self.key_order)
        inv = self.field.inv(v[lead])
        v = {k: x * inv for k, x in v.items()}
        self.pivots[lead] = v
        # keep fully reduced: eliminate the new pivot from stored vectors
        for plead, pvec in list(self.pivots.items()):
            if plead == lead or lead not in pvec:
                continue
            c = pvec[lead]
            for k, x in v.items():
                nv = pvec.get(k, self.field.zero) - c * x
                if nv:
                    pvec[k] = nv
                else:
                    pvec.pop(k, None)
        return v

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def basis(self):
        return [dict(v) for _, v in sorted(self.pivots.items(), key=lambda kv: self.key_order(kv[0]))]
