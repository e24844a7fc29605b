"""Exact integer linear algebra: Smith normal form, solving, lattice quotients.

Matrices are plain lists of row lists of Python ints.  Everything is exact;
nothing here ever touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class LinalgError(ValueError):
    pass


class IntegerMatrix:
    """Sparse integer matrix, (row, col) -> nonzero int."""

    def __init__(self, rows: int, cols: int, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries: dict[tuple[int, int], int] = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise LinalgError(f"entry ({i}, {j}) outside {rows}x{cols}")
            if v:
                self.entries[i, j] = int(v)

    @classmethod
    def from_dense(cls, rows):
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        return cls(nr, nc, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v})

    def to_dense(self):
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def dump(self) -> str:
        """Debug dump as `row col value` triples, one per line."""
        lines = [f"# {self.rows} {self.cols}"]
        lines += [f"{i} {j} {v}" for (i, j), v in sorted(self.entries.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, text: str):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        r, c = (int(t) for t in lines[0].lstrip("#").split())
        ents = {}
        for ln in lines[1:]:
            i, j, v = (int(t) for t in ln.split())
            ents[i, j] = v
        return cls(r, c, ents)

    def __eq__(self, other):
        return (isinstance(other, IntegerMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __repr__(self):
        return f"IntegerMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


def _dense(M):
    if isinstance(M, IntegerMatrix):
        return M.to_dense(), M.rows, M.cols
    M = [list(map(int, r)) for r in M]
    return M, len(M), (len(M[0]) if M else 0)


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    if not A:
        return []
    inner = len(B)
    ncols = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [0] * ncols
        for k in range(inner):
            a = row[k]
            if a:
                bk = B[k]
                for j in range(ncols):
                    if bk[j]:
                        acc[j] += a * bk[j]
        out.append(acc)
    return out


def matvec(A, x):
    return [sum(a * b for a, b in zip(row, x) if a and b) for row in A]


def determinant(A):
    """Exact determinant via fraction-free Bareiss elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [row[:] for row in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


@dataclass
class SNFRecord:
    """U * M * V = D with U, V unimodular and D diagonal, d1 | d2 | ...

    Uinv and Vinv are the exact inverses, kept because lattice quotients need
    them and inverting afterwards would be wasteful.
    """

    U: list
    D: list
    V: list
    Uinv: list = field(repr=False, default=None)
    Vinv: list = field(repr=False, default=None)

    @property
    def diagonal(self):
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]

    @property
    def invariant_factors(self):
        return [d for d in self.diagonal if d != 0]

    @property
    def rank(self):
        return len(self.invariant_factors)

    def verify(self, M) -> bool:
        M, r, c = _dense(M)
        if r and c and matmul(matmul(self.U, M), self.V) != self.D:
            return False
        if abs(determinant(self.U)) != 1 or abs(determinant(self.V)) != 1:
            return False
        diag = self.diagonal
        for i in range(len(self.D)):
            for j in range(len(self.D[0]) if self.D else 0):
                if i != j and self.D[i][j]:
                    return False
        nz = [d for d in diag if d]
        if any(d < 0 for d in nz) or any(nz[i + 1] % nz[i] for i in range(len(nz) - 1)):
            return False
        # zeros only at the tail
        seen_zero = False
        for d in diag:
            if d == 0:
                seen_zero = True
            elif seen_zero:
                return False
        return True


def smith_normal_form(M, with_inverses=True) -> SNFRecord:
    """Smith normal form with unimodular certificates.

    Elimination picks the smallest-magnitude pivot in the active block and
    uses rounded quotients to keep intermediate entries small.
    """
    A, r, c = _dense(M)
    A = [row[:] for row in A]
    U, V = identity(r), identity(c)
    Ui = identity(r) if with_inverses else None
    Vi = identity(c) if with_inverses else None

    def row_add(i, j, q):  # row_i += q * row_j
        if not q:
            return
        Ai, Aj = A[i], A[j]
        for k in range(c):
            if Aj[k]:
                Ai[k] += q * Aj[k]
        Ui_, Uj = U[i], U[j]
        for k in range(r):
            if Uj[k]:
                Ui_[k] += q * Uj[k]
        if Ui is not None:
            for row in Ui:
                if row[i]:
                    row[j] -= q * row[i]

    def col_add(i, j, q):  # col_i += q * col_j
        if not q:
            return
        for row in A:
            if row[j]:
                row[i] += q * row[j]
        for row in V:
            if row[j]:
                row[i] += q * row[j]
        if Vi is not None:
            Vj, Vi_ = Vi[j], Vi[i]
            for k in range(c):
                if Vi_[k]:
                    Vj[k] -= q * Vi_[k]

    def row_swap(i, j):
        if i == j:
            return
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        if Ui is not None:
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def col_swap(i, j):
        if i == j:
            return
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        if Vi is not None:
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_neg(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]
        if Ui is not None:
            for row in Ui:
                row[i] = -row[i]

    def rdiv(a, b):
        # nearest-integer quotient
        q, rem = divmod(a, b)
        if 2 * abs(rem) > abs(b):
            q += 1 if (rem > 0) == (b > 0) else 0
        return q

    for t in range(min(r, c)):
        best = None
        for i in range(t, r):
            row = A[i]
            for j in range(t, c):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        row_swap(t, best[1])
        col_swap(t, best[2])
        while True:
            changed = False
            p = A[t][t]
            for i in range(t + 1, r):
                if A[i][t]:
                    row_add(i, t, -rdiv(A[i][t], p))
                    if A[i][t]:
                        changed = True
            for j in range(t + 1, c):
                if A[t][j]:
                    col_add(j, t, -rdiv(A[t][j], p))
                    if A[t][j]:
                        changed = True
            if changed:
                best = None
                for i in range(t, r):
                    if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                        best = (abs(A[i][t]), i, t)
                for j in range(t, c):
                    if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                        best = (abs(A[t][j]), t, j)
                row_swap(t, best[1])
                col_swap(t, best[2])
                continue
            # divisibility of the remaining block by the pivot
            bad = None
            for i in range(t + 1, r):
                row = A[i]
                for j in range(t + 1, c):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(t, bad, 1)
        if A[t][t] < 0:
            row_neg(t)
    return SNFRecord(U, A, V, Ui, Vi)


def _augment_orders(A, nrows, orders):
    """Append a column o_i * e_i for every row with a positive order."""
    extra = [i for i in range(nrows) if orders and orders[i]]
    out = [row[:] + [0] * len(extra) for row in A] if A else [[0] * len(extra) for _ in range(nrows)]
    for k, i in enumerate(extra):
        out[i][len(out[i]) - len(extra) + k] = orders[i]
    return out


def solve_linear(M, b, modulus=0):
    """Solve M x = b over Z (modulus 0) or Z/m.  Returns a list or None."""
    A, r, c = _dense(M)
    if len(b) != r:
        raise LinalgError(f"dimension mismatch: {r} rows vs rhs of length {len(b)}")
    if modulus < 0 or modulus == 1:
        raise LinalgError("modulus must be 0 or > 1")
    orders = [modulus] * r if modulus else None
    x = solve_with_orders(A, r, c, b, orders)
    if x is None:
        return None
    if modulus:
        x = [v % modulus for v in x]
    return x


def solve_with_orders(A, nrows, ncols, b, row_orders=None):
    """Solve A x = b where row i is taken modulo row_orders[i] (0 = exact)."""
    if nrows == 0:
        return [0] * ncols
    Aug = _augment_orders(A if ncols else [[] for _ in range(nrows)], nrows, row_orders)
    width = len(Aug[0])
    if width == 0:
        return [0] * ncols if not any(b) else None
    snf = smith_normal_form(Aug, with_inverses=False)
    Ub = matvec(snf.U, b)
    y = [0] * width
    for i in range(nrows):
        d = snf.D[i][i] if i < width else 0
        if d == 0:
            if Ub[i]:
                return None
        else:
            if Ub[i] % d:
                return None
            y[i] = Ub[i] // d
    x = matvec(snf.V, y)
    return x[:ncols]


def kernel_basis(A, nrows, ncols):
    """Basis (list of vectors) of {x in Z^ncols : A x = 0}; saturated."""
    if ncols == 0:
        return []
    if nrows == 0:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    snf = smith_normal_form(A, with_inverses=False)
    rk = snf.rank
    return [[snf.V[i][j] for i in range(ncols)] for j in range(rk, ncols)]


def image_basis(gens, n):
    """Basis of the sublattice of Z^n spanned by the given vectors."""
    gens = [g for g in gens if any(g)]
    if not gens or n == 0:
        return []
    M = [[g[i] for g in gens] for i in range(n)]
    snf = smith_normal_form(M)
    return [[snf.Uinv[i][k] * snf.D[k][k] for i in range(n)] for k in range(snf.rank)]


class LatticeQuotient:
    """The group L1 / L2 for lattices L2 <= L1 <= Z^n.

    `factors` lists the invariant factors (0 for a free summand, never 1) and
    `generators` the matching vectors in Z^n.  `classify(z)` expresses an
    element of L1 in these coordinates, each reduced mod its factor.
    """

    def __init__(self, n, L1_basis, L2_gens):
        self.n = n
        self.K = L1_basis
        r = len(L1_basis)
        self.r = r
        if r:
            Kmat = [[v[i] for v in L1_basis] for i in range(n)]
            self._ksnf = smith_normal_form(Kmat, with_inverses=False)
            if self._ksnf.rank != r:
                raise LinalgError("L1 basis is not linearly independent")
        coords = []
        for g in L2_gens:
            if not any(g):
                continue
            x = self._coords(g)
            if x is None:
                raise LinalgError("L2 is not contained in L1")
            coords.append(x)
        if r:
            A = [[x[i] for x in coords] for i in range(r)] if coords else [[] for _ in range(r)]
            if coords:
                snf = smith_normal_form(A)
                self.U2, self.U2inv = snf.U, snf.Uinv
                diag = [snf.D[i][i] if i < len(coords) else 0 for i in range(r)]
            else:
                self.U2, self.U2inv = identity(r), identity(r)
                diag = [0] * r
        else:
            self.U2 = self.U2inv = []
            diag = []
        self._keep = [i for i in range(r) if diag[i] != 1]
        self.factors = [diag[i] for i in self._keep]
        gens = []
        for i in self._keep:
            col = [self.U2inv[k][i] for k in range(r)]
            gens.append([sum(L1_basis[k][j] * col[k] for k in range(r) if col[k]) for j in range(n)])
        self.generators = gens

    def _coords(self, z):
        """x with K x = z, or None."""
        if self.r == 0:
            return [] if not any(z) else None
        snf = self._ksnf
        Uz = matvec(snf.U, z)
        y = []
        for i in range(self.n):
            d = snf.D[i][i] if i < self.r else 0
            if d == 0:
                if Uz[i]:
                    return None
            else:
                if Uz[i] % d:
                    return None
                y.append(Uz[i] // d)
        return matvec(snf.V, y)

    def contains(self, z):
        return self._coords(z) is not None

    def classify(self, z):
        x = self._coords(z)
        if x is None:
            raise LinalgError("vector is not in L1")
        y = matvec(self.U2, x) if self.r else []
        out = []
        for f, i in zip(self.factors, self._keep):
            out.append(y[i] % f if f else y[i])
        return out


def cycles_lattice(d_out, n_mid, n_out, orders_out=None):
    """Basis of {x in Z^n_mid : d_out x = 0 modulo orders_out}."""
    if n_out == 0 or not d_out:
        return [[int(i == j) for i in range(n_mid)] for j in range(n_mid)]
    if not orders_out or not any(orders_out):
        return kernel_basis(d_out, n_out, n_mid)
    Aug = _augment_orders(d_out, n_out, orders_out)
    ker = kernel_basis(Aug, n_out, len(Aug[0]))
    return image_basis([v[:n_mid] for v in ker], n_mid)


def homology_with_orders(d_in, d_out, n_in, n_mid, n_out, orders_mid=None, orders_out=None):
    """Homology at the middle of  Z^n_in -> Z^n_mid -> Z^n_out  with torsion orders."""
    L1 = cycles_lattice(d_out, n_mid, n_out, orders_out)
    gens = [[d_in[i][j] for i in range(n_mid)] for j in range(n_in)] if n_in and d_in else []
    if orders_mid:
        for i, o in enumerate(orders_mid):
            if o:
                gens.append([o if k == i else 0 for k in range(n_mid)])
    return LatticeQuotient(n_mid, L1, gens)


def homology_slice(d_in, d_out, modulus=0):
    """Homology at the middle slot of a two-matrix slice.

    d_in: n_mid x n_in, d_out: n_out x n_mid (IntegerMatrix keeps shapes with
    zero rows or columns; dense lists work when no dimension is zero).
    Over Z/m the computation is lifted to Z by adjoining m times the identity
    as extra relations.  Returns (invariant factors, representative cycles).
    """
    Din, r_in, c_in = _dense(d_in)
    Dout, r_out, c_out = _dense(d_out)
    if r_in != c_out:
        raise LinalgError("d_in and d_out are not composable")
    n_mid = r_in
    if r_out and c_in:
        prod = matmul(Dout, Din)
        if any((v % modulus) if modulus else v for row in prod for v in row):
            raise LinalgError("d_out * d_in != 0: corrupted differential")
    om = [modulus] * n_mid if modulus else None
    oo = [modulus] * r_out if modulus else None
    Q = homology_with_orders(Din, Dout, c_in, n_mid, r_out, om, oo)
    reps = [[v % modulus for v in g] if modulus else g for g in Q.generators]
    return Q.factors, reps
