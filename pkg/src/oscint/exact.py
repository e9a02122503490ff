"""Symmetric tensors, exact linear algebra, quadratic-form analysis, and
Taylor data of polynomial actions at critical points."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement

from .errors import DegenerateForm
from .poly import PolyFunction
from .scalars import Scalar, ZERO, ONE


class SymTensor:
    """Fully symmetric tensor: sorted multi-indices to Scalar entries."""

    __slots__ = ("rank", "dim", "data")

    def __init__(self, rank: int, dim: int, data=None):
        self.rank = rank
        self.dim = dim
        clean = {}
        for idx, val in (data or {}).items():
            val = Scalar.of(val)
            if len(idx) != rank:
                raise ValueError("index length != rank")
            if any(i < 0 or i >= dim for i in idx):
                raise ValueError("index out of range")
            if not val.is_zero():
                clean[tuple(sorted(idx))] = val
        self.data = clean

    def get(self, idx) -> Scalar:
        """Entry lookup; any permutation of the index returns the same value."""
        return self.data.get(tuple(sorted(idx)), ZERO)

    def is_zero(self) -> bool:
        return not self.data

    def __eq__(self, other):
        if not isinstance(other, SymTensor):
            return NotImplemented
        return (self.rank, self.dim, self.data) == (other.rank, other.dim, other.data)

    def __repr__(self):
        return f"SymTensor(rank={self.rank}, dim={self.dim}, {self.data!r})"

    def transform(self, a) -> "SymTensor":
        """Pull back along the linear map y = A z: T'_{j...} = T_{i...} A_{i1 j1}...

        ``a`` is an n x n matrix (rows index the old variables).
        """
        n = self.dim
        out = {}
        for new_idx in combinations_with_replacement(range(n), self.rank):
            total = ZERO
            for old_idx, val in self.data.items():
                # sum over all assignments of the symmetric entry: the entry
                # T_{old} appears with every permutation of old_idx; iterate
                # distinct permutations via multiset handling
                total = total + val * _sym_contract(old_idx, new_idx, a)
            if not total.is_zero():
                out[new_idx] = total
        return SymTensor(self.rank, n, out)


def _sym_contract(old_idx, new_idx, a) -> Scalar:
    """Sum over distinct permutations p of old_idx of prod_k a[p_k][new_k]."""
    from itertools import permutations

    seen = set()
    total = ZERO
    for p in permutations(old_idx):
        if p in seen:
            continue
        seen.add(p)
        v = ONE
        for i, j in zip(p, new_idx):
            v = v * a[i][j]
        total = total + v
    return total


# ---------------------------------------------------------------------------
# exact matrices (lists of lists of Scalar)
# ---------------------------------------------------------------------------


def mat_of(rows):
    return [[Scalar.of(x) for x in row] for row in rows]


def mat_identity(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    return [
        [sum((a[i][k] * b[k][j] for k in range(m)), ZERO) for j in range(p)]
        for i in range(n)
    ]


def mat_transpose(a):
    return [list(row) for row in zip(*a)] if a else []


def mat_is_symmetric(a) -> bool:
    n = len(a)
    return all(a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n))


def det_gauss(a) -> Scalar:
    """Determinant by fraction-free-ish Gaussian elimination over Scalars."""
    n = len(a)
    m = [row[:] for row in a]
    det = ONE
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if not m[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            return ZERO
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det = det * m[col][col]
        inv = ONE / m[col][col]
        for r in range(col + 1, n):
            if m[r][col].is_zero():
                continue
            f = m[r][col] * inv
            for c in range(col, n):
                m[r][c] = m[r][c] - f * m[col][c]
    return det

def det_cofactor(a) -> Scalar:
    """Reference determinant by cofactor expansion (independent code path)."""
    n = len(a)
    if n == 0:
        return ONE
    if n == 1:
        return a[0][0]
    total = ZERO
    for j in range(n):
        if a[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1 :] for row in a[1:]]
        term = a[0][j] * det_cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def mat_inverse(a):
    n = len(a)
    m = [row[:] + ident_row for row, ident_row in zip(a, mat_identity(n))]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if not m[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            raise DegenerateForm("matrix is singular")
        m[col], m[pivot] = m[pivot], m[col]
        inv = ONE / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r == col or m[r][col].is_zero():
                continue
            f = m[r][col]
            m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def signature_symmetric(a) -> int:
    """Signature (#positive - #negative) of a real symmetric matrix, computed
    exactly by congruence reduction to diagonal form."""
    n = len(a)
    m = [[x for x in row] for row in a]
    for row in m:
        for x in row:
            if not x.is_real():
                raise ValueError("signature requires a real symmetric matrix")
    pos = neg = 0
    idx = list(range(n))  # active block starts at k
    for k in range(n):
        # find a nonzero diagonal pivot in the active block
        piv = None
        for r in range(k, n):
            if not m[r][r].is_zero():
                piv = r
                break
        if piv is None:
            # all diagonal zero: find off-diagonal nonzero and symmetrize
            found = None
            for r in range(k, n):
                for c in range(r + 1, n):
                    if not m[r][c].is_zero():
                        found = (r, c)
                        break
                if found:
                    break
            if found is None:
                break  # remaining block is zero: degenerate directions
            r, c = found
            # congruence: row/col r += row/col c gives diagonal entry 2*m[r][c]
            for j in range(n):
                m[r][j] = m[r][j] + m[c][j]
            for i in range(n):
                m[i][r] = m[i][r] + m[i][c]
            piv = r
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            for i in range(n):
                m[i][k], m[i][piv] = m[i][piv], m[i][k]
        d = m[k][k]
        if d.re > 0:
            pos += 1
        else:
            neg += 1
        inv = ONE / d
        for r in range(k + 1, n):
            if m[r][k].is_zero():
                continue
            f = m[r][k] * inv
            for j in range(n):
                m[r][j] = m[r][j] - f * m[k][j]
            for i in range(n):
                m[i][r] = m[i][r] - f * m[i][k]
    return pos - neg


class QuadraticForm:
    """Symmetric n x n Scalar matrix with cached inverse/determinant/signature."""

    __slots__ = ("n", "q", "_analysis")

    def __init__(self, q):
        q = mat_of(q)
        if not mat_is_symmetric(q):
            raise ValueError("quadratic form matrix must be symmetric")
        self.n = len(q)
        self.q = q
        self._analysis = None

    def analyze(self):
        """Return (inverse, determinant, signature); DegenerateForm if det=0."""
        if self._analysis is None:
            det = det_gauss(self.q)
            if det.is_zero():
                raise DegenerateForm("quadratic form is degenerate")
            k = mat_inverse(self.q)
            sig = signature_symmetric(self.q)
            self._analysis = (k, det, sig)
        return self._analysis

    def is_degenerate(self) -> bool:
        return det_gauss(self.q).is_zero()

    def __eq__(self, other):
        if not isinstance(other, QuadraticForm):
            return NotImplemented
        return self.q == other.q

    def __repr__(self):
        return f"QuadraticForm({self.q!r})"


def quad_analyze(q: QuadraticForm):
    """Exact inverse, determinant, and signature of a symmetric form."""
    return q.analyze()


# ---------------------------------------------------------------------------
# Taylor data
# ---------------------------------------------------------------------------


def taylor_data(s: PolyFunction, x0, max_deg: int | None = None):
    """Decompose s(x0 + y) exactly into value, gradient, Hessian, and
    higher-derivative tensors of ranks 3..max_deg.

    Returns (value, gradient, hessian QuadraticForm, [SymTensor rank 3, ...]).
    The tensors are plain derivative tensors: the rank-k part of the shifted
    polynomial is (1/k!) T_{i1..ik} y^{i1}..y^{ik}.
    """
    n = s.n
    if max_deg is None:
        max_deg = max(2, s.total_degree())
    if max_deg < 2:
        raise ValueError("max_deg must be at least 2")
    shifted = s.shift(x0)
    value = shifted.constant_term()
    gradient = tuple(
        shifted.terms.get(_unit(n, i), ZERO) for i in range(n)
    )
    hess = [[ZERO for _ in range(n)] for _ in range(n)]
    tensors = {k: {} for k in range(3, max_deg + 1)}
    for e, c in shifted.terms.items():
        d = sum(e)
        if d == 2:
            i, j = _exps_to_index(e)
            if i == j:
                hess[i][i] = c.scale(2)
            else:
                hess[i][j] = c
                hess[j][i] = c
        elif 3 <= d <= max_deg:
            idx = _exps_to_index(e)
            # coefficient of the monomial times prod e_i! equals the derivative
            mult = 1
            for k in e:
                for t in range(2, k + 1):
                    mult *= t
            tensors[d][idx] = c.scale(mult)
    interactions = [
        SymTensor(k, n, tensors[k]) for k in sorted(tensors)
    ]
    return value, gradient, QuadraticForm(hess), interactions


def _unit(n, i):
    e = [0] * n
    e[i] = 1
    return tuple(e)


def _exps_to_index(e):
    idx = []
    for i, k in enumerate(e):
        idx.extend([i] * k)
    return tuple(idx)
