"""Exact integral lattice arithmetic.

Everything here runs on plain Python integers (arbitrary precision, so
intermediate blow-up in a Smith reduction can never wrap around) or on
`fractions.Fraction` where a division is genuinely needed.  Matrices are
lists of lists of ints; the public domain types freeze their data into
tuples and are safe to share between threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence


class DegenerateLatticeError(ValueError):
    """Raised when an operation needs a nonzero Gram determinant."""


# ---------------------------------------------------------------------------
# basic exact matrix helpers


def copy_matrix(M: Sequence[Sequence[int]]) -> list[list[int]]:
    return [[int(x) for x in row] for row in M]


def identity_matrix(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(M: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*M)]


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def mat_vec(M: Sequence[Sequence], v: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, v)) for row in M]


def vec_mat(v: Sequence, M: Sequence[Sequence]) -> list:
    return [sum(v[i] * M[i][j] for i in range(len(v))) for j in range(len(M[0]))]


def bareiss_det(M: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of a square integer matrix."""
    A = copy_matrix(M)
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            A[i][k] = 0
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def solve_right(A: Sequence[Sequence[int]], b: Sequence) -> Optional[list[Fraction]]:
    """Solve A x = b exactly over the rationals; None if inconsistent."""
    m, n = len(A), len(A[0])
    rows = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(b[i])] for i in range(m)]
    piv_cols = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if rows[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        x[c] = rows[i][n]
    return x


def solve_left(B: Sequence[Sequence[int]], target: Sequence) -> Optional[list[Fraction]]:
    """Solve x B = target exactly; None if target is not in the row space."""
    return solve_right(transpose(B), target)


def invert_unimodular(U: Sequence[Sequence[int]]) -> list[list[int]]:
    """Exact inverse of a matrix with determinant +-1 (integral by construction)."""
    n = len(U)
    aug = [[Fraction(U[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            v = aug[i][n + j]
            if v.denominator != 1:
                raise ValueError("matrix is not unimodular")
            row.append(int(v))
        out.append(row)
    return out


def right_kernel_mod_p(A: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    """Basis of {x : A x = 0 over F_p}."""
    m, n = len(A), (len(A[0]) if A else 0)
    rows = [[a % p for a in row] for row in A]
    piv_of_col: dict[int, int] = {}
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c] % p != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] % p != 0:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        piv_of_col[c] = r
        r += 1
    basis = []
    free_cols = [c for c in range(n) if c not in piv_of_col]
    for fc in free_cols:
        v = [0] * n
        v[fc] = 1
        for c, pr in piv_of_col.items():
            v[c] = (-rows[pr][fc]) % p
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# Smith normal form


def _balanced_quotient(a: int, b: int) -> int:
    """Quotient q minimising |a - q b| (keeps Smith reduction entries small)."""
    q = a // b
    r = a - q * b
    if 2 * abs(r) > abs(b):
        q += 1
    return q


def smith_normal_form(
    M: Sequence[Sequence[int]],
) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (D, P, Q) with D = P M Q, P and Q unimodular.

    D is diagonal with nonnegative entries d1 | d2 | ... and zeros last.
    Reduction is by elementary row/column operations; every sweep re-pivots
    on the entry of smallest absolute value, which keeps intermediate
    entries from exploding.
    """
    A = copy_matrix(M)
    m = len(A)
    if m == 0 or len(A[0]) == 0:
        raise ValueError("matrix must have at least one row and one column")
    n = len(A[0])
    if any(len(row) != n for row in A):
        raise ValueError("ragged matrix")
    P = identity_matrix(m)
    Q = identity_matrix(n)

    def row_op(i, j, q):  # row_i -= q * row_j
        A[i] = [a - q * b for a, b in zip(A[i], A[j])]
        P[i] = [a - q * b for a, b in zip(P[i], P[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for row in A:
            row[i] -= q * row[j]
        for row in Q:
            row[i] -= q * row[j]

    def swap_rows(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        if i != j:
            for row in A:
                row[i], row[j] = row[j], row[i]
            for row in Q:
                row[i], row[j] = row[j], row[i]

    def move_min_pivot(t) -> bool:
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] != 0 and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            return False
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        return True

    t = 0
    while t < min(m, n):
        if not move_min_pivot(t):
            break
        while True:
            # clear column t and row t against the current minimal pivot
            touched = False
            for i in range(t + 1, m):
                if A[i][t] != 0:
                    row_op(i, t, _balanced_quotient(A[i][t], A[t][t]))
                    touched = True
            for j in range(t + 1, n):
                if A[t][j] != 0:
                    col_op(j, t, _balanced_quotient(A[t][j], A[t][t]))
                    touched = True
            if touched:
                move_min_pivot(t)
                continue
            # pivot must divide the whole trailing block
            fix = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % A[t][t] != 0:
                        fix = i
                        break
                if fix is not None:
                    break
            if fix is None:
                break
            row_op(t, fix, -1)  # pull row `fix` into the pivot row
            move_min_pivot(t)

        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            P[t] = [-a for a in P[t]]
        t += 1

    return A, P, Q


def lattice_row_basis(gens: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis for the lattice generated by the given (possibly dependent) rows."""
    if not gens:
        return []
    D, _P, Q = smith_normal_form(gens)
    r = sum(1 for i in range(min(len(D), len(D[0]))) if D[i][i] != 0)
    Qinv = invert_unimodular(Q)
    return [[D[i][i] * x for x in Qinv[i]] for i in range(r)]


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class AbelianInvariants:
    """A finite abelian group as its invariant-factor chain (each divides the next)."""

    factors: tuple[int, ...] = ()

    def __post_init__(self):
        for f in self.factors:
            if f < 2:
                raise ValueError("invariant factors must be >= 2")
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a != 0:
                raise ValueError("factors must form a divisibility chain")

    @property
    def order(self) -> int:
        out = 1
        for f in self.factors:
            out *= f
        return out

    @property
    def is_trivial(self) -> bool:
        return not self.factors

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " x ".join(f"Z/{f}" for f in self.factors)


@dataclass(frozen=True)
class GramLattice:
    """A finite-rank integral lattice presented by a symmetric Gram matrix."""

    gram: tuple[tuple[int, ...], ...]
    name: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "gram", tuple(tuple(int(x) for x in row) for row in self.gram))
        n = len(self.gram)
        if any(len(row) != n for row in self.gram):
            raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if self.gram[i][j] != self.gram[j][i]:
                    raise ValueError("Gram matrix must be symmetric")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def gram_rows(self) -> list[list[int]]:
        return [list(row) for row in self.gram]

    def det(self) -> int:
        return bareiss_det(self.gram)

    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def is_unimodular(self) -> bool:
        return abs(self.det()) == 1

    def dot(self, v: Sequence[int], w: Sequence[int]) -> int:
        if len(v) < self.rank or len(w) < self.rank:
            raise ValueError("vector shorter than the lattice rank")
        return sum(v[i] * self.gram[i][j] * w[j] for i in range(self.rank) for j in range(self.rank))

    def direct_sum(self, other: "GramLattice", name: Optional[str] = None) -> "GramLattice":
        n, m = self.rank, other.rank
        g = [[0] * (n + m) for _ in range(n + m)]
        for i in range(n):
            for j in range(n):
                g[i][j] = self.gram[i][j]
        for i in range(m):
            for j in range(m):
                g[n + i][n + j] = other.gram[i][j]
        return GramLattice(tuple(tuple(r) for r in g), name=name)


@dataclass(frozen=True)
class EmbeddedSublattice:
    """Vectors spanning a sublattice of the ambient coordinate lattice Z^rank.

    The given vectors need not be linearly independent; operations work
    with the lattice they generate.
    """

    ambient: GramLattice
    basis: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(tuple(int(x) for x in v) for v in self.basis))
        for v in self.basis:
            if len(v) != self.ambient.rank:
                raise ValueError("basis vector length must equal the ambient rank")


# ---------------------------------------------------------------------------
# operations


def discriminant_group(L: GramLattice) -> AbelianInvariants:
    """Invariant factors of L*/L, read off the Smith form of the Gram matrix."""
    if L.det() == 0:
        raise DegenerateLatticeError("degenerate lattice")
    D, _, _ = smith_normal_form(L.gram_rows())
    return AbelianInvariants(tuple(D[i][i] for i in range(L.rank) if D[i][i] > 1))


def primitive_closure(S: EmbeddedSublattice) -> tuple[list[list[int]], AbelianInvariants]:
    """Saturation of the sublattice spanned by S inside the ambient Z^rank.

    Returns (closure_basis, glue) where glue is the quotient closure/S;
    a trivial glue group means S was already primitive.
    """
    if S.ambient.det() == 0:
        raise DegenerateLatticeError("degenerate lattice")
    if not S.basis:
        return [], AbelianInvariants()
    D, _P, Q = smith_normal_form([list(v) for v in S.basis])
    r = sum(1 for i in range(min(len(D), len(D[0]))) if D[i][i] != 0)
    Qinv = invert_unimodular(Q)
    closure = [list(Qinv[i]) for i in range(r)]
    glue = AbelianInvariants(tuple(D[i][i] for i in range(r) if D[i][i] > 1))
    return closure, glue


def is_p_divisible_class(v: Sequence[int], L: GramLattice, p: int) -> Optional[list[int]]:
    """Return w with p*w = v when every coordinate of v is divisible by p."""
    if len(v) != L.rank:
        raise ValueError("vector length must equal the lattice rank")
    if any(x % p != 0 for x in v):
        return None
    return [x // p for x in v]


# ---------------------------------------------------------------------------
# lattice catalog

_ADE_RE = re.compile(r"^([ADE])(\d+)$")
_SCALE_RE = re.compile(r"^(.*?)\((-?\d+)\)$")


def _chain_bonds(n: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(n - 1)]


def _d_bonds(n: int) -> list[tuple[int, int]]:
    # chain 0..n-3 with the two fork nodes n-2, n-1 both attached to n-3
    return [(i, i + 1) for i in range(n - 3)] + [(n - 3, n - 2), (n - 3, n - 1)]


def _e_bonds(n: int) -> list[tuple[int, int]]:
    return [(0, 2), (1, 3), (2, 3)] + [(i, i + 1) for i in range(3, n - 1)]


def cartan_matrix(kind: str, n: int) -> list[list[int]]:
    """Positive-definite Cartan matrix of the simply laced root system."""
    if kind == "A":
        if n < 1:
            raise ValueError("A_n needs n >= 1")
        bonds = _chain_bonds(n)
    elif kind == "D":
        if n < 4:
            raise ValueError("D_n needs n >= 4")
        bonds = _d_bonds(n)
    elif kind == "E":
        if n not in (6, 7, 8):
            raise ValueError("E_n needs n in {6, 7, 8}")
        bonds = _e_bonds(n)
    else:
        raise ValueError(f"unknown root system kind {kind!r}")
    g = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in bonds:
        g[i][j] = g[j][i] = -1
    return g


def _scaled(gram: list[list[int]], k: int) -> list[list[int]]:
    return [[k * x for x in row] for row in gram]


_U_GRAM = [[0, 1], [1, 0]]


def catalog_lattice(name: str) -> GramLattice:
    """Build a lattice from its catalog name.

    Root-system names (``A4``, ``D8``, ``E8``) denote the negative definite
    form (diagonal -2, bonds +1).  An explicit scale suffix ``(k)`` applies k
    to the positive-definite Cartan matrix, so ``E8(-1)`` equals ``E8``.
    ``U`` is the hyperbolic plane [[0,1],[1,0]]; ``U(k)`` scales it.
    ``K3`` is U^3 + two negative definite E8 blocks; ``ENRIQUES_FREE`` is
    U + one negative definite E8 block.
    """
    name = name.strip()
    if name == "K3":
        u = GramLattice(tuple(map(tuple, _U_GRAM)))
        e8 = GramLattice(tuple(map(tuple, _scaled(cartan_matrix("E", 8), -1))))
        return GramLattice(
            u.direct_sum(u).direct_sum(u).direct_sum(e8).direct_sum(e8).gram, name="K3"
        )
    if name == "ENRIQUES_FREE":
        u = GramLattice(tuple(map(tuple, _U_GRAM)))
        e8 = GramLattice(tuple(map(tuple, _scaled(cartan_matrix("E", 8), -1))))
        return GramLattice(u.direct_sum(e8).gram, name="ENRIQUES_FREE")

    scale = None
    base = name
    m = _SCALE_RE.match(name)
    if m:
        base, scale = m.group(1), int(m.group(2))
    if base == "U":
        return GramLattice(tuple(map(tuple, _scaled(_U_GRAM, 1 if scale is None else scale))), name=name)
    m = _ADE_RE.match(base)
    if m:
        kind, n = m.group(1), int(m.group(2))
        k = -1 if scale is None else scale
        return GramLattice(tuple(map(tuple, _scaled(cartan_matrix(kind, n), k))), name=name)
    raise ValueError(f"unknown catalog lattice {name!r}")


def parse_lattice(obj) -> GramLattice:
    """Parse the JSON lattice format: a catalog name, {"gram": ...}, or {"sum": [...]}."""
    if isinstance(obj, str):
        return catalog_lattice(obj)
    if isinstance(obj, dict):
        if "gram" in obj:
            lat = GramLattice(tuple(tuple(int(x) for x in row) for row in obj["gram"]),
                              name=obj.get("name"))
            if lat.name is not None:
                try:
                    expected = catalog_lattice(lat.name)
                except ValueError:
                    expected = None  # a free-form label, not a catalog name
                if expected is not None and expected.gram != lat.gram:
                    raise ValueError(
                        f"gram matrix does not match the catalog entry for {lat.name!r}"
                    )
            return lat
        if "sum" in obj:
            parts = [parse_lattice(p) for p in obj["sum"]]
            out = parts[0]
            for p in parts[1:]:
                out = out.direct_sum(p)
            return GramLattice(out.gram, name=obj.get("name", " + ".join(str(s) for s in obj["sum"])))
        if "name" in obj:
            return catalog_lattice(obj["name"])
    raise ValueError("lattice must be a catalog name or an object with 'gram' or 'sum'")
