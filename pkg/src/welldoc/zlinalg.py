"""Exact integer and modular linear algebra.

Matrices are lists of rows of Python ints, so every computation is exact
regardless of entry size.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .errors import InputError, InternalError, NotInvertibleError

INITIAL_PRIME = 2


def _check_square(M) -> int:
    n = len(M)
    if any(len(row) != n for row in M):
        raise InputError("matrix must be square")
    return n


def det(M) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = _check_square(M)
    if n == 0:
        return 1
    A = [[int(x) for x in row] for row in M]
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
        pivot = A[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact division is guaranteed by Sylvester's identity
                A[i][j] = (A[i][j] * pivot - A[i][k] * A[k][j]) // prev
        prev = pivot
    return sign * A[n - 1][n - 1]


def matmul(A, B, m: int | None = None):
    if A and len(A[0]) != len(B):
        raise InputError("inner dimensions do not match")
    cols = list(zip(*B)) if B else []
    out = [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]
    if m is not None:
        out = [[x % m for x in row] for row in out]
    return out


def matvec(A, v, m: int | None = None) -> tuple:
    out = tuple(sum(a * x for a, x in zip(row, v)) for row in A)
    if m is not None:
        out = tuple(x % m for x in out)
    return out


def identity(n: int):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def prime_factors(k: int) -> list:
    """Prime factors of ``|k|`` with multiplicity, ascending."""
    if k == 0:
        raise InputError("0 has no prime factorization")
    k = abs(k)
    out = []
    d = 2
    while d * d <= k:
        while k % d == 0:
            out.append(d)
            k //= d
        d += 1 if d == 2 else 2
    if k > 1:
        out.append(k)
    return out


def _vectors(V, dim: int | None):
    V = [tuple(int(x) for x in v) for v in V]
    if dim is None:
        if not V:
            raise InputError("dimension is required for an empty vector set")
        dim = len(V[0])
    if any(len(v) != dim for v in V):
        raise InputError(f"all vectors must have dimension {dim}")
    return V, dim


def _echelon_mod_p(V, p: int):
    """Row-reduce ``V`` over Z/pZ; return indices of the rows that were pivots."""
    basis = []  # (pivot column, reduced row)
    chosen = []
    for idx, v in enumerate(V):
        row = [x % p for x in v]
        for col, b in basis:
            if row[col]:
                f = row[col]
                row = [(x - f * y) % p for x, y in zip(row, b)]
        lead = next((c for c, x in enumerate(row) if x), None)
        if lead is None:
            continue
        inv = pow(row[lead], -1, p)
        row = [(x * inv) % p for x in row]
        # keep stored rows reduced at their pivot columns
        basis = [(c, [(x - b[lead] * y) % p for x, y in zip(b, row)]) for c, b in basis]
        basis.append((lead, row))
        chosen.append(idx)
    return chosen


def rank_mod_p(V, p: int, dim: int | None = None) -> int:
    """Rank of the vectors ``V`` reduced modulo the prime ``p``."""
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    V = list(V)
    if not V:
        return 0
    V, _ = _vectors(V, dim)
    return len(_echelon_mod_p(V, p))


def generates_mod_p(V, p: int, dim: int | None = None) -> bool:
    V, dim = _vectors(V, dim)
    return rank_mod_p(V, p, dim) == dim


@dataclass
class GenerationCertificate:
    """Evidence for a ``generates_Z`` answer."""

    answer: bool
    dim: int
    initial_prime: int = INITIAL_PRIME
    basis: list = field(default_factory=list)
    k: int | None = None
    primes_checked: list = field(default_factory=list)
    failing_prime: int | None = None

    def to_dict(self) -> dict:
        return {
            "answer": self.answer,
            "basis": [list(b) for b in self.basis],
            "k": self.k,
            "primes_checked": list(self.primes_checked),
            "failing_prime": self.failing_prime,
        }


def generates_Z(V, dim: int | None = None):
    """Decide whether the integer vectors ``V`` generate ``Z^dim``.

    Checks generation modulo 2 first. If that holds, the first ``dim``
    vectors independent mod 2 (in input order) form a matrix with nonzero
    integer determinant ``k``; generation then fails only at primes
    dividing ``k``, so those are the only ones left to test.

    Returns ``(answer, certificate)``.
    """
    V, dim = _vectors(V, dim)
    if dim == 0:
        raise InputError("dimension must be positive")
    p = INITIAL_PRIME
    chosen = _echelon_mod_p(V, p)
    cert = GenerationCertificate(answer=False, dim=dim, primes_checked=[p])
    if len(chosen) < dim:
        cert.failing_prime = p
        return False, cert
    basis = [V[i] for i in chosen]
    k = det(basis)
    cert.basis = basis
    cert.k = k
    if k == 0:
        raise InternalError("basis independent mod p has zero determinant")
    for q in sorted(set(prime_factors(k))):
        if q == p:
            continue  # already checked
        cert.primes_checked.append(q)
        if rank_mod_p(V, q, dim) < dim:
            cert.failing_prime = q
            return False, cert
    cert.answer = True
    return True, cert


def adjugate(M):
    n = _check_square(M)
    if n == 1:
        return [[1]]
    M = [list(row) for row in M]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for r, row in enumerate(M) if r != i]
            # adj is the transpose of the cofactor matrix
            adj[j][i] = (-1) ** (i + j) * det(minor)
    return adj


def inverse_mod_m(M, m: int):
    """Inverse of ``M`` over Z/mZ, via the adjugate."""
    n = _check_square(M)
    if m < 1:
        raise InputError("modulus must be positive")
    d = det(M) % m
    g = gcd(d, m)
    if g != 1:
        raise NotInvertibleError(f"det = {d} mod {m} shares factor {g} with {m}", gcd=g)
    if m == 1:
        return [[0] * n for _ in range(n)]
    d_inv = pow(d, -1, m)
    return [[(d_inv * x) % m for x in row] for row in adjugate(M)]
