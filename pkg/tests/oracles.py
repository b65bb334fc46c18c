"""Independent reference computations used to pin expected values.

Nothing here imports the package's algorithms; words are plain strings
and everything is done the slow, obvious way.
"""
from __future__ import annotations

from itertools import combinations, permutations, product
from math import gcd, prod


def expand(images: list[str], n: int, start: str = "0") -> str:
    """phi^n(start) by repeated character replacement (letters < 10)."""
    w = start
    for _ in range(n):
        w = "".join(images[int(ch)] for ch in w)
    return w


def fixed_prefix(images: list[str], length: int) -> str:
    k = 0
    while len(expand(images, k)) < length:
        k += 1
    return expand(images, k)[:length]


def counts(word: str, sigma: int) -> tuple:
    return tuple(word.count(str(a)) for a in range(sigma))


def leibniz_det(M) -> int:
    n = len(M)
    total = 0
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        total += (-1) ** inversions * prod(M[i][perm[i]] for i in range(n))
    return total


def generates_by_minors(vectors, n: int) -> bool:
    """Z-span of the vectors is Z^n iff the gcd of the n x n minors is 1."""
    g = 0
    for rows in combinations(vectors, n):
        g = gcd(g, leibniz_det([list(r) for r in rows]))
    return g == 1


def generates_by_snf(vectors, n: int) -> bool:
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form

    if len(vectors) < n:
        return False
    S = smith_normal_form(Matrix(vectors), domain=ZZ)
    diag = [S[i, i] for i in range(min(S.shape))]
    return len(diag) >= n and all(abs(d) == 1 for d in diag[:n])


def subgroup_mod(generators, m: int, sigma: int) -> set:
    """Subgroup of (Z/mZ)^sigma generated by the vectors, by closure."""
    gens = [tuple(x % m for x in g) for g in generators]
    group = {tuple([0] * sigma)}
    frontier = list(group)
    while frontier:
        v = frontier.pop()
        for g in gens:
            s = tuple((a + b) % m for a, b in zip(v, g))
            if s not in group:
                group.add(s)
                frontier.append(s)
    return group


def prefix_vectors_mod(word: str, u: str, m: int, sigma: int) -> set:
    """X_{u,m} from a finite word, recounting each prefix from scratch."""
    out = set()
    start = word.find(u)
    while start >= 0:
        out.add(tuple(c % m for c in counts(word[:start], sigma)))
        start = word.find(u, start + 1)
    return out


def s_table_brute(images: list[str], m: int, i: int) -> dict:
    """S^i: classes mod m of all factors of phi^i(0), keyed by end letters."""
    sigma = len(images)
    w = expand(images, i)
    table = {(a, b): set() for a in range(sigma) for b in range(sigma)}
    for s in range(len(w)):
        for e in range(s, len(w)):
            f = w[s:e + 1]
            table[(int(f[0]), int(f[-1]))].add(tuple(c % m for c in counts(f, sigma)))
    return table


def scan_returns(word: str, target: str) -> set:
    pos = [i for i in range(len(word) - len(target) + 1) if word.startswith(target, i)]
    return {word[a:b] for a, b in zip(pos, pos[1:])}


def combined_lcg(word: str, params: list[tuple]) -> list:
    """Z(w)_n = Z^{(w_n)}_{f(n)} evaluated literally, recomputing f and Z each time."""
    out = []
    for n, ch in enumerate(word):
        letter = int(ch)
        f = sum(1 for j in range(n) if word[j] == ch)
        a, c, m, z = params[letter]
        for _ in range(f):
            z = (a * z + c) % m
        out.append(z)
    return out


def all_vectors(m: int, sigma: int):
    return set(product(range(m), repeat=sigma))
