"""Return words of morphic fixed points.

Three routes are provided:

* :func:`returns_by_scan` reads a finite window and lists what it sees.
* :func:`returns_complete` expands ``phi^k(0)`` until the return words to
  ``0`` provably stop changing, and cross-checks the result against the
  mod-m table of factor vectors from :func:`s_table_fixpoint`.
* :func:`returns_via_images` cuts the letter images at their zeros, which
  is valid when every image contains every letter.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    DomainError,
    InputError,
    InternalError,
    PreconditionError,
    UnboundedReturnsError,
)
from .words import (
    Morphism,
    PrefixStream,
    format_word,
    incidence_matrix,
    is_prolongable,
    parikh,
    tail_letters,
    two_factors,
)
from .zlinalg import INITIAL_PRIME, is_prime, matvec, rank_mod_p

HORIZON_ONLY = "horizon-only"
CERTIFIED = "certified"
VALIDATED = "validated-in-horizon"


@dataclass
class ReturnSet:
    """Distinct return words to ``target`` and their Parikh vectors."""

    target: tuple
    words: list
    sigma: int
    completeness: str
    certificate: dict = field(default_factory=dict)

    def __post_init__(self):
        self.words = sorted(set(self.words), key=lambda r: (len(r), r))

    @property
    def vectors(self) -> list:
        return [parikh(r, self.sigma) for r in self.words]

    def to_dict(self) -> dict:
        return {
            "target": format_word(self.target, self.sigma),
            "words": [format_word(r, self.sigma) for r in self.words],
            "parikh": [list(v) for v in self.vectors],
            "completeness": self.completeness,
            "certificate": self.certificate,
        }


def _occurrences(w, target) -> list:
    if isinstance(w, (bytes, bytearray)):
        needle = bytes(target)
        out = []
        i = w.find(needle)
        while i >= 0:
            out.append(i)
            i = w.find(needle, i + 1)
        return out
    L = len(target)
    target = tuple(target)
    return [i for i in range(len(w) - L + 1) if tuple(w[i:i + L]) == target]


def returns_by_scan(stream: PrefixStream, target, horizon: int) -> ReturnSet:
    """Returns to ``target`` between consecutive occurrences inside ``[0, horizon)``."""
    target = tuple(target)
    if not target:
        raise InputError("target must be a non-empty word")
    w = stream.raw(horizon)
    pos = _occurrences(w, target)
    if len(pos) < 2:
        raise DomainError(
            f"target occurs {len(pos)} time(s) in the first {horizon} symbols; need at least 2"
        )
    words = {tuple(w[a:b]) for a, b in zip(pos, pos[1:])}
    return ReturnSet(target, list(words), stream.sigma, HORIZON_ONLY,
                     {"horizon": horizon, "occurrences": len(pos)})


# -- S-table -----------------------------------------------------------------

@dataclass
class STable:
    """Parikh vectors mod ``modulus`` of factors of ``phi^k(0)``, per end letters.

    ``sets[(a, b)]`` holds the classes of factors that begin with ``a`` and
    end with ``b`` (single letters included). ``spans`` keeps only factors of
    length at least 2, which is what the expansion step needs.
    """

    modulus: int
    k: int
    letters: frozenset
    spans: dict
    sigma: int
    sizes: list = field(default_factory=list)

    @property
    def sets(self) -> dict:
        m = self.modulus
        out = {}
        for a in range(self.sigma):
            for b in range(self.sigma):
                s = set(self.spans.get((a, b), ()))
                if a == b and a in self.letters:
                    s.add(tuple(int(i == a) % m for i in range(self.sigma)))
                out[(a, b)] = frozenset(s)
        return out

    def state(self):
        return self.letters, self.spans

    def return_classes(self) -> set:
        """Classes ``V_r mod m`` generating the same group as the returns to 0."""
        m = self.modulus
        return {tuple((x - (i == 0)) % m for i, x in enumerate(v)) for v in self.spans.get((0, 0), ())}


def _cumulative(word, sigma, m):
    out = [tuple([0] * sigma)]
    cur = [0] * sigma
    for a in word:
        cur[a] = (cur[a] + 1) % m
        out.append(tuple(cur))
    return out


def _sub(u, v, m):
    return tuple((x - y) % m for x, y in zip(u, v))


def _add(u, v, m):
    return tuple((x + y) % m for x, y in zip(u, v))


class _ImageTables:
    """Per-letter data about ``phi(c)`` reused by every S-table step."""

    def __init__(self, phi: Morphism, m: int):
        sigma = phi.sigma
        self.matrix = incidence_matrix(phi)
        self.internal, self.suffixes, self.prefixes = [], [], []
        for img in phi.images:
            cum = _cumulative(img, sigma, m)
            n = len(img)
            inner = {}
            for s in range(n):
                for e in range(s + 1, n):
                    inner.setdefault((img[s], img[e]), set()).add(_sub(cum[e + 1], cum[s], m))
            self.internal.append(inner)
            self.suffixes.append({(img[s], _sub(cum[n], cum[s], m)) for s in range(n)})
            self.prefixes.append({(img[e], cum[e + 1]) for e in range(n)})


def _s_step(phi, tables, letters, spans, m):
    sigma = phi.sigma
    new_letters = frozenset().union(*(phi.images[c] for c in letters))
    new_spans = {}
    for c in letters:
        for key, vals in tables.internal[c].items():
            new_spans.setdefault(key, set()).update(vals)
    for (c, d), vals in spans.items():
        unit = [0] * sigma
        unit[c] += 1
        unit[d] += 1
        for v in vals:
            middle = _sub(v, unit, m)
            img = matvec(tables.matrix, middle, m)
            for a, sv in tables.suffixes[c]:
                left = _add(sv, img, m)
                for b, pv in tables.prefixes[d]:
                    new_spans.setdefault((a, b), set()).add(_add(left, pv, m))
    return new_letters, {key: frozenset(v) for key, v in new_spans.items()}


def s_table_bound(sigma: int, m: int) -> int:
    return sigma * sigma * m ** sigma


def s_table_initial(phi: Morphism, m: int) -> STable:
    """The table for ``phi^1(0)``."""
    if not is_prolongable(phi, 0):
        raise DomainError(f"morphism {phi} is not prolongable on 0")
    if m < 2:
        raise InputError("modulus must be at least 2")
    tables = _ImageTables(phi, m)
    letters, spans = _s_step(phi, tables, frozenset([0]), {}, m)
    table = STable(m, 1, letters, spans, phi.sigma)
    table.sizes.append(_size(table))
    return table


def _size(table: STable) -> int:
    return len(table.letters) + sum(len(v) for v in table.spans.values())


def s_table_step(phi: Morphism, table: STable) -> STable:
    """Advance from ``phi^k(0)`` to ``phi^(k+1)(0)``."""
    tables = _ImageTables(phi, table.modulus)
    letters, spans = _s_step(phi, tables, table.letters, table.spans, table.modulus)
    nxt = STable(table.modulus, table.k + 1, letters, spans, phi.sigma, list(table.sizes))
    nxt.sizes.append(_size(nxt))
    return nxt


def s_table_fixpoint(phi: Morphism, m: int) -> STable:
    """Iterate the table until ``S^k == S^(k+1)``; returns ``S^k``.

    Stability is tested on the letter set and the length-2-or-more classes
    separately, which is the state the next step depends on.  Once it
    repeats it repeats forever, because a class that is new at step ``k+1``
    always comes from a class that was new at step ``k``.
    """
    table = s_table_initial(phi, m)
    tables = _ImageTables(phi, m)
    bound = s_table_bound(phi.sigma, m)
    while True:
        letters, spans = _s_step(phi, tables, table.letters, table.spans, m)
        if letters == table.letters and spans == table.spans:
            return table
        table = STable(m, table.k + 1, letters, spans, phi.sigma, table.sizes + [0])
        table.sizes[-1] = _size(table)
        if table.k > bound:
            raise InternalError(f"S-table did not stabilise within {bound} steps")


# -- certified returns to 0 --------------------------------------------------

def _shape_family(phi: Morphism) -> list:
    """Letter sets closed under ``Q -> {x : phi(x) uses only Q}``, from ``Q0 = Sigma minus 0``."""
    sigma = phi.sigma
    img_letters = [frozenset(img) for img in phi.images]
    q = frozenset(range(1, sigma))
    family = []
    while q not in family:
        family.append(q)
        q = frozenset(x for x in range(sigma) if img_letters[x] <= q)
    return family


def _bridges(w, q: frozenset) -> set:
    """Factors ``x g y`` of ``w`` with ``x, y`` outside ``q`` and ``g`` inside."""
    cut = [i for i, a in enumerate(w) if a not in q]
    return {tuple(w[i:j + 1]) for i, j in zip(cut, cut[1:])}


def returns_complete(phi: Morphism, modulus: int = INITIAL_PRIME,
                     max_length: int = 200_000) -> ReturnSet:
    """All return words to ``0`` in the fixed point, with a completeness certificate.

    Each expansion ``phi^k(0)`` is summarised by its letters and, for every
    letter set ``Q`` in a finite family, the factors that run between two
    letters outside ``Q`` through letters inside ``Q``.  For
    ``Q = Sigma minus {0}`` these are exactly the words ``0 r 0`` with ``r``
    a return.  A new such factor at step ``k+1`` forces a new one at step
    ``k``, so when one expansion adds nothing nothing is ever added again.

    The found vectors are then checked to generate, modulo ``modulus``, the
    same subgroup as the stabilised S-table.
    """
    if not is_prolongable(phi, 0):
        raise DomainError(f"morphism {phi} is not prolongable on 0")
    if 0 not in tail_letters(phi, 0):
        raise DomainError("fixed point is not recurrent: letter 0 never occurs again")
    if not is_prime(modulus):
        raise InputError(f"working modulus {modulus} must be prime")
    family = _shape_family(phi)
    stream = PrefixStream(phi, 0)
    sigma = phi.sigma

    def summary(n):
        w = stream.raw(n)
        return frozenset(w), tuple(_bridges(w, q) for q in family)

    length = len(phi.images[0])
    step = 1
    current = summary(length)
    while True:
        nxt_length = sum(len(phi.images[a]) for a in stream.raw(length))
        if nxt_length > max_length:
            raise UnboundedReturnsError(
                f"return words to 0 still changing after phi^{step}(0) "
                f"(length {length}); the return set may be infinite"
            )
        nxt = summary(nxt_length)
        if nxt == current:
            break
        current, length, step = nxt, nxt_length, step + 1

    words = [b[:-1] for b in current[1][0]]
    result = ReturnSet((0,), words, sigma, CERTIFIED)

    table = s_table_fixpoint(phi, modulus)
    found = [tuple(x % modulus for x in v) for v in result.vectors]
    from_table = sorted(table.return_classes())
    r_found = rank_mod_p(found, modulus, sigma)
    r_table = rank_mod_p(from_table, modulus, sigma)
    r_union = rank_mod_p(found + from_table, modulus, sigma)
    if not r_found == r_table == r_union:
        raise InternalError(
            f"return words span rank {r_found} mod {modulus} but the S-table gives {r_table}"
        )
    result.certificate = {
        "stabilization_step": step,
        "prefix_length": length,
        "shape_sets": len(family),
        "modulus": modulus,
        "s_table_k": table.k,
        "rank_mod_m": r_found,
    }
    return result


def decompose_image(img, letter: int = 0):
    """Split ``img = x 0 v_0 0 v_1 ... 0 y`` into ``(x, [v_0, ...], y)``.

    Returns ``None`` when ``letter`` does not occur in ``img``.
    """
    pos = [i for i, a in enumerate(img) if a == letter]
    if not pos:
        return None
    x = tuple(img[:pos[0]])
    blocks = [tuple(img[i + 1:j]) for i, j in zip(pos, pos[1:])]
    y = tuple(img[pos[-1] + 1:])
    return x, blocks, y


def returns_via_images(phi: Morphism, horizon: int = 100_000) -> ReturnSet:
    """Returns to 0 read off the images, for morphisms whose images use every letter.

    Candidates are ``0 v`` for the blocks between zeros of one image, and
    ``0 y_a x_b`` for every length-2 factor ``ab`` of the fixed point. Each
    candidate is kept only after ``candidate + 0`` is seen in the window.
    """
    sigma = phi.sigma
    full = frozenset(range(sigma))
    lacking = [a for a, img in enumerate(phi.images) if frozenset(img) != full]
    if lacking:
        raise PreconditionError(
            f"images of letters {lacking} do not contain every letter; use returns_complete"
        )
    if not is_prolongable(phi, 0):
        raise DomainError(f"morphism {phi} is not prolongable on 0")
    parts = [decompose_image(img) for img in phi.images]
    candidates = set()
    for x, blocks, y in parts:
        candidates.update((0,) + v for v in blocks)
    edges = two_factors(phi, 0)
    for a, b in edges:
        candidates.add((0,) + parts[a][2] + parts[b][0])
    w = PrefixStream(phi, 0).raw(horizon)
    validated = [c for c in candidates if _occurrences(w, c + (0,))]
    return ReturnSet((0,), validated, sigma, VALIDATED, {
        "candidates": len(candidates),
        "edges": sorted(edges),
        "horizon": horizon,
    })
