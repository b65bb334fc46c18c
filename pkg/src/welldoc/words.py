"""Words, morphisms and lazily expanded fixed points.

Letters are the integers ``0..sigma-1`` and a finite word is a tuple of
letters.  Infinite fixed points are held by :class:`PrefixStream`, which
keeps a growing buffer and expands it on demand.
"""
from __future__ import annotations

import json
import threading
from array import array
from dataclasses import dataclass
from itertools import chain
from typing import Iterable, Sequence

from .errors import DomainError, InputError

Word = tuple  # tuple[int, ...]


@dataclass(frozen=True)
class Morphism:
    """A nonerasing morphism given by the images of the letters.

    ``images[a]`` is the image of letter ``a``; the alphabet size is the
    number of images.
    """

    images: tuple

    def __post_init__(self):
        images = tuple(tuple(int(x) for x in img) for img in self.images)
        sigma = len(images)
        if sigma < 1:
            raise InputError("a morphism needs at least one letter")
        for a, img in enumerate(images):
            if not img:
                raise InputError(f"image of letter {a} is empty (morphism must be nonerasing)")
            for x in img:
                if not 0 <= x < sigma:
                    raise InputError(f"letter {x} in image of {a} is outside 0..{sigma - 1}")
        object.__setattr__(self, "images", images)

    @property
    def sigma(self) -> int:
        return len(self.images)

    def __call__(self, u: Iterable[int]) -> Word:
        return apply(self, u)

    def __str__(self) -> str:
        return format_morphism(self)

    def power(self, k: int) -> "Morphism":
        if k < 1:
            raise InputError("power must be at least 1")
        result = self
        for _ in range(k - 1):
            result = compose(self, result)
        return result


def compose(phi: Morphism, psi: Morphism) -> Morphism:
    """Return ``phi o psi``, the morphism ``a -> phi(psi(a))``."""
    if phi.sigma != psi.sigma:
        raise InputError("cannot compose morphisms over different alphabets")
    return Morphism(tuple(apply(phi, img) for img in psi.images))


def apply(phi: Morphism, u: Iterable[int]) -> Word:
    u = tuple(u)
    bad = [a for a in set(u) if not 0 <= a < phi.sigma]
    if bad:
        raise InputError(f"letters {sorted(bad)} are outside 0..{phi.sigma - 1}")
    images = phi.images
    return tuple(chain.from_iterable(images[a] for a in u))


def parikh(u: Iterable[int], sigma: int) -> tuple:
    """Letter counts of ``u`` as a length-``sigma`` tuple."""
    counts = [0] * sigma
    for a in u:
        if not 0 <= a < sigma:
            raise InputError(f"letter {a} is outside 0..{sigma - 1}")
        counts[a] += 1
    return tuple(counts)


def incidence_matrix(phi: Morphism) -> list:
    """Matrix whose entry ``(i, j)`` counts letter ``i`` in ``phi(j)``."""
    sigma = phi.sigma
    cols = [parikh(img, sigma) for img in phi.images]
    return [[cols[j][i] for j in range(sigma)] for i in range(sigma)]


def is_prolongable(phi: Morphism, a: int) -> bool:
    img = phi.images[a]
    return len(img) >= 2 and img[0] == a


def letters_of(u: Iterable[int]) -> frozenset:
    return frozenset(u)


# -- text / JSON forms -------------------------------------------------------

def parse_word(text: str, sigma: int) -> Word:
    """Parse a word: digit string when ``sigma <= 10``, else comma-separated.

    Comma-separated integers are accepted for any alphabet size.
    """
    text = text.strip()
    if not text:
        return ()
    try:
        if "," in text or sigma > 10:
            letters = tuple(int(tok) for tok in text.split(","))
        else:
            letters = tuple(int(ch) for ch in text)
    except ValueError:
        raise InputError(f"cannot parse word {text!r}") from None
    for a in letters:
        if not 0 <= a < sigma:
            raise InputError(f"letter {a} in {text!r} is outside 0..{sigma - 1}")
    return letters


def format_word(u: Sequence[int], sigma: int) -> str:
    if sigma > 10:
        return ",".join(str(a) for a in u)
    return "".join(str(a) for a in u)


def parse_morphism(text: str) -> Morphism:
    """Parse ``sigma;a->w;...`` or the JSON form ``{"sigma":..,"images":[..]}``."""
    text = text.strip()
    if text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid morphism JSON: {exc}") from None
        return morphism_from_json(data)
    parts = [p.strip() for p in text.split(";") if p.strip()]
    if not parts:
        raise InputError("empty morphism specification")
    try:
        sigma = int(parts[0])
    except ValueError:
        raise InputError(f"alphabet size {parts[0]!r} is not an integer") from None
    if sigma < 1:
        raise InputError("alphabet size must be positive")
    images = [None] * sigma
    for rule in parts[1:]:
        if "->" not in rule:
            raise InputError(f"rule {rule!r} lacks '->'")
        lhs, rhs = (s.strip() for s in rule.split("->", 1))
        try:
            a = int(lhs)
        except ValueError:
            raise InputError(f"rule {rule!r}: {lhs!r} is not a letter") from None
        if not 0 <= a < sigma:
            raise InputError(f"rule {rule!r}: letter {a} is outside 0..{sigma - 1}")
        if images[a] is not None:
            raise InputError(f"letter {a} has two rules")
        images[a] = parse_word(rhs, sigma)
    missing = [a for a, img in enumerate(images) if img is None]
    if missing:
        raise InputError(f"no rule for letters {missing}")
    return Morphism(tuple(images))


def morphism_from_json(data) -> Morphism:
    if not isinstance(data, dict) or "sigma" not in data or "images" not in data:
        raise InputError("morphism JSON needs 'sigma' and 'images'")
    sigma = data["sigma"]
    images = data["images"]
    if not isinstance(sigma, int) or sigma < 1:
        raise InputError("'sigma' must be a positive integer")
    if not isinstance(images, list) or len(images) != sigma:
        raise InputError(f"'images' must list exactly {sigma} words")
    parsed = []
    for img in images:
        if isinstance(img, str):
            parsed.append(parse_word(img, sigma))
        elif isinstance(img, list) and all(isinstance(x, int) for x in img):
            parsed.append(tuple(img))
        else:
            raise InputError(f"cannot read image {img!r}")
    return Morphism(tuple(parsed))


def format_morphism(phi: Morphism) -> str:
    rules = ";".join(f"{a}->{format_word(img, phi.sigma)}" for a, img in enumerate(phi.images))
    return f"{phi.sigma};{rules}"


def morphism_to_json(phi: Morphism) -> dict:
    return {"sigma": phi.sigma, "images": [format_word(img, phi.sigma) for img in phi.images]}


# -- fixed points ------------------------------------------------------------

class PrefixStream:
    """The fixed point ``lim phi^n(start)``, expanded lazily.

    The buffer always equals ``phi(buffer[:expanded])`` for an expansion
    pointer ``expanded``; growing it appends the images of the next
    unexpanded letters (``w = a s phi(s) phi^2(s) ...``).

    Reads of already-buffered positions are safe from several threads;
    growth is serialized by an internal lock.
    """

    def __init__(self, phi: Morphism, start: int = 0):
        if not 0 <= start < phi.sigma:
            raise InputError(f"start letter {start} is outside 0..{phi.sigma - 1}")
        if not is_prolongable(phi, start):
            raise DomainError(f"morphism {phi} is not prolongable on {start}")
        self.phi = phi
        self.start = start
        self._bytes = phi.sigma <= 256
        if self._bytes:
            self._images = [bytes(img) for img in phi.images]
            self._buf = bytearray(self._images[start])
        else:
            self._images = phi.images
            self._buf = array("L", phi.images[start])
        self._expanded = 1
        self._lock = threading.Lock()

    @property
    def sigma(self) -> int:
        return self.phi.sigma

    def __len__(self) -> int:
        """Number of symbols buffered so far (not the word length)."""
        return len(self._buf)

    def ensure(self, n: int) -> None:
        """Grow the buffer to hold at least ``n`` symbols."""
        if len(self._buf) >= n:
            return
        with self._lock:
            buf, images = self._buf, self._images
            while len(buf) < n:
                # expand enough letters to cover the deficit; at least one
                lo = self._expanded
                hi = min(len(buf), lo + max(1, n - len(buf)))
                chunk = buf[lo:hi]
                if self._bytes:
                    buf.extend(b"".join([images[c] for c in chunk]))
                else:
                    buf.extend(chain.from_iterable(images[c] for c in chunk))
                self._expanded = hi

    def prefix(self, n: int) -> Word:
        if n < 0:
            raise InputError("prefix length must be non-negative")
        self.ensure(n)
        return tuple(self._buf[:n])

    def raw(self, n: int):
        """Buffer slice of length ``n`` (``bytes`` for alphabets up to 256)."""
        self.ensure(n)
        if self._bytes:
            return bytes(self._buf[:n])
        return self._buf[:n]

    def __getitem__(self, index):
        if isinstance(index, slice):
            if index.stop is None or index.stop < 0:
                raise InputError("slices of an infinite word need an explicit end")
            self.ensure(index.stop)
            return tuple(self._buf[index])
        if index < 0:
            raise InputError("negative index into an infinite word")
        self.ensure(index + 1)
        return self._buf[index]

    def __iter__(self):
        i = 0
        while True:
            if i >= len(self._buf):
                self.ensure(max(2 * len(self._buf), i + 1))
            yield self._buf[i]
            i += 1


def prefix(phi: Morphism, a: int, n: int) -> Word:
    """First ``n`` symbols of the fixed point of ``phi`` starting with ``a``."""
    return PrefixStream(phi, a).prefix(n)


def _finite(source, horizon: int):
    if hasattr(source, "raw"):
        return source.raw(horizon)
    seq = tuple(source[:horizon])
    if len(seq) < horizon:
        raise InputError(f"finite word has length {len(seq)} < horizon {horizon}")
    return seq


def factors(source, length: int, horizon: int) -> set:
    """Distinct factors of ``length`` observed in ``source[0, horizon)``.

    ``source`` is a :class:`PrefixStream` or any finite sequence. The result
    is complete only for the observed window.
    """
    if length < 0 or horizon < length:
        raise InputError("need 0 <= length <= horizon")
    w = _finite(source, horizon)
    return {tuple(w[i:i + length]) for i in range(horizon - length + 1)}


def rauzy_graph1(source, horizon: int) -> frozenset:
    """Edges ``(a, b)`` such that ``ab`` occurs in ``source[0, horizon)``."""
    if horizon < 2:
        raise InputError("horizon must be at least 2")
    w = _finite(source, horizon)
    return frozenset(zip(w[:-1], w[1:]))


def image_reach(phi: Morphism) -> list:
    """For each letter ``a``, the letters occurring in some ``phi^k(a)``, ``k >= 1``."""
    reach = [set(img) for img in phi.images]
    changed = True
    while changed:
        changed = False
        for a in range(phi.sigma):
            extra = set().union(*(reach[b] for b in reach[a])) - reach[a]
            if extra:
                reach[a] |= extra
                changed = True
    return [frozenset(r) for r in reach]


def tail_letters(phi: Morphism, a: int = 0) -> frozenset:
    """Letters occurring after position 0 of the fixed point starting with ``a``."""
    tail = phi.images[a][1:]
    reach = image_reach(phi)
    return frozenset(tail).union(*(reach[b] for b in tail))


def two_factors(phi: Morphism, a: int = 0) -> frozenset:
    """All length-2 factors of the fixed point starting with ``a`` (exact)."""
    if not is_prolongable(phi, a):
        raise DomainError(f"morphism {phi} is not prolongable on {a}")
    images = phi.images
    inner = [set(zip(img[:-1], img[1:])) for img in images]
    found = set(inner[a])
    frontier = list(found)
    while frontier:
        c, d = frontier.pop()
        new = inner[c] | inner[d] | {(images[c][-1], images[d][0])}
        for pair in new - found:
            found.add(pair)
            frontier.append(pair)
    return frozenset(found)
