"""Linear congruential generators combined along an infinite word.

Given one generator per letter, the combined stream emits at step ``n``
the next unused value of the generator named by the letter ``w_n``, so
generator ``a`` advances once per occurrence of ``a`` in ``w``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import InputError
from .words import Morphism, PrefixStream


@dataclass(frozen=True)
class LcgParams:
    a: int
    c: int
    m: int
    seed: int = 0

    def __post_init__(self):
        if self.m < 2:
            raise InputError("LCG modulus must be at least 2")
        for name in ("a", "c", "seed"):
            value = getattr(self, name)
            if not 0 <= value < self.m:
                raise InputError(f"LCG {name}={value} must lie in [0, {self.m})")

    @classmethod
    def parse(cls, text: str) -> "LcgParams":
        """Read an ``a,c,m,seed`` quadruple."""
        try:
            a, c, m, seed = (int(tok) for tok in text.split(","))
        except ValueError:
            raise InputError(f"expected 'a,c,m,seed', got {text!r}") from None
        return cls(a, c, m, seed)


def lcg_next(state: int, params: LcgParams) -> int:
    return (params.a * state + params.c) % params.m


def lcg_stream(params: LcgParams) -> Iterator[int]:
    """The raw sequence ``Z_0 = seed, Z_1, Z_2, ...``."""
    z = params.seed
    while True:
        yield z
        z = lcg_next(z, params)


class CombinedStream:
    """Outputs ``Z(w)_n``: the ``f(n)``-th value of the generator for letter ``w_n``.

    ``counts[a]`` is the number of occurrences of ``a`` already consumed,
    i.e. ``f`` evaluated at the next position carrying ``a``. Not safe to
    step from several threads.
    """

    def __init__(self, word, generators):
        if isinstance(word, Morphism):
            word = PrefixStream(word, 0)
        generators = list(generators)
        sigma = getattr(word, "sigma", None)
        if sigma is not None and len(generators) != sigma:
            raise InputError(f"need {sigma} generators, one per letter; got {len(generators)}")
        moduli = {g.m for g in generators}
        if len(moduli) != 1:
            raise InputError("all generators must share one modulus")
        self.generators = generators
        self.modulus = moduli.pop()
        self._letters = iter(word)
        self.states = [g.seed for g in generators]
        self.counts = [0] * len(generators)
        self.position = 0

    def __iter__(self):
        return self

    def __next__(self) -> int:
        letter = next(self._letters)
        if letter >= len(self.generators):
            raise InputError(f"letter {letter} has no generator")
        value = self.states[letter]
        self.states[letter] = lcg_next(value, self.generators[letter])
        self.counts[letter] += 1
        self.position += 1
        return value

    def take(self, n: int) -> list:
        return [next(self) for _ in range(n)]


def tuple_coverage(values: Iterable[int], d: int, n_samples: int, modulus: int | None = None):
    """Fraction of ``(Z/mZ)^d`` reached by overlapping ``d``-tuples of the first samples.

    Returns ``(coverage, missing)`` where ``missing`` counts unreached tuples.
    """
    if d < 1:
        raise InputError("dimension must be at least 1")
    if n_samples < d:
        raise InputError("need at least d samples")
    if modulus is None:
        modulus = getattr(values, "modulus", None)
        if modulus is None:
            raise InputError("modulus is required for a plain iterable")
    it = iter(values)
    window = deque(maxlen=d)
    seen = set()
    for _ in range(n_samples):
        window.append(next(it))
        if len(window) == d:
            seen.add(tuple(window))
    total = modulus ** d
    return len(seen) / total, total - len(seen)
