"""Brute-force observation of ``X_{u,m}`` on a finite prefix."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import DomainError, InputError
from .words import Morphism, PrefixStream, format_morphism, format_word

DEFAULT_HORIZON = 100_000
DEFAULT_LMAX = 5
DEFAULT_MMAX = 6


class EmpiricalVerdict(str, enum.Enum):
    CONSISTENT = "CONSISTENT-WITH-WELLDOC"
    FALSIFIED = "FALSIFIED"
    INCONCLUSIVE = "INCONCLUSIVE"


class CellStatus(str, enum.Enum):
    FULL = "FULL"
    MISSING = "MISSING"
    INCONCLUSIVE = "INCONCLUSIVE"


def least_missing(present, m: int, sigma: int):
    """Lexicographically least vector of ``(Z/mZ)^sigma`` not in ``present``."""
    for v in product(range(m), repeat=sigma):
        if v not in present:
            return v
    return None


def _stream(phi_or_stream):
    if isinstance(phi_or_stream, PrefixStream):
        return phi_or_stream
    return PrefixStream(phi_or_stream, 0)


def empirical_X(phi, u, m: int, horizon: int):
    """Observed ``X_{u,m}`` over occurrences of ``u`` inside ``[0, horizon)``.

    A single left-to-right pass keeps the running Parikh vector mod ``m``.
    Returns ``(vectors, witness)`` where ``witness`` is the least missing
    vector, or ``None`` when every class was seen.
    """
    if m < 1:
        raise InputError("modulus must be positive")
    u = tuple(u)
    if not u:
        raise InputError("factor must be non-empty")
    stream = _stream(phi)
    sigma = stream.sigma
    w = stream.raw(horizon)
    L = len(u)
    first = u[0]
    counts = [0] * sigma
    seen = set()
    for i in range(horizon - L + 1):
        a = w[i]
        if a == first and tuple(w[i:i + L]) == u:
            seen.add(tuple(counts))
        counts[a] = (counts[a] + 1) % m
    if not seen:
        raise DomainError(f"{format_word(u, sigma)} does not occur in the first {horizon} symbols")
    vectors = frozenset(seen)
    witness = None if len(vectors) == m ** sigma else least_missing(vectors, m, sigma)
    return vectors, witness


@dataclass
class Cell:
    u: tuple
    m: int
    sigma: int
    vectors: frozenset
    occurrences: int
    stable: bool
    witness: tuple | None
    status: CellStatus

    @property
    def coverage(self) -> float:
        return len(self.vectors) / self.m ** self.sigma

    def to_dict(self) -> dict:
        return {
            "u": format_word(self.u, self.sigma),
            "m": self.m,
            "coverage": self.coverage,
            "observed": len(self.vectors),
            "witness": None if self.witness is None else list(self.witness),
            "occurrences": self.occurrences,
            "stable": self.stable,
            "status": self.status.value,
        }


@dataclass
class EmpiricalReport:
    morphism: Morphism
    horizon: int
    lmax: int
    mmax: int
    cells: list = field(default_factory=list)

    @property
    def falsified(self) -> list:
        return [c for c in self.cells if c.status is CellStatus.MISSING]

    @property
    def inconclusive(self) -> list:
        return [c for c in self.cells if c.status is CellStatus.INCONCLUSIVE]

    @property
    def verdict(self) -> EmpiricalVerdict:
        if self.falsified:
            return EmpiricalVerdict.FALSIFIED
        if self.inconclusive:
            return EmpiricalVerdict.INCONCLUSIVE
        return EmpiricalVerdict.CONSISTENT

    @property
    def witness(self):
        """First falsifying ``(u, m, vector)`` in (length, word, modulus) order."""
        bad = self.falsified
        if not bad:
            return None
        c = bad[0]
        return c.u, c.m, c.witness

    def cell(self, u, m: int) -> Cell:
        u = tuple(u)
        for c in self.cells:
            if c.u == u and c.m == m:
                return c
        raise KeyError((u, m))

    def to_dict(self) -> dict:
        w = self.witness
        return {
            "morphism": format_morphism(self.morphism),
            "verdict": self.verdict.value,
            "horizon": self.horizon,
            "lmax": self.lmax,
            "mmax": self.mmax,
            "witness": None if w is None else {
                "u": format_word(w[0], self.morphism.sigma), "m": w[1], "vector": list(w[2]),
            },
            "empirical": [c.to_dict() for c in self.cells],
        }


def _decode(code: int, m: int, sigma: int) -> tuple:
    out = []
    for _ in range(sigma):
        code, r = divmod(code, m)
        out.append(r)
    return tuple(out)


def _level_lengths(stream: PrefixStream, horizon: int) -> list:
    """Lengths of ``phi^k(a)``, k = 0, 1, ..., that fit in the horizon."""
    images = stream.phi.images
    out = [1]
    while True:
        nxt = sum(len(images[a]) for a in stream.raw(out[-1]))
        if nxt > horizon or nxt == out[-1]:
            return out
        out.append(nxt)


def empirical_welldoc(phi, lmax: int = DEFAULT_LMAX, mmax: int = DEFAULT_MMAX,
                      horizon: int = DEFAULT_HORIZON, levels: int = 2,
                      per_class: int = 16) -> EmpiricalReport:
    """Coverage of ``X_{u,m}`` for every observed ``|u| <= lmax`` and ``m <= mmax``.

    A cell is MISSING (falsifying) when some class never appears although
    the factor occurred at least ``per_class * m^sigma`` times and its
    observed set stopped growing before the last ``levels`` complete
    expansions ``phi^k(0)`` inside the window. Cells that are short of
    occurrences, or still growing, are INCONCLUSIVE.

    Stability is measured in expansion levels rather than as a fraction of
    the window because new classes tend to turn up as each level begins.
    Still only evidence: a class first reached beyond the window looks
    exactly like one that is never reached.
    """
    if levels < 0 or per_class < 1:
        raise InputError("levels must be non-negative and per_class positive")
    if lmax < 1 or mmax < 1 or horizon < 1:
        raise InputError("lmax, mmax and horizon must be positive")
    stream = _stream(phi)
    sigma = stream.sigma
    raw = stream.raw(horizon)
    if isinstance(raw, (bytes, bytearray)):
        w = np.frombuffer(raw, dtype=np.uint8).astype(np.int64)
    else:
        w = np.asarray(raw, dtype=np.int64)
    H = len(w)
    P = np.zeros((H + 1, sigma), dtype=np.int64)
    for a in range(sigma):
        P[1:, a] = np.cumsum(w == a)
    lengths = _level_lengths(stream, H)
    settled = lengths[-1 - levels] if levels < len(lengths) else -1
    report = EmpiricalReport(stream.phi, horizon, lmax, mmax)
    for L in range(1, min(lmax, H) + 1):
        n = H - L + 1
        code = np.zeros(n, dtype=np.int64)
        for j in range(L):
            code = code * sigma + w[j:j + n]
        fcodes, fcounts = np.unique(code, return_counts=True)
        occurrences = dict(zip(fcodes.tolist(), fcounts.tolist()))
        per_factor = {}
        for m in range(1, mmax + 1):
            size = m ** sigma
            R = P[:n] % m
            rcode = np.zeros(n, dtype=np.int64)
            for j in reversed(range(sigma)):
                rcode = rcode * m + R[:, j]
            if sigma ** L * size < 2 ** 62:
                pairs, first = np.unique(code * size + rcode, return_index=True)
                fc, rc = np.divmod(pairs, size)
            else:
                stacked = np.stack([code, rcode], axis=1)
                pairs, first = np.unique(stacked, axis=0, return_index=True)
                fc, rc = pairs[:, 0], pairs[:, 1]
            bounds = np.flatnonzero(np.diff(fc)) + 1
            for group in np.split(np.arange(len(fc)), bounds):
                f = int(fc[group[0]])
                vectors = frozenset(_decode(int(r), m, sigma) for r in rc[group])
                stable = bool(first[group].max() + L <= settled)
                per_factor.setdefault(f, []).append((m, vectors, stable))
        for f in sorted(per_factor, key=lambda f: _decode(f, sigma, L)[::-1]):
            u = _decode(f, sigma, L)[::-1]
            occ = occurrences[f]
            for m, vectors, stable in per_factor[f]:
                size = m ** sigma
                if len(vectors) == size:
                    status, witness = CellStatus.FULL, None
                else:
                    witness = least_missing(vectors, m, sigma)
                    enough = occ >= per_class * size and stable
                    status = CellStatus.MISSING if enough else CellStatus.INCONCLUSIVE
                report.cells.append(Cell(u, m, sigma, vectors, occ, stable, witness, status))
    return report
