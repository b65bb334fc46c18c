"""Deciding WELLDOC for fixed points of morphisms.

The decision follows the determinant-and-returns criterion: a recurrent
fixed point has WELLDOC iff its incidence matrix has determinant +-1 and
the Parikh vectors of the return words to its first letter generate
``Z^sigma``. On a binary alphabet the second condition follows from the
first.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import DomainError, InternalError, UnboundedReturnsError
from .returns import ReturnSet, returns_complete, s_table_fixpoint, _occurrences
from .words import (
    Morphism,
    PrefixStream,
    format_morphism,
    incidence_matrix,
    is_prolongable,
    parikh,
)
from .zlinalg import (
    INITIAL_PRIME,
    GenerationCertificate,
    det,
    generates_Z,
    prime_factors,
    rank_mod_p,
    _echelon_mod_p,
)


class Verdict(str, enum.Enum):
    WELLDOC = "WELLDOC"
    NOT_WELLDOC = "NOT_WELLDOC"
    NOT_RECURRENT = "NOT_RECURRENT_HENCE_NOT_WELLDOC"


def is_recurrent(phi: Morphism, start: int = 0):
    """Whether the fixed point of ``phi`` starting with ``start`` is recurrent.

    Accumulates the letters of ``phi^k(a)`` over increasing ``k`` until the
    accumulated sets stop changing (never more than ``sigma^2`` powers).
    The word is recurrent iff ``start`` occurs again after position 0, i.e.
    iff it lies in the accumulated image of some letter following ``start``
    in ``phi(start)`` (or is such a letter).

    Returns ``(recurrent, trace)``.
    """
    if not is_prolongable(phi, start):
        raise DomainError(f"morphism {phi} is not prolongable on {start}")
    sigma = phi.sigma
    base = [frozenset(img) for img in phi.images]
    power = list(base)
    acc = list(base)
    k = 1
    while k < sigma * sigma:
        power = [frozenset().union(*(base[b] for b in power[a])) for a in range(sigma)]
        grown = [acc[a] | power[a] for a in range(sigma)]
        k += 1
        if grown == acc:
            break
        acc = grown
    tail = phi.images[start][1:]
    tail_letters = frozenset(tail).union(*(acc[b] for b in tail))
    recurrent = start in tail_letters
    trace = {
        "powers": k,
        "image_letters": [sorted(s) for s in acc],
        "tail_letters": sorted(tail_letters),
        "effective_alphabet": sorted(tail_letters | {start}),
    }
    return recurrent, trace


@dataclass
class WelldocVerdict:
    morphism: Morphism
    recurrent: bool
    recurrence_trace: dict
    det: int
    verdict: Verdict
    binary_shortcut_used: bool = False
    returns: ReturnSet | None = None
    returns_generate_Z: bool | None = None
    generation: dict | None = None
    degenerate: bool = False
    reasons: list = field(default_factory=list)

    @property
    def effective_alphabet(self) -> list:
        return self.recurrence_trace["effective_alphabet"]

    def to_dict(self) -> dict:
        return {
            "morphism": format_morphism(self.morphism),
            "recurrent": self.recurrent,
            "recurrence_trace": self.recurrence_trace,
            "det": self.det,
            "binary_shortcut_used": self.binary_shortcut_used,
            "returns": None if self.returns is None else self.returns.to_dict(),
            "generates_Z": self.generation,
            "verdict": self.verdict.value,
            "degenerate": self.degenerate,
            "reasons": list(self.reasons),
            "empirical": [],
        }


def returns_generation(phi: Morphism):
    """Decide whether the returns to 0 generate ``Z^sigma``.

    Uses the certified list of return words when it is finite. Otherwise
    the mod-p tables stand in for the (infinite) list: an integer basis is
    taken from returns inside ``phi^k(0)`` and only the primes dividing its
    determinant are re-examined.

    Returns ``(answer, returns_or_None, certificate_dict)``.
    """
    sigma = phi.sigma
    try:
        rs = returns_complete(phi)
    except UnboundedReturnsError:
        rs = None
    if rs is not None:
        answer, cert = generates_Z(rs.vectors, sigma)
        out = cert.to_dict()
        out["route"] = "returns"
        return answer, rs, out
    answer, cert = _generation_from_tables(phi)
    out = cert.to_dict()
    out["route"] = "s-table"
    return answer, None, out


def _generation_from_tables(phi: Morphism):
    sigma = phi.sigma
    p = INITIAL_PRIME
    table = s_table_fixpoint(phi, p)
    cert = GenerationCertificate(answer=False, dim=sigma, primes_checked=[p])
    if rank_mod_p(sorted(table.return_classes()), p, sigma) < sigma:
        cert.failing_prime = p
        return False, cert
    # phi^k(0) realises every class of the stabilised table
    stream = PrefixStream(phi, 0)
    length = len(phi.images[0])
    for _ in range(table.k - 1):
        length = sum(len(phi.images[a]) for a in stream.raw(length))
    w = stream.raw(length)
    pos = _occurrences(w, (0,))
    words = sorted({tuple(w[a:b]) for a, b in zip(pos, pos[1:])}, key=lambda r: (len(r), r))
    vectors = [parikh(r, sigma) for r in words]
    chosen = _echelon_mod_p(vectors, p)
    if len(chosen) < sigma:
        raise InternalError("returns inside phi^k(0) do not realise the S-table classes")
    basis = [vectors[i] for i in chosen[:sigma]]
    k = det(basis)
    cert.basis, cert.k = basis, k
    for q in sorted(set(prime_factors(k)) - {p}):
        cert.primes_checked.append(q)
        t = s_table_fixpoint(phi, q)
        if rank_mod_p(sorted(t.return_classes()), q, sigma) < sigma:
            cert.failing_prime = q
            return False, cert
    cert.answer = True
    return True, cert


def decide_welldoc(phi: Morphism) -> WelldocVerdict:
    """Run the full decision pipeline on the fixed point starting with 0."""
    if not is_prolongable(phi, 0):
        raise DomainError(f"morphism {phi} is not prolongable on 0")
    sigma = phi.sigma
    recurrent, trace = is_recurrent(phi, 0)
    d = det(incidence_matrix(phi))
    degenerate = len(trace["effective_alphabet"]) == 1
    reasons = []
    if degenerate:
        reasons.append(
            "degenerate fixed point 0^inf over a one-letter effective alphabet; "
            "such words are excluded by convention"
        )
    v = WelldocVerdict(phi, recurrent, trace, d, Verdict.NOT_WELLDOC,
                       degenerate=degenerate, reasons=reasons)
    if not recurrent:
        v.verdict = Verdict.NOT_RECURRENT
        reasons.append("not recurrent: some factor occurs finitely often, so its X_u is finite")
        return v
    if abs(d) != 1:
        reasons.append(f"det A = {d} is not +-1")
        return v
    answer, rs, gen = returns_generation(phi)
    v.returns, v.returns_generate_Z, v.generation = rs, answer, gen
    if sigma == 2:
        v.binary_shortcut_used = True
        if not answer:
            raise InternalError("binary recurrent fixed point with det +-1 has non-generating returns")
        reasons.append("binary alphabet, recurrent, det +-1")
        v.verdict = Verdict.WELLDOC
        return v
    if answer:
        reasons.append("det +-1 and return vectors generate Z^sigma")
        v.verdict = Verdict.WELLDOC
    else:
        reasons.append(f"return vectors fail to generate Z^sigma modulo {gen['failing_prime']}")
    return v
