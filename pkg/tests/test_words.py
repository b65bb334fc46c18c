import threading

import pytest
from hypothesis import given, settings, strategies as st

from conftest import IMAGES
from oracles import fixed_prefix
from welldoc.errors import DomainError, InputError
from welldoc.words import (
    Morphism,
    PrefixStream,
    apply,
    compose,
    factors,
    format_morphism,
    image_reach,
    incidence_matrix,
    is_prolongable,
    morphism_to_json,
    parikh,
    parse_morphism,
    parse_word,
    prefix,
    rauzy_graph1,
    tail_letters,
    two_factors,
)
from welldoc.zlinalg import matmul, matvec


@st.composite
def morphism_st(draw, max_sigma=4, max_len=5):
    sigma = draw(st.integers(1, max_sigma))
    letter = st.integers(0, sigma - 1)
    images = [tuple(draw(st.lists(letter, min_size=1, max_size=max_len))) for _ in range(sigma)]
    return Morphism(tuple(images))


@st.composite
def morphism_and_word(draw):
    phi = draw(morphism_st())
    u = draw(st.lists(st.integers(0, phi.sigma - 1), max_size=30))
    return phi, tuple(u)


def W(text):
    return tuple(int(ch) for ch in text)


# -- apply / parikh / incidence ---------------------------------------------

def test_apply_examples(morphisms):
    assert apply(morphisms["fibonacci"], W("001")) == W("01010")
    assert apply(morphisms["counterexample"], W("02")) == W("02102")
    assert apply(morphisms["counterexample"], ()) == ()


def test_apply_rejects_bad_letters(morphisms):
    with pytest.raises(InputError):
        apply(morphisms["fibonacci"], (0, 2))
    with pytest.raises(InputError):
        apply(morphisms["fibonacci"], (-1,))


def test_parikh_examples():
    assert parikh(W("01"), 2) == (1, 1)
    assert parikh(W("021"), 3) == (1, 1, 1)
    assert parikh((), 3) == (0, 0, 0)


def test_incidence_examples(morphisms):
    assert incidence_matrix(morphisms["counterexample"]) == [[1, 1, 1], [0, 2, 1], [1, 0, 1]]
    assert incidence_matrix(morphisms["fibonacci"]) == [[1, 1], [1, 0]]
    ident = Morphism(((0,), (1,), (2,)))
    assert incidence_matrix(ident) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_morphism_validation():
    with pytest.raises(InputError):
        Morphism(((0,), ()))
    with pytest.raises(InputError):
        Morphism(((0, 2), (1,)))
    with pytest.raises(InputError):
        Morphism(())


@given(morphism_and_word(), st.lists(st.integers(0, 3), max_size=20))
def test_parikh_additive(pw, v):
    phi, u = pw
    v = tuple(x % phi.sigma for x in v)
    lhs = parikh(u + v, phi.sigma)
    assert lhs == tuple(a + b for a, b in zip(parikh(u, phi.sigma), parikh(v, phi.sigma)))


@given(morphism_and_word())
def test_abelianization(pw):
    phi, u = pw
    assert parikh(apply(phi, u), phi.sigma) == matvec(incidence_matrix(phi), parikh(u, phi.sigma))


@given(morphism_st(max_sigma=3), st.data())
def test_functoriality(phi, data):
    sigma = phi.sigma
    letter = st.integers(0, sigma - 1)
    psi = Morphism(tuple(tuple(data.draw(st.lists(letter, min_size=1, max_size=4)))
                         for _ in range(sigma)))
    assert incidence_matrix(compose(phi, psi)) == matmul(incidence_matrix(phi), incidence_matrix(psi))


def test_power_matches_compose(morphisms):
    phi = morphisms["tribonacci"]
    assert phi.power(3) == compose(phi, compose(phi, phi))
    assert apply(phi.power(4), (0,)) == W(fixed_prefix(IMAGES["tribonacci"], 13))


# -- prolongability / prefixes -----------------------------------------------

def test_is_prolongable():
    assert is_prolongable(parse_morphism("3;0->02;1->101;2->102"), 0)
    assert not is_prolongable(parse_morphism("2;0->10;1->1"), 0)
    assert not is_prolongable(parse_morphism("2;0->0;1->01"), 0)


def test_prefix_examples(morphisms):
    # frozen from the string-replacement expander in oracles.py
    assert prefix(morphisms["fibonacci"], 0, 8) == W("01001010")
    assert prefix(morphisms["counterexample"], 0, 13) == W("0210210102102")
    assert prefix(morphisms["fibonacci"], 0, 0) == ()


@pytest.mark.parametrize("name", sorted(IMAGES))
def test_prefix_matches_oracle(morphisms, name):
    n = 3000
    assert prefix(morphisms[name], 0, n) == W(fixed_prefix(IMAGES[name], n))


def test_prefix_requires_prolongable():
    with pytest.raises(DomainError):
        prefix(parse_morphism("2;0->10;1->1"), 0, 5)


@pytest.mark.parametrize("name", sorted(IMAGES))
def test_fixed_point_consistency(morphisms, name):
    phi = morphisms[name]
    for n in range(0, 300, 7):
        p = prefix(phi, 0, n)
        assert apply(phi, p)[:n] == p


def test_stream_determinism(morphisms):
    phi = morphisms["counterexample"]
    a, b = PrefixStream(phi), PrefixStream(phi)
    b.ensure(5000)
    assert a.prefix(5000) == b.prefix(5000)
    assert [a[i] for i in (0, 17, 4999)] == [b[i] for i in (0, 17, 4999)]
    assert a[10:20] == b.prefix(20)[10:]


def test_stream_growth_only(morphisms):
    s = PrefixStream(morphisms["fibonacci"])
    sizes = []
    for n in (1, 10, 5, 1000, 20):
        s.ensure(n)
        sizes.append(len(s))
    assert sizes == sorted(sizes)


def test_stream_concurrent_reads(morphisms):
    s = PrefixStream(morphisms["tribonacci"])
    expected = W(fixed_prefix(IMAGES["tribonacci"], 20000))
    results = []

    def read(n):
        results.append(s.prefix(n) == expected[:n])

    threads = [threading.Thread(target=read, args=(n,)) for n in (500, 20000, 7000, 20000)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(results) and len(results) == 4


def test_stream_large_alphabet():
    # 300 letters forces the non-byte buffer
    sigma = 300
    images = [(0, 1)] + [((a + 1) % sigma,) for a in range(1, sigma)]
    s = PrefixStream(Morphism(tuple(images)))
    w = s.prefix(50)
    assert w[:3] == (0, 1, 2)
    assert apply(s.phi, w)[:50] == w


def test_stream_iteration(morphisms):
    s = PrefixStream(morphisms["fibonacci"])
    it = iter(s)
    assert [next(it) for _ in range(8)] == list(W("01001010"))


# -- factors / graph ----------------------------------------------------------

def test_factors_examples(morphisms):
    s = PrefixStream(morphisms["fibonacci"])
    assert factors(s, 2, 8) == {W("01"), W("10"), W("00")}
    assert factors(s, 1, 8) == {(0,), (1,)}
    assert factors(s, 8, 8) == {W("01001010")}


def test_rauzy_graph_examples(morphisms):
    periodic = W("0101201" * 2)
    assert rauzy_graph1(periodic, 14) == {(0, 1), (1, 0), (1, 2), (2, 0)}
    constant = PrefixStream(parse_morphism("1;0->00"))
    assert rauzy_graph1(constant, 10) == {(0, 0)}
    assert rauzy_graph1(PrefixStream(morphisms["fibonacci"]), 20) == {(0, 1), (1, 0), (0, 0)}


@pytest.mark.parametrize("name", sorted(IMAGES))
def test_two_factors_exact(morphisms, name):
    w = fixed_prefix(IMAGES[name], 20000)
    observed = {(int(w[i]), int(w[i + 1])) for i in range(len(w) - 1)}
    assert two_factors(morphisms[name]) == observed


def test_tail_letters():
    assert tail_letters(parse_morphism("2;0->01;1->11")) == {1}
    assert tail_letters(parse_morphism("2;0->01;1->0")) == {0, 1}
    assert image_reach(parse_morphism("3;0->01;1->2;2->1"))[1] == {1, 2}


# -- text and JSON forms -----------------------------------------------------

def test_parse_text_and_json_agree():
    a = parse_morphism("3;0->02;1->101;2->102")
    b = parse_morphism('{"sigma":3,"images":["02","101","102"]}')
    c = parse_morphism('{"sigma":3,"images":[[0,2],[1,0,1],[1,0,2]]}')
    assert a == b == c


def test_parse_large_alphabet():
    rules = ";".join(f"{a}->{a},{(a + 1) % 12}" for a in range(12))
    phi = parse_morphism(f"12;{rules}")
    assert phi.images[11] == (11, 0)
    assert parse_morphism(format_morphism(phi)) == phi


@pytest.mark.parametrize("bad", [
    "", "x;0->0", "2;0->01", "2;0->01;0->1;1->0", "2;0->02;1->0", "2;0=>01;1->0",
    "2;0->;1->0", "{not json", '{"sigma":2,"images":["01"]}', "0;",
])
def test_parse_errors(bad):
    with pytest.raises(InputError):
        parse_morphism(bad)


def test_parse_word_rules():
    assert parse_word("0210", 3) == W("0210")
    assert parse_word("0,11,3", 12) == (0, 11, 3)
    assert parse_word("11", 12) == (11,)
    with pytest.raises(InputError):
        parse_word("3", 3)


@settings(max_examples=200)
@given(morphism_st(max_sigma=14, max_len=4))
def test_format_round_trip(phi):
    assert parse_morphism(format_morphism(phi)) == phi
    import json
    assert parse_morphism(json.dumps(morphism_to_json(phi))) == phi
