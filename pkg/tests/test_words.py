"""Factor complexity, letter relabelings, and eventual-period detection."""

import random

import pytest

from ietpc import (
    KTooLarge,
    LengthMismatch,
    PrefixTooShort,
    SymbolicWord,
    complexity,
    complexity_stability,
    detect_eventual_period,
    factors,
    fibonacci_word,
    isomorphic,
    morse_hedlund_flag,
)


def brute_p(symbols, k):
    """Reference factor count, quadratic and obviously correct."""
    return len({symbols[i : i + k] for i in range(len(symbols) - k + 1)})


def test_complexity_matches_brute_force_fibonacci():
    w = fibonacci_word(400)
    table = complexity(w, 20)
    for k, p in table.entries:
        assert p == brute_p(w.symbols, k)


def test_complexity_matches_brute_force_random():
    rng = random.Random(1)
    for _ in range(25):
        n = rng.randint(40, 200)
        syms = tuple(rng.randint(1, 3) for _ in range(n))
        w = SymbolicWord(syms, 3)
        table = complexity(w, n // 4)
        for k, p in table.entries:
            assert p == brute_p(syms, k)


def test_fibonacci_word_prefix_and_complexity():
    assert fibonacci_word(13).to_text() == "0100101001001"
    table = complexity(fibonacci_word(4000), 30)
    for k in range(1, 31):
        assert table.p(k) == k + 1
    assert (table.alpha, table.beta) == (1, 1)
    assert not morse_hedlund_flag(table)


def test_morse_hedlund_flag_on_periodic_word():
    w = SymbolicWord((1, 2) * 40, 2)
    table = complexity(w, 10)
    assert table.p(1) == 2 and table.p(5) == 2
    assert morse_hedlund_flag(table)


def test_affine_tail_detected_on_eventually_constant_table():
    w = SymbolicWord((3,) + (1, 1, 2) * 8, 3)
    table = complexity(w, 6)
    assert table.entries == ((1, 3), (2, 4), (3, 4), (4, 4), (5, 4), (6, 4))
    assert (table.alpha, table.beta) == (0, 4)


def test_factors_and_guards():
    w = SymbolicWord((1, 2, 1), 2)
    assert factors(w, 2) == {(1, 2), (2, 1)}
    with pytest.raises(KTooLarge):
        factors(w, 4)
    with pytest.raises(PrefixTooShort):
        complexity(w, 2)  # 2 > 3//4
    forced = complexity(w, 2, force=True)
    assert forced.p(2) == 2


def test_isomorphic_relabeling():
    w1 = SymbolicWord((1, 2, 1, 3), 3)
    w2 = SymbolicWord((2, 3, 2, 1), 3)
    assert isomorphic(w1, w2) == {1: 2, 2: 3, 3: 1}
    # conflicting images
    assert isomorphic(SymbolicWord((1, 1), 2), SymbolicWord((1, 2), 2)) is None
    # non-injective relabeling
    assert isomorphic(SymbolicWord((1, 2), 2), SymbolicWord((1, 1), 2)) is None
    with pytest.raises(LengthMismatch):
        isomorphic(SymbolicWord((1,), 1), SymbolicWord((1, 1), 1))


def test_detect_eventual_period_examples():
    assert detect_eventual_period(SymbolicWord((1,) * 13, 1)) == (0, 1)
    # periodic from the very start: the minimal preperiod is 0, not 1
    w = SymbolicWord.from_text("2112112112112", 2)
    assert detect_eventual_period(w) == (0, 3)
    # a genuine preperiod: the leading 3 never recurs
    w = SymbolicWord((3,) + (1, 1, 2) * 8, 3)
    assert detect_eventual_period(w) == (1, 3)
    with pytest.raises(PrefixTooShort):
        detect_eventual_period(SymbolicWord((1, 2, 1, 2, 1, 2, 1), 2))


def test_detect_on_aperiodic_prefixes_is_only_a_filter():
    """Sturmian prefixes can end in a cube, so detection may fire without the
    infinite word being periodic; certification is the sound layer."""
    w = fibonacci_word(51).shift_letters(1)
    assert detect_eventual_period(w) is None
    w100 = fibonacci_word(100).shift_letters(1)
    assert detect_eventual_period(w100) == (34, 21)


def test_suffix_complexity_invariance_of_recurrent_word():
    """Dropping q letters from a recurrent word leaves the table unchanged."""
    w = fibonacci_word(4000)
    base = complexity(w, 20)
    for q in (1, 2, 5):
        assert complexity(w.suffix(q), 20).entries == base.entries


def test_suffix_complexity_drop_on_marked_word():
    """A non-recurring first letter contributes exactly one factor per k."""
    w = SymbolicWord((3,) + (1, 1, 2) * 8, 3)
    base = complexity(w, 6)
    shifted = complexity(w.suffix(1), 6)
    for k in range(1, 7):
        assert base.p(k) == shifted.p(k) + 1


def test_word_plumbing():
    w = SymbolicWord((0, 1, 0, 0, 1), 1, "demo")
    assert len(w) == 5 and w[2] == 0
    assert w.prefix(3).symbols == (0, 1, 0)
    assert w.suffix(2).symbols == (0, 0, 1)
    assert w.shift_letters(1).symbols == (1, 2, 1, 1, 2)
    assert SymbolicWord.from_text(w.to_text(), 1).symbols == w.symbols
    big = SymbolicWord((3, 11, 7), 11)
    assert big.to_text() == "3,11,7"
    assert SymbolicWord.from_text(big.to_text(), 11).symbols == big.symbols
    with pytest.raises(ValueError):
        SymbolicWord((), 1)
    with pytest.raises(ValueError):
        SymbolicWord((4,), 2)


def test_complexity_table_serialization():
    table = complexity(fibonacci_word(200), 8)
    assert table.to_csv_text().splitlines()[0] == "k,p"
    assert table.to_csv_text().splitlines()[1] == "1,2"
    data = table.to_json_dict()
    assert data["entries"][0] == [1, 2]
    assert data["alpha"] == 1


def test_complexity_stability():
    assert complexity_stability(fibonacci_word(4000), 20).stable
    # a late symbol change flips the table between doublings
    syms = (1,) * 300 + (2,) + (1,) * 60
    rep = complexity_stability(SymbolicWord(syms, 2), 4)
    assert not rep.stable
    assert rep.changed_last_doubling
    with pytest.raises(PrefixTooShort):
        complexity_stability(fibonacci_word(100), 20)
