"""Subword complexity: counting distinct factors of each length.

p(k) is the number of distinct length-k factors.  Sturmian words have
p(k) = k + 1, the smallest possible for an aperiodic word.  Ultimately the
tables here settle into p(k) = alpha*k + beta and the library reports that
affine tail.
"""

from ietpc import (
    SymbolicWord,
    complexity,
    complexity_stability,
    detect_eventual_period,
    fibonacci_word,
    golden_rotation,
    iet_coding,
    morse_hedlund_flag,
)

w = fibonacci_word(2000)
table = complexity(w, 30)
print("fibonacci word, p(k) for k <= 10:", [table.p(k) for k in range(1, 11)])
print("affine tail: alpha =", table.alpha, "beta =", table.beta)
print("morse-hedlund flag (bounded p => periodic):", morse_hedlund_flag(table))

# a marked word: one letter occurs exactly once, complexity grows then flattens
marked = SymbolicWord((3,) + (1, 1, 2) * 8, 3)
t2 = complexity(marked, 6)
print("marked word entries:", t2.entries)

# dropping the marker drops p(k) by one for every k
suffix = marked.suffix(1)
t3 = complexity(suffix, 6)
assert all(t2.p(k) == t3.p(k) + 1 for k in range(1, 7))
print("suffix complexity is one lower at every k")

# recurrent words shrug off losing a prefix
g = iet_coding(golden_rotation(), 0, 600)
base = complexity(g, 12).entries
for q in (1, 2, 5):
    assert complexity(g.suffix(q), 12).entries == base
print("golden coding complexity stable under dropping 1, 2, 5 letters")

# the affine tail needs a long enough prefix to trust;
# complexity_stability compares the table against a shorter prefix
rep = complexity_stability(fibonacci_word(4000), 20)
print("stability on 4000 letters:", "stable" if rep.stable else "unstable")

# finite-prefix period detection is a filter, not a proof
u = SymbolicWord((2, 1, 1, 2, 1, 1, 2, 1, 1, 2, 1, 1, 2), 2)
print("detector on 2(112)^4:", detect_eventual_period(u))
g100 = iet_coding(golden_rotation(), 0, 100)
print("detector on 100 aperiodic letters:", detect_eventual_period(g100),
      "(a false positive: 100 letters cannot distinguish period 21)")
