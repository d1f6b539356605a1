"""Codings of interval exchanges, starting from the golden rotation.

The rotation by alpha = (3 - sqrt(5))/2 is a two-piece exchange of [0, 1).
Its natural coding started at x = alpha is the Fibonacci word, shifted up
by one so the letters name pieces 1 and 2.  Everything below is exact:
endpoints are quadratic irrationals and every orbit point is stored as one.
"""

from fractions import Fraction

from ietpc import (
    ExactNumber,
    fibonacci_word,
    golden_rotation,
    iet_coding,
    new_iet,
    parse_scalar,
    rotation_iet,
)

T = golden_rotation()
lengths = [str(T.breakpoints[i + 1] - T.breakpoints[i]) for i in range(T.n)]
print("golden rotation, lengths:", lengths)

alpha = parse_scalar("(3-1*sqrt(5))/2")
w = iet_coding(T, alpha, 13)
print("coding of alpha, 13 letters:", w.to_text())

fib = fibonacci_word(13)
shifted = "".join(str(int(ch) + 1) for ch in fib.to_text())
print("fibonacci word + 1:        ", shifted)
assert w.to_text() == shifted

# the same rotation built from lengths and a permutation
S = rotation_iet(alpha)
assert S == T

# orbits round-trip through eval / eval_inverse
x = Fraction(1, 7)
for _ in range(5):
    y = T.eval(x)
    assert T.eval_inverse(y) == x
    x = y
print("eval / eval_inverse round-trip ok")

# a rational rotation codes periodically
R = rotation_iet(Fraction(1, 3))
print("rotation 1/3 coding:", iet_coding(R, 0, 9).to_text())

# flips are allowed: sign -1 reverses a piece
F = new_iet([0, Fraction(1, 2), 1], [-1, 1], [1, Fraction(-1, 2)])
print("flip example: F(1/10) =", F.eval(Fraction(1, 10)))
print("flip example: F(3/4)  =", F.eval(Fraction(3, 4)))

one = ExactNumber(1)
print("exact arithmetic check: alpha^2 - 3*alpha + 1 =", alpha * alpha - (alpha + alpha + alpha) + one)
