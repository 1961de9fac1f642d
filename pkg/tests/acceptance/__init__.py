

SQRT2 = 1.4142135623730951

TABLE_LIMIT = 10 ** 6

# X ≈ 1e4, 1e5 and 1e6.
Q0_1E4 = 70

Q0_1E5 = 202

Q0_1E6 = 586
