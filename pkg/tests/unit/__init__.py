

SQRT2 = 1.4142135623730951

# (q0, X ≈ q0^(13/6)): 8 -> 1e2, 24 -> 1e3, 70 -> 1e4, 202 -> 1e5.
Q0_SMALL = 24

Q0_MEDIUM = 40

TABLE_LIMIT = 10 ** 5
