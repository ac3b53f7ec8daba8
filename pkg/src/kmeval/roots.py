"""Integer weights, simple roots and the cyclic bar map.

Weights of both gl_n and level-zero affine gl_n are vectors in Z^n.  The
simple roots are e_i - e_{i+1} for i < n together with the affine root
(-1, 0, ..., 0, 1); indices are read modulo n in affine mode.
"""

from __future__ import annotations

Weight = tuple


def simple_root(i: int, n: int) -> Weight:
    """alpha_i as an integer vector; i runs over 1..n (i = n is affine)."""
    if not 1 <= i <= n:
        raise ValueError(f"root index {i} out of range for n={n}")
    v = [0] * n
    if i < n:
        v[i - 1] = 1
        v[i] = -1
    else:
        v[0] = -1
        v[n - 1] = 1
    return tuple(v)


def add(lam: Weight, mu: Weight) -> Weight:
    return tuple(a + b for a, b in zip(lam, mu))


def sub(lam: Weight, mu: Weight) -> Weight:
    return tuple(a - b for a, b in zip(lam, mu))


def neg(lam: Weight) -> Weight:
    return tuple(-a for a in lam)


def bar(lam: Weight) -> Weight:
    """bar(lam)_i = lam_i - lam_{i+1} read cyclically; entries sum to 0."""
    n = len(lam)
    return tuple(lam[i] - lam[(i + 1) % n] for i in range(n))


def bar_i(lam: Weight, i: int) -> int:
    n = len(lam)
    return lam[i - 1] - lam[i % n]


def pairing(i: int, j: int, n: int, affine: bool = True) -> int:
    """(alpha_i, alpha_j) under the Euclidean form on Z^n."""
    if affine:
        ai, aj = simple_root(i, n), simple_root(j, n)
        return sum(x * y for x, y in zip(ai, aj))
    if i == j:
        return 2
    return -1 if abs(i - j) == 1 else 0


def epsilon(i: int, j: int, n: int, affine: bool = True) -> int:
    """The sign in the quadratic KLR relation: +1 when i = j+1, -1 when
    i = j-1 (mod n in affine mode), else 0."""
    if affine:
        if n <= 2:
            raise ValueError("epsilon needs n > 2 in affine mode")
        if (i - j) % n == 1:
            return 1
        if (j - i) % n == 1:
            return -1
        return 0
    if i == j + 1:
        return 1
    if i == j - 1:
        return -1
    return 0


def schur_level(lam: Weight) -> int:
    return sum(lam)
