"""Prime-field arithmetic and univariate polynomials over GF(p).

Field elements are plain Python ints in ``[0, p)``; polynomials are lists of
coefficients, lowest degree first, with no trailing zeros (the zero
polynomial is the empty list).
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

DEFAULT_PRIME = 2147483647  # 2**31 - 1


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def fp_inv(a: int, p: int = DEFAULT_PRIME) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("no inverse of zero")
    # extended Euclid
    old_r, r = a, p
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    return old_s % p


def normalize(coeffs: Sequence[int], p: int = DEFAULT_PRIME) -> list[int]:
    """Reduce coefficients mod p and strip trailing zeros."""
    out = [c % p for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(poly: Sequence[int]) -> int:
    """Degree of a normalized polynomial; the zero polynomial reports 0."""
    return max(len(poly) - 1, 0)


def poly_eval(poly: Sequence[int], z: int, p: int = DEFAULT_PRIME) -> int:
    acc = 0
    for c in reversed(poly):
        acc = (acc * z + c) % p
    return acc


def poly_add(a: Sequence[int], b: Sequence[int], p: int = DEFAULT_PRIME) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return normalize(out, p)


def poly_mul(a: Sequence[int], b: Sequence[int], p: int = DEFAULT_PRIME) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return normalize(out, p)


def poly_scale(a: Sequence[int], c: int, p: int = DEFAULT_PRIME) -> list[int]:
    return normalize([x * c for x in a], p)


def lagrange_basis(xs: Sequence[int], p: int = DEFAULT_PRIME) -> list[list[int]]:
    """Coefficient lists of the Lagrange basis polynomials L_v for nodes ``xs``.

    L_v(xs[v]) = 1 and L_v(xs[u]) = 0 for u != v. Each basis polynomial is
    returned with exactly ``len(xs)`` coefficients (zero padded), which lets
    callers stack them into a matrix. Runs in O(m^2) field operations.
    """
    m = len(xs)
    if m == 0:
        raise FieldError("need at least one interpolation node")
    xs = [x % p for x in xs]
    if len(set(xs)) != m:
        raise FieldError("repeated interpolation node")

    # master polynomial prod_v (z - x_v), degree m
    master = [1]
    for x in xs:
        nxt = [0] * (len(master) + 1)
        for i, c in enumerate(master):
            nxt[i + 1] = (nxt[i + 1] + c) % p
            nxt[i] = (nxt[i] - c * x) % p
        master = nxt

    basis = []
    for v, x in enumerate(xs):
        # synthetic division of master by (z - x)
        quot = [0] * m
        carry = 0
        for i in range(m, 0, -1):
            carry = (master[i] + carry * x) % p
            quot[i - 1] = carry
        denom = 1
        for u, y in enumerate(xs):
            if u != v:
                denom = denom * (x - y) % p
        scale = fp_inv(denom, p)
        basis.append([c * scale % p for c in quot])
    return basis


def lagrange_interpolate(
    points: Sequence[tuple[int, int]], p: int = DEFAULT_PRIME
) -> list[int]:
    """Unique polynomial of degree <= len(points) - 1 through ``points``."""
    if not points:
        raise FieldError("need at least one interpolation node")
    xs = [x for x, _ in points]
    basis = lagrange_basis(xs, p)
    coeffs = [0] * len(points)
    for (_, y), b in zip(points, basis):
        y %= p
        if y == 0:
            continue
        for i, c in enumerate(b):
            coeffs[i] = (coeffs[i] + y * c) % p
    return normalize(coeffs, p)


def mod_matmul(a: np.ndarray, b: np.ndarray, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Matrix product mod p for int64 operands already reduced into [0, p).

    Products are reduced term by term so nothing overflows for p < 2**31;
    the reduced partial sums are accumulated in blocks small enough to stay
    within int64.
    """
    if p >= 1 << 31:
        raise FieldError("mod_matmul requires p < 2**31")
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    # each reduced term is < 2**31, so up to 2**31 terms fit; block anyway
    step = 1 << 20
    for start in range(0, a.shape[1], step):
        terms = (a[:, start:start + step, None] * b[None, start:start + step, :]) % p
        out = (out + terms.sum(axis=1)) % p
    return out
