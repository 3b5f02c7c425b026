"""Small integer helpers shared by the field and criterion modules."""

from math import gcd


def factorize(n):
    """Return the prime factorization of ``n >= 1`` as a sorted list of (p, e)."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def totient(n):
    """Euler's totient of ``n`` via trial-division factorization."""
    result = n
    for p, _ in factorize(n):
        result = result // p * (p - 1)
    return result


def divisors(n):
    """All positive divisors of ``n`` in ascending order."""
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def units_mod(m):
    """Residues in [1, m) coprime to m; ``[1]`` for m = 1."""
    if m == 1:
        return [1]
    return [k for k in range(1, m) if gcd(k, m) == 1]
