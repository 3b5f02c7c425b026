"""The gcd(D_n, N+1) test for fields of definition.

D_n = sum_{i=0}^N d^(n i).  If gcd(D_n, N+1) = 1 for some n, the field of
moduli is a field of definition.  Only n up to totient(N+1) need checking:
D_n mod p depends on d^n mod p, which is periodic with period dividing p - 1.
"""

from dataclasses import dataclass, field
from math import gcd

from .arith import factorize, totient

__all__ = ["CriterionCertificate", "criterion_check", "degree_Dn", "totient", "prime_power_divisors"]


def degree_Dn(d, N, n):
    if d <= 1:
        raise ValueError(f"degree d must be at least 2, got {d}")
    if N < 1 or n < 1:
        raise ValueError("need N >= 1 and n >= 1")
    step = d ** n
    total, term = 0, 1
    for _ in range(N + 1):
        total += term
        term *= step
    return total


def prime_power_divisors(k):
    """The maximal prime powers p^e exactly dividing k, ordered by the prime."""
    return [p ** e for p, e in factorize(k)]


@dataclass(frozen=True)
class CriterionRow:
    n: int
    Dn: int
    gcd: int
    residues: tuple  # (q, D_n mod q) per prime-power divisor q of N+1


@dataclass(frozen=True)
class CriterionCertificate:
    d: int
    N: int
    window: int
    verdict: str  # "Pass" or "Fail"
    witness: int = None
    rows: tuple = field(default_factory=tuple)

    @property
    def passed(self):
        return self.verdict == "Pass"

    def render(self):
        k = self.N + 1
        qs = prime_power_divisors(k)
        width = max(len(str(r.Dn)) for r in self.rows)
        width = max(width, 3)
        head = f"{'n':>4}  {'D_n':>{width}}  {'gcd':>4}" + "".join(f"  {'mod ' + str(q):>8}" for q in qs)
        lines = [
            f"criterion d={self.d} N={self.N}: window 1..{self.window} (totient({k}) = {self.window})",
            head,
        ]
        for r in self.rows:
            lines.append(f"{r.n:>4}  {r.Dn:>{width}}  {r.gcd:>4}" + "".join(f"  {v:>8}" for _, v in r.residues))
        if self.passed:
            lines.append(f"verdict: Pass(n={self.witness}): gcd(D_{self.witness}, {k}) = 1, "
                         "so for a map with trivial stabilizer the field of moduli is a field of definition")
        else:
            lines.append(f"verdict: Fail: gcd(D_n, {k}) > 1 for every n in the window; criterion inconclusive")
        return "\n".join(lines)


def criterion_check(d, N):
    """Pass with the least witness n in 1..totient(N+1), or Fail with the full table."""
    if d <= 1:
        raise ValueError(f"degree d must be at least 2, got {d}")
    if N < 1:
        raise ValueError(f"N must be at least 1, got {N}")
    k = N + 1
    window = totient(k)
    qs = prime_power_divisors(k)
    rows = []
    for n in range(1, window + 1):
        Dn = degree_Dn(d, N, n)
        row = CriterionRow(n, Dn, gcd(Dn, k), tuple((q, Dn % q) for q in qs))
        rows.append(row)
        if row.gcd == 1:
            return CriterionCertificate(d, N, window, "Pass", n, tuple(rows))
    return CriterionCertificate(d, N, window, "Fail", None, tuple(rows))
