"""Small exact number-theory helpers shared by the arithmetic modules."""

from math import gcd, isqrt


def vp(n, p):
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of zero")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_prime(n):
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if a % n == 0:
            continue
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


def primes_up_to(n):
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
    return [i for i in range(n + 1) if sieve[i]]


def factor(n):
    """Factor a positive integer by trial division; returns {prime: exponent}."""
    if n < 1:
        raise ValueError("factor expects a positive integer")
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_squarefree(n):
    return all(e == 1 for e in factor(n).values())


def is_fundamental_discriminant(d):
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return is_squarefree(abs(d))
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(abs(m))
    return False


def jacobi(a, n):
    if n <= 0 or n % 2 == 0:
        raise ValueError("Jacobi symbol needs odd positive modulus")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(d, n):
    """Kronecker symbol (d | n) for a discriminant d and any integer n."""
    if n == 0:
        return 1 if abs(d) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if d < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if d % 2 == 0:
            return 0
        if v % 2 and d % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * jacobi(d, n)


def sqrt_mod_prime(a, p):
    """A square root of a mod an odd prime p (Tonelli-Shanks), or None."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def hilbert_symbol(a, b, p):
    """Hilbert symbol (a, b)_p for nonzero integers; p = -1 means the real place."""
    if p == -1:
        return -1 if (a < 0 and b < 0) else 1
    al, u = _split(a, p)
    be, v = _split(b, p)
    if p == 2:
        eps = lambda x: ((x - 1) // 2) % 2
        om = lambda x: ((x * x - 1) // 8) % 2
        e = eps(u) * eps(v) + al * om(v) + be * om(u)
        return -1 if e % 2 else 1
    e = al * be * ((p - 1) // 2)
    s = -1 if e % 2 else 1
    if be % 2:
        s *= legendre(u, p)
    if al % 2:
        s *= legendre(v, p)
    return s


def legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _split(x, p):
    v = vp(x, p)
    return v, x // p ** v


def crt(residues, moduli):
    x, m = 0, 1
    for r, n in zip(residues, moduli):
        g = gcd(m, n)
        if (r - x) % g:
            raise ValueError("incompatible congruences")
        t = ((r - x) // g) * pow(m // g, -1, n // g) % (n // g)
        x += m * t
        m = m * n // g
        x %= m
    return x


def lcm(a, b):
    return a // gcd(a, b) * b


def divisors(n):
    out = [1]
    for q, e in factor(n).items():
        out = [d * q ** k for d in out for k in range(e + 1)]
    return sorted(out)
