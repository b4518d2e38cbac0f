//! Exact integer utilities: factorization, Kronecker symbols, valuations,
//! fundamental-discriminant tests.
//!
//! Everything here is deterministic. Factorization uses trial division up to
//! 10^6 followed by Brent's variant of the rho method with a fixed parameter
//! sequence, so repeated runs factor identically.

use crate::error::{Error, Result};

/// Prime factorization as (prime, exponent) pairs, sorted ascending.
pub type Factorization = Vec<(u64, u32)>;

const TRIAL_BOUND: u64 = 1_000_000;

/// Deterministic Miller-Rabin for u64.
///
/// The witness set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} is exact for
/// all n < 3.3 * 10^24, far beyond u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Brent's cycle-finding rho with deterministic constants.
fn rho_factor(n: u64) -> u64 {
    debug_assert!(n > 1 && !is_prime(n) && n % 2 == 1);
    for c in 1..64u64 {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!("rho failed on {n}: all parameter choices degenerate")
}

/// Exact prime factorization of n >= 1. The empty list for n = 1.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut out: Factorization = Vec::new();
    let mut m = n;
    let push = |q: u64, e: u32, out: &mut Factorization| {
        if e > 0 {
            out.push((q, e));
        }
    };
    for q in [2u64, 3, 5] {
        let mut e = 0;
        while m % q == 0 {
            m /= q;
            e += 1;
        }
        push(q, e, &mut out);
    }
    // wheel over 6k +- 1: 7, 11, 13, 17, 19, 23, 25, ...
    let mut q = 7u64;
    let mut step = 4u64;
    while q <= TRIAL_BOUND && q * q <= m {
        let mut e = 0;
        while m % q == 0 {
            m /= q;
            e += 1;
        }
        push(q, e, &mut out);
        q += step;
        step = 6 - step;
    }
    // remaining cofactor: prime, prime power, or composite for rho
    let mut stack = vec![m];
    let mut extra: Vec<u64> = Vec::new();
    while let Some(v) = stack.pop() {
        if v == 1 {
            continue;
        }
        if is_prime(v) {
            extra.push(v);
            continue;
        }
        let d = rho_factor(v);
        stack.push(d);
        stack.push(v / d);
    }
    extra.sort_unstable();
    for v in extra {
        if let Some(last) = out.last_mut() {
            if last.0 == v {
                last.1 += 1;
                continue;
            }
        }
        out.push((v, 1));
    }
    out.sort_unstable();
    out
}

/// Rebuild n from a factorization (test helper for the round-trip law).
pub fn product(fac: &Factorization) -> u64 {
    fac.iter().map(|&(q, e)| q.pow(e)).product::<u64>().max(1)
}

/// p-adic valuation of n (n > 0).
pub fn valuation(mut n: u64, p: u64) -> u32 {
    assert!(n > 0 && p > 1);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Kronecker symbol (d/n) for n >= 0, fully multiplicative in n.
///
/// (d/2) is 0 for even d, +1 for d = +-1 mod 8, -1 for d = +-3 mod 8.
/// (d/0) = 1 only for d = +-1; we never call it that way but keep the
/// convention for completeness.
pub fn kronecker(d: i64, n: u64) -> i32 {
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut acc = 1i32;
    let mut m = n;
    // factor out 2
    let two = {
        let r = d.rem_euclid(8);
        match r {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        }
    };
    while m % 2 == 0 {
        if two == 0 {
            return 0;
        }
        acc *= two;
        m /= 2;
    }
    if m == 1 {
        return acc;
    }
    for (q, e) in factorize(m) {
        let s = legendre(d, q);
        if s == 0 {
            return 0;
        }
        if e % 2 == 1 {
            acc *= s;
        }
    }
    acc
}

/// Legendre symbol (d/q) for odd prime q, via Euler's criterion.
fn legendre(d: i64, q: u64) -> i32 {
    debug_assert!(q % 2 == 1 && is_prime(q));
    let r = d.rem_euclid(q as i64) as u64;
    if r == 0 {
        return 0;
    }
    let t = pow_mod(r, (q - 1) / 2, q);
    if t == 1 {
        1
    } else {
        -1
    }
}

pub fn is_squarefree(n: u64) -> bool {
    assert!(n >= 1);
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// True iff d is a fundamental quadratic discriminant:
/// d = 1 mod 4 squarefree with d != 1, or d = 4m with m = 2, 3 mod 4 squarefree.
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            let r = m.rem_euclid(4);
            (r == 2 || r == 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// Integer square root of n, exact floor.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x > 0 && x.checked_mul(x).is_none_or(|s| s > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|s| s <= n) {
        x += 1;
    }
    x
}

/// Extended gcd: returns (g, x, y) with a x + b y = g >= 0.
pub fn extgcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            return (-a, -1, 0);
        }
        return (a, 1, 0);
    }
    let (g, x, y) = extgcd(b, a % b);
    (g, y, x - (a / b) * y)
}

pub fn validate_odd_prime(p: u32) -> Result<()> {
    if p < 3 || p % 2 == 0 || !is_prime(p as u64) {
        return Err(Error::BadPrime(p));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_golden() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(
            factorize(2310),
            vec![(2, 1), (3, 1), (5, 1), (7, 1), (11, 1)]
        );
        assert_eq!(factorize(990), vec![(2, 1), (3, 2), (5, 1), (11, 1)]);
    }

    #[test]
    fn factorize_skipped_wheel_residues() {
        // primes congruent to 5 mod 6 and squares of their products
        assert_eq!(factorize(11 * 11 * 17 * 17), vec![(11, 2), (17, 2)]);
        assert_eq!(factorize(187), vec![(11, 1), (17, 1)]);
        assert_eq!(factorize(11u64.pow(3) * 23), vec![(11, 3), (23, 1)]);
        for n in 2u64..5000 {
            for (q, _) in factorize(n) {
                assert!(is_prime(q), "composite factor {q} of {n}");
            }
        }
    }

    #[test]
    fn factorize_large_semiprime() {
        // beyond the trial bound, exercises rho
        let n = 1_000_003u64 * 1_000_033;
        assert_eq!(factorize(n), vec![(1_000_003, 1), (1_000_033, 1)]);
    }

    #[test]
    fn kronecker_golden() {
        assert_eq!(kronecker(-4027, 5), -1);
        assert_eq!(kronecker(-59, 7), 1);
        assert_eq!(kronecker(-307, 1), 1);
        assert_eq!(kronecker(12345, 1), 1);
        // (d/2) per d mod 8
        assert_eq!(kronecker(-307, 2), -1); // -307 = 5 mod 8
        assert_eq!(kronecker(17, 2), 1);
        assert_eq!(kronecker(-4, 2), 0);
    }

    #[test]
    fn kronecker_vs_square_roots() {
        // for odd prime q not dividing d: +1 iff x^2 = d mod q solvable
        for d in [-4027i64, -3, 5, -23, 229, -687] {
            for q in [3u64, 5, 7, 11, 13, 101, 997] {
                if d.rem_euclid(q as i64) == 0 {
                    continue;
                }
                let solvable = (0..q).any(|x| (x * x) % q == d.rem_euclid(q as i64) as u64 % q);
                assert_eq!(kronecker(d, q) == 1, solvable, "d={d} q={q}");
            }
        }
    }

    #[test]
    fn fundamental_golden() {
        assert!(is_fundamental(-3));
        assert!(is_fundamental(-4027));
        assert!(is_fundamental(12)); // 12 = 4*3, 3 = 3 mod 4, squarefree
        assert!(!is_fundamental(20)); // 20 = 4*5, 5 = 1 mod 4
        assert!(!is_fundamental(1));
        assert!(!is_fundamental(45));
        assert!(is_fundamental(5));
        assert!(is_fundamental(24));
        assert!(!is_fundamental(-4027 * 4));
    }

    #[test]
    fn isqrt_exact() {
        for n in 0..2000u64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        assert_eq!(isqrt(u64::MAX), 4294967295);
    }

    #[test]
    fn extgcd_bezout() {
        for a in -50i128..50 {
            for b in -50i128..50 {
                let (g, x, y) = extgcd(a, b);
                assert_eq!(a * x + b * y, g);
                assert!(g >= 0);
            }
        }
    }
}
