//! Small-integer number theory: primality, factorization, prime ranges.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    // operands stay below 2^64 whenever m < 2^64
    if m <= u64::MAX as u128 {
        (a * b) % m
    } else {
        let mut result = 0u128;
        let mut a = a % m;
        let mut b = b;
        while b > 0 {
            if b & 1 == 1 {
                result = (result + a) % m;
            }
            a = (a << 1) % m;
            b >>= 1;
        }
        result
    }
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
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

/// Deterministic Miller–Rabin for all `u64`, probabilistic-free for the
/// witnesses used here up to 3.3e24.
pub fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    for &p in &SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

pub fn is_prime(n: u64) -> bool {
    is_prime_u128(n as u128)
}

/// Smallest prime `>= n`.
pub fn next_prime(n: u64) -> u64 {
    let mut k = n.max(2);
    while !is_prime(k) {
        k += 1;
    }
    k
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

fn pollard_rho(n: u128) -> u128 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u128;
    loop {
        let f = |x: u128| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u128, 2u128, 1u128);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as `(prime, exponent)` pairs in increasing order.
pub fn factor_u128(n: u128) -> Vec<(u128, u32)> {
    let mut out: Vec<(u128, u32)> = Vec::new();
    if n < 2 {
        return out;
    }
    let mut stack = vec![n];
    let mut primes = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        let mut m = m;
        for p in [2u128, 3, 5, 7, 11, 13] {
            while m % p == 0 {
                primes.push(p);
                m /= p;
            }
        }
        if m == 1 {
            continue;
        }
        if is_prime_u128(m) {
            primes.push(m);
        } else {
            let d = pollard_rho(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    primes.sort_unstable();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    factor_u128(n as u128)
        .into_iter()
        .map(|(p, e)| (p as u64, e))
        .collect()
}

/// Factor a positive big integer into prime powers. Cofactors that do not
/// fit in 128 bits are returned unsplit with exponent 1.
pub fn factor_bigint(n: &BigInt) -> Vec<(BigInt, u32)> {
    let n = n.abs();
    if n <= BigInt::one() {
        return Vec::new();
    }
    if let Some(small) = n.to_u128() {
        return factor_u128(small)
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e))
            .collect();
    }
    let mut rest = n;
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000u32);
    while p <= limit && rest > BigInt::one() {
        let mut e = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
        if let Some(small) = rest.to_u128() {
            for (q, e) in factor_u128(small) {
                out.push((BigInt::from(q), e));
            }
            rest = BigInt::one();
        }
    }
    if rest > BigInt::one() {
        out.push((rest, 1));
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(4_294_967_291));
        assert!(!is_prime(4_294_967_297));
        assert_eq!(next_prime(4096), 4099);
    }

    #[test]
    fn factorization() {
        assert_eq!(factor_u64(168), vec![(2, 3), (3, 1), (7, 1)]);
        assert_eq!(factor_u64(1), vec![]);
        assert_eq!(factor_u64(4_294_967_297), vec![(641, 1), (6_700_417, 1)]);
        let big = BigInt::from(181u32).pow(3) * BigInt::from(43u32);
        assert_eq!(
            factor_bigint(&big),
            vec![(BigInt::from(43), 1), (BigInt::from(181), 3)]
        );
    }
}
