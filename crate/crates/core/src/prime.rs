//! Primality testing, prime search and trial-division factoring.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Miller–Rabin bases: the first 13 primes. This set is a proof of primality
/// for every n < 3.3 * 10^24, which covers `u64` with room to spare.
const BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
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

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &BASES {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
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

/// Deterministic for `n < 3.3 * 10^24`; a strong-probable-prime test to the
/// same fixed bases above that.
pub fn is_prime(n: &BigInt) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n <= &BigInt::zero() {
        return false;
    }
    for &q in &BASES {
        if (n % q).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;
    'witness: for &a in &BASES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x).mod_floor(n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `x`.
pub fn next_prime_above(x: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    if x < &two {
        return two;
    }
    let mut c = x + 1u32;
    if c.is_even() {
        if c == two {
            return c;
        }
        c += 1u32;
    }
    while !is_prime(&c) {
        c += 2u32;
    }
    c
}

/// Prime factorisation by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q * q <= n {
        if n % q == 0 {
            let mut e = 0;
            while n % q == 0 {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sieve(limit: usize) -> Vec<bool> {
        let mut is = vec![true; limit + 1];
        is[0] = false;
        is[1] = false;
        let mut i = 2;
        while i * i <= limit {
            if is[i] {
                let mut j = i * i;
                while j <= limit {
                    is[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        is
    }

    #[test]
    fn agrees_with_sieve() {
        let table = sieve(20_000);
        for (n, &p) in table.iter().enumerate() {
            assert_eq!(is_prime_u64(n as u64), p, "{n}");
            assert_eq!(is_prime(&BigInt::from(n)), p, "{n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_are_rejected() {
        // Strong pseudoprimes to several small bases.
        for n in [2047u64, 1_373_653, 25_326_001, 3_215_031_751, 3_825_123_056_546_413_051] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
    }

    #[test]
    fn big_values() {
        let m127 = (BigInt::one() << 127) - 1;
        assert!(is_prime(&m127));
        assert!(!is_prime(&(&m127 + 2)));
        // (2^64 + 13) is prime; (2^64 + 1) = 274177 * 67280421310721.
        let two64 = BigInt::one() << 64;
        assert!(is_prime(&(&two64 + 13)));
        assert!(!is_prime(&(&two64 + 1)));
        assert_eq!(next_prime_above(&two64), &two64 + 13);
    }

    #[test]
    fn next_prime_examples() {
        let n = |x: i64| next_prime_above(&BigInt::from(x));
        assert_eq!(n(128), BigInt::from(131));
        assert_eq!(n(44444), BigInt::from(44449));
        assert_eq!(n(-5), BigInt::from(2));
        assert_eq!(n(2), BigInt::from(3));
        assert_eq!(n(13), BigInt::from(17));
    }

    #[test]
    fn factors() {
        assert_eq!(factorize(8), vec![(2, 3)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(97), vec![(97, 1)]);
        assert_eq!(factorize(44448), vec![(2, 5), (3, 1), (463, 1)]);
        for n in [44449u64 * 44449 - 1, 600_851_475_143, 2 * 3 * 5 * 7 * 11 * 13 * 10007] {
            let f = factorize(n);
            assert!(f.windows(2).all(|w| w[0].0 < w[1].0));
            assert!(f.iter().all(|&(q, _)| is_prime_u64(q)));
            assert_eq!(f.iter().map(|&(q, e)| q.pow(e)).product::<u64>(), n);
        }
    }
}
