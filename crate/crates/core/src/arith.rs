//! Small-integer number theory shared by the field and coset code.

use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Exponent of the exact power of `prime` dividing `n` (n > 0).
pub fn valuation(mut n: u64, prime: u64) -> u32 {
    let mut v = 0;
    while n % prime == 0 {
        n /= prime;
        v += 1;
    }
    v
}

/// Writes `q` as `p^a` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let ps = prime_divisors(q);
    if ps.len() != 1 {
        return None;
    }
    let p = ps[0];
    Some((p, valuation(q, p)))
}

/// Euler phi of `l^r` for a prime `l`.
pub fn phi_prime_power(l: u64, r: u32) -> u64 {
    if r == 0 {
        1
    } else {
        (l - 1) * l.pow(r - 1)
    }
}

/// Multiplicative order of `x` modulo `m`, assuming `gcd(x, m) = 1`.
pub(crate) fn order_mod(x: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut k = 1;
    let mut cur = x % m;
    while cur != 1 {
        cur = ((cur as u128 * x as u128) % m as u128) as u64;
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_divisors() {
        assert!(is_prime(2) && is_prime(3) && is_prime(13) && !is_prime(9) && !is_prime(1));
        assert_eq!(prime_divisors(360), vec![2, 3, 5]);
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(inv_mod(3, 10), Some(7));
        assert_eq!(inv_mod(4, 10), None);
        assert_eq!(phi_prime_power(3, 2), 6);
    }
}
