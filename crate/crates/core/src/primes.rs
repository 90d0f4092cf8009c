//! Primality and prime search for the lifting construction.

use crate::linalg::powmod;

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest prime `<= n`, if any.
pub fn prev_prime(n: u64) -> Option<u64> {
    (2..=n).rev().find(|&k| is_prime(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sieve(limit: usize) -> Vec<bool> {
        let mut s = vec![true; limit + 1];
        s[0] = false;
        if limit >= 1 {
            s[1] = false;
        }
        let mut i = 2;
        while i * i <= limit {
            if s[i] {
                let mut j = i * i;
                while j <= limit {
                    s[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        s
    }

    #[test]
    fn agrees_with_sieve() {
        let s = sieve(20_000);
        for (n, &p) in s.iter().enumerate() {
            assert_eq!(is_prime(n as u64), p, "{n}");
        }
    }

    #[test]
    fn large_values() {
        assert!(is_prime(1_000_000_007));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn previous_prime() {
        assert_eq!(prev_prime(309), Some(307));
        assert_eq!(prev_prime(1), None);
        assert_eq!(prev_prime(2), Some(2));
    }
}
