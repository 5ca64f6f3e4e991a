/// Deterministic trial-division primality test; the primes handled here are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors in increasing order.
pub(crate) fn prime_factors(mut n: u64) -> alloc::vec::Vec<u64> {
    let mut out = alloc::vec::Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
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

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Validates `p` as an odd prime, the only characteristic the toolkit handles.
pub(crate) fn require_odd_prime(p: u64) -> crate::Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(crate::Error::Parameter(alloc::format!(
            "p = {p} must be an odd prime"
        )));
    }
    Ok(())
}

/// Checks the standing assumptions on `(p, D)`: `p` odd, `D ≥ 3`, `gcd(D, p) = 1`.
pub fn validate_pair(p: u64, d: u64) -> crate::Result<()> {
    require_odd_prime(p)?;
    if d < 3 {
        return Err(crate::Error::Parameter(alloc::format!(
            "D = {d} must be at least 3"
        )));
    }
    if gcd(d, p) != 1 {
        return Err(crate::Error::Parameter(alloc::format!(
            "D = {d} is not prime to p = {p}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        let primes: alloc::vec::Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
    }

    #[test]
    fn factors() {
        assert_eq!(prime_factors(15624), [2, 3, 7, 31]);
        assert_eq!(prime_factors(24), [2, 3]);
        assert_eq!(prime_factors(1), alloc::vec::Vec::<u64>::new());
    }
}
