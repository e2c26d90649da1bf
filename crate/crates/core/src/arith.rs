//! Prime enumeration, factorization and quadratic symbols.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Odd numbers covered by one sieve segment.
const SEGMENT_ODDS: usize = 1 << 16;

/// Ascending list of every prime up to `limit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// π(x) for `x <= limit`.
    pub fn count_up_to(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p <= x)
    }

    pub fn iter_up_to(&self, x: u64) -> impl Iterator<Item = u64> + '_ {
        self.primes[..self.count_up_to(x)].iter().copied()
    }

    /// Membership for `n <= limit`.
    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }

    /// Trial division against the table. Requires `n <= limit²`.
    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 {
            return Err(Error::Domain("cannot factorize 0".into()));
        }
        if (n as u128) > (self.limit as u128) * (self.limit as u128) {
            return Err(Error::Resource(format!(
                "{n} exceeds the square of the prime table limit {}",
                self.limit
            )));
        }
        let mut factors = BTreeMap::new();
        let mut rest = n;
        for &p in &self.primes {
            if p * p > rest {
                break;
            }
            if rest.is_multiple_of(p) {
                let mut e = 0;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    e += 1;
                }
                factors.insert(p, e);
            }
        }
        if rest > 1 {
            *factors.entry(rest).or_insert(0) += 1;
        }
        Ok(Factorization { n, factors })
    }
}

/// All primes `<= limit`, by a segmented sieve over odd numbers.
pub fn primes_up_to(limit: u64) -> Result<PrimeTable> {
    if limit == 0 {
        return Err(Error::EmptyDomain("prime table limit must be at least 1".into()));
    }
    let mut primes = Vec::new();
    if limit >= 2 {
        primes.push(2);
    }
    if limit < 3 {
        return Ok(PrimeTable { limit, primes });
    }

    let root = isqrt(limit);
    let base = simple_sieve(root);
    // Odd index i stands for 2i + 1; index 0 (the number 1) is skipped.
    let odd_count = ((limit - 1) / 2 + 1) as usize;
    let mut segment = vec![true; SEGMENT_ODDS];
    let mut low = 1usize;
    while low < odd_count {
        let high = (low + SEGMENT_ODDS).min(odd_count);
        let seg = &mut segment[..high - low];
        seg.fill(true);
        let low_value = 2 * low as u64 + 1;
        let high_value = 2 * (high as u64 - 1) + 1;
        for &p in base.iter().skip(1) {
            if p * p > high_value {
                break;
            }
            // First odd multiple of p that is >= max(p², low_value).
            let mut start = (low_value.div_ceil(p) * p).max(p * p);
            if start % 2 == 0 {
                start += p;
            }
            let mut idx = ((start - 1) / 2) as usize - low;
            while idx < seg.len() {
                seg[idx] = false;
                idx += p as usize;
            }
        }
        primes.extend(
            seg.iter()
                .enumerate()
                .filter(|(_, &is)| is)
                .map(|(i, _)| 2 * (low + i) as u64 + 1),
        );
        low = high;
    }
    Ok(PrimeTable { limit, primes })
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
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

/// Deterministic Miller–Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
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

/// Prime factorization `n = Π p^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    factors: BTreeMap<u64, u32>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &BTreeMap<u64, u32> {
        &self.factors
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.factors.iter().map(|(&p, &e)| (p, e))
    }

    pub fn product(&self) -> u64 {
        self.iter().map(|(p, e)| p.pow(e)).product()
    }

    /// Number of divisors τ(n).
    pub fn divisor_count(&self) -> u64 {
        self.factors.values().map(|&e| e as u64 + 1).product()
    }
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Domain("cannot factorize 0".into()));
    }
    let table = primes_up_to(isqrt(n) + 1)?;
    table.factorize(n)
}

/// Kronecker symbol `(d/n)` for a discriminant `d ≡ 0, 1 (mod 4)` and `n >= 1`.
pub fn kronecker(d: i64, n: u64) -> Result<i32> {
    if d.rem_euclid(4) > 1 {
        return Err(Error::Domain(format!("{d} is not a discriminant (must be 0 or 1 mod 4)")));
    }
    if n == 0 {
        return Err(Error::Domain("Kronecker symbol needs n >= 1".into()));
    }
    Ok(kronecker_unchecked(d, n))
}

pub(crate) fn kronecker_unchecked(d: i64, n: u64) -> i32 {
    let mut n = n;
    let mut sign = 1i32;
    let v = n.trailing_zeros();
    if v > 0 {
        if d % 2 == 0 {
            return 0;
        }
        // (d/2) = 1 for d ≡ ±1 (mod 8), −1 for d ≡ ±3.
        if v % 2 == 1 && matches!(d.rem_euclid(8), 3 | 5) {
            sign = -sign;
        }
        n >>= v;
    }
    // n odd: Jacobi symbol (d mod n / n).
    let a = d.rem_euclid(n as i64) as u64;
    sign * jacobi(a, n)
}

/// Jacobi symbol `(a/n)` for odd `n`.
pub fn jacobi(mut a: u64, mut n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    a %= n;
    let mut result = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Square root of `a` modulo an odd prime `p` by Tonelli–Shanks, or `None` for a non-residue.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if p == 2 || a == 0 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    // Smallest quadratic non-residue.
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Divisor counts τ(1..=n) by a divisor sieve; index 0 is unused.
pub fn divisor_counts(n: usize) -> Vec<u32> {
    let mut tau = vec![0u32; n + 1];
    for d in 1..=n {
        let mut m = d;
        while m <= n {
            tau[m] += 1;
            m += d;
        }
    }
    tau
}
