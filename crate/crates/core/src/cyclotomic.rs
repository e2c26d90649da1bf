//! Exact arithmetic on sums of roots of unity.
//!
//! A [`CyclotomicSum`] of modulus `d` is an element of the group ring `Z[Z/d]`,
//! stored as one integer coefficient per exponent `k mod d` and read as
//! `Σ c_k e(k/d)` with `e(x) = exp(2πix)`. Ring operations act on the group
//! ring directly. Equality and zero tests reduce modulo the `d`-th cyclotomic
//! polynomial, so they decide equality of the complex numbers exactly.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::rc::Rc;

use num_complex::Complex64;
use num_integer::Integer;

/// `e(num/den)` with `0 <= num < den` and the fraction in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    num: u64,
    den: u64,
}

impl RootOfUnity {
    pub fn new(num: i64, den: u64) -> Self {
        assert!(den > 0, "root of unity needs a positive denominator");
        let k = num.rem_euclid(den as i64) as u64;
        let g = k.gcd(&den);
        Self { num: k / g, den: den / g }
    }

    pub fn one() -> Self {
        Self { num: 0, den: 1 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// Multiplicative order; equal to the reduced denominator.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn inv(&self) -> Self {
        Self::new(-(self.num as i64), self.den)
    }

    pub fn pow(&self, k: i64) -> Self {
        let e = (self.num as i128 * k as i128).rem_euclid(self.den as i128) as i64;
        Self::new(e, self.den)
    }

    /// Exponent of this root inside `Z/m`, for `den | m`.
    pub fn exponent_mod(&self, m: u64) -> u64 {
        assert!(m.is_multiple_of(self.den), "e({}/{}) is not an {m}-th root of unity", self.num, self.den);
        self.num * (m / self.den)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.num as f64 / self.den as f64)
    }

    pub fn to_sum(&self) -> CyclotomicSum {
        CyclotomicSum::root(self.num as i64, self.den as u32)
    }
}

impl Mul for RootOfUnity {
    type Output = RootOfUnity;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: RootOfUnity) -> RootOfUnity {
        let m = self.den.lcm(&rhs.den);
        let k = self.exponent_mod(m) + rhs.exponent_mod(m);
        RootOfUnity::new(k as i64, m)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({}/{})", self.num, self.den)
    }
}

thread_local! {
    static CYCLOTOMIC_POLYS: RefCell<HashMap<u32, Rc<[i64]>>> = RefCell::new(HashMap::new());
}

/// Coefficients of the `d`-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(d: u32) -> Rc<[i64]> {
    assert!(d > 0);
    if let Some(p) = CYCLOTOMIC_POLYS.with(|c| c.borrow().get(&d).cloned()) {
        return p;
    }
    // x^d − 1 divided by Φ_e for every proper divisor e of d.
    let mut poly = vec![0i64; d as usize + 1];
    poly[0] = -1;
    poly[d as usize] = 1;
    for e in (1..d).filter(|e| d.is_multiple_of(*e)) {
        poly = exact_div_monic(&poly, &cyclotomic_polynomial(e));
    }
    let poly: Rc<[i64]> = poly.into();
    CYCLOTOMIC_POLYS.with(|c| c.borrow_mut().insert(d, poly.clone()));
    poly
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

/// Euler's totient.
pub fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Reduces a group-ring coefficient slice modulo Φ_d; the result has φ(d) entries.
pub fn reduce_slice(coeffs: &[i64]) -> Vec<i64> {
    let d = coeffs.len() as u32;
    let phi = cyclotomic_polynomial(d);
    let deg = phi.len() - 1;
    let mut r = coeffs.to_vec();
    for i in (deg..r.len()).rev() {
        let c = r[i];
        if c != 0 {
            let base = i - deg;
            for (j, &pj) in phi.iter().enumerate() {
                r[base + j] -= c * pj;
            }
        }
    }
    r.truncate(deg);
    r
}

/// Exact zero test of `Σ coeffs[k] e(k/d)` with `d = coeffs.len()`.
pub fn slice_is_zero(coeffs: &[i64]) -> bool {
    if coeffs.iter().all(|&c| c == 0) {
        return true;
    }
    reduce_slice(coeffs).iter().all(|&c| c == 0)
}

/// An exact sum of `d`-th roots of unity.
#[derive(Clone)]
pub struct CyclotomicSum {
    coeffs: Vec<i64>,
}

impl CyclotomicSum {
    pub fn zero(modulus: u32) -> Self {
        assert!(modulus > 0);
        Self { coeffs: vec![0; modulus as usize] }
    }

    pub fn one(modulus: u32) -> Self {
        Self::integer(1, modulus)
    }

    pub fn integer(n: i64, modulus: u32) -> Self {
        let mut s = Self::zero(modulus);
        s.coeffs[0] = n;
        s
    }

    /// `e(k/d)`.
    pub fn root(k: i64, modulus: u32) -> Self {
        let mut s = Self::zero(modulus);
        s.coeffs[k.rem_euclid(modulus as i64) as usize] = 1;
        s
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn modulus(&self) -> u32 {
        self.coeffs.len() as u32
    }

    /// Raw group-ring coefficients, one per exponent mod `d`.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> i64 {
        self.coeffs[k.rem_euclid(self.coeffs.len() as i64) as usize]
    }

    pub fn add_root(&mut self, k: i64, times: i64) {
        let d = self.coeffs.len() as i64;
        self.coeffs[k.rem_euclid(d) as usize] += times;
    }

    /// Image under `Z[Z/d] -> Z[Z/m]`, `k ↦ k·m/d`, for `d | m`.
    pub fn lift(&self, m: u32) -> Self {
        let d = self.modulus();
        assert!(m.is_multiple_of(d), "cannot lift modulus {d} to {m}");
        if m == d {
            return self.clone();
        }
        let step = (m / d) as usize;
        let mut out = vec![0; m as usize];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[k * step] = c;
        }
        Self { coeffs: out }
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let m = self.modulus().lcm(&other.modulus());
        (self.lift(m), other.lift(m))
    }

    /// Complex conjugate: `k ↦ −k`.
    pub fn conj(&self) -> Self {
        let d = self.coeffs.len();
        let mut out = vec![0; d];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[(d - k) % d] = c;
        }
        Self { coeffs: out }
    }

    /// Galois action `e(k/d) ↦ e(ak/d)` for `a` coprime to `d`.
    pub fn galois(&self, a: u64) -> Self {
        let d = self.coeffs.len() as u64;
        let mut out = vec![0; d as usize];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[((k as u64 * a) % d) as usize] += c;
        }
        Self { coeffs: out }
    }

    /// Canonical coordinates: remainder modulo Φ_d (φ(d) entries).
    pub fn reduced(&self) -> Vec<i64> {
        reduce_slice(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        slice_is_zero(&self.coeffs)
    }

    pub fn scale(&self, factor: i64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// Multiplies by `e(k/d)`.
    pub fn rotate(&self, k: i64) -> Self {
        let d = self.coeffs.len();
        let shift = k.rem_euclid(d as i64) as usize;
        let mut out = vec![0; d];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[(i + shift) % d] = c;
        }
        Self { coeffs: out }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.modulus());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        let d = self.coeffs.len() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| Complex64::from_polar(c as f64, TAU * k as f64 / d))
            .sum()
    }

    /// Complex values under every embedding `e(1/d) ↦ e(a/d)`, `gcd(a, d) = 1`.
    pub fn embeddings(&self) -> Vec<Complex64> {
        let d = self.coeffs.len() as u64;
        (1..=d.max(1))
            .filter(|a| a.gcd(&d) == 1)
            .map(|a| self.galois(a).to_complex())
            .collect()
    }

    /// Semicolon-separated `exponent:coefficient` pairs of the reduced form.
    pub fn exact_repr(&self) -> String {
        self.reduced()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, c)| format!("{k}:{c}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Inverse of [`CyclotomicSum::exact_repr`].
    pub fn parse_repr(repr: &str, modulus: u32) -> Option<Self> {
        let mut s = Self::zero(modulus);
        for part in repr.split(';').filter(|p| !p.is_empty()) {
            let (k, c) = part.split_once(':')?;
            s.add_root(k.trim().parse().ok()?, c.trim().parse().ok()?);
        }
        Some(s)
    }
}

impl PartialEq for CyclotomicSum {
    fn eq(&self, other: &Self) -> bool {
        if self.modulus() == other.modulus() {
            if self.coeffs == other.coeffs {
                return true;
            }
            return (self - other).is_zero();
        }
        let (a, b) = self.common(other);
        (&a - &b).is_zero()
    }
}

impl Eq for CyclotomicSum {}

impl fmt::Debug for CyclotomicSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicSum(d={}, [{}])", self.modulus(), self.exact_repr())
    }
}

impl fmt::Display for CyclotomicSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .reduced()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match (k, c) {
                (0, c) => format!("{c}"),
                (k, 1) => format!("ζ{}^{k}", self.modulus()),
                (k, c) => format!("{c}·ζ{}^{k}", self.modulus()),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl<'a> Add<&'a CyclotomicSum> for &'a CyclotomicSum {
    type Output = CyclotomicSum;

    fn add(self, rhs: &CyclotomicSum) -> CyclotomicSum {
        if self.modulus() != rhs.modulus() {
            let (a, b) = self.common(rhs);
            return &a + &b;
        }
        CyclotomicSum {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a CyclotomicSum> for &'a CyclotomicSum {
    type Output = CyclotomicSum;

    fn sub(self, rhs: &CyclotomicSum) -> CyclotomicSum {
        if self.modulus() != rhs.modulus() {
            let (a, b) = self.common(rhs);
            return &a - &b;
        }
        CyclotomicSum {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl AddAssign<&CyclotomicSum> for CyclotomicSum {
    fn add_assign(&mut self, rhs: &CyclotomicSum) {
        if self.modulus() == rhs.modulus() {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a += b;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl Neg for &CyclotomicSum {
    type Output = CyclotomicSum;

    fn neg(self) -> CyclotomicSum {
        self.scale(-1)
    }
}

impl<'a> Mul<&'a CyclotomicSum> for &'a CyclotomicSum {
    type Output = CyclotomicSum;

    /// Cyclic convolution, skipping zero coefficients on both sides.
    fn mul(self, rhs: &CyclotomicSum) -> CyclotomicSum {
        if self.modulus() != rhs.modulus() {
            let (a, b) = self.common(rhs);
            return &a * &b;
        }
        let d = self.coeffs.len();
        let mut out = vec![0i64; d];
        let rhs_support: Vec<(usize, i64)> =
            rhs.coeffs.iter().copied().enumerate().filter(|&(_, c)| c != 0).collect();
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for &(j, b) in &rhs_support {
                let k = if i + j >= d { i + j - d } else { i + j };
                out[k] += a * b;
            }
        }
        CyclotomicSum { coeffs: out }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(&*cyclotomic_polynomial(1), &[-1, 1]);
        assert_eq!(&*cyclotomic_polynomial(2), &[1, 1]);
        assert_eq!(&*cyclotomic_polynomial(3), &[1, 1, 1]);
        assert_eq!(&*cyclotomic_polynomial(4), &[1, 0, 1]);
        assert_eq!(&*cyclotomic_polynomial(6), &[1, -1, 1]);
        assert_eq!(&*cyclotomic_polynomial(12), &[1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of absolute value 2.
        let p = cyclotomic_polynomial(105);
        assert_eq!(p.len() as u64 - 1, totient(105));
        assert!(p.contains(&-2));
    }

    #[test]
    fn zero_tests() {
        // 1 + ζ3 + ζ3² = 0
        assert!(CyclotomicSum::from_coeffs(vec![1, 1, 1]).is_zero());
        assert!(!CyclotomicSum::from_coeffs(vec![1, 1, 0]).is_zero());
        // ζ3 + ζ3² = −1
        assert_eq!(CyclotomicSum::from_coeffs(vec![0, 1, 1]), CyclotomicSum::integer(-1, 1));
        // i² = −1 across moduli 4 and 2.
        let i = CyclotomicSum::root(1, 4);
        assert_eq!(&i * &i, CyclotomicSum::root(1, 2));
    }

    #[test]
    fn embedding_agrees_with_exact_value() {
        let x = CyclotomicSum::from_coeffs(vec![2, -1, 0, 3, 0, 1, 0]);
        let y = CyclotomicSum::from_coeffs(vec![0, 1, 1, 0, -2, 0, 5]);
        let prod = (&x * &y).to_complex();
        let expect = x.to_complex() * y.to_complex();
        assert!((prod - expect).norm() < 1e-12);
        let reduced = CyclotomicSum::from_coeffs({
            let mut v = x.reduced();
            v.resize(7, 0);
            v
        });
        assert!((reduced.to_complex() - x.to_complex()).norm() < 1e-12);
    }

    #[test]
    fn roots_of_unity() {
        let a = RootOfUnity::new(2, 6);
        assert_eq!((a.num(), a.den()), (1, 3));
        assert_eq!(a * a.inv(), RootOfUnity::one());
        assert_eq!(RootOfUnity::new(1, 4) * RootOfUnity::new(1, 4), RootOfUnity::new(1, 2));
        assert_eq!(RootOfUnity::new(1, 5).pow(5), RootOfUnity::one());
        assert_eq!(RootOfUnity::new(3, 10).pow(-1), RootOfUnity::new(7, 10));
    }

    #[test]
    fn equality_and_repr() {
        // ζ6 + ζ6^5 = 1
        let x = CyclotomicSum::from_coeffs(vec![0, 1, 0, 0, 0, 1]);
        assert_eq!(x, CyclotomicSum::one(1));
        let y = CyclotomicSum::from_coeffs(vec![3, 0, -2, 1, 0]);
        assert_eq!(CyclotomicSum::parse_repr(&y.exact_repr(), 5).unwrap(), y);
        assert_eq!(CyclotomicSum::zero(7).exact_repr(), "");
    }

    #[test]
    fn conjugation_and_galois() {
        let x = CyclotomicSum::from_coeffs(vec![1, 2, 0, -1, 0]);
        assert!((x.conj().to_complex() - x.to_complex().conj()).norm() < 1e-12);
        assert_eq!(x.galois(4), x.conj());
        assert_eq!(x.embeddings().len(), 4);
    }
}
