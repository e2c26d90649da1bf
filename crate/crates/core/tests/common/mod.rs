//! Oracles shared by the integration tests. None of them goes through the
//! library's prime splitting or coefficient recursions.

#![allow(dead_code)]

use std::f64::consts::PI;

use dihedral::{ClassCharacter, CyclotomicSum};

/// Legendre symbol `(a/p)` by Euler's criterion, for an odd prime `p`.
pub fn legendre(a: u64, p: u64) -> i64 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let (mut base, mut e, mut acc) = (a as u128, (p - 1) / 2, 1u128);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

pub fn is_prime_naive(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// `χ(n) = (−q/n)` for `q ≡ 3 (mod 4)` prime, tabulated over one period.
pub fn kronecker_table(q: u64) -> Vec<i64> {
    // (−q/n) is periodic mod q; for odd n it equals (n/q), and (−q/2) = (2/q) makes
    // the even residues agree with (n/q) as well.
    (0..q).map(|n| legendre(n, q)).collect()
}

/// `h(−q) = (w√q / 2π)·L(1, χ)` with `L` truncated after `terms` terms, rounded.
pub fn dirichlet_class_number(q: u64, terms: u64) -> u64 {
    let chi = kronecker_table(q);
    let mut l = 0.0f64;
    for n in 1..=terms {
        let c = chi[(n % q) as usize];
        if c != 0 {
            l += c as f64 / n as f64;
        }
    }
    let w = if q == 3 { 6.0 } else { 2.0 };
    (w * (q as f64).sqrt() / (2.0 * PI) * l).round() as u64
}

/// Theta coefficients from `θ_ψ = (1/w) Σ_C ψ(C) Σ_{x,y} e(f_C(x, y) z)`,
/// counting lattice points of each reduced form.
pub fn representation_theta(psi: &ClassCharacter, n_max: u64) -> Vec<CyclotomicSum> {
    let group = psi.group();
    let w: i64 = if group.q() == 3 { 6 } else { 2 };
    let d = psi.order() as u32;
    let mut counts = vec![vec![0i64; d as usize]; n_max as usize + 1];
    for (idx, f) in group.forms().iter().enumerate() {
        let j = psi.exponent_at(idx) as usize;
        let (a, b, c) = (f.a as i128, f.b as i128, f.c as i128);
        let n = n_max as i128;
        // 4a·f(x, y) = (2ax + by)² + |D|y², so |y| <= sqrt(4an/|D|).
        let disc = (b * b - 4 * a * c).abs();
        let ymax = ((4 * a * n) as f64 / disc as f64).sqrt() as i128 + 1;
        for y in -ymax..=ymax {
            let xr = ((4 * a * n) as f64).sqrt() as i128 / (2 * a) + 2;
            let x0 = -(b * y) / (2 * a);
            for x in (x0 - xr)..=(x0 + xr) {
                let v = a * x * x + b * x * y + c * y * y;
                if v >= 1 && v <= n {
                    counts[v as usize][j] += 1;
                }
            }
        }
    }
    counts
        .into_iter()
        .map(|row| CyclotomicSum::from_coeffs(row.into_iter().map(|v| v / w).collect()))
        .collect()
}
