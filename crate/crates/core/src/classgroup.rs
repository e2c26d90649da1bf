//! Class groups of `Q(√−q)` through reduced binary quadratic forms.
//!
//! Forms are composed with Gauss composition (Cohen, Algorithm 5.4.7) and
//! reduced after every step. The group structure is found one primary
//! component at a time, which needs only O(h log h) compositions, and every
//! class then receives coordinates against an elementary-divisor basis.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::arith::{self, is_prime, kronecker_unchecked, sqrt_mod_prime};
use crate::error::{Error, Result};

/// Integral binary quadratic form `ax² + bxy + cy²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    disc: i64,
}

impl QuadraticForm {
    /// Builds `(a, b, c)` and checks it has discriminant `disc`.
    pub fn with_disc(a: i64, b: i64, c: i64, disc: i64) -> Result<Self> {
        let d = b as i128 * b as i128 - 4 * a as i128 * c as i128;
        if d != disc as i128 {
            return Err(Error::Domain(format!(
                "form ({a}, {b}, {c}) has discriminant {d}, expected {disc}"
            )));
        }
        Ok(Self { a, b, c, disc })
    }

    pub fn new(a: i64, b: i64, c: i64) -> Self {
        let disc = b * b - 4 * a * c;
        Self { a, b, c, disc }
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn is_positive_definite(&self) -> bool {
        self.disc < 0 && self.a > 0
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// Principal form of discriminant `disc ≡ 1 (mod 4)`.
    pub fn principal(disc: i64) -> Self {
        debug_assert!(disc.rem_euclid(4) == 1);
        Self { a: 1, b: 1, c: (1 - disc) / 4, disc }
    }

    /// The form `(a, −b, c)`, which represents the inverse class.
    pub fn inverse(&self) -> Self {
        Self { b: -self.b, ..*self }
    }

    pub fn evaluate(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    pub fn key(&self) -> (i64, i64) {
        (self.a, self.b)
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// The unique reduced form properly equivalent to `f`.
pub fn reduce(f: &QuadraticForm) -> Result<QuadraticForm> {
    if !f.is_positive_definite() {
        return Err(Error::Domain(format!("{f} is not positive definite")));
    }
    Ok(reduce_unchecked(*f))
}

fn reduce_unchecked(f: QuadraticForm) -> QuadraticForm {
    let (mut a, mut b, mut c) = (f.a as i128, f.b as i128, f.c as i128);
    loop {
        if !(-a < b && b <= a) {
            // b = 2aq + r with −a < r <= a.
            let two_a = 2 * a;
            let mut r = b.rem_euclid(two_a);
            if r > a {
                r -= two_a;
            }
            let q = (b - r) / two_a;
            c -= (b + r) * q / 2;
            b = r;
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        break;
    }
    QuadraticForm { a: a as i64, b: b as i64, c: c as i64, disc: f.disc }
}

/// Reduced form of the product class.
pub fn compose(f: &QuadraticForm, g: &QuadraticForm) -> Result<QuadraticForm> {
    if f.disc != g.disc {
        return Err(Error::DiscriminantMismatch { left: f.disc, right: g.disc });
    }
    if !f.is_positive_definite() || !g.is_positive_definite() {
        return Err(Error::Domain("composition needs positive definite forms".into()));
    }
    Ok(compose_unchecked(f, g))
}

fn compose_unchecked(f: &QuadraticForm, g: &QuadraticForm) -> QuadraticForm {
    let (f1, f2) = if f.a > g.a { (g, f) } else { (f, g) };
    let (a1, b1) = (f1.a as i128, f1.b as i128);
    let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
    let s = (b1 + b2) / 2;
    let n = b2 - s;

    let (y1, d) = if a2 % a1 == 0 {
        (0, a1)
    } else {
        let e = a2.extended_gcd(&a1);
        (e.x, e.gcd)
    };
    let (x2, y2, d1) = if s % d == 0 {
        (0, -1, d)
    } else {
        let e = s.extended_gcd(&d);
        (e.x, -e.y, e.gcd)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let disc = f.disc as i128;
    let c3 = (b3 * b3 - disc) / (4 * a3);
    debug_assert_eq!(b3 * b3 - 4 * a3 * c3, disc);
    reduce_unchecked(QuadraticForm { a: a3 as i64, b: b3 as i64, c: c3 as i64, disc: f.disc })
}

/// Splitting of a rational prime in `Q(√−q)`, with the classes of the primes above it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeIdealClass {
    /// `p = 𝔭𝔭̄`; classes of `𝔭` and `𝔭̄` (mutually inverse).
    Split(usize, usize),
    Inert,
    /// `p = 𝔭²`; class of `𝔭`.
    Ramified(usize),
}

/// Class group of discriminant `−q` for a prime `q ≡ 3 (mod 4)`.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    q: u64,
    disc: i64,
    forms: Vec<QuadraticForm>,
    index: HashMap<(i64, i64), usize>,
    principal: usize,
    /// Elementary divisors `d₁ | d₂ | …`.
    structure: Vec<u64>,
    /// Form indices of the basis elements, aligned with `structure`.
    generators: Vec<usize>,
    /// Coordinates of every class against the basis.
    coords: Vec<Vec<u64>>,
    /// Mixed-radix coordinate index → class index.
    by_coords: Vec<usize>,
}

/// Reduced forms of discriminant `disc < 0`, `disc ≡ 1 (mod 4)`, sorted by `(a, −b)`.
pub fn reduced_forms(disc: i64) -> Vec<QuadraticForm> {
    let n = -disc;
    let mut forms = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= n {
        // b ≡ disc (mod 2) with b² ≡ disc (mod 4a), |b| <= a.
        let mut b = -a + 1;
        if (b - disc).rem_euclid(2) != 0 {
            b += 1;
        }
        while b <= a {
            let num = b * b - disc;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                let f = QuadraticForm { a, b, c, disc };
                if f.is_reduced() {
                    forms.push(f);
                }
            }
            b += 2;
        }
        a += 1;
    }
    forms.sort_by_key(|f| (f.a, -f.b));
    forms
}

/// Class number by counting reduced forms, without building the group.
pub fn class_number(q: u64) -> Result<u64> {
    validate_level(q)?;
    Ok(reduced_forms(-(q as i64)).len() as u64)
}

fn validate_level(q: u64) -> Result<()> {
    if !is_prime(q) || q % 4 != 3 {
        return Err(Error::Domain(format!("level {q} must be a prime congruent to 3 mod 4")));
    }
    if q > (1 << 40) {
        return Err(Error::Resource(format!("level {q} is too large")));
    }
    Ok(())
}

/// Builds the class group of `Q(√−q)`.
pub fn enumerate_class_group(q: u64) -> Result<ClassGroup> {
    validate_level(q)?;
    let disc = -(q as i64);
    let forms = reduced_forms(disc);
    let index: HashMap<(i64, i64), usize> =
        forms.iter().enumerate().map(|(i, f)| (f.key(), i)).collect();
    let principal = index[&QuadraticForm::principal(disc).key()];
    let mut group = ClassGroup {
        q,
        disc,
        forms,
        index,
        principal,
        structure: Vec::new(),
        generators: Vec::new(),
        coords: Vec::new(),
        by_coords: Vec::new(),
    };
    group.find_structure();
    Ok(group)
}

impl ClassGroup {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn h(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[QuadraticForm] {
        &self.forms
    }

    pub fn form(&self, i: usize) -> &QuadraticForm {
        &self.forms[i]
    }

    pub fn principal(&self) -> usize {
        self.principal
    }

    pub fn structure(&self) -> &[u64] {
        &self.structure
    }

    /// Group exponent (largest elementary divisor).
    pub fn exponent(&self) -> u64 {
        self.structure.last().copied().unwrap_or(1)
    }

    pub fn generators(&self) -> Vec<QuadraticForm> {
        self.generators.iter().map(|&i| self.forms[i]).collect()
    }

    /// Coordinates of class `i` against the elementary-divisor basis.
    pub fn coords(&self, i: usize) -> &[u64] {
        &self.coords[i]
    }

    /// Index of a reduced form of this discriminant.
    pub fn index_of(&self, f: &QuadraticForm) -> Option<usize> {
        if f.disc != self.disc {
            return None;
        }
        self.index.get(&f.key()).copied()
    }

    /// Index of the class of any positive definite form of this discriminant.
    pub fn class_of(&self, f: &QuadraticForm) -> Result<usize> {
        if f.disc != self.disc {
            return Err(Error::DiscriminantMismatch { left: f.disc, right: self.disc });
        }
        let r = reduce(f)?;
        Ok(self.index[&r.key()])
    }

    /// Product of two classes through their coordinates.
    pub fn mul(&self, i: usize, j: usize) -> usize {
        let ci = &self.coords[i];
        let cj = &self.coords[j];
        let mut idx = 0usize;
        for k in (0..self.structure.len()).rev() {
            let d = self.structure[k];
            idx = idx * d as usize + ((ci[k] + cj[k]) % d) as usize;
        }
        self.by_coords[idx]
    }

    pub fn inv(&self, i: usize) -> usize {
        self.index[&reduce_unchecked(self.forms[i].inverse()).key()]
    }

    pub fn pow(&self, i: usize, e: i64) -> usize {
        let c = &self.coords[i];
        let mut idx = 0usize;
        for k in (0..self.structure.len()).rev() {
            let d = self.structure[k] as i64;
            idx = idx * d as usize + (c[k] as i64 * e).rem_euclid(d) as usize;
        }
        self.by_coords[idx]
    }

    /// Order of class `i`.
    pub fn order(&self, i: usize) -> u64 {
        self.coords[i]
            .iter()
            .zip(&self.structure)
            .map(|(&c, &d)| d / c.gcd(&d))
            .fold(1, |acc, o| acc.lcm(&o))
    }

    /// Gauss composition of two classes, by index.
    pub fn compose_classes(&self, i: usize, j: usize) -> usize {
        let f = compose_unchecked(&self.forms[i], &self.forms[j]);
        self.index[&f.key()]
    }

    /// Full `h × h` composition table by Gauss composition.
    pub fn composition_table(&self) -> Result<Vec<Vec<usize>>> {
        let h = self.h();
        if h > 10_000 {
            return Err(Error::Resource(format!("composition table for h = {h} is too large")));
        }
        Ok((0..h).map(|i| (0..h).map(|j| self.compose_classes(i, j)).collect()).collect())
    }

    /// Human-readable structure, e.g. `C3` or `C2 x C4`.
    pub fn structure_string(&self) -> String {
        if self.structure.is_empty() {
            return "C1".into();
        }
        self.structure.iter().map(|d| format!("C{d}")).collect::<Vec<_>>().join(" x ")
    }

    /// How the prime `p` decomposes, with the classes of the primes above it.
    pub fn prime_ideal_class(&self, p: u64) -> Result<PrimeIdealClass> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        Ok(self.prime_ideal_class_unchecked(p))
    }

    pub(crate) fn prime_ideal_class_unchecked(&self, p: u64) -> PrimeIdealClass {
        let q = self.q;
        if p == q {
            // (p, p, (p+1)/4) is the form of the ramified prime above q.
            let f = QuadraticForm::new(q as i64, q as i64, (q as i64 + 1) / 4);
            return PrimeIdealClass::Ramified(self.index[&reduce_unchecked(f).key()]);
        }
        match kronecker_unchecked(self.disc, p) {
            1 => {
                let b = if p == 2 {
                    1
                } else {
                    let r = sqrt_mod_prime(self.disc.rem_euclid(p as i64) as u64, p)
                        .expect("split prime has a square root of the discriminant");
                    // b must be odd so that b² ≡ −q (mod 4).
                    if r % 2 == 1 {
                        r
                    } else {
                        p - r
                    }
                } as i64;
                let pi = p as i64;
                let c = (b * b - self.disc) / (4 * pi);
                let f = reduce_unchecked(QuadraticForm { a: pi, b, c, disc: self.disc });
                let i = self.index[&f.key()];
                PrimeIdealClass::Split(i, self.inv(i))
            }
            -1 => PrimeIdealClass::Inert,
            _ => unreachable!("only q divides the discriminant"),
        }
    }

    fn find_structure(&mut self) {
        let h = self.h() as u64;
        let e = self.principal;
        if h == 1 {
            self.coords = vec![Vec::new()];
            self.by_coords = vec![e];
            return;
        }
        let factors = arith::factorize(h).expect("h >= 1");
        // Per invariant-factor slot: (generator, order) parts from each prime.
        let mut primary: Vec<Vec<(usize, u64)>> = Vec::new();
        for (p, v) in factors.iter() {
            let pv = p.pow(v);
            let cof = h / pv;
            let mut basis = self.primary_basis(p, pv, cof);
            basis.sort_by_key(|x| std::cmp::Reverse(x.1));
            primary.push(basis);
        }
        let slots = primary.iter().map(Vec::len).max().unwrap_or(0);
        let mut invariants: Vec<(usize, u64)> = (0..slots)
            .map(|k| {
                primary.iter().filter_map(|b| b.get(k)).fold((e, 1u64), |(g, o), &(x, ox)| {
                    (self.compose_classes(g, x), o * ox)
                })
            })
            .collect();
        // Ascending so that d₁ | d₂ | ….
        invariants.reverse();
        self.structure = invariants.iter().map(|&(_, d)| d).collect();
        self.generators = invariants.iter().map(|&(g, _)| g).collect();

        // Enumerate Π g_k^{x_k} in mixed radix order (first coordinate fastest).
        let mut coords = vec![Vec::new(); self.h()];
        let mut by_coords = Vec::with_capacity(self.h());
        by_coords.push(e);
        for (&g, &d) in self.generators.iter().zip(&self.structure) {
            let mut current = by_coords.clone();
            for _ in 1..d {
                current = current.iter().map(|&x| self.compose_classes(x, g)).collect();
                by_coords.extend_from_slice(&current);
            }
        }
        assert_eq!(by_coords.len(), self.h(), "basis does not generate the class group");
        let r = self.structure.len();
        for (idx, &cls) in by_coords.iter().enumerate() {
            let mut rest = idx as u64;
            let mut c = Vec::with_capacity(r);
            for &d in &self.structure {
                c.push(rest % d);
                rest /= d;
            }
            assert!(coords[cls].is_empty(), "basis elements are not independent");
            coords[cls] = c;
        }
        self.coords = coords;
        self.by_coords = by_coords;
    }

    fn power_by_composition(&self, x: usize, mut e: u64) -> usize {
        let mut acc = self.principal;
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.compose_classes(acc, base);
            }
            base = self.compose_classes(base, base);
            e >>= 1;
        }
        acc
    }

    /// Basis of the `p`-primary component (order `pv`) as `(generator, order)` pairs.
    fn primary_basis(&self, p: u64, pv: u64, cof: u64) -> Vec<(usize, u64)> {
        let e = self.principal;
        if pv == p {
            let g = (0..self.h())
                .map(|x| self.power_by_composition(x, cof))
                .find(|&y| y != e)
                .expect("a component of order p has a non-identity element");
            return vec![(g, p)];
        }
        let mut component: Vec<usize> = Vec::new();
        let mut seen = HashSet::new();
        for x in 0..self.h() {
            let y = self.power_by_composition(x, cof);
            if seen.insert(y) {
                component.push(y);
                if component.len() as u64 == pv {
                    break;
                }
            }
        }
        // Greedy: an element of maximal order in the quotient by the span so far,
        // corrected so that its order in the group equals its quotient order.
        let mut basis: Vec<(usize, u64)> = Vec::new();
        let mut span: BTreeMap<usize, Vec<u64>> = BTreeMap::from([(e, Vec::new())]);
        while (span.len() as u64) < pv {
            let mut best: Option<(usize, u64)> = None;
            for &x in &component {
                if span.contains_key(&x) {
                    continue;
                }
                let mut m = 1;
                let mut y = x;
                while !span.contains_key(&y) {
                    y = self.compose_classes(y, x);
                    m += 1;
                }
                if best.is_none_or(|(_, bm)| m > bm) {
                    best = Some((x, m));
                }
            }
            let (x, m) = best.expect("span is a proper subgroup");
            let xm = self.power_by_composition(x, m);
            let t = &span[&xm];
            let mut g = x;
            for (k, &tk) in t.iter().enumerate() {
                debug_assert_eq!(tk % m, 0);
                let (b, ob) = basis[k];
                let shift = (ob - (tk / m) % ob) % ob;
                g = self.compose_classes(g, self.power_by_composition(b, shift));
            }
            basis.push((g, m));
            // Extend the span with powers of g.
            let old: Vec<(usize, Vec<u64>)> = span.iter().map(|(&k, v)| (k, v.clone())).collect();
            let mut new_span = BTreeMap::new();
            let mut gk = e;
            for k in 0..m {
                for (elt, c) in &old {
                    let mut c = c.clone();
                    c.push(k);
                    new_span.insert(self.compose_classes(*elt, gk), c);
                }
                gk = self.compose_classes(gk, g);
            }
            span = new_span;
        }
        basis
    }
}

/// Class number from the finite form of the analytic class number formula,
/// `h = −(1/q) Σ_{a<q} a·(a/q)` for prime `q ≡ 3 (mod 4)`, `q > 3`.
pub fn class_number_from_character_sum(q: u64) -> u64 {
    if q == 3 {
        return 1;
    }
    let s: i64 = (1..q).map(|a| a as i64 * arith::jacobi(a, q) as i64).sum();
    (-s / q as i64) as u64
}
