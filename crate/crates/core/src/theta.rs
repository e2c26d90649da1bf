//! Theta series `θ_ψ = Σ_𝔫 ψ(𝔫) e(N(𝔫) z)` of class group characters.
//!
//! Coefficients are built multiplicatively from the splitting of each prime:
//! a split prime `p = 𝔭𝔭̄` with `ψ(𝔭) = ζ^j` contributes
//! `c_{p^e} = Σ_{i=0}^{e} ζ^{j(2i−e)}`, an inert prime contributes `1` at even
//! exponents and `0` at odd ones, and the ramified prime above `q` contributes
//! `ψ(𝔭_q)^e`. [`direct_coefficient_oracle`] recomputes `c_n` by listing every
//! ideal of norm `n` and composing forms, with no recursion involved.
//!
//! [`DihedralForm`] keeps only per-prime data and streams coefficients in
//! fixed-size blocks, so scans to `N = 10^7` stay within bounded memory.
//! [`ThetaSeries`] is the materialized coefficient vector used for exact
//! identity checks and export.

use std::sync::Arc;

use num_integer::Integer;

use crate::arith::{self, is_prime, kronecker_unchecked, mul_mod, pow_mod, PrimeTable};
use crate::character::{conjugate_pairs, ClassCharacter};
use crate::classgroup::{compose, enumerate_class_group, ClassGroup, PrimeIdealClass};
use crate::cyclotomic::{slice_is_zero, CyclotomicSum};
use crate::error::{Error, Result};

/// Largest index accepted by [`direct_coefficient_oracle`].
pub const ORACLE_LIMIT: u64 = 100_000;

/// Default block length for streamed coefficients.
pub const BLOCK_LEN: usize = 1 << 16;

/// How every prime up to a bound decomposes in `Q(√−q)`.
#[derive(Debug)]
pub struct SplittingTable {
    group: Arc<ClassGroup>,
    primes: PrimeTable,
    kinds: Vec<PrimeIdealClass>,
}

impl SplittingTable {
    pub fn new(group: Arc<ClassGroup>, limit: u64) -> Result<Self> {
        let primes = arith::primes_up_to(limit.max(2))?;
        let kinds = primes.primes().iter().map(|&p| group.prime_ideal_class_unchecked(p)).collect();
        Ok(Self { group, primes, kinds })
    }

    pub fn group(&self) -> &Arc<ClassGroup> {
        &self.group
    }

    pub fn limit(&self) -> u64 {
        self.primes.limit()
    }

    pub fn primes(&self) -> &PrimeTable {
        &self.primes
    }

    pub fn kinds(&self) -> &[PrimeIdealClass] {
        &self.kinds
    }

    pub fn kind(&self, p: u64) -> Option<PrimeIdealClass> {
        self.primes.primes().binary_search(&p).ok().map(|i| self.kinds[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, PrimeIdealClass)> + '_ {
        self.primes.primes().iter().copied().zip(self.kinds.iter().copied())
    }
}

/// Per-prime data of one prime in the form's coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LocalType {
    /// `ψ(𝔭) = ζ^j`.
    Split(u32),
    Inert,
    /// `ψ(𝔭_q) = ζ^j`.
    Ramified(u32),
}

/// A non-real class group character together with the splitting data it is evaluated on.
#[derive(Debug, Clone)]
pub struct DihedralForm {
    psi: ClassCharacter,
    splitting: Arc<SplittingTable>,
    local: Vec<LocalType>,
}

impl DihedralForm {
    pub fn new(psi: ClassCharacter, splitting: Arc<SplittingTable>) -> Result<Self> {
        if psi.is_real() {
            return Err(Error::EisensteinCase);
        }
        if psi.group().disc() != splitting.group().disc() {
            return Err(Error::DiscriminantMismatch {
                left: psi.group().disc(),
                right: splitting.group().disc(),
            });
        }
        let local = splitting
            .kinds()
            .iter()
            .map(|kind| match *kind {
                PrimeIdealClass::Split(c, _) => LocalType::Split(psi.exponent_at(c) as u32),
                PrimeIdealClass::Inert => LocalType::Inert,
                PrimeIdealClass::Ramified(c) => LocalType::Ramified(psi.exponent_at(c) as u32),
            })
            .collect();
        Ok(Self { psi, splitting, local })
    }

    /// Builds the group and splitting table for `q` and takes character number `psi_index`.
    pub fn for_level(q: u64, psi_index: usize, bound: u64) -> Result<Self> {
        let group = Arc::new(enumerate_class_group(q)?);
        let chars = crate::character::all_characters(&group);
        let psi = chars.get(psi_index).cloned().ok_or_else(|| {
            Error::Domain(format!("character index {psi_index} out of range (h = {})", group.h()))
        })?;
        let splitting = Arc::new(SplittingTable::new(group, bound)?);
        Self::new(psi, splitting)
    }

    pub fn q(&self) -> u64 {
        self.splitting.group().q()
    }

    pub fn psi(&self) -> &ClassCharacter {
        &self.psi
    }

    pub fn group(&self) -> &Arc<ClassGroup> {
        self.splitting.group()
    }

    pub fn splitting(&self) -> &Arc<SplittingTable> {
        &self.splitting
    }

    /// Coefficients lie in `Z[ζ_d]` with `d = ord ψ`.
    pub fn modulus(&self) -> u32 {
        self.psi.order() as u32
    }

    /// Largest index whose coefficient can be computed.
    pub fn bound(&self) -> u64 {
        self.splitting.limit()
    }

    /// Nebentypus `χ(n) = (−q/n)`.
    pub fn nebentypus(&self, n: u64) -> i32 {
        kronecker_unchecked(self.group().disc(), n)
    }

    fn local_at(&self, p: u64) -> Result<LocalType> {
        let idx = self.splitting.primes().primes().binary_search(&p).map_err(|_| {
            if p > self.bound() {
                Error::Resource(format!("prime {p} exceeds the splitting table bound {}", self.bound()))
            } else {
                Error::Domain(format!("{p} is not prime"))
            }
        })?;
        Ok(self.local[idx])
    }

    /// `c_{p^e}` for a prime `p <= bound`.
    pub fn prime_power_coefficient(&self, p: u64, e: u32) -> Result<CyclotomicSum> {
        let local = self.local_at(p)?;
        let mut out = CyclotomicSum::zero(self.modulus());
        for (shift, c) in local_terms(local, e) {
            out.add_root(shift, c);
        }
        Ok(out)
    }

    pub fn prime_coefficient(&self, p: u64) -> Result<CyclotomicSum> {
        self.prime_power_coefficient(p, 1)
    }

    /// `c_n` through the factorization of `n`.
    pub fn coefficient(&self, n: u64) -> Result<CyclotomicSum> {
        if n == 0 || n > self.bound() {
            return Err(Error::Domain(format!("index {n} outside 1..={}", self.bound())));
        }
        let f = self.splitting.primes().factorize(n)?;
        let mut acc = CyclotomicSum::one(self.modulus());
        for (p, e) in f.iter() {
            acc = &acc * &self.prime_power_coefficient(p, e)?;
        }
        Ok(acc)
    }

    /// Streams `c_1, …, c_{n_max}` in blocks of `block_len`.
    pub fn blocks(&self, n_max: u64, block_len: usize) -> Result<CoefficientBlocks<'_>> {
        if n_max > self.bound() {
            return Err(Error::Resource(format!(
                "requested {n_max} coefficients but primes are only tabulated to {}",
                self.bound()
            )));
        }
        Ok(CoefficientBlocks { form: self, next: 1, end: n_max + 1, block_len: block_len.max(1) })
    }

    /// Materializes `c_1..=c_{n_max}`.
    pub fn series(&self, n_max: u64) -> Result<ThetaSeries> {
        let mut coeffs = Vec::with_capacity(n_max as usize);
        for block in self.blocks(n_max, BLOCK_LEN)? {
            coeffs.extend((block.start()..block.end()).map(|n| block.get(n)));
        }
        Ok(ThetaSeries { q: self.q(), psi: self.psi.clone(), coeffs })
    }

    /// Values `c_p` for good primes `p <= n_max`, computed from the splitting data alone.
    pub fn good_prime_coefficients(
        &self,
        n_max: u64,
    ) -> impl Iterator<Item = (u64, CyclotomicSum)> + '_ {
        let q = self.q();
        let d = self.modulus();
        self.splitting
            .primes()
            .primes()
            .iter()
            .zip(&self.local)
            .take_while(move |(&p, _)| p <= n_max)
            .filter(move |(&p, _)| p != q)
            .map(move |(&p, &local)| {
                let mut c = CyclotomicSum::zero(d);
                for (shift, k) in local_terms(local, 1) {
                    c.add_root(shift, k);
                }
                (p, c)
            })
    }
}

/// Sparse terms `(exponent, multiplicity)` of `c_{p^e}` in `Z[ζ_d]`.
fn local_terms(local: LocalType, e: u32) -> Vec<(i64, i64)> {
    match local {
        LocalType::Split(j) => (0..=e as i64).map(|i| (j as i64 * (2 * i - e as i64), 1)).collect(),
        LocalType::Inert if e.is_multiple_of(2) => vec![(0, 1)],
        LocalType::Inert => Vec::new(),
        LocalType::Ramified(j) => vec![(j as i64 * e as i64, 1)],
    }
}

/// A run of consecutive coefficients `c_start..c_end`, stored flat in `Z[Z/d]`.
#[derive(Debug, Clone)]
pub struct CoefficientBlock {
    start: u64,
    modulus: usize,
    data: Vec<i64>,
}

impl CoefficientBlock {
    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn end(&self) -> u64 {
        self.start + (self.data.len() / self.modulus) as u64
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.modulus
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn raw(&self, n: u64) -> &[i64] {
        let i = (n - self.start) as usize * self.modulus;
        &self.data[i..i + self.modulus]
    }

    pub fn get(&self, n: u64) -> CyclotomicSum {
        CyclotomicSum::from_coeffs(self.raw(n).to_vec())
    }

    /// Exact test `c_n = 0`.
    pub fn is_zero(&self, n: u64) -> bool {
        slice_is_zero(self.raw(n))
    }
}

/// Iterator over [`CoefficientBlock`]s; each block is a segmented factorization sieve.
pub struct CoefficientBlocks<'a> {
    form: &'a DihedralForm,
    next: u64,
    end: u64,
    block_len: usize,
}

impl Iterator for CoefficientBlocks<'_> {
    type Item = CoefficientBlock;

    fn next(&mut self) -> Option<CoefficientBlock> {
        if self.next >= self.end {
            return None;
        }
        let lo = self.next;
        let hi = (lo + self.block_len as u64).min(self.end);
        self.next = hi;
        Some(compute_block(self.form, lo, hi))
    }
}

fn compute_block(form: &DihedralForm, lo: u64, hi: u64) -> CoefficientBlock {
    let d = form.modulus() as usize;
    let len = (hi - lo) as usize;
    let mut rem: Vec<u64> = (lo..hi).collect();
    let mut data = vec![0i64; len * d];
    for i in 0..len {
        data[i * d] = 1;
    }
    let mut scratch = vec![0i64; d];
    let primes = form.splitting.primes().primes();
    let mut apply = |slot: usize, local: LocalType, e: u32, data: &mut [i64]| {
        let cell = &mut data[slot * d..(slot + 1) * d];
        match local {
            LocalType::Inert if e.is_multiple_of(2) => {}
            LocalType::Inert => cell.fill(0),
            _ => {
                scratch.fill(0);
                for (shift, c) in local_terms(local, e) {
                    let s = shift.rem_euclid(d as i64) as usize;
                    for (k, &v) in cell.iter().enumerate() {
                        if v != 0 {
                            let t = if k + s >= d { k + s - d } else { k + s };
                            scratch[t] += c * v;
                        }
                    }
                }
                cell.copy_from_slice(&scratch);
            }
        }
    };
    for (idx, &p) in primes.iter().enumerate() {
        if p * p >= hi {
            break;
        }
        let local = form.local[idx];
        let mut m = lo.div_ceil(p) * p;
        while m < hi {
            let slot = (m - lo) as usize;
            let mut e = 0;
            while rem[slot].is_multiple_of(p) {
                rem[slot] /= p;
                e += 1;
            }
            apply(slot, local, e, &mut data);
            m += p;
        }
    }
    for (slot, &r) in rem.iter().enumerate() {
        if r > 1 {
            let idx = primes.binary_search(&r).expect("cofactor is a tabulated prime");
            apply(slot, form.local[idx], 1, &mut data);
        }
    }
    CoefficientBlock { start: lo, modulus: d, data }
}

/// The materialized coefficients `c_1..=c_N` of `θ_ψ`.
#[derive(Debug, Clone)]
pub struct ThetaSeries {
    q: u64,
    psi: ClassCharacter,
    coeffs: Vec<CyclotomicSum>,
}

impl ThetaSeries {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn psi(&self) -> &ClassCharacter {
        &self.psi
    }

    pub fn len(&self) -> u64 {
        self.coeffs.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn modulus(&self) -> u32 {
        self.psi.order() as u32
    }

    /// `c_n` for `1 <= n <= N`.
    pub fn coeff(&self, n: u64) -> &CyclotomicSum {
        &self.coeffs[(n - 1) as usize]
    }

    pub fn coeffs(&self) -> &[CyclotomicSum] {
        &self.coeffs
    }

    /// Nebentypus `χ_q(n) = (−q/n)`.
    pub fn nebentypus(&self, n: u64) -> i32 {
        kronecker_unchecked(-(self.q as i64), n)
    }

    /// Overwrites one coefficient (fault injection for verification tests).
    pub fn set_coeff(&mut self, n: u64, value: CyclotomicSum) {
        self.coeffs[(n - 1) as usize] = value;
    }
}

/// Builds `θ_ψ` up to `n_max` for the level-`q` character `psi`.
pub fn theta_coefficients(q: u64, psi: &ClassCharacter, n_max: u64) -> Result<ThetaSeries> {
    if psi.group().q() != q {
        return Err(Error::Domain(format!(
            "character belongs to level {}, not {q}",
            psi.group().q()
        )));
    }
    if psi.is_real() {
        return Err(Error::EisensteinCase);
    }
    if n_max == 0 {
        return Err(Error::EmptyDomain("coefficient bound must be at least 1".into()));
    }
    let splitting = Arc::new(SplittingTable::new(psi.group().clone(), n_max)?);
    DihedralForm::new(psi.clone(), splitting)?.series(n_max)
}

/// Classes (with multiplicity) of all ideals of norm `n`, by explicit composition of forms.
pub fn ideal_classes_of_norm(group: &ClassGroup, n: u64) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::Domain("norm must be positive".into()));
    }
    if n > ORACLE_LIMIT {
        return Err(Error::Resource(format!("direct enumeration limited to n <= {ORACLE_LIMIT}")));
    }
    let f = arith::factorize(n)?;
    let mut classes = vec![group.form(group.principal()).to_owned()];
    for (p, e) in f.iter() {
        // Ideals of norm p^e: 𝔭^i 𝔭̄^{e−i} (split), (p)^{e/2} (inert), 𝔭_q^e (ramified).
        let choices: Vec<_> = match group.prime_ideal_class(p)? {
            PrimeIdealClass::Split(c, cbar) => (0..=e)
                .map(|i| {
                    let mut acc = *group.form(group.principal());
                    for _ in 0..i {
                        acc = compose(&acc, group.form(c))?;
                    }
                    for _ in i..e {
                        acc = compose(&acc, group.form(cbar))?;
                    }
                    Ok(acc)
                })
                .collect::<Result<_>>()?,
            PrimeIdealClass::Inert if e % 2 == 0 => vec![*group.form(group.principal())],
            PrimeIdealClass::Inert => Vec::new(),
            PrimeIdealClass::Ramified(c) => {
                let mut acc = *group.form(group.principal());
                for _ in 0..e {
                    acc = compose(&acc, group.form(c))?;
                }
                vec![acc]
            }
        };
        let mut next = Vec::with_capacity(classes.len() * choices.len());
        for x in &classes {
            for y in &choices {
                next.push(compose(x, y)?);
            }
        }
        classes = next;
    }
    classes
        .iter()
        .map(|f| group.index_of(f).ok_or_else(|| Error::Domain(format!("{f} is not reduced"))))
        .collect()
}

/// `c_n = Σ_{N(𝔫)=n} ψ(𝔫)` by listing the ideals of norm `n`.
pub fn direct_coefficient_oracle(psi: &ClassCharacter, n: u64) -> Result<CyclotomicSum> {
    let classes = ideal_classes_of_norm(psi.group(), n)?;
    let mut out = CyclotomicSum::zero(psi.order() as u32);
    for c in classes {
        out.add_root(psi.exponent_at(c) as i64, 1);
    }
    Ok(out)
}

/// A violated identity found by [`verify_hecke`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeckeFailure {
    /// `c_1 ≠ 1`.
    Normalization,
    /// `c_{p^k} ≠ c_p c_{p^{k−1}} − χ(p) c_{p^{k−2}}` at a good prime.
    Recursion { p: u64, k: u32 },
    /// `c_{q^k} ≠ c_q c_{q^{k−1}}` at the bad prime.
    BadPrime { p: u64, k: u32 },
    /// `c_{mn} ≠ c_m c_n` with `gcd(m, n) = 1`.
    Multiplicativity { m: u64, n: u64 },
}

impl std::fmt::Display for HeckeFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Normalization => write!(f, "c_1 != 1"),
            Self::Recursion { p, k } => write!(f, "good-prime recursion fails at (p, k) = ({p}, {k})"),
            Self::BadPrime { p, k } => write!(f, "bad-prime recursion fails at (p, k) = ({p}, {k})"),
            Self::Multiplicativity { m, n } => write!(f, "multiplicativity fails at (m, n) = ({m}, {n})"),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct HeckeReport {
    pub recursion_checks: u64,
    pub multiplicativity_checks: u64,
    pub failures: Vec<HeckeFailure>,
}

impl HeckeReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exact check of normalization, multiplicativity and the Hecke recursions.
pub fn verify_hecke(theta: &ThetaSeries) -> HeckeReport {
    let n_max = theta.len();
    let mut report = HeckeReport::default();
    if n_max == 0 {
        return report;
    }
    let one = CyclotomicSum::one(theta.modulus());
    if *theta.coeff(1) != one {
        report.failures.push(HeckeFailure::Normalization);
    }
    let primes = arith::primes_up_to(n_max.max(2)).expect("bound is positive");
    for &p in primes.primes() {
        let cp = theta.coeff(p);
        let chi = theta.nebentypus(p) as i64;
        let mut prev = one.clone();
        let mut cur = cp.clone();
        let mut k = 1u32;
        while p.checked_pow(k + 1).is_some_and(|pk| pk <= n_max) {
            let next = theta.coeff(p.pow(k + 1));
            let predicted = if p == theta.q() { cp * &cur } else { &(cp * &cur) - &prev.scale(chi) };
            report.recursion_checks += 1;
            if *next != predicted {
                report.failures.push(if p == theta.q() {
                    HeckeFailure::BadPrime { p, k: k + 1 }
                } else {
                    HeckeFailure::Recursion { p, k: k + 1 }
                });
            }
            prev = cur;
            cur = next.clone();
            k += 1;
        }
    }
    for m in 2..=n_max {
        if m * (m + 1) > n_max {
            break;
        }
        for n in (m + 1)..=(n_max / m) {
            if m.gcd(&n) != 1 {
                continue;
            }
            report.multiplicativity_checks += 1;
            if *theta.coeff(m * n) != theta.coeff(m) * theta.coeff(n) {
                report.failures.push(HeckeFailure::Multiplicativity { m, n });
            }
        }
    }
    report
}

/// Absolute tolerance for the embedded Ramanujan bounds.
pub const RAMANUJAN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Default)]
pub struct RamanujanReport {
    /// Largest `|c_p|` over good primes, with the prime attaining it.
    pub max_prime_abs: f64,
    pub witness_prime: u64,
    /// Good primes with `|c_p| > 2`.
    pub prime_violations: Vec<u64>,
    /// Indices with `|c_n| > τ(n)`.
    pub divisor_violations: Vec<u64>,
}

impl RamanujanReport {
    pub fn passed(&self) -> bool {
        self.prime_violations.is_empty() && self.divisor_violations.is_empty()
    }
}

/// `|c_p| <= 2` at good primes and `|c_n| <= τ(n)` for every `n <= N`.
pub fn ramanujan_check(theta: &ThetaSeries) -> RamanujanReport {
    let n_max = theta.len();
    let mut report = RamanujanReport::default();
    let tau = arith::divisor_counts(n_max as usize);
    for n in 1..=n_max {
        let abs = theta.coeff(n).to_complex().norm();
        if abs > tau[n as usize] as f64 + RAMANUJAN_TOL {
            report.divisor_violations.push(n);
        }
        if n != theta.q() && is_prime(n) {
            if abs > report.max_prime_abs {
                report.max_prime_abs = abs;
                report.witness_prime = n;
            }
            if abs > 2.0 + RAMANUJAN_TOL {
                report.prime_violations.push(n);
            }
        }
    }
    report
}

/// Streaming variant of the prime half of [`ramanujan_check`].
pub fn prime_ramanujan_scan(form: &DihedralForm, n_max: u64) -> RamanujanReport {
    let mut report = RamanujanReport::default();
    for (p, c) in form.good_prime_coefficients(n_max) {
        let abs = c.to_complex().norm();
        if abs > report.max_prime_abs {
            report.max_prime_abs = abs;
            report.witness_prime = p;
        }
        if abs > 2.0 + RAMANUJAN_TOL {
            report.prime_violations.push(p);
        }
    }
    report
}

/// One theta series per conjugate pair `{ψ, ψ̄}`, with an exact independence certificate.
#[derive(Debug, Clone)]
pub struct DihedralBasis {
    pub q: u64,
    pub h: usize,
    pub series: Vec<ThetaSeries>,
    /// Number of leading coefficients used for the rank computation.
    pub window: u64,
    pub rank: usize,
}

impl DihedralBasis {
    pub fn dimension(&self) -> usize {
        self.series.len()
    }

    pub fn independent(&self) -> bool {
        self.rank == self.series.len()
    }
}

/// The dihedral forms of level `q`: `(h − 1)/2` theta series.
pub fn dihedral_basis(q: u64, n_max: u64) -> Result<DihedralBasis> {
    let group = Arc::new(enumerate_class_group(q)?);
    if n_max == 0 {
        return Err(Error::EmptyDomain("coefficient bound must be at least 1".into()));
    }
    let splitting = Arc::new(SplittingTable::new(group.clone(), n_max)?);
    let series = conjugate_pairs(&group)
        .into_iter()
        .map(|(psi, _)| DihedralForm::new(psi, splitting.clone())?.series(n_max))
        .collect::<Result<Vec<_>>>()?;
    let window = n_max.min(10 * group.h() as u64);
    let rank = exact_rank(&series, window, group.exponent());
    Ok(DihedralBasis { q, h: group.h(), series, window, rank })
}

/// Rank over `Q(ζ_m)` of the truncated coefficient vectors, certified by
/// reduction modulo a prime `ℓ ≡ 1 (mod m)`. The rank of a reduction never
/// exceeds the true rank, so a full rank modulo `ℓ` is a proof of independence.
fn exact_rank(series: &[ThetaSeries], window: u64, m: u64) -> usize {
    if series.is_empty() {
        return 0;
    }
    let mut best = 0;
    for (ell, omega) in split_primes(m).take(4) {
        let rows: Vec<Vec<u64>> = series
            .iter()
            .map(|s| {
                (1..=window)
                    .map(|n| {
                        let c = s.coeff(n);
                        let step = m / c.modulus() as u64;
                        c.coeffs().iter().enumerate().fold(0u64, |acc, (k, &v)| {
                            let w = pow_mod(omega, k as u64 * step, ell);
                            let v = v.rem_euclid(ell as i64) as u64;
                            (acc + mul_mod(v, w, ell)) % ell
                        })
                    })
                    .collect()
            })
            .collect();
        best = best.max(rank_mod(rows, ell));
        if best == series.len() {
            break;
        }
    }
    best
}

/// Primes `ℓ ≡ 1 (mod m)` above 2^30 together with an element of exact order `m`.
fn split_primes(m: u64) -> impl Iterator<Item = (u64, u64)> {
    let start = (1u64 << 30) / m + 1;
    let m_factors: Vec<u64> = arith::factorize(m).map(|f| f.factors().keys().copied().collect()).unwrap_or_default();
    (start..).map(move |k| k * m + 1).filter(|&l| is_prime(l)).map(move |ell| {
        let omega = (2..ell)
            .map(|g| pow_mod(g, (ell - 1) / m, ell))
            .find(|&w| m_factors.iter().all(|&r| pow_mod(w, m / r, ell) != 1))
            .expect("F_ℓ^× is cyclic of order divisible by m");
        (ell, omega)
    })
}

fn rank_mod(mut rows: Vec<Vec<u64>>, ell: u64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = pow_mod(rows[rank][col], ell - 2, ell);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let factor = mul_mod(row[col], inv, ell);
                for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = (*x + ell - mul_mod(factor, y, ell)) % ell;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}
