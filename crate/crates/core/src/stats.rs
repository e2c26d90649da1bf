//! Distribution of the prime coefficients `c_p` of dihedral forms.
//!
//! For a non-real `ψ` of order `n` the value `c_p` is `0` at inert primes and
//! `ψ(𝔭) + ψ̄(𝔭)` at split primes, so by Chebotarev the limit law is a finite
//! atomic measure with half its mass at `0`. Empirical measures are normalized
//! by the number of good primes, prime moments by `π(N)`.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::TAU;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::arith::is_prime;
use crate::character::{conjugate_pairs, ClassCharacter};
use crate::classgroup::{class_number, enumerate_class_group, ClassGroup, PrimeIdealClass};
use crate::cyclotomic::{reduce_slice, CyclotomicSum};
use crate::error::{Error, Result};
use crate::theta::{DihedralForm, SplittingTable};

/// Values closer than this are merged into one atom.
const MERGE_TOL: f64 = 1e-12;

/// First Wirsing checkpoint used in the slope fit.
pub const WIRSING_FIT_FROM: u64 = 1 << 10;

/// `Σ w_i δ_{v_i}` with sorted, distinct values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomicMeasure {
    atoms: Vec<(f64, f64)>,
}

impl AtomicMeasure {
    /// Sorts and merges `(value, weight)` pairs; zero weights are dropped.
    pub fn from_atoms(atoms: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut raw: Vec<(f64, f64)> = atoms.into_iter().filter(|&(_, w)| w != 0.0).collect();
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (v, w) in raw {
            match merged.last_mut() {
                Some(last) if (last.0 - v).abs() <= MERGE_TOL => last.1 += w,
                _ => merged.push((v, w)),
            }
        }
        Self { atoms: merged }
    }

    /// `Σ_i weight_i · μ_i`.
    pub fn mixture(parts: &[(f64, &AtomicMeasure)]) -> Self {
        Self::from_atoms(
            parts.iter().flat_map(|&(w, m)| m.atoms.iter().map(move |&(v, a)| (v, w * a))),
        )
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// `Σ w_i v_i^k`.
    pub fn moment(&self, k: u32) -> f64 {
        self.atoms.iter().map(|&(v, w)| w * v.powi(k as i32)).sum()
    }

    /// Total weight of atoms within `tol` of `value`.
    pub fn weight_near(&self, value: f64, tol: f64) -> f64 {
        self.atoms.iter().filter(|a| (a.0 - value).abs() <= tol).map(|a| a.1).sum()
    }

    /// `½ Σ |μ(v) − ν(v)|` over the union of supports.
    pub fn total_variation(&self, other: &AtomicMeasure) -> f64 {
        let (a, b) = (&self.atoms, &other.atoms);
        let (mut i, mut j, mut acc) = (0, 0, 0.0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0 - MERGE_TOL) {
                acc += a[i].1.abs();
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 - MERGE_TOL {
                acc += b[j].1.abs();
                j += 1;
            } else {
                acc += (a[i].1 - b[j].1).abs();
                i += 1;
                j += 1;
            }
        }
        acc / 2.0
    }
}

/// Atom of an exact measure.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactAtom {
    pub value: CyclotomicSum,
    pub weight: Ratio<i64>,
}

/// Atomic measure with exact cyclotomic values and rational weights.
#[derive(Debug, Clone)]
pub struct ExactMeasure {
    atoms: Vec<ExactAtom>,
}

impl ExactMeasure {
    pub fn atoms(&self) -> &[ExactAtom] {
        &self.atoms
    }

    pub fn total_weight(&self) -> Ratio<i64> {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// `Σ w_i v_i^k` when it is rational, which is the case for every `k`.
    pub fn moment(&self, k: u32) -> Option<Ratio<i64>> {
        let den = self.atoms.iter().fold(1i64, |acc, a| acc.lcm(a.weight.denom()));
        let mut num = CyclotomicSum::zero(1);
        for a in &self.atoms {
            let scale = (a.weight * den).to_integer();
            num = &num + &a.value.pow(k).scale(scale);
        }
        let reduced = reduce_slice(num.coeffs());
        if reduced.iter().skip(1).any(|&c| c != 0) {
            return None;
        }
        Some(Ratio::new(reduced.first().copied().unwrap_or(0), den))
    }

    pub fn to_float(&self) -> AtomicMeasure {
        AtomicMeasure::from_atoms(
            self.atoms
                .iter()
                .map(|a| (a.value.to_complex().re, *a.weight.numer() as f64 / *a.weight.denom() as f64)),
        )
    }
}

/// Number of classes `c` with `ψ(c) = e(j/ord ψ)`, indexed by `j`.
fn value_counts(psi: &ClassCharacter) -> Vec<u64> {
    let mut counts = vec![0u64; psi.order() as usize];
    for c in 0..psi.group().h() {
        counts[psi.exponent_at(c) as usize] += 1;
    }
    counts
}

/// Limit law of `c_p`: `½δ₀` from inert primes plus `(1/2h) Σ_c δ_{ψ(c)+ψ̄(c)}`.
pub fn theoretical_mu_exact(psi: &ClassCharacter) -> Result<ExactMeasure> {
    if psi.is_real() {
        return Err(Error::EisensteinCase);
    }
    let n = psi.order();
    let h = psi.group().h() as i64;
    let counts = value_counts(psi);
    let mut zero = Ratio::new(1, 2);
    let mut atoms = Vec::new();
    for j in 0..=n / 2 {
        let mut count = counts[j as usize];
        if 2 * j != n && j != 0 {
            count += counts[(n - j) as usize];
        }
        if count == 0 {
            continue;
        }
        let value = &CyclotomicSum::root(j as i64, n as u32) + &CyclotomicSum::root(-(j as i64), n as u32);
        let weight = Ratio::new(count as i64, 2 * h);
        if value.is_zero() {
            zero += weight;
        } else {
            atoms.push(ExactAtom { value, weight });
        }
    }
    atoms.push(ExactAtom { value: CyclotomicSum::zero(1), weight: zero });
    Ok(ExactMeasure { atoms })
}

pub fn theoretical_mu(psi: &ClassCharacter) -> Result<AtomicMeasure> {
    Ok(theoretical_mu_exact(psi)?.to_float())
}

/// `β = ½ + |{c : ψ(c) = ±i}| / 2h`.
pub fn theoretical_beta(psi: &ClassCharacter) -> Ratio<i64> {
    let n = psi.order();
    let h = psi.group().h() as i64;
    let hits = if n.is_multiple_of(4) {
        let counts = value_counts(psi);
        counts[(n / 4) as usize] + counts[(3 * n / 4) as usize]
    } else {
        0
    };
    Ratio::new(1, 2) + Ratio::new(hits as i64, 2 * h)
}

/// Histogram of `c_p` over good primes `p <= N`.
#[derive(Debug, Clone)]
pub struct EmpiricalMeasure {
    q: u64,
    psi_index: usize,
    n_max: u64,
    prime_count: u64,
    values: Vec<(CyclotomicSum, u64)>,
}

impl EmpiricalMeasure {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn psi_index(&self) -> usize {
        self.psi_index
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    /// `π(N)`.
    pub fn prime_count(&self) -> u64 {
        self.prime_count
    }

    /// Number of good primes counted.
    pub fn total(&self) -> u64 {
        self.values.iter().map(|v| v.1).sum()
    }

    /// Observed values with their counts, in order of first appearance.
    pub fn values(&self) -> &[(CyclotomicSum, u64)] {
        &self.values
    }

    /// Weights `count / total`.
    pub fn measure(&self) -> AtomicMeasure {
        let total = self.total().max(1) as f64;
        AtomicMeasure::from_atoms(self.values.iter().map(|(v, c)| (v.to_complex().re, *c as f64 / total)))
    }

    /// `(1/π(N)) Σ_{p <= N good} c_p^k`.
    pub fn prime_moment(&self, k: u32) -> f64 {
        let sum: f64 =
            self.values.iter().map(|(v, c)| *c as f64 * v.to_complex().re.powi(k as i32)).sum();
        sum / self.prime_count.max(1) as f64
    }
}

fn check_bound(form: &DihedralForm, n_max: u64) -> Result<()> {
    if n_max > form.bound() {
        return Err(Error::Resource(format!(
            "bound {n_max} exceeds the tabulated primes ({})",
            form.bound()
        )));
    }
    Ok(())
}

pub fn empirical_mu(form: &DihedralForm, n_max: u64) -> Result<EmpiricalMeasure> {
    check_bound(form, n_max)?;
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut values: Vec<(CyclotomicSum, u64)> = Vec::new();
    for (_, c) in form.good_prime_coefficients(n_max) {
        let key = c.reduced();
        match index.get(&key) {
            Some(&i) => values[i].1 += 1,
            None => {
                index.insert(key, values.len());
                values.push((c, 1));
            }
        }
    }
    Ok(EmpiricalMeasure {
        q: form.q(),
        psi_index: form.psi().index(),
        n_max,
        prime_count: form.splitting().primes().count_up_to(n_max) as u64,
        values,
    })
}

/// Theoretical against empirical density of `{p : c_p = 0}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub q: u64,
    pub psi_index: usize,
    pub beta_theory: f64,
    pub beta_hat: f64,
    #[serde(rename = "N")]
    pub n: u64,
    pub gap: f64,
    pub zeros: u64,
    pub good_primes: u64,
}

pub fn zero_density(form: &DihedralForm, n_max: u64) -> Result<DensityReport> {
    check_bound(form, n_max)?;
    let (mut zeros, mut total) = (0u64, 0u64);
    for (_, c) in form.good_prime_coefficients(n_max) {
        total += 1;
        if c.is_zero() {
            zeros += 1;
        }
    }
    let beta = theoretical_beta(form.psi());
    let beta_theory = *beta.numer() as f64 / *beta.denom() as f64;
    let beta_hat = zeros as f64 / total.max(1) as f64;
    Ok(DensityReport {
        q: form.q(),
        psi_index: form.psi().index(),
        beta_theory,
        beta_hat,
        n: n_max,
        gap: (beta_hat - beta_theory).abs(),
        zeros,
        good_primes: total,
    })
}

/// Counts `|{n <= x : c_n ≠ 0}|` at `x = 2^j` and the fitted exponent.
#[derive(Debug, Clone, Serialize)]
pub struct WirsingTable {
    pub checkpoints: Vec<(u64, u64)>,
    pub fit_from: u64,
    pub beta_hat: f64,
}

/// Least-squares slope of `y` against `x`.
pub fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 2 {
        return f64::NAN;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// `β̂ = −slope` of `log(count/x)` against `log log x` over checkpoints `x >= fit_from`.
pub fn fit_wirsing_beta(checkpoints: &[(u64, u64)], fit_from: u64) -> f64 {
    let points: Vec<(f64, f64)> = checkpoints
        .iter()
        .filter(|&&(x, c)| x >= fit_from.max(3) && c > 0)
        .map(|&(x, c)| ((x as f64).ln().ln(), (c as f64 / x as f64).ln()))
        .collect();
    -least_squares_slope(&points)
}

/// Wirsing table from a stream of nonvanishing flags for `n = 1, 2, …`.
pub fn wirsing_from_flags(flags: impl IntoIterator<Item = bool>, fit_from: u64) -> WirsingTable {
    let mut checkpoints = Vec::new();
    let (mut count, mut next) = (0u64, 1u64);
    for (i, nonzero) in flags.into_iter().enumerate() {
        let n = i as u64 + 1;
        count += nonzero as u64;
        if n == next {
            checkpoints.push((n, count));
            next *= 2;
        }
    }
    let beta_hat = fit_wirsing_beta(&checkpoints, fit_from);
    WirsingTable { checkpoints, fit_from, beta_hat }
}

pub fn wirsing_count(form: &DihedralForm, n_max: u64) -> Result<WirsingTable> {
    let blocks = form.blocks(n_max, crate::theta::BLOCK_LEN)?;
    let flags = blocks.flat_map(|b| (b.start()..b.end()).map(move |n| !b.is_zero(n)).collect::<Vec<_>>());
    Ok(wirsing_from_flags(flags, WIRSING_FIT_FROM))
}

/// Primes `q ≡ 3 (mod 4)` up to `q_max`.
pub fn levels_up_to(q_max: u64) -> Vec<u64> {
    (3..=q_max).step_by(4).filter(|&q| is_prime(q)).collect()
}

/// `2cos(2πj/n)` keyed by the reduced fraction `j/n` folded into `[0, ½]`.
fn angle_key(j: u64, n: u64) -> (u64, u64) {
    let j = j % n;
    let j = j.min(n - j);
    let g = j.gcd(&n);
    (j / g, n / g)
}

fn angle_value((a, b): (u64, u64)) -> f64 {
    2.0 * (TAU * a as f64 / b as f64).cos()
}

fn measure_from_angles(acc: &BTreeMap<(u64, u64), f64>) -> AtomicMeasure {
    AtomicMeasure::from_atoms(acc.iter().map(|(&k, &w)| (angle_value(k), w)))
}

/// `μ_q = (2/(h−1)) Σ μ_ψ` over one character from each conjugate pair; `None` when `h = 1`.
pub fn level_measure(group: &Arc<ClassGroup>) -> Option<AtomicMeasure> {
    let pairs = conjugate_pairs(group);
    if pairs.is_empty() {
        return None;
    }
    let h = group.h() as f64;
    let per_form = 1.0 / pairs.len() as f64;
    let mut acc: BTreeMap<(u64, u64), f64> = BTreeMap::new();
    for (psi, _) in &pairs {
        let n = psi.order();
        *acc.entry((1, 4)).or_default() += 0.5 * per_form;
        for c in 0..group.h() {
            *acc.entry(angle_key(psi.exponent_at(c), n)).or_default() += per_form / (2.0 * h);
        }
    }
    Some(measure_from_angles(&acc))
}

/// Empirical counterpart of [`level_measure`] over good primes `p <= n_max`.
pub fn level_measure_empirical(group: &Arc<ClassGroup>, n_max: u64) -> Result<Option<AtomicMeasure>> {
    let pairs = conjugate_pairs(group);
    if pairs.is_empty() {
        return Ok(None);
    }
    let table = SplittingTable::new(group.clone(), n_max)?;
    let mut split_classes: Vec<usize> = Vec::new();
    let mut inert = 0u64;
    for (p, kind) in table.iter() {
        match kind {
            PrimeIdealClass::Split(c, _) if p <= n_max => split_classes.push(c),
            PrimeIdealClass::Inert if p <= n_max => inert += 1,
            _ => {}
        }
    }
    let total = (split_classes.len() as u64 + inert) as f64;
    let per_form = 1.0 / pairs.len() as f64;
    let mut acc: BTreeMap<(u64, u64), f64> = BTreeMap::new();
    for (psi, _) in &pairs {
        let n = psi.order();
        let by_class: Vec<(u64, u64)> = (0..group.h()).map(|c| angle_key(psi.exponent_at(c), n)).collect();
        let mut counts: BTreeMap<(u64, u64), u64> = BTreeMap::new();
        *counts.entry((1, 4)).or_default() += inert;
        for &c in &split_classes {
            *counts.entry(by_class[c]).or_default() += 1;
        }
        for (k, c) in counts {
            *acc.entry(k).or_default() += per_form * c as f64 / total;
        }
    }
    Ok(Some(measure_from_angles(&acc)))
}

/// Uniform average of per-level measures, in the order given.
pub fn average_levels(levels: &[AtomicMeasure]) -> AtomicMeasure {
    let w = 1.0 / levels.len().max(1) as f64;
    let parts: Vec<(f64, &AtomicMeasure)> = levels.iter().map(|m| (w, m)).collect();
    AtomicMeasure::mixture(&parts)
}

/// Average of [`level_measure`] over all levels `q <= q_max` with `h > 1`.
pub fn averaged_measure(q_max: u64) -> Result<AtomicMeasure> {
    if q_max < 23 {
        return Err(Error::Domain(format!("Q_max = {q_max} is below 23, the first level with h > 1")));
    }
    let mut levels = Vec::new();
    for q in levels_up_to(q_max) {
        let group = Arc::new(enumerate_class_group(q)?);
        if let Some(m) = level_measure(&group) {
            levels.push(m);
        }
    }
    Ok(average_levels(&levels))
}

/// Even moments `½·binom(2m, m)` of the conjectured limit law, for `m >= 1`.
pub fn limit_law_moment(k: u32) -> f64 {
    match k {
        0 => 1.0,
        k if k % 2 == 1 => 0.0,
        k => {
            let m = (k / 2) as u64;
            let mut binom = 1.0;
            for i in 0..m {
                binom = binom * (2 * m - i) as f64 / (i + 1) as f64;
            }
            binom / 2.0
        }
    }
}

/// Row of a moment table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentRow {
    pub q_max: u64,
    pub m0: f64,
    pub m2: f64,
    pub m4: f64,
    pub m6: f64,
}

impl MomentRow {
    pub fn new(q_max: u64, mu: &AtomicMeasure) -> Self {
        Self { q_max, m0: mu.moment(0), m2: mu.moment(2), m4: mu.moment(4), m6: mu.moment(6) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionRow {
    pub q: u64,
    pub h: u64,
    pub dih_dim: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DimensionScan {
    pub rows: Vec<DimensionRow>,
    /// Least-squares slope of `log h` against `log q`.
    pub exponent: f64,
}

pub fn dimension_row(q: u64) -> Result<DimensionRow> {
    let h = class_number(q)?;
    Ok(DimensionRow { q, h, dih_dim: (h - 1) / 2 })
}

pub fn fit_dimension_exponent(rows: &[DimensionRow]) -> f64 {
    let points: Vec<(f64, f64)> = rows.iter().map(|r| ((r.q as f64).ln(), (r.h as f64).ln())).collect();
    least_squares_slope(&points)
}

pub fn dimension_scan(q_max: u64) -> Result<DimensionScan> {
    if q_max < 23 {
        return Err(Error::Domain(format!("Q_max = {q_max} is below 23")));
    }
    let rows = levels_up_to(q_max).into_iter().map(dimension_row).collect::<Result<Vec<_>>>()?;
    let exponent = fit_dimension_exponent(&rows);
    Ok(DimensionScan { rows, exponent })
}

/// How often `c_p` leaves `S(M) = {x : |σ(x)| <= M for every embedding σ}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteValueReport {
    pub m: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub good_primes: u64,
    pub outside: u64,
    pub density: f64,
    pub value_set_size: usize,
}

pub fn finite_value_check(form: &DihedralForm, m: u64, n_max: u64) -> Result<FiniteValueReport> {
    let emp = empirical_mu(form, n_max)?;
    let bound = m as f64 + 1e-9;
    let outside: u64 = emp
        .values()
        .iter()
        .filter(|(v, _)| v.embeddings().iter().any(|z| z.norm() > bound))
        .map(|(_, c)| c)
        .sum();
    let total = emp.total();
    Ok(FiniteValueReport {
        m,
        n: n_max,
        good_primes: total,
        outside,
        density: outside as f64 / total.max(1) as f64,
        value_set_size: emp.values().len(),
    })
}
