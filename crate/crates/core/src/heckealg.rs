//! Trace algebra of Hecke eigenvalues with finite image.
//!
//! At a good prime the Satake parameters `α, β` of a weight-one eigenform are
//! roots of unity with `αβ = χ(p)`, and `a_{p^k} = Σ_{i+j=k} α^i β^j`.
//! Polynomials in `a_p` are rewritten as linear forms in the `a_{p^k}` with
//! `a_p·a_{p^k} = a_{p^{k+1}} + χ·a_{p^{k−1}}`, keeping `χ` as a formal symbol.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::cyclotomic::{CyclotomicSum, RootOfUnity};
use crate::error::{Error, Result};

/// Largest polynomial degree accepted by [`rewrite_to_linear`].
pub const MAX_DEGREE: usize = 64;

/// Satake parameters `(α, β)` of unit modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnitEigenPair {
    alpha: RootOfUnity,
    beta: RootOfUnity,
}

impl UnitEigenPair {
    pub fn new(alpha: RootOfUnity, beta: RootOfUnity) -> Self {
        Self { alpha, beta }
    }

    /// The pair with `α/β = ratio` and the given `β`.
    pub fn from_ratio(ratio: RootOfUnity, beta: RootOfUnity) -> Self {
        Self { alpha: ratio * beta, beta }
    }

    pub fn alpha(&self) -> RootOfUnity {
        self.alpha
    }

    pub fn beta(&self) -> RootOfUnity {
        self.beta
    }

    /// `ζ = α/β`.
    pub fn ratio(&self) -> RootOfUnity {
        self.alpha * self.beta.inv()
    }

    /// `χ = αβ`.
    pub fn det(&self) -> RootOfUnity {
        self.alpha * self.beta
    }

    /// Common modulus of `α` and `β`.
    pub fn modulus(&self) -> u64 {
        self.alpha.den().lcm(&self.beta.den())
    }

    pub fn trace(&self) -> CyclotomicSum {
        trace_power(self, 1)
    }
}

impl fmt::Display for UnitEigenPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha, self.beta)
    }
}

/// `a_{p^k} = Σ_{i+j=k} α^i β^j`.
pub fn trace_power(pair: &UnitEigenPair, k: u32) -> CyclotomicSum {
    let m = pair.modulus();
    let a = pair.alpha.exponent_mod(m) as u128;
    let b = pair.beta.exponent_mod(m) as u128;
    let mut out = CyclotomicSum::zero(m as u32);
    for i in 0..=k as u128 {
        let e = (i * a + (k as u128 - i) * b) % m as u128;
        out.add_root(e as i64, 1);
    }
    out
}

/// Laurent polynomial in the formal symbol `χ` (negative powers stand for `χ̄`).
#[derive(Clone, Default)]
pub struct ChiPolynomial {
    terms: BTreeMap<i64, CyclotomicSum>,
}

impl ChiPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: CyclotomicSum) -> Self {
        Self::monomial(0, c)
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(CyclotomicSum::integer(n, 1))
    }

    /// `c·χ^e`.
    pub fn monomial(e: i64, c: CyclotomicSum) -> Self {
        let mut p = Self::zero();
        p.add_term(e, &c);
        p
    }

    pub fn add_term(&mut self, e: i64, c: &CyclotomicSum) {
        let entry = self.terms.entry(e).or_insert_with(|| CyclotomicSum::zero(c.modulus()));
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// `(exponent of χ, coefficient)`, nonzero coefficients only.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &CyclotomicSum)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplies by `χ^e`.
    pub fn shift(&self, e: i64) -> Self {
        Self { terms: self.terms.iter().map(|(&k, c)| (k + e, c.clone())).collect() }
    }

    pub fn scale(&self, c: &CyclotomicSum) -> Self {
        let mut out = Self::zero();
        for (&e, v) in &self.terms {
            out.add_term(e, &(v * c));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&e, c) in &self.terms {
            for (&f, d) in &other.terms {
                out.add_term(e + f, &(c * d));
            }
        }
        out
    }

    /// Value at `χ = chi`.
    pub fn evaluate(&self, chi: RootOfUnity) -> CyclotomicSum {
        let mut out = CyclotomicSum::zero(1);
        for (&e, c) in &self.terms {
            out = &out + &(c * &chi.pow(e).to_sum());
        }
        out
    }
}

impl PartialEq for ChiPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.add(&other.scale(&CyclotomicSum::integer(-1, 1))).is_zero()
    }
}

impl fmt::Debug for ChiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ChiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&e, c)| match e {
                0 => format!("({c})"),
                1 => format!("({c})·χ"),
                -1 => format!("({c})·χ̄"),
                e if e > 0 => format!("({c})·χ^{e}"),
                e => format!("({c})·χ̄^{}", -e),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Polynomial `Σ c_i(χ) T^i` in the symbol `T = a_p`.
#[derive(Debug, Clone)]
pub struct HeckePowerExpression {
    coeffs: Vec<ChiPolynomial>,
}

impl HeckePowerExpression {
    pub fn from_coeffs(mut coeffs: Vec<ChiPolynomial>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// `a_p^n`.
    pub fn power(n: usize) -> Self {
        let mut coeffs = vec![ChiPolynomial::zero(); n + 1];
        coeffs[n] = ChiPolynomial::integer(1);
        Self { coeffs }
    }

    /// `Π_{s∈S}(T − s) + A`.
    pub fn from_roots(roots: &[CyclotomicSum], a: i64) -> Self {
        let mut coeffs = vec![CyclotomicSum::one(1)];
        for s in roots {
            let mut next = vec![CyclotomicSum::zero(1); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = &next[i + 1] + c;
                next[i] = &next[i] - &(c * s);
            }
            coeffs = next;
        }
        coeffs[0] = &coeffs[0] + &CyclotomicSum::integer(a, 1);
        Self::from_coeffs(coeffs.into_iter().map(ChiPolynomial::constant).collect())
    }

    pub fn coeffs(&self) -> &[ChiPolynomial] {
        &self.coeffs
    }

    /// Degree in `T`; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Value with `T = α + β`, `χ = αβ`.
    pub fn evaluate(&self, pair: &UnitEigenPair) -> CyclotomicSum {
        let t = pair.trace();
        let chi = pair.det();
        let mut acc = CyclotomicSum::zero(1);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &t) + &c.evaluate(chi);
        }
        acc
    }
}

/// One term `μ_k(χ)·a_{p^k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearTerm {
    pub k: u32,
    pub mu: ChiPolynomial,
}

/// `Σ_k μ_k(χ)·a_{p^k} = B`, with `a_{p^0} = 1`.
#[derive(Debug, Clone)]
pub struct HeckeLinearRelation {
    label: String,
    terms: Vec<LinearTerm>,
    constant: i64,
}

impl HeckeLinearRelation {
    pub fn new(label: impl Into<String>, terms: Vec<LinearTerm>, constant: i64) -> Self {
        let mut terms: Vec<LinearTerm> = terms.into_iter().filter(|t| !t.mu.is_zero()).collect();
        terms.sort_by_key(|t| t.k);
        Self { label: label.into(), terms, constant }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn terms(&self) -> &[LinearTerm] {
        &self.terms
    }

    /// Coefficient of `a_{p^k}` (zero if absent).
    pub fn mu(&self, k: u32) -> ChiPolynomial {
        self.terms.iter().find(|t| t.k == k).map(|t| t.mu.clone()).unwrap_or_default()
    }

    pub fn constant(&self) -> i64 {
        self.constant
    }

    /// Number of terms with `k >= 1`.
    pub fn len(&self) -> usize {
        self.terms.iter().filter(|t| t.k >= 1).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Left-hand side at `a_{p^k} = trace_power(pair, k)`, `χ = det(pair)`.
    pub fn lhs(&self, pair: &UnitEigenPair) -> CyclotomicSum {
        let chi = pair.det();
        let mut acc = CyclotomicSum::zero(1);
        for t in &self.terms {
            acc = &acc + &(&t.mu.evaluate(chi) * &trace_power(pair, t.k));
        }
        acc
    }

    pub fn holds(&self, pair: &UnitEigenPair) -> bool {
        self.lhs(pair) == CyclotomicSum::integer(self.constant, 1)
    }

    pub fn export(&self) -> RelationExport {
        RelationExport {
            kind: self.label.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| TermExport {
                    k: t.k,
                    mu_exponents: t
                        .mu
                        .terms()
                        .map(|(chi, c)| MuExport {
                            chi,
                            modulus: c.modulus(),
                            coeff: c.exact_repr(),
                            value: c.to_complex().re,
                        })
                        .collect(),
                })
                .collect(),
            constant: self.constant,
        }
    }
}

impl fmt::Display for HeckeLinearRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| match t.k {
                0 => format!("[{}]", t.mu),
                1 => format!("[{}]·a_p", t.mu),
                k => format!("[{}]·a_{{p^{k}}}", t.mu),
            })
            .collect();
        let lhs = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        write!(f, "{lhs} = {}", self.constant)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationExport {
    #[serde(rename = "type")]
    pub kind: String,
    pub terms: Vec<TermExport>,
    pub constant: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TermExport {
    pub k: u32,
    pub mu_exponents: Vec<MuExport>,
}

/// `coeff·χ^chi`, the coefficient in `exact_repr` form over `modulus`.
#[derive(Debug, Clone, Serialize)]
pub struct MuExport {
    pub chi: i64,
    pub modulus: u32,
    pub coeff: String,
    pub value: f64,
}

/// Linear form in the `a_{p^k}` equal to `expr`; the returned constant is 0 and unused.
pub fn rewrite_to_linear(expr: &HeckePowerExpression) -> Result<HeckeLinearRelation> {
    if expr.degree() > MAX_DEGREE {
        return Err(Error::Resource(format!(
            "degree {} exceeds the rewriter limit {MAX_DEGREE}",
            expr.degree()
        )));
    }
    // Horner: L ← T·L + c_i, with T·a_{p^k} = a_{p^{k+1}} + χ·a_{p^{k−1}}.
    let mut lin: Vec<ChiPolynomial> = Vec::new();
    for c in expr.coeffs.iter().rev() {
        let mut next = vec![ChiPolynomial::zero(); lin.len() + 1];
        for (k, mu) in lin.iter().enumerate() {
            next[k + 1] = next[k + 1].add(mu);
            if k >= 1 {
                next[k - 1] = next[k - 1].add(&mu.shift(1));
            }
        }
        next[0] = next[0].add(c);
        lin = next;
    }
    let terms =
        lin.into_iter().enumerate().map(|(k, mu)| LinearTerm { k: k as u32, mu }).collect();
    Ok(HeckeLinearRelation::new("linear", terms, 0))
}

/// Linearization of `P(X) = Π_{s∈S}(X − s) + A`; holds with `B = A` whenever `a_p ∈ S`.
pub fn build_relation(s: &[CyclotomicSum], a: i64) -> Result<HeckeLinearRelation> {
    if s.is_empty() {
        return Err(Error::Domain("trace set is empty".into()));
    }
    if a == 0 {
        return Err(Error::InsufficientConstant { given: a, minimal: 1 });
    }
    let rel = rewrite_to_linear(&HeckePowerExpression::from_roots(s, a))?;
    Ok(HeckeLinearRelation::new("custom", rel.terms, a))
}

/// Pairs of `m`-th roots of unity whose trace lies in `s`.
pub fn pairs_with_trace_in(s: &[CyclotomicSum], m: u64) -> Vec<UnitEigenPair> {
    let targets: Vec<(f64, f64, &CyclotomicSum)> = s
        .iter()
        .map(|v| {
            let z = v.to_complex();
            (z.re, z.im, v)
        })
        .collect();
    let mut out = Vec::new();
    for a in 0..m {
        for b in 0..m {
            let pair = UnitEigenPair::new(RootOfUnity::new(a as i64, m), RootOfUnity::new(b as i64, m));
            let tz = pair.alpha.to_complex() + pair.beta.to_complex();
            let close = targets.iter().filter(|(re, im, _)| (tz.re - re).abs() + (tz.im - im).abs() < 1e-9);
            let trace = pair.trace();
            if close.into_iter().any(|(_, _, v)| **v == trace) {
                out.push(pair);
            }
        }
    }
    out
}

/// Finite projective images of exotic weight-one forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProjectiveType {
    Tetrahedral,
    Octahedral,
    Icosahedral,
}

impl ProjectiveType {
    /// Element orders of `A₄`, `S₄`, `A₅`.
    pub fn ratio_orders(&self) -> &'static [u64] {
        match self {
            ProjectiveType::Tetrahedral => &[1, 2, 3],
            ProjectiveType::Octahedral => &[1, 2, 3, 4],
            ProjectiveType::Icosahedral => &[1, 2, 3, 5],
        }
    }
}

/// Traces `α + α⁻¹` of the determinant-one lifts with ratio order in the projective type.
pub fn projective_trace_set(kind: ProjectiveType) -> Vec<CyclotomicSum> {
    let mut out: Vec<CyclotomicSum> = Vec::new();
    for &r in kind.ratio_orders() {
        for j in 0..2 * r {
            let alpha = RootOfUnity::new(j as i64, 2 * r);
            if (alpha * alpha).order() != r {
                continue;
            }
            let t = UnitEigenPair::new(alpha, alpha.inv()).trace().lift(120);
            if !out.contains(&t) {
                out.push(t);
            }
        }
    }
    out
}

/// `χ̄⁶·a_{p¹²} − χ̄⁴·a_{p⁸} − χ̄·a_{p²} = 1`.
pub fn icosahedral_relation() -> HeckeLinearRelation {
    let one = CyclotomicSum::one(1);
    let minus = CyclotomicSum::integer(-1, 1);
    HeckeLinearRelation::new(
        "icosahedral",
        vec![
            LinearTerm { k: 2, mu: ChiPolynomial::monomial(-1, minus.clone()) },
            LinearTerm { k: 8, mu: ChiPolynomial::monomial(-4, minus) },
            LinearTerm { k: 12, mu: ChiPolynomial::monomial(-6, one) },
        ],
        1,
    )
}

/// Whether the icosahedral relation holds for every eigenpair whose ratio has exact order `order`.
///
/// Each primitive ratio is combined with every `β` among the 24th roots of unity,
/// so the determinant ranges over several values.
pub fn verify_icosahedral_identity(order: u64) -> bool {
    if order == 0 {
        return false;
    }
    let rel = icosahedral_relation();
    (0..order).filter(|r| r.gcd(&order) == 1).all(|r| {
        let zeta = RootOfUnity::new(r as i64, order);
        (0..24).all(|t| rel.holds(&UnitEigenPair::from_ratio(zeta, RootOfUnity::new(t, 24))))
    })
}

/// Value of `χ̄⁶a_{p¹²} − χ̄⁴a_{p⁸} − χ̄a_{p²}` at ratio `e(1/order)`, trivial determinant.
pub fn icosahedral_value(order: u64) -> CyclotomicSum {
    let zeta = RootOfUnity::new(1, order.max(1));
    // αβ = 1 needs α = ζ^{1/2}; take β = e(−1/(2n)).
    let beta = RootOfUnity::new(-1, 2 * order.max(1));
    icosahedral_relation().lhs(&UnitEigenPair::from_ratio(zeta, beta))
}
