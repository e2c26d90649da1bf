use std::sync::Arc;

use dihedral::heckealg::{
    build_relation, icosahedral_relation, icosahedral_value, pairs_with_trace_in, projective_trace_set,
    verify_icosahedral_identity, ProjectiveType,
};
use dihedral::stats::{
    average_levels, averaged_measure, dimension_row, fit_dimension_exponent, level_measure_empirical,
    levels_up_to, limit_law_moment, theoretical_beta, wirsing_count, zero_density, MomentRow,
};
use dihedral::theta::{dihedral_basis, ramanujan_check, verify_hecke, SplittingTable};
use dihedral::{
    all_characters, enumerate_class_group, ClassCharacter, ClassGroup, CyclotomicSum, DihedralForm, Error,
    HeckeLinearRelation, RootOfUnity, UnitEigenPair,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::output::{clean, Report};

pub type CmdResult = Result<Report, Error>;

const TRACE_MODULUS: u64 = 120;
const RANDOM_PAIRS: usize = 256;

fn group(q: u64) -> Result<Arc<ClassGroup>, Error> {
    Ok(Arc::new(enumerate_class_group(q)?))
}

/// Resolves `--psi`: an index, or `all` for every non-real character.
fn select_characters(group: &Arc<ClassGroup>, psi: &str) -> Result<Vec<ClassCharacter>, Error> {
    let chars = all_characters(group);
    if psi == "all" {
        let nonreal: Vec<_> = chars.into_iter().filter(|c| !c.is_real()).collect();
        if nonreal.is_empty() {
            return Err(Error::Domain(format!("h(-{}) = {} has no non-real characters", group.q(), group.h())));
        }
        return Ok(nonreal);
    }
    let index: usize = psi.parse().map_err(|_| Error::Domain(format!("psi must be an index or 'all', got '{psi}'")))?;
    let psi = chars
        .get(index)
        .cloned()
        .ok_or_else(|| Error::Domain(format!("psi index {index} out of range for h = {}", group.h())))?;
    if psi.is_real() {
        return Err(Error::EisensteinCase);
    }
    Ok(vec![psi])
}

fn forms(q: u64, psi: &str, n: u64) -> Result<Vec<DihedralForm>, Error> {
    if n == 0 {
        return Err(Error::EmptyDomain("N must be at least 1".into()));
    }
    let g = group(q)?;
    let chars = select_characters(&g, psi)?;
    let table = Arc::new(SplittingTable::new(g, n)?);
    chars.into_iter().map(|c| DihedralForm::new(c, table.clone())).collect()
}

/// `exact_repr`, with `0:0` for zero so that every cell parses back.
fn repr(c: &CyclotomicSum) -> String {
    let r = c.exact_repr();
    if r.is_empty() {
        "0:0".into()
    } else {
        r
    }
}

fn sum_value(c: &CyclotomicSum) -> Vec<Value> {
    let z = c.to_complex();
    vec![json!(clean(z.re)), json!(clean(z.im)), json!(repr(c))]
}

pub fn classgroup(q: u64) -> CmdResult {
    let g = group(q)?;
    let mut r = Report::new(&["class", "a", "b", "c", "order", "coords"]);
    for (i, f) in g.forms().iter().enumerate() {
        let coords: Vec<String> = g.coords(i).iter().map(u64::to_string).collect();
        r.row(vec![json!(i), json!(f.a), json!(f.b), json!(f.c), json!(g.order(i)), json!(coords.join(" "))]);
    }
    r.note("h", g.h());
    r.note("structure", g.structure_string());
    let h_sum = dihedral::classgroup::class_number_from_character_sum(q);
    r.check(h_sum == g.h() as u64, || format!("h = {} but the character sum gives {h_sum}", g.h()));
    r.check(g.structure().iter().product::<u64>() == g.h() as u64, || "structure does not multiply to h".into());
    Ok(r)
}

pub fn theta(q: u64, psi: &str, n: u64) -> CmdResult {
    let mut r = Report::new(&["psi", "n", "re", "im", "exact_repr"]);
    for form in forms(q, psi, n)? {
        let series = form.series(n)?;
        r.note(&format!("modulus_psi{}", form.psi().index()), series.modulus());
        for k in 1..=n {
            let mut row = vec![json!(form.psi().index()), json!(k)];
            row.extend(sum_value(series.coeff(k)));
            r.row(row);
        }
    }
    Ok(r)
}

pub fn verify(q: u64, n: u64, corrupt: Option<u64>) -> CmdResult {
    let mut basis = dihedral_basis(q, n)?;
    if let Some(m) = corrupt {
        let Some(s) = basis.series.first_mut() else {
            return Err(Error::Domain(format!("level {q} has no dihedral forms to corrupt")));
        };
        if m == 0 || m > n {
            return Err(Error::Domain(format!("corrupt index {m} outside 1..={n}")));
        }
        let bumped = s.coeff(m) + &CyclotomicSum::one(s.modulus());
        s.set_coeff(m, bumped);
    }
    let mut r = Report::new(&[
        "psi",
        "recursion_checks",
        "multiplicativity_checks",
        "hecke_failures",
        "max_prime_abs",
        "witness_prime",
        "ramanujan_violations",
    ]);
    let checks: Vec<_> = basis.series.par_iter().map(|s| (verify_hecke(s), ramanujan_check(s))).collect();
    for (s, (hecke, raman)) in basis.series.iter().zip(&checks) {
        let psi = s.psi().index();
        r.row(vec![
            json!(psi),
            json!(hecke.recursion_checks),
            json!(hecke.multiplicativity_checks),
            json!(hecke.failures.len()),
            json!(raman.max_prime_abs),
            json!(raman.witness_prime),
            json!(raman.prime_violations.len() + raman.divisor_violations.len()),
        ]);
        if let Some(first) = hecke.failures.first() {
            r.check(false, || format!("psi {psi}: {first}"));
        }
        r.check(raman.passed(), || {
            format!("psi {psi}: Ramanujan bound fails at {:?}", [&raman.prime_violations[..], &raman.divisor_violations[..]].concat())
        });
    }
    r.note("h", basis.h);
    r.note("dimension", basis.dimension());
    r.note("rank", basis.rank);
    r.check(basis.dimension() == (basis.h - 1) / 2, || format!("basis has {} forms, expected {}", basis.dimension(), (basis.h - 1) / 2));
    r.check(basis.independent(), || format!("basis rank {} below dimension {}", basis.rank, basis.dimension()));
    Ok(r)
}

pub fn density(q: u64, psi: &str, n: u64) -> CmdResult {
    let forms = forms(q, psi, n)?;
    let reports = forms.par_iter().map(|f| zero_density(f, n)).collect::<Result<Vec<_>, _>>()?;
    let mut r = Report::new(&["psi", "order", "beta_theory", "beta_hat", "gap", "zeros", "good_primes"]);
    for (f, d) in forms.iter().zip(&reports) {
        let order = f.psi().order();
        r.row(vec![
            json!(d.psi_index),
            json!(order),
            json!(d.beta_theory),
            json!(d.beta_hat),
            json!(d.gap),
            json!(d.zeros),
            json!(d.good_primes),
        ]);
        if order % 4 != 0 {
            r.check(d.beta_theory == 0.5, || format!("psi {}: beta = {} with 4 not dividing {order}", d.psi_index, d.beta_theory));
        }
        r.check(d.zeros <= d.good_primes, || format!("psi {}: more zeros than primes", d.psi_index));
    }
    Ok(r)
}

pub fn wirsing(q: u64, psi: &str, n: u64) -> CmdResult {
    let mut r = Report::new(&["psi", "x", "count"]);
    r.note("fit_from", dihedral::stats::WIRSING_FIT_FROM);
    for form in forms(q, psi, n)? {
        let table = wirsing_count(&form, n)?;
        let idx = form.psi().index();
        let beta = theoretical_beta(form.psi());
        r.note(&format!("beta_theory_psi{idx}"), *beta.numer() as f64 / *beta.denom() as f64);
        r.note(&format!("beta_hat_psi{idx}"), table.beta_hat);
        for &(x, c) in &table.checkpoints {
            r.row(vec![json!(idx), json!(x), json!(c)]);
            r.check(c <= x, || format!("psi {idx}: count {c} exceeds x = {x}"));
        }
        r.check(table.checkpoints.windows(2).all(|w| w[0].1 <= w[1].1), || format!("psi {idx}: counts decrease"));
    }
    Ok(r)
}

pub fn dimension(qmax: u64) -> CmdResult {
    let levels = levels_up_to(qmax);
    if levels.is_empty() {
        return Err(Error::EmptyDomain(format!("no prime q = 3 mod 4 up to {qmax}")));
    }
    let rows = levels.par_iter().map(|&q| dimension_row(q)).collect::<Result<Vec<_>, _>>()?;
    let mut r = Report::new(&["q", "h", "dih_dim"]);
    for row in &rows {
        r.row(vec![json!(row.q), json!(row.h), json!(row.dih_dim)]);
        r.check(row.q == 3 || row.h % 2 == 1, || format!("h(-{}) = {} is even", row.q, row.h));
    }
    r.note("levels", rows.len());
    r.note("exponent", fit_dimension_exponent(&rows));
    Ok(r)
}

pub fn satotate(qmax: u64, n: u64) -> CmdResult {
    let theory = averaged_measure(qmax)?;
    let levels = levels_up_to(qmax);
    let empirical = levels
        .par_iter()
        .map(|&q| level_measure_empirical(&group(q)?, n))
        .collect::<Result<Vec<_>, _>>()?;
    let empirical: Vec<_> = empirical.into_iter().flatten().collect();
    let averaged = average_levels(&empirical);
    let mut r = Report::new(&["source", "q_max", "m0", "m2", "m4", "m6"]);
    let limit = MomentRow { q_max: qmax, m0: 1.0, m2: limit_law_moment(2), m4: limit_law_moment(4), m6: limit_law_moment(6) };
    for (name, row) in [("empirical", MomentRow::new(qmax, &averaged)), ("theory", MomentRow::new(qmax, &theory)), ("limit", limit)] {
        r.row(vec![json!(name), json!(row.q_max), json!(row.m0), json!(row.m2), json!(row.m4), json!(row.m6)]);
        if name == "theory" {
            r.check((row.m0 - 1.0).abs() < 1e-9, || format!("theoretical mass {}", row.m0));
            r.check((row.m2 - 1.0).abs() < 1e-9, || format!("theoretical second moment {}", row.m2));
        }
    }
    r.note("levels", empirical.len());
    r.note("N", n);
    Ok(r)
}

fn parse_trace_set(s: &str) -> Result<Vec<CyclotomicSum>, Error> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| match p.parse::<i64>() {
            Ok(k) => Ok(CyclotomicSum::integer(k, TRACE_MODULUS as u32)),
            Err(_) => CyclotomicSum::parse_repr(p, TRACE_MODULUS as u32)
                .ok_or_else(|| Error::Domain(format!("cannot parse trace '{p}'; expected exp:coeff;…"))),
        })
        .collect()
}

fn check_relation(r: &mut Report, rel: &HeckeLinearRelation, s: &[CyclotomicSum], seed: u64) {
    let pairs = pairs_with_trace_in(s, TRACE_MODULUS);
    let bad: Vec<String> = pairs.iter().filter(|p| !rel.holds(p)).map(|p| p.to_string()).collect();
    r.note("pairs_checked", pairs.len());
    r.check(bad.is_empty(), || format!("relation fails on {} pairs, first {}", bad.len(), bad[0]));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut in_s, mut satisfied) = (0usize, 0usize);
    for _ in 0..RANDOM_PAIRS {
        let m = TRACE_MODULUS as i64;
        let pair = UnitEigenPair::new(
            RootOfUnity::new(rng.random_range(0..m), TRACE_MODULUS),
            RootOfUnity::new(rng.random_range(0..m), TRACE_MODULUS),
        );
        let holds = rel.holds(&pair);
        satisfied += holds as usize;
        if s.contains(&pair.trace()) {
            in_s += 1;
            r.check(holds, || format!("relation fails on random pair {pair}"));
        }
    }
    r.note("random_pairs", RANDOM_PAIRS);
    r.note("random_pairs_with_trace_in_s", in_s);
    r.note("random_pairs_satisfying", satisfied);
}

pub fn relations(kind: &str, s: Option<&str>, a: i64, seed: u64) -> CmdResult {
    let projective = match kind {
        "tetrahedral" => Some(ProjectiveType::Tetrahedral),
        "octahedral" => Some(ProjectiveType::Octahedral),
        "icosahedral" => Some(ProjectiveType::Icosahedral),
        "custom" => None,
        other => return Err(Error::Domain(format!("unknown relation kind '{other}'"))),
    };
    if kind == "icosahedral" {
        let rel = icosahedral_relation();
        let mut r = Report::new(&["order", "value", "exact_repr", "holds"]);
        r.note("identity", rel.to_string());
        let mut holds_on = Vec::new();
        for order in 1..=12u64 {
            let holds = verify_icosahedral_identity(order);
            if holds {
                holds_on.push(order);
            }
            let v = icosahedral_value(order);
            r.row(vec![json!(order), json!(v.to_string()), json!(repr(&v)), json!(holds)]);
        }
        r.note("holds_for_orders", format!("{holds_on:?}"));
        let traces = projective_trace_set(ProjectiveType::Icosahedral);
        let lifts: Vec<_> = pairs_with_trace_in(&traces, TRACE_MODULUS)
            .into_iter()
            .filter(|p| p.det() == RootOfUnity::one())
            .collect();
        let bad = lifts.iter().filter(|p| !rel.holds(p)).count();
        r.note("determinant_one_lifts", lifts.len());
        r.check(bad == 0, || format!("identity fails on {bad} determinant-one lifts"));
        for &o in ProjectiveType::Icosahedral.ratio_orders() {
            r.check(holds_on.contains(&o), || format!("identity fails for ratio order {o}"));
        }
        return Ok(r);
    }
    let traces = match (projective, s) {
        (Some(t), _) => projective_trace_set(t),
        (None, Some(s)) => parse_trace_set(s)?,
        (None, None) => return Err(Error::Domain("custom relations need --s".into())),
    };
    if traces.is_empty() {
        return Err(Error::EmptyDomain("trace set is empty".into()));
    }
    let rel = build_relation(&traces, a)?;
    let mut r = Report::new(&["k", "mu"]);
    r.note("relation", rel.to_string());
    r.note("traces", traces.iter().map(repr).collect::<Vec<_>>().join(","));
    for term in rel.terms() {
        r.row(vec![json!(term.k), json!(term.mu.to_string())]);
    }
    r.note("constant", rel.constant());
    check_relation(&mut r, &rel, &traces, seed);
    Ok(r)
}

