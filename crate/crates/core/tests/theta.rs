mod common;

use std::sync::Arc;

use dihedral::stats::levels_up_to;
use dihedral::theta::{direct_coefficient_oracle, theta_coefficients, DihedralForm, SplittingTable};
use dihedral::{all_characters, enumerate_class_group, PrimeIdealClass};

#[test]
fn theta_matches_lattice_point_counts() {
    for q in levels_up_to(500) {
        let g = Arc::new(enumerate_class_group(q).unwrap());
        for psi in all_characters(&g).into_iter().filter(|c| !c.is_real()) {
            let theta = theta_coefficients(q, &psi, 10_000).unwrap();
            let oracle = common::representation_theta(&psi, 10_000);
            for n in 1..=10_000u64 {
                assert_eq!(*theta.coeff(n), oracle[n as usize], "q={q} psi={} n={n}", psi.index());
            }
        }
    }
}

#[test]
fn theta_matches_ideal_enumeration() {
    for q in levels_up_to(500) {
        let g = Arc::new(enumerate_class_group(q).unwrap());
        for psi in all_characters(&g).into_iter().filter(|c| !c.is_real()) {
            let theta = theta_coefficients(q, &psi, 10_000).unwrap();
            for n in 1..=10_000u64 {
                assert_eq!(*theta.coeff(n), direct_coefficient_oracle(&psi, n).unwrap(), "q={q} n={n}");
            }
        }
    }
}

#[test]
fn conjugate_character_conjugates_the_series() {
    for q in [23u64, 47, 199, 3299] {
        let g = Arc::new(enumerate_class_group(q).unwrap());
        for psi in all_characters(&g).into_iter().filter(|c| !c.is_real()) {
            let a = theta_coefficients(q, &psi, 3000).unwrap();
            let b = theta_coefficients(q, &psi.conj(), 3000).unwrap();
            for n in 1..=3000 {
                assert_eq!(a.coeff(n).conj(), *b.coeff(n));
            }
        }
    }
}

#[test]
fn inert_primes_vanish_and_values_are_few() {
    for q in [23u64, 31, 47, 71, 199] {
        let g = Arc::new(enumerate_class_group(q).unwrap());
        let table = Arc::new(SplittingTable::new(g.clone(), 200_000).unwrap());
        for psi in all_characters(&g).into_iter().filter(|c| !c.is_real()) {
            let form = DihedralForm::new(psi, table.clone()).unwrap();
            let mut values: Vec<Vec<i64>> = Vec::new();
            for (p, c) in form.good_prime_coefficients(200_000) {
                if table.kind(p) == Some(PrimeIdealClass::Inert) {
                    assert!(c.is_zero(), "q={q} p={p}");
                }
                let key = c.reduced();
                if !values.contains(&key) {
                    values.push(key);
                }
            }
            assert!(values.len() <= g.h() + 1, "q={q}: {} values", values.len());
        }
    }
}

#[test]
fn second_moment_near_one_for_level_23() {
    let form = DihedralForm::for_level(23, 1, 1_000_000).unwrap();
    let sum: f64 = form.good_prime_coefficients(1_000_000).map(|(_, c)| c.to_complex().re.powi(2)).sum();
    let m2 = sum / 78_498.0;
    assert!((m2 - 1.0).abs() <= 0.05, "{m2}");
}

#[test]
fn level_23_is_the_eta_product() {
    // θ_ψ for q = 23 is η(z)η(23z); compare against the product expansion.
    let n_max = 2000usize;
    let mut eta = vec![0i64; n_max + 1];
    eta[0] = 1;
    for k in 1..=n_max {
        for m in (k..=n_max).rev() {
            eta[m] -= eta[m - k];
        }
    }
    let mut prod = vec![0i64; n_max + 1];
    for (i, &a) in eta.iter().enumerate() {
        for (j, &b) in eta.iter().enumerate() {
            let n = 1 + i + 23 * j;
            if n > n_max {
                break;
            }
            prod[n] += a * b;
        }
    }
    let f = DihedralForm::for_level(23, 1, n_max as u64).unwrap();
    let theta = f.series(n_max as u64).unwrap();
    for n in 1..=n_max as u64 {
        let c = theta.coeff(n);
        assert_eq!(*c, dihedral::CyclotomicSum::integer(prod[n as usize], 1), "n={n}");
    }
}
