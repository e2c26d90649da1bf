//! Characters of the class group, stored as exponent vectors against the
//! elementary-divisor basis so that every value is an exact root of unity.

use std::sync::Arc;

use num_integer::Integer;

use crate::classgroup::ClassGroup;
use crate::cyclotomic::{CyclotomicSum, RootOfUnity};

/// `ψ(Π g_i^{x_i}) = e(Σ e_i x_i / d_i)`.
#[derive(Debug, Clone)]
pub struct ClassCharacter {
    group: Arc<ClassGroup>,
    exponents: Vec<u64>,
    order: u64,
}

impl PartialEq for ClassCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.group.disc() == other.group.disc() && self.exponents == other.exponents
    }
}

impl Eq for ClassCharacter {}

impl ClassCharacter {
    pub fn new(group: Arc<ClassGroup>, exponents: Vec<u64>) -> Self {
        assert_eq!(exponents.len(), group.structure().len(), "one exponent per elementary divisor");
        let exponents: Vec<u64> =
            exponents.iter().zip(group.structure()).map(|(&e, &d)| e % d).collect();
        let order = exponents
            .iter()
            .zip(group.structure())
            .map(|(&e, &d)| d / e.gcd(&d))
            .fold(1, |acc: u64, o| acc.lcm(&o));
        Self { group, exponents, order }
    }

    pub fn trivial(group: Arc<ClassGroup>) -> Self {
        let r = group.structure().len();
        Self::new(group, vec![0; r])
    }

    pub fn group(&self) -> &Arc<ClassGroup> {
        &self.group
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Exponent `j` with `ψ(class) = e(j / ord ψ)`.
    pub fn exponent_at(&self, class: usize) -> u64 {
        let m = self.group.exponent();
        let k = self
            .group
            .coords(class)
            .iter()
            .zip(&self.exponents)
            .zip(self.group.structure())
            .fold(0u64, |acc, ((&x, &e), &d)| (acc + e * x % d * (m / d)) % m);
        // ψ takes values in the ord(ψ)-th roots of unity, so m/ord divides k.
        k / (m / self.order)
    }

    pub fn value(&self, class: usize) -> RootOfUnity {
        RootOfUnity::new(self.exponent_at(class) as i64, self.order)
    }

    pub fn value_sum(&self, class: usize) -> CyclotomicSum {
        CyclotomicSum::root(self.exponent_at(class) as i64, self.order as u32)
    }

    /// `ψ = ψ̄`, i.e. `ψ²` trivial.
    pub fn is_real(&self) -> bool {
        self.order <= 2
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn conj(&self) -> Self {
        let exps = self
            .exponents
            .iter()
            .zip(self.group.structure())
            .map(|(&e, &d)| (d - e) % d)
            .collect();
        Self::new(self.group.clone(), exps)
    }

    /// Position in [`all_characters`] order.
    pub fn index(&self) -> usize {
        self.exponents
            .iter()
            .zip(self.group.structure())
            .fold(0usize, |acc, (&e, &d)| acc * d as usize + e as usize)
    }
}

/// All `h` characters, ordered lexicographically by exponent vector (trivial first).
pub fn all_characters(group: &Arc<ClassGroup>) -> Vec<ClassCharacter> {
    let structure = group.structure().to_vec();
    let h: u64 = structure.iter().product();
    (0..h)
        .map(|mut idx| {
            let mut exps = vec![0u64; structure.len()];
            for (slot, &d) in exps.iter_mut().zip(&structure).rev() {
                *slot = idx % d;
                idx /= d;
            }
            ClassCharacter::new(group.clone(), exps)
        })
        .collect()
}

/// Unordered pairs `{ψ, ψ̄}` of non-real characters; the lexicographically smaller one comes first.
pub fn conjugate_pairs(group: &Arc<ClassGroup>) -> Vec<(ClassCharacter, ClassCharacter)> {
    all_characters(group)
        .into_iter()
        .filter(|psi| !psi.is_real())
        .filter_map(|psi| {
            let bar = psi.conj();
            (psi.exponents < bar.exponents).then_some((psi, bar))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classgroup::enumerate_class_group;

    fn group(q: u64) -> Arc<ClassGroup> {
        Arc::new(enumerate_class_group(q).unwrap())
    }

    #[test]
    fn character_counts() {
        let g3 = group(3);
        let chars = all_characters(&g3);
        assert_eq!(chars.len(), 1);
        assert!(chars[0].is_trivial() && chars[0].is_real());

        let g23 = group(23);
        let chars = all_characters(&g23);
        assert_eq!(chars.len(), 3);
        assert!(chars[0].is_trivial());
        assert_eq!(chars[2], chars[1].conj());
        assert!(!chars[1].is_real());
        assert_eq!(chars[1].order(), 3);

        let g47 = group(47);
        assert_eq!(all_characters(&g47).len(), 5);
        assert_eq!(conjugate_pairs(&g47).len(), 2);
        assert!(conjugate_pairs(&g3).is_empty());
        assert_eq!(conjugate_pairs(&g23).len(), 1);
        assert_eq!(conjugate_pairs(&group(71)).len(), 3);
    }

    #[test]
    fn characters_are_homomorphisms() {
        for q in [23u64, 47, 199, 3299, 4027] {
            let g = group(q);
            let h = g.h();
            for psi in all_characters(&g) {
                for i in 0..h {
                    for j in 0..h {
                        assert_eq!(psi.value(g.mul(i, j)), psi.value(i) * psi.value(j), "q={q}");
                    }
                    assert_eq!(g.exponent() % psi.value(i).order(), 0);
                }
            }
        }
    }

    #[test]
    fn orthogonality() {
        for q in [23u64, 47, 71, 3299, 4027] {
            let g = group(q);
            let chars = all_characters(&g);
            let m = g.exponent() as u32;
            for psi in &chars {
                for phi in &chars {
                    let mut sum = CyclotomicSum::zero(m);
                    for c in 0..g.h() {
                        sum += &(psi.value(c) * phi.value(c).inv()).to_sum();
                    }
                    let expect = if psi == phi { g.h() as i64 } else { 0 };
                    assert_eq!(sum, CyclotomicSum::integer(expect, 1), "q={q}");
                }
            }
        }
    }

    #[test]
    fn index_matches_enumeration_order() {
        let g = group(3299);
        for (i, psi) in all_characters(&g).iter().enumerate() {
            assert_eq!(psi.index(), i);
        }
    }
}
