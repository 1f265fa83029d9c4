//! Degree-bounded verification sweeps and dimension counts.

use rustc_hash::FxHashSet;

use super::graded::{free_monomials, ActionTable, BitVec, GradedBasis, NormalForms};
use super::poly::{Monomial, Poly};
use super::presentation::Presentation;
use crate::steenrod::adem_pair;

/// Default degree bound for sweeps.
pub const DEFAULT_BOUND: u32 = 64;

/// `Sq^a Sq^b m` disagrees with its Adem expansion applied to `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdemViolation {
    pub monomial: Monomial,
    pub a: u32,
    pub b: u32,
    pub lhs: Poly,
    pub rhs: Poly,
}

/// `Sq^k` does not preserve the relation ideal: `Sq^k lead != Sq^k tail`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealViolation {
    pub relation: usize,
    pub k: u32,
    pub lead_image: Poly,
    pub tail_image: Poly,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoherenceReport {
    pub bound: u32,
    pub violations: Vec<AdemViolation>,
    pub ideal_violations: Vec<IdealViolation>,
}

impl CoherenceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.ideal_violations.is_empty()
    }
}

/// A monomial whose complete reductions depend on the first rewrite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divergence {
    pub monomial: Monomial,
    /// `(relation index, complete reduction after rewriting with it first)`.
    pub reductions: Vec<(usize, Poly)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfluenceReport {
    pub bound: u32,
    pub divergences: Vec<Divergence>,
}

impl ConfluenceReport {
    pub fn passed(&self) -> bool {
        self.divergences.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstabilityViolation {
    /// `Sq^|m| m != m^2`.
    TopSquare { monomial: Monomial, got: Poly, expected: Poly },
    /// `Sq^k m != 0` for some `k > |m|`.
    AboveDegree { monomial: Monomial, k: u32, got: Poly },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InstabilityReport {
    pub bound: u32,
    pub violations: Vec<InstabilityViolation>,
}

impl InstabilityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every Adem relation `Sq^a Sq^b` (`0 < a < 2b`) on every basis
/// monomial `m` with `a + b + |m| <= bound`, and that each relation is mapped
/// into the ideal by every `Sq^k` within the bound.
pub fn check_adem_coherence(p: &Presentation, bound: u32) -> CoherenceReport {
    let table = ActionTable::new(p, bound);
    check_adem_coherence_with(&table)
}

pub fn check_adem_coherence_with(table: &ActionTable<'_>) -> CoherenceReport {
    let p = table.presentation();
    let bound = table.bound();
    let basis = table.basis();
    let mut report = CoherenceReport { bound, ..Default::default() };
    let mut lhs_acc: Vec<BitVec> = (0..=bound).map(|d| BitVec::zeros(basis.dim(d))).collect();
    let mut rhs_acc = lhs_acc.clone();
    let adem: Vec<Vec<Vec<(u32, u32)>>> =
        (0..=bound).map(|b| (0..2 * b).map(|a| if a == 0 { Vec::new() } else { adem_pair(a, b) }).collect()).collect();

    for (d, i, m) in basis.iter() {
        // For b > |m| both sides vanish by instability: Sq^c m needs c <= |m|
        // and Sq^(a+b-c) Sq^c m needs a + b <= |m| + 2c <= |m| + a.
        for b in 1..=d.min(bound - d) {
            let inner_b = table.sq(d, i, b);
            for a in 1..2 * b {
                if a + b + d > bound {
                    break;
                }
                let target = d + a + b;
                let lhs = &mut lhs_acc[target as usize];
                lhs.clear();
                for &u in inner_b {
                    lhs.toggle_all(table.sq(d + b, u, a));
                }
                let rhs = &mut rhs_acc[target as usize];
                rhs.clear();
                for &(x, c) in &adem[b as usize][a as usize] {
                    for &u in table.sq(d, i, c) {
                        rhs.toggle_all(table.sq(d + c, u, x));
                    }
                }
                if lhs != rhs {
                    report.violations.push(AdemViolation {
                        monomial: m.clone(),
                        a,
                        b,
                        lhs: table.to_poly(target, &lhs.ones()),
                        rhs: table.to_poly(target, &rhs.ones()),
                    });
                }
            }
        }
    }

    for (index, r) in p.relations().iter().enumerate() {
        let lead: Poly = r.lead.clone().into();
        let degree = p.degree_of(&r.lead);
        for k in 1..=degree {
            if degree + k > bound {
                break;
            }
            let lead_image = p.apply_sq(k, &lead).expect("monomial is homogeneous");
            let tail_image = p.apply_sq(k, &r.tail).expect("relation is homogeneous");
            if lead_image != tail_image {
                report.ideal_violations.push(IdealViolation { relation: index, k, lead_image, tail_image });
            }
        }
    }
    report
}

/// For every monomial of degree at most `bound` divisible by two or more
/// leads, compares the complete reductions obtained from each first rewrite.
pub fn check_confluence(p: &Presentation, bound: u32) -> ConfluenceReport {
    let mut report = ConfluenceReport { bound, ..Default::default() };
    let rels = p.relations();
    let mut candidates: FxHashSet<Monomial> = FxHashSet::default();
    for i in 0..rels.len() {
        for j in i + 1..rels.len() {
            let lcm = rels[i].lead.lcm(&rels[j].lead);
            let ld = p.degree_of(&lcm);
            if ld > bound {
                continue;
            }
            for q in free_monomials(p.degrees(), bound - ld) {
                candidates.insert(lcm.mul(&q));
            }
        }
    }
    let mut candidates: Vec<Monomial> = candidates.into_iter().collect();
    candidates.sort_by(|a, b| p.compare(a, b));

    let mut nf = NormalForms::new(p);
    for m in candidates {
        let reductions: Vec<(usize, Poly)> = rels
            .iter()
            .enumerate()
            .filter_map(|(ri, r)| {
                let q = r.lead.quotient_of(&m)?;
                Some((ri, nf.poly(&r.tail.mul_monomial(&q))))
            })
            .collect();
        if reductions.windows(2).any(|w| w[0].1 != w[1].1) {
            report.divergences.push(Divergence { monomial: m, reductions });
        }
    }
    report
}

/// `Sq^|m| m = m^2` and `Sq^k m = 0` for `k > |m|`, on every basis monomial
/// with `2|m| <= bound`.
pub fn check_instability(p: &Presentation, bound: u32) -> InstabilityReport {
    let table = ActionTable::new(p, bound);
    check_instability_with(&table)
}

pub fn check_instability_with(table: &ActionTable<'_>) -> InstabilityReport {
    let p = table.presentation();
    let bound = table.bound();
    let mut report = InstabilityReport { bound, ..Default::default() };
    let mut nf = NormalForms::new(p);
    for (d, i, m) in table.basis().iter() {
        if 2 * d > bound {
            continue;
        }
        let got = table.to_poly(2 * d, table.sq(d, i, d));
        let expected = nf.monomial(&m.scale(2));
        if got != expected {
            report.violations.push(InstabilityViolation::TopSquare { monomial: m.clone(), got, expected });
        }
        for k in d + 1..=bound - d {
            let image = table.sq(d, i, k);
            if !image.is_empty() {
                report.violations.push(InstabilityViolation::AboveDegree {
                    monomial: m.clone(),
                    k,
                    got: table.to_poly(d + k, image),
                });
            }
        }
    }
    report
}

/// Number of normal-form monomials in each degree `0..=bound`.
pub fn poincare_series(p: &Presentation, bound: u32) -> Vec<u64> {
    GradedBasis::new(p, bound).dims()
}

/// Coefficients up to `t^bound` of `Π_i (1 - t^{p_i})^{-1} · Π_j (1 + t^{e_j})`.
pub fn product_series(polynomial_degrees: &[u32], exterior_degrees: &[u32], bound: u32) -> Vec<u64> {
    let n = bound as usize + 1;
    let mut c = vec![0u64; n];
    c[0] = 1;
    for &d in polynomial_degrees {
        let d = d as usize;
        for i in d..n {
            c[i] += c[i - d];
        }
    }
    for &d in exterior_degrees {
        let d = d as usize;
        for i in (d..n).rev() {
            c[i] += c[i - d];
        }
    }
    c
}
