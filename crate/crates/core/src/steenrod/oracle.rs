//! Action of the Steenrod algebra on `GF(2)[t_1, ..., t_n]` with every `t_i`
//! in degree 1.
//!
//! Only the defining action `Sq^0 t = t`, `Sq^1 t = t^2`, `Sq^k t = 0` for
//! `k > 1` and the Cartan formula are used, so this is independent of the Adem
//! relations and serves as a check on [`super::adem_reduce`]. The action is
//! faithful in a range: an element of degree `k` is zero iff it kills every
//! product `t_1 ... t_d` with `d <= k`.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{SqMonomial, SteenrodElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("result needs degree {needed} but truncation degree is {limit}")]
    Truncated { needed: u32, limit: u32 },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
}

/// A polynomial over GF(2) in degree-1 variables, stored as a set of exponent
/// vectors of a fixed length.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TPoly {
    vars: usize,
    terms: BTreeSet<Vec<u32>>,
}

impl TPoly {
    pub fn zero(vars: usize) -> Self {
        Self { vars, terms: BTreeSet::new() }
    }

    pub fn monomial(exponents: Vec<u32>) -> Self {
        let mut p = Self::zero(exponents.len());
        p.terms.insert(exponents);
        p
    }

    /// `t_1 t_2 ... t_d`.
    pub fn product_of_variables(d: usize) -> Self {
        Self::monomial(vec![1; d])
    }

    pub fn variable(vars: usize, i: usize) -> Self {
        let mut e = vec![0; vars];
        e[i] = 1;
        Self::monomial(e)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.terms.iter()
    }

    pub fn toggle(&mut self, m: Vec<u32>) {
        debug_assert_eq!(m.len(), self.vars);
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &TPoly) {
        for m in &other.terms {
            self.toggle(m.clone());
        }
    }

    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.iter().map(|m| m.iter().sum::<u32>());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    fn is_homogeneous(&self) -> bool {
        self.terms.is_empty() || self.degree().is_some()
    }
}

/// Coefficients of `(t + t^2)^e / t^e = (1 + t)^e` mod 2, built by repeated
/// multiplication rather than a binomial formula.
struct PowerTable(BTreeMap<u32, Vec<bool>>);

impl PowerTable {
    fn new() -> Self {
        Self(BTreeMap::new())
    }

    fn row(&mut self, e: u32) -> &[bool] {
        self.0.entry(e).or_insert_with(|| {
            let mut row = vec![true];
            for _ in 0..e {
                let mut next = vec![false; row.len() + 1];
                for (i, &c) in row.iter().enumerate() {
                    next[i] ^= c;
                    next[i + 1] ^= c;
                }
                row = next;
            }
            row
        })
    }
}

fn sq_on_monomial(k: u32, m: &[u32], powers: &mut PowerTable, out: &mut TPoly) {
    // Cartan formula, distributing k over the variables.
    let rows: Vec<Vec<bool>> = m.iter().map(|&e| powers.row(e).to_vec()).collect();
    let mut partial = vec![0u32; m.len()];
    fn go(i: usize, left: u32, m: &[u32], rows: &[Vec<bool>], partial: &mut Vec<u32>, out: &mut TPoly) {
        if i == m.len() {
            if left == 0 {
                out.toggle(m.iter().zip(partial.iter()).map(|(e, j)| e + j).collect());
            }
            return;
        }
        let max = left.min(m[i]);
        for j in 0..=max {
            if rows[i][j as usize] {
                partial[i] = j;
                go(i + 1, left - j, m, rows, partial, out);
            }
        }
        partial[i] = 0;
    }
    go(0, k, m, &rows, &mut partial, out);
}

fn sq_on_poly(k: u32, p: &TPoly, powers: &mut PowerTable) -> TPoly {
    let mut out = TPoly::zero(p.vars);
    for m in &p.terms {
        sq_on_monomial(k, m, powers, &mut out);
    }
    out
}

fn apply_monomial(op: &SqMonomial, p: &TPoly, max_degree: u32, powers: &mut PowerTable) -> Result<TPoly, OracleError> {
    let mut cur = p.clone();
    let mut degree = p.degree().unwrap_or(0);
    for &k in op.exponents().iter().rev() {
        degree += k;
        if degree > max_degree && !cur.is_zero() {
            return Err(OracleError::Truncated { needed: degree, limit: max_degree });
        }
        cur = sq_on_poly(k, &cur, powers);
    }
    Ok(cur)
}

/// The action of `e` on a homogeneous polynomial `p`. Any intermediate or final
/// result above `max_degree` is reported as [`OracleError::Truncated`].
pub fn oracle_apply(e: &SteenrodElement, p: &TPoly, max_degree: u32) -> Result<TPoly, OracleError> {
    if !p.is_homogeneous() {
        return Err(OracleError::NotHomogeneous);
    }
    let mut powers = PowerTable::new();
    let mut out = TPoly::zero(p.vars);
    for m in e.terms() {
        out.add_assign(&apply_monomial(m, p, max_degree, &mut powers)?);
    }
    Ok(out)
}

/// Whether `e` acts as zero on `t_1 ... t_d` for every `d <= max_vars`.
pub fn acts_trivially(e: &SteenrodElement, max_vars: usize) -> Result<bool, OracleError> {
    let top = e.terms().map(SqMonomial::degree).max().unwrap_or(0);
    for d in 0..=max_vars {
        let p = TPoly::product_of_variables(d);
        if !oracle_apply(e, &p, d as u32 + top)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
