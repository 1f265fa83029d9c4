//! Presentations of unstable algebras: generators, Sq tables, square relations.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rustc_hash::{FxHashMap, FxHashSet};
use thiserror::Error;

use super::poly::{Monomial, Poly};
use crate::steenrod::binom_mod2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{0}` must have positive degree")]
    ZeroDegree(String),
    #[error("Sq^{k} on `{generator}`: k must be a power of two")]
    NotPowerOfTwo { generator: String, k: u32 },
    #[error("Sq^{k} on `{generator}` is forced by instability and cannot be tabulated")]
    ForcedEntry { generator: String, k: u32 },
    #[error("Sq^{k} {generator}: degree mismatch: expected {expected}, got {got}")]
    TableDegree { generator: String, k: u32, expected: u32, got: u32 },
    #[error("relation {index}: lead must be a non-constant monomial")]
    ConstantLead { index: usize },
    #[error("relation {index}: not homogeneous (lead degree {expected}, tail degree {got})")]
    RelationDegree { index: usize, expected: u32, got: u32 },
    #[error("relation {index}: lead divides a tail monomial")]
    LeadDividesTail { index: usize },
    #[error("relation {index}: tail is not below the lead in the term order")]
    RelationOrder { index: usize },
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("element has degree {degree}, beyond the checked bound {bound}")]
    BeyondBound { degree: u32, bound: u32 },
    #[error("monomial has {got} variables, presentation has {expected}")]
    VariableCount { expected: usize, got: usize },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Self { name: name.into(), degree }
    }
}

/// Tabulated values `Sq^k g` for `k` a power of two with `0 < k < |g|`.
/// Absent entries are zero; `k = 0`, `k = |g|` and `k > |g|` are forced.
#[derive(Clone, Default, Debug, PartialEq, Eq)]
pub struct SqTable(BTreeMap<(usize, u32), Poly>);

impl SqTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Zero values are not stored, so an explicit zero and an absent entry
    /// compare equal.
    pub fn insert(&mut self, generator: usize, k: u32, value: Poly) -> Option<Poly> {
        if value.is_zero() {
            self.0.remove(&(generator, k))
        } else {
            self.0.insert((generator, k), value)
        }
    }

    pub fn get(&self, generator: usize, k: u32) -> Option<&Poly> {
        self.0.get(&(generator, k))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32, &Poly)> {
        self.0.iter().map(|(&(g, k), p)| (g, k, p))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `lead = tail`, used as the rewrite rule `lead → tail`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Relation {
    pub lead: Monomial,
    pub tail: Poly,
}

/// Powers of two strictly between 0 and `degree`.
pub fn table_powers(degree: u32) -> impl Iterator<Item = u32> {
    (0..32).map(|j| 1u32 << j).take_while(move |&k| k < degree)
}

/// A graded-commutative polynomial algebra over GF(2), possibly modulo square
/// relations, with a Steenrod action determined by its [`SqTable`].
///
/// Monomials are ordered by (weight, degree, exponent vector), where a
/// generator's weight is its degree if it occurs in some relation lead and 0
/// otherwise; ties on the exponent vector favour earlier generators. Every
/// relation tail must lie strictly below its lead, so rewriting terminates.
#[derive(Clone, Debug)]
pub struct Presentation {
    name: String,
    generators: Vec<Generator>,
    degrees: Vec<u32>,
    index: FxHashMap<String, usize>,
    table: SqTable,
    relations: Vec<Relation>,
    weights: Vec<u32>,
    // action[g][k] = Sq^k g in normal form, for 0 <= k <= |g|.
    action: Vec<Vec<Poly>>,
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.generators == other.generators
            && self.table == other.table
            && self.relations == other.relations
    }
}

impl Presentation {
    pub fn new(
        name: impl Into<String>,
        generators: Vec<Generator>,
        table: SqTable,
        relations: Vec<Relation>,
    ) -> Result<Self, AlgebraError> {
        let mut index = FxHashMap::default();
        for (i, g) in generators.iter().enumerate() {
            if g.degree == 0 {
                return Err(AlgebraError::ZeroDegree(g.name.clone()));
            }
            if index.insert(g.name.clone(), i).is_some() {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
        }
        let degrees: Vec<u32> = generators.iter().map(|g| g.degree).collect();
        let vars = generators.len();
        let check_vars = |m: &Monomial| {
            if m.vars() != vars {
                Err(AlgebraError::VariableCount { expected: vars, got: m.vars() })
            } else {
                Ok(())
            }
        };

        for (g, k, value) in table.iter() {
            let gen = &generators[g];
            if !k.is_power_of_two() {
                return Err(AlgebraError::NotPowerOfTwo { generator: gen.name.clone(), k });
            }
            if k >= gen.degree {
                return Err(AlgebraError::ForcedEntry { generator: gen.name.clone(), k });
            }
            for m in value.terms() {
                check_vars(m)?;
                let got = m.degree(&degrees);
                if got != gen.degree + k {
                    return Err(AlgebraError::TableDegree {
                        generator: gen.name.clone(),
                        k,
                        expected: gen.degree + k,
                        got,
                    });
                }
            }
        }

        let mut weights = vec![0; vars];
        for (i, r) in relations.iter().enumerate() {
            check_vars(&r.lead)?;
            if r.lead.is_one() {
                return Err(AlgebraError::ConstantLead { index: i });
            }
            for g in r.lead.support() {
                weights[g] = degrees[g];
            }
        }

        let mut p =
            Self { name: name.into(), generators, degrees, index, table, relations, weights, action: Vec::new() };

        for (i, r) in p.relations.iter().enumerate() {
            let expected = r.lead.degree(&p.degrees);
            for m in r.tail.terms() {
                check_vars(m)?;
                let got = m.degree(&p.degrees);
                if got != expected {
                    return Err(AlgebraError::RelationDegree { index: i, expected, got });
                }
                if r.lead.divides(m) {
                    return Err(AlgebraError::LeadDividesTail { index: i });
                }
                if p.compare(m, &r.lead) != Ordering::Less {
                    return Err(AlgebraError::RelationOrder { index: i });
                }
            }
        }

        p.action = p.compute_action();
        Ok(p)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn table(&self) -> &SqTable {
        &self.table
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn is_polynomial(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn one(&self) -> Poly {
        Poly::one(self.num_generators())
    }

    pub fn generator(&self, i: usize) -> Poly {
        Monomial::generator(self.num_generators(), i, 1).into()
    }

    /// Tabulated powers of two that were left out and therefore act as zero.
    pub fn defaulted_entries(&self) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        for (g, gen) in self.generators.iter().enumerate() {
            for k in table_powers(gen.degree) {
                if self.table.get(g, k).is_none() {
                    out.push((g, k));
                }
            }
        }
        out
    }

    pub fn degree_of(&self, m: &Monomial) -> u32 {
        m.degree(&self.degrees)
    }

    fn weight(&self, m: &Monomial) -> u32 {
        m.degree(&self.weights)
    }

    /// The term order.
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.weight(a)
            .cmp(&self.weight(b))
            .then_with(|| self.degree_of(a).cmp(&self.degree_of(b)))
            .then_with(|| a.exponents().cmp(b.exponents()))
    }

    /// Terms of `p`, largest first.
    pub fn sorted_terms<'a>(&self, p: &'a Poly) -> Vec<&'a Monomial> {
        let mut terms: Vec<&Monomial> = p.terms().collect();
        terms.sort_by(|a, b| self.compare(b, a));
        terms
    }

    pub fn is_normal(&self, m: &Monomial) -> bool {
        !self.relations.iter().any(|r| r.lead.divides(m))
    }

    /// Rewrites with `lead → tail` (first applicable relation) until no lead
    /// divides any term.
    pub fn normal_form(&self, p: &Poly) -> Poly {
        if self.relations.is_empty() {
            return p.clone();
        }
        let mut out = Poly::zero();
        let mut pending: FxHashSet<Monomial> = p.terms().cloned().collect();
        while let Some(m) = pending.iter().next().cloned() {
            pending.remove(&m);
            match self.relations.iter().find_map(|r| Some((r, r.lead.quotient_of(&m)?))) {
                None => out.toggle(m),
                Some((r, q)) => {
                    for t in r.tail.terms() {
                        let n = t.mul(&q);
                        if !pending.remove(&n) {
                            pending.insert(n);
                        }
                    }
                }
            }
        }
        out
    }

    /// [`Self::normal_form`] restricted to elements of degree at most `bound`,
    /// the range in which confluence has been checked.
    pub fn normal_form_within(&self, p: &Poly, bound: u32) -> Result<Poly, AlgebraError> {
        for m in p.terms() {
            let degree = self.degree_of(m);
            if degree > bound {
                return Err(AlgebraError::BeyondBound { degree, bound });
            }
        }
        Ok(self.normal_form(p))
    }

    /// `Sq^k g` for a generator, for any `k`.
    pub fn action_on_generator(&self, g: usize, k: u32) -> Poly {
        self.action[g].get(k as usize).cloned().unwrap_or_default()
    }

    /// `Sq^k e` for homogeneous `e`, in normal form.
    pub fn apply_sq(&self, k: u32, e: &Poly) -> Result<Poly, AlgebraError> {
        if !e.is_homogeneous(&self.degrees) {
            return Err(AlgebraError::NotHomogeneous);
        }
        Ok(self.normal_form(&self.sq_raw(k, e)))
    }

    /// `Σ_k Sq^k e`, the total square.
    pub fn total_square(&self, e: &Poly) -> Poly {
        let top = e.terms().map(|m| self.degree_of(m)).max().unwrap_or(0);
        let mut out = Poly::zero();
        for k in 0..=top {
            out.add_assign(&self.sq_raw(k, e));
        }
        self.normal_form(&out)
    }

    /// `Sq^k` of each term by the Cartan formula, without the final reduction.
    fn sq_raw(&self, k: u32, e: &Poly) -> Poly {
        let mut out = Poly::zero();
        for m in e.terms() {
            out.add_assign(&self.sq_monomial_raw(k, m, &self.action));
        }
        out
    }

    /// Cartan formula over the factors `g^(2^j)` of `m`, for which
    /// `Sq^(i·2^j) g^(2^j) = (Sq^i g)^(2^j)` and the other operations vanish.
    fn sq_monomial_raw(&self, k: u32, m: &Monomial, action: &[Vec<Poly>]) -> Poly {
        let vars = self.num_generators();
        let k = k as usize;
        let mut acc: Vec<Poly> = vec![Poly::zero(); k + 1];
        acc[0] = Poly::one(vars);
        for (g, &e) in m.exponents().iter().enumerate() {
            let mut j = 0;
            let mut e = e;
            while e > 0 {
                if e & 1 == 1 {
                    let step = 1usize << j;
                    let mut next: Vec<Poly> = vec![Poly::zero(); k + 1];
                    for (d, a) in acc.iter().enumerate() {
                        if a.is_zero() {
                            continue;
                        }
                        for (s, piece) in action[g].iter().enumerate() {
                            let t = d + s * step;
                            if t > k {
                                break;
                            }
                            if piece.is_zero() {
                                continue;
                            }
                            let piece = if j == 0 { piece.clone() } else { piece.frobenius(j) };
                            next[t].add_assign(&a.mul(&piece));
                        }
                    }
                    acc = next;
                }
                e >>= 1;
                j += 1;
            }
        }
        acc.swap_remove(k)
    }

    /// Extends the table to every `Sq^k g`, `0 <= k <= |g|`.
    ///
    /// For `k` not a power of two, with `b` the largest power of two below
    /// `k`, the Adem relation for `Sq^(k-b) Sq^b` has leading coefficient
    /// `binom(b-1, k-b) = 1`, giving
    /// `Sq^k = Sq^(k-b) Sq^b + Σ_{c>=1} binom(b-c-1, k-b-2c) Sq^(k-c) Sq^c`,
    /// where every operation on the right has degree below `k`.
    fn compute_action(&self) -> Vec<Vec<Poly>> {
        let vars = self.num_generators();
        let mut action: Vec<Vec<Poly>> = self
            .generators
            .iter()
            .enumerate()
            .map(|(g, gen)| {
                let mut row = vec![Poly::zero(); gen.degree as usize + 1];
                row[0] = self.generator(g);
                row[gen.degree as usize] = self.normal_form(&Monomial::generator(vars, g, 2).into());
                row
            })
            .collect();
        let max = self.max_generator_degree();
        for k in 1..max {
            for g in 0..vars {
                if k >= self.degrees[g] {
                    continue;
                }
                let value = if k.is_power_of_two() {
                    self.table.get(g, k).map(|p| self.normal_form(p)).unwrap_or_default()
                } else {
                    let b = 1u32 << (31 - k.leading_zeros());
                    let a = k - b;
                    let mut raw = Poly::zero();
                    let first = action[g][b as usize].clone();
                    for t in first.terms() {
                        raw.add_assign(&self.sq_monomial_raw(a, t, &action));
                    }
                    for c in 1..=a / 2 {
                        if binom_mod2((b - c - 1) as u64, (a - 2 * c) as u64) {
                            let inner = action[g][c as usize].clone();
                            for t in inner.terms() {
                                raw.add_assign(&self.sq_monomial_raw(k - c, t, &action));
                            }
                        }
                    }
                    self.normal_form(&raw)
                };
                action[g][k as usize] = value;
            }
        }
        action
    }
}
