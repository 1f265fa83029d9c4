//! Sparse polynomials over GF(2).

use std::hash::{Hash, Hasher};

use rustc_hash::FxHashSet;
use smallvec::SmallVec;

/// An exponent vector indexed by generator position.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u16; 12]>);

impl Monomial {
    pub fn one(vars: usize) -> Self {
        Self(SmallVec::from_elem(0, vars))
    }

    pub fn from_exponents(exponents: &[u16]) -> Self {
        Self(SmallVec::from_slice(exponents))
    }

    pub fn generator(vars: usize, index: usize, exponent: u16) -> Self {
        let mut m = Self::one(vars);
        m.0[index] = exponent;
        m
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn vars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self, degrees: &[u32]) -> u32 {
        self.0.iter().zip(degrees).map(|(&e, &d)| e as u32 * d).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Multiplies every exponent by `factor` (the Frobenius map when it is a
    /// power of two).
    pub fn scale(&self, factor: u16) -> Monomial {
        Monomial(self.0.iter().map(|e| e * factor).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other).then(|| Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn exponent(&self, index: usize) -> u16 {
        self.0[index]
    }

    pub fn with_exponent(&self, index: usize, exponent: u16) -> Monomial {
        let mut m = self.clone();
        m.0[index] = exponent;
        m
    }

    /// Generator indices with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    /// Drops the listed variable positions (their exponents must be zero).
    pub fn remove_vars(&self, removed: &[usize]) -> Monomial {
        Monomial(self.0.iter().enumerate().filter(|(i, _)| !removed.contains(i)).map(|(_, &e)| e).collect())
    }

    /// Re-embeds into `vars` variables, placing position `i` at `map[i]`.
    pub fn embed(&self, vars: usize, map: &[usize]) -> Monomial {
        let mut m = Monomial::one(vars);
        for (i, &e) in self.0.iter().enumerate() {
            m.0[map[i]] += e;
        }
        m
    }
}

/// A polynomial over GF(2): a set of monomials.
#[derive(Clone, Default, Debug)]
pub struct Poly(FxHashSet<Monomial>);

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let mut terms: Vec<&Monomial> = self.0.iter().collect();
        terms.sort();
        terms.hash(state);
    }
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one(vars: usize) -> Self {
        Monomial::one(vars).into()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    #[allow(clippy::len_without_is_empty)] // `is_zero`
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.0.iter()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.0.contains(m)
    }

    /// Adds a monomial mod 2.
    pub fn toggle(&mut self, m: Monomial) {
        if !self.0.remove(&m) {
            self.0.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for m in &other.0 {
            if !self.0.remove(m) {
                self.0.insert(m.clone());
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for a in &self.0 {
            for b in &other.0 {
                out.toggle(a.mul(b));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        self.0.iter().map(|a| a.mul(m)).collect()
    }

    /// Frobenius `p ↦ p^(2^j)`.
    pub fn frobenius(&self, j: u32) -> Poly {
        let factor = 1u16 << j;
        // In characteristic 2 the cross terms vanish and distinct monomials
        // stay distinct.
        Poly(self.0.iter().map(|m| m.scale(factor)).collect())
    }

    pub fn pow(&self, mut e: u32, vars: usize) -> Poly {
        let mut out = Poly::one(vars);
        let mut j = 0;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&self.frobenius(j));
            }
            e >>= 1;
            j += 1;
        }
        out
    }

    /// `Some(d)` if every term has degree `d`; `None` for zero or mixed input.
    pub fn degree(&self, degrees: &[u32]) -> Option<u32> {
        let mut it = self.0.iter().map(|m| m.degree(degrees));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self, degrees: &[u32]) -> bool {
        self.is_zero() || self.degree(degrees).is_some()
    }

    /// Applies a ring homomorphism given by the images of the variables.
    pub fn substitute(&self, images: &[Poly], target_vars: usize) -> Poly {
        let mut out = Poly::zero();
        for m in &self.0 {
            let mut term = Poly::one(target_vars);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term = term.mul(&images[i].pow(e as u32, target_vars));
                }
            }
            out.add_assign(&term);
        }
        out
    }
}

impl From<Monomial> for Poly {
    fn from(m: Monomial) -> Self {
        let mut p = Poly::zero();
        p.0.insert(m);
        p
    }
}

impl FromIterator<Monomial> for Poly {
    fn from_iter<I: IntoIterator<Item = Monomial>>(iter: I) -> Self {
        let mut p = Poly::zero();
        for m in iter {
            p.toggle(m);
        }
        p
    }
}
