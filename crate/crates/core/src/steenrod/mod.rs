//! The mod 2 Steenrod algebra in the admissible (Serre-Cartan) basis.
//!
//! A composition `Sq^{i_1} ... Sq^{i_k}` acts by applying `Sq^{i_k}` first.
//! It is *admissible* when `i_j >= 2 i_{j+1}` for every `j`; admissible
//! monomials form a basis, and [`adem_reduce`] rewrites any element into it.

pub mod oracle;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SteenrodError {
    #[error("Sq exponents must be positive")]
    ZeroExponent,
    #[error("{0} is not admissible")]
    NotAdmissible(SqMonomial),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
}

/// `binom(m, n) mod 2` by Lucas' theorem: odd iff the bits of `n` are a subset
/// of the bits of `m`.
pub fn binom_mod2(m: u64, n: u64) -> bool {
    n & !m == 0
}

/// A composition of Steenrod squares. The empty composition is the identity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct SqMonomial(Vec<u32>);

impl SqMonomial {
    pub fn new(exponents: Vec<u32>) -> Result<Self, SteenrodError> {
        if exponents.contains(&0) {
            return Err(SteenrodError::ZeroExponent);
        }
        Ok(Self(exponents))
    }

    pub fn identity() -> Self {
        Self(Vec::new())
    }

    /// `Sq^k`; `Sq^0` is the identity.
    pub fn sq(k: u32) -> Self {
        if k == 0 {
            Self::identity()
        } else {
            Self(vec![k])
        }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_admissible(&self) -> bool {
        self.first_inadmissible().is_none()
    }

    fn first_inadmissible(&self) -> Option<usize> {
        self.0.windows(2).position(|w| w[0] < 2 * w[1])
    }

    /// `i_1 - (i_2 + ... + i_k)`. Only defined for admissible monomials.
    pub fn excess(&self) -> Result<u32, SteenrodError> {
        if !self.is_admissible() {
            return Err(SteenrodError::NotAdmissible(self.clone()));
        }
        Ok(match self.0.split_first() {
            None => 0,
            Some((first, rest)) => first - rest.iter().sum::<u32>(),
        })
    }

    /// `Σ_j j·i_j` (1-based). Every Adem rewrite strictly lowers it while
    /// keeping the degree fixed, which bounds the length of any reduction.
    pub fn moment(&self) -> u64 {
        self.0.iter().enumerate().map(|(j, &i)| (j as u64 + 1) * i as u64).sum()
    }

    fn concat(&self, other: &SqMonomial) -> SqMonomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        SqMonomial(v)
    }
}

impl fmt::Display for SqMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (n, i) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, " ")?;
            }
            write!(f, "Sq{i}")?;
        }
        Ok(())
    }
}

/// A GF(2) linear combination of [`SqMonomial`]s.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct SteenrodElement(BTreeSet<SqMonomial>);

impl SteenrodElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        SqMonomial::identity().into()
    }

    pub fn sq(k: u32) -> Self {
        SqMonomial::sq(k).into()
    }

    /// The composition `Sq^{exponents[0]} Sq^{exponents[1]} ...`, with zero
    /// exponents dropped.
    pub fn composite(exponents: &[u32]) -> Self {
        SqMonomial(exponents.iter().copied().filter(|&i| i > 0).collect()).into()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = &SqMonomial> {
        self.0.iter()
    }

    #[allow(clippy::len_without_is_empty)] // `is_zero`
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Adds a monomial mod 2.
    pub fn toggle(&mut self, m: SqMonomial) {
        if !self.0.remove(&m) {
            self.0.insert(m);
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.0.iter().map(SqMonomial::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// The common degree of all terms; `None` for zero or mixed-degree elements.
    pub fn degree(&self) -> Option<u32> {
        if self.is_homogeneous() {
            self.0.iter().next().map(SqMonomial::degree)
        } else {
            None
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.0.iter().all(SqMonomial::is_admissible)
    }
}

impl From<SqMonomial> for SteenrodElement {
    fn from(m: SqMonomial) -> Self {
        let mut set = BTreeSet::new();
        set.insert(m);
        Self(set)
    }
}

impl FromIterator<SqMonomial> for SteenrodElement {
    fn from_iter<I: IntoIterator<Item = SqMonomial>>(iter: I) -> Self {
        let mut e = Self::zero();
        for m in iter {
            e.toggle(m);
        }
        e
    }
}

impl std::ops::Add for &SteenrodElement {
    type Output = SteenrodElement;

    fn add(self, rhs: &SteenrodElement) -> SteenrodElement {
        SteenrodElement(self.0.symmetric_difference(&rhs.0).cloned().collect())
    }
}

impl fmt::Display for SteenrodElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (n, m) in self.0.iter().rev().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for SteenrodElement {
    type Err = SteenrodError;

    /// Whitespace-separated `Sq<k>` factors, sums joined by `+`, `1` for the
    /// identity and `0` for the empty sum.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |column: usize, message: String| SteenrodError::Parse { column, message };
        if s.trim().is_empty() {
            return Err(err(1, "empty expression".into()));
        }
        let mut out = SteenrodElement::zero();
        let mut offset = 0;
        for summand in s.split('+') {
            let start = offset;
            offset += summand.len() + 1;
            let mut factors = Vec::new();
            let mut constant = None;
            let mut column = start;
            let mut rest = summand;
            while !rest.is_empty() {
                let trimmed = rest.trim_start();
                column += rest.len() - trimmed.len();
                if trimmed.is_empty() {
                    break;
                }
                let word_len = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
                let word = &trimmed[..word_len];
                match word {
                    "1" | "0" => {
                        if constant.is_some() || !factors.is_empty() {
                            return Err(err(column + 1, format!("unexpected `{word}`")));
                        }
                        constant = Some(word == "1");
                    }
                    _ => {
                        if constant.is_some() {
                            return Err(err(column + 1, format!("unexpected `{word}`")));
                        }
                        let k = word
                            .strip_prefix("Sq")
                            .and_then(|d| {
                                (!d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
                                    .then(|| d.parse::<u32>().ok())
                                    .flatten()
                            })
                            .ok_or_else(|| err(column + 1, format!("expected `Sq<k>`, found `{word}`")))?;
                        factors.push(k);
                    }
                }
                column += word_len;
                rest = &trimmed[word_len..];
            }
            match constant {
                Some(false) => {}
                Some(true) => out.toggle(SqMonomial::identity()),
                None if factors.is_empty() => {
                    return Err(err(start + 1, "empty summand".into()));
                }
                None => {
                    factors.retain(|&k| k > 0);
                    out.toggle(SqMonomial(factors));
                }
            }
        }
        Ok(out)
    }
}

/// The Adem relation for an inadmissible pair `Sq^a Sq^b` (`0 < a < 2b`):
/// the list of admissible `(a + b - c, c)` with odd coefficient
/// `binom(b - c - 1, a - 2c)`.
pub fn adem_pair(a: u32, b: u32) -> Vec<(u32, u32)> {
    debug_assert!(a > 0 && a < 2 * b);
    (0..=a / 2).filter(|&c| binom_mod2((b - c - 1) as u64, (a - 2 * c) as u64)).map(|c| (a + b - c, c)).collect()
}

/// Rewrites `e` into the admissible basis by repeatedly expanding the leftmost
/// inadmissible adjacent pair. Terminates because each expansion strictly
/// lowers [`SqMonomial::moment`] at fixed degree.
pub fn adem_reduce(e: &SteenrodElement) -> SteenrodElement {
    let mut pending: BTreeSet<SqMonomial> = e.0.clone();
    let mut out = SteenrodElement::zero();
    while let Some(m) = pending.pop_last() {
        let Some(j) = m.first_inadmissible() else {
            out.toggle(m);
            continue;
        };
        let (a, b) = (m.0[j], m.0[j + 1]);
        for (x, c) in adem_pair(a, b) {
            let mut v = Vec::with_capacity(m.0.len());
            v.extend_from_slice(&m.0[..j]);
            v.push(x);
            if c > 0 {
                v.push(c);
            }
            v.extend_from_slice(&m.0[j + 2..]);
            let t = SqMonomial(v);
            if !pending.remove(&t) {
                pending.insert(t);
            }
        }
    }
    out
}

/// Composition in the Steenrod algebra, reduced to the admissible basis.
pub fn multiply(a: &SteenrodElement, b: &SteenrodElement) -> SteenrodElement {
    let product: SteenrodElement = a.terms().flat_map(|x| b.terms().map(move |y| x.concat(y))).collect();
    adem_reduce(&product)
}
