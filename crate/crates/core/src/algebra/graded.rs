//! Degree-bounded tables over the normal-form basis, used by the sweeps in
//! [`super::checks`].

use rustc_hash::FxHashMap;

use super::poly::{Monomial, Poly};
use super::presentation::Presentation;

/// Normal-form monomials of degree at most `bound`, grouped by degree and
/// sorted largest first under the term order.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    bound: u32,
    by_degree: Vec<Vec<Monomial>>,
    index: FxHashMap<Monomial, u32>,
}

impl GradedBasis {
    pub fn new(p: &Presentation, bound: u32) -> Self {
        let mut by_degree = vec![Vec::new(); bound as usize + 1];
        let mut cur = Monomial::one(p.num_generators());
        enumerate(p, 0, 0, bound, &mut cur, &mut |m, d| by_degree[d as usize].push(m.clone()));
        let mut index = FxHashMap::default();
        for level in &mut by_degree {
            level.sort_by(|a, b| p.compare(b, a));
            for (i, m) in level.iter().enumerate() {
                index.insert(m.clone(), i as u32);
            }
        }
        Self { bound, by_degree, index }
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn degree(&self, d: u32) -> &[Monomial] {
        &self.by_degree[d as usize]
    }

    pub fn dim(&self, d: u32) -> usize {
        self.by_degree[d as usize].len()
    }

    pub fn dims(&self) -> Vec<u64> {
        self.by_degree.iter().map(|l| l.len() as u64).collect()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<u32> {
        self.index.get(m).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, &Monomial)> {
        self.by_degree
            .iter()
            .enumerate()
            .flat_map(|(d, level)| level.iter().enumerate().map(move |(i, m)| (d as u32, i as u32, m)))
    }
}

/// Depth-first enumeration of normal monomials, pruning as soon as a partial
/// monomial is divisible by a lead.
fn enumerate(
    p: &Presentation,
    g: usize,
    degree: u32,
    bound: u32,
    cur: &mut Monomial,
    visit: &mut dyn FnMut(&Monomial, u32),
) {
    if g == p.num_generators() {
        visit(cur, degree);
        return;
    }
    let step = p.degrees()[g];
    let mut e: u16 = 0;
    let mut d = degree;
    loop {
        *cur = cur.with_exponent(g, e);
        if !p.is_normal(cur) {
            break;
        }
        enumerate(p, g + 1, d, bound, cur, visit);
        d += step;
        if d > bound {
            break;
        }
        e += 1;
    }
    *cur = cur.with_exponent(g, 0);
}

/// All monomials of the free polynomial ring of degree at most `bound`.
pub fn free_monomials(degrees: &[u32], bound: u32) -> Vec<Monomial> {
    fn go(degrees: &[u32], g: usize, degree: u32, bound: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if g == degrees.len() {
            out.push(Monomial::from_exponents(cur));
            return;
        }
        let mut d = degree;
        let mut e = 0;
        while d <= bound {
            cur[g] = e;
            go(degrees, g + 1, d, bound, cur, out);
            d += degrees[g];
            e += 1;
        }
        cur[g] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; degrees.len()];
    go(degrees, 0, 0, bound, &mut cur, &mut out);
    out
}

/// Memoised normal forms of single monomials.
pub struct NormalForms<'a> {
    p: &'a Presentation,
    memo: FxHashMap<Monomial, Poly>,
}

impl<'a> NormalForms<'a> {
    pub fn new(p: &'a Presentation) -> Self {
        Self { p, memo: FxHashMap::default() }
    }

    pub fn monomial(&mut self, m: &Monomial) -> Poly {
        if self.p.is_normal(m) {
            return m.clone().into();
        }
        if let Some(p) = self.memo.get(m) {
            return p.clone();
        }
        let (r, q) = self
            .p
            .relations()
            .iter()
            .find_map(|r| Some((r, r.lead.quotient_of(m)?)))
            .expect("non-normal monomial has a dividing lead");
        let mut out = Poly::zero();
        for t in r.tail.terms() {
            out.add_assign(&self.monomial(&t.mul(&q)));
        }
        self.memo.insert(m.clone(), out.clone());
        out
    }

    pub fn poly(&mut self, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        for m in p.terms() {
            out.add_assign(&self.monomial(m));
        }
        out
    }
}

/// Dense GF(2) vector over one degree of a [`GradedBasis`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitVec(Vec<u64>);

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len.div_ceil(64)])
    }

    pub fn toggle(&mut self, i: u32) {
        self.0[(i / 64) as usize] ^= 1 << (i % 64);
    }

    pub fn toggle_all(&mut self, indices: &[u32]) {
        for &i in indices {
            self.toggle(i);
        }
    }

    pub fn clear(&mut self) {
        self.0.iter_mut().for_each(|w| *w = 0);
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn ones(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (wi, &w) in self.0.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros();
                out.push(wi as u32 * 64 + b);
                w &= w - 1;
            }
        }
        out
    }
}

/// `Sq^k m` for every basis monomial `m` and every `k` with `|m| + k <= bound`,
/// as sorted index lists into the basis of degree `|m| + k`.
///
/// Built by the Cartan formula `Sq(g·m') = Sq(g)·Sq(m')` with `g` the last
/// generator dividing `m`, reducing each product to normal form. This agrees
/// with [`Presentation::apply_sq`] whenever the relation ideal is closed under
/// the Steenrod operations.
pub struct ActionTable<'a> {
    p: &'a Presentation,
    basis: GradedBasis,
    // sq[d][i][k]
    sq: Vec<Vec<Vec<Box<[u32]>>>>,
}

impl<'a> ActionTable<'a> {
    pub fn new(p: &'a Presentation, bound: u32) -> Self {
        let basis = GradedBasis::new(p, bound);
        let mut nf = NormalForms::new(p);
        let mut sq: Vec<Vec<Vec<Box<[u32]>>>> = Vec::with_capacity(bound as usize + 1);
        let mut scratch: Vec<BitVec> = (0..=bound).map(|d| BitVec::zeros(basis.dim(d))).collect();
        for d in 0..=bound {
            let mut level = Vec::with_capacity(basis.dim(d));
            for m in basis.degree(d) {
                let mut row: Vec<Box<[u32]>> = Vec::with_capacity((bound - d) as usize + 1);
                let Some(g) = m.support().last() else {
                    row.push(vec![0].into_boxed_slice());
                    row.resize((bound - d) as usize + 1, Box::default());
                    level.push(row);
                    continue;
                };
                let gd = p.degrees()[g];
                let rest = m.with_exponent(g, m.exponent(g) - 1);
                let rest_d = d - gd;
                let rest_i = basis.index_of(&rest).expect("divisor of a normal monomial is normal");
                for k in 0..=(bound - d) {
                    let target = &mut scratch[(d + k) as usize];
                    target.clear();
                    for i in 0..=k.min(gd) {
                        let sg = p.action_on_generator(g, i);
                        if sg.is_zero() {
                            continue;
                        }
                        let inner = &sq[rest_d as usize][rest_i as usize][(k - i) as usize];
                        let inner_degree = rest_d + k - i;
                        for &u in inner.iter() {
                            let um = &basis.degree(inner_degree)[u as usize];
                            for w in sg.terms() {
                                let prod = w.mul(um);
                                if let Some(ix) = basis.index_of(&prod) {
                                    target.toggle(ix);
                                } else {
                                    for t in nf.monomial(&prod).terms() {
                                        target.toggle(basis.index_of(t).expect("normal form within bound"));
                                    }
                                }
                            }
                        }
                    }
                    row.push(target.ones().into_boxed_slice());
                }
                level.push(row);
            }
            sq.push(level);
        }
        Self { p, basis, sq }
    }

    pub fn presentation(&self) -> &Presentation {
        self.p
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn bound(&self) -> u32 {
        self.basis.bound()
    }

    /// `Sq^k` of basis monomial `i` of degree `d`; empty when `d + k` exceeds
    /// the bound.
    pub fn sq(&self, d: u32, i: u32, k: u32) -> &[u32] {
        self.sq[d as usize][i as usize].get(k as usize).map(|b| &b[..]).unwrap_or(&[])
    }

    pub fn to_poly(&self, d: u32, indices: &[u32]) -> Poly {
        indices.iter().map(|&i| self.basis.degree(d)[i as usize].clone()).collect()
    }
}
