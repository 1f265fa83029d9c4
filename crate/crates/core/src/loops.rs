//! Free loop space cohomology from a polynomial presentation.
//!
//! For `H^*(X) = GF(2)[x_1, ..., x_l]` with a section commuting with the
//! Steenrod operations, `H^*(LX)` is free over `GF(2)[v_1, ..., v_l]`
//! (`v_i = e^*(x_i)`) on the square-free monomials in `y_i = σ(x_i)`, where
//! `|y_i| = |x_i| - 1` and σ is a derivation
//! (`σ(xy) = σ(x) e^*(y) + e^*(x) σ(y)`) commuting with every `Sq^k`.
//! Squares follow from instability: `y^2 = Sq^{|y|} y = σ(Sq^{|y|} x)`.
//!
//! The same derivation applies to any self-map φ acting trivially on
//! mod 2 cohomology once such a section exists; that hypothesis is an input
//! assumption and is not checked here.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::checks::{check_adem_coherence_with, check_confluence, product_series};
use crate::algebra::graded::ActionTable;
use crate::algebra::{
    table_powers, AlgebraError, CoherenceReport, ConfluenceReport, Generator, Monomial, Poly, Presentation, Relation,
    SqTable,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeriveError {
    #[error("input must be polynomial (it has {0} relations)")]
    NotPolynomial(usize),
    #[error("generator `{0}` has degree 1; its suspension would have degree 0")]
    DegreeOne(String),
    #[error("generated name `{0}` is used twice; add a loopnames line")]
    NameCollision(String),
    #[error("substituting `{generator}` is not homogeneous: expected degree {expected}, got {got}")]
    Inhomogeneous { generator: String, expected: u32, got: u32 },
    #[error("eliminating `{0}` left a relation without its leading term")]
    LeadLost(String),
    #[error("sigma needs a homogeneous element of positive degree")]
    SigmaDegree,
    #[error("sigma is defined on the base alphabet only ({expected} variables, got {got})")]
    NotBaseElement { expected: usize, got: usize },
    #[error("base presentation is not Adem-coherent ({} violations)", .0.violations.len() + .0.ideal_violations.len())]
    BaseIncoherent(Box<CoherenceReport>),
    #[error("derived presentation fails its self-check ({} coherence violations, {} divergences)",
        .coherence.violations.len() + .coherence.ideal_violations.len(), .confluence.divergences.len())]
    SelfCheck { coherence: Box<CoherenceReport>, confluence: Box<ConfluenceReport> },
    #[error("invalid loop presentation: {0}")]
    InvalidRoles(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Output names for the images of a base generator: `(v-name, y-name)`.
/// Unlisted generators of degree `d` get `v<d>` and `y<d-1>`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoopNames(BTreeMap<String, (String, String)>);

impl LoopNames {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, base: impl Into<String>, v: impl Into<String>, y: impl Into<String>) {
        self.0.insert(base.into(), (v.into(), y.into()));
    }

    pub fn get(&self, base: &Generator) -> (String, String) {
        self.0
            .get(&base.name)
            .cloned()
            .unwrap_or_else(|| (format!("v{}", base.degree), format!("y{}", base.degree - 1)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &(String, String))> {
        self.0.iter()
    }
}

/// What a loop-space generator is the image of.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Role {
    /// `e^*(x)` for the named base generator.
    Base(String),
    /// `σ(x)` for the named base generator.
    Derived(String),
}

impl Role {
    pub fn source(&self) -> &str {
        match self {
            Role::Base(s) | Role::Derived(s) => s,
        }
    }
}

/// A derived generator removed because it equals an expression in the others.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    pub generator: Generator,
    pub source: String,
    pub value: Poly,
}

/// A derived presentation of `H^*(LX; Z/2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopPresentation {
    presentation: Presentation,
    roles: Vec<Role>,
    eliminations: Vec<Elimination>,
    // Per base generator, in base order: index of its v, and σ of it.
    base_vars: Vec<usize>,
    sigma_images: Vec<Poly>,
}

impl LoopPresentation {
    pub fn new(
        presentation: Presentation,
        roles: Vec<Role>,
        eliminations: Vec<Elimination>,
    ) -> Result<Self, DeriveError> {
        let invalid = |m: String| Err(DeriveError::InvalidRoles(m));
        if roles.len() != presentation.num_generators() {
            return invalid(format!("{} roles for {} generators", roles.len(), presentation.num_generators()));
        }
        let gens = presentation.generators();
        let mut base_vars = Vec::new();
        let mut sigma_images = Vec::new();
        for (i, role) in roles.iter().enumerate() {
            let Role::Base(source) = role else { continue };
            if base_vars.iter().any(|&b: &usize| roles[b].source() == source) {
                return invalid(format!("`{source}` has two base images"));
            }
            let derived: Vec<usize> = roles
                .iter()
                .enumerate()
                .filter(|(_, r)| matches!(r, Role::Derived(s) if s == source))
                .map(|(j, _)| j)
                .collect();
            let eliminated: Vec<&Elimination> = eliminations.iter().filter(|e| &e.source == source).collect();
            let (image, degree) = match (derived.as_slice(), eliminated.as_slice()) {
                ([j], []) => (presentation.generator(*j), gens[*j].degree),
                ([], [e]) => (presentation.normal_form(&e.value), e.generator.degree),
                _ => return invalid(format!("`{source}` needs exactly one suspension")),
            };
            if degree + 1 != gens[i].degree {
                return invalid(format!("suspension of `{source}` has degree {degree}"));
            }
            base_vars.push(i);
            sigma_images.push(image);
        }
        for (j, role) in roles.iter().enumerate() {
            if let Role::Derived(s) = role {
                if !base_vars.iter().any(|&b| roles[b].source() == s) {
                    return invalid(format!("`{}` derives from unknown `{s}`", gens[j].name));
                }
            }
        }
        for e in &eliminations {
            if !base_vars.iter().any(|&b| roles[b].source() == e.source) {
                return invalid(format!("elimination of `{}` has unknown source", e.generator.name));
            }
        }
        Ok(Self { presentation, roles, eliminations, base_vars, sigma_images })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn eliminations(&self) -> &[Elimination] {
        &self.eliminations
    }

    /// Degrees of the base generators, in base order.
    pub fn base_degrees(&self) -> Vec<u32> {
        self.base_vars.iter().map(|&i| self.presentation.degrees()[i]).collect()
    }

    /// Names of the base generators, in base order.
    pub fn base_names(&self) -> Vec<&str> {
        self.base_vars.iter().map(|&i| self.roles[i].source()).collect()
    }

    /// `σ(x_i)` in normal form.
    pub fn sigma_image(&self, i: usize) -> &Poly {
        &self.sigma_images[i]
    }

    /// `e^*` on an element over the base generators.
    pub fn rename(&self, e: &Poly) -> Poly {
        let vars = self.presentation.num_generators();
        e.terms().map(|m| m.embed(vars, &self.base_vars)).collect()
    }

    /// σ on a homogeneous element of positive degree over the base
    /// generators, extended from the generators as a derivation over `e^*`.
    pub fn sigma(&self, e: &Poly) -> Result<Poly, DeriveError> {
        let degrees = self.base_degrees();
        if let Some(m) = e.terms().find(|m| m.vars() != degrees.len()) {
            return Err(DeriveError::NotBaseElement { expected: degrees.len(), got: m.vars() });
        }
        match e.degree(&degrees) {
            Some(d) if d > 0 => {}
            None if e.is_zero() => return Ok(Poly::zero()),
            _ => return Err(DeriveError::SigmaDegree),
        }
        let vars = self.presentation.num_generators();
        let mut out = Poly::zero();
        for m in e.terms() {
            for i in m.support() {
                if m.exponent(i) % 2 == 0 {
                    continue;
                }
                let rest = m.with_exponent(i, m.exponent(i) - 1).embed(vars, &self.base_vars);
                out.add_assign(&self.sigma_images[i].mul_monomial(&rest));
            }
        }
        Ok(self.presentation.normal_form(&out))
    }

    /// `Π (1 - t^{|v|})^{-1} · Π (1 + t^{|y|})` over all base generators,
    /// eliminated suspensions included.
    pub fn expected_series(&self, bound: u32) -> Vec<u64> {
        let degrees = self.base_degrees();
        let exterior: Vec<u32> = degrees.iter().map(|d| d - 1).collect();
        product_series(&degrees, &exterior, bound)
    }
}

/// The free alphabet `v_1..v_l, y_1..y_l` over a polynomial base, before any
/// relation is imposed.
pub struct LoopBuilder<'a> {
    base: &'a Presentation,
    generators: Vec<Generator>,
    roles: Vec<Role>,
}

impl<'a> LoopBuilder<'a> {
    pub fn new(base: &'a Presentation, names: &LoopNames) -> Result<Self, DeriveError> {
        if !base.is_polynomial() {
            return Err(DeriveError::NotPolynomial(base.relations().len()));
        }
        let mut generators = Vec::new();
        let mut roles = Vec::new();
        let mut derived = Vec::new();
        for g in base.generators() {
            if g.degree < 2 {
                return Err(DeriveError::DegreeOne(g.name.clone()));
            }
            let (v, y) = names.get(g);
            generators.push(Generator::new(v, g.degree));
            roles.push(Role::Base(g.name.clone()));
            derived.push((Generator::new(y, g.degree - 1), Role::Derived(g.name.clone())));
        }
        for (g, r) in derived {
            generators.push(g);
            roles.push(r);
        }
        let mut seen = std::collections::BTreeSet::new();
        for g in &generators {
            if !seen.insert(g.name.as_str()) {
                return Err(DeriveError::NameCollision(g.name.clone()));
            }
        }
        Ok(Self { base, generators, roles })
    }

    fn n(&self) -> usize {
        self.base.num_generators()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// σ into the free alphabet.
    pub fn sigma(&self, e: &Poly) -> Poly {
        let n = self.n();
        let vars = 2 * n;
        let v_map: Vec<usize> = (0..n).collect();
        let mut out = Poly::zero();
        for m in e.terms() {
            for i in m.support() {
                if m.exponent(i) % 2 == 1 {
                    let rest = m.with_exponent(i, m.exponent(i) - 1).embed(vars, &v_map);
                    out.toggle(rest.with_exponent(n + i, 1));
                }
            }
        }
        out
    }

    /// `y_i^2 = σ(Sq^{|y_i|} x_i)` in the free alphabet.
    pub fn compute_square_relation(&self, i: usize) -> Relation {
        let n = self.n();
        let y = self.base.degrees()[i] - 1;
        Relation { lead: Monomial::generator(2 * n, n + i, 2), tail: self.sigma(&self.base.action_on_generator(i, y)) }
    }
}

struct RawLoop {
    generators: Vec<Generator>,
    roles: Vec<Role>,
    relations: Vec<Relation>,
    alive: Vec<bool>,
    eliminations: Vec<(usize, Poly)>,
}

/// Repeatedly finds a square relation `y_a^2 = ... + y_b + ...` with `y_b` a
/// lone derived generator, solves it for `y_b` and substitutes everywhere.
/// Candidates are taken in increasing degree of `y_b`.
fn eliminate(raw: &mut RawLoop) -> Result<(), DeriveError> {
    let vars = raw.generators.len();
    let degrees: Vec<u32> = raw.generators.iter().map(|g| g.degree).collect();
    loop {
        let mut best: Option<(u32, usize, usize)> = None;
        for (ri, r) in raw.relations.iter().enumerate() {
            for t in r.tail.terms() {
                let mut support = t.support();
                let (Some(b), None) = (support.next(), support.next()) else { continue };
                if t.exponent(b) != 1 || !raw.alive[b] || !matches!(raw.roles[b], Role::Derived(_)) {
                    continue;
                }
                let key = (degrees[b], b, ri);
                if best.is_none_or(|k| key < k) {
                    best = Some(key);
                }
            }
        }
        let Some((yd, b, ri)) = best else { return Ok(()) };

        let used = raw.relations.remove(ri);
        let mut value: Poly = used.lead.clone().into();
        for t in used.tail.terms() {
            if t != &Monomial::generator(vars, b, 1) {
                value.toggle(t.clone());
            }
        }
        for m in value.terms() {
            let got = m.degree(&degrees);
            if got != yd {
                return Err(DeriveError::Inhomogeneous {
                    generator: raw.generators[b].name.clone(),
                    expected: yd,
                    got,
                });
            }
        }

        let mut images: Vec<Poly> = (0..vars).map(|i| Monomial::generator(vars, i, 1).into()).collect();
        images[b] = value.clone();
        for r in &mut raw.relations {
            let e = r.lead.exponent(b);
            let whole = Poly::from(r.lead.clone()).add(&r.tail).substitute(&images, vars);
            let lead = if e == 0 { r.lead.clone() } else { r.lead.with_exponent(b, 0).mul(&used.lead.scale(e)) };
            if !whole.contains(&lead) {
                return Err(DeriveError::LeadLost(raw.generators[b].name.clone()));
            }
            let mut tail = whole;
            tail.toggle(lead.clone());
            *r = Relation { lead, tail };
        }
        for (_, v) in &mut raw.eliminations {
            *v = v.substitute(&images, vars);
        }
        raw.alive[b] = false;
        raw.eliminations.push((b, value));
    }
}

/// Runs the whole derivation without the final self-check.
pub fn derive_unchecked(base: &Presentation, names: &LoopNames) -> Result<LoopPresentation, DeriveError> {
    let builder = LoopBuilder::new(base, names)?;
    let n = base.num_generators();
    let mut raw = RawLoop {
        generators: builder.generators.clone(),
        roles: builder.roles.clone(),
        relations: (0..n).map(|i| builder.compute_square_relation(i)).collect(),
        alive: vec![true; 2 * n],
        eliminations: Vec::new(),
    };
    eliminate(&mut raw)?;
    eliminate_and_assemble(base, &builder, raw)
}

fn eliminate_and_assemble(
    base: &Presentation,
    builder: &LoopBuilder<'_>,
    raw: RawLoop,
) -> Result<LoopPresentation, DeriveError> {
    let removed: Vec<usize> = (0..raw.alive.len()).filter(|&i| !raw.alive[i]).collect();
    let generators: Vec<Generator> =
        raw.generators.iter().zip(&raw.alive).filter(|(_, &a)| a).map(|(g, _)| g.clone()).collect();
    let roles: Vec<Role> = raw.roles.iter().zip(&raw.alive).filter(|(_, &a)| a).map(|(r, _)| r.clone()).collect();
    let compress = |p: &Poly| -> Poly { p.terms().map(|m| m.remove_vars(&removed)).collect() };
    let mut relations: Vec<Relation> = raw
        .relations
        .iter()
        .map(|r| Relation { lead: r.lead.remove_vars(&removed), tail: compress(&r.tail) })
        .collect();
    // Ordered by the generator in the lead, independent of elimination order.
    relations.sort_by_key(|r| r.lead.support().next());
    let name = format!("L{}", base.name());

    let unreduced = Presentation::new(&name, generators.clone(), SqTable::new(), relations)?;
    let relations: Vec<Relation> = unreduced
        .relations()
        .iter()
        .map(|r| Relation { lead: r.lead.clone(), tail: unreduced.normal_form(&r.tail) })
        .collect();
    let quotient = Presentation::new(&name, generators.clone(), SqTable::new(), relations.clone())?;
    let eliminations: Vec<Elimination> = raw
        .eliminations
        .iter()
        .map(|(b, v)| Elimination {
            generator: builder.generators[*b].clone(),
            source: raw.roles[*b].source().to_string(),
            value: quotient.normal_form(&compress(v)),
        })
        .collect();
    let untabled = LoopPresentation::new(quotient, roles.clone(), eliminations.clone())?;
    let table = derive_sq_table(base, &untabled)?;
    let presentation = Presentation::new(&name, generators, table, relations)?;
    LoopPresentation::new(presentation, roles, eliminations)
}

/// `Sq^k v_i = e^*(Sq^k x_i)` and `Sq^k y_i = σ(Sq^k x_i)` for every
/// tabulated power of two, in normal form.
pub fn derive_sq_table(base: &Presentation, l: &LoopPresentation) -> Result<SqTable, DeriveError> {
    let p = l.presentation();
    let mut table = SqTable::new();
    for (g, gen) in p.generators().iter().enumerate() {
        let source = l.roles()[g].source();
        let i = base
            .generator_index(source)
            .ok_or_else(|| DeriveError::InvalidRoles(format!("unknown base generator `{source}`")))?;
        for k in table_powers(gen.degree) {
            let image = base.action_on_generator(i, k);
            let value = match &l.roles()[g] {
                Role::Base(_) => p.normal_form(&l.rename(&image)),
                Role::Derived(_) => l.sigma(&image)?,
            };
            table.insert(g, k, value);
        }
    }
    Ok(table)
}

/// `y^2 = σ(Sq^{|y|} x)` for a surviving derived generator, in normal form.
pub fn compute_square_relation(l: &LoopPresentation, base: &Presentation, y: usize) -> Result<Relation, DeriveError> {
    let p = l.presentation();
    let Role::Derived(source) = &l.roles()[y] else {
        return Err(DeriveError::InvalidRoles(format!("`{}` is not derived", p.generators()[y].name)));
    };
    let i = base
        .generator_index(source)
        .ok_or_else(|| DeriveError::InvalidRoles(format!("unknown base generator `{source}`")))?;
    let d = p.degrees()[y];
    Ok(Relation {
        lead: Monomial::generator(p.num_generators(), y, 2),
        tail: l.sigma(&base.action_on_generator(i, d))?,
    })
}

/// Outcome of the post-derivation checks.
#[derive(Clone, Debug)]
pub struct SelfCheck {
    pub coherence: CoherenceReport,
    pub confluence: ConfluenceReport,
    pub series: Vec<u64>,
    pub expected_series: Vec<u64>,
}

impl SelfCheck {
    pub fn passed(&self) -> bool {
        self.coherence.passed() && self.confluence.passed() && self.series == self.expected_series
    }
}

pub fn self_check(l: &LoopPresentation, bound: u32) -> SelfCheck {
    let p = l.presentation();
    let table = ActionTable::new(p, bound);
    SelfCheck {
        coherence: check_adem_coherence_with(&table),
        confluence: check_confluence(p, bound),
        series: table.basis().dims(),
        expected_series: l.expected_series(bound),
    }
}

/// Derives the loop presentation of a polynomial, Adem-coherent base and
/// re-checks coherence and confluence of the result up to `bound`.
pub fn derive_loop_presentation(
    base: &Presentation,
    names: &LoopNames,
    bound: u32,
) -> Result<LoopPresentation, DeriveError> {
    if !base.is_polynomial() {
        return Err(DeriveError::NotPolynomial(base.relations().len()));
    }
    let base_report = crate::algebra::check_adem_coherence(base, bound);
    if !base_report.passed() {
        return Err(DeriveError::BaseIncoherent(Box::new(base_report)));
    }
    let l = derive_unchecked(base, names)?;
    let check = self_check(&l, bound);
    if !check.coherence.passed() || !check.confluence.passed() {
        return Err(DeriveError::SelfCheck {
            coherence: Box::new(check.coherence),
            confluence: Box::new(check.confluence),
        });
    }
    Ok(l)
}
