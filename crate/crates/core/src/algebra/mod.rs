//! Unstable algebras over the Steenrod algebra, presented by generators, an
//! Sq table and square relations.

pub mod checks;
pub mod graded;
pub mod poly;
pub mod presentation;

pub use checks::{
    check_adem_coherence, check_confluence, check_instability, poincare_series, product_series, AdemViolation,
    CoherenceReport, ConfluenceReport, Divergence, IdealViolation, InstabilityReport, InstabilityViolation,
    DEFAULT_BOUND,
};
pub use graded::{ActionTable, GradedBasis};
pub use poly::{Monomial, Poly};
pub use presentation::{table_powers, AlgebraError, Generator, Presentation, Relation, SqTable};
