//! Arithmetic in unstable algebras over the mod 2 Steenrod algebra, and the
//! derivation of free loop space cohomology presentations from a presentation
//! of `H^*(X; Z/2)` with its Steenrod square table.

pub mod algebra;
pub mod io;
pub mod loops;
pub mod steenrod;

pub use algebra::{Generator, Monomial, Poly, Presentation, Relation, SqTable};
pub use loops::{derive_loop_presentation, LoopPresentation};
pub use steenrod::{adem_reduce, multiply, SqMonomial, SteenrodElement};
