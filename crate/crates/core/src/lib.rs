//! Exact-arithmetic kernel for equivariant cohomology computations.
//!
//! The kernel works with free super-commutative Z-graded algebras over the
//! rationals, presented by finitely many homogeneous generators. On top of
//! that it builds the standard cast of differential-geometric algebra:
//! operations (algebras with `d`, Lie derivatives and contractions), Weil
//! algebras, Cartan models, Kalkman's conjugation, algebraic connections with
//! their Chern-Weil maps and transgression homotopies, and the reduction
//! machinery relating a `G`-operation with an `N`-connection to the residual
//! `G/N`-operation on the `N`-basic subalgebra.
//!
//! Every scalar is an exact `BigRational`; every check in this crate is an
//! equality check, never a tolerance comparison.

pub mod algebra;
pub mod cartan;
pub mod connection;
pub mod derivation;
pub mod error;
pub mod lie;
pub mod linalg;
pub mod models;
pub mod operation;
pub mod parse;
pub mod reduction;
pub mod scalar;
pub mod weil;

pub use algebra::{Algebra, AlgebraHom, Element, GeneratorSpec, Monomial};
pub use cartan::{CartanModel, KalkmanFamily};
pub use connection::{Connection, Transgression};
pub use derivation::{Derivation, LinearOperator, Parity};
pub use error::KernelError;
pub use lie::{IdealSpec, LieAlgebraData};
pub use linalg::QMatrix;
pub use operation::{Operation, SubcomplexBasis, SubspaceKind};
pub use reduction::ReductionSetup;
pub use scalar::Rational;
pub use weil::WeilAlgebra;
