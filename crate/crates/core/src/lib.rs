//! Exact presented algebras, derivations and m-suspensions.
//!
//! The crate builds finitely presented algebras `K[vars]/I` over Q or a
//! cyclotomic field, checks derivations on them, certifies local
//! nilpotency on generators, decomposes derivations along Z^n-gradings,
//! and constructs m-suspensions `y_1^{k_1}···y_m^{k_m} = f` together with
//! their torus actions.

pub mod algebra;
pub mod coeff;
pub mod constructions;
pub mod derivation;
pub mod groebner;
pub mod parse_io;
pub mod poly;
pub mod suspension;

pub use algebra::{AlgebraElement, Grading, PresentedAlgebra};
pub use coeff::{root_of_unity, CyclotomicNumber, Field, Rational};
pub use derivation::{Derivation, LndCertificate, Nu};
pub use groebner::{buchberger, GroebnerBasis, MonomialOrder};
pub use poly::{Monomial, PolyRing, Polynomial, WeightVector};
