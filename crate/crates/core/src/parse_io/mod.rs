//! Text and JSON ingestion: the polynomial grammar and the algebra,
//! derivation and certificate file schemas.

mod expr;
mod schema;

pub use expr::{format_monomial, format_polynomial, parse_expression, ParseError, ParseErrorKind};
pub use schema::{
    format_images, load_algebra, load_algebra_file, load_derivation, load_document, parse_images, to_canonical_json,
    AlgebraFile, DerivationFile, Document, LoadError, LoadedAlgebra, NamedMap, OrderSpec,
};
