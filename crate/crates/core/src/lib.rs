//! Constacyclic codes of length `2ℓ^m p^n` over finite fields of odd
//! characteristic: field and polynomial arithmetic, cyclotomic cosets,
//! closed-form factorizations of `X^N - λ`, and the resulting code families.

pub mod arith;
pub mod codes;
pub mod cosets;
pub mod equivalence;
pub mod error;
pub mod factorizer;
pub mod gf;
pub mod poly;
pub mod verify;

pub use codes::{ConstacyclicCode, Family};
pub use error::{Error, Result};
pub use factorizer::{Case, Factorization, Params};
pub use gf::{make_field, sqrt_of, Elem, Field, FieldSpec, TowerMap};
pub use poly::Poly;
