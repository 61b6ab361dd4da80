//! Exact symbolic algebra over the parameter alphabet.

pub mod expr;
pub mod gcd;
pub mod poly;
pub mod prod;
pub mod symbol;

pub use expr::Expr;
pub use poly::Poly;
pub use prod::{Factor, Prod};
pub use symbol::{Mono, SignedMono, Sym};
pub mod logform;
pub mod numeric;
pub mod theta;
