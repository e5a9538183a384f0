pub mod error;
pub mod gen;
pub mod interference;
pub mod pdo;
pub mod scalars;
pub mod selftest;
pub mod superalg;
pub mod symbols;
pub mod ultra;

pub use error::{Error, Result};
pub use scalars::{Binarion, Rational, Sigma};
pub use symbols::{HPoly, PhasePoint, PolySymbol, Var};
