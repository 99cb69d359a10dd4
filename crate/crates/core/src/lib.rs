//! Exact computation with regularized quantum period sequences of Fano
//! manifolds and the differential operators that annihilate them.

pub mod analysis;
pub mod arith;
pub mod field;
pub mod fit;
pub mod kvdb;
pub mod laurent;
pub mod linalg;
pub mod operator;
pub mod poly;
pub mod record;
pub mod recurrence;
pub mod sequence;

pub use arith::Rational;
pub use kvdb::{parse_database, serialize_database, Database, Filter};
pub use laurent::{constant_term_powers, disjoint_sum, LaurentPolynomial};
pub use operator::{DOperator, OperatorError, Term};
pub use record::FanoRecord;
pub use sequence::PeriodSequence;
