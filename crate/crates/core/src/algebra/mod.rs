//! Exact arithmetic: integers, polynomials, finite fields, cyclotomic
//! fields and normal forms.

pub mod cyclotomic;
pub mod factor;
pub mod field;
pub mod fp_poly;
pub mod integer;
pub mod laurent;
pub mod poly_snf;
pub mod resultant;
pub mod snf;

pub use cyclotomic::{rank_cyclotomic, CyclotomicElem};
pub use factor::{factor_modp, Factorization};
pub use field::{make_field, FieldElem, FiniteField};
pub use fp_poly::PolyFp;
pub use laurent::{det_bareiss, LaurentMatrix, LaurentPoly};
pub use poly_snf::snf_poly;
pub use resultant::resultant;
pub use snf::{snf_int, AbelianGroup, SparseMatrix};
