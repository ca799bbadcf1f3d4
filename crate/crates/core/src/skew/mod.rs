//! The twisted Laurent ring `k{F, F^-1}` with `F a = a^p F`, matrices over
//! it, and the bilinear form `g`.

mod gform;
mod matrix;
mod parse;
mod poly;

pub use gform::{g_eval_matrix, g_form, GForm, GMonomial};
pub use matrix::SkewMatrix;
pub use parse::{parse_matrix, parse_poly};
pub use poly::{adjoint, evaluate, skew_mul, SkewPoly};

pub(crate) use parse::parse_matrix_at;
