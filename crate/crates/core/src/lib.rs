pub mod cli;
pub mod cyclo;
pub mod ff;
pub mod fourier;
pub mod heisenberg;
pub mod kernel;
pub mod pairing;
pub mod skew;
mod text;

pub use text::SyntaxError;
