pub mod baselines;
pub mod error;
pub mod harness;
pub mod matrixless;
mod par;
pub mod symbols;
pub mod toeplitz;
pub use par::is_parallel;
