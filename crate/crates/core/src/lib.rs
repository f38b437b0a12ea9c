pub mod clifford;
pub mod coset;
pub mod error;
pub mod exterior;
pub mod harness;
pub mod linalg;
pub mod sasaki;
pub mod scalar;
