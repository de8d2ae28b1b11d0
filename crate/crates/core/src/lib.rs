//! Exact computer algebra for the Johnson–Wilson theories E(2) and ER(2).
//!
//! The crate is organised bottom-up:
//!
//! * [`exactalg`]: 2-local numbers and sparse graded series;
//! * [`fgl`]: the 2-typical formal group law and its `(α, u)` rescaling;
//! * [`projring`]: truncated projective-space cohomology rings with 2-adic
//!   normal forms;
//! * [`bss`]: the x-Bockstein spectral sequence engine and its fixture tables;
//! * [`er2`]: the coefficient ring `ER(2)^*` and the degree-8* module of
//!   `RP^{16K+9}`;
//! * [`obstruct`]: the non-immersion query pipeline and report emitters.

pub mod bss;
pub mod er2;
pub mod exactalg;
pub mod fgl;
pub mod obstruct;
pub mod projring;
