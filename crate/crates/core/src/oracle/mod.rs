//! Independent ground truth: cellular cohomology, the equivariant splice,
//! spectral flow and synthetic δ-complexes.

mod cw;
mod morse;
mod mv;
mod random;
mod specflow;

pub use cw::{cw_cohomology, CwComplex};
pub use morse::{morse_cross_check, morse_to_delta, MorseCheck, MorseModel};
pub use mv::{mv_splice, MvDegree, MvSplice};
pub use random::{
    generate_random_delta, random_bplus_cobordism, random_conjugation, RandomInstance, RandomParams,
};
pub use specflow::{
    berger_family, spectral_flow, BarrierCheck, Curve, EigenvalueFamily, PiecewiseLinear, SpectralFlow,
};
