//! Classical-quantum states `Σ_a |a⟩⟨a| ⊗ B_a` at small dimension: distance
//! and entropy measures, Walsh bias of smoothing families, and the state Eve
//! holds after a Pauli channel.

mod density;
mod state;
mod walsh;
mod wiretap;

pub use density::{CMatrix, DensityOperator, C64};
pub use state::{convolve, d1_distance, h2_d2_hmin, hash_marginal, holevo, CQState, RenyiQuantities, KEY_BITS_CAP};
pub use walsh::{
    code_family_bias, code_indicator_spectrum, fwht, pa_bound_check, uniform_on_code, small_bias_inequality,
    walsh_bias, walsh_spectrum, BiasReport, InequalitySides, PaCheck, WalshFamily,
};
pub use wiretap::{pauli_wiretap_state, PauliChannel, WiretapKey, WIRETAP_QUBIT_CAP};
