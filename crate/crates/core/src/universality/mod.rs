//! Exact measurement of ε-almost (dual) universality₂ and the standard
//! constructions built around it.

mod duality;
mod family;
mod measure;
mod permuted;
mod tight;

pub use duality::{duality_bound, max_tight_epsilon, BoundVariant};
pub use family::{CodeFamily, CodePairFamily};
pub use measure::{
    epsilon_dual_universal, epsilon_floor, epsilon_pair, epsilon_pair_dual, epsilon_universal,
    epsilon_universal_mc, membership_probabilities, Convention, McReport, PairVariant,
    UniversalityRecord, UniversalityReport, AMBIENT_CAP,
};
pub use permuted::{
    orbit_membership, permuted_epsilon, permuted_epsilon_k, permuted_family_epsilon_by_orbits,
    permuted_pair_epsilon, permuted_pair_epsilon_by_orbits, search_permuted_code, SearchMode,
    SearchOutcome, SearchRecord,
};
pub use tight::{all_subspaces, gaussian_binomial, optimal_family, tight_family, SUBSPACE_CAP};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{cap, Error, Result};
use crate::gf2::LinearCode;
use crate::hashfam::HashFamily;

/// Cap on `m(n−1)` for the exhaustive random-linear base family.
pub const COUNTEREXAMPLE_PARAM_CAP: usize = 16;

/// Universal₂ family on F₂^{n−1} underlying the counterexample.
#[derive(Clone, Copy, Debug)]
pub enum CounterexampleBase {
    /// Kernels of all `m × (n−1)` matrices.
    Exhaustive { m: usize },
    /// Kernels of `count` uniformly drawn `m × (n−1)` matrices.
    Sampled { m: usize, count: usize, seed: u64 },
}

/// Pads every code of a universal₂ family on F₂^{n−1} with a trailing zero
/// coordinate. The result is 2-almost universal₂, yet every dual contains
/// `e_n = 0…01`.
pub fn counterexample_family(n: usize, base: CounterexampleBase) -> Result<CodeFamily> {
    if n < 2 {
        return Err(Error::Dimension("counterexample needs n >= 2".into()));
    }
    let codes: Vec<LinearCode> = match base {
        CounterexampleBase::Exhaustive { m } => {
            cap("counterexample parameter bits", m * (n - 1), COUNTEREXAMPLE_PARAM_CAP)?;
            HashFamily::random_linear(n - 1, m)?.kernel_codes()?
        }
        CounterexampleBase::Sampled { m, count, seed } => {
            if count == 0 {
                return Err(Error::Domain("need at least one member".into()));
            }
            let fam = HashFamily::random_linear(n - 1, m)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| fam.sample(&mut rng).kernel_code()).collect()
        }
    };
    CodeFamily::uniform(codes.iter().map(|c| c.pad_zeros(1)).collect())
}

#[cfg(test)]
mod tests;
