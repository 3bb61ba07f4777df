use rand::Rng;
use serde::Serialize;

use super::decode::CosetDecoder;
use super::error_prob::{error_prob_from_counts_f64, wrong_decodings};
use super::SimResult;
use crate::bounds::{log2_eta, BoundReport};
use crate::cqstate::{d1_distance, holevo, pauli_wiretap_state, PauliChannel, WiretapKey, WIRETAP_QUBIT_CAP};
use crate::error::{Error, Result};
use crate::gf2::{BitVector, LinearCode};

#[derive(Clone, Debug, Serialize)]
pub struct DistillOutcome {
    /// Alice's random `C₁` codeword, sent masked by her raw key.
    pub codeword: String,
    pub key_a: usize,
    pub key_b: usize,
    pub key_bits: usize,
    pub agree: bool,
}

/// Error correction by `C₁` and key extraction as cosets in `C₁/C₂`.
#[derive(Clone, Debug)]
pub struct KeyDistiller {
    c1: LinearCode,
    dec: CosetDecoder,
}

impl KeyDistiller {
    pub fn new(c1: &LinearCode, c2: &LinearCode) -> Result<Self> {
        Ok(Self {
            c1: c1.clone(),
            dec: CosetDecoder::new(c1, c2)?,
        })
    }

    /// Alice draws `R_A ∈ C₁` and announces `k_A ⊕ R_A`; Bob decodes
    /// `k_B ⊕ k_A ⊕ R_A` to `C₁`. Keys are the cosets of the two codewords.
    pub fn run<R: Rng + ?Sized>(&self, ka: &BitVector, kb: &BitVector, rng: &mut R) -> Result<DistillOutcome> {
        let n = self.c1.len();
        for k in [ka, kb] {
            if k.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: k.len() });
            }
        }
        let mut ra = BitVector::zeros(n);
        for b in self.c1.basis() {
            if rng.gen::<bool>() {
                ra.xor_assign(b);
            }
        }
        let announced = ka.xor(&ra);
        let y = kb.xor(&announced).to_u64().expect("n <= 16");
        let ra_mask = ra.to_u64().expect("n <= 16");
        let key_a = self.dec.key_of(ra_mask);
        let key_b = self.dec.decode_mask(y);
        Ok(DistillOutcome {
            codeword: ra.to_string(),
            key_a,
            key_b,
            key_bits: self.dec.key_bits(),
            agree: key_a == key_b,
        })
    }
}

pub fn distill_keys<R: Rng + ?Sized>(
    ka: &BitVector,
    kb: &BitVector,
    c1: &LinearCode,
    c2: &LinearCode,
    rng: &mut R,
) -> Result<DistillOutcome> {
    KeyDistiller::new(c1, c2)?.run(ka, kb, rng)
}

#[derive(Clone, Debug, Serialize)]
pub struct WiretapEval {
    /// `P_ph(C₂⊥/C₁⊥)`: coset decoding error of the phase errors.
    pub phase_error: SimResult,
    /// Exact `d₁` against `2√2 √P_ph` (only when Eve's space is explicit).
    pub trace: Option<SimResult>,
    /// Exact `χ` against `η_l(P_ph)`.
    pub holevo: Option<SimResult>,
}

/// Secrecy of the coset key of `C₁/C₂` after an iid Pauli channel. For
/// `n ≤ 4` Eve's state is built and diagonalized; longer codes get the
/// phase-error bounds only.
pub fn wiretap_eval(ch: &PauliChannel, c1: &LinearCode, c2: &LinearCode) -> Result<WiretapEval> {
    let n = c1.len();
    if c2.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: c2.len() });
    }
    if !c2.is_subcode_of(c1) {
        return Err(Error::Containment("C2 must be a subcode of C1".into()));
    }
    let p_ph = ch.phase_error_rate();
    let counts = wrong_decodings(&c2.dual(), Some(&c1.dual()))?;
    let pe = error_prob_from_counts_f64(&counts, p_ph);
    let l = (c1.dimension() - c2.dimension()) as f64;
    let inputs = [("n", n as f64), ("l", l), ("p_ph", p_ph)];
    let lp = pe.log2();
    let trace_bound = BoundReport::new("phase_error_trace", 1.5 + 0.5 * lp, &inputs);
    let holevo_bound = BoundReport::new("phase_error_holevo", log2_eta(l, lp), &inputs);

    let mut phase_error = SimResult::new("phase_error_probability", n, &inputs, pe);
    if n > WIRETAP_QUBIT_CAP {
        phase_error.bounds = vec![trace_bound, holevo_bound];
        return Ok(WiretapEval { phase_error, trace: None, holevo: None });
    }
    let key = WiretapKey::Coset { c1: c1.clone(), c2: c2.clone() };
    let rho = pauli_wiretap_state(n, ch, &key)?;
    let d1 = d1_distance(&rho);
    let chi = holevo(&rho);
    let mut trace = SimResult::new("trace_distance", n, &inputs, d1);
    trace.bounds = vec![trace_bound.with_dominated(d1)];
    let mut hol = SimResult::new("holevo_information", n, &inputs, chi);
    hol.bounds = vec![holevo_bound.with_dominated(chi)];
    Ok(WiretapEval { phase_error, trace: Some(trace), holevo: Some(hol) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn parity_kernel(n: usize) -> LinearCode {
        LinearCode::even_weight(n)
    }

    #[test]
    fn noiseless_keys_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c1 = LinearCode::repetition(5).dual();
        let c2 = LinearCode::zero(5);
        for _ in 0..20 {
            let k = BitVector::random(5, &mut rng);
            assert!(distill_keys(&k, &k, &c1, &c2, &mut rng).unwrap().agree);
        }
    }

    #[test]
    fn correctable_errors_are_removed() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let c1 = LinearCode::repetition(5);
        let c2 = LinearCode::zero(5);
        let d = KeyDistiller::new(&c1, &c2).unwrap();
        for e in ["10000", "01000", "00110", "00011"] {
            let ka = BitVector::random(5, &mut rng);
            let kb = ka.xor(&e.parse().unwrap());
            assert!(d.run(&ka, &kb, &mut rng).unwrap().agree, "{e}");
        }
        // three flips push the word to the other codeword
        let ka = BitVector::zeros(5);
        let kb: BitVector = "11100".parse().unwrap();
        assert!(!d.run(&ka, &kb, &mut rng).unwrap().agree);
    }

    #[test]
    fn noiseless_and_bit_flip_channels_leak_nothing() {
        let (c1, c2) = (LinearCode::full(3), parity_kernel(3));
        for ch in [PauliChannel::noiseless(), PauliChannel::bit_flip(0.3).unwrap()] {
            let ev = wiretap_eval(&ch, &c1, &c2).unwrap();
            assert_eq!(ev.phase_error.value, 0.0);
            let tr = ev.trace.unwrap();
            assert!(tr.value < 1e-12 && tr.holds(1e-12));
            let hv = ev.holevo.unwrap();
            assert!(hv.value < 1e-10 && hv.holds(1e-10));
        }
    }

    #[test]
    fn dephasing_respects_bounds() {
        let (c1, c2) = (LinearCode::full(3), parity_kernel(3));
        let ev = wiretap_eval(&PauliChannel::dephasing(0.1).unwrap(), &c1, &c2).unwrap();
        assert!(ev.phase_error.value > 0.0);
        assert!(ev.trace.unwrap().holds(1e-12));
        assert!(ev.holevo.unwrap().holds(1e-12));
    }

    #[test]
    fn long_codes_get_phase_bounds_only() {
        let c1 = LinearCode::full(8);
        let c2 = parity_kernel(8);
        let ev = wiretap_eval(&PauliChannel::dephasing(0.05).unwrap(), &c1, &c2).unwrap();
        assert!(ev.trace.is_none());
        assert_eq!(ev.phase_error.bounds.len(), 2);
    }
}
