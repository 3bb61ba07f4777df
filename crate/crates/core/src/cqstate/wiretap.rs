use std::str::FromStr;

use serde::Serialize;

use super::density::{CMatrix, C64};
use super::state::CQState;
use crate::error::{cap, Error, Result};
use crate::gf2::{cosets, LinearCode};

/// Cap on qubits for an explicit environment (Eve dimension `4ⁿ`).
pub const WIRETAP_QUBIT_CAP: usize = 4;

/// Single-qubit Pauli channel as a joint table `P[phase][bit]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PauliChannel {
    pub table: [[f64; 2]; 2],
}

impl PauliChannel {
    pub fn new(table: [[f64; 2]; 2]) -> Result<Self> {
        let flat = [table[0][0], table[0][1], table[1][0], table[1][1]];
        if flat.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::Domain(format!("channel probabilities must lie in [0,1]: {flat:?}")));
        }
        let total: f64 = flat.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("channel probabilities sum to {total}, not 1")));
        }
        Ok(Self { table })
    }

    pub fn noiseless() -> Self {
        Self { table: [[1.0, 0.0], [0.0, 0.0]] }
    }

    /// Phase errors only, at rate `p`.
    pub fn dephasing(p: f64) -> Result<Self> {
        Self::new([[1.0 - p, 0.0], [p, 0.0]])
    }

    /// Bit errors only, at rate `p`.
    pub fn bit_flip(p: f64) -> Result<Self> {
        Self::new([[1.0 - p, p], [0.0, 0.0]])
    }

    pub fn phase_error_rate(&self) -> f64 {
        self.table[1][0] + self.table[1][1]
    }

    pub fn bit_error_rate(&self) -> f64 {
        self.table[0][1] + self.table[1][1]
    }

    /// `P(x, z)` for `n`-qubit phase pattern `x` and bit pattern `z`.
    fn joint(&self, n: usize, x: u64, z: u64) -> f64 {
        (0..n)
            .map(|i| self.table[((x >> i) & 1) as usize][((z >> i) & 1) as usize])
            .product()
    }
}

/// Parses `"p00 p01 p10 p11"`, indexed `(phase, bit)`.
impl FromStr for PauliChannel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let vals: Vec<f64> = s
            .split_whitespace()
            .map(|t| {
                crate::rational::parse(t)
                    .map(|r| crate::rational::to_f64(&r))
                    .or_else(|_| t.parse::<f64>().map_err(|e| Error::Parse { line: 1, msg: e.to_string() }))
            })
            .collect::<Result<_>>()?;
        if vals.len() != 4 {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected 4 probabilities, got {}", vals.len()),
            });
        }
        Self::new([[vals[0], vals[1]], [vals[2], vals[3]]])
    }
}

/// What the classical register holds.
#[derive(Clone, Debug)]
pub enum WiretapKey {
    /// The raw sifted string `a ∈ F₂ⁿ`, uniform.
    Sifted,
    /// The coset `[a] ∈ C₁/C₂`, with `a` uniform inside it.
    Coset { c1: LinearCode, c2: LinearCode },
}

/// Eve's state for raw key `a`: she holds the environment `|x, z⟩` of the
/// Pauli error `Z^x X^z`, so `ρ_E(a) = Σ_z v_z v_z†` with
/// `v_z(x) = √P(x,z) (−1)^{x·(a+z)}`. Basis index is `x | z << n`.
fn eve_state(ch: &PauliChannel, n: usize, a: u64) -> CMatrix {
    let size = 1usize << n;
    let mut m = CMatrix::zeros(size * size, size * size);
    for z in 0..size as u64 {
        let v: Vec<f64> = (0..size as u64)
            .map(|x| {
                let sign = if (x & (a ^ z)).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                sign * ch.joint(n, x, z).sqrt()
            })
            .collect();
        let base = (z as usize) * size;
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0.0 {
                continue;
            }
            for (j, &vj) in v.iter().enumerate() {
                m[(base + i, base + j)] += C64::new(vi * vj, 0.0);
            }
        }
    }
    m
}

pub fn pauli_wiretap_state(n: usize, ch: &PauliChannel, key: &WiretapKey) -> Result<CQState> {
    if n == 0 {
        return Err(Error::Dimension("need n >= 1".into()));
    }
    cap("wiretap qubits", n, WIRETAP_QUBIT_CAP)?;
    let states: Vec<CMatrix> = (0..1u64 << n).map(|a| eve_state(ch, n, a)).collect();
    match key {
        WiretapKey::Sifted => {
            let w = C64::new((-(n as f64)).exp2(), 0.0);
            Ok(CQState::from_blocks_unchecked(n, states.into_iter().map(|s| s * w).collect()))
        }
        WiretapKey::Coset { c1, c2 } => {
            for c in [c1, c2] {
                if c.len() != n {
                    return Err(Error::LengthMismatch { expected: n, got: c.len() });
                }
            }
            let reps = cosets(c1, c2)?;
            let inner = c2.codeword_masks()?;
            let l = reps.len().trailing_zeros() as usize;
            let w = C64::new(1.0 / (reps.len() * inner.len()) as f64, 0.0);
            let d = states[0].nrows();
            let blocks = reps
                .iter()
                .map(|r| {
                    let r = r.to_u64().expect("n <= 4");
                    let mut acc = CMatrix::zeros(d, d);
                    for &c in &inner {
                        acc += &states[(r ^ c) as usize];
                    }
                    acc * w
                })
                .collect();
            Ok(CQState::from_blocks_unchecked(l, blocks))
        }
    }
}
