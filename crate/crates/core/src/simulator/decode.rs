use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{cap, Error, Result};
use crate::gf2::{BinaryMatrix, BitVector, LinearCode};

/// Largest code length for syndrome-table decoding.
pub const DECODE_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DecodeRule {
    MinDistance,
    /// Over a BSC(p); for `p ∈ (0, 1/2]` this coincides with minimum distance.
    MaxLikelihood { p: f64 },
}

impl DecodeRule {
    fn check(self) -> Result<()> {
        match self {
            DecodeRule::MinDistance => Ok(()),
            DecodeRule::MaxLikelihood { p } if p > 0.0 && p <= 0.5 => Ok(()),
            DecodeRule::MaxLikelihood { p } => Err(Error::Domain(format!(
                "maximum likelihood decoding needs p in (0, 1/2], got {p}"
            ))),
        }
    }
}

/// Bit 0 first, 0 before 1 — the text order of [`BitVector::lex_cmp`].
pub(crate) fn lex_cmp_mask(a: u64, b: u64) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let i = (a ^ b).trailing_zeros();
    if (a >> i) & 1 == 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Minimum-weight pattern first; ties go to the lexicographically smallest.
pub(crate) fn pattern_cmp(a: u64, b: u64) -> Ordering {
    a.count_ones().cmp(&b.count_ones()).then_with(|| lex_cmp_mask(a, b))
}

/// Syndrome of every mask in `0..2ⁿ` under `h`.
pub(crate) fn syndrome_table(h: &BinaryMatrix, n: usize) -> Vec<u64> {
    let cols: Vec<u64> = (0..n)
        .map(|i| {
            h.rows()
                .iter()
                .enumerate()
                .fold(0u64, |s, (j, r)| s | ((r.get(i) as u64) << j))
        })
        .collect();
    let mut table = vec![0u64; 1 << n];
    for e in 1..table.len() {
        table[e] = table[e & (e - 1)] ^ cols[e.trailing_zeros() as usize];
    }
    table
}

/// Coset-leader decoder for a code of length `n ≤ 16`.
#[derive(Clone, Debug)]
pub struct SyndromeDecoder {
    n: usize,
    syndromes: Vec<u64>,
    leaders: Vec<u64>,
}

impl SyndromeDecoder {
    pub fn new(code: &LinearCode) -> Result<Self> {
        let n = code.len();
        cap("decoder length", n, DECODE_CAP)?;
        let h = code.parity_check_matrix();
        let syndromes = syndrome_table(&h, n);
        let mut leaders: Vec<Option<u64>> = vec![None; 1 << h.nrows()];
        for (e, &s) in syndromes.iter().enumerate() {
            let slot = &mut leaders[s as usize];
            let e = e as u64;
            if slot.map_or(true, |l| pattern_cmp(e, l) == Ordering::Less) {
                *slot = Some(e);
            }
        }
        Ok(Self {
            n,
            syndromes,
            leaders: leaders.into_iter().map(|l| l.expect("every syndrome is hit")).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Estimated error pattern for received mask `y`.
    pub fn leader(&self, y: u64) -> u64 {
        self.leaders[self.syndromes[y as usize] as usize]
    }

    pub fn decode_mask(&self, y: u64) -> u64 {
        y ^ self.leader(y)
    }
}

pub fn decode(code: &LinearCode, y: &BitVector, rule: DecodeRule) -> Result<BitVector> {
    rule.check()?;
    if y.len() != code.len() {
        return Err(Error::LengthMismatch {
            expected: code.len(),
            got: y.len(),
        });
    }
    let dec = SyndromeDecoder::new(code)?;
    let y = y.to_u64().expect("n <= 16");
    Ok(BitVector::from_u64(code.len(), dec.decode_mask(y)))
}

/// Decodes to `C₁`, then names the coset in `C₁/C₂` by its index in
/// [`crate::gf2::cosets`].
#[derive(Clone, Debug)]
pub struct CosetDecoder {
    inner: SyndromeDecoder,
    /// Syndromes under `C₂` of `C₁` words, mapped to coset indices.
    index: std::collections::HashMap<u64, usize>,
    s2: Vec<u64>,
    key_bits: usize,
}

impl CosetDecoder {
    pub fn new(c1: &LinearCode, c2: &LinearCode) -> Result<Self> {
        if c1.len() != c2.len() {
            return Err(Error::LengthMismatch {
                expected: c1.len(),
                got: c2.len(),
            });
        }
        if !c2.is_subcode_of(c1) {
            return Err(Error::Containment("C2 must be a subcode of C1".into()));
        }
        let inner = SyndromeDecoder::new(c1)?;
        let s2 = syndrome_table(&c2.parity_check_matrix(), c1.len());
        let reps = crate::gf2::cosets(c1, c2)?;
        let index = reps
            .iter()
            .enumerate()
            .map(|(k, r)| (s2[r.to_u64().expect("n <= 16") as usize], k))
            .collect();
        Ok(Self {
            inner,
            index,
            s2,
            key_bits: reps.len().trailing_zeros() as usize,
        })
    }

    pub fn key_bits(&self) -> usize {
        self.key_bits
    }

    /// Coset index of a `C₁` codeword.
    pub fn key_of(&self, codeword: u64) -> usize {
        self.index[&self.s2[codeword as usize]]
    }

    pub fn decode_mask(&self, y: u64) -> usize {
        self.key_of(self.inner.decode_mask(y))
    }

    /// Whether error `e` leaves the decoded coset unchanged.
    pub fn corrects(&self, e: u64) -> bool {
        self.s2[(e ^ self.inner.leader(e)) as usize] == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn repetition_decoding() {
        let c = LinearCode::repetition(3);
        assert_eq!(decode(&c, &bv("110"), DecodeRule::MinDistance).unwrap(), bv("111"));
        assert_eq!(decode(&c, &bv("001"), DecodeRule::MinDistance).unwrap(), bv("000"));
        for w in c.codewords().unwrap() {
            assert_eq!(decode(&c, &w, DecodeRule::MinDistance).unwrap(), w);
        }
    }

    #[test]
    fn ties_pick_the_lexicographically_smallest_error() {
        let c = LinearCode::repetition(2);
        // errors 10 and 01 tie; 01 is smaller, so 10 decodes to 11
        assert_eq!(decode(&c, &bv("10"), DecodeRule::MinDistance).unwrap(), bv("11"));
        assert_eq!(decode(&c, &bv("01"), DecodeRule::MinDistance).unwrap(), bv("00"));
        for _ in 0..3 {
            assert_eq!(decode(&c, &bv("10"), DecodeRule::MinDistance).unwrap(), bv("11"));
        }
    }

    #[test]
    fn rule_domain() {
        let c = LinearCode::repetition(3);
        let y = bv("100");
        assert!(decode(&c, &y, DecodeRule::MaxLikelihood { p: 0.6 }).is_err());
        assert!(decode(&c, &y, DecodeRule::MaxLikelihood { p: 0.0 }).is_err());
        assert_eq!(
            decode(&c, &y, DecodeRule::MaxLikelihood { p: 0.2 }).unwrap(),
            decode(&c, &y, DecodeRule::MinDistance).unwrap()
        );
        assert!(decode(&c, &bv("10"), DecodeRule::MinDistance).is_err());
    }

    #[test]
    fn mask_order_matches_bitvector_order() {
        for a in 0..16u64 {
            for b in 0..16u64 {
                let (x, y) = (BitVector::from_u64(4, a), BitVector::from_u64(4, b));
                assert_eq!(lex_cmp_mask(a, b), x.lex_cmp(&y));
            }
        }
    }

    #[test]
    fn coset_keys() {
        let c1 = LinearCode::full(3);
        let c2 = LinearCode::repetition(3);
        let d = CosetDecoder::new(&c1, &c2).unwrap();
        assert_eq!(d.key_bits(), 2);
        assert_eq!(d.key_of(0b000), d.key_of(0b111));
        assert_ne!(d.key_of(0b001), d.key_of(0b000));
        assert!(d.corrects(0b111));
        assert!(!d.corrects(0b001));
        assert!(CosetDecoder::new(&c2, &c1).is_err());
    }
}
