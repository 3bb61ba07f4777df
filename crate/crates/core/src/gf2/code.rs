use rand::Rng;

use super::bitvec::BitVector;
use super::matrix::BinaryMatrix;
use super::weight::WeightDistribution;
use crate::error::{cap, Error, Result};

/// Largest code dimension whose codewords we are willing to enumerate.
pub const CODEWORD_CAP: usize = 24;
/// Largest `dim C1 − dim C2` for coset listings.
pub const COSET_CAP: usize = 20;

/// A binary linear code, stored by its canonical (RREF) generator matrix.
///
/// Two codes are equal iff their canonical bases are equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearCode {
    n: usize,
    basis: Vec<BitVector>,
    pivots: Vec<usize>,
}

/// Null space `{x : Mx = 0}` of `m`.
pub fn kernel(m: &BinaryMatrix) -> LinearCode {
    let n = m.ncols();
    let ech = m.echelon();
    let is_pivot = {
        let mut v = vec![false; n];
        for &p in &ech.pivots {
            v[p] = true;
        }
        v
    };
    let basis = (0..n)
        .filter(|&j| !is_pivot[j])
        .map(|free| {
            let mut x = BitVector::unit(n, free);
            for (row, &p) in ech.matrix.rows().iter().zip(&ech.pivots) {
                if row.get(free) {
                    x.set(p, true);
                }
            }
            x
        })
        .collect();
    LinearCode::span(n, basis).expect("kernel vectors have length n")
}

/// Coset representatives of `c1 / c2`, indexed by the integer whose bits select
/// complement basis vectors; index 0 is the zero vector.
pub fn cosets(c1: &LinearCode, c2: &LinearCode) -> Result<Vec<BitVector>> {
    let comp = c2.complement_in(c1)?;
    cap("coset dimension", comp.len(), COSET_CAP)?;
    let mut reps = Vec::with_capacity(1 << comp.len());
    for idx in 0u64..(1u64 << comp.len()) {
        let mut v = BitVector::zeros(c1.len());
        for (i, b) in comp.iter().enumerate() {
            if (idx >> i) & 1 == 1 {
                v.xor_assign(b);
            }
        }
        reps.push(v);
    }
    Ok(reps)
}

impl LinearCode {
    /// The span of `generators` (dependent or zero rows are allowed).
    pub fn span(n: usize, generators: Vec<BitVector>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("code length must be positive".into()));
        }
        let g = BinaryMatrix::from_rows(n, generators)?;
        let ech = g.echelon();
        Ok(Self {
            n,
            basis: ech.matrix.rows().to_vec(),
            pivots: ech.pivots,
        })
    }

    pub fn from_generator(g: &BinaryMatrix) -> Result<Self> {
        Self::span(g.ncols(), g.rows().to_vec())
    }

    pub fn zero(n: usize) -> Self {
        Self::span(n, vec![]).expect("valid length")
    }

    pub fn full(n: usize) -> Self {
        Self::span(n, (0..n).map(|i| BitVector::unit(n, i)).collect()).expect("valid length")
    }

    pub fn repetition(n: usize) -> Self {
        Self::span(n, vec![BitVector::ones(n)]).expect("valid length")
    }

    /// Single parity-check (even weight) code.
    pub fn even_weight(n: usize) -> Self {
        Self::repetition(n).dual()
    }

    /// Uniformly random `t`-dimensional subspace of F₂ⁿ.
    pub fn random<R: Rng + ?Sized>(n: usize, t: usize, rng: &mut R) -> Result<Self> {
        Self::zero(n).random_extension(t, rng)
    }

    /// Uniformly random `t`-dimensional code containing `self`.
    pub fn random_extension<R: Rng + ?Sized>(&self, t: usize, rng: &mut R) -> Result<Self> {
        if t < self.dimension() || t > self.n {
            return Err(Error::Dimension(format!(
                "cannot extend a {}-dimensional code to dimension {t} in length {}",
                self.dimension(),
                self.n
            )));
        }
        let mut code = self.clone();
        while code.dimension() < t {
            let v = BitVector::random(self.n, rng);
            if !code.contains(&v) {
                let mut gens = code.basis.clone();
                gens.push(v);
                code = Self::span(self.n, gens)?;
            }
        }
        Ok(code)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BitVector] {
        &self.basis
    }

    pub fn generator_matrix(&self) -> BinaryMatrix {
        BinaryMatrix::from_rows(self.n, self.basis.clone()).expect("basis rows have length n")
    }

    /// `H(C) = G(C⊥)`.
    pub fn parity_check_matrix(&self) -> BinaryMatrix {
        self.dual().generator_matrix()
    }

    /// Canonical representative of `x + C`: zero on every pivot column.
    pub fn reduce(&self, x: &BitVector) -> BitVector {
        let mut r = x.clone();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if r.get(p) {
                r.xor_assign(row);
            }
        }
        r
    }

    pub fn contains(&self, x: &BitVector) -> bool {
        x.len() == self.n && self.reduce(x).is_zero()
    }

    pub fn is_subcode_of(&self, other: &LinearCode) -> bool {
        self.n == other.n && self.basis.iter().all(|b| other.contains(b))
    }

    pub fn dual(&self) -> LinearCode {
        kernel(&self.generator_matrix())
    }

    /// Vectors of `outer` extending a basis of `self` to a basis of `outer`.
    pub fn complement_in(&self, outer: &LinearCode) -> Result<Vec<BitVector>> {
        if !self.is_subcode_of(outer) {
            return Err(Error::Containment(format!(
                "{}-dimensional code is not contained in the {}-dimensional code",
                self.dimension(),
                outer.dimension()
            )));
        }
        let mut acc = self.clone();
        let mut out = Vec::new();
        for b in outer.basis() {
            if !acc.contains(b) {
                out.push(b.clone());
                let mut gens = acc.basis.clone();
                gens.push(b.clone());
                acc = Self::span(self.n, gens)?;
            }
        }
        Ok(out)
    }

    /// `σ(C) = {x^σ : x ∈ C}` with `x^σ_i = x_{σ(i)}`.
    pub fn permute(&self, perm: &[usize]) -> LinearCode {
        Self::span(self.n, self.basis.iter().map(|b| b.permute(perm)).collect())
            .expect("permutation preserves length")
    }

    /// Appends `extra` zero coordinates to every codeword.
    pub fn pad_zeros(&self, extra: usize) -> LinearCode {
        let z = BitVector::zeros(extra);
        Self::span(self.n + extra, self.basis.iter().map(|b| b.concat(&z)).collect())
            .expect("padded rows are consistent")
    }

    /// All codewords as packed words, enumerated in Gray-code order.
    pub fn codeword_masks(&self) -> Result<Vec<u64>> {
        if self.n > 64 {
            return Err(Error::Dimension(
                "packed codeword enumeration needs n <= 64".into(),
            ));
        }
        cap("code dimension", self.dimension(), CODEWORD_CAP)?;
        let basis: Vec<u64> = self.basis.iter().map(|b| b.to_u64().unwrap()).collect();
        Ok(gray_span(&basis))
    }

    /// Every codeword, for any length.
    pub fn codewords(&self) -> Result<Vec<BitVector>> {
        cap("code dimension", self.dimension(), CODEWORD_CAP)?;
        let k = self.dimension();
        let mut out = Vec::with_capacity(1 << k);
        let mut cur = BitVector::zeros(self.n);
        out.push(cur.clone());
        for i in 1u64..(1u64 << k) {
            cur.xor_assign(&self.basis[i.trailing_zeros() as usize]);
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// Exact normalized histogram of codeword weights.
    pub fn weight_distribution(&self) -> Result<WeightDistribution> {
        cap("code dimension", self.dimension(), CODEWORD_CAP)?;
        let mut counts = vec![0u64; self.n + 1];
        if self.n <= 64 {
            for w in self.codeword_masks()? {
                counts[w.count_ones() as usize] += 1;
            }
        } else {
            for w in self.codewords()? {
                counts[w.weight()] += 1;
            }
        }
        Ok(WeightDistribution::from_counts(&counts))
    }
}

/// All `2^k` sums of the given basis words, via Gray code.
pub(crate) fn gray_span(basis: &[u64]) -> Vec<u64> {
    let k = basis.len();
    let mut out = Vec::with_capacity(1 << k);
    let mut cur = 0u64;
    out.push(cur);
    for i in 1u64..(1u64 << k) {
        cur ^= basis[i.trailing_zeros() as usize];
        out.push(cur);
    }
    out
}
