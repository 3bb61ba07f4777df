//! Linear hash families `f_r(x) = M_r x` and their kernel codes.

pub mod clmul;

use rand::Rng;
use serde::Serialize;

use crate::error::{cap, Error, Result};
use crate::gf2::{kernel, parse_bit_rows, BinaryMatrix, BitVector, LinearCode};

/// Inputs at least this long go through the carry-less product.
pub const FAST_PATH_MIN_N: usize = 64;
/// Largest parameter width we enumerate exhaustively.
pub const MEMBER_BITS_CAP: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Structure {
    General,
    /// `diag` has `n + m − 1` bits; entry `(i, j)` is `diag[i − j + n − 1]`.
    Toeplitz { diag: BitVector },
    /// `(T | I_m)` with `T` the `m × (n − m)` Toeplitz block on `diag`.
    ModifiedToeplitz { diag: BitVector },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HashFunction {
    matrix: BinaryMatrix,
    structure: Structure,
}

fn toeplitz_block(rows: usize, cols: usize, diag: &BitVector) -> BinaryMatrix {
    let mut m = BinaryMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if diag.get(i + cols - 1 - j) {
                m.set(i, j, true);
            }
        }
    }
    m
}

/// `y_i = Σ_j diag[i − j + cols − 1] x_j`, i.e. coefficients `cols−1 ..` of
/// `D(z)·X(z)`.
fn toeplitz_apply_fast(rows: usize, cols: usize, diag: &BitVector, x: &BitVector) -> BitVector {
    let prod = clmul::poly_mul(diag.words(), x.words());
    BitVector::from_words(rows, clmul::extract_bits(&prod, cols - 1, rows))
}

impl HashFunction {
    pub fn from_matrix(matrix: BinaryMatrix) -> Self {
        Self {
            matrix,
            structure: Structure::General,
        }
    }

    /// `m × n` Toeplitz matrix on `n + m − 1` diagonal bits.
    pub fn toeplitz(n: usize, m: usize, diag: BitVector) -> Result<Self> {
        check_dims(n, m)?;
        if diag.len() != n + m - 1 {
            return Err(Error::LengthMismatch {
                expected: n + m - 1,
                got: diag.len(),
            });
        }
        Ok(Self {
            matrix: toeplitz_block(m, n, &diag),
            structure: Structure::Toeplitz { diag },
        })
    }

    /// `(T | I_m)` with `T` an `m × (n − m)` Toeplitz block on `n − 1` diagonal bits.
    pub fn modified_toeplitz(n: usize, m: usize, diag: BitVector) -> Result<Self> {
        check_dims(n, m)?;
        if diag.len() != n - 1 {
            return Err(Error::LengthMismatch {
                expected: n - 1,
                got: diag.len(),
            });
        }
        let t = if n > m {
            toeplitz_block(m, n - m, &diag)
        } else {
            BinaryMatrix::zeros(m, 0)
        };
        Ok(Self {
            matrix: t.hstack(&BinaryMatrix::identity(m))?,
            structure: Structure::ModifiedToeplitz { diag },
        })
    }

    pub fn n(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn m(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &BinaryMatrix {
        &self.matrix
    }

    pub fn is_toeplitz_structured(&self) -> bool {
        !matches!(self.structure, Structure::General)
    }

    /// `M x`, via the carry-less product for long structured inputs.
    pub fn apply(&self, x: &BitVector) -> Result<BitVector> {
        if self.n() >= FAST_PATH_MIN_N && self.is_toeplitz_structured() {
            self.apply_fast(x)
        } else {
            self.apply_schoolbook(x)
        }
    }

    pub fn apply_schoolbook(&self, x: &BitVector) -> Result<BitVector> {
        self.matrix.mul_vec(x)
    }

    /// Structured evaluation for any length; falls back to schoolbook for
    /// unstructured matrices.
    pub fn apply_fast(&self, x: &BitVector) -> Result<BitVector> {
        let (n, m) = (self.n(), self.m());
        if x.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: x.len(),
            });
        }
        match &self.structure {
            Structure::General => self.apply_schoolbook(x),
            Structure::Toeplitz { diag } => Ok(toeplitz_apply_fast(m, n, diag, x)),
            Structure::ModifiedToeplitz { diag } => {
                let x2 = x.slice(n - m, m);
                if n == m {
                    return Ok(x2);
                }
                let x1 = x.slice(0, n - m);
                let mut y = toeplitz_apply_fast(m, n - m, diag, &x1);
                y.xor_assign(&x2);
                Ok(y)
            }
        }
    }

    /// `Ker f`, the code identified with this function.
    pub fn kernel_code(&self) -> LinearCode {
        kernel(&self.matrix)
    }

    /// For `(T | I_m)`, the function `N = (I_{n−m} | Tᵀ)` with `M Nᵀ = 0`.
    pub fn dual_function(&self) -> Option<HashFunction> {
        match &self.structure {
            Structure::ModifiedToeplitz { .. } if self.n() > self.m() => {
                let (n, m) = (self.n(), self.m());
                let t = BinaryMatrix::from_rows(
                    n - m,
                    self.matrix.rows().iter().map(|r| r.slice(0, n - m)).collect(),
                )
                .ok()?;
                let nmat = BinaryMatrix::identity(n - m).hstack(&t.transpose()).ok()?;
                Some(HashFunction::from_matrix(nmat))
            }
            _ => None,
        }
    }

    /// Reads the `"n m"` + `m` rows of `n` bits format.
    pub fn parse(text: &str) -> Result<Self> {
        let mat = parse_bit_rows(text)?;
        check_dims(mat.ncols(), mat.nrows())?;
        Ok(Self::from_matrix(mat))
    }

    pub fn to_text(&self) -> String {
        format!("{} {}\n{}\n", self.n(), self.m(), self.matrix)
    }
}

fn check_dims(n: usize, m: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::Dimension("n and m must be positive".into()));
    }
    if m > n {
        return Err(Error::Dimension(format!("output length m={m} exceeds n={n}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Toeplitz,
    ModifiedToeplitz,
    RandomLinear,
    ExplicitList,
    FromCodeFamily,
}

/// An indexable family `{f_r | r ∈ I}`. Parametric kinds enumerate members
/// by the little-endian integer encoding of their free bits.
#[derive(Clone, Debug)]
pub struct HashFamily {
    kind: FamilyKind,
    n: usize,
    m: usize,
    list: Vec<HashFunction>,
}

impl HashFamily {
    pub fn toeplitz(n: usize, m: usize) -> Result<Self> {
        Self::parametric(FamilyKind::Toeplitz, n, m)
    }

    pub fn modified_toeplitz(n: usize, m: usize) -> Result<Self> {
        Self::parametric(FamilyKind::ModifiedToeplitz, n, m)
    }

    /// All `m × n` matrices.
    pub fn random_linear(n: usize, m: usize) -> Result<Self> {
        Self::parametric(FamilyKind::RandomLinear, n, m)
    }

    fn parametric(kind: FamilyKind, n: usize, m: usize) -> Result<Self> {
        check_dims(n, m)?;
        Ok(Self {
            kind,
            n,
            m,
            list: vec![],
        })
    }

    pub fn explicit(list: Vec<HashFunction>) -> Result<Self> {
        Self::listed(FamilyKind::ExplicitList, list)
    }

    /// One function per code, with `H(C) = G(C⊥)` as the matrix. Output
    /// lengths follow the code dimensions; `m` reports the largest.
    pub fn from_codes(codes: &[LinearCode]) -> Result<Self> {
        let list = codes
            .iter()
            .map(|c| {
                if c.dimension() == c.len() {
                    // kernel is everything; use a single zero row
                    HashFunction::from_matrix(BinaryMatrix::zeros(1, c.len()))
                } else {
                    HashFunction::from_matrix(c.parity_check_matrix())
                }
            })
            .collect();
        Self::listed(FamilyKind::FromCodeFamily, list)
    }

    fn listed(kind: FamilyKind, list: Vec<HashFunction>) -> Result<Self> {
        let first = list.first().ok_or(Error::Missing("family members"))?;
        let n = first.n();
        if let Some(bad) = list.iter().find(|h| h.n() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                got: bad.n(),
            });
        }
        let m = list.iter().map(HashFunction::m).max().unwrap_or(0);
        Ok(Self { kind, n, m, list })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of free parameter bits, for parametric kinds.
    pub fn param_bits(&self) -> Option<usize> {
        match self.kind {
            FamilyKind::Toeplitz => Some(self.n + self.m - 1),
            FamilyKind::ModifiedToeplitz => Some(self.n - 1),
            FamilyKind::RandomLinear => Some(self.n * self.m),
            _ => None,
        }
    }

    /// `|I|`, saturating at `u128::MAX`.
    pub fn size(&self) -> u128 {
        match self.param_bits() {
            Some(b) if b < 128 => 1u128 << b,
            Some(_) => u128::MAX,
            None => self.list.len() as u128,
        }
    }

    pub fn member_from_params(&self, params: BitVector) -> Result<HashFunction> {
        let (n, m) = (self.n, self.m);
        match self.kind {
            FamilyKind::Toeplitz => HashFunction::toeplitz(n, m, params),
            FamilyKind::ModifiedToeplitz => HashFunction::modified_toeplitz(n, m, params),
            FamilyKind::RandomLinear => {
                if params.len() != n * m {
                    return Err(Error::LengthMismatch {
                        expected: n * m,
                        got: params.len(),
                    });
                }
                let rows = (0..m).map(|i| params.slice(i * n, n)).collect();
                Ok(HashFunction::from_matrix(BinaryMatrix::from_rows(n, rows)?))
            }
            _ => Err(Error::Domain("listed families have no parameter encoding".into())),
        }
    }

    pub fn member(&self, index: u128) -> Result<HashFunction> {
        if index >= self.size() {
            return Err(Error::Domain(format!(
                "index {index} outside family of size {}",
                self.size()
            )));
        }
        match self.param_bits() {
            Some(bits) => {
                let mut p = BitVector::zeros(bits);
                for i in 0..bits.min(128) {
                    if (index >> i) & 1 == 1 {
                        p.set(i, true);
                    }
                }
                self.member_from_params(p)
            }
            None => Ok(self.list[index as usize].clone()),
        }
    }

    /// Uniform member.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> HashFunction {
        match self.param_bits() {
            Some(bits) => self
                .member_from_params(BitVector::random(bits, rng))
                .expect("parameter width matches"),
            None => self.list[rng.gen_range(0..self.list.len())].clone(),
        }
    }

    /// Every member in index order (refuses more than `2^MEMBER_BITS_CAP`).
    pub fn members(&self) -> Result<Vec<HashFunction>> {
        if let Some(bits) = self.param_bits() {
            cap("family parameter bits", bits, MEMBER_BITS_CAP)?;
        }
        (0..self.size()).map(|i| self.member(i)).collect()
    }

    /// Kernel codes of every member, in index order.
    pub fn kernel_codes(&self) -> Result<Vec<LinearCode>> {
        Ok(self.members()?.iter().map(HashFunction::kernel_code).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn toeplitz_two_by_one_listing() {
        let fam = HashFamily::toeplitz(2, 1).unwrap();
        let rows: Vec<String> = fam
            .members()
            .unwrap()
            .iter()
            .map(|h| h.matrix().to_string())
            .collect();
        assert_eq!(rows, ["00", "01", "10", "11"]);
    }

    #[test]
    fn toeplitz_entries_are_constant_on_diagonals() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = HashFamily::toeplitz(7, 4).unwrap().sample(&mut rng);
        for i in 1..4 {
            for j in 1..7 {
                assert_eq!(h.matrix().get(i, j), h.matrix().get(i - 1, j - 1));
            }
        }
    }

    #[test]
    fn modified_toeplitz_zero_diagonals() {
        let h = HashFunction::modified_toeplitz(6, 2, BitVector::zeros(5)).unwrap();
        assert_eq!(h.matrix().to_string(), "000010\n000001");
        let x = bv("101101");
        assert_eq!(h.apply(&x).unwrap(), bv("01"));
        assert_eq!(h.kernel_code().dimension(), 4);
    }

    #[test]
    fn modified_toeplitz_members_have_full_rank() {
        for (n, m) in [(5, 2), (6, 3), (7, 1), (4, 4)] {
            for h in HashFamily::modified_toeplitz(n, m).unwrap().members().unwrap() {
                assert_eq!(h.matrix().rank(), m);
                assert_eq!(h.kernel_code().dimension(), n - m);
            }
        }
    }

    #[test]
    fn zero_member_has_full_kernel() {
        let fam = HashFamily::toeplitz(5, 3).unwrap();
        assert_eq!(fam.member(0).unwrap().kernel_code().dimension(), 5);
    }

    #[test]
    fn kernel_dimension_bounds() {
        for h in HashFamily::random_linear(4, 2).unwrap().members().unwrap() {
            let d = h.kernel_code().dimension();
            assert!((2..=4).contains(&d));
        }
    }

    #[test]
    fn dual_function_is_orthogonal() {
        let fam = HashFamily::modified_toeplitz(7, 3).unwrap();
        for h in fam.members().unwrap() {
            let nf = h.dual_function().unwrap();
            let prod = h.matrix().mul(&nf.matrix().transpose()).unwrap();
            assert!(prod.is_zero());
            // rows of N span the kernel of M
            assert_eq!(
                LinearCode::from_generator(nf.matrix()).unwrap(),
                h.kernel_code()
            );
        }
    }

    #[test]
    fn fast_path_matches_schoolbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let shapes = [(64, 1), (64, 64), (100, 37), (200, 130), (65, 1), (8, 3), (130, 129)];
        for trial in 0..10_000 {
            let (n, m) = shapes[trial % shapes.len()];
            let fam = if trial % 2 == 0 {
                HashFamily::toeplitz(n, m).unwrap()
            } else {
                HashFamily::modified_toeplitz(n, m).unwrap()
            };
            let h = fam.sample(&mut rng);
            let x = BitVector::random(n, &mut rng);
            assert_eq!(h.apply_fast(&x).unwrap(), h.apply_schoolbook(&x).unwrap());
        }
    }

    #[test]
    fn zero_input_maps_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for n in [3, 64, 150] {
            let h = HashFamily::toeplitz(n, 2).unwrap().sample(&mut rng);
            assert!(h.apply(&BitVector::zeros(n)).unwrap().is_zero());
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(HashFamily::toeplitz(2, 3).is_err());
        let h = HashFamily::toeplitz(4, 2).unwrap().member(3).unwrap();
        assert!(h.apply(&BitVector::zeros(5)).is_err());
        assert!(HashFamily::toeplitz(4, 2).unwrap().member(32).is_err());
    }

    #[test]
    fn hash_file_round_trip() {
        let h = HashFunction::parse("4 2\n1010\n0110\n").unwrap();
        assert_eq!((h.n(), h.m()), (4, 2));
        assert_eq!(HashFunction::parse(&h.to_text()).unwrap(), h);
        assert!(HashFunction::parse("2 3\n10\n01\n11\n").is_err());
    }
}
