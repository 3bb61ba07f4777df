use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

pub(crate) const HERMITIAN_TOL: f64 = 1e-12;
pub(crate) const PSD_TOL: f64 = 1e-10;
pub(crate) const INVERSE_CUTOFF: f64 = 1e-12;

pub(crate) fn eigen(m: &CMatrix) -> (DVector<f64>, CMatrix) {
    let e = m.clone().symmetric_eigen();
    (e.eigenvalues, e.eigenvectors)
}

pub(crate) fn eigenvalues(m: &CMatrix) -> Vec<f64> {
    m.clone().symmetric_eigenvalues().iter().copied().collect()
}

/// `f(m)` for Hermitian `m` via its eigendecomposition.
pub(crate) fn herm_fn(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (vals, vecs) = eigen(m);
    let d = DVector::from_iterator(vals.len(), vals.iter().map(|&l| C64::new(f(l), 0.0)));
    &vecs * CMatrix::from_diagonal(&d) * vecs.adjoint()
}

/// `m^e` on the support (eigenvalues above the cutoff), zero elsewhere.
pub(crate) fn support_power(m: &CMatrix, e: f64) -> CMatrix {
    herm_fn(m, |l| if l > INVERSE_CUTOFF { l.powf(e) } else { 0.0 })
}

pub(crate) fn trace_norm(m: &CMatrix) -> f64 {
    eigenvalues(m).iter().map(|l| l.abs()).sum()
}

/// `Tr X²` for Hermitian `X`.
pub(crate) fn trace_square(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// `−Tr X log₂ X` with negative eigenvalues (numerical noise) clipped.
pub(crate) fn entropy_unnormalized(m: &CMatrix) -> f64 {
    eigenvalues(m)
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum()
}

pub(crate) fn real_trace(m: &CMatrix) -> f64 {
    m.trace().re
}

pub(crate) fn check_hermitian_psd(m: &CMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Dimension("operator must be square".into()));
    }
    let asym = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if asym > HERMITIAN_TOL {
        return Err(Error::Domain(format!("operator is not Hermitian (deviation {asym:e})")));
    }
    let low = eigenvalues(m).into_iter().fold(f64::INFINITY, f64::min);
    if low < -PSD_TOL {
        return Err(Error::Domain(format!("operator has negative eigenvalue {low:e}")));
    }
    Ok(())
}

/// A Hermitian, positive semidefinite operator with trace in `(0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    m: CMatrix,
}

impl DensityOperator {
    pub fn new(m: CMatrix) -> Result<Self> {
        check_hermitian_psd(&m)?;
        let tr = real_trace(&m);
        if !(tr > 0.0 && tr <= 1.0 + PSD_TOL) {
            return Err(Error::Domain(format!("trace {tr} outside (0,1]")));
        }
        Ok(Self { m })
    }

    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        Self { m }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::diagonal(&vec![1.0 / dim as f64; dim]).expect("valid mixed state")
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let d = DVector::from_iterator(probs.len(), probs.iter().map(|&p| C64::new(p, 0.0)));
        Self::new(CMatrix::from_diagonal(&d))
    }

    /// `|ψ⟩⟨ψ|` for a normalized copy of `psi`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let v = DVector::from_column_slice(psi);
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::Domain("zero state vector".into()));
        }
        let v = v / C64::new(norm, 0.0);
        Self::new(&v * v.adjoint())
    }

    /// `GG†/Tr(GG†)` for a complex Gaussian `G`; full rank almost surely.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let g = random_gaussian(dim, dim, rng);
        let m = &g * g.adjoint();
        let tr = real_trace(&m);
        Self::from_matrix_unchecked(m / C64::new(tr, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        real_trace(&self.m)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigenvalues(&self.m)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        entropy_unnormalized(&self.m)
    }
}

pub(crate) fn random_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    })
}

/// A point drawn uniformly from the probability simplex.
pub(crate) fn random_simplex<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}
