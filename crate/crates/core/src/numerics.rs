//! Dense complex linear algebra: Fourier matrices, Hermitian eigenvalues,
//! spectral-calculus unitaries, and orbit autocorrelations.
//!
//! Everything here is a pure function on immutable inputs. Matrices are
//! dense `N×N` complex; no structured-FFT or sparse shortcuts are taken.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Hermiticity tolerance required by operations that consume Hermitian input.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// A normalized state in an `N`-dimensional Hilbert space.
///
/// The Euclidean norm is 1 within 1e-12 after construction; applying a
/// unitary keeps it there.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    data: DVector<Complex64>,
}

impl StateVector {
    /// Builds a state from amplitudes, normalizing them.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::invalid("state vector must have dimension >= 1"));
        }
        let data = DVector::from_vec(amplitudes);
        let norm = data.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::invalid(format!(
                "state vector norm must be finite and nonzero, got {norm}"
            )));
        }
        Ok(StateVector { data: data / Complex64::new(norm, 0.0) })
    }

    /// Basis vector `|n>` in dimension `dim`.
    pub fn basis(dim: usize, n: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::invalid(format!(
                "basis index {n} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[n] = Complex64::new(1.0, 0.0);
        StateVector::new(amps)
    }

    /// Wraps an already-normalized vector without rescaling.
    /// Used internally for results of unitary evolution.
    pub(crate) fn from_normalized(data: DVector<Complex64>) -> Self {
        StateVector { data }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.data.as_slice()
    }

    pub fn norm(&self) -> f64 {
        self.data.norm()
    }

    /// Inner product `<self|other>`, conjugate-linear in `self`.
    pub fn overlap(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::invalid(format!(
                "dimension mismatch: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self.data.dotc(&other.data))
    }

    pub(crate) fn vector(&self) -> &DVector<Complex64> {
        &self.data
    }
}

/// A dense `N×N` complex matrix in the basis `|0>..|N-1>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    m: DMatrix<Complex64>,
}

impl Operator {
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::invalid(format!(
                "operator must be square and nonempty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Operator { m })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("operator dimension must be >= 1"));
        }
        Ok(Operator { m: DMatrix::identity(dim, dim) })
    }

    /// Diagonal operator from the given entries.
    pub fn diagonal(entries: &[Complex64]) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("operator dimension must be >= 1"));
        }
        let dim = entries.len();
        let mut m = DMatrix::zeros(dim, dim);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        Ok(Operator { m })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn adjoint(&self) -> Operator {
        Operator { m: self.m.adjoint() }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Operator) -> Result<Operator> {
        if self.dim() != rhs.dim() {
            return Err(Error::invalid(format!(
                "dimension mismatch: {} vs {}",
                self.dim(),
                rhs.dim()
            )));
        }
        Ok(Operator { m: &self.m * &rhs.m })
    }

    /// Applies the operator to a state. The caller is responsible for only
    /// applying unitaries when the result is supposed to stay normalized.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if self.dim() != psi.dim() {
            return Err(Error::invalid(format!(
                "dimension mismatch: operator {} vs state {}",
                self.dim(),
                psi.dim()
            )));
        }
        Ok(StateVector::from_normalized(&self.m * psi.vector()))
    }

    /// Max-entry magnitude of `H - H†`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.m[(i, j)] - self.m[(j, i)].conj()).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }
}

/// Sorted real eigenvalues `λ_1 <= … <= λ_K` of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSample {
    values: Vec<f64>,
}

impl SpectrumSample {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("spectrum must contain at least one value"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::numerical("spectrum contains non-finite values"));
        }
        values.sort_by(|a, b| a.total_cmp(b));
        Ok(SpectrumSample { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Discrete Fourier transform on `C^M`, entry `(n, m) = ω^{nm}/√M` with
/// `ω = e^{2πi/M}`. The `1/√M` prefactor makes it unitary.
pub fn dft_matrix(dim: usize) -> Result<Operator> {
    if dim == 0 {
        return Err(Error::invalid("DFT dimension must be >= 1"));
    }
    let scale = 1.0 / (dim as f64).sqrt();
    let mut m = DMatrix::zeros(dim, dim);
    for row in 0..dim {
        for col in 0..dim {
            // reduce n*m mod M before taking the angle to keep phases exact
            let phase = TAU * ((row * col) % dim) as f64 / dim as f64;
            m[(row, col)] = Complex64::from_polar(scale, phase);
        }
    }
    Operator::from_matrix(m)
}

/// Max-entry magnitude of `U†U - I`; zero for exact unitaries.
pub fn unitarity_defect(u: &Operator) -> f64 {
    let n = u.dim();
    let prod = u.matrix().adjoint() * u.matrix();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let expected = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            let d = (prod[(i, j)] - expected).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

fn require_hermitian(h: &Operator, who: &str) -> Result<()> {
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::invalid(format!(
            "{who} requires a Hermitian matrix: defect {defect:.3e} exceeds {HERMITIAN_TOL:.1e}"
        )));
    }
    Ok(())
}

/// Symmetrized copy so the eigensolver sees an exactly Hermitian matrix.
fn symmetrize(h: &Operator) -> DMatrix<Complex64> {
    let n = h.dim();
    let m = h.matrix();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        out[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            out[(i, j)] = avg;
            out[(j, i)] = avg.conj();
        }
    }
    out
}

/// All eigenvalues of a Hermitian matrix, with multiplicity, sorted ascending.
pub fn hermitian_eigenvalues(h: &Operator) -> Result<SpectrumSample> {
    require_hermitian(h, "hermitian_eigenvalues")?;
    let sym = symmetrize(h);
    let eigs = sym.symmetric_eigenvalues();
    SpectrumSample::new(eigs.iter().cloned().collect())
}

/// Full eigendecomposition of a Hermitian matrix: `(eigenvalues, eigenvectors)`
/// with eigenvector `k` stored in column `k`.
pub fn hermitian_eigendecomposition(h: &Operator) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    require_hermitian(h, "hermitian_eigendecomposition")?;
    let sym = symmetrize(h);
    let eig = nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, 0)
        .ok_or_else(|| Error::numerical("Hermitian eigensolver did not converge"))?;
    Ok((eig.eigenvalues.iter().cloned().collect(), eig.eigenvectors))
}

/// `exp(-i * angle * H)` for Hermitian `H`, built by spectral calculus:
/// every eigenpair `Hv = λv` is mapped to `Uv = e^{-i·angle·λ} v`.
pub fn hermitian_evolution(h: &Operator, angle: f64) -> Result<Operator> {
    require_hermitian(h, "hermitian_evolution")?;
    let (eigvals, vecs) = hermitian_eigendecomposition(h)?;
    let n = h.dim();
    let mut scaled = vecs.clone();
    for (k, &lambda) in eigvals.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, -angle * lambda);
        for i in 0..n {
            scaled[(i, k)] *= phase;
        }
    }
    let u = scaled * vecs.adjoint();
    Operator::from_matrix(u)
}

/// Orbit autocorrelations `c_n = <ψ0 | U^n ψ0>` for `n = 0..K-1`, computed by
/// repeated application of `U` to a running state (never by matrix powers).
pub fn evolve_autocorrelations(
    u: &Operator,
    psi0: &StateVector,
    steps: usize,
) -> Result<Vec<Complex64>> {
    if steps == 0 {
        return Err(Error::invalid("autocorrelation length K must be >= 1"));
    }
    if u.dim() != psi0.dim() {
        return Err(Error::invalid(format!(
            "dimension mismatch: operator {} vs state {}",
            u.dim(),
            psi0.dim()
        )));
    }
    let mut out = Vec::with_capacity(steps);
    out.push(psi0.overlap(psi0)?);
    let mut phi = psi0.clone();
    for _ in 1..steps {
        phi = u.apply(&phi)?;
        out.push(psi0.overlap(&phi)?);
    }
    Ok(out)
}
