//! Gram matrices of vector sequences, their spectra, and summaries of the
//! empirical eigenvalue distribution.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigenvalues, Operator, SpectrumSample, StateVector};

/// `K×K` Hermitian positive semi-definite matrix of pairwise overlaps
/// `G_ij = <v_i|v_j>` with unit diagonal.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    m: DMatrix<Complex64>,
}

impl GramMatrix {
    pub fn order(&self) -> usize {
        self.m.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    fn validate(m: DMatrix<Complex64>) -> Result<Self> {
        let k = m.nrows();
        for i in 0..k {
            if (m[(i, i)] - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
                return Err(Error::invalid(format!(
                    "Gram diagonal entry {i} is {}, expected 1",
                    m[(i, i)]
                )));
            }
            for j in (i + 1)..k {
                if (m[(i, j)] - m[(j, i)].conj()).norm() > 1e-12 {
                    return Err(Error::invalid(format!(
                        "Gram matrix not Hermitian at ({i},{j})"
                    )));
                }
            }
        }
        Ok(GramMatrix { m })
    }
}

/// Gram matrix of a sequence of normalized vectors.
pub fn gram_from_vectors(vectors: &[StateVector]) -> Result<GramMatrix> {
    if vectors.is_empty() {
        return Err(Error::invalid("Gram matrix needs at least one vector"));
    }
    let dim = vectors[0].dim();
    for (i, v) in vectors.iter().enumerate() {
        if v.dim() != dim {
            return Err(Error::invalid(format!(
                "dimension mismatch: vector 0 has {dim}, vector {i} has {}",
                v.dim()
            )));
        }
    }
    let k = vectors.len();
    let mut m = DMatrix::zeros(k, k);
    for i in 0..k {
        m[(i, i)] = Complex64::new(vectors[i].vector().norm_squared(), 0.0);
        for j in (i + 1)..k {
            let overlap = vectors[i].overlap(&vectors[j])?;
            m[(i, j)] = overlap;
            m[(j, i)] = overlap.conj();
        }
    }
    GramMatrix::validate(m)
}

/// Gram matrix of a unitary orbit, reconstructed from its first row: for
/// `φ_n = U^n φ_0` unitarity gives `<φ_i|φ_j> = c_{j-i}`, so the whole
/// matrix is Hermitian Toeplitz in the autocorrelations `c`.
pub fn gram_from_autocorrelation(autocorr: &[Complex64]) -> Result<GramMatrix> {
    if autocorr.is_empty() {
        return Err(Error::invalid("autocorrelation sequence must be nonempty"));
    }
    let c0 = autocorr[0];
    if (c0 - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
        return Err(Error::invalid(format!(
            "autocorrelation c_0 must equal 1 within 1e-10, got {c0}"
        )));
    }
    for (n, c) in autocorr.iter().enumerate() {
        if c.norm() > 1.0 + 1e-10 {
            return Err(Error::invalid(format!(
                "autocorrelation magnitude |c_{n}| = {} exceeds 1",
                c.norm()
            )));
        }
    }
    // normalize away the float-level deviation of c_0 from 1 so the
    // diagonal is exactly unit
    let scale = 1.0 / c0.re;
    let k = autocorr.len();
    let mut m = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let v = if j >= i {
                autocorr[j - i] * scale
            } else {
                (autocorr[i - j] * scale).conj()
            };
            m[(i, j)] = if i == j { Complex64::new(1.0, 0.0) } else { v };
        }
    }
    GramMatrix::validate(m)
}

/// Eigenvalues of a Gram matrix, sorted ascending, with the small negative
/// values a PSD matrix picks up from rounding clamped to zero.
pub fn gram_spectrum(g: &GramMatrix) -> Result<SpectrumSample> {
    let k = g.order() as f64;
    let raw = hermitian_eigenvalues(&Operator::from_matrix(g.m.clone())?)?;
    let floor = -1e-8 * k;
    let mut values = Vec::with_capacity(raw.len());
    for &v in raw.values() {
        if v < floor {
            return Err(Error::numerical(format!(
                "Gram spectrum has eigenvalue {v} below the PSD floor {floor}"
            )));
        }
        values.push(if v < 0.0 { 0.0 } else { v });
    }
    SpectrumSample::new(values)
}

/// Normalized histogram of a spectrum: equal-width bins on `[0, upper]`,
/// each eigenvalue contributing `1/K` mass, values at or above `upper`
/// landing in the last bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    edges: Vec<f64>,
    masses: Vec<f64>,
}

impl Histogram {
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn bins(&self) -> usize {
        self.masses.len()
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }
}

pub fn empirical_histogram(s: &SpectrumSample, bins: usize, upper: f64) -> Result<Histogram> {
    if s.is_empty() {
        return Err(Error::invalid("cannot histogram an empty spectrum"));
    }
    if bins == 0 {
        return Err(Error::invalid("histogram needs at least one bin"));
    }
    if !(upper > 0.0) {
        return Err(Error::invalid(format!("histogram upper edge must be positive, got {upper}")));
    }
    let k = s.len();
    let width = upper / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in s.values() {
        let idx = ((v / width).floor() as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let edges = (0..=bins).map(|i| upper * i as f64 / bins as f64).collect();
    let masses = counts.iter().map(|&c| c as f64 / k as f64).collect();
    Ok(Histogram { edges, masses })
}

/// Headline statistics of a Gram spectrum: the trace, the smallest
/// eigenvalue, how many eigenvalues count as zero (linear dependencies),
/// and how much mass sits near one (vectors with small mutual overlaps).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSummary {
    pub trace: f64,
    pub min_eig: f64,
    pub zero_count: usize,
    pub near_one_mass: f64,
    pub zero_tol: f64,
    pub delta: f64,
}

pub fn spectrum_summary(s: &SpectrumSample, zero_tol: f64, delta: f64) -> Result<SpectrumSummary> {
    if !(zero_tol > 0.0) || !(delta > 0.0) {
        return Err(Error::invalid("summary tolerances must be positive"));
    }
    let k = s.len();
    let zero_count = s.values().iter().filter(|&&v| v < zero_tol).count();
    let near_one = s
        .values()
        .iter()
        .filter(|&&v| v >= 1.0 - delta && v <= 1.0 + delta)
        .count();
    Ok(SpectrumSummary {
        trace: s.sum(),
        min_eig: s.min(),
        zero_count,
        near_one_mass: near_one as f64 / k as f64,
        zero_tol,
        delta,
    })
}

/// Default zero tolerance used by summaries of a K×K Gram spectrum.
pub fn default_zero_tol(k: usize) -> f64 {
    1e-8 * k as f64
}

/// Default near-one window half-width.
pub const DEFAULT_DELTA: f64 = 0.1;

/// Default histogram bin count.
pub const DEFAULT_BINS: usize = 50;

/// Default histogram upper edge for aspect ratio `tau`: just past the upper
/// edge of the Marchenko-Pastur support.
pub fn default_histogram_upper(tau: f64) -> f64 {
    let root = tau.sqrt();
    (1.0 + root) * (1.0 + root) + 0.5
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn orthonormal_basis(dim: usize) -> Vec<StateVector> {
        (0..dim).map(|i| StateVector::basis(dim, i).unwrap()).collect()
    }

    #[test]
    fn gram_of_orthonormal_vectors_is_identity() {
        let vs = orthonormal_basis(4);
        let g = gram_from_vectors(&vs).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
                assert!((g.entry(i, j) - want).norm() < 1e-14);
            }
        }
        let s = gram_spectrum(&g).unwrap();
        for &v in s.values() {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gram_of_three_copies_has_rank_one_spectrum() {
        let v = StateVector::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let g = gram_from_vectors(&[v.clone(), v.clone(), v]).unwrap();
        let s = gram_spectrum(&g).unwrap();
        let want = [0.0, 0.0, 3.0];
        for (got, want) in s.values().iter().zip(want) {
            assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
        }
    }

    #[test]
    fn gram_spectrum_of_orthonormal_repetition_sequence() {
        // sequence ψ1 ψ2 ψ2 ψ1 ψ3 ψ4 ψ1 over an orthonormal alphabet
        let basis = orthonormal_basis(7);
        let seq = [
            basis[0].clone(),
            basis[1].clone(),
            basis[1].clone(),
            basis[0].clone(),
            basis[2].clone(),
            basis[3].clone(),
            basis[0].clone(),
        ];
        let g = gram_from_vectors(&seq).unwrap();
        let s = gram_spectrum(&g).unwrap();
        let want = [0.0, 0.0, 0.0, 1.0, 1.0, 2.0, 3.0];
        assert_eq!(s.len(), want.len());
        for (got, want) in s.values().iter().zip(want) {
            assert!((got - want).abs() < 1e-10, "got {got}, want {want}");
        }
    }

    #[test]
    fn gram_rejects_mixed_dimensions() {
        let a = StateVector::basis(3, 0).unwrap();
        let b = StateVector::basis(4, 0).unwrap();
        assert!(gram_from_vectors(&[a, b]).is_err());
    }

    #[test]
    fn toeplitz_from_trivial_autocorrelation_is_identity() {
        let mut cs = vec![c(0.0, 0.0); 5];
        cs[0] = c(1.0, 0.0);
        let g = gram_from_autocorrelation(&cs).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let want = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
                assert!((g.entry(i, j) - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn toeplitz_is_hermitian_by_construction() {
        let cs = vec![c(1.0, 0.0), c(0.3, 0.4), c(-0.2, 0.1), c(0.05, -0.6)];
        let g = gram_from_autocorrelation(&cs).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(g.entry(i, j), g.entry(j, i).conj());
            }
        }
    }

    #[test]
    fn toeplitz_rejects_bad_normalization() {
        let cs = vec![c(0.9, 0.0), c(0.1, 0.0)];
        assert!(gram_from_autocorrelation(&cs).is_err());
        let cs = vec![c(1.0, 0.0), c(1.5, 0.0)];
        assert!(gram_from_autocorrelation(&cs).is_err());
    }

    #[test]
    fn spectrum_of_all_ones_gram() {
        let v = StateVector::basis(2, 0).unwrap();
        let g = gram_from_vectors(&[v.clone(), v.clone(), v]).unwrap();
        let s = gram_spectrum(&g).unwrap();
        assert!((s.min() - 0.0).abs() < 1e-12);
        assert!((s.max() - 3.0).abs() < 1e-12);
        assert!(s.min() >= 0.0, "clamped spectrum must be nonnegative");
    }

    #[test]
    fn histogram_single_eigenvalue() {
        let s = SpectrumSample::new(vec![2.0]).unwrap();
        let h = empirical_histogram(&s, 4, 4.0).unwrap();
        assert_eq!(h.masses(), &[0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn histogram_of_toy_spectrum() {
        let s = SpectrumSample::new(vec![0.0, 0.0, 0.0, 1.0, 1.0, 2.0, 3.0]).unwrap();
        let h = empirical_histogram(&s, 4, 4.0).unwrap();
        let want = [3.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0, 1.0 / 7.0];
        for (got, want) in h.masses().iter().zip(want) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!((h.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn histogram_clamps_overflow_into_last_bin() {
        let s = SpectrumSample::new(vec![0.5, 7.0, 4.0]).unwrap();
        let h = empirical_histogram(&s, 4, 4.0).unwrap();
        assert!((h.masses()[3] - 2.0 / 3.0).abs() < 1e-12);
        assert!((h.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn histogram_rejects_bad_arguments() {
        let s = SpectrumSample::new(vec![1.0]).unwrap();
        assert!(empirical_histogram(&s, 0, 1.0).is_err());
        assert!(empirical_histogram(&s, 4, 0.0).is_err());
    }

    #[test]
    fn summary_of_identity_spectrum() {
        let s = SpectrumSample::new(vec![1.0; 5]).unwrap();
        let sum = spectrum_summary(&s, default_zero_tol(5), DEFAULT_DELTA).unwrap();
        assert_eq!(sum.zero_count, 0);
        assert!((sum.near_one_mass - 1.0).abs() < 1e-15);
        assert!((sum.trace - 5.0).abs() < 1e-12);
    }

    #[test]
    fn summary_counts_toy_spectrum_zeros() {
        let s = SpectrumSample::new(vec![0.0, 0.0, 0.0, 1.0, 1.0, 2.0, 3.0]).unwrap();
        let sum = spectrum_summary(&s, 0.5, 0.1).unwrap();
        assert_eq!(sum.zero_count, 3);
    }

    #[test]
    fn default_upper_covers_mp_support() {
        assert!((default_histogram_upper(1.0) - 4.5).abs() < 1e-12);
        let tau = 1.5f64;
        let edge = (1.0 + tau.sqrt()) * (1.0 + tau.sqrt());
        assert!(default_histogram_upper(tau) > edge);
    }
}
