//! Coherent initial states: Harper-ground-state coherent states on the
//! discretized torus, and SU(2) spin coherent states on the sphere.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::maps::TopParams;
use crate::numerics::{dft_matrix, hermitian_eigendecomposition, Operator, StateVector};

/// Lattice site `(a, b)` on the N×N torus grid, the centre `(a/N, b/N)` in
/// classical phase space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusSite {
    pub a: usize,
    pub b: usize,
}

impl TorusSite {
    pub fn new(a: usize, b: usize) -> Self {
        TorusSite { a, b }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        if self.a >= dim || self.b >= dim {
            return Err(Error::invalid(format!(
                "torus site ({}, {}) out of range for dimension {dim}",
                self.a, self.b
            )));
        }
        Ok(())
    }
}

/// Direction on the unit sphere in polar coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereDirection {
    pub theta: f64,
    pub phi: f64,
}

impl SphereDirection {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::invalid(format!("theta must lie in [0, π], got {theta}")));
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::invalid(format!("phi must lie in [0, 2π), got {phi}")));
        }
        Ok(SphereDirection { theta, phi })
    }
}

/// Ground state of the Harper operator `2·I - cos(2πQ_N) - cos(2πP_N)`,
/// where `Q_N|m> = (m/N)|m>` and `P_N = F_N Q_N F_N⁻¹`. This is the
/// localized seed for torus coherent states: it commutes with `F_N` and is
/// peaked at the origin of phase space. The global phase is fixed so the
/// largest-magnitude component is real and positive.
pub fn harper_ground_state(dim: usize) -> Result<StateVector> {
    if dim < 2 {
        return Err(Error::invalid(format!(
            "Harper ground state needs dimension >= 2, got {dim}"
        )));
    }

    // cos(2πQ) is diagonal; cos(2πP) = F cos(2πQ) F† by spectral calculus
    let f = dft_matrix(dim)?;
    let cos_q: Vec<Complex64> = (0..dim)
        .map(|m| Complex64::new((TAU * m as f64 / dim as f64).cos(), 0.0))
        .collect();
    let cos_q_mat = Operator::diagonal(&cos_q)?;
    let cos_p = f.matrix() * cos_q_mat.matrix() * f.matrix().adjoint();

    let mut h = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let diag = if i == j {
                Complex64::new(2.0 - cos_q[i].re, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            h[(i, j)] = diag - cos_p[(i, j)];
        }
    }

    let (eigvals, eigvecs) = hermitian_eigendecomposition(&Operator::from_matrix(h)?)?;
    let ground = eigvals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(idx, _)| idx)
        .expect("nonempty spectrum");

    let column = eigvecs.column(ground);
    let mut amps: Vec<Complex64> = column.iter().cloned().collect();
    fix_phase(&mut amps);
    StateVector::new(amps)
}

/// Rotates the global phase so the largest-magnitude component is real positive.
fn fix_phase(amps: &mut [Complex64]) {
    let mut best = 0usize;
    let mut best_norm = 0.0f64;
    for (i, a) in amps.iter().enumerate() {
        let n = a.norm();
        if n > best_norm {
            best_norm = n;
            best = i;
        }
    }
    if best_norm > 0.0 {
        let phase = amps[best] / Complex64::new(best_norm, 0.0);
        let correction = phase.conj();
        for a in amps.iter_mut() {
            *a *= correction;
        }
    }
}

/// Discrete phase-space translation: position shift by `a` lattice steps and
/// momentum boost by `b` steps, `(Tψ)_m = e^{2πi·b·m/N} ψ_{(m-a) mod N}`.
pub fn translate_state(psi: &StateVector, site: TorusSite) -> Result<StateVector> {
    let dim = psi.dim();
    site.validate(dim)?;
    let src = psi.amplitudes();
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for m in 0..dim {
        let from = (m + dim - site.a % dim) % dim;
        let phase = Complex64::from_polar(1.0, TAU * (site.b as f64) * (m as f64) / dim as f64);
        out[m] = phase * src[from];
    }
    StateVector::new(out)
}

/// Coherent state on the torus centred at `(a/N, b/N)`: the Harper ground
/// state shifted to the requested lattice site.
pub fn coherent_state(dim: usize, site: TorusSite) -> Result<StateVector> {
    let ground = harper_ground_state(dim)?;
    translate_state(&ground, site)
}

/// SU(2) spin coherent state pointing along `dir`, in the descending-m
/// basis: `c_m = C(2j, j-m)^{1/2} cos(θ/2)^{j+m} sin(θ/2)^{j-m} e^{i(j-m)φ}`.
/// The phase sign is the one for which `<J>/j` equals the unit vector
/// `(sinθ cosφ, sinθ sinφ, cosθ)`, matching the classical sphere point.
pub fn spin_coherent_state(j: f64, dir: SphereDirection) -> Result<StateVector> {
    let params = TopParams::new(j, 0.0, 0.0)?;
    let dim = params.dim();
    let j = params.j();

    let half = dir.theta / 2.0;
    let (ln_cos, ln_sin) = (half.cos().ln(), half.sin().ln());

    // log-space magnitudes: 0.5·ln C(2j, r) + (j+m)·ln cos + (j-m)·ln sin,
    // with r = j - m; avoids overflow of the binomials at large j
    let mut log_mags = vec![f64::NEG_INFINITY; dim];
    let mut ln_binom = 0.0f64;
    for r in 0..dim {
        if r > 0 {
            ln_binom += ((2.0 * j - r as f64 + 1.0) / r as f64).ln();
        }
        let m = j - r as f64;
        let cos_part = if j + m == 0.0 { 0.0 } else { (j + m) * ln_cos };
        let sin_part = if r == 0 { 0.0 } else { r as f64 * ln_sin };
        if (j + m > 0.0 && ln_cos == f64::NEG_INFINITY)
            || (r > 0 && ln_sin == f64::NEG_INFINITY)
        {
            continue;
        }
        log_mags[r] = 0.5 * ln_binom + cos_part + sin_part;
    }

    let peak = log_mags.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let amps: Vec<Complex64> = (0..dim)
        .map(|r| {
            let mag = (log_mags[r] - peak).exp();
            Complex64::from_polar(mag, (r as f64) * dir.phi)
        })
        .collect();
    StateVector::new(amps)
}
