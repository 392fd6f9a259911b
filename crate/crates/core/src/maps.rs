//! The two quantum evolutions under study: the quantized baker map on
//! `C^N` (N even) and the kicked top on a spin-j representation.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{dft_matrix, hermitian_evolution, Operator};

/// Parameters of the quantized baker map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BakerParams {
    dim: usize,
}

impl BakerParams {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 || dim % 2 != 0 {
            return Err(Error::invalid(format!(
                "baker map dimension must be even and >= 2, got {dim}"
            )));
        }
        Ok(BakerParams { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Parameters of the kicked top: spin j, torsion strength k, rotation angle p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopParams {
    two_j: u64,
    pub torsion: f64,
    pub rotation: f64,
}

impl TopParams {
    pub fn new(j: f64, torsion: f64, rotation: f64) -> Result<Self> {
        let two_j = validate_half_integer(j)?;
        if !torsion.is_finite() || !rotation.is_finite() {
            return Err(Error::invalid("kicked top parameters must be finite"));
        }
        Ok(TopParams { two_j, torsion, rotation })
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    /// Hilbert space dimension N = 2j + 1.
    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }
}

fn validate_half_integer(j: f64) -> Result<u64> {
    let doubled = 2.0 * j;
    let rounded = doubled.round();
    if !j.is_finite() || (doubled - rounded).abs() > 1e-9 || rounded < 1.0 {
        return Err(Error::invalid(format!(
            "spin j must be a positive half-integer, got {j}"
        )));
    }
    Ok(rounded as u64)
}

/// Unitary of the quantized baker map: `F_N · blockdiag(F⁻¹_{N/2}, F⁻¹_{N/2})`.
pub fn baker_unitary(params: BakerParams) -> Result<Operator> {
    let n = params.dim();
    let half = n / 2;
    let f_n = dft_matrix(n)?;
    let f_half_inv = dft_matrix(half)?.adjoint();

    // multiply the two block columns separately; the block diagonal never
    // needs to be materialized
    let mut u = DMatrix::zeros(n, n);
    let left = f_n.matrix().columns(0, half) * f_half_inv.matrix();
    let right = f_n.matrix().columns(half, half) * f_half_inv.matrix();
    u.view_mut((0, 0), (n, half)).copy_from(&left);
    u.view_mut((0, half), (n, half)).copy_from(&right);
    Operator::from_matrix(u)
}

/// Angular momentum matrices `(J_x, J_y, J_z)` for spin j in the `|j,m>`
/// basis ordered by descending m (m = j comes first). All three Hermitian,
/// obeying `[J_x, J_y] = i J_z` and cyclic permutations.
pub fn spin_operators(j: f64) -> Result<(Operator, Operator, Operator)> {
    let two_j = validate_half_integer(j)?;
    let j = two_j as f64 / 2.0;
    let dim = two_j as usize + 1;

    let mut jz = DMatrix::zeros(dim, dim);
    for r in 0..dim {
        let m = j - r as f64;
        jz[(r, r)] = Complex64::new(m, 0.0);
    }

    // <m+1|J_+|m> = sqrt(j(j+1) - m(m+1)); in descending order the raising
    // operator connects column r to row r-1
    let mut jx = DMatrix::zeros(dim, dim);
    let mut jy = DMatrix::zeros(dim, dim);
    for r in 1..dim {
        let m = j - r as f64;
        let amp = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
        jx[(r - 1, r)] = Complex64::new(amp / 2.0, 0.0);
        jx[(r, r - 1)] = Complex64::new(amp / 2.0, 0.0);
        jy[(r - 1, r)] = Complex64::new(0.0, -amp / 2.0);
        jy[(r, r - 1)] = Complex64::new(0.0, amp / 2.0);
    }

    Ok((
        Operator::from_matrix(jx)?,
        Operator::from_matrix(jy)?,
        Operator::from_matrix(jz)?,
    ))
}

/// Kicked top unitary `U = e^{-i k J_z²/(2j)} · e^{-i p J_y}`: a rotation
/// around the y-axis followed by a torsion around z. The torsion factor is
/// diagonal with entries `e^{-i k m²/(2j)}`, m = j..-j.
pub fn kicked_top_unitary(params: TopParams) -> Result<Operator> {
    let dim = params.dim();
    let j = params.j();
    let (_, jy, _) = spin_operators(j)?;
    let rotation = hermitian_evolution(&jy, params.rotation)?;

    let torsion_entries: Vec<Complex64> = (0..dim)
        .map(|r| {
            let m = j - r as f64;
            Complex64::from_polar(1.0, -params.torsion * m * m / (2.0 * j))
        })
        .collect();
    let torsion = Operator::diagonal(&torsion_entries)?;

    torsion.mul(&rotation)
}
