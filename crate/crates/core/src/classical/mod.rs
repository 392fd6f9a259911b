//! Classical limits of the two quantum maps and the return-time laws that
//! motivate the spectral construction: Kac's lemma, exponential hitting
//! times, symbolic Gram spectra, and the baker Lyapunov exponent.

mod orbit;
mod returns;

pub use orbit::{BitOrbit, DyadicCell};
pub use returns::{
    baker_hitting_experiment, baker_return_times, hitting_experiment, return_times,
    HittingSample, ReturnSample, DEFAULT_HITTING_CAP,
};

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::numerics::SpectrumSample;

/// Point on the unit torus `[0,1) x [0,1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    q: f64,
    p: f64,
}

impl TorusPoint {
    pub fn new(q: f64, p: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&q) || !(0.0..1.0).contains(&p) {
            return Err(Error::invalid(format!(
                "torus point ({q}, {p}) must lie in [0,1) x [0,1)"
            )));
        }
        Ok(TorusPoint { q, p })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// One step of the classical baker map:
/// `(q, p) -> (2q mod 1, p/2 + [2q]/2)`.
pub fn baker_step(pt: &TorusPoint) -> TorusPoint {
    let doubled = 2.0 * pt.q;
    let (q, carry) = if doubled >= 1.0 { (doubled - 1.0, 1.0) } else { (doubled, 0.0) };
    TorusPoint { q, p: 0.5 * (pt.p + carry) }
}

/// Point on the unit sphere in `R^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    x: f64,
    y: f64,
    z: f64,
}

impl SpherePoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm_sq = x * x + y * y + z * z;
        if (norm_sq - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "sphere point must have unit norm, got |r|^2 = {norm_sq}"
            )));
        }
        Ok(SpherePoint { x, y, z })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// Which classical kicked-top map to iterate. `Printed` follows the
/// published coordinate formulas verbatim (whose `k = 0` limit reflects
/// `y -> -y`); `Rotation` replaces the y-component so the torsion acts as a
/// true rotation around the z-axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TopVariant {
    #[default]
    Printed,
    Rotation,
}

/// One step of the classical kicked top: a rotation around the y-axis by
/// `p` followed by a torsion around the z-axis by an angle proportional to
/// the new z-component. Uses the printed formulas.
pub fn top_classical_step(pt: &SpherePoint, torsion: f64, rotation: f64) -> SpherePoint {
    top_classical_step_variant(pt, torsion, rotation, TopVariant::Printed)
}

pub fn top_classical_step_variant(
    pt: &SpherePoint,
    torsion: f64,
    rotation: f64,
    variant: TopVariant,
) -> SpherePoint {
    let (sin_p, cos_p) = rotation.sin_cos();
    let rotated_x = pt.x * cos_p + pt.z * sin_p;
    let z = -pt.x * sin_p + pt.z * cos_p;
    let angle = torsion * (pt.z * cos_p - pt.x * sin_p);
    let (sin_a, cos_a) = angle.sin_cos();
    let (x, y) = match variant {
        TopVariant::Printed => (
            rotated_x * cos_a + pt.y * sin_a,
            rotated_x * sin_a - pt.y * cos_a,
        ),
        TopVariant::Rotation => (
            rotated_x * cos_a - pt.y * sin_a,
            rotated_x * sin_a + pt.y * cos_a,
        ),
    };
    SpherePoint { x, y, z }
}

/// Gram spectrum of a symbol sequence over an orthonormal alphabet: the
/// 0/1 Gram matrix has one eigenvalue per distinct symbol equal to its
/// repeat count, padded with zeros. Computed from counts directly.
pub fn symbol_gram_spectrum<T: Eq + Hash>(symbols: &[T]) -> Result<SpectrumSample> {
    if symbols.is_empty() {
        return Err(Error::invalid("symbol sequence must be nonempty"));
    }
    let mut counts: HashMap<&T, u64> = HashMap::new();
    for s in symbols {
        *counts.entry(s).or_insert(0) += 1;
    }
    let mut values = vec![0.0f64; symbols.len() - counts.len()];
    values.extend(counts.values().map(|&c| c as f64));
    SpectrumSample::new(values)
}

/// Lyapunov exponent of the baker map estimated along an orbit: the time
/// average of `log |dq'/dq|`. The stretching factor is 2 everywhere, so the
/// estimate equals `log 2` up to summation rounding.
pub fn lyapunov_baker(orbit: &mut BitOrbit, steps: u64) -> Result<f64> {
    if steps == 0 {
        return Err(Error::invalid("Lyapunov estimate needs at least one step"));
    }
    let log_stretch = 2.0f64.ln();
    // compensated summation keeps the constant-derivative average exact
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for _ in 0..steps {
        orbit.step()?;
        let term = log_stretch - carry;
        let next = sum + term;
        carry = (next - sum) - term;
        sum = next;
    }
    Ok(sum / steps as f64)
}
