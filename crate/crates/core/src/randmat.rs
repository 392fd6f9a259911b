//! The random-vector reference model and the Marchenko-Pastur law, plus
//! goodness-of-fit distances between spectra and reference distributions.
//!
//! A sequence of K vectors drawn uniformly from the unit sphere of `C^N`
//! mimics a quantum evolution that wanders wildly through Hilbert space; in
//! the limit `K/N -> tau` the Gram spectrum follows the Marchenko-Pastur
//! distribution with aspect ratio tau.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::gram::{gram_from_vectors, gram_spectrum};
use crate::numerics::{SpectrumSample, StateVector};

/// Deterministic seeded random generator. Identical seed and algorithm tag
/// produce an identical stream on every run and machine.
#[derive(Debug, Clone)]
pub struct SeededSampler {
    seed: u64,
    rng: ChaCha12Rng,
}

/// Mixing function used to derive independent child seeds.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl SeededSampler {
    /// Name of the generator backing every sampler; recorded in output files.
    pub const ALGORITHM: &'static str = "chacha12";

    pub fn new(seed: u64) -> Self {
        SeededSampler { seed, rng: ChaCha12Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn algorithm(&self) -> &'static str {
        Self::ALGORITHM
    }

    /// Independent sampler for a sub-task (sweep cell, Monte Carlo trial).
    pub fn derive(&self, index: u64) -> SeededSampler {
        SeededSampler::new(self.seed ^ splitmix64(index))
    }
}

impl RngCore for SeededSampler {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
}

/// Uniform draw from the unit sphere of `C^N`: 2N independent standard
/// normals, normalized. Rotation-invariant by construction.
pub fn random_unit_vector(dim: usize, rng: &mut SeededSampler) -> Result<StateVector> {
    if dim == 0 {
        return Err(Error::invalid("random vector dimension must be >= 1"));
    }
    let amps: Vec<Complex64> = (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    StateVector::new(amps)
}

/// Gram spectrum of K independent uniform random unit vectors in `C^N`.
pub fn random_gram_spectrum(dim: usize, count: usize, rng: &mut SeededSampler) -> Result<SpectrumSample> {
    if count == 0 {
        return Err(Error::invalid("need at least one random vector"));
    }
    let vectors: Result<Vec<StateVector>> =
        (0..count).map(|_| random_unit_vector(dim, rng)).collect();
    gram_spectrum(&gram_from_vectors(&vectors?)?)
}

/// The Marchenko-Pastur law at aspect ratio `tau = K/N`: continuous density
/// `sqrt(4 tau t - (t + tau - 1)^2) / (2 pi tau t)` supported on
/// `[(1-sqrt(tau))^2, (1+sqrt(tau))^2]`, plus an atom of mass `(tau-1)/tau`
/// at zero when `tau > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpLaw {
    tau: f64,
}

impl MpLaw {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::invalid(format!("aspect ratio tau must be positive, got {tau}")));
        }
        Ok(MpLaw { tau })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Edges of the continuous support.
    pub fn support(&self) -> (f64, f64) {
        let root = self.tau.sqrt();
        ((1.0 - root) * (1.0 - root), (1.0 + root) * (1.0 + root))
    }

    pub fn atom(&self) -> f64 {
        if self.tau > 1.0 {
            (self.tau - 1.0) / self.tau
        } else {
            0.0
        }
    }

    /// Continuous part of the density; the atom at zero is not included.
    pub fn density(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let (lo, hi) = self.support();
        let disc = (t - lo) * (hi - t);
        if disc <= 0.0 {
            return 0.0;
        }
        disc.sqrt() / (2.0 * std::f64::consts::PI * self.tau * t)
    }

    /// Cumulative distribution, atom included. Adaptive quadrature of the
    /// continuous part, absolute error below 1e-7; the inverse-square-root
    /// edge behaviour is removed by the substitution `t = edge ± u²`.
    pub fn cdf(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        self.atom() + self.continuous_cdf(t)
    }

    fn continuous_cdf(&self, t: f64) -> f64 {
        let (lo, hi) = self.support();
        if t <= lo {
            return 0.0;
        }
        let x = t.min(hi);
        let mid = 0.5 * (lo + hi);
        let tol = 1e-9;
        if x <= mid {
            adaptive_simpson(&|u| self.lower_integrand(u), 0.0, (x - lo).sqrt(), tol)
        } else {
            let lower = adaptive_simpson(&|u| self.lower_integrand(u), 0.0, (mid - lo).sqrt(), tol);
            let upper =
                adaptive_simpson(&|v| self.upper_integrand(v), (hi - x).sqrt(), (hi - mid).sqrt(), tol);
            lower + upper
        }
    }

    // density(lo + u^2) * 2u, written so the edge singularity cancels
    fn lower_integrand(&self, u: f64) -> f64 {
        let (lo, hi) = self.support();
        let width = hi - lo - u * u;
        if width <= 0.0 {
            return 0.0;
        }
        let pi_tau = std::f64::consts::PI * self.tau;
        if lo == 0.0 {
            width.sqrt() / pi_tau
        } else {
            u * u * width.sqrt() / (pi_tau * (lo + u * u))
        }
    }

    // density(hi - v^2) * 2v
    fn upper_integrand(&self, v: f64) -> f64 {
        let (lo, hi) = self.support();
        let width = hi - lo - v * v;
        if width <= 0.0 {
            return 0.0;
        }
        v * v * width.sqrt() / (std::f64::consts::PI * self.tau * (hi - v * v))
    }

    /// Precomputed cumulative table for distance computations that evaluate
    /// the CDF many times.
    pub(crate) fn cdf_table(&self) -> MpCdfTable {
        MpCdfTable::new(*self)
    }
}

pub fn mp_density(law: &MpLaw, t: f64) -> f64 {
    law.density(t)
}

pub fn mp_atom(law: &MpLaw) -> f64 {
    law.atom()
}

pub fn mp_cdf(law: &MpLaw, t: f64) -> f64 {
    law.cdf(t)
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_refine(f, a, b, fa, fm, fb, whole, tol, 40)
}

#[allow(clippy::too_many_arguments)]
fn simpson_refine(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_refine(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + simpson_refine(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

/// Cumulative Marchenko-Pastur CDF sampled on substituted grids, for cheap
/// repeated evaluation inside the distance metrics.
pub(crate) struct MpCdfTable {
    law: MpLaw,
    lo: f64,
    hi: f64,
    mid: f64,
    // lower half: u-grid on [0, sqrt(mid-lo)], cumulative integral of g_lo
    lower_u: Vec<f64>,
    lower_cum: Vec<f64>,
    // upper half: v-grid on [0, sqrt(hi-mid)], cumulative integral of g_hi,
    // measured from the upper edge inward
    upper_v: Vec<f64>,
    upper_cum: Vec<f64>,
    continuous_total: f64,
}

const TABLE_PANELS: usize = 4096;

impl MpCdfTable {
    fn new(law: MpLaw) -> Self {
        let (lo, hi) = law.support();
        let mid = 0.5 * (lo + hi);
        let (lower_u, lower_cum) =
            cumulative_simpson(|u| law.lower_integrand(u), (mid - lo).sqrt(), TABLE_PANELS);
        let (upper_v, upper_cum) =
            cumulative_simpson(|v| law.upper_integrand(v), (hi - mid).sqrt(), TABLE_PANELS);
        let continuous_total =
            lower_cum[lower_cum.len() - 1] + upper_cum[upper_cum.len() - 1];
        MpCdfTable { law, lo, hi, mid, lower_u, lower_cum, upper_v, upper_cum, continuous_total }
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let atom = self.law.atom();
        if t <= self.lo {
            return atom;
        }
        if t >= self.hi {
            return atom + self.continuous_total;
        }
        let value = if t <= self.mid {
            interp_cumulative(&self.lower_u, &self.lower_cum, (t - self.lo).sqrt(), |u| {
                self.law.lower_integrand(u)
            })
        } else {
            self.continuous_total
                - interp_cumulative(&self.upper_v, &self.upper_cum, (self.hi - t).sqrt(), |v| {
                    self.law.upper_integrand(v)
                })
        };
        atom + value
    }
}

fn cumulative_simpson(f: impl Fn(f64) -> f64, upper: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let h = upper / panels as f64;
    let mut grid = Vec::with_capacity(panels + 1);
    let mut cum = Vec::with_capacity(panels + 1);
    grid.push(0.0);
    cum.push(0.0);
    let mut acc = 0.0;
    for i in 0..panels {
        let a = h * i as f64;
        let b = h * (i + 1) as f64;
        acc += (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
        grid.push(b);
        cum.push(acc);
    }
    (grid, cum)
}

fn interp_cumulative(grid: &[f64], cum: &[f64], x: f64, f: impl Fn(f64) -> f64) -> f64 {
    let n = grid.len();
    if x <= 0.0 {
        return 0.0;
    }
    if x >= grid[n - 1] {
        return cum[n - 1];
    }
    let h = grid[1] - grid[0];
    let idx = ((x / h) as usize).min(n - 2);
    let x0 = grid[idx];
    // partial panel via the trapezoid rule; the panel is tiny so the error
    // is far below the table resolution
    cum[idx] + 0.5 * (x - x0) * (f(x0) + f(x))
}

/// Which distance to compute between distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Kolmogorov-Smirnov sup-distance between CDFs.
    Ks,
    /// 1-Wasserstein distance: area between CDFs.
    W1,
}

/// Reference distribution for `distribution_distance`.
#[derive(Clone, Copy)]
pub enum Reference<'a> {
    Law(&'a MpLaw),
    Sample(&'a SpectrumSample),
}

/// Distance between the empirical distribution of `s` and a reference.
pub fn distribution_distance(s: &SpectrumSample, reference: Reference<'_>, metric: Metric) -> Result<f64> {
    match (reference, metric) {
        (Reference::Law(law), Metric::Ks) => {
            let table = law.cdf_table();
            // eigenvalues below the artifact-wide zero tolerance are the
            // numerical rendering of the law's atom at zero; snap them onto
            // it so the KS statistic measures distribution shape rather
            // than eigensolver noise in the 1e-15 range
            let zero_tol = 1e-8 * s.len() as f64;
            let snapped: Vec<f64> =
                s.values().iter().map(|&v| if v < zero_tol { 0.0 } else { v }).collect();
            // the law's only discontinuity is the atom at zero, so the left
            // limit of its CDF vanishes at t <= 0 and equals the CDF above
            ks_to_cdf_with_left(
                &snapped,
                |t| table.cdf(t),
                |t| if t <= 0.0 { 0.0 } else { table.cdf(t) },
            )
        }
        (Reference::Law(law), Metric::W1) => {
            let table = law.cdf_table();
            let (_, hi) = law.support();
            w1_to_cdf(s.values(), |t| table.cdf(t), hi)
        }
        (Reference::Sample(other), Metric::Ks) => ks_two_sample(s.values(), other.values()),
        (Reference::Sample(other), Metric::W1) => w1_two_sample(s.values(), other.values()),
    }
}

/// One-sample Kolmogorov-Smirnov statistic against a continuous reference
/// CDF. `sorted` must be ascending.
pub fn ks_to_cdf(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    ks_to_cdf_with_left(sorted, &cdf, &cdf)
}

/// KS statistic against a reference CDF with jumps. Tied sample values are
/// treated as one jump of the empirical CDF, and the reference's left
/// limit is compared against the empirical left limit, so an atom shared
/// by both distributions cancels instead of registering as a spurious
/// sup-distance.
pub fn ks_to_cdf_with_left(
    sorted: &[f64],
    cdf: impl Fn(f64) -> f64,
    cdf_left: impl Fn(f64) -> f64,
) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::invalid("KS distance needs a nonempty sample"));
    }
    let n = sorted.len() as f64;
    let mut worst = 0.0f64;
    let mut i = 0usize;
    while i < sorted.len() {
        let x = sorted[i];
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == x {
            j += 1;
        }
        worst = worst.max((cdf(x) - (j as f64 + 1.0) / n).abs());
        worst = worst.max((cdf_left(x) - (i as f64) / n).abs());
        i = j + 1;
    }
    Ok(worst)
}

/// Two-sample Kolmogorov-Smirnov statistic. Inputs must be ascending.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("KS distance needs nonempty samples"));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut ia, mut ib) = (0usize, 0usize);
    let mut worst = 0.0f64;
    while ia < a.len() || ib < b.len() {
        let next = match (a.get(ia), b.get(ib)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => break,
        };
        while ia < a.len() && a[ia] <= next {
            ia += 1;
        }
        while ib < b.len() && b[ib] <= next {
            ib += 1;
        }
        let diff = (ia as f64 / na - ib as f64 / nb).abs();
        worst = worst.max(diff);
    }
    Ok(worst)
}

/// 1-Wasserstein distance between a sample and a reference CDF, computed as
/// the area between the empirical CDF and the reference over
/// `[min(0, sample), max(support_hi, sample)]`.
pub fn w1_to_cdf(sorted: &[f64], cdf: impl Fn(f64) -> f64, support_hi: f64) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::invalid("W1 distance needs a nonempty sample"));
    }
    let n = sorted.len() as f64;
    let lo = sorted[0].min(0.0);
    let hi = sorted[sorted.len() - 1].max(support_hi);
    if hi <= lo {
        return Ok(0.0);
    }
    // integrate |F_emp - F| with the empirical value constant between
    // consecutive breakpoints; the grid keeps panels small where the
    // reference CDF bends
    const GRID: usize = 8192;
    let mut breaks: Vec<f64> = Vec::with_capacity(GRID + sorted.len() + 2);
    for i in 0..=GRID {
        breaks.push(lo + (hi - lo) * i as f64 / GRID as f64);
    }
    breaks.extend_from_slice(sorted);
    breaks.retain(|x| x.is_finite());
    breaks.sort_by(|p, q| p.total_cmp(q));
    breaks.dedup();

    let mut idx = 0usize; // count of sample points <= current left endpoint
    let mut area = 0.0f64;
    for w in breaks.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        while idx < sorted.len() && sorted[idx] <= x0 {
            idx += 1;
        }
        let emp = idx as f64 / n;
        let mid = 0.5 * (x0 + x1);
        area += (x1 - x0) * (emp - cdf(mid)).abs();
    }
    Ok(area)
}

/// Exact 1-Wasserstein distance between two empirical samples (ascending).
pub fn w1_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("W1 distance needs nonempty samples"));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut points: Vec<f64> = a.iter().chain(b.iter()).cloned().collect();
    points.sort_by(|p, q| p.total_cmp(q));
    points.dedup();
    let (mut ia, mut ib) = (0usize, 0usize);
    let mut area = 0.0f64;
    for w in points.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        while ia < a.len() && a[ia] <= x0 {
            ia += 1;
        }
        while ib < b.len() && b[ib] <= x0 {
            ib += 1;
        }
        area += (x1 - x0) * (ia as f64 / na - ib as f64 / nb).abs();
    }
    Ok(area)
}
