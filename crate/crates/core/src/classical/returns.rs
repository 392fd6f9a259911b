//! Return-time and hitting-time statistics for measure-preserving maps.

use crate::error::{Error, Result};
use crate::randmat::splitmix64;

use super::orbit::{BitOrbit, DyadicCell};

/// Completed first-return times to a region of known measure.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSample {
    pub mu: f64,
    pub times: Vec<u64>,
}

impl ReturnSample {
    pub fn mean(&self) -> f64 {
        self.times.iter().map(|&t| t as f64).sum::<f64>() / self.times.len() as f64
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Iterates a map from a start inside the region and records the gaps
/// between successive visits. Consecutive indices inside the region count
/// as return time 1 (first-return convention); Kac's lemma makes the mean
/// gap equal `1/mu` for an ergodic invariant measure.
pub fn return_times<S>(
    state: &mut S,
    mut step: impl FnMut(&mut S) -> Result<()>,
    mut in_region: impl FnMut(&mut S) -> Result<bool>,
    mu: f64,
    n_steps: u64,
) -> Result<ReturnSample> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::invalid(format!("region measure must lie in (0, 1], got {mu}")));
    }
    if !in_region(state)? {
        return Err(Error::invalid("return-time orbit must start inside the region"));
    }
    let mut times = Vec::new();
    let mut last_visit = 0u64;
    for t in 1..=n_steps {
        step(state)?;
        if in_region(state)? {
            times.push(t - last_visit);
            last_visit = t;
        }
    }
    if times.is_empty() {
        return Err(Error::EmptySample(format!(
            "no completed returns within {n_steps} steps"
        )));
    }
    Ok(ReturnSample { mu, times })
}

/// Return times of the exact baker orbit to a dyadic q-cylinder, started
/// inside the cell and continued with seeded random bits.
pub fn baker_return_times(cell: &DyadicCell, n_steps: u64, seed: u64) -> Result<ReturnSample> {
    let mut orbit = BitOrbit::seeded_with_prefix(cell.word(), seed);
    return_times(
        &mut orbit,
        |o| o.step(),
        |o| o.in_cylinder(cell),
        cell.measure(),
        n_steps,
    )
}

/// Rescaled first hitting times `mu * tau` from independent random starts.
/// Trials that do not hit within the cap are counted as censored and
/// excluded from the sample.
#[derive(Debug, Clone, PartialEq)]
pub struct HittingSample {
    pub mu: f64,
    pub rescaled: Vec<f64>,
    pub censored: u64,
}

impl HittingSample {
    pub fn mean(&self) -> f64 {
        self.rescaled.iter().sum::<f64>() / self.rescaled.len() as f64
    }

    /// Ascending copy of the rescaled sample, for distance computations.
    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.rescaled.clone();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }
}

/// Measures the first hitting time (`t >= 1`) of a region over independent
/// trials. Hitting the whole space therefore takes exactly one step.
pub fn hitting_experiment<S>(
    mut make_start: impl FnMut(u64) -> Result<S>,
    mut step: impl FnMut(&mut S) -> Result<()>,
    mut in_region: impl FnMut(&mut S) -> Result<bool>,
    mu: f64,
    trials: u64,
    cap: u64,
) -> Result<HittingSample> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::invalid(format!("region measure must lie in (0, 1], got {mu}")));
    }
    if trials == 0 {
        return Err(Error::invalid("hitting experiment needs at least one trial"));
    }
    let mut rescaled = Vec::with_capacity(trials as usize);
    let mut censored = 0u64;
    for trial in 0..trials {
        let mut state = make_start(trial)?;
        let mut hit = false;
        for t in 1..=cap {
            step(&mut state)?;
            if in_region(&mut state)? {
                rescaled.push(mu * t as f64);
                hit = true;
                break;
            }
        }
        if !hit {
            censored += 1;
        }
    }
    if rescaled.is_empty() {
        return Err(Error::EmptySample("every hitting trial was censored".into()));
    }
    Ok(HittingSample { mu, rescaled, censored })
}

/// Default cap on the number of steps a single hitting trial may take.
pub const DEFAULT_HITTING_CAP: u64 = 1_000_000_000;

/// Hitting experiment for the baker map with uniformly random starts.
pub fn baker_hitting_experiment(
    cell: &DyadicCell,
    trials: u64,
    cap: u64,
    seed: u64,
) -> Result<HittingSample> {
    hitting_experiment(
        |trial| Ok(BitOrbit::seeded(seed ^ splitmix64(trial.wrapping_add(1)))),
        |o| o.step(),
        |o| o.in_cylinder(cell),
        cell.measure(),
        trials,
        cap,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randmat::ks_to_cdf;

    #[test]
    fn whole_space_returns_every_step() {
        let mut orbit = BitOrbit::seeded(3);
        let cell = DyadicCell::whole();
        let sample = return_times(
            &mut orbit,
            |o| o.step(),
            |o| o.in_cylinder(&cell),
            1.0,
            100,
        )
        .unwrap();
        assert_eq!(sample.times, vec![1u64; 100]);
        assert!((sample.mean() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_map_returns_every_step() {
        let mut state = ();
        let sample = return_times(&mut state, |_| Ok(()), |_| Ok(true), 0.5, 10).unwrap();
        assert_eq!(sample.times, vec![1u64; 10]);
    }

    #[test]
    fn start_outside_region_rejected() {
        let mut orbit = BitOrbit::seeded_with_prefix(&[true], 3);
        let cell = DyadicCell::zeros(1);
        let err = return_times(&mut orbit, |o| o.step(), |o| o.in_cylinder(&cell), 0.5, 10);
        assert!(err.is_err());
    }

    #[test]
    fn kac_mean_for_small_dyadic_cell() {
        // mean return time to a cell of measure 1/16 is 16 by Kac's lemma
        let cell = DyadicCell::zeros(4);
        let sample = baker_return_times(&cell, 1_000_000, 12345).unwrap();
        let mean = sample.mean();
        assert!(
            (mean - 16.0).abs() < 0.8,
            "mean return {mean}, expected 16 within 5%"
        );
    }

    #[test]
    fn hitting_whole_space_takes_one_step() {
        let cell = DyadicCell::whole();
        let sample = baker_hitting_experiment(&cell, 50, 10, 99).unwrap();
        assert_eq!(sample.censored, 0);
        assert!(sample.rescaled.iter().all(|&x| x == 1.0));
    }

    #[test]
    fn censored_trials_are_flagged() {
        // cap of 1 step almost never hits a 2^-8 cell
        let cell = DyadicCell::one_zeros(8).unwrap();
        let result = baker_hitting_experiment(&cell, 20, 1, 4);
        match result {
            Ok(sample) => assert!(sample.censored > 0),
            Err(Error::EmptySample(_)) => {}
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn rescaled_hitting_times_look_exponential_at_moderate_scale() {
        let cell = DyadicCell::one_zeros(7).unwrap();
        let sample = baker_hitting_experiment(&cell, 2000, 1_000_000, 2718).unwrap();
        assert_eq!(sample.censored, 0);
        let mean = sample.mean();
        assert!((mean - 1.0).abs() < 0.1, "rescaled mean {mean}");
        let ks = ks_to_cdf(&sample.sorted(), |t| 1.0 - (-t).exp()).unwrap();
        assert!(ks < 0.08, "ks = {ks}");
    }
}
