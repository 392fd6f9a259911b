//! Cross-checks of independent computation routes: brute-force Gram
//! construction against the Toeplitz shortcut, quadrature against closed
//! moments, symbolic spectra against the dense eigensolver.

use gram_recur_core::classical::{symbol_gram_spectrum, DyadicCell};
use gram_recur_core::gram::{
    empirical_histogram, gram_from_autocorrelation, gram_from_vectors, gram_spectrum,
    spectrum_summary,
};
use gram_recur_core::maps::{baker_unitary, kicked_top_unitary, spin_operators, BakerParams, TopParams};
use gram_recur_core::numerics::{evolve_autocorrelations, hermitian_eigenvalues, Operator};
use gram_recur_core::randmat::{
    distribution_distance, ks_to_cdf, random_gram_spectrum, Metric, MpLaw, Reference,
    SeededSampler,
};
use gram_recur_core::states::{coherent_state, TorusSite};
use nalgebra::DMatrix;
use num_complex::Complex64;

#[test]
fn toeplitz_gram_matches_brute_force_overlaps() {
    // two routes to the same matrix: the autocorrelation Toeplitz
    // construction and explicit pairwise overlaps of the evolved orbit
    let n = 64;
    let k = 32;
    let u = baker_unitary(BakerParams::new(n).unwrap()).unwrap();
    let psi0 = coherent_state(n, TorusSite::new(16, 32)).unwrap();

    let autocorr = evolve_autocorrelations(&u, &psi0, k).unwrap();
    let toeplitz = gram_from_autocorrelation(&autocorr).unwrap();

    let mut orbit = vec![psi0.clone()];
    for _ in 1..k {
        orbit.push(u.apply(orbit.last().unwrap()).unwrap());
    }
    let brute = gram_from_vectors(&orbit).unwrap();

    let mut worst = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            worst = worst.max((toeplitz.entry(i, j) - brute.entry(i, j)).norm());
        }
    }
    assert!(worst < 1e-12, "max entrywise deviation {worst}");
}

#[test]
fn baker_autocorrelations_stay_bounded() {
    let n = 128;
    let k = 64;
    let u = baker_unitary(BakerParams::new(n).unwrap()).unwrap();
    let psi0 = coherent_state(n, TorusSite::new(32, 64)).unwrap();
    let cs = evolve_autocorrelations(&u, &psi0, k).unwrap();
    assert!((cs[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    for (i, c) in cs.iter().enumerate() {
        assert!(c.norm() <= 1.0 + 1e-12, "|c_{i}| = {}", c.norm());
    }
}

#[test]
fn forward_backward_stability_moderate_size() {
    let n = 128;
    let k = 128;
    let u = baker_unitary(BakerParams::new(n).unwrap()).unwrap();
    let udag = u.adjoint();
    let psi0 = coherent_state(n, TorusSite::new(32, 64)).unwrap();
    let mut phi = psi0.clone();
    for _ in 0..k {
        phi = u.apply(&phi).unwrap();
    }
    for _ in 0..k {
        phi = udag.apply(&phi).unwrap();
    }
    let mut diff = 0.0f64;
    for (a, b) in phi.amplitudes().iter().zip(psi0.amplitudes()) {
        diff += (a - b).norm_sqr();
    }
    assert!(diff.sqrt() < 1e-10, "round trip deviation {}", diff.sqrt());
}

#[test]
fn evolution_preserves_state_norm_over_three_heisenberg_times() {
    let n = 32;
    let u = baker_unitary(BakerParams::new(n).unwrap()).unwrap();
    let mut phi = coherent_state(n, TorusSite::new(8, 16)).unwrap();
    for step in 0..(3 * n) {
        phi = u.apply(&phi).unwrap();
        assert!((phi.norm() - 1.0).abs() < 1e-10, "norm drift at step {step}");
    }
}

#[test]
fn mp_moments_against_independent_quadrature() {
    // oracle: midpoint rule in the substituted variable, independent of the
    // adaptive scheme inside MpLaw::cdf
    for tau in [0.25, 0.5, 1.0, 1.5, 2.0, 4.0] {
        let law = MpLaw::new(tau).unwrap();
        let (lo, hi) = law.support();
        let mid = 0.5 * (lo + hi);
        let moment = |power: i32| -> f64 {
            let panels = 400_000usize;
            let mut total = 0.0f64;
            let u_max = (mid - lo).sqrt();
            let hu = u_max / panels as f64;
            for i in 0..panels {
                let u = hu * (i as f64 + 0.5);
                let t = lo + u * u;
                total += t.powi(power) * law.density(t) * 2.0 * u * hu;
            }
            let v_max = (hi - mid).sqrt();
            let hv = v_max / panels as f64;
            for i in 0..panels {
                let v = hv * (i as f64 + 0.5);
                let t = hi - v * v;
                total += t.powi(power) * law.density(t) * 2.0 * v * hv;
            }
            total
        };

        let mass = law.atom() + moment(0);
        assert!((mass - 1.0).abs() < 1e-6, "tau={tau}: total mass {mass}");
        let mean = moment(1);
        assert!((mean - 1.0).abs() < 1e-6, "tau={tau}: mean {mean}");
        let second = moment(2);
        assert!(
            (second - (1.0 + tau)).abs() < 1e-5,
            "tau={tau}: second moment {second}"
        );

        // the adaptive CDF agrees with the closed normalization
        assert!((law.cdf(hi + 1.0) - 1.0).abs() < 1e-6);
    }
}

#[test]
fn random_gram_spectrum_matches_mp_at_desk_scale() {
    let mut rng = SeededSampler::new(424242);
    let s = random_gram_spectrum(500, 250, &mut rng).unwrap();
    assert!(s.min() >= 0.0);
    assert!((s.sum() - 250.0).abs() < 1e-6, "trace {}", s.sum());

    let law = MpLaw::new(0.5).unwrap();
    let ks = distribution_distance(&s, Reference::Law(&law), Metric::Ks).unwrap();
    assert!(ks < 0.08, "ks {ks}");
}

#[test]
fn random_gram_ks_distance_shrinks_with_dimension() {
    let law = MpLaw::new(1.0).unwrap();
    let mut averages = Vec::new();
    for n in [100usize, 200, 400] {
        let mut acc = 0.0;
        for seed in 0..10u64 {
            let mut rng = SeededSampler::new(1000 + seed);
            let s = random_gram_spectrum(n, n, &mut rng).unwrap();
            acc += distribution_distance(&s, Reference::Law(&law), Metric::Ks).unwrap();
        }
        averages.push(acc / 10.0);
    }
    assert!(
        averages[0] > averages[1] && averages[1] > averages[2],
        "KS averages not monotone: {averages:?}"
    );
}

#[test]
fn short_orbit_gram_is_close_to_identity() {
    // K of order log2(N) steps: the orbit has not yet returned, the Gram
    // matrix is nearly the identity and the spectrum concentrates at one
    let n = 256;
    let k = 8;
    let u = baker_unitary(BakerParams::new(n).unwrap()).unwrap();
    let psi0 = coherent_state(n, TorusSite::new(64, 128)).unwrap();
    let cs = evolve_autocorrelations(&u, &psi0, k).unwrap();
    let s = gram_spectrum(&gram_from_autocorrelation(&cs).unwrap()).unwrap();
    let summary = spectrum_summary(&s, 1e-8 * k as f64, 0.2).unwrap();
    assert!(
        summary.near_one_mass > 0.9,
        "near-one mass {} for K={k}",
        summary.near_one_mass
    );
}

#[test]
fn long_orbit_gram_collapses_to_zero() {
    // K = 10N: linear dependencies dominate, at least 9N eigenvalues vanish
    let n = 100;
    let k = 1000;
    let u = baker_unitary(BakerParams::new(n).unwrap()).unwrap();
    let psi0 = coherent_state(n, TorusSite::new(25, 50)).unwrap();
    let cs = evolve_autocorrelations(&u, &psi0, k).unwrap();
    let s = gram_spectrum(&gram_from_autocorrelation(&cs).unwrap()).unwrap();
    let tiny = s.values().iter().filter(|&&v| v < 1e-6).count();
    assert!(tiny >= 9 * n, "only {tiny} eigenvalues below 1e-6");
}

#[test]
fn symbol_spectrum_agrees_with_dense_eigensolver() {
    // oracle: build the explicit 0/1 Gram matrix and diagonalize it
    let mut state = 0xabcdef123456u64;
    let mut next = move |m: u64| {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) % m
    };
    for round in 0..100 {
        let len = 1 + (next(50) as usize);
        let alphabet = 1 + next(8);
        let symbols: Vec<u64> = (0..len).map(|_| next(alphabet)).collect();

        let fast = symbol_gram_spectrum(&symbols).unwrap();

        let mut m = DMatrix::zeros(len, len);
        for i in 0..len {
            for j in 0..len {
                if symbols[i] == symbols[j] {
                    m[(i, j)] = Complex64::new(1.0, 0.0);
                }
            }
        }
        let dense = hermitian_eigenvalues(&Operator::from_matrix(m).unwrap()).unwrap();

        assert_eq!(fast.len(), dense.len());
        for (a, b) in fast.values().iter().zip(dense.values()) {
            assert!((a - b).abs() < 1e-10, "round {round}: {a} vs {b}");
        }
        assert!((fast.sum() - len as f64).abs() < 1e-12);
    }
}

#[test]
fn unitary_determinants_have_unit_magnitude() {
    for n in [2usize, 64, 200] {
        let u = baker_unitary(BakerParams::new(n).unwrap()).unwrap();
        let det = u.matrix().clone().determinant();
        assert!(
            (det.norm() - 1.0).abs() < 1e-8,
            "baker N={n}: |det| = {}",
            det.norm()
        );
    }
    for (k, p) in [(1.5, 1.0), (6.5, 1.5)] {
        let u = kicked_top_unitary(TopParams::new(20.0, k, p).unwrap()).unwrap();
        let det = u.matrix().clone().determinant();
        assert!(
            (det.norm() - 1.0).abs() < 1e-8,
            "top (k,p)=({k},{p}): |det| = {}",
            det.norm()
        );
    }
}

#[test]
fn spin_commutators_close_up_to_j_100() {
    // the defect is measured relative to ‖J_z‖ = j: the raw entries of the
    // products grow like j², so the float floor of the absolute defect is
    // ~j²·eps, which crosses 1e-12 just below j = 100
    for j in [10.0f64, 50.5, 100.0] {
        let (jx, jy, jz) = spin_operators(j).unwrap();
        let pairs = [(&jx, &jy, &jz), (&jy, &jz, &jx), (&jz, &jx, &jy)];
        for (a, b, c) in pairs {
            let comm = a.mul(b).unwrap().matrix() - b.mul(a).unwrap().matrix();
            let dim = comm.nrows();
            let mut worst = 0.0f64;
            for r in 0..dim {
                for s in 0..dim {
                    let want = Complex64::new(0.0, 1.0) * c.entry(r, s);
                    worst = worst.max((comm[(r, s)] - want).norm());
                }
            }
            assert!(
                worst < 1e-12 * j.max(1.0),
                "j={j}: commutator defect {worst} relative to scale {j}"
            );
        }
    }
}

#[test]
fn coherent_state_overlap_scan_distant_centres() {
    let n = 128;
    let min_sep = 8.0 / (n as f64).sqrt(); // in torus units
    let steps = (min_sep * n as f64).ceil() as usize;
    let base = coherent_state(n, TorusSite::new(0, 0)).unwrap();
    for a in [steps, steps + 9, steps + 20] {
        for b in [0usize, 40, 90] {
            let other = coherent_state(n, TorusSite::new(a, b)).unwrap();
            let overlap = base.overlap(&other).unwrap().norm();
            assert!(
                overlap < 0.1,
                "overlap {overlap} at separation ({a},{b})"
            );
        }
    }
}

#[test]
fn kac_lemma_across_cell_sizes() {
    // sample-mean return time to cells of measure 2^-b within 5% of 2^b
    for (b, seed) in [(4u32, 7u64), (6, 8), (8, 9)] {
        let cell = DyadicCell::zeros(b);
        let sample =
            gram_recur_core::classical::baker_return_times(&cell, 10_000_000, seed).unwrap();
        let mean = sample.mean();
        let expected = (1u64 << b) as f64;
        assert!(
            (mean - expected).abs() < 0.05 * expected,
            "b={b}: mean {mean} vs {expected}"
        );
    }
}

#[test]
fn hitting_times_exponential_for_borderless_word() {
    let cell = DyadicCell::one_zeros(8).unwrap();
    let sample =
        gram_recur_core::classical::baker_hitting_experiment(&cell, 4000, 1_000_000, 1234).unwrap();
    assert_eq!(sample.censored, 0);
    let mean = sample.mean();
    assert!((mean - 1.0).abs() < 0.06, "rescaled mean {mean}");
    let ks = ks_to_cdf(&sample.sorted(), |t| 1.0 - (-t).exp()).unwrap();
    assert!(ks < 0.05, "ks {ks}");
}

#[test]
fn empirical_histogram_matches_mp_density_shape() {
    // sanity check that the histogram of a large random spectrum tracks the
    // MP density bin by bin at coarse resolution
    let mut rng = SeededSampler::new(31415);
    let s = random_gram_spectrum(400, 400, &mut rng).unwrap();
    let law = MpLaw::new(1.0).unwrap();
    let hist = empirical_histogram(&s, 9, 4.5).unwrap();
    for i in 0..hist.bins() {
        let lo = hist.edges()[i];
        let hi = hist.edges()[i + 1];
        let expected = law.cdf(hi) - law.cdf(lo);
        let got = hist.masses()[i];
        assert!(
            (got - expected).abs() < 0.05,
            "bin {i}: mass {got} vs MP {expected}"
        );
    }
}
