use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{EquivalenceReport, Evidence};
use crate::hardy::{lemma_constant, lemma_ip_sides};

/// Between 1 and `max_len` atoms with masses log-uniform on `[1e-2, 1e2]`.
pub fn random_chain_masses<R: Rng>(rng: &mut R, max_len: usize) -> Vec<f64> {
    let len = rng.gen_range(1..=max_len.max(1));
    (0..len)
        .map(|_| 10f64.powf(rng.gen_range(-2.0..=2.0)))
        .collect()
}

/// Random search for violations of `lhs ≤ C_α rhs`, one record per `α`
/// with the worst ratio `lhs/rhs` found.
pub fn lemma_sweep(
    alphas: &[f64],
    n_trials: usize,
    max_len: usize,
    seed: u64,
) -> EquivalenceReport {
    lemma_sweep_with(alphas, n_trials, max_len, seed, lemma_constant)
}

/// [`lemma_sweep`] against a caller-supplied constant.
pub fn lemma_sweep_with<F>(
    alphas: &[f64],
    n_trials: usize,
    max_len: usize,
    seed: u64,
    constant: F,
) -> EquivalenceReport
where
    F: Fn(f64) -> f64 + Sync,
{
    let rows: Vec<(f64, bool, f64, Vec<f64>)> = alphas
        .par_iter()
        .enumerate()
        .map(|(i, &alpha)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let c = constant(alpha);
            let mut ok = true;
            let mut worst = (0.0, Vec::new());
            for _ in 0..n_trials {
                let masses = random_chain_masses(&mut rng, max_len);
                let s = lemma_ip_sides(&masses, alpha).expect("positive masses");
                // equality cases (α = 1, single atoms) only differ by rounding
                ok &= s.lhs <= c * s.rhs * (1.0 + 1e-12);
                let ratio = s.lhs / s.rhs;
                if ratio > worst.0 {
                    worst = (ratio, masses);
                }
            }
            (c, ok, worst.0, worst.1)
        })
        .collect();
    let mut rep = EquivalenceReport::new("lemma_sweep");
    for (&alpha, (c, ok, ratio, masses)) in alphas.iter().zip(rows) {
        rep.push(
            format!("alpha={alpha}"),
            ok,
            ratio,
            c,
            Evidence::Masses { values: masses },
        );
    }
    rep
}
