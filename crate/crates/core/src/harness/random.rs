use crate::numkit::rmat;
use crate::sysmodel::{is_hurwitz, StateSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::Serialize;

/// Random real plants: off-diagonal A and all of B, C, D standard normal,
/// diagonal of A normal with mean `diag_mean` and spread `diag_spread`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RandomModelSpec {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub count: usize,
    pub seed: u64,
    pub diag_mean: f64,
    pub diag_spread: f64,
    /// `diag_spread` is a variance when true, a standard deviation otherwise.
    pub spread_is_variance: bool,
}

impl RandomModelSpec {
    pub fn new(n: usize, count: usize, seed: u64) -> Self {
        RandomModelSpec {
            n,
            m: 1,
            p: 1,
            count,
            seed,
            diag_mean: -5.5,
            diag_spread: 4.5,
            spread_is_variance: true,
        }
    }

    pub fn diag_std(&self) -> f64 {
        if self.spread_is_variance {
            self.diag_spread.sqrt()
        } else {
            self.diag_spread
        }
    }
}

#[derive(Debug, Clone)]
pub struct RandomModels {
    pub systems: Vec<StateSpace>,
    /// Non-Hurwitz draws that were discarded.
    pub resamples: usize,
}

fn draw(spec: &RandomModelSpec, rng: &mut ChaCha8Rng) -> StateSpace {
    let (n, m, p) = (spec.n, spec.m, spec.p);
    let diag = Normal::new(spec.diag_mean, spec.diag_std()).expect("finite spread");
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = if i == j {
                diag.sample(rng)
            } else {
                rng.sample(StandardNormal)
            };
        }
    }
    let mut gauss = |len: usize| -> Vec<f64> { (0..len).map(|_| rng.sample(StandardNormal)).collect() };
    let b = gauss(n * m);
    let c = gauss(p * n);
    let d = gauss(p * m);
    StateSpace::new(rmat(n, n, &a), rmat(n, m, &b), rmat(p, n, &c), rmat(p, m, &d))
        .expect("consistent dimensions")
}

/// Deterministic for a given spec; one generator stream for all models.
pub fn generate_random_models(spec: &RandomModelSpec) -> RandomModels {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut systems = Vec::with_capacity(spec.count);
    let mut resamples = 0;
    while systems.len() < spec.count {
        let s = draw(spec, &mut rng);
        if is_hurwitz(&s).map(|h| h.0).unwrap_or(false) {
            systems.push(s);
        } else {
            resamples += 1;
        }
    }
    RandomModels { systems, resamples }
}

/// Random Hurwitz system of order n (diagonal shift keeps it stable).
pub fn random_stable(n: usize, m: usize, p: usize, rng: &mut ChaCha8Rng) -> StateSpace {
    loop {
        let spec = RandomModelSpec {
            n,
            m,
            p,
            count: 1,
            seed: 0,
            diag_mean: -2.0,
            diag_spread: 1.0,
            spread_is_variance: true,
        };
        let s = draw(&spec, rng);
        if is_hurwitz(&s).map(|h| h.0).unwrap_or(false) {
            return s;
        }
    }
}
