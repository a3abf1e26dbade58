use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{BipartiteRelation, MatchingError};
use crate::group_model::Rational;

/// Number of random subsets sampled when certifying expansivity.
pub const EXPANSIVITY_SAMPLES: usize = 100;

/// `|R_A| >= c |A|` for every left set `A`, with `c = a / b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpansivityCertificate {
    /// Minimum left degree.
    pub a: usize,
    /// Maximum right degree.
    pub b: usize,
    pub c: Rational,
    pub samples: usize,
    pub sample_failures: usize,
}

impl ExpansivityCertificate {
    pub fn is_expansive(&self) -> bool {
        self.c > 1
    }

    /// `c^{-n}`.
    pub fn phase_bound(&self, n: usize) -> Rational {
        self.c.recip().pow(n as u32)
    }
}

/// Computes `a`, `b` and `c = a/b`, then checks `|R_A| >= c|A|` directly on
/// random subsets drawn from a generator seeded with `seed`.
pub fn certify_expansivity(r: &BipartiteRelation, seed: u64) -> Result<ExpansivityCertificate, MatchingError> {
    if r.left_len() == 0 {
        return Err(MatchingError::EmptyLeft);
    }
    let a = r.min_left_degree();
    if a == 0 {
        let x = (0..r.left_len()).find(|&x| r.neighbors(x).is_empty()).unwrap_or(0);
        return Err(MatchingError::IsolatedLeft(x));
    }
    let b = r.max_right_degree();
    let c = Rational::ratio(a, b);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hit = vec![0u32; r.right_len()];
    let mut failures = 0;
    for round in 1..=EXPANSIVITY_SAMPLES as u32 {
        let p: f64 = rng.gen_range(0.0..1.0);
        let mut size = 0;
        let mut image = 0;
        for x in 0..r.left_len() {
            if !rng.gen_bool(p) {
                continue;
            }
            size += 1;
            for &y in r.neighbors(x) {
                if hit[y as usize] != round {
                    hit[y as usize] = round;
                    image += 1;
                }
            }
        }
        if c.exceeds_count(image, size) {
            failures += 1;
        }
    }
    Ok(ExpansivityCertificate {
        a,
        b,
        c,
        samples: EXPANSIVITY_SAMPLES,
        sample_failures: failures,
    })
}
