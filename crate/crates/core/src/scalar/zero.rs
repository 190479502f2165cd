//! Zero testing. Exact inside the class where every generator (coordinates,
//! function symbols and their partials, polynomial-exponent exponentials) is
//! algebraically independent; numeric sampling outside it.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::poly::Generator;
use super::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Zero,
    NonZero,
    ProbablyZero,
    ProbablyNonZero,
    Indeterminate,
}

impl Decision {
    pub fn is_zero(self) -> bool {
        matches!(self, Decision::Zero | Decision::ProbablyZero)
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Decision::Zero | Decision::NonZero)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroConfig {
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
}

impl Default for ZeroConfig {
    fn default() -> Self {
        ZeroConfig {
            seed: 0x6e61_6d62_75,
            samples: 8,
            tolerance: 1e-9,
        }
    }
}

/// Values assigned to every generator for one numeric evaluation.
#[derive(Debug, Default)]
pub struct SamplePoint {
    values: BTreeMap<Generator, f64>,
}

impl SamplePoint {
    pub(crate) fn value(&self, g: &Generator) -> Option<f64> {
        self.values.get(g).copied()
    }

    fn draw(gens: &BTreeSet<Generator>, rng: &mut ChaCha8Rng) -> Self {
        let values = gens
            .iter()
            .map(|g| {
                let mut p: i32 = rng.gen_range(-9..=9);
                if p == 0 {
                    p = 1;
                }
                let q: i32 = rng.gen_range(1..=7);
                (g.clone(), p as f64 / q as f64)
            })
            .collect();
        SamplePoint { values }
    }
}

const MAX_RETRIES: usize = 64;

pub(crate) fn decide(e: &Scalar, cfg: &ZeroConfig) -> Decision {
    if e.num.is_zero() {
        return Decision::Zero;
    }
    if e.in_exact_class() {
        return Decision::NonZero;
    }
    let gens = e.generators();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < cfg.samples.max(1) {
        if attempts >= cfg.samples.max(1) + MAX_RETRIES {
            return Decision::Indeterminate;
        }
        attempts += 1;
        let point = SamplePoint::draw(&gens, &mut rng);
        let Some((n, nscale)) = e.num.eval(&point) else {
            continue;
        };
        let Some((d, dscale)) = e.den.eval(&point) else {
            continue;
        };
        if d.abs() <= cfg.tolerance * dscale.max(f64::MIN_POSITIVE) {
            continue;
        }
        accepted += 1;
        if n.abs() > cfg.tolerance * nscale {
            return Decision::ProbablyNonZero;
        }
    }
    Decision::ProbablyZero
}
