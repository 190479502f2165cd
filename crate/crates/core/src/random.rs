//! Seeded generation of small random coefficients and tensors for the
//! randomized identity suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;
use crate::tensor::{Blade, ExteriorTensor, Variance};

pub struct Sampler {
    rng: ChaCha8Rng,
    dim: usize,
    rank: usize,
    functions: Vec<String>,
}

impl Sampler {
    pub fn new(seed: u64, dim: usize, rank: usize) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            dim,
            rank,
            functions: Vec::new(),
        }
    }

    /// Lets generated coefficients include these uninterpreted symbols.
    pub fn with_functions(mut self, names: &[String]) -> Self {
        self.functions = names.to_vec();
        self
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    fn monomial(&mut self) -> Scalar {
        let mut m = Scalar::one();
        if self.dim > 0 {
            for _ in 0..self.rng.gen_range(0..=2) {
                m = &m * &Scalar::coord(self.rng.gen_range(0..self.dim));
            }
        }
        m
    }

    /// A short polynomial, occasionally times a function symbol or an
    /// exponential of a coordinate.
    pub fn scalar(&mut self) -> Scalar {
        let mut s = Scalar::zero();
        for _ in 0..self.rng.gen_range(1..=2) {
            let mut c = self.rng.gen_range(-3i64..=3);
            if c == 0 {
                c = 1;
            }
            s = &s + &self.monomial().scale_int(c);
        }
        if !self.functions.is_empty() && self.rng.gen_ratio(1, 4) {
            let f = self.functions.choose(&mut self.rng).unwrap().clone();
            s = &s * &Scalar::func(&f);
        }
        if self.dim > 0 && self.rng.gen_ratio(1, 6) {
            let e = Scalar::exp(&Scalar::coord(self.rng.gen_range(0..self.dim)));
            s = &s * &e;
        }
        s
    }

    pub fn blade(&mut self, grade: usize) -> Blade {
        let mut idx: Vec<usize> = (0..self.rank).collect();
        idx.shuffle(&mut self.rng);
        Blade::from_indices(&idx[..grade]).unwrap().1
    }

    /// A tensor with one or two random monomial terms.
    pub fn tensor(&mut self, variance: Variance, grade: usize) -> ExteriorTensor {
        let mut t = ExteriorTensor::zero(variance, self.rank, grade);
        if grade > self.rank {
            return t;
        }
        for _ in 0..self.rng.gen_range(1..=2) {
            let b = self.blade(grade);
            let c = self.scalar();
            t.add_term(b, c);
        }
        t
    }

    pub fn vector(&mut self) -> ExteriorTensor {
        self.tensor(Variance::Multivector, 1)
    }

    pub fn form(&mut self, grade: usize) -> ExteriorTensor {
        self.tensor(Variance::Form, grade)
    }

    pub fn multivector(&mut self, grade: usize) -> ExteriorTensor {
        self.tensor(Variance::Multivector, grade)
    }
}
