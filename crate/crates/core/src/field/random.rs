use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::HerglotzField;
use crate::error::{Error, Result};
use crate::harmonics::{Basis, BasisKind};

/// Seeded random K-finite fields with complex Gaussian coefficients and
/// optional structural constraints.
#[derive(Debug, Clone, Default)]
pub struct FieldGenerator {
    pub max_degree: usize,
    /// Real-valued field (real coefficients; d = 2: û(−k) = conj û(k)).
    pub real: bool,
    /// At most one active basis index per degree.
    pub sparse: bool,
    /// Sparse on the shared pole ζ_0 (zonal bases only).
    pub zonal: bool,
    /// a_{0,1} = 0.
    pub zero_mean: bool,
    /// d = 2 only: every degree of type R, |û(m)| = |û(−m)|; implies zero mean.
    pub all_r: bool,
    /// A single active degree m ≥ 1.
    pub single_mode: bool,
}

fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

impl FieldGenerator {
    pub fn new(max_degree: usize) -> Self {
        FieldGenerator { max_degree, ..Default::default() }
    }

    pub fn generate_seeded(&self, basis: Arc<Basis>, seed: u64) -> Result<HerglotzField> {
        self.generate(basis, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn generate<R: Rng>(&self, basis: Arc<Basis>, rng: &mut R) -> Result<HerglotzField> {
        let kind = basis.spec().kind;
        let fourier = kind == BasisKind::Fourier2D;
        if self.all_r && !fourier {
            return Err(Error::Domain("all-R fields are a d = 2 construction".into()));
        }
        if self.zonal && kind != BasisKind::Zonal {
            return Err(Error::Domain("zonal fields need a zonal basis".into()));
        }
        let big_m = self.max_degree;
        let single = if self.single_mode { Some(rng.random_range(1..=big_m.max(1))) } else { None };
        let mut coeffs = Vec::with_capacity(big_m + 1);
        for m in 0..=big_m {
            let n = basis.count(m);
            let mut a: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
            if self.real {
                if fourier {
                    if m == 0 {
                        a[0].im = 0.0;
                    } else {
                        a[1] = a[0].conj();
                    }
                } else {
                    a.iter_mut().for_each(|c| c.im = 0.0);
                }
            }
            if self.all_r && m > 0 {
                let beta = gaussian(rng);
                let theta: f64 = rng.random_range(0.0..std::f64::consts::PI);
                a = vec![beta * Complex64::from_polar(1.0, theta), beta * Complex64::from_polar(1.0, -theta)];
            }
            if self.sparse || self.zonal {
                let keep = if self.zonal { 0 } else { rng.random_range(0..n) };
                for (j, c) in a.iter_mut().enumerate() {
                    if j != keep {
                        *c = Complex64::new(0.0, 0.0);
                    }
                }
            }
            let silent = (m == 0 && (self.zero_mean || self.all_r)) || single.is_some_and(|s| s != m);
            if silent {
                a.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
            }
            coeffs.push(a);
        }
        HerglotzField::new(basis, coeffs)
    }
}
