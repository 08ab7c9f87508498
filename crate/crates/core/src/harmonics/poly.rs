use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Exponent tuple (α_1, …, α_d).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut a = vec![0; dim];
        a[i] = 1;
        MultiIndex(a)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl Add for &MultiIndex {
    type Output = MultiIndex;
    fn add(self, o: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

/// Polynomial in `dim` variables with exact rational coefficients; zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<MultiIndex, BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: BigRational) -> Self {
        Self::monomial(MultiIndex::zero(dim), c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, BigRational::one())
    }

    pub fn monomial(alpha: MultiIndex, c: BigRational) -> Self {
        let mut p = Polynomial::zero(alpha.dim());
        p.add_term(alpha, c);
        p
    }

    pub fn variable(dim: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::unit(dim, i), BigRational::one())
    }

    /// |x|² = Σ x_i².
    pub fn norm_squared(dim: usize) -> Self {
        let mut p = Polynomial::zero(dim);
        for i in 0..dim {
            let mut a = vec![0; dim];
            a[i] = 2;
            p.add_term(MultiIndex(a), BigRational::one());
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> BigRational {
        self.terms.get(alpha).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    pub fn is_homogeneous(&self, m: u32) -> bool {
        self.terms.keys().all(|a| a.degree() == m)
    }

    fn add_term(&mut self, alpha: MultiIndex, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(alpha) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial { dim: self.dim, terms: self.terms.iter().map(|(a, v)| (a.clone(), v * c)).collect() }
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (a, c) in &self.terms {
            let e = a.0[i];
            if e == 0 {
                continue;
            }
            let mut b = a.clone();
            b.0[i] -= 1;
            out.add_term(b, c * rat(e as i64));
        }
        out
    }

    pub fn laplacian(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for i in 0..self.dim {
            out = &out + &self.derivative(i).derivative(i);
        }
        out
    }

    /// Division by |x|²: returns (q, r) with p = |x|² q + r and no term of
    /// r divisible by x_1² (lexicographic normal form).
    pub fn div_rem_norm_squared(&self) -> (Polynomial, Polynomial) {
        let n2 = Polynomial::norm_squared(self.dim);
        let mut rem = self.clone();
        let mut q = Polynomial::zero(self.dim);
        let mut r = Polynomial::zero(self.dim);
        while let Some((a, c)) = rem.terms.iter().next_back().map(|(a, c)| (a.clone(), c.clone())) {
            if a.0[0] >= 2 {
                let mut b = a.clone();
                b.0[0] -= 2;
                let t = Polynomial::monomial(b, c);
                rem = &rem - &(&t * &n2);
                q = &q + &t;
            } else {
                rem.terms.remove(&a);
                r.add_term(a, c);
            }
        }
        (q, r)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.to_float().eval(x)
    }

    pub fn to_float(&self) -> FloatPolynomial {
        FloatPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.0.clone(), c.to_f64().unwrap_or(f64::NAN)))
                .collect(),
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (a, c) in &o.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&rat(-1))
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        self + &(-o)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (a, c) in &self.terms {
            for (b, e) in &o.terms {
                out.add_term(a + b, c * e);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(a, c)| {
                let vars: Vec<String> = a
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(k, &e)| if e == 1 { format!("x{}", k + 1) } else { format!("x{}^{}", k + 1, e) })
                    .collect();
                match (vars.is_empty(), c.is_one()) {
                    (true, _) => format!("{c}"),
                    (false, true) => vars.join("*"),
                    (false, false) => format!("{c}*{}", vars.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Floating-point copy of a [`Polynomial`] for fast evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatPolynomial {
    terms: Vec<(Vec<u32>, f64)>,
}

impl FloatPolynomial {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(a, c)| a.iter().zip(x).fold(*c, |acc, (&e, &xi)| acc * xi.powi(e as i32)))
            .sum()
    }
}

/// Exact Laplacian.
pub fn laplacian(p: &Polynomial) -> Polynomial {
    p.laplacian()
}
