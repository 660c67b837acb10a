//! Cohomology of `P^n` and the Chern character -> Chern class -> Segre class
//! pipeline for tautological bundles on `(P^1)^[n] = P^n`.
//!
//! Classes are polynomials in the hyperplane class `h` with `h^(n+1) = 0`.
//! Chern classes are recovered from the Chern character with Newton's
//! identities; Chern roots are never materialised.

use std::ops::{Add, Mul};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChernError {
    #[error("segre class needs total Chern class with constant term 1, found {0}")]
    NonUnitConstant(Rational),
    #[error("classes live on different projective spaces (P^{0} vs P^{1})")]
    DimensionMismatch(usize, usize),
}

/// An element of `H^*(P^n, Q) = Q[h]/(h^(n+1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomClass {
    coeffs: Vec<Rational>,
}

impl CohomClass {
    /// `coeffs[i]` is the coefficient of `h^i`; missing entries are zero and
    /// entries past `h^dim` are dropped.
    pub fn new(dim: usize, mut coeffs: Vec<Rational>) -> CohomClass {
        coeffs.resize(dim + 1, Rational::zero());
        CohomClass { coeffs }
    }

    pub fn zero(dim: usize) -> CohomClass {
        CohomClass::new(dim, Vec::new())
    }

    pub fn one(dim: usize) -> CohomClass {
        CohomClass::new(dim, vec![Rational::one()])
    }

    /// `exp(c h)`, truncated at `h^dim`.
    pub fn exp_h(dim: usize, c: &Rational) -> CohomClass {
        let mut coeffs = Vec::with_capacity(dim + 1);
        let mut term = Rational::one();
        for k in 0..=dim {
            coeffs.push(term.clone());
            term = term * c / int(k as i64 + 1);
        }
        CohomClass { coeffs }
    }

    /// `(1 + c h)^e` for an integer exponent `e` of either sign.
    pub fn binomial_power(dim: usize, c: &Rational, e: i64) -> CohomClass {
        let mut coeffs = Vec::with_capacity(dim + 1);
        let mut term = Rational::one();
        for k in 0..=dim {
            coeffs.push(term.clone());
            term = term * c * int(e - k as i64) / int(k as i64 + 1);
        }
        CohomClass { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// The coefficient of `h^k`, zero past the top degree.
    pub fn degree(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Integral over `P^n`: the coefficient of `h^n`.
    pub fn integral(&self) -> Rational {
        self.coeffs[self.dim()].clone()
    }

    pub fn scale(&self, c: &Rational) -> CohomClass {
        CohomClass {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn try_add(&self, other: &CohomClass) -> Result<CohomClass, ChernError> {
        self.same_dim(other)?;
        Ok(CohomClass {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_mul(&self, other: &CohomClass) -> Result<CohomClass, ChernError> {
        self.same_dim(other)?;
        let n = self.dim();
        let mut coeffs = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(CohomClass { coeffs })
    }

    fn same_dim(&self, other: &CohomClass) -> Result<(), ChernError> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(ChernError::DimensionMismatch(self.dim(), other.dim()))
        }
    }
}

impl Add for &CohomClass {
    type Output = CohomClass;

    fn add(self, rhs: &CohomClass) -> CohomClass {
        self.try_add(rhs).expect("cohomology classes on different P^n")
    }
}

impl Mul for &CohomClass {
    type Output = CohomClass;

    fn mul(self, rhs: &CohomClass) -> CohomClass {
        self.try_mul(rhs).expect("cohomology classes on different P^n")
    }
}

/// A K-theory class on `P^n`, recorded by rank and Chern character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KClassData {
    pub rank: i64,
    pub chern_character: CohomClass,
}

impl KClassData {
    pub fn new(rank: i64, chern_character: CohomClass) -> KClassData {
        debug_assert_eq!(chern_character.degree(0), int(rank));
        KClassData { rank, chern_character }
    }

    pub fn dim(&self) -> usize {
        self.chern_character.dim()
    }

    /// Direct sum (K-theoretic addition).
    pub fn sum(&self, other: &KClassData) -> KClassData {
        KClassData {
            rank: self.rank + other.rank,
            chern_character: &self.chern_character + &other.chern_character,
        }
    }

    /// `self (x) C^m`.
    pub fn times(&self, m: i64) -> KClassData {
        KClassData {
            rank: self.rank * m,
            chern_character: self.chern_character.scale(&int(m)),
        }
    }
}

/// Chern character of `O(d)^[n]` on `(P^1)^[n] = P^n`:
/// `(d+1) - (d-n+1) exp(-h)`.
pub fn ch_tautological(d: i64, n: usize) -> KClassData {
    assert!(n >= 1, "Hilbert scheme of n >= 1 points");
    let e = CohomClass::exp_h(n, &int(-1));
    let ch = &CohomClass::one(n).scale(&int(d + 1)) + &e.scale(&int(-(d - n as i64 + 1)));
    KClassData::new(n as i64, ch)
}

/// Total Chern class from the Chern character.
///
/// With power sums `p_k = k! ch_k`, Newton's identities give
/// `k c_k = sum_{i=1}^k (-1)^(i-1) c_(k-i) p_i`.
pub fn ch_to_total_chern(k: &KClassData) -> CohomClass {
    let n = k.dim();
    let ch = k.chern_character.coeffs();
    let mut p = Vec::with_capacity(n + 1);
    let mut fact = Rational::one();
    for (i, c) in ch.iter().enumerate() {
        if i > 0 {
            fact *= int(i as i64);
        }
        p.push(c * &fact);
    }
    let mut c = vec![Rational::one()];
    for deg in 1..=n {
        let mut acc = Rational::zero();
        for i in 1..=deg {
            let term = &c[deg - i] * &p[i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        c.push(acc / int(deg as i64));
    }
    CohomClass::new(n, c)
}

/// The multiplicative inverse of a total Chern class.
pub fn segre_class(c: &CohomClass) -> Result<CohomClass, ChernError> {
    if !c.coeffs[0].is_one() {
        return Err(ChernError::NonUnitConstant(c.coeffs[0].clone()));
    }
    let n = c.dim();
    let mut s = vec![Rational::one()];
    for k in 1..=n {
        let mut acc = Rational::zero();
        for j in 1..=k {
            acc -= &c.coeffs[j] * &s[k - j];
        }
        s.push(acc);
    }
    Ok(CohomClass::new(n, s))
}

/// `V^[n] = O^[n] (x) C^(r-1) + O(d)^[n]` on `P^n`.
pub fn tautological_rank_r(d: i64, r: i64, n: usize) -> KClassData {
    ch_tautological(0, n).times(r - 1).sum(&ch_tautological(d, n))
}

/// `int_{P^n} s_n(V^[n])` for `V = O^(r-1) + O(d)` on `P^1`, through the full
/// ch -> c -> s pipeline.
pub fn segre_integral_p1(d: i64, r: i64, n: usize) -> Rational {
    assert!(r >= 1 && n >= 1);
    let v = tautological_rank_r(d, r, n);
    let c = ch_to_total_chern(&v);
    segre_class(&c).expect("total Chern class has constant term 1").integral()
}
