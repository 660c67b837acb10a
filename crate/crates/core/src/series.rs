//! Exact truncated formal power series over the rationals.
//!
//! A [`Series`] of order `N` stores `c_0, ..., c_N` exactly. Every binary
//! operation is exact through the minimum order of its inputs and returns a
//! series of that order. Values are immutable; operations never mutate their
//! inputs.

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::rational::{int, pow_i64, Rational};

/// The formal variable a series is expanded in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    W,
    Z,
    T,
    U,
    H,
    Other,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::W => "w",
            Var::Z => "z",
            Var::T => "t",
            Var::U => "u",
            Var::H => "h",
            Var::Other => "x",
        }
    }

    /// Series variables usable in manifest expressions.
    pub fn from_name(s: &str) -> Option<Var> {
        match s {
            "w" => Some(Var::W),
            "z" => Some(Var::Z),
            "t" => Some(Var::T),
            "u" => Some(Var::U),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("variable mismatch: {0} vs {1}")]
    VarMismatch(Var, Var),
    #[error("division by a series with zero constant term")]
    DivisionByNonUnit,
    #[error("negative power of a series with zero constant term")]
    NegativePowerOfNonUnit,
    #[error("fractional power {0} requires constant term 1, found {1}")]
    FractionalPowerNeedsUnit(Rational, Rational),
    #[error("composition requires an inner series with zero constant term, found {0}")]
    ComposeNonZeroConstant(Rational),
    #[error("reversion requires zero constant term and invertible linear term")]
    NotRevertible,
    #[error("coefficient {requested} requested but series is only known through order {order}")]
    InsufficientOrder { requested: usize, order: usize },
    #[error("scalar division by zero")]
    ScalarDivisionByZero,
}

pub type Result<T> = std::result::Result<T, SeriesError>;

#[derive(Clone, Debug)]
pub struct Series {
    var: Var,
    coeffs: Vec<Rational>,
}

/// Outcome of comparing two series at their common order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub order: usize,
    pub first_mismatch: Option<usize>,
}

impl Comparison {
    pub fn agrees(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

impl Series {
    /// Builds a series from low-order coefficients, zero-filling up to `order`.
    /// Coefficients past `order` are dropped.
    pub fn from_polynomial(var: Var, mut coeffs: Vec<Rational>, order: usize) -> Series {
        coeffs.resize(order + 1, Rational::zero());
        Series { var, coeffs }
    }

    pub fn from_ints(var: Var, coeffs: &[i64], order: usize) -> Series {
        Series::from_polynomial(var, coeffs.iter().map(|&c| int(c)).collect(), order)
    }

    pub fn zero(var: Var, order: usize) -> Series {
        Series::from_polynomial(var, Vec::new(), order)
    }

    pub fn constant(var: Var, c: Rational, order: usize) -> Series {
        Series::from_polynomial(var, vec![c], order)
    }

    pub fn one(var: Var, order: usize) -> Series {
        Series::constant(var, Rational::one(), order)
    }

    /// The series `x` in variable `var`.
    pub fn identity(var: Var, order: usize) -> Series {
        Series::from_ints(var, &[0, 1], order)
    }

    /// `c0 + c1 x`.
    pub fn linear(var: Var, c0: i64, c1: i64, order: usize) -> Series {
        Series::from_ints(var, &[c0, c1], order)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    /// The coefficient of `x^n`; equivalently the residue of `f dx / x^(n+1)`.
    pub fn coefficient(&self, n: usize) -> Result<&Rational> {
        self.coeffs.get(n).ok_or(SeriesError::InsufficientOrder {
            requested: n,
            order: self.order(),
        })
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Series {
        assert!(order <= self.order(), "cannot extend a truncated series");
        Series {
            var: self.var,
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn retag(&self, var: Var) -> Series {
        Series {
            var,
            coeffs: self.coeffs.clone(),
        }
    }

    fn check_var(&self, other: &Series) -> Result<()> {
        if self.var == other.var {
            Ok(())
        } else {
            Err(SeriesError::VarMismatch(self.var, other.var))
        }
    }

    fn common_order(&self, other: &Series) -> usize {
        self.order().min(other.order())
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_var(other)?;
        let n = self.common_order(other);
        let coeffs = (0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        Ok(Series { var: self.var, coeffs })
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.check_var(other)?;
        let n = self.common_order(other);
        let coeffs = (0..=n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect();
        Ok(Series { var: self.var, coeffs })
    }

    pub fn neg(&self) -> Series {
        Series {
            var: self.var,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Series {
        Series {
            var: self.var,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn scalar_div(&self, c: &Rational) -> Result<Series> {
        if c.is_zero() {
            return Err(SeriesError::ScalarDivisionByZero);
        }
        Ok(self.scale(&c.recip()))
    }

    pub fn add_constant(&self, c: &Rational) -> Series {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    /// Cauchy product, exact through the common order.
    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_var(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Series) -> Series {
        let n = self.common_order(other);
        let mut coeffs = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Series { var: self.var, coeffs }
    }

    /// `h` with `h * other = self` through the common order.
    pub fn div(&self, other: &Series) -> Result<Series> {
        self.check_var(other)?;
        let g0 = other.constant_term();
        if g0.is_zero() {
            return Err(SeriesError::DivisionByNonUnit);
        }
        let n = self.common_order(other);
        let inv0 = g0.recip();
        let mut q: Vec<Rational> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                let g = &other.coeffs[j];
                if !g.is_zero() {
                    acc -= g * &q[k - j];
                }
            }
            q.push(acc * &inv0);
        }
        Ok(Series { var: self.var, coeffs: q })
    }

    pub fn recip(&self) -> Result<Series> {
        Series::one(self.var, self.order()).div(self)
    }

    /// Integer power; negative exponents need a nonzero constant term.
    pub fn powi(&self, e: i64) -> Result<Series> {
        self.pow(&int(e))
    }

    /// `self^exponent` by the exact binomial-series expansion.
    ///
    /// Integer exponents: non-negative always allowed, negative ones need a
    /// nonzero constant term. Non-integer exponents need constant term 1.
    pub fn pow(&self, exponent: &Rational) -> Result<Series> {
        let f0 = self.constant_term();
        if exponent.is_integer() {
            if f0.is_zero() {
                if exponent.is_negative() {
                    return Err(SeriesError::NegativePowerOfNonUnit);
                }
                let e = exponent
                    .to_integer()
                    .to_u64()
                    .expect("exponent too large for a series with zero constant term");
                return Ok(self.pow_by_squaring(e));
            }
            let e = exponent.to_integer().to_i64().expect("integer exponent out of range");
            Ok(self.pow_unit(exponent, pow_i64(f0, e)))
        } else {
            if !f0.is_one() {
                return Err(SeriesError::FractionalPowerNeedsUnit(exponent.clone(), f0.clone()));
            }
            Ok(self.pow_unit(exponent, Rational::one()))
        }
    }

    pub fn sqrt(&self) -> Result<Series> {
        self.pow(&Rational::new(1.into(), 2.into()))
    }

    fn pow_by_squaring(&self, mut e: u64) -> Series {
        let mut acc = Series::one(self.var, self.order());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    // h = f^a from h f' a = h' f:  n f0 h_n = sum_{k=1}^n ((a+1)k - n) f_k h_{n-k}.
    fn pow_unit(&self, a: &Rational, h0: Rational) -> Series {
        let n_max = self.order();
        let f0_inv = self.coeffs[0].recip();
        let a1 = a + Rational::one();
        let mut h = Vec::with_capacity(n_max + 1);
        h.push(h0);
        for n in 1..=n_max {
            let nn = int(n as i64);
            let mut acc = Rational::zero();
            for k in 1..=n {
                let fk = &self.coeffs[k];
                if fk.is_zero() {
                    continue;
                }
                let w = &a1 * int(k as i64) - &nn;
                acc += w * fk * &h[n - k];
            }
            h.push(acc * &f0_inv / nn);
        }
        Series { var: self.var, coeffs: h }
    }

    pub fn derivative(&self) -> Series {
        let coeffs: Vec<Rational> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * int(k as i64))
            .collect();
        if coeffs.is_empty() {
            Series::zero(self.var, 0)
        } else {
            Series { var: self.var, coeffs }
        }
    }

    /// `self(inner(y))`, tagged with the inner series' variable.
    pub fn compose(&self, inner: &Series) -> Result<Series> {
        if !inner.constant_term().is_zero() {
            return Err(SeriesError::ComposeNonZeroConstant(inner.constant_term().clone()));
        }
        let n = self.common_order(inner);
        let g = inner.truncate(n);
        let mut acc = Series::constant(g.var, self.coeffs[n].clone(), n);
        for c in self.coeffs[..n].iter().rev() {
            acc = acc.mul_unchecked(&g);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// The compositional inverse: if `self` expresses `y = g(x)`, returns
    /// `x = h(y)` as a series in `var`, with `g(h(y)) = y` and `h(g(x)) = x`.
    pub fn revert(&self, var: Var) -> Result<Series> {
        let n_max = self.order();
        if !self.coeffs[0].is_zero() || n_max == 0 || self.coeffs[1].is_zero() {
            return Err(SeriesError::NotRevertible);
        }
        let g = &self.coeffs;
        let g1_inv = g[1].recip();
        // powers[k][m] = [y^m] h^k; column m of h^k (k >= 2) only involves
        // h_1 .. h_{m-1}, so h is determined one coefficient at a time.
        let mut h = vec![Rational::zero(); n_max + 1];
        let mut powers: Vec<Vec<Rational>> = vec![vec![Rational::zero(); n_max + 1]; n_max + 1];
        powers[0][0] = Rational::one();
        for m in 1..=n_max {
            let mut rhs = if m == 1 { Rational::one() } else { Rational::zero() };
            for k in 2..=m {
                let mut c = Rational::zero();
                for j in 1..=m - k + 1 {
                    let prev = &powers[k - 1][m - j];
                    if !prev.is_zero() && !h[j].is_zero() {
                        c += &h[j] * prev;
                    }
                }
                if !g[k].is_zero() {
                    rhs -= &g[k] * &c;
                }
                powers[k][m] = c;
            }
            h[m] = rhs * &g1_inv;
            powers[1][m] = h[m].clone();
        }
        Ok(Series { var, coeffs: h })
    }

    /// Compares at the common order; tags must match.
    pub fn compare(&self, other: &Series) -> Result<Comparison> {
        self.check_var(other)?;
        let order = self.common_order(other);
        let first_mismatch = (0..=order).find(|&i| self.coeffs[i] != other.coeffs[i]);
        Ok(Comparison { order, first_mismatch })
    }

    /// Substitutes `x -> c x`.
    pub fn rescale_var(&self, c: &Rational) -> Series {
        let mut p = Rational::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a * &p);
            p *= c;
        }
        Series { var: self.var, coeffs }
    }
}

/// Equal iff tags match and coefficients agree through the smaller order.
impl PartialEq for Series {
    fn eq(&self, other: &Series) -> bool {
        self.compare(other).map(|c| c.agrees()).unwrap_or(false)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "{}", self.var)?,
                _ => write!(f, "{}^{}", self.var, k)?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O({}^{})", self.var, self.order() + 1)
    }
}
