//! Named constructions of every generating series in the Segre/Lehn story and
//! the identity checks that tie them together.
//!
//! Each constructor returns exact truncated series; each `*_check` function
//! computes the same quantity along independent routes and reports how they
//! compare. Nothing here panics on a mismatch: callers (tests, the CLI harness)
//! decide what a disagreement means.

mod conjectures;
mod curve;
mod surface;
mod verlinde;

pub use conjectures::{
    conj1_lehn_probe, conjecture1_series, conjecture2_series, Conj1Series, Conj2Relations,
    Conj2Series, ProbeLine, ProbeReport,
};
pub use curve::{
    curve_segre_rhs, higher_rank_curve_check, lemma3_series, p1_segre_series, theorem2_series,
    HigherRankReport,
};
pub use surface::{
    blowup_coefficient_check, k3_closed_form_check, lehn_rhs, lehn_w_of_z, lehn_z_of_w,
    residue_chain_check, t_vs_w_check, universal_series_t, universal_series_w, BlowupModel,
    ResidueChain, TwoRouteComparison, UniversalSeries, UniversalT,
};
pub use verlinde::{verlinde_k3_check, verlinde_series, VerlindeSeries};

use std::fmt;

use thiserror::Error;

use crate::rational::Rational;
use crate::series::{Series, SeriesError, Var};

/// Truncation order used when a caller does not ask for one.
pub const DEFAULT_ORDER: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("H^2 - H.K = {0} is odd; not the invariants of a surface")]
    Parity(i64),
    #[error("rank parameter r = 0 is singular for this family")]
    ZeroRank,
    #[error("curve Segre series is only available in rank 1, got r = {0}")]
    UnsupportedRank(i64),
    #[error("{what}: routes disagree ({lhs} vs {rhs})")]
    Mismatch {
        what: &'static str,
        lhs: Rational,
        rhs: Rational,
    },
}

pub type Result<T> = std::result::Result<T, CatalogError>;

/// `(H^2, chi(O_S), H.K_S, K_S^2)` for a surface with a line bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceInvariants {
    pub h2: i64,
    pub chi_o: i64,
    pub hk: i64,
    pub k2: i64,
}

/// Lehn's exponents `(a, b, c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LehnExponents {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl SurfaceInvariants {
    pub fn new(h2: i64, chi_o: i64, hk: i64, k2: i64) -> SurfaceInvariants {
        SurfaceInvariants { h2, chi_o, hk, k2 }
    }

    /// Parity is a hard requirement: `H^2 - H.K = 2 (chi(H) - chi(O))`.
    pub fn validate(&self) -> Result<()> {
        if (self.h2 - self.hk) % 2 != 0 {
            Err(CatalogError::Parity(self.h2 - self.hk))
        } else {
            Ok(())
        }
    }

    /// `chi(H) = H(H-K)/2 + chi(O_S)` by Riemann-Roch.
    pub fn chi_h(&self) -> Result<i64> {
        self.validate()?;
        Ok((self.h2 - self.hk) / 2 + self.chi_o)
    }

    pub fn lehn_exponents(&self) -> Result<LehnExponents> {
        let c = self.chi_h()?;
        Ok(LehnExponents {
            a: self.hk - 2 * self.k2,
            b: self.h2 - 2 * self.hk + self.k2 + 3 * self.chi_o,
            c,
        })
    }
}

/// Degree, genus and rank of a vector bundle on a curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurveInvariants {
    pub d: i64,
    pub g: i64,
    pub r: i64,
}

impl CurveInvariants {
    pub fn line_bundle(d: i64, g: i64) -> CurveInvariants {
        CurveInvariants { d, g, r: 1 }
    }

    pub fn chi_o(&self) -> i64 {
        1 - self.g
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyName {
    A1,
    A2,
    A3,
    A4,
    A5,
    F,
    G,
    SmallA,
    SmallB,
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyName::A1 => "A1",
            FamilyName::A2 => "A2",
            FamilyName::A3 => "A3",
            FamilyName::A4 => "A4",
            FamilyName::A5 => "A5",
            FamilyName::F => "f",
            FamilyName::G => "g",
            FamilyName::SmallA => "a",
            FamilyName::SmallB => "b",
        })
    }
}

/// Which variable the closed form was written in before any re-expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    WForm,
    TForm,
    ZExpansion,
}

/// One named universal series.
#[derive(Clone, Debug)]
pub struct SeriesFamily {
    pub name: FamilyName,
    pub rank_parameter: Option<i64>,
    pub form: Form,
    pub series: Series,
}

impl SeriesFamily {
    fn new(name: FamilyName, rank_parameter: Option<i64>, form: Form, series: Series) -> Self {
        SeriesFamily { name, rank_parameter, form, series }
    }
}

// Small polynomial builders shared by the submodules.

fn poly(var: Var, c: &[i64], order: usize) -> Series {
    Series::from_ints(var, c, order)
}

/// `1 + c x`
fn one_plus(var: Var, c: i64, order: usize) -> Series {
    Series::linear(var, 1, c, order)
}

/// Reversion and composition need order >= 1; work there and truncate back.
fn working_order(order: usize) -> usize {
    order.max(1)
}

/// `Res_{x=0} f dx / x^(n+1)` where `f` is expanded in `y` and `x = x(y)` is a
/// nonsingular change of variables: `[y^n] f(y) x'(y) (y / x(y))^(n+1)`.
fn residue_transport(f: &Series, x_of_y: &Series, n: usize) -> Result<Rational> {
    let order = n + 1;
    let x = x_of_y.truncate(order);
    // x(y) = y q(y)
    let q = Series::from_polynomial(x.var(), x.coeffs()[1..].to_vec(), n);
    let ratio = q.recip()?.powi(n as i64 + 1)?;
    let integrand = f.truncate(n).mul(&x.derivative())?.mul(&ratio)?;
    Ok(integrand.coefficient(n)?.clone())
}
