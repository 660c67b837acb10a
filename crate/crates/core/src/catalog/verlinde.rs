//! The K-trivial Verlinde series `f_r = (1+t)^(r^2)/(1+r^2 t)`, `g_r = 1+t`
//! under `z = t(1+t)^(r^2-1)`.

use super::{one_plus, working_order, FamilyName, Form, Result, SeriesFamily};
use crate::rational::{binom, Rational};
use crate::series::{Series, Var};

#[derive(Clone, Debug)]
pub struct VerlindeSeries {
    pub r: i64,
    pub f: SeriesFamily,
    pub g: SeriesFamily,
    pub z_of_t: Series,
}

pub fn verlinde_series(r: i64, order: usize) -> Result<VerlindeSeries> {
    let n = working_order(order);
    let r2 = r * r;
    let p = one_plus(Var::T, 1, n);
    let z_of_t = Series::identity(Var::T, n).mul(&p.powi(r2 - 1)?)?;
    let t_of_z = z_of_t.revert(Var::Z)?;
    let f = p.powi(r2)?.div(&one_plus(Var::T, r2, n))?.compose(&t_of_z)?;
    let g = p.compose(&t_of_z)?;
    Ok(VerlindeSeries {
        r,
        f: SeriesFamily::new(FamilyName::F, Some(r), Form::ZExpansion, f.truncate(order)),
        g: SeriesFamily::new(FamilyName::G, Some(r), Form::ZExpansion, g.truncate(order)),
        z_of_t: z_of_t.truncate(order),
    })
}

impl VerlindeSeries {
    /// `[z^n] f_r g_r^chi` on a K3 surface (`chi(O)/2 = 1`).
    pub fn k3_coefficient(&self, n: usize, chi_h: i64) -> Result<Rational> {
        let s = self.f.series.mul(&self.g.series.powi(chi_h)?)?;
        Ok(s.coefficient(n)?.clone())
    }
}

/// `[z^n] f_r g_r^chi` against `binom(chi - (r^2-1)(n-1), n)`.
pub fn verlinde_k3_check(r: i64, n: usize, chi_h: i64) -> Result<(Rational, Rational)> {
    let v = verlinde_series(r, n)?;
    let expected = binom(chi_h - (r * r - 1) * (n as i64 - 1), n as u64);
    Ok((v.k3_coefficient(n, chi_h)?, expected))
}
