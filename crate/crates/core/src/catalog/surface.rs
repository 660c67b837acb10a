//! Lehn's surface series: the change of variables, the closed form, the four
//! universal series in both their w- and t-forms, blowup evaluations and the
//! residue chain behind the vanishing range.

use num_bigint::BigInt;

use super::{
    one_plus, poly, residue_transport, working_order, CatalogError, FamilyName, Form, Result,
    SeriesFamily, SurfaceInvariants,
};
use crate::rational::{binom, binom_general, int, pow_i64, ratio, Rational};
use crate::series::{Comparison, Series, Var};

/// `1 - 6w + 6w^2`
fn lehn_quadratic(order: usize) -> Series {
    poly(Var::W, &[1, -6, 6], order)
}

/// `z = w(1-w)(1-2w)^4 / (1-6w+6w^2)^3`, as a series in `w`.
pub fn lehn_z_of_w(order: usize) -> Series {
    let num = Series::identity(Var::W, order)
        .mul(&one_plus(Var::W, -1, order))
        .and_then(|s| s.mul(&one_plus(Var::W, -2, order).powi(4)?))
        .expect("same variable");
    num.div(&lehn_quadratic(order).powi(3).expect("integer power"))
        .expect("unit denominator")
}

/// `w(z)`, the compositional inverse of [`lehn_z_of_w`].
pub fn lehn_w_of_z(order: usize) -> Series {
    let n = working_order(order);
    lehn_z_of_w(n).revert(Var::Z).expect("linear term is 1").truncate(order)
}

/// `(1-w)^a (1-2w)^b / (1-6w+6w^2)^c` in `w`.
fn lehn_integrand(a: i64, b: i64, c: i64, order: usize) -> Result<Series> {
    let f = one_plus(Var::W, -1, order)
        .powi(a)?
        .mul(&one_plus(Var::W, -2, order).powi(b)?)?;
    Ok(f.div(&lehn_quadratic(order).powi(c)?)?)
}

/// Lehn's closed form for `sum_n z^n int s_2n(H^[n])`, expanded in `z`.
pub fn lehn_rhs(si: &SurfaceInvariants, order: usize) -> Result<Series> {
    let e = si.lehn_exponents()?;
    let n = working_order(order);
    let f = lehn_integrand(e.a, e.b, e.c, n)?;
    Ok(f.compose(&lehn_w_of_z(n))?.truncate(order))
}

/// The four universal series in their w-forms (as series in `w`).
fn universal_w_forms(order: usize) -> Result<[Series; 4]> {
    let q = lehn_quadratic(order);
    let one_m_w = one_plus(Var::W, -1, order);
    let one_m_2w = one_plus(Var::W, -2, order);
    let q_half = q.sqrt()?;
    let a1 = one_m_2w.div(&q_half)?;
    let a2 = one_m_2w.powi(3)?.div(&q)?;
    let a3 = one_m_w.mul(&q_half)?.div(&one_m_2w.powi(2)?)?;
    let a4 = one_m_2w.div(&one_m_w.powi(2)?)?;
    Ok([a1, a2, a3, a4])
}

const UNIVERSAL: [FamilyName; 4] = [FamilyName::A1, FamilyName::A2, FamilyName::A3, FamilyName::A4];

/// `A1 .. A4` from their w-forms, re-expanded in `z` through Lehn's change of
/// variables.
pub fn universal_series_w(order: usize) -> Result<[SeriesFamily; 4]> {
    let n = working_order(order);
    let w_of_z = lehn_w_of_z(n);
    let forms = universal_w_forms(n)?;
    let mut out = Vec::with_capacity(4);
    for (name, f) in UNIVERSAL.into_iter().zip(forms) {
        let s = f.compose(&w_of_z)?.truncate(order);
        out.push(SeriesFamily::new(name, None, Form::WForm, s));
    }
    Ok(out.try_into().expect("four families"))
}

/// The t-forms of `A1 .. A4` together with the change of variables
/// `z = t(1+t)^2/2`, `w = (1 - sqrt((1+t)/(1+3t)))/2`.
#[derive(Clone, Debug)]
pub struct UniversalT {
    pub families: [SeriesFamily; 4],
    pub z_of_t: Series,
    pub w_of_t: Series,
}

pub fn universal_series_t(order: usize) -> Result<UniversalT> {
    let n = order;
    let p = one_plus(Var::T, 1, n);
    let q = one_plus(Var::T, 3, n);
    let sp = p.sqrt()?;
    let sq = q.sqrt()?;
    let sum = sp.add(&sq)?;
    let a1 = sp.clone();
    let a2 = p.pow(&ratio(3, 2))?.mul(&q.pow(&ratio(-1, 2))?)?;
    let a3 = sum.div(&p.scale(&int(2)))?;
    let a4 = sp.mul(&sq)?.scale(&int(4)).div(&sum.powi(2)?)?;
    let z_of_t = Series::identity(Var::T, n).mul(&p.powi(2)?)?.scale(&ratio(1, 2));
    let w_of_t = Series::one(Var::T, n)
        .sub(&p.div(&q)?.sqrt()?)?
        .scale(&ratio(1, 2));
    let mut forms = [a1, a2, a3, a4].into_iter();
    let families = UNIVERSAL.map(|name| {
        SeriesFamily::new(name, None, Form::TForm, forms.next().expect("four forms"))
    });
    Ok(UniversalT { families, z_of_t, w_of_t })
}

/// How two constructions of the same series compare.
#[derive(Clone, Debug)]
pub struct TwoRouteComparison {
    pub label: String,
    pub comparison: Comparison,
    pub lhs: Series,
    pub rhs: Series,
}

impl TwoRouteComparison {
    pub fn new(label: impl Into<String>, lhs: Series, rhs: Series) -> Result<Self> {
        let comparison = lhs.compare(&rhs)?;
        Ok(TwoRouteComparison { label: label.into(), comparison, lhs, rhs })
    }

    pub fn agrees(&self) -> bool {
        self.comparison.agrees()
    }
}

/// Compares the t-forms against the w-forms along two routes: in `t` (w-form
/// composed with `w(t)`) and in `z` (t-form composed with `t(z)`), plus the
/// consistency `z(w(t)) = z(t)`.
pub fn t_vs_w_check(order: usize) -> Result<Vec<TwoRouteComparison>> {
    let n = working_order(order);
    let ut = universal_series_t(n)?;
    let w_forms = universal_w_forms(n)?;
    let uw = universal_series_w(n)?;
    let t_of_z = ut.z_of_t.revert(Var::Z)?;
    let mut out = Vec::new();
    out.push(TwoRouteComparison::new(
        "z(w(t)) = z(t)",
        lehn_z_of_w(n).compose(&ut.w_of_t)?.truncate(order),
        ut.z_of_t.truncate(order),
    )?);
    for i in 0..4 {
        let name = ut.families[i].name;
        out.push(TwoRouteComparison::new(
            format!("{name}: w-form(w(t)) = t-form"),
            w_forms[i].compose(&ut.w_of_t)?.truncate(order),
            ut.families[i].series.truncate(order),
        )?);
        out.push(TwoRouteComparison::new(
            format!("{name}: t-form(t(z)) = w-form(w(z))"),
            ut.families[i].series.compose(&t_of_z)?.truncate(order),
            uw[i].series.truncate(order),
        )?);
    }
    Ok(out)
}

/// Universal series re-expanded in `z`, cached for grid evaluation of the
/// splitting `A1^{H^2} A2^{chi(O)} A3^{H.K} A4^{K^2}`.
#[derive(Clone, Debug)]
pub struct UniversalSeries {
    order: usize,
    families: [SeriesFamily; 4],
}

impl UniversalSeries {
    pub fn new(order: usize) -> Result<UniversalSeries> {
        Ok(UniversalSeries { order, families: universal_series_w(order)? })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn families(&self) -> &[SeriesFamily; 4] {
        &self.families
    }

    /// `A1^{H^2} A2^{chi(O)} A3^{H.K} A4^{K^2}`; needs no parity condition.
    pub fn product(&self, si: &SurfaceInvariants) -> Result<Series> {
        let exps = [si.h2, si.chi_o, si.hk, si.k2];
        let mut acc = Series::one(Var::Z, self.order);
        for (fam, e) in self.families.iter().zip(exps) {
            if e != 0 {
                acc = acc.mul(&fam.series.powi(e)?)?;
            }
        }
        Ok(acc)
    }

    /// `[z^n]` of the product for a blowup model at `chi(H) = 3n - 1`,
    /// alongside the model's binomial prediction.
    pub fn blowup(&self, n: usize, k: i64, model: BlowupModel) -> Result<(Rational, Rational)> {
        let si = model.invariants(n, k)?;
        let coeff = self.product(&si)?.coefficient(n)?.clone();
        Ok((coeff, model.expected(n, k)))
    }

    /// `[z^n] A1^{H^2} A2^2` against `2^n binom(H^2/2 + 2 - 2n, n)`.
    pub fn k3(&self, n: usize, h2: i64) -> Result<(Rational, Rational)> {
        let si = SurfaceInvariants::new(h2, 2, 0, 0);
        si.validate()?;
        let coeff = self.product(&si)?.coefficient(n)?.clone();
        let expected = pow_i64(&int(2), n as i64) * binom(h2 / 2 + 2 - 2 * n as i64, n as u64);
        Ok((coeff, expected))
    }
}

/// Blowups of K-trivial surfaces carrying closed binomial evaluations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlowupModel {
    /// K3 blown up at one point: `chi(O) = 2`, `K^2 = -1`.
    K3Blowup,
    /// Enriques blown up at two points: `chi(O) = 1`, `K^2 = -2`.
    Enriques2,
    /// Abelian or bielliptic blown up at three points: `chi(O) = 0`, `K^2 = -3`.
    Abelian3,
}

impl BlowupModel {
    pub fn chi_o(self) -> i64 {
        match self {
            BlowupModel::K3Blowup => 2,
            BlowupModel::Enriques2 => 1,
            BlowupModel::Abelian3 => 0,
        }
    }

    pub fn k2(self) -> i64 {
        -(3 - self.chi_o())
    }

    /// Offset `m` in the prediction `binom(H.K - n + m, n)`.
    pub fn binomial_offset(self) -> i64 {
        match self {
            BlowupModel::K3Blowup => 1,
            BlowupModel::Enriques2 => 3,
            BlowupModel::Abelian3 => 5,
        }
    }

    /// Invariants with `H.K = k` and `H^2` solved from `chi(H) = 3n - 1`.
    pub fn invariants(self, n: usize, k: i64) -> Result<SurfaceInvariants> {
        let target = 3 * n as i64 - 1;
        // chi(H) = chi(O) + (H^2 - k)/2
        let h2 = 2 * (target - self.chi_o()) + k;
        let si = SurfaceInvariants::new(h2, self.chi_o(), k, self.k2());
        if si.chi_h()? != target {
            return Err(CatalogError::Parity(h2 - k));
        }
        Ok(si)
    }

    pub fn expected(self, n: usize, k: i64) -> Rational {
        binom(k - n as i64 + self.binomial_offset(), n as u64)
    }

    pub fn name(self) -> &'static str {
        match self {
            BlowupModel::K3Blowup => "K3blowup",
            BlowupModel::Enriques2 => "Enriques2",
            BlowupModel::Abelian3 => "Abelian3",
        }
    }
}

pub fn blowup_coefficient_check(n: usize, k: i64, model: BlowupModel) -> Result<(Rational, Rational)> {
    UniversalSeries::new(n)?.blowup(n, k, model)
}

pub fn k3_closed_form_check(n: usize, h2: i64) -> Result<(Rational, Rational)> {
    UniversalSeries::new(n)?.k3(n, h2)
}

/// The residue computation of `[z^n]` at `chi(H) = 3n - 1` on the K3 blowup,
/// carried out along independent routes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueChain {
    /// `[z^n]` of the integrand composed with `w(z)`.
    pub direct: Rational,
    /// `Res_w` of the integrand transported by `dz` (no simplification).
    pub w_transport: Rational,
    /// `[w^n] (1-w)^{k-n+1} (1-2w)^{-k+2n-2}`.
    pub w_form: Rational,
    /// `Res_u` after `w = u/(1+2u)`, transported generically.
    pub u_form: Rational,
    /// `binom(k-n+1, n)`.
    pub binomial: Rational,
}

pub fn residue_chain_check(n: usize, k: i64) -> Result<ResidueChain> {
    let ni = n as i64;
    let ord = n + 1;
    let (a, b, c) = (k + 2, -k + 6 * ni - 1, 3 * ni - 1);

    let integrand = lehn_integrand(a, b, c, ord)?;
    let direct = integrand.compose(&lehn_w_of_z(ord))?.coefficient(n)?.clone();
    let w_transport = residue_transport(&integrand, &lehn_z_of_w(ord), n)?;

    let w_simplified = one_plus(Var::W, -1, ord)
        .powi(k - ni + 1)?
        .mul(&one_plus(Var::W, -2, ord).powi(-k + 2 * ni - 2)?)?;
    let w_form = w_simplified.coefficient(n)?.clone();

    // w = u/(1+2u)
    let w_of_u = Series::identity(Var::U, ord).div(&one_plus(Var::U, 2, ord))?;
    let u_form = residue_transport(&w_simplified.compose(&w_of_u)?, &w_of_u, n)?;

    let binomial = binom_general(&BigInt::from(k - ni + 1), n as u64);

    let chain = ResidueChain { direct, w_transport, w_form, u_form, binomial };
    for (what, v) in [
        ("w transport", &chain.w_transport),
        ("w form", &chain.w_form),
        ("u form", &chain.u_form),
        ("binomial", &chain.binomial),
    ] {
        if v != &chain.direct {
            return Err(CatalogError::Mismatch { what, lhs: chain.direct.clone(), rhs: v.clone() });
        }
    }
    Ok(chain)
}
