//! Segre series of tautological bundles on symmetric products of curves, in
//! rank one (closed form in `w`) and in higher rank (Lemma 3 and the P^1
//! computation behind Theorem 2).

use super::{one_plus, poly, working_order, CatalogError, CurveInvariants, Result};
use crate::chern::segre_integral_p1;
use crate::rational::{binom, int, Rational};
use super::surface::TwoRouteComparison;
use crate::series::{Series, Var};

/// `(1-w)^(d + 2 chi) / (1-2w)^chi` under `z = w(1-w)`, expanded in `z`.
pub fn curve_segre_rhs(ci: &CurveInvariants, order: usize) -> Result<Series> {
    if ci.r != 1 {
        return Err(CatalogError::UnsupportedRank(ci.r));
    }
    let n = working_order(order);
    let chi = ci.chi_o();
    let f = one_plus(Var::W, -1, n)
        .powi(ci.d + 2 * chi)?
        .div(&one_plus(Var::W, -2, n).powi(chi)?)?;
    let w_of_z = poly(Var::W, &[0, 1, -1], n).revert(Var::Z)?;
    Ok(f.compose(&w_of_z)?.truncate(order))
}

/// `t(z)` for `z = sign * t (1+t)^r`.
fn t_of_z(r: i64, sign: i64, order: usize) -> Result<Series> {
    let z_of_t = Series::identity(Var::T, order)
        .mul(&one_plus(Var::T, 1, order).powi(r)?)?
        .scale(&int(sign));
    Ok(z_of_t.revert(Var::Z)?)
}

/// `(1+t)^(d+r+1) / (1 + (r+1) t)` under `z = t(1+t)^r`, expanded in `z`.
pub fn lemma3_series(r: i64, d: i64, order: usize) -> Result<Series> {
    let n = working_order(order);
    let f = one_plus(Var::T, 1, n)
        .powi(d + r + 1)?
        .div(&one_plus(Var::T, r + 1, n))?;
    Ok(f.compose(&t_of_z(r, 1, n)?)?.truncate(order))
}

/// `A1^d A2` with `A1 = 1+t`, `A2 = (1+t)^(r+1)/(1+(r+1)t)` under
/// `z = -t(1+t)^r`, expanded in `z`.
pub fn theorem2_series(r: i64, d: i64, order: usize) -> Result<Series> {
    let n = working_order(order);
    let t = t_of_z(r, -1, n)?;
    let a1 = one_plus(Var::T, 1, n).compose(&t)?;
    let a2 = one_plus(Var::T, 1, n)
        .powi(r + 1)?
        .div(&one_plus(Var::T, r + 1, n))?
        .compose(&t)?;
    Ok(a1.powi(d)?.mul(&a2)?.truncate(order))
}

/// `sum_n z^n int_{P^n} s_n(V^[n])` for `V = O^(r-1) + O(d)` on `P^1`, each
/// coefficient from the cohomological pipeline.
pub fn p1_segre_series(r: i64, d: i64, order: usize) -> Series {
    let mut c = vec![Rational::from_integer(1.into())];
    c.extend((1..=order).map(|n| segre_integral_p1(d, r, n)));
    Series::from_polynomial(Var::Z, c, order)
}

fn binomial_series(r: i64, d: i64, alternating: bool, order: usize) -> Series {
    let c = (0..=order)
        .map(|n| {
            let b = binom(d - r * n as i64 + r, n as u64);
            if alternating && n % 2 == 1 {
                -b
            } else {
                b
            }
        })
        .collect();
    Series::from_polynomial(Var::Z, c, order)
}

/// Layered verification of the rank-r curve formulas.
#[derive(Clone, Debug)]
pub struct HigherRankReport {
    pub r: i64,
    pub d: i64,
    /// Lemma 3 against `sum binom(d-rn+r, n) z^n`.
    pub lemma3: TwoRouteComparison,
    /// `A1^d A2` against `sum (-1)^n binom(d-rn+r, n) z^n`.
    pub theorem2: TwoRouteComparison,
    /// Lemma 3 series with `z -> -z` against the Theorem 2 series.
    pub sign_transport: TwoRouteComparison,
    /// Cohomological P^1 integrals against the Theorem 2 series (r >= 1 only).
    pub p1_pipeline: Option<TwoRouteComparison>,
}

impl HigherRankReport {
    pub fn all_agree(&self) -> bool {
        self.lemma3.agrees()
            && self.theorem2.agrees()
            && self.sign_transport.agrees()
            && self.p1_pipeline.as_ref().is_none_or(TwoRouteComparison::agrees)
    }
}

pub fn higher_rank_curve_check(r: i64, d: i64, order: usize) -> Result<HigherRankReport> {
    let lemma = lemma3_series(r, d, order)?;
    let thm = theorem2_series(r, d, order)?;
    let lemma3 = TwoRouteComparison::new("lemma3", lemma.clone(), binomial_series(r, d, false, order))?;
    let theorem2 = TwoRouteComparison::new("theorem2", thm.clone(), binomial_series(r, d, true, order))?;
    let sign_transport = TwoRouteComparison::new("sign-transport", lemma.rescale_var(&int(-1)), thm.clone())?;
    let p1_pipeline = if r >= 1 {
        Some(TwoRouteComparison::new("p1-pipeline", p1_segre_series(r, d, order), thm)?)
    } else {
        None
    };
    Ok(HigherRankReport { r, d, lemma3, theorem2, sign_transport, p1_pipeline })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_rhs_examples() {
        let s = curve_segre_rhs(&CurveInvariants::line_bundle(0, 0), 3).unwrap();
        assert_eq!(s, poly(Var::Z, &[1, 0, 1, 4], 3));
        for d in -3..4 {
            for g in 0..3 {
                let s = curve_segre_rhs(&CurveInvariants::line_bundle(d, g), 0).unwrap();
                assert_eq!(s, Series::one(Var::Z, 0));
            }
        }
        let s = curve_segre_rhs(&CurveInvariants::line_bundle(2, 0), 2).unwrap();
        assert_eq!(s.coeffs()[1], int(-2));
        assert_eq!(s.coeffs()[1], segre_integral_p1(2, 1, 1));
        let bad = CurveInvariants { d: 0, g: 0, r: 2 };
        assert_eq!(curve_segre_rhs(&bad, 3), Err(CatalogError::UnsupportedRank(2)));
    }

    #[test]
    fn lemma3_small_case() {
        // (1+t)^4/(1+2t) under z = t(1+t)
        let s = lemma3_series(1, 2, 4).unwrap();
        assert_eq!(s.coeffs()[0], int(1));
        assert_eq!(s.coeffs()[1], int(2));
        assert_eq!(s.coeffs()[2], int(0));
    }

    #[test]
    fn rank_one_reduces_to_the_curve_formula() {
        // A1 = 1+t, A2 = (1+t)^2/(1+2t) under z = -t(1+t); chi(O_P1) = 1
        for d in -4..8 {
            let thm = theorem2_series(1, d, 10).unwrap();
            let curve = curve_segre_rhs(&CurveInvariants::line_bundle(d, 0), 10).unwrap();
            assert_eq!(thm, curve, "d={d}");
        }
    }

    #[test]
    fn higher_rank_report() {
        for r in 1..4 {
            for d in -3..6 {
                let rep = higher_rank_curve_check(r, d, 8).unwrap();
                assert!(rep.all_agree(), "{rep:?}");
            }
        }
        let rep = higher_rank_curve_check(-2, 3, 8).unwrap();
        assert!(rep.p1_pipeline.is_none());
        assert!(rep.all_agree());
    }
}
