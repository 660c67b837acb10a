//! Conjectural higher-rank surface series for K-trivial surfaces and the
//! predicted series `a_{+-2}`, `b_{+-2}`.

use std::fmt;

use super::{
    one_plus, poly, surface, working_order, CatalogError, FamilyName, Form, Result, SeriesFamily,
};
use crate::rational::{int, pow_i64, ratio, to_pq, Rational};
use crate::series::{Comparison, Series, Var};
use surface::TwoRouteComparison;

/// `-r + (1-r) t`
fn linear_factor(r: i64, order: usize) -> Series {
    poly(Var::T, &[-r, 1 - r], order)
}

/// The rank-`r` series `A1, A2, A3` (rank `s = r + 1`) with both changes of
/// variables, in `t` and re-expanded in `z`.
#[derive(Clone, Debug)]
pub struct Conj1Series {
    pub r: i64,
    /// `A1, A2, A3` as closed forms in `t`.
    pub t_forms: [SeriesFamily; 3],
    /// `A1, A2, A3` expanded in `z`.
    pub z_forms: [SeriesFamily; 3],
    /// `z = -t (1+t)^(-r) / r`.
    pub z_of_t: Series,
    /// `w = t (-r + (1-r) t)^(r^2-1) / (-r (1+t))^(r^2)`.
    pub w_of_t: Series,
    pub t_of_z: Series,
    pub w_of_z: Series,
}

pub fn conjecture1_series(r: i64, order: usize) -> Result<Conj1Series> {
    if r == 0 {
        return Err(CatalogError::ZeroRank);
    }
    let n = working_order(order);
    let mr = int(-r);
    let p = one_plus(Var::T, 1, n);
    let l = linear_factor(r, n);
    let a1 = p
        .powi(-r)?
        .mul(&l.powi(r + 1)?)?
        .scale(&pow_i64(&mr, -r - 1));
    let a2 = p.powi(r - 1)?.mul(&l.powi(-r)?)?.scale(&pow_i64(&mr, r));
    let a3 = one_plus(Var::T, 1 - r, n)
        .recip()?
        .mul(&p.powi((r - 1) * (r - 1))?)?
        .mul(&l.powi(-r * r)?)?
        .scale(&pow_i64(&mr, r * r));
    let z_of_t = Series::identity(Var::T, n)
        .mul(&p.powi(-r)?)?
        .scale(&Rational::new((-1).into(), r.into()));
    let w_of_t = Series::identity(Var::T, n)
        .mul(&l.powi(r * r - 1)?)?
        .div(&p.scale(&mr).powi(r * r)?)?;
    let t_of_z = z_of_t.revert(Var::Z)?;
    let w_of_z = w_of_t.compose(&t_of_z)?;

    let names = [FamilyName::A1, FamilyName::A2, FamilyName::A3];
    let ts = [a1, a2, a3];
    let mut t_forms = Vec::new();
    let mut z_forms = Vec::new();
    for (name, s) in names.into_iter().zip(ts) {
        z_forms.push(SeriesFamily::new(name, Some(r), Form::ZExpansion, s.compose(&t_of_z)?.truncate(order)));
        t_forms.push(SeriesFamily::new(name, Some(r), Form::TForm, s.truncate(order)));
    }
    Ok(Conj1Series {
        r,
        t_forms: t_forms.try_into().expect("three families"),
        z_forms: z_forms.try_into().expect("three families"),
        z_of_t: z_of_t.truncate(order),
        w_of_t: w_of_t.truncate(order),
        t_of_z: t_of_z.truncate(order),
        w_of_z: w_of_z.truncate(order),
    })
}

/// The predicted `a_{+-2}` and `b_{+-2}` in `t`, with `w = t(2+3t)^3/(16(1+t)^4)`.
///
/// `a_{-2}` and `a_2` are built from their own closed forms. `b_{-2}` is built
/// by taking the square root of its square (which has rational coefficients
/// and constant term 1); `b_2` from the closed form with `sqrt(2)` cancelled
/// out of numerator and denominator. The routes are independent.
#[derive(Clone, Debug)]
pub struct Conj2Series {
    pub a_plus: SeriesFamily,
    pub a_minus: SeriesFamily,
    pub b_plus: SeriesFamily,
    pub b_minus: SeriesFamily,
    pub b_squared: Series,
    pub w_of_t: Series,
}

pub fn conjecture2_series(order: usize) -> Result<Conj2Series> {
    let n = working_order(order);
    let p = one_plus(Var::T, 1, n);
    let q = one_plus(Var::T, 3, n);
    let two_3t = poly(Var::T, &[2, 3], n);
    let sp = p.sqrt()?;
    let sq = q.sqrt()?;
    let sum = sp.add(&sq)?;
    let s = sum.scale(&ratio(1, 2));

    // a_{-2} = (2+3t)/sqrt(1+t) / (sqrt(1+t) + sqrt(1+3t))
    let a_minus = two_3t.div(&sp)?.div(&sum)?;
    // a_2 = sqrt(1+t) (sqrt(1+t) + sqrt(1+3t)) / (2+3t)
    let a_plus = sp.mul(&sum)?.div(&two_3t)?;

    // b^2 = (2+3t) sqrt(1+t) (1+3t) / (2 s^5)
    let b_squared = two_3t
        .mul(&sp)?
        .mul(&q)?
        .div(&s.powi(5)?.scale(&int(2)))?;
    let b_minus = b_squared.sqrt()?;
    // b = (1 + 3t/2)^(1/2) (1+t)^(1/4) (1+3t)^(1/2) s^(-5/2)
    let b_plus = Series::from_polynomial(Var::T, vec![int(1), ratio(3, 2)], n)
        .sqrt()?
        .mul(&p.pow(&ratio(1, 4))?)?
        .mul(&sq)?
        .mul(&s.pow(&ratio(-5, 2))?)?;

    let w_of_t = Series::identity(Var::T, n)
        .mul(&two_3t.powi(3)?)?
        .div(&p.powi(4)?.scale(&int(16)))?;

    let fam = |name, r, s: Series| SeriesFamily::new(name, Some(r), Form::TForm, s.truncate(order));
    Ok(Conj2Series {
        a_plus: fam(FamilyName::SmallA, 2, a_plus),
        a_minus: fam(FamilyName::SmallA, -2, a_minus),
        b_plus: fam(FamilyName::SmallB, 2, b_plus),
        b_minus: fam(FamilyName::SmallB, -2, b_minus),
        b_squared: b_squared.truncate(order),
        w_of_t: w_of_t.truncate(order),
    })
}

impl Conj2Series {
    /// Re-expands a family in `w` by reverting `w(t)`.
    pub fn in_w(&self, family: &SeriesFamily) -> Result<Series> {
        let n = working_order(self.w_of_t.order());
        let t_of_w = self.w_of_t.truncate(n).revert(Var::W)?;
        Ok(family.series.compose(&t_of_w)?.truncate(self.w_of_t.order()))
    }

    pub fn relations(&self) -> Result<Conj2Relations> {
        let order = self.w_of_t.order();
        let n = working_order(order);
        let product = self.a_plus.series.mul(&self.a_minus.series)?;
        let a_product = TwoRouteComparison::new("a-product", product, Series::one(Var::T, order))?;
        let b_equal = TwoRouteComparison::new("b-equal", self.b_plus.series.clone(), self.b_minus.series.clone())?;
        let b_squared_back = TwoRouteComparison::new("b-squared", self.b_minus.series.powi(2)?, self.b_squared.clone())?;

        let minus = conjecture1_series(-2, n)?;
        let plus = conjecture1_series(2, n)?;
        let w_rank_minus2 = TwoRouteComparison::new("w-rank-minus2", minus.w_of_t.truncate(order), self.w_of_t.clone())?;
        // At r = 2 the same w is reached through the reparametrisation
        // t -> -t/(1+2t) of the conjectured change of variables.
        let reparam = Series::identity(Var::T, n).neg().div(&one_plus(Var::T, 2, n))?;
        let w_reparam = conjecture2_series(n)?.w_of_t.compose(&reparam)?;
        let w_rank_plus2 = TwoRouteComparison::new("w-rank-plus2", plus.w_of_t.truncate(order), w_reparam.truncate(order))?;
        Ok(Conj2Relations { a_product, b_equal, b_squared_back, w_rank_minus2, w_rank_plus2 })
    }
}

#[derive(Clone, Debug)]
pub struct Conj2Relations {
    /// `a_2 a_{-2} = 1`.
    pub a_product: TwoRouteComparison,
    /// `b_2 = b_{-2}`.
    pub b_equal: TwoRouteComparison,
    /// `(b_{-2})^2` against the square it was extracted from.
    pub b_squared_back: TwoRouteComparison,
    /// Rank -2 change of variables against `t(2+3t)^3/(16(1+t)^4)`.
    pub w_rank_minus2: TwoRouteComparison,
    /// Rank 2 change of variables against the same form after `t -> -t/(1+2t)`.
    pub w_rank_plus2: TwoRouteComparison,
}

impl Conj2Relations {
    pub fn all_agree(&self) -> bool {
        [&self.a_product, &self.b_equal, &self.b_squared_back, &self.w_rank_minus2, &self.w_rank_plus2]
            .iter()
            .all(|c| c.agrees())
    }
}

/// One candidate identity compared by [`conj1_lehn_probe`].
#[derive(Clone, Debug)]
pub struct ProbeLine {
    pub label: &'static str,
    pub lhs: Series,
    pub rhs: Series,
    pub comparison: Comparison,
}

/// Reports, without asserting, how the rank `-2` series relate to Lehn's
/// rank-one series.
#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub order: usize,
    pub lines: Vec<ProbeLine>,
}

impl fmt::Display for ProbeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rank -2 probe through order {}", self.order)?;
        for line in &self.lines {
            match line.comparison.first_mismatch {
                None => writeln!(f, "  {}: agree", line.label)?,
                Some(k) => writeln!(
                    f,
                    "  {}: first difference at z^{k}: {} vs {}",
                    line.label,
                    to_pq(&line.lhs.coeffs()[k]),
                    to_pq(&line.rhs.coeffs()[k])
                )?,
            }
        }
        Ok(())
    }
}

pub fn conj1_lehn_probe(order: usize) -> Result<ProbeReport> {
    let c1 = conjecture1_series(-2, order)?;
    let lehn = surface::universal_series_t(working_order(order))?;
    let t_of_z = lehn.z_of_t.revert(Var::Z)?;
    let lehn_a1 = lehn.families[0].series.compose(&t_of_z)?.truncate(order);
    let lehn_a2 = lehn.families[1].series.compose(&t_of_z)?.truncate(order);
    let [a1, a2, a3] = &c1.z_forms;
    let lhs1 = a1.series.mul(&a2.series.sqrt()?)?;
    let lhs2 = a2.series.mul(&a3.series.sqrt()?)?;
    let mut lines = Vec::new();
    for (label, lhs, rhs) in [
        ("A1(-2) * A2(-2)^(1/2) vs Lehn A1", lhs1, lehn_a1),
        ("A2(-2) * A3(-2)^(1/2) vs Lehn A2", lhs2, lehn_a2),
    ] {
        let comparison = lhs.compare(&rhs)?;
        lines.push(ProbeLine { label, lhs, rhs, comparison });
    }
    Ok(ProbeReport { order, lines })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_is_trivial() {
        let c = conjecture1_series(1, 12).unwrap();
        let [a1, a2, a3] = &c.z_forms;
        assert_eq!(a1.series, poly(Var::Z, &[1, 1], 12));
        assert_eq!(a2.series, Series::one(Var::Z, 12));
        assert_eq!(a3.series, Series::one(Var::Z, 12));
    }

    #[test]
    fn constant_terms_are_one() {
        for r in [-3, -2, -1, 1, 2, 3, 4] {
            let c = conjecture1_series(r, 6).unwrap();
            for f in c.t_forms.iter().chain(&c.z_forms) {
                assert_eq!(f.series.constant_term(), &int(1), "r={r} {}", f.name);
            }
            assert_eq!(c.w_of_t.constant_term(), &int(0));
        }
        let c2 = conjecture2_series(6).unwrap();
        for f in [&c2.a_plus, &c2.a_minus, &c2.b_plus, &c2.b_minus] {
            assert_eq!(f.series.constant_term(), &int(1));
        }
    }

    #[test]
    fn rank_zero_is_rejected() {
        assert!(matches!(conjecture1_series(0, 4), Err(CatalogError::ZeroRank)));
    }

    #[test]
    fn rank_minus_two_change_of_variables() {
        let c = conjecture1_series(-2, 8).unwrap();
        let expected = Series::identity(Var::T, 8)
            .mul(&poly(Var::T, &[2, 3], 8).powi(3).unwrap())
            .unwrap()
            .div(&one_plus(Var::T, 1, 8).powi(4).unwrap().scale(&int(16)))
            .unwrap();
        assert_eq!(c.w_of_t, expected);
    }

    #[test]
    fn conjecture2_relations_hold() {
        let rel = conjecture2_series(12).unwrap().relations().unwrap();
        assert!(rel.all_agree(), "{rel:?}");
        assert_eq!(rel.a_product.comparison.order, 12);
    }

    #[test]
    fn w_expansions_exist() {
        let c2 = conjecture2_series(6).unwrap();
        let a = c2.in_w(&c2.a_minus).unwrap();
        assert_eq!(a.var(), Var::W);
        assert_eq!(a.constant_term(), &int(1));
    }

    #[test]
    fn probe_is_deterministic() {
        let a = conj1_lehn_probe(10).unwrap().to_string();
        let b = conj1_lehn_probe(10).unwrap().to_string();
        assert_eq!(a, b);
        let p = conj1_lehn_probe(10).unwrap();
        for l in &p.lines {
            assert_eq!(l.lhs.constant_term(), &int(1));
            assert_eq!(l.rhs.constant_term(), &int(1));
        }
    }
}
