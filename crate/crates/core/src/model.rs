//! Exact closed forms for the coverage probabilities `p(m, ℓ, d)`.
//!
//! Everything here is exact rational arithmetic. Cells and the query cube are
//! normalized to unit side (`b = s = 1`); a cell containing the origin is
//! `[x - 1/2, x + 1/2]` per axis with `x` uniform on `[-1/2, 1/2]`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Result};

pub type Rational = num_rational::BigRational;

/// Largest table count a [`ModelQuery`] accepts.
pub const MAX_TABLES: u32 = 64;

/// Identifies one coverage probability `p(m, ℓ, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModelQuery {
    pub m: u32,
    pub ell: u32,
    pub d: u32,
}

impl ModelQuery {
    pub fn new(m: u32, ell: u32, d: u32) -> Result<Self> {
        if d == 0 {
            return domain("dimension d must be at least 1");
        }
        if ell == 0 || ell > m {
            return domain(format!("need 1 <= ell <= m, got ell={ell}, m={m}"));
        }
        if m > MAX_TABLES {
            return domain(format!("m={m} exceeds the limit of {MAX_TABLES}"));
        }
        Ok(ModelQuery { m, ell, d })
    }

    /// Expected covered volume, `p_at_least(m, ℓ, d)`.
    pub fn probability(&self) -> Rational {
        at_least_unchecked(self.m, self.ell, self.d)
    }
}

/// Cell and query side lengths. The model is only evaluated at `b = s = 1`;
/// physical grids rescale to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleParams {
    pub b: f64,
    pub s: f64,
}

impl ScaleParams {
    pub const UNIT: ScaleParams = ScaleParams { b: 1.0, s: 1.0 };

    /// Scale of a grid with `g` cells per axis on the unit torus, queried with
    /// a cube of the same side.
    pub fn for_grid(g: u32) -> Self {
        let b = 1.0 / g as f64;
        ScaleParams { b, s: b }
    }

    pub fn is_model_normalizable(&self) -> bool {
        self.b > 0.0 && self.b == self.s
    }
}

/// Exact binomial coefficient, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

fn half_pow(exp: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << exp as usize)
}

fn q_closed_form(ell: u32) -> Rational {
    // (2^{ℓ+2} - 2) / ((ℓ+1) 2^{ℓ+1})
    let num = (BigInt::one() << (ell as usize + 2)) - 2;
    let den = BigInt::from(ell + 1) << (ell as usize + 1);
    Rational::new(num, den)
}

/// Expected length of `[-1/2, 1/2]` covered by the intersection of `ℓ`
/// independent unit cells that each contain the origin.
pub fn per_dim_coverage_q(ell: u32) -> Result<Rational> {
    if ell == 0 {
        return domain("ell must be at least 1");
    }
    Ok(q_closed_form(ell))
}

/// Integral of `1 - max(positives) + min(negatives)` over one orthant with
/// `pos` offsets in `[0, 1/2]` and `neg` offsets in `[-1/2, 0]`. An empty max
/// or min contributes 0.
///
/// The maximum of `a` uniforms on `[0, 1/2]` has mean `a / (2 (a + 1))`, and the
/// minimum of `b` uniforms on `[-1/2, 0]` has mean `-b / (2 (b + 1))`. The
/// orthant has volume `2^-(a+b)`.
pub fn orthant_integral(pos: u32, neg: u32) -> Rational {
    let mean_max = ratio(pos as i64, 2 * (pos as i64 + 1));
    let mean_min = -ratio(neg as i64, 2 * (neg as i64 + 1));
    (Rational::one() - mean_max + mean_min) * half_pow(pos + neg)
}

/// Sum over all orthants of the per-orthant covered length, grouping the
/// `C(ℓ, i)` orthants that have `i` offsets below zero.
pub fn quadrant_sum_p1(ell: u32) -> Result<Rational> {
    if ell == 0 {
        return domain("ell must be at least 1");
    }
    let total = (0..=ell).fold(Rational::zero(), |acc, neg| {
        acc + Rational::from(binomial(ell as u64, neg as u64)) * orthant_integral(ell - neg, neg)
    });
    Ok(total)
}

/// Expected volume of the query cube covered by the intersection of `ℓ`
/// cells: `q(ℓ)^d`.
pub fn p_intersection(ell: u32, d: u32) -> Result<Rational> {
    if d == 0 {
        return domain("dimension d must be at least 1");
    }
    Ok(pow(&per_dim_coverage_q(ell)?, d))
}

/// Expected volume of the query cube covered by the union of `m` cells.
pub fn p_union(m: u32, d: u32) -> Result<Rational> {
    p_at_least(m, 1, d)
}

/// `p_union` with the last inclusion–exclusion term taken as printed in the
/// source derivation, `C(m, m) · p(1, m-1, d)` instead of `p(1, m, d)`.
///
/// Kept only so reports and tests can show how far it lands from the Monte
/// Carlo estimate. Not a probability for `m >= 2`.
pub fn p_union_printed_last_term(m: u32, d: u32) -> Result<Rational> {
    ModelQuery::new(m, 1, d)?;
    let mut total = Rational::zero();
    for j in 1..=m {
        let term_ell = if j == m && m > 1 { m - 1 } else { j };
        let term = Rational::from(binomial(m as u64, j as u64)) * pow(&q_closed_form(term_ell), d);
        if j % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

/// Expected volume of the query cube covered by at least `ℓ` of `m` cells:
///
/// `Σ_{j=ℓ..m} (-1)^{j-ℓ} C(j-1, ℓ-1) C(m, j) q(j)^d`.
pub fn p_at_least(m: u32, ell: u32, d: u32) -> Result<Rational> {
    Ok(ModelQuery::new(m, ell, d)?.probability())
}

fn at_least_unchecked(m: u32, ell: u32, d: u32) -> Rational {
    let mut total = Rational::zero();
    for j in ell..=m {
        let coeff = binomial(j as u64 - 1, ell as u64 - 1) * binomial(m as u64, j as u64);
        let term = Rational::from(coeff) * pow(&q_closed_form(j), d);
        if (j - ell).is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Renders `num/den` (always with a denominator, e.g. `1/1`).
pub fn render(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den` or an integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<BigInt>().ok()?,
            d.trim().parse::<BigInt>().ok()?,
        ),
        None => (s.trim().parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        ratio(n, d)
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(7, 0), BigInt::one());
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(binomial(4, 5), BigInt::zero());
        assert_eq!(binomial(64, 32).to_string(), "1832624140942590534");
    }

    #[test]
    fn per_dimension_factor() {
        assert_eq!(per_dim_coverage_q(1).unwrap(), r(3, 4));
        assert_eq!(per_dim_coverage_q(2).unwrap(), r(7, 12));
        assert_eq!(per_dim_coverage_q(3).unwrap(), r(15, 32));
        assert_eq!(per_dim_coverage_q(4).unwrap(), r(31, 80));
        assert!(per_dim_coverage_q(0).is_err());
    }

    #[test]
    fn orthant_sum_matches_printed_octant_split() {
        // three offsets: all-same-sign octants contribute 5/32, mixed ones 5/16
        let same = orthant_integral(3, 0) + orthant_integral(0, 3);
        let mixed = Rational::from(binomial(3, 1)) * orthant_integral(2, 1)
            + Rational::from(binomial(3, 2)) * orthant_integral(1, 2);
        assert_eq!(same, r(5, 32));
        assert_eq!(mixed, r(5, 16));
        assert_eq!(quadrant_sum_p1(1).unwrap(), r(3, 4));
        assert_eq!(quadrant_sum_p1(2).unwrap(), r(7, 12));
        assert_eq!(quadrant_sum_p1(3).unwrap(), r(15, 32));
        assert!(quadrant_sum_p1(0).is_err());
    }

    #[test]
    fn intersection_powers() {
        assert_eq!(p_intersection(2, 3).unwrap(), r(343, 1728));
        assert_eq!(p_intersection(3, 2).unwrap(), r(225, 1024));
        for d in 1..6 {
            assert_eq!(p_intersection(1, d).unwrap(), pow(&r(3, 4), d));
        }
        assert!(p_intersection(1, 0).is_err());
    }

    #[test]
    fn union_values() {
        assert_eq!(p_union(1, 4).unwrap(), r(81, 256));
        assert_eq!(p_union(2, 1).unwrap(), r(11, 12));
        let expected =
            r(3, 1) * pow(&r(3, 4), 4) - r(3, 1) * pow(&r(7, 12), 4) + pow(&r(15, 32), 4);
        let got = p_union(3, 4).unwrap();
        assert_eq!(got, expected);
        assert!((to_f64(&got) - 0.650).abs() < 0.005);
    }

    #[test]
    fn at_least_edge_cases() {
        assert_eq!(p_at_least(2, 2, 1).unwrap(), r(7, 12));
        assert!(p_at_least(2, 3, 1).is_err());
        assert!(p_at_least(2, 0, 1).is_err());
        assert!(ModelQuery::new(65, 1, 1).is_err());
        for m in 1..=6 {
            for d in 1..=8 {
                assert_eq!(p_at_least(m, 1, d).unwrap(), p_union(m, d).unwrap());
                assert_eq!(p_at_least(m, m, d).unwrap(), p_intersection(m, d).unwrap());
            }
        }
    }

    #[test]
    fn printed_last_term_differs_only_from_m_two() {
        assert_eq!(
            p_union_printed_last_term(1, 3).unwrap(),
            p_union(1, 3).unwrap()
        );
        assert_ne!(
            p_union_printed_last_term(3, 2).unwrap(),
            p_union(3, 2).unwrap()
        );
    }

    #[test]
    fn render_and_parse() {
        let x = r(-6, 8);
        assert_eq!(render(&x), "-3/4");
        assert_eq!(parse_rational("-3/4").unwrap(), x);
        assert_eq!(parse_rational("5").unwrap(), r(5, 1));
        assert!(parse_rational("1/0").is_none());
        assert!(ScaleParams::for_grid(4).is_model_normalizable());
        assert!(ScaleParams::UNIT.is_model_normalizable());
    }
}
