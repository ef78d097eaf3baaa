//! Numeric checks of the helper integrals used by the coverage model.
//!
//! Each integral is evaluated by a deterministic route (Gauss–Legendre on the
//! factorized or order-statistics-reduced form, plus tensor Gauss–Legendre for
//! the smooth product integrands) and by plain Monte Carlo over its box
//! domain. Both are compared with the printed closed form and with a closed
//! form derived here by exact polynomial integration.
//!
//! The `Min*` integrands are evaluated as `max(x_1, .., x_d) + 1/2`: the
//! one-dimensional reduction `d ∫ x^{d-1} (x + 1/2)` and the printed values
//! `(2d+1) / ((d+1) 2^{d+1})` both belong to the maximum, and they coincide
//! with the literal minimum only at `d = 1`. The literal-minimum value is
//! reported next to them.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::exec::Exec;
use crate::model::{to_f64, Rational};
use crate::seed::{purpose_key, unit_rng, Purpose};
use crate::sum::Moments;

/// Largest `d` (or `m`) for the reduced one-dimensional evaluation.
pub const MAX_REDUCED_DIM: u32 = 12;
/// Largest variable count for the tensor-product cross-check.
pub const MAX_TENSOR_VARS: u32 = 8;
/// Nodes of the one-dimensional Gauss–Legendre rule (exact to degree 31).
pub const GL_NODES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IntegralId {
    Linear1d,
    Product2d,
    ProductNd,
    Min2d,
    MinNd,
    Yv2d,
    YvNd,
    Combined,
}

impl IntegralId {
    pub const ALL: [IntegralId; 8] = [
        IntegralId::Linear1d,
        IntegralId::Product2d,
        IntegralId::ProductNd,
        IntegralId::Min2d,
        IntegralId::MinNd,
        IntegralId::Yv2d,
        IntegralId::YvNd,
        IntegralId::Combined,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IntegralId::Linear1d => "LINEAR_1D",
            IntegralId::Product2d => "PRODUCT_2D",
            IntegralId::ProductNd => "PRODUCT_ND",
            IntegralId::Min2d => "MIN_2D",
            IntegralId::MinNd => "MIN_ND",
            IntegralId::Yv2d => "YV_2D",
            IntegralId::YvNd => "YV_ND",
            IntegralId::Combined => "COMBINED",
        }
    }

    /// Which of `(d, m)` the integral depends on.
    pub fn uses(&self) -> (bool, bool) {
        match self {
            IntegralId::ProductNd | IntegralId::MinNd => (true, false),
            IntegralId::YvNd => (false, true),
            IntegralId::Combined => (true, true),
            _ => (false, false),
        }
    }

    fn involves_max(&self) -> bool {
        matches!(
            self,
            IntegralId::Min2d | IntegralId::MinNd | IntegralId::Combined
        )
    }
}

impl fmt::Display for IntegralId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    MatchesPrinted,
    MatchesDerivedOnly,
    Inconclusive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::MatchesPrinted => "MATCHES_PRINTED",
            Verdict::MatchesDerivedOnly => "MATCHES_DERIVED_ONLY",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub mc_samples: u64,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            mc_samples: 200_000,
            seed: 0x5eed,
            exec: Exec::default(),
        }
    }
}

/// Both numeric routes for one integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralEval {
    /// Gauss–Legendre on the factorized / order-statistics-reduced form.
    pub deterministic: f64,
    /// Full tensor Gauss–Legendre, for smooth integrands with few variables.
    pub tensor: Option<f64>,
    pub mc_mean: f64,
    pub mc_stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralCheck {
    pub id: IntegralId,
    pub d: Option<u32>,
    pub m: Option<u32>,
    pub numeric: f64,
    pub tensor: Option<f64>,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    #[serde(serialize_with = "ser_rational")]
    pub printed_closed_form: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub derived_closed_form: Rational,
    #[serde(serialize_with = "ser_opt_rational")]
    pub literal_min_closed_form: Option<Rational>,
    pub abs_err_numeric_vs_printed: f64,
    pub abs_err_numeric_vs_derived: f64,
    /// `|printed - derived| / mc_stderr`; how many Monte Carlo standard errors
    /// separate the two candidate forms.
    pub separation_stderr: f64,
    pub verdict: Verdict,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::model::render(r))
}

fn ser_opt_rational<S: serde::Serializer>(
    r: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => ser_rational(r, s),
        None => s.serialize_none(),
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_n and its derivative
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule
}

/// `∫_a^b f` by an `n`-node Gauss–Legendre rule.
pub fn gl_integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    gauss_legendre(n)
        .iter()
        .map(|&(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Tensor-product Gauss–Legendre over a box.
pub fn gl_tensor(f: impl Fn(&[f64]) -> f64, bounds: &[(f64, f64)], n: usize) -> f64 {
    let rule = gauss_legendre(n);
    let dims = bounds.len();
    let mut idx = vec![0usize; dims];
    let mut point = vec![0.0; dims];
    let mut total = 0.0;
    loop {
        let mut weight = 1.0;
        for k in 0..dims {
            let (a, b) = bounds[k];
            let (x, w) = rule[idx[k]];
            point[k] = (a + b) / 2.0 + (b - a) / 2.0 * x;
            weight *= w * (b - a) / 2.0;
        }
        total += weight * f(&point);
        let mut k = 0;
        loop {
            if k == dims {
                return total;
            }
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

const POS: (f64, f64) = (0.0, 0.5);
const NEG: (f64, f64) = (-0.5, 0.0);

/// Box domain and integrand. Variables are laid out as `x_1..x_d` followed by
/// `(y_k, v_k)` pairs.
type Integrand = Box<dyn Fn(&[f64]) -> f64 + Sync>;

fn integrand(id: IntegralId, d: u32, m: u32) -> (Vec<(f64, f64)>, Integrand) {
    let xs = |n: u32| vec![POS; n as usize];
    let pairs = |n: u32| (0..n).flat_map(|_| [POS, NEG]).collect::<Vec<_>>();
    let product = |v: &[f64]| v.iter().map(|x| x + 0.5).product::<f64>();
    let max_plus_half = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 0.5;
    let yv = |v: &[f64]| v.chunks(2).map(|p| p[0] - p[1]).product::<f64>();
    match id {
        IntegralId::Linear1d => (xs(1), Box::new(product)),
        IntegralId::Product2d => (xs(2), Box::new(product)),
        IntegralId::ProductNd => (xs(d), Box::new(product)),
        IntegralId::Min2d => (xs(2), Box::new(max_plus_half)),
        IntegralId::MinNd => (xs(d), Box::new(max_plus_half)),
        IntegralId::Yv2d => (pairs(1), Box::new(yv)),
        IntegralId::YvNd => (pairs(m), Box::new(yv)),
        IntegralId::Combined => {
            let mut b = xs(d);
            b.extend(pairs(m));
            let split = d as usize;
            (
                b,
                Box::new(move |v: &[f64]| max_plus_half(&v[..split]) * yv(&v[split..])),
            )
        }
    }
}

/// Resolves the effective `(d, m)` of an integral, validating them.
fn effective_params(id: IntegralId, d: u32, m: u32) -> Result<(u32, u32)> {
    let (uses_d, uses_m) = id.uses();
    let d = match id {
        IntegralId::Linear1d => 1,
        IntegralId::Product2d | IntegralId::Min2d => 2,
        _ if uses_d => d,
        _ => 0,
    };
    let m = match id {
        IntegralId::Yv2d => 1,
        _ if uses_m => m,
        _ => 0,
    };
    if uses_d && !(1..=MAX_REDUCED_DIM).contains(&d) {
        return domain(format!("{id} needs 1 <= d <= {MAX_REDUCED_DIM}, got {d}"));
    }
    if uses_m && !(1..=MAX_REDUCED_DIM).contains(&m) {
        return domain(format!("{id} needs 1 <= m <= {MAX_REDUCED_DIM}, got {m}"));
    }
    Ok((d, m))
}

fn reduced(id: IntegralId, d: u32, m: u32) -> f64 {
    let linear = gl_integrate(|x| x + 0.5, POS.0, POS.1, GL_NODES);
    // order-statistics reduction: the max of d variables has density d x^{d-1}
    let max_factor = |d: u32| {
        d as f64 * gl_integrate(|x| x.powi(d as i32 - 1) * (x + 0.5), POS.0, POS.1, GL_NODES)
    };
    let yv_pair = gl_tensor(|v| v[0] - v[1], &[POS, NEG], GL_NODES);
    match id {
        IntegralId::Linear1d => linear,
        IntegralId::Product2d => gl_tensor(|v| (v[0] + 0.5) * (v[1] + 0.5), &[POS, POS], GL_NODES),
        IntegralId::ProductNd => linear.powi(d as i32),
        IntegralId::Min2d | IntegralId::MinNd => max_factor(d),
        IntegralId::Yv2d => yv_pair,
        IntegralId::YvNd => yv_pair.powi(m as i32),
        IntegralId::Combined => max_factor(d) * yv_pair.powi(m as i32),
    }
}

fn monte_carlo(id: IntegralId, d: u32, m: u32, opts: &QuadOptions) -> (f64, f64) {
    let (bounds, f) = integrand(id, d, m);
    let volume: f64 = bounds.iter().map(|(a, b)| b - a).product();
    let salt = ((id as u64) << 48) | ((d as u64) << 24) | m as u64;
    let key = purpose_key(opts.seed, Purpose::BoxIntegral, salt);
    let partials = opts.exec.map_chunks(opts.mc_samples as usize, |range| {
        let mut point = vec![0.0; bounds.len()];
        let mut moments = Moments::default();
        for i in range {
            let mut rng = unit_rng(key, i as u64);
            for (p, (a, b)) in point.iter_mut().zip(&bounds) {
                *p = a + (b - a) * rng.random::<f64>();
            }
            moments.push(f(&point));
        }
        moments
    });
    let mut total = Moments::default();
    for p in &partials {
        total.merge(p);
    }
    (volume * total.mean(), volume * total.stderr())
}

/// Evaluates one integral by every applicable route.
pub fn eval_integral(id: IntegralId, d: u32, m: u32, opts: &QuadOptions) -> Result<IntegralEval> {
    if opts.mc_samples < 2 {
        return domain("Monte Carlo needs at least two samples");
    }
    let (d, m) = effective_params(id, d, m)?;
    let vars = d + 2 * m;
    let tensor = if !id.involves_max() && vars <= MAX_TENSOR_VARS {
        // integrands are degree one per variable, so two nodes are exact
        let (bounds, f) = integrand(id, d, m);
        Some(gl_tensor(|v| f(v), &bounds, 2))
    } else {
        None
    };
    let (mc_mean, mc_stderr) = monte_carlo(id, d, m, opts);
    Ok(IntegralEval {
        deterministic: reduced(id, d, m),
        tensor,
        mc_mean,
        mc_stderr,
    })
}

fn r(n: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(den))
}

fn pow(x: &Rational, e: u32) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

fn two_pow(e: u32) -> BigInt {
    BigInt::one() << e as usize
}

/// Exact `∫_a^b Σ c_k x^k dx`.
fn integrate_poly(coeffs: &[Rational], a: &Rational, b: &Rational) -> Rational {
    coeffs
        .iter()
        .enumerate()
        .fold(Rational::zero(), |acc, (k, c)| {
            let e = k as u32 + 1;
            acc + c * (pow(b, e) - pow(a, e)) / Rational::from(BigInt::from(e))
        })
}

fn exact_linear() -> Rational {
    integrate_poly(&[r(1, 2), r(1, 1)], &r(0, 1), &r(1, 2))
}

fn exact_max_factor(d: u32) -> Rational {
    // d x^{d-1} (x + 1/2) = d x^d + (d/2) x^{d-1}
    let mut coeffs = vec![Rational::zero(); d as usize + 1];
    coeffs[d as usize] += r(d as i64, 1);
    coeffs[d as usize - 1] += r(d as i64, 2);
    integrate_poly(&coeffs, &r(0, 1), &r(1, 2))
}

fn exact_yv_pair() -> Rational {
    // ∫∫ y - v = (width_v) ∫ y dy - (width_y) ∫ v dv
    let half = r(1, 2);
    let y = integrate_poly(&[r(0, 1), r(1, 1)], &r(0, 1), &half);
    let v = integrate_poly(&[r(0, 1), r(1, 1)], &r(-1, 2), &r(0, 1));
    &half * y - &half * v
}

/// Closed form printed alongside each integral.
pub fn printed_closed_form(id: IntegralId, d: u32, m: u32) -> Result<Rational> {
    let (d, m) = effective_params(id, d, m)?;
    Ok(match id {
        IntegralId::Linear1d => r(3, 8),
        IntegralId::Product2d => r(9, 64),
        IntegralId::ProductNd => pow(&r(3, 8), d),
        IntegralId::Min2d => r(5, 24),
        IntegralId::MinNd => Rational::new(
            BigInt::from(2 * d + 1),
            BigInt::from(d + 1) * two_pow(d + 1),
        ),
        IntegralId::Yv2d => r(1, 8),
        IntegralId::YvNd => pow(&r(1, 8), m),
        // (2m+1) / (8^d (m+1) 2^{m+1})
        IntegralId::Combined => Rational::new(
            BigInt::from(2 * m + 1),
            two_pow(3 * d) * BigInt::from(m + 1) * two_pow(m + 1),
        ),
    })
}

/// Closed form obtained by exact polynomial integration of the integrand.
pub fn derived_closed_form(id: IntegralId, d: u32, m: u32) -> Result<Rational> {
    let (d, m) = effective_params(id, d, m)?;
    Ok(match id {
        IntegralId::Linear1d => exact_linear(),
        IntegralId::Product2d | IntegralId::ProductNd => pow(&exact_linear(), d),
        IntegralId::Min2d | IntegralId::MinNd => exact_max_factor(d),
        IntegralId::Yv2d | IntegralId::YvNd => pow(&exact_yv_pair(), m),
        IntegralId::Combined => exact_max_factor(d) * pow(&exact_yv_pair(), m),
    })
}

/// Value of the integral with a literal `min(x_1, .., x_d)`, where it differs
/// in kind from the evaluated maximum: `(d + 2) / ((d + 1) 2^{d+1})`, times
/// `(1/8)^m` for the combined integral.
pub fn literal_min_closed_form(id: IntegralId, d: u32, m: u32) -> Result<Option<Rational>> {
    let (d, m) = effective_params(id, d, m)?;
    if !id.involves_max() {
        return Ok(None);
    }
    let min_factor = Rational::new(BigInt::from(d + 2), BigInt::from(d + 1) * two_pow(d + 1));
    Ok(Some(min_factor * pow(&r(1, 8), m)))
}

/// Numerical verdict on which closed form the integral supports.
///
/// A form is supported when the deterministic value is within `tol` of it and
/// the Monte Carlo mean is within four standard errors.
pub fn verdict(
    numeric: f64,
    mc_mean: f64,
    mc_stderr: f64,
    printed: f64,
    derived: f64,
    tol: f64,
) -> Verdict {
    let supports = |target: f64| {
        (numeric - target).abs() <= tol
            && (mc_mean - target).abs() <= 4.0 * mc_stderr.max(f64::MIN_POSITIVE)
    };
    if supports(printed) {
        Verdict::MatchesPrinted
    } else if supports(derived) {
        Verdict::MatchesDerivedOnly
    } else {
        Verdict::Inconclusive
    }
}

pub fn check_one(
    id: IntegralId,
    d: u32,
    m: u32,
    tol: f64,
    opts: &QuadOptions,
) -> Result<IntegralCheck> {
    let eval = eval_integral(id, d, m, opts)?;
    let printed = printed_closed_form(id, d, m)?;
    let derived = derived_closed_form(id, d, m)?;
    let (pf, df) = (to_f64(&printed), to_f64(&derived));
    let (uses_d, uses_m) = id.uses();
    Ok(IntegralCheck {
        id,
        d: uses_d.then_some(d),
        m: uses_m.then_some(m),
        numeric: eval.deterministic,
        tensor: eval.tensor,
        mc_mean: eval.mc_mean,
        mc_stderr: eval.mc_stderr,
        abs_err_numeric_vs_printed: (eval.deterministic - pf).abs(),
        abs_err_numeric_vs_derived: (eval.deterministic - df).abs(),
        separation_stderr: if eval.mc_stderr > 0.0 {
            (pf - df).abs() / eval.mc_stderr
        } else {
            f64::INFINITY
        },
        verdict: verdict(
            eval.deterministic,
            eval.mc_mean,
            eval.mc_stderr,
            pf,
            df,
            tol,
        ),
        literal_min_closed_form: literal_min_closed_form(id, d, m)?,
        printed_closed_form: printed,
        derived_closed_form: derived,
    })
}

/// One check per integral and parameter: the fixed-size integrals once,
/// `PRODUCT_ND`/`MIN_ND` for `d = 1..=d_max`, `YV_ND` for `m = 1..=m_max`,
/// `COMBINED` for every `(d, m)` pair.
pub fn check_all(
    d_max: u32,
    m_max: u32,
    tol: f64,
    opts: &QuadOptions,
) -> Result<Vec<IntegralCheck>> {
    if tol.is_nan() || tol <= 0.0 {
        return domain("tolerance must be positive");
    }
    let mut jobs = Vec::new();
    for id in IntegralId::ALL {
        match id.uses() {
            (false, false) => jobs.push((id, 0, 0)),
            (true, false) => jobs.extend((1..=d_max).map(|d| (id, d, 0))),
            (false, true) => jobs.extend((1..=m_max).map(|m| (id, 0, m))),
            (true, true) => {
                for d in 1..=d_max {
                    jobs.extend((1..=m_max).map(|m| (id, d, m)));
                }
            }
        }
    }
    jobs.into_iter()
        .map(|(id, d, m)| check_one(id, d, m, tol, opts))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> QuadOptions {
        QuadOptions {
            mc_samples: 50_000,
            seed: 11,
            exec: Exec::default(),
        }
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let rule = gauss_legendre(GL_NODES);
        let wsum: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((wsum - 2.0).abs() < 1e-14);
        let v = gl_integrate(|x| x.powi(31), 0.0, 1.0, GL_NODES);
        assert!((v - 1.0 / 32.0).abs() < 1e-14);
        let t = gl_tensor(|v| v[0] * v[1] * v[2], &[(0.0, 1.0); 3], 2);
        assert!((t - 0.125).abs() < 1e-15);
        assert!((gl_integrate(|x| x, 0.0, 1.0, 1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn reduced_values() {
        let o = opts();
        let e = |id, d, m| eval_integral(id, d, m, &o).unwrap().deterministic;
        assert!((e(IntegralId::Linear1d, 0, 0) - 0.375).abs() < 1e-12);
        assert!((e(IntegralId::Min2d, 0, 0) - 5.0 / 24.0).abs() < 1e-12);
        assert!((e(IntegralId::MinNd, 3, 0) - 0.109375).abs() < 1e-12);
        assert!((e(IntegralId::Combined, 1, 1) - 3.0 / 64.0).abs() < 1e-12);
    }

    #[test]
    fn closed_forms() {
        assert_eq!(
            printed_closed_form(IntegralId::ProductNd, 4, 0).unwrap(),
            r(81, 4096)
        );
        assert_eq!(
            derived_closed_form(IntegralId::ProductNd, 4, 0).unwrap(),
            r(81, 4096)
        );
        assert_eq!(
            derived_closed_form(IntegralId::Yv2d, 0, 0).unwrap(),
            r(1, 8)
        );
        assert_eq!(
            derived_closed_form(IntegralId::Min2d, 0, 0).unwrap(),
            r(5, 24)
        );
        assert_eq!(
            printed_closed_form(IntegralId::Combined, 1, 1).unwrap(),
            r(3, 64)
        );
        assert_eq!(
            derived_closed_form(IntegralId::Combined, 1, 1).unwrap(),
            r(3, 64)
        );
        assert_eq!(
            printed_closed_form(IntegralId::Combined, 2, 1).unwrap(),
            r(3, 512)
        );
        assert_eq!(
            derived_closed_form(IntegralId::Combined, 2, 1).unwrap(),
            r(5, 192)
        );
        assert_eq!(
            literal_min_closed_form(IntegralId::Min2d, 0, 0).unwrap(),
            Some(r(1, 6))
        );
        assert_eq!(
            literal_min_closed_form(IntegralId::MinNd, 1, 0).unwrap(),
            Some(r(3, 8))
        );
        assert_eq!(
            literal_min_closed_form(IntegralId::Yv2d, 0, 0).unwrap(),
            None
        );
    }

    #[test]
    fn parameter_validation() {
        let o = opts();
        assert!(eval_integral(IntegralId::MinNd, 0, 0, &o).is_err());
        assert!(eval_integral(IntegralId::MinNd, 13, 0, &o).is_err());
        assert!(eval_integral(IntegralId::YvNd, 0, 0, &o).is_err());
        assert!(eval_integral(IntegralId::Linear1d, 0, 0, &o).is_ok());
        assert!(check_all(1, 1, 0.0, &o).is_err());
    }

    #[test]
    fn verdict_rules() {
        assert_eq!(
            verdict(0.5, 0.5, 0.01, 0.5, 0.5, 1e-9),
            Verdict::MatchesPrinted
        );
        assert_eq!(
            verdict(0.3, 0.3, 0.01, 0.5, 0.3, 1e-9),
            Verdict::MatchesDerivedOnly
        );
        assert_eq!(
            verdict(0.3, 0.4, 0.01, 0.5, 0.3, 1e-9),
            Verdict::Inconclusive
        );
        assert_eq!(
            verdict(0.1, 0.1, 0.01, 0.5, 0.3, 1e-9),
            Verdict::Inconclusive
        );
    }
}
