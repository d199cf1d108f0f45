//! Threshold exponents, root-finders and the numeric constants used in the
//! counting arguments.
//!
//! All roots are found by bracketed bisection. Where a function has two
//! branches meeting at a knot, evaluations at the knot compute both and
//! refuse to answer if they disagree.

use std::collections::BTreeMap;
use std::f64::consts::E;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_TOL: f64 = 1e-12;
const KNOT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticsError {
    #[error("{0}")]
    Domain(String),
    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("branches disagree at knot {at}: {left} vs {right}")]
    KnotMismatch { at: f64, left: f64, right: f64 },
}

type Result<T> = std::result::Result<T, AsymptoticsError>;

fn domain<T>(msg: String) -> Result<T> {
    Err(AsymptoticsError::Domain(msg))
}

/// Root of `f` on `[lo, hi]` to absolute tolerance `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if (flo > 0.0) == (fhi > 0.0) || flo.is_nan() || fhi.is_nan() {
        return Err(AsymptoticsError::NoSignChange { lo, hi });
    }
    let lo_positive = flo > 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `eps * log(eps / e)`, with the limit 0 at `eps = 0`.
fn eps_log_eps_over_e(eps: f64) -> f64 {
    if eps == 0.0 {
        0.0
    } else {
        eps * (eps / E).ln()
    }
}

/// `x^y` with `0^0 = 1`.
fn pow0(x: f64, y: f64) -> f64 {
    if y == 0.0 {
        1.0
    } else {
        x.powf(y)
    }
}

fn check_knot(at: f64, left: f64, right: f64) -> Result<()> {
    if (left - right).abs() > KNOT_TOL * (1.0 + left.abs()) {
        return Err(AsymptoticsError::KnotMismatch { at, left, right });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// the critical exponent

pub fn mu(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0 && beta > 0.0) {
        return domain(format!("mu needs alpha > 0 and beta > 0, got ({alpha}, {beta})"));
    }
    Ok(1.5 + beta * (alpha * beta).ln() - alpha * beta * beta / 2.0)
}

pub fn beta_star(alpha: f64, tol: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0 / 3.0) {
        return domain(format!("beta_star needs alpha in (0, 1/3), got {alpha}"));
    }
    if tol <= 0.0 {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    bisect(|b| mu(alpha, b).unwrap(), f64::MIN_POSITIVE, 3.0, tol)
}

pub fn delta_eps(eps: f64) -> f64 {
    1.0 - (1.0 - eps).sqrt()
}

pub fn beta_eps(alpha: f64, eps: f64) -> f64 {
    delta_eps(eps) / alpha
}

fn check_beta_range(alpha: f64, beta: f64, eps: f64) -> Result<()> {
    let lo = beta_eps(alpha, eps);
    let hi = 1.0 / alpha;
    let slack = 1e-12 * hi;
    if !(beta >= lo - slack && beta <= hi + slack) || beta <= 0.0 {
        return domain(format!("beta = {beta} outside [{lo}, {hi}]"));
    }
    Ok(())
}

fn xi_lower(alpha: f64, beta: f64, eps: f64) -> f64 {
    let ab = alpha * beta;
    let s = 2.0 * ab - eps;
    -ab * beta / 2.0 + s / (2.0 * alpha) * (E * ab * ab / s).ln()
}

fn xi_upper(alpha: f64, beta: f64, eps: f64) -> f64 {
    let ab = alpha * beta;
    -ab * beta / 2.0 + beta * ab.ln() - eps_log_eps_over_e(eps) / (2.0 * alpha)
}

pub fn xi_eps(alpha: f64, beta: f64, eps: f64) -> Result<f64> {
    if !(alpha > 0.0) || !(0.0..1.0).contains(&eps) {
        return domain(format!("xi_eps needs alpha > 0 and eps in [0, 1), got ({alpha}, {eps})"));
    }
    check_beta_range(alpha, beta, eps)?;
    let knot = eps / alpha;
    if (beta - knot).abs() <= 1e-12 * knot.max(1.0) && eps > 0.0 {
        let (l, u) = (xi_lower(alpha, knot, eps), xi_upper(alpha, knot, eps));
        check_knot(knot, l, u)?;
        return Ok(u);
    }
    Ok(if beta < knot {
        xi_lower(alpha, beta, eps)
    } else {
        xi_upper(alpha, beta, eps)
    })
}

pub fn mu_eps(alpha: f64, beta: f64, eps: f64) -> Result<f64> {
    if !(alpha > 0.0) || !(eps >= 0.0 && eps <= 3.0 * alpha) || eps >= 1.0 {
        return domain(format!("mu_eps needs eps in [0, 3 alpha], got ({alpha}, {eps})"));
    }
    check_beta_range(alpha, beta, eps)?;
    let m = mu(alpha, beta)?;
    let knot = eps / alpha;
    let lower = |b: f64| {
        let ab = alpha * b;
        let s = 2.0 * ab - eps;
        mu(alpha, b).unwrap() - b * ab.ln() + eps_log_eps_over_e(eps) / (2.0 * alpha)
            + s / (2.0 * alpha) * (E * ab * ab / s).ln()
    };
    if (beta - knot).abs() <= 1e-12 * knot.max(1.0) && eps > 0.0 {
        let l = lower(knot);
        check_knot(knot, l, m)?;
        return Ok(m);
    }
    Ok(if beta < knot { lower(beta) } else { m })
}

pub fn psi_eps(y: f64, eps: f64) -> Result<f64> {
    if !(eps >= 0.0 && eps < 1.0 / (2.0 * E)) {
        return domain(format!(
            "psi_eps needs eps in [0, 1/(2e)); at eps = {eps} it is constant at or above 2/e"
        ));
    }
    if !(0.0..=1.0).contains(&y) {
        return domain(format!("psi_eps needs y in [0, 1], got {y}"));
    }
    Ok((1.5 / E + eps).max((E / 2.0).powf(1.0 - 2.0 * y) * y * y))
}

pub fn y_star(eps: f64) -> Result<f64> {
    psi_eps(1.0, eps)?;
    let c = 1.5 / E + eps;
    let f = |y: f64| (E / 2.0).powf(1.0 - 2.0 * y) * y * y - c;
    let y = bisect(f, 0.0, 1.0, DEFAULT_TOL)?;
    check_knot(y, (E / 2.0).powf(1.0 - 2.0 * y) * y * y, c)?;
    Ok(y)
}

pub fn y_hat() -> f64 {
    y_star(0.0).expect("eps = 0 is in range")
}

pub fn eps_star(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0 / 3.0) {
        return domain(format!("eps_star needs alpha in (0, 1/3), got {alpha}"));
    }
    let e = bisect(|x| x * (1.0 - x.ln()) - 3.0 * alpha, f64::MIN_POSITIVE, 1.0, DEFAULT_TOL * 1e-2)?;
    if !(e > 0.0 && e < 3.0 * alpha) {
        return domain(format!("root {e} not in (0, 3 alpha)"));
    }
    Ok(e)
}

/// `3/2 + eps (2 alpha)^-1 log(eps / e)`.
pub fn nu_eps(alpha: f64, eps: f64) -> f64 {
    1.5 + eps_log_eps_over_e(eps) / (2.0 * alpha)
}

/// Smallest value of `mu(alpha, beta_eps)` over `points` evenly spaced
/// `eps` in `[0, eps_star(alpha)]`, skipping `eps = 0` where `beta_eps = 0`.
pub fn min_mu_at_beta_eps(alpha: f64, points: usize) -> Result<f64> {
    let top = eps_star(alpha)?;
    let mut lo = f64::INFINITY;
    for j in 1..=points {
        let eps = top * j as f64 / points as f64;
        lo = lo.min(mu(alpha, beta_eps(alpha, eps))?);
    }
    Ok(lo)
}

// ---------------------------------------------------------------------------
// clique-count exponents

pub fn eta(e1: f64, e2: f64) -> Result<f64> {
    let e3 = 1.0 - e1 - e2;
    if !(e1 > 0.0 && e1 < 1.0 && e2 >= 0.0 && e3 >= -1e-15) {
        return domain(format!("eta needs e1 in (0,1), e2 >= 0, e1 + e2 <= 1, got ({e1}, {e2})"));
    }
    let e3 = e3.max(0.0);
    Ok((1.0 - e1 + e3).exp() / (1.0 - e1).powf(e2)
        * pow0(e1, 2.0 * e1)
        * pow0(e2, 2.0 * e2)
        * pow0(e3, e3))
}

/// `eta` in its unsimplified product form.
pub fn eta_product(e1: f64, e2: f64) -> Result<f64> {
    eta(e1, e2)?;
    let e3 = (1.0 - e1 - e2).max(0.0);
    let first = pow0(E / (1.0 - e1), 1.0 - e1);
    let second = if e3 == 0.0 {
        1.0
    } else {
        ((1.0 - e1) * E / e3).powf(e3)
    };
    Ok(first * second * pow0(e1, 2.0 * e1) * pow0(e2, 2.0 * e2) * pow0(e3, 2.0 * e3))
}

fn zeta_low(x: f64) -> f64 {
    pow0(E * (1.0 - 2.0 * x), 1.0 - 2.0 * x) * x.powf(4.0 * x - 1.0) / (1.0 - x).powf(x)
}

fn zeta_high(x: f64) -> f64 {
    pow0(1.0 - x, 1.0 - x) * x.powf(2.0 * x - 1.0)
}

pub fn zeta(e1: f64) -> Result<f64> {
    if !(e1 >= 1.0 / 3.0 && e1 <= 1.0) {
        return domain(format!("zeta needs e1 in [1/3, 1], got {e1}"));
    }
    if e1 == 0.5 {
        let (l, h) = (zeta_low(e1), zeta_high(e1));
        check_knot(e1, l, h)?;
        return Ok(h);
    }
    Ok(if e1 < 0.5 { zeta_low(e1) } else { zeta_high(e1) })
}

/// `eta(e1, min(e1, 1 - e1)) / (e1 e^(1 - e1))`.
pub fn zeta_from_eta(e1: f64) -> Result<f64> {
    if !(e1 >= 1.0 / 3.0 && e1 < 1.0) {
        return domain(format!("zeta_from_eta needs e1 in [1/3, 1), got {e1}"));
    }
    Ok(eta(e1, e1.min(1.0 - e1))? / (e1 * (1.0 - e1).exp()))
}

/// `d log zeta / d e1`.
pub fn zeta_log_derivative(e1: f64) -> Result<f64> {
    if !(e1 > 1.0 / 3.0 - 1e-15 && e1 < 1.0) || e1 == 0.5 {
        return domain(format!("zeta_log_derivative needs e1 in [1/3, 1) minus 1/2, got {e1}"));
    }
    let x = e1;
    Ok(if x < 0.5 {
        (x.powi(4) / ((1.0 - x) * (1.0 - 2.0 * x).powi(2))).ln() + (x * x + x - 1.0) / (x * (1.0 - x))
    } else {
        (x * x / (1.0 - x)).ln() + (x - 1.0) / x
    })
}

/// Stationary points of `zeta` on `[1/3, 1/2)` and `(1/2, 1)`.
pub fn zeta_stationary_points() -> (f64, f64) {
    let d = |x: f64| zeta_log_derivative(x).unwrap();
    let x1 = bisect(d, 1.0 / 3.0, 0.5 - 1e-9, DEFAULT_TOL).expect("sign change on the lower branch");
    let x2 = bisect(d, 0.5 + 1e-9, 1.0 - 1e-9, DEFAULT_TOL).expect("sign change on the upper branch");
    (x1, x2)
}

// ---------------------------------------------------------------------------
// counting constants

pub fn zeta_const() -> f64 {
    2.0 / E
}

/// `6 / (zeta^5 5! 5^5)`.
pub fn a_const() -> f64 {
    6.0 / (zeta_const().powi(5) * 120.0 * 5f64.powi(5))
}

pub fn gamma1(k: f64) -> f64 {
    let z = zeta_const();
    (1.0 / k) * (4.0 / (z.powi(3) * E.powi(3))) + (1.0 / k.powi(3)) * (4.0 / (z.powi(5) * E.powi(5)))
}

pub fn gamma2(k: f64) -> f64 {
    let (z, a) = (zeta_const(), a_const());
    let c = 16.0 * 5f64.powi(7);
    (1.0 / k) * (a * z * c / E.powi(4)) + (1.0 / k.powi(3)) * (a / z) * (c / E.powi(6))
}

pub fn gamma3(k: f64) -> f64 {
    let (z, a) = (zeta_const(), a_const());
    (1.0 / k.powi(3)) * (a * a * z.powi(3) * 5f64.powi(14) * 64.0 / E.powi(7))
}

pub fn gamma4(k: f64) -> f64 {
    let (z, a) = (zeta_const(), a_const());
    (1.0 / k.powi(2)) * (a * z * z * 16.0 * 5f64.powi(7) / E.powi(3))
}

pub fn gamma5(k: f64) -> f64 {
    let (z, a) = (zeta_const(), a_const());
    (1.0 / k.powi(4)) * (a * z.powi(3) * 6.0 * 5f64.powi(8) * 64.0 / (2.0 * E * E))
}

/// The four case sums for excess 0, 1, 2, 3.
pub fn case_sums(k: f64) -> [f64; 4] {
    let (g1, g2, g3, g4, g5) = (gamma1(k), gamma2(k), gamma3(k), gamma4(k), gamma5(k));
    [
        g1 + g2 + g3,
        g1 + 2.0 * g2 + 3.0 * g3 + g4,
        g1 + 3.0 * g2 + 6.0 * g3 + 2.0 * g4,
        g1 + 4.0 * g2 + 10.0 * g3 + 3.0 * g4 + g5,
    ]
}

/// `beta log(alpha beta e^3 / 16) - (ell - 3)/2` with `alpha beta` given as `ab`.
pub fn nu_extra(beta: f64, ab: f64, ell: f64) -> f64 {
    -(ell - 3.0) / 2.0 + beta * (ab * E.powi(3) / 16.0).ln()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpotCheck {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub k: usize,
    pub values: BTreeMap<String, f64>,
    pub checks: Vec<SpotCheck>,
    pub all_pass: bool,
}

pub fn proof_constants(k: usize) -> Result<ConstantsReport> {
    if k < 8 {
        return domain(format!("proof_constants needs k >= 8, got {k}"));
    }
    let kf = k as f64;
    let mut values = BTreeMap::new();
    let mut put = |name: &str, v: f64| {
        values.insert(name.to_string(), v);
    };
    put("zeta_const", zeta_const());
    put("A", a_const());
    put("gamma1", gamma1(kf));
    put("gamma2", gamma2(kf));
    put("gamma3", gamma3(kf));
    put("gamma4", gamma4(kf));
    put("gamma5", gamma5(kf));
    let sums = case_sums(kf);
    for (j, s) in sums.iter().enumerate() {
        put(&format!("case_sum_ell{j}"), *s);
    }
    let (x1, x2) = zeta_stationary_points();
    put("x1", x1);
    put("x2", x2);
    put("y_hat", y_hat());
    put("zeta(1/3)", zeta(1.0 / 3.0)?);
    put("zeta(1/2)", zeta(0.5)?);
    put("zeta(1)", zeta(1.0)?);
    put("zeta(x1)", zeta(x1)?);
    put("zeta(x2)", zeta(x2)?);
    put("nu_extra(2)", 2.0 * (2.0 / 3.0 * E.powi(3) / 16.0).ln());
    put("nu_extra(9)", 9.0 * (9.0 / 3.0 * E.powi(3) / 16.0).ln());
    put("second_derivative_floor", 1.5 * (3.0 + 2.0 * (3.0 / (4.0 * E)).ln()));
    put("one_plus_two_log_3_over_2e", 1.0 + 2.0 * (1.5 / E).ln());
    put("sqrt21_minus_3_over_2", (21f64.sqrt() - 3.0) / 2.0);

    let eight = case_sums(8.0);
    let mut checks = Vec::new();
    let mut check = |name: &str, value: f64, expected: f64, tol: f64| {
        checks.push(SpotCheck {
            name: name.to_string(),
            value,
            expected,
            tol,
            pass: (value - expected).abs() <= tol,
        });
    };
    for (j, (&v, want)) in eight.iter().zip([0.23, 0.43, 0.63, 0.90]).enumerate() {
        check(&format!("case_sum_ell{j}(k=8)"), v, want, 0.02);
    }
    check("x1", x1, 0.439, 0.003);
    check("x2", x2, 0.692, 0.003);
    check("y_hat", values["y_hat"], 0.819, 0.001);
    check("zeta(1/3)", values["zeta(1/3)"], (E / 6.0).cbrt(), 1e-10);
    check("zeta(1/2)", values["zeta(1/2)"], 0.5f64.sqrt(), 1e-10);
    check("zeta(1)", values["zeta(1)"], 1.0, 1e-10);
    check("nu_extra(2)", values["nu_extra(2)"], -0.356, 0.003);
    check("nu_extra(9)", values["nu_extra(9)"], 11.934, 0.003);
    check("second_derivative_floor", values["second_derivative_floor"], 0.637, 0.003);
    check("one_plus_two_log_3_over_2e", values["one_plus_two_log_3_over_2e"], -0.189, 0.003);
    check("sqrt21_minus_3_over_2", values["sqrt21_minus_3_over_2"], 0.791, 0.001);
    let all_pass = checks.iter().all(|c| c.pass) && values.values().all(|v| v.is_finite());
    Ok(ConstantsReport {
        k,
        values,
        checks,
        all_pass,
    })
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdParams {
    pub alpha: f64,
    pub beta: f64,
    pub eps: f64,
    pub y: f64,
    pub n: u64,
    pub p: f64,
    pub k_alpha: f64,
    pub q_alpha: f64,
    pub delta_eps: f64,
    pub beta_eps: f64,
}

impl ThresholdParams {
    pub fn new(alpha: f64, beta: f64, eps: f64, y: f64, n: u64) -> Result<ThresholdParams> {
        if !(alpha > 0.0 && alpha <= 1.0 / 3.0) {
            return domain(format!("alpha must be in (0, 1/3], got {alpha}"));
        }
        if !(beta > 0.0) || !(0.0..1.0).contains(&eps) || !(0.0..=1.0).contains(&y) {
            return domain(format!("bad (beta, eps, y) = ({beta}, {eps}, {y})"));
        }
        if n < 3 {
            return domain(format!("n must be at least 3, got {n}"));
        }
        let ln_n = (n as f64).ln();
        Ok(ThresholdParams {
            alpha,
            beta,
            eps,
            y,
            n,
            p: threshold_p(n, alpha),
            k_alpha: ln_n / alpha,
            q_alpha: ln_n / (2.0 * alpha),
            delta_eps: delta_eps(eps),
            beta_eps: beta_eps(alpha, eps),
        })
    }
}

/// `sqrt(alpha / (n log n))`.
pub fn threshold_p(n: u64, alpha: f64) -> f64 {
    let nf = n as f64;
    (alpha / (nf * nf.ln())).sqrt()
}
