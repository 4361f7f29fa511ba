//! Special functions used by the separated wave factors, each returned with
//! its first derivative.

use statrs::function::gamma::gamma;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecFunError {
    #[error("1F1 lower parameter c = {c} is a non-positive integer before the series terminates")]
    PoleAtC { c: f64 },
    #[error("Ferrers function needs |x| < 1, got {0}")]
    OutsideInterval(f64),
    #[error("exceptional Jacobi needs n >= 1, got {0}")]
    DegreeTooLow(usize),
    #[error("exceptional Jacobi denominator gamma + delta + 2n - 2 vanishes (n = {n})")]
    DegenerateDenominator { n: usize },
    #[error("exceptional Jacobi parameters need gamma != delta")]
    EqualParameters,
    #[error("1F1 series did not converge for a = {a}, c = {c}, x = {x}")]
    SeriesDiverged { a: f64, c: f64, x: f64 },
}

/// A function value with its derivative at the same point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunEval {
    pub value: f64,
    pub derivative: f64,
}

impl FunEval {
    pub fn new(value: f64, derivative: f64) -> Self {
        Self { value, derivative }
    }

    pub fn constant(value: f64) -> Self {
        Self::new(value, 0.0)
    }

    /// Product rule.
    pub fn mul(self, other: FunEval) -> FunEval {
        FunEval::new(
            self.value * other.value,
            self.derivative * other.value + self.value * other.derivative,
        )
    }

    pub fn scale(self, s: f64) -> FunEval {
        FunEval::new(self.value * s, self.derivative * s)
    }

    /// Chain rule for `f(g(x))` given `f` evaluated at `g(x)` and `g'(x)`.
    pub fn chain(self, inner_derivative: f64) -> FunEval {
        FunEval::new(self.value, self.derivative * inner_derivative)
    }
}

/// Parameters of the X1 exceptional Jacobi family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EopParams {
    pub gamma: f64,
    pub delta: f64,
    b_eop: f64,
}

impl EopParams {
    pub fn new(gamma: f64, delta: f64) -> Result<Self, SpecFunError> {
        if gamma == delta {
            return Err(SpecFunError::EqualParameters);
        }
        Ok(Self {
            gamma,
            delta,
            b_eop: (delta + gamma) / (delta - gamma),
        })
    }

    /// The pole location `b = (δ+γ)/(δ−γ)`.
    pub fn b_eop(&self) -> f64 {
        self.b_eop
    }
}

/// `1/Γ(x)`, entire: zero at the non-positive integers.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.round() {
        return 0.0;
    }
    if x < 0.5 {
        gamma(1.0 - x) * (PI * x).sin() / PI
    } else {
        1.0 / gamma(x)
    }
}

/// Rising factorial `(a)_k`.
pub fn pochhammer(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a + j as f64))
}

/// Generalized Laguerre polynomial by the three-term recurrence.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> FunEval {
    let value = laguerre_value(n, alpha, x);
    let derivative = if n == 0 { 0.0 } else { -laguerre_value(n - 1, alpha + 1.0, x) };
    FunEval::new(value, derivative)
}

fn laguerre_value(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Jacobi polynomial `P_n^{(a,b)}(x)` by the three-term recurrence, with
/// `d/dx P_n^{(a,b)} = ½(n+a+b+1) P_{n−1}^{(a+1,b+1)}`.
pub fn jacobi(n: usize, a: f64, b: f64, x: f64) -> FunEval {
    let value = jacobi_value(n, a, b, x);
    let derivative = if n == 0 {
        0.0
    } else {
        0.5 * (n as f64 + a + b + 1.0) * jacobi_value(n - 1, a + 1.0, b + 1.0, x)
    };
    FunEval::new(value, derivative)
}

/// `P_n^{(a,b)}(x)` for the caller that only needs the value; `n < 0` maps to zero.
pub fn jacobi_value_or_zero(n: i64, a: f64, b: f64, x: f64) -> f64 {
    if n < 0 {
        0.0
    } else {
        jacobi_value(n as usize, a, b, x)
    }
}

fn jacobi_value(n: usize, a: f64, b: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for k in 2..=n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        let d = 2.0 * kf * (kf + a + b) * (s - 2.0);
        if d.abs() < 1e-300 {
            return jacobi_binomial_sum(n, a, b, x);
        }
        let c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c2 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * s;
        let next = (c1 * cur - c2 * prev) / d;
        prev = cur;
        cur = next;
    }
    cur
}

/// `Σ_s C(n+a, n−s) C(n+b, s) ((x−1)/2)^s ((x+1)/2)^{n−s}`, valid for every `a, b`.
fn jacobi_binomial_sum(n: usize, a: f64, b: f64, x: f64) -> f64 {
    let gbinom = |top: f64, k: usize| pochhammer(top - k as f64 + 1.0, k) / pochhammer(1.0, k);
    (0..=n)
        .map(|s| {
            gbinom(n as f64 + a, n - s)
                * gbinom(n as f64 + b, s)
                * (0.5 * (x - 1.0)).powi(s as i32)
                * (0.5 * (x + 1.0)).powi((n - s) as i32)
        })
        .sum()
}

/// Kummer's confluent hypergeometric function `₁F₁(a; c; x)` by its power
/// series, terminating exactly when `a` is a non-positive integer.
pub fn hyp1f1(a: f64, c: f64, x: f64) -> Result<FunEval, SpecFunError> {
    let value = hyp1f1_value(a, c, x)?;
    let derivative = if a == 0.0 { 0.0 } else { a / c * hyp1f1_value(a + 1.0, c + 1.0, x)? };
    Ok(FunEval::new(value, derivative))
}

fn hyp1f1_value(a: f64, c: f64, x: f64) -> Result<f64, SpecFunError> {
    let terminates = a <= 0.0 && a == a.round();
    let last = if terminates { (-a) as usize } else { usize::MAX };
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0usize;
    while k < last {
        let denom = c + k as f64;
        if denom == 0.0 {
            return Err(SpecFunError::PoleAtC { c });
        }
        term *= (a + k as f64) / denom * x / (k as f64 + 1.0);
        sum += term;
        k += 1;
        if !terminates {
            if term.abs() <= 1e-17 * sum.abs() && k as f64 > x.abs() {
                break;
            }
            if k > 100_000 || !sum.is_finite() {
                return Err(SpecFunError::SeriesDiverged { a, c, x });
            }
        }
    }
    Ok(sum)
}

/// Ferrers function of integer degree `m` and real order `mu` on `(−1, 1)`:
///
/// `P_m^μ(x) = ((1+x)/(1−x))^{μ/2} Σ_k (−m)_k (m+1)_k / (k! Γ(1−μ+k)) ((1−x)/2)^k`.
///
/// Using `1/Γ` keeps the function finite when `1−μ` is a non-positive
/// integer, where the regularized series gives the limiting value.
pub fn ferrers_legendre(m: usize, mu: f64, x: f64) -> Result<FunEval, SpecFunError> {
    if !(x.abs() < 1.0) {
        return Err(SpecFunError::OutsideInterval(x));
    }
    let w = 0.5 * (1.0 - x);
    let mf = m as f64;
    let mut s = 0.0;
    let mut ds_dw = 0.0;
    let mut coef = 1.0;
    for k in 0..=m {
        let kf = k as f64;
        let ck = coef * rgamma(1.0 - mu + kf);
        s += ck * w.powi(k as i32);
        if k > 0 {
            ds_dw += ck * kf * w.powi(k as i32 - 1);
        }
        coef *= (-mf + kf) * (mf + 1.0 + kf) / (kf + 1.0);
    }
    let g = ((1.0 + x) / (1.0 - x)).powf(0.5 * mu);
    let dg = g * mu / (1.0 - x * x);
    Ok(FunEval::new(g * s, dg * s - 0.5 * g * ds_dw))
}

/// X1 exceptional Jacobi polynomial
///
/// `P̂_n(x) = −½(x−b) P_{n−1}^{(γ,δ)}(x) + (b P_{n−1}^{(γ,δ)}(x) − P_{n−2}^{(γ,δ)}(x)) / (γ+δ+2n−2)`
///
/// with `b = (δ+γ)/(δ−γ)` and `P_{−1} ≡ 0`.
pub fn exceptional_jacobi(n: usize, p: &EopParams, x: f64) -> Result<FunEval, SpecFunError> {
    if n == 0 {
        return Err(SpecFunError::DegreeTooLow(n));
    }
    let denom = p.gamma + p.delta + 2.0 * n as f64 - 2.0;
    if denom.abs() < 1e-14 {
        return Err(SpecFunError::DegenerateDenominator { n });
    }
    let b = p.b_eop;
    let p1 = jacobi(n - 1, p.gamma, p.delta, x);
    let p2 = if n >= 2 {
        jacobi(n - 2, p.gamma, p.delta, x)
    } else {
        FunEval::constant(0.0)
    };
    let value = -0.5 * (x - b) * p1.value + (b * p1.value - p2.value) / denom;
    let derivative =
        -0.5 * p1.value - 0.5 * (x - b) * p1.derivative + (b * p1.derivative - p2.derivative) / denom;
    Ok(FunEval::new(value, derivative))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_small() {
        assert_eq!(laguerre(1, 0.0, 0.0).value, 1.0);
        assert_eq!(laguerre(1, 2.0, 1.0).value, 2.0);
        assert_eq!(laguerre(0, 3.0, 9.0).derivative, 0.0);
    }

    #[test]
    fn jacobi_small() {
        assert_eq!(jacobi(0, 0.3, 0.7, 0.2).value, 1.0);
        let (d, g, x) = (2.0, 1.0, 0.4);
        let expect = 0.5 * (d - g) + 0.5 * (d + g + 2.0) * x;
        assert!((jacobi(1, d, g, x).value - expect).abs() < 1e-15);
    }

    #[test]
    fn jacobi_degenerate_recurrence_uses_sum() {
        // a + b = -2 makes the k = 2 recurrence denominator vanish.
        let v = jacobi_value(2, -0.5, -1.5, 0.3);
        let s = jacobi_binomial_sum(2, -0.5, -1.5, 0.3);
        assert!((v - s).abs() < 1e-14);
    }

    #[test]
    fn hyp1f1_small() {
        assert_eq!(hyp1f1(0.0, 2.0, 5.0).unwrap().value, 1.0);
        assert!((hyp1f1(-1.0, 2.0, 1.0).unwrap().value - 0.5).abs() < 1e-15);
        assert!((hyp1f1(1.0, 1.0, 1.0).unwrap().value - 1f64.exp()).abs() < 1e-14);
        assert!(matches!(hyp1f1(0.5, -1.0, 1.0), Err(SpecFunError::PoleAtC { .. })));
        // terminates before reaching the pole
        assert!(hyp1f1(-1.0, -3.0, 1.0).is_ok());
    }

    #[test]
    fn ferrers_small() {
        let p = ferrers_legendre(1, 0.0, 0.37).unwrap();
        assert!((p.value - 0.37).abs() < 1e-15);
        assert!((p.derivative - 1.0).abs() < 1e-14);
        assert!((ferrers_legendre(0, 0.0, -0.2).unwrap().value - 1.0).abs() < 1e-15);
        assert!(ferrers_legendre(1, 0.0, 1.0).is_err());
        // integer order where Γ(1−μ) has a pole: P_2^1(x) = −3x√(1−x²)
        let v = ferrers_legendre(2, 1.0, 0.5).unwrap().value;
        assert!((v + 3.0 * 0.5 * (0.75f64).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn rgamma_values() {
        assert_eq!(rgamma(0.0), 0.0);
        assert_eq!(rgamma(-3.0), 0.0);
        assert!((rgamma(4.0) - 1.0 / 6.0).abs() < 1e-15);
        assert!((rgamma(-0.5) + 0.5 / PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn exceptional_jacobi_guards() {
        let p = EopParams::new(1.0, 2.0).unwrap();
        assert!(matches!(exceptional_jacobi(0, &p, 0.1), Err(SpecFunError::DegreeTooLow(0))));
        let q = EopParams::new(1.0, -1.0).unwrap();
        assert!(matches!(
            exceptional_jacobi(1, &q, 0.1),
            Err(SpecFunError::DegenerateDenominator { n: 1 })
        ));
        assert!(EopParams::new(1.0, 1.0).is_err());
        assert_eq!(p.b_eop(), 3.0);
    }
}
