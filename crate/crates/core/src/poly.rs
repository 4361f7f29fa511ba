//! Dense univariate real polynomials: evaluation, arithmetic and real-root
//! extraction through the eigenvalues of the companion matrix.

use nalgebra::DMatrix;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Default clustering tolerance for [`Polynomial::real_roots`].
pub const DEFAULT_ROOT_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("coefficient {index} is not finite ({value})")]
    NonFiniteCoefficient { index: usize, value: f64 },
    #[error("root extraction needs degree >= 1, got a constant polynomial")]
    ConstantPolynomial,
    #[error("root tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// Real polynomial stored with ascending coefficients.
///
/// The leading coefficient is nonzero unless the polynomial is identically
/// zero, which is stored as `[0.0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

/// A real root together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: f64,
    pub multiplicity: usize,
}

/// Real roots of a polynomial with a bound on `|P(root)|` over all listed roots.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Root>,
    pub residual_bound: f64,
}

impl RootSet {
    /// Root values repeated according to multiplicity, ascending.
    pub fn flattened(&self) -> Vec<f64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
            .collect()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::new(vec![0.0, 1.0])
    }

    /// `a·x + b`.
    pub fn linear(a: f64, b: f64) -> Self {
        Self::new(vec![b, a])
    }

    /// `prefactor · ∏ (x − r)`.
    pub fn from_roots(prefactor: f64, roots: &[f64]) -> Self {
        let mut c = vec![prefactor];
        for &r in roots {
            let mut next = vec![0.0; c.len() + 1];
            for (k, &ck) in c.iter().enumerate() {
                next[k + 1] += ck;
                next[k] -= r * ck;
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    /// Largest absolute coefficient.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let mut p = 0.0;
        let mut dp = 0.0;
        for &c in self.coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `self(x + shift)` expanded.
    pub fn shifted(&self, shift: f64) -> Self {
        let lin = Self::linear(1.0, shift);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, &c| &(&acc * &lin) + &Self::constant(c))
    }

    /// Euclidean division `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let dd = divisor.degree();
        if self.degree() < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0.0; self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd] / lead;
            quot[k] = q;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= q * dc;
            }
        }
        rem.truncate(dd.max(1));
        Ok((Self::new(quot), Self::new(rem)))
    }

    fn check_finite(&self) -> Result<(), PolyError> {
        match self.coeffs.iter().position(|c| !c.is_finite()) {
            Some(index) => Err(PolyError::NonFiniteCoefficient {
                index,
                value: self.coeffs[index],
            }),
            None => Ok(()),
        }
    }

    /// Real roots from the eigenvalues of the companion matrix of the
    /// monic-normalized polynomial.
    ///
    /// Eigenvalues closer than `max(tol, 1e-6·(1+|z|))` are merged into one
    /// root whose multiplicity is the cluster size; a cluster counts as real
    /// when the imaginary part of its centroid is below the same threshold.
    /// The looser floor absorbs the `ε^{1/k}` splitting that rounding
    /// causes at a k-fold root. Simple real roots are polished by Newton steps.
    pub fn real_roots(&self, tol: f64) -> Result<RootSet, PolyError> {
        self.check_finite()?;
        if !(tol > 0.0) {
            return Err(PolyError::BadTolerance(tol));
        }
        let n = self.degree();
        if n == 0 {
            return Err(PolyError::ConstantPolynomial);
        }
        let lead = self.leading();
        let mut companion = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            companion[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            companion[(i, n - 1)] = -self.coeffs[i] / lead;
        }
        let eig = companion.complex_eigenvalues();
        let mut pts: Vec<(f64, f64)> = eig.iter().map(|z| (z.re, z.im)).collect();
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.partial_cmp(&b.1).unwrap()));

        let threshold = |re: f64, im: f64| tol.max(1e-6 * (1.0 + re.hypot(im)));
        let mut clusters: Vec<Vec<(f64, f64)>> = Vec::new();
        let mut used = vec![false; pts.len()];
        for i in 0..pts.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            let mut members = vec![pts[i]];
            let mut grew = true;
            while grew {
                grew = false;
                for j in 0..pts.len() {
                    if used[j] {
                        continue;
                    }
                    let close = members.iter().any(|m| {
                        let d = (m.0 - pts[j].0).hypot(m.1 - pts[j].1);
                        d < threshold(m.0, m.1)
                    });
                    if close {
                        used[j] = true;
                        members.push(pts[j]);
                        grew = true;
                    }
                }
            }
            clusters.push(members);
        }

        let mut roots = Vec::new();
        for members in clusters {
            let k = members.len() as f64;
            let re = members.iter().map(|m| m.0).sum::<f64>() / k;
            let im = members.iter().map(|m| m.1).sum::<f64>() / k;
            if im.abs() > threshold(re, im) {
                continue;
            }
            let value = if members.len() == 1 { self.newton_polish(re) } else { re };
            roots.push(Root {
                value,
                multiplicity: members.len(),
            });
        }
        roots.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap());
        let residual_bound = roots
            .iter()
            .map(|r| self.eval(r.value).abs())
            .fold(0.0, f64::max);
        Ok(RootSet {
            roots,
            residual_bound,
        })
    }

    fn newton_polish(&self, x0: f64) -> f64 {
        let mut x = x0;
        let mut best = (self.eval(x).abs(), x);
        for _ in 0..8 {
            let (p, dp) = self.eval_with_derivative(x);
            if dp == 0.0 || !p.is_finite() {
                break;
            }
            x -= p / dp;
            let r = self.eval(x).abs();
            if r < best.0 {
                best = (r, x);
            } else {
                break;
            }
        }
        best.1
    }
}

/// Evaluates `p` at `x`.
pub fn poly_eval(p: &Polynomial, x: f64) -> f64 {
    p.eval(x)
}

/// `prefactor · ∏ (x − rootᵢ)` expanded.
pub fn poly_from_roots(prefactor: f64, roots: &[f64]) -> Polynomial {
    Polynomial::from_roots(prefactor, roots)
}

/// Real roots of `p`, clustered at tolerance `tol`.
pub fn real_roots(p: &Polynomial, tol: f64) -> Result<RootSet, PolyError> {
    p.real_roots(tol)
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n)
            .map(|k| self.coeffs.get(k).unwrap_or(&0.0) + rhs.coeffs.get(k).unwrap_or(&0.0))
            .collect();
        Polynomial::new(c)
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scaled(-1.0)
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut c = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Polynomial::new(c)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0.0 && !(first && k == 0) {
                continue;
            }
            if !first {
                write!(f, " {} ", if c < 0.0 { '-' } else { '+' })?;
            } else if c < 0.0 {
                write!(f, "-")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}x")?,
                _ => write!(f, "{a}x^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}
