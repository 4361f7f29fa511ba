//! Quadratic algebras Q(3), their Jacobi constraints and the deformed
//! oscillator realization with its structure function.
//!
//! The algebra is `[A,B] = C` together with
//! `[A,C] = αA² + γ{A,B} + δA + εB + ζ` and
//! `[B,C] = aA² − γB² − α{A,B} + dA − δB + z`.
//! The coefficients δ, ε, d are affine and ζ, z quadratic in the energy `H`;
//! any other central values are folded into their coefficients.

use crate::poly::Polynomial;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QalgError {
    #[error("Jacobi identity violated: {relation} off by {residual:e}")]
    JacobiViolation { relation: &'static str, residual: f64 },
    #[error("gamma = 0 realization needs epsilon > 0, got {0}")]
    UnrealizableEpsilon(f64),
    #[error("closed-form structure function is only available for gamma != 0")]
    ClosedFormUnavailable,
    #[error("root function radicand is negative ({radicand:e}) in {context}")]
    ComplexRoot { context: &'static str, radicand: f64 },
    #[error("central element `{0}` is missing")]
    MissingCentral(String),
    #[error("hbar must be positive, got {0}")]
    NonPositiveHbar(f64),
    #[error("coefficient `{name}` has degree {degree} in H, at most {max} allowed")]
    DegreeTooHigh { name: &'static str, degree: usize, max: usize },
}

/// Scalar values of the central elements (energy, Casimirs of subalgebras,
/// charges, ħ) keyed by name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CentralAssignment {
    values: BTreeMap<String, f64>,
}

impl CentralAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.values.insert(name.to_string(), value);
        self
    }

    pub fn set(&mut self, name: &str, value: f64) {
        self.values.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Result<f64, QalgError> {
        self.values
            .get(name)
            .copied()
            .ok_or_else(|| QalgError::MissingCentral(name.to_string()))
    }

    /// ħ, which must be present and positive.
    pub fn hbar(&self) -> Result<f64, QalgError> {
        let h = self.get("hbar")?;
        if h > 0.0 {
            Ok(h)
        } else {
            Err(QalgError::NonPositiveHbar(h))
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &f64)> {
        self.values.iter()
    }
}

/// Unconstrained commutator data: `[A,C]` by (α, γ, δ, ε, ζ) and
/// `[B,C] = aA² + bB² + c{A,B} + dA + eB + z`.
#[derive(Debug, Clone, PartialEq)]
pub struct RawCommutators {
    pub alpha: f64,
    pub gamma: f64,
    pub delta: Polynomial,
    pub epsilon: Polynomial,
    pub zeta: Polynomial,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: Polynomial,
    pub e: Polynomial,
    pub z: Polynomial,
}

/// Structure constants of a Q(3) algebra as polynomials in the energy `H`,
/// together with the Casimir `K(H)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraSpec {
    pub alpha: f64,
    pub gamma: f64,
    pub a: f64,
    pub delta: Polynomial,
    pub epsilon: Polynomial,
    pub d: Polynomial,
    pub zeta: Polynomial,
    pub z: Polynomial,
    pub casimir: Polynomial,
}

/// All structure constants evaluated at one energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureConstants {
    pub alpha: f64,
    pub gamma: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub zeta: f64,
    pub a: f64,
    pub d: f64,
    pub z: f64,
    pub casimir: f64,
}

fn check_degree(name: &'static str, p: &Polynomial, max: usize) -> Result<(), QalgError> {
    if p.degree() > max {
        Err(QalgError::DegreeTooHigh {
            name,
            degree: p.degree(),
            max,
        })
    } else {
        Ok(())
    }
}

impl AlgebraSpec {
    /// Validates the degree pattern in `H`: δ, ε, d affine, ζ, z quadratic.
    pub fn new(
        alpha: f64,
        gamma: f64,
        a: f64,
        delta: Polynomial,
        epsilon: Polynomial,
        d: Polynomial,
        zeta: Polynomial,
        z: Polynomial,
        casimir: Polynomial,
    ) -> Result<Self, QalgError> {
        check_degree("delta", &delta, 1)?;
        check_degree("epsilon", &epsilon, 1)?;
        check_degree("d", &d, 1)?;
        check_degree("zeta", &zeta, 2)?;
        check_degree("z", &z, 2)?;
        Ok(Self {
            alpha,
            gamma,
            a,
            delta,
            epsilon,
            d,
            zeta,
            z,
            casimir,
        })
    }

    pub fn at(&self, energy: f64) -> StructureConstants {
        StructureConstants {
            alpha: self.alpha,
            gamma: self.gamma,
            delta: self.delta.eval(energy),
            epsilon: self.epsilon.eval(energy),
            zeta: self.zeta.eval(energy),
            a: self.a,
            d: self.d.eval(energy),
            z: self.z.eval(energy),
            casimir: self.casimir.eval(energy),
        }
    }
}

/// Imposes the Jacobi identity on raw commutator data: `b = −γ`, `c = −α`,
/// `e = −δ`, each within `1e−12` of the data scale.
pub fn enforce_jacobi(raw: &RawCommutators) -> Result<AlgebraSpec, QalgError> {
    let scale = [raw.alpha.abs(), raw.gamma.abs(), raw.b.abs(), raw.c.abs(), raw.delta.scale(), raw.e.scale()]
        .into_iter()
        .fold(1.0, f64::max);
    let tol = 1e-12 * scale;
    let checks = [
        ("b = -gamma", (raw.b + raw.gamma).abs()),
        ("c = -alpha", (raw.c + raw.alpha).abs()),
        ("e = -delta", (&raw.e + &raw.delta).scale()),
    ];
    for (relation, residual) in checks {
        if residual > tol {
            return Err(QalgError::JacobiViolation { relation, residual });
        }
    }
    AlgebraSpec::new(
        raw.alpha,
        raw.gamma,
        raw.a,
        raw.delta.clone(),
        raw.epsilon.clone(),
        raw.d.clone(),
        raw.zeta.clone(),
        raw.z.clone(),
        Polynomial::zero(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealizationCase {
    GammaZero,
    GammaNonzero,
}

/// Deformed oscillator realization `A = A(ℵ)`, `B = b(ℵ) + b†ρ(ℵ) + ρ(ℵ)b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscRealization {
    pub case: RealizationCase,
    pub u: f64,
    constants: StructureConstants,
}

/// Builds the realization at a fixed energy and representation parameter `u`.
pub fn realize(spec: &AlgebraSpec, energy: f64, u: f64) -> Result<OscRealization, QalgError> {
    let constants = spec.at(energy);
    let case = if constants.gamma == 0.0 {
        if !(constants.epsilon > 0.0) {
            return Err(QalgError::UnrealizableEpsilon(constants.epsilon));
        }
        RealizationCase::GammaZero
    } else {
        RealizationCase::GammaNonzero
    };
    Ok(OscRealization { case, u, constants })
}

impl OscRealization {
    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    pub fn a_of(&self, x: f64) -> f64 {
        let y = x + self.u;
        let c = &self.constants;
        match self.case {
            RealizationCase::GammaZero => c.epsilon.sqrt() * y,
            RealizationCase::GammaNonzero => {
                0.5 * c.gamma * (y * y - c.epsilon / (c.gamma * c.gamma) - 0.25)
            }
        }
    }

    /// `b(x)`; only defined for γ ≠ 0, returns `None` otherwise.
    pub fn b_of(&self, x: f64) -> Option<f64> {
        if self.case == RealizationCase::GammaZero {
            return None;
        }
        let y = x + self.u;
        let c = &self.constants;
        let g = c.gamma;
        Some(
            -c.alpha * (y * y - 0.25) / 4.0 + (c.alpha * c.epsilon - c.delta * g) / (2.0 * g * g)
                - (c.alpha * c.epsilon * c.epsilon - 2.0 * c.delta * c.epsilon * g + 4.0 * g * g * c.zeta)
                    / (4.0 * g.powi(4))
                    / (y * y - 0.25),
        )
    }

    /// `ρ(x)`; only defined for γ ≠ 0.
    pub fn rho_of(&self, x: f64) -> Option<f64> {
        if self.case == RealizationCase::GammaZero {
            return None;
        }
        let y = x + self.u;
        let g8 = self.constants.gamma.powi(8);
        Some(1.0 / (3.0 * 4096.0 * g8 * y * (1.0 + y) * (1.0 + 2.0 * y).powi(2)))
    }

    /// Residual of `(ΔA(x))² = γ(A(x) + A(x+1)) + ε`, with `ΔA(x) = A(x+1) − A(x)`.
    pub fn difference_relation_residual(&self, x: f64) -> f64 {
        let c = &self.constants;
        let da = self.a_of(x + 1.0) - self.a_of(x);
        da * da - c.gamma * (self.a_of(x) + self.a_of(x + 1.0)) - c.epsilon
    }

    /// Residual of `αA² + 2γAb + δA + εb + ζ = 0`; `None` for γ = 0.
    pub fn b_relation_residual(&self, x: f64) -> Option<f64> {
        let c = &self.constants;
        let a = self.a_of(x);
        let b = self.b_of(x)?;
        Some(c.alpha * a * a + 2.0 * c.gamma * a * b + c.delta * a + c.epsilon * b + c.zeta)
    }
}

/// The closed master formula for Φ (γ ≠ 0) at fixed structure constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedPhi {
    pub constants: StructureConstants,
}

impl ClosedPhi {
    /// Φ(x) with `y = x + u`.
    pub fn eval(&self, x: f64, u: f64) -> f64 {
        let StructureConstants {
            alpha: al,
            gamma: ga,
            delta: de,
            epsilon: ep,
            zeta: ze,
            a,
            d,
            z,
            casimir: k,
        } = self.constants;
        let y = x + u;
        let m1 = 2.0 * y - 1.0;
        let m3 = 2.0 * y - 3.0;
        let p1 = 2.0 * y + 1.0;
        let g2 = ga * ga;
        let g4 = g2 * g2;
        let g6 = g4 * g2;
        let g8 = g4 * g4;
        let s1 = al * al * ep - al * de * ga + a * ep * ga - d * g2;
        let s2 = al * ep * ep - 2.0 * de * ep * ga + 4.0 * g2 * ze;
        let s3 = 3.0 * al * al * ep * ep - 6.0 * al * de * ep * ga + 2.0 * a * ep * ep * ga + 2.0 * de * de * g2
            - 4.0 * d * ep * g2
            + 8.0 * ga * g2 * z
            + 4.0 * al * g2 * ze;
        let s4 = 3.0 * al * al * ep.powi(3) - 9.0 * al * de * ep * ep * ga + a * ep.powi(3) * ga
            + 6.0 * de * de * ep * g2
            - 3.0 * d * ep * ep * g2
            + 2.0 * de * de * g4
            + 2.0 * d * ep * g4
            + 12.0 * ep * ga * g2 * z
            - 4.0 * ga * g4 * z
            + 12.0 * al * ep * g2 * ze
            - 12.0 * de * ga * g2 * ze
            + 4.0 * al * g4 * ze;
        -3072.0 * g6 * k * m1 * m1 - 48.0 * g6 * s1 * m3 * m1.powi(4) * p1
            + g8 * (3.0 * al * al + 4.0 * a * ga) * m3 * m3 * m1.powi(4) * p1 * p1
            + 768.0 * s2 * s2
            + 32.0 * g4 * m1 * m1 * (12.0 * y * y - 12.0 * y - 1.0) * s3
            - 256.0 * g2 * m1 * m1 * s4
    }
}

/// Closed-form structure function of `spec` at `energy`; needs γ ≠ 0.
pub fn structure_function_closed(spec: &AlgebraSpec, energy: f64) -> Result<ClosedPhi, QalgError> {
    if spec.gamma == 0.0 {
        return Err(QalgError::ClosedFormUnavailable);
    }
    Ok(ClosedPhi {
        constants: spec.at(energy),
    })
}

/// Relation between the physical energy and the parameter `w` that enters
/// the factored structure function linearly.
pub trait EnergyLaw: Send + Sync {
    fn w_of_energy(&self, energy: f64) -> Result<f64, QalgError>;
    /// Closed inverse when one exists.
    fn energy_of_w(&self, w: f64) -> Option<f64>;
    /// Open interval of energies on which `w_of_energy` is real.
    fn energy_domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
    fn describe(&self) -> String;
}

/// `w = c₀ / (ħ√(−2E))`, bound Coulomb states.
#[derive(Debug, Clone, Copy)]
pub struct KeplerLaw {
    pub c0: f64,
    pub hbar: f64,
}

impl EnergyLaw for KeplerLaw {
    fn w_of_energy(&self, energy: f64) -> Result<f64, QalgError> {
        if !(energy < 0.0) {
            return Err(QalgError::ComplexRoot {
                context: "sqrt(-2E)",
                radicand: -2.0 * energy,
            });
        }
        Ok(self.c0 / (self.hbar * (-2.0 * energy).sqrt()))
    }
    fn energy_of_w(&self, w: f64) -> Option<f64> {
        (w != 0.0).then(|| -self.c0 * self.c0 / (2.0 * self.hbar * self.hbar * w * w))
    }
    fn energy_domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, 0.0)
    }
    fn describe(&self) -> String {
        "w = c0/(hbar sqrt(-2E))".into()
    }
}

/// `w = scale · E`, restricted to `w > 0`.
#[derive(Debug, Clone, Copy)]
pub struct LinearLaw {
    pub scale: f64,
}

impl EnergyLaw for LinearLaw {
    fn w_of_energy(&self, energy: f64) -> Result<f64, QalgError> {
        Ok(self.scale * energy)
    }
    fn energy_of_w(&self, w: f64) -> Option<f64> {
        Some(w / self.scale)
    }
    /// Oscillator-type spectra: only `w > 0` is physical.
    fn energy_domain(&self) -> (f64, f64) {
        if self.scale > 0.0 {
            (0.0, f64::INFINITY)
        } else {
            (f64::NEG_INFINITY, 0.0)
        }
    }
    fn describe(&self) -> String {
        format!("w = {} E", self.scale)
    }
}

/// `w = (p₀ + p₁E) / (q·√(r₀ + r₁E))`: the coupling-constant-metamorphosis
/// form of the curved-space monopole models.
#[derive(Debug, Clone, Copy)]
pub struct RatioSqrtLaw {
    pub num: [f64; 2],
    pub den_scale: f64,
    pub radicand: [f64; 2],
    pub label: &'static str,
}

impl RatioSqrtLaw {
    pub fn radicand_at(&self, energy: f64) -> f64 {
        self.radicand[0] + self.radicand[1] * energy
    }
}

impl EnergyLaw for RatioSqrtLaw {
    fn w_of_energy(&self, energy: f64) -> Result<f64, QalgError> {
        let r = self.radicand_at(energy);
        if !(r > 0.0) {
            return Err(QalgError::ComplexRoot {
                context: self.label,
                radicand: r,
            });
        }
        Ok((self.num[0] + self.num[1] * energy) / (self.den_scale * r.sqrt()))
    }
    fn energy_of_w(&self, w: f64) -> Option<f64> {
        if self.radicand[1] == 0.0 && self.radicand[0] > 0.0 && self.num[1] != 0.0 {
            Some((w * self.den_scale * self.radicand[0].sqrt() - self.num[0]) / self.num[1])
        } else {
            None
        }
    }
    fn energy_domain(&self) -> (f64, f64) {
        let [r0, r1] = self.radicand;
        if r1 > 0.0 {
            (-r0 / r1, f64::INFINITY)
        } else if r1 < 0.0 {
            (f64::NEG_INFINITY, -r0 / r1)
        } else {
            (f64::NEG_INFINITY, f64::INFINITY)
        }
    }
    fn describe(&self) -> String {
        format!("w = ({} + {} E)/({} sqrt({} + {} E))", self.num[0], self.num[1], self.den_scale, self.radicand[0], self.radicand[1])
    }
}

/// Sign labels `(ε₁, ε₂)` carried by a factor of the form `X − ½(1 + ε₁m₁ + ε₂m₂)`.
pub type BranchTag = (i8, i8);

/// One factor `x_coef·x + u_coef·u + w_coef·w + constant`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFactor {
    pub x_coef: f64,
    pub u_coef: f64,
    pub w_coef: f64,
    pub constant: f64,
    pub tag: Option<BranchTag>,
}

impl LinearFactor {
    /// `X − root` where `X = x + u`.
    pub fn shifted_root(root: f64) -> Self {
        Self {
            x_coef: 1.0,
            u_coef: 1.0,
            w_coef: 0.0,
            constant: -root,
            tag: None,
        }
    }

    pub fn tagged(mut self, tag: BranchTag) -> Self {
        self.tag = Some(tag);
        self
    }

    pub fn eval(&self, x: f64, u: f64, w: f64) -> f64 {
        self.x_coef * x + self.u_coef * u + self.w_coef * w + self.constant
    }
}

/// `Φ = prefactor(E) · ∏ factorᵢ(x, u, w(E))`.
#[derive(Clone)]
pub struct FactoredPhi {
    pub factors: Vec<LinearFactor>,
    pub prefactor: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub law: Arc<dyn EnergyLaw>,
}

impl fmt::Debug for FactoredPhi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FactoredPhi")
            .field("factors", &self.factors)
            .field("law", &self.law.describe())
            .finish()
    }
}

impl FactoredPhi {
    pub fn eval(&self, x: f64, u: f64, energy: f64) -> Result<f64, QalgError> {
        let w = self.law.w_of_energy(energy)?;
        Ok(self.eval_with_w(x, u, w, energy))
    }

    pub fn eval_with_w(&self, x: f64, u: f64, w: f64, energy: f64) -> f64 {
        self.factors
            .iter()
            .fold((self.prefactor)(energy), |acc, f| acc * f.eval(x, u, w))
    }

    /// Φ as an expanded polynomial in `x` at fixed `u` and energy.
    pub fn polynomial_in_x(&self, u: f64, energy: f64) -> Result<Polynomial, QalgError> {
        let w = self.law.w_of_energy(energy)?;
        Ok(self.factors.iter().fold(
            Polynomial::constant((self.prefactor)(energy)),
            |acc, f| &acc * &Polynomial::linear(f.x_coef, f.u_coef * u + f.w_coef * w + f.constant),
        ))
    }

    /// Zeros of every factor in the variable `x`, at fixed `u` and energy.
    pub fn roots_in_x(&self, u: f64, energy: f64) -> Result<Vec<f64>, QalgError> {
        let w = self.law.w_of_energy(energy)?;
        let mut r: Vec<f64> = self
            .factors
            .iter()
            .filter(|f| f.x_coef != 0.0)
            .map(|f| -(f.u_coef * u + f.w_coef * w + f.constant) / f.x_coef)
            .collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(r)
    }
}

/// Builds the factored structure function from its prefactor, the
/// `x + u`-roots that do not depend on the energy, and the energy pair
/// `½ ± w` common to the single-tower models.
pub fn structure_function_factored(
    prefactor: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    fixed_roots: &[(f64, Option<BranchTag>)],
    law: Arc<dyn EnergyLaw>,
) -> FactoredPhi {
    let mut factors: Vec<LinearFactor> = fixed_roots
        .iter()
        .map(|&(r, tag)| LinearFactor {
            tag,
            ..LinearFactor::shifted_root(r)
        })
        .collect();
    for s in [-1.0, 1.0] {
        factors.push(LinearFactor {
            x_coef: 1.0,
            u_coef: 1.0,
            w_coef: s,
            constant: -0.5,
            tag: None,
        });
    }
    FactoredPhi {
        factors,
        prefactor,
        law,
    }
}

/// Either form of the structure function.
#[derive(Debug, Clone)]
pub enum StructureFunction {
    Closed(ClosedPhi),
    Factored(FactoredPhi),
}
