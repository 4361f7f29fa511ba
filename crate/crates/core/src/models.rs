//! Catalog of superintegrable systems: parameters, quantum numbers, algebra
//! coefficients, factored structure functions, spectra and separated wave
//! factors.

use crate::poly::Polynomial;
use crate::qalg::{
    structure_function_closed, AlgebraSpec, BranchTag, ClosedPhi, FactoredPhi, KeplerLaw, LinearFactor, LinearLaw,
    QalgError, RatioSqrtLaw,
};
use crate::specfun::{
    exceptional_jacobi, ferrers_legendre, hyp1f1, jacobi, laguerre, EopParams, FunEval, SpecFunError,
};
use crate::unirrep::{
    boundary_solutions, evaluate_candidate, find_bracket, solve_transcendental, solve_unirreps, SpectrumCondition,
    USetLabel, UnirrepError, UnirrepSolution, TRANSCENDENTAL_TOL,
};
use crate::verify::SecondOrderOde;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

/// Named real values: model parameters or quantum numbers.
pub type Values = BTreeMap<String, f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("model {model} has no parameter `{name}`")]
    UnknownParameter { model: ModelId, name: String },
    #[error("model {model} has no quantum number `{name}`")]
    UnknownQuantumNumber { model: ModelId, name: String },
    #[error("`{name}` = {value} violates {constraint}")]
    InvalidValue { name: String, value: f64, constraint: String },
    #[error("negative radicand {value:e} in {quantity}")]
    NegativeRadicand { quantity: &'static str, value: f64 },
    #[error("model {0} has a transcendental spectrum, no closed form")]
    WrongKind(ModelId),
    #[error(transparent)]
    Algebra(#[from] QalgError),
    #[error(transparent)]
    Special(#[from] SpecFunError),
    #[error(transparent)]
    Unirrep(#[from] UnirrepError),
}

/// Stable identifiers of the cataloged systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelId {
    KcNd,
    DsoNd,
    TaubnutKepler,
    Ycm5d,
    MicFlat,
    MicTaubnut,
    EopKc,
}

impl ModelId {
    pub const ALL: [ModelId; 7] = [
        ModelId::KcNd,
        ModelId::DsoNd,
        ModelId::TaubnutKepler,
        ModelId::Ycm5d,
        ModelId::MicFlat,
        ModelId::MicTaubnut,
        ModelId::EopKc,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelId::KcNd => "kc_nd",
            ModelId::DsoNd => "dso_nd",
            ModelId::TaubnutKepler => "taubnut_kepler",
            ModelId::Ycm5d => "ycm_5d",
            ModelId::MicFlat => "mic_flat",
            ModelId::MicTaubnut => "mic_taubnut",
            ModelId::EopKc => "eop_kc",
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelId {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelId::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| ModelError::UnknownModel(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    ClosedForm,
    Transcendental,
}

impl SpectrumKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpectrumKind::ClosedForm => "closed_form",
            SpectrumKind::Transcendental => "transcendental",
        }
    }
}

/// Admissible range of a parameter or quantum number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    NonNegative,
    Positive,
    Real,
    IntegerAtLeast(i64),
    /// Non-negative multiple of ½.
    HalfInteger,
}

impl Domain {
    fn check(&self, v: f64) -> Result<(), String> {
        let ok = v.is_finite()
            && match self {
                Domain::NonNegative => v >= 0.0,
                Domain::Positive => v > 0.0,
                Domain::Real => true,
                Domain::IntegerAtLeast(m) => v == v.round() && v >= *m as f64,
                Domain::HalfInteger => v >= 0.0 && (2.0 * v) == (2.0 * v).round(),
            };
        if ok {
            Ok(())
        } else {
            Err(self.describe())
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Domain::NonNegative => ">= 0".into(),
            Domain::Positive => "> 0".into(),
            Domain::Real => "finite".into(),
            Domain::IntegerAtLeast(m) => format!("integer >= {m}"),
            Domain::HalfInteger => "non-negative multiple of 1/2".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamInfo {
    pub name: &'static str,
    pub default: f64,
    pub domain: Domain,
    pub doc: &'static str,
}

const fn info(name: &'static str, default: f64, domain: Domain, doc: &'static str) -> ParamInfo {
    ParamInfo {
        name,
        default,
        domain,
        doc,
    }
}

/// Static description of one cataloged system.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub id: ModelId,
    /// Configuration-space dimension at the default parameters.
    pub dimension: usize,
    pub params: Vec<ParamInfo>,
    pub qn_schema: Vec<ParamInfo>,
    pub spectrum: SpectrumKind,
    pub summary: &'static str,
    /// Meaning of the level index accepted by [`Model::spectrum_closed`] and [`Model::solve`].
    pub level_index: &'static str,
}

use Domain::*;

/// Description of `id`.
pub fn model_spec(id: ModelId) -> ModelSpec {
    match id {
        ModelId::KcNd => ModelSpec {
            id,
            dimension: 3,
            params: vec![
                info("N", 3.0, IntegerAtLeast(3), "space dimension"),
                info("c0", 1.0, NonNegative, "Coulomb coupling"),
                info("c1", 0.0, NonNegative, "coupling of 1/(r(r+x_N))"),
                info("c2", 0.0, NonNegative, "coupling of 1/(r(r-x_N))"),
                info("hbar", 1.0, Positive, "Planck constant"),
            ],
            qn_schema: vec![
                info("I", 0.0, IntegerAtLeast(0), "angular label of the (N-2)-sphere"),
                info("lam", 0.0, IntegerAtLeast(0), "Jacobi degree of the polar factor, l = lam + I"),
                info("nr", 0.0, IntegerAtLeast(0), "radial excitation"),
            ],
            spectrum: SpectrumKind::ClosedForm,
            summary: "N-dimensional Kepler-Coulomb system with two non-central terms",
            level_index: "p",
        },
        ModelId::DsoNd => ModelSpec {
            id,
            dimension: 4,
            params: vec![
                info("N", 4.0, IntegerAtLeast(2), "space dimension"),
                info("n", 2.0, IntegerAtLeast(1), "dimension of the first block"),
                info("c1", 0.0, NonNegative, "singular coupling of the first block"),
                info("c2", 0.0, NonNegative, "singular coupling of the second block"),
                info("omega", 1.0, Positive, "oscillator frequency"),
                info("hbar", 1.0, Positive, "Planck constant"),
            ],
            qn_schema: vec![
                info("l1", 0.0, IntegerAtLeast(0), "angular label of the first block"),
                info("l2", 0.0, IntegerAtLeast(0), "angular label of the second block"),
                info("n1", 0.0, IntegerAtLeast(0), "radial excitation of the first block"),
                info("n2", 0.0, IntegerAtLeast(0), "radial excitation of the second block"),
            ],
            spectrum: SpectrumKind::ClosedForm,
            summary: "N-dimensional double singular oscillator",
            level_index: "p",
        },
        ModelId::TaubnutKepler => ModelSpec {
            id,
            dimension: 4,
            params: vec![
                info("a", 1.0, Real, "metric coefficient of 1 in f(r) r"),
                info("b", 0.0, Real, "metric coefficient of r in f(r) r"),
                info("c0", 2.0, NonNegative, "Coulomb coupling"),
                info("c1", 0.0, Real, "metric coefficient of 1/r in 1/g(r)"),
                info("c2", 0.0, NonNegative, "coupling of 1/(r(r+z))"),
                info("c3", 0.0, NonNegative, "coupling of 1/(r(r-z))"),
                info("c4", 1.0, NonNegative, "constant potential term"),
                info("d", 0.0, Real, "constant term of 1/g(r)"),
            ],
            qn_schema: vec![
                info("nu1", 0.0, NonNegative, "azimuthal charge nu1"),
                info("nu2", 0.0, Real, "fibre charge nu2"),
                info("lam", 0.0, IntegerAtLeast(0), "Jacobi degree, l = lam + nu1"),
                info("nr", 0.0, IntegerAtLeast(0), "radial excitation, n = nr + l + 1"),
            ],
            spectrum: SpectrumKind::Transcendental,
            summary: "Kepler-type system on a generalized Taub-NUT space",
            level_index: "p = nr + lam",
        },
        ModelId::Ycm5d => ModelSpec {
            id,
            dimension: 5,
            params: vec![
                info("c0", 1.0, NonNegative, "Coulomb coupling"),
                info("c1", 0.0, NonNegative, "first non-central coupling"),
                info("c2", 0.0, NonNegative, "second non-central coupling"),
            ],
            qn_schema: vec![
                info("l4", 0.0, IntegerAtLeast(0), "so(4) label"),
                info("t", 0.0, HalfInteger, "su(2) label T"),
                info("j", 0.0, HalfInteger, "su(2) spin J of the separated problem"),
                info("l", 0.0, HalfInteger, "su(2) spin L of the separated problem"),
                info("k", 0.0, IntegerAtLeast(0), "Jacobi degree of the polar factor"),
                info("nr", 0.0, IntegerAtLeast(0), "radial excitation"),
                info("n1", 0.0, IntegerAtLeast(0), "first parabolic excitation"),
                info("n2", 0.0, IntegerAtLeast(0), "second parabolic excitation"),
            ],
            spectrum: SpectrumKind::ClosedForm,
            summary: "five-dimensional Kepler system with Yang-Coulomb monopole",
            level_index: "p",
        },
        ModelId::MicFlat => ModelSpec {
            id,
            dimension: 3,
            params: vec![info("omega", 1.0, Positive, "oscillator frequency")],
            qn_schema: vec![
                info("l3", 0.0, Real, "eigenvalue of L3"),
                info("q", 0.0, Real, "monopole charge Q"),
                info("n", 0.0, IntegerAtLeast(0), "radial excitation"),
                info("l", 0.0, NonNegative, "total angular momentum, l >= |Q|"),
            ],
            spectrum: SpectrumKind::ClosedForm,
            summary: "MIC-harmonic oscillator in flat space",
            level_index: "k = 2n + l",
        },
        ModelId::MicTaubnut => ModelSpec {
            id,
            dimension: 4,
            params: vec![
                info("a", 0.0, Real, "metric coefficient of r^2 in f(r)"),
                info("b", 1.0, Real, "constant term of f(r)"),
                info("c0", 2.0, NonNegative, "oscillator coupling"),
                info("c1", 0.0, Real, "constant term of 1/g(r)"),
                info("c4", 0.0, NonNegative, "constant potential term"),
                info("d", 0.0, Real, "metric coefficient of r^2 in 1/g(r)"),
            ],
            qn_schema: vec![
                info("nu1", 0.0, NonNegative, "azimuthal charge nu1"),
                info("nu2", 0.0, Real, "fibre charge nu2"),
                info("lam", 0.0, IntegerAtLeast(0), "Jacobi degree, l = lam + nu1"),
                info("nr", 0.0, IntegerAtLeast(0), "radial excitation"),
            ],
            spectrum: SpectrumKind::Transcendental,
            summary: "MIC-oscillator on a generalized Taub-NUT space",
            level_index: "n (radial excitation)",
        },
        ModelId::EopKc => ModelSpec {
            id,
            dimension: 3,
            params: vec![
                info("alpha", 1.0, NonNegative, "Coulomb coupling"),
                info("gamma", 2.0, Positive, "exceptional Jacobi parameter gamma"),
                info("delta", 4.0, Positive, "exceptional Jacobi parameter delta"),
            ],
            qn_schema: vec![
                info("m", 0.0, IntegerAtLeast(0), "Legendre degree"),
                info("n", 1.0, IntegerAtLeast(1), "exceptional Jacobi degree"),
                info("nr", 0.0, IntegerAtLeast(0), "radial excitation N"),
            ],
            spectrum: SpectrumKind::ClosedForm,
            summary: "Coulomb system with exceptional-Jacobi angular dependence",
            level_index: "N (radial excitation)",
        },
    }
}

/// All seven cataloged systems.
pub fn catalog() -> Vec<ModelSpec> {
    ModelId::ALL.into_iter().map(model_spec).collect()
}

/// Kind of a separated wave factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveFactorKind {
    LaguerreRadial,
    JacobiAngular,
    LegendreAngular,
    EopAngular,
    ConfluentRadial,
    Phase,
}

impl WaveFactorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            WaveFactorKind::LaguerreRadial => "laguerre_radial",
            WaveFactorKind::JacobiAngular => "jacobi_angular",
            WaveFactorKind::LegendreAngular => "legendre_angular",
            WaveFactorKind::EopAngular => "eop_angular",
            WaveFactorKind::ConfluentRadial => "confluent_radial",
            WaveFactorKind::Phase => "phase",
        }
    }
}

pub type FactorFn = Arc<dyn Fn(f64) -> Result<FunEval, SpecFunError> + Send + Sync>;

/// One separated factor of a wave function, with value and first derivative.
#[derive(Clone)]
pub struct WaveFactor {
    pub kind: WaveFactorKind,
    pub coordinate: &'static str,
    pub label: String,
    pub domain: (f64, f64),
    /// Interval on which residuals are sampled.
    pub sample_range: (f64, f64),
    pub eval: FactorFn,
}

impl fmt::Debug for WaveFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WaveFactor")
            .field("kind", &self.kind)
            .field("coordinate", &self.coordinate)
            .field("label", &self.label)
            .field("sample_range", &self.sample_range)
            .finish()
    }
}

/// A wave factor together with the ordinary differential equation it solves.
#[derive(Debug, Clone)]
pub struct SeparatedProblem {
    pub factor: WaveFactor,
    pub ode: SecondOrderOde,
}

/// Output of [`Model::solve`].
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solutions: Vec<UnirrepSolution>,
    pub notes: Vec<String>,
}

/// A cataloged system with validated parameter and quantum-number values.
#[derive(Debug, Clone)]
pub struct Model {
    pub spec: ModelSpec,
    params: Values,
    qn: Values,
}

fn pow_eval(base: f64, dbase: f64, p: f64) -> FunEval {
    if p == 0.0 {
        FunEval::constant(1.0)
    } else {
        FunEval::new(base.powf(p), p * base.powf(p - 1.0) * dbase)
    }
}

fn sqrt_checked(quantity: &'static str, value: f64) -> Result<f64, ModelError> {
    if value < 0.0 {
        Err(ModelError::NegativeRadicand { quantity, value })
    } else {
        Ok(value.sqrt())
    }
}

fn signs() -> [(i8, i8); 4] {
    [(1, 1), (1, -1), (-1, 1), (-1, -1)]
}

/// `(1 + cos θ)^{e₁} (1 − cos θ)^{e₂} P_k^{(a,b)}(cos θ)` with its θ-derivative.
fn polar_jacobi(k: usize, e1: f64, e2: f64, a: f64, b: f64, theta: f64) -> FunEval {
    let (s, c) = theta.sin_cos();
    pow_eval(1.0 + c, -s, e1)
        .mul(pow_eval(1.0 - c, s, e2))
        .mul(jacobi(k, a, b, c).chain(-s))
}

/// `e^{−z/2} z^s ₁F₁(a; c; z)` at `z = scale·x^power`, differentiated in `x`.
fn confluent(a: f64, c: f64, s: f64, scale: f64, power: i32, x: f64) -> Result<FunEval, SpecFunError> {
    let z = scale * x.powi(power);
    let dz = scale * power as f64 * x.powi(power - 1);
    let f = hyp1f1(a, c, z)?;
    Ok(FunEval::new((-z / 2.0).exp(), -0.5 * (-z / 2.0).exp())
        .mul(pow_eval(z, 1.0, s))
        .mul(f)
        .chain(dz))
}

impl Model {
    /// Fills defaults, rejects unknown names and validates every value.
    pub fn new(id: ModelId, params: &Values, qn: &Values) -> Result<Self, ModelError> {
        let spec = model_spec(id);
        let mut p: Values = spec.params.iter().map(|i| (i.name.to_string(), i.default)).collect();
        let mut q: Values = spec.qn_schema.iter().map(|i| (i.name.to_string(), i.default)).collect();
        for (k, v) in params {
            if !p.contains_key(k) {
                return Err(ModelError::UnknownParameter {
                    model: id,
                    name: k.clone(),
                });
            }
            p.insert(k.clone(), *v);
        }
        for (k, v) in qn {
            if !q.contains_key(k) {
                return Err(ModelError::UnknownQuantumNumber {
                    model: id,
                    name: k.clone(),
                });
            }
            q.insert(k.clone(), *v);
        }
        for i in spec.params.iter().chain(spec.qn_schema.iter()) {
            let v = p.get(i.name).or_else(|| q.get(i.name)).copied().unwrap_or(i.default);
            i.domain.check(v).map_err(|constraint| ModelError::InvalidValue {
                name: i.name.to_string(),
                value: v,
                constraint,
            })?;
        }
        let model = Self { spec, params: p, qn: q };
        model.check_relations()?;
        Ok(model)
    }

    /// The model at its documented defaults.
    pub fn with_defaults(id: ModelId) -> Self {
        Self::new(id, &Values::new(), &Values::new()).expect("defaults are admissible")
    }

    pub fn id(&self) -> ModelId {
        self.spec.id
    }

    pub fn params(&self) -> &Values {
        &self.params
    }

    pub fn quantum_numbers(&self) -> &Values {
        &self.qn
    }

    fn p(&self, name: &str) -> f64 {
        self.params[name]
    }

    fn q(&self, name: &str) -> f64 {
        self.qn[name]
    }

    fn qi(&self, name: &str) -> usize {
        self.qn[name] as usize
    }

    fn check_relations(&self) -> Result<(), ModelError> {
        let bad = |name: &str, value: f64, constraint: &str| {
            Err(ModelError::InvalidValue {
                name: name.to_string(),
                value,
                constraint: constraint.to_string(),
            })
        };
        match self.id() {
            ModelId::DsoNd => {
                if self.p("n") > self.p("N") - 1.0 {
                    return bad("n", self.p("n"), "n <= N - 1");
                }
            }
            ModelId::EopKc => {
                if self.p("gamma") == self.p("delta") {
                    return bad("delta", self.p("delta"), "delta != gamma");
                }
            }
            ModelId::MicFlat
                if self.q("l") < self.q("q").abs() => {
                    return bad("l", self.q("l"), "l >= |q|");
                }
            _ => {}
        }
        Ok(())
    }

    /// Auxiliary quantities (δᵢ, αᵢ, mᵢ and similar) at the current quantum numbers.
    pub fn auxiliary(&self) -> Result<BTreeMap<&'static str, f64>, ModelError> {
        let mut out = BTreeMap::new();
        match self.id() {
            ModelId::KcNd => {
                let (d1, d2) = self.kc_deltas()?;
                let shift = self.q("I") + (self.p("N") - 3.0) / 2.0;
                out.insert("delta1", d1);
                out.insert("delta2", d2);
                out.insert("m1", d1 + shift);
                out.insert("m2", d2 + shift);
            }
            ModelId::DsoNd => {
                let [(d1, a1), (d2, a2)] = self.dso_towers()?;
                out.insert("delta1", d1);
                out.insert("delta2", d2);
                out.insert("alpha1", a1);
                out.insert("alpha2", a2);
                out.insert("m1", 2.0 * a1);
                out.insert("m2", 2.0 * a2);
            }
            ModelId::TaubnutKepler => {
                let (d1, d2) = self.taubnut_deltas();
                out.insert("delta1", d1);
                out.insert("delta2", d2);
                out.insert("m1", d1 + self.q("nu1"));
                out.insert("m2", d2 + self.q("nu1"));
            }
            ModelId::Ycm5d => {
                let (m1, m2) = self.ycm_m()?;
                let (d1, d2) = self.ycm_deltas();
                out.insert("m1", m1);
                out.insert("m2", m2);
                out.insert("delta1", d1);
                out.insert("delta2", d2);
            }
            ModelId::MicFlat => {
                out.insert("k", 2.0 * self.q("n") + self.q("l"));
            }
            ModelId::MicTaubnut => {
                let l = self.q("nu1") + self.q("lam") - self.q("nu2");
                out.insert("k1", l * (l + 1.0));
            }
            ModelId::EopKc => {
                let mu = self.eop_mu();
                out.insert("mu", mu);
                out.insert("b", self.eop_params()?.b_eop());
                out.insert("rho", 2.0 * self.q("m") + 1.0);
            }
        }
        Ok(out)
    }

    fn kc_deltas(&self) -> Result<(f64, f64), ModelError> {
        let h2 = self.p("hbar").powi(2);
        let i = self.q("I");
        let shift = (self.p("N") - 3.0) / 2.0;
        let d = |c: f64| -> Result<f64, ModelError> {
            Ok(sqrt_checked("kc delta", (i + shift).powi(2) + 4.0 * c / h2)? - shift - i)
        };
        Ok((d(self.p("c1"))?, d(self.p("c2"))?))
    }

    /// `(δᵢ, αᵢ)` of the two oscillator blocks.
    fn dso_towers(&self) -> Result<[(f64, f64); 2], ModelError> {
        let h2 = self.p("hbar").powi(2);
        let dims = [self.p("n"), self.p("N") - self.p("n")];
        let ls = [self.q("l1"), self.q("l2")];
        let cs = [self.p("c1"), self.p("c2")];
        let mut out = [(0.0, 0.0); 2];
        for k in 0..2 {
            let half = (dims[k] - 2.0) / 2.0;
            let alpha = sqrt_checked("dso alpha", (ls[k] + half).powi(2) + 2.0 * cs[k] / h2)?;
            out[k] = ((alpha - half - ls[k]) / 2.0, alpha);
        }
        Ok(out)
    }

    fn taubnut_deltas(&self) -> (f64, f64) {
        let (nu1, nu2) = (self.q("nu1"), self.q("nu2"));
        let c2 = self.p("c2");
        let c3 = self.p("c3");
        ((c2 + (nu1 - 2.0 * nu2).powi(2)).sqrt() - nu1, (c3 + nu1 * nu1).sqrt() - nu1)
    }

    fn ycm_m(&self) -> Result<(f64, f64), ModelError> {
        let l = self.q("l4") * (self.q("l4") + 2.0);
        let t = self.q("t") * (self.q("t") + 1.0);
        Ok((
            sqrt_checked("ycm m1", 1.0 + 2.0 * self.p("c1") + l + 2.0 * t)?,
            sqrt_checked("ycm m2", 1.0 + 2.0 * self.p("c2") + l - 2.0 * t)?,
        ))
    }

    fn ycm_deltas(&self) -> (f64, f64) {
        let (j, l) = (self.q("j"), self.q("l"));
        (
            ycm_delta(self.p("c1"), j),
            ycm_delta(self.p("c2"), l),
        )
    }

    fn eop_params(&self) -> Result<EopParams, ModelError> {
        Ok(EopParams::new(self.p("gamma"), self.p("delta"))?)
    }

    fn eop_mu(&self) -> f64 {
        self.q("n") + (self.p("gamma") + self.p("delta") - 1.0) / 2.0
    }

    /// Q(3) coefficients and Casimir as polynomials in the energy, for the
    /// models whose algebra is quadratic.
    pub fn algebra(&self) -> Option<AlgebraSpec> {
        let pl = |c: Vec<f64>| Polynomial::new(c);
        let spec = match self.id() {
            ModelId::KcNd => {
                let (n, h, c0, c1, c2) = (self.p("N"), self.p("hbar"), self.p("c0"), self.p("c1"), self.p("c2"));
                let (h2, h4, h6) = (h * h, h.powi(4), h.powi(6));
                let i = self.q("I");
                let j2 = h2 * i * (i + n - 3.0);
                let z = pl(vec![
                    2.0 * h2 * c0 * c0,
                    -4.0 * h2 * j2 + (n - 1.0).powi(2) * h4 - 8.0 * h2 * (c1 + c2),
                ]);
                let k = pl(vec![
                    4.0 * h2 * c0 * c0 * j2 + 8.0 * h2 * (c1 + c2) * c0 * c0 - 2.0 * (n - 3.0) * h4 * c0 * c0,
                    2.0 * (n - 3.0) * (n - 1.0) * h4 * j2 - 8.0 * h2 * (c1 - c2).powi(2)
                        + 4.0 * (n - 3.0) * (n - 1.0) * (c1 + c2) * h4
                        - h6 * (n - 3.0) * (n - 1.0).powi(2),
                ]);
                AlgebraSpec::new(
                    0.0,
                    2.0 * h2,
                    0.0,
                    Polynomial::zero(),
                    pl(vec![(n - 1.0) * (n - 3.0) * h4]),
                    pl(vec![0.0, 8.0 * h2]),
                    pl(vec![-4.0 * (c1 - c2) * h2 * c0]),
                    z,
                    k,
                )
            }
            ModelId::DsoNd => {
                let (nt, n, h, w, c1, c2) =
                    (self.p("N"), self.p("n"), self.p("hbar"), self.p("omega"), self.p("c1"), self.p("c2"));
                let (h2, h4) = (h * h, h.powi(4));
                let w2 = w * w;
                let (l1, l2) = (self.q("l1"), self.q("l2"));
                let j = h2 * l1 * (l1 + n - 2.0);
                let k2 = h2 * l2 * (l2 + nt - n - 2.0);
                let zeta = pl(vec![
                    0.0,
                    -h2 * j + h2 * k2 - h2 / 4.0 * (8.0 * c1 - 8.0 * c2 - (nt - 4.0) * (nt - 2.0 * n) * h2),
                ]);
                let z = pl(vec![
                    4.0 * h2 * w2 * j + 4.0 * h2 * w2 * k2 + 8.0 * h2 * w2 * (c1 + c2 - h2 * n * (nt - n) / 4.0),
                    0.0,
                    2.0 * h2,
                ]);
                let k0 = h2 * w2 * j * j + h2 * w2 * k2 * k2 - 2.0 * h2 * w2 * j * k2
                    + 4.0 * h2 * w2 * (c1 - c2 - 0.25 * (nt - 4.0) * (nt - n) * h2) * j
                    - 4.0 * h2 * w2 * (c1 - c2 + 0.25 * n * (nt - 4.0) * h2) * k2
                    + 4.0
                        * h2
                        * w2
                        * ((c1 - c2).powi(2) - 0.5 * (nt - n) * (nt - 4.0) * h2 * c1 - 0.5 * n * (nt - 4.0) * h2 * c2
                            + 0.25 * n * (nt - n) * (nt - 4.0) * h4);
                let k_2 = 2.0 * h2 * j + 2.0 * h2 * k2
                    + h2 / 4.0 * (16.0 * c1 + 16.0 * c2 - (4.0 * (nt - 4.0) - (nt - 2.0 * n).powi(2)) * h2);
                AlgebraSpec::new(
                    0.0,
                    2.0 * h2,
                    0.0,
                    Polynomial::zero(),
                    pl(vec![h4 * nt * (nt - 4.0) / 4.0]),
                    pl(vec![-16.0 * h2 * w2]),
                    zeta,
                    z,
                    pl(vec![k0, 0.0, k_2]),
                )
            }
            ModelId::TaubnutKepler => {
                let (a, b, c0, c1, c2, c3, c4, d) = (
                    self.p("a"),
                    self.p("b"),
                    self.p("c0"),
                    self.p("c1"),
                    self.p("c2"),
                    self.p("c3"),
                    self.p("c4"),
                    self.p("d"),
                );
                let q = self.q("nu2");
                let l3 = self.q("nu1") - q;
                let (q2, q3, q4, q6) = (q * q, q.powi(3), q.powi(4), q.powi(6));
                let l32 = l3 * l3;
                let zeta = pl(vec![
                    2.0 * c1 * q3 * l3 + c0 * q * l3 - 0.5 * c1 * (c2 - c3) * q2 - 0.25 * c0 * (c2 - c3),
                    -4.0 * a * q * l3 + a * (c2 - c3),
                ]);
                let z = pl(vec![
                    0.5 * (c1 * c1 + 4.0 * d) * q4 + 2.0 * d * q2 * l32 + 0.5 * (c0 * c1 + 4.0 * c4 - 4.0 * d) * q2
                        + 2.0 * c4 * l32
                        + (c0 * c0 - 16.0 * c4) / 8.0,
                    -2.0 * (a * c1 + 2.0 * b) * q2 - 4.0 * b * l32 + (4.0 * b - a * c0),
                    2.0 * a * a,
                ]);
                let k2 = 4.0 * a * a * l32 + 4.0 * a * a * q2 + a * a * (c2 + c3);
                let k1 = -4.0 * a * c1 * q4 - 4.0 * (2.0 * b + a * c1) * q2 * l32
                    - (2.0 * a * c0 - 2.0 * b * c2 + a * c1 * c2 - 2.0 * b * c3 + a * c1 * c3) * q2
                    - 2.0 * (a * c0 - b * c2 - b * c3) * l32
                    - 0.5 * (4.0 * b * c2 + a * c0 * c2 + 4.0 * b * c3 + a * c0 * c3 - 4.0 * b * c2 * c3)
                    + 4.0 * b * (c2 - c3) * q * l3;
                let k0 = c1 * c1 * q6 + (c1 * c1 + 4.0 * d) * q4 * l32
                    + 0.25 * (4.0 * c0 * c1 + c1 * c1 * c2 + c1 * c1 * c3 - 4.0 * c2 * d - 4.0 * c3 * d) * q4
                    + (c0 * c1 + 4.0 * c4 - c2 * d - c3 * d) * q2 * l32
                    - 2.0 * d * (c2 - c3) * l3 * q3
                    + 0.25
                        * (c0 * c0 + c0 * c1 * c2 + c0 * c1 * c3 - 4.0 * c2 * c4 - 4.0 * c3 * c4 + 4.0 * c2 * d
                            + 4.0 * c3 * d
                            - 4.0 * c2 * c3 * d)
                        * q2
                    - 2.0 * c4 * (c2 - c3) * q * l3
                    + 0.25 * (c0 * c0 - 4.0 * c2 * c4 - 4.0 * c3 * c4) * l32
                    + (c0 * c0 * c2 + c0 * c0 * c3 + 16.0 * c2 * c4 + 16.0 * c3 * c4 - 16.0 * c2 * c3 * c4) / 16.0;
                AlgebraSpec::new(
                    0.0,
                    2.0,
                    0.0,
                    Polynomial::zero(),
                    pl(vec![c2 + c3]),
                    pl(vec![-4.0 * d * q2 - 4.0 * c4, 8.0 * b]),
                    zeta,
                    z,
                    pl(vec![k0, k1, k2]),
                )
            }
            ModelId::Ycm5d => {
                let (c0, c1, c2) = (self.p("c0"), self.p("c1"), self.p("c2"));
                let l = self.q("l4") * (self.q("l4") + 2.0);
                let t = self.q("t") * (self.q("t") + 1.0);
                AlgebraSpec::new(
                    0.0,
                    2.0,
                    0.0,
                    Polynomial::zero(),
                    pl(vec![8.0]),
                    pl(vec![0.0, 8.0]),
                    pl(vec![-2.0 * c0 * (c1 - c2) - 4.0 * c0 * t]),
                    pl(vec![2.0 * c0 * c0, -4.0 * l + 16.0 - 4.0 * c1 - 4.0 * c2]),
                    pl(vec![
                        4.0 * c0 * c0 * l + 4.0 * c0 * c0 * (c1 + c2 - 1.0),
                        -8.0 * t * t + 16.0 * l - 8.0 * (c1 - c2) * t - 2.0 * ((c1 - c2).powi(2) + 8.0 * (2.0 - c1 - c2)),
                    ]),
                )
            }
            _ => return None,
        };
        Some(spec.expect("cataloged coefficients have admissible degrees"))
    }

    /// Closed master-formula structure function at `energy`.
    pub fn closed_phi(&self, energy: f64) -> Result<Option<ClosedPhi>, ModelError> {
        match self.algebra() {
            Some(spec) => Ok(Some(structure_function_closed(&spec, energy)?)),
            None => Ok(None),
        }
    }

    /// Factored structure function `ν₀(E) ∏ (linear factors)`.
    ///
    /// For `eop_kc` this is the first tower restricted to the family
    /// `u₂ = u₁ + ½`, on which the second tower vanishes identically.
    pub fn structure_function(&self) -> Result<FactoredPhi, ModelError> {
        let quartic = |m1: f64, m2: f64, base: f64, div: f64| -> Vec<(f64, Option<BranchTag>)> {
            signs()
                .into_iter()
                .map(|(e1, e2)| ((base + e1 as f64 * m1 + e2 as f64 * m2) / div, Some((e1, e2))))
                .collect()
        };
        let phi = match self.id() {
            ModelId::KcNd => {
                let aux = self.auxiliary()?;
                let h = self.p("hbar");
                let pre = 6291456.0 * h.powi(18);
                crate::qalg::structure_function_factored(
                    Arc::new(move |e| pre * e),
                    &quartic(aux["m1"], aux["m2"], 1.0, 2.0),
                    Arc::new(KeplerLaw { c0: self.p("c0"), hbar: h }),
                )
            }
            ModelId::DsoNd => {
                let aux = self.auxiliary()?;
                let (h, w) = (self.p("hbar"), self.p("omega"));
                let pre = -12582912.0 * h.powi(18) * w * w;
                crate::qalg::structure_function_factored(
                    Arc::new(move |_| pre),
                    &quartic(aux["m1"], aux["m2"], 2.0, 4.0),
                    Arc::new(LinearLaw { scale: 1.0 / (2.0 * h * w) }),
                )
            }
            ModelId::TaubnutKepler => {
                let aux = self.auxiliary()?;
                let (a, b, c0, c1, c4, d) =
                    (self.p("a"), self.p("b"), self.p("c0"), self.p("c1"), self.p("c4"), self.p("d"));
                let q2 = self.q("nu2").powi(2);
                crate::qalg::structure_function_factored(
                    Arc::new(move |e| -3145728.0 * (c4 - 2.0 * b * e + d * q2)),
                    &quartic(aux["m1"], aux["m2"], 1.0, 2.0),
                    Arc::new(RatioSqrtLaw {
                        num: [c0 + 2.0 * c1 * q2, -4.0 * a],
                        den_scale: 4.0,
                        radicand: [c4 + d * q2, -2.0 * b],
                        label: "c4 - 2bE + d nu2^2",
                    }),
                )
            }
            ModelId::Ycm5d => {
                let (m1, m2) = self.ycm_m()?;
                ycm_phi(self.p("c0"), m1, m2)
            }
            ModelId::MicFlat => self.mic_flat_phi(),
            ModelId::MicTaubnut => self.mic_taubnut_phi(),
            ModelId::EopKc => {
                let lin = |xc: f64, wc: f64, c: f64| LinearFactor {
                    x_coef: xc,
                    u_coef: xc,
                    w_coef: wc,
                    constant: c,
                    tag: None,
                };
                FactoredPhi {
                    factors: vec![lin(4.0, 0.0, 0.0), lin(2.0, -1.0, -1.0), lin(2.0, 1.0, -1.0)],
                    prefactor: Arc::new(|e| e),
                    law: Arc::new(KeplerLaw {
                        c0: self.p("alpha"),
                        hbar: 1.0,
                    }),
                }
            }
        };
        Ok(phi)
    }

    fn mic_flat_phi(&self) -> FactoredPhi {
        let w = self.p("omega");
        let (l3, q) = (self.q("l3"), self.q("q"));
        // Factors in X = 2x + u.
        let f = |k: f64, wc: f64, c: f64, tag: Option<BranchTag>| LinearFactor {
            x_coef: 2.0 * k,
            u_coef: k,
            w_coef: wc,
            constant: c,
            tag,
        };
        let mut factors = vec![
            f(1.0, 0.0, 0.0, None),
            f(1.0, 0.0, -2.0, None),
            f(w, 1.0, -3.0 * w, Some((1, 1))),
            f(w, 1.0, -3.0 * w, Some((1, 1))),
            f(-w, 1.0, w, Some((1, -1))),
            f(w, 1.0, -w, Some((-1, 1))),
        ];
        for (charge, slot) in [(l3, 0), (q, 1)] {
            for s in [1i8, -1] {
                let tag = if slot == 0 { (s, 0) } else { (0, s) };
                for c in [-3.0, -1.0] {
                    factors.push(f(2.0, 0.0, -2.0 * s as f64 * charge + c, Some(tag)));
                }
            }
        }
        let pre = 1.0 / (16384.0 * w.powi(6));
        FactoredPhi {
            factors,
            prefactor: Arc::new(move |_| pre),
            law: Arc::new(LinearLaw { scale: 1.0 }),
        }
    }

    fn mic_taubnut_phi(&self) -> FactoredPhi {
        let (a, b, c0, c1, c4, d) = (self.p("a"), self.p("b"), self.p("c0"), self.p("c1"), self.p("c4"), self.p("d"));
        let (l3, q) = (self.q("nu1"), self.q("nu2"));
        let f = |k: f64, wc: f64, c: f64| LinearFactor {
            x_coef: 2.0 * k,
            u_coef: k,
            w_coef: wc,
            constant: c,
            tag: None,
        };
        let factors = vec![
            f(1.0, 0.0, -2.0),
            f(2.0, 0.0, -3.0),
            f(2.0, 0.0, -3.0),
            f(2.0, 0.0, -2.0 * l3 - 1.0),
            f(2.0, 0.0, -1.0),
            f(2.0, 0.0, -2.0 * l3 - 3.0),
            f(2.0, 0.0, -5.0),
            f(2.0, 0.0, -2.0 * l3 - 4.0 * q - 3.0),
            f(2.0, 0.0, -4.0 * q - 1.0),
            f(2.0, 0.0, -4.0 * q - 3.0),
            f(2.0, 0.0, -2.0 * l3 - 4.0 * q - 1.0),
            f(-1.0, 1.0, q + 1.0),
            f(1.0, 1.0, -q - 1.0),
        ];
        let q2 = q * q;
        FactoredPhi {
            factors,
            prefactor: Arc::new(move |e| -(c0 / 2.0 - 2.0 * a * e + d * q2) / 64.0),
            law: Arc::new(RatioSqrtLaw {
                num: [c4 + c1 * q2, -2.0 * b],
                den_scale: 2.0,
                radicand: [c0 / 2.0 + d * q2, -2.0 * a],
                label: "c0/2 - 2aE + d nu2^2",
            }),
        }
    }

    /// Closed energy of level `level` (see [`ModelSpec::level_index`]).
    pub fn spectrum_closed(&self, level: usize) -> Result<f64, ModelError> {
        let lv = level as f64;
        match self.id() {
            ModelId::KcNd => {
                let aux = self.auxiliary()?;
                Ok(kepler_energy(self.p("c0"), self.p("hbar"), lv + 1.0 + (aux["m1"] + aux["m2"]) / 2.0))
            }
            ModelId::DsoNd => {
                let aux = self.auxiliary()?;
                Ok(2.0 * self.p("hbar") * self.p("omega") * (lv + 1.0 + (aux["alpha1"] + aux["alpha2"]) / 2.0))
            }
            ModelId::Ycm5d => {
                let (m1, m2) = self.ycm_m()?;
                Ok(kepler_energy(self.p("c0"), 1.0, lv + 1.0 + (m1 + m2) / 2.0))
            }
            ModelId::MicFlat => Ok(self.p("omega") * (lv + 1.5)),
            ModelId::EopKc => {
                let a = self.p("alpha");
                Ok(-a * a / (8.0 * (lv + self.q("m") + 1.0).powi(2)))
            }
            ModelId::TaubnutKepler | ModelId::MicTaubnut => Err(ModelError::WrongKind(self.id())),
        }
    }

    /// Spectrum law of the model: closed form, or the residual whose root
    /// is the energy of the given level.
    pub fn spectrum_condition(&self, level: usize) -> Result<SpectrumCondition<'_>, ModelError> {
        match self.id() {
            ModelId::TaubnutKepler => {
                let (d1, d2) = self.taubnut_deltas();
                let n = level as f64 + self.q("nu1") + 1.0;
                let target = n + (d1 + d2) / 2.0;
                let m = self.clone();
                Ok(SpectrumCondition::Transcendental {
                    residual: Box::new(move |e| m.taubnut_lhs(e) - target),
                    domain: self.taubnut_domain(),
                })
            }
            ModelId::MicTaubnut => {
                let l = self.q("nu1") + self.q("lam");
                let target = 4.0 * level as f64 + 2.0 * l - 2.0 * self.q("nu2") + 3.0;
                let m = self.clone();
                Ok(SpectrumCondition::Transcendental {
                    residual: Box::new(move |e| m.mic_taubnut_lhs(e) - target),
                    domain: self.mic_taubnut_domain(),
                })
            }
            _ => {
                let m = self.clone();
                Ok(SpectrumCondition::Closed(Box::new(move |lv| {
                    m.spectrum_closed(lv).unwrap_or(f64::NAN)
                })))
            }
        }
    }

    /// `(2aE − c₁ν₂² − c₀/2) / (2√(c₄ − 2bE + dν₂²))`.
    pub fn taubnut_lhs(&self, e: f64) -> f64 {
        let q2 = self.q("nu2").powi(2);
        let rad = self.p("c4") - 2.0 * self.p("b") * e + self.p("d") * q2;
        if rad <= 0.0 {
            return f64::NAN;
        }
        (2.0 * self.p("a") * e - self.p("c1") * q2 - self.p("c0") / 2.0) / (2.0 * rad.sqrt())
    }

    fn taubnut_domain(&self) -> (f64, f64) {
        let r0 = self.p("c4") + self.p("d") * self.q("nu2").powi(2);
        open_domain(r0, -2.0 * self.p("b"))
    }

    /// `(2bE − c₁ν₂² − c₄) / √(c₀/2 − 2aE + dν₂²)`.
    pub fn mic_taubnut_lhs(&self, e: f64) -> f64 {
        let q2 = self.q("nu2").powi(2);
        let rad = self.p("c0") / 2.0 - 2.0 * self.p("a") * e + self.p("d") * q2;
        if rad <= 0.0 {
            return f64::NAN;
        }
        (2.0 * self.p("b") * e - self.p("c1") * q2 - self.p("c4")) / rad.sqrt()
    }

    fn mic_taubnut_domain(&self) -> (f64, f64) {
        let r0 = self.p("c0") / 2.0 + self.p("d") * self.q("nu2").powi(2);
        open_domain(r0, -2.0 * self.p("a"))
    }

    /// Energy of level `level` from the model's spectrum law.
    pub fn energy(&self, level: usize) -> Result<f64, ModelError> {
        match self.spectrum_condition(level)? {
            SpectrumCondition::Closed(f) => Ok(f(level)),
            SpectrumCondition::Transcendental { residual, domain } => {
                let (lo, hi) = find_bracket(residual.as_ref(), domain)?;
                Ok(solve_transcendental(residual.as_ref(), (lo, hi), TRANSCENDENTAL_TOL)?)
            }
        }
    }

    /// Energy of the state described by the separated quantum numbers.
    pub fn separated_energy(&self) -> Result<f64, ModelError> {
        match self.id() {
            ModelId::KcNd => {
                let (d1, d2) = self.kc_deltas()?;
                let s = self.q("I") + self.q("lam") + (d1 + d2) / 2.0;
                Ok(kepler_energy(self.p("c0"), self.p("hbar"), self.q("nr") + s + (self.p("N") - 1.0) / 2.0))
            }
            ModelId::DsoNd => {
                let [(_, a1), (_, a2)] = self.dso_towers()?;
                let hw = self.p("hbar") * self.p("omega");
                Ok(hw * (2.0 * self.q("n1") + a1 + 1.0) + hw * (2.0 * self.q("n2") + a2 + 1.0))
            }
            ModelId::TaubnutKepler => self.energy(self.qi("nr") + self.qi("lam")),
            ModelId::Ycm5d => {
                let (d1, d2) = self.ycm_deltas();
                let lambda = self.q("k") + (self.q("j") + self.q("l")) / 2.0;
                Ok(kepler_energy(self.p("c0"), 1.0, self.q("nr") + lambda + 2.0 + (d1 + d2) / 2.0))
            }
            ModelId::MicFlat => self.spectrum_closed(2 * self.qi("n") + self.q("l") as usize)
                .map(|e| e + self.p("omega") * self.q("l").fract()),
            ModelId::MicTaubnut => self.energy(self.qi("nr")),
            ModelId::EopKc => self.spectrum_closed(self.qi("nr")),
        }
    }

    /// Finite-dimensional representations of dimension `p+1`.
    ///
    /// Models with a quadratic algebra or a single-tower factored form use
    /// the generic boundary/positivity solver. `mic_taubnut` takes its energy
    /// from the spectrum law and reports the representation parameter that
    /// zeroes the energy factor at `x = 0`. `eop_kc` reports every boundary
    /// solution of the first tower, positive or not.
    pub fn solve(&self, p: usize) -> Result<SolveReport, ModelError> {
        let phi = self.structure_function()?;
        let mut notes = Vec::new();
        let solutions = match self.id() {
            ModelId::MicTaubnut => {
                let e = self.energy(p)?;
                let w = phi.law.w_of_energy(e)?;
                let u = w + 1.0 + self.q("nu2");
                let sol = evaluate_candidate(&phi, p, u, w, e, (1, -1), USetLabel::RootAtTop);
                if !sol.positive {
                    notes.push(format!(
                        "p={p}: structure function is not positive on the interior (phi_min = {:e})",
                        sol.phi_min
                    ));
                }
                vec![sol]
            }
            ModelId::EopKc => {
                let mut sols = boundary_solutions(&phi, p);
                if sols.is_empty() {
                    return Err(UnirrepError::NoSolution { p }.into());
                }
                sols.sort_by(|a, b| a.energy.partial_cmp(&b.energy).unwrap().then(a.u.partial_cmp(&b.u).unwrap()));
                let a = self.p("alpha");
                let tower = -a * a / (2.0 * (p as f64 + 1.0).powi(2));
                for s in &sols {
                    if !s.positive {
                        notes.push(format!(
                            "p={p}: boundary solution u={} E={} fails interior positivity (phi_min = {:e})",
                            s.u, s.energy, s.phi_min
                        ));
                    }
                    if (s.energy - tower).abs() <= 1e-12 * tower.abs() {
                        notes.push(format!("p={p}: E = {} equals -alpha^2/(2(p+1)^2)", s.energy));
                    }
                }
                sols
            }
            _ => {
                let sols = solve_unirreps(&phi, p, None)?;
                if let Some(reference) = self.reference_energy(p)? {
                    let main = sols
                        .iter()
                        .filter(|s| s.branch == (1, 1))
                        .min_by(|a, b| (a.energy - reference).abs().total_cmp(&(b.energy - reference).abs()));
                    if let Some(main) = main {
                        let rel = (main.energy - reference).abs() / reference.abs().max(f64::MIN_POSITIVE);
                        notes.push(format!(
                            "p={p}: branch (+,+) E = {} vs separated-coordinates spectrum {} (relative difference {:e})",
                            main.energy, reference, rel
                        ));
                    }
                }
                sols
            }
        };
        Ok(SolveReport { solutions, notes })
    }

    /// Energy from the separated-coordinates spectrum that the branch (+,+)
    /// representation of dimension `p+1` should reproduce.
    fn reference_energy(&self, p: usize) -> Result<Option<f64>, ModelError> {
        Ok(match self.id() {
            ModelId::KcNd => {
                let (d1, d2) = self.kc_deltas()?;
                let (i, n) = (self.q("I"), self.p("N"));
                Some(kepler_energy(self.p("c0"), self.p("hbar"), p as f64 + (d1 + d2 + 2.0 * i + n - 1.0) / 2.0))
            }
            ModelId::DsoNd | ModelId::Ycm5d => Some(self.spectrum_closed(p)?),
            ModelId::TaubnutKepler => Some(self.energy(p)?),
            _ => None,
        })
    }

    /// Energies of all states with principal index at most `max_level`,
    /// repeated by multiplicity; used for degeneracy counts.
    pub fn level_energies(&self, max_level: usize) -> Result<Vec<f64>, ModelError> {
        let mut out = Vec::new();
        match self.id() {
            ModelId::KcNd => {
                let n = self.p("N") as usize;
                for i in 0..=max_level {
                    let mult = sphere_harmonics(n - 1, i);
                    let mut params = self.params.clone();
                    params.insert("N".into(), n as f64);
                    let mut qn = self.qn.clone();
                    qn.insert("I".into(), i as f64);
                    for lam in 0..=max_level {
                        for nr in 0..=max_level {
                            qn.insert("lam".into(), lam as f64);
                            qn.insert("nr".into(), nr as f64);
                            let e = Model::new(self.id(), &params, &qn)?.separated_energy()?;
                            out.extend(std::iter::repeat_n(e, mult));
                        }
                    }
                }
            }
            ModelId::DsoNd => {
                let dims = [self.p("n") as usize, (self.p("N") - self.p("n")) as usize];
                let mut qn = self.qn.clone();
                for l1 in 0..=max_level {
                    for l2 in 0..=max_level {
                        for n1 in 0..=max_level {
                            for n2 in 0..=max_level {
                                let mult = sphere_harmonics(dims[0], l1) * sphere_harmonics(dims[1], l2);
                                if mult == 0 {
                                    continue;
                                }
                                for (k, v) in [("l1", l1), ("l2", l2), ("n1", n1), ("n2", n2)] {
                                    qn.insert(k.into(), v as f64);
                                }
                                let e = Model::new(self.id(), &self.params, &qn)?.separated_energy()?;
                                out.extend(std::iter::repeat_n(e, mult));
                            }
                        }
                    }
                }
            }
            _ => {
                for lv in 0..=max_level {
                    out.push(self.energy(lv)?);
                }
            }
        }
        Ok(out)
    }

    /// Separated wave factors at the current quantum numbers, each with the
    /// ODE it solves. With `perturb ≠ 0` the ODE's energy (or separation
    /// constant, for angular factors) is scaled by `1 + perturb` while the
    /// factor is left unchanged.
    pub fn separated_problems(&self, perturb: f64) -> Result<Vec<SeparatedProblem>, ModelError> {
        let k = 1.0 + perturb;
        let mut out = Vec::new();
        let angular_range = (0.05, PI - 0.05);
        match self.id() {
            ModelId::KcNd => {
                let h2 = self.p("hbar").powi(2);
                let (c0, c1, c2) = (self.p("c0") / h2, self.p("c1") / h2, self.p("c2") / h2);
                let n = self.p("N");
                let (d1, d2) = self.kc_deltas()?;
                let i = self.q("I");
                let lam = self.qi("lam");
                let s = i + lam as f64 + (d1 + d2) / 2.0;
                let nr = self.q("nr");
                let kappa = c0 / (nr + s + (n - 1.0) / 2.0);
                let eps = 2.0 * kappa;
                let e = -kappa * kappa / 2.0;
                let a_sep = s * (s + n - 2.0);
                out.push(SeparatedProblem {
                    factor: WaveFactor {
                        kind: WaveFactorKind::ConfluentRadial,
                        coordinate: "r",
                        label: format!("kc radial nr={nr} s={s}"),
                        domain: (0.0, f64::INFINITY),
                        sample_range: (0.05 / eps, 30.0 / eps),
                        eval: Arc::new(move |r| confluent(-nr, 2.0 * s + n - 1.0, s, eps, 1, r)),
                    },
                    ode: SecondOrderOde::new(
                        |_| 1.0,
                        move |r| (n - 1.0) / r,
                        move |r| 2.0 * c0 / r + 2.0 * e * k - a_sep / (r * r),
                        (0.0, f64::INFINITY),
                    ),
                });
                let shift = (n - 3.0) / 2.0;
                let (ja, jb) = (d2 + i + shift, d1 + i + shift);
                out.push(SeparatedProblem {
                    factor: WaveFactor {
                        kind: WaveFactorKind::JacobiAngular,
                        coordinate: "theta",
                        label: format!("kc polar I={i} lam={lam}"),
                        domain: (0.0, PI),
                        sample_range: angular_range,
                        eval: Arc::new(move |t| Ok(polar_jacobi(lam, (d1 + i) / 2.0, (d2 + i) / 2.0, ja, jb, t))),
                    },
                    ode: SecondOrderOde::new(
                        |_| 1.0,
                        move |t: f64| (n - 2.0) / t.tan(),
                        move |t: f64| {
                            let c = t.cos();
                            -2.0 * c1 / (1.0 + c) - 2.0 * c2 / (1.0 - c) + a_sep * k
                                - i * (i + n - 3.0) / t.sin().powi(2)
                        },
                        (0.0, PI),
                    ),
                });
            }
            ModelId::DsoNd => {
                let h = self.p("hbar");
                let w = self.p("omega") / h;
                let towers = self.dso_towers()?;
                let dims = [self.p("n"), self.p("N") - self.p("n")];
                let ls = [self.q("l1"), self.q("l2")];
                let cs = [self.p("c1") / (h * h), self.p("c2") / (h * h)];
                let ns = [self.qi("n1"), self.qi("n2")];
                for t in 0..2 {
                    let (delta, alpha) = towers[t];
                    let (dim, l, c, nn) = (dims[t], ls[t], cs[t], ns[t]);
                    let e = w * (2.0 * nn as f64 + alpha + 1.0);
                    let s = 2.0 * delta + l;
                    out.push(SeparatedProblem {
                        factor: WaveFactor {
                            kind: WaveFactorKind::LaguerreRadial,
                            coordinate: "r",
                            label: format!("dso block {} radial N={nn} l={l}", t + 1),
                            domain: (0.0, f64::INFINITY),
                            sample_range: (0.05 / w.sqrt(), 6.0 / w.sqrt()),
                            eval: Arc::new(move |r| {
                                let z = w * r * r;
                                Ok(pow_eval(r, 1.0, s)
                                    .mul(FunEval::new((-z / 2.0).exp(), -w * r * (-z / 2.0).exp()))
                                    .mul(laguerre(nn, alpha, z).chain(2.0 * w * r)))
                            }),
                        },
                        ode: SecondOrderOde::new(
                            |_| 1.0,
                            move |r| (dim - 1.0) / r,
                            move |r| 2.0 * e * k - w * w * r * r - (2.0 * c + l * (l + dim - 2.0)) / (r * r),
                            (0.0, f64::INFINITY),
                        ),
                    });
                }
            }
            ModelId::TaubnutKepler => {
                let (d1, d2) = self.taubnut_deltas();
                let (nu1, nu2) = (self.q("nu1"), self.q("nu2"));
                let lam = self.qi("lam");
                let l = nu1 + lam as f64;
                let s = l + (d1 + d2) / 2.0;
                let n = self.q("nr") + l + 1.0;
                let e = self.energy(self.qi("nr") + lam)?;
                let (a, b, c0, c1, c2, c3, c4, d) = (
                    self.p("a"),
                    self.p("b"),
                    self.p("c0"),
                    self.p("c1"),
                    self.p("c2"),
                    self.p("c3"),
                    self.p("c4"),
                    self.p("d"),
                );
                let q2 = nu2 * nu2;
                let alpha_of = move |e: f64| 2.0 * b * e - d * q2 - c4;
                let beta_of = move |e: f64| 2.0 * a * e - c1 * q2 - c0 / 2.0;
                let eps = 2.0 * sqrt_checked("taubnut radial decay", -alpha_of(e))?;
                let k1 = s * (s + 1.0);
                out.push(SeparatedProblem {
                    factor: WaveFactor {
                        kind: WaveFactorKind::ConfluentRadial,
                        coordinate: "r",
                        label: format!("taubnut radial n={n} l={l}"),
                        domain: (0.0, f64::INFINITY),
                        sample_range: (0.05 / eps, 30.0 / eps),
                        eval: Arc::new(move |r| confluent(-n + l + 1.0, 2.0 * s + 2.0, s, eps, 1, r)),
                    },
                    ode: SecondOrderOde::new(
                        |_| 1.0,
                        |r| 2.0 / r,
                        move |r| alpha_of(e * k) + beta_of(e * k) / r - k1 / (r * r),
                        (0.0, f64::INFINITY),
                    ),
                });
                let (ja, jb) = (d2 + nu1, d1 + nu1);
                let (w1, w2) = (c2 + (nu1 - 2.0 * nu2).powi(2), c3 + nu1 * nu1);
                out.push(SeparatedProblem {
                    factor: WaveFactor {
                        kind: WaveFactorKind::JacobiAngular,
                        coordinate: "theta",
                        label: format!("taubnut polar l={l}"),
                        domain: (0.0, PI),
                        sample_range: angular_range,
                        eval: Arc::new(move |t| Ok(polar_jacobi(lam, jb / 2.0, ja / 2.0, ja, jb, t))),
                    },
                    ode: SecondOrderOde::new(
                        |_| 1.0,
                        |t: f64| 1.0 / t.tan(),
                        move |t: f64| {
                            let c = t.cos();
                            k1 * k - w1 / (2.0 * (1.0 + c)) - w2 / (2.0 * (1.0 - c))
                        },
                        (0.0, PI),
                    ),
                });
            }
            ModelId::Ycm5d => {
                let (c0, c1, c2) = (self.p("c0"), self.p("c1"), self.p("c2"));
                let (j, l) = (self.q("j"), self.q("l"));
                let (d1, d2) = self.ycm_deltas();
                let kdeg = self.qi("k");
                let s = kdeg as f64 + (d1 + j + d2 + l) / 2.0;
                let lam_sep = s * (s + 3.0);
                out.push(SeparatedProblem {
                    factor: WaveFactor {
                        kind: WaveFactorKind::JacobiAngular,
                        coordinate: "theta",
                        label: format!("ycm polar k={kdeg} J={j} L={l}"),
                        domain: (0.0, PI),
                        sample_range: angular_range,
                        eval: Arc::new(move |t| {
                            Ok(polar_jacobi(kdeg, (d1 + j) / 2.0, (d2 + l) / 2.0, d2 + l + 1.0, d1 + j + 1.0, t))
                        }),
                    },
                    ode: SecondOrderOde::new(
                        |_| 1.0,
                        |t: f64| 3.0 / t.tan(),
                        move |t: f64| {
                            let c = t.cos();
                            lam_sep * k - 2.0 * (l * (l + 1.0) + c2) / (1.0 - c) - 2.0 * (j * (j + 1.0) + c1) / (1.0 + c)
                        },
                        (0.0, PI),
                    ),
                });
                let nr = self.q("nr");
                let kappa = 2.0 * c0 / (nr + s + 2.0);
                let e = -kappa * kappa / 8.0;
                out.push(SeparatedProblem {
                    factor: WaveFactor {
                        kind: WaveFactorKind::ConfluentRadial,
                        coordinate: "r",
                        label: format!("ycm radial nr={nr} s={s}"),
                        domain: (0.0, f64::INFINITY),
                        sample_range: (0.05 / kappa, 30.0 / kappa),
                        eval: Arc::new(move |r| confluent(-nr, 2.0 * s + 4.0, s, kappa, 1, r)),
                    },
                    ode: SecondOrderOde::new(
                        |_| 1.0,
                        |r| 4.0 / r,
                        move |r| 2.0 * (e * k + c0 / r) - lam_sep / (r * r),
                        (0.0, f64::INFINITY),
                    ),
                });
                let (n1, n2) = (self.q("n1"), self.q("n2"));
                let (s1, s2) = ((d1 + j) / 2.0, (d2 + l) / 2.0);
                let kp = c0 / (n1 + n2 + s1 + s2 + 2.0);
                let ep = -kp * kp / 2.0;
                let sep = 2.0 * kp * (n1 + s1 + 1.0) - c0;
                for (idx, nn, ss, spin, c, sign) in [(1, n1, s1, j, c1, 1.0), (2, n2, s2, l, c2, -1.0)] {
                    out.push(SeparatedProblem {
                        factor: WaveFactor {
                            kind: WaveFactorKind::ConfluentRadial,
                            coordinate: if idx == 1 { "mu" } else { "nu" },
                            label: format!("ycm parabolic {idx} n={nn}"),
                            domain: (0.0, f64::INFINITY),
                            sample_range: (0.05 / kp, 30.0 / kp),
                            eval: Arc::new(move |x| confluent(-nn, 2.0 * ss + 2.0, ss, kp, 1, x)),
                        },
                        ode: SecondOrderOde::new(
                            |x| x,
                            |_| 2.0,
                            move |x| ep * k * x / 2.0 - (spin * (spin + 1.0) + c) / x + c0 / 2.0 + sign * sep / 2.0,
                            (0.0, f64::INFINITY),
                        ),
                    });
                }
            }
            ModelId::MicFlat => {
                let w = self.p("omega");
                let (n, l) = (self.qi("n"), self.q("l"));
                let e = w * (2.0 * n as f64 + l + 1.5);
                out.push(SeparatedProblem {
                    factor: WaveFactor {
                        kind: WaveFactorKind::LaguerreRadial,
                        coordinate: "r",
                        label: format!("mic flat radial n={n} l={l}"),
                        domain: (0.0, f64::INFINITY),
                        sample_range: (0.05 / w.sqrt(), 6.0 / w.sqrt()),
                        eval: Arc::new(move |r| {
                            let z = w * r * r;
                            Ok(pow_eval(r, 1.0, l)
                                .mul(FunEval::new((-z / 2.0).exp(), -w * r * (-z / 2.0).exp()))
                                .mul(laguerre(n, l + 0.5, z).chain(2.0 * w * r)))
                        }),
                    },
                    ode: SecondOrderOde::new(
                        |_| 1.0,
                        |r| 2.0 / r,
                        move |r| 2.0 * e * k - w * w * r * r - l * (l + 1.0) / (r * r),
                        (0.0, f64::INFINITY),
                    ),
                });
            }
            ModelId::MicTaubnut => {
                let (a, b, c0, c1, c4, d) =
                    (self.p("a"), self.p("b"), self.p("c0"), self.p("c1"), self.p("c4"), self.p("d"));
                let (nu1, nu2) = (self.q("nu1"), self.q("nu2"));
                let lam = self.qi("lam");
                let l = nu1 + lam as f64;
                let big_l = l - nu2;
                let nr = self.q("nr");
                let e = self.energy(self.qi("nr"))?;
                let q2 = nu2 * nu2;
                let eps = sqrt_checked("mic taubnut frequency", c0 / 2.0 - 2.0 * a * e + d * q2)?;
                let e_prime = move |e: f64| c4 + c1 * q2 - 2.0 * b * e;
                out.push(SeparatedProblem {
                    factor: WaveFactor {
                        kind: WaveFactorKind::ConfluentRadial,
                        coordinate: "r",
                        label: format!("mic taubnut radial n={nr} l={l}"),
                        domain: (0.0, f64::INFINITY),
                        sample_range: (0.05 / eps.sqrt(), 6.0 / eps.sqrt()),
                        eval: Arc::new(move |r| confluent(-nr, big_l + 1.5, big_l / 2.0, eps, 2, r)),
                    },
                    ode: SecondOrderOde::new(
                        |_| 1.0,
                        |r| 2.0 / r,
                        move |r| {
                            let ek = e * k;
                            -e_prime(ek) + (2.0 * a * ek - d * q2 - c0 / 2.0) * r * r - big_l * (big_l + 1.0) / (r * r)
                        },
                        (0.0, f64::INFINITY),
                    ),
                });
                let k1 = big_l * (big_l + 1.0);
                let (pa, pb) = (nu1, nu1 - 2.0 * nu2);
                out.push(SeparatedProblem {
                    factor: WaveFactor {
                        kind: WaveFactorKind::JacobiAngular,
                        coordinate: "theta",
                        label: format!("mic taubnut polar l={l}"),
                        domain: (0.0, PI),
                        sample_range: angular_range,
                        eval: Arc::new(move |t| Ok(polar_jacobi(lam, pb / 2.0, pa / 2.0, pa, pb, t))),
                    },
                    ode: SecondOrderOde::new(
                        |_| 1.0,
                        |t: f64| 1.0 / t.tan(),
                        move |t: f64| {
                            let c = t.cos();
                            k1 * k - pb * pb / (2.0 * (1.0 + c)) - pa * pa / (2.0 * (1.0 - c))
                        },
                        (0.0, PI),
                    ),
                });
            }
            ModelId::EopKc => {
                let alpha = self.p("alpha");
                let m = self.qi("m");
                let mf = m as f64;
                let nr = self.qi("nr");
                let eps = alpha / (nr as f64 + mf + 1.0);
                let e = -eps * eps / 8.0;
                out.push(SeparatedProblem {
                    factor: WaveFactor {
                        kind: WaveFactorKind::LaguerreRadial,
                        coordinate: "r",
                        label: format!("eop radial N={nr} m={m}"),
                        domain: (0.0, f64::INFINITY),
                        sample_range: (0.05 / eps, 30.0 / eps),
                        eval: Arc::new(move |r| {
                            let z = eps * r;
                            Ok(FunEval::new((-z / 2.0).exp(), -0.5 * (-z / 2.0).exp())
                                .mul(pow_eval(z, 1.0, mf))
                                .mul(laguerre(nr, 2.0 * mf + 1.0, z))
                                .chain(eps))
                        }),
                    },
                    ode: SecondOrderOde::new(
                        |_| 1.0,
                        |r| 2.0 / r,
                        move |r| alpha / r + 2.0 * e * k - mf * (mf + 1.0) / (r * r),
                        (0.0, f64::INFINITY),
                    ),
                });
                let mu = self.eop_mu();
                out.push(SeparatedProblem {
                    factor: WaveFactor {
                        kind: WaveFactorKind::LegendreAngular,
                        coordinate: "z",
                        label: format!("eop Legendre m={m} mu={mu}"),
                        domain: (-1.0, 1.0),
                        sample_range: (-0.95, 0.95),
                        eval: Arc::new(move |z| ferrers_legendre(m, mu, z)),
                    },
                    ode: SecondOrderOde::new(
                        |z| 1.0 - z * z,
                        |z| -2.0 * z,
                        // the shift is scaled by μ² so it stays visible at m = 0
                        move |z| (mf * (mf + 1.0) + mu * mu) * k - mu * mu - mu * mu / (1.0 - z * z),
                        (-1.0, 1.0),
                    ),
                });
                let ep = self.eop_params()?;
                let (g, dl) = (self.p("gamma"), self.p("delta"));
                let b = ep.b_eop();
                let n = self.qi("n");
                out.push(SeparatedProblem {
                    factor: WaveFactor {
                        kind: WaveFactorKind::EopAngular,
                        coordinate: "phi",
                        label: format!("eop azimuthal n={n}"),
                        domain: (0.0, PI),
                        sample_range: angular_range,
                        eval: Arc::new(move |phi| {
                            let (s, z) = phi.sin_cos();
                            let poly = exceptional_jacobi(n, &ep, z)?;
                            let frac = FunEval::new(1.0 / (z - b), -1.0 / (z - b).powi(2));
                            Ok(pow_eval(1.0 + z, 1.0, (2.0 * dl + 1.0) / 4.0)
                                .mul(pow_eval(1.0 - z, -1.0, (2.0 * g + 1.0) / 4.0))
                                .mul(frac)
                                .mul(poly)
                                .chain(-s))
                        }),
                    },
                    ode: SecondOrderOde::new(
                        |_| 1.0,
                        |_| 0.0,
                        move |phi: f64| {
                            let c = phi.cos();
                            mu * mu * k
                                - (g * g - 0.25) / (4.0 * (phi / 2.0).sin().powi(2))
                                - (dl * dl - 0.25) / (4.0 * (phi / 2.0).cos().powi(2))
                                - 2.0 * (1.0 - b * c) / (b - c).powi(2)
                        },
                        (0.0, PI),
                    ),
                });
            }
        }
        Ok(out)
    }
}

/// `E = −c₀² / (2ħ² k²)`.
pub fn kepler_energy(c0: f64, hbar: f64, k: f64) -> f64 {
    -c0 * c0 / (2.0 * hbar * hbar * k * k)
}

/// `δ = −1 + √(4c + (2s+1)²) − s`, the separation exponent of the
/// five-dimensional Kepler system for spin `s`.
pub fn ycm_delta(c: f64, spin: f64) -> f64 {
    -1.0 + (4.0 * c + (2.0 * spin + 1.0).powi(2)).sqrt() - spin
}

/// Factored structure function of the five-dimensional Kepler system with
/// explicit `m₁`, `m₂`.
pub fn ycm_phi(c0: f64, m1: f64, m2: f64) -> FactoredPhi {
    let roots: Vec<(f64, Option<BranchTag>)> = signs()
        .into_iter()
        .map(|(e1, e2)| ((1.0 + e1 as f64 * m1 + e2 as f64 * m2) / 2.0, Some((e1, e2))))
        .collect();
    crate::qalg::structure_function_factored(
        Arc::new(|e| 6291456.0 * e),
        &roots,
        Arc::new(KeplerLaw { c0, hbar: 1.0 }),
    )
}

/// Energies on which `r₀ + r₁E > 0`.
fn open_domain(r0: f64, r1: f64) -> (f64, f64) {
    if r1 > 0.0 {
        (-r0 / r1, f64::INFINITY)
    } else if r1 < 0.0 {
        (f64::NEG_INFINITY, -r0 / r1)
    } else {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}

/// Number of linearly independent spherical harmonics of degree `l` on the
/// sphere in `dim` dimensions (`dim = 1`: the two parities).
pub fn sphere_harmonics(dim: usize, l: usize) -> usize {
    match dim {
        0 => usize::from(l == 0),
        1 => usize::from(l <= 1),
        2 => {
            if l == 0 {
                1
            } else {
                2
            }
        }
        _ => {
            let binom = |n: usize, k: usize| -> usize {
                if k > n {
                    return 0;
                }
                (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
            };
            binom(l + dim - 1, dim - 1) - if l >= 2 { binom(l + dim - 3, dim - 1) } else { 0 }
        }
    }
}

/// Direction of the five-dimensional duality map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualDirection {
    OscToKepler,
    KeplerToOsc,
}

/// Parameters on one side of the duality: `(energy-like, coupling-like, [couplings])`.
/// On the oscillator side these are `(ε, ω, [λ₁, λ₂])`, on the Kepler side `(E, c₀, [c₁, c₂])`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualValues {
    pub energy: f64,
    pub coupling: f64,
    pub couplings: [f64; 2],
}

/// `c₀ = ε/4`, `E = −ω²/8`, `2cᵢ = λᵢ`, and its inverse (taking `ω > 0`).
pub fn dual_map_ycm(direction: DualDirection, v: DualValues) -> DualValues {
    match direction {
        DualDirection::OscToKepler => DualValues {
            energy: -v.coupling * v.coupling / 8.0,
            coupling: v.energy / 4.0,
            couplings: [v.couplings[0] / 2.0, v.couplings[1] / 2.0],
        },
        DualDirection::KeplerToOsc => DualValues {
            energy: 4.0 * v.coupling,
            coupling: (-8.0 * v.energy).sqrt(),
            couplings: [2.0 * v.couplings[0], 2.0 * v.couplings[1]],
        },
    }
}

/// Eight-dimensional oscillator level in cylindrical coordinates:
/// `ε = 2ω(n₁ + n₂ + (δ₁+δ₂)/2 + (T+K)/2 + 2)` with
/// `δᵢ = −1 + √(2λᵢ + (2zᵢ+1)²) − zᵢ`, `(z₁, z₂) = (T, K)`.
pub fn oscillator_8d_energy(omega: f64, lambdas: [f64; 2], n1: usize, n2: usize, t: f64, k: f64) -> f64 {
    let d = |lam: f64, z: f64| -1.0 + (2.0 * lam + (2.0 * z + 1.0).powi(2)).sqrt() - z;
    2.0 * omega * (n1 as f64 + n2 as f64 + (d(lambdas[0], t) + d(lambdas[1], k)) / 2.0 + (t + k) / 2.0 + 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vals(pairs: &[(&str, f64)]) -> Values {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn ids_round_trip() {
        for id in ModelId::ALL {
            assert_eq!(id.as_str().parse::<ModelId>().unwrap(), id);
        }
        assert!("nope".parse::<ModelId>().is_err());
        assert_eq!(catalog().len(), 7);
    }

    #[test]
    fn validation_rejects_negative_coupling_and_unknown_keys() {
        let err = Model::new(ModelId::KcNd, &vals(&[("c1", -0.1)]), &Values::new()).unwrap_err();
        assert!(matches!(err, ModelError::InvalidValue { .. }));
        let err = Model::new(ModelId::KcNd, &vals(&[("zz", 1.0)]), &Values::new()).unwrap_err();
        assert!(matches!(err, ModelError::UnknownParameter { .. }));
    }

    #[test]
    fn kc_table_row() {
        let m = Model::new(ModelId::KcNd, &vals(&[("N", 5.0), ("c1", 0.3), ("c2", 0.1), ("hbar", 1.5)]), &Values::new())
            .unwrap();
        let spec = m.algebra().unwrap();
        let h2 = 2.25;
        assert_eq!(spec.gamma, 2.0 * h2);
        assert!((spec.epsilon.eval(0.0) - 4.0 * 2.0 * h2 * h2).abs() < 1e-12);
        assert!((spec.zeta.eval(0.0) + 4.0 * 0.2 * h2).abs() < 1e-12);
    }

    #[test]
    fn kc_factored_roots_at_half_energy() {
        let m = Model::with_defaults(ModelId::KcNd);
        let phi = m.structure_function().unwrap();
        let roots = phi.roots_in_x(0.0, -0.5).unwrap();
        assert!(roots.iter().any(|r| (r - 1.5).abs() < 1e-14));
        assert!(roots.iter().any(|r| (r + 0.5).abs() < 1e-14));
        assert!(phi.eval(0.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn closed_spectra_examples() {
        let e = Model::with_defaults(ModelId::EopKc).spectrum_closed(1).unwrap();
        assert!((e + 1.0 / 32.0).abs() < 1e-15);
        assert_eq!(Model::with_defaults(ModelId::MicFlat).spectrum_closed(0).unwrap(), 1.5);
        assert!(matches!(
            Model::with_defaults(ModelId::MicTaubnut).spectrum_closed(0),
            Err(ModelError::WrongKind(_))
        ));
    }

    #[test]
    fn sphere_harmonic_counts() {
        assert_eq!(sphere_harmonics(3, 2), 5);
        assert_eq!(sphere_harmonics(2, 3), 2);
        assert_eq!(sphere_harmonics(4, 1), 4);
    }
}
