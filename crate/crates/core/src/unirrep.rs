//! Finite-dimensional unitary representations of a deformed oscillator:
//! solve `Φ(0) = 0`, `Φ(p+1) = 0` and `Φ > 0` in between for `(u, E)`.

use crate::qalg::{BranchTag, FactoredPhi, QalgError};
use thiserror::Error;

/// Iteration cap of [`solve_transcendental`].
pub const MAX_ITERATIONS: usize = 200;
/// Default residual tolerance of [`solve_transcendental`].
pub const TRANSCENDENTAL_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UnirrepError {
    #[error("no branch gives a real energy with positive interior structure function (p = {p})")]
    NoSolution { p: usize },
    #[error("residual has no sign change on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error("root search did not reach |residual| < {tol:e} within {iterations} iterations (last {last:e})")]
    Nonconvergence { iterations: usize, tol: f64, last: f64 },
    #[error(transparent)]
    Algebra(#[from] QalgError),
}

/// Which factors fix the representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum USetLabel {
    /// An energy-independent factor vanishes at `x = 0`, an energy factor at `x = p+1`.
    RootAtZero,
    /// An energy factor vanishes at `x = 0`, an energy-independent one at `x = p+1`.
    RootAtTop,
    /// Both boundary zeros come from energy-dependent factors.
    Paired,
}

impl USetLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            USetLabel::RootAtZero => "root-at-zero",
            USetLabel::RootAtTop => "root-at-p+1",
            USetLabel::Paired => "paired",
        }
    }
}

/// One `(p+1)`-dimensional representation.
#[derive(Debug, Clone, PartialEq)]
pub struct UnirrepSolution {
    pub p: usize,
    pub branch: BranchTag,
    pub u_set: USetLabel,
    pub u: f64,
    pub energy: f64,
    pub w: f64,
    /// Φ at `x = 1..=p`.
    pub phi_samples: Vec<f64>,
    /// Minimum of Φ over the integers and midpoints strictly inside `(0, p+1)`.
    pub phi_min: f64,
    /// `max(|Φ(0)|, |Φ(p+1)|)`.
    pub boundary_residual: f64,
    pub positive: bool,
}

/// A spectrum law: closed `E(level)` or a residual whose root is the energy.
pub enum SpectrumCondition<'a> {
    Closed(Box<dyn Fn(usize) -> f64 + 'a>),
    Transcendental {
        residual: Box<dyn Fn(f64) -> f64 + 'a>,
        domain: (f64, f64),
    },
}

impl SpectrumCondition<'_> {
    /// Energy of `level`: evaluated directly, or found by bracketing the residual.
    pub fn energy(&self, level: usize) -> Result<f64, UnirrepError> {
        match self {
            SpectrumCondition::Closed(f) => Ok(f(level)),
            SpectrumCondition::Transcendental { residual, domain } => {
                let (lo, hi) = find_bracket(residual.as_ref(), *domain)?;
                solve_transcendental(residual.as_ref(), (lo, hi), TRANSCENDENTAL_TOL)
            }
        }
    }
}

fn solve_2x2(a: [[f64; 2]; 2], r: [f64; 2]) -> Option<[f64; 2]> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let scale = a.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
    if det.abs() <= 1e-12 * scale * scale {
        return None;
    }
    Some([
        (r[0] * a[1][1] - r[1] * a[0][1]) / det,
        (a[0][0] * r[1] - a[1][0] * r[0]) / det,
    ])
}

fn energy_from_w(phi: &FactoredPhi, w: f64) -> Option<f64> {
    if let Some(e) = phi.law.energy_of_w(w) {
        return e.is_finite().then_some(e);
    }
    let f = |e: f64| phi.law.w_of_energy(e).map(|v| v - w).unwrap_or(f64::NAN);
    let (lo, hi) = find_bracket(&f, phi.law.energy_domain()).ok()?;
    solve_transcendental(&f, (lo, hi), TRANSCENDENTAL_TOL).ok()
}

/// Every `(u, E)` with `Φ(0) = Φ(p+1) = 0`, before the positivity filter.
///
/// For each ordered pair of factors, the first is made to vanish at `x = 0`
/// and the second at `x = p+1`; the resulting 2×2 linear system in `(u, w)`
/// is solved and `w` mapped back to the energy.
pub fn boundary_solutions(phi: &FactoredPhi, p: usize) -> Vec<UnirrepSolution> {
    let top = p as f64 + 1.0;
    let mut out: Vec<UnirrepSolution> = Vec::new();
    for (i, fi) in phi.factors.iter().enumerate() {
        for (j, fj) in phi.factors.iter().enumerate() {
            if i == j || (fi.w_coef == 0.0 && fj.w_coef == 0.0) {
                continue;
            }
            let Some([u, w]) = solve_2x2(
                [[fi.u_coef, fi.w_coef], [fj.u_coef, fj.w_coef]],
                [-fi.constant, -(fj.x_coef * top + fj.constant)],
            ) else {
                continue;
            };
            let Some(energy) = energy_from_w(phi, w) else {
                continue;
            };
            let (lo, hi) = phi.law.energy_domain();
            if !(energy > lo && energy < hi) {
                continue;
            }
            let Ok(w_back) = phi.law.w_of_energy(energy) else {
                continue;
            };
            // Laws that are even in w (Kepler) return |w|; the pair ½ ± w is symmetric.
            if (w_back.abs() - w.abs()).abs() > 1e-8 * (1.0 + w.abs()) {
                continue;
            }
            let u_set = match (fi.w_coef != 0.0, fj.w_coef != 0.0) {
                (false, true) => USetLabel::RootAtZero,
                (true, false) => USetLabel::RootAtTop,
                _ => USetLabel::Paired,
            };
            let branch = match (fi.tag, fj.tag) {
                (Some(t), _) => t,
                (None, Some((a, b))) => (-a, -b),
                (None, None) => (0, 0),
            };
            let candidate = evaluate_candidate(phi, p, u, w_back, energy, branch, u_set);
            let duplicate = out.iter().any(|s| {
                (s.u - candidate.u).abs() <= 1e-9 * (1.0 + s.u.abs())
                    && (s.energy - candidate.energy).abs() <= 1e-9 * (1.0 + s.energy.abs())
            });
            if !duplicate {
                out.push(candidate);
            }
        }
    }
    out
}

pub fn evaluate_candidate(
    phi: &FactoredPhi,
    p: usize,
    u: f64,
    w: f64,
    energy: f64,
    branch: BranchTag,
    u_set: USetLabel,
) -> UnirrepSolution {
    let eval = |x: f64| phi.eval_with_w(x, u, w, energy);
    let phi_samples: Vec<f64> = (1..=p).map(|k| eval(k as f64)).collect();
    let interior: Vec<f64> = (1..=2 * p + 1).map(|k| eval(0.5 * k as f64)).collect();
    let phi_min = interior.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = interior.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let boundary_residual = eval(0.0).abs().max(eval(p as f64 + 1.0).abs());
    let positive = phi_min > 0.0 && boundary_residual <= 1e-9 * scale.max(f64::MIN_POSITIVE);
    UnirrepSolution {
        p,
        branch,
        u_set,
        u,
        energy,
        w,
        phi_samples,
        phi_min,
        boundary_residual,
        positive,
    }
}

/// Representations of dimension `p+1` that pass the positivity check,
/// optionally restricted to one branch label.
pub fn solve_unirreps(
    phi: &FactoredPhi,
    p: usize,
    branch: Option<BranchTag>,
) -> Result<Vec<UnirrepSolution>, UnirrepError> {
    let mut sols: Vec<UnirrepSolution> = boundary_solutions(phi, p)
        .into_iter()
        .filter(|s| s.positive && branch.is_none_or(|b| s.branch == b))
        .collect();
    if sols.is_empty() {
        return Err(UnirrepError::NoSolution { p });
    }
    sols.sort_by(|a, b| {
        a.energy
            .partial_cmp(&b.energy)
            .unwrap()
            .then(a.u.partial_cmp(&b.u).unwrap())
    });
    Ok(sols)
}

/// Brent's method on a sign-changing bracket; stops once `|f(E)| < tol`.
pub fn solve_transcendental(
    f: &dyn Fn(f64) -> f64,
    bracket: (f64, f64),
    tol: f64,
) -> Result<f64, UnirrepError> {
    let (mut a, mut b) = bracket;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa * fb < 0.0) {
        return Err(UnirrepError::NoBracket { lo: a, hi: b });
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut bisected = true;
    for _ in 0..MAX_ITERATIONS {
        if fb.abs() < tol {
            return Ok(b);
        }
        if (b - a).abs() <= 4.0 * f64::EPSILON * b.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let out_of_range = !((s > lo.min(b)) && (s < lo.max(b)));
        let slow = if bisected {
            (s - b).abs() >= (b - c).abs() / 2.0
        } else {
            (s - b).abs() >= (c - d).abs() / 2.0
        };
        if out_of_range || slow {
            s = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }
        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fa * fs < 0.0 {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    if fb.abs() < tol {
        Ok(b)
    } else {
        Err(UnirrepError::Nonconvergence {
            iterations: MAX_ITERATIONS,
            tol,
            last: fb.abs(),
        })
    }
}

/// Sample points inside `domain`: uniform plus geometric approaches to each
/// finite end, or geometric expansion toward an infinite end.
fn domain_samples(domain: (f64, f64)) -> Vec<f64> {
    let (lo, hi) = domain;
    let mut pts = Vec::new();
    let geometric = |origin: f64, dir: f64, pts: &mut Vec<f64>| {
        for k in -45..=60 {
            pts.push(origin + dir * 2f64.powi(k));
        }
    };
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => {
            let width = hi - lo;
            for k in 1..400 {
                pts.push(lo + width * k as f64 / 400.0);
            }
            for k in 1..50 {
                let t = width * 2f64.powi(-(k + 8));
                pts.push(lo + t);
                pts.push(hi - t);
            }
        }
        (true, false) => geometric(lo, 1.0, &mut pts),
        (false, true) => geometric(hi, -1.0, &mut pts),
        (false, false) => {
            geometric(0.0, 1.0, &mut pts);
            geometric(0.0, -1.0, &mut pts);
            pts.push(0.0);
        }
    }
    pts.retain(|&x| x > lo && x < hi);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    pts
}

/// First sign change of `f` over the sample points of `domain`.
pub fn find_bracket(f: &dyn Fn(f64) -> f64, domain: (f64, f64)) -> Result<(f64, f64), UnirrepError> {
    let pts = domain_samples(domain);
    let vals: Vec<f64> = pts.iter().map(|&x| f(x)).collect();
    for k in 1..pts.len() {
        let (a, b) = (vals[k - 1], vals[k]);
        if a.is_finite() && b.is_finite() && a * b <= 0.0 {
            return Ok((pts[k - 1], pts[k]));
        }
    }
    Err(UnirrepError::NoBracket {
        lo: domain.0,
        hi: domain.1,
    })
}

/// Number of levels within relative `1e−9` of `energy`.
pub fn degeneracy_count<I: IntoIterator<Item = f64>>(levels: I, energy: f64) -> usize {
    levels
        .into_iter()
        .filter(|e| (e - energy).abs() <= 1e-9 * energy.abs().max(1e-300))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalg::{structure_function_factored, KeplerLaw};
    use std::sync::Arc;

    #[test]
    fn brent_simple_roots() {
        let f = |x: f64| x * x - 2.0;
        let r = solve_transcendental(&f, (0.0, 2.0), 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        assert!(matches!(solve_transcendental(&f, (2.0, 3.0), 1e-12), Err(UnirrepError::NoBracket { .. })));
    }

    #[test]
    fn bracket_search_half_line() {
        let f = |x: f64| 1000.0 - x;
        let (lo, hi) = find_bracket(&f, (0.0, f64::INFINITY)).unwrap();
        assert!(lo <= 1000.0 && hi >= 1000.0);
        let g = |x: f64| x + 1e-6;
        let (lo, hi) = find_bracket(&g, (f64::NEG_INFINITY, f64::INFINITY)).unwrap();
        assert!(lo <= -1e-6 && hi >= -1e-6);
    }

    #[test]
    fn hydrogen_like_toy() {
        // Φ = E·(x+u−½−w)(x+u−½+w)(x+u): zero at 0 through u = 0.
        let phi = structure_function_factored(
            Arc::new(|e: f64| e),
            &[(0.0, Some((1, 1)))],
            Arc::new(KeplerLaw { c0: 1.0, hbar: 1.0 }),
        );
        let sols = solve_unirreps(&phi, 2, Some((1, 1))).unwrap();
        assert_eq!(sols.len(), 1);
        assert!((sols[0].energy + 1.0 / (2.0 * 2.5f64.powi(2))).abs() < 1e-14);
        assert_eq!(sols[0].u_set, USetLabel::RootAtZero);
        assert_eq!(sols[0].phi_samples.len(), 2);
    }

    #[test]
    fn degeneracy_counts() {
        let levels = [1.0, 2.0, 2.0, 3.0];
        assert_eq!(degeneracy_count(levels, 2.0), 2);
        assert_eq!(degeneracy_count(levels, 0.5), 0);
    }
}
