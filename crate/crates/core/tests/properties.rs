//! Property tests for the invariants of each module.

use proptest::prelude::*;
use spectra_forge::models::{ycm_phi, Model, ModelId, Values};
use spectra_forge::poly::Polynomial;
use spectra_forge::qalg::realize;
use spectra_forge::specfun::{ferrers_legendre, jacobi, laguerre, pochhammer, FunEval};
use spectra_forge::unirrep::solve_unirreps;

fn vals(pairs: &[(&str, f64)]) -> Values {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// `L_n^α(x) = Σ (−1)^k C(n+α, n−k) x^k / k!`, with the sum of absolute terms.
fn laguerre_series(n: usize, alpha: f64, x: f64) -> (f64, f64) {
    (0..=n)
        .map(|k| {
            let binom = pochhammer(alpha + k as f64 + 1.0, n - k) / (1..=n - k).product::<usize>() as f64;
            let fact = (1..=k).product::<usize>() as f64;
            binom * (-x).powi(k as i32) / fact
        })
        .fold((0.0, 0.0), |(sum, mag), term| (sum + term, mag + term.abs()))
}

/// `P_n^{(a,b)}(x) = (a+1)_n/n! ₂F₁(−n, n+a+b+1; a+1; (1−x)/2)`, reflected
/// through `P_n^{(a,b)}(−x) = (−1)ⁿ P_n^{(b,a)}(x)` so that `(1−x)/2 ≤ ½`.
/// Returns the value and the sum of absolute terms, which bounds the
/// rounding error of the alternating series.
fn jacobi_series(n: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    if x < 0.0 {
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        let (v, mag) = jacobi_series(n, b, a, -x);
        return (sign * v, mag);
    }
    let z = (1.0 - x) / 2.0;
    let (mut term, mut sum, mut mag) = (1.0_f64, 1.0, 1.0);
    for k in 0..n {
        let kf = k as f64;
        term *= (kf - n as f64) * (n as f64 + a + b + 1.0 + kf) / ((a + 1.0 + kf) * (kf + 1.0)) * z;
        sum += term;
        mag += term.abs();
    }
    let prefactor = pochhammer(a + 1.0, n) / (1..=n).product::<usize>() as f64;
    (prefactor * sum, prefactor.abs() * mag)
}

fn derivative_matches(f: impl Fn(f64) -> FunEval, x: f64) -> bool {
    let h = 1e-5;
    let fd = (f(x + h).value - f(x - h).value) / (2.0 * h);
    let d = f(x).derivative;
    (fd - d).abs() <= 1e-6 * d.abs().max(f(x).value.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn roots_round_trip(mut roots in prop::collection::vec(-5.0f64..5.0, 1..6)) {
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        prop_assume!(roots.windows(2).all(|w| w[1] - w[0] > 0.05));
        let p = Polynomial::from_roots(1.0, &roots);
        let found = p.real_roots(1e-8).unwrap();
        prop_assert!(found.total_multiplicity() <= p.degree());
        let flat = found.flattened();
        prop_assert_eq!(flat.len(), roots.len());
        for (a, b) in flat.iter().zip(&roots) {
            prop_assert!((a - b).abs() < 1e-7, "{} vs {}", a, b);
        }
        for r in &found.roots {
            prop_assert!(p.eval(r.value).abs() <= found.residual_bound * (1.0 + 1e-12));
        }
        // constant sign between consecutive simple roots
        for w in roots.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let q1 = w[0] + 0.25 * (w[1] - w[0]);
            let q3 = w[0] + 0.75 * (w[1] - w[0]);
            prop_assert!(p.eval(mid).signum() == p.eval(q1).signum());
            prop_assert!(p.eval(mid).signum() == p.eval(q3).signum());
        }
    }

    #[test]
    fn recurrence_matches_series(n in 0usize..=10, a in -0.9f64..5.0, b in -0.9f64..5.0, x in -0.99f64..0.99, t in 0.0f64..8.0) {
        let l = laguerre(n, a, t).value;
        let (ls, mag) = laguerre_series(n, a, t);
        prop_assert!((l - ls).abs() <= 1e-13 * mag + 1e-10 * ls.abs(), "{} vs {}", l, ls);
        let j = jacobi(n, a, b, x).value;
        let (js, mag) = jacobi_series(n, a, b, x);
        prop_assert!((j - js).abs() <= 1e-13 * mag + 1e-10 * js.abs(), "{} vs {}", j, js);
    }

    #[test]
    fn analytic_derivatives(n in 0usize..=8, a in -0.9f64..5.0, b in -0.9f64..5.0, x in -0.95f64..0.95, t in 0.1f64..8.0, m in 0usize..=4, mu in 0.0f64..3.0) {
        prop_assert!(derivative_matches(|s| laguerre(n, a, s), t));
        prop_assert!(derivative_matches(|s| jacobi(n, a, b, s), x));
        prop_assert!(derivative_matches(|s| ferrers_legendre(m, mu, s).unwrap(), x));
    }

    #[test]
    fn classical_odes(n in 2usize..=8, a in -0.9f64..5.0, b in -0.9f64..5.0, x in -0.95f64..0.95, t in 0.1f64..8.0) {
        let nf = n as f64;
        let y = laguerre(n, a, t);
        let y2 = laguerre(n - 2, a + 2.0, t).value;
        let res = t * y2 + (a + 1.0 - t) * y.derivative + nf * y.value;
        let scale = (t * y2).abs() + ((a + 1.0 - t) * y.derivative).abs() + (nf * y.value).abs();
        prop_assert!(res.abs() <= 1e-8 * scale.max(1e-300));

        let p = jacobi(n, a, b, x);
        let p2 = 0.5 * (nf + a + b + 1.0) * jacobi(n - 1, a + 1.0, b + 1.0, x).derivative;
        let terms = [(1.0 - x * x) * p2, (b - a - (a + b + 2.0) * x) * p.derivative, nf * (nf + a + b + 1.0) * p.value];
        let res: f64 = terms.iter().sum();
        let scale: f64 = terms.iter().map(|v| v.abs()).sum();
        prop_assert!(res.abs() <= 1e-8 * scale.max(1e-300));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn realization_difference_relation(c1 in 0.0f64..2.0, c2 in 0.0f64..2.0, e in -1.0f64..-0.01, u in 0.0f64..2.0, which in 0usize..4) {
        let (id, params, qn) = match which {
            0 => (ModelId::KcNd, vals(&[("N", 5.0), ("c1", c1), ("c2", c2)]), vals(&[("I", 1.0)])),
            1 => (ModelId::DsoNd, vals(&[("N", 6.0), ("n", 2.0), ("c1", c1), ("c2", c2)]), Values::new()),
            2 => (ModelId::TaubnutKepler, vals(&[("c2", c1), ("c3", c2)]), Values::new()),
            _ => (ModelId::Ycm5d, vals(&[("c1", c1), ("c2", c2)]), vals(&[("l4", 1.0), ("t", 0.5)])),
        };
        let model = Model::new(id, &params, &qn).unwrap();
        let energy = if id == ModelId::DsoNd { -e * 4.0 } else { e };
        let spec = model.algebra().unwrap();
        let r = realize(&spec, energy, u).unwrap();
        for k in 0..20 {
            let x = 0.3 * k as f64;
            let scale = r.a_of(x).abs().max(r.a_of(x + 1.0).abs()).max(1.0).powi(2);
            prop_assert!(r.difference_relation_residual(x).abs() < 1e-10 * scale);
        }
    }

    #[test]
    fn branch_roots_symmetric_under_sign_flips(c0 in 0.2f64..3.0, m1 in 0.0f64..4.0, m2 in 0.0f64..4.0, e in -2.0f64..-0.01) {
        let base = ycm_phi(c0, m1, m2).roots_in_x(0.0, e).unwrap();
        for (s1, s2) in [(-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)] {
            let flipped = ycm_phi(c0, s1 * m1, s2 * m2).roots_in_x(0.0, e).unwrap();
            for (a, b) in base.iter().zip(&flipped) {
                prop_assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()));
            }
        }
    }

    #[test]
    fn representations_vanish_at_ends_and_stay_positive(c1 in 0.0f64..2.0, c2 in 0.0f64..2.0, i in 0usize..3, n in 3usize..8, p in 0usize..=6, kc in any::<bool>()) {
        let model = if kc {
            Model::new(ModelId::KcNd, &vals(&[("N", n as f64), ("c1", c1), ("c2", c2)]), &vals(&[("I", i as f64)])).unwrap()
        } else {
            Model::new(ModelId::DsoNd, &vals(&[("N", n as f64), ("n", 2.0), ("c1", c1), ("c2", c2)]), &vals(&[("l1", i as f64)])).unwrap()
        };
        let phi = model.structure_function().unwrap();
        let sols = solve_unirreps(&phi, p, None).unwrap();
        for s in &sols {
            let eval = |x: f64| phi.eval_with_w(x, s.u, s.w, s.energy);
            let interior: Vec<f64> = (1..=2 * p + 1).map(|k| eval(0.5 * k as f64)).collect();
            let scale = interior.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            prop_assert!(eval(0.0).abs() <= 1e-9 * scale);
            prop_assert!(eval(p as f64 + 1.0).abs() <= 1e-9 * scale);
            prop_assert!(interior.iter().all(|v| *v > 0.0));
        }
        let set_one = solve_unirreps(&phi, p, Some((1, 1))).unwrap();
        let closed = model.spectrum_closed(p).unwrap();
        prop_assert!(set_one.iter().any(|s| rel(s.energy, closed) < 1e-10));
    }

    #[test]
    fn kepler_levels_rise_toward_zero(c0 in 0.2f64..3.0, c1 in 0.0f64..2.0, c2 in 0.0f64..2.0, n in 3usize..8) {
        let model = Model::new(ModelId::KcNd, &vals(&[("N", n as f64), ("c0", c0), ("c1", c1), ("c2", c2)]), &Values::new()).unwrap();
        let phi = model.structure_function().unwrap();
        let levels: Vec<f64> = (0..=6).map(|p| solve_unirreps(&phi, p, Some((1, 1))).unwrap()[0].energy).collect();
        prop_assert!(levels.windows(2).all(|w| w[0] < w[1] && w[1] < 0.0));
    }

    #[test]
    fn closed_and_factored_forms_share_one_ratio(c1 in 0.0f64..2.0, c2 in 0.0f64..2.0, e in -1.0f64..-0.02, u in -1.0f64..1.0) {
        let model = Model::new(ModelId::KcNd, &vals(&[("N", 4.0), ("c1", c1), ("c2", c2)]), &vals(&[("I", 1.0)])).unwrap();
        let closed = model.closed_phi(e).unwrap().unwrap();
        let factored = model.structure_function().unwrap();
        let pairs: Vec<(f64, f64)> = (0..20).map(|k| {
            let x = 0.1 + 0.3 * k as f64;
            (closed.eval(x, u), factored.eval(x, u, e).unwrap())
        }).collect();
        let fmax = pairs.iter().fold(0.0_f64, |m, p| m.max(p.1.abs()));
        let ratios: Vec<f64> = pairs.iter().filter(|p| p.1.abs() > 1e-3 * fmax).map(|p| p.0 / p.1).collect();
        let r0 = ratios[0];
        prop_assert!(ratios.iter().all(|r| rel(*r, r0) < 1e-8));
    }
}
