//! Acceptance suite: one PASS/FAIL line per criterion.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectra_forge::models::{kepler_energy, Model, ModelId, Values};
use spectra_forge::unirrep::{degeneracy_count, solve_unirreps, SpectrumCondition, TRANSCENDENTAL_TOL};
use spectra_forge::verify::{
    duality_suite, eop_ladder_action, ladder_suite, ode_suite, oracle_suite, two_tower_analysis,
};
use std::time::Instant;

const SEED: u64 = 7;

struct Outcome {
    pass: bool,
    detail: String,
}

fn vals(pairs: &[(&str, f64)]) -> Values {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn kc_spectrum() -> Outcome {
    let start = Instant::now();
    let grid = [0.0, 0.3, 1.1];
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    let mut missing = Vec::new();
    for n in [3.0, 4.0, 5.0, 7.0, 10.0] {
        for &c1 in &grid {
            for &c2 in &grid {
                for i in 0..=2 {
                    let m = Model::new(
                        ModelId::KcNd,
                        &vals(&[("N", n), ("c0", 1.0), ("c1", c1), ("c2", c2)]),
                        &vals(&[("I", i as f64)]),
                    )
                    .unwrap();
                    let aux = m.auxiliary().unwrap();
                    let (d1, d2) = (aux["delta1"], aux["delta2"]);
                    let phi = m.structure_function().unwrap();
                    for p in 0..=5usize {
                        cases += 1;
                        // separated spectrum, hyperparabolic form with p = n1 + n2
                        let sep = kepler_energy(1.0, 1.0, p as f64 + (d1 + d2 + 2.0 * i as f64 + n - 1.0) / 2.0);
                        // spherical form with principal number n = p + I + 1
                        let principal = p as f64 + i as f64 + 1.0;
                        let sph = kepler_energy(1.0, 1.0, principal + (d1 + d2) / 2.0 + (n - 3.0) / 2.0);
                        worst = worst.max(rel(sep, sph));
                        match solve_unirreps(&phi, p, Some((1, 1))) {
                            Ok(sols) => {
                                let best = sols.iter().map(|s| rel(s.energy, sep)).fold(f64::INFINITY, f64::min);
                                worst = worst.max(best);
                            }
                            Err(_) => missing.push(format!("N={n} c1={c1} c2={c2} I={i} p={p}")),
                        }
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: worst < 1e-10 && missing.is_empty() && secs < 5.0,
        detail: format!(
            "{cases} cases, max relative gap {worst:.2e}, unsolved {}, {secs:.2} s",
            missing.len()
        ),
    }
}

fn dso_spectrum() -> Outcome {
    let grid = [0.0, 0.3, 1.1];
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    let mut missing = 0;
    for (n1, n2) in [(1usize, 3usize), (2, 2), (2, 6), (4, 4)] {
        for &c1 in &grid {
            for &c2 in &grid {
                for (l1, l2) in [(0, 0), (1, 0), (1, 2)] {
                    let m = Model::new(
                        ModelId::DsoNd,
                        &vals(&[("N", (n1 + n2) as f64), ("n", n1 as f64), ("c1", c1), ("c2", c2)]),
                        &vals(&[("l1", l1 as f64), ("l2", l2 as f64)]),
                    )
                    .unwrap();
                    let aux = m.auxiliary().unwrap();
                    let phi = m.structure_function().unwrap();
                    for p in 0..=5usize {
                        cases += 1;
                        let expect = 2.0 * (p as f64 + 1.0 + (aux["alpha1"] + aux["alpha2"]) / 2.0);
                        match solve_unirreps(&phi, p, Some((1, 1))) {
                            Ok(sols) => {
                                let best = sols.iter().map(|s| rel(s.energy, expect)).fold(f64::INFINITY, f64::min);
                                worst = worst.max(best);
                            }
                            Err(_) => missing += 1,
                        }
                    }
                }
            }
        }
    }
    // hydrogen limit
    let mut hydrogen: f64 = 0.0;
    let h = Model::with_defaults(ModelId::KcNd);
    for n in 1..=6usize {
        let e = h.spectrum_closed(n - 1).unwrap();
        hydrogen = hydrogen.max(rel(e, -1.0 / (2.0 * (n * n) as f64)));
    }
    let hydrogen_levels = h.level_energies(3).unwrap();
    let h2 = degeneracy_count(hydrogen_levels.iter().copied(), -0.125);
    // isotropic oscillator limit on the (2,2) partition
    let mut oscillator: f64 = 0.0;
    let mut degeneracy_ok = true;
    let osc = Model::with_defaults(ModelId::DsoNd);
    let levels = osc.level_energies(4).unwrap();
    for p in 0..=1usize {
        for (l1, l2) in [(0usize, 0usize), (1, 0), (1, 1), (2, 1)] {
            let m = Model::new(ModelId::DsoNd, &Values::new(), &vals(&[("l1", l1 as f64), ("l2", l2 as f64)])).unwrap();
            let l = 2 * p + l1 + l2;
            let e = m.spectrum_closed(p).unwrap();
            oscillator = oscillator.max(rel(e, l as f64 + 2.0));
            let expect = (l + 1) * (l + 2) * (l + 3) / 6;
            if l <= 4 && degeneracy_count(levels.iter().copied(), e) != expect {
                degeneracy_ok = false;
            }
        }
    }
    Outcome {
        pass: worst < 1e-10 && missing == 0 && hydrogen == 0.0 && h2 == 4 && oscillator == 0.0 && degeneracy_ok,
        detail: format!(
            "{cases} cases, max relative gap {worst:.2e}, unsolved {missing}; hydrogen gap {hydrogen:.1e}, n=2 degeneracy {h2}; oscillator gap {oscillator:.1e}, 4D degeneracies {}",
            if degeneracy_ok { "match" } else { "differ" }
        ),
    }
}

fn oracle() -> Outcome {
    let checks = oracle_suite(5, SEED).unwrap();
    let required: Vec<_> = checks.iter().filter(|c| c.model != ModelId::TaubnutKepler).collect();
    let worst = required.iter().map(|c| c.relative_error).fold(0.0, f64::max);
    let slowest = required.iter().map(|c| c.seconds).fold(0.0, f64::max);
    let extra = checks.iter().filter(|c| c.model == ModelId::TaubnutKepler);
    let extra_worst = extra.clone().map(|c| c.relative_error).fold(0.0, f64::max);
    Outcome {
        pass: required.iter().all(|c| c.passed()),
        detail: format!(
            "{} eigenvalues, max relative error {worst:.2e}, slowest run {slowest:.3} s; Taub-NUT radial extra {} eigenvalues, max {extra_worst:.2e}",
            required.len(),
            extra.count()
        ),
    }
}

fn transcendental() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    let mut solved = 0;
    for id in [ModelId::TaubnutKepler, ModelId::MicTaubnut] {
        let mut count = 0;
        while count < 20 {
            let m = spectra_forge::verify::random_model(id, &mut rng);
            let level = rng.gen_range(0..=3usize);
            let Ok(e) = m.energy(level) else { continue };
            if let SpectrumCondition::Transcendental { residual, .. } = m.spectrum_condition(level).unwrap() {
                worst = worst.max(residual(e).abs());
            }
            count += 1;
            solved += 1;
        }
    }
    // Taub-NUT Kepler, MICZ-type preset: closed Coulomb-like law
    let micz = Model::new(
        ModelId::TaubnutKepler,
        &vals(&[("a", 0.0), ("b", 1.0), ("c1", -2.0), ("d", 1.0), ("c0", 1.0), ("c4", 1.0), ("c2", 0.5), ("c3", 0.5)]),
        &vals(&[("nu1", 1.0), ("nu2", 1.0)]),
    )
    .unwrap();
    let aux = micz.auxiliary().unwrap();
    let mut preset_gap: f64 = 0.0;
    for level in 0..4usize {
        let k = level as f64 + 1.0 + 1.0 + (aux["delta1"] + aux["delta2"]) / 2.0;
        let closed = (1.0 + 1.0 - (-2.0 + 0.5f64).powi(2) / (4.0 * k * k)) / 2.0;
        preset_gap = preset_gap.max(rel(micz.energy(level).unwrap(), closed));
    }
    // MIC Taub-NUT, MICZ-type preset: linear law
    let mic_micz = Model::new(
        ModelId::MicTaubnut,
        &vals(&[("a", 0.0), ("b", 1.0), ("c1", -2.0), ("d", 1.0), ("c0", 2.0), ("c4", 1.0)]),
        &vals(&[("nu2", 0.5)]),
    )
    .unwrap();
    for level in 0..4usize {
        let target = 4.0 * level as f64 - 2.0 * 0.5 + 3.0;
        let closed = (target * (1.0f64 + 0.25).sqrt() - 2.0 * 0.25 + 1.0) / 2.0;
        preset_gap = preset_gap.max(rel(mic_micz.energy(level).unwrap(), closed));
    }
    // Kaluza-Klein presets
    let kk = Model::new(
        ModelId::TaubnutKepler,
        &vals(&[("a", 1.0), ("b", 1.0), ("c1", 2.0), ("d", 1.0), ("c0", 1.0), ("c4", 1.0)]),
        &Values::new(),
    )
    .unwrap();
    let mic_kk = Model::new(
        ModelId::MicTaubnut,
        &vals(&[("a", 1.0), ("b", 1.0), ("c1", 2.0), ("d", 1.0), ("c0", 4.0), ("c4", 0.5)]),
        &vals(&[("nu2", 0.5)]),
    )
    .unwrap();
    let kk_ok = (0..4).all(|l| kk.energy(l).is_ok() && mic_kk.energy(l).is_ok());
    Outcome {
        pass: worst < TRANSCENDENTAL_TOL && preset_gap < 1e-12 && kk_ok,
        detail: format!(
            "{solved} random sets, max residual {worst:.2e}; MICZ presets max gap {preset_gap:.2e}; Kaluza-Klein presets {}",
            if kk_ok { "solved" } else { "failed" }
        ),
    }
}

fn structure_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    let mut draws = 0;
    for id in [ModelId::KcNd, ModelId::DsoNd, ModelId::TaubnutKepler, ModelId::Ycm5d] {
        let mut done = 0;
        while done < 50 {
            let m = spectra_forge::verify::random_model(id, &mut rng);
            // couplings below the real-factorization threshold have no structure law
            let Ok(phi) = m.structure_function() else { continue };
            let e = match id {
                ModelId::KcNd | ModelId::Ycm5d => -rng.gen_range(0.02..0.5),
                ModelId::DsoNd => rng.gen_range(0.5..6.0),
                _ => match m.energy(rng.gen_range(0..3)) {
                    Ok(e) => e,
                    Err(_) => continue,
                },
            };
            if phi.law.w_of_energy(e).is_err() {
                continue;
            }
            let closed = m.closed_phi(e).unwrap().unwrap();
            let u: f64 = rng.gen_range(-1.0..1.0);
            let xs: Vec<f64> = (0..20).map(|_| rng.gen_range(0.05..6.0)).collect();
            let pairs: Vec<(f64, f64)> = xs.iter().map(|&x| (closed.eval(x, u), phi.eval(x, u, e).unwrap())).collect();
            let fmax = pairs.iter().fold(0.0_f64, |a, p| a.max(p.1.abs()));
            let mut ratios: Vec<f64> =
                pairs.iter().filter(|p| p.1.abs() > 1e-3 * fmax).map(|p| p.0 / p.1).collect();
            ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let r = ratios[ratios.len() / 2];
            for q in &ratios {
                worst = worst.max(rel(*q, r));
            }
            done += 1;
            draws += 1;
        }
    }
    // boundary vanishing and positivity of every reported representation
    let mut reported = 0;
    let mut violations = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    for id in [ModelId::KcNd, ModelId::DsoNd, ModelId::TaubnutKepler, ModelId::Ycm5d, ModelId::MicFlat] {
        for _ in 0..5 {
            let m = spectra_forge::verify::random_model(id, &mut rng);
            let phi = m.structure_function().unwrap();
            for p in 0..=5 {
                let Ok(report) = m.solve(p) else { continue };
                for s in &report.solutions {
                    reported += 1;
                    let eval = |x: f64| phi.eval_with_w(x, s.u, s.w, s.energy);
                    let interior: Vec<f64> = (1..=2 * p + 1).map(|k| eval(0.5 * k as f64)).collect();
                    let scale = interior.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
                    let lowest = interior.iter().copied().fold(f64::INFINITY, f64::min);
                    let edge = eval(0.0).abs().max(eval(p as f64 + 1.0).abs());
                    if !(lowest > 0.0 && edge <= 1e-9 * scale) {
                        violations += 1;
                        eprintln!("{id} p={p} E={} min={lowest:e} edge={edge:e} scale={scale:e}", s.energy);
                    }
                }
            }
        }
    }
    Outcome {
        pass: worst < 1e-8 && violations == 0 && reported > 0,
        detail: format!(
            "{draws} draws x 20 points, max ratio spread {worst:.2e}; {reported} reported representations, {violations} violations"
        ),
    }
}

fn ladders() -> Outcome {
    let outcomes = ladder_suite(10, SEED).unwrap();
    let worst_dev = outcomes.iter().map(|o| o.deviation).fold(0.0, f64::max);
    let worst_spread = outcomes.iter().map(|o| o.spread).fold(0.0, f64::max);
    let mut families: Vec<&str> = outcomes.iter().map(|o| o.family).collect();
    families.sort_unstable();
    families.dedup();
    let mut failing: Vec<String> =
        outcomes.iter().filter(|o| !o.passed()).map(|o| format!("{} ({})", o.family, o.label)).collect();
    failing.truncate(3);
    let (_, rem) = eop_ladder_action(3, 0.7, 2.2, false);
    Outcome {
        pass: outcomes.iter().all(|o| o.passed()) && rem < 1e-12,
        detail: format!(
            "{} checks over {} families, max deviation {worst_dev:.2e}, max spread {worst_spread:.2e}{}",
            outcomes.len(),
            families.len(),
            if failing.is_empty() { String::new() } else { format!(", failing: {}", failing.join("; ")) }
        ),
    }
}

fn two_tower() -> Outcome {
    let report = two_tower_analysis(1.0, 6, 10, SEED);
    let positive_counts: Vec<usize> =
        report.family_solutions.iter().map(|(_, s)| s.iter().filter(|x| x.positive).count()).collect();
    let published_ok = report.published_energy_positive.iter().filter(|(_, ok)| *ok).count();
    Outcome {
        pass: report.consistent(),
        detail: format!(
            "Phi2 on u2=u1+1/2 family max {:.1e}; parameter-free isolated Phi2 solutions {}; p1!=p2 on family {}; \
             published E positive for {}/{} values of p; positive solutions per p {:?}; identification gap {:.1e}",
            report.family_phi2_max,
            report.tower2_isolated.len(),
            report.unequal_p_on_family,
            published_ok,
            report.published_energy_positive.len(),
            positive_counts,
            report.identification_error
        ),
    }
}

fn duality() -> Outcome {
    let checks = duality_suite(30, SEED).unwrap();
    let worst = checks.iter().map(|c| c.relative_error.max(c.round_trip_error)).fold(0.0, f64::max);
    let passed = checks.iter().filter(|c| c.passed()).count();
    Outcome {
        pass: passed == checks.len() && checks.len() == 30,
        detail: format!("{passed}/{} tuples, max relative error {worst:.2e}", checks.len()),
    }
}

fn odes() -> Outcome {
    let checks = ode_suite(&ModelId::ALL, 20, SEED).unwrap();
    let worst = checks.iter().map(|c| c.residual).fold(0.0, f64::max);
    let weakest = checks.iter().map(|c| c.control_residual).fold(f64::INFINITY, f64::min);
    let mut failing: Vec<String> =
        checks.iter().filter(|c| !c.passed()).map(|c| format!("{} {}", c.model, c.label)).collect();
    let nfail = failing.len();
    failing.truncate(3);
    Outcome {
        pass: nfail == 0,
        detail: format!(
            "{} factors, max residual {worst:.2e}, min control residual {weakest:.2e}, failures {nfail}{}",
            checks.len(),
            if failing.is_empty() { String::new() } else { format!(": {}", failing.join("; ")) }
        ),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("kc_nd spectrum reproduction", kc_spectrum),
        ("dso_nd spectrum reproduction and limits", dso_spectrum),
        ("shooting oracle cross-check", oracle),
        ("transcendental spectra and presets", transcendental),
        ("structure-function law", structure_law),
        ("ladder recurrences", ladders),
        ("two-tower consistency", two_tower),
        ("five-dimensional duality", duality),
        ("ODE residual suite", odes),
    ];
    let mut unexpected = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("criterion {}: {} [{}] {}", k + 1, if o.pass { "PASS" } else { "FAIL" }, name, o.detail);
        // Criterion 7 is known to fail: the published two-tower solution is not a
        // positive representation. Any other failure is a regression.
        if !o.pass && k + 1 != 7 {
            unexpected.push(k + 1);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
