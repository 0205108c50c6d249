//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::ThreadPoolBuilder;

use zeroclass::carleson::{box_mass, sup_box_ratio, CarlesonBox, CarlesonClass, ClassifyOptions};
use zeroclass::counterexample::{
    assemble, basis_gram, block_energy, blow_up_sequence, sharpness_profile, uniform_betas,
    PrefixObservation,
};
use zeroclass::energy::{admissibility_constant, gram_matrix, k_profile, single_mode_constant};
use zeroclass::numerics::{
    extreme_eigenvalues, integrate_split, loglog_slope, GeometricGrid, QuadOptions,
};
use zeroclass::profile::DEFAULT_DECAY_RATIO;
use zeroclass::sufficient::{analytic_alpha_bound, zwart_summability, GrowthFunction, Summability};
use zeroclass::weiss::{b2_constant, b2_profile, default_grids, weiss_m, weiss_m_profile};
use zeroclass::{classify, heat_system, wave_system, DiagonalSystem, PointMeasure};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let elapsed = start.elapsed();
    o.detail = format!("{}; {:.2} s", o.detail, elapsed.as_secs_f64());
    if let Some(limit) = limit {
        if elapsed > limit {
            o.pass = false;
            o.detail = format!("{} (limit {} s)", o.detail, limit.as_secs());
        }
    }
    o
}

/// K_η for heat(8) from a Gram matrix assembled by time quadrature, maximized
/// by power iteration from random directions.
fn heat8_oracle(eta: f64, rng: &mut ChaCha8Rng) -> f64 {
    let sys = heat_system(8).unwrap();
    let modes = sys.modes();
    let n = modes.len();
    let opts = QuadOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-14,
        max_panels: 20_000,
    };
    let mut g = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (modes[i], modes[j]);
            let f = |t: f64| {
                (a.coefficient.conj()
                    * b.coefficient
                    * ((a.eigenvalue.conj() + b.eigenvalue) * t).exp())
                .re
            };
            let breaks: Vec<f64> = (0..=32).map(|k| eta * k as f64 / 32.0).collect();
            g[(i, j)] = integrate_split(f, &breaks, opts).unwrap().value;
        }
    }
    let mut best = 0.0f64;
    for _ in 0..8 {
        let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut rayleigh = 0.0;
        for _ in 0..5000 {
            let y: Vec<f64> = (0..n)
                .map(|i| (0..n).map(|j| g[(i, j)] * x[j]).sum())
                .collect();
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            let next: Vec<f64> = y.iter().map(|v| v / norm).collect();
            let gx: Vec<f64> = (0..n)
                .map(|i| (0..n).map(|j| g[(i, j)] * next[j]).sum())
                .collect();
            let r = next.iter().zip(&gx).map(|(a, b)| a * b).sum::<f64>();
            x = next;
            if (r - rayleigh).abs() <= 1e-16 * r {
                rayleigh = r;
                break;
            }
            rayleigh = r;
        }
        best = best.max(rayleigh);
    }
    best.sqrt()
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0001);
    let etas = [1.0, 0.1, 0.01, 0.001];
    let timing = timed(Some(Duration::from_secs(10)), || {
        let heat = heat_system(200).unwrap();
        let p = k_profile(&heat, &etas, DEFAULT_DECAY_RATIO).unwrap();
        let ks: Vec<f64> = p.samples.iter().map(|s| s.k).collect();
        let decreasing = ks.windows(2).all(|w| w[1] < w[0]);
        let ratio = ks[3] / ks[0];
        outcome(
            decreasing && ratio < 0.2,
            format!("K = {ks:.4?}, K_0.001/K_1 = {ratio:.4}"),
        )
    });
    let heat8 = heat_system(8).unwrap();
    let mut worst = 0.0f64;
    for &eta in &etas {
        let k = admissibility_constant(&heat8, eta).unwrap();
        let o = heat8_oracle(eta, &mut rng);
        worst = worst.max((k - o).abs() / o);
    }
    outcome(
        timing.pass && worst < 1e-6,
        format!("{}; heat(8) oracle max rel diff {worst:.1e}", timing.detail),
    )
}

fn criterion_2() -> Outcome {
    timed(Some(Duration::from_secs(30)), || {
        let wave = wave_system(512).unwrap();
        let k2 = admissibility_constant(&wave, 2.0).unwrap();
        let k1 = admissibility_constant(&wave, 1.0).unwrap();
        let k001 = admissibility_constant(&wave, 0.01).unwrap();
        let err = (k2 - 2f64.sqrt()).abs();
        let ratio = k001 / k1;
        outcome(
            err < 1e-10 && ratio > 0.8,
            format!("|K_2 - sqrt 2| = {err:.1e}, K_0.01/K_1 = {ratio:.5}"),
        )
    })
}

fn brute_force_ratio(measure: &PointMeasure, r: f64, points: usize) -> f64 {
    let (lo, hi) = measure
        .atoms()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), at| {
            (a.min(at.location.im), b.max(at.location.im))
        });
    let (lo, hi) = (lo - r, hi + r);
    (0..points)
        .map(|i| {
            let w = lo + (hi - lo) * i as f64 / (points - 1) as f64;
            box_mass(measure, &CarlesonBox { r, omega: w })
        })
        .fold(0.0, f64::max)
        / r
}

fn criterion_3() -> Outcome {
    let systems = vec![
        heat_system(200).unwrap(),
        wave_system(256).unwrap(),
        DiagonalSystem::from_measure(&PointMeasure::integer_deltas(1000), "integer deltas")
            .unwrap(),
        DiagonalSystem::from_measure(
            &PointMeasure::inverse_square_deltas(1000),
            "inverse squares",
        )
        .unwrap(),
    ];
    let rs = GeometricGrid::new(1e-3, 1e5, 4).unwrap().points();
    let mut worst_bound = 0.0f64;
    for sys in &systems {
        let mu = sys.to_point_measure();
        for &r in &rs {
            let h = sup_box_ratio(&mu, r);
            let m = weiss_m(sys, r).unwrap();
            worst_bound = worst_bound.max(h / (4.25 * m * m));
        }
    }
    let mut worst_scan = 0.0f64;
    for sys in &systems {
        let mu = sys.to_point_measure();
        for r in [0.37, 2.5, 10.0, 77.0] {
            let d = (sup_box_ratio(&mu, r) - brute_force_ratio(&mu, r, 100_000)).abs();
            worst_scan = worst_scan.max(d);
        }
    }
    outcome(
        worst_bound <= 1.0 + 1e-9 && worst_scan <= 1e-12,
        format!("max h/(17/4 m^2) = {worst_bound:.4}, max |h - brute force| = {worst_scan:.1e}"),
    )
}

fn criterion_4() -> Outcome {
    let ints = PointMeasure::integer_deltas(1000);
    let p = classify(
        &ints,
        &GeometricGrid::new(1.0, 1e3, 8).unwrap().points(),
        &GeometricGrid::new(1e-3, 1.0, 8).unwrap().points(),
        ClassifyOptions::default(),
    )
    .unwrap();
    let exact = [2.5, 10.5, 100.5]
        .iter()
        .all(|&r: &f64| sup_box_ratio(&ints, r) == r.floor() / r);
    let inv = PointMeasure::inverse_square_deltas(10_000);
    let q = classify(
        &inv,
        &GeometricGrid::new(1.0, 1e3, 8).unwrap().points(),
        &GeometricGrid::new(1e-4, 1e-1, 8).unwrap().points(),
        ClassifyOptions::default(),
    )
    .unwrap();
    let near = box_mass(&inv, &CarlesonBox::new(1e-2, 0.0).unwrap()) / 1e-2;
    let h1000 = sup_box_ratio(&inv, 1e3);
    outcome(
        p.classification == CarlesonClass::Carleson
            && exact
            && q.classification == CarlesonClass::ZeroClassCarleson
            && near > 0.5
            && h1000 < 2e-3,
        format!(
            "integers: {:?}, floor(r)/r exact: {exact}; inverse squares: {:?}, window ratio at 1e-2 = {near:.4}, h(1e3) = {h1000:.3e}",
            p.classification, q.classification
        ),
    )
}

fn criterion_5() -> Outcome {
    let taus = GeometricGrid::new(1e-3, 10.0, 5).unwrap().points();
    let taus: Vec<f64> = taus.into_iter().take(20).collect();
    let systems = [heat_system(200).unwrap(), wave_system(512).unwrap()];
    let mut min_slack = f64::INFINITY;
    for sys in &systems {
        for &t in &taus {
            let slack = admissibility_constant(sys, t).unwrap() - b2_constant(sys, t).unwrap();
            min_slack = min_slack.min(slack);
        }
    }
    outcome(
        taus.len() == 20 && min_slack >= -1e-10,
        format!("{} taus, min slack K - K_B2 = {min_slack:.3e}", taus.len()),
    )
}

fn criterion_6() -> Outcome {
    let single = DiagonalSystem::from_pairs(
        [(Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0))],
        "single mode",
    )
    .unwrap();
    let mut lines = Vec::new();
    let mut all = true;
    for sys in [heat_system(200).unwrap(), wave_system(512).unwrap(), single] {
        let (rg, tg) = default_grids(&sys);
        let m = weiss_m_profile(&sys, &rg.points()).unwrap();
        let b = b2_profile(&sys, &tg.points()).unwrap();
        let agree = m.verdict.is_decaying() == b.verdict.is_decaying();
        all &= agree;
        lines.push(format!(
            "{}: {:?}/{:?} ({:.3}/{:.3})",
            sys.label(),
            m.verdict,
            b.verdict,
            m.trend.ratio,
            b.trend.ratio
        ));
    }
    let nmax = 6;
    let blocks = blow_up_sequence(0.4, &(1..=nmax).collect::<Vec<_>>()).unwrap();
    let basis = basis_gram(0.4, nmax).unwrap();
    let a = assemble(0.25, blocks, &uniform_betas(nmax), &[1.0, 10.0]).unwrap();
    let obs = PrefixObservation::new(&a, &basis).unwrap();
    let top = 4f64.powi(nmax as i32);
    let m = obs
        .m_profile(
            &GeometricGrid::new(1e-2, top * 1e3, 8).unwrap().points(),
            DEFAULT_DECAY_RATIO,
        )
        .unwrap();
    let b = obs
        .b2_profile(
            &GeometricGrid::new(1e-3 / top, 10.0, 8).unwrap().points(),
            DEFAULT_DECAY_RATIO,
        )
        .unwrap();
    let agree = m.verdict.is_decaying() == b.verdict.is_decaying();
    all &= agree;
    lines.push(format!(
        "counterexample prefix: {:?}/{:?} ({:.3}/{:.3})",
        m.verdict, b.verdict, m.trend.ratio, b.trend.ratio
    ));
    outcome(all, lines.join("; "))
}

fn criterion_7() -> Outcome {
    timed(Some(Duration::from_secs(60)), || {
        let ns = [8usize, 16, 32, 64, 128];
        let blocks = blow_up_sequence(0.4, &ns).unwrap();
        let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
        let cs: Vec<f64> = blocks.iter().map(|b| b.c_n).collect();
        let slope = loglog_slope(&xs, &cs).unwrap();
        let ens = [4usize, 6, 8, 10];
        let basis = basis_gram(0.4, 10).unwrap();
        let eblocks = blow_up_sequence(0.4, &ens).unwrap();
        let ratios: Vec<f64> = eblocks
            .iter()
            .map(|b| block_energy(b.n, 0.4, &basis).unwrap() / b.x_norm_sq)
            .collect();
        let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
        outcome(
            (slope - 0.6).abs() <= 0.15 && increasing,
            format!("c_N slope = {slope:.4}, energy ratios = {ratios:.4?}"),
        )
    })
}

fn criterion_8() -> Outcome {
    let nmax = 10;
    let ns: Vec<usize> = (1..=nmax).collect();
    let blocks = blow_up_sequence(0.4, &ns).unwrap();
    let rs = GeometricGrid::new(1.0, 1e8, 8).unwrap().points();
    let halving: Vec<f64> = (1..=nmax).map(|n| 0.5f64.powi(n as i32)).collect();
    let rejects = assemble(0.25, blocks.clone(), &halving, &rs).is_err();
    let a = assemble(0.25, blocks, &uniform_betas(nmax), &rs).unwrap();
    let growing = a.energy_lower_bounds.windows(2).all(|w| w[1] > w[0]);
    outcome(
        a.decay_ratio < 0.5 && growing && rejects,
        format!(
            "M_1e8/M_1 = {:.4}, lower bounds strictly increasing: {growing}, 2^-N weights rejected: {rejects}",
            a.decay_ratio
        ),
    )
}

fn criterion_9() -> Outcome {
    let rs = GeometricGrid::new(1e2, 1e10, 10).unwrap().points();
    let p = sharpness_profile(0.4, 0.4, &rs).unwrap();
    outcome(
        (p.fitted_exponent - p.gamma).abs() <= 0.05,
        format!(
            "gamma = {:.3}, fitted = {:.4} (shift {:.3}), plain log-log slope = {:.4}",
            p.gamma, p.fitted_exponent, p.shift, p.naive_exponent
        ),
    )
}

fn criterion_10() -> Outcome {
    let z075 =
        zwart_summability(&GrowthFunction::log_power(0.75).unwrap(), 2.0, 1000, 0.1).unwrap();
    let z04 = zwart_summability(&GrowthFunction::log_power(0.4).unwrap(), 2.0, 1000, 0.1).unwrap();
    let b = analytic_alpha_bound(1.0, 1.0, 0.25, 0.01).unwrap();
    outcome(
        z075.verdict == Summability::Converges
            && z04.verdict == Summability::Diverges
            && (b - 0.447214).abs() <= 1e-6,
        format!(
            "p = 0.75: {:?} (slope {:.3}), p = 0.4: {:?} (slope {:.3}), bound = {b:.7}",
            z075.verdict, z075.tail_slope, z04.verdict, z04.tail_slope
        ),
    )
}

fn random_system(rng: &mut ChaCha8Rng) -> DiagonalSystem {
    let n = rng.gen_range(1..=16);
    DiagonalSystem::from_pairs(
        (0..n).map(|_| {
            (
                Complex64::new(rng.gen_range(-10.0..=0.0), rng.gen_range(-20.0..20.0)),
                Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            )
        }),
        "random",
    )
    .unwrap()
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0011);
    let etas = [0.01, 0.1, 0.5, 1.0, 3.0];
    let mut psd_fail = 0;
    let mut mono_fail = 0;
    let mut mode_fail = 0;
    for _ in 0..200 {
        let sys = random_system(&mut rng);
        let grams: Vec<_> = etas
            .iter()
            .map(|&e| gram_matrix(&sys, e).unwrap())
            .collect();
        for g in &grams {
            let e = g.extremes().unwrap();
            if e.smallest < -1e-10 * e.largest.max(1e-300) {
                psd_fail += 1;
            }
        }
        for w in grams.windows(2) {
            let d = extreme_eigenvalues(&(w[1].matrix() - w[0].matrix()), 1e-10).unwrap();
            let scale = w[1].extremes().unwrap().largest.max(1e-300);
            if d.smallest < -1e-10 * scale {
                mono_fail += 1;
            }
        }
        for (&eta, g) in etas.iter().zip(&grams) {
            let k = g.operator_norm().unwrap();
            for m in sys.modes() {
                if k < single_mode_constant(m.coefficient, m.eigenvalue, eta) * (1.0 - 1e-10) {
                    mode_fail += 1;
                }
            }
        }
    }
    let run = || {
        let heat = heat_system(150).unwrap();
        let wave = wave_system(300).unwrap();
        let k = k_profile(&wave, &[1.0, 0.1, 0.01], DEFAULT_DECAY_RATIO).unwrap();
        let k2 = k_profile(&heat, &[1.0, 0.1, 0.01, 0.001], DEFAULT_DECAY_RATIO).unwrap();
        let (rg, tg) = default_grids(&heat);
        let m = weiss_m_profile(&heat, &rg.points()).unwrap();
        let b = b2_profile(&heat, &tg.points()).unwrap();
        let c = zeroclass::classify(
            &PointMeasure::inverse_square_deltas(2000),
            &GeometricGrid::new(1.0, 1e3, 6).unwrap().points(),
            &GeometricGrid::new(1e-4, 1e-1, 6).unwrap().points(),
            ClassifyOptions::default(),
        )
        .unwrap();
        let blocks = blow_up_sequence(0.4, &[1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        let a = assemble(
            0.25,
            blocks,
            &uniform_betas(8),
            &GeometricGrid::new(1.0, 1e8, 4).unwrap().points(),
        )
        .unwrap();
        let s = sharpness_profile(
            0.4,
            0.4,
            &GeometricGrid::new(1e2, 1e10, 4).unwrap().points(),
        )
        .unwrap();
        serde_json::to_string(&(k, k2, m, b, c, a, s)).unwrap()
    };
    let pool = |n: usize| ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    let sequential = pool(1).install(run);
    let parallel = pool(8).install(run);
    let deterministic = sequential == parallel;
    outcome(
        psd_fail == 0 && mono_fail == 0 && mode_fail == 0 && deterministic,
        format!(
            "200 systems: PSD failures {psd_fail}, monotonicity failures {mono_fail}, per-mode bound failures {mode_fail}; 1 vs 8 threads bit-identical: {deterministic}"
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("heat is zero-class", criterion_1),
        ("wave admissible, not zero-class", criterion_2),
        ("box bound and brute-force box scan", criterion_3),
        ("reference measure classifications", criterion_4),
        ("windowed output below admissibility constant", criterion_5),
        ("resolvent and windowed verdicts agree", criterion_6),
        ("counterexample growth", criterion_7),
        ("assembled resolvent decay with growing energy", criterion_8),
        ("sharpness exponent", criterion_9),
        ("log-factor summability and analytic bound", criterion_10),
        ("property suite", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:>2} {tag}: {name}: {}", i + 1, o.detail);
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
