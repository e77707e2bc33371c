//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use model_evidence::estimators::{
    ais, chib, harmonic_mean, nested_sampling, power_posteriors, trapezoid, AisConfig, ChibConfig,
    Diagnostics, Method, NestedConfig, PowerPosteriorConfig, TemperatureLadder,
};
use model_evidence::harness::{
    load_benchmark, oracle, run_estimator, run_experiment, BenchModel, ExperimentConfig,
    NormalGammaDesign, RunReport,
};
use model_evidence::math::{log_sum_exp, Cholesky, RngStream, RunningMoments, SmallMatrix};
use model_evidence::models::{
    ConstantLikelihood, Differentiable, GaussianMeanPrecisionModel, Model, NormalGammaModel,
};
use model_evidence::samplers::{
    tempered_log_target, GibbsKernel, RandomWalkKernel, TemperedKernelConfig,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

const EXACT_TARGET: f64 = 4553.65;
const LAPLACE_TARGET: f64 = 4553.63;

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn load(name: &str, out: &Path, methods: &[Method]) -> ExperimentConfig {
    let mut c = ExperimentConfig::from_file(&configs_dir().join(name)).expect("config loads");
    c.output_dir = out.join(&c.name);
    if !methods.is_empty() {
        c.estimators.retain(|e| methods.contains(&e.method()));
    }
    c
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within_rel(value: f64, target: f64, rel: f64) -> bool {
    ((value - target) / target).abs() <= rel
}

fn exact_bf(report: &RunReport) -> f64 {
    report
        .reference_log_bayes_factor("model2", "model1")
        .expect("radiata has closed forms")
        .exp()
}

fn criterion_1() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let config = load("radiata.toml", tmp.path(), &[]);
    let start = Instant::now();
    let o = oracle(&config).expect("oracle runs");
    let secs = start.elapsed().as_secs_f64();
    let bf = o.bayes_factors[0].bayes_factor;
    outcome(
        within_rel(bf, EXACT_TARGET, 0.005) && secs < 1.0,
        format!("exact BF21 = {bf:.4} (target {EXACT_TARGET} within 0.5%), {secs:.2} s"),
    )
}

fn criterion_2() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let config = load("radiata.toml", tmp.path(), &[Method::Laplace]);
    let start = Instant::now();
    let (models, _) = load_benchmark(&config.benchmark).unwrap();
    let settings = config.settings(Method::Laplace).unwrap();
    let mut values = Vec::new();
    let mut max_iter = 0;
    for m in &models {
        let e = run_estimator(&m.model, settings, &mut RngStream::new(config.seed, 0))
            .expect("laplace runs");
        if let Diagnostics::Laplace { iterations, .. } = e.diagnostics {
            max_iter = max_iter.max(iterations);
        }
        values.push(e.log_value());
    }
    let secs = start.elapsed().as_secs_f64();
    let bf = (values[1] - values[0]).exp();
    outcome(
        within_rel(bf, LAPLACE_TARGET, 0.001) && max_iter <= 50 && secs < 1.0,
        format!("Laplace BF21 = {bf:.4} (target {LAPLACE_TARGET} within 0.1%), Newton {max_iter} iterations, {secs:.2} s"),
    )
}

/// Mean BF21 within 3 SE of the closed form and SE under `max_se`.
fn radiata_replicates(method: Method, max_se: f64, max_secs: f64) -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let config = load("radiata.toml", tmp.path(), &[method]);
    let start = Instant::now();
    let report = run_experiment(&config).expect("run completes");
    let secs = start.elapsed().as_secs_f64();
    let exact = exact_bf(&report);
    let s = report
        .bayes_factor_summary("model2", "model1", method)
        .and_then(|b| b.bayes_factor.clone())
        .expect("all replicates succeed");
    let se = s.se.unwrap_or(f64::NAN);
    let ok = report.failed_cells() == 0
        && s.count == 18
        && (s.mean - exact).abs() <= 3.0 * se
        && se <= max_se
        && secs < max_secs;
    outcome(
        ok,
        format!(
            "{method} BF21 mean {:.2} se {:.2} over R = {} (exact {exact:.2}, |diff| {:.2}, se bound {max_se}), {secs:.1} s",
            s.mean,
            se,
            s.count,
            (s.mean - exact).abs()
        ),
    )
}

fn criterion_6() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let config = load("prior_sensitivity.toml", tmp.path(), &[]);
    let report = run_experiment(&config).expect("run completes");
    let spread = |v: &[f64]| {
        v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min)
    };
    let analytic: Vec<f64> = report.reference.iter().map(|r| r.log_evidence).collect();
    let hm: Vec<f64> = report
        .models
        .iter()
        .map(|m| {
            report
                .summary(m, Method::HarmonicMean)
                .and_then(|s| s.log_evidence.as_ref())
                .map(|s| s.mean)
                .expect("harmonic mean succeeded")
        })
        .collect();
    let (hs, as_) = (spread(&hm), spread(&analytic));
    outcome(
        report.failed_cells() == 0 && hs < 1.0 && as_ > 3.0,
        format!("harmonic-mean spread {hs:.3} nats vs analytic spread {as_:.3} nats across tau0"),
    )
}

fn criterion_7() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let config = load("normal_gamma.toml", tmp.path(), &[Method::NestedSampling]);
    let start = Instant::now();
    let report = run_experiment(&config).expect("run completes");
    let secs = start.elapsed().as_secs_f64();
    let exact = report.reference[0].log_evidence;
    let values: Vec<f64> = report.cells.iter().filter_map(|c| c.log_evidence).collect();
    let worst = values.iter().map(|v| (v - exact).abs()).fold(0.0, f64::max);
    outcome(
        report.failed_cells() == 0 && values.len() == 18 && worst <= 3.0 && secs < 600.0,
        format!(
            "{} runs, {} failed, worst |estimate - analytic| {worst:.3} nats, {secs:.1} s",
            report.cells.len(),
            report.failed_cells()
        ),
    )
}

fn criterion_8() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let methods = [
        Method::Laplace,
        Method::PowerPosterior,
        Method::Ais,
        Method::HarmonicMean,
    ];
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for (file, band) in [
        ("pima_tau001.toml", (11.0, 16.0)),
        ("pima_tau1.toml", (1.0, 1.6)),
    ] {
        let config = load(file, tmp.path(), &methods);
        let report = run_experiment(&config).expect("run completes");
        ok &= report.failed_cells() == 0;
        for m in methods {
            // exp of the mean log Bayes factor, i.e. the ratio of the
            // geometric-mean evidences.
            let bf = report
                .bayes_factor_summary("model1", "model2", m)
                .and_then(|b| b.log_bayes_factor.as_ref())
                .map_or(f64::NAN, |s| s.mean.exp());
            let inside = bf >= band.0 && bf <= band.1;
            match m {
                // Only the tighter prior is asserted for the harmonic mean.
                Method::HarmonicMean if band.0 == 11.0 => ok &= !inside,
                Method::HarmonicMean => {}
                _ => ok &= inside,
            }
            parts.push(format!("{}:{m}={bf:.2}", config.name));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 3600.0;
    outcome(ok, format!("BF12 {} , {secs:.1} s", parts.join(" ")))
}

fn check(name: &str, pass: bool, failures: &mut Vec<String>) {
    if !pass {
        failures.push(name.to_string());
    }
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();

    // Closed form versus quadrature on the seeded normal-gamma instance.
    let ng_models = NormalGammaDesign::seeded_instance().models().unwrap();
    let ng = &ng_models[0].model;
    let q = ng.quadrature_log_evidence().unwrap().unwrap();
    let a = ng.analytic_log_evidence().unwrap().unwrap();
    check(
        "oracle vs analytic",
        ((q - a) / a).abs() < 1e-5,
        &mut failures,
    );

    // Analytic gradient against central differences.
    let tmp = tempfile::tempdir().unwrap();
    let pima = load("pima_tau001.toml", tmp.path(), &[]);
    if let Ok((models, _)) = load_benchmark(&pima.benchmark) {
        if let BenchModel::Logistic(m) = &models[1].model {
            let theta: Vec<f64> = (0..m.dimension()).map(|i| 0.1 * i as f64 - 0.2).collect();
            let g = m.gradient(&theta).unwrap();
            let scale = g.iter().map(|v| v.abs()).fold(0.0, f64::max);
            let fd_ok = (0..theta.len()).all(|i| {
                let h = 1e-5;
                let (mut up, mut dn) = (theta.clone(), theta.clone());
                up[i] += h;
                dn[i] -= h;
                let fd = (m.log_prior(&up) + m.log_likelihood(&up)
                    - m.log_prior(&dn)
                    - m.log_likelihood(&dn))
                    / (2.0 * h);
                (fd - g[i]).abs() <= 1e-5 * scale
            });
            check("finite-difference gradient", fd_ok, &mut failures);
        }
    } else {
        failures.push("pima dataset unavailable for gradient check".into());
    }

    // Tempered target and kernel at t = 1 equal the untempered ones bit for bit.
    let ngm = NormalGammaModel::new(vec![0.3, -1.2, 0.8, 2.1, 0.0], 0.0, 1.0, 2.0, 2.0).unwrap();
    let theta = [0.4, 1.3];
    let joint = ngm.log_prior(&theta) + ngm.log_likelihood(&theta);
    check(
        "tempered target t = 1",
        tempered_log_target(&ngm, &theta, 1.0).to_bits() == joint.to_bits(),
        &mut failures,
    );
    let gm = GaussianMeanPrecisionModel::new(vec![0.3, -1.2, 0.8, 2.1, 0.0], 0.0, 1.0, 2.0, 2.0)
        .unwrap();
    let (mut r1, mut r2) = (RngStream::new(9, 1), RngStream::new(9, 1));
    let (mut s1, mut s2) = (vec![0.0, 1.0], vec![0.0, 1.0]);
    let mut same = true;
    for _ in 0..500 {
        gm.gibbs_step_gaussian(&mut s1, &mut r1).unwrap();
        gm.gibbs_step_gaussian_tempered(&mut s2, 1.0, &mut r2)
            .unwrap();
        same &= s1.iter().zip(&s2).all(|(x, y)| x.to_bits() == y.to_bits());
    }
    check("tempered Gibbs kernel t = 1", same, &mut failures);

    // A constant likelihood makes every estimator exact.
    let c = -4.0;
    let flat = ConstantLikelihood {
        base: &ngm,
        log_likelihood: c,
    };
    let hm = harmonic_mean(&[c; 200]).unwrap().log_value();
    check(
        "harmonic mean constant likelihood",
        (hm - c).abs() < 1e-12,
        &mut failures,
    );
    let ladder = TemperatureLadder::power(20, 5.0).unwrap();
    let kernel = RandomWalkKernel {
        model: &flat,
        config: TemperedKernelConfig::fixed(0.5),
    };
    let ais_cfg = AisConfig {
        ladder: ladder.clone(),
        samples: 50,
        sweeps: 1,
    };
    let v = ais(&flat, &kernel, &ais_cfg, &mut RngStream::new(1, 2))
        .unwrap()
        .log_value();
    check(
        "AIS constant likelihood",
        (v - c).abs() < 1e-10,
        &mut failures,
    );
    let pp_cfg = PowerPosteriorConfig {
        ladder,
        ..PowerPosteriorConfig::default()
    };
    let mut short = pp_cfg.clone();
    short.chain.iterations = 200;
    let v = power_posteriors(&flat, &kernel, &short, &mut RngStream::new(1, 3))
        .unwrap()
        .log_value();
    check(
        "power posteriors constant likelihood",
        (v - c).abs() < 1e-10,
        &mut failures,
    );
    let tr = trapezoid(&[0.0, 0.5, 1.0], &[c, c, c]).unwrap();
    check("trapezoid constant", (tr - c).abs() < 1e-12, &mut failures);
    let ns_cfg = NestedConfig {
        live_points: 50,
        ..NestedConfig::default()
    };
    let v = nested_sampling(&flat, &ns_cfg, &mut RngStream::new(1, 4))
        .unwrap()
        .log_value();
    check(
        "nested sampling constant likelihood",
        (v - c).abs() < 1e-10,
        &mut failures,
    );

    // Chib's identity holds at two different points.
    let chib_cfg = ChibConfig {
        burn_in: 500,
        iterations: 5_000,
        reduced_burn_in: 200,
        reduced_iterations: 5_000,
        candidates: 32,
        scoring_draws: 1_000,
    };
    let ng_model = match ng {
        BenchModel::NormalGamma(m) => m,
        _ => unreachable!(),
    };
    let post = ng_model.posterior();
    let pa = [post.mu_n, post.a_n / post.b_n];
    let pb = [post.mu_n + 0.1, 0.8 * post.a_n / post.b_n];
    let (mut ma, mut mb) = (RunningMoments::default(), RunningMoments::default());
    for r in 0..6 {
        ma.push(
            chib(
                ng_model,
                &chib_cfg,
                Some(&pa),
                &mut RngStream::for_task(3, &["a"], r),
            )
            .unwrap()
            .log_value(),
        );
        mb.push(
            chib(
                ng_model,
                &chib_cfg,
                Some(&pb),
                &mut RngStream::for_task(3, &["b"], r),
            )
            .unwrap()
            .log_value(),
        );
    }
    let sd = (ma.variance().unwrap() + mb.variance().unwrap())
        .sqrt()
        .max(1e-3);
    check(
        "Chib point independence",
        (ma.mean().unwrap() - mb.mean().unwrap()).abs() < 3.0 * sd
            && (ma.mean().unwrap() - a).abs() < 0.05,
        &mut failures,
    );
    let gibbs_ais = ais(
        ng_model,
        &GibbsKernel(ng_model),
        &AisConfig {
            ladder: TemperatureLadder::power(30, 4.0).unwrap(),
            samples: 200,
            sweeps: 1,
        },
        &mut RngStream::new(5, 5),
    )
    .unwrap()
    .log_value();
    check(
        "Gibbs AIS near closed form",
        (gibbs_ais - a).abs() < 0.5,
        &mut failures,
    );

    // log-sum-exp stability and Cholesky round trip.
    let lse = log_sum_exp(&[1000.0, 1000.0]).unwrap();
    check(
        "log_sum_exp overflow",
        (lse - (1000.0 + 2f64.ln())).abs() < 1e-12,
        &mut failures,
    );
    let lse = log_sum_exp(&[-1000.0, -1000.0 - 1e-3]).unwrap();
    let direct = -1000.0 + (1.0 + (-1e-3f64).exp()).ln();
    check(
        "log_sum_exp underflow",
        (lse - direct).abs() < 1e-12,
        &mut failures,
    );
    let m = SmallMatrix::from_rows(&[&[4.0, 1.0, 0.5], &[1.0, 3.0, 0.2], &[0.5, 0.2, 2.0]]);
    let ch = Cholesky::new(&m).unwrap();
    let x = ch.solve(&[1.0, 2.0, 3.0]);
    let back = m.mul_vec(&x);
    let resid = back
        .iter()
        .zip([1.0, 2.0, 3.0])
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    check("Cholesky solve residual", resid < 1e-12, &mut failures);
    let det = 4.0 * (3.0 * 2.0 - 0.04) - 1.0 * (2.0 - 0.1) + 0.5 * (0.2 - 1.5);
    check(
        "Cholesky log-determinant",
        (ch.logdet() - f64::ln(det)).abs() < 1e-12,
        &mut failures,
    );

    // Same config twice gives identical bytes.
    let mut cfg = ExperimentConfig::from_toml_str(
        "name = \"det\"\nreplicates = 3\nseed = 5\nthreads = 2\n[benchmark]\nkind = \"normal_gamma\"\nn = 20\n\
         [estimators.exact]\n[estimators.harmonic_mean]\niterations = 2000\n[estimators.ais]\nsamples = 20\n",
        tmp.path(),
    )
    .unwrap();
    let read = |d: &Path, f: &str| std::fs::read(d.join(f)).unwrap();
    cfg.output_dir = tmp.path().join("a");
    run_experiment(&cfg).unwrap();
    cfg.output_dir = tmp.path().join("b");
    run_experiment(&cfg).unwrap();
    let (da, db) = (tmp.path().join("a"), tmp.path().join("b"));
    check(
        "report determinism",
        read(&da, "cells.csv") == read(&db, "cells.csv")
            && read(&da, "report.json") == read(&db, "report.json"),
        &mut failures,
    );

    let secs = start.elapsed().as_secs_f64();
    let pass = failures.is_empty() && secs < 300.0;
    let detail = if failures.is_empty() {
        format!("all property checks hold, {secs:.1} s")
    } else {
        format!("failing: {}, {secs:.1} s", failures.join("; "))
    };
    outcome(pass, detail)
}

fn main() -> ExitCode {
    let criteria: [(u8, &str, fn() -> Outcome); 9] = [
        (1, "exact oracle reproduction", criterion_1),
        (2, "Laplace", criterion_2),
        (3, "Chib", || radiata_replicates(Method::Chib, 5.0, 600.0)),
        (4, "power posteriors", || {
            radiata_replicates(Method::PowerPosterior, 200.0, 1800.0)
        }),
        (5, "AIS", || radiata_replicates(Method::Ais, 500.0, 1800.0)),
        (6, "harmonic-mean pathology", criterion_6),
        (7, "nested sampling", criterion_7),
        (8, "Pima benchmark", criterion_8),
        (9, "property suite", criterion_9),
    ];
    let mut failed = 0;
    for (n, name, f) in criteria {
        let o = match std::panic::catch_unwind(f) {
            Ok(o) => o,
            Err(_) => outcome(false, "panicked".into()),
        };
        failed += usize::from(!o.pass);
        println!(
            "{} {n} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
