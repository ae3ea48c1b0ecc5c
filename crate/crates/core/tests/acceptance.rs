//! Acceptance criteria. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use longmem::dft::{self, Direction};
use longmem::estimators::{self, Histogram};
use longmem::sampler::{self, RngStream};
use longmem::{SpectralModel, Study};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;

/// Seed for every stochastic criterion: the CLI default.
const SEED: u64 = 5;
const N: usize = 200;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Collects sub-check messages; the criterion fails if any sub-check fails.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn add(&mut self, ok: bool, msg: impl Into<String>) {
        let msg = msg.into();
        if ok {
            self.notes.push(msg);
        } else {
            self.failures.push(msg);
        }
    }

    fn finish(self) -> Outcome {
        if self.failures.is_empty() {
            Ok(self.notes.join("; "))
        } else {
            Err(format!(
                "{} | passing: {}",
                self.failures.join("; "),
                self.notes.join("; ")
            ))
        }
    }
}

fn round_sig(x: f64, digits: i32) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let scale = 10f64.powi(digits - 1 - x.abs().log10().floor() as i32);
    (x * scale).round() / scale
}

fn same_sig(actual: &[f64], expected: &[f64], digits: i32) -> bool {
    actual.len() == expected.len()
        && actual
            .iter()
            .zip(expected)
            .all(|(a, e)| round_sig(*a, digits) == round_sig(*e, digits))
}

fn fmt(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.4}")).collect();
    format!("({})", parts.join(", "))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn criterion_1() -> Outcome {
    let mut c = Checks::default();
    let (model, elapsed) = timed(|| SpectralModel::new(7.0, 5));
    let model = model.map_err(|e| e.to_string())?;
    c.add(
        same_sig(model.density(), &[11.31, 67.61, 3162.3, 67.61, 11.31], 3),
        format!("density {}", fmt(model.density())),
    );
    c.add(
        same_sig(model.first_row(), &[664.0, 637.0, 612.0, 612.0, 637.0], 3),
        format!("first row {}", fmt(model.first_row())),
    );
    let flat = SpectralModel::new(0.0, 5).map_err(|e| e.to_string())?;
    let identity = (flat.first_row()[0] - 1.0).abs() <= 1e-10
        && flat.first_row()[1..].iter().all(|r| r.abs() <= 1e-10);
    c.add(identity, format!("beta=0 row {}", fmt(flat.first_row())));
    c.add(
        elapsed < Duration::from_millis(1),
        format!("build {elapsed:?} < 1ms"),
    );
    c.finish()
}

fn criterion_2() -> Outcome {
    let model = SpectralModel::new(3.0, 7).map_err(|e| e.to_string())?;
    let expected = [12.510, 8.253, 6.140, 5.543, 5.543, 6.140, 8.253];
    check(
        same_sig(model.first_row(), &expected, 4),
        format!("first row {}", fmt(model.first_row())),
    )
}

fn criterion_3() -> Outcome {
    let mut c = Checks::default();
    let rows = [
        (2.2, 4.17, 1.58, 1.72e3),
        (3.0, 2.93, 0.97, 9.62e4),
        (10.0, 2.05, 0.52, 1.03e21),
    ];
    let start = Instant::now();
    for (beta, d, alpha, var) in rows {
        let r = SpectralModel::new(beta, N)
            .map_err(|e| e.to_string())?
            .eigen_report();
        c.add(
            (r.d_est - d).abs() <= 0.02,
            format!("beta {beta}: d_est {:.4} (paper {d})", r.d_est),
        );
        c.add(
            (r.alpha_est - alpha).abs() <= 0.02,
            format!("beta {beta}: alpha_est {:.4} (paper {alpha})", r.alpha_est),
        );
        c.add(
            ((r.var_est - var) / var).abs() <= 0.02,
            format!("beta {beta}: var_est {:.4e} (paper {var:e})", r.var_est),
        );
    }
    let elapsed = start.elapsed();
    c.add(
        elapsed < Duration::from_millis(100),
        format!("runtime {elapsed:?} < 0.1s"),
    );
    c.finish()
}

fn criterion_4() -> Outcome {
    let mut c = Checks::default();
    const R: usize = 500;
    // (beta, [(paper mean, paper cv)] for d, alpha, variance)
    let rows = [
        (2.2, [(4.22, 0.22), (1.61, 0.29), (1.67e3, 0.71)]),
        (3.0, [(3.21, 0.23), (1.10, 0.34), (8.80e4, 0.88)]),
        (10.0, [(2.00, 0.03), (0.50, 0.05), (1.03e21, 0.96)]),
    ];
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let start = Instant::now();
    for (beta, expected) in rows {
        let report = Study::new(beta, N)
            .replicates(R)
            .seed(SEED)
            .workers(workers)
            .run()
            .map_err(|e| e.to_string())?;
        let measured = [
            ("d", report.d),
            ("alpha", report.alpha),
            ("variance", report.variance),
        ];
        for ((name, m), (mean, cv)) in measured.iter().zip(expected) {
            let se = cv * mean / (R as f64).sqrt();
            let dev = (m.mean - mean) / se;
            c.add(
                dev.abs() <= 3.0,
                format!(
                    "beta {beta}: mean_{name} {:.4e} vs {mean:e} ({dev:+.2} SE)",
                    m.mean
                ),
            );
        }
    }
    let elapsed = start.elapsed();
    c.add(
        elapsed < Duration::from_secs(30),
        format!("runtime {elapsed:?} < 30s"),
    );
    c.finish()
}

fn criterion_5() -> Outcome {
    let mut c = Checks::default();
    let kappa = |beta| SpectralModel::new(beta, N).map(|m| m.eigen_report().kappa);
    let k0 = kappa(0.0).map_err(|e| e.to_string())?;
    c.add((k0 - 1.0).abs() <= 1e-12, format!("beta 0: kappa {k0}"));
    for (beta, paper) in [(2.2, 3.4e2), (10.0, 3.2e11)] {
        let k = kappa(beta).map_err(|e| e.to_string())?;
        let factor = (k / paper).max(paper / k);
        c.add(
            factor <= 1.5,
            format!("beta {beta}: kappa {k:.4e} (paper {paper:e})"),
        );
    }
    c.finish()
}

fn criterion_6() -> Outcome {
    let mut c = Checks::default();
    for beta in [1.0, 2.2, 3.0, 7.0, 10.0] {
        let slope = SpectralModel::new(beta, N)
            .map_err(|e| e.to_string())?
            .eigen_report()
            .slope_fit;
        let target = -beta / 2.0;
        let rel = ((slope - target) / target).abs();
        c.add(
            rel <= 0.05,
            format!("beta {beta}: slope {slope:.4} ({:.2}%)", 100.0 * rel),
        );
    }
    c.finish()
}

fn criterion_7() -> Outcome {
    let mut c = Checks::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let rn = 2 * rng.random_range(1..=50) + 1;
        let row: Vec<f64> = (0..rn).map(|_| rng.random_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..rn).map(|_| rng.random_range(-1.0..1.0)).collect();
        let fast = dft::circular_convolve(&row, &v).map_err(|e| e.to_string())?;
        let oracle: Vec<f64> = (0..rn)
            .map(|i| (0..rn).map(|j| row[(i + rn - j) % rn] * v[j]).sum())
            .collect();
        let scale = oracle.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let err = fast
            .iter()
            .zip(&oracle)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
            / scale;
        worst = worst.max(err);
    }
    c.add(
        worst <= 1e-9,
        format!("convolution worst relative error {worst:.2e}"),
    );

    let mut worst_eig: f64 = 0.0;
    for beta in [0.0, 1.0, 2.2, 3.0, 7.0, 10.0] {
        for n in [5usize, 20, 51, 101] {
            let model = SpectralModel::new(beta, n).map_err(|e| e.to_string())?;
            let a = model.dense_operator().map_err(|e| e.to_string())?;
            let m = DMatrix::from_row_slice(a.order(), a.order(), a.as_slice());
            let mut dense: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
            dense.sort_by(|x, y| y.total_cmp(x));
            let top = model.eigenvalues()[0];
            for (x, y) in model.eigenvalues().iter().zip(&dense) {
                worst_eig = worst_eig.max((x - y).abs() / top);
            }
        }
    }
    c.add(
        worst_eig <= 1e-8,
        format!("eigenvalue worst error / lambda_1 {worst_eig:.2e}"),
    );
    c.finish()
}

fn criterion_8() -> Outcome {
    let mut c = Checks::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);

    let mut parseval: f64 = 0.0;
    for _ in 0..200 {
        let len = rng.random_range(1..400);
        let x: Vec<Complex64> = (0..len)
            .map(|_| Complex64::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)))
            .collect();
        let e: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        let y = dft::unitary_dft(&x, Direction::Forward).map_err(|e| e.to_string())?;
        let eh: f64 = y.iter().map(|z| z.norm_sqr()).sum();
        parseval = parseval.max((e - eh).abs() / e);
    }
    c.add(parseval <= 1e-10, format!("parseval {parseval:.1e}"));

    let mut popoviciu: f64 = 0.0;
    let mut invariance: f64 = 0.0;
    for beta in [0.0, 0.5, 1.0, 2.2, 3.0, 5.0, 7.0, 10.0] {
        let model = SpectralModel::new(beta, N).map_err(|e| e.to_string())?;
        for idx in 0..100 {
            let s = sampler::generate(&model, &mut RngStream::new(SEED, idx))
                .map_err(|e| e.to_string())?;
            let st = estimators::sample_stats(&s.series).map_err(|e| e.to_string())?;
            popoviciu = popoviciu.max(st.ratio);
            let c0: f64 =
                rng.random_range(0.1..10.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
            let m0: f64 = rng.random_range(-100.0..100.0);
            let moved: Vec<f64> = s.standardized.iter().map(|x| c0 * x + m0).collect();
            let a = estimators::sample_stats(&s.standardized).map_err(|e| e.to_string())?;
            let b = estimators::sample_stats(&moved).map_err(|e| e.to_string())?;
            invariance = invariance.max((a.ratio - b.ratio).abs());
        }
    }
    c.add(
        popoviciu <= 0.25 + 1e-12,
        format!("max ratio {popoviciu:.4}"),
    );
    c.add(
        invariance <= 1e-10,
        format!("location-scale {invariance:.1e}"),
    );

    let reports: Vec<_> = (0..=10)
        .map(|b| SpectralModel::new(b as f64, N).map(|m| m.eigen_report()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let monotone = reports
        .windows(2)
        .all(|w| w[1].kappa >= w[0].kappa && w[1].d_raw <= w[0].d_raw);
    c.add(monotone, "kappa up and d_raw down in beta".to_string());

    let mut mass: f64 = 0.0;
    for beta in [0.0, 2.2, 10.0] {
        let h: Histogram = Study::new(beta, N)
            .replicates(50)
            .seed(SEED)
            .histogram(100)
            .map_err(|e| e.to_string())?;
        mass = mass.max((h.area() - 1.0).abs());
    }
    c.add(mass <= 1e-9, format!("histogram mass error {mass:.1e}"));

    let base = Study::new(3.0, N).replicates(100).seed(SEED);
    let serial = base.clone().run().map_err(|e| e.to_string())?;
    let parallel = base.clone().workers(4).run().map_err(|e| e.to_string())?;
    let again = base.clone().workers(4).run().map_err(|e| e.to_string())?;
    let h1 = base.clone().histogram(100).map_err(|e| e.to_string())?;
    let h4 = base.workers(4).histogram(100).map_err(|e| e.to_string())?;
    let deterministic = serial.per_replicate == parallel.per_replicate
        && parallel.per_replicate == again.per_replicate
        && serial.variance.mean.to_bits() == parallel.variance.mean.to_bits()
        && h1 == h4;
    c.add(deterministic, "deterministic across workers".to_string());
    c.finish()
}

fn criterion_9() -> Outcome {
    let mut c = Checks::default();
    let start = Instant::now();
    let fit = |beta: f64| -> Result<f64, String> {
        let h = Study::new(beta, N)
            .replicates(200)
            .seed(SEED)
            .histogram(100)
            .map_err(|e| e.to_string())?;
        estimators::fit_alpha_from_histogram(&h).map_err(|e| e.to_string())
    };
    let a10 = fit(10.0)?;
    c.add(
        (a10 - 0.5).abs() <= 0.1,
        format!("beta 10: fit_alpha {a10:.3}"),
    );
    let a0 = fit(0.001)?;
    c.add(
        a0 > 5.0,
        format!("beta 0.001: fit_alpha {a0:.3} (need > 5)"),
    );
    let a22 = fit(2.2)?;
    c.add(
        (1.3..=1.9).contains(&a22),
        format!("beta 2.2: fit_alpha {a22:.3}"),
    );
    let elapsed = start.elapsed();
    c.add(
        elapsed < Duration::from_secs(10),
        format!("runtime {elapsed:?} < 10s"),
    );
    c.finish()
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("transform-pair rows (beta 0 and 7, n 5)", criterion_1),
        ("first row (beta 3, n 7)", criterion_2),
        ("eigenvalue estimates of d, alpha, variance", criterion_3),
        (
            "measured d, alpha, variance over 500 replicates",
            criterion_4,
        ),
        ("condition numbers", criterion_5),
        ("spectral slope recovery", criterion_6),
        ("oracle equivalence", criterion_7),
        ("property suite", criterion_8),
        ("distribution shapes from histograms", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} [{name}]: PASS  {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL  {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
