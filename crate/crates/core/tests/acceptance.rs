//! Acceptance suite. Runs every criterion, prints one status line per
//! criterion and exits non-zero if any criterion fails.
//!
//! Run with `cargo test -p rinar --test acceptance`. The real-data
//! criterion reads the series named by `RINAR_FURTH_CSV` (or
//! `data/furth.csv` at the workspace root) and reports SKIP when neither
//! exists.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rinar::identifiability::CaseLabel;
use rinar::rounding::{frac_part, int_part, round_nearest, sign};
use rinar::{
    classify_case, compute_i0, compute_nu0, contrast, fit, monte_carlo, rolling_forecast,
    sample_mean, simulate, yule_walker, FitOptions, Fraction, InnovationSpec, LagWindow, McConfig,
    Parallelism, RinarParams, SimulateOptions,
};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Skip,
}

struct Outcome {
    status: Status,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { status: Status::Pass, notes: Vec::new() }
    }

    fn skip(why: impl Into<String>) -> Self {
        Outcome { status: Status::Skip, notes: vec![why.into()] }
    }

    /// Records a sub-check; any failing sub-check fails the criterion.
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.notes.push(format!("ok   {what}"));
        } else {
            self.status = Status::Fail;
            self.notes.push(format!("FAIL {what}"));
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(format!("     {}", what.into()));
    }
}

fn f(n: i64, d: i64) -> Fraction {
    Fraction::new(n, d).unwrap()
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

// ---------------------------------------------------------------- 1

fn criterion_rounding() -> Outcome {
    let mut o = Outcome::new();

    let mut bad = 0usize;
    for k in -1000i64..=1000 {
        for x in [k as f64 + 0.5, k as f64 - 0.5] {
            // Half-integers round to the neighbour of larger magnitude.
            let expected = (x.abs() + 0.5) as i64 * if x < 0.0 { -1 } else { 1 };
            if round_nearest(x).unwrap() != expected {
                bad += 1;
            }
        }
    }
    o.check(bad == 0, format!("k ± 0.5 for k in [-1000, 1000]: {bad} mismatches"));
    o.check(
        round_nearest(2.5).unwrap() == 3 && round_nearest(-0.5).unwrap() == -1,
        "<2.5> = 3, <-0.5> = -1",
    );

    // Multiples of 2^-20 keep every sum and difference below exact.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5255_4e44);
    let scale = (1u64 << 20) as f64;
    let draw = |rng: &mut ChaCha8Rng, nonneg: bool| {
        let k: i64 = rng.random_range(-(100i64 << 20)..=(100i64 << 20));
        let v = k as f64 / scale;
        if nonneg { v.abs() } else { v }
    };
    let ind = |b: bool| i64::from(b);
    let mut fails = [0usize; 7];
    for _ in 0..100_000 {
        let x = draw(&mut rng, false);
        let r = round_nearest(x).unwrap();
        let s = sign(x).unwrap() as f64;
        let fr = frac_part(x).unwrap();
        let ip = int_part(x).unwrap();
        if (r as f64 - x).abs() > 0.5 {
            fails[0] += 1;
        }
        let ra = round_nearest(x.abs()).unwrap();
        if r.abs() != ra || ra as f64 > x.abs() + 0.5 {
            fails[1] += 1;
        }
        if r as f64 + s * fr - s * ind(fr >= 0.5) as f64 != x {
            fails[5] += 1;
        }
        if ip as f64 + s * fr != x {
            fails[6] += 1;
        }

        let a = draw(&mut rng, true);
        let b = draw(&mut rng, true);
        let (fa, fb) = (frac_part(a).unwrap(), frac_part(b).unwrap());
        let c = round_nearest(a).unwrap() + round_nearest(b).unwrap()
            - ind(fa >= 0.5)
            - ind(fb >= 0.5);
        if round_nearest(a + b).unwrap() != c + round_nearest(fa + fb).unwrap() {
            fails[2] += 1;
        }
        if frac_part(a + b).unwrap() != frac_part(fa + fb).unwrap() {
            fails[3] += 1;
        }
        if round_nearest(a).unwrap() != int_part(a).unwrap() + round_nearest(fa).unwrap() {
            fails[4] += 1;
        }
    }
    let names = [
        "|<x> - x| <= 1/2",
        "|<x>| = <|x|> <= |x| + 1/2",
        "<a+b> = c + <{a}+{b}>",
        "{a+b} = {{a}+{b}}",
        "<a> = [a] + <{a}>",
        "a = <a> + s(a){a} - s(a)1[{a} >= 1/2]",
        "a = [a] + s(a){a}",
    ];
    for (name, n) in names.iter().zip(fails) {
        o.check(n == 0, format!("{name} on 1e5 random reals: {n} failures"));
    }
    o
}

// ---------------------------------------------------------------- 2

fn criterion_worked_example() -> Outcome {
    let mut o = Outcome::new();
    let nu = compute_nu0(&[f(3, 25), f(3, 8), f(1, 5), f(-1, 4)]).unwrap();
    o.check(
        nu.a_coeffs == vec![480, 1500, 800, -1000],
        format!("A = {:?}", nu.a_coeffs),
    );
    o.check(nu.d == 20, format!("d = {}", nu.d));
    o.check(
        nu.nu0 == f(1, 40),
        format!("nu0 = {} (expected 1/40; denominator product is {})", nu.nu0, nu.denominator_product),
    );
    let i0 = compute_i0(f(1, 40), f(5, 2)).unwrap();
    let expected = rinar::identifiability::RationalInterval::half_open(f(5, 2), f(101, 40));
    o.check(i0 == expected, format!("I0(1/40, 5/2) = {i0}"));
    o
}

// ---------------------------------------------------------------- 3

fn random_rational_set(rng: &mut ChaCha8Rng) -> Vec<Fraction> {
    let p = rng.random_range(1..=4usize);
    loop {
        let alphas: Vec<Fraction> = (0..p)
            .map(|_| {
                let b = rng.random_range(2..=16i64);
                let mut a = 0;
                while a == 0 {
                    a = rng.random_range(-(b - 1)..=(b - 1));
                }
                f(a, b)
            })
            .collect();
        if alphas.iter().map(|a| a.abs().to_f64()).sum::<f64>() < 1.0 {
            return alphas;
        }
    }
}

fn criterion_length_law() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x4c45_4e47);
    let mut not_contained = 0;
    let mut tally = std::collections::BTreeMap::<&str, (usize, usize)>::new();
    let mut first_mismatch = None;
    let (mut p2_cases, mut p2_bad) = (0, 0);
    for _ in 0..200 {
        let alphas = random_rational_set(&mut rng);
        let den = rng.random_range(1..=16i64);
        let lambda_star = f(rng.random_range(0..=5 * den), den);
        let nu0 = compute_nu0(&alphas).unwrap().nu0;
        let i0 = compute_i0(nu0, lambda_star).unwrap();
        let len = i0.length().unwrap();
        if !i0.contains(&lambda_star) {
            not_contained += 1;
        }
        let class = classify_case(nu0, lambda_star).unwrap();
        let key = match class.label {
            CaseLabel::Even => "even",
            CaseLabel::OddLong => "odd-long",
            CaseLabel::OddShort => "odd-short",
        };
        let entry = tally.entry(key).or_default();
        entry.0 += 1;
        if len == class.predicted_length {
            entry.1 += 1;
        } else if first_mismatch.is_none() {
            first_mismatch = Some(format!(
                "nu0 = {nu0}, lambda* = {lambda_star}: I0 = {i0}, length {len}, rule {}",
                class.predicted_length
            ));
        }
        if alphas.len() == 2 {
            p2_cases += 1;
            let (b1, b2) = (alphas[0].den(), alphas[1].den());
            let lower = f(1, b1 * b2);
            let upper = f(1, b1.max(b2));
            if len < lower || len > upper {
                p2_bad += 1;
            }
        }
    }
    o.check(not_contained == 0, format!("lambda* in I0: {not_contained} violations"));
    for (key, (n, ok)) in &tally {
        o.check(ok == n, format!("length rule, {key}: {ok}/{n} match"));
    }
    if let Some(m) = first_mismatch {
        o.note(format!("first mismatch: {m}"));
    }
    o.check(
        p2_bad == 0,
        format!("1/(b1 b2) <= |I0| <= min(1/b1, 1/b2): {p2_bad} violations over {p2_cases} cases"),
    );
    o
}

// ---------------------------------------------------------------- 4 + 7

fn criterion_monte_carlo(config: &McConfig) -> (Outcome, Option<rinar::McSummary>) {
    let mut o = Outcome::new();
    let summary = match monte_carlo(config, Parallelism::Max) {
        Ok(s) => s,
        Err(e) => {
            o.check(false, format!("monte carlo failed: {e}"));
            return (o, None);
        }
    };
    o.note(format!(
        "{} replications, {} failed, {} not converged",
        summary.reps_completed, summary.failures, summary.non_converged
    ));
    let p = config.theta0.order();
    for s in &summary.per_parameter {
        let sd = s.sd.unwrap_or(f64::NAN);
        let is_lambda = s.name == "lambda";
        let (mean_tol, sd_band) = if is_lambda { (0.2, (0.1, 0.6)) } else { (0.02, (0.02, 0.10)) };
        o.check(
            within(s.mean, s.truth, mean_tol),
            format!("{}: mean {:.4} vs {} (±{mean_tol})", s.name, s.mean, s.truth),
        );
        o.check(
            (sd_band.0..=sd_band.1).contains(&sd),
            format!("{}: sd {:.4} in [{}, {}]", s.name, sd, sd_band.0, sd_band.1),
        );
    }
    o.check(summary.per_parameter.len() == p + 1, "one summary row per parameter");
    (o, Some(summary))
}

fn criterion_determinism(config: &McConfig, parallel: Option<&rinar::McSummary>) -> Outcome {
    let mut o = Outcome::new();
    let Some(parallel) = parallel else {
        o.check(false, "no parallel run to compare against");
        return o;
    };
    let serial = monte_carlo(config, Parallelism::Serial).unwrap();
    // An explicit pool so the comparison is meaningful on single-core hosts.
    let pooled = monte_carlo(config, Parallelism::Threads(8)).unwrap();
    let bits = |m: Vec<Vec<f64>>| -> Vec<Vec<u64>> {
        m.into_iter().map(|r| r.into_iter().map(f64::to_bits).collect()).collect()
    };
    let a = bits(serial.estimates_matrix());
    for (label, other) in [
        (format!("max ({} threads)", rayon::current_num_threads()), parallel),
        ("8-thread pool".to_string(), &pooled),
    ] {
        let b = bits(other.estimates_matrix());
        let differing = a.iter().zip(&b).filter(|(x, y)| x != y).count();
        o.check(
            a.len() == b.len() && differing == 0,
            format!(
                "serial vs {label}: {} x {} matrices, {differing} differing rows",
                a.len(),
                a.first().map_or(0, Vec::len)
            ),
        );
    }

    // Same comparison through the command-line entry point.
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str, name: &str| -> String {
        let path = dir.path().join(name);
        let argv = [
            "rinar", "experiment", "--reps", "40", "--seed", "7", "--threads", threads,
            "--out", path.to_str().unwrap(),
        ];
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = rinar::cli::dispatch_to(argv, &mut out, &mut err);
        assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
        std::fs::read_to_string(path).unwrap()
    };
    let serial_csv = run("1", "serial.csv");
    let parallel_csv = run("0", "parallel.csv");
    let pooled_csv = run("8", "pooled.csv");
    o.check(
        !serial_csv.is_empty() && serial_csv == parallel_csv && serial_csv == pooled_csv,
        "`experiment --threads 1`, `--threads 0` and `--threads 8` write identical estimate files",
    );
    o
}

// ---------------------------------------------------------------- 5

fn random_stationary(rng: &mut ChaCha8Rng) -> RinarParams {
    let p = rng.random_range(1..=4usize);
    let budget = rng.random_range(0.2..0.9);
    let raw: Vec<f64> = (0..p).map(|_| rng.random_range(-1.0..1.0)).collect();
    let total: f64 = raw.iter().map(|a: &f64| a.abs()).sum();
    let alphas = raw.iter().map(|a| a / total * budget).collect();
    RinarParams::new(alphas, rng.random_range(0.5..4.0)).unwrap()
}

fn criterion_monotone() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x4d4f_4e4f);
    let options = FitOptions::default();

    let (mut trace_bad, mut improve_bad, mut errors) = (0, 0, 0);
    for i in 0..20 {
        let theta = random_stationary(&mut rng);
        let innov = InnovationSpec::poisson_difference(1.0).unwrap();
        let series = simulate(&theta, &innov, &SimulateOptions::new(500, 1000 + i)).unwrap();
        match fit(&series, theta.order(), &options) {
            Ok(r) => {
                if r.objective_trace.windows(2).any(|w| w[1] > w[0]) {
                    trace_bad += 1;
                }
                let init = contrast(&r.yw_init, &series).unwrap();
                if r.objective > init || r.objective > r.initial_objective {
                    improve_bad += 1;
                }
            }
            Err(e) => {
                errors += 1;
                o.note(format!("instance {i}: {e}"));
            }
        }
    }
    o.check(errors == 0, format!("noisy instances fitted: {} of 20", 20 - errors));
    o.check(trace_bad == 0, format!("objective trace non-increasing: {trace_bad} violations"));
    o.check(improve_bad == 0, format!("phi(theta_hat) <= phi(yw init): {improve_bad} violations"));

    // Noise-free paths from a random start, without burn-in so the
    // transient (the only informative part) is kept.
    let (mut small, mut total) = (0, 0);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let theta = random_stationary(&mut rng);
        let start: Vec<i64> = (0..theta.order()).map(|_| rng.random_range(-20..=20)).collect();
        let opts = SimulateOptions::new(500, 2000 + i)
            .burn_in(0)
            .initial(LagWindow::new(start));
        let series = simulate(&theta, &InnovationSpec::DegenerateZero, &opts).unwrap();
        total += 1;
        match fit(&series, theta.order(), &options) {
            Ok(r) => {
                worst = worst.max(r.objective);
                if r.objective <= 0.05 {
                    small += 1;
                }
            }
            Err(e) => o.note(format!("noise-free instance {i}: {e}")),
        }
    }
    o.check(
        small * 10 >= total * 9,
        format!("noise-free phi <= 0.05 in {small}/{total} (need >= 90%); worst {worst:.4}"),
    );
    o
}

// ---------------------------------------------------------------- 6

fn criterion_mean_identity() -> Outcome {
    let mut o = Outcome::new();
    let theta = RinarParams::new(vec![0.12, 0.375, 0.2, -0.25], 2.5).unwrap();
    let innov = InnovationSpec::poisson_difference(1.0).unwrap();
    let series = simulate(&theta, &innov, &SimulateOptions::new(100_000, 6).burn_in(500)).unwrap();
    let mean = sample_mean(&series);
    let lhs = mean * (1.0 - theta.alphas().iter().sum::<f64>());
    o.check(within(lhs, 2.5, 0.55), format!("X̄(1 - Σα) = {lhs:.4} (mean {mean:.4}), band 2.5 ± 0.55"));
    o
}

// ---------------------------------------------------------------- 8

fn furth_path() -> Option<PathBuf> {
    if let Ok(p) = std::env::var("RINAR_FURTH_CSV") {
        if !p.trim().is_empty() {
            return Some(PathBuf::from(p));
        }
    }
    let fallback = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/furth.csv");
    fallback.exists().then_some(fallback)
}

fn criterion_real_data() -> Outcome {
    let Some(path) = furth_path() else {
        return Outcome::skip("RINAR_FURTH_CSV not set and data/furth.csv absent");
    };
    let mut o = Outcome::new();
    let series = match rinar::io::read_series_csv(&path) {
        Ok(s) => s,
        Err(e) => {
            o.check(false, format!("reading {}: {e}", path.display()));
            return o;
        }
    };
    let v = series.values();
    let mean = sample_mean(&series);
    let var = rinar::stats::sample_variance(&series);
    o.check(v.len() == 505, format!("{} values", v.len()));
    o.check(v.iter().all(|x| (0..=7).contains(x)), "all values in 0..=7");
    o.check(within(mean, 1.59, 0.01), format!("mean {mean:.4}"));
    o.check(within(var, 1.51, 0.02), format!("variance {var:.4}"));

    match yule_walker(&series, 2) {
        Ok(yw) => o.check(
            within(yw.alphas[0], 0.808, 0.005)
                && within(yw.alphas[1], -0.214, 0.005)
                && within(yw.lambda0, 0.646, 0.005),
            format!("Yule-Walker p=2: ({:.4}, {:.4}), lambda0 {:.4}", yw.alphas[0], yw.alphas[1], yw.lambda0),
        ),
        Err(e) => o.check(false, format!("Yule-Walker: {e}")),
    }

    let head = match series.head(400) {
        Ok(h) => h,
        Err(e) => {
            o.check(false, format!("first 400 observations: {e}"));
            return o;
        }
    };
    match fit(&head, 2, &FitOptions::default()) {
        Ok(r) => {
            let t = r.theta_hat.to_vec();
            o.check(
                within(t[0], 0.818, 0.02) && within(t[1], -0.23, 0.02) && within(t[2], 0.697, 0.02),
                format!("fit on first 400: ({:.4}, {:.4}, {:.4})", t[0], t[1], t[2]),
            );
            match rolling_forecast(&r.theta_hat, &series, 400) {
                Ok(rep) => o.check(
                    rep.predictions.len() == 105 && within(rep.mae, 0.743, 0.01),
                    format!("MAE over {} forecasts: {:.4}", rep.predictions.len(), rep.mae),
                ),
                Err(e) => o.check(false, format!("forecast: {e}")),
            }
        }
        Err(e) => o.check(false, format!("fit: {e}")),
    }
    o
}

// ----------------------------------------------------------------

fn main() -> ExitCode {
    let config = McConfig::reference_rinar4();
    let mut mc_summary = None;
    let mut results: Vec<(u32, &str, Duration, Duration, Outcome)> = Vec::new();
    let mut run = |id: u32, name: &'static str, budget: Duration, body: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let mut outcome = body();
        let elapsed = start.elapsed();
        if outcome.status != Status::Skip {
            outcome.check(elapsed <= budget, format!("runtime {elapsed:.2?} within {budget:?}"));
        }
        results.push((id, name, elapsed, budget, outcome));
    };

    run(1, "rounding kernel", Duration::from_secs(5), &mut criterion_rounding);
    run(2, "worked identifiability example", Duration::from_secs(1), &mut criterion_worked_example);
    run(3, "identifiability length law", Duration::from_secs(30), &mut criterion_length_law);
    run(4, "Monte Carlo reproduction", Duration::from_secs(600), &mut || {
        let (o, s) = criterion_monte_carlo(&config);
        mc_summary = s;
        o
    });
    run(7, "serial/parallel determinism", Duration::from_secs(600), &mut || {
        criterion_determinism(&config, mc_summary.as_ref())
    });
    run(5, "estimator monotonicity", Duration::from_secs(120), &mut criterion_monotone);
    run(6, "mean identity band", Duration::from_secs(10), &mut criterion_mean_identity);
    run(8, "real count series", Duration::from_secs(60), &mut criterion_real_data);

    results.sort_by_key(|r| r.0);
    let mut failed = 0;
    println!();
    for (id, name, elapsed, _, outcome) in &results {
        let tag = match outcome.status {
            Status::Pass => "PASS",
            Status::Fail => {
                failed += 1;
                "FAIL"
            }
            Status::Skip => "SKIP",
        };
        println!("criterion {id} [{tag}] {name} ({elapsed:.2?})");
        for note in &outcome.notes {
            println!("    {note}");
        }
    }
    println!();
    println!(
        "acceptance: {} passed, {failed} failed, {} skipped",
        results.iter().filter(|r| r.4.status == Status::Pass).count(),
        results.iter().filter(|r| r.4.status == Status::Skip).count()
    );
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
