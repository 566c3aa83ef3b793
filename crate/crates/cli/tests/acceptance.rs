//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::Rng;
use serde_json::Value;

use resample::bootstrap::{
    bootstrap_se, enumerate_resampling_vectors, exact_bootstrap_count, exact_bootstrap_moments,
    verify_hyperplane_theorem,
};
use resample::enrichment::{ease_score, fisher_exact_over, EaseMode, EnrichmentTable};
use resample::jackknife::{delete_d_se, jackknife_bias, jackknife_estimate, jackknife_se, pseudovalues};
use resample::permutation::{exact_permutation_test, mc_permutation_test, Alternative};
use resample::{Arity, PairedSample, Sample, SeededStream, Statistic};

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_resample"))
}

fn run(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = bin().args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "`resample {}` exited with {}: {}",
            args.join(" "),
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(seed: u64, stream: u64) -> impl Rng {
    SeededStream::new(seed, stream).rng()
}

/// Values `scale * (u + shift)` with `u ~ U(-1, 1)`.
fn random_values(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let scale = 10f64.powf(rng.random_range(-2.0..2.0));
    let shift = rng.random_range(-3.0..3.0);
    (0..n).map(|_| scale * (rng.random_range(-1.0..1.0) + shift)).collect()
}

fn sd(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

// ------------------------------------------------------------------ 1

fn ac1() -> Outcome {
    let cases = [
        (10, 0.689, 0.4324, 0.4549),
        (30, 0.6773, 0.1582, 0.1608),
        (100, 0.6694, 0.0492, 0.0496),
    ];
    let mut notes = Vec::new();
    for (n, pct, jack, max) in cases {
        let n_arg = n.to_string();
        let out = run(&[
            "simulate", "uniform-max", "--theta", "5", "--n", &n_arg, "--reps", "100000", "--seed", "7",
        ])?;
        let doc: Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
        let field = |k: &str| doc["report"][k].as_f64().ok_or(format!("missing report.{k}"));
        let (p, j, m) = (field("pct_jack_better")?, field("mean_abs_bias_jack")?, field("mean_abs_bias_max")?);
        ensure((p - pct).abs() <= 0.01, || format!("n={n}: pct_jack_better {p} vs {pct}"))?;
        ensure(((j - jack) / jack).abs() <= 0.03, || format!("n={n}: mean_abs_bias_jack {j} vs {jack}"))?;
        ensure(((m - max) / max).abs() <= 0.03, || format!("n={n}: mean_abs_bias_max {m} vs {max}"))?;
        notes.push(format!("n={n}: {p:.4}/{j:.4}/{m:.4}"));
    }
    Ok(notes.join(", "))
}

// ------------------------------------------------------------------ 2

fn ac2() -> Outcome {
    const TOL: f64 = 1e-12;
    let mut r = rng(2, 0);
    for i in 0..1000 {
        let n = r.random_range(3..=15);
        let xs = random_values(&mut r, n);
        let s = sd(&xs);
        let nf = n as f64;
        let data = Sample::new(xs.clone()).map_err(|e| e.to_string())?;
        let ctx = |what: &str, a: f64, b: f64| format!("sample {i} (n={n}): {what}: {a} vs {b}");
        let err = |e: resample::Error| e.to_string();

        let se = jackknife_se(&data, &Statistic::Mean).map_err(err)?;
        ensure(rel(se, s / nf.sqrt()) <= TOL, || ctx("se(mean)", se, s / nf.sqrt()))?;

        let bias = jackknife_bias(&data, &Statistic::Mean).map_err(err)?;
        let scale = xs.iter().map(|x| x.abs()).sum::<f64>() / nf;
        ensure(bias.abs() <= TOL * scale, || ctx("bias(mean)", bias, 0.0))?;

        let bias = jackknife_bias(&data, &Statistic::PluginVariance).map_err(err)?;
        ensure(rel(bias, -s * s / nf) <= TOL, || ctx("bias(plugin_variance)", bias, -s * s / nf))?;

        for stat in [Statistic::Mean, Statistic::PluginVariance, Statistic::Median, Statistic::SampleMax] {
            let ps = pseudovalues(&data, &stat).map_err(err)?;
            let avg = ps.iter().sum::<f64>() / nf;
            let est = jackknife_estimate(&data, &stat).map_err(err)?;
            let slack = TOL * ps.iter().map(|p| p.abs()).fold(est.abs(), f64::max);
            ensure((avg - est).abs() <= slack, || ctx(&format!("mean pseudovalue ({stat})"), avg, est))?;

            let d1 = delete_d_se(&data, &stat, 1).map_err(err)?;
            let se = jackknife_se(&data, &stat).map_err(err)?;
            ensure(rel(d1, se) <= TOL, || ctx(&format!("delete_d_se(1) ({stat})"), d1, se))?;
        }
    }
    Ok("1000 samples, 5 identities".into())
}

// ------------------------------------------------------------------ 3

fn ac3() -> Outcome {
    let mut r = rng(3, 0);
    let mut worst: f64 = 0.0;
    for stat in Statistic::ALL {
        let low = (stat.min_observations() + 1).max(2);
        for i in 0..100 {
            let n = low + i % (7 - low);
            let check = match stat.arity() {
                Arity::Univariate => {
                    let data = Sample::new(random_values(&mut r, n)).map_err(|e| e.to_string())?;
                    verify_hyperplane_theorem(&data, &stat)
                }
                Arity::Paired => {
                    let xs = random_values(&mut r, n);
                    let ys = random_values(&mut r, n);
                    let data = PairedSample::new(xs, ys).map_err(|e| e.to_string())?;
                    verify_hyperplane_theorem(&data, &stat)
                }
            }
            .map_err(|e| format!("{stat} n={n}: {e}"))?;
            if check.rhs == 0.0 {
                ensure(check.lhs == 0.0, || format!("{stat} n={n}: rhs 0 but lhs {}", check.lhs))?;
                continue;
            }
            let d = (check.lhs - check.rhs).abs() / check.rhs;
            ensure(d <= 1e-10, || format!("{stat} n={n}: lhs {} rhs {} ({d:e})", check.lhs, check.rhs))?;
            worst = worst.max(d);
        }
    }
    Ok(format!("6 statistics x 100 samples, worst relative gap {worst:.1e}"))
}

// ------------------------------------------------------------------ 4

fn ac4() -> Outcome {
    let count = exact_bootstrap_count(12);
    ensure(count == Some(1_352_078), || format!("count(12) = {count:?}"))?;
    for n in 1..=8 {
        let vectors: Vec<_> = enumerate_resampling_vectors(n).map_err(|e| e.to_string())?.collect();
        let total: f64 = vectors.iter().map(|v| v.probability).sum();
        ensure((total - 1.0).abs() <= 1e-10, || format!("n={n}: probabilities sum to {total}"))?;
        let top = vectors
            .iter()
            .max_by(|a, b| a.probability.total_cmp(&b.probability))
            .expect("non-empty");
        ensure(top.counts.iter().all(|&c| c == 1), || format!("n={n}: mode at {:?}", top.counts))?;
        let ties = vectors.iter().filter(|v| v.probability == top.probability).count();
        ensure(ties == 1, || format!("n={n}: {ties} vectors share the top probability"))?;
    }
    Ok("count(12) = 1352078; n <= 8 normalized, mode all-ones".into())
}

// ------------------------------------------------------------------ 5

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Every ordering of `ys` by Heap's algorithm; counts of
/// `(|r| >= |r_obs|, r >= r_obs, r <= r_obs)` up to a loose tie slack.
fn brute_force(xs: &[f64], ys: &[f64]) -> ([u64; 3], u64) {
    let r_obs = pearson(xs, ys);
    let tie = 1e-9;
    let mut counts = [0u64; 3];
    let mut total = 0;
    let mut visit = |ys: &[f64]| {
        let r = pearson(xs, ys);
        total += 1;
        counts[0] += u64::from(r.abs() >= r_obs.abs() - tie);
        counts[1] += u64::from(r >= r_obs - tie);
        counts[2] += u64::from(r <= r_obs + tie);
    };
    let mut a = ys.to_vec();
    let n = a.len();
    let mut c = vec![0; n];
    visit(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            visit(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    (counts, total)
}

fn ac5() -> Outcome {
    let alternatives = [Alternative::TwoSided, Alternative::Greater, Alternative::Less];
    let mut r = rng(5, 0);
    let mut datasets: Vec<(Vec<f64>, Vec<f64>)> = vec![
        (vec![1.0, 2.0, 3.0, 4.0, 5.0], vec![1.0, 2.0, 3.0, 4.0, 5.0]),
        (vec![1.0, 2.0, 3.0, 4.0, 5.0], vec![2.0, 1.0, 4.0, 3.0, 5.0]),
        (vec![1.0, 1.0, 2.0, 3.0, 3.0], vec![0.0, 2.0, 2.0, 1.0, 4.0]),
    ];
    for _ in 0..20 {
        let xs: Vec<f64> = (0..5).map(|_| r.random_range(0.0..1.0)).collect();
        let ys = xs.iter().map(|x| x + r.random_range(0.0..1.0)).collect();
        datasets.push((xs, ys));
    }
    let mut worst_mc: f64 = 0.0;
    for (k, (xs, ys)) in datasets.iter().enumerate() {
        let data = PairedSample::new(xs.clone(), ys.clone()).map_err(|e| e.to_string())?;
        let (counts, total) = brute_force(xs, ys);
        for (alt, &count) in alternatives.iter().zip(&counts) {
            let report = exact_permutation_test(&data, Statistic::PearsonR, *alt).map_err(|e| e.to_string())?;
            let oracle = count as f64 / total as f64;
            ensure(report.extreme == count && report.draws == total && report.p_value == oracle, || {
                format!(
                    "dataset {k} {alt:?}: {}/{} vs oracle {count}/{total}",
                    report.extreme, report.draws
                )
            })?;
            if k < 6 {
                let mc = mc_permutation_test(
                    &data,
                    Statistic::PearsonR,
                    100_000,
                    SeededStream::new(50 + k as u64, 0),
                    *alt,
                )
                .map_err(|e| e.to_string())?;
                let gap = (mc.p_value - oracle).abs();
                ensure(gap <= 0.02, || format!("dataset {k} {alt:?}: mc {} vs exact {oracle}", mc.p_value))?;
                worst_mc = worst_mc.max(gap);
            }
        }
    }
    let tiny = PairedSample::new(vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]).map_err(|e| e.to_string())?;
    let p = exact_permutation_test(&tiny, Statistic::PearsonR, Alternative::TwoSided)
        .map_err(|e| e.to_string())?
        .p_value;
    ensure(p == 1.0 / 3.0, || format!("X=Y=[1,2,3]: p = {p}"))?;
    Ok(format!(
        "{} datasets exact, worst mc gap {worst_mc:.4}, X=Y=[1,2,3] p = 1/3",
        datasets.len()
    ))
}

// ------------------------------------------------------------------ 6

fn ac6() -> Outcome {
    let x = EnrichmentTable::new(13553, 1, 206, 1).map_err(|e| e.to_string())?;
    let fisher = fisher_exact_over(&x).map_err(|e| e.to_string())?;
    ensure((fisher - 0.0152).abs() <= 1e-4, || format!("fisher {fisher}"))?;
    for mode in [EaseMode::Standard, EaseMode::Strict] {
        let ease = ease_score(&x, mode).map_err(|e| e.to_string())?;
        ensure(ease == 1.0, || format!("ease ({mode:?}) = {ease}"))?;
    }
    let mut r = rng(6, 0);
    for _ in 0..10_000 {
        let n = r.random_range(1..=20_000u64);
        let k_cat = r.random_range(0..=n);
        let m = r.random_range(0..=n);
        let k = r.random_range((k_cat + m).saturating_sub(n)..=k_cat.min(m));
        let t = EnrichmentTable::new(n, k_cat, m, k).map_err(|e| e.to_string())?;
        let f = fisher_exact_over(&t).map_err(|e| e.to_string())?;
        for mode in [EaseMode::Standard, EaseMode::Strict] {
            let e = ease_score(&t, mode).map_err(|e| e.to_string())?;
            ensure(e >= f, || format!("{t:?} {mode:?}: ease {e} < fisher {f}"))?;
        }
    }
    Ok(format!("fisher(X) = {fisher:.6}, ease(X) = 1, 10000 random tables"))
}

// ------------------------------------------------------------------ 7

fn ac7() -> Outcome {
    let mut within = 0;
    for seed in 0..100u64 {
        let mut r = rng(seed, 1);
        let xs = random_values(&mut r, 5);
        let data = Sample::new(xs.clone()).map_err(|e| e.to_string())?;
        let (_, var_star) = exact_bootstrap_moments(&data, &Statistic::Mean).map_err(|e| e.to_string())?;
        // var* of the mean is the plug-in variance over n.
        let oracle = sd(&xs).powi(2) * 4.0 / 25.0;
        ensure(rel(var_star, oracle) <= 1e-12, || format!("seed {seed}: var* {var_star} vs {oracle}"))?;
        let se = bootstrap_se(&data, &Statistic::Mean, 100_000, SeededStream::from_seed(seed))
            .map_err(|e| e.to_string())?
            .se;
        within += u32::from(((se - var_star.sqrt()) / var_star.sqrt()).abs() <= 0.05);
    }
    ensure(within >= 95, || format!("only {within}/100 seeds within 5%"))?;
    Ok(format!("{within}/100 seeds within 5%"))
}

// ------------------------------------------------------------------ 8

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).expect("write fixture");
    path.to_str().expect("utf-8 path").to_owned()
}

fn ac8() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let one = write(d, "one.csv", "x\n4.1\n2.7\n9.3\n5.5\n1.2\n7.8\n3.3\n6.0\n");
    let small = write(d, "small.csv", "2.0\n3.5\n1.0\n7.25\n4.0\n");
    let two = write(d, "two.csv", "x,y\n1,2.2\n2,1.9\n3,3.8\n4,3.1\n5,5.6\n6,5.2\n7,7.7\n");
    let list = write(d, "list.txt", "g0\ng1\ng2\ng3\ng20\ng30\n");
    let cats = d.join("categories");
    fs::create_dir(&cats).map_err(|e| e.to_string())?;
    write(&cats, "alpha.txt", "g0\ng1\ng2\ng5\ng6\n");
    write(&cats, "beta.txt", "g3\ng20\ng21\ng22\ng23\ng24\ng25\n");
    write(&cats, "gamma.txt", "g30\n");
    let cats = cats.to_str().expect("utf-8 path").to_owned();

    let commands: Vec<Vec<&str>> = vec![
        vec!["jack", "--input", &one, "--stat", "median", "--level", "0.9"],
        vec!["jack", "--input", &one, "--stat", "mean", "--d", "auto"],
        vec!["jack", "--input", &two, "--stat", "pearson_r", "--format", "csv"],
        vec!["boot", "--input", &one, "--stat", "median", "--B", "3000"],
        vec!["boot", "--input", &one, "--stat", "mean", "--B", "3000", "--format", "csv", "--stream", "3"],
        vec!["boot", "--input", &small, "--stat", "median", "--exact"],
        vec!["boot", "--input", &small, "--stat", "sample_max", "--verify-theorem"],
        vec!["perm", "--input", &two],
        vec!["perm", "--input", &two, "--mode", "mc", "--B", "20000", "--alternative", "greater"],
        vec!["enrich", "--population", "13553", "--category-size", "787", "--list-size", "206", "--overlap", "20"],
        vec!["enrich", "--population", "40", "--category-dir", &cats, "--list-file", &list, "--format", "csv"],
        vec!["simulate", "uniform-max", "--n", "20", "--reps", "3000"],
        vec!["simulate", "uniform-max", "--n", "12", "--reps", "500", "--format", "csv"],
        vec!["enumerate", "--n", "5"],
    ];
    for args in &commands {
        let baseline = run(&[args.as_slice(), &["--seed", "11", "--threads", "1"]].concat())?;
        for threads in ["1", "2", "4"] {
            let again = run(&[args.as_slice(), &["--seed", "11", "--threads", threads]].concat())?;
            ensure(again == baseline, || {
                format!("`{}` differs with --threads {threads}", args.join(" "))
            })?;
        }
    }
    Ok(format!("{} invocations x threads 1/1/2/4 byte-identical", commands.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("AC1", "uniform-max simulation table", ac1),
        ("AC2", "jackknife algebraic identities", ac2),
        ("AC3", "hyperplane variance theorem", ac3),
        ("AC4", "exact bootstrap enumeration", ac4),
        ("AC5", "permutation oracle equivalence", ac5),
        ("AC6", "Fisher and EASE scores", ac6),
        ("AC7", "bootstrap convergence to exact variance", ac7),
        ("AC8", "CLI determinism across thread counts", ac8),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {id} {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {id} {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
