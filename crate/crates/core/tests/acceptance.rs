//! Acceptance criteria, one pass/fail line each.
//!
//! Run with `cargo test --test acceptance`; add `-- --extended` for the
//! n = 800 log-normal parameter reproduction (hours on one core).

use std::cell::RefCell;
use std::f64::consts::{PI, SQRT_2};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rgensemble::ensemble::{connectivity_sweep, run_ensemble, EnsembleSpec};
use rgensemble::fit::{fit_normal, fit_shifted_lognormal, shifted_lognormal_pdf};
use rgensemble::indices::{degree, revan, IndexKind};
use rgensemble::models::{self, Connectivity, Model, ModelSpec};
use rgensemble::spectral::{
    eigendecompose, eigenvector_centralities, spectral_index_set, subgraph_centralities, weighted_adjacency,
    ConstantWeights, ListedWeights, WeightedAdjacency,
};
use rgensemble::stats::{ks_vs_standard_normal, Histogram, SampleSeries};
use rgensemble::Graph;

const KS_MAX: f64 = 0.03;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1e-300) || a == b
}

// 1 ------------------------------------------------------------------------

fn exact_oracles() -> Outcome {
    use IndexKind::*;
    let failures = RefCell::new(Vec::new());
    let check = |label: &str, got: f64, want: f64| {
        if !rel_close(got, want, 1e-10) {
            failures.borrow_mut().push(format!("{label}: {got} != {want}"));
        }
    };
    let ln = f64::ln;
    let p3 = Graph::path(3);
    let k2 = Graph::complete(2);
    let s4 = Graph::star(3);
    let c4 = Graph::cycle(4).unwrap();
    let k5 = Graph::complete(5);

    check("V(empty7)", degree::nonisolated_count(&Graph::empty(7)) as f64, 0.0);
    check("V(K5)", degree::nonisolated_count(&k5) as f64, 5.0);
    check("V(P3+1)", degree::nonisolated_count(&p3.with_isolated(1)) as f64, 3.0);

    for (k, w) in [(M1, 6.0), (M2, 4.0), (SO, 2.0 * 5f64.sqrt()), (R, SQRT_2), (H, 4.0 / 3.0)] {
        check(&format!("{k}(P3)"), degree::sum_index(&p3, k).unwrap(), w);
    }
    for (k, w) in [(M1, 2.0), (M2, 1.0), (SO, SQRT_2), (R, 1.0), (H, 1.0)] {
        check(&format!("{k}(K2)"), degree::sum_index(&k2, k).unwrap(), w);
    }
    for (k, w) in [
        (NK, ln(2.0)),
        (Pi1, 2.0 * ln(2.0)),
        (Pi2, ln(4.0)),
        (Pi1Star, ln(9.0)),
        (RPi, -ln(2.0)),
        (HPi, ln(4.0 / 9.0)),
    ] {
        check(&format!("{k}(P3)"), degree::log_multiplicative_index(&p3, k).unwrap(), w);
    }
    check("lnNK(K2)", degree::log_multiplicative_index(&k2, NK).unwrap(), 0.0);
    check("M1(K5)", degree::sum_index(&k5, M1).unwrap(), 80.0);

    let rp3 = revan::revan_degrees(&p3).unwrap();
    if rp3.r != vec![Some(2), Some(1), Some(2)] || (rp3.delta_max, rp3.delta_min) != (2, 1) {
        failures.borrow_mut().push(format!("revan(P3) = {rp3:?}"));
    }
    let rs4 = revan::revan_degrees(&s4).unwrap();
    if rs4.r != vec![Some(1), Some(3), Some(3), Some(3)] {
        failures.borrow_mut().push(format!("revan(S4) = {rs4:?}"));
    }
    if revan::revan_degrees(&c4).unwrap().r != vec![Some(2); 4] {
        failures.borrow_mut().push("revan(C4) not regular".into());
    }
    for (k, w) in [(R1, 6.0), (R2, 4.0), (RSO, 2.0 * 5f64.sqrt()), (RR, SQRT_2), (RH, 4.0 / 3.0)] {
        check(&format!("{k}(P3)"), revan::revan_sum_index(&p3, k).unwrap(), w);
    }
    for (k, w) in [(R1, 12.0), (R2, 9.0), (RSO, 3.0 * 10f64.sqrt()), (RR, 3f64.sqrt()), (RH, 1.5)] {
        check(&format!("{k}(S4)"), revan::revan_sum_index(&s4, k).unwrap(), w);
    }
    for (rk, k) in [(R1, M1), (R2, M2), (RSO, SO), (RR, R), (RH, H)] {
        check(
            &format!("{rk}(C4)"),
            revan::revan_sum_index(&c4, rk).unwrap(),
            degree::sum_index(&c4, k).unwrap(),
        );
    }
    for (k, w) in [
        (RNK, ln(4.0)),
        (R1Pi, ln(16.0)),
        (R2Pi, ln(4.0)),
        (R1PiStar, ln(9.0)),
        (RRPi, -ln(2.0)),
        (RHPi, ln(4.0 / 9.0)),
    ] {
        check(&format!("{k}(P3)"), revan::revan_log_multiplicative_index(&p3, k).unwrap(), w);
    }
    for (rk, k) in [(RNK, NK), (R1Pi, Pi1), (R1PiStar, Pi1Star), (R2Pi, Pi2), (RRPi, RPi), (RHPi, HPi)] {
        check(
            &format!("{rk}(C4)"),
            revan::revan_log_multiplicative_index(&c4, rk).unwrap(),
            degree::log_multiplicative_index(&c4, k).unwrap(),
        );
    }
    check("lnRNK(K2)", revan::revan_log_multiplicative_index(&k2, RNK).unwrap(), 0.0);
    check("lnR2Pi(K2)", revan::revan_log_multiplicative_index(&k2, R2Pi).unwrap(), 0.0);
    check("lnR1Pistar(K2)", revan::revan_log_multiplicative_index(&k2, R1PiStar).unwrap(), ln(2.0));
    if revan::revan_degrees(&Graph::empty(3)).is_ok() {
        failures.borrow_mut().push("edgeless Revan should be degenerate".into());
    }

    // spectral small cases
    let a = weighted_adjacency(&Graph::empty(3), &mut ConstantWeights(1.0));
    if *a.matrix() != DMatrix::identity(3, 3) * SQRT_2 {
        failures.borrow_mut().push("empty graph adjacency".into());
    }
    let k2a = weighted_adjacency(&k2, &mut ListedWeights::new(vec![0.0, 0.0, 1.0]));
    let d = eigendecompose(&k2a).unwrap();
    check("λ1(K2)", d.eigenvalues[0], 1.0);
    check("λ2(K2)", d.eigenvalues[1], -1.0);
    for s in subgraph_centralities(&d) {
        check("S(K2)", s, 1f64.cosh());
    }
    for x in eigenvector_centralities(&k2a, &d).unwrap() {
        check("x(K2)", x, 1.0 / SQRT_2);
    }
    let set = spectral_index_set(&k2a).unwrap();
    check("E(K2)", set.energy, 2.0);
    check("EE(K2)", set.log_ee.exp(), 1f64.cosh());
    check("RVa(K2)", set.log_rv_a.exp(), 1f64.cosh());
    check("RVb(K2)", set.log_rv_b.exp(), SQRT_2 * 1f64.cosh());
    let diag = WeightedAdjacency::from_matrix(DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 1.0]))).unwrap();
    let dd = eigendecompose(&diag).unwrap();
    check("λ(diag)", dd.eigenvalues[0], 3.0);
    let x = eigenvector_centralities(&diag, &dd).unwrap();
    check("x1(diag)", x[0], 1.0);
    if x[1].abs() > 1e-12 {
        failures.borrow_mut().push(format!("x2(diag) = {}", x[1]));
    }
    let d3 = eigendecompose(&a).unwrap();
    for s in subgraph_centralities(&d3) {
        check("S(√2 I)", s, SQRT_2.exp());
    }

    // standardization and KS
    let z = SampleSeries::new(IndexKind::M1, vec![1.0, 2.0, 3.0], 0).standardize().unwrap();
    if z.values != vec![-1.0, 0.0, 1.0] {
        failures.borrow_mut().push(format!("standardize {{1,2,3}} = {:?}", z.values));
    }
    check("KS(zeros)", ks_vs_standard_normal(&[0.0; 16]).unwrap(), 0.5);

    let failures = failures.into_inner();
    outcome(failures.is_empty(), if failures.is_empty() { "all cases exact".into() } else { failures.join("; ") })
}

// 2 ------------------------------------------------------------------------

fn g_contract() -> Outcome {
    let junction = PI - 13.0 / 6.0;
    let (a, b) = models::rgg_factor_branches(1.0);
    let g0 = models::rgg_mean_degree_factor(0.0).unwrap();
    let gmax = models::rgg_mean_degree_factor(SQRT_2).unwrap();
    let mut monotone = true;
    let mut prev = 0.0;
    let points = 10_000;
    for i in 0..=points {
        let r = SQRT_2 * i as f64 / points as f64;
        let g = models::rgg_mean_degree_factor(r.min(SQRT_2)).unwrap();
        if g < prev || !(0.0..=1.0 + 1e-12).contains(&g) {
            monotone = false;
        }
        prev = g;
    }
    let pass = (a - junction).abs() <= 1e-12
        && (b - junction).abs() <= 1e-12
        && g0 == 0.0
        && (gmax - 1.0).abs() <= 1e-12
        && monotone;
    outcome(
        pass,
        format!("branches at 1: {a:.15}, {b:.15}; g(0)={g0}; g(√2)={gmax:.15}; monotone={monotone}"),
    )
}

// 3 ------------------------------------------------------------------------

fn connectivity_curves() -> Outcome {
    let samples = 10_000;
    let mut worst_z: f64 = 0.0;
    let mut analytic_ok = true;
    for &n in &[100usize, 200] {
        let grid: Vec<f64> = (0..=15).map(|i| 0.5 * i as f64 / (n - 1) as f64).collect();
        let rows = connectivity_sweep(Model::Erg, n, &grid, samples, 31 + n as u64).unwrap();
        for row in rows {
            let a = row.analytic_v_ratio.unwrap();
            let gap = (row.v_ratio - a).abs();
            if gap > 3.0 * row.v_ratio_se {
                analytic_ok = false;
            }
            if row.v_ratio_se > 0.0 {
                worst_z = worst_z.max(gap / row.v_ratio_se);
            }
        }
    }

    let degrees: Vec<f64> = (1..=16).map(|i| 0.5 * i as f64).collect();
    let mut gaps = Vec::new();
    for model in [Model::Erg, Model::Rgg] {
        let curve = |n: usize| -> Vec<f64> {
            let grid: Vec<f64> = degrees
                .iter()
                .map(|&k| match model {
                    Model::Erg => k / (n - 1) as f64,
                    Model::Rgg => models::solve_r_for_mean_degree(n, k).unwrap(),
                })
                .collect();
            connectivity_sweep(model, n, &grid, samples, 77 + n as u64)
                .unwrap()
                .iter()
                .map(|r| r.v_ratio)
                .collect()
        };
        let (c100, c200) = (curve(100), curve(200));
        let gap = c100.iter().zip(&c200).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        gaps.push((model, gap));
    }
    let collapse_ok = gaps.iter().all(|(_, g)| *g <= 0.02);
    outcome(
        analytic_ok && collapse_ok,
        format!(
            "ERG sweep max |Δ|/SE = {worst_z:.2} (limit 3); collapse gaps n=100 vs 200: {}",
            gaps.iter().map(|(m, g)| format!("{m} {g:.4}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

// 4-7 helpers ----------------------------------------------------------------

fn erg_spec(n: usize, connectivity: Connectivity, kinds: &[IndexKind], samples: usize, seed: u64) -> EnsembleSpec {
    EnsembleSpec::new(
        ModelSpec {
            model: Model::Erg,
            n,
            connectivity,
        },
        samples,
        kinds.to_vec(),
        seed,
    )
}

fn ks_gate(spec: &EnsembleSpec) -> Outcome {
    let res = run_ensemble(spec).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for (kind, s) in &res.series {
        match s.standardize().and_then(|z| ks_vs_standard_normal(&z.values)) {
            Ok(d) => {
                pass &= d <= KS_MAX;
                parts.push(format!("{kind} D={d:.4}"));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{kind} error: {e}"));
            }
        }
        if s.skipped > 0 {
            parts.push(format!("{kind} skipped={}", s.skipped));
        }
    }
    outcome(pass, parts.join(", "))
}

fn ti_normality() -> Outcome {
    use IndexKind::*;
    ks_gate(&erg_spec(200, Connectivity::NonIsolatedRatio(0.9), &[M1, M2, SO, R, H], 10_000, 4))
}

fn mti_lognormality() -> Outcome {
    use IndexKind::*;
    ks_gate(&erg_spec(200, Connectivity::NonIsolatedRatio(0.9), &[NK, Pi1, Pi2, Pi1Star, RPi, HPi], 10_000, 5))
}

fn revan_dense_normality() -> Outcome {
    use IndexKind::*;
    ks_gate(&erg_spec(
        400,
        Connectivity::MeanDegree(100.0),
        &[R1, R2, RSO, RR, RH, RNK, R1Pi, R1PiStar, R2Pi, RRPi, RHPi],
        10_000,
        6,
    ))
}

fn spectral_shapes() -> Outcome {
    use IndexKind::*;
    let spec = erg_spec(100, Connectivity::NonIsolatedRatio(0.5), &[Energy, LnRVa, LnRVb, LnRVbLiteral, LnEE], 10_000, 7);
    let res = run_ensemble(&spec).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    let z = res.series[&Energy].standardize().unwrap();
    let d = ks_vs_standard_normal(&z.values).unwrap();
    pass &= d <= KS_MAX;
    parts.push(format!("E D={d:.4}"));
    for kind in [LnRVa, LnRVb, LnEE] {
        let s = &res.series[&kind];
        let z = s.standardize().unwrap();
        let skew = z.skewness().unwrap();
        let h = Histogram::from_values(&z.values, 100).unwrap();
        let (ln_sse, fit_note) = match fit_shifted_lognormal(&h) {
            Ok(f) => (f.sse, format!("σ={:.4} μ={:.4} β={:.4}", f.sigma, f.mu, f.beta)),
            Err(e) => (f64::INFINITY, format!("fit error: {e}")),
        };
        let normal_sse = fit_normal(&h).map(|f| f.sse).unwrap_or(f64::INFINITY);
        pass &= skew >= 0.3 && ln_sse < normal_sse;
        parts.push(format!(
            "{kind} skew={skew:.3} sse_lognormal={ln_sse:.3e} sse_normal={normal_sse:.3e} ({fit_note}) skipped={}",
            s.skipped
        ));
    }
    // Reported only: RV_b with the signed centrality (1/λ₁)·A·|Ψ¹|.
    let lit = &res.series[&LnRVbLiteral];
    if let Ok(skew) = lit.standardize().and_then(|z| z.skewness()) {
        parts.push(format!("[info] lnRVbLiteral skew={skew:.3} skipped={}", lit.skipped));
    }
    outcome(pass, parts.join("; "))
}

// 8 ------------------------------------------------------------------------

fn table_reproduction() -> Outcome {
    let spec = erg_spec(800, Connectivity::NonIsolatedRatio(0.9), &[IndexKind::LnEE], 10_000, 8);
    let res = run_ensemble(&spec).unwrap();
    let z = res.series[&IndexKind::LnEE].standardize().unwrap();
    let h = Histogram::from_values(&z.values, 100).unwrap();
    match fit_shifted_lognormal(&h) {
        Ok(f) => {
            let pass = (f.sigma - 0.3095).abs() <= 0.05
                && (f.mu - 1.1486).abs() <= 0.10
                && (f.beta - 3.3103).abs() <= 0.25
                && f.is_mean_consistent();
            outcome(
                pass,
                format!(
                    "σ={:.4} μ={:.4} β={:.4} exp(μ+σ²/2)={:.4} sse={:.3e}",
                    f.sigma,
                    f.mu,
                    f.beta,
                    f.lognormal_mean(),
                    f.sse
                ),
            )
        }
        Err(e) => outcome(false, format!("fit error: {e}")),
    }
}

// 9 ------------------------------------------------------------------------

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn cli_determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let run = |workers: &str, dir: &Path| {
        Command::new(env!("CARGO_BIN_EXE_rgensemble"))
            .args([
                "ensemble", "--model", "erg", "--n", "60", "--ratio", "0.7", "--samples", "400", "--indices",
                "M1,lnNK,R1,lnRRPi,E,lnRVa,lnRVb,lnEE", "--seed", "2024", "--fit", "lognormal", "--workers", workers,
                "--out",
            ])
            .arg(dir)
            .status()
            .unwrap()
    };
    let (a, b) = (tmp.path().join("w1"), tmp.path().join("w4"));
    let (sa, sb) = (run("1", &a), run("4", &b));
    let (fa, fb) = (read_dir_sorted(&a), read_dir_sorted(&b));
    // a fit may legitimately fail to converge on a small ensemble; that only
    // changes the exit code, identically for both runs
    let pass = sa.code() == sb.code() && !fa.is_empty() && fa == fb;
    outcome(pass, format!("{} files, exit codes {:?}/{:?}, identical={}", fa.len(), sa.code(), sb.code(), fa == fb))
}

// 10 -----------------------------------------------------------------------

fn fit_round_trip() -> Outcome {
    let bins = 200;
    let (lo, hi) = (-3.0, 6.0);
    let w = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| lo + w * i as f64).collect();
    let density = edges
        .windows(2)
        .map(|e| shifted_lognormal_pdf(0.5 * (e[0] + e[1]), 0.3, 1.1, 3.3))
        .collect();
    let h = Histogram::from_parts(edges, density).unwrap();
    match fit_shifted_lognormal(&h) {
        Ok(f) => outcome(
            (f.sigma - 0.3).abs() <= 1e-3 && (f.mu - 1.1).abs() <= 1e-3 && (f.beta - 3.3).abs() <= 1e-3 && f.sse <= 1e-8,
            format!("σ={:.6} μ={:.6} β={:.6} sse={:.2e}", f.sigma, f.mu, f.beta, f.sse),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn main() {
    let extended = std::env::args().any(|a| a == "--extended");
    let criteria: Vec<(u32, &str, fn() -> Outcome, bool)> = vec![
        (1, "exact oracle suite", exact_oracles, false),
        (2, "g(r) contract", g_contract, false),
        (3, "connectivity curves (analytic ERG, n-collapse)", connectivity_curves, false),
        (4, "TI normality, ERG n=200 ratio 0.9", ti_normality, false),
        (5, "MTI log-normality, ERG n=200 ratio 0.9", mti_lognormality, false),
        (6, "Revan dense normality, ERG n=400 <k>=100", revan_dense_normality, false),
        (7, "spectral shapes, ERG n=100 ratio 0.5", spectral_shapes, false),
        (8, "lnEE log-normal parameters, ERG n=800 ratio 0.9", table_reproduction, true),
        (9, "CLI determinism across worker counts", cli_determinism, false),
        (10, "log-normal fit round trip", fit_round_trip, false),
    ];
    let mut failed = 0;
    for (id, name, run, is_extended) in criteria {
        if is_extended && !extended {
            println!("[SKIP] {id:>2} {name} (pass --extended to run)");
            continue;
        }
        let start = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {id:>2} {name} ({:.1}s): {}", start.elapsed().as_secs_f64(), o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
