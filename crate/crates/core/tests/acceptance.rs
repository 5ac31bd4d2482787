//! Acceptance suite: one test per criterion, each printing one PASS/FAIL
//! line (run with `--nocapture` to see them on success).
//!
//! Closed-form deviations uncovered by the exact simulation are printed as
//! DEVIATION lines and pinned by assertions on the exact values; the exact
//! simulation is authoritative.

use qloss_core::experiments::{
    distill_simulate, ghz_infidelity_sweep, ghz_pipeline, lambda_rect_closed, lambda_tri_closed,
    p0_lossless, postselected_sweep, preimage_sweep, ps_rect_closed, DistillationSpec, GhzSpec,
};
use qloss_core::loss::{compose_lossy, DesignKind, LossModel};
use qloss_core::metrics::preimage_fidelities;
use qloss_core::numerics::haar_unitary;
use qloss_core::selftest;

fn report(criterion: &str, passed: bool, detail: &str) {
    let status = if passed { "PASS" } else { "FAIL" };
    println!("{status} {criterion}: {detail}");
    assert!(passed, "{criterion}: {detail}");
}

#[test]
fn criterion_1_postselected_fidelity() {
    let start = std::time::Instant::now();
    let grid = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5];
    let sweep = postselected_sweep(20, &DesignKind::BOTH, &grid, 500, 20_001).unwrap();

    let mut rect_flat = true;
    for rec in sweep.records.iter().filter(|r| r.design == DesignKind::Rectangular) {
        rect_flat &= (rec.mean_fidelity - 1.0).abs() <= 1e-12;
    }
    let tri: Vec<f64> = sweep
        .records
        .iter()
        .filter(|r| r.design == DesignKind::Triangular)
        .map(|r| r.mean_fidelity)
        .collect();
    let tri_decreasing = tri.windows(2).all(|w| w[1] < w[0]);
    let elapsed = start.elapsed().as_secs_f64();

    report(
        "criterion 1 (postselected fidelity, m=20, 500 samples)",
        rect_flat && tri_decreasing && elapsed < 600.0,
        &format!(
            "rectangular flat at 1 to 1e-12: {rect_flat}; triangular strictly decreasing over \
             {grid:?} dB: {tri_decreasing}; runtime {elapsed:.1}s < 600s"
        ),
    );
}

#[test]
fn criterion_2_preimage_fidelity() {
    let start = std::time::Instant::now();
    let m = 5;
    let samples = 500;
    let base_seed = 30_001u64;

    // Per-sample bounds at a spot-check efficiency.
    let eta = 0.93f64;
    let rect = LossModel::rectangular(m, eta).unwrap();
    let tri = LossModel::triangular(m, eta).unwrap();
    let mut rect_exact = true;
    let mut tri_max_bound = true;
    for s in 0..samples {
        let u = haar_unitary(m, base_seed + s).unwrap();
        let t_rect = compose_lossy(&u, &rect).unwrap();
        for f in preimage_fidelities(&u, t_rect.t()).unwrap() {
            rect_exact &= (f - eta.powi(m as i32)).abs() <= 1e-12;
        }
        let t_tri = compose_lossy(&u, &tri).unwrap();
        let max = preimage_fidelities(&u, t_tri.t())
            .unwrap()
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        tri_max_bound &= max >= eta.powi(m as i32) - 1e-12;
    }

    // Sample-mean dominance across a grid interior to (0, 1).
    let grid: Vec<f64> = (1..20).map(|k| k as f64 * 0.05).collect();
    let sweep = preimage_sweep(m, &DesignKind::BOTH, &grid, samples as usize, base_seed).unwrap();
    let half = sweep.records.len() / 2;
    let mut tri_dominates = true;
    for k in 0..half {
        let (r, t) = (&sweep.records[k], &sweep.records[half + k]);
        assert_eq!(r.design, DesignKind::Rectangular);
        assert_eq!(t.design, DesignKind::Triangular);
        tri_dominates &= t.avg_fidelity >= r.avg_fidelity;
    }
    let elapsed = start.elapsed().as_secs_f64();

    report(
        "criterion 2 (preimage fidelity, m=5)",
        rect_exact && tri_max_bound && tri_dominates && elapsed < 60.0,
        &format!(
            "rectangular == eta^5 per sample: {rect_exact}; triangular max-mode >= eta^5 per \
             sample: {tri_max_bound}; triangular mean >= rectangular on 19-point grid: \
             {tri_dominates}; runtime {elapsed:.1}s < 60s"
        ),
    );
}

#[test]
fn criterion_3_distillation() {
    let start = std::time::Instant::now();
    let etas = [0.5, 0.9, 0.99];

    // Closed forms are exact where the protocol interferes constructively.
    let mut lambda_ok = true;
    for n in [3, 5] {
        for &eta in &etas {
            let rect = distill_simulate(&DistillationSpec::new(n, DesignKind::Rectangular, eta))
                .unwrap();
            let rect_closed = lambda_rect_closed(n, eta).unwrap();
            lambda_ok &= (rect.lambda - rect_closed).abs() <= 1e-9;

            let tri = distill_simulate(&DistillationSpec::new(n, DesignKind::Triangular, eta))
                .unwrap();
            let tri_closed = lambda_tri_closed(n, eta).unwrap();
            lambda_ok &= ((tri.lambda - tri_closed) / tri_closed).abs() <= 1e-6;
        }
    }

    // N=4: the uniform 4-mode Fourier transition is interference-suppressed
    // (its permanent vanishes), so the herald only fires through lost
    // photons and the heralded state is always vacuum.
    let mut n4_exact = true;
    for design in DesignKind::BOTH {
        for &eta in &etas {
            let out = distill_simulate(&DistillationSpec::new(4, design, eta)).unwrap();
            n4_exact &= out.lambda.abs() <= 1e-12;
            let closed = match design {
                DesignKind::Rectangular => lambda_rect_closed(4, eta).unwrap(),
                DesignKind::Triangular => lambda_tri_closed(4, eta).unwrap(),
            };
            println!(
                "DEVIATION (reported, not suppressed): N=4 {design} eta={eta}: closed-form \
                 lambda {closed:.6} vs exact 0 (suppressed central permanent)"
            );
        }
    }

    // Success probability: the closed form with the p0 prefactor is exact
    // at N=3; at N=5 the exact law keeps the eta^(N(N-1)) scaling but with
    // the strict lossless herald probability 1/125 in place of p0 = 0.264.
    let mut ps_ok = true;
    for &eta in &etas {
        let sim = distill_simulate(&DistillationSpec::new(3, DesignKind::Rectangular, eta))
            .unwrap();
        ps_ok &= (sim.p_s - ps_rect_closed(3, eta).unwrap()).abs() <= 1e-9;
    }
    let p5_lossless = distill_simulate(&DistillationSpec::new(5, DesignKind::Rectangular, 1.0))
        .unwrap()
        .p_s;
    let mut scaling_ok = (p5_lossless - 1.0 / 125.0).abs() <= 1e-9;
    for &eta in &etas {
        let sim = distill_simulate(&DistillationSpec::new(5, DesignKind::Rectangular, eta))
            .unwrap();
        let structural = p5_lossless * eta.powi(20);
        scaling_ok &= ((sim.p_s - structural) / structural).abs() <= 1e-9;
        println!(
            "DEVIATION (reported, not suppressed): N=5 rectangular eta={eta}: Eq.-15 p_s \
             {:.6e} (p0=0.264 marginal) vs exact {:.6e} (lossless strict herald 1/125 x \
             eta^20)",
            ps_rect_closed(5, eta).unwrap(),
            sim.p_s
        );
    }

    // p0 formula values.
    let p0_ok = (p0_lossless(3).unwrap() - 1.0 / 3.0).abs() <= 1e-9
        && (p0_lossless(4).unwrap() - 0.25).abs() <= 1e-9
        && (p0_lossless(5).unwrap() - 0.264).abs() <= 1e-9;
    let lossless3 = distill_simulate(&DistillationSpec::new(3, DesignKind::Rectangular, 1.0))
        .unwrap()
        .p_s;
    let lossless_ok = (lossless3 - p0_lossless(3).unwrap()).abs() <= 1e-9;

    let elapsed = start.elapsed().as_secs_f64();
    report(
        "criterion 3 (distillation vs closed forms)",
        lambda_ok && n4_exact && ps_ok && scaling_ok && p0_ok && lossless_ok && elapsed < 300.0,
        &format!(
            "lambda matches Eq.12 (1e-9) and Eq.13 (1e-6 rel) at N=3,5: {lambda_ok}; N=4 \
             exact lambda=0 with deviation reported: {n4_exact}; p_s matches Eq.15 at N=3: \
             {ps_ok}; N=5 p_s follows eta^20 scaling from 1/125: {scaling_ok}; p0 values \
             (1/3, 0.25, 0.264): {p0_ok}; lossless p_s(3)=p0(3): {lossless_ok}; runtime \
             {elapsed:.1}s < 300s"
        ),
    );
}

#[test]
fn criterion_4_ghz_state_quality() {
    let start = std::time::Instant::now();
    let report_tri = ghz_pipeline(&GhzSpec::new(DesignKind::Triangular, 0.9848)).unwrap();

    let purity_ok = (report_tri.purity - 1.0).abs() <= 1e-6;
    let infidelity = 1.0 - report_tri.fidelity;
    let infidelity_ok = (infidelity - 1.3e-4).abs() <= 0.2e-4;
    let alpha_ok = (report_tri.alpha - 0.7969).abs() <= 5e-4;

    let mut z_zero = 0;
    let mut xy_band = 0;
    let mut partition_ok = true;
    for (label, err) in &report_tri.stabilizer_errors {
        let z_type = !label.contains('X') && !label.contains('Y');
        if z_type {
            z_zero += 1;
            partition_ok &= err.abs() <= 1e-9;
        } else {
            xy_band += 1;
            partition_ok &= (err - 1.3e-4).abs() <= 0.2e-4;
        }
    }
    partition_ok &= z_zero == 3 && xy_band == 4;
    let elapsed = start.elapsed().as_secs_f64();

    report(
        "criterion 4 (GHZ-3 at eta=0.9848, triangular)",
        purity_ok && infidelity_ok && alpha_ok && partition_ok && elapsed < 300.0,
        &format!(
            "purity {:.9} (1 +- 1e-6): {purity_ok}; 1-f {:.3e} (1.3e-4 +- 0.2e-4): \
             {infidelity_ok}; alpha {:.5} (0.7969 +- 5e-4): {alpha_ok}; stabilizer errors \
             partition into 3 Z-type zeros and 4 X/Y-type at 1.3e-4: {partition_ok}; runtime \
             {elapsed:.1}s < 300s",
            report_tri.purity, infidelity, report_tri.alpha
        ),
    );
}

#[test]
fn criterion_5_ghz_qubit_transmittance() {
    let rect = ghz_pipeline(&GhzSpec::new(DesignKind::Rectangular, 0.9848)).unwrap();
    let tri = ghz_pipeline(&GhzSpec::new(DesignKind::Triangular, 0.9848)).unwrap();

    let spread = rect
        .qubit_lambdas
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max)
        - rect
            .qubit_lambdas
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
    let nonuniform = spread > 1e-6;
    let tri_wins = tri
        .qubit_lambdas
        .iter()
        .zip(&rect.qubit_lambdas)
        .all(|(t, r)| t > r);

    report(
        "criterion 5 (GHZ qubit transmittance, eta=0.9848)",
        nonuniform && tri_wins,
        &format!(
            "rectangular lambdas {:?} non-uniform (spread {spread:.4} > 1e-6): {nonuniform}; \
             triangular {:?} exceeds rectangular per qubit: {tri_wins}",
            rect.qubit_lambdas, tri.qubit_lambdas
        ),
    );
}

#[test]
fn criterion_6_infidelity_power_law() {
    let grid: Vec<f64> = (0..8).map(|k| 0.02 + k as f64 * 0.04).collect();
    assert!(grid.len() >= 8 && grid[0] >= 0.02 && grid[7] <= 0.3 + 1e-12);
    let (_, fit) = ghz_infidelity_sweep(&grid).unwrap();

    let exponent_ok = (fit.exponent - 1.984).abs() <= 0.05;
    let coefficient_ok = (fit.coefficient - 0.0289).abs() <= 0.003;

    report(
        "criterion 6 (infidelity power law over l in [0.02, 0.3] dB)",
        exponent_ok && coefficient_ok,
        &format!(
            "exponent {:.4} (1.984 +- 0.05): {exponent_ok}; coefficient {:.5} (0.0289 +- \
             0.003): {coefficient_ok}",
            fit.exponent, fit.coefficient
        ),
    );
}

#[test]
fn criterion_7_property_suite() {
    let start = std::time::Instant::now();
    let checks = selftest::run_all().unwrap();
    let mut all = true;
    for check in &checks {
        let status = if check.passed { "pass" } else { "FAIL" };
        println!(
            "  [{status}] {} (worst {:.3e}, tol {:.1e})",
            check.name, check.worst, check.tolerance
        );
        all &= check.passed;
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "criterion 7 (selftest property suite)",
        all && elapsed < 300.0,
        &format!("{} checks passed; runtime {elapsed:.1}s < 300s", checks.len()),
    );
}
