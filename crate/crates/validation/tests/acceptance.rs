//! Acceptance suite. Every criterion prints one PASS/FAIL line; the process
//! exits with a failure status if any criterion fails.

use lowfreq::blocks::TwoBlockSystem;
use lowfreq::circuit::{rc_benchmark, rc_condition_closed_form, MnaOperators, Norm, RcVariant};
use lowfreq::fem::{
    assemble_km, build_box_mesh, displacement_field, floating_box, BoundaryConditions, CapacitorConfig,
    FemSystem, Material, MaterialMap,
};
use lowfreq::numkit::{default_pivot_tol, dense_cond_exact, lu_factor, norm2, CsrMatrix, SolverError, C64};
use lowfreq::stabilize::{
    is_breakdown, scale_system, scaled_condition, BlockSolver, Domain, Scaling, ScalingVariant, SolveMethod,
    StabilizeError, VariantParams,
};
use lowfreq::timestep::condition_vs_dt;
use nalgebra::DMatrix;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| 10f64.powf(lo + (hi - lo) * k as f64 / (n - 1) as f64))
        .collect()
}

fn rel_diff(a: &[C64], b: &[C64]) -> f64 {
    let d: Vec<C64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm2(&d) / norm2(b)
}

fn rc_system(r: f64, c: f64) -> TwoBlockSystem {
    MnaOperators::new(&rc_benchmark(r, c).unwrap()).unwrap().two_block()
}

fn rc_params(r: f64, c: f64) -> VariantParams {
    VariantParams {
        sigma1: 1.0 / r,
        eps1: c,
        eps2: 2.0 * c,
        omega0: 0.0,
    }
}

fn fe_params(cfg: &CapacitorConfig) -> VariantParams {
    let (sigma1, eps1, eps2) = cfg.scaling_materials();
    VariantParams {
        sigma1,
        eps1,
        eps2,
        omega0: 0.0,
    }
}

fn all_variants(p: &VariantParams) -> Vec<ScalingVariant> {
    ScalingVariant::NAMES
        .iter()
        .map(|n| ScalingVariant::from_name(n, p).unwrap())
        .collect()
}

fn coarse() -> (CapacitorConfig, FemSystem, TwoBlockSystem) {
    let cfg = CapacitorConfig::default();
    let fem = cfg.build().unwrap();
    let sys = fem.partition();
    (cfg, fem, sys)
}

/// Closed form and the exact dense 2×2 condition of the assembled matrix.
fn rc_kappas(r: f64, c: f64, w: f64) -> [(f64, f64); 3] {
    let sys = rc_system(r, c);
    let p = rc_params(r, c);
    let pairs = [
        (RcVariant::Original, ScalingVariant::Original),
        (RcVariant::SymI, ScalingVariant::SymI),
        (RcVariant::SymMatIII, ScalingVariant::from_name("iii", &p).unwrap()),
    ];
    pairs.map(|(closed, variant)| {
        let k = rc_condition_closed_form(r, c, w, closed, Norm::Inf).kappa;
        let a = Scaling::new(&sys, variant, Domain::Frequency(w)).unwrap().matrix(&sys);
        (k, dense_cond_exact(&a.to_dense()).unwrap())
    })
}

fn rc_asymptotics_hold(r: f64, c: f64, w: f64) -> (bool, String) {
    let [orig, sym_i, sym_iii] = rc_kappas(r, c, w);
    let routes_agree = [orig, sym_i, sym_iii]
        .iter()
        .all(|(a, b)| (a - b).abs() <= 1e-10 * a.abs());
    let orig_target = 1.0 + 1.0 / (2.0 * w * r * c);
    let i_target = 1.0 / (2.0 * r * c);
    let orig_ok = (orig.0 - orig_target).abs() <= 0.01 * orig_target;
    let i_ok = (sym_i.0 - i_target).abs() <= 0.01 * i_target;
    let iii_ok = (1.0..=1.01).contains(&sym_iii.0);
    let detail = format!(
        "orig {:.4e} vs {:.4e} [{}], i {:.4e} vs {:.4e} [{}], iii {:.6} in [1, 1.01] [{}], routes agree [{}]",
        orig.0,
        orig_target,
        ok(orig_ok),
        sym_i.0,
        i_target,
        ok(i_ok),
        sym_iii.0,
        ok(iii_ok),
        ok(routes_agree)
    );
    (orig_ok && i_ok && iii_ok && routes_agree, detail)
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "fail"
    }
}

fn criterion_1() -> Outcome {
    let w = 2.0 * PI * 1e-16;
    let (pass, detail) = rc_asymptotics_hold(1.0, 1e12, w);
    let (_, picofarad) = rc_asymptotics_hold(1.0, 1e-12, w);
    Outcome {
        pass,
        detail: format!("C = 1e12 F: {detail}; informational C = 1e-12 F: {picofarad}"),
    }
}

/// Singular either by a failed pivot or by the condition sentinel.
fn reported_singular(sys: &TwoBlockSystem) -> (bool, String) {
    let a = Scaling::new(sys, ScalingVariant::Original, Domain::Static).unwrap().matrix(sys);
    let pivot = matches!(
        lu_factor(&a, default_pivot_tol(&a)),
        Err(SolverError::SingularMatrix { .. })
    );
    let kappa = scaled_condition(sys, ScalingVariant::Original, Domain::Static, BlockSolver::Lu);
    let sentinel = matches!(kappa, Ok(k) if is_breakdown(k));
    (pivot || sentinel, format!("pivot failure {pivot}, kappa {kappa:?}"))
}

fn criterion_2() -> Outcome {
    let (rc_ok, rc) = reported_singular(&rc_system(1.0, 1e12));
    let (_, _, sys) = coarse();
    let (fe_ok, fe) = reported_singular(&sys);
    Outcome {
        pass: rc_ok && fe_ok,
        detail: format!("RC: {rc}; FE: {fe}"),
    }
}

fn criterion_3() -> Outcome {
    let (cfg, fem, sys) = coarse();
    let v = ScalingVariant::from_name("iv", &fe_params(&cfg)).unwrap();
    let scaled = scale_system(&sys, v, Domain::Frequency(cfg.omega())).unwrap();
    let xi = scaled.solve(SolveMethod::Lu).unwrap().xi;
    let phi = sys.from_block_order(&scaled.recover(&xi).block_ordered().unwrap());
    // the source phasor is real, so the real part is the field at peak voltage
    let nodes: Vec<f64> = fem.node_values(&phi, C64::new(1.0, 0.0)).iter().map(|z| z.re).collect();
    let d = displacement_field(&fem.mesh, &fem.materials, &nodes).unwrap();
    let max = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = d.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    let spread = (max - min) / mean;
    let analytic = cfg.analytic_displacement();
    let uniform = spread <= 1e-6;
    let matches = (mean - analytic).abs() <= 1e-3 * analytic && (analytic - 7.378e-11).abs() <= 1e-3 * 7.378e-11;
    Outcome {
        pass: uniform && matches && d.len() == 1331,
        detail: format!(
            "{} elements, |D| mean {mean:.9e}, spread {spread:.2e}, series capacitor {analytic:.9e}",
            d.len()
        ),
    }
}

fn equivalence_error(sys: &TwoBlockSystem, variants: &[ScalingVariant], omegas: &[f64]) -> Result<f64, StabilizeError> {
    let mut worst: f64 = 0.0;
    for &w in omegas {
        let d = Domain::Frequency(w);
        let orig = scale_system(sys, ScalingVariant::Original, d)?;
        let reference = orig.solve(SolveMethod::Lu)?.xi;
        for &v in variants {
            let s = scale_system(sys, v, d)?;
            let xi = s.solve(SolveMethod::Lu)?.xi;
            let phi = s.recover(&xi).block_ordered().expect("recoverable at positive frequency");
            worst = worst.max(rel_diff(&phi, &reference));
        }
    }
    Ok(worst)
}

fn show_err(r: &Result<f64, StabilizeError>) -> String {
    match r {
        Ok(e) => format!("{e:.2e}"),
        Err(e) => e.to_string(),
    }
}

fn criterion_4() -> Outcome {
    let omegas = logspace(-12.0, 6.0, 20);
    let mut parts = Vec::new();
    let mut pass = true;
    for (r, c) in [(1.0, 1e12), (1.0, 1e-12)] {
        let variants = all_variants(&rc_params(r, c));
        let err = equivalence_error(&rc_system(r, c), &variants[1..], &omegas);
        pass &= matches!(err, Ok(e) if e <= 1e-10);
        parts.push(format!("RC (R={r}, C={c:e}) max rel err {}", show_err(&err)));
    }
    let (cfg, _, sys) = coarse();
    let variants = all_variants(&fe_params(&cfg));
    let err = equivalence_error(&sys, &variants[1..], &omegas);
    pass &= matches!(err, Ok(e) if e <= 1e-10);
    parts.push(format!("FE max rel err {}", show_err(&err)));
    Outcome {
        pass,
        detail: format!("8 variants x 20 frequencies; {}", parts.join(", ")),
    }
}

/// Least-squares slope of `log κ` against `log δt`.
fn loglog_slope(dt: &[f64], kappa: &[f64]) -> f64 {
    let x: Vec<f64> = dt.iter().map(|v| v.log10()).collect();
    let y: Vec<f64> = kappa.iter().map(|v| v.log10()).collect();
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

fn criterion_5() -> Outcome {
    let (cfg, _, sys) = coarse();
    let p = fe_params(&cfg);
    let names = ["orig", "iii", "iv", "v", "vi"];
    let variants: Vec<ScalingVariant> = names.iter().map(|n| ScalingVariant::from_name(n, &p).unwrap()).collect();
    let grid = logspace(-10.0, 10.0, 21);
    let table = condition_vs_dt(&sys, &variants, &grid, BlockSolver::Lu);
    let column = |j: usize| table.iter().map(|row| row[j]).collect::<Vec<f64>>();

    let orig = column(0);
    let large: Vec<usize> = (0..grid.len()).filter(|&k| grid[k] >= 1.0).collect();
    let slope = loglog_slope(
        &large.iter().map(|&k| grid[k]).collect::<Vec<_>>(),
        &large.iter().map(|&k| orig[k]).collect::<Vec<_>>(),
    );
    let slope_ok = orig.iter().all(|k| k.is_finite()) && (slope - 1.0).abs() <= 0.2;

    let ratio = |j: usize| {
        let c = column(j);
        let max = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = c.iter().copied().fold(f64::INFINITY, f64::min);
        if c.iter().all(|k| k.is_finite()) {
            max / min
        } else {
            f64::INFINITY
        }
    };
    let (r3, r4) = (ratio(1), ratio(2));
    let flat_ok = r3 < 100.0 && r4 < 100.0;

    let block_max = |j: usize| column(j).iter().copied().fold(f64::NEG_INFINITY, |a, b| if b.is_nan() { f64::INFINITY } else { a.max(b) });
    let (m5, m6) = (block_max(3), block_max(4));
    let block_ok = m5 < 50.0 && m6 < 50.0;
    Outcome {
        pass: slope_ok && flat_ok && block_ok,
        detail: format!(
            "orig slope {slope:.3} for dt >= 1 s (kappa {:.3e} to {:.3e}), iii max/min {r3:.3}, iv max/min {r4:.3}, v max {m5:.3}, vi max {m6:.3}",
            orig[0],
            orig[orig.len() - 1]
        ),
    }
}

fn iterations(sys: &TwoBlockSystem, variant: ScalingVariant, maxit: usize) -> Result<Option<usize>, StabilizeError> {
    let s = scale_system(sys, variant, Domain::TimeStep(1e-3))?;
    match s.solve(SolveMethod::Bicgstab {
        tol: 1e-15,
        maxit,
        ilu: false,
    }) {
        Ok(r) => Ok(r.iterations),
        Err(StabilizeError::Solver(SolverError::NoConvergence { .. })) => Ok(None),
        Err(e) => Err(e),
    }
}

fn criterion_6() -> Outcome {
    let (cfg, _, sys) = coarse();
    let maxit = 20_000;
    let orig = iterations(&sys, ScalingVariant::Original, maxit);
    let iv = iterations(&sys, ScalingVariant::from_name("iv", &fe_params(&cfg)).unwrap(), maxit);
    let pass = match (&orig, &iv) {
        (Ok(Some(o)), Ok(Some(s))) => s < o,
        (Ok(None), Ok(Some(_))) => true,
        _ => false,
    };
    let show = |r: &Result<Option<usize>, StabilizeError>| match r {
        Ok(Some(n)) => n.to_string(),
        Ok(None) => format!("no convergence in {maxit}"),
        Err(e) => e.to_string(),
    };
    Outcome {
        pass,
        detail: format!("orig {}, iv {}", show(&orig), show(&iv)),
    }
}

fn real_dense(a: &CsrMatrix) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(a.nrows(), a.ncols());
    for (i, j, v) in a.triplets() {
        d[(i, j)] = v.re;
    }
    d
}

fn criterion_7() -> Outcome {
    let (cfg, fem, sys) = coarse();
    let mut failures = Vec::new();

    let domains = [
        Domain::Static,
        Domain::Frequency(1e-12),
        Domain::Frequency(cfg.omega()),
        Domain::TimeStep(1e-3),
        Domain::TimeStep(1e10),
    ];
    for v in all_variants(&fe_params(&cfg)) {
        if matches!(v, ScalingVariant::SymI | ScalingVariant::SymMatIII { .. } | ScalingVariant::JacobiSym) {
            for d in domains {
                if !Scaling::new(&sys, v, d).unwrap().matrix(&sys).is_symmetric_exact() {
                    failures.push(format!("{} not symmetric at {d:?}", v.name()));
                }
            }
        }
    }

    let rc = rc_system(1.0, 1e12);
    for (label, system, params) in [("RC", &rc, rc_params(1.0, 1e12)), ("FE", &sys, fe_params(&cfg))] {
        for v in &all_variants(&params)[1..] {
            let a = Scaling::new(system, *v, Domain::Static).unwrap().matrix(system);
            if (0..a.nrows()).any(|i| a.row_is_zero(i)) {
                failures.push(format!("{label} {} has a zero row at zero frequency", v.name()));
            }
        }
    }

    let mut in_i2 = vec![false; sys.dim()];
    for &i in &sys.i2 {
        in_i2[i] = true;
    }
    if fem.k.triplets().any(|(i, j, v)| (in_i2[i] || in_i2[j]) && v != C64::new(0.0, 0.0)) {
        failures.push("conductivity couples an insulator unknown".into());
    }

    let mesh = build_box_mesh([0.3, 0.2, 0.1], [5, 4, 3], |p| usize::from(p[0] > 0.12)).unwrap();
    let n = mesh.n_nodes();
    let mats = MaterialMap::new(vec![
        Material {
            sigma: 0.0,
            eps: cfg.eps_i,
        },
        Material {
            sigma: cfg.sigma_o,
            eps: cfg.eps_o,
        },
    ])
    .unwrap();
    let (k, m) = assemble_km(&mesh, &mats).unwrap();
    for (name, a) in [("K", real_dense(&k)), ("M", real_dense(&m))] {
        if a != a.transpose() {
            failures.push(format!("{name} not symmetric"));
        }
        for i in 0..n {
            if a.row(i).iter().sum::<f64>().abs() > 1e-12 * a.row(i).amax() {
                failures.push(format!("{name} row {i} does not sum to zero"));
            }
        }
        let eig = a.clone().symmetric_eigen().eigenvalues;
        if eig.min() < -1e-12 * eig.max() {
            failures.push(format!("{name} not positive semi-definite"));
        }
    }
    let bc = BoundaryConditions {
        dirichlet: mesh.face_nodes(0, false).into_iter().map(|v| (v, C64::new(0.0, 0.0))).collect(),
        floating: Vec::new(),
    };
    let reduced = FemSystem::new(mesh, mats, &bc, None).unwrap();
    let md = real_dense(&reduced.m);
    if md.clone().cholesky().is_none() || md.symmetric_eigen().eigenvalues.min() <= 0.0 {
        failures.push("reduced M not positive definite".into());
    }

    Outcome {
        pass: failures.is_empty() && n <= 500,
        detail: if failures.is_empty() {
            format!("symmetry, nonvanishing rows, zero blocks and {n}-node dense checks hold")
        } else {
            failures.join("; ")
        },
    }
}

fn criterion_8() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for div in [6, 9] {
        let (fem, group) = floating_box(div).unwrap();
        let nodes = (div + 1).pow(3);
        let plates = 2 * (div + 1).pow(2);
        let reduction = group.len() - 1;
        let count_ok = fem.dofs.n_free() == nodes - plates - reduction;
        let s = C64::new(0.0, 1.0);
        let a = CsrMatrix::lincomb(C64::new(1.0, 0.0), &fem.k, s, &fem.m);
        let phi = lu_factor(&a, 0.0).unwrap().solve(&fem.assemble_rhs(s));
        let values = fem.node_values(&phi, C64::new(1.0, 0.0));
        let v0 = values[group[0]];
        let spread = group.iter().map(|&n| (values[n] - v0).norm()).fold(0.0, f64::max);
        pass &= count_ok && spread <= 1e-12;
        parts.push(format!(
            "{div}^3: electrode {} nodes, free {} = {nodes} - {plates} - {reduction} [{}], spread {spread:.1e}, potential {:.6}",
            group.len(),
            fem.dofs.n_free(),
            ok(count_ok),
            v0.re
        ));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 8] = [
        ("RC asymptotics", criterion_1, 1),
        ("breakdown detection", criterion_2, 1),
        ("constant-D benchmark", criterion_3, 30),
        ("solution equivalence", criterion_4, 120),
        ("conditioning curves", criterion_5, 300),
        ("iteration-count ordering", criterion_6, 60),
        ("structural invariants", criterion_7, 60),
        ("floating potential", criterion_8, 10),
    ];
    let mut failed = 0;
    for (k, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let pass = out.pass && elapsed < Duration::from_secs(*budget);
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {} {name}: {} ({:.2} s of {budget} s) {}",
            k + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            out.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
