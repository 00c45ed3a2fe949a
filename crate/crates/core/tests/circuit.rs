use lowfreq::circuit::*;
use lowfreq::numkit::{condition_number, lu_factor, Norm, SolverError, C64};
use lowfreq::stabilize::{Domain, Scaling, ScalingVariant};
use proptest::prelude::*;

const LADDER: &str = "\
# source feeding an RC ladder through a small series resistor
V Vin in 0 1.0
R Rs in a 10
C C1 a 0 1e-6
R R2 a b 100
C C2 b 0 2e-6
C C3 b c 1e-6
R R4 c 0 1e3
I I1 0 c 1e-3 2e-3
";

/// Kirchhoff residual from branch currents, computed without the MNA matrix.
fn kirchhoff_residual(net: &CircuitNetlist, omega: f64, x: &[C64]) -> f64 {
    let nn = net.n_nodes();
    let v = &x[..nn];
    let mut kcl = vec![C64::new(0.0, 0.0); nn];
    let mut scale: f64 = 0.0;
    let mut add = |inc: &Incidence, b: usize, current: C64, kcl: &mut [C64]| {
        for (i, s) in inc.column(b) {
            kcl[i] += f64::from(s) * current;
        }
        scale = scale.max(current.norm());
    };
    let voltage = |inc: &Incidence, b: usize| -> C64 { inc.column(b).iter().map(|&(i, s)| f64::from(s) * v[i]).sum() };
    for b in 0..net.a_r.n_branches() {
        add(&net.a_r, b, net.g[b] * voltage(&net.a_r, b), &mut kcl);
    }
    for b in 0..net.a_c.n_branches() {
        add(&net.a_c, b, C64::new(0.0, omega * net.c[b]) * voltage(&net.a_c, b), &mut kcl);
    }
    for b in 0..net.a_i.n_branches() {
        add(&net.a_i, b, net.i_src[b], &mut kcl);
    }
    for b in 0..net.a_v.n_branches() {
        add(&net.a_v, b, x[nn + b], &mut kcl);
    }
    let mut worst = kcl.iter().map(|z| z.norm()).fold(0.0, f64::max) / scale;
    for b in 0..net.a_v.n_branches() {
        worst = worst.max((voltage(&net.a_v, b) - net.v_src[b]).norm() / net.v_src[b].norm());
    }
    worst
}

#[test]
fn solutions_satisfy_kirchhoff_laws() {
    let ladder = parse_netlist(LADDER).unwrap();
    let bench = rc_benchmark(1.0, 1e-12).unwrap();
    for net in [&ladder, &bench] {
        for omega in [1e-3, 1.0, 1e3, 1e6, 1e9] {
            let sys = assemble_mna(net, omega).unwrap();
            let x = lu_factor(&sys.matrix, 0.0).unwrap().solve(&sys.rhs);
            let r = kirchhoff_residual(net, omega, &x);
            assert!(r <= 1e-12, "omega {omega}: {r}");
        }
    }
}

#[test]
fn original_condition_decreases_below_corner() {
    let (r, c) = (1.0, 1e-12);
    let ops = MnaOperators::new(&rc_benchmark(r, c).unwrap()).unwrap();
    let corner = 1.0 / (2.0 * r * c);
    let omegas: Vec<f64> = (0..=30).map(|k| 10f64.powf(-6.0 + 0.5 * k as f64)).filter(|&w| w < corner).collect();
    let mut last = f64::INFINITY;
    for w in omegas {
        let numeric = condition_number(&ops.at(w).matrix, Norm::Inf).unwrap();
        let closed = rc_condition_closed_form(r, c, w, RcVariant::Original, Norm::Inf).kappa;
        assert!((numeric - closed).abs() <= 1e-10 * closed, "{w}: {numeric} vs {closed}");
        assert!(closed < last, "not decreasing at {w}");
        last = closed;
    }
}

#[test]
fn static_benchmark_is_singular() {
    let sys = assemble_mna(&rc_benchmark(1.0, 1e12).unwrap(), 0.0).unwrap();
    assert!(matches!(lu_factor(&sys.matrix, 0.0), Err(SolverError::SingularMatrix { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unscaled_sym_i_solution_matches_original(
        log_r in -3.0f64..3.0, log_c in -14.0f64..12.0, log_w in -12.0f64..8.0,
    ) {
        let (r, c, w) = (10f64.powf(log_r), 10f64.powf(log_c), 10f64.powf(log_w));
        let ops = MnaOperators::new(&rc_benchmark(r, c).unwrap()).unwrap();
        let sys = ops.two_block();
        let orig = ops.at(w);
        let phi = lu_factor(&orig.matrix, 0.0).unwrap().solve(&orig.rhs);
        let scaling = Scaling::new(&sys, ScalingVariant::SymI, Domain::Frequency(w)).unwrap();
        let a = scaling.matrix(&sys);
        let rhs = scaling.system_rhs(&sys).unwrap();
        let xi = lu_factor(&a, 0.0).unwrap().solve(&rhs);
        // node 1 carries the resistor and is block 1; node 2 is purely capacitive
        let recovered = [xi[0], xi[1] / w.sqrt()];
        for k in 0..2 {
            prop_assert!((recovered[k] - phi[k]).norm() <= 1e-12 * phi[k].norm().max(phi[0].norm()));
        }
    }
}
