use lowfreq::fem::CapacitorConfig;
use lowfreq::numkit::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_complex(rng: &mut impl Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Sparse random matrix with `per_row` off-diagonal entries and a diagonal
/// shifted by `shift` times the row's absolute off-diagonal sum.
fn random_sparse(n: usize, per_row: usize, shift: f64, seed: u64) -> CsrMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trip = Vec::new();
    for i in 0..n {
        let mut sum = 0.0;
        for _ in 0..per_row {
            let j = rng.gen_range(0..n);
            if j != i {
                let v = random_complex(&mut rng);
                sum += v.norm();
                trip.push((i, j, v));
            }
        }
        let phase = random_complex(&mut rng);
        trip.push((i, i, phase / phase.norm() * (shift * sum + 0.1)));
    }
    CsrMatrix::from_triplets(n, n, &trip).unwrap()
}

fn random_vector(n: usize, rng: &mut impl Rng) -> Vec<C64> {
    (0..n).map(|_| random_complex(rng)).collect()
}

fn max_rel_diff(a: &[C64], b: &[C64]) -> f64 {
    let scale = b.iter().map(|v| v.norm()).fold(0.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

/// Doolittle elimination without pivoting, dense, as an independent oracle.
fn dense_doolittle(a: &[Vec<C64>]) -> (Vec<Vec<C64>>, Vec<Vec<C64>>) {
    let n = a.len();
    let mut u = a.to_vec();
    let mut l = vec![vec![C64::new(0.0, 0.0); n]; n];
    for k in 0..n {
        l[k][k] = C64::new(1.0, 0.0);
        for i in k + 1..n {
            let f = u[i][k] / u[k][k];
            l[i][k] = f;
            for j in k..n {
                let ukj = u[k][j];
                u[i][j] -= f * ukj;
            }
        }
    }
    (l, u)
}

#[test]
fn lu_matches_dense_elimination() {
    let a = random_sparse(50, 6, 1.5, 11);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let b = random_vector(50, &mut rng);
    let lu = lu_factor(&a, default_pivot_tol(&a)).unwrap();
    let x = lu.solve(&b);
    let oracle = dense_solve(&a.to_dense(), &b).unwrap();
    assert!(max_rel_diff(&x, &oracle) < 1e-10);
}

#[test]
fn lu_residual_over_many_right_hand_sides() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (seed, shift) in [(1, 0.2), (2, 1.0), (3, 0.05)] {
        let a = random_sparse(120, 5, shift, seed);
        let lu = lu_factor(&a, default_pivot_tol(&a)).unwrap();
        for _ in 0..100 {
            let b = random_vector(120, &mut rng);
            assert!(relative_residual(&a, &lu.solve(&b), &b) <= 1e-10);
            let bt = lu.solve_transpose(&b);
            let r: Vec<C64> = a.mul_vec_transpose(&bt).iter().zip(&b).map(|(p, q)| p - q).collect();
            assert!(norm2(&r) <= 1e-10 * norm2(&b));
        }
    }
}

#[test]
fn condest_within_factor_three_of_dense_on_200() {
    let a = random_sparse(200, 8, 0.3, 21);
    let exact = dense_cond_exact(&a.to_dense()).unwrap();
    let est = condest_inf(&a, &lu_factor(&a, 0.0).unwrap());
    assert!(est <= exact * (1.0 + 1e-12) && est >= exact / 3.0, "{est} vs {exact}");
}

#[test]
fn dense_condition_of_rc_matrix_matches_closed_form() {
    use lowfreq::circuit::{rc_condition_closed_form, Norm, RcVariant};
    for w in [1e-3, 1.0, 1e4] {
        let (r, c) = (2.0, 0.01);
        let a = vec![
            vec![C64::new(1.0 / r, w * c), C64::new(0.0, -w * c)],
            vec![C64::new(0.0, -w * c), C64::new(0.0, 2.0 * w * c)],
        ];
        let exact = dense_cond_exact(&a).unwrap();
        let closed = rc_condition_closed_form(r, c, w, RcVariant::Original, Norm::Inf).kappa;
        assert!((exact - closed).abs() <= 1e-12 * closed, "{exact} vs {closed}");
    }
}

#[test]
fn ilu_reproduces_exact_factors_without_fill() {
    // tridiagonal and arrow-free banded patterns are closed under elimination
    let n = 40;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut trip = Vec::new();
    for i in 0..n {
        trip.push((i, i, C64::new(4.0, 0.0) + random_complex(&mut rng)));
        if i + 1 < n {
            trip.push((i, i + 1, random_complex(&mut rng)));
            trip.push((i + 1, i, random_complex(&mut rng)));
        }
    }
    let a = CsrMatrix::from_triplets(n, n, &trip).unwrap();
    let f = ilu0(&a).unwrap();
    let (l, u) = dense_doolittle(&a.to_dense());
    let (fl, fu) = (f.l_factor().to_dense(), f.u_factor().to_dense());
    for i in 0..n {
        for j in 0..n {
            assert!((fl[i][j] - l[i][j]).norm() <= 1e-12, "L({i},{j})");
            assert!((fu[i][j] - u[i][j]).norm() <= 1e-12 * u[i][j].norm().max(1.0), "U({i},{j})");
        }
    }
}

#[test]
fn bicgstab_on_spd_matches_lu() {
    let n = 100;
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut trip = Vec::new();
    for i in 0..n {
        trip.push((i, i, C64::new(4.0, 0.0)));
        for j in [i + 1, i + 10] {
            if j < n {
                let v = C64::new(-rng.gen_range(0.2..1.0), 0.0);
                trip.push((i, j, v));
                trip.push((j, i, v));
            }
        }
    }
    let a = CsrMatrix::from_triplets(n, n, &trip).unwrap();
    let b = random_vector(n, &mut rng);
    let direct = lu_factor(&a, 0.0).unwrap().solve(&b);
    let tol = 1e-12;
    let out = bicgstab(&a, &b, tol, 500, None).unwrap();
    assert!(out.residual <= tol);
    assert!(relative_residual(&a, &out.x, &b) <= tol);
    assert!(max_rel_diff(&out.x, &direct) < 1e-10);
}

struct PreconditionedMass<'a> {
    m: &'a CsrMatrix,
    f: &'a Ilu0Preconditioner,
}

impl LinearOperator for PreconditionedMass<'_> {
    fn dim(&self) -> usize {
        self.m.nrows()
    }
    fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.f.solve(&self.m.mul_vec(x))
    }
    fn apply_transpose(&self, x: &[C64]) -> Vec<C64> {
        self.m.mul_vec_transpose(&self.f.solve_transpose(x))
    }
}

struct PreconditionedMassInverse<'a> {
    lu: &'a LuFactorization,
    f: &'a Ilu0Preconditioner,
}

impl LinearOperator for PreconditionedMassInverse<'_> {
    fn dim(&self) -> usize {
        self.lu.dim()
    }
    fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.lu.solve(&self.f.multiply(x))
    }
    fn apply_transpose(&self, x: &[C64]) -> Vec<C64> {
        self.f.multiply_transpose(&self.lu.solve_transpose(x))
    }
}

#[test]
fn ilu_lowers_condition_of_insulator_mass_block() {
    let sys = CapacitorConfig::default().build().unwrap().partition();
    let m22 = &sys.m22;
    let plain = condition_number_inf(m22).unwrap();
    let f = ilu0(m22).unwrap();
    let lu = lu_factor(m22, 0.0).unwrap();
    let pre = condest_inf_operator(
        &PreconditionedMass { m: m22, f: &f },
        &PreconditionedMassInverse { lu: &lu, f: &f },
    );
    assert!(pre < plain, "{pre} vs {plain}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn condest_agrees_with_dense_oracle(n in 2usize..120, per_row in 1usize..6, shift in 0.01f64..2.0, seed in any::<u64>()) {
        let a = random_sparse(n, per_row, shift, seed);
        let exact = dense_cond_exact(&a.to_dense()).unwrap();
        let est = condest_inf(&a, &lu_factor(&a, 0.0).unwrap());
        prop_assert!(est >= exact / 3.0 && est <= exact * (1.0 + 1e-10), "{} vs {}", est, exact);
    }

    #[test]
    fn factorizable_matrices_solve_accurately(n in 1usize..80, seed in any::<u64>()) {
        let a = random_sparse(n, 4, 1.1, seed);
        let lu = lu_factor(&a, default_pivot_tol(&a)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a);
        for _ in 0..100 {
            let b = random_vector(n, &mut rng);
            prop_assert!(relative_residual(&a, &lu.solve(&b), &b) <= 1e-10);
        }
    }

    #[test]
    fn bicgstab_converged_returns_meet_tolerance(n in 2usize..60, seed in any::<u64>(), tol_exp in 6i32..13) {
        let a = random_sparse(n, 3, 2.0, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_vector(n, &mut rng);
        let tol = 10f64.powi(-tol_exp);
        if let Ok(out) = bicgstab(&a, &b, tol, 10 * n + 50, None) {
            prop_assert!(relative_residual(&a, &out.x, &b) <= tol);
        }
    }

    #[test]
    fn from_triplets_sums_duplicates(entries in proptest::collection::vec((0usize..6, 0usize..6, -5.0f64..5.0), 0..40)) {
        let trip: Vec<_> = entries.iter().map(|&(i, j, v)| (i, j, C64::new(v, 0.0))).collect();
        let a = CsrMatrix::from_triplets(6, 6, &trip).unwrap();
        let mut dense = [[0.0f64; 6]; 6];
        for &(i, j, v) in &entries {
            dense[i][j] += v;
        }
        for i in 0..6 {
            let (cols, _) = a.row(i);
            prop_assert!(cols.windows(2).all(|w| w[0] < w[1]));
            for j in 0..6 {
                prop_assert!((a.get(i, j).re - dense[i][j]).abs() < 1e-12);
            }
        }
    }
}
