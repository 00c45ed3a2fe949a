use super::{norm2, LinearOperator, Preconditioner, SolverError, C64};

#[derive(Debug, Clone)]
pub struct BicgstabOutcome {
    pub x: Vec<C64>,
    pub iterations: usize,
    /// True relative residual `‖b − Ax‖₂/‖b‖₂` of the returned iterate.
    pub residual: f64,
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn true_residual(a: &dyn LinearOperator, x: &[C64], b: &[C64]) -> Vec<C64> {
    let ax = a.apply(x);
    b.iter().zip(&ax).map(|(p, q)| p - q).collect()
}

/// Preconditioned BiCGStab from a zero initial guess.
///
/// The preconditioner enters as in the usual van der Vorst formulation, so the
/// recursively updated residual is the residual of the unpreconditioned
/// system. Convergence is only reported after the true residual has been
/// recomputed and satisfies `tol`; otherwise the recursion restarts from the
/// true residual.
pub fn bicgstab(
    a: &dyn LinearOperator,
    b: &[C64],
    tol: f64,
    maxit: usize,
    precond: Option<&dyn Preconditioner>,
) -> Result<BicgstabOutcome, SolverError> {
    let n = a.dim();
    if b.len() != n {
        return Err(SolverError::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let zero = C64::new(0.0, 0.0);
    let nb = norm2(b);
    let mut x = vec![zero; n];
    if nb == 0.0 {
        return Ok(BicgstabOutcome {
            x,
            iterations: 0,
            residual: 0.0,
        });
    }
    let apply_m = |v: &[C64]| match precond {
        Some(m) => m.precondition(v),
        None => v.to_vec(),
    };

    let mut r = b.to_vec();
    let mut rhat = r.clone();
    let mut p = vec![zero; n];
    let mut v = vec![zero; n];
    let (mut rho_old, mut alpha, mut omega) = (C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0));
    let mut best = x.clone();
    let mut best_res = 1.0f64;
    let mut restart = true;

    for it in 1..=maxit {
        let rho = dot(&rhat, &r);
        if rho == zero {
            break;
        }
        if restart {
            p.copy_from_slice(&r);
            restart = false;
        } else {
            let beta = (rho / rho_old) * (alpha / omega);
            for i in 0..n {
                p[i] = r[i] + beta * (p[i] - omega * v[i]);
            }
        }
        let phat = apply_m(&p);
        v = a.apply(&phat);
        let denom = dot(&rhat, &v);
        if denom == zero {
            break;
        }
        alpha = rho / denom;
        let s: Vec<C64> = r.iter().zip(&v).map(|(ri, vi)| ri - alpha * vi).collect();

        if norm2(&s) / nb <= tol {
            let mut xt = x.clone();
            for i in 0..n {
                xt[i] += alpha * phat[i];
            }
            let rt = true_residual(a, &xt, b);
            let res = norm2(&rt) / nb;
            if res <= tol {
                return Ok(BicgstabOutcome {
                    x: xt,
                    iterations: it,
                    residual: res,
                });
            }
        }

        let shat = apply_m(&s);
        let t = a.apply(&shat);
        let tt = dot(&t, &t);
        omega = if tt == zero { zero } else { dot(&t, &s) / tt };
        for i in 0..n {
            x[i] += alpha * phat[i] + omega * shat[i];
        }
        for i in 0..n {
            r[i] = s[i] - omega * t[i];
        }
        let rec = norm2(&r) / nb;
        if rec <= tol {
            let rt = true_residual(a, &x, b);
            let res = norm2(&rt) / nb;
            if res <= tol {
                return Ok(BicgstabOutcome {
                    x,
                    iterations: it,
                    residual: res,
                });
            }
            r = rt;
            rhat = r.clone();
            restart = true;
        }
        if rec < best_res {
            best_res = rec;
            best.copy_from_slice(&x);
        }
        if omega == zero {
            r = true_residual(a, &x, b);
            rhat = r.clone();
            restart = true;
        }
        rho_old = rho;
    }

    let residual = norm2(&true_residual(a, &best, b)) / nb;
    Err(SolverError::NoConvergence {
        iterations: maxit,
        residual,
        best,
    })
}
