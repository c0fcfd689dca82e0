//! Downhill simplex (Nelder–Mead) minimization.
//!
//! Uses the dimension-adaptive coefficients of Gao and Han (2012), which keep
//! the simplex from collapsing prematurely in the 12–60 dimensional searches
//! the discord oracle runs.

#[derive(Clone, Debug)]
pub struct NelderMead {
    pub max_iters: usize,
    /// Stop once `f(worst) − f(best)` falls below this.
    pub f_tol: f64,
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            f_tol: 1e-10,
            initial_step: 0.25,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

impl NelderMead {
    pub fn minimize(&self, mut f: impl FnMut(&[f64]) -> f64, x0: &[f64]) -> Minimum {
        let n = x0.len();
        let mut evaluations = 0usize;
        let mut eval = |x: &[f64]| {
            evaluations += 1;
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        if n == 0 {
            let value = eval(x0);
            return Minimum {
                x: Vec::new(),
                value,
                iterations: 0,
                evaluations: 1,
                converged: true,
            };
        }

        let nf = n as f64;
        let alpha = 1.0;
        let gamma = 1.0 + 2.0 / nf;
        let rho = 0.75 - 1.0 / (2.0 * nf);
        let sigma = 1.0 - 1.0 / nf;

        let mut simplex: Vec<(f64, Vec<f64>)> = Vec::with_capacity(n + 1);
        simplex.push((eval(x0), x0.to_vec()));
        for i in 0..n {
            let mut v = x0.to_vec();
            v[i] += self.initial_step;
            simplex.push((eval(&v), v));
        }

        let mut centroid = vec![0.0; n];
        let mut trial = vec![0.0; n];
        let mut trial2 = vec![0.0; n];
        let mut iterations = 0;
        let mut converged = false;

        loop {
            simplex.sort_by(|a, b| a.0.total_cmp(&b.0));
            if simplex[n].0 - simplex[0].0 < self.f_tol {
                converged = true;
                break;
            }
            if iterations >= self.max_iters {
                break;
            }
            iterations += 1;

            centroid.fill(0.0);
            for (_, v) in &simplex[..n] {
                for (c, x) in centroid.iter_mut().zip(v) {
                    *c += x / nf;
                }
            }
            let worst = simplex[n].1.clone();
            let f_best = simplex[0].0;
            let f_second_worst = simplex[n - 1].0;
            let f_worst = simplex[n].0;

            along(&centroid, &worst, -alpha, &mut trial);
            let f_r = eval(&trial);

            if f_r < f_best {
                along(&centroid, &worst, -alpha * gamma, &mut trial2);
                let f_e = eval(&trial2);
                if f_e < f_r {
                    simplex[n] = (f_e, trial2.clone());
                } else {
                    simplex[n] = (f_r, trial.clone());
                }
                continue;
            }
            if f_r < f_second_worst {
                simplex[n] = (f_r, trial.clone());
                continue;
            }
            if f_r < f_worst {
                // outside contraction
                along(&centroid, &worst, -alpha * rho, &mut trial2);
                let f_c = eval(&trial2);
                if f_c <= f_r {
                    simplex[n] = (f_c, trial2.clone());
                    continue;
                }
            } else {
                // inside contraction
                along(&centroid, &worst, rho, &mut trial2);
                let f_c = eval(&trial2);
                if f_c < f_worst {
                    simplex[n] = (f_c, trial2.clone());
                    continue;
                }
            }
            // shrink toward the best vertex
            let best = simplex[0].1.clone();
            for (fv, v) in simplex.iter_mut().skip(1) {
                for (x, b) in v.iter_mut().zip(&best) {
                    *x = b + sigma * (*x - b);
                }
                *fv = eval(v);
            }
        }

        let (value, x) = simplex.swap_remove(0);
        Minimum {
            x,
            value,
            iterations,
            evaluations,
            converged,
        }
    }
}

/// `out = c + t (p − c)`
fn along(c: &[f64], p: &[f64], t: f64, out: &mut [f64]) {
    for ((o, ci), pi) in out.iter_mut().zip(c).zip(p) {
        *o = ci + t * (pi - ci);
    }
}
