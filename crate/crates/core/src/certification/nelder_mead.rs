//! Nelder–Mead simplex search with dimension-adaptive coefficients.

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Stop when the spread of simplex values falls below this.
    pub f_tol: f64,
    /// ... and the simplex diameter below this.
    pub x_tol: f64,
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_evals: 4000,
            f_tol: 1e-14,
            x_tol: 1e-11,
            initial_step: 0.5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

pub fn minimize<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> NelderMeadResult {
    let n = x0.len();
    let nf = n as f64;
    let (alpha, beta, gamma, delta) = if n >= 2 {
        (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };

    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| eval(x, &mut evals)).collect();

    let mut order: Vec<usize> = (0..=n).collect();
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];
    let mut converged = false;

    while evals < opts.max_evals {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        let spread = values[worst] - values[best];
        let diameter = simplex
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[best])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread.abs() <= opts.f_tol && diameter <= opts.x_tol {
            converged = true;
            break;
        }
        if diameter <= opts.x_tol * 1e-3 {
            converged = true;
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &i in &order[..n] {
            for (c, v) in centroid.iter_mut().zip(&simplex[i]) {
                *c += v / nf;
            }
        }

        for k in 0..n {
            trial[k] = centroid[k] + alpha * (centroid[k] - simplex[worst][k]);
        }
        let fr = eval(&trial, &mut evals);

        if fr < values[best] {
            for k in 0..n {
                trial2[k] = centroid[k] + beta * (trial[k] - centroid[k]);
            }
            let fe = eval(&trial2, &mut evals);
            if fe < fr {
                simplex[worst].copy_from_slice(&trial2);
                values[worst] = fe;
            } else {
                simplex[worst].copy_from_slice(&trial);
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[second_worst] {
            simplex[worst].copy_from_slice(&trial);
            values[worst] = fr;
            continue;
        }

        // contraction, outside if the reflection improved on the worst point
        let outside = fr < values[worst];
        for k in 0..n {
            trial2[k] = if outside {
                centroid[k] + gamma * (trial[k] - centroid[k])
            } else {
                centroid[k] - gamma * (centroid[k] - simplex[worst][k])
            };
        }
        let fc = eval(&trial2, &mut evals);
        if (outside && fc <= fr) || (!outside && fc < values[worst]) {
            simplex[worst].copy_from_slice(&trial2);
            values[worst] = fc;
            continue;
        }

        // shrink towards the best vertex
        let xb = simplex[best].clone();
        for &i in &order[1..] {
            for k in 0..n {
                simplex[i][k] = xb[k] + delta * (simplex[i][k] - xb[k]);
            }
            values[i] = eval(&simplex[i], &mut evals);
        }
    }

    let best = (0..=n)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("nonempty simplex");
    NelderMeadResult {
        x: simplex[best].clone(),
        f: values[best],
        evals,
        converged,
    }
}

/// Repeated Nelder–Mead, restarting from the incumbent with a fresh, smaller
/// simplex until a cycle stops improving.
pub fn minimize_with_restarts<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    opts: &NelderMeadOptions,
    cycles: usize,
) -> NelderMeadResult {
    let mut res = minimize(&mut f, x0, opts);
    let mut step = opts.initial_step;
    for _ in 1..cycles {
        step = (step * 0.25).max(1e-4);
        let o = NelderMeadOptions {
            initial_step: step,
            ..*opts
        };
        let next = minimize(&mut f, &res.x, &o);
        let improved = res.f - next.f;
        let evals = res.evals + next.evals;
        if next.f <= res.f {
            res = NelderMeadResult { evals, ..next };
        } else {
            res.evals = evals;
        }
        if improved.abs() < 1e-13 {
            break;
        }
    }
    res
}
