//! Derivative-free local minimization (Nelder–Mead simplex).

/// Stopping rules for [`nelder_mead`].
#[derive(Clone, Copy, Debug)]
pub struct NelderMeadOptions {
    /// Converged when `f_worst − f_best ≤ ftol · (|f_best| + ftol)`.
    pub ftol: f64,
    /// ... and the simplex diameter is below `xtol`.
    pub xtol: f64,
    pub max_evals: usize,
    /// Rebuild the simplex around the optimum this many times after
    /// convergence, to escape premature collapse.
    pub restarts: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { ftol: 1e-12, xtol: 1e-10, max_evals: 20_000, restarts: 1 }
    }
}

#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Minimizes `f` from `x0` with initial simplex edge lengths `step`.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], step: &[f64], opts: NelderMeadOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let mut evals = 0;
    let mut best = x0.to_vec();
    let mut best_f = f64::INFINITY;
    let mut converged = false;
    for round in 0..=opts.restarts {
        let scale = if round == 0 { 1.0 } else { 0.1 };
        let steps: Vec<f64> = step.iter().map(|s| s * scale).collect();
        let (x, fx, n, ok) = simplex_run(&mut f, &best, &steps, opts, opts.max_evals.saturating_sub(evals));
        evals += n;
        let improved = fx < best_f - opts.ftol * (best_f.abs() + opts.ftol);
        if fx <= best_f {
            best = x;
            best_f = fx;
        }
        converged = ok;
        if !ok || (round > 0 && !improved) || evals >= opts.max_evals {
            break;
        }
    }
    Minimum { x: best, f: best_f, evals, converged }
}

fn simplex_run<F>(
    f: &mut F,
    x0: &[f64],
    step: &[f64],
    opts: NelderMeadOptions,
    budget: usize,
) -> (Vec<f64>, f64, usize, bool)
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    pts.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += if step[i] != 0.0 { step[i] } else { 1e-3 };
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| sanitize(f(p))).collect();
    let mut evals = n + 1;
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];

    loop {
        // order: best first
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = idx.iter().map(|&i| pts[i].clone()).collect();
        vals = idx.iter().map(|&i| vals[i]).collect();

        let spread = vals[n] - vals[0];
        let diam = pts[1..]
            .iter()
            .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread <= opts.ftol * (vals[0].abs() + opts.ftol) && diam <= opts.xtol.max(1e-14) {
            return (pts[0].clone(), vals[0], evals, true);
        }
        if spread == 0.0 && diam <= 1e-300 || evals >= budget {
            return (pts[0].clone(), vals[0], evals, spread <= opts.ftol * (vals[0].abs() + opts.ftol));
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for p in &pts[..n] {
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v / n as f64;
            }
        }
        let worst = pts[n].clone();
        let along = |t: f64, out: &mut Vec<f64>| {
            for k in 0..n {
                out[k] = centroid[k] + t * (worst[k] - centroid[k]);
            }
        };

        along(-1.0, &mut trial);
        let fr = sanitize(f(&trial));
        evals += 1;
        if fr < vals[0] {
            along(-2.0, &mut trial2);
            let fe = sanitize(f(&trial2));
            evals += 1;
            if fe < fr {
                pts[n].clone_from(&trial2);
                vals[n] = fe;
            } else {
                pts[n].clone_from(&trial);
                vals[n] = fr;
            }
            continue;
        }
        if fr < vals[n - 1] {
            pts[n].clone_from(&trial);
            vals[n] = fr;
            continue;
        }
        let (t, reference) = if fr < vals[n] { (-0.5, fr) } else { (0.5, vals[n]) };
        along(t, &mut trial2);
        let fc = sanitize(f(&trial2));
        evals += 1;
        if fc < reference {
            pts[n].clone_from(&trial2);
            vals[n] = fc;
            continue;
        }
        // shrink toward the best vertex
        let best = pts[0].clone();
        for i in 1..=n {
            for (x, b) in pts[i].iter_mut().zip(&best) {
                *x = b + 0.5 * (*x - b);
            }
            vals[i] = sanitize(f(&pts[i]));
        }
        evals += n;
    }
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Golden-section search for the minimum of a unimodal `f` on `[lo, hi]`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let m = nelder_mead(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.2, 1.0],
            &[0.5, 0.5],
            NelderMeadOptions::default(),
        );
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-5 && (m.x[1] - 1.0).abs() < 1e-5, "{m:?}");
    }

    #[test]
    fn quadratic_six_dims() {
        let m = nelder_mead(
            |x| x.iter().enumerate().map(|(i, v)| (i as f64 + 1.0) * (v - 0.3).powi(2)).sum(),
            &[0.0; 6],
            &[1.0; 6],
            NelderMeadOptions::default(),
        );
        assert!(m.f < 1e-10, "{m:?}");
    }

    #[test]
    fn golden() {
        let (x, _) = golden_section(|x| (x - 0.7).powi(2), -3.0, 5.0, 1e-10);
        assert!((x - 0.7).abs() < 1e-8);
    }
}
