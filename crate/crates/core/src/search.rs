//! Shared derivative-free maximization: golden-section line search inside a
//! cyclic coordinate ascent with a shrinking trust width. Deterministic for a
//! fixed start and budget.

/// Golden-section search for a maximum of `f` on [lo, hi] using at most
/// `max_evals` evaluations. Returns (argmax, max, evaluations used).
pub(crate) fn golden_ascent<F: FnMut(f64) -> f64>(
    f: &mut F,
    lo: f64,
    hi: f64,
    max_evals: usize,
) -> (f64, f64, usize) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    if max_evals < 2 || hi - lo < 1e-15 {
        let v = f(lo);
        return (lo, v, 1);
    }
    let mut a = lo;
    let mut b = hi;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut used = 2;
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    while used < max_evals && (b - a) > 1e-12 {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
            if f1 > best.1 {
                best = (x1, f1);
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
            if f2 > best.1 {
                best = (x2, f2);
            }
        }
        used += 1;
    }
    (best.0, best.1, used)
}

pub(crate) struct AscentResult {
    pub evals: usize,
}

/// Maximize `f` by cycling through coordinates, each refined by a
/// golden-section search on a trust interval of the current width. A full
/// pass without improvement halves the width; the search stops when the
/// width underflows or the evaluation budget is spent. `x` is updated in
/// place to the best point found; callers that need the attained value track
/// it through the objective, which also lets them filter what counts.
pub(crate) fn cyclic_ascent<F: FnMut(&[f64]) -> f64>(
    f: &mut F,
    x: &mut [f64],
    bounds: &[(f64, f64)],
    init_width: f64,
    line_evals: usize,
    max_evals: usize,
) -> AscentResult {
    let n = x.len();
    let mut evals = 0usize;
    let mut fx = f(x);
    evals += 1;
    let mut width = init_width;
    let mut trial = x.to_vec();
    while evals + line_evals <= max_evals && width > 1e-10 {
        let mut improved = false;
        for i in 0..n {
            if evals + line_evals > max_evals {
                break;
            }
            let (blo, bhi) = bounds[i];
            let lo = (x[i] - width).max(blo);
            let hi = (x[i] + width).min(bhi);
            if hi - lo < 1e-14 {
                continue;
            }
            trial.copy_from_slice(x);
            let mut line = |v: f64| {
                trial[i] = v;
                f(&trial)
            };
            let (bx, bf, used) = golden_ascent(&mut line, lo, hi, line_evals);
            evals += used;
            if bf > fx + 1e-14 {
                x[i] = bx;
                fx = bf;
                improved = true;
            }
        }
        if !improved {
            width *= 0.5;
        }
    }
    AscentResult { evals }
}
