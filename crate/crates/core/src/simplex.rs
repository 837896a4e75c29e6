//! Bounded derivative-free simplex descent (Nelder-Mead with box clamping)
//! and a Halton low-discrepancy sequence for multi-start seeding.
//!
//! Deterministic: no randomness, stable ordering, pure f64 arithmetic.

/// Outcome of a single simplex descent.
#[derive(Debug, Clone)]
pub struct SimplexOutcome {
    /// Best point found, inside the box.
    pub x: Vec<f64>,
    /// Objective value at `x` (minimization).
    pub value: f64,
    pub iterations: usize,
    /// True when the simplex diameter dropped below the tolerance.
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn clamp_into(x: &mut [f64], lo: &[f64], hi: &[f64]) {
    for ((xi, &l), &h) in x.iter_mut().zip(lo).zip(hi) {
        *xi = xi.clamp(l, h);
    }
}

/// Minimize `f` over the box `[lo, hi]`, starting from `x0`. Every trial
/// point is clamped into the box. Terminates when the simplex diameter
/// (max L-inf distance from the best vertex) falls below `diameter_tol`, or
/// after `max_iters` iterations.
pub fn minimize_bounded<F>(
    f: F,
    x0: &[f64],
    lo: &[f64],
    hi: &[f64],
    max_iters: usize,
    diameter_tol: f64,
) -> SimplexOutcome
where
    F: Fn(&[f64]) -> f64,
{
    let dim = x0.len();
    debug_assert!(dim > 0 && lo.len() == dim && hi.len() == dim);
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    // initial simplex: x0 plus a 5% step per coordinate, stepping away from
    // the nearer bound
    let mut base = x0.to_vec();
    clamp_into(&mut base, lo, hi);
    let mut vertices: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let v0 = eval(&base);
    vertices.push((base.clone(), v0));
    for i in 0..dim {
        let mut p = base.clone();
        let step = 0.05 * (hi[i] - lo[i]).max(f64::MIN_POSITIVE);
        p[i] = if p[i] + step <= hi[i] {
            p[i] + step
        } else {
            p[i] - step
        };
        clamp_into(&mut p, lo, hi);
        let v = eval(&p);
        vertices.push((p, v));
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iters {
        vertices.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = vertices[1..]
            .iter()
            .flat_map(|(p, _)| {
                p.iter()
                    .zip(&vertices[0].0)
                    .map(|(a, b)| (a - b).abs())
            })
            .fold(0.0f64, f64::max);
        if diameter < diameter_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let worst = vertices[dim].clone();
        let centroid: Vec<f64> = (0..dim)
            .map(|i| vertices[..dim].iter().map(|(p, _)| p[i]).sum::<f64>() / dim as f64)
            .collect();
        let towards = |coef: f64| {
            let mut p: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + coef * (c - w))
                .collect();
            clamp_into(&mut p, lo, hi);
            p
        };

        let reflected = towards(REFLECT);
        let f_reflected = eval(&reflected);
        if f_reflected < vertices[0].1 {
            let expanded = towards(REFLECT * EXPAND);
            let f_expanded = eval(&expanded);
            vertices[dim] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
        } else if f_reflected < vertices[dim - 1].1 {
            vertices[dim] = (reflected, f_reflected);
        } else {
            let (contracted, f_contracted) = if f_reflected < worst.1 {
                let p = towards(REFLECT * CONTRACT);
                let v = eval(&p);
                (p, v)
            } else {
                let p = towards(-CONTRACT);
                let v = eval(&p);
                (p, v)
            };
            if f_contracted < f_reflected.min(worst.1) {
                vertices[dim] = (contracted, f_contracted);
            } else {
                // shrink towards the best vertex
                let best = vertices[0].0.clone();
                for (p, v) in vertices.iter_mut().skip(1) {
                    for (pi, bi) in p.iter_mut().zip(&best) {
                        *pi = bi + SHRINK * (*pi - bi);
                    }
                    clamp_into(p, lo, hi);
                    *v = eval(p);
                }
            }
        }
    }

    vertices.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = vertices.swap_remove(0);
    SimplexOutcome {
        x,
        value,
        iterations,
        converged,
    }
}

const HALTON_BASES: [u64; 5] = [2, 3, 5, 7, 11];

/// Radical-inverse (van der Corput) value of `index` in the given base.
fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut value = 0.0;
    while index > 0 {
        value += (index % base) as f64 * inv;
        index /= base;
        inv /= base as f64;
    }
    value
}

/// Point `index` (1-based) of the Halton sequence in the unit cube.
/// Supports up to 5 dimensions.
pub fn halton_point(index: u64, dim: usize) -> Vec<f64> {
    assert!(dim <= HALTON_BASES.len(), "halton_point supports dim <= 5");
    HALTON_BASES[..dim]
        .iter()
        .map(|&b| radical_inverse(index, b))
        .collect()
}
