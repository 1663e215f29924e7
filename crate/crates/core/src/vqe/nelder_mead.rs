//! Nelder-Mead downhill simplex.

use super::{check_finite, stalled, Minimum, StopRule};
use crate::error::{Error, Result};

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Simplex diameter (max-norm distance to the best vertex) below which the search stops.
pub const MIN_DIAMETER: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub stop: StopRule,
    /// Offset along each coordinate axis for the initial simplex.
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            stop: StopRule::default(),
            initial_step: 0.5,
        }
    }
}

struct Vertex {
    x: Vec<f64>,
    f: f64,
}

/// Minimizes `objective` starting from `x0`.
///
/// One iteration is one simplex update (reflection, expansion, contraction or
/// shrink). The trace records the best vertex value after each iteration.
pub fn nelder_mead_minimize<F>(mut objective: F, x0: &[f64], options: &NelderMeadOptions) -> Result<Minimum>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    options.stop.validate()?;
    if x0.is_empty() {
        return Err(Error::Config("Nelder-Mead needs at least one parameter".into()));
    }
    if !(options.initial_step != 0.0 && options.initial_step.is_finite()) {
        return Err(Error::Config(format!(
            "initial simplex step must be finite and nonzero, got {}",
            options.initial_step
        )));
    }
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64]| -> Result<f64> {
        evaluations += 1;
        check_finite(objective(x)?, x)
    };

    let dim = x0.len();
    let mut simplex = Vec::with_capacity(dim + 1);
    simplex.push(Vertex { x: x0.to_vec(), f: eval(x0)? });
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += options.initial_step;
        let f = eval(&x)?;
        simplex.push(Vertex { x, f });
    }

    let mut trace = Vec::new();
    let mut converged = false;
    for iteration in 1..=options.stop.max_iterations {
        simplex.sort_by(|a, b| a.f.total_cmp(&b.f));
        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|v| v.x[j]).sum::<f64>() / dim as f64)
            .collect();
        let toward = |scale: f64, from: &[f64]| -> Vec<f64> {
            centroid.iter().zip(from).map(|(c, p)| c + scale * (p - c)).collect()
        };
        let best = simplex[0].f;
        let second_worst = simplex[dim - 1].f;
        let worst = simplex[dim].f;

        let xr = toward(-REFLECT, &simplex[dim].x);
        let fr = eval(&xr)?;
        let mut shrink = false;
        if fr < best {
            let xe = toward(EXPAND, &xr);
            let fe = eval(&xe)?;
            simplex[dim] = if fe < fr { Vertex { x: xe, f: fe } } else { Vertex { x: xr, f: fr } };
        } else if fr < second_worst {
            simplex[dim] = Vertex { x: xr, f: fr };
        } else if fr < worst {
            let xc = toward(CONTRACT, &xr);
            let fc = eval(&xc)?;
            if fc <= fr {
                simplex[dim] = Vertex { x: xc, f: fc };
            } else {
                shrink = true;
            }
        } else {
            let xc = toward(CONTRACT, &simplex[dim].x);
            let fc = eval(&xc)?;
            if fc < worst {
                simplex[dim] = Vertex { x: xc, f: fc };
            } else {
                shrink = true;
            }
        }
        if shrink {
            let anchor = simplex[0].x.clone();
            for v in simplex.iter_mut().skip(1) {
                for (xi, ai) in v.x.iter_mut().zip(&anchor) {
                    *xi = ai + SHRINK * (*xi - ai);
                }
                v.f = eval(&v.x)?;
            }
        }

        simplex.sort_by(|a, b| a.f.total_cmp(&b.f));
        trace.push((iteration, simplex[0].f));

        let spread = simplex[dim].f - simplex[0].f;
        let diameter = simplex[1..]
            .iter()
            .flat_map(|v| v.x.iter().zip(&simplex[0].x).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if diameter < MIN_DIAMETER || spread < options.stop.tolerance || stalled(&trace, &options.stop) {
            converged = true;
            break;
        }
    }

    let best = simplex.swap_remove(0);
    Ok(Minimum {
        x: best.x,
        f: best.f,
        trace,
        evaluations,
        converged,
    })
}
