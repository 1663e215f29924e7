//! Simultaneous-perturbation stochastic approximation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_finite, stalled, Minimum, StopRule};
use crate::error::{Error, Result};

const ALPHA: f64 = 0.602;
const GAMMA: f64 = 0.101;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpsaOptions {
    pub stop: StopRule,
    /// Step-size numerator `a` in `a_k = a / (k + 1 + A)^0.602`.
    pub a: f64,
    /// Perturbation numerator `c` in `c_k = c / (k + 1)^0.101`.
    pub c: f64,
    /// Stability constant `A`; defaults to `max_iterations / 10`.
    pub stability: Option<f64>,
    pub seed: u64,
}

impl Default for SpsaOptions {
    fn default() -> Self {
        Self {
            stop: StopRule::default(),
            a: 0.2,
            c: 0.1,
            stability: None,
            seed: 0,
        }
    }
}

impl SpsaOptions {
    fn validate(&self) -> Result<()> {
        self.stop.validate()?;
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::Config(format!("SPSA perturbation scale must be positive, got {}", self.c)));
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(Error::Config(format!("SPSA step scale must be positive, got {}", self.a)));
        }
        if let Some(s) = self.stability {
            if !(s >= 0.0) {
                return Err(Error::Config(format!("SPSA stability constant must be nonnegative, got {s}")));
            }
        }
        Ok(())
    }
}

/// Minimizes `objective` from `x0`; the trace records `f` at each new iterate.
pub fn spsa_minimize<F>(objective: F, x0: &[f64], options: &SpsaOptions) -> Result<Minimum>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    spsa_minimize_with_rng(objective, x0, options, &mut rng)
}

pub(crate) fn spsa_minimize_with_rng<F, R>(
    mut objective: F,
    x0: &[f64],
    options: &SpsaOptions,
    rng: &mut R,
) -> Result<Minimum>
where
    F: FnMut(&[f64]) -> Result<f64>,
    R: Rng,
{
    options.validate()?;
    if x0.is_empty() {
        return Err(Error::Config("SPSA needs at least one parameter".into()));
    }
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64]| -> Result<f64> {
        evaluations += 1;
        check_finite(objective(x)?, x)
    };

    let stability = options
        .stability
        .unwrap_or(options.stop.max_iterations as f64 / 10.0);
    let mut x = x0.to_vec();
    let mut best_x = x.clone();
    let mut best_f = eval(&x)?;
    let mut first = true;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut plus = vec![0.0; x.len()];
    let mut minus = vec![0.0; x.len()];

    for k in 0..options.stop.max_iterations {
        let kf = k as f64;
        let ak = options.a / (kf + 1.0 + stability).powf(ALPHA);
        let ck = options.c / (kf + 1.0).powf(GAMMA);
        let delta: Vec<f64> = (0..x.len())
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect();
        for i in 0..x.len() {
            plus[i] = x[i] + ck * delta[i];
            minus[i] = x[i] - ck * delta[i];
        }
        let diff = eval(&plus)? - eval(&minus)?;
        for i in 0..x.len() {
            x[i] -= ak * diff / (2.0 * ck * delta[i]);
        }
        let f = eval(&x)?;
        trace.push((k + 1, f));
        // best is taken over recorded iterates only
        if first || f < best_f {
            best_f = f;
            best_x.clone_from(&x);
            first = false;
        }
        if stalled(&trace, &options.stop) {
            converged = true;
            break;
        }
    }

    Ok(Minimum {
        x: best_x,
        f: best_f,
        trace,
        evaluations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(max_iterations: usize, seed: u64) -> SpsaOptions {
        SpsaOptions {
            stop: StopRule {
                max_iterations,
                tolerance: 1e-12,
                stall_window: None,
            },
            seed,
            ..SpsaOptions::default()
        }
    }

    #[test]
    fn convex_quadratic() {
        let f = |x: &[f64]| Ok((x[0] - 1.0).powi(2) + (x[1] + 0.5).powi(2) + 2.0);
        let m = spsa_minimize(f, &[0.0, 0.0], &opts(200, 7)).unwrap();
        assert!((m.f - 2.0).abs() < 1e-3, "f = {}", m.f);
        assert_eq!(m.trace.len(), 200);
        assert_eq!(m.evaluations, 1 + 3 * 200);
    }

    #[test]
    fn seeds_give_distinct_reproducible_traces() {
        let f = |x: &[f64]| Ok(x[0].powi(2) + x[1].powi(2));
        let a = spsa_minimize(f, &[1.0, 1.0], &opts(50, 1)).unwrap();
        let b = spsa_minimize(f, &[1.0, 1.0], &opts(50, 2)).unwrap();
        let a2 = spsa_minimize(f, &[1.0, 1.0], &opts(50, 1)).unwrap();
        assert_ne!(a.trace, b.trace);
        assert_eq!(a, a2);
    }

    #[test]
    fn rejects_bad_gains() {
        let f = |x: &[f64]| Ok(x[0]);
        let mut o = opts(10, 0);
        o.c = 0.0;
        assert!(matches!(spsa_minimize(f, &[0.0], &o), Err(Error::Config(_))));
        let mut o = opts(10, 0);
        o.a = -1.0;
        assert!(matches!(spsa_minimize(f, &[0.0], &o), Err(Error::Config(_))));
    }

    #[test]
    fn non_finite_aborts() {
        let f = |x: &[f64]| Ok(if x[0].abs() > 0.0 { f64::INFINITY } else { 0.0 });
        assert!(matches!(
            spsa_minimize(f, &[0.0], &opts(10, 0)),
            Err(Error::NonFiniteObjective { .. })
        ));
    }
}
