//! Derivative-free local maximization by compass (coordinate pattern) search.
//!
//! From the current point, each coordinate is probed at `±step`; the first
//! probe that beats the current value by a sufficient margin `ρ(step)` is
//! accepted, otherwise the step is halved. `ρ(step) = c·step²` (the usual
//! forcing function for generating-set search), floored at a few ulps.
//! The search stops once the step drops below `min_step` or the evaluation
//! budget is spent. The best value never decreases.

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompassOptions<T> {
    pub initial_step: T,
    pub min_step: T,
    pub max_evaluations: usize,
    /// Coefficient `c` of the sufficient-increase condition.
    pub forcing: T,
}

impl<T: Real> Default for CompassOptions<T> {
    fn default() -> Self {
        Self {
            initial_step: T::FRAC_PI_4(),
            min_step: T::lit(1e-7),
            max_evaluations: 200_000,
            forcing: T::lit(1e-4),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult<T> {
    pub point: Vec<T>,
    pub value: T,
    pub evaluations: usize,
    /// Step size at termination; below `min_step` iff the search converged.
    pub final_step: T,
    /// Best value after each accepted move, starting with the initial value.
    pub history: Vec<T>,
}

impl<T: Real> SearchResult<T> {
    pub fn converged(&self, options: &CompassOptions<T>) -> bool {
        self.final_step < options.min_step
    }
}

pub fn compass_maximize<T, F>(
    mut f: F,
    start: Vec<T>,
    options: &CompassOptions<T>,
) -> SearchResult<T>
where
    T: Real,
    F: FnMut(&[T]) -> T,
{
    let mut point = start;
    let mut value = f(&point);
    let mut evaluations = 1;
    let mut history = vec![value];
    let mut step = options.initial_step;
    let two = T::lit(2.0);
    let ulps = T::epsilon() * T::lit(4.0);
    'outer: while step >= options.min_step {
        let mut improved = false;
        let margin = (options.forcing * step * step).max(ulps * (T::one() + value.abs()));
        for i in 0..point.len() {
            for sign in [T::one(), -T::one()] {
                if evaluations >= options.max_evaluations {
                    break 'outer;
                }
                let mut probe = point.clone();
                probe[i] = probe[i] + sign * step;
                let v = f(&probe);
                evaluations += 1;
                if v > value + margin {
                    point = probe;
                    value = v;
                    history.push(value);
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step = step / two;
        }
    }
    SearchResult {
        point,
        value,
        evaluations,
        final_step: step,
        history,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_maximum() {
        let f = |x: &[f64]| -(x[0] - 1.0).powi(2) - 3.0 * (x[1] + 0.5).powi(2);
        let opts = CompassOptions::default();
        let r = compass_maximize(f, vec![0.0, 0.0], &opts);
        assert!(r.converged(&opts));
        assert!((r.point[0] - 1.0).abs() < 1e-6 && (r.point[1] + 0.5).abs() < 1e-6);
        assert!(r.history.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn respects_budget() {
        let opts = CompassOptions {
            max_evaluations: 10,
            ..CompassOptions::default()
        };
        let r = compass_maximize(|x: &[f64]| x[0], vec![0.0], &opts);
        assert_eq!(r.evaluations, 10);
        assert!(!r.converged(&opts));
    }

    #[test]
    fn single_precision() {
        let opts = CompassOptions::<f32> {
            min_step: 1e-4,
            ..CompassOptions::default()
        };
        let r = compass_maximize(|x: &[f32]| x[0].cos(), vec![0.7], &opts);
        assert!(r.point[0].abs() < 1e-3);
    }
}
