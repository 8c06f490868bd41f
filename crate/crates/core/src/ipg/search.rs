use crate::bench::Bounds;
use crate::error::Result;

/// Outcome of a budgeted minimization. `history[i]` is the best value after `i + 1`
/// evaluations, counting the start point.
#[derive(Debug, Clone)]
pub struct SearchResult<T> {
    pub x: Vec<f64>,
    pub value: f64,
    pub payload: T,
    pub evaluations: usize,
    pub history: Vec<f64>,
}

/// Bounded compass search. Each sweep tries `x +/- step_i e_i` per coordinate, keeping
/// any improvement; a sweep without improvement halves every step. Stops when the
/// budget is used, the value reaches zero or all steps fall below `1e-12` of the box.
///
/// `start` is `(x0, value, payload)` for an already evaluated point, which is counted
/// as one evaluation.
pub fn pattern_search<T, F>(
    mut objective: F,
    start: (Vec<f64>, f64, T),
    bounds: &Bounds,
    budget: usize,
    initial_step: f64,
) -> Result<SearchResult<T>>
where
    F: FnMut(&[f64]) -> Result<(f64, T)>,
{
    let (mut x, mut best, mut payload) = start;
    let mut history = vec![best];
    let mut steps: Vec<f64> = (0..x.len()).map(|i| initial_step * bounds.width(i)).collect();
    let floor: Vec<f64> = (0..x.len())
        .map(|i| 1e-12 * bounds.width(i).max(1e-300))
        .collect();
    let mut trial = x.clone();

    'outer: while history.len() < budget && best > 0.0 {
        if steps.iter().zip(&floor).all(|(s, f)| s < f) {
            break;
        }
        let mut improved = false;
        for i in 0..x.len() {
            for sign in [1.0, -1.0] {
                if history.len() >= budget {
                    break 'outer;
                }
                let cand = bounds.clamp(i, x[i] + sign * steps[i]);
                if cand == x[i] {
                    continue;
                }
                trial.copy_from_slice(&x);
                trial[i] = cand;
                let (v, p) = objective(&trial)?;
                let accepted = v < best;
                if accepted {
                    best = v;
                    payload = p;
                    x[i] = cand;
                    improved = true;
                }
                history.push(best);
                if accepted {
                    break;
                }
            }
        }
        if !improved {
            for s in steps.iter_mut() {
                *s *= 0.5;
            }
        }
    }
    Ok(SearchResult {
        evaluations: history.len(),
        x,
        value: best,
        payload,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_minimum_of_quadratic() {
        let bounds = Bounds::new(vec![-1.0; 3], vec![1.0; 3]).unwrap();
        let target = [0.3, -0.2, 0.7];
        let f = |x: &[f64]| -> Result<(f64, ())> {
            Ok((x.iter().zip(&target).map(|(a, b)| (a - b) * (a - b)).sum(), ()))
        };
        let x0 = vec![0.0; 3];
        let v0 = f(&x0).unwrap().0;
        let r = pattern_search(f, (x0, v0, ()), &bounds, 2000, 0.25).unwrap();
        assert!(r.value < 1e-10, "{}", r.value);
        assert!(r.evaluations <= 2000);
        assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn budget_of_one_returns_start() {
        let bounds = Bounds::new(vec![0.0], vec![1.0]).unwrap();
        let r = pattern_search(|x: &[f64]| Ok((x[0], ())), (vec![0.5], 0.5, ()), &bounds, 1, 0.25).unwrap();
        assert_eq!(r.x, vec![0.5]);
        assert_eq!(r.evaluations, 1);
    }
}
