//! Real-coded variation and selection operators.

use rand::Rng;

use super::{crowding_distance, fast_nondominated_sort, Individual};
use crate::bench::{Bounds, DecisionVector, DynamicProblem};
use crate::error::Result;

/// Bounded simulated binary crossover. Each variable crosses with probability 0.5.
pub fn sbx<R: Rng + ?Sized>(
    a: &[f64],
    b: &[f64],
    bounds: &Bounds,
    eta: f64,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = a.to_vec();
    let mut c2 = b.to_vec();
    for i in 0..a.len() {
        if rng.random::<f64>() > 0.5 || (a[i] - b[i]).abs() <= 1e-14 {
            continue;
        }
        let (y1, y2) = if a[i] < b[i] { (a[i], b[i]) } else { (b[i], a[i]) };
        let (lo, hi) = (bounds.lower()[i], bounds.upper()[i]);
        let u: f64 = rng.random();
        let spread = |beta: f64| {
            let alpha = 2.0 - beta.powf(-(eta + 1.0));
            if u <= 1.0 / alpha {
                (u * alpha).powf(1.0 / (eta + 1.0))
            } else {
                (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
            }
        };
        let beta_lo = 1.0 + 2.0 * (y1 - lo) / (y2 - y1);
        let v1 = 0.5 * ((y1 + y2) - spread(beta_lo) * (y2 - y1));
        let beta_hi = 1.0 + 2.0 * (hi - y2) / (y2 - y1);
        let v2 = 0.5 * ((y1 + y2) + spread(beta_hi) * (y2 - y1));
        let (v1, v2) = (v1.clamp(lo, hi), v2.clamp(lo, hi));
        if rng.random::<f64>() < 0.5 {
            c1[i] = v2;
            c2[i] = v1;
        } else {
            c1[i] = v1;
            c2[i] = v2;
        }
    }
    (c1, c2)
}

/// Bounded polynomial mutation; each variable mutates with probability `prob`.
pub fn polynomial_mutation<R: Rng + ?Sized>(
    x: &mut [f64],
    bounds: &Bounds,
    eta: f64,
    prob: f64,
    rng: &mut R,
) {
    let power = 1.0 / (eta + 1.0);
    for (i, y) in x.iter_mut().enumerate() {
        if rng.random::<f64>() >= prob {
            continue;
        }
        let (lo, hi) = (bounds.lower()[i], bounds.upper()[i]);
        let width = hi - lo;
        let d1 = (*y - lo) / width;
        let d2 = (hi - *y) / width;
        let r: f64 = rng.random();
        let dq = if r < 0.5 {
            let v = 2.0 * r + (1.0 - 2.0 * r) * (1.0 - d1).powf(eta + 1.0);
            v.powf(power) - 1.0
        } else {
            let v = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * (1.0 - d2).powf(eta + 1.0);
            1.0 - v.powf(power)
        };
        *y = (*y + dq * width).clamp(lo, hi);
    }
}

/// Crowded-comparison binary tournament: lower rank wins, then larger crowding.
pub fn tournament<'a, R: Rng + ?Sized>(pop: &'a [Individual], rng: &mut R) -> &'a Individual {
    let i = rng.random_range(0..pop.len());
    let j = rng.random_range(0..pop.len());
    let (a, b) = (&pop[i], &pop[j]);
    if a.rank != b.rank {
        return if a.rank < b.rank { a } else { b };
    }
    if a.crowding != b.crowding {
        return if a.crowding > b.crowding { a } else { b };
    }
    if rng.random::<bool>() {
        a
    } else {
        b
    }
}

/// Sets `rank` and `crowding` on every member.
pub fn assign_rank_and_crowding(pop: &mut [Individual]) {
    for (rank, front) in fast_nondominated_sort(pop).into_iter().enumerate() {
        let members: Vec<&Individual> = front.iter().map(|&i| &pop[i]).collect();
        let crowd = crowding_distance(&members);
        for (&i, c) in front.iter().zip(crowd) {
            pop[i].rank = rank;
            pop[i].crowding = c;
        }
    }
}

/// `(mu + lambda)` survivor selection: whole fronts first, the last partial front
/// truncated by descending crowding distance.
pub fn environmental_selection(pop: Vec<Individual>, n: usize) -> Vec<Individual> {
    let fronts = fast_nondominated_sort(&pop);
    let mut slots: Vec<Option<Individual>> = pop.into_iter().map(Some).collect();
    let mut out = Vec::with_capacity(n);
    for (rank, front) in fronts.into_iter().enumerate() {
        if out.len() >= n {
            break;
        }
        let members: Vec<Individual> = front
            .iter()
            .map(|&i| slots[i].take().expect("each index appears in one front"))
            .collect();
        let crowd = crowding_distance(&members);
        let mut tagged: Vec<(Individual, f64)> = members.into_iter().zip(crowd).collect();
        for (ind, c) in tagged.iter_mut() {
            ind.rank = rank;
            ind.crowding = *c;
        }
        if out.len() + tagged.len() > n {
            // stable: ties keep front order
            tagged.sort_by(|a, b| b.1.total_cmp(&a.1));
            tagged.truncate(n - out.len());
        }
        out.extend(tagged.into_iter().map(|(ind, _)| ind));
    }
    out
}

pub(crate) fn evaluate_all(
    problem: &dyn DynamicProblem,
    t: f64,
    xs: Vec<DecisionVector>,
) -> Result<Vec<Individual>> {
    xs.into_iter()
        .map(|x| {
            let f = problem.evaluate(&x, t)?;
            Ok(Individual::new(x, f))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn operators_respect_bounds() {
        let bounds = Bounds::new(vec![0.0, -1.0, -2.0], vec![1.0, 1.0, 2.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let a: Vec<f64> = (0..3)
                .map(|i| bounds.lower()[i] + bounds.width(i) * rng.random::<f64>())
                .collect();
            let b: Vec<f64> = (0..3)
                .map(|i| bounds.lower()[i] + bounds.width(i) * rng.random::<f64>())
                .collect();
            let (mut c1, c2) = sbx(&a, &b, &bounds, 15.0, &mut rng);
            assert!(bounds.contains(&c1) && bounds.contains(&c2));
            polynomial_mutation(&mut c1, &bounds, 20.0, 1.0, &mut rng);
            assert!(bounds.contains(&c1));
        }
    }

    #[test]
    fn sbx_of_identical_parents_is_identity() {
        let bounds = Bounds::new(vec![0.0; 4], vec![1.0; 4]).unwrap();
        let a = vec![0.2, 0.4, 0.6, 0.8];
        let (c1, c2) = sbx(&a, &a, &bounds, 15.0, &mut ChaCha8Rng::seed_from_u64(2));
        assert_eq!(c1, a);
        assert_eq!(c2, a);
    }

    #[test]
    fn selection_keeps_first_front() {
        let mk = |f: [f64; 2]| Individual::new(DecisionVector(vec![0.0]), f.to_vec().into());
        let pop = vec![
            mk([3.0, 3.0]),
            mk([0.0, 1.0]),
            mk([1.0, 0.0]),
            mk([0.5, 0.5]),
            mk([2.0, 2.0]),
        ];
        let sel = environmental_selection(pop, 3);
        assert_eq!(sel.len(), 3);
        assert!(sel.iter().all(|i| i.rank == 0));
    }
}
