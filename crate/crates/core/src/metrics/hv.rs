use crate::bench::{DynamicProblem, ObjectiveVector};
use crate::error::{Error, Result};

/// Measure of the union of boxes `[p, ref]`. Points not componentwise `<= ref` are
/// ignored. Two objectives use a sweep; more objectives are sliced along the last one.
pub fn hypervolume(points: &[ObjectiveVector], reference: &[f64]) -> Result<f64> {
    let m = reference.len();
    if m == 0 {
        return Err(Error::arg("reference point is empty"));
    }
    if points.iter().any(|p| p.len() != m) {
        return Err(Error::arg("points and reference differ in objective count"));
    }
    if reference.iter().any(|r| !r.is_finite()) {
        return Err(Error::arg("reference point must be finite"));
    }
    let kept: Vec<&[f64]> = points
        .iter()
        .map(|p| p.as_ref())
        .filter(|p| p.iter().zip(reference).all(|(a, r)| a <= r))
        .collect();
    Ok(slice_volume(kept, reference))
}

fn slice_volume(mut pts: Vec<&[f64]>, reference: &[f64]) -> f64 {
    let m = reference.len();
    if pts.is_empty() {
        return 0.0;
    }
    match m {
        1 => reference[0] - pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min),
        2 => {
            pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
            let mut area = 0.0;
            let mut ceiling = reference[1];
            for p in pts {
                if p[1] < ceiling {
                    area += (reference[0] - p[0]) * (ceiling - p[1]);
                    ceiling = p[1];
                }
            }
            area
        }
        _ => {
            let last = m - 1;
            pts.sort_by(|a, b| a[last].total_cmp(&b[last]));
            let mut volume = 0.0;
            for i in 0..pts.len() {
                let top = if i + 1 < pts.len() {
                    pts[i + 1][last]
                } else {
                    reference[last]
                };
                let depth = top - pts[i][last];
                if depth <= 0.0 {
                    continue;
                }
                let slab: Vec<&[f64]> = pts[..=i].iter().map(|p| &p[..last]).collect();
                volume += depth * slice_volume(slab, &reference[..last]);
            }
            volume
        }
    }
}

/// Componentwise maximum of the sampled true fronts over `times`, pushed out by 10%
/// of each objective's range (10% of its magnitude, or 0.1, when the range is zero).
pub fn hv_reference(
    problem: &dyn DynamicProblem,
    times: &[f64],
    front_size: usize,
) -> Result<ObjectiveVector> {
    let m = problem.objectives();
    let mut lo = vec![f64::INFINITY; m];
    let mut hi = vec![f64::NEG_INFINITY; m];
    for &t in times {
        for p in problem.true_pof(t, front_size)? {
            for j in 0..m {
                lo[j] = lo[j].min(p[j]);
                hi[j] = hi[j].max(p[j]);
            }
        }
    }
    if times.is_empty() {
        return Err(Error::arg("reference point needs at least one time"));
    }
    Ok(ObjectiveVector(
        (0..m)
            .map(|j| {
                let range = hi[j] - lo[j];
                let margin = if range > 0.0 {
                    0.1 * range
                } else if hi[j] != 0.0 {
                    0.1 * hi[j].abs()
                } else {
                    0.1
                };
                hi[j] + margin
            })
            .collect(),
    ))
}
