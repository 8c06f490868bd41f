mod common;

use std::collections::BTreeMap;

use common::{hv_oracle, igd_oracle, random_objectives, to_objectives};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trdmoea::bench::{problem, EnvId, ObjectiveVector};
use trdmoea::metrics::{
    accuracy, dmigd, dmreact, hv_reference, hypervolume, igd, mean, migd, mreact, react, react_series, roc,
    variance, ReactValue,
};

fn ov(v: &[f64]) -> ObjectiveVector {
    ObjectiveVector(v.to_vec())
}

const FDA4_TR_RMMEDA_MIGD: [f64; 8] = [0.0533, 0.0524, 0.0522, 0.0527, 0.0500, 0.0501, 0.0523, 0.0529];

#[test]
fn igd_examples() {
    let a = vec![ov(&[0.0, 0.0]), ov(&[1.0, 1.0])];
    assert_eq!(igd(&a, &a).unwrap(), 0.0);
    assert_eq!(igd(&a, &[ov(&[0.0, 1.0])]).unwrap(), 1.0);
    assert!(igd(&a, &[]).is_err());
    assert!(igd(&[], &a).is_err());
    assert!(igd(&a, &[ov(&[0.0])]).is_err());
}

#[test]
fn igd_matches_nearest_neighbour_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..100 {
        let m = 2 + trial % 2;
        let (ns, np) = (rng.random_range(1..=50), rng.random_range(1..=50));
        let star = random_objectives(&mut rng, ns, m, false);
        let got = random_objectives(&mut rng, np, m, false);
        let v = igd(&to_objectives(&star), &to_objectives(&got)).unwrap();
        assert!((v - igd_oracle(&star, &got)).abs() <= 1e-12);
    }
}

#[test]
fn igd_zero_iff_reference_covered() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let star = random_objectives(&mut rng, 20, 2, false);
    let mut p = star.clone();
    p.extend(random_objectives(&mut rng, 5, 2, false));
    assert!(igd(&to_objectives(&star), &to_objectives(&p)).unwrap() < 1e-12);
    p.remove(3);
    assert!(igd(&to_objectives(&star), &to_objectives(&p)).unwrap() > 1e-12);
}

#[test]
fn migd_and_dmigd() {
    assert_eq!(migd(&[0.3; 7]).unwrap(), 0.3);
    assert!((migd(&[0.1, 0.3]).unwrap() - 0.2).abs() < 1e-15);
    assert!(migd(&[]).is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let s: Vec<f64> = (0..rng.random_range(1..40))
            .map(|_| rng.random::<f64>())
            .collect();
        let mut direct = 0.0;
        for v in &s {
            direct += v;
        }
        assert!((migd(&s).unwrap() - direct / s.len() as f64).abs() <= 1e-15);
    }

    let all: BTreeMap<EnvId, f64> = EnvId::ALL.iter().map(|&c| (c, 0.07)).collect();
    assert!((dmigd(&all).unwrap() - 0.07).abs() < 1e-15);
    let row: BTreeMap<EnvId, f64> = EnvId::ALL.iter().copied().zip(FDA4_TR_RMMEDA_MIGD).collect();
    assert!((dmigd(&row).unwrap() - 0.0520).abs() <= 5e-4);
    let mut missing = row.clone();
    missing.remove(&EnvId::C6);
    let err = dmigd(&missing).unwrap_err().to_string();
    assert!(err.contains("C6"), "{err}");
}

#[test]
fn mean_and_variance() {
    assert_eq!(variance(&[0.4]).unwrap(), 0.0);
    assert!((variance(&[1.0, 2.0, 3.0, 4.0]).unwrap() - 5.0 / 3.0).abs() < 1e-15);
    assert_eq!(mean(&[2.0, 4.0]).unwrap(), 3.0);
}

#[test]
fn hypervolume_examples() {
    assert!((hypervolume(&[ov(&[0.5, 0.5])], &[1.0, 1.0]).unwrap() - 0.25).abs() < 1e-15);
    assert!((hypervolume(&[ov(&[0.2, 0.8]), ov(&[0.8, 0.2])], &[1.0, 1.0]).unwrap() - 0.28).abs() < 1e-15);
    assert_eq!(
        hypervolume(&[ov(&[0.0, 1.0]), ov(&[1.0, 0.0])], &[1.0, 1.0]).unwrap(),
        0.0
    );
    assert_eq!(hypervolume(&[ov(&[2.0, 0.0])], &[1.0, 1.0]).unwrap(), 0.0);
    assert_eq!(hypervolume(&[], &[1.0, 1.0]).unwrap(), 0.0);
    assert!((hypervolume(&[ov(&[0.0, 0.0, 0.0])], &[1.0, 2.0, 3.0]).unwrap() - 6.0).abs() < 1e-15);
    assert!(hypervolume(&[ov(&[0.0])], &[1.0, 1.0]).is_err());
}

#[test]
fn hypervolume_matches_inclusion_exclusion() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..300 {
        let m = if trial < 200 { 2 } else { 3 };
        let n = rng.random_range(1..=8);
        let pts = random_objectives(&mut rng, n, m, trial % 4 == 0);
        let reference: Vec<f64> = if trial % 4 == 0 {
            vec![4.5; m]
        } else {
            vec![1.0; m]
        };
        let v = hypervolume(&to_objectives(&pts), &reference).unwrap();
        let o = hv_oracle(&pts, &reference);
        assert!((v - o).abs() <= 1e-12, "trial {trial}: {v} vs {o}");
    }
}

proptest! {
    #[test]
    fn hypervolume_invariances(pts in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 3), 1..15), extra in prop::collection::vec(0.0f64..1.0, 3)) {
        let objs = to_objectives(&pts);
        let r = [1.1, 1.1, 1.1];
        let base = hypervolume(&objs, &r).unwrap();
        let mut rev = objs.clone();
        rev.reverse();
        prop_assert!((hypervolume(&rev, &r).unwrap() - base).abs() < 1e-12);
        let keep = trdmoea::moea::nondominated_indices(&objs);
        let nd: Vec<ObjectiveVector> = keep.iter().map(|&i| objs[i].clone()).collect();
        prop_assert!((hypervolume(&nd, &r).unwrap() - base).abs() < 1e-12);
        let mut more = objs.clone();
        more.push(ObjectiveVector(extra));
        prop_assert!(hypervolume(&more, &r).unwrap() >= base - 1e-12);
    }
}

#[test]
fn reference_point_covers_fronts() {
    let p = problem("FDA4").unwrap();
    let times: Vec<f64> = (0..20).map(|k| k as f64 / 10.0).collect();
    let r = hv_reference(&p, &times, 300).unwrap();
    for j in 0..3 {
        assert!((r[j] - 1.1).abs() < 1e-9, "{r:?}");
    }
    for &t in &times {
        for q in trdmoea::bench::DynamicProblem::true_pof(&p, t, 300).unwrap() {
            assert!(q.iter().zip(r.iter()).all(|(a, b)| a < b));
        }
    }
}

#[test]
fn accuracy_examples() {
    assert_eq!(accuracy(&[3.0; 4]).unwrap(), vec![1.0; 4]);
    assert_eq!(accuracy(&[2.0, 4.0]).unwrap(), vec![0.5, 1.0]);
    let a = accuracy(&[1.0, 3.0, 2.0]).unwrap();
    let b = accuracy(&[7.0, 21.0, 14.0]).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-15);
    }
    assert!(accuracy(&[0.0, 0.0]).is_err());
}

#[test]
fn react_examples() {
    let acc = [1.0, 0.5, 0.95];
    assert_eq!(
        react(&acc, 0, 0.1).unwrap(),
        ReactValue {
            steps: 2,
            recovered: true
        }
    );
    assert_eq!(
        react(&acc, 1, 0.1).unwrap(),
        ReactValue {
            steps: 1,
            recovered: true
        }
    );
    assert!(react(&acc, 2, 0.1).is_err());
    assert!(react(&acc, 0, 0.0).is_err());
    let never = [1.0, 0.2, 0.3, 0.1];
    assert_eq!(
        react(&never, 0, 0.1).unwrap(),
        ReactValue {
            steps: 3,
            recovered: false
        }
    );
    let rising = [0.1, 0.2, 0.2, 0.6, 1.0];
    assert!(react_series(&rising, 0.1)
        .unwrap()
        .iter()
        .all(|r| r.steps == 1 && r.recovered));
}

proptest! {
    #[test]
    fn react_values_are_positive(acc in prop::collection::vec(0.01f64..1.0, 2..20), eps in 0.01f64..0.99) {
        let s = react_series(&acc, eps).unwrap();
        prop_assert_eq!(s.len(), acc.len() - 1);
        for (t, r) in s.iter().enumerate() {
            prop_assert!(r.steps >= 1 && r.steps <= acc.len() - 1 - t);
        }
        prop_assert!(mreact(&s).unwrap() >= 1.0);
    }
}

#[test]
fn mreact_and_dmreact() {
    let r = |s| ReactValue {
        steps: s,
        recovered: true,
    };
    assert_eq!(mreact(&[r(2), r(2)]).unwrap(), 2.0);
    assert_eq!(mreact(&[r(1), r(2), r(3), r(6)]).unwrap(), 3.0);
    let mut per: BTreeMap<EnvId, f64> = EnvId::ALL.iter().map(|&c| (c, 1.0)).collect();
    assert_eq!(dmreact(&per).unwrap(), 1.0);
    per.insert(EnvId::C8, 9.0);
    assert_eq!(dmreact(&per).unwrap(), 2.0);
    per.remove(&EnvId::C1);
    assert!(dmreact(&per).is_err());
}

#[test]
fn roc_examples() {
    assert!((roc(0.2276, 0.0881).unwrap() - 61.29).abs() < 5e-3);
    assert!((roc(0.2939, 2.2819).unwrap() - -676.4).abs() < 0.05);
    assert_eq!(roc(0.5, 0.5).unwrap(), 0.0);
    assert!(roc(0.0, 0.1).is_err());
    assert!(roc(-1.0, 0.1).is_err());
    assert!(roc(0.3, 0.1).unwrap() > 0.0);
    assert!(roc(0.3, 0.4).unwrap() < 0.0);
}
