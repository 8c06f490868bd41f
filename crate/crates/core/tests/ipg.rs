use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trdmoea::bench::{
    problem, sample_decision_space, Bounds, CountingProblem, DecisionVector, DmopType, DynamicProblem,
    ObjectiveVector,
};
use trdmoea::ipg::{build_latent_targets, inner_minimize, tr_ipg, IpgConfig, KernelChoice};
use trdmoea::metrics::igd;
use trdmoea::tca::{tca_fit, KernelSpec, TcaModel};
use trdmoea::Result;

/// `F(x) = (x1, x2 + x1^2)` on the unit square.
struct Bend {
    bounds: Bounds,
}

impl Bend {
    fn new() -> Self {
        Self {
            bounds: Bounds::new(vec![0.0; 2], vec![1.0; 2]).unwrap(),
        }
    }
}

impl DynamicProblem for Bend {
    fn name(&self) -> &str {
        "bend"
    }
    fn dimension(&self) -> usize {
        2
    }
    fn objectives(&self) -> usize {
        2
    }
    fn bounds(&self) -> &Bounds {
        &self.bounds
    }
    fn dmop_type(&self) -> DmopType {
        DmopType::TypeI
    }
    fn evaluate(&self, x: &DecisionVector, _t: f64) -> Result<ObjectiveVector> {
        Ok(ObjectiveVector(vec![x[0], x[1] + x[0] * x[0]]))
    }
}

/// Linear kernel over the unit basis with `W = I`, so the latent map is the identity.
fn identity_model() -> TcaModel {
    let bank = vec![ObjectiveVector(vec![1.0, 0.0]), ObjectiveVector(vec![0.0, 1.0])];
    TcaModel::from_parts(bank, KernelSpec::Linear, DMatrix::identity(2, 2), 1, 0.5).unwrap()
}

fn small_cfg(n: usize) -> IpgConfig {
    IpgConfig {
        n_s: 30,
        n_t_samples: 30,
        d: 10,
        inner_budget: 10,
        target_pop_size: n,
        ..IpgConfig::default()
    }
}

fn fda4_front(t: f64, k: usize) -> Vec<ObjectiveVector> {
    problem("FDA4").unwrap().true_pof(t, k).unwrap()
}

#[test]
fn population_size_and_fill() {
    let p = problem("FDA4").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let full = tr_ipg(&p, 0.0, 0.1, &fda4_front(0.0, 200), &small_cfg(200), &mut rng).unwrap();
    assert_eq!(full.population.len(), 200);
    assert_eq!((full.report.transferred, full.report.random_fill), (200, 0));

    let part = tr_ipg(&p, 0.0, 0.1, &fda4_front(0.0, 50), &small_cfg(200), &mut rng).unwrap();
    assert_eq!(part.population.len(), 200);
    assert_eq!((part.report.transferred, part.report.random_fill), (50, 150));
    assert!(part.population.iter().all(|i| p.bounds().contains(&i.x)));
    for ind in &part.population {
        assert_eq!(p.evaluate(&ind.x, 0.1).unwrap(), ind.f);
    }
}

#[test]
fn truncation_keeps_smallest_g() {
    let p = problem("DMOP2").unwrap();
    let front = p.true_pof(0.0, 30).unwrap();
    let out = tr_ipg(
        &p,
        0.0,
        0.1,
        &front,
        &small_cfg(10),
        &mut ChaCha8Rng::seed_from_u64(2),
    )
    .unwrap();
    assert_eq!(out.population.len(), 10);
    assert_eq!((out.report.transferred, out.report.random_fill), (10, 0));
    let mut g = out.report.final_g.clone();
    g.sort_by(f64::total_cmp);
    let cutoff = g[9];
    let model = &out.report.model;
    for ind in &out.population {
        let z = model.map(&ind.f).unwrap();
        let best = out
            .report
            .latent_targets
            .targets
            .iter()
            .map(|l| z.iter().zip(l).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        assert!(best <= cutoff + 1e-12);
    }
}

#[test]
fn large_fronts_are_subsampled() {
    let p = problem("FDA4").unwrap();
    let cfg = IpgConfig {
        max_front: 40,
        inner_budget: 2,
        ..small_cfg(60)
    };
    let out = tr_ipg(
        &p,
        0.0,
        0.1,
        &fda4_front(0.0, 300),
        &cfg,
        &mut ChaCha8Rng::seed_from_u64(3),
    )
    .unwrap();
    assert_eq!(out.report.latent_targets.len(), 40);
    assert_eq!((out.report.transferred, out.report.random_fill), (40, 20));
}

#[test]
fn errors() {
    let p = problem("FDA4").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert!(tr_ipg(&p, 0.0, 0.1, &[], &small_cfg(10), &mut rng).is_err());
    let bad = IpgConfig {
        d: 61,
        ..small_cfg(10)
    };
    assert!(tr_ipg(&p, 0.0, 0.1, &fda4_front(0.0, 10), &bad, &mut rng).is_err());
    let wrong_m = vec![ObjectiveVector(vec![0.0, 1.0])];
    assert!(tr_ipg(&p, 0.0, 0.1, &wrong_m, &small_cfg(10), &mut rng).is_err());
    assert!(IpgConfig {
        inner_budget: 0,
        ..IpgConfig::default()
    }
    .validate()
    .is_err());
    assert!(IpgConfig {
        n_s: 1,
        ..IpgConfig::default()
    }
    .validate()
    .is_err());
}

#[test]
fn latent_targets_follow_front_order() {
    let p = problem("FDA4").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let src: Vec<ObjectiveVector> = sample_decision_space(p.bounds(), 20, &mut rng)
        .iter()
        .map(|x| p.evaluate(x, 0.0).unwrap())
        .collect();
    let tgt: Vec<ObjectiveVector> = sample_decision_space(p.bounds(), 20, &mut rng)
        .iter()
        .map(|x| p.evaluate(x, 0.1).unwrap())
        .collect();
    let model = tca_fit(&src, &tgt, KernelSpec::gaussian(1.0).unwrap(), 7, 0.5).unwrap();
    let front = fda4_front(0.0, 15);
    let set = build_latent_targets(&model, &front).unwrap();
    assert_eq!(set.len(), 15);
    for (l, p) in set.targets.iter().zip(&front) {
        assert_eq!(l.len(), 7);
        assert_eq!(l, &model.map(p).unwrap());
    }
    assert!(build_latent_targets(&model, &[]).unwrap().is_empty());
}

#[test]
fn optimal_start_is_kept() {
    let p = problem("DMOP2").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let src: Vec<ObjectiveVector> = sample_decision_space(p.bounds(), 20, &mut rng)
        .iter()
        .map(|x| p.evaluate(x, 0.0).unwrap())
        .collect();
    let tgt: Vec<ObjectiveVector> = sample_decision_space(p.bounds(), 20, &mut rng)
        .iter()
        .map(|x| p.evaluate(x, 0.3).unwrap())
        .collect();
    let model = tca_fit(&src, &tgt, KernelSpec::gaussian(0.8).unwrap(), 5, 0.5).unwrap();
    let x_star = sample_decision_space(p.bounds(), 1, &mut rng).remove(0);
    let l = model.map(&p.evaluate(&x_star, 0.3).unwrap()).unwrap();
    let r = inner_minimize(&p, 0.3, &model, &l, 100, 8, 0.25, Some(&x_star), &mut rng).unwrap();
    assert_eq!(r.x, x_star);
    assert_eq!(r.g, 0.0);
    assert_eq!(r.evaluations, 1);
}

#[test]
fn history_is_monotone_and_budgeted() {
    let p = problem("HE7").unwrap();
    let front = p.true_pof(0.0, 10).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let src: Vec<ObjectiveVector> = sample_decision_space(p.bounds(), 30, &mut rng)
        .iter()
        .map(|x| p.evaluate(x, 0.0).unwrap())
        .collect();
    let tgt: Vec<ObjectiveVector> = sample_decision_space(p.bounds(), 30, &mut rng)
        .iter()
        .map(|x| p.evaluate(x, 0.1).unwrap())
        .collect();
    let model = tca_fit(&src, &tgt, KernelSpec::gaussian(1.0).unwrap(), 10, 0.5).unwrap();
    for pt in &front {
        let l = model.map(pt).unwrap();
        let counter = CountingProblem::new(&p, &[0.1]);
        let r = inner_minimize(&counter, 0.1, &model, &l, 150, 8, 0.25, None, &mut rng).unwrap();
        assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(r.history.len(), r.evaluations);
        assert_eq!(counter.total(), r.evaluations);
        assert!(r.evaluations <= 150);
        assert_eq!(*r.history.last().unwrap(), r.g);
        assert!(p.bounds().contains(&r.x));
    }
}

#[test]
fn toy_inner_minimum_matches_grid_search() {
    let p = Bend::new();
    let model = identity_model();
    for (i, l) in [[0.8, 0.1], [0.3, 0.5], [1.2, -0.4], [0.05, 1.3]]
        .iter()
        .enumerate()
    {
        let g = |x1: f64, x2: f64| (x1 - l[0]).powi(2) + (x2 + x1 * x1 - l[1]).powi(2);
        let mut grid = f64::INFINITY;
        for a in 0..=1000 {
            for b in 0..=1000 {
                grid = grid.min(g(a as f64 * 1e-3, b as f64 * 1e-3));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        let r = inner_minimize(&p, 0.0, &model, l, 500, 8, 0.25, None, &mut rng).unwrap();
        assert!((r.g - g(r.x[0], r.x[1])).abs() < 1e-12);
        assert!(r.g <= grid + 1e-4, "target {l:?}: {} vs grid {grid}", r.g);
    }
}

#[test]
fn evaluation_accounting() {
    let p = problem("FDA4").unwrap();
    let counter = CountingProblem::new(&p, &[0.0, 0.1]);
    let cfg = small_cfg(40);
    let front = fda4_front(0.0, 25);
    let out = tr_ipg(
        &counter,
        0.0,
        0.1,
        &front,
        &cfg,
        &mut ChaCha8Rng::seed_from_u64(7),
    )
    .unwrap();
    assert_eq!(counter.count_at(0), cfg.n_s);
    assert_eq!(counter.count_at(1), out.report.target_evaluations);
    assert!(counter.count_at(1) <= cfg.n_t_samples + front.len() * cfg.inner_budget + out.report.random_fill);
    assert_eq!(counter.count_unscheduled(), 0);
}

#[test]
fn reproducible() {
    let p = problem("DMOP2").unwrap();
    let front = p.true_pof(0.2, 60).unwrap();
    let run = || {
        let out = tr_ipg(
            &p,
            0.2,
            0.3,
            &front,
            &small_cfg(80),
            &mut ChaCha8Rng::seed_from_u64(8),
        )
        .unwrap();
        (out.population, serde_json::to_string(&out.report).unwrap())
    };
    let (a, ra) = run();
    let (b, rb) = run();
    assert_eq!(a, b);
    assert_eq!(ra, rb);
}

#[test]
fn kernel_choices() {
    let bank = vec![
        ObjectiveVector(vec![0.0]),
        ObjectiveVector(vec![1.0]),
        ObjectiveVector(vec![3.0]),
    ];
    assert_eq!(
        KernelChoice::GaussianMedian.resolve(&bank).unwrap(),
        KernelSpec::Gaussian { sigma: 2.0 }
    );
    assert_eq!(KernelChoice::Linear.resolve(&bank).unwrap(), KernelSpec::Linear);
    assert!(KernelChoice::Gaussian { sigma: -1.0 }.resolve(&bank).is_err());
    let cfg: IpgConfig = serde_json::from_str(r#"{"kernel": {"kind": "gaussian", "sigma": 0.5}}"#).unwrap();
    assert_eq!(cfg.kernel, KernelChoice::Gaussian { sigma: 0.5 });
    assert_eq!(cfg.d, 20);
}

#[test]
fn transfer_beats_random_start_on_fda4() {
    let p = problem("FDA4").unwrap();
    let (t0, t1) = (0.2, 0.3);
    let truth = fda4_front(t1, 1089);
    let cfg = IpgConfig {
        target_pop_size: 100,
        inner_budget: 200,
        ..IpgConfig::default()
    };
    let mut wins = 0;
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let out = tr_ipg(&p, t0, t1, &fda4_front(t0, 100), &cfg, &mut rng).unwrap();
        let seeded: Vec<ObjectiveVector> = out.population.iter().map(|i| i.f.clone()).collect();
        let random: Vec<ObjectiveVector> = sample_decision_space(p.bounds(), 100, &mut rng)
            .iter()
            .map(|x| p.evaluate(x, t1).unwrap())
            .collect();
        if igd(&truth, &seeded).unwrap() < igd(&truth, &random).unwrap() {
            wins += 1;
        }
    }
    assert!(wins >= 4, "{wins}/5");
}
