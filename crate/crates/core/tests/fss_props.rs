use proptest::prelude::*;
use rand::Rng;
use vitriq::analysis::DataPoint;
use vitriq::fss::{cost, grid_search, transform, Axis, ScaledTriple, ScalingGrid};
use vitriq::rng::seeded;

/// Box-Muller standard normal.
fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = 1.0 - rng.random::<f64>();
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

fn triples() -> impl Strategy<Value = Vec<ScaledTriple>> {
    prop::collection::vec((-5.0..5.0f64, -1.0..1.0f64, 0.01..0.5f64), 3..40).prop_map(|v| {
        let mut t: Vec<_> = v.into_iter().map(|(t, g, e)| ScaledTriple { t, g, e }).collect();
        t.sort_by(|a, b| a.t.total_cmp(&b.t));
        t
    })
}

proptest! {
    #[test]
    fn cost_is_nonnegative(t in triples()) {
        prop_assert!(cost(&t).unwrap() >= 0.0);
    }

    #[test]
    fn cost_ignores_vertical_shift(t in triples(), shift in -3.0..3.0f64) {
        let moved: Vec<_> = t.iter().map(|p| ScaledTriple { g: p.g + shift, ..*p }).collect();
        let (a, b) = (cost(&t).unwrap(), cost(&moved).unwrap());
        prop_assert!((a - b).abs() <= 1e-6 * (1.0 + a));
    }

    #[test]
    fn points_on_a_line_cost_zero(slope in -2.0..2.0f64, ts in prop::collection::vec(-5.0..5.0f64, 3..30)) {
        let mut t: Vec<_> = ts.iter().map(|&t| ScaledTriple { t, g: 0.5 + slope * t, e: 0.1 }).collect();
        t.sort_by(|a, b| a.t.total_cmp(&b.t));
        let has_distinct = t.windows(3).any(|w| w[0].t != w[2].t);
        prop_assume!(has_distinct);
        prop_assert!(cost(&t).unwrap() < 1e-18);
    }

    #[test]
    fn transform_sorts(alpha_c in 0.8..1.1f64, nu in 1.0..4.0f64) {
        let pts: Vec<_> = (1..30)
            .map(|i| DataPoint { size: 8 + 8 * (i % 3), alpha: i as f64 / 20.0, q_mean: 0.1, stderr: 0.01, n_samples: 5 })
            .collect();
        let t = transform(&pts, alpha_c, nu);
        prop_assert_eq!(t.len(), pts.len());
        prop_assert!(t.windows(2).all(|w| w[0].t <= w[1].t));
    }
}

/// Each interior term is a squared z-score, so noise of the stated size on a
/// straight line gives C close to 1.
#[test]
fn noisy_line_costs_about_one() {
    let mut rng = seeded(5);
    let mut total = 0.0;
    let reps = 200;
    for _ in 0..reps {
        let t: Vec<_> = (0..60)
            .map(|i| {
                let t = i as f64 * 0.1 + 0.05 * rng.random::<f64>();
                ScaledTriple { t, g: 2.0 * t + normal(&mut rng), e: 1.0 }
            })
            .collect();
        total += cost(&t).unwrap();
    }
    let mean = total / reps as f64;
    assert!((mean - 1.0).abs() < 0.05, "mean cost {mean}");
}

fn planted(noise: f64, seed: u64) -> Vec<DataPoint> {
    let f = |t: f64| 0.05 + 0.9 / (1.0 + (-1.8 * t).exp());
    let mut rng = seeded(seed);
    let mut out = Vec::new();
    for size in [8usize, 16, 24, 32] {
        for m in 1..=(3 * size / 2) {
            let alpha = m as f64 / size as f64;
            let q = f((alpha - 0.918) * (size as f64).powf(0.4));
            out.push(DataPoint {
                size,
                alpha,
                q_mean: q + noise * normal(&mut rng),
                stderr: 0.01,
                n_samples: 100,
            });
        }
    }
    out
}

fn coarse() -> ScalingGrid {
    ScalingGrid {
        alpha_c: Axis { min: 0.85, max: 1.0, step: 0.003 },
        nu: Axis { min: 1.5, max: 4.0, step: 0.05 },
        ..Default::default()
    }
}

#[test]
fn minimum_lies_in_its_contour_and_tracks_noise() {
    let mut c_mins = Vec::new();
    for noise in [0.02, 0.005, 0.0] {
        let res = grid_search(&planted(noise, 9), &coarse()).unwrap();
        assert!(res.surface.costs.iter().all(|&c| c >= res.c_min));
        assert!(res.uncertainty_alpha >= 0.0 && res.uncertainty_nu >= 0.0);
        c_mins.push(res.c_min);
    }
    assert!(c_mins[0] > c_mins[1] && c_mins[1] > c_mins[2], "{c_mins:?}");
}

#[test]
fn flat_data_gives_unbounded_uncertainty() {
    let pts: Vec<_> = planted(0.0, 1)
        .into_iter()
        .map(|p| DataPoint { q_mean: 0.0, stderr: 0.01, ..p })
        .collect();
    let res = grid_search(&pts, &coarse()).unwrap();
    assert_eq!(res.c_min, 0.0);
    assert!(res.unbounded);
    assert_eq!((res.alpha_c_exp, res.nu_exp), (0.85, 1.5));
}
