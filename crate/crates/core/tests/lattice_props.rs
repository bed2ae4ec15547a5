use proptest::prelude::*;
use reslat::lattice::{
    init_product_measure, run, stream_rng, Dims, LatticeState, SimConfig, UpdateRule,
    DYNAMICS_STREAM,
};
use reslat::model::Builtin;
use reslat::{InteractionMatrix, SimplexPoint};

fn matrix(n: usize) -> impl Strategy<Value = InteractionMatrix> {
    prop::collection::vec(prop_oneof![1 => Just(0.0), 3 => 0.0..2.0f64], n * n).prop_filter_map(
        "a column is zero",
        move |e| {
            let rows: Vec<Vec<f64>> = e.chunks(n).map(|r| r.to_vec()).collect();
            InteractionMatrix::from_rows(&rows).ok()
        },
    )
}

fn dims() -> impl Strategy<Value = Dims> {
    prop_oneof![
        (3usize..12, 3usize..12).prop_map(|(x, y)| Dims::Torus(x, y)),
        (3usize..40).prop_map(Dims::Line),
    ]
}

fn builtin(name: &str, eps: Option<f64>) -> InteractionMatrix {
    Builtin::parse(name, eps, None).unwrap().matrix().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monochromatic_states_are_absorbing(m in matrix(3), d in dims(), s in 0usize..3, seed in any::<u64>()) {
        let mut state = LatticeState::uniform(d, 3, s).unwrap();
        let rule = UpdateRule::new(&m).unwrap();
        let mut rng = stream_rng(seed, DYNAMICS_STREAM);
        for _ in 0..500 {
            prop_assert!(!rule.step(&mut state, &mut rng));
        }
        prop_assert!(state.sites().iter().all(|&x| x as usize == s));
    }

    #[test]
    fn pure_birth_type_grows_monotonically(eps in 0.01..0.99f64, d in dims(), u2 in 0.05..0.95f64, seed in any::<u64>()) {
        let m = builtin("M4", Some(eps));
        let mut state = init_product_measure(d, &SimplexPoint::new(vec![1.0 - u2, u2]).unwrap(), seed).unwrap();
        let rule = UpdateRule::new(&m).unwrap();
        let mut rng = stream_rng(seed, DYNAMICS_STREAM);
        for _ in 0..2000 {
            let before = state.sites().to_vec();
            rule.step(&mut state, &mut rng);
            for (b, a) in before.iter().zip(state.sites()) {
                prop_assert!(!(*b == 1 && *a == 0), "a type-2 site reverted");
            }
        }
    }

    #[test]
    fn time_is_updates_over_sites(d in dims(), steps in 0u64..3000, seed in any::<u64>()) {
        let m = InteractionMatrix::voter(2).unwrap();
        let mut state = init_product_measure(d, &SimplexPoint::uniform(2), seed).unwrap();
        let rule = UpdateRule::new(&m).unwrap();
        let mut rng = stream_rng(seed, DYNAMICS_STREAM);
        for _ in 0..steps {
            rule.step(&mut state, &mut rng);
        }
        prop_assert_eq!(state.updates(), steps);
        prop_assert_eq!(state.time(), steps as f64 / d.sites() as f64);
        let counted: u64 = state.counts().iter().sum();
        prop_assert_eq!(counted, d.sites() as u64);
    }

    #[test]
    fn samples_are_densities(m in matrix(3), seed in any::<u64>()) {
        let d = Dims::Torus(12, 12);
        let state = init_product_measure(d, &SimplexPoint::uniform(3), seed).unwrap();
        let rec = run(state, &m, &SimConfig::for_horizon(d, 30.0, seed).with_interval(3.0)).unwrap();
        for s in &rec.samples {
            prop_assert!((s.densities.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&s.clustering));
        }
        prop_assert_eq!(rec.last().t, 30.0);
    }

    #[test]
    fn runs_are_deterministic(m in matrix(2), d in dims(), seed in any::<u64>()) {
        let go = || {
            let state = init_product_measure(d, &SimplexPoint::uniform(2), seed).unwrap();
            run(state, &m, &SimConfig::for_horizon(d, 20.0, seed).with_interval(5.0)).unwrap()
        };
        let (a, b) = (go(), go());
        prop_assert_eq!(&a.samples, &b.samples);
        prop_assert_eq!(a.fixation, b.fixation);
        prop_assert_eq!(a.final_state.sites(), b.final_state.sites());
    }
}

#[test]
fn zero_denominator_cancels_the_update() {
    // Under M6 a site surrounded by its own type has nothing to adopt.
    let m6 = builtin("M6", None);
    let rule = UpdateRule::new(&m6).unwrap();
    let mut rng = stream_rng(11, DYNAMICS_STREAM);
    for _ in 0..100 {
        assert_eq!(rule.resolve(0, &[0, 0, 0, 0], &mut rng), None);
        assert_eq!(rule.resolve(1, &[1, 1, 1, 1], &mut rng), None);
    }
    // Only the single type-2 site and its four neighbors can ever change
    // in the first update.
    let d = Dims::Torus(7, 7);
    let mut sites = vec![0u8; 49];
    sites[24] = 1;
    let lone = LatticeState::from_sites(d, 2, sites).unwrap();
    let active: Vec<usize> = std::iter::once(24)
        .chain(lone.neighbors(24).iter().map(|&s| s as usize))
        .collect();
    for seed in 0..200 {
        let mut s = lone.clone();
        let mut rng = stream_rng(seed, DYNAMICS_STREAM);
        rule.step(&mut s, &mut rng);
        for (i, (a, b)) in lone.sites().iter().zip(s.sites()).enumerate() {
            if a != b {
                assert!(active.contains(&i), "site {i} changed");
            }
        }
    }
}

#[test]
fn product_measure_matches_densities() {
    let d = Dims::Torus(200, 200);
    let u = SimplexPoint::new(vec![0.9, 0.05, 0.05]).unwrap();
    let s = init_product_measure(d, &u, 5).unwrap();
    let dens = s.densities();
    for i in 0..3 {
        assert!((dens[i] - u[i]).abs() < 0.01, "{dens:?}");
    }
    // Independent sites: clustering near Σ u_i².
    let want: f64 = u.iter().map(|x| x * x).sum();
    assert!((s.clustering_coefficient() - want).abs() < 0.01);
}

#[test]
fn fixation_freezes_the_remaining_samples() {
    let d = Dims::Torus(6, 6);
    let m = builtin("M4", Some(0.5));
    let state = init_product_measure(d, &SimplexPoint::new(vec![0.5, 0.5]).unwrap(), 2).unwrap();
    let rec = run(
        state,
        &m,
        &SimConfig::for_horizon(d, 500.0, 2).with_interval(10.0),
    )
    .unwrap();
    let fix = rec.fixation.expect("a 6x6 pure-birth run fixates quickly");
    assert_eq!(fix.species, 1);
    for s in rec.samples.iter().filter(|s| s.t > fix.time) {
        assert_eq!(s.densities, vec![0.0, 1.0]);
        assert_eq!(s.clustering, 1.0);
    }
    assert_eq!(rec.last().t, 500.0);
    assert!(rec.final_state.updates() < rec.config.total_updates);
}
