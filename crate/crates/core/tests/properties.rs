use std::sync::Arc;

use num_rational::Ratio;
use proptest::prelude::*;

use junta_lab::boolfn::{
    best_junta_on, distance_to_best_junta_on, JuntaSpec, SubsetMask, TruthTable, VarSet,
};
use junta_lab::fourier::{
    influence_spectral, inverse_wht, parseval_check, projection_sums, sign_projection,
    total_influence, wht,
};
use junta_lab::learning::Hypothesis;
use junta_lab::oracles::{ExampleOracle, FsOracle, RngStream};
use junta_lab::testing::{junta_test, Decision};

fn table(max_n: usize) -> impl Strategy<Value = TruthTable> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), 1 << n).prop_map(move |bits| {
            TruthTable::from_values(
                n,
                bits.into_iter().map(|b| if b { -1 } else { 1 }).collect(),
            )
            .unwrap()
        })
    })
}

fn same_n_tables(max_n: usize, count: usize) -> impl Strategy<Value = Vec<TruthTable>> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(prop::collection::vec(any::<bool>(), 1 << n), count).prop_map(
            move |tables| {
                tables
                    .into_iter()
                    .map(|bits| {
                        TruthTable::from_values(
                            n,
                            bits.into_iter().map(|b| if b { -1 } else { 1 }).collect(),
                        )
                        .unwrap()
                    })
                    .collect()
            },
        )
    })
}

fn table_and_mask(max_n: usize) -> impl Strategy<Value = (TruthTable, SubsetMask)> {
    table(max_n).prop_flat_map(|f| {
        let full = (1u32 << f.n()) - 1;
        (Just(f), (0..=full).prop_map(SubsetMask))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn distance_is_a_metric(fs in same_n_tables(7, 3)) {
        let (f, g, h) = (&fs[0], &fs[1], &fs[2]);
        prop_assert_eq!(f.distance(f).unwrap(), Ratio::from_integer(0));
        prop_assert_eq!(f.distance(g).unwrap(), g.distance(f).unwrap());
        prop_assert!(f.distance(h).unwrap() <= f.distance(g).unwrap() + g.distance(h).unwrap());
        prop_assert_eq!(f.distance(&f.negate()).unwrap(), Ratio::from_integer(1));
    }

    #[test]
    fn parseval_holds(f in table(10)) {
        prop_assert!(parseval_check(&wht(&f)));
    }

    #[test]
    fn inverse_transform_round_trips(f in table(9)) {
        prop_assert_eq!(inverse_wht(&wht(&f)).unwrap(), f);
    }

    #[test]
    fn influence_identity(f in table(8)) {
        let sp = wht(&f);
        let mut sum = Ratio::from_integer(0u64);
        for i in 0..f.n() {
            let direct = f.influence(i).unwrap();
            prop_assert_eq!(direct, influence_spectral(&sp, i).unwrap());
            sum += direct;
        }
        prop_assert_eq!(sum, total_influence(&sp));
    }

    #[test]
    fn relevant_variables_match_nonzero_influence(f in table(8)) {
        let sp = wht(&f);
        let from_spectrum: Vec<usize> = (0..f.n())
            .filter(|&i| sp.nonzero().any(|(s, _)| s.contains(i)))
            .collect();
        prop_assert_eq!(f.relevant_variables(), from_spectrum);
    }

    /// `P[f != sgn g] <= sum_{S not in T} f^(S)^2`, in integers.
    #[test]
    fn sign_projection_error_bound((f, t) in table_and_mask(8)) {
        let sp = wht(&f);
        let g = sign_projection(&f, t).unwrap();
        let wrong = f.disagreements(&g).unwrap() as u128;
        prop_assert!(wrong << f.n() <= sp.weight_outside(t));
    }

    /// The majority table on `T` is the best junta on `T`, and agrees with the
    /// sign projection wherever the projection is nowhere zero.
    #[test]
    fn sign_projection_vs_majority((f, t) in table_and_mask(8)) {
        let best = distance_to_best_junta_on(&f, t).unwrap();
        let g = sign_projection(&f, t).unwrap();
        prop_assert!(f.distance(&g).unwrap() >= best);
        let sums = projection_sums(&wht(&f), t).unwrap();
        if sums.iter().all(|&s| s != 0) {
            prop_assert_eq!(f.distance(&g).unwrap(), best);
            prop_assert_eq!(g, best_junta_on(&f, t).unwrap());
        }
    }

    #[test]
    fn table_text_round_trips(f in table(8)) {
        let text = f.to_string();
        prop_assert_eq!(text.parse::<TruthTable>().unwrap(), f);
    }

    /// Each recorded cell keeps the label of the first example that hit it.
    #[test]
    fn hypothesis_keeps_first_seen(seed in any::<u64>(), n in 3usize..9, draws in 1usize..200) {
        let mut rng = RngStream::new(seed, "f", 0);
        let f = Arc::new(TruthTable::random(n, &mut rng).unwrap());
        let vars: Vec<usize> = (0..n).step_by(2).collect();
        let mut h = Hypothesis::unseen(vars.clone()).unwrap();
        let mut ex = ExampleOracle::new(Arc::clone(&f), RngStream::new(seed, "ex", 0));
        let mut first = vec![None; 1 << vars.len()];
        for _ in 0..draws {
            let e = ex.ex_draw();
            let cell = h.cell_of(e.x);
            let fresh = first[cell].is_none();
            if fresh {
                first[cell] = Some(e.y);
            }
            prop_assert_eq!(h.record(e), fresh);
        }
        prop_assert_eq!(h.entries(), first.as_slice());
        let text = h.to_string();
        prop_assert_eq!(text.parse::<Hypothesis>().unwrap(), h);
    }

    /// FS only ever returns sets of relevant variables, so juntas are never rejected.
    #[test]
    fn tester_accepts_every_junta(seed in any::<u64>(), n in 1usize..14, k in 0usize..6, eps in 0.05f64..1.0) {
        let k = k.min(n);
        let mut rng = RngStream::new(seed, "spec", 0);
        let spec = JuntaSpec::random(n, k, &mut rng).unwrap();
        let mut fs = FsOracle::from_junta(&spec, RngStream::new(seed, "fs", 0));
        let verdict = junta_test(&mut fs, k, eps).unwrap();
        prop_assert_eq!(verdict.decision, Decision::Accept);
        let relevant = VarSet::from_unsorted(spec.relevant().to_vec());
        prop_assert!(verdict.exposed.iter().all(|v| relevant.contains(*v)));
    }
}
