use std::sync::Arc;

use num_rational::Ratio;

use junta_lab::boolfn::{make_junta, make_parity, JuntaSpec, SubsetMask, TruthTable};
use junta_lab::learning::{
    default_max_ex_draws, hypothesis_error, influential_query_count, learn_junta, LearnStatus,
};
use junta_lab::oracles::{ExampleOracle, FsOracle, RngStream};

fn setup(spec: &JuntaSpec, seed: u64) -> (Arc<TruthTable>, FsOracle, ExampleOracle) {
    let table = Arc::new(make_junta(spec).unwrap());
    let fs = FsOracle::from_junta(spec, RngStream::new(seed, "fs", 0));
    let ex = ExampleOracle::new(Arc::clone(&table), RngStream::new(seed, "ex", 0));
    (table, fs, ex)
}

/// When the learned variables contain every relevant one, seen cells are
/// exact and each unseen cell is wrong iff `f = +1` there.
#[test]
fn error_equals_unseen_false_cells() {
    let mut rng = RngStream::new(21, "spec", 0);
    for t in 0..40 {
        let k = 3 + t % 4;
        let spec = JuntaSpec::random(12, k, &mut rng).unwrap();
        let (table, mut fs, mut ex) = setup(&spec, 100 + t as u64);
        // small cap so that some cells stay unseen
        let report = learn_junta(&mut fs, &mut ex, k, 0.1, 3 << k).unwrap();
        let h = &report.hypothesis;
        if !spec.relevant().iter().all(|v| h.vars().contains(v)) {
            continue;
        }
        let cells = h.entries().len() as u64;
        let unseen_false = (0..table.len())
            .filter(|&x| h.entries()[h.cell_of(x)].is_none() && table.at(x) == 1)
            .map(|x| h.cell_of(x))
            .collect::<std::collections::BTreeSet<_>>()
            .len() as u64;
        assert_eq!(
            hypothesis_error(&table, h).unwrap(),
            Ratio::new(unseen_false, cells)
        );
    }
}

#[test]
fn random_juntas_are_learned() {
    let mut rng = RngStream::new(22, "spec", 0);
    let (k, eps) = (5, 0.1);
    let cap = default_max_ex_draws(k, eps).unwrap();
    let mut good = 0;
    for t in 0..30 {
        let spec = JuntaSpec::random(14, k, &mut rng).unwrap();
        let (table, mut fs, mut ex) = setup(&spec, 200 + t);
        let report = learn_junta(&mut fs, &mut ex, k, eps, cap).unwrap();
        assert_eq!(report.fs_calls, influential_query_count(k, eps).unwrap());
        assert_eq!(report.fs_calls, fs.queries().fs_calls);
        assert_eq!(report.ex_calls, ex_calls(&ex));
        assert!(report.ex_calls <= cap);
        if hypothesis_error(&table, &report.hypothesis).unwrap() <= Ratio::new(1, 10) {
            good += 1;
        }
    }
    assert!(good >= 27, "{good}/30");
}

fn ex_calls(ex: &ExampleOracle) -> u64 {
    use junta_lab::oracles::ExampleSource;
    ex.queries().ex_calls
}

#[test]
fn parity_is_learned_exactly() {
    for t in 0..20 {
        let inner = make_parity(2, SubsetMask::full(2)).unwrap();
        let (a, b) = (t % 20, (t + 7) % 20);
        let spec = JuntaSpec::new(20, vec![a.min(b), a.max(b)], inner).unwrap();
        let (table, mut fs, mut ex) = setup(&spec, t as u64);
        let report = learn_junta(&mut fs, &mut ex, 2, 0.1, 1000).unwrap();
        assert_eq!(report.status, LearnStatus::Success);
        assert_eq!(
            hypothesis_error(&table, &report.hypothesis).unwrap(),
            Ratio::from_integer(0)
        );
    }
}

#[test]
fn overflow_on_broken_promise() {
    let f = make_parity(6, SubsetMask(0b1111)).unwrap();
    let mut fs = FsOracle::from_table(&f, RngStream::new(0, "fs", 0));
    let mut ex = ExampleOracle::new(Arc::new(f), RngStream::new(0, "ex", 0));
    let report = learn_junta(&mut fs, &mut ex, 3, 0.2, 100).unwrap();
    assert_eq!(report.status, LearnStatus::StageOneOverflow);
    assert_eq!(report.ex_calls, 0);
}

#[test]
fn timeout_when_cap_is_small() {
    let mut rng = RngStream::new(23, "spec", 0);
    let spec = JuntaSpec::random(10, 6, &mut rng).unwrap();
    let (_, mut fs, mut ex) = setup(&spec, 23);
    let report = learn_junta(&mut fs, &mut ex, 6, 0.1, 10).unwrap();
    assert_eq!(report.status, LearnStatus::StageTwoTimeout);
    assert_eq!(report.ex_calls, 10);
}
