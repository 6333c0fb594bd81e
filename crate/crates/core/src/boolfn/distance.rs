//! Brute-force distances to juntas.

use num_rational::Ratio;

use super::mask::SubsetMask;
use super::table::{project_index, Fraction, TruthTable};
use crate::error::{Error, Result};

/// Default cap on table reads for [`distance_to_k_junta`].
pub const DEFAULT_WORK_BUDGET: u128 = 1_000_000_000;

/// Per-assignment vote counts over the variables in `t`: `(plus, minus)`.
fn vote_counts(f: &TruthTable, t: SubsetMask) -> Result<Vec<(u64, u64)>> {
    t.check_within(f.n())?;
    let positions: Vec<usize> = t.indices().collect();
    let mut counts = vec![(0u64, 0u64); 1 << positions.len()];
    for (x, &v) in f.values().iter().enumerate() {
        let cell = &mut counts[project_index(x, &positions)];
        if v > 0 {
            cell.0 += 1;
        } else {
            cell.1 += 1;
        }
    }
    Ok(counts)
}

/// The closest function depending only on `t`: majority vote per projected
/// assignment, ties going to `+1`.
pub fn best_junta_on(f: &TruthTable, t: SubsetMask) -> Result<TruthTable> {
    let counts = vote_counts(f, t)?;
    let positions: Vec<usize> = t.indices().collect();
    TruthTable::from_fn(f.n(), |x| {
        let (plus, minus) = counts[project_index(x, &positions)];
        if minus > plus {
            -1
        } else {
            1
        }
    })
}

/// Distance from `f` to the nearest function whose relevant variables lie in `t`.
pub fn distance_to_best_junta_on(f: &TruthTable, t: SubsetMask) -> Result<Fraction> {
    let counts = vote_counts(f, t)?;
    let errors: u64 = counts.iter().map(|&(p, m)| p.min(m)).sum();
    Ok(Ratio::new(errors, 1u64 << f.n()))
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Next mask with the same popcount (Gosper's hack).
fn next_same_popcount(v: u32) -> u32 {
    let t = v | (v - 1);
    (t + 1) | (((!t & (!t).wrapping_neg()) - 1) >> (v.trailing_zeros() + 1))
}

/// Distance from `f` to the class of `k`-juntas, minimising over every
/// size-`k` variable set. Refuses to start when `C(n,k) * 2^n` table reads
/// exceed `budget`.
pub fn distance_to_k_junta(f: &TruthTable, k: usize, budget: u128) -> Result<Fraction> {
    let n = f.n();
    if k >= n {
        return Ok(Ratio::from_integer(0));
    }
    let needed = binomial(n, k) * (1u128 << n);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    if k == 0 {
        return distance_to_best_junta_on(f, SubsetMask::EMPTY);
    }
    let mut best = Ratio::from_integer(1);
    let mut mask = (1u32 << k) - 1;
    let limit = 1u32 << n;
    while mask < limit {
        let d = distance_to_best_junta_on(f, SubsetMask(mask))?;
        if d < best {
            best = d;
        }
        if best == Ratio::from_integer(0) {
            break;
        }
        mask = next_same_popcount(mask);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{
        make_junta, make_parity, realize_accept, realize_reject, AcceptInstance, JuntaSpec,
        RejectInstance,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gosper_enumerates_all_subsets() {
        let mut mask = 0b111u32;
        let mut count = 0;
        while mask < 1 << 6 {
            assert_eq!(mask.count_ones(), 3);
            count += 1;
            mask = next_same_popcount(mask);
        }
        assert_eq!(count, 20);
        assert_eq!(binomial(6, 3), 20);
    }

    #[test]
    fn juntas_are_zero_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let spec = JuntaSpec::random(7, 3, &mut rng).unwrap();
        let f = make_junta(&spec).unwrap();
        assert_eq!(
            distance_to_best_junta_on(&f, spec.relevant_mask()).unwrap(),
            Ratio::from_integer(0)
        );
        assert_eq!(
            distance_to_k_junta(&f, 3, DEFAULT_WORK_BUDGET).unwrap(),
            Ratio::from_integer(0)
        );
    }

    #[test]
    fn two_parity_is_half_far_from_one_juntas() {
        let f = make_parity(2, SubsetMask(0b11)).unwrap();
        assert_eq!(
            distance_to_k_junta(&f, 1, DEFAULT_WORK_BUDGET).unwrap(),
            Ratio::new(1, 2)
        );
    }

    // Frozen from an independent exhaustive scan over all size-k subsets.
    #[test]
    fn reject_instance_fixtures() {
        let inst = RejectInstance::new(2, 6, vec![0, 1, 2, 3]).unwrap();
        let f = realize_reject(&inst).unwrap();
        assert_eq!(
            distance_to_k_junta(&f, inst.junta_bound(), DEFAULT_WORK_BUDGET).unwrap(),
            Ratio::new(1, 4)
        );
        let inst = RejectInstance::new(3, 11, (0..8).collect()).unwrap();
        let f = realize_reject(&inst).unwrap();
        assert_eq!(
            distance_to_k_junta(&f, inst.junta_bound(), DEFAULT_WORK_BUDGET).unwrap(),
            Ratio::new(1, 4)
        );
    }

    #[test]
    fn accept_instances_are_juntas_on_their_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for r in 1..=3 {
            let inst = AcceptInstance::random(r, r + (1 << r), &mut rng).unwrap();
            let f = realize_accept(&inst).unwrap();
            let support = SubsetMask::from_indices(inst.relevant_variables()).unwrap();
            assert_eq!(
                distance_to_best_junta_on(&f, support).unwrap(),
                Ratio::from_integer(0)
            );
        }
    }

    #[test]
    fn budget_is_enforced() {
        let f = TruthTable::constant(20, 1).unwrap();
        assert!(matches!(
            distance_to_k_junta(&f, 10, 1_000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn majority_ties_go_to_plus() {
        let f = make_parity(2, SubsetMask(0b11)).unwrap();
        let g = best_junta_on(&f, SubsetMask(0b01)).unwrap();
        assert!(g.values().iter().all(|&v| v == 1));
    }
}
