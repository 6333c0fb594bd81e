#![allow(dead_code)]

use std::collections::BTreeMap;

use junta_lab::boolfn::{address_of, AcceptInstance, RejectInstance, SubsetMask, VarSet};
use junta_lab::oracles::FsOracle;
use junta_lab::stats::{chi_square_gof, ChiSquareResult};

/// `(X bits over the address variables, y variable)`.
pub type Key = (u32, usize);

/// Exact FS weights of an addressing-style function, in units of `1/4^r`.
///
/// `leaves[a] = (y variable, sign)` is what address `a` outputs. The weights
/// come from a direct `r`-variable transform of each `y` variable's signed
/// address indicator, without going through a truth table.
pub fn addressing_weights(r: usize, leaves: &[(usize, i64)]) -> BTreeMap<Key, u64> {
    let size = 1usize << r;
    let mut per_y: BTreeMap<usize, Vec<(usize, i64)>> = BTreeMap::new();
    for b in 0..size {
        let (y, sign) = leaves[address_of(b, r)];
        per_y.entry(y).or_default().push((b, sign));
    }
    let mut out = BTreeMap::new();
    for (y, points) in per_y {
        for x in 0..size {
            let c: i64 = points
                .iter()
                .map(|&(b, s)| if (b & x).count_ones() % 2 == 1 { -s } else { s })
                .sum();
            if c != 0 {
                out.insert((x as u32, y), (c * c) as u64);
            }
        }
    }
    out
}

pub fn reject_leaves(inst: &RejectInstance) -> Vec<(usize, i64)> {
    inst.tau().iter().map(|&t| (inst.r() + t, 1)).collect()
}

pub fn accept_leaves(inst: &AcceptInstance) -> Vec<(usize, i64)> {
    let big_r = inst.big_r();
    (0..big_r)
        .map(|a| {
            if a < big_r / 2 {
                (inst.r() + inst.tau()[a], 1)
            } else {
                let i = big_r - 1 - a;
                (inst.r() + inst.tau()[i], inst.signs()[i] as i64)
            }
        })
        .collect()
}

/// Splits a response into its address part and its single non-address variable.
pub fn key_of(s: &VarSet, r: usize) -> Option<Key> {
    let mut x = 0u32;
    let mut y = None;
    for v in s.iter() {
        if v < r {
            x |= 1 << v;
        } else if y.replace(v).is_some() {
            return None;
        }
    }
    y.map(|y| (x, y))
}

/// Chi-square goodness of fit of `draws` responses against exact weights.
/// A response outside the support yields `p = 0`.
pub fn chi_square_keys(
    fs: &mut FsOracle,
    r: usize,
    weights: &BTreeMap<Key, u64>,
    draws: usize,
) -> ChiSquareResult {
    let index: BTreeMap<Key, usize> = weights.keys().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut observed = vec![0u64; weights.len() + 1];
    let mut probs: Vec<f64> = Vec::with_capacity(weights.len() + 1);
    let total: u64 = weights.values().sum();
    probs.extend(weights.values().map(|&w| w as f64 / total as f64));
    probs.push(0.0);
    for _ in 0..draws {
        let s = fs.draw().unwrap();
        match key_of(&s, r).and_then(|k| index.get(&k)) {
            Some(&i) => observed[i] += 1,
            None => observed[weights.len()] += 1,
        }
    }
    chi_square_gof(&observed, &probs).unwrap()
}

/// Chi-square goodness of fit of `draws` responses of a table-backed oracle
/// against its own exact distribution.
pub fn chi_square_table(fs: &mut FsOracle, draws: usize) -> ChiSquareResult {
    let dist = fs.distribution().unwrap();
    let total: u64 = dist.iter().map(|&(_, w)| w).sum();
    let index: BTreeMap<SubsetMask, usize> =
        dist.iter().enumerate().map(|(i, &(m, _))| (m, i)).collect();
    let mut observed = vec![0u64; dist.len() + 1];
    let mut probs: Vec<f64> = dist.iter().map(|&(_, w)| w as f64 / total as f64).collect();
    probs.push(0.0);
    for _ in 0..draws {
        let m = fs.draw_mask().unwrap();
        match index.get(&m) {
            Some(&i) => observed[i] += 1,
            None => observed[dist.len()] += 1,
        }
    }
    chi_square_gof(&observed, &probs).unwrap()
}
