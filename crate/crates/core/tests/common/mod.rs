//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use logsym::{PositiveSample, RngStream};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    RngStream::new(seed, 0).rng()
}

/// `n` values uniform on `[lo, hi]`, in generation order.
pub fn uniform_values(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..=hi)).collect()
}

/// Log-uniform values on `[e^-2, e^2]`.
pub fn log_uniform_sample(rng: &mut impl Rng, n: usize) -> PositiveSample {
    PositiveSample::new(
        (0..n)
            .map(|_| rng.random_range(-2.0f64..2.0).exp())
            .collect(),
    )
    .unwrap()
}

/// A sample closed under `x -> 1/x`, built from `half` random values
/// (plus 1 when `with_one`).
pub fn reciprocal_symmetric(rng: &mut impl Rng, half: usize, with_one: bool) -> PositiveSample {
    let mut v = Vec::new();
    for _ in 0..half {
        let x: f64 = rng.random_range(0.0f64..3.0).exp();
        v.push(x);
        v.push(1.0 / x);
    }
    if with_one {
        v.push(1.0);
    }
    PositiveSample::new(v).unwrap()
}

/// Every size-`k` subset of `0..n`, in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every ordering of `items`.
pub fn permutations(items: &[f64]) -> Vec<Vec<f64>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Min/max U-statistic with the kernel symmetrised over all `(k+1)!`
/// orderings of every subset.
pub fn minmax_full_permutation(x: &[f64], k: usize) -> f64 {
    let subs = subsets(x.len(), k + 1);
    let mut total = 0.0;
    for s in &subs {
        let vals: Vec<f64> = s.iter().map(|&i| x[i]).collect();
        let perms = permutations(&vals);
        let mut acc = 0.0;
        for p in &perms {
            let (others, last) = p.split_at(k);
            let h = last[0];
            let min = others.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = others.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            acc += f64::from(u8::from(min <= h)) - f64::from(u8::from(max >= 1.0 / h));
        }
        total += acc / perms.len() as f64;
    }
    total / subs.len() as f64
}

/// Ratio U-statistic of a sorted sample by explicit subset enumeration:
/// choose four ranks, sort the first three, compare both ratios with the
/// fourth.
pub fn ratio_by_subsets(x: &[f64]) -> f64 {
    let subs = subsets(x.len(), 4);
    let mut sum = 0i64;
    for s in &subs {
        let mut triple = [x[s[0]], x[s[1]], x[s[2]]];
        triple.sort_by(f64::total_cmp);
        let l = x[s[3]];
        let a = i64::from(triple[1] / triple[0] <= l);
        let b = i64::from(triple[2] / triple[1] <= l);
        sum += a - b;
    }
    sum as f64 / subs.len() as f64
}

/// PWM contrast through its U-statistic form: the mean over `(β+1)`-subsets
/// of `max − 1/min`, divided by `β + 1`.
pub fn pwm_by_subsets(x: &[f64], beta: usize) -> f64 {
    let subs = subsets(x.len(), beta + 1);
    let mut total = 0.0;
    for s in &subs {
        let max = x[*s.last().unwrap()];
        let min = x[s[0]];
        total += max - 1.0 / min;
    }
    total / subs.len() as f64 / (beta + 1) as f64
}
