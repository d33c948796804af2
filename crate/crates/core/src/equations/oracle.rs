//! Direct nested-loop enumeration, the reference for the grid counts.

use crate::WeightedIndicator;

/// Ordered solutions of `Σ cᵢxᵢ = 0` with every `xᵢ ∈ set`, optionally with
/// pairwise-distinct coordinates.
pub fn count_solutions(coeffs: &[i64], set: &[u64], distinct: bool) -> u128 {
    let mut count = 0u128;
    enumerate(coeffs, set, distinct, &mut |_| count += 1);
    count
}

/// `Σ Π f(xᵢ)` over the same solutions.
pub fn weighted_count(coeffs: &[i64], f: &WeightedIndicator<f64>, distinct: bool) -> f64 {
    let mut total = 0.0;
    let weights = f.weights();
    enumerate_indices(coeffs, f.support(), distinct, &mut |idx| {
        total += idx.iter().map(|&i| weights[i]).product::<f64>();
    });
    total
}

/// Every solution tuple, in lexicographic order of indices into `set`.
pub fn solutions(coeffs: &[i64], set: &[u64], distinct: bool) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    enumerate(coeffs, set, distinct, &mut |x| out.push(x.to_vec()));
    out
}

fn enumerate(coeffs: &[i64], set: &[u64], distinct: bool, visit: &mut dyn FnMut(&[u64])) {
    let mut x = vec![0u64; coeffs.len()];
    enumerate_indices(coeffs, set, distinct, &mut |idx| {
        for (v, &i) in x.iter_mut().zip(idx) {
            *v = set[i];
        }
        visit(&x);
    });
}

fn enumerate_indices(coeffs: &[i64], set: &[u64], distinct: bool, visit: &mut dyn FnMut(&[usize])) {
    fn go(
        depth: usize,
        partial: i128,
        idx: &mut Vec<usize>,
        coeffs: &[i64],
        set: &[u64],
        distinct: bool,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if depth == coeffs.len() {
            if partial == 0 {
                visit(idx);
            }
            return;
        }
        for i in 0..set.len() {
            if distinct && idx[..depth].contains(&i) {
                continue;
            }
            idx[depth] = i;
            go(depth + 1, partial + coeffs[depth] as i128 * set[i] as i128, idx, coeffs, set, distinct, visit);
        }
    }
    if coeffs.is_empty() {
        return;
    }
    let mut idx = vec![0usize; coeffs.len()];
    go(0, 0, &mut idx, coeffs, set, distinct, visit);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_examples() {
        let ps = [1u64, 2, 5, 8, 11];
        assert_eq!(count_solutions(&[1, 1, -1], &ps, false), 1);
        assert_eq!(solutions(&[1, 1, -1], &ps, false), vec![vec![1, 1, 2]]);
        assert_eq!(count_solutions(&[1, 1, -2], &ps, true), 4);
        assert_eq!(count_solutions(&[1, 1, -1, -1], &ps, false), 61);
        assert_eq!(count_solutions(&[1, -1], &[3, 4], false), 2);
    }
}
