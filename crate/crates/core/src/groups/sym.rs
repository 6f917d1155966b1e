//! Partitions and lexicographic permutation streams for the symmetric group.

use num_bigint::BigUint;

use crate::rational::factorial;

/// All partitions of `n` as non-increasing part lists, in reverse
/// lexicographic order (`[n]` first).
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    rec(n, n, &mut cur, &mut out);
    out
}

fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if rem == 0 {
        out.push(cur.clone());
        return;
    }
    for p in (1..=max.min(rem)).rev() {
        cur.push(p);
        rec(rem - p, p, cur, out);
        cur.pop();
    }
}

/// Centralizer order `z_lambda = prod_k k^(m_k) m_k!`.
pub fn z_lambda(mults: &[(u32, u32)]) -> BigUint {
    mults.iter().fold(BigUint::from(1u32), |acc, &(k, m)| {
        acc * BigUint::from(k).pow(m) * factorial(m as u64)
    })
}

/// In-place next permutation in lexicographic order; false at the last one.
pub fn next_permutation(p: &mut [u32]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Streams permutations of `0..n` with `images[0] == first` (all of them
/// when `first` is `None`) in lexicographic order.
pub fn for_each_permutation(n: u32, first: Option<u32>, f: &mut dyn FnMut(&[u32])) {
    match first {
        None => {
            let mut p: Vec<u32> = (0..n).collect();
            loop {
                f(&p);
                if !next_permutation(&mut p) {
                    break;
                }
            }
        }
        Some(a) => {
            let mut rest: Vec<u32> = (0..n).filter(|&x| x != a).collect();
            let mut p = Vec::with_capacity(n as usize);
            loop {
                p.clear();
                p.push(a);
                p.extend_from_slice(&rest);
                f(&p);
                if !next_permutation(&mut rest) {
                    break;
                }
            }
        }
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: u32, n: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if (n - x) as usize + cur.len() < k {
                break;
            }
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}
