//! Brute-force oracles. They read only the raw tables and share no search
//! code with the library.

#![allow(dead_code)]

use std::sync::Arc;

use hyperring_core::builders::{field_mod_squares, krasner, power, sign3, zmod};
use hyperring_core::{Elem, Multiring};

pub fn arc(a: Multiring) -> Arc<Multiring> {
    Arc::new(a)
}

/// The small instances used across the oracle tests.
pub fn instances() -> Vec<(&'static str, Arc<Multiring>)> {
    let k = arc(krasner());
    let s = arc(sign3());
    let mut out = vec![
        ("K", k.clone()),
        ("3", s.clone()),
        ("KxK", power(&k, 2).unwrap().result().clone()),
        ("3x3", power(&s, 2).unwrap().result().clone()),
    ];
    for (id, n) in [
        ("Z2", 2),
        ("Z3", 3),
        ("Z4", 4),
        ("Z5", 5),
        ("Z6", 6),
        ("Z7", 7),
        ("Z8", 8),
        ("Z9", 9),
        ("Z10", 10),
        ("Z11", 11),
        ("Z12", 12),
    ] {
        out.push((id, arc(zmod(n))));
    }
    for (id, q) in [("F3sq", 3), ("F5sq", 5), ("F7sq", 7), ("F11sq", 11), ("F13sq", 13)] {
        out.push((id, arc(field_mod_squares(q).unwrap())));
    }
    out
}

pub fn find(id: &str) -> Arc<Multiring> {
    instances().into_iter().find(|(i, _)| *i == id).unwrap().1
}

pub fn sum_contains(a: &Multiring, x: Elem, y: Elem, z: Elem) -> bool {
    a.add(x, y).contains(z)
}

/// Direct check of the four morphism clauses.
pub fn is_morphism_oracle(a: &Multiring, b: &Multiring, f: &[Elem]) -> bool {
    if f[a.zero()] != b.zero() || f[a.one()] != b.one() {
        return false;
    }
    for x in 0..a.n() {
        if f[a.neg(x)] != b.neg(f[x]) {
            return false;
        }
        for y in 0..a.n() {
            if f[a.mul(x, y)] != b.mul(f[x], f[y]) {
                return false;
            }
            for z in a.add(x, y).iter() {
                if !sum_contains(b, f[x], f[y], f[z]) {
                    return false;
                }
            }
        }
    }
    true
}

/// All maps `A → B` in lexicographic order, filtered by the clauses.
/// `None` when there are more than `limit` maps to try.
pub fn morphisms_oracle(a: &Multiring, b: &Multiring, limit: u64) -> Option<Vec<Vec<Elem>>> {
    let total = (b.n() as u64).checked_pow(a.n() as u32)?;
    if total > limit {
        return None;
    }
    let mut out = Vec::new();
    let mut f = vec![0; a.n()];
    loop {
        if is_morphism_oracle(a, b, &f) {
            out.push(f.clone());
        }
        let mut k = a.n();
        loop {
            if k == 0 {
                return Some(out);
            }
            k -= 1;
            f[k] += 1;
            if f[k] < b.n() {
                break;
            }
            f[k] = 0;
        }
    }
}

/// Prime ideals by scanning every subset, as sorted member lists ordered by
/// bitmask.
pub fn primes_oracle(a: &Multiring) -> Vec<Vec<Elem>> {
    let n = a.n();
    assert!(n <= 16);
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let has = |x: Elem| mask >> x & 1 == 1;
        if !has(a.zero()) || has(a.one()) {
            continue;
        }
        let members: Vec<Elem> = (0..n).filter(|&x| has(x)).collect();
        let closed = members
            .iter()
            .all(|&x| (0..n).all(|y| has(a.mul(x, y))) && members.iter().all(|&y| a.add(x, y).iter().all(has)));
        let prime = (0..n).all(|x| (0..n).all(|y| !has(a.mul(x, y)) || has(x) || has(y)));
        if closed && prime {
            out.push(members);
        }
    }
    out
}

/// Orders as sign vectors, by brute force into the sign hyperfield.
pub fn orders_oracle(a: &Multiring) -> Option<Vec<Vec<i8>>> {
    let s = sign3();
    let maps = morphisms_oracle(a, &s, 2_000_000)?;
    Some(
        maps.into_iter()
            .map(|m| m.into_iter().map(hyperring_core::builders::sign_value).collect())
            .collect(),
    )
}

/// Number of distinct sign vectors `x ↦ (σ(x))_σ`.
pub fn reduction_size_oracle(a: &Multiring) -> Option<usize> {
    let orders = orders_oracle(a)?;
    if orders.is_empty() {
        return None;
    }
    let mut vectors: Vec<Vec<i8>> = (0..a.n()).map(|x| orders.iter().map(|o| o[x]).collect()).collect();
    vectors.sort();
    vectors.dedup();
    Some(vectors.len())
}

/// Whether some permutation preserves all tables and the sum relation in
/// both directions. Only for `n ≤ 8`.
pub fn isomorphic_oracle(a: &Multiring, b: &Multiring) -> bool {
    if a.n() != b.n() {
        return false;
    }
    assert!(a.n() <= 8);
    let mut perm: Vec<Elem> = (0..a.n()).collect();
    loop {
        let exact = is_morphism_oracle(a, b, &perm)
            && (0..a.n()).all(|x| {
                (0..a.n()).all(|y| {
                    let image: Vec<Elem> = a.add(x, y).iter().map(|z| perm[z]).collect();
                    image.len() == b.add(perm[x], perm[y]).len()
                })
            });
        if exact {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Least `k` such that every sum of squares is a sum of `k` squares,
/// found by folding all tuples of squares of each length.
pub fn pythagoras_oracle(a: &Multiring) -> usize {
    let squares: Vec<Elem> = {
        let mut s: Vec<Elem> = (0..a.n()).map(|x| a.mul(x, x)).collect();
        s.sort();
        s.dedup();
        s
    };
    let mut first_seen = vec![usize::MAX; a.n()];
    let mut frontier: Vec<Elem> = squares.clone();
    for &x in &frontier {
        first_seen[x] = 1;
    }
    let mut k = 1;
    loop {
        k += 1;
        let mut next = vec![false; a.n()];
        for &x in &frontier {
            for &s in &squares {
                for z in a.add(x, s).iter() {
                    next[z] = true;
                }
            }
        }
        let reached: Vec<Elem> = (0..a.n()).filter(|&z| next[z]).collect();
        let mut grew = false;
        for &z in &reached {
            if first_seen[z] == usize::MAX {
                first_seen[z] = k;
                grew = true;
            }
        }
        if reached == frontier && !grew {
            break;
        }
        frontier = reached;
        if k > a.n() + 2 {
            break;
        }
    }
    first_seen.into_iter().filter(|&v| v != usize::MAX).max().unwrap_or(0)
}
