//! Ideals, prime spectra, radicals and saturations.

use std::sync::Arc;

use crate::budget::Budget;
use crate::builders::krasner;
use crate::error::{ensure, violation, Error, Result};
use crate::morphism::{enumerate_morphisms_unchecked, Morphism};
use crate::multiring::{weak_units, Elem, Multiring};
use crate::subset::Subset;

/// Carrier size up to which primes are found by scanning every subset.
const SCAN_LIMIT: usize = 16;

pub fn is_prime_ideal(a: &Multiring, p: &Subset) -> bool {
    a.is_ideal(p)
        && !p.contains(a.one())
        && a.elements()
            .all(|x| p.contains(x) || a.elements().all(|y| p.contains(y) || !p.contains(a.mul(x, y))))
}

/// Maximal among proper ideals: adding any outside element generates `A`.
pub fn is_maximal(a: &Multiring, ideal: &Subset) -> bool {
    a.is_ideal(ideal)
        && !ideal.contains(a.one())
        && a.elements().filter(|&x| !ideal.contains(x)).all(|x| {
            let mut bigger = ideal.clone();
            bigger.insert(x);
            a.ideal_generated(&bigger).contains(a.one())
        })
}

fn primes_by_scan(a: &Multiring) -> Vec<Subset> {
    let n = a.n();
    let mut out = Vec::new();
    if a.is_zero_ring() {
        return out;
    }
    for mask in 0u64..(1u64 << n) {
        let s = Subset::from_mask(n, mask);
        if s.contains(a.zero()) && is_prime_ideal(a, &s) {
            out.push(s);
        }
    }
    out
}

/// Closes `inside` to an ideal and `outside` to a saturated multiplicative
/// set; `None` when they meet.
fn propagate_prime(a: &Multiring, inside: &Subset, outside: &Subset) -> Option<(Subset, Subset)> {
    let mut inside = inside.clone();
    let mut outside = outside.clone();
    loop {
        let new_in = a.ideal_generated(&inside);
        let mut new_out = a.multiplicative_closure(&outside);
        for x in a.elements() {
            for y in a.elements() {
                if new_out.contains(a.mul(x, y)) {
                    new_out.insert(x);
                    new_out.insert(y);
                }
            }
        }
        if new_in.intersects(&new_out) {
            return None;
        }
        if new_in == inside && new_out == outside {
            return Some((inside, outside));
        }
        inside = new_in;
        outside = new_out;
    }
}

fn primes_by_search(a: &Multiring) -> Vec<Subset> {
    fn go(a: &Multiring, inside: Subset, outside: Subset, out: &mut Vec<Subset>) {
        let Some((inside, outside)) = propagate_prime(a, &inside, &outside) else {
            return;
        };
        let decided = inside.union(&outside);
        match decided.complement().first() {
            None => out.push(inside),
            Some(x) => {
                let mut with = inside.clone();
                with.insert(x);
                go(a, with, outside.clone(), out);
                let mut without = outside;
                without.insert(x);
                go(a, inside, without, out);
            }
        }
    }
    let mut out = Vec::new();
    if !a.is_zero_ring() {
        go(a, a.singleton(a.zero()), a.singleton(a.one()), &mut out);
    }
    out.sort();
    out
}

/// Kernels of the morphisms into the Krasner hyperfield.
pub fn primes_from_krasner(a: &Arc<Multiring>, budget: &Budget) -> Result<Vec<Subset>> {
    let k = Arc::new(krasner());
    let mut kernels: Vec<Subset> = enumerate_morphisms_unchecked(a, &k, budget)?
        .iter()
        .map(Morphism::kernel)
        .collect();
    kernels.sort();
    Ok(kernels)
}

/// All prime ideals, sorted by bitset value.
///
/// Small carriers are scanned exhaustively, larger ones searched with
/// ideal/multiplicative-set propagation. The result is cross-checked
/// against kernels of morphisms into `K` and memoised on the multiring.
pub fn spec(a: &Arc<Multiring>) -> Result<Arc<Vec<Subset>>> {
    if let Some(cached) = a.prime_cache().get() {
        return Ok(cached.clone());
    }
    let primes = if a.n() <= SCAN_LIMIT {
        primes_by_scan(a)
    } else {
        primes_by_search(a)
    };
    let kernels = primes_from_krasner(a, &Budget::default())?;
    ensure!(
        kernels == primes,
        "spec({}) has {} primes but {} kernels of maps to K",
        a.name(),
        primes.len(),
        kernels.len()
    );
    Ok(a.prime_cache().get_or_init(|| Arc::new(primes)).clone())
}

/// Both prime enumeration routes, for cross-checking. The exhaustive scan
/// is `None` on carriers too large to scan.
pub fn spec_by_both_routes(a: &Multiring) -> (Option<Vec<Subset>>, Vec<Subset>) {
    let scan = (a.n() <= SCAN_LIMIT).then(|| {
        let mut scan = primes_by_scan(a);
        scan.sort();
        scan
    });
    (scan, primes_by_search(a))
}

/// `D(a)` as a set of indices into `spec(A)`.
pub fn basic_open(a: &Arc<Multiring>, x: Elem) -> Result<Subset> {
    let primes = spec(a)?;
    Ok(Subset::from_indices(
        primes.len(),
        primes
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.contains(x))
            .map(|(i, _)| i),
    ))
}

/// Closure of the point `p` in the Zariski topology: the primes containing it.
pub fn point_closure(primes: &[Subset], k: usize) -> Subset {
    Subset::from_indices(
        primes.len(),
        primes
            .iter()
            .enumerate()
            .filter(|(_, q)| primes[k].is_subset(q))
            .map(|(i, _)| i),
    )
}

/// Every ideal, found by closing under one extra generator at a time.
pub fn all_ideals(a: &Multiring, cap: usize) -> Result<Vec<Subset>> {
    let mut seen = vec![a.ideal_generated(&a.empty_set())];
    let mut k = 0;
    while k < seen.len() {
        let current = seen[k].clone();
        for x in a.elements().filter(|&x| !current.contains(x)) {
            let mut g = current.clone();
            g.insert(x);
            let next = a.ideal_generated(&g);
            if !seen.contains(&next) {
                if seen.len() >= cap {
                    return Err(Error::BudgetExceeded {
                        what: format!("ideals of {}", a.name()),
                        detail: format!("more than {cap}"),
                    });
                }
                seen.push(next);
            }
        }
        k += 1;
    }
    seen.sort();
    Ok(seen)
}

pub fn maximal_ideals(a: &Multiring, cap: usize) -> Result<Vec<Subset>> {
    Ok(all_ideals(a, cap)?.into_iter().filter(|i| is_maximal(a, i)).collect())
}

/// `{x : xⁿ ∈ I for some n ≥ 1}`.
pub fn radical_by_powers(a: &Multiring, ideal: &Subset) -> Subset {
    a.set_of(a.elements().filter(|&x| {
        let mut p = x;
        for _ in 0..=a.n() {
            if ideal.contains(p) {
                return true;
            }
            p = a.mul(p, x);
        }
        false
    }))
}

/// Intersection of the primes containing `I`.
pub fn radical_by_primes(a: &Arc<Multiring>, ideal: &Subset) -> Result<Subset> {
    let mut out = a.full_set();
    for p in spec(a)?.iter().filter(|p| ideal.is_subset(p)) {
        out.intersect_with(p);
    }
    Ok(out)
}

/// The radical of an ideal, computed both ways and compared.
pub fn radical(a: &Arc<Multiring>, ideal: &Subset) -> Result<Subset> {
    if !a.is_ideal(ideal) {
        return Err(Error::NotAnIdeal(a.show_set(ideal)));
    }
    let by_powers = radical_by_powers(a, ideal);
    let by_primes = radical_by_primes(a, ideal)?;
    ensure!(
        by_powers == by_primes,
        "radical of {} in {}: powers give {}, primes give {}",
        a.show_set(ideal),
        a.name(),
        a.show_set(&by_powers),
        a.show_set(&by_primes)
    );
    Ok(by_powers)
}

/// `{x : aⁿ ∈ (x) for some n ≥ 0}`, with `a⁰ = 1`.
pub fn saturation_by_powers(a: &Multiring, x: Elem) -> Subset {
    let mut powers = a.empty_set();
    let mut p = a.one();
    for _ in 0..=a.n() {
        powers.insert(p);
        p = a.mul(p, x);
    }
    a.set_of(a.elements().filter(|&y| a.principal_ideal(y).intersects(&powers)))
}

/// Intersection of the complements of primes avoiding `x`.
pub fn saturation_by_primes(a: &Arc<Multiring>, x: Elem) -> Result<Subset> {
    let mut out = a.full_set();
    for p in spec(a)?.iter().filter(|p| !p.contains(x)) {
        out.difference_with(p);
    }
    Ok(out)
}

/// The saturation `S_a`, computed both ways and compared.
pub fn saturation(a: &Arc<Multiring>, x: Elem) -> Result<Subset> {
    let by_powers = saturation_by_powers(a, x);
    let by_primes = saturation_by_primes(a, x)?;
    ensure!(
        by_powers == by_primes,
        "S_{} in {}: powers give {}, primes give {}",
        a.elem_name(x),
        a.name(),
        a.show_set(&by_powers),
        a.show_set(&by_primes)
    );
    if x == a.one() {
        ensure!(
            by_powers == weak_units(a),
            "S_1 differs from the weak units in {}",
            a.name()
        );
    }
    Ok(by_powers)
}

/// `p ↦ f⁻¹(p)` from `spec(B)` to `spec(A)`, as indices.
///
/// Also confirms that the preimage of `D(a)` is `D(f(a))` for every `a`.
pub fn spectral_map(f: &Morphism) -> Result<Vec<usize>> {
    let dom_primes = spec(f.dom())?;
    let cod_primes = spec(f.cod())?;
    let mut out = Vec::with_capacity(cod_primes.len());
    for p in cod_primes.iter() {
        let q = f.preimage(p);
        let k = dom_primes
            .iter()
            .position(|r| *r == q)
            .ok_or_else(|| violation!("preimage {} of a prime is not prime", f.dom().show_set(&q)))?;
        out.push(k);
    }
    for x in f.dom().elements() {
        let d_dom = basic_open(f.dom(), x)?;
        let d_cod = basic_open(f.cod(), f.apply(x))?;
        for (j, &k) in out.iter().enumerate() {
            ensure!(
                d_dom.contains(k) == d_cod.contains(j),
                "preimage of D({}) is not D(f({}))",
                f.dom().elem_name(x),
                f.dom().elem_name(x)
            );
        }
    }
    Ok(out)
}

/// The characteristic map of a prime into `K`.
pub fn prime_character(a: &Arc<Multiring>, p: &Subset) -> Result<Morphism> {
    let k = Arc::new(krasner());
    let map = a.elements().map(|x| usize::from(!p.contains(x))).collect();
    Morphism::new(a.clone(), k, map)
}
