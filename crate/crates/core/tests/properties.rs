//! Invariants over the small instances, driven by random subsets and
//! elements.

mod common;

use std::sync::Arc;

use common::*;
use hyperring_core::builders::{krasner, power, product, sign3, zmod};
use hyperring_core::constructions::{cancellative_closure, localize, marshall_quotient, quotient_by_ideal};
use hyperring_core::morphism::{enumerate_morphisms, find_isomorphism};
use hyperring_core::multiring::{is_hyperring, units, weak_units};
use hyperring_core::realspec::{is_rrm, pythagoras_number, separation_failure};
use hyperring_core::spectra::{basic_open, radical_by_powers, radical_by_primes, spec, spectral_map};
use hyperring_core::vonneumann::{frame_compatibility_failure, idempotent_frame, is_vnh};
use hyperring_core::{Budget, Multiring, Subset};
use proptest::prelude::*;

fn pool() -> Vec<Arc<Multiring>> {
    let mut out: Vec<Arc<Multiring>> = instances().into_iter().map(|(_, a)| a).collect();
    let k = arc(krasner());
    let s = arc(sign3());
    out.push(product(&[k, s]).unwrap().result().clone());
    out
}

fn subset_of(a: &Multiring, mask: u64) -> Subset {
    a.set_of(a.elements().filter(|&x| mask >> (x % 64) & 1 == 1))
}

fn image_of_spectral_map(f: &hyperring_core::Morphism) -> Vec<usize> {
    let mut v = spectral_map(f).unwrap();
    v.sort_unstable();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn negation_is_an_involution_compatible_with_sums(i in 0usize..64) {
        let all = pool();
        let a = &all[i % all.len()];
        prop_assert_eq!(a.neg(a.zero()), a.zero());
        for x in a.elements() {
            prop_assert_eq!(a.neg(a.neg(x)), x);
            for y in a.elements() {
                for z in a.elements() {
                    prop_assert_eq!(
                        a.add(y, z).contains(x),
                        a.add(a.neg(y), a.neg(z)).contains(a.neg(x))
                    );
                }
            }
        }
    }

    #[test]
    fn generated_ideal_is_least(i in 0usize..64, mask in any::<u64>()) {
        let all = pool();
        let a = &all[i % all.len()];
        let xs = subset_of(a, mask);
        let ideal = a.ideal_generated(&xs);
        prop_assert!(a.is_ideal(&ideal));
        prop_assert!(xs.is_subset(&ideal));
        for other in hyperring_core::spectra::all_ideals(a, 1 << 16).unwrap() {
            if xs.is_subset(&other) {
                prop_assert!(ideal.is_subset(&other));
            }
        }
    }

    #[test]
    fn prime_avoidance(i in 0usize..64, m1 in any::<u64>(), m2 in any::<u64>()) {
        let all = pool();
        let a = &all[i % all.len()];
        let ideal = a.ideal_generated(&subset_of(a, m1));
        let s = a.multiplicative_closure(&subset_of(a, m2));
        if !ideal.intersects(&s) {
            let primes = spec(a).unwrap();
            prop_assert!(primes.iter().any(|p| ideal.is_subset(p) && !p.intersects(&s)));
        }
    }

    #[test]
    fn basic_opens_intersect_multiplicatively(i in 0usize..64, x in 0usize..64, y in 0usize..64) {
        let all = pool();
        let a = &all[i % all.len()];
        let (x, y) = (x % a.n(), y % a.n());
        let lhs = basic_open(a, x).unwrap().intersection(&basic_open(a, y).unwrap());
        prop_assert_eq!(lhs, basic_open(a, a.mul(x, y)).unwrap());
    }

    #[test]
    fn radical_routes_agree(i in 0usize..64, mask in any::<u64>()) {
        let all = pool();
        let a = &all[i % all.len()];
        let ideal = a.ideal_generated(&subset_of(a, mask));
        prop_assert_eq!(radical_by_powers(a, &ideal), radical_by_primes(a, &ideal).unwrap());
    }

    #[test]
    fn constructions_have_the_expected_spectra(i in 0usize..64, m1 in any::<u64>(), m2 in any::<u64>()) {
        let all = pool();
        let a = &all[i % all.len()];
        let primes = spec(a).unwrap();
        let ideal = a.ideal_generated(&subset_of(a, m1));
        let s = a.multiplicative_closure(&subset_of(a, m2));
        let above: Vec<usize> = (0..primes.len()).filter(|&k| ideal.is_subset(&primes[k])).collect();
        let avoiding: Vec<usize> = (0..primes.len()).filter(|&k| !primes[k].intersects(&s)).collect();

        let q = quotient_by_ideal(a, &ideal).unwrap();
        prop_assert_eq!(image_of_spectral_map(q.canonical()), above);
        let l = localize(a, &s).unwrap();
        prop_assert_eq!(image_of_spectral_map(l.canonical()), avoiding.clone());
        let m = marshall_quotient(a, &s).unwrap();
        prop_assert_eq!(image_of_spectral_map(m.canonical()), avoiding);

        if is_hyperring(a) {
            prop_assert!(is_hyperring(q.result()));
            prop_assert!(is_hyperring(l.result()));
            prop_assert!(is_hyperring(m.result()));
        }
    }

    #[test]
    fn cancellative_closure_gives_same_marshall_quotient(i in 0usize..64, mask in any::<u64>()) {
        let all = pool();
        let a = &all[i % all.len()];
        let s = a.multiplicative_closure(&subset_of(a, mask));
        let closed = cancellative_closure(a, &s).unwrap();
        prop_assert!(s.is_subset(&closed));
        let m1 = marshall_quotient(a, &s).unwrap();
        let m2 = marshall_quotient(a, &closed).unwrap();
        prop_assert_eq!(m1.canonical().map(), m2.canonical().map());
        prop_assert!(m1.result().same_tables(m2.result()));
    }

    #[test]
    fn isomorphism_is_symmetric(i in 0usize..64, j in 0usize..64) {
        let all = pool();
        let (a, b) = (&all[i % all.len()], &all[j % all.len()]);
        let budget = Budget::default();
        prop_assert_eq!(
            find_isomorphism(a, b, &budget).unwrap().is_some(),
            find_isomorphism(b, a, &budget).unwrap().is_some()
        );
    }
}

#[test]
fn hyperrings_have_equal_unit_groups() {
    for a in pool() {
        assert!(units(&a).is_subset(&weak_units(&a)));
        if is_hyperring(&a) {
            assert_eq!(units(&a), weak_units(&a), "{}", a.name());
        }
    }
}

#[test]
fn krasner_points_are_primes() {
    let k = arc(krasner());
    let b = Budget::default();
    for a in pool() {
        let mut kernels: Vec<Subset> = enumerate_morphisms(&a, &k, &b)
            .unwrap()
            .iter()
            .map(|f| f.kernel())
            .collect();
        kernels.sort_by_key(|s| s.to_vec());
        let mut primes: Vec<Subset> = spec(&a).unwrap().iter().cloned().collect();
        primes.sort_by_key(|s| s.to_vec());
        assert_eq!(kernels, primes, "{}", a.name());
    }
}

#[test]
fn products_take_maximal_pythagoras_number() {
    let all = pool();
    for a in all.iter().filter(|a| a.n() <= 5) {
        for b in all.iter().filter(|b| b.n() <= 5) {
            let p = product(&[a.clone(), b.clone()]).unwrap();
            let expected = pythagoras_number(a).value.max(pythagoras_number(b).value);
            assert_eq!(pythagoras_number(p.result()).value, expected);
            if is_hyperring(a) && is_hyperring(b) {
                assert!(is_hyperring(p.result()));
            }
        }
    }
}

#[test]
fn real_reduced_instances_separate_points() {
    let b = Budget::default();
    let s = arc(sign3());
    for a in [
        s.clone(),
        power(&s, 2).unwrap().result().clone(),
        power(&s, 3).unwrap().result().clone(),
    ] {
        assert!(is_rrm(&a));
        assert_eq!(separation_failure(&a, &b).unwrap(), None);
    }
}

#[test]
fn morphisms_commute_with_idempotent_operators() {
    let b = Budget::default();
    let vnh: Vec<_> = pool()
        .into_iter()
        .filter(|a| is_hyperring(a) && is_vnh(a).unwrap() && a.n() <= 9)
        .collect();
    assert!(vnh.len() >= 6);
    for a in &vnh {
        let fa = idempotent_frame(a).unwrap();
        for c in &vnh {
            let fc = idempotent_frame(c).unwrap();
            for f in enumerate_morphisms(a, c, &b).unwrap() {
                assert_eq!(frame_compatibility_failure(&f, &fa, &fc), None, "{}", f.show());
            }
        }
    }
}

#[test]
fn ring_spectra_are_the_classical_ones() {
    let z12 = arc(zmod(12));
    let primes: Vec<Vec<usize>> = spec(&z12).unwrap().iter().map(|p| p.to_vec()).collect();
    assert_eq!(primes, vec![vec![0, 3, 6, 9], vec![0, 2, 4, 6, 8, 10]]);
}
