//! Morphisms, factorisation through surjections, and backtracking search.

use std::fmt;
use std::sync::Arc;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::multiring::{units, Elem, Multiring};
use crate::subset::Subset;

/// An element map between two multirings.
#[derive(Clone)]
pub struct Morphism {
    dom: Arc<Multiring>,
    cod: Arc<Multiring>,
    map: Vec<Elem>,
}

/// The first morphism clause a map breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismFailure {
    Zero,
    One,
    Neg(Elem),
    Mul(Elem, Elem),
    /// `a ∈ b + c` but `f(a) ∉ f(b) + f(c)`.
    Sum(Elem, Elem, Elem),
}

impl fmt::Display for MorphismFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismFailure::Zero => write!(f, "f(0) ≠ 0"),
            MorphismFailure::One => write!(f, "f(1) ≠ 1"),
            MorphismFailure::Neg(a) => write!(f, "f(-a) ≠ -f(a) at {a}"),
            MorphismFailure::Mul(a, b) => write!(f, "f(ab) ≠ f(a)f(b) at ({a},{b})"),
            MorphismFailure::Sum(a, b, c) => write!(f, "sum ({a} ∈ {b}+{c}) not preserved"),
        }
    }
}

/// Checks the morphism clauses for `map: dom → cod`.
pub fn validate_morphism(
    dom: &Multiring,
    cod: &Multiring,
    map: &[Elem],
) -> Result<std::result::Result<(), MorphismFailure>> {
    if map.len() != dom.n() {
        return Err(Error::LengthMismatch(format!(
            "map has {} entries, domain has {}",
            map.len(),
            dom.n()
        )));
    }
    if let Some(&y) = map.iter().find(|&&y| y >= cod.n()) {
        return Err(Error::LengthMismatch(format!("image {y} outside codomain")));
    }
    Ok(first_failure(dom, cod, map))
}

fn first_failure(dom: &Multiring, cod: &Multiring, f: &[Elem]) -> std::result::Result<(), MorphismFailure> {
    if f[dom.zero()] != cod.zero() {
        return Err(MorphismFailure::Zero);
    }
    if f[dom.one()] != cod.one() {
        return Err(MorphismFailure::One);
    }
    for a in dom.elements() {
        if f[dom.neg(a)] != cod.neg(f[a]) {
            return Err(MorphismFailure::Neg(a));
        }
    }
    for a in dom.elements() {
        for b in dom.elements() {
            if f[dom.mul(a, b)] != cod.mul(f[a], f[b]) {
                return Err(MorphismFailure::Mul(a, b));
            }
        }
    }
    for b in dom.elements() {
        for c in dom.elements() {
            let target = cod.add(f[b], f[c]);
            for a in dom.add(b, c) {
                if !target.contains(f[a]) {
                    return Err(MorphismFailure::Sum(a, b, c));
                }
            }
        }
    }
    Ok(())
}

impl Morphism {
    /// Checks the clauses and builds the morphism.
    pub fn new(dom: Arc<Multiring>, cod: Arc<Multiring>, map: Vec<Elem>) -> Result<Morphism> {
        match validate_morphism(&dom, &cod, &map)? {
            Ok(()) => Ok(Morphism { dom, cod, map }),
            Err(why) => Err(Error::NotAMorphism(format!("{} → {}: {why}", dom.name(), cod.name()))),
        }
    }

    /// For maps whose validity follows from how they were built.
    pub(crate) fn trusted(dom: Arc<Multiring>, cod: Arc<Multiring>, map: Vec<Elem>) -> Morphism {
        debug_assert_eq!(
            first_failure(&dom, &cod, &map),
            Ok(()),
            "{} → {}",
            dom.name(),
            cod.name()
        );
        Morphism { dom, cod, map }
    }

    pub fn identity(a: &Arc<Multiring>) -> Morphism {
        Morphism {
            dom: a.clone(),
            cod: a.clone(),
            map: a.elements().collect(),
        }
    }

    pub fn dom(&self) -> &Arc<Multiring> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Multiring> {
        &self.cod
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.map[a]
    }

    pub fn image_of(&self, xs: &Subset) -> Subset {
        self.cod.set_of(xs.iter().map(|x| self.map[x]))
    }

    pub fn preimage(&self, ys: &Subset) -> Subset {
        self.dom
            .set_of(self.dom.elements().filter(|&x| ys.contains(self.map[x])))
    }

    pub fn kernel(&self) -> Subset {
        self.preimage(&self.cod.singleton(self.cod.zero()))
    }

    pub fn image(&self) -> Subset {
        self.image_of(&self.dom.full_set())
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.dom.n()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().is_full()
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.n() == self.cod.n() && self.is_surjective()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Morphism) -> Result<Morphism> {
        if !same_object(&self.cod, &next.dom) {
            return Err(Error::LengthMismatch(format!(
                "cannot compose {} → {} with {} → {}",
                self.dom.name(),
                self.cod.name(),
                next.dom.name(),
                next.cod.name()
            )));
        }
        Ok(Morphism {
            dom: self.dom.clone(),
            cod: next.cod.clone(),
            map: self.map.iter().map(|&x| next.map[x]).collect(),
        })
    }

    /// `b ∈ c + d` whenever `f(b) ∈ f(c) + f(d)`.
    pub fn reflects_sums(&self) -> bool {
        let (a, b) = (&self.dom, &self.cod);
        a.elements().all(|x| {
            a.elements().all(|y| {
                a.elements()
                    .all(|z| !b.add(self.map[y], self.map[z]).contains(self.map[x]) || a.add(y, z).contains(x))
            })
        })
    }

    /// Bijective and sum-reflecting, so the inverse is a morphism too.
    pub fn is_isomorphism(&self) -> bool {
        self.is_bijective() && self.reflects_sums()
    }

    pub fn inverse(&self) -> Option<Morphism> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut inv = vec![0; self.cod.n()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Some(Morphism::trusted(self.cod.clone(), self.dom.clone(), inv))
    }

    pub fn same_map(&self, other: &Morphism) -> bool {
        self.map == other.map
    }

    pub fn is_identity(&self) -> bool {
        same_object(&self.dom, &self.cod) && self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Renders the map with element names.
    pub fn show(&self) -> String {
        self.dom
            .elements()
            .map(|x| format!("{}->{}", self.dom.elem_name(x), self.cod.elem_name(self.map[x])))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {}: {}", self.dom.name(), self.cod.name(), self.show())
    }
}

/// Two handles refer to the same multiring, by pointer or by tables.
pub fn same_object(a: &Arc<Multiring>, b: &Arc<Multiring>) -> bool {
    Arc::ptr_eq(a, b) || a.same_tables(b)
}

/// Given a surjection `p: A → B` and `f: A → C`, returns the unique
/// `g: B → C` with `g ∘ p = f`.
///
/// Fails with `NotWellDefined` if `f` is not constant on the fibres of `p`,
/// and with `NotAMorphism` if the induced map breaks a morphism clause.
pub fn factor_through(p: &Morphism, f: &Morphism) -> Result<Morphism> {
    if !same_object(p.dom(), f.dom()) {
        return Err(Error::LengthMismatch(format!(
            "factorisation needs a common domain, got {} and {}",
            p.dom().name(),
            f.dom().name()
        )));
    }
    let mut g: Vec<Option<Elem>> = vec![None; p.cod().n()];
    for a in p.dom().elements() {
        let b = p.apply(a);
        match g[b] {
            None => g[b] = Some(f.apply(a)),
            Some(y) if y == f.apply(a) => {}
            Some(y) => {
                return Err(Error::NotWellDefined(format!(
                    "{} is sent to both {} and {}",
                    p.cod().elem_name(b),
                    f.cod().elem_name(y),
                    f.cod().elem_name(f.apply(a))
                )))
            }
        }
    }
    let map: Option<Vec<Elem>> = g.into_iter().collect();
    let map =
        map.ok_or_else(|| Error::NotWellDefined(format!("{} → {} is not surjective", p.dom().name(), p.cod().name())))?;
    Morphism::new(p.cod().clone(), f.cod().clone(), map)
}

/// The canonical map between two quotients `p: A → B`, `q: A → C` of the
/// same multiring, required to be an isomorphism.
pub fn canonical_isomorphism(p: &Morphism, q: &Morphism) -> Result<Morphism> {
    let g = factor_through(p, q)?;
    if !g.is_isomorphism() {
        return Err(Error::TheoremViolation(format!(
            "canonical map {} → {} is not an isomorphism",
            g.dom().name(),
            g.cod().name()
        )));
    }
    Ok(g)
}

const UNSET: Elem = usize::MAX;

/// Per-element invariants preserved by isomorphisms, used to prune search.
fn element_signature(a: &Multiring, x: Elem, unit_set: &Subset) -> Vec<usize> {
    let mut powers = vec![x];
    let mut p = x;
    loop {
        p = a.mul(p, x);
        if let Some(k) = powers.iter().position(|&q| q == p) {
            powers.push(k);
            break;
        }
        powers.push(p);
    }
    let order = powers.len();
    let tail = *powers.last().unwrap_or(&0);
    let annihilator = a.elements().filter(|&y| a.mul(x, y) == a.zero()).count();
    let roots = a.elements().filter(|&y| a.mul(y, y) == x).count();
    let halves = a.elements().filter(|&y| a.add(y, y).contains(x)).count();
    let mut sum_sizes: Vec<usize> = a.elements().map(|y| a.add(x, y).len()).collect();
    sum_sizes.sort_unstable();
    let mut sig = vec![
        order,
        tail,
        usize::from(a.is_idempotent(x)),
        usize::from(unit_set.contains(x)),
        usize::from(a.neg(x) == x),
        annihilator,
        roots,
        halves,
        a.add(x, x).len(),
        a.add(x, a.neg(x)).len(),
    ];
    sig.extend(sum_sizes);
    sig
}

struct Search<'s> {
    a: &'s Multiring,
    b: &'s Multiring,
    assign: Vec<Elem>,
    trail: Vec<Elem>,
    used: Vec<bool>,
    injective: bool,
    allowed: Vec<Subset>,
    nodes: u64,
    limit: u64,
    found: Vec<Vec<Elem>>,
    stop_at_first: bool,
}

impl<'s> Search<'s> {
    fn check_triple(&self, c: Elem, x: Elem, y: Elem) -> bool {
        let inside = self.a.add(x, y).contains(c);
        let image = self.b.add(self.assign[x], self.assign[y]).contains(self.assign[c]);
        if inside && !image {
            return false;
        }
        !(self.injective && image && !inside)
    }

    /// Assigns `x ↦ y` and propagates forced values; false on conflict.
    fn set(&mut self, x: Elem, y: Elem) -> bool {
        let current = self.assign[x];
        if current != UNSET {
            return current == y;
        }
        if !self.allowed[x].contains(y) || (self.injective && self.used[y]) {
            return false;
        }
        self.assign[x] = y;
        self.trail.push(x);
        if self.injective {
            self.used[y] = true;
        }
        let assigned: Vec<Elem> = self.trail.clone();
        for &z in &assigned {
            for &w in &assigned {
                if !self.check_triple(x, z, w) || !self.check_triple(z, x, w) {
                    return false;
                }
            }
        }
        if !self.set(self.a.neg(x), self.b.neg(y)) {
            return false;
        }
        for z in assigned {
            let fz = self.assign[z];
            if !self.set(self.a.mul(x, z), self.b.mul(y, fz)) {
                return false;
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let x = self.trail.pop().expect("trail underflow");
            if self.injective {
                self.used[self.assign[x]] = false;
            }
            self.assign[x] = UNSET;
        }
    }

    fn run(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::BudgetExceeded {
                what: format!("morphism search {} → {}", self.a.name(), self.b.name()),
                detail: format!("more than {} nodes", self.limit),
            });
        }
        let Some(x) = self.assign.iter().position(|&v| v == UNSET) else {
            self.found.push(self.assign.clone());
            return Ok(());
        };
        let candidates: Vec<Elem> = self.allowed[x].to_vec();
        for y in candidates {
            let mark = self.trail.len();
            if self.set(x, y) {
                self.run()?;
                if self.stop_at_first && !self.found.is_empty() {
                    return Ok(());
                }
            }
            self.undo(mark);
        }
        Ok(())
    }
}

fn search(
    a: &Multiring,
    b: &Multiring,
    injective: bool,
    fixed: &[(Elem, Elem)],
    budget: &Budget,
    stop_at_first: bool,
) -> Result<Vec<Vec<Elem>>> {
    let mut allowed: Vec<Subset> = vec![b.full_set(); a.n()];
    let (ua, ub) = (units(a), units(b));
    let ida = a.idempotents();
    let idb = b.idempotents();
    for x in a.elements() {
        if ua.contains(x) {
            allowed[x].intersect_with(&ub);
        }
        if ida.contains(x) {
            allowed[x].intersect_with(&idb);
        }
    }
    if injective {
        let sb: Vec<Vec<usize>> = b.elements().map(|y| element_signature(b, y, &ub)).collect();
        for x in a.elements() {
            let sx = element_signature(a, x, &ua);
            for y in b.elements() {
                if sb[y] != sx {
                    allowed[x].remove(y);
                }
            }
        }
    }
    let mut s = Search {
        a,
        b,
        assign: vec![UNSET; a.n()],
        trail: Vec::new(),
        used: vec![false; b.n()],
        injective,
        allowed,
        nodes: 0,
        limit: budget.nodes,
        found: Vec::new(),
        stop_at_first,
    };
    let mut ok = s.set(a.zero(), b.zero()) && s.set(a.one(), b.one());
    for &(x, y) in fixed {
        ok = ok && s.set(x, y);
    }
    if ok {
        s.run()?;
    }
    let mut found = s.found;
    found.sort();
    Ok(found)
}

/// All morphisms `A → B`, in lexicographic order of their maps.
pub fn enumerate_morphisms(a: &Arc<Multiring>, b: &Arc<Multiring>, budget: &Budget) -> Result<Vec<Morphism>> {
    budget.check_search("morphism enumeration", a.n(), b.n())?;
    enumerate_morphisms_unchecked(a, b, budget)
}

/// Same as [`enumerate_morphisms`] without the size gate; only the node
/// limit applies. Used for targets with very few elements.
pub(crate) fn enumerate_morphisms_unchecked(
    a: &Arc<Multiring>,
    b: &Arc<Multiring>,
    budget: &Budget,
) -> Result<Vec<Morphism>> {
    Ok(search(a, b, false, &[], budget, false)?
        .into_iter()
        .map(|m| Morphism::trusted(a.clone(), b.clone(), m))
        .collect())
}

/// Morphisms `A → B` agreeing with the given partial assignment.
///
/// Prescribed values make the search small, so only the node limit applies.
pub fn enumerate_extensions(
    a: &Arc<Multiring>,
    b: &Arc<Multiring>,
    fixed: &[(Elem, Elem)],
    budget: &Budget,
) -> Result<Vec<Morphism>> {
    Ok(search(a, b, false, fixed, budget, false)?
        .into_iter()
        .map(|m| Morphism::trusted(a.clone(), b.clone(), m))
        .collect())
}

/// An isomorphism `A → B`, if one exists. It must reflect sums as well as
/// preserve them.
pub fn find_isomorphism(a: &Arc<Multiring>, b: &Arc<Multiring>, budget: &Budget) -> Result<Option<Morphism>> {
    if a.n() != b.n() {
        return Ok(None);
    }
    budget.check_search("isomorphism search", a.n(), b.n())?;
    let found = search(a, b, true, &[], budget, true)?;
    Ok(found.into_iter().next().map(|m| {
        let f = Morphism::trusted(a.clone(), b.clone(), m);
        debug_assert!(f.is_isomorphism());
        f
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{krasner, sign3, zmod};

    #[test]
    fn identity_is_only_endomorphism_of_sign() {
        let s = Arc::new(sign3());
        let all = enumerate_morphisms(&s, &s, &Budget::default()).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].is_identity());
    }

    /// Every map sending 0 to 0 and 1 to 1, filtered by the morphism clauses.
    fn brute_force(a: &Multiring, b: &Multiring) -> Vec<Vec<Elem>> {
        let mut out = Vec::new();
        let total = b.n().pow(a.n() as u32);
        for code in 0..total {
            let map: Vec<Elem> = (0..a.n()).map(|i| code / b.n().pow(i as u32) % b.n()).collect();
            if first_failure(a, b, &map).is_ok() {
                out.push(map);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn krasner_has_no_map_into_sign() {
        // 0 ∈ 1 + 1 in K would need 0 ∈ 1 + 1 = {1} in 3.
        let k = Arc::new(krasner());
        let s = Arc::new(sign3());
        assert!(brute_force(&k, &s).is_empty());
        assert!(enumerate_morphisms(&k, &s, &Budget::default()).unwrap().is_empty());
        let back = enumerate_morphisms(&s, &k, &Budget::default()).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].map(), &[0, 1, 1]);
    }

    #[test]
    fn search_matches_brute_force() {
        let cases = [
            (zmod(4), zmod(2)),
            (zmod(6), zmod(3)),
            (zmod(6), krasner()),
            (sign3(), sign3()),
            (zmod(5), sign3()),
        ];
        for (a, b) in cases {
            let expected = brute_force(&a, &b);
            let (a, b) = (Arc::new(a), Arc::new(b));
            let got: Vec<Vec<Elem>> = enumerate_morphisms(&a, &b, &Budget::default())
                .unwrap()
                .iter()
                .map(|f| f.map().to_vec())
                .collect();
            assert_eq!(got, expected, "{} -> {}", a.name(), b.name());
        }
    }

    #[test]
    fn budget_gate_on_size() {
        let a = Arc::new(zmod(12));
        let b = Arc::new(zmod(13));
        let err = enumerate_morphisms(&a, &b, &Budget::default()).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn factor_rejects_non_constant_fibres() {
        let z4 = Arc::new(zmod(4));
        let z2 = Arc::new(zmod(2));
        let p = Morphism::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let id = Morphism::identity(&z4);
        assert!(matches!(factor_through(&p, &id), Err(Error::NotWellDefined(_))));
        let g = factor_through(&p, &p).unwrap();
        assert!(g.is_identity());
    }
}
