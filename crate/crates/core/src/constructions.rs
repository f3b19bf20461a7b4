//! Quotients by ideals, localizations, Marshall quotients and residue
//! hyperfields, each with its canonical map from the source.

use std::sync::Arc;

use crate::budget::Budget;
use crate::error::{ensure, violation, Error, Result};
use crate::morphism::{canonical_isomorphism, enumerate_morphisms, factor_through, Morphism};
use crate::multiring::{classify, Elem, Multiring};
use crate::spectra::{is_maximal, is_prime_ideal, spec};
use crate::subset::Subset;

/// A multiring built from `source` together with the canonical surjection
/// `source → result`.
#[derive(Debug, Clone)]
pub struct Construction {
    result: Arc<Multiring>,
    canonical: Morphism,
}

impl Construction {
    pub(crate) fn new(result: Arc<Multiring>, canonical: Morphism) -> Construction {
        Construction { result, canonical }
    }

    pub fn source(&self) -> &Arc<Multiring> {
        self.canonical.dom()
    }

    pub fn result(&self) -> &Arc<Multiring> {
        &self.result
    }

    pub fn canonical(&self) -> &Morphism {
        &self.canonical
    }
}

/// Classes of an equivalence relation on `0..n`, numbered by least member.
struct Partition {
    class_of: Vec<usize>,
    reps: Vec<usize>,
}

impl Partition {
    fn len(&self) -> usize {
        self.reps.len()
    }
}

/// Builds the partition and confirms the relation is an equivalence.
fn partition(n: usize, what: &str, related: impl Fn(usize, usize) -> bool) -> Result<Partition> {
    let rows: Vec<Subset> = (0..n)
        .map(|x| Subset::from_indices(n, (0..n).filter(|&y| related(x, y))))
        .collect();
    for (x, row) in rows.iter().enumerate() {
        ensure!(row.contains(x), "{what}: relation is not reflexive at {x}");
        for y in row {
            ensure!(rows[y] == *row, "{what}: relation is not an equivalence at ({x},{y})");
        }
    }
    let mut class_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if class_of[x] == usize::MAX {
            let k = reps.len();
            reps.push(x);
            for y in &rows[x] {
                class_of[y] = k;
            }
        }
    }
    Ok(Partition { class_of, reps })
}

/// Multiplication and negation on classes of elements, confirmed to be
/// independent of representatives.
fn induced_mul_neg(a: &Multiring, part: &Partition, what: &str) -> Result<(Vec<Elem>, Vec<Elem>)> {
    let k = part.len();
    let cls = &part.class_of;
    let mut mul = vec![0; k * k];
    for (i, &x) in part.reps.iter().enumerate() {
        for (j, &y) in part.reps.iter().enumerate() {
            mul[i * k + j] = cls[a.mul(x, y)];
        }
    }
    for x in a.elements() {
        for y in a.elements() {
            ensure!(
                mul[cls[x] * k + cls[y]] == cls[a.mul(x, y)],
                "{what}: product depends on representatives at ({},{})",
                a.elem_name(x),
                a.elem_name(y)
            );
        }
    }
    let neg: Vec<Elem> = part.reps.iter().map(|&x| cls[a.neg(x)]).collect();
    for x in a.elements() {
        ensure!(
            neg[cls[x]] == cls[a.neg(x)],
            "{what}: negation depends on representatives at {}",
            a.elem_name(x)
        );
    }
    Ok((mul, neg))
}

/// Sum relation on classes: `X ∈ Y + Z` when some representatives satisfy it.
fn existential_sums(a: &Multiring, part: &Partition) -> Vec<Subset> {
    let k = part.len();
    let cls = &part.class_of;
    let mut add = vec![Subset::empty(k); k * k];
    for b in a.elements() {
        for c in a.elements() {
            let slot = &mut add[cls[b] * k + cls[c]];
            for x in a.add(b, c) {
                slot.insert(cls[x]);
            }
        }
    }
    add
}

fn assemble(
    a: &Arc<Multiring>,
    name: String,
    part: &Partition,
    add: Vec<Subset>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
) -> Result<Construction> {
    let names = part.reps.iter().map(|&x| format!("[{}]", a.elem_name(x))).collect();
    let cls = &part.class_of;
    let result = Arc::new(Multiring::from_parts(
        name,
        names,
        add,
        mul,
        neg,
        cls[a.zero()],
        cls[a.one()],
    )?);
    let canonical = Morphism::new(a.clone(), result.clone(), cls.clone())?;
    Ok(Construction { result, canonical })
}

/// `A/I` with `a ~ b` iff `(a - b) ∩ I ≠ ∅`.
///
/// Sums are built from representatives (`a' ∈ b' + c'`) and checked against
/// the description `a ∈ b + c + i` for some `i ∈ I` on every triple.
pub fn quotient_by_ideal(a: &Arc<Multiring>, ideal: &Subset) -> Result<Construction> {
    if !a.is_ideal(ideal) {
        return Err(Error::NotAnIdeal(a.show_set(ideal)));
    }
    let what = format!("{}/{}", a.name(), a.show_set(ideal));
    let part = partition(a.n(), &what, |x, y| a.sub(x, y).intersects(ideal))?;
    let add = existential_sums(a, &part);
    let k = part.len();
    let cls = &part.class_of;
    for b in a.elements() {
        for c in a.elements() {
            let shifted = a.add_sets(a.add(b, c), ideal);
            let row = &add[cls[b] * k + cls[c]];
            for x in a.elements() {
                ensure!(
                    shifted.contains(x) == row.contains(cls[x]),
                    "{what}: sum rules disagree at {} ∈ {} + {}",
                    a.elem_name(x),
                    a.elem_name(b),
                    a.elem_name(c)
                );
            }
        }
    }
    let (mul, neg) = induced_mul_neg(a, &part, &what)?;
    let out = assemble(a, what.clone(), &part, add, mul, neg)?;
    ensure!(
        out.canonical.kernel() == *ideal,
        "{what}: kernel of the projection is not the ideal"
    );
    Ok(out)
}

/// `S⁻¹A` on pairs `(a, s)` with `a/s = b/t` iff `atu = bsu` for some `u ∈ S`.
///
/// Sums follow `a/s ∈ b/t + c/u` iff `atuv ∈ bsuv + cstv` for some `v ∈ S`,
/// evaluated on representatives and checked against every other choice of
/// representative in each position.
pub fn localize(a: &Arc<Multiring>, s: &Subset) -> Result<Construction> {
    if !a.is_multiplicative(s) {
        return Err(Error::NotMultiplicative(a.show_set(s)));
    }
    let n = a.n();
    let what = format!("{}[{}⁻¹]", a.name(), a.show_set(s));
    let dens: Vec<Elem> = std::iter::once(a.one())
        .chain(s.iter().filter(|&d| d != a.one()))
        .collect();
    let pair = |k: usize| (k % n, dens[k / n]);
    let count = n * dens.len();
    let m = |x: Elem, y: Elem| a.mul(x, y);
    let part = partition(count, &what, |p, q| {
        let ((x, sx), (y, sy)) = (pair(p), pair(q));
        dens.iter().any(|&u| m(m(x, sy), u) == m(m(y, sx), u))
    })?;
    let k = part.len();
    let cls = &part.class_of;

    let rule = |p: usize, q: usize, r: usize| -> bool {
        let ((x, sx), (y, ty), (z, uz)) = (pair(p), pair(q), pair(r));
        dens.iter().any(|&v| {
            let left = m(m(m(x, ty), uz), v);
            let b = m(m(m(y, sx), uz), v);
            let c = m(m(m(z, sx), ty), v);
            a.add(b, c).contains(left)
        })
    };
    let reps = &part.reps;
    let mut add = vec![Subset::empty(k); k * k];
    for (j, &q) in reps.iter().enumerate() {
        for (l, &r) in reps.iter().enumerate() {
            for (i, &p) in reps.iter().enumerate() {
                if rule(p, q, r) {
                    add[j * k + l].insert(i);
                }
            }
        }
    }
    // Changing one representative at a time covers every choice.
    for i in 0..k {
        for j in 0..k {
            for vary in 0..count {
                let c = cls[vary];
                ensure!(
                    rule(vary, reps[i], reps[j]) == add[i * k + j].contains(c)
                        && rule(reps[i], vary, reps[j]) == add[c * k + j].contains(i)
                        && rule(reps[i], reps[j], vary) == add[j * k + c].contains(i),
                    "{what}: sum depends on representatives"
                );
            }
        }
    }

    let mut mul = vec![0; k * k];
    for (i, &p) in reps.iter().enumerate() {
        for (j, &q) in reps.iter().enumerate() {
            let ((x, sx), (y, ty)) = (pair(p), pair(q));
            mul[i * k + j] = cls[pair_index(&dens, n, m(x, y), m(sx, ty))];
        }
    }
    for p in 0..count {
        for q in 0..count {
            let ((x, sx), (y, ty)) = (pair(p), pair(q));
            ensure!(
                mul[cls[p] * k + cls[q]] == cls[pair_index(&dens, n, m(x, y), m(sx, ty))],
                "{what}: product depends on representatives"
            );
        }
    }
    let neg: Vec<Elem> = reps
        .iter()
        .map(|&p| {
            let (x, sx) = pair(p);
            cls[pair_index(&dens, n, a.neg(x), sx)]
        })
        .collect();
    for p in 0..count {
        let (x, sx) = pair(p);
        ensure!(
            neg[cls[p]] == cls[pair_index(&dens, n, a.neg(x), sx)],
            "{what}: negation depends on representatives"
        );
    }

    let names = reps
        .iter()
        .map(|&p| {
            let (x, d) = pair(p);
            format!("{}/{}", a.elem_name(x), a.elem_name(d))
        })
        .collect();
    let zero = cls[pair_index(&dens, n, a.zero(), a.one())];
    let one = cls[pair_index(&dens, n, a.one(), a.one())];
    let result = Arc::new(Multiring::from_parts(what, names, add, mul, neg, zero, one)?);
    let map = a.elements().map(|x| cls[pair_index(&dens, n, x, a.one())]).collect();
    let canonical = Morphism::new(a.clone(), result.clone(), map)?;
    ensure!(
        (zero == one) == s.contains(a.zero()),
        "{}: zero localization must match 0 ∈ S",
        result.name()
    );
    Ok(Construction { result, canonical })
}

fn pair_index(dens: &[Elem], n: usize, x: Elem, d: Elem) -> usize {
    let j = dens
        .iter()
        .position(|&e| e == d)
        .expect("denominators are closed under multiplication");
    j * n + x
}

/// `A/ₘS` with `a ~ b` iff `as = bt` for some `s, t ∈ S`.
///
/// Sums are built from representatives and checked against the description
/// `as ∈ bt + cu` for some `s, t, u ∈ S`. The image of `S` is `{1}`.
pub fn marshall_quotient(a: &Arc<Multiring>, s: &Subset) -> Result<Construction> {
    if !a.is_multiplicative(s) {
        return Err(Error::NotMultiplicative(a.show_set(s)));
    }
    let what = format!("{}/m{}", a.name(), a.show_set(s));
    let orbits: Vec<Subset> = a.elements().map(|x| a.mul_elem_set(x, s)).collect();
    let part = partition(a.n(), &what, |x, y| orbits[x].intersects(&orbits[y]))?;
    let add = existential_sums(a, &part);
    let k = part.len();
    let cls = &part.class_of;
    for b in a.elements() {
        for c in a.elements() {
            let scaled = a.add_sets(&orbits[b], &orbits[c]);
            let row = &add[cls[b] * k + cls[c]];
            for x in a.elements() {
                ensure!(
                    orbits[x].intersects(&scaled) == row.contains(cls[x]),
                    "{what}: sum rules disagree at {} ∈ {} + {}",
                    a.elem_name(x),
                    a.elem_name(b),
                    a.elem_name(c)
                );
            }
        }
    }
    let (mul, neg) = induced_mul_neg(a, &part, &what)?;
    let out = assemble(a, what.clone(), &part, add, mul, neg)?;
    let one = out.result.singleton(out.result.one());
    ensure!(out.canonical.image_of(s) == one, "{what}: S is not sent to 1");
    Ok(out)
}

/// `S̄ = {x : xs ∈ S for some s ∈ S}`, confirmed to be cancellative and to
/// induce the same Marshall relation as `S`.
pub fn cancellative_closure(a: &Arc<Multiring>, s: &Subset) -> Result<Subset> {
    if !a.is_multiplicative(s) {
        return Err(Error::NotMultiplicative(a.show_set(s)));
    }
    let closure = a.set_of(a.elements().filter(|&x| s.iter().any(|t| s.contains(a.mul(x, t)))));
    ensure!(
        a.is_multiplicative(&closure),
        "closure of {} is not multiplicative",
        a.show_set(s)
    );
    for x in a.elements() {
        for t in &closure {
            if closure.contains(a.mul(x, t)) {
                ensure!(closure.contains(x), "closure of {} is not cancellative", a.show_set(s));
            }
        }
    }
    let original = marshall_quotient(a, s)?;
    let closed = marshall_quotient(a, &closure)?;
    ensure!(
        original.canonical.map() == closed.canonical.map(),
        "{} and its closure give different Marshall classes",
        a.show_set(s)
    );
    Ok(closure)
}

/// The residue hyperfield at a prime with its canonical map.
#[derive(Debug, Clone)]
pub struct Residue {
    pub prime: Subset,
    pub field: Arc<Multiring>,
    pub canonical: Morphism,
}

/// `ff(A/p)`, cross-checked against `A_p/pA_p` through the canonical map
/// between them, which must be an isomorphism.
pub fn residue_hyperfield(a: &Arc<Multiring>, p: &Subset) -> Result<Residue> {
    if !is_prime_ideal(a, p) {
        return Err(Error::NotPrime(a.show_set(p)));
    }
    let q = quotient_by_ideal(a, p)?;
    let domain = q.result();
    let mut nonzero = domain.full_set();
    nonzero.remove(domain.zero());
    let fractions = localize(domain, &nonzero)?;
    let via_domain = q.canonical().then(fractions.canonical())?;

    let local = local_at(a, p)?;
    let residue = quotient_by_ideal(local.ring.result(), &local.maximal)?;
    let via_local = local.ring.canonical().then(residue.canonical())?;

    canonical_isomorphism(&via_domain, &via_local)?;
    let field = Arc::new(fractions.result().renamed(format!("K({}:{})", a.name(), a.show_set(p))));
    ensure!(classify(&field).hyperfield, "{} is not a hyperfield", field.name());
    let canonical = Morphism::new(a.clone(), field.clone(), via_domain.map().to_vec())?;
    Ok(Residue {
        prime: p.clone(),
        field,
        canonical,
    })
}

/// Residue hyperfields at every prime, in spectrum order.
pub fn residues(a: &Arc<Multiring>) -> Result<Vec<Residue>> {
    spec(a)?.iter().map(|p| residue_hyperfield(a, p)).collect()
}

/// `A_p` with its maximal ideal `pA_p`.
#[derive(Debug, Clone)]
pub struct LocalRing {
    pub ring: Construction,
    pub maximal: Subset,
}

/// `A_p = (A∖p)⁻¹A`, confirming that `pA_p` is its unique maximal ideal.
pub fn local_at(a: &Arc<Multiring>, p: &Subset) -> Result<LocalRing> {
    if !is_prime_ideal(a, p) {
        return Err(Error::NotPrime(a.show_set(p)));
    }
    let ring = localize(a, &p.complement())?;
    let lp = ring.result();
    let image = ring.canonical().image_of(p);
    let maximal = lp.mul_sets(&lp.full_set(), &image);
    ensure!(lp.is_ideal(&maximal), "pA_p is not an ideal of {}", lp.name());
    ensure!(is_maximal(lp, &maximal), "pA_p is not maximal in {}", lp.name());
    let maximal_primes: Vec<Subset> = spec(lp)?.iter().filter(|q| is_maximal(lp, q)).cloned().collect();
    ensure!(
        maximal_primes == vec![maximal.clone()],
        "{} has {} maximal primes, expected only pA_p",
        lp.name(),
        maximal_primes.len()
    );
    Ok(LocalRing { ring, maximal })
}

/// An induced map between constructions with the two canonical maps.
#[derive(Debug, Clone)]
pub struct InducedMap {
    pub map: Morphism,
    pub from: Construction,
    pub to: Construction,
    /// Number of morphisms making the square commute, when enumeration fits
    /// the budget.
    pub fillers: Option<usize>,
}

fn induced(f: &Morphism, from: Construction, to: Construction, budget: &Budget) -> Result<InducedMap> {
    let down = f.then(to.canonical())?;
    let map = factor_through(from.canonical(), &down)?;
    let fillers = count_fillers(from.canonical(), &down, budget)?;
    if let Some(k) = fillers {
        ensure!(k == 1, "{} morphisms make the square commute", k);
    }
    Ok(InducedMap { map, from, to, fillers })
}

/// Morphisms `g` with `g ∘ p = f`, counted by enumeration if it fits.
pub fn count_fillers(p: &Morphism, f: &Morphism, budget: &Budget) -> Result<Option<usize>> {
    match enumerate_morphisms(p.cod(), f.cod(), budget) {
        Ok(all) => Ok(Some(
            all.iter()
                .filter(|g| p.dom().elements().all(|x| g.apply(p.apply(x)) == f.apply(x)))
                .count(),
        )),
        Err(Error::BudgetExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `A/I → B/J` induced by `f` when `I ⊆ f⁻¹(J)`.
pub fn induced_map_quotient(f: &Morphism, i: &Subset, j: &Subset, budget: &Budget) -> Result<InducedMap> {
    if !i.is_subset(&f.preimage(j)) {
        return Err(Error::ContainmentViolation("I ⊄ f⁻¹(J)".into()));
    }
    induced(
        f,
        quotient_by_ideal(f.dom(), i)?,
        quotient_by_ideal(f.cod(), j)?,
        budget,
    )
}

/// `S⁻¹A → T⁻¹B` induced by `f` when `S ⊆ f⁻¹(T)`.
pub fn induced_map_localization(f: &Morphism, s: &Subset, t: &Subset, budget: &Budget) -> Result<InducedMap> {
    if !s.is_subset(&f.preimage(t)) {
        return Err(Error::ContainmentViolation("S ⊄ f⁻¹(T)".into()));
    }
    induced(f, localize(f.dom(), s)?, localize(f.cod(), t)?, budget)
}

/// `A/ₘS → B/ₘT` induced by `f` when `S ⊆ f⁻¹(T)`.
pub fn induced_map_marshall(f: &Morphism, s: &Subset, t: &Subset, budget: &Budget) -> Result<InducedMap> {
    if !s.is_subset(&f.preimage(t)) {
        return Err(Error::ContainmentViolation("S ⊄ f⁻¹(T)".into()));
    }
    induced(
        f,
        marshall_quotient(f.dom(), s)?,
        marshall_quotient(f.cod(), t)?,
        budget,
    )
}

/// The fraction hyperfield of a multidomain.
pub fn fraction_field(a: &Arc<Multiring>) -> Result<Construction> {
    ensure!(
        classify(a).multidomain && !a.is_zero_ring(),
        "{} is not a multidomain",
        a.name()
    );
    let mut nonzero = a.full_set();
    nonzero.remove(a.zero());
    localize(a, &nonzero)
}

/// Canonical `A → B` between two constructions on the same source, if the
/// first factors through the second. Used to compare presentations.
pub fn compare(p: &Construction, q: &Construction) -> Result<Morphism> {
    canonical_isomorphism(p.canonical(), q.canonical()).map_err(|e| match e {
        Error::NotWellDefined(w) => violation!("presentations differ: {w}"),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{field_mod_squares, sign3, zmod};
    use crate::morphism::find_isomorphism;

    #[test]
    fn quotient_of_z12_by_six() {
        let z12 = Arc::new(zmod(12));
        let q = quotient_by_ideal(&z12, &z12.principal_ideal(6)).unwrap();
        let z6 = Arc::new(zmod(6));
        assert!(find_isomorphism(q.result(), &z6, &Budget::default()).unwrap().is_some());
    }

    #[test]
    fn rejects_non_ideal() {
        let z6 = Arc::new(zmod(6));
        assert!(matches!(
            quotient_by_ideal(&z6, &z6.set_of([0, 2])),
            Err(Error::NotAnIdeal(_))
        ));
    }

    #[test]
    fn inverting_three_in_z6() {
        let z6 = Arc::new(zmod(6));
        let l = localize(&z6, &z6.set_of([1, 3])).unwrap();
        assert!(l.result().same_tables(&zmod(2)) || l.result().n() == 2);
        let z2 = Arc::new(zmod(2));
        assert!(find_isomorphism(l.result(), &z2, &Budget::default()).unwrap().is_some());
    }

    #[test]
    fn localizing_at_zero_collapses() {
        let z6 = Arc::new(zmod(6));
        let l = localize(&z6, &z6.set_of([0, 1])).unwrap();
        assert_eq!(l.result().n(), 1);
    }

    #[test]
    fn f7_mod_squares_has_three_elements() {
        let f = field_mod_squares(7).unwrap();
        assert_eq!(f.n(), 3);
        assert!(classify(&f).hyperfield);
        let one = f.one();
        assert_eq!(f.add(one, one), &f.set_of([one, f.neg(one)]));
    }

    #[test]
    fn f3_mod_trivial_is_not_sign() {
        let f3 = Arc::new(zmod(3));
        let q = marshall_quotient(&f3, &f3.singleton(1)).unwrap();
        let s = Arc::new(sign3());
        assert!(find_isomorphism(q.result(), &s, &Budget::default()).unwrap().is_none());
    }

    #[test]
    fn z15_closure() {
        let z15 = Arc::new(zmod(15));
        let s = z15.set_of([1, 4]);
        let closure = cancellative_closure(&z15, &s).unwrap();
        assert!(s.is_subset(&closure));
    }

    #[test]
    fn residue_fields_of_z6() {
        let z6 = Arc::new(zmod(6));
        let fields = residues(&z6).unwrap();
        let sizes: Vec<usize> = fields.iter().map(|r| r.field.n()).collect();
        assert_eq!(sizes, vec![3, 2]);
    }

    #[test]
    fn non_prime_residue_rejected() {
        let z6 = Arc::new(zmod(6));
        assert!(matches!(
            residue_hyperfield(&z6, &z6.singleton(0)),
            Err(Error::NotPrime(_))
        ));
    }

    #[test]
    fn containment_checked() {
        let z6 = Arc::new(zmod(6));
        let id = Morphism::identity(&z6);
        let err = induced_map_quotient(&id, &z6.principal_ideal(2), &z6.principal_ideal(3), &Budget::default());
        assert!(matches!(err, Err(Error::ContainmentViolation(_))));
        let ok = induced_map_quotient(&id, &z6.singleton(0), &z6.principal_ideal(3), &Budget::default()).unwrap();
        assert_eq!(ok.fillers, Some(1));
    }
}
