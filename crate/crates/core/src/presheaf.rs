//! The structural presheaf `D(a) ↦ S_a⁻¹A` on the basic opens of the
//! prime spectrum, with stalks and the mono-presheaf and sheaf conditions.

use std::sync::Arc;

use crate::budget::Budget;
use crate::constructions::{local_at, localize, Construction};
use crate::error::{ensure, violation, Error, Result};
use crate::morphism::{canonical_isomorphism, factor_through, Morphism};
use crate::multiring::{units, weak_units, Elem, Multiring};
use crate::spectra::{basic_open, radical, saturation, spec};
use crate::subset::Subset;

/// One basic open `D(a)` with the section multiring over it.
#[derive(Debug, Clone)]
pub struct Section {
    /// The open as a set of prime indices.
    pub open: Subset,
    /// The least element with this `D`-set.
    pub generator: Elem,
    /// `S_a`.
    pub saturation: Subset,
    /// `S_a⁻¹A` with its canonical map.
    pub ring: Construction,
}

/// The presheaf on the distinct basic opens, sorted by open.
#[derive(Debug, Clone)]
pub struct StructuralPresheaf {
    source: Arc<Multiring>,
    sections: Vec<Section>,
    /// `restrictions[i][j]` for `open_j ⊆ open_i`.
    restrictions: Vec<Vec<Option<Morphism>>>,
}

impl StructuralPresheaf {
    pub fn source(&self) -> &Arc<Multiring> {
        &self.source
    }

    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    /// Index of the section over the given open, if it is basic.
    pub fn open_index(&self, open: &Subset) -> Option<usize> {
        self.sections.iter().position(|s| s.open == *open)
    }

    /// The restriction from section `from` to section `to`.
    pub fn restriction(&self, from: usize, to: usize) -> Option<&Morphism> {
        self.restrictions[from][to].as_ref()
    }
}

/// Builds the sections `S_a⁻¹A` and restriction maps.
///
/// Checks that equal opens have equal saturations, that `D(a) ⊆ D(b)`,
/// `√(a) ⊆ √(b)`, `a ∈ √(b)` and `S_b ⊆ S_a` agree for all pairs, and that
/// restrictions compose.
pub fn build_presheaf(a: &Arc<Multiring>) -> Result<StructuralPresheaf> {
    let opens: Vec<Subset> = a.elements().map(|x| basic_open(a, x)).collect::<Result<_>>()?;
    let sats: Vec<Subset> = a.elements().map(|x| saturation(a, x)).collect::<Result<_>>()?;
    let radicals: Vec<Subset> = a
        .elements()
        .map(|x| radical(a, &a.principal_ideal(x)))
        .collect::<Result<_>>()?;
    for x in a.elements() {
        for y in a.elements() {
            let clauses = [
                opens[x].is_subset(&opens[y]),
                radicals[x].is_subset(&radicals[y]),
                radicals[y].contains(x),
                sats[y].is_subset(&sats[x]),
            ];
            ensure!(
                clauses.iter().all(|&c| c == clauses[0]),
                "{}: containment criteria disagree for ({}, {}): {:?}",
                a.name(),
                a.elem_name(x),
                a.elem_name(y),
                clauses
            );
            if opens[x] == opens[y] {
                ensure!(
                    sats[x] == sats[y],
                    "{}: equal opens with different saturations",
                    a.name()
                );
            }
        }
    }
    let mut generators: Vec<Elem> = Vec::new();
    for x in a.elements() {
        if !generators.iter().any(|&g| opens[g] == opens[x]) {
            generators.push(x);
        }
    }
    generators.sort_by(|&x, &y| opens[x].cmp(&opens[y]));
    let sections: Vec<Section> = generators
        .iter()
        .map(|&g| {
            Ok(Section {
                open: opens[g].clone(),
                generator: g,
                saturation: sats[g].clone(),
                ring: localize(a, &sats[g])?,
            })
        })
        .collect::<Result<_>>()?;
    let m = sections.len();
    let mut restrictions = vec![vec![None; m]; m];
    for i in 0..m {
        for j in 0..m {
            if sections[j].open.is_subset(&sections[i].open) {
                let r = factor_through(sections[i].ring.canonical(), sections[j].ring.canonical())
                    .map_err(|e| violation!("{}: no restriction between sections: {e}", a.name()))?;
                if i == j {
                    ensure!(
                        r.is_identity(),
                        "{}: restriction to the same open is not the identity",
                        a.name()
                    );
                }
                restrictions[i][j] = Some(r);
            }
        }
    }
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                if let (Some(ij), Some(jk), Some(ik)) = (&restrictions[i][j], &restrictions[j][k], &restrictions[i][k])
                {
                    ensure!(ij.then(jk)?.same_map(ik), "{}: restrictions do not compose", a.name());
                }
            }
        }
    }
    Ok(StructuralPresheaf {
        source: a.clone(),
        sections,
        restrictions,
    })
}

/// The stalk at a prime, realised as the section over the smallest basic
/// open containing it.
#[derive(Debug, Clone)]
pub struct Stalk {
    pub section: usize,
    /// `A_p` with its canonical map.
    pub local: Construction,
    /// The canonical isomorphism from the section to `A_p`.
    pub iso: Morphism,
}

/// Builds the stalk at `spec(A)[k]` and checks it is `A_p`, and that the
/// maps from every section over an open containing `p` are compatible.
pub fn stalk(sheaf: &StructuralPresheaf, k: usize) -> Result<Stalk> {
    let a = sheaf.source();
    let primes = spec(a)?;
    let p = primes
        .get(k)
        .ok_or_else(|| Error::NotPrime(format!("no prime with index {k}")))?;
    let containing: Vec<usize> = (0..sheaf.sections.len())
        .filter(|&i| sheaf.sections[i].open.contains(k))
        .collect();
    let mut smallest = Subset::full(primes.len());
    for &i in &containing {
        smallest.intersect_with(&sheaf.sections[i].open);
    }
    let section = sheaf
        .open_index(&smallest)
        .ok_or_else(|| violation!("{}: smallest open around a prime is not basic", a.name()))?;
    let local = local_at(a, p)?.ring;
    let iso = canonical_isomorphism(sheaf.sections[section].ring.canonical(), local.canonical())?;
    for &i in &containing {
        let to_stalk = factor_through(sheaf.sections[i].ring.canonical(), local.canonical())?;
        let via = sheaf.restrictions[i][section]
            .as_ref()
            .ok_or_else(|| violation!("{}: missing restriction", a.name()))?
            .then(&iso)?;
        ensure!(
            to_stalk.same_map(&via),
            "{}: maps into the stalk are not compatible",
            a.name()
        );
    }
    Ok(Stalk { section, local, iso })
}

/// Whenever `x ∈ y + z` holds in `A_p`, some `u ∉ p` has `xu ∈ yu + zu`.
/// Returns a counterexample `(prime index, x, y, z)`.
pub fn fiber_to_open_failure(a: &Arc<Multiring>) -> Result<Option<(usize, Elem, Elem, Elem)>> {
    let primes = spec(a)?;
    for (k, p) in primes.iter().enumerate() {
        let local = local_at(a, p)?.ring;
        let f = local.canonical();
        let lp = local.result();
        for y in a.elements() {
            for z in a.elements() {
                for x in a.elements() {
                    if !lp.add(f.apply(y), f.apply(z)).contains(f.apply(x)) {
                        continue;
                    }
                    let found = a
                        .elements()
                        .filter(|&u| !p.contains(u))
                        .any(|u| a.add(a.mul(y, u), a.mul(z, u)).contains(a.mul(x, u)));
                    if !found {
                        return Ok(Some((k, x, y, z)));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Irredundant covers of section `target` by basic opens inside it: each
/// member has a point no other member covers.
pub fn irredundant_covers(sheaf: &StructuralPresheaf, target: usize, budget: &Budget) -> Result<Vec<Vec<usize>>> {
    let goal = &sheaf.sections[target].open;
    let inside: Vec<usize> = (0..sheaf.sections.len())
        .filter(|&i| !sheaf.sections[i].open.is_empty() && sheaf.sections[i].open.is_subset(goal))
        .collect();
    let mut out = Vec::new();
    let mut nodes = 0u64;
    let mut chosen = Vec::new();
    cover_search(sheaf, goal, &inside, 0, &mut chosen, &mut out, &mut nodes, budget.nodes)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn cover_search(
    sheaf: &StructuralPresheaf,
    goal: &Subset,
    inside: &[usize],
    start: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    nodes: &mut u64,
    limit: u64,
) -> Result<()> {
    *nodes += 1;
    if *nodes > limit {
        return Err(Error::BudgetExceeded {
            what: "cover enumeration".into(),
            detail: format!("more than {limit} nodes"),
        });
    }
    let open = |i: usize| &sheaf.sections[i].open;
    let mut union = Subset::empty(goal.universe());
    for &i in chosen.iter() {
        union.union_with(open(i));
    }
    if union == *goal {
        let irredundant = chosen.iter().all(|&i| {
            let mut others = Subset::empty(goal.universe());
            for &j in chosen.iter().filter(|&&j| j != i) {
                others.union_with(open(j));
            }
            !open(i).is_subset(&others)
        });
        if irredundant {
            out.push(chosen.clone());
        }
        return Ok(());
    }
    for k in start..inside.len() {
        let i = inside[k];
        if open(i).is_subset(&union) {
            continue;
        }
        chosen.push(i);
        cover_search(sheaf, goal, inside, k + 1, chosen, out, nodes, limit)?;
        chosen.pop();
    }
    Ok(())
}

/// A failure of the mono-presheaf or gluing condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SheafFailure {
    /// On the cover of `section`, `x ∈ y + z` holds on every member but not
    /// over the whole open.
    Mono {
        section: usize,
        cover: Vec<usize>,
        triple: (Elem, Elem, Elem),
    },
    /// A compatible family on the cover has no global section.
    Gluing {
        section: usize,
        cover: Vec<usize>,
        family: Vec<Elem>,
    },
}

impl SheafFailure {
    pub fn describe(&self, sheaf: &StructuralPresheaf) -> String {
        let name = |i: usize| sheaf.sections[i].ring.result().name().to_string();
        match self {
            SheafFailure::Mono { section, cover, triple } => {
                let r = sheaf.sections[*section].ring.result();
                format!(
                    "over {}: {} ∈ {} + {} on the cover {:?} but not globally",
                    name(*section),
                    r.elem_name(triple.0),
                    r.elem_name(triple.1),
                    r.elem_name(triple.2),
                    cover.iter().map(|&i| name(i)).collect::<Vec<_>>()
                )
            }
            SheafFailure::Gluing { section, cover, family } => format!(
                "over {}: the family {:?} on {:?} does not glue",
                name(*section),
                family,
                cover.iter().map(|&i| name(i)).collect::<Vec<_>>()
            ),
        }
    }
}

fn mono_failure_on(sheaf: &StructuralPresheaf, e: usize, cover: &[usize]) -> Option<SheafFailure> {
    let r = sheaf.sections[e].ring.result();
    let maps: Vec<&Morphism> = cover
        .iter()
        .map(|&i| sheaf.restrictions[e][i].as_ref().expect("cover lies inside"))
        .collect();
    for y in r.elements() {
        for z in r.elements() {
            for x in r.elements() {
                if r.add(y, z).contains(x) {
                    continue;
                }
                let local = maps
                    .iter()
                    .all(|f| f.cod().add(f.apply(y), f.apply(z)).contains(f.apply(x)));
                if local {
                    return Some(SheafFailure::Mono {
                        section: e,
                        cover: cover.to_vec(),
                        triple: (x, y, z),
                    });
                }
            }
        }
    }
    None
}

fn gluing_failure_on(
    sheaf: &StructuralPresheaf,
    e: usize,
    cover: &[usize],
    budget: &Budget,
) -> Result<Option<SheafFailure>> {
    let a = sheaf.source();
    let global = sheaf.sections[e].ring.result();
    let maps: Vec<&Morphism> = cover
        .iter()
        .map(|&i| sheaf.restrictions[e][i].as_ref().expect("cover lies inside"))
        .collect();
    let images: Vec<Vec<Elem>> = global
        .elements()
        .map(|x| maps.iter().map(|f| f.apply(x)).collect())
        .collect();
    // Overlap sections and restriction maps for each pair of cover members.
    let mut overlaps = vec![vec![None; cover.len()]; cover.len()];
    for (s, &i) in cover.iter().enumerate() {
        for (t, &j) in cover.iter().enumerate() {
            let meet = sheaf.sections[i].open.intersection(&sheaf.sections[j].open);
            let k = sheaf
                .open_index(&meet)
                .ok_or_else(|| violation!("{}: intersection of basic opens is not basic", a.name()))?;
            overlaps[s][t] = Some((
                sheaf.restrictions[i][k].clone().expect("overlap lies inside"),
                sheaf.restrictions[j][k].clone().expect("overlap lies inside"),
            ));
        }
    }
    let sizes: Vec<usize> = cover.iter().map(|&i| sheaf.sections[i].ring.result().n()).collect();
    let mut family = vec![0; cover.len()];
    let mut nodes = 0u64;
    let mut failure = None;
    glue_search(
        &sizes,
        &overlaps,
        &images,
        0,
        &mut family,
        &mut nodes,
        budget.nodes,
        &mut failure,
    )?;
    Ok(failure.map(|family| SheafFailure::Gluing {
        section: e,
        cover: cover.to_vec(),
        family,
    }))
}

type Overlap = Option<(Morphism, Morphism)>;

#[allow(clippy::too_many_arguments)]
fn glue_search(
    sizes: &[usize],
    overlaps: &[Vec<Overlap>],
    images: &[Vec<Elem>],
    depth: usize,
    family: &mut Vec<Elem>,
    nodes: &mut u64,
    limit: u64,
    failure: &mut Option<Vec<Elem>>,
) -> Result<()> {
    if failure.is_some() {
        return Ok(());
    }
    *nodes += 1;
    if *nodes > limit {
        return Err(Error::BudgetExceeded {
            what: "gluing check".into(),
            detail: format!("more than {limit} nodes"),
        });
    }
    if depth == sizes.len() {
        if !images.iter().any(|v| v == family) {
            *failure = Some(family.clone());
        }
        return Ok(());
    }
    for x in 0..sizes[depth] {
        let compatible = (0..depth).all(|s| {
            let (left, right) = overlaps[s][depth].as_ref().expect("all pairs are filled");
            left.apply(family[s]) == right.apply(x)
        });
        if compatible {
            family[depth] = x;
            glue_search(sizes, overlaps, images, depth + 1, family, nodes, limit, failure)?;
        }
    }
    Ok(())
}

/// The first mono-presheaf failure over any irredundant cover.
pub fn mono_failure(sheaf: &StructuralPresheaf, budget: &Budget) -> Result<Option<SheafFailure>> {
    for e in 0..sheaf.sections.len() {
        for cover in irredundant_covers(sheaf, e, budget)? {
            if let Some(f) = mono_failure_on(sheaf, e, &cover) {
                return Ok(Some(f));
            }
        }
    }
    Ok(None)
}

/// The first failure of either sheaf condition over any irredundant cover.
pub fn sheaf_failure(sheaf: &StructuralPresheaf, budget: &Budget) -> Result<Option<SheafFailure>> {
    if let Some(f) = mono_failure(sheaf, budget)? {
        return Ok(Some(f));
    }
    for e in 0..sheaf.sections.len() {
        for cover in irredundant_covers(sheaf, e, budget)? {
            if let Some(f) = gluing_failure_on(sheaf, e, &cover, budget)? {
                return Ok(Some(f));
            }
        }
    }
    Ok(None)
}

pub fn is_monopresheaf(a: &Arc<Multiring>, budget: &Budget) -> Result<bool> {
    Ok(mono_failure(&build_presheaf(a)?, budget)?.is_none())
}

pub fn is_sheaf(a: &Arc<Multiring>, budget: &Budget) -> Result<bool> {
    Ok(sheaf_failure(&build_presheaf(a)?, budget)?.is_none())
}

/// The `a`-invertible property, by four equivalent clauses which must agree:
/// `S_a` maps to units of `A_a`; weak units of `A_a` are units;
/// `S_a = {x : aⁿ = xy}`; `A_a → S_a⁻¹A` is an isomorphism.
pub fn invertible_property(a: &Arc<Multiring>, x: Elem) -> Result<bool> {
    let powers = a.multiplicative_closure(&a.singleton(x));
    let ax = localize(a, &powers)?;
    let sat = saturation(a, x)?;
    let s_inv = localize(a, &sat)?;
    let ax_units = units(ax.result());
    let first = ax.canonical().image_of(&sat).is_subset(&ax_units);
    let second = weak_units(ax.result()) == ax_units;
    let divisors = a.set_of(
        a.elements()
            .filter(|&y| a.elements().any(|z| powers.contains(a.mul(y, z)))),
    );
    let third = divisors == sat;
    let fourth = factor_through(ax.canonical(), s_inv.canonical())?.is_isomorphism();
    ensure!(
        first == second && second == third && third == fourth,
        "{}: invertible-property clauses at {} disagree: {first} {second} {third} {fourth}",
        a.name(),
        a.elem_name(x)
    );
    Ok(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{power, product, sign3, zmod};
    use crate::constructions::marshall_quotient;
    use crate::morphism::find_isomorphism;

    #[test]
    fn sections_of_sign_square() {
        let s = Arc::new(sign3());
        let p = power(&s, 2).unwrap();
        let sheaf = build_presheaf(p.result()).unwrap();
        let sizes: Vec<usize> = sheaf.sections().iter().map(|s| s.ring.result().n()).collect();
        assert_eq!(sizes, vec![1, 3, 3, 9]);
        for k in 0..2 {
            let st = stalk(&sheaf, k).unwrap();
            assert!(find_isomorphism(st.local.result(), &s, &Budget::default())
                .unwrap()
                .is_some());
        }
        assert!(sheaf_failure(&sheaf, &Budget::default()).unwrap().is_none());
    }

    #[test]
    fn rings_are_sheaves() {
        for n in [4, 6, 12] {
            assert!(is_sheaf(&Arc::new(zmod(n)), &Budget::default()).unwrap());
        }
    }

    #[test]
    fn non_geometric_quotient_is_not_mono() {
        let f3 = Arc::new(zmod(3));
        let p = product(&[f3.clone(), f3]).unwrap();
        let s = p.result().set_of([p.encode(&[1, 1]), p.encode(&[2, 2])]);
        let q = marshall_quotient(p.result(), &s).unwrap();
        assert!(!is_monopresheaf(q.result(), &Budget::default()).unwrap());
    }

    #[test]
    fn hyperrings_have_invertible_property() {
        let a = Arc::new(zmod(12));
        for x in a.elements() {
            assert!(invertible_property(&a, x).unwrap());
        }
        assert!(fiber_to_open_failure(&a).unwrap().is_none());
    }
}
