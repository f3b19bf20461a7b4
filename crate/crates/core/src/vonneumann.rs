//! Von Neumann regular hyperrings: idempotent calculus, geometricity,
//! partitions of unity, von Neumann subgroups and the geometric hull.

use std::sync::Arc;

use crate::budget::Budget;
use crate::constructions::{cancellative_closure, marshall_quotient, residues, Construction};
use crate::error::{ensure, violation, Error, Result};
use crate::morphism::{canonical_isomorphism, Morphism};
use crate::multiring::{is_hyperring, units, Elem, Multiring};
use crate::realspec::{is_rrm, q_construction, Preorder, QPresentation};
use crate::spectra::{basic_open, radical_by_powers, spec};
use crate::subset::Subset;

/// An element `a` with no `b` satisfying `a = a²b`.
pub fn regularity_witness(a: &Multiring) -> Option<Elem> {
    a.elements()
        .find(|&x| !a.elements().any(|b| a.mul(a.square(x), b) == x))
}

/// Whether the spectrum is Boolean and `√0 = 0`. A finite spectrum is
/// Boolean exactly when no prime contains another; each point is then also
/// checked to be a basic open set.
pub fn spectrum_is_boolean_reduced(a: &Arc<Multiring>) -> Result<bool> {
    let primes = spec(a)?;
    let incomparable = primes
        .iter()
        .enumerate()
        .all(|(i, p)| primes.iter().enumerate().all(|(j, q)| i == j || !p.is_subset(q)));
    if incomparable {
        for k in 0..primes.len() {
            let point = Subset::singleton(primes.len(), k);
            let mut found = false;
            for x in a.elements() {
                if basic_open(a, x)? == point {
                    found = true;
                    break;
                }
            }
            ensure!(
                found,
                "{}: prime {} is not a basic open point",
                a.name(),
                a.show_set(&primes[k])
            );
        }
    }
    let reduced = radical_by_powers(a, &a.singleton(a.zero())) == a.singleton(a.zero());
    Ok(incomparable && reduced)
}

/// Whether `A` is a von Neumann hyperring, by both characterizations.
pub fn is_vnh(a: &Arc<Multiring>) -> Result<bool> {
    if !is_hyperring(a) {
        return Err(Error::NotHyperring(a.name().to_string()));
    }
    let regular = regularity_witness(a).is_none();
    let topological = spectrum_is_boolean_reduced(a)?;
    ensure!(
        regular == topological,
        "{}: a = a²b gives {regular} but the spectral test gives {topological}",
        a.name()
    );
    Ok(regular)
}

/// Like [`is_vnh`], but `false` for multirings that are not hyperrings.
pub fn is_vnh_multiring(a: &Arc<Multiring>) -> Result<bool> {
    if !is_hyperring(a) {
        return Ok(false);
    }
    is_vnh(a)
}

/// The idempotent calculus of a von Neumann hyperring.
#[derive(Debug, Clone)]
pub struct IdempotentFrame {
    ring: Arc<Multiring>,
    idempotents: Subset,
    support: Vec<Elem>,
    complement: Vec<Elem>,
    nabla: Option<Vec<Elem>>,
}

impl IdempotentFrame {
    pub fn ring(&self) -> &Arc<Multiring> {
        &self.ring
    }

    pub fn idempotents(&self) -> &Subset {
        &self.idempotents
    }

    /// `i(a)`: the idempotent with `D(a) = D(i(a))`.
    pub fn support(&self, x: Elem) -> Elem {
        self.support[x]
    }

    /// `aᶜ = i(a)ᶜ`: the unique `x ∈ 1 - i(a)` with `i(a)x = 0`.
    pub fn complement(&self, x: Elem) -> Elem {
        self.complement[x]
    }

    /// `∇(a)`, the unique element of `a - aᶜ`; only in the geometric case.
    pub fn nabla(&self, x: Elem) -> Option<Elem> {
        self.nabla.as_ref().map(|v| v[x])
    }

    pub fn is_geometric(&self) -> bool {
        self.nabla.is_some()
    }

    /// An idempotent `e` with `e + eᶜ ≠ {1}`.
    pub fn geometric_witness(&self) -> Option<Elem> {
        let a = &self.ring;
        self.idempotents
            .iter()
            .find(|&e| a.add(e, self.complement[e]) != &a.singleton(a.one()))
    }
}

/// Builds `i`, `ᶜ` and, in the geometric case, `∇`.
///
/// `i(a) = ab` is checked to be independent of the chosen `b`, and the
/// complement is found by exhaustive search and checked to be unique.
pub fn idempotent_frame(a: &Arc<Multiring>) -> Result<IdempotentFrame> {
    if !is_vnh_multiring(a)? {
        return Err(Error::NotVNH(a.name().to_string()));
    }
    let idempotents = a.idempotents();
    let mut support = Vec::with_capacity(a.n());
    for x in a.elements() {
        let choices = a.set_of(
            a.elements()
                .filter(|&b| a.mul(a.square(x), b) == x)
                .map(|b| a.mul(x, b)),
        );
        let Some(e) = choices.single() else {
            return Err(violation!(
                "{}: i({}) depends on the choice of b",
                a.name(),
                a.elem_name(x)
            ));
        };
        ensure!(
            a.is_idempotent(e),
            "{}: i({}) is not idempotent",
            a.name(),
            a.elem_name(x)
        );
        ensure!(
            basic_open(a, x)? == basic_open(a, e)?,
            "{}: D({}) != D(i({}))",
            a.name(),
            a.elem_name(x),
            a.elem_name(x)
        );
        support.push(e);
    }
    let mut idem_complement = vec![usize::MAX; a.n()];
    for e in &idempotents {
        let candidates: Vec<Elem> = a.sub(a.one(), e).iter().filter(|&x| a.mul(e, x) == a.zero()).collect();
        if candidates.len() != 1 {
            return Err(Error::NonUniqueComplement(format!(
                "{}: {} candidates for the complement of {}",
                a.name(),
                candidates.len(),
                a.elem_name(e)
            )));
        }
        let c = candidates[0];
        ensure!(
            a.is_idempotent(c),
            "{}: complement of {} is not idempotent",
            a.name(),
            a.elem_name(e)
        );
        idem_complement[e] = c;
    }
    let complement: Vec<Elem> = support.iter().map(|&e| idem_complement[e]).collect();
    let mut frame = IdempotentFrame {
        ring: a.clone(),
        idempotents,
        support,
        complement,
        nabla: None,
    };
    if frame.geometric_witness().is_none() {
        let mut nabla = Vec::with_capacity(a.n());
        for x in a.elements() {
            let Some(d) = a.sub(x, frame.complement[x]).single() else {
                return Err(violation!(
                    "{}: {} - {}ᶜ is not a singleton in a geometric hyperring",
                    a.name(),
                    a.elem_name(x),
                    a.elem_name(x)
                ));
            };
            nabla.push(d);
        }
        frame.nabla = Some(nabla);
    }
    Ok(frame)
}

/// Geometricity by `e + eᶜ = {1}` for all idempotents, cross-checked with
/// the residue criterion (an element equal to `1` in every `K_A(p)` is `1`).
/// In the geometric case the sum relation is also checked to be detected by
/// the residues. Returns the failing idempotent, if any.
pub fn geometric_witness(a: &Arc<Multiring>) -> Result<Option<Elem>> {
    let frame = idempotent_frame(a)?;
    let witness = frame.geometric_witness();
    let res = residues(a)?;
    let locally_one = |u: Elem| res.iter().all(|r| r.canonical.apply(u) == r.field.one());
    let residue_clause = a.elements().all(|u| !locally_one(u) || u == a.one());
    ensure!(
        residue_clause == witness.is_none(),
        "{}: idempotent test and residue test disagree on geometricity",
        a.name()
    );
    if witness.is_none() {
        for b in a.elements() {
            for c in a.elements() {
                for x in a.elements() {
                    let local = res.iter().all(|r| {
                        let f = &r.canonical;
                        r.field.add(f.apply(b), f.apply(c)).contains(f.apply(x))
                    });
                    ensure!(
                        local == a.add(b, c).contains(x),
                        "{}: {} ∈ {} + {} is not decided by the residues",
                        a.name(),
                        a.elem_name(x),
                        a.elem_name(b),
                        a.elem_name(c)
                    );
                }
            }
        }
    }
    Ok(witness)
}

pub fn is_geometric(a: &Arc<Multiring>) -> Result<bool> {
    Ok(geometric_witness(a)?.is_none())
}

/// Whether `A` is a geometric von Neumann hyperring; `false` for
/// multirings that are not von Neumann hyperrings.
pub fn is_gvnh(a: &Arc<Multiring>) -> Result<bool> {
    Ok(is_vnh_multiring(a)? && is_geometric(a)?)
}

/// Largest number of idempotents for which partitions are enumerated.
pub const PARTITION_CAP: usize = 16;

fn orthogonal_sets(a: &Multiring, nonzero: &[Elem], start: usize, current: &mut Vec<Elem>, out: &mut Vec<Vec<Elem>>) {
    if !current.is_empty() {
        out.push(current.clone());
    }
    for k in start..nonzero.len() {
        let e = nonzero[k];
        if current.iter().all(|&f| a.mul(e, f) == a.zero()) {
            current.push(e);
            orthogonal_sets(a, nonzero, k + 1, current, out);
            current.pop();
        }
    }
}

/// All partitions of unity made of non-zero idempotents, in lexicographic
/// order. For each, `D(x)` is checked to be the union of the `D(eᵢ)` for
/// every `x` in the sum.
pub fn partitions_of_unity(frame: &IdempotentFrame) -> Result<Vec<Vec<Elem>>> {
    let a = frame.ring();
    if frame.idempotents.len() > PARTITION_CAP {
        return Err(Error::BudgetExceeded {
            what: "partitions of unity".into(),
            detail: format!("{} idempotents, cap {PARTITION_CAP}", frame.idempotents.len()),
        });
    }
    let nonzero: Vec<Elem> = frame.idempotents.iter().filter(|&e| e != a.zero()).collect();
    let mut sets = Vec::new();
    orthogonal_sets(a, &nonzero, 0, &mut Vec::new(), &mut sets);
    let mut out = Vec::new();
    for set in sets {
        let sum = a.sum_of(&set);
        if !sum.contains(a.one()) {
            continue;
        }
        let mut union = Subset::empty(spec(a)?.len());
        for &e in &set {
            union.union_with(&basic_open(a, e)?);
        }
        for x in &sum {
            ensure!(
                basic_open(a, x)? == union,
                "{}: D({}) is not the union of its partition",
                a.name(),
                a.elem_name(x)
            );
        }
        out.push(set);
    }
    Ok(out)
}

/// `S_u`, the union of the sums of all partitions of unity.
///
/// Checks that products of two partitions of unity are partitions of unity
/// whose sum contains both original sums, and that every sum is `{1}` in the
/// geometric case.
pub fn unity_set(frame: &IdempotentFrame) -> Result<Subset> {
    let a = frame.ring();
    let parts = partitions_of_unity(frame)?;
    let sums: Vec<Subset> = parts.iter().map(|p| a.sum_of(p)).collect();
    for (p, sp) in parts.iter().zip(&sums) {
        for (q, sq) in parts.iter().zip(&sums) {
            let mut refined: Vec<Elem> = p
                .iter()
                .flat_map(|&e| q.iter().map(move |&f| a.mul(e, f)))
                .filter(|&x| x != a.zero())
                .collect();
            refined.sort_unstable();
            refined.dedup();
            let rs = a.sum_of(&refined);
            ensure!(
                rs.contains(a.one()) && sp.is_subset(&rs) && sq.is_subset(&rs),
                "{}: product of partitions {:?} and {:?} is not a finer partition of unity",
                a.name(),
                p,
                q
            );
        }
    }
    if frame.is_geometric() {
        for s in &sums {
            ensure!(
                s == &a.singleton(a.one()),
                "{}: a partition of unity sums to {}",
                a.name(),
                a.show_set(s)
            );
        }
    }
    let mut out = a.singleton(a.one());
    for s in &sums {
        out.union_with(s);
    }
    ensure!(a.is_multiplicative(&out), "{}: S_u is not multiplicative", a.name());
    Ok(out)
}

/// `D_S(x, y) = {z : zu ∈ xv + yw for some u, v, w ∈ S}`.
pub fn d_set(a: &Multiring, s: &Subset, x: Elem, y: Elem) -> Subset {
    let sums = a.add_sets(&a.mul_elem_set(x, s), &a.mul_elem_set(y, s));
    a.set_of(a.elements().filter(|&z| a.mul_elem_set(z, s).intersects(&sums)))
}

/// The defining clause of a von Neumann subgroup: for every idempotent `e`
/// and `z ∈ D_S(e, eᶜ)`, some `t ∈ S` has `zt ∈ S`.
pub fn vn_subgroup_by_definition(frame: &IdempotentFrame, s: &Subset) -> Result<bool> {
    let a = frame.ring();
    if !a.is_multiplicative(s) {
        return Err(Error::NotMultiplicative(a.show_set(s)));
    }
    Ok(frame.idempotents.iter().all(|e| {
        d_set(a, s, e, frame.complement(e))
            .iter()
            .all(|z| a.mul_elem_set(z, s).intersects(s))
    }))
}

/// Whether `S` is a von Neumann subgroup, checked against geometricity of
/// `A/ₘS` and against the same test for the cancellative closure.
pub fn is_vn_subgroup(frame: &IdempotentFrame, s: &Subset) -> Result<bool> {
    let a = frame.ring();
    let direct = vn_subgroup_by_definition(frame, s)?;
    let quotient = marshall_quotient(a, s)?;
    let via_quotient = is_gvnh(quotient.result())?;
    ensure!(
        direct == via_quotient,
        "{}: {} is a von Neumann subgroup: {direct}, but A/ₘS geometric von Neumann: {via_quotient}",
        a.name(),
        a.show_set(s)
    );
    let closure = cancellative_closure(a, s)?;
    ensure!(
        vn_subgroup_by_definition(frame, &closure)? == direct,
        "{}: {} and its closure disagree",
        a.name(),
        a.show_set(s)
    );
    Ok(direct)
}

/// `A/ₘS_u`, checked to be a geometric von Neumann hyperring.
pub fn geometric_hull(a: &Arc<Multiring>) -> Result<Construction> {
    let frame = idempotent_frame(a)?;
    let su = unity_set(&frame)?;
    ensure!(
        is_vn_subgroup(&frame, &su)?,
        "{}: S_u is not a von Neumann subgroup",
        a.name()
    );
    let hull = marshall_quotient(a, &su)?;
    ensure!(is_gvnh(hull.result())?, "{}: A/ₘS_u is not geometric", a.name());
    Ok(hull)
}

/// The three equivalent descriptions of real reduced hyperrings:
/// real reduced with annihilating complements; real reduced hyperring;
/// geometric von Neumann with `1 + a² = {1}`. They must agree.
pub fn rrm_vnh_equivalence(a: &Arc<Multiring>) -> Result<[bool; 3]> {
    let rrm = is_rrm(a);
    let annihilators = a
        .elements()
        .all(|x| a.sub(a.one(), a.square(x)).iter().any(|y| a.mul(x, y) == a.zero()));
    let first = rrm && annihilators;
    let second = rrm && is_hyperring(a);
    let one = a.singleton(a.one());
    let third = is_gvnh(a)? && a.elements().all(|x| a.add(a.one(), a.square(x)) == &one);
    ensure!(
        first == second && second == third,
        "{}: real reduced descriptions disagree ({first}, {second}, {third})",
        a.name()
    );
    Ok([first, second, third])
}

/// `Q_T(A) ≅ A/ₘ(1 + T)` for a von Neumann hyperring and proper preorder.
#[derive(Debug, Clone)]
pub struct QRepresentation {
    pub quotient: Construction,
    pub q: QPresentation,
    /// `Q_T(A) → A/ₘ(1 + T)`.
    pub iso: Morphism,
}

pub fn represent_q(a: &Arc<Multiring>, t: &Preorder, budget: &Budget) -> Result<QRepresentation> {
    let frame = idempotent_frame(a)?;
    if !t.is_proper() {
        return Err(Error::ImproperPreorder(format!("-1 ∈ {}", a.show_set(t.elems()))));
    }
    let one_plus = a.add_elem_set(a.one(), t.elems());
    ensure!(
        is_vn_subgroup(&frame, &one_plus)?,
        "{}: 1 + T is not a von Neumann subgroup",
        a.name()
    );
    let quotient = marshall_quotient(a, &one_plus)?;
    let q = q_construction(a, t, budget)?;
    let iso = canonical_isomorphism(q.projection(), quotient.canonical())?;
    Ok(QRepresentation { quotient, q, iso })
}

/// First element at which `f` fails to commute with `i`, `ᶜ` or `∇`.
pub fn frame_compatibility_failure(f: &Morphism, from: &IdempotentFrame, to: &IdempotentFrame) -> Option<Elem> {
    f.dom().elements().find(|&x| {
        let y = f.apply(x);
        f.apply(from.support(x)) != to.support(y)
            || f.apply(from.complement(x)) != to.complement(y)
            || match (from.nabla(x), to.nabla(y)) {
                (Some(d), Some(e)) => f.apply(d) != e,
                _ => false,
            }
    })
}

/// Checks on a geometric frame: `∇(a)` is a unit and `a = i(a)∇(a)`.
pub fn nabla_failure(frame: &IdempotentFrame) -> Option<String> {
    let a = frame.ring();
    let u = units(a);
    for x in a.elements() {
        let d = frame.nabla(x)?;
        if !u.contains(d) {
            return Some(format!("∇({}) = {} is not a unit", a.elem_name(x), a.elem_name(d)));
        }
        if a.mul(frame.support(x), d) != x {
            return Some(format!("i({0})∇({0}) != {0}", a.elem_name(x)));
        }
    }
    None
}

/// A pair `x ≠ y` with `∇(i(x)) = ∇(i(y))` and `∇(x) = ∇(y)`.
///
/// Such pairs exist exactly when `∇` cannot tell `0` from `1` in some residue
/// hyperfield, i.e. when `-1 = 1` there (`𝕂`, `ℤ/2`).
pub fn nabla_determination_failure(frame: &IdempotentFrame) -> Option<(Elem, Elem)> {
    let a = frame.ring();
    let mut seen = std::collections::HashMap::new();
    for x in a.elements() {
        let key = (frame.nabla(frame.support(x))?, frame.nabla(x)?);
        if let Some(y) = seen.insert(key, x) {
            return Some((y, x));
        }
    }
    None
}

/// Whether `-1 ≠ 1` in every residue hyperfield.
pub fn residues_distinguish_signs(a: &Arc<Multiring>) -> Result<bool> {
    Ok(residues(a)?.iter().all(|r| r.field.minus_one() != r.field.one()))
}

/// Marshall quotients of a von Neumann hyperring by multiplicative sets
/// generated by one element that are von Neumann but not geometric.
pub fn non_geometric_quotients(a: &Arc<Multiring>) -> Result<Vec<(Subset, Construction)>> {
    let frame = idempotent_frame(a)?;
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for x in a.elements() {
        let s = a.multiplicative_closure(&a.singleton(x));
        if s.contains(a.zero()) || seen.contains(&s) {
            continue;
        }
        seen.push(s.clone());
        let quotient = marshall_quotient(a, &s)?;
        let b = quotient.result();
        if is_vnh_multiring(b)? && !is_geometric(b)? {
            ensure!(
                !vn_subgroup_by_definition(&frame, &s)?,
                "{}: {} is a von Neumann subgroup with non-geometric quotient",
                a.name(),
                a.show_set(&s)
            );
            out.push((s, quotient));
        }
    }
    Ok(out)
}
