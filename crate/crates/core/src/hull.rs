//! The von Neumann hull `V(A)`.
//!
//! `V(A)` consists of the constructible sections of the residue bundle
//! `p ↦ K_A(p)`. On a finite spectrum the constructible topology is
//! discrete, so every clopen chart is a single point; and every element of
//! `K_A(p)` is a fraction `x/y` with `y ∉ p`. Every pointwise choice is
//! therefore a constructible section, and `V(A)` is the full product
//! `∏_p K_A(p)` with pointwise operations and pointwise sums.

use std::sync::Arc;

use crate::budget::Budget;
use crate::builders::{product, Product};
use crate::constructions::{count_fillers, residues, Residue};
use crate::error::{ensure, violation, Error, Result};
use crate::morphism::{factor_through, Morphism};
use crate::multiring::Multiring;
use crate::realspec::{is_semireal, q_reduction, q_universal_check, sper_pullback, sums_of_squares, Preorder};
use crate::spectra::spectral_map;
use crate::vonneumann::{idempotent_frame, is_gvnh, nabla_failure};

/// `V(A)` with `v_A: A → V(A)`.
#[derive(Debug, Clone)]
pub struct HullPresentation {
    residues: Vec<Residue>,
    product: Product,
    result: Arc<Multiring>,
    canonical: Morphism,
}

impl HullPresentation {
    pub fn source(&self) -> &Arc<Multiring> {
        self.canonical.dom()
    }

    pub fn residues(&self) -> &[Residue] {
        &self.residues
    }

    pub fn result(&self) -> &Arc<Multiring> {
        &self.result
    }

    /// `v_A`.
    pub fn canonical(&self) -> &Morphism {
        &self.canonical
    }

    /// The value of a section at the `k`-th prime.
    pub fn value_at(&self, section: usize, k: usize) -> usize {
        self.product.coordinate(section, k)
    }

    /// The section with the given values, one per prime.
    pub fn section(&self, values: &[usize]) -> usize {
        self.product.encode(values)
    }
}

/// Builds `V(A)` and checks it is a geometric von Neumann hyperring.
pub fn hull(a: &Arc<Multiring>, budget: &Budget) -> Result<HullPresentation> {
    let residues = residues(a)?;
    let size = residues.iter().try_fold(1usize, |acc, r| {
        acc.checked_mul(r.field.n()).filter(|&s| s <= budget.carrier)
    });
    if size.is_none() {
        return Err(Error::BudgetExceeded {
            what: format!("V({})", a.name()),
            detail: format!("product of residue sizes exceeds {}", budget.carrier),
        });
    }
    let fields: Vec<Arc<Multiring>> = residues.iter().map(|r| r.field.clone()).collect();
    let product = product(&fields)?;
    let result = Arc::new(product.result().renamed(format!("V({})", a.name())));
    let map = a
        .elements()
        .map(|x| {
            let coords: Vec<usize> = residues.iter().map(|r| r.canonical.apply(x)).collect();
            product.encode(&coords)
        })
        .collect();
    let canonical = Morphism::new(a.clone(), result.clone(), map)?;
    ensure!(
        is_gvnh(&result)?,
        "{} is not a geometric von Neumann hyperring",
        result.name()
    );
    Ok(HullPresentation {
        residues,
        product,
        result,
        canonical,
    })
}

/// Checks the pointwise operators on `V(A)`: `i(f)` idempotent,
/// `f·fᶜ = 0`, `fᶜ ∈ 1 - i(f)` and `f = ∇(f)·i(f)`.
pub fn pointwise_operator_failure(h: &HullPresentation) -> Result<Option<String>> {
    let v = h.result();
    let frame = idempotent_frame(v)?;
    for x in v.elements() {
        let (e, c) = (frame.support(x), frame.complement(x));
        if !v.is_idempotent(e) || v.mul(x, c) != v.zero() || !v.sub(v.one(), e).contains(c) {
            return Ok(Some(format!("support or complement fails at {}", v.elem_name(x))));
        }
    }
    Ok(nabla_failure(&frame))
}

/// `V(f): V(A) → V(B)` together with both hulls.
#[derive(Debug, Clone)]
pub struct HullMap {
    pub from: HullPresentation,
    pub to: HullPresentation,
    pub map: Morphism,
    /// Number of morphisms making the square with `v_A`, `v_B` commute, when
    /// enumeration fits the budget.
    pub fillers: Option<usize>,
}

/// `V(f)(s)(p) = f̄(s(f⁻¹p))`, with `f̄: K_A(f⁻¹p) → K_B(p)` the induced
/// residue map.
pub fn hull_map(f: &Morphism, budget: &Budget) -> Result<HullMap> {
    let from = hull(f.dom(), budget)?;
    let to = hull(f.cod(), budget)?;
    let pulled = spectral_map(f)?;
    let residue_maps: Vec<Morphism> = to
        .residues
        .iter()
        .zip(&pulled)
        .map(|(r, &q)| factor_through(&from.residues[q].canonical, &f.then(&r.canonical)?))
        .collect::<Result<_>>()?;
    let map = from
        .result
        .elements()
        .map(|s| {
            let coords: Vec<usize> = residue_maps
                .iter()
                .zip(&pulled)
                .map(|(g, &q)| g.apply(from.value_at(s, q)))
                .collect();
            to.section(&coords)
        })
        .collect();
    let map = Morphism::new(from.result.clone(), to.result.clone(), map)?;
    let down = f.then(&to.canonical)?;
    ensure!(
        from.canonical.then(&map)?.same_map(&down),
        "V({}) does not commute with the canonical maps",
        f.show()
    );
    let fillers = count_fillers(&from.canonical, &down, budget)?;
    if let Some(k) = fillers {
        ensure!(k == 1, "{k} morphisms V(A) → V(B) commute with f");
    }
    Ok(HullMap { from, to, map, fillers })
}

/// The factorization `f̄ = v_B⁻¹ ∘ V(f)` of `f: A → B` through `v_A`, for a
/// geometric von Neumann hyperring `B`.
#[derive(Debug, Clone)]
pub struct HullFactorization {
    pub hull: HullMap,
    pub map: Morphism,
    pub fillers: Option<usize>,
}

pub fn hull_universal(f: &Morphism, budget: &Budget) -> Result<HullFactorization> {
    if !is_gvnh(f.cod())? {
        return Err(Error::CodomainNotGvNH(f.cod().name().to_string()));
    }
    let hm = hull_map(f, budget)?;
    let back = hm
        .to
        .canonical
        .inverse()
        .ok_or_else(|| violation!("v_{} is not an isomorphism", f.cod().name()))?;
    let map = hm.map.then(&back)?;
    ensure!(
        hm.from.canonical.then(&map)?.same_map(f),
        "the hull factorization of {} does not restrict to f",
        f.show()
    );
    let fillers = count_fillers(&hm.from.canonical, f, budget)?;
    if let Some(k) = fillers {
        ensure!(k == 1, "{k} morphisms V(A) → B restrict to f");
    }
    Ok(HullFactorization { hull: hm, map, fillers })
}

/// The three comparisons between `A` and `V(A)`.
#[derive(Debug, Clone)]
pub struct HullTheoremReport {
    /// `spec(V(A)) → spec(A)`, as indices.
    pub spec_map: Vec<usize>,
    /// `sper(V(A)) → sper(A)`, as indices.
    pub sper_map: Vec<usize>,
    /// `K_A(q) → K_{V(A)}(p)` for each prime `p` of `V(A)`.
    pub residue_isos: Vec<Morphism>,
}

/// Checks that `v_A` induces bijections on prime and real spectra and
/// isomorphisms of residue hyperfields.
pub fn verify_hull_theorem(a: &Arc<Multiring>, budget: &Budget) -> Result<HullTheoremReport> {
    let h = hull(a, budget)?;
    let v = &h.canonical;
    let spec_map = spectral_map(v)?;
    let bijective = |m: &[usize], count: usize| {
        let mut s = m.to_vec();
        s.sort_unstable();
        s.dedup();
        s.len() == m.len() && m.len() == count
    };
    ensure!(
        bijective(&spec_map, h.residues.len()),
        "spec(V({0})) → spec({0}) is not a bijection",
        a.name()
    );
    let sper_map = sper_pullback(v, budget)?;
    let sper_count = crate::realspec::enumerate_sper(a, None, budget)?.len();
    ensure!(
        bijective(&sper_map, sper_count),
        "sper(V({0})) → sper({0}) is not a bijection",
        a.name()
    );
    let hull_residues = residues(h.result())?;
    let mut residue_isos = Vec::with_capacity(hull_residues.len());
    for (r, &q) in hull_residues.iter().zip(&spec_map) {
        let m = factor_through(&h.residues[q].canonical, &v.then(&r.canonical)?)?;
        ensure!(
            m.is_isomorphism(),
            "{} → {} is not an isomorphism",
            m.dom().name(),
            m.cod().name()
        );
        residue_isos.push(m);
    }
    Ok(HullTheoremReport {
        spec_map,
        sper_map,
        residue_isos,
    })
}

/// The mutually inverse maps `Q(V(A)) ⇄ V(Q(A))`.
#[derive(Debug, Clone)]
pub struct HullReductionIso {
    /// `Q(V(A)) → V(Q(A))`.
    pub forward: Morphism,
    /// `V(Q(A)) → Q(V(A))`.
    pub backward: Morphism,
}

/// Builds `f: Q(V(A)) → V(Q(A))` from the universal property of `Q` applied
/// to `V(π_A)`, and `g: V(Q(A)) → Q(V(A))` from the universal property of
/// `V` applied to `Q(v_A)`, and checks they are inverse.
pub fn hull_reduction_iso(a: &Arc<Multiring>, budget: &Budget) -> Result<HullReductionIso> {
    if !is_semireal(a) {
        return Err(Error::NotSemireal(a.name().to_string()));
    }
    let qa = q_reduction(a, budget)?;
    let va = hull(a, budget)?;
    let v = va.result();
    ensure!(is_semireal(v), "{} is not semi-real", v.name());
    let qv = q_reduction(v, budget)?;
    let hull_of_pi = hull_map(qa.projection(), budget)?;
    ensure!(
        va.canonical.same_map(&hull_of_pi.from.canonical),
        "hull of {} is not reproducible",
        a.name()
    );
    let t = Preorder::new(v, sums_of_squares(v))?;
    let forward = q_universal_check(&t, &hull_of_pi.map, budget)?.map;
    let q_of_v = factor_through(qa.projection(), &va.canonical.then(qv.projection())?)?;
    let backward = hull_universal(&q_of_v, budget)?.map;
    ensure!(
        forward.then(&backward)?.is_identity(),
        "g ∘ f is not the identity on Q(V(A))"
    );
    ensure!(
        backward.then(&forward)?.is_identity(),
        "f ∘ g is not the identity on V(Q(A))"
    );
    Ok(HullReductionIso { forward, backward })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{power, sign3, zmod};
    use crate::morphism::find_isomorphism;

    #[test]
    fn hull_of_z6_is_crt() {
        let b = Budget::default();
        let z6 = Arc::new(zmod(6));
        let h = hull(&z6, &b).unwrap();
        assert_eq!(h.result().n(), 6);
        assert!(h.canonical().is_isomorphism());
        assert!(h.result().is_ring());
        assert_eq!(pointwise_operator_failure(&h).unwrap(), None);
    }

    #[test]
    fn nabla_pairs_collide_in_characteristic_two() {
        let b = Budget::default();
        let z6 = Arc::new(zmod(6));
        let h = hull(&z6, &b).unwrap();
        let frame = crate::vonneumann::idempotent_frame(h.result()).unwrap();
        assert!(!crate::vonneumann::residues_distinguish_signs(h.result()).unwrap());
        assert!(crate::vonneumann::nabla_determination_failure(&frame).is_some());
        let p = power(&Arc::new(sign3()), 2).unwrap();
        let frame = crate::vonneumann::idempotent_frame(p.result()).unwrap();
        assert!(crate::vonneumann::residues_distinguish_signs(p.result()).unwrap());
        assert_eq!(crate::vonneumann::nabla_determination_failure(&frame), None);
    }

    #[test]
    fn hull_of_non_regular_ring() {
        let b = Budget::default();
        let z4 = Arc::new(zmod(4));
        let h = hull(&z4, &b).unwrap();
        assert_eq!(h.result().n(), 2);
        assert!(find_isomorphism(h.result(), &Arc::new(zmod(2)), &b).unwrap().is_some());
        verify_hull_theorem(&z4, &b).unwrap();
    }

    #[test]
    fn hull_of_geometric_is_itself() {
        let b = Budget::default();
        let s = Arc::new(sign3());
        let p = power(&s, 2).unwrap();
        let h = hull(p.result(), &b).unwrap();
        assert!(h.canonical().is_isomorphism());
        let r = verify_hull_theorem(p.result(), &b).unwrap();
        assert_eq!(r.spec_map.len(), 2);
    }

    #[test]
    fn factorization_of_a_reduction() {
        let b = Budget::default();
        let z6 = Arc::new(zmod(6));
        let z2 = Arc::new(zmod(2));
        let f = Morphism::new(z6.clone(), z2, (0..6).map(|x| x % 2).collect()).unwrap();
        let fac = hull_universal(&f, &b).unwrap();
        assert_eq!(fac.fillers, Some(1));
    }

    #[test]
    fn codomain_must_be_geometric() {
        let b = Budget::default();
        let z4 = Arc::new(zmod(4));
        let id = Morphism::identity(&z4);
        assert!(matches!(hull_universal(&id, &b), Err(Error::CodomainNotGvNH(_))));
    }

    #[test]
    fn q_and_v_commute() {
        let b = Budget::default();
        let s = Arc::new(sign3());
        hull_reduction_iso(&s, &b).unwrap();
        hull_reduction_iso(power(&s, 2).unwrap().result(), &b).unwrap();
    }
}
