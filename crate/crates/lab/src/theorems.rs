//! Theorem checkers, one per id, each run against a single instance.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use hyperring_core::builders::{krasner_shared, power, sign3_shared, zmod};
use hyperring_core::constructions::{
    cancellative_closure, count_fillers, induced_map_quotient, local_at, localize, marshall_quotient,
    quotient_by_ideal, residues,
};
use hyperring_core::hull::{
    hull, hull_map, hull_reduction_iso, hull_universal, pointwise_operator_failure, verify_hull_theorem,
};
use hyperring_core::morphism::enumerate_morphisms;
use hyperring_core::multiring::{classify, is_hyperring, units};
use hyperring_core::presheaf::{
    build_presheaf, fiber_to_open_failure, invertible_property, is_monopresheaf, is_sheaf, stalk,
};
use hyperring_core::realspec::{
    cone_order_bijection, enumerate_sper, hyperfield_representation_check, is_real_reduced_hyperfield, is_rrm,
    is_semireal, one_plus_squares_check, prime_cones, pythagoras_number, pythagoras_of_residues, q_reduction,
    q_universal_check, real_prime_clauses, rrm_failure, separation_failure, sums_of_squares, Preorder,
};
use hyperring_core::spectra::{
    all_ideals, basic_open, is_maximal, is_prime_ideal, point_closure, primes_from_krasner, spec, spec_by_both_routes,
    spectral_map,
};
use hyperring_core::vonneumann::{
    frame_compatibility_failure, geometric_hull, idempotent_frame, is_geometric, is_vn_subgroup, is_vnh,
    nabla_determination_failure, nabla_failure, non_geometric_quotients, partitions_of_unity, represent_q,
    residues_distinguish_signs, rrm_vnh_equivalence, unity_set,
};
use hyperring_core::{Budget, Error, Morphism, Multiring, Subset};

use crate::registry::Instance;
use crate::report::{Outcome, Status, VerificationReport};

type Verdict = Result<Status, Error>;

pub struct Theorem {
    pub id: &'static str,
    pub statement: &'static str,
    check: fn(&Arc<Multiring>, &Budget) -> Verdict,
}

impl Theorem {
    pub fn check(&self, a: &Arc<Multiring>, budget: &Budget) -> Status {
        match (self.check)(a, budget) {
            Ok(s) => s,
            Err(Error::BudgetExceeded { what, detail }) => Status::Skipped {
                reason: format!("budget exceeded: {what} ({detail})"),
            },
            Err(e) => Status::Fail { witness: e.to_string() },
        }
    }
}

fn skip(reason: &str) -> Verdict {
    Ok(Status::Skipped {
        reason: reason.to_string(),
    })
}

fn require(cond: bool, witness: impl FnOnce() -> String) -> Result<(), Error> {
    if cond {
        Ok(())
    } else {
        Err(Error::TheoremViolation(witness()))
    }
}

const IDEAL_CAP: usize = 1 << 12;

fn vnh(a: &Arc<Multiring>) -> Result<bool, Error> {
    Ok(is_hyperring(a) && is_vnh(a)?)
}

fn gvnh(a: &Arc<Multiring>) -> Result<bool, Error> {
    Ok(vnh(a)? && is_geometric(a)?)
}

/// Multiplicative sets generated by one element, deduplicated.
fn principal_multiplicative_sets(a: &Multiring) -> Vec<Subset> {
    let mut out: Vec<Subset> = Vec::new();
    for x in a.elements() {
        let s = a.multiplicative_closure(&a.singleton(x));
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

/// Small geometric von Neumann targets for morphism-based checks.
fn targets() -> Vec<Arc<Multiring>> {
    let k = krasner_shared();
    vec![
        sign3_shared(),
        k.clone(),
        Arc::new(zmod(2)),
        Arc::new(zmod(3)),
        power(&k, 2).expect("small product").result().clone(),
    ]
}

fn sorted_image(f: &Morphism) -> Result<Vec<usize>, Error> {
    let mut v = spectral_map(f)?;
    v.sort_unstable();
    Ok(v)
}

fn primes_where(primes: &[Subset], keep: impl Fn(&Subset) -> bool) -> Vec<usize> {
    (0..primes.len()).filter(|&k| keep(&primes[k])).collect()
}

fn check_prime_ideals(a: &Arc<Multiring>, budget: &Budget) -> Verdict {
    let primes = spec(a)?;
    require(a.is_zero_ring() == primes.is_empty(), || {
        "spec is empty exactly for the zero ring".into()
    })?;
    let (by_scan, by_search) = spec_by_both_routes(a);
    if let Some(by_scan) = by_scan {
        require(by_scan == by_search, || {
            "exhaustive scan and propagation search differ".into()
        })?;
    }
    let by_krasner = primes_from_krasner(a, budget)?;
    require(by_search == by_krasner, || {
        "prime search and kernels into K differ".into()
    })?;
    let ideals = all_ideals(a, IDEAL_CAP)?;
    let sets = principal_multiplicative_sets(a);
    for i in &ideals {
        for s in &sets {
            if !i.intersects(s) {
                require(primes.iter().any(|p| i.is_subset(p) && !p.intersects(s)), || {
                    format!("no prime contains {} and avoids {}", a.show_set(i), a.show_set(s))
                })?;
            }
        }
        if is_maximal(a, i) {
            require(is_prime_ideal(a, i), || {
                format!("maximal ideal {} is not prime", a.show_set(i))
            })?;
        }
    }
    for x in a.elements() {
        for y in a.elements() {
            let meet = basic_open(a, x)?.intersection(&basic_open(a, y)?);
            require(meet == basic_open(a, a.mul(x, y))?, || {
                format!("D({0}) ∩ D({1}) != D({0}{1})", a.elem_name(x), a.elem_name(y))
            })?;
        }
    }
    for k in 0..primes.len() {
        let closure = point_closure(&primes, k);
        for j in 0..primes.len() {
            require(closure.contains(j) == primes[k].is_subset(&primes[j]), || {
                format!("closure of prime {k}")
            })?;
        }
    }
    Ok(Status::Pass)
}

fn check_ideal_quotients(a: &Arc<Multiring>, budget: &Budget) -> Verdict {
    let primes = spec(a)?;
    for i in all_ideals(a, IDEAL_CAP)? {
        let q = quotient_by_ideal(a, &i)?;
        let shown = a.show_set(&i);
        require(q.canonical().kernel() == i, || format!("kernel of A → A/{shown}"))?;
        require(
            sorted_image(q.canonical())? == primes_where(&primes, |p| i.is_subset(p)),
            || format!("spec(A/{shown}) is not the primes above {shown}"),
        )?;
        if is_hyperring(a) {
            require(is_hyperring(q.result()), || format!("A/{shown} is not a hyperring"))?;
        }
        if !i.contains(a.one()) {
            require(classify(q.result()).multifield == is_maximal(a, &i), || {
                format!("A/{shown} multifield vs maximality")
            })?;
        }
        if is_prime_ideal(a, &i) {
            require(classify(q.result()).multidomain, || {
                format!("A/{shown} is not a multidomain")
            })?;
        }
        let id = Morphism::identity(a);
        require(induced_map_quotient(&id, &i, &i, budget)?.map.is_identity(), || {
            format!("induced identity on A/{shown}")
        })?;
    }
    Ok(Status::Pass)
}

fn check_localizations(a: &Arc<Multiring>, _: &Budget) -> Verdict {
    let primes = spec(a)?;
    for s in principal_multiplicative_sets(a) {
        let l = localize(a, &s)?;
        let shown = a.show_set(&s);
        require(l.result().is_zero_ring() == s.contains(a.zero()), || {
            format!("{shown}⁻¹A zero iff 0 ∈ S")
        })?;
        require(
            sorted_image(l.canonical())? == primes_where(&primes, |p| !p.intersects(&s)),
            || format!("spec({shown}⁻¹A) is not the primes avoiding {shown}"),
        )?;
        require(l.canonical().image_of(&s).is_subset(&units(l.result())), || {
            format!("{shown} not inverted")
        })?;
        if is_hyperring(a) {
            require(is_hyperring(l.result()), || format!("{shown}⁻¹A is not a hyperring"))?;
        }
    }
    Ok(Status::Pass)
}

fn check_marshall_quotients(a: &Arc<Multiring>, _: &Budget) -> Verdict {
    let primes = spec(a)?;
    for s in principal_multiplicative_sets(a) {
        let m = marshall_quotient(a, &s)?;
        let shown = a.show_set(&s);
        let one = m.result().singleton(m.result().one());
        require(s.contains(a.zero()) || m.canonical().image_of(&s) == one, || {
            format!("π({shown}) != {{1}}")
        })?;
        require(
            sorted_image(m.canonical())? == primes_where(&primes, |p| !p.intersects(&s)),
            || format!("spec(A/ₘ{shown}) is not the primes avoiding {shown}"),
        )?;
        let closed = cancellative_closure(a, &s)?;
        let again = marshall_quotient(a, &closed)?;
        require(again.canonical().map() == m.canonical().map(), || {
            format!("A/ₘ{shown} differs from its closure")
        })?;
        if is_hyperring(a) {
            require(is_hyperring(m.result()), || format!("A/ₘ{shown} is not a hyperring"))?;
        }
    }
    Ok(Status::Pass)
}

fn check_residue_fields(a: &Arc<Multiring>, _: &Budget) -> Verdict {
    for r in residues(a)? {
        local_at(a, &r.prime)?;
        require(classify(&r.field).hyperfield, || {
            format!("K_A({}) is not a hyperfield", a.show_set(&r.prime))
        })?;
    }
    Ok(Status::Pass)
}

fn check_prime_cones(a: &Arc<Multiring>, budget: &Budget) -> Verdict {
    let points = enumerate_sper(a, None, budget)?;
    let found = prime_cones(a, budget)?;
    require(points.len() == found.len(), || {
        format!("{} cones, {} orders", found.len(), points.len())
    })?;
    cone_order_bijection(a, budget)?;
    require(is_semireal(a) == !points.is_empty(), || {
        "sper non-empty iff semi-real".into()
    })?;
    for p in spec(a)?.iter() {
        let clauses = real_prime_clauses(a, p, budget)?;
        require(clauses.iter().all(|&c| c == clauses[0]), || {
            format!("real-prime clauses {clauses:?} disagree at {}", a.show_set(p))
        })?;
    }
    Ok(Status::Pass)
}

fn check_real_reduction(a: &Arc<Multiring>, budget: &Budget) -> Verdict {
    if !is_semireal(a) {
        return skip("not semi-real");
    }
    let q = q_reduction(a, budget)?;
    require(is_rrm(q.result()), || {
        format!("{} is not real reduced", q.result().name())
    })?;
    Ok(Status::Pass)
}

fn check_real_reduced_iso(a: &Arc<Multiring>, budget: &Budget) -> Verdict {
    if !is_semireal(a) {
        return skip("not semi-real");
    }
    let q = q_reduction(a, budget)?;
    let rrm = is_rrm(a);
    require(q.projection().is_isomorphism() == rrm, || {
        format!("π iso = {}, real reduced = {rrm}", q.projection().is_isomorphism())
    })?;
    if rrm {
        if let Some((x, y, z)) = separation_failure(a, budget)? {
            return Err(Error::TheoremViolation(format!(
                "orders do not separate {} ∈ {} + {}",
                a.elem_name(x),
                a.elem_name(y),
                a.elem_name(z)
            )));
        }
    } else {
        require(rrm_failure(a).is_some(), || "no failing clause".into())?;
    }
    Ok(Status::Pass)
}

fn check_real_reduction_universal(a: &Arc<Multiring>, budget: &Budget) -> Verdict {
    if !is_semireal(a) {
        return skip("not semi-real");
    }
    let t = Preorder::new(a, sums_of_squares(a))?;
    for point in enumerate_sper(a, None, budget)? {
        let fac = q_universal_check(&t, point.morphism(), budget)?;
        require(fac.fillers.map_or(true, |k| k == 1), || {
            format!("{:?} factorizations", fac.fillers)
        })?;
    }
    let q = q_reduction(a, budget)?;
    require(q_universal_check(&t, q.projection(), budget)?.map.is_identity(), || {
        "π does not factor as identity".into()
    })?;
    Ok(Status::Pass)
}

fn check_one_plus_squares(a: &Arc<Multiring>, budget: &Budget) -> Verdict {
    if !is_semireal(a) {
        return skip("not semi-real");
    }
    one_plus_squares_check(a, budget)?;
    if classify(a).hyperfield {
        hyperfield_representation_check(a, budget)?;
    }
    Ok(Status::Pass)
}

fn check_basic_opens(a: &Arc<Multiring>, _: &Budget) -> Verdict {
    build_presheaf(a)?;
    let hyper = is_hyperring(a);
    for x in a.elements() {
        let holds = invertible_property(a, x)?;
        if hyper || is_rrm(a) {
            require(holds, || format!("invertible property fails at {}", a.elem_name(x)))?;
        }
    }
    Ok(Status::Pass)
}

fn check_stalks(a: &Arc<Multiring>, _: &Budget) -> Verdict {
    let sheaf = build_presheaf(a)?;
    for k in 0..spec(a)?.len() {
        let st = stalk(&sheaf, k)?;
        require(st.iso.is_isomorphism(), || format!("stalk at prime {k} is not A_p"))?;
    }
    if let Some((k, x, y, z)) = fiber_to_open_failure(a)? {
        return Err(Error::TheoremViolation(format!(
            "{} ∈ {} + {} at prime {k} holds on no basic open",
            a.elem_name(x),
            a.elem_name(y),
            a.elem_name(z)
        )));
    }
    Ok(Status::Pass)
}

fn check_regularity(a: &Arc<Multiring>, _: &Budget) -> Verdict {
    if !is_hyperring(a) {
        return skip("not a hyperring");
    }
    if is_vnh(a)? {
        for p in spec(a)?.iter() {
            require(is_maximal(a, p), || format!("prime {} is not maximal", a.show_set(p)))?;
        }
    }
    Ok(Status::Pass)
}

fn check_geometric(a: &Arc<Multiring>, budget: &Budget) -> Verdict {
    if !vnh(a)? {
        return skip("not a von Neumann hyperring");
    }
    let geometric = is_geometric(a)?;
    let mono = is_monopresheaf(a, budget)?;
    require(mono == geometric, || {
        format!("monopresheaf = {mono}, e + eᶜ = {{1}} = {geometric}")
    })?;
    if geometric {
        require(is_sheaf(a, budget)?, || "geometric but not a sheaf".into())?;
    }
    Ok(Status::Pass)
}

fn check_partitions_of_unity(a: &Arc<Multiring>, _: &Budget) -> Verdict {
    if !vnh(a)? {
        return skip("not a von Neumann hyperring");
    }
    let frame = idempotent_frame(a)?;
    partitions_of_unity(&frame)?;
    let su = unity_set(&frame)?;
    if frame.is_geometric() {
        require(su == a.singleton(a.one()), || format!("S_u = {}", a.show_set(&su)))?;
    }
    Ok(Status::Pass)
}

fn check_vn_subgroups(a: &Arc<Multiring>, _: &Budget) -> Verdict {
    if !vnh(a)? {
        return skip("not a von Neumann hyperring");
    }
    let frame = idempotent_frame(a)?;
    for s in principal_multiplicative_sets(a) {
        if !s.contains(a.zero()) {
            is_vn_subgroup(&frame, &s)?;
        }
    }
    non_geometric_quotients(a)?;
    Ok(Status::Pass)
}

fn check_geometric_hull(a: &Arc<Multiring>, budget: &Budget) -> Verdict {
    if !vnh(a)? {
        return skip("not a von Neumann hyperring");
    }
    let h = geometric_hull(a)?;
    require(is_geometric(h.result())?, || "A/ₘS_u is not geometric".into())?;
    let again = geometric_hull(h.result())?;
    require(again.canonical().is_isomorphism(), || {
        "geometric hull is not idempotent".into()
    })?;
    for b in targets() {
        for f in enumerate_morphisms(a, &b, budget)? {
            let k = count_fillers(h.canonical(), &f, budget)?;
            require(k.map_or(true, |k| k == 1), || {
                format!("{} has {k:?} factorizations", f.show())
            })?;
        }
    }
    Ok(Status::Pass)
}

fn check_nabla(a: &Arc<Multiring>, budget: &Budget) -> Verdict {
    if !gvnh(a)? {
        return skip("not a geometric von Neumann hyperring");
    }
    let frame = idempotent_frame(a)?;
    if let Some(w) = nabla_failure(&frame) {
        return Err(Error::TheoremViolation(w));
    }
    for b in targets() {
        let to = idempotent_frame(&b)?;
        for f in enumerate_morphisms(a, &b, budget)? {
            if let Some(x) = frame_compatibility_failure(&f, &frame, &to) {
                return Err(Error::TheoremViolation(format!(
                    "{} fails at {}",
                    f.show(),
                    a.elem_name(x)
                )));
            }
        }
    }
    if residues_distinguish_signs(a)? {
        if let Some((x, y)) = nabla_determination_failure(&frame) {
            return Err(Error::TheoremViolation(format!(
                "{} and {} share ∇ and ∇∘i",
                a.elem_name(x),
                a.elem_name(y)
            )));
        }
    }
    Ok(Status::Pass)
}

fn check_real_reduced_regular(a: &Arc<Multiring>, _: &Budget) -> Verdict {
    let clauses = rrm_vnh_equivalence(a)?;
    require(clauses.iter().all(|&c| c == clauses[0]), || {
        format!("clauses {clauses:?}")
    })?;
    Ok(Status::Pass)
}

fn check_real_reduction_quotient(a: &Arc<Multiring>, budget: &Budget) -> Verdict {
    if !is_semireal(a) {
        return skip("not semi-real");
    }
    if !vnh(a)? {
        return skip("not a von Neumann hyperring");
    }
    let t = Preorder::new(a, sums_of_squares(a))?;
    let rep = represent_q(a, &t, budget)?;
    require(rep.iso.is_isomorphism(), || {
        "Q_T(A) → A/ₘ(1+T) is not an isomorphism".into()
    })?;
    Ok(Status::Pass)
}

fn check_hull_injective(a: &Arc<Multiring>, budget: &Budget) -> Verdict {
    let h = hull(a, budget)?;
    let geometric = gvnh(a)?;
    require(h.canonical().is_bijective() == geometric, || {
        format!(
            "v_A bijective = {}, geometric = {geometric}",
            h.canonical().is_bijective()
        )
    })?;
    if let Some(w) = pointwise_operator_failure(&h)? {
        return Err(Error::TheoremViolation(w));
    }
    if a.is_ring() {
        require(h.result().is_ring(), || "hull of a ring has a multivalued sum".into())?;
    }
    Ok(Status::Pass)
}

fn check_hull_universal(a: &Arc<Multiring>, budget: &Budget) -> Verdict {
    let id = Morphism::identity(a);
    require(hull_map(&id, budget)?.map.is_identity(), || {
        "V(id) is not the identity".into()
    })?;
    let h = hull(a, budget)?;
    require(hull_universal(h.canonical(), budget)?.map.is_identity(), || {
        "v_A does not factor as identity".into()
    })?;
    for b in targets() {
        for f in enumerate_morphisms(a, &b, budget)? {
            let fac = hull_universal(&f, budget)?;
            require(fac.fillers.map_or(true, |k| k == 1), || {
                format!("{} has {:?} factorizations", f.show(), fac.fillers)
            })?;
        }
    }
    Ok(Status::Pass)
}

fn check_hull_invariants(a: &Arc<Multiring>, budget: &Budget) -> Verdict {
    verify_hull_theorem(a, budget)?;
    Ok(Status::Pass)
}

fn check_real_residues(a: &Arc<Multiring>, _: &Budget) -> Verdict {
    if !is_rrm(a) {
        return skip("not real reduced");
    }
    for r in residues(a)? {
        require(is_real_reduced_hyperfield(&r.field)?, || {
            format!("K_A({}) is not real reduced", a.show_set(&r.prime))
        })?;
    }
    Ok(Status::Pass)
}

fn check_hull_preserves_real(a: &Arc<Multiring>, budget: &Budget) -> Verdict {
    let rrm = is_rrm(a);
    let regular_real = is_semireal(a) && vnh(a)?;
    if !rrm && !regular_real {
        return skip("neither real reduced nor a semi-real von Neumann hyperring");
    }
    if rrm {
        require(is_rrm(hull(a, budget)?.result()), || "V(A) is not real reduced".into())?;
    }
    if regular_real {
        let q = q_reduction(a, budget)?;
        require(vnh(q.result())?, || "Q(A) is not von Neumann regular".into())?;
    }
    Ok(Status::Pass)
}

fn check_hull_real_reduction(a: &Arc<Multiring>, budget: &Budget) -> Verdict {
    if !is_semireal(a) {
        return skip("not semi-real");
    }
    hull_reduction_iso(a, budget)?;
    Ok(Status::Pass)
}

fn check_pythagoras(a: &Arc<Multiring>, _: &Budget) -> Verdict {
    if !vnh(a)? {
        return skip("Pythagorean number is defined for von Neumann hyperrings");
    }
    let global = pythagoras_number(a).value;
    let local = pythagoras_of_residues(a)?;
    require(global == local, || format!("P(A) = {global}, max P(K_A(q)) = {local}"))?;
    Ok(Status::Pass)
}

static THEOREMS: &[Theorem] = &[
    Theorem {
        id: "prime-ideals",
        statement: "prime ideal theorem and Zariski basis",
        check: check_prime_ideals,
    },
    Theorem {
        id: "ideal-quotients",
        statement: "quotients by ideals",
        check: check_ideal_quotients,
    },
    Theorem {
        id: "localizations",
        statement: "localizations",
        check: check_localizations,
    },
    Theorem {
        id: "marshall-quotients",
        statement: "Marshall quotients",
        check: check_marshall_quotients,
    },
    Theorem {
        id: "residue-fields",
        statement: "K_A(p) ≅ A_p/pA_p",
        check: check_residue_fields,
    },
    Theorem {
        id: "prime-cones",
        statement: "prime cones ↔ orders; real primes",
        check: check_prime_cones,
    },
    Theorem {
        id: "real-reduction",
        statement: "Q(A) is a real reduced multiring",
        check: check_real_reduction,
    },
    Theorem {
        id: "real-reduced-iso",
        statement: "A → Q(A) iso iff A real reduced; separation",
        check: check_real_reduced_iso,
    },
    Theorem {
        id: "real-reduction-universal",
        statement: "universal property of Q_T",
        check: check_real_reduction_universal,
    },
    Theorem {
        id: "one-plus-squares",
        statement: "Q(A) via 1 + ΣA²; hyperfield representation",
        check: check_one_plus_squares,
    },
    Theorem {
        id: "basic-opens",
        statement: "basic opens, radicals, saturations; invertible property",
        check: check_basic_opens,
    },
    Theorem {
        id: "stalks",
        statement: "stalks are A_p",
        check: check_stalks,
    },
    Theorem {
        id: "regularity",
        statement: "von Neumann regularity, two characterizations",
        check: check_regularity,
    },
    Theorem {
        id: "geometric",
        statement: "geometric iff monopresheaf iff e + eᶜ = {1}",
        check: check_geometric,
    },
    Theorem {
        id: "partitions-of-unity",
        statement: "partitions of unity",
        check: check_partitions_of_unity,
    },
    Theorem {
        id: "vn-subgroups",
        statement: "von Neumann subgroups and quotients",
        check: check_vn_subgroups,
    },
    Theorem {
        id: "geometric-hull",
        statement: "geometric hull A/ₘS_u",
        check: check_geometric_hull,
    },
    Theorem {
        id: "nabla",
        statement: "∇ calculus",
        check: check_nabla,
    },
    Theorem {
        id: "real-reduced-regular",
        statement: "real reduced ⟺ geometric regular with 1 + a² = {1}",
        check: check_real_reduced_regular,
    },
    Theorem {
        id: "real-reduction-quotient",
        statement: "Q_T(A) ≅ A/ₘ(1 + T)",
        check: check_real_reduction_quotient,
    },
    Theorem {
        id: "hull-injective",
        statement: "v_A bijective on geometric regular hyperrings",
        check: check_hull_injective,
    },
    Theorem {
        id: "hull-universal",
        statement: "universal property of V(A)",
        check: check_hull_universal,
    },
    Theorem {
        id: "hull-invariants",
        statement: "spec, sper and residues of V(A)",
        check: check_hull_invariants,
    },
    Theorem {
        id: "real-residues",
        statement: "residues of real reduced multirings",
        check: check_real_residues,
    },
    Theorem {
        id: "hull-preserves-real",
        statement: "V preserves real reduced; Q preserves regular",
        check: check_hull_preserves_real,
    },
    Theorem {
        id: "hull-real-reduction",
        statement: "Q(V(A)) ≅ V(Q(A))",
        check: check_hull_real_reduction,
    },
    Theorem {
        id: "pythagoras",
        statement: "P(A) = max P(K_A(q))",
        check: check_pythagoras,
    },
];

pub fn theorem_registry() -> &'static [Theorem] {
    THEOREMS
}

pub fn theorem(id: &str) -> Option<&'static Theorem> {
    THEOREMS.iter().find(|t| t.id.eq_ignore_ascii_case(id))
}

pub fn run_one(t: &Theorem, instance: &Instance, budget: &Budget, timings: bool) -> Outcome {
    let start = Instant::now();
    let status = t.check(&instance.ring, budget);
    Outcome {
        theorem: t.id.to_string(),
        instance: instance.id.clone(),
        status,
        wall_ms: timings.then(|| start.elapsed().as_secs_f64() * 1e3),
    }
}

/// Runs every pair in parallel; the report is sorted, so the schedule does
/// not affect the output.
pub fn verify(theorems: &[&Theorem], instances: &[Instance], budget: &Budget, timings: bool) -> VerificationReport {
    let pairs: Vec<(&Theorem, &Instance)> = theorems
        .iter()
        .flat_map(|t| instances.iter().map(move |i| (*t, i)))
        .collect();
    let results = pairs.par_iter().map(|(t, i)| run_one(t, i, budget, timings)).collect();
    VerificationReport::new(results)
}
