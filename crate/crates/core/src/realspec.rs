//! Orders, prime cones, preorders and the real reduction `Q_T(A)`.
//!
//! An order of `A` is a morphism `A → 3`; the collection of orders is the
//! real spectrum. Orders are stored as morphisms into a shared copy of the
//! sign hyperfield.

use std::fmt;
use std::sync::Arc;

use crate::budget::Budget;
use crate::builders::{sign3_shared, sign_value, SIGN_NEG};
use crate::constructions::{count_fillers, marshall_quotient, residue_hyperfield, Construction};
use crate::error::{ensure, violation, Error, Result};
use crate::morphism::{canonical_isomorphism, enumerate_morphisms_unchecked, factor_through, Morphism};
use crate::multiring::{classify, Elem, Multiring};
use crate::spectra::is_prime_ideal;
use crate::subset::Subset;

/// An order `σ: A → 3`.
#[derive(Debug, Clone)]
pub struct SperPoint {
    order: Morphism,
}

impl SperPoint {
    /// Wraps a sign vector, checking that it is a morphism into `3`.
    pub fn from_signs(a: &Arc<Multiring>, signs: &[i8]) -> Result<SperPoint> {
        if signs.len() != a.n() {
            return Err(Error::LengthMismatch(format!(
                "{} signs for a carrier of {}",
                signs.len(),
                a.n()
            )));
        }
        let map = signs.iter().map(|&s| crate::builders::sign_elem(s)).collect();
        Ok(SperPoint {
            order: Morphism::new(a.clone(), sign3_shared(), map)?,
        })
    }

    pub fn owner(&self) -> &Arc<Multiring> {
        self.order.dom()
    }

    pub fn morphism(&self) -> &Morphism {
        &self.order
    }

    pub fn sign(&self, x: Elem) -> i8 {
        sign_value(self.order.apply(x))
    }

    pub fn signs(&self) -> Vec<i8> {
        self.order.map().iter().map(|&x| sign_value(x)).collect()
    }

    /// `σ⁻¹(0)`.
    pub fn support(&self) -> Subset {
        self.order.kernel()
    }

    /// `σ⁻¹({0, 1})`.
    pub fn cone(&self) -> Subset {
        let dom = self.owner();
        dom.set_of(dom.elements().filter(|&x| self.order.apply(x) != SIGN_NEG))
    }
}

/// Orders sending every element of `t` to `0` or `1`; all orders if `t` is
/// `None`. Sorted by sign vector.
pub fn enumerate_sper(a: &Arc<Multiring>, t: Option<&Subset>, budget: &Budget) -> Result<Vec<SperPoint>> {
    let all = enumerate_morphisms_unchecked(a, &sign3_shared(), budget)?;
    Ok(all
        .into_iter()
        .filter(|m| t.map_or(true, |t| t.iter().all(|x| m.apply(x) != SIGN_NEG)))
        .map(|order| SperPoint { order })
        .collect())
}

/// Indices of the orders that are positive on every element of `xs`.
pub fn positive_set(points: &[SperPoint], xs: &[Elem]) -> Vec<usize> {
    (0..points.len())
        .filter(|&k| xs.iter().all(|&x| points[k].sign(x) == 1))
        .collect()
}

/// For `f: A → B`, the index in `sper(A)` of `σ ∘ f` for each `σ ∈ sper(B)`.
pub fn sper_pullback(f: &Morphism, budget: &Budget) -> Result<Vec<usize>> {
    let source = enumerate_sper(f.dom(), None, budget)?;
    let target = enumerate_sper(f.cod(), None, budget)?;
    target
        .iter()
        .map(|tau| {
            let composite = f.then(tau.morphism())?;
            source
                .iter()
                .position(|s| s.morphism().map() == composite.map())
                .ok_or_else(|| violation!("{} is an order missing from the enumeration", composite.show()))
        })
        .collect()
}

/// The squares of `A`.
pub fn squares(a: &Multiring) -> Subset {
    a.set_of(a.elements().map(|x| a.square(x)))
}

/// `ΣA²`, the closure of the squares under addition.
pub fn sums_of_squares(a: &Multiring) -> Subset {
    a.additive_closure(&squares(a))
}

/// `-1 ∉ ΣA²`.
pub fn is_semireal(a: &Multiring) -> bool {
    !sums_of_squares(a).contains(a.minus_one())
}

/// An ideal `I` is real when `a₁² + ⋯ + aₙ²` meeting `I` forces every `aᵢ`
/// into `I`. Taking `a₁ = x` and collecting the other terms into `ΣA²`, this
/// is `(x² + ΣA²) ∩ I = ∅` for all `x ∉ I`.
pub fn is_real_ideal(a: &Multiring, ideal: &Subset) -> bool {
    let sos = sums_of_squares(a);
    a.elements()
        .filter(|&x| !ideal.contains(x))
        .all(|x| !a.add_elem_set(a.square(x), &sos).intersects(ideal))
}

/// For a prime `p`: whether `p` is real, whether `K_A(p)` is semi-real, and
/// whether `p` is the support of an order.
pub fn real_prime_clauses(a: &Arc<Multiring>, p: &Subset, budget: &Budget) -> Result<[bool; 3]> {
    let residue = residue_hyperfield(a, p)?;
    let supported = enumerate_sper(a, None, budget)?.iter().any(|s| s.support() == *p);
    Ok([is_real_ideal(a, p), is_semireal(&residue.field), supported])
}

/// A prime cone: `A² ⊆ P`, `P + P ⊆ P`, `P·P ⊆ P`, `P ∪ -P = A`, with prime
/// support `P ∩ -P`.
pub fn is_prime_cone(a: &Multiring, cone: &Subset) -> bool {
    let neg = a.neg_set(cone);
    squares(a).is_subset(cone)
        && cone.union(&neg).is_full()
        && cone.iter().all(|x| {
            cone.iter()
                .all(|y| cone.contains(a.mul(x, y)) && a.add(x, y).is_subset(cone))
        })
        && is_prime_ideal(a, &cone.intersection(&neg))
}

const UNSET: u8 = 0;
const IN: u8 = 1;
const OUT: u8 = 2;

struct ConeSearch<'a> {
    a: &'a Multiring,
    state: Vec<u8>,
    trail: Vec<Elem>,
    nodes: u64,
    limit: u64,
    found: Vec<Subset>,
}

impl ConeSearch<'_> {
    fn members(&self) -> Vec<Elem> {
        (0..self.a.n()).filter(|&x| self.state[x] == IN).collect()
    }

    fn mark(&mut self, x: Elem, value: u8) -> bool {
        if self.state[x] == value {
            return true;
        }
        if self.state[x] != UNSET {
            return false;
        }
        self.state[x] = value;
        self.trail.push(x);
        true
    }

    /// Puts `x` in the cone and closes under sums and products.
    fn put_in(&mut self, x: Elem) -> bool {
        let mut queue = vec![x];
        while let Some(x) = queue.pop() {
            if self.state[x] == IN {
                continue;
            }
            if !self.mark(x, IN) {
                return false;
            }
            for y in self.members() {
                let a = self.a;
                queue.push(a.mul(x, y));
                queue.extend(a.add(x, y).iter());
            }
        }
        true
    }

    /// Keeps `x` out of the cone, which forces `-x` in.
    fn put_out(&mut self, x: Elem) -> bool {
        self.mark(x, OUT) && self.put_in(self.a.neg(x))
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let x = self.trail.pop().expect("trail is longer than the mark");
            self.state[x] = UNSET;
        }
    }

    fn run(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::BudgetExceeded {
                what: "prime cone search".into(),
                detail: format!("more than {} nodes", self.limit),
            });
        }
        let Some(x) = (0..self.a.n()).find(|&x| self.state[x] == UNSET) else {
            let cone = Subset::from_indices(self.a.n(), self.members());
            if is_prime_cone(self.a, &cone) {
                self.found.push(cone);
            }
            return Ok(());
        };
        for choice in [IN, OUT] {
            let mark = self.trail.len();
            let ok = if choice == IN { self.put_in(x) } else { self.put_out(x) };
            if ok {
                self.run()?;
            }
            self.undo(mark);
        }
        Ok(())
    }
}

/// All prime cones, sorted, found by an in/out search closed under the
/// cone axioms and confirmed at the leaves.
pub fn prime_cones(a: &Multiring, budget: &Budget) -> Result<Vec<Subset>> {
    let mut s = ConeSearch {
        a,
        state: vec![UNSET; a.n()],
        trail: Vec::new(),
        nodes: 0,
        limit: budget.nodes,
        found: Vec::new(),
    };
    // The support is proper, so -1 is never in a cone, while 1 always is.
    if a.minus_one() == a.one() {
        return Ok(Vec::new());
    }
    let ok = s.mark(a.minus_one(), OUT) && squares(a).iter().all(|x| s.put_in(x));
    if ok {
        s.run()?;
    }
    let mut found = s.found;
    found.sort();
    found.dedup();
    Ok(found)
}

/// The order attached to a prime cone: `1` on `P ∖ -P`, `0` on `P ∩ -P`,
/// `-1` on `-P ∖ P`.
pub fn order_of_cone(a: &Arc<Multiring>, cone: &Subset) -> Result<SperPoint> {
    let neg = a.neg_set(cone);
    let signs: Vec<i8> = a
        .elements()
        .map(|x| match (cone.contains(x), neg.contains(x)) {
            (true, false) => 1,
            (true, true) => 0,
            _ => -1,
        })
        .collect();
    SperPoint::from_signs(a, &signs)
}

/// Checks that cones and orders correspond: each cone gives an order whose
/// cone is the original, and every order arises this way. Returns, for each
/// cone, the index of its order in `enumerate_sper(a, None)`.
pub fn cone_order_bijection(a: &Arc<Multiring>, budget: &Budget) -> Result<Vec<usize>> {
    let cones = prime_cones(a, budget)?;
    let orders = enumerate_sper(a, None, budget)?;
    ensure!(
        cones.len() == orders.len(),
        "{}: {} prime cones but {} orders",
        a.name(),
        cones.len(),
        orders.len()
    );
    let mut used = vec![false; orders.len()];
    let mut pairing = Vec::with_capacity(cones.len());
    for cone in &cones {
        let order = order_of_cone(a, cone).map_err(|e| violation!("cone {} gives no order: {e}", a.show_set(cone)))?;
        ensure!(
            order.cone() == *cone,
            "cone {} is not recovered from its order",
            a.show_set(cone)
        );
        let k = orders
            .iter()
            .position(|o| o.morphism().map() == order.morphism().map())
            .ok_or_else(|| violation!("order of cone {} is not enumerated", a.show_set(cone)))?;
        ensure!(!used[k], "two cones give the same order");
        used[k] = true;
        pairing.push(k);
    }
    for o in &orders {
        ensure!(
            is_prime_cone(a, &o.cone()),
            "{} does not pull back a prime cone",
            o.morphism().show()
        );
    }
    Ok(pairing)
}

/// A preorder: contains the squares and is closed under sums and products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preorder {
    elems: Subset,
    proper: bool,
}

impl Preorder {
    /// Checks the preorder axioms on `elems`.
    pub fn new(a: &Multiring, elems: Subset) -> Result<Preorder> {
        if !squares(a).is_subset(&elems) {
            return Err(Error::ImproperPreorder(format!(
                "{} misses a square",
                a.show_set(&elems)
            )));
        }
        for x in &elems {
            for y in &elems {
                if !elems.contains(a.mul(x, y)) || !a.add(x, y).is_subset(&elems) {
                    return Err(Error::ImproperPreorder(format!(
                        "{} is not closed at ({}, {})",
                        a.show_set(&elems),
                        a.elem_name(x),
                        a.elem_name(y)
                    )));
                }
            }
        }
        let proper = !elems.contains(a.minus_one());
        Ok(Preorder { elems, proper })
    }

    pub fn elems(&self) -> &Subset {
        &self.elems
    }

    /// `-1 ∉ T`.
    pub fn is_proper(&self) -> bool {
        self.proper
    }
}

/// The least preorder containing `xs`.
pub fn preorder_generated(a: &Multiring, xs: &Subset) -> Preorder {
    let mut t = xs.union(&squares(a));
    loop {
        let closed = a.additive_closure(&a.mul_sets(&t, &t).union(&t));
        if closed == t {
            break;
        }
        t = closed;
    }
    Preorder::new(a, t).expect("closure iteration yields a preorder")
}

/// `Q_T(A)`: elements of `A` identified by their sign vectors over `sper_T(A)`.
#[derive(Debug, Clone)]
pub struct QPresentation {
    preorder: Preorder,
    points: Vec<SperPoint>,
    vectors: Vec<Vec<i8>>,
    construction: Construction,
}

impl QPresentation {
    pub fn preorder(&self) -> &Preorder {
        &self.preorder
    }

    pub fn points(&self) -> &[SperPoint] {
        &self.points
    }

    pub fn result(&self) -> &Arc<Multiring> {
        self.construction.result()
    }

    /// `π: A → Q_T(A)`.
    pub fn projection(&self) -> &Morphism {
        self.construction.canonical()
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    /// The sign vector of an element of `Q_T(A)`.
    pub fn sign_vector(&self, x: Elem) -> &[i8] {
        &self.vectors[x]
    }
}

fn sign_in_sum(x: i8, y: i8, z: i8) -> bool {
    if y == 0 {
        x == z
    } else if z == 0 || y == z {
        x == y
    } else {
        true
    }
}

fn show_vector(v: &[i8]) -> String {
    let parts: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    format!("<{}>", parts.join(";"))
}

/// Builds `Q_T(A)` for a proper preorder `T`.
///
/// The sum is computed twice, coordinatewise in `3` and from
/// representatives, and the two must agree. The result is checked to be
/// real reduced.
pub fn q_construction(a: &Arc<Multiring>, t: &Preorder, budget: &Budget) -> Result<QPresentation> {
    if !t.is_proper() {
        return Err(Error::ImproperPreorder(format!("-1 ∈ {}", a.show_set(t.elems()))));
    }
    let points = enumerate_sper(a, Some(t.elems()), budget)?;
    if points.is_empty() {
        return Err(Error::EmptyRealSpectrum);
    }
    let hat = |x: Elem| -> Vec<i8> { points.iter().map(|p| p.sign(x)).collect() };
    let mut vectors: Vec<Vec<i8>> = a.elements().map(hat).collect();
    let class_vectors = {
        let mut v = vectors.clone();
        v.sort();
        v.dedup();
        v
    };
    let class_of: Vec<Elem> = vectors
        .iter()
        .map(|v| class_vectors.binary_search(v).expect("every vector is listed"))
        .collect();
    vectors = class_vectors;
    let k = vectors.len();
    let what = format!("Q({})", a.name());

    let mut pointwise = vec![Subset::empty(k); k * k];
    for y in 0..k {
        for z in 0..k {
            for x in 0..k {
                let all = (0..points.len()).all(|j| sign_in_sum(vectors[x][j], vectors[y][j], vectors[z][j]));
                if all {
                    pointwise[y * k + z].insert(x);
                }
            }
        }
    }
    let mut existential = vec![Subset::empty(k); k * k];
    for b in a.elements() {
        for c in a.elements() {
            for x in a.add(b, c) {
                existential[class_of[b] * k + class_of[c]].insert(class_of[x]);
            }
        }
    }
    for (i, (p, e)) in pointwise.iter().zip(&existential).enumerate() {
        ensure!(
            p == e,
            "{what}: sum rules disagree at {} + {}",
            show_vector(&vectors[i / k]),
            show_vector(&vectors[i % k])
        );
    }

    let rep: Vec<Elem> = (0..k)
        .map(|c| class_of.iter().position(|&d| d == c).expect("classes are inhabited"))
        .collect();
    let mut mul = vec![0; k * k];
    for x in a.elements() {
        for y in a.elements() {
            mul[class_of[x] * k + class_of[y]] = class_of[a.mul(x, y)];
        }
    }
    let neg = rep.iter().map(|&x| class_of[a.neg(x)]).collect();
    let names = vectors.iter().map(|v| show_vector(v)).collect();
    let result = Arc::new(Multiring::from_parts(
        what.clone(),
        names,
        pointwise,
        mul,
        neg,
        class_of[a.zero()],
        class_of[a.one()],
    )?);
    if let Some(w) = rrm_failure(&result) {
        return Err(violation!("{what} is not real reduced: {}", w.describe(&result)));
    }
    let canonical = Morphism::new(a.clone(), result.clone(), class_of)?;
    Ok(QPresentation {
        preorder: t.clone(),
        points,
        vectors,
        construction: Construction::new(result, canonical),
    })
}

/// `Q(A)`, taken with `T = ΣA²`. The orders are checked to be exactly those
/// positive on `1 + ΣA²`.
pub fn q_reduction(a: &Arc<Multiring>, budget: &Budget) -> Result<QPresentation> {
    if !is_semireal(a) {
        return Err(Error::EmptyRealSpectrum);
    }
    let sos = sums_of_squares(a);
    let t = Preorder::new(a, sos.clone())?;
    let q = q_construction(a, &t, budget)?;
    let one_plus = a.add_elem_set(a.one(), &sos);
    let positive: Vec<SperPoint> = enumerate_sper(a, None, budget)?
        .into_iter()
        .filter(|s| one_plus.iter().all(|x| s.sign(x) == 1))
        .collect();
    ensure!(
        positive.len() == q.points.len()
            && positive
                .iter()
                .zip(&q.points)
                .all(|(p, r)| p.morphism().map() == r.morphism().map()),
        "{}: orders positive on 1 + ΣA² differ from orders nonnegative on ΣA²",
        a.name()
    );
    Ok(q)
}

/// The first clause of the real-reduced definition that fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RrmFailure {
    NotSemireal,
    /// `a³ ≠ a`.
    Cube(Elem),
    /// `a + b²a ≠ {a}`.
    Absorption(Elem, Elem),
    /// `a² + b²` is not a singleton.
    SquareSum(Elem, Elem),
}

impl RrmFailure {
    pub fn describe(&self, a: &Multiring) -> String {
        let n = |x: Elem| a.elem_name(x).to_string();
        match *self {
            RrmFailure::NotSemireal => "-1 is a sum of squares".into(),
            RrmFailure::Cube(x) => format!("{0}^3 != {0}", n(x)),
            RrmFailure::Absorption(x, y) => format!("{0} + {1}^2*{0} != {{{0}}}", n(x), n(y)),
            RrmFailure::SquareSum(x, y) => format!("{}^2 + {}^2 is not a singleton", n(x), n(y)),
        }
    }
}

impl fmt::Display for RrmFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RrmFailure::NotSemireal => write!(f, "not semi-real"),
            RrmFailure::Cube(x) => write!(f, "cube fails at {x}"),
            RrmFailure::Absorption(x, y) => write!(f, "absorption fails at ({x}, {y})"),
            RrmFailure::SquareSum(x, y) => write!(f, "square sum fails at ({x}, {y})"),
        }
    }
}

/// The first failing clause among `a³ = a`, `a + b²a = {a}`, and
/// `a² + b²` single-valued.
pub fn reduction_clause_failure(a: &Multiring) -> Option<RrmFailure> {
    if let Some(x) = a.elements().find(|&x| a.mul(a.square(x), x) != x) {
        return Some(RrmFailure::Cube(x));
    }
    for x in a.elements() {
        for y in a.elements() {
            if a.add(x, a.mul(a.square(y), x)) != &a.singleton(x) {
                return Some(RrmFailure::Absorption(x, y));
            }
        }
    }
    for x in a.elements() {
        for y in x..a.n() {
            if a.add(a.square(x), a.square(y)).len() != 1 {
                return Some(RrmFailure::SquareSum(x, y));
            }
        }
    }
    None
}

/// Why `A` is not a real reduced multiring, if it is not.
pub fn rrm_failure(a: &Multiring) -> Option<RrmFailure> {
    if !is_semireal(a) {
        return Some(RrmFailure::NotSemireal);
    }
    reduction_clause_failure(a)
}

pub fn is_rrm(a: &Multiring) -> bool {
    rrm_failure(a).is_none()
}

/// The hyperfield criterion `1 ≠ 0`, `a² = 1` for `a ≠ 0`, `1 + 1 = {1}`,
/// checked to agree with [`is_rrm`].
pub fn is_real_reduced_hyperfield(f: &Multiring) -> Result<bool> {
    if !classify(f).hyperfield {
        return Err(Error::UnsupportedParameter(format!("{} is not a hyperfield", f.name())));
    }
    let criterion = f.one() != f.zero()
        && f.elements().filter(|&x| x != f.zero()).all(|x| f.square(x) == f.one())
        && f.add(f.one(), f.one()) == &f.singleton(f.one());
    ensure!(
        criterion == is_rrm(f),
        "{}: hyperfield criterion gives {criterion} but the general test disagrees",
        f.name()
    );
    Ok(criterion)
}

/// The factorization `f̄: Q_T(A) → R` of a morphism into a real reduced `R`.
#[derive(Debug, Clone)]
pub struct QFactorization {
    pub q: QPresentation,
    pub map: Morphism,
    /// Number of morphisms `Q_T(A) → R` through which `f` factors, when
    /// enumeration fits the budget.
    pub fillers: Option<usize>,
}

/// Factors `f: A → R` through `π: A → Q_T(A)` when `f(T) ⊆ ΣR²` and `R` is
/// real reduced, and checks the factorization is unique.
pub fn q_universal_check(t: &Preorder, f: &Morphism, budget: &Budget) -> Result<QFactorization> {
    let r = f.cod();
    if let Some(w) = rrm_failure(r) {
        return Err(Error::UnsupportedParameter(format!(
            "{} is not real reduced: {}",
            r.name(),
            w.describe(r)
        )));
    }
    let image = f.image_of(t.elems());
    if !image.is_subset(&sums_of_squares(r)) {
        return Err(Error::PreorderNotPreserved(format!(
            "f(T) = {} is not inside ΣR²",
            r.show_set(&image)
        )));
    }
    let q = q_construction(f.dom(), t, budget)?;
    let map = factor_through(q.projection(), f).map_err(|e| violation!("no factorization through Q: {e}"))?;
    let fillers = count_fillers(q.projection(), f, budget)?;
    if let Some(k) = fillers {
        ensure!(k == 1, "{k} factorizations through Q");
    }
    Ok(QFactorization { q, map, fillers })
}

/// `F/ₘΣḞ² ≅ Q(F) ≅ F/ₘ(1 + ΣF²)` for a semi-real hyperfield.
#[derive(Debug, Clone)]
pub struct HyperfieldRepresentation {
    pub by_nonzero_squares: Construction,
    pub q: QPresentation,
    pub by_one_plus_squares: Construction,
    /// `Q(F) → F/ₘΣḞ²`.
    pub to_nonzero_squares: Morphism,
    /// `Q(F) → F/ₘ(1 + ΣF²)`.
    pub to_one_plus_squares: Morphism,
}

pub fn hyperfield_representation_check(f: &Arc<Multiring>, budget: &Budget) -> Result<HyperfieldRepresentation> {
    if !classify(f).hyperfield {
        return Err(Error::UnsupportedParameter(format!("{} is not a hyperfield", f.name())));
    }
    if !is_semireal(f) {
        return Err(Error::NotSemireal(f.name().to_string()));
    }
    let nonzero_squares = squares(f).difference(&f.singleton(f.zero()));
    let by_nonzero_squares = marshall_quotient(f, &f.additive_closure(&nonzero_squares))?;
    let one_plus = f.add_elem_set(f.one(), &sums_of_squares(f));
    let by_one_plus_squares = marshall_quotient(f, &one_plus)?;
    let q = q_reduction(f, budget)?;
    let to_nonzero_squares = canonical_isomorphism(q.projection(), by_nonzero_squares.canonical())?;
    let to_one_plus_squares = canonical_isomorphism(q.projection(), by_one_plus_squares.canonical())?;
    Ok(HyperfieldRepresentation {
        by_nonzero_squares,
        q,
        by_one_plus_squares,
        to_nonzero_squares,
        to_one_plus_squares,
    })
}

/// For semi-real `A` and `ρ: A → B = A/ₘ(1 + ΣA²)`: `B` is semi-real,
/// composing with `ρ` is a bijection `sper(B) → sper(A)`, and the induced
/// map `Q(A) → Q(B)` is an isomorphism, which is returned.
pub fn one_plus_squares_check(a: &Arc<Multiring>, budget: &Budget) -> Result<Morphism> {
    if !is_semireal(a) {
        return Err(Error::NotSemireal(a.name().to_string()));
    }
    let one_plus = a.add_elem_set(a.one(), &sums_of_squares(a));
    let rho = marshall_quotient(a, &one_plus)?;
    let b = rho.result();
    ensure!(is_semireal(b), "{} is not semi-real", b.name());
    let pulled = sper_pullback(rho.canonical(), budget)?;
    let count = enumerate_sper(a, None, budget)?.len();
    let mut sorted = pulled.clone();
    sorted.sort();
    sorted.dedup();
    ensure!(
        sorted.len() == pulled.len() && pulled.len() == count,
        "sper({}) → sper({}) is not a bijection",
        b.name(),
        a.name()
    );
    let qa = q_reduction(a, budget)?;
    let qb = q_reduction(b, budget)?;
    let down = rho.canonical().then(qb.projection())?;
    canonical_isomorphism(qa.projection(), &down)
}

/// A sum-and-equality triple separated by no order, in a real reduced
/// multiring: `(x, y, z)` with `x ∉ y + z` although every order has
/// `σ(x) ∈ σ(y) + σ(z)`.
pub fn separation_failure(a: &Arc<Multiring>, budget: &Budget) -> Result<Option<(Elem, Elem, Elem)>> {
    let points = enumerate_sper(a, None, budget)?;
    for y in a.elements() {
        for z in a.elements() {
            for x in a.elements() {
                let by_orders = points.iter().all(|p| sign_in_sum(p.sign(x), p.sign(y), p.sign(z)));
                if by_orders != a.add(y, z).contains(x) {
                    return Ok(Some((x, y, z)));
                }
            }
        }
    }
    Ok(None)
}

/// Sums of `k` squares for `k = 1, 2, …` until the layers stabilise.
#[derive(Debug, Clone)]
pub struct Pythagoras {
    /// Least `k` such that every element of `ΣA²` is a sum of `k` squares.
    pub value: usize,
    /// `layers[k-1]` is the union of all `x₁² + ⋯ + xₖ²`.
    pub layers: Vec<Subset>,
}

pub fn pythagoras_number(a: &Multiring) -> Pythagoras {
    let sq = squares(a);
    let mut layers = vec![sq.clone()];
    loop {
        let last = layers.last().expect("at least one layer");
        let next = a.add_sets(&sq, last);
        if next == *last {
            break;
        }
        layers.push(next);
    }
    debug_assert_eq!(layers.last(), Some(&sums_of_squares(a)));
    Pythagoras {
        value: layers.len(),
        layers,
    }
}

/// The largest Pythagoras number among the residue hyperfields, `0` when
/// the spectrum is empty.
pub fn pythagoras_of_residues(a: &Arc<Multiring>) -> Result<usize> {
    let primes = crate::spectra::spec(a)?;
    let mut best = 0;
    for p in primes.iter() {
        best = best.max(pythagoras_number(&residue_hyperfield(a, p)?.field).value);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{field_mod_squares, krasner, power, sign3, zmod};
    use crate::morphism::find_isomorphism;

    fn arc(a: Multiring) -> Arc<Multiring> {
        Arc::new(a)
    }

    #[test]
    fn small_real_spectra() {
        let b = Budget::default();
        let s = arc(sign3());
        let pts = enumerate_sper(&s, None, &b).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].morphism().is_identity());
        assert!(enumerate_sper(&arc(zmod(5)), None, &b).unwrap().is_empty());
        let s2 = power(&s, 2).unwrap();
        assert_eq!(enumerate_sper(s2.result(), None, &b).unwrap().len(), 2);
    }

    #[test]
    fn cones_of_sign_and_krasner() {
        let b = Budget::default();
        let s = arc(sign3());
        assert_eq!(prime_cones(&s, &b).unwrap(), vec![s.set_of([0, 1])]);
        let k = arc(krasner());
        assert_eq!(
            prime_cones(&k, &b).unwrap().len(),
            enumerate_sper(&k, None, &b).unwrap().len()
        );
        cone_order_bijection(&k, &b).unwrap();
        cone_order_bijection(power(&s, 2).unwrap().result(), &b).unwrap();
    }

    #[test]
    fn preorders() {
        let s = sign3();
        assert_eq!(preorder_generated(&s, &s.empty_set()).elems(), &s.set_of([0, 1]));
        let k = krasner();
        assert!(preorder_generated(&k, &k.empty_set()).elems().is_full());
        let f7 = field_mod_squares(7).unwrap();
        let t = preorder_generated(&f7, &f7.empty_set());
        assert!(t.elems().is_full());
        assert!(!t.is_proper());
    }

    #[test]
    fn semireal_and_rrm() {
        assert!(is_semireal(&sign3()));
        assert!(!is_semireal(&zmod(2)));
        assert!(is_rrm(&sign3()));
        assert_eq!(rrm_failure(&zmod(3)), Some(RrmFailure::NotSemireal));
        assert_eq!(reduction_clause_failure(&zmod(3)), Some(RrmFailure::Absorption(1, 1)));
        let s = arc(sign3());
        assert!(is_rrm(power(&s, 2).unwrap().result()));
        assert!(is_real_reduced_hyperfield(&sign3()).unwrap());
    }

    #[test]
    fn q_fixes_real_reduced() {
        let b = Budget::default();
        let s = arc(sign3());
        let q = q_reduction(&s, &b).unwrap();
        assert!(q.projection().is_isomorphism());
        let s2 = power(&s, 2).unwrap();
        let q2 = q_reduction(s2.result(), &b).unwrap();
        assert!(find_isomorphism(q2.result(), s2.result(), &b).unwrap().is_some());
        assert!(matches!(q_reduction(&arc(zmod(7)), &b), Err(Error::EmptyRealSpectrum)));
    }

    #[test]
    fn universal_property_on_orders() {
        let b = Budget::default();
        let s = arc(sign3());
        let a = power(&s, 2).unwrap();
        let t = Preorder::new(a.result(), sums_of_squares(a.result())).unwrap();
        for p in enumerate_sper(a.result(), Some(t.elems()), &b).unwrap() {
            let fac = q_universal_check(&t, p.morphism(), &b).unwrap();
            assert_eq!(fac.fillers, Some(1));
        }
    }

    #[test]
    fn representation_of_sign() {
        let b = Budget::default();
        let rep = hyperfield_representation_check(&arc(sign3()), &b).unwrap();
        assert_eq!(rep.q.result().n(), 3);
        let f13 = arc(field_mod_squares(13).unwrap());
        assert!(matches!(
            hyperfield_representation_check(&f13, &b),
            Err(Error::NotSemireal(_))
        ));
    }

    #[test]
    fn pythagoras_small() {
        assert_eq!(pythagoras_number(&krasner()).value, 1);
        assert_eq!(pythagoras_number(&sign3()).value, 1);
        // ℤ/4: 3 = 1 + 1 + 1 needs three squares.
        assert_eq!(pythagoras_number(&zmod(4)).value, 3);
    }
}
