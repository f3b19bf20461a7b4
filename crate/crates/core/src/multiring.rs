//! Finite multirings stored as explicit tables.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::subset::Subset;

/// An element of a finite multiring, given by its index in the carrier.
pub type Elem = usize;

/// Unchecked tables as read from a file or produced by a builder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTables {
    pub name: String,
    pub names: Vec<String>,
    /// `add[i][j]` lists the members of `i + j`.
    pub add: Vec<Vec<Vec<Elem>>>,
    pub mul: Vec<Vec<Elem>>,
    pub neg: Vec<Elem>,
    pub zero: Elem,
    pub one: Elem,
}

/// A finite multiring whose tables have passed validation.
#[derive(Clone)]
pub struct Multiring {
    name: String,
    names: Vec<String>,
    add: Vec<Subset>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    zero: Elem,
    one: Elem,
    primes: OnceLock<Arc<Vec<Subset>>>,
}

/// The axiom a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    /// Every sum is a non-empty set.
    SumsNonEmpty,
    /// `a ∈ b + c` implies `c ∈ -b + a` and `b ∈ a + (-c)`.
    Reversibility,
    /// `a ∈ b + 0` exactly when `a = b`.
    ZeroNeutral,
    /// `(a + b) + c ⊆ a + (b + c)`.
    WeakAssociativity,
    /// `a + b = b + a`.
    Commutativity,
    /// `a · 0 = 0`.
    MulZero,
    /// `a ∈ b + c` implies `ad ∈ bd + cd`.
    HalfDistributivity,
    /// Multiplication is a commutative monoid with identity `one`.
    MulMonoid,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::SumsNonEmpty => "sums-nonempty",
            Axiom::Reversibility => "reversibility",
            Axiom::ZeroNeutral => "zero-neutral",
            Axiom::WeakAssociativity => "weak-associativity",
            Axiom::Commutativity => "commutativity",
            Axiom::MulZero => "mul-zero",
            Axiom::HalfDistributivity => "half-distributivity",
            Axiom::MulMonoid => "mul-monoid",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<Elem>,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("no violations");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}: {}", v.axiom, v.detail)?;
        }
        Ok(())
    }
}

/// Violations recorded per axiom before the checker moves on.
const MAX_PER_AXIOM: usize = 4;

struct Collector {
    report: ValidationReport,
    counts: [usize; 8],
}

impl Collector {
    fn push(&mut self, axiom: Axiom, witness: Vec<Elem>, detail: String) {
        let slot = axiom as usize;
        if self.counts[slot] < MAX_PER_AXIOM {
            self.counts[slot] += 1;
            self.report.violations.push(Violation { axiom, witness, detail });
        }
    }

    fn full(&self, axiom: Axiom) -> bool {
        self.counts[axiom as usize] >= MAX_PER_AXIOM
    }
}

fn check_shape(raw: &RawTables) -> Result<()> {
    let n = raw.names.len();
    let bad = |msg: String| Err(Error::MalformedTable(msg));
    if n == 0 {
        return bad("carrier is empty".into());
    }
    if raw.zero >= n || raw.one >= n {
        return bad("constant out of range".into());
    }
    if raw.neg.len() != n {
        return bad(format!("neg has {} entries, expected {n}", raw.neg.len()));
    }
    if let Some(&x) = raw.neg.iter().find(|&&x| x >= n) {
        return bad(format!("neg value {x} out of range"));
    }
    if raw.mul.len() != n || raw.mul.iter().any(|r| r.len() != n) {
        return bad(format!("mul is not {n}x{n}"));
    }
    if raw.mul.iter().flatten().any(|&x| x >= n) {
        return bad("mul value out of range".into());
    }
    if raw.add.len() != n || raw.add.iter().any(|r| r.len() != n) {
        return bad(format!("add is not {n}x{n}"));
    }
    if raw.add.iter().flatten().flatten().any(|&x| x >= n) {
        return bad("add value out of range".into());
    }
    Ok(())
}

/// Checks every multiring axiom on raw tables.
///
/// Shape problems are errors; axiom failures are collected in the report
/// with a witness tuple each.
pub fn validate_multiring(raw: &RawTables) -> Result<ValidationReport> {
    check_shape(raw)?;
    let n = raw.names.len();
    let add: Vec<Subset> = raw
        .add
        .iter()
        .flatten()
        .map(|s| Subset::from_indices(n, s.iter().copied()))
        .collect();
    let mul: Vec<Elem> = raw.mul.iter().flatten().copied().collect();
    Ok(check_axioms(n, &add, &mul, &raw.neg, raw.zero, raw.one, &raw.names))
}

fn check_axioms(
    n: usize,
    add: &[Subset],
    mul: &[Elem],
    neg: &[Elem],
    zero: Elem,
    one: Elem,
    names: &[String],
) -> ValidationReport {
    let s = |i: usize, j: usize| &add[i * n + j];
    let m = |i: usize, j: usize| mul[i * n + j];
    let nm = |i: usize| names[i].as_str();
    let mut c = Collector {
        report: ValidationReport::default(),
        counts: [0; 8],
    };

    for a in 0..n {
        for b in 0..n {
            if s(a, b).is_empty() {
                c.push(
                    Axiom::SumsNonEmpty,
                    vec![a, b],
                    format!("{} + {} is empty", nm(a), nm(b)),
                );
            }
            if s(a, b) != s(b, a) && a < b {
                c.push(
                    Axiom::Commutativity,
                    vec![a, b],
                    format!("{} + {} differs from {} + {}", nm(a), nm(b), nm(b), nm(a)),
                );
            }
        }
    }

    for a in 0..n {
        if s(a, zero) != &Subset::singleton(n, a) {
            c.push(
                Axiom::ZeroNeutral,
                vec![a],
                format!("{} + 0 is not {{{}}}", nm(a), nm(a)),
            );
        }
    }

    'rev: for b in 0..n {
        for cc in 0..n {
            for a in s(b, cc) {
                if !s(neg[b], a).contains(cc) || !s(a, neg[cc]).contains(b) {
                    c.push(
                        Axiom::Reversibility,
                        vec![a, b, cc],
                        format!("{} ∈ {} + {} cannot be reversed", nm(a), nm(b), nm(cc)),
                    );
                    if c.full(Axiom::Reversibility) {
                        break 'rev;
                    }
                }
            }
        }
    }

    'assoc: for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                let mut left = Subset::empty(n);
                for g in s(a, b) {
                    left.union_with(s(g, cc));
                }
                let mut right = Subset::empty(n);
                for h in s(b, cc) {
                    right.union_with(s(a, h));
                }
                if !left.is_subset(&right) {
                    let x = left.difference(&right).first().unwrap_or(0);
                    c.push(
                        Axiom::WeakAssociativity,
                        vec![x, a, b, cc],
                        format!(
                            "{} ∈ ({} + {}) + {} but not in {} + ({} + {})",
                            nm(x),
                            nm(a),
                            nm(b),
                            nm(cc),
                            nm(a),
                            nm(b),
                            nm(cc)
                        ),
                    );
                    if c.full(Axiom::WeakAssociativity) {
                        break 'assoc;
                    }
                }
            }
        }
    }

    for a in 0..n {
        if m(a, zero) != zero {
            c.push(Axiom::MulZero, vec![a], format!("{} · 0 ≠ 0", nm(a)));
        }
    }

    'monoid: for a in 0..n {
        if m(a, one) != a || m(one, a) != a {
            c.push(Axiom::MulMonoid, vec![a], format!("1 is not neutral for {}", nm(a)));
        }
        for b in 0..n {
            if m(a, b) != m(b, a) {
                c.push(
                    Axiom::MulMonoid,
                    vec![a, b],
                    format!("{}·{} ≠ {}·{}", nm(a), nm(b), nm(b), nm(a)),
                );
            }
            for d in 0..n {
                if m(m(a, b), d) != m(a, m(b, d)) {
                    c.push(
                        Axiom::MulMonoid,
                        vec![a, b, d],
                        format!("({}·{})·{} ≠ {}·({}·{})", nm(a), nm(b), nm(d), nm(a), nm(b), nm(d)),
                    );
                }
                if c.full(Axiom::MulMonoid) {
                    break 'monoid;
                }
            }
        }
    }

    'dist: for b in 0..n {
        for cc in 0..n {
            for a in s(b, cc) {
                for d in 0..n {
                    if !s(m(b, d), m(cc, d)).contains(m(a, d)) {
                        c.push(
                            Axiom::HalfDistributivity,
                            vec![a, b, cc, d],
                            format!(
                                "{} ∈ {} + {} but {}·{} ∉ {}·{} + {}·{}",
                                nm(a),
                                nm(b),
                                nm(cc),
                                nm(a),
                                nm(d),
                                nm(b),
                                nm(d),
                                nm(cc),
                                nm(d)
                            ),
                        );
                        if c.full(Axiom::HalfDistributivity) {
                            break 'dist;
                        }
                    }
                }
            }
        }
    }

    c.report
}

impl Multiring {
    /// Validates raw tables and builds the multiring.
    pub fn from_raw(raw: RawTables) -> Result<Multiring> {
        let report = validate_multiring(&raw)?;
        if !report.is_ok() {
            return Err(Error::Invalid(report));
        }
        let names = raw.names;
        let n = names.len();
        let add = raw
            .add
            .iter()
            .flatten()
            .map(|s| Subset::from_indices(n, s.iter().copied()))
            .collect();
        Ok(Multiring {
            name: raw.name,
            names,
            add,
            mul: raw.mul.into_iter().flatten().collect(),
            neg: raw.neg,
            zero: raw.zero,
            one: raw.one,
            primes: OnceLock::new(),
        })
    }

    /// Builds a multiring from tables produced by a construction.
    ///
    /// Debug builds re-run the full axiom check and report a failure as a
    /// violated identity, since constructions are meant to preserve the axioms.
    pub(crate) fn from_parts(
        name: String,
        names: Vec<String>,
        add: Vec<Subset>,
        mul: Vec<Elem>,
        neg: Vec<Elem>,
        zero: Elem,
        one: Elem,
    ) -> Result<Multiring> {
        let n = names.len();
        debug_assert_eq!(add.len(), n * n);
        debug_assert_eq!(mul.len(), n * n);
        if cfg!(debug_assertions) {
            let report = check_axioms(n, &add, &mul, &neg, zero, one, &names);
            if !report.is_ok() {
                return Err(Error::TheoremViolation(format!(
                    "construction {name} is not a multiring: {report}"
                )));
            }
        }
        Ok(Multiring {
            name,
            names,
            add,
            mul,
            neg,
            zero,
            one,
            primes: OnceLock::new(),
        })
    }

    pub fn to_raw(&self) -> RawTables {
        let n = self.n();
        RawTables {
            name: self.name.clone(),
            names: self.names.clone(),
            add: (0..n)
                .map(|i| (0..n).map(|j| self.add(i, j).to_vec()).collect())
                .collect(),
            mul: (0..n).map(|i| (0..n).map(|j| self.mul(i, j)).collect()).collect(),
            neg: self.neg.clone(),
            zero: self.zero,
            one: self.one,
        }
    }

    pub fn renamed(&self, name: impl Into<String>) -> Multiring {
        let mut m = self.clone();
        m.name = name.into();
        m
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.n()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn elem_name(&self, a: Elem) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Option<Elem> {
        self.names.iter().position(|s| s == name)
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    /// The element `-1`.
    pub fn minus_one(&self) -> Elem {
        self.neg[self.one]
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> &Subset {
        &self.add[a * self.n() + b]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a * self.n() + b]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a]
    }

    /// `a - b`, that is `a + (-b)`.
    pub fn sub(&self, a: Elem, b: Elem) -> &Subset {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, a: Elem, k: usize) -> Elem {
        (0..k).fold(self.one, |acc, _| self.mul(acc, a))
    }

    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    pub fn empty_set(&self) -> Subset {
        Subset::empty(self.n())
    }

    pub fn full_set(&self) -> Subset {
        Subset::full(self.n())
    }

    pub fn singleton(&self, a: Elem) -> Subset {
        Subset::singleton(self.n(), a)
    }

    pub fn set_of<I: IntoIterator<Item = Elem>>(&self, iter: I) -> Subset {
        Subset::from_indices(self.n(), iter)
    }

    /// `X + Y` as the union of all `x + y`.
    pub fn add_sets(&self, xs: &Subset, ys: &Subset) -> Subset {
        let mut out = self.empty_set();
        for x in xs {
            for y in ys {
                out.union_with(self.add(x, y));
            }
        }
        out
    }

    /// `a + Y`.
    pub fn add_elem_set(&self, a: Elem, ys: &Subset) -> Subset {
        let mut out = self.empty_set();
        for y in ys {
            out.union_with(self.add(a, y));
        }
        out
    }

    /// `x₁ + ⋯ + xₙ` folded as `{x₁} + (x₂ + ⋯ + xₙ)`; the empty sum is `{0}`.
    pub fn sum_of(&self, xs: &[Elem]) -> Subset {
        match xs.split_first() {
            None => self.singleton(self.zero),
            Some((&x, [])) => self.singleton(x),
            Some((&x, rest)) => self.add_elem_set(x, &self.sum_of(rest)),
        }
    }

    /// `X · Y` as the set of products.
    pub fn mul_sets(&self, xs: &Subset, ys: &Subset) -> Subset {
        let mut out = self.empty_set();
        for x in xs {
            for y in ys {
                out.insert(self.mul(x, y));
            }
        }
        out
    }

    /// `a · Y`.
    pub fn mul_elem_set(&self, a: Elem, ys: &Subset) -> Subset {
        self.set_of(ys.iter().map(|y| self.mul(a, y)))
    }

    pub fn neg_set(&self, xs: &Subset) -> Subset {
        self.set_of(xs.iter().map(|x| self.neg(x)))
    }

    /// Smallest superset of `xs` closed under addition.
    pub fn additive_closure(&self, xs: &Subset) -> Subset {
        let mut closed = xs.clone();
        let mut frontier: Vec<Elem> = xs.to_vec();
        while let Some(x) = frontier.pop() {
            let snapshot: Vec<Elem> = closed.to_vec();
            for y in snapshot {
                for z in self.add(x, y) {
                    if closed.insert(z) {
                        frontier.push(z);
                    }
                }
            }
        }
        closed
    }

    /// Smallest superset of `xs ∪ {1}` closed under multiplication.
    pub fn multiplicative_closure(&self, xs: &Subset) -> Subset {
        let mut closed = xs.clone();
        closed.insert(self.one);
        let mut frontier: Vec<Elem> = closed.to_vec();
        while let Some(x) = frontier.pop() {
            let snapshot: Vec<Elem> = closed.to_vec();
            for y in snapshot {
                let z = self.mul(x, y);
                if closed.insert(z) {
                    frontier.push(z);
                }
            }
        }
        closed
    }

    /// The ideal generated by `xs`: all sums `t₁x₁ + ⋯ + tₙxₙ`, plus `0`.
    pub fn ideal_generated(&self, xs: &Subset) -> Subset {
        let mut multiples = self.singleton(self.zero);
        for x in xs {
            for t in self.elements() {
                multiples.insert(self.mul(t, x));
            }
        }
        self.additive_closure(&multiples)
    }

    pub fn principal_ideal(&self, a: Elem) -> Subset {
        self.ideal_generated(&self.singleton(a))
    }

    pub fn is_ideal(&self, xs: &Subset) -> bool {
        !xs.is_empty() && self.add_sets(xs, xs).is_subset(xs) && self.mul_sets(&self.full_set(), xs).is_subset(xs)
    }

    pub fn is_multiplicative(&self, xs: &Subset) -> bool {
        xs.contains(self.one) && self.mul_sets(xs, xs).is_subset(xs)
    }

    pub fn is_idempotent(&self, a: Elem) -> bool {
        self.mul(a, a) == a
    }

    pub fn idempotents(&self) -> Subset {
        self.set_of(self.elements().filter(|&a| self.is_idempotent(a)))
    }

    /// Every sum is a singleton.
    pub fn is_ring(&self) -> bool {
        self.add.iter().all(|s| s.len() == 1)
    }

    pub fn is_zero_ring(&self) -> bool {
        self.zero == self.one
    }

    /// Same tables and constants, ignoring names.
    pub fn same_tables(&self, other: &Multiring) -> bool {
        self.n() == other.n()
            && self.zero == other.zero
            && self.one == other.one
            && self.neg == other.neg
            && self.mul == other.mul
            && self.add == other.add
    }

    pub(crate) fn prime_cache(&self) -> &OnceLock<Arc<Vec<Subset>>> {
        &self.primes
    }

    /// Formats a subset with element names.
    pub fn show_set(&self, xs: &Subset) -> String {
        let parts: Vec<&str> = xs.iter().map(|x| self.elem_name(x)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for Multiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multiring({}, n={})", self.name, self.n())
    }
}

impl PartialEq for Multiring {
    fn eq(&self, other: &Self) -> bool {
        self.same_tables(other) && self.names == other.names
    }
}

impl Eq for Multiring {}

/// Checks the converse of half-distributivity, `x ∈ bd + cd ⇒ x ∈ d(b + c)`.
///
/// Returns a failing `(x, b, c, d)` if there is one.
pub fn hyperring_witness(a: &Multiring) -> Option<(Elem, Elem, Elem, Elem)> {
    for b in a.elements() {
        for c in a.elements() {
            let sum = a.add(b, c);
            for d in a.elements() {
                let scaled = a.mul_elem_set(d, sum);
                let target = a.add(a.mul(b, d), a.mul(c, d));
                if let Some(x) = target.difference(&scaled).first() {
                    return Some((x, b, c, d));
                }
            }
        }
    }
    None
}

pub fn is_hyperring(a: &Multiring) -> bool {
    hyperring_witness(a).is_none()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Classification {
    pub multidomain: bool,
    pub multifield: bool,
    pub hyperfield: bool,
}

pub fn units(a: &Multiring) -> Subset {
    a.set_of(a.elements().filter(|&x| a.elements().any(|y| a.mul(x, y) == a.one())))
}

/// Elements `a` with `1 ∈ ab₁ + ⋯ + abₖ` for some `bᵢ`, i.e. `1 ∈ (a)`.
pub fn weak_units(a: &Multiring) -> Subset {
    a.set_of(a.elements().filter(|&x| a.principal_ideal(x).contains(a.one())))
}

pub fn inverse(a: &Multiring, x: Elem) -> Option<Elem> {
    a.elements().find(|&y| a.mul(x, y) == a.one())
}

pub fn classify(a: &Multiring) -> Classification {
    let z = a.zero();
    let multidomain = a
        .elements()
        .all(|x| a.elements().all(|y| a.mul(x, y) != z || x == z || y == z));
    let mut nonzero = a.full_set();
    nonzero.remove(z);
    let proper = a.one() != z;
    Classification {
        multidomain,
        multifield: proper && weak_units(a) == nonzero,
        hyperfield: proper && units(a) == nonzero,
    }
}

/// Checks `-0 = 0`, `-(-a) = a` and `a ∈ b + c ⇔ -a ∈ -b + -c`.
pub fn negation_witness(a: &Multiring) -> Option<String> {
    if a.neg(a.zero()) != a.zero() {
        return Some("-0 ≠ 0".into());
    }
    for x in a.elements() {
        if a.neg(a.neg(x)) != x {
            return Some(format!("-(-{}) ≠ {}", a.elem_name(x), a.elem_name(x)));
        }
    }
    for b in a.elements() {
        for c in a.elements() {
            let flipped = a.add(a.neg(b), a.neg(c));
            if a.neg_set(a.add(b, c)) != *flipped {
                return Some(format!(
                    "-({} + {}) ≠ -{} + -{}",
                    a.elem_name(b),
                    a.elem_name(c),
                    a.elem_name(b),
                    a.elem_name(c)
                ));
            }
        }
    }
    None
}
