//! Standard instances and finite products.

use std::sync::{Arc, OnceLock};

use crate::budget::Budget;
use crate::constructions::marshall_quotient;
use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::multiring::{Elem, Multiring};
use crate::subset::Subset;

fn tables_from_fn(
    name: &str,
    names: Vec<String>,
    add: impl Fn(Elem, Elem) -> Vec<Elem>,
    mul: impl Fn(Elem, Elem) -> Elem,
    neg: impl Fn(Elem) -> Elem,
    zero: Elem,
    one: Elem,
) -> Multiring {
    let n = names.len();
    let mut add_table = Vec::with_capacity(n * n);
    let mut mul_table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            add_table.push(Subset::from_indices(n, add(i, j)));
            mul_table.push(mul(i, j));
        }
    }
    Multiring::from_parts(
        name.to_string(),
        names,
        add_table,
        mul_table,
        (0..n).map(neg).collect(),
        zero,
        one,
    )
    .expect("builtin tables satisfy the axioms")
}

/// The Krasner hyperfield `{0, 1}` with `1 + 1 = {0, 1}`.
pub fn krasner() -> Multiring {
    tables_from_fn(
        "K",
        vec!["0".into(), "1".into()],
        |a, b| match (a, b) {
            (1, 1) => vec![0, 1],
            _ => vec![a.max(b)],
        },
        |a, b| a * b,
        |a| a,
        0,
        1,
    )
}

/// Index of `0` in [`sign3`].
pub const SIGN_ZERO: Elem = 0;
/// Index of `1` in [`sign3`].
pub const SIGN_POS: Elem = 1;
/// Index of `-1` in [`sign3`].
pub const SIGN_NEG: Elem = 2;

/// The integer sign of an element of [`sign3`].
pub fn sign_value(x: Elem) -> i8 {
    match x {
        SIGN_ZERO => 0,
        SIGN_POS => 1,
        _ => -1,
    }
}

/// The sign element for an integer sign.
pub fn sign_elem(s: i8) -> Elem {
    match s.signum() {
        0 => SIGN_ZERO,
        1 => SIGN_POS,
        _ => SIGN_NEG,
    }
}

/// The sign hyperfield `{0, 1, -1}` with `1 + -1` the whole carrier.
pub fn sign3() -> Multiring {
    tables_from_fn(
        "3",
        vec!["0".into(), "1".into(), "-1".into()],
        |a, b| {
            let (x, y) = (sign_value(a), sign_value(b));
            if x == 0 || y == 0 || x == y {
                vec![sign_elem(x + y)]
            } else {
                vec![SIGN_ZERO, SIGN_POS, SIGN_NEG]
            }
        },
        |a, b| sign_elem(sign_value(a) * sign_value(b)),
        |a| sign_elem(-sign_value(a)),
        SIGN_ZERO,
        SIGN_POS,
    )
}

/// A shared copy of [`sign3`], so that orders of different multirings
/// have a common codomain.
pub fn sign3_shared() -> Arc<Multiring> {
    static SIGN: OnceLock<Arc<Multiring>> = OnceLock::new();
    SIGN.get_or_init(|| Arc::new(sign3())).clone()
}

/// A shared copy of [`krasner`].
pub fn krasner_shared() -> Arc<Multiring> {
    static KRASNER: OnceLock<Arc<Multiring>> = OnceLock::new();
    KRASNER.get_or_init(|| Arc::new(krasner())).clone()
}

/// The ring `ℤ/n` with singleton sums.
pub fn zmod(n: usize) -> Multiring {
    assert!(n >= 1, "ℤ/0 is not finite");
    tables_from_fn(
        &format!("Z{n}"),
        (0..n).map(|i| i.to_string()).collect(),
        |a, b| vec![(a + b) % n],
        |a, b| (a * b) % n,
        |a| (n - a) % n,
        0,
        1 % n,
    )
}

/// A multiring from the tables of a commutative ring: every sum is a singleton.
pub fn from_ring_tables(
    name: &str,
    names: Vec<String>,
    add: &[Vec<Elem>],
    mul: &[Vec<Elem>],
    zero: Elem,
    one: Elem,
) -> Result<Multiring> {
    let n = names.len();
    let neg: Vec<Elem> = (0..n)
        .map(|a| {
            (0..n)
                .find(|&b| add[a][b] == zero)
                .ok_or_else(|| Error::MalformedTable(format!("{} has no additive inverse", names[a])))
        })
        .collect::<Result<_>>()?;
    Multiring::from_raw(crate::multiring::RawTables {
        name: name.to_string(),
        names,
        add: add.iter().map(|row| row.iter().map(|&x| vec![x]).collect()).collect(),
        mul: mul.to_vec(),
        neg,
        zero,
        one,
    })
}

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

/// `F_q` modulo its non-zero squares, for an odd prime `q`.
pub fn field_mod_squares(q: usize) -> Result<Multiring> {
    if !is_prime(q) || q == 2 {
        return Err(Error::UnsupportedParameter(format!(
            "q = {q}: only odd primes are supported"
        )));
    }
    let field = Arc::new(zmod(q));
    let squares = field.set_of((1..q).map(|x| x * x % q));
    let quotient = marshall_quotient(&field, &squares)?;
    Ok(quotient.result().renamed(format!("F{q}sq")))
}

/// A finite product with its coordinate encoding.
#[derive(Debug, Clone)]
pub struct Product {
    result: Arc<Multiring>,
    factors: Vec<Arc<Multiring>>,
    strides: Vec<usize>,
}

impl Product {
    pub fn result(&self) -> &Arc<Multiring> {
        &self.result
    }

    pub fn factors(&self) -> &[Arc<Multiring>] {
        &self.factors
    }

    /// Element index of a coordinate tuple; the first coordinate varies slowest.
    pub fn encode(&self, coords: &[Elem]) -> Elem {
        coords.iter().zip(&self.strides).map(|(c, s)| c * s).sum()
    }

    pub fn decode(&self, x: Elem) -> Vec<Elem> {
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(f, s)| (x / s) % f.n())
            .collect()
    }

    pub fn coordinate(&self, x: Elem, k: usize) -> Elem {
        (x / self.strides[k]) % self.factors[k].n()
    }

    pub fn projection(&self, k: usize) -> Morphism {
        let map = self.result.elements().map(|x| self.coordinate(x, k)).collect();
        Morphism::trusted(self.result.clone(), self.factors[k].clone(), map)
    }

    /// The morphism into the product with the given components.
    pub fn pairing(&self, components: &[Morphism]) -> Result<Morphism> {
        let Some(first) = components.first() else {
            return Err(Error::LengthMismatch("pairing needs at least one component".into()));
        };
        let dom = first.dom().clone();
        let map = dom
            .elements()
            .map(|x| {
                let coords: Vec<Elem> = components.iter().map(|f| f.apply(x)).collect();
                self.encode(&coords)
            })
            .collect();
        Morphism::new(dom, self.result.clone(), map)
    }
}

/// The product with coordinatewise operations; sums are Cartesian products
/// of the coordinate sums. The empty product is the zero multiring.
pub fn product(factors: &[Arc<Multiring>]) -> Result<Product> {
    let sizes: Vec<usize> = factors.iter().map(|f| f.n()).collect();
    let n: usize = sizes.iter().product();
    Budget::default().check_carrier("product", n)?;
    let mut strides = vec![1; factors.len()];
    for k in (0..factors.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * sizes[k + 1];
    }
    let decode = |x: Elem| -> Vec<Elem> { sizes.iter().zip(&strides).map(|(sz, st)| (x / st) % sz).collect() };
    let encode = |c: &[Elem]| -> Elem { c.iter().zip(&strides).map(|(a, s)| a * s).sum() };
    let tuples: Vec<Vec<Elem>> = (0..n).map(decode).collect();
    let names: Vec<String> = tuples
        .iter()
        .map(|t| {
            let parts: Vec<&str> = t.iter().zip(factors).map(|(&c, f)| f.elem_name(c)).collect();
            format!("({})", parts.join(";"))
        })
        .collect();
    let mut add = Vec::with_capacity(n * n);
    let mut mul = Vec::with_capacity(n * n);
    for x in &tuples {
        for y in &tuples {
            let mut sums: Vec<Elem> = vec![0];
            for (k, f) in factors.iter().enumerate() {
                let coord = f.add(x[k], y[k]);
                let stride = strides[k];
                sums = sums
                    .iter()
                    .flat_map(|&partial| coord.iter().map(move |c| partial + c * stride))
                    .collect();
            }
            add.push(Subset::from_indices(n, sums));
            let prod: Vec<Elem> = factors.iter().enumerate().map(|(k, f)| f.mul(x[k], y[k])).collect();
            mul.push(encode(&prod));
        }
    }
    let neg = tuples
        .iter()
        .map(|t| {
            let c: Vec<Elem> = factors.iter().enumerate().map(|(k, f)| f.neg(t[k])).collect();
            encode(&c)
        })
        .collect();
    let zero = encode(&factors.iter().map(|f| f.zero()).collect::<Vec<_>>());
    let one = encode(&factors.iter().map(|f| f.one()).collect::<Vec<_>>());
    let name = if factors.is_empty() {
        "0".to_string()
    } else {
        factors.iter().map(|f| f.name()).collect::<Vec<_>>().join("x")
    };
    let result = Multiring::from_parts(name, names, add, mul, neg, zero, one)?;
    Ok(Product {
        result: Arc::new(result),
        factors: factors.to_vec(),
        strides,
    })
}

/// The product of `k` copies of `a`.
pub fn power(a: &Arc<Multiring>, k: usize) -> Result<Product> {
    product(&vec![a.clone(); k])
}
