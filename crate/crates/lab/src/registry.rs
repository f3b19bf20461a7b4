//! Builtin instances, addressed by short ids.

use std::sync::Arc;

use hyperring_core::builders::{field_mod_squares, krasner_shared, power, product, sign3_shared, zmod};
use hyperring_core::constructions::{local_at, localize, marshall_quotient, quotient_by_ideal};
use hyperring_core::{Multiring, Result};

#[derive(Debug, Clone)]
pub struct Instance {
    pub id: String,
    pub ring: Arc<Multiring>,
}

fn named(a: &Arc<Multiring>, id: &str) -> Arc<Multiring> {
    Arc::new(a.renamed(id))
}

fn elem(a: &Multiring, name: &str) -> usize {
    a.index_of(name)
        .unwrap_or_else(|| panic!("no element {name} in {}", a.name()))
}

fn build(id: &str) -> Result<Option<Arc<Multiring>>> {
    let k = krasner_shared();
    let s = sign3_shared();
    let ring = match id {
        "K" => named(&k, id),
        "3" => named(&s, id),
        "KxK" => named(power(&k, 2)?.result(), id),
        "3x3" => named(power(&s, 2)?.result(), id),
        "3x3x3" => named(power(&s, 3)?.result(), id),
        "Kx3" => named(product(&[k, s])?.result(), id),
        "Z12/(6)" => {
            let z = Arc::new(zmod(12));
            named(quotient_by_ideal(&z, &z.set_of([0, 6]))?.result(), id)
        }
        "Z12@(2)" => {
            let z = Arc::new(zmod(12));
            let p = z.set_of([0, 2, 4, 6, 8, 10]);
            named(local_at(&z, &p)?.ring.result(), id)
        }
        "Z6[1/3]" => {
            let z = Arc::new(zmod(6));
            named(localize(&z, &z.set_of([1, 3]))?.result(), id)
        }
        "3x3/m<(1;-1)>" => {
            let sq = power(&s, 2)?.result().clone();
            let g = sq.multiplicative_closure(&sq.singleton(elem(&sq, "(1;-1)")));
            named(marshall_quotient(&sq, &g)?.result(), id)
        }
        "3x3/(p)" => {
            let sq = power(&s, 2)?.result().clone();
            let p = sq.set_of(["(0;0)", "(0;1)", "(0;-1)"].map(|x| elem(&sq, x)));
            named(quotient_by_ideal(&sq, &p)?.result(), id)
        }
        "Z3xZ3/m<(2;2)>" => {
            let f3 = Arc::new(zmod(3));
            let sq = power(&f3, 2)?.result().clone();
            let g = sq.multiplicative_closure(&sq.singleton(elem(&sq, "(2;2)")));
            named(marshall_quotient(&sq, &g)?.result(), id)
        }
        _ => {
            if let Some(n) = id.strip_prefix('Z').and_then(|n| n.parse::<usize>().ok()) {
                if (2..=12).contains(&n) {
                    return Ok(Some(Arc::new(zmod(n).renamed(id))));
                }
            }
            if let Some(q) = id
                .strip_prefix('F')
                .and_then(|r| r.strip_suffix("sq"))
                .and_then(|q| q.parse::<usize>().ok())
            {
                if [3, 5, 7, 11, 13].contains(&q) {
                    return Ok(Some(Arc::new(field_mod_squares(q)?.renamed(id))));
                }
            }
            return Ok(None);
        }
    };
    Ok(Some(ring))
}

/// Builtin ids in registry order.
pub fn builtin_ids() -> Vec<String> {
    let mut ids: Vec<String> = ["K", "3", "KxK", "3x3", "3x3x3"].map(String::from).to_vec();
    ids.extend((2..=12).map(|n| format!("Z{n}")));
    ids.extend([3, 5, 7, 11, 13].map(|q| format!("F{q}sq")));
    ids.extend(
        [
            "Kx3",
            "Z12/(6)",
            "Z12@(2)",
            "Z6[1/3]",
            "3x3/m<(1;-1)>",
            "3x3/(p)",
            "Z3xZ3/m<(2;2)>",
        ]
        .map(String::from),
    );
    ids
}

pub fn builtin(id: &str) -> Result<Option<Instance>> {
    Ok(build(id)?.map(|ring| Instance {
        id: id.to_string(),
        ring,
    }))
}

pub fn builtins() -> Result<Vec<Instance>> {
    builtin_ids()
        .iter()
        .map(|id| builtin(id).map(|i| i.expect("registered id builds")))
        .collect()
}
