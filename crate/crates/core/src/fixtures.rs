//! Built-in manifolds and invariant tables.
//!
//! | name        | manifold          | data                                        |
//! |-------------|-------------------|---------------------------------------------|
//! | `cp1`       | ℂP¹               | all invariants                              |
//! | `cp2`       | ℂP²               | N_d for d ≤ 4, all arities                  |
//! | `cp3`       | ℂP³               | lines and conics, all arities               |
//! | `cp4`       | ℂP⁴               | three-point invariants                      |
//! | `s2xs2`     | S²×S²             | N_(a,b) for a + b ≤ 3, all arities          |
//! | `bigsymp`   | synthetic, dim 4  | small product with discriminant zero at z=1 |
//! | `nilpotent` | ℂP¹ classes       | no quantum corrections: Q[ε]/(ε²)           |

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gwdata::{GwKey, GwTable, Region};
use crate::homology::{BasisClass, CurveClass, ManifoldSpec};
use crate::polycore::{qi, Matrix, Q};

pub const NAMES: [&str; 7] = ["cp1", "cp2", "cp3", "cp4", "s2xs2", "bigsymp", "nilpotent"];

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub spec: Arc<ManifoldSpec>,
    pub table: GwTable,
}

pub fn fixture(name: &str) -> Result<Fixture> {
    let (spec, entries, regions) = match name {
        "cp1" => cp1(),
        "cp2" => cp2(),
        "cp3" => cp3(),
        "cp4" => cp4(),
        "s2xs2" => s2xs2(),
        "bigsymp" => bigsymp(),
        "nilpotent" => (cpn_spec(1), Vec::new(), vec![Region::everything()]),
        other => return Err(Error::Parse(format!("unknown fixture `{other}`"))),
    };
    spec.validate()?;
    let spec = Arc::new(spec);
    let mut map = BTreeMap::new();
    for (names, beta, v) in entries {
        let (key, value) = padded(&spec, &names, CurveClass::new(beta), v)?;
        map.insert(key, value);
    }
    let table = GwTable::new(spec.clone(), map, regions)?;
    Ok(Fixture {
        name: name.to_string(),
        spec,
        table,
    })
}

type Entries = Vec<(Vec<&'static str>, Vec<i64>, Q)>;

/// Pads a key of arity below three with divisor insertions, multiplying the
/// value by the matching intersection numbers.
fn padded(spec: &ManifoldSpec, names: &[&str], beta: CurveClass, value: Q) -> Result<(GwKey, Q)> {
    let mut classes = names.iter().map(|n| spec.index_of(n)).collect::<Result<Vec<_>>>()?;
    let mut value = value;
    if classes.len() < 3 {
        let d = (0..spec.s())
            .find(|&c| beta.coords[c] != 0)
            .ok_or_else(|| Error::InvalidTable("cannot pad an invariant of class 0".into()))?;
        while classes.len() < 3 {
            classes.push(d + 1);
            value *= qi(beta.coords[d]);
        }
    }
    Ok((GwKey::new(classes, beta), value))
}

fn cpn_names(n: usize) -> Vec<String> {
    (0..=n)
        .map(|a| {
            match (a, n - a) {
                (0, _) => "M".to_string(),
                (_, 0) => "pt".to_string(),
                (_, 1) => "L".to_string(),
                (1, _) => "H".to_string(),
                (_, 2) => "S".to_string(),
                _ => format!("h{a}"),
            }
        })
        .collect()
}

/// ℂPⁿ with basis h⁰…hⁿ (index = complex codimension).
pub fn cpn_spec(n: usize) -> ManifoldSpec {
    let names = cpn_names(n);
    let mut triple = vec![vec![vec![qi(0); n + 1]; n + 1]; n + 1];
    for (a, plane) in triple.iter_mut().enumerate() {
        for (b, row) in plane.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                if a + b + c == n {
                    *v = qi(1);
                }
            }
        }
    }
    ManifoldSpec {
        dim2n: 2 * n as u32,
        basis: names
            .into_iter()
            .enumerate()
            .map(|(a, name)| BasisClass {
                name,
                degree: 2 * (n - a) as u32,
            })
            .collect(),
        pairing: Matrix::from_fn(n + 1, n + 1, |i, j| if i + j == n { qi(1) } else { qi(0) }),
        curve_basis: vec!["L".into()],
        c1: vec![n as i64 + 1],
        omega: vec![qi(1)],
        cone_generators: vec![CurveClass::new(vec![1])],
        triple: Some(triple),
        blowup: None,
    }
}

fn cp1() -> (ManifoldSpec, Entries, Vec<Region>) {
    let e = vec![(vec!["pt", "pt", "pt"], vec![1], qi(1))];
    (cpn_spec(1), e, vec![Region::everything()])
}

fn cp2() -> (ManifoldSpec, Entries, Vec<Region>) {
    let nd = [1, 1, 12, 620];
    let e = nd
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let d = i as i64 + 1;
            (vec!["pt"; (3 * d - 1) as usize], vec![d], qi(v))
        })
        .collect();
    let regions = vec![Region {
        arity: None,
        energy: Some(qi(4)),
    }];
    (cpn_spec(2), e, regions)
}

fn repeat(parts: &[(&'static str, usize)]) -> Vec<&'static str> {
    parts.iter().flat_map(|&(n, k)| std::iter::repeat_n(n, k)).collect()
}

fn cp3() -> (ManifoldSpec, Entries, Vec<Region>) {
    let e = vec![
        (repeat(&[("L", 4)]), vec![1], qi(2)),
        (repeat(&[("L", 2), ("pt", 1)]), vec![1], qi(1)),
        (repeat(&[("pt", 2), ("H", 1)]), vec![1], qi(1)),
        (repeat(&[("L", 8)]), vec![2], qi(92)),
        (repeat(&[("L", 6), ("pt", 1)]), vec![2], qi(18)),
        (repeat(&[("L", 4), ("pt", 2)]), vec![2], qi(4)),
        (repeat(&[("L", 2), ("pt", 3)]), vec![2], qi(1)),
    ];
    let regions = vec![Region {
        arity: None,
        energy: Some(qi(2)),
    }];
    (cpn_spec(3), e, regions)
}

fn cp4() -> (ManifoldSpec, Entries, Vec<Region>) {
    let spec = cpn_spec(4);
    let names: Vec<&'static str> = vec!["M", "H", "S", "L", "pt"];
    let mut e = Vec::new();
    for a in 1..=4usize {
        for b in a..=4 {
            let c = 9 - (a + b) as i64;
            if (b as i64..=4).contains(&c) {
                e.push((vec![names[a], names[b], names[c as usize]], vec![1], qi(1)));
            }
        }
    }
    let regions = vec![Region {
        arity: Some(3),
        energy: None,
    }];
    (spec, e, regions)
}

fn four_dim(names: [&str; 4], curve_basis: [&str; 2], c1: [i64; 2]) -> ManifoldSpec {
    let pair = |i: usize, j: usize| -> Q {
        match (i, j) {
            (0, 3) | (3, 0) | (1, 2) | (2, 1) => qi(1),
            _ => qi(0),
        }
    };
    let mut triple = vec![vec![vec![qi(0); 4]; 4]; 4];
    for (i, plane) in triple.iter_mut().enumerate() {
        for (j, row) in plane.iter_mut().enumerate() {
            for (k, v) in row.iter_mut().enumerate() {
                let mut idx = [i, j, k];
                idx.sort_unstable();
                *v = match idx {
                    [0, 0, 3] | [0, 1, 2] => qi(1),
                    _ => qi(0),
                };
            }
        }
    }
    ManifoldSpec {
        dim2n: 4,
        basis: names
            .iter()
            .zip([4u32, 2, 2, 0])
            .map(|(n, d)| BasisClass {
                name: n.to_string(),
                degree: d,
            })
            .collect(),
        pairing: Matrix::from_fn(4, 4, pair),
        curve_basis: curve_basis.iter().map(|s| s.to_string()).collect(),
        c1: c1.to_vec(),
        omega: vec![qi(1), qi(1)],
        cone_generators: vec![CurveClass::new(vec![1, 0]), CurveClass::new(vec![0, 1])],
        triple: Some(triple),
        blowup: None,
    }
}

fn s2xs2() -> (ManifoldSpec, Entries, Vec<Region>) {
    let spec = four_dim(["M", "A", "B", "pt"], ["B", "A"], [2, 2]);
    let mut e = Vec::new();
    for (a, b, v) in [(1, 0, 1), (0, 1, 1), (1, 1, 1), (2, 1, 1), (1, 2, 1)] {
        let k = (2 * (a + b) - 1) as usize;
        e.push((vec!["pt"; k], vec![a, b], qi(v)));
    }
    let regions = vec![Region {
        arity: None,
        energy: Some(qi(3)),
    }];
    (spec, e, regions)
}

fn bigsymp() -> (ManifoldSpec, Entries, Vec<Region>) {
    let spec = four_dim(["M", "a", "b", "pt"], ["A", "B"], [1, 1]);
    let e = vec![
        (vec!["a", "a", "pt"], vec![1, 1], qi(1)),
        (vec!["a", "a", "pt"], vec![0, 2], qi(-1)),
        (vec!["b", "b", "pt"], vec![1, 1], qi(1)),
        (vec!["pt", "pt", "pt"], vec![2, 2], qi(1)),
        (vec!["pt", "pt", "pt"], vec![1, 3], qi(-1)),
    ];
    (spec, e, vec![Region::everything()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gwdata::GwValue;

    #[test]
    fn all_fixtures_load() {
        for n in NAMES {
            let f = fixture(n).unwrap();
            assert!(f.table.warnings().is_empty(), "{n}: {:?}", f.table.warnings());
        }
        assert!(fixture("nope").is_err());
    }

    #[test]
    fn cpn_pairing_and_names() {
        let s = cpn_spec(4);
        let names: Vec<&str> = s.basis.iter().map(|b| b.name.as_str()).collect();
        assert_eq!(names, ["M", "H", "S", "L", "pt"]);
        assert_eq!(*s.pair(1, 3), qi(1));
        assert_eq!(*s.pair(2, 2), qi(1));
        assert_eq!(*s.pair(1, 2), qi(0));
    }

    #[test]
    fn padding_uses_divisor_axiom() {
        let f = fixture("cp2").unwrap();
        let l = CurveClass::new(vec![1]);
        assert_eq!(f.table.lookup(&[2, 2, 1], &l).unwrap(), GwValue::Known(qi(1)));
        let f = fixture("s2xs2").unwrap();
        // ⟨pt, A, A⟩ in the class with A-coordinate 1.
        let b = CurveClass::new(vec![1, 0]);
        assert_eq!(f.table.lookup(&[3, 1, 1], &b).unwrap(), GwValue::Known(qi(1)));
    }

    #[test]
    fn cp4_small_entries() {
        let f = fixture("cp4").unwrap();
        assert_eq!(f.table.entries().len(), 3);
    }
}
