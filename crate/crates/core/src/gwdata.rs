//! Gromov–Witten invariant tables and the axioms used to extend them:
//! symmetry, dimension filter, divisor axiom, fundamental class and
//! constant maps.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{enumerate_cone, CurveClass, ManifoldSpec};
use crate::polycore::rational::fmt_q;
use crate::polycore::{parse_q, qi, Q};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GwKey {
    pub classes: Vec<usize>,
    pub beta: CurveClass,
}

impl GwKey {
    pub fn new(mut classes: Vec<usize>, beta: CurveClass) -> Self {
        classes.sort_unstable();
        GwKey { classes, beta }
    }

    pub fn arity(&self) -> usize {
        self.classes.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GwValue {
    Known(Q),
    Unknown,
}

impl GwValue {
    pub fn known(&self) -> Option<&Q> {
        match self {
            GwValue::Known(v) => Some(v),
            GwValue::Unknown => None,
        }
    }
}

/// Absent entries inside a region are zero. `None` bounds are unbounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub arity: Option<usize>,
    pub energy: Option<Q>,
}

impl Region {
    pub fn everything() -> Self {
        Region {
            arity: None,
            energy: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GwTable {
    spec: Arc<ManifoldSpec>,
    entries: BTreeMap<GwKey, Q>,
    complete: Vec<Region>,
    warnings: Vec<String>,
}

/// Σ(2n − |aᵢ|) = 2(n + ⟨c₁,β⟩ + k − 3).
pub fn dimension_ok(spec: &ManifoldSpec, classes: &[usize], beta: &CurveClass) -> bool {
    let top = spec.dim2n as i64;
    let lhs: i64 = classes.iter().map(|&i| top - spec.degree(i) as i64).sum();
    let k = classes.len() as i64;
    lhs == 2 * (spec.n() as i64 + spec.c1_of(beta) + k - 3)
}

/// (Δ_i ∩ Δ_j) ∩ Δ_k from the basis triple-intersection tensor.
pub fn classical_triple(spec: &ManifoldSpec, i: usize, j: usize, k: usize) -> GwValue {
    match &spec.triple {
        Some(t) => GwValue::Known(t[i][j][k].clone()),
        None => GwValue::Unknown,
    }
}

impl GwTable {
    pub fn new(spec: Arc<ManifoldSpec>, entries: BTreeMap<GwKey, Q>, complete: Vec<Region>) -> Result<Self> {
        let mut t = GwTable {
            spec,
            entries: BTreeMap::new(),
            complete,
            warnings: Vec::new(),
        };
        for (k, v) in entries {
            t.insert(k, v)?;
        }
        t.refresh_warnings()?;
        Ok(t)
    }

    pub fn spec(&self) -> &ManifoldSpec {
        &self.spec
    }

    pub fn spec_arc(&self) -> &Arc<ManifoldSpec> {
        &self.spec
    }

    pub fn entries(&self) -> &BTreeMap<GwKey, Q> {
        &self.entries
    }

    pub fn regions(&self) -> &[Region] {
        &self.complete
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    fn check_key(&self, classes: &[usize], beta: &CurveClass) -> Result<()> {
        if let Some(&bad) = classes.iter().find(|&&i| i >= self.spec.len()) {
            return Err(Error::IndexOutOfRange(bad));
        }
        if beta.coords.len() != self.spec.s() {
            return Err(Error::Dimension(format!(
                "curve class {beta} needs {} coordinates",
                self.spec.s()
            )));
        }
        Ok(())
    }

    fn insert(&mut self, key: GwKey, value: Q) -> Result<()> {
        let key = GwKey::new(key.classes, key.beta);
        self.check_key(&key.classes, &key.beta)?;
        let describe = || format!("{:?}@{}", key.classes, key.beta);
        if key.arity() < 3 {
            return Err(Error::InvalidTable(format!("entry {} has fewer than 3 insertions", describe())));
        }
        if !dimension_ok(&self.spec, &key.classes, &key.beta) {
            return Err(Error::InvalidTable(format!("entry {} fails the dimension count", describe())));
        }
        let s = self.spec.s();
        let reducible = key.beta.is_zero()
            || key.classes.contains(&0)
            || (key.arity() > 3 && key.classes.iter().any(|&i| (1..=s).contains(&i)));
        if reducible {
            return Err(Error::InvalidTable(format!(
                "entry {} is determined by the axioms and must not be tabulated",
                describe()
            )));
        }
        if !value.is_zero() {
            self.entries.insert(key, value);
        }
        Ok(())
    }

    fn refresh_warnings(&mut self) -> Result<()> {
        self.warnings.clear();
        for key in self.entries.keys() {
            let e = self.spec.omega_of(&key.beta);
            let cone = enumerate_cone(&self.spec, &e)?;
            if !cone.contains(&key.beta) {
                self.warnings.push(format!(
                    "entry at {} lies outside the declared cone",
                    self.spec.curve_name(&key.beta)
                ));
            }
        }
        Ok(())
    }

    fn in_region(&self, arity: usize, beta: &CurveClass) -> bool {
        let e = self.spec.omega_of(beta);
        self.complete.iter().any(|r| {
            r.arity.is_none_or(|a| arity <= a) && r.energy.as_ref().is_none_or(|cap| e <= *cap)
        })
    }

    /// True when no invariant outside energy `cap` can be nonzero.
    pub fn complete_beyond(&self, cap: &Q) -> bool {
        self.complete.iter().any(|r| r.arity.is_none() && r.energy.is_none())
            && self.entries.keys().all(|k| self.spec.omega_of(&k.beta) <= *cap)
    }

    /// Largest energy of a tabulated nonzero entry.
    pub fn max_entry_energy(&self) -> Q {
        self.entries
            .keys()
            .map(|k| self.spec.omega_of(&k.beta))
            .max()
            .unwrap_or_else(|| qi(0))
    }

    pub fn lookup(&self, classes: &[usize], beta: &CurveClass) -> Result<GwValue> {
        self.check_key(classes, beta)?;
        if classes.is_empty() {
            return Err(Error::Dimension("no insertions".into()));
        }
        let mut classes = classes.to_vec();
        classes.sort_unstable();
        let mut factor = qi(1);
        loop {
            let k = classes.len();
            if !dimension_ok(&self.spec, &classes, beta) {
                return Ok(GwValue::Known(qi(0)));
            }
            if beta.is_zero() && k == 3 {
                return Ok(match classical_triple(&self.spec, classes[0], classes[1], classes[2]) {
                    GwValue::Known(v) => GwValue::Known(v * factor),
                    GwValue::Unknown => GwValue::Unknown,
                });
            }
            if classes.contains(&0) && (k > 3 || !beta.is_zero()) {
                return Ok(GwValue::Known(qi(0)));
            }
            if k > 3 {
                let s = self.spec.s();
                if let Some(pos) = classes.iter().position(|&i| (1..=s).contains(&i)) {
                    let idx = classes.remove(pos);
                    factor *= qi(beta.coords[idx - 1]);
                    if factor.is_zero() {
                        return Ok(GwValue::Known(qi(0)));
                    }
                    continue;
                }
            }
            if beta.is_zero() {
                return Ok(GwValue::Known(qi(0)));
            }
            let key = GwKey {
                classes,
                beta: beta.clone(),
            };
            return Ok(match self.entries.get(&key) {
                Some(v) => GwValue::Known(v * factor),
                None if self.in_region(key.arity(), beta) => GwValue::Known(qi(0)),
                None => GwValue::Unknown,
            });
        }
    }

    pub fn load(spec: Arc<ManifoldSpec>, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(spec, &text)
    }

    pub fn from_json(spec: Arc<ManifoldSpec>, text: &str) -> Result<Self> {
        let f: TableFile = serde_json::from_str(text)?;
        let mut entries = BTreeMap::new();
        for e in f.entries {
            let classes = e
                .classes
                .iter()
                .map(|n| spec.index_of(n))
                .collect::<Result<Vec<_>>>()?;
            let key = GwKey::new(classes, CurveClass::new(e.beta));
            let v = parse_q(&e.value)?;
            if entries.insert(key.clone(), v).is_some() {
                return Err(Error::InvalidTable(format!("duplicate entry {:?}", e.classes)));
            }
        }
        let complete = f
            .complete
            .into_iter()
            .map(|r| {
                Ok(Region {
                    arity: r.arity,
                    energy: r.energy.as_deref().map(parse_q).transpose()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, entries, complete)
    }

    pub fn to_json(&self) -> String {
        let f = TableFile {
            entries: self
                .entries
                .iter()
                .map(|(k, v)| EntryFile {
                    classes: k.classes.iter().map(|&i| self.spec.basis[i].name.clone()).collect(),
                    beta: k.beta.coords.clone(),
                    value: fmt_q(v),
                })
                .collect(),
            complete: self
                .complete
                .iter()
                .map(|r| RegionFile {
                    arity: r.arity,
                    energy: r.energy.as_ref().map(fmt_q),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&f).expect("serializable");
        s.push('\n');
        s
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    entries: Vec<EntryFile>,
    #[serde(default)]
    complete: Vec<RegionFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryFile {
    classes: Vec<String>,
    beta: Vec<i64>,
    value: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionFile {
    arity: Option<usize>,
    energy: Option<String>,
}
