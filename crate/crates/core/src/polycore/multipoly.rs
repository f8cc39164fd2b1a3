//! Sparse multivariate Laurent polynomials over Q.
//!
//! A monomial is a list of `(variable index, exponent)` pairs sorted by index
//! with no zero exponents. Negative exponents are only legal on variables
//! flagged `laurent`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::rational::{fmt_q, pow_q, qi, Q};
use super::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Var {
    pub name: String,
    pub laurent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarSet {
    vars: Vec<Var>,
}

impl VarSet {
    pub fn new(vars: Vec<Var>) -> Arc<Self> {
        Arc::new(VarSet { vars })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn var(&self, i: usize) -> &Var {
        &self.vars[i]
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }
}

pub type Monomial = Vec<(usize, i64)>;

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let e = a[i].1 + b[j].1;
                if e != 0 {
                    out.push((a[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub fn mono_exponent(m: &Monomial, var: usize) -> i64 {
    m.iter().find(|(v, _)| *v == var).map_or(0, |(_, e)| *e)
}

#[derive(Clone, Debug)]
pub struct MultiPoly {
    vars: Arc<VarSet>,
    terms: BTreeMap<Monomial, Q>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars)
            && self.terms == other.terms
    }
}

impl MultiPoly {
    pub fn zero(vars: &Arc<VarSet>) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Arc<VarSet>, c: Q) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn one(vars: &Arc<VarSet>) -> Self {
        Self::constant(vars, qi(1))
    }

    pub fn var(vars: &Arc<VarSet>, i: usize) -> Self {
        Self::monomial(vars, vec![(i, 1)], qi(1)).expect("valid variable")
    }

    /// Builds `c * m`. Exponents may be given in any order; zeros are dropped.
    pub fn monomial(vars: &Arc<VarSet>, mut m: Monomial, c: Q) -> Result<Self> {
        m.retain(|(_, e)| *e != 0);
        m.sort_unstable();
        for w in m.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Dimension("repeated variable in monomial".into()));
            }
        }
        for &(v, e) in &m {
            if v >= vars.len() {
                return Err(Error::IndexOutOfRange(v));
            }
            if e < 0 && !vars.var(v).laurent {
                return Err(Error::NegativeExponent(vars.var(v).name.clone()));
            }
        }
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        Ok(p)
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Q> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_empty())
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(|| qi(0))
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(|| qi(0))
    }

    fn check_vars(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomials over different variable sets"
        );
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Keeps the terms whose monomial satisfies `keep`.
    pub fn retain_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        for _ in 0..e {
            acc = acc.times(self);
        }
        acc
    }

    /// Substitutes `values[i]` for variable `i` where given; the rest stay symbolic.
    pub fn substitute(&self, values: &[Option<Q>]) -> Result<Self> {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in m {
                match values.get(v).and_then(|x| x.as_ref()) {
                    Some(val) => {
                        if val.is_zero() && e < 0 {
                            return Err(Error::ZeroUnit(v));
                        }
                        coeff *= pow_q(val, e);
                    }
                    None => rest.push((v, e)),
                }
            }
            out.add_term(rest, coeff);
        }
        Ok(out)
    }

    pub fn eval(&self, values: &[Q]) -> Result<Q> {
        if values.len() != self.vars.len() {
            return Err(Error::Dimension(format!(
                "expected {} values, got {}",
                self.vars.len(),
                values.len()
            )));
        }
        let opts: Vec<Option<Q>> = values.iter().cloned().map(Some).collect();
        Ok(self.substitute(&opts)?.constant_term())
    }

    /// Re-expresses the polynomial over a larger variable set via an index map.
    pub fn embed(&self, target: &Arc<VarSet>, index_map: &[usize]) -> Result<Self> {
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mm: Monomial = m.iter().map(|&(v, e)| (index_map[v], e)).collect();
            let t = Self::monomial(target, mm, c.clone())?;
            for (k, v) in t.terms {
                out.add_term(k, v);
            }
        }
        Ok(out)
    }

    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|m| m.iter().map(|(_, e)| *e).sum::<i64>())
            .max()
            .unwrap_or(0)
    }

    /// Degree of `z^k * self` after the smallest shift `z^k` clearing all
    /// negative exponents, i.e. the degree that matters for zero testing.
    pub fn shifted_degree(&self) -> i64 {
        let n = self.vars.len();
        let mut lo = vec![0i64; n];
        for m in self.terms.keys() {
            for &(v, e) in m {
                lo[v] = lo[v].min(e);
            }
        }
        self.terms
            .keys()
            .map(|m| {
                (0..n)
                    .map(|v| mono_exponent(m, v) - lo[v])
                    .sum::<i64>()
            })
            .max()
            .unwrap_or(0)
    }

    /// If `self = u * other` for a unit `u = c * z^m` of the Laurent ring,
    /// returns `(c, m)`.
    pub fn unit_ratio(&self, other: &Self) -> Option<(Q, Monomial)> {
        self.check_vars(other);
        if self.terms.len() != other.terms.len() || self.is_zero() {
            return None;
        }
        let (m0, c0) = self.terms.iter().next()?;
        let (n0, d0) = other.terms.iter().next()?;
        let c = c0 / d0;
        let shift: Monomial = {
            let inv: Monomial = n0.iter().map(|&(v, e)| (v, -e)).collect();
            mono_mul(m0, &inv)
        };
        for &(v, _) in &shift {
            if !self.vars.var(v).laurent {
                return None;
            }
        }
        let scaled = other.mul_monomial(&shift).scale(&c);
        if scaled == *self {
            Some((c, shift))
        } else {
            None
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let mut out = Self::zero(&self.vars);
        for (k, c) in &self.terms {
            out.terms.insert(mono_mul(k, m), c.clone());
        }
        out
    }

    pub fn fmt_monomial(vars: &VarSet, m: &Monomial) -> String {
        m.iter()
            .map(|&(v, e)| {
                if e == 1 {
                    vars.var(v).name.clone()
                } else {
                    format!("{}^{}", vars.var(v).name, e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Scalar for MultiPoly {
    fn zero_like(&self) -> Self {
        Self::zero(&self.vars)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.vars)
    }
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
    fn times(&self, rhs: &Self) -> Self {
        self.check_vars(rhs);
        let mut out = Self::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }
    fn negate(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }
    fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return self.zero_like();
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono = Self::fmt_monomial(&self.vars, m);
            if mono.is_empty() {
                write!(f, "{}", fmt_q(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{}", fmt_q(&abs), mono)?;
            }
        }
        Ok(())
    }
}
