//! Coefficient rings for quantum products: the universal ring R_M, the
//! symbolic Laurent ring, truncated Novikov series and plain rationals.
//!
//! Truncated elements carry `valid_to`: every term of grade at most that
//! bound is exact, nothing is known above it. `None` means exact.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::homology::CurveClass;
use crate::polycore::rational::fmt_q;
use crate::polycore::{qi, MultiPoly, Scalar, VarSet, Q};

/// A ring element graded by symplectic energy, possibly truncated.
pub trait Coeff: Scalar + fmt::Display {
    fn valid_to(&self) -> Option<&Q>;
    /// Drops terms above `cap` and lowers `valid_to` to at most `cap`.
    fn truncate(&self, cap: &Q) -> Self;
    /// The grade-zero part.
    fn grade_zero(&self) -> Self;
    /// Smallest grade of a nonzero term.
    fn min_grade(&self) -> Option<Q>;
    fn constant(&self, c: &Q) -> Self {
        self.one_like().scale(c)
    }
}

fn min_opt(a: Option<&Q>, b: Option<&Q>) -> Option<Q> {
    match (a, b) {
        (None, None) => None,
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (Some(x), Some(y)) => Some(x.min(y).clone()),
    }
}

/// Lowest grade that could carry a nonzero term.
fn floor<C: Coeff>(c: &C) -> Option<Q> {
    c.min_grade().or_else(|| c.valid_to().cloned())
}

fn product_valid<C: Coeff>(a: &C, b: &C) -> Option<Q> {
    let from_a = a.valid_to().and_then(|va| floor(b).map(|lb| va + lb));
    let from_b = b.valid_to().and_then(|vb| floor(a).map(|la| vb + la));
    min_opt(from_a.as_ref(), from_b.as_ref())
}

impl Coeff for Q {
    fn valid_to(&self) -> Option<&Q> {
        None
    }
    fn truncate(&self, _cap: &Q) -> Self {
        self.clone()
    }
    fn grade_zero(&self) -> Self {
        self.clone()
    }
    fn min_grade(&self) -> Option<Q> {
        (!Zero::is_zero(self)).then(|| qi(0))
    }
}

/// Shared data for universal coefficients: polynomial variables and the
/// ω-values on curve coordinates.
#[derive(Debug, PartialEq, Eq)]
pub struct UniCtx {
    pub vars: Arc<VarSet>,
    pub omega: Vec<Q>,
}

impl UniCtx {
    pub fn energy(&self, beta: &CurveClass) -> Q {
        self.omega
            .iter()
            .zip(&beta.coords)
            .map(|(w, &c)| w * qi(c))
            .fold(qi(0), |a, b| a + b)
    }
}

/// Σ f_β q^β with f_β polynomial in the deformation variables.
#[derive(Clone, Debug, PartialEq)]
pub struct UniversalCoeff {
    pub ctx: Arc<UniCtx>,
    pub terms: BTreeMap<CurveClass, MultiPoly>,
    pub valid_to: Option<Q>,
}

impl UniversalCoeff {
    pub fn zero(ctx: &Arc<UniCtx>) -> Self {
        UniversalCoeff {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
            valid_to: None,
        }
    }

    pub fn term(ctx: &Arc<UniCtx>, beta: CurveClass, f: MultiPoly) -> Self {
        let mut out = Self::zero(ctx);
        if !f.is_zero() {
            out.terms.insert(beta, f);
        }
        out
    }

    fn s(&self) -> usize {
        self.ctx.omega.len()
    }

    fn add_term(&mut self, beta: CurveClass, f: MultiPoly) {
        if f.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(beta.clone())
            .or_insert_with(|| MultiPoly::zero(&self.ctx.vars));
        *slot = slot.plus(&f);
        if slot.is_zero() {
            self.terms.remove(&beta);
        }
    }

    fn clip(mut self) -> Self {
        if let Some(v) = self.valid_to.clone() {
            let ctx = self.ctx.clone();
            self.terms.retain(|b, _| ctx.energy(b) <= v);
        }
        self
    }
}

impl Scalar for UniversalCoeff {
    fn zero_like(&self) -> Self {
        Self::zero(&self.ctx)
    }
    fn one_like(&self) -> Self {
        Self::term(&self.ctx, CurveClass::zero(self.s()), MultiPoly::one(&self.ctx.vars))
    }
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (b, f) in &rhs.terms {
            out.add_term(b.clone(), f.clone());
        }
        out.valid_to = min_opt(self.valid_to.as_ref(), rhs.valid_to.as_ref());
        out.clip()
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negate())
    }
    fn times(&self, rhs: &Self) -> Self {
        let mut out = self.zero_like();
        out.valid_to = product_valid(self, rhs);
        for (b1, f1) in &self.terms {
            for (b2, f2) in &rhs.terms {
                let b = b1.add(b2);
                if out.valid_to.as_ref().is_some_and(|v| self.ctx.energy(&b) > *v) {
                    continue;
                }
                out.add_term(b, f1.times(f2));
            }
        }
        out
    }
    fn negate(&self) -> Self {
        let mut out = self.clone();
        for f in out.terms.values_mut() {
            *f = f.negate();
        }
        out
    }
    fn scale(&self, c: &Q) -> Self {
        let mut out = self.clone();
        out.terms = self
            .terms
            .iter()
            .map(|(b, f)| (b.clone(), f.scale(c)))
            .filter(|(_, f)| !f.is_zero())
            .collect();
        out
    }
}

impl Coeff for UniversalCoeff {
    fn valid_to(&self) -> Option<&Q> {
        self.valid_to.as_ref()
    }
    fn truncate(&self, cap: &Q) -> Self {
        let mut out = self.clone();
        out.valid_to = min_opt(self.valid_to.as_ref(), Some(cap));
        out.clip()
    }
    fn grade_zero(&self) -> Self {
        let mut out = self.clone();
        let ctx = self.ctx.clone();
        out.terms.retain(|b, _| ctx.energy(b).is_zero());
        out
    }
    fn min_grade(&self) -> Option<Q> {
        self.terms.keys().map(|b| self.ctx.energy(b)).min()
    }
}

impl fmt::Display for UniversalCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (b, p)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({p})*q^{b}")?;
        }
        if let Some(v) = &self.valid_to {
            write!(f, " + O(T^{})", fmt_q(v))?;
        }
        Ok(())
    }
}

/// Laurent polynomial in z₁…z_s with polynomial x-variables; the grade of a
/// monomial is ω applied to its z-exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct SymCoeff {
    pub poly: MultiPoly,
    pub omega: Arc<Vec<Q>>,
    pub valid_to: Option<Q>,
}

impl SymCoeff {
    pub fn exact(poly: MultiPoly, omega: &Arc<Vec<Q>>) -> Self {
        SymCoeff {
            poly,
            omega: omega.clone(),
            valid_to: None,
        }
    }

    pub fn grade_of(omega: &[Q], m: &[(usize, i64)]) -> Q {
        m.iter()
            .filter(|(v, _)| *v < omega.len())
            .map(|(v, e)| &omega[*v] * qi(*e))
            .fold(qi(0), |a, b| a + b)
    }

    fn clip(mut self) -> Self {
        if let Some(v) = &self.valid_to {
            let omega = self.omega.clone();
            self.poly = self.poly.retain_terms(|m| Self::grade_of(&omega, m) <= *v);
        }
        self
    }

    fn wrap(&self, poly: MultiPoly, valid_to: Option<Q>) -> Self {
        SymCoeff {
            poly,
            omega: self.omega.clone(),
            valid_to,
        }
        .clip()
    }
}

impl Scalar for SymCoeff {
    fn zero_like(&self) -> Self {
        self.wrap(self.poly.zero_like(), None)
    }
    fn one_like(&self) -> Self {
        self.wrap(self.poly.one_like(), None)
    }
    fn vanishes(&self) -> bool {
        self.poly.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.wrap(
            self.poly.plus(&rhs.poly),
            min_opt(self.valid_to.as_ref(), rhs.valid_to.as_ref()),
        )
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.wrap(
            self.poly.minus(&rhs.poly),
            min_opt(self.valid_to.as_ref(), rhs.valid_to.as_ref()),
        )
    }
    fn times(&self, rhs: &Self) -> Self {
        self.wrap(self.poly.times(&rhs.poly), product_valid(self, rhs))
    }
    fn negate(&self) -> Self {
        self.wrap(self.poly.negate(), self.valid_to.clone())
    }
    fn scale(&self, c: &Q) -> Self {
        self.wrap(self.poly.scale(c), self.valid_to.clone())
    }
}

impl Coeff for SymCoeff {
    fn valid_to(&self) -> Option<&Q> {
        self.valid_to.as_ref()
    }
    fn truncate(&self, cap: &Q) -> Self {
        self.wrap(self.poly.clone(), min_opt(self.valid_to.as_ref(), Some(cap)))
    }
    fn grade_zero(&self) -> Self {
        let p = self.poly.retain_terms(|m| Self::grade_of(&self.omega, m).is_zero());
        self.wrap(p, self.valid_to.clone())
    }
    fn min_grade(&self) -> Option<Q> {
        self.poly.terms().keys().map(|m| Self::grade_of(&self.omega, m)).min()
    }
}

impl fmt::Display for SymCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)?;
        if let Some(v) = &self.valid_to {
            write!(f, " + O(T^{})", fmt_q(v))?;
        }
        Ok(())
    }
}

/// Finite sum Σ a·e^c with rational a and distinct rational c. The values
/// e^c for distinct rational c are linearly independent over Q.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExpRational {
    pub terms: BTreeMap<Q, Q>,
}

impl ExpRational {
    pub fn rational(a: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !a.is_zero() {
            terms.insert(qi(0), a);
        }
        ExpRational { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, c: Q, a: Q) {
        if a.is_zero() {
            return;
        }
        let slot = self.terms.entry(c.clone()).or_insert_with(|| qi(0));
        *slot += a;
        if slot.is_zero() {
            self.terms.remove(&c);
        }
    }

    pub fn as_rational(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(qi(0)),
            1 => self.terms.get(&qi(0)).cloned(),
            _ => None,
        }
    }
}

impl fmt::Display for ExpRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, a)| {
                if c.is_zero() {
                    fmt_q(a)
                } else {
                    format!("{}*e^({})", fmt_q(a), fmt_q(c))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Truncated Novikov series Σ a·T^g·e^c keyed by (g, c).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NovikovCoeff {
    pub terms: BTreeMap<(Q, Q), Q>,
    pub valid_to: Option<Q>,
}

impl NovikovCoeff {
    pub fn zero() -> Self {
        NovikovCoeff::default()
    }

    pub fn monomial(g: Q, c: Q, a: Q) -> Self {
        let mut out = Self::zero();
        out.add_term(g, c, a);
        out
    }

    pub fn add_term(&mut self, g: Q, c: Q, a: Q) {
        if a.is_zero() {
            return;
        }
        let key = (g, c);
        let slot = self.terms.entry(key.clone()).or_insert_with(|| qi(0));
        *slot += a;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Multiplies by T^γ.
    pub fn shift(&self, gamma: &Q) -> Self {
        NovikovCoeff {
            terms: self
                .terms
                .iter()
                .map(|((g, c), a)| ((g + gamma, c.clone()), a.clone()))
                .collect(),
            valid_to: self.valid_to.as_ref().map(|v| v + gamma),
        }
    }

    /// Coefficient of T^g as a combination of exponential units.
    pub fn at_grade(&self, g: &Q) -> ExpRational {
        let mut out = ExpRational::default();
        for ((gg, c), a) in &self.terms {
            if gg == g {
                out.add_term(c.clone(), a.clone());
            }
        }
        out
    }

    pub fn grades(&self) -> Vec<Q> {
        let mut g: Vec<Q> = self.terms.keys().map(|(g, _)| g.clone()).collect();
        g.dedup();
        g
    }

    fn clip(mut self) -> Self {
        if let Some(v) = &self.valid_to {
            self.terms.retain(|(g, _), _| g <= v);
        }
        self
    }
}

impl Scalar for NovikovCoeff {
    fn zero_like(&self) -> Self {
        Self::zero()
    }
    fn one_like(&self) -> Self {
        Self::monomial(qi(0), qi(0), qi(1))
    }
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for ((g, c), a) in &rhs.terms {
            out.add_term(g.clone(), c.clone(), a.clone());
        }
        out.valid_to = min_opt(self.valid_to.as_ref(), rhs.valid_to.as_ref());
        out.clip()
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negate())
    }
    fn times(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        out.valid_to = product_valid(self, rhs);
        for ((g1, c1), a1) in &self.terms {
            for ((g2, c2), a2) in &rhs.terms {
                let g = g1 + g2;
                if out.valid_to.as_ref().is_some_and(|v| g > *v) {
                    continue;
                }
                out.add_term(g, c1 + c2, a1 * a2);
            }
        }
        out
    }
    fn negate(&self) -> Self {
        NovikovCoeff {
            terms: self.terms.iter().map(|(k, a)| (k.clone(), -a.clone())).collect(),
            valid_to: self.valid_to.clone(),
        }
    }
    fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return NovikovCoeff {
                terms: BTreeMap::new(),
                valid_to: self.valid_to.clone(),
            };
        }
        NovikovCoeff {
            terms: self.terms.iter().map(|(k, a)| (k.clone(), a * c)).collect(),
            valid_to: self.valid_to.clone(),
        }
    }
}

impl Coeff for NovikovCoeff {
    fn valid_to(&self) -> Option<&Q> {
        self.valid_to.as_ref()
    }
    fn truncate(&self, cap: &Q) -> Self {
        let mut out = self.clone();
        out.valid_to = min_opt(self.valid_to.as_ref(), Some(cap));
        out.clip()
    }
    fn grade_zero(&self) -> Self {
        let mut out = self.clone();
        out.terms.retain(|(g, _), _| g.is_zero());
        out
    }
    fn min_grade(&self) -> Option<Q> {
        self.terms.keys().map(|(g, _)| g.clone()).min()
    }
}

impl fmt::Display for NovikovCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, ((g, c), a)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", fmt_q(a))?;
            if !c.is_zero() {
                write!(f, "*e^({})", fmt_q(c))?;
            }
            if !g.is_zero() {
                write!(f, "*T^({})", fmt_q(g))?;
            }
        }
        if let Some(v) = &self.valid_to {
            write!(f, " + O(T^{})", fmt_q(v))?;
        }
        Ok(())
    }
}

/// True when `c` is certified nonzero: a nonzero term sits strictly below
/// the truncation order (or the element is exact and nonzero).
pub fn certified_nonzero<C: Coeff>(c: &C) -> bool {
    match (c.min_grade(), c.valid_to()) {
        (None, _) => false,
        (Some(_), None) => true,
        (Some(g), Some(v)) => g < *v,
    }
}

/// True when `c` is certified zero (exact and without terms).
pub fn certified_zero<C: Coeff>(c: &C) -> bool {
    c.vanishes() && c.valid_to().is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{q, Var};

    fn ctx() -> Arc<UniCtx> {
        Arc::new(UniCtx {
            vars: VarSet::new(vec![Var {
                name: "x2".into(),
                laurent: false,
            }]),
            omega: vec![qi(1)],
        })
    }

    fn qb(ctx: &Arc<UniCtx>, d: i64, c: i64) -> UniversalCoeff {
        UniversalCoeff::term(ctx, CurveClass::new(vec![d]), MultiPoly::constant(&ctx.vars, qi(c)))
    }

    #[test]
    fn universal_truncation_propagates() {
        let c = ctx();
        let a = qb(&c, 1, 1).plus(&qb(&c, 0, 1)).truncate(&qi(2));
        let b = qb(&c, 1, 1).truncate(&qi(3));
        let p = a.times(&b);
        // valid to min(2 + 1, 3 + 0) = 3
        assert_eq!(p.valid_to, Some(qi(3)));
        assert_eq!(p.terms.len(), 2);
        assert!(certified_nonzero(&p));
    }

    #[test]
    fn truncated_zero_is_not_certified() {
        let c = ctx();
        let z = UniversalCoeff::zero(&c).truncate(&qi(2));
        assert!(!certified_nonzero(&z));
        assert!(!certified_zero(&z));
        assert!(certified_zero(&UniversalCoeff::zero(&c)));
    }

    #[test]
    fn novikov_units_multiply() {
        let a = NovikovCoeff::monomial(qi(1), q(1, 2), qi(2));
        let b = NovikovCoeff::monomial(qi(2), q(-1, 2), qi(3));
        let p = a.times(&b);
        assert_eq!(p, NovikovCoeff::monomial(qi(3), qi(0), qi(6)));
        assert_eq!(p.at_grade(&qi(3)).as_rational(), Some(qi(6)));
        let s = a.plus(&NovikovCoeff::monomial(qi(1), qi(0), qi(1)));
        assert_eq!(s.at_grade(&qi(1)).as_rational(), None);
    }

    #[test]
    fn novikov_shift_moves_grades() {
        let a = NovikovCoeff::monomial(qi(0), qi(0), qi(1)).shift(&qi(-2));
        assert_eq!(a.min_grade(), Some(qi(-2)));
    }
}
