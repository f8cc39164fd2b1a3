//! Hofer–Zehnder capacity bounds from a nonzero invariant
//! ⟨[pt], a₀, [pt], a₁, …, a_k⟩_A, together with the valuations ν, ν_[M] and
//! the pairing Π on Novikov classes.
//!
//! Only the Gromov–Witten side is computed: the coefficient of T^{ω(A)}[M]
//! in [pt] ∗_η a₀ is a nonzero polynomial in η, and any η where it does not
//! vanish gives c_HZ° ≤ ω(A).

use serde::Serialize;

use crate::algebrakit::search_nonvanishing;
use crate::error::{Error, Result};
use crate::gwdata::{GwKey, GwTable, GwValue};
use crate::homology::{CurveClass, ManifoldSpec};
use crate::polycore::rational::fmt_q;
use crate::polycore::{MultiPoly, Q};
use crate::quantum::{symbolic_algebra, DeformParam, ExpRational, Mode, NovikovCoeff, StructureConstants, SymCoeff};

/// A class Σ_g a_g T^g, one truncated series per basis coordinate.
pub type NovikovClass = Vec<NovikovCoeff>;

/// A value in ℚ ∪ {−∞}, or an upper bound when truncation hides the answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(Q),
    NegInfinity,
    /// Every term up to the truncation order vanishes; the value is < this.
    Below(Q),
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{}", fmt_q(v)),
            Valuation::NegInfinity => write!(f, "-inf"),
            Valuation::Below(v) => write!(f, "< {}", fmt_q(v)),
        }
    }
}

fn valuation_of<'a>(coords: impl Iterator<Item = &'a NovikovCoeff>) -> Valuation {
    let mut best: Option<Q> = None;
    let mut trunc: Option<Q> = None;
    for c in coords {
        for g in c.grades() {
            if !c.at_grade(&g).is_zero() {
                let v = -g;
                if best.as_ref().is_none_or(|b| v > *b) {
                    best = Some(v);
                }
            }
        }
        if let Some(t) = &c.valid_to {
            if trunc.as_ref().is_none_or(|x| t < x) {
                trunc = Some(t.clone());
            }
        }
    }
    match (best, trunc) {
        (Some(v), _) => Valuation::Finite(v),
        (None, None) => Valuation::NegInfinity,
        (None, Some(t)) => Valuation::Below(-t),
    }
}

/// ν(a) = max{−g | a_g ≠ 0}.
pub fn nu(a: &NovikovClass) -> Valuation {
    valuation_of(a.iter())
}

/// ν of the fundamental-class coordinate.
pub fn nu_m(spec: &ManifoldSpec, a: &NovikovClass) -> Result<Valuation> {
    if a.len() != spec.len() {
        return Err(Error::Dimension(format!("class has {} coordinates, basis has {}", a.len(), spec.len())));
    }
    Ok(valuation_of(a.iter().take(1)))
}

/// Π(a, b) = Σ_g a_g ∩ b_{−g}.
pub fn pi_pairing(spec: &ManifoldSpec, a: &NovikovClass, b: &NovikovClass) -> Result<ExpRational> {
    let n = spec.len();
    if a.len() != n || b.len() != n {
        return Err(Error::Dimension("pairing needs classes over the full basis".into()));
    }
    let lowest = |x: &NovikovClass| x.iter().flat_map(|c| c.grades()).min();
    let cap = |x: &NovikovClass| x.iter().filter_map(|c| c.valid_to.clone()).min();
    for (u, v) in [(a, b), (b, a)] {
        if let (Some(t), Some(lo)) = (cap(u), lowest(v)) {
            if lo < -t {
                return Err(Error::Precondition(format!(
                    "pairing needs terms of grade {} that are truncated away",
                    fmt_q(&-lo)
                )));
            }
        }
    }
    let mut out = ExpRational::default();
    for i in 0..n {
        for j in 0..n {
            let p = spec.pair(i, j);
            if p.is_zero_rational() {
                continue;
            }
            for ((g, c), x) in &a[i].terms {
                for ((h, d), y) in &b[j].terms {
                    if *h == -g.clone() {
                        out.add_term(c + d, x * y * p);
                    }
                }
            }
        }
    }
    Ok(out)
}

trait IsZeroRational {
    fn is_zero_rational(&self) -> bool;
}

impl IsZeroRational for Q {
    fn is_zero_rational(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

/// Parses `"pt,a0,pt,aux…@A"`.
pub fn parse_invariant(spec: &ManifoldSpec, text: &str) -> Result<(Vec<usize>, CurveClass)> {
    let (cls, beta) = text
        .split_once('@')
        .ok_or_else(|| Error::Parse(format!("invariant `{text}` needs the form classes@curve")))?;
    let classes = cls
        .split(',')
        .map(|c| spec.index_of(c.trim()))
        .collect::<Result<Vec<_>>>()?;
    Ok((classes, spec.parse_curve(beta)?))
}

/// The hypothesis ⟨[pt], a₀, [pt], a₁…a_k⟩_A split into its parts.
#[derive(Clone, Debug)]
pub struct Hypothesis {
    pub key: GwKey,
    pub a0: usize,
    pub aux: Vec<usize>,
    pub value: Q,
}

pub fn check_hypothesis(table: &GwTable, classes: &[usize], a: &CurveClass) -> Result<Hypothesis> {
    let spec = table.spec();
    let pt = spec
        .point_class()
        .ok_or_else(|| Error::Precondition("the basis has no point class".into()))?;
    let mut rest = classes.to_vec();
    for _ in 0..2 {
        let p = rest
            .iter()
            .position(|&c| c == pt)
            .ok_or_else(|| Error::Precondition("the invariant needs two point insertions".into()))?;
        rest.remove(p);
    }
    if rest.is_empty() {
        return Err(Error::Precondition("the invariant needs a class a0 besides the two points".into()));
    }
    let a0 = rest.remove(0);
    if rest.iter().chain([&a0]).any(|&c| spec.degree(c) == spec.dim2n) {
        return Err(Error::Precondition(
            "none of a0, a1, ... may be a multiple of the fundamental class".into(),
        ));
    }
    if a.is_zero() {
        return Err(Error::Precondition("the curve class must be nonzero".into()));
    }
    let value = match table.lookup(classes, a)? {
        GwValue::Known(v) if !v.is_zero_rational() => v,
        GwValue::Known(_) => {
            return Err(Error::Precondition("the hypothesis invariant vanishes; no bound is emitted".into()))
        }
        GwValue::Unknown => {
            return Err(Error::Precondition("the hypothesis invariant is not in the table; no bound is emitted".into()))
        }
    };
    Ok(Hypothesis {
        key: GwKey::new(classes.to_vec(), a.clone()),
        a0,
        aux: rest,
        value,
    })
}

/// Coefficient polynomial of T^{ω(A)}[M] in [pt] ∗_η a₀, together with the
/// monomial that the hypothesis forces to survive.
#[derive(Clone, Debug)]
pub struct WitnessPoly {
    pub poly: MultiPoly,
    pub designated: Vec<(usize, i64)>,
    pub mode: Mode,
}

pub fn hz_witness_poly(table: &GwTable, hyp: &Hypothesis) -> Result<WitnessPoly> {
    let spec = table.spec();
    let s = spec.s();
    let a = &hyp.key.beta;
    let energy = spec.omega_of(a);
    let higher: Vec<usize> = hyp.aux.iter().copied().filter(|&c| spec.degree(c) + 2 < spec.dim2n).collect();
    let mode = if higher.is_empty() { Mode::Small } else { Mode::Big };
    let sc = StructureConstants::compute(table, mode, &energy)?;
    let alg = symbolic_algebra(&sc, &DeformParam::symbolic(spec))?;
    let pt = spec.point_class().expect("checked by the hypothesis");
    let coeff: SymCoeff = alg.product(&alg.basis(pt), &alg.basis(hyp.a0)).swap_remove(0);
    if let Some(v) = &coeff.valid_to {
        if *v < energy {
            return Err(Error::Precondition(format!(
                "the table determines [pt]*a0 only up to energy {}, below {}",
                fmt_q(v),
                fmt_q(&energy)
            )));
        }
    }
    let omega = coeff.omega.clone();
    let poly = coeff.poly.retain_terms(|m| SymCoeff::grade_of(&omega, m) == energy);
    let mut designated: Vec<(usize, i64)> = (0..s).filter(|&k| a.coords[k] != 0).map(|k| (k, a.coords[k])).collect();
    let mut counts = std::collections::BTreeMap::new();
    for &c in &higher {
        *counts.entry(s + (c - s - 1)).or_insert(0i64) += 1;
    }
    designated.extend(counts);
    if poly.coeff(&designated).is_zero_rational() {
        return Err(Error::Precondition(
            "the designated monomial cancels; the table is inconsistent with the hypothesis invariant".into(),
        ));
    }
    Ok(WitnessPoly { poly, designated, mode })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CapacityResult {
    pub bound: String,
    pub curve: String,
    pub source_invariant: Vec<String>,
    pub invariant_value: String,
    pub a0: String,
    pub witness_poly: String,
    pub designated_monomial: String,
    pub witness_eta: Option<Vec<String>>,
    pub witness_value: Option<String>,
    pub scope: String,
}

pub fn hz_bound(table: &GwTable, classes: &[usize], a: &CurveClass) -> Result<CapacityResult> {
    let spec = table.spec();
    let hyp = check_hypothesis(table, classes, a)?;
    let w = hz_witness_poly(table, &hyp)?;
    let radius = w.poly.shifted_degree() + 1;
    let eta = search_nonvanishing(&w.poly, 1, radius)?.into_iter().next();
    let value = eta.as_ref().map(|p| w.poly.eval(p)).transpose()?;
    Ok(CapacityResult {
        bound: fmt_q(&spec.omega_of(a)),
        curve: spec.curve_name(a),
        source_invariant: hyp.key.classes.iter().map(|&c| spec.basis[c].name.clone()).collect(),
        invariant_value: fmt_q(&hyp.value),
        a0: spec.basis[hyp.a0].name.clone(),
        witness_poly: w.poly.to_string(),
        designated_monomial: MultiPoly::fmt_monomial(w.poly.vars(), &w.designated),
        witness_eta: eta.map(|p| p.iter().map(fmt_q).collect()),
        witness_value: value.as_ref().map(fmt_q),
        scope: "bound on the pi1-sensitive Hofer-Zehnder capacity via nu_[M]([pt]*a0) >= -omega(A); spectral invariants are not computed".into(),
    })
}
