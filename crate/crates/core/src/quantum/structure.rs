//! Structure constants c_ijk in the universal ring R_M.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::coeff::{Coeff, UniCtx, UniversalCoeff};
use super::deform::symbolic_vars;
use crate::error::Result;
use crate::gwdata::{GwKey, GwTable, GwValue};
use crate::homology::{enumerate_cone, CurveClass, ManifoldSpec};
use crate::polycore::rational::factorial;
use crate::polycore::{qi, MultiPoly, Scalar, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mode {
    /// Three-point invariants only (α = 0).
    Small,
    /// Full η-deformation by the higher classes.
    Big,
}

/// |α| ≤ |Δ_i|/2 + |Δ_j|/2 + |Δ_k|/2 + ⟨c₁,β⟩ − 2n.
pub fn alpha_bound(spec: &ManifoldSpec, i: usize, j: usize, k: usize, beta: &CurveClass) -> i64 {
    let d = |x: usize| spec.degree(x) as i64 / 2;
    d(i) + d(j) + d(k) + spec.c1_of(beta) - spec.dim2n as i64
}

/// Spacing of the energy lattice: grades lie in (1/D)ℤ.
pub fn grade_step(spec: &ManifoldSpec) -> Q {
    let d = spec
        .omega
        .iter()
        .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    Q::new(BigInt::one(), d)
}

/// True when every cone generator has positive first Chern number, so the
/// small product only sees classes with ⟨c₁,β⟩ ≤ 2n.
pub fn is_fano_cone(spec: &ManifoldSpec) -> bool {
    spec.cone_generators.iter().all(|g| spec.c1_of(g) > 0)
}

#[derive(Clone, Debug)]
pub struct StructureConstants {
    pub spec: Arc<ManifoldSpec>,
    pub ctx: Arc<UniCtx>,
    pub mode: Mode,
    /// Curve classes summed over.
    pub classes: Vec<CurveClass>,
    pub c: Vec<Vec<Vec<UniversalCoeff>>>,
    /// Common truncation order of every entry; `None` when exact.
    pub valid_to: Option<Q>,
    /// Lookups that fell outside the table's completeness regions.
    pub unknown: Vec<GwKey>,
}

/// Classes to sum over and the resulting truncation order.
fn summation_range(table: &GwTable, mode: Mode, cap: &Q) -> Result<(Vec<CurveClass>, Option<Q>)> {
    let spec = table.spec();
    if mode == Mode::Small && is_fano_cone(spec) {
        let top = spec.dim2n as i64;
        let ratio = spec
            .cone_generators
            .iter()
            .map(|g| spec.omega_of(g) / qi(spec.c1_of(g)))
            .max()
            .unwrap_or_else(|| qi(0));
        let bound = ratio * qi(top);
        let classes = enumerate_cone(spec, &bound)?
            .into_iter()
            .filter(|b| spec.c1_of(b) <= top)
            .collect();
        return Ok((classes, None));
    }
    let classes = enumerate_cone(spec, cap)?;
    let valid = (!table.complete_beyond(cap)).then(|| cap.clone());
    Ok((classes, valid))
}

/// Multisets of `indices` of size at most `max`, as count vectors.
fn multisets(n: usize, max: i64) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(pos: usize, left: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..=left {
            cur[pos] = c as u32;
            rec(pos + 1, left - c, cur, out);
        }
        cur[pos] = 0;
    }
    if max >= 0 {
        rec(0, max, &mut cur, &mut out);
    }
    out
}

struct Accum {
    unknown: BTreeSet<GwKey>,
}

fn one_constant(
    table: &GwTable,
    ctx: &Arc<UniCtx>,
    mode: Mode,
    classes: &[CurveClass],
    (i, j, k): (usize, usize, usize),
    acc: &mut Accum,
) -> Result<UniversalCoeff> {
    let spec = table.spec();
    let s = spec.s();
    let higher: Vec<usize> = (s + 1..spec.len()).collect();
    let mut out = UniversalCoeff::zero(ctx);
    for beta in classes {
        let bound = match mode {
            Mode::Small => 0,
            Mode::Big => alpha_bound(spec, i, j, k, beta),
        };
        for alpha in multisets(higher.len(), bound.max(0)) {
            let mut ins = vec![i, j, k];
            let mut weight = qi(1);
            let mut mono = Vec::new();
            for (slot, &cnt) in alpha.iter().enumerate() {
                if cnt > 0 {
                    ins.extend(std::iter::repeat_n(higher[slot], cnt as usize));
                    weight /= factorial(cnt as u64);
                    mono.push((s + slot, cnt as i64));
                }
            }
            match table.lookup(&ins, beta)? {
                GwValue::Known(v) => {
                    if !num_traits::Zero::is_zero(&v) {
                        let f = MultiPoly::monomial(&ctx.vars, mono, v * weight)?;
                        out = out.plus(&UniversalCoeff::term(ctx, beta.clone(), f));
                    }
                }
                GwValue::Unknown => {
                    acc.unknown.insert(GwKey::new(ins, beta.clone()));
                }
            }
        }
    }
    Ok(out)
}

fn lower_for_unknowns(spec: &ManifoldSpec, valid: Option<Q>, unknown: &BTreeSet<GwKey>) -> Option<Q> {
    let step = grade_step(spec);
    unknown.iter().fold(valid, |v, key| {
        let below = spec.omega_of(&key.beta) - &step;
        Some(match v {
            Some(x) if x < below => x,
            _ => below,
        })
    })
}

impl StructureConstants {
    pub fn compute(table: &GwTable, mode: Mode, cap: &Q) -> Result<Self> {
        let spec = table.spec_arc().clone();
        let ctx = Arc::new(UniCtx {
            vars: symbolic_vars(&spec),
            omega: spec.omega.clone(),
        });
        let (classes, valid) = summation_range(table, mode, cap)?;
        let n = spec.len();
        let mut acc = Accum {
            unknown: BTreeSet::new(),
        };
        let mut c = vec![vec![vec![UniversalCoeff::zero(&ctx); n]; n]; n];
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let v = one_constant(table, &ctx, mode, &classes, (i, j, k), &mut acc)?;
                    for (a, b, d) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                        c[a][b][d] = v.clone();
                    }
                }
            }
        }
        let valid_to = lower_for_unknowns(&spec, valid, &acc.unknown);
        if let Some(v) = &valid_to {
            for plane in c.iter_mut() {
                for row in plane.iter_mut() {
                    for e in row.iter_mut() {
                        *e = e.truncate(v);
                    }
                }
            }
        }
        Ok(StructureConstants {
            spec,
            ctx,
            mode,
            classes,
            c,
            valid_to,
            unknown: acc.unknown.into_iter().collect(),
        })
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &UniversalCoeff {
        &self.c[i][j][k]
    }

    pub fn is_exact(&self) -> bool {
        self.valid_to.is_none()
    }

    /// True when the truncation order is negative, i.e. nothing is certified.
    pub fn is_void(&self) -> bool {
        self.valid_to.as_ref().is_some_and(|v| v.is_negative())
    }
}

/// A single c_ijk.
pub fn structure_constant(table: &GwTable, i: usize, j: usize, k: usize, mode: Mode, cap: &Q) -> Result<UniversalCoeff> {
    let spec = table.spec_arc();
    let ctx = Arc::new(UniCtx {
        vars: symbolic_vars(spec),
        omega: spec.omega.clone(),
    });
    let (classes, valid) = summation_range(table, mode, cap)?;
    let mut acc = Accum {
        unknown: BTreeSet::new(),
    };
    let v = one_constant(table, &ctx, mode, &classes, (i, j, k), &mut acc)?;
    Ok(match lower_for_unknowns(spec, valid, &acc.unknown) {
        Some(cap) => v.truncate(&cap),
        None => v,
    })
}
