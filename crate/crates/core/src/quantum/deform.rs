//! Deformation parameters η, the map E_B and the specialization φ_η.

use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::coeff::{ExpRational, NovikovCoeff, SymCoeff, UniversalCoeff};
use crate::error::{Error, Result};
use crate::homology::ManifoldSpec;
use crate::polycore::rational::{fmt_q, pow_q};
use crate::polycore::{parse_q, qi, MultiPoly, Scalar, Var, VarSet, Q};

/// Value of a divisor coordinate: kept symbolic, z = e^η for rational η, or
/// a nonzero rational z given directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivEntry {
    Symbolic,
    Exp(Q),
    Value(Q),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HighEntry {
    Symbolic,
    Value(Q),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformParam {
    pub divisor: Vec<DivEntry>,
    pub higher: Vec<HighEntry>,
}

/// One coordinate of E_B(η).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EbValue {
    Symbol(String),
    /// The formal unit e^c.
    Unit(Q),
    Rational(Q),
}

/// Variables z₁…z_s (Laurent) followed by x_i for i = s+1…N.
pub fn symbolic_vars(spec: &ManifoldSpec) -> Arc<VarSet> {
    let s = spec.s();
    let mut vars: Vec<Var> = (1..=s)
        .map(|i| Var {
            name: format!("z{i}"),
            laurent: true,
        })
        .collect();
    vars.extend((s + 1..spec.len()).map(|i| Var {
        name: format!("x{i}"),
        laurent: false,
    }));
    VarSet::new(vars)
}

impl DeformParam {
    pub fn symbolic(spec: &ManifoldSpec) -> Self {
        DeformParam {
            divisor: vec![DivEntry::Symbolic; spec.s()],
            higher: vec![HighEntry::Symbolic; spec.len() - spec.s() - 1],
        }
    }

    /// η = 0.
    pub fn zero(spec: &ManifoldSpec) -> Self {
        Self::from_eta(spec, &vec![qi(0); spec.s()], &vec![qi(0); spec.len() - spec.s() - 1])
    }

    pub fn from_eta(spec: &ManifoldSpec, divisor: &[Q], higher: &[Q]) -> Self {
        debug_assert_eq!(divisor.len(), spec.s());
        DeformParam {
            divisor: divisor.iter().cloned().map(DivEntry::Exp).collect(),
            higher: higher.iter().cloned().map(HighEntry::Value).collect(),
        }
    }

    /// The rational point (z, x) with every coordinate given directly.
    pub fn at_point(z: &[Q], x: &[Q]) -> Self {
        DeformParam {
            divisor: z.iter().cloned().map(DivEntry::Value).collect(),
            higher: x.iter().cloned().map(HighEntry::Value).collect(),
        }
    }

    pub fn validate(&self, spec: &ManifoldSpec) -> Result<()> {
        if self.divisor.len() != spec.s() || self.higher.len() != spec.len() - spec.s() - 1 {
            return Err(Error::Dimension(format!(
                "deformation needs {} divisor and {} higher entries",
                spec.s(),
                spec.len() - spec.s() - 1
            )));
        }
        for (i, d) in self.divisor.iter().enumerate() {
            if matches!(d, DivEntry::Value(z) if z.is_zero()) {
                return Err(Error::ZeroUnit(i + 1));
            }
        }
        Ok(())
    }

    pub fn is_fully_symbolic(&self) -> bool {
        self.divisor.iter().all(|d| *d == DivEntry::Symbolic)
            && self.higher.iter().all(|h| *h == HighEntry::Symbolic)
    }

    pub fn is_fully_evaluated(&self) -> bool {
        self.divisor.iter().all(|d| *d != DivEntry::Symbolic)
            && self.higher.iter().all(|h| *h != HighEntry::Symbolic)
    }

    /// Rational coordinates (z, x) when every z is rational.
    pub fn rational_point(&self) -> Option<Vec<Q>> {
        let mut out = Vec::new();
        for d in &self.divisor {
            match d {
                DivEntry::Value(z) => out.push(z.clone()),
                DivEntry::Exp(e) if e.is_zero() => out.push(qi(1)),
                _ => return None,
            }
        }
        for h in &self.higher {
            match h {
                HighEntry::Value(x) => out.push(x.clone()),
                HighEntry::Symbolic => return None,
            }
        }
        Some(out)
    }

    /// Substitution list for the higher variables only.
    fn higher_values(&self, s: usize) -> Vec<Option<Q>> {
        let mut v = vec![None; s];
        v.extend(self.higher.iter().map(|h| match h {
            HighEntry::Value(x) => Some(x.clone()),
            HighEntry::Symbolic => None,
        }));
        v
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: DeformFile = serde_json::from_str(text)?;
        let divisor = f
            .divisor
            .into_iter()
            .map(|d| {
                Ok(match d {
                    DivFile::Symbolic => DivEntry::Symbolic,
                    DivFile::Exp(e) => DivEntry::Exp(parse_q(&e)?),
                    DivFile::Value(z) => DivEntry::Value(parse_q(&z)?),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let higher = f
            .higher
            .into_iter()
            .map(|h| {
                Ok(match h {
                    HighFile::Symbolic => HighEntry::Symbolic,
                    HighFile::Value(x) => HighEntry::Value(parse_q(&x)?),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DeformParam { divisor, higher })
    }

    pub fn to_json(&self) -> String {
        let f = DeformFile {
            divisor: self
                .divisor
                .iter()
                .map(|d| match d {
                    DivEntry::Symbolic => DivFile::Symbolic,
                    DivEntry::Exp(e) => DivFile::Exp(fmt_q(e)),
                    DivEntry::Value(z) => DivFile::Value(fmt_q(z)),
                })
                .collect(),
            higher: self
                .higher
                .iter()
                .map(|h| match h {
                    HighEntry::Symbolic => HighFile::Symbolic,
                    HighEntry::Value(x) => HighFile::Value(fmt_q(x)),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&f).expect("serializable")
    }

    pub fn describe(&self) -> String {
        let d: Vec<String> = self
            .divisor
            .iter()
            .map(|d| match d {
                DivEntry::Symbolic => "sym".into(),
                DivEntry::Exp(e) => format!("exp({})", fmt_q(e)),
                DivEntry::Value(z) => format!("z={}", fmt_q(z)),
            })
            .collect();
        let h: Vec<String> = self
            .higher
            .iter()
            .map(|h| match h {
                HighEntry::Symbolic => "sym".into(),
                HighEntry::Value(x) => fmt_q(x),
            })
            .collect();
        format!("({}; {})", d.join(", "), h.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeformFile {
    divisor: Vec<DivFile>,
    #[serde(default)]
    higher: Vec<HighFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum DivFile {
    Symbolic,
    Exp(String),
    Value(String),
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum HighFile {
    Symbolic,
    Value(String),
}

/// (e^{η₁},…,e^{η_s}, η_{s+1},…,η_N) with symbolic entries left symbolic.
pub fn eb_map(spec: &ManifoldSpec, deform: &DeformParam) -> Vec<EbValue> {
    let s = spec.s();
    let mut out: Vec<EbValue> = deform
        .divisor
        .iter()
        .enumerate()
        .map(|(i, d)| match d {
            DivEntry::Symbolic => EbValue::Symbol(format!("z{}", i + 1)),
            DivEntry::Exp(e) if e.is_zero() => EbValue::Rational(qi(1)),
            DivEntry::Exp(e) => EbValue::Unit(e.clone()),
            DivEntry::Value(z) => EbValue::Rational(z.clone()),
        })
        .collect();
    out.extend(deform.higher.iter().enumerate().map(|(k, h)| match h {
        HighEntry::Symbolic => EbValue::Symbol(format!("x{}", s + 1 + k)),
        HighEntry::Value(x) => EbValue::Rational(x.clone()),
    }));
    out
}

/// φ_η into the symbolic ring: q^β ↦ z^β, higher variables substituted where
/// the deformation fixes them. Divisor coordinates must stay symbolic.
pub fn phi_symbolic(r: &UniversalCoeff, deform: &DeformParam, omega: &Arc<Vec<Q>>) -> Result<SymCoeff> {
    if deform.divisor.iter().any(|d| *d != DivEntry::Symbolic) {
        return Err(Error::Regime(
            "the symbolic regime keeps divisor coordinates symbolic; use the novikov regime to evaluate them".into(),
        ));
    }
    let vars = &r.ctx.vars;
    let s = omega.len();
    let subst = deform.higher_values(s);
    let mut acc = MultiPoly::zero(vars);
    for (beta, f) in &r.terms {
        let z: Vec<(usize, i64)> = beta.coords.iter().enumerate().map(|(i, &c)| (i, c)).collect();
        let zb = MultiPoly::monomial(vars, z, qi(1))?;
        acc = acc.plus(&f.substitute(&subst)?.times(&zb));
    }
    Ok(SymCoeff {
        poly: acc,
        omega: omega.clone(),
        valid_to: r.valid_to.clone(),
    })
}

/// Value of z^m at the divisor entries: a rational factor and an exponent
/// of the formal unit e.
fn divisor_weight(deform: &DeformParam, exps: &[(usize, i64)]) -> Result<(Q, Q)> {
    let mut factor = qi(1);
    let mut unit = qi(0);
    for &(v, e) in exps {
        match &deform.divisor[v] {
            DivEntry::Symbolic => {
                return Err(Error::Regime(format!("z{} is symbolic; a full evaluation is required", v + 1)));
            }
            DivEntry::Exp(eta) => unit += eta * qi(e),
            DivEntry::Value(z) => {
                if z.is_zero() {
                    return Err(Error::ZeroUnit(v + 1));
                }
                factor *= pow_q(z, e);
            }
        }
    }
    Ok((factor, unit))
}

fn eval_higher(f: &MultiPoly, deform: &DeformParam, s: usize) -> Result<Q> {
    let subst = deform.higher_values(s);
    let g = f.substitute(&subst)?;
    if !g.is_constant() {
        return Err(Error::Regime("higher coordinates must be evaluated in the novikov regime".into()));
    }
    Ok(g.constant_term())
}

/// φ_η into truncated Novikov series, with e^{η} kept as formal units.
pub fn phi_novikov(r: &UniversalCoeff, deform: &DeformParam) -> Result<NovikovCoeff> {
    let s = r.ctx.omega.len();
    let mut out = NovikovCoeff::zero();
    for (beta, f) in &r.terms {
        let a = eval_higher(f, deform, s)?;
        let exps: Vec<(usize, i64)> = beta.coords.iter().enumerate().map(|(i, &c)| (i, c)).collect();
        let (factor, unit) = divisor_weight(deform, &exps)?;
        out.add_term(r.ctx.energy(beta), unit, a * factor);
    }
    out.valid_to = r.valid_to.clone();
    Ok(out)
}

/// Evaluates a symbolic coefficient at a fully specified η, recovering the
/// T-grading from the z-exponents.
pub fn sym_to_novikov(c: &SymCoeff, deform: &DeformParam) -> Result<NovikovCoeff> {
    let s = c.omega.len();
    let mut out = NovikovCoeff::zero();
    let vals = deform.higher_values(s);
    for (m, a) in c.poly.terms() {
        let (zpart, xpart): (Vec<_>, Vec<_>) = m.iter().partition(|(v, _)| *v < s);
        let (factor, unit) = divisor_weight(deform, &zpart)?;
        let mut coeff = a * factor;
        for (v, e) in xpart {
            match &vals[v] {
                Some(x) => coeff *= pow_q(x, e),
                None => return Err(Error::Regime(format!("x{} is symbolic", v + 1))),
            }
        }
        out.add_term(SymCoeff::grade_of(&c.omega, m), unit, coeff);
    }
    out.valid_to = c.valid_to.clone();
    Ok(out)
}

/// f(E_B(η)) for a polynomial in the symbolic variables.
pub fn eval_at_eb(f: &MultiPoly, s: usize, deform: &DeformParam) -> Result<ExpRational> {
    let vals = deform.higher_values(s);
    let mut out = ExpRational::default();
    for (m, a) in f.terms() {
        let (zpart, xpart): (Vec<_>, Vec<_>) = m.iter().partition(|(v, _)| *v < s);
        let (factor, unit) = divisor_weight(deform, &zpart)?;
        let mut coeff = a * factor;
        for (v, e) in xpart {
            match &vals[v] {
                Some(x) => coeff *= pow_q(x, e),
                None => return Err(Error::Regime(format!("x{} is symbolic", v + 1))),
            }
        }
        out.add_term(unit, coeff);
    }
    Ok(out)
}

/// Substitutes a rational point into a polynomial over the symbolic variables.
pub fn eval_at_point(f: &MultiPoly, point: &[Q]) -> Result<Q> {
    f.eval(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{BasisClass, CurveClass};
    use crate::polycore::Matrix;
    use crate::quantum::coeff::UniCtx;

    fn cp2() -> ManifoldSpec {
        ManifoldSpec {
            dim2n: 4,
            basis: vec![
                BasisClass { name: "M".into(), degree: 4 },
                BasisClass { name: "L".into(), degree: 2 },
                BasisClass { name: "pt".into(), degree: 0 },
            ],
            pairing: Matrix::from_fn(3, 3, |i, j| if i + j == 2 { qi(1) } else { qi(0) }),
            curve_basis: vec!["L".into()],
            c1: vec![3],
            omega: vec![qi(1)],
            cone_generators: vec![CurveClass::new(vec![1])],
            triple: None,
            blowup: None,
        }
    }

    fn ctx(spec: &ManifoldSpec) -> Arc<UniCtx> {
        Arc::new(UniCtx {
            vars: symbolic_vars(spec),
            omega: spec.omega.clone(),
        })
    }

    #[test]
    fn eb_examples() {
        let s = cp2();
        assert_eq!(
            eb_map(&s, &DeformParam::zero(&s)),
            vec![EbValue::Rational(qi(1)), EbValue::Rational(qi(0))]
        );
        assert_eq!(
            eb_map(&s, &DeformParam::symbolic(&s)),
            vec![EbValue::Symbol("z1".into()), EbValue::Symbol("x2".into())]
        );
        let d = DeformParam::from_eta(&s, &[qi(2)], &[qi(0)]);
        assert_eq!(eb_map(&s, &d)[0], EbValue::Unit(qi(2)));
    }

    #[test]
    fn phi_examples() {
        let s = cp2();
        let c = ctx(&s);
        let omega = Arc::new(s.omega.clone());
        let one = UniversalCoeff::term(&c, CurveClass::zero(1), MultiPoly::one(&c.vars));
        let n = phi_novikov(&one, &DeformParam::from_eta(&s, &[q(3, 2)], &[qi(5)])).unwrap();
        assert_eq!(n, NovikovCoeff::monomial(qi(0), qi(0), qi(1)));

        let ql = UniversalCoeff::term(&c, CurveClass::new(vec![1]), MultiPoly::one(&c.vars));
        let sym = phi_symbolic(&ql, &DeformParam::symbolic(&s), &omega).unwrap();
        assert_eq!(sym.poly, MultiPoly::var(&c.vars, 0));
        assert_eq!(SymCoeff::grade_of(&omega, &[(0, 1)]), qi(1));

        let xq = UniversalCoeff::term(&c, CurveClass::new(vec![1]), MultiPoly::var(&c.vars, 1));
        let n = phi_novikov(&xq, &DeformParam::from_eta(&s, &[qi(0)], &[qi(2)])).unwrap();
        assert_eq!(n, NovikovCoeff::monomial(qi(1), qi(0), qi(2)));
    }

    #[test]
    fn zero_z_rejected() {
        let s = cp2();
        let d = DeformParam::at_point(&[qi(0)], &[qi(1)]);
        assert!(matches!(d.validate(&s), Err(Error::ZeroUnit(1))));
    }

    #[test]
    fn deform_json_round_trip() {
        let d = DeformParam {
            divisor: vec![DivEntry::Exp(q(1, 2))],
            higher: vec![HighEntry::Symbolic],
        };
        assert_eq!(DeformParam::from_json(&d.to_json()).unwrap(), d);
        let v = DeformParam::from_json(r#"{"divisor":[{"value":"3"}],"higher":[{"value":"-1/2"}]}"#).unwrap();
        assert_eq!(v.rational_point(), Some(vec![qi(3), q(-1, 2)]));
    }

    #[test]
    fn eval_with_units() {
        let s = cp2();
        let vars = symbolic_vars(&s);
        let z = MultiPoly::var(&vars, 0);
        let f = z.minus(&MultiPoly::one(&vars));
        assert!(eval_at_eb(&f, 1, &DeformParam::zero(&s)).unwrap().is_zero());
        let v = eval_at_eb(&f, 1, &DeformParam::from_eta(&s, &[qi(1)], &[qi(0)])).unwrap();
        assert_eq!(v.terms.len(), 2);
    }

    use crate::polycore::q;
}
