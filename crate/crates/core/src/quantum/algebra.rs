//! The quantum algebra: a free module on the homology basis with the
//! multiplication table Δ_i ∗ Δ_j = Σ_k c_ijk Δ^k.

use std::sync::Arc;

use super::coeff::{Coeff, NovikovCoeff, SymCoeff, UniversalCoeff};
use super::deform::{phi_novikov, phi_symbolic, DeformParam};
use super::structure::{Mode, StructureConstants};
use crate::error::{Error, Result};
use crate::gwdata::{GwKey, GwTable};
use crate::polycore::{Matrix, Q};

/// An element in coordinates over the Δ-basis.
pub type QClass<C> = Vec<C>;

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumAlgebra<C> {
    pub names: Vec<String>,
    /// `table[i][j][l]` is the Δ_l-coordinate of Δ_i ∗ Δ_j.
    pub table: Vec<Vec<Vec<C>>>,
    pub unknown: Vec<GwKey>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Regime {
    Universal,
    Symbolic,
    Novikov,
}

impl std::str::FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "universal" => Ok(Regime::Universal),
            "symbolic" => Ok(Regime::Symbolic),
            "novikov" => Ok(Regime::Novikov),
            other => Err(Error::Parse(format!("unknown regime `{other}`"))),
        }
    }
}

impl<C: Coeff> QuantumAlgebra<C> {
    pub fn new(names: Vec<String>, table: Vec<Vec<Vec<C>>>) -> Result<Self> {
        let n = names.len();
        if n == 0 || table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return Err(Error::Dimension(format!("multiplication table must be {n}x{n}x{n}")));
        }
        Ok(QuantumAlgebra {
            names,
            table,
            unknown: Vec::new(),
        })
    }

    /// Specializes universal structure constants through `f` and contracts
    /// with the dual basis.
    pub fn from_constants(sc: &StructureConstants, f: impl Fn(&UniversalCoeff) -> Result<C>) -> Result<Self> {
        let spec = &sc.spec;
        let dual = spec.dual_basis()?;
        let n = spec.len();
        let mut table = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let cs: Vec<C> = (0..n).map(|k| f(sc.get(i, j, k))).collect::<Result<_>>()?;
                let zero = cs[0].zero_like();
                let coords: Vec<C> = (0..n)
                    .map(|l| {
                        (0..n).fold(zero.clone(), |acc, k| {
                            let g = dual.get(k, l);
                            if num_traits::Zero::is_zero(g) {
                                acc
                            } else {
                                acc.plus(&cs[k].scale(g))
                            }
                        })
                    })
                    .collect();
                row.push(coords);
            }
            table.push(row);
        }
        Ok(QuantumAlgebra {
            names: spec.basis.iter().map(|b| b.name.clone()).collect(),
            table,
            unknown: sc.unknown.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn zero_coeff(&self) -> C {
        self.table[0][0][0].zero_like()
    }

    pub fn one_coeff(&self) -> C {
        self.table[0][0][0].one_like()
    }

    pub fn zero(&self) -> QClass<C> {
        vec![self.zero_coeff(); self.dim()]
    }

    pub fn basis(&self, i: usize) -> QClass<C> {
        let mut v = self.zero();
        v[i] = self.one_coeff();
        v
    }

    /// Element with rational coordinates.
    pub fn from_rational(&self, coords: &[Q]) -> QClass<C> {
        let one = self.one_coeff();
        coords.iter().map(|c| one.scale(c)).collect()
    }

    pub fn add(&self, a: &[C], b: &[C]) -> QClass<C> {
        a.iter().zip(b).map(|(x, y)| x.plus(y)).collect()
    }

    pub fn sub(&self, a: &[C], b: &[C]) -> QClass<C> {
        a.iter().zip(b).map(|(x, y)| x.minus(y)).collect()
    }

    pub fn product(&self, a: &[C], b: &[C]) -> QClass<C> {
        let n = self.dim();
        let mut out = self.zero();
        for i in 0..n {
            if a[i].vanishes() && a[i].valid_to().is_none() {
                continue;
            }
            for j in 0..n {
                if b[j].vanishes() && b[j].valid_to().is_none() {
                    continue;
                }
                let w = a[i].times(&b[j]);
                for l in 0..n {
                    out[l] = out[l].plus(&w.times(&self.table[i][j][l]));
                }
            }
        }
        out
    }

    pub fn power(&self, a: &[C], k: u32) -> QClass<C> {
        let mut acc = self.basis(0);
        for _ in 0..k {
            acc = self.product(&acc, a);
        }
        acc
    }

    /// Matrix of left multiplication by `a`; column j holds a ∗ Δ_j.
    pub fn mult_matrix(&self, a: &[C]) -> Matrix<C> {
        let n = self.dim();
        let cols: Vec<QClass<C>> = (0..n).map(|j| self.product(a, &self.basis(j))).collect();
        Matrix::from_fn(n, n, |l, j| cols[j][l].clone())
    }

    /// Smallest truncation order among the table entries.
    pub fn valid_to(&self) -> Option<Q> {
        self.table
            .iter()
            .flatten()
            .flatten()
            .filter_map(|c| c.valid_to().cloned())
            .min()
    }

    pub fn is_exact(&self) -> bool {
        self.valid_to().is_none()
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> Result<D>) -> Result<QuantumAlgebra<D>> {
        let table = self
            .table
            .iter()
            .map(|r| r.iter().map(|v| v.iter().map(&f).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(QuantumAlgebra {
            names: self.names.clone(),
            table,
            unknown: self.unknown.clone(),
        })
    }

    pub fn describe(&self, a: &[C]) -> String {
        let parts: Vec<String> = a
            .iter()
            .zip(&self.names)
            .filter(|(c, _)| !c.vanishes() || c.valid_to().is_some())
            .map(|(c, n)| format!("({c})*{n}"))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

pub fn universal_algebra(sc: &StructureConstants) -> Result<QuantumAlgebra<UniversalCoeff>> {
    QuantumAlgebra::from_constants(sc, |c| Ok(c.clone()))
}

pub fn symbolic_algebra(sc: &StructureConstants, deform: &DeformParam) -> Result<QuantumAlgebra<SymCoeff>> {
    deform.validate(&sc.spec)?;
    let omega = Arc::new(sc.spec.omega.clone());
    QuantumAlgebra::from_constants(sc, |c| phi_symbolic(c, deform, &omega))
}

pub fn novikov_algebra(sc: &StructureConstants, deform: &DeformParam) -> Result<QuantumAlgebra<NovikovCoeff>> {
    deform.validate(&sc.spec)?;
    QuantumAlgebra::from_constants(sc, |c| phi_novikov(c, deform))
}

/// The algebra over Q obtained by substituting a rational point (z, x) into
/// an exact symbolic algebra.
pub fn point_algebra(sym: &QuantumAlgebra<SymCoeff>, point: &[Q]) -> Result<QuantumAlgebra<Q>> {
    if !sym.is_exact() {
        return Err(Error::Precondition("pointwise evaluation needs exact structure constants".into()));
    }
    sym.map(|c| c.poly.eval(point))
}

/// Algebra in any regime, as built by the command line.
#[derive(Clone, Debug)]
pub enum AnyAlgebra {
    Universal(QuantumAlgebra<UniversalCoeff>),
    Symbolic(QuantumAlgebra<SymCoeff>),
    Novikov(QuantumAlgebra<NovikovCoeff>),
}

impl AnyAlgebra {
    pub fn build(table: &GwTable, mode: Mode, regime: Regime, deform: &DeformParam, cap: &Q) -> Result<Self> {
        let sc = StructureConstants::compute(table, mode, cap)?;
        Ok(match regime {
            Regime::Universal => AnyAlgebra::Universal(universal_algebra(&sc)?),
            Regime::Symbolic => AnyAlgebra::Symbolic(symbolic_algebra(&sc, deform)?),
            Regime::Novikov => AnyAlgebra::Novikov(novikov_algebra(&sc, deform)?),
        })
    }

    /// Product of two basis classes, rendered coordinate by coordinate.
    pub fn basis_product(&self, i: usize, j: usize) -> (Vec<String>, Option<Q>) {
        fn go<C: Coeff>(a: &QuantumAlgebra<C>, i: usize, j: usize) -> (Vec<String>, Option<Q>) {
            let p = a.product(&a.basis(i), &a.basis(j));
            let v = p.iter().filter_map(|c| c.valid_to().cloned()).min();
            (p.iter().map(|c| c.to_string()).collect(), v)
        }
        match self {
            AnyAlgebra::Universal(a) => go(a, i, j),
            AnyAlgebra::Symbolic(a) => go(a, i, j),
            AnyAlgebra::Novikov(a) => go(a, i, j),
        }
    }

    pub fn unknown(&self) -> &[GwKey] {
        match self {
            AnyAlgebra::Universal(a) => &a.unknown,
            AnyAlgebra::Symbolic(a) => &a.unknown,
            AnyAlgebra::Novikov(a) => &a.unknown,
        }
    }
}


#[cfg(test)]
mod fixture_tests {
    use super::*;
    use crate::fixtures::fixture;
    use crate::polycore::{qi, MultiPoly, Scalar};

    fn sym(name: &str, mode: Mode, cap: i64) -> QuantumAlgebra<SymCoeff> {
        let f = fixture(name).unwrap();
        let sc = StructureConstants::compute(&f.table, mode, &qi(cap)).unwrap();
        symbolic_algebra(&sc, &DeformParam::symbolic(&f.spec)).unwrap()
    }

    fn agree<C: Coeff>(a: &[C], b: &[C]) -> bool {
        a.iter().zip(b).all(|(x, y)| x.minus(y).vanishes())
    }

    #[test]
    fn cp2_small_products() {
        let a = sym("cp2", Mode::Small, 4);
        assert!(a.is_exact());
        let z1 = MultiPoly::var(a.table[0][0][0].poly.vars(), 0);
        let pp = a.product(&a.basis(2), &a.basis(2));
        assert_eq!(pp[1].poly, z1);
        assert!(pp[0].vanishes() && pp[2].vanishes());
        let ll = a.product(&a.basis(1), &a.basis(1));
        assert_eq!(ll, a.basis(2));
        let lp = a.product(&a.basis(1), &a.basis(2));
        assert_eq!(lp[0].poly, z1);
    }

    #[test]
    fn cp1_square_of_point() {
        let a = sym("cp1", Mode::Big, 3);
        assert!(a.is_exact());
        let pp = a.product(&a.basis(1), &a.basis(1));
        assert_eq!(pp[0].poly, MultiPoly::var(pp[0].poly.vars(), 0));
    }

    #[test]
    fn unit_and_associativity_on_fixtures() {
        for (name, mode) in [
            ("cp2", Mode::Big),
            ("cp3", Mode::Small),
            ("cp3", Mode::Big),
            ("s2xs2", Mode::Big),
            ("bigsymp", Mode::Small),
        ] {
            let a = sym(name, mode, 4);
            let n = a.dim();
            for i in 0..n {
                assert!(agree(&a.product(&a.basis(0), &a.basis(i)), &a.basis(i)), "{name} unit {i}");
                for j in 0..n {
                    let ij = a.product(&a.basis(i), &a.basis(j));
                    assert!(agree(&ij, &a.product(&a.basis(j), &a.basis(i))), "{name} comm {i} {j}");
                    for k in 0..n {
                        let l = a.product(&ij, &a.basis(k));
                        let r = a.product(&a.basis(i), &a.product(&a.basis(j), &a.basis(k)));
                        assert!(agree(&l, &r), "{name} {mode:?} assoc {i} {j} {k}");
                    }
                }
            }
        }
    }

    #[test]
    fn nilpotent_point_squares_to_zero() {
        let a = sym("nilpotent", Mode::Big, 3);
        let pp = a.product(&a.basis(1), &a.basis(1));
        assert!(pp.iter().all(|c| c.vanishes()));
        assert!(a.is_exact());
    }
}
