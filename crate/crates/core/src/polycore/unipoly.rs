//! Dense univariate polynomials over Q, lowest degree first.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{fmt_q, qi, small_divisors, Q};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Q>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| qi(x)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(qi(1))
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// `t - r`
    pub fn linear_root(r: &Q) -> Self {
        Self::new(vec![-r.clone(), qi(1)])
    }

    pub fn t() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(|| qi(0))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Q> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(l) => {
                let l = l.clone();
                Self::new(self.coeffs.iter().map(|c| c / &l).collect())
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![qi(0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::ZeroPolynomial)?;
        let lead = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quo = vec![qi(0); r.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    r[k + i] -= &c * dc;
                }
            }
            quo[k] = c;
        }
        r.truncate(dd);
        Ok((Self::new(quo), Self::new(r)))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * qi(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = qi(0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Monic gcd; `gcd(0, 0)` is an error.
    pub fn gcd(a: &Self, b: &Self) -> Result<Self> {
        Ok(Self::extgcd(a, b)?.0)
    }

    /// `(g, u, v)` with `u*a + v*b = g` and `g` monic.
    pub fn extgcd(a: &Self, b: &Self) -> Result<(Self, Self, Self)> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut u0, mut u1) = (Self::one(), Self::zero());
        let (mut v0, mut v1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (qt, r2) = r0.divrem(&r1)?;
            let u2 = u0.sub(&qt.mul(&u1));
            let v2 = v0.sub(&qt.mul(&v1));
            r0 = std::mem::replace(&mut r1, r2);
            u0 = std::mem::replace(&mut u1, u2);
            v0 = std::mem::replace(&mut v1, v2);
        }
        let inv = r0.lead().expect("nonzero remainder").recip();
        let (g, u, v) = (r0.scale(&inv), u0.scale(&inv), v0.scale(&inv));
        debug_assert_eq!(u.mul(a).add(&v.mul(b)), g, "Bezout identity");
        Ok((g, u, v))
    }

    /// `(gcd(p, p'), p / gcd(p, p'))`, both monic.
    pub fn gcd_sqfree(&self) -> Result<(Self, Self)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = Self::gcd(self, &self.derivative())?;
        let (sq, rem) = self.divrem(&g)?;
        debug_assert!(rem.is_zero());
        Ok((g, sq.monic()))
    }

    /// True iff the polynomial has a root of multiplicity one over the
    /// algebraic closure.
    pub fn has_simple_root(&self) -> Result<bool> {
        let (m, p) = self.gcd_sqfree()?;
        let common = Self::gcd(&p, &m)?;
        Ok(common.degree() < p.degree())
    }

    /// Multiplicity of `r` as a root.
    pub fn root_multiplicity(&self, r: &Q) -> usize {
        let lin = Self::linear_root(r);
        let mut p = self.clone();
        let mut k = 0;
        while !p.is_zero() {
            let (qt, rem) = p.divrem(&lin).expect("nonzero divisor");
            if !rem.is_zero() {
                break;
            }
            p = qt;
            k += 1;
        }
        k
    }

    /// All distinct rational roots, ascending. `None` when the integer
    /// coefficients are too large to trial-divide.
    pub fn rational_roots(&self) -> Option<Vec<Q>> {
        if self.is_zero() {
            return None;
        }
        let mut out = Vec::new();
        let shift = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if shift > 0 {
            out.push(qi(0));
        }
        let rest = Self::new(self.coeffs[shift..].to_vec());
        if rest.degree().unwrap_or(0) > 0 {
            let den = rest
                .coeffs
                .iter()
                .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let ints: Vec<BigInt> = rest
                .coeffs
                .iter()
                .map(|c| (c * Q::from_integer(den.clone())).to_integer())
                .collect();
            let ps = small_divisors(&ints[0])?;
            let qs = small_divisors(ints.last().unwrap())?;
            for p in &ps {
                for q in &qs {
                    for sign in [1, -1] {
                        let cand = Q::new(p * sign, q.clone());
                        if !out.contains(&cand) && rest.eval(&cand).is_zero() {
                            out.push(cand);
                        }
                    }
                }
            }
        }
        out.sort();
        Some(out)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            if mono.is_empty() {
                write!(f, "{}", fmt_q(&a))?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{}", fmt_q(&a), mono)?;
            }
        }
        Ok(())
    }
}
