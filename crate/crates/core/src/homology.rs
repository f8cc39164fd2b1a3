//! Manifold data: graded even homology basis, intersection pairing, dual
//! basis, curve classes and effective-cone enumeration.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polycore::rational::fmt_q;
use crate::polycore::{parse_q, qi, Matrix, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisClass {
    pub name: String,
    pub degree: u32,
}

/// A class in H_2, recorded by its intersection numbers with the divisor
/// classes Δ₁…Δ_s.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CurveClass {
    pub coords: Vec<i64>,
}

impl CurveClass {
    pub fn new(coords: Vec<i64>) -> Self {
        CurveClass { coords }
    }

    pub fn zero(s: usize) -> Self {
        CurveClass { coords: vec![0; s] }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        CurveClass::new(self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        CurveClass::new(self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect())
    }

    pub fn scaled(&self, k: i64) -> Self {
        CurveClass::new(self.coords.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Extra data carried by a spec produced by the blowup construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupMeta {
    pub epsilon: Q,
    /// Basis indices of E₁…E_{n−1}.
    pub exceptional: Vec<usize>,
    /// Curve coordinate recording E∩β.
    pub e_coord: usize,
    /// Number of basis classes coming from the base manifold.
    pub base_len: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldSpec {
    pub dim2n: u32,
    pub basis: Vec<BasisClass>,
    pub pairing: Matrix<Q>,
    pub curve_basis: Vec<String>,
    pub c1: Vec<i64>,
    pub omega: Vec<Q>,
    pub cone_generators: Vec<CurveClass>,
    pub triple: Option<Vec<Vec<Vec<Q>>>>,
    pub blowup: Option<BlowupMeta>,
}

impl ManifoldSpec {
    pub fn n(&self) -> u32 {
        self.dim2n / 2
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Number of divisor classes s.
    pub fn s(&self) -> usize {
        self.curve_basis.len()
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.basis[i].degree
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.basis
            .iter()
            .position(|b| b.name == name)
            .ok_or_else(|| Error::UnknownClass(name.to_string()))
    }

    pub fn omega_of(&self, beta: &CurveClass) -> Q {
        self.omega
            .iter()
            .zip(&beta.coords)
            .map(|(w, &c)| w * qi(c))
            .fold(qi(0), |a, b| a + b)
    }

    pub fn c1_of(&self, beta: &CurveClass) -> i64 {
        self.c1.iter().zip(&beta.coords).map(|(a, b)| a * b).sum()
    }

    pub fn pair(&self, i: usize, j: usize) -> &Q {
        self.pairing.get(i, j)
    }

    /// Index of the unique degree-0 class, if any.
    pub fn point_class(&self) -> Option<usize> {
        let pts: Vec<usize> = (0..self.len()).filter(|&i| self.degree(i) == 0).collect();
        (pts.len() == 1).then(|| pts[0])
    }

    /// Checks every structural invariant of a spec.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if self.dim2n == 0 || !self.dim2n.is_multiple_of(2) {
            return bad(format!("dim2n = {} is not a positive even integer", self.dim2n));
        }
        let top = self.dim2n;
        if self.basis.is_empty() || self.basis[0].degree != top {
            return bad("basis[0] must be the fundamental class".into());
        }
        let mut names = BTreeSet::new();
        for b in &self.basis {
            if b.degree % 2 != 0 || b.degree > top {
                return bad(format!("class `{}` has invalid degree {}", b.name, b.degree));
            }
            if !names.insert(b.name.as_str()) {
                return bad(format!("duplicate class name `{}`", b.name));
            }
        }
        let s = self.s();
        let divisor_deg = top - 2;
        for (i, b) in self.basis.iter().enumerate().skip(1) {
            let is_div = b.degree == divisor_deg;
            if is_div != (i <= s) {
                return bad(format!(
                    "classes 1..{s} must be exactly those of degree {divisor_deg}; `{}` breaks this",
                    b.name
                ));
            }
        }
        if self.len() <= s {
            return bad("fewer basis classes than curve coordinates".into());
        }
        if self.c1.len() != s || self.omega.len() != s {
            return bad("c1 and omega must have one entry per curve coordinate".into());
        }
        let n = self.len();
        if self.pairing.rows() != n || self.pairing.cols() != n {
            return bad(format!("pairing must be {n}x{n}"));
        }
        if !self.pairing.is_symmetric() {
            return bad("pairing is not symmetric".into());
        }
        for i in 0..n {
            for j in 0..n {
                if !self.pair(i, j).is_zero() && self.degree(i) + self.degree(j) != top {
                    return bad(format!(
                        "pairing({}, {}) is nonzero but degrees do not sum to {top}",
                        self.basis[i].name, self.basis[j].name
                    ));
                }
            }
        }
        if self.pairing.det()?.is_zero() {
            return Err(Error::Singular);
        }
        for (k, g) in self.cone_generators.iter().enumerate() {
            if g.coords.len() != s {
                return bad(format!("cone generator {k} has wrong length"));
            }
            if !self.omega_of(g).is_positive() {
                return Err(Error::NonpositiveGenerator(k));
            }
        }
        if let Some(t) = &self.triple {
            self.validate_triple(t)?;
        }
        if let Some(b) = &self.blowup {
            if b.e_coord >= s || b.exceptional.iter().any(|&i| i >= n) || b.base_len > n {
                return bad("blowup metadata out of range".into());
            }
            if !b.epsilon.is_positive() {
                return bad("blowup epsilon must be positive".into());
            }
        }
        Ok(())
    }

    fn validate_triple(&self, t: &[Vec<Vec<Q>>]) -> Result<()> {
        let n = self.len();
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if t.len() != n || t.iter().any(|r| r.len() != n || r.iter().any(|c| c.len() != n)) {
            return bad(format!("triple tensor must be {n}x{n}x{n}"));
        }
        let top = self.dim2n;
        for i in 0..n {
            for j in 0..n {
                if t[i][j][0] != *self.pair(i, j) {
                    return bad("triple(i, j, [M]) must equal the pairing".into());
                }
                for k in 0..n {
                    let v = &t[i][j][k];
                    if *v != t[j][i][k] || *v != t[i][k][j] {
                        return bad("triple tensor is not symmetric".into());
                    }
                    let codeg = 3 * top - self.degree(i) - self.degree(j) - self.degree(k);
                    if !v.is_zero() && codeg != top {
                        return bad("triple tensor violates degree count".into());
                    }
                }
            }
        }
        Ok(())
    }

    /// Rows are the dual classes Δ^k in the Δ-basis: Δ_j ∩ Δ^k = δ_jk.
    pub fn dual_basis(&self) -> Result<Matrix<Q>> {
        let inv = self.pairing.inverse()?;
        let check = self.pairing.mul(&inv.transpose())?;
        if check != Matrix::eye(self.len()) {
            return Err(Error::Singular);
        }
        Ok(inv)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: SpecFile = serde_json::from_str(text)?;
        f.into_spec()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&SpecFile::from_spec(self)).expect("serializable");
        s.push('\n');
        s
    }

    /// Parses `"2L"`, `"A+B"`, `"L-E"` over curve basis names, or `"[1,0]"`.
    pub fn parse_curve(&self, text: &str) -> Result<CurveClass> {
        let t = text.trim();
        let s = self.s();
        if let Some(inner) = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
            let coords: std::result::Result<Vec<i64>, _> = inner
                .split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| x.trim().parse::<i64>())
                .collect();
            let coords = coords.map_err(|_| Error::Parse(format!("bad curve class `{text}`")))?;
            if coords.len() != s {
                return Err(Error::Parse(format!("curve class `{text}` needs {s} coordinates")));
            }
            return Ok(CurveClass::new(coords));
        }
        let mut beta = CurveClass::zero(s);
        if t == "0" {
            return Ok(beta);
        }
        let normalized = t.replace('-', "+-");
        for part in normalized.split('+').map(str::trim).filter(|p| !p.is_empty()) {
            let (sign, body) = match part.strip_prefix('-') {
                Some(rest) => (-1, rest.trim()),
                None => (1, part),
            };
            let split = body.find(|c: char| !c.is_ascii_digit()).unwrap_or(body.len());
            let (num, name) = body.split_at(split);
            let k: i64 = if num.is_empty() {
                1
            } else {
                num.parse().map_err(|_| Error::Parse(format!("bad multiplier in `{text}`")))?
            };
            let name = name.trim().trim_start_matches('*');
            let idx = self
                .curve_basis
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| Error::UnknownClass(name.to_string()))?;
            beta.coords[idx] += sign * k;
        }
        Ok(beta)
    }

    /// Human-readable form of a curve class over the curve basis names.
    pub fn curve_name(&self, beta: &CurveClass) -> String {
        if beta.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (c, name) in beta.coords.iter().zip(&self.curve_basis) {
            if *c == 0 {
                continue;
            }
            if *c < 0 {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            if c.abs() != 1 {
                out.push_str(&c.abs().to_string());
            }
            out.push_str(name);
        }
        out
    }
}

/// All ℕ-combinations of the cone generators with energy at most `cap`,
/// sorted by energy then coordinates.
pub fn enumerate_cone(spec: &ManifoldSpec, cap: &Q) -> Result<Vec<CurveClass>> {
    let s = spec.s();
    let gens = &spec.cone_generators;
    let energies: Vec<Q> = gens.iter().map(|g| spec.omega_of(g)).collect();
    if let Some(k) = energies.iter().position(|e| !e.is_positive()) {
        return Err(Error::NonpositiveGenerator(k));
    }
    let mut found = BTreeSet::new();
    let zero = CurveClass::zero(s);
    if !cap.is_negative() {
        let mut stack = vec![(0usize, zero, qi(0))];
        while let Some((start, beta, e)) = stack.pop() {
            for k in start..gens.len() {
                let ne = &e + &energies[k];
                if ne <= *cap {
                    stack.push((k, beta.add(&gens[k]), ne));
                }
            }
            found.insert(beta);
        }
    }
    let mut out: Vec<(Q, CurveClass)> = found.into_iter().map(|b| (spec.omega_of(&b), b)).collect();
    out.sort();
    Ok(out.into_iter().map(|(_, b)| b).collect())
}

/// Ordered pairs from `cone` summing to `beta`.
pub fn decompositions(beta: &CurveClass, cone: &[CurveClass]) -> Result<Vec<(CurveClass, CurveClass)>> {
    if !cone.contains(beta) {
        return Err(Error::NotInCone(beta.to_string()));
    }
    let set: BTreeSet<&CurveClass> = cone.iter().collect();
    Ok(cone
        .iter()
        .filter_map(|b1| {
            let b2 = beta.sub(b1);
            set.contains(&b2).then(|| (b1.clone(), b2))
        })
        .collect())
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct SpecFile {
    dim2n: u32,
    basis: Vec<BasisFile>,
    pairing: Vec<Vec<String>>,
    curve_basis: Vec<String>,
    c1: Vec<i64>,
    omega: Vec<String>,
    cone_generators: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    triple: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    blowup: Option<BlowupFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BasisFile {
    name: String,
    degree: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct BlowupFile {
    epsilon: String,
    exceptional: Vec<String>,
    e_coord: usize,
    base_len: usize,
}

fn strings(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

fn parse_all(v: &[String]) -> Result<Vec<Q>> {
    v.iter().map(|x| parse_q(x)).collect()
}

impl SpecFile {
    fn from_spec(s: &ManifoldSpec) -> Self {
        let n = s.len();
        SpecFile {
            dim2n: s.dim2n,
            basis: s
                .basis
                .iter()
                .map(|b| BasisFile {
                    name: b.name.clone(),
                    degree: b.degree,
                })
                .collect(),
            pairing: (0..n).map(|i| strings(s.pairing.row(i))).collect(),
            curve_basis: s.curve_basis.clone(),
            c1: s.c1.clone(),
            omega: strings(&s.omega),
            cone_generators: s.cone_generators.iter().map(|g| g.coords.clone()).collect(),
            triple: s
                .triple
                .as_ref()
                .map(|t| t.iter().map(|m| m.iter().map(|r| strings(r)).collect()).collect()),
            blowup: s.blowup.as_ref().map(|b| BlowupFile {
                epsilon: fmt_q(&b.epsilon),
                exceptional: b.exceptional.iter().map(|&i| s.basis[i].name.clone()).collect(),
                e_coord: b.e_coord,
                base_len: b.base_len,
            }),
        }
    }

    fn into_spec(self) -> Result<ManifoldSpec> {
        let rows: Vec<Vec<Q>> = self.pairing.iter().map(|r| parse_all(r)).collect::<Result<_>>()?;
        let pairing = Matrix::from_rows(rows).map_err(|_| Error::InvalidSpec("ragged pairing".into()))?;
        let triple = match &self.triple {
            None => None,
            Some(t) => Some(
                t.iter()
                    .map(|m| m.iter().map(|r| parse_all(r)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let basis: Vec<BasisClass> = self
            .basis
            .into_iter()
            .map(|b| BasisClass {
                name: b.name,
                degree: b.degree,
            })
            .collect();
        let blowup = match self.blowup {
            None => None,
            Some(b) => {
                let exceptional = b
                    .exceptional
                    .iter()
                    .map(|name| {
                        basis
                            .iter()
                            .position(|c| &c.name == name)
                            .ok_or_else(|| Error::UnknownClass(name.clone()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(BlowupMeta {
                    epsilon: parse_q(&b.epsilon)?,
                    exceptional,
                    e_coord: b.e_coord,
                    base_len: b.base_len,
                })
            }
        };
        let spec = ManifoldSpec {
            dim2n: self.dim2n,
            basis,
            pairing,
            curve_basis: self.curve_basis,
            c1: self.c1,
            omega: parse_all(&self.omega)?,
            cone_generators: self.cone_generators.into_iter().map(CurveClass::new).collect(),
            triple,
            blowup,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::q;

    fn antidiag(n: usize) -> Matrix<Q> {
        Matrix::from_fn(n, n, |i, j| if i + j == n - 1 { qi(1) } else { qi(0) })
    }

    fn cp2() -> ManifoldSpec {
        ManifoldSpec {
            dim2n: 4,
            basis: vec![
                BasisClass { name: "M".into(), degree: 4 },
                BasisClass { name: "L".into(), degree: 2 },
                BasisClass { name: "pt".into(), degree: 0 },
            ],
            pairing: antidiag(3),
            curve_basis: vec!["L".into()],
            c1: vec![3],
            omega: vec![qi(1)],
            cone_generators: vec![CurveClass::new(vec![1])],
            triple: None,
            blowup: None,
        }
    }

    fn s2xs2() -> ManifoldSpec {
        let p = |i: usize, j: usize| -> Q {
            match (i, j) {
                (0, 3) | (3, 0) | (1, 2) | (2, 1) => qi(1),
                _ => qi(0),
            }
        };
        ManifoldSpec {
            dim2n: 4,
            basis: vec![
                BasisClass { name: "M".into(), degree: 4 },
                BasisClass { name: "A".into(), degree: 2 },
                BasisClass { name: "B".into(), degree: 2 },
                BasisClass { name: "pt".into(), degree: 0 },
            ],
            pairing: Matrix::from_fn(4, 4, p),
            curve_basis: vec!["B".into(), "A".into()],
            c1: vec![2, 2],
            omega: vec![qi(1), qi(1)],
            cone_generators: vec![CurveClass::new(vec![1, 0]), CurveClass::new(vec![0, 1])],
            triple: None,
            blowup: None,
        }
    }

    #[test]
    fn dual_basis_examples() {
        let d = cp2().dual_basis().unwrap();
        assert_eq!(d, antidiag(3));
        let d = s2xs2().dual_basis().unwrap();
        // Δ^A = B and Δ^B = A.
        assert_eq!(d.row(1), &[qi(0), qi(0), qi(1), qi(0)]);
        assert_eq!(d.row(2), &[qi(0), qi(1), qi(0), qi(0)]);
    }

    #[test]
    fn cone_enumeration() {
        let c = enumerate_cone(&cp2(), &q(5, 2)).unwrap();
        let v: Vec<Vec<i64>> = c.iter().map(|b| b.coords.clone()).collect();
        assert_eq!(v, vec![vec![0], vec![1], vec![2]]);

        let c = enumerate_cone(&s2xs2(), &qi(2)).unwrap();
        let v: Vec<Vec<i64>> = c.iter().map(|b| b.coords.clone()).collect();
        assert_eq!(
            v,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![2, 0]]
        );

        let mut empty = cp2();
        empty.cone_generators.clear();
        assert_eq!(enumerate_cone(&empty, &qi(100)).unwrap(), vec![CurveClass::zero(1)]);

        let mut bad = cp2();
        bad.cone_generators = vec![CurveClass::new(vec![-1])];
        assert!(matches!(enumerate_cone(&bad, &qi(1)), Err(Error::NonpositiveGenerator(0))));
    }

    #[test]
    fn decomposition_examples() {
        let cone = enumerate_cone(&cp2(), &qi(2)).unwrap();
        let d = decompositions(&CurveClass::new(vec![2]), &cone).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d[1], (CurveClass::new(vec![1]), CurveClass::new(vec![1])));
        assert_eq!(decompositions(&CurveClass::zero(1), &cone).unwrap().len(), 1);
        assert!(decompositions(&CurveClass::new(vec![3]), &cone).is_err());

        let cone = enumerate_cone(&s2xs2(), &qi(2)).unwrap();
        let d = decompositions(&CurveClass::new(vec![1, 1]), &cone).unwrap();
        assert_eq!(d.len(), 4);
    }

    #[test]
    fn validation_rejects_bad_specs() {
        assert!(cp2().validate().is_ok());
        let mut s = cp2();
        s.pairing.set(0, 1, qi(1));
        assert!(s.validate().is_err());
        let mut s = cp2();
        s.basis[1].degree = 0;
        assert!(s.validate().is_err());
        let mut s = cp2();
        s.pairing = Matrix::zeros(3, 3);
        assert!(matches!(s.validate(), Err(Error::Singular)));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let mut s = s2xs2();
        s.omega = vec![q(1, 3), q(5, 2)];
        let text = s.to_json();
        let back = ManifoldSpec::from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn json_errors_carry_position() {
        match ManifoldSpec::from_json("{\n  \"dim2n\": }") {
            Err(Error::Json { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn curve_parsing() {
        let s = s2xs2();
        assert_eq!(s.parse_curve("A+2B").unwrap().coords, vec![2, 1]);
        assert_eq!(s.parse_curve("[1,1]").unwrap().coords, vec![1, 1]);
        assert_eq!(s.parse_curve("B-A").unwrap().coords, vec![1, -1]);
        assert_eq!(s.curve_name(&CurveClass::new(vec![2, -1])), "2B-A");
        assert!(s.parse_curve("C").is_err());
    }
}
