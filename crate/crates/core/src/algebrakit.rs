//! Semisimplicity and field-splitness of the quantum algebra: trace-form
//! discriminants, simple-root tests on sampled elements and idempotents.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gwdata::{GwKey, GwTable};
use crate::polycore::rational::fmt_q;
use crate::polycore::{qi, Matrix, MultiPoly, UniPoly, VarSet, Q};
use crate::quantum::{
    certified_nonzero, certified_zero, eval_at_eb, novikov_algebra, point_algebra, symbolic_algebra, Coeff,
    DeformParam, Mode, QClass, QuantumAlgebra, StructureConstants, SymCoeff,
};

/// tr(L_{Δ_l}) for every basis class.
pub fn trace_vector<C: Coeff>(alg: &QuantumAlgebra<C>) -> Vec<C> {
    let n = alg.dim();
    (0..n)
        .map(|l| {
            (0..n).fold(alg.zero_coeff(), |acc, j| acc.plus(&alg.table[l][j][j]))
        })
        .collect()
}

/// G_ij = tr(L_{Δ_i ∗ Δ_j}).
pub fn trace_gram<C: Coeff>(alg: &QuantumAlgebra<C>) -> Matrix<C> {
    let n = alg.dim();
    let t = trace_vector(alg);
    Matrix::from_fn(n, n, |i, j| {
        (0..n).fold(alg.zero_coeff(), |acc, l| acc.plus(&alg.table[i][j][l].times(&t[l])))
    })
}

pub fn discriminant<C: Coeff>(alg: &QuantumAlgebra<C>) -> Result<C> {
    trace_gram(alg).det_berkowitz()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Certificate,
    Witness,
    Sampled,
    Truncated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Claim {
    pub verdict: Verdict,
    pub provenance: Provenance,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valid_to: Option<String>,
}

impl Claim {
    fn new(verdict: Verdict, provenance: Provenance, detail: impl Into<String>) -> Self {
        Claim {
            verdict,
            provenance,
            detail: detail.into(),
            valid_to: None,
        }
    }

    fn truncated(valid_to: &Q, detail: impl Into<String>) -> Self {
        Claim {
            verdict: Verdict::Inconclusive,
            provenance: Provenance::Truncated,
            detail: detail.into(),
            valid_to: Some(fmt_q(valid_to)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum Confidence {
    Exact,
    SchwartzZippel { bound: String, trials: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CertificateReport {
    pub mode: String,
    pub poly: String,
    pub gram: Vec<Vec<String>>,
    pub degree_bound: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valid_to: Option<String>,
    /// Integer points where the certificate is nonzero.
    pub nonzero_at: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessReport {
    pub mode: String,
    pub point: Vec<String>,
    pub element: Vec<String>,
    pub charpoly: String,
    pub outcome: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub idempotent: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PointReport {
    pub eta: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_value: Option<String>,
    pub semisimple: Claim,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_split: Option<Claim>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semisimple: Option<Claim>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_split: Option<Claim>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateReport>,
    pub witnesses: Vec<WitnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub idempotent: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at_point: Option<PointReport>,
    pub confidence: Confidence,
    pub unknown: Vec<String>,
}

impl AnalysisReport {
    fn empty() -> Self {
        AnalysisReport {
            semisimple: None,
            field_split: None,
            certificate: None,
            witnesses: Vec::new(),
            idempotent: None,
            at_point: None,
            confidence: Confidence::Exact,
            unknown: Vec::new(),
        }
    }

    pub fn claims(&self) -> Vec<&Claim> {
        let mut out: Vec<&Claim> = self.semisimple.iter().chain(self.field_split.iter()).collect();
        if let Some(p) = &self.at_point {
            out.push(&p.semisimple);
            out.extend(p.field_split.iter());
        }
        out
    }

    pub fn is_inconclusive(&self) -> bool {
        self.claims().iter().any(|c| c.verdict == Verdict::Inconclusive)
    }
}

/// Sampling policy shared by the pointwise tests.
#[derive(Clone, Debug)]
pub struct SplitOpts {
    /// Number of sampled parameter points.
    pub samples: usize,
    /// Random elements tried per point.
    pub trials: usize,
    /// Coordinate range [−B, B]; `None` means 10·(N+1).
    pub range: Option<i64>,
    pub seed: u64,
}

impl Default for SplitOpts {
    fn default() -> Self {
        SplitOpts {
            samples: 3,
            trials: 8,
            range: None,
            seed: 0,
        }
    }
}

impl SplitOpts {
    fn range_for(&self, dim: usize) -> i64 {
        self.range.unwrap_or(10 * dim as i64)
    }
}

fn mode_name(m: Mode) -> String {
    match m {
        Mode::Small => "small".into(),
        Mode::Big => "big".into(),
    }
}

fn class_strings(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

fn key_strings(keys: &[GwKey], table: &GwTable) -> Vec<String> {
    let spec = table.spec();
    keys.iter()
        .map(|k| {
            let names: Vec<&str> = k.classes.iter().map(|&c| spec.basis[c].name.as_str()).collect();
            format!("{}@{}", names.join(","), k.beta)
        })
        .collect()
}

/// Values tried for one variable: nonzero integers for Laurent variables
/// (1, −1, 2, −2, …) and 0, 1, −1, … otherwise.
fn candidates(laurent: bool, radius: i64) -> Vec<i64> {
    let mut v = if laurent { Vec::new() } else { vec![0] };
    for k in 1..=radius {
        v.push(k);
        v.push(-k);
    }
    v
}

/// Integer points of the box [−radius, radius] (zero excluded on Laurent
/// variables), in layers of growing candidate index, where `f` is nonzero.
pub fn search_nonvanishing(f: &MultiPoly, want: usize, radius: i64) -> Result<Vec<Vec<Q>>> {
    search_points(f.vars(), want, radius, |p| Ok(!f.eval(p)?.is_zero_q()))
}

trait ZeroQ {
    fn is_zero_q(&self) -> bool;
}

impl ZeroQ for Q {
    fn is_zero_q(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

/// Layered box search over the variables of `vars` for points accepted by
/// `accept`.
pub fn search_points(
    vars: &VarSet,
    want: usize,
    radius: i64,
    mut accept: impl FnMut(&[Q]) -> Result<bool>,
) -> Result<Vec<Vec<Q>>> {
    let cands: Vec<Vec<i64>> = vars.vars().iter().map(|v| candidates(v.laurent, radius)).collect();
    let n = cands.len();
    let mut out = Vec::new();
    if want == 0 || cands.iter().any(|c| c.is_empty()) {
        return Ok(out);
    }
    if n == 0 {
        if accept(&[])? {
            out.push(Vec::new());
        }
        return Ok(out);
    }
    let top = cands.iter().map(|c| c.len()).max().unwrap_or(1);
    for layer in 0..top {
        let lim: Vec<usize> = cands.iter().map(|c| (c.len() - 1).min(layer)).collect();
        let mut idx = vec![0usize; n];
        loop {
            if idx.contains(&layer) {
                let p: Vec<Q> = idx.iter().zip(&cands).map(|(&i, c)| qi(c[i])).collect();
                if accept(&p)? {
                    out.push(p);
                    if out.len() == want {
                        return Ok(out);
                    }
                }
            }
            match (0..n).rev().find(|&pos| idx[pos] < lim[pos]) {
                Some(pos) => {
                    idx[pos] += 1;
                    idx[pos + 1..].iter_mut().for_each(|i| *i = 0);
                }
                None => break,
            }
        }
    }
    Ok(out)
}

/// Trace-form discriminant of the symbolic algebra in one mode.
#[derive(Clone, Debug)]
pub struct Discriminant {
    pub mode: Mode,
    pub gram: Matrix<SymCoeff>,
    pub poly: SymCoeff,
    pub unknown: Vec<GwKey>,
}

impl Discriminant {
    pub fn compute(table: &GwTable, mode: Mode, cap: &Q) -> Result<Self> {
        let sc = StructureConstants::compute(table, mode, cap)?;
        let alg = symbolic_algebra(&sc, &DeformParam::symbolic(table.spec()))?;
        let gram = trace_gram(&alg);
        let poly = gram.det_berkowitz()?;
        Ok(Discriminant {
            mode,
            gram,
            poly,
            unknown: sc.unknown,
        })
    }

    pub fn is_exact(&self) -> bool {
        self.poly.valid_to.is_none()
    }

    fn verdict(&self) -> Verdict {
        if certified_nonzero(&self.poly) {
            Verdict::Yes
        } else if certified_zero(&self.poly) {
            Verdict::No
        } else {
            Verdict::Inconclusive
        }
    }

    fn report(&self, nonzero_at: &[Vec<Q>]) -> CertificateReport {
        CertificateReport {
            mode: mode_name(self.mode),
            poly: self.poly.poly.to_string(),
            gram: (0..self.gram.rows())
                .map(|i| self.gram.row(i).iter().map(|c| c.poly.to_string()).collect())
                .collect(),
            degree_bound: self.poly.poly.shifted_degree(),
            valid_to: self.poly.valid_to.as_ref().map(fmt_q),
            nonzero_at: nonzero_at.iter().map(|p| class_strings(p)).collect(),
        }
    }
}

/// Discriminant used as the semisimplicity certificate: the small one when
/// it is certified nonzero, the big one otherwise.
pub fn certificate(table: &GwTable, cap: &Q) -> Result<Discriminant> {
    let small = Discriminant::compute(table, Mode::Small, cap)?;
    if small.verdict() == Verdict::Yes || table.spec().len() == table.spec().s() + 1 {
        return Ok(small);
    }
    Discriminant::compute(table, Mode::Big, cap)
}

/// Generic semisimplicity over the symbolic regime.
pub fn generic_semisimple(table: &GwTable, cap: &Q) -> Result<AnalysisReport> {
    let d = certificate(table, cap)?;
    generic_from_certificate(table, &d)
}

fn generic_from_certificate(table: &GwTable, d: &Discriminant) -> Result<AnalysisReport> {
    let mut report = AnalysisReport::empty();
    report.unknown = key_strings(&d.unknown, table);
    let verdict = d.verdict();
    let points = if verdict == Verdict::Yes && d.is_exact() {
        let radius = d.poly.poly.shifted_degree() + 2;
        search_nonvanishing(&d.poly.poly, 3, radius)?
    } else {
        Vec::new()
    };
    report.semisimple = Some(match verdict {
        Verdict::Yes => Claim::new(
            Verdict::Yes,
            Provenance::Certificate,
            format!("trace-form discriminant ({} product) is a nonzero Laurent polynomial", mode_name(d.mode)),
        ),
        Verdict::No => Claim::new(Verdict::No, Provenance::Certificate, "trace-form discriminant vanishes identically"),
        Verdict::Inconclusive => Claim::truncated(
            d.poly.valid_to.as_ref().expect("inconclusive implies truncation"),
            "discriminant has no certified term below the truncation order",
        ),
    });
    report.certificate = Some(d.report(&points));
    Ok(report)
}

/// Outcome of the simple-root test at one rational point.
#[derive(Clone, Debug)]
pub struct PointOutcome {
    pub verdict: Verdict,
    pub element: QClass<Q>,
    pub charpoly: UniPoly,
    pub idempotent: Option<QClass<Q>>,
    pub resamples: usize,
}

fn is_pure_power_of_t(p: &UniPoly) -> bool {
    match p.degree() {
        Some(d) => (0..d).all(|i| p.coeff(i).is_zero_q()),
        None => false,
    }
}

/// Simple-root test on random elements of an algebra over Q.
pub fn field_split_at(alg: &QuantumAlgebra<Q>, rng: &mut ChaCha8Rng, range: i64, trials: usize) -> Result<PointOutcome> {
    let n = alg.dim();
    let mut last = None;
    let mut resamples = 0;
    let mut done = 0;
    while done < trials {
        let a: QClass<Q> = (0..n).map(|_| qi(rng.gen_range(-range..=range))).collect();
        let chi = alg.mult_matrix(&a).charpoly()?;
        if is_pure_power_of_t(&chi) && resamples < 4 * trials {
            resamples += 1;
            continue;
        }
        done += 1;
        if chi.has_simple_root()? {
            let idempotent = match largest_simple_rational_root(&chi) {
                Some(l) => Some(extract_idempotent(alg, &a, &l)?),
                None => None,
            };
            return Ok(PointOutcome {
                verdict: Verdict::Yes,
                element: a,
                charpoly: chi,
                idempotent,
                resamples,
            });
        }
        last = Some((a, chi));
    }
    let (element, charpoly) = last.expect("at least one trial");
    Ok(PointOutcome {
        verdict: Verdict::No,
        element,
        charpoly,
        idempotent: None,
        resamples,
    })
}

fn largest_simple_rational_root(chi: &UniPoly) -> Option<Q> {
    chi.rational_roots()?
        .into_iter()
        .filter(|r| chi.root_multiplicity(r) == 1)
        .max()
}

/// g(a) for a univariate polynomial g.
pub fn eval_in_algebra<C: Coeff>(alg: &QuantumAlgebra<C>, g: &UniPoly, a: &[C]) -> QClass<C> {
    let mut acc = alg.zero();
    for c in g.coeffs().iter().rev() {
        acc = alg.product(&acc, a);
        let unit = alg.from_rational(std::slice::from_ref(c));
        acc[0] = acc[0].plus(&unit[0]);
    }
    acc
}

/// The idempotent cutting out the one-dimensional summand on which `a`
/// acts by the simple rational eigenvalue `lambda`.
pub fn extract_idempotent(alg: &QuantumAlgebra<Q>, a: &[Q], lambda: &Q) -> Result<QClass<Q>> {
    let chi = alg.mult_matrix(a).charpoly()?;
    if chi.root_multiplicity(lambda) != 1 {
        return Err(Error::Precondition(format!("{} is not a simple root of {chi}", fmt_q(lambda))));
    }
    let lin = UniPoly::linear_root(lambda);
    let (h, rem) = chi.divrem(&lin)?;
    debug_assert!(rem.is_zero());
    let (g, _, v) = UniPoly::extgcd(&lin, &h)?;
    debug_assert_eq!(g, UniPoly::one());
    let e = eval_in_algebra(alg, &v.mul(&h), a);
    if alg.product(&e, &e) != e || alg.mult_matrix(&e).rank() != 1 {
        return Err(Error::Precondition("CRT element is not a rank-one idempotent".into()));
    }
    Ok(e)
}

fn point_mode(table: &GwTable, point: &[Q]) -> Mode {
    let s = table.spec().s();
    if point[s..].iter().all(|x| x.is_zero_q()) {
        Mode::Small
    } else {
        Mode::Big
    }
}

fn witness(mode: Mode, point: &[Q], o: &PointOutcome) -> WitnessReport {
    WitnessReport {
        mode: mode_name(mode),
        point: class_strings(point),
        element: class_strings(&o.element),
        charpoly: o.charpoly.to_string(),
        outcome: o.verdict,
        idempotent: o.idempotent.as_ref().map(|e| class_strings(e)),
    }
}

fn sz_confidence(dim: usize, range: i64, trials: usize) -> Confidence {
    let deg = (dim * dim.saturating_sub(1)) as i64;
    Confidence::SchwartzZippel {
        bound: fmt_q(&Q::new(deg.into(), (2 * range + 1).into())),
        trials,
    }
}

/// Field-splitness: at the rational point of `deform` when one is given,
/// otherwise generically by sampling points.
pub fn field_split_test(table: &GwTable, cap: &Q, deform: Option<&DeformParam>, opts: &SplitOpts) -> Result<AnalysisReport> {
    let spec = table.spec();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let range = opts.range_for(spec.len());
    let mut report = AnalysisReport::empty();
    report.confidence = sz_confidence(spec.len(), range, opts.trials);
    if let Some(d) = deform.filter(|d| !d.is_fully_symbolic()) {
        d.validate(spec)?;
        let point = d
            .rational_point()
            .ok_or_else(|| Error::Precondition("pointwise field-split test needs a rational point".into()))?;
        let mode = point_mode(table, &point);
        let (claim, w) = split_at_point(table, mode, cap, &point, &mut rng, range, opts.trials)?;
        report.witnesses.extend(w.iter().cloned());
        report.idempotent = w.and_then(|w| w.idempotent);
        report.at_point = Some(PointReport {
            eta: d.describe(),
            certificate_value: None,
            semisimple: pointwise_semisimple(table, mode, cap, &point)?,
            field_split: Some(claim),
        });
        return Ok(report);
    }
    let big_too = spec.len() > spec.s() + 1;
    for mode in [Mode::Small, Mode::Big] {
        if mode == Mode::Big && !big_too {
            break;
        }
        let sc = StructureConstants::compute(table, mode, cap)?;
        report.unknown = key_strings(&sc.unknown, table);
        let sym = symbolic_algebra(&sc, &DeformParam::symbolic(spec))?;
        if !sym.is_exact() {
            report.field_split = Some(Claim::truncated(
                &sym.valid_to().expect("truncated"),
                "structure constants are truncated; pointwise evaluation is not certified",
            ));
            return Ok(report);
        }
        for _ in 0..opts.samples.max(1) {
            let point = sample_point(spec.s(), spec.len(), mode, range, &mut rng);
            let alg = point_algebra(&sym, &point)?;
            let o = field_split_at(&alg, &mut rng, range, opts.trials)?;
            let w = witness(mode, &point, &o);
            report.witnesses.push(w);
            if o.verdict == Verdict::Yes {
                report.idempotent = o.idempotent.as_ref().map(|e| class_strings(e));
                report.field_split = Some(Claim::new(
                    Verdict::Yes,
                    Provenance::Witness,
                    format!(
                        "characteristic polynomial of a random element has a simple root at ({})",
                        class_strings(&point).join(", ")
                    ),
                ));
                return Ok(report);
            }
        }
    }
    report.field_split = Some(Claim::new(
        Verdict::No,
        Provenance::Sampled,
        "no sampled element at any sampled point has a simple eigenvalue",
    ));
    Ok(report)
}

fn sample_point(s: usize, len: usize, mode: Mode, range: i64, rng: &mut ChaCha8Rng) -> Vec<Q> {
    let mut p: Vec<Q> = (0..s)
        .map(|_| loop {
            let z = rng.gen_range(-range..=range);
            if z != 0 {
                break qi(z);
            }
        })
        .collect();
    for _ in s + 1..len {
        p.push(match mode {
            Mode::Small => qi(0),
            Mode::Big => qi(rng.gen_range(-range..=range)),
        });
    }
    p
}

fn split_at_point(
    table: &GwTable,
    mode: Mode,
    cap: &Q,
    point: &[Q],
    rng: &mut ChaCha8Rng,
    range: i64,
    trials: usize,
) -> Result<(Claim, Option<WitnessReport>)> {
    let sc = StructureConstants::compute(table, mode, cap)?;
    let sym = symbolic_algebra(&sc, &DeformParam::symbolic(table.spec()))?;
    if let Some(v) = sym.valid_to() {
        return Ok((Claim::truncated(&v, "structure constants are truncated"), None));
    }
    let alg = point_algebra(&sym, point)?;
    let o = field_split_at(&alg, rng, range, trials)?;
    let claim = match o.verdict {
        Verdict::Yes => Claim::new(Verdict::Yes, Provenance::Witness, "sampled element has a simple eigenvalue"),
        _ => Claim::new(
            Verdict::No,
            Provenance::Sampled,
            format!("none of {trials} sampled elements has a simple eigenvalue at this point"),
        ),
    };
    Ok((claim, Some(witness(mode, point, &o))))
}

/// Trace test of the algebra at a rational point.
fn pointwise_semisimple(table: &GwTable, mode: Mode, cap: &Q, point: &[Q]) -> Result<Claim> {
    let sc = StructureConstants::compute(table, mode, cap)?;
    let sym = symbolic_algebra(&sc, &DeformParam::symbolic(table.spec()))?;
    if let Some(v) = sym.valid_to() {
        return Ok(Claim::truncated(&v, "structure constants are truncated"));
    }
    let alg = point_algebra(&sym, point)?;
    let d = discriminant(&alg)?;
    Ok(if d.is_zero_q() {
        Claim::new(Verdict::No, Provenance::Certificate, "trace form is degenerate at this point")
    } else {
        Claim::new(Verdict::Yes, Provenance::Certificate, format!("trace-form discriminant is {}", fmt_q(&d)))
    })
}

/// Semisimplicity at a deformation parameter η: the certificate evaluated at
/// E_B(η), then the Novikov-regime discriminant when that value vanishes.
pub fn deformed_verdict_at(table: &GwTable, cap: &Q, deform: &DeformParam, opts: &SplitOpts) -> Result<AnalysisReport> {
    let spec = table.spec();
    deform.validate(spec)?;
    let small_point = deform
        .higher
        .iter()
        .all(|h| matches!(h, crate::quantum::HighEntry::Value(x) if x.is_zero_q()));
    let cert = if small_point {
        certificate(table, cap)?
    } else {
        Discriminant::compute(table, Mode::Big, cap)?
    };
    let mut report = generic_from_certificate(table, &cert)?;
    if deform.is_fully_symbolic() {
        let d = cert.poly.poly.shifted_degree();
        report.confidence = Confidence::SchwartzZippel {
            bound: fmt_q(&Q::new(d.into(), (2 * opts.range_for(spec.len())).into())),
            trials: opts.samples,
        };
        return Ok(report);
    }
    let mode = if small_point { cert.mode } else { Mode::Big };
    let mut value_str = None;
    let mut semisimple = None;
    if cert.is_exact() {
        let value = eval_at_eb(&cert.poly.poly, spec.s(), deform)?;
        value_str = Some(value.to_string());
        if !value.is_zero() {
            semisimple = Some(Claim::new(
                Verdict::Yes,
                Provenance::Certificate,
                "certificate is nonzero at E_B(η)",
            ));
        }
    }
    let semisimple = match semisimple {
        Some(c) => c,
        None if deform.is_fully_evaluated() => {
            let sc = StructureConstants::compute(table, mode, cap)?;
            let alg = novikov_algebra(&sc, deform)?;
            let d = discriminant(&alg)?;
            if certified_nonzero(&d) {
                Claim::new(
                    Verdict::Yes,
                    Provenance::Certificate,
                    format!("Novikov discriminant {d} has a certified nonzero term"),
                )
            } else if certified_zero(&d) {
                Claim::new(Verdict::No, Provenance::Certificate, "Novikov discriminant vanishes exactly")
            } else {
                Claim::truncated(
                    d.valid_to().expect("neither certified zero nor nonzero"),
                    "Novikov discriminant has no certified term below the truncation order",
                )
            }
        }
        None => Claim::new(
            Verdict::Inconclusive,
            Provenance::Certificate,
            "certificate vanishes at E_B(η) and η is only partially evaluated",
        ),
    };
    let field_split = match deform.rational_point() {
        Some(point) if semisimple.verdict != Verdict::Yes => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let range = opts.range_for(spec.len());
            let (claim, w) = split_at_point(table, mode, cap, &point, &mut rng, range, opts.trials)?;
            report.witnesses.extend(w);
            Some(claim)
        }
        _ => None,
    };
    report.at_point = Some(PointReport {
        eta: deform.describe(),
        certificate_value: value_str,
        semisimple,
        field_split,
    });
    Ok(report)
}
