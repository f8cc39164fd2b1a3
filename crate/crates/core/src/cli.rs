//! Command-line surface. Every command produces a report and a short human
//! summary; exit code 0 means a verdict, 2 an inconclusive verdict and 1 an
//! input error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::algebrakit::{
    certificate, deformed_verdict_at, field_split_test, generic_semisimple, AnalysisReport, SplitOpts, Verdict,
};
use crate::blowup::{blowup_field_split, default_epsilon, verify_n_closure, BlowupSpec};
use crate::capacity::{hz_bound, parse_invariant};
use crate::error::{Error, Result};
use crate::fixtures::{fixture, NAMES};
use crate::gwdata::GwTable;
use crate::homology::ManifoldSpec;
use crate::polycore::rational::fmt_q;
use crate::polycore::{parse_q, qi, Q};
use crate::quantum::{structure_constant, AnyAlgebra, DeformParam, HighEntry, Mode, Regime};
use crate::report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qhkit", version, about = "Exact quantum homology algebras from Gromov-Witten data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Coefficient regime: universal, symbolic or novikov.
    #[arg(long, global = true)]
    pub regime: Option<String>,
    /// Energy cap (rational); defaults to three times the largest generator energy.
    #[arg(long, global = true)]
    pub cap: Option<String>,
    /// Number of sampled parameter points.
    #[arg(long, global = true, default_value_t = 3)]
    pub samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Deformation parameter file.
    #[arg(long, global = true)]
    pub deform: Option<PathBuf>,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Work in the blowup algebra reduced modulo Z.
    #[arg(long = "modZ", global = true)]
    pub mod_z: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a spec file, and a table file against it.
    Validate { spec: PathBuf, table: Option<PathBuf> },
    /// Product of two basis classes.
    Product { spec: PathBuf, table: PathBuf, a: String, b: String },
    /// Structure constant c_ijk in the universal ring.
    Structconst { spec: PathBuf, table: PathBuf, i: String, j: String, k: String },
    /// Generic semisimplicity, or the verdict at --deform.
    Semisimple { spec: PathBuf, table: PathBuf },
    /// Field-split test; with --modZ the input must be a blowup basis.
    Fieldsplit { spec: PathBuf, table: Option<PathBuf> },
    /// Trace-form discriminant.
    Discriminant { spec: PathBuf, table: PathBuf },
    /// Blow up a point; with a base table, also check closure of N.
    Blowup {
        base: PathBuf,
        output: PathBuf,
        table: Option<PathBuf>,
        /// Symplectic area of the line in the exceptional divisor.
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Capacity bound from an invariant `pt,a0,pt,...@A`.
    Capacity {
        spec: PathBuf,
        table: PathBuf,
        #[arg(long)]
        invariant: String,
    },
    /// Built-in fixtures.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum FixtureAction {
    List,
    /// Write `<name>.spec` and `<name>.gw` (into --out when it is a directory).
    Emit { name: String },
}

/// What a command produced.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub summary: String,
    pub exit: i32,
}

struct Loaded {
    spec: Arc<ManifoldSpec>,
    table: Option<GwTable>,
}

fn read(report: &mut Report, role: &str, path: &Path) -> Result<String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    report.input(role, path, text.as_bytes());
    Ok(text)
}

fn load(report: &mut Report, spec: &Path, table: Option<&Path>) -> Result<Loaded> {
    let spec = Arc::new(ManifoldSpec::from_json(&read(report, "spec", spec)?)?);
    let table = match table {
        Some(t) => Some(GwTable::from_json(spec.clone(), &read(report, "table", t)?)?),
        None => None,
    };
    Ok(Loaded { spec, table })
}

fn cap_for(g: &Global, spec: &ManifoldSpec) -> Result<Q> {
    match &g.cap {
        Some(c) => parse_q(c),
        None => Ok(spec
            .cone_generators
            .iter()
            .map(|b| spec.omega_of(b))
            .max()
            .unwrap_or_else(|| qi(1))
            * qi(3)),
    }
}

fn regime(g: &Global, default: Regime) -> Result<Regime> {
    g.regime.as_deref().map_or(Ok(default), str::parse)
}

fn deform(report: &mut Report, g: &Global) -> Result<Option<DeformParam>> {
    match &g.deform {
        Some(p) => Ok(Some(DeformParam::from_json(&read(report, "deform", p)?)?)),
        None => Ok(None),
    }
}

/// Small product when every higher coordinate is fixed at 0, else big.
fn mode_for(spec: &ManifoldSpec, d: Option<&DeformParam>) -> Mode {
    let no_higher = spec.len() == spec.s() + 1;
    let zero_higher = d.is_some_and(|d| {
        d.higher
            .iter()
            .all(|h| matches!(h, HighEntry::Value(x) if *x == qi(0)))
    });
    if no_higher || zero_higher {
        Mode::Small
    } else {
        Mode::Big
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Small => "small",
        Mode::Big => "big",
    }
}

fn verdict_exit(r: &AnalysisReport) -> i32 {
    if r.is_inconclusive() {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    }
}

fn word(v: Verdict) -> &'static str {
    match v {
        Verdict::Yes => "yes",
        Verdict::No => "no",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn analysis_summary(r: &AnalysisReport) -> String {
    let mut lines = Vec::new();
    if let Some(c) = &r.semisimple {
        lines.push(format!("semisimple (generic): {} [{:?}] {}", word(c.verdict), c.provenance, c.detail));
    }
    if let Some(c) = &r.field_split {
        lines.push(format!("field split: {} [{:?}] {}", word(c.verdict), c.provenance, c.detail));
    }
    if let Some(cert) = &r.certificate {
        lines.push(format!("certificate ({}): {}", cert.mode, cert.poly));
    }
    if let Some(p) = &r.at_point {
        lines.push(format!("at {}: semisimple {}", p.eta, word(p.semisimple.verdict)));
        if let Some(f) = &p.field_split {
            lines.push(format!("at {}: field split {}", p.eta, word(f.verdict)));
        }
    }
    if let Some(e) = &r.idempotent {
        lines.push(format!("idempotent: ({})", e.join(", ")));
    }
    lines.join("\n")
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ProductResult {
    regime: String,
    mode: String,
    left: String,
    right: String,
    coordinates: Vec<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    valid_to: Option<String>,
    unknown: Vec<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ValidateResult {
    basis: Vec<String>,
    curve_basis: Vec<String>,
    entries: Option<usize>,
    warnings: Vec<String>,
    blowup: bool,
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Validate { spec, table } => {
            let mut report = Report::new("validate");
            let l = load(&mut report, spec, table.as_deref())?;
            let res = ValidateResult {
                basis: l.spec.basis.iter().map(|b| b.name.clone()).collect(),
                curve_basis: l.spec.curve_basis.clone(),
                entries: l.table.as_ref().map(|t| t.entries().len()),
                warnings: l.table.as_ref().map(|t| t.warnings().to_vec()).unwrap_or_default(),
                blowup: l.spec.blowup.is_some(),
            };
            let summary = format!(
                "valid: {} classes{}",
                res.basis.len(),
                res.entries.map(|n| format!(", {n} table entries")).unwrap_or_default()
            );
            report.set_result(&res)?;
            Ok(Outcome {
                report,
                summary,
                exit: EXIT_OK,
            })
        }
        Command::Product { spec, table, a, b } => {
            let mut report = Report::new("product");
            let l = load(&mut report, spec, Some(table))?;
            let t = l.table.as_ref().expect("table loaded");
            let reg = regime(g, Regime::Symbolic)?;
            let d = deform(&mut report, g)?;
            let cap = cap_for(g, &l.spec)?;
            let mode = mode_for(&l.spec, d.as_ref());
            let dp = d.clone().unwrap_or_else(|| match reg {
                Regime::Novikov => DeformParam::zero(&l.spec),
                _ => DeformParam::symbolic(&l.spec),
            });
            let (i, j) = (l.spec.index_of(a)?, l.spec.index_of(b)?);
            let alg = AnyAlgebra::build(t, mode, reg, &dp, &cap)?;
            let (coords, valid) = alg.basis_product(i, j);
            report.param("regime", format!("{reg:?}").to_lowercase());
            report.param("cap", fmt_q(&cap));
            report.param("mode", mode_name(mode));
            let res = ProductResult {
                regime: format!("{reg:?}").to_lowercase(),
                mode: mode_name(mode).into(),
                left: a.clone(),
                right: b.clone(),
                coordinates: l
                    .spec
                    .basis
                    .iter()
                    .zip(coords)
                    .filter(|(_, c)| c != "0")
                    .map(|(n, c)| (n.name.clone(), c))
                    .collect(),
                valid_to: valid.as_ref().map(fmt_q),
                unknown: alg
                    .unknown()
                    .iter()
                    .map(|k| {
                        let names: Vec<&str> = k.classes.iter().map(|&c| l.spec.basis[c].name.as_str()).collect();
                        format!("{}@{}", names.join(","), l.spec.curve_name(&k.beta))
                    })
                    .collect(),
            };
            let terms: Vec<String> = res.coordinates.iter().map(|(n, c)| format!("({c})*{n}")).collect();
            let summary = format!(
                "{a} * {b} = {}{}",
                if terms.is_empty() { "0".into() } else { terms.join(" + ") },
                res.valid_to.as_ref().map(|v| format!("  (valid to energy {v})")).unwrap_or_default()
            );
            report.set_result(&res)?;
            Ok(Outcome {
                report,
                summary,
                exit: EXIT_OK,
            })
        }
        Command::Structconst { spec, table, i, j, k } => {
            let mut report = Report::new("structconst");
            let l = load(&mut report, spec, Some(table))?;
            let t = l.table.as_ref().expect("table loaded");
            let cap = cap_for(g, &l.spec)?;
            let mode = mode_for(&l.spec, None);
            let idx = [l.spec.index_of(i)?, l.spec.index_of(j)?, l.spec.index_of(k)?];
            let c = structure_constant(t, idx[0], idx[1], idx[2], mode, &cap)?;
            report.param("cap", fmt_q(&cap));
            report.param("mode", mode_name(mode));
            let value = c.to_string();
            report.set_result(&serde_json::json!({ "classes": [i, j, k], "value": value }))?;
            Ok(Outcome {
                report,
                summary: format!("c[{i},{j},{k}] = {value}"),
                exit: EXIT_OK,
            })
        }
        Command::Semisimple { spec, table } => {
            let mut report = Report::new("semisimple");
            let l = load(&mut report, spec, Some(table))?;
            let t = l.table.as_ref().expect("table loaded");
            let cap = cap_for(g, &l.spec)?;
            let d = deform(&mut report, g)?;
            let opts = opts(g);
            report.param("cap", fmt_q(&cap));
            report.seed = Some(g.seed);
            let r = match &d {
                Some(d) => deformed_verdict_at(t, &cap, d, &opts)?,
                None => generic_semisimple(t, &cap)?,
            };
            report.set_result(&r)?;
            Ok(Outcome {
                summary: analysis_summary(&r),
                exit: verdict_exit(&r),
                report,
            })
        }
        Command::Fieldsplit { spec, table } => {
            let mut report = Report::new("fieldsplit");
            if g.mod_z {
                let l = load(&mut report, spec, None)?;
                let b = BlowupSpec::from_spec(&l.spec)?;
                let (red, r) = blowup_field_split(&b)?;
                report.param("modZ", true);
                report.param("n", b.n);
                if let Some(m) = &b.spec.blowup {
                    report.param("epsilon", fmt_q(&m.epsilon));
                }
                let y: Vec<String> = red.y.iter().map(fmt_q).collect();
                report.set_result(&serde_json::json!({
                    "analysis": r,
                    "basis": red.algebra.names,
                    "y": y,
                    "yIdempotent": red.y_idempotent,
                    "yUnitOnC2": red.y_unit_on_c2,
                    "powerRelation": red.power_relation,
                }))?;
                return Ok(Outcome {
                    summary: analysis_summary(&r),
                    exit: verdict_exit(&r),
                    report,
                });
            }
            let table = table
                .as_deref()
                .ok_or_else(|| Error::Precondition("fieldsplit needs a table unless --modZ is given".into()))?;
            let l = load(&mut report, spec, Some(table))?;
            let t = l.table.as_ref().expect("table loaded");
            let cap = cap_for(g, &l.spec)?;
            let d = deform(&mut report, g)?;
            let opts = opts(g);
            report.param("cap", fmt_q(&cap));
            report.param("samples", opts.samples);
            report.seed = Some(g.seed);
            let r = field_split_test(t, &cap, d.as_ref(), &opts)?;
            report.set_result(&r)?;
            Ok(Outcome {
                summary: analysis_summary(&r),
                exit: verdict_exit(&r),
                report,
            })
        }
        Command::Discriminant { spec, table } => {
            let mut report = Report::new("discriminant");
            let l = load(&mut report, spec, Some(table))?;
            let t = l.table.as_ref().expect("table loaded");
            let cap = cap_for(g, &l.spec)?;
            report.param("cap", fmt_q(&cap));
            let d = certificate(t, &cap)?;
            let res = serde_json::json!({
                "mode": mode_name(d.mode),
                "poly": d.poly.poly.to_string(),
                "validTo": d.poly.valid_to.as_ref().map(fmt_q),
                "gram": (0..d.gram.rows()).map(|i| d.gram.row(i).iter().map(|c| c.poly.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            report.set_result(&res)?;
            Ok(Outcome {
                summary: format!("discriminant ({}): {}", mode_name(d.mode), d.poly),
                exit: if d.is_exact() { EXIT_OK } else { EXIT_INCONCLUSIVE },
                report,
            })
        }
        Command::Blowup {
            base,
            output,
            table,
            epsilon,
        } => {
            let mut report = Report::new("blowup");
            let l = load(&mut report, base, table.as_deref())?;
            let eps = match epsilon {
                Some(e) => parse_q(e)?,
                None => default_epsilon(&l.spec),
            };
            if eps <= qi(0) {
                return Err(Error::Precondition("epsilon must be positive".into()));
            }
            let b = BlowupSpec::build(&l.spec, &eps)?;
            let text = b.spec.to_json();
            std::fs::write(output, &text)?;
            report.param("epsilon", fmt_q(&eps));
            report.param("n", b.n);
            let mut summary = format!(
                "blowup written to {} ({} classes, epsilon {})",
                output.display(),
                b.spec.len(),
                fmt_q(&eps)
            );
            let closure = match &l.table {
                Some(t) => {
                    let cap = cap_for(g, &l.spec)?;
                    report.param("cap", fmt_q(&cap));
                    let c = verify_n_closure(&b, t, &cap)?;
                    summary.push_str(&format!(
                        "\nclosure of N up to energy {}: {}",
                        c.energy_cap,
                        if c.all_verified { "verified" } else { "FAILED" }
                    ));
                    Some(c)
                }
                None => None,
            };
            let exit = match &closure {
                Some(c) if !c.all_verified => EXIT_INCONCLUSIVE,
                _ => EXIT_OK,
            };
            report.set_result(&serde_json::json!({
                "spec": serde_json::from_str::<serde_json::Value>(&text)?,
                "closure": closure,
            }))?;
            Ok(Outcome { report, summary, exit })
        }
        Command::Capacity { spec, table, invariant } => {
            let mut report = Report::new("capacity");
            let l = load(&mut report, spec, Some(table))?;
            let t = l.table.as_ref().expect("table loaded");
            let (classes, a) = parse_invariant(&l.spec, invariant)?;
            report.param("invariant", invariant);
            let r = hz_bound(t, &classes, &a)?;
            let summary = format!(
                "c_HZ <= {} (curve {}), witness polynomial {} nonzero at ({})",
                r.bound,
                r.curve,
                r.witness_poly,
                r.witness_eta.as_ref().map(|p| p.join(", ")).unwrap_or_default()
            );
            report.set_result(&r)?;
            Ok(Outcome {
                report,
                summary,
                exit: EXIT_OK,
            })
        }
        Command::Fixtures { action } => {
            let mut report = Report::new("fixtures");
            match action {
                FixtureAction::List => {
                    report.set_result(&NAMES)?;
                    Ok(Outcome {
                        report,
                        summary: NAMES.join("\n"),
                        exit: EXIT_OK,
                    })
                }
                FixtureAction::Emit { name } => {
                    let f = fixture(name)?;
                    let dir = g.out.clone().filter(|p| p.is_dir()).unwrap_or_else(|| PathBuf::from("."));
                    let spec_path = dir.join(format!("{name}.spec"));
                    let table_path = dir.join(format!("{name}.gw"));
                    let (st, tt) = (f.spec.to_json(), f.table.to_json());
                    std::fs::write(&spec_path, &st)?;
                    std::fs::write(&table_path, &tt)?;
                    report.inline_input("spec", &format!("{name}.spec"), st.as_bytes());
                    report.inline_input("table", &format!("{name}.gw"), tt.as_bytes());
                    report.set_result(&serde_json::json!({ "fixture": name }))?;
                    Ok(Outcome {
                        report,
                        summary: format!("wrote {} and {}", spec_path.display(), table_path.display()),
                        exit: EXIT_OK,
                    })
                }
            }
        }
    }
}

fn opts(g: &Global) -> SplitOpts {
    SplitOpts {
        samples: g.samples,
        seed: g.seed,
        ..SplitOpts::default()
    }
}

/// Parses, runs and writes outputs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(o) => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{}", o.summary);
            let json = o.report.to_json();
            let to_file = cli.global.out.as_ref().filter(|p| !p.is_dir());
            match to_file {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, json) {
                        eprintln!("error: cannot write {}: {e}", p.display());
                        return EXIT_INPUT;
                    }
                }
                None => {
                    let _ = write!(stdout, "{json}");
                }
            }
            o.exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}
