//! Acceptance criteria, one line per criterion.

mod common;

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use qhkit::algebrakit::{
    certificate, deformed_verdict_at, field_split_at, generic_semisimple, SplitOpts, Verdict,
};
use qhkit::blowup::{blowup_field_split, default_epsilon, reduced_algebra_mod_z, verify_n_closure, BlowupSpec, Membership};
use qhkit::capacity::{check_hypothesis, hz_bound, hz_witness_poly, parse_invariant, pi_pairing};
use qhkit::fixtures::{cpn_spec, fixture};
use num_traits::Signed;
use qhkit::polycore::{parse_q, q, qi, Q};
use qhkit::quantum::{
    novikov_algebra, symbolic_algebra, universal_algebra, Coeff, DeformParam, ExpRational, Mode, NovikovCoeff,
    QuantumAlgebra, StructureConstants,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Instant, limit: u64) -> Result<Duration, String> {
    let e = t.elapsed();
    ensure(e < Duration::from_secs(limit), format!("took {e:?}, limit {limit}s"))?;
    Ok(e)
}

fn ring_laws<C: Coeff>(alg: &QuantumAlgebra<C>) -> Result<usize, String> {
    let n = alg.dim();
    let same = |a: &[C], b: &[C]| a.iter().zip(b).all(|(x, y)| x.minus(y).vanishes());
    let mut checked = 0;
    for i in 0..n {
        let bi = alg.basis(i);
        ensure(same(&alg.product(&alg.basis(0), &bi), &bi), format!("unit fails on {}", alg.names[i]))?;
        for j in 0..n {
            let bj = alg.basis(j);
            let ij = alg.product(&bi, &bj);
            ensure(same(&ij, &alg.product(&bj, &bi)), format!("commutativity fails on ({i},{j})"))?;
            for k in 0..n {
                let bk = alg.basis(k);
                let l = alg.product(&ij, &bk);
                let r = alg.product(&bi, &alg.product(&bj, &bk));
                ensure(same(&l, &r), format!("associativity fails on ({i},{j},{k})"))?;
                checked += 1;
            }
        }
    }
    Ok(checked)
}

fn default_cap(name: &str) -> Q {
    let f = fixture(name).expect("fixture");
    f.spec.cone_generators.iter().map(|g| f.spec.omega_of(g)).max().expect("generators") * qi(3)
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let mut triples = 0;
    for (name, mode) in [("cp1", Mode::Small), ("cp2", Mode::Big), ("cp3", Mode::Big), ("s2xs2", Mode::Big)] {
        let f = fixture(name).map_err(|e| e.to_string())?;
        let sc = StructureConstants::compute(&f.table, mode, &default_cap(name)).map_err(|e| e.to_string())?;
        let uni = universal_algebra(&sc).map_err(|e| e.to_string())?;
        triples += ring_laws(&uni).map_err(|e| format!("{name} universal: {e}"))?;
        let sym = symbolic_algebra(&sc, &DeformParam::symbolic(&f.spec)).map_err(|e| e.to_string())?;
        triples += ring_laws(&sym).map_err(|e| format!("{name} symbolic: {e}"))?;
    }
    let e = within(t, 10)?;
    Ok(format!("{triples} basis triples, exact, {e:.2?}"))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checks = 0;
    for name in ["cp1", "cp2", "cp3", "s2xs2"] {
        let f = fixture(name).map_err(|e| e.to_string())?;
        let spec = &f.spec;
        let sc = StructureConstants::compute(&f.table, Mode::Big, &default_cap(name)).map_err(|e| e.to_string())?;
        let n = spec.len();
        let mut m = vec![NovikovCoeff::zero(); n];
        m[0] = NovikovCoeff::monomial(qi(0), qi(0), qi(1));
        for _ in 0..5 {
            let rq = |rng: &mut ChaCha8Rng| q(rng.gen_range(-6..=6), rng.gen_range(1..=3));
            let div: Vec<Q> = (0..spec.s()).map(|_| rq(&mut rng)).collect();
            let high: Vec<Q> = (spec.s() + 1..n).map(|_| rq(&mut rng)).collect();
            let eta = DeformParam::from_eta(spec, &div, &high);
            let alg = novikov_algebra(&sc, &eta).map_err(|e| e.to_string())?;
            for a in 0..n {
                for b in 0..n {
                    let prod = alg.product(&alg.basis(a), &alg.basis(b));
                    let lhs = pi_pairing(spec, &prod, &m).map_err(|e| e.to_string())?;
                    let rhs = ExpRational::rational(spec.pair(a, b).clone());
                    ensure(lhs == rhs, format!("{name}: Π(Δ{a}*Δ{b},[M]) = {lhs}, Π(Δ{a},Δ{b}) = {rhs}"))?;
                    checks += 1;
                }
            }
        }
    }
    let e = within(t, 5)?;
    Ok(format!("{checks} pairs x eta samples, exact, {e:.2?}"))
}

/// Small quantum cohomology of ℂPⁿ written out by hand: h^a h^b = q^⌊(a+b)/(n+1)⌋ h^{(a+b) mod (n+1)}.
/// Returns the trace-form determinant as a map exponent ↦ coefficient.
fn cpn_oracle(n: usize) -> BTreeMap<i64, i64> {
    let d = n + 1;
    // Trace of multiplication by q^k h^r: d·q^k when r = 0, else 0.
    let gram = |a: usize, b: usize| -> BTreeMap<i64, i64> {
        let (k, r) = ((a + b) / d, (a + b) % d);
        let mut m = BTreeMap::new();
        if r == 0 {
            m.insert(k as i64, d as i64);
        }
        m
    };
    fn mul(x: &BTreeMap<i64, i64>, y: &BTreeMap<i64, i64>) -> BTreeMap<i64, i64> {
        let mut out = BTreeMap::new();
        for (e, c) in x {
            for (f, g) in y {
                *out.entry(e + f).or_insert(0) += c * g;
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }
    // Leibniz expansion.
    let mut det: BTreeMap<i64, i64> = BTreeMap::new();
    let mut perm: Vec<usize> = (0..d).collect();
    let mut stack = vec![0usize; d];
    let mut sign = 1i64;
    let mut visit = |perm: &[usize], sign: i64| {
        let mut term: BTreeMap<i64, i64> = [(0, sign)].into_iter().collect();
        for (i, &p) in perm.iter().enumerate() {
            term = mul(&term, &gram(i, p));
        }
        for (e, c) in term {
            *det.entry(e).or_insert(0) += c;
        }
    };
    visit(&perm, sign);
    let mut i = 0;
    while i < d {
        if stack[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(stack[i], i);
            }
            sign = -sign;
            visit(&perm, sign);
            stack[i] += 1;
            i = 0;
        } else {
            stack[i] = 0;
            i += 1;
        }
    }
    det.retain(|_, v| *v != 0);
    det
}

fn criterion_3() -> Outcome {
    let mut notes = Vec::new();
    for (name, n, shown) in [("cp1", 1, "4q"), ("cp2", 2, "-27q^2")] {
        let f = fixture(name).map_err(|e| e.to_string())?;
        let d = certificate(&f.table, &default_cap(name)).map_err(|e| e.to_string())?;
        ensure(d.is_exact(), format!("{name}: certificate truncated"))?;
        let got: BTreeMap<i64, Q> = d
            .poly
            .poly
            .terms()
            .iter()
            .map(|(m, c)| (m.iter().find(|(v, _)| *v == 0).map_or(0, |(_, e)| *e), c.clone()))
            .collect();
        let oracle = cpn_oracle(n);
        let want: BTreeMap<i64, Q> = oracle.iter().map(|(e, c)| (*e, qi(*c))).collect();
        // Unit factor c·q^m relating the two.
        let (ge, gc) = got.iter().next().ok_or(format!("{name}: discriminant is zero"))?;
        let (we, wc) = want.iter().next().ok_or(format!("{name}: oracle is zero"))?;
        let unit_c = gc / wc;
        let unit_m = ge - we;
        let rescaled: BTreeMap<i64, Q> = want.iter().map(|(e, c)| (e + unit_m, c * &unit_c)).collect();
        ensure(rescaled == got, format!("{name}: {got:?} is not a unit multiple of {want:?}"))?;
        notes.push(format!("{name} {shown} (unit {}*q^{unit_m})", unit_c));
    }
    let f = fixture("nilpotent").map_err(|e| e.to_string())?;
    let d = certificate(&f.table, &qi(3)).map_err(|e| e.to_string())?;
    ensure(d.is_exact() && d.poly.poly.is_zero(), "nilpotent fixture: discriminant is not identically zero")?;
    notes.push("nilpotent 0".into());
    Ok(notes.join(", "))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut split_rng = ChaCha8Rng::seed_from_u64(44);
    let (mut conclusive, mut yes, mut no) = (0, 0, 0);
    for i in 0..100 {
        let s = common::sample_algebra(&mut rng);
        let alg = &s.algebra;
        let range = 10 * (alg.dim() as i64 + 1);
        let got = field_split_at(alg, &mut split_rng, range, 8).map_err(|e| e.to_string())?.verdict;
        let want = match common::brute_force(alg) {
            common::Brute::Yes => Verdict::Yes,
            common::Brute::No => Verdict::No,
            common::Brute::Inconclusive => continue,
        };
        conclusive += 1;
        match want {
            Verdict::Yes => yes += 1,
            _ => no += 1,
        }
        ensure(got == want, format!("instance {i} ({:?}): field_split_at {got:?}, brute force {want:?}", s.shape))?;
    }
    ensure(conclusive >= 50, format!("only {conclusive} conclusive instances"))?;
    Ok(format!("100 instances, {conclusive} conclusive ({yes} yes, {no} no), 100% agreement"))
}

fn criterion_5() -> Outcome {
    let f = fixture("bigsymp").map_err(|e| e.to_string())?;
    let cap = default_cap("bigsymp");
    let generic = generic_semisimple(&f.table, &cap).map_err(|e| e.to_string())?;
    let g = generic.semisimple.as_ref().map(|c| c.verdict);
    ensure(g == Some(Verdict::Yes), format!("generic verdict {g:?}"))?;
    let r = deformed_verdict_at(&f.table, &cap, &DeformParam::zero(&f.spec), &SplitOpts::default())
        .map_err(|e| e.to_string())?;
    let p = r.at_point.as_ref().ok_or("no pointwise report")?;
    ensure(p.certificate_value.as_deref() == Some("0"), format!("f(E_B(0)) = {:?}", p.certificate_value))?;
    ensure(
        matches!(p.semisimple.verdict, Verdict::No | Verdict::Inconclusive),
        format!("pointwise verdict {:?}", p.semisimple.verdict),
    )?;
    let poly = r.certificate.as_ref().map(|c| c.poly.clone()).unwrap_or_default();
    Ok(format!(
        "f = {poly}, f(E_B(0)) = 0, pointwise {:?}, generic Yes",
        p.semisimple.verdict
    ))
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    for n in 2..=6 {
        let base = cpn_spec(n);
        let b = BlowupSpec::build(&base, &default_epsilon(&base)).map_err(|e| e.to_string())?;
        let red = reduced_algebra_mod_z(&b).map_err(|e| e.to_string())?;
        ensure(red.power_relation, format!("n={n}: s^n != (-1)^n s"))?;
        ensure(red.y_idempotent && red.y_unit_on_c2, format!("n={n}: Y is not an idempotent unit on C2"))?;
        let (red, rep) = blowup_field_split(&b).map_err(|e| e.to_string())?;
        ensure(
            rep.field_split.as_ref().map(|c| c.verdict) == Some(Verdict::Yes),
            format!("n={n}: field split verdict"),
        )?;
        let e: Vec<Q> = rep
            .idempotent
            .as_ref()
            .ok_or(format!("n={n}: no idempotent"))?
            .iter()
            .map(|x| parse_q(x).expect("rational"))
            .collect();
        ensure(red.algebra.product(&e, &e) == e, format!("n={n}: e*e != e"))?;
        ensure(red.algebra.mult_matrix(&e).rank() == 1, format!("n={n}: dim(eA) != 1"))?;
        if n == 2 {
            ensure(e == vec![qi(0), qi(1)], "n=2: idempotent is not s")?;
        }
    }
    let e = within(t, 5)?;
    Ok(format!("n = 2..6, C2 = Q[s]/(s^n-(-1)^n s), Y idempotent, n=2 e = s, {e:.2?}"))
}

fn criterion_7() -> Outcome {
    let f = fixture("cp2").map_err(|e| e.to_string())?;
    let b = BlowupSpec::build(&f.spec, &default_epsilon(&f.spec)).map_err(|e| e.to_string())?;
    let cap = qi(3);
    let rep = verify_n_closure(&b, &f.table, &cap).map_err(|e| e.to_string())?;
    let len = b.spec.len();
    ensure(rep.entries.len() == len * (len + 1) / 2, "not every generator pair was checked")?;
    for e in &rep.entries {
        ensure(e.verified, format!("{} * {}: {:?}", e.left, e.right, e.failure))?;
    }
    let count = |m: Membership| rep.entries.iter().filter(|e| e.claim == m).count();
    Ok(format!(
        "{} pairs up to energy {} over {} classes: unit {}, (dd) {}, (dze) {}, (ee) {}",
        rep.entries.len(),
        rep.energy_cap,
        rep.classes,
        count(Membership::Unit),
        count(Membership::InN),
        count(Membership::InZN),
        count(Membership::LeadingPlusZN)
    ))
}

fn criterion_8() -> Outcome {
    let f = fixture("cp1").map_err(|e| e.to_string())?;
    let (cls, a) = parse_invariant(&f.spec, "pt,pt,pt@L").map_err(|e| e.to_string())?;
    let r = hz_bound(&f.table, &cls, &a).map_err(|e| e.to_string())?;
    let area = f.spec.omega_of(&a);
    ensure(parse_q(&r.bound).ok() == Some(area.clone()), format!("cp1 bound {} vs area {area}", r.bound))?;
    let cp1_bound = r.bound;

    let f = fixture("bigsymp").map_err(|e| e.to_string())?;
    let (cls, a) = parse_invariant(&f.spec, "pt,pt,pt@2A+2B").map_err(|e| e.to_string())?;
    let hyp = check_hypothesis(&f.table, &cls, &a).map_err(|e| e.to_string())?;
    let w = hz_witness_poly(&f.table, &hyp).map_err(|e| e.to_string())?;
    ensure(!w.poly.is_zero(), "witness polynomial is zero")?;
    let s = f.spec.s();
    let trivial: Vec<Q> = (0..w.poly.vars().len()).map(|i| if i < s { qi(1) } else { qi(0) }).collect();
    let at_trivial = w.poly.eval(&trivial).map_err(|e| e.to_string())?;
    ensure(at_trivial == qi(0), format!("value at the trivial point is {at_trivial}"))?;
    let r = hz_bound(&f.table, &cls, &a).map_err(|e| e.to_string())?;
    let eta: Vec<Q> = r
        .witness_eta
        .as_ref()
        .ok_or("no witness point")?
        .iter()
        .map(|x| parse_q(x).expect("rational"))
        .collect();
    let radius = qi(w.poly.shifted_degree() + 1);
    ensure(eta.iter().all(|c| c.abs() <= radius), "witness outside the degree box")?;
    ensure(w.poly.eval(&eta).map_err(|e| e.to_string())? != qi(0), "witness value is zero")?;
    Ok(format!(
        "cp1 bound = {} = omega(L); cancellation poly {} vanishes at z=1, nonzero at ({})",
        cp1_bound,
        w.poly,
        r.witness_eta.unwrap_or_default().join(", ")
    ))
}

fn criterion_9() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_qhkit");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |args: &[&str]| -> Result<i32, String> {
        let st = Command::new(bin)
            .args(args)
            .current_dir(dir.path())
            .output()
            .map_err(|e| e.to_string())?;
        Ok(st.status.code().unwrap_or(-1))
    };
    for f in ["cp1", "cp2", "bigsymp"] {
        run(&["fixtures", "emit", f, "--out", "."])?;
    }
    let commands: Vec<Vec<&str>> = vec![
        vec!["semisimple", "cp2.spec", "cp2.gw"],
        vec!["fieldsplit", "cp2.spec", "cp2.gw", "--samples", "4", "--seed", "7"],
        vec!["fieldsplit", "bigsymp.spec", "bigsymp.gw", "--seed", "11"],
        vec!["blowup", "cp2.spec", "blown.spec", "cp2.gw"],
        vec!["capacity", "cp1.spec", "cp1.gw", "--invariant", "pt,pt,pt@L"],
        vec!["discriminant", "bigsymp.spec", "bigsymp.gw"],
    ];
    for (i, c) in commands.iter().enumerate() {
        let mut outs = Vec::new();
        for rep in 0..2 {
            let name = format!("r{i}_{rep}.json");
            let mut args = c.clone();
            args.extend(["--out", name.as_str()]);
            let code = run(&args)?;
            ensure(code == 0 || code == 2, format!("`{}` exited with {code}", c.join(" ")))?;
            outs.push(std::fs::read(dir.path().join(&name)).map_err(|e| e.to_string())?);
        }
        ensure(outs[0] == outs[1], format!("`{}` is not reproducible", c.join(" ")))?;
    }
    run(&["fieldsplit", "blown.spec", "--modZ", "--out", "m1.json"])?;
    run(&["fieldsplit", "blown.spec", "--modZ", "--out", "m2.json"])?;
    let a = std::fs::read(dir.path().join("m1.json")).map_err(|e| e.to_string())?;
    let b = std::fs::read(dir.path().join("m2.json")).map_err(|e| e.to_string())?;
    ensure(a == b, "`fieldsplit --modZ` is not reproducible")?;
    Ok(format!("{} commands, byte-identical reports", commands.len() + 1))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("ring laws", criterion_1),
        ("pairing compatibility", criterion_2),
        ("discriminant certificates", criterion_3),
        ("field-split oracle", criterion_4),
        ("generic vs pointwise", criterion_5),
        ("blowup reduction mod Z", criterion_6),
        ("closure of N", criterion_7),
        ("capacity", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("criterion {}: PASS {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
