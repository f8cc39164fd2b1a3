//! Shared test oracles: random commutative algebras of dimension at most 3
//! and a brute-force idempotent search.

#![allow(dead_code)]

use qhkit::polycore::{q, qi, Q};
use qhkit::quantum::QuantumAlgebra;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Integer polynomial, lowest coefficient first.
pub type IPoly = Vec<i64>;

fn pmul(a: &[i64], b: &[i64]) -> IPoly {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Remainder modulo a monic polynomial.
fn prem(a: &[i64], m: &[i64]) -> IPoly {
    let d = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > d {
        let c = r.pop().expect("nonempty");
        let shift = r.len() - d;
        for (k, mk) in m[..d].iter().enumerate() {
            r[shift + k] -= c * mk;
        }
    }
    r.resize(d, 0);
    r
}

/// How a sampled algebra was built.
#[derive(Clone, Debug)]
pub enum Shape {
    /// Q[t]/(m) with m monic.
    Monogenic(IPoly),
    /// Q[x, y]/(x, y)².
    SquareZero,
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub shape: Shape,
    pub algebra: QuantumAlgebra<Q>,
}

fn linear(r: i64) -> IPoly {
    vec![-r, 1]
}

/// Draws the defining polynomial from products of (t − r), r ∈ {−1, 0, 1},
/// irreducible quadratics t² + c and t² − 2, t² − 3.
fn random_modulus(rng: &mut ChaCha8Rng) -> IPoly {
    let dim = rng.gen_range(1..=3);
    let quadratics: [IPoly; 5] = [vec![1, 0, 1], vec![2, 0, 1], vec![3, 0, 1], vec![-2, 0, 1], vec![-3, 0, 1]];
    let mut m: IPoly = vec![1];
    let mut left = dim;
    if dim >= 2 && rng.gen_bool(0.35) {
        m = quadratics[rng.gen_range(0..quadratics.len())].clone();
        left -= 2;
    }
    for _ in 0..left {
        m = pmul(&m, &linear(rng.gen_range(-1..=1)));
    }
    m
}

/// Multiplication table in the basis b_0 = 1, b_i = t^i + lower terms with
/// small integer coefficients.
fn monogenic_table(m: &[i64], rng: &mut ChaCha8Rng) -> Vec<Vec<Vec<Q>>> {
    let d = m.len() - 1;
    let mut basis: Vec<IPoly> = Vec::new();
    for i in 0..d {
        let mut b = vec![0; i + 1];
        b[i] = 1;
        if i > 0 {
            for c in b.iter_mut().take(i).skip(1) {
                *c = rng.gen_range(-1..=1);
            }
            b[0] = rng.gen_range(-1..=1);
        }
        basis.push(b);
    }
    // Coordinates of a polynomial of degree < d in the unitriangular basis.
    let coords = |p: &[i64]| -> Vec<i64> {
        let mut r = p.to_vec();
        r.resize(d, 0);
        let mut out = vec![0; d];
        for i in (0..d).rev() {
            let c = r[i];
            out[i] = c;
            for (k, bk) in basis[i].iter().enumerate() {
                r[k] -= c * bk;
            }
        }
        out
    };
    let mut table = vec![vec![vec![qi(0); d]; d]; d];
    for i in 0..d {
        for j in 0..d {
            let prod = prem(&pmul(&basis[i], &basis[j]), m);
            for (k, c) in coords(&prod).into_iter().enumerate() {
                table[i][j][k] = qi(c);
            }
        }
    }
    table
}

fn square_zero_table(rng: &mut ChaCha8Rng) -> Vec<Vec<Vec<Q>>> {
    // Basis 1, x + a, y + b of Q[x, y]/(x, y)².
    let (a, b) = (rng.gen_range(-2..=2i64), rng.gen_range(-2..=2i64));
    let mut t = vec![vec![vec![qi(0); 3]; 3]; 3];
    for i in 0..3 {
        t[0][i][i] = qi(1);
        t[i][0][i] = qi(1);
    }
    t[1][1] = vec![qi(-a * a), qi(2 * a), qi(0)];
    t[2][2] = vec![qi(-b * b), qi(0), qi(2 * b)];
    t[1][2] = vec![qi(-a * b), qi(b), qi(a)];
    t[2][1] = t[1][2].clone();
    t
}

pub fn sample_algebra(rng: &mut ChaCha8Rng) -> Sample {
    let (shape, table) = if rng.gen_bool(0.12) {
        (Shape::SquareZero, square_zero_table(rng))
    } else {
        let m = random_modulus(rng);
        let t = monogenic_table(&m, rng);
        (Shape::Monogenic(m), t)
    };
    let names = (0..table.len()).map(|i| format!("b{i}")).collect();
    Sample {
        shape,
        algebra: QuantumAlgebra::new(names, table).expect("square table"),
    }
}

/// Brute-force answer to "is there a field summand Q?".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Brute {
    /// An idempotent e with dim(eA) = 1 was found.
    Yes,
    /// N − 1 independent nilpotents were found, so A is local with residue
    /// field Q and has no field summand.
    No,
    Inconclusive,
}

/// Elements with coordinates k/D, |k| ≤ 5, for a common D ≤ 4.
fn box_points(n: usize) -> Vec<Vec<Q>> {
    let mut out = Vec::new();
    for den in 1..=4i64 {
        let mut idx = vec![-5i64; n];
        'odometer: loop {
            out.push(idx.iter().map(|&k| q(k, den)).collect());
            for slot in idx.iter_mut() {
                *slot += 1;
                if *slot <= 5 {
                    continue 'odometer;
                }
                *slot = -5;
            }
            break;
        }
    }
    out
}

pub fn brute_force(alg: &QuantumAlgebra<Q>) -> Brute {
    let n = alg.dim();
    let pts = box_points(n);
    for e in &pts {
        if alg.product(e, e) == *e && alg.mult_matrix(e).rank() == 1 {
            return Brute::Yes;
        }
    }
    if n < 2 {
        return Brute::Inconclusive;
    }
    let nilpotent: Vec<&Vec<Q>> = pts
        .iter()
        .filter(|v| v.iter().any(|c| *c != qi(0)))
        .filter(|v| alg.power(v, n as u32).iter().all(|c| *c == qi(0)))
        .collect();
    let mut span: Vec<Vec<Q>> = Vec::new();
    for v in nilpotent {
        let mut rows = span.clone();
        rows.push(v.clone());
        if qhkit::polycore::Matrix::from_rows(rows.clone()).expect("rows").rank() == rows.len() {
            span = rows;
            if span.len() == n - 1 {
                return Brute::No;
            }
        }
    }
    Brute::Inconclusive
}
