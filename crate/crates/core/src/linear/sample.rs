//! Random instances for property tests and benchmarks.
//!
//! Quadruples `(a, b, d, s)` are assembled block-diagonally from pieces
//! that satisfy the quadruple conditions by construction, then conjugated
//! by a random invertible matrix.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{
    is_zero_vec, vector_at, AffineSolution, LinearSolution, ModMatrix, QuadrupleABDS, affine_extend,
    carrier_size,
};

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, m: i64, k: usize) -> ModMatrix {
    let e = (0..k * k).map(|_| rng.gen_range(0..m)).collect();
    ModMatrix::new(m, k, e).expect("valid shape")
}

pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, m: i64, k: usize) -> ModMatrix {
    loop {
        let a = random_matrix(rng, m, k);
        if a.is_invertible() {
            return a;
        }
    }
}

fn random_unit<R: Rng + ?Sized>(rng: &mut R, m: i64) -> i64 {
    loop {
        let v = rng.gen_range(1..m);
        if super::inverse_mod(v, m).is_some() {
            return v;
        }
    }
}

/// `c0 + c1 x + c2 x^2` with random coefficients, retried until `accept`.
fn random_poly_in<R: Rng + ?Sized>(rng: &mut R, x: &ModMatrix, accept: impl Fn(&ModMatrix) -> bool) -> ModMatrix {
    let (m, k) = (x.modulus(), x.dim());
    let x2 = x * x;
    loop {
        let c: [i64; 3] = [rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m)];
        let p = &(&ModMatrix::scalar(m, k, c[0]) + &x.scale(c[1])) + &x2.scale(c[2]);
        if accept(&p) {
            return p;
        }
    }
}

/// `(a, b, d)` from an invertible triple `(p, q, z)`.
fn abd(p: &ModMatrix, q: &ModMatrix, z: &ModMatrix) -> (ModMatrix, ModMatrix, ModMatrix) {
    let p_inv = p.inverse().expect("p invertible");
    let z_inv = z.inverse().expect("z invertible");
    let a = (z * &p_inv).one_minus();
    let d = (&(&(p * &z_inv) * q) * &p_inv).one_minus();
    (a, p_inv, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Block {
    DiagonalPqz,
    ZEqualsP,
    ZEqualsQ,
    SquareZero,
    Defect,
}

fn block<R: Rng + ?Sized>(rng: &mut R, m: i64, r: usize, kind: Block) -> QuadrupleABDS {
    let zero = ModMatrix::zero(m, r);
    let (a, b, d, s) = match kind {
        Block::DiagonalPqz => {
            let p: Vec<i64> = (0..r).map(|_| random_unit(rng, m)).collect();
            let q: Vec<i64> = (0..r).map(|_| random_unit(rng, m)).collect();
            let z: Vec<i64> = (0..r).map(|i| if rng.gen_bool(0.5) { p[i] } else { q[i] }).collect();
            let (a, b, d) = abd(&ModMatrix::diagonal(m, &p), &ModMatrix::diagonal(m, &q), &ModMatrix::diagonal(m, &z));
            (a, b, d, zero)
        }
        Block::ZEqualsP | Block::ZEqualsQ => {
            let p = random_invertible(rng, m, r);
            let q = random_poly_in(rng, &p, ModMatrix::is_invertible);
            let (p, q) = if kind == Block::ZEqualsP { (p, q) } else { (q, p) };
            let z = if kind == Block::ZEqualsP { p.clone() } else { q.clone() };
            let (a, b, d) = abd(&p, &q, &z);
            (a, b, d, zero)
        }
        Block::SquareZero => {
            // p = 1 + e1, q = 1 - e1, z = 1 + e2 with e1^2 = e2^2 = 0.
            let square_zero = |rng: &mut R| {
                let mut n = ModMatrix::zero(m, r).rows();
                n[0][r - 1] = rng.gen_range(0..m);
                let n = ModMatrix::from_rows(m, &n).expect("square");
                let g = random_invertible(rng, m, r);
                &(&g * &n) * &g.inverse().expect("invertible")
            };
            let e1 = square_zero(rng);
            let e2 = square_zero(rng);
            let (a, b, d) = abd(&e1.one_plus(), &e1.one_minus(), &e2.one_plus());
            (a, b, d, zero)
        }
        Block::Defect => {
            let b = random_invertible(rng, m, r);
            let s = random_poly_in(rng, &b, |s| s.one_plus().is_invertible());
            (zero.clone(), b, zero, s)
        }
    };
    QuadrupleABDS { a, b, d, s }
}

fn direct_sum(parts: &[ModMatrix]) -> ModMatrix {
    let m = parts[0].modulus();
    let k: usize = parts.iter().map(ModMatrix::dim).sum();
    let mut e = vec![0; k * k];
    let mut off = 0;
    for p in parts {
        let r = p.dim();
        for i in 0..r {
            for j in 0..r {
                e[(off + i) * k + off + j] = p.get(i, j);
            }
        }
        off += r;
    }
    ModMatrix::new(m, k, e).expect("square")
}

/// A random quadruple satisfying the quadruple conditions. With
/// `allow_defect = false` the defect `s` is zero.
pub fn random_quadruple<R: Rng + ?Sized>(rng: &mut R, m: i64, k: usize, allow_defect: bool) -> QuadrupleABDS {
    let mut sizes = Vec::new();
    let mut left = k;
    while left > 0 {
        let r = rng.gen_range(1..=left);
        sizes.push(r);
        left -= r;
    }
    let mut kinds = vec![Block::DiagonalPqz, Block::ZEqualsP, Block::ZEqualsQ];
    if allow_defect {
        kinds.push(Block::Defect);
    }
    let blocks: Vec<QuadrupleABDS> = sizes
        .iter()
        .map(|&r| {
            let mut choices = kinds.clone();
            if r >= 2 {
                choices.push(Block::SquareZero);
            }
            let kind = *choices.choose(rng).expect("nonempty");
            block(rng, m, r, kind)
        })
        .collect();
    let pick = |f: fn(&QuadrupleABDS) -> &ModMatrix| direct_sum(&blocks.iter().map(|b| f(b).clone()).collect::<Vec<_>>());
    let (a, b, d, s) = (pick(|q| &q.a), pick(|q| &q.b), pick(|q| &q.d), pick(|q| &q.s));
    let g = random_invertible(rng, m, k);
    let gi = g.inverse().expect("invertible");
    let conj = |x: &ModMatrix| &(&g * x) * &gi;
    QuadrupleABDS {
        a: conj(&a),
        b: conj(&b),
        d: conj(&d),
        s: conj(&s),
    }
}

/// Adds a random nonzero matrix to one of `a, b, c, d`.
pub fn perturb<R: Rng + ?Sized>(rng: &mut R, l: &LinearSolution) -> LinearSolution {
    let (m, k) = (l.modulus(), l.dim());
    let delta = loop {
        let x = random_matrix(rng, m, k);
        if !x.is_zero() {
            break x;
        }
    };
    let mut out = l.clone();
    let slot = match rng.gen_range(0..4) {
        0 => &mut out.a,
        1 => &mut out.b,
        2 => &mut out.c,
        _ => &mut out.d,
    };
    *slot = &*slot + &delta;
    out
}

/// A random affine extension of `l`: `zvec` is random and `kvec` is drawn
/// uniformly from the vectors allowed for it (retrying `zvec` when none is).
/// Needs `(Z_m)^k` small enough to scan.
pub fn random_affine<R: Rng + ?Sized>(rng: &mut R, l: &LinearSolution) -> AffineSolution {
    let (m, k) = (l.modulus(), l.dim());
    let size = carrier_size(m, k).expect("small carrier") as usize;
    let s = l.s();
    let b1 = &l.b - &ModMatrix::identity(m, k);
    loop {
        let z = vector_at(rng.gen_range(0..size), m, k);
        let sz = s.apply(&z);
        let ks: Vec<Vec<i64>> = (0..size)
            .map(|i| vector_at(i, m, k))
            .filter(|kv| is_zero_vec(&l.a.apply(kv)) && is_zero_vec(&l.d.apply(kv)) && b1.apply(kv) == sz)
            .collect();
        if let Some(kv) = ks.choose(rng) {
            return affine_extend(l, &z, kv).expect("constraints hold by construction");
        }
    }
}
