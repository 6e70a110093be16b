//! Linear and affine solutions on `X = (Z_m)^k`:
//! `S(x, y) = (ax + by + z, cx + dy + t)` with `a, b, c, d` in `End(X)`.
//!
//! Matrices act on column vectors; products compose right to left, so
//! `(ab)x = a(bx)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use serde::Serialize;

use crate::braided::BraidedMap;
use crate::error::{Error, Result};

pub mod sample;

/// A `k x k` matrix over `Z_m`, entries in `[0, m)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    m: i64,
    k: usize,
    e: Vec<i64>,
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z{}{:?}", self.m, self.rows())
    }
}

impl ModMatrix {
    pub fn new(m: i64, k: usize, entries: Vec<i64>) -> Result<Self> {
        if m < 2 {
            return Err(Error::ShapeMismatch(format!("modulus {m} must be at least 2")));
        }
        if k == 0 || entries.len() != k * k {
            return Err(Error::ShapeMismatch(format!(
                "{} entries do not form a nonempty square matrix of size {k}",
                entries.len()
            )));
        }
        Ok(ModMatrix {
            m,
            k,
            e: entries.into_iter().map(|v| v.rem_euclid(m)).collect(),
        })
    }

    pub fn from_rows(m: i64, rows: &[Vec<i64>]) -> Result<Self> {
        let k = rows.len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::ShapeMismatch("matrix rows must form a square".into()));
        }
        Self::new(m, k, rows.concat())
    }

    pub fn zero(m: i64, k: usize) -> Self {
        Self::scalar(m, k, 0)
    }

    pub fn identity(m: i64, k: usize) -> Self {
        Self::scalar(m, k, 1)
    }

    pub fn scalar(m: i64, k: usize, v: i64) -> Self {
        let mut e = vec![0; k * k];
        for i in 0..k {
            e[i * k + i] = v.rem_euclid(m);
        }
        ModMatrix { m, k, e }
    }

    pub fn diagonal(m: i64, diag: &[i64]) -> Self {
        let k = diag.len();
        let mut e = vec![0; k * k];
        for (i, v) in diag.iter().enumerate() {
            e[i * k + i] = v.rem_euclid(m);
        }
        ModMatrix { m, k, e }
    }

    pub fn modulus(&self) -> i64 {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.e[i * self.k + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.e.chunks(self.k).map(<[i64]>::to_vec).collect()
    }

    pub fn same_shape(&self, other: &ModMatrix) -> bool {
        self.m == other.m && self.k == other.k
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.m, self.k)
    }

    pub fn commutes_with(&self, other: &ModMatrix) -> bool {
        self * other == other * self
    }

    /// `1 - self`.
    pub fn one_minus(&self) -> ModMatrix {
        &Self::identity(self.m, self.k) - self
    }

    /// `1 + self`.
    pub fn one_plus(&self) -> ModMatrix {
        &Self::identity(self.m, self.k) + self
    }

    pub fn scale(&self, v: i64) -> ModMatrix {
        self.map(|x| x * v)
    }

    fn map(&self, f: impl Fn(i64) -> i64) -> ModMatrix {
        ModMatrix {
            m: self.m,
            k: self.k,
            e: self.e.iter().map(|&x| f(x).rem_euclid(self.m)).collect(),
        }
    }

    pub fn pow(&self, mut exp: u64) -> ModMatrix {
        let mut base = self.clone();
        let mut acc = Self::identity(self.m, self.k);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    pub fn transpose(&self) -> ModMatrix {
        let k = self.k;
        let e = (0..k * k).map(|i| self.get(i % k, i / k)).collect();
        ModMatrix { m: self.m, k, e }
    }

    /// Matrix-vector product. Panics on a length mismatch.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.k, "vector length");
        (0..self.k)
            .map(|i| {
                let row = &self.e[i * self.k..(i + 1) * self.k];
                row.iter().zip(v).fold(0i64, |acc, (a, b)| (acc + a * b).rem_euclid(self.m))
            })
            .collect()
    }

    /// Determinant mod `m` by cofactor expansion.
    pub fn det(&self) -> i64 {
        det_mod(&self.e, self.k, self.m)
    }

    pub fn is_invertible(&self) -> bool {
        self.det().gcd(&self.m) == 1
    }

    /// Transposed cofactor matrix, `adj(A) A = det(A) 1`.
    pub fn adjugate(&self) -> ModMatrix {
        let k = self.k;
        if k == 1 {
            return Self::identity(self.m, 1);
        }
        let mut e = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                let minor: Vec<i64> = (0..k)
                    .filter(|&r| r != i)
                    .flat_map(|r| (0..k).filter(move |&c| c != j).map(move |c| (r, c)))
                    .map(|(r, c)| self.get(r, c))
                    .collect();
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                e[j * k + i] = (sign * det_mod(&minor, k - 1, self.m)).rem_euclid(self.m);
            }
        }
        ModMatrix { m: self.m, k, e }
    }

    pub fn inverse(&self) -> Option<ModMatrix> {
        let det_inv = inverse_mod(self.det(), self.m)?;
        Some(self.adjugate().scale(det_inv))
    }
}

fn det_mod(e: &[i64], k: usize, m: i64) -> i64 {
    match k {
        0 => 1 % m,
        1 => e[0].rem_euclid(m),
        2 => (e[0] * e[3] - e[1] * e[2]).rem_euclid(m),
        _ => {
            let mut acc = 0i64;
            for j in 0..k {
                if e[j] == 0 {
                    continue;
                }
                let minor: Vec<i64> = (1..k)
                    .flat_map(|r| (0..k).filter(move |&c| c != j).map(move |c| (r, c)))
                    .map(|(r, c)| e[r * k + c])
                    .collect();
                let term = e[j] * det_mod(&minor, k - 1, m) % m;
                acc = if j % 2 == 0 { acc + term } else { acc - term }.rem_euclid(m);
            }
            acc
        }
    }
}

pub fn inverse_mod(v: i64, m: i64) -> Option<i64> {
    let e = v.rem_euclid(m).extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

impl Add for &ModMatrix {
    type Output = ModMatrix;
    fn add(self, rhs: &ModMatrix) -> ModMatrix {
        assert!(self.same_shape(rhs), "shape mismatch");
        let e = self.e.iter().zip(&rhs.e).map(|(a, b)| (a + b) % self.m).collect();
        ModMatrix { m: self.m, k: self.k, e }
    }
}

impl Sub for &ModMatrix {
    type Output = ModMatrix;
    fn sub(self, rhs: &ModMatrix) -> ModMatrix {
        assert!(self.same_shape(rhs), "shape mismatch");
        let e = self.e.iter().zip(&rhs.e).map(|(a, b)| (a - b).rem_euclid(self.m)).collect();
        ModMatrix { m: self.m, k: self.k, e }
    }
}

impl Neg for &ModMatrix {
    type Output = ModMatrix;
    fn neg(self) -> ModMatrix {
        self.map(|x| -x)
    }
}

impl Mul for &ModMatrix {
    type Output = ModMatrix;
    fn mul(self, rhs: &ModMatrix) -> ModMatrix {
        assert!(self.same_shape(rhs), "shape mismatch");
        let k = self.k;
        let mut e = vec![0; k * k];
        for i in 0..k {
            for l in 0..k {
                let a = self.e[i * k + l];
                if a == 0 {
                    continue;
                }
                for j in 0..k {
                    e[i * k + j] = (e[i * k + j] + a * rhs.e[l * k + j]) % self.m;
                }
            }
        }
        ModMatrix { m: self.m, k, e }
    }
}

fn require_same_shape(ms: &[&ModMatrix]) -> Result<()> {
    let first = ms[0];
    if ms.iter().all(|x| x.same_shape(first)) {
        Ok(())
    } else {
        Err(Error::ShapeMismatch("matrices differ in modulus or size".into()))
    }
}

fn require_vector(v: &[i64], like: &ModMatrix, name: &str) -> Result<Vec<i64>> {
    if v.len() != like.k {
        return Err(Error::ShapeMismatch(format!(
            "{name} has length {}, expected {}",
            v.len(),
            like.k
        )));
    }
    Ok(v.iter().map(|x| x.rem_euclid(like.m)).collect())
}

fn add_vec(u: &[i64], v: &[i64], m: i64) -> Vec<i64> {
    u.iter().zip(v).map(|(a, b)| (a + b).rem_euclid(m)).collect()
}

fn sub_vec(u: &[i64], v: &[i64], m: i64) -> Vec<i64> {
    u.iter().zip(v).map(|(a, b)| (a - b).rem_euclid(m)).collect()
}

fn is_zero_vec(v: &[i64]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Names of the braid identities on `(a, b, c, d)` that fail.
pub fn linear_relation_failures(
    a: &ModMatrix,
    b: &ModMatrix,
    c: &ModMatrix,
    d: &ModMatrix,
) -> Result<Vec<&'static str>> {
    require_same_shape(&[a, b, c, d])?;
    let (one_a, one_d) = (a.one_minus(), d.one_minus());
    let checks = [
        ("a(1-a) = bac", a * &one_a == &(b * a) * c),
        ("d(1-d) = cdb", d * &one_d == &(c * d) * b),
        ("ab = ba(1-d)", a * b == &(b * a) * &one_d),
        ("ca = (1-d)ac", c * a == &(&one_d * a) * c),
        ("dc = cd(1-a)", d * c == &(c * d) * &one_a),
        ("bd = (1-a)db", b * d == &(&one_a * d) * b),
        ("cb - bc = ada - dad", &(c * b) - &(b * c) == &(&(a * d) * a) - &(&(d * a) * d)),
        ("b invertible", b.is_invertible()),
        ("c invertible", c.is_invertible()),
    ];
    Ok(checks.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect())
}

/// The seven braid identities hold and `b`, `c` are invertible.
pub fn check_linear_relations(a: &ModMatrix, b: &ModMatrix, c: &ModMatrix, d: &ModMatrix) -> Result<bool> {
    Ok(linear_relation_failures(a, b, c, d)?.is_empty())
}

/// `s = bc - (1 - d + ad)(1 - a)`, without checking the relations.
fn s_defect(a: &ModMatrix, b: &ModMatrix, c: &ModMatrix, d: &ModMatrix) -> ModMatrix {
    let left = &d.one_minus() + &(a * d);
    &(b * c) - &(&left * &a.one_minus())
}

pub fn s_of(a: &ModMatrix, b: &ModMatrix, c: &ModMatrix, d: &ModMatrix) -> Result<ModMatrix> {
    let failures = linear_relation_failures(a, b, c, d)?;
    if !failures.is_empty() {
        return Err(Error::NotASolution(failures.join(", ")));
    }
    Ok(s_defect(a, b, c, d))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearSolution {
    pub a: ModMatrix,
    pub b: ModMatrix,
    pub c: ModMatrix,
    pub d: ModMatrix,
}

impl LinearSolution {
    /// Validated constructor.
    pub fn new(a: ModMatrix, b: ModMatrix, c: ModMatrix, d: ModMatrix) -> Result<Self> {
        let failures = linear_relation_failures(&a, &b, &c, &d)?;
        if !failures.is_empty() {
            return Err(Error::NotASolution(failures.join(", ")));
        }
        Ok(LinearSolution { a, b, c, d })
    }

    /// No relation checks; shapes must still agree.
    pub fn unchecked(a: ModMatrix, b: ModMatrix, c: ModMatrix, d: ModMatrix) -> Result<Self> {
        require_same_shape(&[&a, &b, &c, &d])?;
        Ok(LinearSolution { a, b, c, d })
    }

    pub fn flip(m: i64, k: usize) -> Self {
        let (zero, one) = (ModMatrix::zero(m, k), ModMatrix::identity(m, k));
        LinearSolution {
            a: zero.clone(),
            b: one.clone(),
            c: one,
            d: zero,
        }
    }

    /// `S(x, y) = (on_y y, on_x x)`.
    pub fn permutation_type(on_y: ModMatrix, on_x: ModMatrix) -> Result<Self> {
        let zero = ModMatrix::zero(on_y.modulus(), on_y.dim());
        Self::new(zero.clone(), on_y, on_x, zero)
    }

    pub fn modulus(&self) -> i64 {
        self.a.modulus()
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn is_valid(&self) -> bool {
        check_linear_relations(&self.a, &self.b, &self.c, &self.d).unwrap_or(false)
    }

    pub fn s(&self) -> ModMatrix {
        s_defect(&self.a, &self.b, &self.c, &self.d)
    }

    pub fn apply(&self, x: &[i64], y: &[i64]) -> (Vec<i64>, Vec<i64>) {
        let m = self.modulus();
        (
            add_vec(&self.a.apply(x), &self.b.apply(y), m),
            add_vec(&self.c.apply(x), &self.d.apply(y), m),
        )
    }

    pub fn to_quadruple(&self) -> Result<QuadrupleABDS> {
        let s = s_of(&self.a, &self.b, &self.c, &self.d)?;
        Ok(QuadrupleABDS {
            a: self.a.clone(),
            b: self.b.clone(),
            d: self.d.clone(),
            s,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadrupleABDS {
    pub a: ModMatrix,
    pub b: ModMatrix,
    pub d: ModMatrix,
    pub s: ModMatrix,
}

impl QuadrupleABDS {
    pub fn validate(&self) -> Result<()> {
        let (a, b, d, s) = (&self.a, &self.b, &self.d, &self.s);
        require_same_shape(&[a, b, d, s])?;
        let fail = |what: &str| Err(Error::InvariantViolation(what.to_string()));
        if !a.one_minus().is_invertible() {
            return fail("1-a is not invertible");
        }
        if !d.one_minus().is_invertible() {
            return fail("1-d is not invertible");
        }
        let Some(b_inv) = b.inverse() else {
            return fail("b is not invertible");
        };
        if !s.one_plus().is_invertible() {
            return fail("1+s is not invertible");
        }
        if !s.commutes_with(a) || !s.commutes_with(b) || !s.commutes_with(d) {
            return fail("s does not commute with a, b and d");
        }
        if !(s * a).is_zero() || !(s * d).is_zero() {
            return fail("sa or sd is nonzero");
        }
        if &(b * d) * &b_inv != &a.one_minus() * d {
            return fail("bdb^-1 != (1-a)d");
        }
        if &(&b_inv * a) * b != a * &d.one_minus() {
            return fail("b^-1ab != a(1-d)");
        }
        Ok(())
    }
}

/// `c = b^{-1}((1 - d + ad)(1 - a) + s)`.
pub fn quadruple_to_solution(q: &QuadrupleABDS) -> Result<LinearSolution> {
    q.validate()?;
    let b_inv = q.b.inverse().expect("validated");
    let left = &q.d.one_minus() + &(&q.a * &q.d);
    let c = &b_inv * &(&(&left * &q.a.one_minus()) + &q.s);
    LinearSolution::new(q.a.clone(), q.b.clone(), c, q.d.clone())
}

/// Injective iff the s-defect vanishes.
pub fn is_injective_linear(l: &LinearSolution) -> bool {
    l.s().is_zero()
}

/// Coefficients `(u, w)` with `phi(y, z) = u z + w y`:
/// `u = 1 - (1-d)(1-a)`, `w = (1-d)(1-a) + s`.
pub fn phi_closed_form(l: &LinearSolution) -> (ModMatrix, ModMatrix) {
    let k = &l.d.one_minus() * &l.a.one_minus();
    (k.one_minus(), &k + &l.s())
}

/// `(ax + by, cx + (d - s)y)`.
pub fn hat_solution(l: &LinearSolution) -> LinearSolution {
    let d = &l.d - &l.s();
    LinearSolution {
        a: l.a.clone(),
        b: l.b.clone(),
        c: l.c.clone(),
        d,
    }
}

/// `(ax + by, cx + (d + s)y)` for an injective `l` and a perturbation `s`
/// with `sa = as = 0`, `sb = bs`, `sd = ds = -s^2`, `sc = cs`.
pub fn breve_solution(l: &LinearSolution, s: &ModMatrix) -> Result<LinearSolution> {
    require_same_shape(&[&l.a, s])?;
    let bad = |what: &str| Err(Error::BadPerturbation(what.to_string()));
    if !l.is_valid() {
        return bad("base is not a linear solution");
    }
    if !is_injective_linear(l) {
        return bad("base solution is not injective");
    }
    if !(s * &l.a).is_zero() || !(&l.a * s).is_zero() {
        return bad("sa = as = 0 fails");
    }
    if !s.commutes_with(&l.b) {
        return bad("sb = bs fails");
    }
    let minus_s2 = -&(s * s);
    if s * &l.d != minus_s2 || &l.d * s != minus_s2 {
        return bad("sd = ds = -s^2 fails");
    }
    if !s.commutes_with(&l.c) {
        return bad("sc = cs fails");
    }
    let out = LinearSolution {
        a: l.a.clone(),
        b: l.b.clone(),
        c: l.c.clone(),
        d: &l.d + s,
    };
    if !out.is_valid() {
        return bad("perturbed map is not a solution");
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplePQZ {
    pub p: ModMatrix,
    pub q: ModMatrix,
    pub zauto: ModMatrix,
}

impl TriplePQZ {
    pub fn validate(&self) -> Result<()> {
        let (p, q, z) = (&self.p, &self.q, &self.zauto);
        require_same_shape(&[p, q, z])?;
        let fail = |what: &str| Err(Error::InvariantViolation(what.to_string()));
        if !p.is_invertible() || !q.is_invertible() || !z.is_invertible() {
            return fail("p, q and zauto must be invertible");
        }
        if !p.commutes_with(q) {
            return fail("pq != qp");
        }
        let quad = &(&(z * z) - &(z * &(p + q))) + &(p * q);
        if !quad.is_zero() {
            return fail("zauto^2 - zauto(p+q) + pq != 0");
        }
        Ok(())
    }
}

/// `p = b^{-1}`, `q = (1-a)(1-d)b^{-1}`, `zauto = (1-a)b^{-1}`.
pub fn pqz_from_abd(a: &ModMatrix, b: &ModMatrix, d: &ModMatrix) -> Result<TriplePQZ> {
    require_same_shape(&[a, b, d])?;
    let fail = |what: &str| Err(Error::InvariantViolation(what.to_string()));
    let Some(b_inv) = b.inverse() else {
        return fail("b is not invertible");
    };
    let (one_a, one_d) = (a.one_minus(), d.one_minus());
    if !one_a.is_invertible() || !one_d.is_invertible() {
        return fail("1-a or 1-d is not invertible");
    }
    if &(b * d) * &b_inv != &one_a * d {
        return fail("bdb^-1 != (1-a)d");
    }
    if &(&b_inv * a) * b != a * &one_d {
        return fail("b^-1ab != a(1-d)");
    }
    let t = TriplePQZ {
        q: &(&one_a * &one_d) * &b_inv,
        zauto: &one_a * &b_inv,
        p: b_inv,
    };
    t.validate()?;
    Ok(t)
}

/// Inverse change of variables: `b = p^{-1}`, `a = 1 - zauto p^{-1}`,
/// `d = 1 - p zauto^{-1} q p^{-1}`.
pub fn abd_from_pqz(t: &TriplePQZ) -> Result<(ModMatrix, ModMatrix, ModMatrix)> {
    t.validate()?;
    let p_inv = t.p.inverse().expect("validated");
    let z_inv = t.zauto.inverse().expect("validated");
    let a = (&t.zauto * &p_inv).one_minus();
    let d = (&(&(&t.p * &z_inv) * &t.q) * &p_inv).one_minus();
    Ok((a, p_inv, d))
}

/// The injective linear solution of a triple (`s = 0`).
pub fn solution_from_pqz(t: &TriplePQZ) -> Result<LinearSolution> {
    let (a, b, d) = abd_from_pqz(t)?;
    let s = ModMatrix::zero(a.modulus(), a.dim());
    quadruple_to_solution(&QuadrupleABDS { a, b, d, s })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    pub linear: LinearSolution,
    pub zvec: Vec<i64>,
    pub tvec: Vec<i64>,
}

/// Names of the failing vector identities `cdz + dt = 0`, `az + bat = 0`,
/// `(c + d - ad - 1)z + (da + 1 - a - b)t = 0`.
pub fn affine_relation_failures(l: &LinearSolution, zvec: &[i64], tvec: &[i64]) -> Result<Vec<&'static str>> {
    let z = require_vector(zvec, &l.a, "zvec")?;
    let t = require_vector(tvec, &l.a, "tvec")?;
    let m = l.modulus();
    let (a, b, c, d) = (&l.a, &l.b, &l.c, &l.d);
    let one = ModMatrix::identity(m, l.dim());
    let first = add_vec(&(c * d).apply(&z), &d.apply(&t), m);
    let second = add_vec(&a.apply(&z), &(b * a).apply(&t), m);
    let zc = &(&(c + d) - &(a * d)) - &one;
    let tc = &(&(&(d * a) + &one) - a) - b;
    let third = add_vec(&zc.apply(&z), &tc.apply(&t), m);
    let checks = [
        ("cdz + dt = 0", is_zero_vec(&first)),
        ("az + bat = 0", is_zero_vec(&second)),
        ("(c+d-ad-1)z + (da+1-a-b)t = 0", is_zero_vec(&third)),
    ];
    Ok(checks.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect())
}

impl AffineSolution {
    /// Validated constructor: `linear` must be a solution and the vector
    /// identities must hold.
    pub fn new(linear: LinearSolution, zvec: Vec<i64>, tvec: Vec<i64>) -> Result<Self> {
        let failures = linear_relation_failures(&linear.a, &linear.b, &linear.c, &linear.d)?;
        if !failures.is_empty() {
            return Err(Error::NotASolution(failures.join(", ")));
        }
        let failures = affine_relation_failures(&linear, &zvec, &tvec)?;
        if !failures.is_empty() {
            return Err(Error::ConstraintViolation(failures.join(", ")));
        }
        let m = linear.modulus();
        Ok(AffineSolution {
            zvec: zvec.iter().map(|v| v.rem_euclid(m)).collect(),
            tvec: tvec.iter().map(|v| v.rem_euclid(m)).collect(),
            linear,
        })
    }

    pub fn apply(&self, x: &[i64], y: &[i64]) -> (Vec<i64>, Vec<i64>) {
        let m = self.linear.modulus();
        let (u, v) = self.linear.apply(x, y);
        (add_vec(&u, &self.zvec, m), add_vec(&v, &self.tvec, m))
    }

    /// `k = t + c(1-a)^{-1}z`.
    pub fn kvec(&self) -> Vec<i64> {
        let l = &self.linear;
        let inv = l.a.one_minus().inverse().expect("1-a is invertible for a solution");
        add_vec(&self.tvec, &(&l.c * &inv).apply(&self.zvec), l.modulus())
    }
}

/// `t = -c(1-a)^{-1}z + k`, given `ak = dk = 0` and `(b-1)k = sz`.
pub fn affine_extend(l: &LinearSolution, zvec: &[i64], kvec: &[i64]) -> Result<AffineSolution> {
    let z = require_vector(zvec, &l.a, "zvec")?;
    let k = require_vector(kvec, &l.a, "kvec")?;
    let m = l.modulus();
    let bad = |what: &str| Err(Error::ConstraintViolation(what.to_string()));
    let Some(inv) = l.a.one_minus().inverse() else {
        return bad("1-a is not invertible");
    };
    if !is_zero_vec(&l.a.apply(&k)) || !is_zero_vec(&l.d.apply(&k)) {
        return bad("ak = dk = 0 fails");
    }
    let b1 = &l.b - &ModMatrix::identity(m, l.dim());
    if b1.apply(&k) != l.s().apply(&z) {
        return bad("(b-1)k = sz fails");
    }
    let t = sub_vec(&k, &(&l.c * &inv).apply(&z), m);
    AffineSolution::new(l.clone(), z, t)
}

/// Injective iff the linear part is injective and `k = 0`.
pub fn is_injective_affine(s: &AffineSolution) -> bool {
    is_injective_linear(&s.linear) && is_zero_vec(&s.kvec())
}

/// Index of a vector in the lexicographic enumeration of `(Z_m)^k`.
pub fn vector_index(v: &[i64], m: i64) -> usize {
    v.iter().fold(0usize, |acc, &x| acc * m as usize + x.rem_euclid(m) as usize)
}

pub fn vector_at(mut idx: usize, m: i64, k: usize) -> Vec<i64> {
    let mut v = vec![0; k];
    for slot in v.iter_mut().rev() {
        *slot = (idx % m as usize) as i64;
        idx /= m as usize;
    }
    v
}

/// Either kind of matrix-defined solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixSolution {
    Linear(LinearSolution),
    Affine(AffineSolution),
}

impl MatrixSolution {
    fn linear(&self) -> &LinearSolution {
        match self {
            MatrixSolution::Linear(l) => l,
            MatrixSolution::Affine(a) => &a.linear,
        }
    }

    pub fn apply(&self, x: &[i64], y: &[i64]) -> (Vec<i64>, Vec<i64>) {
        match self {
            MatrixSolution::Linear(l) => l.apply(x, y),
            MatrixSolution::Affine(a) => a.apply(x, y),
        }
    }
}

impl From<LinearSolution> for MatrixSolution {
    fn from(l: LinearSolution) -> Self {
        MatrixSolution::Linear(l)
    }
}

impl From<AffineSolution> for MatrixSolution {
    fn from(a: AffineSolution) -> Self {
        MatrixSolution::Affine(a)
    }
}

/// Size of `(Z_m)^k`, or `None` on overflow.
pub fn carrier_size(m: i64, k: usize) -> Option<u128> {
    (m as u128).checked_pow(u32::try_from(k).ok()?)
}

/// Table of `S` on `(Z_m)^k`, elements in lexicographic order. The map is
/// not required to be a solution.
pub fn materialize(sol: &MatrixSolution, cap: usize) -> Result<BraidedMap> {
    let l = sol.linear();
    let (m, k) = (l.modulus(), l.dim());
    let size = carrier_size(m, k).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(Error::TooLarge {
            what: "carrier (Z_m)^k",
            size,
            limit: cap as u128,
        });
    }
    let n = size as usize;
    let vecs: Vec<Vec<i64>> = (0..n).map(|i| vector_at(i, m, k)).collect();
    let zero = vec![0; k];
    // S is affine: S(x, y) = S(x, 0) + S(0, y) - S(0, 0)
    let at_x: Vec<(Vec<i64>, Vec<i64>)> = vecs.iter().map(|x| sol.apply(x, &zero)).collect();
    let (u0, v0) = sol.apply(&zero, &zero);
    let at_y: Vec<(Vec<i64>, Vec<i64>)> = vecs
        .iter()
        .map(|y| {
            let (u, v) = sol.apply(&zero, y);
            (sub_vec(&u, &u0, m), sub_vec(&v, &v0, m))
        })
        .collect();
    let mut table = Vec::with_capacity(n * n);
    let mut u = vec![0; k];
    let mut v = vec![0; k];
    for (ux, vx) in &at_x {
        for (uy, vy) in &at_y {
            for i in 0..k {
                u[i] = (ux[i] + uy[i]) % m;
                v[i] = (vx[i] + vy[i]) % m;
            }
            table.push((vector_index(&u, m), vector_index(&v, m)));
        }
    }
    BraidedMap::new(n, table)
}

/// Serializable summary used by the command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearCheck {
    pub valid: bool,
    pub failures: Vec<&'static str>,
    pub injective: Option<bool>,
}
