//! Fixtures, independent oracles and the criterion checks shared by the
//! integration tests and the acceptance harness.
//!
//! Every oracle here recomputes its answer from the raw table or from plain
//! integer matrices, without going through the library routine under test.

#![allow(dead_code)]

use std::collections::BTreeSet;

use braidlab_core::cocycle::{SevenTuple, WordCocycle};
use braidlab_core::enumerate::{enumerate_solutions, search_canonical, write_census, Filter};
use braidlab_core::group::FiniteGroup;
use braidlab_core::injectivity::{is_injective, necessary_conditions};
use braidlab_core::lattice::IntLattice;
use braidlab_core::linear::sample::{perturb, random_affine, random_quadruple};
use braidlab_core::linear::{
    abd_from_pqz, affine_relation_failures, hat_solution, is_injective_affine, is_injective_linear, materialize,
    phi_closed_form, pqz_from_abd, quadruple_to_solution, solution_from_pqz, vector_at, vector_index,
    AffineSolution, LinearSolution, MatrixSolution, ModMatrix,
};
use braidlab_core::quotients::rank;
use braidlab_core::{braided::j_conjugation_holds, BraidedMap, Caps, Parallelism};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

/// Outcome of one criterion: how many items were checked and what failed.
#[derive(Debug, Default)]
pub struct Tally {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }

    pub fn summary(&self) -> String {
        match self.failures.first() {
            None => format!("{} checks", self.checked),
            Some(f) => format!("{} of {} checks failed, first: {f}", self.failures.len(), self.checked),
        }
    }
}

// fixtures

/// Transpositions of `{0,1,2}` as image arrays: (01), (02), (12).
pub const TRANSPOSITIONS: [[usize; 3]; 3] = [[1, 0, 2], [2, 1, 0], [0, 2, 1]];

/// `S(x, y) = (x y x, x)` on the transpositions of S3.
pub fn conjugate_s3() -> BraidedMap {
    let t = TRANSPOSITIONS;
    let mul = |a: &[usize; 3], b: &[usize; 3]| -> [usize; 3] { [a[b[0]], a[b[1]], a[b[2]]] };
    let idx = |p: [usize; 3]| t.iter().position(|q| *q == p).unwrap();
    BraidedMap::from_fn(3, |x, y| (idx(mul(&mul(&t[x], &t[y]), &t[x])), x))
}

pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&i| p[i]).collect()
}

pub fn cycle_count(p: &[usize]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut count = 0;
    for s in 0..p.len() {
        if !seen[s] {
            count += 1;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = p[i];
            }
        }
    }
    count
}

pub fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

// table oracles

pub fn naive_braided(m: &BraidedMap) -> bool {
    let n = m.n();
    let s12 = |t: [usize; 3]| {
        let (a, b) = m.get(t[0], t[1]);
        [a, b, t[2]]
    };
    let s23 = |t: [usize; 3]| {
        let (b, c) = m.get(t[1], t[2]);
        [t[0], b, c]
    };
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| s12(s23(s12([x, y, z]))) == s23(s12(s23([x, y, z]))))))
}

pub fn naive_nondegenerate(m: &BraidedMap) -> bool {
    let n = m.n();
    let perm = |v: Vec<usize>| v.iter().collect::<BTreeSet<_>>().len() == n;
    (0..n).all(|x| perm((0..n).map(|y| m.get(x, y).0).collect()))
        && (0..n).all(|y| perm((0..n).map(|x| m.get(x, y).1).collect()))
}

pub fn naive_bijective(m: &BraidedMap) -> bool {
    let n = m.n();
    (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| m.get(x, y)).collect::<BTreeSet<_>>().len()
        == n * n
}

/// `phi(y, x) = f_x(g_{f_y^{-1}(x)}(y))` straight from the table.
pub fn naive_phi(m: &BraidedMap, y: usize, x: usize) -> usize {
    let n = m.n();
    let w = (0..n).find(|&w| m.get(w, y).1 == x).expect("f_y is onto");
    let g = m.get(w, y).0;
    m.get(g, x).1
}

/// Smallest flattened table over all relabelings, computed independently.
pub fn naive_canonical(m: &BraidedMap) -> Vec<u32> {
    let n = m.n();
    all_perms(n)
        .iter()
        .map(|p| {
            let mut t = vec![0u32; 2 * n * n];
            for x in 0..n {
                for y in 0..n {
                    let (u, v) = m.get(x, y);
                    let i = 2 * (p[x] * n + p[y]);
                    t[i] = p[u] as u32;
                    t[i + 1] = p[v] as u32;
                }
            }
            t
        })
        .min()
        .unwrap()
}

/// Every nondegenerate bijective map on `n` points: rows of `g` and `f`
/// range over all permutations independently.
pub fn all_nondegenerate(n: usize) -> Vec<BraidedMap> {
    let perms = all_perms(n);
    let rows = |k: usize| -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|pre: Vec<usize>| (0..perms.len()).map(move |i| [pre.clone(), vec![i]].concat()))
                .collect();
        }
        out
    };
    let choices = rows(n);
    let mut out = Vec::new();
    for gs in &choices {
        for fs in &choices {
            // g_x(y) = perms[gs[x]][y], f_y(x) = perms[fs[y]][x]
            let m = BraidedMap::from_fn(n, |x, y| (perms[gs[x]][y], perms[fs[y]][x]));
            if naive_bijective(&m) {
                out.push(m);
            }
        }
    }
    out
}

/// Canonical forms of every braided candidate, by brute force.
pub fn naive_census(n: usize) -> BTreeSet<Vec<u32>> {
    all_nondegenerate(n).iter().filter(|m| naive_braided(m)).map(naive_canonical).collect()
}

// criterion 1

pub fn check_fixtures() -> Tally {
    let caps = Caps::default();
    let mut t = Tally::default();
    let c = conjugate_s3();
    t.check(c.check_braided() && naive_braided(&c), || "conjugate: not braided".into());
    t.check(c.check_nondegenerate(), || "conjugate: degenerate".into());
    t.check(c.derived_solution().ok().as_ref() == Some(&c), || "conjugate: S' != S".into());
    t.check(is_injective(&c, &caps).unwrap(), || "conjugate: not injective".into());
    t.check(rank(&c).unwrap() == 1, || "conjugate: rank != 1".into());
    t.check(!c.is_symmetric(), || "conjugate: symmetric".into());

    for n in 1..=4 {
        let perms = all_perms(n);
        for b in &perms {
            for c in &perms {
                let m = BraidedMap::permutation(b, c).unwrap();
                let bc = compose(b, c);
                let commute = bc == compose(c, b);
                t.check(m.check_braided() == commute, || format!("perm b={b:?} c={c:?}: braided != (bc = cb)"));
                if !commute {
                    continue;
                }
                let id: Vec<usize> = (0..n).collect();
                let inj = is_injective(&m, &caps).unwrap();
                t.check(inj == (compose(c, b) == id), || format!("perm b={b:?} c={c:?}: injective != (cb = id)"));
                let phi = m.phi_table().unwrap();
                let phi_ok = (0..n).all(|y| (0..n).all(|x| phi.get(y, x) == bc[y] && naive_phi(&m, y, x) == bc[y]));
                t.check(phi_ok, || format!("perm b={b:?} c={c:?}: phi != bc"));
                t.check(rank(&m).unwrap() == cycle_count(&bc), || format!("perm b={b:?} c={c:?}: rank != cycles of bc"));
            }
        }
    }

    for n in 1..=6 {
        let f = BraidedMap::flip(n);
        t.check(f.is_symmetric(), || format!("flip {n}: not symmetric"));
        t.check(is_injective(&f, &caps).unwrap(), || format!("flip {n}: not injective"));
        t.check(rank(&f).unwrap() == n, || format!("flip {n}: rank != n"));
    }
    t
}

// criterion 2

pub fn check_census(max_n: usize, word_len: usize) -> Tally {
    let caps = Caps::default();
    let mut t = Tally::default();
    for n in 1..=max_n {
        // braid <=> QYBE over every nondegenerate bijective map, braided or not
        for m in all_nondegenerate(n) {
            t.check(m.check_qybe() == naive_braided(&m), || format!("n={n}: QYBE disagrees with braid on {:?}", m.flat()));
        }
        for m in search_canonical(n, Parallelism::default(), 0).unwrap() {
            let tag = || format!("{:?}", m.flat());
            let d = m.derived_solution().unwrap();
            t.check(naive_braided(&d) && naive_nondegenerate(&d), || format!("derived of {} is not a solution", tag()));
            let phi = m.phi_table().unwrap();
            let phi_ok = (0..n).all(|y| (0..n).all(|x| d.get(x, y) == (naive_phi(&m, y, x), x) && phi.get(y, x) == naive_phi(&m, y, x)));
            t.check(phi_ok, || format!("derived table of {} is not (phi(y,x), x)", tag()));
            for k in [2, 3] {
                t.check(j_conjugation_holds(&m, k).unwrap(), || format!("J_{k} conjugation fails on {}", tag()));
            }
            let r = rank(&m).unwrap();
            t.check(r <= n && (r == n) == m.is_symmetric(), || format!("rank {r} vs symmetry on {}", tag()));
            let inj = is_injective(&m, &caps).unwrap();
            t.check(inj == is_injective(&d, &caps).unwrap(), || format!("injectivity differs from derived on {}", tag()));
            if inj {
                t.check(necessary_conditions(&m).unwrap(), || format!("injective but necessary conditions fail on {}", tag()));
            }
            let (words, bad) = WordCocycle::new(&m, &caps).unwrap().check_relations(word_len);
            t.check(words > 0 && bad == 0, || format!("word cocycle: {bad} violations on {}", tag()));
        }
    }
    t
}

// criterion 3

pub fn census_bytes(n: usize, mode: Parallelism, workers: usize) -> Vec<u8> {
    let records = enumerate_solutions(n, Filter::All, mode, workers, &Caps::default()).unwrap();
    let mut out = Vec::new();
    write_census(&records, &mut out).unwrap();
    out
}

pub fn check_enumeration(max_n: usize) -> Tally {
    let mut t = Tally::default();
    for n in 1..=max_n {
        let pruned: BTreeSet<Vec<u32>> = search_canonical(n, Parallelism::default(), 0).unwrap().iter().map(|m| m.flat()).collect();
        let naive = naive_census(n);
        t.check(pruned == naive, || format!("n={n}: pruned {} classes, naive {}", pruned.len(), naive.len()));
        let base = census_bytes(n, Parallelism::Sequential, 1);
        t.check(!base.is_empty(), || format!("n={n}: empty census"));
        for workers in [1, 2, 3, 8] {
            let other = census_bytes(n, Parallelism::Parallel, workers);
            t.check(other == base, || format!("n={n}: census differs with {workers} workers"));
        }
    }
    t
}

// criterion 4: plain i64 matrix oracle

pub type Mat = Vec<Vec<i64>>;

pub fn dense(x: &ModMatrix) -> Mat {
    x.rows()
}

pub struct Ring {
    pub m: i64,
    pub k: usize,
}

impl Ring {
    pub fn eye(&self) -> Mat {
        (0..self.k).map(|i| (0..self.k).map(|j| i64::from(i == j)).collect()).collect()
    }

    pub fn add(&self, x: &Mat, y: &Mat) -> Mat {
        x.iter().zip(y).map(|(r, s)| r.iter().zip(s).map(|(a, b)| (a + b).rem_euclid(self.m)).collect()).collect()
    }

    pub fn sub(&self, x: &Mat, y: &Mat) -> Mat {
        x.iter().zip(y).map(|(r, s)| r.iter().zip(s).map(|(a, b)| (a - b).rem_euclid(self.m)).collect()).collect()
    }

    pub fn mul(&self, x: &Mat, y: &Mat) -> Mat {
        let k = self.k;
        (0..k).map(|i| (0..k).map(|j| (0..k).map(|l| x[i][l] * y[l][j]).sum::<i64>().rem_euclid(self.m)).collect()).collect()
    }

    pub fn mul_all(&self, xs: &[&Mat]) -> Mat {
        xs.iter().fold(self.eye(), |acc, x| self.mul(&acc, x))
    }

    pub fn one_minus(&self, x: &Mat) -> Mat {
        self.sub(&self.eye(), x)
    }

    pub fn is_zero(&self, x: &Mat) -> bool {
        x.iter().flatten().all(|&v| v == 0)
    }

    /// Inverse by exhaustive search over `(Z_m)^{k x k}` when small, else by
    /// solving column by column over all vectors.
    pub fn inverse(&self, x: &Mat) -> Option<Mat> {
        let (m, k) = (self.m, self.k);
        let size = (m as usize).pow(k as u32);
        let vecs: Vec<Vec<i64>> = (0..size).map(|i| vector_at(i, m, k)).collect();
        let apply = |v: &[i64]| -> Vec<i64> { (0..k).map(|i| (0..k).map(|j| x[i][j] * v[j]).sum::<i64>().rem_euclid(m)).collect() };
        let mut cols = Vec::with_capacity(k);
        for c in 0..k {
            let target: Vec<i64> = (0..k).map(|i| i64::from(i == c)).collect();
            cols.push(vecs.iter().find(|v| apply(v) == target)?.clone());
        }
        Some((0..k).map(|i| (0..k).map(|j| cols[j][i]).collect()).collect())
    }

    pub fn apply(&self, x: &Mat, v: &[i64]) -> Vec<i64> {
        (0..self.k).map(|i| (0..self.k).map(|j| x[i][j] * v[j]).sum::<i64>().rem_euclid(self.m)).collect()
    }
}

/// Braid identities, nondegeneracy, the conjugation relations and both
/// `s` relations for a solution `(a, b, c, d)` with defect `s`.
pub fn oracle_linear_identities(l: &LinearSolution, s: &ModMatrix) -> Vec<&'static str> {
    let r = Ring { m: l.modulus(), k: l.dim() };
    let (a, b, c, d, s) = (dense(&l.a), dense(&l.b), dense(&l.c), dense(&l.d), dense(s));
    let mut bad = Vec::new();
    let (ia, id) = (r.one_minus(&a), r.one_minus(&d));
    let (Some(bi), Some(ci)) = (r.inverse(&b), r.inverse(&c)) else {
        return vec!["b or c not invertible"];
    };
    let eq = |x: Mat, y: Mat| x == y;
    let checks: [(&str, bool); 14] = [
        ("a(1-a) = bac", eq(r.mul(&a, &ia), r.mul_all(&[&b, &a, &c]))),
        ("d(1-d) = cdb", eq(r.mul(&d, &id), r.mul_all(&[&c, &d, &b]))),
        ("ab = ba(1-d)", eq(r.mul(&a, &b), r.mul_all(&[&b, &a, &id]))),
        ("ca = (1-d)ac", eq(r.mul(&c, &a), r.mul_all(&[&id, &a, &c]))),
        ("dc = cd(1-a)", eq(r.mul(&d, &c), r.mul_all(&[&c, &d, &ia]))),
        ("bd = (1-a)db", eq(r.mul(&b, &d), r.mul_all(&[&ia, &d, &b]))),
        (
            "cb - bc = ada - dad",
            eq(r.sub(&r.mul(&c, &b), &r.mul(&b, &c)), r.sub(&r.mul_all(&[&a, &d, &a]), &r.mul_all(&[&d, &a, &d]))),
        ),
        (
            "bab^-1(1-d+ad) = a",
            eq(r.mul_all(&[&b, &a, &bi, &r.add(&id, &r.mul(&a, &d))]), a.clone()),
        ),
        ("bdb^-1 = (1-a)d", eq(r.mul_all(&[&b, &d, &bi]), r.mul(&ia, &d))),
        ("cac^-1 = (1-d)a", eq(r.mul_all(&[&c, &a, &ci]), r.mul(&id, &a))),
        (
            "cdc^-1(1-a+da) = d",
            eq(r.mul_all(&[&c, &d, &ci, &r.add(&ia, &r.mul(&d, &a))]), d.clone()),
        ),
        ("bc = (1-d+ad)(1-a) + s", eq(r.mul(&b, &c), r.add(&r.mul(&r.add(&id, &r.mul(&a, &d)), &ia), &s))),
        ("cb = (1-a+da)(1-d) + s", eq(r.mul(&c, &b), r.add(&r.mul(&r.add(&ia, &r.mul(&d, &a)), &id), &s))),
        (
            "sa = as = sd = ds = 0, s commutes with b and c",
            [r.mul(&s, &a), r.mul(&a, &s), r.mul(&s, &d), r.mul(&d, &s)].iter().all(|x| r.is_zero(x))
                && r.mul(&s, &b) == r.mul(&b, &s)
                && r.mul(&s, &c) == r.mul(&c, &s),
        ),
    ];
    for (name, ok) in checks {
        if !ok {
            bad.push(name);
        }
    }
    bad
}

/// `cdz + dt = 0`, `az + bat = 0`, `(c+d-ad-1)z + (da+1-a-b)t = 0`.
pub fn oracle_affine_holds(l: &LinearSolution, z: &[i64], t: &[i64]) -> bool {
    let r = Ring { m: l.modulus(), k: l.dim() };
    let (a, b, c, d) = (dense(&l.a), dense(&l.b), dense(&l.c), dense(&l.d));
    let add = |u: Vec<i64>, v: Vec<i64>| -> Vec<i64> { u.iter().zip(&v).map(|(x, y)| (x + y).rem_euclid(r.m)).collect() };
    let zero = |v: &[i64]| v.iter().all(|&x| x == 0);
    let first = add(r.apply(&r.mul(&c, &d), z), r.apply(&d, t));
    let second = add(r.apply(&a, z), r.apply(&r.mul(&b, &a), t));
    let zc = r.sub(&r.sub(&r.add(&c, &d), &r.mul(&a, &d)), &r.eye());
    let tc = r.sub(&r.sub(&r.add(&r.mul(&d, &a), &r.eye()), &a), &b);
    let third = add(r.apply(&zc, z), r.apply(&tc, t));
    zero(&first) && zero(&second) && zero(&third)
}

/// `t = -c(1-a)^{-1}z + k` with `ak = dk = 0` and `(b-1)k = sz`.
pub fn oracle_affine_characterization(l: &LinearSolution, z: &[i64], t: &[i64]) -> bool {
    let r = Ring { m: l.modulus(), k: l.dim() };
    let (a, b, c, d, s) = (dense(&l.a), dense(&l.b), dense(&l.c), dense(&l.d), dense(&l.s()));
    let inv = r.inverse(&r.one_minus(&a)).expect("1-a invertible");
    let ciz = r.apply(&r.mul(&c, &inv), z);
    let k: Vec<i64> = t.iter().zip(&ciz).map(|(x, y)| (x + y).rem_euclid(r.m)).collect();
    let zero = |v: &[i64]| v.iter().all(|&x| x == 0);
    zero(&r.apply(&a, &k)) && zero(&r.apply(&d, &k)) && r.apply(&r.sub(&b, &r.eye()), &k) == r.apply(&s, z)
}

/// Set-level braided and nondegenerate verdict on a materialized table.
fn table_is_solution(m: &BraidedMap) -> bool {
    naive_bijective(m) && naive_nondegenerate(m) && m.check_braided()
}

/// Linear and affine checks for one `(m, k)`.
pub fn check_linear_case<R: Rng>(rng: &mut R, m: i64, k: usize, samples: usize, affine_set_level: usize) -> Tally {
    let caps = Caps::default();
    let cap = caps.materialize;
    let mut t = Tally::default();
    let size = (m as usize).pow(k as u32);
    for i in 0..samples {
        let tag = |what: &str| format!("(m={m}, k={k}) sample {i}: {what}");
        let q = random_quadruple(rng, m, k, true);
        t.check(q.validate().is_ok(), || tag("sampled quadruple invalid"));
        let l = match quadruple_to_solution(&q) {
            Ok(l) => l,
            Err(e) => {
                t.check(false, || tag(&format!("quadruple_to_solution: {e}")));
                continue;
            }
        };
        // round trip
        let back = l.to_quadruple().unwrap();
        t.check(back == q, || tag("solution -> quadruple != original"));
        t.check(quadruple_to_solution(&back).ok().as_ref() == Some(&l), || tag("quadruple -> solution round trip"));

        // identities, through the plain matrix oracle
        let bad = oracle_linear_identities(&l, &q.s);
        t.check(bad.is_empty(), || tag(&format!("identities fail: {bad:?}")));

        // materialize vs matrix predicate, on the solution and a perturbation
        let table = materialize(&MatrixSolution::from(l.clone()), cap).unwrap();
        let p = perturb(rng, &l);
        let ptable = materialize(&MatrixSolution::from(p.clone()), cap).unwrap();
        t.check(table_is_solution(&ptable) == p.is_valid(), || tag("perturbed: table verdict != matrix predicate"));
        t.check(p.is_valid() == oracle_linear_identities(&p, &p.s()).is_empty(), || tag("perturbed: oracle disagrees"));

        // the set-level criterion also verifies the table is a solution
        match is_injective(&table, &caps) {
            Ok(inj) => t.check(inj == is_injective_linear(&l), || tag("set-level injectivity != (s = 0)")),
            Err(e) => t.check(false, || tag(&format!("materialized table rejected: {e}"))),
        }

        // closed form of phi
        let (u, w) = phi_closed_form(&l);
        let phi = table.phi_table().unwrap();
        let phi_ok = (0..size).all(|yi| {
            let y = vector_at(yi, m, k);
            (0..size).all(|zi| {
                let z = vector_at(zi, m, k);
                let expect: Vec<i64> = u.apply(&z).iter().zip(w.apply(&y)).map(|(a, b)| (a + b).rem_euclid(m)).collect();
                phi.get(yi, zi) == vector_index(&expect, m)
            })
        });
        t.check(phi_ok, || tag("phi_closed_form differs from materialized phi"));

        // pqz round trips both ways
        match pqz_from_abd(&q.a, &q.b, &q.d) {
            Ok(tr) => {
                let (a2, b2, d2) = abd_from_pqz(&tr).unwrap();
                t.check((a2.clone(), b2.clone(), d2.clone()) == (q.a.clone(), q.b.clone(), q.d.clone()), || tag("abd -> pqz -> abd"));
                t.check(pqz_from_abd(&a2, &b2, &d2).ok().as_ref() == Some(&tr), || tag("pqz -> abd -> pqz"));
                let inj = solution_from_pqz(&tr).unwrap();
                t.check(is_injective_linear(&inj) && inj.a == q.a && inj.b == q.b && inj.d == q.d, || tag("solution_from_pqz"));
            }
            Err(e) => t.check(false, || tag(&format!("pqz_from_abd: {e}"))),
        }

        // hat
        let h = hat_solution(&l);
        t.check(h.is_valid() && is_injective_linear(&h), || tag("hat is not an injective solution"));
        t.check(oracle_linear_identities(&h, &h.s()).is_empty() && Ring { m, k }.is_zero(&dense(&h.s())), || tag("hat fails the oracle"));

        // affine extension
        let aff = random_affine(rng, &l);
        t.check(oracle_affine_holds(&l, &aff.zvec, &aff.tvec), || tag("affine_extend violates the vector identities"));
        t.check(affine_relation_failures(&l, &aff.zvec, &aff.tvec).unwrap().is_empty(), || tag("affine failures reported"));
        let expect_inj = is_injective_linear(&l) && aff.kvec().iter().all(|&x| x == 0);
        t.check(is_injective_affine(&aff) == expect_inj, || tag("is_injective_affine != (s = 0 and k = 0)"));
        let mut zero_k = aff.clone();
        if is_injective_linear(&l) {
            // the injective extension with the same z
            zero_k = braidlab_core::linear::affine_extend(&l, &aff.zvec, &vec![0; k]).unwrap();
            t.check(is_injective_affine(&zero_k), || tag("k = 0 extension is not injective"));
        }
        if i < affine_set_level {
            for a in [&aff, &zero_k] {
                let at = materialize(&MatrixSolution::from(a.clone()), cap).unwrap();
                match is_injective(&at, &caps) {
                    Ok(inj) => t.check(inj == is_injective_affine(a), || tag("affine set-level injectivity")),
                    Err(e) => t.check(false, || tag(&format!("affine table rejected: {e}"))),
                }
            }
        }

        // random (z, t): the vector identities hold iff the characterization does
        let z = vector_at(rng.gen_range(0..size), m, k);
        let tv = vector_at(rng.gen_range(0..size), m, k);
        let holds = oracle_affine_holds(&l, &z, &tv);
        t.check(holds == oracle_affine_characterization(&l, &z, &tv), || tag("affine characterization"));
        t.check(holds == AffineSolution::new(l.clone(), z.clone(), tv.clone()).is_ok(), || tag("AffineSolution::new verdict"));
        if i < affine_set_level {
            let raw = MatrixSolution::from(AffineSolution { linear: l.clone(), zvec: z, tvec: tv });
            let rt = materialize(&raw, cap).unwrap();
            t.check(table_is_solution(&rt) == holds, || tag("affine table verdict != vector identities"));
        }
    }
    t
}

pub fn check_linear_suite<R: Rng>(rng: &mut R, samples: usize, affine_set_level: usize) -> Tally {
    let mut t = Tally::default();
    for m in [2, 3, 4, 5] {
        for k in 1..=3 {
            t.merge(check_linear_case(rng, m, k, samples, affine_set_level));
        }
    }
    t
}

// criterion 5

/// Indices in `FiniteGroup::symmetric(k)` of the given image arrays.
pub fn sym_index(k: usize, images: &[Vec<usize>]) -> Vec<usize> {
    let elems = all_perms(k);
    images.iter().map(|p| elems.iter().position(|q| q == p).unwrap()).collect()
}

fn conjugation_rho(g: &FiniteGroup) -> Vec<Vec<usize>> {
    (0..g.order()).map(|x| (0..g.order()).map(|a| g.conjugate(x, a)).collect()).collect()
}

fn involutions(g: &FiniteGroup) -> Vec<usize> {
    (0..g.order()).filter(|&a| a != g.identity() && g.mul(a, a) == g.identity()).collect()
}

/// Named valid 7-tuples, the first one being the conjugation tuple.
pub fn seven_tuples() -> Vec<(&'static str, SevenTuple)> {
    let s3 = FiniteGroup::symmetric(3);
    let s4 = FiniteGroup::symmetric(4);
    let z6 = FiniteGroup::cyclic(6);
    let triv = |g: &FiniteGroup| vec![(0..g.order()).collect::<Vec<usize>>(); g.order()];
    let id = |g: &FiniteGroup| (0..g.order()).collect::<Vec<usize>>();
    let inv = |g: &FiniteGroup| (0..g.order()).map(|a| g.inv(a)).collect::<Vec<usize>>();
    let s3_transpositions = sym_index(3, &TRANSPOSITIONS.iter().map(|t| t.to_vec()).collect::<Vec<_>>());
    let three_cycles: Vec<usize> = {
        let e = all_perms(4);
        (0..24).filter(|&i| s4.mul(i, s4.mul(i, i)) == s4.identity() && i != s4.identity() && cycle_count(&e[i]) == 2).collect()
    };
    vec![
        (
            "S3 trivial action, pi = id, transpositions",
            SevenTuple { g: s3.clone(), a: s3.clone(), rho: triv(&s3), pi: id(&s3), x: s3_transpositions.clone() },
        ),
        (
            "S3 conjugation action, pi = inverse, transpositions",
            SevenTuple { g: s3.clone(), a: s3.clone(), rho: conjugation_rho(&s3), pi: inv(&s3), x: s3_transpositions },
        ),
        (
            "S4 trivial action, pi = id, transpositions",
            SevenTuple {
                g: s4.clone(),
                a: s4.clone(),
                rho: triv(&s4),
                pi: id(&s4),
                x: involutions(&s4).into_iter().filter(|&i| cycle_count(&all_perms(4)[i]) == 3).collect(),
            },
        ),
        (
            "S4 conjugation action, pi = inverse, 3-cycles",
            SevenTuple { g: s4.clone(), a: s4.clone(), rho: conjugation_rho(&s4), pi: inv(&s4), x: three_cycles },
        ),
        (
            "Z6 trivial action, pi = id, all elements",
            SevenTuple { g: z6.clone(), a: z6.clone(), rho: triv(&z6), pi: id(&z6), x: (0..6).collect() },
        ),
    ]
}

pub fn check_seven_tuples() -> Tally {
    let caps = Caps::default();
    let mut t = Tally::default();
    let tuples = seven_tuples();
    for (name, tuple) in &tuples {
        t.check(tuple.g.order() <= 24 && tuple.a.order() <= 24, || format!("{name}: order above 24"));
        match tuple.to_solution() {
            Ok(m) => {
                t.check(naive_bijective(&m) && naive_nondegenerate(&m) && naive_braided(&m), || format!("{name}: not a solution"));
                t.check(is_injective(&m, &caps).unwrap_or(false), || format!("{name}: not injective"));
            }
            Err(e) => t.check(false, || format!("{name}: {e}")),
        }
    }
    let conj = tuples[0].1.to_solution().unwrap();
    t.check(conj == conjugate_s3(), || "conjugation tuple does not reproduce the conjugate fixture".into());
    t
}

// criterion 6

/// Rank over `Q` by fraction-free elimination.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in 0..a.len() {
            if i != rank && !a[i][c].is_zero() {
                let (f, g) = (a[rank][c].clone(), a[i][c].clone());
                for j in 0..cols {
                    a[i][j] = &a[i][j] * &f - &a[rank][j] * &g;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Coefficients of `v` over the independent rows `basis`, if `v` lies in
/// their rational span.
fn rational_coords(basis: &[Vec<i64>], v: &[i64]) -> Option<Vec<BigRational>> {
    let r = basis.len();
    let dim = v.len();
    // columns are the basis rows, augmented with v
    let mut a: Vec<Vec<BigRational>> = (0..dim)
        .map(|j| {
            let mut row: Vec<BigRational> = basis.iter().map(|b| BigRational::from_integer(b[j].into())).collect();
            row.push(BigRational::from_integer(v[j].into()));
            row
        })
        .collect();
    let mut row = 0;
    for c in 0..r {
        let p = (row..dim).find(|&i| !a[i][c].is_zero())?;
        a.swap(row, p);
        let piv = a[row][c].clone();
        for x in a[row].iter_mut() {
            *x = &*x / &piv;
        }
        for i in 0..dim {
            if i != row && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=r {
                    let d = &f * &a[row][j];
                    a[i][j] -= d;
                }
            }
        }
        row += 1;
    }
    if a[row..].iter().any(|rw| !rw[r].is_zero()) {
        return None;
    }
    Some((0..r).map(|i| a[i][r].clone()).collect())
}

/// Exact membership without echelon forms: `v` must lie in the rational
/// span, and then some integer combination of the dependent generators
/// must leave integral coordinates over a maximal independent subset.
/// Those coordinates depend on each dependent coefficient only modulo the
/// common denominator, so a brute force over `[0, den)` settles it.
pub fn oracle_member(gens: &[Vec<i64>], v: &[i64]) -> bool {
    let mut with = gens.to_vec();
    with.push(v.to_vec());
    if rational_rank(&with) > rational_rank(gens) {
        return false;
    }
    let mut basis: Vec<Vec<i64>> = Vec::new();
    let mut dependent: Vec<Vec<i64>> = Vec::new();
    for g in gens {
        let mut trial = basis.clone();
        trial.push(g.clone());
        if rational_rank(&trial) == trial.len() {
            basis = trial;
        } else {
            dependent.push(g.clone());
        }
    }
    let Some(target) = rational_coords(&basis, v) else {
        return basis.is_empty() && v.iter().all(|&x| x == 0);
    };
    let dep: Vec<Vec<BigRational>> = dependent.iter().map(|d| rational_coords(&basis, d).expect("in span")).collect();
    let den = dep.iter().flatten().fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
    let den: i64 = den.try_into().expect("small denominator");
    let mut t = vec![0i64; dep.len()];
    loop {
        let integral = (0..basis.len()).all(|i| {
            let mut x = target[i].clone();
            for (tj, d) in t.iter().zip(&dep) {
                x -= &d[i] * BigRational::from_integer((*tj).into());
            }
            x.is_integer()
        });
        if integral {
            return true;
        }
        let mut j = 0;
        loop {
            if j == t.len() {
                return false;
            }
            t[j] += 1;
            if t[j] < den {
                break;
            }
            t[j] = 0;
            j += 1;
        }
    }
}

pub fn check_lattices<R: Rng>(rng: &mut R, lattices: usize) -> Tally {
    let mut t = Tally::default();
    for li in 0..lattices {
        let dim = rng.gen_range(1..=8);
        let r = rng.gen_range(1..=dim.min(5));
        // a third of the lattices get an extra dependent generator: a
        // random vector when the others span Q^dim, else an integer combination
        let mut gens: Vec<Vec<i64>> = (0..r).map(|_| (0..dim).map(|_| rng.gen_range(-4..=4)).collect()).collect();
        if li % 3 == 0 {
            if rational_rank(&gens) == dim {
                gens.push((0..dim).map(|_| rng.gen_range(-4..=4)).collect());
            } else if r >= 2 {
                let (c0, c1) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
                gens.push((0..dim).map(|j| c0 * gens[0][j] + c1 * gens[1][j]).collect());
            }
        }
        let lat = IntLattice::from_rows(dim, &gens).unwrap();
        t.check(lat.rank() == rational_rank(&gens), || format!("lattice {li}: rank {} vs {}", lat.rank(), rational_rank(&gens)));
        let combo = |rng: &mut R, den: i64| -> Option<Vec<i64>> {
            // sum of c_i g_i / den with integer c_i, if integral
            let c: Vec<i64> = gens.iter().map(|_| rng.gen_range(-2 * den..=2 * den)).collect();
            let sum: Vec<i64> = (0..dim).map(|j| gens.iter().zip(&c).map(|(g, ci)| g[j] * ci).sum()).collect();
            sum.iter().all(|x| x % den == 0).then(|| sum.iter().map(|x| x / den).collect())
        };
        let mut tests: Vec<Vec<i64>> = Vec::new();
        for _ in 0..4 {
            tests.extend(combo(rng, 1));
            tests.extend(combo(rng, 2));
            tests.extend(combo(rng, 3));
            tests.push((0..dim).map(|_| rng.gen_range(-6..=6)).collect());
        }
        for v in &tests {
            let expect = oracle_member(&gens, v);
            let got = lat.contains(v).unwrap();
            t.check(got == expect, || format!("lattice {li} gens {gens:?}: {v:?} member={got}, oracle={expect}"));
        }
        // the HNF is an invariant of the lattice, not of its generators
        let mut mixed = gens.clone();
        if mixed.len() >= 2 {
            let f = rng.gen_range(-3..=3);
            let (a, b) = (mixed[0].clone(), mixed[1].clone());
            mixed[0] = a.iter().zip(&b).map(|(x, y)| x + f * y).collect();
            mixed.swap(0, 1);
        }
        mixed.reverse();
        let other = IntLattice::from_rows(dim, &mixed).unwrap();
        t.check(other.hnf() == lat.hnf(), || format!("lattice {li}: HNF depends on the generating set"));
    }
    t
}
