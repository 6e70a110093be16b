//! Finite maps `S: X x X -> X x X` stored as tables, with the pointwise
//! predicates of braided sets, the derived solution and the twisted braid
//! group actions on `X^k`.
//!
//! Elements of `X` are `0..n`. The table entry for `(x, y)` is
//! `S(x, y) = (g_x(y), f_y(x))`.

use crate::error::{Error, Result};
use crate::par::{self, Parallelism};

/// Largest `n^k` materialized by [`BraidedMap::j_map`].
pub const TUPLE_GUARD: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BraidedMap {
    n: usize,
    table: Vec<[u32; 2]>,
}

/// One flag per output component of the braid relation, in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BraidFlags(pub bool, pub bool, pub bool);

impl BraidFlags {
    pub fn all(self) -> bool {
        self.0 && self.1 && self.2
    }
}

/// The two actions read off a nondegenerate map.
///
/// `star[x][z] = x * z = f_x^{-1}(z)`, `circ[x][z] = x o z = g_x(z)` and
/// `star_inv[x][z] = x^{-1} * z = f_x(z)`. Rows are flattened row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionTables {
    n: usize,
    star: Vec<u32>,
    circ: Vec<u32>,
    star_inv: Vec<u32>,
}

/// `phi[y][x] = phi(y, x) = x^{-1} * ((y * x) o y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiTable {
    n: usize,
    phi: Vec<u32>,
}

/// A map `X^k -> X^k` stored by lexicographic tuple index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleMap {
    n: usize,
    k: usize,
    table: Vec<u32>,
}

fn is_permutation(row: impl Iterator<Item = usize>, n: usize) -> bool {
    let mut seen = vec![false; n];
    for v in row {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

impl BraidedMap {
    /// Builds a map from row-major pairs, `table[x * n + y] = S(x, y)`.
    pub fn new(n: usize, table: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::MalformedTable("X must be nonempty".into()));
        }
        if n > u32::MAX as usize {
            return Err(Error::MalformedTable("X is too large".into()));
        }
        if table.len() != n * n {
            return Err(Error::MalformedTable(format!(
                "expected {} entries, got {}",
                n * n,
                table.len()
            )));
        }
        let mut out = Vec::with_capacity(n * n);
        for (i, (u, v)) in table.into_iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::MalformedTable(format!(
                    "entry S({}, {}) = ({u}, {v}) out of range",
                    i / n,
                    i % n
                )));
            }
            out.push([u as u32, v as u32]);
        }
        Ok(BraidedMap { n, table: out })
    }

    /// Builds a map from a closure. Panics if the closure leaves `0..n`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> (usize, usize)) -> Self {
        let table = (0..n * n).map(|i| f(i / n, i % n)).collect();
        Self::new(n, table).expect("closure produced out-of-range entries")
    }

    pub fn flip(n: usize) -> Self {
        Self::from_fn(n, |x, y| (y, x))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |x, y| (x, y))
    }

    /// `S(x, y) = (b(y), c(x))`.
    pub fn permutation(b: &[usize], c: &[usize]) -> Result<Self> {
        let n = b.len();
        if c.len() != n || !is_permutation(b.iter().copied(), n) || !is_permutation(c.iter().copied(), n) {
            return Err(Error::MalformedTable("b and c must be permutations of the same set".into()));
        }
        Ok(Self::from_fn(n, |x, y| (b[y], c[x])))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> (usize, usize) {
        let [u, v] = self.table[x * self.n + y];
        (u as usize, v as usize)
    }

    /// `g_x(y)`, the first output component.
    #[inline]
    pub fn g(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y][0] as usize
    }

    /// `f_y(x)`, the second output component of `S(x, y)`.
    #[inline]
    pub fn f(&self, y: usize, x: usize) -> usize {
        self.table[x * self.n + y][1] as usize
    }

    /// Row-major pairs, `entries()[x * n + y] = S(x, y)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.table.iter().map(|&[u, v]| (u as usize, v as usize))
    }

    /// Flattened `[u0, v0, u1, v1, ...]`, the order used for canonical forms.
    pub fn flat(&self) -> Vec<u32> {
        self.table.iter().flat_map(|p| p.iter().copied()).collect()
    }

    /// The map conjugated by the relabeling `x -> perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.n;
        debug_assert!(is_permutation(perm.iter().copied(), n));
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        Self::from_fn(n, |x, y| {
            let (u, v) = self.get(inv[x], inv[y]);
            (perm[u], perm[v])
        })
    }

    pub fn validate_bijection(&self) -> bool {
        let n = self.n;
        let mut seen = vec![false; n * n];
        for &[u, v] in &self.table {
            let i = u as usize * n + v as usize;
            if seen[i] {
                return false;
            }
            seen[i] = true;
        }
        true
    }

    /// Inverse table, if `S` is a bijection.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut inv = vec![None; n * n];
        for (i, &[u, v]) in self.table.iter().enumerate() {
            let slot = &mut inv[u as usize * n + v as usize];
            if slot.is_some() {
                return Err(Error::NotBijective);
            }
            *slot = Some((i / n, i % n));
        }
        let table = inv.into_iter().map(|p| p.expect("bijection")).collect();
        Self::new(n, table)
    }

    pub fn check_nondegenerate(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| is_permutation((0..n).map(|y| self.g(x, y)), n))
            && (0..n).all(|y| is_permutation((0..n).map(|x| self.f(y, x)), n))
    }

    #[inline]
    fn s1s2s1(&self, x: usize, y: usize, z: usize) -> [usize; 3] {
        let (a, b) = self.get(x, y);
        let (b, c) = self.get(b, z);
        let (a, b) = self.get(a, b);
        [a, b, c]
    }

    #[inline]
    fn s2s1s2(&self, x: usize, y: usize, z: usize) -> [usize; 3] {
        let (b, c) = self.get(y, z);
        let (a, b) = self.get(x, b);
        let (b, c) = self.get(b, c);
        [a, b, c]
    }

    /// Exhaustive check of `S1 S2 S1 = S2 S1 S2` on `X^3`.
    pub fn check_braided(&self) -> bool {
        self.check_braided_with(Parallelism::default())
    }

    pub fn check_braided_with(&self, mode: Parallelism) -> bool {
        let n = self.n;
        par::all(mode, 0..n, |x| {
            (0..n).all(|y| {
                // S1 first on the left, S2 first on the right
                let (a1, b1) = self.get(x, y);
                (0..n).all(|z| {
                    let (b2, c) = self.get(b1, z);
                    let left = (self.get(a1, b2), c);
                    let (b3, c3) = self.get(y, z);
                    let (a, b4) = self.get(x, b3);
                    let (b, c) = self.get(b4, c3);
                    left == ((a, b), c)
                })
            })
        })
    }

    /// Direct evaluation of `R12 R13 R23 = R23 R13 R12` for `R = sigma S`.
    pub fn check_qybe(&self) -> bool {
        let n = self.n;
        let r = |x: usize, y: usize| {
            let (u, v) = self.get(x, y);
            (v, u)
        };
        par::all(Parallelism::default(), 0..n, |x| {
            (0..n).all(|y| {
                (0..n).all(|z| {
                    // R12 R13 R23 applied to (x, y, z): R23 first.
                    let lhs = {
                        let (b, c) = r(y, z);
                        let (a, c) = r(x, c);
                        let (a, b) = r(a, b);
                        [a, b, c]
                    };
                    let rhs = {
                        let (a, b) = r(x, y);
                        let (a, c) = r(a, z);
                        let (b, c) = r(b, c);
                        [a, b, c]
                    };
                    lhs == rhs
                })
            })
        })
    }

    /// Agreement bit between the braid check and the QYBE check on `R = sigma S`.
    pub fn check_qybe_equiv(&self) -> bool {
        self.check_qybe() == self.check_braided()
    }

    pub fn check_involutive(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| {
            (0..n).all(|y| {
                let (u, v) = self.get(x, y);
                self.get(u, v) == (x, y)
            })
        })
    }

    /// Braided and involutive.
    pub fn is_symmetric(&self) -> bool {
        self.check_involutive() && self.check_braided()
    }

    /// The braid relation compared one output component at a time.
    pub fn braid_components(&self) -> Result<BraidFlags> {
        self.require_nondegenerate()?;
        let n = self.n;
        let rows = par::map(Parallelism::default(), 0..n, |x| {
            let mut flags = [true; 3];
            for y in 0..n {
                for z in 0..n {
                    let l = self.s1s2s1(x, y, z);
                    let r = self.s2s1s2(x, y, z);
                    for i in 0..3 {
                        flags[i] &= l[i] == r[i];
                    }
                }
            }
            flags
        });
        let mut out = [true; 3];
        for f in rows {
            for i in 0..3 {
                out[i] &= f[i];
            }
        }
        Ok(BraidFlags(out[0], out[1], out[2]))
    }

    /// `f_{g_{f_y(x)}(z)}(g_x(y)) = g_{f_{g_y(z)}(x)}(f_z(y))` for all triples.
    pub fn linking_relation_holds(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| {
                    let lhs = self.f(self.g(self.f(y, x), z), self.g(x, y));
                    let rhs = self.g(self.f(self.g(y, z), x), self.f(z, y));
                    lhs == rhs
                })
            })
        })
    }

    fn require_nondegenerate(&self) -> Result<()> {
        if self.check_nondegenerate() {
            Ok(())
        } else {
            Err(Error::Degenerate("g_x or f_y is not a permutation".into()))
        }
    }

    fn require_braided(&self) -> Result<()> {
        self.require_nondegenerate()?;
        if self.check_braided() {
            Ok(())
        } else {
            Err(Error::NotBraided)
        }
    }

    pub fn action_tables(&self) -> Result<ActionTables> {
        self.require_nondegenerate()?;
        let n = self.n;
        let mut star = vec![0u32; n * n];
        let mut circ = vec![0u32; n * n];
        let mut star_inv = vec![0u32; n * n];
        for x in 0..n {
            for z in 0..n {
                let fx = self.f(x, z);
                star_inv[x * n + z] = fx as u32;
                star[x * n + fx] = z as u32;
                circ[x * n + z] = self.g(x, z) as u32;
            }
        }
        Ok(ActionTables { n, star, circ, star_inv })
    }

    /// `phi(y, x) = f_x(g_{f_y^{-1}(x)}(y))`.
    pub fn phi_table(&self) -> Result<PhiTable> {
        let t = self.action_tables()?;
        Ok(t.phi_table())
    }

    /// `S'(x, y) = (phi(y, x), x)`.
    pub fn derived_solution(&self) -> Result<BraidedMap> {
        self.require_braided()?;
        let phi = self.phi_table()?;
        Ok(phi.derived_map())
    }

    /// `t^{-1} * phi(y, z) = phi(t^{-1} * y, t^{-1} * z)` for all generators `t`.
    pub fn phi_invariance_check(&self) -> Result<bool> {
        self.require_braided()?;
        let t = self.action_tables()?;
        let phi = t.phi_table();
        let n = self.n;
        Ok((0..n).all(|g| {
            (0..n).all(|y| {
                (0..n).all(|z| {
                    let lhs = t.star_inv(g, phi.get(y, z));
                    let rhs = phi.get(t.star_inv(g, y), t.star_inv(g, z));
                    lhs == rhs
                })
            })
        }))
    }

    /// The conjugating bijection `J_k` on `X^k`:
    /// `J_1 = id`, `J_k = Q_k (J_{k-1} x id)` with
    /// `Q_k(x_1..x_k) = (x_k^{-1} * x_1, .., x_k^{-1} * x_{k-1}, x_k)`.
    pub fn j_map(&self, k: usize) -> Result<TupleMap> {
        if k == 0 {
            return Err(Error::BadIndex { index: 0, k });
        }
        let t = self.action_tables()?;
        let size = tuple_count(self.n, k)?;
        let n = self.n;
        let table = (0..size)
            .map(|idx| {
                let tuple = decode_tuple(idx, n, k);
                encode_tuple(&t.j_apply(&tuple), n) as u32
            })
            .collect();
        Ok(TupleMap { n, k, table })
    }

    /// `S^{i,i+1}` on `X^k` as a table.
    pub fn twisted_generator(&self, k: usize, i: usize) -> Result<TupleMap> {
        if i == 0 || i >= k {
            return Err(Error::BadIndex { index: i as i64, k });
        }
        let size = tuple_count(self.n, k)?;
        let n = self.n;
        let table = (0..size)
            .map(|idx| {
                let mut tuple = decode_tuple(idx, n, k);
                let (u, v) = self.get(tuple[i - 1], tuple[i]);
                tuple[i - 1] = u;
                tuple[i] = v;
                encode_tuple(&tuple, n) as u32
            })
            .collect();
        Ok(TupleMap { n, k, table })
    }

    /// Applies the twisted action of a braid word to a tuple. Letter `i > 0`
    /// is `S` on positions `i, i+1` (1-based), `-i` its inverse. Letters act
    /// left to right.
    pub fn apply_braid_word(&self, word: &[i64], tuple: &[usize]) -> Result<Vec<usize>> {
        let k = tuple.len();
        if let Some(&bad) = word.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize >= k) {
            return Err(Error::BadIndex { index: bad, k });
        }
        if let Some(&x) = tuple.iter().find(|&&x| x >= self.n) {
            return Err(Error::MalformedTable(format!("tuple entry {x} out of range")));
        }
        let inverse = if word.iter().any(|&l| l < 0) {
            Some(self.inverse()?)
        } else {
            None
        };
        let mut out = tuple.to_vec();
        for &l in word {
            let i = l.unsigned_abs() as usize;
            let map = if l > 0 { self } else { inverse.as_ref().expect("computed above") };
            let (u, v) = map.get(out[i - 1], out[i]);
            out[i - 1] = u;
            out[i] = v;
        }
        Ok(out)
    }
}

impl ActionTables {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `x * z = f_x^{-1}(z)`.
    #[inline]
    pub fn star(&self, x: usize, z: usize) -> usize {
        self.star[x * self.n + z] as usize
    }

    /// `x o z = g_x(z)`.
    #[inline]
    pub fn circ(&self, x: usize, z: usize) -> usize {
        self.circ[x * self.n + z] as usize
    }

    /// `x^{-1} * z = f_x(z)`.
    #[inline]
    pub fn star_inv(&self, x: usize, z: usize) -> usize {
        self.star_inv[x * self.n + z] as usize
    }

    pub fn star_row(&self, x: usize) -> Vec<usize> {
        (0..self.n).map(|z| self.star(x, z)).collect()
    }

    pub fn star_inv_row(&self, x: usize) -> Vec<usize> {
        (0..self.n).map(|z| self.star_inv(x, z)).collect()
    }

    pub fn circ_row(&self, x: usize) -> Vec<usize> {
        (0..self.n).map(|z| self.circ(x, z)).collect()
    }

    pub fn phi_table(&self) -> PhiTable {
        let n = self.n;
        let mut phi = vec![0u32; n * n];
        for y in 0..n {
            for x in 0..n {
                phi[y * n + x] = self.star_inv(x, self.circ(self.star(y, x), y)) as u32;
            }
        }
        PhiTable { n, phi }
    }

    fn j_apply(&self, tuple: &[usize]) -> Vec<usize> {
        let mut out = tuple.to_vec();
        for len in 2..=out.len() {
            let last = out[len - 1];
            for v in &mut out[..len - 1] {
                *v = self.star_inv(last, *v);
            }
        }
        out
    }
}

impl PhiTable {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize) -> usize {
        self.phi[y * self.n + x] as usize
    }

    /// The permutation `y -> phi(y, x)` for fixed `x`.
    pub fn column(&self, x: usize) -> Vec<usize> {
        (0..self.n).map(|y| self.get(y, x)).collect()
    }

    pub fn derived_map(&self) -> BraidedMap {
        BraidedMap::from_fn(self.n, |x, y| (self.get(y, x), x))
    }
}

fn tuple_count(n: usize, k: usize) -> Result<usize> {
    let size = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if size > TUPLE_GUARD as u128 {
        return Err(Error::TooLarge {
            what: "X^k",
            size,
            limit: TUPLE_GUARD as u128,
        });
    }
    Ok(size as usize)
}

/// Lexicographic index of a tuple in `X^k`.
pub fn encode_tuple(tuple: &[usize], n: usize) -> usize {
    tuple.iter().fold(0, |acc, &x| acc * n + x)
}

pub fn decode_tuple(mut idx: usize, n: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    out
}

impl TupleMap {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn apply(&self, tuple: &[usize]) -> Vec<usize> {
        decode_tuple(self.table[encode_tuple(tuple, self.n)] as usize, self.n, self.k)
    }

    #[inline]
    pub fn apply_index(&self, idx: usize) -> usize {
        self.table[idx] as usize
    }

    pub fn is_bijection(&self) -> bool {
        is_permutation(self.table.iter().map(|&v| v as usize), self.table.len())
    }

    /// `self o other`, i.e. `other` first.
    pub fn compose(&self, other: &TupleMap) -> TupleMap {
        assert_eq!((self.n, self.k), (other.n, other.k));
        TupleMap {
            n: self.n,
            k: self.k,
            table: other.table.iter().map(|&i| self.table[i as usize]).collect(),
        }
    }
}

/// `J_k S^{i,i+1} = S'^{i,i+1} J_k` on all of `X^k`, for every `i`.
pub fn j_conjugation_holds(m: &BraidedMap, k: usize) -> Result<bool> {
    let derived = m.derived_solution()?;
    let j = m.j_map(k)?;
    for i in 1..k {
        let s = m.twisted_generator(k, i)?;
        let d = derived.twisted_generator(k, i)?;
        if j.compose(&s) != d.compose(&j) {
            return Ok(false);
        }
    }
    Ok(true)
}
