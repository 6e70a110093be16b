//! Integer lattices in `Z^dim` with exact membership testing.
//!
//! Generators are folded one at a time into a row echelon basis using
//! unimodular (extended gcd) row operations over arbitrary-precision
//! integers, so the basis always spans exactly the generated lattice.
//! [`IntLattice::hnf`] additionally reduces entries above each pivot to
//! give the Hermite normal form.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Sparse integer vector: strictly increasing columns, nonzero values.
pub type SparseVec = Vec<(usize, BigInt)>;

#[derive(Debug, Clone)]
pub struct IntLattice {
    dim: usize,
    rows: Vec<SparseVec>,
    basis: Vec<SparseVec>,
    // basis rows again when every entry fits in i64
    small: Vec<Option<Vec<(usize, i64)>>>,
    // pivot column -> basis row
    pivots: BTreeMap<usize, usize>,
}

fn sparse_from_dense(v: &[i64]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, &x)| (i, BigInt::from(x)))
        .collect()
}

/// `alpha * u + beta * w`.
fn combine(alpha: &BigInt, u: &SparseVec, beta: &BigInt, w: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(u.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < u.len() || j < w.len() {
        let take_u = j >= w.len() || (i < u.len() && u[i].0 < w[j].0);
        let take_w = i >= u.len() || (j < w.len() && w[j].0 < u[i].0);
        if take_u {
            if !alpha.is_zero() {
                out.push((u[i].0, alpha * &u[i].1));
            }
            i += 1;
        } else if take_w {
            if !beta.is_zero() {
                out.push((w[j].0, beta * &w[j].1));
            }
            j += 1;
        } else {
            let v = alpha * &u[i].1 + beta * &w[j].1;
            if !v.is_zero() {
                out.push((u[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn to_small(r: &SparseVec) -> Option<Vec<(usize, i64)>> {
    r.iter().map(|(c, x)| x.to_i64().map(|x| (*c, x))).collect()
}

impl IntLattice {
    pub fn new(dim: usize) -> Self {
        IntLattice {
            dim,
            rows: Vec::new(),
            basis: Vec::new(),
            small: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }

    pub fn from_rows(dim: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let mut l = IntLattice::new(dim);
        for r in rows {
            l.add_dense(r)?;
        }
        Ok(l)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Generators as given.
    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Rank of the lattice (number of echelon rows).
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn add_dense(&mut self, row: &[i64]) -> Result<()> {
        if row.len() != self.dim {
            return Err(Error::ShapeMismatch(format!(
                "row of length {} in a lattice of dimension {}",
                row.len(),
                self.dim
            )));
        }
        self.add_sparse(sparse_from_dense(row))
    }

    /// Adds a generator given as `(column, value)` pairs; columns may repeat
    /// and are summed.
    pub fn add_terms(&mut self, terms: &[(usize, i64)]) -> Result<()> {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for &(c, v) in terms {
            if c >= self.dim {
                return Err(Error::ShapeMismatch(format!("column {c} out of range")));
            }
            *acc.entry(c).or_insert(0) += v;
        }
        let row = acc
            .into_iter()
            .filter(|(_, v)| *v != 0)
            .map(|(c, v)| (c, BigInt::from(v)))
            .collect();
        self.add_sparse(row)
    }

    fn add_sparse(&mut self, row: SparseVec) -> Result<()> {
        self.grow(row).map(|_| ())
    }

    /// Adds a generator and reports whether the lattice got larger, i.e.
    /// whether the generator was not already a member.
    pub fn grow(&mut self, row: SparseVec) -> Result<bool> {
        if row.iter().any(|(c, _)| *c >= self.dim) {
            return Err(Error::ShapeMismatch("column out of range".into()));
        }
        self.rows.push(row.clone());
        Ok(self.insert(row))
    }

    fn insert(&mut self, mut r: SparseVec) -> bool {
        let mut grew = false;
        loop {
            let Some((c, lead)) = r.first().cloned() else {
                return grew;
            };
            let Some(&bi) = self.pivots.get(&c) else {
                if lead.is_negative() {
                    for e in &mut r {
                        e.1 = -&e.1;
                    }
                }
                let r = self.tail_reduced(r);
                self.pivots.insert(c, self.basis.len());
                self.small.push(to_small(&r));
                self.basis.push(r);
                self.reduce_above(c);
                return true;
            };
            let b = &self.basis[bi];
            let p = b[0].1.clone();
            if lead.is_multiple_of(&p) {
                let q = &lead / &p;
                r = combine(&BigInt::one(), &r, &-q, b);
                continue;
            }
            // g = s*lead + t*p; [[s, t], [p/g, -lead/g]] is unimodular.
            let e = lead.extended_gcd(&p);
            let g = e.gcd;
            let new_pivot = combine(&e.x, &r, &e.y, b);
            let rest = combine(&(&p / &g), &r, &-(&lead / &g), b);
            debug_assert_eq!(new_pivot[0].0, c);
            let mut new_pivot = new_pivot;
            if new_pivot[0].1.is_negative() {
                for e in &mut new_pivot {
                    e.1 = -&e.1;
                }
            }
            self.basis[bi] = self.tail_reduced(new_pivot);
            self.small[bi] = to_small(&self.basis[bi]);
            self.reduce_above(c);
            grew = true;
            r = self.reduce(rest);
        }
    }

    /// Reduces column `c` of the rows with earlier pivots into `[0, p)`,
    /// `p` the pivot at `c`.
    fn reduce_above(&mut self, c: usize) {
        let bi = self.pivots[&c];
        let p = self.basis[bi][0].1.clone();
        let above: Vec<usize> = self.pivots.range(..c).map(|(_, &j)| j).collect();
        for j in above {
            let Ok(k) = self.basis[j].binary_search_by_key(&c, |e| e.0) else { continue };
            let q = self.basis[j][k].1.div_floor(&p);
            if !q.is_zero() {
                self.basis[j] = combine(&BigInt::one(), &self.basis[j], &-q, &self.basis[bi]);
                self.small[j] = to_small(&self.basis[j]);
            }
        }
    }

    /// Keeps the leading entry and reduces the rest against the basis, which
    /// keeps coefficients from growing.
    fn tail_reduced(&self, mut r: SparseVec) -> SparseVec {
        let tail = r.split_off(1);
        r.extend(self.reduce(tail));
        r
    }

    /// Canonical representative of `v + L`: at each pivot column the entry
    /// is reduced into `[0, pivot)`.
    pub fn normal_form(&self, v: &[i64]) -> Result<SparseVec> {
        if v.len() != self.dim {
            return Err(Error::ShapeMismatch("vector length differs from dimension".into()));
        }
        Ok(self.reduce(sparse_from_dense(v)))
    }

    pub fn normal_form_sparse(&self, v: SparseVec) -> SparseVec {
        self.reduce(v)
    }

    fn reduce(&self, v: SparseVec) -> SparseVec {
        match self.reduce_small(&v) {
            Some(out) => out,
            None => self.reduce_big(v),
        }
    }

    /// [`Self::reduce`] in checked `i128` arithmetic on a dense buffer;
    /// `None` when something does not fit.
    fn reduce_small(&self, v: &SparseVec) -> Option<SparseVec> {
        let Some(&(first, _)) = v.first() else {
            return Some(Vec::new());
        };
        let mut dense = vec![0i128; self.dim];
        for (c, x) in v {
            dense[*c] = x.to_i128()?;
        }
        for (&c, &bi) in self.pivots.range(first..) {
            let val = dense[c];
            if val == 0 {
                continue;
            }
            let row = self.small[bi].as_ref()?;
            let q = val.div_euclid(row[0].1 as i128);
            if q != 0 {
                for &(j, x) in row {
                    dense[j] = dense[j].checked_sub(q.checked_mul(x as i128)?)?;
                }
            }
        }
        Some(
            dense
                .into_iter()
                .enumerate()
                .skip(first)
                .filter(|e| e.1 != 0)
                .map(|(c, x)| (c, BigInt::from(x)))
                .collect(),
        )
    }

    fn reduce_big(&self, mut v: SparseVec) -> SparseVec {
        let mut done: SparseVec = Vec::new();
        // `v` holds the unprocessed tail; `done` the finished prefix.
        while let Some((c, val)) = v.first().cloned() {
            match self.pivots.get(&c) {
                None => {
                    done.push(v.remove(0));
                }
                Some(&bi) => {
                    let b = &self.basis[bi];
                    let q = val.div_floor(&b[0].1);
                    if !q.is_zero() {
                        v = combine(&BigInt::one(), &v, &-q, b);
                    }
                    if let Some((c2, _)) = v.first() {
                        if *c2 == c {
                            done.push(v.remove(0));
                        }
                    }
                }
            }
        }
        done
    }

    pub fn contains(&self, v: &[i64]) -> Result<bool> {
        Ok(self.normal_form(v)?.is_empty())
    }

    pub fn contains_sparse(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Echelon basis as dense rows ordered by pivot column.
    pub fn echelon_rows(&self) -> Vec<Vec<BigInt>> {
        self.pivots.values().map(|&bi| self.dense(&self.basis[bi])).collect()
    }

    fn dense(&self, v: &SparseVec) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.dim];
        for (c, x) in v {
            out[*c] = x.clone();
        }
        out
    }

    /// Row-style Hermite normal form: echelon, positive pivots, entries
    /// above each pivot in `[0, pivot)`.
    pub fn hnf(&self) -> Vec<Vec<BigInt>> {
        let order: Vec<usize> = self.pivots.values().copied().collect();
        let mut rows: Vec<SparseVec> = order.iter().map(|&bi| self.basis[bi].clone()).collect();
        for i in (0..rows.len()).rev() {
            let (pc, pv) = rows[i][0].clone();
            for j in 0..i {
                let entry = rows[j].iter().find(|(c, _)| *c == pc).map(|(_, v)| v.clone());
                if let Some(val) = entry {
                    let q = val.div_floor(&pv);
                    if !q.is_zero() {
                        rows[j] = combine(&BigInt::one(), &rows[j], &-q, &rows[i]);
                    }
                }
            }
        }
        rows.iter().map(|r| self.dense(r)).collect()
    }
}

/// The abelian group `Z^dim / <relations>` with canonical normal forms.
///
/// Before anything reaches an [`IntLattice`], generators are eliminated
/// through relations in which they have coefficient `+-1` (a Tietze move,
/// exact over `Z`), cheapest first by the Markowitz count. Only the
/// remaining core relations on the surviving generators are echelonized.
/// Elimination uses checked `i64` arithmetic and is abandoned on overflow,
/// in which case every relation goes to the core unchanged.
#[derive(Debug, Clone)]
pub struct AbelianPresentation {
    dim: usize,
    // subst[c] = Some(expr) when e_c was eliminated as e_c = expr
    subst: Vec<Option<Vec<(usize, i64)>>>,
    // step at which a column was eliminated
    step: Vec<usize>,
    // column -> core column, usize::MAX when eliminated
    core_col: Vec<usize>,
    core: IntLattice,
}

type Row = Vec<(usize, i64)>;

fn normalize_row(terms: &[(usize, i64)]) -> Option<Row> {
    let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
    for &(c, v) in terms {
        let e = acc.entry(c).or_insert(0);
        *e = e.checked_add(v)?;
    }
    let mut row: Row = acc.into_iter().filter(|(_, v)| *v != 0).collect();
    if row.first().is_some_and(|(_, v)| *v < 0) {
        for e in &mut row {
            e.1 = e.1.checked_neg()?;
        }
    }
    Some(row)
}

/// `t + w * r` for sorted sparse rows, `None` on overflow.
fn axpy(t: &Row, w: i64, r: &Row) -> Option<Row> {
    let mut out = Vec::with_capacity(t.len() + r.len());
    let (mut i, mut j) = (0, 0);
    while i < t.len() || j < r.len() {
        if j >= r.len() || (i < t.len() && t[i].0 < r[j].0) {
            out.push(t[i]);
            i += 1;
        } else if i >= t.len() || r[j].0 < t[i].0 {
            out.push((r[j].0, w.checked_mul(r[j].1)?));
            j += 1;
        } else {
            let v = t[i].1.checked_add(w.checked_mul(r[j].1)?)?;
            if v != 0 {
                out.push((t[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

fn coefficient(row: &Row, c: usize) -> Option<i64> {
    row.binary_search_by_key(&c, |e| e.0).ok().map(|i| row[i].1)
}

struct Eliminator {
    rows: Vec<Option<Row>>,
    // live rows containing each column
    col_rows: Vec<HashSet<usize>>,
    subst: Vec<Option<Row>>,
    step: Vec<usize>,
    steps: usize,
}

impl Eliminator {
    /// Shortest row with a unit coefficient in column `c`.
    fn pivot(&self, c: usize) -> Option<usize> {
        self.col_rows[c]
            .iter()
            .copied()
            .filter(|&r| {
                let row = self.rows[r].as_ref().expect("live");
                coefficient(row, c).is_some_and(|v| v.abs() == 1)
            })
            .min_by_key(|&r| (self.rows[r].as_ref().expect("live").len(), r))
    }

    /// Eliminates `c` with pivot row `r`; `None` on overflow.
    fn eliminate(&mut self, c: usize, r: usize) -> Option<()> {
        let pivot = self.rows[r].take().expect("live pivot row");
        for &(j, _) in &pivot {
            self.col_rows[j].remove(&r);
        }
        let u = coefficient(&pivot, c).expect("pivot column");
        let users: Vec<usize> = self.col_rows[c].iter().copied().collect();
        for t in users {
            let row = self.rows[t].take().expect("live row");
            let w = coefficient(&row, c).expect("column present");
            let new = axpy(&row, w.checked_mul(u)?.checked_neg()?, &pivot)?;
            for &(j, _) in &pivot {
                let before = coefficient(&row, j).is_some();
                let after = coefficient(&new, j).is_some();
                if before && !after {
                    self.col_rows[j].remove(&t);
                } else if after && !before {
                    self.col_rows[j].insert(t);
                }
            }
            if !new.is_empty() {
                self.rows[t] = Some(new);
            }
        }
        let mut expr = Vec::with_capacity(pivot.len() - 1);
        for &(j, v) in &pivot {
            if j != c {
                expr.push((j, v.checked_mul(u)?.checked_neg()?));
            }
        }
        self.subst[c] = Some(expr);
        self.step[c] = self.steps;
        self.steps += 1;
        Some(())
    }

    /// Eliminates the lightest columns first. Weights in the queue may be
    /// stale; each is checked when popped and requeued if it changed.
    fn run(&mut self) -> Option<()> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        let dim = self.col_rows.len();
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
            (0..dim).map(|c| Reverse((self.col_rows[c].len(), c))).collect();
        while let Some(Reverse((weight, c))) = heap.pop() {
            if self.subst[c].is_some() || weight == 0 {
                continue;
            }
            if self.col_rows[c].len() != weight {
                heap.push(Reverse((self.col_rows[c].len(), c)));
                continue;
            }
            let Some(r) = self.pivot(c) else { continue };
            let touched: Vec<usize> = self.rows[r]
                .as_ref()
                .expect("live")
                .iter()
                .map(|e| e.0)
                .filter(|&j| j != c)
                .collect();
            self.eliminate(c, r)?;
            for j in touched {
                heap.push(Reverse((self.col_rows[j].len(), j)));
            }
        }
        Some(())
    }
}

/// Incremental Gauss-Jordan over unit pivots. Every stored expression is
/// in terms of live columns only, so reducing a vector is one substitution
/// pass. Vectors without a unit entry after reduction go to the core rows.
struct Spinner {
    dim: usize,
    expr: Vec<Option<Row>>,
    // live column -> eliminated columns whose expression uses it
    users: Vec<HashSet<usize>>,
    step: Vec<usize>,
    steps: usize,
    core_rows: Vec<Row>,
    core_cache: Option<IntLattice>,
}

impl Spinner {
    fn new(dim: usize) -> Self {
        Spinner {
            dim,
            expr: vec![None; dim],
            users: vec![HashSet::new(); dim],
            step: vec![usize::MAX; dim],
            steps: 0,
            core_rows: Vec::new(),
            core_cache: None,
        }
    }

    fn reduce(&self, w: &[(usize, i64)]) -> Option<Row> {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for &(c, v) in w {
            match &self.expr[c] {
                Some(e) => {
                    for &(j, x) in e {
                        let a = acc.entry(j).or_insert(0);
                        *a = a.checked_add(v.checked_mul(x)?)?;
                    }
                }
                None => {
                    let a = acc.entry(c).or_insert(0);
                    *a = a.checked_add(v)?;
                }
            }
        }
        Some(acc.into_iter().filter(|e| e.1 != 0).collect())
    }

    /// Adds `w` to the lattice; `Some(true)` when it was not yet a member.
    /// With `defer`, a vector that would only enlarge the core is left
    /// out and reported as `None` inside `Some`.
    fn insert_or_defer(&mut self, w: &[(usize, i64)], defer: bool) -> Option<Option<bool>> {
        let w = self.reduce(w)?;
        if w.is_empty() {
            return Some(Some(false));
        }
        let unit = w
            .iter()
            .filter(|e| e.1.abs() == 1)
            .min_by_key(|e| (self.users[e.0].len(), e.0))
            .copied();
        let Some((c, u)) = unit else {
            if defer {
                return Some(None);
            }
            let big: SparseVec = w.iter().map(|&(c, v)| (c, BigInt::from(v))).collect();
            let member = self.core_lattice().contains_sparse(big.clone());
            if member {
                return Some(Some(false));
            }
            self.core_rows.push(w);
            if let Some(l) = self.core_cache.as_mut() {
                l.grow(big).expect("columns in range");
            }
            return Some(Some(true));
        };
        self.eliminate(c, u, &w)?;
        Some(Some(true))
    }

    fn insert(&mut self, w: &[(usize, i64)]) -> Option<bool> {
        self.insert_or_defer(w, false).map(|g| g.expect("not deferred"))
    }

    /// Eliminates column `c` through the reduced relation `w` in which it
    /// has coefficient `u = +-1`.
    fn eliminate(&mut self, c: usize, u: i64, w: &[(usize, i64)]) -> Option<()> {
        // u e_c + rest = 0, so e_c = -u rest
        let e: Row = w.iter().filter(|t| t.0 != c).map(|&(j, v)| (j, -u * v)).collect();
        let users: Vec<usize> = self.users[c].drain().collect();
        for d in users {
            let old = self.expr[d].take().expect("eliminated");
            let k = coefficient(&old, c).expect("uses c");
            let mut without: Row = old.iter().copied().filter(|t| t.0 != c).collect();
            without = axpy(&without, k, &e)?;
            for &(j, _) in &old {
                if j != c && coefficient(&without, j).is_none() {
                    self.users[j].remove(&d);
                }
            }
            for &(j, _) in &without {
                self.users[j].insert(d);
            }
            self.expr[d] = Some(without);
        }
        for &(j, _) in &e {
            self.users[j].insert(c);
        }
        self.expr[c] = Some(e);
        self.step[c] = self.steps;
        self.steps += 1;
        let (touched, kept): (Vec<Row>, Vec<Row>) = std::mem::take(&mut self.core_rows)
            .into_iter()
            .partition(|r| coefficient(r, c).is_some());
        self.core_rows = kept;
        if !touched.is_empty() {
            self.core_cache = None;
        }
        for r in touched {
            self.insert(&r)?;
        }
        Some(())
    }

    fn core_lattice(&mut self) -> &IntLattice {
        if self.core_cache.is_none() {
            let mut l = IntLattice::new(self.dim);
            for r in &self.core_rows {
                l.add_terms(r).expect("columns in range");
            }
            self.core_cache = Some(l);
        }
        self.core_cache.as_ref().expect("built")
    }
}

impl AbelianPresentation {
    /// The smallest lattice containing `seeds` and closed under `act`,
    /// which must be additive (a group acting by its generators, say).
    /// Only images of vectors that enlarged the lattice are visited.
    /// `None` when the `i64` elimination overflowed.
    pub fn closure<F>(dim: usize, seeds: &[Row], act: F) -> Result<Option<Self>>
    where
        F: Fn(&[(usize, i64)]) -> Vec<Row>,
    {
        if seeds.iter().flatten().any(|(c, _)| *c >= dim) {
            return Err(Error::ShapeMismatch("column out of range".into()));
        }
        let mut sp = Spinner::new(dim);
        let mut queue: std::collections::VecDeque<Row> = seeds.iter().cloned().collect();
        // Vectors that would only enlarge the core wait until the queue is
        // empty, by which time most of them reduce to zero.
        let mut deferred: Vec<Row> = Vec::new();
        loop {
            let (w, defer) = match queue.pop_front() {
                Some(w) => (w, true),
                None => match deferred.pop() {
                    Some(w) => {
                        (w, false)
                    }
                    None => break,
                },
            };
            let Some(outcome) = sp.insert_or_defer(&w, defer) else { return Ok(None) };
            let Some(grew) = outcome else {
                deferred.push(w);
                continue;
            };
            if grew {
                for image in act(&w) {
                    if image.iter().any(|(c, _)| *c >= dim) {
                        return Err(Error::ShapeMismatch("column out of range".into()));
                    }
                    queue.push_back(image);
                }
            }
        }
        let mut core_col = vec![usize::MAX; dim];
        let mut kept = 0;
        for c in 0..dim {
            if sp.expr[c].is_none() {
                core_col[c] = kept;
                kept += 1;
            }
        }
        let mut core = IntLattice::new(kept);
        for row in &sp.core_rows {
            let terms: Vec<(usize, i64)> = row.iter().map(|&(c, v)| (core_col[c], v)).collect();
            core.add_terms(&terms)?;
        }
        Ok(Some(AbelianPresentation {
            dim,
            subst: sp.expr,
            step: sp.step,
            core_col,
            core,
        }))
    }
}

impl AbelianPresentation {
    pub fn new(dim: usize, relations: &[Vec<(usize, i64)>]) -> Result<Self> {
        if relations.iter().flatten().any(|(c, _)| *c >= dim) {
            return Err(Error::ShapeMismatch("column out of range".into()));
        }
        let reduced = Self::simplify(dim, relations);
        let (subst, step, rows) = match reduced {
            Some(x) => x,
            None => (vec![None; dim], vec![usize::MAX; dim], relations.to_vec()),
        };
        let mut core_col = vec![usize::MAX; dim];
        let mut kept = 0;
        for c in 0..dim {
            if subst[c].is_none() {
                core_col[c] = kept;
                kept += 1;
            }
        }
        let mut core = IntLattice::new(kept);
        for row in &rows {
            let terms: Vec<(usize, i64)> = row.iter().map(|&(c, v)| (core_col[c], v)).collect();
            core.add_terms(&terms)?;
        }
        Ok(AbelianPresentation {
            dim,
            subst,
            step,
            core_col,
            core,
        })
    }

    #[allow(clippy::type_complexity)]
    fn simplify(dim: usize, relations: &[Vec<(usize, i64)>]) -> Option<(Vec<Option<Row>>, Vec<usize>, Vec<Row>)> {
        let mut unique = std::collections::BTreeSet::new();
        for r in relations {
            let row = normalize_row(r)?;
            if !row.is_empty() {
                unique.insert(row);
            }
        }
        let rows: Vec<Option<Row>> = unique.into_iter().map(Some).collect();
        let mut col_rows = vec![HashSet::new(); dim];
        for (i, row) in rows.iter().enumerate() {
            for &(c, _) in row.as_ref().expect("fresh") {
                col_rows[c].insert(i);
            }
        }
        let mut e = Eliminator {
            rows,
            col_rows,
            subst: vec![None; dim],
            step: vec![usize::MAX; dim],
            steps: 0,
        };
        e.run()?;
        let rest: std::collections::BTreeSet<Row> = e.rows.into_iter().flatten().collect();
        Some((e.subst, e.step, rest.into_iter().collect()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of generators that survived elimination.
    pub fn core_dim(&self) -> usize {
        self.core.dim()
    }

    /// Canonical representative of the class of `v`, in core coordinates.
    pub fn normal_form_sparse(&self, v: &[(usize, i64)]) -> SparseVec {
        use std::collections::{BinaryHeap, HashMap};
        use std::cmp::Reverse;
        let mut acc: HashMap<usize, BigInt> = HashMap::new();
        let mut heap = BinaryHeap::new();
        for &(c, x) in v {
            *acc.entry(c).or_insert_with(BigInt::zero) += x;
            if self.subst[c].is_some() {
                heap.push(Reverse((self.step[c], c)));
            }
        }
        while let Some(Reverse((_, c))) = heap.pop() {
            let Some(w) = acc.remove(&c) else { continue };
            if w.is_zero() {
                continue;
            }
            for &(j, x) in self.subst[c].as_ref().expect("eliminated") {
                let e = acc.entry(j).or_insert_with(BigInt::zero);
                *e += &w * x;
                if self.subst[j].is_some() {
                    heap.push(Reverse((self.step[j], j)));
                }
            }
        }
        let mut out: SparseVec = acc
            .into_iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|(c, x)| (self.core_col[c], x))
            .collect();
        out.sort_by_key(|e| e.0);
        self.core.normal_form_sparse(out)
    }

    pub fn core_rank(&self) -> usize {
        self.core.rank()
    }

    pub fn contains(&self, v: &[(usize, i64)]) -> bool {
        self.normal_form_sparse(v).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn simple_membership() {
        let l = IntLattice::from_rows(2, &[vec![2, 0], vec![0, 3]]).unwrap();
        assert!(l.contains(&[4, -3]).unwrap());
        assert!(!l.contains(&[1, 0]).unwrap());
        assert!(!l.contains(&[0, 2]).unwrap());
        assert_eq!(l.rank(), 2);
    }

    #[test]
    fn gcd_combination() {
        // Rows (4, 1) and (6, 0): index 6, and 2(4, 1) - (6, 0) = (2, 2).
        let l = IntLattice::from_rows(2, &[vec![4, 1], vec![6, 0]]).unwrap();
        assert_eq!(l.hnf(), vec![big(&[2, 2]), big(&[0, 3])]);
        assert!(l.contains(&[2, 2]).unwrap());
        assert!(!l.contains(&[2, 1]).unwrap());
        assert!(!l.contains(&[1, 0]).unwrap());
        assert!(l.contains(&[0, 3]).unwrap());
    }

    #[test]
    fn torsion_detected() {
        // 2 * (1, 1) is in the lattice, (1, 1) is not.
        let l = IntLattice::from_rows(3, &[vec![2, 2, 0], vec![0, 0, 1]]).unwrap();
        assert!(!l.contains(&[1, 1, 0]).unwrap());
        assert!(l.contains(&[2, 2, 5]).unwrap());
    }

    #[test]
    fn normal_form_is_canonical() {
        let l = IntLattice::from_rows(3, &[vec![3, 1, 0], vec![0, 2, 4], vec![1, 1, 1]]).unwrap();
        let a = l.normal_form(&[5, 7, 9]).unwrap();
        let b = l.normal_form(&[5 + 3 - 1, 7 + 1 - 1, 9 - 1]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hnf_spans_same_lattice() {
        let rows = vec![vec![6, 4, 2, 0], vec![3, 9, 0, 1], vec![0, 5, 5, 5], vec![9, 13, 2, 1]];
        let l = IntLattice::from_rows(4, &rows).unwrap();
        let h: Vec<Vec<i64>> = l
            .hnf()
            .iter()
            .map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect())
            .collect();
        let back = IntLattice::from_rows(4, &h).unwrap();
        assert!(rows.iter().all(|r| back.contains(r).unwrap()));
        assert!(h.iter().all(|r| l.contains(r).unwrap()));
        assert_eq!(l.rank(), 3);
    }

    #[test]
    fn shape_errors() {
        let mut l = IntLattice::new(2);
        assert!(l.add_dense(&[1, 2, 3]).is_err());
        assert!(l.add_terms(&[(5, 1)]).is_err());
        assert!(l.contains(&[1]).is_err());
    }
    #[test]
    fn presentation_agrees_with_lattice() {
        let rows = vec![vec![6, 4, 2, 0], vec![3, 9, 0, 1], vec![0, 5, 5, 5], vec![1, -1, 0, 0], vec![0, 2, 0, 2]];
        let l = IntLattice::from_rows(4, &rows).unwrap();
        let terms: Vec<Vec<(usize, i64)>> = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, v)| **v != 0).map(|(c, v)| (c, *v)).collect())
            .collect();
        let p = AbelianPresentation::new(4, &terms).unwrap();
        assert!(p.core_dim() < 4);
        for a in -2..=2 {
            for b in -2..=2 {
                for c in -2..=2 {
                    for d in -2..=2 {
                        let v = [a, b, c, d];
                        let sparse: Vec<(usize, i64)> = v.iter().copied().enumerate().filter(|e| e.1 != 0).collect();
                        assert_eq!(p.contains(&sparse), l.contains(&v).unwrap(), "{v:?}");
                    }
                }
            }
        }
    }
}
