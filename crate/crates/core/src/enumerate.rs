//! Exhaustive census of nondegenerate braided sets on `n <= 4` points, up
//! to relabeling.
//!
//! The search assigns, for `i = 0, 1, ..`, the permutation `g_i` and the
//! permutation `f_i` together, and prunes on every braid triple whose
//! components are already determined.

use std::collections::BTreeSet;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::braided::BraidedMap;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::injectivity::is_injective;
use crate::json::SolutionJson;
use crate::par::{self, Parallelism};
use crate::quotients::{a0_quotient, g_quotient, rank};

pub const MAX_N: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Filter {
    #[default]
    All,
    Symmetric,
    Injective,
}

impl FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Filter::All),
            "symmetric" => Ok(Filter::Symmetric),
            "injective" => Ok(Filter::Injective),
            other => Err(Error::Parse(format!("unknown filter `{other}`"))),
        }
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Lexicographically smallest flattened table over all relabelings.
pub fn canonical_form(m: &BraidedMap) -> BraidedMap {
    canonical_with_stabilizer(m).0
}

/// Canonical form and the number of relabelings fixing `m`.
fn canonical_with_stabilizer(m: &BraidedMap) -> (BraidedMap, usize) {
    let mut best = m.clone();
    let mut best_flat = m.flat();
    let own = best_flat.clone();
    let mut fixed = 0;
    for p in permutations(m.n()) {
        let r = m.relabel(&p);
        let flat = r.flat();
        if flat == own {
            fixed += 1;
        }
        if flat < best_flat {
            best_flat = flat;
            best = r;
        }
    }
    (best, fixed)
}

/// Number of distinct relabelings of `m`.
pub fn orbit_size(m: &BraidedMap) -> usize {
    let n = m.n();
    let total: usize = (1..=n).product();
    total / canonical_with_stabilizer(m).1
}

struct Search<'a> {
    n: usize,
    perms: &'a [Vec<usize>],
    // g[x][y] = g_x(y), f[y][x] = f_y(x); rows below `level` are set.
    g: Vec<Vec<usize>>,
    f: Vec<Vec<usize>>,
    level: usize,
    found: Vec<BraidedMap>,
}

impl Search<'_> {
    #[inline]
    fn g(&self, x: usize, y: usize) -> Option<usize> {
        (x < self.level).then(|| self.g[x][y])
    }

    #[inline]
    fn f(&self, y: usize, x: usize) -> Option<usize> {
        (y < self.level).then(|| self.f[y][x])
    }

    #[inline]
    fn s(&self, x: usize, y: usize) -> (Option<usize>, Option<usize>) {
        (self.g(x, y), self.f(y, x))
    }

    /// Compares the braid triple componentwise; `false` only on a
    /// determined mismatch.
    fn triple_consistent(&self, x: usize, y: usize, z: usize) -> bool {
        // S1 S2 S1
        let (x1, y1) = self.s(x, y);
        let (y2, z2) = match y1 {
            Some(y1) => self.s(y1, z),
            None => (None, None),
        };
        let (l0, l1) = match (x1, y2) {
            (Some(a), Some(b)) => self.s(a, b),
            _ => (None, None),
        };
        // S2 S1 S2
        let (y3, z3) = self.s(y, z);
        let (r0, y4) = match y3 {
            Some(y3) => self.s(x, y3),
            None => (None, None),
        };
        let (r1, r2) = match (y4, z3) {
            (Some(a), Some(b)) => self.s(a, b),
            _ => (None, None),
        };
        let clash = |a: Option<usize>, b: Option<usize>| matches!((a, b), (Some(a), Some(b)) if a != b);
        !(clash(l0, r0) || clash(l1, r1) || clash(z2, r2))
    }

    fn consistent(&self) -> bool {
        let n = self.n;
        // Determined entries of S must be distinct.
        let mut seen = vec![false; n * n];
        for x in 0..self.level {
            for y in 0..self.level {
                let i = self.g[x][y] * n + self.f[y][x];
                if seen[i] {
                    return false;
                }
                seen[i] = true;
            }
        }
        (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| self.triple_consistent(x, y, z))))
    }

    fn run(&mut self) {
        if self.level == self.n {
            let map = BraidedMap::from_fn(self.n, |x, y| (self.g[x][y], self.f[y][x]));
            debug_assert!(map.check_braided());
            self.found.push(map);
            return;
        }
        let perms = self.perms;
        // g_0 is fixed by the partition.
        if self.level == 0 {
            self.extend_f();
            return;
        }
        for gi in perms {
            self.g[self.level] = gi.clone();
            self.extend_f();
        }
    }

    fn extend_f(&mut self) {
        let i = self.level;
        for fi in self.perms {
            self.f[i] = fi.clone();
            self.level = i + 1;
            if self.consistent() {
                self.run();
            }
            self.level = i;
        }
    }
}

/// All solutions with `g_0 = first_row`, not canonicalized.
fn search_partition(n: usize, perms: &[Vec<usize>], first_row: &[usize]) -> Vec<BraidedMap> {
    let mut s = Search {
        n,
        perms,
        g: vec![vec![0; n]; n],
        f: vec![vec![0; n]; n],
        level: 0,
        found: Vec::new(),
    };
    s.g[0] = first_row.to_vec();
    s.run();
    s.found
}

fn guard(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::Unsupported(format!("census size n = {n}; supported 1..={MAX_N}")));
    }
    if n == MAX_N && !cfg!(feature = "census4") {
        return Err(Error::Unsupported(format!(
            "n = {MAX_N} requires building with the `census4` feature"
        )));
    }
    Ok(())
}

/// Every nondegenerate braided set on `n` points, one canonical form per
/// relabeling class, sorted.
pub fn search_canonical(n: usize, mode: Parallelism, workers: usize) -> Result<Vec<BraidedMap>> {
    guard(n)?;
    let perms = permutations(n);
    let parts = par::with_workers(mode, workers, || {
        par::map_slice(mode, &perms, |row| {
            search_partition(n, &perms, row)
                .iter()
                .map(canonical_form)
                .collect::<BTreeSet<_>>()
        })
    });
    let all: BTreeSet<BraidedMap> = parts.into_iter().flatten().collect();
    Ok(all.into_iter().collect())
}

/// One census line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRecord {
    pub table: SolutionJson,
    pub orbit_size: usize,
    pub braided: bool,
    pub symmetric: bool,
    pub injective: bool,
    pub rank: usize,
    pub a0_order: usize,
    pub g_quotient_order: usize,
}

impl CensusRecord {
    pub fn of(m: &BraidedMap, caps: &Caps) -> Result<Self> {
        Ok(CensusRecord {
            table: SolutionJson::from(m),
            orbit_size: orbit_size(m),
            braided: m.check_braided(),
            symmetric: m.is_symmetric(),
            injective: is_injective(m, caps)?,
            rank: rank(m)?,
            a0_order: a0_quotient(m, caps.group)?.group.order(),
            g_quotient_order: g_quotient(m, caps.group)?.group.order(),
        })
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

pub fn enumerate_solutions(
    n: usize,
    filter: Filter,
    mode: Parallelism,
    workers: usize,
    caps: &Caps,
) -> Result<Vec<CensusRecord>> {
    let forms = search_canonical(n, mode, workers)?;
    let records = par::with_workers(mode, workers, || {
        par::map_slice(mode, &forms, |m| CensusRecord::of(m, caps))
    });
    let mut out = Vec::with_capacity(records.len());
    for r in records {
        let r = r?;
        let keep = match filter {
            Filter::All => true,
            Filter::Symmetric => r.symmetric,
            Filter::Injective => r.injective,
        };
        if keep {
            out.push(r);
        }
    }
    Ok(out)
}

/// JSON lines, one record per line.
pub fn write_census<W: Write>(records: &[CensusRecord], mut w: W) -> std::io::Result<()> {
    for r in records {
        writeln!(w, "{}", r.to_json_line())?;
    }
    Ok(())
}
