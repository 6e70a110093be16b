//! Finite images of the structure group `G_X` (acting on `X x X` through
//! `o` and `*`) and of the derived structure group `A_X` (acting on `X`
//! through `phi`), plus the rank.

use serde::Serialize;

use crate::braided::{BraidedMap, PhiTable};
use crate::error::{Error, Result};
use crate::perm::{Perm, PermGroup};

/// Image of `G_X` in `Permut(X) x Permut(X)`, realized on `2n` points.
#[derive(Debug, Clone)]
pub struct GQuotient {
    pub group: PermGroup,
    /// `genmap[x]` is the element index of `(x o -, x * -)`.
    pub genmap: Vec<usize>,
}

/// The finite group `A0` generated by the maps `y -> phi(y, x)`.
#[derive(Debug, Clone)]
pub struct AQuotient {
    pub group: PermGroup,
    /// `pmap[x]` is the element index of `p(x) = phi(-, x)`.
    pub pmap: Vec<usize>,
}

impl AQuotient {
    pub fn p(&self, x: usize) -> &Perm {
        self.group.element(self.pmap[x])
    }
}

pub(crate) fn require_solution(m: &BraidedMap) -> Result<()> {
    if !m.check_nondegenerate() {
        return Err(Error::Degenerate("g_x or f_y is not a permutation".into()));
    }
    if !m.check_braided() {
        return Err(Error::NotBraided);
    }
    Ok(())
}

pub fn g_quotient(m: &BraidedMap, cap: usize) -> Result<GQuotient> {
    require_solution(m)?;
    let t = m.action_tables()?;
    let n = m.n();
    let gens: Vec<Perm> = (0..n)
        .map(|x| Perm::from_images(&t.circ_row(x)).direct_sum(&Perm::from_images(&t.star_row(x))))
        .collect();
    let group = PermGroup::generate(2 * n, gens.clone(), cap)?;
    let genmap = gens.iter().map(|g| group.index_of(g).expect("generator in closure")).collect();
    Ok(GQuotient { group, genmap })
}

pub fn a0_quotient(m: &BraidedMap, cap: usize) -> Result<AQuotient> {
    require_solution(m)?;
    let phi = m.phi_table()?;
    a0_from_phi(&phi, cap)
}

pub(crate) fn a0_from_phi(phi: &PhiTable, cap: usize) -> Result<AQuotient> {
    let n = phi.n();
    let gens: Vec<Perm> = (0..n).map(|x| Perm::from_images(&phi.column(x))).collect();
    let group = PermGroup::generate(n, gens.clone(), cap)?;
    let pmap = gens.iter().map(|g| group.index_of(g).expect("generator in closure")).collect();
    Ok(AQuotient { group, pmap })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.0[hi] = lo;
        }
    }
}

/// Classes of the smallest equivalence relation with `y ~ phi(y, x)`,
/// each sorted, ordered by smallest member.
pub fn rank_classes(m: &BraidedMap) -> Result<Vec<Vec<usize>>> {
    require_solution(m)?;
    let phi = m.phi_table()?;
    Ok(classes_from_phi(&phi))
}

pub(crate) fn classes_from_phi(phi: &PhiTable) -> Vec<Vec<usize>> {
    let n = phi.n();
    let mut uf = UnionFind::new(n);
    for y in 0..n {
        for x in 0..n {
            uf.union(y, phi.get(y, x));
        }
    }
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); n];
    for y in 0..n {
        let r = uf.find(y);
        classes[r].push(y);
    }
    classes.retain(|c| !c.is_empty());
    classes
}

pub fn rank(m: &BraidedMap) -> Result<usize> {
    Ok(rank_classes(m)?.len())
}

/// `(rank == n) == involutive`.
pub fn rank_equality_is_symmetric(m: &BraidedMap) -> Result<bool> {
    Ok((rank(m)? == m.n()) == m.check_involutive())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientReport {
    pub rank: usize,
    pub g_quotient_order: usize,
    pub a0_order: usize,
    pub classes: Vec<Vec<usize>>,
}

pub fn report(m: &BraidedMap, cap: usize) -> Result<QuotientReport> {
    let classes = rank_classes(m)?;
    Ok(QuotientReport {
        rank: classes.len(),
        g_quotient_order: g_quotient(m, cap)?.group.order(),
        a0_order: a0_quotient(m, cap)?.group.order(),
        classes,
    })
}
