//! Finite groups given by dense multiplication tables.

use crate::error::{Error, Result};
use crate::perm::{Perm, PermGroup};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    id: usize,
}

impl FiniteGroup {
    /// Validates a Cayley table: closure, identity, inverses, associativity.
    pub fn from_table(mul: &[Vec<usize>]) -> Result<Self> {
        let order = mul.len();
        if order == 0 {
            return Err(Error::MalformedTables("empty group".into()));
        }
        if mul.iter().any(|row| row.len() != order) {
            return Err(Error::MalformedTables("multiplication table is not square".into()));
        }
        if mul.iter().flatten().any(|&v| v >= order) {
            return Err(Error::MalformedTables("product out of range".into()));
        }
        let flat: Vec<u32> = mul.iter().flatten().map(|&v| v as u32).collect();
        let at = |a: usize, b: usize| flat[a * order + b] as usize;
        let id = (0..order)
            .find(|&e| (0..order).all(|a| at(e, a) == a && at(a, e) == a))
            .ok_or_else(|| Error::MalformedTables("no identity element".into()))?;
        let mut inv = vec![0u32; order];
        for a in 0..order {
            let b = (0..order)
                .find(|&b| at(a, b) == id && at(b, a) == id)
                .ok_or_else(|| Error::MalformedTables(format!("element {a} has no inverse")))?;
            inv[a] = b as u32;
        }
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::MalformedTables(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup { order, mul: flat, inv, id })
    }

    /// `Z_n` with `a * b = a + b mod n`.
    pub fn cyclic(n: usize) -> Self {
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(&table).expect("cyclic table is a group")
    }

    /// The group of all permutations of `0..k`, elements in lexicographic
    /// order of their image arrays, product `(ab)(i) = a(b(i))`.
    pub fn symmetric(k: usize) -> Self {
        let gens = if k < 2 {
            vec![]
        } else {
            let mut swap: Vec<usize> = (0..k).collect();
            swap.swap(0, 1);
            let cycle: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
            vec![Perm::from_images(&swap), Perm::from_images(&cycle)]
        };
        let g = PermGroup::generate(k, gens, usize::MAX).expect("no cap");
        Self::from_perm_group(&g)
    }

    pub fn from_perm_group(g: &PermGroup) -> Self {
        let order = g.order();
        let mut mul = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                mul.push(g.mul(a, b) as u32);
            }
        }
        let inv = (0..order).map(|a| g.inv(a) as u32).collect();
        FiniteGroup {
            order,
            mul,
            inv,
            id: g.identity_index(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.id
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    /// `g a g^{-1}`.
    pub fn conjugate(&self, g: usize, a: usize) -> usize {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn conjugacy_class(&self, a: usize) -> Vec<usize> {
        let mut class: Vec<usize> = (0..self.order).map(|g| self.conjugate(g, a)).collect();
        class.sort_unstable();
        class.dedup();
        class
    }

    /// `f` is a bijective homomorphism from `self` to `other`.
    pub fn is_isomorphism(&self, other: &FiniteGroup, f: &[usize]) -> bool {
        if f.len() != self.order || other.order != self.order {
            return false;
        }
        let mut seen = vec![false; other.order];
        for &v in f {
            if v >= other.order || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        (0..self.order).all(|a| (0..self.order).all(|b| f[self.mul(a, b)] == other.mul(f[a], f[b])))
    }

    /// `f` (a map on elements) is an automorphism.
    pub fn is_automorphism(&self, f: &[usize]) -> bool {
        self.is_isomorphism(self, f)
    }

    /// The permutation `b -> a b` of the elements.
    pub fn left_regular(&self, a: usize) -> Vec<usize> {
        (0..self.order).map(|b| self.mul(a, b)).collect()
    }
}
