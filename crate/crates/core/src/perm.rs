//! Permutations and finite permutation groups built by breadth-first
//! closure of a generating set.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// A permutation of `0..degree`, stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Box<[u32]>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u32).collect())
    }

    /// Panics unless `images` is a permutation.
    pub fn from_images(images: &[usize]) -> Self {
        Self::try_from_images(images).expect("not a permutation")
    }

    pub fn try_from_images(images: &[usize]) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in images {
            if i >= images.len() || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Perm(images.iter().map(|&i| i as u32).collect()))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i as usize).collect()
    }

    /// `self . other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p as usize] = i as u32;
        }
        Perm(inv.into_boxed_slice())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &p)| i as u32 == p)
    }

    /// Concatenation acting on `0..a+b`: `self` on the first block,
    /// `other` on the second.
    pub fn direct_sum(&self, other: &Perm) -> Perm {
        let shift = self.degree() as u32;
        Perm(self.0.iter().copied().chain(other.0.iter().map(|&i| i + shift)).collect())
    }

    /// Cycle decomposition including fixed points, each cycle starting at
    /// its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut i = self.apply(start);
            while i != start {
                seen[i] = true;
                cycle.push(i);
                i = self.apply(i);
            }
            out.push(cycle);
        }
        out
    }

    /// Multiplicative order (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| num_integer::lcm(acc, c.len() as u64))
    }
}

/// A finite permutation group given by generators, with every element
/// listed in ascending lexicographic order (identity first).
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    // BFS spanning tree: element = parent . generators[gen].
    parent: Vec<Option<(usize, usize)>>,
}

impl PermGroup {
    /// Closes `generators` under composition. Fails once the closure would
    /// exceed `cap` elements.
    pub fn generate(degree: usize, generators: Vec<Perm>, cap: usize) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::ShapeMismatch(format!(
                "generator of degree {} in a group of degree {degree}",
                g.degree()
            )));
        }
        let mut elements = vec![Perm::identity(degree)];
        let mut parent = vec![None];
        let mut index = HashMap::new();
        index.insert(elements[0].clone(), 0);
        // Generators already in the closure so far add nothing; each new
        // one restarts the sweep over all elements.
        let mut active: Vec<usize> = Vec::new();
        for (gi, g) in generators.iter().enumerate() {
            if index.contains_key(g) {
                continue;
            }
            active.push(gi);
            let mut head = 0;
            while head < elements.len() {
                for &gj in &active {
                    let next = elements[head].compose(&generators[gj]);
                    if index.contains_key(&next) {
                        continue;
                    }
                    if elements.len() >= cap {
                        return Err(Error::CapExceeded {
                            what: "permutation group closure",
                            cap,
                        });
                    }
                    index.insert(next.clone(), elements.len());
                    elements.push(next);
                    parent.push(Some((head, gj)));
                }
                head += 1;
            }
        }

        // Re-index into sorted order.
        let mut order: Vec<usize> = (0..elements.len()).collect();
        order.sort_by(|&a, &b| elements[a].cmp(&elements[b]));
        let mut new_pos = vec![0; elements.len()];
        for (new, &old) in order.iter().enumerate() {
            new_pos[old] = new;
        }
        let sorted: Vec<Perm> = order.iter().map(|&old| elements[old].clone()).collect();
        let sorted_parent = order
            .iter()
            .map(|&old| parent[old].map(|(p, g)| (new_pos[p], g)))
            .collect();
        let index = sorted.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Ok(PermGroup {
            degree,
            generators,
            elements: sorted,
            index,
            parent: sorted_parent,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains_key(p)
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    /// Index of `elements[a] . elements[b]`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].compose(&self.elements[b])]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.index[&self.elements[a].inverse()]
    }

    /// A word in generator indices whose left-to-right product is element
    /// `i`, following the BFS tree.
    pub fn word(&self, mut i: usize) -> Vec<usize> {
        let mut word = Vec::new();
        while let Some((p, g)) = self.parent[i] {
            word.push(g);
            i = p;
        }
        word.reverse();
        word
    }

    /// BFS parent of element `i` as `(parent, generator)`, `None` for the identity.
    pub fn tree_parent(&self, i: usize) -> Option<(usize, usize)> {
        self.parent[i]
    }

    /// Closure check: every product of an element with a generator and every
    /// inverse is listed.
    pub fn is_closed(&self) -> bool {
        self.elements.iter().all(|e| {
            self.contains(&e.inverse()) && self.generators.iter().all(|g| self.contains(&e.compose(g)))
        })
    }
}
