//! Bijective 1-cocycles.
//!
//! Two directions are covered. Synthetically, explicit finite groups `G`,
//! `A`, an action of `G` on `A`, a bijective cocycle `pi: G -> A` and an
//! invariant subset `X` of `A` produce a nondegenerate braided injective
//! set. Analytically, for a given solution the cocycle `G_X -> A_X` is
//! evaluated on words through the finite image `A0`.

use crate::braided::{ActionTables, BraidedMap};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::quotients::{a0_from_phi, require_solution, AQuotient};

fn check_action_shape(g: &FiniteGroup, a: &FiniteGroup, rho: &[Vec<usize>], pi: &[usize]) -> Result<()> {
    if rho.len() != g.order() {
        return Err(Error::MalformedTables(format!(
            "rhoGA has {} rows, G has order {}",
            rho.len(),
            g.order()
        )));
    }
    if rho.iter().any(|r| r.len() != a.order() || r.iter().any(|&v| v >= a.order())) {
        return Err(Error::MalformedTables("rhoGA rows must map A to A".into()));
    }
    if pi.len() != g.order() || pi.iter().any(|&v| v >= a.order()) {
        return Err(Error::MalformedTables("pi must map G to A".into()));
    }
    Ok(())
}

fn is_bijection(f: &[usize], size: usize) -> bool {
    let mut seen = vec![false; size];
    f.len() == size
        && f.iter().all(|&v| {
            let fresh = v < size && !seen[v];
            if fresh {
                seen[v] = true;
            }
            fresh
        })
}

/// `pi(g1 g2) = (g2^{-1} * pi(g1)) . pi(g2)` for all pairs, and `pi` is a
/// bijection. The action is `g * a = rho[g][a]`.
pub fn verify_cocycle(g: &FiniteGroup, a: &FiniteGroup, rho: &[Vec<usize>], pi: &[usize]) -> Result<bool> {
    check_action_shape(g, a, rho, pi)?;
    if !is_bijection(pi, a.order()) {
        return Ok(false);
    }
    Ok(cocycle_identity_holds(g, a, rho, pi))
}

fn cocycle_identity_holds(g: &FiniteGroup, a: &FiniteGroup, rho: &[Vec<usize>], pi: &[usize]) -> bool {
    (0..g.order()).all(|g1| {
        (0..g.order()).all(|g2| {
            let lhs = pi[g.mul(g1, g2)];
            let rhs = a.mul(rho[g.inv(g2)][pi[g1]], pi[g2]);
            lhs == rhs
        })
    })
}

/// Cocycle data `(G, A, rho, pi, X)`; the action of `G x| A` on `X` is the
/// one induced on `A` (through `rho` and conjugation), and `X -> A` is the
/// inclusion.
#[derive(Debug, Clone)]
pub struct SevenTuple {
    pub g: FiniteGroup,
    pub a: FiniteGroup,
    /// `rho[g][a] = g * a`.
    pub rho: Vec<Vec<usize>>,
    pub pi: Vec<usize>,
    /// Elements of `A`; solution element `i` is `x[i]`.
    pub x: Vec<usize>,
}

impl SevenTuple {
    /// Checks every invariant, naming the first failure.
    pub fn validate(&self) -> Result<()> {
        let (g, a) = (&self.g, &self.a);
        check_action_shape(g, a, &self.rho, &self.pi)?;
        for (gi, r) in self.rho.iter().enumerate() {
            if !a.is_automorphism(r) {
                return Err(Error::InvariantViolation(format!("rhoGA[{gi}] is not an automorphism of A")));
            }
        }
        for g1 in 0..g.order() {
            for g2 in 0..g.order() {
                let prod = &self.rho[g.mul(g1, g2)];
                if (0..a.order()).any(|e| prod[e] != self.rho[g1][self.rho[g2][e]]) {
                    return Err(Error::InvariantViolation(format!(
                        "rhoGA is not a homomorphism at ({g1}, {g2})"
                    )));
                }
            }
        }
        if !is_bijection(&self.pi, a.order()) {
            return Err(Error::InvariantViolation("pi is not a bijection".into()));
        }
        if !cocycle_identity_holds(g, a, &self.rho, &self.pi) {
            return Err(Error::InvariantViolation("pi violates the cocycle identity".into()));
        }
        if self.x.is_empty() {
            return Err(Error::InvariantViolation("X is empty".into()));
        }
        let mut member = vec![false; a.order()];
        for &e in &self.x {
            if e >= a.order() || member[e] {
                return Err(Error::InvariantViolation("X must list distinct elements of A".into()));
            }
            member[e] = true;
        }
        for &e in &self.x {
            if self.rho.iter().any(|r| !member[r[e]]) {
                return Err(Error::InvariantViolation("X is not invariant under the action of G".into()));
            }
            if (0..a.order()).any(|h| !member[a.conjugate(h, e)]) {
                return Err(Error::InvariantViolation("X is not invariant under conjugation in A".into()));
            }
        }
        Ok(())
    }

    /// `S(x, y) = (pi(pi^{-1}(x) pi^{-1}(y) pi^{-1}(w)^{-1}), w)` with
    /// `w = rho(pi^{-1}(y)^{-1})(x)`.
    pub fn to_solution(&self) -> Result<BraidedMap> {
        self.validate()?;
        let (g, a) = (&self.g, &self.a);
        let mut pi_inv = vec![0; a.order()];
        for (gi, &ai) in self.pi.iter().enumerate() {
            pi_inv[ai] = gi;
        }
        let mut pos = vec![usize::MAX; a.order()];
        for (i, &e) in self.x.iter().enumerate() {
            pos[e] = i;
        }
        let n = self.x.len();
        let mut table = Vec::with_capacity(n * n);
        for &x in &self.x {
            for &y in &self.x {
                let gy = pi_inv[y];
                let w = self.rho[g.inv(gy)][x];
                let prod = g.mul(g.mul(pi_inv[x], gy), g.inv(pi_inv[w]));
                let u = self.pi[prod];
                if pos[u] == usize::MAX || pos[w] == usize::MAX {
                    return Err(Error::InvariantViolation("constructed value left X".into()));
                }
                table.push((pos[u], pos[w]));
            }
        }
        BraidedMap::new(n, table)
    }
}

pub fn seven_tuple_to_solution(t: &SevenTuple) -> Result<BraidedMap> {
    t.to_solution()
}

/// A letter of a word in the free group on `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    Gen(usize),
    Inv(usize),
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::Gen(x) => Letter::Inv(x),
            Letter::Inv(x) => Letter::Gen(x),
        }
    }

    pub fn elem(self) -> usize {
        match self {
            Letter::Gen(x) | Letter::Inv(x) => x,
        }
    }
}

/// The cocycle `G_X -> A_X` pushed to the finite image `A0`, together with
/// the induced `*`-action of `G_X` on `A0`.
#[derive(Debug, Clone)]
pub struct WordCocycle {
    a0: AQuotient,
    tables: ActionTables,
    // auto[x][h] = x * h, auto_inv[x][h] = x^{-1} * h, as element indices.
    auto: Vec<Vec<usize>>,
    auto_inv: Vec<Vec<usize>>,
}

/// Extends `p(z) -> p(sigma(z))` along the BFS tree of `A0` and checks the
/// result is a well-defined automorphism.
fn extend_generator_map(a0: &AQuotient, sigma: &[usize]) -> Result<Vec<usize>> {
    let group = &a0.group;
    let order = group.order();
    let mut image = vec![usize::MAX; order];
    image[group.identity_index()] = group.identity_index();
    // BFS parents precede children in BFS order but not in sorted order, so
    // resolve along each element's word.
    for e in 0..order {
        let mut acc = group.identity_index();
        for gen in group.word(e) {
            acc = group.mul(acc, a0.pmap[sigma[gen]]);
        }
        image[e] = acc;
    }
    for e in 0..order {
        for z in 0..sigma.len() {
            let lhs = image[group.mul(e, a0.pmap[z])];
            let rhs = group.mul(image[e], a0.pmap[sigma[z]]);
            if lhs != rhs {
                return Err(Error::NotAnAutomorphism(format!(
                    "images of p(z) are inconsistent at element {e}, generator {z}"
                )));
            }
        }
    }
    if !is_bijection(&image, order) {
        return Err(Error::NotAnAutomorphism("extension is not bijective".into()));
    }
    Ok(image)
}

impl WordCocycle {
    pub fn new(m: &BraidedMap, caps: &Caps) -> Result<Self> {
        require_solution(m)?;
        let tables = m.action_tables()?;
        let phi = tables.phi_table();
        let a0 = a0_from_phi(&phi, caps.group)?;
        let n = m.n();
        let auto = (0..n)
            .map(|x| extend_generator_map(&a0, &tables.star_row(x)))
            .collect::<Result<Vec<_>>>()?;
        let auto_inv = (0..n)
            .map(|x| extend_generator_map(&a0, &tables.star_inv_row(x)))
            .collect::<Result<Vec<_>>>()?;
        Ok(WordCocycle {
            a0,
            tables,
            auto,
            auto_inv,
        })
    }

    pub fn a0(&self) -> &AQuotient {
        &self.a0
    }

    /// Action of a single letter on `A0`, as element indices.
    pub fn letter_action(&self, l: Letter) -> &[usize] {
        match l {
            Letter::Gen(x) => &self.auto[x],
            Letter::Inv(x) => &self.auto_inv[x],
        }
    }

    /// Action of a word: `(l1 .. lk) * h = l1 * (.. (lk * h))`.
    pub fn word_action(&self, word: &[Letter]) -> Vec<usize> {
        let order = self.a0.group.order();
        let mut out: Vec<usize> = (0..order).collect();
        for &l in word.iter().rev() {
            let act = self.letter_action(l);
            for v in &mut out {
                *v = act[*v];
            }
        }
        out
    }

    /// `Pi(w)`, an element index of `A0`.
    pub fn evaluate(&self, word: &[Letter]) -> usize {
        let group = &self.a0.group;
        let mut acc = group.identity_index();
        for &l in word {
            acc = match l {
                // Pi(w x) = (x^{-1} * Pi(w)) . p(x)
                Letter::Gen(x) => group.mul(self.auto_inv[x][acc], self.a0.pmap[x]),
                // Pi(w x^{-1}) = (x * Pi(w)) . p(x * x)^{-1}
                Letter::Inv(x) => {
                    let xx = self.tables.star(x, x);
                    group.mul(self.auto[x][acc], group.inv(self.a0.pmap[xx]))
                }
            };
        }
        acc
    }

    /// Counts violations over all words of length `<= max_len`: every
    /// single application of a defining relation `x y = (x o y)(y^{-1} * x)`
    /// (or its inverse form) and every cancellation of an adjacent inverse
    /// pair must leave `Pi` unchanged. Returns `(words_checked, violations)`.
    pub fn check_relations(&self, max_len: usize) -> (usize, usize) {
        let n = self.tables.n();
        let letters: Vec<Letter> = (0..n).flat_map(|x| [Letter::Gen(x), Letter::Inv(x)]).collect();
        let mut checked = 0;
        let mut violations = 0;
        let mut words: Vec<Vec<Letter>> = vec![vec![]];
        for _len in 0..=max_len {
            let mut next = Vec::new();
            for w in &words {
                checked += 1;
                let value = self.evaluate(w);
                for i in 0..w.len().saturating_sub(1) {
                    let mut rewritten: Option<Vec<Letter>> = None;
                    match (w[i], w[i + 1]) {
                        (Letter::Gen(x), Letter::Gen(y)) => {
                            let mut r = w.clone();
                            r[i] = Letter::Gen(self.tables.circ(x, y));
                            r[i + 1] = Letter::Gen(self.tables.star_inv(y, x));
                            rewritten = Some(r);
                        }
                        // (x y)^{-1} = y^{-1} x^{-1}
                        (Letter::Inv(y), Letter::Inv(x)) => {
                            let mut r = w.clone();
                            r[i] = Letter::Inv(self.tables.star_inv(y, x));
                            r[i + 1] = Letter::Inv(self.tables.circ(x, y));
                            rewritten = Some(r);
                        }
                        _ => {}
                    }
                    if let Some(r) = rewritten {
                        if self.evaluate(&r) != value {
                            violations += 1;
                        }
                    }
                    if w[i + 1] == w[i].inverse() {
                        let mut r = w.clone();
                        r.drain(i..i + 2);
                        if self.evaluate(&r) != value {
                            violations += 1;
                        }
                    }
                }
                if w.len() < max_len {
                    for &l in &letters {
                        let mut e = w.clone();
                        e.push(l);
                        next.push(e);
                    }
                }
            }
            words = next;
        }
        (checked, violations)
    }
}

pub fn word_cocycle(m: &BraidedMap, word: &[Letter], caps: &Caps) -> Result<usize> {
    Ok(WordCocycle::new(m, caps)?.evaluate(word))
}

/// The automorphism of `A0` induced by `g * -` for a word `g`, as a map on
/// element indices.
pub fn star_action_on_a0(m: &BraidedMap, word: &[Letter], caps: &Caps) -> Result<Vec<usize>> {
    Ok(WordCocycle::new(m, caps)?.word_action(word))
}
