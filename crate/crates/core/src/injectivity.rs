//! Injectivity of `X -> G_X`, decided through the module `M_X`.
//!
//! `M_X` is presented over the finite group `A0` by generators `v_x` and
//! relations `p(y)^{-1} v_x + v_y = p(x)^{-1} v_{phi(y,x)} + v_x`. Translating
//! every relation by every element of `A0` turns it into a presentation of
//! an abelian group on the basis `e(a, x) = a v_x`, so deciding whether
//! `v_x = v_y` is an integer lattice membership question.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::braided::{ActionTables, BraidedMap, PhiTable};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::lattice::{AbelianPresentation, SparseVec};
use crate::perm::{Perm, PermGroup};
use crate::quotients::{a0_from_phi, classes_from_phi, require_solution, AQuotient};

/// `phi(x, x) = x` for all `x`, and `phi(y, x) = y` iff `phi(x, y) = x`.
pub fn necessary_conditions(m: &BraidedMap) -> Result<bool> {
    require_solution(m)?;
    let phi = m.phi_table()?;
    Ok(necessary_from_phi(&phi))
}

fn necessary_from_phi(phi: &PhiTable) -> bool {
    let n = phi.n();
    (0..n).all(|x| phi.get(x, x) == x)
        && (0..n).all(|y| (0..n).all(|x| (phi.get(y, x) == y) == (phi.get(x, y) == x)))
}

#[derive(Debug, Clone)]
pub struct MModule {
    pub a0: AQuotient,
    pub n: usize,
    pub relations: AbelianPresentation,
}

impl MModule {
    pub fn dim(&self) -> usize {
        self.a0.group.order() * self.n
    }

    /// Column of the basis vector `e(a, x)`.
    pub fn column(&self, a: usize, x: usize) -> usize {
        a * self.n + x
    }

    /// Column of `e(identity, x)`, the image of `v_x`.
    pub fn generator_column(&self, x: usize) -> usize {
        self.column(self.a0.group.identity_index(), x)
    }

    pub fn generator_normal_form(&self, x: usize) -> SparseVec {
        self.relations.normal_form_sparse(&[(self.generator_column(x), 1)])
    }

    /// `e(1, x) - e(1, y)` lies in the relation lattice.
    pub fn identifies(&self, x: usize, y: usize) -> bool {
        if x == y {
            return true;
        }
        let (cx, cy) = (self.generator_column(x), self.generator_column(y));
        self.relations.contains(&[(cx, 1), (cy, -1)])
    }
}

/// The relation rows `e(a p(y)^{-1}, x) + e(a, y) - e(a p(x)^{-1}, phi(y, x)) - e(a, x)`
/// for every `a` in `A0` and `(y, x)` in `X^2`, as term lists.
pub fn relation_terms(a0: &AQuotient, phi: &PhiTable) -> Vec<Vec<(usize, i64)>> {
    let all: Vec<usize> = (0..phi.n()).collect();
    relation_terms_for(a0, phi, &all)
}

/// The relation rows for `x` in `xs` only.
pub fn relation_terms_for(a0: &AQuotient, phi: &PhiTable, xs: &[usize]) -> Vec<Vec<(usize, i64)>> {
    let n = phi.n();
    let group = &a0.group;
    let order = group.order();
    let p_inv: Vec<_> = (0..n).map(|x| group.element(a0.pmap[x]).inverse()).collect();
    // right[a][x] = index of a . p(x)^{-1}
    let right: Vec<Vec<usize>> = (0..order)
        .map(|a| {
            (0..n)
                .map(|x| group.index_of(&group.element(a).compose(&p_inv[x])).expect("closed"))
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(order * n * xs.len());
    for a in 0..order {
        for y in 0..n {
            for &x in xs {
                out.push(vec![
                    (right[a][y] * n + x, 1),
                    (a * n + y, 1),
                    (right[a][x] * n + phi.get(y, x), -1),
                    (a * n + x, -1),
                ]);
            }
        }
    }
    out
}

/// A set `K` of points such that the relations with `x` in `K` imply all
/// others: points whose maps `p(x)` generate `A0`, plus the smallest point
/// of each orbit.
///
/// In the derived structure group conjugation by `x` acts on generators as
/// `p(x)`, and `p(w o x) = p(w) p(x) p(w)^{-1}`. So once the relations for
/// `x` in `K` hold, conjugation by every point of the `A0`-orbits of `K`,
/// which is all of `X`, acts as required.
pub fn relation_support(a0: &AQuotient, phi: &PhiTable, cap: usize) -> Result<Vec<usize>> {
    let (_, support) = labels_and_support(a0, phi, cap)?;
    Ok(support)
}

/// `(L, K)`: `L` a set of points whose maps `p(x)` generate `A0`, and
/// `K = L` plus the smallest point of each orbit.
fn labels_and_support(a0: &AQuotient, phi: &PhiTable, cap: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = phi.n();
    let target = a0.group.order();
    let mut support = Vec::new();
    let mut gens: Vec<Perm> = Vec::new();
    let mut sub = PermGroup::generate(n, Vec::new(), cap)?;
    for x in 0..n {
        if sub.order() == target {
            break;
        }
        let px = a0.p(x);
        if !sub.contains(px) {
            support.push(x);
            gens.push(px.clone());
            sub = PermGroup::generate(n, gens.clone(), cap)?;
        }
    }
    let labels = support.clone();
    for class in classes_from_phi(phi) {
        support.push(class[0]);
    }
    support.sort_unstable();
    support.dedup();
    Ok((labels, support))
}

pub fn build_m_module(m: &BraidedMap, caps: &Caps) -> Result<MModule> {
    require_solution(m)?;
    let phi = m.phi_table()?;
    let a0 = a0_from_phi(&phi, caps.group)?;
    module_from_parts(a0, &phi, caps)
}

fn module_from_parts(a0: AQuotient, phi: &PhiTable, caps: &Caps) -> Result<MModule> {
    let n = phi.n();
    let dim = a0.group.order() * n;
    if dim > caps.module {
        return Err(Error::CapExceeded {
            what: "M_X dimension",
            cap: caps.module,
        });
    }
    let relations = AbelianPresentation::new(dim, &relation_terms(&a0, phi))?;
    Ok(MModule { a0, n, relations })
}

/// Left multiplication tables of `A0`: `rows[a][g]` is the index of `a . g`.
fn left_multiplication(a0: &AQuotient) -> Vec<Vec<u32>> {
    let group = &a0.group;
    let order = group.order();
    let gens: Vec<usize> = {
        let mut g = a0.pmap.clone();
        g.sort_unstable();
        g.dedup();
        g
    };
    let by_gen: Vec<Vec<u32>> = gens
        .iter()
        .map(|&s| {
            (0..order)
                .map(|g| group.index_of(&group.element(s).compose(group.element(g))).expect("closed") as u32)
                .collect()
        })
        .collect();
    let id = group.identity_index();
    let mut rows: Vec<Option<Vec<u32>>> = vec![None; order];
    rows[id] = Some((0..order as u32).collect());
    let mut queue = std::collections::VecDeque::from([id]);
    while let Some(a) = queue.pop_front() {
        for table in &by_gen {
            let b = table[a] as usize;
            if rows[b].is_none() {
                let ra = rows[a].as_ref().expect("visited");
                rows[b] = Some(ra.iter().map(|&g| table[g as usize]).collect());
                queue.push_back(b);
            }
        }
    }
    rows.into_iter().map(|r| r.expect("A0 is generated by the p(x)")).collect()
}

/// `M_X` after eliminating generators: with `L` and `K` from
/// [`relation_support`], every `v_z` with `z` outside `K` is reached from
/// `K` along `z = phi(y, x)`, `x` in `L`, and substituted by
/// `v_z = p(x) v_y + p(x) (p(y)^{-1} - 1) v_x`. That relation has the unit
/// coefficient `p(x)^{-1}` on `v_z`, so this is an exact Tietze move. What
/// remains is `Z[A0]^K` modulo the relations with `x` in `K`, flattened
/// with column `a * |K| + i` for `a v_{K[i]}`.
struct ReducedModule {
    relations: AbelianPresentation,
    // images of v_x in the flattened coordinates
    images: Vec<Vec<(usize, i64)>>,
}

impl ReducedModule {
    fn new(a0: &AQuotient, phi: &PhiTable, caps: &Caps) -> Result<Self> {
        let n = phi.n();
        let order = a0.group.order();
        let (labels, support) = labels_and_support(a0, phi, caps.group)?;
        let r = support.len();
        let dim = order * r;
        if dim > caps.module {
            return Err(Error::CapExceeded {
                what: "M_X dimension",
                cap: caps.module,
            });
        }
        let mul = left_multiplication(a0);
        let group = &a0.group;
        let inv: Vec<usize> = (0..n).map(|x| group.inv(a0.pmap[x])).collect();
        let overflow = std::cell::Cell::new(false);
        // h . w for a flattened vector w
        let translate = |h: usize, w: &[(usize, i64)], coef: i64, out: &mut Vec<(usize, i64)>| {
            let row = &mul[h];
            for &(c, v) in w {
                match v.checked_mul(coef) {
                    Some(x) => out.push((row[c / r] as usize * r + c % r, x)),
                    None => overflow.set(true),
                }
            }
        };
        let collect_terms = |terms: Vec<(usize, i64)>| match collect_terms(terms) {
            Some(t) => t,
            None => {
                overflow.set(true);
                Vec::new()
            }
        };
        let id = group.identity_index();
        let mut images: Vec<Option<Vec<(usize, i64)>>> = vec![None; n];
        let mut queue = std::collections::VecDeque::new();
        for (i, &k) in support.iter().enumerate() {
            images[k] = Some(vec![(id * r + i, 1)]);
            queue.push_back(k);
        }
        while let Some(y) = queue.pop_front() {
            for &x in &labels {
                let z = phi.get(y, x);
                if images[z].is_some() {
                    continue;
                }
                let (ey, ex) = (images[y].as_ref().expect("set"), images[x].as_ref().expect("label in K"));
                let px = a0.pmap[x];
                let mut terms = Vec::new();
                translate(px, ey, 1, &mut terms);
                translate(group.mul(px, inv[y]), ex, 1, &mut terms);
                translate(px, ex, -1, &mut terms);
                images[z] = Some(collect_terms(terms));
                queue.push_back(z);
            }
        }
        let images: Vec<Vec<(usize, i64)>> =
            images.into_iter().map(|e| e.expect("every orbit meets K")).collect();
        let mut base = std::collections::BTreeSet::new();
        for &x in &support {
            for y in 0..n {
                let mut terms = Vec::new();
                translate(inv[y], &images[x], 1, &mut terms);
                terms.extend(images[y].iter().copied());
                translate(inv[x], &images[phi.get(y, x)], -1, &mut terms);
                terms.extend(images[x].iter().map(|&(c, v)| (c, -v)));
                let rho = collect_terms(terms);
                if !rho.is_empty() {
                    base.insert(rho);
                }
            }
        }
        let ginv: Vec<usize> = (0..order).map(|a| group.inv(a)).collect();
        let mut images = images;
        let mut rels: Vec<Vec<(usize, i64)>> = base.into_iter().collect();
        let mut alive = vec![true; r];
        // Module-level Tietze moves: a relation whose terms on generator k
        // are a single `+-a v_k` gives `v_k = -+a^{-1} rest`.
        loop {
            let mut occ = vec![0usize; r];
            for rho in &rels {
                let mut seen: Vec<usize> = rho.iter().map(|&(c, _)| c % r).collect();
                seen.sort_unstable();
                seen.dedup();
                for k in seen {
                    occ[k] += 1;
                }
            }
            let mut best: Option<(usize, usize, usize)> = None;
            for (i, rho) in rels.iter().enumerate() {
                let mut count = vec![0usize; r];
                for &(c, _) in rho {
                    count[c % r] += 1;
                }
                for &(c, v) in rho {
                    let k = c % r;
                    if count[k] == 1 && v.abs() == 1 {
                        let cost = (rho.len() - 1) * occ[k];
                        if best.map_or(true, |b| cost < b.0) {
                            best = Some((cost, i, c));
                        }
                    }
                }
            }
            let Some((_, i, c)) = best else { break };
            let rho = rels.swap_remove(i);
            let k = c % r;
            let (a, sign) = (c / r, rho.iter().find(|t| t.0 == c).expect("pivot").1);
            let rest: Vec<(usize, i64)> = rho.into_iter().filter(|t| t.0 != c).collect();
            let substitute = |w: &Vec<(usize, i64)>| -> Vec<(usize, i64)> {
                let mut out = Vec::with_capacity(w.len());
                for &(col, v) in w {
                    if col % r == k {
                        translate(mul[col / r][ginv[a]] as usize, &rest, -sign * v, &mut out);
                    } else {
                        out.push((col, v));
                    }
                }
                collect_terms(out)
            };
            for w in rels.iter_mut().chain(images.iter_mut()) {
                if w.iter().any(|t| t.0 % r == k) {
                    *w = substitute(w);
                }
            }
            rels.retain(|w| !w.is_empty());
            alive[k] = false;
        }
        if overflow.get() {
            return Err(Error::Unsupported("i64 overflow while reducing M_X".into()));
        }
        // drop relations that are translates of one another
        let mut canon = std::collections::BTreeSet::new();
        for rho in &rels {
            let k0 = rho.iter().map(|t| t.0 % r).min().expect("nonzero");
            let best = rho
                .iter()
                .filter(|t| t.0 % r == k0)
                .map(|t| {
                    let mut w = Vec::with_capacity(rho.len());
                    translate(ginv[t.0 / r], rho, 1, &mut w);
                    w.sort_unstable();
                    if w[0].1 < 0 {
                        w.iter_mut().for_each(|t| t.1 = -t.1);
                    }
                    w
                })
                .min()
                .expect("nonempty");
            canon.insert(best);
        }
        let mut index = vec![usize::MAX; r];
        let mut r2 = 0;
        for k in 0..r {
            if alive[k] {
                index[k] = r2;
                r2 += 1;
            }
        }
        let flat = |c: usize| (c / r) * r2 + index[c % r];
        let shift = |h: usize, rho: &[(usize, i64)]| -> Vec<(usize, i64)> {
            let row = &mul[h];
            let mut t: Vec<(usize, i64)> =
                rho.iter().map(|&(c, v)| (flat(row[c / r] as usize * r + c % r), v)).collect();
            t.sort_unstable();
            t
        };
        let images = images.iter().map(|w| w.iter().map(|&(c, v)| (flat(c), v)).collect()).collect();
        let mut gens: Vec<usize> = labels.iter().map(|&x| a0.pmap[x]).collect();
        gens.sort_unstable();
        gens.dedup();
        // generators act on flattened columns directly
        let flat_mul: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| (0..order * r2).map(|c| mul[g][c / r2] as usize * r2 + c % r2).collect())
            .collect();
        let seeds: Vec<Vec<(usize, i64)>> = canon.iter().map(|rho| shift(id, rho)).collect();
        let act = |w: &[(usize, i64)]| -> Vec<Vec<(usize, i64)>> {
            flat_mul
                .iter()
                .map(|table| {
                    let mut t: Vec<(usize, i64)> = w.iter().map(|&(c, v)| (table[c], v)).collect();
                    t.sort_unstable();
                    t
                })
                .collect()
        };
        let relations = match AbelianPresentation::closure(order * r2, &seeds, act)? {
            Some(p) => p,
            None => {
                let rows: Vec<Vec<(usize, i64)>> =
                    canon.iter().flat_map(|rho| (0..order).map(move |h| (h, rho))).map(|(h, rho)| shift(h, rho)).collect();
                AbelianPresentation::new(order * r2, &rows)?
            }
        };
        Ok(ReducedModule { relations, images })
    }

    fn normal_form(&self, x: usize) -> SparseVec {
        self.relations.normal_form_sparse(&self.images[x])
    }
}

/// Sums repeated columns and drops zeros; `None` on overflow.
fn collect_terms(terms: Vec<(usize, i64)>) -> Option<Vec<(usize, i64)>> {
    let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
    for (c, v) in terms {
        let e = acc.entry(c).or_insert(0);
        *e = e.checked_add(v)?;
    }
    Some(acc.into_iter().filter(|(_, v)| *v != 0).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InjectivityReport {
    pub injective: bool,
    /// The verdict came from the necessary conditions alone.
    pub necessary_only: bool,
    /// `|A0| * n`, or 0 when `A0` was not computed.
    pub m_dim: usize,
}

pub fn is_injective(m: &BraidedMap, caps: &Caps) -> Result<bool> {
    Ok(injectivity_report(m, caps)?.injective)
}

/// `x -> (x o -, x * -)` respects every relation `xy = uv` with
/// `S(x, y) = (u, v)`, so it factors through `G_X`.
pub fn action_image_is_homomorphic(m: &BraidedMap, t: &ActionTables) -> bool {
    let n = m.n();
    (0..n).all(|x| {
        (0..n).all(|y| {
            let (u, v) = m.get(x, y);
            (0..n).all(|z| {
                t.circ(x, t.circ(y, z)) == t.circ(u, t.circ(v, z))
                    && t.star(x, t.star(y, z)) == t.star(u, t.star(v, z))
            })
        })
    })
}

/// Fast paths: the necessary conditions, then two separating invariants.
/// Points with different `p(x)` are separated in `M_X` by the cocycle
/// `v_x -> p(x)^{-1} - 1` into `Z[A0]`, and points with different actions
/// `(x o -, x * -)` are separated in `G_X` itself. Only points agreeing on
/// both reach the lattice.
pub fn injectivity_report(m: &BraidedMap, caps: &Caps) -> Result<InjectivityReport> {
    require_solution(m)?;
    let t = m.action_tables()?;
    let phi = t.phi_table();
    if !necessary_from_phi(&phi) {
        return Ok(InjectivityReport {
            injective: false,
            necessary_only: true,
            m_dim: 0,
        });
    }
    let a0 = a0_from_phi(&phi, caps.group)?;
    let n = phi.n();
    let m_dim = a0.group.order() * n;
    let use_action = action_image_is_homomorphic(m, &t);
    let mut fibers: BTreeMap<(usize, Vec<usize>, Vec<usize>), Vec<usize>> = BTreeMap::new();
    for x in 0..n {
        let key = if use_action {
            (a0.pmap[x], t.circ_row(x), t.star_row(x))
        } else {
            (a0.pmap[x], Vec::new(), Vec::new())
        };
        fibers.entry(key).or_default().push(x);
    }
    if fibers.values().all(|f| f.len() == 1) {
        return Ok(InjectivityReport {
            injective: true,
            necessary_only: false,
            m_dim,
        });
    }
    let module = ReducedModule::new(&a0, &phi, caps)?;
    let injective = fibers.values().filter(|f| f.len() > 1).all(|fiber| {
        let mut forms: Vec<SparseVec> = fiber.iter().map(|&x| module.normal_form(x)).collect();
        let len = forms.len();
        forms.sort();
        forms.dedup();
        forms.len() == len
    });
    Ok(InjectivityReport {
        injective,
        necessary_only: false,
        m_dim,
    })
}

/// The lattice criterion alone, testing every pair `x != y` by membership.
/// Used to cross-check the fast paths.
pub fn is_injective_by_lattice(m: &BraidedMap, caps: &Caps) -> Result<bool> {
    let module = build_m_module(m, caps)?;
    let n = m.n();
    Ok((0..n).all(|x| (x + 1..n).all(|y| !module.identifies(x, y))))
}

pub fn injectivity_agrees_with_derived(m: &BraidedMap, caps: &Caps) -> Result<bool> {
    let derived = m.derived_solution()?;
    Ok(is_injective(m, caps)? == is_injective(&derived, caps)?)
}
