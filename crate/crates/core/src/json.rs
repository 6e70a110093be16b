//! JSON formats for solutions, linear and affine data, and cocycle tuples.

use serde::{Deserialize, Serialize};

use crate::braided::BraidedMap;
use crate::cocycle::SevenTuple;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linear::{AffineSolution, LinearSolution, MatrixSolution, ModMatrix};

/// `{"n": n, "s": [[[u, v], ...], ...]}` with `s[x][y] = S(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionJson {
    pub n: usize,
    pub s: Vec<Vec<[usize; 2]>>,
}

impl SolutionJson {
    pub fn to_map(&self) -> Result<BraidedMap> {
        if self.s.len() != self.n || self.s.iter().any(|r| r.len() != self.n) {
            return Err(Error::MalformedTable(format!("s must be {0} rows of {0} pairs", self.n)));
        }
        BraidedMap::new(self.n, self.s.iter().flatten().map(|&[u, v]| (u, v)).collect())
    }
}

impl From<&BraidedMap> for SolutionJson {
    fn from(m: &BraidedMap) -> Self {
        let n = m.n();
        SolutionJson {
            n,
            s: (0..n)
                .map(|x| {
                    (0..n)
                        .map(|y| {
                            let (u, v) = m.get(x, y);
                            [u, v]
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

pub fn solution_from_str(s: &str) -> Result<BraidedMap> {
    serde_json::from_str::<SolutionJson>(s)?.to_map()
}

pub fn solution_to_string(m: &BraidedMap) -> String {
    serde_json::to_string(&SolutionJson::from(m)).expect("serializable")
}

/// `{"m", "k", "a", "b", "c", "d", "zvec"?, "tvec"?}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearJson {
    pub m: i64,
    pub k: usize,
    pub a: Vec<Vec<i64>>,
    pub b: Vec<Vec<i64>>,
    pub c: Vec<Vec<i64>>,
    pub d: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zvec: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tvec: Option<Vec<i64>>,
}

fn matrix(m: i64, k: usize, rows: &[Vec<i64>], name: &str) -> Result<ModMatrix> {
    if rows.len() != k || rows.iter().any(|r| r.len() != k) {
        return Err(Error::ShapeMismatch(format!("{name} must be {k} x {k}")));
    }
    ModMatrix::from_rows(m, rows)
}

impl LinearJson {
    /// The four matrices, without checking any relation.
    pub fn matrices(&self) -> Result<[ModMatrix; 4]> {
        Ok([
            matrix(self.m, self.k, &self.a, "a")?,
            matrix(self.m, self.k, &self.b, "b")?,
            matrix(self.m, self.k, &self.c, "c")?,
            matrix(self.m, self.k, &self.d, "d")?,
        ])
    }

    pub fn to_linear_unchecked(&self) -> Result<LinearSolution> {
        let [a, b, c, d] = self.matrices()?;
        LinearSolution::unchecked(a, b, c, d)
    }

    /// Validated linear or affine solution. A lone `zvec` or `tvec` is
    /// taken with the other one zero.
    pub fn to_solution(&self) -> Result<MatrixSolution> {
        let [a, b, c, d] = self.matrices()?;
        let l = LinearSolution::new(a, b, c, d)?;
        if self.zvec.is_none() && self.tvec.is_none() {
            return Ok(l.into());
        }
        let zero = vec![0; self.k];
        let z = self.zvec.clone().unwrap_or_else(|| zero.clone());
        let t = self.tvec.clone().unwrap_or(zero);
        Ok(AffineSolution::new(l, z, t)?.into())
    }

    pub fn from_linear(l: &LinearSolution) -> Self {
        LinearJson {
            m: l.modulus(),
            k: l.dim(),
            a: l.a.rows(),
            b: l.b.rows(),
            c: l.c.rows(),
            d: l.d.rows(),
            zvec: None,
            tvec: None,
        }
    }

    pub fn from_affine(s: &AffineSolution) -> Self {
        LinearJson {
            zvec: Some(s.zvec.clone()),
            tvec: Some(s.tvec.clone()),
            ..Self::from_linear(&s.linear)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
}

impl GroupJson {
    pub fn to_group(&self) -> Result<FiniteGroup> {
        if self.mul.len() != self.order {
            return Err(Error::MalformedTables(format!(
                "order {} but {} table rows",
                self.order,
                self.mul.len()
            )));
        }
        FiniteGroup::from_table(&self.mul)
    }

    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupJson {
            order: g.order(),
            mul: g.table(),
        }
    }
}

/// `{"G": {...}, "A": {...}, "rhoGA": [[..]], "pi": [..], "X": [..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SevenTupleJson {
    #[serde(rename = "G")]
    pub g: GroupJson,
    #[serde(rename = "A")]
    pub a: GroupJson,
    #[serde(rename = "rhoGA")]
    pub rho: Vec<Vec<usize>>,
    pub pi: Vec<usize>,
    #[serde(rename = "X")]
    pub x: Vec<usize>,
}

impl SevenTupleJson {
    /// Parses the groups; the remaining invariants are left to
    /// [`SevenTuple::validate`].
    pub fn to_tuple(&self) -> Result<SevenTuple> {
        Ok(SevenTuple {
            g: self.g.to_group()?,
            a: self.a.to_group()?,
            rho: self.rho.clone(),
            pi: self.pi.clone(),
            x: self.x.clone(),
        })
    }

    pub fn from_tuple(t: &SevenTuple) -> Self {
        SevenTupleJson {
            g: GroupJson::from_group(&t.g),
            a: GroupJson::from_group(&t.a),
            rho: t.rho.clone(),
            pi: t.pi.clone(),
            x: t.x.clone(),
        }
    }
}
