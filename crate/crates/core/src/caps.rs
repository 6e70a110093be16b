//! Size limits for closures, lattices and materialized tables.

use crate::error::{Error, Result};

pub const ENV_VAR: &str = "BRAIDLAB_CAPS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of elements in a permutation-group closure.
    pub group: usize,
    /// Maximum dimension of a flattened module lattice: `|A0| * n` for the
    /// full presentation, `|A0| * |K|` for the reduced one used by the
    /// injectivity test (`K` from `relation_support`).
    pub module: usize,
    /// Maximum `m^k` for materializing a linear or affine solution.
    pub materialize: usize,
    /// Maximum `n^k` for tables on `X^k`.
    pub tuples: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            group: 1_000_000,
            module: 20_000,
            materialize: 4096,
            tuples: 1_000_000,
        }
    }
}

impl Caps {
    /// Parses `key=value` pairs separated by commas, e.g.
    /// `group=5000,module=800`. Unknown keys are rejected.
    pub fn parse_overrides(mut self, spec: &str) -> Result<Self> {
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("cap override `{part}` is not key=value")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("cap value `{value}` is not an integer")))?;
            match key.trim() {
                "group" => self.group = value,
                "module" => self.module = value,
                "materialize" => self.materialize = value,
                "tuples" => self.tuples = value,
                other => return Err(Error::Parse(format!("unknown cap `{other}`"))),
            }
        }
        Ok(self)
    }

    /// Defaults with `BRAIDLAB_CAPS` applied when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(ENV_VAR) {
            Ok(spec) => Caps::default().parse_overrides(&spec),
            Err(_) => Ok(Caps::default()),
        }
    }
}
