//! JSON mask files.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use subdiv_core::constructors::BuiltinScheme;
use subdiv_core::{format_rational, parse_rational, DilationMatrix, Rational, Symbol};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coefficient {
    pub index: Vec<i64>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaskFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub dilation: Vec<Vec<i64>>,
    pub coefficients: Vec<Coefficient>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<String>>,
}

/// A mask ready for analysis.
#[derive(Clone, Debug)]
pub struct LoadedMask {
    pub name: String,
    pub symbol: Symbol,
    pub dilation: DilationMatrix,
    pub tau: Option<Vec<Rational>>,
    pub notes: Vec<String>,
}

impl MaskFile {
    pub fn from_symbol(name: Option<String>, a: &Symbol, m: &DilationMatrix) -> Self {
        MaskFile {
            name,
            dim: a.dim(),
            dilation: m.matrix().rows(),
            coefficients: a
                .terms()
                .map(|(k, v)| Coefficient {
                    index: k.clone(),
                    value: format_rational(v),
                })
                .collect(),
            tau: None,
        }
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }

    /// Validates the file; `force` accepts a non-expanding dilation.
    pub fn load(&self, force: bool) -> Result<LoadedMask, CliError> {
        if self.dilation.len() != self.dim || self.dilation.iter().any(|r| r.len() != self.dim) {
            return Err(CliError::Invariant(format!("dilation must be {0}x{0}", self.dim)));
        }
        let mut seen = BTreeSet::new();
        let mut terms = Vec::with_capacity(self.coefficients.len());
        for c in &self.coefficients {
            if c.index.len() != self.dim {
                return Err(CliError::Invariant(format!("index {:?} does not have dimension {}", c.index, self.dim)));
            }
            if !seen.insert(c.index.clone()) {
                return Err(CliError::Invariant(format!("duplicate index {:?}", c.index)));
            }
            terms.push((c.index.clone(), parse_rational(&c.value)?));
        }
        let symbol = Symbol::from_terms(self.dim, terms)?;
        let dilation = if force {
            DilationMatrix::new_unchecked(&self.dilation)?
        } else {
            DilationMatrix::new(&self.dilation)?
        };
        let tau = self
            .tau
            .as_ref()
            .map(|t| t.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>, _>>())
            .transpose()?;
        Ok(LoadedMask {
            name: self.name.clone().unwrap_or_else(|| "mask".into()),
            symbol,
            dilation,
            tau,
            notes: Vec::new(),
        })
    }
}

impl From<BuiltinScheme> for LoadedMask {
    fn from(b: BuiltinScheme) -> Self {
        LoadedMask {
            name: b.name.to_string(),
            symbol: b.symbol,
            dilation: b.dilation,
            tau: None,
            notes: b.notes,
        }
    }
}
