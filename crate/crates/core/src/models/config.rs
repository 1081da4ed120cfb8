//! Model configuration files (TOML).
//!
//! ```toml
//! model = "fermisea"          # abstract | vacuum | fermisea | bcs | bec
//! statistics = "fermi"        # abstract and vacuum only
//! modes = 3
//! filled = 1
//! frequencies = [0.3, 0.7, 1.1]
//! # rows are field modes i, columns eigenmodes a; entries are x or [re, im]
//! overlaps = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
//! ```
//!
//! BCS pairs and abstract contractions are arrays of tables:
//!
//! ```toml
//! [[pairs]]
//! u = 0.6
//! v = [0.8, 0.0]
//! energy = 1.5
//!
//! [[contractions]]
//! left = "A(1)"
//! right = "A(2)"
//! value = [0.5, -0.25]
//! ```

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;

use super::{AbstractModel, BcsModel, BcsPair, BecModel, FermiSeaModel, ModelDictionary};
use crate::algebra::Statistics;
use crate::dsl;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Real(f64),
    Pair([f64; 2]),
}

impl From<ComplexValue> for Complex64 {
    fn from(v: ComplexValue) -> Self {
        match v {
            ComplexValue::Real(re) => Complex64::new(re, 0.0),
            ComplexValue::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Abstract,
    Vacuum,
    Fermisea,
    Bcs,
    Bec,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairConfig {
    pub u: ComplexValue,
    pub v: ComplexValue,
    #[serde(default)]
    pub energy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractionConfig {
    pub left: String,
    pub right: String,
    pub value: ComplexValue,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub model: ModelKind,
    #[serde(default)]
    pub statistics: Option<String>,
    #[serde(default)]
    pub modes: Option<usize>,
    #[serde(default)]
    pub filled: Option<usize>,
    #[serde(default)]
    pub frequencies: Option<Vec<f64>>,
    #[serde(default)]
    pub overlaps: Option<Vec<Vec<ComplexValue>>>,
    #[serde(default)]
    pub pairs: Vec<PairConfig>,
    #[serde(default)]
    pub density: Option<f64>,
    #[serde(default)]
    pub volume: Option<f64>,
    #[serde(default)]
    pub contractions: Vec<ContractionConfig>,
}

impl ModelConfig {
    fn statistics(&self, default: Statistics) -> Result<Statistics> {
        self.statistics.as_deref().map_or(Ok(default), str::parse)
    }

    fn modes(&self) -> Result<usize> {
        if let Some(m) = self.modes {
            return Ok(m);
        }
        if let Some(rows) = &self.overlaps {
            return Ok(rows.len());
        }
        if let Some(f) = &self.frequencies {
            return Ok(f.len());
        }
        Err(Error::BadModel("`modes` is required".into()))
    }

    fn overlap_matrix(&self, n: usize) -> Result<Option<DMatrix<Complex64>>> {
        let Some(rows) = &self.overlaps else {
            return Ok(None);
        };
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeError(format!("overlaps must be a {n}x{n} table")));
        }
        Ok(Some(DMatrix::from_fn(n, n, |i, a| rows[i][a].into())))
    }

    /// Builds the model the file describes.
    pub fn build(&self) -> Result<Box<dyn ModelDictionary>> {
        Ok(match self.model {
            ModelKind::Abstract => {
                let stats = self.statistics(Statistics::Fermi)?;
                let mut model = AbstractModel::new(stats, self.modes()?);
                for c in &self.contractions {
                    let left = single_atom(&c.left)?;
                    let right = single_atom(&c.right)?;
                    model.insert(left, right, c.value.into());
                }
                Box::new(model)
            }
            ModelKind::Vacuum | ModelKind::Fermisea => {
                let stats = self.statistics(Statistics::Fermi)?;
                let n = self.modes()?;
                let filled = if self.model == ModelKind::Vacuum {
                    0
                } else {
                    self.filled.unwrap_or(0)
                };
                let mut model = FermiSeaModel::with_statistics(stats, n, filled)?;
                if let Some(o) = self.overlap_matrix(n)? {
                    model = model.with_overlaps(o)?;
                }
                if let Some(f) = &self.frequencies {
                    model = model.with_frequencies(f.clone())?;
                }
                Box::new(model)
            }
            ModelKind::Bcs => {
                let pairs = self
                    .pairs
                    .iter()
                    .map(|p| {
                        let pair = BcsPair::new(p.u.into(), p.v.into());
                        p.energy.map_or(pair, |e| pair.with_energy(e))
                    })
                    .collect();
                Box::new(BcsModel::new(pairs)?)
            }
            ModelKind::Bec => {
                let n = self.modes()?;
                let mut model = BecModel::new(n, self.density.unwrap_or(0.0))?;
                if let Some(v) = self.volume {
                    model = model.with_volume(v)?;
                }
                if let Some(o) = self.overlap_matrix(n)? {
                    model = model.with_overlaps(o)?;
                }
                if let Some(f) = &self.frequencies {
                    model = model.with_frequencies(f.clone())?;
                }
                Box::new(model)
            }
        })
    }
}

fn single_atom(text: &str) -> Result<crate::algebra::OperatorSymbol> {
    let expr = dsl::parse(text).map_err(|e| Error::BadModel(format!("contraction `{text}`: {e}")))?;
    match expr.atoms.as_slice() {
        [atom] => Ok(atom.to_symbol()),
        _ => Err(Error::BadModel(format!("contraction side `{text}` must be a single atom"))),
    }
}

pub fn model_from_toml(text: &str) -> Result<Box<dyn ModelDictionary>> {
    let config: ModelConfig = toml::from_str(text).map_err(|e| Error::BadModel(e.message().to_string()))?;
    config.build()
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Box<dyn ModelDictionary>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::BadModel(format!("{}: {e}", path.display())))?;
    model_from_toml(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::OperatorSymbol;

    #[test]
    fn fermisea_file() {
        let m = model_from_toml(
            r#"
            model = "fermisea"
            modes = 2
            filled = 1
            frequencies = [0.3, 0.7]
            overlaps = [[1, 0], [0, [1, 0]]]
            "#,
        )
        .unwrap();
        assert_eq!(m.name(), "fermisea");
        assert_eq!(m.quasi_energy(0), -0.3);
        assert_eq!(
            m.contract(&OperatorSymbol::psi(1), &OperatorSymbol::psi_dag(1)).unwrap(),
            Complex64::new(1.0, 0.0)
        );
    }

    #[test]
    fn abstract_file_with_table() {
        let m = model_from_toml(
            r#"
            model = "abstract"
            statistics = "bose"
            modes = 2
            [[contractions]]
            left = "A(1)"
            right = "A(2)"
            value = [0.5, -0.25]
            "#,
        )
        .unwrap();
        assert_eq!(m.statistics(), Statistics::Bose);
        assert_eq!(
            m.contract(&OperatorSymbol::psi(0), &OperatorSymbol::psi(1)).unwrap(),
            Complex64::new(0.5, -0.25)
        );
    }

    #[test]
    fn bcs_file_checks_normalization() {
        let bad = "model = \"bcs\"\n[[pairs]]\nu = 0.6\nv = 0.6\n";
        assert!(matches!(model_from_toml(bad), Err(Error::BadModel(_))));
        let good = "model = \"bcs\"\n[[pairs]]\nu = 0.6\nv = 0.8\nenergy = 2.0\n";
        assert_eq!(model_from_toml(good).unwrap().n_modes(), 2);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(model_from_toml("model = \"vacuum\"\nmodes = 1\ncolour = 3\n").is_err());
        assert!(model_from_toml("model = \"plasma\"\n").is_err());
    }
}
