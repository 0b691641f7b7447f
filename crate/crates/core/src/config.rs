//! Interaction configurations: centers, coupling constants, validation and
//! JSON persistence.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{distance, Point};

/// Configurations whose closest pair of centers is nearer than this are
/// rejected.
pub const SEPARATION_FLOOR: f64 = 1e-9;

/// A finite set of distinct centers in R³ with one real coupling constant
/// (inverse scattering length) per center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub centers: Vec<Point>,
    pub alphas: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl Configuration {
    /// Builds and validates a configuration.
    pub fn new(centers: Vec<Point>, alphas: Vec<f64>) -> Result<Self> {
        Configuration {
            centers,
            alphas,
            label: None,
        }
        .validate()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Number of centers.
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Checks the invariants and hands the configuration back.
    pub fn validate(self) -> Result<Self> {
        if self.centers.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        if self.centers.len() != self.alphas.len() {
            return Err(Error::ArityMismatch {
                centers: self.centers.len(),
                alphas: self.alphas.len(),
            });
        }
        for (j, c) in self.centers.iter().enumerate() {
            if c.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteEntry(format!("center {j}")));
            }
        }
        for (j, a) in self.alphas.iter().enumerate() {
            if !a.is_finite() {
                return Err(Error::NonFiniteEntry(format!("alpha {j}")));
            }
        }
        for j in 0..self.centers.len() {
            for k in j + 1..self.centers.len() {
                let d = distance(&self.centers[j], &self.centers[k]);
                if d < SEPARATION_FLOOR {
                    return Err(Error::DuplicateCenters(j, k, d));
                }
            }
        }
        Ok(self)
    }

    /// Distance between centers `j` and `k`.
    pub fn distance(&self, j: usize, k: usize) -> f64 {
        distance(&self.centers[j], &self.centers[k])
    }

    pub fn min_separation(&self) -> f64 {
        self.pair_distances().fold(f64::INFINITY, f64::min)
    }

    pub fn diameter(&self) -> f64 {
        self.pair_distances().fold(0.0, f64::max)
    }

    fn pair_distances(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.len();
        (0..n).flat_map(move |j| (j + 1..n).map(move |k| self.distance(j, k)))
    }

    /// The configuration `(sY, α/s)`. `Γ₀` of the result is `Γ₀/s`.
    pub fn rescaled(&self, s: f64) -> Configuration {
        Configuration {
            centers: self
                .centers
                .iter()
                .map(|c| [s * c[0], s * c[1], s * c[2]])
                .collect(),
            alphas: self.alphas.iter().map(|a| a / s).collect(),
            label: self.label.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    /// Parses a configuration from JSON text and validates it.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Configuration =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.centers.len() != raw.alphas.len() {
            return Err(Error::Parse(format!(
                "{} centers but {} alphas",
                raw.centers.len(),
                raw.alphas.len()
            )));
        }
        raw.validate().map_err(|e| Error::Validation(Box::new(e)))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::from_json(&text)
    }
}
