//! JSON report layout. Complex numbers are written as `[re, im]`.

use serde::Serialize;
use zeromode::laurent::{Discrepancy, LaurentExpansion, LaurentMethod, SingularCase};
use zeromode::spectrum::Spectrum;
use zeromode::zero_modes::{ZeroKind, ZeroModeReport};
use zeromode::{CMatrix, CVector, Configuration};

pub type Complex = [f64; 2];

pub fn complex_matrix(m: &CMatrix) -> Vec<Vec<Complex>> {
    (0..m.nrows())
        .map(|j| (0..m.ncols()).map(|k| [m[(j, k)].re, m[(j, k)].im]).collect())
        .collect()
}

pub fn complex_vector(v: &CVector) -> Vec<Complex> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

#[derive(Serialize)]
pub struct BoundStateEntry {
    pub lambda: f64,
    pub energy: f64,
    pub multiplicity: usize,
    pub basis: Vec<Vec<Complex>>,
}

pub fn bound_states(spectrum: &Spectrum) -> Vec<BoundStateEntry> {
    spectrum
        .states
        .iter()
        .map(|s| BoundStateEntry {
            lambda: s.lambda,
            energy: s.energy,
            multiplicity: s.multiplicity,
            basis: s.coefficient_basis.iter().map(complex_vector).collect(),
        })
        .collect()
}

#[derive(Serialize)]
pub struct Bases {
    pub eigen: Vec<Vec<Complex>>,
    pub resonance: Vec<Vec<Complex>>,
}

#[derive(Serialize)]
pub struct ZeroModes {
    pub e: usize,
    pub r: usize,
    pub kind: ZeroKind,
    pub bases: Bases,
    pub borderline: bool,
}

impl From<&ZeroModeReport> for ZeroModes {
    fn from(r: &ZeroModeReport) -> Self {
        Self {
            e: r.e,
            r: r.r,
            kind: r.kind,
            bases: Bases {
                eigen: r.eigen_basis.iter().map(complex_vector).collect(),
                resonance: r.resonance_basis.iter().map(complex_vector).collect(),
            },
            borderline: r.borderline,
        }
    }
}

#[derive(Serialize)]
pub struct Laurent {
    pub case: SingularCase,
    pub a_minus2: Vec<Vec<Complex>>,
    pub a_minus1: Option<Vec<Vec<Complex>>>,
    pub method: LaurentMethod,
    pub discrepancy: Option<Discrepancy>,
    pub radius: Option<f64>,
}

impl From<&LaurentExpansion> for Laurent {
    fn from(l: &LaurentExpansion) -> Self {
        Self {
            case: l.case,
            a_minus2: complex_matrix(&l.a_minus2),
            a_minus1: l.a_minus1.as_ref().map(complex_matrix),
            method: l.method,
            discrepancy: l.discrepancy,
            radius: l.radius,
        }
    }
}

/// The full report; sections a subcommand does not compute are omitted.
#[derive(Serialize)]
pub struct Report {
    pub config: Configuration,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_states: Option<Vec<BoundStateEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_modes: Option<ZeroModes>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub laurent: Option<Laurent>,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn new(config: &Configuration) -> Self {
        Self {
            config: config.clone(),
            bound_states: None,
            zero_modes: None,
            laurent: None,
            diagnostics: Vec::new(),
        }
    }
}
