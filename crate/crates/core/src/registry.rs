//! Named benchmark geometries.
//!
//! Entries with a length parameter default every coupling constant to
//! `-1/(4π·s)`, the value at which the all-ones structure of `Γ₀` produces a
//! zero eigenvalue of maximal multiplicity. Any entry accepts, after its
//! geometric parameters, either one uniform alpha or one alpha per center.

use std::f64::consts::PI;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::Point;

/// A named configuration generator.
#[derive(Clone, Copy)]
pub struct RegistryEntry {
    pub name: &'static str,
    /// Parameters used by [`RegistryEntry::default_config`].
    pub parameters: &'static [f64],
    pub description: &'static str,
    generator: fn(&[f64]) -> Result<Configuration>,
}

impl RegistryEntry {
    pub fn generate(&self, params: &[f64]) -> Result<Configuration> {
        (self.generator)(params)
    }

    pub fn default_config(&self) -> Configuration {
        self.generate(self.parameters)
            .expect("registry defaults are valid")
    }
}

impl std::fmt::Debug for RegistryEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RegistryEntry")
            .field("name", &self.name)
            .field("parameters", &self.parameters)
            .finish()
    }
}

const ENTRIES: [RegistryEntry; 5] = [
    RegistryEntry {
        name: "single",
        parameters: &[0.0],
        description: "single(alpha): one center at the origin",
        generator: single,
    },
    RegistryEntry {
        name: "two_center",
        parameters: &[1.0],
        description: "two_center(d[, alphas]): two centers a distance d apart, alphas -1/(4πd)",
        generator: two_center,
    },
    RegistryEntry {
        name: "equilateral_triangle",
        parameters: &[1.0],
        description: "equilateral_triangle(s[, alphas]): triangle of side s, alphas -1/(4πs)",
        generator: equilateral_triangle,
    },
    RegistryEntry {
        name: "tetrahedron",
        parameters: &[1.0],
        description: "tetrahedron(s[, alphas]): regular tetrahedron of edge s, alphas -1/(4πs)",
        generator: tetrahedron,
    },
    RegistryEntry {
        name: "moser_spindle",
        parameters: &[],
        description: "moser_spindle([alphas]): 3D unit-distance spindle (two bipyramids sharing an apex), alphas -1/(4π)",
        generator: moser_spindle,
    },
];

/// All registry entries.
pub fn entries() -> &'static [RegistryEntry] {
    &ENTRIES
}

pub fn entry(name: &str) -> Result<&'static RegistryEntry> {
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownName(name.to_string()))
}

/// Builds the named configuration.
pub fn get(name: &str, params: &[f64]) -> Result<Configuration> {
    entry(name)?.generate(params)
}

/// Parses `name(p1, p2, ...)` or a bare `name`.
pub fn parse_expression(expr: &str) -> Result<Configuration> {
    let expr = expr.trim();
    let (name, params) = match expr.find('(') {
        Some(open) => {
            let close = expr
                .rfind(')')
                .filter(|&c| c > open && c == expr.len() - 1)
                .ok_or_else(|| Error::InvalidArgument(format!("unbalanced parentheses in `{expr}`")))?;
            let inner = expr[open + 1..close].trim();
            let params = if inner.is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|p| {
                        p.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::InvalidArgument(format!("bad number `{}`", p.trim())))
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            (expr[..open].trim(), params)
        }
        None => (expr, entry(expr)?.parameters.to_vec()),
    };
    get(name, &params)
}

fn alphas_from(
    name: &str,
    extra: &[f64],
    n: usize,
    default: f64,
    geometric: usize,
) -> Result<Vec<f64>> {
    match extra.len() {
        0 => Ok(vec![default; n]),
        1 => Ok(vec![extra[0]; n]),
        m if m == n => Ok(extra.to_vec()),
        m => Err(Error::BadParameterCount {
            name: name.to_string(),
            got: geometric + m,
            expected: format!("{geometric}, {}, or {}", geometric + 1, geometric + n),
        }),
    }
}

fn positive_length(name: &str, params: &[f64]) -> Result<f64> {
    let s = *params.first().ok_or_else(|| Error::BadParameterCount {
        name: name.to_string(),
        got: 0,
        expected: "at least 1".to_string(),
    })?;
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "{name}: length must be positive, got {s}"
        )));
    }
    Ok(s)
}

fn build(name: &str, centers: Vec<Point>, alphas: Vec<f64>, params: &[f64]) -> Result<Configuration> {
    let args: Vec<String> = params.iter().map(|p| p.to_string()).collect();
    Ok(Configuration::new(centers, alphas)?.with_label(format!("{name}({})", args.join(", "))))
}

fn single(params: &[f64]) -> Result<Configuration> {
    if params.len() != 1 {
        return Err(Error::BadParameterCount {
            name: "single".into(),
            got: params.len(),
            expected: "1".into(),
        });
    }
    build("single", vec![[0.0; 3]], vec![params[0]], params)
}

fn two_center(params: &[f64]) -> Result<Configuration> {
    let d = positive_length("two_center", params)?;
    let alphas = alphas_from("two_center", &params[1..], 2, -1.0 / (4.0 * PI * d), 1)?;
    build("two_center", vec![[0.0; 3], [d, 0.0, 0.0]], alphas, params)
}

fn equilateral_triangle(params: &[f64]) -> Result<Configuration> {
    let s = positive_length("equilateral_triangle", params)?;
    let alphas = alphas_from("equilateral_triangle", &params[1..], 3, -1.0 / (4.0 * PI * s), 1)?;
    let centers = vec![
        [0.0, 0.0, 0.0],
        [s, 0.0, 0.0],
        [0.5 * s, 0.5 * 3f64.sqrt() * s, 0.0],
    ];
    build("equilateral_triangle", centers, alphas, params)
}

fn tetrahedron(params: &[f64]) -> Result<Configuration> {
    let s = positive_length("tetrahedron", params)?;
    let alphas = alphas_from("tetrahedron", &params[1..], 4, -1.0 / (4.0 * PI * s), 1)?;
    // Alternate cube corners; edge length 2√2·h.
    let h = s / (2.0 * 2f64.sqrt());
    let centers = vec![[h, h, h], [h, -h, -h], [-h, h, -h], [-h, -h, h]];
    build("tetrahedron", centers, alphas, params)
}

/// Vertices of the 3D spindle, apex first.
///
/// Two triangular bipyramids (pairs of unit regular tetrahedra glued along a
/// face) share the apex; their far tips are rotated about the apex until they
/// are exactly one unit apart. In a 4-colouring each far tip would have to
/// share the apex colour, so the unit-distance graph is not 4-colourable.
pub fn spindle_vertices() -> Vec<Point> {
    let h = (2.0f64 / 3.0).sqrt();
    let rho = 1.0 / 3f64.sqrt();
    let half = (1.0 / (4.0 * h)).asin();
    let (s, c) = half.sin_cos();
    let mut out = vec![[0.0; 3]];
    for sign in [1.0, -1.0] {
        let axis = [sign * s, 0.0, c];
        let e1 = [c, 0.0, -sign * s];
        let e2 = [0.0, 1.0, 0.0];
        for m in 0..3 {
            let phi = 2.0 * PI * m as f64 / 3.0;
            let (sp, cp) = phi.sin_cos();
            out.push(std::array::from_fn(|i| {
                h * axis[i] + rho * (cp * e1[i] + sp * e2[i])
            }));
        }
        out.push(std::array::from_fn(|i| 2.0 * h * axis[i]));
    }
    out
}

fn moser_spindle(params: &[f64]) -> Result<Configuration> {
    let centers = spindle_vertices();
    let alphas = alphas_from("moser_spindle", params, centers.len(), -1.0 / (4.0 * PI), 0)?;
    build("moser_spindle", centers, alphas, params)
}
