//! Body definitions read from TOML.
//!
//! ```toml
//! kind = "polygon"
//! vertices = [[1, -1], [1, 1], [-1, 1], [-1, -1]]  # integer numerators
//! denominator = 2                                  # optional, default 1
//! half = false                                     # true: only the first half is listed
//! ```
//!
//! Other kinds: `disk`, `square`, `ellipse`/`ellipsoid` (`axes`), `lp`
//! (`dim`, `p`, where `p` may be `"inf"`), `box` (`half_widths`), `radial`
//! (`radii`), `polygon_f64` (`points`, `half`), `random_polygon`
//! (`half_vertices`, `seed`).

use serde::Deserialize;

use super::{ConvexBody, Polygon};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Real};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Exponent {
    Finite(f64),
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    Disk {},
    Square {},
    #[serde(alias = "ellipse")]
    Ellipsoid {
        axes: Vec<f64>,
    },
    Lp {
        #[serde(default = "two")]
        dim: usize,
        p: Exponent,
    },
    Box {
        half_widths: Vec<f64>,
    },
    Polygon {
        vertices: Vec<[i64; 2]>,
        #[serde(default = "one")]
        denominator: i64,
        #[serde(default)]
        half: bool,
    },
    PolygonF64 {
        points: Vec<[f64; 2]>,
        #[serde(default)]
        half: bool,
    },
    Radial {
        radii: Vec<f64>,
    },
    RandomPolygon {
        half_vertices: usize,
        seed: u64,
    },
}

fn two() -> usize {
    2
}

fn one() -> i64 {
    1
}

impl BodySpec {
    /// Parses a standalone TOML document describing one body.
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn build<T: Real>(&self) -> Result<ConvexBody<T>> {
        let lit = T::lit;
        match self {
            BodySpec::Disk {} => Ok(ConvexBody::disk()),
            BodySpec::Square {} => Ok(ConvexBody::square()),
            BodySpec::Ellipsoid { axes } => ConvexBody::ellipsoid(axes.iter().map(|a| lit(*a)).collect()),
            BodySpec::Lp { dim, p } => {
                let p = match p {
                    Exponent::Finite(v) => *v,
                    Exponent::Named(s) if matches!(s.as_str(), "inf" | "infinity" | "∞") => f64::INFINITY,
                    Exponent::Named(s) => {
                        return Err(Error::Config(format!("field `p`: expected a number or \"inf\", got {s:?}")))
                    }
                };
                ConvexBody::lp_ball(*dim, lit(p))
            }
            BodySpec::Box { half_widths } => ConvexBody::cuboid(half_widths.iter().map(|a| lit(*a)).collect()),
            BodySpec::Polygon {
                vertices,
                denominator,
                half,
            } => {
                if *denominator <= 0 {
                    return Err(Error::Config("field `denominator`: must be positive".into()));
                }
                let pts: Vec<[Rational; 2]> = vertices
                    .iter()
                    .map(|v| {
                        [
                            Rational::new(v[0] as i128, *denominator as i128),
                            Rational::new(v[1] as i128, *denominator as i128),
                        ]
                    })
                    .collect();
                let poly = if *half { Polygon::from_half(&pts) } else { Polygon::new(pts) }
                    .map_err(|e| Error::Config(format!("field `vertices`: {e}")))?;
                ConvexBody::exact_polygon_body(poly)
            }
            BodySpec::PolygonF64 { points, half } => {
                let pts: Vec<[T; 2]> = points.iter().map(|p| [lit(p[0]), lit(p[1])]).collect();
                if *half {
                    ConvexBody::polygon_from_half(&pts)
                } else {
                    ConvexBody::polygon(pts)
                }
                .map_err(|e| Error::Config(format!("field `points`: {e}")))
            }
            BodySpec::Radial { radii } => ConvexBody::radial(radii.iter().map(|r| lit(*r)).collect())
                .map_err(|e| Error::Config(format!("field `radii`: {e}"))),
            BodySpec::RandomPolygon { half_vertices, seed } => {
                ConvexBody::random_symmetric_polygon(*half_vertices, *seed)
            }
        }
    }
}
