//! The three-time Leggett-Garg correlation space `(q12, q13, q23)`.
//!
//! Quantum points fill the elliptope of 3×3 unit-diagonal PSD matrices; classical
//! (macrorealist) points fill the tetrahedron spanned by deterministic assignments.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LgPoint {
    pub q12: f64,
    pub q13: f64,
    pub q23: f64,
}

impl LgPoint {
    pub fn new(q12: f64, q13: f64, q23: f64) -> Result<Self> {
        let p = Self { q12, q13, q23 };
        for v in [q12, q13, q23] {
            if !v.is_finite() {
                return Err(Error::NonFinite);
            }
            if v.abs() > 1.0 + 1e-12 {
                return Err(Error::InvalidArgument(format!("correlator {v} outside [-1, 1]")));
            }
        }
        Ok(p)
    }

    /// `1 + 2 q12 q13 q23 − q12² − q13² − q23²`, the determinant of the correlation matrix.
    pub fn determinant(&self) -> f64 {
        let Self { q12, q13, q23 } = *self;
        1.0 + 2.0 * q12 * q13 * q23 - q12 * q12 - q13 * q13 - q23 * q23
    }

    /// `q12 + q23 − q13`.
    pub fn lg_value(&self) -> f64 {
        self.q12 + self.q23 - self.q13
    }

    /// Left-hand sides of the four tetrahedron facets, each bounded by 1.
    pub fn facets(&self) -> [f64; 4] {
        let Self { q12, q13, q23 } = *self;
        [q12 + q23 - q13, q12 - q23 + q13, -q12 + q23 + q13, -q12 - q23 - q13]
    }
}

pub fn quantum_member(p: &LgPoint, tol: f64) -> bool {
    [p.q12, p.q13, p.q23].iter().all(|v| v.abs() <= 1.0 + tol) && p.determinant() >= -tol
}

pub fn classical_member(p: &LgPoint, tol: f64) -> bool {
    p.facets().iter().all(|&f| f <= 1.0 + tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sheet {
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub point: LgPoint,
    pub sheet: Sheet,
}

/// Boundary points over a `grid × grid` lattice of `(q12, q13) ∈ [−1, 1]²`.
///
/// `q23 = q12 q13 ± √((1 − q12²)(1 − q13²))`, one point per sheet; at a double
/// root only the lower sheet is emitted.
pub fn sample_surface(grid: usize) -> Result<Vec<SurfacePoint>> {
    if grid < 2 {
        return Err(Error::InvalidArgument(format!("grid must be at least 2 (got {grid})")));
    }
    let coord = |k: usize| {
        if k == grid - 1 {
            1.0
        } else {
            -1.0 + 2.0 * k as f64 / (grid - 1) as f64
        }
    };
    let mut out = Vec::with_capacity(2 * grid * grid);
    for a in 0..grid {
        let q12 = coord(a);
        for b in 0..grid {
            let q13 = coord(b);
            let disc = (1.0 - q12 * q12).max(0.0) * (1.0 - q13 * q13).max(0.0);
            let root = disc.sqrt();
            let centre = q12 * q13;
            // `+ 0.0` turns a negative zero into zero.
            let clamp = |v: f64| v.clamp(-1.0, 1.0) + 0.0;
            out.push(SurfacePoint {
                point: LgPoint {
                    q12,
                    q13,
                    q23: clamp(centre - root),
                },
                sheet: Sheet::Lower,
            });
            if root > 0.0 {
                out.push(SurfacePoint {
                    point: LgPoint {
                        q12,
                        q13,
                        q23: clamp(centre + root),
                    },
                    sheet: Sheet::Upper,
                });
            }
        }
    }
    Ok(out)
}

/// Writes `q12,q13,q23,sheet` rows with 17 significant digits.
pub fn write_surface_csv<W: Write>(points: &[SurfacePoint], mut w: W) -> Result<()> {
    writeln!(w, "q12,q13,q23,sheet")?;
    for sp in points {
        let sheet = match sp.sheet {
            Sheet::Lower => "lower",
            Sheet::Upper => "upper",
        };
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{}",
            sp.point.q12, sp.point.q13, sp.point.q23, sheet
        )?;
    }
    Ok(())
}
