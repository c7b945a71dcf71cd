//! Spectral output shared by the two models.

use serde::{Serialize, Serializer};

/// A closed real interval; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

fn fmt_end(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let open_lo = if self.lo.is_infinite() { "(" } else { "[" };
        let open_hi = if self.hi.is_infinite() { ")" } else { "]" };
        write!(f, "{open_lo}{},{}{open_hi}", fmt_end(self.lo), fmt_end(self.hi))
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Which spectral condition produced an eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralFactor {
    /// `sin((ξ+μ)/2) − cos((ξ+μ)/2)·k(z)/2 = 0`.
    Plus,
    /// `cos((ξ−μ)/2) + sin((ξ−μ)/2)·k(z)/2 = 0`.
    Minus,
    /// Zero of a boundary-matching determinant.
    Determinant,
    /// Eigenvalue of a discretized operator.
    Discretization,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscreteEigenvalue {
    pub z: f64,
    pub factor: SpectralFactor,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct SpectrumResult {
    pub essential: Vec<Interval>,
    pub discrete: Vec<DiscreteEigenvalue>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl SpectrumResult {
    /// Discrete eigenvalues sorted ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut z: Vec<f64> = self.discrete.iter().map(|d| d.z).collect();
        z.sort_by(f64::total_cmp);
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_display() {
        assert_eq!(Interval::new(0.0, f64::INFINITY).to_string(), "[0,inf)");
        assert_eq!(Interval::new(f64::NEG_INFINITY, -0.5).to_string(), "(-inf,-0.5]");
    }
}
