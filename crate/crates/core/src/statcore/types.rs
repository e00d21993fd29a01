use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Exchange statistics selecting the symplectic factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistics {
    Boson,
    Fermion,
    Distinguishable,
}

impl Statistics {
    pub const ALL: [Statistics; 3] = [
        Statistics::Boson,
        Statistics::Distinguishable,
        Statistics::Fermion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
            Statistics::Distinguishable => "distinguishable",
        }
    }

    /// Whether the permutation sum carries more than the identity term.
    pub fn is_identical(self) -> bool {
        !matches!(self, Statistics::Distinguishable)
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "boson" | "bosons" => Ok(Statistics::Boson),
            "fermion" | "fermions" => Ok(Statistics::Fermion),
            "distinguishable" => Ok(Statistics::Distinguishable),
            other => Err(Error::InvalidParameter(format!(
                "unknown statistics '{other}' (expected boson, fermion or distinguishable)"
            ))),
        }
    }
}

/// A dimensionless phase-space point `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint(Complex64);

impl PhasePoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if z.re.is_finite() && z.im.is_finite() {
            Ok(Self(z))
        } else {
            Err(Error::NonFinite("phase point"))
        }
    }

    /// 1D particle picture: `z = x + i p`.
    pub fn from_position_momentum(x: f64, p: f64) -> Result<Self> {
        Self::new(Complex64::new(x, p))
    }

    pub fn z(self) -> Complex64 {
        self.0
    }

    /// `ρ = z z̄`.
    pub fn rho(self) -> f64 {
        self.0.norm_sqr()
    }
}

/// Center-of-mass and relative coordinates of a particle pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoBodyState {
    pub cm: Complex64,
    pub rel: Complex64,
}

impl TwoBodyState {
    pub fn new(cm: Complex64, rel: Complex64) -> Self {
        Self { cm, rel }
    }

    /// Individual coordinates `z1 = (Z+z)/√2`, `z2 = (Z−z)/√2`.
    pub fn individual(&self) -> (Complex64, Complex64) {
        (
            (self.cm + self.rel) * FRAC_1_SQRT_2,
            (self.cm - self.rel) * FRAC_1_SQRT_2,
        )
    }

    pub fn to_nbody(&self) -> NBodyState {
        let (z1, z2) = self.individual();
        NBodyState { zs: vec![z1, z2] }
    }
}

/// `Z = (z1+z2)/√2`, `z = (z1−z2)/√2`.
pub fn cm_relative_transform(z1: Complex64, z2: Complex64) -> Result<TwoBodyState> {
    for z in [z1, z2] {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite("particle coordinate"));
        }
    }
    Ok(TwoBodyState {
        cm: (z1 + z2) * FRAC_1_SQRT_2,
        rel: (z1 - z2) * FRAC_1_SQRT_2,
    })
}

/// Ordered coordinates of N particles.
#[derive(Debug, Clone, PartialEq)]
pub struct NBodyState {
    zs: Vec<Complex64>,
}

impl NBodyState {
    pub fn new(zs: Vec<Complex64>) -> Result<Self> {
        if zs.is_empty() {
            return Err(Error::InvalidParameter("N-body state needs at least one particle".into()));
        }
        if zs.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("N-body state"));
        }
        Ok(Self { zs })
    }

    pub fn len(&self) -> usize {
        self.zs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zs.is_empty()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.zs
    }

    pub fn into_coords(self) -> Vec<Complex64> {
        self.zs
    }

    /// Pair `(0, 1)` in CM/relative form. Panics unless `N == 2`.
    pub fn two_body(&self) -> TwoBodyState {
        assert_eq!(self.zs.len(), 2, "two_body() needs exactly two particles");
        TwoBodyState {
            cm: (self.zs[0] + self.zs[1]) * FRAC_1_SQRT_2,
            rel: (self.zs[0] - self.zs[1]) * FRAC_1_SQRT_2,
        }
    }
}

/// Shape of a quadratic potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialShape {
    Trap,
    Saddle,
    /// One of the coefficients vanishes.
    Degenerate,
}

/// `V = u x² + v y²` written through the combinations `U = u+v` and
/// `V = u−v`, which are the only ones the flows use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticPotential {
    u: f64,
    v: f64,
}

impl QuadraticPotential {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if !(u.is_finite() && v.is_finite()) {
            return Err(Error::NonFinite("potential coefficients"));
        }
        Ok(Self { u, v })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    /// `U = u + v`, the coefficient of `K̂₀`.
    pub fn isotropic(&self) -> f64 {
        self.u + self.v
    }

    /// `V = u − v`, the coefficient of `(K̂₊ + K̂₋)/2`.
    pub fn anisotropic(&self) -> f64 {
        self.u - self.v
    }

    pub fn shape(&self) -> PotentialShape {
        if self.u > 0.0 && self.v > 0.0 {
            PotentialShape::Trap
        } else if self.u * self.v < 0.0 {
            PotentialShape::Saddle
        } else {
            PotentialShape::Degenerate
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.u == self.v
    }

    /// `ω = √(U² − V²)` when the relative motion is oscillatory.
    pub fn frequency(&self) -> Option<f64> {
        let w2 = self.isotropic().powi(2) - self.anisotropic().powi(2);
        (w2 > 0.0).then(|| w2.sqrt())
    }

    /// Classical single-mode energy `(U/2)|z|² + (V/4)(z² + z̄²)`.
    pub fn classical_energy(&self, z: Complex64) -> f64 {
        0.5 * self.isotropic() * z.norm_sqr() + 0.5 * self.anisotropic() * (z * z).re
    }
}
