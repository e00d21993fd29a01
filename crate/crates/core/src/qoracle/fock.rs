use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qoracle::ehrenfest::KTriple;
use crate::statcore::Statistics;

pub const DEFAULT_CUTOFF: usize = 64;
pub const MAX_CUTOFF: usize = 512;
/// Number of top levels whose weight is the tail mass.
pub const TAIL_WINDOW: usize = 8;
pub const TAIL_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    coeffs: Vec<Complex64>,
}

impl FockState {
    /// Wraps coefficients that are already normalized.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() <= TAIL_WINDOW {
            return Err(Error::InvalidParameter(format!(
                "cutoff must exceed {TAIL_WINDOW}, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite("Fock coefficients"));
        }
        let state = Self { coeffs };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParameter(format!("state norm² is {norm}, expected 1")));
        }
        state.check_tail()?;
        Ok(state)
    }

    /// Normalizes arbitrary coefficients.
    pub fn normalized(mut coeffs: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::DegenerateState("zero vector"));
        }
        coeffs.iter_mut().for_each(|c| *c /= norm);
        Self::new(coeffs)
    }

    pub(crate) fn from_raw(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn vacuum(cutoff: usize) -> Result<Self> {
        let mut c = vec![Complex64::new(0.0, 0.0); cutoff];
        if let Some(first) = c.first_mut() {
            *first = Complex64::new(1.0, 0.0);
        }
        Self::new(c)
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `Σ_{k ≥ cutoff − 8} |c_k|²`.
    pub fn tail_mass(&self) -> f64 {
        self.coeffs[self.cutoff() - TAIL_WINDOW..]
            .iter()
            .map(|c| c.norm_sqr())
            .sum()
    }

    pub fn check_tail(&self) -> Result<()> {
        let mass = self.tail_mass();
        if mass > TAIL_TOL {
            return Err(Error::TailMass {
                mass,
                cutoff: self.cutoff(),
            });
        }
        Ok(())
    }

    /// Zero-padded or truncated copy with a new cutoff.
    pub fn with_cutoff(&self, cutoff: usize) -> Result<Self> {
        let mut c = self.coeffs.clone();
        c.resize(cutoff, Complex64::new(0.0, 0.0));
        Self::normalized(c)
    }

    /// `⟨a†a⟩`.
    pub fn mean_number(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| k as f64 * c.norm_sqr())
            .sum()
    }

    /// `⟨a⟩`.
    pub fn mean_a(&self) -> Complex64 {
        (1..self.cutoff())
            .map(|k| self.coeffs[k - 1].conj() * self.coeffs[k] * (k as f64).sqrt())
            .sum()
    }

    /// `⟨a²⟩`.
    pub fn mean_a2(&self) -> Complex64 {
        (2..self.cutoff())
            .map(|k| self.coeffs[k - 2].conj() * self.coeffs[k] * ((k * (k - 1)) as f64).sqrt())
            .sum()
    }

    /// `⟨x̂⟩` with `x̂ = (a + a†)/√2`.
    pub fn mean_x(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.mean_a().re
    }

    /// `⟨p̂⟩` with `p̂ = −i(a − a†)/√2`.
    pub fn mean_p(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.mean_a().im
    }

    /// `(⟨K̂_c⟩, ⟨K̂_s⟩, ⟨K̂₀⟩)` with `K̂_c = K̂₊ + K̂₋` and `K̂_s = i(K̂₊ − K̂₋)`.
    pub fn k_expectations(&self) -> KTriple {
        let a2 = self.mean_a2();
        KTriple {
            kc: a2.re,
            ks: a2.im,
            k0: 0.5 * self.mean_number() + 0.25,
        }
    }

    pub fn inner(&self, other: &FockState) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

fn coherent_terms(z: Complex64, cutoff: usize) -> Result<Vec<Complex64>> {
    let rho = z.norm_sqr();
    if !(rho.is_finite()) {
        return Err(Error::NonFinite("coherent amplitude"));
    }
    if rho > cutoff as f64 / 4.0 {
        return Err(Error::CutoffTooSmall { cutoff, rho });
    }
    let mut c = Vec::with_capacity(cutoff);
    let mut term = Complex64::new(1.0, 0.0);
    for k in 0..cutoff {
        if k > 0 {
            term = term * z / (k as f64).sqrt();
        }
        c.push(term);
    }
    Ok(c)
}

/// `|z⟩ ∝ Σ z^k/√(k!) |k⟩`.
pub fn make_coherent(z: Complex64, cutoff: usize) -> Result<FockState> {
    FockState::normalized(coherent_terms(z, cutoff)?)
}

/// `|z⟩ + |−z⟩` (boson) or `|z⟩ − |−z⟩` (fermion), normalized.
pub fn make_cat(z: Complex64, parity: Statistics, cutoff: usize) -> Result<FockState> {
    let keep_odd = match parity {
        Statistics::Boson => false,
        Statistics::Fermion => true,
        Statistics::Distinguishable => {
            return Err(Error::InvalidParameter(
                "cat states need boson or fermion parity".into(),
            ))
        }
    };
    let mut c = coherent_terms(z, cutoff)?;
    for (k, ck) in c.iter_mut().enumerate() {
        if (k % 2 == 1) != keep_odd {
            *ck = Complex64::new(0.0, 0.0);
        }
    }
    if c.iter().all(|x| x.norm_sqr() == 0.0) {
        return Err(Error::DegenerateState("fermion cat state at z = 0"));
    }
    FockState::normalized(c)
}

/// Relative-mode state for a pair of the given statistics: coherent for
/// distinguishable particles, the matching cat state otherwise.
pub fn manifold_state(s: Statistics, z: Complex64, cutoff: usize) -> Result<FockState> {
    match s {
        Statistics::Distinguishable => make_coherent(z, cutoff),
        _ => make_cat(z, s, cutoff),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Statistics::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vacuum_from_zero() {
        let s = make_coherent(c(0.0, 0.0), 64).unwrap();
        assert_eq!(s.coeffs()[0], c(1.0, 0.0));
        assert!(s.coeffs()[1..].iter().all(|x| x.norm() == 0.0));
        assert_eq!(make_cat(c(0.0, 0.0), Boson, 64).unwrap(), s);
    }

    #[test]
    fn coherent_moments() {
        let z = c(1.1, -0.7);
        let s = make_coherent(z, 64).unwrap();
        assert!((s.mean_number() - z.norm_sqr()).abs() < 1e-10);
        assert!((s.mean_a() - z).norm() < 1e-10);
        assert!((s.mean_a2() - z * z).norm() < 1e-10);
    }

    #[test]
    fn cat_parity() {
        let z = c(0.9, 0.4);
        let even = make_cat(z, Boson, 64).unwrap();
        let odd = make_cat(z, Fermion, 64).unwrap();
        for k in 0..64 {
            if k % 2 == 1 {
                assert_eq!(even.coeffs()[k].norm(), 0.0);
            } else {
                assert_eq!(odd.coeffs()[k].norm(), 0.0);
            }
        }
        assert_eq!(even.mean_x(), 0.0);
        assert_eq!(odd.mean_p(), 0.0);
        // ⟨n⟩ = ρ tanh ρ and ρ coth ρ.
        let rho = z.norm_sqr();
        assert!((even.mean_number() - rho * rho.tanh()).abs() < 1e-10);
        assert!((odd.mean_number() - rho / rho.tanh()).abs() < 1e-10);
    }

    #[test]
    fn guards() {
        assert!(matches!(
            make_cat(c(0.0, 0.0), Fermion, 64),
            Err(Error::DegenerateState(_))
        ));
        assert!(matches!(
            make_coherent(c(5.0, 0.0), 64),
            Err(Error::CutoffTooSmall { .. })
        ));
        assert!(make_coherent(c(5.0, 0.0), 128).is_ok());
        assert!(make_cat(c(1.0, 0.0), Distinguishable, 64).is_err());
    }
}
