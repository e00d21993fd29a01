//! N-particle Kähler machinery.
//!
//! The symmetrized coherent state of N particles has the squared inverse
//! normalization
//!
//! ```text
//! S(z̄, z) = Σ_P η_P exp(Σ_k z̄_k z_{P(k)})
//! ```
//!
//! with `η_P = 1` for bosons and `sign(P)` for fermions. Distinguishable
//! particles keep only the identity term. `𝕂 = ln S` is the Kähler
//! potential, `f_{z̄_i z_j} = ∂_{z̄_i} ∂_{z_j} 𝕂` the symplectic matrix, and
//! one-body expectation values follow from derivatives of `S`.
//!
//! Every term is evaluated relative to the identity exponent `M = Σ_k |z_k|²`,
//! which bounds the real part of all other exponents, so only `ln S` ever
//! sees the large scale.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statcore::{NBodyState, QuadraticPotential, Statistics};

/// Numerical limits of the permutation-sum evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limits {
    /// Largest N accepted (the sum has N! terms).
    pub max_particles: usize,
    /// Largest `ln S` for which `S` itself is returned.
    pub exponent_bound: f64,
    /// Fermionic sums below this fraction of the identity term are coincident.
    pub coincidence_floor: f64,
    /// Smallest admissible eigenvalue of the symplectic matrix.
    pub f_min: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_particles: 8,
            exponent_bound: 700.0,
            coincidence_floor: 1e-300,
            f_min: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
struct Permutation {
    map: Vec<usize>,
    inv: Vec<usize>,
    sign: f64,
}

/// All permutations of `0..n` by Heap's algorithm; each swap flips parity.
fn build_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1.0;
    let push = |a: &[usize], sign: f64, out: &mut Vec<Permutation>| {
        let mut inv = vec![0; a.len()];
        for (k, &p) in a.iter().enumerate() {
            inv[p] = k;
        }
        out.push(Permutation {
            map: a.to_vec(),
            inv,
            sign,
        });
    };
    push(&a, sign, &mut out);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            sign = -sign;
            push(&a, sign, &mut out);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

const CACHED: usize = 9;

fn with_permutations<R>(n: usize, f: impl FnOnce(&[Permutation]) -> R) -> R {
    static CACHE: [OnceLock<Vec<Permutation>>; CACHED] = [const { OnceLock::new() }; CACHED];
    if n < CACHED {
        f(CACHE[n].get_or_init(|| build_permutations(n)))
    } else {
        f(&build_permutations(n))
    }
}

/// Normalized sums over permutations, all divided by `S`.
#[derive(Debug, Clone)]
pub(crate) struct Evaluation {
    /// `M`, the identity exponent.
    pub log_scale: f64,
    /// `S e^{−M}`.
    pub scaled_sum: f64,
    /// `∂_{z̄_i} S / S = ∂_{z̄_i} 𝕂`.
    pub grad: Vec<Complex64>,
    /// `f_{z̄_i z_j}`.
    pub hessian: DMatrix<Complex64>,
    /// `Σ_i ⟨a_i† a_i⟩ = Σ_i z_i ∂_{z_i} 𝕂`.
    pub occupation: f64,
    /// `∂_{z̄_j}` of the occupation.
    pub occupation_grad: Vec<Complex64>,
}

impl Evaluation {
    pub fn kahler(&self) -> f64 {
        self.log_scale + self.scaled_sum.ln()
    }
}

impl Limits {
    fn check_size(&self, n: usize) -> Result<()> {
        if n > self.max_particles {
            return Err(Error::TooManyParticles {
                n,
                max: self.max_particles,
            });
        }
        Ok(())
    }

    pub(crate) fn evaluate(&self, state: &NBodyState, s: Statistics) -> Result<Evaluation> {
        let zs = state.coords();
        let n = zs.len();
        self.check_size(n)?;
        let log_scale: f64 = zs.iter().map(|z| z.norm_sqr()).sum();

        if !s.is_identical() || n == 1 {
            return Ok(Evaluation {
                log_scale,
                scaled_sum: 1.0,
                grad: zs.to_vec(),
                hessian: DMatrix::identity(n, n),
                occupation: log_scale,
                occupation_grad: zs.to_vec(),
            });
        }

        let conj: Vec<Complex64> = zs.iter().map(|z| z.conj()).collect();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut d = vec![Complex64::new(0.0, 0.0); n];
        let mut h = DMatrix::<Complex64>::zeros(n, n);
        let mut se = Complex64::new(0.0, 0.0);
        let mut g = vec![Complex64::new(0.0, 0.0); n];

        with_permutations(n, |perms| {
            for p in perms {
                let exponent: Complex64 = (0..n).map(|k| conj[k] * zs[p.map[k]]).sum();
                let eta = if s == Statistics::Fermion { p.sign } else { 1.0 };
                let w = (exponent - log_scale).exp() * eta;
                sum += w;
                se += w * exponent;
                for i in 0..n {
                    let zp = zs[p.map[i]];
                    d[i] += w * zp;
                    g[i] += w * zp * (exponent + 1.0);
                    for j in 0..n {
                        let mut term = zp * conj[p.inv[j]];
                        if p.map[i] == j {
                            term += 1.0;
                        }
                        h[(i, j)] += w * term;
                    }
                }
            }
        });

        let scaled_sum = sum.re;
        if s == Statistics::Fermion && scaled_sum <= self.coincidence_floor {
            return Err(Error::Coincidence { value: scaled_sum });
        }
        if !(scaled_sum > 0.0) {
            return Err(Error::Coincidence { value: scaled_sum });
        }
        let inv = 1.0 / scaled_sum;
        let grad: Vec<Complex64> = d.iter().map(|x| x * inv).collect();
        let mut hessian = h * Complex64::new(inv, 0.0);
        for i in 0..n {
            for j in 0..n {
                hessian[(i, j)] -= grad[i] * grad[j].conj();
            }
        }
        let hessian = (&hessian + hessian.adjoint()) * Complex64::new(0.5, 0.0);
        let mean_exponent = se * inv;
        let occupation_grad = (0..n)
            .map(|j| g[j] * inv - mean_exponent * grad[j])
            .collect();
        Ok(Evaluation {
            log_scale,
            scaled_sum,
            grad,
            hessian,
            occupation: mean_exponent.re,
            occupation_grad,
        })
    }

    /// `S = Σ_P η_P exp(Σ_k z̄_k z_{P(k)})`.
    pub fn permutation_sum(&self, state: &NBodyState, s: Statistics) -> Result<f64> {
        let e = self.evaluate(state, s)?;
        let log_s = e.kahler();
        if log_s > self.exponent_bound {
            return Err(Error::Overflow {
                exponent: log_s,
                bound: self.exponent_bound,
            });
        }
        Ok(log_s.exp())
    }

    /// `𝕂 = ln S`.
    pub fn kahler_potential(&self, state: &NBodyState, s: Statistics) -> Result<f64> {
        Ok(self.evaluate(state, s)?.kahler())
    }

    /// The symplectic matrix, rejected when its smallest eigenvalue is
    /// below [`Limits::f_min`].
    pub fn symplectic_matrix(&self, state: &NBodyState, s: Statistics) -> Result<SymplecticMatrix> {
        let m = SymplecticMatrix(self.evaluate(state, s)?.hessian);
        m.check(self.f_min)?;
        Ok(m)
    }

    /// Expectation of the quadratic Hamiltonian over the normalized
    /// symmetrized coherent state.
    pub fn potential_expectation(
        &self,
        state: &NBodyState,
        s: Statistics,
        pot: &QuadraticPotential,
        include_zero_point: bool,
    ) -> Result<f64> {
        let e = self.evaluate(state, s)?;
        Ok(expectation_from(&e, state, pot, include_zero_point))
    }

    /// `∂_{z̄_j} V` for every particle.
    pub fn potential_gradient(
        &self,
        state: &NBodyState,
        s: Statistics,
        pot: &QuadraticPotential,
    ) -> Result<Vec<Complex64>> {
        let e = self.evaluate(state, s)?;
        Ok(gradient_from(&e, state, pot))
    }

    /// Berry connection `A_{z̄_i} = −(i/2) ∂_{z̄_i} 𝕂`; `A_{z_i}` is its conjugate.
    pub fn berry_connection(&self, state: &NBodyState, s: Statistics) -> Result<Vec<Complex64>> {
        let e = self.evaluate(state, s)?;
        Ok(e.grad.iter().map(|g| Complex64::new(0.0, -0.5) * g).collect())
    }

    /// Symplectic matrix and potential gradient from one evaluation.
    pub fn flow_terms(
        &self,
        state: &NBodyState,
        s: Statistics,
        pot: &QuadraticPotential,
    ) -> Result<(SymplecticMatrix, Vec<Complex64>)> {
        let e = self.evaluate(state, s)?;
        let grad = gradient_from(&e, state, pot);
        let m = SymplecticMatrix(e.hessian);
        m.check(self.f_min)?;
        Ok((m, grad))
    }
}

fn expectation_from(
    e: &Evaluation,
    state: &NBodyState,
    pot: &QuadraticPotential,
    include_zero_point: bool,
) -> f64 {
    let n = state.len() as f64;
    let squares: Complex64 = state.coords().iter().map(|z| z * z).sum();
    let zero_point = if include_zero_point { 0.5 * n } else { 0.0 };
    0.5 * pot.isotropic() * (e.occupation + zero_point) + 0.5 * pot.anisotropic() * squares.re
}

fn gradient_from(e: &Evaluation, state: &NBodyState, pot: &QuadraticPotential) -> Vec<Complex64> {
    let (big_u, big_v) = (pot.isotropic(), pot.anisotropic());
    e.occupation_grad
        .iter()
        .zip(state.coords())
        .map(|(g, z)| 0.5 * big_u * g + 0.5 * big_v * z.conj())
        .collect()
}

/// Hermitian matrix `f_{z̄_i z_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix(DMatrix<Complex64>);

impl SymplecticMatrix {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.0
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    fn check(&self, f_min: f64) -> Result<()> {
        let min_eigenvalue = self.min_eigenvalue();
        if !(min_eigenvalue >= f_min) {
            return Err(Error::Singular {
                min_eigenvalue,
                threshold: f_min,
            });
        }
        Ok(())
    }

    /// Solves `f x = b` by Cholesky factorization.
    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let rhs = nalgebra::DVector::from_column_slice(b);
        let chol = self.0.clone().cholesky().ok_or(Error::Singular {
            min_eigenvalue: self.min_eigenvalue(),
            threshold: 0.0,
        })?;
        Ok(chol.solve(&rhs).iter().copied().collect())
    }
}

/// [`Limits::permutation_sum`] with default limits.
pub fn permutation_sum(state: &NBodyState, s: Statistics) -> Result<f64> {
    Limits::default().permutation_sum(state, s)
}

/// [`Limits::kahler_potential`] with default limits.
pub fn kahler_potential(state: &NBodyState, s: Statistics) -> Result<f64> {
    Limits::default().kahler_potential(state, s)
}

/// [`Limits::symplectic_matrix`] with default limits.
pub fn symplectic_matrix(state: &NBodyState, s: Statistics) -> Result<SymplecticMatrix> {
    Limits::default().symplectic_matrix(state, s)
}

/// [`Limits::potential_expectation`] with default limits.
pub fn potential_expectation(
    state: &NBodyState,
    s: Statistics,
    pot: &QuadraticPotential,
    include_zero_point: bool,
) -> Result<f64> {
    Limits::default().potential_expectation(state, s, pot, include_zero_point)
}

/// [`Limits::berry_connection`] with default limits.
pub fn berry_connection(state: &NBodyState, s: Statistics) -> Result<Vec<Complex64>> {
    Limits::default().berry_connection(state, s)
}

/// [`Limits::potential_gradient`] with default limits.
pub fn potential_gradient(
    state: &NBodyState,
    s: Statistics,
    pot: &QuadraticPotential,
) -> Result<Vec<Complex64>> {
    Limits::default().potential_gradient(state, s, pot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statcore::factor::{relative_kahler, rho_kahler_slope, symplectic_factor};
    use crate::statcore::TwoBodyState;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn state(zs: &[Complex64]) -> NBodyState {
        NBodyState::new(zs.to_vec()).unwrap()
    }

    /// Independent permutation sum over all index maps with an explicit
    /// inversion count; no stabilization.
    fn brute_force_sum(zs: &[Complex64], s: Statistics) -> f64 {
        let n = zs.len();
        let mut total = Complex64::new(0.0, 0.0);
        let mut idx = vec![0usize; n];
        loop {
            let mut seen = vec![false; n];
            if idx.iter().all(|&i| !std::mem::replace(&mut seen[i], true)) {
                let inversions = (0..n)
                    .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                    .filter(|&(a, b)| idx[a] > idx[b])
                    .count();
                let eta = match s {
                    Statistics::Fermion if inversions % 2 == 1 => -1.0,
                    _ => 1.0,
                };
                let e: Complex64 = (0..n).map(|k| zs[k].conj() * zs[idx[k]]).sum();
                total += e.exp() * eta;
            }
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] < n {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        total.re
    }

    #[test]
    fn heap_permutations_have_correct_count_and_parity() {
        for n in 1..=6 {
            let perms = build_permutations(n);
            let expected: usize = (1..=n).product();
            assert_eq!(perms.len(), expected);
            let even = perms.iter().filter(|p| p.sign > 0.0).count();
            if n > 1 {
                assert_eq!(even, expected / 2);
            }
            for p in &perms {
                let inversions = (0..n)
                    .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                    .filter(|&(a, b)| p.map[a] > p.map[b])
                    .count();
                assert_eq!(p.sign > 0.0, inversions % 2 == 0);
            }
        }
    }

    #[test]
    fn single_particle_sum_is_gaussian() {
        let z = c(0.7, -0.4);
        for s in Statistics::ALL {
            let got = permutation_sum(&state(&[z]), s).unwrap();
            assert!((got - z.norm_sqr().exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn two_boson_sum_is_cosh() {
        let z = c(0.6, 0.3);
        let got = permutation_sum(&state(&[z, -z]), Statistics::Boson).unwrap();
        let rho_rel = 2.0 * z.norm_sqr();
        assert!((got - 2.0 * rho_rel.cosh()).abs() < 1e-13);
    }

    #[test]
    fn coincident_fermions_cancel() {
        let z = c(0.4, 0.9);
        let err = permutation_sum(&state(&[z, z]), Statistics::Fermion).unwrap_err();
        assert!(matches!(err, Error::Coincidence { .. }));
    }

    #[test]
    fn sums_match_brute_force() {
        let zs = [c(0.3, 0.1), c(-0.5, 0.4), c(0.2, -0.7), c(0.9, 0.2)];
        for s in Statistics::ALL {
            let want = if s.is_identical() {
                brute_force_sum(&zs, s)
            } else {
                zs.iter().map(|z| z.norm_sqr()).sum::<f64>().exp()
            };
            let got = permutation_sum(&state(&zs), s).unwrap();
            assert!(((got - want) / want).abs() < 1e-12, "{s}: {got} vs {want}");
        }
    }

    #[test]
    fn overflow_and_size_limits() {
        let big = state(&[c(20.0, 20.0), c(-20.0, 0.0)]);
        assert!(matches!(
            permutation_sum(&big, Statistics::Boson),
            Err(Error::Overflow { .. })
        ));
        // The logarithm stays available.
        let k = kahler_potential(&big, Statistics::Boson).unwrap();
        assert!((k - 1200.0).abs() < 1e-9);
        let nine = state(&vec![c(0.1, 0.0); 9]);
        assert!(matches!(
            permutation_sum(&nine, Statistics::Boson),
            Err(Error::TooManyParticles { n: 9, max: 8 })
        ));
    }

    #[test]
    fn two_body_kahler_matches_closed_forms() {
        let cm = c(0.6, -1.2);
        let rel = c(0.8, 0.5);
        let pair = TwoBodyState::new(cm, rel).to_nbody();
        let rho = rel.norm_sqr();
        for s in [Statistics::Boson, Statistics::Fermion] {
            let k = kahler_potential(&pair, s).unwrap();
            let closed = cm.norm_sqr() + relative_kahler(s, rho).unwrap() + 2f64.ln();
            assert!((k - closed).abs() < 1e-13, "{s}");
        }
        let one = state(&[cm]);
        assert!((kahler_potential(&one, Statistics::Boson).unwrap() - cm.norm_sqr()).abs() < 1e-15);
    }

    #[test]
    fn single_particle_matrix_is_identity() {
        let m = symplectic_matrix(&state(&[c(1.5, 2.0)]), Statistics::Fermion).unwrap();
        assert_eq!(m.matrix()[(0, 0)], c(1.0, 0.0));
    }

    #[test]
    fn two_body_matrix_block_diagonalizes() {
        let t = std::f64::consts::FRAC_1_SQRT_2;
        let transform = DMatrix::from_row_slice(2, 2, &[c(t, 0.0), c(t, 0.0), c(t, 0.0), c(-t, 0.0)]);
        for s in Statistics::ALL {
            let pair = TwoBodyState::new(c(0.4, 1.1), c(-0.9, 0.7));
            let f = symplectic_matrix(&pair.to_nbody(), s).unwrap();
            let block = transform.transpose() * f.matrix() * &transform;
            let fs = symplectic_factor(s, pair.rel.norm_sqr()).unwrap();
            assert!((block[(0, 0)] - 1.0).norm() < 1e-12);
            assert!((block[(1, 1)] - fs).norm() < 1e-12);
            assert!(block[(0, 1)].norm() < 1e-12);
        }
    }

    #[test]
    fn separated_bosons_are_nearly_distinguishable() {
        let zs = [c(0.0, 8.0), c(-7.0, -4.0), c(7.0, -4.0)];
        let f = symplectic_matrix(&state(&zs), Statistics::Boson).unwrap();
        let brute = brute_force_sum(&zs, Statistics::Boson);
        assert!(((brute.ln() - zs.iter().map(|z| z.norm_sqr()).sum::<f64>()).abs()) < 1e-10);
        let id = DMatrix::<Complex64>::identity(3, 3);
        assert!((f.matrix() - id).norm() < 1e-10);
    }

    #[test]
    fn singular_at_bosonic_relative_origin() {
        let w = c(0.3, -0.2);
        let err = symplectic_matrix(&state(&[w, w]), Statistics::Boson).unwrap_err();
        assert!(matches!(err, Error::Singular { .. }));
    }

    #[test]
    fn pair_expectations_match_lagrangians() {
        let pot = QuadraticPotential::new(1.3, 0.5).unwrap();
        let rel = c(0.7, 0.45);
        let pair = TwoBodyState::new(c(0.0, 0.0), rel).to_nbody();
        let rho = rel.norm_sqr();
        for s in Statistics::ALL {
            let got = potential_expectation(&pair, s, &pot, false).unwrap();
            let want = 0.5 * pot.isotropic() * rho_kahler_slope(s, rho).unwrap()
                + 0.25 * pot.anisotropic() * 2.0 * (rel * rel).re;
            assert!((got - want).abs() < 1e-12, "{s}: {got} vs {want}");
        }
        let sym = QuadraticPotential::new(0.9, 0.9).unwrap();
        let got = potential_expectation(&pair, Statistics::Boson, &sym, false).unwrap();
        assert!((got - 0.5 * sym.isotropic() * rho * rho.tanh()).abs() < 1e-12);
    }

    #[test]
    fn zero_potential_gives_zero() {
        let zero = QuadraticPotential::new(0.0, 0.0).unwrap();
        let st = state(&[c(0.2, 0.5), c(-1.0, 0.1), c(0.3, -0.8)]);
        for s in Statistics::ALL {
            assert_eq!(potential_expectation(&st, s, &zero, false).unwrap(), 0.0);
        }
        let zp = potential_expectation(&st, Statistics::Boson, &QuadraticPotential::new(1.0, 1.0).unwrap(), true)
            .unwrap()
            - potential_expectation(&st, Statistics::Boson, &QuadraticPotential::new(1.0, 1.0).unwrap(), false)
                .unwrap();
        assert!((zp - 1.5).abs() < 1e-12);
    }
}
