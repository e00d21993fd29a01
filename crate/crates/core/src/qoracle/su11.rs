use nalgebra::DMatrix;
use num_complex::Complex64;

/// `K̂₊ = a†²/2`, `K̂₋ = a²/2`, `K̂₀ = (a†a + aa†)/4` truncated to `cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct Su11Triple {
    pub k_plus: DMatrix<Complex64>,
    pub k_minus: DMatrix<Complex64>,
    pub k0: DMatrix<Complex64>,
}

impl Su11Triple {
    pub fn new(cutoff: usize) -> Self {
        let mut k_plus = DMatrix::zeros(cutoff, cutoff);
        let mut k0 = DMatrix::zeros(cutoff, cutoff);
        for n in 0..cutoff {
            k0[(n, n)] = Complex64::new((2 * n + 1) as f64 / 4.0, 0.0);
            if n + 2 < cutoff {
                k_plus[(n + 2, n)] = Complex64::new(0.5 * (((n + 1) * (n + 2)) as f64).sqrt(), 0.0);
            }
        }
        let k_minus = k_plus.adjoint();
        Self {
            k_plus,
            k_minus,
            k0,
        }
    }

    pub fn cutoff(&self) -> usize {
        self.k0.nrows()
    }

    /// `Ĥ = U K̂₀ + (V/2)(K̂₊ + K̂₋)`.
    pub fn hamiltonian(&self, big_u: f64, big_v: f64) -> DMatrix<Complex64> {
        &self.k0 * Complex64::new(big_u, 0.0)
            + (&self.k_plus + &self.k_minus) * Complex64::new(0.5 * big_v, 0.0)
    }
}
