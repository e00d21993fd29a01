use proptest::prelude::*;
use statdyn::qoracle::{make_cat, make_coherent, FockState};
use statdyn::statcore::{
    berry_connection, cm_relative_transform, kahler_potential, potential_expectation,
    potential_gradient, symplectic_factor, symplectic_matrix, NBodyState, QuadraticPotential,
    Statistics,
};
use statdyn::{Complex64, Error};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn identical() -> impl Strategy<Value = Statistics> {
    prop_oneof![Just(Statistics::Boson), Just(Statistics::Fermion)]
}

fn any_statistics() -> impl Strategy<Value = Statistics> {
    prop_oneof![
        Just(Statistics::Boson),
        Just(Statistics::Fermion),
        Just(Statistics::Distinguishable)
    ]
}

fn point(r: f64) -> impl Strategy<Value = Complex64> {
    (0.0..=r, 0.0..std::f64::consts::TAU).prop_map(|(m, a)| Complex64::from_polar(m, a))
}

/// Fermion sums cancel to a relative size of about `|Δz|²` per close pair,
/// which the derivatives amplify, so only spread-out fermion states are fed
/// to the difference and closed-form checks.
fn fermions_apart(s: Statistics, zs: &[Complex64], min_sep: f64) -> bool {
    s != Statistics::Fermion
        || zs.iter().enumerate().all(|(i, a)| zs[i + 1..].iter().all(|b| (a - b).norm() >= min_sep))
}

fn near_singular(e: &Error) -> bool {
    matches!(e, Error::Singular { .. } | Error::Coincidence { .. })
}

/// `∂_{z̄_j} g` and `∂_{z_j} g` by central differences in `x_j`, `y_j`.
fn wirtinger<F: Fn(&[Complex64]) -> Complex64>(g: F, zs: &[Complex64], j: usize, h: f64) -> (Complex64, Complex64) {
    let shifted = |d: Complex64| {
        let mut w = zs.to_vec();
        w[j] += d;
        g(&w)
    };
    let dx = (shifted(c(h, 0.0)) - shifted(c(-h, 0.0))) / (2.0 * h);
    let dy = (shifted(c(0.0, h)) - shifted(c(0.0, -h))) / (2.0 * h);
    let i = c(0.0, 1.0);
    (0.5 * (dx + i * dy), 0.5 * (dx - i * dy))
}

/// `∂_{z̄_j} g` by the five-point stencil. Tightly bunched fermions carry
/// rounding noise near 1e-11 in `g`, so the step has to stay large.
fn wirtinger_bar4<F: Fn(&[Complex64]) -> Complex64>(g: F, zs: &[Complex64], j: usize, h: f64) -> Complex64 {
    let shifted = |d: Complex64| {
        let mut w = zs.to_vec();
        w[j] += d;
        g(&w)
    };
    let d = |e: Complex64| {
        (8.0 * (shifted(e) - shifted(-e)) - (shifted(2.0 * e) - shifted(-2.0 * e))) / (12.0 * h)
    };
    0.5 * (d(c(h, 0.0)) + c(0.0, 1.0) * d(c(0.0, h)))
}

const MIN_SEP: f64 = 0.2;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pair_matrix_matches_closed_factor(s in any_statistics(), z1 in point(4.0), z2 in point(4.0)) {
        prop_assume!(fermions_apart(s, &[z1, z2], MIN_SEP));
        let m = match symplectic_matrix(&NBodyState::new(vec![z1, z2]).unwrap(), s) {
            Ok(m) => m,
            Err(e) if near_singular(&e) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let rel = cm_relative_transform(z1, z2).unwrap().rel;
        let f = symplectic_factor(s, rel.norm_sqr()).unwrap();
        let want = [[0.5 * (1.0 + f), 0.5 * (1.0 - f)], [0.5 * (1.0 - f), 0.5 * (1.0 + f)]];
        for i in 0..2 {
            for j in 0..2 {
                let got = m.matrix()[(i, j)];
                prop_assert!((got - c(want[i][j], 0.0)).norm() < 1e-10, "({i},{j}) {got} vs {}", want[i][j]);
            }
        }
    }

    #[test]
    fn matrix_is_hermitian_positive(s in any_statistics(), zs in prop::collection::vec(point(3.0), 1..=4)) {
        let m = match symplectic_matrix(&NBodyState::new(zs).unwrap(), s) {
            Ok(m) => m,
            Err(e) if near_singular(&e) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let a = m.matrix();
        let scale = a.iter().map(|x| x.norm()).fold(1.0, f64::max);
        prop_assert!((a - a.adjoint()).iter().all(|x| x.norm() < 1e-12 * scale));
        prop_assert!(m.min_eigenvalue() > 0.0);
    }

    #[test]
    fn three_body_hessian_by_chained_differences(s in identical(), zs in prop::collection::vec(point(2.0), 3)) {
        prop_assume!(fermions_apart(s, &zs, MIN_SEP));
        let state = NBodyState::new(zs.clone()).unwrap();
        let m = match symplectic_matrix(&state, s) {
            Ok(m) => m,
            Err(e) if near_singular(&e) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assume!(m.min_eigenvalue() > 1e-3);
        let h = 1e-5;
        let k = |w: &[Complex64]| c(kahler_potential(&NBodyState::new(w.to_vec()).unwrap(), s).unwrap(), 0.0);
        // ∂_z̄ 𝕂 = 2i A_z̄
        let grad = |w: &[Complex64]| -> Vec<Complex64> {
            berry_connection(&NBodyState::new(w.to_vec()).unwrap(), s)
                .unwrap()
                .iter()
                .map(|a| c(0.0, 2.0) * a)
                .collect()
        };
        let g0 = grad(&zs);
        for j in 0..3 {
            let (dbar, _) = wirtinger(k, &zs, j, h);
            prop_assert!((dbar - g0[j]).norm() <= 1e-6 * g0[j].norm().max(1.0), "gradient {j}");
        }
        for i in 0..3 {
            for j in 0..3 {
                let (_, dz) = wirtinger(|w| grad(w)[i], &zs, j, h);
                let want = m.matrix()[(i, j)];
                prop_assert!((dz - want).norm() <= 1e-6 * want.norm().max(1.0), "({i},{j}) {dz} vs {want}");
            }
        }
    }

    #[test]
    fn potential_gradient_by_differences(
        s in any_statistics(),
        zs in prop::collection::vec(point(2.0), 2..=3),
        u in 0.1f64..2.0,
        v in -1.0f64..2.0,
    ) {
        prop_assume!(fermions_apart(s, &zs, MIN_SEP));
        let pot = QuadraticPotential::new(u, v).unwrap();
        let state = NBodyState::new(zs.clone()).unwrap();
        let grad = match potential_gradient(&state, s, &pot) {
            Ok(g) => g,
            Err(e) if near_singular(&e) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assume!(symplectic_matrix(&state, s).is_ok());
        let energy = |w: &[Complex64]| {
            c(potential_expectation(&NBodyState::new(w.to_vec()).unwrap(), s, &pot, false).unwrap(), 0.0)
        };
        for j in 0..zs.len() {
            let dbar = wirtinger_bar4(energy, &zs, j, 1e-3);
            prop_assert!((dbar - grad[j]).norm() <= 1e-6 * grad[j].norm().max(1.0), "{j}: {dbar} vs {}", grad[j]);
        }
    }

    #[test]
    fn separated_particles_are_distinguishable(s in identical(), shift in point(1.0), angle in 0.0f64..std::f64::consts::TAU) {
        // Mutual separations of at least 20.
        let zs: Vec<Complex64> = (0..3)
            .map(|k| shift + Complex64::from_polar(12.0, angle + k as f64 * std::f64::consts::TAU / 3.0))
            .collect();
        let state = NBodyState::new(zs).unwrap();
        let m = symplectic_matrix(&state, s).unwrap();
        let d = symplectic_matrix(&state, Statistics::Distinguishable).unwrap();
        prop_assert!((m.matrix() - d.matrix()).iter().all(|x| x.norm() < 1e-12));
        let pot = QuadraticPotential::new(1.0, 0.4).unwrap();
        let e = potential_expectation(&state, s, &pot, false).unwrap();
        let ed = potential_expectation(&state, Statistics::Distinguishable, &pot, false).unwrap();
        prop_assert!((e - ed).abs() < 1e-10 * ed.abs().max(1.0));
    }
}

// Multi-mode oracle built from single-mode Fock vectors: the symmetrized
// state Σ_P η_P |z_P(1)⟩ ⊗ … ⊗ |z_P(N)⟩ and its one-body moments.

fn overlap(a: &FockState, b: &FockState) -> Complex64 {
    a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x.conj() * y).sum()
}

fn number_element(a: &FockState, b: &FockState) -> Complex64 {
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .enumerate()
        .map(|(n, (x, y))| x.conj() * y * n as f64)
        .sum()
}

fn lowering2_element(a: &FockState, b: &FockState) -> Complex64 {
    let (ca, cb) = (a.coeffs(), b.coeffs());
    (0..ca.len().saturating_sub(2))
        .map(|n| ca[n].conj() * cb[n + 2] * (((n + 1) * (n + 2)) as f64).sqrt())
        .sum()
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    if n == 1 {
        return vec![(vec![0], 1.0)];
    }
    let mut out = Vec::new();
    for (p, sign) in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            let parity = if (n - 1 - pos) % 2 == 0 { 1.0 } else { -1.0 };
            out.push((q, sign * parity));
        }
    }
    out
}

fn fock_energy(zs: &[Complex64], s: Statistics, pot: &QuadraticPotential) -> f64 {
    let modes: Vec<FockState> = zs.iter().map(|&z| make_coherent(z, 96).unwrap()).collect();
    let perms = match s {
        Statistics::Distinguishable => vec![((0..zs.len()).collect(), 1.0)],
        _ => permutations(zs.len()),
    };
    let eta = |sign: f64| if s == Statistics::Fermion { sign } else { 1.0 };
    let (mut norm, mut num, mut low2) = (c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
    for (p, sp) in &perms {
        for (q, sq) in &perms {
            let w = eta(*sp) * eta(*sq);
            let ov: Vec<Complex64> = (0..zs.len()).map(|k| overlap(&modes[p[k]], &modes[q[k]])).collect();
            let all: Complex64 = ov.iter().product();
            norm += w * all;
            for k in 0..zs.len() {
                let rest: Complex64 = (0..zs.len()).filter(|&j| j != k).map(|j| ov[j]).product();
                num += w * rest * number_element(&modes[p[k]], &modes[q[k]]);
                low2 += w * rest * lowering2_element(&modes[p[k]], &modes[q[k]]);
            }
        }
    }
    let n = (num / norm).re;
    let a2 = (low2 / norm).re;
    0.5 * pot.isotropic() * n + 0.5 * pot.anisotropic() * a2
}

#[test]
fn pair_expectation_matches_cm_coherent_times_relative_cat() {
    let pot = QuadraticPotential::new(1.3, 0.45).unwrap();
    for (z1, z2) in [(c(0.9, 0.2), c(-0.4, 0.7)), (c(1.5, -0.5), c(1.1, 0.3)), (c(0.2, 0.1), c(-0.3, 0.05))] {
        let pair = cm_relative_transform(z1, z2).unwrap();
        let cm = make_coherent(pair.cm, 96).unwrap();
        for s in [Statistics::Boson, Statistics::Fermion] {
            let rel = make_cat(pair.rel, s, 96).unwrap();
            let n = cm.mean_number() + rel.mean_number();
            let a2 = (cm.mean_a2() + rel.mean_a2()).re;
            let want = 0.5 * pot.isotropic() * n + 0.5 * pot.anisotropic() * a2;
            let got = potential_expectation(&NBodyState::new(vec![z1, z2]).unwrap(), s, &pot, false).unwrap();
            assert!((got - want).abs() < 1e-8, "{s}: {got} vs {want}");
            assert!((fock_energy(&[z1, z2], s, &pot) - want).abs() < 1e-8, "{s} multimode");
        }
    }
}

#[test]
fn three_body_expectation_matches_multimode_oracle() {
    let pot = QuadraticPotential::new(1.0, 0.3).unwrap();
    let configs = [
        [c(0.0, 1.0), c(-0.8, -0.5), c(0.8, -0.5)],
        [c(0.3, 0.1), c(-0.2, 0.4), c(0.5, -0.6)],
        [c(1.2, 0.0), c(1.0, 0.3), c(-0.9, 0.2)],
    ];
    for zs in configs {
        for s in Statistics::ALL {
            let got = potential_expectation(&NBodyState::new(zs.to_vec()).unwrap(), s, &pot, false).unwrap();
            let want = fock_energy(&zs, s, &pot);
            assert!((got - want).abs() < 1e-8 * want.abs().max(1.0), "{s} {zs:?}: {got} vs {want}");
        }
    }
}

#[test]
fn permutation_oracle_has_signed_count() {
    let p = permutations(4);
    assert_eq!(p.len(), 24);
    assert_eq!(p.iter().map(|x| x.1).sum::<f64>(), 0.0);
}
