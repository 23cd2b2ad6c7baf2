use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use resonance_lab::geometry::{cyl_to_plane, plane_to_cyl, reduce_cylinder, sigma, CylCoord, HPoint, Mobius};
use resonance_lab::model_kernels::{cyl_kernel_fourier, cyl_mode};
use resonance_lab::resonances::{
    cylinder_resonances, cylinder_resonances_with_branch, funnel_resonances, funnel_resonances_with_branch,
    AngleBranch, Resonance, ResonanceSet, SurfaceSpec,
};
use resonance_lab::scattering::scattering_coeff;
use resonance_lab::specfun::{bessel_k, gamma};
use resonance_lab::twist::{eigen_angles, TwistAngle, TwistSpec};
use std::collections::BTreeMap;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn point() -> impl Strategy<Value = HPoint> {
    (-3.0..3.0f64, 0.05..4.0f64).prop_map(|(x, y)| HPoint { x, y })
}

fn unitary_twist() -> impl Strategy<Value = TwistSpec> {
    prop::collection::vec((0u32..40, 1u32..3), 1..4).prop_map(|v| {
        // angles on a 1/40 grid so that coincidences actually occur
        let mut seen = BTreeMap::new();
        for (k, m) in v {
            *seen.entry(k).or_insert(0) += m;
        }
        TwistSpec {
            angles: seen
                .into_iter()
                .map(|(k, mult)| TwistAngle {
                    theta: k as f64 / 40.0,
                    mult,
                    log_abs: 0.0,
                })
                .collect(),
        }
    })
}

fn random_unitary(seed: u64, n: usize) -> DMatrix<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    a.qr().q()
}

/// Brute-force multiset `-(start + step n) + p (rho + 2 pi i (theta + m)) / ell`,
/// points within `1e-9` of the circle `|s| = radius` dropped.
fn brute_lattice(ell: f64, twist: &TwistSpec, radius: f64, start: i64, step: i64) -> BTreeMap<(i64, i64), u32> {
    let mut out = BTreeMap::new();
    let mmax = (radius * ell / (2.0 * PI)).ceil() as i64 + 2;
    for a in &twist.angles {
        for p in [1.0, -1.0] {
            for n in 0..=((radius + a.log_abs.abs() / ell).ceil() as i64) {
                for m in -mmax..=mmax {
                    let re = -((start + step * n) as f64) + p * a.log_abs / ell;
                    let im = p * 2.0 * PI * (a.theta + m as f64) / ell;
                    let modulus = re.hypot(im);
                    if modulus < radius - 1e-9 {
                        let key = ((re * 1e6).round() as i64, (im * 1e6).round() as i64);
                        *out.entry(key).or_insert(0) += a.mult;
                    }
                }
            }
        }
    }
    out
}

fn keyed(set: &ResonanceSet) -> BTreeMap<(i64, i64), u32> {
    set.resonances
        .iter()
        .filter(|r| r.re.hypot(r.im) < set.radius - 1e-9)
        .map(|r| (((r.re * 1e6).round() as i64, (r.im * 1e6).round() as i64), r.mult))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_reflection(re in -4.0..4.0f64, im in 0.05..6.0f64) {
        let z = c(re, im);
        let lhs = gamma(z).unwrap() * gamma(c(1.0, 0.0) - z).unwrap();
        let rhs = PI / (z * PI).sin();
        prop_assert!((lhs - rhs).norm() <= 1e-11 * rhs.norm());
    }

    #[test]
    fn sigma_mobius_invariant(z in point(), w in point(), a in -2.0..2.0f64, b in -2.0..2.0f64, cc in -2.0..2.0f64) {
        // d from unit determinant, skipping near-degenerate a
        prop_assume!(a.abs() > 0.2);
        let g = Mobius::new(a, b, cc, (1.0 + b * cc) / a).unwrap();
        let (s0, s1) = (sigma(&z, &w), sigma(&g.apply(&z), &g.apply(&w)));
        prop_assert!((s0 - s1).abs() <= 1e-9 * s0);
    }

    #[test]
    fn cylinder_chart_round_trip(r in -3.0..3.0f64, phi in 0.0..std::f64::consts::TAU, ell in 0.3..4.0f64) {
        let z = cyl_to_plane(&CylCoord::new(r, phi), ell);
        let back = plane_to_cyl(&z, ell);
        prop_assert!((back.r - r).abs() < 1e-9);
        let dphi = (back.angle() - phi).rem_euclid(2.0 * PI);
        prop_assert!(dphi.min(2.0 * PI - dphi) < 1e-9);
    }

    #[test]
    fn reduction_lands_in_annulus(z in point(), ell in 0.3..3.0f64) {
        let (z0, j) = reduce_cylinder(&z, ell);
        let m = z0.abs();
        prop_assert!(m >= 1.0 && m < ell.exp());
        let back = z0.scale((j as f64 * ell).exp());
        prop_assert!((back.x - z.x).abs() <= 1e-12 * z.abs() && (back.y - z.y).abs() <= 1e-12 * z.abs());
    }

    #[test]
    fn twist_conjugation_invariance(seed in 0u64..1000, dim in 1usize..5, k in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let diag: Vec<Complex64> = (0..dim)
            .map(|i| if i < k { c(1.0, 0.0) } else { Complex64::from_polar(1.0, 2.0 * PI * rng.gen_range(0.02..0.98)) })
            .collect();
        let d = DMatrix::from_diagonal(&DVector::from_vec(diag));
        let q = random_unitary(seed, dim);
        let a = eigen_angles(&d, 1e-10).unwrap();
        let b = eigen_angles(&(&q * &d * q.adjoint()), 1e-10).unwrap();
        prop_assert_eq!(a.dim(), b.dim());
        prop_assert_eq!(a.trivial_multiplicity(), b.trivial_multiplicity());
        prop_assert_eq!(a.angles.len(), b.angles.len());
        for (x, y) in a.angles.iter().zip(&b.angles) {
            prop_assert_eq!(x.mult, y.mult);
            let d = (x.theta - y.theta).abs();
            prop_assert!(d.min(1.0 - d) < 1e-8, "{} vs {}", x.theta, y.theta);
        }
    }

    #[test]
    fn kernel_invariant_under_angle_shift(theta in 0.0..1.0f64, r1 in -1.5..1.5f64, r2 in -1.5..1.5f64, phi in 0.0..6.0f64) {
        // theta and theta - 1 describe the same eigenvalue
        prop_assume!((r1 - r2).abs() > 0.2);
        let s = c(1.7, 0.6);
        let a = TwistSpec::unitary(&[(theta, 1)]).unwrap();
        let b = TwistSpec { angles: vec![TwistAngle { theta: theta - 1.0, mult: 1, log_abs: 0.0 }] };
        let (c1, c2) = (CylCoord::new(r1, phi), CylCoord::new(r2, 0.3));
        let ka = cyl_kernel_fourier(s, 1.3, &a, &c1, &c2, 4000).unwrap();
        let kb = cyl_kernel_fourier(s, 1.3, &b, &c1, &c2, 4000).unwrap();
        prop_assert!(ka.max_rel_diff(&kb) < 1e-9);
    }

    #[test]
    fn fourier_matches_images_near_diagonal(r1 in -1.0..1.0f64, dr in 0.04..0.2f64, phi in 0.0..6.0f64) {
        // small radial gaps need frequencies far beyond the double range of the raw mode series
        let s = c(2.0, 0.3);
        let twist = TwistSpec::unitary(&[(0.25, 1), (0.5, 1)]).unwrap();
        let (c1, c2) = (CylCoord::new(r1, phi), CylCoord::new(r1 + dr, 0.5));
        let (z, w) = (cyl_to_plane(&c1, 1.0), cyl_to_plane(&c2, 1.0));
        prop_assume!(sigma(&z, &w) > 1.01);
        let a = resonance_lab::model_kernels::cyl_kernel_images(s, 1.0, &twist, &z, &w, &Default::default()).unwrap();
        let b = cyl_kernel_fourier(s, 1.0, &twist, &c1, &c2, 20_000).unwrap();
        prop_assert!(a.max_rel_diff(&b) < 1e-8, "{:?} {:?}", a, b);
    }

    #[test]
    fn mode_even_in_kappa(kappa in -4.0..4.0f64, r in -2.0..2.0f64, r2 in -2.0..2.0f64, re in 0.2..3.0f64, im in -2.0..2.0f64) {
        let s = c(re, im);
        let a = cyl_mode(s, kappa, r, r2, 1.1).unwrap();
        prop_assert_eq!(a, cyl_mode(s, -kappa, r, r2, 1.1).unwrap());
        prop_assert_eq!(a, cyl_mode(s, kappa, r2, r, 1.1).unwrap());
    }

    #[test]
    fn scattering_inversion(re in -3.0..3.0f64, im in -3.0..3.0f64, kappa in -3.0..3.0f64, ell in 0.4..3.0f64) {
        let s = c(re, im);
        if let (Ok(a), Ok(b)) = (scattering_coeff(s, kappa, ell), scattering_coeff(c(1.0, 0.0) - s, kappa, ell)) {
            prop_assert!((a * b - 1.0).norm() < 1e-10);
        }
    }

    #[test]
    fn bessel_k_even_bitwise(re in -3.0..3.0f64, im in -5.0..5.0f64, x in 0.05..50.0f64) {
        let nu = c(re, im);
        prop_assert_eq!(bessel_k(nu, x).unwrap(), bessel_k(-nu, x).unwrap());
    }

    #[test]
    fn counting_monotone(twist in unitary_twist(), ell in 0.5..5.0f64, a in 0.0..10.0f64, b in 0.0..10.0f64) {
        let set = cylinder_resonances(ell, &twist, 10.0).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(set.count(lo).unwrap() <= set.count(hi).unwrap());
        prop_assert_eq!(set.count(10.0).unwrap(), set.total());
    }

    #[test]
    fn cylinder_matches_brute_force(twist in unitary_twist(), ell in 0.5..5.0f64, radius in 1.0..9.0f64) {
        let set = cylinder_resonances(ell, &twist, radius).unwrap();
        prop_assert_eq!(keyed(&set), brute_lattice(ell, &twist, radius, 0, 1));
    }

    #[test]
    fn funnel_matches_brute_force(twist in unitary_twist(), ell in 0.5..5.0f64, radius in 1.0..9.0f64) {
        let set = funnel_resonances(ell, &twist, radius).unwrap();
        prop_assert_eq!(keyed(&set), brute_lattice(ell, &twist, radius, 1, 2));
    }

    #[test]
    fn non_unitary_matches_brute_force(theta in 0.0..1.0f64, rho in -1.0..1.0f64, ell in 0.5..5.0f64) {
        let twist = TwistSpec { angles: vec![TwistAngle { theta, mult: 2, log_abs: rho }] };
        let set = cylinder_resonances(ell, &twist, 6.0).unwrap();
        prop_assert_eq!(keyed(&set), brute_lattice(ell, &twist, 6.0, 0, 1));
    }

    #[test]
    fn branch_independent(twist in unitary_twist(), ell in 0.5..5.0f64) {
        let a = cylinder_resonances_with_branch(ell, &twist, 7.0, AngleBranch::Unit).unwrap();
        let b = cylinder_resonances_with_branch(ell, &twist, 7.0, AngleBranch::Centered).unwrap();
        prop_assert_eq!(keyed(&a), keyed(&b));
        let a = funnel_resonances_with_branch(ell, &twist, 7.0, AngleBranch::Unit).unwrap();
        let b = funnel_resonances_with_branch(ell, &twist, 7.0, AngleBranch::Centered).unwrap();
        prop_assert_eq!(keyed(&a), keyed(&b));
    }

    #[test]
    fn conjugation_closed(twist in unitary_twist(), ell in 0.5..5.0f64) {
        let set = cylinder_resonances(ell, &twist, 7.0).unwrap();
        let k = keyed(&set);
        for (&(re, im), &m) in &k {
            prop_assert_eq!(k.get(&(re, -im)), Some(&m));
        }
    }

    #[test]
    fn spec_json_round_trip(twist in unitary_twist(), ell in 0.1..10.0f64, rho in -1.0..1.0f64) {
        let mut funnel_twist = twist.clone();
        funnel_twist.angles[0].log_abs = rho;
        let spec: SurfaceSpec = serde_json::from_value(serde_json::json!({
            "funnels": [{ "ell": ell, "twist": funnel_twist }],
            "cusps": [{ "twist": twist }],
        })).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        prop_assert_eq!(SurfaceSpec::from_json(&text).unwrap(), spec);
    }
}

#[test]
fn resonance_set_orders_deterministically() {
    let pts = vec![
        Resonance {
            re: -1.0,
            im: 2.0,
            mult: 1,
        },
        Resonance {
            re: -2.0,
            im: -1.0,
            mult: 2,
        },
        Resonance {
            re: -1.0,
            im: -2.0,
            mult: 1,
        },
    ];
    let mut rev = pts.clone();
    rev.reverse();
    assert_eq!(ResonanceSet::new(5.0, pts), ResonanceSet::new(5.0, rev));
}
