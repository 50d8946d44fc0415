use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use starbody::bodies::{
    apply_linear, centroid_body, intersection_body, isotropic_position, legendre_matrix, BodySpec,
    HarmonicTerm, LinearMap, StarBody,
};
use starbody::experiments::{theorem1_operator_spectrum, theorem2_operator_spectrum};
use starbody::numerics::norm;
use starbody::sphere::{decompose, BandLimited, SphereFunction, SphereGrid};
use starbody::transforms::{
    eigenvalue_p_cosine, p_cosine_transform, radon_inverse, radon_transform,
};

fn grid() -> Arc<SphereGrid> {
    static GRID: OnceLock<Arc<SphereGrid>> = OnceLock::new();
    GRID.get_or_init(|| Arc::new(SphereGrid::build(3, 10).unwrap()))
        .clone()
}

fn axis() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, 3).prop_filter("nonzero", |v| norm(v) > 0.1)
}

/// Sums of zonal terms of degree ≤ 6 about random axes.
fn terms(max_amplitude: f64) -> impl Strategy<Value = Vec<HarmonicTerm>> {
    prop::collection::vec(
        (0usize..=6, axis(), -max_amplitude..max_amplitude).prop_map(
            |(degree, axis, amplitude)| HarmonicTerm {
                degree,
                axis,
                amplitude,
            },
        ),
        1..4,
    )
}

fn function(ts: &[HarmonicTerm]) -> SphereFunction {
    let spec = BodySpec::Harmonic {
        coeffs: ts.to_vec(),
    };
    SphereFunction::from_fn(grid(), |x| spec.radial_at(x) - 1.0)
}

/// Even-degree bodies stay origin-symmetric.
fn symmetric_body(ts: &[HarmonicTerm]) -> StarBody {
    let coeffs = ts
        .iter()
        .map(|t| HarmonicTerm {
            degree: t.degree & !1,
            ..t.clone()
        })
        .collect();
    StarBody::from_spec(grid(), &BodySpec::Harmonic { coeffs }).unwrap()
}

fn map() -> impl Strategy<Value = LinearMap> {
    prop::collection::vec(-0.15..0.15f64, 9).prop_map(|e| {
        let m: Vec<f64> = e
            .iter()
            .enumerate()
            .map(|(i, v)| if i % 4 == 0 { 1.0 + v } else { *v })
            .collect();
        LinearMap::new(3, m).unwrap()
    })
}

fn close(a: &SphereFunction, b: &SphereFunction, tol: f64) -> bool {
    let scale = a.sup_norm().max(b.sup_norm()).max(1.0);
    a.sub(b).unwrap().sup_norm() <= tol * scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn p_cosine_transform_is_linear(f in terms(1.0), g in terms(1.0), a in -2.0..2.0f64, p in 1.0..4.0f64) {
        let (f, g) = (function(&f), function(&g));
        let lhs = p_cosine_transform(&f.scale(a).add(&g).unwrap(), p).unwrap();
        let rhs = p_cosine_transform(&f, p).unwrap().scale(a).add(&p_cosine_transform(&g, p).unwrap()).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn transforms_preserve_positivity(ts in terms(0.3), p in 1.0..5.0f64) {
        // 1 + Σ ≥ 1 − 3·0.3 > 0
        let f = function(&ts).map(|v| 1.0 + v);
        prop_assert!(f.min() > 0.0);
        prop_assert!(p_cosine_transform(&f, p).unwrap().min() > 0.0);
        prop_assert!(radon_transform(&f).unwrap().min() > 0.0);
    }

    #[test]
    fn cosine_triangle_inequality(ts in terms(1.0), p in 1.0..3.0f64) {
        let f = function(&ts);
        let cf = p_cosine_transform(&f, p).unwrap();
        let c_abs = p_cosine_transform(&f.map(f64::abs), p).unwrap();
        // |f| is not band-limited; allow the quadrature error of the kink
        let slack = 1e-3 * c_abs.sup_norm();
        for (a, b) in cf.values().iter().zip(c_abs.values()) {
            prop_assert!(a.abs() <= b + slack);
        }
    }

    #[test]
    fn harmonic_decomposition_round_trips(ts in terms(1.0)) {
        let f = function(&ts);
        let s = decompose(&f, grid().max_band()).unwrap();
        prop_assert!(close(&s.reconstruct(), &f, 1e-12));
        let sum: f64 = s.energies().iter().map(|e| e * e).sum();
        prop_assert!((sum.sqrt() - s.total()).abs() <= 1e-10 * s.total().max(1.0));
    }

    #[test]
    fn radon_inverse_round_trips_even_functions(ts in terms(1.0)) {
        let even: Vec<HarmonicTerm> = ts.iter().map(|t| HarmonicTerm { degree: t.degree & !1, ..t.clone() }).collect();
        let f = function(&even);
        let (back, _) = radon_inverse(&radon_transform(&f).unwrap(), 6).unwrap();
        prop_assert!(close(&back, &f, 1e-9));
    }

    #[test]
    fn centroid_body_is_homogeneous(ts in terms(0.1), r in 0.5..2.0f64, p in 1.0..3.0f64) {
        let k = symmetric_body(&ts);
        let h = centroid_body(&k, p).unwrap();
        let h_r = centroid_body(&k.scaled(r).unwrap(), p).unwrap();
        prop_assert!(close(&h_r, &h.scale(r), 1e-11));
    }

    #[test]
    fn intersection_body_scales_with_degree_n_minus_one(ts in terms(0.1), r in 0.5..2.0f64) {
        let k = symmetric_body(&ts);
        let i = intersection_body(&k).unwrap();
        let i_r = intersection_body(&k.scaled(r).unwrap()).unwrap();
        prop_assert!(close(i_r.radial(), &i.radial().scale(r * r), 1e-11));
    }

    #[test]
    fn isotropic_position_is_idempotent(ts in terms(0.08), t in map()) {
        let k = apply_linear(&symmetric_body(&ts), &t).unwrap();
        let (iso, _) = isotropic_position(&k).unwrap();
        let (again, s) = isotropic_position(&iso).unwrap();
        let l = legendre_matrix(&iso).unwrap();
        let tr = l.get(0, 0) + l.get(1, 1) + l.get(2, 2);
        prop_assert!(l.get(0, 1).abs().max(l.get(0, 2).abs()).max(l.get(1, 2).abs()) <= 1e-9 * tr);
        prop_assert!((s.det_abs() - 1.0).abs() <= 1e-9);
        prop_assert!(close(again.radial(), iso.radial(), 1e-6));
    }

    #[test]
    fn centroid_commutes_with_linear_maps(ts in terms(0.05), t in map()) {
        // h_{Γ_p TK}(φ) = h_{Γ_p K}(Tᵀφ)
        let k = symmetric_body(&ts);
        let h = centroid_body(&k, 1.0).unwrap();
        let h_t = centroid_body(&apply_linear(&k, &t).unwrap(), 1.0).unwrap();
        let interp = BandLimited::full_band(&h);
        for (x, v) in grid().points().zip(h_t.values()) {
            let u = t.apply_transpose(x);
            let len = norm(&u);
            let u: Vec<f64> = u.iter().map(|c| c / len).collect();
            prop_assert!((len * interp.value(&u) - v).abs() <= 1e-3 * h.mean());
        }
    }

    #[test]
    fn p_cosine_eigenvalues_telescope(n in 3usize..=7, p in 1.0..8.0f64) {
        for k in 0..=6 {
            let a = eigenvalue_p_cosine(n, 2 * k, p).unwrap().abs();
            let b = eigenvalue_p_cosine(n, 2 * k + 2, p).unwrap().abs();
            let lhs = b * (2.0 * k as f64 + n as f64 + p);
            let rhs = a * (2.0 * k as f64 - p).abs();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * a.max(1e-300));
        }
    }

    #[test]
    fn theorem2_at_p_one_is_theorem1(n in 3usize..=8) {
        let (a, _) = theorem1_operator_spectrum(n, 12).unwrap();
        let (b, _) = theorem2_operator_spectrum(n, 1.0, 12).unwrap();
        for k in 0..=12 {
            prop_assert!((a.multiplier(k) - b.multiplier(k)).abs() <= 1e-13);
        }
    }
}
