use chtumor_core::discretization::{inner_h, integral, laplacian, norm_h, norm_vstar, riesz_inverse, Field, Grid};
use chtumor_core::potentials::{PotentialSpec, Proliferation};
use proptest::prelude::*;

fn families() -> Vec<PotentialSpec> {
    vec![
        PotentialSpec::double_well(),
        PotentialSpec::logarithmic(2.0).unwrap(),
        PotentialSpec::regularized_indicator(1e-2).unwrap(),
        PotentialSpec::linear_obstacle(2.0, 1e-2).unwrap(),
    ]
}

/// Arguments where every family is evaluable: the open interval for the logarithmic one.
fn argument(spec: &PotentialSpec) -> std::ops::Range<f64> {
    if spec.has_full_domain() || spec.regularization().is_some() {
        -3.0..3.0
    } else {
        -0.999..0.999
    }
}

fn field_strategy(grid: Grid) -> impl Strategy<Value = Field> {
    prop::collection::vec(-1.0f64..1.0, grid.cells()).prop_map(move |v| Field::from_values(grid, v).unwrap())
}

fn grids() -> impl Strategy<Value = Grid> {
    prop_oneof![Just(Grid::line(17).unwrap()), Just(Grid::square(7).unwrap())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2500))]

    #[test]
    fn subdifferential_is_monotone(which in 0usize..4, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let spec = families()[which];
        let range = argument(&spec);
        let r = range.start + a * (range.end - range.start);
        let s = range.start + b * (range.end - range.start);
        let (br, bs) = (spec.convex_derivative(r).unwrap(), spec.convex_derivative(s).unwrap());
        prop_assert!((br - bs) * (r - s) >= -1e-12);
    }
}

proptest! {
    #[test]
    fn subdifferential_matches_finite_differences(which in 0usize..4, a in 0.0f64..1.0) {
        let spec = families()[which];
        let range = argument(&spec);
        let r = range.start + a * (range.end - range.start);
        // kinks at |r| = 1 are not smooth points
        prop_assume!((r.abs() - 1.0).abs() > 1e-3);
        let h = 1e-6;
        let fd = (spec.convex_energy(r + h).unwrap() - spec.convex_energy(r - h).unwrap()) / (2.0 * h);
        let exact = spec.convex_derivative(r).unwrap();
        prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0), "r={r} fd={fd} exact={exact}");
    }

    #[test]
    fn smooth_force_matches_finite_differences(which in 0usize..4, a in 0.0f64..1.0) {
        let spec = families()[which];
        let range = argument(&spec);
        let r = range.start + a * (range.end - range.start);
        prop_assume!((r.abs() - 1.0).abs() > 1e-3);
        let h = 1e-6;
        let fd = (spec.smooth_energy(r + h) - spec.smooth_energy(r - h)) / (2.0 * h);
        let exact = spec.smooth_force(r);
        prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0));
    }

    #[test]
    fn total_potential_is_nonnegative(which in 0usize..4, a in 0.0f64..1.0) {
        let spec = families()[which];
        let range = argument(&spec);
        let r = range.start + a * (range.end - range.start);
        prop_assert!(spec.energy(r).unwrap() >= 0.0);
    }

    #[test]
    fn smooth_force_respects_its_lipschitz_bound(which in 0usize..4, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let spec = families()[which];
        let bound = spec.lipschitz();
        prop_assert!((spec.smooth_force(a) - spec.smooth_force(b)).abs() <= bound * (a - b).abs() + 1e-12);
    }

    #[test]
    fn proliferation_stays_within_bounds(center in -0.5f64..0.5, width in 0.1f64..1.0, height in 0.0f64..3.0,
                                         a in -3.0f64..3.0, b in -3.0f64..3.0) {
        for p in [
            Proliferation::Constant(height),
            Proliferation::ClippedSqrtF { scale: height },
            Proliferation::SmoothBump { center, width, height },
        ] {
            let (ra, rb) = (p.rate(a), p.rate(b));
            prop_assert!(ra >= 0.0 && ra <= p.bound() + 1e-15);
            prop_assert!((ra - rb).abs() <= p.lipschitz() * (a - b).abs() + 1e-12);
        }
    }

    #[test]
    fn laplacian_has_zero_integral(f in grids().prop_flat_map(field_strategy)) {
        let total = integral(&laplacian(&f));
        prop_assert!(total.abs() <= 1e-12 * norm_h(&f));
    }

    #[test]
    fn laplacian_is_symmetric((f, g) in grids().prop_flat_map(|g| (field_strategy(g), field_strategy(g)))) {
        let lhs = inner_h(&laplacian(&f), &g).unwrap();
        let rhs = inner_h(&f, &laplacian(&g)).unwrap();
        // relative: both sides scale like h^-2
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn riesz_inverse_is_symmetric((f, g) in grids().prop_flat_map(|g| (field_strategy(g), field_strategy(g)))) {
        let lhs = inner_h(&f, &riesz_inverse(&g).unwrap()).unwrap();
        let rhs = inner_h(&g, &riesz_inverse(&f).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10);
    }

    #[test]
    fn dual_norm_is_dominated_by_the_pivot_norm(f in grids().prop_flat_map(field_strategy)) {
        prop_assert!(norm_vstar(&f).unwrap() <= norm_h(&f) * (1.0 + 1e-12));
    }
}

#[test]
fn divergence_theorem_on_cosine_fields() {
    let grid = Grid::line(64).unwrap();
    for k in 1..=10 {
        let f = Field::from_fn(grid, |x| (k as f64 * 1.3 * x[0]).cos() + 0.1 * k as f64);
        assert!(integral(&laplacian(&f)).abs() <= 1e-12 * norm_h(&f), "k = {k}");
    }
}
