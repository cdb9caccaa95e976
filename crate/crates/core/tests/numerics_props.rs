use proptest::prelude::*;

use powidx::numerics::gauss::tensor_unit_cube;
use powidx::numerics::{integrate, monomial_box_integral, NumericsSpec};
use powidx::rational::{ratio, to_f64};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadrature_is_exact_on_low_degree_monomials(e in prop::collection::vec(0u32..7, 1..4)) {
        let d = *e.iter().max().unwrap() as usize;
        let order = d / 2 + 1;
        let ee = e.clone();
        let f = move |x: &[f64]| x.iter().zip(&ee).map(|(v, &k)| v.powi(k as i32)).product::<f64>();
        let got = tensor_unit_cube(order, e.len(), &f);
        let want = to_f64(&monomial_box_integral(&ratio(1, 1), &e));
        prop_assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn monte_carlo_error_shrinks_like_root_n() {
    let f = |x: &[f64]| (x[0] * 3.0).sin() + x[1] * x[1];
    let a = integrate(&f, 2, &NumericsSpec::monte_carlo(40_000, 3)).unwrap();
    let b = integrate(&f, 2, &NumericsSpec::monte_carlo(160_000, 3)).unwrap();
    let ratio = a.abs_err / b.abs_err;
    assert!((2.0 / 1.5..=2.0 * 1.5).contains(&ratio), "ratio {ratio}");
}
