use kramers_core::neumann::build_series;
use kramers_core::quadrature::integrate_gaussian_weighted;
use kramers_core::transport::{continuum_velocity, distribution_continuum};
use kramers_core::{GasParameters, QuadratureSpec};

const SQRT_PI: f64 = 1.772_453_850_905_516;

#[test]
fn velocity_is_first_moment_of_distribution() {
    let spec = QuadratureSpec::default();
    for (gamma, q) in [(0.0, 1.0), (0.25, 0.7)] {
        let series = build_series(gamma, 2, &spec).unwrap();
        let p = GasParameters::new(gamma, q, 1.0).unwrap();
        for x in [0.0, 1.0, 5.0] {
            let hc = |mu: f64| distribution_continuum(&p, &series, x, mu, &spec).unwrap();
            let moment = integrate_gaussian_weighted(|t| hc(t) + hc(-t), &spec).unwrap() / SQRT_PI;
            let uc = continuum_velocity(&p, &series, x, &spec).unwrap();
            println!("gamma={gamma} q={q} x={x}: moment={moment:.10} U_c={uc:.10}");
            assert!(
                (moment - uc).abs() < 1e-6,
                "gamma={gamma} q={q} x={x}: {moment} vs {uc}"
            );
        }
    }
}
