use topoffset::io::RunConfig;
use topoffset::optimize::{
    CoarsenRule, Distance, OffsetParams, ADJACENCY_CAP, AMIPS_THRESHOLD, ERROR_PROGRESS,
    SIGMA_PROGRESS,
};

#[test]
fn defaults_match_reference_values() {
    let p = OffsetParams::default();
    assert_eq!(p.delta, Distance::Relative(0.04));
    assert_eq!(p.sigma_max, 15.0);
    assert_eq!(p.sigma_min, 2.0);
    assert_eq!(p.lmax, f64::INFINITY);
    assert_eq!(p.lmin, None);
    assert_eq!(p.max_iterations, 10);
    assert_eq!(p.coarsen_rule, CoarsenRule::FlatRegions);
    assert_eq!(SIGMA_PROGRESS, 0.5);
    assert_eq!(ERROR_PROGRESS, 0.005);
    assert_eq!(ADJACENCY_CAP, 1.5);
    assert_eq!(AMIPS_THRESHOLD, 100.0);

    let r = p.resolve(10.0).unwrap();
    assert!((r.delta - 0.4).abs() < 1e-15);
    let lmin = 2.0 * 0.4 * 15f64.to_radians().sin();
    assert!((r.lmin - lmin).abs() < 1e-15, "{}", r.lmin);
}

#[test]
fn empty_config_is_the_default() {
    assert_eq!(
        RunConfig::parse("# nothing\n").unwrap().params,
        OffsetParams::default()
    );
}
