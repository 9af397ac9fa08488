use neon2rvv_core::harness::run_matrix;
use neon2rvv_core::isa::VlenConfig;
use neon2rvv_core::neon::catalog;

#[test]
fn every_recipe_matches_the_oracle() {
    let cfgs: Vec<VlenConfig> = [32, 64, 128, 256, 1024]
        .into_iter()
        .flat_map(|v| [true, false].map(|z| VlenConfig::new(v, z).unwrap()))
        .collect();
    let report = run_matrix(catalog(), &cfgs, 150, 11).unwrap();
    let bad: Vec<_> = report.cells.iter().filter(|c| c.mismatches > 0).collect();
    for c in bad.iter().take(10) {
        eprintln!("{} vlen={} zvfh={}: {:?}", c.intrinsic, c.vlen, c.zvfh, c.first_counterexample);
    }
    assert!(bad.is_empty(), "{} failing cells", bad.len());
}
