mod common;

use common::w;
use hrforms::oracle::sl2_tilting_fixture;
use hrforms::padic::{verify_padic_hr, verify_tilting, weyl_filtration, weyl_lattice};
use hrforms::RootSystem;

fn dims(p: u64) -> Vec<(i64, usize)> {
    let fx = sl2_tilting_fixture(p).unwrap();
    fx.lattice.module().dims().iter().map(|(mu, &d)| (mu.0[0], d)).collect()
}

#[test]
fn fixture_characters() {
    assert_eq!(dims(3), vec![(-3, 1), (-1, 2), (1, 2), (3, 1)]);
    assert_eq!(dims(5), vec![(-5, 1), (-3, 2), (-1, 2), (1, 2), (3, 2), (5, 1)]);
}

#[test]
fn fixtures_are_tilting() {
    for p in [3, 5] {
        let fx = sl2_tilting_fixture(p).unwrap();
        assert!(verify_padic_hr(&fx.lattice, &fx.form, &[]).unwrap().overall);
        let v = verify_tilting(&fx.lattice, &fx.form).unwrap();
        assert!(v.overall, "p={p}: {:?}", v.first_failure());
        let expect = vec![(w(&[p as i64]), 1), (w(&[p as i64 - 2]), 1)];
        assert_eq!(v.filtration.unwrap().multiplicities(), expect);
        assert_eq!(v.dual_filtration.unwrap().multiplicities(), expect);
    }
}

#[test]
fn fixture_search_is_deterministic() {
    let a = sl2_tilting_fixture(3).unwrap();
    let b = sl2_tilting_fixture(3).unwrap();
    assert_eq!(a.lattice, b.lattice);
    assert_eq!(a.form, b.form);
    assert_eq!(a.scale, b.scale);
}

#[test]
fn sum_of_weyl_modules_filters_into_summands() {
    let a1 = RootSystem::a1();
    let (l3, g3) = weyl_lattice(&a1, &w(&[3]), 5).unwrap();
    let (l1, _) = weyl_lattice(&a1, &w(&[1]), 5).unwrap();
    let sum = l3.module().direct_sum(l1.module()).unwrap();
    let lattice = hrforms::padic::LatticeModule::new(sum, None).unwrap();
    let report = weyl_filtration(&lattice).unwrap();
    assert!(report.passed());
    assert_eq!(report.multiplicities(), vec![(w(&[3]), 1), (w(&[1]), 1)]);
    assert!(verify_tilting(&l3, &g3).unwrap().overall);
}

#[test]
fn minuscule_a2_lattice_is_unimodular() {
    let (l, g) = weyl_lattice(&RootSystem::a2(), &w(&[1, 0]), 5).unwrap();
    assert_eq!(l.module().total_dim(), 3);
    assert!(verify_padic_hr(&l, &g, &[]).unwrap().unimodular.passed());
}
