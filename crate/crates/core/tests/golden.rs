//! Rendered arrays compared byte-for-byte with tables transcribed from the
//! worked examples.

use macc::combinatorics::{catalog_design, catalog_oa, transversal_gdd};
use macc::scheme::{CachingScheme, GddCachingScheme};

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn fano_arrays() {
    let s = CachingScheme::build(&catalog_design("fano-7-3-1").unwrap(), 1).unwrap();
    assert_eq!(s.render_placement().render(), golden("fano_C.txt"));
    assert_eq!(s.render_retrieve().render(), golden("fano_U.txt"));
    assert_eq!(s.render_delivery().render(), golden("fano_Q.txt"));
}

#[test]
fn biplane_arrays() {
    let s = CachingScheme::build(&catalog_design("biplane-7-4-2").unwrap(), 1).unwrap();
    assert_eq!(s.render_retrieve().render(), golden("biplane_U.txt"));
    assert_eq!(s.render_delivery().render(), golden("biplane_Q.txt"));
}

#[test]
fn gdd_arrays() {
    let gdd = transversal_gdd(3, 2, 2).unwrap();
    let s = GddCachingScheme::build(&gdd, &catalog_oa("example-3-2-2").unwrap(), 2).unwrap();
    assert_eq!(s.render_placement().render(), golden("gdd_C.txt"));
    assert_eq!(s.render_retrieve().render(), golden("gdd_U.txt"));
    assert_eq!(s.render_delivery().render(), golden("gdd_Q.txt"));
}
