//! Catalog reports against the files in tests/golden. Set UPDATE_GOLDEN=1 to
//! rewrite them.

mod common;

use common::*;

#[test]
fn catalog_reports_match_golden() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for name in CATALOG {
        let (code, report) = catalog_report(name);
        assert_eq!(code, 0, "{name}");
        let path = golden_path(name);
        if update {
            std::fs::write(&path, serde_json::to_string_pretty(&report).unwrap() + "\n").unwrap();
            continue;
        }
        let text =
            std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        let golden: serde_json::Value = serde_json::from_str(&text).unwrap();
        if let Err(diff) = json_close(&report, &golden, name) {
            panic!("{name} differs from golden: {diff}");
        }
    }
}

#[test]
fn reruns_are_identical() {
    let (_, a) = catalog_report("bdg");
    let (_, b) = catalog_report("bdg");
    assert_eq!(a, b);
}
