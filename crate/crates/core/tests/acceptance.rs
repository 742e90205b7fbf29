use ltconj::acceptance::{self, DEFAULT_SEED};

#[test]
fn acceptance_suite() {
    let results = acceptance::run_all(DEFAULT_SEED);
    println!();
    print!("{}", acceptance::format_table(&results));
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
