//! End-to-end acceptance run: one line per criterion, all must pass.

use flcrys::acceptance;

#[test]
fn acceptance_suite() {
    let results = acceptance::run_all();
    assert_eq!(results.len(), 8);
    let mut failed = 0;
    for r in &results {
        println!("{}", r.line());
        if !r.pass {
            failed += 1;
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
