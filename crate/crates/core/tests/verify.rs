mod common;

use common::random_trees;
use latcoh::verify::{verify, VerifyOptions};
use latcoh::LatticeContext;

#[test]
fn battery_on_a2() {
    let ctx = common::context("a2");
    let r = verify(&ctx, &ctx.classes(), &[vec![1, 1], vec![1, 0]], &VerifyOptions::default()).unwrap();
    assert!(r.passed(), "{:#?}", r.failures());
}

#[test]
fn battery_on_random_trees() {
    let t = std::time::Instant::now();
    for g in random_trees(7, 10) {
        let ctx = LatticeContext::new(&g);
        let n = ctx.rank();
        let classes: Vec<_> = ctx.classes().into_iter().take(2).collect();
        let mut e0 = vec![0; n];
        e0[0] = 1;
        let r = verify(&ctx, &classes, &[e0, vec![1; n]], &VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{}\n{:#?}", g.to_text(), r.failures());
        eprintln!("{} ok {:?}", g.to_text().replace('\n', "; "), t.elapsed());
    }
}
