mod common;

use blowup_chern::blowup::CheckStatus;
use blowup_chern::{BlowupContext, SignConvention};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn both_paths_agree_under_both_conventions() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let (shape, model) = common::random_embedding(&mut rng, 6, 4);
        for conv in [SignConvention::Calibrated, SignConvention::Literal] {
            let ctx = BlowupContext::new(model.clone(), conv).unwrap();
            let closed = ctx.total_chern().unwrap();
            let thom = ctx.total_chern_via_thom().unwrap();
            assert_eq!(closed, thom, "{shape:?} {conv}");
        }
    }
}

#[test]
fn calibrated_reports_pass() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..25 {
        let (shape, model) = common::random_embedding(&mut rng, 5, 4);
        let ctx = BlowupContext::new(model, SignConvention::Calibrated).unwrap();
        let report = ctx.verify_report().unwrap();
        for (name, check) in report.checks() {
            assert_eq!(check.status, CheckStatus::Pass, "{shape:?} {name}: {}", check.detail);
        }
    }
}

#[test]
fn product_is_associative_and_commutative() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10 {
        let (_, model) = common::random_embedding(&mut rng, 4, 3);
        let ctx = BlowupContext::new(model, SignConvention::Calibrated).unwrap();
        let w = ctx.omega();
        let m = ctx.m_ring();
        let pick = |rng: &mut ChaCha8Rng| {
            let y = ctx.f_pullback(&common::random_homogeneous(rng, m, 1, 2)).unwrap();
            let z = ctx.scale(&w, 2);
            ctx.add(&ctx.add(&y, &z), &ctx.one())
        };
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let ab_c = ctx.multiply(&ctx.multiply(&a, &b).unwrap(), &c).unwrap();
        let a_bc = ctx.multiply(&a, &ctx.multiply(&b, &c).unwrap()).unwrap();
        assert_eq!(ab_c, a_bc);
        assert_eq!(ctx.multiply(&a, &b).unwrap(), ctx.multiply(&b, &a).unwrap());
    }
}
