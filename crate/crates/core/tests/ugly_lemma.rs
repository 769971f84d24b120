mod support {
    pub mod ugly;
}

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use support::ugly::{draw, run};

#[test]
fn constructed_instances_satisfy_the_quadratic_relation() {
    let precision = 12;
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut nontrivial = 0;
    for i in 0..40 {
        let params = draw(|lo, hi| rng.gen_range(lo..=hi));
        let out = run(&params, precision);
        assert!(out.hypotheses_hold, "instance {i}: hypotheses fail");
        assert!(out.conclusion_holds, "instance {i}: f(t) != f(t')");
        assert!(out.digits >= precision as i64 - 4, "instance {i}: only {} digits", out.digits);
        assert!(out.control_differs, "instance {i}: perturbed direction satisfies the relation");
        nontrivial += out.nontrivial as usize;
    }
    assert!(nontrivial >= 20, "too few reflected instances: {nontrivial}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn reflected_direction(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut params = draw(|lo, hi| rng.gen_range(lo..=hi));
        params.power = None;
        let out = run(&params, 10);
        prop_assert!(out.hypotheses_hold && out.conclusion_holds);
    }
}
