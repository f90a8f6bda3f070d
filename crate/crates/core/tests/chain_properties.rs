use proptest::prelude::*;
use ssd_core::{
    absorption_survival, build_dual, build_link, check_mobius_monotone, evolve, grid_poset,
    stationary, validate, verify_intertwining, verify_sharpness, ChainSpec, Direction, Matrix,
};

/// Birth-death kernel on `0..len` with `up[i] + down[i + 1] <= 1`, which
/// makes it stochastically monotone.
fn birth_death(up: &[f64], down: &[f64]) -> Vec<Vec<f64>> {
    let len = up.len() + 1;
    let mut p = vec![vec![0.0; len]; len];
    for i in 0..len {
        if i + 1 < len {
            p[i][i + 1] = up[i];
        }
        if i > 0 {
            p[i][i - 1] = down[i - 1];
        }
        p[i][i] = 1.0 - p[i].iter().sum::<f64>();
    }
    p
}

/// Lazy product of two monotone birth-death chains on a rectangle.
fn product_chain() -> impl Strategy<Value = ChainSpec> {
    (2usize..5, 2usize..5)
        .prop_flat_map(|(a, b)| {
            (
                prop::collection::vec((0.05f64..0.45, 0.05f64..0.45), a - 1),
                prop::collection::vec((0.05f64..0.45, 0.05f64..0.45), b - 1),
            )
        })
        .prop_map(|(xs, ys)| {
            let (ux, dx): (Vec<f64>, Vec<f64>) = xs.into_iter().unzip();
            let (uy, dy): (Vec<f64>, Vec<f64>) = ys.into_iter().unzip();
            let px = birth_death(&ux, &dx);
            let py = birth_death(&uy, &dy);
            let (a, b) = (px.len(), py.len());
            let m = a * b;
            let mut p = Matrix::zeros(m, m);
            for s in 0..m {
                let (x, y) = (s % a, s / a);
                for x2 in 0..a {
                    p[(s, x2 + a * y)] += 0.5 * px[x][x2];
                }
                for y2 in 0..b {
                    p[(s, x + a * y2)] += 0.5 * py[y][y2];
                }
            }
            let mut nu = vec![0.0; m];
            nu[0] = 1.0;
            ChainSpec::new(grid_poset(&[a, b]).unwrap(), p, nu, None)
                .unwrap()
                .with_stationary()
                .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn evolution_is_a_semigroup(c in product_chain(), n in 0usize..20, k in 0usize..20) {
        let direct = evolve(&c, n + k).unwrap();
        let mid = c.clone().with_initial(evolve(&c, n).unwrap()).unwrap();
        let split = evolve(&mid, k).unwrap();
        for (a, b) in direct.iter().zip(&split) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn stationary_law_is_fixed(c in product_chain()) {
        let pi = stationary(&c).unwrap();
        let moved = c.p.left_mul(&pi).unwrap();
        for (a, b) in pi.iter().zip(&moved) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        prop_assert!(validate(&c).is_ergodic());
    }

    #[test]
    fn monotone_products_have_sharp_duals(c in product_chain()) {
        let report = check_mobius_monotone(&c.p, &c.poset, Direction::Down, 1e-9).unwrap();
        prop_assert!(report.passed, "min entry {}", report.min_entry);
        let d = build_dual(&c).unwrap();
        let link = build_link(&c.poset, c.pi().unwrap()).unwrap();
        let r = verify_intertwining(&c, &d, &link).unwrap();
        prop_assert!(r.kernel <= 1e-10 && r.initial <= 1e-12, "{:?}", r);
        prop_assert!(verify_sharpness(&c, &d, 40).unwrap() <= 1e-10);
    }

    #[test]
    fn dual_survival_is_non_increasing(c in product_chain()) {
        let d = build_dual(&c).unwrap();
        let law = absorption_survival(&d, 60).unwrap();
        for w in law.survival.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
        prop_assert!(law.mean.is_finite() && law.variance >= -1e-9);
    }

}
