use ssd_core::models::{
    cube_corner_states, ising_circle, ising_circle_dual, kary_cube, kary_cube_dual, lattice_walk,
    lattice_walk_dual, CubeSpec, LatticeSpec,
};
use ssd_core::{
    absorption_survival, build_dual, build_link, geometric_sum_law, pure_birth_projection,
    spectrum_from_triangular, stationary, verify_intertwining, verify_sharpness, DualChain,
};

fn max_entry_diff(a: &DualChain, b: &DualChain, rows: &[usize]) -> f64 {
    rows.iter()
        .flat_map(|&i| a.p_star.row(i).iter().zip(b.p_star.row(i)))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn ising_generic_dual_matches_closed_form_at_zero_beta() {
    for n in 3..=6 {
        let model = ising_circle(n, 0.0).unwrap();
        let generic = build_dual(&model.chain).unwrap();
        let closed = ising_circle_dual(n, 0.0).unwrap();
        let rows: Vec<usize> = (0..generic.len()).collect();
        let diff = max_entry_diff(&generic, &closed, &rows);
        assert!(diff <= 1e-10, "N = {n}: {diff}");
    }
}

#[test]
fn ising_dual_at_positive_beta_moves_sideways() {
    // "+--" -> "-+-": T(j, i) = (1/3)(e^{4b}/(1 + e^{4b}) - 1/2) at N = 3
    let beta: f64 = 0.5;
    let model = ising_circle(3, beta).unwrap();
    let generic = build_dual(&model.chain).unwrap();
    let pi = model.chain.pi().unwrap();
    let (h1, h2) = (pi[0] + pi[1], pi[0] + pi[2]);
    let t = ((4.0 * beta).exp() / (1.0 + (4.0 * beta).exp()) - 0.5) / 3.0;
    assert!((generic.p_star[(1, 2)] - h2 / h1 * t).abs() < 1e-12);
    assert!(spectrum_from_triangular(&generic).is_err());

    // the pure-birth closed form loses mass away from the all-minus state
    let closed = ising_circle_dual(3, beta).unwrap();
    assert!(closed.p_star.row_sums()[1] < 0.9);

    let law = absorption_survival(&generic, 60).unwrap();
    assert!(law.mean > 3.0 * (1.0 + 0.5 + 1.0 / 3.0) + 1.0);
}

#[test]
fn ising_stationary_law_solves_balance() {
    let model = ising_circle(5, 0.8).unwrap();
    let solved = stationary(&model.chain).unwrap();
    let given = model.chain.pi.as_ref().unwrap();
    for (a, b) in solved.iter().zip(given) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn ising_dual_lumps_to_coupon_collector() {
    let n = 5;
    let d = ising_circle_dual(n, 0.0).unwrap();
    let birth = pure_birth_projection(&d, |s| s.count_ones() as usize).unwrap();
    for (k, &p) in birth.success_probabilities().iter().enumerate() {
        assert!((p - (1.0 - k as f64 / n as f64)).abs() < 1e-12);
    }
    let exact = absorption_survival(&d, 80).unwrap();
    let p: Vec<f64> = (0..n).map(|k| 1.0 - k as f64 / n as f64).collect();
    let geo = geometric_sum_law(&p, 80).unwrap();
    for (a, b) in exact.survival.iter().zip(&geo.survival) {
        assert!((a - b).abs() < 1e-12);
    }
    // sum_k N/(N-k)
    let harmonic: f64 = (1..=n).map(|i| n as f64 / i as f64).sum();
    assert!((exact.mean - harmonic).abs() < 1e-10);
}

#[test]
fn lattice_generic_dual_matches_closed_form() {
    for n in 1..=3 {
        for (l1, l2, m1, m2) in [(0.2, 0.15, 0.25, 0.3), (0.3, 0.2, 0.1, 0.15)] {
            let spec = LatticeSpec::new(n, l1, l2, m1, m2).unwrap();
            let model = lattice_walk(&spec).unwrap();
            let generic = build_dual(&model.chain).unwrap();
            let closed = lattice_walk_dual(&spec).unwrap();
            let rows: Vec<usize> = (0..generic.len()).collect();
            let diff = max_entry_diff(&generic, &closed, &rows);
            assert!(diff <= 1e-10, "N = {n}: {diff}");
        }
    }
}

#[test]
fn lattice_stationary_law_solves_balance() {
    let spec = LatticeSpec::new(3, 0.3, 0.2, 0.1, 0.15).unwrap();
    let model = lattice_walk(&spec).unwrap();
    let solved = stationary(&model.chain).unwrap();
    for (a, b) in solved.iter().zip(model.chain.pi.as_ref().unwrap()) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn cube_generic_dual_matches_closed_form_on_corners() {
    for n in 1..=3 {
        for k in 1..=3 {
            let spec = CubeSpec::new(n, k).unwrap();
            let model = kary_cube(&spec).unwrap();
            let generic = build_dual(&model.chain).unwrap();
            let closed = kary_cube_dual(&spec).unwrap();
            let corners: Vec<usize> = cube_corner_states(&spec).into_iter().map(|c| c.1).collect();
            let diff = max_entry_diff(&generic, &closed, &corners);
            assert!(diff <= 1e-10, "n = {n}, k = {k}: {diff}");
            assert_eq!(closed.reachable_states(), corners);
        }
    }
}

#[test]
fn cube_absorption_moments() {
    let (n, k) = (3usize, 2usize);
    let spec = CubeSpec::new(n, k).unwrap();
    let d = kary_cube_dual(&spec).unwrap();
    let law = absorption_survival(&d, 100).unwrap();
    let step = (k + 1) as f64 / (2 * n * k) as f64;
    let p: Vec<f64> = (1..=n).map(|i| i as f64 * step).collect();
    let mean: f64 = p.iter().map(|x| 1.0 / x).sum();
    let var: f64 = p.iter().map(|x| (1.0 - x) / (x * x)).sum();
    assert!((law.mean - mean).abs() < 1e-10);
    assert!((law.variance - var).abs() < 1e-8);
    // mean = (2nk/(k+1)) H_n with H_3 = 11/6
    assert!((mean - 4.0 * 11.0 / 6.0).abs() < 1e-12);
}

#[test]
fn cube_reachable_dual_is_triangular_with_known_diagonal() {
    let (n, k) = (3usize, 3usize);
    let spec = CubeSpec::new(n, k).unwrap();
    let d = kary_cube_dual(&spec).unwrap().reachable_part().unwrap();
    let spectrum = spectrum_from_triangular(&d).unwrap();
    let expected: Vec<(f64, usize)> = (0..=n)
        .rev()
        .map(|i| {
            let v = (n * (k - 1) + i * (k + 1)) as f64 / (2 * n * k) as f64;
            let mult = [1, 3, 3, 1][i];
            (v, mult)
        })
        .collect();
    let got: Vec<(f64, usize)> = spectrum
        .eigenvalues
        .iter()
        .map(|e| (e.value, e.multiplicity))
        .collect();
    assert_eq!(got.len(), expected.len());
    for ((a, ma), (b, mb)) in got.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-12);
        assert_eq!(ma, mb);
    }
}

#[test]
fn closed_form_duals_intertwine_and_are_sharp() {
    let cases = [
        (
            ising_circle(4, 0.0).unwrap(),
            ising_circle_dual(4, 0.0).unwrap(),
        ),
        (
            ising_circle(4, 0.5).unwrap(),
            build_dual(&ising_circle(4, 0.5).unwrap().chain).unwrap(),
        ),
        (
            lattice_walk(&LatticeSpec::new(2, 0.2, 0.15, 0.25, 0.3).unwrap()).unwrap(),
            lattice_walk_dual(&LatticeSpec::new(2, 0.2, 0.15, 0.25, 0.3).unwrap()).unwrap(),
        ),
        (
            kary_cube(&CubeSpec::new(2, 3).unwrap()).unwrap(),
            kary_cube_dual(&CubeSpec::new(2, 3).unwrap()).unwrap(),
        ),
    ];
    for (model, dual) in &cases {
        let link = build_link(&model.chain.poset, model.chain.pi().unwrap()).unwrap();
        let r = verify_intertwining(&model.chain, dual, &link).unwrap();
        assert!(r.kernel <= 1e-10, "{}: {:?}", model.name, r);
        assert!(r.initial <= 1e-12, "{}: {:?}", model.name, r);
        assert!(verify_sharpness(&model.chain, dual, 60).unwrap() <= 1e-10);
    }
}
