mod common;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;

use common::*;
use wick::{
    check_operator_identity, green_by_partitions, n_particle_green, time_order, vev, vev_t, wick_expand,
    wick_expand_t, BcsModel, BcsPair, ExpandOptions, FockSpace, OperatorSymbol, Oracle, PropagatorMatrix, Statistics,
};

fn distinct_times(product: &[OperatorSymbol], rng: &mut rand_chacha::ChaCha8Rng) -> Vec<OperatorSymbol> {
    let mut times: Vec<f64> = (0..product.len()).map(|k| k as f64 * 0.37 - 1.0).collect();
    use rand::seq::SliceRandom;
    times.shuffle(rng);
    product.iter().zip(times).map(|(s, t)| s.at(t + rng.gen_range(0.0..0.1))).collect()
}

#[test]
fn time_sorting_then_static_theorem() {
    let mut rng = rng(41);
    for _ in 0..100 {
        let model = random_fermi_sea(3, &mut rng);
        let product = distinct_times(&random_product(3, 2 * rng.gen_range(1..=3), false, &mut rng), &mut rng);
        let ordered = time_order(&product, Statistics::Fermi).unwrap();
        let sorted: Vec<_> = ordered.normal_factors.iter().map(|f| f.symbol).collect();
        let route_two = ordered.coefficient * vev(&sorted, &model).unwrap();
        let direct = vev_t(&product, &model).unwrap();
        let full = wick_expand_t(&product, &model, ExpandOptions::evaluated()).unwrap().scalar_part();
        assert!((route_two - direct).norm() < 1e-12);
        assert!((full - direct).norm() < 1e-12);
    }
}

#[test]
fn chronological_products_reduce_to_the_static_expansion() {
    let mut rng = rng(42);
    for _ in 0..50 {
        let model = random_fermi_sea(3, &mut rng);
        let len = rng.gen_range(1..=5);
        let product: Vec<_> = random_product(3, len, false, &mut rng)
            .into_iter()
            .enumerate()
            .map(|(k, s)| s.at(2.0 - k as f64 * 0.5))
            .collect();
        let t = wick_expand_t(&product, &model, ExpandOptions::evaluated()).unwrap();
        let s = wick_expand(&product, &model, ExpandOptions::evaluated()).unwrap();
        assert_eq!(t.len(), s.len());
        for (a, b) in t.iter().zip(&s) {
            assert_eq!(a.contractions, b.contractions);
            assert!((a.coefficient - b.coefficient).norm() < 1e-14);
        }
    }
}

#[test]
fn three_factor_t_expansion_mirrors_the_static_one() {
    let model = wick::AbstractModel::new(Statistics::Fermi, 3);
    let product: Vec<_> = [0.1, 0.9, 0.5]
        .iter()
        .enumerate()
        .map(|(k, &t)| OperatorSymbol::psi(k).at(t))
        .collect();
    let t = wick_expand_t(&product, &model, ExpandOptions::symbolic()).unwrap();
    let stripped: Vec<_> = product.iter().map(|s| s.without_time()).collect();
    let s = wick_expand(&stripped, &model, ExpandOptions::symbolic()).unwrap();
    let shape = |e: &wick::Expansion| {
        e.iter()
            .map(|x| (x.coefficient, x.contractions.clone(), x.positions()))
            .collect::<Vec<_>>()
    };
    assert_eq!(shape(&t), shape(&s));
    assert!(t.time_ordered && !s.time_ordered);
}

/// `ψ_i(t) = Σ_a ⟨i|a⟩ e^{−iω_a t} c_a` with Kronecker matrices.
fn evolved_field(model: &wick::FermiSeaModel, s: &OperatorSymbol) -> Mat {
    let u = model.overlaps();
    let ops = kron_fermions(u.ncols());
    let t = s.time.unwrap();
    let mut psi = Mat::zeros(ops[0].nrows(), ops[0].ncols());
    for (a, op) in ops.iter().enumerate() {
        psi += op * (u[(s.mode, a)] * Complex64::from_polar(1.0, -model.frequencies()[a] * t));
    }
    if s.base == wick::Base::FieldCreate {
        psi.adjoint()
    } else {
        psi
    }
}

#[test]
fn time_ordered_vev_against_explicit_evolution() {
    let mut rng = rng(43);
    for _ in 0..60 {
        let m = rng.gen_range(2..=4);
        let model = random_fermi_sea(m, &mut rng);
        let product = distinct_times(&random_product(m, 2 * rng.gen_range(1..=2), false, &mut rng), &mut rng);
        let mut order: Vec<usize> = (0..product.len()).collect();
        order.sort_by(|&a, &b| product[b].time.unwrap().total_cmp(&product[a].time.unwrap()));
        let index: usize = (0..model.n_filled()).map(|a| 1 << (m - 1 - a)).sum();
        let mut state = DVector::from_element(1 << m, c(0.0, 0.0));
        state[index] = c(1.0, 0.0);
        let mut v = state.clone();
        for &k in order.iter().rev() {
            v = evolved_field(&model, &product[k]) * v;
        }
        let direct = state.dotc(&v) * inversion_parity(&order) as f64;
        assert!((vev_t(&product, &model).unwrap() - direct).norm() < 1e-12);
    }
}

#[test]
fn time_ordered_operator_identities() {
    let mut rng = rng(44);
    for _ in 0..60 {
        let m = rng.gen_range(2..=4);
        let model = random_fermi_sea(m, &mut rng);
        let product = with_random_times(&random_product(m, rng.gen_range(1..=5), true, &mut rng), &mut rng);
        let options = if rng.gen_bool(0.5) { ExpandOptions::symbolic() } else { ExpandOptions::evaluated() };
        let e = wick_expand_t(&product, &model, options).unwrap();
        let d = check_operator_identity(&product, &e, &model, &FockSpace::fermi(m).unwrap()).unwrap();
        assert!(d < 1e-12, "{product:?}: {d:e}");
    }
    for _ in 0..30 {
        let model = random_bose_vacuum(2, &mut rng);
        let product = with_random_times(&random_product(2, rng.gen_range(1..=4), true, &mut rng), &mut rng);
        let e = wick_expand_t(&product, &model, ExpandOptions::evaluated()).unwrap();
        let d = check_operator_identity(&product, &e, &model, &FockSpace::bose(2, 8).unwrap()).unwrap();
        assert!(d < 1e-12);
    }
}

#[test]
fn equal_time_identities() {
    let mut rng = rng(45);
    let model = random_fermi_sea(3, &mut rng);
    let space = FockSpace::fermi(3).unwrap();
    for _ in 0..30 {
        let product: Vec<_> = random_product(3, 4, false, &mut rng).into_iter().map(|s| s.at(0.25)).collect();
        let e = wick_expand_t(&product, &model, ExpandOptions::evaluated()).unwrap();
        assert!(check_operator_identity(&product, &e, &model, &space).unwrap() < 1e-12);
    }
}

fn random_points(n: usize, m: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Vec<(usize, f64)> {
    (0..n).map(|_| (rng.gen_range(0..m), rng.gen_range(-2.0..2.0))).collect()
}

#[test]
fn fermionic_green_is_a_determinant() {
    let mut rng = rng(46);
    for n in 1..=4 {
        for _ in 0..10 {
            let model = random_fermi_sea(4, &mut rng);
            let (xs, ys) = (random_points(n, 4, &mut rng), random_points(n, 4, &mut rng));
            let g0 = PropagatorMatrix::build(&xs, &ys, &model).unwrap();
            let det = leibniz_det(&g0.entries);
            assert!((n_particle_green(&xs, &ys, &model).unwrap() - det).norm() < 1e-10);
            assert!((green_by_partitions(&xs, &ys, &model).unwrap() - det).norm() < 1e-10);
        }
    }
}

#[test]
fn bosonic_green_is_a_permanent() {
    let mut rng = rng(47);
    for n in 1..=3 {
        for _ in 0..10 {
            let model = random_bose_vacuum(2, &mut rng);
            let (xs, ys) = (random_points(n, 2, &mut rng), random_points(n, 2, &mut rng));
            let g0 = PropagatorMatrix::build(&xs, &ys, &model).unwrap();
            let perm = factorial_permanent(&g0.entries);
            let got = n_particle_green(&xs, &ys, &model).unwrap();
            assert!((got - perm).norm() < 1e-10);
            assert!((green_by_partitions(&xs, &ys, &model).unwrap() - perm).norm() < 1e-10);
            let product = wick::time_ordered::green_product(&xs, &ys);
            let oracle = Oracle::new(&model, 2 * n).unwrap();
            let exact = c(0.0, -1.0).powu(n as u32) * oracle.vev_t(&product).unwrap();
            assert!((got - exact).norm() < 1e-10, "{got} vs {exact}");
        }
    }
}

#[test]
fn anomalous_green_function_uses_all_pairings() {
    let mut rng = rng(48);
    for _ in 0..10 {
        let (u, v) = (random_complex(&mut rng), random_complex(&mut rng));
        let norm = (u.norm_sqr() + v.norm_sqr()).sqrt();
        let model = BcsModel::new(vec![BcsPair::new(u / norm, v / norm).with_energy(0.9)]).unwrap();
        let (xs, ys) = (random_points(2, 2, &mut rng), random_points(2, 2, &mut rng));
        let product = wick::time_ordered::green_product(&xs, &ys);
        let oracle = Oracle::new(&model, 1).unwrap();
        let exact = c(-1.0, 0.0) * oracle.vev_t(&product).unwrap();
        assert!((n_particle_green(&xs, &ys, &model).unwrap() - exact).norm() < 1e-12);
    }
}

#[test]
fn single_particle_convention() {
    let mut rng = rng(49);
    let model = random_fermi_sea(3, &mut rng);
    let oracle = Oracle::new(&model, 1).unwrap();
    for _ in 0..20 {
        let (x, y) = ((rng.gen_range(0..3), rng.gen_range(-1.0..1.0)), (rng.gen_range(0..3), rng.gen_range(-1.0..1.0)));
        let t_pair = [OperatorSymbol::psi(x.0).at(x.1), OperatorSymbol::psi_dag(y.0).at(y.1)];
        let expected = c(0.0, -1.0) * oracle.vev_t(&t_pair).unwrap();
        assert!((n_particle_green(&[x], &[y], &model).unwrap() - expected).norm() < 1e-13);
    }
}
