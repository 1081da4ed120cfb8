//! Free n-particle Green functions: determinant, permanent and the direct
//! partition sum.

use nalgebra::DMatrix;
use num_complex::Complex64;
use wick::{green_by_partitions, n_particle_green, FermiSeaModel, Oracle, PropagatorMatrix, Statistics};

/// Rotation by `theta` in the plane of the first two modes.
fn rotation(theta: f64) -> DMatrix<Complex64> {
    let (s, c) = theta.sin_cos();
    DMatrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0]).map(|x| Complex64::new(x, 0.0))
}

fn main() {
    let model = FermiSeaModel::new(3, 1)
        .unwrap()
        .with_overlaps(rotation(0.4))
        .unwrap()
        .with_frequencies(vec![-0.4, 0.3, 1.1])
        .unwrap();
    let xs = [(1, 0.5), (2, 0.2), (0, -0.3)];
    let ys = [(1, 0.0), (2, -0.1), (0, 0.4)];

    let g0 = PropagatorMatrix::build(&xs, &ys, &model).unwrap();
    println!("G0 = {:.4}", g0.entries);
    for n in 1..=3 {
        let det = n_particle_green(&xs[..n], &ys[..n], &model).unwrap();
        let direct = green_by_partitions(&xs[..n], &ys[..n], &model).unwrap();
        println!("n = {n}: det {det:.12}, partitions {direct:.12}");
    }

    let bose = FermiSeaModel::vacuum(Statistics::Bose, 3).with_frequencies(vec![0.2, 0.5, 0.8]).unwrap();
    let xs = [(0, 1.0), (0, 0.8)];
    let ys = [(0, 0.0), (0, -0.2)];
    let perm = n_particle_green(&xs, &ys, &bose).unwrap();
    let oracle = Oracle::new(&bose, 4).unwrap();
    let product = wick::time_ordered::green_product(&xs, &ys);
    let exact = Complex64::new(0.0, -1.0).powu(2) * oracle.vev_t(&product).unwrap();
    println!("bosons: perm {perm:.12}, oracle {exact:.12}");
}
