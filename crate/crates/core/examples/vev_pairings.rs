//! Expectation values as signed sums over pair partitions.

use num_complex::Complex64;
use wick::{enumerate_pair_partitions, pairing_count, vev, AbstractModel, OperatorSymbol, Statistics};

fn main() {
    for p in enumerate_pair_partitions(4).unwrap() {
        let pairs: Vec<String> = p.pairs.iter().map(|(i, j)| format!("<{} {}>", i + 1, j + 1)).collect();
        println!("{:+} {}", p.sign, pairs.join(""));
    }
    for two_n in [2, 4, 6, 8, 10, 12] {
        println!("{two_n:>2} positions: {} partitions", pairing_count(two_n));
    }

    // <i j> = 1 / (i + j) for the formal model
    let n = 6;
    let mut model = AbstractModel::new(Statistics::Fermi, n);
    for i in 0..n {
        for j in i + 1..n {
            let g = Complex64::new(1.0 / (i + j + 2) as f64, 0.0);
            model.insert(OperatorSymbol::psi(i), OperatorSymbol::psi(j), g);
        }
    }
    let product: Vec<_> = (0..n).map(OperatorSymbol::psi).collect();
    println!("<A1 ... A6> = {:.12}", vev(&product, &model).unwrap());
    println!("<A1 A2 A3>  = {}", vev(&product[..3], &model).unwrap());
}
