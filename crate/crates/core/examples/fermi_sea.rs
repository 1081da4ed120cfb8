//! Particle-hole decomposition relative to a filled Fermi sea.

use wick::{contract, decompose, vev, FermiSeaModel, OperatorSymbol, Oracle};

fn main() {
    let model = FermiSeaModel::new(3, 1).unwrap().with_frequencies(vec![-0.5, 0.2, 0.9]).unwrap();

    for i in 0..3 {
        let parts = decompose(&OperatorSymbol::psi(i), &model).unwrap();
        let text: Vec<String> = parts.iter().map(|(c, s)| format!("{}·{s}", c.re)).collect();
        println!("psi({}) = {}", i + 1, text.join(" + "));
    }

    for i in 0..3 {
        let particle = contract(&OperatorSymbol::psi(i), &OperatorSymbol::psi_dag(i), &model).unwrap();
        let hole = contract(&OperatorSymbol::psi_dag(i), &OperatorSymbol::psi(i), &model).unwrap();
        println!("mode {}: <psi psi+> = {}, <psi+ psi> = {}", i + 1, particle.re, hole.re);
    }

    let product = [
        OperatorSymbol::psi_dag(0),
        OperatorSymbol::psi(1),
        OperatorSymbol::psi_dag(1),
        OperatorSymbol::psi(0),
    ];
    let oracle = Oracle::new(&model, 1).unwrap();
    println!("<F| c1+ c2 c2+ c1 |F> = {} (oracle {})", vev(&product, &model).unwrap(), oracle.vev(&product).unwrap());
}
