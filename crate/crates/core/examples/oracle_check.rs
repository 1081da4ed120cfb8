//! Operator identities checked as matrices on a small Fock space.

use wick::{
    check_operator_identity, wick_expand, ExpandOptions, FermiSeaModel, FockSpace, OperatorSymbol, Statistics,
};

fn main() {
    let model = FermiSeaModel::new(4, 2).unwrap();
    let space = FockSpace::fermi(4).unwrap();
    let product = [
        OperatorSymbol::psi(0),
        OperatorSymbol::psi_dag(1),
        OperatorSymbol::psi(2),
        OperatorSymbol::psi_dag(3),
        OperatorSymbol::alpha_minus(1),
    ];
    for options in [ExpandOptions::symbolic(), ExpandOptions::evaluated().pruned()] {
        let e = wick_expand(&product, &model, options).unwrap();
        let d = check_operator_identity(&product, &e, &model, &space).unwrap();
        println!("{:?}: {} terms, deviation {d:.2e}", options.mode, e.len());
    }

    // bosons: compare only where the cutoff cannot interfere
    let model = FermiSeaModel::vacuum(Statistics::Bose, 2);
    let space = FockSpace::bose(2, 8).unwrap();
    let product = [
        OperatorSymbol::psi(0),
        OperatorSymbol::psi_dag(0),
        OperatorSymbol::psi(1),
        OperatorSymbol::psi_dag(0),
    ];
    let e = wick_expand(&product, &model, ExpandOptions::evaluated()).unwrap();
    let d = check_operator_identity(&product, &e, &model, &space).unwrap();
    println!("bose: dimension {}, safe block {}, deviation {d:.2e}", space.dimension(), space.safe_block(4).len());

    let mut wrong = e.clone();
    let k = wrong.terms.iter().position(|t| t.order() > 0 && t.coefficient.norm() > 0.0).unwrap();
    wrong.terms.remove(k);
    let d = check_operator_identity(&product, &wrong, &model, &space).unwrap();
    println!("drop a term: deviation {d:.2e}");
}
