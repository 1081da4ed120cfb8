//! Time ordering, T-contractions and the time-ordered theorem.

use wick::dsl::AtomName;
use wick::render::{labels_for, render_text};
use wick::{t_contract, time_order, wick_expand_t, ExpandOptions, FermiSeaModel, OperatorSymbol, Oracle, Statistics};

fn main() {
    let a = OperatorSymbol::psi(0).at(1.0);
    let b = OperatorSymbol::psi(1).at(2.0);
    let t = time_order(&[a, b], Statistics::Fermi).unwrap();
    println!("T[A1@1 A2@2] = {:+} × position order {:?}", t.coefficient.re, t.positions());

    let model = FermiSeaModel::new(2, 1).unwrap().with_frequencies(vec![0.3, 0.7]).unwrap();
    let x = OperatorSymbol::psi(1).at(0.5);
    let y = OperatorSymbol::psi_dag(1).at(0.0);
    let xy = t_contract(&x, &y, &model).unwrap();
    let yx = t_contract(&y, &x, &model).unwrap();
    println!("T<x y> = {xy:.12}");
    println!("T<y x> = {yx:.12} (twisted sign)");

    let product = [
        OperatorSymbol::psi(0).at(0.2),
        OperatorSymbol::psi_dag(1).at(0.9),
        OperatorSymbol::psi(1).at(-0.4),
    ];
    let e = wick_expand_t(&product, &model, ExpandOptions::symbolic()).unwrap();
    print!("{}", render_text(&e, &labels_for(&product, AtomName::Psi)));
    let oracle = Oracle::new(&model, 1).unwrap();
    println!("oracle deviation {:.1e}", oracle.check_identity(&product, &e).unwrap());
}
