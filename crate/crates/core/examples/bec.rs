//! A condensate: the c-number part of the field and its expectation values.

use wick::{vev, vev_t, BecModel, ModelDictionary, OperatorSymbol, Oracle};

fn main() {
    let model = BecModel::new(3, 1.5).unwrap().with_volume(2.0).unwrap();
    println!("N = {}, b = {:.6}", model.particle_number(), model.b());

    let psi0 = OperatorSymbol::psi(0);
    println!("condensate part of psi(1): {}", model.condensate(&psi0).unwrap());
    let n = vev(&[psi0.adjoint(), psi0], &model).unwrap();
    println!("<psi+ psi>/V = {} (density {})", n.re / model.volume(), model.density());

    let oracle = Oracle::new(&model, 4).unwrap();
    println!("number state: <c+ c> = {}", oracle.vev(&[psi0.adjoint(), psi0]).unwrap().re);

    let p = [OperatorSymbol::psi(1).at(0.7), OperatorSymbol::psi_dag(1).at(0.0)];
    println!("<T psi(2) psi+(2)> = {:.12}", vev_t(&p, &model).unwrap());

    // symbolic expansion has no place for the c-number part
    let e = wick::wick_expand(&[psi0, psi0.adjoint()], &model, wick::ExpandOptions::symbolic());
    println!("expand: {}", e.unwrap_err());
}
