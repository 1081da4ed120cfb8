//! Bogoliubov quasi-particles over a BCS state and its anomalous contraction.

use num_complex::Complex64;
use wick::{contract, vev, BcsModel, BcsPair, OperatorSymbol, Oracle, Spin};

fn main() {
    let (u, v) = (Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
    let model = BcsModel::new(vec![BcsPair::new(u, v).with_energy(1.2)]).unwrap();
    let oracle = Oracle::new(&model, 1).unwrap();

    for q in 0..2 {
        let r = oracle.annihilation_residual(&OperatorSymbol::alpha_minus(q)).unwrap();
        println!("|alpha{}- |BCS>| = {r:.1e}", q + 1);
    }

    let up = OperatorSymbol::psi(BcsModel::mode(0, Spin::Up));
    let down = OperatorSymbol::psi(BcsModel::mode(0, Spin::Down));
    println!("<a_up a_down>   = {}", contract(&up, &down, &model).unwrap());
    println!("          -u*v  = {}", -u.conj() * v);
    println!("oracle          = {}", oracle.contraction(&up, &down).unwrap());
    println!("<n_up>          = {}", vev(&[up.adjoint(), up], &model).unwrap().re);
    println!("<a_up>          = {}", vev(&[up], &model).unwrap());

    let pair = [up.adjoint(), down.adjoint(), down, up];
    println!("<a+ a+ a a>     = {:.15} (oracle {:.15})", vev(&pair, &model).unwrap(), oracle.vev(&pair).unwrap());
}
