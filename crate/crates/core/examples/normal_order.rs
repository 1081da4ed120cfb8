//! Normal ordering of pure quasi-particle products and the parity sign.

use wick::{normal_order, parity, OperatorSymbol, Statistics};

fn show(label: &str, product: &[OperatorSymbol], stats: Statistics) {
    let term = normal_order(product, stats).expect("pure symbols");
    let inner: Vec<String> = term.normal_factors.iter().map(|f| f.symbol.to_string()).collect();
    println!("{label:>6} {:+} N[{}]", term.coefficient.re, inner.join(" "));
}

fn main() {
    for p in [vec![0, 1, 2], vec![1, 0], vec![1, 2, 0], vec![3, 1, 0, 2]] {
        println!("parity {p:?} = {:+}", parity(&p).unwrap());
    }

    let (p1, p2) = (OperatorSymbol::alpha_plus(0), OperatorSymbol::alpha_plus(1));
    let (m1, m3) = (OperatorSymbol::alpha_minus(0), OperatorSymbol::alpha_minus(2));

    show("fermi", &[p1, p2], Statistics::Fermi);
    show("fermi", &[m1, p2], Statistics::Fermi);
    show("bose", &[m1, p2, m3], Statistics::Bose);
    show("fermi", &[m3, p1, m1, p2], Statistics::Fermi);
}
