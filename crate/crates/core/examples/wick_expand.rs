//! The three- and four-operator expansions over a formal model.

use wick::dsl::AtomName;
use wick::render::{labels_for, render_text};
use wick::{wick_expand, AbstractModel, ExpandOptions, OperatorSymbol, Statistics};

fn main() {
    for n in [2, 3, 4] {
        let product: Vec<_> = (0..n).map(OperatorSymbol::psi).collect();
        let model = AbstractModel::new(Statistics::Fermi, n);
        let expansion = wick_expand(&product, &model, ExpandOptions::symbolic()).unwrap();
        println!("{n} operators, {} terms, by order {:?}", expansion.len(), expansion.counts_by_order());
        print!("{}", render_text(&expansion, &labels_for(&product, AtomName::A)));
        println!();
    }

    // bosons: same terms, every sign is +
    let product: Vec<_> = (0..3).map(OperatorSymbol::psi).collect();
    let model = AbstractModel::new(Statistics::Bose, 3);
    let expansion = wick_expand(&product, &model, ExpandOptions::symbolic()).unwrap();
    print!("{}", render_text(&expansion, &labels_for(&product, AtomName::A)));
}
