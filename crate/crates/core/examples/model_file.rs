//! Loading a model description from TOML.

use wick::{model_from_toml, vev, wick_expand, ExpandOptions, OperatorSymbol};

const BCS: &str = r#"
model = "bcs"

[[pairs]]
u = 0.6
v = [0.0, 0.8]
energy = 1.2

[[pairs]]
u = 0.8
v = 0.6
energy = 0.7
"#;

const TABLE: &str = r#"
model = "abstract"
statistics = "fermi"
modes = 2

[[contractions]]
left = "A(1)"
right = "A+(2)"
value = [0.25, -0.5]
"#;

fn main() {
    let bcs = model_from_toml(BCS).unwrap();
    println!("{}: {} modes, anomalous {}", bcs.name(), bcs.n_modes(), bcs.has_anomalous());
    let pair = [OperatorSymbol::psi(0), OperatorSymbol::psi(1)];
    println!("<a(1,up) a(1,down)> = {}", vev(&pair, bcs.as_ref()).unwrap());

    let table = model_from_toml(TABLE).unwrap();
    let product = [OperatorSymbol::psi(0), OperatorSymbol::psi_dag(1)];
    let e = wick_expand(&product, table.as_ref(), ExpandOptions::evaluated()).unwrap();
    println!("A(1) A+(2) -> scalar part {}", e.scalar_part());

    let err = model_from_toml("model = \"bcs\"\nspin = 1").unwrap_err();
    println!("rejected: {err}");
}
