//! Wick's theorem for products of bosonic and fermionic ladder operators.
//!
//! The crate brings operator products to normal order relative to a
//! reference state, evaluates expectation values as signed sums over pair
//! contractions, handles time-ordered products and free n-particle Green
//! functions, and checks all of it against exact matrices on small Fock
//! spaces.
//!
//! ```
//! use wick::{wick_expand, AbstractModel, ExpandOptions, OperatorSymbol, Statistics};
//!
//! let model = AbstractModel::new(Statistics::Fermi, 3);
//! let product: Vec<_> = (0..3).map(OperatorSymbol::psi).collect();
//! let expansion = wick_expand(&product, &model, ExpandOptions::symbolic()).unwrap();
//! assert_eq!(expansion.counts_by_order(), vec![1, 3]);
//! ```
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! | example | shows |
//! |---|---|
//! | `normal_order` | parity, `N[...]` and its sign |
//! | `wick_expand` | the three- and four-operator expansions |
//! | `vev_pairings` | pair partitions and expectation values |
//! | `fermi_sea` | particle–hole decomposition and contractions |
//! | `bcs` | Bogoliubov operators and anomalous contractions |
//! | `bec` | condensate c-number decomposition |
//! | `time_ordered` | T-contractions and the time-ordered theorem |
//! | `green_function` | determinant, permanent and the partition sum |
//! | `oracle_check` | operator identities on the Fock space |
//! | `model_file` | loading a model description from TOML |

pub mod algebra;
pub mod cli;
pub mod dsl;
pub mod error;
pub mod fock;
pub mod models;
pub mod partitions;
pub mod render;
pub mod time_ordered;
pub mod wick;

pub use algebra::{
    canonical_cmp, decompose, factors_of, normal_order, normal_order_factors, normal_order_term, parity, Base, Class,
    Expansion, Factor, OperatorSymbol, SignedTerm, Statistics,
};
pub use error::{Error, Result};
pub use fock::{build_mode_operators, build_state, check_operator_identity, FockMatrix, FockSpace, Oracle, StateSpec};
pub use models::{
    load_model, model_from_toml, AbstractModel, BareOp, BcsModel, BcsPair, BecModel, FermiSeaModel, ModelDictionary,
    Spin,
};
pub use partitions::{enumerate_pair_partitions, involution_number, pairing_count, PairPartition, PairPartitions};
pub use time_ordered::{
    determinant, green_by_partitions, n_particle_green, permanent, t_contract, time_order, vev_t, wick_expand_t,
    PropagatorMatrix,
};
pub use wick::{
    contract, extended_contraction_sign, lemma3_step, vev, vev_par, vev_symbolic, wick_expand, ContractionMode,
    ExpandOptions,
};
