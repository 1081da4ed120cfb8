//! Reference-state dictionaries.
//!
//! A model tells the engine how each field operator splits into `+` and `-`
//! parts over a canonical quasi-particle basis, what a contraction evaluates
//! to, and how quasi-particles evolve in time. Concrete models also know how
//! to realize their operators on a Fock space, which is what the oracle uses.
//!
//! Quasi-particle convention shared by all models: `α_q⁻` and `α_q⁺` are
//! canonical, `[α_q⁻, α_r⁺]_∓ = δ_qr`, and under the free Hamiltonian
//! `α_q⁻(t) = e^{−iE_q t} α_q⁻`, `α_q⁺(t) = e^{+iE_q t} α_q⁺`.

use std::fmt;

use num_complex::Complex64;

use crate::algebra::{Base, Class, OperatorSymbol, Statistics};
use crate::error::{Error, Result};
use crate::fock::StateSpec;

mod abstract_model;
mod bcs;
mod bec;
pub mod config;
mod fermi_sea;

pub use abstract_model::AbstractModel;
pub use bcs::{BcsModel, BcsPair, Spin};
pub use bec::BecModel;
pub use config::{load_model, model_from_toml, ModelConfig};
pub use fermi_sea::FermiSeaModel;

/// A bare single-particle ladder operator on the oracle's Fock modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BareOp {
    pub mode: usize,
    pub dagger: bool,
}

impl BareOp {
    pub fn annihilate(mode: usize) -> Self {
        BareOp { mode, dagger: false }
    }

    pub fn create(mode: usize) -> Self {
        BareOp { mode, dagger: true }
    }
}

/// Weighted pure-class components of one symbol.
pub type Components = Vec<(Complex64, OperatorSymbol)>;

pub trait ModelDictionary: fmt::Debug + Send + Sync {
    fn name(&self) -> &'static str;

    fn statistics(&self) -> Statistics;

    /// Number of field modes `i` addressed by `ψ_i`, `ψ_i†`.
    fn n_modes(&self) -> usize;

    /// Number of quasi-particle labels `a` addressed by `α_a^±`.
    fn n_quasi_modes(&self) -> usize;

    /// Static decomposition of a symbol that passed [`check_symbol`].
    ///
    /// [`check_symbol`]: ModelDictionary::check_symbol
    fn decompose(&self, symbol: &OperatorSymbol) -> Result<Components>;

    /// Quasi-particle energy `E_q` used by the free evolution.
    fn quasi_energy(&self, _quasi_mode: usize) -> f64 {
        0.0
    }

    fn check_symbol(&self, symbol: &OperatorSymbol) -> Result<()> {
        let n = if symbol.is_field() {
            self.n_modes()
        } else {
            self.n_quasi_modes()
        };
        if symbol.mode >= n {
            return Err(Error::UnknownMode {
                mode: symbol.mode,
                n_modes: n,
            });
        }
        Ok(())
    }

    /// Decomposition with the free-evolution phases applied when the symbol
    /// carries a time label.
    fn components(&self, symbol: &OperatorSymbol) -> Result<Components> {
        self.check_symbol(symbol)?;
        let comps = self.decompose(&symbol.without_time())?;
        Ok(match symbol.time {
            None => comps,
            Some(t) => comps
                .into_iter()
                .map(|(c, s)| (c * quasi_phase(&s, self.quasi_energy(s.mode), t), s.at(t)))
                .collect(),
        })
    }

    /// `⟨gs|a b|gs⟩` with operators in the given order, evaluated as the
    /// mixed bracket `[a⁻, b⁺]_∓`. Time labels, when present, are honoured.
    fn contract(&self, a: &OperatorSymbol, b: &OperatorSymbol) -> Result<Complex64> {
        Ok(mixed_bracket(&self.components(a)?, &self.components(b)?))
    }

    /// c-number part of a symbol in models with a condensate.
    fn condensate(&self, _symbol: &OperatorSymbol) -> Result<Complex64> {
        Ok(Complex64::new(0.0, 0.0))
    }

    fn has_condensate(&self) -> bool {
        false
    }

    /// Whether `⟨ψψ⟩` or `⟨ψ†ψ†⟩` can be nonzero.
    fn has_anomalous(&self) -> bool {
        false
    }

    /// Number of Fock modes the oracle needs to realize this model.
    fn bare_modes(&self) -> usize {
        self.n_modes()
    }

    /// Expresses a static symbol in bare ladder operators of the oracle.
    fn realize(&self, symbol: &OperatorSymbol) -> Result<Vec<(Complex64, BareOp)>> {
        let _ = symbol;
        Err(Error::Unsupported(format!(
            "the {} model has no Fock-space realization",
            self.name()
        )))
    }

    fn reference_state(&self) -> Result<StateSpec> {
        Err(Error::Unsupported(format!(
            "the {} model has no concrete reference state",
            self.name()
        )))
    }
}

/// Free-evolution phase of a pure symbol at time `t`.
pub fn quasi_phase(symbol: &OperatorSymbol, energy: f64, t: f64) -> Complex64 {
    match symbol.class() {
        Some(Class::Minus) => Complex64::from_polar(1.0, -energy * t),
        Some(Class::Plus) => Complex64::from_polar(1.0, energy * t),
        None => Complex64::new(1.0, 0.0),
    }
}

/// `[A⁻, B⁺]_∓` for canonical quasi-particles: pairs each `α_q⁻` component
/// of `a` with the `α_q⁺` component of `b`.
pub fn mixed_bracket(a: &[(Complex64, OperatorSymbol)], b: &[(Complex64, OperatorSymbol)]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (ca, sa) in a {
        if sa.base != Base::QuasiAnnihilate {
            continue;
        }
        for (cb, sb) in b {
            if sb.base == Base::QuasiCreate && sb.mode == sa.mode {
                acc += ca * cb;
            }
        }
    }
    acc
}

pub(crate) fn push_nonzero(out: &mut Components, coefficient: Complex64, symbol: OperatorSymbol) {
    if coefficient != Complex64::new(0.0, 0.0) {
        out.push((coefficient, symbol));
    }
}
