use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{push_nonzero, BareOp, Components, ModelDictionary};
use crate::algebra::{Base, OperatorSymbol, Statistics};
use crate::error::{Error, Result};
use crate::fock::StateSpec;

/// Independent particles with the lowest `n_filled` levels occupied.
///
/// Single-particle eigenmodes `a` carry energies `ω_a` (nondecreasing) and
/// field modes `i` are related to them by the overlap matrix `⟨i|a⟩`, stored
/// with rows `i` and columns `a`. Particle–hole operators:
///
/// ```text
/// α_a⁻ = c_a†   (a < N)      α_a⁺ = c_a    (a < N)
/// α_a⁻ = c_a    (a ≥ N)      α_a⁺ = c_a†   (a ≥ N)
/// ```
///
/// With bosonic statistics only `n_filled = 0` is allowed, which is the
/// vacuum reference.
#[derive(Debug, Clone, PartialEq)]
pub struct FermiSeaModel {
    statistics: Statistics,
    n_filled: usize,
    overlaps: DMatrix<Complex64>,
    frequencies: Vec<f64>,
}

impl FermiSeaModel {
    /// Fermi sea on `n_modes` levels with identity overlaps and `ω_a = a + 1`.
    pub fn new(n_modes: usize, n_filled: usize) -> Result<Self> {
        Self::with_statistics(Statistics::Fermi, n_modes, n_filled)
    }

    /// Empty reference state for either statistics.
    pub fn vacuum(statistics: Statistics, n_modes: usize) -> Self {
        Self::with_statistics(statistics, n_modes, 0).expect("vacuum is always valid")
    }

    pub fn with_statistics(statistics: Statistics, n_modes: usize, n_filled: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::BadModel("a Fermi sea needs at least one mode".into()));
        }
        if n_filled > n_modes {
            return Err(Error::BadModel(format!(
                "cannot fill {n_filled} levels out of {n_modes}"
            )));
        }
        if statistics == Statistics::Bose && n_filled > 0 {
            return Err(Error::BadModel(
                "a filled sea of bosons is not annihilated by particle-hole operators; use the bec model".into(),
            ));
        }
        Ok(FermiSeaModel {
            statistics,
            n_filled,
            overlaps: DMatrix::identity(n_modes, n_modes),
            frequencies: (0..n_modes).map(|a| (a + 1) as f64).collect(),
        })
    }

    /// Replaces the overlap table. Rows are field modes, columns eigenmodes.
    /// Unitarity is not enforced; see [`FermiSeaModel::is_unitary`].
    pub fn with_overlaps(mut self, overlaps: DMatrix<Complex64>) -> Result<Self> {
        let n = self.frequencies.len();
        if overlaps.nrows() != n || overlaps.ncols() != n {
            return Err(Error::ShapeError(format!(
                "overlap matrix must be {n}x{n}, got {}x{}",
                overlaps.nrows(),
                overlaps.ncols()
            )));
        }
        self.overlaps = overlaps;
        Ok(self)
    }

    pub fn with_frequencies(mut self, frequencies: Vec<f64>) -> Result<Self> {
        if frequencies.len() != self.frequencies.len() {
            return Err(Error::ShapeError(format!(
                "expected {} frequencies, got {}",
                self.frequencies.len(),
                frequencies.len()
            )));
        }
        if frequencies.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::BadModel("level energies must be nondecreasing".into()));
        }
        self.frequencies = frequencies;
        Ok(self)
    }

    pub fn n_filled(&self) -> usize {
        self.n_filled
    }

    pub fn overlaps(&self) -> &DMatrix<Complex64> {
        &self.overlaps
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let n = self.overlaps.nrows();
        let prod = self.overlaps.adjoint() * &self.overlaps;
        (prod - DMatrix::<Complex64>::identity(n, n)).camax() <= tol
    }

    fn filled(&self, a: usize) -> bool {
        a < self.n_filled
    }

    /// Closed-form contraction of two field symbols:
    /// `⟨ψ_i ψ_j†⟩ = Σ_{a≥N} ⟨i|a⟩⟨j|a⟩*`, `⟨ψ_i† ψ_j⟩ = Σ_{a<N} ⟨i|a⟩*⟨j|a⟩`,
    /// and zero for `ψψ` and `ψ†ψ†`.
    pub fn fermi_sea_contraction(&self, left: &OperatorSymbol, right: &OperatorSymbol) -> Result<Complex64> {
        for s in [left, right] {
            if !s.is_field() {
                return Err(Error::BadModel(format!("{s} is not a field operator")));
            }
            self.check_symbol(s)?;
        }
        let (i, j) = (left.mode, right.mode);
        let n = self.overlaps.ncols();
        let sum = |range: std::ops::Range<usize>, f: &dyn Fn(usize) -> Complex64| range.map(f).sum();
        Ok(match (left.base, right.base) {
            (Base::FieldAnnihilate, Base::FieldCreate) => sum(self.n_filled..n, &|a| {
                self.overlaps[(i, a)] * self.overlaps[(j, a)].conj()
            }),
            (Base::FieldCreate, Base::FieldAnnihilate) => sum(0..self.n_filled, &|a| {
                self.overlaps[(i, a)].conj() * self.overlaps[(j, a)]
            }),
            _ => Complex64::new(0.0, 0.0),
        })
    }
}

impl ModelDictionary for FermiSeaModel {
    fn name(&self) -> &'static str {
        if self.n_filled == 0 {
            "vacuum"
        } else {
            "fermisea"
        }
    }

    fn statistics(&self) -> Statistics {
        self.statistics
    }

    fn n_modes(&self) -> usize {
        self.overlaps.nrows()
    }

    fn n_quasi_modes(&self) -> usize {
        self.overlaps.ncols()
    }

    fn decompose(&self, symbol: &OperatorSymbol) -> Result<Components> {
        let i = symbol.mode;
        let mut out = Vec::new();
        match symbol.base {
            Base::FieldAnnihilate => {
                for a in 0..self.overlaps.ncols() {
                    let q = if self.filled(a) {
                        OperatorSymbol::alpha_plus(a)
                    } else {
                        OperatorSymbol::alpha_minus(a)
                    };
                    push_nonzero(&mut out, self.overlaps[(i, a)], q);
                }
            }
            Base::FieldCreate => {
                for a in 0..self.overlaps.ncols() {
                    let q = if self.filled(a) {
                        OperatorSymbol::alpha_minus(a)
                    } else {
                        OperatorSymbol::alpha_plus(a)
                    };
                    push_nonzero(&mut out, self.overlaps[(i, a)].conj(), q);
                }
            }
            Base::QuasiAnnihilate | Base::QuasiCreate => out.push((Complex64::new(1.0, 0.0), *symbol)),
        }
        Ok(out)
    }

    fn quasi_energy(&self, a: usize) -> f64 {
        if self.filled(a) {
            -self.frequencies[a]
        } else {
            self.frequencies[a]
        }
    }

    fn realize(&self, symbol: &OperatorSymbol) -> Result<Vec<(Complex64, BareOp)>> {
        self.check_symbol(symbol)?;
        let i = symbol.mode;
        let n = self.overlaps.ncols();
        Ok(match symbol.base {
            Base::FieldAnnihilate => (0..n)
                .map(|a| (self.overlaps[(i, a)], BareOp::annihilate(a)))
                .collect(),
            Base::FieldCreate => (0..n)
                .map(|a| (self.overlaps[(i, a)].conj(), BareOp::create(a)))
                .collect(),
            Base::QuasiAnnihilate => vec![(Complex64::new(1.0, 0.0), BareOp { mode: i, dagger: self.filled(i) })],
            Base::QuasiCreate => vec![(Complex64::new(1.0, 0.0), BareOp { mode: i, dagger: !self.filled(i) })],
        })
    }

    fn reference_state(&self) -> Result<StateSpec> {
        Ok(if self.n_filled == 0 {
            StateSpec::Vacuum
        } else {
            StateSpec::FermiSea {
                n_filled: self.n_filled,
            }
        })
    }
}
