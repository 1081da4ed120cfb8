//! Dense matrices on small truncated Fock spaces.
//!
//! Basis states are occupation tuples `(n_0, …, n_{M−1})` in lexicographic
//! order with mode 0 most significant, so index `Σ_a n_a (c+1)^{M−1−a}` for
//! cutoff `c` (1 for fermions). Fermionic annihilators carry the string sign
//! `(−1)^{Σ_{b<a} n_b}`, which makes the anticommutation relations exact.
//! Bosonic ladder operators use `√n` entries and are exact away from the
//! cutoff; identities with `n` operators are compared only between states of
//! total occupation `≤ cutoff − n`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::algebra::{Class, Expansion, Factor, OperatorSymbol, Statistics};
use crate::error::{Error, Result};
use crate::models::{BareOp, ModelDictionary};
use crate::time_ordered::time_order;

/// Largest fermionic mode count.
pub const MAX_FERMI_MODES: usize = 12;
/// Largest bosonic dimension.
pub const MAX_BOSE_DIMENSION: usize = 4096;

type Mat = DMatrix<Complex64>;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockSpace {
    statistics: Statistics,
    n_modes: usize,
    cutoff: usize,
    basis: Vec<Vec<u8>>,
}

impl FockSpace {
    /// `cutoff` is the maximum occupation per mode; it is forced to 1 for
    /// fermions.
    pub fn new(statistics: Statistics, n_modes: usize, cutoff: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::ShapeError("a Fock space needs at least one mode".into()));
        }
        let cutoff = match statistics {
            Statistics::Fermi => {
                if n_modes > MAX_FERMI_MODES {
                    return Err(Error::SpaceTooLarge(format!(
                        "{n_modes} fermionic modes, at most {MAX_FERMI_MODES}"
                    )));
                }
                1
            }
            Statistics::Bose => {
                if cutoff == 0 {
                    return Err(Error::ShapeError("bosonic cutoff must be at least 1".into()));
                }
                let dim = (cutoff + 1).checked_pow(n_modes as u32);
                if dim.is_none_or(|d| d > MAX_BOSE_DIMENSION) {
                    return Err(Error::SpaceTooLarge(format!(
                        "({cutoff}+1)^{n_modes} exceeds {MAX_BOSE_DIMENSION}"
                    )));
                }
                cutoff
            }
        };
        let base = cutoff + 1;
        let dim = base.pow(n_modes as u32);
        let basis = (0..dim)
            .map(|mut k| {
                let mut occ = vec![0u8; n_modes];
                for slot in occ.iter_mut().rev() {
                    *slot = (k % base) as u8;
                    k /= base;
                }
                occ
            })
            .collect();
        Ok(FockSpace {
            statistics,
            n_modes,
            cutoff,
            basis,
        })
    }

    pub fn fermi(n_modes: usize) -> Result<Self> {
        Self::new(Statistics::Fermi, n_modes, 1)
    }

    pub fn bose(n_modes: usize, cutoff: usize) -> Result<Self> {
        Self::new(Statistics::Bose, n_modes, cutoff)
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }

    pub fn index_of(&self, occupations: &[u8]) -> Option<usize> {
        if occupations.len() != self.n_modes || occupations.iter().any(|&n| n as usize > self.cutoff) {
            return None;
        }
        Some(occupations.iter().fold(0, |k, &n| k * (self.cutoff + 1) + n as usize))
    }

    fn stride(&self, mode: usize) -> usize {
        (self.cutoff + 1).pow((self.n_modes - 1 - mode) as u32)
    }

    /// Basis indices of the block on which an identity with `n_operators`
    /// factors is unaffected by truncation. All states for fermions.
    pub fn safe_block(&self, n_operators: usize) -> Vec<usize> {
        match self.statistics {
            Statistics::Fermi => (0..self.dimension()).collect(),
            Statistics::Bose => {
                let limit = self.cutoff.saturating_sub(n_operators);
                (0..self.dimension())
                    .filter(|&k| self.basis[k].iter().map(|&n| n as usize).sum::<usize>() <= limit)
                    .collect()
            }
        }
    }

    fn annihilator(&self, mode: usize) -> Mat {
        let dim = self.dimension();
        let stride = self.stride(mode);
        let mut m = Mat::zeros(dim, dim);
        for (k, occ) in self.basis.iter().enumerate() {
            let n = occ[mode];
            if n == 0 {
                continue;
            }
            let value = match self.statistics {
                Statistics::Fermi => {
                    let before: u32 = occ[..mode].iter().map(|&b| b as u32).sum();
                    if before % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    }
                }
                Statistics::Bose => (n as f64).sqrt(),
            };
            m[(k - stride, k)] = Complex64::new(value, 0.0);
        }
        m
    }
}

/// An operator matrix together with a description of what it represents.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMatrix {
    pub matrix: DMatrix<Complex64>,
    pub label: String,
}

/// `(c_a, c_a†)` for every mode of the space.
pub fn build_mode_operators(space: &FockSpace) -> Vec<(FockMatrix, FockMatrix)> {
    (0..space.n_modes())
        .map(|a| {
            let c = space.annihilator(a);
            let c_dag = c.adjoint();
            (
                FockMatrix {
                    matrix: c,
                    label: format!("c({})", a + 1),
                },
                FockMatrix {
                    matrix: c_dag,
                    label: format!("c+({})", a + 1),
                },
            )
        })
        .collect()
}

/// Concrete reference states.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Vacuum,
    /// Modes `0..n_filled` occupied.
    FermiSea { n_filled: usize },
    /// `Π_p (u_p + v_p c†_{2p} c†_{2p+1}) |vac⟩`.
    Bcs { pairs: Vec<(Complex64, Complex64)> },
    /// `n` bosons in mode 0.
    Bec { n: usize },
}

pub fn build_state(space: &FockSpace, spec: &StateSpec) -> Result<DVector<Complex64>> {
    let dim = space.dimension();
    let basis_vector = |occ: &[u8]| -> Result<DVector<Complex64>> {
        let k = space
            .index_of(occ)
            .ok_or_else(|| Error::BadStateSpec(format!("occupation {occ:?} is outside the space")))?;
        let mut v = DVector::zeros(dim);
        v[k] = one();
        Ok(v)
    };
    match spec {
        StateSpec::Vacuum => basis_vector(&vec![0; space.n_modes()]),
        StateSpec::FermiSea { n_filled } => {
            if space.statistics() != Statistics::Fermi {
                return Err(Error::BadStateSpec("a Fermi sea needs fermionic statistics".into()));
            }
            if *n_filled > space.n_modes() {
                return Err(Error::BadStateSpec(format!(
                    "cannot fill {n_filled} of {} modes",
                    space.n_modes()
                )));
            }
            let occ: Vec<u8> = (0..space.n_modes()).map(|a| u8::from(a < *n_filled)).collect();
            basis_vector(&occ)
        }
        StateSpec::Bcs { pairs } => {
            if space.statistics() != Statistics::Fermi || space.n_modes() != 2 * pairs.len() {
                return Err(Error::BadStateSpec(format!(
                    "{} pairs need a fermionic space of {} modes",
                    pairs.len(),
                    2 * pairs.len()
                )));
            }
            let ops = build_mode_operators(space);
            let mut v = basis_vector(&vec![0; space.n_modes()])?;
            for (p, &(u, v_amp)) in pairs.iter().enumerate() {
                let pair = &ops[2 * p].1.matrix * &ops[2 * p + 1].1.matrix;
                v = &v * u + (pair * &v) * v_amp;
            }
            let norm = v.norm();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::BadStateSpec(format!("BCS amplitudes give norm {norm}")));
            }
            Ok(v)
        }
        StateSpec::Bec { n } => {
            if space.statistics() != Statistics::Bose {
                return Err(Error::BadStateSpec("a condensate needs bosonic statistics".into()));
            }
            if *n > space.cutoff() {
                return Err(Error::BadStateSpec(format!("{n} bosons exceed cutoff {}", space.cutoff())));
            }
            let mut occ = vec![0u8; space.n_modes()];
            occ[0] = *n as u8;
            basis_vector(&occ)
        }
    }
}

enum Evolution {
    Diagonal(Vec<f64>),
    Eigen { vectors: Mat, values: Vec<f64> },
}

/// A model realized on a Fock space: operator matrices, the reference state
/// and the free Heisenberg evolution `H = Σ_q E_q α_q⁺ α_q⁻`.
pub struct Oracle<'m> {
    model: &'m dyn ModelDictionary,
    space: FockSpace,
    ladders: Vec<(Mat, Mat)>,
    state: DVector<Complex64>,
    evolution: OnceLock<Evolution>,
}

impl std::fmt::Debug for Oracle<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Oracle")
            .field("model", &self.model.name())
            .field("space", &self.space)
            .finish_non_exhaustive()
    }
}

impl<'m> Oracle<'m> {
    /// The model's own reference state on `bare_modes()` modes.
    pub fn new(model: &'m dyn ModelDictionary, cutoff: usize) -> Result<Self> {
        let space = FockSpace::new(model.statistics(), model.bare_modes(), cutoff)?;
        Self::with_space(model, space)
    }

    pub fn with_space(model: &'m dyn ModelDictionary, space: FockSpace) -> Result<Self> {
        let spec = model.reference_state()?;
        Self::with_state(model, space, &spec)
    }

    pub fn with_state(model: &'m dyn ModelDictionary, space: FockSpace, spec: &StateSpec) -> Result<Self> {
        if space.statistics() != model.statistics() {
            return Err(Error::BadStateSpec(format!(
                "{} space for a {} model",
                space.statistics(),
                model.statistics()
            )));
        }
        let state = build_state(&space, spec)?;
        let ladders = build_mode_operators(&space)
            .into_iter()
            .map(|(c, d)| (c.matrix, d.matrix))
            .collect();
        Ok(Oracle {
            model,
            space,
            ladders,
            state,
            evolution: OnceLock::new(),
        })
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn state(&self) -> &DVector<Complex64> {
        &self.state
    }

    pub fn identity(&self) -> Mat {
        Mat::identity(self.space.dimension(), self.space.dimension())
    }

    fn bare(&self, op: BareOp) -> Option<&Mat> {
        self.ladders
            .get(op.mode)
            .map(|(c, d)| if op.dagger { d } else { c })
    }

    /// Static matrix of a symbol from the model's realization.
    pub fn operator(&self, symbol: &OperatorSymbol) -> Result<Mat> {
        let unknown = |why: String| Error::UnknownSymbol(format!("{}: {why}", symbol.without_time()));
        let parts = self.model.realize(&symbol.without_time()).map_err(|e| unknown(e.to_string()))?;
        let mut m = Mat::zeros(self.space.dimension(), self.space.dimension());
        for (c, op) in parts {
            let b = self
                .bare(op)
                .ok_or_else(|| unknown(format!("needs mode {} of a {}-mode space", op.mode + 1, self.space.n_modes())))?;
            m += b * c;
        }
        Ok(m)
    }

    fn evolution(&self) -> Result<&Evolution> {
        if let Some(e) = self.evolution.get() {
            return Ok(e);
        }
        let dim = self.space.dimension();
        let mut h = Mat::zeros(dim, dim);
        for q in 0..self.model.n_quasi_modes() {
            let e = self.model.quasi_energy(q);
            if e == 0.0 {
                continue;
            }
            let plus = self.operator(&OperatorSymbol::alpha_plus(q))?;
            let minus = self.operator(&OperatorSymbol::alpha_minus(q))?;
            h += (plus * minus) * Complex64::new(e, 0.0);
        }
        let off_diagonal = (0..dim).any(|i| (0..dim).any(|j| i != j && h[(i, j)] != zero()));
        let evolution = if off_diagonal {
            let hermitian = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
            let eig = SymmetricEigen::new(hermitian);
            Evolution::Eigen {
                vectors: eig.eigenvectors,
                values: eig.eigenvalues.iter().copied().collect(),
            }
        } else {
            Evolution::Diagonal((0..dim).map(|i| h[(i, i)].re).collect())
        };
        Ok(self.evolution.get_or_init(|| evolution))
    }

    /// `e^{iHt} O e^{−iHt}`.
    pub fn heisenberg(&self, op: &Mat, t: f64) -> Result<Mat> {
        if t == 0.0 {
            return Ok(op.clone());
        }
        Ok(match self.evolution()? {
            Evolution::Diagonal(e) => Mat::from_fn(op.nrows(), op.ncols(), |i, j| {
                op[(i, j)] * Complex64::from_polar(1.0, (e[i] - e[j]) * t)
            }),
            Evolution::Eigen { vectors, values } => {
                let inner = vectors.adjoint() * op * vectors;
                let rotated = Mat::from_fn(inner.nrows(), inner.ncols(), |i, j| {
                    inner[(i, j)] * Complex64::from_polar(1.0, (values[i] - values[j]) * t)
                });
                vectors * rotated * vectors.adjoint()
            }
        })
    }

    /// Matrix of a symbol, Heisenberg-evolved to its time label if any.
    pub fn symbol_matrix(&self, symbol: &OperatorSymbol) -> Result<Mat> {
        let m = self.operator(symbol)?;
        match symbol.time {
            Some(t) => self.heisenberg(&m, t),
            None => Ok(m),
        }
    }

    pub fn product(&self, product: &[OperatorSymbol]) -> Result<Mat> {
        let mut m = self.identity();
        for s in product {
            m *= self.symbol_matrix(s)?;
        }
        Ok(m)
    }

    /// `T[A₁…Aₙ]` with the engine's equal-time convention.
    pub fn time_ordered_product(&self, product: &[OperatorSymbol]) -> Result<Mat> {
        let ordered = time_order(product, self.space.statistics())?;
        let sorted: Vec<_> = ordered.normal_factors.iter().map(|f| f.symbol).collect();
        Ok(self.product(&sorted)? * ordered.coefficient)
    }

    /// `⟨s|M|s⟩`.
    pub fn expectation(&self, m: &Mat) -> Complex64 {
        self.state.dotc(&(m * &self.state))
    }

    pub fn vev(&self, product: &[OperatorSymbol]) -> Result<Complex64> {
        Ok(self.expectation(&self.product(product)?))
    }

    pub fn vev_t(&self, product: &[OperatorSymbol]) -> Result<Complex64> {
        Ok(self.expectation(&self.time_ordered_product(product)?))
    }

    pub fn contraction(&self, a: &OperatorSymbol, b: &OperatorSymbol) -> Result<Complex64> {
        self.vev(&[*a, *b])
    }

    pub fn t_contraction(&self, a: &OperatorSymbol, b: &OperatorSymbol) -> Result<Complex64> {
        self.vev_t(&[*a, *b])
    }

    /// `‖O|s⟩‖` for the static matrix of a symbol.
    pub fn annihilation_residual(&self, symbol: &OperatorSymbol) -> Result<f64> {
        Ok((self.operator(symbol)? * &self.state).norm())
    }

    /// `(A⁺, A⁻)` matrices of one factor from the model's decomposition,
    /// phases included.
    fn split(&self, symbol: &OperatorSymbol) -> Result<(Mat, Mat)> {
        let dim = self.space.dimension();
        let (mut plus, mut minus) = (Mat::zeros(dim, dim), Mat::zeros(dim, dim));
        for (c, s) in self.model.components(symbol)? {
            let m = self.operator(&s)? * c;
            match s.class() {
                Some(Class::Plus) => plus += m,
                Some(Class::Minus) => minus += m,
                None => return Err(Error::NotPureClass { position: 0 }),
            }
        }
        Ok((plus, minus))
    }

    /// Matrix of the right-hand side of an expansion of `product`.
    pub fn expansion_matrix(&self, product: &[OperatorSymbol], expansion: &Expansion) -> Result<Mat> {
        let parts: Vec<(Mat, Mat)> = product.iter().map(|s| self.split(s)).collect::<Result<_>>()?;
        let normal = NormalProducts::new(&parts, self.space.statistics(), self.identity());
        let mut pair_cache: HashMap<(usize, usize), Complex64> = HashMap::new();
        let mut total = Mat::zeros(self.space.dimension(), self.space.dimension());
        for term in expansion {
            let mut coefficient = term.coefficient;
            if !expansion.evaluated {
                for &(i, j) in &term.contractions {
                    let v = match pair_cache.get(&(i, j)) {
                        Some(v) => *v,
                        None => {
                            let v = if expansion.time_ordered {
                                self.t_contraction(&product[i], &product[j])?
                            } else {
                                self.contraction(&product[i], &product[j])?
                            };
                            pair_cache.insert((i, j), v);
                            v
                        }
                    };
                    coefficient *= v;
                }
            }
            if coefficient == zero() {
                continue;
            }
            let (sign, mask) = stored_order_sign(&term.normal_factors, self.space.statistics());
            let n = normal.get(mask);
            total += &*n * (coefficient * sign);
        }
        Ok(total)
    }

    /// Largest entrywise deviation between two matrices on the safe block for
    /// `n_operators` factors.
    pub fn deviation(&self, a: &Mat, b: &Mat, n_operators: usize) -> f64 {
        let block = self.space.safe_block(n_operators);
        let mut worst = 0.0f64;
        for &i in &block {
            for &j in &block {
                worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
            }
        }
        worst
    }

    /// `max |LHS − RHS|` for a product and its expansion.
    pub fn check_identity(&self, product: &[OperatorSymbol], expansion: &Expansion) -> Result<f64> {
        if expansion.original_length != product.len() {
            return Err(Error::ShapeError(format!(
                "expansion of {} factors checked against a product of {}",
                expansion.original_length,
                product.len()
            )));
        }
        if self.space.statistics() == Statistics::Bose && self.space.cutoff() < product.len() {
            return Err(Error::ShapeError(format!(
                "cutoff {} leaves no safe block for {} operators",
                self.space.cutoff(),
                product.len()
            )));
        }
        let lhs = if expansion.time_ordered {
            self.time_ordered_product(product)?
        } else {
            self.product(product)?
        };
        let rhs = self.expansion_matrix(product, expansion)?;
        Ok(self.deviation(&lhs, &rhs, product.len()))
    }
}

/// Sign relating a stored factor order to ascending positions, and the
/// position mask.
fn stored_order_sign(factors: &[Factor], statistics: Statistics) -> (Complex64, u64) {
    let positions: Vec<usize> = factors.iter().map(|f| f.position).collect();
    let mut inversions = 0usize;
    for i in 0..positions.len() {
        for j in i + 1..positions.len() {
            if positions[i] > positions[j] {
                inversions += 1;
            }
        }
    }
    let mask = positions.iter().fold(0u64, |m, &p| m | (1 << p));
    let sign = if statistics.sign_pow(inversions) < 0 { -1.0 } else { 1.0 };
    (Complex64::new(sign, 0.0), mask)
}

/// `N[F_S]` for subsets `S` of the product, factors in ascending position,
/// memoized over masks via `N[F_k R] = F_k⁺ N[R] + (±1)^{|R|} N[R] F_k⁻`.
struct NormalProducts<'a> {
    parts: &'a [(Mat, Mat)],
    statistics: Statistics,
    cache: RefCell<HashMap<u64, std::rc::Rc<Mat>>>,
}

impl<'a> NormalProducts<'a> {
    fn new(parts: &'a [(Mat, Mat)], statistics: Statistics, identity: Mat) -> Self {
        let mut cache = HashMap::new();
        cache.insert(0u64, std::rc::Rc::new(identity));
        NormalProducts {
            parts,
            statistics,
            cache: RefCell::new(cache),
        }
    }

    fn get(&self, mask: u64) -> std::rc::Rc<Mat> {
        if let Some(m) = self.cache.borrow().get(&mask) {
            return m.clone();
        }
        let first = mask.trailing_zeros() as usize;
        let rest_mask = mask & !(1u64 << first);
        let rest = self.get(rest_mask);
        let (plus, minus) = &self.parts[first];
        let sign = self.statistics.sign_pow(rest_mask.count_ones() as usize) as f64;
        let m = plus * &*rest + (&*rest * minus) * Complex64::new(sign, 0.0);
        let m = std::rc::Rc::new(m);
        self.cache.borrow_mut().insert(mask, m.clone());
        m
    }
}

/// Builds the model's oracle on `space` and checks `lhs = rhs` as operators.
pub fn check_operator_identity(
    lhs: &[OperatorSymbol],
    rhs: &Expansion,
    model: &dyn ModelDictionary,
    space: &FockSpace,
) -> Result<f64> {
    Oracle::with_space(model, space.clone())?.check_identity(lhs, rhs)
}
