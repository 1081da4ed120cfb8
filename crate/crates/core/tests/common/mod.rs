//! Test-side helpers and brute-force oracles that share no code with the
//! library's own algorithms.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wick::{FermiSeaModel, OperatorSymbol, Statistics};

pub type Mat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Gram–Schmidt on a random complex matrix.
pub fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> Mat {
    let mut m = Mat::from_fn(n, n, |_, _| random_complex(rng));
    for j in 0..n {
        for k in 0..j {
            let proj: Complex64 = (0..n).map(|i| m[(i, k)].conj() * m[(i, j)]).sum();
            for i in 0..n {
                let v = m[(i, k)];
                m[(i, j)] -= proj * v;
            }
        }
        let norm = (0..n).map(|i| m[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..n {
            m[(i, j)] /= norm;
        }
    }
    m
}

pub fn sorted_frequencies(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut f: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..2.0)).collect();
    f.sort_by(f64::total_cmp);
    f
}

/// Fermi sea with random filling, overlaps and level energies.
pub fn random_fermi_sea(m: usize, rng: &mut ChaCha8Rng) -> FermiSeaModel {
    let filled = rng.gen_range(0..=m);
    FermiSeaModel::new(m, filled)
        .unwrap()
        .with_overlaps(random_unitary(m, rng))
        .unwrap()
        .with_frequencies(sorted_frequencies(m, rng))
        .unwrap()
}

pub fn random_bose_vacuum(m: usize, rng: &mut ChaCha8Rng) -> FermiSeaModel {
    FermiSeaModel::vacuum(Statistics::Bose, m)
        .with_overlaps(random_unitary(m, rng))
        .unwrap()
        .with_frequencies(sorted_frequencies(m, rng))
        .unwrap()
}

/// Random `ψ`/`ψ†` product, with an occasional pure quasi-particle symbol.
pub fn random_product(m: usize, len: usize, with_quasi: bool, rng: &mut ChaCha8Rng) -> Vec<OperatorSymbol> {
    (0..len)
        .map(|_| {
            let mode = rng.gen_range(0..m);
            match rng.gen_range(0..if with_quasi { 6 } else { 4 }) {
                0 | 1 => OperatorSymbol::psi(mode),
                2 | 3 => OperatorSymbol::psi_dag(mode),
                4 => OperatorSymbol::alpha_minus(mode),
                _ => OperatorSymbol::alpha_plus(mode),
            }
        })
        .collect()
}

pub fn with_random_times(product: &[OperatorSymbol], rng: &mut ChaCha8Rng) -> Vec<OperatorSymbol> {
    product.iter().map(|s| s.at(rng.gen_range(-2.0..2.0))).collect()
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

/// `c_a = Z^{⊗a} ⊗ σ ⊗ I^{⊗(M−a−1)}`, mode 0 the most significant factor.
pub fn kron_fermions(m: usize) -> Vec<Mat> {
    let id = Mat::identity(2, 2);
    let z = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(-1.0, 0.0)]));
    let mut sigma = Mat::zeros(2, 2);
    sigma[(0, 1)] = c(1.0, 0.0);
    (0..m)
        .map(|a| {
            let mut op = Mat::identity(1, 1);
            for b in 0..m {
                let f = match b.cmp(&a) {
                    std::cmp::Ordering::Less => &z,
                    std::cmp::Ordering::Equal => &sigma,
                    std::cmp::Ordering::Greater => &id,
                };
                op = kron(&op, f);
            }
            op
        })
        .collect()
}

pub fn kron_bosons(m: usize, cutoff: usize) -> Vec<Mat> {
    let d = cutoff + 1;
    let id = Mat::identity(d, d);
    let mut b = Mat::zeros(d, d);
    for n in 1..d {
        b[(n - 1, n)] = c((n as f64).sqrt(), 0.0);
    }
    (0..m)
        .map(|a| {
            let mut op = Mat::identity(1, 1);
            for k in 0..m {
                op = kron(&op, if k == a { &b } else { &id });
            }
            op
        })
        .collect()
}

pub fn inversion_parity(p: &[usize]) -> i8 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..=p.len() {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn leibniz_det(m: &Mat) -> Complex64 {
    let n = m.nrows();
    permutations(n)
        .iter()
        .map(|p| {
            let prod: Complex64 = (0..n).map(|i| m[(i, p[i])]).product();
            prod * inversion_parity(p) as f64
        })
        .sum()
}

pub fn factorial_permanent(m: &Mat) -> Complex64 {
    let n = m.nrows();
    permutations(n)
        .iter()
        .map(|p| (0..n).map(|i| m[(i, p[i])]).product::<Complex64>())
        .sum()
}

/// One term of a brute-force expansion: sign, ordered pairs, leftover
/// positions in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteTerm {
    pub sign: i8,
    pub pairs: Vec<(usize, usize)>,
    pub rest: Vec<usize>,
}

/// Every partial pairing of `0..n`; the sign is the parity of
/// `(i₁ j₁ … i_k j_k r₁ … r_m)` for fermions.
pub fn brute_force_wick(n: usize, statistics: Statistics) -> Vec<BruteTerm> {
    fn go(free: Vec<usize>, pairs: Vec<(usize, usize)>, rest: Vec<usize>, out: &mut Vec<Vec<(usize, usize)>>, rests: &mut Vec<Vec<usize>>) {
        let Some((&first, others)) = free.split_first() else {
            out.push(pairs);
            rests.push(rest);
            return;
        };
        let mut r = rest.clone();
        r.push(first);
        go(others.to_vec(), pairs.clone(), r, out, rests);
        for (k, &partner) in others.iter().enumerate() {
            let mut remaining = others.to_vec();
            remaining.remove(k);
            let mut p = pairs.clone();
            p.push((first, partner));
            go(remaining, p, rest.clone(), out, rests);
        }
    }
    let (mut all, mut rests) = (Vec::new(), Vec::new());
    go((0..n).collect(), Vec::new(), Vec::new(), &mut all, &mut rests);
    all.into_iter()
        .zip(rests)
        .map(|(mut pairs, rest)| {
            pairs.sort();
            let flat: Vec<usize> = pairs.iter().flat_map(|&(i, j)| [i, j]).chain(rest.iter().copied()).collect();
            let sign = if statistics.is_fermi() { inversion_parity(&flat) } else { 1 };
            BruteTerm { sign, pairs, rest }
        })
        .collect()
}

/// Double-factorial and binomial counts computed independently.
pub fn double_factorial(n: u64) -> u64 {
    if n <= 1 {
        1
    } else {
        n * double_factorial(n - 2)
    }
}

pub fn choose(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}
