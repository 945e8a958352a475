//! Random and bundled inputs shared by the integration tests.
#![allow(dead_code)]

use eqloc::borel::InvolutiveComplex;
use eqloc::complexes::{GradedBasis, GradedComplex};
use eqloc::flowmodel::{derive_operators, generate_examples, EXAMPLE_NAMES};
use eqloc::localize::{assemble_total, LocalizationDatum};
use eqloc::seriesalg::BitMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn bundled_data() -> Vec<(String, LocalizationDatum)> {
    EXAMPLE_NAMES
        .iter()
        .map(|n| (n.to_string(), derive_operators(&generate_examples(n).unwrap()).unwrap()))
        .collect()
}

pub fn bundled_complexes() -> Vec<(String, InvolutiveComplex)> {
    bundled_data()
        .into_iter()
        .map(|(n, d)| (n, assemble_total(&d).unwrap().involutive))
        .collect()
}

fn basis(degrees: &[i64]) -> GradedBasis {
    GradedBasis::new(degrees.iter().enumerate().map(|(i, &d)| (format!("g{i}"), d))).unwrap()
}

/// Conjugates `ms` by `I + e_ij` for random pairs `i != j` of equal degree;
/// each such matrix is its own inverse.
fn scramble(rng: &mut ChaCha8Rng, degrees: &[i64], ms: &mut [&mut BitMatrix], steps: usize) {
    let n = degrees.len();
    if n < 2 {
        return;
    }
    for _ in 0..steps {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j || degrees[i] != degrees[j] {
            continue;
        }
        for m in ms.iter_mut() {
            // E M E with E = I + e_ij: add column i to column j, then row j to row i.
            for r in 0..n {
                if m.get(r, i) {
                    m.toggle(r, j);
                }
            }
            for c in 0..n {
                if m.get(j, c) {
                    m.toggle(i, c);
                }
            }
        }
    }
}

/// A random complex with involution of dimension at most `max_dim`, built
/// from equivariant blocks and scrambled by an equivariant change of basis.
pub fn random_involutive(rng: &mut ChaCha8Rng, max_dim: usize) -> InvolutiveComplex {
    let mut degs: Vec<i64> = Vec::new();
    let mut d_entries: Vec<(usize, usize)> = Vec::new();
    let mut swaps: Vec<(usize, usize)> = Vec::new();
    loop {
        let kind = rng.gen_range(0..6);
        let size = [1, 2, 2, 4, 3, 3][kind];
        if degs.len() + size > max_dim {
            if degs.is_empty() {
                continue;
            }
            break;
        }
        let k: i64 = rng.gen_range(0..3);
        let b = degs.len();
        match kind {
            0 => degs.push(k),
            1 => {
                degs.extend([k, k]);
                swaps.push((b, b + 1));
            }
            2 => {
                degs.extend([k, k + 1]);
                d_entries.push((b + 1, b));
            }
            3 => {
                degs.extend([k, k + 1, k, k + 1]);
                d_entries.extend([(b + 1, b), (b + 3, b + 2)]);
                swaps.extend([(b, b + 2), (b + 1, b + 3)]);
            }
            4 => {
                degs.extend([k, k + 1, k + 1]);
                d_entries.extend([(b + 1, b), (b + 2, b)]);
                swaps.push((b + 1, b + 2));
            }
            _ => {
                degs.extend([k, k, k + 1]);
                d_entries.extend([(b + 2, b), (b + 2, b + 1)]);
                swaps.push((b, b + 1));
            }
        }
        if rng.gen_bool(0.25) {
            break;
        }
    }
    let n = degs.len();
    let mut d = BitMatrix::zeros(n, n);
    for (y, x) in d_entries {
        d.set(y, x, true);
    }
    let mut iota = BitMatrix::identity(n);
    for (a, b) in swaps {
        iota.set(a, a, false);
        iota.set(b, b, false);
        iota.set(a, b, true);
        iota.set(b, a, true);
    }
    scramble(rng, &degs, &mut [&mut d, &mut iota], 4 * n);
    InvolutiveComplex::new(GradedComplex::f2(basis(&degs), &d), iota).unwrap()
}

/// A random datum with `C_inv = 0`: a scrambled acyclic-plus-homology
/// `d_non` and `U = d h + h d` for a random degree-preserving `h`.
pub fn random_free_datum(rng: &mut ChaCha8Rng) -> LocalizationDatum {
    let mut degs: Vec<i64> = Vec::new();
    let mut d = Vec::new();
    let blocks = rng.gen_range(1..=4);
    for _ in 0..blocks {
        let k: i64 = rng.gen_range(0..3);
        let b = degs.len();
        if rng.gen_bool(0.5) {
            degs.extend([k, k + 1]);
            d.push((b + 1, b));
        } else {
            degs.push(k);
        }
    }
    let n = degs.len();
    let mut d_non = BitMatrix::zeros(n, n);
    for (y, x) in d {
        d_non.set(y, x, true);
    }
    scramble(rng, &degs, &mut [&mut d_non], 3 * n);
    let mut h = BitMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if degs[i] == degs[j] && rng.gen_bool(0.5) {
                h.set(i, j, true);
            }
        }
    }
    let u = d_non.mul(&h).add(&h.mul(&d_non));
    let mut datum = LocalizationDatum::zero(GradedBasis::empty(), basis(&degs), rng.gen_range(0..3));
    datum.d_non = d_non;
    datum.u = u;
    datum
}

fn block_diag(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
    let mut m = BitMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    for (y, x) in a.entries() {
        m.set(y, x, true);
    }
    for (y, x) in b.entries() {
        m.set(a.nrows() + y, a.ncols() + x, true);
    }
    m
}

/// Direct sum of two data with the same `i_anti`; action values are dropped.
pub fn direct_sum(a: &LocalizationDatum, b: &LocalizationDatum) -> LocalizationDatum {
    assert_eq!(a.i_anti, b.i_anti);
    let c_inv = GradedBasis::concat(&[("a.", &a.c_inv), ("b.", &b.c_inv)]).unwrap();
    let c_non = GradedBasis::concat(&[("a.", &a.c_non), ("b.", &b.c_non)]).unwrap();
    let len = a.higher_len().max(b.higher_len());
    let mut s = LocalizationDatum::zero(c_inv, c_non, a.i_anti);
    s.d_inv = block_diag(&a.d_inv, &b.d_inv);
    s.d_non = block_diag(&a.d_non, &b.d_non);
    s.u = block_diag(&a.u, &b.u);
    s.d1 = block_diag(&a.d1, &b.d1);
    s.d2 = block_diag(&a.d2, &b.d2);
    s.d1_higher = (0..=len).map(|k| block_diag(&a.d1_at(k), &b.d1_at(k))).collect();
    s.x = (0..=len).map(|k| block_diag(&a.x_at(k), &b.x_at(k))).collect();
    s.s1 = (0..=len).map(|k| block_diag(&a.s1_at(k), &b.s1_at(k))).collect();
    s
}

/// Bundled data, their direct sums where gradings allow, and random
/// free-action data.
pub fn datum_suite(seed: u64, random: usize) -> Vec<(String, LocalizationDatum)> {
    let bundled = bundled_data();
    let mut out = bundled.clone();
    for (na, a) in &bundled {
        for (nb, b) in &bundled {
            if na < nb && a.i_anti == b.i_anti {
                out.push((format!("{na}+{nb}"), direct_sum(a, b)));
            }
        }
    }
    let mut r = rng(seed);
    for k in 0..random {
        let mut f = random_free_datum(&mut r);
        let (nb, b) = &bundled[k % bundled.len()];
        f.i_anti = b.i_anti;
        out.push((format!("{nb}+free#{k}"), direct_sum(b, &f)));
        out.push((format!("free#{k}"), f));
    }
    out
}
