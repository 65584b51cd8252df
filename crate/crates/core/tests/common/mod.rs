//! Brute-force oracles and random instance generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use mo8_quotients::coeffs::BaseRing;
use mo8_quotients::graded::{Generator, PresentedRing};
use rand::Rng;

pub const ORACLE_PRIME: u64 = 10007;
pub const NAMES: [&str; 3] = ["a", "b", "c"];

/// Exponent vector -> coefficient.
pub type Poly = BTreeMap<Vec<u32>, i64>;

/// All exponent vectors of weighted degree `d`.
pub fn weighted_monomials(degrees: &[u32], d: u32) -> Vec<Vec<u32>> {
    fn go(degrees: &[u32], left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let Some((&w, rest)) = degrees.split_first() else {
            if left == 0 {
                out.push(prefix.clone());
            }
            return;
        };
        for e in 0..=left / w {
            prefix.push(e);
            go(rest, left - e * w, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(degrees, d, &mut Vec::new(), &mut out);
    out
}

/// Hilbert function of the polynomial ring on `degrees`, `0..=bound`.
pub fn hilbert(degrees: &[u32], bound: u32) -> Vec<i64> {
    (0..=bound).map(|d| weighted_monomials(degrees, d).len() as i64).collect()
}

/// Rank of an integer matrix reduced mod `p`.
pub fn rank_mod_p(mut rows: Vec<Vec<i64>>, p: u64) -> usize {
    let p = p as i64;
    for row in rows.iter_mut() {
        for v in row.iter_mut() {
            *v = v.rem_euclid(p);
        }
    }
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, pivot);
        let inv = pow_mod(rows[rank][col], p - 2, p);
        for v in rows[rank].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in 0..ncols {
                    rows[r][c] = (rows[r][c] - f * rows[rank][c]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: i64, mut e: i64, p: i64) -> i64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn poly_degree(degrees: &[u32], f: &Poly) -> Option<u32> {
    f.keys().next().map(|m| m.iter().zip(degrees).map(|(e, w)| e * w).sum())
}

/// Total dimensions of Koszul homology of `xs` on the polynomial ring, graded so that
/// `f e_I` with `f` of degree `a` sits in degree `a + sum(deg x_j + 1)`.
pub fn koszul_dimensions(degrees: &[u32], xs: &[(Poly, u32)], p: u64, bound: u32) -> Vec<i64> {
    let r = xs.len();
    let subsets: Vec<Vec<usize>> = (0..1u32 << r)
        .map(|mask| (0..r).filter(|j| mask & (1 << j) != 0).collect())
        .collect();
    let internal = |s: &[usize]| s.iter().map(|&j| xs[j].1).sum::<u32>();
    // Basis of K_i in internal degree m: (subset, monomial).
    let basis = |i: usize, m: u32| -> Vec<(usize, Vec<u32>)> {
        let mut out = Vec::new();
        for (si, s) in subsets.iter().enumerate() {
            if s.len() == i && internal(s) <= m {
                for mono in weighted_monomials(degrees, m - internal(s)) {
                    out.push((si, mono));
                }
            }
        }
        out
    };
    // Rank of d_i: K_i -> K_{i-1} in internal degree m.
    let rank_d = |i: usize, m: u32| -> usize {
        if i == 0 || i > r {
            return 0;
        }
        let src = basis(i, m);
        let dst = basis(i - 1, m);
        if src.is_empty() || dst.is_empty() {
            return 0;
        }
        let index: BTreeMap<(usize, Vec<u32>), usize> = dst.iter().cloned().enumerate().map(|(k, v)| (v, k)).collect();
        let rows = src
            .iter()
            .map(|(si, mono)| {
                let mut row = vec![0i64; dst.len()];
                let s = &subsets[*si];
                for (pos, &j) in s.iter().enumerate() {
                    let sign = if pos % 2 == 0 { 1 } else { -1 };
                    let rest: Vec<usize> = s.iter().copied().filter(|&t| t != j).collect();
                    let ri = subsets.iter().position(|t| *t == rest).unwrap();
                    for (fm, c) in &xs[j].0 {
                        let prod: Vec<u32> = mono.iter().zip(fm).map(|(a, b)| a + b).collect();
                        let k = index[&(ri, prod)];
                        row[k] = (row[k] + sign * c).rem_euclid(p as i64);
                    }
                }
                row
            })
            .collect();
        rank_mod_p(rows, p)
    };
    (0..=bound)
        .map(|k| {
            (0..=r.min(k as usize))
                .map(|i| {
                    let m = k - i as u32;
                    basis(i, m).len() as i64 - rank_d(i, m) as i64 - rank_d(i + 1, m) as i64
                })
                .sum()
        })
        .collect()
}

pub fn poly_string(names: &[&str], f: &Poly) -> String {
    if f.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in f.iter().enumerate() {
        let factors: Vec<String> = m
            .iter()
            .zip(names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| if *e == 1 { n.to_string() } else { format!("{n}^{e}") })
            .collect();
        let body = if factors.is_empty() { c.abs().to_string() } else { format!("{}*{}", c.abs(), factors.join("*")) };
        match (k, *c < 0) {
            (0, true) => out.push_str(&format!("-{body}")),
            (0, false) => out.push_str(&body),
            (_, true) => out.push_str(&format!(" - {body}")),
            (_, false) => out.push_str(&format!(" + {body}")),
        }
    }
    out
}

/// A homogeneous polynomial of degree `d`; each monomial appears with probability `density`.
pub fn random_poly(rng: &mut impl Rng, degrees: &[u32], d: u32, coeffs: (i64, i64), density: f64) -> Poly {
    let mut f = Poly::new();
    for m in weighted_monomials(degrees, d) {
        if rng.gen_bool(density) {
            let c = rng.gen_range(coeffs.0..=coeffs.1);
            if c != 0 {
                f.insert(m, c);
            }
        }
    }
    f
}

pub fn random_degrees(rng: &mut impl Rng, max_gens: usize, choices: &[u32]) -> Vec<u32> {
    let n = rng.gen_range(1..=max_gens);
    (0..n).map(|_| choices[rng.gen_range(0..choices.len())]).collect()
}

pub fn polynomial_ring(base: BaseRing, degrees: &[u32], bound: u32) -> Arc<PresentedRing> {
    let gens = degrees.iter().zip(NAMES).map(|(&d, n)| Generator::new(n, d)).collect();
    Arc::new(PresentedRing::polynomial(base, gens, bound).unwrap())
}

/// Polynomial product truncated at `bound`.
pub fn series_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < out.len() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

pub fn degree_of(degrees: &[u32], f: &Poly) -> Option<u32> {
    poly_degree(degrees, f)
}

pub fn banner(index: u32, name: &str, pass: bool, detail: &str) {
    println!("ACCEPTANCE [{index:>2}] {} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
}
