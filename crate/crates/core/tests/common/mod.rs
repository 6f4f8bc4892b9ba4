#![allow(dead_code)]

use std::collections::BTreeMap;

use floer_lasagna::grid::{parse_grid, GridDiagram};

pub type Poly = BTreeMap<Vec<i64>, i64>;

pub fn grid(name: &str) -> GridDiagram {
    let path = format!("{}/data/grids/{name}.grid", env!("CARGO_MANIFEST_DIR"));
    parse_grid(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

pub const CORPUS: [&str; 7] = ["unknot", "unlink2", "unlink3", "trefoil", "figure_eight", "hopf", "l2"];

/// Product of polynomials given as (doubled exponents, coefficient) lists,
/// expanded with plain nested loops.
pub fn expand(arity: usize, factors: &[Vec<(Vec<i64>, i64)>]) -> Poly {
    let mut acc: Poly = BTreeMap::from([(vec![0; arity], 1)]);
    for f in factors {
        let mut next: Poly = BTreeMap::new();
        for (e, c) in &acc {
            for (g, d) in f {
                let k: Vec<i64> = e.iter().zip(g).map(|(a, b)| a + b).collect();
                *next.entry(k).or_default() += c * d;
            }
        }
        next.retain(|_, c| *c != 0);
        acc = next;
    }
    acc
}

/// `x_i^{1/2} - x_i^{-1/2}` in doubled exponents.
pub fn binom(arity: usize, i: usize) -> Vec<(Vec<i64>, i64)> {
    let mut hi = vec![0; arity];
    let mut lo = vec![0; arity];
    hi[i] = 1;
    lo[i] = -1;
    vec![(hi, 1), (lo, -1)]
}

pub fn knot(terms: &[(i64, i64)]) -> Vec<(Vec<i64>, i64)> {
    terms.iter().map(|&(e, c)| (vec![2 * e], c)).collect()
}

pub fn equal_up_to_sign(a: &Poly, b: &Poly) -> bool {
    a == b || (a.len() == b.len() && a.iter().all(|(k, c)| b.get(k) == Some(&-c)))
}

/// Expected Euler characteristic of the tilde complex of each corpus grid.
pub fn expected_complex_euler(name: &str) -> Poly {
    let b = |n: usize, i: usize, k: usize| std::iter::repeat_n(binom(n, i), k).collect::<Vec<_>>();
    match name {
        "unknot" => expand(1, &b(1, 0, 1)),
        "trefoil" => expand(1, &[b(1, 0, 4), vec![knot(&[(1, 1), (0, -1), (-1, 1)])]].concat()),
        "figure_eight" => expand(1, &[b(1, 0, 5), vec![knot(&[(1, -1), (0, 3), (-1, -1)])]].concat()),
        "unlink2" | "unlink3" => Poly::new(),
        "hopf" => expand(2, &[b(2, 0, 2), b(2, 1, 2)].concat()),
        "l2" => expand(3, &[b(3, 0, 3), b(3, 1, 2), b(3, 2, 2)].concat()),
        _ => panic!("no oracle for {name}"),
    }
}
