use std::collections::BTreeMap;

use rayon::prelude::*;

use super::GridDiagram;
use crate::f2::{rank, F2Matrix, F2Vector};
use crate::graded::{GradedModule, MultiGrading};

/// The tilde grid complex: every state, its grading, and its boundary.
///
/// States are permutations listed in lexicographic order, so a state's index
/// is its Lehmer rank.
#[derive(Debug, Clone)]
pub struct GridComplex {
    n: usize,
    states: Vec<u8>,
    gradings: Vec<MultiGrading>,
    boundary: Vec<Vec<u32>>,
    blocks: BTreeMap<MultiGrading, Vec<usize>>,
    position: Vec<usize>,
}

impl GridComplex {
    pub fn n_states(&self) -> usize {
        self.gradings.len()
    }

    pub fn state(&self, i: usize) -> &[u8] {
        &self.states[i * self.n..(i + 1) * self.n]
    }

    pub fn grading(&self, i: usize) -> &MultiGrading {
        &self.gradings[i]
    }

    pub fn gradings(&self) -> &[MultiGrading] {
        &self.gradings
    }

    /// Indices of the states reached by empty rectangles, mod 2.
    pub fn boundary(&self, i: usize) -> &[u32] {
        &self.boundary[i]
    }

    pub fn blocks(&self) -> &BTreeMap<MultiGrading, Vec<usize>> {
        &self.blocks
    }

    pub fn index_of(&self, perm: &[u8]) -> usize {
        lehmer_rank(perm)
    }

    /// Differential restricted to the block at `g`, landing in the block one Maslov lower.
    pub fn block_matrix(&self, g: &MultiGrading) -> F2Matrix {
        let target = lower(g);
        let cols = self.blocks.get(&target).map_or(0, Vec::len);
        let rows = self.blocks.get(g).map_or_else(Vec::new, |src| {
            src.iter()
                .map(|&s| F2Vector::from_indices(self.boundary[s].iter().map(|&t| self.position[t as usize])))
                .collect()
        });
        F2Matrix::new(cols, rows).expect("targets lie in the lower block")
    }

    /// The whole differential as an `n! x n!` matrix; rows are sources.
    pub fn full_matrix(&self) -> F2Matrix {
        let rows = self.boundary.iter().map(|b| F2Vector::from_indices(b.iter().map(|&t| t as usize))).collect();
        F2Matrix::new(self.n_states(), rows).expect("state indices in range")
    }

    pub fn d_squared_is_zero(&self) -> bool {
        (0..self.n_states()).into_par_iter().all(|s| {
            let two_step = self.boundary[s].iter().flat_map(|&t| self.boundary[t as usize].iter().map(|&u| u as usize));
            F2Vector::from_indices(two_step).is_zero()
        })
    }
}

fn lower(g: &MultiGrading) -> MultiGrading {
    MultiGrading { maslov: g.maslov - 1, alex: g.alex.clone() }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn lehmer_rank(perm: &[u8]) -> usize {
    let n = perm.len();
    let mut used = 0u32;
    let mut r = 0;
    for (i, &v) in perm.iter().enumerate() {
        let smaller_free = v as u32 - (used & ((1 << v) - 1)).count_ones();
        r += smaller_free as usize * factorial(n - 1 - i);
        used |= 1 << v;
    }
    r
}

fn next_permutation(p: &mut [u8]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else { return false };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Number of pairs `p in a`, `q in b` with `p` strictly south-west of `q`.
fn count_sw(a: &[(i64, i64)], b: &[(i64, i64)]) -> i64 {
    a.iter().map(|p| b.iter().filter(|q| p.0 < q.0 && p.1 < q.1).count() as i64).sum()
}

/// `2 J(a, b)`.
fn j2(a: &[(i64, i64)], b: &[(i64, i64)]) -> i64 {
    count_sw(a, b) + count_sw(b, a)
}

type Points = Vec<(i64, i64)>;

/// Precomputed marker data for the grading formulas, in doubled coordinates.
struct GradingData {
    o_pts: Points,
    /// Per component: (X points on it, O points on it, constant term).
    comps: Vec<(Points, Points, i64)>,
    m_const: i64,
}

impl GradingData {
    fn new(g: &GridDiagram) -> Self {
        let pts = |perm: &[usize], keep: &dyn Fn(usize) -> bool| -> Vec<(i64, i64)> {
            (0..g.n).filter(|&r| keep(r)).map(|r| (2 * perm[r] as i64 + 1, 2 * r as i64 + 1)).collect()
        };
        let o_pts = pts(&g.o_perm, &|_| true);
        let x_pts = pts(&g.x_perm, &|_| true);
        let comps = (0..g.n_components)
            .map(|c| {
                let on = |r: usize| g.component_of_row[r] == c;
                let xc = pts(&g.x_perm, &on);
                let oc = pts(&g.o_perm, &on);
                let k = j2(&x_pts, &xc) - j2(&x_pts, &oc) + j2(&o_pts, &xc) - j2(&o_pts, &oc);
                (xc, oc, k)
            })
            .collect();
        let m_const = count_sw(&o_pts, &o_pts) + 1;
        GradingData { o_pts, comps, m_const }
    }

    /// Maslov grading `M_O(x)` normalized so the unknot's top generator is 0, and
    /// doubled Alexander gradings `2 A_c = 2 J(x - (X+O)/2, X_c - O_c)`.
    fn grade(&self, perm: &[u8]) -> MultiGrading {
        let x: Vec<(i64, i64)> = perm.iter().enumerate().map(|(i, &p)| (2 * i as i64, 2 * p as i64)).collect();
        let maslov = count_sw(&x, &x) - j2(&x, &self.o_pts) + self.m_const;
        let alex = self
            .comps
            .iter()
            .map(|(xc, oc, k)| {
                let four_a = 2 * (j2(&x, xc) - j2(&x, oc)) - k;
                debug_assert_eq!(four_a % 2, 0);
                four_a / 2
            })
            .collect();
        MultiGrading { maslov, alex }
    }
}

/// Targets of empty rectangles out of `p` that avoid every marker.
fn rectangles(g: &GridDiagram, p: &[u8]) -> Vec<Vec<u8>> {
    let n = g.n;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let w = (j + n - i) % n;
            let h = (p[j] as usize + n - p[i] as usize) % n;
            let in_cols = |c: usize| (c + n - i) % n < w;
            let in_rows = |r: usize| (r + n - p[i] as usize) % n < h;
            let blocked = (1..w).any(|t| in_rows(p[(i + t) % n] as usize))
                || (0..h).any(|t| {
                    let r = (p[i] as usize + t) % n;
                    in_cols(g.o_perm[r]) || in_cols(g.x_perm[r])
                });
            if !blocked {
                let mut y = p.to_vec();
                y.swap(i, j);
                out.push(y);
            }
        }
    }
    out
}

/// Builds the complex, checking that every rectangle lowers Maslov by one and
/// preserves every Alexander grading.
pub fn tilde_differential(g: &GridDiagram) -> GridComplex {
    let n = g.n;
    let total = factorial(n);
    let mut states = Vec::with_capacity(total * n);
    let mut p: Vec<u8> = (0..n as u8).collect();
    loop {
        states.extend_from_slice(&p);
        if !next_permutation(&mut p) {
            break;
        }
    }
    let data = GradingData::new(g);
    let gradings: Vec<MultiGrading> = states.par_chunks(n).map(|s| data.grade(s)).collect();
    let boundary: Vec<Vec<u32>> = states
        .par_chunks(n)
        .enumerate()
        .map(|(s, perm)| {
            let idx = rectangles(g, perm).into_iter().map(|y| lehmer_rank(&y));
            let v = F2Vector::from_indices(idx);
            for &t in v.support() {
                assert_eq!(
                    gradings[t],
                    lower(&gradings[s]),
                    "rectangle from state {s} changes the grading incorrectly"
                );
            }
            v.support().iter().map(|&t| t as u32).collect()
        })
        .collect();
    let mut blocks: BTreeMap<MultiGrading, Vec<usize>> = BTreeMap::new();
    let mut position = vec![0; total];
    for (s, gr) in gradings.iter().enumerate() {
        let b = blocks.entry(gr.clone()).or_default();
        position[s] = b.len();
        b.push(s);
    }
    GridComplex { n, states, gradings, boundary, blocks, position }
}

/// Graded dimensions of the tilde homology, computed blockwise.
pub fn homology(g: &GridDiagram) -> GradedModule {
    let cx = tilde_differential(g);
    assert!(cx.d_squared_is_zero(), "grid differential does not square to zero");
    homology_of(&cx, g.n_components())
}

pub(crate) fn homology_of(cx: &GridComplex, arity: usize) -> GradedModule {
    let keys: Vec<&MultiGrading> = cx.blocks.keys().collect();
    let ranks: BTreeMap<MultiGrading, usize> =
        keys.par_iter().map(|k| ((*k).clone(), rank(&cx.block_matrix(k)))).collect::<Vec<_>>().into_iter().collect();
    let mut dims = BTreeMap::new();
    for (k, members) in &cx.blocks {
        let above = MultiGrading { maslov: k.maslov + 1, alex: k.alex.clone() };
        let d = members.len() - ranks[k] - ranks.get(&above).copied().unwrap_or(0);
        if d > 0 {
            dims.insert(k.clone(), d);
        }
    }
    GradedModule::from_dims(arity, &dims, "h").expect("arity matches")
}
