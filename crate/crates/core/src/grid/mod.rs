//! Grid diagrams and their tilde complex.
//!
//! Row `r` holds an O marker in column `o_perm[r]` and an X marker in column
//! `x_perm[r]`. O markers play the role of w basepoints and X markers of z
//! basepoints. The link runs from X to O along columns and from O to X along
//! rows.

mod complex;
pub mod moves;

pub use complex::{homology, tilde_differential, GridComplex};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graded::{GradedError, GradedModule, MultiGrading};
use crate::laurent::LaurentMV;

/// Largest grid size the state enumeration accepts.
pub const MAX_GRID_SIZE: usize = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("line {line}: {which} markers are not a permutation of 0..{n}")]
    NotAPermutation { line: usize, which: char, n: usize },
    #[error("row {row}: O and X markers share column {col}")]
    MarkerCollision { row: usize, col: usize },
    #[error("line {line}: {msg}")]
    MalformedFile { line: usize, msg: String },
    #[error("component labels disagree with the traced link: {0}")]
    ComponentMismatch(String),
    #[error("grid size {0} is outside 1..={MAX_GRID_SIZE}")]
    TooLarge(usize),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridDiagram {
    n: usize,
    o_perm: Vec<usize>,
    x_perm: Vec<usize>,
    component_of_row: Vec<usize>,
    n_components: usize,
}

impl GridDiagram {
    /// Builds a diagram with components labelled in order of first appearance by row.
    pub fn new(o_perm: Vec<usize>, x_perm: Vec<usize>) -> Result<Self, GridError> {
        Self::build(o_perm, x_perm, None, 0)
    }

    /// Builds a diagram with caller-chosen component labels, checked against the traced link.
    pub fn with_components(
        o_perm: Vec<usize>,
        x_perm: Vec<usize>,
        labels: Vec<usize>,
    ) -> Result<Self, GridError> {
        Self::build(o_perm, x_perm, Some(labels), 0)
    }

    fn build(
        o_perm: Vec<usize>,
        x_perm: Vec<usize>,
        labels: Option<Vec<usize>>,
        line_base: usize,
    ) -> Result<Self, GridError> {
        let n = o_perm.len();
        if n == 0 || n > MAX_GRID_SIZE {
            return Err(GridError::TooLarge(n));
        }
        if !is_permutation(&o_perm) {
            return Err(GridError::NotAPermutation { line: line_base + 2, which: 'O', n });
        }
        if x_perm.len() != n || !is_permutation(&x_perm) {
            return Err(GridError::NotAPermutation { line: line_base + 3, which: 'X', n });
        }
        if let Some(row) = (0..n).find(|&r| o_perm[r] == x_perm[r]) {
            return Err(GridError::MarkerCollision { row, col: o_perm[row] });
        }
        let traced = trace_components(&o_perm, &x_perm);
        let component_of_row = match labels {
            None => traced,
            Some(l) => {
                check_labels(&traced, &l)?;
                l
            }
        };
        let n_components = component_of_row.iter().max().map_or(0, |m| m + 1);
        Ok(GridDiagram { n, o_perm, x_perm, component_of_row, n_components })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn o_perm(&self) -> &[usize] {
        &self.o_perm
    }

    pub fn x_perm(&self) -> &[usize] {
        &self.x_perm
    }

    pub fn component_of_row(&self) -> &[usize] {
        &self.component_of_row
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    /// Number of O markers (equivalently X markers) on each component.
    pub fn markers_per_component(&self) -> Vec<usize> {
        let mut c = vec![0; self.n_components];
        for &l in &self.component_of_row {
            c[l] += 1;
        }
        c
    }

    /// Graded module of the tilde complex's homology.
    pub fn homology(&self) -> GradedModule {
        homology(self)
    }

    /// Link Floer homology with a single basepoint pair per component.
    pub fn extract_hfl(&self) -> Result<GradedModule, GridError> {
        self.extract_hfl_keep(&vec![1; self.n_components])
    }

    /// Link Floer homology keeping `pairs[c]` basepoint pairs on component `c`.
    ///
    /// The grid homology is that module tensored with one `V_c` factor per
    /// discarded marker pair, where `V_c` sits at `(0, +1/2)` and `(-1, -1/2)`
    /// in the slot of `c`.
    pub fn extract_hfl_keep(&self, pairs: &[usize]) -> Result<GradedModule, GridError> {
        let counts = self.markers_per_component();
        if pairs.len() != counts.len() || pairs.iter().zip(&counts).any(|(&p, &c)| p == 0 || p > c) {
            return Err(GridError::ComponentMismatch(format!(
                "cannot keep {pairs:?} pairs on components with {counts:?} markers"
            )));
        }
        let mut m = self.homology();
        for (c, (&have, &keep)) in counts.iter().zip(pairs).enumerate() {
            let (hi, lo) = v_factor_gradings(self.n_components, c);
            m = m.factor_out((&hi, &lo), have - keep)?;
        }
        Ok(m)
    }

    /// Sum over all generators of `(-1)^M x^A`.
    pub fn euler_characteristic(&self) -> LaurentMV {
        let cx = tilde_differential(self);
        let mut p = LaurentMV::zero(self.n_components);
        for g in cx.gradings() {
            p.add_term(g.alex.clone(), if g.maslov.rem_euclid(2) == 0 { 1 } else { -1 });
        }
        p
    }

    /// Euler characteristic of the link Floer homology with one pair per
    /// component, obtained by dividing out the extra-marker factors.
    pub fn hfl_euler_characteristic(&self) -> Option<LaurentMV> {
        let k = self.n_components;
        let extra = self
            .markers_per_component()
            .iter()
            .enumerate()
            .fold(LaurentMV::one(k), |acc, (c, &m)| acc.mul(&LaurentMV::half_binomial(k, c).pow(m - 1)));
        self.euler_characteristic().div_exact(&extra)
    }

    /// Serializes to the grid file format, always writing the components line.
    pub fn to_file_string(&self) -> String {
        let j = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        format!(
            "n {}\nO {}\nX {}\ncomponents {}\n",
            self.n,
            j(&self.o_perm),
            j(&self.x_perm),
            j(&self.component_of_row)
        )
    }
}

impl fmt::Display for GridDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in (0..self.n).rev() {
            let line: String = (0..self.n)
                .map(|c| {
                    if self.o_perm[r] == c {
                        'O'
                    } else if self.x_perm[r] == c {
                        'X'
                    } else {
                        '.'
                    }
                })
                .collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Gradings of the two generators of the extra-marker factor on component `c`.
pub fn v_factor_gradings(arity: usize, c: usize) -> (MultiGrading, MultiGrading) {
    let mut hi = MultiGrading::zero(arity);
    hi.alex[c] = 1;
    let mut lo = MultiGrading::new(-1, vec![0; arity]);
    lo.alex[c] = -1;
    (hi, lo)
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&v| v < p.len() && !std::mem::replace(&mut seen[v], true))
}

/// Labels rows by the cycle of `r -> o_inv[x_perm[r]]` through them.
fn trace_components(o_perm: &[usize], x_perm: &[usize]) -> Vec<usize> {
    let n = o_perm.len();
    let mut o_inv = vec![0; n];
    for (r, &c) in o_perm.iter().enumerate() {
        o_inv[c] = r;
    }
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut r = start;
        while comp[r] == usize::MAX {
            comp[r] = next;
            r = o_inv[x_perm[r]];
        }
        next += 1;
    }
    comp
}

fn check_labels(traced: &[usize], labels: &[usize]) -> Result<(), GridError> {
    if labels.len() != traced.len() {
        return Err(GridError::ComponentMismatch(format!(
            "{} labels for {} rows",
            labels.len(),
            traced.len()
        )));
    }
    let k = traced.iter().max().map_or(0, |m| m + 1);
    let mut map = vec![None; k];
    for (&t, &l) in traced.iter().zip(labels) {
        match map[t] {
            None => map[t] = Some(l),
            Some(prev) if prev != l => {
                return Err(GridError::ComponentMismatch(format!("one component carries labels {prev} and {l}")))
            }
            _ => {}
        }
    }
    let mut used: Vec<usize> = map.into_iter().flatten().collect();
    used.sort_unstable();
    if used != (0..k).collect::<Vec<_>>() {
        return Err(GridError::ComponentMismatch(format!("labels must be a bijection onto 0..{k}")));
    }
    Ok(())
}

/// Parses the text grid format:
///
/// ```text
/// n 2
/// O 1 0
/// X 0 1
/// components 0 0      (optional)
/// ```
pub fn parse_grid(text: &str) -> Result<GridDiagram, GridError> {
    let mut lines: Vec<&str> = text.lines().collect();
    while lines.last().is_some_and(|l| l.trim().is_empty()) {
        lines.pop();
    }
    if lines.len() < 3 || lines.len() > 4 {
        return Err(GridError::MalformedFile {
            line: lines.len().min(4) + 1,
            msg: format!("expected 3 or 4 lines, found {}", lines.len()),
        });
    }
    let field = |idx: usize, key: &str| -> Result<Vec<usize>, GridError> {
        let mut toks = lines[idx].split_whitespace();
        match toks.next() {
            Some(k) if k == key => {}
            other => {
                return Err(GridError::MalformedFile {
                    line: idx + 1,
                    msg: format!("expected `{key}`, found {:?}", other.unwrap_or("")),
                })
            }
        }
        toks.map(|t| {
            t.parse::<usize>().map_err(|_| GridError::MalformedFile {
                line: idx + 1,
                msg: format!("not a nonnegative integer: {t:?}"),
            })
        })
        .collect()
    };
    let n = field(0, "n")?;
    let [n] = n[..] else {
        return Err(GridError::MalformedFile { line: 1, msg: "`n` takes exactly one value".into() });
    };
    if n == 0 || n > MAX_GRID_SIZE {
        return Err(GridError::TooLarge(n));
    }
    let o = field(1, "O")?;
    let x = field(2, "X")?;
    for (line, v) in [(2, &o), (3, &x)] {
        if v.len() != n {
            return Err(GridError::MalformedFile { line, msg: format!("expected {n} entries, found {}", v.len()) });
        }
    }
    let labels = if lines.len() == 4 {
        let l = field(3, "components")?;
        if l.len() != n {
            return Err(GridError::MalformedFile { line: 4, msg: format!("expected {n} labels, found {}", l.len()) });
        }
        Some(l)
    } else {
        None
    };
    GridDiagram::build(o, x, labels, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_unknot() {
        let g = parse_grid("n 2\nO 1 0\nX 0 1\n").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.n_components(), 1);
        assert_eq!(g.markers_per_component(), vec![2]);
    }

    #[test]
    fn parse_block_unlink() {
        let g = parse_grid("n 4\nO 1 0 3 2\nX 0 1 2 3").unwrap();
        assert_eq!(g.n_components(), 2);
        assert_eq!(g.component_of_row(), &[0, 0, 1, 1]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_grid("n 2\nO 0 0\nX 0 1\n"), Err(GridError::NotAPermutation { line: 2, .. })));
        assert!(matches!(parse_grid("n 2\nO 1 0\nX 1 0\n"), Err(GridError::MarkerCollision { row: 0, .. })));
        assert!(matches!(parse_grid("n 2\nO 1 0\n"), Err(GridError::MalformedFile { .. })));
        assert!(matches!(parse_grid("n 2\nO 1 0\nX 0 1\nfoo\n"), Err(GridError::MalformedFile { line: 4, .. })));
        assert!(matches!(parse_grid("n 2\nO 1 0\nX 0 1 5\n"), Err(GridError::MalformedFile { line: 3, .. })));
        assert!(matches!(parse_grid("n 2\nO 1 a\nX 0 1\n"), Err(GridError::MalformedFile { line: 2, .. })));
        assert!(matches!(parse_grid("n 2 3\nO 1 0\nX 0 1\n"), Err(GridError::MalformedFile { line: 1, .. })));
        assert!(matches!(
            parse_grid("n 4\nO 1 0 3 2\nX 0 1 2 3\ncomponents 0 1 1 0\n"),
            Err(GridError::ComponentMismatch(_))
        ));
        assert!(matches!(
            parse_grid("n 4\nO 1 0 3 2\nX 0 1 2 3\ncomponents 0 0 2 2\n"),
            Err(GridError::ComponentMismatch(_))
        ));
    }

    #[test]
    fn explicit_labels_accepted() {
        let g = parse_grid("n 4\nO 1 0 3 2\nX 0 1 2 3\ncomponents 1 1 0 0\n").unwrap();
        assert_eq!(g.component_of_row(), &[1, 1, 0, 0]);
        assert_eq!(parse_grid(&g.to_file_string()).unwrap(), g);
    }
}
