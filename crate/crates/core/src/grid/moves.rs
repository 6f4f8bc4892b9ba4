//! Grid moves that preserve the link type: cyclic permutation, commutation
//! and stabilization. Component labels travel with their rows.

use super::{GridDiagram, GridError};

/// Moves the top `k` rows to the bottom (cyclically).
pub fn cyclic_shift_rows(g: &GridDiagram, k: usize) -> GridDiagram {
    let n = g.n;
    let rot = |v: &[usize]| (0..n).map(|r| v[(r + k) % n]).collect::<Vec<_>>();
    GridDiagram::with_components(rot(&g.o_perm), rot(&g.x_perm), rot(&g.component_of_row))
        .expect("cyclic shifts preserve validity")
}

/// Translates every marker `k` columns to the right (cyclically).
pub fn cyclic_shift_cols(g: &GridDiagram, k: usize) -> GridDiagram {
    let n = g.n;
    let sh = |v: &[usize]| v.iter().map(|c| (c + k) % n).collect::<Vec<_>>();
    GridDiagram::with_components(sh(&g.o_perm), sh(&g.x_perm), g.component_of_row.clone())
        .expect("cyclic shifts preserve validity")
}

fn interleaved(a: (usize, usize), b: (usize, usize)) -> bool {
    let (a0, a1) = (a.0.min(a.1), a.0.max(a.1));
    let (b0, b1) = (b.0.min(b.1), b.0.max(b.1));
    let shared = a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1;
    let strictly_inside = |x: usize, lo: usize, hi: usize| lo < x && x < hi;
    shared || (strictly_inside(b0, a0, a1) != strictly_inside(b1, a0, a1))
}

/// Swaps columns `c` and `c + 1` when their marker segments do not interleave.
pub fn commute_cols(g: &GridDiagram, c: usize) -> Option<GridDiagram> {
    if c + 1 >= g.n {
        return None;
    }
    let rows_of = |col: usize| {
        let o = g.o_perm.iter().position(|&x| x == col).unwrap();
        let x = g.x_perm.iter().position(|&x| x == col).unwrap();
        (o, x)
    };
    if interleaved(rows_of(c), rows_of(c + 1)) {
        return None;
    }
    let sw = |v: &[usize]| {
        v.iter().map(|&x| if x == c { c + 1 } else if x == c + 1 { c } else { x }).collect::<Vec<_>>()
    };
    GridDiagram::with_components(sw(&g.o_perm), sw(&g.x_perm), g.component_of_row.clone()).ok()
}

/// Swaps rows `r` and `r + 1` when their marker segments do not interleave.
pub fn commute_rows(g: &GridDiagram, r: usize) -> Option<GridDiagram> {
    if r + 1 >= g.n {
        return None;
    }
    let seg = |row: usize| (g.o_perm[row], g.x_perm[row]);
    if interleaved(seg(r), seg(r + 1)) {
        return None;
    }
    let mut o = g.o_perm.clone();
    let mut x = g.x_perm.clone();
    let mut l = g.component_of_row.clone();
    o.swap(r, r + 1);
    x.swap(r, r + 1);
    l.swap(r, r + 1);
    GridDiagram::with_components(o, x, l).ok()
}

/// Stabilizes at the X marker of row `r`: a new row and column are inserted
/// just above and to the right of it, replacing the X by an X-O-X corner.
pub fn stabilize_at_x(g: &GridDiagram, r: usize) -> Result<GridDiagram, GridError> {
    let n = g.n;
    if r >= n {
        return Err(GridError::ComponentMismatch(format!("row {r} out of range")));
    }
    let c = g.x_perm[r];
    let shift_col = |col: usize| if col > c { col + 1 } else { col };
    let mut o = Vec::with_capacity(n + 1);
    let mut x = Vec::with_capacity(n + 1);
    let mut l = Vec::with_capacity(n + 1);
    for row in 0..n {
        o.push(shift_col(g.o_perm[row]));
        x.push(if row == r { c + 1 } else { shift_col(g.x_perm[row]) });
        l.push(g.component_of_row[row]);
        if row == r {
            o.push(c + 1);
            x.push(c);
            l.push(g.component_of_row[row]);
        }
    }
    GridDiagram::with_components(o, x, l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stabilized_unknot_is_still_one_component() {
        let g = GridDiagram::new(vec![1, 0], vec![0, 1]).unwrap();
        for r in 0..2 {
            let s = stabilize_at_x(&g, r).unwrap();
            assert_eq!(s.n(), 3);
            assert_eq!(s.n_components(), 1);
        }
    }

    #[test]
    fn interleaving_detection() {
        assert!(interleaved((0, 2), (1, 3)));
        assert!(!interleaved((0, 3), (1, 2)));
        assert!(!interleaved((0, 1), (2, 3)));
        assert!(interleaved((0, 1), (1, 3)));
    }
}
