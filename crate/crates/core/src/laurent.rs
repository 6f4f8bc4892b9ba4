//! Multivariable Laurent polynomials with integer coefficients and
//! half-integer exponents (stored doubled).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graded::GradedDims;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentMV {
    arity: usize,
    /// Doubled exponent vector -> nonzero coefficient.
    terms: BTreeMap<Vec<i64>, i64>,
}

impl LaurentMV {
    pub fn zero(arity: usize) -> Self {
        LaurentMV { arity, terms: BTreeMap::new() }
    }

    pub fn one(arity: usize) -> Self {
        Self::monomial(vec![0; arity], 1)
    }

    pub fn monomial(doubled_exps: Vec<i64>, coeff: i64) -> Self {
        let mut p = LaurentMV::zero(doubled_exps.len());
        p.add_term(doubled_exps, coeff);
        p
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Vec<i64>, i64)>) -> Self {
        let mut p = LaurentMV::zero(arity);
        for (e, c) in terms {
            assert_eq!(e.len(), arity, "exponent arity");
            p.add_term(e, c);
        }
        p
    }

    /// `x_i^{1/2} - x_i^{-1/2}`.
    pub fn half_binomial(arity: usize, i: usize) -> Self {
        let mut up = vec![0; arity];
        up[i] = 1;
        let mut down = vec![0; arity];
        down[i] = -1;
        LaurentMV::from_terms(arity, [(up, 1), (down, -1)])
    }

    /// Graded Euler characteristic `sum (-1)^M dim x^A` of graded dimensions.
    pub fn euler_of(arity: usize, dims: &GradedDims) -> Self {
        let mut p = LaurentMV::zero(arity);
        for (g, &d) in dims {
            let sign = if g.maslov.rem_euclid(2) == 0 { 1 } else { -1 };
            p.add_term(g.alex.clone(), sign * d as i64);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, doubled_exps: &[i64]) -> i64 {
        self.terms.get(doubled_exps).copied().unwrap_or(0)
    }

    /// Sum of absolute values of coefficients.
    pub fn l1_norm(&self) -> u64 {
        self.terms.values().map(|c| c.unsigned_abs()).sum()
    }

    pub fn add_term(&mut self, doubled_exps: Vec<i64>, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let e = self.terms.entry(doubled_exps.clone()).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.remove(&doubled_exps);
        }
    }

    pub fn add(&self, other: &LaurentMV) -> LaurentMV {
        assert_eq!(self.arity, other.arity);
        let mut p = self.clone();
        for (e, &c) in &other.terms {
            p.add_term(e.clone(), c);
        }
        p
    }

    pub fn scale(&self, k: i64) -> LaurentMV {
        LaurentMV::from_terms(self.arity, self.terms.iter().map(|(e, &c)| (e.clone(), c * k)))
    }

    pub fn sub(&self, other: &LaurentMV) -> LaurentMV {
        self.add(&other.scale(-1))
    }

    pub fn mul(&self, other: &LaurentMV) -> LaurentMV {
        assert_eq!(self.arity, other.arity);
        let mut p = LaurentMV::zero(self.arity);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                p.add_term(e1.iter().zip(e2).map(|(a, b)| a + b).collect(), c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, k: usize) -> LaurentMV {
        (0..k).fold(LaurentMV::one(self.arity), |acc, _| acc.mul(self))
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &LaurentMV) -> Option<LaurentMV> {
        assert_eq!(self.arity, d.arity);
        let (lead_e, &lead_c) = d.terms.iter().next_back()?;
        let low_d = d.terms.keys().next()?;
        let mut q = LaurentMV::zero(self.arity);
        let mut r = self.clone();
        let floor = match self.terms.keys().next() {
            Some(low) => sub_vec(low, low_d),
            None => return Some(q),
        };
        while let Some((e, &c)) = r.terms.iter().next_back() {
            if c % lead_c != 0 {
                return None;
            }
            let qe = sub_vec(e, lead_e);
            if qe < floor {
                return None;
            }
            let t = LaurentMV::monomial(qe, c / lead_c);
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Sums exponents within each group of variables.
    pub fn collapse(&self, groups: &[Vec<usize>]) -> LaurentMV {
        LaurentMV::from_terms(
            groups.len(),
            self.terms.iter().map(|(e, &c)| (groups.iter().map(|g| g.iter().map(|&i| e[i]).sum()).collect(), c)),
        )
    }

    /// Sends every exponent vector to its negative.
    pub fn conjugate(&self) -> LaurentMV {
        LaurentMV::from_terms(self.arity, self.terms.iter().map(|(e, &c)| (e.iter().map(|x| -x).collect(), c)))
    }

    /// Equal up to multiplication by `±1`.
    pub fn eq_up_to_sign(&self, other: &LaurentMV) -> bool {
        self == other || *self == other.scale(-1)
    }
}

fn sub_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn fmt_exp(e: i64) -> String {
    if e % 2 == 0 {
        (e / 2).to_string()
    } else {
        format!("{e}/2")
    }
}

impl fmt::Display for LaurentMV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, &c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| if x == 2 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, fmt_exp(x)) })
                .collect();
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            if !first {
                f.write_str(" ")?;
            }
            let mag = c.abs();
            let body = match (mono.is_empty(), mag) {
                (true, m) => m.to_string(),
                (false, 1) => mono.join("*"),
                (false, m) => format!("{m}*{}", mono.join("*")),
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, "{sign} {body}")?;
            }
            first = false;
        }
        Ok(())
    }
}
