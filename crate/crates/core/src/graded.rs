//! Multigraded F2 vector spaces.
//!
//! A module is a labelled basis with a (Maslov, Alexander...) grading per
//! element. Alexander gradings are half-integers and are stored doubled.
//! Two modules are considered isomorphic when their graded dimensions agree.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error("alexander arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),
    #[error("Poincare polynomial is not divisible: {0}")]
    NotDivisible(String),
    #[error("invalid slot partition: {0}")]
    InvalidPartition(String),
    #[error("malformed grading key {0:?}")]
    BadKey(String),
}

/// A Maslov grading plus doubled Alexander gradings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiGrading {
    pub maslov: i64,
    /// `2 * A_i` for each slot.
    pub alex: Vec<i64>,
}

impl MultiGrading {
    pub fn new(maslov: i64, alex: Vec<i64>) -> Self {
        MultiGrading { maslov, alex }
    }

    pub fn zero(arity: usize) -> Self {
        MultiGrading { maslov: 0, alex: vec![0; arity] }
    }

    pub fn arity(&self) -> usize {
        self.alex.len()
    }

    pub fn add(&self, other: &MultiGrading) -> MultiGrading {
        debug_assert_eq!(self.arity(), other.arity());
        MultiGrading {
            maslov: self.maslov + other.maslov,
            alex: self.alex.iter().zip(&other.alex).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &MultiGrading) -> MultiGrading {
        debug_assert_eq!(self.arity(), other.arity());
        MultiGrading {
            maslov: self.maslov - other.maslov,
            alex: self.alex.iter().zip(&other.alex).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn concat(&self, other: &MultiGrading) -> MultiGrading {
        let mut alex = self.alex.clone();
        alex.extend_from_slice(&other.alex);
        MultiGrading { maslov: self.maslov + other.maslov, alex }
    }

    /// Canonical text key `(M;2A1,2A2,...)`.
    pub fn key(&self) -> String {
        let a: Vec<String> = self.alex.iter().map(i64::to_string).collect();
        format!("({};{})", self.maslov, a.join(","))
    }

    pub fn from_key(s: &str) -> Result<Self, GradedError> {
        let bad = || GradedError::BadKey(s.to_string());
        let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
        let (m, a) = inner.split_once(';').ok_or_else(bad)?;
        let maslov = m.trim().parse().map_err(|_| bad())?;
        let alex = if a.trim().is_empty() {
            Vec::new()
        } else {
            a.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
        };
        Ok(MultiGrading { maslov, alex })
    }
}

impl fmt::Display for MultiGrading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// Graded dimensions, i.e. the Poincare polynomial with nonnegative coefficients.
pub type GradedDims = BTreeMap<MultiGrading, usize>;

/// How Alexander slots combine in a tensor product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorMode {
    /// Slots of the second factor are appended after those of the first.
    Concatenate,
    /// Both factors share the same slots; gradings add.
    Add,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedModule {
    alex_arity: usize,
    basis: Vec<(String, MultiGrading)>,
}

impl GradedModule {
    pub fn new(alex_arity: usize) -> Self {
        GradedModule { alex_arity, basis: Vec::new() }
    }

    pub fn from_basis<S: Into<String>>(
        alex_arity: usize,
        basis: impl IntoIterator<Item = (S, MultiGrading)>,
    ) -> Result<Self, GradedError> {
        let mut m = GradedModule::new(alex_arity);
        for (l, g) in basis {
            m.push(l, g)?;
        }
        Ok(m)
    }

    /// A module with the given graded dimensions and labels `{prefix}{i}`.
    pub fn from_dims(alex_arity: usize, dims: &GradedDims, prefix: &str) -> Result<Self, GradedError> {
        let mut m = GradedModule::new(alex_arity);
        let mut i = 0;
        for (g, &d) in dims {
            for _ in 0..d {
                m.push(format!("{prefix}{i}"), g.clone())?;
                i += 1;
            }
        }
        Ok(m)
    }

    /// The one-dimensional module at grading zero.
    pub fn unit(alex_arity: usize) -> Self {
        GradedModule { alex_arity, basis: vec![("1".to_string(), MultiGrading::zero(alex_arity))] }
    }

    pub fn push(&mut self, label: impl Into<String>, grading: MultiGrading) -> Result<(), GradedError> {
        let label = label.into();
        if grading.arity() != self.alex_arity {
            return Err(GradedError::ArityMismatch { expected: self.alex_arity, found: grading.arity() });
        }
        if self.basis.iter().any(|(l, _)| *l == label) {
            return Err(GradedError::DuplicateLabel(label));
        }
        self.basis.push((label, grading));
        Ok(())
    }

    pub fn alex_arity(&self) -> usize {
        self.alex_arity
    }

    pub fn basis(&self) -> &[(String, MultiGrading)] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn graded_dims(&self) -> GradedDims {
        let mut d = GradedDims::new();
        for (_, g) in &self.basis {
            *d.entry(g.clone()).or_insert(0) += 1;
        }
        d
    }

    pub fn dim_at(&self, g: &MultiGrading) -> usize {
        self.basis.iter().filter(|(_, h)| h == g).count()
    }

    /// Dimensions per Maslov grading, forgetting Alexander data.
    pub fn maslov_dims(&self) -> BTreeMap<i64, usize> {
        let mut d = BTreeMap::new();
        for (_, g) in &self.basis {
            *d.entry(g.maslov).or_insert(0) += 1;
        }
        d
    }

    pub fn max_maslov(&self) -> Option<i64> {
        self.basis.iter().map(|(_, g)| g.maslov).max()
    }

    pub fn same_dims(&self, other: &GradedModule) -> bool {
        self.alex_arity == other.alex_arity && self.graded_dims() == other.graded_dims()
    }

    pub fn tensor(&self, other: &GradedModule, mode: TensorMode) -> Result<GradedModule, GradedError> {
        let arity = match mode {
            TensorMode::Concatenate => self.alex_arity + other.alex_arity,
            TensorMode::Add => {
                if self.alex_arity != other.alex_arity {
                    return Err(GradedError::ArityMismatch {
                        expected: self.alex_arity,
                        found: other.alex_arity,
                    });
                }
                self.alex_arity
            }
        };
        let mut basis = Vec::with_capacity(self.dim() * other.dim());
        for (la, ga) in &self.basis {
            for (lb, gb) in &other.basis {
                let g = match mode {
                    TensorMode::Concatenate => ga.concat(gb),
                    TensorMode::Add => ga.add(gb),
                };
                basis.push((format!("{la}⊗{lb}"), g));
            }
        }
        Ok(GradedModule { alex_arity: arity, basis })
    }

    pub fn tensor_power(&self, k: usize) -> GradedModule {
        let mut acc = GradedModule::unit(self.alex_arity);
        for _ in 0..k {
            acc = acc.tensor(self, TensorMode::Add).expect("same arity");
        }
        acc
    }

    pub fn shift(&self, dm: i64, da: &[i64]) -> Result<GradedModule, GradedError> {
        if da.len() != self.alex_arity {
            return Err(GradedError::ArityMismatch { expected: self.alex_arity, found: da.len() });
        }
        let d = MultiGrading::new(dm, da.to_vec());
        Ok(GradedModule {
            alex_arity: self.alex_arity,
            basis: self.basis.iter().map(|(l, g)| (l.clone(), g.add(&d))).collect(),
        })
    }

    /// Divides the Poincare polynomial by `(x^{g1} + x^{g2})^multiplicity`.
    pub fn factor_out(
        &self,
        v: (&MultiGrading, &MultiGrading),
        multiplicity: usize,
    ) -> Result<GradedModule, GradedError> {
        for g in [v.0, v.1] {
            if g.arity() != self.alex_arity {
                return Err(GradedError::ArityMismatch { expected: self.alex_arity, found: g.arity() });
            }
        }
        let mut dims = self.graded_dims();
        for _ in 0..multiplicity {
            dims = divide_binomial(&dims, v.0, v.1)?;
        }
        GradedModule::from_dims(self.alex_arity, &dims, "f")
    }

    /// Sums Alexander slots within each group; groups must partition the slots.
    pub fn collapse_alexander(&self, groups: &[Vec<usize>]) -> Result<GradedModule, GradedError> {
        let mut seen = HashSet::new();
        for g in groups {
            if g.is_empty() {
                return Err(GradedError::InvalidPartition("empty group".into()));
            }
            for &s in g {
                if s >= self.alex_arity || !seen.insert(s) {
                    return Err(GradedError::InvalidPartition(format!("slot {s} out of range or repeated")));
                }
            }
        }
        if seen.len() != self.alex_arity {
            return Err(GradedError::InvalidPartition(format!(
                "{} of {} slots covered",
                seen.len(),
                self.alex_arity
            )));
        }
        let basis = self
            .basis
            .iter()
            .map(|(l, g)| {
                let alex = groups.iter().map(|grp| grp.iter().map(|&s| g.alex[s]).sum()).collect();
                (l.clone(), MultiGrading { maslov: g.maslov, alex })
            })
            .collect();
        Ok(GradedModule { alex_arity: groups.len(), basis })
    }

    pub fn dims_json(&self) -> serde_json::Value {
        dims_to_json(&self.graded_dims())
    }
}

/// Canonical JSON object `{"(M;2A1,...)": dim}` with sorted keys.
pub fn dims_to_json(dims: &GradedDims) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> =
        dims.iter().filter(|(_, &d)| d > 0).map(|(g, &d)| (g.key(), d.into())).collect();
    serde_json::Value::Object(map)
}

pub fn dims_from_json(v: &serde_json::Value) -> Result<GradedDims, GradedError> {
    let obj = v.as_object().ok_or_else(|| GradedError::BadKey(v.to_string()))?;
    let mut out = GradedDims::new();
    for (k, d) in obj {
        let d = d.as_u64().ok_or_else(|| GradedError::BadKey(format!("{k}: {d}")))?;
        out.insert(MultiGrading::from_key(k)?, d as usize);
    }
    Ok(out)
}

fn divide_binomial(p: &GradedDims, g1: &MultiGrading, g2: &MultiGrading) -> Result<GradedDims, GradedError> {
    let (hi, lo) = if g1 >= g2 { (g1, g2) } else { (g2, g1) };
    let mut rem: BTreeMap<MultiGrading, i64> = p.iter().map(|(g, &d)| (g.clone(), d as i64)).collect();
    let mut q = GradedDims::new();
    loop {
        rem.retain(|_, c| *c != 0);
        let Some((top, c)) = rem.iter().next_back().map(|(t, &c)| (t.clone(), c)) else { break };
        if c < 0 {
            return Err(GradedError::NotDivisible(format!("negative remainder at {top}")));
        }
        let t = top.sub(hi);
        if hi == lo {
            if c % 2 != 0 {
                return Err(GradedError::NotDivisible(format!("odd coefficient at {top}")));
            }
            q.insert(t, (c / 2) as usize);
            rem.remove(&top);
            continue;
        }
        *rem.get_mut(&top).unwrap() -= c;
        *rem.entry(t.add(lo)).or_insert(0) -= c;
        q.insert(t, c as usize);
    }
    Ok(q)
}
