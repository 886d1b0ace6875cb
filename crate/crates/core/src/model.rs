//! Observed units and the per-unit ratio table.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{FdhError, Result};
use crate::scalar::{is_positive, max_of, min_of, Rational, Scalar};

/// `n` decision making units with `m` strictly positive inputs and `s`
/// strictly positive outputs each.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset<S = f64> {
    names: Vec<String>,
    inputs: Vec<S>,
    outputs: Vec<S>,
    m: usize,
    s: usize,
}

impl<S: Scalar> Dataset<S> {
    /// Validates rows of inputs and outputs, one row per unit.
    pub fn new(names: Vec<String>, inputs: Vec<Vec<S>>, outputs: Vec<Vec<S>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(FdhError::EmptyDataset);
        }
        for rows in [inputs.len(), outputs.len()] {
            if rows != n {
                return Err(FdhError::RaggedRows {
                    row: rows.min(n),
                    expected: n,
                    found: rows,
                });
            }
        }
        let m = inputs[0].len();
        let s = outputs[0].len();
        if m == 0 || s == 0 {
            return Err(FdhError::EmptyDataset);
        }
        let mut seen = HashSet::with_capacity(n);
        let mut flat_in = Vec::with_capacity(n * m);
        let mut flat_out = Vec::with_capacity(n * s);
        for (j, name) in names.iter().enumerate() {
            if !seen.insert(name.as_str()) {
                return Err(FdhError::DuplicateName(name.clone()));
            }
            let (x, y) = (&inputs[j], &outputs[j]);
            if x.len() != m {
                return Err(FdhError::RaggedRows {
                    row: j,
                    expected: m,
                    found: x.len(),
                });
            }
            if y.len() != s {
                return Err(FdhError::RaggedRows {
                    row: j,
                    expected: s,
                    found: y.len(),
                });
            }
            for (i, v) in x.iter().enumerate() {
                if !is_positive(v) {
                    return Err(FdhError::NonPositiveValue {
                        dmu: name.clone(),
                        column: format!("input {}", i + 1),
                    });
                }
            }
            for (r, v) in y.iter().enumerate() {
                if !is_positive(v) {
                    return Err(FdhError::NonPositiveValue {
                        dmu: name.clone(),
                        column: format!("output {}", r + 1),
                    });
                }
            }
            flat_in.extend(x.iter().cloned());
            flat_out.extend(y.iter().cloned());
        }
        Ok(Dataset {
            names,
            inputs: flat_in,
            outputs: flat_out,
            m,
            s,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn num_inputs(&self) -> usize {
        self.m
    }

    pub fn num_outputs(&self) -> usize {
        self.s
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, j: usize) -> &str {
        &self.names[j]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| FdhError::UnknownDmu(name.to_string()))
    }

    pub fn input(&self, j: usize) -> &[S] {
        &self.inputs[j * self.m..(j + 1) * self.m]
    }

    pub fn output(&self, j: usize) -> &[S] {
        &self.outputs[j * self.s..(j + 1) * self.s]
    }

    pub fn check_index(&self, o: usize) -> Result<()> {
        if o < self.len() {
            Ok(())
        } else {
            Err(FdhError::IndexOutOfRange {
                index: o,
                n: self.len(),
            })
        }
    }

    /// Converts every entry to another backend.
    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Dataset<T> {
        Dataset {
            names: self.names.clone(),
            inputs: self.inputs.iter().map(&f).collect(),
            outputs: self.outputs.iter().map(&f).collect(),
            m: self.m,
            s: self.s,
        }
    }

    /// Copy of the dataset with unit `o`'s outputs replaced.
    pub fn with_outputs(&self, o: usize, y: Vec<S>) -> Result<Self> {
        self.check_index(o)?;
        let rows_in = (0..self.len()).map(|j| self.input(j).to_vec()).collect();
        let rows_out = (0..self.len())
            .map(|j| if j == o { y.clone() } else { self.output(j).to_vec() })
            .collect();
        Dataset::new(self.names.clone(), rows_in, rows_out)
    }

    /// Worst input ratio `max_i x_ij / x_io` of unit `j` against `o`.
    pub fn alpha(&self, j: usize, o: usize) -> S {
        worst_ratio(self.input(j), self.input(o), max_of)
    }

    /// Worst output ratio `min_r y_rj / y_ro` of unit `j` against `o`.
    pub fn beta(&self, j: usize, o: usize) -> S {
        worst_ratio(self.output(j), self.output(o), min_of)
    }
}

impl Dataset<Rational> {
    pub fn to_f64(&self) -> Dataset<f64> {
        self.map_scalar(Scalar::to_f64)
    }
}

fn worst_ratio<S: Scalar>(num: &[S], den: &[S], pick: fn(S, S) -> S) -> S {
    num.iter()
        .zip(den)
        .map(|(a, b)| a.clone() / b.clone())
        .reduce(pick)
        .expect("at least one dimension")
}

/// Returns-to-scale assumption of the reference technology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Delta {
    /// `delta = 1`
    Vrs,
    /// `delta >= 0`
    Crs,
    /// `0 <= delta <= 1`
    Nirs,
    /// `delta >= 1`
    Ndrs,
}

impl Delta {
    pub const ALL: [Delta; 4] = [Delta::Vrs, Delta::Crs, Delta::Nirs, Delta::Ndrs];

    /// Closed scaling region `[lower, upper]`, `None` meaning unbounded.
    pub fn bounds<S: Scalar>(self) -> (S, Option<S>) {
        match self {
            Delta::Vrs => (S::one(), Some(S::one())),
            Delta::Crs => (S::zero(), None),
            Delta::Nirs => (S::zero(), Some(S::one())),
            Delta::Ndrs => (S::one(), None),
        }
    }

    pub fn contains<S: Scalar>(self, delta: &S) -> bool {
        let (lo, hi) = self.bounds::<S>();
        *delta >= lo && hi.is_none_or(|h| *delta <= h)
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Delta::Vrs => "vrs",
            Delta::Crs => "crs",
            Delta::Nirs => "nirs",
            Delta::Ndrs => "ndrs",
        }
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Input,
    Output,
}

/// Worst-case input and output ratios of every unit against a reference
/// unit `o`.
///
/// `alpha[j] = max_i x_ij / x_io` is the smallest scaling of `x_o` that
/// covers `x_j`; `beta[j] = min_r y_rj / y_ro` is the largest scaling of
/// `y_o` that `y_j` covers.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioTable<S = f64> {
    pub reference: usize,
    pub alpha: Vec<S>,
    pub beta: Vec<S>,
}

impl<S: Scalar> RatioTable<S> {
    pub fn new(d: &Dataset<S>, o: usize) -> Result<Self> {
        d.check_index(o)?;
        let n = d.len();
        let mut alpha = Vec::with_capacity(n);
        let mut beta = Vec::with_capacity(n);
        for j in 0..n {
            if j == o {
                alpha.push(S::one());
                beta.push(S::one());
            } else {
                alpha.push(d.alpha(j, o));
                beta.push(d.beta(j, o));
            }
        }
        Ok(RatioTable {
            reference: o,
            alpha,
            beta,
        })
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, &S, &S)> {
        self.alpha
            .iter()
            .zip(&self.beta)
            .enumerate()
            .map(|(j, (a, b))| (j, a, b))
    }
}

pub fn ratio_table<S: Scalar>(d: &Dataset<S>, o: usize) -> Result<RatioTable<S>> {
    RatioTable::new(d, o)
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn four_units_is_valid() {
        let d = four_units();
        assert_eq!((d.len(), d.num_inputs(), d.num_outputs()), (4, 1, 1));
    }

    #[test]
    fn single_unit_is_valid() {
        let d = Dataset::new(vec!["X".into()], vec![vec![1.0, 1.0]], vec![vec![1.0]]).unwrap();
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn validation_errors() {
        let zero = Dataset::new(vec!["A".into()], vec![vec![0.0]], vec![vec![1.0]]);
        assert!(matches!(zero, Err(FdhError::NonPositiveValue { .. })));
        let neg = Dataset::new(vec!["A".into()], vec![vec![1.0]], vec![vec![-1.0]]);
        assert!(matches!(neg, Err(FdhError::NonPositiveValue { .. })));
        let dup = Dataset::new(
            vec!["A".into(), "A".into()],
            vec![vec![1.0], vec![2.0]],
            vec![vec![1.0], vec![2.0]],
        );
        assert!(matches!(dup, Err(FdhError::DuplicateName(_))));
        let empty = Dataset::<f64>::new(vec![], vec![], vec![]);
        assert!(matches!(empty, Err(FdhError::EmptyDataset)));
        let ragged = Dataset::new(
            vec!["A".into(), "B".into()],
            vec![vec![1.0], vec![2.0, 3.0]],
            vec![vec![1.0], vec![2.0]],
        );
        assert!(matches!(ragged, Err(FdhError::RaggedRows { row: 1, .. })));
        let no_outputs = Dataset::new(vec!["A".into()], vec![vec![1.0]], vec![vec![]]);
        assert!(matches!(no_outputs, Err(FdhError::EmptyDataset)));
    }

    #[test]
    fn ratio_table_four_units() {
        let d = four_units();
        let t = ratio_table(&d, B).unwrap();
        assert_eq!(t.alpha, vec![q(1, 3), q(1, 1), q(5, 3), q(2, 1)]);
        assert_eq!(t.beta, vec![q(1, 2), q(1, 1), q(5, 4), q(13, 4)]);
        let t = ratio_table(&d, D).unwrap();
        assert_eq!(t.alpha, vec![q(1, 6), q(1, 2), q(5, 6), q(1, 1)]);
        assert_eq!(t.beta, vec![q(2, 13), q(4, 13), q(5, 13), q(1, 1)]);
        // A -> B: input grows threefold, output twofold.
        let t = ratio_table(&d, A).unwrap();
        assert_eq!((t.alpha[B].clone(), t.beta[B].clone()), (q(3, 1), q(2, 1)));
    }

    #[test]
    fn ratio_table_self_entry_is_one() {
        let d = Dataset::new(
            vec!["P".into(), "Q".into()],
            vec![vec![0.3, 0.7], vec![1.1, 0.2]],
            vec![vec![0.1], vec![0.9]],
        )
        .unwrap();
        for o in 0..2 {
            let t = ratio_table(&d, o).unwrap();
            assert_eq!((t.alpha[o], t.beta[o]), (1.0, 1.0));
        }
    }

    #[test]
    fn ratio_table_rejects_bad_index() {
        let d = four_units();
        assert!(matches!(
            ratio_table(&d, 4),
            Err(FdhError::IndexOutOfRange { index: 4, n: 4 })
        ));
    }

    #[test]
    fn multi_dimensional_ratios_take_worst_component() {
        let d = Dataset::new(
            vec!["O".into(), "J".into()],
            vec![vec![q(2, 1), q(4, 1)], vec![q(3, 1), q(2, 1)]],
            vec![vec![q(1, 1), q(5, 1)], vec![q(3, 1), q(10, 1)]],
        )
        .unwrap();
        let t = ratio_table(&d, 0).unwrap();
        assert_eq!(t.alpha[1], q(3, 2));
        assert_eq!(t.beta[1], q(2, 1));
    }

    #[test]
    fn delta_regions() {
        assert!(Delta::Vrs.contains(&1.0) && !Delta::Vrs.contains(&1.5));
        assert!(Delta::Crs.contains(&0.0) && Delta::Crs.contains(&7.0));
        assert!(Delta::Nirs.contains(&0.5) && !Delta::Nirs.contains(&1.5));
        assert!(Delta::Ndrs.contains(&1.5) && !Delta::Ndrs.contains(&0.5));
    }
}
