//! Dense exact linear algebra over Q: row echelon bases for rank, span
//! membership and small linear systems. Vectors are plain `Vec<Q>`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::rat::Q;

/// Row space in reduced form, keyed by pivot column. Each stored row has its
/// pivot normalized to 1 and is reduced against all earlier pivots.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, Vec<Q>>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn has_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    /// Reduce `v` against the basis in place; afterwards every pivot column
    /// of the basis is zero in `v`.
    pub fn reduce(&self, v: &mut [Q]) {
        for (&p, row) in &self.rows {
            if p >= v.len() {
                break;
            }
            if !v[p].is_zero() {
                let factor = v[p].clone();
                for (k, r) in row.iter().enumerate().skip(p) {
                    if !r.is_zero() {
                        v[k] -= &factor * r;
                    }
                }
            }
        }
    }

    fn leading(v: &[Q]) -> Option<usize> {
        v.iter().position(|x| !x.is_zero())
    }

    /// Insert a vector; returns true when it enlarged the span.
    pub fn insert(&mut self, mut v: Vec<Q>) -> bool {
        self.reduce(&mut v);
        match Echelon::leading(&v) {
            None => false,
            Some(p) => {
                let inv = v[p].clone();
                for x in v.iter_mut() {
                    if !x.is_zero() {
                        *x /= &inv;
                    }
                }
                self.rows.insert(p, v);
                true
            }
        }
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        Echelon::leading(&w).is_none()
    }
}

/// Rank of a list of vectors.
pub fn rank_of<I: IntoIterator<Item = Vec<Q>>>(vectors: I) -> usize {
    let mut ech = Echelon::new();
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}

/// Consistency of the linear system given as rows (coefficients, rhs).
/// Returns true iff some exact solution exists.
pub fn system_consistent(rows: &[(Vec<Q>, Q)]) -> bool {
    let mut plain = Echelon::new();
    let mut augmented = Echelon::new();
    for (coeffs, rhs) in rows {
        let mut aug = coeffs.clone();
        aug.push(rhs.clone());
        plain.insert(coeffs.clone());
        augmented.insert(aug);
    }
    plain.rank() == augmented.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qi;

    #[test]
    fn rank_and_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(vec![qi(1), qi(2), qi(0)]));
        assert!(e.insert(vec![qi(0), qi(1), qi(1)]));
        assert!(!e.insert(vec![qi(2), qi(5), qi(1)])); // dependent
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&[qi(1), qi(3), qi(1)]));
        assert!(!e.contains(&[qi(0), qi(0), qi(1)]));
    }

    #[test]
    fn consistency() {
        // x + y = 2, x - y = 0 has a solution
        assert!(system_consistent(&[
            (vec![qi(1), qi(1)], qi(2)),
            (vec![qi(1), qi(-1)], qi(0)),
        ]));
        // x = 1, x = 2 does not
        assert!(!system_consistent(&[
            (vec![qi(1)], qi(1)),
            (vec![qi(1)], qi(2)),
        ]));
    }
}
