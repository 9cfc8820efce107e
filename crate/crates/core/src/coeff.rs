//! Series coefficients: exact rationals, or polynomials in one deformation
//! parameter `s` with exact rational coefficients.
//!
//! Invariants:
//! - the coefficient list never ends in a zero (canonical form),
//! - a plain rational is the degree-zero case.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::rat::{format_q, Q};

/// A dense polynomial in the deformation parameter `s` over Q.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Coeff {
    terms: Vec<Q>, // terms[k] multiplies s^k; no trailing zeros
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Coeff::constant(Q::from_integer(1.into()))
    }

    pub fn constant(value: Q) -> Self {
        if value.is_zero() {
            Coeff::zero()
        } else {
            Coeff { terms: vec![value] }
        }
    }

    pub fn int(value: i64) -> Self {
        Coeff::constant(crate::rat::qi(value))
    }

    /// The parameter itself.
    pub fn s() -> Self {
        Coeff::s_power(1)
    }

    /// `c * s^k`.
    pub fn s_term(c: Q, k: usize) -> Self {
        if c.is_zero() {
            return Coeff::zero();
        }
        let mut terms = vec![Q::zero(); k + 1];
        terms[k] = c;
        Coeff { terms }
    }

    pub fn s_power(k: usize) -> Self {
        Coeff::s_term(Q::from_integer(1.into()), k)
    }

    fn normalize(mut terms: Vec<Q>) -> Self {
        while terms.last().map(Q::is_zero).unwrap_or(false) {
            terms.pop();
        }
        Coeff { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree in `s`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1
    }

    /// The rational value, if the coefficient does not involve `s`.
    pub fn as_rational(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => Some(self.terms[0].clone()),
            _ => None,
        }
    }

    pub fn coefficient(&self, k: usize) -> Q {
        self.terms.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        let n = self.terms.len().max(other.terms.len());
        let mut terms = Vec::with_capacity(n);
        for k in 0..n {
            terms.push(self.coefficient(k) + other.coefficient(k));
        }
        Coeff::normalize(terms)
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Coeff {
        Coeff {
            terms: self.terms.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        if self.is_zero() || other.is_zero() {
            return Coeff::zero();
        }
        let mut terms = vec![Q::zero(); self.terms.len() + other.terms.len() - 1];
        for (i, a) in self.terms.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.terms.iter().enumerate() {
                terms[i + j] += a * b;
            }
        }
        Coeff::normalize(terms)
    }

    pub fn scale(&self, factor: &Q) -> Coeff {
        if factor.is_zero() {
            return Coeff::zero();
        }
        Coeff {
            terms: self.terms.iter().map(|c| c * factor).collect(),
        }
    }

    /// Substitute a rational value for `s`.
    pub fn eval(&self, s0: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.terms.iter().rev() {
            acc = acc * s0 + c;
        }
        acc
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = format_q(&c.abs());
            let sign = c < &Q::zero();
            if first {
                if sign {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != "1" {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "s")?;
                    } else {
                        write!(f, "s^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
