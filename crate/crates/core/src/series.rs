//! Truncated formal power series in one local parameter, and polynomials in
//! the ambient coordinates, both with [`Coeff`] coefficients.
//!
//! A series is either *truncated at order N* (coefficients of t^0..t^N are
//! known, nothing beyond) or *exact* (a polynomial, known to all orders).
//! Truncation orders are carried explicitly; binary operations truncate to
//! the minimum, and narrowing a truncated series below its stated order is
//! the only permitted truncation change. Certified answers about vanishing
//! and orders are only ever derived from exact series or from explicitly
//! sufficient truncations.

use std::fmt;

use num_traits::Zero;

use crate::coeff::Coeff;
use crate::rat::Q;

/// Symbolic tag for the local parameter of a series. Two series interoperate
/// only when their tags agree; each branch of a multi-germ gets its own tag.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct Var(pub u16);

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

/// Result of asking for the order (valuation) of a series.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Order {
    /// Least exponent with a nonzero coefficient.
    Finite(usize),
    /// The series is exactly the zero polynomial.
    Zero,
    /// All stored coefficients vanish; the order is >= N+1 but unknown.
    AtLeast(usize),
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("truncation order {available} is insufficient (need {needed})")]
    Truncation { needed: usize, available: usize },
    #[error("order of numerator below order of denominator")]
    OrderMismatch,
    #[error("division by a series that vanishes to its truncation")]
    DivisionByZero,
    #[error("inner series of a composition must have positive order")]
    InnerOrder,
    #[error("series is not a polynomial (finite support required)")]
    NotPolynomial,
    #[error("modulus must be monic in t of positive degree")]
    NotMonic,
    #[error("vanishing cannot be certified at this truncation")]
    Uncertifiable,
}

/// A formal power series sum c_k t^k with [`Coeff`] coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Series {
    var: Var,
    /// `coeffs[k]` multiplies t^k. When `trunc` is `Some(n)`, the length is
    /// exactly n+1. When `None` (exact polynomial) there is no trailing zero.
    coeffs: Vec<Coeff>,
    trunc: Option<usize>,
}

impl Series {
    /// Exact polynomial from low-order coefficients.
    pub fn polynomial(var: Var, coeffs: Vec<Coeff>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.last().map(Coeff::is_zero).unwrap_or(false) {
            coeffs.pop();
        }
        Series { var, coeffs, trunc: None }
    }

    /// Exact polynomial with rational coefficients.
    pub fn poly_q(var: Var, coeffs: &[Q]) -> Self {
        Series::polynomial(var, coeffs.iter().cloned().map(Coeff::constant).collect())
    }

    pub fn zero(var: Var) -> Self {
        Series::polynomial(var, Vec::new())
    }

    /// `c * t^k`, exact.
    pub fn monomial(var: Var, c: Coeff, k: usize) -> Self {
        let mut coeffs = vec![Coeff::zero(); k + 1];
        coeffs[k] = c;
        Series::polynomial(var, coeffs)
    }

    pub fn t_power(var: Var, k: usize) -> Self {
        Series::monomial(var, Coeff::one(), k)
    }

    /// A truncated series from explicit coefficients of t^0..t^N.
    pub fn truncated_from(var: Var, coeffs: Vec<Coeff>, n: usize) -> Self {
        let mut coeffs = coeffs;
        coeffs.resize(n + 1, Coeff::zero());
        coeffs.truncate(n + 1);
        Series { var, coeffs, trunc: Some(n) }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    /// Truncation order N, or `None` for an exact polynomial.
    pub fn truncation(&self) -> Option<usize> {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// Coefficient of t^k. For a truncated series, `k` must not exceed the
    /// truncation order.
    pub fn coeff(&self, k: usize) -> Coeff {
        if let Some(n) = self.trunc {
            assert!(k <= n, "coefficient t^{k} beyond truncation {n}");
        }
        self.coeffs.get(k).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Degree of the stored support (exact polynomials only).
    pub fn degree(&self) -> Result<Option<usize>, SeriesError> {
        if self.trunc.is_some() {
            return Err(SeriesError::NotPolynomial);
        }
        Ok(self.coeffs.len().checked_sub(1))
    }

    pub fn order(&self) -> Order {
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                return Order::Finite(k);
            }
        }
        match self.trunc {
            None => Order::Zero,
            Some(n) => Order::AtLeast(n + 1),
        }
    }

    /// Finite order of a series known not to vanish; panics on zero series.
    pub fn order_certain(&self) -> usize {
        match self.order() {
            Order::Finite(k) => k,
            other => panic!("series has no certified finite order: {other:?}"),
        }
    }

    pub fn is_zero_to_truncation(&self) -> bool {
        self.coeffs.iter().all(Coeff::is_zero)
    }

    /// Exactly zero as a polynomial (never by truncation luck).
    pub fn certified_zero(&self) -> bool {
        self.is_exact() && self.coeffs.is_empty()
    }

    fn joint_trunc(&self, other: &Series) -> Option<usize> {
        match (self.trunc, other.trunc) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (Some(a), Some(b)) => Some(a.min(b)),
        }
    }

    fn check_var(&self, other: &Series) {
        assert_eq!(
            self.var, other.var,
            "series in different variables cannot be combined"
        );
    }

    fn build(var: Var, coeffs: Vec<Coeff>, trunc: Option<usize>) -> Series {
        match trunc {
            None => Series::polynomial(var, coeffs),
            Some(n) => Series::truncated_from(var, coeffs, n),
        }
    }

    /// Coefficientwise sum; truncation is the minimum of the two.
    pub fn add(&self, other: &Series) -> Series {
        self.check_var(other);
        let trunc = self.joint_trunc(other);
        let len = match trunc {
            Some(n) => n + 1,
            None => self.coeffs.len().max(other.coeffs.len()),
        };
        let mut coeffs = Vec::with_capacity(len);
        for k in 0..len {
            let a = self.coeffs.get(k).cloned().unwrap_or_else(Coeff::zero);
            let b = other.coeffs.get(k).cloned().unwrap_or_else(Coeff::zero);
            coeffs.push(a.add(&b));
        }
        Series::build(self.var, coeffs, trunc)
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        Series {
            var: self.var,
            coeffs: self.coeffs.iter().map(Coeff::neg).collect(),
            trunc: self.trunc,
        }
    }

    /// Cauchy product; truncation is the minimum of the two.
    pub fn mul(&self, other: &Series) -> Series {
        self.check_var(other);
        let trunc = self.joint_trunc(other);
        let len = match trunc {
            Some(n) => n + 1,
            None => {
                if self.coeffs.is_empty() || other.coeffs.is_empty() {
                    return Series::zero(self.var);
                }
                self.coeffs.len() + other.coeffs.len() - 1
            }
        };
        let mut coeffs = vec![Coeff::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        Series::build(self.var, coeffs, trunc)
    }

    pub fn scale(&self, factor: &Coeff) -> Series {
        let coeffs = self.coeffs.iter().map(|c| c.mul(factor)).collect();
        Series::build(self.var, coeffs, self.trunc)
    }

    /// Multiply by t^k.
    pub fn shift_up(&self, k: usize) -> Series {
        let mut coeffs = vec![Coeff::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        let trunc = self.trunc.map(|n| n + k);
        Series::build(self.var, coeffs, trunc)
    }

    /// View at truncation order `n`. Narrowing is always allowed; for exact
    /// series any order is available (the hidden coefficients are zero).
    pub fn truncated(&self, n: usize) -> Result<Series, SeriesError> {
        match self.trunc {
            Some(have) if have < n => Err(SeriesError::Truncation { needed: n, available: have }),
            _ => Ok(Series::truncated_from(self.var, self.coeffs.clone(), n)),
        }
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, e: usize) -> Series {
        let mut acc = match self.trunc {
            None => Series::polynomial(self.var, vec![Coeff::one()]),
            Some(n) => Series::truncated_from(self.var, vec![Coeff::one()], n),
        };
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inverse of a unit (nonzero constant term); the input must be truncated
    /// since the inverse is an infinite series.
    pub fn invert_unit(&self) -> Result<Series, SeriesError> {
        let n = self.trunc.ok_or(SeriesError::NotPolynomial)?;
        let c0 = self.coeff(0);
        let c0 = c0.as_rational().filter(|v| !v.is_zero());
        // unit coefficients in Q[s] would need rational function inverses
        let c0 = match c0 {
            Some(v) => v,
            None => return Err(SeriesError::DivisionByZero),
        };
        let inv0 = Coeff::constant(Q::from_integer(1.into()) / c0);
        let mut out = vec![Coeff::zero(); n + 1];
        out[0] = inv0.clone();
        for k in 1..=n {
            let mut acc = Coeff::zero();
            for j in 1..=k {
                let a = self.coeff(j);
                if !a.is_zero() {
                    acc = acc.add(&a.mul(&out[k - j]));
                }
            }
            out[k] = acc.neg().mul(&inv0);
        }
        Ok(Series::truncated_from(self.var, out, n))
    }

    /// Quotient `self / den` where ord(den) <= ord(self) is certified.
    /// Both inputs must be truncated; the result is valid to
    /// min(N_self, N_den) - ord(den).
    pub fn div(&self, den: &Series) -> Result<Series, SeriesError> {
        self.check_var(den);
        let d = match den.order() {
            Order::Finite(d) => d,
            Order::Zero | Order::AtLeast(_) => return Err(SeriesError::DivisionByZero),
        };
        if self.is_zero_to_truncation() && self.trunc.is_none() {
            return Ok(Series::zero(self.var));
        }
        match self.order() {
            Order::Finite(k) if k < d => return Err(SeriesError::OrderMismatch),
            _ => {}
        }
        let joint = self.joint_trunc(den).ok_or(SeriesError::NotPolynomial)?;
        let out_n = joint.checked_sub(d).ok_or(SeriesError::Truncation {
            needed: d,
            available: joint,
        })?;
        // strip t^d from both, then multiply by the unit inverse
        let num = Series::truncated_from(
            self.var,
            self.coeffs.iter().skip(d).cloned().collect(),
            out_n,
        );
        let unit = Series::truncated_from(
            self.var,
            den.coeffs.iter().skip(d).cloned().collect(),
            out_n,
        );
        Ok(num.mul(&unit.invert_unit()?))
    }

    /// Composition self(inner(t)); `inner` must have positive order.
    pub fn compose(&self, inner: &Series) -> Result<Series, SeriesError> {
        match inner.order() {
            Order::Finite(k) if k >= 1 => {}
            Order::Zero => {}
            _ => return Err(SeriesError::InnerOrder),
        }
        if matches!(inner.order(), Order::Finite(0)) {
            return Err(SeriesError::InnerOrder);
        }
        let trunc = match (self.trunc, inner.trunc) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        // Horner from the top coefficient down
        let zero = match trunc {
            None => Series::zero(inner.var),
            Some(n) => Series::truncated_from(inner.var, Vec::new(), n),
        };
        let mut acc = zero.clone();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner);
            if !c.is_zero() {
                acc = acc.add(&Series::build(
                    inner.var,
                    vec![c.clone()],
                    trunc,
                ));
            }
        }
        Ok(acc)
    }

    /// Substitute t -> t0 + t (Taylor shift); exact polynomials only.
    pub fn taylor_shift(&self, t0: &Q) -> Result<Series, SeriesError> {
        if self.trunc.is_some() {
            return Err(SeriesError::NotPolynomial);
        }
        let n = self.coeffs.len();
        let mut out = vec![Coeff::zero(); n];
        // Horner: p(t0 + t) built by repeated multiplication by (t + t0)
        for c in self.coeffs.iter().rev() {
            // out := out * (t + t0) + c
            let mut next = vec![Coeff::zero(); n];
            for k in 0..n {
                if out[k].is_zero() {
                    continue;
                }
                next[k] = next[k].add(&out[k].scale(t0));
                if k + 1 < n {
                    let carried = out[k].clone();
                    next[k + 1] = next[k + 1].add(&carried);
                }
            }
            next[0] = next[0].add(c);
            out = next;
        }
        Ok(Series::polynomial(self.var, out))
    }

    /// Substitute a rational value for the deformation parameter `s`.
    pub fn eval_param(&self, s0: &Q) -> Series {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| Coeff::constant(c.eval(s0)))
            .collect();
        Series::build(self.var, coeffs, self.trunc)
    }

    /// True when no coefficient involves the deformation parameter.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(Coeff::is_constant)
    }

    /// Rational jet (c_0, ..., c_n). Exact series pad with zeros; truncated
    /// series must already be known to order n.
    pub fn jet(&self, n: usize) -> Result<Vec<Q>, SeriesError> {
        if let Some(have) = self.trunc {
            if have < n {
                return Err(SeriesError::Truncation { needed: n, available: have });
            }
        }
        let mut out = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let c = self.coeffs.get(k).cloned().unwrap_or_else(Coeff::zero);
            match c.as_rational() {
                Some(v) => out.push(v),
                None => panic!("jet of a series with parameter coefficients"),
            }
        }
        Ok(out)
    }

    /// Retag the local parameter.
    pub fn with_var(&self, var: Var) -> Series {
        Series { var, coeffs: self.coeffs.clone(), trunc: self.trunc }
    }

    /// Full coefficient list of an exact series with rational coefficients.
    pub fn rational_coeffs(&self) -> Option<Vec<Q>> {
        if self.trunc.is_some() {
            return None;
        }
        self.coeffs.iter().map(|c| c.as_rational()).collect()
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let inner = c.to_string();
            let needs_parens = inner.contains('+') || (inner.contains('-') && !inner.starts_with('-'));
            if wrote {
                write!(f, " + ")?;
            }
            wrote = true;
            let body = if needs_parens { format!("({inner})") } else { inner };
            match k {
                0 => write!(f, "{body}")?,
                _ => {
                    if body != "1" {
                        write!(f, "{body}*")?;
                    }
                    if k == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
        }
        if !wrote {
            write!(f, "0")?;
        }
        if let Some(n) = self.trunc {
            write!(f, " + O(t^{})", n + 1)?;
        }
        Ok(())
    }
}

/// Remainder of `a` after division by g^k, as exact polynomial division.
/// `g` must be monic in t of positive degree; `a` must be an exact polynomial.
pub fn reduce_mod(a: &Series, g: &Series, k: usize) -> Result<Series, SeriesError> {
    assert!(k >= 1, "modulus exponent must be positive");
    if a.trunc.is_some() {
        return Err(SeriesError::NotPolynomial);
    }
    if g.trunc.is_some() {
        return Err(SeriesError::NotPolynomial);
    }
    let gdeg = match g.degree()? {
        Some(d) if d >= 1 => d,
        _ => return Err(SeriesError::NotMonic),
    };
    if g.coeff(gdeg).as_rational() != Some(Q::from_integer(1.into())) {
        return Err(SeriesError::NotMonic);
    }
    let modulus = g.pow(k);
    let mdeg = modulus.degree()?.expect("monic power is nonzero");
    let mut rem: Vec<Coeff> = a.coeffs.clone();
    while rem.len() > mdeg {
        let top = rem.len() - 1;
        let lead = rem[top].clone();
        if !lead.is_zero() {
            let shift = top - mdeg;
            for j in 0..=mdeg {
                let sub = lead.mul(&modulus.coeff(j));
                rem[shift + j] = rem[shift + j].sub(&sub);
            }
        }
        rem.pop();
    }
    Ok(Series::polynomial(a.var(), rem))
}

/// A polynomial in n ambient coordinates with [`Coeff`] coefficients,
/// stored as a sparse list of exponent vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    pub nvars: usize,
    terms: Vec<(Vec<u32>, Coeff)>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: Vec::new() }
    }

    pub fn from_terms(nvars: usize, terms: Vec<(Vec<u32>, Coeff)>) -> Self {
        let mut map: std::collections::BTreeMap<Vec<u32>, Coeff> = Default::default();
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length mismatch");
            let entry = map.entry(e).or_insert_with(Coeff::zero);
            *entry = entry.add(&c);
        }
        MPoly {
            nvars,
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Vec<u32>, Coeff)] {
        &self.terms
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Coordinate variable x_i.
    pub fn coordinate(nvars: usize, i: usize) -> Self {
        let mut e = vec![0u32; nvars];
        e[i] = 1;
        MPoly::from_terms(nvars, vec![(e, Coeff::one())])
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        MPoly::from_terms(self.nvars, terms)
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.scale_coeff(&Coeff::int(-1)))
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut terms = Vec::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                terms.push((e, ca.mul(cb)));
            }
        }
        MPoly::from_terms(self.nvars, terms)
    }

    pub fn scale_coeff(&self, c: &Coeff) -> MPoly {
        MPoly::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, a)| (e.clone(), a.mul(c))).collect(),
        )
    }

    /// Evaluate on a vector of series sharing one variable tag: exact series
    /// substitution. The result is exact iff all inputs are exact.
    pub fn eval_series(&self, comps: &[Series]) -> Series {
        assert_eq!(comps.len(), self.nvars, "component count mismatch");
        let var = comps.first().map(|c| c.var()).unwrap_or(Var(0));
        let mut trunc: Option<usize> = None;
        for c in comps {
            assert_eq!(c.var(), var, "substitution components in mixed variables");
            trunc = match (trunc, c.truncation()) {
                (None, t) => t,
                (t, None) => t,
                (Some(a), Some(b)) => Some(a.min(b)),
            };
        }
        let mut acc = match trunc {
            None => Series::zero(var),
            Some(n) => Series::truncated_from(var, Vec::new(), n),
        };
        for (e, c) in &self.terms {
            let mut term = Series::build(var, vec![c.clone()], trunc);
            for (i, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    let mut p = comps[i].clone();
                    if let Some(n) = trunc {
                        p = p.truncated(n).expect("joint truncation is minimal");
                    }
                    term = term.mul(&p.pow(exp as usize));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Certified vanishing of `self` on the given components.
    ///
    /// Exact components give an exact answer. For truncated components the
    /// vanishing claim is certified only when every component has polynomial
    /// support bounded by its truncation and the truncation exceeds
    /// total_degree(self) * max component degree; otherwise this errors.
    pub fn certified_vanishing(&self, comps: &[Series]) -> Result<bool, SeriesError> {
        if comps.iter().all(Series::is_exact) {
            return Ok(self.eval_series(comps).certified_zero());
        }
        let mut max_deg = 0usize;
        for c in comps {
            let support = c
                .coeffs
                .iter()
                .rposition(|x| !x.is_zero())
                .unwrap_or(0);
            max_deg = max_deg.max(support);
        }
        let needed = self.total_degree() * max_deg;
        let available = comps
            .iter()
            .filter_map(Series::truncation)
            .min()
            .unwrap_or(usize::MAX);
        if available < needed {
            return Err(SeriesError::Uncertifiable);
        }
        Ok(self.eval_series(comps).is_zero_to_truncation())
    }

    /// Substitute a rational value for the deformation parameter in all
    /// coefficients.
    pub fn eval_param(&self, s0: &Q) -> MPoly {
        MPoly::from_terms(
            self.nvars,
            self.terms
                .iter()
                .map(|(e, c)| (e.clone(), Coeff::constant(c.eval(s0))))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qi;

    fn t() -> Var {
        Var(0)
    }

    fn mono(k: usize) -> Series {
        Series::t_power(t(), k)
    }

    #[test]
    fn add_cancels_and_respects_truncation() {
        // (t^2 + t^3) + (-t^2) = t^3 at N=5
        let a = mono(2).add(&mono(3)).truncated(5).unwrap();
        let b = mono(2).neg().truncated(5).unwrap();
        let sum = a.add(&b);
        assert_eq!(sum.order(), Order::Finite(3));
        assert_eq!(sum.truncation(), Some(5));

        // identity
        let z = Series::zero(t());
        assert_eq!(a.add(&z.truncated(9).unwrap()).order(), Order::Finite(2));

        // (1+t, N=3) + (1+t, N=2) -> (2+2t, N=2)
        let one_t = Series::poly_q(t(), &[qi(1), qi(1)]);
        let s3 = one_t.truncated(3).unwrap();
        let s2 = one_t.truncated(2).unwrap();
        let sum = s3.add(&s2);
        assert_eq!(sum.truncation(), Some(2));
        assert_eq!(sum.coeff(0).as_rational(), Some(qi(2)));
        assert_eq!(sum.coeff(1).as_rational(), Some(qi(2)));
    }

    #[test]
    #[should_panic(expected = "different variables")]
    fn variable_mismatch_is_rejected() {
        let a = Series::t_power(Var(0), 1);
        let b = Series::t_power(Var(1), 1);
        let _ = a.add(&b);
    }

    #[test]
    fn mul_examples() {
        // t^2 * t^3 -> t^5 at N=10
        let p = mono(2).truncated(10).unwrap().mul(&mono(3).truncated(10).unwrap());
        assert_eq!(p.order(), Order::Finite(5));

        // (t^3 - s)^2 = t^6 - 2s t^3 + s^2 over Q[s]
        let tms = mono(3).sub(&Series::monomial(t(), Coeff::s(), 0));
        let sq = tms.mul(&tms);
        assert_eq!(sq.coeff(6), Coeff::one());
        assert_eq!(sq.coeff(3), Coeff::s_term(qi(-2), 1));
        assert_eq!(sq.coeff(0), Coeff::s_power(2));

        // (1+t)(1-t) = 1 - t^2 at N=4
        let a = Series::poly_q(t(), &[qi(1), qi(1)]).truncated(4).unwrap();
        let b = Series::poly_q(t(), &[qi(1), qi(-1)]).truncated(4).unwrap();
        let p = a.mul(&b);
        assert_eq!(p.coeff(0).as_rational(), Some(qi(1)));
        assert!(p.coeff(1).is_zero());
        assert_eq!(p.coeff(2).as_rational(), Some(qi(-1)));
        assert!(p.coeff(3).is_zero() && p.coeff(4).is_zero());
    }

    #[test]
    fn order_of_zero_series_is_open() {
        let z = Series::zero(t()).truncated(7).unwrap();
        assert_eq!(z.order(), Order::AtLeast(8));
        assert_eq!(Series::zero(t()).order(), Order::Zero);
    }

    #[test]
    fn division_and_inverse() {
        // (t^3 + t^4) / (t + t^2) = t^2, exactly
        let num = mono(3).add(&mono(4)).truncated(8).unwrap();
        let den = mono(1).add(&mono(2)).truncated(8).unwrap();
        let quot = num.div(&den).unwrap();
        assert_eq!(quot.truncation(), Some(7));
        assert_eq!(quot.coeff(2).as_rational(), Some(qi(1)));
        assert!((0..=7).filter(|&k| k != 2).all(|k| quot.coeff(k).is_zero()));

        // t^5 / (t^3 + t^4) = t^2 - t^3 + t^4 - ...
        let quot = mono(5).truncated(9).unwrap().div(&mono(3).add(&mono(4)).truncated(9).unwrap()).unwrap();
        assert_eq!(quot.coeff(2).as_rational(), Some(qi(1)));
        assert_eq!(quot.coeff(3).as_rational(), Some(qi(-1)));
        assert_eq!(quot.coeff(4).as_rational(), Some(qi(1)));
    }

    #[test]
    fn substitution_checks_table_rows() {
        // y^2 - xz on (t^4, t^5, t^6) vanishes
        let p = MPoly::from_terms(
            3,
            vec![
                (vec![0, 2, 0], Coeff::one()),
                (vec![1, 0, 1], Coeff::int(-1)),
            ],
        );
        let comps = [mono(4), mono(5), mono(6)];
        assert!(p.certified_vanishing(&comps).unwrap());

        // z^2 - x^3 on (t^4, t^5, t^6) vanishes
        let p2 = MPoly::from_terms(
            3,
            vec![
                (vec![0, 0, 2], Coeff::one()),
                (vec![3, 0, 0], Coeff::int(-1)),
            ],
        );
        assert!(p2.certified_vanishing(&comps).unwrap());

        // y^2 - x^3 on (t^2, t^3 + t^4) = t^7 (2 + t), order 7
        let p3 = MPoly::from_terms(
            2,
            vec![
                (vec![0, 2], Coeff::one()),
                (vec![3, 0], Coeff::int(-1)),
            ],
        );
        let comps = [mono(2), mono(3).add(&mono(4))];
        let val = p3.eval_series(&comps);
        assert_eq!(val.order(), Order::Finite(7));
        assert_eq!(val.coeff(7).as_rational(), Some(qi(2)));
        assert_eq!(val.coeff(8).as_rational(), Some(qi(1)));
        assert!(!p3.certified_vanishing(&comps).unwrap());
    }

    #[test]
    fn vanishing_requires_enough_truncation() {
        let p = MPoly::from_terms(2, vec![(vec![0, 2], Coeff::one()), (vec![3, 0], Coeff::int(-1))]);
        // truncated inputs below the degree bound cannot certify a zero
        let comps = [
            mono(2).truncated(3).unwrap(),
            mono(3).truncated(3).unwrap(),
        ];
        assert_eq!(p.certified_vanishing(&comps), Err(SeriesError::Uncertifiable));
    }

    #[test]
    fn reduce_mod_examples() {
        // (t^3 - s)^3 mod (t^3 - s)^3 = 0
        let g = mono(3).sub(&Series::monomial(t(), Coeff::s(), 0));
        let a = g.pow(3);
        assert!(reduce_mod(&a, &g, 3).unwrap().certified_zero());

        // t mod (t^3 - s) = t
        let r = reduce_mod(&mono(1), &g, 1).unwrap();
        assert_eq!(r, mono(1));

        // not monic
        let bad = mono(3).scale(&Coeff::int(2));
        assert_eq!(reduce_mod(&mono(1), &bad, 1), Err(SeriesError::NotMonic));
    }

    #[test]
    fn reduce_mod_inverts_remainders() {
        // a*g^k + r reduces to r when deg r < k deg g
        let g = mono(2).add(&Series::monomial(t(), Coeff::s(), 1)); // t^2 + s t... monic
        let g = g.add(&Series::monomial(t(), Coeff::int(3), 0));
        let a = mono(1).add(&Series::monomial(t(), Coeff::s_power(2), 0));
        let r = Series::poly_q(t(), &[qi(5), qi(-1), qi(2)]);
        let k = 2;
        let lhs = a.mul(&g.pow(k)).add(&r);
        assert_eq!(reduce_mod(&lhs, &g, k).unwrap(), r);
    }

    #[test]
    fn compose_and_shift() {
        // (t^2)(t + t^2) = t^2 + 2t^3 + t^4
        let sq = mono(2);
        let inner = mono(1).add(&mono(2));
        let c = sq.compose(&inner).unwrap();
        assert_eq!(c, mono(2).add(&mono(3).scale(&Coeff::int(2))).add(&mono(4)));

        // taylor shift: (t^2 - 1) at t -> 1 + t gives t^2 + 2t
        let p = mono(2).sub(&Series::monomial(t(), Coeff::one(), 0));
        let shifted = p.taylor_shift(&qi(1)).unwrap();
        assert_eq!(shifted, mono(2).add(&mono(1).scale(&Coeff::int(2))));
    }

    #[test]
    fn ring_axioms_on_pseudorandom_inputs() {
        // deterministic LCG over small rational/parameter coefficients
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as i64
        };
        for _ in 0..40 {
            let mut rnd_series = |n: usize| {
                let coeffs: Vec<Coeff> = (0..=n)
                    .map(|_| {
                        let v = next() % 5 - 2;
                        let w = next() % 3 - 1;
                        Coeff::int(v).add(&Coeff::s_term(qi(w), 1))
                    })
                    .collect();
                Series::truncated_from(t(), coeffs, n)
            };
            let n = 6;
            let a = rnd_series(n);
            let b = rnd_series(n);
            let c = rnd_series(n);
            let assoc_l = a.mul(&b).mul(&c);
            let assoc_r = a.mul(&b.mul(&c));
            assert_eq!(assoc_l, assoc_r);
            let dist_l = a.mul(&b.add(&c));
            let dist_r = a.mul(&b).add(&a.mul(&c));
            assert_eq!(dist_l, dist_r);
        }
    }

    #[test]
    fn order_is_additive_under_product() {
        let a = mono(3).add(&mono(5)).truncated(12).unwrap();
        let b = mono(4).sub(&mono(6)).truncated(12).unwrap();
        let (Order::Finite(oa), Order::Finite(ob)) = (a.order(), b.order()) else {
            panic!()
        };
        assert_eq!(a.mul(&b).order(), Order::Finite(oa + ob));
    }
}
