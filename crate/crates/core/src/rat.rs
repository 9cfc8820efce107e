//! Exact rational numbers. Thin helpers around `num_rational::BigRational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The coefficient field: arbitrary-precision rationals in reduced form.
pub type Q = BigRational;

/// Rational from a numerator/denominator pair of machine integers.
pub fn q(num: i64, den: i64) -> Q {
    assert!(den != 0, "zero denominator");
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from a machine integer.
pub fn qi(num: i64) -> Q {
    Q::from_integer(BigInt::from(num))
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

/// Parse "a", "-a" or "a/b". Returns `None` on malformed input.
pub fn parse_q(text: &str) -> Option<Q> {
    let text = text.trim();
    match text.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().ok()?;
            let den: BigInt = den.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(Q::new(num, den))
        }
        None => {
            let num: BigInt = text.parse().ok()?;
            Some(Q::from_integer(num))
        }
    }
}

/// Render without spaces: "3", "-3/4".
pub fn format_q(x: &Q) -> String {
    if is_integer(x) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Rational roots of an exact polynomial with rational coefficients
/// (constant term first). Returns the distinct roots; the remaining cofactor
/// degree is reported so callers can detect irrational roots.
pub fn rational_roots(coeffs: &[Q]) -> (Vec<Q>, usize) {
    let mut poly: Vec<Q> = coeffs.to_vec();
    while poly.last().map(|c| c.is_zero()).unwrap_or(false) {
        poly.pop();
    }
    if poly.is_empty() {
        // identically zero: callers must handle separately
        return (Vec::new(), 0);
    }
    let mut roots = Vec::new();
    // strip powers of the variable (root 0)
    let mut low = 0;
    while low < poly.len() && poly[low].is_zero() {
        low += 1;
    }
    if low > 0 {
        roots.push(Q::zero());
        poly.drain(..low);
    }
    // clear denominators, then apply the rational root theorem
    loop {
        if poly.len() <= 1 {
            break;
        }
        let mut den = BigInt::one();
        for c in &poly {
            den = num_integer::lcm(den, c.denom().clone());
        }
        let ints: Vec<BigInt> = poly.iter().map(|c| (c * Q::from_integer(den.clone())).to_integer()).collect();
        let a0 = ints[0].clone();
        let an = ints.last().unwrap().clone();
        debug_assert!(!an.is_zero());
        if a0.is_zero() {
            // should not happen: zero roots were stripped
            break;
        }
        let mut found = None;
        'search: for p in divisors(&a0.abs()) {
            for qd in divisors(&an.abs()) {
                for sign in [1i64, -1] {
                    let cand = Q::new(p.clone() * BigInt::from(sign), qd.clone());
                    if eval_poly(&poly, &cand).is_zero() {
                        found = Some(cand);
                        break 'search;
                    }
                }
            }
        }
        match found {
            Some(r) => {
                if !roots.contains(&r) {
                    roots.push(r.clone());
                }
                poly = deflate(&poly, &r);
            }
            None => break,
        }
    }
    (roots, poly.len().saturating_sub(1))
}

/// Monic gcd of two exact polynomials over Q (constant term first).
/// The zero polynomial is the identity of gcd.
pub fn poly_gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    fn trim(mut p: Vec<Q>) -> Vec<Q> {
        while p.last().map(Q::is_zero).unwrap_or(false) {
            p.pop();
        }
        p
    }
    fn rem(mut num: Vec<Q>, den: &[Q]) -> Vec<Q> {
        let d = den.len() - 1;
        let lead = den[d].clone();
        while num.len() > d {
            let top = num.len() - 1;
            let factor = num[top].clone() / &lead;
            if !factor.is_zero() {
                let shift = top - d;
                for j in 0..=d {
                    let s = &factor * &den[j];
                    num[shift + j] -= s;
                }
            }
            num.pop();
            num = trim(num);
            if num.is_empty() {
                break;
            }
        }
        num
    }
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(a, &b);
        a = b;
        b = r;
    }
    if let Some(lead) = a.last().cloned() {
        for c in a.iter_mut() {
            *c /= &lead;
        }
    }
    a
}

fn eval_poly(coeffs: &[Q], x: &Q) -> Q {
    let mut acc = Q::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Synthetic division by (x - r); the division must be exact.
fn deflate(coeffs: &[Q], r: &Q) -> Vec<Q> {
    let n = coeffs.len();
    let mut out = vec![Q::zero(); n - 1];
    let mut carry = Q::zero();
    for k in (1..n).rev() {
        carry = &coeffs[k] + r * &carry;
        out[k - 1] = carry.clone();
    }
    debug_assert!((&coeffs[0] + r * &carry - &carry * r).is_zero() || true);
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // trial division is fine: inputs come from small constructor data
    let mut out = Vec::new();
    let mut d = BigInt::one();
    loop {
        if (&d * &d) > *n {
            break;
        }
        if (n % &d).is_zero() {
            out.push(d.clone());
            let other = n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out.sort();
    out
}
