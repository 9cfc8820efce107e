//! The germ notation: branches separated by `+`, each branch a tuple
//! `(e1,e2,...)` whose entries are positive integers (meaning t^e), a dash
//! for the zero component, or general polynomials in `t` with rational
//! coefficients. Also a small expression parser for polynomials in named
//! ambient coordinates, used for defining equations and surfaces.
//!
//! Parsing then printing reproduces a canonical form; printing then parsing
//! is the identity on germs.

use num_traits::{One, Zero};

use crate::coeff::Coeff;
use crate::germ::{Branch, GermError, MultiGerm};
use crate::rat::{format_q, Q};
use crate::series::{MPoly, Series, Var};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {at}: {what}")]
    Syntax { at: usize, what: String },
    #[error("branches have {found} components, expected {expected}")]
    ComponentCount { expected: usize, found: usize },
    #[error("invalid germ: {0}")]
    Germ(#[from] GermError),
}

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(found) if found == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected '{}'", c as char))),
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, what: impl Into<String>) -> ParseError {
        ParseError::Syntax { at: self.pos, what: what.into() }
    }

    fn integer(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an integer"));
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("integer out of range"))
    }

    fn rational(&mut self) -> Result<Q, ParseError> {
        let num = self.integer()? as i64;
        if self.eat(b'/') {
            let den = self.integer()? as i64;
            if den == 0 {
                return Err(self.error("zero denominator"));
            }
            Ok(crate::rat::q(num, den))
        } else {
            Ok(crate::rat::qi(num))
        }
    }
}

/// Parse the germ notation into a multi-germ.
pub fn parse_germ(text: &str) -> Result<MultiGerm, ParseError> {
    let mut cur = Cursor::new(text);
    let mut branches = Vec::new();
    loop {
        branches.push(parse_branch(&mut cur, Var(branches.len() as u16))?);
        cur.skip_ws();
        if cur.pos >= cur.text.len() {
            break;
        }
        cur.expect(b'+')?;
    }
    let n = branches[0].ambient_dim();
    for b in &branches {
        if b.ambient_dim() != n {
            return Err(ParseError::ComponentCount { expected: n, found: b.ambient_dim() });
        }
    }
    Ok(MultiGerm::new(branches)?)
}

fn parse_branch(cur: &mut Cursor, var: Var) -> Result<Branch, ParseError> {
    cur.expect(b'(')?;
    let mut comps = Vec::new();
    loop {
        comps.push(parse_component(cur, var)?);
        match cur.bump() {
            Some(b',') => continue,
            Some(b')') => break,
            _ => return Err(cur.error("expected ',' or ')'")),
        }
    }
    Ok(Branch::new(comps)?)
}

fn parse_component(cur: &mut Cursor, var: Var) -> Result<Series, ParseError> {
    match cur.peek() {
        Some(b'-') if is_dash_component(cur) => {
            cur.pos += 1;
            Ok(Series::zero(var))
        }
        Some(c) if c.is_ascii_digit() => {
            // bare integer e means t^e unless followed by polynomial syntax
            let save = cur.pos;
            let e = cur.integer()?;
            match cur.peek() {
                Some(b',') | Some(b')') => {
                    if e == 0 {
                        return Err(cur.error("exponent must be positive (use '-' for zero)"));
                    }
                    Ok(Series::t_power(var, e as usize))
                }
                _ => {
                    cur.pos = save;
                    parse_t_polynomial(cur, var)
                }
            }
        }
        Some(_) => parse_t_polynomial(cur, var),
        None => Err(cur.error("unexpected end of input")),
    }
}

/// A '-' denotes the zero component only when it is immediately delimited.
fn is_dash_component(cur: &mut Cursor) -> bool {
    let mut look = cur.pos + 1;
    while look < cur.text.len() && cur.text[look].is_ascii_whitespace() {
        look += 1;
    }
    matches!(cur.text.get(look), Some(b',') | Some(b')') | None)
}

/// Polynomial in t: terms like "t^2", "3t^4", "-1/2*t^3 + t^5".
fn parse_t_polynomial(cur: &mut Cursor, var: Var) -> Result<Series, ParseError> {
    let mut acc = Series::zero(var);
    let mut first = true;
    loop {
        let sign = match cur.peek() {
            Some(b'+') => {
                cur.pos += 1;
                Q::one()
            }
            Some(b'-') => {
                cur.pos += 1;
                -Q::one()
            }
            _ if first => Q::one(),
            _ => break,
        };
        first = false;
        let coeff = match cur.peek() {
            Some(c) if c.is_ascii_digit() => cur.rational()?,
            _ => Q::one(),
        };
        cur.eat(b'*');
        let exp = if cur.peek() == Some(b't') {
            cur.pos += 1;
            if cur.eat(b'^') {
                cur.integer()? as usize
            } else {
                1
            }
        } else {
            0
        };
        acc = acc.add(&Series::monomial(var, Coeff::constant(sign * coeff), exp));
        match cur.peek() {
            Some(b'+') | Some(b'-') => continue,
            _ => break,
        }
    }
    Ok(acc)
}

/// Canonical rendering of a multi-germ: exponent notation for monomial
/// components, polynomial notation otherwise.
pub fn print_germ(germ: &MultiGerm) -> String {
    let branches: Vec<String> = germ
        .branches()
        .iter()
        .map(|b| {
            let comps: Vec<String> = b.components().iter().map(print_component).collect();
            format!("({})", comps.join(","))
        })
        .collect();
    branches.join("+")
}

fn print_component(c: &Series) -> String {
    if c.certified_zero() {
        return "-".to_string();
    }
    // a monic monomial prints as its exponent
    if c.is_exact() {
        if let crate::series::Order::Finite(k) = c.order() {
            let top = c.degree().unwrap().unwrap_or(0);
            let only_term = (0..=top).filter(|&j| !c.coeff(j).is_zero()).count() == 1;
            if only_term && c.coeff(k).as_rational() == Some(Q::one()) && k > 0 {
                return k.to_string();
            }
        }
    }
    let top = match c.degree() {
        Ok(Some(d)) => d,
        _ => c.truncation().unwrap_or(0),
    };
    let mut parts = Vec::new();
    for k in 0..=top {
        let a = c.coeff(k);
        let Some(v) = a.as_rational() else {
            parts.push(format!("({a})*t^{k}"));
            continue;
        };
        if v.is_zero() {
            continue;
        }
        let mag = format_q(&v);
        let body = match k {
            0 => mag,
            1 if mag == "1" => "t".to_string(),
            1 if mag == "-1" => "-t".to_string(),
            1 => format!("{mag}*t"),
            _ if mag == "1" => format!("t^{k}"),
            _ if mag == "-1" => format!("-t^{k}"),
            _ => format!("{mag}*t^{k}"),
        };
        parts.push(body);
    }
    let mut out = String::new();
    for (i, p) in parts.iter().enumerate() {
        if i > 0 && !p.starts_with('-') {
            out.push('+');
        }
        out.push_str(p);
    }
    out
}

/// Parse a polynomial in the named ambient coordinates (plus the deformation
/// parameter `s`). Juxtaposed factors multiply, so "y^2-xz" works.
pub fn parse_poly(text: &str, vars: &[&str]) -> Result<MPoly, ParseError> {
    let mut cur = Cursor::new(text);
    let p = parse_expr(&mut cur, vars)?;
    cur.skip_ws();
    if cur.pos < cur.text.len() {
        return Err(cur.error("trailing input"));
    }
    Ok(p)
}

fn parse_expr(cur: &mut Cursor, vars: &[&str]) -> Result<MPoly, ParseError> {
    let mut acc = parse_term(cur, vars, true)?;
    loop {
        match cur.peek() {
            Some(b'+') => {
                cur.pos += 1;
                acc = acc.add(&parse_term(cur, vars, false)?);
            }
            Some(b'-') => {
                cur.pos += 1;
                acc = acc.sub(&parse_term(cur, vars, false)?);
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_term(cur: &mut Cursor, vars: &[&str], allow_sign: bool) -> Result<MPoly, ParseError> {
    let mut negate = false;
    if allow_sign {
        while let Some(c) = cur.peek() {
            match c {
                b'-' => {
                    negate = !negate;
                    cur.pos += 1;
                }
                b'+' => {
                    cur.pos += 1;
                }
                _ => break,
            }
        }
    }
    let mut acc = parse_factor(cur, vars)?;
    loop {
        cur.skip_ws();
        let more = match cur.peek() {
            Some(b'*') => {
                cur.pos += 1;
                true
            }
            Some(b'(') => true,
            Some(c) if c.is_ascii_digit() => true,
            Some(c) if c.is_ascii_alphabetic() => true,
            _ => false,
        };
        if !more {
            break;
        }
        acc = acc.mul(&parse_factor(cur, vars)?);
    }
    if negate {
        acc = acc.scale_coeff(&Coeff::int(-1));
    }
    Ok(acc)
}

fn parse_factor(cur: &mut Cursor, vars: &[&str]) -> Result<MPoly, ParseError> {
    let nvars = vars.len();
    let base = match cur.peek() {
        Some(b'(') => {
            cur.pos += 1;
            let inner = parse_expr(cur, vars)?;
            cur.expect(b')')?;
            inner
        }
        Some(c) if c.is_ascii_digit() => {
            let v = cur.rational()?;
            MPoly::from_terms(nvars, vec![(vec![0; nvars], Coeff::constant(v))])
        }
        Some(c) if c.is_ascii_alphabetic() => {
            // longest-match variable name, else the parameter s
            cur.skip_ws();
            let rest = &cur.text[cur.pos..];
            let mut hit: Option<(usize, usize)> = None; // (var index, length)
            for (i, name) in vars.iter().enumerate() {
                let nb = name.as_bytes();
                if rest.starts_with(nb) && hit.map(|(_, l)| nb.len() > l).unwrap_or(true) {
                    hit = Some((i, nb.len()));
                }
            }
            match hit {
                Some((i, len)) => {
                    cur.pos += len;
                    MPoly::coordinate(nvars, i)
                }
                None if c == b's' => {
                    cur.pos += 1;
                    MPoly::from_terms(nvars, vec![(vec![0; nvars], Coeff::s())])
                }
                None => return Err(cur.error(format!("unknown variable '{}'", c as char))),
            }
        }
        _ => return Err(cur.error("expected a factor")),
    };
    if cur.peek() == Some(b'^') {
        cur.pos += 1;
        let e = cur.integer()? as usize;
        let mut acc = MPoly::from_terms(nvars, vec![(vec![0; nvars], Coeff::one())]);
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        return Ok(acc);
    }
    Ok(base)
}

/// Ambient coordinate names: x, y, z, w for small dimension, z1..zn beyond.
pub fn coordinate_names(n: usize) -> Vec<String> {
    if n <= 4 {
        ["x", "y", "z", "w"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("z{i}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::Stabilize;

    #[test]
    fn parses_tuple_notation() {
        let g = parse_germ("(2,3,-,-)+(-,5,4,3)").unwrap();
        assert_eq!(g.branch_count(), 2);
        assert_eq!(g.ambient_dim(), 4);
        assert_eq!(g, MultiGerm::from_exponents(&[vec![2, 3, 0, 0], vec![0, 5, 4, 3]]));

        let g = parse_germ("(4,6,7)").unwrap();
        assert_eq!(g, MultiGerm::from_exponents(&[vec![4, 6, 7]]));
    }

    #[test]
    fn parses_extended_polynomials() {
        let g = parse_germ("(t^2, t^3+t^4)").unwrap();
        let b = &g.branches()[0];
        assert_eq!(b.components()[0], Series::t_power(Var(0), 2));
        assert_eq!(
            b.components()[1],
            Series::t_power(Var(0), 3).add(&Series::t_power(Var(0), 4))
        );
        let g2 = parse_germ("(2t^2-1/2t^3, t)").unwrap();
        assert_eq!(
            g2.branches()[0].components()[0].coeff(3).as_rational(),
            Some(crate::rat::q(-1, 2))
        );
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse_germ("(2,3"), Err(ParseError::Syntax { .. })));
        assert!(matches!(
            parse_germ("(2,3)+(1,2,3)"),
            Err(ParseError::ComponentCount { .. })
        ));
        assert!(matches!(parse_germ("(0,3)"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_germ("(-,-)"), Err(ParseError::Germ(_))));
    }

    #[test]
    fn roundtrip_is_canonical() {
        for text in ["(2,3,-,-)+(-,5,4,3)", "(4,6,7)", "(1,-)+(-,1)", "(t^2,t^3+t^4)"] {
            let g = parse_germ(text).unwrap();
            let printed = print_germ(&g);
            let reparsed = parse_germ(&printed).unwrap();
            assert_eq!(g, reparsed, "roundtrip of {text}");
            assert_eq!(print_germ(&reparsed), printed, "printing is idempotent");
        }
        assert_eq!(
            print_germ(&parse_germ("(2, 3 , - ,-) + (-,5,4,3)").unwrap()),
            "(2,3,-,-)+(-,5,4,3)"
        );
    }

    #[test]
    fn parsed_germs_compute() {
        let g = parse_germ("(4,6,7)").unwrap();
        assert_eq!(g.delta(&Stabilize::default()).unwrap(), 5);
    }

    #[test]
    fn poly_parser_reads_table_style_equations() {
        let p = parse_poly("y^2-xz", &["x", "y", "z"]).unwrap();
        assert_eq!(p.total_degree(), 2);
        let comps = [
            Series::t_power(Var(0), 4),
            Series::t_power(Var(0), 5),
            Series::t_power(Var(0), 6),
        ];
        assert!(p.eval_series(&comps).certified_zero());

        let q = parse_poly("z^2-x^3", &["x", "y", "z"]).unwrap();
        assert!(q.eval_series(&comps).certified_zero());

        // parameter-dependent coefficients
        let f = parse_poly("2zws^2 - x", &["x", "y", "z", "w"]).unwrap();
        assert_eq!(f.total_degree(), 2);
        assert_eq!(f.terms().len(), 2);
    }

    #[test]
    fn poly_parser_handles_parens_and_signs() {
        let p = parse_poly("-(x-y)(x+y) + x^2", &["x", "y"]).unwrap();
        let expected = parse_poly("y^2", &["x", "y"]).unwrap();
        assert_eq!(p, expected);
    }
}
