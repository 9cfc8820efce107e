//! The machine-readable classification catalogue: every normal form with its
//! constructor and frozen headline invariants, defining equations where the
//! classification provides them, the adjacency graph with arrow kinds and
//! witness families, and entry verification.
//!
//! Labels are strings. Canonical labels look like "(4,6,7)", "A4", "D5",
//! "T7*", "U9", "L(4,2)". Two suffixes compose: "vL", "vL2", ... wedges an
//! entry with that many coordinate-axis lines on fresh axes, and "@n4"
//! instantiates a series entry at embedding dimension 4. Aliases (monomial
//! tuples, classical names) resolve to canonical labels.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::coeff::Coeff;
use crate::deform::{
    akl_to_dk_family, cusp_m3_family, monomialize_family, partition_family,
    quintic_congruence_family, wedge_family, DeformationFamily,
};
use crate::germ::{Branch, GermError, MultiGerm, Signature, Stabilize};
use crate::notation::{coordinate_names, parse_germ, parse_poly};
use crate::rat::{qi, Q};
use crate::series::{MPoly, Series, Var};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum AtlasError {
    #[error("unknown label '{0}'")]
    UnknownLabel(String),
    #[error("parameter out of range for '{label}': {what}")]
    BadParameter { label: String, what: String },
    #[error(transparent)]
    Germ(#[from] GermError),
}

/// Instantiation parameters. Not every entry uses every field.
#[derive(Clone, Debug)]
pub struct Params {
    pub k: usize,
    pub n: usize,
    pub lambda: Q,
}

impl Default for Params {
    fn default() -> Self {
        Params { k: 2, n: 3, lambda: qi(2) }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EntryTag {
    Simple,
    Confining,
    NonSimpleExample,
}

impl EntryTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            EntryTag::Simple => "simple",
            EntryTag::Confining => "confining",
            EntryTag::NonSimpleExample => "non-simple-example",
        }
    }
}

/// Equation data attached to an entry: plain polynomials and/or the rows of
/// a 2x3 matrix whose 2x2 minors cut out the curve. The optional frame is a
/// linear change of coordinates applied to the parametrisation before
/// substitution (recorded where the published equation pair lives in a
/// rotated frame). `l` in equation text stands for the modulus.
#[derive(Clone, Debug, Default)]
pub struct EquationSet {
    pub polys: Vec<String>,
    pub matrix: Option<[[String; 3]; 2]>,
    pub frame: Option<Vec<Vec<i64>>>,
}

impl EquationSet {
    fn eqs(polys: &[&str]) -> Self {
        EquationSet {
            polys: polys.iter().map(|s| s.to_string()).collect(),
            ..Default::default()
        }
    }

    fn minors(rows: [[&str; 3]; 2]) -> Self {
        EquationSet {
            polys: Vec::new(),
            matrix: Some([
                [rows[0][0].into(), rows[0][1].into(), rows[0][2].into()],
                [rows[1][0].into(), rows[1][1].into(), rows[1][2].into()],
            ]),
            frame: None,
        }
    }

    fn with_frame(mut self, frame: Vec<Vec<i64>>) -> Self {
        self.frame = Some(frame);
        self
    }
}

type Builder = Box<dyn Fn(&Params) -> Result<MultiGerm, AtlasError> + Send + Sync>;
type Expected = Box<dyn Fn(&Params) -> (usize, usize) + Send + Sync>;

/// Which parameter a series entry runs over.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ParamKind {
    Fixed,
    K,
    N,
    Lambda,
}

/// One catalogue entry.
pub struct AtlasEntry {
    pub label: String,
    pub aliases: Vec<String>,
    pub tag: EntryTag,
    pub kind: ParamKind,
    /// Inclusive range of the entry's k or n parameter.
    pub range: Option<(usize, usize)>,
    pub citation: String,
    pub equations: Option<EquationSet>,
    /// Run the equations at a second modulus value as well.
    pub lambda_equations: bool,
    /// Series cores stay simple when wedged with extra coordinate lines;
    /// the fixed sporadic germs do not.
    pub wedge_extends: bool,
    expected: Expected,
    builder: Builder,
}

impl AtlasEntry {
    fn check_range(&self, params: &Params) -> Result<(), AtlasError> {
        let value = match self.kind {
            ParamKind::K => params.k,
            ParamKind::N => params.n,
            ParamKind::Lambda => {
                if params.lambda.is_zero() || params.lambda == qi(1) {
                    return Err(AtlasError::BadParameter {
                        label: self.label.clone(),
                        what: "the modulus must avoid 0 and 1".into(),
                    });
                }
                return Ok(());
            }
            ParamKind::Fixed => return Ok(()),
        };
        if let Some((lo, hi)) = self.range {
            if value < lo || value > hi {
                return Err(AtlasError::BadParameter {
                    label: self.label.clone(),
                    what: format!("parameter {value} outside [{lo},{hi}]"),
                });
            }
        }
        Ok(())
    }

    pub fn instantiate(&self, params: &Params) -> Result<MultiGerm, AtlasError> {
        self.check_range(params)?;
        (self.builder)(params)
    }

    /// Frozen (delta, branch count) for this instantiation.
    pub fn expected_invariants(&self, params: &Params) -> (usize, usize) {
        (self.expected)(params)
    }
}

// ---------------------------------------------------------------------------
// germ constructors

fn germ_text(text: &str) -> Result<MultiGerm, AtlasError> {
    parse_germ(text).map_err(|e| AtlasError::BadParameter {
        label: text.to_string(),
        what: e.to_string(),
    })
}

fn a_series(k: usize) -> MultiGerm {
    if k % 2 == 0 {
        MultiGerm::from_exponents(&[vec![2, k + 1]])
    } else {
        MultiGerm::from_exponents(&[vec![1, 0], vec![1, (k + 1) / 2]])
    }
}

fn d_series(k: usize) -> MultiGerm {
    if k % 2 == 0 {
        let j = (k - 2) / 2;
        MultiGerm::from_exponents(&[vec![1, 0], vec![1, j], vec![0, 1]])
    } else {
        let j = (k - 3) / 2;
        MultiGerm::from_exponents(&[vec![2, 2 * j + 1], vec![0, 1]])
    }
}

fn m_series(k: usize) -> MultiGerm {
    MultiGerm::from_exponents(&[(k..2 * k).collect()])
}

fn axes(n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|i| {
            let mut row = vec![0; n];
            row[i] = 1;
            row
        })
        .collect()
}

/// 0, 1, -1, 2, -2, ...
fn small_rational(i: usize) -> Q {
    let i = i as i64;
    if i == 0 {
        qi(0)
    } else if i % 2 == 1 {
        qi((i + 1) / 2)
    } else {
        qi(-(i / 2))
    }
}

/// The line families: r lines in dimension n for r - n in {0, 1, 2}.
fn lines_family(r: usize, n: usize, lambda: &Q) -> Result<MultiGerm, AtlasError> {
    if r == n {
        return Ok(MultiGerm::from_exponents(&axes(n)));
    }
    if r == n + 1 {
        let mut rows = axes(n);
        rows.push(vec![1; n]);
        return Ok(MultiGerm::from_exponents(&rows));
    }
    assert_eq!(r, n + 2, "line families carry at most two extra lines");
    let v = Var(0);
    match n {
        1 => {
            // three smooth branches with a common tangent and planar 2-jet
            let b1 = Branch::new(vec![Series::zero(v), Series::t_power(v, 1), Series::zero(v)])?;
            let b2 = Branch::new(vec![
                Series::t_power(v, 2),
                Series::t_power(v, 1),
                Series::zero(v),
            ])?;
            let b3 = Branch::new(vec![
                Series::t_power(v, 2).scale(&Coeff::constant(lambda.clone())),
                Series::t_power(v, 1),
                Series::t_power(v, 3),
            ])?;
            Ok(MultiGerm::new(vec![b1, b2, b3])?)
        }
        2 => {
            // three coplanar lines plus one lifted out of the plane
            let b1 = Branch::new(vec![Series::zero(v), Series::t_power(v, 1), Series::zero(v)])?;
            let b2 = Branch::new(vec![Series::t_power(v, 1), Series::zero(v), Series::zero(v)])?;
            let b3 = Branch::new(vec![
                Series::t_power(v, 1),
                Series::t_power(v, 1),
                Series::zero(v),
            ])?;
            let b4 = Branch::new(vec![
                Series::t_power(v, 1).scale(&Coeff::constant(lambda.clone())),
                Series::t_power(v, 1),
                Series::t_power(v, 2),
            ])?;
            Ok(MultiGerm::new(vec![b1, b2, b3, b4])?)
        }
        _ => {
            // n+2 lines with directions (1, a, ..., a^(n-1)) over distinct
            // small rationals: every n of them span (Vandermonde)
            let mut branches = Vec::new();
            for j in 0..n + 2 {
                let a = small_rational(j);
                let mut comps = Vec::with_capacity(n);
                let mut power = Q::from_integer(1.into());
                for _ in 0..n {
                    comps.push(Series::monomial(v, Coeff::constant(power.clone()), 1));
                    power *= &a;
                }
                branches.push(Branch::new(comps)?);
            }
            Ok(MultiGerm::new(branches)?)
        }
    }
}

fn etilde7(lambda: &Q) -> Result<MultiGerm, AtlasError> {
    let v = Var(0);
    Ok(MultiGerm::new(vec![
        Branch::new(vec![Series::zero(v), Series::t_power(v, 1)])?,
        Branch::new(vec![Series::t_power(v, 1), Series::zero(v)])?,
        Branch::new(vec![Series::t_power(v, 1), Series::t_power(v, 1)])?,
        Branch::new(vec![
            Series::t_power(v, 1).scale(&Coeff::constant(lambda.clone())),
            Series::t_power(v, 1),
        ])?,
    ])?)
}

fn etilde8(lambda: &Q) -> Result<MultiGerm, AtlasError> {
    let v = Var(0);
    Ok(MultiGerm::new(vec![
        Branch::new(vec![Series::zero(v), Series::t_power(v, 1)])?,
        Branch::new(vec![Series::t_power(v, 2), Series::t_power(v, 1)])?,
        Branch::new(vec![
            Series::t_power(v, 2).scale(&Coeff::constant(lambda.clone())),
            Series::t_power(v, 1),
        ])?,
    ])?)
}

/// Multiplicity-3 core in coordinates 1..3, coordinate-axis lines on axes
/// 4..n, one extra smooth branch with exponent 1 in the given slots.
fn core_with_lines(core: &[usize], extra_slots: &[usize], n: usize) -> MultiGerm {
    let mut rows = Vec::new();
    let mut core_row = vec![0; n];
    core_row[..core.len()].copy_from_slice(core);
    rows.push(core_row);
    // lines start after the core's coordinate block
    for axis in core.len().min(3)..n {
        let mut row = vec![0; n];
        row[axis] = 1;
        rows.push(row);
    }
    let mut extra = vec![0; n];
    for &slot in extra_slots {
        extra[slot] = 1;
    }
    rows.push(extra);
    MultiGerm::from_exponents(&rows)
}

/// Cusp core, lines on axes 3..n, extra branch (1,-,e,...,e).
fn cusp_with_lines(n: usize, tail_exp: usize) -> MultiGerm {
    let mut rows = Vec::new();
    let mut cusp = vec![0; n];
    cusp[0] = 2;
    cusp[1] = 3;
    rows.push(cusp);
    for axis in 2..n {
        let mut row = vec![0; n];
        row[axis] = 1;
        rows.push(row);
    }
    let mut extra = vec![0; n];
    extra[0] = 1;
    for slot in 2..n {
        extra[slot] = tail_exp;
    }
    rows.push(extra);
    MultiGerm::from_exponents(&rows)
}

/// The dihedral space series: even m = 2k+4 has the cusp (2,2k+1); odd
/// m = 2k+3 has the smooth pair (1,-)+(1,k); plus axis lines and the
/// diagonal branch (-,1,1,...,1).
fn s_series(m: usize, n: usize) -> MultiGerm {
    let mut rows: Vec<Vec<usize>> = Vec::new();
    if m % 2 == 0 {
        let k = (m - 4) / 2;
        let mut cusp = vec![0; n];
        cusp[0] = 2;
        cusp[1] = 2 * k + 1;
        rows.push(cusp);
    } else {
        let k = (m - 3) / 2;
        let mut l1 = vec![0; n];
        l1[0] = 1;
        rows.push(l1);
        let mut l2 = vec![0; n];
        l2[0] = 1;
        l2[1] = k;
        rows.push(l2);
    }
    for axis in 2..n {
        let mut row = vec![0; n];
        row[axis] = 1;
        rows.push(row);
    }
    let mut extra = vec![0; n];
    extra[1] = 1;
    for slot in 2..n {
        extra[slot] = 1;
    }
    rows.push(extra);
    MultiGerm::from_exponents(&rows)
}

/// Canonical label for a suffix-free series instance.
fn series_instance_label(series: &str, kind: ParamKind, value: usize) -> String {
    match (series, kind) {
        ("L(n,n)", _) => format!("L({value},{value})"),
        ("L(n+1,n)", _) => format!("L({},{value})", value + 1),
        ("L(n+2,n)", _) => format!("L({},{value})", value + 2),
        (_, ParamKind::K) => format!("{series}{value}"),
        (_, ParamKind::N) => {
            if value == 3 {
                series.to_string()
            } else {
                format!("{series}@n{value}")
            }
        }
        _ => series.to_string(),
    }
}

// ---------------------------------------------------------------------------
// the catalogue

fn fixed_entry(
    label: &str,
    aliases: &[&str],
    tag: EntryTag,
    citation: &str,
    delta: usize,
    branches: usize,
    equations: Option<EquationSet>,
) -> AtlasEntry {
    let text = label.to_string();
    AtlasEntry {
        label: label.to_string(),
        aliases: aliases.iter().map(|s| s.to_string()).collect(),
        tag,
        kind: ParamKind::Fixed,
        range: None,
        citation: citation.to_string(),
        equations,
        lambda_equations: false,
        wedge_extends: false,
        expected: Box::new(move |_| (delta, branches)),
        builder: Box::new(move |_| fixed_germ(&text)),
    }
}

/// Constructors for the fixed (non-parametrised) labels.
fn fixed_germ(label: &str) -> Result<MultiGerm, AtlasError> {
    match label {
        "(4,5,6,7)vL" => germ_text("(4,5,6,7,-)+(-,-,-,-,1)"),
        "(4,5,7)vL" => germ_text("(4,5,7,-)+(-,-,-,1)"),
        "(4,5,6)vL" => germ_text("(4,5,6,-)+(-,-,-,1)"),
        _ if label.starts_with('(') => germ_text(label),
        "E6" => germ_text("(3,4)"),
        "E7" => germ_text("(2,3)+(1,-)"),
        "E8" => germ_text("(3,5)"),
        "E6(1)" => germ_text("(3,4,5)"),
        "E7(1)" => germ_text("(2,3,-)+(1,-,2)"),
        "E8(1)" => germ_text("(3,5,7)"),
        "E12(2)" => germ_text("(3,7,8)"),
        "Z10" => germ_text("(4,6,7)"),
        "Z9" => germ_text("(2,3,-)+(2,-,3)"),
        "Z9(1)" => germ_text("(2,3,-,-)+(2,-,3,4)"),
        "W9" => germ_text("(3,4,5)+(1,-,-)"),
        "W8" => germ_text("(4,5,6)"),
        "W8*" => germ_text("(4,5,7)"),
        "T9" => germ_text("(2,3,-)+(-,5,2)"),
        "T8" => germ_text("(2,3,-)+(-,-,1)+(-,2,1)"),
        "T7" => germ_text("(2,3,-)+(-,3,2)"),
        "T7*" => germ_text("(2,3,-)+(-,2,3)"),
        "J21(2)" => germ_text("(2,5,-)+(1,-,2)"),
        "J20(2)" => germ_text("(1,-,-)+(1,2,-)+(1,-,2)"),
        "A2vM3" => germ_text("(2,3,-,-,-)+(-,-,3,4,5)"),
        "A2vA4" => germ_text("(2,3,-,-)+(-,-,2,5)"),
        "A2vA3" => germ_text("(2,3,-,-)+(-,-,1,-)+(-,-,1,2)"),
        "A2vA2" => germ_text("(2,3,-,-)+(-,-,2,3)"),
        "A2vA2vL" => germ_text("(2,3,-,-,-)+(-,-,2,3,-)+(-,-,-,-,1)"),
        "M6" => Ok(m_series(6)),
        other => Err(AtlasError::UnknownLabel(other.to_string())),
    }
}

fn build_entries() -> Vec<AtlasEntry> {
    let mut entries: Vec<AtlasEntry> = Vec::new();
    let spor = "sporadic curve list";

    let fixed: Vec<(&str, Vec<&str>, usize, usize, Option<EquationSet>)> = vec![
        ("(5,6,7,8,9)", vec!["M5"], 4, 1, None),
        ("(5,6,7,8)", vec![], 5, 1, None),
        ("(4,5,6,7)", vec!["M4"], 3, 1, None),
        ("W8", vec!["(4,5,6)"], 4, 1, Some(EquationSet::eqs(&["y^2-xz", "z^2-x^3"]))),
        (
            "W8*",
            vec!["(4,5,7)"],
            4,
            1,
            Some(EquationSet::minors([["x", "y", "z"], ["z", "x^2", "y^2"]])),
        ),
        ("(4,6,7,9)", vec![], 4, 1, None),
        ("Z10", vec!["(4,6,7)"], 5, 1, Some(EquationSet::eqs(&["y^2-x^3", "z^2-yx^2"]))),
        (
            "E12(2)",
            vec!["(3,7,8)"],
            4,
            1,
            Some(EquationSet::minors([["x^2", "y", "z"], ["y", "z", "x^3"]])),
        ),
        ("(4,5,6,7)+(-,-,1,-)", vec![], 5, 2, None),
        ("(4,5,6,7)+(-,-,-,1)", vec![], 5, 2, None),
        ("(4,5,6,7)vL", vec!["M4vL"], 4, 2, None),
        ("(4,5,7)vL", vec!["W8*vL"], 5, 2, None),
        ("(4,5,6)vL", vec!["W8vL"], 5, 2, None),
        ("(2,3,-,-)+(-,4,5,3)", vec![], 5, 2, None),
        ("(2,3,-,-)+(-,5,4,3)", vec![], 5, 2, None),
        ("A2vM3", vec![], 4, 2, None),
        ("(2,3,-,-)+(-,3,2,-)+(-,-,-,1)", vec![], 5, 3, None),
        ("(2,3,-,-)+(3,-,2,-)+(-,-,-,1)", vec![], 5, 3, None),
        ("(2,3,-,-)+(-,-,3,2)+(-,1,1,-)", vec![], 5, 3, None),
        ("(2,3,-,-)+(-,-,3,2)+(1,-,1,-)", vec![], 5, 3, None),
        ("A2vA2vL", vec![], 4, 3, None),
        ("A2vA4", vec![], 4, 2, None),
        ("A2vA3", vec![], 4, 3, None),
        ("A2vA2", vec![], 3, 2, None),
        ("T9", vec!["(2,3,-)+(-,5,2)"], 5, 2, Some(EquationSet::eqs(&["xz", "y^2-z^5-x^3"]))),
        (
            "T8",
            vec!["(2,3,-)+(-,-,1)+(-,2,1)"],
            5,
            3,
            Some(EquationSet::eqs(&["xz", "y^2-yz^2-x^3"])),
        ),
        ("T7", vec!["(2,3,-)+(-,3,2)", "(3,2,-)+(3,-,2)"], 4, 2, Some(EquationSet::eqs(&["xz", "y^2-z^3-x^3"]))),
        (
            "T7*",
            vec!["(2,3,-)+(-,2,3)", "(2,3,-)+(3,-,2)"],
            4,
            2,
            Some(EquationSet::minors([["x", "y", "z"], ["0", "z", "y^2-x^3"]])),
        ),
        (
            "Z9",
            vec!["(2,3,-)+(2,-,3)"],
            5,
            2,
            // the published pair of equations lives in the rotated frame
            // (x, y, z) -> (x, y+z, y-z)
            Some(EquationSet::eqs(&["y^2-x^3", "z^2-x^3"]).with_frame(vec![
                vec![1, 0, 0],
                vec![0, 1, 1],
                vec![0, 1, -1],
            ])),
        ),
        ("Z9(1)", vec!["(2,3,-,-)+(2,-,3,4)"], 4, 2, None),
        ("W9", vec!["(3,4,5)+(1,-,-)"], 5, 2, Some(EquationSet::eqs(&["y^2-xz", "z^2-yx^2"]))),
        ("(3,4,5,-)+(1,-,-,2)", vec![], 4, 2, None),
        (
            "J20(2)",
            vec!["(1,-,-)+(1,2,-)+(1,-,2)", "S3t"],
            4,
            3,
            Some(EquationSet::minors([["z", "y-x^2", "0"], ["0", "x^2-z", "y"]])),
        ),
        (
            "J21(2)",
            vec!["(2,5,-)+(1,-,2)"],
            4,
            2,
            Some(EquationSet::minors([["z", "y", "x^3"], ["0", "x^2-z", "y"]])),
        ),
        (
            "E6(1)",
            vec!["(3,4,5)", "M3"],
            2,
            1,
            Some(EquationSet::minors([["x", "y", "z"], ["y", "z", "x^2"]])),
        ),
        (
            "E8(1)",
            vec!["(3,5,7)"],
            3,
            1,
            Some(EquationSet::minors([["x", "y", "z"], ["y", "z", "x^3"]])),
        ),
        (
            "E7(1)",
            vec!["(2,3,-)+(1,-,2)"],
            3,
            2,
            Some(EquationSet::minors([["z", "x", "y"], ["0", "y", "x^2-z"]])),
        ),
        ("E6", vec!["(3,4)"], 3, 1, None),
        ("E7", vec!["(2,3)+(1,-)"], 4, 2, None),
        ("E8", vec!["(3,5)"], 4, 1, None),
        ("M6", vec![], 5, 1, None),
        ("(5,6,7,9)", vec![], 5, 1, None),
        ("(2,3,-,-)+(5,-,4,3)", vec![], 5, 2, None),
        ("(2,3,-,-)+(4,-,5,3)", vec![], 5, 2, None),
    ];
    for (label, aliases, delta, branches, eqs) in fixed {
        let tag = match label {
            "M6" | "(5,6,7,9)" | "(2,3,-,-)+(5,-,4,3)" | "(2,3,-,-)+(4,-,5,3)" => {
                EntryTag::NonSimpleExample
            }
            _ => EntryTag::Simple,
        };
        entries.push(fixed_entry(label, &aliases, tag, spor, delta, branches, eqs));
    }
    for label in ["E6", "E7", "E8", "E6(1)", "E7(1)", "E8(1)"] {
        if let Some(e) = entries.iter_mut().find(|e| e.label == label) {
            e.wedge_extends = true;
            e.citation = "indecomposable exceptional cores".into();
        }
    }

    // series entries
    entries.push(AtlasEntry {
        label: "A".into(),
        aliases: Vec::new(),
        tag: EntryTag::Simple,
        kind: ParamKind::K,
        range: Some((1, 25)),
        citation: "plane double-point series".into(),
        equations: None,
        lambda_equations: false,
        wedge_extends: true,
        expected: Box::new(|p| ((p.k + 1) / 2, if p.k % 2 == 0 { 1 } else { 2 })),
        builder: Box::new(|p| Ok(a_series(p.k))),
    });
    entries.push(AtlasEntry {
        label: "D".into(),
        aliases: Vec::new(),
        tag: EntryTag::Simple,
        kind: ParamKind::K,
        range: Some((4, 25)),
        citation: "plane triple-point series".into(),
        equations: None,
        lambda_equations: false,
        wedge_extends: true,
        expected: Box::new(|p| (p.k / 2 + 1, if p.k % 2 == 0 { 3 } else { 2 })),
        builder: Box::new(|p| Ok(d_series(p.k))),
    });
    entries.push(AtlasEntry {
        label: "U9".into(),
        aliases: vec!["(3,5,7)+(-,-,1)".into()],
        tag: EntryTag::Simple,
        kind: ParamKind::N,
        range: Some((3, 8)),
        citation: "deep triple-point core with attached lines".into(),
        equations: Some(EquationSet::eqs(&["y^2-xz", "yz-x^4"])),
        lambda_equations: false,
        wedge_extends: true,
        expected: Box::new(|p| (p.n + 2, p.n - 1)),
        builder: Box::new(|p| {
            let slots: Vec<usize> = (2..p.n).collect();
            Ok(core_with_lines(&[3, 5, 7], &slots, p.n))
        }),
    });
    entries.push(AtlasEntry {
        label: "U7*".into(),
        aliases: vec!["(3,4,5)+(-,1,-)".into()],
        tag: EntryTag::Simple,
        kind: ParamKind::N,
        range: Some((3, 8)),
        citation: "minimal triple-point core, line through the osculating plane".into(),
        equations: Some(EquationSet::minors([["x", "y", "z"], ["z", "x^2", "xy"]])),
        lambda_equations: false,
        wedge_extends: true,
        expected: Box::new(|p| (p.n + 1, p.n - 1)),
        builder: Box::new(|p| {
            let mut slots: Vec<usize> = vec![1];
            slots.extend(3..p.n);
            Ok(core_with_lines(&[3, 4, 5], &slots, p.n))
        }),
    });
    entries.push(AtlasEntry {
        label: "U7".into(),
        aliases: vec!["(3,4,5)+(-,-,1)".into()],
        tag: EntryTag::Simple,
        kind: ParamKind::N,
        range: Some((3, 8)),
        citation: "minimal triple-point core with attached lines".into(),
        equations: Some(EquationSet::eqs(&["y^2-xz", "yz-x^3"])),
        lambda_equations: false,
        wedge_extends: true,
        expected: Box::new(|p| (p.n + 1, p.n - 1)),
        builder: Box::new(|p| {
            let slots: Vec<usize> = (2..p.n).collect();
            Ok(core_with_lines(&[3, 4, 5], &slots, p.n))
        }),
    });
    entries.push(AtlasEntry {
        label: "U8".into(),
        aliases: vec!["(2,3,-)+(1,-,2)+(-,-,1)".into()],
        tag: EntryTag::Simple,
        kind: ParamKind::N,
        range: Some((3, 8)),
        citation: "cusp with a curved branch along its tangent, plus lines".into(),
        equations: Some(EquationSet::eqs(&["zy", "y^2-x^3+zx"])),
        lambda_equations: false,
        wedge_extends: true,
        expected: Box::new(|p| (p.n + 2, p.n)),
        builder: Box::new(|p| Ok(cusp_with_lines(p.n, 2))),
    });
    entries.push(AtlasEntry {
        label: "S6*".into(),
        aliases: vec!["(2,3,-)+(-,-,1)+(1,-,1)".into()],
        tag: EntryTag::Simple,
        kind: ParamKind::N,
        range: Some((3, 8)),
        citation: "cusp with a straight branch along its tangent, plus lines".into(),
        equations: Some(EquationSet::minors([["z", "x", "y"], ["0", "y", "x^2-xz"]])),
        lambda_equations: false,
        wedge_extends: true,
        expected: Box::new(|p| (p.n + 1, p.n)),
        builder: Box::new(|p| Ok(cusp_with_lines(p.n, 1))),
    });
    entries.push(AtlasEntry {
        label: "S".into(),
        aliases: Vec::new(),
        tag: EntryTag::Simple,
        kind: ParamKind::K,
        range: Some((6, 30)),
        citation: "dihedral core with a diagonal line".into(),
        equations: Some(EquationSet::eqs(&[])), // filled per k below
        lambda_equations: false,
        wedge_extends: true,
        expected: Box::new(|p| {
            let k = if p.k % 2 == 0 { (p.k - 4) / 2 } else { (p.k - 3) / 2 };
            let r = if p.k % 2 == 0 { p.n } else { p.n + 1 };
            (k + p.n, r)
        }),
        builder: Box::new(|p| Ok(s_series(p.k, p.n))),
    });

    // the axis germs for n = 2 and the n = 2 extra-line germ are already
    // catalogued as A1 and D4; the sweep starts past them to keep labels
    // canonical
    entries.push(AtlasEntry {
        label: "L(n,n)".into(),
        aliases: vec!["L".into(), "M1".into()],
        tag: EntryTag::Simple,
        kind: ParamKind::N,
        range: Some((1, 9)),
        citation: "coordinate axes".into(),
        equations: None,
        lambda_equations: false,
        wedge_extends: false,
        expected: Box::new(|p| (p.n.saturating_sub(1), p.n)),
        builder: Box::new(|p| lines_family(p.n, p.n, &p.lambda)),
    });
    entries.push(AtlasEntry {
        label: "L(n+1,n)".into(),
        aliases: Vec::new(),
        tag: EntryTag::Simple,
        kind: ParamKind::N,
        range: Some((2, 8)),
        citation: "one line more than the dimension, general position".into(),
        equations: None,
        lambda_equations: false,
        wedge_extends: false,
        expected: Box::new(|p| (p.n + 1, p.n + 1)),
        builder: Box::new(|p| lines_family(p.n + 1, p.n, &p.lambda)),
    });
    entries.push(AtlasEntry {
        label: "L(3,1)".into(),
        aliases: Vec::new(),
        tag: EntryTag::Confining,
        kind: ParamKind::Lambda,
        range: None,
        citation: "three tangent smooth branches with planar 2-jet".into(),
        equations: Some(EquationSet::minors([
            ["z", "l(l-1)y", "lx"],
            ["0", "x-ly^2", "lz-xy"],
        ])),
        lambda_equations: true,
        wedge_extends: false,
        expected: Box::new(|_| (5, 3)),
        builder: Box::new(|p| lines_family(3, 1, &p.lambda)),
    });
    entries.push(AtlasEntry {
        label: "L(4,2)".into(),
        aliases: Vec::new(),
        tag: EntryTag::Confining,
        kind: ParamKind::Lambda,
        range: None,
        citation: "four concurrent lines, one lifted out of the plane".into(),
        equations: Some(EquationSet::minors([
            ["z", "l(x-y)", "y(x-y)"],
            ["0", "x-ly", "z-y^2"],
        ])),
        lambda_equations: true,
        wedge_extends: false,
        expected: Box::new(|_| (5, 4)),
        builder: Box::new(|p| lines_family(4, 2, &p.lambda)),
    });
    entries.push(AtlasEntry {
        label: "L(n+2,n)".into(),
        aliases: Vec::new(),
        tag: EntryTag::Confining,
        kind: ParamKind::N,
        range: Some((3, 8)),
        citation: "two lines more than the dimension, generic position".into(),
        equations: None,
        lambda_equations: false,
        wedge_extends: false,
        expected: Box::new(|p| (p.n + 3, p.n + 2)),
        builder: Box::new(|p| lines_family(p.n + 2, p.n, &p.lambda)),
    });
    entries.push(AtlasEntry {
        label: "Etilde7".into(),
        aliases: Vec::new(),
        tag: EntryTag::Confining,
        kind: ParamKind::Lambda,
        range: None,
        citation: "four concurrent plane lines".into(),
        equations: None,
        lambda_equations: false,
        wedge_extends: false,
        expected: Box::new(|_| (6, 4)),
        builder: Box::new(|p| etilde7(&p.lambda)),
    });
    entries.push(AtlasEntry {
        label: "Etilde8".into(),
        aliases: Vec::new(),
        tag: EntryTag::Confining,
        kind: ParamKind::Lambda,
        range: None,
        citation: "three plane branches with a common tangent".into(),
        equations: None,
        lambda_equations: false,
        wedge_extends: false,
        expected: Box::new(|_| (6, 3)),
        builder: Box::new(|p| etilde8(&p.lambda)),
    });

    entries
}

/// The full catalogue.
pub struct Atlas {
    entries: Vec<AtlasEntry>,
    alias_index: BTreeMap<String, usize>,
    params: Stabilize,
}

impl Atlas {
    pub fn new() -> Atlas {
        Atlas::with_params(Stabilize::default())
    }

    pub fn with_params(params: Stabilize) -> Atlas {
        let entries = build_entries();
        let mut alias_index = BTreeMap::new();
        for (i, e) in entries.iter().enumerate() {
            alias_index.insert(e.label.clone(), i);
            for a in &e.aliases {
                alias_index.insert(a.clone(), i);
            }
        }
        Atlas { entries, alias_index, params }
    }

    pub fn entries(&self) -> &[AtlasEntry] {
        &self.entries
    }

    pub fn stabilize(&self) -> &Stabilize {
        &self.params
    }

    pub fn entry(&self, label: &str) -> Option<&AtlasEntry> {
        self.alias_index.get(label).map(|&i| &self.entries[i])
    }

    /// Resolve a base label (no suffixes) to an entry and the parameter
    /// assignment it implies.
    fn resolve(&self, base: &str, params: &Params) -> Option<(&AtlasEntry, Params)> {
        // rewrite the small monomial curves onto their canonical labels
        let rewritten = match base {
            "M2" => "A2",
            "D3" => "A3",
            "L(2,2)" => "A1",
            "L(3,2)" => "D4",
            other => other,
        };
        if let Some(e) = self.entry(rewritten) {
            return Some((e, params.clone()));
        }
        // numeric line families L(r,n)
        if let Some(rest) = rewritten.strip_prefix("L(") {
            if let Some(inner) = rest.strip_suffix(')') {
                let mut it = inner.split(',');
                if let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) {
                    if let (Ok(r), Ok(n)) = (a.parse::<usize>(), b.parse::<usize>()) {
                        let series = match r.checked_sub(n) {
                            Some(0) => "L(n,n)",
                            Some(1) => "L(n+1,n)",
                            Some(2) if n == 1 => "L(3,1)",
                            Some(2) if n == 2 => "L(4,2)",
                            Some(2) => "L(n+2,n)",
                            _ => return None,
                        };
                        let e = self.entry(series)?;
                        return Some((e, Params { n, ..params.clone() }));
                    }
                }
            }
        }
        // numeric series instances: A4, D5, S8, M7
        let (head, digits) = rewritten.split_at(
            rewritten
                .find(|c: char| c.is_ascii_digit())
                .unwrap_or(rewritten.len()),
        );
        if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
            if let Ok(k) = digits.parse::<usize>() {
                if matches!(head, "A" | "D" | "S") {
                    let e = self.entry(head)?;
                    return Some((e, Params { k, ..params.clone() }));
                }
            }
        }
        None
    }

    /// Resolve a label with optional "@nK" and "vLj" suffixes, then
    /// instantiate it.
    pub fn instantiate(&self, label: &str, params: &Params) -> Result<MultiGerm, AtlasError> {
        let (base, wedge_lines, n_override) = split_label(label);
        let mut p = params.clone();
        if let Some(n) = n_override {
            p.n = n;
        }
        let (entry, p) = self
            .resolve(&base, &p)
            .ok_or_else(|| AtlasError::UnknownLabel(base.clone()))?;
        let core = entry.instantiate(&p)?;
        if wedge_lines == 0 {
            return Ok(core);
        }
        let lines = MultiGerm::from_exponents(&axes(wedge_lines));
        Ok(core.wedge(&lines))
    }

    /// Frozen expected (delta, branch count) for a possibly suffixed label.
    pub fn expected_invariants(&self, label: &str, params: &Params) -> Option<(usize, usize)> {
        let (base, wedge_lines, n_override) = split_label(label);
        let mut p = params.clone();
        if let Some(n) = n_override {
            p.n = n;
        }
        let (entry, p) = self.resolve(&base, &p)?;
        let (d, r) = entry.expected_invariants(&p);
        Some((d + wedge_lines, r + wedge_lines))
    }

    /// Signature of a catalogue instance, at default parameters.
    pub fn signature_of_label(&self, label: &str) -> Result<Signature, AtlasError> {
        let germ = self.instantiate(label, &Params::default())?;
        Ok(germ.signature(&self.params)?)
    }
}

impl Default for Atlas {
    fn default() -> Self {
        Atlas::new()
    }
}

/// Split "BASE[@nK][vLj]" into (base, wedge line count, n override).
fn split_label(label: &str) -> (String, usize, Option<usize>) {
    let mut base = label.to_string();
    let mut wedge = 0usize;
    if let Some(pos) = base.rfind("vL") {
        let tail = &base[pos + 2..];
        if tail.is_empty() {
            wedge = 1;
            base.truncate(pos);
        } else if let Ok(j) = tail.parse::<usize>() {
            wedge = j;
            base.truncate(pos);
        }
    }
    let mut n_override = None;
    if let Some(pos) = base.rfind("@n") {
        if let Ok(n) = base[pos + 2..].parse::<usize>() {
            n_override = Some(n);
            base.truncate(pos);
        }
    }
    (base, wedge, n_override)
}

// ---------------------------------------------------------------------------
// verification

/// Result of verifying one entry.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub label: String,
    pub ok: bool,
    pub details: Vec<String>,
}

impl Atlas {
    /// Check one entry at given series parameters: the constructor
    /// reproduces the frozen invariants, and every defining equation (or
    /// minor of the matrix presentation) vanishes identically on every
    /// branch. Modulus entries run the equations at lambda = 2 and 3.
    pub fn verify_entry_at(&self, label: &str, params: &Params) -> VerifyReport {
        let mut details = Vec::new();
        let mut ok = true;
        let Some((entry, resolved)) = self.resolve(label, params) else {
            return VerifyReport {
                label: label.to_string(),
                ok: false,
                details: vec!["unknown label".into()],
            };
        };
        let mut resolved = resolved;
        if let Some((lo, hi)) = entry.range {
            match entry.kind {
                ParamKind::K => resolved.k = resolved.k.clamp(lo, hi),
                ParamKind::N => resolved.n = resolved.n.clamp(lo, hi),
                _ => {}
            }
        }
        let lambdas: Vec<Q> = if entry.lambda_equations {
            vec![qi(2), qi(3)]
        } else {
            vec![resolved.lambda.clone()]
        };
        for lambda in &lambdas {
            let p = Params { lambda: lambda.clone(), ..resolved.clone() };
            let germ = match entry.instantiate(&p) {
                Ok(g) => g,
                Err(e) => {
                    ok = false;
                    details.push(format!("instantiation failed: {e}"));
                    continue;
                }
            };
            let (want_delta, want_r) = entry.expected_invariants(&p);
            if germ.branch_count() != want_r {
                ok = false;
                details.push(format!(
                    "branch count {} != expected {}",
                    germ.branch_count(),
                    want_r
                ));
            }
            match germ.delta(&self.params) {
                Ok(d) if d == want_delta => {}
                Ok(d) => {
                    ok = false;
                    details.push(format!("delta {d} != expected {want_delta}"));
                }
                Err(e) => {
                    ok = false;
                    details.push(format!("delta failed: {e}"));
                }
            }
            if let Some(eqs) = &entry.equations {
                match self.check_equations(entry, eqs, &germ, &p) {
                    Ok(mut failures) => {
                        if !failures.is_empty() {
                            ok = false;
                            details.append(&mut failures);
                        }
                    }
                    Err(e) => {
                        ok = false;
                        details.push(e);
                    }
                }
            }
        }
        if ok {
            details.push("ok".into());
        }
        VerifyReport { label: label.to_string(), ok, details }
    }

    pub fn verify_entry(&self, label: &str) -> VerifyReport {
        self.verify_entry_at(label, &Params::default())
    }

    /// Equation checks only (no invariant recomputation): every equation
    /// and matrix minor vanishes identically on every branch.
    pub fn verify_equations(&self, label: &str) -> VerifyReport {
        let params = Params::default();
        let mut details = Vec::new();
        let mut ok = true;
        let Some((entry, resolved)) = self.resolve(label, &params) else {
            return VerifyReport {
                label: label.to_string(),
                ok: false,
                details: vec!["unknown label".into()],
            };
        };
        let lambdas: Vec<Q> = if entry.lambda_equations {
            vec![qi(2), qi(3)]
        } else {
            vec![resolved.lambda.clone()]
        };
        for lambda in &lambdas {
            let p = Params { lambda: lambda.clone(), ..resolved.clone() };
            let germ = match entry.instantiate(&p) {
                Ok(g) => g,
                Err(e) => {
                    ok = false;
                    details.push(format!("instantiation failed: {e}"));
                    continue;
                }
            };
            if let Some(eqs) = &entry.equations {
                match self.check_equations(entry, eqs, &germ, &p) {
                    Ok(mut failures) => {
                        if !failures.is_empty() {
                            ok = false;
                            details.append(&mut failures);
                        }
                    }
                    Err(e) => {
                        ok = false;
                        details.push(e);
                    }
                }
            } else {
                ok = false;
                details.push("no equations stored".into());
            }
        }
        if ok {
            details.push("ok".into());
        }
        VerifyReport { label: label.to_string(), ok, details }
    }

    fn check_equations(
        &self,
        entry: &AtlasEntry,
        eqs: &EquationSet,
        germ: &MultiGerm,
        params: &Params,
    ) -> Result<Vec<String>, String> {
        let eqs = if entry.label == "S" {
            s_series_equations(params.k)
        } else {
            eqs.clone()
        };
        let polys = equation_polys(&eqs, germ.ambient_dim(), &params.lambda)
            .map_err(|e| format!("equation parse failed: {e}"))?;
        let framed = apply_frame(germ, eqs.frame.as_deref());
        let mut failures = Vec::new();
        for (which, p) in polys {
            let p = p.eval_param(&params.lambda);
            for (bi, comps) in framed.iter().enumerate() {
                match p.certified_vanishing(comps) {
                    Ok(true) => {}
                    Ok(false) => failures.push(format!(
                        "{which} does not vanish on branch {} (lambda={})",
                        bi + 1,
                        params.lambda
                    )),
                    Err(e) => failures.push(format!("{which}: {e}")),
                }
            }
        }
        Ok(failures)
    }

    /// Labels carrying defining equations, the whole equation table.
    pub fn equation_labels(&self) -> Vec<String> {
        let mut labels: Vec<String> = self
            .entries
            .iter()
            .filter(|e| e.equations.is_some() && e.label != "S")
            .map(|e| e.label.clone())
            .collect();
        // the two parameterized table rows, verified at small k
        for k in [6, 7, 8, 9, 10, 11] {
            labels.push(format!("S{k}"));
        }
        labels.sort();
        labels
    }

    /// Every entry label plus the parameterized equation instances; the
    /// list the full catalogue verification runs over.
    pub fn all_labels(&self) -> Vec<String> {
        let mut labels: Vec<String> = self.entries.iter().map(|e| e.label.clone()).collect();
        for k in [6, 7, 8, 9, 10, 11] {
            labels.push(format!("S{k}"));
        }
        labels.sort();
        labels.dedup();
        labels
    }
}

/// The table rows with a parameter: even m carries y^2 - x^(2k+1) - yz,
/// odd m carries y^2 - y x^k - yz, both next to xz.
fn s_series_equations(m: usize) -> EquationSet {
    if m % 2 == 0 {
        let k = (m - 4) / 2;
        EquationSet::eqs(&["xz", &format!("y^2-x^{}-yz", 2 * k + 1)])
    } else {
        let k = (m - 3) / 2;
        EquationSet::eqs(&["xz", &format!("y^2-yx^{k}-yz")])
    }
}

/// Expand an equation set into named polynomials (plain equations plus the
/// three 2x2 minors of a matrix presentation). `l` in the text stands for
/// the modulus.
fn equation_polys(
    eqs: &EquationSet,
    nvars: usize,
    lambda: &Q,
) -> Result<Vec<(String, MPoly)>, crate::notation::ParseError> {
    let names = coordinate_names(nvars);
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let lam = crate::rat::format_q(lambda);
    let substitute = |text: &str| text.replace('l', &format!("({lam})"));
    let mut out = Vec::new();
    for text in &eqs.polys {
        let p = parse_poly(&substitute(text), &name_refs)?;
        out.push((format!("equation {text}"), p));
    }
    if let Some(rows) = &eqs.matrix {
        let parsed: Vec<Vec<MPoly>> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell| parse_poly(&substitute(cell), &name_refs))
                    .collect::<Result<_, _>>()
            })
            .collect::<Result<_, _>>()?;
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let minor = parsed[0][a]
                .mul(&parsed[1][b])
                .sub(&parsed[0][b].mul(&parsed[1][a]));
            out.push((format!("minor ({},{})", a + 1, b + 1), minor));
        }
    }
    Ok(out)
}

/// Component series of each branch, after an optional integer linear frame.
fn apply_frame(germ: &MultiGerm, frame: Option<&[Vec<i64>]>) -> Vec<Vec<Series>> {
    germ.branches()
        .iter()
        .map(|b| {
            let comps = b.components();
            match frame {
                None => comps.to_vec(),
                Some(rows) => rows
                    .iter()
                    .map(|row| {
                        let mut acc = Series::zero(b.var());
                        for (j, &c) in row.iter().enumerate() {
                            if c != 0 {
                                acc = acc.add(&comps[j].scale(&Coeff::int(c)));
                            }
                        }
                        acc
                    })
                    .collect(),
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// the sweep, signature index, ambiguity report

/// A concrete instantiation of a simple entry for signature matching.
pub struct SweepInstance {
    pub label: String,
    pub germ: MultiGerm,
}

impl Atlas {
    /// Deterministic list of simple-entry instantiations used for signature
    /// matching: fixed entries, series over their sweep ranges, and wedges
    /// of the series cores with one or two extra lines.
    pub fn sweep(&self) -> Vec<SweepInstance> {
        let mut out: Vec<(SweepInstance, bool)> = Vec::new();
        let params = Params::default();
        for e in &self.entries {
            if e.tag != EntryTag::Simple {
                continue;
            }
            match e.kind {
                ParamKind::Fixed => {
                    if let Ok(g) = e.instantiate(&params) {
                        out.push((
                            SweepInstance { label: e.label.clone(), germ: g },
                            e.wedge_extends,
                        ));
                    }
                }
                ParamKind::K => {
                    let (lo, hi) = e.range.unwrap();
                    let hi = hi.min(if e.label == "S" { 16 } else { 13 });
                    for k in lo..=hi {
                        let p = Params { k, ..Params::default() };
                        if let Ok(g) = e.instantiate(&p) {
                            out.push((
                                SweepInstance {
                                    label: series_instance_label(&e.label, ParamKind::K, k),
                                    germ: g,
                                },
                                e.wedge_extends,
                            ));
                        }
                        if e.label == "S" {
                            let p4 = Params { k, n: 4, ..Params::default() };
                            if let Ok(g) = e.instantiate(&p4) {
                                out.push((
                                    SweepInstance { label: format!("S{k}@n4"), germ: g },
                                    e.wedge_extends,
                                ));
                            }
                        }
                    }
                }
                ParamKind::N => {
                    let (lo, hi) = e.range.unwrap();
                    for n in lo..=hi.min(4) {
                        // A1 and D4 already own the two-dimensional germs
                        if n == 2 && e.label.starts_with("L(") {
                            continue;
                        }
                        let p = Params { n, ..Params::default() };
                        if let Ok(g) = e.instantiate(&p) {
                            out.push((
                                SweepInstance {
                                    label: series_instance_label(&e.label, ParamKind::N, n),
                                    germ: g,
                                },
                                e.wedge_extends,
                            ));
                        }
                    }
                }
                ParamKind::Lambda => {}
            }
        }
        let mut result: Vec<SweepInstance> = Vec::new();
        let mut wedged: Vec<SweepInstance> = Vec::new();
        for (inst, extends) in out {
            // wedging A1 with axes reproduces the L(n,n) family
            let extends = extends && inst.label != "A1";
            if extends {
                for j in 1..=2usize {
                    let label = if j == 1 {
                        format!("{}vL", inst.label)
                    } else {
                        format!("{}vL{j}", inst.label)
                    };
                    let lines = MultiGerm::from_exponents(&axes(j));
                    wedged.push(SweepInstance { label, germ: inst.germ.wedge(&lines) });
                }
            }
            result.push(inst);
        }
        result.extend(wedged);
        result
    }
}

/// Signature index over the sweep: catalogue label(s) per signature.
pub struct SignatureIndex {
    by_signature: BTreeMap<Signature, Vec<String>>,
}

impl SignatureIndex {
    pub fn build(atlas: &Atlas) -> Result<SignatureIndex, GermError> {
        let mut by_signature: BTreeMap<Signature, Vec<String>> = BTreeMap::new();
        for inst in atlas.sweep() {
            let sig = inst.germ.signature(atlas.stabilize())?;
            by_signature.entry(sig).or_default().push(inst.label);
        }
        for labels in by_signature.values_mut() {
            labels.sort();
            labels.dedup();
        }
        Ok(SignatureIndex { by_signature })
    }

    /// Simple-entry labels carrying this signature.
    pub fn lookup(&self, sig: &Signature) -> &[String] {
        self.by_signature.get(sig).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Signature collisions among distinct catalogue labels: the shipped
    /// ambiguity report.
    pub fn ambiguity_report(&self) -> Vec<Vec<String>> {
        let mut groups: Vec<Vec<String>> = self
            .by_signature
            .values()
            .filter(|labels| labels.len() > 1)
            .cloned()
            .collect();
        groups.sort();
        groups
    }

    /// All labels that appear in some ambiguity group.
    pub fn ambiguous_labels(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .ambiguity_report()
            .into_iter()
            .flatten()
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

// ---------------------------------------------------------------------------
// adjacency graph

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeKind {
    /// Deformation of the parametrisation and of the image curve.
    Both,
    /// Deformation of the parametrisation only.
    Param,
    /// Deformation of the image curve only.
    Curve,
}

impl EdgeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeKind::Both => "both",
            EdgeKind::Param => "param",
            EdgeKind::Curve => "curve",
        }
    }
}

pub struct AdjacencyEdge {
    pub source: String,
    pub target: String,
    pub kind: EdgeKind,
    pub citation: String,
    pub witness: Option<DeformationFamily>,
}

/// Result of checking one adjacency witness.
#[derive(Clone, Debug)]
pub struct EdgeReport {
    pub source: String,
    pub target: String,
    pub kind: EdgeKind,
    pub ok: bool,
    pub details: Vec<String>,
}

/// Equality of germs after dropping always-zero coordinate columns, up to
/// branch order.
fn germs_equal_normalized(a: &MultiGerm, b: &MultiGerm) -> bool {
    fn strip(g: &MultiGerm) -> Vec<Vec<Series>> {
        let n = g.ambient_dim();
        let keep: Vec<usize> = (0..n)
            .filter(|&j| {
                g.branches()
                    .iter()
                    .any(|br| !br.components()[j].certified_zero())
            })
            .collect();
        let mut rows: Vec<Vec<Series>> = g
            .branches()
            .iter()
            .map(|br| {
                keep.iter()
                    .map(|&j| br.components()[j].with_var(Var(0)))
                    .collect()
            })
            .collect();
        rows.sort_by_key(|comps: &Vec<Series>| format!("{comps:?}"));
        rows
    }
    strip(a) == strip(b)
}

/// Parse a univariate polynomial in t with rational-in-s coefficients.
pub fn t_poly(text: &str) -> Series {
    if text == "-" {
        return Series::zero(Var(0));
    }
    let p = parse_poly(text, &["t"]).expect("family component");
    let mut acc = Series::zero(Var(0));
    for (e, c) in p.terms() {
        acc = acc.add(&Series::monomial(Var(0), c.clone(), e[0] as usize));
    }
    acc
}

/// Build a family from string components.
fn fam(
    branches: &[&[&str]],
    source: &str,
    target: &str,
    citation: &str,
    delta_constant: bool,
) -> DeformationFamily {
    let parsed: Vec<Vec<Series>> = branches
        .iter()
        .map(|comps| comps.iter().map(|c| t_poly(c)).collect())
        .collect();
    let f = DeformationFamily::new(parsed, source, Some(target), citation);
    if delta_constant {
        f.delta_constant()
    } else {
        f
    }
}

fn retarget(f: DeformationFamily, target: &str) -> DeformationFamily {
    DeformationFamily { target: Some(target.to_string()), ..f }
}

impl Atlas {
    /// The adjacency graph transcribed from the classification's diagrams,
    /// with arrow kinds and, where a construction is implemented, a witness
    /// family. Series edges are instantiated over k = 1..6, n = 2..4.
    pub fn adjacency_edges(&self) -> Vec<AdjacencyEdge> {
        let mut edges: Vec<AdjacencyEdge> = Vec::new();
        let mut push = |source: &str,
                        target: &str,
                        kind: EdgeKind,
                        citation: &str,
                        witness: Option<DeformationFamily>| {
            edges.push(AdjacencyEdge {
                source: source.into(),
                target: target.into(),
                kind,
                citation: citation.into(),
                witness,
            });
        };

        let uni = "sporadic unibranch diagram";
        push("(5,6,7,8)", "(5,6,7,8,9)", EdgeKind::Param, uni,
            Some(fam(&[&["t^5", "t^6", "t^7", "t^8", "s*t^9"]], "(5,6,7,8)", "(5,6,7,8,9)", uni, false)));
        push("(5,6,7,8,9)", "(4,5,7)", EdgeKind::Both, uni,
            Some(fam(&[&["t^5+s*t^4", "t^6+s*t^5", "t^7", "t^8", "t^9"]], "(5,6,7,8,9)", "(4,5,7)", uni, true)));
        push("(5,6,7,8)", "(4,6,7,9)", EdgeKind::Param, uni,
            Some(fam(&[&["t^5+s*t^4", "t^6", "t^7", "t^8"]], "(5,6,7,8)", "(4,6,7,9)", uni, false)));
        push("W8", "(4,5,6,7)", EdgeKind::Param, uni,
            Some(fam(&[&["t^4", "t^5", "t^6", "s*t^7"]], "W8", "(4,5,6,7)", uni, false)));
        push("W8*", "W8", EdgeKind::Both, uni,
            Some(fam(&[&["t^4", "t^5", "t^7+s*t^6"]], "W8*", "W8", uni, true)));
        push("(4,6,7,9)", "W8*", EdgeKind::Both, uni,
            Some(fam(&[&["t^4", "t^6+s*t^5", "t^7", "t^9"]], "(4,6,7,9)", "W8*", uni, true)));
        push("Z10", "(4,6,7,9)", EdgeKind::Param, uni,
            Some(fam(&[&["t^4", "t^6", "t^7", "s*t^9"]], "Z10", "(4,6,7,9)", uni, false)));
        push("(4,6,7,9)", "E12(2)", EdgeKind::Both, uni,
            Some(fam(&[&["t^4+s*t^3", "t^6", "t^7", "t^9"]], "(4,6,7,9)", "E12(2)", uni, true)));

        let mf = "multiplicity-four-and-line diagram";
        push("(4,5,7)vL", "(4,5,6,7)+(-,-,1,-)", EdgeKind::Both, mf,
            Some(fam(&[
                &["t^4", "t^5", "t^7+s*t^6", "s*t^7"],
                &["-", "-", "s*t", "t"],
            ], "(4,5,7)vL", "(4,5,6,7)+(-,-,1,-)", mf, true)));
        push("(4,5,7)vL", "(4,5,6)vL", EdgeKind::Both, mf,
            Some(fam(&[
                &["t^4", "t^5", "t^7+s*t^6", "-"],
                &["-", "-", "-", "t"],
            ], "(4,5,7)vL", "(4,5,6)vL", mf, true)));
        push("(4,5,6,7)+(-,-,1,-)", "(4,5,6,7)+(-,-,-,1)", EdgeKind::Both, mf,
            Some(fam(&[
                &["t^4", "t^5", "t^6", "t^7"],
                &["-", "-", "t-s*t", "s*t"],
            ], "(4,5,6,7)+(-,-,1,-)", "(4,5,6,7)+(-,-,-,1)", mf, true)));
        push("(4,5,6)vL", "(4,5,6,7)+(-,-,-,1)", EdgeKind::Both, mf,
            Some(fam(&[
                &["t^4", "t^5", "t^6", "s*t^7"],
                &["-", "-", "-", "t"],
            ], "(4,5,6)vL", "(4,5,6,7)+(-,-,-,1)", mf, true)));
        push("(4,5,6,7)+(-,-,-,1)", "(4,5,6,7)vL", EdgeKind::Param, mf,
            Some(fam(&[
                &["t^4", "t^5", "t^6", "t^7", "-"],
                &["-", "-", "-", "t-s*t", "s*t"],
            ], "(4,5,6,7)+(-,-,-,1)", "(4,5,6,7)vL", mf, false)));

        let a2m3 = "cusp-and-triple-point diagram";
        push("(2,3,-,-)+(-,4,5,3)", "(2,3,-,-)+(-,5,4,3)", EdgeKind::Both, a2m3,
            Some(fam(&[
                &["t^2", "t^3", "-", "-"],
                &["-", "t^4-s*t^4+s*t^5", "t^5-s*t^5+s*t^4", "t^3"],
            ], "(2,3,-,-)+(-,4,5,3)", "(2,3,-,-)+(-,5,4,3)", a2m3, true)));
        push("(2,3,-,-)+(-,5,4,3)", "A2vM3", EdgeKind::Param, a2m3, {
            let g1 = germ_text("(2,3,-,-)").unwrap();
            let g2 = germ_text("(-,5,4,3)").unwrap();
            wedge_family(&g1, &g2, "(2,3,-,-)+(-,5,4,3)", "A2vM3").ok()
        });

        let tc = "two-cusps-and-line diagram";
        push("(2,3,-,-)+(3,-,2,-)+(-,-,-,1)", "(2,3,-,-)+(-,3,2,-)+(-,-,-,1)", EdgeKind::Both, tc,
            Some(fam(&[
                &["t^2", "t^3", "-", "-"],
                &["t^3-s*t^3", "s*t^3", "t^2", "-"],
                &["-", "-", "-", "t"],
            ], "(2,3,-,-)+(3,-,2,-)+(-,-,-,1)", "(2,3,-,-)+(-,3,2,-)+(-,-,-,1)", tc, true)));
        push("(2,3,-,-)+(-,3,2,-)+(-,-,-,1)", "(2,3,-,-)+(-,-,3,2)+(-,1,1,-)", EdgeKind::Both, tc,
            Some(fam(&[
                &["t^2", "t^3", "-", "-"],
                &["-", "t^3-s*t^3", "t^2-s*t^2+s*t^3", "s*t^2"],
                &["-", "s*t", "s*t", "t-s*t"],
            ], "(2,3,-,-)+(-,3,2,-)+(-,-,-,1)", "(2,3,-,-)+(-,-,3,2)+(-,1,1,-)", tc, true)));
        push("(2,3,-,-)+(3,-,2,-)+(-,-,-,1)", "(2,3,-,-)+(-,-,3,2)+(1,-,1,-)", EdgeKind::Both, tc,
            Some(fam(&[
                &["t^2", "t^3", "-", "-"],
                &["t^3-s*t^3", "-", "t^2-s*t^2+s*t^3", "s*t^2"],
                &["s*t", "-", "s*t", "t-s*t"],
            ], "(2,3,-,-)+(3,-,2,-)+(-,-,-,1)", "(2,3,-,-)+(-,-,3,2)+(1,-,1,-)", tc, true)));
        push("(2,3,-,-)+(-,-,3,2)+(1,-,1,-)", "(2,3,-,-)+(-,-,3,2)+(-,1,1,-)", EdgeKind::Both, tc,
            Some(fam(&[
                &["t^2", "t^3", "-", "-"],
                &["-", "-", "t^3", "t^2"],
                &["t-s*t", "s*t", "t", "-"],
            ], "(2,3,-,-)+(-,-,3,2)+(1,-,1,-)", "(2,3,-,-)+(-,-,3,2)+(-,1,1,-)", tc, true)));
        push("(2,3,-,-)+(-,-,3,2)+(-,1,1,-)", "A2vA2vL", EdgeKind::Param, tc,
            Some(fam(&[
                &["t^2", "t^3", "-", "-", "-"],
                &["-", "-", "t^3", "t^2", "-"],
                &["-", "t-s*t", "t-s*t", "-", "s*t"],
            ], "(2,3,-,-)+(-,-,3,2)+(-,1,1,-)", "A2vA2vL", tc, false)));

        let ta = "two dihedral factors diagram";
        push("T9", "A2vA4", EdgeKind::Param, ta, {
            let g1 = germ_text("(2,3,-)").unwrap();
            let g2 = germ_text("(-,5,2)").unwrap();
            wedge_family(&g1, &g2, "T9", "A2vA4").ok()
        });
        push("A2vA4", "A2vA3", EdgeKind::Both, ta,
            Some(fam(&[
                &["t^2", "t^3", "-", "-"],
                &["-", "-", "t^2-s^2", "t*(t^2-s^2)^2"],
            ], "A2vA4", "A2vA3", ta, true)));
        push("T9", "T8", EdgeKind::Both, ta,
            Some(fam(&[
                &["t^2", "t^3", "-"],
                &["-", "t*(t^2-s^2)^2", "t^2-s^2"],
            ], "T9", "T8", ta, true)));
        push("Z9", "Z9(1)", EdgeKind::Param, ta,
            Some(fam(&[
                &["t^2", "t^3", "-", "-"],
                &["t^2", "-", "t^3", "s*t^4"],
            ], "Z9", "Z9(1)", ta, false)));
        push("A2vA3", "A2vA2", EdgeKind::Curve, ta, None);
        push("T8", "T7", EdgeKind::Curve, ta, None);
        push("Z9(1)", "T7*", EdgeKind::Both, ta,
            Some(fam(&[
                &["t^2", "t^3", "-", "-"],
                &["t^2-s*t^2", "s*t^2", "t^3", "t^4-s*t^4"],
            ], "Z9(1)", "T7*", ta, true)));
        push("T8", "A2vA3", EdgeKind::Param, ta,
            Some(fam(&[
                &["t^2", "t^3", "-", "-"],
                &["-", "-", "t", "-"],
                &["-", "t^2-s*t^2", "t", "s*t^2"],
            ], "T8", "A2vA3", ta, false)));
        push("T7*", "T7", EdgeKind::Both, ta,
            Some(fam(&[
                &["t^2", "t^3", "-"],
                &["-", "t^2-s*t^2+s*t^3", "t^3-s*t^3+s*t^2"],
            ], "T7*", "T7", ta, true)));
        push("T7", "A2vA2", EdgeKind::Param, ta, {
            let g1 = germ_text("(2,3,-)").unwrap();
            let g2 = germ_text("(-,3,2)").unwrap();
            wedge_family(&g1, &g2, "T7", "A2vA2").ok()
        });

        let os = "remaining sporadic diagram";
        push("W9", "(3,4,5,-)+(1,-,-,2)", EdgeKind::Param, os,
            Some(fam(&[
                &["t^3", "t^4", "t^5", "-"],
                &["t", "-", "-", "s*t^2"],
            ], "W9", "(3,4,5,-)+(1,-,-,2)", os, false)));
        push("W9", "J21(2)", EdgeKind::Param, os,
            Some(fam(&[
                &["t^3+s*t^2", "t^4", "t^5"],
                &["t", "-", "s*t^2"],
            ], "W9", "J21(2)", os, false)));
        push("(3,4,5,-)+(1,-,-,2)", "J20(2)", EdgeKind::Both, os,
            Some(fam(&[
                &["t*(t^2-s^2)", "(t^2-s^2)^2", "t*(t^2-s^2)^2", "-"],
                &["t", "-", "-", "t^2"],
            ], "(3,4,5,-)+(1,-,-,2)", "J20(2)", os, true)));
        push("J21(2)", "J20(2)", EdgeKind::Both, os,
            Some(fam(&[
                &["t^2-s^2", "t*(t^2-s^2)^2", "-"],
                &["t", "-", "t^2"],
            ], "J21(2)", "J20(2)", os, true)));

        let te = "exceptional core diagram";
        push("E6", "E6(1)", EdgeKind::Param, te,
            Some(fam(&[&["t^3", "t^4", "s*t^5"]], "E6", "E6(1)", te, false)));
        push("E8(1)", "E6", EdgeKind::Both, te,
            Some(fam(&[&["t^3", "t^5+s*t^4", "t^7"]], "E8(1)", "E6", te, true)));
        push("E8", "E8(1)", EdgeKind::Param, te,
            Some(fam(&[&["t^3", "t^5", "s*t^7"]], "E8", "E8(1)", te, false)));
        push("E8(1)", "E7(1)", EdgeKind::Both, te,
            Some(fam(&[&["t^2*(t-s)", "t^3*(t-s)^2", "t^4*(t-s)^3"]], "E8(1)", "E7(1)", te, true)));
        push("E8", "E7", EdgeKind::Both, te,
            Some(fam(&[&["t^2*(t-s)", "t^3*(t-s)^2"]], "E8", "E7", te, true)));
        push("E7", "E7(1)", EdgeKind::Param, te,
            Some(fam(&[&["t^2", "t^3", "-"], &["t", "-", "s*t^2"]], "E7", "E7(1)", te, false)));

        let se = "exceptional cores with line bundles";
        for n in 3..=4usize {
            let sfx = if n == 3 { String::new() } else { format!("@n{n}") };
            push(&format!("U9{sfx}"), &format!("U7*{sfx}"), EdgeKind::Param, se,
                Some(u9_to_u7star_family(n)));
            push(&format!("U7*{sfx}"), &format!("U7{sfx}"), EdgeKind::Both, se,
                Some(u7star_to_u7_family(n)));
            push(&format!("U8{sfx}"), &format!("S6*{sfx}"), EdgeKind::Param, se,
                Some(u8_to_s6star_family(n)));
        }

        for k in 1..=6usize {
            push(
                &format!("A{}", 2 * k),
                &format!("A{}", 2 * k - 1),
                EdgeKind::Both,
                "double-point series",
                Some(a_split_family(k)),
            );
        }
        for k in 1..=6usize {
            for n in 2..=4usize {
                let (src, tgt) = dihedral_labels(k, n);
                push(&src, &tgt, EdgeKind::Both, "dihedral series", Some(d_split_family(k, n)));
            }
        }
        for k in 2..=6usize {
            let f = akl_to_dk_family(k).expect("k in range");
            let target = if k == 2 { "A3".to_string() } else { format!("D{}", k + 1) };
            let src = f.source.clone();
            push(
                &src,
                &target,
                EdgeKind::Both,
                "matrix degeneration of a cusp-line wedge",
                Some(retarget(f, &target)),
            );
        }

        // monomial perturbation and partition constructions
        let core = germ_text("(3,7,8)").unwrap();
        let branch = core.branches()[0].clone();
        push(
            "E12(2)",
            "E6(1)",
            EdgeKind::Param,
            "monomial perturbation",
            monomialize_family(&branch, "E12(2)")
                .ok()
                .map(|f| retarget(f, "E6(1)")),
        );
        push(
            "M2",
            "A1",
            EdgeKind::Param,
            "partition of the minimal monomial curve",
            Some(retarget(partition_family(2, &[1, 1]), "A1")),
        );
        push(
            "M3",
            "A2vL",
            EdgeKind::Param,
            "partition of the minimal monomial curve",
            Some(retarget(partition_family(3, &[2, 1]), "A2vL")),
        );
        push(
            "M4",
            "A2vA2",
            EdgeKind::Param,
            "partition of the minimal monomial curve",
            Some(retarget(partition_family(4, &[2, 2]), "A2vA2")),
        );

        // families reaching the confining curves
        push(
            "(5,6,7,9)",
            "L(3,1)",
            EdgeKind::Param,
            "planar 2-jet congruence family",
            Some(quintic_congruence_family()),
        );
        push(
            "(2,3,-,-)+(5,-,4,3)",
            "L(3,1)",
            EdgeKind::Param,
            "cusp smoothing against a tangential double point",
            Some(cusp_m3_family()),
        );
        push(
            "(2,3,-,-)+(4,-,5,3)",
            "(2,3,-,-)+(5,-,4,3)",
            EdgeKind::Both,
            "coordinate rotation between the two presentations",
            Some(fam(&[
                &["t^2", "t^3", "-", "-"],
                &["t^4-s*t^4+s*t^5", "-", "t^5-s*t^5+s*t^4", "t^3"],
            ], "(2,3,-,-)+(4,-,5,3)", "(2,3,-,-)+(5,-,4,3)",
               "coordinate rotation between the two presentations", true)),
        );
        push(
            "A1",
            "L(1,1)",
            EdgeKind::Param,
            "pulling two intersecting lines apart",
            Some(crate::deform::pull_apart_family()),
        );
        edges
    }

    /// Verify one adjacency witness: the fiber at 0 reproduces the source
    /// (exactly after dropping zero columns when the presentations agree,
    /// by signature otherwise), the sample fiber carries the target's
    /// signature, delta decreases weakly (and stays equal when the family
    /// is declared delta-constant), and delta - r + 1 decreases weakly
    /// along every edge that deforms the parametrisation.
    pub fn verify_edge(&self, edge: &AdjacencyEdge) -> EdgeReport {
        let mut details = Vec::new();
        let mut ok = true;
        let Some(witness) = &edge.witness else {
            return EdgeReport {
                source: edge.source.clone(),
                target: edge.target.clone(),
                kind: edge.kind,
                ok: true,
                details: vec!["no witness family".into()],
            };
        };
        let fiber0 = match witness.fiber_at_zero() {
            Ok(g) => g,
            Err(e) => {
                return EdgeReport {
                    source: edge.source.clone(),
                    target: edge.target.clone(),
                    kind: edge.kind,
                    ok: false,
                    details: vec![format!("fiber at 0 failed: {e}")],
                }
            }
        };
        let source_sig = self
            .instantiate(&witness.source, &Params::default())
            .ok()
            .and_then(|g| g.signature(&self.params).ok());
        match (&source_sig, self.instantiate(&witness.source, &Params::default())) {
            (Some(want), Ok(source_germ)) => {
                if germs_equal_normalized(&fiber0, &source_germ) {
                    details.push("source fiber matches exactly".into());
                } else {
                    match fiber0.signature(&self.params) {
                        Ok(got) if &got == want => {
                            details.push("source fiber matches by signature".into())
                        }
                        Ok(_) => {
                            ok = false;
                            details.push("source fiber signature mismatch".into());
                        }
                        Err(e) => {
                            ok = false;
                            details.push(format!("source fiber signature failed: {e}"));
                        }
                    }
                }
            }
            _ => {
                ok = false;
                details.push(format!("source label {} unresolvable", witness.source));
            }
        }
        let Some(target_label) = &witness.target else {
            details.push("congruence-certified family; no rational sample fiber".into());
            return EdgeReport {
                source: edge.source.clone(),
                target: edge.target.clone(),
                kind: edge.kind,
                ok,
                details,
            };
        };
        let sample = witness.sample.clone();
        match witness.specialize(&sample) {
            Ok(fiber) => {
                match (
                    fiber.signature(&self.params),
                    self.instantiate(target_label, &Params::default())
                        .and_then(|g| g.signature(&self.params).map_err(Into::into)),
                ) {
                    (Ok(got), Ok(want)) => {
                        if got != want {
                            ok = false;
                            details.push("target fiber signature mismatch".into());
                        } else {
                            details.push("target fiber matches by signature".into());
                        }
                        // delta monotonicity along the family
                        if let Ok(d0) = fiber0.delta(&self.params) {
                            let d1 = got.delta;
                            if d1 > d0 {
                                ok = false;
                                details.push(format!("delta increased: {d0} -> {d1}"));
                            }
                            if witness.delta == crate::deform::DeltaBehaviour::Constant && d1 != d0
                            {
                                ok = false;
                                details.push(format!(
                                    "declared delta-constant but {d0} -> {d1}"
                                ));
                            }
                            if edge.kind != EdgeKind::Curve {
                                let r0 = fiber0.branch_count() as i64;
                                let r1 = fiber.branch_count() as i64;
                                if d1 as i64 - r1 + 1 > d0 as i64 - r0 + 1 {
                                    ok = false;
                                    details.push("delta - r + 1 increased".into());
                                }
                            }
                        }
                    }
                    (Err(e), _) => {
                        ok = false;
                        details.push(format!("target fiber signature failed: {e}"));
                    }
                    (_, Err(e)) => {
                        ok = false;
                        details.push(format!("target label failed: {e}"));
                    }
                }
            }
            Err(e) => {
                ok = false;
                details.push(format!("specialization failed: {e}"));
            }
        }
        EdgeReport {
            source: edge.source.clone(),
            target: edge.target.clone(),
            kind: edge.kind,
            ok,
            details,
        }
    }

    /// Verify every edge of the adjacency graph that ships a witness.
    pub fn verify_adjacency(&self) -> Vec<EdgeReport> {
        self.adjacency_edges()
            .iter()
            .map(|e| self.verify_edge(e))
            .collect()
    }

    /// DOT rendering of the adjacency graph.
    pub fn adjacency_dot(&self) -> String {
        let edges = self.adjacency_edges();
        let mut out = String::from("digraph adjacencies {\n");
        let mut nodes: Vec<String> = Vec::new();
        for e in &edges {
            for label in [&e.source, &e.target] {
                if !nodes.contains(label) {
                    nodes.push(label.clone());
                }
            }
        }
        for n in &nodes {
            out.push_str(&format!("  \"{n}\";\n"));
        }
        for e in &edges {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [kind=\"{}\"];\n",
                e.source,
                e.target,
                e.kind.as_str()
            ));
        }
        out.push_str("}\n");
        out
    }

    /// The confining collection for parametrisations in ambient dimension n,
    /// with the plane-curve pair when `plane` is set.
    pub fn confining_set(&self, n: usize, plane: bool) -> Vec<String> {
        let mut out = vec![match n {
            1 => "L(3,1)".to_string(),
            2 => "L(4,2)".to_string(),
            _ => format!("L({},{n})", n + 2),
        }];
        if plane {
            out.push("Etilde7".into());
            out.push("Etilde8".into());
        }
        out
    }

    /// Structured text listing of the catalogue: label, parameter range,
    /// parametrisation at default parameters, equations, frozen invariants,
    /// citation.
    pub fn render_list(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let mut params = Params::default();
            if let Some((lo, hi)) = e.range {
                match e.kind {
                    ParamKind::K => params.k = params.k.clamp(lo, hi),
                    ParamKind::N => params.n = params.n.clamp(lo, hi),
                    _ => {}
                }
            }
            let range = match (e.kind, e.range) {
                (ParamKind::K, Some((lo, hi))) => format!(" k={lo}..{hi}"),
                (ParamKind::N, Some((lo, hi))) => format!(" n={lo}..{hi}"),
                (ParamKind::Lambda, _) => " lambda".to_string(),
                _ => String::new(),
            };
            let aliases = if e.aliases.is_empty() {
                String::new()
            } else {
                format!(" aliases={}", e.aliases.join("|"))
            };
            let germ = e
                .instantiate(&params)
                .map(|g| crate::notation::print_germ(&g))
                .unwrap_or_else(|_| "-".into());
            let (delta, branches) = e.expected_invariants(&params);
            let eqs = match &e.equations {
                None => "-".to_string(),
                Some(set) => {
                    let mut parts = set.polys.clone();
                    if let Some(rows) = &set.matrix {
                        parts.push(format!(
                            "minors(({},{},{}),({},{},{}))",
                            rows[0][0], rows[0][1], rows[0][2],
                            rows[1][0], rows[1][1], rows[1][2]
                        ));
                    }
                    parts.join("; ")
                }
            };
            out.push_str(&format!(
                "label={} tag={}{}{} parametrisation={} delta={} branches={} equations={} citation={}\n",
                e.label,
                e.tag.as_str(),
                range,
                aliases,
                germ,
                delta,
                branches,
                eqs,
                e.citation
            ));
        }
        out
    }
}

fn dihedral_labels(k: usize, n: usize) -> (String, String) {
    if n == 2 {
        (format!("D{}", 2 * k + 3), format!("D{}", 2 * k + 2))
    } else {
        let s = if n == 3 { String::new() } else { format!("@n{n}") };
        let source = format!("S{}{s}", 2 * k + 4);
        // the contact-one fiber is the generic-line configuration
        let target = if k == 1 {
            format!("L({},{n})", n + 1)
        } else {
            format!("S{}{s}", 2 * k + 3)
        };
        (source, target)
    }
}

// witness builders for the n-indexed series edges

fn strs(owned: &[Vec<String>]) -> Vec<Vec<Series>> {
    owned
        .iter()
        .map(|row| row.iter().map(|c| t_poly(c)).collect())
        .collect()
}

fn u9_to_u7star_family(n: usize) -> DeformationFamily {
    let mut owned: Vec<Vec<String>> = Vec::new();
    let mut core = vec!["t^3".to_string(), "t^5+s*t^4".to_string(), "t^7+s*t^5".to_string()];
    core.extend((3..n).map(|_| "-".to_string()));
    owned.push(core);
    for axis in 3..n {
        let mut row = vec!["-".to_string(); n];
        row[axis] = "t".into();
        owned.push(row);
    }
    let mut extra = vec!["-".to_string(); n];
    extra[1] = "s*t".into();
    extra[2] = "t-s*t".into();
    for slot in 3..n {
        extra[slot] = "t".into();
    }
    owned.push(extra);
    let sfx = if n == 3 { String::new() } else { format!("@n{n}") };
    DeformationFamily::new(
        strs(&owned),
        &format!("U9{sfx}"),
        Some(&format!("U7*{sfx}")),
        "exceptional cores with line bundles",
    )
}

fn u7star_to_u7_family(n: usize) -> DeformationFamily {
    let mut owned: Vec<Vec<String>> = Vec::new();
    let mut core = vec!["t^3".to_string(), "t^4".to_string(), "t^5".to_string()];
    core.extend((3..n).map(|_| "-".to_string()));
    owned.push(core);
    for axis in 3..n {
        let mut row = vec!["-".to_string(); n];
        row[axis] = "t".into();
        owned.push(row);
    }
    let mut extra = vec!["-".to_string(); n];
    extra[1] = "t-s*t".into();
    extra[2] = "s*t".into();
    for slot in 3..n {
        extra[slot] = "t".into();
    }
    owned.push(extra);
    let sfx = if n == 3 { String::new() } else { format!("@n{n}") };
    DeformationFamily::new(
        strs(&owned),
        &format!("U7*{sfx}"),
        Some(&format!("U7{sfx}")),
        "exceptional cores with line bundles",
    )
    .delta_constant()
}

fn u8_to_s6star_family(n: usize) -> DeformationFamily {
    let mut owned: Vec<Vec<String>> = Vec::new();
    let mut cusp = vec!["t^2".to_string(), "t^3".to_string()];
    cusp.extend((2..n).map(|_| "-".to_string()));
    owned.push(cusp);
    for axis in 2..n {
        let mut row = vec!["-".to_string(); n];
        row[axis] = "t".into();
        owned.push(row);
    }
    let mut extra = vec!["t".to_string(), "-".to_string()];
    extra.extend((2..n).map(|_| "s*t+t^2-s*t^2".to_string()));
    owned.push(extra);
    let sfx = if n == 3 { String::new() } else { format!("@n{n}") };
    DeformationFamily::new(
        strs(&owned),
        &format!("U8{sfx}"),
        Some(&format!("S6*{sfx}")),
        "exceptional cores with line bundles",
    )
}

fn a_split_family(k: usize) -> DeformationFamily {
    let var = Var(0);
    let q = Series::t_power(var, 2).sub(&Series::monomial(var, Coeff::s_power(2), 0));
    let comps = vec![q.clone(), Series::t_power(var, 1).mul(&q.pow(k))];
    DeformationFamily::new(
        vec![comps],
        &format!("A{}", 2 * k),
        Some(&format!("A{}", 2 * k - 1)),
        "double-point split",
    )
    .delta_constant()
}

fn d_split_family(k: usize, n: usize) -> DeformationFamily {
    let var = Var(0);
    let q = Series::t_power(var, 2).sub(&Series::monomial(var, Coeff::s_power(2), 0));
    let mut cusp = vec![q.clone(), Series::t_power(var, 1).mul(&q.pow(k))];
    cusp.extend((2..n).map(|_| Series::zero(var)));
    let mut branches = vec![cusp];
    for axis in 2..n {
        let mut row: Vec<Series> = (0..n).map(|_| Series::zero(var)).collect();
        row[axis] = Series::t_power(var, 1);
        branches.push(row);
    }
    let mut extra: Vec<Series> = (0..n).map(|_| Series::zero(var)).collect();
    extra[1] = Series::t_power(var, 1);
    for slot in 2..n {
        extra[slot] = Series::t_power(var, 1);
    }
    branches.push(extra);
    let (src, tgt) = dihedral_labels(k, n);
    DeformationFamily::new(branches, &src, Some(&tgt), "dihedral split").delta_constant()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_resolve_and_instantiate() {
        let atlas = Atlas::new();
        let p = Params::default();
        let w8 = atlas.instantiate("W8", &p).unwrap();
        assert_eq!(w8, MultiGerm::from_exponents(&[vec![4, 5, 6]]));
        assert_eq!(atlas.instantiate("(4,5,6)", &p).unwrap(), w8);
        // series numerics
        let a4 = atlas.instantiate("A4", &p).unwrap();
        assert_eq!(a4, MultiGerm::from_exponents(&[vec![2, 5]]));
        let d5 = atlas.instantiate("D5", &p).unwrap();
        assert_eq!(d5.branch_count(), 2);
        // line families by count
        let l43 = atlas.instantiate("L(4,3)", &p).unwrap();
        assert_eq!(l43.branch_count(), 4);
        // wedge suffix
        let e7l = atlas.instantiate("E7vL", &p).unwrap();
        assert_eq!(e7l.ambient_dim(), 3);
        assert_eq!(e7l.branch_count(), 3);
        // series @n suffix
        let u9 = atlas.instantiate("U9@n4", &p).unwrap();
        assert_eq!(u9.ambient_dim(), 4);
        assert_eq!(u9.branch_count(), 3);
        // errors
        assert!(matches!(
            atlas.instantiate("nope", &p),
            Err(AtlasError::UnknownLabel(_))
        ));
        assert!(matches!(
            atlas.instantiate("L(3,1)", &Params { lambda: qi(1), ..Params::default() }),
            Err(AtlasError::BadParameter { .. })
        ));
    }

    #[test]
    fn table_two_instances_match_their_text() {
        let atlas = Atlas::new();
        let p = Params::default();
        assert_eq!(
            atlas.instantiate("L(3,1)", &p).unwrap(),
            atlas.instantiate("L(3,1)", &Params { lambda: qi(2), ..Params::default() }).unwrap()
        );
        let u7 = atlas.instantiate("U7", &p).unwrap();
        assert_eq!(
            u7,
            MultiGerm::from_exponents(&[vec![3, 4, 5], vec![0, 0, 1]])
        );
        let s8 = atlas.instantiate("S8", &p).unwrap();
        assert_eq!(s8.branch_count(), 3);
    }

    #[test]
    fn equation_rows_verify() {
        let atlas = Atlas::new();
        for label in ["Z10", "W8", "W8*", "T7", "T7*", "Z9", "E6(1)", "J20(2)", "S7", "S8"] {
            let report = atlas.verify_entry(label);
            assert!(report.ok, "{label}: {:?}", report.details);
        }
    }

    #[test]
    fn confining_matrices_verify_for_two_lambdas() {
        let atlas = Atlas::new();
        for label in ["L(3,1)", "L(4,2)"] {
            let report = atlas.verify_entry(label);
            assert!(report.ok, "{label}: {:?}", report.details);
        }
    }

    #[test]
    fn variant_presentations_share_signatures() {
        // the prose variants recorded as aliases must carry the same
        // signature as the canonical entry they point to
        let atlas = Atlas::new();
        let st = atlas.stabilize();
        for (variant, canonical) in [
            ("(3,2,-)+(3,-,2)", "T7"),
            ("(2,3,-)+(3,-,2)", "T7*"),
        ] {
            let v = crate::notation::parse_germ(variant).unwrap();
            let c = atlas.instantiate(canonical, &Params::default()).unwrap();
            assert_eq!(
                v.signature(st).unwrap(),
                c.signature(st).unwrap(),
                "{variant} vs {canonical}"
            );
        }
    }

    #[test]
    fn lifted_four_line_curve_is_indecomposable() {
        let atlas = Atlas::new();
        let l42 = atlas.instantiate("L(4,2)", &Params::default()).unwrap();
        let parts = l42.decompose(atlas.stabilize()).unwrap();
        assert_eq!(parts.len(), 1, "no proper bipartition passes both tests");
        assert_eq!(l42.delta(atlas.stabilize()).unwrap(), 5);
    }

    #[test]
    fn confining_sets() {
        let atlas = Atlas::new();
        assert_eq!(atlas.confining_set(1, false), vec!["L(3,1)"]);
        assert_eq!(
            atlas.confining_set(2, true),
            vec!["L(4,2)", "Etilde7", "Etilde8"]
        );
        assert_eq!(atlas.confining_set(3, false), vec!["L(5,3)"]);
        let l53 = atlas.instantiate("L(5,3)", &Params::default()).unwrap();
        assert_eq!(l53.branch_count(), 5);
        assert_eq!(l53.delta(atlas.stabilize()).unwrap(), 6);
    }

    #[test]
    fn adjacency_graph_shape() {
        let atlas = Atlas::new();
        let edges = atlas.adjacency_edges();
        let find = |s: &str, t: &str| {
            edges
                .iter()
                .find(|e| e.source == s && e.target == t)
                .unwrap_or_else(|| panic!("missing edge {s} -> {t}"))
        };
        // the vertical arrow out of the deepest multiplicity-four curve
        assert_eq!(find("(4,6,7,9)", "E12(2)").kind, EdgeKind::Both);
        // harpoon arrows are parametrisation-only
        assert_eq!(find("(5,6,7,8)", "(5,6,7,8,9)").kind, EdgeKind::Param);
        // there is no edge out of a wedge of three cusps
        assert!(edges.iter().all(|e| e.source != "A2vA2vA2"));
        let dot = atlas.adjacency_dot();
        assert!(dot.contains("kind=\"param\""));
        assert!(dot.contains("\"T7*\" -> \"T7\""));
    }
}
