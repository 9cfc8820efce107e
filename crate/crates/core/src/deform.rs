//! One-parameter deformation families of parametrisations over Q`[s]`.
//!
//! A family stores its branches as closed-form coefficient data (exact
//! polynomials in the local parameters with rational-in-s coefficients), the declared
//! source and target labels, and a citation naming the construction it comes
//! from. Specializing at a rational sample value relocates every rational
//! base point exactly; irrational base points are a hard error.

use num_traits::{One, Zero};

use crate::coeff::Coeff;
use crate::germ::{Branch, GermError, MultiGerm};
use crate::rat::{poly_gcd, rational_roots, Q};
use crate::series::{reduce_mod, MPoly, Order, Series, SeriesError, Var};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum DeformError {
    #[error("branch has an irrational base point at the sample value")]
    IrrationalBasePoint,
    #[error("branch base points cannot be resolved from truncated data")]
    UnresolvableBasePoint,
    #[error("no branch passes through the origin at the sample value")]
    EmptyGerm,
    #[error("ambient dimensions do not match")]
    AmbientMismatch,
    #[error("first component cannot be prepared to t^m within truncation")]
    NotPreparable,
    #[error("parameter k out of the implemented range")]
    BadParameter,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Germ(#[from] GermError),
}

/// Declared behaviour of the delta invariant along the family.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DeltaBehaviour {
    /// delta at the sample equals delta at 0.
    Constant,
    /// delta may drop (weak decrease is still checked).
    Decreasing,
}

/// A one-parameter family of parametrisations over Q`[s]`.
#[derive(Clone, Debug)]
pub struct DeformationFamily {
    pub ambient: usize,
    /// One component list per branch; coefficients may involve `s`.
    pub branches: Vec<Vec<Series>>,
    /// Label of the fiber at s = 0.
    pub source: String,
    /// Label of the fiber at the sample value; `None` when the family is
    /// shipped for a congruence argument only (no rational specialization).
    pub target: Option<String>,
    pub citation: String,
    /// Sample value s0 used for target verification.
    pub sample: Q,
    pub delta: DeltaBehaviour,
}

impl DeformationFamily {
    pub fn new(
        branches: Vec<Vec<Series>>,
        source: &str,
        target: Option<&str>,
        citation: &str,
    ) -> DeformationFamily {
        let ambient = branches.first().map(Vec::len).unwrap_or(0);
        assert!(branches.iter().all(|b| b.len() == ambient));
        DeformationFamily {
            ambient,
            branches: retag(branches),
            source: source.to_string(),
            target: target.map(str::to_string),
            citation: citation.to_string(),
            sample: Q::one(),
            delta: DeltaBehaviour::Decreasing,
        }
    }

    pub fn delta_constant(mut self) -> Self {
        self.delta = DeltaBehaviour::Constant;
        self
    }

    pub fn with_sample(mut self, s0: Q) -> Self {
        self.sample = s0;
        self
    }

    /// The germ at the origin of the fiber at `s0`: substitute the parameter,
    /// find each branch's base points, re-expand around every rational one,
    /// and collect all local branches. Branches missing the origin entirely
    /// are dropped.
    pub fn specialize(&self, s0: &Q) -> Result<MultiGerm, DeformError> {
        let mut local = Vec::new();
        for comps in &self.branches {
            let at_s: Vec<Series> = comps.iter().map(|c| c.eval_param(s0)).collect();
            if at_s.iter().all(Series::is_exact) {
                // common zeros = roots of the gcd of the nonzero components
                let mut g: Vec<Q> = Vec::new();
                for c in &at_s {
                    let coeffs = c.rational_coeffs().expect("exact rational series");
                    if !coeffs.is_empty() {
                        g = if g.is_empty() { coeffs } else { poly_gcd(&g, &coeffs) };
                    }
                }
                if g.len() == 1 {
                    continue; // constant gcd: branch misses the origin
                }
                if g.is_empty() {
                    return Err(DeformError::UnresolvableBasePoint);
                }
                let (roots, leftover) = rational_roots(&g);
                if leftover > 0 {
                    return Err(DeformError::IrrationalBasePoint);
                }
                for t0 in roots {
                    let shifted: Vec<Series> = at_s
                        .iter()
                        .map(|c| c.taylor_shift(&t0).expect("exact component"))
                        .collect();
                    local.push(Branch::new(shifted)?);
                }
            } else {
                // truncated data: only a lone base point at t = 0 is safe,
                // certified by an exact component vanishing only there
                let pinned = at_s.iter().any(|c| {
                    c.is_exact()
                        && matches!(c.order(), Order::Finite(_))
                        && c.rational_coeffs()
                            .map(|coeffs| {
                                let (roots, leftover) = rational_roots(&coeffs);
                                leftover == 0 && roots.iter().all(Q::is_zero)
                            })
                            .unwrap_or(false)
                });
                if !pinned {
                    return Err(DeformError::UnresolvableBasePoint);
                }
                local.push(Branch::new(at_s)?);
            }
        }
        if local.is_empty() {
            return Err(DeformError::EmptyGerm);
        }
        Ok(MultiGerm::new(local)?)
    }

    /// The fiber at s = 0 (the declared source germ).
    pub fn fiber_at_zero(&self) -> Result<MultiGerm, DeformError> {
        self.specialize(&Q::zero())
    }

    /// Exact congruence check: the polynomial form, evaluated on every
    /// branch, reduces to zero modulo g^k as an identity in s and t.
    pub fn verify_congruence(
        &self,
        form: &MPoly,
        modulus: &Series,
        k: usize,
    ) -> Result<bool, DeformError> {
        for comps in &self.branches {
            let value = form.eval_series(comps);
            if value.truncation().is_some() {
                return Err(DeformError::UnresolvableBasePoint);
            }
            let g = modulus.with_var(comps[0].var());
            let rem = reduce_mod(&value, &g, k)?;
            if !rem.certified_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Surface membership of one branch: exactly, or modulo degree 3 in the
    /// local parameter (coefficients of t^0, t^1, t^2 vanish identically).
    pub fn verify_on_surface(
        &self,
        branch: usize,
        surface: &MPoly,
        exact: bool,
    ) -> Result<bool, DeformError> {
        let value = surface.eval_series(&self.branches[branch]);
        if exact {
            Ok(value.certified_zero())
        } else {
            Ok((0..3).all(|k| value.coeff(k).is_zero()))
        }
    }

    /// Render the family as structured text records.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "source={} target={} sample={} delta={} citation={}\n",
            self.source,
            self.target.as_deref().unwrap_or("-"),
            crate::rat::format_q(&self.sample),
            match self.delta {
                DeltaBehaviour::Constant => "constant",
                DeltaBehaviour::Decreasing => "decreasing",
            },
            self.citation,
        ));
        for (i, comps) in self.branches.iter().enumerate() {
            let list: Vec<String> = comps.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("branch{}=({})\n", i + 1, list.join(", ")));
        }
        out
    }
}

fn retag(branches: Vec<Vec<Series>>) -> Vec<Vec<Series>> {
    branches
        .into_iter()
        .enumerate()
        .map(|(i, comps)| {
            comps
                .into_iter()
                .map(|c| c.with_var(Var(i as u16)))
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// standard constructors

/// Wedge family: embed two germs in C^{2n} as (phi1, 0) and (phi2, s phi2).
/// At s = 0 the union sits diagonally; for s != 0 the two curves span
/// complementary directions and meet transversally at the origin only.
pub fn wedge_family(
    g1: &MultiGerm,
    g2: &MultiGerm,
    source: &str,
    target: &str,
) -> Result<DeformationFamily, DeformError> {
    let n = g1.ambient_dim();
    if g2.ambient_dim() != n {
        return Err(DeformError::AmbientMismatch);
    }
    let mut branches = Vec::new();
    for b in g1.branches() {
        let mut comps = b.components().to_vec();
        comps.extend((0..n).map(|_| Series::zero(b.var())));
        branches.push(comps);
    }
    for b in g2.branches() {
        let mut comps = b.components().to_vec();
        for j in 0..n {
            comps.push(b.components()[j].scale(&Coeff::s()));
        }
        branches.push(comps);
    }
    Ok(DeformationFamily::new(
        branches,
        source,
        Some(target),
        "doubled-coordinate wedge",
    ))
}

/// Perturb every higher component of an irreducible germ by s t^(m+i-1);
/// the result specializes to the monomial curve of minimal multiplicity.
/// The first component is prepared to t^m exactly (coordinate scaling plus
/// reparametrisation), which needs enough stored coefficients when the
/// input is not already monomial.
pub fn monomialize_family(branch: &Branch, source: &str) -> Result<DeformationFamily, DeformError> {
    let m = branch.multiplicity();
    let comps = branch.components();
    // move a component of minimal order to the front
    let lead_idx = comps
        .iter()
        .position(|c| matches!(c.order(), Order::Finite(k) if k == m))
        .expect("some component realizes the multiplicity");
    let mut ordered: Vec<Series> = comps.to_vec();
    ordered.swap(0, lead_idx);
    // scale so the leading coefficient is 1
    let lead = ordered[0].coeff(m).as_rational().expect("rational branch");
    ordered[0] = ordered[0].scale(&Coeff::constant(Q::one() / lead));
    // reparametrise so the first component is exactly t^m
    let prepared = prepare_to_monomial(&ordered, m)?;
    // pad to ambient >= m and perturb
    let var = prepared[0].var();
    let mut comps = prepared;
    while comps.len() < m {
        comps.push(Series::zero(var));
    }
    let perturbed: Vec<Series> = comps
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if i == 0 {
                c.clone()
            } else {
                c.add(&Series::monomial(var, Coeff::s(), m + i))
            }
        })
        .collect();
    let target = format!("M{m}");
    Ok(DeformationFamily::new(
        vec![perturbed],
        source,
        Some(&target),
        "monomial perturbation of the higher components",
    ))
}

/// Reparametrise so that component 0 (order m, leading coefficient 1)
/// becomes exactly t^m. Monomial input passes through unchanged; general
/// input yields truncated series components.
fn prepare_to_monomial(comps: &[Series], m: usize) -> Result<Vec<Series>, DeformError> {
    let c0 = &comps[0];
    let is_monomial = c0.is_exact()
        && c0.degree()?.map(|d| d == m).unwrap_or(false)
        && (0..m).all(|k| c0.coeff(k).is_zero());
    if is_monomial {
        return Ok(comps.to_vec());
    }
    // working precision: far past any conductor these germs can have
    let work = comps
        .iter()
        .filter_map(|c| match c.order() {
            Order::Finite(k) => Some(k),
            _ => None,
        })
        .max()
        .unwrap_or(m)
        * 4
        + 16;
    let var = c0.var();
    let c0t = c0.truncated(work).map_err(|_| DeformError::NotPreparable)?;
    // solve psi = t v(t), v(0) = 1, with c0(psi(t)) = t^m, degree by degree
    let mut v = Series::truncated_from(var, vec![Coeff::one()], work);
    for j in 1..=work.saturating_sub(m) {
        let psi = Series::t_power(var, 1).truncated(work).unwrap().mul(&v);
        let test = c0t.compose(&psi)?;
        let c = test.coeff(m + j);
        if c.is_zero() {
            continue;
        }
        let delta = c.as_rational().expect("rational preparation") / crate::rat::qi(m as i64);
        v = v.sub(&Series::monomial(var, Coeff::constant(delta), j).truncated(work).unwrap());
    }
    let psi = Series::t_power(var, 1).truncated(work).unwrap().mul(&v);
    let out: Vec<Series> = comps
        .iter()
        .map(|c| c.compose(&psi))
        .collect::<Result<_, _>>()?;
    let lead_ok = matches!(out[0].order(), Order::Finite(k) if k == m)
        && (m + 1..=work).all(|k| out[0].coeff(k).is_zero());
    if !lead_ok {
        return Err(DeformError::NotPreparable);
    }
    // snap the first component to the exact monomial it provably is
    let mut out = out;
    out[0] = Series::t_power(var, m);
    Ok(out)
}

/// The monomial curve of minimal multiplicity m splits along a partition:
/// the single branch (p, tp, ..., t^(m-1) p) with p = prod (t - b_i s)^(m_i)
/// has fiber M_m at s = 0 and one local branch of multiplicity m_i at each
/// base point b_i s for s != 0.
pub fn partition_family(m: usize, parts: &[usize]) -> DeformationFamily {
    assert!(!parts.is_empty() && parts.iter().all(|&p| p > 0));
    assert_eq!(parts.iter().sum::<usize>(), m, "parts must sum to m");
    let var = Var(0);
    // distinct small rational base points 0, 1, -1, 2, -2, ...
    let offsets: Vec<i64> = (0..parts.len() as i64)
        .map(|i| {
            if i == 0 {
                0
            } else if i % 2 == 1 {
                (i + 1) / 2
            } else {
                -(i / 2)
            }
        })
        .collect();
    let mut p = Series::monomial(var, Coeff::one(), 0);
    for (&mult, &b) in parts.iter().zip(&offsets) {
        let factor = Series::t_power(var, 1).sub(&Series::monomial(
            var,
            Coeff::s_term(crate::rat::qi(b), 1),
            0,
        ));
        for _ in 0..mult {
            p = p.mul(&factor);
        }
    }
    let comps: Vec<Series> = (0..m).map(|i| p.shift_up(i)).collect();
    let target = parts_label(parts);
    DeformationFamily::new(
        vec![comps],
        &format!("M{m}"),
        Some(&target),
        "strict transform split along a partition",
    )
}

fn parts_label(parts: &[usize]) -> String {
    let mut sorted: Vec<usize> = parts.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
        .iter()
        .map(|m| format!("M{m}"))
        .collect::<Vec<_>>()
        .join("v")
}

/// The matrix degeneration deforming a plane cusp-with-line wedge into the
/// next dihedral type: the 2x2 minors of ((x^k, y, z), (y, x, s)) vanish on
/// all branches for every s. The even-k branch form is
/// (t^2, t^(k+1), s t^(k-1)); for odd k the cusp factor is already split
/// into the two smooth branches on which the same minors vanish.
pub fn akl_to_dk_family(k: usize) -> Result<DeformationFamily, DeformError> {
    if k < 2 {
        return Err(DeformError::BadParameter);
    }
    let var = Var(0);
    let line = vec![
        Series::zero(var),
        Series::zero(var),
        Series::t_power(var, 1),
    ];
    let mut branches = vec![line];
    if k % 2 == 0 {
        branches.push(vec![
            Series::t_power(var, 2),
            Series::t_power(var, k + 1),
            Series::monomial(var, Coeff::s(), k - 1),
        ]);
    } else {
        let m = (k + 1) / 2;
        branches.push(vec![
            Series::t_power(var, 1),
            Series::t_power(var, m),
            Series::monomial(var, Coeff::s(), m - 1),
        ]);
        branches.push(vec![
            Series::t_power(var, 1),
            Series::t_power(var, m).neg(),
            Series::monomial(var, Coeff::s(), m - 1).neg(),
        ]);
    }
    let source = format!("A{k}vL");
    let target = format!("D{}", k + 1);
    Ok(DeformationFamily::new(
        branches,
        &source,
        Some(&target),
        "matrix degeneration ((x^k,y,z),(y,x,s))",
    )
    .delta_constant())
}

/// The minors of ((x^k, y, z), (y, x, s)) as polynomials in (x, y, z)
/// with coefficients polynomial in s.
pub fn akl_matrix_minors(k: usize) -> Vec<MPoly> {
    let x = MPoly::coordinate(3, 0);
    let y = MPoly::coordinate(3, 1);
    let z = MPoly::coordinate(3, 2);
    let s = MPoly::from_terms(3, vec![(vec![0, 0, 0], Coeff::s())]);
    let xk = {
        let mut acc = MPoly::from_terms(3, vec![(vec![0, 0, 0], Coeff::one())]);
        for _ in 0..k {
            acc = acc.mul(&x);
        }
        acc
    };
    vec![
        xk.mul(&x).sub(&y.mul(&y)),
        xk.mul(&s).sub(&z.mul(&y)),
        y.mul(&s).sub(&z.mul(&x)),
    ]
}

// ---------------------------------------------------------------------------
// named certificate families

/// The family ((t^3-s)t^2, (t^3-s)^2, (t^3-s)^2 t, (t^3-s)^3) with fiber
/// (5,6,7,9) at s = 0. Its 2-jet is planar for s != 0: the coordinate z4
/// and the quadratic form s z3 - z1^2 both vanish modulo (t^3-s)^3. The
/// base points for s != 0 are the cube roots of s, so no rational
/// specialization is shipped with it.
pub fn quintic_congruence_family() -> DeformationFamily {
    let var = Var(0);
    let q = Series::t_power(var, 3).sub(&Series::monomial(var, Coeff::s(), 0));
    let comps = vec![
        q.mul(&Series::t_power(var, 2)),
        q.pow(2),
        q.pow(2).mul(&Series::t_power(var, 1)),
        q.pow(3),
    ];
    let mut fam = DeformationFamily::new(
        vec![comps],
        "(5,6,7,9)",
        None,
        "planar 2-jet congruence family",
    );
    fam.delta = DeltaBehaviour::Constant;
    fam
}

/// The two-branch family deforming the cusp-with-space-branch curve
/// (2,3,-,-)+(5,-,4,3) into three smooth branches with common tangent and
/// planar 2-jet: the cusp moves as (t^2, t^3, 0, 2st) and the multiplicity-3
/// branch as (q^2 t, 0, q^2, q(t + 2s^2)) with q = t^2 - s^4.
pub fn cusp_m3_family() -> DeformationFamily {
    let var = Var(0);
    let cusp = vec![
        Series::t_power(var, 2),
        Series::t_power(var, 3),
        Series::zero(var),
        Series::monomial(var, Coeff::s_term(crate::rat::qi(2), 1), 1),
    ];
    let q = Series::t_power(var, 2).sub(&Series::monomial(var, Coeff::s_power(4), 0));
    let shifted = Series::t_power(var, 1).add(&Series::monomial(
        var,
        Coeff::s_term(crate::rat::qi(2), 2),
        0,
    ));
    let m3 = vec![
        q.pow(2).mul(&Series::t_power(var, 1)),
        Series::zero(var),
        q.pow(2),
        q.mul(&shifted),
    ];
    DeformationFamily::new(
        vec![cusp, m3],
        "(2,3,-,-)+(5,-,4,3)",
        Some("L(3,1)"),
        "cusp smoothing against a tangential double point",
    )
    .delta_constant()
}

/// The smooth surface containing the deformed multiplicity-3 branch of
/// [`cusp_m3_family`] exactly, and its cusp branch modulo degree 3.
pub fn cusp_m3_surface() -> MPoly {
    crate::notation::parse_poly(
        "12xs^6 + 15zs^8 - 3w^2s^4 - xw + 2zws^2 + z^2",
        &["x", "y", "z", "w"],
    )
    .expect("surface polynomial")
}

/// Two skew lines closing onto each other: branches (t,0,0) and (0,u,s).
/// For s != 0 the second branch misses the origin, so the germ there is a
/// single smooth branch.
pub fn pull_apart_family() -> DeformationFamily {
    let var = Var(0);
    let b1 = vec![
        Series::t_power(var, 1),
        Series::zero(var),
        Series::zero(var),
    ];
    let b2 = vec![
        Series::zero(var),
        Series::t_power(var, 1),
        Series::monomial(var, Coeff::s(), 0),
    ];
    DeformationFamily::new(
        vec![b1, b2],
        "A1",
        Some("L(1,1)"),
        "pulling two intersecting lines apart",
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::Stabilize;
    use crate::notation::parse_poly;
    use crate::rat::qi;

    fn st() -> Stabilize {
        Stabilize::default()
    }

    #[test]
    fn pull_apart_keeps_only_the_origin_branch() {
        let fam = pull_apart_family();
        let zero = fam.fiber_at_zero().unwrap();
        assert_eq!(zero.branch_count(), 2);
        assert_eq!(zero.delta(&st()).unwrap(), 1);
        let one = fam.specialize(&qi(1)).unwrap();
        assert_eq!(one.branch_count(), 1);
        assert_eq!(one.branches()[0].multiplicity(), 1);
        assert_eq!(one.delta(&st()).unwrap(), 0);
    }

    #[test]
    fn cusp_m3_family_specializes_to_three_tangent_smooth_branches() {
        let fam = cusp_m3_family();
        let zero = fam.fiber_at_zero().unwrap();
        assert_eq!(
            zero,
            MultiGerm::from_exponents(&[vec![2, 3, 0, 0], vec![5, 0, 4, 3]])
        );
        let one = fam.specialize(&qi(1)).unwrap();
        assert_eq!(one.branch_count(), 3);
        assert!(one.branches().iter().all(|b| b.multiplicity() == 1));
        let (_, span) = one.tangent_data();
        assert_eq!(span, 1);
        assert!(one.planar_two_jet());
        assert_eq!(one.delta(&st()).unwrap(), 5);
        assert_eq!(zero.delta(&st()).unwrap(), 5);
    }

    #[test]
    fn cusp_m3_surface_checks() {
        let fam = cusp_m3_family();
        let surface = cusp_m3_surface();
        // exact on the deformed multiplicity-3 branch
        assert!(fam.verify_on_surface(1, &surface, true).unwrap());
        // modulo degree 3 on the deformed cusp, but not exactly
        assert!(fam.verify_on_surface(0, &surface, false).unwrap());
        assert!(!fam.verify_on_surface(0, &surface, true).unwrap());
        // the zero surface is trivially satisfied
        let zero = MPoly::zero(4);
        assert!(fam.verify_on_surface(0, &zero, true).unwrap());
    }

    #[test]
    fn quintic_congruence_holds_for_the_square_not_the_coordinate() {
        let fam = quintic_congruence_family();
        assert_eq!(
            fam.fiber_at_zero().unwrap(),
            MultiGerm::from_exponents(&[vec![5, 6, 7, 9]])
        );
        let vars = ["z1", "z2", "z3", "z4"];
        let g = Series::t_power(Var(0), 3).sub(&Series::monomial(Var(0), Coeff::s(), 0));
        // s z3 - z1^2 vanishes mod (t^3 - s)^3
        let quad = parse_poly("s*z3 - z1^2", &vars).unwrap();
        assert!(fam.verify_congruence(&quad, &g, 3).unwrap());
        // the coordinate z4 does too, trivially
        let w = parse_poly("z4", &vars).unwrap();
        assert!(fam.verify_congruence(&w, &g, 3).unwrap());
        // but the linear form s z3 - z1 does not
        let lin = parse_poly("s*z3 - z1", &vars).unwrap();
        assert!(!fam.verify_congruence(&lin, &g, 3).unwrap());
        // z2 - z1 fails as well
        let other = parse_poly("z2 - z1", &vars).unwrap();
        assert!(!fam.verify_congruence(&other, &g, 3).unwrap());
        // the zero form passes trivially
        let zero = MPoly::zero(4);
        assert!(fam.verify_congruence(&zero, &g, 3).unwrap());
        // and rational specialization is impossible: cube-root base points
        assert_eq!(
            fam.specialize(&qi(1)),
            Err(DeformError::IrrationalBasePoint)
        );
    }

    #[test]
    fn wedge_family_examples() {
        let line = MultiGerm::from_exponents(&[vec![1, 0]]);
        let fam = wedge_family(&line, &line, "L+L", "A1").unwrap();
        let one = fam.specialize(&qi(1)).unwrap();
        assert_eq!(one.delta(&st()).unwrap(), 1);
        assert_eq!(one.decompose(&st()).unwrap().len(), 2);

        // two coincident cusps separate into A2 v A2 with delta 3; the
        // source fiber is the non-reduced union, so only the target fiber
        // is a germ this crate can measure
        let cusp = MultiGerm::from_exponents(&[vec![2, 3]]);
        let fam = wedge_family(&cusp, &cusp, "A2+A2", "A2vA2").unwrap();
        let one = fam.specialize(&qi(1)).unwrap();
        assert_eq!(one.delta(&st()).unwrap(), 3);
        assert_eq!(one.decompose(&st()).unwrap().len(), 2);
    }

    #[test]
    fn monomialize_examples() {
        // (t^2, t^3) is already monomial; target M2 = A2
        let b = Branch::from_exponents(Var(0), &[2, 3]);
        let fam = monomialize_family(&b, "A2").unwrap();
        let one = fam.specialize(&qi(1)).unwrap();
        let sg = one.branches()[0].semigroup(&st()).unwrap();
        assert_eq!(sg.generators, vec![2, 3]);

        // (t^3, t^7, t^8) deforms to M3 = (3,4,5)
        let b = Branch::from_exponents(Var(0), &[3, 7, 8]);
        let fam = monomialize_family(&b, "(3,7,8)").unwrap();
        let one = fam.specialize(&qi(1)).unwrap();
        let sg = one.branches()[0].semigroup(&st()).unwrap();
        assert_eq!(sg.generators, vec![3, 4, 5]);

        // (t^4, t^6, t^7) deforms to M4
        let b = Branch::from_exponents(Var(0), &[4, 6, 7]);
        let fam = monomialize_family(&b, "(4,6,7)").unwrap();
        let one = fam.specialize(&qi(1)).unwrap();
        let sg = one.branches()[0].semigroup(&st()).unwrap();
        assert_eq!(sg.generators, vec![4, 5, 6, 7]);
    }

    #[test]
    fn monomialize_prepares_nonmonomial_leads() {
        // (t^2 + t^3, t^5): the first component needs the reparametrisation
        let v = Var(0);
        let b = Branch::new(vec![
            Series::t_power(v, 2).add(&Series::t_power(v, 3)),
            Series::t_power(v, 5),
        ])
        .unwrap();
        let fam = monomialize_family(&b, "test").unwrap();
        let zero = fam.fiber_at_zero().unwrap();
        assert_eq!(zero.branches()[0].multiplicity(), 2);
        let one = fam.specialize(&qi(1)).unwrap();
        let sg = one.branches()[0].semigroup(&st()).unwrap();
        assert_eq!(sg.generators, vec![2, 3]);
    }

    #[test]
    fn partition_families_split_as_declared() {
        // M2 -> two smooth branches
        let fam = partition_family(2, &[1, 1]);
        let zero = fam.fiber_at_zero().unwrap();
        assert_eq!(zero, MultiGerm::from_exponents(&[vec![2, 3]]));
        let one = fam.specialize(&qi(1)).unwrap();
        assert_eq!(one.branch_count(), 2);
        assert_eq!(one.delta(&st()).unwrap(), 1);

        // M3 -> cusp plus smooth branch
        let fam = partition_family(3, &[2, 1]);
        let one = fam.specialize(&qi(1)).unwrap();
        let mut mults: Vec<usize> = one.branches().iter().map(Branch::multiplicity).collect();
        mults.sort();
        assert_eq!(mults, vec![1, 2]);
        assert_eq!(one.delta(&st()).unwrap(), 2);
        assert_eq!(one.decompose(&st()).unwrap().len(), 2);

        // M4 -> two cusp pieces, delta 3, decomposable
        let fam = partition_family(4, &[2, 2]);
        let one = fam.specialize(&qi(1)).unwrap();
        assert_eq!(one.branch_count(), 2);
        assert_eq!(one.delta(&st()).unwrap(), 3);
        assert_eq!(one.decompose(&st()).unwrap().len(), 2);
    }

    #[test]
    fn akl_matrix_minors_vanish_for_all_s() {
        for k in 2..=6 {
            let fam = akl_to_dk_family(k).unwrap();
            for minor in akl_matrix_minors(k) {
                for comps in &fam.branches {
                    assert!(
                        minor.eval_series(comps).certified_zero(),
                        "minor fails for k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn akl_k2_reaches_a3() {
        let fam = akl_to_dk_family(2).unwrap();
        let zero = fam.fiber_at_zero().unwrap();
        // A2 v L: cusp in the (x,y)-plane plus the z-axis
        assert_eq!(zero.delta(&st()).unwrap(), 2);
        let one = fam.specialize(&qi(1)).unwrap();
        // D3 = A3: two smooth branches with common tangent and delta 2
        assert_eq!(one.branch_count(), 2);
        assert!(one.branches().iter().all(|b| b.multiplicity() == 1));
        let (_, span) = one.tangent_data();
        assert_eq!(span, 1);
        assert_eq!(one.delta(&st()).unwrap(), 2);
    }

    #[test]
    fn akl_odd_k_reaches_d4() {
        let fam = akl_to_dk_family(3).unwrap();
        let zero = fam.fiber_at_zero().unwrap();
        // A3 v L: two tangent smooth branches plus an independent line
        assert_eq!(zero.branch_count(), 3);
        assert_eq!(zero.delta(&st()).unwrap(), 3);
        let one = fam.specialize(&qi(1)).unwrap();
        assert_eq!(one.branch_count(), 3);
        assert_eq!(one.delta(&st()).unwrap(), 3);
        // D4 after stable reduction: a plane germ of three transverse lines
        let red = one.stable_reduce(&st()).unwrap();
        assert_eq!(red.ambient_dim(), 2);
        let tree = crate::plane::resolution_tree(&red, &st()).unwrap();
        assert_eq!(
            crate::plane::ade_recognize(&tree),
            Some(crate::plane::AdeLabel::D(4))
        );
    }
}
