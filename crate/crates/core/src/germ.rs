//! The multi-germ data model and its analytic invariants.
//!
//! A multi-germ is a finite list of parametrised branches through the origin
//! of C^n with exact rational coefficients. Invariants are computed by jet
//! linear algebra: truncate every branch at order N, span the subalgebra
//! generated by the coordinate components inside the product of jet spaces,
//! and read dimensions off an exact row echelon basis.
//!
//! Certification: every quotient dimension is accepted only under the
//! stabilization protocol (values at N and 2N agree, and all pure jets
//! t_i^k beyond the per-branch conductor candidates lie in the span);
//! otherwise N doubles up to a configured maximum and failure is loud.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::linalg::{rank_of, system_consistent, Echelon};
use crate::rat::Q;
use crate::series::{Order, Series, SeriesError, Var};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum GermError {
    #[error("branch is identically zero to its truncation")]
    ZeroBranch,
    #[error("branch components must share one local parameter")]
    MixedParameters,
    #[error("branch has a nonzero constant term (must map the base point to the origin)")]
    NotCentred,
    #[error("branch coefficients involve the deformation parameter")]
    NotRational,
    #[error("branches have inconsistent ambient dimension")]
    AmbientMismatch,
    #[error("a multi-germ needs at least one branch")]
    Empty,
    #[error("jet computation needs truncation {needed}, branch provides {available}")]
    Truncation { needed: usize, available: usize },
    #[error("semigroup window {window} cannot certify the conductor")]
    WindowInsufficient { window: usize },
    #[error("invariants did not stabilize below truncation {limit}")]
    Stabilization { limit: usize },
}

impl From<SeriesError> for GermError {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::Truncation { needed, available } => {
                GermError::Truncation { needed, available }
            }
            _ => GermError::Stabilization { limit: 0 },
        }
    }
}

/// Controls the certification loop: initial truncation and the bound past
/// which stabilization failure is reported.
#[derive(Copy, Clone, Debug)]
pub struct Stabilize {
    pub n_init: usize,
    pub n_max: usize,
}

impl Default for Stabilize {
    fn default() -> Self {
        Stabilize { n_init: 16, n_max: 256 }
    }
}

impl Stabilize {
    pub fn with_init(n_init: usize) -> Self {
        Stabilize { n_init, ..Default::default() }
    }
}

/// One parametrised branch: n component series in one local parameter,
/// all vanishing at the base point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Branch {
    comps: Vec<Series>,
}

impl Branch {
    pub fn new(comps: Vec<Series>) -> Result<Branch, GermError> {
        if comps.is_empty() {
            return Err(GermError::Empty);
        }
        let var = comps[0].var();
        for c in &comps {
            if c.var() != var {
                return Err(GermError::MixedParameters);
            }
            if !c.is_rational() {
                return Err(GermError::NotRational);
            }
            if c.order() == Order::Finite(0) {
                return Err(GermError::NotCentred);
            }
        }
        if comps.iter().all(Series::is_zero_to_truncation) {
            return Err(GermError::ZeroBranch);
        }
        Ok(Branch { comps })
    }

    /// Branch from exact monomial exponents; 0 encodes the zero component.
    pub fn from_exponents(var: Var, exps: &[usize]) -> Branch {
        let comps = exps
            .iter()
            .map(|&e| {
                if e == 0 {
                    Series::zero(var)
                } else {
                    Series::t_power(var, e)
                }
            })
            .collect();
        Branch::new(comps).expect("monomial branch data")
    }

    pub fn components(&self) -> &[Series] {
        &self.comps
    }

    pub fn ambient_dim(&self) -> usize {
        self.comps.len()
    }

    pub fn var(&self) -> Var {
        self.comps[0].var()
    }

    /// Multiplicity: the least certified component order.
    pub fn multiplicity(&self) -> usize {
        self.comps
            .iter()
            .filter_map(|c| match c.order() {
                Order::Finite(k) => Some(k),
                _ => None,
            })
            .min()
            .expect("branch validated nonzero")
    }

    /// Smallest truncation to which every nonzero component is known.
    fn available_order(&self) -> Option<usize> {
        self.comps.iter().filter_map(Series::truncation).min()
    }

    /// Rational jets of all components to order n.
    fn jets(&self, n: usize) -> Result<Vec<Vec<Q>>, GermError> {
        self.comps.iter().map(|c| c.jet(n).map_err(Into::into)).collect()
    }

    /// Coefficient vector of t^k across the components.
    pub fn coeff_vector(&self, k: usize) -> Vec<Q> {
        self.comps
            .iter()
            .map(|c| {
                c.coeff(k)
                    .as_rational()
                    .expect("branch coefficients are rational")
            })
            .collect()
    }

    /// Tangent direction: coefficients of t^m, first nonzero entry scaled
    /// to 1 for deterministic comparison.
    pub fn tangent(&self) -> Vec<Q> {
        let mut v = self.coeff_vector(self.multiplicity());
        let lead = v
            .iter()
            .find(|x| !x.is_zero())
            .cloned()
            .expect("tangent vector is nonzero at the multiplicity");
        for x in v.iter_mut() {
            *x /= &lead;
        }
        v
    }
}

/// A parametrised multi-germ: r branches through the origin of C^n, each in
/// its own local parameter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiGerm {
    branches: Vec<Branch>,
}

impl MultiGerm {
    pub fn new(branches: Vec<Branch>) -> Result<MultiGerm, GermError> {
        if branches.is_empty() {
            return Err(GermError::Empty);
        }
        let n = branches[0].ambient_dim();
        if branches.iter().any(|b| b.ambient_dim() != n) {
            return Err(GermError::AmbientMismatch);
        }
        // retag local parameters so they are pairwise distinct
        let branches = branches
            .into_iter()
            .enumerate()
            .map(|(i, b)| Branch {
                comps: b.comps.iter().map(|c| c.with_var(Var(i as u16))).collect(),
            })
            .collect();
        Ok(MultiGerm { branches })
    }

    /// Monomial multi-germ from one exponent row per branch.
    pub fn from_exponents(rows: &[Vec<usize>]) -> MultiGerm {
        let branches = rows
            .iter()
            .enumerate()
            .map(|(i, row)| Branch::from_exponents(Var(i as u16), row))
            .collect();
        MultiGerm::new(branches).expect("monomial germ data")
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.branches[0].ambient_dim()
    }

    /// Sub-germ on a subset of branches (same ambient space).
    pub fn restrict(&self, indices: &[usize]) -> MultiGerm {
        MultiGerm::new(indices.iter().map(|&i| self.branches[i].clone()).collect())
            .expect("nonempty restriction")
    }

    /// Pad with zero components up to ambient dimension n.
    pub fn padded(&self, n: usize) -> MultiGerm {
        assert!(n >= self.ambient_dim());
        let branches = self
            .branches
            .iter()
            .map(|b| {
                let mut comps = b.comps.clone();
                while comps.len() < n {
                    comps.push(Series::zero(b.var()));
                }
                Branch { comps }
            })
            .collect();
        MultiGerm { branches }
    }

    /// Wedge with `other`: embed the two germs in complementary coordinate
    /// blocks so they meet transversally at the origin only.
    pub fn wedge(&self, other: &MultiGerm) -> MultiGerm {
        let n1 = self.ambient_dim();
        let n2 = other.ambient_dim();
        let mut branches = Vec::new();
        for b in &self.branches {
            let mut comps = b.comps.clone();
            comps.extend((0..n2).map(|_| Series::zero(b.var())));
            branches.push(Branch { comps });
        }
        for b in &other.branches {
            let mut comps: Vec<Series> = (0..n1).map(|_| Series::zero(b.var())).collect();
            comps.extend(b.comps.iter().cloned());
            branches.push(Branch { comps });
        }
        MultiGerm::new(branches).expect("wedge of valid germs")
    }

    fn max_component_order(&self) -> usize {
        let mut m = 1;
        for b in &self.branches {
            for c in &b.comps {
                if let Order::Finite(k) = c.order() {
                    m = m.max(k);
                }
            }
        }
        m
    }
}

/// Value semigroup of one branch: generators, gaps, conductor, symmetry.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SemigroupData {
    pub generators: Vec<usize>,
    pub gaps: Vec<usize>,
    pub conductor: usize,
    pub symmetric: bool,
}

impl SemigroupData {
    /// The delta invariant of the branch equals the gap count.
    pub fn delta(&self) -> usize {
        self.gaps.len()
    }

    pub fn contains(&self, k: usize) -> bool {
        if k >= self.conductor {
            true
        } else {
            !self.gaps.contains(&k)
        }
    }
}

/// Discrete invariants of an indecomposable piece.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PieceSignature {
    pub branch_count: usize,
    pub multiplicities: Vec<usize>,
    pub semigroups: Vec<Vec<usize>>,
    pub delta: usize,
    pub embedding_dim: usize,
    pub tangent_span: usize,
    pub planar_two_jet: bool,
}

/// The discrete invariant record the classifier matches on. The ambient
/// dimension is deliberately absent: a germ and its stable reduction get the
/// same signature.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Signature {
    pub branch_count: usize,
    pub multiplicities: Vec<usize>,
    pub semigroups: Vec<Vec<usize>>,
    pub delta: usize,
    pub embedding_dim: usize,
    pub tangent_span: usize,
    pub planar_two_jet: bool,
    pub decomposition: Vec<PieceSignature>,
}

impl Signature {
    /// Line-oriented key=value rendering.
    pub fn render(&self) -> String {
        let semis: Vec<String> = self
            .semigroups
            .iter()
            .map(|g| {
                format!(
                    "<{}>",
                    g.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
                )
            })
            .collect();
        let mults: Vec<String> = self.multiplicities.iter().map(|m| m.to_string()).collect();
        let shape: Vec<String> = self
            .decomposition
            .iter()
            .map(|p| format!("(r={},delta={})", p.branch_count, p.delta))
            .collect();
        [
            format!("branches={}", self.branch_count),
            format!("multiplicities={}", mults.join(",")),
            format!("semigroups={}", semis.join(" ")),
            format!("delta={}", self.delta),
            format!("embedding-dim={}", self.embedding_dim),
            format!("tangent-span={}", self.tangent_span),
            format!("planar-2jet={}", self.planar_two_jet),
            format!("decomposition={}", shape.join("v")),
        ]
        .join("\n")
    }
}

// ---------------------------------------------------------------------------
// jet engine

/// Per-branch coefficient arrays of one algebra element, truncated at n.
type Element = Vec<Vec<Q>>;

struct JetEngine {
    r: usize,
    n: usize,
    generators: Vec<Element>,
}

impl JetEngine {
    fn new(germ: &MultiGerm, n: usize) -> Result<JetEngine, GermError> {
        let r = germ.branch_count();
        let dim = germ.ambient_dim();
        let mut generators = Vec::with_capacity(dim);
        let jets: Vec<Vec<Vec<Q>>> = germ
            .branches
            .iter()
            .map(|b| b.jets(n))
            .collect::<Result<_, _>>()?;
        for j in 0..dim {
            let elem: Element = (0..r).map(|i| jets[i][j].clone()).collect();
            generators.push(elem);
        }
        Ok(JetEngine { r, n, generators })
    }

    fn flatten(&self, e: &Element) -> Vec<Q> {
        // position (degree d, branch i) -> d*r + i, so pivots follow t-order
        let mut v = vec![Q::zero(); self.r * (self.n + 1)];
        for (i, comp) in e.iter().enumerate() {
            for (d, c) in comp.iter().enumerate() {
                if !c.is_zero() {
                    v[d * self.r + i] = c.clone();
                }
            }
        }
        v
    }

    fn product(&self, a: &Element, b: &Element) -> Element {
        let mut out = vec![vec![Q::zero(); self.n + 1]; self.r];
        for i in 0..self.r {
            for (da, ca) in a[i].iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                for (db, cb) in b[i].iter().enumerate() {
                    if da + db > self.n {
                        break;
                    }
                    if !cb.is_zero() {
                        out[i][da + db] += ca * cb;
                    }
                }
            }
        }
        out
    }

    /// Span of all monomials in the generators whose factor multiset
    /// contains the given seeds; closed under multiplication by generators.
    fn closure(&self, seeds: &[Element]) -> Echelon {
        let mut basis = Echelon::new();
        let mut queue: Vec<Element> = Vec::new();
        for s in seeds {
            if basis.insert(self.flatten(s)) {
                queue.push(s.clone());
            }
        }
        // worklist: multiply every new span element by every generator
        let mut idx = 0;
        while idx < queue.len() {
            let elem = queue[idx].clone();
            idx += 1;
            for g in &self.generators {
                let prod = self.product(&elem, g);
                let v = self.flatten(&prod);
                if basis.insert(v) {
                    queue.push(prod);
                }
            }
        }
        basis
    }

    /// Span of monomials of degree >= 1 in the generators.
    fn positive_part(&self) -> Echelon {
        self.closure(&self.generators)
    }

    /// Span of monomials of degree >= 2.
    fn square_part(&self) -> Echelon {
        let mut seeds = Vec::new();
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i..] {
                seeds.push(self.product(a, b));
            }
        }
        self.closure(&seeds)
    }

    fn pure_jet(&self, branch: usize, degree: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.r * (self.n + 1)];
        v[degree * self.r + branch] = Q::from_integer(1.into());
        v
    }
}

/// Stabilized jet data for one germ.
pub struct Analysis {
    /// Truncation at which the protocol accepted.
    pub certified_at: usize,
    pub delta: usize,
    pub embedding_dim: usize,
    v2: Echelon,
    engine: JetEngine,
}

fn delta_at(germ: &MultiGerm, n: usize) -> Result<(usize, Echelon, JetEngine), GermError> {
    let engine = JetEngine::new(germ, n)?;
    let v1 = engine.positive_part();
    let total = germ.branch_count() * (n + 1);
    let delta = total - 1 - v1.rank();
    Ok((delta, v1, engine))
}

/// Run the stabilization protocol and return certified invariants.
pub fn analyze(germ: &MultiGerm, params: &Stabilize) -> Result<Analysis, GermError> {
    // a branch stored only to truncation T cannot be widened; fail loudly
    for b in &germ.branches {
        if let Some(avail) = b.available_order() {
            if avail < params.n_init {
                return Err(GermError::Truncation { needed: params.n_init, available: avail });
            }
        }
    }
    // start just past the largest component order; the doubling loop
    // corrects any shortfall
    let mut n = params.n_init.max(germ.max_component_order() + 3);
    loop {
        let (delta_n, _, _) = delta_at(germ, n)?;
        let (delta_2n, v1, engine) = delta_at(germ, 2 * n)?;
        let mut certified = delta_n == delta_2n;
        if certified {
            'branches: for i in 0..germ.branch_count() {
                let mut last_missing = 0usize;
                for k in 1..=2 * n {
                    if !v1.contains(&engine.pure_jet(i, k)) {
                        last_missing = k;
                    }
                }
                if last_missing >= n {
                    certified = false;
                    break 'branches;
                }
            }
        }
        if certified {
            let v2 = engine.square_part();
            let embedding_dim = v1.rank() - v2.rank();
            return Ok(Analysis {
                certified_at: 2 * n,
                delta: delta_2n,
                embedding_dim,
                v2,
                engine,
            });
        }
        if n >= params.n_max {
            return Err(GermError::Stabilization { limit: params.n_max });
        }
        n *= 2;
    }
}

impl MultiGerm {
    /// The delta invariant: codimension of the germ's algebra inside the
    /// product of the branch power series algebras.
    pub fn delta(&self, params: &Stabilize) -> Result<usize, GermError> {
        Ok(analyze(self, params)?.delta)
    }

    /// dim m/m^2 of the germ's local algebra.
    pub fn embedding_dim(&self, params: &Stabilize) -> Result<usize, GermError> {
        Ok(analyze(self, params)?.embedding_dim)
    }

    /// Per-branch tangent directions and the dimension of their span.
    pub fn tangent_data(&self) -> (Vec<Vec<Q>>, usize) {
        let tangents: Vec<Vec<Q>> = self.branches.iter().map(Branch::tangent).collect();
        let span = rank_of(tangents.iter().cloned());
        (tangents, span)
    }

    /// Does the 2-jet of the germ lie on a smooth surface? Exact linear
    /// algebra over Q.
    ///
    /// A branch of multiplicity 1 with velocity vector v (the raw t
    /// coefficient) constrains the part of its t^2 coefficient transverse
    /// to the plane P to equal q(v) for one quadratic map q: P -> C^n/P;
    /// a branch of multiplicity 2 needs its leading vector inside P;
    /// multiplicity >= 3 imposes nothing modulo t^3.
    ///
    /// When the tangent span T is a line, every admissible P contains T,
    /// the leading vectors of multiplicity-2 branches, and the scaled
    /// residue differences c_j^2 d_i - c_i^2 d_j of every pair of smooth
    /// branches (d = second-order residue, c = speed); conversely a plane
    /// containing all of those works, with q read off any one branch. So
    /// feasibility is a rank condition. When dim T = 2 the plane is T
    /// itself and the interpolation conditions on q form a linear system.
    pub fn planar_two_jet(&self) -> bool {
        let n = self.ambient_dim();
        if n <= 2 {
            return true;
        }
        let (tangents, span) = self.tangent_data();
        if span >= 3 {
            return false;
        }
        let mut t_basis = Echelon::new();
        for t in &tangents {
            t_basis.insert(t.clone());
        }
        if span == 1 {
            // forced directions: T, multiplicity-2 leading vectors, and
            // scaled second-order differences of the smooth branches
            let mut forced = t_basis.clone();
            for b in &self.branches {
                if b.multiplicity() == 2 {
                    forced.insert(b.coeff_vector(2));
                }
            }
            let smooth: Vec<(Q, Vec<Q>)> = self
                .branches
                .iter()
                .filter(|b| b.multiplicity() == 1)
                .map(|b| {
                    let speed = b
                        .coeff_vector(1)
                        .into_iter()
                        .find(|x| !x.is_zero())
                        .expect("smooth branch has a velocity");
                    (speed, b.coeff_vector(2))
                })
                .collect();
            for (i, (ci, di)) in smooth.iter().enumerate() {
                for (cj, dj) in smooth[i + 1..].iter() {
                    let v: Vec<Q> = di
                        .iter()
                        .zip(dj)
                        .map(|(a, b)| a * (cj * cj) - b * (ci * ci))
                        .collect();
                    forced.insert(v);
                }
            }
            return forced.rank() <= 2;
        }
        // span == 2: the plane is the tangent span itself
        let p = t_basis;
        for b in &self.branches {
            if b.multiplicity() == 2 && !p.contains(&b.coeff_vector(2)) {
                return false;
            }
        }
        let free_cols: Vec<usize> = {
            let p_cols: Vec<usize> = p.pivots().collect();
            (0..n).filter(|c| !p_cols.contains(c)).collect()
        };
        let mut rows: Vec<(Vec<Q>, Q)> = Vec::new();
        for b in &self.branches {
            if b.multiplicity() != 1 {
                continue;
            }
            // raw velocity keeps the reparametrisation scaling consistent
            let velocity = b.coeff_vector(1);
            let coords = match coords_in_pivot_basis(&p, &velocity) {
                Some(c) => c,
                None => return false,
            };
            let (a, bb) = (coords[0].clone(), coords[1].clone());
            let mut residue = b.coeff_vector(2);
            p.reduce(&mut residue);
            // unknowns: (q20, q11, q02) per free coordinate
            let monos = [a.clone() * &a, a.clone() * &bb, bb.clone() * &bb];
            for (fi, &col) in free_cols.iter().enumerate() {
                let mut row = vec![Q::zero(); 3 * free_cols.len()];
                for (mi, m) in monos.iter().enumerate() {
                    row[3 * fi + mi] = m.clone();
                }
                rows.push((row, residue[col].clone()));
            }
        }
        system_consistent(&rows)
    }

    /// Finest partition of the branches into wedge summands certified by
    /// tangent independence together with delta additivity.
    pub fn decompose(&self, params: &Stabilize) -> Result<Vec<Vec<usize>>, GermError> {
        let indices: Vec<usize> = (0..self.branch_count()).collect();
        let mut parts = Vec::new();
        let mut delta_cache: std::collections::BTreeMap<Vec<usize>, usize> = Default::default();
        self.split(&indices, params, &mut parts, &mut delta_cache)?;
        parts.sort();
        Ok(parts)
    }

    fn subset_delta(
        &self,
        subset: &[usize],
        params: &Stabilize,
        cache: &mut std::collections::BTreeMap<Vec<usize>, usize>,
    ) -> Result<usize, GermError> {
        if let Some(&d) = cache.get(subset) {
            return Ok(d);
        }
        let d = self.restrict(subset).delta(params)?;
        cache.insert(subset.to_vec(), d);
        Ok(d)
    }

    fn split(
        &self,
        indices: &[usize],
        params: &Stabilize,
        out: &mut Vec<Vec<usize>>,
        delta_cache: &mut std::collections::BTreeMap<Vec<usize>, usize>,
    ) -> Result<(), GermError> {
        let k = indices.len();
        if k == 1 {
            out.push(indices.to_vec());
            return Ok(());
        }
        let delta_whole = self.subset_delta(indices, params, delta_cache)?;
        let whole = self.restrict(indices);
        let (tangents, span_whole) = whole.tangent_data();
        for mask in 1u32..(1 << (k - 1)) {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (pos, &idx) in indices.iter().enumerate() {
                // branch 0 of the block stays on the left for canonical order
                if pos == 0 || mask & (1 << (pos - 1)) == 0 {
                    left.push(idx);
                } else {
                    right.push(idx);
                }
            }
            if right.is_empty() {
                continue;
            }
            let span_of = |side: &[usize]| {
                rank_of(
                    indices
                        .iter()
                        .enumerate()
                        .filter(|(_, idx)| side.contains(idx))
                        .map(|(pos, _)| tangents[pos].clone()),
                )
            };
            if span_of(&left) + span_of(&right) != span_whole {
                continue;
            }
            let d_l = self.subset_delta(&left, params, delta_cache)?;
            let d_r = self.subset_delta(&right, params, delta_cache)?;
            if d_l + d_r + 1 == delta_whole {
                self.split(&left, params, out, delta_cache)?;
                self.split(&right, params, out, delta_cache)?;
                return Ok(());
            }
        }
        out.push(indices.to_vec());
        Ok(())
    }

    /// Drop components generated by the remaining ones; the result lives in
    /// ambient dimension equal to the embedding dimension.
    pub fn stable_reduce(&self, params: &Stabilize) -> Result<MultiGerm, GermError> {
        let analysis = analyze(self, params)?;
        let engine = &analysis.engine;
        let n_comps = self.ambient_dim();
        let mut kept: Vec<usize> = (0..n_comps).collect();
        for j in (0..n_comps).rev() {
            if kept.len() == 1 {
                break;
            }
            // droppable iff z_j lies in span(others) + m^2
            let mut test = analysis.v2.clone();
            for &i in kept.iter().filter(|&&i| i != j) {
                test.insert(engine.flatten(&engine.generators[i]));
            }
            if test.contains(&engine.flatten(&engine.generators[j])) {
                kept.retain(|&i| i != j);
            }
        }
        debug_assert_eq!(kept.len(), analysis.embedding_dim.max(1));
        let branches = self
            .branches
            .iter()
            .map(|b| {
                Branch {
                    comps: kept.iter().map(|&i| b.comps[i].clone()).collect(),
                }
            })
            .collect();
        Ok(MultiGerm { branches })
    }

    /// Full signature record.
    pub fn signature(&self, params: &Stabilize) -> Result<Signature, GermError> {
        let analysis = analyze(self, params)?;
        let (_, span) = self.tangent_data();
        let mut multiplicities: Vec<usize> =
            self.branches.iter().map(Branch::multiplicity).collect();
        multiplicities.sort();
        let mut semigroups: Vec<Vec<usize>> = self
            .branches
            .iter()
            .map(|b| b.semigroup(params).map(|s| s.generators))
            .collect::<Result<_, _>>()?;
        semigroups.sort();
        let parts = self.decompose(params)?;
        let mut decomposition = Vec::with_capacity(parts.len());
        for part in &parts {
            let piece = self.restrict(part);
            let piece_analysis = analyze(&piece, params)?;
            let (_, piece_span) = piece.tangent_data();
            let mut piece_mults: Vec<usize> =
                piece.branches.iter().map(Branch::multiplicity).collect();
            piece_mults.sort();
            let mut piece_semis: Vec<Vec<usize>> = piece
                .branches
                .iter()
                .map(|b| b.semigroup(params).map(|s| s.generators))
                .collect::<Result<_, _>>()?;
            piece_semis.sort();
            decomposition.push(PieceSignature {
                branch_count: piece.branch_count(),
                multiplicities: piece_mults,
                semigroups: piece_semis,
                delta: piece_analysis.delta,
                embedding_dim: piece_analysis.embedding_dim,
                tangent_span: piece_span,
                planar_two_jet: piece.planar_two_jet(),
            });
        }
        decomposition.sort();
        let sig = Signature {
            branch_count: self.branch_count(),
            multiplicities,
            semigroups,
            delta: analysis.delta,
            embedding_dim: analysis.embedding_dim,
            tangent_span: span,
            planar_two_jet: self.planar_two_jet(),
            decomposition,
        };
        debug_assert!(sig.delta + 1 >= sig.branch_count, "delta >= r - 1 always");
        Ok(sig)
    }
}

/// Coordinates of `v` in the pivot-normalized basis of a span of rank 2.
fn coords_in_pivot_basis(span: &Echelon, v: &[Q]) -> Option<Vec<Q>> {
    let pivots: Vec<usize> = span.pivots().collect();
    if pivots.len() != 2 {
        return None;
    }
    if !span.contains(v) {
        return None;
    }
    // rows are reduced against each other, so coordinates read off pivots
    Some(pivots.iter().map(|&p| v[p].clone()).collect())
}

impl Branch {
    /// Value semigroup computed by jet linear algebra up to `window`.
    pub fn value_semigroup(&self, window: usize) -> Result<SemigroupData, GermError> {
        let max_ord = self
            .comps
            .iter()
            .filter_map(|c| match c.order() {
                Order::Finite(k) => Some(k),
                _ => None,
            })
            .max()
            .expect("nonzero branch");
        if window < 2 * max_ord {
            return Err(GermError::WindowInsufficient { window });
        }
        let germ = MultiGerm::new(vec![self.clone()])?;
        let engine = JetEngine::new(&germ, window)?;
        let v1 = engine.positive_part();
        let members: BTreeSet<usize> = std::iter::once(0).chain(v1.pivots()).collect();
        let conductor = {
            let mut c = window + 1;
            for k in (0..=window).rev() {
                if members.contains(&k) {
                    c = k;
                } else {
                    break;
                }
            }
            if c == window + 1 {
                return Err(GermError::WindowInsufficient { window });
            }
            c
        };
        let gaps: Vec<usize> = (0..conductor).filter(|k| !members.contains(k)).collect();
        // minimal generators: members not expressible as sums of two members
        let mut generators = Vec::new();
        for &m in members.iter().skip(1) {
            if m > conductor + max_ord {
                break;
            }
            let decomposable = members
                .iter()
                .skip(1)
                .take_while(|&&a| a < m)
                .any(|&a| members.contains(&(m - a)));
            if !decomposable {
                generators.push(m);
            }
        }
        let max_gen = generators.last().copied().unwrap_or(1);
        if conductor + max_gen >= window {
            return Err(GermError::WindowInsufficient { window });
        }
        let symmetric = (0..conductor).all(|k| {
            let a = members.contains(&k);
            let b = conductor > k && members.contains(&(conductor - 1 - k));
            a ^ b
        });
        Ok(SemigroupData { generators, gaps, conductor, symmetric })
    }

    /// Value semigroup with an automatically grown window.
    pub fn semigroup(&self, params: &Stabilize) -> Result<SemigroupData, GermError> {
        let start = self
            .comps
            .iter()
            .filter_map(|c| match c.order() {
                Order::Finite(k) => Some(k),
                _ => None,
            })
            .max()
            .unwrap_or(1)
            * 2
            + 2;
        let mut window = start.max(params.n_init);
        loop {
            match self.value_semigroup(window) {
                Ok(s) => return Ok(s),
                Err(GermError::WindowInsufficient { .. }) if window < params.n_max * 2 => {
                    window *= 2;
                }
                Err(e) => return Err(e),
            }
        }
    }

    /// Gorenstein test for an irreducible germ: symmetric value semigroup.
    pub fn gorenstein(&self, params: &Stabilize) -> Result<bool, GermError> {
        Ok(self.semigroup(params)?.symmetric)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qi;
    use crate::series::Series;

    fn st() -> Stabilize {
        Stabilize::default()
    }

    /// Independent oracle: gap set of the numerical semigroup generated by
    /// `gens`, by brute-force dynamic programming.
    fn semigroup_gaps_oracle(gens: &[usize], bound: usize) -> Vec<usize> {
        let mut member = vec![false; bound + 1];
        member[0] = true;
        for k in 1..=bound {
            member[k] = gens.iter().any(|&g| g <= k && member[k - g]);
        }
        (1..=bound).filter(|&k| !member[k]).collect()
    }

    #[test]
    fn multiplicity_examples() {
        let b = Branch::from_exponents(Var(0), &[4, 6, 7]);
        assert_eq!(b.multiplicity(), 4);
        let b = Branch::from_exponents(Var(0), &[1, 0, 0]);
        assert_eq!(b.multiplicity(), 1);
        let b = Branch::from_exponents(Var(0), &[5, 6, 7, 8]);
        assert_eq!(b.multiplicity(), 5);
    }

    #[test]
    fn zero_branch_rejected() {
        let z = Series::zero(Var(0));
        assert_eq!(Branch::new(vec![z.clone(), z]), Err(GermError::ZeroBranch));
    }

    #[test]
    fn value_semigroup_467() {
        let b = Branch::from_exponents(Var(0), &[4, 6, 7]);
        let s = b.semigroup(&st()).unwrap();
        assert_eq!(s.generators, vec![4, 6, 7]);
        assert_eq!(s.gaps, semigroup_gaps_oracle(&[4, 6, 7], 40));
        assert_eq!(s.gaps, vec![1, 2, 3, 5, 9]);
        assert_eq!(s.delta(), 5);
        assert_eq!(s.conductor, 10);
        assert!(s.symmetric);
    }

    #[test]
    fn value_semigroup_23_and_457() {
        let cusp = Branch::from_exponents(Var(0), &[2, 3]);
        let s = cusp.semigroup(&st()).unwrap();
        assert_eq!(s.gaps, vec![1]);
        assert_eq!(s.delta(), 1);
        assert_eq!(s.conductor, 2);
        assert!(s.symmetric);

        let b = Branch::from_exponents(Var(0), &[4, 5, 7]);
        let s = b.semigroup(&st()).unwrap();
        assert_eq!(s.gaps, vec![1, 2, 3, 6]);
        assert_eq!(s.delta(), 4);
        assert_eq!(s.gaps, semigroup_gaps_oracle(&[4, 5, 7], 40));
        assert!(!s.symmetric);
    }

    #[test]
    fn semigroup_not_generated_by_component_orders() {
        // components (t^4, t^6 + t^7): the algebra contains an order-13
        // element even though <4,6> misses it
        let b = Branch::new(vec![
            Series::t_power(Var(0), 4),
            Series::t_power(Var(0), 6).add(&Series::t_power(Var(0), 7)),
        ])
        .unwrap();
        let s = b.semigroup(&st()).unwrap();
        assert!(s.contains(13));
        assert!(!s.contains(9));
    }

    #[test]
    fn window_too_small_is_an_error() {
        let b = Branch::from_exponents(Var(0), &[4, 6, 7]);
        assert!(matches!(
            b.value_semigroup(8),
            Err(GermError::WindowInsufficient { .. })
        ));
    }

    #[test]
    fn delta_of_coordinate_axes_and_monomial_curves() {
        for r in 2..=6 {
            let rows: Vec<Vec<usize>> = (0..r)
                .map(|i| {
                    let mut row = vec![0; r];
                    row[i] = 1;
                    row
                })
                .collect();
            let axes = MultiGerm::from_exponents(&rows);
            assert_eq!(axes.delta(&st()).unwrap(), r - 1, "L_{r}^{r}");
        }
        for k in 2..=6 {
            let row: Vec<usize> = (k..2 * k).collect();
            let mk = MultiGerm::from_exponents(&[row]);
            assert_eq!(mk.delta(&st()).unwrap(), k - 1, "M_{k}");
        }
    }

    #[test]
    fn delta_agrees_with_gap_count_for_branches() {
        for gens in [vec![4, 6, 7], vec![5, 6, 7, 8], vec![4, 5, 7], vec![3, 7, 8]] {
            let germ = MultiGerm::from_exponents(&[gens.clone()]);
            let delta = germ.delta(&st()).unwrap();
            let gaps = semigroup_gaps_oracle(&gens, 60);
            assert_eq!(delta, gaps.len(), "delta vs gaps for {gens:?}");
        }
    }

    #[test]
    fn embedding_dimension_examples() {
        let g = MultiGerm::from_exponents(&[vec![2, 3, 0, 0]]);
        assert_eq!(g.embedding_dim(&st()).unwrap(), 2);
        let g = MultiGerm::from_exponents(&[vec![5, 6, 7, 8]]);
        assert_eq!(g.embedding_dim(&st()).unwrap(), 4);
        // three coordinate axes in C^3
        let g = MultiGerm::from_exponents(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(g.embedding_dim(&st()).unwrap(), 3);
    }

    #[test]
    fn tangent_data_examples() {
        let axes = MultiGerm::from_exponents(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let (tangents, span) = axes.tangent_data();
        assert_eq!(span, 3);
        assert_eq!(tangents[0], vec![qi(1), qi(0), qi(0)]);

        let cusp = MultiGerm::from_exponents(&[vec![2, 3]]);
        let (tangents, span) = cusp.tangent_data();
        assert_eq!(tangents[0], vec![qi(1), qi(0)]);
        assert_eq!(span, 1);
    }

    fn l31(lambda: i64) -> MultiGerm {
        // (0,t,0) + (u^2,u,0) + (lambda v^2, v, v^3)
        let v0 = Var(0);
        let b1 = Branch::new(vec![
            Series::zero(v0),
            Series::t_power(v0, 1),
            Series::zero(v0),
        ])
        .unwrap();
        let b2 = Branch::new(vec![
            Series::t_power(v0, 2),
            Series::t_power(v0, 1),
            Series::zero(v0),
        ])
        .unwrap();
        let b3 = Branch::new(vec![
            Series::t_power(v0, 2).scale(&crate::coeff::Coeff::int(lambda)),
            Series::t_power(v0, 1),
            Series::t_power(v0, 3),
        ])
        .unwrap();
        MultiGerm::new(vec![b1, b2, b3]).unwrap()
    }

    #[test]
    fn tangents_of_l31_share_one_direction() {
        let g = l31(2);
        let (tangents, span) = g.tangent_data();
        for t in &tangents {
            assert_eq!(t, &vec![qi(0), qi(1), qi(0)]);
        }
        assert_eq!(span, 1);
    }

    #[test]
    fn planar_two_jet_discriminates() {
        // L_3^1 has planar 2-jet
        assert!(l31(2).planar_two_jet());
        // S_3^t = (1,-,-)+(1,2,-)+(1,-,2) does not
        let s3t = MultiGerm::from_exponents(&[vec![1, 0, 0], vec![1, 2, 0], vec![1, 0, 2]]);
        assert!(!s3t.planar_two_jet());
        // plane germs always do
        let plane = MultiGerm::from_exponents(&[vec![2, 3]]);
        assert!(plane.planar_two_jet());
    }

    #[test]
    fn gorenstein_examples() {
        let b = Branch::from_exponents(Var(0), &[4, 6, 7]);
        assert!(b.gorenstein(&st()).unwrap());
        let b = Branch::from_exponents(Var(0), &[4, 5, 7]);
        assert!(!b.gorenstein(&st()).unwrap());
        let b = Branch::from_exponents(Var(0), &[2, 3]);
        assert!(b.gorenstein(&st()).unwrap());
    }

    #[test]
    fn decompose_examples() {
        // three coordinate axes: three singletons
        let axes = MultiGerm::from_exponents(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(
            axes.decompose(&st()).unwrap(),
            vec![vec![0], vec![1], vec![2]]
        );
        // A2 v M3 in C^5
        let g = MultiGerm::from_exponents(&[vec![2, 3, 0, 0, 0], vec![0, 0, 3, 4, 5]]);
        assert_eq!(g.decompose(&st()).unwrap(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn wedge_delta_is_additive_plus_one() {
        let cusp = MultiGerm::from_exponents(&[vec![2, 3]]);
        let m3 = MultiGerm::from_exponents(&[vec![3, 4, 5]]);
        let w = cusp.wedge(&m3);
        assert_eq!(
            w.delta(&st()).unwrap(),
            cusp.delta(&st()).unwrap() + m3.delta(&st()).unwrap() + 1
        );
        assert_eq!(w.decompose(&st()).unwrap(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn stable_reduce_examples() {
        let g = MultiGerm::from_exponents(&[vec![2, 3, 0]]);
        let red = g.stable_reduce(&st()).unwrap();
        assert_eq!(red.ambient_dim(), 2);
        assert_eq!(red, MultiGerm::from_exponents(&[vec![2, 3]]));

        // linear dependence: (t^2, t^3, t^2 + t^3) reduces to dimension 2
        let v = Var(0);
        let b = Branch::new(vec![
            Series::t_power(v, 2),
            Series::t_power(v, 3),
            Series::t_power(v, 2).add(&Series::t_power(v, 3)),
        ])
        .unwrap();
        let g = MultiGerm::new(vec![b]).unwrap();
        let red = g.stable_reduce(&st()).unwrap();
        assert_eq!(red.ambient_dim(), 2);
        assert_eq!(red.delta(&st()).unwrap(), g.delta(&st()).unwrap());

        // a component that is a product of the others drops too
        let g = MultiGerm::from_exponents(&[vec![2, 3, 5]]);
        let red = g.stable_reduce(&st()).unwrap();
        assert_eq!(red.ambient_dim(), 2);
        assert_eq!(red.signature(&st()).unwrap(), g.signature(&st()).unwrap());

        // minimal generators are all needed
        let g = MultiGerm::from_exponents(&[vec![4, 5, 6, 7]]);
        assert_eq!(g.stable_reduce(&st()).unwrap(), g);
    }

    #[test]
    fn signature_is_invariant_under_presentation_changes() {
        let g = MultiGerm::from_exponents(&[vec![2, 3, 0], vec![0, 0, 1]]);
        let base = g.signature(&st()).unwrap();

        // permutation of branches
        let perm = MultiGerm::from_exponents(&[vec![0, 0, 1], vec![2, 3, 0]]);
        assert_eq!(perm.signature(&st()).unwrap(), base);

        // linear change of target coordinates (unimodular over Q)
        let v = Var(0);
        let change = |b: &Branch| {
            let c = b.components();
            // (x, y, z) -> (x + 2z, y - x, z + y)
            Branch::new(vec![
                c[0].add(&c[2].scale(&crate::coeff::Coeff::int(2))),
                c[1].sub(&c[0]),
                c[2].add(&c[1]),
            ])
            .unwrap()
        };
        let changed = MultiGerm::new(g.branches().iter().map(change).collect()).unwrap();
        assert_eq!(changed.signature(&st()).unwrap(), base);
        let _ = v;

        // reparametrisation t -> t(1 + t) of the first branch
        let inner = Series::t_power(Var(0), 1).add(&Series::t_power(Var(0), 2));
        let reparam = Branch::new(
            g.branches()[0]
                .components()
                .iter()
                .map(|c| c.compose(&inner).unwrap())
                .collect(),
        )
        .unwrap();
        let g2 = MultiGerm::new(vec![reparam, g.branches()[1].clone()]).unwrap();
        assert_eq!(g2.signature(&st()).unwrap(), base);

        // stable padding by zero components
        let padded = g.padded(5);
        assert_eq!(padded.signature(&st()).unwrap(), base);
    }

    #[test]
    fn delta_bound_r_minus_one() {
        let pairs = [
            MultiGerm::from_exponents(&[vec![1, 0], vec![0, 1]]),
            MultiGerm::from_exponents(&[vec![2, 3], vec![0, 1]]),
            MultiGerm::from_exponents(&[vec![1, 0], vec![1, 2]]),
        ];
        for g in pairs {
            let d = g.delta(&st()).unwrap();
            assert!(d + 1 >= g.branch_count());
        }
    }

    #[test]
    fn truncated_branch_without_enough_data_fails_loudly() {
        let v = Var(0);
        let c = Series::t_power(v, 2).truncated(5).unwrap();
        let b = Branch::new(vec![c, Series::t_power(v, 3).truncated(5).unwrap()]).unwrap();
        let g = MultiGerm::new(vec![b]).unwrap();
        assert!(matches!(
            g.delta(&Stabilize::default()),
            Err(GermError::Truncation { .. })
        ));
    }

    #[test]
    fn nonmonomial_coefficients_change_nothing_for_quasihomogeneous_types() {
        // (t^2, t^3 + t^4) has the same signature as the cusp
        let v = Var(0);
        let b = Branch::new(vec![
            Series::t_power(v, 2),
            Series::t_power(v, 3).add(&Series::t_power(v, 4)),
        ])
        .unwrap();
        let g = MultiGerm::new(vec![b]).unwrap();
        let cusp = MultiGerm::from_exponents(&[vec![2, 3]]);
        assert_eq!(g.signature(&st()).unwrap(), cusp.signature(&st()).unwrap());
    }
}
