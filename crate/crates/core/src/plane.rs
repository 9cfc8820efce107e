//! Embedded resolution of plane multi-germs by iterated blow-up.
//!
//! The tree of infinitely near points is built until the reduced total
//! transform has normal crossings at every point of the strict transform:
//! all local branches smooth, pairwise transverse, transverse to every
//! exceptional component through the point, and at most two curves in total
//! through any point. Point identification on the exceptional curve is by
//! exact rational centre; each node records how many exceptional components
//! pass through it (a satellite point lies on two).
//!
//! From the tree: multiplicity sequences, the satellite count, the modality
//! formula sum of (m_P-1)(m_P-2)/2 - r - s + 2, the "reduced total transform
//! has multiplicity at most three" simplicity test, and recognition of the
//! A-D-E multiplicity-sequence table.

use num_traits::Zero;

use crate::germ::{GermError, MultiGerm, Stabilize};
use crate::rat::Q;
use crate::series::{Order, Series};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum PlaneError {
    #[error("plane resolution needs ambient dimension 2, got {0}")]
    NotPlane(usize),
    #[error("truncation exhausted while recentering a strict transform")]
    TruncationExhausted,
    #[error("resolution did not terminate within the expected depth {0}")]
    DepthExceeded(usize),
    #[error(transparent)]
    Germ(#[from] GermError),
}

/// Tangent direction of a plane curve at a point: vertical (0:1) or the
/// slope c of a direction (1:c).
#[derive(Clone, PartialEq, Eq, Debug)]
enum Dir {
    Vertical,
    Slope(Q),
}

/// One local branch at an infinitely near point.
#[derive(Clone, Debug)]
struct LocalBranch {
    id: usize,
    x: Series,
    y: Series,
}

impl LocalBranch {
    fn orders(&self) -> (Option<usize>, Option<usize>) {
        let fin = |s: &Series| match s.order() {
            Order::Finite(k) => Some(k),
            _ => None,
        };
        (fin(&self.x), fin(&self.y))
    }

    fn multiplicity(&self) -> Result<usize, PlaneError> {
        let (ox, oy) = self.orders();
        match (ox, oy) {
            (Some(a), Some(b)) => Ok(a.min(b)),
            (Some(a), None) => Ok(a),
            (None, Some(b)) => Ok(b),
            (None, None) => Err(PlaneError::TruncationExhausted),
        }
    }

    fn direction(&self) -> Result<Dir, PlaneError> {
        let m = self.multiplicity()?;
        let cx = self.x.coeff(m).as_rational().expect("plane data is rational");
        let cy = self.y.coeff(m).as_rational().expect("plane data is rational");
        if cx.is_zero() {
            Ok(Dir::Vertical)
        } else {
            Ok(Dir::Slope(cy / cx))
        }
    }
}

/// A node of the resolution tree: one infinitely near point met by the
/// strict transform.
#[derive(Clone, Debug)]
pub struct NearPoint {
    pub id: usize,
    pub parent: Option<usize>,
    /// Branch ids passing through this point.
    pub branches: Vec<usize>,
    /// Multiplicities of those branches at this point (same order).
    pub branch_mults: Vec<usize>,
    /// Number of exceptional components through the point: 0, 1 or 2.
    pub exceptional: usize,
}

impl NearPoint {
    /// Sum of the local branch multiplicities.
    pub fn multiplicity(&self) -> usize {
        self.branch_mults.iter().sum()
    }

    /// Multiplicity of the reduced total transform.
    pub fn reduced_total(&self) -> usize {
        self.multiplicity() + self.exceptional
    }

    pub fn satellite(&self) -> bool {
        self.exceptional == 2
    }

    pub fn free(&self) -> bool {
        self.exceptional <= 1
    }
}

/// Resolution tree of a plane multi-germ.
#[derive(Clone, Debug)]
pub struct ResolutionTree {
    pub nodes: Vec<NearPoint>,
    /// Node ids along each branch, root first.
    pub branch_paths: Vec<Vec<usize>>,
    pub branch_count: usize,
}

impl ResolutionTree {
    /// Satellite points met by the strict transform.
    pub fn satellite_count(&self) -> usize {
        self.nodes.iter().filter(|p| p.satellite()).count()
    }

    /// Modality of the germ from the multiplicity data of the tree:
    /// sum of (m_P - 1)(m_P - 2)/2 over all nodes, minus the number of
    /// branches, minus the satellite count, plus two.
    pub fn modality(&self) -> i64 {
        let msum: i64 = self
            .nodes
            .iter()
            .map(|p| {
                let m = p.multiplicity() as i64;
                (m - 1) * (m - 2) / 2
            })
            .sum();
        msum - self.branch_count as i64 - self.satellite_count() as i64 + 2
    }

    /// True iff the multiplicity of the reduced total transform stays at
    /// most three in every step of the embedded resolution.
    pub fn simple(&self) -> bool {
        self.nodes.iter().all(|p| p.reduced_total() <= 3)
    }

    /// Multiplicity sequence of one branch, trimmed after the first 1.
    pub fn multiplicity_sequence(&self, branch: usize) -> Vec<usize> {
        let mut seq = Vec::new();
        for &node in &self.branch_paths[branch] {
            let p = &self.nodes[node];
            let pos = p.branches.iter().position(|&b| b == branch).unwrap();
            let m = p.branch_mults[pos];
            seq.push(m);
            if m == 1 {
                break;
            }
        }
        if seq.last() != Some(&1) {
            seq.push(1);
        }
        seq
    }

    /// Number of infinitely near points two branches share.
    pub fn contact_nodes(&self, a: usize, b: usize) -> usize {
        self.branch_paths[a]
            .iter()
            .filter(|n| self.branch_paths[b].contains(n))
            .count()
    }

    /// Structured text export: one line per node, breadth-first ids.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for p in &self.nodes {
            let parent = match p.parent {
                None => "-".to_string(),
                Some(q) => q.to_string(),
            };
            out.push_str(&format!(
                "node={} parent={} m={} exc={} satellite={} branches={}\n",
                p.id,
                parent,
                p.multiplicity(),
                p.exceptional,
                p.satellite(),
                p.branches
                    .iter()
                    .map(|b| b.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ));
        }
        out
    }
}

/// One blow-up step on a single local branch. Returns the chart ('A' when
/// ord x <= ord y, else 'B'), the strict transform recentred at the next
/// infinitely near point, and the exceptional coordinate of that point.
pub fn blowup_branch(x: &Series, y: &Series) -> Result<(char, (Series, Series), Q), PlaneError> {
    let fin = |s: &Series| match s.order() {
        Order::Finite(k) => Some(k),
        _ => None,
    };
    let (ox, oy) = (fin(x), fin(y));
    let chart_a = match (ox, oy) {
        (Some(a), Some(b)) => a <= b,
        (Some(_), None) => true,
        (None, Some(_)) => false,
        (None, None) => return Err(PlaneError::TruncationExhausted),
    };
    let ratio_of = |num: &Series, den: &Series, dord: usize| -> Result<Series, PlaneError> {
        if num.is_zero_to_truncation() && num.is_exact() {
            let avail = den.truncation().unwrap_or(dord + 4);
            Series::zero(num.var())
                .truncated(avail.saturating_sub(dord))
                .map_err(|_| PlaneError::TruncationExhausted)
        } else {
            num.div(den).map_err(|_| PlaneError::TruncationExhausted)
        }
    };
    if chart_a {
        let ratio = ratio_of(y, x, ox.expect("chart A has finite ord x"))?;
        let centre = ratio.coeff(0).as_rational().expect("plane data is rational");
        let recentred = ratio.sub(&Series::monomial(
            ratio.var(),
            crate::coeff::Coeff::constant(centre.clone()),
            0,
        ));
        Ok(('A', (x.clone(), recentred), centre))
    } else {
        let ratio = ratio_of(x, y, oy.expect("chart B has finite ord y"))?;
        let centre = ratio.coeff(0).as_rational().expect("plane data is rational");
        let recentred = ratio.sub(&Series::monomial(
            ratio.var(),
            crate::coeff::Coeff::constant(centre.clone()),
            0,
        ));
        Ok(('B', (recentred, y.clone()), centre))
    }
}

struct Point {
    parent: Option<usize>,
    branches: Vec<LocalBranch>,
    /// Directions of the exceptional components through the point.
    exc: Vec<Dir>,
    depth: usize,
}

/// Build the minimal embedded resolution tree of a plane multi-germ with
/// rational coefficients.
pub fn resolution_tree(germ: &MultiGerm, params: &Stabilize) -> Result<ResolutionTree, PlaneError> {
    if germ.ambient_dim() != 2 {
        return Err(PlaneError::NotPlane(germ.ambient_dim()));
    }
    // truncation and termination budget from the delta invariant
    let delta = germ.delta(params)?;
    let total_mult: usize = germ.branches().iter().map(|b| b.multiplicity()).sum();
    let depth_bound = delta + total_mult + 2;
    let work_trunc = params.n_max.max(4 * (delta + total_mult + 4));

    let root_branches: Vec<LocalBranch> = germ
        .branches()
        .iter()
        .enumerate()
        .map(|(id, b)| {
            let c = b.components();
            Ok(LocalBranch {
                id,
                x: c[0]
                    .truncated(c[0].truncation().unwrap_or(work_trunc).min(work_trunc))
                    .map_err(|_| PlaneError::TruncationExhausted)?,
                y: c[1]
                    .truncated(c[1].truncation().unwrap_or(work_trunc).min(work_trunc))
                    .map_err(|_| PlaneError::TruncationExhausted)?,
            })
        })
        .collect::<Result<_, PlaneError>>()?;

    let mut nodes: Vec<NearPoint> = Vec::new();
    let mut branch_paths: Vec<Vec<usize>> = vec![Vec::new(); germ.branch_count()];
    let mut worklist = vec![Point {
        parent: None,
        branches: root_branches,
        exc: Vec::new(),
        depth: 0,
    }];

    while let Some(point) = worklist.pop() {
        if point.depth > depth_bound {
            return Err(PlaneError::DepthExceeded(depth_bound));
        }
        let id = nodes.len();
        let mut branch_mults = Vec::new();
        let mut dirs = Vec::new();
        for lb in &point.branches {
            branch_mults.push(lb.multiplicity()?);
            dirs.push(lb.direction()?);
            branch_paths[lb.id].push(id);
        }
        nodes.push(NearPoint {
            id,
            parent: point.parent,
            branches: point.branches.iter().map(|lb| lb.id).collect(),
            branch_mults: branch_mults.clone(),
            exceptional: point.exc.len(),
        });

        // normal crossings test: all branches smooth, all tangents (branch
        // and exceptional) pairwise distinct, at most two curves in total
        let all_smooth = branch_mults.iter().all(|&m| m == 1);
        let mut tangents: Vec<&Dir> = dirs.iter().collect();
        tangents.extend(point.exc.iter());
        let distinct = tangents
            .iter()
            .enumerate()
            .all(|(i, d)| tangents[i + 1..].iter().all(|e| d != e));
        let few = point.branches.len() + point.exc.len() <= 2;
        if all_smooth && distinct && few {
            continue;
        }

        // blow up: group strict transforms by (chart, centre)
        let mut chart_a: Vec<(Q, LocalBranch)> = Vec::new();
        let mut chart_b: Vec<LocalBranch> = Vec::new();
        for lb in &point.branches {
            let (chart, (nx, ny), centre) = blowup_branch(&lb.x, &lb.y)?;
            let moved = LocalBranch { id: lb.id, x: nx, y: ny };
            if chart == 'A' {
                chart_a.push((centre, moved));
            } else {
                debug_assert!(centre.is_zero(), "chart B centre is the origin");
                chart_b.push(moved);
            }
        }
        // chart A: the new exceptional is vertical there; the strict
        // transform of a former exceptional of slope c passes horizontally
        // through the chart-A point with coordinate c
        let mut centres: Vec<Q> = chart_a.iter().map(|(c, _)| c.clone()).collect();
        centres.sort();
        centres.dedup();
        for centre in centres {
            let group: Vec<LocalBranch> = chart_a
                .iter()
                .filter(|(c, _)| *c == centre)
                .map(|(_, lb)| lb.clone())
                .collect();
            let mut exc = vec![Dir::Vertical];
            if point.exc.iter().any(|d| matches!(d, Dir::Slope(c) if *c == centre)) {
                exc.push(Dir::Slope(Q::zero()));
            }
            worklist.push(Point {
                parent: Some(id),
                branches: group,
                exc,
                depth: point.depth + 1,
            });
        }
        // chart B origin: the new exceptional is horizontal there; a former
        // vertical exceptional passes through it vertically
        if !chart_b.is_empty() {
            let mut exc = vec![Dir::Slope(Q::zero())];
            if point.exc.iter().any(|d| matches!(d, Dir::Vertical)) {
                exc.push(Dir::Vertical);
            }
            worklist.push(Point {
                parent: Some(id),
                branches: chart_b,
                exc,
                depth: point.depth + 1,
            });
        }
    }

    Ok(renumber(nodes, branch_paths, germ.branch_count()))
}

// breadth-first renumbering, branches in input order, for stable output
fn renumber(
    nodes: Vec<NearPoint>,
    branch_paths: Vec<Vec<usize>>,
    branch_count: usize,
) -> ResolutionTree {
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by_key(|&i| {
        (
            depth_of(&nodes, i),
            nodes[i].branches.first().copied().unwrap_or(usize::MAX),
            i,
        )
    });
    let mut relabel = vec![0usize; nodes.len()];
    for (new, &old) in order.iter().enumerate() {
        relabel[old] = new;
    }
    let mut new_nodes: Vec<NearPoint> = order
        .iter()
        .map(|&old| {
            let mut p = nodes[old].clone();
            p.id = relabel[old];
            p.parent = p.parent.map(|q| relabel[q]);
            p
        })
        .collect();
    new_nodes.sort_by_key(|p| p.id);
    let new_paths = branch_paths
        .iter()
        .map(|path| {
            let mut q: Vec<usize> = path.iter().map(|&n| relabel[n]).collect();
            q.sort();
            q
        })
        .collect();
    ResolutionTree { nodes: new_nodes, branch_paths: new_paths, branch_count }
}

fn depth_of(nodes: &[NearPoint], mut i: usize) -> usize {
    let mut d = 0;
    while let Some(p) = nodes[i].parent {
        d += 1;
        i = p;
    }
    d
}

/// Multiplicity sequence of a single plane branch.
pub fn multiplicity_sequence(
    germ: &MultiGerm,
    branch: usize,
    params: &Stabilize,
) -> Result<Vec<usize>, PlaneError> {
    let tree = resolution_tree(&germ.restrict(&[branch]), params)?;
    Ok(tree.multiplicity_sequence(0))
}

/// A-D-E label recognised from the resolution tree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AdeLabel {
    A(usize),
    D(usize),
    E(usize),
}

impl std::fmt::Display for AdeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AdeLabel::A(k) => write!(f, "A{k}"),
            AdeLabel::D(k) => write!(f, "D{k}"),
            AdeLabel::E(k) => write!(f, "E{k}"),
        }
    }
}

/// Match branch multiplicity sequences and the separation pattern against
/// the simple-plane-curve table.
pub fn ade_recognize(tree: &ResolutionTree) -> Option<AdeLabel> {
    let r = tree.branch_count;
    let seqs: Vec<Vec<usize>> = (0..r).map(|b| tree.multiplicity_sequence(b)).collect();
    let twos = |s: &[usize]| -> Option<usize> {
        // (2, 2, ..., 2, 1): the cusp family; anything else is rejected
        let k = s.iter().take_while(|&&m| m == 2).count();
        if s.len() == k + 1 && s[k] == 1 {
            Some(k)
        } else {
            None
        }
    };
    match r {
        1 => {
            let s = &seqs[0];
            if s == &[1] {
                return None; // smooth, not a singularity
            }
            if let Some(k) = twos(s) {
                return Some(AdeLabel::A(2 * k));
            }
            match s.as_slice() {
                [3, 1] => Some(AdeLabel::E(6)),
                [3, 2, 1] => Some(AdeLabel::E(8)),
                _ => None,
            }
        }
        2 => {
            let shared = tree.contact_nodes(0, 1);
            let smooth: Vec<bool> = seqs.iter().map(|s| s == &[1]).collect();
            match (smooth[0], smooth[1]) {
                (true, true) => Some(AdeLabel::A(2 * shared - 1)),
                (true, false) | (false, true) => {
                    let cusp = if smooth[0] { &seqs[1] } else { &seqs[0] };
                    let k = twos(cusp)?;
                    match shared {
                        1 => Some(AdeLabel::D(2 * k + 3)),
                        2 if k == 1 => Some(AdeLabel::E(7)),
                        _ => None,
                    }
                }
                (false, false) => None,
            }
        }
        3 => {
            if seqs.iter().any(|s| s != &[1]) {
                return None;
            }
            let c01 = tree.contact_nodes(0, 1);
            let c02 = tree.contact_nodes(0, 2);
            let c12 = tree.contact_nodes(1, 2);
            let mut contacts = [c01, c02, c12];
            contacts.sort();
            match contacts {
                [1, 1, c] => Some(AdeLabel::D(2 * c + 2)),
                _ => None,
            }
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::MultiGerm;

    fn st() -> Stabilize {
        Stabilize::default()
    }

    fn resolve(rows: &[Vec<usize>]) -> ResolutionTree {
        resolution_tree(&MultiGerm::from_exponents(rows), &st()).unwrap()
    }

    #[test]
    fn blowup_of_the_cusp() {
        let x = Series::t_power(crate::series::Var(0), 2).truncated(10).unwrap();
        let y = Series::t_power(crate::series::Var(0), 3).truncated(10).unwrap();
        let (chart, (nx, ny), centre) = blowup_branch(&x, &y).unwrap();
        assert_eq!(chart, 'A');
        assert!(centre.is_zero());
        assert_eq!(nx.order(), Order::Finite(2));
        assert_eq!(ny.order(), Order::Finite(1));
    }

    #[test]
    fn blowup_of_a4() {
        // (t^2, t^5) -> chart A, (t^2, t^3)
        let x = Series::t_power(crate::series::Var(0), 2).truncated(10).unwrap();
        let y = Series::t_power(crate::series::Var(0), 5).truncated(10).unwrap();
        let (chart, (_, ny), centre) = blowup_branch(&x, &y).unwrap();
        assert_eq!(chart, 'A');
        assert!(centre.is_zero());
        assert_eq!(ny.order(), Order::Finite(3));
    }

    #[test]
    fn cusp_tree_has_one_satellite() {
        let tree = resolve(&[vec![2, 3]]);
        assert_eq!(tree.multiplicity_sequence(0), vec![2, 1]);
        assert_eq!(tree.satellite_count(), 1);
        assert_eq!(tree.modality(), 0);
        assert!(tree.simple());
        assert_eq!(ade_recognize(&tree), Some(AdeLabel::A(2)));
    }

    #[test]
    fn e6_and_e8_trees() {
        let tree = resolve(&[vec![3, 4]]);
        assert_eq!(tree.multiplicity_sequence(0), vec![3, 1]);
        assert_eq!(tree.satellite_count(), 2);
        assert_eq!(tree.modality(), 0);
        assert_eq!(ade_recognize(&tree), Some(AdeLabel::E(6)));

        let tree = resolve(&[vec![3, 5]]);
        assert_eq!(tree.multiplicity_sequence(0), vec![3, 2, 1]);
        assert_eq!(tree.satellite_count(), 2);
        assert_eq!(tree.modality(), 0);
        assert_eq!(ade_recognize(&tree), Some(AdeLabel::E(8)));
    }

    #[test]
    fn a_series_sequences() {
        let tree = resolve(&[vec![2, 5]]);
        assert_eq!(tree.multiplicity_sequence(0), vec![2, 2, 1]);
        assert_eq!(tree.satellite_count(), 1);
        assert_eq!(ade_recognize(&tree), Some(AdeLabel::A(4)));

        let smooth = resolve(&[vec![1, 3]]);
        assert_eq!(smooth.multiplicity_sequence(0), vec![1]);
        assert_eq!(ade_recognize(&smooth), None);
    }

    #[test]
    fn multibranch_labels() {
        // three pairwise transverse lines: D4
        let tree = resolve(&[vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(ade_recognize(&tree), Some(AdeLabel::D(4)));
        assert!(tree.simple());
        assert_eq!(tree.modality(), 0);

        // cusp plus its tangent line: E7
        let tree = resolve(&[vec![2, 3], vec![1, 0]]);
        assert_eq!(ade_recognize(&tree), Some(AdeLabel::E(7)));
        assert_eq!(tree.modality(), 0);

        // cusp plus a transverse line: D5
        let tree = resolve(&[vec![2, 3], vec![0, 1]]);
        assert_eq!(ade_recognize(&tree), Some(AdeLabel::D(5)));

        // two transverse lines: A1
        let tree = resolve(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(ade_recognize(&tree), Some(AdeLabel::A(1)));
    }

    #[test]
    fn confining_plane_curves_have_modality_one() {
        // four concurrent lines
        let tree = resolve(&[vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]]);
        assert_eq!(tree.modality(), 1);
        assert!(!tree.simple());
        assert_eq!(ade_recognize(&tree), None);

        // x(x - y^2)(x - 2y^2): three smooth branches with common tangent
        let v = crate::series::Var(0);
        let b1 = crate::germ::Branch::new(vec![Series::zero(v), Series::t_power(v, 1)]).unwrap();
        let b2 = crate::germ::Branch::new(vec![Series::t_power(v, 2), Series::t_power(v, 1)]).unwrap();
        let b3 = crate::germ::Branch::new(vec![
            Series::t_power(v, 2).scale(&crate::coeff::Coeff::int(2)),
            Series::t_power(v, 1),
        ])
        .unwrap();
        let g = MultiGerm::new(vec![b1, b2, b3]).unwrap();
        let tree = resolution_tree(&g, &st()).unwrap();
        assert_eq!(tree.modality(), 1);
        assert!(!tree.simple());
        assert_eq!(ade_recognize(&tree), None);
    }

    #[test]
    fn delta_matches_node_multiplicities() {
        // classical: delta = sum of m_P (m_P - 1) / 2 over the tree
        for rows in [
            vec![vec![2, 3]],
            vec![vec![2, 5]],
            vec![vec![3, 4]],
            vec![vec![3, 5]],
            vec![vec![2, 3], vec![1, 0]],
            vec![vec![2, 3], vec![0, 1]],
            vec![vec![1, 0], vec![0, 1], vec![1, 1]],
        ] {
            let g = MultiGerm::from_exponents(&rows);
            let tree = resolution_tree(&g, &st()).unwrap();
            let from_tree: usize = tree
                .nodes
                .iter()
                .map(|p| p.multiplicity() * (p.multiplicity() - 1) / 2)
                .sum();
            assert_eq!(g.delta(&st()).unwrap(), from_tree, "{rows:?}");
        }
    }

    #[test]
    fn wild_branch_resolves_within_budget() {
        let tree = resolve(&[vec![4, 7]]);
        assert!(tree.nodes.len() > 3);
        assert_eq!(tree.multiplicity_sequence(0), vec![4, 3, 1]);
    }
}
