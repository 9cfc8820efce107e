//! Decide simplicity of an input parametrisation: match its signature
//! against the catalogue, or produce a non-simple verdict from the
//! reduction rules, or admit ignorance.
//!
//! Recognition order: stable reduction, then signature matching (exact for
//! the discrete fields; the modulus of a confining family is not part of
//! the type), then the non-simple rules in the order the classification
//! eliminates cases: global multiplicity and branch-count bounds first,
//! then valuation bounds for irreducible germs, then tangent-configuration
//! rules. A signature matching two or more catalogue labels yields an
//! Unknown verdict carrying the ambiguity set, never a guess.

use crate::atlas::{Atlas, SignatureIndex};
use crate::deform::{quintic_congruence_family, DeformationFamily};
use crate::germ::{GermError, MultiGerm, Signature, Stabilize};

/// Outcome of classifying one germ.
pub enum Verdict {
    /// The signature matches exactly one simple normal form.
    Simple { label: String },
    /// A reduction rule applies; the germ deforms into a confining curve.
    NotSimple {
        rule: String,
        witness: Option<DeformationFamily>,
    },
    /// No decision: either several normal forms share the signature, or
    /// nothing matched and no rule applied.
    Unknown {
        reason: String,
        candidates: Vec<String>,
    },
}

impl Verdict {
    pub fn render(&self) -> String {
        match self {
            Verdict::Simple { label } => format!("verdict=simple label={label}"),
            Verdict::NotSimple { rule, witness } => {
                let w = witness
                    .as_ref()
                    .map(|f| format!(" witness-target={}", f.target.as_deref().unwrap_or("-")))
                    .unwrap_or_default();
                format!("verdict=not-simple rule={rule}{w}")
            }
            Verdict::Unknown { reason, candidates } => {
                if candidates.is_empty() {
                    format!("verdict=unknown reason={reason}")
                } else {
                    format!(
                        "verdict=unknown reason={reason} candidates={}",
                        candidates.join("|")
                    )
                }
            }
        }
    }
}

/// Classifier: the catalogue plus its signature index.
pub struct Classifier {
    atlas: Atlas,
    index: SignatureIndex,
}

impl Classifier {
    pub fn new(atlas: Atlas) -> Result<Classifier, GermError> {
        let index = SignatureIndex::build(&atlas)?;
        Ok(Classifier { atlas, index })
    }

    pub fn atlas(&self) -> &Atlas {
        &self.atlas
    }

    pub fn index(&self) -> &SignatureIndex {
        &self.index
    }

    fn stabilize(&self) -> &Stabilize {
        self.atlas.stabilize()
    }

    /// The signature record of a germ (the aggregation every rule reads).
    pub fn signature_of(&self, germ: &MultiGerm) -> Result<Signature, GermError> {
        germ.signature(self.stabilize())
    }

    /// Classify: signature match first, then the reduction rules, then
    /// Unknown.
    pub fn recognize(&self, germ: &MultiGerm) -> Result<Verdict, GermError> {
        let reduced = germ.stable_reduce(self.stabilize())?;
        let sig = reduced.signature(self.stabilize())?;

        // irreducible germs are decided by their value semigroup: a germ
        // degenerates to the monomial curve of its semigroup, so it is
        // simple exactly when that monomial curve is
        if reduced.branch_count() == 1 {
            let generators = sig.semigroups[0].clone();
            if let Some(label) = unibranch_label(&generators) {
                return Ok(Verdict::Simple { label });
            }
            if let Some((rule, witness)) = self.unibranch_rules(&generators) {
                return Ok(Verdict::NotSimple { rule, witness });
            }
            return Ok(Verdict::Unknown {
                reason: "irreducible germ outside the classified semigroups".into(),
                candidates: Vec::new(),
            });
        }

        let matches = self.index.lookup(&sig);
        match matches.len() {
            1 => Ok(Verdict::Simple { label: matches[0].clone() }),
            0 => match self.nonsimple_rules(&reduced, &sig)? {
                Some((rule, witness)) => Ok(Verdict::NotSimple { rule, witness }),
                None => Ok(Verdict::Unknown {
                    reason: "signature not in the catalogue and no rule applies".into(),
                    candidates: Vec::new(),
                }),
            },
            _ => Ok(Verdict::Unknown {
                reason: "signature shared by several normal forms".into(),
                candidates: matches.to_vec(),
            }),
        }
    }

    /// The valuation-bound rules for irreducible germs, phrased on the
    /// minimal generators of the value semigroup (a missing generator
    /// counts as infinite).
    fn unibranch_rules(&self, gens: &[usize]) -> Option<(String, Option<DeformationFamily>)> {
        let mult = *gens.first()?;
        let v = |i: usize| gens.get(i).copied().unwrap_or(usize::MAX);
        if mult >= 6 {
            return Some(("an irreducible germ of multiplicity at least six".into(), None));
        }
        if gens == [5, 6, 7, 9] {
            return Some((
                "the (5,6,7,9)-germ acquires a planar 2-jet".into(),
                Some(quintic_congruence_family()),
            ));
        }
        if mult == 5 {
            if v(3) > 10 {
                return Some((
                    "multiplicity five with fourth generator beyond ten lands on five generic lines".into(),
                    None,
                ));
            }
            if v(2) >= 8 {
                return Some((
                    "multiplicity five with third generator at eight or beyond lands on the lifted four-line curve".into(),
                    None,
                ));
            }
        }
        if mult == 4 && v(2) >= 8 {
            return Some((
                "multiplicity four with third generator at eight or beyond".into(),
                None,
            ));
        }
        if mult == 3 && v(2) > 9 {
            return Some((
                "multiplicity three with third generator beyond nine acquires a planar 2-jet".into(),
                None,
            ));
        }
        None
    }

    /// Reduction rules for reducible germs, in elimination order.
    pub fn nonsimple_rules(
        &self,
        germ: &MultiGerm,
        sig: &Signature,
    ) -> Result<Option<(String, Option<DeformationFamily>)>, GermError> {
        let params = self.stabilize();
        let r = germ.branch_count();
        let mults: Vec<usize> = germ.branches().iter().map(|b| b.multiplicity()).collect();
        let singular: Vec<usize> = (0..r).filter(|&i| mults[i] >= 2).collect();

        // branch-count bounds
        if r >= 4 && (singular.len() >= 2 || singular.iter().any(|&i| mults[i] >= 4)) {
            return Ok(Some((
                "four or more branches allow at most one singular component, of multiplicity at most three"
                    .into(),
                None,
            )));
        }
        if singular.len() >= 3 {
            return Ok(Some(("at most two components may be singular".into(), None)));
        }

        // two singular components: one must be an ordinary cusp, the other
        // an ordinary cusp, a (2,5)-cusp, or of multiplicity three
        if singular.len() == 2 {
            let sg: Vec<Vec<usize>> = singular
                .iter()
                .map(|&i| germ.branches()[i].semigroup(params).map(|s| s.generators))
                .collect::<Result<_, _>>()?;
            let cusp = |g: &Vec<usize>| g.as_slice() == [2, 3];
            let allowed =
                |g: &Vec<usize>| cusp(g) || g.as_slice() == [2, 5] || g.first() == Some(&3);
            if !(cusp(&sg[0]) && allowed(&sg[1]) || cusp(&sg[1]) && allowed(&sg[0])) {
                return Ok(Some((
                    "two singular components must pair an ordinary cusp with a small partner".into(),
                    None,
                )));
            }
        }

        // tangency configuration rules
        let (tangents, span) = germ.tangent_data();
        let mut direction_classes: Vec<(Vec<crate::rat::Q>, Vec<usize>)> = Vec::new();
        for (i, t) in tangents.iter().enumerate() {
            match direction_classes.iter_mut().find(|(d, _)| d == t) {
                Some((_, members)) => members.push(i),
                None => direction_classes.push((t.clone(), vec![i])),
            }
        }
        let shared: Vec<&Vec<usize>> = direction_classes
            .iter()
            .map(|(_, m)| m)
            .filter(|m| m.len() >= 2)
            .collect();
        if shared.len() >= 2 {
            return Ok(Some((
                "two distinct directions each carry several tangent branches".into(),
                None,
            )));
        }
        if r >= 4 && shared.iter().any(|m| m.len() >= 3) {
            return Ok(Some((
                "among four or more branches only two may share a tangent".into(),
                None,
            )));
        }
        if r == 3
            && mults.iter().all(|&m| m == 1)
            && span == 1
            && sig.planar_two_jet
        {
            return Ok(Some((
                "three tangent smooth branches with planar 2-jet form the confining triple".into(),
                None,
            )));
        }
        // a deeply tangent smooth pair next to a singular branch
        if !singular.is_empty() {
            for m in &shared {
                let pair: Vec<usize> = m
                    .iter()
                    .copied()
                    .filter(|&i| mults[i] == 1)
                    .take(2)
                    .collect();
                if pair.len() == 2 {
                    let contact = germ.restrict(&pair).delta(params)?;
                    if contact >= 3 {
                        return Ok(Some((
                            "a smooth pair of contact order three or more next to a singular branch"
                                .into(),
                            None,
                        )));
                    }
                }
            }
        }
        // too many pairwise transverse lines for their span
        if mults.iter().all(|&m| m == 1) && shared.is_empty() && span >= 2 && r >= span + 2 {
            return Ok(Some((
                "more pairwise transverse lines than generic position allows".into(),
                None,
            )));
        }
        // a triple point with lines in too small a space
        if singular.len() == 1 && mults[singular[0]] == 3 {
            let lines = r - 1;
            if mults.iter().filter(|&&m| m == 1).count() == lines
                && sig.embedding_dim < lines + 2
            {
                return Ok(Some((
                    "a multiplicity-three branch with lines in embedding dimension below lines plus two"
                        .into(),
                    None,
                )));
            }
        }
        Ok(None)
    }
}

fn unibranch_label(gens: &[usize]) -> Option<String> {
    match gens {
        [1] => Some("L(1,1)".into()),
        [2, q] if q % 2 == 1 => Some(format!("A{}", q - 1)),
        [3, 4] => Some("E6".into()),
        [3, 5] => Some("E8".into()),
        [3, 4, 5] => Some("E6(1)".into()),
        [3, 5, 7] => Some("E8(1)".into()),
        [3, 7, 8] => Some("E12(2)".into()),
        [4, 5, 6] => Some("W8".into()),
        [4, 5, 7] => Some("W8*".into()),
        [4, 6, 7] => Some("Z10".into()),
        [4, 5, 6, 7] => Some("(4,5,6,7)".into()),
        [4, 6, 7, 9] => Some("(4,6,7,9)".into()),
        [5, 6, 7, 8] => Some("(5,6,7,8)".into()),
        [5, 6, 7, 8, 9] => Some("(5,6,7,8,9)".into()),
        _ => None,
    }
}
