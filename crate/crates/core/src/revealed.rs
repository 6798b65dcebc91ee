//! Revealed preference relations, the axiom battery, and constructive
//! rationalizability tests for undominated, dominant and rational choice.

use std::fmt;

use serde::Serialize;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::relation::{AlternativeId, BinaryRelation};

/// The five revealed relations of a dataset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RevealedBundle {
    /// `x ≿ᴿ y`: `x` chosen at some menu containing `y`.
    pub r_weak: BinaryRelation,
    /// `x ≻ᴿ y`: `x` chosen and `y` rejected at the same menu.
    pub r_strict: BinaryRelation,
    /// Transitive closure of `r_weak`.
    pub r_weak_hat: BinaryRelation,
    /// `x ≻ᴿ y` and never `y ≿ᴿ x`.
    pub r_star: BinaryRelation,
    /// Transitive closure of `r_star`.
    pub r_star_hat: BinaryRelation,
}

pub fn compute_revealed(d: &Dataset) -> RevealedBundle {
    let n = d.n();
    let mut r_weak = BinaryRelation::empty(n).expect("dataset universe is valid");
    let mut r_strict = r_weak;
    for o in d.observations() {
        let menu = o.menu.members();
        let rejected = menu.difference(o.choice);
        for x in o.choice.iter() {
            for y in menu.iter() {
                r_weak.insert(x.index(), y.index());
            }
            for y in rejected.iter() {
                r_strict.insert(x.index(), y.index());
            }
        }
    }
    let reverse_weak = r_weak.transpose();
    let mut r_star = r_strict;
    for (x, y) in r_strict.pairs() {
        if reverse_weak.holds(x, y) {
            r_star.remove(x, y);
        }
    }
    RevealedBundle {
        r_weak,
        r_strict,
        r_weak_hat: r_weak.transitive_closure(),
        r_star,
        r_star_hat: r_star.transitive_closure(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    BehaviouralDecisiveness,
    GeneralizedCongruence,
    UpwardConsistency,
    Congruence,
    Expansion,
    Desirability,
    PropertyAlpha,
}

impl Axiom {
    pub const ALL: [Axiom; 7] = [
        Axiom::BehaviouralDecisiveness,
        Axiom::GeneralizedCongruence,
        Axiom::UpwardConsistency,
        Axiom::Congruence,
        Axiom::Expansion,
        Axiom::Desirability,
        Axiom::PropertyAlpha,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::BehaviouralDecisiveness => "behavioural-decisiveness",
            Axiom::GeneralizedCongruence => "generalized-congruence",
            Axiom::UpwardConsistency => "upward-consistency",
            Axiom::Congruence => "congruence",
            Axiom::Expansion => "expansion",
            Axiom::Desirability => "desirability",
            Axiom::PropertyAlpha => "property-alpha",
        }
    }
}

impl std::str::FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_ascii_lowercase().replace('_', "-");
        Axiom::ALL.into_iter().find(|a| a.name() == wanted).ok_or_else(|| Error::UnknownAxiom(s.to_string()))
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A counterexample to an axiom. Observation indices are 0-based positions
/// in the dataset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    Observation { index: usize },
    Pair { x: AlternativeId, y: AlternativeId },
    Unchosen { index: usize, x: AlternativeId },
    Contraction { larger: usize, smaller: usize, x: AlternativeId },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Observation { index } => write!(f, "obs{index}"),
            Witness::Pair { x, y } => write!(f, "{x}{y}"),
            Witness::Unchosen { index, x } => write!(f, "obs{index}:{x}"),
            Witness::Contraction { larger, smaller, x } => write!(f, "obs{larger}>obs{smaller}:{x}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub holds: bool,
    pub witnesses: Vec<Witness>,
    /// More violations exist than were recorded.
    pub truncated: bool,
}

pub const DEFAULT_WITNESS_CAP: usize = 100;

struct Collector {
    cap: usize,
    witnesses: Vec<Witness>,
    truncated: bool,
}

impl Collector {
    fn push(&mut self, w: Witness) {
        if self.witnesses.len() < self.cap {
            self.witnesses.push(w);
        } else {
            self.truncated = true;
        }
    }
}

pub fn check_axiom(d: &Dataset, axiom: Axiom) -> AxiomReport {
    check_axiom_capped(d, axiom, DEFAULT_WITNESS_CAP)
}

pub fn check_axiom_named(d: &Dataset, name: &str) -> Result<AxiomReport> {
    Ok(check_axiom(d, name.parse()?))
}

/// Exhaustive check recording at most `cap` witnesses.
pub fn check_axiom_capped(d: &Dataset, axiom: Axiom, cap: usize) -> AxiomReport {
    let rev = compute_revealed(d);
    check_with(d, &rev, axiom, cap)
}

pub fn check_all(d: &Dataset, cap: usize) -> Vec<AxiomReport> {
    let rev = compute_revealed(d);
    Axiom::ALL.iter().map(|&a| check_with(d, &rev, a, cap)).collect()
}

fn alt(i: usize) -> AlternativeId {
    AlternativeId::from_index(i)
}

fn check_with(d: &Dataset, rev: &RevealedBundle, axiom: Axiom, cap: usize) -> AxiomReport {
    let mut c = Collector { cap, witnesses: Vec::new(), truncated: false };
    let obs = d.observations();
    match axiom {
        Axiom::BehaviouralDecisiveness => {
            for (i, o) in obs.iter().enumerate() {
                if o.is_deferral() {
                    c.push(Witness::Observation { index: i });
                }
            }
        }
        Axiom::GeneralizedCongruence => {
            for (x, y) in rev.r_star_hat.pairs() {
                if rev.r_weak.holds(y, x) {
                    c.push(Witness::Pair { x: alt(x), y: alt(y) });
                }
            }
        }
        Axiom::UpwardConsistency => {
            for (i, o) in obs.iter().enumerate() {
                let menu = o.menu.members();
                for x in menu.difference(o.choice).iter() {
                    let dominated = menu.iter().any(|y| rev.r_star_hat.holds(y.index(), x.index()));
                    if !dominated {
                        c.push(Witness::Unchosen { index: i, x });
                    }
                }
            }
        }
        Axiom::Congruence => {
            for (x, y) in rev.r_weak_hat.pairs() {
                if rev.r_strict.holds(y, x) {
                    c.push(Witness::Pair { x: alt(x), y: alt(y) });
                }
            }
        }
        Axiom::Expansion => {
            for (i, o) in obs.iter().enumerate() {
                let menu = o.menu.members();
                for x in menu.difference(o.choice).iter() {
                    if menu.is_subset(rev.r_weak_hat.row(x.index())) {
                        c.push(Witness::Unchosen { index: i, x });
                    }
                }
            }
        }
        Axiom::Desirability => {
            for (i, o) in obs.iter().enumerate() {
                if o.menu.len() == 1 && o.choice != o.menu.members() {
                    c.push(Witness::Observation { index: i });
                }
            }
        }
        Axiom::PropertyAlpha => {
            for (i, big) in obs.iter().enumerate() {
                for (j, small) in obs.iter().enumerate() {
                    let b = small.menu.members();
                    if i == j || !b.is_subset(big.menu.members()) {
                        continue;
                    }
                    for x in big.choice.intersection(b).difference(small.choice).iter() {
                        c.push(Witness::Contraction { larger: i, smaller: j, x });
                    }
                }
            }
        }
    }
    AxiomReport { axiom, holds: c.witnesses.is_empty() && !c.truncated, witnesses: c.witnesses, truncated: c.truncated }
}

/// Result of a constructive rationalizability test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rationalization {
    Rationalized(BinaryRelation),
    /// The failing axiom reports.
    Failed(Vec<AxiomReport>),
}

impl Rationalization {
    pub fn relation(&self) -> Option<&BinaryRelation> {
        match self {
            Rationalization::Rationalized(r) => Some(r),
            Rationalization::Failed(_) => None,
        }
    }
}

fn failing(d: &Dataset, rev: &RevealedBundle, axioms: &[Axiom]) -> Vec<AxiomReport> {
    axioms
        .iter()
        .map(|&a| check_with(d, rev, a, DEFAULT_WITNESS_CAP))
        .filter(|r| !r.holds)
        .collect()
}

/// Sufficient test for undominated choice: when Behavioural Decisiveness,
/// Generalized Congruence and Upward Consistency hold, the chain closure of
/// `≻^{R*}` is a strict partial order whose undominated elements reproduce
/// every observation. Failure of the axioms does not rule the model out.
pub fn rationalize_undominated(d: &Dataset) -> Result<Rationalization> {
    let rev = compute_revealed(d);
    let failed = failing(
        d,
        &rev,
        &[Axiom::BehaviouralDecisiveness, Axiom::GeneralizedCongruence, Axiom::UpwardConsistency],
    );
    if !failed.is_empty() {
        return Ok(Rationalization::Failed(failed));
    }
    let r = rev.r_star_hat;
    let p = r.properties();
    if !(p.asymmetric && p.transitive) {
        return Err(Error::Internal("chain closure of the strict revealed relation is not a strict partial order".into()));
    }
    verify(d, |menu| r.maximal_unchecked(menu), "undominated choice")?;
    Ok(Rationalization::Rationalized(r))
}

/// Exact test for dominant choice: Congruence, Desirability and Expansion
/// hold iff the reflexive closure of `≿^R̂` rationalizes the data by its
/// greatest elements.
pub fn rationalize_dominant(d: &Dataset) -> Result<Rationalization> {
    let rev = compute_revealed(d);
    let failed = failing(d, &rev, &[Axiom::Congruence, Axiom::Desirability, Axiom::Expansion]);
    if !failed.is_empty() {
        return Ok(Rationalization::Failed(failed));
    }
    let r = rev.r_weak_hat.reflexive_closure();
    verify(d, |menu| r.greatest_unchecked(menu), "dominant choice")?;
    Ok(Rationalization::Rationalized(r))
}

/// Rational choice test: under Behavioural Decisiveness and Congruence,
/// returns a weak order extending `≿^R̂` whose greatest elements reproduce the
/// data. Indifference classes of `≿^R̂` are stacked one at a time, always
/// taking the undominated class with the smallest member index next.
pub fn richter_rationalize(d: &Dataset) -> Result<Option<BinaryRelation>> {
    let rev = compute_revealed(d);
    if !failing(d, &rev, &[Axiom::BehaviouralDecisiveness, Axiom::Congruence]).is_empty() {
        return Ok(None);
    }
    let q = rev.r_weak_hat.reflexive_closure();
    let n = d.n();
    let mut level = vec![usize::MAX; n];
    let mut next_level = 0;
    while level.contains(&usize::MAX) {
        let remaining: Vec<usize> = (0..n).filter(|&x| level[x] == usize::MAX).collect();
        // smallest index whose class no remaining alternative strictly beats
        let top = remaining
            .iter()
            .copied()
            .find(|&x| !remaining.iter().any(|&y| q.holds(y, x) && !q.holds(x, y)))
            .ok_or_else(|| Error::Internal("revealed preorder has no undominated class".into()))?;
        for &y in &remaining {
            if q.holds(top, y) && q.holds(y, top) {
                level[y] = next_level;
            }
        }
        next_level += 1;
    }
    let weak = BinaryRelation::from_pairs(n, (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| level[x] <= level[y]))?;
    verify(d, |menu| weak.greatest_unchecked(menu), "rational choice")?;
    Ok(Some(weak))
}

fn verify(d: &Dataset, rule: impl Fn(crate::relation::AltSet) -> crate::relation::AltSet, model: &str) -> Result<()> {
    for (i, o) in d.observations().iter().enumerate() {
        if rule(o.menu.members()) != o.choice {
            return Err(Error::Internal(format!(
                "{model} rationalization does not reproduce observation {i} ({} from {})",
                o.choice,
                o.menu.members()
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Menu, Observation};
    use crate::relation::AltSet;

    fn set(ids: &[usize]) -> AltSet {
        ids.iter().map(|&i| AlternativeId::from_index(i)).collect()
    }

    fn data(n: usize, forced: bool, rows: &[(&[usize], &[usize])]) -> Dataset {
        let obs = rows
            .iter()
            .map(|(m, c)| Observation::new(Menu::new(set(m)).unwrap(), set(c)).unwrap())
            .collect();
        Dataset::new("t", n, forced, obs).unwrap()
    }

    fn cyclic() -> Dataset {
        data(3, true, &[(&[0, 1], &[0]), (&[1, 2], &[1]), (&[0, 2], &[2])])
    }

    #[test]
    fn single_observation_relations() {
        let rev = compute_revealed(&data(2, true, &[(&[0, 1], &[0])]));
        assert_eq!(rev.r_weak, BinaryRelation::from_pairs(2, [(0, 0), (0, 1)]).unwrap());
        assert_eq!(rev.r_star, BinaryRelation::from_pairs(2, [(0, 1)]).unwrap());
    }

    #[test]
    fn star_requires_no_reverse_weak_revelation() {
        let rev = compute_revealed(&data(3, true, &[(&[0, 1], &[0]), (&[0, 1, 2], &[1])]));
        assert!(rev.r_weak.holds(1, 0));
        assert!(rev.r_strict.holds(0, 1));
        assert!(!rev.r_star.holds(0, 1));
    }

    #[test]
    fn cycle_closes_over_all_pairs() {
        let rev = compute_revealed(&cyclic());
        for x in 0..3 {
            for y in 0..3 {
                if x != y {
                    assert!(rev.r_star_hat.holds(x, y), "{x}{y}");
                }
            }
        }
        let report = check_axiom(&cyclic(), Axiom::Congruence);
        assert!(!report.holds);
        assert!(report.witnesses.contains(&Witness::Pair { x: alt(1), y: alt(0) }));
    }

    #[test]
    fn singleton_deferral_breaks_desirability() {
        let d = data(2, false, &[(&[0], &[]), (&[0, 1], &[0])]);
        assert!(!check_axiom(&d, Axiom::Desirability).holds);
        assert!(!check_axiom(&d, Axiom::BehaviouralDecisiveness).holds);
    }

    #[test]
    fn cyclic_data_rationalizes_nothing() {
        match rationalize_undominated(&cyclic()).unwrap() {
            Rationalization::Failed(reports) => {
                assert!(reports.iter().any(|r| r.axiom == Axiom::GeneralizedCongruence))
            }
            other => panic!("{other:?}"),
        }
        assert!(richter_rationalize(&cyclic()).unwrap().is_none());
        assert!(rationalize_dominant(&cyclic()).unwrap().relation().is_none());
    }

    #[test]
    fn deferral_fails_decisiveness_for_undominated() {
        let d = data(2, false, &[(&[0, 1], &[])]);
        match rationalize_undominated(&d).unwrap() {
            Rationalization::Failed(reports) => {
                assert!(reports.iter().any(|r| r.axiom == Axiom::BehaviouralDecisiveness))
            }
            other => panic!("{other:?}"),
        }
        // a single deferral at a pair is dominant choice with incomparability
        let r = rationalize_dominant(&d).unwrap();
        assert_eq!(r.relation(), Some(&BinaryRelation::identity(2).unwrap()));
    }

    #[test]
    fn property_alpha_witness() {
        let d = data(3, true, &[(&[0, 1, 2], &[0, 1]), (&[0, 1], &[1])]);
        let r = check_axiom(&d, Axiom::PropertyAlpha);
        assert_eq!(r.witnesses, vec![Witness::Contraction { larger: 0, smaller: 1, x: alt(0) }]);
    }

    #[test]
    fn witness_cap() {
        let d = cyclic();
        let r = check_axiom_capped(&d, Axiom::GeneralizedCongruence, 2);
        assert_eq!(r.witnesses.len(), 2);
        assert!(r.truncated && !r.holds);
    }

    #[test]
    fn partial_domain_richter_extension() {
        // A over B, C over D; B and C never compared
        let d = data(4, true, &[(&[0, 1], &[0]), (&[2, 3], &[2]), (&[0, 2], &[0, 2])]);
        let w = richter_rationalize(&d).unwrap().expect("consistent");
        assert!(crate::relation::RelationClass::WeakOrder.contains(&w));
        for o in d.observations() {
            assert_eq!(w.greatest_elements(o.menu.members()).unwrap(), o.choice);
        }
    }

    #[test]
    fn unknown_axiom_name() {
        let d = cyclic();
        assert!(matches!(check_axiom_named(&d, "warp"), Err(Error::UnknownAxiom(_))));
        assert!(check_axiom_named(&d, "Property_Alpha").is_ok());
    }
}
