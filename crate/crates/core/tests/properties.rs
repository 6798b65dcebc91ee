mod common;

use proptest::prelude::*;
use revpref::dataset::{check_symmetry, generate_menu_collection, Dataset, Menu, MenuCollection, Observation, Symmetry};
use revpref::dot::{parse_dot, to_dot};
use revpref::exec::Execution;
use revpref::metrics::{adjusted_choice_size_frequencies, choice_size_counts};
use revpref::models::{best_model, distance_score, distance_score_with, generate_dataset, predict, ModelInstance, ModelKind};
use revpref::relation::{catalog, AltSet, BinaryRelation, RelationClass};
use revpref::revealed::{check_axiom, compute_revealed, Axiom};

fn relation(n: usize, bits: u64) -> BinaryRelation {
    let pairs = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| bits >> (x * n + y) & 1 == 1);
    BinaryRelation::from_pairs(n, pairs).unwrap()
}

fn arb_relation() -> impl Strategy<Value = BinaryRelation> {
    (2usize..=6, any::<u64>()).prop_map(|(n, bits)| relation(n, bits))
}

fn arb_dataset(n: usize, forced: bool) -> impl Strategy<Value = Dataset> {
    let all = (1u8..(1 << n)).collect::<Vec<_>>();
    proptest::collection::vec((proptest::sample::select(all), any::<u8>()), 1..12).prop_map(move |rows| {
        let mut seen = std::collections::HashSet::new();
        let obs = rows
            .into_iter()
            .filter(|(m, _)| seen.insert(*m))
            .map(|(m, c)| {
                let menu = AltSet::from_bits(m);
                let mut choice = AltSet::from_bits(c & m);
                if forced && choice.is_empty() {
                    choice = menu;
                }
                Observation::new(Menu::new(menu).unwrap(), choice).unwrap()
            })
            .collect();
        Dataset::new("p", n, forced, obs).unwrap()
    })
}

fn arb_instance(n: usize) -> impl Strategy<Value = ModelInstance> {
    (proptest::sample::select(ModelKind::ALL.to_vec()), any::<proptest::sample::Index>()).prop_map(move |(kind, i)| {
        let rels = kind.admissible(n).unwrap();
        ModelInstance::new(kind, rels[i.index(rels.len())]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closure_is_idempotent_and_monotone(r in arb_relation(), extra in any::<u64>()) {
        let c = r.transitive_closure();
        prop_assert_eq!(c.transitive_closure(), c);
        prop_assert!(r.is_subset(&c));
        let s = r.union(&relation(r.n(), extra));
        prop_assert!(c.is_subset(&s.transitive_closure()));
    }

    #[test]
    fn greatest_within_maximal(r in arb_relation(), menu in 1u8..=255) {
        let w = r.reflexive_closure().transitive_closure();
        let menu = AltSet::from_bits(menu & AltSet::full(w.n()).bits());
        prop_assume!(!menu.is_empty());
        let greatest = w.greatest_elements(menu).unwrap();
        let maximal = w.strict_part().maximal_elements(menu).unwrap();
        prop_assert!(greatest.is_subset(maximal));
        if w.properties().complete {
            prop_assert_eq!(greatest, maximal);
        }
    }

    #[test]
    fn maximal_elements_match_double_loop(bits in any::<u64>(), menu in 1u8..32) {
        // upper-triangular relations are acyclic
        let n = 5;
        let r = BinaryRelation::from_pairs(n, (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).filter(|&(x, y)| bits >> (x * n + y) & 1 == 1)).unwrap().transitive_closure();
        let menu = AltSet::from_bits(menu);
        let got = r.maximal_elements(menu).unwrap();
        prop_assert!(!got.is_empty());
        let want: AltSet = menu.iter().filter(|x| !menu.iter().any(|y| r.holds(y.index(), x.index()) && !r.holds(x.index(), y.index()))).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn predictions_satisfy_contraction(inst in arb_instance(4), big in 1u8..16, small in 1u8..16) {
        let big = AltSet::from_bits(big);
        let small = AltSet::from_bits(small & big.bits());
        prop_assume!(!small.is_empty());
        let chosen = predict(&inst, big).unwrap();
        let sub = predict(&inst, small).unwrap();
        prop_assert!(chosen.intersection(small).is_subset(sub));
    }

    #[test]
    fn generated_data_satisfy_model_axioms(inst in arb_instance(4)) {
        let mc = generate_menu_collection(4, &[1, 2, 3, 4]).unwrap();
        let d = generate_dataset(&inst, &mc).unwrap();
        let axioms: &[Axiom] = match inst.kind() {
            ModelKind::RationalChoice => &[Axiom::BehaviouralDecisiveness, Axiom::Congruence, Axiom::Expansion, Axiom::Desirability, Axiom::PropertyAlpha],
            ModelKind::DominantChoice => &[Axiom::Congruence, Axiom::Expansion, Axiom::Desirability],
            ModelKind::UndominatedChoice => &[Axiom::BehaviouralDecisiveness, Axiom::PropertyAlpha],
        };
        for &a in axioms {
            prop_assert!(check_axiom(&d, a).holds, "{} fails", a);
        }
    }

    #[test]
    fn revealed_containments(d in arb_dataset(5, false)) {
        let rev = compute_revealed(&d);
        prop_assert!(rev.r_star.is_subset(&rev.r_strict));
        prop_assert!(rev.r_strict.is_subset(&rev.r_weak));
        prop_assert!(rev.r_weak.is_subset(&rev.r_weak_hat));
        if check_axiom(&d, Axiom::GeneralizedCongruence).holds {
            let p = rev.r_star_hat.properties();
            prop_assert!(p.asymmetric && p.transitive);
        }
    }

    #[test]
    fn dropping_observations_never_raises_scores(d in arb_dataset(4, false), drop in any::<proptest::sample::Index>()) {
        prop_assume!(d.len() > 1);
        let mut obs = d.observations().to_vec();
        obs.remove(drop.index(obs.len()));
        let smaller = Dataset::new("s", 4, false, obs).unwrap();
        for kind in ModelKind::ALL {
            prop_assert!(distance_score(&smaller, kind).unwrap().score <= distance_score(&d, kind).unwrap().score);
        }
    }

    #[test]
    fn best_model_is_no_worse_than_each(d in arb_dataset(4, false)) {
        let best = best_model(&d, &ModelKind::ALL).unwrap();
        for kind in ModelKind::ALL {
            prop_assert!(best.result.score <= distance_score(&d, kind).unwrap().score);
        }
    }

    #[test]
    fn execution_mode_does_not_change_results(d in arb_dataset(5, false)) {
        for kind in ModelKind::ALL {
            prop_assert_eq!(
                distance_score_with(&d, kind, Execution::Sequential).unwrap(),
                distance_score_with(&d, kind, Execution::Parallel).unwrap()
            );
        }
    }

    #[test]
    fn dot_round_trips(bits in any::<u64>(), n in 2usize..=6, weak in any::<bool>()) {
        let strict = BinaryRelation::from_pairs(n, (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).filter(|&(x, y)| bits >> (x * n + y) & 1 == 1)).unwrap().transitive_closure();
        let r = if weak { relation(n, bits).reflexive_closure().transitive_closure() } else { strict };
        let dot = to_dot(&r, "g").unwrap();
        prop_assert_eq!(to_dot(&r, "g").unwrap(), dot.clone());
        prop_assert_eq!(parse_dot(&dot).unwrap().to_preorder().unwrap(), r.reflexive_closure());
    }

    #[test]
    fn relation_text_round_trips(r in arb_relation()) {
        prop_assert_eq!(BinaryRelation::from_text(&r.to_text()).unwrap(), r);
    }

    #[test]
    fn adjusted_frequencies_ignore_subject_order(seed in any::<u64>()) {
        let mc = generate_menu_collection(4, &[2, 3, 4]).unwrap();
        let cfg = revpref::simulation::SimConfig::new(mc.clone(), 6, false, seed).unwrap();
        let mut data = revpref::simulation::simulate_uniform(&cfg, Execution::Sequential);
        let a = adjusted_choice_size_frequencies(&data, &mc).unwrap();
        data.reverse();
        prop_assert_eq!(adjusted_choice_size_frequencies(&data, &mc).unwrap(), a);
        prop_assert_eq!(choice_size_counts(&data).values().sum::<u64>() as usize, data.len() * mc.len());
    }
}

#[test]
fn menu_collections_are_symmetric_with_binomial_size() {
    for n in 1..=7usize {
        for sizes in [vec![1], vec![2], vec![2, 3], vec![1, n], (1..=n).collect::<Vec<_>>()] {
            let mut sizes: Vec<usize> = sizes.into_iter().filter(|&s| s <= n).collect();
            sizes.dedup();
            if sizes.is_empty() {
                continue;
            }
            let mc = generate_menu_collection(n, &sizes).unwrap();
            let binom = |k: usize| (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
            assert_eq!(mc.len(), sizes.iter().map(|&k| binom(k)).sum::<usize>());
            assert_eq!(check_symmetry(&mc), Symmetry::Strong);
        }
    }
    let lopsided = MenuCollection::new(3, vec![Menu::new(AltSet::from_bits(0b011)).unwrap()]).unwrap();
    assert_eq!(check_symmetry(&lopsided), Symmetry::Asymmetric);
}

#[test]
fn emitted_relations_have_their_class_properties() {
    for n in 1..=4 {
        for r in catalog(RelationClass::WeakOrder, n).unwrap() {
            let p = r.properties();
            assert!(p.reflexive && p.transitive && p.complete);
        }
        for r in catalog(RelationClass::StrictPartialOrder, n).unwrap() {
            let p = r.properties();
            assert!(p.asymmetric && p.transitive);
        }
        for r in catalog(RelationClass::Preorder, n).unwrap() {
            let p = r.properties();
            assert!(p.reflexive && p.transitive);
        }
    }
}

#[test]
fn enumeration_matches_matrix_filter() {
    for n in 1..=4 {
        for kind in ModelKind::ALL {
            let mut oracle: Vec<BinaryRelation> = common::oracle_class(kind, n).into_iter().map(|m| common::to_relation(m, n)).collect();
            oracle.sort();
            assert_eq!(kind.admissible(n).unwrap(), oracle.as_slice(), "{kind} n={n}");
        }
    }
}
