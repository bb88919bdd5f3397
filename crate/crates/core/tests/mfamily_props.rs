use arbora::analysis::{self, NucleusOutcome};
use arbora::mfamily::MFamily;
use arbora::{Decider, Letter, Permutation, Word};
use proptest::prelude::*;

fn word(gens: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..gens, any::<bool>()), 0..=max_len).prop_map(|ls| {
        ls.into_iter()
            .map(|(g, inv)| if inv { Letter::neg(g) } else { Letter::pos(g) })
            .collect()
    })
}

#[test]
fn branch_witnesses_for_all_pairs() {
    for d in 2..=6 {
        let mf = MFamily::new(d).unwrap();
        let dec = Decider::new(mf.presentation());
        for i in 1..d {
            for j in i + 1..=d {
                mf.branch_witness(&dec, i, j).unwrap();
            }
        }
        assert!(mf.branch_witness(&dec, 2, 1).is_err());
        assert!(mf.branch_witness(&dec, 1, d + 1).is_err());
    }
}

#[test]
fn perturbed_witnesses_fail() {
    for d in 2..=5 {
        let mf = MFamily::new(d).unwrap();
        let dec = Decider::new(mf.presentation());
        let id = Permutation::identity(d);
        for i in 1..d {
            for j in i + 1..=d {
                let w = mf.branch_word(i, j).unwrap();
                let mut target = vec![Word::identity(); d];
                target[d - 1] = mf.m(i).commutator(&mf.m(j));
                assert!(mf.has_decomposition(&dec, &w, &target, &id));
                for k in 0..w.len() {
                    let mut letters = w.letters().to_vec();
                    letters[k] = letters[k].invert();
                    let bad: Word = letters.into_iter().collect();
                    assert!(
                        !mf.has_decomposition(&dec, &bad, &target, &id),
                        "d={d} ({i},{j}) letter {k}"
                    );
                }
                // the right element in the wrong coordinate
                target.rotate_left(1);
                assert!(!mf.has_decomposition(&dec, &w, &target, &id));
            }
        }
    }
}

#[test]
fn intermediate_vectors() {
    for d in 3..=6 {
        let mf = MFamily::new(d).unwrap();
        let dec = Decider::new(mf.presentation());
        for i in 1..d {
            mf.intermediate_commutator_vector(&dec, i).unwrap();
        }
        assert!(mf.intermediate_commutator_vector(&dec, d).is_err());
    }
    let mf = MFamily::new(2).unwrap();
    assert!(mf
        .intermediate_commutator_vector(&Decider::new(mf.presentation()), 1)
        .is_err());
}

#[test]
fn d2_checks_reject_other_degrees() {
    let mf = MFamily::new(3).unwrap();
    let w = mf.presentation().parse("[m1,m2]").unwrap();
    assert!(mf.derived_membership_d2(&w).is_err());
    assert!(mf.rho_check_d2(&w).is_err());
}

#[test]
fn nucleus_search_never_closes() {
    for d in 2..=4 {
        let mf = MFamily::new(d).unwrap();
        let dec = Decider::new(mf.presentation());
        for size in [50, 100, 200] {
            match analysis::nucleus_search(&dec, size, 8) {
                NucleusOutcome::BoundExceeded { size: reached, .. } => assert!(reached > size),
                other => panic!("M({d}) at {size}: {other:?}"),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn derived_membership_is_conjugation_invariant(w in word(2, 10), c in word(2, 10)) {
        let mf = MFamily::new(2).unwrap();
        prop_assert_eq!(mf.derived_membership_d2(&w).unwrap(), mf.derived_membership_d2(&w.conjugate(&c)).unwrap());
    }

    #[test]
    fn commutators_lie_in_the_derived_subgroup(a in word(2, 6), b in word(2, 6)) {
        let mf = MFamily::new(2).unwrap();
        let c = a.commutator(&b);
        prop_assert!(mf.derived_membership_d2(&c).unwrap());
        prop_assert!(mf.rho_check_d2(&c).unwrap());
    }

    #[test]
    fn generators_of_the_family_act_transitively_on_level_one(d in 2usize..=6) {
        let mf = MFamily::new(d).unwrap();
        prop_assert!(analysis::level_transitive(mf.presentation(), 1).unwrap());
    }
}
