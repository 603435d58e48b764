mod common;

use common::{brute_force_shadows, candidate_grid};
use dynlab_core::builders::{cantor, circle_grid, interval_grid, random_system, shift_to_limit};
use dynlab_core::decide::{decide_shadowing, shadowability_of, Answer, Budget, Shadowability};
use dynlab_core::orbit::validate_chain;
use dynlab_core::{q, SystemMap};

fn assert_agrees(f: &SystemMap, tag: &str) {
    for eps in candidate_grid(f) {
        for delta in candidate_grid(f) {
            let verdict = decide_shadowing(f, &eps, &delta, Budget::default()).unwrap();
            let expected = brute_force_shadows(f, &eps, &delta);
            assert_eq!(verdict.is_yes(), expected, "{tag}: ε={eps} δ={delta}");
            if let Answer::Fails { witness, failing_index } = &verdict.answer {
                assert!(validate_chain(f, &witness.unroll(failing_index + 1), &delta).is_ok());
                assert_eq!(
                    shadowability_of(f, witness, &eps).unwrap(),
                    Shadowability::Unshadowable { at: *failing_index },
                    "{tag}: ε={eps} δ={delta}"
                );
            }
        }
    }
}

#[test]
fn random_tiny_systems_match_the_oracle() {
    for seed in 0..120u64 {
        let n = 1 + (seed % 4) as usize;
        let f = random_system(n, seed, seed % 3 == 0);
        assert_agrees(&f, &format!("seed {seed}"));
    }
}

#[test]
fn named_systems_match_the_oracle() {
    assert_agrees(&cantor(1).unwrap(), "E_1 t");
    assert_agrees(&SystemMap::identity(cantor(1).unwrap().space_arc().clone()), "E_1 id");
    assert_agrees(&circle_grid(4, &q("1/4")).unwrap(), "rot");
    assert_agrees(&interval_grid(4).unwrap(), "I4");
    assert_agrees(&shift_to_limit(2).unwrap(), "shift 2");
}

#[test]
fn cantor_two_examples_match_the_oracle() {
    let t = cantor(2).unwrap();
    let id = SystemMap::identity(t.space_arc().clone());
    assert!(brute_force_shadows(&id, &q("1/2"), &q("1/3")));
    assert!(!brute_force_shadows(&id, &q("1/2"), &q("4/9")));
    assert!(!brute_force_shadows(&interval_grid(4).unwrap(), &q("1/2"), &q("1/2")));
    assert!(!brute_force_shadows(&t, &q("1/2"), &q("2/9")));
}
