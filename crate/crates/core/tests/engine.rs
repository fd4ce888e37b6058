mod common;

use common::{soup, DenseLife};
use complexkit::automaton::step_multi_state;
use complexkit::{run, step, translate, Coord, Grid, RuleSet, Topology};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn sparse_engine_matches_dense_reference() {
    for seed in 0..10 {
        let start = soup(seed, 50, 50, 0.35);
        let mut dense = DenseLife::new(&start, 50, 62);
        let mut g = start;
        for generation in 1..=60 {
            g = step(&g, &RuleSet::LIFE).unwrap();
            dense.step();
            assert_eq!(g, dense.to_grid(), "seed {seed} generation {generation}");
        }
    }
}

#[test]
fn step_commutes_with_translation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let rules: Vec<RuleSet> = ["B3/S23", "B36/S23", "B2/S", "B3678/S34678"]
        .iter()
        .map(|r| r.parse().unwrap())
        .collect();
    for trial in 0..200 {
        let g = soup(trial, 12, 12, 0.4);
        let d = Coord::new(rng.gen_range(-1000..1000), rng.gen_range(-1000..1000));
        let r = &rules[trial as usize % rules.len()];
        assert_eq!(
            step(&translate(&g, d), r).unwrap(),
            translate(&step(&g, r).unwrap(), d)
        );
    }
}

#[test]
fn multi_state_path_agrees_on_two_state_rules() {
    for seed in 0..20 {
        let g = soup(seed, 20, 20, 0.4);
        assert_eq!(
            step_multi_state(&g, &RuleSet::LIFE),
            step(&g, &RuleSet::LIFE).unwrap()
        );
    }
}

#[test]
fn hexagonal_soups_evolve_and_stay_symmetric_under_translation() {
    let rule: RuleSet = "B2/S34".parse().unwrap();
    let g = soup(3, 15, 15, 0.3).with_topology(Topology::Hexagonal);
    let h = run(&g, &rule, 20).unwrap();
    assert_eq!(h.len(), 21);
    let d = Coord::new(7, -4);
    assert_eq!(
        run(&translate(&g, d), &rule, 20).unwrap().last(),
        &translate(h.last(), d)
    );
}

proptest! {
    #[test]
    fn empty_stays_empty(states in 2u16..10) {
        let r = RuleSet::LIFE.with_states(states).unwrap();
        prop_assert!(step(&Grid::new(Topology::Square), &r).unwrap().is_empty());
    }

    #[test]
    fn growth_is_bounded_by_one_cell(seed in 0u64..1000) {
        let g = soup(seed, 10, 10, 0.5);
        let next = step(&g, &RuleSet::LIFE).unwrap();
        if let (Some(a), Some(b)) = (g.bounding_box(), next.bounding_box()) {
            prop_assert!(b.min.x >= a.min.x - 1 && b.min.y >= a.min.y - 1);
            prop_assert!(b.max.x <= a.max.x + 1 && b.max.y <= a.max.y + 1);
        }
    }
}
