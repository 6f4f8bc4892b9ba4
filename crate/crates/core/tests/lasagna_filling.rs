use std::collections::BTreeMap;

use floer_lasagna::graded::MultiGrading;
use floer_lasagna::grid::parse_grid;
use floer_lasagna::lasagna::*;
use floer_lasagna::obstruction::CobordismGradingData;
use floer_lasagna::tqft::ReducedTensor;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn data(name: &str) -> String {
    std::fs::read_to_string(format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn example_files_validate_and_grade() {
    let id = LasagnaFilling::from_json(&data("fillings/identity.json")).unwrap();
    assert!(id.validate().is_ok());
    // B on the second component (M = -1) plus two w strips.
    assert_eq!(id.gradings().unwrap(), (1, 0, vec![]));
    let model = LasagnaFilling::from_json(&data("fillings/model.json")).unwrap();
    assert!(model.validate().is_ok());
    assert_eq!(model.gradings().unwrap(), (-1 + 3, 0, vec![1]));
    let stab = LasagnaFilling::from_json(&data("fillings/stabilized.json")).unwrap();
    assert!(stab.validate().is_ok());
    assert!(b4_evaluate(&stab).unwrap().element.is_zero());
}

#[test]
fn malformed_json_is_a_schema_error() {
    assert!(matches!(LasagnaFilling::from_json("{\"inputs\": 3}"), Err(LasagnaError::Schema(_))));
}

#[test]
fn b4_identity_is_a_graded_bijection_onto_unlink_homology() {
    let grids = ["n 2\nO 1 0\nX 0 1\n", "n 4\nO 1 0 3 2\nX 0 1 2 3\n", "n 6\nO 1 0 3 2 5 4\nX 0 1 2 3 4 5\n"];
    for (n, text) in (1..=3u32).zip(grids) {
        let comps: Vec<u32> = (0..n).collect();
        let pairs: Vec<(u32, usize)> = comps.iter().map(|&c| (c, 1)).collect();
        let basis = ReducedTensor::basis(&comps, 0, &[]).unwrap();
        let mut images = std::collections::HashSet::new();
        let mut dims: BTreeMap<MultiGrading, usize> = BTreeMap::new();
        for t in &basis {
            let v = b4_evaluate(&identity_filling(&t.clone().into(), &pairs, 0)).unwrap();
            assert_eq!(v.element.len(), 1);
            assert!(images.insert(v.element.clone()));
            *dims.entry(MultiGrading::new(v.grading.0, vec![v.grading.1])).or_default() += 1;
        }
        let hfl = parse_grid(text).unwrap().extract_hfl().unwrap();
        let grid_dims = hfl.collapse_alexander(&[comps.iter().map(|&c| c as usize).collect()]).unwrap().graded_dims();
        assert_eq!(dims, grid_dims, "{n} components");
    }
}

#[test]
fn audit_is_reproducible_per_seed() {
    for seed in [0, 1, 2, seed_from_env()] {
        let a = randomized_audit(seed, 200);
        assert!(a.all_passed(), "seed {seed}: {:?}", a.failures);
        assert_eq!(a, randomized_audit(seed, 200));
    }
}

#[test]
fn a_wrong_shift_formula_would_be_caught() {
    // Using the incoming basepoint count instead of the outgoing one drifts.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = random_filling(&mut rng);
    let w2 = f.surface.w_count(Side::Input(0)) as i64;
    let mv = CobordismGradingData::product(2, 1, w2 + 1, w2);
    let g = expose_collar(&f, 0, &mv).unwrap();
    let naive = f.maslov().unwrap() + (mv.chi_w - mv.w1_count) - (mv.chi_w - mv.w2_count);
    assert_ne!(naive, g.maslov().unwrap());
    assert_eq!(f.maslov().unwrap(), g.maslov().unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn moves_preserve_gradings_and_class(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_filling(&mut rng);
        prop_assert!(f.validate().is_ok());
        let w2 = f.surface.w_count(Side::Input(0)) as i64;
        let mv = random_move(&mut rng, w2);
        let a = equivalence_move_audit(&f, 0, &mv).unwrap();
        prop_assert_eq!(&a.before, &a.after);
        prop_assert_eq!(a.after.2, f.class.clone());
    }

    #[test]
    fn json_round_trip_of_random_fillings(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_filling(&mut rng);
        prop_assert_eq!(LasagnaFilling::from_json(&f.to_json()).unwrap(), f);
    }
}
