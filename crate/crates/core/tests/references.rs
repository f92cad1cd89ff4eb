use approx::assert_relative_eq;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use nsquad_core::references::{compute_reference, ORACLE_TOLERANCE};
use nsquad_core::{make_integrand, Error, IntegrandId, ReferenceStore};

/// Set `NSQUAD_TEST_SEED` to sample different entries.
fn rng() -> StdRng {
    let seed = std::env::var("NSQUAD_TEST_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    StdRng::seed_from_u64(seed)
}

#[test]
fn sampled_embedded_entries_recompute() {
    let store = ReferenceStore::embedded().unwrap();
    assert_eq!(store.records().len(), 36);
    for rec in store.records().choose_multiple(&mut rng(), 2) {
        let fresh = compute_reference(&make_integrand(rec.id, rec.epsilon).unwrap()).unwrap();
        assert_relative_eq!(fresh.value, rec.value, max_relative = ORACLE_TOLERANCE);
    }
}

#[test]
fn closed_forms_agree_with_the_store() {
    let store = ReferenceStore::embedded().unwrap();
    let mut checked = 0;
    for id in IntegrandId::ALL {
        for eps in id.standard_epsilons() {
            let ti = make_integrand(id, eps).unwrap();
            if let Some(exact) = ti.closed_form() {
                assert_relative_eq!(ti.reference(&store).unwrap(), exact, max_relative = 1e-13);
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn store_text_round_trips() {
    let store = ReferenceStore::embedded().unwrap();
    let again = ReferenceStore::parse(&store.to_text()).unwrap();
    assert_eq!(store, again);
}

#[test]
fn missing_entry_names_the_generator() {
    let store = ReferenceStore::default();
    let err = store.lookup(IntegrandId::F1, 0.1).unwrap_err();
    assert!(matches!(err, Error::MissingReference { .. }));
    assert!(err.to_string().contains("nsquad references --out"), "{err}");
}
