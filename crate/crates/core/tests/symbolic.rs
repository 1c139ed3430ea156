use defectlab::fixtures::*;
use defectlab::lattice::{Rect, Site};
use defectlab::project::fixture_project;
use defectlab::symbolic::{defect_field, wang_representation, FieldValue, SearchBudget};

#[test]
fn violation_on_the_window_edge_is_exact() {
    // Two vertical-arrow ice tiles side by side never match; put them on the
    // left edge of an otherwise admissible window.
    let cfg = random_periodic(&ice(), &[4, 4], 3).unwrap().crop(&Rect::new(vec![0, 0], vec![6, 6])).unwrap();
    let field = defect_field(&cfg, &ice()).unwrap();
    assert!(field.defect_sites().is_empty());
    let mut broken = cfg.clone();
    let (a, b) = (0..6u16)
        .flat_map(|a| (0..6u16).map(move |b| (a, b)))
        .find(|&(a, b)| !ice_tiles().matches(0, a, b))
        .unwrap();
    broken.set(&Site::from([0, 3]), a).unwrap();
    broken.set(&Site::from([1, 3]), b).unwrap();
    let field = defect_field(&broken, &ice()).unwrap();
    assert_eq!(field.get(&Site::from([0, 3])), Some(FieldValue::Exact(0)));
    assert_eq!(field.get(&Site::from([1, 3])), Some(FieldValue::Exact(0)));
}

#[test]
fn golden_mean_defect_field() {
    let p = fixture_project("golden-mean").unwrap();
    let cfg = p.configuration("golden-mean-defect").unwrap();
    let field = defect_field(cfg, &golden_mean()).unwrap();
    let sites: Vec<i64> = field.defect_sites().iter().map(|z| z.0[0]).collect();
    // Only the two sites of the pair `11` see it in their radius-1 window.
    assert_eq!(sites, vec![0, 1]);
    assert_eq!(field.get(&Site::from([5])), Some(FieldValue::Exact(4)));
    assert_eq!(field.get(&Site::from([20])), Some(FieldValue::AtLeast(0)));
}

#[test]
fn oversized_representation_is_a_budget_error() {
    let err = wang_representation(&paths(), 1, SearchBudget::default()).unwrap_err();
    assert_eq!(err.kind(), "budget-exceeded");
}
