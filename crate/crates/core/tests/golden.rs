use fockbridge::fock::{creation_matrix, FockBasis, MatrixJson, OperatorMatrix};
use fockbridge::symbolic::{normal_product, parse_operator, parse_words, rewrite_to_normal_form};

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn ccr_rewrite_of_six_generator_word() {
    let word = parse_words("ad[1]*ad[2]*a[3]*ad[3]*a[2]*a[1]", None).unwrap();
    assert_eq!(format!("{}\n", rewrite_to_normal_form(&word)), golden("normal_form_rewrite.txt"));
}

#[test]
fn rewrite_golden_is_canonical_for_any_spelling() {
    // Already normal up to commuting annihilators, so reordering alone is exact.
    let spelled = parse_words("ad[1]*ad[2]*a[2]*a[1] + ad[1]*ad[2]*ad[3]*a[3]*a[2]*a[1]", Some(3)).unwrap();
    assert_eq!(format!("{}\n", normal_product(&spelled)), golden("normal_form_rewrite.txt"));
    let sorted = parse_operator("ad[1]*ad[2]*a[1]*a[2] + ad[1]*ad[2]*ad[3]*a[1]*a[2]*a[3]", Some(3)).unwrap();
    assert_eq!(format!("{sorted}\n"), golden("normal_form_rewrite.txt"));
}

#[test]
fn normal_product_of_mixed_word() {
    let word = parse_words("a[1]*ad[2]*ad[1]", None).unwrap();
    assert_eq!(format!("{}\n", normal_product(&word)), golden("normal_product.txt"));
}

#[test]
fn normal_product_differs_from_rewrite() {
    let word = parse_words("a[1]*ad[2]*ad[1]", None).unwrap();
    assert_ne!(format!("{}\n", rewrite_to_normal_form(&word)), golden("normal_product.txt"));
}

#[test]
fn creation_matrix_json() {
    let expected: MatrixJson = serde_json::from_str(&golden("creation_n1_m3.json")).unwrap();
    let ad = creation_matrix(1, FockBasis::new(1, 3).unwrap()).unwrap();
    assert_eq!(ad.to_json(), expected);
    let back = OperatorMatrix::from_json(&expected).unwrap();
    assert_eq!(back.max_abs_diff(&ad).unwrap(), 0.0);
}
