mod common;

use common::props;

#[test]
fn ring_laws() {
    props::ring_laws().unwrap();
}

#[test]
fn dense_product_matches_sparse() {
    props::dense_product_matches_sparse().unwrap();
}

#[test]
fn inverse_is_inverse() {
    props::inverse_is_inverse().unwrap();
}

#[test]
fn rational_power_cubed() {
    props::rational_power_cubed().unwrap();
}

#[test]
fn hadamard_bilinear_and_associative() {
    props::hadamard_bilinear_and_associative().unwrap();
}

#[test]
fn compose_matches_brute_force() {
    props::compose_matches_brute_force().unwrap();
}

#[test]
fn expand_matches_binomial_reference() {
    props::expand_matches_binomial_reference().unwrap();
}

#[test]
fn frobenius_mod_p() {
    props::frobenius_mod_p().unwrap();
}

#[test]
fn dl_double_exact_division() {
    props::dl_double_exact_division().unwrap();
}
