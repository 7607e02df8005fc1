mod common;

use chambers::coxeter::CoxeterSystem;

#[test]
fn finite_systems_agree_with_the_matrix_oracle() {
    for sys in [CoxeterSystem::a2(), CoxeterSystem::b2()] {
        check(&sys);
    }
}

#[test]
fn affine_systems_agree_with_the_matrix_oracle() {
    for sys in [CoxeterSystem::affine_a1(), CoxeterSystem::affine_a2()] {
        check(&sys);
    }
}

#[test]
fn hyperbolic_334_agrees_with_the_matrix_oracle() {
    check(&CoxeterSystem::triangle(3, 3, 4));
}

fn check(sys: &CoxeterSystem) {
    let n = common::check_word_problem(sys, 8).unwrap();
    assert_eq!(n, (0..=8).map(|k| sys.rank().pow(k)).sum::<usize>());
}

#[test]
fn oracle_sees_group_orders() {
    use std::collections::HashSet;
    let sys = CoxeterSystem::b2();
    let a2 = CoxeterSystem::a2();
    for (s, order) in [(sys, 8), (a2, 6)] {
        let elems: HashSet<Vec<u8>> = common::words(2, 8)
            .iter()
            .map(|w| s.normal_form(w).unwrap().word().to_vec())
            .collect();
        assert_eq!(elems.len(), order);
    }
}
