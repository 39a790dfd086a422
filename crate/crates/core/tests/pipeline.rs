use ggs_core::agcode::build_code;
use ggs_core::aut::{code_aut_order, orbits, permutation_preserves_code, q_group, sigma_generator};
use ggs_core::curve::Curve;
use ggs_core::derived::verify_css_nesting;
use ggs_core::semigroup::Semigroup;

#[test]
fn generators_preserve_codes_meeting_the_hypotheses() {
    let curve = Curve::new(2, 5).unwrap();
    let pts = curve.enumerate_points().unwrap();
    let sg = Semigroup::generate(&[8, 22, 33], 200).unwrap();
    let mut gens = q_group(&curve).unwrap();
    gens.push(sigma_generator(&curve).unwrap());
    let sampled: Vec<u64> = (33..=120).filter(|&l| code_aut_order(l, 2, 5).is_ok()).collect();
    assert!(sampled.contains(&41) && sampled.contains(&120));
    for &l in sampled.iter().step_by(5) {
        assert!(sg.contains(l) && sg.contains(l - 1));
        let code = build_code(&curve, &pts, l).unwrap();
        for g in &gens {
            assert!(permutation_preserves_code(&curve, &pts, g, &code), "l = {l}");
        }
    }
}

#[test]
fn orbits_for_q3() {
    let curve = Curve::new(3, 3).unwrap();
    let pts = curve.enumerate_points().unwrap();
    let mut gens = q_group(&curve).unwrap();
    assert_eq!(gens.len(), 27);
    gens.push(sigma_generator(&curve).unwrap());
    let r = orbits(&curve, &pts, &gens).unwrap();
    // q^3 (q - 1)(q^n + 1) = 27 * 2 * 28
    assert_eq!(r.group_order, 1512);
    assert_eq!(r.orbit_sizes, vec![1, 27, 1512, 1512, 1512, 1512]);
}

#[test]
fn css_nesting_along_a_chain() {
    let curve = Curve::new(2, 5).unwrap();
    let pts = curve.enumerate_points().unwrap();
    let sg = Semigroup::generate(&[8, 22, 33], 200).unwrap();
    let chain = sg.elements_upto(120);
    for w in chain.windows(2).step_by(7) {
        assert!(verify_css_nesting(&curve, &pts, w[0], w[1]).unwrap());
    }
}
