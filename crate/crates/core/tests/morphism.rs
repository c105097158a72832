use qgw_core::morphism::*;
use qgw_core::presentations::catalog;
use qgw_core::Exec;

#[test]
fn realisations_close_for_small_n() {
    for alg in ["Grs", "Gmk"] {
        let rep = check_morphism(&catalog(alg).unwrap(), &[1, 2, 3], Exec::default()).unwrap();
        for d in &rep.derived {
            if !d.name.ends_with("presentation") {
                println!("{alg} {}: {}", d.name, d.value);
            }
        }
        assert!(rep.passed(), "{alg}: {:#?}", rep.witnesses);
    }
}

#[test]
fn spot_identities_for_every_n() {
    for n in 1..=3 {
        let t = derive_image_relations(&MorphismSpec::from_catalog("Grs", n).unwrap())
            .unwrap()
            .target()
            .unwrap();
        let x = t.element("a*b - p*b*a").unwrap();
        assert!(t.normalize(&x).unwrap().is_zero());
        let t = derive_image_relations(&MorphismSpec::from_catalog("Gmk", n).unwrap())
            .unwrap()
            .target()
            .unwrap();
        let x = t.element("c*d - d*c - hp*c*c").unwrap();
        assert!(t.normalize(&x).unwrap().is_zero());
    }
}

#[test]
fn coalgebra_compatibility() {
    for alg in ["Grs", "Gmk"] {
        for n in 1..=3 {
            let spec = MorphismSpec::from_catalog(alg, n).unwrap();
            assert!(check_coalgebra_compat(&spec).unwrap().passed(), "{alg} N={n}");
        }
    }
}

#[test]
fn dependence_coefficients() {
    let dp = derive_image_relations(&MorphismSpec::from_catalog("Grs", 2).unwrap()).unwrap();
    assert!(check_parameter_dependence(&dp).passed());
    let dp = derive_image_relations(&MorphismSpec::from_catalog("Gmk", 3).unwrap()).unwrap();
    assert!(check_parameter_dependence(&dp).passed());
    println!("{}", dp.render().unwrap());
}

#[test]
fn k_zero_collapses_to_one_parameter_case() {
    assert!(check_k_zero(&catalog("Gmk").unwrap(), &[1, 2, 3]).unwrap().passed());
}
