//! Acceptance criteria. Each criterion prints one PASS or FAIL line; the
//! test fails if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qgw_core::data::DataDir;
use qgw_core::hopf::{derive_relations, rtt_residuals, span_equal, Hopf};
use qgw_core::morphism::{check_exponential_correspondence, check_k_zero, check_morphism};
use qgw_core::mutations::{check_mutations, load_mutations};
use qgw_core::presentations::catalog;
use qgw_core::rmatrix::*;
use qgw_core::scalar::Bindings;
use qgw_core::{CheckReport, Exec, Letter, NCPoly, ParamName, Scalar, Strategy, Word};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn require(rep: &CheckReport) -> Result<(), String> {
    match rep.witnesses.first() {
        None if rep.passed() => Ok(()),
        Some(w) => Err(format!(
            "{} [{}] {}: {}",
            rep.check, rep.subject, w.location, w.residual
        )),
        None => Err(format!("{} [{}] failed", rep.check, rep.subject)),
    }
}

fn derived<'a>(rep: &'a CheckReport, name: &str) -> Option<&'a str> {
    rep.derived.iter().find(|d| d.name == name).map(|d| d.value.as_str())
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    if t <= limit {
        Ok(())
    } else {
        Err(format!("{what} took {t:?}, limit {limit:?}"))
    }
}

fn golden_reorder() -> Outcome {
    let start = Instant::now();
    let rep = reorder_consistency(&DataDir::embedded()).map_err(|e| e.to_string())?;
    require(&rep)?;
    within(start, Duration::from_secs(1), "reorder")?;
    Ok(format!("{} entries equal", derived(&rep, "entries").unwrap_or("?")))
}

fn qybe() -> Outcome {
    for name in ["R_Grs", "R_Gmk"] {
        let start = Instant::now();
        let r = rmatrix(name).map_err(|e| e.to_string())?;
        require(&qybe_check_entry(&r, Exec::default()).map_err(|e| e.to_string())?)?;
        within(start, Duration::from_secs(30), name)?;
    }
    Ok("R_Grs and R_Gmk satisfy R12 R13 R23 = R23 R13 R12".into())
}

fn triangularity() -> Outcome {
    let gmk = rmatrix("R_Gmk").map_err(|e| e.to_string())?;
    require(&triangularity_check_entry(&gmk, Exec::default()).map_err(|e| e.to_string())?)?;
    let mut at = Bindings::new();
    at.insert(ParamName::of("r"), Scalar::from_int(2));
    at.insert(ParamName::of("s"), Scalar::from_int(3));
    let grs = rmatrix("R_Grs")
        .and_then(|r| r.instantiate(&at))
        .map_err(|e| e.to_string())?;
    let rep = triangularity_check_entry(&grs, Exec::default()).map_err(|e| e.to_string())?;
    let w = rep.witnesses.first().ok_or("R_Grs at r=2, s=3 came out triangular")?;
    Ok(format!(
        "R_Gmk triangular; R_Grs(2, 3) witness {} = {}",
        w.location, w.residual
    ))
}

fn contraction() -> Outcome {
    let data = DataDir::embedded();
    let e = |x: qgw_core::Error| x.to_string();
    let r_gmk = rmatrix("R_Gmk").map_err(e)?;
    let r_h2 = rmatrix("R_h2").map_err(e)?;
    let plan = ContractionPlan::paper9(&data).map_err(e)?;
    require(&contract_check(&plan, &r_gmk, Exec::default()).map_err(e)?)?;
    let mut h = Bindings::new();
    h.insert(ParamName::of("h"), Scalar::var("m"));
    let plan4 = ContractionPlan::gl2(&data).map_err(e)?;
    require(&contract_check(&plan4, &r_h2.instantiate(&h).map_err(e)?, Exec::default()).map_err(e)?)?;
    require(&embedded_block_check(&r_gmk, &r_h2, &h).map_err(e)?)?;
    Ok("81 entries of the limit equal R_Gmk; 4x4 plan gives R_h2; block embeds with h = m".into())
}

fn rtt() -> Outcome {
    let e = |x: qgw_core::Error| x.to_string();
    for (alg, r) in [("Grs", "R_Grs"), ("Gmk", "R_Gmk")] {
        let h = Hopf::new(&catalog(alg).map_err(e)?).map_err(e)?;
        let rm = rmatrix(r).map_err(e)?.lex();
        let rep = rtt_residuals(alg, &rm, h.tmatrix(), h.presentation(), Exec::default()).map_err(e)?;
        require(&rep)?;
        if derived(&rep, "entries") != Some("81") {
            return Err(format!("{alg}: expected 81 residual entries"));
        }
        let d = derive_relations(&rm, h.tmatrix(), Exec::default()).map_err(e)?;
        let cat: Vec<NCPoly> = h
            .presentation()
            .core_relations()
            .iter()
            .map(|r| r.difference())
            .collect();
        let span = span_equal(alg, 5, &d, &cat).map_err(e)?;
        require(&span)?;
        if derived(&span, "word space dimension") != Some("25") {
            return Err(format!("{alg}: word space is not 25-dimensional"));
        }
    }
    Ok("81 residuals vanish for both pairs; derived span equals catalog span".into())
}

fn rewriting() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for alg in ["Grs", "Gmk"] {
        let p = catalog(alg).map_err(|e| e.to_string())?;
        let sys = p.rewrite_system();
        require(&sys.check_termination_order(alg))?;
        require(&sys.check_local_confluence(alg))?;
        let al = p.alphabet();
        for _ in 0..1000 {
            let len = rng.gen_range(0..=4);
            let letters: Vec<Letter> = (0..len)
                .map(|_| Letter::new(rng.gen_range(0..al.len() as u8), 1))
                .collect();
            let x = NCPoly::monomial(al, Word::from_letters(&letters), Scalar::one());
            let l = sys
                .normalize_with(&x, Strategy::LeftmostInnermost, None)
                .map_err(|e| e.to_string())?;
            let r = sys
                .normalize_with(&x, Strategy::RightmostInnermost, None)
                .map_err(|e| e.to_string())?;
            if l != r {
                return Err(format!("{alg}: strategies disagree on {}", x.render()));
            }
            if sys.normalize(&l).map_err(|e| e.to_string())? != l {
                return Err(format!("{alg}: normalize not idempotent on {}", x.render()));
            }
        }
    }
    Ok("both catalogs terminate and are locally confluent; 2000 random words agree".into())
}

fn hopf() -> Outcome {
    let e = |x: qgw_core::Error| x.to_string();
    for alg in ["Grs", "Gmk"] {
        let h = Hopf::new(&catalog(alg).map_err(e)?).map_err(e)?;
        require(&h.check_bialgebra(Exec::default()).map_err(e)?)?;
        require(&h.check_antipode().map_err(e)?)?;
        require(&h.check_central().map_err(e)?)?;
        let g = h.check_grouplike().map_err(e)?;
        require(&g)?;
        if alg == "Grs" && derived(&g, "delta*b") != Some("(s)*b*delta") {
            return Err(format!("missing delta*b = s*b*delta, got {:?}", derived(&g, "delta*b")));
        }
    }
    Ok("bialgebra, adjugate, centrality and group-like checks hold; delta*b = s*b*delta".into())
}

fn morphisms() -> Outcome {
    let e = |x: qgw_core::Error| x.to_string();
    let ns = [1, 2, 3];
    for (alg, spot) in [("Grs", "a*b - p*b*a = 0"), ("Gmk", "c*d - d*c - hp*c*c = 0")] {
        let rep = check_morphism(&catalog(alg).map_err(e)?, &ns, Exec::default()).map_err(e)?;
        require(&rep)?;
        for n in ns {
            if derived(&rep, &format!("N={n}: identity")) != Some(spot) {
                return Err(format!("{alg} N={n}: spot identity not recorded"));
            }
        }
    }
    require(&check_k_zero(&catalog("Gmk").map_err(e)?, &ns).map_err(e)?)?;
    for n in ns {
        let rep = check_exponential_correspondence(n).map_err(e)?;
        require(&rep)?;
        let want = format!("h = m + {n} k");
        if !rep.derived.iter().any(|d| d.value == want) {
            return Err(format!("N={n}: missing `{want}`"));
        }
    }
    Ok("N = 1, 2, 3 close over p, q and h, hp; spot identities, coproduct, k = 0 and exponents hold".into())
}

fn mutations() -> Outcome {
    let data = DataDir::embedded();
    let ms = load_mutations(&data).map_err(|e| e.to_string())?;
    let mut checks: Vec<&str> = ms.iter().map(|m| m.check.as_str()).collect();
    checks.sort();
    if checks != ["antipode", "confluence", "qybe", "rtt", "triangularity"] {
        return Err(format!("shipped mutations cover {checks:?}"));
    }
    require(&check_mutations(&data, Exec::default()).map_err(|e| e.to_string())?)?;
    Ok("qybe, triangularity, rtt, antipode and confluence each fail on their mutation".into())
}

fn end_to_end() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_qgw"))
        .args(["check", "all", "--paper"])
        .output()
        .map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(300), "qgw check all --paper")?;
    let text = String::from_utf8_lossy(&out.stdout);
    let lines = text.lines().filter(|l| l.starts_with("PASS ")).count();
    match out.status.code() {
        Some(0) if lines == 14 => Ok(format!("14 suites pass in {:?}", start.elapsed())),
        code => Err(format!("exit {code:?}, {lines} passing suites\n{text}")),
    }
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("golden-data consistency", golden_reorder),
        ("QYBE", qybe),
        ("triangularity", triangularity),
        ("contraction", contraction),
        ("RTT", rtt),
        ("rewriting soundness", rewriting),
        ("Hopf structure", hopf),
        ("morphisms", morphisms),
        ("mutation sensitivity", mutations),
        ("end-to-end", end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("PASS {:>2} {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg}", i + 1);
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
