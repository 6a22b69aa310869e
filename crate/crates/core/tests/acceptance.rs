//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use common::{random_instance, standard, w, Instance};
use hrforms::graded::submodule_mi;
use hrforms::hrform::{check_lefschetz, decompose, synthesize_g_module, verify_hr};
use hrforms::linalg::Matrix;
use hrforms::oracle::{freudenthal_character, sl2_gram, sl2_tilting_fixture, weyl_dim};
use hrforms::padic::{
    lattice_dual, lattice_mi, same_lattice, saturate, verify_padic_hr, verify_tilting, weyl_filtration,
    weyl_lattice, LatticeModule,
};
use hrforms::paths::{gram_block, gram_entry, standard_module, SimpleRootPath, StandardOptions};
use hrforms::scalar::rat;
use hrforms::{BlockForm, Field, Ring, RootSystem, UpSet, Weight};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn instances() -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_241_018);
    (0..20).map(|_| random_instance(&mut rng)).collect()
}

fn gram_closed_form() -> Outcome {
    let rs = RootSystem::a1();
    for n in 0..=12i64 {
        for l in 0..=(n as usize + 2) {
            let path = SimpleRootPath(vec![0; l]);
            let got = gram_entry(&rs, &w(&[n]), &path, &path);
            ensure!(got == sl2_gram(n, l as u32), "n={n}, l={l}: got {got}");
        }
    }
    let entry = |n: i64, l: usize| gram_entry(&rs, &w(&[n]), &SimpleRootPath(vec![0; l]), &SimpleRootPath(vec![0; l]));
    ensure!(entry(3, 2) == BigInt::from(12), "(3,2) is not 12");
    ensure!(entry(3, 4) == BigInt::from(0), "(3,4) is not 0");
    Ok(())
}

fn standard_characters() -> Outcome {
    let mut cases: Vec<(RootSystem, Vec<i64>)> = (0..=8).map(|n| (RootSystem::a1(), vec![n])).collect();
    for a in 0..=2 {
        for b in 0..=2 {
            cases.push((RootSystem::a2(), vec![a, b]));
        }
    }
    cases.push((RootSystem::b2(), vec![1, 1]));
    for (rs, lambda) in &cases {
        let (m, _) = standard(rs, lambda);
        let ch = freudenthal_character(rs, &w(lambda)).map_err(|e| e.to_string())?;
        ensure!(m.character() == ch.multiplicities, "{} λ={:?}: character differs", rs.type_label(), lambda);
    }
    ensure!(standard(&RootSystem::a2(), &[1, 1]).0.total_dim() == 8, "dim V(ρ) on A2 is not 8");
    ensure!(standard(&RootSystem::b2(), &[1, 1]).0.total_dim() == 16, "dim V(ρ) on B2 is not 16");
    Ok(())
}

fn characteristic_drop() -> Outcome {
    let a2 = RootSystem::a2();
    let rho = w(&[1, 1]);
    let v = standard_module(&a2, Ring::prime_field(3).unwrap(), &rho, StandardOptions::default())
        .map_err(|e| e.to_string())?;
    ensure!(v.module.total_dim() == 7, "total dimension {}", v.module.total_dim());
    ensure!(v.module.dim(&w(&[0, 0])) == 1, "zero weight dimension {}", v.module.dim(&w(&[0, 0])));
    let g = gram_block(&a2, &rho, &w(&[0, 0]));
    ensure!(g == Matrix::from_ints(&[&[2, 1], &[1, 2]]), "zero-weight Gram is {g:?}");
    ensure!(g.rank(Field::Prime(3)) == 1, "Gram rank mod 3 is not 1");
    Ok(())
}

fn hr_round_trip(cases: &[Instance]) -> Outcome {
    for (k, c) in cases.iter().enumerate() {
        let report = verify_hr(&c.module, &c.form, &[]).map_err(|e| e.to_string())?;
        ensure!(report.overall, "instance {k}: verify_hr failed: {report:?}");
        let mut hw = decompose(&c.module, &c.form).map_err(|e| e.to_string())?.highest_weights();
        hw.sort();
        ensure!(hw == c.summands, "instance {k}: recovered {hw:?}, expected {:?}", c.summands);
    }
    Ok(())
}

fn serre_relations(cases: &[Instance]) -> Outcome {
    for (k, c) in cases.iter().enumerate() {
        let s = synthesize_g_module(&c.module, &c.form).map_err(|e| format!("instance {k}: {e}"))?;
        ensure!(s.serre_checked, "instance {k}: Serre relations not checked");
        if c.module.root_system().rank() == 2 {
            ensure!(
                s.relations.iter().any(|r| r.contains("(ad e1)^2 e2 = 0")),
                "instance {k}: missing Serre relation in {:?}",
                s.relations
            );
        }
    }
    Ok(())
}

fn lefschetz(cases: &[Instance]) -> Outcome {
    for (k, c) in cases.iter().enumerate() {
        let check = check_lefschetz(&c.module);
        ensure!(check.passed(), "instance {k}: {check:?}");
    }
    Ok(())
}

fn weyl_lattices() -> Outcome {
    let a1 = RootSystem::a1();
    let (l3, g3) = weyl_lattice(&a1, &w(&[3]), 5).map_err(|e| e.to_string())?;
    let diag: Vec<_> = [3, 1, -1, -3].iter().map(|&mu| g3.block(&w(&[mu]))[(0, 0)].clone()).collect();
    ensure!(diag == vec![rat(1), rat(3), rat(3), rat(1)], "Gram of Δ(3) is {diag:?}");
    let v3 = verify_tilting(&l3, &g3).map_err(|e| e.to_string())?;
    ensure!(v3.overall, "Δ(3) at p=5 is not tilting: {:?}", v3.first_failure());
    let filt = v3.filtration.as_ref().map(|f| f.multiplicities());
    ensure!(filt == Some(vec![(w(&[3]), 1)]), "filtration {filt:?}");

    let (l5, g5) = weyl_lattice(&a1, &w(&[5]), 5).map_err(|e| e.to_string())?;
    let v5 = verify_tilting(&l5, &g5).map_err(|e| e.to_string())?;
    ensure!(!v5.overall, "Δ(5) at p=5 passed");
    let unimodular = v5.padic_hr.as_ref().map(|r| r.unimodular.clone());
    ensure!(
        unimodular.as_ref().and_then(|c| c.witness()) == Some("unimodularity fails at weight 3 (valuation 1)"),
        "unexpected verdict {unimodular:?}"
    );
    Ok(())
}

fn tilting_fixture() -> Outcome {
    let fx = sl2_tilting_fixture(3).map_err(|e| format!("search failed: {e}"))?;
    let verdict = verify_tilting(&fx.lattice, &fx.form).map_err(|e| e.to_string())?;
    ensure!(verdict.overall, "fixture is not tilting: {:?}", verdict.first_failure());
    let expect = vec![(w(&[3]), 1), (w(&[1]), 1)];
    let own = weyl_filtration(&fx.lattice).map_err(|e| e.to_string())?;
    ensure!(own.passed() && own.multiplicities() == expect, "fixture filtration {own:?}");
    let (dual, _) = lattice_dual(&fx.lattice, &fx.form).map_err(|e| e.to_string())?;
    let dual_filt = weyl_filtration(&dual).map_err(|e| e.to_string())?;
    ensure!(dual_filt.passed() && dual_filt.multiplicities() == expect, "dual filtration {dual_filt:?}");
    Ok(())
}

/// `M_I` against the rational closure cut down to the lattice, on every
/// principal up-set of the support.
fn closure_is_lattice_cut(l: &LatticeModule, form: &BlockForm) -> Outcome {
    let p = l.p();
    let report = verify_padic_hr(l, form, &[]).map_err(|e| e.to_string())?;
    ensure!(!matches!(report.rational_closure, hrforms::hrform::Check::Fail { .. }), "{:?}", report.rational_closure);
    for top in l.module().support() {
        let upset = UpSet::principal(top.clone());
        let mi = lattice_mi(l, &upset);
        ensure!(mi.split.passed(), "I = ↑{top}: {:?}", mi.split);
        let rational = submodule_mi(&l.rational(), &upset).map_err(|e| e.to_string())?;
        for mu in l.module().support() {
            let got = mi.basis.get(mu).filter(|b| b.cols() > 0);
            let expect = rational.basis.get(mu).filter(|b| b.cols() > 0).map(|b| saturate(b, p));
            match (got, expect) {
                (None, None) => {}
                (Some(a), Some(b)) => ensure!(same_lattice(a, &b, p), "I = ↑{top}, weight {mu}: lattices differ"),
                _ => return Err(format!("I = ↑{top}, weight {mu}: ranks differ")),
            }
        }
    }
    Ok(())
}

fn rational_closure() -> Outcome {
    let a1 = RootSystem::a1();
    for lambda in [3, 5] {
        let (l, g) = weyl_lattice(&a1, &w(&[lambda]), 5).map_err(|e| e.to_string())?;
        closure_is_lattice_cut(&l, &g).map_err(|e| format!("Δ({lambda}): {e}"))?;
    }
    let fx = sl2_tilting_fixture(3).map_err(|e| e.to_string())?;
    closure_is_lattice_cut(&fx.lattice, &fx.form).map_err(|e| format!("fixture: {e}"))
}

fn oracle_independence() -> Outcome {
    let mut cases: Vec<(RootSystem, Weight)> = (0..5).map(|n| (RootSystem::a1(), w(&[n]))).collect();
    for c in [[0, 0], [1, 0], [0, 1], [1, 1], [2, 0], [2, 1]] {
        cases.push((RootSystem::a2(), w(&c)));
    }
    for c in [[0, 0], [1, 0], [0, 1], [1, 1]] {
        cases.push((RootSystem::b2(), w(&c)));
    }
    assert_eq!(cases.len(), 15);
    for (rs, lambda) in &cases {
        let d = weyl_dim(rs, lambda).map_err(|e| e.to_string())?;
        let ch = freudenthal_character(rs, lambda).map_err(|e| e.to_string())?;
        ensure!(d == BigInt::from(ch.dim()), "{} λ={lambda}: {d} vs {}", rs.type_label(), ch.dim());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cases = instances();
    let criteria: Vec<Criterion> = vec![
        ("sl2 Gram closed form", Box::new(gram_closed_form)),
        ("standard-module characters match Freudenthal", Box::new(standard_characters)),
        ("dimension drop of V(ρ) on A2 over F_3", Box::new(characteristic_drop)),
        ("HR round trip on 20 random sums", Box::new(|| hr_round_trip(&cases))),
        ("Serre relations emerge from the form", Box::new(|| serre_relations(&cases))),
        ("Lefschetz property", Box::new(|| lefschetz(&cases))),
        ("p-adic Weyl lattices at p=5", Box::new(weyl_lattices)),
        ("tilting fixture at p=3", Box::new(tilting_fixture)),
        ("M_I is the rational closure cut to the lattice", Box::new(rational_closure)),
        ("Weyl dimension agrees with Freudenthal", Box::new(oracle_independence)),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(()) => println!("PASS {:>2} {name}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
