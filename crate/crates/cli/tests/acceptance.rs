use std::process::Command;
use std::time::{Duration, Instant};

use parind_core::ext::{euler_check, ext_ht, ext_t, is_isomorphic_ht, CharMultiset};
use parind_core::functors::{dualize, ext1_h_modules, induce, right_adjoint};
use parind_core::harness::{
    apply_r_to_fixture, load_fixture, replay_r1_determination, replay_r2_contradiction, verify_all, Fault, RepClass,
    Selection, VerificationReport,
};
use parind_core::hecke::{make_character_module, HCharacterKind, HModule, HTModule, SmoothCharacter};
use parind_core::linalg::{block_diag, fitting_split, intertwiner_space};
use parind_core::{FpMatrix, Modulus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const UNIT_ISO_PRIMES: [u32; 2] = [5, 7];
const UNIT_ISO_BUDGET: Duration = Duration::from_secs(5);
const TABLE_PRIME: u32 = 5;
const TABLE_MAX_N: u32 = 3;
const PRINCIPAL_COUNT: usize = 16;
const ALL_REPORT_COUNT: usize = 19;
const FITTING_TRIALS: usize = 200;
const EULER_TRIALS: usize = 100;
const CORRUPTION_TRIALS: usize = 100;
const MIN_CORRUPTIONS_DETECTED: usize = 1;
const PROPERTY_BUDGET: Duration = Duration::from_secs(60);
const SEED: u64 = 20_240_601;

fn modulus(p: u32) -> Modulus {
    Modulus::new(p).unwrap()
}

fn binom(n: u32, k: u32) -> usize {
    match (n, k) {
        (_, 0) => 1,
        (n, k) if k > n => 0,
        (n, k) => binom(n - 1, k - 1) * n as usize / k as usize,
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn ac1_unit_isomorphism() -> Outcome {
    let start = Instant::now();
    let mut failures = 0;
    let mut total = 0;
    for p in UNIT_ISO_PRIMES {
        for chi in SmoothCharacter::all(modulus(p)) {
            let r = right_adjoint(&induce(&chi.to_module()).unwrap()).unwrap();
            total += 1;
            if !is_isomorphic_ht(&r, &chi.to_module()).unwrap() {
                failures += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && total == 16 + 36 && elapsed < UNIT_ISO_BUDGET,
        format!("{total} characters, {failures} failures, {elapsed:.2?} (limit {UNIT_ISO_BUDGET:?})"),
    )
}

fn ac2_ext_tables() -> Outcome {
    let m = modulus(TABLE_PRIME);
    let chars: Vec<_> = SmoothCharacter::all(m).collect();
    let mut mismatches = 0;
    let mut checked = 0;
    for a in &chars {
        for b in &chars {
            let delta = usize::from(a == b);
            for n in 0..=TABLE_MAX_N {
                let ht = ext_ht(n, &a.to_module(), &b.to_module()).unwrap();
                let t = ext_t(n, &CharMultiset::single(*a), &CharMultiset::single(*b)).unwrap();
                checked += 2;
                mismatches += usize::from(ht != binom(1, n) * delta) + usize::from(t != binom(2, n) * delta);
            }
        }
    }
    outcome(mismatches == 0, format!("{checked} entries, {mismatches} mismatches"))
}

fn ac3_nonsplit_self_extension() -> Outcome {
    let m = modulus(TABLE_PRIME);
    let mut mismatches = 0;
    for chi in SmoothCharacter::all(m) {
        let sigma = CharMultiset::chain(chi, 2);
        for n in 0..=TABLE_MAX_N {
            if ext_t(n, &sigma, &CharMultiset::single(chi)).unwrap() != binom(2, n) {
                mismatches += 1;
            }
        }
    }
    outcome(
        mismatches == 0,
        format!("{mismatches} mismatches over {} characters", (TABLE_PRIME - 1).pow(2)),
    )
}

fn failing_rows(r: &VerificationReport) -> Vec<String> {
    r.constraints.iter().filter(|c| !c.pass).map(|c| c.id.clone()).collect()
}

fn ac4_principal_series() -> Outcome {
    let m = modulus(TABLE_PRIME);
    let reports = verify_all(m, Selection::Principal(None), Fault::None).unwrap();
    let mut problems = Vec::new();
    for r in &reports {
        let [u, e] = r.chi.unwrap();
        let chi = SmoothCharacter::new(m, u as i64, e as i64).unwrap();
        let psi = chi.inverse_times_alpha();
        let expected_table = [vec![[u, e, 1, 1]], vec![[psi.u(), psi.e(), 1, 1]], vec![], vec![]];
        let table_ok = (0..4).all(|n| r.table[&(n as u32)] == expected_table[n]);
        let nonsplit = r
            .constraints
            .iter()
            .find(|c| c.id == "fixture.n1.nonsplit_iff_rho")
            .unwrap();
        let rho = chi == SmoothCharacter::rho_bar(m);
        let nonsplit_ok = nonsplit.pass && nonsplit.lhs == i64::from(rho);
        if !r.passed() || !table_ok || !nonsplit_ok {
            problems.push(format!("{chi}: {:?}", failing_rows(r)));
        }
    }
    let rho_seen = reports.iter().filter(|r| r.chi == Some([1, 1])).count();
    outcome(
        problems.is_empty() && reports.len() == PRINCIPAL_COUNT && rho_seen == 1,
        format!(
            "{} reports, rho_bar path exercised {rho_seen}x, problems {problems:?}",
            reports.len()
        ),
    )
}

fn ac5_steinberg() -> Outcome {
    let m = modulus(TABLE_PRIME);
    let one = SmoothCharacter::trivial(m);
    let r = apply_r_to_fixture(&load_fixture(RepClass::Steinberg, m).unwrap()).unwrap();
    let r_ok = is_isomorphic_ht(&r[0], &one.to_module()).unwrap()
        && is_isomorphic_ht(&r[1], &one.to_module()).unwrap()
        && r[2..].iter().all(|x| x.dim() == 0);
    let rep = &verify_all(m, Selection::Steinberg, Fault::None).unwrap()[0];
    let table_ok = rep.table[&0] == vec![[1, 0, 1, 1]] && (1..4).all(|n| rep.table[&n].is_empty());
    let n1 = rep.constraints.iter().find(|c| c.id == "deg2.n1.dim").unwrap();
    let forcing = rep.constraints.iter().find(|c| c.id == "deg2.forcing.n1").unwrap();
    // 1 = 1 + 0
    let forcing_ok = n1.lhs == 1 && n1.rhs == 1 && forcing.lhs == 0 && forcing.pass;
    outcome(
        r_ok && table_ok && forcing_ok && rep.passed(),
        format!(
            "R-values ok {r_ok}, table ok {table_ok}, forcing {} = 1 + {}",
            n1.lhs, forcing.lhs
        ),
    )
}

fn ac6_trivial() -> Outcome {
    let m = modulus(TABLE_PRIME);
    let rep = &verify_all(m, Selection::Trivial, Fault::None).unwrap()[0];
    let alpha = SmoothCharacter::alpha_bar(m);
    let table_ok = rep.table[&0].is_empty()
        && rep.table[&1] == vec![[alpha.u(), alpha.e(), 1, 1]]
        && rep.table[&2].is_empty()
        && rep.table[&3].is_empty();
    outcome(
        table_ok && rep.passed(),
        format!("table {:?}, failing rows {:?}", rep.table, failing_rows(rep)),
    )
}

fn ac7_supersingular() -> Outcome {
    let mut zero_r = true;
    let mut count = 0;
    for p in UNIT_ISO_PRIMES {
        let m = modulus(p);
        for kind in HCharacterKind::supersingular_kinds(m) {
            let f = load_fixture(RepClass::Supersingular(kind), m).unwrap();
            count += f.degrees.len();
            zero_r &= f.degrees.iter().all(|d| right_adjoint(d).unwrap().dim() == 0);
        }
    }
    let rep = &verify_all(modulus(TABLE_PRIME), Selection::Supersingular, Fault::None).unwrap()[0];
    let table_ok = rep.table.values().all(Vec::is_empty);
    outcome(
        zero_r && table_ok && rep.passed(),
        format!("{count} fixture modules, R = 0: {zero_r}, zero table: {table_ok}"),
    )
}

fn ac8_replays() -> Outcome {
    let m = modulus(TABLE_PRIME);
    let mut problems = Vec::new();
    for chi in SmoothCharacter::all(m) {
        let r2 = replay_r2_contradiction(chi).unwrap();
        let row = |id: &str| r2.report.rows.iter().find(|r| r.id == id).unwrap().clone();
        let (sigma, ext3) = (row("dimsigmaR2"), row("Ext3dim=1"));
        let r2_ok = r2.report.passed() && sigma.lhs == 2 && ext3.lhs == 1 && r2.conclusion.is_zero();

        let r1 = replay_r1_determination(chi).unwrap();
        let excl = r1
            .report
            .rows
            .iter()
            .find(|r| r.id == "dimhomR1.sigma_chain_exclusion")
            .unwrap();
        let r1_ok = r1.report.passed()
            && (excl.lhs, excl.rhs) == (2, 1)
            && r1.conclusion == CharMultiset::single(chi.inverse_times_alpha());
        if !r2_ok || !r1_ok {
            problems.push(chi.to_string());
        }
    }
    outcome(
        problems.is_empty(),
        format!("2 vs 1 in both replays for all characters; problems {problems:?}"),
    )
}

fn random_matrix(rng: &mut ChaCha8Rng, m: Modulus, n: usize) -> FpMatrix {
    let entries: Vec<i64> = (0..n * n).map(|_| rng.gen_range(0..m.get()) as i64).collect();
    FpMatrix::new(m, n, n, &entries).unwrap()
}

fn random_invertible(rng: &mut ChaCha8Rng, m: Modulus, n: usize) -> FpMatrix {
    loop {
        let a = random_matrix(rng, m, n);
        if a.is_invertible() {
            return a;
        }
    }
}

fn random_ht_module(rng: &mut ChaCha8Rng, m: Modulus) -> HTModule {
    let g = m.primitive_root();
    let mut x = FpMatrix::zeros(m, 0, 0);
    let mut gm = FpMatrix::zeros(m, 0, 0);
    for e in 0..2u64 {
        let k = rng.gen_range(0..3);
        if k > 0 {
            x = block_diag(&x, &random_invertible(rng, m, k)).unwrap();
            gm = block_diag(&gm, &FpMatrix::scalar(m, k, m.pow(g, e))).unwrap();
        }
    }
    if x.rows() == 0 {
        return random_ht_module(rng, m);
    }
    let p = random_invertible(rng, m, x.rows());
    let pi = p.inverse().unwrap();
    HTModule::new(
        pi.mul(&x).unwrap().mul(&p).unwrap(),
        pi.mul(&gm).unwrap().mul(&p).unwrap(),
    )
    .unwrap()
}

fn corpus(m: Modulus) -> Vec<HModule> {
    let mut out = Vec::new();
    for chi in SmoothCharacter::all(m) {
        let ind = induce(&chi.to_module()).unwrap();
        out.push(dualize(&ind).unwrap());
        out.push(ind);
        for f in load_fixture(RepClass::Principal(chi), m).unwrap().degrees {
            out.push(f);
        }
    }
    out.extend(load_fixture(RepClass::Steinberg, m).unwrap().degrees);
    for kind in HCharacterKind::supersingular_kinds(m) {
        out.extend(load_fixture(RepClass::Supersingular(kind), m).unwrap().degrees);
    }
    let rho = SmoothCharacter::rho_bar(m);
    let a = induce(&rho.to_module()).unwrap();
    let b = dualize(&induce(&rho.inverse_times_alpha().to_module()).unwrap()).unwrap();
    out.extend(ext1_h_modules(&a, &b).unwrap().representatives);
    out
}

fn ac9_property_suites() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    let mut adjunction_failures = 0;
    let mut adjunction_checks = 0;
    for p in UNIT_ISO_PRIMES {
        let m = modulus(p);
        for module in corpus(m) {
            let r = right_adjoint(&module).unwrap();
            for chi in SmoothCharacter::all(m) {
                let ind = induce(&chi.to_module()).unwrap();
                let lhs = intertwiner_space(&ind.generators(), &module.generators())
                    .unwrap()
                    .len();
                adjunction_checks += 1;
                adjunction_failures += usize::from(lhs != ext_ht(0, &chi.to_module(), &r).unwrap());
            }
        }
    }

    let m = modulus(5);
    let mut fitting_failures = 0;
    for _ in 0..FITTING_TRIALS {
        let n = rng.gen_range(1..=6);
        let a = random_matrix(&mut rng, m, n);
        let s = fitting_split(&a).unwrap();
        let inv_ok = a.restrict_to(&s.invertible).unwrap().is_some_and(|r| r.is_invertible());
        let nil_ok = a
            .restrict_to(&s.nilpotent)
            .unwrap()
            .is_some_and(|r| r.pow(n as u64).unwrap().data().iter().all(|&v| v == 0));
        let dims_ok = s.invertible.rows() + s.nilpotent.rows() == n;
        fitting_failures += usize::from(!(inv_ok && nil_ok && dims_ok));
    }

    let mut euler_failures = 0;
    for _ in 0..EULER_TRIALS {
        let a = random_ht_module(&mut rng, m);
        let b = random_ht_module(&mut rng, m);
        euler_failures += usize::from(!euler_check(&a, &b).unwrap());
    }

    let builtins: Vec<HModule> = [HCharacterKind::Trivial, HCharacterKind::Sign]
        .into_iter()
        .chain(HCharacterKind::supersingular_kinds(m))
        .map(|k| make_character_module(k, m).unwrap())
        .chain(SmoothCharacter::all(m).map(|c| induce(&c.to_module()).unwrap()))
        .collect();
    let builtins_valid = builtins.iter().all(|b| b.verify_relations().is_empty());
    let mut detected = 0;
    for _ in 0..CORRUPTION_TRIALS {
        let b = &builtins[rng.gen_range(0..builtins.len())];
        let mut gens = b.generators();
        let which = rng.gen_range(0..3);
        let (i, j) = (rng.gen_range(0..b.dim()), rng.gen_range(0..b.dim()));
        let v = (gens[which].get(i, j) + rng.gen_range(1..m.get())) % m.get();
        gens[which].set(i, j, v);
        let [s0, s1, g] = gens;
        detected += usize::from(!HModule::new_unchecked(s0, s1, g).unwrap().verify_relations().is_empty());
    }

    let elapsed = start.elapsed();
    outcome(
        adjunction_failures == 0
            && fitting_failures == 0
            && euler_failures == 0
            && builtins_valid
            && detected >= MIN_CORRUPTIONS_DETECTED
            && elapsed < PROPERTY_BUDGET,
        format!(
            "adjunction {adjunction_failures}/{adjunction_checks} failed, fitting {fitting_failures}/{FITTING_TRIALS}, \
             euler {euler_failures}/{EULER_TRIALS}, corruptions detected {detected}/{CORRUPTION_TRIALS}, {elapsed:.2?} (limit {PROPERTY_BUDGET:?})"
        ),
    )
}

fn ac10_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_parind"))
            .args(["verify", "--class", "all", "--p", "5", "--json"])
            .arg(&path)
            .env_remove("HECKE_P")
            .output()
            .unwrap();
        (status.status.code(), std::fs::read(&path).unwrap())
    };
    let (code_a, a) = run("a.json");
    let (code_b, b) = run("b.json");
    let bundle: serde_json::Value = serde_json::from_slice(&a).unwrap();
    let reports = bundle["reports"].as_array().map_or(0, Vec::len);
    outcome(
        a == b && code_a == Some(0) && code_b == Some(0) && reports == ALL_REPORT_COUNT,
        format!(
            "{} bytes, identical {}, {reports} sub-reports, exit codes {code_a:?}/{code_b:?}",
            a.len(),
            a == b
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("unit isomorphism", ac1_unit_isomorphism),
        ("ext tables", ac2_ext_tables),
        ("nonsplit self-extension", ac3_nonsplit_self_extension),
        ("principal series table", ac4_principal_series),
        ("steinberg table", ac5_steinberg),
        ("trivial representation table", ac6_trivial),
        ("supersingular", ac7_supersingular),
        ("proof replays", ac8_replays),
        ("property suites", ac9_property_suites),
        ("determinism", ac10_determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!(
            "AC{:<2} {} {name}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
