#![allow(dead_code)]

use parind_core::functors::{dualize, ext1_h_modules, induce};
use parind_core::harness::{load_fixture, RepClass};
use parind_core::hecke::{make_character_module, HCharacterKind, HModule, HTModule, SmoothCharacter};
use parind_core::linalg::block_diag;
use parind_core::{FpMatrix, Modulus};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn modulus(p: u32) -> Modulus {
    Modulus::new(p).unwrap()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, m: Modulus, rows: usize, cols: usize) -> FpMatrix {
    let entries: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(0..m.get()) as i64).collect();
    FpMatrix::new(m, rows, cols, &entries).unwrap()
}

pub fn random_invertible(rng: &mut ChaCha8Rng, m: Modulus, n: usize) -> FpMatrix {
    loop {
        let a = random_matrix(rng, m, n, n);
        if a.is_invertible() {
            return a;
        }
    }
}

/// Random `H_T`-module of dimension `1..=max_dim`: block-diagonal in a random
/// basis, with `G` semisimple and `X` invertible on each `G`-eigenspace.
pub fn random_ht_module(rng: &mut ChaCha8Rng, m: Modulus, max_dim: usize) -> HTModule {
    let d = rng.gen_range(1..=max_dim);
    let g = m.primitive_root();
    // few distinct exponents so that Hom spaces are often nonzero
    let exps: Vec<u32> = (0..d).map(|_| rng.gen_range(0..2)).collect();
    let mut x = FpMatrix::zeros(m, 0, 0);
    let mut gm = FpMatrix::zeros(m, 0, 0);
    for e in 0..2 {
        let k = exps.iter().filter(|&&x| x == e).count();
        if k == 0 {
            continue;
        }
        x = block_diag(&x, &random_invertible(rng, m, k)).unwrap();
        gm = block_diag(&gm, &FpMatrix::scalar(m, k, m.pow(g, e as u64))).unwrap();
    }
    let p = random_invertible(rng, m, d);
    let pi = p.inverse().unwrap();
    let conj = |a: &FpMatrix| pi.mul(a).unwrap().mul(&p).unwrap();
    HTModule::new(conj(&x), conj(&gm)).unwrap()
}

/// Modules used by the adjunction and exactness properties.
pub fn fixture_corpus(m: Modulus) -> Vec<(String, HModule)> {
    let mut out = Vec::new();
    for chi in SmoothCharacter::all(m) {
        let ind = induce(&chi.to_module()).unwrap();
        out.push((format!("ind{chi}"), ind.clone()));
        out.push((format!("dual_ind{chi}"), dualize(&ind).unwrap()));
    }
    let mut kinds = vec![HCharacterKind::Trivial, HCharacterKind::Sign];
    kinds.extend(HCharacterKind::supersingular_kinds(m));
    for k in kinds {
        out.push((k.to_string(), make_character_module(k, m).unwrap()));
    }
    let mut classes = vec![RepClass::Steinberg];
    classes.extend(SmoothCharacter::all(m).map(RepClass::Principal));
    classes.extend(
        HCharacterKind::supersingular_kinds(m)
            .into_iter()
            .map(RepClass::Supersingular),
    );
    for c in classes {
        let f = load_fixture(c, m).unwrap();
        for (n, d) in f.degrees.into_iter().enumerate() {
            out.push((format!("{c}.H{n}"), d));
        }
    }
    let rho = SmoothCharacter::rho_bar(m);
    let a = induce(&rho.to_module()).unwrap();
    let b = dualize(&induce(&rho.inverse_times_alpha().to_module()).unwrap()).unwrap();
    for (i, e) in ext1_h_modules(&a, &b).unwrap().representatives.into_iter().enumerate() {
        out.push((format!("ext_rho.{i}"), e));
    }
    out
}
