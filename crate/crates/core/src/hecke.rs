//! Modules over the pro-p Iwahori-Hecke algebra `H` of SL2(Qp) and over the
//! torus algebra `H_T = C[Z] (x) C[F_p^x]`, with coefficients in F_p.
//!
//! Modules are right modules: vectors are rows and a generator acts by
//! `v -> v A`. The torus part `Omega = F_p^x` is handled through the fixed
//! generator `g` = smallest primitive root, so one matrix `G` describes it.
//!
//! `H` is presented by `T_{s0}`, `T_{s1}`, `T_omega` subject to
//!
//! * `omega -> T_omega` is a group homomorphism (`G^(p-1) = 1`),
//! * `T_omega T_s = T_s T_{omega^-1}`,
//! * `T_s^2 = T_s c` with `c = sum over z in F_p^x of T_{omega(z)}` (q = 0 in F_p).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Modulus;
use crate::linalg::{block_diag, FpMatrix};

/// A smooth character of the diagonal torus with trivial restriction to `T_1`.
///
/// `u` is the value at `diag(p, 1/p)`, and on units `diag(x, 1/x) -> xbar^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SmoothCharacter {
    modulus: Modulus,
    u: u32,
    e: u32,
}

impl SmoothCharacter {
    pub fn new(modulus: Modulus, u: i64, e: i64) -> Result<Self> {
        let u = modulus.reduce(u);
        if u == 0 {
            return Err(Error::InvalidParameter("character value u must be a unit".into()));
        }
        let e = e.rem_euclid(modulus.unit_order() as i64) as u32;
        Ok(SmoothCharacter { modulus, u, e })
    }

    pub fn trivial(modulus: Modulus) -> Self {
        SmoothCharacter { modulus, u: 1, e: 0 }
    }

    /// `x -> xbar` on units, trivial on `p`-powers.
    pub fn rho_bar(modulus: Modulus) -> Self {
        SmoothCharacter { modulus, u: 1, e: 1 }
    }

    /// `x -> xbar^2` on units, trivial on `p`-powers.
    pub fn alpha_bar(modulus: Modulus) -> Self {
        SmoothCharacter {
            modulus,
            u: 1,
            e: 2 % modulus.unit_order(),
        }
    }

    /// All `(p-1)^2` characters, ordered by `(u, e)`.
    pub fn all(modulus: Modulus) -> impl Iterator<Item = SmoothCharacter> {
        let n = modulus.unit_order();
        (1..modulus.get()).flat_map(move |u| (0..n).map(move |e| SmoothCharacter { modulus, u, e }))
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn u(&self) -> u32 {
        self.u
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// Value on the fixed generator `g` of `F_p^x`.
    pub fn omega_value(&self) -> u32 {
        self.modulus.pow(self.modulus.primitive_root(), self.e as u64)
    }

    pub fn mul(&self, other: &SmoothCharacter) -> Result<SmoothCharacter> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus.get(), other.modulus.get()));
        }
        let m = self.modulus;
        Ok(SmoothCharacter {
            modulus: m,
            u: m.mul(self.u, other.u),
            e: (self.e + other.e) % m.unit_order(),
        })
    }

    pub fn inverse(&self) -> SmoothCharacter {
        let m = self.modulus;
        SmoothCharacter {
            modulus: m,
            u: m.inv(self.u).expect("u is a unit"),
            e: (m.unit_order() - self.e) % m.unit_order(),
        }
    }

    /// `chi -> chi^{-1} alpha_bar`.
    pub fn inverse_times_alpha(&self) -> SmoothCharacter {
        self.inverse()
            .mul(&SmoothCharacter::alpha_bar(self.modulus))
            .expect("same modulus")
    }

    pub fn to_module(&self) -> HTModule {
        HTModule::character(self)
    }
}

impl fmt::Display for SmoothCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(u={}, e={})", self.u, self.e)
    }
}

/// `sum_{k=0}^{p-2} G^k`: the action of `c = sum over Omega of T_omega`.
pub fn omega_sum(g: &FpMatrix) -> Result<FpMatrix> {
    let n = g.rows();
    let mut acc = FpMatrix::zeros(g.modulus(), n, n);
    let mut power = FpMatrix::identity(g.modulus(), n);
    for _ in 0..g.modulus().unit_order() {
        acc = acc.add(&power)?;
        power = power.mul(g)?;
    }
    Ok(acc)
}

/// A finite-dimensional right `H_T`-module: a commuting pair of the action `X`
/// of `diag(p, 1/p)` and the action `G` of `diag(g, 1/g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HTModule {
    x: FpMatrix,
    g: FpMatrix,
}

impl HTModule {
    /// Validating constructor; fails with the list of violated conditions.
    pub fn new(x: FpMatrix, g: FpMatrix) -> Result<Self> {
        let m = HTModule::new_unchecked(x, g)?;
        let problems = m.violations()?;
        if problems.is_empty() {
            Ok(m)
        } else {
            Err(Error::InvalidModule(problems.join("; ")))
        }
    }

    /// Checks only shapes and moduli.
    pub fn new_unchecked(x: FpMatrix, g: FpMatrix) -> Result<Self> {
        if x.modulus() != g.modulus() {
            return Err(Error::ModulusMismatch(x.modulus().get(), g.modulus().get()));
        }
        if !x.is_square() || !g.is_square() || x.rows() != g.rows() {
            return Err(Error::DimensionMismatch("X and G must be square of equal size".into()));
        }
        Ok(HTModule { x, g })
    }

    pub fn zero(modulus: Modulus) -> Self {
        HTModule {
            x: FpMatrix::zeros(modulus, 0, 0),
            g: FpMatrix::zeros(modulus, 0, 0),
        }
    }

    pub fn character(chi: &SmoothCharacter) -> Self {
        let m = chi.modulus;
        HTModule {
            x: FpMatrix::scalar(m, 1, chi.u),
            g: FpMatrix::scalar(m, 1, chi.omega_value()),
        }
    }

    /// Uniserial self-extension of `chi` of length `len`: `X` is a single
    /// Jordan block, `Omega` acts by the scalar `chi`.
    pub fn chain(chi: &SmoothCharacter, len: usize) -> Self {
        let m = chi.modulus;
        HTModule {
            x: FpMatrix::jordan_block(m, len, chi.u),
            g: FpMatrix::scalar(m, len, chi.omega_value()),
        }
    }

    /// Conditions from the presentation of `H_T` that fail, by name.
    pub fn violations(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        let n = self.dim();
        let m = self.modulus();
        if !self.x.is_invertible() {
            out.push("X is not invertible".to_string());
        }
        if self.g.pow(m.unit_order() as u64)? != FpMatrix::identity(m, n) {
            out.push("G^(p-1) != 1".to_string());
        }
        if self.x.mul(&self.g)? != self.g.mul(&self.x)? {
            out.push("X and G do not commute".to_string());
        }
        if !self.g.is_split_semisimple()? {
            out.push("G is not semisimple".to_string());
        }
        Ok(out)
    }

    pub fn modulus(&self) -> Modulus {
        self.x.modulus()
    }

    pub fn dim(&self) -> usize {
        self.x.rows()
    }

    pub fn x(&self) -> &FpMatrix {
        &self.x
    }

    pub fn g(&self) -> &FpMatrix {
        &self.g
    }

    pub fn generators(&self) -> [FpMatrix; 2] {
        [self.x.clone(), self.g.clone()]
    }

    pub fn direct_sum(&self, other: &HTModule) -> Result<HTModule> {
        Ok(HTModule {
            x: block_diag(&self.x, &other.x)?,
            g: block_diag(&self.g, &other.g)?,
        })
    }

    /// The single character this module is, if it is one-dimensional.
    pub fn as_character(&self) -> Option<SmoothCharacter> {
        if self.dim() != 1 {
            return None;
        }
        let m = self.modulus();
        let e = m.log(self.g.get(0, 0))?;
        SmoothCharacter::new(m, self.x.get(0, 0) as i64, e as i64).ok()
    }
}

/// One of the defining relations of `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Relation {
    OmegaOrder,
    ConjugationS0,
    ConjugationS1,
    QuadraticS0,
    QuadraticS1,
}

impl Relation {
    pub const ALL: [Relation; 5] = [
        Relation::OmegaOrder,
        Relation::ConjugationS0,
        Relation::ConjugationS1,
        Relation::QuadraticS0,
        Relation::QuadraticS1,
    ];

    /// Left side minus right side, evaluated on the given generator matrices.
    pub fn residual(self, s0: &FpMatrix, s1: &FpMatrix, g: &FpMatrix) -> Result<FpMatrix> {
        let m = g.modulus();
        let n = g.rows();
        match self {
            Relation::OmegaOrder => g.pow(m.unit_order() as u64)?.sub(&FpMatrix::identity(m, n)),
            Relation::ConjugationS0 | Relation::ConjugationS1 => {
                let s = if self == Relation::ConjugationS0 { s0 } else { s1 };
                // G^(p-2) stands in for G^-1 so the check is meaningful even when
                // the order relation fails.
                let g_inv = g.pow(m.unit_order() as u64 - 1)?;
                g.mul(s)?.sub(&s.mul(&g_inv)?)
            }
            Relation::QuadraticS0 | Relation::QuadraticS1 => {
                let s = if self == Relation::QuadraticS0 { s0 } else { s1 };
                s.mul(s)?.sub(&s.mul(&omega_sum(g)?)?)
            }
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Relation::OmegaOrder => "T_g^(p-1) = 1",
            Relation::ConjugationS0 => "T_w T_s0 = T_s0 T_(w^-1)",
            Relation::ConjugationS1 => "T_w T_s1 = T_s1 T_(w^-1)",
            Relation::QuadraticS0 => "T_s0^2 = T_s0 c",
            Relation::QuadraticS1 => "T_s1^2 = T_s1 c",
        };
        f.write_str(s)
    }
}

/// A finite-dimensional right `H`-module given by the actions of `T_{s0}`,
/// `T_{s1}` and `T_{omega(g)}`. Construction checks shapes only; use
/// [`HModule::verify_relations`] (or [`HModule::new`]) for the relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HModule {
    s0: FpMatrix,
    s1: FpMatrix,
    g: FpMatrix,
}

impl HModule {
    pub fn new(s0: FpMatrix, s1: FpMatrix, g: FpMatrix) -> Result<Self> {
        let m = HModule::new_unchecked(s0, s1, g)?;
        let bad = m.verify_relations();
        if bad.is_empty() {
            Ok(m)
        } else {
            let names: Vec<String> = bad.iter().map(|r| r.to_string()).collect();
            Err(Error::InvalidModule(format!(
                "violated relations: {}",
                names.join(", ")
            )))
        }
    }

    pub fn new_unchecked(s0: FpMatrix, s1: FpMatrix, g: FpMatrix) -> Result<Self> {
        let m = g.modulus();
        for a in [&s0, &s1] {
            if a.modulus() != m {
                return Err(Error::ModulusMismatch(a.modulus().get(), m.get()));
            }
        }
        let n = g.rows();
        if [&s0, &s1, &g].iter().any(|a| a.rows() != n || a.cols() != n) {
            return Err(Error::DimensionMismatch(
                "S0, S1 and G must be square of equal size".into(),
            ));
        }
        Ok(HModule { s0, s1, g })
    }

    pub fn zero(modulus: Modulus) -> Self {
        let z = FpMatrix::zeros(modulus, 0, 0);
        HModule {
            s0: z.clone(),
            s1: z.clone(),
            g: z,
        }
    }

    /// Relations that fail; empty means this is an `H`-module.
    pub fn verify_relations(&self) -> Vec<Relation> {
        Relation::ALL
            .into_iter()
            .filter(|r| {
                !r.residual(&self.s0, &self.s1, &self.g)
                    .expect("shapes checked at construction")
                    .is_zero()
            })
            .collect()
    }

    pub fn modulus(&self) -> Modulus {
        self.g.modulus()
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    pub fn s0(&self) -> &FpMatrix {
        &self.s0
    }

    pub fn s1(&self) -> &FpMatrix {
        &self.s1
    }

    pub fn g(&self) -> &FpMatrix {
        &self.g
    }

    /// `[S0, S1, G]`, the order used by intertwiner and extension solvers.
    pub fn generators(&self) -> [FpMatrix; 3] {
        [self.s0.clone(), self.s1.clone(), self.g.clone()]
    }

    pub fn from_generators(gens: [FpMatrix; 3]) -> Result<Self> {
        let [s0, s1, g] = gens;
        HModule::new_unchecked(s0, s1, g)
    }

    pub fn direct_sum(&self, other: &HModule) -> Result<HModule> {
        Ok(HModule {
            s0: block_diag(&self.s0, &other.s0)?,
            s1: block_diag(&self.s1, &other.s1)?,
            g: block_diag(&self.g, &other.g)?,
        })
    }
}

/// The one-dimensional `H`-modules used as fixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HCharacterKind {
    /// `T_s -> 0`, `Omega` trivial.
    Trivial,
    /// `T_s -> -1`, `Omega` trivial.
    Sign,
    /// `T_{s0} -> a0`, `T_{s1} -> a1`, `T_{omega(g)} -> g^e`. Valid when
    /// `e = 0` and `{a0, a1} = {0, -1}`, or when `e != 0` and `a0 = a1 = 0`
    /// (a nontrivial `Omega`-character forces both `T_s` to vanish).
    Supersingular { a0: i64, a1: i64, e: u32 },
}

impl HCharacterKind {
    /// All supersingular kinds for the given modulus, in a fixed order.
    pub fn supersingular_kinds(modulus: Modulus) -> Vec<HCharacterKind> {
        let mut out = vec![
            HCharacterKind::Supersingular { a0: 0, a1: -1, e: 0 },
            HCharacterKind::Supersingular { a0: -1, a1: 0, e: 0 },
        ];
        out.extend((1..modulus.unit_order()).map(|e| HCharacterKind::Supersingular { a0: 0, a1: 0, e }));
        out
    }

    fn validate(&self, modulus: Modulus) -> Result<()> {
        if let HCharacterKind::Supersingular { a0, a1, e } = *self {
            let a0 = modulus.signed(modulus.reduce(a0));
            let a1 = modulus.signed(modulus.reduce(a1));
            let ok = if e % modulus.unit_order() == 0 {
                matches!((a0, a1), (0, -1) | (-1, 0))
            } else {
                a0 == 0 && a1 == 0
            };
            if !ok {
                return Err(Error::InvalidParameter(format!(
                    "supersingular({a0}, {a1}, {e}) is not an H-character mod {modulus}"
                )));
            }
        }
        Ok(())
    }

    /// Raw 1x1 generator values `(S0, S1, G)` without validation.
    pub fn raw_values(&self, modulus: Modulus) -> (i64, i64, i64) {
        let g = modulus.primitive_root();
        match *self {
            HCharacterKind::Trivial => (0, 0, 1),
            HCharacterKind::Sign => (-1, -1, 1),
            HCharacterKind::Supersingular { a0, a1, e } => (a0, a1, modulus.pow(g, e as u64) as i64),
        }
    }
}

impl fmt::Display for HCharacterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HCharacterKind::Trivial => f.write_str("chi_triv"),
            HCharacterKind::Sign => f.write_str("chi_sign"),
            HCharacterKind::Supersingular { a0, a1, e } => write!(f, "supersingular({a0},{a1},{e})"),
        }
    }
}

pub fn make_character_module(kind: HCharacterKind, modulus: Modulus) -> Result<HModule> {
    kind.validate(modulus)?;
    let (s0, s1, g) = kind.raw_values(modulus);
    let one = |v: i64| FpMatrix::new(modulus, 1, 1, &[v]).expect("1x1");
    let module = HModule::new_unchecked(one(s0), one(s1), one(g))?;
    debug_assert!(module.verify_relations().is_empty());
    Ok(module)
}

/// The operator through which the positive part of `H_T` acts, together with
/// the `Omega`-action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivePart {
    /// `U = S1 S0`, the action of `T_{s1} T_{s0}`.
    pub u: FpMatrix,
    pub g: FpMatrix,
}

pub fn restrict_to_ht_positive(m: &HModule) -> PositivePart {
    PositivePart {
        u: m.s1.mul(&m.s0).expect("shapes checked at construction"),
        g: m.g.clone(),
    }
}

/// Serialized `H`-module: `{p, dim, S0, S1, G}` with row-major nested arrays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HModuleRecord {
    pub p: u32,
    pub dim: usize,
    #[serde(rename = "S0")]
    pub s0: Vec<Vec<i64>>,
    #[serde(rename = "S1")]
    pub s1: Vec<Vec<i64>>,
    #[serde(rename = "G")]
    pub g: Vec<Vec<i64>>,
}

/// Serialized `H_T`-module: `{p, dim, X, G}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HTModuleRecord {
    pub p: u32,
    pub dim: usize,
    #[serde(rename = "X")]
    pub x: Vec<Vec<i64>>,
    #[serde(rename = "G")]
    pub g: Vec<Vec<i64>>,
}

fn matrix_from_record(m: Modulus, dim: usize, rows: &[Vec<i64>], name: &str) -> Result<FpMatrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Parse(format!("{name} is not {dim}x{dim}")));
    }
    if dim == 0 {
        return Ok(FpMatrix::zeros(m, 0, 0));
    }
    FpMatrix::from_rows(m, rows)
}

impl HModule {
    pub fn to_record(&self) -> HModuleRecord {
        HModuleRecord {
            p: self.modulus().get(),
            dim: self.dim(),
            s0: self.s0.to_rows(),
            s1: self.s1.to_rows(),
            g: self.g.to_rows(),
        }
    }

    /// Parses a record without checking the relations.
    pub fn from_record(r: &HModuleRecord) -> Result<Self> {
        let m = Modulus::new(r.p)?;
        HModule::new_unchecked(
            matrix_from_record(m, r.dim, &r.s0, "S0")?,
            matrix_from_record(m, r.dim, &r.s1, "S1")?,
            matrix_from_record(m, r.dim, &r.g, "G")?,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("plain data")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: HModuleRecord = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        HModule::from_record(&r)
    }
}

impl HTModule {
    pub fn to_record(&self) -> HTModuleRecord {
        HTModuleRecord {
            p: self.modulus().get(),
            dim: self.dim(),
            x: self.x.to_rows(),
            g: self.g.to_rows(),
        }
    }

    pub fn from_record(r: &HTModuleRecord) -> Result<Self> {
        let m = Modulus::new(r.p)?;
        HTModule::new_unchecked(
            matrix_from_record(m, r.dim, &r.x, "X")?,
            matrix_from_record(m, r.dim, &r.g, "G")?,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("plain data")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: HTModuleRecord = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        HTModule::from_record(&r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn sign_character_is_valid() {
        // scalar check: (-1)^2 = (-1) * c with c acting by p - 1 = -1
        let m = make_character_module(HCharacterKind::Sign, p(5)).unwrap();
        assert!(m.verify_relations().is_empty());
        assert_eq!(m.s0().get(0, 0), 4);
        assert_eq!(m.s1().get(0, 0), 4);
        assert_eq!(m.g().get(0, 0), 1);
    }

    #[test]
    fn trivial_character_is_valid() {
        let m = make_character_module(HCharacterKind::Trivial, p(5)).unwrap();
        assert!(m.verify_relations().is_empty());
        assert!(m.s0().is_zero() && m.s1().is_zero());
    }

    #[test]
    fn supersingular_characters() {
        let m = make_character_module(HCharacterKind::Supersingular { a0: 0, a1: -1, e: 0 }, p(5)).unwrap();
        assert!(m.verify_relations().is_empty());
        assert_eq!((m.s0().get(0, 0), m.s1().get(0, 0), m.g().get(0, 0)), (0, 4, 1));
        for modulus in [p(5), p(7)] {
            for kind in HCharacterKind::supersingular_kinds(modulus) {
                let m = make_character_module(kind, modulus).unwrap();
                assert!(m.verify_relations().is_empty(), "{kind}");
            }
        }
    }

    #[test]
    fn nonzero_hecke_values_need_trivial_omega() {
        let bad = HCharacterKind::Supersingular { a0: 0, a1: -1, e: 2 };
        assert!(make_character_module(bad, p(5)).is_err());
        // Built raw, the quadratic relation is what fails: c acts by 0.
        let (s0, s1, g) = bad.raw_values(p(5));
        let one = |v| FpMatrix::new(p(5), 1, 1, &[v]).unwrap();
        let raw = HModule::new_unchecked(one(s0), one(s1), one(g)).unwrap();
        assert_eq!(raw.verify_relations(), vec![Relation::QuadraticS1]);
        assert!(make_character_module(HCharacterKind::Supersingular { a0: -1, a1: -1, e: 0 }, p(5)).is_err());
    }

    #[test]
    fn exhaustive_one_dimensional_modules() {
        // Every 1-dim H-module over F_5 and F_7 is one of the built-in kinds.
        for modulus in [p(5), p(7)] {
            let mut built: Vec<(u32, u32, u32)> = [HCharacterKind::Trivial, HCharacterKind::Sign]
                .into_iter()
                .chain(HCharacterKind::supersingular_kinds(modulus))
                .map(|k| {
                    let m = make_character_module(k, modulus).unwrap();
                    (m.s0().get(0, 0), m.s1().get(0, 0), m.g().get(0, 0))
                })
                .collect();
            built.sort();
            let mut found = Vec::new();
            for a in 0..modulus.get() {
                for b in 0..modulus.get() {
                    for g in 1..modulus.get() {
                        let one = |v: u32| FpMatrix::new(modulus, 1, 1, &[v as i64]).unwrap();
                        let m = HModule::new_unchecked(one(a), one(b), one(g)).unwrap();
                        if m.verify_relations().is_empty() {
                            found.push((a, b, g));
                        }
                    }
                }
            }
            found.sort();
            assert_eq!(found, built);
        }
    }

    #[test]
    fn corrupt_module_fails() {
        let one = |v| FpMatrix::new(p(5), 1, 1, &[v]).unwrap();
        let m = HModule::new_unchecked(one(2), one(0), one(1)).unwrap();
        assert!(m.verify_relations().contains(&Relation::QuadraticS0));
        assert!(HModule::new(one(2), one(0), one(1)).is_err());
    }

    #[test]
    fn char_ops_examples() {
        let m5 = p(5);
        let rho = SmoothCharacter::rho_bar(m5);
        assert_eq!(rho.inverse_times_alpha(), rho);
        assert_eq!(
            SmoothCharacter::trivial(m5).inverse_times_alpha(),
            SmoothCharacter::alpha_bar(m5)
        );
        let chi = SmoothCharacter::new(m5, 2, 3).unwrap();
        assert_eq!(chi.inverse_times_alpha(), SmoothCharacter::new(m5, 3, 3).unwrap());
        assert_eq!(rho.mul(&rho).unwrap(), SmoothCharacter::alpha_bar(m5));
        assert!(SmoothCharacter::new(m5, 0, 1).is_err());
        assert!(rho.mul(&SmoothCharacter::rho_bar(p(7))).is_err());
    }

    #[test]
    fn char_group_laws_exhaustive() {
        let m5 = p(5);
        let all: Vec<_> = SmoothCharacter::all(m5).collect();
        assert_eq!(all.len(), 16);
        let one = SmoothCharacter::trivial(m5);
        for a in &all {
            assert_eq!(a.mul(&one).unwrap(), *a);
            assert_eq!(a.mul(&a.inverse()).unwrap(), one);
            assert_eq!(a.inverse_times_alpha().inverse_times_alpha(), *a);
            for b in &all {
                for c in &all {
                    let l = a.mul(b).unwrap().mul(c).unwrap();
                    let r = a.mul(&b.mul(c).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn positive_part() {
        let u = |k| {
            restrict_to_ht_positive(&make_character_module(k, p(5)).unwrap())
                .u
                .get(0, 0)
        };
        assert_eq!(u(HCharacterKind::Sign), 1);
        assert_eq!(u(HCharacterKind::Trivial), 0);
        assert_eq!(u(HCharacterKind::Supersingular { a0: 0, a1: -1, e: 0 }), 0);
    }

    #[test]
    fn ht_module_invariants() {
        let m5 = p(5);
        for chi in SmoothCharacter::all(m5) {
            let m = chi.to_module();
            assert!(m.violations().unwrap().is_empty());
            assert_eq!(m.as_character(), Some(chi));
        }
        let x = FpMatrix::scalar(m5, 1, 0);
        let g = FpMatrix::scalar(m5, 1, 1);
        assert!(HTModule::new(x, g).is_err());
        let chain = HTModule::chain(&SmoothCharacter::rho_bar(m5), 3);
        assert!(chain.violations().unwrap().is_empty());
    }

    #[test]
    fn record_round_trip() {
        let m = make_character_module(HCharacterKind::Sign, p(7)).unwrap();
        let json = m.to_json();
        assert_eq!(json, r#"{"p":7,"dim":1,"S0":[[6]],"S1":[[6]],"G":[[1]]}"#);
        assert_eq!(HModule::from_json(&json).unwrap(), m);
        let t = HTModule::chain(&SmoothCharacter::new(p(7), 3, 2).unwrap(), 2);
        assert_eq!(HTModule::from_json(&t.to_json()).unwrap(), t);
        assert_eq!(HTModule::zero(p(5)).to_json(), r#"{"p":5,"dim":0,"X":[],"G":[]}"#);
        assert!(HModule::from_json(r#"{"p":4,"dim":0,"S0":[],"S1":[],"G":[]}"#).is_err());
        assert!(HModule::from_json(r#"{"p":5,"dim":2,"S0":[[1]],"S1":[],"G":[]}"#).is_err());
    }
}
