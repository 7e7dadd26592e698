//! Ext groups over `H_T` and between torus representations with trivial
//! `T_1`-action.
//!
//! `H_T = C[X, X^-1] (x) C[Omega]` with `Omega` of order prime to p, so for
//! finite-dimensional `M`, `N` the complex
//!
//! ```text
//! 0 -> Hom_Omega(M, N) --(Phi -> X_M Phi - Phi X_N)--> Hom_Omega(M, N) -> 0
//! ```
//!
//! computes `Ext^0` (kernel) and `Ext^1` (cokernel); higher groups vanish.
//! `Hom_Omega` is the direct sum of the Hom spaces between matching
//! `Omega`-eigencomponents.
//!
//! For representations `sigma`, `kappa` of `T` on which `T_1` acts trivially,
//! `H^0(T_1, kappa) = H^1(T_1, kappa) = kappa` and the spectral sequence
//! collapses: `dim Ext^n_T(sigma, kappa) = e_n + e_{n-1}` with
//! `e_i = dim Ext^i_{H_T}(sigma, kappa)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Modulus;
use crate::hecke::{HTModule, SmoothCharacter};
use crate::linalg::{intertwiner_space, FpMatrix};

/// One block of a [`CharMultiset`]: `multiplicity` copies of the uniserial
/// self-extension of `character` of length `chain`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharEntry {
    pub character: SmoothCharacter,
    pub multiplicity: usize,
    pub chain: usize,
}

/// A finite-length smooth `T`-representation with trivial `T_1`-action,
/// described by its semisimple pieces and at most one kind of chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharMultiset {
    modulus: Modulus,
    entries: Vec<CharEntry>,
}

impl CharMultiset {
    pub fn new(modulus: Modulus, entries: Vec<CharEntry>) -> Result<Self> {
        for e in &entries {
            if e.character.modulus() != modulus {
                return Err(Error::ModulusMismatch(e.character.modulus().get(), modulus.get()));
            }
            if e.multiplicity == 0 || e.chain == 0 {
                return Err(Error::InvalidParameter(
                    "multiplicities and chain lengths must be >= 1".into(),
                ));
            }
        }
        if entries.iter().any(|e| e.chain > 1) && entries.iter().any(|e| e.character != entries[0].character) {
            return Err(Error::InvalidParameter(
                "a chain requires all characters to be equal".into(),
            ));
        }
        // Merge equal blocks so the representation is canonical.
        let mut merged: BTreeMap<(SmoothCharacter, usize), usize> = BTreeMap::new();
        for e in entries {
            *merged.entry((e.character, e.chain)).or_default() += e.multiplicity;
        }
        Ok(CharMultiset {
            modulus,
            entries: merged
                .into_iter()
                .map(|((character, chain), multiplicity)| CharEntry {
                    character,
                    multiplicity,
                    chain,
                })
                .collect(),
        })
    }

    pub fn zero(modulus: Modulus) -> Self {
        CharMultiset {
            modulus,
            entries: Vec::new(),
        }
    }

    pub fn single(chi: SmoothCharacter) -> Self {
        Self::chain(chi, 1)
    }

    pub fn chain(chi: SmoothCharacter, len: usize) -> Self {
        CharMultiset {
            modulus: chi.modulus(),
            entries: vec![CharEntry {
                character: chi,
                multiplicity: 1,
                chain: len.max(1),
            }],
        }
    }

    /// Semisimple sum with the given multiplicities.
    pub fn from_characters(modulus: Modulus, chars: &[SmoothCharacter]) -> Result<Self> {
        let entries = chars
            .iter()
            .map(|&c| CharEntry {
                character: c,
                multiplicity: 1,
                chain: 1,
            })
            .collect();
        CharMultiset::new(modulus, entries)
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn entries(&self) -> &[CharEntry] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Length (= dimension).
    pub fn len(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity * e.chain).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Jordan-Holder factors with multiplicity.
    pub fn composition(&self) -> BTreeMap<SmoothCharacter, usize> {
        let mut out = BTreeMap::new();
        for e in &self.entries {
            *out.entry(e.character).or_default() += e.multiplicity * e.chain;
        }
        out
    }

    /// The `H_T`-module of `T_1`-invariants, i.e. the whole representation.
    pub fn to_module(&self) -> HTModule {
        let mut acc = HTModule::zero(self.modulus);
        for e in &self.entries {
            for _ in 0..e.multiplicity {
                acc = acc
                    .direct_sum(&HTModule::chain(&e.character, e.chain))
                    .expect("same modulus");
            }
        }
        acc
    }

    /// Rows `[u, e, multiplicity, chain]` as used in reports.
    pub fn to_rows(&self) -> Vec<[u32; 4]> {
        self.entries
            .iter()
            .map(|e| [e.character.u(), e.character.e(), e.multiplicity as u32, e.chain as u32])
            .collect()
    }
}

impl fmt::Display for CharMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| {
                let mut s = format!("{},{}", e.character.u(), e.character.e());
                if e.chain > 1 {
                    s.push_str(&format!("^{}", e.chain));
                }
                if e.multiplicity > 1 {
                    s.push_str(&format!("*{}", e.multiplicity));
                }
                s
            })
            .collect();
        f.write_str(&parts.join("+"))
    }
}

impl CharMultiset {
    /// Parses the `Display` syntax: `0`, or blocks `u,e[^chain][*mult]` joined by `+`.
    pub fn parse(modulus: Modulus, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(CharMultiset::zero(modulus));
        }
        let bad = |part: &str| Error::Parse(format!("malformed character block '{part}'"));
        let mut entries = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            let (head, mult) = match part.split_once('*') {
                Some((h, m)) => (h, m.trim().parse::<usize>().map_err(|_| bad(part))?),
                None => (part, 1),
            };
            let (head, chain) = match head.split_once('^') {
                Some((h, c)) => (h, c.trim().parse::<usize>().map_err(|_| bad(part))?),
                None => (head, 1),
            };
            let (u, e) = head.split_once(',').ok_or_else(|| bad(part))?;
            let u: i64 = u.trim().parse().map_err(|_| bad(part))?;
            let e: i64 = e.trim().parse().map_err(|_| bad(part))?;
            let character = SmoothCharacter::new(modulus, u, e)?;
            entries.push(CharEntry {
                character,
                multiplicity: mult,
                chain,
            });
        }
        CharMultiset::new(modulus, entries)
    }
}

/// Dimensions of Ext groups by degree; serialized as `{"0": d0, "1": d1, ...}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExtTable(pub BTreeMap<u32, usize>);

impl ExtTable {
    pub fn get(&self, n: u32) -> usize {
        self.0.get(&n).copied().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }
}

/// `Ext^n_{H_T}` for `n <= 1`, with a basis: homomorphisms for `n = 0`,
/// representatives of cokernel classes for `n = 1`.
#[derive(Debug, Clone)]
pub struct ExtHt {
    pub dim: usize,
    pub basis: Vec<FpMatrix>,
}

fn check_pair(m: &HTModule, n: &HTModule) -> Result<()> {
    if m.modulus() != n.modulus() {
        return Err(Error::ModulusMismatch(m.modulus().get(), n.modulus().get()));
    }
    Ok(())
}

/// The map `Phi -> X_M Phi - Phi X_N` on `Hom_Omega(M, N)`, in the basis of
/// `Hom_Omega` returned alongside.
fn adjoint_difference(m: &HTModule, n: &HTModule) -> Result<(Vec<FpMatrix>, FpMatrix)> {
    check_pair(m, n)?;
    let modulus = m.modulus();
    if m.dim() == 0 || n.dim() == 0 {
        return Ok((Vec::new(), FpMatrix::zeros(modulus, 0, 0)));
    }
    let homs = intertwiner_space(&[m.g().clone()], &[n.g().clone()])?;
    if homs.is_empty() {
        return Ok((homs, FpMatrix::zeros(modulus, 0, 0)));
    }
    let flat_rows: Vec<Vec<i64>> = homs
        .iter()
        .map(|h| h.data().iter().map(|&x| x as i64).collect())
        .collect();
    let basis = FpMatrix::from_rows(modulus, &flat_rows)?;
    let mut images = Vec::with_capacity(homs.len());
    for h in &homs {
        let d = m.x().mul(h)?.sub(&h.mul(n.x())?)?;
        images.push(d.data().iter().map(|&x| x as i64).collect::<Vec<_>>());
    }
    let images = FpMatrix::from_rows(modulus, &images)?;
    // Row i of `coords` gives delta(hom_i) in the hom basis.
    let coords = FpMatrix::express_in_basis(&basis, &images)?
        .ok_or_else(|| Error::InvalidModule("X does not commute with the Omega-action".into()))?;
    Ok((homs, coords))
}

pub fn ext_ht_with_basis(n: u32, m: &HTModule, target: &HTModule) -> Result<ExtHt> {
    let (homs, delta) = adjoint_difference(m, target)?;
    match n {
        0 => {
            // Kernel of delta: coefficient vectors c with c * delta = 0.
            let kernel = delta.left_kernel();
            let basis = (0..kernel.rows())
                .map(|r| combine(&homs, kernel.row(r)))
                .collect::<Result<Vec<_>>>()?;
            Ok(ExtHt {
                dim: basis.len(),
                basis,
            })
        }
        1 => {
            // Complete the image of delta to a basis of Hom_Omega.
            let mut span = delta.row_space();
            let mut basis = Vec::new();
            for (i, h) in homs.iter().enumerate() {
                let mut unit = FpMatrix::zeros(m.modulus(), 1, homs.len());
                unit.set(0, i, 1);
                let grown = crate::linalg::vstack(&span, &unit)?;
                if grown.rank() > span.rows() {
                    span = grown.row_space();
                    basis.push(h.clone());
                }
            }
            Ok(ExtHt {
                dim: basis.len(),
                basis,
            })
        }
        _ => {
            check_pair(m, target)?;
            Ok(ExtHt {
                dim: 0,
                basis: Vec::new(),
            })
        }
    }
}

fn combine(homs: &[FpMatrix], coeffs: &[u32]) -> Result<FpMatrix> {
    let mut acc = FpMatrix::zeros(homs[0].modulus(), homs[0].rows(), homs[0].cols());
    for (h, &c) in homs.iter().zip(coeffs) {
        if c != 0 {
            acc = acc.add(&h.scale(c))?;
        }
    }
    Ok(acc)
}

/// `dim Ext^n_{H_T}(M, N)`.
pub fn ext_ht(n: u32, m: &HTModule, target: &HTModule) -> Result<usize> {
    Ok(ext_ht_with_basis(n, m, target)?.dim)
}

/// `dim Ext^n_T(sigma, kappa)` for trivial-`T_1` representations.
pub fn ext_t(n: u32, sigma: &CharMultiset, kappa: &CharMultiset) -> Result<usize> {
    let (s, k) = (sigma.to_module(), kappa.to_module());
    let e = |i: i64| -> Result<usize> {
        if (0..=1).contains(&i) {
            ext_ht(i as u32, &s, &k)
        } else {
            Ok(0)
        }
    };
    Ok(e(n as i64)? + e(n as i64 - 1)?)
}

pub fn ext_ht_table(m: &HTModule, target: &HTModule) -> Result<ExtTable> {
    Ok(ExtTable(
        (0..=1).map(|n| Ok((n, ext_ht(n, m, target)?))).collect::<Result<_>>()?,
    ))
}

pub fn ext_t_table(sigma: &CharMultiset, kappa: &CharMultiset) -> Result<ExtTable> {
    Ok(ExtTable(
        (0..=2)
            .map(|n| Ok((n, ext_t(n, sigma, kappa)?)))
            .collect::<Result<_>>()?,
    ))
}

/// `dim Ext^0 = dim Ext^1`, which holds for every pair of finite-dimensional
/// modules since both are kernel and cokernel of one square matrix.
pub fn euler_check(m: &HTModule, target: &HTModule) -> Result<bool> {
    Ok(ext_ht(0, m, target)? == ext_ht(1, m, target)?)
}

/// `Omega`-eigencomponents: for each `e` in `0..p-1`, the restriction of `X` to
/// the subspace where `G` acts by `g^e`.
fn omega_components(m: &HTModule) -> Result<Vec<(u32, FpMatrix)>> {
    let modulus = m.modulus();
    let g = modulus.primitive_root();
    let mut out = Vec::new();
    for e in 0..modulus.unit_order() {
        let lambda = modulus.pow(g, e as u64);
        let space = m.g().eigenspace(lambda)?;
        if space.rows() == 0 {
            continue;
        }
        let x = m
            .x()
            .restrict_to(&space)?
            .ok_or_else(|| Error::InvalidModule("X does not preserve an Omega-eigenspace".into()))?;
        out.push((e, x));
    }
    Ok(out)
}

/// Isomorphism of `H_T`-modules. `Omega` acts semisimply, so this reduces to
/// similarity of `X` on each eigencomponent, decided by comparing
/// `dim Hom(A, A)`, `dim Hom(A, B)`, `dim Hom(B, B)` (Byrnes-Gauger).
pub fn is_isomorphic_ht(a: &HTModule, b: &HTModule) -> Result<bool> {
    check_pair(a, b)?;
    if a.dim() != b.dim() {
        return Ok(false);
    }
    let ca = omega_components(a)?;
    let cb = omega_components(b)?;
    if ca.len() != cb.len() || a.dim() != ca.iter().map(|(_, x)| x.rows()).sum::<usize>() {
        return Ok(false);
    }
    for ((ea, xa), (eb, xb)) in ca.iter().zip(&cb) {
        if ea != eb || xa.rows() != xb.rows() {
            return Ok(false);
        }
        let hom = |p: &FpMatrix, q: &FpMatrix| -> Result<usize> {
            Ok(intertwiner_space(std::slice::from_ref(p), std::slice::from_ref(q))?.len())
        };
        let (aa, ab, bb) = (hom(xa, xa)?, hom(xa, xb)?, hom(xb, xb)?);
        if aa != ab || ab != bb {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Jordan-Holder factors, or `None` if some factor is not a character over F_p.
pub fn composition_factors(m: &HTModule) -> Result<Option<BTreeMap<SmoothCharacter, usize>>> {
    let modulus = m.modulus();
    let mut out = BTreeMap::new();
    let mut total = 0;
    for (e, x) in omega_components(m)? {
        for u in 1..modulus.get() {
            let k = x.generalized_eigenspace(u)?.rows();
            if k > 0 {
                out.insert(SmoothCharacter::new(modulus, u as i64, e as i64)?, k);
                total += k;
            }
        }
    }
    Ok((total == m.dim()).then_some(out))
}
