//! Parabolic induction `H_T -> H`, its right adjoint, and the duality twist.
//!
//! Induction embeds the positive part of `H_T` by sending `diag(1/p, p)` to
//! `T_{s1} T_{s0}` and `T_omega` to itself; on a module `M` the induced module
//! has basis `{m (x) 1, m (x) T_{s1}}`. Writing `C` for the action of
//! `c = sum T_omega` on `M`, the generators act by the block matrices
//!
//! ```text
//! S1 = [[0, 1], [0, C]]   S0 = [[C, 0], [X^-1, 0]]   G = [[G, 0], [0, G^-1]]
//! ```
//!
//! The right adjoint keeps the part of a module on which `U = S1 S0` acts
//! invertibly; `diag(p, 1/p)` then acts by `U^-1`.

use crate::error::{Error, Result};
use crate::field::Modulus;
use crate::hecke::{omega_sum, restrict_to_ht_positive, HModule, HTModule, Relation};
use crate::linalg::{block_diag, block_lower, fitting_split, FpMatrix};

pub fn induce(m: &HTModule) -> Result<HModule> {
    let problems = m.violations()?;
    if !problems.is_empty() {
        return Err(Error::InvalidModule(problems.join("; ")));
    }
    let modulus = m.modulus();
    let d = m.dim();
    let c = omega_sum(m.g())?;
    let x_inv = m.x().inverse()?;
    let g_inv = m.g().inverse()?;
    let zero = FpMatrix::zeros(modulus, d, d);
    let one = FpMatrix::identity(modulus, d);

    // [[a, b], [c, d]] assembled from blocks
    let blocks = |a: &FpMatrix, b: &FpMatrix, c: &FpMatrix, dd: &FpMatrix| -> Result<FpMatrix> {
        let top = crate::linalg::hstack(a, b)?;
        let bottom = crate::linalg::hstack(c, dd)?;
        crate::linalg::vstack(&top, &bottom)
    };
    let s1 = blocks(&zero, &one, &zero, &c)?;
    let s0 = blocks(&c, &zero, &x_inv, &zero)?;
    let g = block_diag(m.g(), &g_inv)?;
    HModule::new_unchecked(s0, s1, g)
}

/// `R(M)` together with the embedding of its underlying space into `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjointPart {
    pub module: HTModule,
    /// Rows are a basis of the invertible part of `U` inside `M`.
    pub basis: FpMatrix,
}

pub fn right_adjoint_with_basis(m: &HModule) -> Result<AdjointPart> {
    let pos = restrict_to_ht_positive(m);
    let basis = fitting_split(&pos.u)?.invertible;
    if basis.rows() == 0 {
        return Ok(AdjointPart {
            module: HTModule::zero(m.modulus()),
            basis,
        });
    }
    let not_stable = || Error::InvalidModule("invertible part of U is not G-stable".into());
    let u = pos.u.restrict_to(&basis)?.ok_or_else(not_stable)?;
    let g = pos.g.restrict_to(&basis)?.ok_or_else(not_stable)?;
    Ok(AdjointPart {
        module: HTModule::new_unchecked(u.inverse()?, g)?,
        basis,
    })
}

pub fn right_adjoint(m: &HModule) -> Result<HTModule> {
    Ok(right_adjoint_with_basis(m)?.module)
}

/// `R(f)` for an `H`-linear map `f : M -> N` (rows of `M` map to rows of `N`).
pub fn right_adjoint_morphism(f: &FpMatrix, m: &HModule, n: &HModule) -> Result<FpMatrix> {
    let rm = right_adjoint_with_basis(m)?;
    let rn = right_adjoint_with_basis(n)?;
    if f.rows() != m.dim() || f.cols() != n.dim() {
        return Err(Error::DimensionMismatch("morphism shape does not match modules".into()));
    }
    let image = rm.basis.mul(f)?;
    FpMatrix::express_in_basis(&rn.basis, &image)?
        .ok_or_else(|| Error::InvalidModule("map does not preserve the invertible part".into()))
}

/// `M^v = Hom(M, C)` made a right module through the anti-involution
/// `T_s -> c - T_s`, `T_omega -> T_{omega^-1}`: the dual generators are
/// `(C - S_i)^T` and `(G^-1)^T`.
pub fn dualize(m: &HModule) -> Result<HModule> {
    let c = omega_sum(m.g())?;
    HModule::new_unchecked(
        c.sub(m.s0())?.transpose(),
        c.sub(m.s1())?.transpose(),
        m.g().inverse()?.transpose(),
    )
}

/// Extensions `0 -> A -> E -> B -> 0`.
#[derive(Debug, Clone)]
pub struct Ext1 {
    pub dim: usize,
    /// One module per basis class of `Ext^1(B, A)`; each has generators
    /// `[[a_i, 0], [D_i, b_i]]`, so `A` is the span of the first `dim A` rows.
    pub representatives: Vec<HModule>,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
}

/// The module with generators `[[a_i, 0], [d_i, b_i]]`.
pub fn extension_module(a: &HModule, b: &HModule, d: &[FpMatrix; 3]) -> Result<HModule> {
    let ga = a.generators();
    let gb = b.generators();
    HModule::from_generators([
        block_lower(&ga[0], &d[0], &gb[0])?,
        block_lower(&ga[1], &d[1], &gb[1])?,
        block_lower(&ga[2], &d[2], &gb[2])?,
    ])
}

fn unflatten(modulus: Modulus, rows: usize, cols: usize, v: &[u32]) -> [FpMatrix; 3] {
    let block = rows * cols;
    let mk = |t: usize| {
        let entries: Vec<i64> = v[t * block..(t + 1) * block].iter().map(|&x| x as i64).collect();
        FpMatrix::new(modulus, rows, cols, &entries).expect("sized")
    };
    [mk(0), mk(1), mk(2)]
}

pub fn ext1_h_modules(a: &HModule, b: &HModule) -> Result<Ext1> {
    if a.modulus() != b.modulus() {
        return Err(Error::ModulusMismatch(a.modulus().get(), b.modulus().get()));
    }
    let modulus = a.modulus();
    let (da, db) = (a.dim(), b.dim());
    let block = da * db;
    if block == 0 {
        return Ok(Ext1 {
            dim: 0,
            representatives: Vec::new(),
            cocycle_dim: 0,
            coboundary_dim: 0,
        });
    }
    let unknowns = 3 * block;

    // The lower-left block of every relation residual is linear in D, so the
    // cocycle condition is read off column by column from unit perturbations.
    let nrel = Relation::ALL.len();
    let mut system = FpMatrix::zeros(modulus, nrel * block, unknowns);
    for k in 0..unknowns {
        let mut unit = vec![0u32; unknowns];
        unit[k] = 1;
        let d = unflatten(modulus, db, da, &unit);
        let e = extension_module(a, b, &d)?;
        for (r, rel) in Relation::ALL.iter().enumerate() {
            let res = rel.residual(e.s0(), e.s1(), e.g())?;
            for i in 0..db {
                for j in 0..da {
                    system.set(r * block + i * da + j, k, res.get(da + i, j));
                }
            }
        }
    }
    let cocycles = system.kernel();

    // Coboundaries: D_i = Phi a_i - b_i Phi.
    let ga = a.generators();
    let gb = b.generators();
    let mut coboundary_rows = Vec::with_capacity(block);
    for i in 0..db {
        for j in 0..da {
            let mut phi = FpMatrix::zeros(modulus, db, da);
            phi.set(i, j, 1);
            let mut row = Vec::with_capacity(unknowns);
            for t in 0..3 {
                let delta = phi.mul(&ga[t])?.sub(&gb[t].mul(&phi)?)?;
                row.extend(delta.data().iter().map(|&x| x as i64));
            }
            coboundary_rows.push(row);
        }
    }
    let coboundaries = FpMatrix::from_rows(modulus, &coboundary_rows)?;
    let mut span = coboundaries.row_space();
    let coboundary_dim = span.rows();

    let mut representatives = Vec::new();
    for r in 0..cocycles.rows() {
        let candidate = cocycles.take_rows(r..r + 1);
        let grown = crate::linalg::vstack(&span, &candidate)?;
        if grown.rank() > span.rows() {
            span = grown.row_space();
            let d = unflatten(modulus, db, da, candidate.row(0));
            representatives.push(extension_module(a, b, &d)?);
        }
    }
    Ok(Ext1 {
        dim: representatives.len(),
        representatives,
        cocycle_dim: cocycles.rows(),
        coboundary_dim,
    })
}
