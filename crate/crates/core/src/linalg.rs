//! Dense exact linear algebra over F_p.
//!
//! Two conventions coexist and are kept apart by name:
//!
//! * [`FpMatrix::kernel`] and [`solve_linear`] use column vectors (`A x = b`).
//! * Everything that talks about modules ([`fitting_split`],
//!   [`FpMatrix::restrict_to`], [`intertwiner_space`]) uses row vectors acted on
//!   from the right (`v -> v A`), matching right modules.
//!
//! Sets of vectors are returned as matrices whose *rows* are the vectors.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fp, Modulus};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    modulus: Modulus,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Output of [`FpMatrix::rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    /// Builds a matrix from row-major integer entries, reducing them mod p.
    pub fn new(modulus: Modulus, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(FpMatrix {
            modulus,
            rows,
            cols,
            data: entries.iter().map(|&x| modulus.reduce(x)).collect(),
        })
    }

    pub fn from_rows<R: AsRef<[i64]>>(modulus: Modulus, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.as_ref().len() != cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            entries.extend_from_slice(r.as_ref());
        }
        FpMatrix::new(modulus, rows.len(), cols, &entries)
    }

    pub fn zeros(modulus: Modulus, rows: usize, cols: usize) -> Self {
        FpMatrix {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(modulus: Modulus, n: usize) -> Self {
        Self::scalar(modulus, n, 1)
    }

    pub fn scalar(modulus: Modulus, n: usize, c: u32) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        let c = c % modulus.get();
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    /// Matrix with `u` on the diagonal and `1` on the superdiagonal.
    pub fn jordan_block(modulus: Modulus, n: usize, u: u32) -> Self {
        let mut m = Self::scalar(modulus, n, u);
        for i in 1..n {
            m.data[(i - 1) * n + i] = 1;
        }
        m
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.modulus.get();
    }

    pub fn entry(&self, i: usize, j: usize) -> Fp {
        Fp::new(self.get(i, j) as i64, self.modulus)
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    /// Entries as nested rows of integers in `0..p`.
    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|&x| x as i64).collect())
            .collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn same_modulus(&self, other: &FpMatrix) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(self.modulus.get(), other.modulus.get()))
        }
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.same_modulus(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.modulus.get() as u64;
        let mut out = FpMatrix::zeros(self.modulus, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = ((out.data[idx] as u64 + a * other.get(k, j) as u64) % p) as u32;
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &FpMatrix, f: impl Fn(u32, u32) -> u32) -> Result<FpMatrix> {
        self.same_modulus(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(FpMatrix {
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
            ..self.clone()
        })
    }

    pub fn add(&self, other: &FpMatrix) -> Result<FpMatrix> {
        let m = self.modulus;
        self.zip_with(other, |a, b| m.add(a, b))
    }

    pub fn sub(&self, other: &FpMatrix) -> Result<FpMatrix> {
        let m = self.modulus;
        self.zip_with(other, |a, b| m.sub(a, b))
    }

    pub fn scale(&self, c: u32) -> FpMatrix {
        let m = self.modulus;
        FpMatrix {
            data: self.data.iter().map(|&a| m.mul(a, c % m.get())).collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> FpMatrix {
        let m = self.modulus;
        FpMatrix {
            data: self.data.iter().map(|&a| m.neg(a)).collect(),
            ..self.clone()
        }
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.modulus, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    pub fn pow(&self, mut exp: u64) -> Result<FpMatrix> {
        let n = self.require_square()?;
        let mut acc = FpMatrix::identity(self.modulus, n);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn rref(&self) -> Rref {
        let m = self.modulus;
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(pr) = (r..a.rows).find(|&i| a.get(i, c) != 0) else {
                continue;
            };
            a.swap_rows(r, pr);
            let inv = m.inv(a.get(r, c)).expect("nonzero pivot");
            for j in 0..a.cols {
                let v = m.mul(a.get(r, j), inv);
                a.data[r * a.cols + j] = v;
            }
            for i in 0..a.rows {
                if i == r {
                    continue;
                }
                let f = a.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in 0..a.cols {
                    let v = m.sub(a.get(i, j), m.mul(f, a.get(r, j)));
                    a.data[i * a.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            matrix: a,
            rank: r,
            pivots,
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis (as rows) of `{x : A x = 0}`.
    pub fn kernel(&self) -> FpMatrix {
        let Rref { matrix, pivots, .. } = self.rref();
        null_space_from_rref(&matrix, &pivots, self.cols)
    }

    /// Basis (as rows) of `{v : v A = 0}`.
    pub fn left_kernel(&self) -> FpMatrix {
        self.transpose().kernel()
    }

    /// Canonical basis (as rows) of the row space: the nonzero rows of the RREF.
    pub fn row_space(&self) -> FpMatrix {
        let Rref { matrix, rank, .. } = self.rref();
        matrix.take_rows(0..rank)
    }

    pub fn take_rows(&self, range: std::ops::Range<usize>) -> FpMatrix {
        FpMatrix {
            modulus: self.modulus,
            rows: range.len(),
            cols: self.cols,
            data: self.data[range.start * self.cols..range.end * self.cols].to_vec(),
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.modulus, rows.len(), cols.len());
        for (oi, i) in rows.enumerate() {
            for (oj, j) in cols.clone().enumerate() {
                out.data[oi * out.cols + oj] = self.get(i, j);
            }
        }
        out
    }

    pub fn inverse(&self) -> Result<FpMatrix> {
        let n = self.require_square()?;
        let aug = hstack(self, &FpMatrix::identity(self.modulus, n))?;
        let r = aug.rref();
        if r.pivots.iter().take(n).copied().ne(0..n) || r.rank < n {
            return Err(Error::Singular);
        }
        Ok(r.matrix.submatrix(0..n, n..2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Writes each row of `vectors` in terms of the rows of `basis` (assumed
    /// linearly independent). Returns `None` if some row is outside the span.
    pub fn express_in_basis(basis: &FpMatrix, vectors: &FpMatrix) -> Result<Option<FpMatrix>> {
        basis.same_modulus(vectors)?;
        if basis.cols != vectors.cols {
            return Err(Error::DimensionMismatch("vector length differs from basis".into()));
        }
        let k = basis.rows;
        if k == 0 {
            return Ok(vectors
                .is_zero()
                .then(|| FpMatrix::zeros(basis.modulus, vectors.rows, 0)));
        }
        // Solve basis^T * c = v^T for every v at once.
        let aug = hstack(&basis.transpose(), &vectors.transpose())?;
        let r = aug.rref();
        if r.pivots.iter().any(|&c| c >= k) {
            return Ok(None);
        }
        if r.rank != k {
            return Err(Error::DimensionMismatch("basis rows are linearly dependent".into()));
        }
        Ok(Some(r.matrix.submatrix(0..k, k..k + vectors.rows).transpose()))
    }

    /// Matrix of `v -> v A` on the subspace spanned by the rows of `basis`,
    /// i.e. the `R` with `basis * A = R * basis`. `None` if the subspace is not
    /// invariant.
    pub fn restrict_to(&self, basis: &FpMatrix) -> Result<Option<FpMatrix>> {
        self.require_square()?;
        let image = basis.mul(self)?;
        FpMatrix::express_in_basis(basis, &image)
    }

    /// Whether the matrix is diagonalizable with all eigenvalues in F_p.
    pub fn is_split_semisimple(&self) -> Result<bool> {
        let n = self.require_square()?;
        let total: usize = (0..self.modulus.get())
            .map(|lambda| self.eigenspace(lambda).map(|e| e.rows))
            .sum::<Result<usize>>()?;
        Ok(total == n)
    }

    /// Basis (as rows) of `{v : v A = lambda v}`.
    pub fn eigenspace(&self, lambda: u32) -> Result<FpMatrix> {
        let n = self.require_square()?;
        Ok(self.sub(&FpMatrix::scalar(self.modulus, n, lambda))?.left_kernel())
    }

    /// Basis (as rows) of `{v : v (A - lambda)^n = 0}`.
    pub fn generalized_eigenspace(&self, lambda: u32) -> Result<FpMatrix> {
        let n = self.require_square()?;
        Ok(self
            .sub(&FpMatrix::scalar(self.modulus, n, lambda))?
            .pow(n as u64)?
            .left_kernel())
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FpMatrix(p={}, {}x{}) {:?}",
            self.modulus,
            self.rows,
            self.cols,
            self.to_rows()
        )
    }
}

fn null_space_from_rref(r: &FpMatrix, pivots: &[usize], cols: usize) -> FpMatrix {
    let m = r.modulus;
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut out = FpMatrix::zeros(m, free.len(), cols);
    for (k, &f) in free.iter().enumerate() {
        out.data[k * cols + f] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            out.data[k * cols + pc] = m.neg(r.get(row, f));
        }
    }
    out
}

pub fn hstack(a: &FpMatrix, b: &FpMatrix) -> Result<FpMatrix> {
    a.same_modulus(b)?;
    if a.rows != b.rows {
        return Err(Error::DimensionMismatch("hstack row counts differ".into()));
    }
    let mut out = FpMatrix::zeros(a.modulus, a.rows, a.cols + b.cols);
    for i in 0..a.rows {
        let dst = &mut out.data[i * (a.cols + b.cols)..(i + 1) * (a.cols + b.cols)];
        dst[..a.cols].copy_from_slice(a.row(i));
        dst[a.cols..].copy_from_slice(b.row(i));
    }
    Ok(out)
}

pub fn vstack(a: &FpMatrix, b: &FpMatrix) -> Result<FpMatrix> {
    a.same_modulus(b)?;
    if a.cols != b.cols {
        return Err(Error::DimensionMismatch("vstack column counts differ".into()));
    }
    let mut data = a.data.clone();
    data.extend_from_slice(&b.data);
    Ok(FpMatrix {
        modulus: a.modulus,
        rows: a.rows + b.rows,
        cols: a.cols,
        data,
    })
}

/// `[[a, 0], [lower, b]]`.
pub fn block_lower(a: &FpMatrix, lower: &FpMatrix, b: &FpMatrix) -> Result<FpMatrix> {
    let top = hstack(a, &FpMatrix::zeros(a.modulus, a.rows, b.cols))?;
    let bottom = hstack(lower, b)?;
    vstack(&top, &bottom)
}

pub fn block_diag(a: &FpMatrix, b: &FpMatrix) -> Result<FpMatrix> {
    block_lower(a, &FpMatrix::zeros(a.modulus, b.rows, a.cols), b)
}

/// Solution set of `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Inconsistent,
    Consistent {
        particular: Vec<u32>,
        /// Rows span the null space of `A`.
        kernel: FpMatrix,
    },
}

/// Solves `A x = b` with `b` given as a column matrix.
pub fn solve_linear(a: &FpMatrix, b: &FpMatrix) -> Result<Solution> {
    a.same_modulus(b)?;
    if b.cols != 1 || b.rows != a.rows {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side is {}x{}, expected {}x1",
            b.rows, b.cols, a.rows
        )));
    }
    let r = hstack(a, b)?.rref();
    if r.pivots.last() == Some(&a.cols) {
        return Ok(Solution::Inconsistent);
    }
    let mut particular = vec![0; a.cols];
    for (row, &pc) in r.pivots.iter().enumerate() {
        particular[pc] = r.matrix.get(row, a.cols);
    }
    let reduced = r.matrix.submatrix(0..r.rank, 0..a.cols);
    Ok(Solution::Consistent {
        particular,
        kernel: null_space_from_rref(&reduced, &r.pivots, a.cols),
    })
}

/// Fitting decomposition of a square operator acting on row vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FittingSplit {
    /// Rows span the stable image `V A^n`, where `A` acts invertibly.
    pub invertible: FpMatrix,
    /// Rows span `{v : v A^n = 0}`, where `A` acts nilpotently.
    pub nilpotent: FpMatrix,
}

pub fn fitting_split(a: &FpMatrix) -> Result<FittingSplit> {
    let n = a.require_square()?;
    let power = a.pow(n as u64)?;
    Ok(FittingSplit {
        invertible: power.row_space(),
        nilpotent: power.left_kernel(),
    })
}

/// Basis of `{Phi : M_i Phi = Phi N_i for all i}` for right-module generator
/// matrices `M_i` (d x d) and `N_i` (e x e); each `Phi` is d x e.
pub fn intertwiner_space(gens_m: &[FpMatrix], gens_n: &[FpMatrix]) -> Result<Vec<FpMatrix>> {
    if gens_m.len() != gens_n.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} generators vs {}",
            gens_m.len(),
            gens_n.len()
        )));
    }
    let Some(first) = gens_m.first().or(gens_n.first()) else {
        return Err(Error::DimensionMismatch("no generators given".into()));
    };
    let modulus = first.modulus;
    let d = gens_m[0].rows;
    let e = gens_n[0].rows;
    for (a, b) in gens_m.iter().zip(gens_n) {
        a.same_modulus(b)?;
        a.same_modulus(first)?;
        if !a.is_square() || !b.is_square() || a.rows != d || b.rows != e {
            return Err(Error::DimensionMismatch(
                "generators must be square of uniform size".into(),
            ));
        }
    }
    let unknowns = d * e;
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    let mut system = FpMatrix::zeros(modulus, gens_m.len() * unknowns, unknowns);
    for (g, (a, b)) in gens_m.iter().zip(gens_n).enumerate() {
        for i in 0..d {
            for j in 0..e {
                let eq = g * unknowns + i * e + j;
                // (A Phi)_{ij} = sum_k A_ik Phi_kj
                for k in 0..d {
                    let idx = eq * unknowns + k * e + j;
                    system.data[idx] = modulus.add(system.data[idx], a.get(i, k));
                }
                // -(Phi B)_{ij} = -sum_k Phi_ik B_kj
                for k in 0..e {
                    let idx = eq * unknowns + i * e + k;
                    system.data[idx] = modulus.sub(system.data[idx], b.get(k, j));
                }
            }
        }
    }
    let kernel = system.kernel();
    Ok((0..kernel.rows)
        .map(|r| FpMatrix {
            modulus,
            rows: d,
            cols: e,
            data: kernel.row(r).to_vec(),
        })
        .collect())
}

/// Searches the intertwiner space for an invertible element, i.e. an
/// isomorphism of the modules given by `gens_m` and `gens_n`.
///
/// Small spaces (at most `SEARCH_LIMIT` vectors) are enumerated completely, so a
/// `None` there is exact. Larger spaces are sampled along a fixed pseudo-random
/// sequence and `None` only means nothing was found.
pub fn find_invertible_intertwiner(gens_m: &[FpMatrix], gens_n: &[FpMatrix]) -> Result<Option<FpMatrix>> {
    const SEARCH_LIMIT: u64 = 50_000;
    const SAMPLES: usize = 4_000;
    let basis = intertwiner_space(gens_m, gens_n)?;
    let (d, e) = (gens_m[0].rows, gens_n[0].rows);
    if d != e {
        return Ok(None);
    }
    if d == 0 {
        return Ok(Some(FpMatrix::zeros(gens_m[0].modulus, 0, 0)));
    }
    if basis.is_empty() {
        return Ok(None);
    }
    let modulus = basis[0].modulus;
    let p = modulus.get() as u64;
    let combine = |coeffs: &[u32]| -> Result<FpMatrix> {
        let mut acc = FpMatrix::zeros(modulus, d, e);
        for (c, b) in coeffs.iter().zip(&basis) {
            if *c != 0 {
                acc = acc.add(&b.scale(*c))?;
            }
        }
        Ok(acc)
    };
    let k = basis.len() as u32;
    let total = p.checked_pow(k);
    match total {
        Some(total) if total <= SEARCH_LIMIT => {
            let mut coeffs = vec![0u32; basis.len()];
            for mut idx in 1..total {
                for c in coeffs.iter_mut() {
                    *c = (idx % p) as u32;
                    idx /= p;
                }
                let cand = combine(&coeffs)?;
                if cand.is_invertible() {
                    return Ok(Some(cand));
                }
            }
            Ok(None)
        }
        _ => {
            let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
            let mut coeffs = vec![0u32; basis.len()];
            for _ in 0..SAMPLES {
                for c in coeffs.iter_mut() {
                    state = state
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    *c = ((state >> 33) % p) as u32;
                }
                let cand = combine(&coeffs)?;
                if cand.is_invertible() {
                    return Ok(Some(cand));
                }
            }
            Ok(None)
        }
    }
}
