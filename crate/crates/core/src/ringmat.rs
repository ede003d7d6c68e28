//! Dense matrices over `Z/p` and `Z/p^2` with the canonical forms used to
//! identify codes: reduced row echelon form over the prime field and the
//! Howell normal form over `Z/p^2`.

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Largest prime accepted, so that `p^2` fits in 32 bits and every product of
/// two residues fits in a `u64`.
pub const MAX_PRIME: u64 = 65_521;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A prime `p` together with the working modulus `m`, which is `p` or `p^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus {
    p: u64,
    m: u64,
    // Lemire's constant for remainders of 32-bit values, zero when m does not fit.
    magic: u64,
    // The same constant for p, used as a divisibility test.
    p_magic: u64,
}

impl Modulus {
    fn make(p: u64, m: u64) -> Self {
        let magic = if m <= u64::from(u16::MAX) { u64::MAX / m + 1 } else { 0 };
        Modulus {
            p,
            m,
            magic,
            p_magic: u64::MAX / p + 1,
        }
    }

    fn checked_prime(p: u64) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::InvalidModulus(format!("{p} is not prime")));
        }
        if p > MAX_PRIME {
            return Err(Error::InvalidModulus(format!(
                "prime {p} exceeds the supported bound {MAX_PRIME}"
            )));
        }
        Ok(())
    }

    /// The prime field `F_p`.
    pub fn field(p: u64) -> Result<Self> {
        Self::checked_prime(p)?;
        Ok(Self::make(p, p))
    }

    /// The chain ring `Z/p^2`.
    pub fn square(p: u64) -> Result<Self> {
        Self::checked_prime(p)?;
        Ok(Self::make(p, p * p))
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.m
    }

    #[inline]
    pub fn is_field(&self) -> bool {
        self.m == self.p
    }

    pub fn to_field(self) -> Modulus {
        Self::make(self.p, self.p)
    }

    pub fn to_square(self) -> Modulus {
        Self::make(self.p, self.p * self.p)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.m - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let x = a * b;
        if self.magic != 0 && x <= u64::from(u32::MAX) {
            let low = self.magic.wrapping_mul(x);
            ((u128::from(low) * u128::from(self.m)) >> 64) as u64
        } else {
            x % self.m
        }
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.m as i64) as u64
    }

    /// Inverse of `a` modulo `m`, if `a` is a unit.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let (mut r0, mut r1) = (self.m as i64, (a % self.m) as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 != 1 {
            return None;
        }
        Some(self.reduce(t0))
    }

    /// `p`-adic valuation of a residue; zero has valuation `e` where `m = p^e`.
    #[inline]
    pub fn valuation(&self, a: u64) -> u32 {
        if a == 0 {
            if self.is_field() {
                1
            } else {
                2
            }
        } else if self.divisible_by_p(a) {
            1
        } else {
            0
        }
    }

    /// `a / p`, rounded down.
    #[inline]
    pub fn div_p(&self, a: u64) -> u64 {
        if a <= u64::from(u32::MAX) {
            ((u128::from(self.p_magic) * u128::from(a)) >> 64) as u64
        } else {
            a / self.p
        }
    }

    #[inline]
    pub fn divisible_by_p(&self, a: u64) -> bool {
        if a <= u64::from(u32::MAX) {
            a.wrapping_mul(self.p_magic) <= self.p_magic - 1
        } else {
            a % self.p == 0
        }
    }

    /// `m^k` as an exact integer.
    pub fn pow_big(&self, k: usize) -> BigUint {
        BigUint::from(self.m).pow(k as u32)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}", self.m)
    }
}

/// Row-major dense matrix whose entries are canonical residues in `[0, m)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueMatrix {
    modulus: Modulus,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ResidueMatrix[{} {}x{}]", self.modulus, self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "\n  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl fmt::Display for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl ResidueMatrix {
    pub fn zeros(modulus: Modulus, rows: usize, cols: usize) -> Self {
        ResidueMatrix {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(modulus: Modulus, n: usize) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % modulus.value();
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry modulo `m`.
    pub fn from_rows(modulus: Modulus, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!(
                    "row {i} has length {}, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row.iter().map(|&x| modulus.reduce(x)));
        }
        Ok(ResidueMatrix {
            modulus,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix from rows of residues, reducing modulo `m`.
    pub fn from_residue_rows(modulus: Modulus, cols: usize, rows: &[Vec<u64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!(
                    "row {i} has length {}, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row.iter().map(|&x| x % modulus.value()));
        }
        Ok(ResidueMatrix {
            modulus,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Flat row-major constructor; entries must already be reduced.
    pub fn from_flat(modulus: Modulus, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&x| x >= modulus.value()) {
            return Err(Error::Domain(format!("entry {bad} is not reduced mod {}", modulus.value())));
        }
        Ok(ResidueMatrix {
            modulus,
            rows,
            cols,
            data,
        })
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
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.modulus.value();
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn as_flat(&self) -> &[u64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.modulus, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows || self.modulus != other.modulus {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let md = self.modulus;
        let mut out = Self::zeros(md, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = md.add(out.data[idx], md.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols || self.modulus != other.modulus {
            return Err(Error::Shape("matrix sum of different shapes".into()));
        }
        let md = self.modulus;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| md.add(a, b))
            .collect();
        Ok(ResidueMatrix { data, ..*self })
    }

    pub fn scale(&self, k: u64) -> Self {
        let md = self.modulus;
        let k = k % md.value();
        ResidueMatrix {
            data: self.data.iter().map(|&a| md.mul(a, k)).collect(),
            ..*self
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Reinterprets the entries modulo another modulus of the same prime:
    /// reduces when going from `p^2` to `p`, keeps representatives otherwise.
    pub fn with_modulus(&self, modulus: Modulus) -> Self {
        ResidueMatrix {
            modulus,
            data: self.data.iter().map(|&a| a % modulus.value()).collect(),
            ..*self
        }
    }

    /// Matrix whose column `j` is column `order[j]` of `self`.
    pub fn select_columns(&self, order: &[usize]) -> Self {
        let mut out = Self::zeros(self.modulus, self.rows, order.len());
        for i in 0..self.rows {
            for (j, &c) in order.iter().enumerate() {
                out.data[i * order.len() + j] = self.get(i, c);
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols || self.modulus != other.modulus {
            return Err(Error::Shape("cannot stack matrices of different widths".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(ResidueMatrix {
            modulus: self.modulus,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// `v * self` for a row vector `v`.
    pub fn left_mul_vec(&self, v: &[u64]) -> Vec<u64> {
        let md = self.modulus;
        let mut out = vec![0; self.cols];
        for (i, &a) in v.iter().enumerate().take(self.rows) {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = md.add(*o, md.mul(a, self.get(i, j)));
            }
        }
        out
    }

    /// `self * v^t` as a vector.
    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        let md = self.modulus;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| md.add(acc, md.mul(a, b)))
            })
            .collect()
    }
}

/// Dot product modulo `m`.
#[inline]
pub fn dot(md: Modulus, a: &[u64], b: &[u64]) -> u64 {
    let s: u64 = a.iter().zip(b).map(|(&x, &y)| (x * y) % md.value()).sum();
    s % md.value()
}

/// Reduced row echelon form over a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: ResidueMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn rref_fp(m: &ResidueMatrix) -> Result<Rref> {
    let md = m.modulus();
    if !md.is_field() {
        return Err(Error::InvalidModulus(format!(
            "row reduction needs a prime field, got {md}"
        )));
    }
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.data.clone();
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..cols {
        if top == rows {
            break;
        }
        let Some(pr) = (top..rows).find(|&r| a[r * cols + col] != 0) else {
            continue;
        };
        swap_rows(&mut a, cols, pr, top);
        let inv = md.inv(a[top * cols + col]).expect("nonzero in a field");
        for j in col..cols {
            a[top * cols + j] = md.mul(a[top * cols + j], inv);
        }
        for r in 0..rows {
            if r == top {
                continue;
            }
            let e = a[r * cols + col];
            if e != 0 {
                axpy_rows(md, &mut a, cols, r, top, e, col);
            }
        }
        pivots.push(col);
        top += 1;
    }
    a.truncate(top * cols);
    Ok(Rref {
        matrix: ResidueMatrix {
            modulus: md,
            rows: top,
            cols,
            data: a,
        },
        rank: top,
        pivots,
    })
}

pub fn rank_fp(m: &ResidueMatrix) -> Result<usize> {
    Ok(rref_fp(m)?.rank)
}

#[inline]
fn swap_rows(a: &mut [u64], cols: usize, i: usize, j: usize) {
    if i != j {
        for c in 0..cols {
            a.swap(i * cols + c, j * cols + c);
        }
    }
}

/// `row[dst] -= q * row[src]` on columns `from..`.
#[inline]
fn axpy_rows(md: Modulus, a: &mut [u64], cols: usize, dst: usize, src: usize, q: u64, from: usize) {
    for c in from..cols {
        let s = a[src * cols + c];
        if s != 0 {
            let d = dst * cols + c;
            a[d] = md.sub(a[d], md.mul(q, s));
        }
    }
}

/// Howell normal form of the row span of `m`.
///
/// The result is in echelon form with pivots equal to `1` or `p`, entries
/// above each pivot reduced below the pivot, no zero rows, and the Howell
/// span property: the codewords vanishing on the first `j` coordinates are
/// spanned by the rows whose pivot lies at or after column `j`. Two matrices
/// span the same module exactly when their Howell forms coincide. Over a
/// prime field this is the reduced row echelon form.
pub fn howell_form(m: &ResidueMatrix) -> ResidueMatrix {
    let cols = m.cols();
    let mut a: Vec<u64> = Vec::with_capacity((m.rows() + cols) * cols);
    a.extend_from_slice(&m.data);
    let rows = howell_in_place(m.modulus(), cols, &mut a);
    ResidueMatrix {
        modulus: m.modulus(),
        rows,
        cols,
        data: a,
    }
}

/// Howell form of the rows stored row-major in `a` (entries reduced modulo
/// `md`), computed in place. Returns the number of rows; `a` is truncated to
/// them. Lets hot loops reuse one buffer.
pub fn howell_in_place(md: Modulus, cols: usize, a: &mut Vec<u64>) -> usize {
    let p = md.p();
    let mut rows = if cols == 0 { 0 } else { a.len() / cols };
    let mut top = 0;
    let none = if md.is_field() { 1 } else { 2 };
    for col in 0..cols {
        let mut best: Option<(usize, u32)> = None;
        for r in top..rows {
            let v = md.valuation(a[r * cols + col]);
            if v < none && best.map_or(true, |(_, bv)| v < bv) {
                best = Some((r, v));
                if v == 0 {
                    break;
                }
            }
        }
        let Some((pr, v)) = best else {
            continue;
        };
        swap_rows(a, cols, pr, top);
        let e = a[top * cols + col];
        let (unit, d) = if v == 0 { (e, 1) } else { (md.div_p(e), p) };
        if unit != 1 {
            let inv = md.inv(unit).expect("unit part is invertible");
            for j in col..cols {
                a[top * cols + j] = md.mul(a[top * cols + j], inv);
            }
        }
        debug_assert_eq!(a[top * cols + col], d);
        for r in top + 1..rows {
            let e = a[r * cols + col];
            if e != 0 {
                debug_assert_eq!(e % d, 0);
                let q = if d == 1 { e } else { md.div_p(e) };
                axpy_rows(md, a, cols, r, top, q, col);
            }
        }
        // p times a p-pivot row vanishes at the pivot but may survive further right.
        if d != 1 && a[top * cols + col..(top + 1) * cols].iter().any(|&x| !md.divisible_by_p(x)) {
            for j in 0..cols {
                let x = md.mul(a[top * cols + j], p);
                a.push(x);
            }
            rows += 1;
        }
        top += 1;
    }
    for i in 0..top {
        // Each pivot is the leading entry of its row.
        let c = (0..cols).find(|&j| a[i * cols + j] != 0).expect("pivot rows are nonzero");
        let d = a[i * cols + c];
        for k in 0..i {
            let e = a[k * cols + c];
            let q = if d == 1 { e } else { md.div_p(e) };
            if q != 0 {
                axpy_rows(md, a, cols, k, i, q, c);
            }
        }
    }
    a.truncate(top * cols);
    top
}

/// One solution of an affine system over `F_p` plus a basis of the kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<u64>,
    pub kernel_basis: Vec<Vec<u64>>,
}

impl AffineSolution {
    pub fn dimension(&self) -> usize {
        self.kernel_basis.len()
    }

    /// Number of solutions, `p^dim`.
    pub fn count(&self, p: u64) -> BigUint {
        BigUint::from(p).pow(self.kernel_basis.len() as u32)
    }

    /// The solution with kernel coefficients `coeffs`.
    pub fn member(&self, md: Modulus, coeffs: &[u64]) -> Vec<u64> {
        let mut x = self.particular.clone();
        for (k, &c) in self.kernel_basis.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for (xi, &ki) in x.iter_mut().zip(k) {
                *xi = md.add(*xi, md.mul(c, ki));
            }
        }
        x
    }
}

/// Solves `A x = b` over `F_p`.
pub fn solve_affine_fp(a: &ResidueMatrix, b: &[u64]) -> Result<Option<AffineSolution>> {
    let md = a.modulus();
    if !md.is_field() {
        return Err(Error::InvalidModulus(format!(
            "affine solving needs a prime field, got {md}"
        )));
    }
    if b.len() != a.rows() {
        return Err(Error::Shape(format!(
            "system has {} equations but right-hand side has {} entries",
            a.rows(),
            b.len()
        )));
    }
    let cols = a.cols();
    let mut aug = ResidueMatrix::zeros(md, a.rows(), cols + 1);
    for i in 0..a.rows() {
        for j in 0..cols {
            aug.data[i * (cols + 1) + j] = a.get(i, j);
        }
        aug.data[i * (cols + 1) + cols] = b[i] % md.value();
    }
    let r = rref_fp(&aug)?;
    if r.pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut particular = vec![0; cols];
    for (i, &c) in r.pivots.iter().enumerate() {
        particular[c] = r.matrix.get(i, cols);
    }
    let mut is_pivot = vec![false; cols];
    for &c in &r.pivots {
        is_pivot[c] = true;
    }
    let kernel_basis = (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![0; cols];
            v[f] = 1;
            for (i, &c) in r.pivots.iter().enumerate() {
                v[c] = md.neg(r.matrix.get(i, f));
            }
            v
        })
        .collect();
    Ok(Some(AffineSolution {
        particular,
        kernel_basis,
    }))
}

/// Basis of the right kernel `{x : A x = 0}` over `F_p`.
pub fn kernel_fp(a: &ResidueMatrix) -> Result<Vec<Vec<u64>>> {
    let zero = vec![0; a.rows()];
    Ok(solve_affine_fp(a, &zero)?
        .expect("homogeneous systems are solvable")
        .kernel_basis)
}

/// Iterates over all vectors of `[0, radix)^len` in lexicographic order,
/// the last coordinate varying fastest.
pub(crate) struct Odometer {
    digits: Vec<u64>,
    radix: Vec<u64>,
    done: bool,
}

impl Odometer {
    pub(crate) fn new(radix: Vec<u64>) -> Self {
        let done = radix.iter().any(|&r| r == 0);
        Odometer {
            digits: vec![0; radix.len()],
            radix,
            done,
        }
    }

    pub(crate) fn uniform(radix: u64, len: usize) -> Self {
        Self::new(vec![radix; len])
    }

    /// Current digits, or `None` once exhausted.
    pub(crate) fn current(&self) -> Option<&[u64]> {
        (!self.done).then_some(&self.digits[..])
    }

    pub(crate) fn advance(&mut self) {
        for i in (0..self.digits.len()).rev() {
            self.digits[i] += 1;
            if self.digits[i] < self.radix[i] {
                return;
            }
            self.digits[i] = 0;
        }
        self.done = true;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn fp(p: u64) -> Modulus {
        Modulus::field(p).unwrap()
    }

    fn zp2(p: u64) -> Modulus {
        Modulus::square(p).unwrap()
    }

    fn mat(md: Modulus, rows: &[&[i64]]) -> ResidueMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        ResidueMatrix::from_rows(md, cols, &rows).unwrap()
    }

    /// Every `Z_m`-combination of the rows, by brute force.
    fn span_set(m: &ResidueMatrix) -> HashSet<Vec<u64>> {
        let md = m.modulus();
        let mut out = HashSet::new();
        let mut odo = Odometer::uniform(md.value(), m.rows());
        while let Some(c) = odo.current() {
            out.insert(m.left_mul_vec(c));
            odo.advance();
        }
        if m.rows() == 0 {
            out.insert(vec![0; m.cols()]);
        }
        out
    }

    #[test]
    fn modulus_rejects_composites() {
        assert!(matches!(Modulus::field(4), Err(Error::InvalidModulus(_))));
        assert!(matches!(Modulus::square(1), Err(Error::InvalidModulus(_))));
        assert!(Modulus::square(65_537).is_err());
        assert_eq!(Modulus::square(3).unwrap().value(), 9);
    }

    #[test]
    fn inverse_mod_p_squared() {
        let md = zp2(5);
        for a in 1..25 {
            match md.inv(a) {
                Some(b) => assert_eq!(md.mul(a, b), 1),
                None => assert_eq!(a % 5, 0),
            }
        }
    }

    proptest! {
        #[test]
        fn reduced_arithmetic_matches_integers(
            pi in 0usize..6,
            a in any::<u32>(),
            b in any::<u32>(),
        ) {
            let p = [2u64, 3, 5, 251, 257, 65_521][pi];
            for md in [fp(p), zp2(p)] {
                let (x, y) = (u64::from(a) % md.value(), u64::from(b) % md.value());
                prop_assert_eq!(md.mul(x, y), x * y % md.value());
                prop_assert_eq!(md.div_p(x), x / p);
                prop_assert_eq!(md.divisible_by_p(x), x % p == 0);
            }
        }
    }

    #[test]
    fn rref_examples() {
        let r = rref_fp(&mat(fp(2), &[&[1, 1], &[1, 1]])).unwrap();
        assert_eq!(r.matrix, mat(fp(2), &[&[1, 1]]));
        assert_eq!((r.rank, r.pivots), (1, vec![0]));

        let r = rref_fp(&mat(fp(2), &[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(r.matrix, ResidueMatrix::identity(fp(2), 2));
        assert_eq!((r.rank, r.pivots), (2, vec![0, 1]));

        let r = rref_fp(&mat(fp(3), &[&[1, 2], &[2, 4]])).unwrap();
        assert_eq!(r.matrix, mat(fp(3), &[&[1, 2]]));
        assert_eq!((r.rank, r.pivots), (1, vec![0]));
    }

    #[test]
    fn rref_needs_field() {
        assert!(matches!(
            rref_fp(&mat(zp2(2), &[&[1, 2]])),
            Err(Error::InvalidModulus(_))
        ));
    }

    #[test]
    fn howell_examples() {
        assert_eq!(howell_form(&mat(zp2(3), &[&[2]])), mat(zp2(3), &[&[1]]));
        assert_eq!(howell_form(&mat(zp2(3), &[&[3], &[6]])), mat(zp2(3), &[&[3]]));
        let m = mat(zp2(3), &[&[1, 1], &[0, 3]]);
        let h = howell_form(&m);
        assert_eq!(h, m);
        assert_eq!(span_set(&h), span_set(&m));
        assert_eq!(span_set(&m).len(), 27);
    }

    #[test]
    fn howell_adds_annihilated_rows() {
        // 2 * (2, 1) = (0, 2) must appear explicitly.
        let h = howell_form(&mat(zp2(2), &[&[2, 1]]));
        assert_eq!(h, mat(zp2(2), &[&[2, 1], &[0, 2]]));
    }

    #[test]
    fn howell_of_zero_is_empty() {
        let h = howell_form(&ResidueMatrix::zeros(zp2(3), 3, 4));
        assert_eq!(h.rows(), 0);
        assert_eq!(h.cols(), 4);
    }

    #[test]
    fn solve_examples() {
        let s = solve_affine_fp(&mat(fp(2), &[&[1, 1]]), &[0]).unwrap().unwrap();
        assert_eq!(s.particular, vec![0, 0]);
        assert_eq!(s.kernel_basis, vec![vec![1, 1]]);

        let s = solve_affine_fp(&ResidueMatrix::identity(fp(3), 2), &[1, 2])
            .unwrap()
            .unwrap();
        assert_eq!(s.particular, vec![1, 2]);
        assert!(s.kernel_basis.is_empty());

        assert_eq!(solve_affine_fp(&mat(fp(2), &[&[0, 0]]), &[1]).unwrap(), None);
    }

    #[test]
    fn solve_shape_error() {
        assert!(matches!(
            solve_affine_fp(&mat(fp(2), &[&[1, 1]]), &[0, 1]),
            Err(Error::Shape(_))
        ));
    }

    fn arb_matrix(ps: &'static [u64], square: bool) -> impl Strategy<Value = ResidueMatrix> {
        (prop::sample::select(ps), 0usize..=4, 1usize..=4).prop_flat_map(move |(p, r, c)| {
            let md = if square { zp2(p) } else { fp(p) };
            prop::collection::vec(0..md.value(), r * c)
                .prop_map(move |data| ResidueMatrix::from_flat(md, r, c, data).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn rref_is_idempotent_and_preserves_span(m in arb_matrix(&[2, 3, 5], false)) {
            let r = rref_fp(&m).unwrap();
            prop_assert_eq!(&rref_fp(&r.matrix).unwrap().matrix, &r.matrix);
            prop_assert_eq!(span_set(&r.matrix), span_set(&m));
            prop_assert!(r.pivots.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn howell_is_idempotent_and_preserves_span(m in arb_matrix(&[2, 3], true)) {
            let h = howell_form(&m);
            prop_assert_eq!(&howell_form(&h), &h);
            let s = span_set(&m);
            prop_assert_eq!(&span_set(&h), &s);
            // |C| = prod m / pivot
            let size: u64 = (0..h.rows())
                .map(|i| {
                    let piv = h.row(i).iter().copied().find(|&x| x != 0).unwrap();
                    h.modulus().value() / piv
                })
                .product();
            prop_assert_eq!(size as usize, s.len());
        }

        #[test]
        fn howell_depends_only_on_span(m in arb_matrix(&[2, 3], true), seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let md = m.modulus();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            // Random combinations that include every original row with a unit coefficient.
            let mut rows = m.row_vecs();
            rows.reverse();
            let extra: Vec<Vec<u64>> = (0..2)
                .map(|_| {
                    let c: Vec<u64> = (0..m.rows()).map(|_| rng.gen_range(0..md.value())).collect();
                    m.left_mul_vec(&c)
                })
                .collect();
            for r in rows.iter_mut() {
                let u = loop {
                    let u = rng.gen_range(1..md.value());
                    if u % md.p() != 0 { break u; }
                };
                for x in r.iter_mut() { *x = md.mul(*x, u); }
            }
            rows.extend(extra);
            let shuffled = ResidueMatrix::from_residue_rows(md, m.cols(), &rows).unwrap();
            prop_assert_eq!(howell_form(&shuffled), howell_form(&m));
        }

        #[test]
        fn solve_matches_brute_force(
            p in prop::sample::select(&[2u64, 3][..]),
            rows in 1usize..=4,
            cols in 1usize..=6,
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let md = fp(p);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let data: Vec<u64> = (0..rows * cols).map(|_| rng.gen_range(0..p)).collect();
            let a = ResidueMatrix::from_flat(md, rows, cols, data).unwrap();
            let b: Vec<u64> = (0..rows).map(|_| rng.gen_range(0..p)).collect();
            let mut brute = 0u64;
            let mut odo = Odometer::uniform(p, cols);
            while let Some(x) = odo.current() {
                if a.mul_vec(x) == b { brute += 1; }
                odo.advance();
            }
            match solve_affine_fp(&a, &b).unwrap() {
                None => prop_assert_eq!(brute, 0),
                Some(sol) => {
                    prop_assert_eq!(BigUint::from(brute), sol.count(p));
                    prop_assert_eq!(a.mul_vec(&sol.particular), b.clone());
                    for k in &sol.kernel_basis {
                        let x: Vec<u64> = sol.particular.iter().zip(k).map(|(&s, &t)| md.add(s, t)).collect();
                        prop_assert_eq!(a.mul_vec(&x), b.clone());
                    }
                }
            }
        }
    }
}
