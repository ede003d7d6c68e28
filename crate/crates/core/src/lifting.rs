//! Self-orthogonal and even codes over `Z/p^2` with prescribed residue and
//! torsion.
//!
//! After a column permutation the residue `C1` has generator `[I | A]` and
//! the torsion `C2` has generator `[I A; 0 B]`. Every code with that residue
//! and torsion is generated by `[I | A + pN; 0 | pB]` for some `N` over
//! `F_p`, and self-orthogonality (or evenness for `p = 2`) becomes an affine
//! condition on `N`. The solution set is computed once with
//! [`solve_affine_fp`] on the flattened unknowns, and codes are produced by
//! walking it.

use num_bigint::BigUint;

use crate::code::{CodeZp2, FpCode};
use crate::error::{Error, Result};
use crate::ringmat::{
    rank_fp, solve_affine_fp, Modulus, Odometer, ResidueMatrix,
};

fn shapes_match(a: &ResidueMatrix, n: &ResidueMatrix) -> Result<()> {
    if a.rows() != n.rows() || a.cols() != n.cols() || a.modulus() != n.modulus() {
        return Err(Error::Shape(format!(
            "A is {}x{} but N is {}x{}",
            a.rows(),
            a.cols(),
            n.rows(),
            n.cols()
        )));
    }
    if !a.modulus().is_field() {
        return Err(Error::InvalidModulus("matrix maps act over F_p".into()));
    }
    Ok(())
}

fn require_binary(md: Modulus, what: &str) -> Result<()> {
    if md.p() != 2 {
        return Err(Error::Domain(format!("{what} is defined in characteristic 2 only")));
    }
    Ok(())
}

/// `N -> A N^t + N A^t`.
pub fn psi_map(a: &ResidueMatrix, n: &ResidueMatrix) -> Result<ResidueMatrix> {
    shapes_match(a, n)?;
    let ant = a.mul(&n.transpose())?;
    ant.add(&ant.transpose())
}

/// `N -> A N^t + N A^t + Diag(A N^t)` over `F_2`.
pub fn phi_map(a: &ResidueMatrix, n: &ResidueMatrix) -> Result<ResidueMatrix> {
    shapes_match(a, n)?;
    require_binary(a.modulus(), "Phi_A")?;
    let ant = a.mul(&n.transpose())?;
    let mut out = ant.add(&ant.transpose())?;
    for i in 0..out.rows() {
        let v = out.get(i, i) + ant.get(i, i);
        out.set(i, i, v);
    }
    Ok(out)
}

/// `N -> 1 N^t`, the row sums of `N` over `F_2`.
pub fn alpha_map(n: &ResidueMatrix) -> Result<Vec<u64>> {
    require_binary(n.modulus(), "alpha")?;
    Ok((0..n.rows()).map(|i| n.row(i).iter().sum::<u64>() % 2).collect())
}

/// Which linear map of `M_{m x n}(F_p)` to assemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixMap {
    Psi,
    Phi,
    PhiAlpha,
}

/// Matrix of the map on row-major flattened `N`, one output coordinate per row.
fn assemble(which: MatrixMap, a: &ResidueMatrix) -> Result<ResidueMatrix> {
    let md = a.modulus();
    let (m, n) = (a.rows(), a.cols());
    let out_len = match which {
        MatrixMap::PhiAlpha => m * m + m,
        _ => m * m,
    };
    let mut coeff = ResidueMatrix::zeros(md, out_len, m * n);
    for u in 0..m * n {
        let mut e = ResidueMatrix::zeros(md, m, n);
        e.set(u / n, u % n, 1);
        let image = match which {
            MatrixMap::Psi => psi_map(a, &e)?,
            MatrixMap::Phi | MatrixMap::PhiAlpha => phi_map(a, &e)?,
        };
        for (k, &x) in image.as_flat().iter().enumerate() {
            coeff.set(k, u, x);
        }
        if which == MatrixMap::PhiAlpha {
            for (i, x) in alpha_map(&e)?.into_iter().enumerate() {
                coeff.set(m * m + i, u, x);
            }
        }
    }
    Ok(coeff)
}

/// Image and kernel sizes of one of the matrix maps for a full-rank `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageCheck {
    pub map: MatrixMap,
    pub image_size: BigUint,
    pub kernel_size: BigUint,
    /// `|Sym_m|`, `|Alt_m|` or `|Sym_m| * p^m`, whichever the map should hit.
    pub expected_image: BigUint,
    /// Every image vector lies in the expected target space.
    pub image_in_target: bool,
}

impl ImageCheck {
    pub fn matches(&self) -> bool {
        self.image_in_target && self.image_size == self.expected_image
    }
}

pub fn image_check(a: &ResidueMatrix, which: MatrixMap) -> Result<ImageCheck> {
    let md = a.modulus();
    let p = md.p();
    let (m, n) = (a.rows(), a.cols());
    if rank_fp(a)? != m {
        return Err(Error::Precondition(format!("A must have full row rank {m}")));
    }
    if which != MatrixMap::Psi {
        require_binary(md, "Phi_A")?;
    }
    if which == MatrixMap::PhiAlpha {
        let rowspace = FpCode::from_matrix(a)?;
        if rowspace.contains_all_ones() {
            return Err(Error::Precondition(
                "the all-ones vector lies in the row space of A".into(),
            ));
        }
    }
    let coeff = assemble(which, a)?;
    let rank = rank_fp(&coeff)?;
    let alternating = which == MatrixMap::Psi && p == 2;
    let image_in_target = (0..coeff.cols()).all(|u| {
        let col: Vec<u64> = (0..m * m).map(|k| coeff.get(k, u)).collect();
        let sq = ResidueMatrix::from_flat(md, m, m, col).expect("m x m");
        sq.is_symmetric() && (!alternating || (0..m).all(|i| sq.get(i, i) == 0))
    });
    let sym = m * (m + 1) / 2;
    let expected_dim = match which {
        MatrixMap::Psi if p == 2 => m * (m.saturating_sub(1)) / 2,
        MatrixMap::Psi | MatrixMap::Phi => sym,
        MatrixMap::PhiAlpha => sym + m,
    };
    let pb = BigUint::from(p);
    Ok(ImageCheck {
        map: which,
        image_size: pb.pow(rank as u32),
        kernel_size: pb.pow((m * n - rank) as u32),
        expected_image: pb.pow(expected_dim as u32),
        image_in_target,
    })
}

/// Column order that brings a residue/torsion pair to standard form.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Frame {
    md: Modulus,
    /// Standard column `j` is original column `order[j]`.
    order: Vec<usize>,
    /// Width of the leading identity block (the residue dimension).
    lead: usize,
}

impl Frame {
    fn new(md: Modulus, n: usize, c1_pivots: &[usize], b_pivots: &[usize]) -> Self {
        let mut order: Vec<usize> = c1_pivots.to_vec();
        order.extend_from_slice(b_pivots);
        order.extend((0..n).filter(|c| !c1_pivots.contains(c) && !b_pivots.contains(c)));
        Frame {
            md,
            order,
            lead: c1_pivots.len(),
        }
    }

    fn n(&self) -> usize {
        self.order.len()
    }

    fn width(&self) -> usize {
        self.n() - self.lead
    }

    fn to_original(&self, std_row: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.n()];
        for (j, &c) in self.order.iter().enumerate() {
            out[c] = std_row[j];
        }
        out
    }

    /// Columns `lead..` of an original-coordinate row, in standard order.
    fn tail(&self, row: &[u64]) -> Vec<u64> {
        self.order[self.lead..].iter().map(|&c| row[c]).collect()
    }
}

/// Which family a solution set parametrises.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Flavor {
    /// Free self-orthogonal lifts `[I | A + pN]`.
    SelfOrthogonal,
    /// Free even lifts `[1 1 1; 0 I A + 2N]` containing the all-ones vector.
    EvenWithOne,
}

/// The affine space of matrices `N` over `F_p` whose lifts satisfy the
/// defining congruences of a family (self-orthogonality, or evenness with
/// the all-ones vector), together with the data to turn each `N` into a code.
#[derive(Clone, Debug)]
pub struct LiftSolutionSet {
    frame: Frame,
    flavor: Flavor,
    base_a: ResidueMatrix,
    particular_n: ResidueMatrix,
    kernel_basis: Vec<ResidueMatrix>,
}

impl LiftSolutionSet {
    /// `A` with integer representatives in `[0, p)`.
    pub fn base_a(&self) -> &ResidueMatrix {
        &self.base_a
    }

    pub fn particular_n(&self) -> &ResidueMatrix {
        &self.particular_n
    }

    pub fn kernel_basis(&self) -> &[ResidueMatrix] {
        &self.kernel_basis
    }

    pub fn dimension(&self) -> usize {
        self.kernel_basis.len()
    }

    pub fn count(&self) -> BigUint {
        BigUint::from(self.frame.md.p()).pow(self.kernel_basis.len() as u32)
    }

    /// Column order used for the standard form: standard column `j` is
    /// original column `column_order()[j]`.
    pub fn column_order(&self) -> &[usize] {
        &self.frame.order
    }

    fn flat_member(&self, directions: &[Vec<u64>], coeffs: &[u64]) -> ResidueMatrix {
        let field = self.particular_n.modulus();
        let mut flat = self.particular_n.as_flat().to_vec();
        for (d, &c) in directions.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for (x, &y) in flat.iter_mut().zip(d) {
                *x = field.add(*x, field.mul(c, y));
            }
        }
        ResidueMatrix::from_flat(field, self.particular_n.rows(), self.particular_n.cols(), flat)
            .expect("same shape")
    }

    /// The member with the given kernel coefficients.
    pub fn member(&self, coeffs: &[u64]) -> ResidueMatrix {
        let dirs: Vec<Vec<u64>> = self.kernel_basis.iter().map(|k| k.as_flat().to_vec()).collect();
        self.flat_member(&dirs, coeffs)
    }

    /// Generator rows over `Z/p^2`, in original coordinates, for a given `N`.
    pub fn generator_rows(&self, n_mat: &ResidueMatrix) -> Vec<Vec<u64>> {
        let md = self.frame.md;
        let p = md.p();
        let lead = self.frame.lead;
        let mut rows = Vec::with_capacity(lead);
        let offset = match self.flavor {
            Flavor::SelfOrthogonal => 0,
            Flavor::EvenWithOne => {
                rows.push(vec![1; self.frame.n()]);
                1
            }
        };
        for i in 0..self.base_a.rows() {
            let mut std_row = vec![0; self.frame.n()];
            std_row[offset + i] = 1;
            for l in 0..self.frame.width() {
                std_row[lead + l] = md.add(self.base_a.get(i, l), md.mul(p, n_mat.get(i, l)));
            }
            rows.push(self.frame.to_original(&std_row));
        }
        rows
    }

    pub fn code_for(&self, n_mat: &ResidueMatrix) -> CodeZp2 {
        let rows = self.generator_rows(n_mat);
        CodeZp2::from_matrix(
            &ResidueMatrix::from_residue_rows(self.frame.md, self.frame.n(), &rows).expect("width n"),
        )
    }

    /// Every member code, kernel coefficients in lexicographic order.
    pub fn codes(&self) -> impl Iterator<Item = CodeZp2> + '_ {
        let dirs: Vec<Vec<u64>> = self.kernel_basis.iter().map(|k| k.as_flat().to_vec()).collect();
        walk(self.frame.md.p(), dirs.len()).map(move |c| self.code_for(&self.flat_member(&dirs, &c)))
    }
}

fn walk(p: u64, len: usize) -> impl Iterator<Item = Vec<u64>> {
    let mut odo = Odometer::uniform(p, len);
    std::iter::from_fn(move || {
        let c = odo.current()?.to_vec();
        odo.advance();
        Some(c)
    })
}

/// All codes with a prescribed residue `C1` and torsion `C2`, parametrised
/// by the free lifts modulo the directions `M B` that only move a free lift
/// inside the same extended code.
#[derive(Clone, Debug)]
pub struct LiftFamily {
    free: LiftSolutionSet,
    directions: Vec<Vec<u64>>,
    torsion_rows: Vec<Vec<u64>>,
    k2: usize,
}

impl LiftFamily {
    /// The free lifts of the residue this family extends.
    pub fn free_lifts(&self) -> &LiftSolutionSet {
        &self.free
    }

    pub fn count(&self) -> BigUint {
        BigUint::from(self.free.frame.md.p()).pow(self.directions.len() as u32)
    }

    pub fn dimension(&self) -> usize {
        self.directions.len()
    }

    /// The rows `p B` in original coordinates.
    pub fn torsion_rows(&self) -> &[Vec<u64>] {
        &self.torsion_rows
    }

    pub fn k2(&self) -> usize {
        self.k2
    }

    pub fn code_at(&self, coeffs: &[u64]) -> CodeZp2 {
        let n_mat = self.free.flat_member(&self.directions, coeffs);
        let mut rows = self.free.generator_rows(&n_mat);
        rows.extend(self.torsion_rows.iter().cloned());
        let md = self.free.frame.md;
        CodeZp2::from_matrix(&ResidueMatrix::from_residue_rows(md, self.free.frame.n(), &rows).expect("width n"))
    }

    /// Every code in the family, lexicographic in the coefficients.
    pub fn codes(&self) -> impl Iterator<Item = CodeZp2> + '_ {
        walk(self.free.frame.md.p(), self.directions.len()).map(move |c| self.code_at(&c))
    }
}

fn check_chain(c1: &FpCode, c2: &FpCode) -> Result<()> {
    if c1.p() != c2.p() || c1.n() != c2.n() {
        return Err(Error::Shape("residue and torsion live in different spaces".into()));
    }
    if !c1.is_subcode_of(c2) {
        return Err(Error::Precondition("residue is not contained in torsion".into()));
    }
    if !c2.is_subcode_of(&c1.dual()) {
        return Err(Error::Precondition(
            "torsion is not contained in the dual of the residue".into(),
        ));
    }
    Ok(())
}

fn check_residue(c1: &FpCode) -> Result<()> {
    if !c1.is_self_orthogonal() {
        return Err(Error::Precondition("residue code is not self-orthogonal".into()));
    }
    if c1.p() == 2 && !c1.is_doubly_even() {
        return Err(Error::Precondition("binary residue code is not doubly even".into()));
    }
    Ok(())
}

/// Pivots and rows of a basis of `C2` modulo `C1`, vanishing on the pivots of `C1`.
fn torsion_complement(c1: &FpCode, c2: &FpCode) -> Result<(Vec<usize>, ResidueMatrix)> {
    let rows: Vec<Vec<u64>> = (0..c2.dim()).map(|i| c1.reduce(c2.basis().row(i))).collect();
    let comp = FpCode::from_rows(c1.modulus(), c1.n(), &rows)?;
    Ok((comp.pivots().to_vec(), comp.basis().clone()))
}

/// `I + A A^t` over the integers, with `A` the representative matrix.
fn gram_plus_identity(a: &ResidueMatrix) -> Vec<Vec<u64>> {
    let k = a.rows();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let s: u64 = a.row(i).iter().zip(a.row(j)).map(|(&x, &y)| x * y).sum();
                    s + u64::from(i == j)
                })
                .collect()
        })
        .collect()
}

fn solve_family(
    frame: Frame,
    flavor: Flavor,
    base_a: ResidueMatrix,
    map: MatrixMap,
    target: Vec<u64>,
) -> Result<LiftSolutionSet> {
    let field = base_a.modulus().to_field();
    let a_field = base_a.with_modulus(field);
    let (k, w) = (a_field.rows(), a_field.cols());
    let coeff = assemble(map, &a_field)?;
    let sol = solve_affine_fp(&coeff, &target)?.ok_or_else(|| {
        Error::Precondition("lift equations are inconsistent for this residue".into())
    })?;
    let to_mat = |v: &[u64]| ResidueMatrix::from_flat(field, k, w, v.to_vec()).expect("k x w");
    Ok(LiftSolutionSet {
        particular_n: to_mat(&sol.particular),
        kernel_basis: sol.kernel_basis.iter().map(|v| to_mat(v)).collect(),
        frame,
        flavor,
        base_a,
    })
}

/// Free self-orthogonal codes over `Z/p^2` whose residue (and torsion) is `C1`.
///
/// `C1` must be self-orthogonal, and doubly even when `p = 2`. There are
/// `p^{k(2n-3k-1)/2}` such codes for odd `p` and `2^{k(2n-3k+1)/2}` for `p = 2`.
pub fn free_so_lifts(c1: &FpCode) -> Result<LiftSolutionSet> {
    check_residue(c1)?;
    free_so_lifts_in_frame(c1, &[])
}

fn free_so_lifts_in_frame(c1: &FpCode, b_pivots: &[usize]) -> Result<LiftSolutionSet> {
    let md = c1.modulus().to_square();
    let p = md.p();
    let frame = Frame::new(md, c1.n(), c1.pivots(), b_pivots);
    let k = c1.dim();
    let a_rows: Vec<Vec<u64>> = (0..k).map(|i| frame.tail(c1.basis().row(i))).collect();
    let base_a = ResidueMatrix::from_residue_rows(md, frame.width(), &a_rows)?;
    let s = gram_plus_identity(&base_a);
    let mut target = Vec::with_capacity(k * k);
    for (i, row) in s.iter().enumerate() {
        for &x in row {
            if x % p != 0 {
                return Err(Error::Precondition("I + AA^t is not divisible by p".into()));
            }
            if p == 2 && x == row[i] && x % 4 != 0 {
                return Err(Error::Precondition("diag(I + AA^t) is not divisible by 4".into()));
            }
            target.push((p - (x / p) % p) % p);
        }
    }
    solve_family(frame, Flavor::SelfOrthogonal, base_a, MatrixMap::Psi, target)
}

fn extend_by_torsion(free: LiftSolutionSet, b: &ResidueMatrix) -> Result<LiftFamily> {
    let md = free.frame.md;
    let p = md.p();
    let field = md.to_field();
    let (k, w) = (free.base_a.rows(), free.frame.width());
    let b_std: Vec<Vec<u64>> = (0..b.rows()).map(|j| free.frame.tail(b.row(j))).collect();
    // Directions N -> N + M B: row i of N shifted by a torsion row.
    let mut span_rows: Vec<Vec<u64>> = Vec::new();
    for i in 0..k {
        for bj in &b_std {
            let mut v = vec![0; k * w];
            v[i * w..(i + 1) * w].copy_from_slice(bj);
            span_rows.push(v);
        }
    }
    let mut span = FpCode::from_rows(field, k * w, &span_rows)?;
    if span.dim() != k * b_std.len() {
        return Err(Error::Precondition("torsion complement is not of full rank".into()));
    }
    let mut directions = Vec::new();
    for kb in &free.kernel_basis {
        let v = kb.as_flat().to_vec();
        if !span.contains(&v) {
            span = span.join(&FpCode::from_rows(field, k * w, &[v.clone()])?)?;
            directions.push(v);
        }
    }
    if span.dim() != free.kernel_basis.len() {
        return Err(Error::Precondition(
            "shift directions M B are not solutions of the homogeneous system".into(),
        ));
    }
    let torsion_rows = b_std
        .iter()
        .map(|bj| {
            let mut std_row = vec![0; free.frame.n()];
            for (l, &x) in bj.iter().enumerate() {
                std_row[free.frame.lead + l] = md.mul(p, x);
            }
            free.frame.to_original(&std_row)
        })
        .collect();
    Ok(LiftFamily {
        k2: b_std.len(),
        free,
        directions,
        torsion_rows,
    })
}

/// All self-orthogonal codes over `Z/p^2` with residue `C1` and torsion `C2`,
/// for `C1 ⊆ C2 ⊆ C1^⊥` (with `C1` doubly even when `p = 2`).
///
/// The family has `p^{k1(2n-3k1-1-2k2)/2}` members for odd `p` and
/// `2^{k1(2n-3k1+1-2k2)/2}` for `p = 2`.
pub fn so_lifts(c1: &FpCode, c2: &FpCode) -> Result<LiftFamily> {
    check_chain(c1, c2)?;
    check_residue(c1)?;
    let (b_pivots, b) = torsion_complement(c1, c2)?;
    let free = free_so_lifts_in_frame(c1, &b_pivots)?;
    extend_by_torsion(free, &b)
}

fn check_even_setting(c1: &FpCode) -> Result<()> {
    if c1.p() != 2 {
        return Err(Error::Domain("even lifts exist over Z/4 only".into()));
    }
    if c1.n() % 8 != 0 {
        return Err(Error::Precondition(format!(
            "length {} is not divisible by 8",
            c1.n()
        )));
    }
    if !c1.is_doubly_even() {
        return Err(Error::Precondition("residue code is not doubly even".into()));
    }
    if !c1.contains_all_ones() {
        return Err(Error::Precondition("residue code does not contain the all-ones vector".into()));
    }
    Ok(())
}

fn free_even_in_frame(c1: &FpCode, b_pivots: &[usize]) -> Result<LiftSolutionSet> {
    let md = c1.modulus().to_square();
    let frame = Frame::new(md, c1.n(), c1.pivots(), b_pivots);
    let k = c1.dim();
    // Basis {1, g_1, .., g_{k-1}}: the RREF rows sum to 1, so it replaces g_0.
    let a_rows: Vec<Vec<u64>> = (1..k).map(|i| frame.tail(c1.basis().row(i))).collect();
    let base_a = ResidueMatrix::from_residue_rows(md, frame.width(), &a_rows)?;
    let field = md.to_field();
    let a_field = base_a.with_modulus(field);
    if FpCode::from_matrix(&a_field)?.contains_all_ones() && frame.width() > 0 {
        return Err(Error::Precondition(
            "the all-ones vector lies in the row space of A".into(),
        ));
    }
    let s = gram_plus_identity(&base_a);
    let m = k - 1;
    let mut target = Vec::with_capacity(m * m + m);
    for i in 0..m {
        for j in 0..m {
            let x = s[i][j];
            let half = if i == j {
                if x % 4 != 0 {
                    return Err(Error::Precondition("diag(I + AA^t) is not divisible by 4".into()));
                }
                x / 2 + x / 4
            } else {
                if x % 2 != 0 {
                    return Err(Error::Precondition("I + AA^t is not divisible by 2".into()));
                }
                x / 2
            };
            target.push(half % 2);
        }
    }
    target.extend(std::iter::repeat(0).take(m));
    solve_family(frame, Flavor::EvenWithOne, base_a, MatrixMap::PhiAlpha, target)
}

/// Free quaternary even codes containing `1` with residue and torsion `C1`.
pub fn free_even_lifts_with_one(c1: &FpCode) -> Result<LiftSolutionSet> {
    check_even_setting(c1)?;
    free_even_in_frame(c1, &[])
}

/// All quaternary even codes containing the all-ones vector with residue
/// `C1` and torsion `C2`: `2^{(k1-1)(2n-3k1-2-2k2)/2}` of them.
pub fn even_lifts_with_one(c1: &FpCode, c2: &FpCode) -> Result<LiftFamily> {
    check_chain(c1, c2)?;
    check_even_setting(c1)?;
    let (b_pivots, b) = torsion_complement(c1, c2)?;
    for j in 0..b.rows() {
        if b.row(j).iter().sum::<u64>() % 2 != 0 {
            return Err(Error::Precondition("torsion row of odd weight".into()));
        }
    }
    let free = free_even_in_frame(c1, &b_pivots)?;
    extend_by_torsion(free, &b)
}

/// Applies a sign pattern to every generator row.
fn flip_signs(c: &CodeZp2, negate: u64) -> CodeZp2 {
    let md = c.modulus();
    let rows: Vec<Vec<u64>> = (0..c.gens().rows())
        .map(|i| {
            c.gens()
                .row(i)
                .iter()
                .enumerate()
                .map(|(j, &x)| if negate >> j & 1 == 1 { md.neg(x) } else { x })
                .collect()
        })
        .collect();
    CodeZp2::from_matrix(&ResidueMatrix::from_residue_rows(md, c.n(), &rows).expect("width n"))
}

/// All quaternary even codes containing a `{±1}^n` vector with residue `C1`
/// and torsion `C2`, sorted by canonical form.
///
/// Built as the union of the sign-change orbits of the codes containing `1`.
pub fn even_lifts_with_pm1(c1: &FpCode, c2: &FpCode) -> Result<Vec<CodeZp2>> {
    let with_one = even_lifts_with_one(c1, c2)?;
    let n = c1.n();
    if n >= 64 {
        return Err(Error::Budget {
            what: "sign patterns".into(),
            needed: format!("2^{n}"),
            limit: "2^63".into(),
        });
    }
    let mut out = std::collections::BTreeSet::new();
    for c in with_one.codes() {
        for negate in 0..(1u64 << n) {
            out.insert(flip_signs(&c, negate));
        }
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{enumerate_fp_codes, intermediate_codes, SweepFilter};
    use std::collections::HashSet;

    fn fpm(p: u64, rows: &[&[i64]]) -> ResidueMatrix {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        ResidueMatrix::from_rows(Modulus::field(p).unwrap(), rows[0].len(), &rows).unwrap()
    }

    fn fpcode(p: u64, rows: &[&[i64]]) -> FpCode {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        FpCode::new(p, rows[0].len(), &rows).unwrap()
    }

    #[test]
    fn psi_examples() {
        let a = fpm(3, &[&[1, 1, 1]]);
        assert_eq!(psi_map(&a, &fpm(3, &[&[1, 0, 0]])).unwrap(), fpm(3, &[&[2]]));
        assert!(psi_map(&a, &fpm(3, &[&[0, 0, 0]])).unwrap().is_zero());
        let a2 = fpm(2, &[&[1, 0, 1], &[0, 1, 1]]);
        let n2 = fpm(2, &[&[1, 1, 0], &[0, 1, 1]]);
        let out = psi_map(&a2, &n2).unwrap();
        assert!(out.is_symmetric() && out.get(0, 0) == 0 && out.get(1, 1) == 0);
        assert!(matches!(psi_map(&a, &fpm(3, &[&[1, 0]])), Err(Error::Shape(_))));
    }

    #[test]
    fn phi_examples() {
        let a = fpm(2, &[&[1, 1]]);
        assert_eq!(phi_map(&a, &fpm(2, &[&[1, 0]])).unwrap(), fpm(2, &[&[1]]));
        assert!(phi_map(&a, &fpm(2, &[&[0, 0]])).unwrap().is_zero());
        let id = ResidueMatrix::identity(Modulus::field(2).unwrap(), 2);
        assert_eq!(
            phi_map(&id, &fpm(2, &[&[0, 1], &[0, 0]])).unwrap(),
            fpm(2, &[&[0, 1], &[1, 0]])
        );
        assert!(matches!(
            phi_map(&fpm(3, &[&[1]]), &fpm(3, &[&[1]])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_map(&fpm(2, &[&[1, 1, 0]])).unwrap(), vec![0]);
        assert_eq!(alpha_map(&fpm(2, &[&[0, 0]])).unwrap(), vec![0]);
        assert_eq!(alpha_map(&fpm(2, &[&[1, 0], &[1, 1]])).unwrap(), vec![1, 0]);
    }

    #[test]
    fn image_check_examples() {
        let a = fpm(3, &[&[1, 0, 2, 1], &[0, 1, 1, 1]]);
        let r = image_check(&a, MatrixMap::Psi).unwrap();
        assert_eq!(r.image_size, BigUint::from(27u32));
        assert_eq!(r.kernel_size, BigUint::from(3u32).pow(5));
        assert!(r.matches());

        let a = fpm(2, &[&[1, 0, 1], &[0, 1, 1]]);
        let r = image_check(&a, MatrixMap::Psi).unwrap();
        assert_eq!(r.image_size, BigUint::from(2u32));
        assert!(r.matches());

        // Enumerate all 8 matrices N for A = [1 1 0] and collect the images.
        let a = fpm(2, &[&[1, 1, 0]]);
        let mut images = HashSet::new();
        for bits in 0..8i64 {
            let n = fpm(2, &[&[bits & 1, bits >> 1 & 1, bits >> 2 & 1]]);
            images.insert((phi_map(&a, &n).unwrap(), alpha_map(&n).unwrap()));
        }
        let r = image_check(&a, MatrixMap::PhiAlpha).unwrap();
        assert_eq!(r.image_size, BigUint::from(images.len()));
        assert_eq!(r.image_size, BigUint::from(4u32));
        assert!(r.matches());

        assert!(matches!(
            image_check(&fpm(2, &[&[1, 1, 1]]), MatrixMap::PhiAlpha),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            image_check(&fpm(3, &[&[1, 1], &[2, 2]]), MatrixMap::Psi),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn free_lift_examples() {
        let c1 = fpcode(3, &[&[1, 1, 1, 0]]);
        let x = free_so_lifts(&c1).unwrap();
        assert_eq!(x.count(), BigUint::from(9u32));
        let codes: HashSet<CodeZp2> = x.codes().collect();
        assert_eq!(codes.len(), 9);
        for c in &codes {
            assert!(c.is_self_orthogonal());
            assert_eq!(c.residue(), c1);
            assert_eq!(c.torsion(), c1);
        }

        let zero = free_so_lifts(&FpCode::zero(3, 4).unwrap()).unwrap();
        assert_eq!(zero.count(), BigUint::from(1u32));
        assert_eq!(zero.codes().collect::<Vec<_>>(), vec![CodeZp2::zero(3, 4).unwrap()]);

        let ones = fpcode(2, &[&[1; 8]]);
        assert_eq!(free_so_lifts(&ones).unwrap().count(), BigUint::from(128u32));
    }

    #[test]
    fn free_lift_preconditions() {
        assert!(matches!(
            free_so_lifts(&fpcode(3, &[&[1, 0, 0]])),
            Err(Error::Precondition(_))
        ));
        // Self-orthogonal but only singly even.
        assert!(matches!(
            free_so_lifts(&fpcode(2, &[&[1, 1, 0, 0]])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn so_lift_examples() {
        let c1 = fpcode(3, &[&[1, 1, 1, 0]]);
        let c2 = fpcode(3, &[&[1, 1, 1, 0], &[0, 1, 2, 0]]);
        let fam = so_lifts(&c1, &c2).unwrap();
        assert_eq!(fam.count(), BigUint::from(3u32));
        let codes: HashSet<CodeZp2> = fam.codes().collect();
        assert_eq!(codes.len(), 3);
        let listed = CodeZp2::from_generators(3, 4, &[vec![1, 1, 4, 0], vec![0, 3, 6, 0]]).unwrap();
        assert!(codes.contains(&listed));
        for c in &codes {
            assert!(c.is_self_orthogonal());
            assert_eq!((c.residue(), c.torsion()), (c1.clone(), c2.clone()));
        }
        let same = so_lifts(&c1, &c1).unwrap();
        assert_eq!(same.count(), free_so_lifts(&c1).unwrap().count());
    }

    #[test]
    fn so_lifts_binary_length_eight() {
        let c1 = fpcode(2, &[&[1, 1, 1, 1, 1, 1, 1, 1], &[1, 1, 1, 1, 0, 0, 0, 0]]);
        let c2 = c1
            .join(&fpcode(2, &[&[1, 1, 0, 0, 1, 1, 0, 0], &[1, 0, 1, 0, 1, 0, 1, 0]]))
            .unwrap();
        assert_eq!(c2.dim(), 4);
        let fam = so_lifts(&c1, &c2).unwrap();
        assert_eq!(fam.count(), BigUint::from(128u32));
        let codes: HashSet<CodeZp2> = fam.codes().collect();
        assert_eq!(codes.len(), 128);
        assert!(codes.iter().all(|c| c.is_self_orthogonal() && c.code_type() == (2, 2)));
    }

    #[test]
    fn so_lifts_chain_violation() {
        let c1 = fpcode(3, &[&[1, 1, 1, 0]]);
        let bad = fpcode(3, &[&[1, 0, 0, 0]]);
        assert!(matches!(so_lifts(&c1, &bad), Err(Error::Precondition(_))));
        let outside = c1.join(&fpcode(3, &[&[1, 0, 0, 0]])).unwrap();
        assert!(matches!(so_lifts(&c1, &outside), Err(Error::Precondition(_))));
    }

    #[test]
    fn even_lift_examples() {
        let ones = fpcode(2, &[&[1; 8]]);
        let fam = even_lifts_with_one(&ones, &ones).unwrap();
        assert_eq!(fam.count(), BigUint::from(1u32));
        let c = fam.codes().next().unwrap();
        assert!(c.is_even().unwrap() && c.contains(&[1; 8]));

        let c1 = fpcode(2, &[&[1; 8], &[1, 1, 1, 1, 0, 0, 0, 0]]);
        let fam = even_lifts_with_one(&c1, &c1).unwrap();
        assert_eq!(fam.count(), BigUint::from(16u32));
        let codes: HashSet<CodeZp2> = fam.codes().collect();
        assert_eq!(codes.len(), 16);
        assert!(codes.iter().all(|c| c.is_even().unwrap() && c.contains(&[1; 8])));

        let pm1 = even_lifts_with_pm1(&ones, &ones).unwrap();
        assert_eq!(pm1.len(), 128);
        assert!(pm1.iter().all(|c| c.is_even().unwrap() && c.contains_pm1().unwrap().is_some()));
    }

    #[test]
    fn even_lift_preconditions() {
        let short = fpcode(2, &[&[1, 1, 1, 1]]);
        assert!(matches!(
            even_lifts_with_one(&short, &short),
            Err(Error::Precondition(_))
        ));
        let no_one = fpcode(2, &[&[1, 1, 1, 1, 0, 0, 0, 0]]);
        assert!(matches!(
            even_lifts_with_one(&no_one, &no_one),
            Err(Error::Precondition(_))
        ));
    }

    /// Every code `span(R + p N, p C2)` with `R` the residue basis and `N`
    /// zero on the pivot columns, kept when self-orthogonal.
    fn brute_lifts(c1: &FpCode, c2: &FpCode) -> HashSet<CodeZp2> {
        let (p, n, k) = (c1.p(), c1.n(), c1.dim());
        let md = Modulus::square(p).unwrap();
        let free_cols: Vec<usize> = (0..n).filter(|j| !c1.pivots().contains(j)).collect();
        let slots = k * free_cols.len();
        let torsion: Vec<Vec<u64>> = (0..c2.dim()).map(|i| c2.basis().row(i).iter().map(|&x| x * p).collect()).collect();
        let mut out = HashSet::new();
        for idx in 0..p.pow(slots as u32) {
            let mut rows: Vec<Vec<u64>> = (0..k).map(|i| c1.basis().row(i).to_vec()).collect();
            let mut rest = idx;
            for s in 0..slots {
                let j = free_cols[s % free_cols.len()];
                rows[s / free_cols.len()][j] += p * (rest % p);
                rest /= p;
            }
            rows.extend(torsion.iter().cloned());
            let c = CodeZp2::from_matrix(&ResidueMatrix::from_residue_rows(md, n, &rows).unwrap());
            if c.is_self_orthogonal() {
                out.insert(c);
            }
        }
        out
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(40))]
        #[test]
        fn lifts_match_brute_force(pi in 0usize..3, n in 2usize..=6, k1 in 1usize..=2, pick in 0usize..10_000, pick2 in 0usize..10_000) {
            let p = [2u64, 3, 5][pi];
            proptest::prop_assume!(2 * k1 <= n && (p != 5 || n <= 5));
            let filter = if p == 2 { SweepFilter::DoublyEven } else { SweepFilter::SelfOrthogonal };
            let residues = enumerate_fp_codes(p, n, k1, filter).unwrap();
            proptest::prop_assume!(!residues.is_empty());
            let c1 = &residues[pick % residues.len()];
            let free: Vec<CodeZp2> = free_so_lifts(c1).unwrap().codes().collect();
            let free_set: HashSet<CodeZp2> = free.iter().cloned().collect();
            // Distinct N give distinct codes, and nothing is missed.
            proptest::prop_assert_eq!(free_set.len(), free.len());
            proptest::prop_assert_eq!(&free_set, &brute_lifts(c1, c1));
            let k2 = pick2 % (n - 2 * k1 + 1);
            let c2s = intermediate_codes(c1, k2).unwrap();
            let c2 = &c2s[pick2 % c2s.len()];
            let fam: Vec<CodeZp2> = so_lifts(c1, c2).unwrap().codes().collect();
            let fam_set: HashSet<CodeZp2> = fam.iter().cloned().collect();
            proptest::prop_assert_eq!(fam_set.len(), fam.len());
            let brute = brute_lifts(c1, c2);
            let matching: HashSet<CodeZp2> = brute.into_iter().filter(|c| c.torsion() == *c2 && c.residue() == *c1).collect();
            proptest::prop_assert_eq!(fam_set, matching);
        }
    }
}
