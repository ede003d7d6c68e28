//! Linear codes over `F_p` and `Z/p^2`.
//!
//! Both code types are stored in a canonical generator form (RREF over the
//! field, Howell form over `Z/p^2`), so equality, ordering and hashing of the
//! values coincide with equality of the underlying codes.

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::ringmat::{
    dot, howell_form, kernel_fp, rref_fp, solve_affine_fp, Modulus, Odometer, ResidueMatrix,
};

/// Codeword count above which `contains_pm1` stops scanning and solves instead.
pub const PM1_SCAN_LIMIT: u64 = 1 << 20;

/// Default cap on explicit codeword iteration.
pub const CODEWORD_LIMIT: u64 = 1 << 24;

/// A linear code over `F_p` held as its reduced row echelon basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpCode {
    basis: ResidueMatrix,
    pivots: Vec<usize>,
}

impl fmt::Debug for FpCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FpCode[p={} n={} k={}] {:?}",
            self.p(),
            self.n(),
            self.dim(),
            self.basis.row_vecs()
        )
    }
}

impl FpCode {
    pub fn new(p: u64, n: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let md = Modulus::field(p)?;
        Self::from_matrix(&ResidueMatrix::from_rows(md, n, rows)?)
    }

    /// Span of the rows of `m`, read modulo `p` whatever the modulus of `m`.
    pub fn from_matrix(m: &ResidueMatrix) -> Result<Self> {
        let field = m.modulus().to_field();
        let r = rref_fp(&m.with_modulus(field))?;
        Ok(FpCode {
            basis: r.matrix,
            pivots: r.pivots,
        })
    }

    pub fn from_rows(md: Modulus, n: usize, rows: &[Vec<u64>]) -> Result<Self> {
        Self::from_matrix(&ResidueMatrix::from_residue_rows(md.to_field(), n, rows)?)
    }

    pub fn zero(p: u64, n: usize) -> Result<Self> {
        Ok(FpCode {
            basis: ResidueMatrix::zeros(Modulus::field(p)?, 0, n),
            pivots: Vec::new(),
        })
    }

    pub fn full(p: u64, n: usize) -> Result<Self> {
        Ok(FpCode {
            basis: ResidueMatrix::identity(Modulus::field(p)?, n),
            pivots: (0..n).collect(),
        })
    }

    pub fn modulus(&self) -> Modulus {
        self.basis.modulus()
    }

    pub fn p(&self) -> u64 {
        self.basis.modulus().p()
    }

    pub fn n(&self) -> usize {
        self.basis.cols()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &ResidueMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn size(&self) -> BigUint {
        BigUint::from(self.p()).pow(self.dim() as u32)
    }

    /// Reduces `v` against the basis; the remainder is zero iff `v` is in the code.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let md = self.modulus();
        let mut w: Vec<u64> = v.iter().map(|&x| x % md.value()).collect();
        for (i, &c) in self.pivots.iter().enumerate() {
            let q = w[c];
            if q != 0 {
                for (wj, &bj) in w.iter_mut().zip(self.basis.row(i)) {
                    *wj = md.sub(*wj, md.mul(q, bj));
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        v.len() == self.n() && self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn is_subcode_of(&self, other: &FpCode) -> bool {
        self.p() == other.p()
            && self.n() == other.n()
            && (0..self.dim()).all(|i| other.contains(self.basis.row(i)))
    }

    /// Span of the union of two codes.
    pub fn join(&self, other: &FpCode) -> Result<FpCode> {
        FpCode::from_matrix(&self.basis.stack(&other.basis)?)
    }

    pub fn dual(&self) -> FpCode {
        let kernel = kernel_fp(&self.basis).expect("field modulus");
        FpCode::from_rows(self.modulus(), self.n(), &kernel).expect("kernel vectors have length n")
    }

    pub fn is_self_orthogonal(&self) -> bool {
        let md = self.modulus();
        (0..self.dim()).all(|i| (i..self.dim()).all(|j| dot(md, self.basis.row(i), self.basis.row(j)) == 0))
    }

    /// Binary codes only: all weights divisible by four.
    pub fn is_doubly_even(&self) -> bool {
        self.p() == 2
            && self.is_self_orthogonal()
            && (0..self.dim()).all(|i| self.basis.row(i).iter().filter(|&&x| x != 0).count() % 4 == 0)
    }

    pub fn contains_all_ones(&self) -> bool {
        self.contains(&vec![1; self.n()])
    }

    /// All codewords in lexicographic order of basis coefficients.
    pub fn codewords(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let mut odo = Odometer::uniform(self.p(), self.dim());
        std::iter::from_fn(move || {
            let c = odo.current()?.to_vec();
            odo.advance();
            Some(if self.dim() == 0 {
                vec![0; self.n()]
            } else {
                self.basis.left_mul_vec(&c)
            })
        })
    }
}

/// A linear code over `Z/p^2` held in Howell form, with its type `{k1, k2}`.
///
/// Codes are ordered lexicographically by their Howell generator rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CodeZp2 {
    gens: ResidueMatrix,
    k1: usize,
    k2: usize,
}

impl Ord for CodeZp2 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.modulus(), self.n(), self.gens.as_flat()).cmp(&(other.modulus(), other.n(), other.gens.as_flat()))
    }
}

impl PartialOrd for CodeZp2 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for CodeZp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CodeZp2[p={} n={} type {{{}, {}}}] {:?}",
            self.p(),
            self.n(),
            self.k1,
            self.k2,
            self.gens.row_vecs()
        )
    }
}

impl CodeZp2 {
    /// The code spanned by integer rows, reduced modulo `p^2`.
    pub fn from_generators(p: u64, n: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let md = Modulus::square(p)?;
        Ok(Self::from_matrix(&ResidueMatrix::from_rows(md, n, rows)?))
    }

    /// The code spanned by the rows of a matrix over `Z/p^2`. Field-valued
    /// matrices are read through their integer representatives.
    pub fn from_matrix(m: &ResidueMatrix) -> Self {
        let md = m.modulus().to_square();
        let m = if m.modulus().is_field() {
            m.with_modulus(md)
        } else {
            m.clone()
        };
        let gens = howell_form(&m);
        Self::from_howell(gens)
    }

    fn from_howell(gens: ResidueMatrix) -> Self {
        let p = gens.modulus().p();
        // Unit-pivot rows stay independent mod p; p-pivot rows only matter
        // when some entry survives reduction.
        let lead = |i: usize| gens.row(i).iter().copied().find(|&x| x != 0).unwrap_or(0);
        let units = (0..gens.rows()).filter(|&i| lead(i) % p != 0).count();
        let log_size = units + gens.rows();
        let all_torsion_divisible =
            (0..gens.rows()).all(|i| lead(i) % p != 0 || gens.row(i).iter().all(|&x| x % p == 0));
        let k1 = if all_torsion_divisible {
            units
        } else {
            rref_fp(&gens.with_modulus(gens.modulus().to_field()))
                .expect("field modulus")
                .rank
        };
        CodeZp2 {
            gens,
            k1,
            k2: log_size - 2 * k1,
        }
    }

    pub fn zero(p: u64, n: usize) -> Result<Self> {
        Ok(Self::from_howell(ResidueMatrix::zeros(Modulus::square(p)?, 0, n)))
    }

    pub fn full(p: u64, n: usize) -> Result<Self> {
        Ok(Self::from_howell(ResidueMatrix::identity(Modulus::square(p)?, n)))
    }

    pub fn modulus(&self) -> Modulus {
        self.gens.modulus()
    }

    pub fn p(&self) -> u64 {
        self.gens.modulus().p()
    }

    pub fn n(&self) -> usize {
        self.gens.cols()
    }

    /// The canonical (Howell) generator matrix.
    pub fn gens(&self) -> &ResidueMatrix {
        &self.gens
    }

    pub fn k1(&self) -> usize {
        self.k1
    }

    pub fn k2(&self) -> usize {
        self.k2
    }

    pub fn code_type(&self) -> (usize, usize) {
        (self.k1, self.k2)
    }

    /// `log_p |C| = 2 k1 + k2`.
    pub fn log_size(&self) -> usize {
        2 * self.k1 + self.k2
    }

    pub fn cardinality(&self) -> BigUint {
        BigUint::from(self.p()).pow(self.log_size() as u32)
    }

    fn size_u64(&self) -> Option<u64> {
        self.p().checked_pow(self.log_size() as u32)
    }

    /// `pi(C)`: the codewords reduced modulo `p`.
    pub fn residue(&self) -> FpCode {
        FpCode::from_matrix(&self.gens).expect("prime modulus")
    }

    /// `iota^{-1}(C)`: vectors `v` over `F_p` with `p v` in `C`.
    pub fn torsion(&self) -> FpCode {
        let md = self.modulus();
        let p = md.p();
        let field = md.to_field();
        let reduced = self.gens.with_modulus(field);
        let mut rows = reduced.row_vecs();
        // Combinations of generators that vanish mod p are p times torsion vectors.
        let relations = kernel_fp(&reduced.transpose()).expect("field modulus");
        for a in relations {
            let y = self.gens.left_mul_vec(&a);
            debug_assert!(y.iter().all(|&x| x % p == 0));
            rows.push(y.iter().map(|&x| x / p).collect());
        }
        FpCode::from_rows(field, self.n(), &rows).expect("rows have length n")
    }

    pub fn is_free(&self) -> bool {
        self.k2 == 0
    }

    /// `C^perp` under the standard inner product.
    pub fn dual(&self) -> CodeZp2 {
        let md = self.modulus();
        let (k, n) = (self.gens.rows(), self.n());
        // Rows of the Howell form of [G^t | I] vanishing on the first k columns span {(0, x) : G x^t = 0}.
        let mut aug = ResidueMatrix::zeros(md, n, k + n);
        for j in 0..n {
            for i in 0..k {
                aug.set(j, i, self.gens.get(i, j));
            }
            aug.set(j, k + j, 1);
        }
        let h = howell_form(&aug);
        let rows: Vec<Vec<u64>> = (0..h.rows())
            .filter(|&r| h.row(r)[..k].iter().all(|&x| x == 0))
            .map(|r| h.row(r)[k..].to_vec())
            .collect();
        CodeZp2::from_matrix(&ResidueMatrix::from_residue_rows(md, n, &rows).expect("width n"))
    }

    pub fn is_self_orthogonal(&self) -> bool {
        let md = self.modulus();
        let g = &self.gens;
        (0..g.rows()).all(|i| (i..g.rows()).all(|j| dot(md, g.row(i), g.row(j)) == 0))
    }

    pub fn is_self_dual(&self) -> bool {
        self.log_size() == self.n() && self.is_self_orthogonal()
    }

    /// Membership by reduction against the Howell rows.
    pub fn contains(&self, v: &[u64]) -> bool {
        if v.len() != self.n() {
            return false;
        }
        let md = self.modulus();
        let mut stack = [0u64; 32];
        let mut heap = Vec::new();
        let w: &mut [u64] = if v.len() <= stack.len() {
            &mut stack[..v.len()]
        } else {
            heap.resize(v.len(), 0);
            &mut heap
        };
        for (wj, &x) in w.iter_mut().zip(v) {
            *wj = x % md.value();
        }
        let mut col = 0;
        for i in 0..self.gens.rows() {
            let row = self.gens.row(i);
            let c = row.iter().position(|&x| x != 0).expect("Howell rows are nonzero");
            if w[col..c].iter().any(|&x| x != 0) {
                return false;
            }
            let d = row[c];
            if w[c] % d != 0 {
                return false;
            }
            let q = w[c] / d;
            if q != 0 {
                for (wj, &rj) in w.iter_mut().zip(row).skip(c) {
                    *wj = md.sub(*wj, md.mul(q, rj));
                }
            }
            col = c;
        }
        w[col..].iter().all(|&x| x == 0)
    }

    pub fn is_subcode_of(&self, other: &CodeZp2) -> bool {
        self.p() == other.p()
            && self.n() == other.n()
            && (0..self.gens.rows()).all(|i| other.contains(self.gens.row(i)))
    }

    /// Smallest code containing both.
    pub fn join(&self, other: &CodeZp2) -> Result<CodeZp2> {
        Ok(CodeZp2::from_matrix(&self.gens.stack(&other.gens)?))
    }

    /// Iterates every codeword exactly once, lexicographically in the
    /// coefficients of the Howell rows (`[0, p^2)` for unit pivots, `[0, p)`
    /// for pivots divisible by `p`).
    pub fn codewords(&self, limit: u64) -> Result<impl Iterator<Item = Vec<u64>> + '_> {
        match self.size_u64() {
            Some(s) if s <= limit => {}
            _ => {
                return Err(Error::Budget {
                    what: "codeword iteration".into(),
                    needed: self.cardinality().to_string(),
                    limit: limit.to_string(),
                })
            }
        }
        let md = self.modulus();
        let radix: Vec<u64> = (0..self.gens.rows())
            .map(|i| {
                let lead = self.gens.row(i).iter().copied().find(|&x| x != 0).unwrap();
                md.value() / lead
            })
            .collect();
        let mut odo = Odometer::new(radix);
        let n = self.n();
        Ok(std::iter::from_fn(move || {
            let c = odo.current()?;
            let w = if c.is_empty() {
                vec![0; n]
            } else {
                self.gens.left_mul_vec(c)
            };
            odo.advance();
            Some(w)
        }))
    }

    fn require_quaternary(&self, what: &str) -> Result<()> {
        if self.p() != 2 {
            return Err(Error::Domain(format!("{what} is defined for codes over Z/4 only")));
        }
        Ok(())
    }

    /// Every codeword has Euclidean weight divisible by 8.
    pub fn is_even(&self) -> Result<bool> {
        self.require_quaternary("evenness")?;
        Ok(self.is_self_orthogonal()
            && (0..self.gens.rows()).all(|i| euclidean_weight(self.gens.row(i)) % 8 == 0))
    }

    /// Some codeword with every coordinate equal to 1 or 3, if one exists.
    pub fn contains_pm1(&self) -> Result<Option<Vec<u64>>> {
        self.require_quaternary("the {1,3}^n search")?;
        let found = match self.size_u64() {
            Some(s) if s <= PM1_SCAN_LIMIT => self
                .codewords(PM1_SCAN_LIMIT)?
                .find(|c| c.iter().all(|&x| x % 2 == 1)),
            _ => {
                // A codeword is all-odd iff its residue is the all-ones vector.
                let field = self.modulus().to_field();
                let reduced = self.gens.with_modulus(field).transpose();
                solve_affine_fp(&reduced, &vec![1; self.n()])?
                    .map(|s| self.gens.left_mul_vec(&s.particular))
            }
        };
        debug_assert!(
            found.is_none() || !self.is_even().unwrap_or(false) || self.n() % 8 == 0,
            "even code with a {{1,3}}^n word has length divisible by 8"
        );
        Ok(found)
    }
}

/// Euclidean weight of a vector over `Z/4`: coordinates weigh 0, 1, 4, 1.
pub fn euclidean_weight(v: &[u64]) -> u64 {
    v.iter()
        .map(|&x| match x % 4 {
            0 => 0,
            2 => 4,
            _ => 1,
        })
        .sum()
}

/// A generator matrix in the plain text format: a header line `p n`
/// followed by one whitespace-separated integer row per line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixText {
    pub p: u64,
    pub n: usize,
    pub rows: Vec<Vec<i64>>,
}

impl MatrixText {
    /// Parses one matrix. Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing `p n` header".into(),
        })?;
        let head: Vec<&str> = header.split_whitespace().collect();
        let bad_header = || Error::Parse {
            line: hline,
            msg: format!("expected `p n`, found `{header}`"),
        };
        if head.len() != 2 {
            return Err(bad_header());
        }
        let p: u64 = head[0].parse().map_err(|_| bad_header())?;
        let n: usize = head[1].parse().map_err(|_| bad_header())?;
        let mut rows = Vec::new();
        for (line, l) in lines {
            let row: Vec<i64> = l
                .split_whitespace()
                .map(|t| {
                    t.parse().map_err(|_| Error::Parse {
                        line,
                        msg: format!("`{t}` is not an integer"),
                    })
                })
                .collect::<Result<_>>()?;
            if row.len() != n {
                return Err(Error::Parse {
                    line,
                    msg: format!("row has {} entries, expected {n}", row.len()),
                });
            }
            rows.push(row);
        }
        Ok(MatrixText { p, n, rows })
    }

    pub fn from_matrix(m: &ResidueMatrix) -> Self {
        MatrixText {
            p: m.modulus().p(),
            n: m.cols(),
            rows: m
                .row_vecs()
                .into_iter()
                .map(|r| r.into_iter().map(|x| x as i64).collect())
                .collect(),
        }
    }

    pub fn to_code(&self) -> Result<CodeZp2> {
        CodeZp2::from_generators(self.p, self.n, &self.rows)
    }

    pub fn to_fp_code(&self) -> Result<FpCode> {
        FpCode::new(self.p, self.n, &self.rows)
    }
}

impl fmt::Display for MatrixText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.p, self.n)?;
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}
