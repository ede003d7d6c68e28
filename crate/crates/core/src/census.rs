//! Counting codes: Gaussian coefficients, exhaustive base-field sweeps, the
//! closed-form masses over `Z/p^2`, and a brute-force oracle that lists
//! every code over `Z/p^2` of a given length.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::code::{CodeZp2, FpCode};
use crate::error::{Error, Result};
use crate::ringmat::{howell_form, is_prime, Modulus, Odometer, ResidueMatrix};

/// Largest number of candidate generator matrices a base-field sweep may visit.
pub const SWEEP_LIMIT: u64 = 200_000_000;

/// Number of `k`-dimensional subspaces of `F_p^n`.
pub fn gaussian(n: usize, k: usize, p: u64) -> Result<BigUint> {
    if k > n {
        return Err(Error::Domain(format!("Gaussian coefficient [{n} {k}] has k > n")));
    }
    if !is_prime(p) {
        return Err(Error::InvalidModulus(format!("{p} is not prime")));
    }
    let pb = BigUint::from(p);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= pb.pow((n - i) as u32) - 1u32;
        den *= pb.pow((i + 1) as u32) - 1u32;
    }
    Ok(num / den)
}

/// Which base-field codes a sweep keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SweepFilter {
    All,
    SelfOrthogonal,
    DoublyEven,
    /// Doubly even and containing the all-ones vector.
    DoublyEvenWithOne,
}

fn row_ok(filter: SweepFilter, md: Modulus, rows: &[Vec<u64>], new: &[u64]) -> bool {
    match filter {
        SweepFilter::All => true,
        SweepFilter::SelfOrthogonal => {
            crate::ringmat::dot(md, new, new) == 0
                && rows.iter().all(|r| crate::ringmat::dot(md, r, new) == 0)
        }
        SweepFilter::DoublyEven | SweepFilter::DoublyEvenWithOne => {
            // Weights divisible by 4 and pairwise even overlaps force every
            // weight in the span to be divisible by 4.
            new.iter().filter(|&&x| x != 0).count() % 4 == 0
                && rows
                    .iter()
                    .all(|r| r.iter().zip(new).filter(|(&a, &b)| a & b == 1).count() % 2 == 0)
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..=n - (k - cur.len()) {
            cur.push(c);
            go(c + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Visits the RREF basis of every `k`-dimensional subspace of `F_p^n` that
/// passes `filter`, pruning row by row.
pub fn sweep_fp_codes(
    p: u64,
    n: usize,
    k: usize,
    filter: SweepFilter,
    visit: &mut dyn FnMut(&[Vec<u64>]),
) -> Result<()> {
    let md = Modulus::field(p)?;
    if k > n {
        return Err(Error::Domain(format!("dimension {k} exceeds length {n}")));
    }
    if filter != SweepFilter::All && filter != SweepFilter::SelfOrthogonal && p != 2 {
        return Err(Error::Domain("double evenness is a binary notion".into()));
    }
    let total = gaussian(n, k, p)?;
    if total > BigUint::from(SWEEP_LIMIT) {
        return Err(Error::Budget {
            what: format!("sweep of {k}-dimensional codes in F_{p}^{n}"),
            needed: total.to_string(),
            limit: SWEEP_LIMIT.to_string(),
        });
    }
    for pivots in combinations(n, k) {
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(k);
        fill_row(md, n, &pivots, filter, &mut rows, visit);
    }
    Ok(())
}

fn fill_row(
    md: Modulus,
    n: usize,
    pivots: &[usize],
    filter: SweepFilter,
    rows: &mut Vec<Vec<u64>>,
    visit: &mut dyn FnMut(&[Vec<u64>]),
) {
    let i = rows.len();
    if i == pivots.len() {
        if filter != SweepFilter::DoublyEvenWithOne || spans_all_ones(md, n, rows) {
            visit(rows);
        }
        return;
    }
    let c = pivots[i];
    let free: Vec<usize> = (c + 1..n).filter(|j| !pivots.contains(j)).collect();
    let mut odo = Odometer::uniform(md.p(), free.len());
    while let Some(digits) = odo.current() {
        let mut row = vec![0; n];
        row[c] = 1;
        for (&j, &d) in free.iter().zip(digits) {
            row[j] = d;
        }
        if row_ok(filter, md, rows, &row) {
            rows.push(row);
            fill_row(md, n, pivots, filter, rows, visit);
            rows.pop();
        }
        odo.advance();
    }
}

fn spans_all_ones(md: Modulus, n: usize, rows: &[Vec<u64>]) -> bool {
    // In RREF the only candidate combination is read off the pivot entries.
    let mut acc = vec![0u64; n];
    for r in rows {
        for (a, &x) in acc.iter_mut().zip(r) {
            *a = md.add(*a, x);
        }
    }
    acc.iter().all(|&x| x == 1)
}

/// Every `k`-dimensional code in `F_p^n` passing `filter`, in sweep order.
pub fn enumerate_fp_codes(p: u64, n: usize, k: usize, filter: SweepFilter) -> Result<Vec<FpCode>> {
    let md = Modulus::field(p)?;
    let mut out = Vec::new();
    let mut err = None;
    sweep_fp_codes(p, n, k, filter, &mut |rows| match FpCode::from_rows(md, n, rows) {
        Ok(c) => out.push(c),
        Err(e) => err = Some(e),
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

type SigmaKey = (u64, usize, usize, SweepFilter);

fn sigma_table() -> &'static Mutex<HashMap<SigmaKey, BigUint>> {
    static TABLE: OnceLock<Mutex<HashMap<SigmaKey, BigUint>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Number of `k`-dimensional codes in `F_p^n` passing `filter`, memoised.
pub fn count_fp_codes(p: u64, n: usize, k: usize, filter: SweepFilter) -> Result<BigUint> {
    let key = (p, n, k, filter);
    if let Some(v) = sigma_table().lock().expect("sigma table").get(&key) {
        return Ok(v.clone());
    }
    let mut count = 0u64;
    sweep_fp_codes(p, n, k, filter, &mut |_| count += 1)?;
    let v = BigUint::from(count);
    sigma_table().lock().expect("sigma table").insert(key, v.clone());
    Ok(v)
}

fn check_so_dim(n: usize, k: usize) -> Result<()> {
    if 2 * k > n {
        return Err(Error::Domain(format!(
            "a self-orthogonal code of length {n} has dimension at most {}",
            n / 2
        )));
    }
    Ok(())
}

/// Self-orthogonal `k`-dimensional codes of length `n` over `F_p`, `p` odd.
pub fn sigma_p(n: usize, k: usize, p: u64) -> Result<BigUint> {
    if p == 2 || !is_prime(p) {
        return Err(Error::Domain(format!("sigma_p needs an odd prime, got {p}")));
    }
    check_so_dim(n, k)?;
    count_fp_codes(p, n, k, SweepFilter::SelfOrthogonal)
}

/// Doubly even binary `k`-dimensional codes of length `n`.
pub fn sigma_de(n: usize, k: usize) -> Result<BigUint> {
    check_so_dim(n, k)?;
    count_fp_codes(2, n, k, SweepFilter::DoublyEven)
}

/// Doubly even binary `k`-dimensional codes of length `n` containing `1`.
pub fn sigma_one(n: usize, k: usize) -> Result<BigUint> {
    check_so_dim(n, k)?;
    count_fp_codes(2, n, k, SweepFilter::DoublyEvenWithOne)
}

/// The residue count used by the self-orthogonal mass: doubly even codes for
/// `p = 2`, self-orthogonal codes otherwise.
fn sigma_residue(n: usize, k: usize, p: u64) -> Result<BigUint> {
    if p == 2 {
        sigma_de(n, k)
    } else {
        sigma_p(n, k, p)
    }
}

/// All codes `C2` with `C1 ⊆ C2 ⊆ C1^⊥` and `dim C2 = dim C1 + k2`, obtained
/// by pulling back the `k2`-dimensional subspaces of `C1^⊥ / C1`.
pub fn intermediate_codes(c1: &FpCode, k2: usize) -> Result<Vec<FpCode>> {
    if !c1.is_self_orthogonal() {
        return Err(Error::Precondition("code is not self-orthogonal".into()));
    }
    let md = c1.modulus();
    let dual = c1.dual();
    let complement: Vec<Vec<u64>> = (0..dual.dim())
        .map(|i| c1.reduce(dual.basis().row(i)))
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect();
    let q = FpCode::from_rows(md, c1.n(), &complement)?;
    debug_assert_eq!(q.dim(), c1.n() - 2 * c1.dim());
    let mut out = Vec::new();
    for sub in enumerate_fp_codes(md.p(), q.dim(), k2, SweepFilter::All)? {
        let mut rows = c1.basis().row_vecs();
        for i in 0..sub.dim() {
            rows.push(q.basis().left_mul_vec(sub.basis().row(i)));
        }
        out.push(FpCode::from_rows(md, c1.n(), &rows)?);
    }
    Ok(out)
}

/// The code family a mass or classification refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "self-orthogonal")]
    SelfOrthogonal,
    #[serde(rename = "self-dual")]
    SelfDual,
    #[serde(rename = "even-with-one")]
    EvenWithOne,
    #[serde(rename = "even-with-pm1")]
    EvenWithPm1,
    #[serde(rename = "type2-one")]
    Type2One,
    #[serde(rename = "type2-pm1")]
    Type2Pm1,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::SelfOrthogonal,
        Family::SelfDual,
        Family::EvenWithOne,
        Family::EvenWithPm1,
        Family::Type2One,
        Family::Type2Pm1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::SelfOrthogonal => "self-orthogonal",
            Family::SelfDual => "self-dual",
            Family::EvenWithOne => "even-with-one",
            Family::EvenWithPm1 => "even-with-pm1",
            Family::Type2One => "type2-one",
            Family::Type2Pm1 => "type2-pm1",
        }
    }

    /// Whether members are built with a fixed type `{k1, k2}`.
    pub fn has_fixed_type(self) -> bool {
        matches!(
            self,
            Family::SelfOrthogonal | Family::EvenWithOne | Family::EvenWithPm1
        )
    }

    /// Families whose codes contain the all-ones vector itself.
    pub fn contains_one(self) -> bool {
        matches!(self, Family::EvenWithOne | Family::Type2One)
    }

    pub fn is_quaternary_even(self) -> bool {
        !matches!(self, Family::SelfOrthogonal | Family::SelfDual)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "so" | "self-orthogonal" => Family::SelfOrthogonal,
            "sd" | "self-dual" => Family::SelfDual,
            "even-one" | "even-with-one" => Family::EvenWithOne,
            "even-pm1" | "even-with-pm1" => Family::EvenWithPm1,
            "type2-one" => Family::Type2One,
            "type2-pm1" => Family::Type2Pm1,
            other => return Err(Error::Domain(format!("unknown family '{other}'"))),
        })
    }
}

fn as_decimal<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

fn from_decimal<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(serde::de::Error::custom)
}

/// One summand of a mass.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MassTerm {
    pub k1: usize,
    pub k2: usize,
    #[serde(serialize_with = "as_decimal", deserialize_with = "from_decimal")]
    pub term: BigUint,
}

/// An exact count of codes in a family, optionally split by type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MassReport {
    pub family: Family,
    pub p: u64,
    pub n: usize,
    pub k1: Option<usize>,
    pub k2: Option<usize>,
    #[serde(serialize_with = "as_decimal", deserialize_with = "from_decimal")]
    pub value: BigUint,
    pub breakdown: Vec<MassTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl MassReport {
    fn single(family: Family, p: u64, n: usize, k1: usize, k2: usize, value: BigUint) -> Self {
        MassReport {
            family,
            p,
            n,
            k1: Some(k1),
            k2: Some(k2),
            breakdown: vec![MassTerm {
                k1,
                k2,
                term: value.clone(),
            }],
            value,
            diagnostic: None,
        }
    }

    fn infeasible(family: Family, p: u64, n: usize, k1: usize, k2: usize, why: String) -> Self {
        MassReport {
            diagnostic: Some(why),
            ..Self::single(family, p, n, k1, k2, BigUint::zero())
        }
    }

    fn total(family: Family, p: u64, n: usize, breakdown: Vec<MassTerm>) -> Self {
        MassReport {
            family,
            p,
            n,
            k1: None,
            k2: None,
            value: breakdown.iter().map(|t| &t.term).sum(),
            breakdown,
            diagnostic: None,
        }
    }
}

/// `p^{e/2}` for an exponent that must be even and non-negative.
fn half_power(p: u64, twice: i64) -> BigUint {
    debug_assert!(twice >= 0 && twice % 2 == 0, "exponent {twice}/2");
    BigUint::from(p).pow((twice / 2) as u32)
}

/// Twice the exponent of the number of self-orthogonal codes of type
/// `{k1, k2}` with prescribed residue and torsion.
pub fn so_lift_exponent2(n: usize, k1: usize, k2: usize, p: u64) -> i64 {
    let (n, k1, k2) = (n as i64, k1 as i64, k2 as i64);
    let odd_shift = if p == 2 { 1 } else { -1 };
    k1 * (2 * n - 3 * k1 + odd_shift - 2 * k2)
}

/// Twice the exponent of the number of even codes containing `1` with
/// prescribed residue and torsion.
pub fn even_lift_exponent2(n: usize, k1: usize, k2: usize) -> i64 {
    let (n, k1, k2) = (n as i64, k1 as i64, k2 as i64);
    (k1 - 1) * (2 * n - 3 * k1 - 2 - 2 * k2)
}

fn feasibility(n: usize, k1: usize, k2: usize) -> Option<String> {
    (2 * k1 + k2 > n).then(|| format!("no chain C1 ⊆ C2 ⊆ C1^⊥ with k1 = {k1}, k2 = {k2} at length {n}"))
}

/// Number of self-orthogonal codes of type `{k1, k2}` and length `n` over `Z/p^2`.
pub fn mass_so(n: usize, k1: usize, k2: usize, p: u64) -> Result<MassReport> {
    Modulus::field(p)?;
    let fam = Family::SelfOrthogonal;
    if let Some(why) = feasibility(n, k1, k2) {
        return Ok(MassReport::infeasible(fam, p, n, k1, k2, why));
    }
    let value = sigma_residue(n, k1, p)?
        * gaussian(n - 2 * k1, k2, p)?
        * half_power(p, so_lift_exponent2(n, k1, k2, p));
    Ok(MassReport::single(fam, p, n, k1, k2, value))
}

/// Number of self-dual codes of length `n` over `Z/p^2`.
pub fn mass_self_dual(n: usize, p: u64) -> Result<MassReport> {
    let mut terms = Vec::new();
    for k1 in 0..=n / 2 {
        let r = mass_so(n, k1, n - 2 * k1, p)?;
        terms.push(MassTerm {
            k1,
            k2: n - 2 * k1,
            term: r.value,
        });
    }
    Ok(MassReport::total(Family::SelfDual, p, n, terms))
}

fn require_length_mod8(n: usize) -> Result<()> {
    if n % 8 != 0 {
        return Err(Error::Domain(format!(
            "even codes containing a ±1 vector need 8 | n, got n = {n}"
        )));
    }
    Ok(())
}

fn mass_even(fam: Family, n: usize, k1: usize, k2: usize) -> Result<MassReport> {
    require_length_mod8(n)?;
    if k1 == 0 {
        return Ok(MassReport::infeasible(
            fam,
            2,
            n,
            k1,
            k2,
            "a residue containing 1 has dimension at least 1".into(),
        ));
    }
    if let Some(why) = feasibility(n, k1, k2) {
        return Ok(MassReport::infeasible(fam, 2, n, k1, k2, why));
    }
    let mut twice = even_lift_exponent2(n, k1, k2);
    if fam == Family::EvenWithPm1 {
        twice += 2 * (n - k1 - k2) as i64;
    }
    let value = sigma_one(n, k1)? * gaussian(n - 2 * k1, k2, 2)? * half_power(2, twice);
    Ok(MassReport::single(fam, 2, n, k1, k2, value))
}

/// Number of quaternary even codes of type `{k1, k2}` containing `1`.
pub fn mass_even_one(n: usize, k1: usize, k2: usize) -> Result<MassReport> {
    mass_even(Family::EvenWithOne, n, k1, k2)
}

/// Number of quaternary even codes of type `{k1, k2}` containing a `{±1}^n` vector.
pub fn mass_even_pm1(n: usize, k1: usize, k2: usize) -> Result<MassReport> {
    mass_even(Family::EvenWithPm1, n, k1, k2)
}

/// Which Type II total to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Type2With {
    One,
    Pm1,
}

/// Number of Type II codes of length `n` over `Z/4` containing `1` (or some
/// `{±1}^n` vector).
pub fn mass_type2(n: usize, with: Type2With) -> Result<MassReport> {
    require_length_mod8(n)?;
    let (fam, term_fam) = match with {
        Type2With::One => (Family::Type2One, Family::EvenWithOne),
        Type2With::Pm1 => (Family::Type2Pm1, Family::EvenWithPm1),
    };
    let mut terms = Vec::new();
    for k1 in 0..=n / 2 {
        let r = mass_even(term_fam, n, k1, n - 2 * k1)?;
        terms.push(MassTerm {
            k1,
            k2: n - 2 * k1,
            term: r.value,
        });
    }
    Ok(MassReport::total(fam, 2, n, terms))
}

/// The formula value for any family. `k1`/`k2` are required for the
/// fixed-type families and ignored otherwise.
pub fn mass(family: Family, p: u64, n: usize, k1: Option<usize>, k2: Option<usize>) -> Result<MassReport> {
    let need = |k: Option<usize>, name: &str| {
        k.ok_or_else(|| Error::Domain(format!("family {family} needs --{name}")))
    };
    let binary = || {
        if p != 2 {
            Err(Error::Domain(format!("family {family} lives over Z/4, got p = {p}")))
        } else {
            Ok(())
        }
    };
    match family {
        Family::SelfOrthogonal => mass_so(n, need(k1, "k1")?, need(k2, "k2")?, p),
        Family::SelfDual => mass_self_dual(n, p),
        Family::EvenWithOne => {
            binary()?;
            mass_even_one(n, need(k1, "k1")?, need(k2, "k2")?)
        }
        Family::EvenWithPm1 => {
            binary()?;
            mass_even_pm1(n, need(k1, "k1")?, need(k2, "k2")?)
        }
        Family::Type2One => {
            binary()?;
            mass_type2(n, Type2With::One)
        }
        Family::Type2Pm1 => {
            binary()?;
            mass_type2(n, Type2With::Pm1)
        }
    }
}

/// Default cap on the ambient size `p^{2n}` the oracle agrees to sweep.
pub const DEFAULT_ORACLE_AMBIENT: u64 = 6561;

/// Size limits for the exhaustive oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    /// Largest admissible `p^{2n}`.
    pub max_ambient: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_ambient: DEFAULT_ORACLE_AMBIENT,
        }
    }
}

/// Filter applied to the oracle's list of all codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OraclePredicate {
    All,
    SelfOrthogonal,
    SelfDual,
    Even,
    EvenWithOne,
    EvenWithPm1,
    /// Self-dual, even and containing `1`.
    Type2One,
    /// Self-dual, even and containing a `{±1}^n` vector.
    Type2Pm1,
}

impl OraclePredicate {
    pub fn for_family(f: Family) -> Self {
        match f {
            Family::SelfOrthogonal => OraclePredicate::SelfOrthogonal,
            Family::SelfDual => OraclePredicate::SelfDual,
            Family::EvenWithOne => OraclePredicate::EvenWithOne,
            Family::EvenWithPm1 => OraclePredicate::EvenWithPm1,
            Family::Type2One => OraclePredicate::Type2One,
            Family::Type2Pm1 => OraclePredicate::Type2Pm1,
        }
    }

    fn accepts(self, c: &CodeZp2) -> Result<bool> {
        let ones = vec![1u64; c.n()];
        Ok(match self {
            OraclePredicate::All => true,
            OraclePredicate::SelfOrthogonal => c.is_self_orthogonal(),
            OraclePredicate::SelfDual => c.is_self_dual(),
            OraclePredicate::Even => c.is_even()?,
            OraclePredicate::EvenWithOne => c.is_even()? && c.contains(&ones),
            OraclePredicate::EvenWithPm1 => c.is_even()? && c.contains_pm1()?.is_some(),
            OraclePredicate::Type2One => c.is_self_dual() && c.is_even()? && c.contains(&ones),
            OraclePredicate::Type2Pm1 => {
                c.is_self_dual() && c.is_even()? && c.contains_pm1()?.is_some()
            }
        })
    }
}

/// Every code over `Z/p^2` of length `n` passing `predicate` (and having
/// type `code_type` when given), sorted.
///
/// The sweep generates every echelon matrix with pivots `1` or `p` whose
/// entries in later pivot columns are reduced below those pivots, and keeps
/// the ones that are their own Howell form. Each code appears exactly once
/// because the Howell form is unique.
pub fn oracle_enumerate(
    p: u64,
    n: usize,
    predicate: OraclePredicate,
    code_type: Option<(usize, usize)>,
    budget: OracleBudget,
) -> Result<Vec<CodeZp2>> {
    let md = Modulus::square(p)?;
    let ambient = (p as u128).checked_pow(2 * n as u32);
    if ambient.map_or(true, |a| a > budget.max_ambient as u128) {
        return Err(Error::Budget {
            what: format!("oracle sweep over (Z/{})^{n}", p * p),
            needed: format!("{p}^{}", 2 * n),
            limit: budget.max_ambient.to_string(),
        });
    }
    let q = md.value();
    let mut out = Vec::new();
    // Pivot profile: each column is skipped, a unit pivot, or a p pivot.
    let mut profiles = Odometer::uniform(3, n);
    while let Some(profile) = profiles.current() {
        let pivots: Vec<(usize, u64)> = profile
            .iter()
            .enumerate()
            .filter(|(_, &t)| t != 0)
            .map(|(c, &t)| (c, if t == 1 { 1 } else { p }))
            .collect();
        let log_size: usize = pivots.iter().map(|&(_, d)| if d == 1 { 2 } else { 1 }).sum();
        let size_matches = code_type.map_or(true, |(k1, k2)| 2 * k1 + k2 == log_size);
        if size_matches {
            let mut slots: Vec<(usize, usize)> = Vec::new();
            let mut radix: Vec<u64> = Vec::new();
            for (i, &(c, _)) in pivots.iter().enumerate() {
                for j in c + 1..n {
                    slots.push((i, j));
                    radix.push(match pivots.iter().find(|&&(pc, _)| pc == j) {
                        Some(&(_, d)) => d,
                        None => q,
                    });
                }
            }
            let mut fill = Odometer::new(radix);
            while let Some(digits) = fill.current() {
                let mut m = ResidueMatrix::zeros(md, pivots.len(), n);
                for (i, &(c, d)) in pivots.iter().enumerate() {
                    m.set(i, c, d);
                }
                for (&(i, j), &x) in slots.iter().zip(digits) {
                    m.set(i, j, x);
                }
                if howell_form(&m) == m {
                    let c = CodeZp2::from_matrix(&m);
                    if code_type.map_or(true, |t| t == c.code_type()) && predicate.accepts(&c)? {
                        out.push(c);
                    }
                }
                fill.advance();
            }
        }
        profiles.advance();
    }
    out.sort();
    Ok(out)
}
