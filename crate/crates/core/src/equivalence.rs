//! Signed monomial equivalence, automorphism group orders, and
//! classification of code families into equivalence classes, certified by
//! the mass identity `Σ |G| / |Aut C| = |family|`.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::census::{
    enumerate_fp_codes, intermediate_codes, mass, oracle_enumerate, Family, OracleBudget,
    OraclePredicate, SweepFilter,
};
use crate::code::CodeZp2;
use crate::error::{Error, Result};
use crate::lifting::{even_lifts_with_one, even_lifts_with_pm1, so_lifts};
use crate::ringmat::{howell_form, Modulus, ResidueMatrix};

/// Longest length for which automorphism and equivalence searches run.
pub const AUT_MAX_LENGTH: usize = 8;

/// Codes with more words than this are searched without column fingerprints.
const FINGERPRINT_WORD_LIMIT: u64 = 1 << 16;

/// A coordinate permutation followed by per-coordinate sign changes.
///
/// Acting on a vector `x` it produces `y` with `y[perm[i]] = signs[perm[i]] * x[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedMonomial {
    perm: Vec<usize>,
    /// `true` at the target coordinates that are negated.
    negate: Vec<bool>,
}

impl SignedMonomial {
    pub fn identity(n: usize) -> Self {
        SignedMonomial {
            perm: (0..n).collect(),
            negate: vec![false; n],
        }
    }

    /// `signs` entries must be `1` or `-1`.
    pub fn new(perm: Vec<usize>, signs: &[i8]) -> Result<Self> {
        let n = perm.len();
        if signs.len() != n {
            return Err(Error::Shape(format!("{} signs for length {n}", signs.len())));
        }
        let mut seen = vec![false; n];
        for &i in &perm {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Domain("perm is not a permutation".into()));
            }
        }
        let negate = signs
            .iter()
            .map(|&s| match s {
                1 => Ok(false),
                -1 => Ok(true),
                _ => Err(Error::Domain(format!("sign {s} is not ±1"))),
            })
            .collect::<Result<_>>()?;
        Ok(SignedMonomial { perm, negate })
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut g = Self::identity(n);
        g.perm.swap(a, b);
        g
    }

    /// `i -> i + 1 mod n`.
    pub fn cycle(n: usize) -> Self {
        SignedMonomial {
            perm: (0..n).map(|i| (i + 1) % n).collect(),
            negate: vec![false; n],
        }
    }

    pub fn sign_flip(n: usize, coord: usize) -> Self {
        let mut g = Self::identity(n);
        g.negate[coord] = true;
        g
    }

    pub fn random<R: Rng + ?Sized>(n: usize, kind: GroupKind, rng: &mut R) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let negate = (0..n)
            .map(|_| kind == GroupKind::SignedMonomial && rng.gen_bool(0.5))
            .collect();
        SignedMonomial { perm, negate }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> Vec<i8> {
        self.negate.iter().map(|&b| if b { -1 } else { 1 }).collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let n = self.len();
        if other.len() != n {
            return Err(Error::Shape("monomials of different lengths".into()));
        }
        let inv = self.inverse();
        Ok(SignedMonomial {
            perm: other.perm.iter().map(|&j| self.perm[j]).collect(),
            negate: (0..n).map(|k| self.negate[k] ^ other.negate[inv.perm[k]]).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let n = self.len();
        let mut perm = vec![0; n];
        for (i, &j) in self.perm.iter().enumerate() {
            perm[j] = i;
        }
        SignedMonomial {
            negate: (0..n).map(|j| self.negate[self.perm[j]]).collect(),
            perm,
        }
    }

    pub fn apply_vec(&self, md: Modulus, x: &[u64]) -> Vec<u64> {
        let mut y = vec![0; x.len()];
        for (i, &v) in x.iter().enumerate() {
            let j = self.perm[i];
            y[j] = if self.negate[j] { md.neg(v) } else { v };
        }
        y
    }

    /// The image of a code, in Howell form.
    pub fn apply(&self, c: &CodeZp2) -> Result<CodeZp2> {
        if c.n() != self.len() {
            return Err(Error::Shape(format!(
                "monomial of length {} applied to a code of length {}",
                self.len(),
                c.n()
            )));
        }
        let md = c.modulus();
        let rows: Vec<Vec<u64>> = (0..c.gens().rows())
            .map(|i| self.apply_vec(md, c.gens().row(i)))
            .collect();
        Ok(CodeZp2::from_matrix(&ResidueMatrix::from_residue_rows(md, c.n(), &rows)?))
    }

    /// Every element of the group on `n` coordinates, for small `n`.
    pub fn all(n: usize, kind: GroupKind) -> Vec<SignedMonomial> {
        let mut perms = Vec::new();
        permutations(&mut (0..n).collect(), 0, &mut perms);
        let masks = match kind {
            GroupKind::SignedMonomial => 1u32 << n,
            GroupKind::Permutation => 1,
        };
        let mut out = Vec::with_capacity(perms.len() * masks as usize);
        for perm in perms {
            for mask in 0..masks {
                out.push(SignedMonomial {
                    perm: perm.clone(),
                    negate: (0..n).map(|j| mask >> j & 1 == 1).collect(),
                });
            }
        }
        out
    }
}

fn permutations(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permutations(cur, k + 1, out);
        cur.swap(k, i);
    }
}

/// The group acting on coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    /// All `n! 2^n` signed permutations.
    SignedMonomial,
    /// Coordinate permutations only.
    Permutation,
}

impl GroupKind {
    pub fn order(self, n: usize) -> BigUint {
        let fact: BigUint = (1..=n as u64).map(BigUint::from).product();
        match self {
            GroupKind::SignedMonomial => fact << n,
            GroupKind::Permutation => fact,
        }
    }

    /// Group used to classify a family: families containing `1` are only
    /// closed under permutations.
    pub fn for_family(f: Family) -> Self {
        if f.contains_one() {
            GroupKind::Permutation
        } else {
            GroupKind::SignedMonomial
        }
    }

    fn generators(self, n: usize) -> Vec<SignedMonomial> {
        let mut g = Vec::new();
        if n >= 2 {
            g.push(SignedMonomial::transposition(n, 0, 1));
            g.push(SignedMonomial::cycle(n));
        }
        if self == GroupKind::SignedMonomial && n >= 1 {
            g.push(SignedMonomial::sign_flip(n, 0));
        }
        g
    }
}

fn check_length(n: usize) -> Result<()> {
    if n > AUT_MAX_LENGTH {
        return Err(Error::Budget {
            what: "signed monomial search".into(),
            needed: format!("|E| = {}", GroupKind::SignedMonomial.order(n)),
            limit: format!("length {AUT_MAX_LENGTH}"),
        });
    }
    Ok(())
}

/// Per-column invariants: for each coordinate, the counts of (value class at
/// that coordinate, value-class composition of the whole word). `None` when
/// the code is too large to scan.
fn fingerprints(c: &CodeZp2) -> Option<Vec<u64>> {
    let q = c.modulus().value();
    let n = c.n();
    let words = c.codewords(FINGERPRINT_WORD_LIMIT).ok()?;
    let class = |x: u64| x.min(q - x);
    let mut tallies: Vec<HashMap<(u64, u64), u32>> = vec![HashMap::new(); n];
    for w in words {
        let mut comp = 0u64;
        for &x in &w {
            let k = class(x);
            if k != 0 {
                comp = comp.wrapping_add(1u64 << (8 * ((k - 1) % 8)));
            }
        }
        for (t, &x) in tallies.iter_mut().zip(&w) {
            *t.entry((class(x), comp)).or_insert(0) += 1;
        }
    }
    Some(
        tallies
            .into_iter()
            .map(|t| {
                let mut v: Vec<_> = t.into_iter().collect();
                v.sort_unstable();
                let mut h = DefaultHasher::new();
                v.hash(&mut h);
                h.finish()
            })
            .collect(),
    )
}

struct Search<'a> {
    md: Modulus,
    n: usize,
    src: &'a ResidueMatrix,
    src_fp: Option<Vec<u64>>,
    dst_fp: Option<Vec<u64>>,
    /// Howell form of the target code restricted to its first `t + 1` columns.
    dst_prefix: Vec<ResidueMatrix>,
    multipliers: Vec<u64>,
}

impl<'a> Search<'a> {
    fn new(src: &'a CodeZp2, dst: &CodeZp2, kind: GroupKind) -> Self {
        let md = src.modulus();
        let n = src.n();
        let dst_prefix = (0..n)
            .map(|t| howell_form(&dst.gens().select_columns(&(0..=t).collect::<Vec<_>>())))
            .collect();
        let multipliers = match kind {
            GroupKind::SignedMonomial => vec![1, md.neg(1)],
            GroupKind::Permutation => vec![1],
        };
        Search {
            md,
            n,
            src: src.gens(),
            src_fp: fingerprints(src),
            dst_fp: fingerprints(dst),
            dst_prefix,
            multipliers,
        }
    }

    fn compatible(&self, i: usize, t: usize) -> bool {
        match (&self.src_fp, &self.dst_fp) {
            (Some(a), Some(b)) => a[i] == b[t],
            _ => true,
        }
    }

    fn prefix_matches(&self, chosen: &[(usize, u64)]) -> bool {
        let t = chosen.len() - 1;
        let mut m = ResidueMatrix::zeros(self.md, self.src.rows(), chosen.len());
        for r in 0..self.src.rows() {
            for (j, &(i, s)) in chosen.iter().enumerate() {
                m.set(r, j, self.md.mul(self.src.get(r, i), s));
            }
        }
        howell_form(&m) == self.dst_prefix[t]
    }

    /// Depth-first completion of a partial assignment of source columns
    /// (with multipliers) to target columns `0..chosen.len()`.
    fn extend(&self, chosen: &mut Vec<(usize, u64)>, used: &mut [bool]) -> bool {
        let t = chosen.len();
        if t == self.n {
            return true;
        }
        for i in 0..self.n {
            if used[i] || !self.compatible(i, t) {
                continue;
            }
            for &s in &self.multipliers {
                chosen.push((i, s));
                if self.prefix_matches(chosen) {
                    used[i] = true;
                    if self.extend(chosen, used) {
                        return true;
                    }
                    used[i] = false;
                }
                chosen.pop();
            }
        }
        false
    }

    fn to_monomial(&self, chosen: &[(usize, u64)]) -> SignedMonomial {
        let mut perm = vec![0; self.n];
        let mut negate = vec![false; self.n];
        for (t, &(i, s)) in chosen.iter().enumerate() {
            perm[i] = t;
            negate[t] = s != 1;
        }
        SignedMonomial { perm, negate }
    }
}

/// Order of the stabiliser of `c` in the given group.
///
/// Computed along the stabiliser chain of the target columns: at level `t`
/// the group fixing columns `0..t` pointwise is split by where column `t`
/// comes from, and each candidate is kept if some automorphism realises it.
pub fn aut_order_in(c: &CodeZp2, kind: GroupKind) -> Result<BigUint> {
    let n = c.n();
    check_length(n)?;
    let search = Search::new(c, c, kind);
    let mut order = BigUint::one();
    let mut fixed: Vec<(usize, u64)> = Vec::with_capacity(n);
    for t in 0..n {
        let mut orbit = 0u64;
        for i in t..n {
            if !search.compatible(i, t) {
                continue;
            }
            for &s in &search.multipliers {
                let mut chosen = fixed.clone();
                chosen.push((i, s));
                if !search.prefix_matches(&chosen) {
                    continue;
                }
                let mut used = vec![false; n];
                for &(j, _) in &chosen {
                    used[j] = true;
                }
                if search.extend(&mut chosen, &mut used) {
                    orbit += 1;
                }
            }
        }
        order *= orbit;
        fixed.push((t, 1));
    }
    Ok(order)
}

/// Order of the signed monomial automorphism group of `c`.
pub fn aut_order(c: &CodeZp2) -> Result<BigUint> {
    aut_order_in(c, GroupKind::SignedMonomial)
}

/// A group element mapping `a` onto `b`, if there is one.
pub fn are_equivalent_in(a: &CodeZp2, b: &CodeZp2, kind: GroupKind) -> Result<Option<SignedMonomial>> {
    if a.p() != b.p() || a.n() != b.n() {
        return Err(Error::Shape("codes over different rings or lengths".into()));
    }
    check_length(a.n())?;
    if a.code_type() != b.code_type() {
        return Ok(None);
    }
    let search = Search::new(a, b, kind);
    if let (Some(x), Some(y)) = (&search.src_fp, &search.dst_fp) {
        let (mut x, mut y) = (x.clone(), y.clone());
        x.sort_unstable();
        y.sort_unstable();
        if x != y {
            return Ok(None);
        }
    }
    let mut chosen = Vec::with_capacity(a.n());
    let mut used = vec![false; a.n()];
    Ok(search
        .extend(&mut chosen, &mut used)
        .then(|| search.to_monomial(&chosen)))
}

pub fn are_equivalent(a: &CodeZp2, b: &CodeZp2) -> Result<Option<SignedMonomial>> {
    are_equivalent_in(a, b, GroupKind::SignedMonomial)
}

/// One equivalence class in a classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassEntry {
    /// The least member of the class.
    pub representative: CodeZp2,
    pub aut_order: BigUint,
    pub class_size: usize,
}

/// Equivalence classes of a family with the mass check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationResult {
    pub family: Family,
    pub p: u64,
    pub n: usize,
    pub code_type: Option<(usize, usize)>,
    pub group: GroupKind,
    pub classes: Vec<ClassEntry>,
    pub mass_sum: Ratio<BigUint>,
    pub expected_mass: BigUint,
    pub certified: bool,
    pub diagnostic: Option<String>,
}

impl ClassificationResult {
    pub fn representatives(&self) -> impl Iterator<Item = &CodeZp2> {
        self.classes.iter().map(|c| &c.representative)
    }

    pub fn aut_orders(&self) -> Vec<BigUint> {
        self.classes.iter().map(|c| c.aut_order.clone()).collect()
    }
}

#[derive(Serialize)]
struct WireRep {
    matrix: Vec<Vec<u64>>,
    aut_order: String,
}

#[derive(Serialize)]
struct WireResult<'a> {
    family: Family,
    p: u64,
    n: usize,
    #[serde(rename = "type")]
    code_type: Option<[usize; 2]>,
    group: GroupKind,
    representatives: Vec<WireRep>,
    mass_sum: String,
    expected_mass: String,
    certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostic: &'a Option<String>,
}

impl Serialize for ClassificationResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WireResult {
            family: self.family,
            p: self.p,
            n: self.n,
            code_type: self.code_type.map(|(a, b)| [a, b]),
            group: self.group,
            representatives: self
                .classes
                .iter()
                .map(|c| WireRep {
                    matrix: c.representative.gens().row_vecs(),
                    aut_order: c.aut_order.to_string(),
                })
                .collect(),
            mass_sum: self.mass_sum.to_string(),
            expected_mass: self.expected_mass.to_string(),
            certified: self.certified,
            diagnostic: &self.diagnostic,
        }
        .serialize(s)
    }
}

/// Where the members of a family come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilySource {
    /// The constructive lift enumerators over all residue/torsion chains.
    Lifting,
    /// The exhaustive oracle sweep.
    Oracle(OracleBudget),
}

/// Types `{k1, k2}` a classification covers.
fn types_for(family: Family, n: usize, k1: Option<usize>, k2: Option<usize>) -> Result<Vec<(usize, usize)>> {
    if family.has_fixed_type() {
        match (k1, k2) {
            (Some(a), Some(b)) => Ok(vec![(a, b)]),
            _ => Err(Error::Domain(format!("family {family} needs both k1 and k2"))),
        }
    } else {
        if let (Some(a), Some(b)) = (k1, k2) {
            if 2 * a + b != n {
                return Err(Error::Domain(format!("self-dual codes have 2k1 + k2 = n = {n}")));
            }
        }
        Ok(match k1 {
            Some(a) if 2 * a <= n => vec![(a, n - 2 * a)],
            Some(a) => return Err(Error::Domain(format!("k1 = {a} exceeds n/2"))),
            None => (0..=n / 2).map(|a| (a, n - 2 * a)).collect(),
        })
    }
}

fn lift_family(family: Family, p: u64, n: usize, (k1, k2): (usize, usize)) -> Result<Vec<CodeZp2>> {
    if 2 * k1 + k2 > n {
        return Ok(Vec::new());
    }
    let even = family.is_quaternary_even();
    if even && p != 2 {
        return Err(Error::Domain(format!("family {family} lives over Z/4")));
    }
    if even && k1 == 0 {
        return Ok(Vec::new());
    }
    let filter = match (even, p) {
        (true, _) => SweepFilter::DoublyEvenWithOne,
        (false, 2) => SweepFilter::DoublyEven,
        (false, _) => SweepFilter::SelfOrthogonal,
    };
    let residues = enumerate_fp_codes(p, n, k1, filter)?;
    let chunks: Vec<Result<Vec<CodeZp2>>> = residues
        .par_iter()
        .map(|c1| {
            let mut out = Vec::new();
            for c2 in intermediate_codes(c1, k2)? {
                if !even {
                    out.extend(so_lifts(c1, &c2)?.codes());
                } else if family.contains_one() {
                    out.extend(even_lifts_with_one(c1, &c2)?.codes());
                } else {
                    out.extend(even_lifts_with_pm1(c1, &c2)?);
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for c in chunks {
        all.extend(c?);
    }
    all.sort();
    Ok(all)
}

/// All members of a family, sorted.
pub fn family_members(
    family: Family,
    p: u64,
    n: usize,
    k1: Option<usize>,
    k2: Option<usize>,
    source: FamilySource,
) -> Result<Vec<CodeZp2>> {
    let mut all = Vec::new();
    for t in types_for(family, n, k1, k2)? {
        match source {
            FamilySource::Lifting => all.extend(lift_family(family, p, n, t)?),
            FamilySource::Oracle(budget) => all.extend(oracle_enumerate(
                p,
                n,
                OraclePredicate::for_family(family),
                Some(t),
                budget,
            )?),
        }
    }
    all.sort();
    Ok(all)
}

fn expected_mass(family: Family, p: u64, n: usize, types: &[(usize, usize)]) -> Result<BigUint> {
    if family.has_fixed_type() {
        let (a, b) = types[0];
        return Ok(mass(family, p, n, Some(a), Some(b))?.value);
    }
    let report = mass(family, p, n, None, None)?;
    Ok(report
        .breakdown
        .iter()
        .filter(|t| types.contains(&(t.k1, t.k2)))
        .map(|t| t.term.clone())
        .sum())
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Splits a sorted, group-closed list of codes into orbits. Each orbit is
/// listed in sorted order.
pub fn orbits(codes: &[CodeZp2], kind: GroupKind) -> Result<Vec<Vec<usize>>> {
    let Some(first) = codes.first() else {
        return Ok(Vec::new());
    };
    let gens = kind.generators(first.n());
    let index: HashMap<&CodeZp2, usize> = codes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let images: Vec<Result<Vec<usize>>> = codes
        .par_iter()
        .map(|c| {
            gens.iter()
                .map(|g| {
                    let img = g.apply(c)?;
                    index.get(&img).copied().ok_or_else(|| {
                        Error::Precondition(format!("family is not closed under the group: {img:?}"))
                    })
                })
                .collect()
        })
        .collect();
    let mut parent: Vec<usize> = (0..codes.len()).collect();
    for (i, imgs) in images.into_iter().enumerate() {
        for j in imgs? {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for i in 0..codes.len() {
        let r = find(&mut parent, i);
        let k = *slot.entry(r).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[k].push(i);
    }
    Ok(classes)
}

/// Classifies the codes of a family up to the group that preserves it and
/// checks the mass identity against the closed-form count.
pub fn classify(
    p: u64,
    n: usize,
    family: Family,
    k1: Option<usize>,
    k2: Option<usize>,
    source: FamilySource,
) -> Result<ClassificationResult> {
    check_length(n)?;
    let types = types_for(family, n, k1, k2)?;
    let members = family_members(family, p, n, k1, k2, source)?;
    let kind = GroupKind::for_family(family);
    let classes = orbits(&members, kind)?;
    let auts: Vec<Result<BigUint>> = classes
        .par_iter()
        .map(|cl| aut_order_in(&members[cl[0]], kind))
        .collect();
    let group_order = kind.order(n);
    let mut mass_sum = Ratio::from_integer(BigUint::zero());
    let mut entries = Vec::with_capacity(classes.len());
    let mut problems = Vec::new();
    for (cl, aut) in classes.iter().zip(auts) {
        let aut = aut?;
        let term = Ratio::new(group_order.clone(), aut.clone());
        if !term.is_integer() {
            problems.push(format!("|Aut| = {aut} does not divide the group order"));
        } else if term.to_integer() != BigUint::from(cl.len()) {
            problems.push(format!(
                "orbit of size {} but |G|/|Aut| = {}",
                cl.len(),
                term.to_integer()
            ));
        }
        mass_sum += term;
        entries.push(ClassEntry {
            representative: members[cl[0]].clone(),
            aut_order: aut,
            class_size: cl.len(),
        });
    }
    let expected = expected_mass(family, p, n, &types)?;
    if !mass_sum.is_integer() {
        problems.push(format!("mass sum {mass_sum} is not an integer"));
    }
    let certified = problems.is_empty() && mass_sum == Ratio::from_integer(expected.clone());
    if problems.is_empty() && !certified {
        problems.push(format!("mass sum {mass_sum} differs from the formula value {expected}"));
    }
    Ok(ClassificationResult {
        family,
        p,
        n,
        code_type: family.has_fixed_type().then(|| types[0]),
        group: kind,
        classes: entries,
        mass_sum,
        expected_mass: expected,
        certified,
        diagnostic: (!problems.is_empty()).then(|| problems.join("; ")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn code(p: u64, rows: &[&[i64]]) -> CodeZp2 {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        CodeZp2::from_generators(p, rows[0].len(), &rows).unwrap()
    }

    fn worked_example() -> Vec<CodeZp2> {
        vec![
            code(3, &[&[1, 1, 4, 0], &[0, 3, 6, 0]]),
            code(3, &[&[1, 1, 4, 3], &[0, 3, 6, 0]]),
            code(3, &[&[1, 1, 4, 6], &[0, 3, 6, 3]]),
            code(3, &[&[1, 7, 7, 0], &[0, 0, 0, 3]]),
        ]
    }

    #[test]
    fn apply_examples() {
        let c = code(3, &[&[1, 1, 4, 0]]);
        assert_eq!(SignedMonomial::identity(4).apply(&c).unwrap(), c);
        let neg = SignedMonomial::new((0..4).collect(), &[-1; 4]).unwrap();
        assert_eq!(neg.apply(&c).unwrap(), code(3, &[&[8, 8, 5, 0]]));
        assert_eq!(neg.apply(&c).unwrap(), c);
        let swap = SignedMonomial::transposition(2, 0, 1);
        assert_eq!(swap.apply(&code(2, &[&[1, 2]])).unwrap(), code(2, &[&[2, 1]]));
        assert!(matches!(swap.apply(&c), Err(Error::Shape(_))));
        assert!(SignedMonomial::new(vec![0, 0], &[1, 1]).is_err());
    }

    #[test]
    fn aut_examples() {
        let orders: Vec<u64> = worked_example()
            .iter()
            .map(|c| aut_order(c).unwrap().try_into().unwrap())
            .collect();
        assert_eq!(orders, vec![24, 12, 4, 8]);
        assert_eq!(aut_order(&CodeZp2::zero(3, 4).unwrap()).unwrap(), BigUint::from(384u32));
        assert!(matches!(
            aut_order(&CodeZp2::zero(2, 9).unwrap()),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn worked_example_is_inequivalent() {
        let reps = worked_example();
        for i in 0..reps.len() {
            for j in 0..reps.len() {
                let w = are_equivalent(&reps[i], &reps[j]).unwrap();
                assert_eq!(w.is_some(), i == j, "{i} vs {j}");
            }
        }
        let free = code(3, &[&[1, 1, 1, 0]]);
        assert_eq!(are_equivalent(&reps[0], &free).unwrap(), None);
    }

    #[test]
    fn witness_maps_code() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for c in worked_example() {
            let g = SignedMonomial::random(4, GroupKind::SignedMonomial, &mut rng);
            let d = g.apply(&c).unwrap();
            let w = are_equivalent(&c, &d).unwrap().expect("equivalent");
            assert_eq!(w.apply(&c).unwrap(), d);
        }
    }

    #[test]
    fn classify_worked_example() {
        let r = classify(3, 4, Family::SelfOrthogonal, Some(1), Some(1), FamilySource::Lifting).unwrap();
        assert!(r.certified, "{:?}", r.diagnostic);
        let mut orders = r.aut_orders();
        orders.sort();
        assert_eq!(orders, [4u32, 8, 12, 24].map(BigUint::from).to_vec());
        assert_eq!(r.mass_sum, Ratio::from_integer(BigUint::from(192u32)));
        for rep in worked_example() {
            assert!(r
                .representatives()
                .any(|x| are_equivalent(x, &rep).unwrap().is_some()));
        }
        let zero = classify(2, 4, Family::SelfOrthogonal, Some(0), Some(0), FamilySource::Lifting).unwrap();
        assert_eq!(zero.classes.len(), 1);
        assert!(zero.certified);
    }

    #[test]
    fn classify_from_oracle_agrees() {
        let a = classify(2, 4, Family::SelfDual, None, None, FamilySource::Lifting).unwrap();
        let b = classify(2, 4, Family::SelfDual, None, None, FamilySource::Oracle(OracleBudget::default())).unwrap();
        assert!(a.certified && b.certified);
        assert_eq!(a.classes, b.classes);
    }

    #[test]
    fn orbit_stabilizer_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [2i64, 3] {
            for _ in 0..6 {
                let n = rng.gen_range(1..=4);
                let rows: Vec<Vec<i64>> = (0..rng.gen_range(0..=2))
                    .map(|_| (0..n).map(|_| rng.gen_range(0..p * p)).collect())
                    .collect();
                let c = CodeZp2::from_generators(p as u64, n, &rows).unwrap();
                for kind in [GroupKind::SignedMonomial, GroupKind::Permutation] {
                    let orbit: std::collections::HashSet<CodeZp2> = SignedMonomial::all(n, kind)
                        .iter()
                        .map(|g| g.apply(&c).unwrap())
                        .collect();
                    let aut = aut_order_in(&c, kind).unwrap();
                    assert_eq!(aut * orbit.len(), kind.order(n), "{c:?} {kind:?}");
                }
            }
        }
    }

    #[test]
    fn json_shape() {
        let r = classify(3, 4, Family::SelfOrthogonal, Some(1), Some(1), FamilySource::Lifting).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["family"], "self-orthogonal");
        assert_eq!(v["type"], serde_json::json!([1, 1]));
        assert_eq!(v["mass_sum"], "192");
        assert_eq!(v["expected_mass"], "192");
        assert_eq!(v["certified"], true);
        assert_eq!(v["representatives"].as_array().unwrap().len(), 4);
    }

    fn arb_monomial(n: usize) -> impl Strategy<Value = SignedMonomial> {
        (Just((0..n).collect::<Vec<usize>>()).prop_shuffle(), prop::collection::vec(any::<bool>(), n))
            .prop_map(|(perm, negate)| SignedMonomial { perm, negate })
    }

    fn arb_case() -> impl Strategy<Value = (CodeZp2, SignedMonomial, SignedMonomial)> {
        (prop::sample::select(&[2u64, 3][..]), 1usize..=5).prop_flat_map(|(p, n)| {
            (
                prop::collection::vec(prop::collection::vec(0..(p * p) as i64, n), 0..=3)
                    .prop_map(move |rows| CodeZp2::from_generators(p, n, &rows).unwrap()),
                arb_monomial(n),
                arb_monomial(n),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn group_laws((c, g, h) in arb_case()) {
            let gh = g.compose(&h).unwrap();
            prop_assert_eq!(gh.apply(&c).unwrap(), g.apply(&h.apply(&c).unwrap()).unwrap());
            prop_assert_eq!(g.inverse().apply(&g.apply(&c).unwrap()).unwrap(), c.clone());
            prop_assert_eq!(g.compose(&g.inverse()).unwrap(), SignedMonomial::identity(c.n()));
        }

        #[test]
        fn invariants_preserved((c, g, _h) in arb_case()) {
            let d = g.apply(&c).unwrap();
            prop_assert_eq!(d.code_type(), c.code_type());
            prop_assert_eq!(d.cardinality(), c.cardinality());
            prop_assert_eq!(d.is_self_orthogonal(), c.is_self_orthogonal());
            if c.p() == 2 {
                prop_assert_eq!(d.is_even().unwrap(), c.is_even().unwrap());
                let mut wa: Vec<u64> = c.codewords(1 << 12).unwrap().map(|w| crate::code::euclidean_weight(&w)).collect();
                let mut wb: Vec<u64> = d.codewords(1 << 12).unwrap().map(|w| crate::code::euclidean_weight(&w)).collect();
                wa.sort_unstable();
                wb.sort_unstable();
                prop_assert_eq!(wa, wb);
            }
            let a = aut_order(&c).unwrap();
            prop_assert_eq!(aut_order(&d).unwrap(), a.clone());
            prop_assert!((GroupKind::SignedMonomial.order(c.n()) % a).is_zero());
        }
    }
}
