//! Parameter-grid checks comparing the constructive enumerators, the closed
//! formulas and the exhaustive oracle. Shared by the command-line `verify`
//! command and the acceptance suite.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::census::{
    enumerate_fp_codes, gaussian, intermediate_codes, mass_self_dual, mass_so, mass_type2,
    oracle_enumerate, sigma_p, so_lift_exponent2, even_lift_exponent2, Family, OracleBudget,
    OraclePredicate, SweepFilter, Type2With,
};
use crate::code::{CodeZp2, FpCode};
use crate::equivalence::{aut_order, classify, family_members, FamilySource, GroupKind, SignedMonomial};
use crate::error::Result;
use crate::lifting::{
    even_lifts_with_one, even_lifts_with_pm1, free_so_lifts, image_check, so_lifts, MatrixMap,
};
use crate::ringmat::{howell_in_place, rank_fp, Modulus, ResidueMatrix};

const MAX_RECORDED_FAILURES: usize = 12;

/// How much of each parameter grid to cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grid {
    /// A quick subset for smoke runs.
    Small,
    /// The complete ranges.
    Full,
}

/// Outcome of one grid check.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub id: u8,
    pub name: &'static str,
    pub checked: u64,
    pub failures: Vec<String>,
    pub failure_count: u64,
    pub elapsed: Duration,
    /// Extra information to print on success.
    pub note: Option<String>,
}

impl CheckReport {
    fn new(id: u8, name: &'static str) -> Self {
        CheckReport {
            id,
            name,
            checked: 0,
            failures: Vec::new(),
            failure_count: 0,
            elapsed: Duration::ZERO,
            note: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.checked > 0
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < MAX_RECORDED_FAILURES {
                self.failures.push(what());
            }
        }
    }

    fn merge(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.failure_count += other.failure_count;
        for f in other.failures {
            if self.failures.len() < MAX_RECORDED_FAILURES {
                self.failures.push(f);
            }
        }
    }
}

impl CheckReport {
    fn render(&self, with_time: bool) -> String {
        let mut s = format!(
            "[{}] criterion {} {}: {} checks, {} failures",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.checked,
            self.failure_count,
        );
        if with_time {
            s.push_str(&format!(", {:.1}s", self.elapsed.as_secs_f64()));
        }
        if let Some(n) = &self.note {
            s.push_str(&format!(" ({n})"));
        }
        for fail in &self.failures {
            s.push_str(&format!("\n    {fail}"));
        }
        s
    }

    /// The report without its wall-clock time, so reruns print identical text.
    pub fn untimed(&self) -> String {
        self.render(false)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(true))
    }
}

fn timed(mut r: CheckReport, start: Instant) -> CheckReport {
    r.elapsed = start.elapsed();
    r
}

fn residue_filter(p: u64) -> SweepFilter {
    if p == 2 {
        SweepFilter::DoublyEven
    } else {
        SweepFilter::SelfOrthogonal
    }
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

/// The length-4, type `{1, 1}` example over `Z/9`: four classes with
/// automorphism orders 24, 12, 4, 8 and mass 192.
pub fn check_worked_example() -> Result<CheckReport> {
    let start = Instant::now();
    let mut r = CheckReport::new(1, "worked example over Z/9");
    let res = classify(3, 4, Family::SelfOrthogonal, Some(1), Some(1), FamilySource::Lifting)?;
    r.expect(res.classes.len() == 4, || format!("{} classes, expected 4", res.classes.len()));
    let mut orders = res.aut_orders();
    orders.sort();
    let want: Vec<BigUint> = [4u64, 8, 12, 24].map(big).to_vec();
    r.expect(orders == want, || format!("aut orders {orders:?}, expected {{24, 12, 4, 8}}"));
    let mut terms: Vec<BigUint> = res
        .classes
        .iter()
        .map(|c| GroupKind::SignedMonomial.order(4) / &c.aut_order)
        .collect();
    terms.sort();
    let want_terms: Vec<BigUint> = [16u64, 32, 48, 96].map(big).to_vec();
    r.expect(terms == want_terms, || format!("mass terms {terms:?}, expected 16, 32, 96, 48"));
    r.expect(res.mass_sum == Ratio::from_integer(big(192)), || format!("mass sum {}", res.mass_sum));
    r.expect(res.certified, || format!("not certified: {:?}", res.diagnostic));
    let m = mass_so(4, 1, 1, 3)?;
    r.expect(m.value == big(192), || format!("mass_so(4,1,1,3) = {}", m.value));
    let s = sigma_p(4, 1, 3)?;
    r.expect(s == big(16), || format!("sigma_3(4,1) = {s}"));
    let g = gaussian(2, 1, 3)?;
    r.expect(g == big(4), || format!("[2 1]_3 = {g}"));
    r.note = Some(format!(
        "terms {}",
        terms.iter().rev().map(|t| t.to_string()).collect::<Vec<_>>().join(" + ")
    ));
    Ok(timed(r, start))
}

fn oracle_grid(grid: Grid) -> Vec<(u64, usize)> {
    match grid {
        Grid::Small => vec![(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)],
        Grid::Full => vec![(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (3, 1), (3, 2), (3, 3), (3, 4)],
    }
}

/// Oracle counts of self-orthogonal codes by type against the closed
/// formula, and set equality with the constructive enumeration.
pub fn check_oracle_grid(grid: Grid, budget: OracleBudget) -> Result<CheckReport> {
    let start = Instant::now();
    let mut r = CheckReport::new(2, "oracle vs formula, self-orthogonal by type");
    for (p, n) in oracle_grid(grid) {
        let all = oracle_enumerate(p, n, OraclePredicate::SelfOrthogonal, None, budget)?;
        let mut by_type: BTreeMap<(usize, usize), Vec<CodeZp2>> = BTreeMap::new();
        for c in all {
            by_type.entry(c.code_type()).or_default().push(c);
        }
        for k1 in 0..=n / 2 {
            for k2 in 0..=n - 2 * k1 {
                let oracle = by_type.remove(&(k1, k2)).unwrap_or_default();
                let formula = mass_so(n, k1, k2, p)?.value;
                r.expect(big(oracle.len() as u64) == formula, || {
                    format!("p={p} n={n} type {{{k1},{k2}}}: oracle {} formula {formula}", oracle.len())
                });
                let built = family_members(Family::SelfOrthogonal, p, n, Some(k1), Some(k2), FamilySource::Lifting)?;
                let distinct: HashSet<&CodeZp2> = built.iter().collect();
                r.expect(distinct.len() == built.len(), || {
                    format!("p={p} n={n} type {{{k1},{k2}}}: lifting emitted duplicates")
                });
                r.expect(built == oracle, || {
                    format!("p={p} n={n} type {{{k1},{k2}}}: lifting and oracle sets differ")
                });
            }
        }
        r.expect(by_type.is_empty(), || format!("p={p} n={n}: oracle found infeasible types {:?}", by_type.keys()));
    }
    Ok(timed(r, start))
}

/// Self-dual totals against the oracle.
pub fn check_self_dual_totals(grid: Grid, budget: OracleBudget) -> Result<CheckReport> {
    let start = Instant::now();
    let mut r = CheckReport::new(3, "self-dual totals vs oracle");
    let cases: &[(u64, usize)] = match grid {
        Grid::Small => &[(2, 2), (3, 2)],
        Grid::Full => &[(2, 2), (2, 4), (3, 2), (3, 4)],
    };
    let mut shown = Vec::new();
    for &(p, n) in cases {
        let oracle = oracle_enumerate(p, n, OraclePredicate::SelfDual, None, budget)?.len();
        let formula = mass_self_dual(n, p)?.value;
        r.expect(big(oracle as u64) == formula, || format!("p={p} n={n}: oracle {oracle} formula {formula}"));
        shown.push(format!("({p},{n})={formula}"));
    }
    r.note = Some(shown.join(" "));
    Ok(timed(r, start))
}

/// Grid for the free-lift and fiber checks: `(p, n)` with `k1 <= 2`.
fn lift_grid(grid: Grid) -> Vec<(u64, usize)> {
    let mut out = Vec::new();
    let ns: &[usize] = match grid {
        Grid::Small => &[1, 2, 3, 4],
        Grid::Full => &[1, 2, 3, 4, 5, 6],
    };
    for p in [2u64, 3, 5] {
        for &n in ns {
            out.push((p, n));
        }
    }
    out
}

fn free_count(p: u64, n: usize, k1: usize) -> BigUint {
    let twice = so_lift_exponent2(n, k1, 0, p);
    BigUint::from(p).pow((twice / 2) as u32)
}

fn check_one_residue(c1: &FpCode) -> Result<(CheckReport, CheckReport)> {
    let mut free_r = CheckReport::new(4, "");
    let mut fiber_r = CheckReport::new(5, "");
    let (p, n, k1) = (c1.p(), c1.n(), c1.dim());
    let label = || format!("p={p} n={n} C1={:?}", c1.basis().row_vecs());
    let x = free_so_lifts(c1)?;
    let want = free_count(p, n, k1);
    free_r.expect(x.count() == want, || format!("{}: {} free lifts, formula {want}", label(), x.count()));
    let free: Vec<CodeZp2> = x.codes().collect();
    let distinct: HashSet<&CodeZp2> = free.iter().collect();
    free_r.expect(big(distinct.len() as u64) == want, || {
        format!("{}: {} distinct free lifts, formula {want}", label(), distinct.len())
    });
    let mut bad = 0usize;
    for c in &free {
        if !(c.is_self_orthogonal() && c.residue() == *c1 && c.torsion() == *c1) {
            bad += 1;
        }
    }
    free_r.expect(bad == 0, || format!("{}: {bad} free lifts fail the residue/torsion/orthogonality check", label()));

    let md = c1.modulus().to_square();
    for k2 in 0..=n - 2 * k1 {
        for c2 in intermediate_codes(c1, k2)? {
            let fam = so_lifts(c1, &c2)?;
            // Sorted flat Howell matrices, so the join below can reuse one buffer.
            let members: Vec<CodeZp2> = fam.codes().collect();
            let mut keys: Vec<&[u64]> = members.iter().map(|c| c.gens().as_flat()).collect();
            keys.sort_unstable();
            keys.dedup();
            fiber_r.expect(big(keys.len() as u64) == fam.count(), || {
                format!("{} k2={k2}: so_lifts emitted duplicates", label())
            });
            let mut hits = vec![0u64; keys.len()];
            // p C1 already lies in every free lift, so only the rest of C2 is added.
            let scaled: Vec<u64> = (0..c2.dim())
                .filter(|&i| !c1.pivots().contains(&c2.pivots()[i]))
                .flat_map(|i| c2.basis().row(i).iter().map(|&x| x * p))
                .collect();
            let mut buf = Vec::with_capacity((k1 + n + c2.dim()) * n);
            let mut strays = 0u64;
            for f in &free {
                // The submodule generated by f and p C2.
                buf.clear();
                buf.extend_from_slice(f.gens().as_flat());
                buf.extend_from_slice(&scaled);
                howell_in_place(md, n, &mut buf);
                match keys.binary_search(&buf.as_slice()) {
                    Ok(i) => hits[i] += 1,
                    Err(_) => strays += 1,
                }
            }
            fiber_r.expect(strays == 0, || {
                format!("{} k2={k2}: {strays} free lifts extend outside the family", label())
            });
            let want = BigUint::from(p).pow((k1 * k2) as u32);
            let wrong = hits.iter().filter(|&&k| big(k) != want).count();
            fiber_r.expect(wrong == 0, || {
                format!("{} k2={k2}: {wrong} codes without exactly {want} free lifts", label())
            });
            if keys.len() * free.len() <= 2_000 {
                // Literal containment count at small sizes.
                let literal_ok = members.iter().all(|cp| {
                    let i = keys.binary_search(&cp.gens().as_flat()).expect("member key");
                    free.iter().filter(|f| f.is_subcode_of(cp)).count() as u64 == hits[i]
                });
                fiber_r.expect(literal_ok, || format!("{} k2={k2}: containment scan disagrees", label()));
            }
        }
    }
    Ok((free_r, fiber_r))
}

/// The free-lift and fiber checks at one `(p, n)`, residues of dimension at most 2.
pub fn check_lift_config(p: u64, n: usize) -> Result<(CheckReport, CheckReport)> {
    let mut free_r = CheckReport::new(4, "free-lift counts");
    let mut fiber_r = CheckReport::new(5, "fiber structure");
    for k1 in 0..=(n / 2).min(2) {
        let residues = enumerate_fp_codes(p, n, k1, residue_filter(p))?;
        let parts: Vec<Result<(CheckReport, CheckReport)>> =
            residues.par_iter().map(check_one_residue).collect();
        for part in parts {
            let (a, b) = part?;
            free_r.merge(a);
            fiber_r.merge(b);
        }
    }
    Ok((free_r, fiber_r))
}

/// Free-lift counts and the fiber structure of the residue/torsion map,
/// over every admissible residue with `k1 <= 2`.
pub fn check_lift_grid(grid: Grid) -> Result<(CheckReport, CheckReport)> {
    let start = Instant::now();
    let mut free_r = CheckReport::new(4, "free-lift counts");
    let mut fiber_r = CheckReport::new(5, "fiber structure");
    for (p, n) in lift_grid(grid) {
        let (a, b) = check_lift_config(p, n)?;
        free_r.merge(a);
        fiber_r.merge(b);
    }
    free_r.elapsed = start.elapsed();
    fiber_r.elapsed = free_r.elapsed;
    Ok((free_r, fiber_r))
}

fn pm1_words(c: &CodeZp2) -> Result<u64> {
    Ok(c.codewords(1 << 20)?.filter(|w| w.iter().all(|&x| x % 2 == 1)).count() as u64)
}

/// Even-lift counts at length 8 for every residue containing `1`.
pub fn check_even_lifts(grid: Grid) -> Result<CheckReport> {
    let start = Instant::now();
    let mut r = CheckReport::new(6, "even-lift counts at n = 8");
    let n = 8;
    let max_k1 = match grid {
        Grid::Small => 2,
        Grid::Full => 4,
    };
    for k1 in 1..=max_k1 {
        let residues = enumerate_fp_codes(2, n, k1, SweepFilter::DoublyEvenWithOne)?;
        let parts: Vec<Result<CheckReport>> = residues
            .par_iter()
            .map(|c1| {
                let mut r = CheckReport::new(6, "");
                let label = || format!("C1={:?}", c1.basis().row_vecs());
                for k2 in 0..=n - 2 * k1 {
                    let twice = even_lift_exponent2(n, k1, k2);
                    let want_one = big(2).pow((twice / 2) as u32);
                    let want_pm1 = &want_one << (n - k1 - k2);
                    for c2 in intermediate_codes(c1, k2)? {
                        let fam = even_lifts_with_one(c1, &c2)?;
                        let ones: Vec<CodeZp2> = fam.codes().collect();
                        let distinct: HashSet<&CodeZp2> = ones.iter().collect();
                        r.expect(big(distinct.len() as u64) == want_one, || {
                            format!("{} k2={k2}: {} codes containing 1, formula {want_one}", label(), distinct.len())
                        });
                        let odd = ones.iter().filter(|c| {
                            !(c.is_even().unwrap_or(false)
                                && c.contains(&[1; 8])
                                && c.residue() == *c1
                                && c.torsion() == c2)
                        });
                        let odd = odd.count();
                        r.expect(odd == 0, || format!("{} k2={k2}: {odd} bad codes containing 1", label()));
                        let pm1 = even_lifts_with_pm1(c1, &c2)?;
                        r.expect(big(pm1.len() as u64) == want_pm1, || {
                            format!("{} k2={k2}: {} codes with a ±1 word, formula {want_pm1}", label(), pm1.len())
                        });
                        let z = 1u64 << (k1 + k2);
                        let mut bad = 0;
                        for c in &pm1 {
                            if !(c.is_even()? && pm1_words(c)? == z && c.residue() == *c1 && c.torsion() == c2) {
                                bad += 1;
                            }
                        }
                        r.expect(bad == 0, || format!("{} k2={k2}: {bad} ±1 codes fail evenness or |Z ∩ C| = {z}", label()));
                    }
                }
                Ok(r)
            })
            .collect();
        for part in parts {
            r.merge(part?);
        }
    }
    Ok(timed(r, start))
}

/// Type II totals at length 8 and the certified classifications.
pub fn check_type2() -> Result<CheckReport> {
    let start = Instant::now();
    let mut r = CheckReport::new(7, "Type II totals and classification at n = 8");
    let mut notes = Vec::new();
    for (with, fam) in [(Type2With::One, Family::Type2One), (Type2With::Pm1, Family::Type2Pm1)] {
        let formula = mass_type2(8, with)?.value;
        let built = family_members(fam, 2, 8, None, None, FamilySource::Lifting)?;
        let mut bad = 0;
        for c in &built {
            let ok = c.is_self_dual()
                && c.is_even()?
                && if fam == Family::Type2One {
                    c.contains(&[1; 8])
                } else {
                    c.contains_pm1()?.is_some()
                };
            if !ok {
                bad += 1;
            }
        }
        r.expect(bad == 0, || format!("{fam}: {bad} constructed codes are not Type II of the right kind"));
        r.expect(big(built.len() as u64) == formula, || {
            format!("{fam}: constructive total {} formula {formula}", built.len())
        });
        let res = classify(2, 8, fam, None, None, FamilySource::Lifting)?;
        r.expect(res.certified, || format!("{fam}: classification not certified: {:?}", res.diagnostic));
        notes.push(format!("{fam}: {} codes, {} classes", formula, res.classes.len()));
    }
    r.note = Some(notes.join("; "));
    Ok(timed(r, start))
}

fn random_full_rank(rng: &mut ChaCha8Rng, md: Modulus, m: usize, n: usize) -> ResidueMatrix {
    loop {
        let rows: Vec<Vec<u64>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(0..md.p())).collect()).collect();
        let a = ResidueMatrix::from_residue_rows(md, n, &rows).expect("width n");
        if rank_fp(&a).expect("field") == m {
            return a;
        }
    }
}

fn map_trials(
    r: &mut CheckReport,
    rng: &mut ChaCha8Rng,
    (p, m, n): (u64, usize, usize),
    trials: usize,
    only: Option<MatrixMap>,
) -> Result<()> {
    let md = Modulus::field(p)?;
    for _ in 0..trials {
        let a = random_full_rank(rng, md, m, n);
        let mut maps = vec![MatrixMap::Psi];
        if p == 2 {
            maps.push(MatrixMap::Phi);
            if !FpCode::from_matrix(&a)?.contains_all_ones() {
                maps.push(MatrixMap::PhiAlpha);
            }
        }
        for which in maps.into_iter().filter(|w| only.map_or(true, |o| o == *w)) {
            let ic = image_check(&a, which)?;
            let domain = BigUint::from(p).pow((m * n) as u32);
            r.expect(ic.matches() && &ic.image_size * &ic.kernel_size == domain, || {
                format!(
                    "p={p} m={m} n={n} {which:?} A={:?}: image {} expected {}",
                    a.row_vecs(),
                    ic.image_size,
                    ic.expected_image
                )
            });
        }
    }
    Ok(())
}

/// Image and kernel sizes of the matrix maps on random full-rank matrices,
/// for every `1 <= m <= n` within the bounds.
pub fn check_matrix_maps(ps: &[u64], max_m: usize, max_n: usize, trials: usize, seed: u64) -> Result<CheckReport> {
    let start = Instant::now();
    let mut r = CheckReport::new(8, "matrix map images");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &p in ps {
        for m in 1..=max_m {
            for n in m..=max_n {
                map_trials(&mut r, &mut rng, (p, m, n), trials, None)?;
            }
        }
    }
    Ok(timed(r, start))
}

/// The same check at a single shape, optionally for one map only.
pub fn check_map_config(
    p: u64,
    m: usize,
    n: usize,
    only: Option<MatrixMap>,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    let start = Instant::now();
    let mut r = CheckReport::new(8, "matrix map images");
    if m == 0 || m > n {
        return Err(crate::error::Error::Domain(format!("need 1 <= m <= n, got m={m} n={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    map_trials(&mut r, &mut rng, (p, m, n), trials, only)?;
    if r.checked == 0 {
        return Err(crate::error::Error::Domain(format!("no trial applies to {only:?} at p = {p}")));
    }
    Ok(timed(r, start))
}

fn random_code(rng: &mut ChaCha8Rng, p: u64, n: usize) -> CodeZp2 {
    let k = rng.gen_range(0..=n.min(4));
    let q = (p * p) as i64;
    let rows: Vec<Vec<i64>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..q)).collect()).collect();
    CodeZp2::from_generators(p, n, &rows).expect("valid")
}

/// Structural identities on random codes.
pub fn check_structure(samples: usize, seed: u64, budget: OracleBudget) -> Result<CheckReport> {
    let start = Instant::now();
    let mut r = CheckReport::new(9, "structural invariants on random codes");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Self-orthogonal samples drawn from the exhaustive lists, which share no code with the lifts.
    let so_pool: Vec<CodeZp2> = (1..=4)
        .map(|n| oracle_enumerate(2, n, OraclePredicate::SelfOrthogonal, None, budget))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    for _ in 0..samples {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let n = rng.gen_range(1..=6);
        let c = random_code(&mut rng, p, n);
        let words = c.codewords(1 << 16)?.count() as u64;
        r.expect(big(words) == c.cardinality(), || format!("{c:?}: {words} words, cardinality {}", c.cardinality()));
        r.expect(c.cardinality() == c.residue().size() * c.torsion().size(), || {
            format!("{c:?}: |C| is not |residue| * |torsion|")
        });
        let d = c.dual();
        r.expect(d.dual() == c, || format!("{c:?}: dual is not an involution"));
        r.expect(
            c.cardinality() * d.cardinality() == BigUint::from(p).pow(2 * n as u32),
            || format!("{c:?}: |C| |C^⊥| != p^2n"),
        );
        let g = SignedMonomial::random(n, GroupKind::SignedMonomial, &mut rng);
        let img = g.apply(&c)?;
        let same_even = p != 2 || img.is_even()? == c.is_even()?;
        r.expect(
            img.code_type() == c.code_type() && img.is_self_orthogonal() == c.is_self_orthogonal() && same_even,
            || format!("{c:?}: monomial image changes an invariant"),
        );
        let aut = aut_order(&c)?;
        r.expect(
            !aut.is_zero() && (GroupKind::SignedMonomial.order(n) % &aut).is_zero(),
            || format!("{c:?}: |Aut| = {aut} does not divide 2^n n!"),
        );

        let s = &so_pool[rng.gen_range(0..so_pool.len())];
        let (res, tor) = (s.residue(), s.torsion());
        r.expect(
            res.is_doubly_even() && res.is_subcode_of(&tor) && tor.is_subcode_of(&res.dual()),
            || format!("{s:?}: residue/torsion chain fails"),
        );
    }
    Ok(timed(r, start))
}

/// Every acceptance check in order.
pub fn run_all(grid: Grid, budget: OracleBudget, seed: u64) -> Result<Vec<CheckReport>> {
    let mut out = vec![
        check_worked_example()?,
        check_oracle_grid(grid, budget)?,
        check_self_dual_totals(grid, budget)?,
    ];
    let (a, b) = check_lift_grid(grid)?;
    out.push(a);
    out.push(b);
    out.push(check_even_lifts(grid)?);
    out.push(check_type2()?);
    let (max_m, max_n, trials, samples) = match grid {
        Grid::Small => (2, 4, 10, 200),
        Grid::Full => (3, 6, 50, 1000),
    };
    out.push(check_matrix_maps(&[2, 3, 5], max_m, max_n, trials, seed)?);
    out.push(check_structure(samples, seed, budget)?);
    Ok(out)
}
