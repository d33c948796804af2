//! Colourings of `PS_c(N)`, monochromatic solution search, and greedy
//! progression-free subsets.
//!
//! The random scheme is part of the output contract: members are visited in
//! increasing order, each draws one `u64` `x` from `ChaCha8Rng::seed_from_u64(seed)`,
//! and its colour is `⌊x·r / 2⁶⁴⌋ + 1`.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::equations::{nontrivial_count, LinearForm};
use crate::ps_core::{members, PSParams};
use crate::{Error, Result, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ColouringScheme {
    /// Independent uniform colours from a seeded generator.
    Random,
    /// `(n mod r) + 1`.
    Residue,
    /// `(⌊log₂ n⌋ mod r) + 1`.
    DyadicBand,
}

impl ColouringScheme {
    pub const ALL: [ColouringScheme; 3] = [ColouringScheme::Random, ColouringScheme::Residue, ColouringScheme::DyadicBand];

    pub fn name(self) -> &'static str {
        match self {
            ColouringScheme::Random => "random",
            ColouringScheme::Residue => "residue",
            ColouringScheme::DyadicBand => "dyadic_band",
        }
    }
}

impl fmt::Display for ColouringScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ColouringScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(ColouringScheme::Random),
            "residue" => Ok(ColouringScheme::Residue),
            "dyadic_band" | "dyadic-band" => Ok(ColouringScheme::DyadicBand),
            _ => Err(Error::invalid(format!("unknown colouring scheme {s:?}"))),
        }
    }
}

/// A colouring of the members of `PS_c(N)` with colours `1..=r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colouring {
    members: Vec<u64>,
    colours: Vec<u32>,
    r: u32,
    scheme: ColouringScheme,
    seed: Option<u64>,
}

impl Colouring {
    pub fn members(&self) -> &[u64] {
        &self.members
    }

    /// Colours aligned with [`Colouring::members`].
    pub fn colours(&self) -> &[u32] {
        &self.colours
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn scheme(&self) -> ColouringScheme {
        self.scheme
    }

    /// The seed, for the random scheme.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn colour_of(&self, n: u64) -> Option<u32> {
        self.members.binary_search(&n).ok().map(|i| self.colours[i])
    }

    /// Members with colour `k`, in increasing order.
    pub fn class(&self, k: u32) -> Vec<u64> {
        self.members.iter().zip(&self.colours).filter(|(_, &c)| c == k).map(|(&n, _)| n).collect()
    }
}

/// Colours `PS_c(N)` by `scheme`; `seed` is ignored by the deterministic schemes.
pub fn make_colouring(params: &PSParams, scheme: ColouringScheme, r: u32, seed: u64) -> Result<Colouring> {
    colour_members(members(params)?, scheme, r, seed)
}

fn colour_members(members: Vec<u64>, scheme: ColouringScheme, r: u32, seed: u64) -> Result<Colouring> {
    if r == 0 {
        return Err(Error::invalid("need at least one colour"));
    }
    let colours: Vec<u32> = match scheme {
        ColouringScheme::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            members.iter().map(|_| ((u128::from(rng.next_u64()) * u128::from(r)) >> 64) as u32 + 1).collect()
        }
        ColouringScheme::Residue => members.iter().map(|&n| (n % u64::from(r)) as u32 + 1).collect(),
        ColouringScheme::DyadicBand => members.iter().map(|&n| (63 - n.leading_zeros()) % r + 1).collect(),
    };
    let seed = (scheme == ColouringScheme::Random).then_some(seed);
    Ok(Colouring { members, colours, r, scheme, seed })
}

/// A monochromatic solution with pairwise-distinct coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub colour: u32,
    pub x: Vec<u64>,
}

impl Witness {
    /// Exact recheck: `Σ cᵢxᵢ = 0`, distinct coordinates, all of colour `self.colour`.
    pub fn verify(&self, form: &LinearForm, colouring: &Colouring) -> bool {
        self.x.len() == form.s()
            && form.evaluate(&self.x) == 0
            && self.x.iter().enumerate().all(|(i, a)| !self.x[..i].contains(a))
            && self.x.iter().all(|&n| colouring.colour_of(n) == Some(self.colour))
    }
}

/// Attempts at random before the exhaustive search, for `s ≥ 5`.
const RANDOM_ATTEMPTS: usize = 200_000;

/// First colour class (in order `1..=r`) holding a nontrivial solution, with one such solution.
///
/// For `s ≤ 4` each class is first counted exactly; a positive count is then
/// resolved by fixing coordinates in increasing order and completing the last
/// one from the equation. For `s ≥ 5` random tuples are tried first.
pub fn find_monochromatic(form: &LinearForm, colouring: &Colouring) -> Result<Option<Witness>> {
    for k in 1..=colouring.r() {
        let class = colouring.class(k);
        if class.len() < form.s() {
            continue;
        }
        let found = if form.s() <= 4 {
            if nontrivial_count(form, &class)? == 0 {
                None
            } else {
                first_solution(form.coeffs(), &class)
            }
        } else {
            random_solution(form.coeffs(), &class, colouring.seed().unwrap_or(0) ^ u64::from(k))
                .or_else(|| first_solution(form.coeffs(), &class))
        };
        if let Some(x) = found {
            return Ok(Some(Witness { colour: k, x }));
        }
    }
    Ok(None)
}

struct Bitmap {
    words: Vec<u64>,
}

impl Bitmap {
    fn new(set: &[u64]) -> Self {
        let cap = set.last().copied().unwrap_or(0);
        let mut words = vec![0u64; (cap / 64 + 1) as usize];
        for &n in set {
            words[(n / 64) as usize] |= 1 << (n % 64);
        }
        Bitmap { words }
    }

    fn contains(&self, n: i128) -> bool {
        if n < 0 || n >= self.words.len() as i128 * 64 {
            return false;
        }
        let n = n as u64;
        self.words[(n / 64) as usize] >> (n % 64) & 1 == 1
    }
}

/// `x_s = -(c₁x₁ + … + c_{s-1}x_{s-1})/c_s` when that is a new member of the set.
fn complete(coeffs: &[i64], partial: i128, prefix: &[u64], bits: &Bitmap) -> Option<u64> {
    let last = *coeffs.last()? as i128;
    if partial % last != 0 {
        return None;
    }
    let v = -partial / last;
    (bits.contains(v) && !prefix.contains(&(v as u64))).then_some(v as u64)
}

/// Lexicographically first distinct-coordinate solution over `set`, or `None`.
fn first_solution(coeffs: &[i64], set: &[u64]) -> Option<Vec<u64>> {
    let bits = Bitmap::new(set);
    let mut x = Vec::with_capacity(coeffs.len());
    fn go(coeffs: &[i64], set: &[u64], bits: &Bitmap, partial: i128, x: &mut Vec<u64>) -> bool {
        let depth = x.len();
        if depth + 1 == coeffs.len() {
            if let Some(v) = complete(coeffs, partial, x, bits) {
                x.push(v);
                return true;
            }
            return false;
        }
        for &n in set {
            if x.contains(&n) {
                continue;
            }
            x.push(n);
            if go(coeffs, set, bits, partial + coeffs[depth] as i128 * n as i128, x) {
                return true;
            }
            x.pop();
        }
        false
    }
    go(coeffs, set, &bits, 0, &mut x).then_some(x)
}

fn random_solution(coeffs: &[i64], set: &[u64], seed: u64) -> Option<Vec<u64>> {
    let bits = Bitmap::new(set);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = set.len() as u128;
    let mut x = Vec::with_capacity(coeffs.len());
    for _ in 0..RANDOM_ATTEMPTS {
        x.clear();
        let mut partial = 0i128;
        for &c in &coeffs[..coeffs.len() - 1] {
            let n = set[((u128::from(rng.next_u64()) * len) >> 64) as usize];
            partial += c as i128 * n as i128;
            x.push(n);
        }
        if x.iter().enumerate().any(|(i, a)| x[..i].contains(a)) {
            continue;
        }
        if let Some(v) = complete(coeffs, partial, &x, &bits) {
            x.push(v);
            return Some(x);
        }
    }
    None
}

/// Greedy subset of `PS_c(N)` free of nontrivial solutions to `x + y = 2z`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProgressionFree {
    pub set: Vec<u64>,
    pub size: usize,
    /// `|A| / |PS_c(N)|`.
    pub ratio: f64,
    /// `(log log N)^{-0.9/c}`, for context; `None` when `log log N ≤ 0`.
    pub comparator: Option<f64>,
    /// Nontrivial solutions of `x + y = 2z` in `A`, recounted independently (always 0).
    pub certified_count: u128,
}

/// Scans `PS_c(N)` upwards, keeping each member that closes no 3-term progression.
pub fn greedy_3ap_free(params: &PSParams) -> Result<ProgressionFree> {
    let ms = members(params)?;
    let mut set: Vec<u64> = Vec::new();
    let mut bits = vec![false; params.n() as usize + 1];
    for &x in &ms {
        // x is the largest term, so the progression is y < z < x with y = 2z - x
        let closes = set.iter().rev().take_while(|&&z| 2 * z > x).any(|&z| bits[(2 * z - x) as usize]);
        if !closes {
            set.push(x);
            bits[x as usize] = true;
        }
    }
    let form = LinearForm::new(vec![1, 1, -2])?;
    let certified_count = nontrivial_count(&form, &set)?;
    if certified_count != 0 {
        return Err(Error::Violation(Box::new(Violation {
            check: "greedy_3ap_free",
            message: "greedy set contains a nontrivial 3-term progression".into(),
            values: vec![("count".into(), certified_count as f64), ("N".into(), params.n() as f64)],
        })));
    }
    let loglog = (params.n() as f64).ln().ln();
    let comparator = (loglog > 0.0).then(|| loglog.powf(-0.9 / params.c()));
    let size = set.len();
    Ok(ProgressionFree { ratio: size as f64 / ms.len() as f64, size, set, comparator, certified_count })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub scheme: ColouringScheme,
    pub r: u32,
    pub trial: u32,
    /// Seed of the colouring (random scheme only).
    pub seed: Option<u64>,
    pub witness: Option<Witness>,
    pub elapsed: Duration,
}

impl ScanRow {
    pub fn found(&self) -> bool {
        self.witness.is_some()
    }
}

/// Runs [`find_monochromatic`] over colourings. The random scheme runs
/// `trials` colourings with seeds `seed + trial`; the deterministic schemes run once.
///
/// Every witness is rechecked; a failed recheck is an [`Error::Violation`].
pub fn colour_scan(
    form: &LinearForm,
    params: &PSParams,
    schemes: &[ColouringScheme],
    rs: &[u32],
    trials: u32,
    seed: u64,
) -> Result<Vec<ScanRow>> {
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    let ms = members(params)?;
    let mut jobs = Vec::new();
    for &scheme in schemes {
        for &r in rs {
            let runs = if scheme == ColouringScheme::Random { trials } else { 1 };
            jobs.extend((0..runs).map(|t| (scheme, r, t)));
        }
    }
    jobs.into_par_iter()
        .map(|(scheme, r, trial)| {
            let start = Instant::now();
            let colouring = colour_members(ms.clone(), scheme, r, seed.wrapping_add(u64::from(trial)))?;
            let witness = find_monochromatic(form, &colouring)?;
            if let Some(w) = &witness {
                if !w.verify(form, &colouring) {
                    return Err(Error::Violation(Box::new(Violation {
                        check: "monochromatic_witness",
                        message: format!("witness {:?} fails the exact recheck", w.x),
                        values: vec![("r".into(), f64::from(r)), ("trial".into(), f64::from(trial))],
                    })));
                }
            }
            Ok(ScanRow { scheme, r, trial, seed: colouring.seed(), witness, elapsed: start.elapsed() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::oracle;

    fn p(c: f64, n: u64) -> PSParams {
        PSParams::new(c, n).unwrap()
    }

    fn form(c: &[i64]) -> LinearForm {
        LinearForm::new(c.to_vec()).unwrap()
    }

    #[test]
    fn colouring_examples() {
        for scheme in ColouringScheme::ALL {
            let col = make_colouring(&p(1.5, 100), scheme, 1, 9).unwrap();
            assert!(col.colours().iter().all(|&c| c == 1));
        }
        let res = make_colouring(&p(1.5, 12), ColouringScheme::Residue, 2, 0).unwrap();
        assert_eq!(res.class(2), vec![1, 5, 11]);
        assert_eq!(res.class(1), vec![2, 8]);
        assert_eq!(res.seed(), None);
        let band = make_colouring(&p(1.5, 12), ColouringScheme::DyadicBand, 2, 0).unwrap();
        assert_eq!(band.colours(), &[1, 2, 1, 2, 2]);
        assert!(make_colouring(&p(1.5, 12), ColouringScheme::Random, 0, 0).is_err());
    }

    #[test]
    fn random_colouring_is_reproducible() {
        let a = make_colouring(&p(1.2, 5000), ColouringScheme::Random, 3, 42).unwrap();
        let b = make_colouring(&p(1.2, 5000), ColouringScheme::Random, 3, 42).unwrap();
        assert_eq!(a, b);
        let other = make_colouring(&p(1.2, 5000), ColouringScheme::Random, 3, 43).unwrap();
        assert_ne!(a.colours(), other.colours());
        assert!((1..=3).all(|k| !a.class(k).is_empty()));
        assert!(a.colours().iter().all(|&c| (1..=3).contains(&c)));
    }

    #[test]
    fn pinned_random_colours() {
        let col = make_colouring(&p(1.5, 30), ColouringScheme::Random, 3, 2024).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let expect: Vec<u32> = col.members().iter().map(|_| ((rng.next_u64() as u128 * 3) >> 64) as u32 + 1).collect();
        assert_eq!(col.colours(), expect.as_slice());
    }

    #[test]
    fn witness_examples() {
        let q = p(1.5, 30);
        let schur = form(&[1, 1, -1]);
        let mono = make_colouring(&q, ColouringScheme::Residue, 1, 0).unwrap();
        assert_eq!(mono.members(), &[1, 2, 5, 8, 11, 14, 18, 22, 27]);
        let w = find_monochromatic(&schur, &mono).unwrap().unwrap();
        assert_eq!(w, Witness { colour: 1, x: vec![5, 22, 27] });
        assert!(w.verify(&schur, &mono));
        let parity = make_colouring(&q, ColouringScheme::Residue, 2, 0).unwrap();
        let w = find_monochromatic(&schur, &parity).unwrap().unwrap();
        assert_eq!(w, Witness { colour: 1, x: vec![8, 14, 22] });
        assert_eq!(find_monochromatic(&form(&[1, 1, 1]), &mono).unwrap(), None);
        assert!(!Witness { colour: 1, x: vec![5, 22, 28] }.verify(&schur, &mono));
        assert!(!Witness { colour: 2, x: vec![5, 22, 27] }.verify(&schur, &mono));
    }

    #[test]
    fn search_agrees_with_enumeration() {
        let set: Vec<u64> = vec![1, 2, 5, 8, 11, 14, 18, 22, 27, 31, 36, 41];
        for coeffs in [vec![1, 1, -1], vec![1, 1, -2], vec![2, 1, -1, -3], vec![1, 2, -1, -1, -1], vec![3, -2]] {
            let all = oracle::solutions(&coeffs, &set, true);
            assert_eq!(first_solution(&coeffs, &set), all.first().cloned(), "{coeffs:?}");
            if let Some(x) = random_solution(&coeffs, &set, 5) {
                assert!(all.contains(&x));
            }
        }
    }

    #[test]
    fn larger_forms_use_sampling() {
        let q = p(1.2, 400);
        let col = make_colouring(&q, ColouringScheme::Random, 2, 11).unwrap();
        let f = form(&[1, 1, 1, 1, -1, -3]);
        let w = find_monochromatic(&f, &col).unwrap().unwrap();
        assert!(w.verify(&f, &col));
    }

    #[test]
    fn greedy_examples() {
        let g = greedy_3ap_free(&p(1.5, 11)).unwrap();
        assert_eq!(g.set, vec![1, 2, 5, 11]);
        assert_eq!(g.size, 4);
        assert_eq!(g.certified_count, 0);
        assert!((g.ratio - 0.8).abs() < 1e-12);
        assert!(g.comparator.unwrap() > 1.0);
        let single = greedy_3ap_free(&p(1.5, 1)).unwrap();
        assert_eq!(single.set, vec![1]);
        assert_eq!(single.comparator, None);
        let big = greedy_3ap_free(&p(1.3, 3000)).unwrap();
        assert_eq!(oracle::count_solutions(&[1, 1, -2], &big.set, true), 0);
    }

    #[test]
    fn scan_rows() {
        let q = p(1.2, 3000);
        let schur = form(&[1, 1, -1]);
        let rows = colour_scan(&schur, &q, &ColouringScheme::ALL, &[1, 2], 3, 100).unwrap();
        assert_eq!(rows.len(), 3 * 2 + 2 + 2);
        assert!(rows.iter().all(|r| r.found()));
        let seeds: Vec<Option<u64>> = rows.iter().filter(|r| r.scheme == ColouringScheme::Random).map(|r| r.seed).collect();
        assert_eq!(seeds, vec![Some(100), Some(101), Some(102), Some(100), Some(101), Some(102)]);
        let again = colour_scan(&schur, &q, &ColouringScheme::ALL, &[1, 2], 3, 100).unwrap();
        let strip = |v: &[ScanRow]| v.iter().map(|r| (r.scheme, r.r, r.trial, r.witness.clone())).collect::<Vec<_>>();
        assert_eq!(strip(&rows), strip(&again));
        assert!(colour_scan(&schur, &q, &ColouringScheme::ALL, &[2], 0, 1).is_err());
        let none = colour_scan(&form(&[1, 1, 1]), &q, &[ColouringScheme::Residue], &[1], 1, 0).unwrap();
        assert!(!none[0].found());
    }
}
