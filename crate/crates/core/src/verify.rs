//! Verification harness: named identity checks evaluated at seeded sample
//! points, collected into a deterministic report.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::{l_plus, rll_sides, singular_vector, weight_series, ModuleShape, Sign};
use crate::gauss::{gauss, screening_zero_mode};
use crate::multiset::{
    coproduct, modified_coproduct, modify, pullback_gamma, pullback_tilde, unmodify, ColourPermutation, PiMultiset,
};
use crate::projection::{staircase_with_diagonal, w_p, w_p_nested, Nesting};
use crate::rmatrix::r_matrix;
use crate::scalar::{sample_point, SamplePoint, Scalar};
use crate::tensor::{apply_product, swap_op, DenseOperator, Gate, KetVector, TensorShape};
use crate::trace::{
    bethe_b, bethe_partial_apply, exchange_gates, monodromy_gates, monodromy_space, partial_recurrence_rhs, w_b, BarN,
    Variant,
};

/// Resamples allowed per (check, seed) after a degenerate draw.
pub const RETRY_BUDGET: u32 = 32;

/// Operators on spaces up to this dimension are compared on every basis
/// vector; above it on seeded random probe vectors.
pub const DENSE_COMPARE_LIMIT: usize = 256;

const PROBES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    YangBaxter,
    Inversion,
    Rll,
    Triangularity,
    GaussReconstruct,
    Screening,
    Symmetry,
    ReR1,
    ReR2Ind1,
    Coproduct,
    PullbackQsym,
    ModifyRoundtrip,
    MainTheorem,
}

impl Check {
    pub const ALL: [Check; 13] = [
        Check::YangBaxter,
        Check::Inversion,
        Check::Rll,
        Check::Triangularity,
        Check::GaussReconstruct,
        Check::Screening,
        Check::Symmetry,
        Check::ReR1,
        Check::ReR2Ind1,
        Check::Coproduct,
        Check::PullbackQsym,
        Check::ModifyRoundtrip,
        Check::MainTheorem,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::YangBaxter => "yang-baxter",
            Check::Inversion => "inversion",
            Check::Rll => "rll",
            Check::Triangularity => "triangularity",
            Check::GaussReconstruct => "gauss-reconstruct",
            Check::Screening => "screening",
            Check::Symmetry => "symmetry",
            Check::ReR1 => "re-r1",
            Check::ReR2Ind1 => "re-r2-ind1",
            Check::Coproduct => "coproduct",
            Check::PullbackQsym => "pullback-qsym",
            Check::ModifyRoundtrip => "modify-roundtrip",
            Check::MainTheorem => "main-theorem",
        }
    }

    fn uses_module(self) -> bool {
        !matches!(self, Check::YangBaxter | Check::Inversion)
    }

    fn uses_pattern(self) -> bool {
        matches!(
            self,
            Check::Symmetry | Check::Coproduct | Check::PullbackQsym | Check::ModifyRoundtrip | Check::MainTheorem
        )
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::ConfigInvalid(format!("unknown check `{s}`")))
    }
}

/// Parse `all` or a comma-separated list of check names.
pub fn parse_checks(s: &str) -> Result<Vec<Check>> {
    if s.trim() == "all" {
        return Ok(Check::ALL.to_vec());
    }
    let mut out: Vec<Check> = s.split(',').map(|x| x.trim().parse()).collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Parse a comma-separated colour list; the empty string is the empty pattern.
pub fn parse_pattern(s: &str) -> Result<Vec<usize>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| Error::ConfigInvalid(format!("bad colour `{x}`"))))
        .collect()
}

/// What to run. Unset `n`, `factors` or `pattern` sweep the default suite:
/// `N ∈ {2,3}`, `1..=2` factors, every pattern of length at most 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub n: Option<usize>,
    pub factors: Option<usize>,
    pub pattern: Option<Vec<usize>>,
    pub seeds: Vec<u64>,
    pub trials: usize,
    pub checks: Vec<Check>,
    /// Record wall time per check. Off by default so reports are reproducible.
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: None,
            factors: None,
            pattern: None,
            seeds: vec![0],
            trials: 5,
            checks: Check::ALL.to_vec(),
            timings: false,
        }
    }
}

impl RunConfig {
    /// Parse a config document; missing fields take their defaults.
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::ConfigInvalid(format!("config document: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(n) = self.n {
            if n < 2 {
                return Err(Error::ConfigInvalid(format!("N must be at least 2, got {n}")));
            }
        }
        if self.trials == 0 {
            return Err(Error::ConfigInvalid("trials must be at least 1".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::ConfigInvalid("no seeds".into()));
        }
        if self.checks.is_empty() {
            return Err(Error::ConfigInvalid("no checks".into()));
        }
        if let Some(p) = &self.pattern {
            for n in self.ranks() {
                PiMultiset::for_rank(p.clone(), n)?;
            }
        }
        Ok(())
    }

    fn ranks(&self) -> Vec<usize> {
        self.n.map_or(vec![2, 3], |n| vec![n])
    }

    fn factor_counts(&self) -> Vec<usize> {
        self.factors.map_or(vec![1, 2], |f| vec![f])
    }

    fn patterns(&self, n: usize) -> Vec<Vec<usize>> {
        match &self.pattern {
            Some(p) => vec![p.clone()],
            None => (0..=2).flat_map(|len| PiMultiset::all_patterns(n, len)).map(|p| p.colours().to_vec()).collect(),
        }
    }

    /// Sample seeds: every base seed plus each trial offset, in order.
    pub fn sample_seeds(&self) -> Vec<u64> {
        self.seeds.iter().flat_map(|&s| (0..self.trials as u64).map(move |k| s.wrapping_add(k))).collect()
    }

    fn params_for(&self, check: Check) -> Vec<Params> {
        let mut out = Vec::new();
        for n in self.ranks() {
            if !check.uses_module() {
                out.push(Params { n, factors: None, pattern: None });
                continue;
            }
            for f in self.factor_counts() {
                if !check.uses_pattern() {
                    out.push(Params { n, factors: Some(f), pattern: None });
                    continue;
                }
                for p in self.patterns(n) {
                    out.push(Params { n, factors: Some(f), pattern: Some(p) });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub factors: Option<usize>,
    pub pattern: Option<Vec<usize>>,
}

/// First mismatching component of a failed comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub what: String,
    pub index: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub check: Check,
    pub params: Params,
    pub seed: u64,
    pub pass: bool,
    pub witness: Option<Witness>,
    pub millis: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub config: RunConfig,
    pub pass: bool,
    pub records: Vec<Record>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            let mut line = format!("{} {:<17} N={}", if r.pass { "PASS" } else { "FAIL" }, r.check.name(), r.params.n);
            if let Some(f) = r.params.factors {
                line += &format!(" factors={f}");
            }
            if let Some(p) = &r.params.pattern {
                let p: Vec<String> = p.iter().map(|c| c.to_string()).collect();
                line += &format!(" pattern=({})", p.join(","));
            }
            line += &format!(" seed={}", r.seed);
            if let Some(ms) = r.millis {
                line += &format!(" {ms}ms");
            }
            if let Some(w) = &r.witness {
                line += &format!("  [{} @{}: {} != {}]", w.what, w.index, w.lhs, w.rhs);
            }
            s.push_str(&line);
            s.push('\n');
        }
        let failed = self.records.iter().filter(|r| !r.pass).count();
        s.push_str(&format!("{} records, {} failed\n", self.records.len(), failed));
        s
    }
}

type Outcome = Result<Option<Witness>>;

fn cmp_vec(what: &str, a: &KetVector, b: &KetVector) -> Option<Witness> {
    if a.dim() != b.dim() {
        return Some(Witness {
            what: what.into(),
            index: 0,
            lhs: format!("dim {}", a.dim()),
            rhs: format!("dim {}", b.dim()),
        });
    }
    a.first_mismatch(b).map(|(index, x, y)| Witness {
        what: what.into(),
        index,
        lhs: x.to_string(),
        rhs: y.to_string(),
    })
}

fn cmp_op(what: &str, a: &DenseOperator, b: &DenseOperator) -> Option<Witness> {
    a.first_mismatch(b).map(|(index, x, y)| Witness {
        what: what.into(),
        index,
        lhs: x.to_string(),
        rhs: y.to_string(),
    })
}

/// Compare two gate products on all basis vectors, or on random probes when
/// the space is large.
fn cmp_gates(what: &str, a: &[Gate], b: &[Gate], space: &TensorShape, seed: u64) -> Outcome {
    let d = space.total_dim();
    let probes: Vec<KetVector> = if d <= DENSE_COMPARE_LIMIT {
        (0..d).map(|c| KetVector::basis(d, c)).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        (0..PROBES)
            .map(|_| KetVector::new((0..d).map(|_| Scalar::from_int(rng.gen_range(-50..=50))).collect()))
            .collect()
    };
    for (k, x) in probes.iter().enumerate() {
        let (ya, yb) = (apply_product(a, space, x)?, apply_product(b, space, x)?);
        if let Some(mut w) = cmp_vec(what, &ya, &yb) {
            w.what = format!("{what} (probe {k})");
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn first<I: IntoIterator<Item = Outcome>>(outcomes: I) -> Outcome {
    for o in outcomes {
        if let Some(w) = o? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn variables_needed(check: Check, p: &Params) -> usize {
    let pattern_len = p.pattern.as_ref().map_or(0, Vec::len);
    match check {
        Check::YangBaxter => 3,
        Check::Inversion | Check::Rll => 2,
        Check::Triangularity | Check::GaussReconstruct | Check::Screening => 1,
        Check::ReR1 | Check::ReR2Ind1 => p.n - 1,
        _ => pattern_len,
    }
}

fn module_of(p: &Params, s: &SamplePoint) -> Result<ModuleShape> {
    ModuleShape::new(p.n, s.q.clone(), s.z.clone())
}

fn pattern_of(p: &Params) -> Result<PiMultiset> {
    PiMultiset::for_rank(p.pattern.clone().unwrap_or_default(), p.n)
}

fn check_yang_baxter(p: &Params, s: &SamplePoint) -> Outcome {
    let (n, q, u) = (p.n, &s.q, &s.t);
    let space = TensorShape::uniform(n, 3);
    let g = |a: usize, b: usize| -> Result<Gate> { Gate::pair(&r_matrix(n, q, &u[a], &u[b])?, a, b, &space) };
    let lhs = vec![g(0, 1)?, g(0, 2)?, g(1, 2)?];
    let rhs = vec![g(1, 2)?, g(0, 2)?, g(0, 1)?];
    cmp_gates("R12 R13 R23 vs R23 R13 R12", &lhs, &rhs, &space, s.seed)
}

fn check_inversion(p: &Params, s: &SamplePoint) -> Outcome {
    let (n, q, u1, u2) = (p.n, &s.q, &s.t[0], &s.t[1]);
    let swap = swap_op(n);
    let r21 = swap.compose(&r_matrix(n, q, u2, u1)?)?.compose(&swap)?;
    let lhs = r_matrix(n, q, u1, u2)?.compose(&r21)?;
    let qi = q.inv()?;
    let c = ((q * u1 - &qi * u2) * (&qi * u1 - q * u2)).checked_div(&((u1 - u2) * (u1 - u2)))?;
    Ok(cmp_op("R12(u1,u2) R21(u2,u1) vs scalar", &lhs, &DenseOperator::identity(n * n).scalar_mul(&c)))
}

fn check_rll(p: &Params, s: &SamplePoint) -> Outcome {
    let m = module_of(p, s)?;
    let (u, v) = (&s.t[0], &s.t[1]);
    first(
        [(Sign::Plus, Sign::Plus, "RLL ++"), (Sign::Minus, Sign::Minus, "RLL --"), (Sign::Plus, Sign::Minus, "RLL +-")]
            .map(|(a, b, what)| -> Outcome {
                let (x, y) = rll_sides(&m, a, u, b, v)?;
                Ok(cmp_op(what, &x, &y))
            }),
    )
}

fn check_triangularity(p: &Params, s: &SamplePoint) -> Outcome {
    let m = module_of(p, s)?;
    let u = &s.t[0];
    let l = l_plus(&m, u)?;
    let v = singular_vector(&m);
    for i in 1..=p.n {
        for j in 1..i {
            let w = l.get(i, j).apply(&v)?;
            if let Some(w) = cmp_vec(&format!("L_({i},{j}) v vs 0"), &w, &KetVector::zero(v.dim())) {
                return Ok(Some(w));
            }
        }
        let lam = weight_series(&m, i, u)?;
        if let Some(w) = cmp_vec(&format!("L_({i},{i}) v vs Lambda_{i} v"), &l.get(i, i).apply(&v)?, &v.scale(&lam)) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn check_gauss(p: &Params, s: &SamplePoint) -> Outcome {
    let m = module_of(p, s)?;
    let u = &s.t[0];
    let l = l_plus(&m, u)?;
    let g = gauss(&l)?;
    let back = g.reconstruct()?;
    for (k, (a, b)) in back.entries().iter().zip(l.entries()).enumerate() {
        if let Some(w) = cmp_op(&format!("FKE vs L entry ({},{})", k / p.n + 1, k % p.n + 1), a, b) {
            return Ok(Some(w));
        }
    }
    let v = singular_vector(&m);
    for i in 1..=p.n {
        let lam = weight_series(&m, i, u)?;
        if let Some(w) = cmp_vec(&format!("K_{i} v vs Lambda_{i} v"), &g.k(i)?.apply(&v)?, &v.scale(&lam)) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn check_screening(p: &Params, s: &SamplePoint) -> Outcome {
    let m = module_of(p, s)?;
    let g = gauss(&l_plus(&m, &s.t[0])?)?;
    let q = m.q();
    let qq = q - q.inv()?;
    for i in 1..p.n {
        let f0 = screening_zero_mode(&m, i)?;
        for j in i + 2..=p.n {
            let lhs = g.f(i, j)?.scalar_mul(&qq);
            let b = g.f(i + 1, j)?;
            let rhs = b.compose(&f0)?.sub(&f0.compose(b)?.scalar_mul(q))?;
            if let Some(w) = cmp_op(&format!("screening i={i} j={j}"), &lhs, &rhs) {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Permutations of `0..len` preserving the colour of every position.
fn colour_preserving(colours: &[usize]) -> Vec<ColourPermutation> {
    ColourPermutation::all(colours.len())
        .into_iter()
        .filter(|s| s.mapping().iter().enumerate().all(|(i, &m)| colours[i] == colours[m]))
        .collect()
}

fn check_symmetry(p: &Params, s: &SamplePoint) -> Outcome {
    let m = module_of(p, s)?;
    let i = pattern_of(p)?;
    let nbar = BarN::new(i.counts(p.n), p.n)?;
    let colours = nbar.colours();
    let t = &s.t;
    let base = bethe_b(&m, &nbar, t)?;
    for sigma in colour_preserving(&colours) {
        let moved = sigma.push_values(t);
        if let Some(w) = cmp_vec(
            &format!("B(t) v vs B(sigma t) v, sigma={:?}", sigma.mapping()),
            &base,
            &bethe_b(&m, &nbar, &moved)?,
        ) {
            return Ok(Some(w));
        }
    }
    let space = monodromy_space(&m, t.len());
    let left = monodromy_gates(&m, t, Variant::Left)?;
    let right = monodromy_gates(&m, t, Variant::Right)?;
    if let Some(w) = cmp_gates("monodromy left vs right", &left, &right, &space, s.seed)? {
        return Ok(Some(w));
    }
    for k in 1..t.len() {
        let (a, b) = exchange_gates(&m, t, k)?;
        if let Some(w) = cmp_gates(&format!("exchange at slots {k},{}", k + 1), &a, &b, &space, s.seed)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn check_re_r1(p: &Params, s: &SamplePoint) -> Outcome {
    let m = module_of(p, s)?;
    let v = singular_vector(&m);
    for k in 1..p.n {
        for l in 1..=k {
            let t = &s.t[l - 1..k];
            let lhs = bethe_partial_apply(&m, l, k, t, &v)?;
            let rhs = partial_recurrence_rhs(&m, l, k, t, &v)?;
            if let Some(w) = cmp_vec(&format!("B[{l},{k}] v vs recurrence"), &lhs, &rhs) {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

fn check_ind1(p: &Params, s: &SamplePoint) -> Outcome {
    let m = module_of(p, s)?;
    let v = singular_vector(&m);
    for k in 1..p.n {
        let t = &s.t[..k];
        let lhs = bethe_b(&m, &BarN::staircase(k, p.n)?, t)?;
        let rhs = staircase_with_diagonal(&m, t, &v)?;
        if let Some(w) = cmp_vec(&format!("B[{k}] v vs W(1,{k}) L v"), &lhs, &rhs) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

type Collection = fn(&ModuleShape, &PiMultiset, &[Scalar]) -> Result<KetVector>;

const COLLECTIONS: [(&str, Collection); 2] = [("w_B", w_b), ("w_P", w_p)];

fn w_b_unmodified(m: &ModuleShape, i: &PiMultiset, t: &[Scalar]) -> Result<KetVector> {
    unmodify(m, i, t, |ib, tb| w_b(m, ib, tb))
}

fn check_coproduct(p: &Params, s: &SamplePoint) -> Outcome {
    let m = module_of(p, s)?;
    let i = pattern_of(p)?;
    let t = &s.t;
    let (a, b) = m.split_first();
    for (name, w) in COLLECTIONS {
        let direct = w(&m, &i, t)?;
        let expanded = modified_coproduct(&a, &b, &i, t, |x, y| w(&a, x, y), |x, y| w(&b, x, y))?;
        if let Some(wit) = cmp_vec(&format!("{name} direct vs modified coproduct"), &direct, &expanded) {
            return Ok(Some(wit));
        }
    }
    let direct = w_b_unmodified(&m, &i, t)?;
    let expanded = coproduct(&a, &b, &i, t, |x, y| w_b_unmodified(&a, x, y), |x, y| w_b_unmodified(&b, x, y))?;
    if let Some(wit) = cmp_vec("unmodified w_B direct vs coproduct", &direct, &expanded) {
        return Ok(Some(wit));
    }
    let left = w_p_nested(&m, &i, t, Nesting::Left)?;
    let right = w_p_nested(&m, &i, t, Nesting::Right)?;
    Ok(cmp_vec("w_P left vs right nesting", &left, &right))
}

fn check_qsym(p: &Params, s: &SamplePoint) -> Outcome {
    let m = module_of(p, s)?;
    let i = pattern_of(p)?;
    let t = &s.t;
    for sigma in ColourPermutation::all(i.len()) {
        for (name, w) in COLLECTIONS {
            let direct = w(&m, &i, t)?;
            let pulled = pullback_tilde(m.q(), &sigma, &i, t, |j, tj| w(&m, j, tj))?;
            if let Some(wit) =
                cmp_vec(&format!("{name} vs tilde pullback, sigma={:?}", sigma.mapping()), &direct, &pulled)
            {
                return Ok(Some(wit));
            }
        }
        let direct = w_b_unmodified(&m, &i, t)?;
        let pulled = pullback_gamma(m.q(), &sigma, &i, t, |j, tj| w_b_unmodified(&m, j, tj))?;
        if let Some(wit) =
            cmp_vec(&format!("unmodified w_B vs pullback, sigma={:?}", sigma.mapping()), &direct, &pulled)
        {
            return Ok(Some(wit));
        }
    }
    Ok(None)
}

fn check_roundtrip(p: &Params, s: &SamplePoint) -> Outcome {
    let m = module_of(p, s)?;
    let i = pattern_of(p)?;
    let t = &s.t;
    for (name, w) in COLLECTIONS {
        let direct = w(&m, &i, t)?;
        let a = modify(&m, &i, t, |ib, tb| unmodify(&m, ib, tb, |ic, tc| w(&m, ic, tc)))?;
        if let Some(wit) = cmp_vec(&format!("modify(unmodify({name})) vs {name}"), &a, &direct) {
            return Ok(Some(wit));
        }
        let b = unmodify(&m, &i, t, |ib, tb| modify(&m, ib, tb, |ic, tc| w(&m, ic, tc)))?;
        if let Some(wit) = cmp_vec(&format!("unmodify(modify({name})) vs {name}"), &b, &direct) {
            return Ok(Some(wit));
        }
    }
    Ok(None)
}

fn check_main(p: &Params, s: &SamplePoint) -> Outcome {
    let m = module_of(p, s)?;
    let i = pattern_of(p)?;
    Ok(cmp_vec("w_P vs w_B", &w_p(&m, &i, &s.t)?, &w_b(&m, &i, &s.t)?))
}

fn evaluate(check: Check, p: &Params, s: &SamplePoint) -> Outcome {
    match check {
        Check::YangBaxter => check_yang_baxter(p, s),
        Check::Inversion => check_inversion(p, s),
        Check::Rll => check_rll(p, s),
        Check::Triangularity => check_triangularity(p, s),
        Check::GaussReconstruct => check_gauss(p, s),
        Check::Screening => check_screening(p, s),
        Check::Symmetry => check_symmetry(p, s),
        Check::ReR1 => check_re_r1(p, s),
        Check::ReR2Ind1 => check_ind1(p, s),
        Check::Coproduct => check_coproduct(p, s),
        Check::PullbackQsym => check_qsym(p, s),
        Check::ModifyRoundtrip => check_roundtrip(p, s),
        Check::MainTheorem => check_main(p, s),
    }
}

/// Seed of the `attempt`-th resample.
pub fn retry_seed(seed: u64, attempt: u32) -> u64 {
    seed.wrapping_add(u64::from(attempt).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Draw a sample and run `f` on it, resampling on degeneracy.
pub fn with_resampling<T>(
    seed: u64,
    factors: usize,
    vars: usize,
    mut f: impl FnMut(&SamplePoint) -> Result<T>,
) -> Result<(u64, T)> {
    for attempt in 0..=RETRY_BUDGET {
        let s = retry_seed(seed, attempt);
        let point = sample_point(s, factors, vars)?;
        match f(&point) {
            Ok(x) => return Ok((s, x)),
            Err(e) if e.is_degenerate() => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::SamplingExhausted(RETRY_BUDGET as usize))
}

fn run_one(check: Check, p: &Params, seed: u64, timings: bool) -> Result<Record> {
    let start = Instant::now();
    let vars = variables_needed(check, p);
    let (used, witness) = with_resampling(seed, p.factors.unwrap_or(0), vars, |s| evaluate(check, p, s))?;
    Ok(Record {
        check,
        params: p.clone(),
        seed: used,
        pass: witness.is_none(),
        witness,
        millis: timings.then(|| start.elapsed().as_millis() as u64),
    })
}

/// Run every configured check at every sample seed. Records are ordered by
/// check, then by parameter set in sweep order, then by seed.
pub fn run(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let mut checks = config.checks.clone();
    checks.sort();
    checks.dedup();
    let seeds = config.sample_seeds();
    let tasks: Vec<(Check, Params, u64)> = checks
        .iter()
        .flat_map(|&c| {
            let seeds = &seeds;
            config.params_for(c).into_iter().flat_map(move |p| seeds.iter().map(move |&s| (c, p.clone(), s)))
        })
        .collect();
    let records: Vec<Record> =
        tasks.par_iter().map(|(c, p, s)| run_one(*c, p, *s, config.timings)).collect::<Result<_>>()?;
    let pass = records.iter().all(|r| r.pass);
    Ok(Report { config: config.clone(), pass, records })
}

/// Which side [`compute`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Bethe,
    Projection,
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bethe" => Ok(Kind::Bethe),
            "projection" => Ok(Kind::Projection),
            _ => Err(Error::ConfigInvalid(format!("unknown kind `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub index: usize,
    pub numerator: String,
    pub denominator: String,
}

/// Exact vector in sparse form; basis order is first factor most significant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorDoc {
    pub dim: usize,
    pub components: Vec<Component>,
}

impl VectorDoc {
    pub fn from_ket(v: &KetVector) -> Self {
        VectorDoc {
            dim: v.dim(),
            components: v
                .entries()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(index, c)| Component {
                    index,
                    numerator: c.numer().to_string(),
                    denominator: c.denom().to_string(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("vector serializes")
    }
}

/// Evaluate one side on `N`, `factors` evaluation modules and a colour
/// pattern at the sample drawn from `seed` (resampled on degeneracy).
pub fn compute(kind: Kind, n: usize, factors: usize, pattern: &[usize], seed: u64) -> Result<KetVector> {
    if n < 2 {
        return Err(Error::ConfigInvalid(format!("N must be at least 2, got {n}")));
    }
    let i = PiMultiset::for_rank(pattern.to_vec(), n)?;
    let (_, v) = with_resampling(seed, factors, i.len(), |s| {
        let m = ModuleShape::new(n, s.q.clone(), s.z.clone())?;
        match kind {
            Kind::Bethe => w_b(&m, &i, &s.t),
            Kind::Projection => w_p(&m, &i, &s.t),
        }
    })?;
    Ok(v)
}

/// Process exit code for an outcome: 0 pass, 1 check failure, 2 bad
/// configuration, 3 sampling exhausted.
pub fn exit_code(outcome: &Result<Report>) -> i32 {
    match outcome {
        Ok(r) if r.pass => 0,
        Ok(_) => 1,
        Err(e) => error_code(e),
    }
}

pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::SamplingExhausted(_) => 3,
        Error::ConfigInvalid(_) => 2,
        _ => 1,
    }
}
