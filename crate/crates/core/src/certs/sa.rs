use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gen::binomial_coeff;
use crate::graph::BipartiteGraph;
use crate::rng::{rng_from_seed, SeededRng};

use super::cover::{CoverOracle, Vertex};
use super::{to_f64, Check, Family, VerifyReport};

/// Contexts `(S, T)` allowed in exhaustive mode.
pub const EXHAUSTIVE_BUDGET: u128 = 2_000_000;

/// `alpha^a * theta^t` with `theta = n^{-1/4}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Mono {
    a: u32,
    t: u32,
}

/// Signed combination of monomials, sorted and without zero terms.
type Lin = Vec<(Mono, i64)>;

/// Sherali–Adams solution on a gap instance, with values `x_S` derived on
/// demand from cover costs.
#[derive(Debug, Clone)]
pub struct SaCertificate {
    pub rounds: usize,
    pub n: usize,
    pub s: usize,
    /// `1 / (2 (r + 1))`
    pub sa_alpha: BigRational,
    /// `alpha^(r+1)`
    pub sa_beta: BigRational,
    /// `beta sqrt(n) / 4`, rounded, at least one.
    pub k: usize,
    /// `n^{-1/4}`; exact when `n` is a fourth power, otherwise truncated to 60 digits.
    pub theta: BigRational,
    pub theta_exact: bool,
    oracle: CoverOracle,
}

fn fourth_root_inverse(n: usize) -> (BigRational, bool) {
    let m = (n as u64).nth_root(4);
    if m.pow(4) == n as u64 {
        return (BigRational::new(BigInt::one(), BigInt::from(m)), true);
    }
    let scale = BigUint::from(10u32).pow(60);
    let num = (BigUint::from(10u32).pow(240) / BigUint::from(n)).nth_root(4);
    (BigRational::new(BigInt::from(num), BigInt::from(scale)), false)
}

pub fn build_sa_certificate(g: &BipartiteGraph, rounds: usize) -> Result<SaCertificate> {
    if rounds == 0 {
        return Err(Error::ParameterRegime("rounds must be at least 1".into()));
    }
    let n = g.n();
    let sa_alpha = BigRational::new(BigInt::one(), BigInt::from(2 * (rounds + 1)));
    let sa_beta = num_traits::pow(sa_alpha.clone(), rounds + 1);
    let k = (to_f64(&sa_beta) * (n as f64).sqrt() / 4.0).round().max(1.0) as usize;
    let (theta, theta_exact) = fourth_root_inverse(n);
    Ok(SaCertificate {
        rounds,
        n,
        s: g.n_right(),
        sa_alpha,
        sa_beta,
        k,
        theta,
        theta_exact,
        oracle: CoverOracle::new(g),
    })
}

fn canon(set: &[Vertex]) -> Vec<Vertex> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

impl SaCertificate {
    pub fn graph(&self) -> &BipartiteGraph {
        self.oracle.graph()
    }

    fn mono(&self, set: &[Vertex]) -> Result<Mono> {
        let (su, sv) = self.oracle.split(set);
        let cost = self.oracle.cost(set)?;
        Ok(Mono { a: ((self.rounds + 1) * su.len() + sv.len()) as u32, t: cost })
    }

    /// `x_S`.
    pub fn x_value(&self, set: &[Vertex]) -> Result<BigRational> {
        if canon(set).len() > self.rounds + 1 {
            return Err(Error::SizeExceeded(format!("|S| = {} > {}", set.len(), self.rounds + 1)));
        }
        let m = self.mono(set)?;
        Ok(self.eval(&vec![(m, 1)]))
    }

    fn eval(&self, lin: &Lin) -> BigRational {
        lin.iter().fold(BigRational::zero(), |acc, (m, c)| {
            acc + BigRational::from_integer(BigInt::from(*c))
                * num_traits::pow(self.sa_alpha.clone(), m.a as usize)
                * num_traits::pow(self.theta.clone(), m.t as usize)
        })
    }

    /// Relaxation value `sum_v x_{v}`.
    pub fn objective(&self) -> Result<BigRational> {
        let mut sum = BigRational::zero();
        for v in 0..self.s {
            sum += self.x_value(&[Vertex::V(v)])?;
        }
        Ok(sum)
    }

    /// `min(k, s) / 2`
    pub fn combinatorial_lb(&self) -> BigRational {
        BigRational::new(BigInt::from(self.k.min(self.s)), BigInt::from(2))
    }

    fn all_vertices(&self) -> Vec<Vertex> {
        (0..self.n).map(Vertex::U).chain((0..self.s).map(Vertex::V)).collect()
    }
}

/// Memoized `x_S` monomials.
struct XCache<'a> {
    cert: &'a SaCertificate,
    map: HashMap<Vec<Vertex>, Mono>,
}

impl<'a> XCache<'a> {
    fn new(cert: &'a SaCertificate) -> Self {
        Self { cert, map: HashMap::new() }
    }

    fn x(&mut self, set: Vec<Vertex>) -> Result<Mono> {
        if let Some(m) = self.map.get(&set) {
            return Ok(*m);
        }
        if self.map.len() > 4_000_000 {
            self.map.clear();
        }
        let m = self.cert.mono(&set)?;
        self.map.insert(set, m);
        Ok(m)
    }

    /// `x_{S,T}` by inclusion–exclusion over `J ⊆ T`.
    fn lift(&mut self, s_set: &[Vertex], t_set: &[Vertex]) -> Result<Lin> {
        let t = canon(t_set);
        let mut acc: BTreeMap<Mono, i64> = BTreeMap::new();
        for mask in 0u32..(1 << t.len()) {
            let mut set: Vec<Vertex> = s_set.to_vec();
            set.extend(t.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, w)| *w));
            let m = self.x(canon(&set))?;
            *acc.entry(m).or_default() += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        }
        Ok(acc.into_iter().filter(|(_, c)| *c != 0).collect())
    }
}

/// `x_{S,T} = sum_{J ⊆ T} (-1)^|J| x_{S ∪ J}`.
pub fn sa_lift_value(cert: &SaCertificate, s_set: &[Vertex], t_set: &[Vertex]) -> Result<BigRational> {
    let (s, t) = (canon(s_set), canon(t_set));
    if s.len() + t.len() > cert.rounds + 1 {
        return Err(Error::SizeExceeded(format!("|S| + |T| = {} > {}", s.len() + t.len(), cert.rounds + 1)));
    }
    let lin = XCache::new(cert).lift(&s, &t)?;
    Ok(cert.eval(&lin))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SaMode {
    Exhaustive,
    Sampled(usize),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SaReport {
    pub report: VerifyReport,
    pub contexts: u64,
    pub objective: String,
    pub objective_f64: f64,
    pub combinatorial_lb: f64,
    pub gap_ratio: f64,
}

struct Checks {
    trivial: Family,
    box_: Family,
    card: Family,
    edge: Family,
}

/// Verifies one context `(S, T)`: the box constraints at this level and the
/// next, the cardinality constraint, and every edge constraint.
fn verify_context(
    cert: &SaCertificate,
    cache: &mut XCache,
    verts: &[Vertex],
    s_set: &[Vertex],
    t_set: &[Vertex],
    ck: &mut Checks,
) -> Result<()> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    let base = cert.eval(&cache.lift(s_set, t_set)?);
    ck.box_.ge(&base, &zero);
    ck.box_.ge(&one, &base);

    let mut ids: HashMap<Lin, usize> = HashMap::new();
    let mut sig = Vec::with_capacity(verts.len());
    for &z in verts {
        let mut s2 = s_set.to_vec();
        s2.push(z);
        let lin = cache.lift(&canon(&s2), t_set)?;
        let next = ids.len();
        sig.push(*ids.entry(lin).or_insert(next));
    }
    let mut lins: Vec<(Lin, usize)> = ids.into_iter().collect();
    lins.sort_by_key(|(_, i)| *i);
    let vals: Vec<BigRational> = lins.iter().map(|(l, _)| cert.eval(l)).collect();
    for v in &vals {
        ck.box_.ge(v, &zero);
        ck.box_.ge(&one, v);
    }

    let mut counts = vec![0usize; vals.len()];
    for (i, z) in verts.iter().enumerate() {
        if matches!(z, Vertex::U(_)) {
            counts[sig[i]] += 1;
        }
    }
    let sum = counts
        .iter()
        .zip(&vals)
        .fold(BigRational::zero(), |acc, (&c, v)| acc + BigRational::from_integer(BigInt::from(c)) * v);
    ck.card.ge(&sum, &(BigRational::from_integer(BigInt::from(cert.k)) * &base));

    // rank distinct values so each edge check is an integer comparison
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| vals[a].cmp(&vals[b]));
    let mut rank = vec![0usize; vals.len()];
    for w in 1..order.len() {
        rank[order[w]] = rank[order[w - 1]] + usize::from(vals[order[w]] != vals[order[w - 1]]);
    }
    let index = |w: Vertex| match w {
        Vertex::U(u) => u,
        Vertex::V(v) => cert.n + v,
    };
    let mut worst: Option<(usize, usize)> = None;
    for (u, v) in cert.graph().edges() {
        let (su, sv) = (sig[index(Vertex::U(u))], sig[index(Vertex::V(v))]);
        if rank[sv] < rank[su] && worst.is_none() {
            worst = Some((su, sv));
        }
    }
    match worst {
        Some((su, sv)) => ck.edge.ge(&vals[sv], &vals[su]),
        None => ck.edge.flag(true),
    }
    Ok(())
}

fn random_vertex(rng: &mut SeededRng, n: usize, s: usize) -> Vertex {
    let i = rng.random_range(0..n + s);
    if i < n {
        Vertex::U(i)
    } else {
        Vertex::V(i - n)
    }
}

fn random_set(rng: &mut SeededRng, n: usize, s: usize, size: usize) -> Vec<Vertex> {
    let mut out = Vec::new();
    while out.len() < size.min(n + s) {
        let w = random_vertex(rng, n, s);
        if !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

/// Checks the relaxation constraints over every context `(S, T)` with
/// `|S| + |T| <= rounds` (or `N` random ones), box constraints on
/// `samples` random contexts one level up, and `samples` random instances
/// of each structural property of the solution.
pub fn verify_sa_certificate(cert: &SaCertificate, mode: SaMode, samples: usize, seed: u64) -> Result<SaReport> {
    let r = cert.rounds;
    let (n, s) = (cert.n, cert.s);
    let verts = cert.all_vertices();
    let total = n + s;
    let mut cache = XCache::new(cert);
    let mut ck = Checks {
        trivial: Family::new("x_empty_eq_1"),
        box_: Family::new("box_0_le_x_le_1"),
        card: Family::new("cardinality"),
        edge: Family::new("edge_monotone"),
    };
    let empty_val = cert.eval(&cache.lift(&[], &[])?);
    ck.trivial.eq(&empty_val, &BigRational::one());
    let mut rng = rng_from_seed(seed);
    let mut contexts = 0u64;
    match mode {
        SaMode::Exhaustive => {
            let needed: u128 = (0..=r).map(|j| binomial_coeff(total, j).saturating_mul(1 << j)).sum();
            if needed > EXHAUSTIVE_BUDGET {
                return Err(Error::BudgetExceeded { needed, budget: EXHAUSTIVE_BUDGET });
            }
            let mut idx: Vec<usize> = Vec::new();
            loop {
                let w: Vec<Vertex> = idx.iter().map(|&i| verts[i]).collect();
                for split in 0u32..(1 << w.len()) {
                    let (mut ss, mut tt) = (Vec::new(), Vec::new());
                    for (i, &x) in w.iter().enumerate() {
                        if split >> i & 1 == 1 {
                            tt.push(x)
                        } else {
                            ss.push(x)
                        }
                    }
                    verify_context(cert, &mut cache, &verts, &ss, &tt, &mut ck)?;
                    contexts += 1;
                }
                if !next_subset(&mut idx, total, r) {
                    break;
                }
            }
        }
        SaMode::Sampled(count) => {
            for _ in 0..count {
                let size = rng.random_range(0..=r);
                let w = random_set(&mut rng, n, s, size);
                let cut = rng.random_range(0..=w.len());
                verify_context(cert, &mut cache, &verts, &canon(&w[..cut]), &canon(&w[cut..]), &mut ck)?;
                contexts += 1;
            }
        }
    }
    let mut top = Family::new("box_top_level");
    let zero = BigRational::zero();
    let one = BigRational::one();
    for _ in 0..samples {
        let w = random_set(&mut rng, n, s, r + 1);
        let cut = rng.random_range(0..=w.len());
        let v = cert.eval(&cache.lift(&canon(&w[..cut]), &canon(&w[cut..]))?);
        top.ge(&v, &zero);
        top.ge(&one, &v);
    }
    let mut checks = vec![ck.trivial.finish(), ck.box_.finish(), ck.card.finish(), ck.edge.finish(), top.finish()];
    checks.extend(claim_checks(cert, &mut cache, &mut rng, samples)?);

    let objective = cert.objective()?;
    let mut obj = Family::new("objective_identity");
    let expected = &cert.sa_alpha
        * BigRational::from_integer(BigInt::from(s))
        * &cert.theta;
    obj.eq(&objective, &expected);
    checks.push(obj.finish());

    let lb = cert.combinatorial_lb();
    let report = VerifyReport::new(checks);
    Ok(SaReport {
        report,
        contexts,
        objective: objective.to_string(),
        objective_f64: to_f64(&objective),
        combinatorial_lb: to_f64(&lb),
        gap_ratio: if objective.is_zero() { f64::INFINITY } else { to_f64(&(lb / &objective)) },
    })
}

/// Advances `idx` to the next increasing index tuple of size at most `max`
/// (by size, then lexicographically).
fn next_subset(idx: &mut Vec<usize>, total: usize, max: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < total - (k - i) {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    if k < max && k < total {
        *idx = (0..k + 1).collect();
        return true;
    }
    false
}

/// Samples the structural properties the feasibility argument rests on.
fn claim_checks(cert: &SaCertificate, cache: &mut XCache, rng: &mut SeededRng, samples: usize) -> Result<Vec<Check>> {
    let (n, s, r) = (cert.n, cert.s, cert.rounds);
    let g = cert.graph();
    let alpha = cert.sa_alpha.clone();
    let growth = &cert.sa_beta * &cert.theta * &cert.theta;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let zero = BigRational::zero();
    let mut forced = Family::new("forced_neighbor_equal");
    let mut decay = Family::new("exponential_decay");
    let mut zero_fam = Family::new("zero_on_neighbor");
    let mut grow = Family::new("left_growth");
    let mut bounds = Family::new("disjoint_bounds");
    let mut mono = Family::new("cost_monotone");
    let val = |cache: &mut XCache, set: &[Vertex]| -> Result<BigRational> {
        let m = cache.x(canon(set))?;
        Ok(cert.eval(&vec![(m, 1)]))
    };
    let nbrs_of = |set: &[Vertex]| -> Vec<usize> {
        let su: Vec<usize> = set.iter().filter_map(|w| if let Vertex::U(u) = w { Some(*u) } else { None }).collect();
        g.neighborhood(&su)
    };
    let with_left = |rng: &mut SeededRng, size: usize| -> Option<Vec<Vertex>> {
        let u = rng.random_range(0..n);
        if g.left_degree(u) == 0 || size == 0 {
            return None;
        }
        let mut set = random_set(rng, n, s, size - 1);
        set.retain(|w| *w != Vertex::U(u));
        set.push(Vertex::U(u));
        Some(set)
    };
    for _ in 0..samples {
        // x_{S+w} = x_S when w is a right neighbour of S_U
        let size = rng.random_range(1..=r);
        if let Some(set) = with_left(rng, size) {
            let nb = nbrs_of(&set);
            let cands: Vec<usize> = nb.into_iter().filter(|v| !set.contains(&Vertex::V(*v))).collect();
            if !cands.is_empty() {
                let w = Vertex::V(cands[rng.random_range(0..cands.len())]);
                let mut big = set.clone();
                big.push(w);
                forced.eq(&val(cache, &big)?, &val(cache, &set)?);
            }
        }

        // x_{S+w} <= alpha x_S otherwise
        let size = rng.random_range(0..=r);
        let set = random_set(rng, n, s, size);
        let w = random_vertex(rng, n, s);
        let nb = nbrs_of(&set);
        let forced_w = matches!(w, Vertex::V(v) if nb.binary_search(&v).is_ok());
        if !set.contains(&w) && !forced_w {
            let mut big = set.clone();
            big.push(w);
            decay.ge(&(&alpha * val(cache, &set)?), &val(cache, &big)?);
        }

        // x_{S,T} = 0 when T meets N(S_U)
        let size = rng.random_range(1..=r);
        if let Some(set) = with_left(rng, size) {
            let nb = nbrs_of(&set);
            let v = Vertex::V(nb[rng.random_range(0..nb.len())]);
            if !set.contains(&v) {
                let room = r + 1 - set.len() - 1;
                let size = rng.random_range(0..=room);
                let mut t = random_set(rng, n, s, size);
                t.retain(|x| !set.contains(x));
                t.push(v);
                let lin = cache.lift(&canon(&set), &canon(&t))?;
                zero_fam.eq(&cert.eval(&lin), &zero);
            }
        }

        // x_{S+u} >= beta / sqrt(n) x_S
        let size = rng.random_range(0..=r);
        let set = random_set(rng, n, s, size);
        let u = Vertex::U(rng.random_range(0..n));
        let mut big = set.clone();
        big.push(u);
        grow.ge(&val(cache, &big)?, &(&growth * val(cache, &set)?));

        // x_S / 2 <= x_{S,T} <= x_S for disjoint S, T with T outside N(S_U)
        let size = rng.random_range(1..=r + 1);
        let w = random_set(rng, n, s, size);
        let cut = rng.random_range(0..w.len());
        let (ss, mut tt) = (canon(&w[..cut]), w[cut..].to_vec());
        let nb = nbrs_of(&ss);
        tt.retain(|x| !matches!(x, Vertex::V(v) if nb.binary_search(v).is_ok()));
        let xs = val(cache, &ss)?;
        let lift = cert.eval(&cache.lift(&ss, &canon(&tt))?);
        bounds.ge(&lift, &(&half * &xs));
        bounds.ge(&xs, &lift);

        // cost(S) <= cost(S~) for S ⊆ S~
        let size = rng.random_range(0..=r + 1);
        let big = random_set(rng, n, s, size);
        let cut = rng.random_range(0..=big.len());
        let a = cache.x(canon(&big[..cut]))?.t;
        let b = cache.x(canon(&big))?.t;
        mono.flag(a <= b);
    }
    Ok(vec![forced.finish(), decay.finish(), zero_fam.finish(), grow.finish(), bounds.finish(), mono.finish()])
}
