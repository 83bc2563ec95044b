use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gen::gen_gap_instance;
use crate::graph::BipartiteGraph;

use super::biregular::{biregularize, cap_degrees};
use super::{to_f64, Check, Family, VerifyReport};

fn int(x: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Gram-matrix certificate for the standard SSBVE vector relaxation on a
/// biregular graph. Matrix entries are produced on demand from the degrees,
/// the adjacency and the common-neighbour counts.
#[derive(Debug, Clone)]
pub struct SdpCertificate {
    pub n: usize,
    pub s: usize,
    pub k: usize,
    pub d_l: usize,
    pub d_r: usize,
    pub sdp_alpha: BigRational,
    pub tau: BigRational,
    /// Row-major `n x n` common-neighbour counts.
    pub nu: Vec<u32>,
    graph: BipartiteGraph,
}

impl SdpCertificate {
    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    pub fn nu(&self, u1: usize, u2: usize) -> u32 {
        self.nu[u1 * self.n + u2]
    }

    /// `alpha k^2 / (d_L (d_R - 1) n)`
    pub fn nu_coef(&self) -> BigRational {
        &self.sdp_alpha * int(self.k * self.k) / int(self.d_l * (self.d_r - 1) * self.n)
    }

    /// `((1 - alpha) k^2 - k) / (n (n - 1))`
    pub fn a_base(&self) -> BigRational {
        ((BigRational::one() - &self.sdp_alpha) * int(self.k * self.k) - int(self.k)) / int(self.n * (self.n - 1))
    }

    /// `k / n`
    pub fn a_diag(&self) -> BigRational {
        BigRational::new(BigInt::from(self.k), BigInt::from(self.n))
    }

    /// `k (tau - d_R/n) / (n - d_R)`
    pub fn c_off(&self) -> BigRational {
        int(self.k) * (&self.tau - BigRational::new(BigInt::from(self.d_r), BigInt::from(self.n)))
            / int(self.n - self.d_r)
    }

    pub fn a(&self, u1: usize, u2: usize) -> BigRational {
        if u1 == u2 {
            self.a_diag()
        } else {
            self.nu_coef() * int(self.nu(u1, u2) as usize) + self.a_base()
        }
    }

    pub fn b(&self, v1: usize, v2: usize) -> BigRational {
        if v1 == v2 {
            self.tau.clone()
        } else {
            &self.tau / int(2)
        }
    }

    pub fn c(&self, u: usize, v: usize) -> BigRational {
        if self.graph.has_edge(u, v) {
            self.a_diag()
        } else {
            self.c_off()
        }
    }

    /// Relaxation value `sum_v |v|^2 = s tau`.
    pub fn objective(&self) -> BigRational {
        int(self.s) * &self.tau
    }

    /// The full `(n + s)`-square Gram matrix in floating point.
    pub fn gram_f64(&self) -> DMatrix<f64> {
        let (n, s) = (self.n, self.s);
        let coef = to_f64(&self.nu_coef());
        let base = to_f64(&self.a_base());
        let diag = to_f64(&self.a_diag());
        let c_off = to_f64(&self.c_off());
        let tau = to_f64(&self.tau);
        DMatrix::from_fn(n + s, n + s, |i, j| match (i < n, j < n) {
            (true, true) if i == j => diag,
            (true, true) => coef * self.nu(i, j) as f64 + base,
            (true, false) => {
                if self.graph.has_edge(i, j - n) {
                    diag
                } else {
                    c_off
                }
            }
            (false, true) => {
                if self.graph.has_edge(j, i - n) {
                    diag
                } else {
                    c_off
                }
            }
            (false, false) if i == j => tau,
            (false, false) => tau / 2.0,
        })
    }
}

/// A biregular gap instance ready for the SDP certificate.
#[derive(Debug, Clone)]
pub struct SdpInstance {
    pub graph: BipartiteGraph,
    /// Sampling degree before regularization (even).
    pub d_l_base: usize,
    pub d_r_base: usize,
    /// Degrees after regularization, `3/2` of the base ones.
    pub d_l: usize,
    pub d_r: usize,
}

/// Samples the `(n, s, d_L/s)` random graph with the smallest even `d_L >= d_l_min`
/// for which `d_R = n d_L / s` is an even integer, caps degrees at `3d_L/2` and
/// `3d_R/2`, and completes the graph to exactly those degrees.
pub fn build_sdp_instance(n: usize, s: usize, d_l_min: usize, seed: u64) -> Result<SdpInstance> {
    if n == 0 || s == 0 {
        return Err(Error::ParameterRegime("empty side".into()));
    }
    let d_l = (d_l_min.max(2)..=2 * s / 3)
        .filter(|d| d % 2 == 0)
        .find(|d| (n * d) % s == 0 && (n * d / s) % 2 == 0)
        .ok_or_else(|| {
            Error::ParameterRegime(format!("no even d_L in [{d_l_min}, 2s/3] gives an even integer d_R for n={n}, s={s}"))
        })?;
    let d_r = n * d_l / s;
    let g = gen_gap_instance(n, s, d_l as f64, seed)?;
    let capped = cap_degrees(&g, 3 * d_l / 2, 3 * d_r / 2);
    let graph = biregularize(&capped, 3 * d_l / 2, 3 * d_r / 2)?;
    Ok(SdpInstance { graph, d_l_base: d_l, d_r_base: d_r, d_l: 3 * d_l / 2, d_r: 3 * d_r / 2 })
}

fn common(a: &[usize], b: &[usize]) -> u32 {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Builds the certificate for a biregular graph and budget `k`.
///
/// Rejects the parameters unless `k < (n-1)/2`, `tau < 1/8` and
/// `2 alpha k s <= d_L n`, naming the first inequality that fails.
pub fn build_sdp_certificate(g: &BipartiteGraph, k: usize) -> Result<SdpCertificate> {
    let (n, s) = (g.n(), g.n_right());
    if n < 2 || s == 0 {
        return Err(Error::ParameterRegime("graph too small".into()));
    }
    let d_l = g.left_degree(0);
    let d_r = g.right_degree(0);
    if (0..n).any(|u| g.left_degree(u) != d_l) || (0..s).any(|v| g.right_degree(v) != d_r) {
        return Err(Error::ParameterRegime("graph is not biregular".into()));
    }
    if d_l == 0 || d_r < 2 || d_r >= n {
        return Err(Error::ParameterRegime(format!("need d_L >= 1 and 2 <= d_R < n, got d_L={d_l}, d_R={d_r}")));
    }
    if k == 0 || 2 * k + 1 >= n {
        return Err(Error::ParameterRegime(format!("k < (n-1)/2 fails: k={k}, n={n}")));
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let ratio = BigRational::new(BigInt::from(d_l * n), BigInt::from(k * s));
    let sdp_alpha = &half * ratio.min(BigRational::one());
    let tau = int(2 * d_l * d_l) / (&sdp_alpha * int(s));
    if tau >= BigRational::new(BigInt::from(1), BigInt::from(8)) {
        return Err(Error::ParameterRegime(format!("tau < 1/8 fails: tau = {tau}")));
    }
    if int(2) * &sdp_alpha * int(k * s) > int(d_l * n) {
        return Err(Error::ParameterRegime("2 alpha k s <= d_L n fails".into()));
    }
    let mut nu = vec![0u32; n * n];
    for u1 in 0..n {
        nu[u1 * n + u1] = d_l as u32;
        for u2 in u1 + 1..n {
            let c = common(g.left_neighbors(u1), g.left_neighbors(u2));
            nu[u1 * n + u2] = c;
            nu[u2 * n + u1] = c;
        }
    }
    Ok(SdpCertificate { n, s, k, d_l, d_r, sdp_alpha, tau, nu, graph: g.clone() })
}

/// Checks every constraint of the relaxation and positive semidefiniteness.
///
/// Constraint identities, nonnegativity and the decomposition
/// `X = Y + Z + sum_v X^(v)` with its 2x2 witnesses are checked in exact
/// rational arithmetic. The smallest eigenvalue of `X` is cross-checked
/// numerically against `-1e-9 * |X|`.
pub fn verify_sdp_certificate(cert: &SdpCertificate) -> VerifyReport {
    let (n, s, k) = (cert.n, cert.s, cert.k);
    let g = &cert.graph;
    let kq = int(k);
    let diag = cert.a_diag();
    let coef = cert.nu_coef();
    let base = cert.a_base();
    let c_off = cert.c_off();
    let tau = cert.tau.clone();
    let half_tau = &tau / int(2);
    let d_l = int(cert.d_l);
    let mut checks: Vec<Check> = Vec::new();

    let mut trace = Family::new("sum_u_norm_sq_eq_k");
    let trace_sum = (0..n).fold(BigRational::zero(), |acc, u| acc + cert.a(u, u));
    trace.eq(&trace_sum, &kq);
    checks.push(trace.finish());

    let mut edge = Family::new("edge_inner_eq_norm_sq");
    for (u, v) in g.edges() {
        edge.eq(&cert.c(u, v), &cert.a(u, u));
    }
    checks.push(edge.finish());

    // Row sums of A grouped by off-diagonal value; entries with equal nu are equal.
    let mut row_u = Family::new("u_inner_v0_eq_norm_sq");
    let mut total = BigRational::zero();
    let mut nu_values: BTreeMap<u32, u64> = BTreeMap::new();
    for u in 0..n {
        let mut hist: BTreeMap<u32, usize> = BTreeMap::new();
        for u2 in (0..n).filter(|&u2| u2 != u) {
            *hist.entry(cert.nu(u, u2)).or_default() += 1;
        }
        let mut sum = cert.a(u, u);
        for (&nv, &cnt) in &hist {
            *nu_values.entry(nv).or_default() += cnt as u64;
            sum += (&coef * int(nv as usize) + &base) * int(cnt);
        }
        total += &sum;
        row_u.eq(&(sum / &kq), &cert.a(u, u));
    }
    checks.push(row_u.finish());

    let mut row_v = Family::new("v_inner_v0_eq_norm_sq");
    for v in 0..s {
        let on = (0..n).filter(|&u| g.has_edge(u, v)).count();
        let sum = &diag * int(on) + &c_off * int(n - on);
        row_v.eq(&(sum / &kq), &cert.b(v, v));
    }
    checks.push(row_v.finish());

    let mut v0 = Family::new("v0_norm_sq_eq_1");
    v0.eq(&(total / (&kq * &kq)), &BigRational::one());
    checks.push(v0.finish());

    let zero = BigRational::zero();
    let mut nonneg = Family::new("entries_nonnegative");
    nonneg.ge(&diag, &zero);
    for &nv in nu_values.keys() {
        nonneg.ge(&(&coef * int(nv as usize) + &base), &zero);
    }
    nonneg.ge(&tau, &zero);
    nonneg.ge(&half_tau, &zero);
    nonneg.ge(&c_off, &zero);
    checks.push(nonneg.finish());

    let mut c_pos = Family::new("off_edge_c_positive");
    c_pos.flag(c_off > zero);
    checks.push(c_pos.finish());

    let four = int(4);
    let mx = |a: BigRational, b: BigRational| if a >= b { a } else { b };
    let mut tau_id = Family::new("tau_identity");
    let tau_rhs = &four
        * mx(&d_l * &d_l / int(s), &d_l * int(k) / int(n));
    tau_id.eq(&tau, &tau_rhs);
    checks.push(tau_id.finish());

    let mut obj = Family::new("objective_identity");
    let obj_sum = (0..s).fold(BigRational::zero(), |acc, v| acc + cert.b(v, v));
    obj.eq(&obj_sum, &(&four * mx(&d_l * &d_l, &d_l * int(k * s) / int(n))));
    checks.push(obj.finish());

    checks.extend(decomposition_checks(cert));
    checks.push(eigen_check(cert));
    VerifyReport::new(checks)
}

/// Rebuilds `Y`, `Z` and every `X^(v)` and compares against `X` case by case.
fn decomposition_checks(cert: &SdpCertificate) -> Vec<Check> {
    let (n, s) = (cert.n, cert.s);
    let g = &cert.graph;
    let m1_a = cert.nu_coef();
    let m1_b = cert.a_diag() - cert.c_off();
    let half_tau = &cert.tau / int(2);
    let y_uu = cert.a_base();
    let y_uv = cert.c_off();
    let zeta = cert.a_diag()
        - &cert.sdp_alpha * int(cert.k * cert.k) / int((cert.d_r - 1) * n)
        - cert.a_base();
    let zero = BigRational::zero();

    // Sum of X^(v) over all v: each block adds m1_a on N(v) x N(v),
    // m1_b on N(v) x {v} and tau/2 at (v, v).
    let mut uu = vec![0u32; n * n];
    let mut uv = vec![false; n * s];
    let mut vv = vec![0u32; s];
    for v in 0..s {
        let nb = g.right_neighbors(v);
        for &a in nb {
            for &b in nb {
                uu[a * n + b] += 1;
            }
            uv[a * s + v] = true;
        }
        vv[v] += 1;
    }

    let mut fam = Family::new("decomposition_identity");
    let mut seen: BTreeMap<(bool, u32, u32), ()> = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            let key = (a == b, uu[a * n + b], cert.nu(a, b));
            if seen.insert(key, ()).is_some() {
                continue;
            }
            let mut rebuilt = &m1_a * int(key.1 as usize) + &y_uu;
            if a == b {
                rebuilt += &zeta;
            }
            fam.eq(&rebuilt, &cert.a(a, b));
        }
    }
    let mut seen_uv: BTreeMap<(bool, bool), ()> = BTreeMap::new();
    for u in 0..n {
        for v in 0..s {
            let key = (uv[u * s + v], g.has_edge(u, v));
            if seen_uv.insert(key, ()).is_some() {
                continue;
            }
            let rebuilt = if key.0 { &m1_b + &y_uv } else { y_uv.clone() };
            fam.eq(&rebuilt, &cert.c(u, v));
        }
    }
    let mut seen_vv: BTreeMap<(bool, u32), ()> = BTreeMap::new();
    for v1 in 0..s {
        for v2 in 0..s {
            let key = (v1 == v2, if v1 == v2 { vv[v1] } else { 0 });
            if seen_vv.insert(key, ()).is_some() {
                continue;
            }
            let x = &half_tau * int(key.1 as usize);
            fam.eq(&(x + &half_tau), &cert.b(v1, v2));
        }
    }
    let mut out = vec![fam.finish()];

    let mut m1_diag = Family::new("m1_diagonal_positive");
    m1_diag.flag(m1_a > zero && half_tau > zero);
    out.push(m1_diag.finish());
    let mut m1_det = Family::new("m1_determinant_nonnegative");
    m1_det.ge(&(&m1_a * &half_tau), &(&m1_b * &m1_b));
    out.push(m1_det.finish());
    let mut m2_diag = Family::new("m2_diagonal_nonnegative");
    m2_diag.ge(&y_uu, &zero);
    m2_diag.ge(&half_tau, &zero);
    out.push(m2_diag.finish());
    let mut m2_det = Family::new("m2_determinant_nonnegative");
    m2_det.ge(&(&y_uu * &half_tau), &(&y_uv * &y_uv));
    out.push(m2_det.finish());
    let mut z = Family::new("zeta_nonnegative");
    z.ge(&zeta, &zero);
    out.push(z.finish());
    out
}

fn eigen_check(cert: &SdpCertificate) -> Check {
    let x = cert.gram_f64();
    let eig = x.symmetric_eigenvalues();
    let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let norm = eig.iter().map(|e| e.abs()).fold(0.0, f64::max);
    let mut fam = Family::new("min_eigenvalue");
    fam.ge_f64(min, -1e-9 * norm);
    fam.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance() -> SdpInstance {
        let inst = build_sdp_instance(512, 512, 2, 7).unwrap();
        assert_eq!((inst.d_l, inst.d_r), (3, 3));
        inst
    }

    fn valid() -> SdpCertificate {
        build_sdp_certificate(&instance().graph, 4).unwrap()
    }

    #[test]
    fn alpha_half_branch() {
        let cert = build_sdp_certificate(&instance().graph, 2).unwrap();
        // d_L n >= k s, so alpha = 1/2 and tau = 4 d_L^2 / s
        assert_eq!(cert.sdp_alpha, BigRational::new(1.into(), 2.into()));
        assert_eq!(cert.tau, BigRational::new(36.into(), 512.into()));
        assert_eq!(cert.objective(), int(36));
        // (1 - alpha) k^2 = k leaves the Y block without room for the cross term
        let report = verify_sdp_certificate(&cert);
        assert!(!report.get("m2_determinant_nonnegative").unwrap().passed);
    }

    #[test]
    fn alpha_min_branch() {
        let cert = valid();
        assert_eq!(cert.sdp_alpha, BigRational::new(3.into(), 8.into()));
        assert_eq!(cert.objective(), int(48));
    }

    #[test]
    fn valid_regime_passes() {
        let report = verify_sdp_certificate(&valid());
        assert!(report.passed, "{:?}", report.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        assert_eq!(report.max_violation, 0.0);
    }

    #[test]
    fn entries_match_dense_matrix() {
        let cert = valid();
        let x = cert.gram_f64();
        for (i, j) in [(0, 1), (3, 3), (5, 512 + 3), (512 + 1, 512 + 2), (512 + 4, 512 + 4)] {
            let exact = match (i < 512, j < 512) {
                (true, true) => cert.a(i, j),
                (true, false) => cert.c(i, j - 512),
                _ => cert.b(i - 512, j - 512),
            };
            assert!((x[(i, j)] - to_f64(&exact)).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_regimes() {
        let g = build_sdp_instance(64, 8, 2, 1).unwrap().graph;
        assert!(matches!(build_sdp_certificate(&g, 4), Err(Error::ParameterRegime(_))));
        let not_bireg = BipartiteGraph::from_edges(4, 2, &[(0, 0), (1, 0), (2, 1)]).unwrap();
        assert!(matches!(build_sdp_certificate(&not_bireg, 1), Err(Error::ParameterRegime(_))));
    }

    #[test]
    fn tampered_certificate_fails() {
        let mut cert = valid();
        cert.tau = &cert.tau + BigRational::new(1.into(), 1000.into());
        let report = verify_sdp_certificate(&cert);
        assert!(!report.passed);
        assert!(!report.get("tau_identity").unwrap().passed);
        assert!(report.max_violation > 0.0);
    }
}
