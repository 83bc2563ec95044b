//! Integrality-gap certificates for the SDP and Sherali–Adams relaxations,
//! the random-instance property checker and the hardness exponent calculator.

mod biregular;
mod cover;
mod gapcalc;
mod properties;
mod sa;
mod sdp;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

pub use biregular::{biregularize, cap_degrees};
pub use cover::{cover_cost, CoverOracle, Vertex};
pub use gapcalc::{hardness_gap_calculator, parse_rational, Exponent, GapRegime, GapReport};
pub use properties::{check_instance_properties, PropertiesReport};
pub use sa::{
    build_sa_certificate, sa_lift_value, verify_sa_certificate, SaCertificate, SaMode, SaReport,
};
pub use sdp::{build_sdp_certificate, build_sdp_instance, verify_sdp_certificate, SdpCertificate, SdpInstance};

/// One verified constraint family. `slack` is `lhs - rhs` for inequalities
/// and `-|lhs - rhs|` for identities, taken at the worst member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub passed: bool,
    /// Number of individual constraints covered by this entry.
    pub count: u64,
}

impl Check {
    /// Amount by which the check is violated; zero when it passed.
    pub fn violation(&self) -> f64 {
        if self.passed {
            0.0
        } else {
            (-self.slack).max(f64::MIN_POSITIVE)
        }
    }
}

/// Collection of checks. Tolerances are applied inside each check (exact
/// checks use none), so `passed` holds iff `max_violation` is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub max_violation: f64,
    pub passed: bool,
}

impl VerifyReport {
    pub fn new(checks: Vec<Check>) -> Self {
        let max_violation = checks.iter().map(Check::violation).fold(0.0, f64::max);
        let passed = checks.iter().all(|c| c.passed);
        Self { checks, max_violation, passed }
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }
}

/// Nearest `f64`, saturating to infinity.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// Accumulates one constraint family, keeping the worst member.
pub(crate) struct Family {
    id: String,
    worst: Option<(f64, f64, f64)>,
    passed: bool,
    count: u64,
}

impl Family {
    pub(crate) fn new(id: &str) -> Self {
        Self { id: id.to_string(), worst: None, passed: true, count: 0 }
    }

    fn record(&mut self, lhs: f64, rhs: f64, slack: f64, ok: bool) {
        self.count += 1;
        self.passed &= ok;
        let replace = match self.worst {
            None => true,
            Some((_, _, w)) => slack < w || (!ok && w >= 0.0 && slack >= 0.0),
        };
        if replace {
            self.worst = Some((lhs, rhs, slack));
        }
    }

    pub(crate) fn eq(&mut self, lhs: &BigRational, rhs: &BigRational) {
        let d = to_f64(&(lhs - rhs).abs());
        self.record(to_f64(lhs), to_f64(rhs), -d, lhs == rhs);
    }

    pub(crate) fn ge(&mut self, lhs: &BigRational, rhs: &BigRational) {
        self.record(to_f64(lhs), to_f64(rhs), to_f64(&(lhs - rhs)), lhs >= rhs);
    }

    pub(crate) fn ge_f64(&mut self, lhs: f64, rhs: f64) {
        self.record(lhs, rhs, lhs - rhs, lhs >= rhs);
    }

    pub(crate) fn flag(&mut self, ok: bool) {
        self.record(if ok { 0.0 } else { 1.0 }, 0.0, if ok { 0.0 } else { -1.0 }, ok);
    }

    pub(crate) fn finish(self) -> Check {
        let (lhs, rhs, slack) = self.worst.unwrap_or((0.0, 0.0, 0.0));
        Check { id: self.id, lhs, rhs, slack, passed: self.passed, count: self.count }
    }
}
