use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step {
    First,
    Hair,
    Backbone,
    Final,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaterpillarSchedule {
    pub p: u32,
    pub q: u32,
    pub steps: Vec<Step>,
}

impl CaterpillarSchedule {
    pub fn hair_count(&self) -> usize {
        self.steps.iter().filter(|s| **s == Step::Hair).count()
    }
}

/// Step `j` in `2..q` is a hair iff `((j-1)p/q, jp/q)` contains an integer.
pub fn caterpillar_schedule(p: u32, q: u32) -> Result<CaterpillarSchedule> {
    if p == 0 || p >= q || p.gcd(&q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    let mut steps = vec![Step::First];
    for j in 2..q {
        // an integer m with (j-1)p < mq < jp
        let lo = (j - 1) * p;
        let hi = j * p;
        let m = lo / q + 1;
        steps.push(if m * q < hi { Step::Hair } else { Step::Backbone });
    }
    steps.push(Step::Final);
    Ok(CaterpillarSchedule { p, q, steps })
}

/// Nearest `p/q` in `(0, 1)` with `q <= q_max`, preferring the smaller `q` on ties.
pub fn snap_alpha(alpha: f64, q_max: u32) -> (u32, u32) {
    let mut best = (1, 2);
    let mut best_err = f64::INFINITY;
    for q in 2..=q_max.max(2) {
        for p in 1..q {
            if p.gcd(&q) != 1 {
                continue;
            }
            let err = (alpha - p as f64 / q as f64).abs();
            if err < best_err - 1e-12 {
                best = (p, q);
                best_err = err;
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_schedules() {
        assert_eq!(caterpillar_schedule(1, 2).unwrap().steps, vec![Step::First, Step::Final]);
        assert_eq!(
            caterpillar_schedule(1, 3).unwrap().steps,
            vec![Step::First, Step::Backbone, Step::Final]
        );
        assert_eq!(caterpillar_schedule(2, 3).unwrap().steps, vec![Step::First, Step::Hair, Step::Final]);
        assert!(caterpillar_schedule(2, 4).is_err());
        assert!(caterpillar_schedule(3, 3).is_err());
    }

    #[test]
    fn snapping() {
        assert_eq!(snap_alpha(0.5, 2), (1, 2));
        assert_eq!(snap_alpha(0.7, 3), (2, 3));
        assert_eq!(snap_alpha(0.3, 3), (1, 3));
        assert_eq!(snap_alpha(0.01, 3), (1, 3));
    }
}
