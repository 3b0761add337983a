//! `bound` subcommand logic.

use qpl_core::bounds::{coherent_info_upper_bound, critical_depth, max_recoverable_rate, BoundForm, BoundQuery};
use serde::Serialize;

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundRequest {
    /// Upper bound on `I_c` in bits.
    Value { n: usize, k: usize, p: f64, d: usize, form: BoundForm },
    CriticalDepth { p: f64, r: f64 },
    MaxRate { p: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundAnswer {
    pub quantity: &'static str,
    /// `None` when the threshold is infinite (`p = 0`).
    pub value: Option<f64>,
}

pub fn evaluate(req: BoundRequest) -> Result<BoundAnswer> {
    let (quantity, value) = match req {
        BoundRequest::Value { n, k, p, d, form } => {
            let q = BoundQuery::new(n, k, p, d)?;
            let name = match form {
                BoundForm::Exponential => "coherent_info_upper_bound",
                BoundForm::Sharp => "coherent_info_upper_bound_sharp",
            };
            (name, Some(coherent_info_upper_bound(&q, form)?))
        }
        BoundRequest::CriticalDepth { p, r } => {
            let t = critical_depth(p, r)?;
            ("critical_depth", (!t.is_unbounded()).then(|| t.value()))
        }
        BoundRequest::MaxRate { p } => {
            let t = max_recoverable_rate(p)?;
            ("max_recoverable_rate", (!t.is_unbounded()).then(|| t.value()))
        }
    };
    Ok(BoundAnswer { quantity, value })
}

impl std::fmt::Display for BoundAnswer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.value {
            Some(v) => write!(f, "{} = {v}", self.quantity),
            None => write!(f, "{} = inf", self.quantity),
        }
    }
}
